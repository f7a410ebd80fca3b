use std::process::{Command, Output};

fn sl2lin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl2lin")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn passing_suite_exits_zero_with_json() {
    let o = sl2lin(&["--suite", "schedule", "--grid", "65", "--samples", "20"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.trim_start().starts_with('{'));
    assert!(out.contains("\"pass\": true"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0 hard failures"));
}

#[test]
fn csv_report_to_a_file() {
    let path = std::env::temp_dir().join(format!("sl2lin-cli-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = sl2lin(&["--suite", "schedule", "--format", "csv", "--out", p]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("suite,name,tag,measured,relation,tolerance,hard,pass\n"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("schedule,")));
}

#[test]
fn tightened_tolerances_exit_one() {
    let o = sl2lin(&["--suite", "flow", "--samples", "20", "--tol-scale", "1e-12"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["--suite", "bogus"][..],
        &["--grid", "32"],
        &["--samples", "0"],
        &["--slb", "1,2"],
        &["--format", "xml"],
    ] {
        assert_eq!(code(&sl2lin(args)), 2, "{args:?}");
    }
}

#[test]
fn seed_and_slb_are_reported() {
    let o = sl2lin(&["--suite", "schedule", "--seed", "11", "--slb", "0,5,35"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("\"seed\": 11"));
    assert!(out.contains("\"c\": 35"));
}
