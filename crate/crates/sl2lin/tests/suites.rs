use sl2lin::suites::{run_suite, Suite, SuiteConfig};

fn cfg(suite: Suite) -> SuiteConfig {
    SuiteConfig { suite, grid: 65, samples: 40, ..SuiteConfig::default() }
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL.iter().chain([Suite::All].iter()) {
        assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        assert_eq!(s.to_string(), s.name());
    }
    assert!("nope".parse::<Suite>().is_err());
}

#[test]
fn invalid_configurations_are_rejected() {
    let base = cfg(Suite::Schedule);
    for bad in [
        SuiteConfig { grid: 64, ..base },
        SuiteConfig { grid: 31, ..base },
        SuiteConfig { samples: 0, ..base },
        SuiteConfig { tol_scale: 0.0, ..base },
        SuiteConfig { tol_scale: f64::NAN, ..base },
    ] {
        assert!(bad.validate().is_err(), "{bad:?}");
        assert!(run_suite(&bad).is_err());
    }
    assert!(base.validate().is_ok());
}

#[test]
fn reports_are_deterministic_and_seed_dependent() {
    for s in [Suite::Flow, Suite::Foliation, Suite::Schedule] {
        let a = run_suite(&cfg(s)).unwrap();
        let b = run_suite(&cfg(s)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.pass, "{s}: {:?}", a.failures().map(|c| &c.name).collect::<Vec<_>>());
    }
    let a = run_suite(&cfg(Suite::Flow)).unwrap();
    let c = run_suite(&SuiteConfig { seed: 8, ..cfg(Suite::Flow) }).unwrap();
    assert_ne!(a.to_json(), c.to_json());
}

#[test]
fn report_formats() {
    let r = run_suite(&cfg(Suite::Schedule)).unwrap();
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["checks"].as_array().unwrap().len(), r.checks.len());
    assert_eq!(json["config"]["suite"], "schedule");
    assert_eq!(json["pass"], true);
    let csv = r.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "suite,name,tag,measured,relation,tolerance,hard,pass");
    assert_eq!(lines.count(), r.checks.len());
    assert!(r.find("derived constants for (1,21,167)").unwrap().pass);
    assert_eq!(r.hard_failures, 0);
}

#[test]
fn tightened_tolerances_produce_hard_failures() {
    let r = run_suite(&SuiteConfig { tol_scale: 1e-12, ..cfg(Suite::Flow) }).unwrap();
    assert!(!r.pass);
    assert_eq!(r.hard_failures, r.failures().count());
    assert!(r.hard_failures > 0);
}
