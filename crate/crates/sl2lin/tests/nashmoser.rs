use sl2lin::field::FieldHandle;
use sl2lin::foliation::{pi, pi_field};
use sl2lin::nashmoser::{
    derive_constants, flow_of_field, ledger_verify, maurer_cartan_residual, pullback_by_flow, run, schedules,
    CocycleStub, IdentitySmoothing, SlbTriple,
};
use sl2lin::tensor::{Point, PointTensor, Variance, DIM};

const CONTRA: Variance = Variance::Contravariant;

/// The ledger inequalities in `i128`, in the order the library reports them.
fn ledger_oracle(p: i128, xa: i128, ya: i128, xb: i128, yb: i128, xc: i128, yc: i128, al: i128) -> Vec<bool> {
    let d = yc - ya;
    vec![
        2 * (13 * p * p + 2 * p - 1) < al,
        2 * (24 * p * p - 9 * p - 1) < al,
        2 * (12 * p * p + 13 * p - 1) < al,
        5 * al < 264 * p * p,
        5 * al < 2 * (yc - 2 * p * p),
        d > 0 && 24 * p * p * d + 4 * al * (yb - ya + p - 1) < 3 * al * d,
        4 * p < xb - xa,
        (p - 1) * xa <= ya,
        22 * p <= ya,
        xa + p <= xc,
        xc <= xa + p,
        ya + (p - 1) * (xb - p + 1) - 22 * p <= yb,
        2 * p + (p - 1) * (xb - p + 1) <= yb,
        3 * p < ya,
        4 * p * (p - 1) + 3 < al,
    ]
}

#[test]
fn constants_and_ledger_over_a_sweep_of_triples() {
    for a in [0u64, 1, 7, 40] {
        for b in [0u64, 5, 21, 60] {
            for c in [0u64, 35, 167] {
                let s = derive_constants(SlbTriple::new(a, b, c));
                let p = (a + c + 1).max(b + 1).max(22);
                assert_eq!(s.p, p);
                assert_eq!([s.x_a, s.y_a, s.x_b, s.y_b, s.x_c, s.y_c, s.alpha], [p, p * p, 13 * p, 13 * p * p, 2 * p, 130 * p * p, 50 * p * p]);
                let v = |u: u64| u as i128;
                let expect = ledger_oracle(v(p), v(s.x_a), v(s.y_a), v(s.x_b), v(s.y_b), v(s.x_c), v(s.y_c), v(s.alpha));
                let rep = ledger_verify(&s);
                let got: Vec<bool> = rep.entries.iter().map(|e| e.pass).collect();
                assert_eq!(got, expect, "triple ({a},{b},{c})");
                assert!(rep.pass);
            }
        }
    }
}

#[test]
fn tampered_alpha_breaks_the_first_three_inequalities() {
    let mut s = derive_constants(SlbTriple::new(1, 21, 167));
    assert_eq!(s.p, 169);
    assert_eq!(s.alpha, 1_428_050);
    s.alpha = 10 * s.p * s.p;
    let rep = ledger_verify(&s);
    assert!(!rep.pass);
    let failed: Vec<usize> = rep.entries.iter().enumerate().filter(|(_, e)| !e.pass).map(|(i, _)| i).collect();
    assert_eq!(failed, vec![0, 1, 2]);
    let v = |u: u64| u as i128;
    let oracle = ledger_oracle(v(s.p), v(s.x_a), v(s.y_a), v(s.x_b), v(s.y_b), v(s.x_c), v(s.y_c), v(s.alpha));
    assert_eq!(oracle.iter().filter(|b| !**b).count(), 3);
}

#[test]
fn schedules_follow_their_closed_forms() {
    let s = derive_constants(SlbTriple::new(0, 0, 0));
    for i in 0..12 {
        let sc = schedules(&s, i).unwrap();
        assert!((sc.r_i - (1.0 + 1.0 / (i as f64 + 1.0))).abs() < 1e-15);
        let expect = 2f64.powf(1.5f64.powi(i as i32));
        assert!((sc.t_i / expect - 1.0).abs() < 1e-12);
    }
    assert!(schedules(&s.with_radii(2.0, 1.0), 0).is_err());
    assert!(schedules(&s.with_t0(0.5), 0).is_err());
}

/// `exp(m)` by Taylor series.
fn expm(m: &[[f64; DIM]; DIM]) -> [[f64; DIM]; DIM] {
    let mut out = [[0.0; DIM]; DIM];
    let mut term = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        out[i][i] = 1.0;
        term[i][i] = 1.0;
    }
    for k in 1..40 {
        let mut next = [[0.0; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                next[i][j] = (0..DIM).map(|l| term[i][l] * m[l][j]).sum::<f64>() / k as f64;
            }
        }
        term = next;
        for i in 0..DIM {
            for j in 0..DIM {
                out[i][j] += term[i][j];
            }
        }
    }
    out
}

fn linear_generator() -> [[f64; DIM]; DIM] {
    let mut m = [[0.0; DIM]; DIM];
    m[0][1] = 0.3;
    m[1][0] = -0.2;
    m[2][4] = 0.1;
    m[3][3] = -0.25;
    m[5][0] = 0.15;
    m
}

fn linear_field(m: [[f64; DIM]; DIM]) -> FieldHandle {
    FieldHandle::new(move |x: &Point| {
        let v: [f64; DIM] = std::array::from_fn(|i| (0..DIM).map(|j| m[i][j] * x[j]).sum());
        PointTensor::vector(&v, CONTRA)
    })
}

#[test]
fn time_one_flow_of_a_linear_field() {
    let m = linear_generator();
    let e = expm(&m);
    let x: Point = [0.4, -0.3, 0.2, 0.5, 0.1, -0.6];
    let got = flow_of_field(&linear_field(m), &x, 10.0).unwrap();
    for i in 0..DIM {
        let expect: f64 = (0..DIM).map(|j| e[i][j] * x[j]).sum();
        assert!((got[i] - expect).abs() < 1e-8, "{i}: {} vs {expect}", got[i]);
    }
    assert!(flow_of_field(&linear_field(m), &x, 0.5).is_err());
}

#[test]
fn pullback_of_a_constant_bivector_by_a_linear_flow() {
    // phi^* P = e^{-M} P e^{-M}^T for constant P
    let m = linear_generator();
    let neg: [[f64; DIM]; DIM] = std::array::from_fn(|i| std::array::from_fn(|j| -m[i][j]));
    let e = expm(&neg);
    let mut p = [[0.0; DIM]; DIM];
    for (i, j, v) in [(0, 1, 1.0), (2, 3, -0.5), (1, 5, 2.0)] {
        p[i][j] = v;
        p[j][i] = -v;
    }
    let w = FieldHandle::constant(PointTensor::from_matrix(&p, CONTRA));
    let x: Point = [0.1, 0.2, -0.3, 0.0, 0.4, 0.2];
    let got = pullback_by_flow(&linear_field(m), &w, &x, 10.0).unwrap().to_matrix();
    for i in 0..DIM {
        for j in 0..DIM {
            let expect: f64 = (0..DIM).flat_map(|k| (0..DIM).map(move |l| (k, l))).map(|(k, l)| e[i][k] * p[k][l] * e[j][l]).sum();
            assert!((got[i][j] - expect).abs() < 1e-7);
        }
    }
}

#[test]
fn maurer_cartan_and_degenerate_runs() {
    let x: Point = [0.3, -0.1, 0.7, 0.2, 0.0, -0.4];
    for c in [0.1, -2.0] {
        assert!(maurer_cartan_residual(&pi_field(1).scaled(c), &x).max_abs() < 1e-10);
    }
    assert!(maurer_cartan_residual(&pi_field(2), &x).max_abs() < 1e-10);
    let params = derive_constants(SlbTriple::new(1, 21, 167));
    let zero = FieldHandle::constant(PointTensor::zero(2, CONTRA));
    assert!(run(zero.clone(), params, &CocycleStub::new(10, 2.0), &IdentitySmoothing, 4, 10).is_err());
    let rep = run(zero, params, &CocycleStub::new(10, 2.0), &IdentitySmoothing, 2, 10).unwrap();
    assert_eq!(rep.steps.len(), 2);
    assert!(rep.steps.iter().all(|s| s.noop && s.z_next_norm == 0.0));
    assert!(pi(1, &x).max_abs() > 0.0);
}
