use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2lin::flow::{epsilon_t, flow, k_t, mu_eval, r_t_sq, tanhc, theta, FlowState};
use sl2lin::matrix::{nilpotent, random_sl2_in_ball, Mat2, Sl2Element};

/// `[A, [A, A^*]] / 4` straight from the matrix products.
fn w(a: &Mat2) -> Mat2 {
    let s = *a * a.adjoint() - a.adjoint() * *a;
    (*a * s - s * *a).scale_re(0.25)
}

fn rk4(a: &Sl2Element, t: f64, h: f64) -> Sl2Element {
    let steps = (t / h).round() as usize;
    let h = t / steps as f64;
    let mut m = *a.matrix();
    for _ in 0..steps {
        let k1 = w(&m);
        let k2 = w(&(m + k1.scale_re(0.5 * h)));
        let k3 = w(&(m + k2.scale_re(0.5 * h)));
        let k4 = w(&(m + k3.scale_re(h)));
        m = m + (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(h / 6.0);
    }
    Sl2Element::from_matrix(m)
}

#[test]
fn closed_form_agrees_with_an_independent_rk4() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = random_sl2_in_ball(&mut rng, 2.0);
        for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
            worst = worst.max(flow(&a, t).dist(&rk4(&a, t, 1e-3)));
        }
    }
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn norm_and_commutator_follow_their_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let a = random_sl2_in_ball(&mut rng, 2.0);
        let t = rng.random_range(0.0..5.0);
        let at = flow(&a, t);
        assert!((at.casimir() - a.casimir()).norm() < 1e-10);
        assert!((r_t_sq(&a, t) - at.norm_sq()).abs() < 1e-9);
        assert!((k_t(&a, t) - at.self_commutator()).frob() < 1e-9);
        // eps_t is the ratio |[A_t, A_t^*]| / |[A, A^*]|
        let k0 = a.self_commutator().frob();
        if k0 > 1e-6 {
            assert!((epsilon_t(&a, t) - at.self_commutator().frob() / k0).abs() < 1e-9);
        }
    }
}

#[test]
fn derivative_of_the_norm() {
    // d/dt R_t^2 = 4|f|^2 - R_t^4
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let a = random_sl2_in_ball(&mut rng, 2.0);
        let f = a.casimir().norm();
        let t = rng.random_range(0.1..3.0);
        let h = 1e-4;
        let d = (flow(&a, t + h).norm_sq() - flow(&a, t - h).norm_sq()) / (2.0 * h);
        let r2 = flow(&a, t).norm_sq();
        let expect = 4.0 * f * f - r2 * r2;
        assert!((d - expect).abs() < 1e-6 * (1.0 + expect.abs()), "{d} vs {expect}");
    }
}

#[test]
fn nilpotent_decays_like_one_over_root_t() {
    let n = nilpotent();
    for t in [1.0, 10.0, 100.0, 1000.0] {
        let r = flow(&n, t).norm();
        // R_t^2 = R^2 / (1 + R^2 t) for f = 0
        assert!((r * r - 1.0 / (1.0 + t)).abs() < 1e-12);
    }
}

#[test]
fn crucial_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for q in 1..=3 {
        let mut c = 0.0f64;
        for _ in 0..5000 {
            let a = random_sl2_in_ball(&mut rng, 3.0);
            let t = rng.random_range(0.0..50.0);
            let r2 = a.norm_sq();
            let lhs = epsilon_t(&a, t) * r_t_sq(&a, t).powi(q);
            let rhs = r2.powi(q) / (1.0 + t * r2).powi(q);
            if rhs > 0.0 {
                c = c.max(lhs / rhs);
            }
        }
        assert!(c <= 4.0, "q = {q}: C = {c}");
    }
}

#[test]
fn special_functions() {
    assert_eq!(tanhc(0.0), 1.0);
    assert!((tanhc(1.0) - 1f64.tanh()).abs() < 1e-15);
    assert!((tanhc(1e-5) - (1e-5f64).tanh() / 1e-5).abs() < 1e-15);
    assert_eq!(theta(1, 0.0), 1.0);
    assert!((theta(2, 4.0) - 2f64.cosh()).abs() < 1e-14);
    assert!((theta(3, 4.0) - 2f64.sinh() / 2.0).abs() < 1e-14);
    assert_eq!(mu_eval(0, 0, 3.0, 5.0), 1.0);
    // mu_{1,1}(t, R) = t R + t^{1/2} + ... with j up to min(2, 1)
    let (t, r) = (4.0f64, 3.0f64);
    assert!((mu_eval(2, 1, t, r) - (t * r + t.sqrt())).abs() < 1e-12);
    assert!(FlowState::new(nilpotent(), -1.0).is_err());
}
