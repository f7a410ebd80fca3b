use num_complex::Complex64 as C;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2lin::flow::flow;
use sl2lin::matrix::{nilpotent, random_sl2, su2_haar, Sl2Element, Su2Element};
use sl2lin::skeleton::{hopf, is_skeleton, retract, rho, DesingCoords};

fn unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|c| c / n);
        }
    }
}

/// Normality `[A, A^*] = 0` computed from the matrix entries.
fn commutator_norm(a: &Sl2Element) -> f64 {
    let m = a.matrix().0;
    let adj = [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]];
    let mut s = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut v = C::new(0.0, 0.0);
            for k in 0..2 {
                v += m[i][k] * adj[k][j] - adj[i][k] * m[k][j];
            }
            s += v.norm_sqr();
        }
    }
    s.sqrt()
}

#[test]
fn rho_examples() {
    let d = DesingCoords::new([1.0, 0.0, 0.0], C::new(2.0, 0.0)).unwrap();
    let a = rho(&d);
    assert!((a.matrix().0[0][0] - C::new(0.0, 2.0)).norm() < 1e-15);
    assert!((a.casimir() - C::new(4.0, 0.0)).norm() < 1e-14);
    assert!(DesingCoords::new([1.0, 1.0, 0.0], C::new(1.0, 0.0)).is_err());
}

#[test]
fn image_of_rho_is_normal_with_casimir_lambda_squared() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let w = unit(&mut rng);
        let l = C::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let a = rho(&DesingCoords::new(w, l).unwrap());
        assert!(commutator_norm(&a) < 1e-12);
        assert!((a.casimir() - l * l).norm() < 1e-12);
        assert!(is_skeleton(&a, 1e-10));
        let b = rho(&DesingCoords::new(w.map(|c| -c), -l).unwrap());
        assert!(a.dist(&b) < 1e-15);
    }
    assert!(!is_skeleton(&nilpotent(), 1e-10));
}

#[test]
fn retraction_is_the_long_time_limit_of_the_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let a = random_sl2(&mut rng, 1.0);
        let f = a.casimir().norm();
        if f < 1e-2 {
            continue;
        }
        let t = (1e8f64).ln() / (2.0 * f);
        let r = *retract(&a).element();
        assert!(flow(&a, t).dist(&r) < 1e-6 * (1.0 + a.norm()));
        assert!((r.norm_sq() - 2.0 * f).abs() < 1e-10 * (1.0 + f));
        assert!(retract(&r).element().dist(&r) < 1e-10 * (1.0 + r.norm()));
        assert!(commutator_norm(&r) < 1e-10 * (1.0 + f));
        assert!((r.casimir() - a.casimir()).norm() < 1e-12 * (1.0 + f));
    }
    assert_eq!(retract(&nilpotent()).element().norm(), 0.0);
}

#[test]
fn retraction_commutes_with_the_adjoint_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let rule: Vec<Su2Element> = su2_haar(3).into_iter().map(|(u, _)| u).collect();
    for u in rule.iter().take(20) {
        let a = random_sl2(&mut rng, 1.0);
        let lhs = *retract(&u.ad(&a)).element();
        let rhs = u.ad(&retract(&a).element());
        assert!(lhs.dist(&rhs) < 1e-10);
    }
}

#[test]
fn hopf_map_lands_on_the_unit_sphere() {
    let id = Su2Element::IDENTITY;
    let h = hopf(&id);
    assert!((h[0] - 1.0).abs() < 1e-15 && h[1].abs() < 1e-15 && h[2].abs() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let u = Su2Element::random(&mut rng);
        let h = hopf(&u);
        assert!(((h[0] * h[0] + h[1] * h[1] + h[2] * h[2]) - 1.0).abs() < 1e-12);
    }
}
