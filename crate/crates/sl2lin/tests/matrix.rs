use num_complex::Complex64 as C;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sl2lin::matrix::{hermitian_sqrt, random_sl2, su2_haar, su2_haar_mc, Mat2, Sl2Element, Su2Element};

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Explicit 2x2 formula `sqrt(H) = (H + sqrt(det H) 1) / sqrt(tr H + 2 sqrt(det H))`.
fn sqrt_oracle(h: &Mat2) -> Mat2 {
    let d = h.det().re.max(0.0).sqrt();
    let s = (h.trace().re + 2.0 * d).sqrt();
    (*h + Mat2::IDENTITY.scale_re(d)).scale_re(1.0 / s)
}

#[test]
fn coordinates_match_the_matrix_form() {
    let z = [c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1)];
    let a = Sl2Element::from_coords(z);
    let i = c(0.0, 1.0);
    let m = a.matrix().0;
    let expect = [[i * z[0], -z[1] + i * z[2]], [z[1] + i * z[2], -i * z[0]]];
    for r in 0..2 {
        for k in 0..2 {
            assert!((m[r][k] - expect[r][k]).norm() < 1e-15);
        }
    }
    let x = a.to_real();
    let expect = [0.3, 2.0, -0.7, -1.0, 0.5, 0.1];
    assert!(x.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-15));
    assert!(Sl2Element::from_real(&x).dist(&a) < 1e-15);
}

#[test]
fn casimir_is_the_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let a = random_sl2(&mut rng, 1.5);
        let m = a.matrix().0;
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let z = a.to_coords();
        let sum = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
        assert!((a.casimir() - det).norm() < 1e-12);
        assert!((det - sum).norm() < 1e-12 * (1.0 + a.norm_sq()));
        let frob: f64 = m.iter().flatten().map(|v| v.norm_sqr()).sum();
        let coords: f64 = z.iter().map(|v| v.norm_sqr()).sum();
        assert!((a.norm_sq() - frob).abs() < 1e-12 * (1.0 + frob));
        assert!((frob - 2.0 * coords).abs() < 1e-12 * (1.0 + frob));
    }
}

#[test]
fn diag_and_nilpotent_examples() {
    let d = Sl2Element::from_coords([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert!((d.casimir() - c(1.0, 0.0)).norm() < 1e-15);
    assert!((d.norm_sq() - 2.0).abs() < 1e-15);
    let n = sl2lin::matrix::nilpotent();
    assert!(n.casimir().norm() < 1e-15);
    assert!((n.norm_sq() - 1.0).abs() < 1e-15);
    assert!((n.matrix().0[0][1] - c(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn characteristic_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..2000 {
        let a = random_sl2(&mut rng, 2.0);
        let f = a.casimir().norm();
        let r2 = a.norm_sq();
        assert!(2.0 * f <= r2 * (1.0 + 1e-12));
        let m = *a.matrix();
        let sq = m * m + Mat2::IDENTITY.scale(a.casimir());
        assert!(sq.frob() < 1e-12 * (1.0 + r2 * r2));
        let h = m * m.adjoint();
        let ch = h * h - h.scale_re(r2) + Mat2::IDENTITY.scale_re(f * f);
        assert!(ch.frob() < 1e-12 * (1.0 + r2 * r2));
        let (r1, r2_) = a.char_residuals();
        assert!(r1.max(r2_) < 1e-12 * (1.0 + r2 * r2));
    }
}

#[test]
fn hermitian_sqrt_matches_the_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let a = random_sl2(&mut rng, 1.0);
        let h = *a.aa_star().matrix() + Mat2::IDENTITY.scale_re(0.1);
        let s = hermitian_sqrt(h).unwrap();
        assert!((*s.matrix() - sqrt_oracle(&h)).frob() < 1e-12 * (1.0 + h.frob()));
    }
    let d = hermitian_sqrt(Mat2::diag(c(4.0, 0.0), c(1.0, 0.0))).unwrap();
    assert!((*d.matrix() - Mat2::diag(c(2.0, 0.0), c(1.0, 0.0))).frob() < 1e-15);
    assert!(hermitian_sqrt(Mat2::diag(c(1.0, 0.0), c(-1.0, 0.0))).is_err());
}

#[test]
fn haar_rule_integrates_matrix_coefficients() {
    // int U_ij conj(U_kl) dU = delta_ik delta_jl / 2 (Schur orthogonality)
    let rule = su2_haar(6);
    let total: f64 = rule.iter().map(|(_, w)| w).sum();
    assert!((total - 1.0).abs() < 1e-12);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let s: C = rule.iter().map(|(u, w)| u.matrix().0[i][j] * u.matrix().0[k][l].conj() * *w).sum();
                    let e = if i == k && j == l { 0.5 } else { 0.0 };
                    assert!((s - c(e, 0.0)).norm() < 1e-12, "{i}{j}{k}{l}: {s}");
                }
            }
        }
    }
    for (u, _) in &rule {
        assert!(u.unitarity_defect() < 1e-12);
        assert!((u.matrix().det() - c(1.0, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn monte_carlo_average_of_the_adjoint_action_is_small() {
    let d = Sl2Element::from_coords([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let rule = su2_haar_mc(4000, 9);
    let mut acc = Sl2Element::ZERO;
    for (u, w) in &rule {
        acc = acc.add(&u.ad(&d).scale_re(*w));
    }
    assert!(acc.norm() < 5.0 / (4000f64).sqrt());
    let u = Su2Element::from_ab(c(0.6, 0.0), c(0.0, 0.8));
    assert!(u.unitarity_defect() < 1e-15);
}
