use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2lin::field::FieldHandle;
use sl2lin::flow::flow;
use sl2lin::foliation::df_field;
use sl2lin::homotopy::{average_su2, h_t, p_skeleton, pullback_flow, pullback_retract, QuadratureSpec, Substitution};
use sl2lin::matrix::{Mat2, Sl2Element};
use sl2lin::tensor::{Point, PointTensor, Variance, DIM};

const CO: Variance = Variance::Covariant;

fn phi(t: f64, x: &Point) -> Point {
    flow(&Sl2Element::from_real(x), t).to_real()
}

fn w_oracle(x: &Point) -> Point {
    let a = *Sl2Element::from_real(x).matrix();
    let s = a * a.adjoint() - a.adjoint() * a;
    let m: Mat2 = (a * s - s * a).scale_re(0.25);
    Sl2Element::from_matrix(m).to_real()
}

/// Coefficients of `alpha = sum a_k(x) dx_k`.
fn alpha(x: &Point) -> [f64; DIM] {
    [x[2], x[1] * x[4], 0.0, 1.0 - x[0] * x[0], x[3] * x[3], x[5]]
}

fn alpha_field() -> FieldHandle {
    FieldHandle::new(|x| PointTensor::vector(&alpha(x), CO))
}

fn points(seed: u64, n: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| std::array::from_fn(|_| rng.random_range(-0.6..0.6))).collect()
}

fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn flow_pullback_of_a_one_form() {
    let h = 1e-6;
    for x in points(30, 10) {
        for t in [0.3, 1.0] {
            let got = pullback_flow(&alpha_field(), t, &x).unwrap().as_vector();
            let a = alpha(&phi(t, &x));
            for k in 0..DIM {
                let (mut p, mut m) = (x, x);
                p[k] += h;
                m[k] -= h;
                let (fp, fm) = (phi(t, &p), phi(t, &m));
                let expect: f64 = (0..DIM).map(|l| a[l] * (fp[l] - fm[l]) / (2.0 * h)).sum();
                assert!((got[k] - expect).abs() < 1e-7, "{} vs {expect}", got[k]);
            }
        }
    }
}

#[test]
fn homotopy_of_a_one_form_integrates_along_the_flow_line() {
    // phi_s^* alpha (W) = alpha(W) o phi_s since W is invariant under its own flow
    for x in points(31, 10) {
        let t = 1.5;
        let q = QuadratureSpec::for_point(&x, t);
        let got = h_t(&alpha_field(), t, &x, &q).unwrap().scalar_value();
        let expect = simpson(0.0, t, 2000, |s| {
            let y = phi(s, &x);
            let w = w_oracle(&y);
            alpha(&y).iter().zip(w).map(|(a, b)| a * b).sum()
        });
        assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
    }
}

#[test]
fn homotopy_of_an_exact_form() {
    // h_t(dg) = g o phi_t - g
    let g = |x: &Point| x[0] * x[0] * x[4] + x[1] - 2.0 * x[3] * x[5];
    let dg = FieldHandle::new(move |x| {
        let v = [2.0 * x[0] * x[4], 1.0, 0.0, -2.0 * x[5], x[0] * x[0], -2.0 * x[3]];
        PointTensor::vector(&v, CO)
    });
    for x in points(32, 10) {
        for t in [0.5, 2.0] {
            let q = QuadratureSpec::for_point(&x, t);
            let got = h_t(&dg, t, &x, &q).unwrap().scalar_value();
            let expect = g(&phi(t, &x)) - g(&x);
            assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
        }
    }
}

#[test]
fn quadrature_rules() {
    let poly = |s: f64| 3.0 * s * s - s + 0.5;
    for sub in [Substitution::Linear, Substitution::Geometric { ratio: 1.5 }] {
        let q = QuadratureSpec::new(4, 3, sub).unwrap();
        assert!((q.integrate(2.0, poly) - (8.0 - 2.0 + 1.0)).abs() < 1e-12);
    }
    let q = QuadratureSpec::new(8, 16, Substitution::Rational { scale: 1.0 }).unwrap();
    assert!((q.integrate(3.0, |s| (-s).exp()) - (1.0 - (-3.0f64).exp())).abs() < 1e-10);
    assert!(QuadratureSpec::new(1, 1, Substitution::Linear).is_err());
    assert!(QuadratureSpec::new(4, 1, Substitution::Geometric { ratio: 1.0 }).is_err());
}

#[test]
fn averaging_over_su2() {
    // the casimir is Ad-invariant, so its differential is fixed
    for x in points(33, 5) {
        let df = df_field(1);
        let avg = average_su2(&df, &x, 4).unwrap();
        assert!(avg.sub(&df.eval(&x)).max_abs() < 1e-12);
        // a constant one-form averages to the pairing with the mean of Ad, which is zero
        let c = FieldHandle::constant(PointTensor::basis(2, CO));
        assert!(average_su2(&c, &x, 4).unwrap().max_abs() < 1e-12);
    }
}

#[test]
fn skeleton_projection_agrees_with_the_retraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let mut n = 0;
    while n < 6 {
        let x: Point = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if Sl2Element::from_real(&x).casimir().norm() < 0.3 {
            continue;
        }
        n += 1;
        let p = p_skeleton(&alpha_field(), &x, None).unwrap();
        let r = pullback_retract(&alpha_field(), &x).unwrap();
        assert!(p.sub(&r).max_abs() < 1e-5 * (1.0 + r.max_abs()));
    }
    assert!(p_skeleton(&alpha_field(), &Sl2Element::from_real(&[0.0; DIM]).to_real(), None).is_err());
}
