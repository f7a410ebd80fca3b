use num_complex::Complex64 as C;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2lin::field::{schouten, FieldHandle};
use sl2lin::foliation::{
    cartan_trivector, casimir_parts, df, omega_tilde, phi_form, pi, pi_field, sharp, vfield_v, CartanPart,
};
use sl2lin::skeleton::{rho, DesingCoords};
use sl2lin::tensor::{Point, PointTensor, Variance, DIM};

type CVec = [C; DIM];

/// `d/dz_k = (d/dx_k - i d/dy_k) / 2`.
fn dz(k: usize) -> CVec {
    let mut v = [C::new(0.0, 0.0); DIM];
    v[k] = C::new(0.5, 0.0);
    v[k + 3] = C::new(0.0, -0.5);
    v
}

fn z(x: &Point, k: usize) -> C {
    C::new(x[k], x[k + 3])
}

fn random_point(rng: &mut ChaCha8Rng) -> Point {
    std::array::from_fn(|_| rng.random_range(-1.0..1.0))
}

/// `sum_cyclic z_a d/dz_b ^ d/dz_c` as a complex antisymmetric matrix.
fn pi_complex(x: &Point) -> [[C; DIM]; DIM] {
    let mut m = [[C::new(0.0, 0.0); DIM]; DIM];
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let (u, v) = (dz(b), dz(c));
        for j in 0..DIM {
            for k in 0..DIM {
                m[j][k] += z(x, a) * (u[j] * v[k] - u[k] * v[j]);
            }
        }
    }
    m
}

fn fd_matrix_partial(p: impl Fn(&Point) -> [[f64; DIM]; DIM], x: &Point, l: usize) -> [[f64; DIM]; DIM] {
    let h = 1e-5;
    let (mut a, mut b) = (*x, *x);
    a[l] += h;
    b[l] -= h;
    let (pa, pb) = (p(&a), p(&b));
    std::array::from_fn(|i| std::array::from_fn(|j| (pa[i][j] - pb[i][j]) / (2.0 * h)))
}

/// `J^{ijk} = sum_l P^{il} d_l P^{jk} + cyclic`, partials by central differences.
fn fd_jacobiator(p: impl Fn(&Point) -> [[f64; DIM]; DIM] + Copy, x: &Point) -> Vec<([usize; 3], f64)> {
    let m = p(x);
    let dm: Vec<_> = (0..DIM).map(|l| fd_matrix_partial(p, x, l)).collect();
    let mut out = Vec::new();
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            for k in (j + 1)..DIM {
                let v = (0..DIM).map(|l| m[i][l] * dm[l][j][k] + m[j][l] * dm[l][k][i] + m[k][l] * dm[l][i][j]).sum();
                out.push(([i, j, k], v));
            }
        }
    }
    out
}

#[test]
fn poisson_bivectors_match_the_complex_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..50 {
        let x = random_point(&mut rng);
        let m = pi_complex(&x);
        let (p1, p2) = (pi(1, &x).to_matrix(), pi(2, &x).to_matrix());
        for j in 0..DIM {
            for k in 0..DIM {
                assert!((p1[j][k] - 4.0 * m[j][k].re).abs() < 1e-13);
                assert!((p2[j][k] - 4.0 * m[j][k].im).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn jacobi_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let x = random_point(&mut rng);
        for i in 1..=2u8 {
            for (_, v) in fd_jacobiator(move |p| pi(i, p).to_matrix(), &x) {
                assert!(v.abs() < 1e-8, "{v}");
            }
            assert!(schouten(&pi_field(i), &pi_field(i), &x).max_abs() < 1e-9);
        }
        assert!(schouten(&pi_field(1), &pi_field(2), &x).max_abs() < 1e-9);
    }
}

#[test]
fn schouten_square_is_twice_the_jacobiator() {
    // a bivector that is not Poisson
    let p = |x: &Point| -> [[f64; DIM]; DIM] {
        let mut m = [[0.0; DIM]; DIM];
        let mut put = |i: usize, j: usize, v: f64| {
            m[i][j] += v;
            m[j][i] -= v;
        };
        put(0, 1, x[2] * x[2] + 1.0);
        put(1, 2, x[0] * x[3]);
        put(3, 5, x[1] - x[4] * x[4]);
        put(0, 4, x[5]);
        m
    };
    let field = FieldHandle::new(move |x| PointTensor::from_matrix(&p(x), Variance::Contravariant));
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut nonzero = 0.0f64;
    for _ in 0..20 {
        let x = random_point(&mut rng);
        let s = schouten(&field, &field, &x);
        for (ix, v) in fd_jacobiator(p, &x) {
            assert!((s.at(&ix) - 2.0 * v).abs() < 1e-7, "{ix:?}: {} vs {}", s.at(&ix), 2.0 * v);
            nonzero = nonzero.max(v.abs());
        }
    }
    assert!(nonzero > 0.1);
}

#[test]
fn casimirs_and_transversal_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let h = 1e-6;
    for _ in 0..100 {
        let x = random_point(&mut rng);
        let f = |p: &Point| {
            let s: C = (0..3).map(|k| z(p, k) * z(p, k)).sum();
            (s.re, s.im)
        };
        let (a, b) = casimir_parts(&x);
        assert!((a - f(&x).0).abs() < 1e-14 && (b - f(&x).1).abs() < 1e-14);
        for i in 1..=2u8 {
            let g = df(i, &x).as_vector();
            for l in 0..DIM {
                let (mut p, mut m) = (x, x);
                p[l] += h;
                m[l] -= h;
                let pick = |v: (f64, f64)| if i == 1 { v.0 } else { v.1 };
                let fd = (pick(f(&p)) - pick(f(&m))) / (2.0 * h);
                assert!((g[l] - fd).abs() < 1e-8);
            }
            for j in 1..=2u8 {
                let ham = sharp(&pi(j, &x), &g);
                assert!(ham.iter().all(|v| v.abs() < 1e-13), "casimir {i} under pi_{j}");
            }
            let v = vfield_v(i, &x).unwrap().as_vector();
            let step = |s: f64| -> (f64, f64) { f(&std::array::from_fn(|k| x[k] + s * v[k])) };
            let (up, dn) = (step(h), step(-h));
            let d = ((up.0 - dn.0) / (2.0 * h), (up.1 - dn.1) / (2.0 * h));
            let expect = if i == 1 { (1.0, 0.0) } else { (0.0, 1.0) };
            assert!((d.0 - expect.0).abs() < 1e-7 && (d.1 - expect.1).abs() < 1e-7);
        }
    }
}

#[test]
fn cartan_trivector_matches_the_complex_formula() {
    let (u, v, w) = (dz(0), dz(1), dz(2));
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let c = u[i] * (v[j] * w[k] - v[k] * w[j]) - u[j] * (v[i] * w[k] - v[k] * w[i])
                    + u[k] * (v[i] * w[j] - v[j] * w[i]);
                let re = cartan_trivector(CartanPart::Real).at(&[i, j, k]);
                let im = cartan_trivector(CartanPart::Imaginary).at(&[i, j, k]);
                assert!((re - 4.0 * c.re).abs() < 1e-15);
                assert!((im - 4.0 * c.im).abs() < 1e-15);
            }
        }
    }
}

fn normalize(w: [f64; 3]) -> [f64; 3] {
    let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    w.map(|c| c / n)
}

#[test]
fn pullbacks_along_the_desingularization() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let h = 1e-6;
    for _ in 0..50 {
        let w = normalize(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        let lam = C::from_polar(rng.random_range(0.3..1.5), rng.random_range(0.0..std::f64::consts::TAU));
        let x = rho(&DesingCoords::new(w, lam).unwrap()).to_real();
        // orthonormal oriented frame (u, w x u) of the sphere
        let u = normalize([w[1], -w[0], 0.0]);
        let v = [w[1] * u[2] - w[2] * u[1], w[2] * u[0] - w[0] * u[2], w[0] * u[1] - w[1] * u[0]];
        let at = |w: [f64; 3], l: C| rho(&DesingCoords::new(normalize(w), l).unwrap()).to_real();
        let diff = |a: Point, b: Point| -> [f64; DIM] { std::array::from_fn(|k| (a[k] - b[k]) / (2.0 * h)) };
        let along = |d: [f64; 3]| diff(at(std::array::from_fn(|k| w[k] + h * d[k]), lam), at(std::array::from_fn(|k| w[k] - h * d[k]), lam));
        let (pu, pv) = (along(u), along(v));
        let pl1 = diff(at(w, lam + h), at(w, lam - h));
        let pl2 = diff(at(w, lam + C::new(0.0, h)), at(w, lam - C::new(0.0, h)));
        let o1 = omega_tilde(1, &x).unwrap();
        let o2 = omega_tilde(2, &x).unwrap();
        assert!((o1.eval(&[pu, pv]) + lam.re).abs() < 1e-8);
        assert!((o2.eval(&[pu, pv]) - lam.im).abs() < 1e-8);
        assert!(o1.eval(&[pl1, pl2]).abs() < 1e-8);
        let phi = phi_form(&x);
        assert!((phi.eval(&[pl1, pl2]) - 4.0 * lam.norm_sqr()).abs() < 1e-7);
        assert!(phi.eval(&[pu, pv]).abs() < 1e-8);
    }
}
