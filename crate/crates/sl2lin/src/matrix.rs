//! 2x2 complex matrix algebra on sl2(C), Hermitian functional calculus and SU(2).

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::ops::{Add, Mul, Neg, Sub};

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64 as C64;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Plain 2x2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2([[a, ZERO], [ZERO, d]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn frob_sq(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn frob(&self) -> f64 {
        self.frob_sq().sqrt()
    }

    pub fn scale(&self, c: C64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * c, m[0][1] * c], [m[1][0] * c, m[1][1] * c]])
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn comm(&self, other: &Mat2) -> Self {
        *self * *other - *other * *self
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        let m = &self.0;
        Some(Mat2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]).scale(d.inv()))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + (-o)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale_re(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

/// Traceless complex 2x2 matrix, identified with a point of C^3 (or R^6).
///
/// Real coordinates are ordered `(x1, x2, x3, y1, y2, y3)` with `z_j = x_j + i y_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sl2Element(Mat2);

impl Sl2Element {
    pub const ZERO: Sl2Element = Sl2Element(Mat2::ZERO);

    /// `A = [[i z1, -z2 + i z3], [z2 + i z3, -i z1]]`.
    pub fn from_coords(z: [C64; 3]) -> Self {
        Sl2Element(Mat2::new(I * z[0], -z[1] + I * z[2], z[1] + I * z[2], -I * z[0]))
    }

    pub fn to_coords(&self) -> [C64; 3] {
        let m = &self.0 .0;
        let z1 = -I * m[0][0];
        let z2 = (m[1][0] - m[0][1]) * 0.5;
        let z3 = (m[1][0] + m[0][1]) * (-0.5 * I);
        [z1, z2, z3]
    }

    pub fn from_real(x: &[f64; 6]) -> Self {
        Self::from_coords([
            C64::new(x[0], x[3]),
            C64::new(x[1], x[4]),
            C64::new(x[2], x[5]),
        ])
    }

    pub fn to_real(&self) -> [f64; 6] {
        let z = self.to_coords();
        [z[0].re, z[1].re, z[2].re, z[0].im, z[1].im, z[2].im]
    }

    /// Drops the trace part of an arbitrary matrix.
    pub fn from_matrix(m: Mat2) -> Self {
        let h = m.trace() * 0.5;
        Sl2Element(m - Mat2::diag(h, h))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Sl2Element(self.0.adjoint())
    }

    pub fn scale_re(&self, c: f64) -> Self {
        Sl2Element(self.0.scale_re(c))
    }

    pub fn add(&self, o: &Sl2Element) -> Self {
        Sl2Element(self.0 + o.0)
    }

    pub fn sub(&self, o: &Sl2Element) -> Self {
        Sl2Element(self.0 - o.0)
    }

    pub fn dist(&self, o: &Sl2Element) -> f64 {
        (self.0 - o.0).frob()
    }

    /// `f(A) = det A`.
    pub fn casimir(&self) -> C64 {
        self.0.det()
    }

    /// `R^2 = tr(A A^*)`.
    pub fn norm_sq(&self) -> f64 {
        self.0.frob_sq()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `A A^*` as a Hermitian matrix.
    pub fn aa_star(&self) -> HermitianPsd {
        HermitianPsd::symmetrized(self.0 * self.0.adjoint())
    }

    /// `[A, A^*]`.
    pub fn self_commutator(&self) -> Mat2 {
        self.0.comm(&self.0.adjoint())
    }

    /// Frobenius norms of `A^2 + f 1` and `(AA^*)^2 - R^2 AA^* + |f|^2 1`.
    pub fn char_residuals(&self) -> (f64, f64) {
        let f = self.casimir();
        let r2 = self.norm_sq();
        let a2 = self.0 * self.0 + Mat2::diag(f, f);
        let s = self.0 * self.0.adjoint();
        let fa = C64::new(f.norm_sqr(), 0.0);
        let q = s * s - s.scale_re(r2) + Mat2::diag(fa, fa);
        (a2.frob(), q.frob())
    }
}

/// Hermitian positive semi-definite 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianPsd(Mat2);

/// Spectral data of a 2x2 Hermitian matrix: `H = V diag(hi, lo) V^*`.
#[derive(Clone, Copy, Debug)]
pub struct Eigen2 {
    pub hi: f64,
    pub lo: f64,
    pub v: Mat2,
}

impl HermitianPsd {
    /// Checks psd-ness with the relative tolerance `1e-10 tr H`.
    pub fn new(m: Mat2) -> Result<Self> {
        let h = Self::symmetrized(m);
        let e = h.eig();
        let tr = (e.hi + e.lo).abs();
        if e.lo < -1e-10 * tr.max(f64::MIN_POSITIVE) {
            return Err(Error::NotPsd { min_eig: e.lo });
        }
        Ok(h)
    }

    fn symmetrized(m: Mat2) -> Self {
        let a = m.0;
        let off = (a[0][1] + a[1][0].conj()) * 0.5;
        HermitianPsd(Mat2::new(
            C64::new(a[0][0].re, 0.0),
            off,
            off.conj(),
            C64::new(a[1][1].re, 0.0),
        ))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn eig(&self) -> Eigen2 {
        let m = &self.0 .0;
        let (a, d, b) = (m[0][0].re, m[1][1].re, m[0][1]);
        let mean = 0.5 * (a + d);
        let delta = 0.5 * (a - d);
        let r = delta.hypot(b.norm());
        let hi = mean + r;
        let lo = mean - r;
        let v = if r == 0.0 {
            Mat2::IDENTITY
        } else {
            // eigenvector of `hi`, picked from the better conditioned row
            let (v1, v2) = if delta >= 0.0 {
                (C64::new(delta + r, 0.0), b.conj())
            } else {
                (b, C64::new(r - delta, 0.0))
            };
            let n = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
            let (v1, v2) = (v1 / n, v2 / n);
            Mat2::new(v1, -v2.conj(), v2, v1.conj())
        };
        Eigen2 { hi, lo, v }
    }

    /// Applies `g` to the spectrum. `lo_override` replaces the smaller eigenvalue,
    /// which is useful when it is known in closed form (e.g. `|f|^2 / s_+` for `AA^*`).
    pub fn apply(&self, lo_override: Option<f64>, g: impl Fn(f64) -> f64) -> Mat2 {
        let e = self.eig();
        let lo = lo_override.unwrap_or(e.lo);
        let d = Mat2::diag(C64::new(g(e.hi), 0.0), C64::new(g(lo), 0.0));
        e.v * d * e.v.adjoint()
    }

    /// Closed-form square root through the eigendecomposition.
    pub fn sqrt(&self) -> HermitianPsd {
        Self::symmetrized(self.apply(None, |s| s.max(0.0).sqrt()))
    }
}

/// `hermitian_sqrt` with the psd precondition checked.
pub fn hermitian_sqrt(m: Mat2) -> Result<HermitianPsd> {
    Ok(HermitianPsd::new(m)?.sqrt())
}

/// Element of su(2): `X = i (v1 s1 + v2 s2 + v3 s3)` with Pauli matrices `s_k`.
/// Eigenvalues are `+-i|v|`, so `|X|^2 = 2|v|^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Algebra(pub [f64; 3]);

impl Su2Algebra {
    pub fn matrix(&self) -> Mat2 {
        let [a, b, c] = self.0;
        Mat2::new(C64::new(0.0, c), C64::new(b, a), C64::new(-b, a), C64::new(0.0, -c))
    }

    pub fn angle(&self) -> f64 {
        let [a, b, c] = self.0;
        (a * a + b * b + c * c).sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        Su2Algebra(self.0.map(|v| v * t))
    }

    /// `exp X = cos(theta) 1 + sin(theta)/theta X`.
    pub fn exp(&self) -> Su2Element {
        let th = self.angle();
        let sinc = if th < 1e-8 { 1.0 - th * th / 6.0 } else { th.sin() / th };
        Su2Element(Mat2::IDENTITY.scale_re(th.cos()) + self.matrix().scale_re(sinc))
    }

    /// `ad_X(A) = [X, A]`.
    pub fn ad(&self, a: &Sl2Element) -> Sl2Element {
        Sl2Element::from_matrix(self.matrix().comm(a.matrix()))
    }
}

/// Normalized density of the Haar measure pulled back to su(2) by `exp`,
/// supported on the ball `|X| <= sqrt(2) pi`.
pub fn haar_density_exp(x: &Su2Algebra) -> f64 {
    let th = x.angle();
    if th >= PI {
        return 0.0;
    }
    let sinc = if th < 1e-8 { 1.0 } else { th.sin() / th };
    sinc * sinc / (4.0 * std::f64::consts::SQRT_2 * PI * PI)
}

/// Unitary 2x2 matrix with determinant one, `[[a, b], [-conj b, conj a]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Element(Mat2);

impl Su2Element {
    pub const IDENTITY: Su2Element = Su2Element(Mat2::IDENTITY);

    pub fn from_ab(a: C64, b: C64) -> Self {
        Su2Element(Mat2::new(a, b, -b.conj(), a.conj()))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn a(&self) -> C64 {
        self.0 .0[0][0]
    }

    pub fn b(&self) -> C64 {
        self.0 .0[0][1]
    }

    /// Haar-random element from a normalized Gaussian in R^4.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut q = [0.0f64; 4];
        for v in q.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        let q = q.map(|v| v / n);
        Self::from_ab(C64::new(q[0], q[1]), C64::new(q[2], q[3]))
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.0 * self.0.adjoint() - Mat2::IDENTITY).frob()
    }

    /// `Ad_U(A) = U A U^*`.
    pub fn ad(&self, a: &Sl2Element) -> Sl2Element {
        Sl2Element::from_matrix(self.0 * *a.matrix() * self.0.adjoint())
    }

    /// Real 6x6 matrix of `Ad_U` in the coordinates `(x1,x2,x3,y1,y2,y3)`.
    pub fn ad_real(&self) -> [[f64; 6]; 6] {
        let mut m = [[0.0; 6]; 6];
        for j in 0..6 {
            let mut e = [0.0; 6];
            e[j] = 1.0;
            let col = self.ad(&Sl2Element::from_real(&e)).to_real();
            for i in 0..6 {
                m[i][j] = col[i];
            }
        }
        m
    }
}

/// Quadrature rule on SU(2) in exponential coordinates.
///
/// Angle `theta` (Gauss-Legendre on `[0, pi]` against `sin^2`), direction on the
/// sphere (Gauss-Legendre in the polar cosine, uniform in azimuth). Weights sum to one.
pub fn su2_haar(order: usize) -> Vec<(Su2Element, f64)> {
    su2_haar_exp(order)
        .into_iter()
        .map(|(x, w)| (x.exp(), w))
        .collect()
}

/// Same rule as [`su2_haar`] but returning the Lie algebra nodes.
pub fn su2_haar_exp(order: usize) -> Vec<(Su2Algebra, f64)> {
    let order = order.max(1);
    let gl = GaussLegendre::new(NonZeroUsize::new(order).unwrap());
    let pairs = gl.as_node_weight_pairs();
    let naz = 2 * order;
    let mut out = Vec::with_capacity(order * order * naz);
    // midpoint rule in the angle: exact for the trigonometric integrands of Ad
    let nth = 2 * order;
    for j in 0..nth {
        let th = PI * (j as f64 + 0.5) / nth as f64;
        let wth = th.sin().powi(2);
        for &(cb, wb) in pairs {
            let sb = (1.0 - cb * cb).max(0.0).sqrt();
            for k in 0..naz {
                let psi = 2.0 * PI * (k as f64 + 0.5) / naz as f64;
                let n = [sb * psi.cos(), sb * psi.sin(), cb];
                out.push((Su2Algebra(n.map(|c| c * th)), wth * wb));
            }
        }
    }
    let total: f64 = out.iter().map(|(_, w)| w).sum();
    for (_, w) in out.iter_mut() {
        *w /= total;
    }
    out
}

/// Seeded Monte-Carlo rule with equal weights.
pub fn su2_haar_mc(samples: usize, seed: u64) -> Vec<(Su2Element, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = 1.0 / samples.max(1) as f64;
    (0..samples).map(|_| (Su2Element::random(&mut rng), w)).collect()
}

/// Random element with i.i.d. standard complex Gaussian coordinates times `scale`.
pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Sl2Element {
    let mut z = [C64::new(0.0, 0.0); 3];
    for v in z.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v = C64::new(re, im) * (scale / std::f64::consts::SQRT_2);
    }
    Sl2Element::from_coords(z)
}

/// Random element with `R` uniform in `[0, r_max]` and a uniformly random direction.
pub fn random_sl2_in_ball<R: Rng + ?Sized>(rng: &mut R, r_max: f64) -> Sl2Element {
    let a = random_sl2(rng, 1.0);
    let n = a.norm();
    let r: f64 = rng.random::<f64>() * r_max;
    if n == 0.0 {
        return a;
    }
    a.scale_re(r / n)
}

/// The nilpotent `N = [[0, 1], [0, 0]]`.
pub fn nilpotent() -> Sl2Element {
    Sl2Element::from_coords([ZERO, C64::new(-0.5, 0.0), C64::new(0.0, -0.5)])
}
