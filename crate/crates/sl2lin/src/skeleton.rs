//! The set of normal matrices, its retraction and the desingularization from S^2 x C.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::{Mat2, Sl2Element, Su2Element};

/// An element of the skeleton `{A : [A, A^*] = 0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkeletonPoint(pub Sl2Element);

impl SkeletonPoint {
    /// Membership via `|R^2 - 2|f|| <= tol (1 + R^2)`.
    pub fn check(a: Sl2Element, tol: f64) -> Option<Self> {
        let r2 = a.norm_sq();
        ((r2 - 2.0 * a.casimir().norm()).abs() <= tol * (1.0 + r2)).then_some(SkeletonPoint(a))
    }

    pub fn element(&self) -> &Sl2Element {
        &self.0
    }
}

/// Point of `S^2 x C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DesingCoords {
    w: [f64; 3],
    pub lambda: C64,
}

impl DesingCoords {
    pub fn new(w: [f64; 3], lambda: C64) -> Result<Self> {
        let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(DesingCoords { w, lambda })
    }

    pub fn w(&self) -> [f64; 3] {
        self.w
    }

    pub fn antipode(&self) -> Self {
        DesingCoords { w: self.w.map(|v| -v), lambda: -self.lambda }
    }
}

/// `||[A, A^*]|| <= tol (1 + R^2)`.
pub fn is_skeleton(a: &Sl2Element, tol: f64) -> bool {
    a.self_commutator().frob() <= tol * (1.0 + a.norm_sq())
}

/// Residual of `AA^* = |f| 1`, normalized by `1 + R^2`.
pub fn unitary_diag_residual(a: &Sl2Element) -> f64 {
    let f = a.casimir().norm();
    let s = *a.matrix() * a.matrix().adjoint();
    (s - Mat2::IDENTITY.scale_re(f)).frob() / (1.0 + a.norm_sq())
}

/// `r(A) = g^{-1} A g` with `g = (1 + AA^*/|f|)^{1/2}`, and `0` on `f = 0`.
///
/// The eigenvalues of `AA^*` are `s_+ = (R^2 + sqrt(R^4 - 4|f|^2))/2` and
/// `s_- = |f|^2 / s_+`.
pub fn retract(a: &Sl2Element) -> SkeletonPoint {
    let f = a.casimir().norm();
    if f == 0.0 {
        return SkeletonPoint(Sl2Element::ZERO);
    }
    // g(H) = a + b H on the spectrum of H = AA^*, written through the symmetric
    // functions R^2 = s_+ + s_-, |f|^2 = s_+ s_- so no eigenvectors are needed
    let r2 = a.norm_sq();
    let q = 2.0 + r2 / f;
    let p = q.sqrt(); // g(s_+) g(s_-)
    let sum = (q + 2.0 * p).sqrt(); // g(s_+) + g(s_-)
    let b = 1.0 / (f * sum);
    let a0 = 0.5 * sum - 0.5 * b * r2;
    let bi = -b / p;
    let ai = 0.5 * sum / p - 0.5 * bi * r2;
    let h = *a.aa_star().matrix();
    let gm = Mat2::IDENTITY.scale_re(a0) + h.scale_re(b);
    let gi = Mat2::IDENTITY.scale_re(ai) + h.scale_re(bi);
    SkeletonPoint(Sl2Element::from_matrix(gi * *a.matrix() * gm))
}

/// Eigenvalues `(s_+, s_-)` of `AA^*` from `R^2` and `|f|`.
pub fn aa_star_spectrum(a: &Sl2Element) -> (f64, f64) {
    let r2 = a.norm_sq();
    let f = a.casimir().norm();
    let disc = (r2 * r2 - 4.0 * f * f).max(0.0).sqrt();
    let hi = 0.5 * (r2 + disc);
    let lo = if hi > 0.0 { f * f / hi } else { 0.0 };
    (hi, lo)
}

/// `rho(w, lambda) = [[i lambda w1, lambda(-w2 + i w3)], [lambda(w2 + i w3), -i lambda w1]]`,
/// i.e. the element with coordinates `z = lambda w`.
pub fn rho(d: &DesingCoords) -> Sl2Element {
    let l = d.lambda;
    Sl2Element::from_coords([l * d.w[0], l * d.w[1], l * d.w[2]])
}

/// Hopf map `SU(2) -> S^2`: `(|a|^2 - |b|^2, Im(-2ab), Re(-2ab))`.
pub fn hopf(u: &Su2Element) -> [f64; 3] {
    let (a, b) = (u.a(), u.b());
    let m = a * b * (-2.0);
    [a.norm_sqr() - b.norm_sqr(), m.im, m.re]
}
