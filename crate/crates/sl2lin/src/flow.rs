//! The gradient-like vector field `W = [A, [A, A^*]]/4`, its closed-form flow and the
//! associated scalar bounds.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{Mat2, Sl2Element};
use crate::skeleton::aa_star_spectrum;

/// Below this value of `|f| t` the even expansion of `tanh(u)/u` is used.
const SMALL_FT: f64 = 1e-8;

/// Initial point and flow time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowState {
    pub a: Sl2Element,
    pub t: f64,
}

impl FlowState {
    pub fn new(a: Sl2Element, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!("flow time {t} must be nonnegative")));
        }
        Ok(FlowState { a, t })
    }

    pub fn evolve(&self) -> Sl2Element {
        flow(&self.a, self.t)
    }
}

/// `W_A = [A, [A, A^*]] / 4`.
pub fn vector_field_w(a: &Sl2Element) -> Sl2Element {
    let m = a.matrix();
    Sl2Element::from_matrix(m.comm(&m.comm(&m.adjoint())).scale_re(0.25))
}

/// `W` in real coordinates.
pub fn vector_field_w_real(x: &[f64; 6]) -> [f64; 6] {
    vector_field_w(&Sl2Element::from_real(x)).to_real()
}

/// `tanh(u)/u`, stable at zero.
pub fn tanhc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 3.0 + 2.0 * u2 * u2 / 15.0
    } else {
        u.tanh() / u
    }
}

/// `sinh(u)/u`, stable at zero.
pub fn sinhc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 + u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sinh() / u
    }
}

/// `tanh(|f| t)/|f|`, with the `f -> 0` limit `t`.
fn tanh_over_f(f: f64, t: f64) -> f64 {
    if f * t < SMALL_FT {
        let u = f * t;
        t * (1.0 - u * u / 3.0)
    } else {
        (f * t).tanh() / f
    }
}

/// Closed-form flow `A_t = g_t^{-1} A g_t`, `g_t = (1 + tanh(|f|t)/|f| AA^*)^{1/2}`.
pub fn flow(a: &Sl2Element, t: f64) -> Sl2Element {
    if t == 0.0 {
        return *a;
    }
    let f = a.casimir().norm();
    let th = tanh_over_f(f, t);
    let (s_hi, s_lo) = aa_star_spectrum(a);
    let e = a.aa_star().eig();
    let g = |s: f64| (1.0 + th * s).sqrt();
    let d = Mat2::diag(C64::new(g(s_hi), 0.0), C64::new(g(s_lo), 0.0));
    let di = Mat2::diag(C64::new(1.0 / g(s_hi), 0.0), C64::new(1.0 / g(s_lo), 0.0));
    let gm = e.v * d * e.v.adjoint();
    let gi = e.v * di * e.v.adjoint();
    Sl2Element::from_matrix(gi * *a.matrix() * gm)
}

/// Flow in real coordinates.
pub fn flow_real(x: &[f64; 6], t: f64) -> [f64; 6] {
    flow(&Sl2Element::from_real(x), t).to_real()
}

/// Classical RK4 on `A' = [A, [A, A^*]]/4` with `steps` equal steps.
pub fn flow_rk4(a: &Sl2Element, t: f64, steps: usize) -> Sl2Element {
    let steps = steps.max(1);
    let h = t / steps as f64;
    let mut y = *a;
    for _ in 0..steps {
        let k1 = vector_field_w(&y);
        let k2 = vector_field_w(&y.add(&k1.scale_re(0.5 * h)));
        let k3 = vector_field_w(&y.add(&k2.scale_re(0.5 * h)));
        let k4 = vector_field_w(&y.add(&k3.scale_re(h)));
        let incr = k1.add(&k2.scale_re(2.0)).add(&k3.scale_re(2.0)).add(&k4);
        y = y.add(&incr.scale_re(h / 6.0));
    }
    y
}

/// `R_t^2 = 2|f| (2|f| tanh(2|f|t) + R^2) / (2|f| + R^2 tanh(2|f|t))`,
/// written as `(R^2 + 2|f| u T) / (1 + R^2 t T)` with `u = 2|f|t`, `T = tanh(u)/u`.
pub fn r_t_sq(a: &Sl2Element, t: f64) -> f64 {
    let r2 = a.norm_sq();
    let f2 = 2.0 * a.casimir().norm();
    let u = f2 * t;
    let tc = tanhc(u);
    (r2 + f2 * u * tc) / (1.0 + r2 * t * tc)
}

/// `eps_t = 1 / (cosh(2|f|t) + sinh(2|f|t) R^2/(2|f|))`.
pub fn epsilon_t(a: &Sl2Element, t: f64) -> f64 {
    let r2 = a.norm_sq();
    let f2 = 2.0 * a.casimir().norm();
    let u = f2 * t;
    if u > 30.0 {
        let s = r2 / f2;
        return 2.0 * (-u).exp() / (1.0 + s);
    }
    1.0 / (u.cosh() + r2 * t * sinhc(u))
}

/// `K_t = eps_t [A, A^*]`.
pub fn k_t(a: &Sl2Element, t: f64) -> Mat2 {
    a.self_commutator().scale_re(epsilon_t(a, t))
}

/// Comparison polynomial `mu_{u,v}(t, R) = sum_{j=0}^{min(2u, v)} t^{u - j/2} R^{v - j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuPoly {
    /// twice `u`
    pub two_u: u32,
    pub v: u32,
}

impl MuPoly {
    pub fn new(two_u: u32, v: u32) -> Self {
        MuPoly { two_u, v }
    }

    pub fn eval(&self, t: f64, r: f64) -> f64 {
        let top = self.two_u.min(self.v);
        (0..=top)
            .map(|j| {
                let te = (self.two_u - j) as f64 / 2.0;
                let re = (self.v - j) as i32;
                let tp = if te == 0.0 { 1.0 } else { t.powf(te) };
                tp * r.powi(re)
            })
            .sum()
    }
}

pub fn mu_eval(two_u: u32, v: u32, t: f64, r: f64) -> f64 {
    MuPoly::new(two_u, v).eval(t, r)
}

/// `theta_1(s) = tanh(x)/x`, `theta_2(s) = cosh(x)`, `theta_3(s) = sinh(x)/x` with `s = x^2`.
pub fn theta(j: u8, s: f64) -> f64 {
    let x = s.max(0.0).sqrt();
    match j {
        1 => tanhc(x),
        2 => x.cosh(),
        3 => sinhc(x),
        _ => f64::NAN,
    }
}

/// First derivative of `theta_j` with respect to `s`.
pub fn theta_prime(j: u8, s: f64) -> f64 {
    let x = s.max(0.0).sqrt();
    if x < 1e-3 {
        return match j {
            1 => -1.0 / 3.0 + 4.0 * s / 15.0,
            2 => 0.5 + s / 12.0,
            3 => 1.0 / 6.0 + s / 60.0,
            _ => f64::NAN,
        };
    }
    match j {
        1 => {
            let sech2 = 1.0 / x.cosh().powi(2);
            (x * sech2 - x.tanh()) / (2.0 * x * x * x)
        }
        2 => x.sinh() / (2.0 * x),
        3 => (x * x.cosh() - x.sinh()) / (2.0 * x * x * x),
        _ => f64::NAN,
    }
}

/// Mixed partial derivative of `x -> A_t(x)` in real coordinates along the
/// multi-index `a` (order at most two), by Richardson-extrapolated central differences.
pub fn flow_derivative(x: &[f64; 6], t: f64, a: &[usize]) -> [f64; 6] {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let h = 1e-4 * (1.0 + r);
    let f = |p: &[f64; 6]| flow_real(p, t);
    let shifted = |i: usize, s: f64| {
        let mut p = *x;
        p[i] += s;
        p
    };
    let d1 = |i: usize, h: f64| -> [f64; 6] {
        let (p, m) = (f(&shifted(i, h)), f(&shifted(i, -h)));
        std::array::from_fn(|k| (p[k] - m[k]) / (2.0 * h))
    };
    let d2 = |i: usize, j: usize, h: f64| -> [f64; 6] {
        let ev = |si: f64, sj: f64| {
            let mut p = *x;
            p[i] += si;
            p[j] += sj;
            f(&p)
        };
        let (pp, pm, mp, mm) = (ev(h, h), ev(h, -h), ev(-h, h), ev(-h, -h));
        std::array::from_fn(|k| (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h))
    };
    let rich = |lo: [f64; 6], hi: [f64; 6]| std::array::from_fn(|k| (4.0 * hi[k] - lo[k]) / 3.0);
    match a.len() {
        0 => f(x),
        1 => rich(d1(a[0], h), d1(a[0], h / 2.0)),
        2 => {
            let h = h * 10.0;
            rich(d2(a[0], a[1], h), d2(a[0], a[1], h / 2.0))
        }
        _ => [f64::NAN; 6],
    }
}

/// Sup over samples of `|D^a A_t| / mu_{2n+1/2, 3n+2}(t, R)` with `n = |a|`.
pub fn flow_derivative_bound_probe(a: &[usize], samples: &[(Sl2Element, f64)]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if a.len() > 2 {
        return Err(Error::InvalidParameter("multi-index order above 2".into()));
    }
    let n = a.len() as u32;
    let mu = MuPoly::new(4 * n + 1, 3 * n + 2);
    let ratios: Vec<f64> = samples
        .par_iter()
        .map(|(m, t)| {
            let x = m.to_real();
            let d = flow_derivative(&x, *t, a);
            let nd = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            // the coordinate norm is |A|/sqrt(2); report the matrix norm
            let nd = nd * std::f64::consts::SQRT_2;
            let den = mu.eval(*t, m.norm());
            if den > 0.0 {
                nd / den
            } else {
                0.0
            }
        })
        .collect();
    Ok(ratios.into_iter().fold(0.0, f64::max))
}
