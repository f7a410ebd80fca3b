//! Flow pullbacks, the homotopy operator `h_t` by quadrature, the infinite-time
//! projection onto the skeleton, and SU(2) averaging.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldHandle;
use crate::flow::{flow_real, vector_field_w_real};
use crate::matrix::{su2_haar, su2_haar_exp, Sl2Element};
use crate::skeleton::retract;
use crate::tensor::{mat_inverse, Point, PointTensor, Variance, DIM};

/// Change of variables for the time integral over `[0, t]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Substitution {
    /// Equal panels.
    Linear,
    /// Panel widths growing by `ratio`.
    Geometric { ratio: f64 },
    /// `s = scale * tau / (1 - tau)`, equal panels in `tau`.
    Rational { scale: f64 },
}

/// Composite Gauss-Legendre rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub order: usize,
    pub panels: usize,
    pub substitution: Substitution,
}

impl QuadratureSpec {
    pub fn new(order: usize, panels: usize, substitution: Substitution) -> Result<Self> {
        if order < 2 || panels < 1 {
            return Err(Error::InvalidParameter(format!(
                "quadrature needs order >= 2 and panels >= 1, got {order}/{panels}"
            )));
        }
        match substitution {
            Substitution::Geometric { ratio } if !(ratio > 1.0) => {
                return Err(Error::InvalidParameter(format!("geometric ratio {ratio}")))
            }
            Substitution::Rational { scale } if !(scale > 0.0) => {
                return Err(Error::InvalidParameter(format!("rational scale {scale}")))
            }
            _ => {}
        }
        Ok(QuadratureSpec { order, panels, substitution })
    }

    /// Default rule for the flow line through `x`: geometric panels when the
    /// exponential decay `e^{-2|f|s}` is visible on `[0, t]`, rational otherwise.
    pub fn for_point(x: &Point, t: f64) -> Self {
        let a = Sl2Element::from_real(x);
        let f = a.casimir().norm();
        let substitution = if 2.0 * f * t > 1.0 {
            Substitution::Geometric { ratio: 1.5 }
        } else {
            Substitution::Rational { scale: 1.0 / a.norm_sq().max(1e-3) }
        };
        QuadratureSpec { order: 8, panels: 8, substitution }
    }

    /// Twice as many panels.
    pub fn refined(&self) -> Self {
        QuadratureSpec { panels: 2 * self.panels, ..*self }
    }

    /// Nodes and weights on `[0, t]`.
    pub fn nodes(&self, t: f64) -> Vec<(f64, f64)> {
        if t <= 0.0 {
            return Vec::new();
        }
        let gl = GaussLegendre::new(NonZeroUsize::new(self.order).unwrap());
        let pairs = gl.as_node_weight_pairs();
        let p = self.panels;
        let mut out = Vec::with_capacity(p * self.order);
        let mut push_panel = |a: f64, b: f64, map: &dyn Fn(f64) -> (f64, f64)| {
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for &(xi, wi) in pairs {
                let (s, jac) = map(mid + half * xi);
                out.push((s, wi * half * jac));
            }
        };
        match self.substitution {
            Substitution::Linear => {
                let h = t / p as f64;
                for k in 0..p {
                    push_panel(k as f64 * h, (k + 1) as f64 * h, &|s| (s, 1.0));
                }
            }
            Substitution::Geometric { ratio } => {
                let total = ratio.powi(p as i32) - 1.0;
                let b = |k: usize| t * (ratio.powi(k as i32) - 1.0) / total;
                for k in 0..p {
                    push_panel(b(k), b(k + 1), &|s| (s, 1.0));
                }
            }
            Substitution::Rational { scale } => {
                let tau_max = t / (scale + t);
                let h = tau_max / p as f64;
                let map = |tau: f64| {
                    let d = 1.0 - tau;
                    (scale * tau / d, scale / (d * d))
                };
                for k in 0..p {
                    push_panel(k as f64 * h, (k + 1) as f64 * h, &map);
                }
            }
        }
        out
    }

    pub fn integrate(&self, t: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes(t).into_iter().map(|(s, w)| w * f(s)).sum()
    }
}

/// Jacobian of a map `R^6 -> R^6` by Richardson-extrapolated central differences.
/// `m[i][j] = d map_i / d x_j`.
pub fn fd_jacobian(map: impl Fn(&Point) -> Point, x: &Point, h: f64) -> [[f64; DIM]; DIM] {
    let mut m = [[0.0; DIM]; DIM];
    for j in 0..DIM {
        let diff = |h: f64| {
            let (mut p, mut q) = (*x, *x);
            p[j] += h;
            q[j] -= h;
            let (fp, fq) = (map(&p), map(&q));
            std::array::from_fn::<f64, DIM, _>(|i| (fp[i] - fq[i]) / (2.0 * h))
        };
        let (coarse, fine) = (diff(h), diff(0.5 * h));
        for i in 0..DIM {
            m[i][j] = (4.0 * fine[i] - coarse[i]) / 3.0;
        }
    }
    m
}

fn radius(x: &Point) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `D phi_t` at `x`, step `1e-4 (1 + R) / (1 + t)`.
pub fn flow_jacobian(x: &Point, t: f64) -> [[f64; DIM]; DIM] {
    let h = 1e-4 * (1.0 + radius(x)) / (1.0 + t);
    fd_jacobian(|p| flow_real(p, t), x, h)
}

/// Pullback of a field value at `y = F(x)` along a map with Jacobian `jac` at `x`.
/// Forms pull back; multivectors are transported by the inverse Jacobian.
pub fn pullback_value(value: &PointTensor, jac: &[[f64; DIM]; DIM]) -> Result<PointTensor> {
    if value.degree() == 0 {
        return Ok(*value);
    }
    match value.variance() {
        Variance::Covariant => Ok(value.pull_linear(jac)),
        Variance::Contravariant => {
            let inv = mat_inverse(jac)
                .ok_or_else(|| Error::InvalidParameter("singular Jacobian".into()))?;
            Ok(value.push_linear(&inv))
        }
    }
}

fn check_jacobian(jac: &[[f64; DIM]; DIM]) -> Result<()> {
    if jac.iter().flatten().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("non-finite flow Jacobian".into()))
    }
}

/// `(phi_t^* alpha)_x`.
pub fn pullback_flow(form: &FieldHandle, t: f64, x: &Point) -> Result<PointTensor> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("flow time {t}")));
    }
    if t == 0.0 {
        return Ok(form.eval(x));
    }
    let jac = flow_jacobian(x, t);
    check_jacobian(&jac)?;
    pullback_value(&form.eval(&flow_real(x, t)), &jac)
}

/// `phi_t^*` as a field.
pub fn pullback_flow_field(form: &FieldHandle, t: f64) -> FieldHandle {
    let f = form.clone();
    let deg = form.eval(&[0.3; DIM]);
    FieldHandle::new(move |x| {
        pullback_flow(&f, t, x).unwrap_or_else(|_| PointTensor::zero(deg.degree(), deg.variance()))
    })
    .with_step(form.fd.step)
}

/// `h_t(alpha)_x = int_0^t i_W (phi_s^* alpha)_x ds`.
pub fn h_t(form: &FieldHandle, t: f64, x: &Point, q: &QuadratureSpec) -> Result<PointTensor> {
    let sample = form.eval(x);
    if sample.variance() != Variance::Covariant {
        return Err(Error::InvalidParameter("h_t acts on forms".into()));
    }
    let mut out = PointTensor::zero(sample.degree().saturating_sub(1), Variance::Covariant);
    if sample.degree() == 0 {
        return Ok(out);
    }
    let w = vector_field_w_real(x);
    for (s, wt) in q.nodes(t) {
        let p = pullback_flow(form, s, x)?;
        out.axpy(wt, &p.interior(&w));
    }
    Ok(out)
}

/// `h_t` cross-checked against a rule with twice the panels; fails when the two
/// disagree by more than `10 tol`. Returns the refined value.
pub fn h_t_checked(
    form: &FieldHandle,
    t: f64,
    x: &Point,
    q: &QuadratureSpec,
    tol: f64,
) -> Result<PointTensor> {
    let coarse = h_t(form, t, x, q)?;
    let fine = h_t(form, t, x, &q.refined())?;
    let diff = fine.sub(&coarse).max_abs();
    if diff > 10.0 * tol {
        return Err(Error::NonConvergent { diff });
    }
    Ok(fine)
}

/// `h_t` as a field with the given rule.
pub fn h_t_field(form: &FieldHandle, t: f64, q: QuadratureSpec) -> FieldHandle {
    let f = form.clone();
    let deg = form.eval(&[0.3; DIM]).degree().saturating_sub(1);
    FieldHandle::new(move |x| {
        h_t(&f, t, x, &q).unwrap_or_else(|_| PointTensor::zero(deg, Variance::Covariant))
    })
    .with_step(form.fd.step)
}

/// Time after which `e^{-2|f|T} < 1e-8`.
pub fn stabilization_time(x: &Point) -> Option<f64> {
    let f = Sl2Element::from_real(x).casimir().norm();
    (f > 0.0).then(|| (1e8f64).ln() / (2.0 * f))
}

/// `p(alpha)_x ~ (phi_T^* alpha)_x` with `T` from [`stabilization_time`] unless given.
/// On `f = 0` a time must be supplied.
pub fn p_skeleton(form: &FieldHandle, x: &Point, t: Option<f64>) -> Result<PointTensor> {
    let t = match (t, stabilization_time(x)) {
        (Some(t), _) => t,
        (None, Some(t)) => t,
        (None, None) => {
            return Err(Error::NonConvergent { diff: f64::INFINITY });
        }
    };
    pullback_flow(form, t, x)
}

/// `r^* alpha` with the Jacobian of the retraction by finite differences.
pub fn pullback_retract(form: &FieldHandle, x: &Point) -> Result<PointTensor> {
    let a = Sl2Element::from_real(x);
    let map = |p: &Point| retract(&Sl2Element::from_real(p)).element().to_real();
    let h = 1e-5 * (1.0 + a.norm());
    let jac = fd_jacobian(map, x, h);
    check_jacobian(&jac)?;
    pullback_value(&form.eval(&map(x)), &jac)
}

/// `p_SU(2)(alpha)_x = int Ad_U^*(alpha)_x dmu(U)`.
pub fn average_su2(field: &FieldHandle, x: &Point, order: usize) -> Result<PointTensor> {
    let a = Sl2Element::from_real(x);
    let nodes = su2_haar(order);
    let parts: Vec<Result<PointTensor>> = nodes
        .par_iter()
        .map(|(u, w)| {
            let y = u.ad(&a).to_real();
            Ok(pullback_value(&field.eval(&y), &u.ad_real())?.scale(*w))
        })
        .collect();
    let mut out = PointTensor::zero(field.eval(x).degree(), field.eval(x).variance());
    for p in parts {
        out = out.add(&p?);
    }
    Ok(out)
}

pub fn average_su2_field(field: &FieldHandle, order: usize) -> FieldHandle {
    let f = field.clone();
    let s = field.eval(&[0.3; DIM]);
    FieldHandle::new(move |x| {
        average_su2(&f, x, order).unwrap_or_else(|_| PointTensor::zero(s.degree(), s.variance()))
    })
    .with_step(field.fd.step)
}

/// `h_SU(2)(beta)_x = int int_0^1 (Ad_{exp tX}^* i_{ad_X} beta)_x dt dlambda(X)`,
/// with `order` for the Haar rule and `t_order` Gauss points in `t`.
pub fn h_su2(form: &FieldHandle, x: &Point, order: usize, t_order: usize) -> Result<PointTensor> {
    let sample = form.eval(x);
    if sample.variance() != Variance::Covariant {
        return Err(Error::InvalidParameter("h_su2 acts on forms".into()));
    }
    let deg = sample.degree().saturating_sub(1);
    if sample.degree() == 0 {
        return Ok(PointTensor::zero(0, Variance::Covariant));
    }
    let a = Sl2Element::from_real(x);
    let tq = QuadratureSpec::new(t_order.max(2), 1, Substitution::Linear)?.nodes(1.0);
    let nodes = su2_haar_exp(order);
    let parts: Vec<PointTensor> = nodes
        .par_iter()
        .map(|(xa, w)| {
            let mut acc = PointTensor::zero(deg, Variance::Covariant);
            for &(t, wt) in &tq {
                let u = xa.scale(t).exp();
                let y = u.ad(&a);
                let v = xa.ad(&y).to_real();
                let g = form.eval(&y.to_real()).interior(&v);
                acc.axpy(wt, &g.pull_linear(&u.ad_real()));
            }
            acc.scale(*w)
        })
        .collect();
    let mut out = PointTensor::zero(deg, Variance::Covariant);
    for p in parts {
        out = out.add(&p);
    }
    Ok(out)
}

pub fn h_su2_field(form: &FieldHandle, order: usize, t_order: usize) -> FieldHandle {
    let f = form.clone();
    let deg = form.eval(&[0.3; DIM]).degree().saturating_sub(1);
    FieldHandle::new(move |x| {
        h_su2(&f, x, order, t_order).unwrap_or_else(|_| PointTensor::zero(deg, Variance::Covariant))
    })
    .with_step(form.fd.step)
}
