//! Differentiable tensor fields on R^6 evaluated by callback.

use std::sync::Arc;

use crate::tensor::{schouten_from_jets, Point, PointTensor, Variance, DIM};

type Eval = Arc<dyn Fn(&Point) -> PointTensor + Send + Sync>;
type Partials = Arc<dyn Fn(&Point) -> [PointTensor; DIM] + Send + Sync>;

/// Central finite-difference policy: 5-point stencil (Richardson of the 3-point one)
/// with step `step * (1 + |x|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdPolicy {
    pub step: f64,
}

impl Default for FdPolicy {
    fn default() -> Self {
        FdPolicy { step: 1e-3 }
    }
}

#[derive(Clone)]
pub struct FieldHandle {
    eval: Eval,
    partials: Option<Partials>,
    pub fd: FdPolicy,
}

impl std::fmt::Debug for FieldHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldHandle")
            .field("analytic_partials", &self.partials.is_some())
            .field("fd", &self.fd)
            .finish()
    }
}

impl FieldHandle {
    pub fn new(eval: impl Fn(&Point) -> PointTensor + Send + Sync + 'static) -> Self {
        FieldHandle { eval: Arc::new(eval), partials: None, fd: FdPolicy::default() }
    }

    /// Field with analytic first partials.
    pub fn with_partials(
        eval: impl Fn(&Point) -> PointTensor + Send + Sync + 'static,
        partials: impl Fn(&Point) -> [PointTensor; DIM] + Send + Sync + 'static,
    ) -> Self {
        FieldHandle { eval: Arc::new(eval), partials: Some(Arc::new(partials)), fd: FdPolicy::default() }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.fd = FdPolicy { step };
        self
    }

    /// Constant field.
    pub fn constant(t: PointTensor) -> Self {
        let z = PointTensor::zero(t.degree(), t.variance());
        Self::with_partials(move |_| t, move |_| [z; DIM])
    }

    /// Scalar function as a degree-zero field of the given variance.
    pub fn scalar(f: impl Fn(&Point) -> f64 + Send + Sync + 'static, variance: Variance) -> Self {
        Self::new(move |x| PointTensor::scalar(f(x), variance))
    }

    pub fn eval(&self, x: &Point) -> PointTensor {
        (self.eval)(x)
    }

    pub fn has_analytic_partials(&self) -> bool {
        self.partials.is_some()
    }

    pub fn partials(&self, x: &Point) -> [PointTensor; DIM] {
        match &self.partials {
            Some(p) => p(x),
            None => self.fd_partials(x),
        }
    }

    pub fn fd_partials(&self, x: &Point) -> [PointTensor; DIM] {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let h = self.fd.step * (1.0 + r);
        std::array::from_fn(|i| {
            let at = |s: f64| {
                let mut p = *x;
                p[i] += s * h;
                self.eval(&p)
            };
            let mut d = at(-2.0);
            d.axpy(-8.0, &at(-1.0));
            d.axpy(8.0, &at(1.0));
            d.axpy(-1.0, &at(2.0));
            d.scale(1.0 / (12.0 * h))
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        let f = self.clone();
        let g = self.clone();
        let mut out = Self::new(move |x| f.eval(x).scale(c));
        if self.partials.is_some() {
            out.partials = Some(Arc::new(move |x| g.partials(x).map(|t| t.scale(c))));
        }
        out.fd = self.fd;
        out
    }

    pub fn sum(&self, o: &FieldHandle) -> Self {
        let (a, b) = (self.clone(), o.clone());
        let (pa, pb) = (self.clone(), o.clone());
        let mut out = Self::new(move |x| a.eval(x).add(&b.eval(x)));
        if self.partials.is_some() && o.partials.is_some() {
            out.partials = Some(Arc::new(move |x| {
                let (u, v) = (pa.partials(x), pb.partials(x));
                std::array::from_fn(|i| u[i].add(&v[i]))
            }));
        }
        out.fd = self.fd;
        out
    }

    pub fn wedge(&self, o: &FieldHandle) -> Self {
        let (a, b) = (self.clone(), o.clone());
        let (pa, pb) = (self.clone(), o.clone());
        let mut out = Self::new(move |x| a.eval(x).wedge(&b.eval(x)));
        if self.partials.is_some() && o.partials.is_some() {
            out.partials = Some(Arc::new(move |x| {
                let (u, v) = (pa.eval(x), pb.eval(x));
                let (du, dv) = (pa.partials(x), pb.partials(x));
                std::array::from_fn(|i| du[i].wedge(&v).add(&u.wedge(&dv[i])))
            }));
        }
        out.fd = self.fd;
        out
    }
}

/// `d alpha = sum_j dx_j ^ d_j alpha`.
pub fn exterior_derivative(form: &FieldHandle, x: &Point) -> PointTensor {
    let v = form.eval(x);
    assert_eq!(v.variance(), Variance::Covariant, "exterior derivative of a multivector");
    let d = form.partials(x);
    let mut out = PointTensor::zero((v.degree() + 1).min(DIM), Variance::Covariant);
    if v.degree() == DIM {
        return out;
    }
    for (j, dj) in d.iter().enumerate() {
        out = out.add(&PointTensor::basis(j, Variance::Covariant).wedge(dj));
    }
    out
}

/// `d` as a field (derivatives of the result by finite differences).
pub fn exterior_derivative_field(form: &FieldHandle) -> FieldHandle {
    let f = form.clone();
    FieldHandle::new(move |x| exterior_derivative(&f, x)).with_step(form.fd.step)
}

/// Interior product `i_v alpha` with a vector field given by a closure.
pub fn interior_field(
    v: impl Fn(&Point) -> [f64; DIM] + Send + Sync + 'static,
    form: &FieldHandle,
) -> FieldHandle {
    let f = form.clone();
    FieldHandle::new(move |x| f.eval(x).interior(&v(x))).with_step(form.fd.step)
}

/// Schouten bracket of two multivector fields at a point.
pub fn schouten(p: &FieldHandle, q: &FieldHandle, x: &Point) -> PointTensor {
    schouten_from_jets(&p.eval(x), &p.partials(x), &q.eval(x), &q.partials(x))
}

/// Schouten bracket as a field.
pub fn schouten_field(p: &FieldHandle, q: &FieldHandle) -> FieldHandle {
    let (a, b) = (p.clone(), q.clone());
    FieldHandle::new(move |x| schouten(&a, &b, x)).with_step(p.fd.step.max(q.fd.step))
}
