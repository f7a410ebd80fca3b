//! Nash-Moser bookkeeping: constants, schedules, the inequality ledger, the
//! Maurer-Cartan residual, flows of vector fields, and a single iteration step with
//! pluggable providers.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{schouten, FieldHandle};
use crate::foliation::{pi, pi_field, poisson_diff};
use crate::homotopy::{fd_jacobian, pullback_value};
use crate::sampling::halton_ball;
use crate::tensor::{Point, PointTensor, Variance, DIM};

/// Loss exponents `(a, b, c)` in `||h(W)||_{n,k} <= C |W|_{n+a, k+bn+c}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SlbTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl SlbTriple {
    pub fn new(a: u64, b: u64, c: u64) -> Self {
        SlbTriple { a, b, c }
    }
}

/// Iteration constants and schedule data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScheduleParams {
    pub slb: SlbTriple,
    pub p: u64,
    pub x_a: u64,
    pub y_a: u64,
    pub x_b: u64,
    pub y_b: u64,
    pub x_c: u64,
    pub y_c: u64,
    pub alpha: u64,
    /// Final radius `r`.
    pub r: f64,
    /// Initial radius `R`.
    pub big_r: f64,
    pub t0: f64,
    pub theta: f64,
}

/// `p = max(a + c + 1, b + 1, 22)` and the constants derived from it, with `r = 1`,
/// `R = 2`, `t0 = 2`, `theta = 0.1`.
pub fn derive_constants(slb: SlbTriple) -> ScheduleParams {
    let p = (slb.a + slb.c + 1).max(slb.b + 1).max(22);
    ScheduleParams {
        slb,
        p,
        x_a: p,
        y_a: p * p,
        x_b: 13 * p,
        y_b: 13 * p * p,
        x_c: 2 * p,
        y_c: 130 * p * p,
        alpha: 50 * p * p,
        r: 1.0,
        big_r: 2.0,
        t0: 2.0,
        theta: 0.1,
    }
}

impl ScheduleParams {
    pub fn with_radii(mut self, r: f64, big_r: f64) -> Self {
        self.r = r;
        self.big_r = big_r;
        self
    }

    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r < self.big_r) {
            return Err(Error::InvalidParameter(format!("radii r = {}, R = {}", self.r, self.big_r)));
        }
        if !(self.t0 > 1.0) {
            return Err(Error::InvalidParameter(format!("t0 = {} must exceed 1", self.t0)));
        }
        Ok(())
    }
}

/// Radius and smoothing parameter of step `i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub i: usize,
    pub r_i: f64,
    /// `t0^{(3/2)^i}`, infinite once it overflows.
    pub t_i: f64,
    pub log_t_i: f64,
}

/// `r_i = r + (R - r)/(i + 1)` and `t_i = t0^{(3/2)^i}`.
pub fn schedules(params: &ScheduleParams, i: usize) -> Result<Schedule> {
    params.validate()?;
    let r_i = params.r + (params.big_r - params.r) / (i as f64 + 1.0);
    let log_t_i = params.t0.ln() * 1.5f64.powi(i as i32);
    Ok(Schedule { i, r_i, t_i: log_t_i.exp(), log_t_i })
}

/// One inequality of the ledger, normalized to `lhs < rhs` or `lhs <= rhs` over the
/// integers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub name: &'static str,
    pub strict: bool,
    pub lhs: String,
    pub rhs: String,
    /// `rhs - lhs`.
    pub margin: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerReport {
    pub p: u64,
    pub alpha: u64,
    pub entries: Vec<LedgerEntry>,
    pub pass: bool,
}

impl LedgerReport {
    pub fn failures(&self) -> Vec<&'static str> {
        self.entries.iter().filter(|e| !e.pass).map(|e| e.name).collect()
    }
}

/// Evaluates the inequalities of the convergence proof exactly. Fractions are cleared
/// by multiplying through with positive denominators.
pub fn ledger_verify(params: &ScheduleParams) -> LedgerReport {
    let b = |v: u64| BigInt::from(v);
    let p = b(params.p);
    let (xa, ya, xb, yb, xc, yc) =
        (b(params.x_a), b(params.y_a), b(params.x_b), b(params.y_b), b(params.x_c), b(params.y_c));
    let al = b(params.alpha);
    let one = BigInt::from(1);
    let p2 = &p * &p;
    let c = |v: i64| BigInt::from(v);
    let mut entries = Vec::new();
    let mut push = |name: &'static str, strict: bool, lhs: BigInt, rhs: BigInt| {
        let margin = &rhs - &lhs;
        let pass = if strict { margin > BigInt::from(0) } else { margin >= BigInt::from(0) };
        entries.push(LedgerEntry {
            name,
            strict,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            margin: margin.to_string(),
            pass,
        });
    };
    push("13p^2+2p-1 < alpha/2", true, c(2) * (c(13) * &p2 + c(2) * &p - &one), al.clone());
    push("24p^2-9p-1 < alpha/2", true, c(2) * (c(24) * &p2 - c(9) * &p - &one), al.clone());
    push("12p^2+13p-1 < alpha/2", true, c(2) * (c(12) * &p2 + c(13) * &p - &one), al.clone());
    push("-132p^2 < -5alpha/2", true, c(5) * &al, c(264) * &p2);
    push("-y_c+2p^2 < -5alpha/2", true, c(5) * &al, c(2) * (&yc - c(2) * &p2));
    // 12p^2 + 2 alpha (y_b - y_a + p - 1)/(y_c - y_a) < 3 alpha / 2, times 2 (y_c - y_a)
    let d = &yc - &ya;
    if d > BigInt::from(0) {
        push(
            "12p^2+2alpha(y_b-y_a+p-1)/(y_c-y_a) < 3alpha/2",
            true,
            c(24) * &p2 * &d + c(4) * &al * (&yb - &ya + &p - &one),
            c(3) * &al * &d,
        );
    } else {
        push("12p^2+2alpha(y_b-y_a+p-1)/(y_c-y_a) < 3alpha/2", true, c(1), c(0));
    }
    push("4p < x_b-x_a", true, c(4) * &p, &xb - &xa);
    push("(p-1)x_a <= y_a", false, (&p - &one) * &xa, ya.clone());
    push("22p <= y_a", false, c(22) * &p, ya.clone());
    push("x_a+p = x_c (lower)", false, &xa + &p, xc.clone());
    push("x_a+p = x_c (upper)", false, xc.clone(), &xa + &p);
    push(
        "y_a+(p-1)(x_b-p+1)-22p <= y_b",
        false,
        &ya + (&p - &one) * (&xb - &p + &one) - c(22) * &p,
        yb.clone(),
    );
    push("2p+(p-1)(x_b-p+1) <= y_b", false, c(2) * &p + (&p - &one) * (&xb - &p + &one), yb.clone());
    push("3p+1 <= y_a", false, c(3) * &p + &one, ya.clone());
    push("4p(p-1)+3 < N", true, c(4) * &p * (&p - &one) + c(3), al.clone());
    let pass = entries.iter().all(|e| e.pass);
    LedgerReport { p: params.p, alpha: params.alpha, entries, pass }
}

/// `d_pi Z + 1/2 [Z, Z]` at `x`, the obstruction for `pi_1 + Z` to be Poisson.
pub fn maurer_cartan_residual(z: &FieldHandle, x: &Point) -> PointTensor {
    let mut out = poisson_diff(z, x);
    out.axpy(0.5, &schouten(z, z, x));
    out
}

/// RK4 steps used for time-one flows.
pub const FLOW_STEPS: usize = 32;

fn vector_at(y: &FieldHandle, x: &Point) -> [f64; DIM] {
    y.eval(x).as_vector()
}

/// Time-one flow of the vector field `y` by RK4; fails if the path leaves the ball of
/// radius `outer`.
pub fn flow_of_field(y: &FieldHandle, x: &Point, outer: f64) -> Result<Point> {
    let h = 1.0 / FLOW_STEPS as f64;
    let mut p = *x;
    let add = |a: &Point, k: &[f64; DIM], c: f64| -> Point { std::array::from_fn(|i| a[i] + c * k[i]) };
    for _ in 0..FLOW_STEPS {
        let k1 = vector_at(y, &p);
        let k2 = vector_at(y, &add(&p, &k1, 0.5 * h));
        let k3 = vector_at(y, &add(&p, &k2, 0.5 * h));
        let k4 = vector_at(y, &add(&p, &k3, h));
        for i in 0..DIM {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let radius = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(radius <= outer) {
            return Err(Error::Escape { radius });
        }
    }
    Ok(p)
}

/// `sup_k |T(x_k)|` over sample points (the `sampled` stand-in for a sup norm).
pub fn sampled_norm(field: &FieldHandle, points: &[Point]) -> f64 {
    points.iter().map(|x| field.eval(x).max_abs()).fold(0.0, f64::max)
}

/// Smallness check `||Y||_{0,r} < (r - s) theta` on samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Smallness {
    pub sampled_norm: f64,
    pub bound: f64,
    pub small: bool,
}

pub fn smallness(y: &FieldHandle, points: &[Point], r: f64, s: f64, theta: f64) -> Smallness {
    let n = sampled_norm(y, points);
    let bound = (r - s) * theta;
    Smallness { sampled_norm: n, bound, small: n < bound }
}

/// `(phi_Y^* W)(x) = (D phi_Y)^{-1} W(phi_Y(x))`, with the Jacobian by finite differences.
pub fn pullback_by_flow(y: &FieldHandle, w: &FieldHandle, x: &Point, outer: f64) -> Result<PointTensor> {
    let img = flow_of_field(y, x, outer)?;
    let step = 1e-4 * (1.0 + x.iter().map(|v| v * v).sum::<f64>().sqrt());
    let failed = std::sync::Mutex::new(None);
    let jac = fd_jacobian(
        |p| match flow_of_field(y, p, outer) {
            Ok(q) => q,
            Err(e) => {
                *failed.lock().unwrap() = Some(e);
                *p
            }
        },
        x,
        step,
    );
    if let Some(e) = failed.into_inner().unwrap() {
        return Err(e);
    }
    pullback_value(&w.eval(&img), &jac)
}

/// `t m_t^* W`: `x -> t (D m_t)^{-1} W(t x)` for a bivector field `W`.
pub fn scaled_pullback(w: &FieldHandle, t: f64) -> FieldHandle {
    let w = w.clone();
    FieldHandle::new(move |x| {
        let tx: Point = x.map(|v| t * v);
        let v = w.eval(&tx);
        v.scale(t * t.powi(-(v.degree() as i32)))
    })
}

/// Supplies `h^1_r(Z)`, a vector field with `[pi, h^1 Z]` approximating `-Z`.
pub trait HomotopyProvider: Send + Sync {
    fn h1(&self, z: &FieldHandle, r: f64) -> Result<FieldHandle>;
}

/// Supplies the smoothing `S_i` of step `i`.
pub trait SmoothingProvider: Send + Sync {
    fn smooth(&self, x: &FieldHandle, schedule: &Schedule) -> Result<FieldHandle>;
}

/// Homotopy stub defined on cocycles only, where it returns zero.
#[derive(Clone, Debug)]
pub struct CocycleStub {
    pub points: Vec<Point>,
    pub tol: f64,
}

impl CocycleStub {
    pub fn new(samples: usize, radius: f64) -> Self {
        CocycleStub { points: halton_ball(samples, radius, 0), tol: 1e-8 }
    }
}

impl HomotopyProvider for CocycleStub {
    fn h1(&self, z: &FieldHandle, _r: f64) -> Result<FieldHandle> {
        let defect = self.points.iter().map(|x| poisson_diff(z, x).max_abs()).fold(0.0, f64::max);
        if defect > self.tol {
            return Err(Error::Provider(format!("stub homotopy needs a cocycle, d_pi Z = {defect:e}")));
        }
        Ok(FieldHandle::constant(PointTensor::zero(1, Variance::Contravariant)))
    }
}

/// Exact inverse on the line spanned by a coboundary `[pi_1, Y0]`: reads the coefficient
/// `c` of `Z = c [pi_1, Y0]` by least squares over the samples and returns `c Y0`.
#[derive(Clone, Debug)]
pub struct CoboundaryInverse {
    pub y0: FieldHandle,
    pub points: Vec<Point>,
}

impl CoboundaryInverse {
    pub fn new(y0: FieldHandle, samples: usize, radius: f64) -> Self {
        CoboundaryInverse { y0, points: halton_ball(samples, radius, 7) }
    }

    /// `[pi_1, Y0]` as a field.
    pub fn coboundary(&self) -> FieldHandle {
        crate::foliation::poisson_diff_field(&self.y0)
    }
}

impl HomotopyProvider for CoboundaryInverse {
    fn h1(&self, z: &FieldHandle, _r: f64) -> Result<FieldHandle> {
        let (mut num, mut den) = (0.0, 0.0);
        for x in &self.points {
            let b = poisson_diff(&self.y0, x);
            let zx = z.eval(x);
            for (ix, v) in b.components() {
                num += v * zx.at(&ix);
                den += v * v;
            }
        }
        if den == 0.0 {
            return Err(Error::Provider("Y0 is a Poisson vector field".into()));
        }
        Ok(self.y0.scaled(num / den))
    }
}

/// The `t -> infinity` smoothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentitySmoothing;

impl SmoothingProvider for IdentitySmoothing {
    fn smooth(&self, x: &FieldHandle, _schedule: &Schedule) -> Result<FieldHandle> {
        Ok(x.clone())
    }
}

/// Iteration state: `pi_i = pi_1 + Z_i`.
#[derive(Clone, Debug)]
pub struct State {
    pub z: FieldHandle,
    pub i: usize,
    pub params: ScheduleParams,
}

/// Sampled diagnostics of one step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub i: usize,
    pub r_i: f64,
    pub log_t_i: f64,
    /// Sampled `||Z_i||_0`.
    pub z_norm: f64,
    /// Sampled `||X_i||_0`.
    pub x_norm: f64,
    /// Sampled `||Z_{i+1}||_0`.
    pub z_next_norm: f64,
    /// Sampled Maurer-Cartan residual of `Z_{i+1}`.
    pub mc_residual: f64,
    pub smallness: Smallness,
    /// `X_i` vanished on the samples and `Z_{i+1} = Z_i`.
    pub noop: bool,
    pub sampled: bool,
}

/// Sample points used by the step diagnostics.
pub fn step_samples(count: usize, radius: f64) -> Vec<Point> {
    halton_ball(count, radius, 101)
}

/// `X_i = S_i(h^1_{r_i}(Z_i))`, `pi_{i+1} = phi_{X_i}^* pi_i`, `Z_{i+1} = pi_{i+1} - pi_1`.
pub fn iterate_step(
    state: &State,
    homotopy: &dyn HomotopyProvider,
    smoothing: &dyn SmoothingProvider,
    samples: usize,
) -> Result<(State, StepReport)> {
    let sch = schedules(&state.params, state.i)?;
    let next = schedules(&state.params, state.i + 1)?;
    let points = step_samples(samples, next.r_i);
    let x = smoothing.smooth(&homotopy.h1(&state.z, sch.r_i)?, &sch)?;
    let z_norm = sampled_norm(&state.z, &points);
    let x_norm = sampled_norm(&x, &points);
    let small = smallness(&x, &points, sch.r_i, next.r_i, state.params.theta);
    let noop = x_norm == 0.0;
    let outer = 2.0 * state.params.big_r;
    let pi_i = pi_field(1).sum(&state.z);
    let advance = {
        let (xf, pf) = (x.clone(), pi_i.clone());
        move |p: &Point| pullback_by_flow(&xf, &pf, p, outer).map(|v| v.sub(&pi(1, p)))
    };
    let mut z_next_norm = 0.0f64;
    for p in &points {
        let v = if noop { state.z.eval(p) } else { advance(p)? };
        z_next_norm = z_next_norm.max(v.max_abs());
    }
    let z_next = if noop {
        state.z.clone()
    } else {
        FieldHandle::new(move |p| {
            advance(p).unwrap_or_else(|_| PointTensor::zero(2, Variance::Contravariant).scale(f64::NAN))
        })
    };
    let mc = points
        .iter()
        .take(samples.min(8))
        .map(|p| maurer_cartan_residual(&z_next, p).max_abs())
        .fold(0.0, f64::max);
    let report = StepReport {
        i: state.i,
        r_i: sch.r_i,
        log_t_i: sch.log_t_i,
        z_norm,
        x_norm,
        z_next_norm,
        mc_residual: mc,
        smallness: small,
        noop,
        sampled: true,
    };
    Ok((State { z: z_next, i: state.i + 1, params: state.params }, report))
}

/// Parameters and per-step diagnostics of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub params: ScheduleParams,
    pub ledger: LedgerReport,
    pub steps: Vec<StepReport>,
}

/// Runs `steps` iterations (at most three, composing recorded flows beyond that is out
/// of reach of pointwise evaluation).
pub fn run(
    z0: FieldHandle,
    params: ScheduleParams,
    homotopy: &dyn HomotopyProvider,
    smoothing: &dyn SmoothingProvider,
    steps: usize,
    samples: usize,
) -> Result<RunReport> {
    if steps > 3 {
        return Err(Error::InvalidParameter(format!("{steps} steps requested, at most 3 supported")));
    }
    let mut state = State { z: z0, i: 0, params };
    let mut out = Vec::new();
    for _ in 0..steps {
        let (s, rep) = iterate_step(&state, homotopy, smoothing, samples)?;
        out.push(rep);
        state = s;
    }
    Ok(RunReport { params, ledger: ledger_verify(&params), steps: out })
}
