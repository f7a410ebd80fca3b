//! Nash smoothing operators on sampled functions of the plane: the kernel `K`, the
//! convolution `S~_t`, the inversion `x -> x/|x|^2`, the extension from the unit disk,
//! and the flat smoothing operators `S_{t,r}`, `T_{s,r}`, `S_{t,s,r}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flatcalc::{annulus_flat_norm, Domain, GridField, NormIndex};
use crate::homotopy::{QuadratureSpec, Substitution};

fn psi(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// `0` for `u <= 0`, `1` for `u >= 1`, `psi(u) / (psi(u) + psi(1 - u))` between.
pub fn smoothstep(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let (a, b) = (psi(u), psi(1.0 - u));
        a / (a + b)
    }
}

/// The cutoff profiles used by the operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Profile {
    /// `1` on `u <= 1`, `0` on `u >= 2`; the Fourier multiplier of `K`.
    Decreasing,
    /// `0` on `u <= 1`, `1` on `u >= 2`; the weight cutoff of `T_{s,r}`.
    Increasing,
    /// `0` on `u <= 1/4`, `1` on `u >= 1/2`; the cutoff inside the extension.
    Extension,
}

impl Profile {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Profile::Decreasing => 1.0 - smoothstep(u - 1.0),
            Profile::Increasing => smoothstep(u - 1.0),
            Profile::Extension => smoothstep(4.0 * (u - 0.25)),
        }
    }
}

/// Square sampling grid for the Schwartz stage, `[-half_width, half_width]^2` with
/// `n` (odd) nodes per axis and zero padding by `pad`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchwartzGrid {
    pub half_width: f64,
    pub n: usize,
    pub pad: usize,
}

impl Default for SchwartzGrid {
    fn default() -> Self {
        SchwartzGrid { half_width: 6.0, n: 513, pad: 2 }
    }
}

impl SchwartzGrid {
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    pub fn field(&self, f: impl Fn(f64, f64) -> f64 + Sync) -> Result<GridField> {
        GridField::from_fn(self.half_width, self.n, Domain::Box, f)
    }
}

/// Dimension and sampling of the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelSpec {
    pub m: usize,
    pub grid: SchwartzGrid,
}

/// Samples of `K` on the spatial grid.
#[derive(Clone, Debug)]
pub enum KernelSamples {
    Line { h: f64, values: Vec<f64> },
    Plane(GridField),
}

fn freq(j: usize, len: usize, h: f64) -> f64 {
    let k = if j <= len / 2 { j as f64 } else { j as f64 - len as f64 };
    2.0 * PI * k / (len as f64 * h)
}

/// Inverse DFT of `(2 pi)^{-m/2} prod chi(|xi_i|)` on a centred odd grid.
fn kernel_line(n: usize, h: f64) -> Vec<f64> {
    let mut planner = FftPlanner::<f64>::new();
    let ifft = planner.plan_fft_inverse(n);
    let mut buf: Vec<C64> = (0..n)
        .map(|j| C64::new(Profile::Decreasing.eval(freq(j, n, h).abs()), 0.0))
        .collect();
    ifft.process(&mut buf);
    // buf[k] holds the value at x = k h (wrapped); reorder to -r..r
    let half = n / 2;
    (0..n)
        .map(|i| {
            let k = (i + n - half) % n;
            buf[k].re / (n as f64 * h)
        })
        .collect()
}

/// The kernel `K` with `K^(xi) = (2 pi)^{-m/2} prod_i chi(|xi_i|)`, periodized with the
/// grid period `n h`. The tail of `K` decays like `exp(-c sqrt|x|)`, so the wrap-around is
/// visible on narrow grids (about `4e-4` at `K(0)` for period 24).
pub fn nash_kernel(spec: &KernelSpec) -> Result<KernelSamples> {
    let g = spec.grid;
    if g.n < 17 || g.n % 2 == 0 {
        return Err(Error::InvalidParameter(format!("kernel grid size {}", g.n)));
    }
    let h = g.spacing();
    // share of the multiplier's energy beyond half the Nyquist frequency
    let half_nyq = 0.5 * g.nyquist();
    let (mut tot, mut beyond) = (0.0, 0.0);
    for j in 0..g.n {
        let xi = freq(j, g.n, h).abs();
        let e = Profile::Decreasing.eval(xi).powi(2);
        tot += e;
        if xi > half_nyq {
            beyond += e;
        }
    }
    if beyond > 1e-8 * tot {
        return Err(Error::Leakage { stage: "kernel aliasing", leak: beyond / tot });
    }
    let line = kernel_line(g.n, h);
    match spec.m {
        1 => Ok(KernelSamples::Line { h, values: line }),
        2 => {
            let values = (0..g.n * g.n).map(|k| line[k % g.n] * line[k / g.n]).collect();
            Ok(KernelSamples::Plane(GridField::from_values(
                g.half_width,
                g.n,
                Domain::Box,
                values,
            )?))
        }
        m => Err(Error::InvalidParameter(format!("kernel dimension {m}"))),
    }
}

struct Plans {
    forward: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inverse: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl Plans {
    fn new(len: usize) -> Self {
        let mut planner = FftPlanner::<f64>::new();
        Plans { forward: planner.plan_fft_forward(len), inverse: planner.plan_fft_inverse(len) }
    }
}

fn fft2(buf: &mut [C64], len: usize, fft: &dyn rustfft::Fft<f64>) {
    buf.par_chunks_mut(len).for_each(|row| fft.process(row));
    let mut t = vec![C64::new(0.0, 0.0); len * len];
    t.par_chunks_mut(len).enumerate().for_each(|(j, col)| {
        for (i, v) in col.iter_mut().enumerate() {
            *v = buf[i * len + j];
        }
    });
    t.par_chunks_mut(len).for_each(|col| fft.process(col));
    buf.par_chunks_mut(len).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = t[j * len + i];
        }
    });
}

/// Diagnostics of a Fourier-multiplier application.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    /// Share of `sum |output|` that falls in the zero padding.
    pub leakage: f64,
}

/// Forward transform of a box-grid field, zero padded to `max(n, pad (n - 1))` nodes.
pub struct Spectrum {
    field: GridField,
    len: usize,
    coeffs: Vec<C64>,
    plans: Plans,
}

impl Spectrum {
    pub fn new(f: &GridField, pad: usize) -> Result<Self> {
        if f.domain() != Domain::Box {
            return Err(Error::InvalidParameter("spectral stage needs a box grid".into()));
        }
        let n = f.resolution();
        let len = n.max(pad * (n - 1));
        let mut coeffs = vec![C64::new(0.0, 0.0); len * len];
        for iy in 0..n {
            for ix in 0..n {
                coeffs[iy * len + ix] = C64::new(f.value(ix, iy), 0.0);
            }
        }
        let plans = Plans::new(len);
        fft2(&mut coeffs, len, plans.forward.as_ref());
        Ok(Spectrum { field: f.clone(), len, coeffs, plans })
    }

    /// Multiplies by `m(xi_x, xi_y)` and transforms back.
    pub fn apply(&self, m: impl Fn(f64, f64) -> C64 + Sync) -> (GridField, SpectralReport) {
        let (len, h) = (self.len, self.field.spacing());
        self.apply_indexed(|jx, jy| m(freq(jx, len, h), freq(jy, len, h)))
    }

    /// Multiplies by `mx(xi_x) my(xi_y)` and transforms back.
    pub fn apply_separable(
        &self,
        mx: impl Fn(f64) -> C64,
        my: impl Fn(f64) -> C64,
    ) -> (GridField, SpectralReport) {
        let (len, h) = (self.len, self.field.spacing());
        let ax: Vec<C64> = (0..len).map(|j| mx(freq(j, len, h))).collect();
        let ay: Vec<C64> = (0..len).map(|j| my(freq(j, len, h))).collect();
        self.apply_indexed(|jx, jy| ax[jx] * ay[jy])
    }

    fn apply_indexed(&self, m: impl Fn(usize, usize) -> C64 + Sync) -> (GridField, SpectralReport) {
        let (n, len) = (self.field.resolution(), self.len);
        let mut buf = self.coeffs.clone();
        buf.par_chunks_mut(len).enumerate().for_each(|(jy, row)| {
            for (jx, v) in row.iter_mut().enumerate() {
                *v *= m(jx, jy);
            }
        });
        fft2(&mut buf, len, self.plans.inverse.as_ref());
        let norm = 1.0 / (len * len) as f64;
        let (mut inside, mut outside) = (0.0, 0.0);
        let mut values = vec![0.0; n * n];
        for iy in 0..len {
            for ix in 0..len {
                let v = buf[iy * len + ix].re * norm;
                if ix < n && iy < n {
                    values[iy * n + ix] = v;
                    inside += v.abs();
                } else {
                    outside += v.abs();
                }
            }
        }
        let total = inside + outside;
        let leakage = if total > 0.0 { outside / total } else { 0.0 };
        (self.field.with_values(values), SpectralReport { leakage })
    }

    /// `D^a S~_t f` (or `D^a f` for `t = None`) for every `|a| <= order`.
    pub fn derivatives(&self, t: Option<f64>, order: usize) -> Vec<Vec<f64>> {
        let chi = |xi: f64| t.map_or(1.0, |t| Profile::Decreasing.eval(xi.abs() / t));
        crate::flatcalc::multi_indices(order)
            .into_iter()
            .map(|(ax, ay)| {
                let (g, _) = self.apply_separable(
                    |a| C64::new(0.0, a).powu(ax as u32) * chi(a),
                    |b| C64::new(0.0, b).powu(ay as u32) * chi(b),
                );
                g.values().to_vec()
            })
            .collect()
    }
}

/// Applies the Fourier multiplier `m(xi_x, xi_y)` to a field on a box grid, with
/// zero padding by `pad`.
pub fn apply_multiplier(
    f: &GridField,
    pad: usize,
    m: impl Fn(f64, f64) -> C64 + Sync,
) -> Result<(GridField, SpectralReport)> {
    Ok(Spectrum::new(f, pad)?.apply(m))
}

/// `S~_t f = K_t * f` by multiplying with `chi(|xi_x|/t) chi(|xi_y|/t)`.
pub fn smooth_schwartz(f: &GridField, t: f64, pad: usize) -> Result<(GridField, SpectralReport)> {
    if !(t >= 1.0) {
        return Err(Error::InvalidParameter(format!("smoothing parameter t = {t} < 1")));
    }
    let chi = |xi: f64| C64::new(Profile::Decreasing.eval(xi.abs() / t), 0.0);
    Ok(Spectrum::new(f, pad)?.apply_separable(chi, chi))
}

/// [`smooth_schwartz`] that fails when the padding leakage exceeds `tol`.
pub fn smooth_schwartz_checked(f: &GridField, t: f64, pad: usize, tol: f64) -> Result<GridField> {
    let (g, rep) = smooth_schwartz(f, t, pad)?;
    if rep.leakage > tol {
        return Err(Error::Leakage { stage: "schwartz convolution", leak: rep.leakage });
    }
    Ok(g)
}

/// Spectral partial derivatives `D^a (S~_t f)` for all `|a| <= order`; `t = None`
/// differentiates `f` itself.
pub fn spectral_derivatives(
    f: &GridField,
    t: Option<f64>,
    order: usize,
    pad: usize,
) -> Result<Vec<Vec<f64>>> {
    Ok(Spectrum::new(f, pad)?.derivatives(t, order))
}

/// Which side of the inversion duality a field lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Flavor {
    Flat,
    Schwartz,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InversionReport {
    pub output: Flavor,
    /// Nodes whose image `x/|x|^2` left the input grid (set to zero).
    pub truncated: usize,
}

/// `(rho^* f)(x) = f(x / |x|^2)` resampled onto a grid of radius `r` and resolution `n`.
pub fn invert(
    f: &GridField,
    input: Flavor,
    r: f64,
    n: usize,
    domain: Domain,
) -> Result<(GridField, InversionReport)> {
    let rin = f.radius();
    let fd = f.domain();
    let out = GridField::from_fn(r, n, domain, |x, y| {
        let d2 = x * x + y * y;
        if d2 == 0.0 {
            return f64::NAN;
        }
        let (u, v) = (x / d2, y / d2);
        let inside = match fd {
            Domain::Disk => u.hypot(v) <= rin,
            Domain::Box => u.abs() <= rin && v.abs() <= rin,
        };
        if !inside {
            return f64::NAN;
        }
        f.sample(u, v).unwrap_or(f64::NAN)
    })?;
    let truncated = out.values().iter().filter(|v| v.is_nan()).count();
    let out = out.map(|_, _, v| if v.is_nan() { 0.0 } else { v });
    let output = match input {
        Flavor::Flat => Flavor::Schwartz,
        Flavor::Schwartz => Flavor::Flat,
    };
    Ok((out, InversionReport { output, truncated }))
}

/// Solves `sum_j a_j n! / c_j^{n+1} = (-1)^n`, `n = 0..=order`, `c_j = 2^j`, exactly.
fn moment_coefficients(order: usize) -> Result<Vec<f64>> {
    let m = order + 1;
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|n| {
            let fact: i64 = (1..=n as i64).product();
            (0..m)
                .map(|j| {
                    let den = BigInt::from(2).pow((j * (n + 1)) as u32);
                    BigRational::new(BigInt::from(fact), den)
                })
                .chain(std::iter::once(if n % 2 == 0 { int(1) } else { int(-1) }))
                .collect()
        })
        .collect();
    for col in 0..m {
        let piv = (col..m)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidParameter("singular moment system".into()))?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let fac = a[r][col].clone();
                for c in col..=m {
                    let sub = &fac * &a[col][c];
                    a[r][c] = &a[r][c] - sub;
                }
            }
        }
    }
    debug_assert!(a[0][0] == BigRational::one());
    Ok((0..m).map(|r| a[r][m].to_f64().unwrap_or(f64::NAN)).collect())
}

/// Extension operator from the closed unit disk with
/// `phi(t) = sum_j a_j e^{-2^j t}` matching the first `order + 1` moments.
#[derive(Clone, Debug, Serialize)]
pub struct Extension {
    pub coeffs: Vec<f64>,
    pub rates: Vec<f64>,
    /// 2-norm condition number of the moment matrix.
    pub condition: f64,
    /// Max moment defect of the rounded coefficients.
    pub moment_residual: f64,
}

impl Extension {
    pub fn new(order: usize) -> Result<Self> {
        let coeffs = moment_coefficients(order)?;
        let rates: Vec<f64> = (0..=order).map(|j| 2f64.powi(j as i32)).collect();
        let m = order + 1;
        let fact = |n: usize| (1..=n).map(|v| v as f64).product::<f64>();
        let mat = DMatrix::from_fn(m, m, |n, j| fact(n) / rates[j].powi(n as i32 + 1));
        let sv = mat.clone().svd(false, false).singular_values;
        let condition = sv.max() / sv.min();
        let moment_residual = (0..m)
            .map(|n| {
                let s: f64 = (0..m).map(|j| mat[(n, j)] * coeffs[j]).sum();
                (s - if n % 2 == 0 { 1.0 } else { -1.0 }).abs()
            })
            .fold(0.0, f64::max);
        Ok(Extension { coeffs, rates, condition, moment_residual })
    }

    pub fn phi(&self, t: f64) -> f64 {
        self.coeffs.iter().zip(&self.rates).map(|(a, c)| a * (-c * t).exp()).sum()
    }

    /// `eps(f)(x)`: `f(x)` on the unit disk, otherwise
    /// `chi(1/|x|) int_0^inf phi(t) (chi f)(x / |x|^{1+t}) dt`.
    pub fn eval(&self, f: &GridField, x: f64, y: f64) -> f64 {
        let d = x.hypot(y);
        if d <= 1.0 {
            return f.sample(x, y).unwrap_or(0.0);
        }
        let w = Profile::Extension.eval(1.0 / d);
        if w == 0.0 {
            return 0.0;
        }
        let t_max = (4f64.ln() / d.ln()).min(60.0);
        let q = QuadratureSpec { order: 10, panels: 40, substitution: Substitution::Geometric { ratio: 1.35 } };
        let mut acc = 0.0;
        for (t, wt) in q.nodes(t_max) {
            let s = d.powf(-1.0 - t);
            let (u, v) = (x * s, y * s);
            let c = Profile::Extension.eval(u.hypot(v));
            if c == 0.0 {
                continue;
            }
            acc += wt * self.phi(t) * c * f.sample(u, v).unwrap_or(0.0);
        }
        w * acc
    }

    /// `eps(f)` sampled on a grid of radius `r`.
    pub fn extend(&self, f: &GridField, r: f64, n: usize) -> Result<GridField> {
        check_unit_disk(f)?;
        GridField::from_fn(r, n, Domain::Box, |x, y| self.eval(f, x, y))
    }
}

fn check_unit_disk(f: &GridField) -> Result<()> {
    if (f.radius() - 1.0).abs() > 1e-12 {
        return Err(Error::GridMismatch(format!("extension needs the unit disk, got r = {}", f.radius())));
    }
    Ok(())
}

/// `eps(f)` on the disk of radius 4, outside of which it vanishes.
pub fn extend(f: &GridField, n: usize) -> Result<(GridField, Extension)> {
    let e = Extension::new(8)?;
    let g = e.extend(f, 4.0, n)?;
    Ok((g, e))
}

/// Per-stage diagnostics of the flat smoothing chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub extension_condition: f64,
    pub convolution_leakage: f64,
    /// Output nodes with `|x| < 1/half_width`, set to zero.
    pub truncated: usize,
}

/// Smoothing configuration for the flat operators.
#[derive(Clone, Debug)]
pub struct FlatSmoother {
    pub grid: SchwartzGrid,
    pub extension: Extension,
}

impl FlatSmoother {
    pub fn new(grid: SchwartzGrid) -> Result<Self> {
        Ok(FlatSmoother { grid, extension: Extension::new(8)? })
    }

    /// `rho^* eps(f)` on the Schwartz grid.
    pub fn schwartz_image(&self, f: &GridField) -> Result<GridField> {
        check_unit_disk(f)?;
        self.grid.field(|x, y| {
            let d2 = x * x + y * y;
            if d2 < 1.0 / 16.0 {
                0.0
            } else {
                self.extension.eval(f, x / d2, y / d2)
            }
        })
    }

    /// `S_{t,1} = rho_B^* o iota^* o S~_t o rho^* o eps`.
    pub fn smooth_unit(&self, f: &GridField, t: f64) -> Result<(GridField, ChainReport)> {
        let mut v = self.smooth_unit_many(f, &[t])?;
        Ok(v.remove(0))
    }

    /// [`Self::smooth_unit`] for several `t`, sharing the Schwartz image.
    pub fn smooth_unit_many(&self, f: &GridField, ts: &[f64]) -> Result<Vec<(GridField, ChainReport)>> {
        let g = self.schwartz_image(f)?;
        let l = self.grid.half_width;
        ts.iter()
            .map(|&t| {
                let (sg, rep) = smooth_schwartz(&g, t, self.grid.pad)?;
                let out = f.map(|x, y, _| {
                    let d2 = x * x + y * y;
                    if d2 * l * l < 1.0 {
                        return f64::NAN;
                    }
                    sg.sample(x / d2, y / d2).unwrap_or(f64::NAN)
                });
                let truncated = out
                    .values()
                    .iter()
                    .enumerate()
                    .filter(|(k, v)| v.is_nan() && f.in_domain(*k))
                    .count();
                let out = out.map(|_, _, v| if v.is_nan() { 0.0 } else { v });
                Ok((
                    out,
                    ChainReport {
                        extension_condition: self.extension.condition,
                        convolution_leakage: rep.leakage,
                        truncated,
                    },
                ))
            })
            .collect()
    }

    /// `S_{t,r} = m_{1/r}^* o S_{t,1} o m_r^*`; on grids the rescaling only relabels
    /// the radius.
    pub fn smooth_flat(&self, f: &GridField, t: f64, r: f64) -> Result<(GridField, ChainReport)> {
        check_radius(f, r)?;
        let unit = GridField::from_values(1.0, f.resolution(), f.domain(), f.values().to_vec())?;
        let (g, rep) = self.smooth_unit(&unit, t)?;
        Ok((GridField::from_values(r, f.resolution(), f.domain(), g.values().to_vec())?, rep))
    }

    /// `S_{t,s,r} = T_{s,r} o S_{t,r}`.
    pub fn smooth_combined(
        &self,
        f: &GridField,
        t: f64,
        s: f64,
        r: f64,
    ) -> Result<(GridField, ChainReport)> {
        let (g, rep) = self.smooth_flat(f, t, r)?;
        Ok((cutoff_t(&g, s, r)?, rep))
    }
}

fn check_radius(f: &GridField, r: f64) -> Result<()> {
    if (f.radius() - r).abs() > 1e-12 * r.max(1.0) {
        return Err(Error::GridMismatch(format!("field radius {} vs operator radius {r}", f.radius())));
    }
    Ok(())
}

/// `T_{s,r} f = chi(s |x| / r) f` with the increasing profile.
pub fn cutoff_t(f: &GridField, s: f64, r: f64) -> Result<GridField> {
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("weight smoothing s = {s}")));
    }
    check_radius(f, r)?;
    Ok(f.map(|x, y, v| Profile::Increasing.eval(s * x.hypot(y) / r) * v))
}

/// Exponent probe output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub operator: String,
    pub indices: Vec<i64>,
    pub grid: Vec<f64>,
    pub measured: Vec<f64>,
    /// Least-squares slope of `log measured` against `log grid`, over points above
    /// the noise floor; `None` if fewer than two such points.
    pub fitted_slope: Option<f64>,
    /// `max measured / (param^exponent * reference)`.
    pub fitted_constant: f64,
    pub exponent: f64,
    pub pass: bool,
}

/// Fits `log y = c + slope log x` over `y > floor`.
pub fn fit_slope(xs: &[f64], ys: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| **y > floor)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Builds a report for a bound `measured <= C param^exponent reference`; passes when
/// the fitted slope is at most `exponent + slack` (vacuous below the noise floor).
pub fn probe_report(
    operator: &str,
    indices: Vec<i64>,
    grid: Vec<f64>,
    measured: Vec<f64>,
    reference: f64,
    exponent: f64,
    floor: f64,
    slack: f64,
) -> ProbeReport {
    let fitted_slope = fit_slope(&grid, &measured, floor);
    let fitted_constant = grid
        .iter()
        .zip(&measured)
        .map(|(p, m)| m / (p.powf(exponent) * reference.max(f64::MIN_POSITIVE)))
        .fold(0.0, f64::max);
    let pass = fitted_slope.map_or(true, |s| s <= exponent + slack);
    ProbeReport {
        operator: operator.to_string(),
        indices,
        grid,
        measured,
        fitted_slope,
        fitted_constant,
        exponent,
        pass,
    }
}

/// `t, s` values `1, 2, 4, ..., 64`.
pub fn dyadic_grid() -> Vec<f64> {
    (0..7).map(|k| 2f64.powi(k)).collect()
}

/// Test families for the probes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `e^{-|x|^2}`.
    Gaussian,
    /// `e^{-|x|}`, Lipschitz with a kink at the origin.
    Cone,
    /// `e^{-|x|^2}` on the half plane `x > 0`, zero elsewhere.
    Step,
    /// `e^{-1/|x|^2} cos(2x + y)`, flat at the origin.
    FlatModulated,
}

impl Family {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let r2 = x * x + y * y;
        match self {
            Family::Gaussian => (-r2).exp(),
            Family::Cone => (-r2.sqrt()).exp(),
            Family::Step => {
                if x > 0.0 {
                    (-r2).exp()
                } else if x == 0.0 {
                    0.5 * (-r2).exp()
                } else {
                    0.0
                }
            }
            Family::FlatModulated => {
                if r2 == 0.0 {
                    0.0
                } else {
                    (-1.0 / r2).exp() * (2.0 * x + y).cos()
                }
            }
        }
    }
}

/// Grids and parameter ranges shared by the probes.
#[derive(Clone, Debug)]
pub struct ProbeConfig {
    pub schwartz: SchwartzGrid,
    /// Resolution of the disk grids carrying flat functions.
    pub disk_n: usize,
    pub params: Vec<f64>,
    /// Allowed excess of a fitted slope over its exponent.
    pub slack: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { schwartz: SchwartzGrid::default(), disk_n: 257, params: dyadic_grid(), slack: 0.15 }
    }
}

fn noise_floor(measured: &[f64]) -> f64 {
    1e-9 * measured.iter().cloned().fold(0.0, f64::max) + 1e-13
}

fn sup_all(derivs: &[Vec<f64>]) -> f64 {
    derivs.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

fn idx(v: &[usize]) -> Vec<i64> {
    v.iter().map(|&u| u as i64).collect()
}

/// `||S~_t f||_{n+l,0} <= C t^l ||f||_{n,0}` with spectral derivatives.
pub fn probe_schwartz_gain(cfg: &ProbeConfig, family: Family, n: usize, l: usize) -> Result<ProbeReport> {
    let f = cfg.schwartz.field(|x, y| family.eval(x, y))?;
    let sp = Spectrum::new(&f, cfg.schwartz.pad)?;
    let reference = sup_all(&sp.derivatives(None, n));
    let measured: Vec<f64> =
        cfg.params.iter().map(|&t| sup_all(&sp.derivatives(Some(t), n + l))).collect();
    let floor = noise_floor(&measured);
    Ok(probe_report(
        &format!("S~_t/{family:?}"),
        idx(&[n, l]),
        cfg.params.clone(),
        measured,
        reference,
        l as f64,
        floor,
        cfg.slack,
    ))
}

/// `||(id - S~_t) f||_{n,0} <= C t^{-l} ||f||_{n+l,0}`.
pub fn probe_schwartz_identity(cfg: &ProbeConfig, family: Family, n: usize, l: usize) -> Result<ProbeReport> {
    let f = cfg.schwartz.field(|x, y| family.eval(x, y))?;
    let sp = Spectrum::new(&f, cfg.schwartz.pad)?;
    let exact = sp.derivatives(None, n + l);
    let reference = sup_all(&exact);
    let measured: Vec<f64> = cfg
        .params
        .iter()
        .map(|&t| {
            let smooth = sp.derivatives(Some(t), n);
            smooth
                .iter()
                .zip(&exact)
                .flat_map(|(s, e)| s.iter().zip(e).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max)
        })
        .collect();
    let floor = noise_floor(&measured);
    Ok(probe_report(
        &format!("id-S~_t/{family:?}"),
        idx(&[n, l]),
        cfg.params.clone(),
        measured,
        reference,
        -(l as f64),
        floor,
        cfg.slack,
    ))
}

fn flat_input(cfg: &ProbeConfig, r: f64) -> Result<GridField> {
    GridField::from_fn(r, cfg.disk_n, Domain::Disk, |x, y| Family::FlatModulated.eval(x / r, y / r))
}

/// Inner radius of the annulus on which flat-chain outputs are measured, clear of the
/// region cut by the finite Schwartz grid.
pub fn chain_inner_radius(cfg: &ProbeConfig, r: f64) -> f64 {
    r * (1.0 / cfg.schwartz.half_width + 0.08)
}

/// `||S_{t,r} f||_{n+1,k} <= C t ||f||_{n,k+2}` and
/// `||(S_{t,r} - id) f||_{n,k+2} <= C t^{-1} ||f||_{n+1,k}`, on the flat family.
pub fn probe_flat_smoothing(cfg: &ProbeConfig, n: usize, k: u32, r: f64) -> Result<[ProbeReport; 2]> {
    let f = flat_input(cfg, r)?;
    let sm = FlatSmoother::new(cfg.schwartz)?;
    let inner = chain_inner_radius(cfg, r);
    let norm = |g: &GridField, n: usize, k: u32| annulus_flat_norm(g, NormIndex::new(n, k, r), inner);
    let unit = GridField::from_values(1.0, f.resolution(), f.domain(), f.values().to_vec())?;
    let outs = sm.smooth_unit_many(&unit, &cfg.params)?;
    let mut gain = Vec::new();
    let mut ident = Vec::new();
    for (o, _) in outs {
        let o = GridField::from_values(r, o.resolution(), o.domain(), o.values().to_vec())?;
        gain.push(norm(&o, n + 1, k));
        ident.push(norm(&o.sub(&f)?, n, k + 2));
    }
    let (fg, fi) = (noise_floor(&gain), noise_floor(&ident));
    let ix = vec![n as i64, k as i64];
    Ok([
        probe_report("S_{t,r}", ix.clone(), cfg.params.clone(), gain, norm(&f, n, k + 2), 1.0, fg, cfg.slack),
        probe_report("S_{t,r}-id", ix, cfg.params.clone(), ident, norm(&f, n + 1, k), -1.0, fi, cfg.slack),
    ])
}

/// `||T_{s,r} f||_{n,k+j} <= C s^j ||f||_{n,k}` and
/// `||(T_{s,r} - id) f||_{n,k} <= C s^{-j} ||f||_{n,k+j}`.
pub fn probe_weight_smoothing(cfg: &ProbeConfig, n: usize, k: u32, j: u32, r: f64) -> Result<[ProbeReport; 2]> {
    let f = flat_input(cfg, r)?;
    let norm = |g: &GridField, n: usize, k: u32| crate::flatcalc::flat_norm(g, NormIndex::new(n, k, r));
    let mut gain = Vec::new();
    let mut ident = Vec::new();
    for &s in &cfg.params {
        let g = cutoff_t(&f, s, r)?;
        gain.push(norm(&g, n, k + j)?);
        ident.push(norm(&g.sub(&f)?, n, k)?);
    }
    let (fg, fi) = (noise_floor(&gain), noise_floor(&ident));
    let ix = vec![n as i64, k as i64, j as i64];
    Ok([
        probe_report("T_{s,r}", ix.clone(), cfg.params.clone(), gain, norm(&f, n, k)?, j as f64, fg, cfg.slack),
        probe_report(
            "T_{s,r}-id",
            ix,
            cfg.params.clone(),
            ident,
            norm(&f, n, k + j)?,
            -(j as f64),
            fi,
            cfg.slack,
        ),
    ])
}

/// `||S_{t,s,r} f||_{n+l,k+j} <= C s^j t^l ||f||_{n,k+2l}` for `l = 1`: slopes in `t`
/// at `s = 1` and in `s` at `t = 1`, plus the sup of the normalized ratio over the grid.
pub fn probe_combined(cfg: &ProbeConfig, n: usize, k: u32, j: u32, r: f64) -> Result<(ProbeReport, ProbeReport, f64)> {
    let f = flat_input(cfg, r)?;
    let sm = FlatSmoother::new(cfg.schwartz)?;
    let inner = chain_inner_radius(cfg, r);
    let norm = |g: &GridField, n: usize, k: u32| annulus_flat_norm(g, NormIndex::new(n, k, r), inner);
    let reference = norm(&f, n, k + 2);
    let unit = GridField::from_values(1.0, f.resolution(), f.domain(), f.values().to_vec())?;
    let outs = sm.smooth_unit_many(&unit, &cfg.params)?;
    let ps = &cfg.params;
    let mut table = vec![vec![0.0; ps.len()]; ps.len()];
    for (it, (o, _)) in outs.iter().enumerate() {
        let o = GridField::from_values(r, o.resolution(), o.domain(), o.values().to_vec())?;
        for (is, &s) in ps.iter().enumerate() {
            table[it][is] = norm(&cutoff_t(&o, s, r)?, n + 1, k + j);
        }
    }
    let ratio = (0..ps.len())
        .flat_map(|it| (0..ps.len()).map(move |is| (it, is)))
        .map(|(it, is)| table[it][is] / (ps[is].powi(j as i32) * ps[it] * reference))
        .fold(0.0, f64::max);
    // T_{1,r} removes the whole ball, so the t-direction is read at s = 8
    let s_ref = ps.iter().position(|&s| s >= 8.0).unwrap_or(ps.len() - 1);
    let in_t: Vec<f64> = (0..ps.len()).map(|it| table[it][s_ref]).collect();
    let in_s: Vec<f64> = (0..ps.len()).map(|is| table[0][is]).collect();
    let ix = vec![n as i64, 1, k as i64, j as i64];
    let (ft, fs) = (noise_floor(&in_t), noise_floor(&in_s));
    Ok((
        probe_report("S_{t,s,r}/t", ix.clone(), ps.clone(), in_t, reference, 1.0, ft, cfg.slack),
        probe_report("S_{t,s,r}/s", ix, ps.clone(), in_s, reference, j as f64, fs, cfg.slack),
        ratio,
    ))
}

/// The family `f_a = e^{-a|x|^2 - 1/(a|x|^2)}`, with `rho^* f_a = f_{1/a}`.
pub fn inversion_family(a: f64) -> impl Fn(f64, f64) -> f64 + Sync + Copy {
    move |x, y| {
        let r2 = x * x + y * y;
        if r2 == 0.0 {
            0.0
        } else {
            (-a * r2 - 1.0 / (a * r2)).exp()
        }
    }
}

/// `sup_a ||rho^* f_a||'_{n,k} / ||f_a||_{n,k+2n}` with the global norms on a box of
/// half-width `half_width` sampled with `grid_n` nodes per axis.
pub fn inversion_constant(amps: &[f64], n: usize, k: u32, half_width: f64, grid_n: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for &a in amps {
        let f = GridField::from_fn(half_width, grid_n, Domain::Box, inversion_family(a))?;
        let (g, _) = invert(&f, Flavor::Flat, half_width, grid_n, Domain::Box)?;
        let lhs = crate::flatcalc::global_schwartz_norm(&g, n, k);
        let rhs = crate::flatcalc::global_flat_norm(&f, n, k + 2 * n as u32)?;
        worst = worst.max(lhs / rhs);
    }
    Ok(worst)
}
