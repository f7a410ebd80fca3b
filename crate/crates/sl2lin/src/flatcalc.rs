//! Calculus of flat functions on C = R^2: sampled fields, weighted norms, the modules
//! `M` and `K`, parity decompositions, the square map, and the fields `Y_i`, `W_i`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Region of the square grid that carries the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Closed disk of radius `r`; corners are sampled but masked.
    Disk,
    /// The whole square `[-r, r]^2`.
    Box,
}

/// Real samples on the square `[-r, r]^2` with `n` (odd) points per axis.
/// Node `(ix, iy)` sits at `(-r + ix h, -r + iy h)`, `h = 2r/(n-1)`, stored at `iy * n + ix`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    r: f64,
    n: usize,
    domain: Domain,
    values: Vec<f64>,
}

fn check_geometry(r: f64, n: usize) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("grid radius {r}")));
    }
    if n < 16 {
        return Err(Error::InvalidParameter(format!("grid resolution {n} below 16")));
    }
    if n % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution {n} must be odd so the origin is a node"
        )));
    }
    Ok(())
}

impl GridField {
    pub fn from_fn(
        r: f64,
        n: usize,
        domain: Domain,
        f: impl Fn(f64, f64) -> f64 + Sync,
    ) -> Result<Self> {
        check_geometry(r, n)?;
        let h = 2.0 * r / (n - 1) as f64;
        let values = (0..n * n)
            .into_par_iter()
            .map(|k| f(-r + (k % n) as f64 * h, -r + (k / n) as f64 * h))
            .collect();
        Ok(GridField { r, n, domain, values })
    }

    pub fn from_values(r: f64, n: usize, domain: Domain, values: Vec<f64>) -> Result<Self> {
        check_geometry(r, n)?;
        if values.len() != n * n {
            return Err(Error::GridMismatch(format!("{} values for {n}x{n}", values.len())));
        }
        Ok(GridField { r, n, domain, values })
    }

    pub fn zeros(r: f64, n: usize, domain: Domain) -> Result<Self> {
        Self::from_values(r, n, domain, vec![0.0; n * n])
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn resolution(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.r / (self.n - 1) as f64
    }

    /// Radius of the neighbourhood of the origin excluded from weighted quantities.
    pub fn grid_floor(&self) -> f64 {
        2.0 * self.spacing()
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.r + i as f64 * self.spacing()
    }

    pub fn point(&self, k: usize) -> (f64, f64) {
        (self.coord(k % self.n), self.coord(k / self.n))
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.n + ix
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.index(ix, iy)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn center(&self) -> usize {
        self.index(self.n / 2, self.n / 2)
    }

    /// Whether node `k` belongs to the domain.
    pub fn in_domain(&self, k: usize) -> bool {
        match self.domain {
            Domain::Box => true,
            Domain::Disk => {
                let (x, y) = self.point(k);
                x.hypot(y) <= self.r * (1.0 + 1e-12)
            }
        }
    }

    pub fn same_grid(&self, o: &GridField) -> bool {
        self.n == o.n && self.r == o.r
    }

    fn require_same(&self, o: &GridField) -> Result<()> {
        if self.same_grid(o) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.r, self.n, o.r, o.n
            )))
        }
    }

    pub fn with_values(&self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.values.len());
        GridField { values, ..self.clone() }
    }

    pub fn with_domain(&self, domain: Domain) -> Self {
        GridField { domain, ..self.clone() }
    }

    /// Pointwise map `(x, y, value) -> value`.
    pub fn map(&self, f: impl Fn(f64, f64, f64) -> f64 + Sync) -> Self {
        let values = (0..self.values.len())
            .into_par_iter()
            .map(|k| {
                let (x, y) = self.point(k);
                f(x, y, self.values[k])
            })
            .collect();
        self.with_values(values)
    }

    pub fn zip(&self, o: &GridField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.require_same(o)?;
        Ok(self.with_values(self.values.iter().zip(&o.values).map(|(a, b)| f(*a, *b)).collect()))
    }

    pub fn add(&self, o: &GridField) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &GridField) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.with_values(self.values.iter().map(|v| c * v).collect())
    }

    /// Max of `|value|` over domain nodes with `|x| <= r`.
    pub fn max_abs_within(&self, r: f64) -> f64 {
        (0..self.values.len())
            .filter(|&k| self.in_domain(k) && {
                let (x, y) = self.point(k);
                x.hypot(y) <= r
            })
            .map(|k| self.values[k].abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_within(f64::INFINITY)
    }

    /// Six-point Lagrange interpolation (tensor product). `None` outside the square.
    pub fn sample(&self, x: f64, y: f64) -> Option<f64> {
        let h = self.spacing();
        let (u, v) = ((x + self.r) / h, (y + self.r) / h);
        let last = (self.n - 1) as f64;
        let eps = 1e-9;
        if !(u >= -eps && u <= last + eps && v >= -eps && v <= last + eps) {
            return None;
        }
        let (su, wu) = lagrange_weights(u, self.n);
        let (sv, wv) = lagrange_weights(v, self.n);
        let mut acc = 0.0;
        for (j, wy) in wv.iter().enumerate() {
            let row = (sv + j) * self.n;
            let mut s = 0.0;
            for (i, wx) in wu.iter().enumerate() {
                s += wx * self.values[row + su + i];
            }
            acc += wy * s;
        }
        Some(acc)
    }

    /// Finite-difference partial derivative `d_x^ax d_y^ay` at all nodes.
    pub fn derivative(&self, ax: usize, ay: usize) -> Vec<f64> {
        let mut out = self.values.clone();
        let h = self.spacing();
        for _ in 0..ax {
            out = fd_axis(&out, self.n, h, Axis::X);
        }
        for _ in 0..ay {
            out = fd_axis(&out, self.n, h, Axis::Y);
        }
        out
    }

    /// CSV: a `r,resolution` header line followed by `ix,iy,value` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "r,resolution");
        let _ = writeln!(s, "{},{}", self.r, self.n);
        let _ = writeln!(s, "ix,iy,value");
        for k in 0..self.values.len() {
            let _ = writeln!(s, "{},{},{:e}", k % self.n, k / self.n, self.values[k]);
        }
        s
    }
}

/// Start index and weights of the six-point stencil around fractional index `u`.
fn lagrange_weights(u: f64, n: usize) -> (usize, [f64; 6]) {
    let base = (u.floor() as isize - 2).clamp(0, n as isize - 6) as usize;
    let mut w = [1.0; 6];
    for i in 0..6 {
        let xi = (base + i) as f64;
        for j in 0..6 {
            if i != j {
                let xj = (base + j) as f64;
                w[i] *= (u - xj) / (xi - xj);
            }
        }
    }
    (base, w)
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

/// Fourth-order first derivative along an axis, one-sided at the edges.
fn fd_axis(v: &[f64], n: usize, h: f64, axis: Axis) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    let at = |line: usize, i: usize| match axis {
        Axis::X => line * n + i,
        Axis::Y => i * n + line,
    };
    for line in 0..n {
        let g = |i: usize| v[at(line, i)];
        for i in 0..n {
            let d = if i >= 2 && i + 2 < n {
                (g(i - 2) - 8.0 * g(i - 1) + 8.0 * g(i + 1) - g(i + 2)) / 12.0
            } else if i == 0 {
                (-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) / 12.0
            } else if i == 1 {
                (-3.0 * g(0) - 10.0 * g(1) + 18.0 * g(2) - 6.0 * g(3) + g(4)) / 12.0
            } else if i == n - 1 {
                (25.0 * g(n - 1) - 48.0 * g(n - 2) + 36.0 * g(n - 3) - 16.0 * g(n - 4)
                    + 3.0 * g(n - 5))
                    / 12.0
            } else {
                (3.0 * g(n - 1) + 10.0 * g(n - 2) - 18.0 * g(n - 3) + 6.0 * g(n - 4) - g(n - 5))
                    / 12.0
            };
            out[at(line, i)] = d / h;
        }
    }
    out
}

/// Indices of the norm `||.||_{n,k,r}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormIndex {
    pub n: usize,
    pub k: u32,
    pub r: f64,
}

impl NormIndex {
    pub fn new(n: usize, k: u32, r: f64) -> Self {
        NormIndex { n, k, r }
    }
}

/// All multi-indices `(ax, ay)` with `ax + ay <= n`.
pub fn multi_indices(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|d| (0..=d).map(move |ax| (ax, d - ax))).collect()
}

fn check_flat(f: &GridField, k: u32) -> Result<()> {
    if k == 0 {
        return Ok(());
    }
    let v0 = f.values[f.center()].abs();
    if v0 > 1e-10 + 1e-8 * f.max_abs() {
        return Err(Error::NotFlat { value: v0 });
    }
    Ok(())
}

/// Nodes entering a sup over `|x| <= r`; when `floor` the grid-floor disk is removed.
fn region(f: &GridField, r: f64, floor: bool) -> Vec<usize> {
    let eps = f.grid_floor();
    (0..f.values.len())
        .filter(|&k| {
            let (x, y) = f.point(k);
            let d = x.hypot(y);
            f.in_domain(k) && d <= r * (1.0 + 1e-12) && !(floor && d < eps)
        })
        .collect()
}

/// `sup_{nodes} weight(|x|) |D^a f|` over the supplied derivative arrays.
pub fn weighted_sup(
    f: &GridField,
    derivs: &[Vec<f64>],
    r: f64,
    weight: impl Fn(f64) -> f64 + Sync,
    floor: bool,
) -> f64 {
    let nodes = region(f, r, floor);
    derivs
        .par_iter()
        .map(|d| {
            nodes
                .iter()
                .map(|&k| {
                    let (x, y) = f.point(k);
                    weight(x.hypot(y)) * d[k].abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

fn fd_derivs(f: &GridField, n: usize) -> Vec<Vec<f64>> {
    multi_indices(n).into_par_iter().map(|(ax, ay)| f.derivative(ax, ay)).collect()
}

/// `||f||_{n,k,r} = sup_{|x|<=r} sup_{|a|<=n} |x|^{-k} |D^a f(x)|` by finite differences.
pub fn flat_norm(f: &GridField, idx: NormIndex) -> Result<f64> {
    check_flat(f, idx.k)?;
    let k = idx.k as i32;
    Ok(weighted_sup(f, &fd_derivs(f, idx.n), idx.r, |d| d.powi(-k), idx.k > 0))
}

/// `|f|_{n,k,r} = sup_{|x|<=r} sup_{|a|<=n} |D^a (|x|^{-k} f)(x)|`.
pub fn alt_norm(f: &GridField, idx: NormIndex) -> Result<f64> {
    check_flat(f, idx.k)?;
    let k = idx.k as i32;
    let eps = f.grid_floor();
    let g = f.map(|x, y, v| {
        let d = x.hypot(y);
        if idx.k == 0 {
            v
        } else if d < 0.5 * eps {
            0.0
        } else {
            v * d.powi(-k)
        }
    });
    Ok(weighted_sup(&g, &fd_derivs(&g, idx.n), idx.r, |_| 1.0, idx.k > 0))
}

/// Schwartz-type norm `sup_x sup_{|a|<=n, l<=k} |x|^l |D^a f|` over `|x| <= r`.
pub fn schwartz_norm(f: &GridField, idx: NormIndex) -> f64 {
    let k = idx.k as i32;
    weighted_sup(f, &fd_derivs(f, idx.n), idx.r, |d| d.powi(k).max(1.0), false)
}

/// Flat norm over the whole grid with weight `max(1, |x|^{-k})`.
pub fn global_flat_norm(f: &GridField, n: usize, k: u32) -> Result<f64> {
    check_flat(f, k)?;
    let k = k as i32;
    Ok(weighted_sup(f, &fd_derivs(f, n), f64::INFINITY, |d| d.powi(-k).max(1.0), k > 0))
}

/// Schwartz norm over the whole grid, `sup max(1, |x|^k) |D^a f|`.
pub fn global_schwartz_norm(f: &GridField, n: usize, k: u32) -> f64 {
    let k = k as i32;
    weighted_sup(f, &fd_derivs(f, n), f64::INFINITY, |d| d.powi(k).max(1.0), false)
}

/// `||f||_{n,k,r}` restricted to `inner <= |x| <= r`.
pub fn annulus_flat_norm(f: &GridField, idx: NormIndex, inner: f64) -> f64 {
    let k = idx.k as i32;
    weighted_sup(f, &fd_derivs(f, idx.n), idx.r, |d| if d < inner { 0.0 } else { d.powi(-k) }, true)
}

/// Which index an interpolation inequality interpolates in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InterpolationKind {
    /// `C^n` norms, no weight.
    Standard,
    /// Derivative index of the flat norms at fixed weight.
    T,
    /// Weight index at fixed derivative order.
    S,
}

/// `||f||_{n,k} <= C ||f||_{low}^{l2/(l1+l2)} ||f||_{high}^{l1/(l1+l2)}`, where `low/high`
/// shift `n` (kinds `Standard`, `T`) or `k` (kind `S`) by `-l1` and `+l2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpolationIndices {
    pub n: usize,
    pub k: u32,
    pub l1: usize,
    pub l2: usize,
    pub r: f64,
}

/// Sup over the family of `LHS / RHS`; zero functions contribute 0.
pub fn interpolation_probe(
    family: &[GridField],
    kind: InterpolationKind,
    ix: InterpolationIndices,
) -> Result<f64> {
    let InterpolationIndices { n, k, l1, l2, r } = ix;
    let (mid, low, high) = match kind {
        InterpolationKind::Standard => {
            if l1 > n {
                return Err(Error::InvalidParameter("l1 > n".into()));
            }
            (NormIndex::new(n, 0, r), NormIndex::new(n - l1, 0, r), NormIndex::new(n + l2, 0, r))
        }
        InterpolationKind::T => {
            if l1 > n {
                return Err(Error::InvalidParameter("l1 > n".into()));
            }
            (NormIndex::new(n, k, r), NormIndex::new(n - l1, k, r), NormIndex::new(n + l2, k, r))
        }
        InterpolationKind::S => {
            if l1 as u32 > k {
                return Err(Error::InvalidParameter("j1 > k".into()));
            }
            (
                NormIndex::new(n, k, r),
                NormIndex::new(n, k - l1 as u32, r),
                NormIndex::new(n, k + l2 as u32, r),
            )
        }
    };
    let (a, b) = (l2 as f64 / (l1 + l2) as f64, l1 as f64 / (l1 + l2) as f64);
    let mut worst = 0.0f64;
    for f in family {
        let lhs = flat_norm(f, mid)?;
        if lhs == 0.0 {
            continue;
        }
        let rhs = flat_norm(f, low)?.powf(a) * flat_norm(f, high)?.powf(b);
        worst = worst.max(lhs / rhs);
    }
    Ok(worst)
}

/// Pair of fields on a common grid, an element of `C_0(C) + C_0(C)`.
pub type FieldPair = (GridField, GridField);

fn pair_map(
    g: &FieldPair,
    f: impl Fn(f64, f64, f64, f64, f64) -> (f64, f64) + Sync,
) -> Result<FieldPair> {
    g.0.require_same(&g.1)?;
    let n = g.0.values.len();
    let out: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let (x, y) = g.0.point(k);
            f(x, y, x.hypot(y), g.0.values[k], g.1.values[k])
        })
        .collect();
    Ok((
        g.0.with_values(out.iter().map(|p| p.0).collect()),
        g.1.with_values(out.iter().map(|p| p.1).collect()),
    ))
}

/// Residual of `y g1 + (|z| + x) g2`, the defining relation of `M`.
pub fn m_relation(g: &FieldPair) -> Result<GridField> {
    Ok(pair_map(g, |x, y, m, a, b| (y * a + (m + x) * b, 0.0))?.0)
}

/// Residual of `y g1 - (|z| - x) g2`, the defining relation of `K`.
pub fn k_relation(g: &FieldPair) -> Result<GridField> {
    Ok(pair_map(g, |x, y, m, a, b| (y * a - (m - x) * b, 0.0))?.0)
}

/// Membership in `M`: `sup |y g1 + (|z| + x) g2| <= tol * scale`, scale the sup of `|g|`.
pub fn in_module_m(g: &FieldPair, tol: f64) -> Result<bool> {
    let res = m_relation(g)?;
    let scale = g.0.max_abs().max(g.1.max_abs()).max(1e-300) * (1.0 + g.0.radius());
    Ok(res.max_abs() <= tol * scale)
}

/// `p_M(g1, g2) = ((|z|+x) g1 - y g2, -y g1 + (|z|-x) g2) / (2|z|)`, zero below the grid floor.
pub fn project_m(g: &FieldPair) -> Result<FieldPair> {
    let eps = g.0.grid_floor();
    pair_map(g, move |x, y, m, a, b| {
        if m < eps {
            return (0.0, 0.0);
        }
        let c = 0.5 / m;
        (c * ((m + x) * a - y * b), c * (-y * a + (m - x) * b))
    })
}

/// `p_K(g1, g2) = ((|z|-x) g1 + y g2, y g1 + (|z|+x) g2) / (2|z|)`, zero below the grid floor.
pub fn project_k(g: &FieldPair) -> Result<FieldPair> {
    let eps = g.0.grid_floor();
    pair_map(g, move |x, y, m, a, b| {
        if m < eps {
            return (0.0, 0.0);
        }
        let c = 0.5 / m;
        (c * ((m - x) * a + y * b), c * (y * a + (m + x) * b))
    })
}

/// `J(g1, g2) = (-g2, g1)`, mapping `M` onto `K`.
pub fn j_map(g: &FieldPair) -> FieldPair {
    (g.1.scale(-1.0), g.0.clone())
}

/// Parity components with `g = g0 + x gx + y gy + xy gxy`.
#[derive(Clone, Debug)]
pub struct Parity {
    pub g0: GridField,
    pub gx: GridField,
    pub gy: GridField,
    pub gxy: GridField,
    /// Nodes where a Hadamard quotient was masked (set to zero).
    pub masked: usize,
}

impl Parity {
    pub fn recompose(&self) -> GridField {
        let vals = (0..self.g0.values.len())
            .map(|k| {
                let (x, y) = self.g0.point(k);
                self.g0.values[k]
                    + x * self.gx.values[k]
                    + y * self.gy.values[k]
                    + x * y * self.gxy.values[k]
            })
            .collect();
        self.g0.with_values(vals)
    }
}

/// Projections `(id +- sigma^*)(id +- tau^*)/4` by index reflection, with `sigma = -id`
/// and `tau` complex conjugation, followed by division by `x`, `y`, `xy` off the axes.
pub fn parity_decompose(g: &GridField) -> Parity {
    let n = g.n;
    let eps = g.grid_floor();
    let v = &g.values;
    let refl = |k: usize, sx: bool, sy: bool| {
        let (ix, iy) = (k % n, k / n);
        let ix = if sx { n - 1 - ix } else { ix };
        let iy = if sy { n - 1 - iy } else { iy };
        v[iy * n + ix]
    };
    let mut parts = [vec![0.0; n * n], vec![0.0; n * n], vec![0.0; n * n], vec![0.0; n * n]];
    let mut masked = 0;
    for k in 0..n * n {
        let (x, y) = g.point(k);
        let (g_, s, t, st) = (v[k], refl(k, true, true), refl(k, false, true), refl(k, true, false));
        // sigma^* g = s, tau^* g = t, sigma^* tau^* g = st
        let p0 = 0.25 * (g_ + s + t + st);
        let px = 0.25 * (g_ - s + t - st);
        let py = 0.25 * (g_ - s - t + st);
        let pxy = 0.25 * (g_ + s - t - st);
        parts[0][k] = p0;
        let mut div = |slot: usize, p: f64, d: f64, small: bool| {
            if small {
                masked += 1;
            } else {
                parts[slot][k] = p / d;
            }
        };
        div(1, px, x, x.abs() < eps);
        div(2, py, y, y.abs() < eps);
        div(3, pxy, x * y, x.abs() < eps || y.abs() < eps);
    }
    let [p0, px, py, pxy] = parts;
    Parity {
        g0: g.with_values(p0),
        gx: g.with_values(px),
        gy: g.with_values(py),
        gxy: g.with_values(pxy),
        masked,
    }
}

/// `(g o sq)(lambda) = g(lambda^2)` on the disk of radius `sqrt(r)`, same resolution.
pub fn sq_pullback(g: &GridField) -> Result<GridField> {
    let rr = g.r.sqrt();
    GridField::from_fn(rr, g.n, Domain::Disk, |x, y| {
        let (u, v) = (x * x - y * y, 2.0 * x * y);
        if u.hypot(v) > g.r * (1.0 + 1e-12) {
            return 0.0;
        }
        g.sample(u, v).unwrap_or(0.0)
    })
}

/// Inverse of [`sq_pullback`] for `sigma`-invariant `h`: `g(z) = h(sqrt z)`.
pub fn sq_descend(h: &GridField, tol: f64) -> Result<GridField> {
    let n = h.n;
    let defect = (0..n * n)
        .map(|k| (h.values[k] - h.values[n * n - 1 - k]).abs())
        .fold(0.0, f64::max);
    if defect > tol {
        return Err(Error::NotEven { defect });
    }
    let r = h.r * h.r;
    GridField::from_fn(r, n, Domain::Disk, |x, y| {
        let m = x.hypot(y);
        if m > r * (1.0 + 1e-12) {
            return 0.0;
        }
        let s = num_complex::Complex64::new(x, y).sqrt();
        h.sample(s.re, s.im).unwrap_or(0.0)
    })
}

fn guard(x: f64, y: f64) -> Result<f64> {
    let m = x.hypot(y);
    if m < 1e-15 {
        Err(Error::NearOrigin { r_sq: m * m })
    } else {
        Ok(m)
    }
}

/// `Y_1 = -y d_x + (|z| + x) d_y`, `Y_2 = (|z| - x) d_x - y d_y`.
pub fn y_fields(i: u8, x: f64, y: f64) -> Result<[f64; 2]> {
    let m = guard(x, y)?;
    match i {
        1 => Ok([-y, m + x]),
        2 => Ok([m - x, -y]),
        _ => Err(Error::InvalidParameter(format!("Y index {i}"))),
    }
}

/// `W_1 = (l1 d_1 - l2 d_2)/(2|l|^2)`, `W_2 = (l2 d_1 + l1 d_2)/(2|l|^2)`.
pub fn w_fields(i: u8, l1: f64, l2: f64) -> Result<[f64; 2]> {
    let m = guard(l1, l2)?;
    let c = 0.5 / (m * m);
    match i {
        1 => Ok([c * l1, -c * l2]),
        2 => Ok([c * l2, c * l1]),
        _ => Err(Error::InvalidParameter(format!("W index {i}"))),
    }
}
