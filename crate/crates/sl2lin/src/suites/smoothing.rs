use super::{Checks, SuiteConfig};
use crate::error::Result;
use crate::flatcalc::{Domain, GridField};
use crate::smoothing::{
    cutoff_t, extend, invert, inversion_constant, inversion_family, nash_kernel, probe_combined,
    probe_flat_smoothing, probe_schwartz_gain, probe_schwartz_identity, probe_weight_smoothing, smooth_schwartz,
    Family, Flavor, KernelSamples, KernelSpec, ProbeConfig, ProbeReport, SchwartzGrid,
};

/// Slope tolerance of the exponent probes.
pub(crate) const SLOPE_SLACK: f64 = 0.15;

pub(crate) fn probe_config(cfg: &SuiteConfig) -> ProbeConfig {
    ProbeConfig {
        schwartz: SchwartzGrid { n: 2 * cfg.grid - 1, ..SchwartzGrid::default() },
        disk_n: cfg.grid,
        slack: SLOPE_SLACK,
        ..ProbeConfig::default()
    }
}

pub(crate) fn run(cfg: &SuiteConfig, out: &mut Checks) {
    let pc = probe_config(cfg);
    out.guard("kernel", "mollifier", |out| kernel(out, &pc));
    out.guard("extension", "extension operator", |out| extension(out, cfg.grid));
    out.guard("inversion", "inversion duality", |out| inversion(out, cfg.grid));
    out.guard("cutoff", "weight cutoff", |out| cutoff(out, cfg.grid));
    out.guard("probes", "smoothing exponents", |out| probes(out, &pc));
}

fn kernel(out: &mut Checks, pc: &ProbeConfig) -> Result<()> {
    let KernelSamples::Line { h, values } = nash_kernel(&KernelSpec { m: 1, grid: pc.schwartz })? else {
        unreachable!()
    };
    let mass: f64 = values.iter().sum::<f64>() * h;
    out.le("integral of K - 1", "mollifier has unit mass", (mass - 1.0).abs(), 1e-10);
    let even = values.iter().zip(values.iter().rev()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    out.le("K(x) - K(-x)", "mollifier is even", even, 1e-14);

    let g = pc.schwartz.field(|x, y| (-(x * x + y * y)).exp())?;
    let (s, rep) = smooth_schwartz(&g, 64.0, pc.schwartz.pad)?;
    out.le("S~_64 g - g, Gaussian", "smoothing approximates the identity", s.sub(&g)?.max_abs(), 1e-10);
    out.le("padding leakage at t = 64", "periodization", rep.leakage, 1e-8);
    let g2 = pc.schwartz.field(|x, y| (-(x - 1.0).powi(2) - 2.0 * y * y).exp() * x)?;
    let (a, _) = smooth_schwartz(&g.scale(2.0).add(&g2)?, 3.0, pc.schwartz.pad)?;
    let (b, _) = smooth_schwartz(&g, 3.0, pc.schwartz.pad)?;
    let (c2, _) = smooth_schwartz(&g2, 3.0, pc.schwartz.pad)?;
    out.le("S~(2f + g) - 2 S~f - S~g", "smoothing is linear", a.sub(&b.scale(2.0))?.sub(&c2)?.max_abs(), 1e-13);
    out.holds("t < 1 is rejected", "mollifier", smooth_schwartz(&g, 0.5, 2).is_err());
    Ok(())
}

fn extension(out: &mut Checks, n: usize) -> Result<()> {
    let f = GridField::from_fn(1.0, n, Domain::Disk, |x, y| (x + 2.0 * y).cos() * (1.0 + x * y))?;
    let (e, ext) = extend(&f, n)?;
    let mut inside = 0.0f64;
    let mut outside = 0.0f64;
    for k in 0..e.values().len() {
        let (x, y) = e.point(k);
        let d = x.hypot(y);
        if d <= 1.0 {
            inside = inside.max((e.values()[k] - f.sample(x, y).unwrap_or(f64::NAN)).abs());
        } else if d >= 4.0 {
            outside = outside.max(e.values()[k].abs());
        }
    }
    out.le("eps(f) - f on the unit disk", "extension restricts to f", inside, 1e-12);
    out.le("eps(f) outside |x| = 4", "extension support", outside, 0.0);
    out.le("moment residual of phi", "extension moments", ext.moment_residual, 1e-8);
    // value and radial derivative match across the unit circle
    let (mut jump, mut djump) = (0.0f64, 0.0f64);
    for k in 0..12 {
        let th = k as f64 * std::f64::consts::PI / 6.0;
        let (c, s) = (th.cos(), th.sin());
        let at = |r: f64| ext.eval(&f, r * c, r * s);
        let h = 1e-3;
        jump = jump.max((at(1.0 + 1e-9) - at(1.0)).abs());
        let din = (at(1.0) - at(1.0 - h)) / h;
        let dout = (at(1.0 + h) - at(1.0)) / h;
        djump = djump.max((din - dout).abs());
    }
    out.le("eps(f) jump across the unit circle", "extension is continuous", jump, 1e-6);
    out.soft("radial derivative jump across the unit circle", "extension is C^1", djump, 1e-2);
    out.soft("condition number of the moment system", "extension moments", ext.condition, 1e15);
    Ok(())
}

fn inversion(out: &mut Checks, n: usize) -> Result<()> {
    let f = GridField::from_fn(4.0, n, Domain::Box, inversion_family(1.0))?;
    let (g, _) = invert(&f, Flavor::Flat, 4.0, n, Domain::Box)?;
    let (back, _) = invert(&g, Flavor::Schwartz, 4.0, n, Domain::Box)?;
    let ann = |v: &GridField| v.map(|x, y, v| if (0.5..=2.0).contains(&x.hypot(y)) { v } else { 0.0 });
    out.le("rho^* rho^* f - f on 1/2 <= |x| <= 2", "inversion is an involution", ann(&back).sub(&ann(&f))?.max_abs(), 1e-6);
    out.le("rho^* f_1 - f_1", "the family is inversion symmetric", ann(&g).sub(&ann(&f))?.max_abs(), 1e-6);
    let amps = [0.5, 1.0, 2.0];
    for (nn, k) in [(0usize, 1u32), (1, 0)] {
        let c = inversion_constant(&amps, nn, k, 4.0, n)?;
        let cf = inversion_constant(&amps, nn, k, 4.0, 2 * n - 1)?;
        let drift = (cf / c - 1.0).abs();
        out.le(&format!("inversion constant drift under refinement, n = {nn}, k = {k}"), "norm trade under inversion", drift, 0.2)
            .with_note(format!("C = {c:.4e}, refined {cf:.4e}"));
    }
    Ok(())
}

fn cutoff(out: &mut Checks, n: usize) -> Result<()> {
    let f = GridField::from_fn(2.0, n, Domain::Disk, |x, y| 1.0 + x - y * y)?;
    let (s, r) = (4.0, 2.0);
    let g = cutoff_t(&f, s, r)?;
    let (mut low, mut high) = (0.0f64, 0.0f64);
    for k in 0..g.values().len() {
        if !g.in_domain(k) {
            continue;
        }
        let (x, y) = g.point(k);
        let d = x.hypot(y);
        if d <= r / s {
            low = low.max(g.values()[k].abs());
        } else if d >= 2.0 * r / s {
            high = high.max((g.values()[k] - f.values()[k]).abs());
        }
    }
    out.le("T_{s,r} f on |x| <= r/s", "weight cutoff support", low, 0.0);
    out.le("T_{s,r} f - f on |x| >= 2r/s", "weight cutoff support", high, 0.0);
    Ok(())
}

fn record(out: &mut Checks, rep: &ProbeReport, two_sided: bool) {
    let name = format!("slope {} {:?}", rep.operator, rep.indices);
    let Some(s) = rep.fitted_slope else {
        out.holds(&name, "smoothing exponents", true).with_note("below the noise floor");
        return;
    };
    let excess = if two_sided { (s - rep.exponent).abs() } else { s - rep.exponent };
    out.le(&name, "smoothing exponents", excess, SLOPE_SLACK)
        .with_note(format!("fitted slope {s:.3}, exponent {}", rep.exponent));
}

fn probes(out: &mut Checks, pc: &ProbeConfig) -> Result<()> {
    // sharp families saturate the bound, smooth ones only test the upper side
    for (fam, l, sharp) in [(Family::Step, 1, true), (Family::Gaussian, 1, false), (Family::Gaussian, 2, false)] {
        record(out, &probe_schwartz_gain(pc, fam, 0, l)?, sharp);
    }
    for (fam, l, sharp) in [(Family::Cone, 1, true), (Family::Gaussian, 1, false)] {
        record(out, &probe_schwartz_identity(pc, fam, 0, l)?, sharp);
    }
    for rep in probe_flat_smoothing(pc, 0, 0, 1.0)? {
        record(out, &rep, false);
    }
    for rep in probe_weight_smoothing(pc, 0, 0, 1, 1.0)? {
        record(out, &rep, false);
    }
    let (t, s, ratio) = probe_combined(pc, 0, 0, 1, 1.0)?;
    record(out, &t, false);
    record(out, &s, false);
    out.soft("combined smoothing constant", "smoothing exponents", ratio, 1e3);
    Ok(())
}
