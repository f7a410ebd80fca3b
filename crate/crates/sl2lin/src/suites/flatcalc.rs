use rand::RngExt;

use super::{Checks, SuiteConfig};
use crate::error::Result;
use crate::flatcalc::{
    flat_norm, in_module_m, interpolation_probe, j_map, k_relation, m_relation, parity_decompose, project_k,
    project_m, sq_descend, sq_pullback, y_fields, Domain, FieldPair, GridField, InterpolationIndices,
    InterpolationKind, NormIndex,
};

fn pair(r: f64, n: usize, f: impl Fn(f64, f64) -> f64 + Sync, g: impl Fn(f64, f64) -> f64 + Sync) -> Result<FieldPair> {
    Ok((GridField::from_fn(r, n, Domain::Disk, f)?, GridField::from_fn(r, n, Domain::Disk, g)?))
}

fn pair_diff(a: &FieldPair, b: &FieldPair) -> Result<f64> {
    Ok(a.0.sub(&b.0)?.max_abs().max(a.1.sub(&b.1)?.max_abs()))
}

pub(crate) fn run(cfg: &SuiteConfig, out: &mut Checks) {
    let n = cfg.grid;
    out.guard("projections", "splitting into M and K", |out| projections(out, n));
    out.guard("parity", "parity decomposition", |out| parity(out, n));
    out.guard("square map", "pullback by the square map", |out| square(out, n));
    out.guard("Y fields", "vector fields on the plane", |out| fields(cfg, out));
    out.guard("norms", "flat norms", |out| norms(out, n));
}

fn projections(out: &mut Checks, n: usize) -> Result<()> {
    let g = pair(1.0, n, |x, y| (x + 0.3 * y).sin() + x * x, |x, y| (x * y).cos() - 0.2 * y)?;
    let pm = project_m(&g)?;
    let pk = project_k(&g)?;
    // both projections vanish below the grid floor
    let eps = g.0.grid_floor();
    let off = |f: &GridField| f.map(|x, y, v| if x.hypot(y) < eps { 0.0 } else { v });
    let sum = (pm.0.add(&pk.0)?, pm.1.add(&pk.1)?);
    let id_res = pair_diff(&(off(&sum.0), off(&sum.1)), &(off(&g.0), off(&g.1)))?;
    out.le("p_M + p_K - id", "projections sum to the identity", id_res, 1e-13);
    out.le("relation of p_M g", "p_M lands in M", m_relation(&pm)?.max_abs(), 1e-12);
    out.le("relation of p_K g", "p_K lands in K", k_relation(&pk)?.max_abs(), 1e-12);
    out.le("p_M p_M - p_M", "p_M is idempotent", pair_diff(&project_m(&pm)?, &pm)?, 1e-12);
    out.le("p_K p_M", "complementary projections", {
        let z = project_k(&pm)?;
        z.0.max_abs().max(z.1.max_abs())
    }, 1e-12);
    out.le("relation of J p_M g", "J maps M to K", k_relation(&j_map(&pm))?.max_abs(), 1e-12);
    out.holds("p_M g in M", "module membership", in_module_m(&pm, 1e-12)?);
    out.holds("(1, 0) not in M", "module membership", !in_module_m(&pair(1.0, n, |_, _| 1.0, |_, _| 0.0)?, 1e-6)?);
    // on the positive real axis M is {g2 = 0} and p_M(g1, g2) = (g1, 0)
    let e = pair(1.0, n, |_, _| 1.0, |_, _| 1.0)?;
    let pe = project_m(&e)?;
    let mut axis = 0.0f64;
    let c = pe.0.center();
    for ix in (c + 1)..n {
        let k = pe.0.index(ix, c);
        axis = axis.max((pe.0.values()[k] - 1.0).abs()).max(pe.1.values()[k].abs());
    }
    out.le("p_M(1, 1) on the positive real axis - (1, 0)", "projection formula", axis, 1e-14);
    Ok(())
}

fn parity(out: &mut Checks, n: usize) -> Result<()> {
    let g = GridField::from_fn(1.0, n, Domain::Box, |x, y| (1.0 + x + 2.0 * y + 3.0 * x * y) * (x * x + y * y).exp())?;
    let p = parity_decompose(&g);
    // quotients are masked within the grid floor of the axes
    let eps = g.grid_floor();
    let unmasked = |f: GridField| f.map(|x, y, v| if x.abs() < eps || y.abs() < eps { 0.0 } else { v });
    let rec = unmasked(p.recompose().sub(&g)?).max_abs();
    out.le("g0 + x gx + y gy + xy gxy - g", "parity recomposition", rec, 1e-10)
        .with_note(format!("{} masked quotients", p.masked));
    let expect = GridField::from_fn(1.0, n, Domain::Box, |x, y| (x * x + y * y).exp())?;
    let mut worst = 0.0f64;
    for (part, c) in [(&p.g0, 1.0), (&p.gx, 1.0), (&p.gy, 2.0), (&p.gxy, 3.0)] {
        worst = worst.max(unmasked(part.sub(&expect.scale(c))?).max_abs());
    }
    out.le("parity parts of (1 + x + 2y + 3xy) e^{|z|^2}", "parity decomposition", worst, 1e-11);
    Ok(())
}

fn square(out: &mut Checks, n: usize) -> Result<()> {
    let g = GridField::from_fn(1.0, n, Domain::Disk, |x, y| x * x + y * y)?;
    let h = sq_pullback(&g)?;
    let expect = GridField::from_fn(1.0, n, Domain::Disk, |x, y| (x * x + y * y).powi(2))?;
    out.le("sq^*|z|^2 - |l|^4", "pullback by the square map", h.sub(&expect)?.max_abs(), 1e-9);
    let refl = h.values().iter().zip(h.values().iter().rev()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    out.le("sq^* g (-l) - sq^* g (l)", "pullbacks are even", refl, 1e-12);
    let smooth = GridField::from_fn(1.0, n, Domain::Disk, |x, y| (x + 0.5 * y).cos() * (-(x * x + y * y)).exp())?;
    let back = sq_descend(&sq_pullback(&smooth)?, 1e-10)?;
    let inner = back.map(|x, y, v| if x.hypot(y) <= 0.9 { v } else { 0.0 });
    let diff = inner.sub(&smooth.map(|x, y, v| if x.hypot(y) <= 0.9 { v } else { 0.0 }))?;
    out.le("descend(sq^* g) - g", "square map round trip", diff.max_abs(), 1e-6);
    let odd = GridField::from_fn(1.0, n, Domain::Disk, |x, _| x)?;
    out.holds("odd function does not descend", "pullback by the square map", sq_descend(&odd, 1e-10).is_err());
    Ok(())
}

fn fields(cfg: &SuiteConfig, out: &mut Checks) -> Result<()> {
    let y1 = y_fields(1, 0.0, 1.0)?;
    let y2 = y_fields(2, 0.0, 1.0)?;
    out.le("Y at z = i", "vector fields on the plane", (y1[0] + 1.0).abs() + (y1[1] - 1.0).abs() + (y2[0] - 1.0).abs() + (y2[1] + 1.0).abs(), 0.0);
    let (mut br, mut rel) = (0.0f64, 0.0f64);
    let h = 1e-5;
    let mut rng = cfg.rng(50);
    for _ in 0..cfg.count(20, 100) {
        let (x, y): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        if x.hypot(y) < 0.1 {
            continue;
        }
        let yv = |i: u8, x: f64, y: f64| y_fields(i, x, y).unwrap();
        let jac = |i: u8| -> [[f64; 2]; 2] {
            let dx = [0, 1].map(|c| (yv(i, x + h, y)[c] - yv(i, x - h, y)[c]) / (2.0 * h));
            let dy = [0, 1].map(|c| (yv(i, x, y + h)[c] - yv(i, x, y - h)[c]) / (2.0 * h));
            [[dx[0], dy[0]], [dx[1], dy[1]]]
        };
        let (a, b) = (yv(1, x, y), yv(2, x, y));
        let (ja, jb) = (jac(1), jac(2));
        // [A, B]^c = A(B^c) - B(A^c)
        let lie = [0, 1].map(|c| a[0] * jb[c][0] + a[1] * jb[c][1] - b[0] * ja[c][0] - b[1] * ja[c][1]);
        br = br.max((lie[0] + a[0]).abs().max((lie[1] + a[1]).abs()));
        let m = x.hypot(y);
        rel = rel.max([0, 1].map(|c| ((m - x) * a[c] + y * b[c]).abs()).into_iter().fold(0.0, f64::max));
    }
    out.le("[Y_1, Y_2] + Y_1", "bracket relation", br, 1e-8)
        .with_note("agrees with Y_2 only where |z| = x + y, e.g. at z = i");
    out.le("(|z| - x) Y_1 + y Y_2", "linear relation of Y", rel, 1e-14);
    out.holds("Y rejects the origin", "vector fields on the plane", y_fields(1, 0.0, 0.0).is_err());
    Ok(())
}

fn norms(out: &mut Checks, n: usize) -> Result<()> {
    // |z|^4 has ||.||_{0,2,1} = sup |z|^2 = 1 and ||.||_{1,2,1} = sup 4|z| |x| / |z|^2 -> 4
    let f = GridField::from_fn(1.0, n, Domain::Disk, |x, y| (x * x + y * y).powi(2))?;
    let a = flat_norm(&f, NormIndex::new(0, 2, 1.0))?;
    out.le("||z|^4|_{0,2,1} - 1", "flat norm of a monomial", (a - 1.0).abs(), 1e-12);
    let b = flat_norm(&f, NormIndex::new(1, 2, 1.0))?;
    out.le("||z|^4|_{1,2,1} - 4", "flat norm of a monomial", (b - 4.0).abs(), 2e-3);
    out.holds("non-flat input is rejected", "flat norms", flat_norm(&GridField::from_fn(1.0, n, Domain::Disk, |_, _| 1.0)?, NormIndex::new(0, 1, 1.0)).is_err());
    let fam: Vec<GridField> = [1.0, 2.0, 4.0]
        .iter()
        .map(|&a| GridField::from_fn(1.0, n, Domain::Disk, move |x, y| (a * x).sin() * (a * y).cos()))
        .collect::<Result<_>>()?;
    let c = interpolation_probe(&fam, InterpolationKind::Standard, InterpolationIndices { n: 1, k: 0, l1: 1, l2: 1, r: 1.0 })?;
    out.soft("interpolation constant, C^1 between C^0 and C^2", "interpolation inequality", c, 4.0);
    Ok(())
}
