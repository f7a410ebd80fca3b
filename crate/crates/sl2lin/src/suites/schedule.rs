use super::{max_of, Checks, SuiteConfig};
use crate::error::Result;
use crate::field::{schouten, FieldHandle};
use crate::foliation::{casimir_parts, pi, pi_field};
use crate::nashmoser::{
    derive_constants, flow_of_field, ledger_verify, maurer_cartan_residual, pullback_by_flow, run as nm_run,
    scaled_pullback, schedules, CoboundaryInverse, CocycleStub, IdentitySmoothing, SlbTriple,
};
use crate::sampling::halton_ball;
use crate::smoothing::fit_slope;
use crate::tensor::{Point, PointTensor, Variance};

const CONTRA: Variance = Variance::Contravariant;

/// Polynomial test vector field used for the flow estimates.
pub(crate) fn test_vector_field() -> FieldHandle {
    FieldHandle::new(|x: &Point| PointTensor::vector(&[x[1] * x[1], 0.3 * x[2], 0.0, x[0] * x[5], 0.0, -x[3]], CONTRA))
}

pub(crate) fn run(cfg: &SuiteConfig, out: &mut Checks) {
    constants(cfg, out);
    out.guard("schedules", "radii and smoothing parameters", schedule_values);
    out.guard("flow estimates", "flow of a small vector field", flow_estimates);
    out.guard("iteration", "one iteration step", iteration);
}

fn constants(cfg: &SuiteConfig, out: &mut Checks) {
    let expected: [((u64, u64, u64), [u64; 8]); 3] = [
        ((1, 21, 167), [169, 169, 28561, 2197, 371293, 338, 3712930, 1428050]),
        ((0, 0, 0), [22, 22, 484, 286, 6292, 44, 62920, 24200]),
        ((0, 5, 35), [36, 36, 1296, 468, 16848, 72, 168480, 64800]),
    ];
    for ((a, b, c), e) in expected {
        let p = derive_constants(SlbTriple::new(a, b, c));
        let got = [p.p, p.x_a, p.y_a, p.x_b, p.y_b, p.x_c, p.y_c, p.alpha];
        let bad = got.iter().zip(&e).filter(|(g, e)| g != e).count();
        out.exact(&format!("derived constants for ({a},{b},{c})"), "parameter choice", bad as f64, 0.0)
            .with_note(format!("p = {}, alpha = {}", p.p, p.alpha));
        out.holds(&format!("ledger passes for ({a},{b},{c})"), "parameter inequalities", ledger_verify(&p).pass);
    }
    let params = derive_constants(cfg.slb);
    let ledger = ledger_verify(&params);
    for e in &ledger.entries {
        out.holds(&format!("ledger {}", e.name), "parameter inequalities", e.pass)
            .with_note(format!("{} {} {}, margin {}", e.lhs, if e.strict { "<" } else { "<=" }, e.rhs, e.margin));
    }
    let mut tampered = params;
    tampered.alpha = 10 * params.p * params.p;
    let t = ledger_verify(&tampered);
    out.holds("tampered alpha = 10 p^2 is rejected", "parameter inequalities", !t.pass)
        .with_note(t.failures().join("; "));
    let mono = (0..30u64).all(|a| derive_constants(SlbTriple::new(a + 1, 21, 167)).p >= derive_constants(SlbTriple::new(a, 21, 167)).p);
    out.holds("p is monotone in the SLB triple", "parameter choice", mono);
}

fn schedule_values(out: &mut Checks) -> Result<()> {
    let p = derive_constants(SlbTriple::new(1, 21, 167));
    let s0 = schedules(&p, 0)?;
    let s1 = schedules(&p, 1)?;
    let s2 = schedules(&p, 2)?;
    out.le("r_0 - R", "radii schedule", (s0.r_i - p.big_r).abs(), 0.0);
    out.le("r_1 - 3/2, r_2 - 4/3", "radii schedule", (s1.r_i - 1.5).abs().max((s2.r_i - 4.0 / 3.0).abs()), 1e-15);
    out.le(
        "t_1 - 2^{3/2}, t_2 - 2^{9/4}",
        "smoothing schedule",
        (s1.t_i - 2f64.powf(1.5)).abs().max((s2.t_i - 2f64.powf(2.25)).abs()),
        1e-12,
    );
    let mut log_id = 0.0f64;
    for i in 0..40 {
        let a = schedules(&p, i)?;
        let b = schedules(&p, i + 1)?;
        log_id = log_id.max((b.log_t_i - 1.5 * a.log_t_i).abs() / b.log_t_i);
    }
    out.le("log t_{i+1} - 3/2 log t_i", "smoothing schedule", log_id, 1e-14);
    out.holds("t0 <= 1 is rejected", "smoothing schedule", schedules(&p.with_t0(1.0), 0).is_err());
    Ok(())
}

fn flow_estimates(out: &mut Checks) -> Result<()> {
    let pts = halton_ball(5, 1.0, 0);
    let zero = FieldHandle::constant(PointTensor::zero(1, CONTRA));
    let id = max_of(pts.iter().map(|x| match flow_of_field(&zero, x, 10.0) {
        Ok(p) => p.iter().zip(x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
        Err(_) => f64::NAN,
    }));
    out.le("phi_0 - id", "flow of the zero field", id, 0.0);

    let y0 = test_vector_field();
    let sup_y = max_of(pts.iter().map(|x| y0.eval(x).max_abs()));
    let mut consts = Vec::new();
    for eps in [1e-1, 1e-2, 1e-3] {
        let y = y0.scaled(eps);
        let mut disp = 0.0f64;
        for x in &pts {
            let p = flow_of_field(&y, x, 10.0)?;
            disp = disp.max(p.iter().zip(x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
        consts.push(disp / (eps * sup_y));
    }
    let c = consts.iter().cloned().fold(0.0, f64::max);
    out.le("sup ||phi_Y - id||_0 / ||Y||_0", "flow displacement is linear in Y", c, 2.0)
        .with_note(format!("{consts:?}"));

    // phi_Y^* pi - pi - [Y, pi] = O(|Y|^2)
    let pi1 = pi_field(1);
    let eps = [1e-1, 5e-2, 2.5e-2, 1.25e-2];
    let mut rem = Vec::new();
    for &e in &eps {
        let y = y0.scaled(e);
        let mut r = 0.0f64;
        for x in &pts {
            let pb = pullback_by_flow(&y, &pi1, x, 10.0)?;
            r = r.max(pb.sub(&pi(1, x)).sub(&schouten(&y, &pi1, x)).max_abs());
        }
        rem.push(r);
    }
    let slope = fit_slope(&eps, &rem, 0.0).unwrap_or(f64::NAN);
    out.le("quadratic remainder slope - 2", "second-order flow remainder", (slope - 2.0).abs(), 0.2)
        .with_note(format!("fitted slope {slope:.3}"));
    Ok(())
}

fn iteration(out: &mut Checks) -> Result<()> {
    let pts = halton_ball(5, 1.0, 0);
    let pi1 = pi_field(1);
    let z = pi1.scaled(0.3);
    out.le("MC residual of 0.3 pi_1", "Maurer-Cartan equation", max_of(pts.iter().map(|x| maurer_cartan_residual(&z, x).max_abs())), 1e-12);
    let zb = FieldHandle::new(|x: &Point| {
        let mut t = PointTensor::zero(2, CONTRA);
        t.add_at(&[0, 1], x[2] * x[2]);
        t.add_at(&[3, 4], x[0]);
        t
    });
    out.ge("MC residual of a non-Poisson bivector", "Maurer-Cartan equation", maurer_cartan_residual(&zb, &pts[0]).max_abs(), 1e-3);

    for t in [0.5, 2.0] {
        let s = scaled_pullback(&pi1, t);
        out.le(&format!("t m_t^* pi_1 - pi_1, t = {t}"), "linear Poisson structure is homogeneous", max_of(pts.iter().map(|x| s.eval(x).sub(&pi(1, x)).max_abs())), 1e-14);
    }

    let params = derive_constants(SlbTriple::new(1, 21, 167));
    let zero = FieldHandle::constant(PointTensor::zero(2, CONTRA));
    let rep = nm_run(zero, params, &CocycleStub::new(20, 2.0), &IdentitySmoothing, 1, 20)?;
    let s = &rep.steps[0];
    out.le("Z_1 for Z_0 = 0", "fixed point of the iteration", s.z_next_norm.max(s.x_norm), 0.0);

    let f1 = FieldHandle::scalar(|x: &Point| casimir_parts(x).0, CONTRA);
    let zc = FieldHandle::new(move |x: &Point| pi(1, x).scale(0.01 * f1.eval(x).scalar_value()));
    let rep = nm_run(zc, params, &CocycleStub::new(20, 2.0), &IdentitySmoothing, 1, 20)?;
    let s = &rep.steps[0];
    out.holds("cocycle input is a reported no-op", "degenerate step", s.noop && s.z_next_norm == s.z_norm);

    let prov = CoboundaryInverse::new(test_vector_field(), 20, 1.0);
    let mut ratios = Vec::new();
    for eps in [1e-2, 5e-3] {
        let rep = nm_run(prov.coboundary().scaled(eps), params, &prov, &IdentitySmoothing, 1, 20)?;
        let s = &rep.steps[0];
        ratios.push(s.z_next_norm / (s.z_norm * s.z_norm));
    }
    let c = ratios.iter().cloned().fold(0.0, f64::max);
    out.le("||Z_1|| / ||Z_0||^2, exact inverse toy", "quadratic convergence of one step", c, 2.0)
        .with_note(format!("{ratios:?}"));
    out.le("drift of ||Z_1|| / ||Z_0||^2 under halving", "quadratic convergence of one step", (ratios[0] / ratios[1] - 1.0).abs(), 0.05);
    Ok(())
}
