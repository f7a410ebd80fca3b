use rand::RngExt;

use super::{Checks, SuiteConfig};
use crate::field::{exterior_derivative, exterior_derivative_field, FieldHandle};
use crate::foliation::{df_field, phi_field, phi_form};
use crate::homotopy::{
    average_su2, average_su2_field, h_su2, h_su2_field, h_t, h_t_field, p_skeleton, pullback_flow,
    pullback_retract, QuadratureSpec,
};
use crate::matrix::Sl2Element;
use crate::skeleton::rho;
use crate::tensor::{Point, PointTensor, Variance};

const CO: Variance = Variance::Covariant;

/// `e^{-1/R^2} dx1 ^ dx2`: flat at the origin, not closed.
pub(crate) fn bump_form() -> FieldHandle {
    FieldHandle::new(|x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let c = if r2 > 0.0 { (-1.0 / r2).exp() } else { 0.0 };
        PointTensor::basis(0, CO).wedge(&PointTensor::basis(1, CO)).scale(c)
    })
}

/// `x3 dx1 + y1^2 dy2`, a non-closed one-form.
fn poly_one_form() -> FieldHandle {
    FieldHandle::new(|x| PointTensor::basis(0, CO).scale(x[2]).add(&PointTensor::basis(4, CO).scale(x[3] * x[3])))
}

fn sample_points(cfg: &SuiteConfig, stream: u64, count: usize) -> Vec<Point> {
    let mut rng = cfg.rng(stream);
    (0..count)
        .map(|_| {
            let s = rng.random_range(0.6..1.2);
            let a = super::algebra::random_unit(&mut rng);
            let b = super::algebra::random_unit(&mut rng);
            std::array::from_fn(|k| s * if k < 3 { a[k] } else { 0.7 * b[k - 3] })
        })
        .collect()
}

pub(crate) fn run(cfg: &SuiteConfig, out: &mut Checks) {
    let pts = sample_points(cfg, 40, cfg.count(4, 12));
    let bump = bump_form();
    let df1 = df_field(1);

    out.guard("flow pullback", "pullback of forms along the flow", |out| {
        let mut zero = 0.0f64;
        let mut cas = 0.0f64;
        for x in &pts {
            zero = zero.max(pullback_flow(&bump, 0.0, x)?.sub(&bump.eval(x)).max_abs());
            for t in [0.5, 2.0] {
                cas = cas.max(pullback_flow(&df1, t, x)?.sub(&df1.eval(x)).max_abs());
            }
        }
        out.le("phi_0^* alpha - alpha", "pullback at time zero", zero, 1e-12);
        out.le("phi_t^* df_1 - df_1", "casimirs are flow invariant", cas, 1e-6);
        Ok(())
    });

    out.guard("homotopy operator", "homotopy operator h_t", |out| {
        let mut hz = 0.0f64;
        let mut h0 = 0.0f64;
        for x in &pts {
            let q = QuadratureSpec::for_point(x, 1.0);
            hz = hz.max(h_t(&df1, 1.0, x, &q)?.max_abs());
            h0 = h0.max(h_t(&bump, 0.0, x, &q)?.max_abs());
        }
        out.le("h_t(df_1)", "W is tangent to the leaves", hz, 1e-10);
        out.le("h_0(alpha)", "h vanishes at time zero", h0, 0.0);
        Ok(())
    });

    cartan(cfg, out, &pts);
    skeleton_projection(cfg, out);
    averaging(cfg, out, &pts);
}

/// `phi_t^* alpha - alpha = d h_t alpha + h_t d alpha`.
fn cartan(_cfg: &SuiteConfig, out: &mut Checks, pts: &[Point]) {
    let t = 1.0;
    for (label, form) in [("bump 2-form", bump_form()), ("polynomial 1-form", poly_one_form())] {
        let mut res = 0.0f64;
        let mut refine = 0.0f64;
        for x in pts.iter().take(4) {
            let q = QuadratureSpec::for_point(x, t);
            let eval = |q: QuadratureSpec| -> crate::error::Result<f64> {
                let lhs = pullback_flow(&form, t, x)?.sub(&form.eval(x));
                let dh = exterior_derivative(&h_t_field(&form, t, q), x);
                let hd = h_t(&exterior_derivative_field(&form), t, x, &q)?;
                Ok(lhs.sub(&dh).sub(&hd).max_abs() / (1.0 + lhs.max_abs()))
            };
            match (eval(q), eval(q.refined())) {
                (Ok(a), Ok(b)) => {
                    res = res.max(b);
                    refine = refine.max((a - b).abs());
                }
                (Err(e), _) | (_, Err(e)) => return out.error(&format!("Cartan identity, {label}"), "homotopy formula", &e),
            }
        }
        out.le(&format!("Cartan identity residual, {label}"), "homotopy formula", res, 1e-4);
        out.soft(&format!("Cartan identity refinement change, {label}"), "homotopy formula", refine, 1e-4);
    }

    // h_t commutes with wedging by phi
    let phi = phi_field();
    let a = poly_one_form();
    let wedge = a.wedge(&phi);
    let mut comm = 0.0f64;
    for x in pts.iter().take(4) {
        let q = QuadratureSpec::for_point(x, t);
        match (h_t(&wedge, t, x, &q), h_t(&a, t, x, &q)) {
            (Ok(l), Ok(r)) => {
                let rhs = r.wedge(&phi_form(x));
                comm = comm.max(l.sub(&rhs).max_abs() / (1.0 + l.max_abs()));
            }
            (Err(e), _) | (_, Err(e)) => return out.error("h_t(alpha ^ phi) - h_t(alpha) ^ phi", "phi is W-basic", &e),
        }
    }
    out.le("h_t(alpha ^ phi) - h_t(alpha) ^ phi", "phi is W-basic", comm, 1e-8);
}

fn skeleton_projection(cfg: &SuiteConfig, out: &mut Checks) {
    let mut rng = cfg.rng(41);
    let form = poly_one_form();
    let phi = phi_field();
    let (mut agree, mut fixed, mut comm) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cfg.count(4, 8) {
        let d = super::algebra::random_desing(&mut rng, 1.2);
        if d.lambda.norm() < 0.4 {
            continue;
        }
        let s = rho(&d);
        let x = perturb(&s, &mut rng);
        let xs = s.to_real();
        match (p_skeleton(&form, &x, None), pullback_retract(&form, &x)) {
            (Ok(p), Ok(r)) => agree = agree.max(p.sub(&r).max_abs() / (1.0 + r.max_abs())),
            (Err(e), _) | (_, Err(e)) => return out.error("p(alpha) - r^* alpha", "projection to the skeleton", &e),
        }
        // at skeleton points p acts on vectors tangent to the skeleton as the identity
        if let Ok(p) = p_skeleton(&form, &xs, None) {
            let a = form.eval(&xs);
            for v in super::foliation::rho_frame(&d) {
                fixed = fixed.max((p.eval(&[v]) - a.eval(&[v])).abs());
            }
        }
        let w = form.wedge(&phi);
        if let (Ok(l), Ok(r)) = (p_skeleton(&w, &x, None), p_skeleton(&form, &x, None)) {
            comm = comm.max(l.sub(&r.wedge(&phi_form(&x))).max_abs());
        }
    }
    out.le("p(alpha) - r^* alpha", "projection to the skeleton", agree, 1e-5);
    out.le("p(alpha) on skeleton tangents", "projection fixes the skeleton", fixed, 1e-5);
    out.le("p(alpha ^ phi) - p(alpha) ^ phi", "phi is flow invariant", comm, 1e-5);
}

fn perturb(s: &Sl2Element, rng: &mut rand_chacha::ChaCha8Rng) -> Point {
    let x = s.to_real();
    std::array::from_fn(|k| x[k] + 0.3 * rng.random_range(-1.0..1.0))
}

fn averaging(_cfg: &SuiteConfig, out: &mut Checks, pts: &[Point]) {
    let order = 4;
    // averages of invariant functions are unchanged
    let g = FieldHandle::scalar(
        |x| {
            let a = Sl2Element::from_real(x).casimir();
            (a.re * a.im).sin() + a.norm_sqr()
        },
        CO,
    );
    let form = poly_one_form();
    let (mut inv, mut idem) = (0.0f64, 0.0f64);
    let avg = average_su2_field(&form, order);
    for x in pts.iter().take(4) {
        match (average_su2(&g, x, order), average_su2(&avg, x, order)) {
            (Ok(a), Ok(b)) => {
                inv = inv.max((a.scalar_value() - g.eval(x).scalar_value()).abs());
                idem = idem.max(b.sub(&avg.eval(x)).max_abs());
            }
            (Err(e), _) | (_, Err(e)) => return out.error("SU(2) average", "averaging over SU(2)", &e),
        }
    }
    out.le("average of g o f - g o f", "invariant functions are fixed", inv, 1e-12);
    out.le("average of an average - average", "averaging is a projection", idem, 1e-10);

    // p(alpha) - alpha = d h alpha + h d alpha
    let mut res = 0.0f64;
    let h = h_su2_field(&form, order, 6);
    let dform = exterior_derivative_field(&form);
    for x in pts.iter().take(3) {
        let lhs = avg.eval(x).sub(&form.eval(x));
        match h_su2(&dform, x, order, 6) {
            Ok(hd) => {
                let dh = exterior_derivative(&h, x);
                res = res.max(lhs.sub(&dh).sub(&hd).max_abs() / (1.0 + lhs.max_abs()));
            }
            Err(e) => return out.error("SU(2) homotopy residual", "homotopy formula for the average", &e),
        }
    }
    out.le("SU(2) homotopy residual", "homotopy formula for the average", res, 1e-3);
}
