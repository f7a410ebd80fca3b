use num_complex::Complex64 as C64;
use rand::RngExt;

use super::{Checks, SuiteConfig};
use crate::flow::{
    epsilon_t, flow, flow_derivative_bound_probe, flow_rk4, k_t, mu_eval, r_t_sq, theta, theta_prime,
    vector_field_w, FlowState,
};
use crate::matrix::{nilpotent, random_sl2, random_sl2_in_ball, su2_haar, Mat2, Sl2Element};
use crate::skeleton::{retract, rho};

pub(crate) const T_GRID: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

pub(crate) fn run(cfg: &SuiteConfig, out: &mut Checks) {
    let n = nilpotent();
    let mut rng = cfg.rng(20);
    let s = rho(&super::algebra::random_desing(&mut rng, 1.5));
    out.le("W on the skeleton", "W vanishes on normal matrices", vector_field_w(&s).norm(), 1e-14);
    let wn = Mat2::new(C64::new(0.0, 0.0), C64::new(-0.5, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    out.le("W_N", "W at the nilpotent", (*vector_field_w(&n).matrix() - wn).frob(), 1e-15);

    let count = cfg.count(10, 10_000);
    let mut w2 = 0.0f64;
    for _ in 0..count {
        let a = random_sl2(&mut rng, 1.5);
        let (r2, f) = (a.norm_sq(), a.casimir().norm());
        let lhs = vector_field_w(&a).norm_sq();
        let rhs = 0.25 * r2 * (r2 * r2 - 4.0 * f * f);
        w2 = w2.max((lhs - rhs).abs() / (1.0 + r2.powi(3)));
    }
    out.le("|W|^2 - R^2 (R^4 - 4|f|^2)/4", "squared norm of W", w2, 1e-13);

    // closed form against RK4 with step 1e-3
    let mut rk = 0.0f64;
    let mut rng = cfg.rng(21);
    for _ in 0..count.min(100) {
        let a = random_sl2_in_ball(&mut rng, 2.0);
        for &t in &T_GRID {
            let steps = (t / 1e-3).round() as usize;
            rk = rk.max(flow(&a, t).dist(&flow_rk4(&a, t, steps)));
        }
    }
    out.le("closed-form flow vs RK4", "explicit flow solves A' = W", rk, 1e-8);
    let mut nf = 0.0f64;
    for &t in &T_GRID {
        let e = Mat2::new(
            C64::new(0.0, 0.0),
            C64::new((1.0 + t).powf(-0.5), 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        );
        nf = nf.max((*flow(&n, t).matrix() - e).frob());
    }
    out.le("flow of N", "explicit flow at the nilpotent", nf, 1e-14);
    let a = random_sl2(&mut rng, 1.0);
    let gap = |steps: usize| flow(&a, 1.0).dist(&flow_rk4(&a, 1.0, steps));
    let order = gap(8) / gap(16);
    out.ge("RK4 error ratio under step halving", "fourth-order convergence", order, 12.0)
        .with_note(format!("ratio {order:.2}"));
    out.le("RK4 error ratio under step halving (upper)", "fourth-order convergence", order, 24.0);
    out.le("flow_rk4 at t = 0", "RK4 oracle", flow_rk4(&a, 0.0, 4).dist(&a), 0.0);
    out.le("flow on the skeleton", "flow fixes the skeleton", flow(&s, 3.0).dist(&s), 1e-12);
    out.le(
        "RK4 on the skeleton",
        "stationary points",
        flow_rk4(&s, 3.0, 300).dist(&s),
        1e-12,
    );
    out.holds("negative time rejected", "flow time", FlowState::new(a, -1.0).is_err());

    invariants(cfg, out);
    crucial_inequality(cfg, out);
    limits(cfg, out);
    bounds(cfg, out);
}

fn fd_dt(g: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (g(t - 2.0 * h) - 8.0 * g(t - h) + 8.0 * g(t + h) - g(t + 2.0 * h)) / (12.0 * h)
}

fn invariants(cfg: &SuiteConfig, out: &mut Checks) {
    let mut rng = cfg.rng(22);
    let (mut cas, mut rt, mut kt, mut lw, mut kd, mut sd) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cfg.count(10, 1000) {
        let a = random_sl2_in_ball(&mut rng, 2.0);
        let t = 0.05 + 4.95 * rng.random::<f64>();
        let at = flow(&a, t);
        let f = a.casimir().norm();
        cas = cas.max((at.casimir() - a.casimir()).norm());
        let rts = r_t_sq(&a, t);
        rt = rt.max((rts - at.norm_sq()).abs());
        kt = kt.max((k_t(&a, t) - at.self_commutator()).frob());
        let h = 1e-3 * t.min(1.0);
        let d = fd_dt(|s| flow(&a, s).norm_sq(), t, h);
        let expect = 4.0 * f * f - rts * rts;
        lw = lw.max((d - expect).abs() / (expect.abs() + 1e-3 * rts * rts + 1e-12));
        let kdot = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| {
                let re = fd_dt(|s| k_t(&a, s).0[i][j].re, t, h);
                let im = fd_dt(|s| k_t(&a, s).0[i][j].im, t, h);
                let target = k_t(&a, t).0[i][j] * (-rts);
                (C64::new(re, im) - target).norm()
            })
            .fold(0.0, f64::max);
        kd = kd.max(kdot / (k_t(&a, t).frob() * rts + 1e-12));
        let sm = |s: f64| {
            let b = flow(&a, s);
            *b.matrix() * b.matrix().adjoint()
        };
        let st = sm(t);
        let target = Mat2::IDENTITY.scale_re(f * f) - st * st;
        let sdot = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| {
                let re = fd_dt(|s| sm(s).0[i][j].re, t, h);
                let im = fd_dt(|s| sm(s).0[i][j].im, t, h);
                (C64::new(re, im) - target.0[i][j]).norm()
            })
            .fold(0.0, f64::max);
        sd = sd.max(sdot / (target.frob() + 1e-3 * st.frob_sq() + 1e-12));
    }
    out.le("casimir along the flow", "W preserves f", cas, 1e-10);
    out.le("R_t^2 formula vs |A_t|^2", "closed form of R_t^2", rt, 1e-9);
    out.le("K_t formula vs [A_t, A_t*]", "closed form of the commutator", kt, 1e-9);
    out.le("d/dt R_t^2 - (4|f|^2 - R_t^4)", "derivative of R^2 along W", lw, 1e-6);
    out.le("K_t' + R_t^2 K_t", "commutator ODE", kd, 1e-6);
    out.le("S' - (|f|^2 1 - S^2)", "Riccati equation for AA*", sd, 1e-6);

    let nodes = su2_haar(3);
    let mut eq = 0.0f64;
    for _ in 0..cfg.count(5, 50) {
        let a = random_sl2(&mut rng, 1.5);
        let t = 3.0 * rng.random::<f64>();
        let ft = flow(&a, t);
        for (u, _) in &nodes {
            eq = eq.max(flow(&u.ad(&a), t).dist(&u.ad(&ft)));
        }
    }
    out.le("flow(Ad_U A) - Ad_U flow(A)", "SU(2)-equivariance of the flow", eq, 1e-10);
    let n = nilpotent();
    let mut nn = 0.0f64;
    for &t in &super::flow::T_GRID {
        let k = k_t(&n, t);
        let e = Mat2::diag(C64::new(1.0 / (1.0 + t), 0.0), C64::new(-1.0 / (1.0 + t), 0.0));
        nn = nn.max((k - e).frob()).max((r_t_sq(&n, t) - 1.0 / (1.0 + t)).abs());
    }
    out.le("R_t^2 and K_t at N", "f = 0 limits", nn, 1e-14);
}

/// `C_q = sup eps_t R_t^{2q} (1 + t R^2)^q / R^{2q}` over random `(A, t)`.
pub fn crucial_constant(samples: &[(Sl2Element, f64)], q: i32) -> f64 {
    samples
        .iter()
        .map(|(a, t)| {
            let r2 = a.norm_sq();
            if r2 == 0.0 {
                return 0.0;
            }
            let lhs = epsilon_t(a, *t) * r_t_sq(a, *t).powi(q);
            lhs * (1.0 + t * r2).powi(q) / r2.powi(q)
        })
        .fold(0.0, f64::max)
}

/// `(A, t)` pairs: radius log-uniform in `[1e-2, 10]`, `t` uniform on `[0, 100]` with a
/// quarter of the mass log-uniform near zero.
pub fn crucial_samples(cfg: &SuiteConfig, count: usize) -> Vec<(Sl2Element, f64)> {
    let mut rng = cfg.rng(23);
    (0..count)
        .map(|k| {
            let a = random_sl2(&mut rng, 1.0);
            let r = 10f64.powf(-2.0 + 3.0 * rng.random::<f64>());
            let a = a.scale_re(r / a.norm().max(1e-300));
            let t = if k % 4 == 0 {
                10f64.powf(-4.0 + 4.0 * rng.random::<f64>())
            } else {
                100.0 * rng.random::<f64>()
            };
            (a, t)
        })
        .collect()
}

fn crucial_inequality(cfg: &SuiteConfig, out: &mut Checks) {
    let samples = crucial_samples(cfg, cfg.count(100, 10_000) * 10);
    for q in 1..=3 {
        let c = crucial_constant(&samples, q);
        out.le(
            &format!("crucial inequality constant, q = {q}"),
            "eps_t R_t^{2q} <= C R^{2q}/(1+tR^2)^q",
            c,
            4.0,
        );
    }
}

fn limits(cfg: &SuiteConfig, out: &mut Checks) {
    let mut rng = cfg.rng(24);
    let mut lim = 0.0f64;
    for _ in 0..cfg.count(10, 1000) {
        let a = random_sl2(&mut rng, 1.5);
        let f = a.casimir().norm();
        if f < 1e-3 {
            continue;
        }
        let t = (1e8f64).ln() / (2.0 * f);
        lim = lim.max(flow(&a, t).dist(retract(&a).element()) / (1.0 + a.norm()));
    }
    out.le("flow(A, T) - retract(A)", "flow converges to the retraction", lim, 1e-6);
    let n = nilpotent();
    let worst = [10.0, 100.0, 1e4]
        .iter()
        .map(|&t| flow(&n, t).norm() * t.sqrt() / 2.0)
        .fold(0.0, f64::max);
    out.le("|flow(N, T)| sqrt(T) / 2", "algebraic decay on f = 0", worst, 1.0);
}

fn bounds(cfg: &SuiteConfig, out: &mut Checks) {
    out.le("mu_{0,0} = 1", "comparison polynomials", (mu_eval(0, 0, 3.7, 2.1) - 1.0).abs(), 0.0);
    let th0 = (0..3).map(|j| (theta(j as u8 + 1, 0.0) - 1.0).abs()).fold(0.0, f64::max);
    out.le("theta_j(0) = 1", "theta functions at zero", th0, 1e-15);
    let theta_c = (0..=5000)
        .map(|k| {
            let x = 50.0 * k as f64 / 5000.0;
            theta_prime(1, x * x).abs() * (1.0 + x).powi(3)
        })
        .fold(0.0, f64::max);
    out.soft("sup |theta_1'(x^2)| (1+x)^3 on [0,50]", "theta derivative decay", theta_c, 10.0);
    let mut rng = cfg.rng(25);
    let mut at0 = 0.0f64;
    for _ in 0..100 {
        let a = random_sl2(&mut rng, 2.0);
        let r = a.norm();
        at0 = at0.max(r / mu_eval(1, 2, 0.0, r).max(1e-300));
    }
    out.le("|A| / mu_{1/2,2}(0, R)", "flow bound at t = 0", at0, 1.0 + 1e-12);
    let m = cfg.count(20, 1000);
    let make = |count: usize, seed: u64| {
        let mut rng = cfg.rng(seed);
        (0..count)
            .map(|_| (random_sl2_in_ball(&mut rng, 3.0), 10.0 * rng.random::<f64>()))
            .collect::<Vec<_>>()
    };
    for (label, ix) in [("n = 0", vec![]), ("n = 1", vec![0usize]), ("n = 2", vec![0usize, 4])] {
        let c1 = flow_derivative_bound_probe(&ix, &make(m, 26));
        let c2 = flow_derivative_bound_probe(&ix, &make(2 * m, 27));
        match (c1, c2) {
            (Ok(c1), Ok(c2)) => {
                out.le(&format!("flow derivative constant, {label}"), "|D^a A_t| <= C mu", c1, 1e6)
                    .with_note(format!("doubled sample: {c2:.4}"));
                out.soft(
                    &format!("flow derivative constant drift, {label}"),
                    "|D^a A_t| <= C mu",
                    (c2 / c1 - 1.0).abs(),
                    0.2,
                );
            }
            (Err(e), _) | (_, Err(e)) => out.error(&format!("flow derivative constant, {label}"), "|D^a A_t| <= C mu", &e),
        }
    }
}
