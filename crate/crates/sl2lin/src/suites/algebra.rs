use num_complex::Complex64 as C64;
use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Checks, SuiteConfig};
use crate::matrix::{
    hermitian_sqrt, nilpotent, random_sl2, su2_haar, su2_haar_mc, Mat2, Sl2Element, Su2Element,
};
use crate::skeleton::{
    hopf, is_skeleton, retract, rho, unitary_diag_residual, DesingCoords, SkeletonPoint,
};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn gauss_c(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_mat(rng: &mut ChaCha8Rng) -> Mat2 {
    Mat2::new(gauss_c(rng), gauss_c(rng), gauss_c(rng), gauss_c(rng))
}

pub(crate) fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|x| x / n)
}

pub(crate) fn random_desing(rng: &mut ChaCha8Rng, scale: f64) -> DesingCoords {
    let w = random_unit(rng);
    let l = gauss_c(rng) * (scale / std::f64::consts::SQRT_2);
    DesingCoords::new(w, l).expect("unit vector")
}

pub(crate) fn matrix(cfg: &SuiteConfig, out: &mut Checks) {
    let diag = Sl2Element::from_coords([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let expect = Mat2::diag(c(0.0, 1.0), c(0.0, -1.0));
    out.exact("coords of diag(i,-i)", "coordinate identification", (*diag.matrix() - expect).frob(), 0.0);
    let n = nilpotent();
    let nm = Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
    out.le("coords of N", "coordinate identification", (*n.matrix() - nm).frob(), 1e-15);
    out.le("casimir diag(i,-i) = 1", "casimir is the determinant", (diag.casimir() - 1.0).norm(), 1e-15);
    out.le("norm_sq N = 1", "norm is tr(AA*)", (n.norm_sq() - 1.0).abs(), 1e-15);

    let count = cfg.samples * 100;
    let mut rng = cfg.rng(1);
    let (mut tr, mut rt, mut cas, mut ineq, mut ch1, mut ch2) = (0.0f64, 0.0f64, 0.0f64, f64::MIN, 0.0f64, 0.0f64);
    for _ in 0..count {
        let scale = 3.0 * rng.random::<f64>();
        let z: [C64; 3] = std::array::from_fn(|_| gauss_c(&mut rng) * scale);
        let a = Sl2Element::from_coords(z);
        tr = tr.max(a.matrix().trace().norm());
        let back = a.to_coords();
        rt = rt.max((0..3).map(|k| (back[k] - z[k]).norm()).fold(0.0, f64::max));
        let zsum = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
        cas = cas.max((a.casimir() - zsum).norm() / (1.0 + zsum.norm()));
        let r2 = a.norm_sq();
        ineq = ineq.max(2.0 * a.casimir().norm() - r2);
        let (e1, e2) = a.char_residuals();
        let d = 1.0 + r2 * r2;
        ch1 = ch1.max(e1 / d);
        ch2 = ch2.max(e2 / d);
    }
    out.le("trace of from_coords", "traceless by construction", tr, 1e-14);
    out.le("coordinate round trip", "coordinate identification", rt, 1e-14);
    out.le("det vs z1^2+z2^2+z3^2", "casimir polynomial", cas, 1e-13);
    out.le("2|f| - R^2", "norm-fiber inequality", ineq, 1e-12);
    out.le("A^2 + f 1", "characteristic identity of A", ch1, 1e-12);
    out.le("(AA*)^2 - R^2 AA* + |f|^2 1", "characteristic identity of AA*", ch2, 1e-12);

    let mut rng = cfg.rng(2);
    let mut sq = 0.0f64;
    let mut sc = 0.0f64;
    for _ in 0..cfg.count(10, 10_000) {
        let b = random_mat(&mut rng);
        let h = b * b.adjoint();
        let s = match hermitian_sqrt(h) {
            Ok(s) => s,
            Err(e) => return out.error("hermitian sqrt", "Hermitian functional calculus", &e),
        };
        let m = *s.matrix();
        sq = sq.max((m * m - h).frob() / h.frob());
        let cc = 0.1 + 10.0 * rng.random::<f64>();
        let s2 = hermitian_sqrt(h.scale_re(cc)).map(|v| *v.matrix()).unwrap_or(Mat2::ZERO);
        sc = sc.max((s2 - m.scale_re(cc.sqrt())).frob() / m.frob());
    }
    out.le("sqrt(H)^2 - H", "Hermitian square root", sq, 1e-12);
    out.le("sqrt(cH) - sqrt(c) sqrt(H)", "square root homogeneity", sc, 1e-12);
    let d41 = hermitian_sqrt(Mat2::diag(c(4.0, 0.0), c(1.0, 0.0))).map(|s| *s.matrix());
    out.le(
        "sqrt diag(4,1)",
        "Hermitian square root",
        d41.map(|s| (s - Mat2::diag(c(2.0, 0.0), c(1.0, 0.0))).frob()).unwrap_or(f64::NAN),
        1e-15,
    );
    out.holds(
        "sqrt rejects indefinite input",
        "Hermitian square root",
        hermitian_sqrt(Mat2::diag(c(1.0, 0.0), c(-0.5, 0.0))).is_err(),
    );

    let nodes = su2_haar(6);
    let total: f64 = nodes.iter().map(|(_, w)| w).sum();
    out.le("Haar weights sum to 1", "Haar normalization", (total - 1.0).abs(), 1e-10);
    let mut avg = [c(0.0, 0.0); 3];
    let mut inv = 0.0f64;
    let mut unit = 0.0f64;
    let mut rng = cfg.rng(3);
    let a = random_sl2(&mut rng, 1.0);
    for (u, w) in &nodes {
        let b = u.ad(&diag).to_coords();
        for k in 0..3 {
            avg[k] += b[k] * *w;
        }
        let ua = u.ad(&a);
        inv = inv
            .max((ua.casimir() - a.casimir()).norm())
            .max((ua.norm_sq() - a.norm_sq()).abs());
        unit = unit.max(u.unitarity_defect()).max((u.matrix().det() - 1.0).norm());
    }
    let avg_norm = avg.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    out.le("Haar average of Ad_U diag(i,-i)", "averaging kills the adjoint orbit", avg_norm, 1e-10);
    out.le("Ad_U preserves casimir and norm", "conjugation invariance", inv, 1e-12);
    out.le("quadrature nodes lie in SU(2)", "unitarity", unit, 1e-12);
    let mc = su2_haar_mc(cfg.samples * 100, cfg.seed);
    let mut mavg = [c(0.0, 0.0); 3];
    for (u, w) in &mc {
        let b = u.ad(&diag).to_coords();
        for k in 0..3 {
            mavg[k] += b[k] * *w;
        }
    }
    let mnorm = mavg.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    out.soft(
        "Monte-Carlo average of Ad_U diag(i,-i)",
        "averaging kills the adjoint orbit",
        mnorm,
        5.0 / (mc.len() as f64).sqrt(),
    );
}

pub(crate) fn skeleton(cfg: &SuiteConfig, out: &mut Checks) {
    let diag = Sl2Element::from_coords([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let n = nilpotent();
    out.holds("diag(i,-i) in skeleton", "normal matrices", is_skeleton(&diag, 1e-12));
    out.holds("N not in skeleton", "normal matrices", !is_skeleton(&n, 1e-12));
    out.holds("0 in skeleton", "normal matrices", is_skeleton(&Sl2Element::ZERO, 1e-12));
    out.le("retract N = 0", "retraction vanishes on f = 0", retract(&n).element().norm(), 0.0);
    let r_diag = retract(&diag).element().dist(&diag);
    out.le("retract fixes diag(i,-i)", "retraction fixes the skeleton", r_diag, 1e-12);

    let count = cfg.count(10, 100_000);
    let mut rng = cfg.rng(10);
    let (mut fix, mut idem, mut normf, mut cas, mut member) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut disagree, mut rho_cas, mut rho_in, mut anti) = (0usize, 0.0f64, 0usize, 0.0f64);
    for _ in 0..count {
        let d = random_desing(&mut rng, 2.0);
        let s = rho(&d);
        let l2 = d.lambda * d.lambda;
        rho_cas = rho_cas.max((s.casimir() - l2).norm());
        rho_in += usize::from(!is_skeleton(&s, 1e-12));
        anti = anti.max(rho(&d.antipode()).dist(&s));
        fix = fix.max(retract(&s).element().dist(&s) / (1.0 + s.norm()));
        let a = random_sl2(&mut rng, 2.0);
        let r = retract(&a);
        let f = a.casimir().norm();
        idem = idem.max(retract(r.element()).element().dist(r.element()) / (1.0 + a.norm()));
        normf = normf.max((r.element().norm_sq() - 2.0 * f).abs() / (1.0 + 2.0 * f));
        cas = cas.max((r.element().casimir() - a.casimir()).norm() / (1.0 + f));
        member = member.max(r.element().self_commutator().frob() / (1.0 + r.element().norm_sq()));
        for m in [s, a] {
            let v1 = is_skeleton(&m, 1e-9);
            let v3 = SkeletonPoint::check(m, 1e-9).is_some();
            let v4 = unitary_diag_residual(&m) <= 1e-9;
            disagree += usize::from(v1 != v3 || v1 != v4);
        }
    }
    out.le("retract fixes skeleton points", "retraction fixes the skeleton", fix, 1e-10);
    out.le("retract idempotent", "retraction idempotence", idem, 1e-10);
    out.le("|retract A|^2 - 2|f|", "retraction lands on the norm-fiber equality", normf, 1e-10);
    out.le("casimir preserved by retract", "retraction preserves the fibers", cas, 1e-12);
    out.le("[r, r*] of retract", "retraction lands in the skeleton", member, 1e-10);
    out.exact("characterizations disagree", "equivalent skeleton characterizations", disagree as f64, 0.0);
    out.le("casimir(rho(w,l)) - l^2", "desingularization squares the casimir", rho_cas, 1e-12);
    out.exact("rho outside skeleton", "desingularization image", rho_in as f64, 0.0);
    out.le("rho(-w,-l) - rho(w,l)", "antipodal invariance", anti, 0.0);

    let nodes = su2_haar(3);
    let mut rng = cfg.rng(11);
    let mut eq = 0.0f64;
    for _ in 0..cfg.count(5, 50) {
        let a = random_sl2(&mut rng, 1.5);
        let r = *retract(&a).element();
        for (u, _) in &nodes {
            eq = eq.max(retract(&u.ad(&a)).element().dist(&u.ad(&r)));
        }
    }
    out.le("retract(Ad_U A) - Ad_U retract(A)", "SU(2)-equivariance of the retraction", eq, 1e-10);

    let e = DesingCoords::new([1.0, 0.0, 0.0], c(2.0, 0.0)).map(|d| rho(&d));
    out.le(
        "rho((1,0,0), 2)",
        "desingularization formula",
        e.map(|m| (*m.matrix() - Mat2::diag(c(0.0, 2.0), c(0.0, -2.0))).frob()).unwrap_or(f64::NAN),
        1e-15,
    );
    let l = c(0.7, -0.3);
    let e = DesingCoords::new([0.0, 0.0, 1.0], l).map(|d| rho(&d));
    let il = c(0.0, 1.0) * l;
    out.le(
        "rho((0,0,1), l)",
        "desingularization formula",
        e.map(|m| (*m.matrix() - Mat2::new(c(0.0, 0.0), il, il, c(0.0, 0.0))).frob()).unwrap_or(f64::NAN),
        1e-15,
    );
    out.holds(
        "rho rejects non-unit w",
        "desingularization domain",
        DesingCoords::new([1.0, 0.1, 0.0], l).is_err(),
    );
    let h1 = hopf(&Su2Element::IDENTITY);
    out.le("hopf(1) = (1,0,0)", "Hopf map", (h1[0] - 1.0).abs() + h1[1].abs() + h1[2].abs(), 0.0);
    let h2 = hopf(&Su2Element::from_ab(c(0.0, 0.0), c(1.0, 0.0)));
    out.le("hopf([[0,1],[-1,0]]) = (-1,0,0)", "Hopf map", (h2[0] + 1.0).abs() + h2[1].abs() + h2[2].abs(), 0.0);
    let mut rng = cfg.rng(12);
    let mut hn = 0.0f64;
    for _ in 0..count.min(10_000) {
        let h = hopf(&Su2Element::random(&mut rng));
        hn = hn.max(((h[0] * h[0] + h[1] * h[1] + h[2] * h[2]).sqrt() - 1.0).abs());
    }
    out.le("|hopf(U)| = 1", "Hopf map lands on the sphere", hn, 1e-12);
}
