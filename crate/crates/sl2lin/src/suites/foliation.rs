use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{max_of, Checks, SuiteConfig};
use crate::field::{exterior_derivative, exterior_derivative_field, schouten, schouten_field, FieldHandle};
use crate::foliation::{
    cartan_trivector, casimir_parts, df, flat, flat_bivector, gamma, leaf_tangent_basis, omega_tilde,
    phi_field, phi_form, pi, pi_field, poisson_diff, poisson_diff_field, r_sq, sharp, vfield_v, CartanPart,
};
use crate::sampling::halton_ball;
use crate::skeleton::DesingCoords;
use crate::tensor::{lex_masks, Point, PointTensor, Variance, DIM};

const CO: Variance = Variance::Covariant;
const CONTRA: Variance = Variance::Contravariant;

/// Field whose components are random polynomials of degree at most two.
pub(crate) fn poly_field(rng: &mut ChaCha8Rng, degree: usize, variance: Variance) -> FieldHandle {
    let masks = lex_masks(degree);
    let coeffs: Vec<(f64, [f64; DIM], [[f64; DIM]; DIM])> = masks
        .iter()
        .map(|_| {
            let g = |r: &mut ChaCha8Rng| -> f64 { r.sample::<f64, _>(StandardNormal) * 0.5 };
            (g(rng), std::array::from_fn(|_| g(rng)), std::array::from_fn(|_| std::array::from_fn(|_| g(rng))))
        })
        .collect();
    FieldHandle::new(move |x| {
        let mut t = PointTensor::zero(degree, variance);
        for (m, (c0, c1, c2)) in masks.iter().zip(&coeffs) {
            let mut v = *c0;
            for k in 0..DIM {
                v += c1[k] * x[k];
                for l in 0..DIM {
                    v += c2[k][l] * x[k] * x[l];
                }
            }
            t.set(*m, v);
        }
        t
    })
}

/// Pushforward of a tangent vector `(dw, dl)` of `S^2 x C` along `rho`: `z = l w`.
pub(crate) fn rho_push(d: &DesingCoords, dw: [f64; 3], dl: [f64; 2]) -> [f64; DIM] {
    let w = d.w();
    let (l1, l2) = (d.lambda.re, d.lambda.im);
    std::array::from_fn(|k| if k < 3 { dl[0] * w[k] + l1 * dw[k] } else { dl[1] * w[k - 3] + l2 * dw[k - 3] })
}

/// Positively oriented orthonormal frame `(u, w x u)` of `T_w S^2`.
pub(crate) fn sphere_frame(w: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pick = if w[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = pick[0] * w[0] + pick[1] * w[1] + pick[2] * w[2];
    let u: [f64; 3] = std::array::from_fn(|k| pick[k] - d * w[k]);
    let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    let u = u.map(|v| v / n);
    let v = [w[1] * u[2] - w[2] * u[1], w[2] * u[0] - w[0] * u[2], w[0] * u[1] - w[1] * u[0]];
    (u, v)
}

/// Images under `D rho` of the frame `(u, v, d/dl1, d/dl2)`.
pub(crate) fn rho_frame(d: &DesingCoords) -> [[f64; DIM]; 4] {
    let (u, v) = sphere_frame(d.w());
    [
        rho_push(d, u, [0.0, 0.0]),
        rho_push(d, v, [0.0, 0.0]),
        rho_push(d, [0.0; 3], [1.0, 0.0]),
        rho_push(d, [0.0; 3], [0.0, 1.0]),
    ]
}

/// Max deviation of `rho^* form` from `a omega_S2 + b dl1 ^ dl2` on the frame.
pub(crate) fn pullback_defect(form: &PointTensor, d: &DesingCoords, a: f64, b: f64) -> f64 {
    let fr = rho_frame(d);
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let expect = match (i, j) {
                (0, 1) => a,
                (2, 3) => b,
                _ => 0.0,
            };
            worst = worst.max((form.eval(&[fr[i], fr[j]]) - expect).abs());
        }
    }
    worst
}

/// Brute-force Jacobiator of a bivector field:
/// `J^{ijk} = sum_l W^{il} d_l W^{jk} + W^{jl} d_l W^{ki} + W^{kl} d_l W^{ij}`.
pub(crate) fn jacobiator(w: &FieldHandle, x: &Point) -> PointTensor {
    let m = w.eval(x).to_matrix();
    let dm: Vec<[[f64; DIM]; DIM]> = w.partials(x).iter().map(|t| t.to_matrix()).collect();
    let mut out = PointTensor::zero(3, CONTRA);
    for mask in lex_masks(3) {
        let ix: Vec<usize> = (0..DIM).filter(|b| mask & (1 << b) != 0).collect();
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        let v: f64 = (0..DIM)
            .map(|l| m[i][l] * dm[l][j][k] + m[j][l] * dm[l][k][i] + m[k][l] * dm[l][i][j])
            .sum();
        out.set(mask, v);
    }
    out
}

fn random_points(cfg: &SuiteConfig, stream: u64, count: usize, radius: f64) -> Vec<Point> {
    let mut rng = cfg.rng(stream);
    (0..count)
        .map(|_| std::array::from_fn(|_| rng.random_range(-radius..radius)))
        .collect()
}

fn cross3(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

pub(crate) fn run(cfg: &SuiteConfig, out: &mut Checks) {
    let pts = random_points(cfg, 30, cfg.count(10, 100), 1.0);
    let pi1 = pi_field(1);
    let pi2 = pi_field(2);

    out.le("pi at the origin", "linear coefficients", pi(1, &[0.0; DIM]).max_abs() + pi(2, &[0.0; DIM]).max_abs(), 0.0);
    let jac = max_of(pts.iter().map(|x| {
        let s = schouten(&pi1, &pi1, x);
        let j = jacobiator(&pi1, x).scale(2.0);
        s.max_abs().max(s.sub(&j).max_abs())
    }));
    out.le("[pi_1, pi_1]", "Jacobi identity of pi_1", jac, 1e-9);
    let j2 = max_of(pts.iter().map(|x| schouten(&pi2, &pi2, x).max_abs().max(schouten(&pi1, &pi2, x).max_abs())));
    out.le("[pi_2, pi_2] and [pi_1, pi_2]", "compatible Poisson pair", j2, 1e-9);

    // {Re F, Re G} = Re {F, G} for linear F = u.z, G = v.z, {F, G} = (u x v).z
    let mut rng = cfg.rng(31);
    let mut lie = 0.0f64;
    for x in &pts {
        let cu = |r: &mut ChaCha8Rng| -> [num_complex::Complex64; 3] {
            std::array::from_fn(|_| num_complex::Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        };
        let (u, v) = (cu(&mut rng), cu(&mut rng));
        let dre = |c: &[num_complex::Complex64; 3]| -> [f64; DIM] {
            std::array::from_fn(|k| if k < 3 { c[k].re } else { -c[k - 3].im })
        };
        let w = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        let expect: f64 = (0..3).map(|k| (w[k] * num_complex::Complex64::new(x[k], x[k + 3])).re).sum();
        let got = pi(1, x).eval(&[dre(&u), dre(&v)]);
        lie = lie.max((got - expect).abs());
    }
    out.le("pi_1(d Re F, d Re G) - Re {F, G}", "linear functions bracket as sl2", lie, 1e-12);

    // [X, g] = X(g)
    let mut xg = 0.0f64;
    let x_field = poly_field(&mut rng, 1, CONTRA);
    let g = poly_field(&mut rng, 0, CONTRA);
    for x in &pts {
        let v = x_field.eval(x).as_vector();
        let h = 1e-5;
        let gp = |s: f64| g.eval(&std::array::from_fn(|k| x[k] + s * v[k])).scalar_value();
        let dir = (gp(-2.0 * h) - 8.0 * gp(-h) + 8.0 * gp(h) - gp(2.0 * h)) / (12.0 * h);
        xg = xg.max((schouten(&x_field, &g, x).scalar_value() - dir).abs() / (1.0 + dir.abs()));
    }
    out.le("[X, g] - X(g)", "bracket with a function", xg, 1e-8);

    // graded Jacobi on polynomial fields
    let mut gj = 0.0f64;
    for (dp, dq, dr) in [(2, 2, 2), (1, 2, 2), (1, 1, 2)] {
        let p = poly_field(&mut rng, dp, CONTRA);
        let q = poly_field(&mut rng, dq, CONTRA);
        let r = poly_field(&mut rng, dr, CONTRA);
        let sgn = if (dp - 1) * (dq - 1) % 2 == 0 { 1.0 } else { -1.0 };
        for x in pts.iter().take(5) {
            let lhs = schouten(&p, &schouten_field(&q, &r), x);
            let a = schouten(&schouten_field(&p, &q), &r, x);
            let b = schouten(&q, &schouten_field(&p, &r), x);
            let res = lhs.sub(&a).sub(&b.scale(sgn));
            gj = gj.max(res.max_abs() / (1.0 + lhs.max_abs()));
        }
    }
    out.le("graded Jacobi residual", "Schouten bracket is graded Lie", gj, 1e-7);
    let mut sym = 0.0f64;
    let p = poly_field(&mut rng, 2, CONTRA);
    let q = poly_field(&mut rng, 2, CONTRA);
    for x in pts.iter().take(10) {
        let r = schouten(&p, &q, x).sub(&schouten(&q, &p, x));
        let wq = jacobiator(&p.sum(&q), x).sub(&jacobiator(&p, x)).sub(&jacobiator(&q, x));
        let brute = schouten(&p, &q, x).sub(&wq);
        sym = sym.max(r.max_abs()).max(brute.max_abs() / (1.0 + wq.max_abs()));
    }
    out.le("[P, Q] - [Q, P] and polarized Jacobiator", "bracket of bivectors vs coordinate oracle", sym, 1e-8);

    cocycles(cfg, out, &pts, &mut rng);
    transversal(cfg, out, &pts);
    desingularization(cfg, out);
    forms(cfg, out, &pts, &mut rng);
}

fn cocycles(_cfg: &SuiteConfig, out: &mut Checks, pts: &[Point], rng: &mut ChaCha8Rng) {
    let gf = FieldHandle::scalar(
        |x| {
            let (a, b) = casimir_parts(x);
            a * a + b * b + 0.3 * a
        },
        CONTRA,
    );
    let c1 = max_of(pts.iter().map(|x| poisson_diff(&gf, x).max_abs()));
    out.le("d_pi (g o f)", "casimirs are cocycles", c1, 1e-8);
    let cr = FieldHandle::constant(cartan_trivector(CartanPart::Real));
    let ci = FieldHandle::constant(cartan_trivector(CartanPart::Imaginary));
    let c2 = max_of(pts.iter().map(|x| poisson_diff(&cr, x).max_abs().max(poisson_diff(&ci, x).max_abs())));
    out.le("d_pi C_R and d_pi C_I", "Cartan trivectors are cocycles", c2, 1e-8);
    let top = cartan_trivector(CartanPart::Real).wedge(&cartan_trivector(CartanPart::Imaginary));
    out.ge("|C_R ^ C_I|", "top-degree class is nonzero", top.max_abs(), 0.1);
    out.le(
        "coefficient of dx1 dx2 dx3 in C_R",
        "Cartan trivector formula",
        (cartan_trivector(CartanPart::Real).at(&[0, 1, 2]) - 0.5).abs(),
        0.0,
    );
    // d_pi of a linear function is minus the Hamiltonian vector field
    let mut lin = 0.0f64;
    for x in pts {
        let a: [f64; DIM] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let l = FieldHandle::scalar(move |p| a.iter().zip(p).map(|(u, v)| u * v).sum(), CONTRA);
        let dpl = poisson_diff(&l, x).as_vector();
        let ham = sharp(&pi(1, x), &a);
        lin = lin.max((0..DIM).map(|k| (dpl[k] + ham[k]).abs()).fold(0.0, f64::max));
    }
    out.le("d_pi l + pi^sharp(dl)", "coadjoint action on linear functions", lin, 1e-10);
    let mut dd = 0.0f64;
    for deg in 0..3 {
        let h = poly_field(rng, deg, CONTRA);
        let dh = poisson_diff_field(&h);
        for x in pts.iter().take(5) {
            dd = dd.max(poisson_diff(&dh, x).max_abs());
        }
    }
    out.le("d_pi d_pi h", "d_pi squares to zero", dd, 1e-7);
}

fn transversal(_cfg: &SuiteConfig, out: &mut Checks, pts: &[Point]) {
    let e = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let v1 = vfield_v(1, &e).map(|v| v.as_vector());
    out.le(
        "V_1 at z = (1,0,0)",
        "transversal fields",
        v1.map(|v| (v[0] - 0.5).abs() + v[1..].iter().map(|c| c.abs()).sum::<f64>()).unwrap_or(f64::NAN),
        1e-15,
    );
    out.holds("V rejects the origin", "transversal fields", vfield_v(1, &[0.0; DIM]).is_err());
    let (mut pair, mut iv, mut spl, mut fl) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut lin = 0.0f64;
    for (n, x) in pts.iter().enumerate() {
        let vs = [vfield_v(1, x), vfield_v(2, x)];
        let ws = [omega_tilde(1, x), omega_tilde(2, x)];
        let (Ok(v1), Ok(v2), Ok(w1), Ok(w2)) = (&vs[0], &vs[1], &ws[0], &ws[1]) else {
            return out.holds("V and omega~ defined off the origin", "transversal fields", false).note = None;
        };
        let vv = [v1.as_vector(), v2.as_vector()];
        for i in 0..2 {
            let dfi = df(i as u8 + 1, x).as_vector();
            for j in 0..2 {
                let p: f64 = dfi.iter().zip(&vv[j]).map(|(a, b)| a * b).sum();
                pair = pair.max((p - if i == j { 1.0 } else { 0.0 }).abs());
                iv = iv.max([w1, w2][i].interior(&vv[j]).max_abs());
            }
        }
        for (i, w) in [w1, w2].into_iter().enumerate() {
            let p = pi(i as u8 + 1, x);
            for k in 0..DIM {
                let mut ek = [0.0; DIM];
                ek[k] = 1.0;
                let a = sharp(&p, &ek);
                let b = sharp(&p, &flat(w, &a));
                spl = spl.max((0..DIM).map(|m| (a[m] - b[m]).abs()).fold(0.0, f64::max) / (1.0 + p.max_abs()));
            }
        }
        fl = fl
            .max(flat_bivector(w1, &pi(1, x)).add(w1).max_abs())
            .max(flat_bivector(w1, &pi(2, x)).sub(w2).max_abs());
        // R^2 omega~ is linear: compare with the sum of its values at the scaled parts
        let y = pts[(n + 1) % pts.len()];
        let num = |p: &Point| omega_tilde(1, p).map(|w| w.scale(r_sq(p))).unwrap_or(PointTensor::zero(2, CO));
        let s: Point = std::array::from_fn(|k| x[k] + 2.0 * y[k]);
        lin = lin.max(num(&s).sub(&num(x)).sub(&num(&y).scale(2.0)).max_abs());
    }
    out.le("df_j(V_i) - delta_ij", "V is dual to df", pair, 1e-12);
    out.le("i_{V_j} omega~_i", "omega~ vanishes on V", iv, 1e-12);
    out.le("pi^sharp omega~^flat pi^sharp - pi^sharp", "omega~ extends the leafwise forms", spl, 1e-10);
    out.le("omega~_1^flat(pi_1) + omega~_1, omega~_1^flat(pi_2) - omega~_2", "bivectors to forms", fl, 1e-10);
    out.le("R^2 omega~_1 additivity defect", "R^2 omega~ is polynomial", lin, 1e-12);
}

fn desingularization(cfg: &SuiteConfig, out: &mut Checks) {
    let mut rng = cfg.rng(32);
    let (mut fr, mut w1, mut w2, mut ph, mut g1, mut g2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut rel, mut area) = (0.0f64, 0.0f64);
    for _ in 0..cfg.count(10, 100) {
        let d = super::algebra::random_desing(&mut rng, 1.5);
        let (l1, l2) = (d.lambda.re, d.lambda.im);
        let l2n = l1 * l1 + l2 * l2;
        if l2n < 1e-4 {
            continue;
        }
        let x = crate::skeleton::rho(&d).to_real();
        let (f1, f2) = casimir_parts(&x);
        let sq = d.lambda * d.lambda;
        fr = fr.max((f1 - sq.re).abs().max((f2 - sq.im).abs()));
        let (Ok(o1), Ok(o2), Ok(c1), Ok(c2)) = (omega_tilde(1, &x), omega_tilde(2, &x), gamma(1, &x), gamma(2, &x)) else {
            continue;
        };
        w1 = w1.max(pullback_defect(&o1, &d, -l1, 0.0));
        w2 = w2.max(pullback_defect(&o2, &d, l2, 0.0));
        ph = ph.max(pullback_defect(&phi_form(&x), &d, 0.0, 4.0 * l2n));
        g1 = g1.max(pullback_defect(&c1, &d, -l1 / (2.0 * l2n), 0.0));
        g2 = g2.max(pullback_defect(&c2, &d, -l2 / (2.0 * l2n), 0.0));
        // rho-relatedness of W_i and V_i
        for i in 1..=2u8 {
            let wv = crate::flatcalc::w_fields(i, l1, l2).unwrap_or([f64::NAN; 2]);
            let push = rho_push(&d, [0.0; 3], wv);
            let v = vfield_v(i, &x).map(|v| v.as_vector()).unwrap_or([f64::NAN; DIM]);
            rel = rel.max((0..DIM).map(|k| (push[k] - v[k]).abs()).fold(0.0, f64::max));
        }
        let (u, v) = sphere_frame(d.w());
        let det: f64 = cross3(u, v).iter().zip(d.w()).map(|(a, b)| a * b).sum();
        area = area.max((det - 1.0).abs());
    }
    out.le("f o rho - lambda^2", "desingularization squares the casimir", fr, 1e-12);
    out.le("rho^* omega~_1 + lambda_1 omega_S2", "pullback of omega~_1", w1, 1e-9);
    out.le("rho^* omega~_2 - lambda_2 omega_S2", "pullback of omega~_2", w2, 1e-9);
    out.le("rho^* phi - 4|lambda|^2 dl1 dl2", "pullback of phi", ph, 1e-9);
    out.le("rho^* gamma_1 + lambda_1/(2|lambda|^2) omega_S2", "pullback of gamma_1", g1, 1e-8);
    out.le("rho^* gamma_2 + lambda_2/(2|lambda|^2) omega_S2", "pullback of gamma_2", g2, 1e-8);
    out.le("D rho (W_i) - V_i", "W_i and V_i are rho-related", rel, 1e-7);
    out.le("orientation of the sphere frame", "area form of S^2", area, 1e-12);
}

fn forms(_cfg: &SuiteConfig, out: &mut Checks, pts: &[Point], rng: &mut ChaCha8Rng) {
    let phi = phi_field();
    let dphi = max_of(pts.iter().map(|x| exterior_derivative(&phi, x).max_abs()));
    out.le("d phi", "phi is closed", dphi, 1e-12);
    let a = FieldHandle::new(|x| PointTensor::basis(1, CO).scale(x[0]));
    let expect = PointTensor::basis(0, CO).wedge(&PointTensor::basis(1, CO));
    let dl = max_of(pts.iter().map(|x| exterior_derivative(&a, x).sub(&expect).max_abs()));
    out.le("d(x1 dx2) - dx1 ^ dx2", "exterior derivative", dl, 1e-10);
    let form = poly_field(rng, 1, CO);
    let dform = exterior_derivative_field(&form);
    let dd = max_of(pts.iter().take(10).map(|x| exterior_derivative(&dform, x).max_abs()));
    out.le("d d alpha", "d squares to zero", dd, 1e-7);
    let (mut closed, mut vv) = (0.0f64, 0.0f64);
    for i in 1..=2u8 {
        let g = FieldHandle::new(move |x| gamma(i, x).unwrap_or(PointTensor::zero(2, CO))).with_step(1e-3);
        for x in pts.iter().take(10) {
            if r_sq(x) < 0.1 {
                continue;
            }
            let dg = exterior_derivative(&g, x);
            let b = leaf_tangent_basis(x);
            for p in 0..b.len() {
                for q in (p + 1)..b.len() {
                    for r in (q + 1)..b.len() {
                        closed = closed.max(dg.eval(&[b[p], b[q], b[r]]).abs());
                    }
                }
            }
            if let (Ok(gx), Ok(v)) = (gamma(i, x), vfield_v(i, x)) {
                let v = v.as_vector();
                vv = vv.max(gx.interior(&v).interior(&v).max_abs());
            }
        }
    }
    out.le("d gamma_i on leaf tangents", "gamma_i is leafwise closed", closed, 1e-7);
    out.le("i_V i_V gamma", "antisymmetry of contractions", vv, 1e-14);

    // bracket estimate on the unit ball, sampled sup norms
    let samples = halton_ball(64, 1.0, 3);
    let v = poly_field(rng, 1, CONTRA);
    let w = poly_field(rng, 2, CONTRA);
    let sup0 = |f: &FieldHandle| max_of(samples.iter().map(|x| f.eval(x).max_abs()));
    let sup1 = |f: &FieldHandle| {
        max_of(samples.iter().map(|x| f.partials(x).iter().map(|t| t.max_abs()).fold(f.eval(x).max_abs(), f64::max)))
    };
    let lhs = max_of(samples.iter().map(|x| schouten(&v, &w, x).max_abs()));
    let c = lhs / (sup0(&v) * sup1(&w) + sup1(&v) * sup0(&w));
    out.soft("bracket estimate constant, n = 0", "tame estimate for the bracket", c, 2.0 * DIM as f64);
}
