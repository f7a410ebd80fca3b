use sl2lin::flatcalc::{
    flat_norm, j_map, parity_decompose, project_k, project_m, sq_pullback, w_fields, y_fields, Domain, GridField,
    NormIndex,
};

const N: usize = 129;

fn field(f: impl Fn(f64, f64) -> f64 + Sync) -> GridField {
    GridField::from_fn(1.0, N, Domain::Disk, f).unwrap()
}

#[test]
fn projection_onto_m_is_orthogonal_projection_on_a_line() {
    // M is spanned pointwise by u = (|z| + x, -y), K by (|z| - x, y)
    let g1 = |x: f64, y: f64| (x - 0.4 * y).sin() + 1.0;
    let g2 = |x: f64, y: f64| x * y - 0.3;
    let g = (field(g1), field(g2));
    let pm = project_m(&g).unwrap();
    let pk = project_k(&g).unwrap();
    let floor = g.0.grid_floor();
    for k in 0..g.0.values().len() {
        let (x, y) = g.0.point(k);
        let m = x.hypot(y);
        if m < floor || !g.0.in_domain(k) {
            continue;
        }
        let proj = |u: [f64; 2]| {
            let c = (g1(x, y) * u[0] + g2(x, y) * u[1]) / (u[0] * u[0] + u[1] * u[1]);
            [c * u[0], c * u[1]]
        };
        // skip the cut where u degenerates
        if m + x > 1e-8 {
            let e = proj([m + x, -y]);
            assert!((pm.0.values()[k] - e[0]).abs() < 1e-12 && (pm.1.values()[k] - e[1]).abs() < 1e-12);
        }
        if m - x > 1e-8 {
            let e = proj([m - x, y]);
            assert!((pk.0.values()[k] - e[0]).abs() < 1e-12 && (pk.1.values()[k] - e[1]).abs() < 1e-12);
        }
    }
    // J rotates M onto K
    let jm = j_map(&pm);
    let back = project_k(&jm).unwrap();
    assert!(back.0.sub(&jm.0).unwrap().max_abs() < 1e-12);
}

#[test]
fn y_fields_bracket_symbolically() {
    // analytic Jacobians with m = |z|
    for (x, y) in [(0.3, 0.7), (-1.2, 0.4), (0.5, -0.5), (0.0, 1.0), (-0.2, -2.0)] {
        let m: f64 = f64::hypot(x, y);
        let y1 = y_fields(1, x, y).unwrap();
        let y2 = y_fields(2, x, y).unwrap();
        assert_eq!(y1, [-y, m + x]);
        assert_eq!(y2, [m - x, -y]);
        // columns: d/dx, d/dy
        let j1 = [[0.0, -1.0], [x / m + 1.0, y / m]];
        let j2 = [[x / m - 1.0, y / m], [0.0, -1.0]];
        let br: Vec<f64> = (0..2)
            .map(|c| y1[0] * j2[c][0] + y1[1] * j2[c][1] - y2[0] * j1[c][0] - y2[1] * j1[c][1])
            .collect();
        assert!((br[0] + y1[0]).abs() < 1e-14 && (br[1] + y1[1]).abs() < 1e-14, "{br:?}");
    }
    // [Y1, Y2] and Y2 coincide at z = i
    assert_eq!(y_fields(1, 0.0, 1.0).unwrap(), [-1.0, 1.0]);
    assert_eq!(y_fields(2, 0.0, 1.0).unwrap(), [1.0, -1.0]);
    assert!(y_fields(2, 0.0, 0.0).is_err());
}

#[test]
fn w_fields_push_forward_to_the_square_map_coordinates() {
    // W_1, W_2 are the preimages of d/du, d/dv under lambda -> lambda^2
    for (l1, l2) in [(0.3, 0.7), (-1.0, 0.2), (0.9, -0.1)] {
        let jac = [[2.0 * l1, -2.0 * l2], [2.0 * l2, 2.0 * l1]];
        for (i, e) in [(1u8, [1.0, 0.0]), (2u8, [0.0, 1.0])] {
            let w = w_fields(i, l1, l2).unwrap();
            let p = [jac[0][0] * w[0] + jac[0][1] * w[1], jac[1][0] * w[0] + jac[1][1] * w[1]];
            assert!((p[0] - e[0]).abs() < 1e-14 && (p[1] - e[1]).abs() < 1e-14);
        }
    }
}

#[test]
fn parity_parts_of_a_polynomial() {
    let parts = [
        |x: f64, y: f64| 1.0 + x * x - y * y * y * y,
        |x: f64, y: f64| 2.0 - x * x * y * y,
        |x: f64, y: f64| x * x + 3.0 * y * y,
        |_: f64, y: f64| 0.5 + y * y,
    ];
    let g = GridField::from_fn(1.0, N, Domain::Box, |x, y| {
        parts[0](x, y) + x * parts[1](x, y) + y * parts[2](x, y) + x * y * parts[3](x, y)
    })
    .unwrap();
    let p = parity_decompose(&g);
    let eps = g.grid_floor();
    for (part, f) in [(&p.g0, parts[0]), (&p.gx, parts[1]), (&p.gy, parts[2]), (&p.gxy, parts[3])] {
        for k in 0..g.values().len() {
            let (x, y) = g.point(k);
            if x.abs() < eps || y.abs() < eps {
                continue;
            }
            assert!((part.values()[k] - f(x, y)).abs() < 1e-11);
        }
    }
}

#[test]
fn square_map_pullback() {
    let g = field(|u, v| 1.0 + u - 0.5 * v + u * v);
    let h = sq_pullback(&g).unwrap();
    for k in 0..h.values().len() {
        if !h.in_domain(k) {
            continue;
        }
        let (x, y) = h.point(k);
        let (u, v) = (x * x - y * y, 2.0 * x * y);
        if u.hypot(v) <= 1.0 {
            assert!((h.values()[k] - (1.0 + u - 0.5 * v + u * v)).abs() < 1e-10);
        }
    }
}

#[test]
fn flat_norm_against_a_dense_polar_sup() {
    // f = x^2 y^2 (x + 2), k = 2, first derivatives
    let f = |x: f64, y: f64| x * x * y * y * (x + 2.0);
    let fx = |x: f64, y: f64| 2.0 * x * y * y * (x + 2.0) + x * x * y * y;
    let fy = |x: f64, y: f64| 2.0 * x * x * y * (x + 2.0);
    let mut sup = 0.0f64;
    for i in 1..=400 {
        let r = i as f64 / 400.0;
        for j in 0..720 {
            let th = j as f64 * std::f64::consts::TAU / 720.0;
            let (x, y) = (r * th.cos(), r * th.sin());
            sup = sup.max(f(x, y).abs().max(fx(x, y).abs()).max(fy(x, y).abs()) / (r * r));
        }
    }
    let got = flat_norm(&GridField::from_fn(1.0, 257, Domain::Disk, f).unwrap(), NormIndex::new(1, 2, 1.0)).unwrap();
    assert!((got / sup - 1.0).abs() < 1e-2, "{got} vs {sup}");
    assert!(flat_norm(&field(|x, _| 1.0 + x), NormIndex::new(0, 1, 1.0)).is_err());
}
