use std::f64::consts::PI;

use sl2lin::flatcalc::{Domain, GridField};
use sl2lin::smoothing::{
    cutoff_t, extend, invert, inversion_family, nash_kernel, smooth_schwartz, Extension, Flavor, KernelSamples,
    KernelSpec, SchwartzGrid,
};

fn bump(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Transition from 0 at `u = 0` to 1 at `u = 1`.
fn step(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    let (a, b) = (bump(u), bump(1.0 - u));
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Fourier multiplier: 1 on `|xi| <= 1`, 0 on `|xi| >= 2`.
fn chi(xi: f64) -> f64 {
    1.0 - step(xi.abs() - 1.0)
}

fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn kernel_samples_match_the_inverse_fourier_integral() {
    // the samples are periodized; the window must be wide for the tail to vanish
    let grid = SchwartzGrid { half_width: 96.0, n: 2049, pad: 2 };
    let KernelSamples::Line { h, values } = nash_kernel(&KernelSpec { m: 1, grid }).unwrap() else {
        panic!("expected a line kernel")
    };
    let c = values.len() / 2;
    for i in [0usize, 3, 10, 40, 100] {
        let x = i as f64 * h;
        let expect = simpson(0.0, 2.0, 4000, |xi| chi(xi) * (xi * x).cos()) / PI;
        assert!((values[c + i] - expect).abs() < 1e-9, "x = {x}: {} vs {expect}", values[c + i]);
    }
}

#[test]
fn smoothing_a_gaussian_matches_quadrature_in_frequency() {
    // S~_t e^{-|x|^2} = g_t(x) g_t(y), g_t(x) = pi^{-1/2} int_0^{2t} chi(xi/t) e^{-xi^2/4} cos(xi x) dxi
    // padding by 16 pushes the periodic images of the kernel tail out to distance 192
    let grid = SchwartzGrid { half_width: 6.0, n: 129, pad: 16 };
    let f = grid.field(|x, y| (-(x * x + y * y)).exp()).unwrap();
    for t in [1.0, 1.7, 3.0] {
        let (s, _) = smooth_schwartz(&f, t, grid.pad).unwrap();
        let g = |x: f64| simpson(0.0, 2.0 * t, 4000, |xi| chi(xi / t) * (-xi * xi / 4.0).exp() * (xi * x).cos()) / PI.sqrt();
        for (ix, iy) in [(64usize, 64usize), (70, 64), (75, 55), (50, 85)] {
            let (x, y) = (s.coord(ix), s.coord(iy));
            let got = s.value(ix, iy);
            assert!((got - g(x) * g(y)).abs() < 1e-9, "t = {t} at ({x}, {y}): {got} vs {}", g(x) * g(y));
        }
    }
}

#[test]
fn extension_moments_by_quadrature() {
    let e = Extension::new(4).unwrap();
    for n in 0..=4i32 {
        let m = simpson(0.0, 60.0, 60000, |t| t.powi(n) * e.phi(t));
        let expect = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!((m - expect).abs() < 1e-7, "moment {n}: {m}");
    }
}

#[test]
fn extension_of_a_polynomial() {
    // restriction to the disk and vanishing beyond radius 4
    let n = 65;
    let f = GridField::from_fn(1.0, n, Domain::Disk, |x, y| 1.0 + x - 2.0 * x * y).unwrap();
    let (g, _) = extend(&f, n).unwrap();
    for k in 0..g.values().len() {
        let (x, y) = g.point(k);
        let d = x.hypot(y);
        if d <= 1.0 {
            assert!((g.values()[k] - (1.0 + x - 2.0 * x * y)).abs() < 1e-12);
        } else if d >= 4.0 {
            assert_eq!(g.values()[k], 0.0);
        }
    }
}

#[test]
fn inversion_maps_the_family_to_itself() {
    // f_a(x / |x|^2) = f_{1/a}(x)
    let n = 257;
    let f = GridField::from_fn(4.0, n, Domain::Box, inversion_family(2.0)).unwrap();
    let (g, _) = invert(&f, Flavor::Flat, 4.0, n, Domain::Box).unwrap();
    let other = inversion_family(0.5);
    for k in 0..g.values().len() {
        let (x, y) = g.point(k);
        if (0.5..=2.0).contains(&x.hypot(y)) {
            assert!((g.values()[k] - other(x, y)).abs() < 1e-6);
        }
    }
}

#[test]
fn weight_cutoff_profile() {
    let f = GridField::from_fn(2.0, 65, Domain::Disk, |x, y| 2.0 + x * y).unwrap();
    let (s, r) = (3.0, 2.0);
    let g = cutoff_t(&f, s, r).unwrap();
    for k in 0..g.values().len() {
        let (x, y) = g.point(k);
        let expect = step(s * x.hypot(y) / r - 1.0) * (2.0 + x * y);
        assert!((g.values()[k] - expect).abs() < 1e-14);
    }
    assert!(cutoff_t(&f, 0.0, r).is_err());
    assert!(cutoff_t(&f, s, 1.0).is_err());
}
