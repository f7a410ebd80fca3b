//! Deterministic sample points.

use crate::tensor::{Point, DIM};

const BASES: [u8; DIM] = [2, 3, 5, 7, 11, 13];

/// First `count` points of the Halton sequence in `[-1, 1]^6` that fall in the unit
/// ball, scaled to radius `radius`; `offset` leaps into the sequence.
pub fn halton_ball(count: usize, radius: f64, offset: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(count);
    let mut i = offset + 1;
    while out.len() < count {
        let p: Point = std::array::from_fn(|k| 2.0 * halton::number(BASES[k], i) - 1.0);
        i += 1;
        let n2: f64 = p.iter().map(|v| v * v).sum();
        if n2 <= 1.0 {
            out.push(p.map(|v| v * radius));
        }
    }
    out
}

/// Halton points in the annulus `inner <= |x| <= outer`.
pub fn halton_shell(count: usize, inner: f64, outer: f64, offset: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(count);
    let mut i = offset + 1;
    while out.len() < count {
        let p: Point = std::array::from_fn(|k| outer * (2.0 * halton::number(BASES[k], i) - 1.0));
        i += 1;
        let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n >= inner && n <= outer {
            out.push(p);
        }
    }
    out
}
