//! Pointwise exterior calculus for the linear Poisson structure on sl2(C) = R^6:
//! the bivectors `pi_1, pi_2`, transversals `V_i`, extended leafwise forms, and the
//! Cartan trivectors.

use crate::error::{Error, Result};
use crate::field::{exterior_derivative, schouten, FieldHandle};
use crate::tensor::{Point, PointTensor, Variance, DIM};

const CO: Variance = Variance::Covariant;
const CONTRA: Variance = Variance::Contravariant;

const CYCLIC: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

fn xi(k: usize) -> usize {
    k
}

fn yi(k: usize) -> usize {
    k + 3
}

/// `R^2 = tr(AA^*) = 2 |z|^2`.
pub fn r_sq(x: &Point) -> f64 {
    2.0 * x.iter().map(|v| v * v).sum::<f64>()
}

/// Real and imaginary parts of the Casimir `f = z1^2 + z2^2 + z3^2`.
pub fn casimir_parts(x: &Point) -> (f64, f64) {
    let mut f1 = 0.0;
    let mut f2 = 0.0;
    for k in 0..3 {
        f1 += x[xi(k)] * x[xi(k)] - x[yi(k)] * x[yi(k)];
        f2 += 2.0 * x[xi(k)] * x[yi(k)];
    }
    (f1, f2)
}

fn unit(k: usize) -> Point {
    let mut e = [0.0; DIM];
    e[k] = 1.0;
    e
}

/// Field `T(x) = sum_k x_k T(e_k)` with exact partials.
fn linear_field(t: fn(&Point) -> PointTensor) -> FieldHandle {
    FieldHandle::with_partials(t, move |_| std::array::from_fn(|k| t(&unit(k))))
}

fn pi_1(x: &Point) -> PointTensor {
    let mut p = PointTensor::zero(2, CONTRA);
    for (a, b, c) in CYCLIC {
        let (xa, ya) = (x[xi(a)], x[yi(a)]);
        p.add_at(&[xi(b), xi(c)], xa);
        p.add_at(&[yi(b), yi(c)], -xa);
        p.add_at(&[xi(b), yi(c)], ya);
        p.add_at(&[yi(b), xi(c)], ya);
    }
    p
}

fn pi_2(x: &Point) -> PointTensor {
    let mut p = PointTensor::zero(2, CONTRA);
    for (a, b, c) in CYCLIC {
        let (xa, ya) = (x[xi(a)], x[yi(a)]);
        p.add_at(&[xi(b), xi(c)], ya);
        p.add_at(&[yi(b), yi(c)], -ya);
        p.add_at(&[xi(b), yi(c)], -xa);
        p.add_at(&[yi(b), xi(c)], -xa);
    }
    p
}

/// `pi_1 = 4 Re(pi_C)`, `pi_2 = 4 Im(pi_C)` for `pi_C = z1 dz2^dz3 + cyclic`.
pub fn pi(i: u8, x: &Point) -> PointTensor {
    match i {
        1 => pi_1(x),
        2 => pi_2(x),
        _ => panic!("pi index must be 1 or 2"),
    }
}

pub fn pi_field(i: u8) -> FieldHandle {
    match i {
        1 => linear_field(pi_1),
        2 => linear_field(pi_2),
        _ => panic!("pi index must be 1 or 2"),
    }
}

fn df_1(x: &Point) -> PointTensor {
    let mut v = [0.0; DIM];
    for k in 0..3 {
        v[xi(k)] = 2.0 * x[xi(k)];
        v[yi(k)] = -2.0 * x[yi(k)];
    }
    PointTensor::vector(&v, CO)
}

fn df_2(x: &Point) -> PointTensor {
    let mut v = [0.0; DIM];
    for k in 0..3 {
        v[xi(k)] = 2.0 * x[yi(k)];
        v[yi(k)] = 2.0 * x[xi(k)];
    }
    PointTensor::vector(&v, CO)
}

/// `df_1` or `df_2`.
pub fn df(i: u8, x: &Point) -> PointTensor {
    match i {
        1 => df_1(x),
        2 => df_2(x),
        _ => panic!("df index must be 1 or 2"),
    }
}

pub fn df_field(i: u8) -> FieldHandle {
    match i {
        1 => linear_field(df_1),
        2 => linear_field(df_2),
        _ => panic!("df index must be 1 or 2"),
    }
}

/// `phi = df_1 ^ df_2`.
pub fn phi_form(x: &Point) -> PointTensor {
    df_1(x).wedge(&df_2(x))
}

pub fn phi_field() -> FieldHandle {
    df_field(1).wedge(&df_field(2))
}

fn guard(x: &Point) -> Result<f64> {
    let r2 = r_sq(x);
    if r2 < 1e-20 {
        Err(Error::NearOrigin { r_sq: r2 })
    } else {
        Ok(r2)
    }
}

/// `V_1 = R^{-2} sum (x_i d/dx_i - y_i d/dy_i)`, `V_2 = R^{-2} sum (x_i d/dy_i + y_i d/dx_i)`.
pub fn vfield_v(i: u8, x: &Point) -> Result<PointTensor> {
    let r2 = guard(x)?;
    let mut v = [0.0; DIM];
    for k in 0..3 {
        match i {
            1 => {
                v[xi(k)] = x[xi(k)] / r2;
                v[yi(k)] = -x[yi(k)] / r2;
            }
            2 => {
                v[yi(k)] = x[xi(k)] / r2;
                v[xi(k)] = x[yi(k)] / r2;
            }
            _ => return Err(Error::InvalidParameter(format!("V index {i}"))),
        }
    }
    Ok(PointTensor::vector(&v, CONTRA))
}

/// Numerators `Omega_i = |z|^2 omega~_i`; linear in `x`.
fn omega_num_1(x: &Point) -> PointTensor {
    let mut w = PointTensor::zero(2, CO);
    for (a, b, c) in CYCLIC {
        let (xa, ya) = (x[xi(a)], x[yi(a)]);
        w.add_at(&[yi(b), yi(c)], xa);
        w.add_at(&[xi(b), xi(c)], -xa);
        w.add_at(&[xi(b), yi(c)], -ya);
        w.add_at(&[yi(b), xi(c)], -ya);
    }
    w
}

fn omega_num_2(x: &Point) -> PointTensor {
    let mut w = PointTensor::zero(2, CO);
    for (a, b, c) in CYCLIC {
        let (xa, ya) = (x[xi(a)], x[yi(a)]);
        w.add_at(&[yi(b), yi(c)], ya);
        w.add_at(&[xi(b), xi(c)], -ya);
        w.add_at(&[xi(b), yi(c)], xa);
        w.add_at(&[yi(b), xi(c)], xa);
    }
    w
}

fn omega_num(i: u8) -> fn(&Point) -> PointTensor {
    match i {
        1 => omega_num_1,
        2 => omega_num_2,
        _ => panic!("omega index must be 1 or 2"),
    }
}

/// Extension of the leafwise symplectic forms:
/// `omega~_1 + i omega~_2 = -|z|^{-2} sum_cyclic z1 dz2bar ^ dz3bar`.
pub fn omega_tilde(i: u8, x: &Point) -> Result<PointTensor> {
    let r2 = guard(x)?;
    Ok(omega_num(i)(x).scale(2.0 / r2))
}

/// `omega~_i` as a field with exact partials (undefined at the origin).
pub fn omega_tilde_field(i: u8) -> FieldHandle {
    let num = omega_num(i);
    FieldHandle::with_partials(
        move |x| num(x).scale(2.0 / r_sq(x)),
        move |x| {
            let z2 = 0.5 * r_sq(x);
            let w = num(x);
            std::array::from_fn(|k| {
                let mut d = num(&unit(k)).scale(1.0 / z2);
                d.axpy(-2.0 * x[k] / (z2 * z2), &w);
                d
            })
        },
    )
}

/// `gamma_i = i_{V_i} d omega~_1`.
pub fn gamma(i: u8, x: &Point) -> Result<PointTensor> {
    let v = vfield_v(i, x)?;
    let d = exterior_derivative(&omega_tilde_field(1), x);
    Ok(d.interior(&v.as_vector()))
}

pub fn gamma_field(i: u8) -> FieldHandle {
    FieldHandle::new(move |x| gamma(i, x).unwrap_or_else(|_| PointTensor::zero(2, CO)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CartanPart {
    Real,
    Imaginary,
}

/// Constant trivectors `C_R = 4 Re(d/dz1 ^ d/dz2 ^ d/dz3)` and `C_I = 4 Im(...)`.
pub fn cartan_trivector(part: CartanPart) -> PointTensor {
    let (x1, x2, x3, y1, y2, y3) = (0, 1, 2, 3, 4, 5);
    let mut c = PointTensor::zero(3, CONTRA);
    match part {
        CartanPart::Real => {
            c.add_at(&[x1, x2, x3], 0.5);
            c.add_at(&[y1, y2, x3], -0.5);
            c.add_at(&[x1, y2, y3], -0.5);
            c.add_at(&[y1, x2, y3], -0.5);
        }
        CartanPart::Imaginary => {
            c.add_at(&[y1, y2, y3], 0.5);
            c.add_at(&[y1, x2, x3], -0.5);
            c.add_at(&[x1, y2, x3], -0.5);
            c.add_at(&[x1, x2, y3], -0.5);
        }
    }
    c
}

/// `d_pi P = [pi_1, P]`.
pub fn poisson_diff(p: &FieldHandle, x: &Point) -> PointTensor {
    schouten(&pi_field(1), p, x)
}

pub fn poisson_diff_field(p: &FieldHandle) -> FieldHandle {
    let q = p.clone();
    FieldHandle::new(move |x| poisson_diff(&q, x)).with_step(p.fd.step)
}

/// `pi^sharp(alpha) = i_alpha pi`.
pub fn sharp(p: &PointTensor, alpha: &[f64; DIM]) -> [f64; DIM] {
    p.interior(alpha).as_vector()
}

/// `omega^flat(v) = i_v omega`.
pub fn flat(omega: &PointTensor, v: &[f64; DIM]) -> [f64; DIM] {
    omega.interior(v).as_vector()
}

/// `omega^flat` extended to bivectors: `omega^flat(u ^ v) = omega^flat(u) ^ omega^flat(v)`.
pub fn flat_bivector(omega: &PointTensor, p: &PointTensor) -> PointTensor {
    let images: Vec<PointTensor> = (0..DIM)
        .map(|i| PointTensor::vector(&flat(omega, &unit(i)), CO))
        .collect();
    let mut out = PointTensor::zero(2, CO);
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            let c = p.at(&[i, j]);
            if c != 0.0 {
                out.axpy(c, &images[i].wedge(&images[j]));
            }
        }
    }
    out
}

/// Orthonormal basis of `ker df_1 cap ker df_2`, the tangent space of the leaf.
pub fn leaf_tangent_basis(x: &Point) -> Vec<[f64; DIM]> {
    let n1 = df_1(x).as_vector();
    let n2 = df_2(x).as_vector();
    let mut basis: Vec<[f64; DIM]> = Vec::new();
    let mut normals: Vec<[f64; DIM]> = Vec::new();
    for n in [n1, n2] {
        let mut v = n;
        for u in &normals {
            let d = crate::tensor::dot(&v, u);
            for k in 0..DIM {
                v[k] -= d * u[k];
            }
        }
        let nv = crate::tensor::norm(&v);
        if nv > 1e-12 {
            normals.push(v.map(|c| c / nv));
        }
    }
    for k in 0..DIM {
        let mut v = unit(k);
        for u in normals.iter().chain(basis.iter()) {
            let d = crate::tensor::dot(&v, u);
            for j in 0..DIM {
                v[j] -= d * u[j];
            }
        }
        let nv = crate::tensor::norm(&v);
        if nv > 1e-6 {
            basis.push(v.map(|c| c / nv));
        }
        if basis.len() + normals.len() == DIM {
            break;
        }
    }
    basis
}
