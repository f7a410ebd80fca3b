//! Pointwise antisymmetric tensors on R^6.
//!
//! A component is addressed by a bitmask over the basis `(x1,x2,x3,y1,y2,y3)`; bit `i`
//! set means index `i` occurs. Since stored index tuples are strictly increasing,
//! a bitmask determines the tuple.

use serde::{Deserialize, Serialize};

pub const DIM: usize = 6;
const NMASK: usize = 1 << DIM;

pub type Point = [f64; DIM];

pub const COORD_NAMES: [&str; DIM] = ["x1", "x2", "x3", "y1", "y2", "y3"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variance {
    /// differential forms
    Covariant,
    /// multivector fields
    Contravariant,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointTensor {
    degree: u8,
    variance: Variance,
    comps: [f64; NMASK],
}

/// Sign of moving index `i` to the front of the sorted tuple `mask`.
fn front_sign(mask: usize, i: usize) -> f64 {
    if (mask & ((1 << i) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign of the shuffle that sorts the concatenation of two disjoint sorted tuples.
fn merge_sign(a: usize, b: usize) -> f64 {
    let mut inv = 0u32;
    for j in 0..DIM {
        if b & (1 << j) != 0 {
            inv += (a >> (j + 1)).count_ones();
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sorted index tuples of length `p` in lexicographic order.
pub fn lex_masks(p: usize) -> Vec<usize> {
    let mut out = Vec::new();
    fn rec(start: usize, left: usize, mask: usize, out: &mut Vec<usize>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for i in start..DIM {
            rec(i + 1, left - 1, mask | (1 << i), out);
        }
    }
    rec(0, p, 0, &mut out);
    out
}

pub fn mask_indices(mask: usize) -> Vec<usize> {
    (0..DIM).filter(|i| mask & (1 << i) != 0).collect()
}

pub fn mask_of(indices: &[usize]) -> (usize, f64) {
    let mut mask = 0usize;
    let mut sign = 1.0;
    for &i in indices {
        if mask & (1 << i) != 0 {
            return (0, 0.0);
        }
        sign *= merge_sign(mask, 1 << i);
        mask |= 1 << i;
    }
    (mask, sign)
}

impl PointTensor {
    pub fn zero(degree: usize, variance: Variance) -> Self {
        assert!(degree <= DIM);
        PointTensor { degree: degree as u8, variance, comps: [0.0; NMASK] }
    }

    pub fn scalar(v: f64, variance: Variance) -> Self {
        let mut t = Self::zero(0, variance);
        t.comps[0] = v;
        t
    }

    /// `dx_i` or `d/dx_i`.
    pub fn basis(i: usize, variance: Variance) -> Self {
        let mut t = Self::zero(1, variance);
        t.comps[1 << i] = 1.0;
        t
    }

    pub fn vector(v: &[f64; DIM], variance: Variance) -> Self {
        let mut t = Self::zero(1, variance);
        for i in 0..DIM {
            t.comps[1 << i] = v[i];
        }
        t
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn get(&self, mask: usize) -> f64 {
        self.comps[mask]
    }

    /// Component at an arbitrary index tuple, antisymmetrized.
    pub fn at(&self, indices: &[usize]) -> f64 {
        let (mask, sign) = mask_of(indices);
        if sign == 0.0 || indices.len() != self.degree() {
            0.0
        } else {
            sign * self.comps[mask]
        }
    }

    pub fn set(&mut self, mask: usize, v: f64) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree());
        self.comps[mask] = v;
    }

    /// Adds `v` to the component of an arbitrary (possibly unsorted) index tuple.
    pub fn add_at(&mut self, indices: &[usize], v: f64) {
        let (mask, sign) = mask_of(indices);
        if sign != 0.0 {
            self.comps[mask] += sign * v;
        }
    }

    pub fn as_vector(&self) -> [f64; DIM] {
        std::array::from_fn(|i| self.comps[1 << i])
    }

    pub fn scalar_value(&self) -> f64 {
        self.comps[0]
    }

    /// Components in lexicographic order of index tuples.
    pub fn components(&self) -> Vec<(Vec<usize>, f64)> {
        lex_masks(self.degree())
            .into_iter()
            .map(|m| (mask_indices(m), self.comps[m]))
            .collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut t = *self;
        t.comps.iter_mut().for_each(|v| *v *= c);
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_same(o);
        let mut t = *self;
        for (a, b) in t.comps.iter_mut().zip(o.comps.iter()) {
            *a += b;
        }
        t
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn axpy(&mut self, c: f64, o: &Self) {
        self.check_same(o);
        for (a, b) in self.comps.iter_mut().zip(o.comps.iter()) {
            *a += c * b;
        }
    }

    fn check_same(&self, o: &Self) {
        assert!(
            self.degree == o.degree && self.variance == o.variance,
            "tensor shape mismatch: ({}, {:?}) vs ({}, {:?})",
            self.degree,
            self.variance,
            o.degree,
            o.variance
        );
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Euclidean norm over stored components.
    pub fn norm(&self) -> f64 {
        self.comps.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn wedge(&self, o: &Self) -> Self {
        assert_eq!(self.variance, o.variance, "wedge of mixed variance");
        let deg = self.degree() + o.degree();
        let mut out = Self::zero(deg.min(DIM), self.variance);
        if deg > DIM {
            return out;
        }
        for a in lex_masks(self.degree()) {
            let va = self.comps[a];
            if va == 0.0 {
                continue;
            }
            for b in lex_masks(o.degree()) {
                if a & b != 0 {
                    continue;
                }
                let vb = o.comps[b];
                if vb != 0.0 {
                    out.comps[a | b] += merge_sign(a, b) * va * vb;
                }
            }
        }
        out
    }

    /// Contraction of a 1-tensor of the opposite variance into the first slot.
    pub fn interior(&self, v: &[f64; DIM]) -> Self {
        assert!(self.degree > 0, "interior product of a scalar");
        let mut out = Self::zero(self.degree() - 1, self.variance);
        for m in lex_masks(self.degree()) {
            let c = self.comps[m];
            if c == 0.0 {
                continue;
            }
            for i in 0..DIM {
                if m & (1 << i) != 0 && v[i] != 0.0 {
                    out.comps[m & !(1 << i)] += front_sign(m, i) * v[i] * c;
                }
            }
        }
        out
    }

    /// Evaluation on `p` vectors (or covectors): `T(v_1, ..., v_p)`.
    pub fn eval(&self, vs: &[[f64; DIM]]) -> f64 {
        assert_eq!(vs.len(), self.degree(), "wrong number of arguments");
        let mut t = *self;
        for v in vs {
            t = t.interior(v);
        }
        t.scalar_value()
    }

    /// Full pairing of a p-form with a p-vector.
    pub fn pair(&self, o: &Self) -> f64 {
        assert_ne!(self.variance, o.variance, "pairing needs opposite variances");
        assert_eq!(self.degree, o.degree);
        self.comps.iter().zip(o.comps.iter()).map(|(a, b)| a * b).sum()
    }

    /// Applies the linear map `m` (as `m[i][j]`, column j is the image of `e_j`) to every
    /// slot of a multivector: `sum_I T^I (m e_{i1}) ^ ... ^ (m e_{ip})`.
    pub fn push_linear(&self, m: &[[f64; DIM]; DIM]) -> Self {
        assert_eq!(self.variance, Variance::Contravariant);
        let cols: Vec<PointTensor> = (0..DIM)
            .map(|j| {
                let c: [f64; DIM] = std::array::from_fn(|i| m[i][j]);
                PointTensor::vector(&c, Variance::Contravariant)
            })
            .collect();
        self.transform_slots(&cols)
    }

    /// Pulls a form back along a linear map `m`: `(m^* a)(v_1..v_p) = a(m v_1, ..., m v_p)`.
    pub fn pull_linear(&self, m: &[[f64; DIM]; DIM]) -> Self {
        assert_eq!(self.variance, Variance::Covariant);
        // rows of m are the pullbacks of dx_i
        let rows: Vec<PointTensor> = (0..DIM)
            .map(|i| PointTensor::vector(&m[i], Variance::Covariant))
            .collect();
        self.transform_slots(&rows)
    }

    fn transform_slots(&self, images: &[PointTensor]) -> Self {
        let mut out = Self::zero(self.degree(), self.variance);
        for mask in lex_masks(self.degree()) {
            let c = self.comps[mask];
            if c == 0.0 {
                continue;
            }
            let mut acc = PointTensor::scalar(1.0, self.variance);
            for i in mask_indices(mask) {
                acc = acc.wedge(&images[i]);
            }
            out.axpy(c, &acc);
        }
        out
    }

    /// Antisymmetric matrix of a degree-two tensor.
    pub fn to_matrix(&self) -> [[f64; DIM]; DIM] {
        assert_eq!(self.degree, 2);
        let mut m = [[0.0; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                m[i][j] = self.at(&[i, j]);
            }
        }
        m
    }

    pub fn from_matrix(m: &[[f64; DIM]; DIM], variance: Variance) -> Self {
        let mut t = Self::zero(2, variance);
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                t.comps[(1 << i) | (1 << j)] = 0.5 * (m[i][j] - m[j][i]);
            }
        }
        t
    }

    /// Left derivative with respect to the odd generator `i` (removes `i`, sign from
    /// moving it to the front).
    pub fn odd_derivative(&self, i: usize) -> Self {
        let mut e = [0.0; DIM];
        e[i] = 1.0;
        self.interior(&e)
    }
}

/// The Schouten bracket from point values and first partials of two multivector fields:
/// `[P, Q] = sum_i P d/dxi_i ^ d_i Q - (-1)^{(p-1)(q-1)} Q d/dxi_i ^ d_i P` with right
/// odd derivatives, so that `[X, Q] = L_X Q` for a vector field `X`.
pub fn schouten_from_jets(
    p: &PointTensor,
    dp: &[PointTensor; DIM],
    q: &PointTensor,
    dq: &[PointTensor; DIM],
) -> PointTensor {
    let (pd, qd) = (p.degree(), q.degree());
    let deg = (pd + qd).saturating_sub(1);
    let mut out = PointTensor::zero(deg.min(DIM), Variance::Contravariant);
    if pd + qd == 0 || deg > DIM {
        return out;
    }
    let sign = if ((pd as i64 - 1) * (qd as i64 - 1)).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    // right derivative = (-1)^{deg-1} left derivative
    let rp = if pd % 2 == 1 { 1.0 } else { -1.0 };
    let rq = if qd % 2 == 1 { 1.0 } else { -1.0 };
    for i in 0..DIM {
        if pd > 0 {
            out.axpy(rp, &p.odd_derivative(i).wedge(&dq[i]));
        }
        if qd > 0 {
            out.axpy(-sign * rq, &q.odd_derivative(i).wedge(&dp[i]));
        }
    }
    out
}

pub fn dot(a: &[f64; DIM], b: &[f64; DIM]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64; DIM]) -> f64 {
    dot(a, a).sqrt()
}

pub fn mat_mul(a: &[[f64; DIM]; DIM], b: &[[f64; DIM]; DIM]) -> [[f64; DIM]; DIM] {
    let mut m = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            m[i][j] = (0..DIM).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

pub fn mat_inverse(a: &[[f64; DIM]; DIM]) -> Option<[[f64; DIM]; DIM]> {
    let m = nalgebra::SMatrix::<f64, DIM, DIM>::from_fn(|i, j| a[i][j]);
    let inv = m.try_inverse()?;
    Some(std::array::from_fn(|i| std::array::from_fn(|j| inv[(i, j)])))
}
