//! Coefficient tensors for bilinear maps between coordinate spaces.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Vector;

/// A bilinear map `A x B -> C` stored densely as `f(a_i, b_j)` columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearMap {
    field: Field,
    left_dim: usize,
    right_dim: usize,
    out_dim: usize,
    data: Vec<Scalar>,
}

impl BilinearMap {
    pub fn zero(field: Field, left_dim: usize, right_dim: usize, out_dim: usize) -> BilinearMap {
        BilinearMap {
            field,
            left_dim,
            right_dim,
            out_dim,
            data: vec![field.zero(); left_dim * right_dim * out_dim],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.right_dim + j) * self.out_dim
    }

    /// Image of the basis pair `(a_i, b_j)`.
    pub fn get(&self, i: usize, j: usize) -> Vector {
        let o = self.offset(i, j);
        Vector::from_coords_unchecked(self.field, self.data[o..o + self.out_dim].to_vec())
    }

    pub fn coeff(&self, i: usize, j: usize) -> &[Scalar] {
        let o = self.offset(i, j);
        &self.data[o..o + self.out_dim]
    }

    pub fn set(&mut self, i: usize, j: usize, value: &Vector) -> Result<()> {
        if i >= self.left_dim || j >= self.right_dim {
            return Err(Error::DimensionMismatch(format!("index ({i}, {j}) out of range")));
        }
        if value.dim() != self.out_dim {
            return Err(Error::DimensionMismatch(format!("value of dim {} for codomain {}", value.dim(), self.out_dim)));
        }
        if value.field() != self.field {
            return Err(Error::FieldMismatch { left: self.field, right: value.field() });
        }
        let o = self.offset(i, j);
        self.data[o..o + self.out_dim].clone_from_slice(value.coords());
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn apply(&self, x: &Vector, y: &Vector) -> Vector {
        debug_assert_eq!(x.dim(), self.left_dim);
        debug_assert_eq!(y.dim(), self.right_dim);
        let mut out = Vector::zero(self.field, self.out_dim);
        for i in 0..self.left_dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.right_dim {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                let o = self.offset(i, j);
                for k in 0..self.out_dim {
                    let t = &self.data[o + k];
                    if !t.is_zero() {
                        out[k] += &(&c * t);
                    }
                }
            }
        }
        out
    }
}

/// A skew-symmetric bilinear map `A x A -> C`; only pairs `i < j` are stored.
#[derive(Clone, Debug)]
pub struct SkewMap {
    field: Field,
    dim: usize,
    out_dim: usize,
    upper: Vec<Scalar>,
    // Full antisymmetric table derived from `upper`, kept for fast evaluation.
    dense: Vec<Scalar>,
}

impl PartialEq for SkewMap {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim && self.out_dim == other.out_dim && self.upper == other.upper
    }
}

impl Eq for SkewMap {}

impl std::hash::Hash for SkewMap {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.dim.hash(state);
        self.out_dim.hash(state);
        self.upper.hash(state);
    }
}

pub(crate) fn pair_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < dim);
    i * dim - i * (i + 1) / 2 + (j - i - 1)
}

impl SkewMap {
    pub fn zero(field: Field, dim: usize, out_dim: usize) -> SkewMap {
        let pairs = dim * dim.saturating_sub(1) / 2;
        SkewMap {
            field,
            dim,
            out_dim,
            upper: vec![field.zero(); pairs * out_dim],
            dense: vec![field.zero(); dim * dim * out_dim],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Sets `f(a_i, a_j)` for `i < j`; the value at `(j, i)` follows by negation.
    pub fn set(&mut self, i: usize, j: usize, value: &Vector) -> Result<()> {
        if i >= j || j >= self.dim {
            return Err(Error::DimensionMismatch(format!("skew pair ({i}, {j}) must satisfy i < j < {}", self.dim)));
        }
        if value.dim() != self.out_dim {
            return Err(Error::DimensionMismatch(format!("value of dim {} for codomain {}", value.dim(), self.out_dim)));
        }
        if value.field() != self.field {
            return Err(Error::FieldMismatch { left: self.field, right: value.field() });
        }
        let o = pair_index(self.dim, i, j) * self.out_dim;
        self.upper[o..o + self.out_dim].clone_from_slice(value.coords());
        let n = self.out_dim;
        for k in 0..n {
            self.dense[(i * self.dim + j) * n + k] = value[k].clone();
            self.dense[(j * self.dim + i) * n + k] = -&value[k];
        }
        Ok(())
    }

    /// `f(a_i, a_j)` for any `i, j` (zero on the diagonal).
    pub fn get(&self, i: usize, j: usize) -> Vector {
        Vector::from_coords_unchecked(self.field, self.coeff(i, j).to_vec())
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> &[Scalar] {
        let o = (i * self.dim + j) * self.out_dim;
        &self.dense[o..o + self.out_dim]
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Scalar::is_zero)
    }

    pub fn apply(&self, x: &Vector, y: &Vector) -> Vector {
        debug_assert_eq!(x.dim(), self.dim);
        debug_assert_eq!(y.dim(), self.dim);
        let mut out = Vector::zero(self.field, self.out_dim);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let c = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
                if c.is_zero() {
                    continue;
                }
                let o = pair_index(self.dim, i, j) * self.out_dim;
                for k in 0..self.out_dim {
                    let t = &self.upper[o + k];
                    if !t.is_zero() {
                        out[k] += &(&c * t);
                    }
                }
            }
        }
        out
    }

    /// Stored pairs `(i, j, value)` with `i < j`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Vector)> + '_ {
        (0..self.dim).flat_map(move |i| (i + 1..self.dim).map(move |j| (i, j, self.get(i, j))))
    }
}
