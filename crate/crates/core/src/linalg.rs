//! Dense exact vectors and matrices, and linear-system solving.
//!
//! Elimination over `GF(p)` is plain Gauss-Jordan. Over the rationals the
//! forward pass is fraction-free (Bareiss) on an integer copy of the system,
//! followed by exact back-substitution. Pivots are always the first nonzero
//! entry in column order, so kernel bases are reproducible.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Vector {
    field: Field,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn zero(field: Field, dim: usize) -> Vector {
        Vector {
            field,
            coords: vec![field.zero(); dim],
        }
    }

    pub fn unit(field: Field, dim: usize, i: usize) -> Vector {
        let mut v = Vector::zero(field, dim);
        v.coords[i] = field.one();
        v
    }

    /// Builds a vector, checking that every coordinate lives in `field`.
    pub fn new(field: Field, coords: Vec<Scalar>) -> Result<Vector> {
        if let Some(bad) = coords.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch { left: field, right: bad.field() });
        }
        Ok(Vector { field, coords })
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Vector {
        Vector {
            field,
            coords: coords.iter().map(|&c| field.from_i64(c)).collect(),
        }
    }

    pub(crate) fn from_coords_unchecked(field: Field, coords: Vec<Scalar>) -> Vector {
        Vector { field, coords }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector {
            field: self.field,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: &Scalar, other: &Vector) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if !b.is_zero() {
                *a += &(c * b);
            }
        }
    }

    pub fn dot(&self, other: &Vector) -> Scalar {
        let mut acc = self.field.zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc += &(a * b);
        }
        acc
    }

    /// Concatenation, used for elements of direct sums.
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Vector { field: self.field, coords }
    }

    pub fn slice(&self, start: usize, end: usize) -> Vector {
        Vector {
            field: self.field,
            coords: self.coords[start..end].to_vec(),
        }
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.coords[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector {
            field: self.field,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector {
            field: self.field,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector {
            field: self.field,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Row-major dense matrix. Linear maps act on column vectors: `y = A x`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        if let Some(bad) = entries.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch { left: field, right: bad.field() });
        }
        Ok(Matrix { field, rows: r, cols: c, entries })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows.iter().flat_map(|row| row.iter().map(|&x| field.from_i64(x))).collect();
        Matrix { field, rows: r, cols: c, entries }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zero(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::from_coords_unchecked(self.field, self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_coords_unchecked(self.field, (0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        assert_eq!(x.dim(), self.cols, "matrix-vector dimension mismatch");
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = self.field.zero();
            for j in 0..self.cols {
                let a = &self.entries[i * self.cols + j];
                if !a.is_zero() && !x[j].is_zero() {
                    acc += &(a * &x[j]);
                }
            }
            out.push(acc);
        }
        Vector::from_coords_unchecked(self.field, out)
    }

    pub fn try_apply(&self, x: &Vector) -> Result<Vector> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch { left: self.field, right: x.field() });
        }
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix on dim {}", self.rows, self.cols, x.dim())));
        }
        Ok(self.apply(x))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        reduced_row_echelon(self).1.len()
    }

    /// Exact inverse, or `Singular`.
    pub fn invert(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!("invert of {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.field.one();
        }
        let (r, pivots) = reduced_row_echelon(&aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        Matrix::mul(self, rhs)
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form and pivot columns.
pub fn reduced_row_echelon(m: &Matrix) -> (Matrix, Vec<usize>) {
    match m.field {
        Field::Prime(_) => gauss_jordan(m.clone()),
        Field::Rational => bareiss_then_reduce(m),
    }
}

fn gauss_jordan(mut m: Matrix) -> (Matrix, Vec<usize>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        swap_rows(&mut m, r, pr);
        let inv = m[(r, c)].inv().expect("pivot is nonzero");
        for j in c..cols {
            m[(r, j)] = &m[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let factor = m[(i, c)].clone();
            for j in c..cols {
                if !m[(r, j)].is_zero() {
                    let t = &factor * &m[(r, j)];
                    m[(i, j)] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        m.entries.swap(a * m.cols + j, b * m.cols + j);
    }
}

/// Fraction-free forward elimination on integer rows, then exact normalisation.
fn bareiss_then_reduce(m: &Matrix) -> (Matrix, Vec<usize>) {
    let (rows, cols) = (m.rows, m.cols);
    // Clear denominators row by row; this does not change the row space.
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row: Vec<&BigRational> = (0..cols).map(|j| m[(i, j)].as_rational().expect("rational entry")).collect();
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }

    // Back-substitution in exact rationals.
    let mut out = Matrix::zero(Field::Rational, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = Scalar::Rational(Box::new(BigRational::from_integer(a[i][j].clone())));
        }
    }
    for (k, &c) in pivots.iter().enumerate().rev() {
        let inv = out[(k, c)].inv().expect("pivot is nonzero");
        for j in c..cols {
            out[(k, j)] = &out[(k, j)] * &inv;
        }
        for i in 0..k {
            if out[(i, c)].is_zero() {
                continue;
            }
            let factor = out[(i, c)].clone();
            for j in c..cols {
                if !out[(k, j)].is_zero() {
                    let t = &factor * &out[(k, j)];
                    out[(i, j)] -= &t;
                }
            }
        }
    }
    (out, pivots)
}

/// Solution set of `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Present exactly when the system is consistent; free variables set to zero.
    pub particular: Option<Vector>,
    pub kernel_basis: Vec<Vector>,
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }
}

pub fn solve_linear(a: &Matrix, b: &Vector) -> Result<Solution> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch { left: a.field(), right: b.field() });
    }
    if a.rows() != b.dim() {
        return Err(Error::DimensionMismatch(format!("{} rows vs rhs of dim {}", a.rows(), b.dim())));
    }
    let (rows, cols) = (a.rows(), a.cols());
    let field = a.field();
    let mut aug = Matrix::zero(field, rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, cols)] = b[i].clone();
    }
    let (r, pivots) = reduced_row_echelon(&aug);
    let consistent = pivots.last() != Some(&cols);
    let coeff_pivots: Vec<usize> = pivots.iter().copied().filter(|&c| c < cols).collect();

    let particular = consistent.then(|| {
        let mut x = Vector::zero(field, cols);
        for (k, &c) in coeff_pivots.iter().enumerate() {
            x[c] = r[(k, cols)].clone();
        }
        x
    });

    let mut kernel_basis = Vec::new();
    for free in (0..cols).filter(|c| !coeff_pivots.contains(c)) {
        let mut v = Vector::zero(field, cols);
        v[free] = field.one();
        for (k, &c) in coeff_pivots.iter().enumerate() {
            v[c] = -&r[(k, free)];
        }
        kernel_basis.push(v);
    }
    Ok(Solution { particular, kernel_basis })
}

/// Exact inverse of a square matrix.
pub fn invert(s: &Matrix) -> Result<Matrix> {
    s.invert()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn identity_system() {
        let f = Field::Rational;
        let sol = solve_linear(&Matrix::identity(f, 2), &Vector::from_i64(f, &[1, 2])).unwrap();
        assert_eq!(sol.particular, Some(Vector::from_i64(f, &[1, 2])));
        assert!(sol.kernel_basis.is_empty());
    }

    #[test]
    fn zero_system_has_full_kernel() {
        let f = Field::Rational;
        let sol = solve_linear(&Matrix::zero(f, 2, 2), &Vector::zero(f, 2)).unwrap();
        assert_eq!(sol.particular, Some(Vector::zero(f, 2)));
        assert_eq!(sol.kernel_basis.len(), 2);
    }

    #[test]
    fn inconsistent_system() {
        let f = gf(5);
        let a = Matrix::from_i64(f, &[&[1, 1], &[2, 2]]);
        let sol = solve_linear(&a, &Vector::from_i64(f, &[1, 0])).unwrap();
        assert!(!sol.is_consistent());
        assert_eq!(sol.kernel_basis.len(), 1);
    }

    #[test]
    fn random_systems_over_gf5_resubstitute() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rows: Vec<Vec<i64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(0..5)).collect()).collect();
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            let a = Matrix::from_i64(f, &refs);
            let x0 = Vector::from_i64(f, &(0..4).map(|_| rng.gen_range(0..5)).collect::<Vec<_>>());
            let b = a.apply(&x0);
            let sol = solve_linear(&a, &b).unwrap();
            let x = sol.particular.expect("consistent by construction");
            assert_eq!(a.apply(&x), b);
            for k in &sol.kernel_basis {
                assert!(a.apply(k).is_zero());
            }
            assert_eq!(sol.kernel_basis.len() + a.rank(), 4);
        }
    }

    #[test]
    fn rational_bareiss_matches_resubstitution() {
        let f = Field::Rational;
        let a = Matrix::from_i64(f, &[&[2, 4, -2, 1], &[1, 2, 1, 0], &[3, 6, -1, 1]]);
        let b = Vector::from_i64(f, &[3, 1, 4]);
        let sol = solve_linear(&a, &b).unwrap();
        let x = sol.particular.unwrap();
        assert_eq!(a.apply(&x), b);
        assert_eq!(sol.kernel_basis.len(), 2);
        for k in &sol.kernel_basis {
            assert!(a.apply(k).is_zero());
        }
    }

    #[test]
    fn involution_inverse() {
        let f = Field::Rational;
        let s = Matrix::from_i64(f, &[&[0, 1], &[1, 0]]);
        assert_eq!(s.invert().unwrap(), s);
        assert_eq!(Matrix::identity(f, 3).invert().unwrap(), Matrix::identity(f, 3));
    }

    #[test]
    fn singular_matrix() {
        let f = Field::Rational;
        let s = Matrix::from_i64(f, &[&[1, 2], &[2, 4]]);
        assert_eq!(s.invert(), Err(Error::Singular));
    }

    #[test]
    fn random_invertible_over_gf7() {
        let f = gf(7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = 0;
        while seen < 50 {
            let rows: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(0..7)).collect()).collect();
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            let s = Matrix::from_i64(f, &refs);
            if let Ok(inv) = s.invert() {
                assert_eq!(&s * &inv, Matrix::identity(f, 3));
                assert_eq!(&inv * &s, Matrix::identity(f, 3));
                seen += 1;
            } else {
                assert!(s.rank() < 3);
            }
        }
    }

    #[test]
    fn rational_inverse() {
        let f = Field::Rational;
        let s = Matrix::from_i64(f, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = s.invert().unwrap();
        assert_eq!(&s * &inv, Matrix::identity(f, 3));
    }
}
