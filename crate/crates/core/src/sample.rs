//! Seeded random instances for property tests and the acceptance suite.
//!
//! Over `GF(p)` coefficients are uniform residues; over the rationals they are
//! small integers in `[-2, 2]`. The `sparse_*` variants set each coefficient to
//! zero with probability one half first, which makes structured instances
//! (valid modules, Malcev brackets) far more frequent.

use rand::Rng;

use crate::algebra::MalcevAlgebra;
use crate::bilinear::{BilinearMap, SkewMap};
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Vector};
use crate::unified::{default_v_names, ExtendingDatum};

pub fn scalar<R: Rng + ?Sized>(rng: &mut R, f: Field) -> Scalar {
    match f {
        Field::Prime(p) => f.from_i64(rng.gen_range(0..p as i64)),
        Field::Rational => f.from_i64(rng.gen_range(-2..=2)),
    }
}

pub fn nonzero_scalar<R: Rng + ?Sized>(rng: &mut R, f: Field) -> Scalar {
    loop {
        let s = scalar(rng, f);
        if !s.is_zero() {
            return s;
        }
    }
}

fn maybe<R: Rng + ?Sized>(rng: &mut R, f: Field, sparse: bool) -> Scalar {
    if sparse && rng.gen_bool(0.5) {
        f.zero()
    } else {
        scalar(rng, f)
    }
}

fn coords<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize, sparse: bool) -> Vector {
    Vector::from_coords_unchecked(f, (0..n).map(|_| maybe(rng, f, sparse)).collect())
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize) -> Vector {
    coords(rng, f, n, false)
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, f: Field, rows: usize, cols: usize) -> Matrix {
    let cols: Vec<Vector> = (0..cols).map(|_| vector(rng, f, rows)).collect();
    Matrix::from_columns(f, rows, &cols)
}

pub fn invertible_matrix<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize) -> Matrix {
    loop {
        let m = matrix(rng, f, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

fn bilinear_with<R: Rng + ?Sized>(rng: &mut R, f: Field, l: usize, r: usize, o: usize, sparse: bool) -> BilinearMap {
    let mut b = BilinearMap::zero(f, l, r, o);
    for i in 0..l {
        for j in 0..r {
            b.set(i, j, &coords(rng, f, o, sparse)).expect("shape");
        }
    }
    b
}

fn skew_with<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize, o: usize, sparse: bool) -> SkewMap {
    let mut s = SkewMap::zero(f, n, o);
    for i in 0..n {
        for j in i + 1..n {
            s.set(i, j, &coords(rng, f, o, sparse)).expect("shape");
        }
    }
    s
}

pub fn bilinear<R: Rng + ?Sized>(rng: &mut R, f: Field, l: usize, r: usize, o: usize) -> BilinearMap {
    bilinear_with(rng, f, l, r, o, false)
}

pub fn sparse_bilinear<R: Rng + ?Sized>(rng: &mut R, f: Field, l: usize, r: usize, o: usize) -> BilinearMap {
    bilinear_with(rng, f, l, r, o, true)
}

pub fn skew<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize, o: usize) -> SkewMap {
    skew_with(rng, f, n, o, false)
}

pub fn sparse_skew<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize, o: usize) -> SkewMap {
    skew_with(rng, f, n, o, true)
}

/// Uniformly random anticommutative algebra.
pub fn algebra<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize) -> MalcevAlgebra {
    MalcevAlgebra::from_table(crate::algebra::default_names("e", n), skew(rng, f, n, n)).expect("shape")
}

pub fn sparse_algebra<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize) -> MalcevAlgebra {
    MalcevAlgebra::from_table(crate::algebra::default_names("e", n), sparse_skew(rng, f, n, n)).expect("shape")
}

/// Random Malcev algebra by rejection from sparse anticommutative ones.
pub fn malcev_algebra<R: Rng + ?Sized>(rng: &mut R, f: Field, n: usize) -> MalcevAlgebra {
    loop {
        let a = sparse_algebra(rng, f, n);
        if a.is_malcev() {
            return a;
        }
    }
}

/// Random extending datum of `m` through a `k`-dimensional space.
pub fn datum<R: Rng + ?Sized>(rng: &mut R, m: &MalcevAlgebra, k: usize) -> ExtendingDatum {
    let (f, n) = (m.field(), m.dim());
    ExtendingDatum {
        m: m.clone(),
        v_names: default_v_names(k),
        tl: bilinear(rng, f, n, k, n),
        tr: bilinear(rng, f, n, k, k),
        omega: skew(rng, f, k, n),
        bv: skew(rng, f, k, k),
    }
}

pub fn sparse_datum<R: Rng + ?Sized>(rng: &mut R, m: &MalcevAlgebra, k: usize) -> ExtendingDatum {
    let (f, n) = (m.field(), m.dim());
    ExtendingDatum {
        m: m.clone(),
        v_names: default_v_names(k),
        tl: sparse_bilinear(rng, f, n, k, n),
        tr: sparse_bilinear(rng, f, n, k, k),
        omega: sparse_skew(rng, f, k, n),
        bv: sparse_skew(rng, f, k, k),
    }
}
