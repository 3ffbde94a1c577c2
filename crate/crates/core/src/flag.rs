//! Flag extensions: twisted derivations `(λ, D)` and the extending data they define.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::MalcevAlgebra;
use crate::bilinear::BilinearMap;
use crate::cond::{check_all, Condition, Env};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{solve_linear, Matrix, Solution, Vector};
use crate::report::DualReport;
use crate::sample;
use crate::unified::{build_unified, default_v_names, verify_unified_direct, ExtendingDatum};

/// `λ : M -> k` as a coordinate vector and `D : M -> M` with `D(e_j)` in column `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedDerivation {
    pub lam: Vector,
    pub d: Matrix,
}

impl TwistedDerivation {
    pub fn new(lam: Vector, d: Matrix) -> Result<TwistedDerivation> {
        let n = lam.dim();
        if d.rows() != n || d.cols() != n {
            return Err(Error::DimensionMismatch(format!("D is {}x{}, λ has dimension {n}", d.rows(), d.cols())));
        }
        if d.field() != lam.field() {
            return Err(Error::FieldMismatch { left: lam.field(), right: d.field() });
        }
        Ok(TwistedDerivation { lam, d })
    }

    pub fn zero(field: Field, n: usize) -> TwistedDerivation {
        TwistedDerivation { lam: Vector::zero(field, n), d: Matrix::zero(field, n, n) }
    }

    /// Row `i` of `rows` holds the coordinates of `D(e_i)`.
    pub fn from_rows(lam: Vector, rows: Matrix) -> Result<TwistedDerivation> {
        TwistedDerivation::new(lam, rows.transpose())
    }

    pub fn field(&self) -> Field {
        self.lam.field()
    }

    pub fn dim(&self) -> usize {
        self.lam.dim()
    }

    fn compatible(&self, m: &MalcevAlgebra) -> Result<()> {
        if self.field() != m.field() {
            return Err(Error::FieldMismatch { left: m.field(), right: self.field() });
        }
        if self.dim() != m.dim() {
            return Err(Error::DimensionMismatch(format!(
                "twisted derivation on a {}-dim space, algebra has dimension {}",
                self.dim(),
                m.dim()
            )));
        }
        Ok(())
    }
}

const FIX_T1: &str = "'D([[y,z],x])' read as [D([y,z]),x] (U1 with ⊲ = D, ⊳ = λ)";

pub const T_CONDITIONS: [Condition; 6] = [
    Condition::repaired(
        "T1",
        "x y z",
        "[[x,z],D(y)] + lam(y)*D([x,z]) + lam([y,z])*D(x) - [D([y,z]),x] + [lam(z)*D(x),y] - [[D(z),x],y] \
         - lam(x)*lam(z)*D(y) + [[D(x),y],z] - [lam(x)*D(y),z] - D([[x,y],z]) + lam(x)*lam(y)*D(z) = 0",
        FIX_T1,
    ),
    Condition::new(
        "T2",
        "x y",
        "lam(D(y))*D(x) - lam(x)*D(D(y)) + D([D(x),y]) - [D(D(y)),x] + lam(y)*D(D(x)) - D(D([x,y])) \
         + [D(x),D(y)] - D(lam(x)*D(y)) = 0",
    ),
    Condition::new("T3", "x y", "lam(D([x,y])) - lam(D(x))*lam(y) - lam([D(x),y]) + lam(x)*lam(D(y)) = 0"),
    Condition::new(
        "T4",
        "x y",
        "D([D(x),y]) - D(lam(x)*D(y)) - [D(D(y)),x] + lam(D(y))*D(x) + D([D(y),x]) - D(lam(y)*D(x)) \
         - [D(D(x)),y] + lam(D(x))*D(y) = 0",
    ),
    Condition::new("T5", "x y", "lam([D(x),y]) + lam([D(y),x]) = 0"),
    Condition::new("T6", "x y z", "lam([x,z])*lam(y) = lam([[x,y],z]) - lam(x)*lam([y,z])"),
];

/// `x ⊲ u = D(x)`, `x ⊳ u = λ(x)u`, `ω = 0`, `[u,u] = 0`.
pub fn flag_datum(m: &MalcevAlgebra, td: &TwistedDerivation) -> Result<ExtendingDatum> {
    td.compatible(m)?;
    let (f, n) = (m.field(), m.dim());
    let mut d = ExtendingDatum::zero(m.clone(), default_v_names(1));
    let mut tr = BilinearMap::zero(f, n, 1, 1);
    for i in 0..n {
        d.tl.set(i, 0, &td.d.column(i))?;
        tr.set(i, 0, &Vector::new(f, vec![td.lam[i].clone()])?)?;
    }
    d.tr = tr;
    Ok(d)
}

/// `[(x, au), (y, bu)] = ([x,y] + bD(x) - aD(y), (bλ(x) - aλ(y))u)`.
pub fn flag_product(m: &MalcevAlgebra, td: &TwistedDerivation) -> Result<MalcevAlgebra> {
    build_unified(&flag_datum(m, td)?)
}

fn t_env<'a>(m: &'a MalcevAlgebra, td: &'a TwistedDerivation) -> Env<'a> {
    Env::new(m, default_v_names(1)).derivation(&td.lam, &td.d)
}

/// `T1`-`T6` next to the Malcev check of the flag product.
pub fn check_twisted_derivation(m: &MalcevAlgebra, td: &TwistedDerivation) -> Result<DualReport> {
    td.compatible(m)?;
    let printed = check_all(&T_CONDITIONS, &t_env(m, td));
    Ok(DualReport { printed, direct: verify_unified_direct(&flag_datum(m, td)?)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagEquivalence {
    pub equivalent: bool,
    pub r: Option<Vector>,
}

/// Equivalent iff `λ1 = λ2` and `D2(x) - D1(x) = [r, x] + λ1(x) r` has a solution `r`.
pub fn flag_equiv(m: &MalcevAlgebra, td1: &TwistedDerivation, td2: &TwistedDerivation) -> Result<FlagEquivalence> {
    td1.compatible(m)?;
    td2.compatible(m)?;
    let none = FlagEquivalence { equivalent: false, r: None };
    if td1.lam != td2.lam {
        return Ok(none);
    }
    let (f, n) = (m.field(), m.dim());
    let mut a = Matrix::zero(f, n * n, n);
    let mut b = Vector::zero(f, n * n);
    for i in 0..n {
        let rhs = &td2.d.column(i) - &td1.d.column(i);
        for c in 0..n {
            // column c: [e_c, e_i] + λ(e_i) e_c
            let mut col = m.basis_bracket(c, i);
            col[c] += &td1.lam[i];
            for k in 0..n {
                a[(i * n + k, c)] = col[k].clone();
            }
        }
        for k in 0..n {
            b[i * n + k] = rhs[k].clone();
        }
    }
    Ok(match solve_linear(&a, &b)?.particular {
        Some(r) => FlagEquivalence { equivalent: true, r: Some(r) },
        None => none,
    })
}

/// `D'(x) = [r, x] + D(x) + λ(x) r`.
pub fn transform(m: &MalcevAlgebra, td: &TwistedDerivation, r: &Vector) -> Result<TwistedDerivation> {
    td.compatible(m)?;
    m.check_vector(r)?;
    let n = m.dim();
    let cols: Vec<Vector> = (0..n)
        .map(|i| &(&m.br_unit(r, i) + &td.d.column(i)) + &r.scale(&td.lam[i]))
        .collect();
    Ok(TwistedDerivation { lam: td.lam.clone(), d: Matrix::from_columns(m.field(), n, &cols) })
}

/// Tuning for [`solve_twisted_with`].
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Samples per closed-form family.
    pub samples: usize,
    pub seed: u64,
    /// Largest affine space enumerated in stage 2.
    pub limit: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { samples: 20, seed: 0, limit: 100_000_000 }
    }
}

/// One closed-form family evaluated at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCheck {
    pub family: String,
    pub params: Vec<(String, Scalar)>,
    pub td: TwistedDerivation,
    pub printed: bool,
    pub direct: bool,
    pub failing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagSolveResult {
    /// Solutions of the conditions linear in `D`, with `D` flattened column by column.
    pub linear_space: Solution,
    pub solutions: Vec<TwistedDerivation>,
    pub family_checks: Vec<FamilyCheck>,
}

pub fn solve_twisted(m: &MalcevAlgebra, lam: &Vector) -> Result<FlagSolveResult> {
    solve_twisted_with(m, lam, &SolveOptions::default())
}

fn t6_gate(m: &MalcevAlgebra, lam: &Vector) -> Result<()> {
    let zero = Matrix::zero(m.field(), m.dim(), m.dim());
    let env = Env::new(m, default_v_names(1)).derivation(lam, &zero);
    let check = T_CONDITIONS[5].check(&env);
    match check.witnesses.first() {
        None => Ok(()),
        Some(w) => Err(Error::LambdaInvalid(format!(
            "{} failing triples, first (x,y,z) = ({}): {} vs {}",
            check.failures,
            w.args.join(","),
            w.lhs,
            w.rhs
        ))),
    }
}

fn unit_matrix(f: Field, n: usize, k: usize) -> Matrix {
    let mut e = Matrix::zero(f, n, n);
    e[(k % n, k / n)] = f.one();
    e
}

/// The affine part of the Malcev residual of the flag product: the `M`-component
/// on tuples with one `u`, and the `u`-component on tuples with two.
fn linear_residual(e: &MalcevAlgebra, n: usize) -> Vec<Scalar> {
    let u = n;
    let mut out = Vec::new();
    for slot in 0..4 {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut t = [a, b, c];
                    let mut tuple = Vec::with_capacity(4);
                    let mut it = t.iter_mut();
                    for s in 0..4 {
                        tuple.push(if s == slot { u } else { *it.next().unwrap() });
                    }
                    let r = e.eq3_residual(tuple[0], tuple[1], tuple[2], tuple[3]);
                    out.extend(r.coords()[..n].iter().cloned());
                }
            }
        }
    }
    for (s1, s2) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
        for a in 0..n {
            for b in 0..n {
                let mut rest = [a, b].into_iter();
                let tuple: Vec<usize> = (0..4).map(|s| if s == s1 || s == s2 { u } else { rest.next().unwrap() }).collect();
                out.push(e.eq3_residual(tuple[0], tuple[1], tuple[2], tuple[3])[n].clone());
            }
        }
    }
    out
}

pub fn solve_twisted_with(m: &MalcevAlgebra, lam: &Vector, opts: &SolveOptions) -> Result<FlagSolveResult> {
    let f = m.field();
    let Some(p) = f.order() else {
        return Err(Error::FieldNotAllowed(f, "the flag solver enumerates over GF(p)".into()));
    };
    let n = m.dim();
    if n > 4 {
        return Err(Error::ResourceLimit(format!("flag solver supports dim M <= 4, got {n}")));
    }
    m.check_vector(lam)?;
    t6_gate(m, lam)?;

    let product = |d: Matrix| flag_product(m, &TwistedDerivation { lam: lam.clone(), d });
    let base = linear_residual(&product(Matrix::zero(f, n, n))?, n);
    let mut a = Matrix::zero(f, base.len(), n * n);
    for k in 0..n * n {
        let rk = linear_residual(&product(unit_matrix(f, n, k))?, n);
        for (row, (x, y)) in rk.iter().zip(&base).enumerate() {
            a[(row, k)] = x - y;
        }
    }
    let b = Vector::new(f, base.iter().map(|x| -x).collect())?;
    let linear_space = solve_linear(&a, &b)?;

    let mut solutions = Vec::new();
    if let Some(part) = &linear_space.particular {
        let kdim = linear_space.kernel_basis.len() as u32;
        let count = p.checked_pow(kdim).filter(|&c| c <= opts.limit).ok_or_else(|| {
            Error::ResourceLimit(format!("stage 2 would enumerate {p}^{kdim} matrices (limit {})", opts.limit))
        })?;
        let elems = f.elements();
        let candidate = |mut idx: u64| {
            let mut v = part.clone();
            for kb in &linear_space.kernel_basis {
                let c = &elems[(idx % p) as usize];
                idx /= p;
                if !c.is_zero() {
                    v = &v + &kb.scale(c);
                }
            }
            Matrix::from_columns(f, n, &(0..n).map(|j| v.slice(j * n, (j + 1) * n)).collect::<Vec<_>>())
        };
        let found: Vec<Matrix> = (0..count)
            .into_par_iter()
            .filter_map(|idx| {
                let d = candidate(idx);
                product(d.clone()).ok().filter(MalcevAlgebra::is_malcev).map(|_| d)
            })
            .collect();
        solutions = found.into_iter().map(|d| TwistedDerivation { lam: lam.clone(), d }).collect();
    }
    let family_checks = evaluate_families(m, lam, opts.samples, opts.seed)?;
    Ok(FlagSolveResult { linear_space, solutions, family_checks })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Param {
    Free,
    Nonzero,
}

struct Family {
    name: &'static str,
    /// Index of the basis vector on which `λ` is supported.
    lam_index: usize,
    params: &'static [(&'static str, Param)],
    /// Row matrix of D from `λ_k` and the parameters in `params` order.
    rows: fn(&Scalar, &[Scalar]) -> [[Scalar; 4]; 4],
}

use Param::{Free, Nonzero};

const FAMILIES: [Family; 7] = [
    Family {
        name: "D1",
        lam_index: 1,
        params: &[("a12", Nonzero), ("a31", Nonzero), ("a32", Nonzero), ("a33", Nonzero), ("a34", Nonzero)],
        rows: |l, a| {
            let z = l.field().zero();
            [
                [z.clone(), a[0].clone(), z.clone(), z.clone()],
                [&(l * l) * &a[0], l * &a[0], z.clone(), z],
                [a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone()],
                [l * &a[1], l * &a[2], l * &a[3], l * &a[4]],
            ]
        },
    },
    Family {
        name: "D21",
        lam_index: 2,
        params: &[
            ("a11", Nonzero),
            ("a12", Free),
            ("a14", Free),
            ("a31", Free),
            ("a32", Free),
            ("a33", Free),
            ("a34", Free),
        ],
        rows: |l, a| {
            let z = l.field().zero();
            let two = l.field().from_i64(2);
            [
                [a[0].clone(), a[1].clone(), -&div(&a[0], l), a[2].clone()],
                [z.clone(), &two * &a[0], z.clone(), z.clone()],
                [a[3].clone(), a[4].clone(), a[5].clone(), a[6].clone()],
                [z.clone(), l * &a[0], z, a[0].clone()],
            ]
        },
    },
    Family {
        name: "D22",
        lam_index: 2,
        params: &[
            ("a11", Nonzero),
            ("a12", Free),
            ("a14", Free),
            ("a24", Free),
            ("a32", Free),
            ("a33", Free),
            ("a34", Free),
        ],
        rows: |l, a| {
            let z = l.field().zero();
            let three = l.field().from_i64(3);
            [
                [a[0].clone(), a[1].clone(), -&div(&a[0], l), a[2].clone()],
                [z.clone(), -&a[0], z.clone(), a[3].clone()],
                [-&div(&(&three * &a[0]), l), a[4].clone(), a[5].clone(), a[6].clone()],
                [z.clone(), l * &a[0], z, a[0].clone()],
            ]
        },
    },
    Family {
        name: "D23",
        lam_index: 2,
        params: &[
            ("a11", Nonzero),
            ("a12", Free),
            ("a13", Nonzero),
            ("a14", Free),
            ("a32", Free),
            ("a33", Free),
            ("a34", Free),
        ],
        rows: |l, a| {
            let z = l.field().zero();
            [
                [a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone()],
                [z.clone(), z.clone(), z.clone(), z.clone()],
                [-&div(&(&a[0] * &a[0]), &a[2]), a[4].clone(), a[5].clone(), a[6].clone()],
                [z.clone(), l * &a[0], z, a[0].clone()],
            ]
        },
    },
    Family {
        name: "D24",
        lam_index: 2,
        params: &[
            ("a11", Nonzero),
            ("a12", Free),
            ("a13", Nonzero),
            ("a14", Free),
            ("a32", Free),
            ("a33", Free),
            ("a34", Free),
        ],
        rows: |l, a| {
            let z = l.field().zero();
            let two = l.field().from_i64(2);
            let a31 = div(&(&(&a[0] + &(&(&two * l) * &a[2])) * &a[0]), &a[2]);
            [
                [a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone()],
                [z.clone(), &two * &a[0], z.clone(), z.clone()],
                [a31, a[4].clone(), a[5].clone(), a[6].clone()],
                [z.clone(), l * &a[0], z, a[0].clone()],
            ]
        },
    },
    Family {
        name: "D31",
        lam_index: 3,
        params: &[
            ("a11", Nonzero),
            ("a12", Nonzero),
            ("a13", Nonzero),
            ("a14", Nonzero),
            ("a32", Free),
            ("a33", Free),
            ("a34", Free),
        ],
        rows: |l, a| family_d3(l, a, false),
    },
    Family {
        name: "D32",
        lam_index: 3,
        params: &[
            ("a11", Nonzero),
            ("a12", Nonzero),
            ("a13", Nonzero),
            ("a14", Nonzero),
            ("a32", Free),
            ("a33", Free),
            ("a34", Free),
        ],
        rows: |l, a| family_d3(l, a, true),
    },
];

fn div(a: &Scalar, b: &Scalar) -> Scalar {
    a.try_div(b).expect("family parameters respect the nonvanishing assumptions")
}

fn family_d3(l: &Scalar, a: &[Scalar], second: bool) -> [[Scalar; 4]; 4] {
    let z = l.field().zero();
    let two = l.field().from_i64(2);
    let q = div(&(&(&a[0] * &a[0]) + &(&(l * &a[3]) * &a[0])), &a[2]);
    let (a22, a31) = if second { (&two * &a[0], q) } else { (z.clone(), -&q) };
    [
        [a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone()],
        [z.clone(), a22, z.clone(), z],
        [a31, a[4].clone(), a[5].clone(), a[6].clone()],
        [l * &a[0], l * &a[1], l * &a[2], &(l * &a[3]) + &a[0]],
    ]
}

/// Names of the closed-form families applicable to `λ` on the four-dimensional algebra.
pub fn family_names(m: &MalcevAlgebra, lam: &Vector) -> Vec<&'static str> {
    applicable(m, lam).map(|(fam, _)| fam.name).collect()
}

fn applicable<'a>(m: &MalcevAlgebra, lam: &'a Vector) -> impl Iterator<Item = (&'static Family, &'a Scalar)> {
    let is_m4 = m.dim() == 4 && lam.dim() == 4 && m.table() == MalcevAlgebra::m4(m.field()).table();
    let support: Vec<usize> = if is_m4 { (0..4).filter(|&i| !lam[i].is_zero()).collect() } else { vec![] };
    FAMILIES
        .iter()
        .filter(move |fam| support == [fam.lam_index])
        .map(move |fam| (fam, &lam[fam.lam_index]))
}

/// Evaluates each applicable closed-form family at `samples` seeded parameter points.
pub fn evaluate_families(m: &MalcevAlgebra, lam: &Vector, samples: usize, seed: u64) -> Result<Vec<FamilyCheck>> {
    let f = m.field();
    let mut out = Vec::new();
    for (fam, l) in applicable(m, lam) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fam.name.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64)));
        for _ in 0..samples {
            let vals: Vec<Scalar> = fam
                .params
                .iter()
                .map(|(_, kind)| match kind {
                    Free => sample::scalar(&mut rng, f),
                    Nonzero => sample::nonzero_scalar(&mut rng, f),
                })
                .collect();
            let rows = (fam.rows)(l, &vals);
            let mut mat = Matrix::zero(f, 4, 4);
            for (i, row) in rows.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    mat[(i, j)] = x.clone();
                }
            }
            let td = TwistedDerivation::from_rows(lam.clone(), mat)?;
            let rep = check_twisted_derivation(m, &td)?;
            out.push(FamilyCheck {
                family: fam.name.to_string(),
                params: fam.params.iter().map(|(n, _)| n.to_string()).zip(vals).collect(),
                printed: rep.printed_verdict(),
                direct: rep.direct_verdict(),
                failing: rep.printed.failing_ids().into_iter().map(String::from).collect(),
                td,
            });
        }
    }
    Ok(out)
}

/// Seeded random twisted-derivation candidate (not necessarily valid).
pub fn random_candidate<R: Rng + ?Sized>(rng: &mut R, m: &MalcevAlgebra) -> TwistedDerivation {
    let (f, n) = (m.field(), m.dim());
    TwistedDerivation { lam: sample::vector(rng, f, n), d: sample::matrix(rng, f, n, n) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unified::{extract_datum, Projection};

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    /// M4 restricted to span{e1, e2, e4} with e3 as the flag direction.
    fn extraction_instance(f: Field) -> (MalcevAlgebra, ExtendingDatum) {
        let e = MalcevAlgebra::m4(f);
        let pr = Projection::coordinate_by_names(&e, &["e1", "e2", "e4"]).unwrap();
        let d = extract_datum(&pr).unwrap();
        (d.m.clone(), d)
    }

    #[test]
    fn zero_twisted_derivation_passes_both() {
        let f = gf(5);
        let m = MalcevAlgebra::m4(f);
        let rep = check_twisted_derivation(&m, &TwistedDerivation::zero(f, 4)).unwrap();
        assert!(rep.printed_verdict() && rep.direct_verdict());
    }

    #[test]
    fn extraction_instance_passes_both() {
        let f = gf(5);
        let (m, d) = extraction_instance(f);
        let lam = Vector::from_i64(f, &[1, 0, 0]);
        let dmat = Matrix::from_i64(f, &[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]);
        let td = TwistedDerivation::new(lam, dmat).unwrap();
        assert_eq!(flag_datum(&m, &td).unwrap(), d);
        let rep = check_twisted_derivation(&m, &td).unwrap();
        assert!(rep.printed_verdict() && rep.direct_verdict());
    }

    #[test]
    fn row_form_is_transposed() {
        let f = gf(5);
        let rows = Matrix::from_i64(f, &[&[0, 1], &[0, 0]]);
        let td = TwistedDerivation::from_rows(Vector::zero(f, 2), rows).unwrap();
        // D(e1) = e2
        assert_eq!(td.d.column(0), Vector::from_i64(f, &[0, 1]));
    }

    #[test]
    fn flag_equiv_recovers_r() {
        let f = gf(7);
        let (m, _) = extraction_instance(f);
        let td = TwistedDerivation::new(
            Vector::from_i64(f, &[1, 0, 0]),
            Matrix::from_i64(f, &[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]),
        )
        .unwrap();
        let r = Vector::from_i64(f, &[2, 3, 5]);
        let td2 = transform(&m, &td, &r).unwrap();
        let eq = flag_equiv(&m, &td, &td2).unwrap();
        assert!(eq.equivalent);
        assert_eq!(transform(&m, &td, eq.r.as_ref().unwrap()).unwrap(), td2);
        assert!(flag_equiv(&m, &td2, &td).unwrap().equivalent);
        assert!(flag_equiv(&m, &td, &td).unwrap().equivalent);
        let other = TwistedDerivation { lam: Vector::zero(f, 3), d: td.d.clone() };
        assert!(!flag_equiv(&m, &td, &other).unwrap().equivalent);
    }

    #[test]
    fn solve_on_abelian_with_zero_lambda_is_everything() {
        let f = gf(5);
        let m = MalcevAlgebra::abelian(f, 2);
        let res = solve_twisted(&m, &Vector::zero(f, 2)).unwrap();
        assert_eq!(res.linear_space.kernel_basis.len(), 4);
        assert_eq!(res.solutions.len(), 625);
        assert!(res.family_checks.is_empty());
    }

    #[test]
    fn solver_matches_brute_force() {
        let f = gf(5);
        // [e1,e2] = e2
        let m = MalcevAlgebra::from_i64(f, 2, &[(0, 1, &[0, 1])]);
        for lam in [[0, 0], [1, 0], [2, 0], [0, 1]] {
            let lam = Vector::from_i64(f, &lam);
            let brute: Vec<Matrix> = (0..625u32)
                .map(|mut i| {
                    let mut c = vec![0i64; 4];
                    for x in c.iter_mut() {
                        *x = (i % 5) as i64;
                        i /= 5;
                    }
                    Matrix::from_i64(f, &[&c[..2], &c[2..]])
                })
                .filter(|d| flag_product(&m, &TwistedDerivation { lam: lam.clone(), d: d.clone() }).unwrap().is_malcev())
                .collect();
            match solve_twisted(&m, &lam) {
                Ok(res) => {
                    let mut got: Vec<Matrix> = res.solutions.into_iter().map(|t| t.d).collect();
                    got.sort_by_key(|d| format!("{d:?}"));
                    let mut want = brute.clone();
                    want.sort_by_key(|d| format!("{d:?}"));
                    assert_eq!(got, want);
                }
                Err(Error::LambdaInvalid(_)) => assert!(brute.is_empty()),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn lambda_on_e2_is_rejected() {
        let f = gf(5);
        let m = MalcevAlgebra::m4(f);
        let err = solve_twisted(&m, &Vector::from_i64(f, &[0, 1, 0, 0])).unwrap_err();
        assert!(matches!(err, Error::LambdaInvalid(_)));
        let checks = evaluate_families(&m, &Vector::from_i64(f, &[0, 1, 0, 0]), 5, 1).unwrap();
        assert_eq!(checks.len(), 5);
        assert!(checks.iter().all(|c| !c.printed && !c.direct));
    }

    #[test]
    fn rationals_are_refused() {
        let m = MalcevAlgebra::m4(Field::Rational);
        let err = solve_twisted(&m, &Vector::zero(Field::Rational, 4)).unwrap_err();
        assert!(matches!(err, Error::FieldNotAllowed(..)));
    }
}
