//! Morphisms of unified products given by pairs `(r, s)`, and classification of
//! flag extensions over a finite field.

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

use crate::algebra::MalcevAlgebra;
use crate::cond::{check_all, Condition};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::flag::{flag_product, TwistedDerivation};
use crate::linalg::{Matrix, Vector};
use crate::report::{DualReport, VerificationReport};
use crate::unified::{build_unified, ExtendingDatum};

/// `r : V -> M` (`dim M x dim V`) and `s : V -> V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphPair {
    pub r: Matrix,
    pub s: Matrix,
}

impl MorphPair {
    pub fn identity(field: Field, n: usize, k: usize) -> MorphPair {
        MorphPair { r: Matrix::zero(field, n, k), s: Matrix::identity(field, k) }
    }

    fn check_shapes(&self, n: usize, k: usize) -> Result<()> {
        if (self.r.rows(), self.r.cols()) != (n, k) || (self.s.rows(), self.s.cols()) != (k, k) {
            return Err(Error::DimensionMismatch(format!(
                "r is {}x{} and s is {}x{}, expected {n}x{k} and {k}x{k}",
                self.r.rows(),
                self.r.cols(),
                self.s.rows(),
                self.s.cols()
            )));
        }
        Ok(())
    }
}

const LEFT_ACTIONS: &str = "operand order translated to left actions";

pub const M_CONDITIONS: [Condition; 4] = [
    Condition::repaired("M1", "x u", "s(x>u) = tr2(x, s(u))", LEFT_ACTIONS),
    Condition::repaired("M2", "x u", "r(x>u) = [x, r(u)] + tl2(x, s(u)) - x<u", LEFT_ACTIONS),
    Condition::repaired(
        "M3",
        "u v",
        "s([u,v]) = bv2(s(u),s(v)) + tr2(r(u), s(v)) - tr2(r(v), s(u))",
        LEFT_ACTIONS,
    ),
    Condition::repaired(
        "M4",
        "u v",
        "r([u,v]) = [r(u),r(v)] + tl2(r(u),s(v)) - tl2(r(v),s(u)) + om2(s(u),s(v)) - om(u,v)",
        LEFT_ACTIONS,
    ),
];

/// Block matrix `[[I, r], [0, s]]` of `ψ(x, u) = (x + r(u), s(u))`.
pub fn psi_map(mp: &MorphPair, n: usize, k: usize) -> Result<Matrix> {
    mp.check_shapes(n, k)?;
    let f = mp.s.field();
    let mut psi = Matrix::zero(f, n + k, n + k);
    for i in 0..n {
        psi[(i, i)] = f.one();
    }
    for a in 0..k {
        for i in 0..n {
            psi[(i, n + a)] = mp.r[(i, a)].clone();
        }
        for b in 0..k {
            psi[(n + b, n + a)] = mp.s[(b, a)].clone();
        }
    }
    Ok(psi)
}

/// `M1`-`M4` next to the check that `ψ` is a bracket homomorphism.
pub fn check_morphism_pair(d: &ExtendingDatum, d2: &ExtendingDatum, mp: &MorphPair) -> Result<DualReport> {
    d.validate()?;
    d2.validate()?;
    if d.m != d2.m || d.dim_v() != d2.dim_v() {
        return Err(Error::DimensionMismatch("the two data must share M and dim V".into()));
    }
    let (n, k) = (d.dim_m(), d.dim_v());
    let psi = psi_map(mp, n, k)?;
    let env = d.env().morphism(&mp.r, &mp.s).target(&d2.tl, &d2.tr, &d2.omega, &d2.bv);
    let printed = check_all(&M_CONDITIONS, &env);
    let (e1, e2) = (build_unified(d)?, build_unified(d2)?);
    let direct = VerificationReport::new(vec![e1.homomorphism_check(&e2, &psi, "direct")]);
    Ok(DualReport { printed, direct })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// Stabilizing isomorphisms (`s` invertible).
    Equiv,
    /// Stabilizing and co-stabilizing (`s = id`).
    Cohom,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Equiv => "equiv",
            Relation::Cohom => "cohom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagClass {
    /// Least `(λ, D(e_1), ..., D(e_n))` in the class, coordinates compared as residues.
    pub representative: TwistedDerivation,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub total: usize,
    pub classes_equiv: usize,
    pub classes_cohom: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    pub field: Field,
    pub dim_m: usize,
    pub dim_v: usize,
    pub total_data: usize,
    pub classes_equiv: Vec<FlagClass>,
    pub classes_cohom: Vec<FlagClass>,
    pub cross_check: CrossCheck,
    /// Every `≈`-class lies inside one `≡`-class.
    pub refines: bool,
}

impl ClassificationResult {
    pub fn classes(&self, rel: Relation) -> &[FlagClass] {
        match rel {
            Relation::Equiv => &self.classes_equiv,
            Relation::Cohom => &self.classes_cohom,
        }
    }

    pub fn cross_count(&self, rel: Relation) -> usize {
        match rel {
            Relation::Equiv => self.cross_check.classes_equiv,
            Relation::Cohom => self.cross_check.classes_cohom,
        }
    }

    /// Both routes agree for both relations and every `≈`-class lies in one `≡`-class.
    pub fn consistent(&self) -> bool {
        let sum = |c: &[FlagClass]| c.iter().map(|c| c.size).sum::<usize>();
        self.classes_equiv.len() == self.cross_check.classes_equiv
            && self.classes_cohom.len() == self.cross_check.classes_cohom
            && self.total_data == self.cross_check.total
            && sum(&self.classes_equiv) == self.total_data
            && sum(&self.classes_cohom) == self.total_data
            && self.refines
    }
}

pub const CLASSIFY_LIMIT: u64 = 100_000_000;

/// Coordinates `(λ_1..λ_n, D(e_1)_1..D(e_1)_n, D(e_2)_1, ...)` as residues, base `p`.
struct Codec {
    p: u64,
    n: usize,
    elems: Vec<Scalar>,
}

impl Codec {
    fn len(&self) -> usize {
        self.n + self.n * self.n
    }

    fn decode(&self, mut idx: u64) -> Vec<Scalar> {
        let mut digits = vec![0usize; self.len()];
        for d in digits.iter_mut().rev() {
            *d = (idx % self.p) as usize;
            idx /= self.p;
        }
        digits.into_iter().map(|d| self.elems[d].clone()).collect()
    }

    fn encode(&self, coords: &[Scalar]) -> u64 {
        coords.iter().fold(0, |acc, c| acc * self.p + u64::from(c.residue().expect("prime field")))
    }

    fn td(&self, f: Field, coords: &[Scalar]) -> TwistedDerivation {
        let n = self.n;
        let lam = Vector::new(f, coords[..n].to_vec()).expect("field");
        let cols: Vec<Vector> =
            (0..n).map(|j| Vector::new(f, coords[n + j * n..n + (j + 1) * n].to_vec()).expect("field")).collect();
        TwistedDerivation { lam, d: Matrix::from_columns(f, n, &cols) }
    }

    fn coords(&self, td: &TwistedDerivation) -> Vec<Scalar> {
        let mut out = td.lam.coords().to_vec();
        for j in 0..self.n {
            out.extend(td.d.column(j).into_coords());
        }
        out
    }
}

fn classes(codec: &Codec, f: Field, valid: &[u64], uf: &mut UnionFind<usize>) -> Vec<FlagClass> {
    let mut groups: std::collections::BTreeMap<usize, (u64, usize)> = std::collections::BTreeMap::new();
    for (i, &key) in valid.iter().enumerate() {
        let root = uf.find_mut(i);
        let e = groups.entry(root).or_insert((key, 0));
        e.0 = e.0.min(key);
        e.1 += 1;
    }
    let mut out: Vec<(u64, usize)> = groups.into_values().collect();
    out.sort();
    out.into_iter()
        .map(|(key, size)| FlagClass { representative: codec.td(f, &codec.decode(key)), size })
        .collect()
}

fn orbit_guard(p: u64, n: usize) -> Result<u64> {
    let exp = (n + n * n) as u32;
    p.checked_pow(exp)
        .filter(|&c| c <= CLASSIFY_LIMIT)
        .ok_or_else(|| Error::ResourceLimit(format!("{p}^{exp} candidate flag data exceed {CLASSIFY_LIMIT}")))
}

/// Classifies all Malcev flag extensions of `m` over `GF(p)` under both relations,
/// once through `(λ, D)` and once through brackets on `M ⊕ k`.
pub fn classify_flag(m: &MalcevAlgebra) -> Result<ClassificationResult> {
    let f = m.field();
    let p = match f.order() {
        Some(p) => p,
        None => return Err(Error::FieldNotAllowed(f, "classification enumerates over GF(p)".into())),
    };
    if !m.is_malcev() {
        return Err(Error::NotMalcev);
    }
    let n = m.dim();
    let count = orbit_guard(p, n)?;
    let codec = Codec { p, n, elems: f.elements() };
    let elems = f.elements();
    let units: Vec<Scalar> = elems.iter().filter(|s| !s.is_zero()).cloned().collect();
    let rs: Vec<Vector> = (0..p.pow(n as u32))
        .map(|mut i| {
            let mut c = vec![f.zero(); n];
            for x in c.iter_mut().rev() {
                *x = elems[(i % p) as usize].clone();
                i /= p;
            }
            Vector::new(f, c).expect("field")
        })
        .collect();
    let orbit_work = count.saturating_mul(rs.len() as u64).saturating_mul(units.len() as u64);
    if orbit_work > CLASSIFY_LIMIT.saturating_mul(10) {
        return Err(Error::ResourceLimit(format!("orbit search of {orbit_work} steps")));
    }

    // Route A: twisted derivations and the (r, σ) action read off M1-M4.
    let valid: Vec<u64> = (0..count)
        .into_par_iter()
        .filter(|&idx| {
            let td = codec.td(f, &codec.decode(idx));
            flag_product(m, &td).map(|e| e.is_malcev()).unwrap_or(false)
        })
        .collect();
    let index_of = |key: u64| valid.binary_search(&key).ok();
    let act = |td: &TwistedDerivation, r: &Vector, sigma: &Scalar| -> TwistedDerivation {
        // σ D'(x) = D(x) + λ(x) r + [r, x]
        let inv = sigma.inv().expect("unit");
        let cols: Vec<Vector> =
            (0..n).map(|i| (&(&td.d.column(i) + &r.scale(&td.lam[i])) + &m.br_unit(r, i)).scale(&inv)).collect();
        TwistedDerivation { lam: td.lam.clone(), d: Matrix::from_columns(f, n, &cols) }
    };
    let edges = |sigmas: &[Scalar]| -> Vec<(usize, usize)> {
        valid
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, &key)| {
                let td = codec.td(f, &codec.decode(key));
                let mut out = Vec::new();
                for r in &rs {
                    for s in sigmas {
                        let j = index_of(codec.encode(&codec.coords(&act(&td, r, s)))).expect("orbit stays valid");
                        out.push((i, j));
                    }
                }
                out.into_iter()
            })
            .collect()
    };
    let partition = |sigmas: &[Scalar]| {
        let mut uf = UnionFind::new(valid.len());
        for (i, j) in edges(sigmas) {
            uf.union(i, j);
        }
        uf
    };
    let (mut uf_equiv, mut uf_cohom) = (partition(&units), partition(&[f.one()]));
    let mut coarse = std::collections::BTreeMap::new();
    let refines = (0..valid.len()).all(|i| *coarse.entry(uf_cohom.find_mut(i)).or_insert(uf_equiv.find_mut(i)) == uf_equiv.find_mut(i));
    let classes_equiv = classes(&codec, f, &valid, &mut uf_equiv);
    let classes_cohom = classes(&codec, f, &valid, &mut uf_cohom);

    let cross_check = classify_by_brackets(m, p, &rs, &units)?;
    Ok(ClassificationResult {
        field: f,
        dim_m: n,
        dim_v: 1,
        total_data: valid.len(),
        classes_equiv,
        classes_cohom,
        cross_check,
        refines,
    })
}

/// Route B: every bracket on `M ⊕ k` restricting to `m`, grouped by conjugation with
/// `φ = [[I, r], [0, σ]]`.
fn classify_by_brackets(m: &MalcevAlgebra, p: u64, rs: &[Vector], units: &[Scalar]) -> Result<CrossCheck> {
    let f = m.field();
    let n = m.dim();
    let elems = f.elements();
    let cols = n * (n + 1);
    let count = p.pow(cols as u32);
    let mut names = m.names().to_vec();
    let u_name = (1..).map(|i| format!("u{i}")).find(|c| !names.contains(c)).expect("fresh name");
    names.push(u_name);
    let build = |mut idx: u64| -> MalcevAlgebra {
        let mut e = MalcevAlgebra::new(f, names.clone()).expect("names");
        for i in 0..n {
            for j in i + 1..n {
                e.set_bracket(i, j, &m.basis_bracket(i, j).concat(&Vector::zero(f, 1))).expect("shape");
            }
        }
        let mut digits = vec![0usize; cols];
        for d in digits.iter_mut().rev() {
            *d = (idx % p) as usize;
            idx /= p;
        }
        for i in 0..n {
            let v: Vec<Scalar> = digits[i * (n + 1)..(i + 1) * (n + 1)].iter().map(|&d| elems[d].clone()).collect();
            e.set_bracket(i, n, &Vector::new(f, v).expect("field")).expect("shape");
        }
        e
    };
    let key = |e: &MalcevAlgebra| -> u64 {
        (0..n)
            .flat_map(|i| e.basis_bracket(i, n).into_coords())
            .fold(0, |acc, c| acc * p + u64::from(c.residue().expect("prime field")))
    };
    let valid: Vec<u64> = (0..count).into_par_iter().filter(|&idx| build(idx).is_malcev()).collect();
    let phis: Vec<(Matrix, bool)> = rs
        .iter()
        .flat_map(|r| {
            units.iter().map(move |s| {
                let mut phi = Matrix::identity(f, n + 1);
                for i in 0..n {
                    phi[(i, n)] = r[i].clone();
                }
                phi[(n, n)] = s.clone();
                (phi, s.is_one())
            })
        })
        .collect();
    let edges: Vec<(usize, usize, bool)> = valid
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &idx)| {
            let e = build(idx);
            let mut out = Vec::new();
            for (phi, co) in &phis {
                let t = e.transport(phi).expect("invertible");
                let j = valid.binary_search(&key(&t)).expect("transport preserves validity");
                out.push((i, j, *co));
            }
            out.into_iter()
        })
        .collect();
    let mut eq = UnionFind::new(valid.len());
    let mut co = UnionFind::new(valid.len());
    for (i, j, stabilizes_v) in edges {
        eq.union(i, j);
        if stabilizes_v {
            co.union(i, j);
        }
    }
    let count_roots = |uf: &UnionFind<usize>| uf.clone().into_labeling().into_iter().collect::<std::collections::BTreeSet<_>>().len();
    Ok(CrossCheck { total: valid.len(), classes_equiv: count_roots(&eq), classes_cohom: count_roots(&co) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::{flag_datum, transform};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn identity_pair_is_a_morphism() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = sample::malcev_algebra(&mut rng, f, 2);
        let d = sample::datum(&mut rng, &m, 2);
        let rep = check_morphism_pair(&d, &d, &MorphPair::identity(f, 2, 2)).unwrap();
        assert!(rep.printed_verdict() && rep.direct_verdict());
    }

    #[test]
    fn psi_fixes_m() {
        let f = gf(5);
        let mp = MorphPair { r: Matrix::from_i64(f, &[&[1], &[2]]), s: Matrix::from_i64(f, &[&[3]]) };
        let psi = psi_map(&mp, 2, 1).unwrap();
        assert_eq!(psi.column(0), Vector::from_i64(f, &[1, 0, 0]));
        assert_eq!(psi.column(2), Vector::from_i64(f, &[1, 2, 3]));
        assert!(psi_map(&mp, 1, 1).is_err());
    }

    #[test]
    fn transformed_flag_data_are_linked_by_psi() {
        let f = gf(7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = sample::malcev_algebra(&mut rng, f, 3);
            let td = crate::flag::random_candidate(&mut rng, &m);
            let r = sample::vector(&mut rng, f, 3);
            let td2 = transform(&m, &td, &r).unwrap();
            let mp = MorphPair { r: Matrix::from_columns(f, 3, &[r]), s: Matrix::identity(f, 1) };
            let (d1, d2) = (flag_datum(&m, &td).unwrap(), flag_datum(&m, &td2).unwrap());
            let rep = check_morphism_pair(&d1, &d2, &mp).unwrap();
            assert!(rep.direct_verdict(), "{:?}", rep.direct);
            assert!(rep.printed_verdict(), "{:?}", rep.printed);
        }
    }

    #[test]
    fn printed_m_list_matches_homomorphism_check() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let m = sample::malcev_algebra(&mut rng, f, 2);
            let (d, d2) = (sample::sparse_datum(&mut rng, &m, 2), sample::sparse_datum(&mut rng, &m, 2));
            let mp = MorphPair { r: sample::matrix(&mut rng, f, 2, 2), s: sample::matrix(&mut rng, f, 2, 2) };
            let rep = check_morphism_pair(&d, &d2, &mp).unwrap();
            assert!(rep.agrees());
        }
    }

    #[test]
    fn classify_two_dim_routes_agree() {
        let f = gf(5);
        let m = MalcevAlgebra::from_i64(f, 2, &[(0, 1, &[0, 1])]);
        let res = classify_flag(&m).unwrap();
        assert!(res.consistent(), "{res:?}");
        assert!(res.classes_cohom.len() >= res.classes_equiv.len());
    }

    #[test]
    fn classify_guards() {
        assert!(matches!(
            classify_flag(&MalcevAlgebra::m4(Field::Rational)).unwrap_err(),
            Error::FieldNotAllowed(..)
        ));
        assert!(matches!(classify_flag(&MalcevAlgebra::m4(gf(5))).unwrap_err(), Error::ResourceLimit(_)));
    }
}
