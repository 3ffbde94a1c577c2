//! Extending data, unified products, and datum extraction from a projection.

use crate::algebra::{validate_names, MalcevAlgebra};
use crate::bilinear::{BilinearMap, SkewMap};
use crate::cond::{check_all, Condition, Env, Omega};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Vector};
use crate::report::{check_tuples, Check, DualReport, VerificationReport, Witness};

/// `v` for a line, `v1 .. vk` otherwise.
pub fn default_v_names(k: usize) -> Vec<String> {
    if k == 1 {
        vec!["v".to_string()]
    } else {
        (1..=k).map(|i| format!("v{i}")).collect()
    }
}

/// The quadruple `(⊲, ⊳, ω, [,]_V)` of an extending datum of `m` through `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendingDatum {
    pub m: MalcevAlgebra,
    pub v_names: Vec<String>,
    /// `⊲ : M x V -> M`
    pub tl: BilinearMap,
    /// `⊳ : M x V -> V`
    pub tr: BilinearMap,
    /// `ω : V x V -> M`
    pub omega: SkewMap,
    /// `[,]_V`
    pub bv: SkewMap,
}

impl ExtendingDatum {
    pub fn zero(m: MalcevAlgebra, v_names: Vec<String>) -> ExtendingDatum {
        let (f, n, k) = (m.field(), m.dim(), v_names.len());
        ExtendingDatum {
            m,
            v_names,
            tl: BilinearMap::zero(f, n, k, n),
            tr: BilinearMap::zero(f, n, k, k),
            omega: SkewMap::zero(f, k, n),
            bv: SkewMap::zero(f, k, k),
        }
    }

    pub fn new(
        m: MalcevAlgebra,
        v_names: Vec<String>,
        tl: BilinearMap,
        tr: BilinearMap,
        omega: SkewMap,
        bv: SkewMap,
    ) -> Result<ExtendingDatum> {
        let d = ExtendingDatum { m, v_names, tl, tr, omega, bv };
        d.validate()?;
        Ok(d)
    }

    pub fn field(&self) -> Field {
        self.m.field()
    }

    pub fn dim_m(&self) -> usize {
        self.m.dim()
    }

    pub fn dim_v(&self) -> usize {
        self.v_names.len()
    }

    /// Shape, field, and name checks.
    pub fn validate(&self) -> Result<()> {
        let (f, n, k) = (self.field(), self.dim_m(), self.dim_v());
        validate_names(&self.v_names)?;
        if let Some(clash) = self.v_names.iter().find(|v| self.m.index_of(v).is_some()) {
            return Err(Error::InvalidAlgebra(format!("name {clash} used in both M and V")));
        }
        let shapes = [
            ("tl", self.tl.field(), (self.tl.left_dim(), self.tl.right_dim(), self.tl.out_dim()), (n, k, n)),
            ("tr", self.tr.field(), (self.tr.left_dim(), self.tr.right_dim(), self.tr.out_dim()), (n, k, k)),
            ("omega", self.omega.field(), (self.omega.dim(), self.omega.dim(), self.omega.out_dim()), (k, k, n)),
            ("bv", self.bv.field(), (self.bv.dim(), self.bv.dim(), self.bv.out_dim()), (k, k, k)),
        ];
        for (name, field, got, want) in shapes {
            if field != f {
                return Err(Error::FieldMismatch { left: f, right: field });
            }
            if got != want {
                return Err(Error::DimensionMismatch(format!("{name} has shape {got:?}, expected {want:?}")));
            }
        }
        Ok(())
    }

    /// V with its bracket, as an algebra.
    pub fn v_algebra(&self) -> MalcevAlgebra {
        MalcevAlgebra::from_table(self.v_names.clone(), self.bv.clone()).expect("validated datum")
    }

    pub(crate) fn env(&self) -> Env<'_> {
        Env::new(&self.m, self.v_names.clone())
            .tl(&self.tl)
            .tr(&self.tr)
            .omega(Omega::OnV(&self.omega))
            .bv(&self.bv)
    }
}

/// Bracket table on `M ⊕ V` (names of `M` then `V`) from the four blocks.
/// `om_m` is an optional `M x M -> V` term added to brackets inside `M`.
pub(crate) fn assemble(
    m: &MalcevAlgebra,
    v_names: &[String],
    tl: &BilinearMap,
    tr: &BilinearMap,
    omega: &SkewMap,
    bv: &SkewMap,
    om_m: Option<&SkewMap>,
) -> Result<MalcevAlgebra> {
    let (f, n, k) = (m.field(), m.dim(), v_names.len());
    let mut names = m.names().to_vec();
    names.extend_from_slice(v_names);
    let mut e = MalcevAlgebra::new(f, names)?;
    for i in 0..n {
        for j in i + 1..n {
            let low = om_m.map_or_else(|| Vector::zero(f, k), |w| w.get(i, j));
            e.set_bracket(i, j, &m.basis_bracket(i, j).concat(&low))?;
        }
        for a in 0..k {
            e.set_bracket(i, n + a, &tl.get(i, a).concat(&tr.get(i, a)))?;
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            e.set_bracket(n + a, n + b, &omega.get(a, b).concat(&bv.get(a, b)))?;
        }
    }
    Ok(e)
}

/// `[(x,u),(y,v)] = ([x,y] + x⊲v - y⊲u + ω(u,v), x⊳v - y⊳u + [u,v])`.
pub fn build_unified(d: &ExtendingDatum) -> Result<MalcevAlgebra> {
    d.validate()?;
    assemble(&d.m, &d.v_names, &d.tl, &d.tr, &d.omega, &d.bv, None)
}

/// Canonical verdict: the Malcev identity on the built algebra.
pub fn verify_unified_direct(d: &ExtendingDatum) -> Result<VerificationReport> {
    let e = build_unified(d)?;
    Ok(VerificationReport::new(vec![e.eq3_check("direct")]))
}

const REPAIR_U1: &str = "'y(x ⊲ (z ⊳ q))' read as y ⊲ (x ⊳ (z ⊳ q)); 'z ⊲ (y ⊲ (x ⊳ q))' read as z ⊲ (y ⊳ (x ⊳ q))";
const REPAIR_U2: &str = "'ω(z ⊲ (x ⊳ v), q)' read as ω(z ⊳ (x ⊳ v), q); 'x ⊲ ((z ⊲ v) ⊲ q)' and 'z ⊲ ((x ⊲ q) ⊲ v)' read with the inner ⊲ as ⊳";
const REPAIR_U3: &str = "'y ⊲ (x ⊲ [p,q])' read as y ⊲ (x ⊳ [p,q]); 'ω(y ⊲ (x ⊳ q), p)' read as ω(y ⊳ (x ⊳ q), p)";
const REPAIR_U4: &str = "'x ⊲ (ω(v,p) ⊲ q)' read as x ⊲ (ω(v,p) ⊳ q)";
const REPAIR_U5: &str = "'ω((y ⊲ u) ⊲ p, q)' read as ω((y ⊲ u) ⊳ p, q); 'y ⊲ (ω(p,q) ⊲ u)' read as y ⊲ (ω(p,q) ⊳ u)";
const REPAIR_U7: &str = "'[z ⊲ (x ⊳ v), q]' read as [z ⊳ (x ⊳ v), q]; 'x ⊳ ((z ⊲ v) ⊲ q)' and 'z ⊳ ((x ⊲ q) ⊲ v)' read with the inner ⊲ as ⊳";
const REPAIR_U8: &str = "'x ⊳ (t ⊲ (y ⊳ p))' and 'y ⊳ (x ⊲ (t ⊳ p))' read with the inner ⊲ as ⊳";
const REPAIR_U9: &str = "'((x ⊲ q) ⊳ v) ⊳ p' read as ((x ⊲ q) ⊲ v) ⊳ p";

/// The unified-product compatibility list, transcribed with typed repairs.
pub const U_CONDITIONS: [Condition; 11] = [
    Condition::repaired(
        "U1",
        "x y z q",
        "[[x,z], y<q] + [x,z]<(y>q) = [[x,y],z]<q + [[y,z]<q, x] - x<([y,z]>q) + [[z<q,x],y] - [x<(z>q), y] \
         + y<(x>(z>q)) - [[x<q,y],z] + [y<(x>q), z] - z<(y>(x>q))",
        REPAIR_U1,
    ),
    Condition::repaired(
        "U2",
        "x z v q",
        "[[x,z], om(v,q)] + [x,z]<[v,q] = [x<v,z]<q - (z<(x>v))<q - om(z>(x>v),q) - [(z<v)<q, x] \
         - [om(z>v,q), x] + x<[z>v,q] + x<((z<v)>q) + [z<q,x]<v - (x<(z>q))<v - om(x>(z>q),v) \
         - [(x<q)<v, z] - [om(x>q,v), z] + z<[x>q,v] + z<((x<q)>v)",
        REPAIR_U2,
    ),
    Condition::repaired(
        "U3",
        "x y p q",
        "[x<p, y<q] + (x<p)<(y>q) - (y<q)<(x>p) + om(x>p, y>q) = ([x,y]<p)<q + om([x,y]>p, q) \
         + [(y<p)<q, x] + [om(y>p,q), x] - x<[y>p,q] - x<((y<p)>q) + [[om(p,q),x],y] - [x<[p,q], y] \
         + y<(x>[p,q]) - [x<q,y]<p + (y<(x>q))<p + om(y>(x>q),p)",
        REPAIR_U3,
    ),
    Condition::repaired(
        "U4",
        "x v p q",
        "[x<p, om(v,q)] + (x<p)<[v,q] - om(v,q)<(x>p) + om(x>p,[v,q]) = ((x<v)<p)<q + om(x>v,p)<q \
         + om([x>v,p],q) + om((x<v)>p,q) + [om(v,p)<q, x] + [om([v,p],q), x] - x<[[v,p],q] \
         - x<(om(v,p)>q) + [om(p,q),x]<v - (x<[p,q])<v - om(x>[p,q],v) - ((x<q)<v)<p - om(x>q,v)<p \
         - om([x>q,v],p) - om((x<q)>v,p)",
        REPAIR_U4,
    ),
    Condition::repaired(
        "U5",
        "y u p q",
        "[om(u,p), y<q] + om(u,p)<(y>q) - (y<q)<[u,p] + om([u,p], y>q) = -((y<u)<p)<q - om(y>u,p)<q \
         - om([y>u,p],q) - om((y<u)>p,q) + ((y<p)<q)<u + om(y>p,q)<u + om([y>p,q],u) + om((y<p)>q,u) \
         + [om(p,q)<u, y] + [om([p,q],u), y] - y<[[p,q],u] - y<(om(p,q)>u) + [om(q,u),y]<p \
         - (y<[q,u])<p - om(y>[q,u],p)",
        REPAIR_U5,
    ),
    Condition::new(
        "U6",
        "u v p q",
        "[om(u,p), om(v,q)] + om(u,p)<[v,q] - om(v,q)<[u,p] + om([u,p],[v,q]) = (om(u,v)<p)<q \
         + om([u,v],p)<q + om([[u,v],p],q) + om(om(u,v)>p, q) + (om(v,p)<q)<u + om([v,p],q)<u \
         + om([[v,p],q],u) + om(om(v,p)>q,u) + (om(p,q)<u)<v + om([p,q],u)<v + om([[p,q],u],v) \
         + om(om(p,q)>u,v) + (om(q,u)<v)<p + om([q,u],v)<p + om([[q,u],v],p) + om(om(q,u)>v,p)",
    ),
    Condition::repaired(
        "U7",
        "x z v q",
        "[x,z]>[v,q] = -[z>(x>v), q] + [x<v,z]>q - (z<(x>v))>q + x>[z>v,q] + x>((z<v)>q) \
         - [x>(z>q),v] + [z<q,x]>v - (x<(z>q))>v + z>[x>q,v] + z>((x<q)>v)",
        REPAIR_U7,
    ),
    Condition::repaired(
        "U8",
        "x y t p",
        "[y,t]>(x>p) = t>([x,y]>p) - x>(t>(y>p)) + y>(x>(t>p)) - [[t,x],y]>p",
        REPAIR_U8,
    ),
    Condition::repaired(
        "U9",
        "x v p q",
        "[x>p,[v,q]] + (x<p)>[v,q] - om(v,q)>(x>p) = [[x>v,p],q] + [(x<v)>p, q] + ((x<v)<p)>q \
         + om(x>v,p)>q - x>[[v,p],q] - x>(om(v,p)>q) - [x>[p,q], v] + [om(p,q),x]>v - (x<[p,q])>v \
         - [[x>q,v],p] - [(x<q)>v, p] - ((x<q)<v)>p - om(x>q,v)>p",
        REPAIR_U9,
    ),
    Condition::new(
        "U10",
        "x y p q",
        "[x>p, y>q] + (x<p)>(y>q) - (y<q)>(x>p) = [[x,y]>p, q] + ([x,y]<p)>q - x>[y>p,q] \
         - x>((y<p)>q) + y>(x>[p,q]) + [y>(x>q),p] - [x<q,y]>p + (y<(x>q))>p",
    ),
    Condition::new(
        "U11",
        "u v p q",
        "[[u,p],[v,q]] + om(u,p)>[v,q] - om(v,q)>[u,p] = [[[u,v],p],q] + [om(u,v)>p,q] + (om(u,v)<p)>q \
         + om([u,v],p)>q + [[[v,p],q],u] + [om(v,p)>q,u] + (om(v,p)<q)>u + om([v,p],q)>u \
         + [[[p,q],u],v] + [om(p,q)>u,v] + (om(p,q)<u)>v + om([p,q],u)>v + [[[q,u],v],p] \
         + [om(q,u)>v,p] + (om(q,u)<v)>p + om([q,u],v)>p",
    ),
];

/// The printed list `U1`-`U11` next to the direct check.
pub fn diagnose_u(d: &ExtendingDatum) -> Result<DualReport> {
    d.validate()?;
    let printed = check_all(&U_CONDITIONS, &d.env());
    Ok(DualReport { printed, direct: verify_unified_direct(d)? })
}

/// A splitting of `E` into the span of some basis vectors and the kernel of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub e: MalcevAlgebra,
    pub sub: Vec<usize>,
    pub complement: Vec<usize>,
    /// Idempotent onto `span{e_i : i in sub}`.
    pub p: Matrix,
}

impl Projection {
    /// Coordinate projection onto the named basis vectors.
    pub fn coordinate(e: &MalcevAlgebra, sub: &[usize]) -> Result<Projection> {
        let n = e.dim();
        let mut p = Matrix::zero(e.field(), n, n);
        for &i in sub {
            if i >= n {
                return Err(Error::DimensionMismatch(format!("index {i} out of range")));
            }
            p[(i, i)] = e.field().one();
        }
        Projection::new(e, sub, p)
    }

    pub fn coordinate_by_names(e: &MalcevAlgebra, names: &[&str]) -> Result<Projection> {
        let idx = names
            .iter()
            .map(|s| e.index_of(s).ok_or_else(|| Error::InvalidAlgebra(format!("unknown basis name {s}"))))
            .collect::<Result<Vec<_>>>()?;
        Projection::coordinate(e, &idx)
    }

    pub fn new(e: &MalcevAlgebra, sub: &[usize], p: Matrix) -> Result<Projection> {
        let n = e.dim();
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch(format!("projection is {}x{} on dim {n}", p.rows(), p.cols())));
        }
        if p.field() != e.field() {
            return Err(Error::FieldMismatch { left: e.field(), right: p.field() });
        }
        let mut sorted = sub.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != sub.len() || sorted.last().is_some_and(|&i| i >= n) {
            return Err(Error::DimensionMismatch("sub-basis indices must be distinct and in range".into()));
        }
        for j in 0..n {
            let col = p.column(j);
            if (0..n).any(|k| !sub.contains(&k) && !col[k].is_zero()) {
                return Err(Error::NotIdempotent);
            }
        }
        for &i in sub {
            if p.column(i) != e.unit(i) {
                return Err(Error::NotIdempotent);
            }
        }
        if p.mul(&p) != p {
            return Err(Error::NotIdempotent);
        }
        if !e.is_coordinate_subalgebra(sub) {
            return Err(Error::NotASubalgebra);
        }
        let complement = (0..n).filter(|i| !sub.contains(i)).collect();
        Ok(Projection { e: e.clone(), sub: sub.to_vec(), complement, p })
    }

    /// `v_a = e_c - p(e_c)` for the `a`-th complement index `c`.
    pub fn v_basis(&self, a: usize) -> Vector {
        let c = self.complement[a];
        &self.e.unit(c) - &self.p.column(c)
    }

    fn sub_coords(&self, w: &Vector) -> Vector {
        Vector::from_coords_unchecked(w.field(), self.sub.iter().map(|&i| w[i].clone()).collect())
    }

    /// Coordinates of `w - p(w)` in the basis `v_a`.
    fn v_coords(&self, w: &Vector) -> Vector {
        Vector::from_coords_unchecked(w.field(), self.complement.iter().map(|&i| w[i].clone()).collect())
    }

    /// Matrix of `φ(x, u) = x + u` from `M ⊕ V` to `E`.
    pub fn phi(&self) -> Matrix {
        let mut cols: Vec<Vector> = self.sub.iter().map(|&i| self.e.unit(i)).collect();
        cols.extend((0..self.complement.len()).map(|a| self.v_basis(a)));
        Matrix::from_columns(self.e.field(), self.e.dim(), &cols)
    }
}

/// Datum without the Malcev precondition on `E`.
pub(crate) fn extract_raw(pr: &Projection) -> ExtendingDatum {
    let e = &pr.e;
    let f = e.field();
    let (n, k) = (pr.sub.len(), pr.complement.len());
    let names: Vec<String> = pr.sub.iter().map(|&i| e.name(i).to_string()).collect();
    let mut m = MalcevAlgebra::new(f, names).expect("names from a valid algebra");
    for a in 0..n {
        for b in a + 1..n {
            let w = e.basis_bracket(pr.sub[a], pr.sub[b]);
            m.set_bracket(a, b, &pr.sub_coords(&w)).expect("in range");
        }
    }
    let vs: Vec<Vector> = (0..k).map(|a| pr.v_basis(a)).collect();
    let mut d = ExtendingDatum::zero(m, default_v_names(k));
    for i in 0..n {
        for (a, va) in vs.iter().enumerate() {
            let w = e.br(&e.unit(pr.sub[i]), va);
            let pw = pr.p.apply(&w);
            d.tl.set(i, a, &pr.sub_coords(&pw)).expect("shape");
            d.tr.set(i, a, &pr.v_coords(&w)).expect("shape");
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            let w = e.br(&vs[a], &vs[b]);
            let pw = pr.p.apply(&w);
            d.omega.set(a, b, &pr.sub_coords(&pw)).expect("shape");
            d.bv.set(a, b, &pr.v_coords(&w)).expect("shape");
        }
    }
    d
}

/// `x ⊳ u = [x,u] - p[x,u]`, `x ⊲ u = p[x,u]`, `ω(u,v) = p[u,v]`, `[u,v]_V = [u,v] - p[u,v]`.
pub fn extract_datum(pr: &Projection) -> Result<ExtendingDatum> {
    if !pr.e.is_malcev() {
        return Err(Error::NotMalcev);
    }
    Ok(extract_raw(pr))
}

/// Checks that `φ(x,u) = x + u` is an isomorphism from the unified product of `d`
/// onto `E` that stabilizes `M` and co-stabilizes `V`.
pub fn phi_iso_check(e: &MalcevAlgebra, pr: &Projection, d: &ExtendingDatum) -> Result<VerificationReport> {
    let u = build_unified(d)?;
    if u.dim() != e.dim() || d.dim_m() != pr.sub.len() {
        return Err(Error::DimensionMismatch("datum does not match the projection".into()));
    }
    let phi = pr.phi();
    let f = e.field();
    let (n, k) = (d.dim_m(), d.dim_v());
    let bracket = u.homomorphism_check(e, &phi, "phi_bracket");
    let mut invertible = Check::pass("phi_invertible");
    if !phi.is_invertible() {
        invertible = Check::from_witnesses(
            "phi_invertible",
            1,
            vec![Witness::new(vec![], vec![], Vector::from_i64(f, &[phi.rank() as i64]), Vector::from_i64(f, &[u.dim() as i64]))],
        );
    }
    let stab = check_tuples("stabilizes_M", &[n], |t| {
        let lhs = phi.column(t[0]);
        let rhs = e.unit(pr.sub[t[0]]);
        (lhs != rhs).then(|| Witness::basis(t, vec![u.name(t[0]).to_string()], lhs, rhs))
    });
    let costab = check_tuples("costabilizes_V", &[n + k], |t| {
        let image = phi.column(t[0]);
        let lhs = pr.v_coords(&(&image - &pr.p.apply(&image)));
        let rhs = u.unit(t[0]).slice(n, n + k);
        (lhs != rhs).then(|| Witness::basis(t, vec![u.name(t[0]).to_string()], lhs, rhs))
    });
    Ok(VerificationReport::new(vec![bracket, invertible, stab, costab]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::Rational
    }

    fn m4_extraction() -> (MalcevAlgebra, Projection, ExtendingDatum) {
        let e = MalcevAlgebra::m4(q());
        let pr = Projection::coordinate_by_names(&e, &["e1", "e2", "e4"]).unwrap();
        let d = extract_datum(&pr).unwrap();
        (e, pr, d)
    }

    #[test]
    fn m4_extraction_values() {
        let (_, _, d) = m4_extraction();
        assert_eq!(d.m.names(), &["e1", "e2", "e4"]);
        assert_eq!(d.m.basis_bracket(0, 1), Vector::from_i64(q(), &[0, 1, 0]));
        assert_eq!(d.m.basis_bracket(0, 2), Vector::from_i64(q(), &[0, 0, -1]));
        assert_eq!(d.tr.get(0, 0), Vector::from_i64(q(), &[1]));
        assert_eq!(d.tl.get(1, 0), Vector::from_i64(q(), &[0, 0, 1]));
        let mut expected = ExtendingDatum::zero(d.m.clone(), default_v_names(1));
        expected.tr.set(0, 0, &Vector::from_i64(q(), &[1])).unwrap();
        expected.tl.set(1, 0, &Vector::from_i64(q(), &[0, 0, 1])).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn m4_extraction_is_isomorphic_and_passes_both_paths() {
        let (e, pr, d) = m4_extraction();
        assert!(phi_iso_check(&e, &pr, &d).unwrap().overall());
        let dual = diagnose_u(&d).unwrap();
        assert!(dual.direct_verdict());
        assert!(dual.agrees());
    }

    #[test]
    fn extraction_with_one_dim_sub() {
        let e = MalcevAlgebra::m4(q());
        let pr = Projection::coordinate(&e, &[0]).unwrap();
        let d = extract_datum(&pr).unwrap();
        assert!(d.omega.get(0, 1).is_zero());
        assert_eq!(d.bv.get(0, 1), Vector::from_i64(q(), &[0, 0, 1]));
        assert!(phi_iso_check(&e, &pr, &d).unwrap().overall());
    }

    #[test]
    fn projection_errors() {
        let e = MalcevAlgebra::m4(q());
        // span{e2, e3} contains [e2,e3] = e4 outside it
        assert_eq!(Projection::coordinate(&e, &[1, 2]), Err(Error::NotASubalgebra));
        let mut p = Matrix::zero(q(), 4, 4);
        p[(0, 0)] = q().one();
        p[(1, 0)] = q().one();
        assert_eq!(Projection::new(&e, &[0], p), Err(Error::NotIdempotent));
        let bad = MalcevAlgebra::from_i64(q(), 3, &[(0, 1, &[0, 0, 1]), (0, 2, &[1, 0, 0])]);
        assert!(!bad.is_malcev());
        let pr = Projection::coordinate(&bad, &[1]).unwrap();
        assert_eq!(extract_datum(&pr), Err(Error::NotMalcev));
    }

    #[test]
    fn shifted_projection_extraction() {
        // p(e3) = e1: V is spanned by e3 - e1
        let e = MalcevAlgebra::m4(q());
        let mut p = Matrix::zero(q(), 4, 4);
        for i in [0, 1, 3] {
            p[(i, i)] = q().one();
        }
        p[(0, 2)] = q().one();
        let pr = Projection::new(&e, &[0, 1, 3], p).unwrap();
        let d = extract_datum(&pr).unwrap();
        assert!(phi_iso_check(&e, &pr, &d).unwrap().overall());
        assert!(verify_unified_direct(&d).unwrap().overall());
    }

    #[test]
    fn perturbed_datum_fails_iso_check() {
        let (e, pr, mut d) = m4_extraction();
        d.tl.set(0, 0, &Vector::from_i64(q(), &[0, 1, 0])).unwrap();
        let rep = phi_iso_check(&e, &pr, &d).unwrap();
        let c = rep.get("phi_bracket").unwrap();
        assert!(!c.passed);
        assert_eq!(c.witnesses[0].args, vec!["e1", "v"]);
    }

    #[test]
    fn zero_datum_is_direct_sum() {
        let m = MalcevAlgebra::m4(q());
        let mut d = ExtendingDatum::zero(m, default_v_names(2));
        let good = diagnose_u(&d).unwrap();
        assert!(good.direct_verdict() && good.printed_verdict());
        let e = build_unified(&d).unwrap();
        assert!(e.basis_bracket(0, 4).is_zero());
        d.bv.set(0, 1, &Vector::from_i64(q(), &[1, 1])).unwrap();
        assert!(verify_unified_direct(&d).unwrap().overall());
    }

    #[test]
    fn non_malcev_v_fails_with_quadruple_in_v() {
        let m = MalcevAlgebra::abelian(q(), 1);
        let mut d = ExtendingDatum::zero(m, default_v_names(3));
        d.bv.set(0, 1, &Vector::from_i64(q(), &[0, 0, 1])).unwrap();
        d.bv.set(0, 2, &Vector::from_i64(q(), &[1, 0, 0])).unwrap();
        let rep = verify_unified_direct(&d).unwrap();
        assert!(!rep.overall());
        let w = &rep.checks[0].witnesses[0];
        assert!(w.indices.iter().all(|i| i[0] >= 1));
        let dual = diagnose_u(&d).unwrap();
        assert!(!dual.get_printed("U11").passed);
    }

    #[test]
    fn round_trip_through_coordinate_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = Field::prime(5).unwrap();
        for _ in 0..50 {
            let d = sample::datum(&mut rng, &MalcevAlgebra::m4(f), 2);
            let e = build_unified(&d).unwrap();
            let pr = Projection::coordinate(&e, &[0, 1, 2, 3]).unwrap();
            assert_eq!(extract_raw(&pr), d);
            // subalgebra embedding
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(e.basis_bracket(i, j), d.m.basis_bracket(i, j).concat(&Vector::zero(f, 2)));
                }
            }
        }
    }
}
