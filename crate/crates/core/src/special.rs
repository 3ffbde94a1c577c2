//! Crossed, skew-crossed and bicrossed products as special unified products.

use crate::algebra::MalcevAlgebra;
use crate::bilinear::{BilinearMap, SkewMap};
use crate::cond::{check_all, Condition, Env, Omega};
use crate::error::{Error, Result};
use crate::report::{DualReport, VerificationReport};
use crate::unified::{build_unified, verify_unified_direct, ExtendingDatum};

const ZERO_TR: &str = "⊳ terms evaluated with ⊳ = 0";

/// `⊳ = 0`: `[(x,u),(y,v)] = ([x,y] + x⊲v - y⊲u + ω(u,v), [u,v])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedSystem {
    pub m: MalcevAlgebra,
    pub v: MalcevAlgebra,
    pub tl: BilinearMap,
    pub omega: SkewMap,
}

/// `⊲ = 0`: `[(x,u),(y,v)] = ([x,y] + ω(u,v), x⊳v - y⊳u + [u,v])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewCrossedSystem {
    pub m: MalcevAlgebra,
    pub v: MalcevAlgebra,
    pub tr: BilinearMap,
    pub omega: SkewMap,
}

/// `ω = 0`: `[(x,u),(y,v)] = ([x,y] + x⊲v - y⊲u, x⊳v - y⊳u + [u,v])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPairData {
    pub m: MalcevAlgebra,
    pub v: MalcevAlgebra,
    pub tr: BilinearMap,
    pub tl: BilinearMap,
}

fn datum(
    m: &MalcevAlgebra,
    v: &MalcevAlgebra,
    tl: Option<&BilinearMap>,
    tr: Option<&BilinearMap>,
    omega: Option<&SkewMap>,
) -> Result<ExtendingDatum> {
    if v.field() != m.field() {
        return Err(Error::FieldMismatch { left: m.field(), right: v.field() });
    }
    let mut d = ExtendingDatum::zero(m.clone(), v.names().to_vec());
    d.bv = v.table().clone();
    if let Some(tl) = tl {
        d.tl = tl.clone();
    }
    if let Some(tr) = tr {
        d.tr = tr.clone();
    }
    if let Some(om) = omega {
        d.omega = om.clone();
    }
    d.validate()?;
    Ok(d)
}

fn factors_malcev(m: &MalcevAlgebra, v: &MalcevAlgebra) -> Result<()> {
    if !m.is_malcev() {
        return Err(Error::FactorNotMalcev("M"));
    }
    if !v.is_malcev() {
        return Err(Error::FactorNotMalcev("V"));
    }
    Ok(())
}

fn dual(printed: VerificationReport, d: &ExtendingDatum) -> Result<DualReport> {
    Ok(DualReport { printed, direct: verify_unified_direct(d)? })
}

pub const CP_CONDITIONS: [Condition; 6] = [
    Condition::new(
        "CP1",
        "x y z q",
        "[[x,z], y<q] = [[x,y],z]<q + [[y,z]<q, x] + [[z<q,x],y] - [[x<q,y],z]",
    ),
    Condition::repaired(
        "CP2",
        "x z v q",
        "[[x,z],om(v,q)] + [x,z]<[v,q] = [x<v,z]<q - [(z<v)<q,x] + x<((z<v)>q) + [z<q,x]<v - [(x<q)<v,z] \
         + z<((x<q)>v)",
        ZERO_TR,
    ),
    Condition::repaired(
        "CP3",
        "x y p q",
        "[x<p, y<q] = ([x,y]<p)<q + [(y<p)<q, x] + [[om(p,q),x],y] - [x<[p,q],y] + y<(x>[p,q]) - [x<q,y]<p",
        ZERO_TR,
    ),
    Condition::repaired(
        "CP4",
        "x v p q",
        "[x<p, om(v,q)] + (x<p)<[v,q] = ((x<v)<p)<q - x<[[v,p],q] - x<(om(v,p)>q) + [om(v,p)<q,x] \
         + [om([v,p],q),x] + [om(p,q),x]<v - (x<[p,q])<v - om(x>[p,q],v) - ((x<q)<v)<p",
        ZERO_TR,
    ),
    Condition::repaired(
        "CP5",
        "y u p q",
        "[om(u,p), y<q] - (y<q)<[u,p] = -((y<u)<p)<q - om((y<u)>p,q) + ((y<p)<q)<u + [om(p,q)<u,y] \
         + [om([p,q],u),y] - y<[[p,q],u] - y<(om(p,q)>u) + [om(q,u),y]<p - (y<[q,u])<p",
        ZERO_TR,
    ),
    Condition::repaired(
        "CP6",
        "u v p q",
        "[om(u,p),om(v,q)] + om(u,p)<[v,q] - om(v,q)<[u,p] + om([u,p],[v,q]) = (om(u,v)<p)<q \
         + om([u,v],p)<q + om([[u,v],p],q) + (om(v,p)<q)<u + om([v,p],q)<u + om([[v,p],q],u) \
         + (om(p,q)<u)<v + om([p,q],u)<v + om([[p,q],u],v) + om(om(p,q)>u,v) + (om(q,u)<v)<p \
         + om([q,u],v)<p + om([[q,u],v],p)",
        ZERO_TR,
    ),
];

pub const SP_CONDITIONS: [Condition; 9] = [
    Condition::repaired(
        "SP1",
        "x z v q",
        "[[x,z],om(v,q)] = -om(z>(x>v),q) - [om(z>v,q),x] - om(x>(z>q),v) - [om(x>q,v),z]",
        FIX_SP1,
    ),
    Condition::repaired(
        "SP2",
        "x y p q",
        "om(x>p,y>q) = om([x,y]>p,q) + [om(y>p,q),x] + [[om(p,q),x],y] + om(y>(x>q),p)",
        FIX_SP2,
    ),
    Condition::new(
        "SP3",
        "x v p q",
        "om(x>p,[v,q]) = om([x>v,p],q) + [om([v,p],q),x] - om(x>[p,q],v) - om([x>q,v],p)",
    ),
    Condition::new(
        "SP4",
        "u v p q",
        "[om(u,p),om(v,q)] + om([u,p],[v,q]) = om([[u,v],p],q) + om(om(u,v)>p,q) + om([[v,p],q],u) \
         + om(om(v,p)>q,u) + om([[p,q],u],v) + om(om(p,q)>u,v) + om([[q,u],v],p) + om(om(q,u)>v,p)",
    ),
    Condition::new("SP5", "x z v q", "[x,z]>[v,q] = z>[x>q,v] - [x>(z>q),v]"),
    Condition::repaired(
        "SP6",
        "x y t p",
        "[y,t]>(x>p) = t>([x,y]>p) - x>(t>(y>p)) + y>(x>(t>p)) - [[t,x],y]>p",
        FIX_SP6,
    ),
    Condition::new(
        "SP7",
        "x v p q",
        "[x>p,[v,q]] - om(v,q)>(x>p) = [[x>v,p],q] - x>[[v,p],q] + om(x>v,p)>q - x>(om(v,p)>q) \
         - [x>[p,q],v] - [[x>q,v],p] + [om(p,q),x]>v - om(x>q,v)>p",
    ),
    Condition::new(
        "SP8",
        "x y p q",
        "[x>p,y>q] = [[x,y]>p,q] - x>[y>p,q] + y>(x>[p,q]) + [y>(x>q),p]",
    ),
    Condition::new(
        "SP9",
        "u v p q",
        "om(u,p)>[v,q] - om(v,q)>[u,p] = [om(u,v)>p,q] + om([u,v],p)>q + [om(v,p)>q,u] + om([v,p],q)>u \
         + [om(p,q)>u,v] + om([p,q],u)>v + [om(q,u)>v,p] + om([q,u],v)>p",
    ),
];

// Corrections read off the U list with the missing maps set to zero.
const FIX_SP1: &str = "term -ω(z ⊳ (x ⊳ v), q) added (U2 with ⊲ = 0)";
const FIX_SP2: &str = "term +ω(y ⊳ (x ⊳ q), p) added (U3 with ⊲ = 0)";
const FIX_SP6: &str = "terms -x ⊳ (t ⊳ (y ⊳ p)) + y ⊳ (x ⊳ (t ⊳ p)) added (U8)";
const FIX_MP1: &str = "'[[y,z],x] ⊲ u' read as [[y,z] ⊲ u, x] (U1 with ω = 0)";
const REPAIR_MP2: &str = "unbalanced parenthesis in '((x ⊲ u) ⊲ v) ⊳ w' read as shown";
const REPAIR_MP3: &str = "'v ⊲ x' read as x ⊲ v";
const REPAIR_MP5: &str = "unbalanced parenthesis read as (y ⊲ (x ⊳ u)) ⊲ v";

pub const MP_CONDITIONS: [Condition; 6] = [
    Condition::repaired(
        "MP1",
        "x y z u",
        "[[x<u,y],z] - [[y,z]<u,x] - [y<(x>u),z] - [[z<u,x],y] + z<(y>(x>u)) + [[x,z],y<u] - [[x,y],z]<u \
         + [x,z]<(y>u) + [x<(z>u),y] + x<([y,z]>u) - y<(x>(z>u)) = 0",
        FIX_MP1,
    ),
    Condition::repaired(
        "MP2",
        "x u v w",
        "[[x>u,v],w] - [x>[v,w],u] - [(x<u)>v,w] - [[x>w,u],v] + ((x<u)<v)>w + [[u,w],x>v] - x>[[u,v],w] \
         + [(x<w)>u,v] + (x<v)>[u,w] + (x<[v,w])>u - ((x<w)<u)>v = 0",
        REPAIR_MP2,
    ),
    Condition::repaired(
        "MP3",
        "x y u v",
        "y<(x>[u,v]) - (y<v)<(x>u) + [x<v,y]<u - [(y<u)<v, x] - [x<[u,v],y] + (x<u)<(y>v) - x<([y>u,v]) \
         - ([x,y]<u)<v + [x<u,y<v] - (y<(x>v))<u + x<((y<u)>v) = 0",
        REPAIR_MP3,
    ),
    Condition::new(
        "MP4",
        "x y u v",
        "([x,y]<u)>v - (x<u)>(y>v) + x>[y>u,v] - [y>(x>v),u] - [[x,y]>u,v] + (y<v)>(x>u) - ([x<v,y])>u \
         - y>(x>[u,v]) + [x>u,y>v] - x>((y<u)>v) + (y<(x>v))>u = 0",
    ),
    Condition::repaired(
        "MP5",
        "x y u v",
        "[y<v,x]<u - y<([x>v,u]) - [(x<v)<u, y] + [x<u,y]<v - [(y<u)<v,x] - x<[y>u,v] - (y<(x>u))<v \
         - (x<(y>v))<u + [x,y]<[u,v] + x<((y<u)>v) + y<((x<v)>u) = 0",
        REPAIR_MP5,
    ),
    Condition::new(
        "MP6",
        "x y u v",
        "x>[y>v,u] - [y<u,x]>v - [x>(y>u),v] + y>[x>u,v] - [y>(x>v),u] - [x<v,y]>u - y>((x<u)>v) \
         - x>((y<v)>u) + [x,y]>[u,v] + (y<(x>v))>u + (x<(y>u))>v = 0",
    ),
];

impl CrossedSystem {
    pub fn datum(&self) -> Result<ExtendingDatum> {
        datum(&self.m, &self.v, Some(&self.tl), None, Some(&self.omega))
    }
}

impl SkewCrossedSystem {
    pub fn datum(&self) -> Result<ExtendingDatum> {
        datum(&self.m, &self.v, None, Some(&self.tr), Some(&self.omega))
    }
}

impl MatchedPairData {
    pub fn datum(&self) -> Result<ExtendingDatum> {
        datum(&self.m, &self.v, Some(&self.tl), Some(&self.tr), None)
    }
}

/// The crossed product with `CP1`-`CP6` next to the direct check.
pub fn crossed_product(cs: &CrossedSystem) -> Result<(MalcevAlgebra, DualReport)> {
    factors_malcev(&cs.m, &cs.v)?;
    let d = cs.datum()?;
    let env = Env::new(&d.m, d.v_names.clone()).tl(&d.tl).tr(&d.tr).omega(Omega::OnV(&d.omega)).bv(&d.bv);
    let printed = check_all(&CP_CONDITIONS, &env);
    Ok((build_unified(&d)?, dual(printed, &d)?))
}

/// The skew crossed product with `SP1`-`SP9` next to the direct check.
pub fn skew_crossed_product(ss: &SkewCrossedSystem) -> Result<(MalcevAlgebra, DualReport)> {
    factors_malcev(&ss.m, &ss.v)?;
    let d = ss.datum()?;
    let env = Env::new(&d.m, d.v_names.clone()).tr(&d.tr).omega(Omega::OnV(&d.omega)).bv(&d.bv);
    let printed = check_all(&SP_CONDITIONS, &env);
    Ok((build_unified(&d)?, dual(printed, &d)?))
}

/// `MP1`-`MP6` next to the direct check of the bicrossed product.
pub fn matched_pair_check(mp: &MatchedPairData) -> Result<DualReport> {
    factors_malcev(&mp.m, &mp.v)?;
    let d = mp.datum()?;
    let env = Env::new(&d.m, d.v_names.clone()).tl(&d.tl).tr(&d.tr).bv(&d.bv);
    dual(check_all(&MP_CONDITIONS, &env), &d)
}

pub fn bicrossed_product(mp: &MatchedPairData) -> Result<MalcevAlgebra> {
    build_unified(&mp.datum()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::Vector;
    use crate::sample;
    use crate::unified::{default_v_names, extract_datum, phi_iso_check, Projection};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(f: Field) -> MalcevAlgebra {
        MalcevAlgebra::abelian(f, 1).with_names(default_v_names(1)).unwrap()
    }

    #[test]
    fn zero_maps_give_direct_sums() {
        let f = Field::Rational;
        let (m, v) = (MalcevAlgebra::m4(f), line(f));
        let cs = CrossedSystem {
            m: m.clone(),
            v: v.clone(),
            tl: BilinearMap::zero(f, 4, 1, 4),
            omega: SkewMap::zero(f, 1, 4),
        };
        let (e, rep) = crossed_product(&cs).unwrap();
        assert!(rep.direct_verdict() && rep.printed_verdict());
        let ss = SkewCrossedSystem { m: m.clone(), v: v.clone(), tr: BilinearMap::zero(f, 4, 1, 1), omega: SkewMap::zero(f, 1, 4) };
        let (e2, rep2) = skew_crossed_product(&ss).unwrap();
        assert!(rep2.direct_verdict() && rep2.printed_verdict());
        let mp = MatchedPairData { m, v, tr: BilinearMap::zero(f, 4, 1, 1), tl: BilinearMap::zero(f, 4, 1, 4) };
        assert!(matched_pair_check(&mp).unwrap().agrees());
        assert_eq!(bicrossed_product(&mp).unwrap(), e);
        assert_eq!(e, e2);
        for i in 0..4 {
            assert!(e.basis_bracket(i, 4).is_zero());
        }
    }

    #[test]
    fn crossed_m4_line() {
        let f = Field::Rational;
        let mut tl = BilinearMap::zero(f, 4, 1, 4);
        tl.set(0, 0, &Vector::from_i64(f, &[0, 0, 0, 1])).unwrap();
        let cs = CrossedSystem { m: MalcevAlgebra::m4(f), v: line(f), tl, omega: SkewMap::zero(f, 1, 4) };
        let (e, rep) = crossed_product(&cs).unwrap();
        assert_eq!(rep.printed.checks.len(), 6);
        assert_eq!(rep.direct_verdict(), e.is_malcev());
        assert_eq!(e.basis_bracket(0, 4), Vector::from_i64(f, &[0, 0, 0, 1, 0]));
    }

    #[test]
    fn extracted_m4_is_a_matched_pair() {
        let e = MalcevAlgebra::m4(Field::Rational);
        let pr = Projection::coordinate_by_names(&e, &["e1", "e2", "e4"]).unwrap();
        let d = extract_datum(&pr).unwrap();
        assert!(d.omega.is_zero() && d.bv.is_zero());
        let mp = MatchedPairData { m: d.m.clone(), v: d.v_algebra(), tr: d.tr.clone(), tl: d.tl.clone() };
        let rep = matched_pair_check(&mp).unwrap();
        assert!(rep.direct_verdict());
        assert!(rep.printed_verdict());
        assert!(phi_iso_check(&e, &pr, &d).unwrap().overall());
    }

    #[test]
    fn non_malcev_factor_rejected() {
        let f = Field::prime(5).unwrap();
        // [e1,e2]=e3, [e1,e3]=e1 is not Malcev over GF(5)
        let bad = MalcevAlgebra::from_i64(f, 3, &[(0, 1, &[0, 0, 1]), (0, 2, &[1, 0, 0])]);
        assert!(!bad.is_malcev());
        let v = bad.clone().with_names(default_v_names(3)).unwrap();
        let cs = CrossedSystem {
            m: MalcevAlgebra::abelian(f, 1),
            v,
            tl: BilinearMap::zero(f, 1, 3, 1),
            omega: SkewMap::zero(f, 3, 1),
        };
        assert_eq!(crossed_product(&cs).unwrap_err(), Error::FactorNotMalcev("V"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn specializations_match_unified(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=2) {
            let f = Field::prime(5).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = sample::algebra(&mut rng, f, n);
            let v = sample::algebra(&mut rng, f, k).with_names(default_v_names(k)).unwrap();
            let tl = sample::bilinear(&mut rng, f, n, k, n);
            let tr = sample::bilinear(&mut rng, f, n, k, k);
            let omega = sample::skew(&mut rng, f, k, n);
            let mut d = ExtendingDatum::zero(m.clone(), v.names().to_vec());
            d.bv = v.table().clone();
            d.tl = tl.clone();
            d.omega = omega.clone();
            let cs = CrossedSystem { m: m.clone(), v: v.clone(), tl: tl.clone(), omega: omega.clone() };
            prop_assert_eq!(build_unified(&cs.datum().unwrap()).unwrap(), build_unified(&d).unwrap());
            d.tl = BilinearMap::zero(f, n, k, n);
            d.tr = tr.clone();
            let ss = SkewCrossedSystem { m: m.clone(), v: v.clone(), tr: tr.clone(), omega };
            prop_assert_eq!(build_unified(&ss.datum().unwrap()).unwrap(), build_unified(&d).unwrap());
            d.tl = tl.clone();
            d.omega = SkewMap::zero(f, k, n);
            let mp = MatchedPairData { m, v, tr, tl };
            prop_assert_eq!(bicrossed_product(&mp).unwrap(), build_unified(&d).unwrap());
        }
    }
}
