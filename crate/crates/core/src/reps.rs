//! Left modules, semidirect products, 2-cocycles and cocycle extensions.

use crate::algebra::MalcevAlgebra;
use crate::bilinear::{BilinearMap, SkewMap};
use crate::cond::{check_all, Condition, Env, Omega};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::report::{DualReport, VerificationReport};
use crate::unified::{assemble, default_v_names};

/// `⊳ : M x V -> V` on a named space `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleAction {
    pub v_names: Vec<String>,
    pub action: BilinearMap,
}

impl ModuleAction {
    pub fn zero(m: &MalcevAlgebra, k: usize) -> ModuleAction {
        ModuleAction { v_names: default_v_names(k), action: BilinearMap::zero(m.field(), m.dim(), k, k) }
    }

    pub fn new(v_names: Vec<String>, action: BilinearMap) -> Result<ModuleAction> {
        crate::algebra::validate_names(&v_names)?;
        let k = v_names.len();
        if action.right_dim() != k || action.out_dim() != k {
            return Err(Error::DimensionMismatch(format!(
                "action maps into {}-dim space but V has dimension {k}",
                action.out_dim()
            )));
        }
        Ok(ModuleAction { v_names, action })
    }

    /// From the matrices `ρ(e_i)`, columns indexed by the basis of `V`.
    pub fn from_matrices(v_names: Vec<String>, rho: &[Matrix]) -> Result<ModuleAction> {
        let k = v_names.len();
        let Some(first) = rho.first() else {
            return Err(Error::DimensionMismatch("no matrices".into()));
        };
        let mut action = BilinearMap::zero(first.field(), rho.len(), k, k);
        for (i, r) in rho.iter().enumerate() {
            if r.rows() != k || r.cols() != k {
                return Err(Error::DimensionMismatch(format!("ρ(e{}) is not {k}x{k}", i + 1)));
            }
            for a in 0..k {
                action.set(i, a, &r.column(a))?;
            }
        }
        ModuleAction::new(v_names, action)
    }

    /// `y ⊳ q := [y, q]` on a renamed copy of `m`.
    pub fn adjoint(m: &MalcevAlgebra) -> ModuleAction {
        let n = m.dim();
        let mut action = BilinearMap::zero(m.field(), n, n, n);
        for i in 0..n {
            for j in 0..n {
                action.set(i, j, &m.basis_bracket(i, j)).expect("shape");
            }
        }
        ModuleAction { v_names: default_v_names(n), action }
    }

    pub fn dim(&self) -> usize {
        self.v_names.len()
    }

    /// Matrix of `ρ(e_i)`.
    pub fn rho(&self, i: usize) -> Matrix {
        let cols: Vec<_> = (0..self.dim()).map(|a| self.action.get(i, a)).collect();
        Matrix::from_columns(self.action.field(), self.dim(), &cols)
    }

    fn compatible(&self, m: &MalcevAlgebra) -> Result<()> {
        if self.action.field() != m.field() {
            return Err(Error::FieldMismatch { left: m.field(), right: self.action.field() });
        }
        if self.action.left_dim() != m.dim() {
            return Err(Error::DimensionMismatch(format!(
                "action is defined on a {}-dim algebra, got dimension {}",
                self.action.left_dim(),
                m.dim()
            )));
        }
        if let Some(clash) = self.v_names.iter().find(|v| m.index_of(v).is_some()) {
            return Err(Error::InvalidAlgebra(format!("name {clash} used in both M and V")));
        }
        Ok(())
    }
}

/// Skew `ω : M x M -> V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub omega: SkewMap,
}

impl Cocycle {
    pub fn zero(m: &MalcevAlgebra, k: usize) -> Cocycle {
        Cocycle { omega: SkewMap::zero(m.field(), m.dim(), k) }
    }

    fn compatible(&self, m: &MalcevAlgebra, act: &ModuleAction) -> Result<()> {
        if self.omega.field() != m.field() {
            return Err(Error::FieldMismatch { left: m.field(), right: self.omega.field() });
        }
        if self.omega.dim() != m.dim() || self.omega.out_dim() != act.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cocycle has shape {}x{} -> {}, expected {}x{} -> {}",
                self.omega.dim(),
                self.omega.dim(),
                self.omega.out_dim(),
                m.dim(),
                m.dim(),
                act.dim()
            )));
        }
        Ok(())
    }
}

pub const EQ4: Condition =
    Condition::new("eq4", "x y z q", "[x,z]>(y>q) = [[x,y],z]>q - x>([y,z]>q) + z>(y>(x>q))");

pub const COCYCLE: Condition = Condition::new(
    "cocycle",
    "x y z t",
    "om([x,z],[y,t]) + [t,y]>om(x,z) + [x,z]>om(y,t) = om([[x,y],z],t) + om([[y,z],t],x) + om([[z,t],x],y) \
     + om([[t,x],y],z) + x>(t>om(y,z)) - x>om([y,z],t) + z>(y>om(t,x)) - z>om([t,x],y) \
     + t>(z>om(x,y)) - t>om([x,y],z) + y>(x>om(z,t)) - y>om([z,t],x)",
);

fn env<'a>(m: &'a MalcevAlgebra, act: &'a ModuleAction) -> Env<'a> {
    Env::new(m, act.v_names.clone()).tr(&act.action)
}

/// The module identity as printed, on all basis tuples `(x, y, z, q)`.
pub fn check_module(m: &MalcevAlgebra, act: &ModuleAction) -> Result<VerificationReport> {
    act.compatible(m)?;
    Ok(check_all(&[EQ4], &env(m, act)))
}

/// `[(x,u),(y,v)] = ([x,y], x⊳v - y⊳u)`.
pub fn semidirect(m: &MalcevAlgebra, act: &ModuleAction) -> Result<MalcevAlgebra> {
    act.compatible(m)?;
    let (f, n, k) = (m.field(), m.dim(), act.dim());
    assemble(m, &act.v_names, &BilinearMap::zero(f, n, k, n), &act.action, &SkewMap::zero(f, k, n), &SkewMap::zero(f, k, k), None)
}

/// The printed module identity next to the Malcev check of the semidirect product.
pub fn diagnose_module(m: &MalcevAlgebra, act: &ModuleAction) -> Result<DualReport> {
    let printed = check_module(m, act)?;
    let direct = VerificationReport::new(vec![semidirect(m, act)?.eq3_check("direct")]);
    Ok(DualReport { printed, direct })
}

/// The cocycle identity on all basis quadruples; the action must pass the module check.
pub fn check_cocycle(m: &MalcevAlgebra, act: &ModuleAction, w: &Cocycle) -> Result<VerificationReport> {
    w.compatible(m, act)?;
    if !check_module(m, act)?.overall() {
        return Err(Error::ModuleAxiomFailed);
    }
    Ok(check_all(&[COCYCLE], &env(m, act).omega(Omega::OnM(&w.omega))))
}

/// `[(x,u),(y,v)] = ([x,y], x⊳v - y⊳u + ω(x,y))`.
pub fn cocycle_extension(m: &MalcevAlgebra, act: &ModuleAction, w: &Cocycle) -> Result<MalcevAlgebra> {
    act.compatible(m)?;
    w.compatible(m, act)?;
    let (f, n, k) = (m.field(), m.dim(), act.dim());
    assemble(
        m,
        &act.v_names,
        &BilinearMap::zero(f, n, k, n),
        &act.action,
        &SkewMap::zero(f, k, n),
        &SkewMap::zero(f, k, k),
        Some(&w.omega),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::Vector;
    use crate::sample;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m4() -> MalcevAlgebra {
        MalcevAlgebra::m4(Field::Rational)
    }

    fn line_action(m: &MalcevAlgebra, entries: &[(usize, i64)]) -> ModuleAction {
        let mut act = ModuleAction::zero(m, 1);
        for &(i, c) in entries {
            act.action.set(i, 0, &Vector::from_i64(m.field(), &[c])).unwrap();
        }
        act
    }

    // Independent evaluation of the module identity with ρ matrices.
    fn eq4_oracle(m: &MalcevAlgebra, act: &ModuleAction) -> bool {
        let n = m.dim();
        let rho_of = |x: &Vector| {
            let mut acc = Matrix::zero(m.field(), act.dim(), act.dim());
            for i in 0..n {
                acc = &acc + &act.rho(i).scale(&x[i]);
            }
            acc
        };
        let e = |i| m.unit(i);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xz = m.bracket(&e(x), &e(z)).unwrap();
                    let xyz = m.bracket(&m.bracket(&e(x), &e(y)).unwrap(), &e(z)).unwrap();
                    let yz = m.bracket(&e(y), &e(z)).unwrap();
                    let lhs = &rho_of(&xz) * &act.rho(y);
                    let rhs = &(&rho_of(&xyz) - &(&act.rho(x) * &rho_of(&yz))) + &(&(&act.rho(z) * &act.rho(y)) * &act.rho(x));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn zero_action_is_a_module() {
        let m = m4();
        let act = ModuleAction::zero(&m, 2);
        assert!(check_module(&m, &act).unwrap().overall());
        let s = semidirect(&m, &act).unwrap();
        assert!(s.is_malcev());
        assert_eq!(s.dim(), 6);
    }

    #[test]
    fn adjoint_action_of_m4() {
        let m = m4();
        let act = ModuleAction::adjoint(&m);
        let rep = check_module(&m, &act).unwrap();
        assert_eq!(rep.overall(), eq4_oracle(&m, &act));
        let s = semidirect(&m, &act).unwrap();
        assert_eq!(s.dim(), 8);
        for i in 0..4 {
            for j in 0..4 {
                let b = s.basis_bracket(i, j);
                assert_eq!(b.slice(0, 4), m.basis_bracket(i, j));
                assert!(b.slice(4, 8).is_zero());
            }
        }
    }

    #[test]
    fn line_module_bracket() {
        let m = m4();
        let act = line_action(&m, &[(0, 1)]);
        let s = semidirect(&m, &act).unwrap();
        let f = m.field();
        assert_eq!(s.basis_bracket(0, 4), Vector::from_i64(f, &[0, 0, 0, 0, 1]));
        for i in 1..4 {
            assert!(s.basis_bracket(i, 4).is_zero());
        }
    }

    #[test]
    fn printed_identity_is_stronger_than_semidirect() {
        // ρ(e1) = 1 on a line over the abelian line: the semidirect product is Lie,
        // yet the printed identity demands ρ(z)ρ(y)ρ(x) = 0.
        let m = MalcevAlgebra::abelian(Field::Rational, 1);
        let act = line_action(&m, &[(0, 1)]);
        let d = diagnose_module(&m, &act).unwrap();
        assert!(d.direct_verdict());
        assert!(!d.printed_verdict());
        assert!(semidirect(&m, &act).unwrap().is_lie());
    }

    #[test]
    fn cocycle_requires_module() {
        let m = MalcevAlgebra::abelian(Field::Rational, 1);
        let act = line_action(&m, &[(0, 1)]);
        assert_eq!(check_cocycle(&m, &act, &Cocycle::zero(&m, 1)), Err(Error::ModuleAxiomFailed));
    }

    #[test]
    fn zero_cocycle_extension_is_semidirect() {
        let f = Field::Rational;
        let m = MalcevAlgebra::abelian(f, 2);
        let rho = vec![Matrix::zero(f, 2, 2), Matrix::from_i64(f, &[&[0, 1], &[0, 0]])];
        let act = ModuleAction::from_matrices(default_v_names(2), &rho).unwrap();
        assert_eq!(act.rho(1), rho[1]);
        let w = Cocycle::zero(&m, 2);
        assert_eq!(cocycle_extension(&m, &act, &w).unwrap(), semidirect(&m, &act).unwrap());
        assert!(check_cocycle(&m, &act, &w).unwrap().overall());
    }

    #[test]
    fn cocycle_extension_bracket() {
        let m = m4();
        let f = m.field();
        let act = ModuleAction::zero(&m, 1);
        let mut w = Cocycle::zero(&m, 1);
        w.omega.set(0, 1, &Vector::from_i64(f, &[1])).unwrap();
        let e = cocycle_extension(&m, &act, &w).unwrap();
        assert_eq!(e.basis_bracket(0, 1), Vector::from_i64(f, &[0, 1, 0, 0, 1]));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(e.basis_bracket(i, j).slice(0, 4), m.basis_bracket(i, j));
            }
        }
    }

    #[test]
    fn abelian_zero_action_any_cocycle() {
        let f = Field::prime(5).unwrap();
        let m = MalcevAlgebra::abelian(f, 3);
        let act = ModuleAction::zero(&m, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = Cocycle { omega: sample::skew(&mut rng, f, 3, 2) };
        assert!(check_cocycle(&m, &act, &w).unwrap().overall());
    }

    #[test]
    fn shape_errors() {
        let m = m4();
        let bad = ModuleAction::new(default_v_names(2), BilinearMap::zero(m.field(), 3, 2, 2)).unwrap();
        assert!(matches!(check_module(&m, &bad), Err(Error::DimensionMismatch(_))));
        let act = ModuleAction::zero(&m, 1);
        let w = Cocycle { omega: SkewMap::zero(m.field(), 4, 2) };
        assert!(matches!(cocycle_extension(&m, &act, &w), Err(Error::DimensionMismatch(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn printed_module_gives_malcev_semidirect(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=2) {
            let f = Field::prime(5).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = sample::malcev_algebra(&mut rng, f, n);
            let act = ModuleAction::new(default_v_names(k), sample::sparse_bilinear(&mut rng, f, n, k, k)).unwrap();
            let printed = check_module(&m, &act).unwrap().overall();
            prop_assert_eq!(printed, eq4_oracle(&m, &act));
            if printed {
                prop_assert!(semidirect(&m, &act).unwrap().is_malcev());
            }
        }

        #[test]
        fn cocycle_iff_extension_is_malcev(seed in any::<u64>(), n in 1usize..=3) {
            let f = Field::prime(5).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = sample::malcev_algebra(&mut rng, f, n);
            let act = ModuleAction::zero(&m, 1);
            let w = Cocycle { omega: sample::sparse_skew(&mut rng, f, n, 1) };
            prop_assert_eq!(
                check_cocycle(&m, &act, &w).unwrap().overall(),
                cocycle_extension(&m, &act, &w).unwrap().is_malcev()
            );
        }
    }
}
