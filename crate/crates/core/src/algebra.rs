//! Anticommutative algebras by structure constants and the Malcev identities.

use std::collections::HashSet;
use std::fmt;

use crate::bilinear::SkewMap;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Vector};
use crate::report::{check_tuples, Check, VerificationReport, Witness};

/// Finite-dimensional anticommutative algebra; only `[e_i, e_j]` with `i < j` is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MalcevAlgebra {
    names: Vec<String>,
    table: SkewMap,
}

/// Names `prefix1 .. prefixN`.
pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub(crate) fn validate_names(names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if n.is_empty() || !seen.insert(n.as_str()) {
            return Err(Error::InvalidAlgebra(format!("basis name {n:?} is empty or repeated")));
        }
    }
    Ok(())
}

impl MalcevAlgebra {
    /// Abelian algebra with the given basis names.
    pub fn new(field: Field, names: Vec<String>) -> Result<MalcevAlgebra> {
        validate_names(&names)?;
        let n = names.len();
        Ok(MalcevAlgebra { names, table: SkewMap::zero(field, n, n) })
    }

    pub fn abelian(field: Field, n: usize) -> MalcevAlgebra {
        MalcevAlgebra::new(field, default_names("e", n)).expect("default names are distinct")
    }

    pub fn from_table(names: Vec<String>, table: SkewMap) -> Result<MalcevAlgebra> {
        validate_names(&names)?;
        if table.dim() != names.len() || table.out_dim() != names.len() {
            return Err(Error::DimensionMismatch(format!(
                "table of shape {}x{}->{} for {} basis names",
                table.dim(),
                table.dim(),
                table.out_dim(),
                names.len()
            )));
        }
        Ok(MalcevAlgebra { names, table })
    }

    /// Builds an algebra from `(i, j, [e_i, e_j])` entries given as integer coordinates.
    pub fn from_i64(field: Field, n: usize, entries: &[(usize, usize, &[i64])]) -> MalcevAlgebra {
        let mut a = MalcevAlgebra::abelian(field, n);
        for &(i, j, v) in entries {
            a.set_bracket(i, j, &Vector::from_i64(field, v)).expect("valid entry");
        }
        a
    }

    /// The non-Lie 4-dimensional Malcev algebra:
    /// `[e1,e2] = e2`, `[e1,e3] = e3`, `[e1,e4] = -e4`, `[e2,e3] = e4`.
    pub fn m4(field: Field) -> MalcevAlgebra {
        MalcevAlgebra::from_i64(
            field,
            4,
            &[
                (0, 1, &[0, 1, 0, 0]),
                (0, 2, &[0, 0, 1, 0]),
                (0, 3, &[0, 0, 0, -1]),
                (1, 2, &[0, 0, 0, 1]),
            ],
        )
    }

    /// Sets `[e_i, e_j]`; `i > j` stores the negated value at `(j, i)`.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: &Vector) -> Result<()> {
        if i == j {
            return Err(Error::InvalidAlgebra(format!("diagonal bracket [{0},{0}] must vanish", self.name(i))));
        }
        if i < j {
            self.table.set(i, j, value)
        } else {
            self.table.set(j, i, &-value)
        }
    }

    pub fn field(&self) -> Field {
        self.table.field()
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn table(&self) -> &SkewMap {
        &self.table
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<MalcevAlgebra> {
        validate_names(&names)?;
        if names.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("{} names for dim {}", names.len(), self.dim())));
        }
        self.names = names;
        Ok(self)
    }

    pub fn unit(&self, i: usize) -> Vector {
        Vector::unit(self.field(), self.dim(), i)
    }

    pub fn zero_vector(&self) -> Vector {
        Vector::zero(self.field(), self.dim())
    }

    /// `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector {
        self.table.get(i, j)
    }

    #[inline]
    pub(crate) fn coeff(&self, i: usize, j: usize) -> &[Scalar] {
        self.table.coeff(i, j)
    }

    pub fn is_abelian(&self) -> bool {
        self.table.is_zero()
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.br(x, y))
    }

    pub(crate) fn check_vector(&self, x: &Vector) -> Result<()> {
        if x.field() != self.field() {
            return Err(Error::FieldMismatch { left: self.field(), right: x.field() });
        }
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!("vector of dim {} in algebra of dim {}", x.dim(), self.dim())));
        }
        Ok(())
    }

    /// Unchecked bracket of compatible vectors.
    pub(crate) fn br(&self, x: &Vector, y: &Vector) -> Vector {
        self.table.apply(x, y)
    }

    /// `[v, e_j]` for an arbitrary `v`.
    pub(crate) fn br_unit(&self, x: &Vector, j: usize) -> Vector {
        let n = self.dim();
        let mut out = self.zero_vector();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for (k, c) in self.coeff(i, j).iter().enumerate() {
                if !c.is_zero() {
                    out[k] += &(&x[i] * c);
                }
            }
        }
        out
    }

    /// `J(x, y, z) = [[x,y],z] + [[y,z],x] + [[z,x],y]`.
    pub fn jacobiator(&self, x: &Vector, y: &Vector, z: &Vector) -> Result<Vector> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        self.check_vector(z)?;
        Ok(self.jac(x, y, z))
    }

    pub(crate) fn jac(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        let a = self.br(&self.br(x, y), z);
        let b = self.br(&self.br(y, z), x);
        let c = self.br(&self.br(z, x), y);
        &(&a + &b) + &c
    }

    /// Matrix of `ad_x = [x, -]` in the column convention.
    pub fn ad(&self, x: &Vector) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.br_unit(x, j)).collect();
        Matrix::from_columns(self.field(), self.dim(), &cols)
    }

    fn arg_name(&self, idx: &[usize]) -> String {
        idx.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join("+")
    }

    /// `J(x,y,[x,z]) = [J(x,y,z), x]`.
    ///
    /// The identity is quadratic in `x`, so `x` ranges over `e_i` and `e_i + e_j`
    /// (`i < j`); by polarization this decides it for all `x` when the
    /// characteristic is not 2. `y` and `z` range over the basis.
    pub fn check_malcev_eq2(&self) -> VerificationReport {
        let n = self.dim();
        let xs: Vec<Vec<usize>> = (0..n)
            .map(|i| vec![i])
            .chain((0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])))
            .collect();
        let check = check_tuples("eq2", &[xs.len(), n, n], |t| {
            let xi = &xs[t[0]];
            let mut x = self.zero_vector();
            for &i in xi {
                x[i] = self.field().one();
            }
            let y = self.unit(t[1]);
            let z = self.unit(t[2]);
            let lhs = self.jac(&x, &y, &self.br(&x, &z));
            let rhs = self.br(&self.jac(&x, &y, &z), &x);
            (lhs != rhs).then(|| {
                Witness::new(
                    vec![xi.clone(), vec![t[1]], vec![t[2]]],
                    vec![self.arg_name(xi), self.names[t[1]].clone(), self.names[t[2]].clone()],
                    lhs,
                    rhs,
                )
            })
        });
        VerificationReport::new(vec![check])
    }

    /// `[[x,z],[y,w]] = [[[x,y],z],w] + [[[y,z],w],x] + [[[z,w],x],y] + [[[w,x],y],z]`
    /// on all basis quadruples.
    pub fn check_malcev_eq3(&self) -> VerificationReport {
        VerificationReport::new(vec![self.eq3_check("eq3")])
    }

    pub(crate) fn eq3_check(&self, id: &str) -> Check {
        let n = self.dim();
        let cube = self.triple_products();
        check_tuples(id, &[n, n, n, n], |t| {
            let (lhs, rhs) = self.eq3_sides(&cube, t[0], t[1], t[2], t[3]);
            (lhs != rhs).then(|| Witness::basis(t, t.iter().map(|&i| self.names[i].clone()).collect(), lhs, rhs))
        })
    }

    /// `cube[(x*n + y)*n + z] = [[e_x, e_y], e_z]`.
    fn triple_products(&self) -> Vec<Vector> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                let xy = self.basis_bracket(x, y);
                for z in 0..n {
                    out.push(self.br_unit(&xy, z));
                }
            }
        }
        out
    }

    fn eq3_sides(&self, cube: &[Vector], x: usize, y: usize, z: usize, w: usize) -> (Vector, Vector) {
        let n = self.dim();
        let c = |a: usize, b: usize, d: usize| &cube[(a * n + b) * n + d];
        let lhs = self.br(&self.basis_bracket(x, z), &self.basis_bracket(y, w));
        let mut rhs = self.br_unit(c(x, y, z), w);
        rhs = &rhs + &self.br_unit(c(y, z, w), x);
        rhs = &rhs + &self.br_unit(c(z, w, x), y);
        rhs = &rhs + &self.br_unit(c(w, x, y), z);
        (lhs, rhs)
    }

    /// `[[x,z],[y,w]]` minus the right-hand side of Eq3, on basis vectors.
    pub(crate) fn eq3_residual(&self, x: usize, y: usize, z: usize, w: usize) -> Vector {
        let lhs = self.br(&self.basis_bracket(x, z), &self.basis_bracket(y, w));
        let c = |a: usize, b: usize, d: usize, e: usize| self.br_unit(&self.br_unit(&self.basis_bracket(a, b), d), e);
        let rhs = &(&c(x, y, z, w) + &c(y, z, w, x)) + &(&c(z, w, x, y) + &c(w, x, y, z));
        &lhs - &rhs
    }

    /// Eq3 with early exit; the verdict equals `check_malcev_eq3().overall()`.
    pub fn is_malcev(&self) -> bool {
        let n = self.dim();
        let cube = self.triple_products();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let (l, r) = self.eq3_sides(&cube, x, y, z, w);
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Jacobiator vanishes on all basis triples.
    pub fn is_lie(&self) -> bool {
        self.jacobi_check().passed
    }

    pub fn jacobi_check(&self) -> Check {
        let n = self.dim();
        check_tuples("jacobi", &[n, n, n], |t| {
            let j = self.jac(&self.unit(t[0]), &self.unit(t[1]), &self.unit(t[2]));
            (!j.is_zero()).then(|| {
                Witness::basis(t, t.iter().map(|&i| self.names[i].clone()).collect(), j, self.zero_vector())
            })
        })
    }

    /// Algebra structure transported along an invertible `phi`: `[a, b]' = phi[phi^-1 a, phi^-1 b]`.
    pub fn transport(&self, phi: &Matrix) -> Result<MalcevAlgebra> {
        let inv = phi.invert()?;
        let n = self.dim();
        let pre: Vec<Vector> = (0..n).map(|i| inv.column(i)).collect();
        let mut out = MalcevAlgebra::new(self.field(), self.names.clone())?;
        for i in 0..n {
            for j in i + 1..n {
                out.set_bracket(i, j, &phi.apply(&self.br(&pre[i], &pre[j])))?;
            }
        }
        Ok(out)
    }

    /// `phi[e_i, e_j] = [phi e_i, phi e_j]'` on all basis pairs, as one check.
    pub fn homomorphism_check(&self, target: &MalcevAlgebra, phi: &Matrix, id: &str) -> Check {
        let n = self.dim();
        let images: Vec<Vector> = (0..n).map(|i| phi.column(i)).collect();
        check_tuples(id, &[n, n], |t| {
            let lhs = phi.apply(&self.basis_bracket(t[0], t[1]));
            let rhs = target.br(&images[t[0]], &images[t[1]]);
            (lhs != rhs).then(|| Witness::basis(t, vec![self.names[t[0]].clone(), self.names[t[1]].clone()], lhs, rhs))
        })
    }

    /// Whether the span of the given basis vectors is closed under the bracket.
    pub fn is_coordinate_subalgebra(&self, idx: &[usize]) -> bool {
        idx.iter().all(|&i| {
            idx.iter().all(|&j| {
                let v = self.basis_bracket(i, j);
                (0..self.dim()).all(|k| idx.contains(&k) || v[k].is_zero())
            })
        })
    }
}

impl fmt::Display for MalcevAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-dim algebra over {}", self.dim(), self.field())
    }
}
