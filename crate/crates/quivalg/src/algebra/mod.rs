//! Finite dimensional algebras given by structure constants: validation,
//! Jacobson radicals, radical filtrations, primitive idempotent lifting,
//! lifting data (δ¹, δ²), and the bound-quiver presentation.

mod data;
mod gabriel;
mod idempotents;

pub use data::AlgebraWithQuiverData;
pub use gabriel::{gabriel_presentation, GabrielPresentation};
pub use idempotents::{find_primitive_idempotents, PrimitiveIdempotents};

use crate::error::AlgebraError;
use crate::linalg::{Field, Matrix, Scalar, Subspace};
use crate::quiver::QuotientAlgebra;

/// An associative unital algebra in a fixed basis, multiplication stored as
/// sparse structure constants.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteDimAlgebra {
    field: Field,
    labels: Vec<String>,
    /// mult[i * dim + j] = coordinates of e_i * e_j
    mult: Vec<Vec<(usize, Scalar)>>,
    unit: Vec<Scalar>,
}

impl FiniteDimAlgebra {
    pub fn new(
        field: Field,
        labels: Vec<String>,
        mult: Vec<Vec<(usize, Scalar)>>,
        unit: Vec<Scalar>,
    ) -> Result<Self, AlgebraError> {
        let dim = labels.len();
        if mult.len() != dim * dim || unit.len() != dim {
            return Err(AlgebraError::IndexOutOfRange(mult.len().max(unit.len())));
        }
        for entry in &mult {
            for (k, _) in entry {
                if *k >= dim {
                    return Err(AlgebraError::IndexOutOfRange(*k));
                }
            }
        }
        Ok(FiniteDimAlgebra { field, labels, mult, unit })
    }

    /// Re-encodes a quotient algebra kQ/I by its structure constants.
    pub fn from_quotient(qa: &QuotientAlgebra) -> Self {
        let dim = qa.dim();
        let labels = qa
            .basis()
            .iter()
            .map(|p| qa.bound_quiver().quiver.path_string(p))
            .collect();
        let mut mult = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                mult.push(qa.mult_basis(i, j).to_vec());
            }
        }
        FiniteDimAlgebra { field: qa.field(), labels, mult, unit: qa.unit().to_vec() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn mult_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.mult[i * self.dim() + j]
    }

    pub fn mul_vec(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let cab = ca.mul(cb);
                for (k, c) in self.mult_basis(i, j) {
                    out[*k] = out[*k].add(&cab.mul(c));
                }
            }
        }
        out
    }

    /// Left multiplication operator by the coordinate vector `a`.
    pub fn left_mult_matrix(&self, a: &[Scalar]) -> Matrix {
        let dim = self.dim();
        let mut m = Matrix::zeros(self.field, dim, dim);
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for j in 0..dim {
                for (k, c) in self.mult_basis(i, j) {
                    let v = m.get(*k, j).add(&ca.mul(c));
                    m.set(*k, j, v);
                }
            }
        }
        m
    }

    pub fn right_mult_matrix(&self, b: &[Scalar]) -> Matrix {
        let dim = self.dim();
        let mut m = Matrix::zeros(self.field, dim, dim);
        for (j, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            for i in 0..dim {
                for (k, c) in self.mult_basis(i, j) {
                    let v = m.get(*k, i).add(&cb.mul(c));
                    m.set(*k, i, v);
                }
            }
        }
        m
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    /// Verifies associativity over all basis triples and the two-sided unit
    /// law, reporting the first failure.
    pub fn check(&self) -> Result<(), AlgebraError> {
        let dim = self.dim();
        for i in 0..dim {
            let e = self.basis_vector(i);
            if self.mul_vec(&self.unit, &e) != e {
                return Err(AlgebraError::UnitLaw(i));
            }
            if self.mul_vec(&e, &self.unit) != e {
                return Err(AlgebraError::UnitLaw(i));
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let ij = self.mul_vec(&self.basis_vector(i), &self.basis_vector(j));
                for k in 0..dim {
                    let jk = self.mul_vec(&self.basis_vector(j), &self.basis_vector(k));
                    let left = self.mul_vec(&ij, &self.basis_vector(k));
                    let right = self.mul_vec(&self.basis_vector(i), &jk);
                    if left != right {
                        return Err(AlgebraError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// The Jacobson radical from structure constants, over characteristic
    /// zero only: the kernel of the trace form (x, y) ↦ trace(L_x L_y).
    /// Nilpotency of the result is verified. Over a prime field the radical
    /// must come from a bound-quiver construction instead.
    pub fn radical(&self) -> Result<Subspace, AlgebraError> {
        if !matches!(self.field, Field::Rational) {
            return Err(AlgebraError::UnsupportedField);
        }
        let dim = self.dim();
        let left_mults: Vec<Matrix> =
            (0..dim).map(|i| self.left_mult_matrix(&self.basis_vector(i))).collect();
        let gram = Matrix::from_fn(self.field, dim, dim, |i, j| {
            let prod = left_mults[i].mul(&left_mults[j]);
            let mut tr = self.field.zero();
            for d in 0..dim {
                tr = tr.add(prod.get(d, d));
            }
            tr
        });
        let rad = gram.kernel();
        // verify nilpotency: the chain of powers must reach zero
        let powers = self.radical_powers(&rad)?;
        if powers.last().is_some_and(|s| s.dim() != 0) {
            return Err(AlgebraError::RadicalNotNilpotent);
        }
        Ok(rad)
    }

    /// The chain rad ⊇ rad² ⊇ … down to (and including) the first zero power.
    /// Its length is the nilpotency degree.
    pub fn radical_powers(&self, rad: &Subspace) -> Result<Vec<Subspace>, AlgebraError> {
        let mut out = vec![rad.clone()];
        while out.last().unwrap().dim() > 0 {
            let next = self.product_subspace(out.last().unwrap(), rad)?;
            if next.dim() >= out.last().unwrap().dim() {
                return Err(AlgebraError::RadicalNotNilpotent);
            }
            out.push(next);
        }
        Ok(out)
    }

    /// Smallest n with rad^n = 0 (1 when the radical is zero).
    pub fn nilpotency_degree(&self, rad: &Subspace) -> Result<usize, AlgebraError> {
        Ok(self.radical_powers(rad)?.len())
    }

    /// Span of all products u·v with u in `s1`, v in `s2`.
    pub fn product_subspace(
        &self,
        s1: &Subspace,
        s2: &Subspace,
    ) -> Result<Subspace, AlgebraError> {
        let mut rows = Vec::new();
        for u in s1.basis_rows() {
            for v in s2.basis_rows() {
                rows.push(self.mul_vec(u, v));
            }
        }
        Ok(Subspace::from_rows(self.field, self.dim(), rows))
    }
}

#[cfg(test)]
pub(crate) mod test_fixtures {
    use super::*;

    /// Upper triangular 2x2 matrices, basis (e11, e12, e22).
    pub fn upper_triangular() -> FiniteDimAlgebra {
        let f = Field::Rational;
        let dim = 3;
        let one = f.one();
        let mut mult = vec![Vec::new(); dim * dim];
        // e11*e11 = e11, e11*e12 = e12, e12*e22 = e12, e22*e22 = e22
        mult[0] = vec![(0, one.clone())];
        mult[1] = vec![(1, one.clone())];
        mult[5] = vec![(1, one.clone())];
        mult[8] = vec![(2, one.clone())];
        let unit = vec![f.one(), f.zero(), f.one()];
        FiniteDimAlgebra::new(
            f,
            vec!["e11".into(), "e12".into(), "e22".into()],
            mult,
            unit,
        )
        .unwrap()
    }

    /// k^n with coordinatewise multiplication.
    pub fn diagonal(n: usize) -> FiniteDimAlgebra {
        let f = Field::Rational;
        let mut mult = vec![Vec::new(); n * n];
        for i in 0..n {
            mult[i * n + i] = vec![(i, f.one())];
        }
        FiniteDimAlgebra::new(
            f,
            (0..n).map(|i| format!("d{i}")).collect(),
            mult,
            vec![f.one(); n],
        )
        .unwrap()
    }

    /// Full 2x2 matrix algebra, basis (e11, e12, e21, e22).
    pub fn full_matrix_2() -> FiniteDimAlgebra {
        let f = Field::Rational;
        let one = f.one();
        let dim = 4;
        let idx = |r: usize, c: usize| r * 2 + c;
        let mut mult = vec![Vec::new(); dim * dim];
        for r in 0..2 {
            for c in 0..2 {
                for r2 in 0..2 {
                    for c2 in 0..2 {
                        if c == r2 {
                            mult[idx(r, c) * dim + idx(r2, c2)] = vec![(idx(r, c2), one.clone())];
                        }
                    }
                }
            }
        }
        let mut unit = vec![f.zero(); dim];
        unit[idx(0, 0)] = f.one();
        unit[idx(1, 1)] = f.one();
        FiniteDimAlgebra::new(
            f,
            vec!["e11".into(), "e12".into(), "e21".into(), "e22".into()],
            mult,
            unit,
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_fixtures::*;
    use super::*;
    use crate::quiver::{AdmissibleIdeal, BoundQuiver, Path, PathVector, Quiver};

    fn q() -> Field {
        Field::Rational
    }

    fn loop_mod_xk(k: usize) -> QuotientAlgebra {
        let quiver =
            Quiver::new(vec!["v".into()], vec![("x".into(), "v".into(), "v".into())]).unwrap();
        let gens = vec![PathVector::single(q(), Path::from_edge_indices(vec![0; k]), q().one())];
        let ideal = AdmissibleIdeal::new(&quiver, gens, k + 1, q()).unwrap();
        QuotientAlgebra::new(BoundQuiver::new(quiver, ideal)).unwrap()
    }

    #[test]
    fn fixtures_are_algebras() {
        upper_triangular().check().unwrap();
        diagonal(2).check().unwrap();
        full_matrix_2().check().unwrap();
    }

    #[test]
    fn broken_triple_is_reported() {
        // unit laws hold, but a*a = b, a*b = 0, b*a = u makes (a*a)*a != a*(a*a)
        let f = q();
        let dim = 3;
        let mut mult = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            mult[i] = vec![(i, f.one())]; // u * e_i
            mult[i * dim] = vec![(i, f.one())]; // e_i * u
        }
        mult[dim + 1] = vec![(2, f.one())]; // a*a = b
        mult[dim + 2] = vec![]; // a*b = 0
        mult[2 * dim + 1] = vec![(0, f.one())]; // b*a = u
        mult[2 * dim + 2] = vec![]; // b*b = 0
        let a = FiniteDimAlgebra::new(
            f,
            vec!["u".into(), "a".into(), "b".into()],
            mult,
            vec![f.one(), f.zero(), f.zero()],
        )
        .unwrap();
        assert_eq!(a.check(), Err(AlgebraError::NotAssociative(1, 1, 1)));
    }

    #[test]
    fn radical_of_upper_triangular() {
        let a = upper_triangular();
        let rad = a.radical().unwrap();
        assert_eq!(rad.dim(), 1);
        // span{e12}
        assert!(rad.contains(&[q().zero(), q().one(), q().zero()]));
        // quotient trace form is nondegenerate: rad of chain stabilizes at 0
        let powers = a.radical_powers(&rad).unwrap();
        assert_eq!(powers.len(), 2); // rad (dim 1), rad² = 0
    }

    #[test]
    fn radical_of_semisimple_is_zero() {
        assert_eq!(diagonal(3).radical().unwrap().dim(), 0);
        assert_eq!(full_matrix_2().radical().unwrap().dim(), 0);
    }

    #[test]
    fn radical_of_truncated_loop_matches_arrow_ideal() {
        let qa = loop_mod_xk(2);
        let a = FiniteDimAlgebra::from_quotient(&qa);
        a.check().unwrap();
        let rad = a.radical().unwrap();
        // arrow-ideal route
        assert_eq!(rad, qa.radical_power_basis(1));
        assert_eq!(rad.dim(), 1);
    }

    #[test]
    fn radical_powers_of_loop3() {
        let qa = loop_mod_xk(3);
        let a = FiniteDimAlgebra::from_quotient(&qa);
        let rad = a.radical().unwrap();
        let powers = a.radical_powers(&rad).unwrap();
        let dims: Vec<usize> = powers.iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![2, 1, 0]);
        assert_eq!(a.nilpotency_degree(&rad).unwrap(), 3);
    }

    #[test]
    fn radical_powers_of_a2_path_algebra() {
        let quiver =
            Quiver::new(vec!["1".into(), "2".into()], vec![("a".into(), "1".into(), "2".into())])
                .unwrap();
        let ideal = AdmissibleIdeal::truncation(&quiver, 2, q()).unwrap();
        let qa = QuotientAlgebra::new(BoundQuiver::new(quiver, ideal)).unwrap();
        let a = FiniteDimAlgebra::from_quotient(&qa);
        let rad = a.radical().unwrap();
        let dims: Vec<usize> =
            a.radical_powers(&rad).unwrap().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![1, 0]);
    }

    #[test]
    fn radical_is_a_two_sided_ideal_with_semisimple_quotient() {
        let qa = loop_mod_xk(2);
        let a = FiniteDimAlgebra::from_quotient(&qa);
        let rad = a.radical().unwrap();
        for i in 0..a.dim() {
            let e = a.basis_vector(i);
            for r in rad.basis_rows() {
                assert!(rad.contains(&a.mul_vec(&e, r)));
                assert!(rad.contains(&a.mul_vec(r, &e)));
            }
        }
        // trace form is nondegenerate on the quotient: the radical of the
        // form is exactly rad, so the Gram matrix has corank = dim rad
        let dim = a.dim();
        let gram = Matrix::from_fn(q(), dim, dim, |i, j| {
            let li = a.left_mult_matrix(&a.basis_vector(i));
            let lj = a.left_mult_matrix(&a.basis_vector(j));
            let prod = li.mul(&lj);
            let mut tr = q().zero();
            for d in 0..dim {
                tr = tr.add(prod.get(d, d));
            }
            tr
        });
        assert_eq!(gram.rank(), dim - rad.dim());
    }

    #[test]
    fn prime_field_radical_refused() {
        let f = Field::Prime(5);
        let a = FiniteDimAlgebra::new(
            f,
            vec!["u".into()],
            vec![vec![(0, f.one())]],
            vec![f.one()],
        )
        .unwrap();
        assert!(matches!(a.radical(), Err(AlgebraError::UnsupportedField)));
    }
}
