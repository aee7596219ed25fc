use super::idempotents::find_primitive_idempotents;
use super::FiniteDimAlgebra;
use crate::error::AlgebraError;
use crate::linalg::{Field, Matrix, QuotientSpace, Scalar, Subspace};

/// A basic algebra together with lifting data: a multiplicative splitting
/// δ¹: A/rad → A and a δ¹-equivariant splitting δ²: rad/rad² → rad.
/// Instances are fully validated at construction.
#[derive(Clone, Debug)]
pub struct AlgebraWithQuiverData {
    algebra: FiniteDimAlgebra,
    rad: Subspace,
    rad_powers: Vec<Subspace>,
    quo1: QuotientSpace,
    quo2: QuotientSpace,
    delta1: Matrix,
    delta2: Matrix,
    /// Primitive idempotents of A/rad, in quotient coordinates, sorted.
    quotient_idempotents: Vec<Vec<Scalar>>,
    /// f_i = δ¹(e_i), their lifts along the chosen splitting.
    idempotents: Vec<Vec<Scalar>>,
}

impl AlgebraWithQuiverData {
    /// Wraps an algebra with supplied lifting data. The radical is computed
    /// from the trace form when not given (characteristic zero only; quotient
    /// algebra constructions pass the arrow ideal instead).
    pub fn with_data(
        algebra: FiniteDimAlgebra,
        rad: Option<Subspace>,
        delta1: Matrix,
        delta2: Matrix,
    ) -> Result<Self, AlgebraError> {
        algebra.check()?;
        let rad = match rad {
            Some(r) => r,
            None => algebra.radical()?,
        };
        let rad_powers = algebra.radical_powers(&rad)?;
        let rad2 = rad_powers.get(1).cloned().unwrap_or_else(|| {
            Subspace::zero(algebra.field(), algebra.dim())
        });
        let quo1 = QuotientSpace::of_full(rad.clone());
        let quo2 = QuotientSpace::new(rad.clone(), rad2).map_err(AlgebraError::from)?;

        let sys = find_primitive_idempotents(&algebra, &rad)?;
        let idempotents: Vec<Vec<Scalar>> =
            sys.in_quotient.iter().map(|e| delta1.mul_vec(e)).collect();

        let awd = AlgebraWithQuiverData {
            algebra,
            rad,
            rad_powers,
            quo1,
            quo2,
            delta1,
            delta2,
            quotient_idempotents: sys.in_quotient,
            idempotents,
        };
        awd.validate()?;
        Ok(awd)
    }

    /// Builds canonical lifting data from a complete system of lifted
    /// primitive idempotents: δ¹ maps through the idempotent basis, δ² embeds
    /// block by block (f_i · rep · f_j), which makes it equivariant.
    pub fn canonical(
        algebra: FiniteDimAlgebra,
        rad: Option<Subspace>,
    ) -> Result<Self, AlgebraError> {
        algebra.check()?;
        let field = algebra.field();
        let rad = match rad {
            Some(r) => r,
            None => algebra.radical()?,
        };
        let rad_powers = algebra.radical_powers(&rad)?;
        let rad2 = rad_powers
            .get(1)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(field, algebra.dim()));
        let quo1 = QuotientSpace::of_full(rad.clone());
        let quo2 = QuotientSpace::new(rad.clone(), rad2).map_err(AlgebraError::from)?;

        let sys = find_primitive_idempotents(&algebra, &rad)?;
        let m = sys.in_quotient.len();
        debug_assert_eq!(m, quo1.dim(), "split quotient has an idempotent basis");

        // delta1 = F · E⁻¹: F has the lifts as columns, E the quotient
        // idempotents as columns
        let f_mat = Matrix::from_fn(field, algebra.dim(), m, |r, c| sys.lifts[c][r].clone());
        let e_mat = Matrix::from_fn(field, m, m, |r, c| sys.in_quotient[c][r].clone());
        let e_inv = e_mat
            .inverse()
            .expect("primitive idempotents form a basis of the split quotient");
        let delta1 = f_mat.mul(&e_inv);

        // delta2 column s: Σ_{i,j} f_i · rep(e_i z̄_s e_j) · f_j
        let q2 = quo2.dim();
        let mut delta2 = Matrix::zeros(field, algebra.dim(), q2);
        for s in 0..q2 {
            let mut zbar = vec![field.zero(); q2];
            zbar[s] = field.one();
            let w = quo2.embed(&zbar);
            let mut col = vec![field.zero(); algebra.dim()];
            for fi in &sys.lifts {
                for fj in &sys.lifts {
                    let block = algebra.mul_vec(&algebra.mul_vec(fi, &w), fj);
                    let block_class = quo2.project(&block);
                    let rep = quo2.embed(&block_class);
                    let v = algebra.mul_vec(&algebra.mul_vec(fi, &rep), fj);
                    for (t, c) in v.iter().enumerate() {
                        col[t] = col[t].add(c);
                    }
                }
            }
            for (t, c) in col.into_iter().enumerate() {
                delta2.set(t, s, c);
            }
        }

        AlgebraWithQuiverData::with_data(algebra, Some(rad), delta1, delta2)
    }

    /// Checks conditions 1-3 on the lifting data, exactly:
    /// 1. π¹∘δ¹ = id and π²∘δ² = id;
    /// 2. δ¹ is multiplicative on all quotient basis pairs;
    /// 3. δ²(δ¹(x)·z·δ¹(y)) = δ¹(x)·δ²(z)·δ¹(y) on all basis triples.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        let field = self.field();
        let a = &self.algebra;
        let q1 = self.quo1.dim();
        let q2 = self.quo2.dim();

        if self.delta1.rows() != a.dim() || self.delta1.cols() != q1 {
            return Err(AlgebraError::QuiverData {
                condition: 1,
                witness: format!(
                    "δ¹ is {}x{}, expected {}x{q1}",
                    self.delta1.rows(),
                    self.delta1.cols(),
                    a.dim()
                ),
            });
        }
        if self.delta2.rows() != a.dim() || self.delta2.cols() != q2 {
            return Err(AlgebraError::QuiverData {
                condition: 1,
                witness: format!(
                    "δ² is {}x{}, expected {}x{q2}",
                    self.delta2.rows(),
                    self.delta2.cols(),
                    a.dim()
                ),
            });
        }
        for s in 0..q2 {
            if !self.rad.contains(&self.delta2.col(s)) {
                return Err(AlgebraError::QuiverData {
                    condition: 1,
                    witness: format!("δ² column {s} does not land in rad"),
                });
            }
        }
        if self.quo1.project_matrix(&self.delta1) != Matrix::identity(field, q1) {
            return Err(AlgebraError::QuiverData {
                condition: 1,
                witness: "π¹∘δ¹ ≠ id".into(),
            });
        }
        if self.quo2.project_matrix(&self.delta2) != Matrix::identity(field, q2) {
            return Err(AlgebraError::QuiverData {
                condition: 1,
                witness: "π²∘δ² ≠ id".into(),
            });
        }

        // condition 2: multiplicativity of δ¹
        for i in 0..q1 {
            let xi = self.quo1_basis(i);
            let d_xi = self.delta1.mul_vec(&xi);
            for j in 0..q1 {
                let yj = self.quo1_basis(j);
                let d_yj = self.delta1.mul_vec(&yj);
                let prod_bar = self.quo1.project(&a.mul_vec(&self.quo1.embed(&xi), &self.quo1.embed(&yj)));
                let lhs = self.delta1.mul_vec(&prod_bar);
                let rhs = a.mul_vec(&d_xi, &d_yj);
                if lhs != rhs {
                    return Err(AlgebraError::QuiverData {
                        condition: 2,
                        witness: format!("δ¹ not multiplicative on quotient basis pair ({i}, {j})"),
                    });
                }
            }
        }

        // condition 3: equivariance of δ² over δ¹
        for i in 0..q1 {
            let d_xi = self.delta1.mul_vec(&self.quo1_basis(i));
            for j in 0..q1 {
                let d_yj = self.delta1.mul_vec(&self.quo1_basis(j));
                for s in 0..q2 {
                    let w = self.delta2.col(s);
                    let rhs = a.mul_vec(&a.mul_vec(&d_xi, &w), &d_yj);
                    // canonical action of the classes on rad/rad², using any reps
                    let zrep = self.quo2.embed(&{
                        let mut z = vec![field.zero(); q2];
                        z[s] = field.one();
                        z
                    });
                    let acted = a.mul_vec(&a.mul_vec(&d_xi, &zrep), &d_yj);
                    let lhs = self.delta2.mul_vec(&self.quo2.project(&acted));
                    if lhs != rhs {
                        return Err(AlgebraError::QuiverData {
                            condition: 3,
                            witness: format!(
                                "δ² not equivariant on triple (x̄{i}, z̄{s}, ȳ{j})"
                            ),
                        });
                    }
                }
            }
        }

        // the lifted idempotents must be orthogonal idempotents summing to 1
        let mut sum = vec![field.zero(); a.dim()];
        for (i, f) in self.idempotents.iter().enumerate() {
            if a.mul_vec(f, f) != *f {
                return Err(AlgebraError::QuiverData {
                    condition: 2,
                    witness: format!("δ¹ image of idempotent {i} is not idempotent"),
                });
            }
            for (j, g) in self.idempotents.iter().enumerate() {
                if i != j && a.mul_vec(f, g).iter().any(|c| !c.is_zero()) {
                    return Err(AlgebraError::QuiverData {
                        condition: 2,
                        witness: format!("lifted idempotents {i} and {j} are not orthogonal"),
                    });
                }
            }
            for (t, c) in f.iter().enumerate() {
                sum[t] = sum[t].add(c);
            }
        }
        if sum != a.unit() {
            return Err(AlgebraError::QuiverData {
                condition: 2,
                witness: "lifted idempotents do not sum to 1".into(),
            });
        }
        Ok(())
    }

    fn quo1_basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field().zero(); self.quo1.dim()];
        v[i] = self.field().one();
        v
    }

    pub fn algebra(&self) -> &FiniteDimAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn rad(&self) -> &Subspace {
        &self.rad
    }

    pub fn rad2(&self) -> &Subspace {
        self.quo2.sub()
    }

    pub fn rad_powers(&self) -> &[Subspace] {
        &self.rad_powers
    }

    pub fn nilpotency_degree(&self) -> usize {
        self.rad_powers.len()
    }

    /// A/rad with its projection and chosen representatives.
    pub fn quo1(&self) -> &QuotientSpace {
        &self.quo1
    }

    /// rad/rad² with its projection and chosen representatives.
    pub fn quo2(&self) -> &QuotientSpace {
        &self.quo2
    }

    pub fn delta1(&self) -> &Matrix {
        &self.delta1
    }

    pub fn delta2(&self) -> &Matrix {
        &self.delta2
    }

    /// Primitive idempotents of A/rad in quotient coordinates (sorted).
    pub fn quotient_idempotents(&self) -> &[Vec<Scalar>] {
        &self.quotient_idempotents
    }

    /// The lifted idempotents f_i = δ¹(e_i).
    pub fn idempotents(&self) -> &[Vec<Scalar>] {
        &self.idempotents
    }

    pub fn vertex_count(&self) -> usize {
        self.idempotents.len()
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_fixtures::*;
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn canonical_data_on_upper_triangular() {
        let awd = AlgebraWithQuiverData::canonical(upper_triangular(), None).unwrap();
        assert_eq!(awd.vertex_count(), 2);
        assert_eq!(awd.quo1().dim(), 2);
        assert_eq!(awd.quo2().dim(), 1);
        assert_eq!(awd.nilpotency_degree(), 2);
    }

    #[test]
    fn canonical_data_on_diagonal() {
        let awd = AlgebraWithQuiverData::canonical(diagonal(3), None).unwrap();
        assert_eq!(awd.vertex_count(), 3);
        assert_eq!(awd.quo2().dim(), 0);
        // δ¹ is an algebra isomorphism onto A here
        assert_eq!(awd.delta1().rank(), 3);
    }

    #[test]
    fn bad_delta1_reports_condition_2() {
        // replace δ¹ by one sending an idempotent to a non-idempotent lift
        let a = upper_triangular();
        let good = AlgebraWithQuiverData::canonical(a.clone(), None).unwrap();
        let mut d1 = good.delta1().clone();
        // add a radical component to the first column: still splits π¹ but
        // breaks multiplicativity (the image of an idempotent is no longer
        // idempotent)
        d1.set(1, 0, q().one());
        let err = AlgebraWithQuiverData::with_data(a, None, d1, good.delta2().clone());
        match err {
            Err(AlgebraError::QuiverData { condition, .. }) => assert_eq!(condition, 2),
            other => panic!("expected condition 2 violation, got {other:?}"),
        }
    }

    #[test]
    fn bad_delta2_reports_condition_1() {
        // zero out δ²: π²∘δ² ≠ id (drops the arrow)
        let a = upper_triangular();
        let good = AlgebraWithQuiverData::canonical(a.clone(), None).unwrap();
        let d2 = Matrix::zeros(q(), a.dim(), good.quo2().dim());
        let err = AlgebraWithQuiverData::with_data(a, None, good.delta1().clone(), d2);
        match err {
            Err(AlgebraError::QuiverData { condition, .. }) => assert_eq!(condition, 1),
            other => panic!("expected condition 1 violation, got {other:?}"),
        }
    }

    #[test]
    fn full_matrix_algebra_has_no_data() {
        assert!(matches!(
            AlgebraWithQuiverData::canonical(full_matrix_2(), None),
            Err(AlgebraError::QuotientNotCommutative(..))
        ));
    }
}
