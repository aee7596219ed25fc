use super::matrix::Matrix;
use super::scalar::{Field, Scalar};
use crate::error::LinAlgError;

/// A subspace of k^n, stored as a reduced row-echelon basis. The rref form is
/// canonical, so subspace equality is basis-matrix equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Matrix, // rref, no zero rows
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace { field, ambient, basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_rows(field: Field, ambient: usize, rows: Vec<Vec<Scalar>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ambient, "row length mismatch");
        }
        if rows.is_empty() {
            return Subspace::zero(field, ambient);
        }
        let (r, pivots) = Matrix::from_rows(field, rows).rref();
        let basis = Matrix::from_fn(field, pivots.len(), ambient, |i, j| r.get(i, j).clone());
        Subspace { field, ambient, basis, pivots }
    }

    pub fn from_matrix_rows(m: &Matrix) -> Self {
        Subspace::from_rows(m.field(), m.cols(), (0..m.rows()).map(|r| m.row(r).to_vec()).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.basis.rows()).map(|r| self.basis.row(r))
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Adjoins one row, keeping the basis in canonical rref form. Returns
    /// false when the row was already in the span.
    pub fn insert_row(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "row length mismatch");
        let mut reduced = self.reduce(v);
        let Some(p) = reduced.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = reduced[p].inv();
        for c in reduced.iter_mut() {
            *c = c.mul(&inv);
        }
        // clear the new pivot column from existing rows
        let mut rows: Vec<Vec<Scalar>> = self.basis_rows().map(<[Scalar]>::to_vec).collect();
        for row in rows.iter_mut() {
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for (c, x) in row.iter_mut().enumerate() {
                    *x = x.sub(&factor.mul(&reduced[c]));
                }
            }
        }
        let pos = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        rows.insert(pos, reduced);
        self.pivots.insert(pos, p);
        self.basis = Matrix::from_rows(self.field, rows);
        true
    }

    /// Residue of `v` after eliminating all pivot coordinates against the
    /// basis. Zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if !out[p].is_zero() {
                let factor = out[p].clone();
                for c in 0..self.ambient {
                    out[c] = out[c].sub(&factor.mul(self.basis.get(i, c)));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_rows().all(|r| self.contains(r))
    }

    /// Coordinates of `v` in the rref basis, when `v` lies in the subspace.
    /// For an rref basis these are just the entries at the pivot columns,
    /// provided the residue vanishes.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check_compatible(other)?;
        let rows = self
            .basis_rows()
            .chain(other.basis_rows())
            .map(<[Scalar]>::to_vec)
            .collect();
        Ok(Subspace::from_rows(self.field, self.ambient, rows))
    }

    /// Zassenhaus intersection: rref the block matrix [[A, A], [B, 0]]; rows
    /// whose left block is zero carry an intersection basis in the right block.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check_compatible(other)?;
        let n = self.ambient;
        let mut rows = Vec::new();
        for r in self.basis_rows() {
            let mut row = r.to_vec();
            row.extend(r.iter().cloned());
            rows.push(row);
        }
        for r in other.basis_rows() {
            let mut row = r.to_vec();
            row.extend(vec![self.field.zero(); n]);
            rows.push(row);
        }
        if rows.is_empty() {
            return Ok(Subspace::zero(self.field, n));
        }
        let (rr, _) = Matrix::from_rows(self.field, rows).rref();
        let mut inter = Vec::new();
        for i in 0..rr.rows() {
            let left_zero = (0..n).all(|c| rr.get(i, c).is_zero());
            let right = rr.row(i)[n..].to_vec();
            if left_zero && right.iter().any(|v| !v.is_zero()) {
                inter.push(right);
            }
        }
        Ok(Subspace::from_rows(self.field, n, inter))
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), LinAlgError> {
        if self.ambient != other.ambient {
            return Err(LinAlgError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        assert_eq!(self.field, other.field, "mixed fields");
        Ok(())
    }
}

/// The quotient `space / sub` of two nested subspaces of k^n, with a fixed
/// choice of representatives and an exact projection.
///
/// Representatives are the basis rows of `space` at the coordinates not hit by
/// the pivots of `sub` expressed in `space`-coordinates; when `space` is the
/// full space this is the usual "non-pivot standard basis vectors" complement.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    space: Subspace,
    sub: Subspace,
    // rref of sub written in space-coordinates
    sub_in_space: Subspace,
    rep_indices: Vec<usize>, // space-basis indices representing the quotient
}

impl QuotientSpace {
    pub fn new(space: Subspace, sub: Subspace) -> Result<Self, LinAlgError> {
        if space.ambient_dim() != sub.ambient_dim() {
            return Err(LinAlgError::AmbientMismatch {
                left: space.ambient_dim(),
                right: sub.ambient_dim(),
            });
        }
        if !space.contains_subspace(&sub) {
            return Err(LinAlgError::NotNested);
        }
        let k = space.dim();
        let coords: Vec<Vec<Scalar>> = sub
            .basis_rows()
            .map(|r| space.coords_of(r).expect("nested subspace"))
            .collect();
        let sub_in_space = Subspace::from_rows(space.field(), k, coords);
        let rep_indices = (0..k).filter(|i| !sub_in_space.pivots().contains(i)).collect();
        Ok(QuotientSpace { space, sub, sub_in_space, rep_indices })
    }

    /// Quotient of the full ambient space by `sub`.
    pub fn of_full(sub: Subspace) -> Self {
        let full = Subspace::full(sub.field(), sub.ambient_dim());
        QuotientSpace::new(full, sub).expect("full space contains everything")
    }

    pub fn dim(&self) -> usize {
        self.rep_indices.len()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    /// Project an ambient vector (which must lie in `space`) to quotient
    /// coordinates.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let coords = self
            .space
            .coords_of(v)
            .expect("vector must lie in the quotient's total space");
        let reduced = self.sub_in_space.reduce(&coords);
        self.rep_indices.iter().map(|&i| reduced[i].clone()).collect()
    }

    /// The chosen representative of quotient coordinates, as an ambient vector.
    pub fn embed(&self, q: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(q.len(), self.dim(), "quotient coordinate length mismatch");
        let field = self.space.field();
        let mut out = vec![field.zero(); self.space.ambient_dim()];
        for (qi, &bi) in self.rep_indices.iter().enumerate() {
            if q[qi].is_zero() {
                continue;
            }
            let row = self.space.basis_matrix().row(bi);
            for c in 0..out.len() {
                out[c] = out[c].add(&q[qi].mul(&row[c]));
            }
        }
        out
    }

    /// Representative of the `i`-th quotient basis vector.
    pub fn rep(&self, i: usize) -> Vec<Scalar> {
        self.space.basis_matrix().row(self.rep_indices[i]).to_vec()
    }

    /// Projection composed with a matrix whose columns are ambient vectors.
    pub fn project_matrix(&self, m: &Matrix) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..m.cols()).map(|c| self.project(&m.col(c))).collect();
        Matrix::from_fn(m.field(), self.dim(), m.cols(), |r, c| cols[c][r].clone())
    }

    /// Matrix whose columns are the representatives of the quotient basis.
    pub fn embed_matrix(&self) -> Matrix {
        let field = self.space.field();
        Matrix::from_fn(field, self.space.ambient_dim(), self.dim(), |r, c| self.rep(c)[r].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn vecq(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    #[test]
    fn equality_and_containment() {
        let s1 = Subspace::from_rows(q(), 2, vec![vecq(&[1, 0])]);
        let s2 = Subspace::from_rows(q(), 2, vec![vecq(&[2, 0])]);
        assert_eq!(s1, s2);
        assert!(!s1.contains(&vecq(&[0, 1])));
        let sum = s1.sum(&Subspace::from_rows(q(), 2, vec![vecq(&[0, 1])])).unwrap();
        assert_eq!(sum, Subspace::full(q(), 2));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s1 = Subspace::zero(q(), 2);
        let s2 = Subspace::zero(q(), 3);
        assert!(s1.sum(&s2).is_err());
        assert!(s1.intersect(&s2).is_err());
    }

    #[test]
    fn intersection_of_planes() {
        // span{(1,0,0),(0,1,0)} ∩ span{(0,1,0),(0,0,1)} = span{(0,1,0)}
        let a = Subspace::from_rows(q(), 3, vec![vecq(&[1, 0, 0]), vecq(&[0, 1, 0])]);
        let b = Subspace::from_rows(q(), 3, vec![vecq(&[0, 1, 0]), vecq(&[0, 0, 1])]);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, Subspace::from_rows(q(), 3, vec![vecq(&[0, 1, 0])]));
    }

    #[test]
    fn quotient_project_embed() {
        // k^3 / span{(1,1,0)}: representatives at coordinates 1 and 2
        let sub = Subspace::from_rows(q(), 3, vec![vecq(&[1, 1, 0])]);
        let quo = QuotientSpace::of_full(sub);
        assert_eq!(quo.dim(), 2);
        let v = vecq(&[3, 5, 7]);
        let p = quo.project(&v);
        // v - 3*(1,1,0) = (0,2,7)
        assert_eq!(p, vecq(&[2, 7]));
        let back = quo.embed(&p);
        // representative differs from v by the subspace
        let diff: Vec<Scalar> = v.iter().zip(&back).map(|(a, b)| a.sub(b)).collect();
        assert!(quo.sub().contains(&diff));
        // projection of the representative is the identity
        assert_eq!(quo.project(&back), p);
    }

    #[test]
    fn nested_quotient() {
        // space = span{(1,0,0),(0,1,0)}, sub = span{(1,1,0)}: dim 1 quotient
        let space = Subspace::from_rows(q(), 3, vec![vecq(&[1, 0, 0]), vecq(&[0, 1, 0])]);
        let sub = Subspace::from_rows(q(), 3, vec![vecq(&[1, 1, 0])]);
        let quo = QuotientSpace::new(space, sub).unwrap();
        assert_eq!(quo.dim(), 1);
        let p = quo.project(&vecq(&[2, 5, 0]));
        assert_eq!(p.len(), 1);
        assert_eq!(p[0], q().from_i64(3)); // (2,5,0) = 2*(1,1,0) + 3*(0,1,0)
    }

    #[test]
    fn insert_row_matches_batch_rref() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = 5;
            let rows: Vec<Vec<Scalar>> = (0..7)
                .map(|_| (0..n).map(|_| q().from_i64(rng.random_range(-2..=2))).collect())
                .collect();
            let batch = Subspace::from_rows(q(), n, rows.clone());
            let mut incremental = Subspace::zero(q(), n);
            for r in &rows {
                incremental.insert_row(r);
            }
            assert_eq!(batch, incremental);
        }
    }

    #[test]
    fn quotient_rejects_non_nested() {
        let space = Subspace::from_rows(q(), 3, vec![vecq(&[1, 0, 0])]);
        let sub = Subspace::from_rows(q(), 3, vec![vecq(&[0, 1, 0])]);
        assert!(QuotientSpace::new(space, sub).is_err());
    }
}
