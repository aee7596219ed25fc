use super::{BoundQuiver, Path, PathVector};
use crate::error::QuiverError;
use crate::linalg::{Field, Scalar, Subspace};

/// The quotient algebra kQ/I in its canonical basis of reduced paths
/// (length < n, not behind an ideal pivot), ordered by (length, lex).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientAlgebra {
    bq: BoundQuiver,
    basis: Vec<Path>,
    /// mult[i * dim + j] = coordinates of basis[i] * basis[j], sparse
    mult: Vec<Vec<(usize, Scalar)>>,
    unit: Vec<Scalar>,
}

impl QuotientAlgebra {
    pub fn new(bq: BoundQuiver) -> Result<Self, QuiverError> {
        let field = bq.field();
        let quiver = &bq.quiver;
        let ideal = &bq.ideal;

        // reduced paths: coordinates of each block not behind an ideal pivot
        let mut basis: Vec<Path> = Vec::new();
        for (_, block) in ideal.blocks() {
            let pivots = block.space.pivots();
            for (i, p) in block.paths.iter().enumerate() {
                if !pivots.contains(&i) {
                    basis.push(p.clone());
                }
            }
        }
        basis.sort();

        let index_of = |p: &Path| basis.binary_search(p);
        let to_coords = |v: &PathVector| -> Vec<(usize, Scalar)> {
            v.terms()
                .map(|(p, c)| (index_of(p).expect("normal form lies in the basis"), c.clone()))
                .collect()
        };

        let dim = basis.len();
        let mut mult = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let prod = match basis[i].compose(&basis[j], quiver)? {
                    Some(p) => {
                        let pv = PathVector::single(field, p, field.one());
                        ideal.normal_form(&pv, quiver)
                    }
                    None => PathVector::zero(field),
                };
                mult[i * dim + j] = to_coords(&prod);
            }
        }

        let mut unit = vec![field.zero(); dim];
        for v in 0..quiver.vertex_count() {
            let i = index_of(&Path::trivial(v)).expect("trivial paths are never reduced away");
            unit[i] = field.one();
        }

        let qa = QuotientAlgebra { bq, basis, mult, unit };
        qa.verify_associativity()?;
        Ok(qa)
    }

    fn verify_associativity(&self) -> Result<(), QuiverError> {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                let ij = self.mult_basis(i, j);
                for k in 0..dim {
                    let jk = self.mult_basis(j, k);
                    let left = self.mul_sparse_basis(&ij, k, true);
                    let right = self.mul_sparse_basis(&jk, i, false);
                    if left != right {
                        // cannot happen for a well-formed ideal; treat as a
                        // broken-path symptom to surface the defect loudly
                        return Err(QuiverError::BrokenPath(i * dim * dim + j * dim + k));
                    }
                }
            }
        }
        Ok(())
    }

    fn mul_sparse_basis(&self, v: &[(usize, Scalar)], b: usize, right: bool) -> Vec<Scalar> {
        let field = self.field();
        let mut out = vec![field.zero(); self.dim()];
        for (i, c) in v {
            let table = if right { self.mult_basis(*i, b) } else { self.mult_basis(b, *i) };
            for (k, d) in table {
                out[*k] = out[*k].add(&c.mul(d));
            }
        }
        out
    }

    pub fn bound_quiver(&self) -> &BoundQuiver {
        &self.bq
    }

    pub fn field(&self) -> Field {
        self.bq.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.basis.binary_search(p).ok()
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// Structure constants of basis[i] * basis[j], sparse.
    pub fn mult_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.mult[i * self.dim() + j]
    }

    /// Product of two coordinate vectors.
    pub fn mul_vec(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let field = self.field();
        let mut out = vec![field.zero(); self.dim()];
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

    /// Coordinates of the normal form of a path vector.
    pub fn coords_of(&self, v: &PathVector) -> Vec<Scalar> {
        let field = self.field();
        let nf = self.bq.ideal.normal_form(v, &self.bq.quiver);
        let mut out = vec![field.zero(); self.dim()];
        for (p, c) in nf.terms() {
            let i = self.basis_index(p).expect("normal form lies in the basis");
            out[i] = c.clone();
        }
        out
    }

    pub fn vector_of(&self, coords: &[Scalar]) -> PathVector {
        let mut out = PathVector::zero(self.field());
        for (i, c) in coords.iter().enumerate() {
            out.add_term(self.basis[i].clone(), c.clone());
        }
        out
    }

    /// Subspace spanned by normal forms of all paths of length >= k; k = 0
    /// gives the whole algebra. For kQ/I this is the k-th radical power.
    pub fn radical_power_basis(&self, k: usize) -> Subspace {
        let field = self.field();
        let n = self.bq.ideal.bound();
        if k == 0 {
            return Subspace::full(field, self.dim());
        }
        if k >= n {
            return Subspace::zero(field, self.dim());
        }
        let mut rows = Vec::new();
        for p in self.bq.quiver.enumerate_paths(n - 1, None, None) {
            if p.len() >= k {
                let v = PathVector::single(field, p, field.one());
                let coords = self.coords_of(&v);
                if coords.iter().any(|c| !c.is_zero()) {
                    rows.push(coords);
                }
            }
        }
        Subspace::from_rows(field, self.dim(), rows)
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{AdmissibleIdeal, Quiver};
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn quotient(quiver: Quiver, gens: Vec<PathVector>, bound: usize) -> QuotientAlgebra {
        let ideal = AdmissibleIdeal::new(&quiver, gens, bound, q()).unwrap();
        QuotientAlgebra::new(BoundQuiver::new(quiver, ideal)).unwrap()
    }

    /// Brute-force dimension oracle: #paths below the bound minus the rank of
    /// the span of all truncated two-sided generator multiples, computed over
    /// one flat coordinate system rather than per-block normal-form data.
    fn brute_force_dim(quiver: &Quiver, gens: &[PathVector], bound: usize) -> usize {
        let paths = quiver.enumerate_paths(bound - 1, None, None);
        let all = quiver.enumerate_paths(bound, None, None);
        let mut rows = Vec::new();
        for g in gens {
            for l in &all {
                for r in &all {
                    let lv = PathVector::single(q(), l.clone(), q().one());
                    let rv = PathVector::single(q(), r.clone(), q().one());
                    let prod = lv.mul(g, quiver).unwrap().mul(&rv, quiver).unwrap();
                    let mut coords = vec![q().zero(); paths.len()];
                    let mut nonzero = false;
                    for (p, c) in prod.terms() {
                        if p.len() < bound {
                            let i = paths.binary_search(p).unwrap();
                            coords[i] = c.clone();
                            nonzero = true;
                        }
                    }
                    if nonzero {
                        rows.push(coords);
                    }
                }
            }
        }
        paths.len() - Subspace::from_rows(q(), paths.len(), rows).dim()
    }

    #[test]
    fn a2_dimension() {
        let qa = quotient(a2(), vec![], 2);
        assert_eq!(qa.dim(), 3);
        assert_eq!(brute_force_dim(&a2(), &[], 2), 3);
    }

    #[test]
    fn truncated_loop_dimension_and_basis() {
        let qa = quotient(loop_quiver(), vec![], 3);
        assert_eq!(qa.dim(), 3);
        let expected = vec![
            Path::trivial(0),
            Path::from_edge_indices(vec![0]),
            Path::from_edge_indices(vec![0, 0]),
        ];
        assert_eq!(qa.basis(), &expected[..]);
        assert_eq!(brute_force_dim(&loop_quiver(), &[], 3), 3);
    }

    #[test]
    fn kronecker_rad2_dimension() {
        let qa = quotient(kronecker(), vec![], 2);
        assert_eq!(qa.dim(), 4);
        assert_eq!(brute_force_dim(&kronecker(), &[], 2), 4);
    }

    #[test]
    fn loop_x2_quotient() {
        let x2 = PathVector::single(q(), Path::from_edge_indices(vec![0, 0]), q().one());
        let qa = quotient(loop_quiver(), vec![x2], 3);
        assert_eq!(qa.dim(), 2);
    }

    #[test]
    fn unit_is_sum_of_trivial_paths() {
        let qa = quotient(a2(), vec![], 2);
        let u = qa.unit().to_vec();
        for i in 0..qa.dim() {
            let mut e = vec![q().zero(); qa.dim()];
            e[i] = q().one();
            assert_eq!(qa.mul_vec(&u, &e), e);
            assert_eq!(qa.mul_vec(&e, &u), e);
        }
    }

    #[test]
    fn radical_power_dims_loop3() {
        let qa = quotient(loop_quiver(), vec![], 3);
        let dims: Vec<usize> = (0..=3).map(|k| qa.radical_power_basis(k).dim()).collect();
        assert_eq!(dims, vec![3, 2, 1, 0]);
    }

    #[test]
    fn radical_power_dims_a2() {
        let qa = quotient(a2(), vec![], 2);
        let dims: Vec<usize> = (0..=2).map(|k| qa.radical_power_basis(k).dim()).collect();
        assert_eq!(dims, vec![3, 1, 0]);
    }

    #[test]
    fn radical_powers_multiply_into_higher_powers() {
        use rand::Rng;
        use rand::SeedableRng;
        let x3 = PathVector::single(q(), Path::from_edge_indices(vec![0, 0, 0]), q().one());
        let qa = quotient(loop_quiver(), vec![x3], 4);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for k in 0..3usize {
            for m in 0..3usize {
                let rk = qa.radical_power_basis(k);
                let rm = qa.radical_power_basis(m);
                let rkm = qa.radical_power_basis((k + m).min(4));
                for _ in 0..5 {
                    let pick = |s: &Subspace, rng: &mut rand_chacha::ChaCha8Rng| {
                        let mut v = vec![q().zero(); qa.dim()];
                        for row in s.basis_rows() {
                            let c = q().from_i64(rng.random_range(-2..=2));
                            for (i, x) in row.iter().enumerate() {
                                v[i] = v[i].add(&c.mul(x));
                            }
                        }
                        v
                    };
                    let a = pick(&rk, &mut rng);
                    let b = pick(&rm, &mut rng);
                    assert!(rkm.contains(&qa.mul_vec(&a, &b)));
                }
            }
        }
    }

    #[test]
    fn dimension_bookkeeping() {
        // dim(quotient) + dim(ideal below bound) = #paths below bound
        let x2 = PathVector::single(q(), Path::from_edge_indices(vec![0, 0]), q().one());
        let quiver = loop_quiver();
        let ideal = AdmissibleIdeal::new(&quiver, vec![x2], 4, q()).unwrap();
        let paths_below = quiver.enumerate_paths(3, None, None).len();
        let qa = QuotientAlgebra::new(BoundQuiver::new(quiver, ideal)).unwrap();
        assert_eq!(qa.dim() + qa.bound_quiver().ideal.dim_below_bound(), paths_below);
    }
}
