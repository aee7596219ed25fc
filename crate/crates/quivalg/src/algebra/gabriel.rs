use super::AlgebraWithQuiverData;
use crate::error::AlgebraError;
use crate::linalg::{Matrix, Scalar, Subspace};
use crate::quiver::{AdmissibleIdeal, BoundQuiver, Path, PathVector, Quiver};

/// The bound-quiver presentation of a basic algebra with lifting data:
/// vertices are the lifted idempotents, arrows a chosen (rref-canonical)
/// basis of each f_a · δ²(rad/rad²) · f_b block, ρ the induced surjection
/// kQ_A → A, and the ideal its kernel below the nilpotency bound.
#[derive(Clone, Debug)]
pub struct GabrielPresentation {
    pub bound_quiver: BoundQuiver,
    /// Surjection matrix: dim A rows, one column per path of length < bound
    /// in `path_order`.
    pub rho: Matrix,
    pub path_order: Vec<Path>,
    /// Vertex id of each idempotent, index-aligned with `idempotents()`.
    pub vertex_ids: Vec<String>,
    /// (arrow id, image element in A), index-aligned with the quiver's edges.
    pub arrow_elements: Vec<(String, Vec<Scalar>)>,
}

impl GabrielPresentation {
    /// Image of an arbitrary path vector under ρ.
    pub fn rho_of(&self, v: &PathVector) -> Vec<Scalar> {
        let field = v.field();
        let mut out = vec![field.zero(); self.rho.rows()];
        for (p, c) in v.terms() {
            let col = self
                .path_order
                .binary_search(p)
                .expect("path below the nilpotency bound");
            for r in 0..self.rho.rows() {
                out[r] = out[r].add(&c.mul(self.rho.get(r, col)));
            }
        }
        out
    }
}

pub fn gabriel_presentation(
    awd: &AlgebraWithQuiverData,
) -> Result<GabrielPresentation, AlgebraError> {
    let field = awd.field();
    let a = awd.algebra();
    let dim = a.dim();
    let m = awd.vertex_count();
    let bound = awd.nilpotency_degree().max(2);

    let vertex_ids: Vec<String> = (0..m).map(|i| format!("v{i:03}")).collect();

    // arrows: rref-canonical basis of f_a · δ²(rad/rad²) · f_b per (a, b)
    let q2 = awd.quo2().dim();
    let delta2_images: Vec<Vec<Scalar>> = (0..q2).map(|s| awd.delta2().col(s)).collect();
    let mut edges = Vec::new();
    let mut arrow_elements = Vec::new();
    let mut counter = 0usize;
    let mut total_arrow_dim = 0usize;
    for (ai, fa) in awd.idempotents().iter().enumerate() {
        for (bi, fb) in awd.idempotents().iter().enumerate() {
            let rows: Vec<Vec<Scalar>> = delta2_images
                .iter()
                .map(|w| a.mul_vec(&a.mul_vec(fa, w), fb))
                .collect();
            let block = Subspace::from_rows(field, dim, rows);
            total_arrow_dim += block.dim();
            for row in block.basis_rows() {
                let id = format!("a{counter:04}");
                edges.push((id.clone(), vertex_ids[ai].clone(), vertex_ids[bi].clone()));
                arrow_elements.push((id, row.to_vec()));
                counter += 1;
            }
        }
    }
    if total_arrow_dim != q2 {
        return Err(AlgebraError::QuiverData {
            condition: 3,
            witness: format!(
                "idempotent blocks of the δ² image span {total_arrow_dim} of {q2} dimensions"
            ),
        });
    }

    let quiver = Quiver::new(vertex_ids.clone(), edges)?;

    // ρ on all paths of length < bound
    let path_order = quiver.enumerate_paths(bound - 1, None, None);
    let arrow_image = |e: usize| -> &Vec<Scalar> {
        let id = &quiver.edge(e).id;
        &arrow_elements
            .iter()
            .find(|(aid, _)| aid == id)
            .expect("every edge has an image")
            .1
    };
    let mut rho = Matrix::zeros(field, dim, path_order.len());
    for (col, p) in path_order.iter().enumerate() {
        let image = match p {
            Path::Trivial(v) => awd.idempotents()[*v].clone(),
            Path::Edges(es) => {
                let mut acc = arrow_image(es[0]).clone();
                for &e in &es[1..] {
                    acc = a.mul_vec(&acc, arrow_image(e));
                }
                acc
            }
        };
        for (r, c) in image.into_iter().enumerate() {
            rho.set(r, col, c);
        }
    }

    // kernel of ρ per endpoint block
    let mut generators = Vec::new();
    let mut kernel_dim = 0usize;
    for s in 0..m {
        for t in 0..m {
            let cols: Vec<usize> = path_order
                .iter()
                .enumerate()
                .filter(|(_, p)| p.source(&quiver) == s && p.target(&quiver) == t)
                .map(|(i, _)| i)
                .collect();
            if cols.is_empty() {
                continue;
            }
            let sub = Matrix::from_fn(field, dim, cols.len(), |r, c| {
                rho.get(r, cols[c]).clone()
            });
            let kernel = sub.kernel();
            kernel_dim += kernel.dim();
            for row in kernel.basis_rows() {
                let mut g = PathVector::zero(field);
                for (ci, coeff) in row.iter().enumerate() {
                    g.add_term(path_order[cols[ci]].clone(), coeff.clone());
                }
                generators.push(g);
            }
        }
    }

    let ideal = AdmissibleIdeal::new(&quiver, generators, bound, field)?;
    if ideal.dim_below_bound() != kernel_dim {
        return Err(AlgebraError::PresentationDimension {
            quotient_dim: path_order.len() - ideal.dim_below_bound(),
            algebra_dim: dim,
        });
    }
    let quotient_dim = path_order.len() - ideal.dim_below_bound();
    if quotient_dim != dim {
        return Err(AlgebraError::PresentationDimension { quotient_dim, algebra_dim: dim });
    }

    Ok(GabrielPresentation {
        bound_quiver: BoundQuiver::new(quiver, ideal),
        rho,
        path_order,
        vertex_ids,
        arrow_elements,
    })
}

#[cfg(test)]
mod tests {
    use super::super::test_fixtures::*;
    use super::super::AlgebraWithQuiverData;
    use super::*;
    use crate::linalg::Field;
    use crate::quiver::QuotientAlgebra;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn upper_triangular_presents_as_a2() {
        let awd = AlgebraWithQuiverData::canonical(upper_triangular(), None).unwrap();
        let pres = gabriel_presentation(&awd).unwrap();
        let quiver = &pres.bound_quiver.quiver;
        assert_eq!(quiver.vertex_count(), 2);
        assert_eq!(quiver.edge_count(), 1);
        // I = 0: kernel below the bound is trivial
        assert_eq!(pres.bound_quiver.ideal.dim_below_bound(), 0);
        // ρ induces an isomorphism on the quotient
        let qa = QuotientAlgebra::new(pres.bound_quiver.clone()).unwrap();
        assert_eq!(qa.dim(), 3);
    }

    #[test]
    fn diagonal_presents_with_no_arrows() {
        let awd = AlgebraWithQuiverData::canonical(diagonal(2), None).unwrap();
        let pres = gabriel_presentation(&awd).unwrap();
        assert_eq!(pres.bound_quiver.quiver.vertex_count(), 2);
        assert_eq!(pres.bound_quiver.quiver.edge_count(), 0);
        assert_eq!(pres.bound_quiver.ideal.dim_below_bound(), 0);
        assert_eq!(pres.bound_quiver.ideal.bound(), 2);
    }

    #[test]
    fn truncated_loop_round_trips() {
        use crate::algebra::FiniteDimAlgebra;
        use crate::quiver::{BoundQuiver, Quiver};
        let quiver =
            Quiver::new(vec!["v".into()], vec![("x".into(), "v".into(), "v".into())]).unwrap();
        let ideal = AdmissibleIdeal::truncation(&quiver, 3, q()).unwrap();
        let qa = QuotientAlgebra::new(BoundQuiver::new(quiver, ideal)).unwrap();
        let a = FiniteDimAlgebra::from_quotient(&qa);
        let rad = qa.radical_power_basis(1);
        let awd = AlgebraWithQuiverData::canonical(a, Some(rad)).unwrap();
        let pres = gabriel_presentation(&awd).unwrap();
        assert_eq!(pres.bound_quiver.quiver.vertex_count(), 1);
        assert_eq!(pres.bound_quiver.quiver.edge_count(), 1);
        assert_eq!(pres.bound_quiver.ideal.bound(), 3);
        assert_eq!(pres.bound_quiver.ideal.dim_below_bound(), 0);
        let round = QuotientAlgebra::new(pres.bound_quiver.clone()).unwrap();
        assert_eq!(round.dim(), 3);
    }

    #[test]
    fn arrow_blocks_match_quotient_block_dimensions() {
        // dim f_a (rad/rad²) f_b is basis independent: compare the arrow
        // count against the quotient-level block dimension
        let awd = AlgebraWithQuiverData::canonical(upper_triangular(), None).unwrap();
        let pres = gabriel_presentation(&awd).unwrap();
        let a = awd.algebra();
        for (ai, fa) in awd.idempotents().iter().enumerate() {
            for (bi, fb) in awd.idempotents().iter().enumerate() {
                // quotient-level block dimension via canonical reps
                let mut rows = Vec::new();
                for s in 0..awd.quo2().dim() {
                    let mut z = vec![q().zero(); awd.quo2().dim()];
                    z[s] = q().one();
                    let w = awd.quo2().embed(&z);
                    let v = a.mul_vec(&a.mul_vec(fa, &w), fb);
                    rows.push(awd.quo2().project(&v));
                }
                let block_dim =
                    Subspace::from_rows(q(), awd.quo2().dim(), rows).dim();
                let arrow_count = pres
                    .bound_quiver
                    .quiver
                    .edges_between(ai, bi)
                    .len();
                assert_eq!(arrow_count, block_dim);
            }
        }
    }
}
