use super::BimoduleWithQuiverData;
use crate::error::BimoduleError;
use crate::linalg::{Matrix, QuotientSpace, Scalar, Subspace};

/// A two-sided projective basis living in the δ¹_M-lifted subspace: basis
/// elements b_j (adapted to the right idempotent decomposition), right
/// functionals f_j: M → B with Σ b_j·f_j(m) = m, and left functionals
/// k_j: M → A with Σ k_j(m)·b_j = m. The functionals are module maps,
/// obtained by exact linear solves; their absence is the non-dualizable case.
#[derive(Clone, Debug)]
pub struct ProjectiveBasis {
    pub basis: Vec<Vec<Scalar>>,
    /// Right-idempotent block of each basis element.
    pub block_of: Vec<usize>,
    pub right_functionals: Vec<Matrix>,
    pub left_functionals: Vec<Matrix>,
}

/// Basis of Hom over the right algebra: linear maps F: M → B with
/// F(m·b) = F(m)·b, i.e. F ∘ R^M_β = R^B_β ∘ F for every basis β.
fn right_hom_basis(m: &BimoduleWithQuiverData) -> Vec<Matrix> {
    let field = m.field();
    let dim_m = m.dim();
    let dim_b = m.right().dim();
    let b = m.right().algebra();
    let unknowns = dim_b * dim_m;
    let idx = |r: usize, c: usize| r * dim_m + c;
    let mut rows = Vec::new();
    for beta in 0..dim_b {
        let rm = m.right_action_matrix(beta);
        let rb = b.right_mult_matrix(&b.basis_vector(beta));
        for r in 0..dim_b {
            for c in 0..dim_m {
                let mut row = vec![field.zero(); unknowns];
                let mut nonzero = false;
                // (F ∘ R^M)[r,c] = Σ_t F[r,t]·RM[t,c]
                for t in 0..dim_m {
                    let v = rm.get(t, c);
                    if !v.is_zero() {
                        row[idx(r, t)] = row[idx(r, t)].add(v);
                        nonzero = true;
                    }
                }
                // (R^B ∘ F)[r,c] = Σ_s RB[r,s]·F[s,c]
                for s in 0..dim_b {
                    let v = rb.get(r, s);
                    if !v.is_zero() {
                        row[idx(s, c)] = row[idx(s, c)].sub(v);
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Subspace::full(field, unknowns)
    } else {
        Matrix::from_rows(field, rows).kernel()
    };
    kernel
        .basis_rows()
        .map(|sol| Matrix::from_fn(field, dim_b, dim_m, |r, c| sol[idx(r, c)].clone()))
        .collect()
}

/// Basis of left-module maps F: M → A with F(a·m) = a·F(m).
fn left_hom_basis(m: &BimoduleWithQuiverData) -> Vec<Matrix> {
    let field = m.field();
    let dim_m = m.dim();
    let dim_a = m.left().dim();
    let a = m.left().algebra();
    let unknowns = dim_a * dim_m;
    let idx = |r: usize, c: usize| r * dim_m + c;
    let mut rows = Vec::new();
    for alpha in 0..dim_a {
        let lm = m.left_action_matrix(alpha);
        let la = a.left_mult_matrix(&a.basis_vector(alpha));
        for r in 0..dim_a {
            for c in 0..dim_m {
                let mut row = vec![field.zero(); unknowns];
                let mut nonzero = false;
                for t in 0..dim_m {
                    let v = lm.get(t, c);
                    if !v.is_zero() {
                        row[idx(r, t)] = row[idx(r, t)].add(v);
                        nonzero = true;
                    }
                }
                for s in 0..dim_a {
                    let v = la.get(r, s);
                    if !v.is_zero() {
                        row[idx(s, c)] = row[idx(s, c)].sub(v);
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Subspace::full(field, unknowns)
    } else {
        Matrix::from_rows(field, rows).kernel()
    };
    kernel
        .basis_rows()
        .map(|sol| Matrix::from_fn(field, dim_a, dim_m, |r, c| sol[idx(r, c)].clone()))
        .collect()
}

/// The δ¹-lifted basis adapted to the right idempotent blocks:
/// b_j = δ¹(q̄_j) with q̄_j running over rref bases of (M/rad M)·ē_i.
pub(crate) fn adapted_basis(
    m: &BimoduleWithQuiverData,
) -> Result<(Vec<Vec<Scalar>>, Vec<usize>), BimoduleError> {
    let field = m.field();
    let q1 = m.quo1().dim();
    let mut basis = Vec::new();
    let mut block_of = Vec::new();
    let mut covered = 0usize;
    for (i, fi) in m.right().idempotents().iter().enumerate() {
        // right action of ē_i on M/rad M
        let mut rows = Vec::new();
        for u in 0..q1 {
            let mut e = vec![field.zero(); q1];
            e[u] = field.one();
            let rep = m.quo1().embed(&e);
            rows.push(m.quo1().project(&m.act_right(&rep, fi)));
        }
        let block = Subspace::from_rows(field, q1, rows);
        for q in block.basis_rows() {
            basis.push(m.delta1().mul_vec(q));
            block_of.push(i);
        }
        covered += block.dim();
    }
    if covered != q1 {
        return Err(BimoduleError::QuiverData {
            condition: 2,
            witness: format!(
                "right idempotent blocks of M/rad M cover {covered} of {q1} dimensions"
            ),
        });
    }
    Ok((basis, block_of))
}

/// Computes a two-sided projective basis in the lifted subspace, or reports
/// non-dualizability when the defining systems have no solution.
pub fn projective_basis(m: &BimoduleWithQuiverData) -> Result<ProjectiveBasis, BimoduleError> {
    let field = m.field();
    let dim_m = m.dim();
    let dim_a = m.left().dim();
    let dim_b = m.right().dim();
    let (basis, block_of) = adapted_basis(m)?;
    let j_count = basis.len();

    // right functionals: F_j = Σ_t y_{jt} H_t with Σ_j b_j·F_j(e_k) = e_k
    let homs = right_hom_basis(m);
    let t_count = homs.len();
    let mut sys_rows = Vec::with_capacity(dim_m * dim_m);
    let mut rhs = Vec::with_capacity(dim_m * dim_m);
    // precompute b_j · H_t(e_k)
    let mut applied = vec![vec![vec![]; t_count]; j_count];
    for (j, bj) in basis.iter().enumerate() {
        for (t, h) in homs.iter().enumerate() {
            let mut cols = Vec::with_capacity(dim_m);
            for k in 0..dim_m {
                cols.push(m.act_right(bj, &h.col(k)));
            }
            applied[j][t] = cols;
        }
    }
    for k in 0..dim_m {
        for coord in 0..dim_m {
            let mut row = vec![field.zero(); j_count * t_count];
            for j in 0..j_count {
                for t in 0..t_count {
                    row[j * t_count + t] = applied[j][t][k][coord].clone();
                }
            }
            sys_rows.push(row);
            rhs.push(if k == coord { field.one() } else { field.zero() });
        }
    }
    let sys = Matrix::from_rows(field, sys_rows);
    let Some(y) = sys.solve(&rhs) else {
        return Err(BimoduleError::NotDualizable(
            "no right projective functionals in Hom_B(M, B) complete the lifted basis".into(),
        ));
    };
    let right_functionals: Vec<Matrix> = (0..j_count)
        .map(|j| {
            let mut f = Matrix::zeros(field, dim_b, dim_m);
            for (t, h) in homs.iter().enumerate() {
                if !y[j * t_count + t].is_zero() {
                    f = f.add(&h.scale(&y[j * t_count + t]));
                }
            }
            f
        })
        .collect();

    // left functionals: Σ_j K_j(e_k)·b_j = e_k
    let homs = left_hom_basis(m);
    let t_count = homs.len();
    let mut applied = vec![vec![vec![]; t_count]; j_count];
    for (j, bj) in basis.iter().enumerate() {
        for (t, h) in homs.iter().enumerate() {
            let mut cols = Vec::with_capacity(dim_m);
            for k in 0..dim_m {
                cols.push(m.act_left(&h.col(k), bj));
            }
            applied[j][t] = cols;
        }
    }
    let mut sys_rows = Vec::with_capacity(dim_m * dim_m);
    let mut rhs = Vec::with_capacity(dim_m * dim_m);
    for k in 0..dim_m {
        for coord in 0..dim_m {
            let mut row = vec![field.zero(); j_count * t_count];
            for j in 0..j_count {
                for t in 0..t_count {
                    row[j * t_count + t] = applied[j][t][k][coord].clone();
                }
            }
            sys_rows.push(row);
            rhs.push(if k == coord { field.one() } else { field.zero() });
        }
    }
    let sys = Matrix::from_rows(field, sys_rows);
    let Some(y) = sys.solve(&rhs) else {
        return Err(BimoduleError::NotDualizable(
            "no left projective functionals in Hom_A(M, A) complete the lifted basis".into(),
        ));
    };
    let left_functionals: Vec<Matrix> = (0..j_count)
        .map(|j| {
            let mut f = Matrix::zeros(field, dim_a, dim_m);
            for (t, h) in homs.iter().enumerate() {
                if !y[j * t_count + t].is_zero() {
                    f = f.add(&h.scale(&y[j * t_count + t]));
                }
            }
            f
        })
        .collect();

    let pb = ProjectiveBasis { basis, block_of, right_functionals, left_functionals };
    verify_projective_basis(m, &pb)?;
    Ok(pb)
}

/// Σ_j b_j·f_j(m) = m and Σ_j k_j(m)·b_j = m on the full basis of M.
pub fn verify_projective_basis(
    m: &BimoduleWithQuiverData,
    pb: &ProjectiveBasis,
) -> Result<(), BimoduleError> {
    let field = m.field();
    for k in 0..m.dim() {
        let mut e = vec![field.zero(); m.dim()];
        e[k] = field.one();
        let mut right_sum = vec![field.zero(); m.dim()];
        let mut left_sum = vec![field.zero(); m.dim()];
        for (j, bj) in pb.basis.iter().enumerate() {
            let fj = pb.right_functionals[j].mul_vec(&e);
            for (t, c) in m.act_right(bj, &fj).into_iter().enumerate() {
                right_sum[t] = right_sum[t].add(&c);
            }
            let kj = pb.left_functionals[j].mul_vec(&e);
            for (t, c) in m.act_left(&kj, bj).into_iter().enumerate() {
                left_sum[t] = left_sum[t].add(&c);
            }
        }
        if right_sum != e {
            return Err(BimoduleError::NotDualizable(format!(
                "Σ b_j f_j(m) ≠ m on basis element {k}"
            )));
        }
        if left_sum != e {
            return Err(BimoduleError::NotDualizable(format!(
                "Σ k_j(m) b_j ≠ m on basis element {k}"
            )));
        }
    }
    Ok(())
}

/// The decomposition isomorphism g_M: M ≅ δ¹_M(M/rad M) ⊗_{δ¹_B(B/rad B)} B,
/// g_M(m) = Σ_j b_j ⊗ f_j(m), with its exact inverse b_j ⊗ b ↦ b_j·b.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// dim T × dim M, where T is the balanced tensor target.
    pub g: Matrix,
    /// dim M × dim T.
    pub g_inv: Matrix,
    /// Quotient presentation of the target: ambient k^{J·dimB} mod balancing.
    pub target: QuotientSpace,
    pub basis: ProjectiveBasis,
}

pub fn decompose(m: &BimoduleWithQuiverData) -> Result<Decomposition, BimoduleError> {
    let field = m.field();
    let dim_m = m.dim();
    let dim_b = m.right().dim();
    let pb = projective_basis(m)?;
    let j_count = pb.basis.len();
    let ambient = j_count * dim_b;
    let idx = |j: usize, beta: usize| j * dim_b + beta;

    // balancing over the split subalgebra spanned by the lifted idempotents:
    // (b_j·f_i) ⊗ e_β − b_j ⊗ (f_i·e_β); adaptation makes b_j·f_i = b_j or 0
    let b_alg = m.right().algebra();
    let mut relations = Subspace::zero(field, ambient);
    for (j, &block) in pb.block_of.iter().enumerate() {
        for (i, fi) in m.right().idempotents().iter().enumerate() {
            for beta in 0..dim_b {
                let mut row = vec![field.zero(); ambient];
                if i == block {
                    row[idx(j, beta)] = row[idx(j, beta)].add(&field.one());
                }
                let fib = b_alg.mul_vec(fi, &b_alg.basis_vector(beta));
                for (t, c) in fib.into_iter().enumerate() {
                    row[idx(j, t)] = row[idx(j, t)].sub(&c);
                }
                relations.insert_row(&row);
            }
        }
    }
    let target = QuotientSpace::of_full(relations);

    // g(e_k) = Σ_j b_j ⊗ f_j(e_k)
    let mut g = Matrix::zeros(field, target.dim(), dim_m);
    for k in 0..dim_m {
        let mut e = vec![field.zero(); dim_m];
        e[k] = field.one();
        let mut amb = vec![field.zero(); ambient];
        for j in 0..j_count {
            let fj = pb.right_functionals[j].mul_vec(&e);
            for (beta, c) in fj.into_iter().enumerate() {
                amb[idx(j, beta)] = amb[idx(j, beta)].add(&c);
            }
        }
        for (r, c) in target.project(&amb).into_iter().enumerate() {
            g.set(r, k, c);
        }
    }

    // g_inv on target representatives: b_j ⊗ e_β ↦ b_j·e_β
    let mut g_inv = Matrix::zeros(field, dim_m, target.dim());
    for col in 0..target.dim() {
        let rep = target.rep(col);
        let mut out = vec![field.zero(); dim_m];
        for j in 0..j_count {
            for beta in 0..dim_b {
                let c = &rep[idx(j, beta)];
                if c.is_zero() {
                    continue;
                }
                let v = m.act_right(&pb.basis[j], &b_alg.basis_vector(beta));
                for (t, x) in v.into_iter().enumerate() {
                    out[t] = out[t].add(&c.mul(&x));
                }
            }
        }
        for (t, c) in out.into_iter().enumerate() {
            g_inv.set(t, col, c);
        }
    }

    if g_inv.mul(&g) != Matrix::identity(field, dim_m)
        || g.mul(&g_inv) != Matrix::identity(field, target.dim())
    {
        return Err(BimoduleError::NotDualizable(
            "decomposition maps are not mutually inverse".into(),
        ));
    }
    Ok(Decomposition { g, g_inv, target, basis: pb })
}

#[cfg(test)]
mod tests {
    use super::super::tests::loop_mod_xk_awd;
    use super::super::BimoduleWithQuiverData;
    use super::*;
    use crate::algebra::AlgebraWithQuiverData;
    use crate::linalg::Field;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn unit_bimodule_has_idempotent_projective_basis() {
        let awd = loop_mod_xk_awd(3);
        let m = BimoduleWithQuiverData::unit(&awd).unwrap();
        let pb = projective_basis(&m).unwrap();
        // b = the single idempotent 1, f(a) = a
        assert_eq!(pb.basis.len(), 1);
        assert_eq!(pb.basis[0], awd.idempotents()[0]);
    }

    #[test]
    fn two_vertex_unit_bimodule() {
        let awd = AlgebraWithQuiverData::canonical(
            crate::algebra::FiniteDimAlgebra::new(
                q(),
                vec!["p".into(), "q".into()],
                vec![
                    vec![(0, q().one())],
                    vec![],
                    vec![],
                    vec![(1, q().one())],
                ],
                vec![q().one(), q().one()],
            )
            .unwrap(),
            None,
        )
        .unwrap();
        let m = BimoduleWithQuiverData::unit(&awd).unwrap();
        let pb = projective_basis(&m).unwrap();
        assert_eq!(pb.basis.len(), 2);
    }

    #[test]
    fn simple_right_module_is_not_dualizable() {
        // M = k as (k, loop/(x²))-bimodule with x acting by zero: radically
        // symmetric (both radicals act by zero), valid data, but not
        // projective as a right module: the functional solve has no solution
        let kk = AlgebraWithQuiverData::canonical(
            crate::algebra::FiniteDimAlgebra::new(
                q(),
                vec!["1".into()],
                vec![vec![(0, q().one())]],
                vec![q().one()],
            )
            .unwrap(),
            None,
        )
        .unwrap();
        let a = loop_mod_xk_awd(2);
        let left_action = vec![crate::linalg::Matrix::identity(q(), 1)];
        let right_action = vec![
            crate::linalg::Matrix::identity(q(), 1),
            crate::linalg::Matrix::zeros(q(), 1, 1),
        ];
        let m = BimoduleWithQuiverData::new(
            kk,
            a,
            vec!["s".into()],
            left_action,
            right_action,
            crate::linalg::Matrix::identity(q(), 1),
            crate::linalg::Matrix::zeros(q(), 1, 0),
        )
        .unwrap();
        assert!(matches!(
            projective_basis(&m),
            Err(BimoduleError::NotDualizable(_))
        ));
    }

    #[test]
    fn decompose_unit_bimodule_is_multiplication() {
        let awd = loop_mod_xk_awd(3);
        let m = BimoduleWithQuiverData::unit(&awd).unwrap();
        let d = decompose(&m).unwrap();
        assert_eq!(d.target.dim(), 3);
        // round trips exactly
        let id = crate::linalg::Matrix::identity(q(), 3);
        assert_eq!(d.g_inv.mul(&d.g), id);
    }
}
