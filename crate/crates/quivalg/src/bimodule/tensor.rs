use super::BimoduleWithQuiverData;
use crate::error::BimoduleError;
use crate::linalg::{Field, Matrix, QuotientSpace, Scalar, Subspace};

/// Applies op ⊗ id to a vector indexed by (i, j) = i·dim_n + j; op may be
/// rectangular (rows(op) replaces cols(op) in the output indexing).
fn apply_left_factor(op: &Matrix, v: &[Scalar], dim_n: usize) -> Vec<Scalar> {
    let field = op.field();
    debug_assert_eq!(v.len(), op.cols() * dim_n);
    let mut out = vec![field.zero(); op.rows() * dim_n];
    for i in 0..op.cols() {
        for ip in 0..op.rows() {
            let c = op.get(ip, i);
            if c.is_zero() {
                continue;
            }
            for j in 0..dim_n {
                let x = &v[i * dim_n + j];
                if !x.is_zero() {
                    out[ip * dim_n + j] = out[ip * dim_n + j].add(&c.mul(x));
                }
            }
        }
    }
    out
}

/// Applies id ⊗ op to a vector indexed by (i, j) = i·cols(op) + j.
fn apply_right_factor(op: &Matrix, v: &[Scalar], dim_m: usize) -> Vec<Scalar> {
    let field = op.field();
    debug_assert_eq!(v.len(), dim_m * op.cols());
    let mut out = vec![field.zero(); dim_m * op.rows()];
    for j in 0..op.cols() {
        for jp in 0..op.rows() {
            let c = op.get(jp, j);
            if c.is_zero() {
                continue;
            }
            for i in 0..dim_m {
                let x = &v[i * op.cols() + j];
                if !x.is_zero() {
                    out[i * op.rows() + jp] = out[i * op.rows() + jp].add(&c.mul(x));
                }
            }
        }
    }
    out
}

/// A generating set of the middle algebra as an algebra: the lifted
/// idempotents together with the δ² image (for basic algebras these generate,
/// and balancing relations over a generating set span all of them).
fn middle_generators(b: &crate::algebra::AlgebraWithQuiverData) -> Vec<Vec<Scalar>> {
    let mut gens: Vec<Vec<Scalar>> = b.idempotents().to_vec();
    for s in 0..b.quo2().dim() {
        gens.push(b.delta2().col(s));
    }
    gens
}

/// The balanced tensor product M ⊗_B N as a quotient of the plain tensor
/// space by the span of (m·b)⊗n − m⊗(b·n), indexed (i, j) = i·dim N + j.
pub fn balanced_quotient(
    m: &BimoduleWithQuiverData,
    n: &BimoduleWithQuiverData,
) -> QuotientSpace {
    let field = m.field();
    let dim_m = m.dim();
    let dim_n = n.dim();
    let gens = middle_generators(m.right());
    let mut relations = Subspace::zero(field, dim_m * dim_n);
    for g in &gens {
        // rows of (R^M_g ⊗ id) − (id ⊗ L^N_g) applied to each basis tensor
        let mut rm = Matrix::zeros(field, dim_m, dim_m);
        for (i, c) in g.iter().enumerate() {
            if !c.is_zero() {
                rm = rm.add(&m.right_action_matrix(i).scale(c));
            }
        }
        let mut ln = Matrix::zeros(field, dim_n, dim_n);
        for (i, c) in g.iter().enumerate() {
            if !c.is_zero() {
                ln = ln.add(&n.left_action_matrix(i).scale(c));
            }
        }
        for i in 0..dim_m {
            for j in 0..dim_n {
                let mut t = vec![field.zero(); dim_m * dim_n];
                t[i * dim_n + j] = field.one();
                let a = apply_left_factor(&rm, &t, dim_n);
                let b = apply_right_factor(&ln, &t, dim_m);
                let row: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x.sub(y)).collect();
                relations.insert_row(&row);
            }
        }
    }
    QuotientSpace::of_full(relations)
}

/// The splitting isomorphisms for a composable pair:
/// f: (M⊗N)/rad(M⊗N) ≅ (M/rad M) ⊗_B (N/rad N) and
/// g: rad(M⊗N)/rad²(M⊗N) ≅ (M/rad M) ⊗_B (rad N/rad² N), with exact inverses.
#[derive(Clone, Debug)]
pub struct SplittingIsos {
    pub f: Matrix,
    pub f_inv: Matrix,
    pub g: Matrix,
    pub g_inv: Matrix,
    /// The tensor quotient Q = M ⊗_B N.
    pub tensor: QuotientSpace,
    /// Q/rad Q and rad Q/rad² Q.
    pub q_quo1: QuotientSpace,
    pub q_quo2: QuotientSpace,
    /// Targets: (M/rad M) ⊗ (N/rad N) and (M/rad M) ⊗ (rad N/rad² N), as
    /// quotients of the respective plain tensor spaces by B-balancing.
    pub x1: QuotientSpace,
    pub x2: QuotientSpace,
}

pub fn splitting_isos(
    m: &BimoduleWithQuiverData,
    n: &BimoduleWithQuiverData,
) -> Result<SplittingIsos, BimoduleError> {
    check_middle(m, n)?;
    let field = m.field();
    let dim_m = m.dim();
    let dim_n = n.dim();
    let tensor = balanced_quotient(m, n);
    let qdim = tensor.dim();

    // radical filtration of Q = M ⊗_B N, from the left action of A
    let a = m.left();
    let act_on_q = |coords: &[Scalar], v: &[Scalar]| -> Vec<Scalar> {
        let mut op = Matrix::zeros(field, dim_m, dim_m);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                op = op.add(&m.left_action_matrix(i).scale(c));
            }
        }
        let amb = tensor.embed(v);
        tensor.project(&apply_left_factor(&op, &amb, dim_n))
    };
    let power_sub = |power: &Subspace| -> Subspace {
        let mut out = Subspace::zero(field, qdim);
        for r in power.basis_rows() {
            for col in 0..qdim {
                let mut e = vec![field.zero(); qdim];
                e[col] = field.one();
                out.insert_row(&act_on_q(r, &e));
            }
        }
        out
    };
    let rad_q = power_sub(a.rad());
    let rad2_q = power_sub(a.rad2());
    let q_quo1 = QuotientSpace::of_full(rad_q.clone());
    let q_quo2 = QuotientSpace::new(rad_q, rad2_q).map_err(BimoduleError::LinAlg)?;

    // X1 = (M/rad M) ⊗_B (N/rad N): ambient q1M·q1N mod balancing through the
    // quotient actions
    let q1m = m.quo1().dim();
    let q1n = n.quo1().dim();
    let q2n = n.quo2().dim();
    let gens = middle_generators(m.right());
    let mut relations = Subspace::zero(field, q1m * q1n);
    for g in &gens {
        let rm_bar = m.quo1().project_matrix(&{
            let mut op = Matrix::zeros(field, dim_m, dim_m);
            for (i, c) in g.iter().enumerate() {
                if !c.is_zero() {
                    op = op.add(&m.right_action_matrix(i).scale(c));
                }
            }
            op.mul(&m.quo1().embed_matrix())
        });
        let ln_bar = n.quo1().project_matrix(&{
            let mut op = Matrix::zeros(field, dim_n, dim_n);
            for (i, c) in g.iter().enumerate() {
                if !c.is_zero() {
                    op = op.add(&n.left_action_matrix(i).scale(c));
                }
            }
            op.mul(&n.quo1().embed_matrix())
        });
        for i in 0..q1m {
            for j in 0..q1n {
                let mut t = vec![field.zero(); q1m * q1n];
                t[i * q1n + j] = field.one();
                let a1 = apply_left_factor(&rm_bar, &t, q1n);
                let b1 = apply_right_factor(&ln_bar, &t, q1m);
                let row: Vec<Scalar> = a1.iter().zip(&b1).map(|(x, y)| x.sub(y)).collect();
                relations.insert_row(&row);
            }
        }
    }
    let x1 = QuotientSpace::of_full(relations);

    // X2 = (M/rad M) ⊗_B (rad N/rad² N)
    let mut relations = Subspace::zero(field, q1m * q2n);
    for g in &gens {
        let rm_bar = m.quo1().project_matrix(&{
            let mut op = Matrix::zeros(field, dim_m, dim_m);
            for (i, c) in g.iter().enumerate() {
                if !c.is_zero() {
                    op = op.add(&m.right_action_matrix(i).scale(c));
                }
            }
            op.mul(&m.quo1().embed_matrix())
        });
        let ln2_bar = n.quo2().project_matrix(&{
            let mut op = Matrix::zeros(field, dim_n, dim_n);
            for (i, c) in g.iter().enumerate() {
                if !c.is_zero() {
                    op = op.add(&n.left_action_matrix(i).scale(c));
                }
            }
            op.mul(&n.quo2().embed_matrix())
        });
        for i in 0..q1m {
            for j in 0..q2n {
                let mut t = vec![field.zero(); q1m * q2n];
                t[i * q2n + j] = field.one();
                let a2 = apply_left_factor(&rm_bar, &t, q2n);
                let b2 = apply_right_factor(&ln2_bar, &t, q1m);
                let row: Vec<Scalar> = a2.iter().zip(&b2).map(|(x, y)| x.sub(y)).collect();
                relations.insert_row(&row);
            }
        }
    }
    let x2 = QuotientSpace::of_full(relations);

    // f: on Q/rad Q representatives, apply π¹_M ⊗ π¹_N then project to X1
    let pi1m = m.quo1().project_matrix(&Matrix::identity(field, dim_m));
    let pi1n = n.quo1().project_matrix(&Matrix::identity(field, dim_n));
    let mut f = Matrix::zeros(field, x1.dim(), q_quo1.dim());
    for col in 0..q_quo1.dim() {
        let mut e = vec![field.zero(); q_quo1.dim()];
        e[col] = field.one();
        let amb = tensor.embed(&q_quo1.embed(&e));
        let v = apply_right_factor(&pi1n, &apply_left_factor(&pi1m, &amb, dim_n), q1m);
        for (r, c) in x1.project(&v).into_iter().enumerate() {
            f.set(r, col, c);
        }
    }
    // f_inv: on X1 representatives x̄_i ⊗ ȳ_j, embed both and project to Q,
    // then to Q/rad Q
    let mut f_inv = Matrix::zeros(field, q_quo1.dim(), x1.dim());
    for col in 0..x1.dim() {
        let rep = x1.rep(col);
        let mut out = vec![field.zero(); q_quo1.dim()];
        for i in 0..q1m {
            for j in 0..q1n {
                let c = &rep[i * q1n + j];
                if c.is_zero() {
                    continue;
                }
                let mi = m.quo1().embed(&std_vec(field, q1m, i));
                let nj = n.quo1().embed(&std_vec(field, q1n, j));
                let t = plain_tensor(&mi, &nj, field);
                let qv = q_quo1.project(&tensor.project(&t));
                for (r, x) in qv.into_iter().enumerate() {
                    out[r] = out[r].add(&c.mul(&x));
                }
            }
        }
        for (r, c) in out.into_iter().enumerate() {
            f_inv.set(r, col, c);
        }
    }

    // g_inv: X2 → rad Q/rad² Q on representatives x̄_i ⊗ w̄_j ↦ [m ⊗ n]
    let mut g_inv = Matrix::zeros(field, q_quo2.dim(), x2.dim());
    for col in 0..x2.dim() {
        let rep = x2.rep(col);
        let mut out = vec![field.zero(); q_quo2.dim()];
        for i in 0..q1m {
            for j in 0..q2n {
                let c = &rep[i * q2n + j];
                if c.is_zero() {
                    continue;
                }
                let mi = m.quo1().embed(&std_vec(field, q1m, i));
                let nj = n.quo2().embed(&std_vec(field, q2n, j));
                let t = plain_tensor(&mi, &nj, field);
                let qv = q_quo2.project(&tensor.project(&t));
                for (r, x) in qv.into_iter().enumerate() {
                    out[r] = out[r].add(&c.mul(&x));
                }
            }
        }
        for (r, c) in out.into_iter().enumerate() {
            g_inv.set(r, col, c);
        }
    }
    let g = g_inv.inverse().ok_or_else(|| {
        BimoduleError::NotRadicallySymmetric { left: q_quo2.dim(), right: x2.dim() }
    })?;

    if f.mul(&f_inv) != Matrix::identity(field, x1.dim())
        || f_inv.mul(&f) != Matrix::identity(field, q_quo1.dim())
    {
        return Err(BimoduleError::QuiverData {
            condition: 1,
            witness: "top splitting maps are not mutually inverse".into(),
        });
    }

    Ok(SplittingIsos { f, f_inv, g, g_inv, tensor, q_quo1, q_quo2, x1, x2 })
}

/// Composition of 1-morphisms: M ⊗_B N with
/// δ¹ = φ∘(δ¹_M ⊗ δ¹_N)∘f and δ² = φ∘(δ¹_M ⊗ δ²_N)∘g. The output is fully
/// revalidated by construction.
pub fn tensor_compose(
    m: &BimoduleWithQuiverData,
    n: &BimoduleWithQuiverData,
) -> Result<BimoduleWithQuiverData, BimoduleError> {
    let field = m.field();
    let dim_m = m.dim();
    let dim_n = n.dim();
    let isos = splitting_isos(m, n)?;
    let tensor = &isos.tensor;
    let qdim = tensor.dim();

    // labels from the representative coordinates (each rep is one (i, j) pair)
    let labels: Vec<String> = (0..qdim)
        .map(|k| {
            let rep = tensor.rep(k);
            let pos = rep.iter().position(|c| !c.is_zero()).expect("reps are standard vectors");
            format!("{}(x){}", m.labels()[pos / dim_n], n.labels()[pos % dim_n])
        })
        .collect();

    // induced actions
    let left_action: Vec<Matrix> = (0..m.left().dim())
        .map(|i| {
            let op = m.left_action_matrix(i);
            Matrix::from_fn(field, qdim, qdim, |r, c| {
                let mut e = vec![field.zero(); qdim];
                e[c] = field.one();
                let amb = tensor.embed(&e);
                tensor.project(&apply_left_factor(op, &amb, dim_n))[r].clone()
            })
        })
        .collect();
    let right_action: Vec<Matrix> = (0..n.right().dim())
        .map(|i| {
            let op = n.right_action_matrix(i);
            Matrix::from_fn(field, qdim, qdim, |r, c| {
                let mut e = vec![field.zero(); qdim];
                e[c] = field.one();
                let amb = tensor.embed(&e);
                tensor.project(&apply_right_factor(op, &amb, dim_m))[r].clone()
            })
        })
        .collect();

    // δ¹: Q/rad Q → Q via f then δ¹_M ⊗ δ¹_N then φ
    let q1m = m.quo1().dim();
    let q1n = n.quo1().dim();
    let q2n = n.quo2().dim();
    let mut delta1 = Matrix::zeros(field, qdim, isos.q_quo1.dim());
    for col in 0..isos.q_quo1.dim() {
        let fx = isos.f.col(col);
        let mut out = vec![field.zero(); qdim];
        for t in 0..isos.x1.dim() {
            if fx[t].is_zero() {
                continue;
            }
            let rep = isos.x1.rep(t);
            for i in 0..q1m {
                for j in 0..q1n {
                    let c = &rep[i * q1n + j];
                    if c.is_zero() {
                        continue;
                    }
                    let mv = m.delta1().col(i);
                    let nv = n.delta1().col(j);
                    let amb = plain_tensor(&mv, &nv, field);
                    for (r, x) in tensor.project(&amb).into_iter().enumerate() {
                        out[r] = out[r].add(&fx[t].mul(&c.mul(&x)));
                    }
                }
            }
        }
        for (r, c) in out.into_iter().enumerate() {
            delta1.set(r, col, c);
        }
    }

    // δ²: rad Q/rad² Q → Q via g then δ¹_M ⊗ δ²_N then φ
    let mut delta2 = Matrix::zeros(field, qdim, isos.q_quo2.dim());
    for col in 0..isos.q_quo2.dim() {
        let gx = isos.g.col(col);
        let mut out = vec![field.zero(); qdim];
        for t in 0..isos.x2.dim() {
            if gx[t].is_zero() {
                continue;
            }
            let rep = isos.x2.rep(t);
            for i in 0..q1m {
                for j in 0..q2n {
                    let c = &rep[i * q2n + j];
                    if c.is_zero() {
                        continue;
                    }
                    let mv = m.delta1().col(i);
                    let nv = n.delta2().col(j);
                    let amb = plain_tensor(&mv, &nv, field);
                    for (r, x) in tensor.project(&amb).into_iter().enumerate() {
                        out[r] = out[r].add(&gx[t].mul(&c.mul(&x)));
                    }
                }
            }
        }
        for (r, c) in out.into_iter().enumerate() {
            delta2.set(r, col, c);
        }
    }

    BimoduleWithQuiverData::new(
        m.left().clone(),
        n.right().clone(),
        labels,
        left_action,
        right_action,
        delta1,
        delta2,
    )
}

/// Checks that f and g are intertwiners for the induced actions: the A-action
/// on both sides of each square, and the C-action likewise.
pub fn verify_splitting_isos(
    m: &BimoduleWithQuiverData,
    n: &BimoduleWithQuiverData,
) -> Result<(), String> {
    let isos = splitting_isos(m, n).map_err(|e| e.to_string())?;
    let field = m.field();
    let dim_m = m.dim();
    let dim_n = n.dim();
    let tensor = &isos.tensor;

    // operators on Q/rad Q and rad Q/rad² Q induced by a in A (resp. c in C)
    let q_op = |mat: &Matrix, left: bool, quo: &QuotientSpace| -> Matrix {
        let k = quo.dim();
        Matrix::from_fn(field, k, k, |r, c| {
            let mut e = vec![field.zero(); k];
            e[c] = field.one();
            let amb = tensor.embed(&quo.embed(&e));
            let moved = if left {
                apply_left_factor(mat, &amb, dim_n)
            } else {
                apply_right_factor(mat, &amb, dim_m)
            };
            quo.project(&tensor.project(&moved))[r].clone()
        })
    };
    // matching operators on X1 and X2 through the quotient actions of the factors
    let x_op = |bar: &Matrix, left: bool, x: &QuotientSpace, d1: usize, d2: usize| -> Matrix {
        let k = x.dim();
        Matrix::from_fn(field, k, k, |r, c| {
            let mut e = vec![field.zero(); k];
            e[c] = field.one();
            let amb = x.embed(&e);
            let moved = if left {
                apply_left_factor(bar, &amb, d2)
            } else {
                apply_right_factor(bar, &amb, d1)
            };
            x.project(&moved)[r].clone()
        })
    };

    let q1m = m.quo1().dim();
    let q1n = n.quo1().dim();
    let q2n = n.quo2().dim();
    for i in 0..m.left().dim() {
        let op = m.left_action_matrix(i);
        let lhs1 = q_op(op, true, &isos.q_quo1);
        let bar = m
            .quo1()
            .project_matrix(&op.mul(&m.quo1().embed_matrix()));
        let rhs1 = x_op(&bar, true, &isos.x1, q1m, q1n);
        if isos.f.mul(&lhs1) != rhs1.mul(&isos.f) {
            return Err(format!("f does not intertwine the left action of basis {i}"));
        }
        let lhs2 = q_op(op, true, &isos.q_quo2);
        let rhs2 = x_op(&bar, true, &isos.x2, q1m, q2n);
        if isos.g.mul(&lhs2) != rhs2.mul(&isos.g) {
            return Err(format!("g does not intertwine the left action of basis {i}"));
        }
    }
    for i in 0..n.right().dim() {
        let op = n.right_action_matrix(i);
        let lhs1 = q_op(op, false, &isos.q_quo1);
        let bar1 = n
            .quo1()
            .project_matrix(&op.mul(&n.quo1().embed_matrix()));
        let rhs1 = x_op(&bar1, false, &isos.x1, q1m, q1n);
        if isos.f.mul(&lhs1) != rhs1.mul(&isos.f) {
            return Err(format!("f does not intertwine the right action of basis {i}"));
        }
        let lhs2 = q_op(op, false, &isos.q_quo2);
        let bar2 = n
            .quo2()
            .project_matrix(&op.mul(&n.quo2().embed_matrix()));
        let rhs2 = x_op(&bar2, false, &isos.x2, q1m, q2n);
        if isos.g.mul(&lhs2) != rhs2.mul(&isos.g) {
            return Err(format!("g does not intertwine the right action of basis {i}"));
        }
    }
    Ok(())
}

fn check_middle(
    m: &BimoduleWithQuiverData,
    n: &BimoduleWithQuiverData,
) -> Result<(), BimoduleError> {
    if m.right().algebra() != n.left().algebra()
        || m.right().delta1() != n.left().delta1()
        || m.right().delta2() != n.left().delta2()
    {
        return Err(BimoduleError::MiddleMismatch);
    }
    Ok(())
}

fn plain_tensor(a: &[Scalar], b: &[Scalar], field: Field) -> Vec<Scalar> {
    let mut out = vec![field.zero(); a.len() * b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i * b.len() + j] = x.mul(y);
            }
        }
    }
    out
}

fn std_vec(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

#[cfg(test)]
mod tests {
    use super::super::tests::loop_mod_xk_awd;
    use super::super::BimoduleWithQuiverData;
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn unit_tensor_unit_is_unit_sized() {
        let awd = loop_mod_xk_awd(2);
        let a = BimoduleWithQuiverData::unit(&awd).unwrap();
        let t = tensor_compose(&a, &a).unwrap();
        // A ⊗_A A ≅ A
        assert_eq!(t.dim(), a.dim());
        let (r1, r2) = t.rad_filtration();
        assert_eq!(r1.dim(), 1);
        assert_eq!(r2.dim(), 0);
    }

    #[test]
    fn unit_law_up_to_isomorphism() {
        // the multiplication map M ⊗_A A → M is an invertible 2-morphism
        let awd = loop_mod_xk_awd(3);
        let a = BimoduleWithQuiverData::unit(&awd).unwrap();
        let t = tensor_compose(&a, &a).unwrap();
        // multiplication: rep (i, j) ↦ e_i · e_j
        let alg = awd.algebra();
        let mut mul = Matrix::zeros(q(), a.dim(), t.dim());
        for col in 0..t.dim() {
            let rep = isos_rep(&a, &a, col);
            let (i, j) = rep;
            let prod = alg.mul_vec(&alg.basis_vector(i), &alg.basis_vector(j));
            for (r, c) in prod.into_iter().enumerate() {
                mul.set(r, col, c);
            }
        }
        t.check_morphism_to(&a, &mul).unwrap();
        assert!(mul.inverse().is_some());
    }

    fn isos_rep(
        m: &BimoduleWithQuiverData,
        n: &BimoduleWithQuiverData,
        col: usize,
    ) -> (usize, usize) {
        let tensor = balanced_quotient(m, n);
        let rep = tensor.rep(col);
        let pos = rep.iter().position(|c| !c.is_zero()).unwrap();
        (pos / n.dim(), pos % n.dim())
    }

    #[test]
    fn splitting_isos_are_mutually_inverse_and_intertwine() {
        let awd = loop_mod_xk_awd(2);
        let a = BimoduleWithQuiverData::unit(&awd).unwrap();
        verify_splitting_isos(&a, &a).unwrap();
    }

    #[test]
    fn tensor_composition_is_associative_up_to_isomorphism() {
        // the canonical map ((m⊗n)⊗p ↦ m⊗(n⊗p)) on balanced-quotient
        // representatives is an invertible 2-morphism
        let awd = loop_mod_xk_awd(2);
        let m = BimoduleWithQuiverData::unit(&awd).unwrap();
        let mn = tensor_compose(&m, &m).unwrap();
        let np = tensor_compose(&m, &m).unwrap();
        let left = tensor_compose(&mn, &m).unwrap();
        let right = tensor_compose(&m, &np).unwrap();
        let q_mn = balanced_quotient(&m, &m);
        let q_np = balanced_quotient(&m, &m);
        let q_left = balanced_quotient(&mn, &m);
        let q_right = balanced_quotient(&m, &np);
        let field = m.field();
        let dim = m.dim();
        let mut assoc = Matrix::zeros(field, right.dim(), left.dim());
        for col in 0..left.dim() {
            let rep = q_left.rep(col);
            let pos = rep.iter().position(|c| !c.is_zero()).unwrap();
            let (mn_idx, p_idx) = (pos / dim, pos % dim);
            let mn_rep = q_mn.rep(mn_idx);
            let pos2 = mn_rep.iter().position(|c| !c.is_zero()).unwrap();
            let (i, j) = (pos2 / dim, pos2 % dim);
            let mut amb_np = vec![field.zero(); dim * dim];
            amb_np[j * dim + p_idx] = field.one();
            let np_coords = q_np.project(&amb_np);
            let mut amb_right = vec![field.zero(); dim * np.dim()];
            for (t, c) in np_coords.into_iter().enumerate() {
                amb_right[i * np.dim() + t] = c;
            }
            for (r, c) in q_right.project(&amb_right).into_iter().enumerate() {
                assoc.set(r, col, c);
            }
        }
        left.check_morphism_to(&right, &assoc).unwrap();
        assert!(assoc.inverse().is_some());
    }

    #[test]
    fn composite_radical_computed_two_ways() {
        let awd = loop_mod_xk_awd(3);
        let a = BimoduleWithQuiverData::unit(&awd).unwrap();
        let t = tensor_compose(&a, &a).unwrap();
        // rad(M⊗N) from the left action equals the one from the right action;
        // the constructor asserts this, and here the dimension matches rad A
        assert_eq!(t.rad().dim(), awd.rad().dim());
    }
}
