use super::{p_connection, p_morphism, BimoduleImage};
use crate::bimodule::{balanced_quotient, tensor_compose, BimoduleWithQuiverData};
use crate::connection::{ConnectionMorphism, GammaRef, QuiverConnection};
use crate::error::EquivalenceError;
use crate::linalg::{Matrix, Scalar};
use crate::quiver::BoundQuiver;

/// The coherence isomorphism μ: P(Γ⊗Δ) ≅ P(Γ) ⊗ P(Δ), with its exact
/// inverse, both directions checked as bimodule intertwiners.
#[derive(Clone, Debug)]
pub struct MuIso {
    pub matrix: Matrix,
    pub inverse: Matrix,
    pub composite_image: BimoduleImage,
    pub gamma_image: BimoduleImage,
    pub delta_image: BimoduleImage,
    pub tensor: BimoduleWithQuiverData,
}

pub fn mu(
    gamma: &QuiverConnection,
    delta: &QuiverConnection,
    ia: &BoundQuiver,
    ib: &BoundQuiver,
    ic: &BoundQuiver,
) -> Result<MuIso, EquivalenceError> {
    let composite = gamma.compose(delta)?;
    let composite_image = p_connection(&composite, ia, ic)?;
    let gamma_image = p_connection(gamma, ia, ib)?;
    let delta_image = p_connection(delta, ib, ic)?;
    let m = &gamma_image.bimodule;
    let n = &delta_image.bimodule;
    let tensor = tensor_compose(m, n)?;
    let quo = balanced_quotient(m, n);
    let field = gamma.field();

    // simple-tensor assignment: ((γ,δ) at (i,j)) · p ↦ [ (γ·e_k) ⊗ (δ·p) ]
    let mut matrix = Matrix::zeros(field, tensor.dim(), composite_image.bimodule.dim());
    for (col, (comp_gamma, p)) in composite_image.basis.iter().enumerate() {
        let (i, j, index) = (comp_gamma.g, comp_gamma.h, comp_gamma.index);
        let (k, gi, di) = gamma.composite_slots(delta, i, j)[index];
        let m_pos = gamma_image
            .basis
            .iter()
            .position(|(g2, p2)| *g2 == GammaRef { g: i, h: k, index: gi } && p2.len() == 0)
            .expect("γ·e_k is a basis element of P(Γ)");
        let n_pos = delta_image
            .basis
            .iter()
            .position(|(g2, p2)| *g2 == GammaRef { g: k, h: j, index: di } && p2 == p)
            .expect("δ·p is a basis element of P(Δ)");
        let mut amb = vec![field.zero(); m.dim() * n.dim()];
        amb[m_pos * n.dim() + n_pos] = field.one();
        for (r, c) in quo.project(&amb).into_iter().enumerate() {
            matrix.set(r, col, c);
        }
    }

    let inverse = matrix.inverse().ok_or_else(|| {
        EquivalenceError::EssentialImage("μ is not invertible".into())
    })?;
    composite_image
        .bimodule
        .check_morphism_to(&tensor, &matrix)
        .map_err(EquivalenceError::EssentialImage)?;
    tensor
        .check_morphism_to(&composite_image.bimodule, &inverse)
        .map_err(EquivalenceError::EssentialImage)?;

    Ok(MuIso { matrix, inverse, composite_image, gamma_image, delta_image, tensor })
}

/// Tensor of two bimodule morphisms on the balanced quotients:
/// [m ⊗ n] ↦ [f(m) ⊗ g(n)].
pub(crate) fn tensor_of_morphisms(
    m: &BimoduleWithQuiverData,
    n: &BimoduleWithQuiverData,
    mp: &BimoduleWithQuiverData,
    np: &BimoduleWithQuiverData,
    f: &Matrix,
    g: &Matrix,
) -> Matrix {
    let field = m.field();
    let quo = balanced_quotient(m, n);
    let quo_p = balanced_quotient(mp, np);
    let mut out = Matrix::zeros(field, quo_p.dim(), quo.dim());
    for col in 0..quo.dim() {
        let rep = quo.rep(col);
        let pos = rep.iter().position(|c| !c.is_zero()).expect("reps are standard vectors");
        let (i, j) = (pos / n.dim(), pos % n.dim());
        let fi: Vec<Scalar> = f.col(i);
        let gj: Vec<Scalar> = g.col(j);
        let mut amb = vec![field.zero(); mp.dim() * np.dim()];
        for (ip, a) in fi.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (jp, b) in gj.iter().enumerate() {
                if !b.is_zero() {
                    amb[ip * np.dim() + jp] = a.mul(b);
                }
            }
        }
        for (r, c) in quo_p.project(&amb).into_iter().enumerate() {
            out.set(r, col, c);
        }
    }
    out
}

/// The naturality square of μ:
/// (P(f) ⊗ P(g)) ∘ μ_{Γ,Δ} = μ_{Γ',Δ'} ∘ P(f ⊗ g), exactly.
pub fn check_mu_naturality(
    f: &ConnectionMorphism,
    g: &ConnectionMorphism,
    ia: &BoundQuiver,
    ib: &BoundQuiver,
    ic: &BoundQuiver,
) -> Result<bool, EquivalenceError> {
    let mu1 = mu(f.source(), g.source(), ia, ib, ic)?;
    let mu2 = mu(f.target(), g.target(), ia, ib, ic)?;
    let pf = p_morphism(f, ia, ib)?;
    let pg = p_morphism(g, ib, ic)?;
    let fg = f.tensor(g)?;
    let pfg = p_morphism(&fg, ia, ic)?;

    let tm = tensor_of_morphisms(
        &mu1.gamma_image.bimodule,
        &mu1.delta_image.bimodule,
        &mu2.gamma_image.bimodule,
        &mu2.delta_image.bimodule,
        &pf.matrix,
        &pg.matrix,
    );
    let lhs = tm.mul(&mu1.matrix);
    let rhs = mu2.matrix.mul(&pfg.matrix);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::super::test_fixtures::*;
    use super::*;

    #[test]
    fn mu_on_scalar_loops() {
        let bq = truncated_loop_bq(3);
        let c = scalar_loop_connection(2);
        let d = scalar_loop_connection(5);
        let iso = mu(&c, &d, &bq, &bq, &bq).unwrap();
        // dims agree on both sides
        assert_eq!(iso.matrix.rows(), iso.matrix.cols());
        assert_eq!(iso.composite_image.bimodule.dim(), iso.tensor.dim());
        assert_eq!(iso.matrix.mul(&iso.inverse), Matrix::identity(q(), iso.matrix.rows()));
    }

    #[test]
    fn mu_with_identity_connection() {
        let bq = truncated_loop_bq(2);
        let c = scalar_loop_connection(3);
        let id = QuiverConnection::identity(&bq.quiver, q());
        let iso = mu(&c, &id, &bq, &bq, &bq).unwrap();
        assert_eq!(iso.matrix.rows(), iso.composite_image.bimodule.dim());
    }

    #[test]
    fn tensor_of_identity_morphisms_is_identity() {
        let bq = truncated_loop_bq(3);
        let c = scalar_loop_connection(2);
        let d = scalar_loop_connection(5);
        let iso = mu(&c, &d, &bq, &bq, &bq).unwrap();
        let m = &iso.gamma_image.bimodule;
        let n = &iso.delta_image.bimodule;
        let idm = Matrix::identity(q(), m.dim());
        let idn = Matrix::identity(q(), n.dim());
        let t = tensor_of_morphisms(m, n, m, n, &idm, &idn);
        assert_eq!(t, Matrix::identity(q(), iso.tensor.dim()));
        // the tensor of passing morphisms is a passing morphism
        iso.tensor.check_morphism_to(&iso.tensor, &t).unwrap();
    }

    #[test]
    fn mu_naturality_with_identities() {
        let bq = truncated_loop_bq(2);
        let c = scalar_loop_connection(3);
        let d = scalar_loop_connection(7);
        let f = ConnectionMorphism::identity(&c);
        let g = ConnectionMorphism::identity(&d);
        assert!(check_mu_naturality(&f, &g, &bq, &bq, &bq).unwrap());
    }

    #[test]
    fn mu_naturality_with_scalar_morphisms() {
        let bq = truncated_loop_bq(3);
        let c = scalar_loop_connection(2);
        let d = scalar_loop_connection(5);
        let f = ConnectionMorphism::identity(&c).scale(&q().from_i64(4));
        let g = ConnectionMorphism::identity(&d).scale(&q().from_i64(-3));
        assert!(check_mu_naturality(&f, &g, &bq, &bq, &bq).unwrap());
    }
}
