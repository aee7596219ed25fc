//! The translation functor between the two pictures: bound quivers with
//! ideally connected quiver connections on one side, basic algebras with
//! radically symmetric bimodules on the other. Forward images of objects,
//! 1-cells and 2-cells; the μ coherence isomorphism for composites; the
//! reverse construction of a connection from a bimodule; and both round
//! trips with explicit isomorphism witnesses.

mod mu;
mod roundtrip;

pub use mu::{check_mu_naturality, mu, MuIso};
pub(crate) use mu::tensor_of_morphisms;
pub use roundtrip::{
    match_presented_quiver,
    connection_from_bimodule, roundtrip_algebra, roundtrip_connection, ConnectionFromBimodule,
    RoundtripAlgebra, RoundtripConnection,
};

use crate::algebra::{AlgebraWithQuiverData, FiniteDimAlgebra};
use crate::bimodule::BimoduleWithQuiverData;
use crate::connection::{
    check_ideally_connected, ConnectionMorphism, GammaRef, MixedPathVector, MixedTerm,
    QuiverConnection,
};
use crate::error::EquivalenceError;
use crate::linalg::Matrix;
use crate::quiver::{BoundQuiver, Path, PathVector, QuotientAlgebra};

/// Image of a bound quiver: the quotient algebra kQ/I with its coordinate
/// lifting data (trivial paths lift vertices, arrows lift arrow classes).
/// The quotient's path basis is the label dictionary.
#[derive(Clone, Debug)]
pub struct AlgebraImage {
    pub data: AlgebraWithQuiverData,
    pub quotient: QuotientAlgebra,
}

pub fn p_object(bq: &BoundQuiver) -> Result<AlgebraImage, EquivalenceError> {
    let qa = QuotientAlgebra::new(bq.clone())?;
    let field = qa.field();
    let dim = qa.dim();
    let algebra = FiniteDimAlgebra::from_quotient(&qa);
    let rad = qa.radical_power_basis(1);

    // canonical data in the reduced-path basis: the basis is sorted by
    // length, so the radical and its square are coordinate subspaces and the
    // lifting maps are plain coordinate embeddings
    let trivial: Vec<usize> =
        (0..dim).filter(|&i| qa.basis()[i].len() == 0).collect();
    let arrows: Vec<usize> = (0..dim).filter(|&i| qa.basis()[i].len() == 1).collect();
    let mut delta1 = Matrix::zeros(field, dim, trivial.len());
    for (c, &i) in trivial.iter().enumerate() {
        delta1.set(i, c, field.one());
    }
    let mut delta2 = Matrix::zeros(field, dim, arrows.len());
    for (c, &i) in arrows.iter().enumerate() {
        delta2.set(i, c, field.one());
    }

    let data = AlgebraWithQuiverData::with_data(algebra, Some(rad), delta1, delta2)?;
    Ok(AlgebraImage { data, quotient: qa })
}

/// Image of an ideally connected connection: the bimodule with basis
/// γ·(reduced target path), right action by concatenation, left action by
/// transport followed by concatenation, and coordinate lifting data.
#[derive(Clone, Debug)]
pub struct BimoduleImage {
    pub bimodule: BimoduleWithQuiverData,
    /// Dictionary: basis position ↦ (γ, reduced target-quiver path).
    pub basis: Vec<(GammaRef, Path)>,
    pub source_image: AlgebraImage,
    pub target_image: AlgebraImage,
}

pub fn p_connection(
    c: &QuiverConnection,
    source_bq: &BoundQuiver,
    target_bq: &BoundQuiver,
) -> Result<BimoduleImage, EquivalenceError> {
    if c.source() != &source_bq.quiver || c.target() != &target_bq.quiver {
        return Err(EquivalenceError::Connection(
            crate::error::ConnectionError::ForeignIdeal,
        ));
    }
    let check = check_ideally_connected(c, &source_bq.ideal, &target_bq.ideal)?;
    if let crate::connection::IdealCheck::Failed(w) = check {
        return Err(EquivalenceError::NotIdeallyConnected(format!(
            "{} against γ = {}: residue {}",
            w.element, w.gamma_label, w.residue
        )));
    }

    let field = c.field();
    let source_image = p_object(source_bq)?;
    let target_image = p_object(target_bq)?;
    let qa_b = &target_image.quotient;
    let qa_a = &source_image.quotient;

    // basis: per γ block in order, per label, the reduced target paths
    // starting at the γ's target vertex, in quotient-basis order
    let mut basis: Vec<(GammaRef, Path)> = Vec::new();
    for (&(g, h), labels) in c.gamma_blocks() {
        for index in 0..labels.len() {
            for p in qa_b.basis() {
                if p.source(c.target()) == h {
                    basis.push((GammaRef { g, h, index }, p.clone()));
                }
            }
        }
    }
    let dim = basis.len();
    let pos_of = |gamma: &GammaRef, p: &Path| -> Option<usize> {
        basis.iter().position(|(g2, p2)| g2 == gamma && p2 == p)
    };
    let labels: Vec<String> = basis
        .iter()
        .map(|(g, p)| format!("{}·{}", c.label_of(*g), c.target().path_string(p)))
        .collect();

    // right action of each target-algebra basis path u: (γ, p) ↦ γ·nf(p·u)
    let mut right_action = Vec::with_capacity(qa_b.dim());
    for u in qa_b.basis() {
        let mut m = Matrix::zeros(field, dim, dim);
        for (col, (gamma, p)) in basis.iter().enumerate() {
            if let Some(pu) = p
                .compose(u, c.target())
                .map_err(EquivalenceError::Quiver)?
            {
                let nf = target_bq.ideal.normal_form(
                    &PathVector::single(field, pu, field.one()),
                    c.target(),
                );
                for (p2, coeff) in nf.terms() {
                    let row = pos_of(gamma, p2).expect("normal form stays in the basis");
                    m.set(row, col, coeff.clone());
                }
            }
        }
        right_action.push(m);
    }

    // left action of each source-algebra basis path w: transport w across,
    // then concatenate on the right part
    let mut left_action = Vec::with_capacity(qa_a.dim());
    for w in qa_a.basis() {
        let mut m = Matrix::zeros(field, dim, dim);
        for (col, (gamma, p)) in basis.iter().enumerate() {
            if w.target(c.source()) != gamma.g {
                continue;
            }
            let term = MixedTerm {
                left: w.clone(),
                gamma: *gamma,
                right: Path::trivial(gamma.h),
            };
            let moved = c.transport(&MixedPathVector::single(field, term, field.one()))?;
            for (t, coeff) in moved.terms() {
                // t = (trivial, γ', r): multiply r onto p
                if let Some(rp) = t
                    .right
                    .compose(p, c.target())
                    .map_err(EquivalenceError::Quiver)?
                {
                    let nf = target_bq.ideal.normal_form(
                        &PathVector::single(field, rp, field.one()),
                        c.target(),
                    );
                    for (p2, c2) in nf.terms() {
                        let row = pos_of(&t.gamma, p2).expect("normal form stays in the basis");
                        let v = m.get(row, col).add(&coeff.mul(c2));
                        m.set(row, col, v);
                    }
                }
            }
        }
        left_action.push(m);
    }

    // coordinate lifting data: δ¹ embeds the (γ, trivial) coordinates, δ² the
    // (γ, arrow) coordinates, both in basis order
    let d1_cols: Vec<usize> =
        (0..dim).filter(|&i| basis[i].1.len() == 0).collect();
    let d2_cols: Vec<usize> = (0..dim).filter(|&i| basis[i].1.len() == 1).collect();
    let mut delta1 = Matrix::zeros(field, dim, d1_cols.len());
    for (cc, &i) in d1_cols.iter().enumerate() {
        delta1.set(i, cc, field.one());
    }
    let mut delta2 = Matrix::zeros(field, dim, d2_cols.len());
    for (cc, &i) in d2_cols.iter().enumerate() {
        delta2.set(i, cc, field.one());
    }

    let bimodule = BimoduleWithQuiverData::new(
        source_image.data.clone(),
        target_image.data.clone(),
        labels,
        left_action,
        right_action,
        delta1,
        delta2,
    )?;
    Ok(BimoduleImage { bimodule, basis, source_image, target_image })
}

/// Image of a 2-morphism: acts on the γ part and fixes the path part.
/// The result is checked as a bimodule intertwiner.
#[derive(Clone, Debug)]
pub struct BimoduleMorphismImage {
    pub source: BimoduleImage,
    pub target: BimoduleImage,
    pub matrix: Matrix,
}

pub fn p_morphism(
    f: &ConnectionMorphism,
    source_bq: &BoundQuiver,
    target_bq: &BoundQuiver,
) -> Result<BimoduleMorphismImage, EquivalenceError> {
    if f.check().is_err() {
        return Err(EquivalenceError::Connection(
            crate::error::ConnectionError::MorphismQuiverMismatch,
        ));
    }
    let source = p_connection(f.source(), source_bq, target_bq)?;
    let target = p_connection(f.target(), source_bq, target_bq)?;
    let field = f.source().field();
    let mut matrix = Matrix::zeros(field, target.bimodule.dim(), source.bimodule.dim());
    for (col, (gamma, p)) in source.basis.iter().enumerate() {
        let block = f.block(gamma.g, gamma.h);
        for r in 0..block.rows() {
            let coeff = block.get(r, gamma.index);
            if coeff.is_zero() {
                continue;
            }
            let target_gamma = GammaRef { g: gamma.g, h: gamma.h, index: r };
            let row = target
                .basis
                .iter()
                .position(|(g2, p2)| *g2 == target_gamma && p2 == p)
                .expect("target basis contains the image slot");
            matrix.set(row, col, coeff.clone());
        }
    }
    source
        .bimodule
        .check_morphism_to(&target.bimodule, &matrix)
        .map_err(|w| EquivalenceError::EssentialImage(w))?;
    Ok(BimoduleMorphismImage { source, target, matrix })
}


#[cfg(test)]
mod tests {
    use super::test_fixtures::*;
    use super::*;
    use crate::bimodule::{projective_basis, radical_symmetry_check};

    #[test]
    fn p_object_on_a2() {
        let img = p_object(&a2_bq()).unwrap();
        assert_eq!(img.data.dim(), 3);
        assert_eq!(img.data.vertex_count(), 2);
        assert_eq!(img.data.quo2().dim(), 1); // one arrow lift
    }

    #[test]
    fn p_object_on_truncated_loop() {
        let img = p_object(&truncated_loop_bq(3)).unwrap();
        assert_eq!(img.data.dim(), 3);
        assert_eq!(img.data.vertex_count(), 1); // local algebra
        assert_eq!(img.data.nilpotency_degree(), 3);
    }

    #[test]
    fn p_object_on_the_empty_quiver() {
        use crate::quiver::{AdmissibleIdeal, Quiver};
        let quiver = Quiver::new(vec![], vec![]).unwrap();
        let ideal = AdmissibleIdeal::truncation(&quiver, 2, q()).unwrap();
        let img = p_object(&BoundQuiver::new(quiver, ideal)).unwrap();
        assert_eq!(img.data.dim(), 0);
        assert_eq!(img.data.vertex_count(), 0);
        let rt = crate::equivalence::roundtrip_algebra(&img.data).unwrap();
        assert_eq!(rt.presentation.bound_quiver.quiver.vertex_count(), 0);
    }

    #[test]
    fn p_object_on_vertex_only_quiver() {
        use crate::quiver::{AdmissibleIdeal, Quiver};
        let quiver = Quiver::new(vec!["1".into(), "2".into(), "3".into()], vec![]).unwrap();
        let ideal = AdmissibleIdeal::truncation(&quiver, 2, q()).unwrap();
        let img = p_object(&BoundQuiver::new(quiver, ideal)).unwrap();
        assert_eq!(img.data.dim(), 3);
        assert_eq!(img.data.vertex_count(), 3);
        assert_eq!(img.data.rad().dim(), 0);
    }

    #[test]
    fn p_connection_identity_is_unit_bimodule() {
        let bq = truncated_loop_bq(3);
        let c = QuiverConnection::identity(&bq.quiver, q());
        let img = p_connection(&c, &bq, &bq).unwrap();
        assert_eq!(img.bimodule.dim(), 3);
        // left and right actions agree with the algebra multiplication
        let unit = crate::bimodule::BimoduleWithQuiverData::unit(&img.source_image.data).unwrap();
        for i in 0..3 {
            assert_eq!(
                img.bimodule.left_action_matrix(i),
                unit.left_action_matrix(i),
                "left action of basis {i}"
            );
            assert_eq!(img.bimodule.right_action_matrix(i), unit.right_action_matrix(i));
        }
    }

    #[test]
    fn p_connection_scalar_loop() {
        // loop-c between loop/(x²) twice: dim-2 bimodule, x·γ = c·γ·x
        let bq = loop_bq(2, 3);
        let c = scalar_loop_connection(5);
        let img = p_connection(&c, &bq, &bq).unwrap();
        assert_eq!(img.bimodule.dim(), 2);
        // left action of x (basis index 1 = the arrow) on γ·e (position of
        // (γ, trivial)) gives 5·(γ·x)
        let x_act = img.bimodule.left_action_matrix(1);
        let gamma_e = img.basis.iter().position(|(_, p)| p.len() == 0).unwrap();
        let gamma_x = img.basis.iter().position(|(_, p)| p.len() == 1).unwrap();
        assert_eq!(x_act.get(gamma_x, gamma_e), &q().from_i64(5));
        // P-images are radically symmetric with valid data and a projective basis
        assert!(radical_symmetry_check(
            img.bimodule.left(),
            img.bimodule.right(),
            img.bimodule.dim(),
            (0..2).map(|i| img.bimodule.left_action_matrix(i).clone()).collect::<Vec<_>>().as_slice(),
            (0..2).map(|i| img.bimodule.right_action_matrix(i).clone()).collect::<Vec<_>>().as_slice(),
        ));
        let pb = projective_basis(&img.bimodule).unwrap();
        assert_eq!(pb.basis.len(), 1);
    }

    #[test]
    fn p_connection_rejects_mismatched_ideals() {
        let src = loop_bq(2, 3);
        let tgt = loop_bq(3, 4);
        let c = scalar_loop_connection(5);
        let err = p_connection(&c, &src, &tgt).unwrap_err();
        match err {
            EquivalenceError::NotIdeallyConnected(w) => {
                assert!(w.contains("x*x"), "witness: {w}");
            }
            other => panic!("expected ideal-connectedness failure, got {other:?}"),
        }
    }

    #[test]
    fn p_connection_gamma_dim_two_between_a2() {
        use std::collections::BTreeMap;
        // Γ with two labels on each diagonal block between A₂ copies
        let bq = a2_bq();
        let mut gamma = BTreeMap::new();
        gamma.insert((0, 0), vec!["p".to_string(), "q".to_string()]);
        gamma.insert((1, 1), vec!["r".to_string(), "s".to_string()]);
        let mut u = BTreeMap::new();
        u.insert((0, 1), Matrix::from_i64(q(), &[&[1, 2], &[1, 3]]));
        let c = QuiverConnection::new(bq.quiver.clone(), bq.quiver.clone(), gamma, u, q())
            .unwrap();
        let img = p_connection(&c, &bq, &bq).unwrap();
        // dims: γ at (0,0): paths from 1: e1, a → 2 each; γ at (1,1): paths
        // from 2: e2 → 1 each. Total 2·2 + 2·1 = 6
        assert_eq!(img.bimodule.dim(), 6);
    }

    #[test]
    fn p_morphism_identity_and_scalar() {
        let bq = truncated_loop_bq(3);
        let c = scalar_loop_connection(4);
        let id = ConnectionMorphism::identity(&c);
        let img = p_morphism(&id, &bq, &bq).unwrap();
        assert_eq!(img.matrix, Matrix::identity(q(), img.source.bimodule.dim()));
        let scalar = id.scale(&q().from_i64(7));
        let img2 = p_morphism(&scalar, &bq, &bq).unwrap();
        assert_eq!(img2.matrix, Matrix::identity(q(), 3).scale(&q().from_i64(7)));
    }

    #[test]
    fn p_preserves_vertical_composition() {
        let bq = truncated_loop_bq(3);
        let c = scalar_loop_connection(4);
        let f = ConnectionMorphism::identity(&c).scale(&q().from_i64(3));
        let g = ConnectionMorphism::identity(&c).scale(&q().from_i64(-2));
        let fg = f.then(&g).unwrap();
        let img_fg = p_morphism(&fg, &bq, &bq).unwrap();
        let img_f = p_morphism(&f, &bq, &bq).unwrap();
        let img_g = p_morphism(&g, &bq, &bq).unwrap();
        assert_eq!(img_fg.matrix, img_g.matrix.mul(&img_f.matrix));
    }
}
