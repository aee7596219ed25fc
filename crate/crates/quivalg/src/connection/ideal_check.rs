use std::collections::BTreeMap;

use super::{GammaRef, MixedPathVector, MixedTerm, QuiverConnection};
use crate::error::ConnectionError;
use crate::quiver::{AdmissibleIdeal, Path, PathVector};

/// Outcome of the ideal-connectedness test: either connected, or a witness
/// naming the first offending (ideal element, γ) pair and the residue that
/// escapes the other ideal.
#[derive(Clone, Debug)]
pub enum IdealCheck {
    Connected,
    Failed(IdealityWitness),
}

impl IdealCheck {
    pub fn is_connected(&self) -> bool {
        matches!(self, IdealCheck::Connected)
    }
}

#[derive(Clone, Debug)]
pub struct IdealityWitness {
    /// false: transport of a source-ideal element escaped;
    /// true: inverse transport of a target-ideal element escaped.
    pub inverse_direction: bool,
    pub element: String,
    pub gamma_label: String,
    pub residue: String,
}

/// Tests whether transport carries I_G · Γ into Γ · I_H and inverse transport
/// carries Γ · I_H into I_G · Γ.
///
/// The test set is finite: the listed ideal generators, plus — when the
/// source bound is smaller than the target bound — every source path of
/// length exactly the source bound (those paths lie in I_G but their
/// transports are not automatically long enough to lie in I_H; longer paths
/// then follow by linearity and one-arrow multiples, as do all two-sided
/// generator multiples). Symmetrically for the inverse direction.
pub fn check_ideally_connected(
    c: &QuiverConnection,
    source_ideal: &AdmissibleIdeal,
    target_ideal: &AdmissibleIdeal,
) -> Result<IdealCheck, ConnectionError> {
    let field = c.field();
    if source_ideal.field() != field || target_ideal.field() != field {
        return Err(ConnectionError::ForeignIdeal);
    }

    // forward: generators of I_G, plus length-n_G paths when n_G < n_H
    let mut forward: Vec<PathVector> = source_ideal.generators().to_vec();
    if source_ideal.bound() < target_ideal.bound() {
        for p in c.source().enumerate_paths(source_ideal.bound(), None, None) {
            if p.len() == source_ideal.bound() {
                forward.push(PathVector::single(field, p, field.one()));
            }
        }
    }
    for rho in &forward {
        let (_, b) = endpoints(rho, c, true)?;
        for h in 0..c.target().vertex_count() {
            for index in 0..c.gamma_dim(b, h) {
                let gamma = GammaRef { g: b, h, index };
                let mut v = MixedPathVector::zero(field);
                for (p, coeff) in rho.terms() {
                    v.add_term(
                        MixedTerm { left: p.clone(), gamma, right: Path::trivial(h) },
                        coeff.clone(),
                    );
                }
                let moved = c.transport(&v)?;
                // group by resulting γ' and test each right-hand component
                let mut by_gamma: BTreeMap<GammaRef, PathVector> = BTreeMap::new();
                for (term, coeff) in moved.terms() {
                    by_gamma
                        .entry(term.gamma)
                        .or_insert_with(|| PathVector::zero(field))
                        .add_term(term.right.clone(), coeff.clone());
                }
                for (gp, component) in by_gamma {
                    let residue = target_ideal.normal_form(&component, c.target());
                    if !residue.is_zero() {
                        return Ok(IdealCheck::Failed(IdealityWitness {
                            inverse_direction: false,
                            element: rho.render(c.source()),
                            gamma_label: c.label_of(gamma).to_string(),
                            residue: format!(
                                "at γ' = {}: {}",
                                c.label_of(gp),
                                residue.render(c.target())
                            ),
                        }));
                    }
                }
            }
        }
    }

    // inverse: generators of I_H, plus length-n_H paths when n_H < n_G
    let mut backward: Vec<PathVector> = target_ideal.generators().to_vec();
    if target_ideal.bound() < source_ideal.bound() {
        for p in c.target().enumerate_paths(target_ideal.bound(), None, None) {
            if p.len() == target_ideal.bound() {
                backward.push(PathVector::single(field, p, field.one()));
            }
        }
    }
    for sigma in &backward {
        let (b, _) = endpoints(sigma, c, false)?;
        for g in 0..c.source().vertex_count() {
            for index in 0..c.gamma_dim(g, b) {
                let gamma = GammaRef { g, h: b, index };
                let mut v = MixedPathVector::zero(field);
                for (p, coeff) in sigma.terms() {
                    v.add_term(
                        MixedTerm { left: Path::trivial(g), gamma, right: p.clone() },
                        coeff.clone(),
                    );
                }
                let moved = c.inverse_transport(&v)?;
                let mut by_gamma: BTreeMap<GammaRef, PathVector> = BTreeMap::new();
                for (term, coeff) in moved.terms() {
                    by_gamma
                        .entry(term.gamma)
                        .or_insert_with(|| PathVector::zero(field))
                        .add_term(term.left.clone(), coeff.clone());
                }
                for (gp, component) in by_gamma {
                    let residue = source_ideal.normal_form(&component, c.source());
                    if !residue.is_zero() {
                        return Ok(IdealCheck::Failed(IdealityWitness {
                            inverse_direction: true,
                            element: sigma.render(c.target()),
                            gamma_label: c.label_of(gamma).to_string(),
                            residue: format!(
                                "at γ' = {}: {}",
                                c.label_of(gp),
                                residue.render(c.source())
                            ),
                        }));
                    }
                }
            }
        }
    }

    Ok(IdealCheck::Connected)
}

fn endpoints(
    v: &PathVector,
    c: &QuiverConnection,
    source_side: bool,
) -> Result<(usize, usize), ConnectionError> {
    let quiver = if source_side { c.source() } else { c.target() };
    let (p, _) = v.terms().next().expect("generators are nonzero");
    let (s, t) = (p.source(quiver), p.target(quiver));
    for (p2, _) in v.terms() {
        if p2.source(quiver) != s || p2.target(quiver) != t {
            return Err(ConnectionError::ForeignIdeal);
        }
    }
    Ok((s, t))
}

#[cfg(test)]
mod tests {
    use super::super::test_fixtures::scalar_loop_connection;
    use super::*;
    use crate::linalg::Field;
    use crate::quiver::Quiver;

    fn q() -> Field {
        Field::Rational
    }

    fn loop_quiver() -> Quiver {
        Quiver::new(vec!["v".into()], vec![("x".into(), "v".into(), "v".into())]).unwrap()
    }

    fn power_ideal(k: usize, n: usize) -> AdmissibleIdeal {
        let quiver = loop_quiver();
        let gens = if k < n {
            vec![PathVector::single(q(), Path::from_edge_indices(vec![0; k]), q().one())]
        } else {
            vec![]
        };
        AdmissibleIdeal::new(&quiver, gens, n, q()).unwrap()
    }

    #[test]
    fn matched_truncations_are_connected() {
        let c = scalar_loop_connection(5);
        for n in 2..5 {
            let ia = AdmissibleIdeal::truncation(&loop_quiver(), n, q()).unwrap();
            let ib = AdmissibleIdeal::truncation(&loop_quiver(), n, q()).unwrap();
            assert!(check_ideally_connected(&c, &ia, &ib).unwrap().is_connected());
        }
    }

    #[test]
    fn matched_x2_ideals_are_connected() {
        // transport of x²γ = c²γx² ∈ Γ·I_H
        let c = scalar_loop_connection(5);
        let ia = power_ideal(2, 3);
        let ib = power_ideal(2, 3);
        assert!(check_ideally_connected(&c, &ia, &ib).unwrap().is_connected());
    }

    #[test]
    fn mismatched_ideals_fail_with_witness() {
        // I_G = (x²), I_H = (x³): residue c²·x² is not in I_H
        let c = scalar_loop_connection(5);
        let ia = power_ideal(2, 3);
        let ib = power_ideal(3, 4);
        match check_ideally_connected(&c, &ia, &ib).unwrap() {
            IdealCheck::Connected => panic!("expected failure"),
            IdealCheck::Failed(w) => {
                assert!(!w.inverse_direction);
                assert!(w.element.contains("x*x"), "witness element: {}", w.element);
                assert!(w.residue.contains("x*x"), "residue: {}", w.residue);
            }
        }
    }

    #[test]
    fn invariant_under_gamma_basis_change() {
        // conjugating U by a Γ basis change does not affect the outcome
        use crate::linalg::Matrix;
        use std::collections::BTreeMap;
        let quiver = loop_quiver();
        let field = q();
        let make = |u: Matrix| {
            let mut gamma = BTreeMap::new();
            gamma.insert((0, 0), vec!["p".to_string(), "r".to_string()]);
            let mut blocks = BTreeMap::new();
            blocks.insert((0, 0), u);
            QuiverConnection::new(quiver.clone(), quiver.clone(), gamma, blocks, field).unwrap()
        };
        let u = Matrix::from_i64(field, &[&[2, 1], &[1, 1]]);
        let s = Matrix::from_i64(field, &[&[1, 3], &[0, 1]]);
        let conjugated = s.mul(&u).mul(&s.inverse().unwrap());
        for (na, nb) in [(3, 3), (2, 3)] {
            let ia = AdmissibleIdeal::truncation(&loop_quiver(), na, field).unwrap();
            let ib = AdmissibleIdeal::truncation(&loop_quiver(), nb, field).unwrap();
            let before = check_ideally_connected(&make(u.clone()), &ia, &ib)
                .unwrap()
                .is_connected();
            let after = check_ideally_connected(&make(conjugated.clone()), &ia, &ib)
                .unwrap()
                .is_connected();
            assert_eq!(before, after, "bounds ({na}, {nb})");
            assert_eq!(before, na == nb);
        }
    }

    #[test]
    fn mismatched_truncations_fail() {
        // pure truncations with different bounds: x² lies in rad² but its
        // transport c²x² does not lie in rad³
        let c = scalar_loop_connection(2);
        let ia = AdmissibleIdeal::truncation(&loop_quiver(), 2, q()).unwrap();
        let ib = AdmissibleIdeal::truncation(&loop_quiver(), 3, q()).unwrap();
        assert!(!check_ideally_connected(&c, &ia, &ib).unwrap().is_connected());
        // and the other way round, caught by the inverse direction
        let ia2 = AdmissibleIdeal::truncation(&loop_quiver(), 3, q()).unwrap();
        let ib2 = AdmissibleIdeal::truncation(&loop_quiver(), 2, q()).unwrap();
        match check_ideally_connected(&c, &ia2, &ib2).unwrap() {
            IdealCheck::Connected => panic!("expected failure"),
            IdealCheck::Failed(w) => assert!(w.inverse_direction),
        }
    }
}
