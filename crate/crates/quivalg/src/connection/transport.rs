use std::collections::BTreeMap;

use super::{CodomainSlot, DomainSlot, QuiverConnection};
use crate::error::ConnectionError;
use crate::linalg::{Field, Scalar};
use crate::quiver::Path;

/// A basis element of some Γ block: vertex pair plus position in the block's
/// label list.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GammaRef {
    pub g: usize,
    pub h: usize,
    pub index: usize,
}

/// One term of a mixed path vector: a source-quiver path, a Γ basis element,
/// and a target-quiver path, with matching endpoints
/// (target(left) = γ.g, γ.h = source(right)).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct MixedTerm {
    pub left: Path,
    pub gamma: GammaRef,
    pub right: Path,
}

/// Finite linear combination of mixed terms over a fixed connection's Γ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedPathVector {
    field: Field,
    terms: BTreeMap<MixedTerm, Scalar>,
}

impl MixedPathVector {
    pub fn zero(field: Field) -> Self {
        MixedPathVector { field, terms: BTreeMap::new() }
    }

    pub fn single(field: Field, term: MixedTerm, coeff: Scalar) -> Self {
        let mut v = MixedPathVector::zero(field);
        v.add_term(term, coeff);
        v
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MixedTerm, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, term: MixedTerm, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn add(&self, other: &MixedPathVector) -> MixedPathVector {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> MixedPathVector {
        if k.is_zero() {
            return MixedPathVector::zero(self.field);
        }
        MixedPathVector {
            field: self.field,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c.mul(k))).collect(),
        }
    }

    /// Endpoint validity of every term against the connection's quivers.
    pub fn check(&self, c: &QuiverConnection) -> Result<(), ConnectionError> {
        for t in self.terms.keys() {
            if c.gamma_dim(t.gamma.g, t.gamma.h) <= t.gamma.index
                || t.left.target(c.source()) != t.gamma.g
                || t.right.source(c.target()) != t.gamma.h
            {
                return Err(ConnectionError::IncompatibleTerm);
            }
        }
        Ok(())
    }
}

impl QuiverConnection {
    /// Transport across the connection: input terms must have trivial right
    /// parts. Each source-quiver path of length m is moved edge by edge
    /// (rightmost first, i.e. the edge adjacent to γ), one `U` application
    /// per edge; mixed input lengths are handled term by term. m = 0 is the
    /// identity.
    pub fn transport(&self, v: &MixedPathVector) -> Result<MixedPathVector, ConnectionError> {
        v.check(self)?;
        let field = self.field();
        let mut out = MixedPathVector::zero(field);
        for (term, coeff) in v.terms() {
            if !term.right.is_trivial() {
                return Err(ConnectionError::IncompatibleTerm);
            }
            let start_vertex = term.left.source(self.source());
            // pending: (remaining left edges, γ, accumulated right edges, coeff)
            let mut pending: Vec<(Vec<usize>, GammaRef, Vec<usize>, Scalar)> =
                vec![(term.left.edge_indices().to_vec(), term.gamma, Vec::new(), coeff.clone())];
            while let Some((mut left, gamma, right, c)) = pending.pop() {
                let Some(edge) = left.pop() else {
                    let left_path = Path::trivial(start_vertex);
                    let right_path = if right.is_empty() {
                        Path::trivial(gamma.h)
                    } else {
                        Path::from_edge_indices(right.clone())
                    };
                    out.add_term(MixedTerm { left: left_path, gamma, right: right_path }, c);
                    continue;
                };
                let g = self.source().edge(edge).src;
                debug_assert_eq!(self.source().edge(edge).tgt, gamma.g);
                let h = gamma.h;
                let block = self
                    .u_block(g, h)
                    .expect("nonzero domain implies a U block");
                let col = self.domain_index(g, h, &DomainSlot { edge, gamma });
                let cod = self.codomain_basis(g, h);
                for (row, slot) in cod.iter().enumerate() {
                    let entry = block.get(row, col);
                    if entry.is_zero() {
                        continue;
                    }
                    let mut new_right = vec![slot.edge];
                    new_right.extend_from_slice(&right);
                    pending.push((left.clone(), slot.gamma, new_right, c.mul(entry)));
                }
            }
        }
        Ok(out)
    }

    /// Exact inverse of `transport`: input terms must have trivial left parts;
    /// target-quiver edges are moved back one at a time (leftmost first).
    pub fn inverse_transport(
        &self,
        v: &MixedPathVector,
    ) -> Result<MixedPathVector, ConnectionError> {
        v.check(self)?;
        let field = self.field();
        let mut out = MixedPathVector::zero(field);
        for (term, coeff) in v.terms() {
            if !term.left.is_trivial() {
                return Err(ConnectionError::IncompatibleTerm);
            }
            let end_vertex = term.right.target(self.target());
            // pending: (accumulated left edges, γ, remaining right edges, coeff)
            let mut pending: Vec<(Vec<usize>, GammaRef, Vec<usize>, Scalar)> =
                vec![(Vec::new(), term.gamma, term.right.edge_indices().to_vec(), coeff.clone())];
            while let Some((left, gamma, mut right, c)) = pending.pop() {
                if right.is_empty() {
                    let right_path = Path::trivial(end_vertex);
                    let left_path = if left.is_empty() {
                        Path::trivial(gamma.g)
                    } else {
                        Path::from_edge_indices(left.clone())
                    };
                    out.add_term(MixedTerm { left: left_path, gamma, right: right_path }, c);
                    continue;
                }
                let edge = right.remove(0);
                debug_assert_eq!(self.target().edge(edge).src, gamma.h);
                let g = gamma.g;
                let h = self.target().edge(edge).tgt;
                let inv = self
                    .u_inv_block(g, h)
                    .expect("nonzero codomain implies a U block");
                let row_slot = CodomainSlot { gamma, edge };
                let col = self.codomain_index(g, h, &row_slot);
                let dom = self.domain_basis(g, h);
                for (row, slot) in dom.iter().enumerate() {
                    let entry = inv.get(row, col);
                    if entry.is_zero() {
                        continue;
                    }
                    let mut new_left = left.clone();
                    new_left.push(slot.edge);
                    pending.push((new_left, slot.gamma, right.clone(), c.mul(entry)));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_fixtures::scalar_loop_connection;
    use super::*;
    use crate::linalg::Field;

    fn q() -> Field {
        Field::Rational
    }

    fn gamma00() -> GammaRef {
        GammaRef { g: 0, h: 0, index: 0 }
    }

    #[test]
    fn length_zero_is_identity() {
        let c = scalar_loop_connection(5);
        let t = MixedTerm { left: Path::trivial(0), gamma: gamma00(), right: Path::trivial(0) };
        let v = MixedPathVector::single(q(), t.clone(), q().one());
        assert_eq!(c.transport(&v).unwrap(), v);
        assert_eq!(c.inverse_transport(&v).unwrap(), v);
    }

    #[test]
    fn scalar_loop_single_edge() {
        // transport(x ⊗ γ) = c (γ ⊗ x)
        let c = scalar_loop_connection(5);
        let t = MixedTerm {
            left: Path::from_edge_indices(vec![0]),
            gamma: gamma00(),
            right: Path::trivial(0),
        };
        let v = MixedPathVector::single(q(), t, q().one());
        let w = c.transport(&v).unwrap();
        let expected_term = MixedTerm {
            left: Path::trivial(0),
            gamma: gamma00(),
            right: Path::from_edge_indices(vec![0]),
        };
        let expected = MixedPathVector::single(q(), expected_term, q().from_i64(5));
        assert_eq!(w, expected);
    }

    #[test]
    fn scalar_loop_two_edges_squares_the_scalar() {
        // transport(x² ⊗ γ) = c² (γ ⊗ x²): two-fold iteration oracle, the
        // expected value read off the 1x1 matrix applied twice
        let c = scalar_loop_connection(5);
        let t = MixedTerm {
            left: Path::from_edge_indices(vec![0, 0]),
            gamma: gamma00(),
            right: Path::trivial(0),
        };
        let v = MixedPathVector::single(q(), t, q().one());
        let w = c.transport(&v).unwrap();
        let expected_term = MixedTerm {
            left: Path::trivial(0),
            gamma: gamma00(),
            right: Path::from_edge_indices(vec![0, 0]),
        };
        assert_eq!(w, MixedPathVector::single(q(), expected_term, q().from_i64(25)));
    }

    #[test]
    fn inverse_is_reciprocal_on_the_loop() {
        let c = scalar_loop_connection(5);
        let t = MixedTerm {
            left: Path::trivial(0),
            gamma: gamma00(),
            right: Path::from_edge_indices(vec![0]),
        };
        let v = MixedPathVector::single(q(), t, q().one());
        let w = c.inverse_transport(&v).unwrap();
        let expected_term = MixedTerm {
            left: Path::from_edge_indices(vec![0]),
            gamma: gamma00(),
            right: Path::trivial(0),
        };
        assert_eq!(w, MixedPathVector::single(q(), expected_term, q().from_ratio(1, 5).unwrap()));
    }

    #[test]
    fn transport_round_trips_with_inverse() {
        let c = scalar_loop_connection(7);
        for len in 0..4usize {
            let left = if len == 0 {
                Path::trivial(0)
            } else {
                Path::from_edge_indices(vec![0; len])
            };
            let t = MixedTerm { left, gamma: gamma00(), right: Path::trivial(0) };
            let v = MixedPathVector::single(q(), t, q().from_i64(3));
            let round = c.inverse_transport(&c.transport(&v).unwrap()).unwrap();
            assert_eq!(round, v);
        }
    }

    #[test]
    fn transport_through_identity_fixes_every_path() {
        use crate::quiver::Quiver;
        let quiver = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "2".into(), "2".into()),
            ],
        )
        .unwrap();
        let c = crate::connection::QuiverConnection::identity(&quiver, q());
        for p in quiver.enumerate_paths(3, None, None) {
            let src = p.source(&quiver);
            let tgt = p.target(&quiver);
            let term = MixedTerm {
                left: p.clone(),
                gamma: GammaRef { g: tgt, h: tgt, index: 0 },
                right: Path::trivial(tgt),
            };
            let v = MixedPathVector::single(q(), term, q().one());
            let moved = c.transport(&v).unwrap();
            let expected_term = MixedTerm {
                left: Path::trivial(src),
                gamma: GammaRef { g: src, h: src, index: 0 },
                right: p.clone(),
            };
            assert_eq!(moved, MixedPathVector::single(q(), expected_term, q().one()));
        }
    }

    #[test]
    fn transport_is_linear() {
        let c = scalar_loop_connection(2);
        let t1 = MixedTerm {
            left: Path::from_edge_indices(vec![0]),
            gamma: gamma00(),
            right: Path::trivial(0),
        };
        let t2 = MixedTerm {
            left: Path::from_edge_indices(vec![0, 0]),
            gamma: gamma00(),
            right: Path::trivial(0),
        };
        let v1 = MixedPathVector::single(q(), t1, q().from_i64(3));
        let v2 = MixedPathVector::single(q(), t2, q().from_i64(-4));
        let sum = v1.add(&v2);
        let lhs = c.transport(&sum).unwrap();
        let rhs = c.transport(&v1).unwrap().add(&c.transport(&v2).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn transport_factorizes_over_path_splitting() {
        // transport of x³⊗γ equals transporting x then x² stepwise
        let c = scalar_loop_connection(3);
        let t = MixedTerm {
            left: Path::from_edge_indices(vec![0, 0, 0]),
            gamma: gamma00(),
            right: Path::trivial(0),
        };
        let full = c.transport(&MixedPathVector::single(q(), t, q().one())).unwrap();
        // suffix first: x² ⊗ γ
        let suffix = MixedTerm {
            left: Path::from_edge_indices(vec![0, 0]),
            gamma: gamma00(),
            right: Path::trivial(0),
        };
        let mid = c.transport(&MixedPathVector::single(q(), suffix, q().one())).unwrap();
        // then prefix x across each resulting γ', re-concatenating the right parts
        let mut assembled = MixedPathVector::zero(q());
        for (term, coeff) in mid.terms() {
            let pre = MixedTerm {
                left: Path::from_edge_indices(vec![0]),
                gamma: term.gamma,
                right: Path::trivial(term.gamma.h),
            };
            let moved = c.transport(&MixedPathVector::single(q(), pre, coeff.clone())).unwrap();
            for (m, c2) in moved.terms() {
                let mut edges = m.right.edge_indices().to_vec();
                edges.extend_from_slice(term.right.edge_indices());
                let right =
                    if edges.is_empty() { Path::trivial(0) } else { Path::from_edge_indices(edges) };
                assembled.add_term(
                    MixedTerm { left: m.left.clone(), gamma: m.gamma, right },
                    c2.clone(),
                );
            }
        }
        assert_eq!(full, assembled);
    }
}
