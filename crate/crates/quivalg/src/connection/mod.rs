//! Quiver connections: families of vector spaces Γ_{g,h} between the vertices
//! of two quivers, with invertible transport matrices U_{g,h} that exchange
//! source-quiver edges for target-quiver edges. Connections are the 1-cells,
//! vertex-indexed intertwiner families the 2-cells.
//!
//! Basis conventions, fixed once so that matrices are well defined and files
//! portable:
//!
//! * within a Γ block, basis order is the stored label order (the loader and
//!   all constructors produce deterministic label lists);
//! * the domain of `U_{g,h}` is ⊕_{g'} E(g→g') ⊗ Γ_{g',h}, enumerated as
//!   (edge, γ) pairs sorted by edge id, then γ position;
//! * the codomain is ⊕_{h'} Γ_{g,h'} ⊗ E(h'→h), enumerated as (γ, edge)
//!   pairs sorted by γ label, then edge id (ties broken by block).

mod ideal_check;
mod morphism;
mod transport;

pub use ideal_check::{check_ideally_connected, IdealCheck, IdealityWitness};
pub use morphism::{associator, hom_basis, unitor_left, unitor_right, ConnectionMorphism};
pub use transport::{GammaRef, MixedPathVector, MixedTerm};

use std::collections::BTreeMap;

use crate::error::ConnectionError;
use crate::linalg::{Field, Matrix};
use crate::quiver::Quiver;

/// A connection `(U, Γ)` from `source` to `target`. Invariants: every stored
/// `U` block is square and invertible, with dimensions matching the Γ family;
/// Γ blocks may be zero-dimensional (absent).
#[derive(Clone, PartialEq, Debug)]
pub struct QuiverConnection {
    source: Quiver,
    target: Quiver,
    gamma: BTreeMap<(usize, usize), Vec<String>>,
    u: BTreeMap<(usize, usize), Matrix>,
    u_inv: BTreeMap<(usize, usize), Matrix>,
    field: Field,
}

/// One basis element of the domain of `U_{g,h}`: an edge `g -> g'` paired with
/// a γ basis position in block `(g', h)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DomainSlot {
    pub edge: usize,
    pub gamma: GammaRef,
}

/// One basis element of the codomain of `U_{g,h}`: a γ basis position in
/// block `(g, h')` paired with an edge `h' -> h`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CodomainSlot {
    pub gamma: GammaRef,
    pub edge: usize,
}

impl QuiverConnection {
    /// Builds and fully validates a connection: label uniqueness, dimension
    /// balance of every `U` block, and invertibility (the inverse blocks are
    /// computed here and cached).
    pub fn new(
        source: Quiver,
        target: Quiver,
        gamma: BTreeMap<(usize, usize), Vec<String>>,
        u: BTreeMap<(usize, usize), Matrix>,
        field: Field,
    ) -> Result<Self, ConnectionError> {
        let gamma: BTreeMap<(usize, usize), Vec<String>> =
            gamma.into_iter().filter(|(_, labels)| !labels.is_empty()).collect();
        for (&(g, h), labels) in &gamma {
            let mut seen = labels.clone();
            seen.sort();
            for w in seen.windows(2) {
                if w[0] == w[1] {
                    return Err(ConnectionError::DuplicateGammaLabel {
                        g: source.vertex_id(g).to_string(),
                        h: target.vertex_id(h).to_string(),
                        label: w[0].clone(),
                    });
                }
            }
        }

        let mut conn = QuiverConnection {
            source,
            target,
            gamma,
            u: BTreeMap::new(),
            u_inv: BTreeMap::new(),
            field,
        };

        for g in 0..conn.source.vertex_count() {
            for h in 0..conn.target.vertex_count() {
                let dom = conn.domain_dim(g, h);
                let cod = conn.codomain_dim(g, h);
                let block = u.get(&(g, h));
                let (rows, cols) = block.map_or((0, 0), |m| (m.rows(), m.cols()));
                if rows != cod || cols != dom {
                    if dom == 0 && cod == 0 && block.is_none() {
                        continue;
                    }
                    return Err(ConnectionError::BlockShape {
                        g: conn.source.vertex_id(g).to_string(),
                        h: conn.target.vertex_id(h).to_string(),
                        rows,
                        cols,
                        expected_rows: cod,
                        expected_cols: dom,
                    });
                }
                if dom != cod {
                    return Err(ConnectionError::BlockShape {
                        g: conn.source.vertex_id(g).to_string(),
                        h: conn.target.vertex_id(h).to_string(),
                        rows,
                        cols,
                        expected_rows: dom.max(cod),
                        expected_cols: dom.max(cod),
                    });
                }
                if dom == 0 {
                    continue;
                }
                let m = block.unwrap().clone();
                let inv = m.inverse().ok_or_else(|| ConnectionError::SingularBlock {
                    g: conn.source.vertex_id(g).to_string(),
                    h: conn.target.vertex_id(h).to_string(),
                })?;
                conn.u.insert((g, h), m);
                conn.u_inv.insert((g, h), inv);
            }
        }
        Ok(conn)
    }

    /// Basis-enumeration probe: a connection skeleton with no `U` blocks,
    /// used internally to fix domain/codomain orders before the blocks are
    /// solved for. Never validated and never exposed.
    pub(crate) fn skeleton(
        source: Quiver,
        target: Quiver,
        gamma: BTreeMap<(usize, usize), Vec<String>>,
        field: Field,
    ) -> Self {
        let gamma = gamma.into_iter().filter(|(_, labels)| !labels.is_empty()).collect();
        QuiverConnection { source, target, gamma, u: BTreeMap::new(), u_inv: BTreeMap::new(), field }
    }

    /// The identity connection on `q`: Γ_{g,h} = k when g = h (labelled by the
    /// vertex id) and 0 otherwise; every `U` block is the canonical relabeling
    /// E(g→h) ⊗ k → k ⊗ E(g→h), an identity matrix in these conventions.
    pub fn identity(q: &Quiver, field: Field) -> Self {
        let mut gamma = BTreeMap::new();
        for v in 0..q.vertex_count() {
            gamma.insert((v, v), vec![q.vertex_id(v).to_string()]);
        }
        let mut u = BTreeMap::new();
        for g in 0..q.vertex_count() {
            for h in 0..q.vertex_count() {
                let n = q.edges_between(g, h).len();
                if n > 0 {
                    u.insert((g, h), Matrix::identity(field, n));
                }
            }
        }
        QuiverConnection::new(q.clone(), q.clone(), gamma, u, field)
            .expect("identity connection is always valid")
    }

    pub fn source(&self) -> &Quiver {
        &self.source
    }

    pub fn target(&self) -> &Quiver {
        &self.target
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn gamma_labels(&self, g: usize, h: usize) -> &[String] {
        self.gamma.get(&(g, h)).map_or(&[], Vec::as_slice)
    }

    pub fn gamma_dim(&self, g: usize, h: usize) -> usize {
        self.gamma_labels(g, h).len()
    }

    pub fn gamma_blocks(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<String>)> {
        self.gamma.iter()
    }

    pub fn total_gamma_dim(&self) -> usize {
        self.gamma.values().map(Vec::len).sum()
    }

    pub fn u_block(&self, g: usize, h: usize) -> Option<&Matrix> {
        self.u.get(&(g, h))
    }

    pub fn u_inv_block(&self, g: usize, h: usize) -> Option<&Matrix> {
        self.u_inv.get(&(g, h))
    }

    pub fn label_of(&self, gamma: GammaRef) -> &str {
        &self.gamma_labels(gamma.g, gamma.h)[gamma.index]
    }

    /// Domain basis of `U_{g,h}`: (edge, γ) sorted by edge id then γ position.
    pub fn domain_basis(&self, g: usize, h: usize) -> Vec<DomainSlot> {
        let mut out = Vec::new();
        for &e in self.source.out_edges(g) {
            let gp = self.source.edge(e).tgt;
            for index in 0..self.gamma_dim(gp, h) {
                out.push(DomainSlot { edge: e, gamma: GammaRef { g: gp, h, index } });
            }
        }
        out
    }

    /// Codomain basis of `U_{g,h}`: (γ, edge) sorted by γ label then edge id.
    pub fn codomain_basis(&self, g: usize, h: usize) -> Vec<CodomainSlot> {
        let mut out = Vec::new();
        for hp in 0..self.target.vertex_count() {
            for index in 0..self.gamma_dim(g, hp) {
                for e in self.target.edges_between(hp, h) {
                    out.push(CodomainSlot { gamma: GammaRef { g, h: hp, index }, edge: e });
                }
            }
        }
        out.sort_by(|a, b| {
            (self.label_of(a.gamma), a.edge, a.gamma.h)
                .cmp(&(self.label_of(b.gamma), b.edge, b.gamma.h))
        });
        out
    }

    pub fn domain_dim(&self, g: usize, h: usize) -> usize {
        self.source
            .out_edges(g)
            .iter()
            .map(|&e| self.gamma_dim(self.source.edge(e).tgt, h))
            .sum()
    }

    pub fn codomain_dim(&self, g: usize, h: usize) -> usize {
        (0..self.target.vertex_count())
            .map(|hp| self.gamma_dim(g, hp) * self.target.edges_between(hp, h).len())
            .sum()
    }

    pub(crate) fn domain_index(&self, g: usize, h: usize, slot: &DomainSlot) -> usize {
        self.domain_basis(g, h)
            .iter()
            .position(|s| s == slot)
            .expect("slot belongs to this block")
    }

    pub(crate) fn codomain_index(&self, g: usize, h: usize, slot: &CodomainSlot) -> usize {
        self.codomain_basis(g, h)
            .iter()
            .position(|s| s == slot)
            .expect("slot belongs to this block")
    }

    /// Composite connection: `self` from G to H followed by `second` from H
    /// to K. Basis of (Γ⊗Δ)_{i,j} is ordered by middle vertex, then the two
    /// factor positions; the `U` blocks are (id_Γ ⊗ V) ∘ (U ⊗ id_Δ).
    pub fn compose(&self, second: &QuiverConnection) -> Result<QuiverConnection, ConnectionError> {
        if self.target != second.source {
            return Err(ConnectionError::NotComposable);
        }
        assert_eq!(self.field, second.field, "mixed fields");
        let g_quiver = &self.source;
        let k_quiver = &second.target;

        let mut gamma = BTreeMap::new();
        for i in 0..g_quiver.vertex_count() {
            for j in 0..k_quiver.vertex_count() {
                let slots = self.composite_slots(second, i, j);
                if slots.is_empty() {
                    continue;
                }
                let mut labels: Vec<String> = slots
                    .iter()
                    .map(|&(k, gi, di)| {
                        format!(
                            "{}|{}|{}",
                            self.target.vertex_id(k),
                            self.gamma_labels(i, k)[gi],
                            second.gamma_labels(k, j)[di]
                        )
                    })
                    .collect();
                // pathological label collisions (user labels containing the
                // separator) are disambiguated by position
                let mut sorted = labels.clone();
                sorted.sort();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    for (pos, l) in labels.iter_mut().enumerate() {
                        *l = format!("{l}#{pos}");
                    }
                }
                gamma.insert((i, j), labels);
            }
        }

        let composite = QuiverConnection {
            source: g_quiver.clone(),
            target: k_quiver.clone(),
            gamma,
            u: BTreeMap::new(),
            u_inv: BTreeMap::new(),
            field: self.field,
        };

        let mut u = BTreeMap::new();
        for i in 0..g_quiver.vertex_count() {
            for j in 0..k_quiver.vertex_count() {
                let dom = composite.domain_basis(i, j);
                let cod = composite.codomain_basis(i, j);
                if dom.is_empty() && cod.is_empty() {
                    continue;
                }
                let mut block = Matrix::zeros(self.field, cod.len(), dom.len());
                for (col, slot) in dom.iter().enumerate() {
                    // slot: edge e: i -> i', composite γ at (i', j) = (k, gi, di)
                    let ip = g_quiver.edge(slot.edge).tgt;
                    let (k, gi, di) = self.composite_slots(second, ip, j)[slot.gamma.index];
                    // step 1: U_{i,k} applied to (e, γ@(i',k))
                    let u_dom_slot =
                        DomainSlot { edge: slot.edge, gamma: GammaRef { g: ip, h: k, index: gi } };
                    let ucol = self.domain_index(i, k, &u_dom_slot);
                    let ublock = self.u_block(i, k).expect("nonzero domain implies block");
                    let ucod = self.codomain_basis(i, k);
                    for (urow, mid) in ucod.iter().enumerate() {
                        let c1 = ublock.get(urow, ucol);
                        if c1.is_zero() {
                            continue;
                        }
                        // mid: γ'@(i,k'), f: k' -> k
                        let kp = mid.gamma.h;
                        // step 2: V_{k',j} applied to (f, δ@(k,j))
                        let v_dom_slot = DomainSlot {
                            edge: mid.edge,
                            gamma: GammaRef { g: k, h: j, index: di },
                        };
                        let vcol = second.domain_index(kp, j, &v_dom_slot);
                        let vblock = second.u_block(kp, j).expect("nonzero domain implies block");
                        let vcod = second.codomain_basis(kp, j);
                        for (vrow, out) in vcod.iter().enumerate() {
                            let c2 = vblock.get(vrow, vcol);
                            if c2.is_zero() {
                                continue;
                            }
                            // out: δ'@(k',j'), x: j' -> j
                            let jp = out.gamma.h;
                            let comp_index = self
                                .composite_slots(second, i, jp)
                                .iter()
                                .position(|&s| s == (kp, mid.gamma.index, out.gamma.index))
                                .expect("slot exists in the composite enumeration");
                            let cod_slot = CodomainSlot {
                                gamma: GammaRef { g: i, h: jp, index: comp_index },
                                edge: out.edge,
                            };
                            let row = composite.codomain_index(i, j, &cod_slot);
                            let v = block.get(row, col).add(&c1.mul(c2));
                            block.set(row, col, v);
                        }
                    }
                }
                u.insert((i, j), block);
            }
        }
        QuiverConnection::new(composite.source, composite.target, composite.gamma, u, self.field)
    }

    /// Transports the connection along quiver isomorphisms of both endpoints:
    /// `src_vertex_map[old] = new` etc. The Γ labels are kept; `U` blocks are
    /// re-indexed to the new quivers' basis enumerations.
    pub fn relabel(
        &self,
        new_source: Quiver,
        new_target: Quiver,
        src_vertex_map: &[usize],
        src_edge_map: &[usize],
        tgt_vertex_map: &[usize],
        tgt_edge_map: &[usize],
    ) -> Result<QuiverConnection, ConnectionError> {
        let mut gamma = BTreeMap::new();
        for (&(g, h), labels) in &self.gamma {
            gamma.insert((src_vertex_map[g], tgt_vertex_map[h]), labels.clone());
        }
        let skeleton = QuiverConnection {
            source: new_source,
            target: new_target,
            gamma,
            u: BTreeMap::new(),
            u_inv: BTreeMap::new(),
            field: self.field,
        };
        let mut src_edge_inv = vec![usize::MAX; new_source_len(src_edge_map)];
        for (old, &new) in src_edge_map.iter().enumerate() {
            src_edge_inv[new] = old;
        }
        let mut tgt_edge_inv = vec![usize::MAX; new_source_len(tgt_edge_map)];
        for (old, &new) in tgt_edge_map.iter().enumerate() {
            tgt_edge_inv[new] = old;
        }
        let mut src_vertex_inv = vec![usize::MAX; new_source_len(src_vertex_map)];
        for (old, &new) in src_vertex_map.iter().enumerate() {
            src_vertex_inv[new] = old;
        }
        let mut tgt_vertex_inv = vec![usize::MAX; new_source_len(tgt_vertex_map)];
        for (old, &new) in tgt_vertex_map.iter().enumerate() {
            tgt_vertex_inv[new] = old;
        }
        let mut u = BTreeMap::new();
        for g in 0..skeleton.source.vertex_count() {
            for h in 0..skeleton.target.vertex_count() {
                let dom = skeleton.domain_basis(g, h);
                let cod = skeleton.codomain_basis(g, h);
                if dom.is_empty() && cod.is_empty() {
                    continue;
                }
                let old_g = src_vertex_inv[g];
                let old_h = tgt_vertex_inv[h];
                let old_block = self.u_block(old_g, old_h).ok_or(
                    ConnectionError::NotComposable,
                )?;
                let mut block = Matrix::zeros(self.field, cod.len(), dom.len());
                for (col, slot) in dom.iter().enumerate() {
                    let old_slot = DomainSlot {
                        edge: src_edge_inv[slot.edge],
                        gamma: GammaRef {
                            g: src_vertex_inv[slot.gamma.g],
                            h: tgt_vertex_inv[slot.gamma.h],
                            index: slot.gamma.index,
                        },
                    };
                    let old_col = self.domain_index(old_g, old_h, &old_slot);
                    for (row, cslot) in cod.iter().enumerate() {
                        let old_cslot = CodomainSlot {
                            gamma: GammaRef {
                                g: src_vertex_inv[cslot.gamma.g],
                                h: tgt_vertex_inv[cslot.gamma.h],
                                index: cslot.gamma.index,
                            },
                            edge: tgt_edge_inv[cslot.edge],
                        };
                        let old_row = self.codomain_index(old_g, old_h, &old_cslot);
                        block.set(row, col, old_block.get(old_row, old_col).clone());
                    }
                }
                u.insert((g, h), block);
            }
        }
        QuiverConnection::new(skeleton.source, skeleton.target, skeleton.gamma, u, self.field)
    }

    /// Enumeration of composite basis positions at (i, j): (middle vertex,
    /// γ position in Γ_{i,k}, δ position in Δ_{k,j}), in block order.
    pub fn composite_slots(
        &self,
        second: &QuiverConnection,
        i: usize,
        j: usize,
    ) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.target.vertex_count() {
            for gi in 0..self.gamma_dim(i, k) {
                for di in 0..second.gamma_dim(k, j) {
                    out.push((k, gi, di));
                }
            }
        }
        out
    }

}

fn new_source_len(map: &[usize]) -> usize {
    map.iter().copied().max().map_or(0, |m| m + 1)
}

#[cfg(test)]
pub(crate) mod test_fixtures {
    use super::*;

    pub fn scalar_loop_connection(c: i64) -> QuiverConnection {
        let q = Quiver::new(vec!["v".into()], vec![("x".into(), "v".into(), "v".into())]).unwrap();
        let field = Field::Rational;
        let mut gamma = BTreeMap::new();
        gamma.insert((0, 0), vec!["g".to_string()]);
        let mut u = BTreeMap::new();
        u.insert((0, 0), Matrix::from_i64(field, &[&[c]]));
        QuiverConnection::new(q.clone(), q, gamma, u, field).unwrap()
    }
}
