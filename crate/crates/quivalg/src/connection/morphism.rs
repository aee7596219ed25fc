use std::collections::BTreeMap;

use super::{DomainSlot, QuiverConnection};
use crate::error::ConnectionError;
use crate::linalg::{Matrix, Scalar, Subspace};

/// A 2-morphism between two connections over the same quiver pair: a family
/// of linear maps f_{g,h}: Γ_{g,h} → Δ_{g,h}. Whether the family actually
/// intertwines the two transports is checked by [`ConnectionMorphism::check`].
#[derive(Clone, PartialEq, Debug)]
pub struct ConnectionMorphism {
    source: QuiverConnection,
    target: QuiverConnection,
    blocks: BTreeMap<(usize, usize), Matrix>,
}

impl ConnectionMorphism {
    /// Builds a morphism, validating block shapes (dim Δ × dim Γ per vertex
    /// pair; blocks with both dimensions zero may be omitted).
    pub fn new(
        source: QuiverConnection,
        target: QuiverConnection,
        blocks: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Self, ConnectionError> {
        if source.source() != target.source() || source.target() != target.target() {
            return Err(ConnectionError::MorphismQuiverMismatch);
        }
        let mut normalized = BTreeMap::new();
        for g in 0..source.source().vertex_count() {
            for h in 0..source.target().vertex_count() {
                let rows = target.gamma_dim(g, h);
                let cols = source.gamma_dim(g, h);
                let block = blocks.get(&(g, h));
                match block {
                    Some(m) if m.rows() == rows && m.cols() == cols => {
                        normalized.insert((g, h), m.clone());
                    }
                    None if rows == 0 || cols == 0 => {
                        normalized.insert((g, h), Matrix::zeros(source.field(), rows, cols));
                    }
                    _ => {
                        let (br, bc) = block.map_or((0, 0), |m| (m.rows(), m.cols()));
                        return Err(ConnectionError::MorphismShape {
                            g: source.source().vertex_id(g).to_string(),
                            h: source.target().vertex_id(h).to_string(),
                            rows: br,
                            cols: bc,
                            expected_rows: rows,
                            expected_cols: cols,
                        });
                    }
                }
            }
        }
        Ok(ConnectionMorphism { source, target, blocks: normalized })
    }

    pub fn identity(c: &QuiverConnection) -> Self {
        let mut blocks = BTreeMap::new();
        for (&(g, h), labels) in c.gamma_blocks() {
            blocks.insert((g, h), Matrix::identity(c.field(), labels.len()));
        }
        ConnectionMorphism::new(c.clone(), c.clone(), blocks).expect("identity is well shaped")
    }

    pub fn source(&self) -> &QuiverConnection {
        &self.source
    }

    pub fn target(&self) -> &QuiverConnection {
        &self.target
    }

    pub fn block(&self, g: usize, h: usize) -> &Matrix {
        &self.blocks[&(g, h)]
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, usize), &Matrix)> {
        self.blocks.iter()
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        let blocks = self.blocks.iter().map(|(&key, m)| (key, m.scale(k))).collect();
        ConnectionMorphism { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn add(&self, other: &ConnectionMorphism) -> Self {
        assert_eq!(self.source, other.source, "morphism sources differ");
        assert_eq!(self.target, other.target, "morphism targets differ");
        let blocks = self
            .blocks
            .iter()
            .map(|(&key, m)| (key, m.add(&other.blocks[&key])))
            .collect();
        ConnectionMorphism { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    /// The intertwiner law, exactly, block by block:
    /// V_{g,h} ∘ (id_E ⊗ f) = (f ⊗ id_E) ∘ U_{g,h} for every (g, h).
    /// Returns the first violated (g, g', h, h') sub-block on failure.
    pub fn check(&self) -> Result<(), (usize, usize, usize, usize)> {
        let src = &self.source;
        let tgt = &self.target;
        for g in 0..src.source().vertex_count() {
            for h in 0..src.target().vertex_count() {
                let lhs = self.law_lhs(g, h);
                let rhs = self.law_rhs(g, h);
                if lhs != rhs {
                    // locate the first differing entry and name its sub-block
                    let tgt_cod = tgt.codomain_basis(g, h);
                    let src_dom = src.domain_basis(g, h);
                    for r in 0..lhs.rows() {
                        for c in 0..lhs.cols() {
                            if lhs.get(r, c) != rhs.get(r, c) {
                                let gp = src.source().edge(src_dom[c].edge).tgt;
                                let hp = tgt_cod[r].gamma.h;
                                return Err((g, gp, h, hp));
                            }
                        }
                    }
                    unreachable!("matrices differ in some entry");
                }
            }
        }
        Ok(())
    }

    pub fn is_morphism(&self) -> bool {
        self.check().is_ok()
    }

    /// V_{g,h} ∘ (id ⊗ f): apply f to the γ part of each domain slot, then V.
    fn law_lhs(&self, g: usize, h: usize) -> Matrix {
        let src = &self.source;
        let tgt = &self.target;
        let field = src.field();
        let src_dom = src.domain_basis(g, h);
        let tgt_dom = tgt.domain_basis(g, h);
        let mut dmap = Matrix::zeros(field, tgt_dom.len(), src_dom.len());
        for (col, slot) in src_dom.iter().enumerate() {
            let gp = src.source().edge(slot.edge).tgt;
            let f = self.block(gp, h);
            for fi in 0..f.rows() {
                let v = f.get(fi, slot.gamma.index);
                if v.is_zero() {
                    continue;
                }
                let trow = tgt.domain_index(
                    g,
                    h,
                    &DomainSlot {
                        edge: slot.edge,
                        gamma: super::GammaRef { g: gp, h, index: fi },
                    },
                );
                dmap.set(trow, col, v.clone());
            }
        }
        match tgt.u_block(g, h) {
            Some(v) => v.mul(&dmap),
            None => Matrix::zeros(field, tgt.codomain_dim(g, h), src_dom.len()),
        }
    }

    /// (f ⊗ id) ∘ U_{g,h}: U first, then f on the γ part of codomain slots.
    fn law_rhs(&self, g: usize, h: usize) -> Matrix {
        let src = &self.source;
        let tgt = &self.target;
        let field = src.field();
        let src_cod = src.codomain_basis(g, h);
        let tgt_cod = tgt.codomain_basis(g, h);
        let mut cmap = Matrix::zeros(field, tgt_cod.len(), src_cod.len());
        for (col, slot) in src_cod.iter().enumerate() {
            let hp = slot.gamma.h;
            let f = self.block(g, hp);
            for fi in 0..f.rows() {
                let v = f.get(fi, slot.gamma.index);
                if v.is_zero() {
                    continue;
                }
                let trow = tgt.codomain_index(
                    g,
                    h,
                    &super::CodomainSlot {
                        gamma: super::GammaRef { g, h: hp, index: fi },
                        edge: slot.edge,
                    },
                );
                cmap.set(trow, col, v.clone());
            }
        }
        match src.u_block(g, h) {
            Some(u) => cmap.mul(u),
            None => Matrix::zeros(field, tgt_cod.len(), src.domain_dim(g, h)),
        }
    }

    /// Vertical composition: `other` after `self` (self: Γ→Δ, other: Δ→Ε).
    /// The composite is re-checked against the intertwiner law.
    pub fn then(&self, other: &ConnectionMorphism) -> Result<ConnectionMorphism, ConnectionError> {
        if self.target != other.source {
            return Err(ConnectionError::MorphismQuiverMismatch);
        }
        let blocks = self
            .blocks
            .iter()
            .map(|(&key, m)| (key, other.blocks[&key].mul(m)))
            .collect();
        let composite = ConnectionMorphism::new(self.source.clone(), other.target.clone(), blocks)?;
        composite.recheck()?;
        Ok(composite)
    }

    /// Horizontal composition on composites: self: Γ→Γ' over (G,H),
    /// other: Δ→Δ' over (H,K); result Γ⊗Δ → Γ'⊗Δ' with blocks acting as
    /// f ⊗ g per middle vertex.
    pub fn tensor(&self, other: &ConnectionMorphism) -> Result<ConnectionMorphism, ConnectionError> {
        if self.source.target() != other.source.source() {
            return Err(ConnectionError::NotComposable);
        }
        let src = self.source.compose(&other.source)?;
        let tgt = self.target.compose(&other.target)?;
        let field = src.field();
        let mut blocks = BTreeMap::new();
        for i in 0..src.source().vertex_count() {
            for j in 0..src.target().vertex_count() {
                let src_slots = self.source.composite_slots(&other.source, i, j);
                let tgt_slots = self.target.composite_slots(&other.target, i, j);
                let mut m = Matrix::zeros(field, tgt_slots.len(), src_slots.len());
                for (col, &(k, gi, di)) in src_slots.iter().enumerate() {
                    let f = self.block(i, k);
                    let g = other.block(k, j);
                    for fr in 0..f.rows() {
                        let fv = f.get(fr, gi);
                        if fv.is_zero() {
                            continue;
                        }
                        for gr in 0..g.rows() {
                            let gv = g.get(gr, di);
                            if gv.is_zero() {
                                continue;
                            }
                            let row = tgt_slots
                                .iter()
                                .position(|&s| s == (k, fr, gr))
                                .expect("target slot exists");
                            m.set(row, col, fv.mul(gv));
                        }
                    }
                }
                if m.rows() > 0 || m.cols() > 0 {
                    blocks.insert((i, j), m);
                }
            }
        }
        let composite = ConnectionMorphism::new(src, tgt, blocks)?;
        composite.recheck()?;
        Ok(composite)
    }

    fn recheck(&self) -> Result<(), ConnectionError> {
        self.check().map_err(|(g, gp, h, hp)| ConnectionError::CompositeLawViolated {
            g,
            gp,
            h,
            hp,
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.blocks.values().all(|m| m.is_square() && (m.rows() == 0 || m.inverse().is_some()))
    }

    pub fn inverse(&self) -> Option<ConnectionMorphism> {
        let mut blocks = BTreeMap::new();
        for (&key, m) in &self.blocks {
            if !m.is_square() {
                return None;
            }
            let inv = if m.rows() == 0 { m.clone() } else { m.inverse()? };
            blocks.insert(key, inv);
        }
        Some(
            ConnectionMorphism::new(self.target.clone(), self.source.clone(), blocks)
                .expect("inverse blocks have transposed shapes"),
        )
    }
}

/// Canonical relabeling Id_G ⊗ Γ → Γ (identity blocks in matched bases).
pub fn unitor_left(c: &QuiverConnection) -> Result<ConnectionMorphism, ConnectionError> {
    let id = QuiverConnection::identity(c.source(), c.field());
    let composite = id.compose(c)?;
    let mut blocks = BTreeMap::new();
    for g in 0..c.source().vertex_count() {
        for h in 0..c.target().vertex_count() {
            let slots = id.composite_slots(c, g, h);
            // slots are (k = g, 0, γ index): the bijection is positional
            let mut m = Matrix::zeros(c.field(), c.gamma_dim(g, h), slots.len());
            for (col, &(k, _gi, di)) in slots.iter().enumerate() {
                debug_assert_eq!(k, g);
                m.set(di, col, c.field().one());
            }
            blocks.insert((g, h), m);
        }
    }
    ConnectionMorphism::new(composite, c.clone(), blocks)
}

/// Canonical relabeling Γ ⊗ Id_H → Γ.
pub fn unitor_right(c: &QuiverConnection) -> Result<ConnectionMorphism, ConnectionError> {
    let id = QuiverConnection::identity(c.target(), c.field());
    let composite = c.compose(&id)?;
    let mut blocks = BTreeMap::new();
    for g in 0..c.source().vertex_count() {
        for h in 0..c.target().vertex_count() {
            let slots = c.composite_slots(&id, g, h);
            let mut m = Matrix::zeros(c.field(), c.gamma_dim(g, h), slots.len());
            for (col, &(k, gi, _di)) in slots.iter().enumerate() {
                debug_assert_eq!(k, h);
                m.set(gi, col, c.field().one());
            }
            blocks.insert((g, h), m);
        }
    }
    ConnectionMorphism::new(composite, c.clone(), blocks)
}

/// Canonical relabeling ((Γ⊗Δ)⊗Ε) → (Γ⊗(Δ⊗Ε)): a permutation-identity on the
/// underlying (γ, δ, ε) triples.
pub fn associator(
    a: &QuiverConnection,
    b: &QuiverConnection,
    c: &QuiverConnection,
) -> Result<ConnectionMorphism, ConnectionError> {
    let ab = a.compose(b)?;
    let bc = b.compose(c)?;
    let left = ab.compose(c)?;
    let right = a.compose(&bc)?;
    let field = a.field();
    let mut blocks = BTreeMap::new();
    for i in 0..a.source().vertex_count() {
        for j in 0..c.target().vertex_count() {
            let left_slots = ab.composite_slots(c, i, j);
            let right_slots = a.composite_slots(&bc, i, j);
            let mut m = Matrix::zeros(field, right_slots.len(), left_slots.len());
            for (col, &(l, ab_index, ei)) in left_slots.iter().enumerate() {
                // ab_index inside (Γ⊗Δ)_{i,l} -> (k, gi, di)
                let (k, gi, di) = a.composite_slots(b, i, l)[ab_index];
                // right side: γ@(i,k) with (Δ⊗Ε)_{k,j} slot (l, di, ei)
                let bc_index = b
                    .composite_slots(c, k, j)
                    .iter()
                    .position(|&s| s == (l, di, ei))
                    .expect("triple exists on the right");
                let row = right_slots
                    .iter()
                    .position(|&s| s == (k, gi, bc_index))
                    .expect("triple exists in the right composite");
                m.set(row, col, field.one());
            }
            blocks.insert((i, j), m);
        }
    }
    ConnectionMorphism::new(left, right, blocks)
}

/// Basis of the space of 2-morphisms Γ → Δ, found by solving the intertwiner
/// law as one big exact linear system over all blocks.
pub fn hom_basis(
    src: &QuiverConnection,
    tgt: &QuiverConnection,
) -> Result<Vec<ConnectionMorphism>, ConnectionError> {
    if src.source() != tgt.source() || src.target() != tgt.target() {
        return Err(ConnectionError::MorphismQuiverMismatch);
    }
    let field = src.field();
    // unknown layout: per (g,h), the entries of f_{g,h} row-major
    let mut offsets = BTreeMap::new();
    let mut total = 0usize;
    for g in 0..src.source().vertex_count() {
        for h in 0..src.target().vertex_count() {
            offsets.insert((g, h), total);
            total += tgt.gamma_dim(g, h) * src.gamma_dim(g, h);
        }
    }
    let unknown = |g: usize, h: usize, row: usize, col: usize| -> usize {
        offsets[&(g, h)] + row * src.gamma_dim(g, h) + col
    };

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for g in 0..src.source().vertex_count() {
        for h in 0..src.target().vertex_count() {
            let src_dom = src.domain_basis(g, h);
            let tgt_cod = tgt.codomain_basis(g, h);
            let tgt_dom = tgt.domain_basis(g, h);
            let src_cod = src.codomain_basis(g, h);
            let ublock = src.u_block(g, h);
            let vblock = tgt.u_block(g, h);
            // equation per (output slot r in tgt codomain, input slot c in src domain):
            // Σ V[r, t] * f_{g',h}[γ_t, γ_c] (t with same edge as c)
            //   - Σ f_{g,h'}[γ_r, γ_s] * U[s, c] (s with same edge as r) = 0
            for (r, out) in tgt_cod.iter().enumerate() {
                for (c, inp) in src_dom.iter().enumerate() {
                    let mut row = vec![field.zero(); total];
                    let mut nonzero = false;
                    if let Some(v) = vblock {
                        let gp = src.source().edge(inp.edge).tgt;
                        for (t, tslot) in tgt_dom.iter().enumerate() {
                            if tslot.edge != inp.edge {
                                continue;
                            }
                            let coeff = v.get(r, t);
                            if coeff.is_zero() {
                                continue;
                            }
                            let u_idx = unknown(gp, h, tslot.gamma.index, inp.gamma.index);
                            row[u_idx] = row[u_idx].add(coeff);
                            nonzero = true;
                        }
                    }
                    if let Some(u) = ublock {
                        let hp = out.gamma.h;
                        for (s, sslot) in src_cod.iter().enumerate() {
                            if sslot.edge != out.edge || sslot.gamma.h != hp {
                                continue;
                            }
                            let coeff = u.get(s, c);
                            if coeff.is_zero() {
                                continue;
                            }
                            let u_idx = unknown(g, hp, out.gamma.index, sslot.gamma.index);
                            row[u_idx] = row[u_idx].sub(coeff);
                            nonzero = true;
                        }
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
    }

    let kernel = if rows.is_empty() {
        Subspace::full(field, total)
    } else {
        Matrix::from_rows(field, rows).kernel()
    };

    let mut out = Vec::new();
    for sol in kernel.basis_rows() {
        let mut blocks = BTreeMap::new();
        for (&(g, h), &off) in &offsets {
            let r = tgt.gamma_dim(g, h);
            let c = src.gamma_dim(g, h);
            let m = Matrix::from_fn(field, r, c, |i, j| sol[off + i * c + j].clone());
            blocks.insert((g, h), m);
        }
        out.push(ConnectionMorphism::new(src.clone(), tgt.clone(), blocks)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::test_fixtures::scalar_loop_connection;
    use super::*;
    use crate::linalg::Field;

    fn q() -> Field {
        Field::Rational
    }

    fn scalar_morphism(src: i64, tgt: i64, f: i64) -> ConnectionMorphism {
        let s = scalar_loop_connection(src);
        let t = scalar_loop_connection(tgt);
        let mut blocks = BTreeMap::new();
        blocks.insert((0, 0), Matrix::from_i64(q(), &[&[f]]));
        ConnectionMorphism::new(s, t, blocks).unwrap()
    }

    #[test]
    fn identity_family_passes() {
        let c = scalar_loop_connection(5);
        assert!(ConnectionMorphism::identity(&c).is_morphism());
    }

    #[test]
    fn mismatched_scalars_fail_the_law() {
        // loop-c to loop-d with c != d: the law forces d·f = f·c, so any
        // nonzero f fails
        let f = scalar_morphism(2, 3, 1);
        let err = f.check().unwrap_err();
        assert_eq!(err, (0, 0, 0, 0));
        // f = 0 is always a morphism
        assert!(scalar_morphism(2, 3, 0).is_morphism());
    }

    #[test]
    fn equal_scalars_accept_any_f() {
        // both sides equal c·f
        for f in [-2, 1, 7] {
            assert!(scalar_morphism(4, 4, f).is_morphism());
        }
    }

    #[test]
    fn vertical_with_identity_is_unchanged() {
        let f = scalar_morphism(4, 4, 3);
        let id = ConnectionMorphism::identity(f.target());
        let g = f.then(&id).unwrap();
        assert_eq!(g.block(0, 0), f.block(0, 0));
    }

    #[test]
    fn horizontal_of_identities_is_identity() {
        let c = scalar_loop_connection(2);
        let d = scalar_loop_connection(5);
        let idc = ConnectionMorphism::identity(&c);
        let idd = ConnectionMorphism::identity(&d);
        let h = idc.tensor(&idd).unwrap();
        assert!(h.is_morphism());
        assert_eq!(h.block(0, 0), &Matrix::identity(q(), 1));
    }

    #[test]
    fn interchange_on_scalar_loops() {
        // f1: c→c, f2: c→c vertical; g1, g2 on d: (f2∘f1)⊗(g2∘g1) = (f2⊗g2)∘(f1⊗g1)
        let f1 = scalar_morphism(2, 2, 3);
        let f2 = scalar_morphism(2, 2, -1);
        let g1 = scalar_morphism(5, 5, 2);
        let g2 = scalar_morphism(5, 5, 7);
        let lhs = f1.then(&f2).unwrap().tensor(&g1.then(&g2).unwrap()).unwrap();
        let rhs = f1.tensor(&g1).unwrap().then(&f2.tensor(&g2).unwrap()).unwrap();
        assert_eq!(lhs.block(0, 0), rhs.block(0, 0));
    }

    #[test]
    fn unitors_are_valid_invertible_morphisms() {
        let c = scalar_loop_connection(6);
        let ul = unitor_left(&c).unwrap();
        assert!(ul.is_morphism());
        assert!(ul.is_invertible());
        let ur = unitor_right(&c).unwrap();
        assert!(ur.is_morphism());
        assert!(ur.is_invertible());
    }

    #[test]
    fn associator_is_a_valid_identity_blocked_morphism() {
        let a = scalar_loop_connection(2);
        let b = scalar_loop_connection(3);
        let c = scalar_loop_connection(5);
        let assoc = associator(&a, &b, &c).unwrap();
        assert!(assoc.is_morphism());
        assert!(assoc.is_invertible());
    }

    #[test]
    fn hom_basis_of_equal_scalar_loops_is_one_dimensional() {
        let c = scalar_loop_connection(3);
        let basis = hom_basis(&c, &c).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].is_morphism());
        // distinct scalars: only the zero morphism
        let d = scalar_loop_connection(4);
        let basis = hom_basis(&c, &d).unwrap();
        assert_eq!(basis.len(), 0);
    }

    #[test]
    fn morphism_inverse_round_trip() {
        let f = scalar_morphism(4, 4, 3);
        let finv = f.inverse().unwrap();
        let round = f.then(&finv).unwrap();
        assert_eq!(round.block(0, 0), &Matrix::identity(q(), 1));
    }
}
