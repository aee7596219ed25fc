use std::collections::BTreeMap;

use super::{Path, PathVector, Quiver};
use crate::error::QuiverError;
use crate::linalg::{Field, Scalar, Subspace};

/// Per-(source, target) normal-form data: the paths of length < n from s to t
/// (position = coordinate), and the subspace of their span generated by the
/// ideal. Coordinates not behind a pivot are the reduced paths.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdealBlock {
    pub paths: Vec<Path>,
    pub space: Subspace,
}

impl IdealBlock {
    fn coords(&self, v: &PathVector) -> Vec<Scalar> {
        let mut out = vec![v.field().zero(); self.paths.len()];
        for (p, c) in v.terms() {
            let i = self.paths.binary_search(p).expect("path belongs to this block");
            out[i] = c.clone();
        }
        out
    }

    fn from_coords(&self, field: Field, coords: &[Scalar]) -> PathVector {
        let mut out = PathVector::zero(field);
        for (i, c) in coords.iter().enumerate() {
            out.add_term(self.paths[i].clone(), c.clone());
        }
        out
    }
}

/// An admissible ideal of the path algebra: generated by the listed elements
/// plus, implicitly, every path of length >= the nilpotency bound `n`.
///
/// Generators must be endpoint-homogeneous with all terms of length >= 2 (the
/// file loader splits mixed input before it gets here). Construction closes
/// the generators under single-arrow left/right multiplication, truncating at
/// length `n`, until the per-(source, target) subspaces stabilize.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissibleIdeal {
    field: Field,
    bound: usize,
    generators: Vec<PathVector>,
    blocks: BTreeMap<(usize, usize), IdealBlock>,
}

impl AdmissibleIdeal {
    pub fn new(
        quiver: &Quiver,
        generators: Vec<PathVector>,
        bound: usize,
        field: Field,
    ) -> Result<Self, QuiverError> {
        if bound < 2 {
            return Err(QuiverError::BadNilpotencyBound(bound));
        }
        // validate and truncate generators
        let mut gens = Vec::new();
        for g in generators {
            let mut endpoints: Option<(usize, usize)> = None;
            let mut truncated = PathVector::zero(field);
            for (p, c) in g.terms() {
                quiver.check_path(p)?;
                if p.len() < 2 {
                    return Err(QuiverError::ShortGeneratorTerm(p.len()));
                }
                let ep = (p.source(quiver), p.target(quiver));
                match endpoints {
                    None => endpoints = Some(ep),
                    Some(prev) if prev != ep => {
                        return Err(QuiverError::MixedEndpoints(
                            quiver.vertex_id(prev.0).to_string(),
                            quiver.vertex_id(prev.1).to_string(),
                            quiver.vertex_id(ep.0).to_string(),
                            quiver.vertex_id(ep.1).to_string(),
                        ))
                    }
                    Some(_) => {}
                }
                if p.len() < bound {
                    truncated.add_term(p.clone(), c.clone());
                }
            }
            if !truncated.is_zero() {
                gens.push(truncated);
            }
        }

        // coordinate blocks: all paths of length < bound per (s, t)
        let mut blocks: BTreeMap<(usize, usize), (Vec<Path>, Vec<Vec<Scalar>>)> = BTreeMap::new();
        for p in quiver.enumerate_paths(bound.saturating_sub(1), None, None) {
            let key = (p.source(quiver), p.target(quiver));
            blocks.entry(key).or_default().0.push(p);
        }
        for (paths, _) in blocks.values_mut() {
            paths.sort();
        }

        let coords_of = |blocks: &BTreeMap<(usize, usize), (Vec<Path>, Vec<Vec<Scalar>>)>,
                         v: &PathVector,
                         key: (usize, usize)|
         -> Vec<Scalar> {
            let paths = &blocks[&key].0;
            let mut out = vec![field.zero(); paths.len()];
            for (p, c) in v.terms() {
                let i = paths.binary_search(p).expect("path in block");
                out[i] = c.clone();
            }
            out
        };

        // saturate: repeatedly multiply current elements by arrows on both
        // sides, truncating to length < bound, until no block grows
        let mut spans: BTreeMap<(usize, usize), Subspace> = blocks
            .keys()
            .map(|&k| (k, Subspace::zero(field, blocks[&k].0.len())))
            .collect();
        let mut worklist: Vec<PathVector> = gens.clone();
        let enqueue = |spans: &mut BTreeMap<(usize, usize), Subspace>,
                           v: PathVector,
                           worklist: &mut Vec<PathVector>| {
            if v.is_zero() {
                return;
            }
            let key = {
                let (p, _) = v.terms().next().unwrap();
                (p.source(quiver), p.target(quiver))
            };
            let coords = coords_of(&blocks, &v, key);
            let span = spans.get_mut(&key).unwrap();
            if span.insert_row(&coords) {
                worklist.push(v);
            }
        };
        let initial: Vec<PathVector> = std::mem::take(&mut worklist);
        for v in initial {
            enqueue(&mut spans, v, &mut worklist);
        }
        while let Some(v) = worklist.pop() {
            let (src, tgt) = {
                let (p, _) = v.terms().next().unwrap();
                (p.source(quiver), p.target(quiver))
            };
            for e in 0..quiver.edge_count() {
                let edge = quiver.edge(e);
                let arrow = Path::from_edge_indices(vec![e]);
                if edge.tgt == src {
                    let left = PathVector::single(field, arrow.clone(), field.one())
                        .mul(&v, quiver)?;
                    enqueue(&mut spans, truncate(left, bound), &mut worklist);
                }
                if edge.src == tgt {
                    let right =
                        v.mul(&PathVector::single(field, arrow, field.one()), quiver)?;
                    enqueue(&mut spans, truncate(right, bound), &mut worklist);
                }
            }
        }

        let blocks = blocks
            .into_iter()
            .map(|(k, (paths, _))| {
                let space = spans.remove(&k).unwrap();
                (k, IdealBlock { paths, space })
            })
            .collect();
        Ok(AdmissibleIdeal { field, bound, generators: gens, blocks })
    }

    /// The truncation ideal: no generators, every path of length >= n.
    pub fn truncation(quiver: &Quiver, bound: usize, field: Field) -> Result<Self, QuiverError> {
        AdmissibleIdeal::new(quiver, Vec::new(), bound, field)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn generators(&self) -> &[PathVector] {
        &self.generators
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, usize), &IdealBlock)> {
        self.blocks.iter()
    }

    pub fn block(&self, src: usize, tgt: usize) -> Option<&IdealBlock> {
        self.blocks.get(&(src, tgt))
    }

    /// Total dimension of the ideal below the truncation bound.
    pub fn dim_below_bound(&self) -> usize {
        self.blocks.values().map(|b| b.space.dim()).sum()
    }

    /// The unique reduced representative of `v` modulo the ideal: terms of
    /// length >= n are dropped, the rest reduced against the per-(s, t)
    /// subspaces by rref elimination.
    pub fn normal_form(&self, v: &PathVector, quiver: &Quiver) -> PathVector {
        let mut out = PathVector::zero(self.field);
        let mut truncated = PathVector::zero(self.field);
        for (p, c) in v.terms() {
            if p.len() < self.bound {
                truncated.add_term(p.clone(), c.clone());
            }
        }
        for (key, component) in truncated.split_by_endpoints(quiver) {
            let block = self.blocks.get(&key).expect("paths below bound have a block");
            let coords = block.coords(&component);
            let reduced = block.space.reduce(&coords);
            out = out.add(&block.from_coords(self.field, &reduced));
        }
        out
    }

    /// True iff `v` lies in the ideal.
    pub fn contains(&self, v: &PathVector, quiver: &Quiver) -> bool {
        self.normal_form(v, quiver).is_zero()
    }
}

fn truncate(v: PathVector, bound: usize) -> PathVector {
    let field = v.field();
    let mut out = PathVector::zero(field);
    for (p, c) in v.terms() {
        if p.len() < bound {
            out.add_term(p.clone(), c.clone());
        }
    }
    out
}

/// A quiver together with an admissible ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundQuiver {
    pub quiver: Quiver,
    pub ideal: AdmissibleIdeal,
}

impl BoundQuiver {
    pub fn new(quiver: Quiver, ideal: AdmissibleIdeal) -> Self {
        BoundQuiver { quiver, ideal }
    }

    pub fn field(&self) -> Field {
        self.ideal.field()
    }
}
