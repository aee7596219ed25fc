use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::Quiver;
use crate::error::QuiverError;
use crate::linalg::{Field, Scalar};

/// A path in a quiver: either the trivial path at a vertex (length 0), or a
/// nonempty edge sequence composing left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Path {
    Trivial(usize),
    Edges(Vec<usize>),
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path::Trivial(v)
    }

    pub fn from_edge_indices(edges: Vec<usize>) -> Self {
        assert!(!edges.is_empty(), "use Path::trivial for length-0 paths");
        Path::Edges(edges)
    }

    pub fn len(&self) -> usize {
        match self {
            Path::Trivial(_) => 0,
            Path::Edges(es) => es.len(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Path::Trivial(_))
    }

    pub fn source(&self, q: &Quiver) -> usize {
        match self {
            Path::Trivial(v) => *v,
            Path::Edges(es) => q.edge(es[0]).src,
        }
    }

    pub fn target(&self, q: &Quiver) -> usize {
        match self {
            Path::Trivial(v) => *v,
            Path::Edges(es) => q.edge(*es.last().unwrap()).tgt,
        }
    }

    pub fn edge_indices(&self) -> &[usize] {
        match self {
            Path::Trivial(_) => &[],
            Path::Edges(es) => es,
        }
    }

    /// Concatenation `self` then `other`; `None` is the zero of the path
    /// algebra (endpoints do not meet). Trivial paths act as local units.
    pub fn compose(&self, other: &Path, q: &Quiver) -> Result<Option<Path>, QuiverError> {
        q.check_path(self)?;
        q.check_path(other)?;
        if self.target(q) != other.source(q) {
            return Ok(None);
        }
        Ok(Some(match (self, other) {
            (Path::Trivial(_), p) => p.clone(),
            (p, Path::Trivial(_)) => p.clone(),
            (Path::Edges(a), Path::Edges(b)) => {
                let mut es = a.clone();
                es.extend_from_slice(b);
                Path::Edges(es)
            }
        }))
    }
}

/// Order: by length, then lexicographically on the edge-index sequence
/// (edge index order equals edge-id order by construction of `Quiver`).
/// Trivial paths compare by vertex index.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => match (self, other) {
                (Path::Trivial(a), Path::Trivial(b)) => a.cmp(b),
                (Path::Edges(a), Path::Edges(b)) => a.cmp(b),
                _ => unreachable!("equal lengths imply equal variants"),
            },
            ord => ord,
        }
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite formal linear combination of paths with exact coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathVector {
    field: Field,
    terms: BTreeMap<Path, Scalar>,
}

impl PathVector {
    pub fn zero(field: Field) -> Self {
        PathVector { field, terms: BTreeMap::new() }
    }

    pub fn single(field: Field, path: Path, coeff: Scalar) -> Self {
        let mut v = PathVector::zero(field);
        v.add_term(path, coeff);
        v
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &Path) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, path: Path, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(path) {
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

    pub fn add(&self, other: &PathVector) -> PathVector {
        assert_eq!(self.field, other.field, "mixed fields");
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PathVector) -> PathVector {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> PathVector {
        if k.is_zero() {
            return PathVector::zero(self.field);
        }
        PathVector {
            field: self.field,
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c.mul(k))).collect(),
        }
    }

    /// Bilinear extension of path concatenation.
    pub fn mul(&self, other: &PathVector, q: &Quiver) -> Result<PathVector, QuiverError> {
        assert_eq!(self.field, other.field, "mixed fields");
        let mut out = PathVector::zero(self.field);
        for (p, a) in &self.terms {
            for (r, b) in &other.terms {
                if let Some(pr) = p.compose(r, q)? {
                    out.add_term(pr, a.mul(b));
                }
            }
        }
        Ok(out)
    }

    /// Splits into endpoint-homogeneous components, keyed by (source, target).
    pub fn split_by_endpoints(&self, q: &Quiver) -> BTreeMap<(usize, usize), PathVector> {
        let mut out: BTreeMap<(usize, usize), PathVector> = BTreeMap::new();
        for (p, c) in &self.terms {
            let key = (p.source(q), p.target(q));
            out.entry(key)
                .or_insert_with(|| PathVector::zero(self.field))
                .add_term(p.clone(), c.clone());
        }
        out
    }

    /// Splits into length-homogeneous components, keyed by path length.
    pub fn split_by_length(&self) -> BTreeMap<usize, PathVector> {
        let mut out: BTreeMap<usize, PathVector> = BTreeMap::new();
        for (p, c) in &self.terms {
            out.entry(p.len())
                .or_insert_with(|| PathVector::zero(self.field))
                .add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn render(&self, q: &Quiver) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(p, c)| format!("{} {}", c, q.path_string(p)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn trivial_paths_are_local_units() {
        let quiver = a2();
        let a = Path::from_edge_indices(vec![0]);
        let e1 = Path::trivial(0);
        let e2 = Path::trivial(1);
        assert_eq!(e1.compose(&a, &quiver).unwrap(), Some(a.clone()));
        assert_eq!(a.compose(&e2, &quiver).unwrap(), Some(a.clone()));
        assert_eq!(e2.compose(&a, &quiver).unwrap(), None);
        // a * a = 0: target 2 != source 1
        assert_eq!(a.compose(&a, &quiver).unwrap(), None);
    }

    #[test]
    fn loop_composition() {
        let quiver = loop_quiver();
        let x = Path::from_edge_indices(vec![0]);
        let xx = x.compose(&x, &quiver).unwrap().unwrap();
        assert_eq!(xx, Path::from_edge_indices(vec![0, 0]));
        assert_eq!(xx.len(), 2);
    }

    #[test]
    fn path_order_is_length_then_lex() {
        let e = Path::trivial(5);
        let a = Path::from_edge_indices(vec![1]);
        let b = Path::from_edge_indices(vec![0, 2]);
        let c = Path::from_edge_indices(vec![2]);
        let mut v = vec![b.clone(), c.clone(), e.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![e, a, c, b]);
    }

    #[test]
    fn vector_arithmetic_drops_zeros() {
        let quiver = loop_quiver();
        let x = Path::from_edge_indices(vec![0]);
        let v = PathVector::single(q(), x.clone(), q().one());
        let w = v.sub(&v);
        assert!(w.is_zero());
        let prod = v.mul(&v, &quiver).unwrap();
        assert_eq!(prod.coeff(&Path::from_edge_indices(vec![0, 0])), q().one());
    }

    #[test]
    fn multiplication_is_associative_on_random_triples() {
        use rand::Rng;
        use rand::SeedableRng;
        let quiver = kronecker();
        let paths = quiver.enumerate_paths(2, None, None);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut v = PathVector::zero(q());
                for _ in 0..2 {
                    let p = paths[rng.random_range(0..paths.len())].clone();
                    let c = q().from_i64(rng.random_range(-3..=3));
                    v.add_term(p, c);
                }
                v
            };
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let left = a.mul(&b, &quiver).unwrap().mul(&c, &quiver).unwrap();
            let right = a.mul(&b.mul(&c, &quiver).unwrap(), &quiver).unwrap();
            assert_eq!(left, right);
        }
    }
}
