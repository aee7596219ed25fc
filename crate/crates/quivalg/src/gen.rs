//! Seeded random instance generators for the property suites. Everything is
//! deterministic given the seed: the same seed replays the identical instance
//! stream.
//!
//! Connections need Γ dimension matrices D with A_G·D = D·A_H (adjacency
//! counts), otherwise no square invertible U family exists; D is found by a
//! bounded enumeration over small nonnegative integer matrices.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::connection::{hom_basis, ConnectionMorphism, QuiverConnection};
use crate::linalg::{Field, Matrix, Scalar};
use crate::quiver::{AdmissibleIdeal, BoundQuiver, PathVector, Quiver};

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub field: Field,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_gamma_dim: usize,
    pub max_nilpotency: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            field: Field::Rational,
            max_vertices: 3,
            max_edges: 4,
            max_gamma_dim: 3,
            max_nilpotency: 4,
        }
    }
}

impl GenConfig {
    /// Derives the per-instance rng: one stream per (seed, salt, index).
    pub fn rng(seed: u64, salt: u64, index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(
            seed.wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
                .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03)),
        )
    }
}

pub fn small_scalar(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    field.from_i64(rng.random_range(-3..=3))
}

pub fn small_nonzero_scalar(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    loop {
        let s = small_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn quiver(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Quiver {
    let nv = rng.random_range(1..=cfg.max_vertices);
    let ne = rng.random_range(0..=cfg.max_edges);
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, String)> = (0..ne)
        .map(|i| {
            let s = rng.random_range(0..nv);
            let t = rng.random_range(0..nv);
            (format!("e{i}"), format!("v{s}"), format!("v{t}"))
        })
        .collect();
    Quiver::new(vertices, edges).expect("generated ids are unique and resolved")
}

/// Truncated bound quiver: I = rad^n for a random n in [2, max].
pub fn truncated_bound_quiver(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> BoundQuiver {
    let q = quiver(rng, cfg);
    let n = rng.random_range(2..=cfg.max_nilpotency.max(2));
    let ideal = AdmissibleIdeal::truncation(&q, n, cfg.field).expect("bound is >= 2");
    BoundQuiver::new(q, ideal)
}

/// Bound quiver with (possibly empty) random endpoint-homogeneous generators
/// of length >= 2 below the bound.
pub fn bound_quiver(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> BoundQuiver {
    let q = quiver(rng, cfg);
    let n = rng.random_range(2..=cfg.max_nilpotency.max(2));
    let mut gens = Vec::new();
    if n > 2 && rng.random_range(0..2) == 1 {
        let mut by_endpoints: BTreeMap<(usize, usize), Vec<crate::quiver::Path>> = BTreeMap::new();
        for p in q.enumerate_paths(n - 1, None, None) {
            if p.len() >= 2 {
                by_endpoints.entry((p.source(&q), p.target(&q))).or_default().push(p);
            }
        }
        let groups: Vec<_> = by_endpoints.into_values().collect();
        if !groups.is_empty() {
            for _ in 0..rng.random_range(1..=2usize) {
                let group = &groups[rng.random_range(0..groups.len())];
                let mut v = PathVector::zero(cfg.field);
                let terms = rng.random_range(1..=2usize.min(group.len()));
                for _ in 0..terms {
                    let p = group[rng.random_range(0..group.len())].clone();
                    v.add_term(p, small_nonzero_scalar(rng, cfg.field));
                }
                if !v.is_zero() {
                    gens.push(v);
                }
            }
        }
    }
    let ideal = AdmissibleIdeal::new(&q, gens, n, cfg.field).expect("generators are admissible");
    BoundQuiver::new(q, ideal)
}

fn adjacency(q: &Quiver) -> Vec<Vec<usize>> {
    (0..q.vertex_count())
        .map(|g| (0..q.vertex_count()).map(|h| q.adjacency_count(g, h)).collect())
        .collect()
}

/// All nonnegative integer matrices D with A_G·D = D·A_H and entries bounded
/// by `max_entry`, up to `cap` solutions within a fixed search budget.
fn dimension_matrices(
    a_g: &[Vec<usize>],
    a_h: &[Vec<usize>],
    max_entry: usize,
    cap: usize,
) -> Vec<Vec<Vec<usize>>> {
    fn rec(
        pos: usize,
        d: &mut Vec<Vec<usize>>,
        a_g: &[Vec<usize>],
        a_h: &[Vec<usize>],
        max_entry: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
        cap: usize,
        budget: &mut usize,
    ) {
        if out.len() >= cap || *budget == 0 {
            return;
        }
        *budget -= 1;
        let ng = a_g.len();
        let nh = a_h.len();
        if pos == ng * nh {
            for i in 0..ng {
                for j in 0..nh {
                    let lhs: usize = (0..ng).map(|k| a_g[i][k] * d[k][j]).sum();
                    let rhs: usize = (0..nh).map(|k| d[i][k] * a_h[k][j]).sum();
                    if lhs != rhs {
                        return;
                    }
                }
            }
            out.push(d.clone());
            return;
        }
        let (i, j) = (pos / nh, pos % nh);
        for v in 0..=max_entry {
            d[i][j] = v;
            rec(pos + 1, d, a_g, a_h, max_entry, out, cap, budget);
        }
        d[i][j] = 0;
    }
    let mut out = Vec::new();
    let mut d = vec![vec![0usize; a_h.len()]; a_g.len()];
    let mut budget = 500_000usize;
    rec(0, &mut d, a_g, a_h, max_entry, &mut out, cap, &mut budget);
    out
}

fn random_invertible(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Matrix {
    if n == 0 {
        return Matrix::zeros(field, 0, 0);
    }
    for _ in 0..32 {
        let m = Matrix::from_fn(field, n, n, |_, _| small_scalar(rng, field));
        if m.rank() == n {
            return m;
        }
    }
    Matrix::identity(field, n)
}

/// A random connection between two quivers: a random valid Γ dimension
/// matrix (nonzero when possible), filled with random invertible U blocks.
/// `None` when only the zero connection exists.
pub fn connection(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    g: &Quiver,
    h: &Quiver,
) -> Option<QuiverConnection> {
    let sols = dimension_matrices(&adjacency(g), &adjacency(h), cfg.max_gamma_dim, 300);
    let nonzero: Vec<_> = sols
        .iter()
        .filter(|d| d.iter().any(|row| row.iter().any(|&x| x > 0)))
        .collect();
    if nonzero.is_empty() {
        return None;
    }
    let d = nonzero[rng.random_range(0..nonzero.len())];
    let mut gamma = BTreeMap::new();
    for (i, row) in d.iter().enumerate() {
        for (k, &dim) in row.iter().enumerate() {
            if dim > 0 {
                gamma.insert(
                    (i, k),
                    (0..dim).map(|t| format!("c{i}_{k}_{t}")).collect::<Vec<_>>(),
                );
            }
        }
    }
    let skeleton = QuiverConnection::skeleton(g.clone(), h.clone(), gamma.clone(), cfg.field);
    let mut u = BTreeMap::new();
    for gv in 0..g.vertex_count() {
        for hv in 0..h.vertex_count() {
            let dim = skeleton.domain_dim(gv, hv);
            debug_assert_eq!(dim, skeleton.codomain_dim(gv, hv));
            if dim > 0 {
                u.insert((gv, hv), random_invertible(rng, cfg.field, dim));
            }
        }
    }
    Some(
        QuiverConnection::new(g.clone(), h.clone(), gamma, u, cfg.field)
            .expect("dimension-matched random blocks form a connection"),
    )
}

/// A connection out of `g`, retrying random targets and falling back to
/// `h = g` (where D = identity always works).
pub fn connection_from(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    g: &Quiver,
) -> (Quiver, QuiverConnection) {
    for _ in 0..4 {
        let h = quiver(rng, cfg);
        if let Some(c) = connection(rng, cfg, g, &h) {
            return (h, c);
        }
    }
    let c = connection(rng, cfg, g, g)
        .unwrap_or_else(|| QuiverConnection::identity(g, cfg.field));
    (g.clone(), c)
}

/// A random valid 2-morphism in Hom(c, c): a small random combination of the
/// solved endomorphism basis (which always contains the identity).
pub fn endomorphism(rng: &mut ChaCha8Rng, c: &QuiverConnection) -> ConnectionMorphism {
    let basis = hom_basis(c, c).expect("same-connection hom space");
    let mut out = ConnectionMorphism::identity(c).scale(&c.field().zero());
    for b in &basis {
        out = out.add(&b.scale(&small_scalar(rng, c.field())));
    }
    out
}

/// A composable chain of `len` connections with shared intermediate quivers,
/// between truncated bound quivers of one common bound (a chain of
/// truncations is automatically ideally connected).
pub fn truncated_chain(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    len: usize,
) -> (Vec<BoundQuiver>, Vec<QuiverConnection>) {
    let n = rng.random_range(2..=cfg.max_nilpotency.max(2));
    let mut quivers = vec![quiver(rng, cfg)];
    let mut connections = Vec::new();
    for _ in 0..len {
        let (next, c) = connection_from(rng, cfg, quivers.last().unwrap());
        quivers.push(next);
        connections.push(c);
    }
    let bqs = quivers
        .into_iter()
        .map(|q| {
            let ideal = AdmissibleIdeal::truncation(&q, n, cfg.field).expect("bound >= 2");
            BoundQuiver::new(q, ideal)
        })
        .collect();
    (bqs, connections)
}
