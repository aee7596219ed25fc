//! Exact-arithmetic quivers, quiver connections, basic algebras with lifting
//! data, bimodules with lifting data, and the translation functor between the
//! two pictures -- all over the rationals (or a prime field), with every check
//! an exact linear-algebra computation.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`] -- exact scalars, matrices, subspaces, quotient spaces.
//! * [`quiver`] -- quivers, paths, path vectors, admissible ideals, and
//!   quotient algebras `kQ/I` with their radical filtration.
//! * [`connection`] -- quiver connections `(U, Γ)`, path transport, the
//!   2-morphism calculus, composition, and ideal-connectedness.
//! * [`algebra`] -- finite dimensional algebras from structure constants,
//!   Jacobson radicals, primitive idempotent lifting, lifting data
//!   `(δ¹, δ²)`, and the bound-quiver presentation.
//! * [`bimodule`] -- radically symmetric bimodules with lifting data,
//!   projective bases, tensor composition, and intertwiner checks.
//! * [`equivalence`] -- the functor from bound quivers with connections to
//!   algebras with bimodules, its inverse constructions, and the round-trip
//!   isomorphism witnesses.
//! * [`io`] -- versioned JSON schemas for every instance kind.
//! * [`gen`] -- seeded random instance generators for the property suites.
//! * [`suite`] -- the randomized law-checking suites used by the CLI and the
//!   acceptance tests.

pub mod error;
pub mod linalg;
pub mod par;
pub mod quiver;

pub mod algebra;
pub mod bimodule;
pub mod connection;
pub mod equivalence;
pub mod gen;
pub mod io;
pub mod suite;
