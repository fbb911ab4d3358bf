//! Exact combinatorial engine for the triangulations of cyclic polytopes.
//!
//! A cyclic polytope `C(n,d)` is the convex hull of `n` points on the moment
//! curve `t -> (t, t^2, ..., t^d)`. Its combinatorics depend only on `n` and
//! `d`, which lets every geometric question here be answered by exact label
//! arithmetic: normalized simplex volumes are Vandermonde products, boundary
//! facets come from Gale's evenness criterion, and bistellar flips are read
//! off the parity structure of `(d+2)`-point circuits.
//!
//! The crate enumerates all triangulations of `C(n,d)` with a reverse search
//! over the flip graph oriented by lexicographic comparison of GKZ vectors,
//! optionally in parallel with budgeted work units, and builds the first
//! higher Stasheff–Tamari order `HST1(n,d)` as the DAG of up-flips.

mod combi;
pub mod config;
pub mod enumerate;
mod error;
pub mod gkz;
pub mod hst;
pub mod triangulation;

pub use config::{
    gap_parity, is_boundary_facet, normalized_volume, total_volume, Parity, PointConfig, Volume,
};
pub use error::{Error, Result};
pub use gkz::{gkz, lex_compare, orient_flip, FlipCertificate, GkzVector};
pub use triangulation::{
    apply_flip, check_triangulation, circuit_of, find_flips, highest_triangulation,
    lowest_triangulation, Circuit, Flip, FlipDirection, Simplex, Triangulation, ValidityReport,
    Violation,
};
