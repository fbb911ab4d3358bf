//! Output-sensitive enumeration of all triangulations of `C(n,d)`.
//!
//! The workhorse is a reverse search over the flip graph: each non-root
//! triangulation has a canonical parent, its GKZ-lexicographically greatest
//! improving neighbor, and the enumerator walks the resulting spanning tree
//! depth-first from the triangulation with the lex-greatest GKZ vector. No
//! visited set is kept; memory is bounded by the tree depth. A breadth-first
//! oracle over the same flip graph, built purely from the reference
//! label-space operations, provides an independent cross-check.

mod checkpoint;
mod engine;
mod parallel;

pub use checkpoint::Checkpoint;
pub use parallel::{enumerate_parallel, Coordinator, RunOutcome, WorkUnit};

pub(crate) use engine::Engine;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::config::PointConfig;
use crate::error::{Error, Result};
use crate::triangulation::{
    apply_flip, find_flips, highest_triangulation, lowest_triangulation, Triangulation,
};

/// Aggregate counters of one enumeration run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationStats {
    pub triangulation_count: BigUint,
    /// Always `triangulation_count - 1` on a completed run.
    pub tree_edge_count: BigUint,
    /// Undirected flip edges discovered, each counted once (at its
    /// GKZ-greater endpoint).
    pub flip_edge_count: BigUint,
    pub max_tree_depth: usize,
    pub wall_time: Duration,
}

/// One visited triangulation in the deterministic depth-first visit order.
pub struct VisitEvent<'a> {
    pub triangulation: &'a Triangulation,
    /// 0-based position in visit order.
    pub index: u64,
    /// Visit index of the reverse-search parent; `None` at the root.
    pub parent_index: Option<u64>,
    pub depth: usize,
}

/// The reverse-search root: the lowest triangulation for even `d`, the
/// highest for odd `d`; always the one with the lex-greatest GKZ vector,
/// which is asserted against its neighborhood.
pub fn root(cfg: &PointConfig) -> Result<Triangulation> {
    let engine = Engine::new(cfg)?;
    let mut scratch = engine.scratch();
    let ranked = engine.root_ranked(&mut scratch)?;
    Ok(engine.to_triangulation(&ranked))
}

/// The canonical parent: among all neighbors with lexicographically greater
/// GKZ vector, the one with the greatest, ties broken toward the least
/// canonical cell set. Returns `None` exactly at the root.
pub fn parent(cfg: &PointConfig, t: &Triangulation) -> Result<Option<Triangulation>> {
    let engine = Engine::new(cfg)?;
    let mut scratch = engine.scratch();
    let cells = engine.to_ranked(t)?;
    Ok(engine
        .parent_flip(&mut scratch, &cells)
        .map(|f| engine.to_triangulation(&engine.apply_ranked(&cells, f))))
}

/// Enumerate every triangulation exactly once, depth-first with children in
/// canonical flip order, calling the visitor per triangulation.
pub fn enumerate_serial(
    cfg: &PointConfig,
    visitor: impl FnMut(VisitEvent<'_>),
) -> Result<EnumerationStats> {
    enumerate_serial_with_limit(cfg, None, visitor)
}

/// As [`enumerate_serial`], aborting with a capacity error once more than
/// `node_limit` triangulations have been visited.
pub fn enumerate_serial_with_limit(
    cfg: &PointConfig,
    node_limit: Option<u64>,
    mut visitor: impl FnMut(VisitEvent<'_>),
) -> Result<EnumerationStats> {
    enumerate_serial_while(cfg, node_limit, |event| {
        visitor(event);
        true
    })
}

/// As [`enumerate_serial_with_limit`], but the visitor may stop the
/// traversal by returning false; the stats then cover the visited prefix.
pub fn enumerate_serial_while(
    cfg: &PointConfig,
    node_limit: Option<u64>,
    mut visitor: impl FnMut(VisitEvent<'_>) -> bool,
) -> Result<EnumerationStats> {
    let start = Instant::now();
    let engine = Engine::new(cfg)?;
    let mut scratch = engine.scratch();
    let root = engine.root_ranked(&mut scratch)?;
    let budget = node_limit.unwrap_or(u64::MAX);
    let expansion = engine.expand(
        &mut scratch,
        root,
        0,
        budget,
        |cells, depth, parent, index| {
            let triangulation = engine.to_triangulation(cells);
            visitor(VisitEvent {
                triangulation: &triangulation,
                index,
                parent_index: parent,
                depth: depth as usize,
            })
        },
    )?;
    if !expansion.aborted && !expansion.leftover.is_empty() {
        return Err(Error::Capacity(format!(
            "enumeration of {cfg} exceeds the node limit of {budget}"
        )));
    }
    Ok(EnumerationStats {
        triangulation_count: BigUint::from(expansion.visited),
        tree_edge_count: BigUint::from(expansion.visited - 1),
        flip_edge_count: BigUint::from(expansion.flip_edges),
        max_tree_depth: expansion.max_depth as usize,
        wall_time: start.elapsed(),
    })
}

/// Count without visiting. Serial reverse search.
pub fn count_serial(cfg: &PointConfig) -> Result<EnumerationStats> {
    let start = Instant::now();
    let engine = Engine::new(cfg)?;
    let mut scratch = engine.scratch();
    let root = engine.root_ranked(&mut scratch)?;
    let expansion = engine.expand(&mut scratch, root, 0, u64::MAX, |_, _, _, _| true)?;
    debug_assert!(expansion.leftover.is_empty());
    Ok(EnumerationStats {
        triangulation_count: BigUint::from(expansion.visited),
        tree_edge_count: BigUint::from(expansion.visited - 1),
        flip_edge_count: BigUint::from(expansion.flip_edges),
        max_tree_depth: expansion.max_depth as usize,
        wall_time: start.elapsed(),
    })
}

/// Independent oracle: breadth-first search over the undirected flip graph
/// from the root, with an explicit visited set keyed by canonical form. Uses
/// only the reference label-space operations, none of the rank-space engine.
// Triangulation's interior-mutable GKZ cache is excluded from Eq and Hash,
// so keying sets by it is sound.
#[allow(clippy::mutable_key_type)]
pub fn enumerate_bfs_oracle(
    cfg: &PointConfig,
    max_nodes: usize,
) -> Result<BTreeSet<Triangulation>> {
    let seed = if cfg.d().is_multiple_of(2) {
        lowest_triangulation(cfg)
    } else {
        highest_triangulation(cfg)
    };
    let mut seen: HashSet<Triangulation> = HashSet::new();
    let mut queue: VecDeque<Triangulation> = VecDeque::new();
    seen.insert(seed.clone());
    queue.push_back(seed);
    while let Some(t) = queue.pop_front() {
        for flip in find_flips(cfg, &t) {
            let next = apply_flip(&t, &flip)?;
            if !seen.contains(&next) {
                if seen.len() >= max_nodes {
                    return Err(Error::Capacity(format!(
                        "flip-graph BFS of {cfg} exceeds {max_nodes} nodes"
                    )));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}
