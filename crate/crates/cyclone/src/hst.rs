//! The first higher Stasheff–Tamari order as a flip DAG.
//!
//! Nodes are all triangulations of `C(n,d)`; directed edges are single
//! up-flips (source below target). The order itself is the reflexive and
//! transitive closure of this relation; the closure is never materialized,
//! only answered through reachability. The reverse-search spanning tree from
//! the enumeration is kept alongside, which is what the DOT export draws
//! solid.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::config::PointConfig;
use crate::enumerate::Engine;
use crate::error::{Error, Result};
use crate::gkz::{lex_compare, GkzVector};
use crate::triangulation::{FlipDirection, Triangulation};

/// One up-flip edge: `source <=_1 target` across the circuit on `support`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetEdge {
    pub source: usize,
    pub target: usize,
    pub support: Box<[u32]>,
}

/// The HST1 flip DAG with its reverse-search spanning tree.
pub struct FlipPoset {
    cfg: PointConfig,
    nodes: Vec<Triangulation>,
    gkz: Vec<GkzVector>,
    edges: Vec<PosetEdge>,
    /// Reverse-search tree edges as (parent, child) in visit-order indices.
    tree_edges: Vec<(usize, usize)>,
}

impl FlipPoset {
    pub fn cfg(&self) -> &PointConfig {
        &self.cfg
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Triangulation] {
        &self.nodes
    }

    pub fn gkz_of(&self, node: usize) -> &GkzVector {
        &self.gkz[node]
    }

    pub fn edges(&self) -> &[PosetEdge] {
        &self.edges
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }
}

/// Materialize the poset: enumerate all triangulations (erroring beyond
/// `max_nodes`), record the reverse-search tree, then scan every node for its
/// up-flips. Also asserts the tree parity law: tree edges are up-flips when
/// `d` is even and down-flips when `d` is odd.
pub fn build_hst1(cfg: &PointConfig, max_nodes: u64) -> Result<FlipPoset> {
    let engine = Engine::new(cfg)?;
    let mut scratch = engine.scratch();
    let root = engine.root_ranked(&mut scratch)?;

    let mut ranked_nodes: Vec<Vec<u32>> = Vec::new();
    let mut tree_edges: Vec<(usize, usize)> = Vec::new();
    let expansion = engine.expand(
        &mut scratch,
        root,
        0,
        max_nodes,
        |cells, _, parent, index| {
            ranked_nodes.push(cells.to_vec());
            if let Some(p) = parent {
                tree_edges.push((p as usize, index as usize));
            }
            true
        },
    )?;
    if !expansion.leftover.is_empty() {
        return Err(Error::Capacity(format!(
            "{cfg} has more than {max_nodes} triangulations"
        )));
    }

    let mut index_of: HashMap<Vec<u32>, usize> = HashMap::with_capacity(ranked_nodes.len());
    for (i, cells) in ranked_nodes.iter().enumerate() {
        index_of.insert(cells.clone(), i);
    }

    let mut edges = Vec::new();
    for (i, cells) in ranked_nodes.iter().enumerate() {
        for flip in engine.flips_of(&mut scratch, cells) {
            if flip.direction != FlipDirection::Up {
                continue;
            }
            let target_cells = engine.apply_ranked(cells, flip);
            let target = *index_of.get(&target_cells).ok_or_else(|| {
                Error::InternalConsistency(format!(
                    "up-flip target {} missing from the enumeration",
                    engine.to_triangulation(&target_cells)
                ))
            })?;
            edges.push(PosetEdge {
                source: i,
                target,
                support: engine.support_label_slice(flip.support).into(),
            });
        }
    }

    // tree parity law: parent->child is an up-flip iff d is even
    let edge_set: HashSet<(usize, usize)> = edges.iter().map(|e| (e.source, e.target)).collect();
    for &(p, c) in &tree_edges {
        let expected = if cfg.d().is_multiple_of(2) { (p, c) } else { (c, p) };
        if !edge_set.contains(&expected) {
            return Err(Error::InternalConsistency(format!(
                "tree edge {p}->{c} is not an {}-flip",
                if cfg.d().is_multiple_of(2) { "up" } else { "down" }
            )));
        }
    }

    let gkz: Vec<GkzVector> = ranked_nodes.iter().map(|c| engine.gkz_ranked(c)).collect();
    let nodes: Vec<Triangulation> = ranked_nodes
        .iter()
        .map(|c| engine.to_triangulation(c))
        .collect();

    Ok(FlipPoset {
        cfg: *cfg,
        nodes,
        gkz,
        edges,
        tree_edges,
    })
}

/// Per-edge verification of the GKZ orientation law.
#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub edges_checked: usize,
    pub greater: usize,
    pub less: usize,
    /// Indices into the poset's edge list that violate the law.
    pub violations: Vec<usize>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every up-flip edge: the source GKZ vector must be lexicographically
/// greater than the target's when `d` is even, and less when `d` is odd.
pub fn audit_orientation(poset: &FlipPoset) -> AuditReport {
    let d_even = poset.cfg.d().is_multiple_of(2);
    let mut report = AuditReport::default();
    for (i, edge) in poset.edges.iter().enumerate() {
        let cmp = lex_compare(&poset.gkz[edge.source], &poset.gkz[edge.target])
            .expect("poset GKZ vectors share one length");
        report.edges_checked += 1;
        match cmp {
            std::cmp::Ordering::Greater => report.greater += 1,
            std::cmp::Ordering::Less => report.less += 1,
            std::cmp::Ordering::Equal => {}
        }
        let ok = if d_even {
            cmp == std::cmp::Ordering::Greater
        } else {
            cmp == std::cmp::Ordering::Less
        };
        if !ok {
            report.violations.push(i);
        }
    }
    report
}

/// The unique source and unique sink of the up-flip DAG (the lowest and
/// highest triangulations).
pub fn minimal_and_maximal(poset: &FlipPoset) -> Result<(usize, usize)> {
    let n = poset.nodes.len();
    let mut has_in = vec![false; n];
    let mut has_out = vec![false; n];
    for e in &poset.edges {
        has_out[e.source] = true;
        has_in[e.target] = true;
    }
    let sources: Vec<usize> = (0..n).filter(|&i| !has_in[i]).collect();
    let sinks: Vec<usize> = (0..n).filter(|&i| !has_out[i]).collect();
    match (&sources[..], &sinks[..]) {
        (&[source], &[sink]) => Ok((source, sink)),
        _ => Err(Error::Structure(format!(
            "expected one source and one sink, found {} sources and {} sinks",
            sources.len(),
            sinks.len()
        ))),
    }
}

/// Node count beyond which the quadratic reachability work is refused.
const REDUCTION_NODE_CAP: usize = 10_000;

/// Transitive reduction: the indices of the edges that are covering
/// relations, i.e. not implied by longer paths. Unique for a DAG.
pub fn transitive_reduction(poset: &FlipPoset) -> Result<Vec<usize>> {
    let n = poset.nodes.len();
    if n > REDUCTION_NODE_CAP {
        return Err(Error::Capacity(format!(
            "transitive reduction needs quadratic work; {n} nodes exceed the cap of {REDUCTION_NODE_CAP}"
        )));
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for e in &poset.edges {
        children[e.source].push(e.target);
        indegree[e.target] += 1;
    }
    // Kahn topological order
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    while let Some(u) = ready.pop() {
        order.push(u);
        for &c in &children[u] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(c);
            }
        }
    }
    if order.len() != n {
        return Err(Error::Structure("up-flip relation has a cycle".into()));
    }

    // strict-descendant bitsets, filled in reverse topological order
    let words = n.div_ceil(64);
    let mut reach = vec![0u64; n * words];
    for &u in order.iter().rev() {
        for &c in &children[u] {
            for w in 0..words {
                let bits = reach[c * words + w];
                reach[u * words + w] |= bits;
            }
            reach[u * words + c / 64] |= 1u64 << (c % 64);
        }
    }

    let mut retained = Vec::new();
    'edges: for (i, e) in poset.edges.iter().enumerate() {
        for &c in &children[e.source] {
            if c != e.target && reach[c * words + e.target / 64] & (1u64 << (e.target % 64)) != 0 {
                continue 'edges; // a longer path implies this edge
            }
        }
        retained.push(i);
    }
    Ok(retained)
}

/// Deterministic DOT rendering: nodes ordered by canonical form, labelled
/// with cells and GKZ vector; tree edges solid, the rest dashed.
pub fn export_dot(poset: &FlipPoset) -> String {
    let n = poset.nodes.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| poset.nodes[a].cmp(&poset.nodes[b]));
    let mut new_index = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }

    let tree_pairs: HashSet<(usize, usize)> = poset
        .tree_edges
        .iter()
        .map(|&(p, c)| {
            let (a, b) = (new_index[p], new_index[c]);
            (a.min(b), a.max(b))
        })
        .collect();

    let mut out = String::from("digraph hst1 {\n");
    for (new, &old) in order.iter().enumerate() {
        let _ = writeln!(
            out,
            "  t{new} [label=\"{}\\n{}\"];",
            poset.nodes[old], poset.gkz[old]
        );
    }
    let mut edges: Vec<(usize, usize)> = poset
        .edges
        .iter()
        .map(|e| (new_index[e.source], new_index[e.target]))
        .collect();
    edges.sort_unstable();
    for (s, t) in edges {
        if tree_pairs.contains(&(s.min(t), s.max(t))) {
            let _ = writeln!(out, "  t{s} -> t{t};");
        } else {
            let _ = writeln!(out, "  t{s} -> t{t} [style=dashed];");
        }
    }
    out.push_str("}\n");
    out
}
