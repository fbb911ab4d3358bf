//! Rank-space core of the enumerator.
//!
//! Cells are combinadic ranks (the rank function is an order isomorphism
//! onto the lexicographic cell order, so sorted rank vectors are canonical
//! forms), membership is a bitset probe, and all circuit data is precomputed
//! into flat tables at construction time.
//!
//! The GKZ bookkeeping rests on one identity: across a flip on support
//! `S = {s_1 < ... < s_{d+2}}`, the GKZ entry at `s_i` changes by exactly
//! `±vol(S \ {s_i})`, positive where the omitted cell belongs to the inserted
//! side. (Both sides of a circuit triangulate the same polytope, so the
//! volume sums cancel and only the omitted-cell term survives.) Entries
//! outside `S` never move. Lexicographic comparisons between flip results can
//! therefore walk the merged supports and compare signed cached volumes,
//! without ever materializing a GKZ vector.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::combi::{for_each_subset, Binomials};
use crate::config::{vandermonde_product, PointConfig};
use crate::error::{Error, Result};
use crate::gkz::GkzVector;
use crate::triangulation::{position_in_lower, FlipDirection, Simplex, Triangulation};

/// Guard against absurd instances: the volume table has one entry per
/// possible cell, the circuit table `d+2` entries per support.
const MAX_CELL_TABLE: u64 = 1 << 20;
const MAX_SUPPORT_ENTRIES: u64 = 1 << 23;

/// A flip in rank space: an index into the support table plus a direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct RankedFlip {
    pub support: u32,
    pub direction: FlipDirection,
}

impl RankedFlip {
    pub(crate) fn reversed(self) -> Self {
        RankedFlip {
            support: self.support,
            direction: self.direction.reversed(),
        }
    }
}

/// Reusable per-traversal buffers. One per worker; never shared.
pub(crate) struct Scratch {
    bits: Vec<u64>,
    flips: Vec<RankedFlip>,
    children: Vec<Vec<u32>>,
}

/// Result of a budgeted subtree expansion.
pub(crate) struct Expansion {
    pub visited: u64,
    pub flip_edges: u64,
    pub max_depth: u32,
    /// Verified but unvisited subtree roots, present only when the budget ran
    /// out: (cells, depth) pairs.
    pub leftover: Vec<(Vec<u32>, u32)>,
    /// True when the visitor asked to stop early.
    pub aborted: bool,
}

pub(crate) struct Engine {
    cfg: PointConfig,
    binom: Binomials,
    cell_count: u64,
    circuit_size: usize,
    /// Normalized cell volumes indexed by cell rank.
    volumes: Vec<BigUint>,
    /// Sorted support labels, `circuit_size` per support.
    support_labels: Vec<u32>,
    /// Cell ranks by omitted position, `circuit_size` per support.
    support_cells: Vec<u32>,
    /// 0-based positions whose omitted cell lies in the lower/upper side.
    lower_positions: Vec<usize>,
    upper_positions: Vec<usize>,
    /// Flip direction that increases the GKZ vector lexicographically.
    improving: FlipDirection,
    lowest: Vec<u32>,
    highest: Vec<u32>,
}

impl Engine {
    pub(crate) fn new(cfg: &PointConfig) -> Result<Self> {
        let n = cfg.n();
        let d = cfg.d();
        let cell_size = cfg.cell_size();
        let circuit_size = cell_size + 1;
        let binom = Binomials::new(n, circuit_size)?;

        let cell_count = binom.get(n, cell_size);
        if cell_count > MAX_CELL_TABLE {
            return Err(Error::Capacity(format!(
                "{cfg} has {cell_count} possible cells, beyond the table limit {MAX_CELL_TABLE}"
            )));
        }
        let support_count = if n as usize >= circuit_size {
            binom.get(n, circuit_size)
        } else {
            0
        };
        let support_entries = support_count * circuit_size as u64;
        if support_entries > MAX_SUPPORT_ENTRIES {
            return Err(Error::Capacity(format!(
                "{cfg} has {support_count} circuits, beyond the table limit"
            )));
        }

        let mut volumes = Vec::with_capacity(cell_count as usize);
        let mut lowest = Vec::new();
        let mut highest = Vec::new();
        let mut rank = 0u32;
        for_each_subset(n, cell_size, |labels| {
            volumes.push(vandermonde_product(labels));
            let mut all_even = true;
            let mut all_odd = true;
            for g in 1..=n {
                if labels.binary_search(&g).is_ok() {
                    continue;
                }
                let larger = labels.iter().filter(|&&x| x > g).count();
                if larger.is_multiple_of(2) {
                    all_odd = false;
                } else {
                    all_even = false;
                }
                if !all_even && !all_odd {
                    break;
                }
            }
            if all_even {
                lowest.push(rank);
            }
            if all_odd {
                highest.push(rank);
            }
            rank += 1;
        });

        let mut support_labels = Vec::with_capacity(support_entries as usize);
        let mut support_cells = Vec::with_capacity(support_entries as usize);
        let mut cell_buf: Vec<u32> = Vec::with_capacity(cell_size);
        for_each_subset(n, circuit_size, |support| {
            support_labels.extend_from_slice(support);
            for omit in 0..circuit_size {
                cell_buf.clear();
                cell_buf.extend(
                    support
                        .iter()
                        .enumerate()
                        .filter_map(|(j, &x)| (j != omit).then_some(x)),
                );
                support_cells.push(binom.rank(n, &cell_buf) as u32);
            }
        });

        let lower_positions: Vec<usize> = (0..circuit_size)
            .filter(|&i| position_in_lower(d, i + 1))
            .collect();
        let upper_positions: Vec<usize> = (0..circuit_size)
            .filter(|&i| !position_in_lower(d, i + 1))
            .collect();

        Ok(Engine {
            cfg: *cfg,
            binom,
            cell_count,
            circuit_size,
            volumes,
            support_labels,
            support_cells,
            lower_positions,
            upper_positions,
            improving: if d.is_multiple_of(2) {
                FlipDirection::Down
            } else {
                FlipDirection::Up
            },
            lowest,
            highest,
        })
    }

    pub(crate) fn cfg(&self) -> &PointConfig {
        &self.cfg
    }

    #[cfg(test)]
    pub(crate) fn improving_direction(&self) -> FlipDirection {
        self.improving
    }

    pub(crate) fn worsening_direction(&self) -> FlipDirection {
        self.improving.reversed()
    }

    fn support_count(&self) -> usize {
        self.support_labels.len() / self.circuit_size
    }

    pub(crate) fn support_label_slice(&self, support: u32) -> &[u32] {
        let base = support as usize * self.circuit_size;
        &self.support_labels[base..base + self.circuit_size]
    }

    fn side_positions(&self, direction: FlipDirection) -> (&[usize], &[usize]) {
        // (source positions, target positions) for a flip in `direction`
        match direction {
            FlipDirection::Up => (&self.lower_positions, &self.upper_positions),
            FlipDirection::Down => (&self.upper_positions, &self.lower_positions),
        }
    }

    pub(crate) fn scratch(&self) -> Scratch {
        Scratch {
            bits: vec![0u64; (self.cell_count as usize).div_ceil(64)],
            flips: Vec::new(),
            children: Vec::new(),
        }
    }

    // ---- conversions ----------------------------------------------------

    pub(crate) fn to_ranked(&self, t: &Triangulation) -> Result<Vec<u32>> {
        let n = self.cfg.n();
        let mut out = Vec::with_capacity(t.cells().len());
        for cell in t.cells() {
            let labels = cell.labels();
            if labels.len() != self.cfg.cell_size() || labels[labels.len() - 1] > n {
                return Err(Error::InvalidSimplex(format!(
                    "cell {cell} does not fit {}",
                    self.cfg
                )));
            }
            out.push(self.binom.rank(n, labels) as u32);
        }
        debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
        Ok(out)
    }

    pub(crate) fn to_triangulation(&self, cells: &[u32]) -> Triangulation {
        let mut buf = Vec::new();
        let simplices = cells
            .iter()
            .map(|&r| {
                self.binom
                    .unrank(self.cfg.n(), self.cfg.cell_size(), r as u64, &mut buf);
                Simplex::from_sorted(buf.clone())
            })
            .collect();
        Triangulation::from_sorted_cells(simplices)
    }

    pub(crate) fn gkz_ranked(&self, cells: &[u32]) -> GkzVector {
        let mut entries = vec![BigUint::zero(); self.cfg.n() as usize];
        let mut buf = Vec::new();
        for &r in cells {
            self.binom
                .unrank(self.cfg.n(), self.cfg.cell_size(), r as u64, &mut buf);
            for &label in &buf {
                entries[label as usize - 1] += &self.volumes[r as usize];
            }
        }
        GkzVector::from_entries(entries)
    }

    // ---- bitset plumbing -------------------------------------------------

    fn load_bits(&self, scratch: &mut Scratch, cells: &[u32]) {
        scratch.bits.fill(0);
        for &r in cells {
            scratch.bits[(r >> 6) as usize] |= 1u64 << (r & 63);
        }
    }

    /// XOR the support's cells: removes the present side, inserts the absent
    /// one. Its own inverse, independent of flip direction.
    fn toggle_flip_bits(&self, scratch: &mut Scratch, flip: RankedFlip) {
        let base = flip.support as usize * self.circuit_size;
        for &r in &self.support_cells[base..base + self.circuit_size] {
            scratch.bits[(r >> 6) as usize] ^= 1u64 << (r & 63);
        }
    }

    #[inline]
    fn has_cell(bits: &[u64], rank: u32) -> bool {
        bits[(rank >> 6) as usize] & (1u64 << (rank & 63)) != 0
    }

    #[inline]
    fn side_present(&self, bits: &[u64], support: usize, positions: &[usize]) -> bool {
        let base = support * self.circuit_size;
        positions
            .iter()
            .all(|&i| Self::has_cell(bits, self.support_cells[base + i]))
    }

    /// Full scan over every circuit, in lexicographic support order.
    fn find_flips_ranked(&self, bits: &[u64], out: &mut Vec<RankedFlip>) {
        out.clear();
        for s in 0..self.support_count() {
            if self.side_present(bits, s, &self.lower_positions) {
                debug_assert!(!self.side_present(bits, s, &self.upper_positions));
                out.push(RankedFlip {
                    support: s as u32,
                    direction: FlipDirection::Up,
                });
            } else if self.side_present(bits, s, &self.upper_positions) {
                out.push(RankedFlip {
                    support: s as u32,
                    direction: FlipDirection::Down,
                });
            }
        }
    }

    pub(crate) fn flips_of(&self, scratch: &mut Scratch, cells: &[u32]) -> Vec<RankedFlip> {
        self.load_bits(scratch, cells);
        let mut out = Vec::new();
        self.find_flips_ranked(&scratch.bits, &mut out);
        out
    }

    // ---- flip application and GKZ-delta comparison -----------------------

    pub(crate) fn apply_ranked(&self, cells: &[u32], flip: RankedFlip) -> Vec<u32> {
        let base = flip.support as usize * self.circuit_size;
        let (src_pos, tgt_pos) = self.side_positions(flip.direction);
        // position order is reverse rank order, so reversed iteration yields
        // ascending ranks
        let src: Vec<u32> = src_pos
            .iter()
            .rev()
            .map(|&i| self.support_cells[base + i])
            .collect();
        let tgt: Vec<u32> = tgt_pos
            .iter()
            .rev()
            .map(|&i| self.support_cells[base + i])
            .collect();
        debug_assert!(src.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(tgt.windows(2).all(|w| w[0] < w[1]));
        let mut out = Vec::with_capacity(cells.len() - src.len() + tgt.len());
        let mut si = 0;
        let mut ti = 0;
        for &c in cells {
            if si < src.len() && src[si] == c {
                si += 1;
                continue;
            }
            while ti < tgt.len() && tgt[ti] < c {
                out.push(tgt[ti]);
                ti += 1;
            }
            debug_assert!(
                ti >= tgt.len() || tgt[ti] != c,
                "inserted cell already present"
            );
            out.push(c);
        }
        out.extend_from_slice(&tgt[ti..]);
        debug_assert_eq!(si, src.len(), "flip source not contained in the cell set");
        out
    }

    /// Sign and magnitude of the GKZ delta of `flip` at support position
    /// `pos0` (0-based).
    #[inline]
    fn delta_at(&self, flip: RankedFlip, pos0: usize) -> (bool, &BigUint) {
        let in_lower = position_in_lower(self.cfg.d(), pos0 + 1);
        let positive = match flip.direction {
            FlipDirection::Up => in_lower,
            FlipDirection::Down => !in_lower,
        };
        let rank = self.support_cells[flip.support as usize * self.circuit_size + pos0];
        (positive, &self.volumes[rank as usize])
    }

    /// Lexicographic comparison of `gkz(t + f)` against `gkz(t + g)` for two
    /// flips available on the same triangulation `t`, via sparse deltas.
    fn compare_flip_results(&self, f: RankedFlip, g: RankedFlip) -> Ordering {
        if f == g {
            return Ordering::Equal;
        }
        let fs = self.support_label_slice(f.support);
        let gs = self.support_label_slice(g.support);
        let mut i = 0;
        let mut j = 0;
        while i < fs.len() || j < gs.len() {
            let fl = fs.get(i).copied().unwrap_or(u32::MAX);
            let gl = gs.get(j).copied().unwrap_or(u32::MAX);
            let label = fl.min(gl);
            let df = (fl == label).then(|| self.delta_at(f, i));
            let dg = (gl == label).then(|| self.delta_at(g, j));
            let ord = cmp_signed(df, dg);
            if ord != Ordering::Equal {
                return ord;
            }
            if fl == label {
                i += 1;
            }
            if gl == label {
                j += 1;
            }
        }
        Ordering::Equal
    }

    /// Canonical parent choice between two improving flips on the same node:
    /// prefer the lexicographically greater GKZ result; on the (never
    /// observed) tie, the lexicographically least canonical cell set.
    fn parent_choice(&self, cells: &[u32], f: RankedFlip, g: RankedFlip) -> Ordering {
        match self.compare_flip_results(f, g) {
            Ordering::Equal => {
                debug_assert!(
                    f == g,
                    "distinct flips with identical GKZ results on one node"
                );
                let tf = self.apply_ranked(cells, f);
                let tg = self.apply_ranked(cells, g);
                tg.cmp(&tf)
            }
            ord => ord,
        }
    }

    /// The improving flips available on `cells`, in canonical support order.
    pub(crate) fn improving_flips(&self, scratch: &mut Scratch, cells: &[u32]) -> Vec<RankedFlip> {
        self.load_bits(scratch, cells);
        let positions = match self.improving {
            FlipDirection::Up => &self.lower_positions,
            FlipDirection::Down => &self.upper_positions,
        };
        let mut out = Vec::new();
        for s in 0..self.support_count() {
            if self.side_present(&scratch.bits, s, positions) {
                out.push(RankedFlip {
                    support: s as u32,
                    direction: self.improving,
                });
            }
        }
        out
    }

    /// The canonical parent flip of a non-root node, or `None` at the root.
    pub(crate) fn parent_flip(&self, scratch: &mut Scratch, cells: &[u32]) -> Option<RankedFlip> {
        let improving = self.improving_flips(scratch, cells);
        let mut best: Option<RankedFlip> = None;
        for f in improving {
            best = Some(match best {
                None => f,
                Some(b) => {
                    if self.parent_choice(cells, f, b) == Ordering::Greater {
                        f
                    } else {
                        b
                    }
                }
            });
        }
        best
    }

    /// Decide whether `child_cells = parent + flip` has the parent as its
    /// canonical parent, i.e. whether the reverse flip wins against every
    /// other improving flip of the child. `bits` must hold the child's cells.
    fn is_child(&self, bits: &[u64], child_cells: &[u32], rev: RankedFlip) -> Result<bool> {
        let positions = match self.improving {
            FlipDirection::Up => &self.lower_positions,
            FlipDirection::Down => &self.upper_positions,
        };
        debug_assert_eq!(rev.direction, self.improving);
        let mut saw_rev = false;
        let mut improving_found = 0usize;
        for s in 0..self.support_count() {
            if !self.side_present(bits, s, positions) {
                continue;
            }
            improving_found += 1;
            let g = RankedFlip {
                support: s as u32,
                direction: self.improving,
            };
            if g == rev {
                saw_rev = true;
                continue;
            }
            if self.parent_choice(child_cells, rev, g) == Ordering::Less {
                return Ok(false);
            }
        }
        if improving_found == 0 {
            // a non-root node with no GKZ-improving neighbor would make the
            // reverse search incomplete
            return Err(Error::CompletenessViolation(format!(
                "non-root {} has no GKZ-improving neighbor",
                self.to_triangulation(child_cells)
            )));
        }
        if !saw_rev {
            return Err(Error::InternalConsistency(format!(
                "reverse flip not available on {}",
                self.to_triangulation(child_cells)
            )));
        }
        Ok(true)
    }

    // ---- roots -----------------------------------------------------------

    /// The reverse-search root: the triangulation with the lexicographically
    /// largest GKZ vector (lowest for even `d`, highest for odd `d`).
    /// Verifies that no neighbor improves on it.
    pub(crate) fn root_ranked(&self, scratch: &mut Scratch) -> Result<Vec<u32>> {
        let root = if self.cfg.d().is_multiple_of(2) {
            self.lowest.clone()
        } else {
            self.highest.clone()
        };
        if !self.improving_flips(scratch, &root).is_empty() {
            return Err(Error::InternalConsistency(format!(
                "root {} of {} has a GKZ-improving neighbor",
                self.to_triangulation(&root),
                self.cfg
            )));
        }
        Ok(root)
    }

    // ---- reverse-search expansion -----------------------------------------

    /// Expand the reverse-search subtree under `start`, visiting at most
    /// `budget` nodes depth-first with children in canonical flip order.
    /// The visitor receives `(cells, depth, parent visit index, visit index)`
    /// with indices local to this expansion and stops the traversal by
    /// returning false.
    pub(crate) fn expand(
        &self,
        scratch: &mut Scratch,
        start: Vec<u32>,
        start_depth: u32,
        budget: u64,
        mut visit: impl FnMut(&[u32], u32, Option<u64>, u64) -> bool,
    ) -> Result<Expansion> {
        let mut stack: Vec<(Vec<u32>, u32, Option<u64>)> = vec![(start, start_depth, None)];
        let mut visited = 0u64;
        let mut flip_edges = 0u64;
        let mut max_depth = start_depth;
        let worsening = self.worsening_direction();

        while let Some((cells, depth, parent)) = stack.pop() {
            if visited == budget {
                stack.push((cells, depth, parent));
                let leftover = stack.into_iter().map(|(c, dep, _)| (c, dep)).collect();
                return Ok(Expansion {
                    visited,
                    flip_edges,
                    max_depth,
                    leftover,
                    aborted: false,
                });
            }
            let index = visited;
            visited += 1;
            max_depth = max_depth.max(depth);

            self.load_bits(scratch, &cells);
            let mut flips = std::mem::take(&mut scratch.flips);
            self.find_flips_ranked(&scratch.bits, &mut flips);
            flip_edges += flips.iter().filter(|f| f.direction == worsening).count() as u64;

            if !visit(&cells, depth, parent, index) {
                scratch.flips = flips;
                return Ok(Expansion {
                    visited,
                    flip_edges,
                    max_depth,
                    leftover: Vec::new(),
                    aborted: true,
                });
            }

            let mut children = std::mem::take(&mut scratch.children);
            children.clear();
            for &f in flips.iter().filter(|f| f.direction == worsening) {
                self.toggle_flip_bits(scratch, f);
                let child_cells = self.apply_ranked(&cells, f);
                if self.is_child(&scratch.bits, &child_cells, f.reversed())? {
                    children.push(child_cells);
                }
                self.toggle_flip_bits(scratch, f);
            }
            for child in children.drain(..).rev() {
                stack.push((child, depth + 1, Some(index)));
            }
            scratch.flips = flips;
            scratch.children = children;
        }

        Ok(Expansion {
            visited,
            flip_edges,
            max_depth,
            leftover: Vec::new(),
            aborted: false,
        })
    }
}

fn cmp_signed(a: Option<(bool, &BigUint)>, b: Option<(bool, &BigUint)>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (Some((true, _)), None) => Ordering::Greater,
        (Some((false, _)), None) => Ordering::Less,
        (None, Some((true, _))) => Ordering::Less,
        (None, Some((false, _))) => Ordering::Greater,
        (Some((pa, va)), Some((pb, vb))) => match (pa, pb) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (true, true) => va.cmp(vb),
            (false, false) => vb.cmp(va),
        },
    }
}

#[cfg(test)]
mod tests {
    #![allow(clippy::mutable_key_type)]

    use super::*;
    use crate::gkz::{compute_gkz, lex_compare};
    use crate::triangulation::{apply_flip, find_flips, lowest_triangulation};

    fn cfg(n: u32, d: u32) -> PointConfig {
        PointConfig::new(n, d).unwrap()
    }

    /// The rank-space scan must return exactly the flips of the reference
    /// label-space scan, in the same order.
    #[test]
    fn ranked_scan_matches_reference() {
        for (n, d) in [
            (4u32, 2u32),
            (6, 2),
            (7, 2),
            (6, 3),
            (7, 3),
            (7, 4),
            (5, 1),
            (6, 1),
        ] {
            let c = cfg(n, d);
            let engine = Engine::new(&c).unwrap();
            let mut scratch = engine.scratch();
            // walk the BFS-reachable graph a little to diversify instances
            let mut frontier = vec![lowest_triangulation(&c)];
            let mut seen = std::collections::BTreeSet::new();
            while let Some(t) = frontier.pop() {
                if seen.len() > 40 || !seen.insert(t.clone()) {
                    continue;
                }
                let reference = find_flips(&c, &t);
                let ranked = engine.flips_of(&mut scratch, &engine.to_ranked(&t).unwrap());
                assert_eq!(reference.len(), ranked.len(), "C({n},{d}) at {t}");
                for (rf, rr) in reference.iter().zip(&ranked) {
                    assert_eq!(
                        rf.circuit().support(),
                        engine.support_label_slice(rr.support),
                    );
                    assert_eq!(rf.direction(), rr.direction);
                    // applying agrees too
                    let via_ref = apply_flip(&t, rf).unwrap();
                    let via_rank = engine.to_triangulation(
                        &engine.apply_ranked(&engine.to_ranked(&t).unwrap(), *rr),
                    );
                    assert_eq!(via_ref, via_rank);
                    frontier.push(via_ref);
                }
            }
        }
    }

    /// Sparse-delta comparisons must agree with full GKZ comparisons.
    #[test]
    fn delta_comparison_matches_full_vectors() {
        for (n, d) in [(6u32, 2u32), (7, 3), (7, 4), (6, 1)] {
            let c = cfg(n, d);
            let engine = Engine::new(&c).unwrap();
            let mut scratch = engine.scratch();
            let t = lowest_triangulation(&c);
            let ranked = engine.to_ranked(&t).unwrap();
            let flips = engine.flips_of(&mut scratch, &ranked);
            for &f in &flips {
                for &g in &flips {
                    let sparse = engine.compare_flip_results(f, g);
                    let tf = engine.to_triangulation(&engine.apply_ranked(&ranked, f));
                    let tg = engine.to_triangulation(&engine.apply_ranked(&ranked, g));
                    let full = lex_compare(
                        &compute_gkz(&c, &tf).unwrap(),
                        &compute_gkz(&c, &tg).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(sparse, full, "C({n},{d}) flips {f:?} vs {g:?}");
                }
            }
        }
    }

    /// A flip must move the GKZ vector in the direction the parity law says.
    #[test]
    fn flip_direction_moves_gkz_correctly() {
        for (n, d) in [(6u32, 2u32), (7, 3), (6, 1), (7, 4)] {
            let c = cfg(n, d);
            let engine = Engine::new(&c).unwrap();
            let mut scratch = engine.scratch();
            let t = lowest_triangulation(&c);
            let ranked = engine.to_ranked(&t).unwrap();
            for f in engine.flips_of(&mut scratch, &ranked) {
                let before = compute_gkz(&c, &t).unwrap();
                let after = compute_gkz(
                    &c,
                    &engine.to_triangulation(&engine.apply_ranked(&ranked, f)),
                )
                .unwrap();
                let cmp = lex_compare(&after, &before).unwrap();
                let expected = if f.direction == engine.improving_direction() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
                assert_eq!(cmp, expected);
            }
        }
    }

    #[test]
    fn capacity_guard_fires() {
        // C(40,12) has far too many possible cells for the tables
        let c = cfg(40, 11);
        assert!(matches!(Engine::new(&c), Err(Error::Capacity(_))));
    }
}
