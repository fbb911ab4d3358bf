//! Simplices, triangulations, circuits and bistellar flips of `C(n,d)`.
//!
//! Every `(d+2)`-subset of vertex labels is a circuit and carries exactly two
//! triangulations of its own convex hull, the lower cells `L(S)` and the
//! upper cells `U(S)`; a flip swaps one for the other inside an ambient
//! triangulation. Because all circuits of a cyclic polytope are
//! full-dimensional, containment of one side is the whole flippability test.
//!
//! The canonical text form of a triangulation is `{{i,j,...},{...}}` with
//! 1-based labels, cells and labels sorted ascending and no whitespace. It is
//! bit-exact: the CLI, checkpoints and fixtures all rely on it.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use once_cell::sync::OnceCell;

use crate::combi::for_each_subset;
use crate::config::{
    gap_parity, is_boundary_facet, normalized_volume, total_volume, Parity, PointConfig, Volume,
};
use crate::error::{Error, Result};
use crate::gkz::GkzVector;

/// A simplex spanned by strictly increasing 1-based vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    labels: Box<[u32]>,
}

impl Simplex {
    pub fn new(labels: Vec<u32>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidSimplex("empty label set".into()));
        }
        if labels[0] < 1 {
            return Err(Error::InvalidSimplex("labels are 1-based".into()));
        }
        if !labels.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSimplex(format!(
                "labels {labels:?} are not strictly increasing"
            )));
        }
        Ok(Simplex {
            labels: labels.into_boxed_slice(),
        })
    }

    /// Caller guarantees sortedness; used on internally generated label sets.
    pub(crate) fn from_sorted(labels: Vec<u32>) -> Self {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]) && labels.first() >= Some(&1));
        Simplex {
            labels: labels.into_boxed_slice(),
        }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn contains(&self, label: u32) -> bool {
        self.labels.binary_search(&label).is_ok()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// A triangulation: a canonically sorted set of simplex cells. Identity
/// (equality, hashing, ordering) is the cell set alone; the lazily computed
/// GKZ vector is a cache, never a key.
#[derive(Debug)]
pub struct Triangulation {
    cells: Box<[Simplex]>,
    gkz: OnceCell<GkzVector>,
}

impl Triangulation {
    pub fn new(mut cells: Vec<Simplex>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidTriangulation("no cells".into()));
        }
        let size = cells[0].labels().len();
        if cells.iter().any(|c| c.labels().len() != size) {
            return Err(Error::InvalidTriangulation(
                "cells of mixed dimension".into(),
            ));
        }
        cells.sort_unstable();
        if cells.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTriangulation("duplicate cell".into()));
        }
        Ok(Triangulation {
            cells: cells.into_boxed_slice(),
            gkz: OnceCell::new(),
        })
    }

    /// Caller guarantees the cells are sorted, distinct and uniform.
    pub(crate) fn from_sorted_cells(cells: Vec<Simplex>) -> Self {
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
        Triangulation {
            cells: cells.into_boxed_slice(),
            gkz: OnceCell::new(),
        }
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn contains(&self, cell: &Simplex) -> bool {
        self.cells.binary_search(cell).is_ok()
    }

    pub(crate) fn gkz_cache(&self) -> &OnceCell<GkzVector> {
        &self.gkz
    }

    /// Canonical text form, identical to the `Display` output.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl Clone for Triangulation {
    fn clone(&self) -> Self {
        Triangulation {
            cells: self.cells.clone(),
            gkz: self.gkz.clone(),
        }
    }
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for Triangulation {}

impl PartialOrd for Triangulation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Triangulation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cells.cmp(&other.cells)
    }
}

impl std::hash::Hash for Triangulation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.cells.hash(state);
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for Triangulation {
    type Err = Error;

    /// Strict parser for the canonical text form; rejects whitespace,
    /// unsorted labels and unsorted or duplicate cells.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: &str| Error::Parse {
            line: 1,
            message: message.into(),
        };
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let expect = |b: u8, pos: &mut usize| -> Result<()> {
            if bytes.get(*pos) == Some(&b) {
                *pos += 1;
                Ok(())
            } else {
                Err(bad(&format!(
                    "expected '{}' at column {}",
                    b as char,
                    *pos + 1
                )))
            }
        };
        let parse_int = |pos: &mut usize| -> Result<u32> {
            let start = *pos;
            while bytes.get(*pos).is_some_and(|b| b.is_ascii_digit()) {
                *pos += 1;
            }
            if *pos == start || bytes[start] == b'0' {
                return Err(bad(&format!("expected label at column {}", start + 1)));
            }
            s[start..*pos]
                .parse::<u32>()
                .map_err(|_| bad("label out of range"))
        };

        expect(b'{', &mut pos)?;
        let mut cells: Vec<Simplex> = Vec::new();
        loop {
            expect(b'{', &mut pos)?;
            let mut labels = vec![parse_int(&mut pos)?];
            while bytes.get(pos) == Some(&b',') {
                pos += 1;
                labels.push(parse_int(&mut pos)?);
            }
            expect(b'}', &mut pos)?;
            if !labels.windows(2).all(|w| w[0] < w[1]) {
                return Err(bad("cell labels not strictly increasing"));
            }
            let cell = Simplex::from_sorted(labels);
            if let Some(prev) = cells.last() {
                if *prev >= cell {
                    return Err(bad("cells not strictly increasing"));
                }
                if prev.labels().len() != cell.labels().len() {
                    return Err(bad("cells of mixed dimension"));
                }
            }
            cells.push(cell);
            match bytes.get(pos) {
                Some(b',') => pos += 1,
                Some(b'}') => {
                    pos += 1;
                    break;
                }
                _ => return Err(bad(&format!("expected ',' or '}}' at column {}", pos + 1))),
            }
        }
        if pos != bytes.len() {
            return Err(bad(&format!("trailing input at column {}", pos + 1)));
        }
        Ok(Triangulation::from_sorted_cells(cells))
    }
}

/// A circuit of `C(n,d)`: a `(d+2)`-subset of labels with its two
/// triangulations, the lower cells `L(S)` and the upper cells `U(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    support: Box<[u32]>,
    lower: Box<[Simplex]>,
    upper: Box<[Simplex]>,
}

impl Circuit {
    pub fn support(&self) -> &[u32] {
        &self.support
    }

    pub fn lower_cells(&self) -> &[Simplex] {
        &self.lower
    }

    pub fn upper_cells(&self) -> &[Simplex] {
        &self.upper
    }
}

/// Direction of a flip across a circuit: `Up` replaces `L(S)` by `U(S)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlipDirection {
    Up,
    Down,
}

impl FlipDirection {
    pub fn reversed(self) -> Self {
        match self {
            FlipDirection::Up => FlipDirection::Down,
            FlipDirection::Down => FlipDirection::Up,
        }
    }
}

/// A flip: a circuit together with the direction it is applied in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flip {
    circuit: Circuit,
    direction: FlipDirection,
}

impl Flip {
    pub fn new(circuit: Circuit, direction: FlipDirection) -> Self {
        Flip { circuit, direction }
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn direction(&self) -> FlipDirection {
        self.direction
    }

    /// Cells removed by this flip.
    pub fn source_cells(&self) -> &[Simplex] {
        match self.direction {
            FlipDirection::Up => &self.circuit.lower,
            FlipDirection::Down => &self.circuit.upper,
        }
    }

    /// Cells inserted by this flip.
    pub fn target_cells(&self) -> &[Simplex] {
        match self.direction {
            FlipDirection::Up => &self.circuit.upper,
            FlipDirection::Down => &self.circuit.lower,
        }
    }

    pub fn reversed(&self) -> Flip {
        Flip {
            circuit: self.circuit.clone(),
            direction: self.direction.reversed(),
        }
    }
}

/// Position parity rule: in the sorted support `s_1 < ... < s_{d+2}`, the
/// cell omitting position `i` lies in `L(S)` iff `d + 2 - i` is even. This is
/// the oriented evenness criterion specialized to a circuit, where the gap
/// `s_i` has exactly `d + 2 - i` larger elements in the cell.
pub(crate) fn position_in_lower(d: u32, position_1based: usize) -> bool {
    (d as usize + 2 - position_1based).is_multiple_of(2)
}

/// Build the circuit on a `(d+2)`-subset of labels.
pub fn circuit_of(cfg: &PointConfig, support: &[u32]) -> Result<Circuit> {
    let k = cfg.d() as usize + 2;
    if support.len() != k {
        return Err(Error::InvalidCircuit(format!(
            "support has {} labels, expected d+2={}",
            support.len(),
            k
        )));
    }
    if !support.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidCircuit(
            "support labels must be strictly increasing".into(),
        ));
    }
    if support[0] < 1 || !cfg.check_label(support[k - 1]) {
        return Err(Error::InvalidCircuit(format!(
            "support labels outside 1..{}",
            cfg.n()
        )));
    }
    let mut lower = Vec::with_capacity(k.div_ceil(2));
    let mut upper = Vec::with_capacity(k / 2);
    for i in 1..=k {
        let cell: Vec<u32> = support
            .iter()
            .enumerate()
            .filter_map(|(j, &x)| (j + 1 != i).then_some(x))
            .collect();
        debug_assert_eq!(
            gap_parity(&cell, support[i - 1]).unwrap(),
            if position_in_lower(cfg.d(), i) {
                Parity::Even
            } else {
                Parity::Odd
            }
        );
        let cell = Simplex::from_sorted(cell);
        if position_in_lower(cfg.d(), i) {
            lower.push(cell);
        } else {
            upper.push(cell);
        }
    }
    // positions descend in cell order; reverse for canonical sortedness
    lower.reverse();
    upper.reverse();
    Ok(Circuit {
        support: support.to_vec().into_boxed_slice(),
        lower: lower.into_boxed_slice(),
        upper: upper.into_boxed_slice(),
    })
}

fn parity_triangulation(cfg: &PointConfig, want: Parity) -> Triangulation {
    let mut cells = Vec::new();
    for_each_subset(cfg.n(), cfg.cell_size(), |labels| {
        let all_match = (1..=cfg.n())
            .filter(|g| !labels.contains(g))
            .all(|g| gap_parity(labels, g).unwrap() == want);
        if all_match {
            cells.push(Simplex::from_sorted(labels.to_vec()));
        }
    });
    Triangulation::from_sorted_cells(cells)
}

/// The unique minimum of HST1: all cells have only even gaps. For `d` even
/// this triangulation has the lexicographically largest GKZ vector.
pub fn lowest_triangulation(cfg: &PointConfig) -> Triangulation {
    parity_triangulation(cfg, Parity::Even)
}

/// The unique maximum of HST1: all cells have only odd gaps.
pub fn highest_triangulation(cfg: &PointConfig) -> Triangulation {
    parity_triangulation(cfg, Parity::Odd)
}

/// Reference flip scan: for every `(d+2)`-subset `S`, an up-flip is available
/// iff `L(S)` is contained in the triangulation, a down-flip iff `U(S)` is.
/// Returns flips in lexicographic support order.
pub fn find_flips(cfg: &PointConfig, t: &Triangulation) -> Vec<Flip> {
    let members: HashSet<&[u32]> = t.cells().iter().map(|c| c.labels()).collect();
    let d = cfg.d();
    let k = d as usize + 2;
    let mut flips = Vec::new();
    let mut cell_buf: Vec<u32> = Vec::with_capacity(k - 1);
    for_each_subset(cfg.n(), k, |support| {
        let mut side_in = |want_lower: bool| -> bool {
            for i in 1..=k {
                if position_in_lower(d, i) != want_lower {
                    continue;
                }
                cell_buf.clear();
                cell_buf.extend(
                    support
                        .iter()
                        .enumerate()
                        .filter_map(|(j, &x)| (j + 1 != i).then_some(x)),
                );
                if !members.contains(cell_buf.as_slice()) {
                    return false;
                }
            }
            true
        };
        let up = side_in(true);
        let down = side_in(false);
        debug_assert!(!(up && down), "both circuit sides inside one triangulation");
        if up {
            flips.push(Flip::new(
                circuit_of(cfg, support).unwrap(),
                FlipDirection::Up,
            ));
        } else if down {
            flips.push(Flip::new(
                circuit_of(cfg, support).unwrap(),
                FlipDirection::Down,
            ));
        }
    });
    flips
}

/// Apply a flip: remove the source side, insert the target side.
pub fn apply_flip(t: &Triangulation, flip: &Flip) -> Result<Triangulation> {
    for cell in flip.source_cells() {
        if !t.contains(cell) {
            return Err(Error::FlipPrecondition(format!(
                "cell {cell} of the flip source is not in the triangulation"
            )));
        }
    }
    let mut cells: Vec<Simplex> = t
        .cells()
        .iter()
        .filter(|c| !flip.source_cells().contains(c))
        .cloned()
        .collect();
    cells.extend(flip.target_cells().iter().cloned());
    cells.sort_unstable();
    debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
    Ok(Triangulation::from_sorted_cells(cells))
}

/// One violated validity condition of a candidate triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Cell volumes do not add up to the polytope volume.
    VolumeMismatch { actual: Volume, expected: Volume },
    /// A boundary ridge covered by a number of cells other than one.
    BoundaryRidge { ridge: Vec<u32>, count: usize },
    /// An interior ridge covered by a number of cells other than two.
    InteriorRidge { ridge: Vec<u32>, count: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn ridge_text(r: &[u32]) -> String {
            let inner: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", inner.join(","))
        }
        match self {
            Violation::VolumeMismatch { actual, expected } => {
                write!(f, "volume {actual} of {expected}")
            }
            Violation::BoundaryRidge { ridge, count } => {
                write!(f, "boundary ridge {} in {count} cells", ridge_text(ridge))
            }
            Violation::InteriorRidge { ridge, count } => {
                write!(f, "interior ridge {} in {count} cells", ridge_text(ridge))
            }
        }
    }
}

/// Outcome of the validity audit of [`check_triangulation`].
#[derive(Clone, Debug, Default)]
pub struct ValidityReport {
    violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Necessary-condition audit of a cell set: total volume must match the
/// polytope, every boundary ridge must lie in exactly one cell and every
/// interior ridge in exactly two. Violations are report entries, not errors;
/// only malformed cells error out.
pub fn check_triangulation(cfg: &PointConfig, t: &Triangulation) -> Result<ValidityReport> {
    let mut report = ValidityReport::default();

    let mut volume = Volume::zero();
    for cell in t.cells() {
        volume += &normalized_volume(cfg, cell)?;
    }
    let expected = total_volume(cfg);
    if volume != expected {
        report.violations.push(Violation::VolumeMismatch {
            actual: volume,
            expected,
        });
    }

    let mut ridge_counts: HashMap<Vec<u32>, usize> = HashMap::new();
    for cell in t.cells() {
        let labels = cell.labels();
        for omit in 0..labels.len() {
            let ridge: Vec<u32> = labels
                .iter()
                .enumerate()
                .filter_map(|(j, &x)| (j != omit).then_some(x))
                .collect();
            *ridge_counts.entry(ridge).or_insert(0) += 1;
        }
    }
    let mut ridges: Vec<(Vec<u32>, usize)> = ridge_counts.into_iter().collect();
    ridges.sort_unstable();
    for (ridge, count) in ridges {
        let expected_count = if is_boundary_facet(cfg, &ridge)? {
            1
        } else {
            2
        };
        if count != expected_count {
            report.violations.push(if expected_count == 1 {
                Violation::BoundaryRidge { ridge, count }
            } else {
                Violation::InteriorRidge { ridge, count }
            });
        }
    }
    Ok(report)
}
