//! GKZ vectors and the orientation of flips.
//!
//! The GKZ vector of a triangulation has one entry per vertex: the sum of
//! the normalized volumes of the cells containing that vertex. Flips are
//! oriented by lexicographic comparison of GKZ vectors; an up-flip makes the
//! vector lexicographically smaller when `d` is even and larger when `d` is
//! odd. This parity law is what turns the flip graph into a searchable DAG.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{CheckedSub, Zero};

use crate::config::{normalized_volume, total_volume, PointConfig};
use crate::error::{Error, Result};
use crate::triangulation::{apply_flip, position_in_lower, Flip, FlipDirection, Triangulation};

/// Length-`n` vector of exact nonnegative integers, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GkzVector {
    entries: Box<[BigUint]>,
}

impl GkzVector {
    pub(crate) fn from_entries(entries: Vec<BigUint>) -> Self {
        GkzVector {
            entries: entries.into_boxed_slice(),
        }
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry for the 1-based vertex label.
    pub fn entry(&self, label: u32) -> &BigUint {
        &self.entries[label as usize - 1]
    }

    /// Incremental update across a flip: inside the support the entry at
    /// position `i` changes by the volume of the cell omitting that position,
    /// signed by which side the cell lies on; entries outside the support are
    /// untouched. Must agree exactly with a full recomputation.
    pub fn apply_flip(&self, cfg: &PointConfig, flip: &Flip) -> Result<GkzVector> {
        let mut entries = self.entries.to_vec();
        let support = flip.circuit().support();
        let k = support.len();
        for (pos0, &label) in support.iter().enumerate() {
            let omitted: Vec<u32> = support
                .iter()
                .enumerate()
                .filter_map(|(j, &x)| (j != pos0).then_some(x))
                .collect();
            let vol = normalized_volume(cfg, &crate::triangulation::Simplex::from_sorted(omitted))?
                .into_biguint();
            let in_lower = position_in_lower(cfg.d(), pos0 + 1);
            let adds = match flip.direction() {
                FlipDirection::Up => in_lower,
                FlipDirection::Down => !in_lower,
            };
            let slot = &mut entries[label as usize - 1];
            if adds {
                *slot += vol;
            } else {
                *slot = slot.checked_sub(&vol).ok_or_else(|| {
                    Error::InternalConsistency(format!(
                        "GKZ entry underflow at label {label}: flip source not incident"
                    ))
                })?;
            }
        }
        debug_assert_eq!(k, cfg.d() as usize + 2);
        Ok(GkzVector::from_entries(entries))
    }
}

impl fmt::Display for GkzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Full GKZ computation, bypassing the triangulation's cache.
pub fn compute_gkz(cfg: &PointConfig, t: &Triangulation) -> Result<GkzVector> {
    let mut entries = vec![BigUint::zero(); cfg.n() as usize];
    for cell in t.cells() {
        let vol = normalized_volume(cfg, cell)?.into_biguint();
        for &label in cell.labels() {
            entries[label as usize - 1] += &vol;
        }
    }
    Ok(GkzVector::from_entries(entries))
}

/// The GKZ vector of a triangulation, memoized on the triangulation.
pub fn gkz<'a>(cfg: &PointConfig, t: &'a Triangulation) -> &'a GkzVector {
    t.gkz_cache().get_or_init(|| {
        compute_gkz(cfg, t).expect("triangulation cells must fit the configuration")
    })
}

/// Lexicographic comparison of two GKZ vectors of equal length.
pub fn lex_compare(a: &GkzVector, b: &GkzVector) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::IncompatibleVectors {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.entries().cmp(b.entries()))
}

/// Orientation certificate for a flip: the circuit-parity direction together
/// with the lexicographic comparison `gkz(t)` vs `gkz(t')` that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipCertificate {
    pub direction: FlipDirection,
    pub comparison: Ordering,
}

/// Orient a flip available on `t` and cross-check the two determinations:
/// the circuit-parity direction and the GKZ comparison must agree (up-flips
/// decrease the GKZ vector for even `d` and increase it for odd `d`).
pub fn orient_flip(cfg: &PointConfig, t: &Triangulation, flip: &Flip) -> Result<FlipCertificate> {
    let target = apply_flip(t, flip)?;
    let comparison = lex_compare(gkz(cfg, t), gkz(cfg, &target))?;
    let expected = match (flip.direction(), cfg.d().is_multiple_of(2)) {
        (FlipDirection::Up, true) | (FlipDirection::Down, false) => Ordering::Greater,
        (FlipDirection::Up, false) | (FlipDirection::Down, true) => Ordering::Less,
    };
    if comparison != expected {
        return Err(Error::InternalConsistency(format!(
            "flip on {:?} of {t}: circuit parity says {:?} but GKZ comparison is {comparison:?}",
            flip.circuit().support(),
            flip.direction(),
        )));
    }
    Ok(FlipCertificate {
        direction: flip.direction(),
        comparison,
    })
}

/// Sum of all GKZ entries: always `(d+1)` times the polytope volume, since
/// every cell contributes its volume once per vertex.
pub fn gkz_entry_sum(v: &GkzVector) -> BigUint {
    let mut acc = BigUint::zero();
    for e in v.entries() {
        acc += e;
    }
    acc
}

/// Check the entry-sum invariant for a triangulation.
pub fn check_gkz_sum(cfg: &PointConfig, t: &Triangulation) -> bool {
    gkz_entry_sum(gkz(cfg, t)) == total_volume(cfg).into_biguint() * BigUint::from(cfg.d() + 1)
}
