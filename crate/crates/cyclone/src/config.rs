//! The cyclic polytope point configuration and its exact geometry.
//!
//! Points are never materialized as coordinates. With the moment-curve
//! parameters fixed to the consecutive integers `1..n`, the normalized volume
//! of a simplex is the Vandermonde product of its label differences, and the
//! boundary facets are given by Gale's evenness criterion. Both are pure
//! label combinatorics; all values are exact big integers.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::triangulation::{lowest_triangulation, Simplex};

/// The configuration of `n` points on the `d`-th moment curve, labelled
/// `1..n` in curve order. Immutable; cheap to copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointConfig {
    n: u32,
    d: u32,
}

impl PointConfig {
    /// Requires `n > d >= 1`.
    pub fn new(n: u32, d: u32) -> Result<Self> {
        if d < 1 || n <= d {
            return Err(Error::InvalidDimensions { n, d });
        }
        Ok(PointConfig { n, d })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// The codimension parameter `c = n - d`.
    pub fn codim(&self) -> u32 {
        self.n - self.d
    }

    /// Moment-curve parameters, fixed to `1..=n`.
    pub fn params(&self) -> impl Iterator<Item = u32> {
        1..=self.n
    }

    /// Number of vertices of a simplex cell, `d + 1`.
    pub fn cell_size(&self) -> usize {
        self.d as usize + 1
    }

    pub(crate) fn check_label(&self, label: u32) -> bool {
        (1..=self.n).contains(&label)
    }
}

impl fmt::Display for PointConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({},{})", self.n, self.d)
    }
}

/// A normalized volume: Euclidean volume times `d!`, always a positive
/// integer for moment-curve points with integer parameters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Volume(BigUint);

impl Volume {
    pub fn zero() -> Self {
        Volume(BigUint::zero())
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }
}

impl From<u64> for Volume {
    fn from(v: u64) -> Self {
        Volume(BigUint::from(v))
    }
}

impl From<BigUint> for Volume {
    fn from(v: BigUint) -> Self {
        Volume(v)
    }
}

impl Add for Volume {
    type Output = Volume;
    fn add(self, rhs: Volume) -> Volume {
        Volume(self.0 + rhs.0)
    }
}

impl AddAssign<&Volume> for Volume {
    fn add_assign(&mut self, rhs: &Volume) {
        self.0 += &rhs.0;
    }
}

impl Sum for Volume {
    fn sum<I: Iterator<Item = Volume>>(iter: I) -> Volume {
        let mut acc = Volume::zero();
        for v in iter {
            acc += &v;
        }
        acc
    }
}

impl fmt::Display for Volume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Gap classification used by the oriented evenness criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Classify a gap of a facet candidate: even iff the number of face elements
/// larger than the gap is even.
pub fn gap_parity(face: &[u32], gap: u32) -> Result<Parity> {
    if face.contains(&gap) {
        return Err(Error::InvalidGap { gap });
    }
    let larger = face.iter().filter(|&&x| x > gap).count();
    Ok(if larger.is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    })
}

/// Exact normalized volume of a `(d+1)`-simplex: the Vandermonde product of
/// all pairwise label differences.
pub fn normalized_volume(cfg: &PointConfig, s: &Simplex) -> Result<Volume> {
    let labels = s.labels();
    if labels.len() != cfg.cell_size() {
        return Err(Error::InvalidSimplex(format!(
            "{s} has {} labels, expected {} for {cfg}",
            labels.len(),
            cfg.cell_size()
        )));
    }
    if !cfg.check_label(*labels.last().unwrap()) {
        return Err(Error::InvalidSimplex(format!(
            "{s} has labels outside 1..{}",
            cfg.n
        )));
    }
    Ok(Volume(vandermonde_product(labels)))
}

pub(crate) fn vandermonde_product(labels: &[u32]) -> BigUint {
    let mut v = BigUint::one();
    for (k, &a) in labels.iter().enumerate() {
        for &b in &labels[k + 1..] {
            v *= BigUint::from(b - a);
        }
    }
    v
}

/// Normalized volume of the whole polytope: the volume sum of the lowest
/// triangulation, which every triangulation must match.
pub fn total_volume(cfg: &PointConfig) -> Volume {
    lowest_triangulation(cfg)
        .cells()
        .iter()
        .map(|c| normalized_volume(cfg, c).expect("lowest triangulation has valid cells"))
        .sum()
}

/// Gale's evenness criterion: `face` spans a boundary facet of `C(n,d)` iff
/// for every pair `i < j` of labels outside the face, the number of face
/// elements strictly between them is even.
pub fn is_boundary_facet(cfg: &PointConfig, face: &[u32]) -> Result<bool> {
    if face.len() != cfg.d as usize {
        return Err(Error::InvalidFace(format!(
            "face has {} labels, expected d={}",
            face.len(),
            cfg.d
        )));
    }
    if !face.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidFace(
            "face labels must be strictly increasing".into(),
        ));
    }
    if face[0] < 1 || !cfg.check_label(face[face.len() - 1]) {
        return Err(Error::InvalidFace(format!(
            "face labels outside 1..{}",
            cfg.n
        )));
    }
    let complement: Vec<u32> = (1..=cfg.n).filter(|x| !face.contains(x)).collect();
    for (a, &i) in complement.iter().enumerate() {
        for &j in &complement[a + 1..] {
            let between = face.iter().filter(|&&x| i < x && x < j).count();
            if between % 2 != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
