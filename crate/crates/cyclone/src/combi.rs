//! Lexicographic k-subset iteration and checked binomial tables.
//!
//! Subsets of `{1..n}` are always handled as strictly increasing label
//! sequences. Their lexicographic order doubles as the canonical order used
//! throughout the crate, and the rank/unrank pair below is an order
//! isomorphism onto `0..C(n,k)`.

use crate::error::{Error, Result};

/// Call `f` once for every k-subset of `{1..n}`, in lexicographic order.
pub(crate) fn for_each_subset(n: u32, k: usize, mut f: impl FnMut(&[u32])) {
    if k == 0 || k as u64 > n as u64 {
        return;
    }
    let mut cur: Vec<u32> = (1..=k as u32).collect();
    loop {
        f(&cur);
        // advance to the lexicographic successor
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] < n - (k - 1 - i) as u32 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Binomial coefficients `C(m,j)` for `m <= n`, `j <= k`, built with checked
/// arithmetic so oversized instances surface as capacity errors instead of
/// silent overflow.
pub(crate) struct Binomials {
    k: usize,
    table: Vec<u64>,
}

impl Binomials {
    pub(crate) fn new(n: u32, k: usize) -> Result<Self> {
        let rows = n as usize + 1;
        let cols = k + 1;
        let mut table = vec![0u64; rows * cols];
        for m in 0..rows {
            table[m * cols] = 1;
            for j in 1..cols.min(m + 1) {
                let above = table[(m - 1) * cols + j];
                let left = table[(m - 1) * cols + j - 1];
                table[m * cols + j] = above.checked_add(left).ok_or_else(|| {
                    Error::Capacity(format!("binomial C({m},{j}) overflows 64 bits"))
                })?;
            }
        }
        Ok(Binomials { k, table })
    }

    #[inline]
    pub(crate) fn get(&self, m: u32, j: usize) -> u64 {
        if j > self.k {
            panic!("binomial column {j} beyond table width {}", self.k);
        }
        self.table[m as usize * (self.k + 1) + j]
    }

    /// Lexicographic rank of a strictly increasing k-subset of `{1..n}`.
    pub(crate) fn rank(&self, n: u32, set: &[u32]) -> u64 {
        let k = set.len();
        let mut r = 0u64;
        let mut prev = 0u32;
        for (i, &a) in set.iter().enumerate() {
            for v in prev + 1..a {
                r += self.get(n - v, k - 1 - i);
            }
            prev = a;
        }
        r
    }

    /// Inverse of [`rank`]: writes the subset with the given lexicographic
    /// rank into `out`.
    pub(crate) fn unrank(&self, n: u32, k: usize, mut r: u64, out: &mut Vec<u32>) {
        out.clear();
        let mut v = 1u32;
        for i in 0..k {
            loop {
                let c = self.get(n - v, k - 1 - i);
                if r < c {
                    out.push(v);
                    v += 1;
                    break;
                }
                r -= c;
                v += 1;
            }
        }
    }
}
