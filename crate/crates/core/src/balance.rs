//! Run splitting that bounds how many sub-run heads fall inside the image of
//! any one sub-run.
//!
//! Given a permutation decomposed into runs with heads `P`, we add heads until
//! for every pair of consecutive images `q < q'` in `Q' = π(P')` the interval
//! `[q, q')` holds fewer than `2d` heads of `P'`. The last image interval ends
//! at `n`. Splitting a run never changes the permutation: inside a sub-run
//! with head `h`, `π(i) = π(h) + i − h`.
//!
//! Construction: while some interval holds at least `2d` heads, split the run
//! owning that interval at the image of its `(d+1)`-th head. The first piece
//! keeps exactly `d` heads and the new head lands in one other interval, so
//! `Σ max(0, count − d)` drops by at least `d − 1` per split. That bounds the
//! number of splits by `|P| / (d − 1)`, i.e. `|P'| ≤ d·|P| / (d − 1)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::text::{PermutationOracle, RunDecomposition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedRuns {
    d: usize,
    n: usize,
    base_heads: Vec<usize>,
    p_heads: Vec<usize>,
    images: Vec<usize>,
}

impl BalancedRuns {
    /// Assembles a head set without balancing it; `verify_balanced` judges it.
    pub fn from_parts(
        d: usize,
        base_heads: Vec<usize>,
        mut p_heads: Vec<usize>,
        perm: &PermutationOracle,
    ) -> Self {
        p_heads.sort_unstable();
        p_heads.dedup();
        let images = p_heads.iter().map(|&h| perm.get(h)).collect();
        BalancedRuns {
            d,
            n: perm.len(),
            base_heads,
            p_heads,
            images,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Heads before splitting.
    pub fn base_heads(&self) -> &[usize] {
        &self.base_heads
    }

    /// Sub-run heads `P'`, increasing.
    pub fn p_heads(&self) -> &[usize] {
        &self.p_heads
    }

    /// `π(P'[k])` for each head, aligned with [`BalancedRuns::p_heads`].
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.p_heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_heads.is_empty()
    }

    /// `Q'` in increasing order.
    pub fn q_sorted(&self) -> Vec<usize> {
        let mut q = self.images.clone();
        q.sort_unstable();
        q
    }

    /// Restarts balancing from this head set; already-balanced input comes back unchanged.
    pub fn rebalance(&self, perm: &PermutationOracle) -> Result<BalancedRuns> {
        let mut out = balance_heads(&self.p_heads, perm, self.d)?;
        out.base_heads = self.base_heads.clone();
        Ok(out)
    }
}

pub fn balance_runs(runs: &RunDecomposition, perm: &PermutationOracle, d: usize) -> Result<BalancedRuns> {
    balance_heads(runs.p_heads(), perm, d)
}

fn balance_heads(heads: &[usize], perm: &PermutationOracle, d: usize) -> Result<BalancedRuns> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d must be at least 2, got {d}")));
    }
    let n = perm.len();
    let limit = d * heads.len() / (d - 1) + 1;

    let mut p: BTreeSet<usize> = heads.iter().copied().collect();
    // image q -> head h with π(h) = q
    let mut owners: BTreeMap<usize, usize> = heads.iter().map(|&h| (perm.get(h), h)).collect();
    let mut pending: Vec<usize> = owners.keys().copied().collect();

    while let Some(q) = pending.pop() {
        let Some(&h) = owners.get(&q) else { continue };
        let end = owners
            .range(q + 1..)
            .next()
            .map_or(n, |(&next, _)| next);
        if p.range(q..end).take(2 * d).count() < 2 * d {
            continue;
        }
        let x = *p.range(q..end).nth(d).expect("interval holds at least 2d heads");
        let split = h + (x - q);
        p.insert(split);
        owners.insert(x, split);
        if p.len() > limit {
            return Err(Error::Balance(format!(
                "{} heads from {} with d = {d}",
                p.len(),
                heads.len()
            )));
        }
        let host = *owners.range(..=split).next_back().expect("0 is always an image").0;
        pending.extend([q, x, host]);
    }

    let p_heads: Vec<usize> = p.into_iter().collect();
    let images = p_heads.iter().map(|&h| perm.get(h)).collect();
    Ok(BalancedRuns {
        d,
        n,
        base_heads: heads.to_vec(),
        p_heads,
        images,
    })
}

/// Outcome of checking both splitting guarantees and the structural invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceReport {
    pub d: usize,
    pub base_count: usize,
    pub balanced_count: usize,
    /// Largest number of heads in one image interval.
    pub max_occupancy: usize,
    /// First interval `[q, q')` holding `≥ 2d` heads, with its count.
    pub worst_interval: Option<(usize, usize, usize)>,
    pub growth_ok: bool,
    pub subset_ok: bool,
    pub images_ok: bool,
    pub arithmetic_ok: bool,
    pub pass: bool,
}

impl BalanceReport {
    pub fn growth_ratio(&self) -> f64 {
        if self.base_count == 0 {
            return 1.0;
        }
        self.balanced_count as f64 / self.base_count as f64
    }
}

/// Checks a head set against both guarantees by brute-force interval counting.
pub fn verify_balanced(b: &BalancedRuns, perm: &PermutationOracle) -> BalanceReport {
    let n = perm.len();
    let d = b.d;
    let heads = &b.p_heads;

    let strictly_increasing = heads.windows(2).all(|w| w[0] < w[1]);
    let covers = heads.first() == Some(&0) && heads.iter().all(|&h| h < n);
    let base: BTreeSet<usize> = b.base_heads.iter().copied().collect();
    let subset_ok = strictly_increasing
        && covers
        && base.iter().all(|h| heads.binary_search(h).is_ok());

    let images_ok = heads.len() == b.images.len()
        && heads.iter().zip(&b.images).all(|(&h, &q)| perm.get(h) == q);

    // Sub-run arithmetic reproduces π everywhere.
    let mut arithmetic_ok = covers;
    if covers {
        let mut k = 0;
        for i in 0..n {
            while k + 1 < heads.len() && heads[k + 1] <= i {
                k += 1;
            }
            if perm.get(heads[k]) + (i - heads[k]) != perm.get(i) {
                arithmetic_ok = false;
                break;
            }
        }
    }

    let q = b.q_sorted();
    let mut max_occupancy = 0;
    let mut worst_interval = None;
    let mut cursor = heads.partition_point(|&h| h < q.first().copied().unwrap_or(0));
    for (k, &lo) in q.iter().enumerate() {
        let hi = q.get(k + 1).copied().unwrap_or(n);
        let start = cursor;
        while cursor < heads.len() && heads[cursor] < hi {
            cursor += 1;
        }
        let count = cursor - start;
        max_occupancy = max_occupancy.max(count);
        if count >= 2 * d && worst_interval.is_none() {
            worst_interval = Some((lo, hi, count));
        }
    }

    let growth_ok = heads.len() * (d - 1) <= d * b.base_heads.len();
    let pass = d >= 2
        && subset_ok
        && images_ok
        && arithmetic_ok
        && growth_ok
        && worst_interval.is_none();
    BalanceReport {
        d,
        base_count: b.base_heads.len(),
        balanced_count: heads.len(),
        max_occupancy,
        worst_interval,
        growth_ok,
        subset_ok,
        images_ok,
        arithmetic_ok,
        pass,
    }
}
