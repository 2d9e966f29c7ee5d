//! Move tables: constant-work permutation steps in (sub-run, offset) form.
//!
//! Each sub-run stores its head `h`, the image `π(h)`, and the sub-run that
//! contains `π(h)`. A step adds the offset to the image and walks forward from
//! that sub-run to the last head `≤ π(j)`. Balanced heads keep the walk below
//! `2d` probes. The walk is linear rather than a doubling search; for constant
//! `d` the two are interchangeable.

use crate::balance::{balance_runs, BalancedRuns};
use crate::error::{out_of_range, Result};
use crate::text::{OracleKind, PermutationOracle, SuffixStructures};

/// Position in sub-run coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Coords {
    pub run: usize,
    pub offset: usize,
}

impl Coords {
    pub fn new(run: usize, offset: usize) -> Self {
        Coords { run, offset }
    }
}

/// Result of one permutation step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub coords: Coords,
    pub position: usize,
    /// Head comparisons made while locating the result's sub-run.
    pub probes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTable {
    n: usize,
    d: usize,
    heads: Vec<usize>,
    images: Vec<usize>,
    targets: Vec<usize>,
}

impl MoveTable {
    pub fn build(b: &BalancedRuns) -> Self {
        let heads = b.p_heads().to_vec();
        let images = b.images().to_vec();
        let targets = images
            .iter()
            .map(|&q| heads.partition_point(|&h| h <= q) - 1)
            .collect();
        MoveTable {
            n: b.n(),
            d: b.d(),
            heads,
            images,
            targets,
        }
    }

    /// Oracle, natural runs, balancing, table: the whole pipeline for one kind.
    pub fn for_kind(structures: &SuffixStructures, kind: OracleKind, d: usize) -> Result<Self> {
        let perm = structures.oracle(kind);
        let runs = structures.natural_runs(&perm);
        Ok(Self::build(&balance_runs(&runs, &perm, d)?))
    }

    /// Table for an arbitrary permutation from its minimal run decomposition.
    pub fn for_permutation(perm: &PermutationOracle, d: usize) -> Result<Self> {
        let runs = crate::text::RunDecomposition::minimal(perm);
        Ok(Self::build(&balance_runs(&runs, perm, d)?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of sub-runs `r'`.
    pub fn rows(&self) -> usize {
        self.heads.len()
    }

    /// `(head, image, target)` of sub-run `k`.
    pub fn row(&self, k: usize) -> (usize, usize, usize) {
        (self.heads[k], self.images[k], self.targets[k])
    }

    pub fn run_len(&self, k: usize) -> usize {
        self.heads.get(k + 1).copied().unwrap_or(self.n) - self.heads[k]
    }

    fn check(&self, c: Coords) -> Result<()> {
        if c.run >= self.rows() {
            return Err(out_of_range("sub-run", c.run, self.rows()));
        }
        if c.offset >= self.run_len(c.run) {
            return Err(out_of_range("offset", c.offset, self.run_len(c.run)));
        }
        Ok(())
    }

    pub fn step(&self, c: Coords) -> Result<Step> {
        self.check(c)?;
        Ok(self.step_unchecked(c))
    }

    #[inline]
    pub fn step_unchecked(&self, c: Coords) -> Step {
        let position = self.images[c.run] + c.offset;
        let mut run = self.targets[c.run];
        let mut probes = 0;
        while run + 1 < self.heads.len() {
            probes += 1;
            if self.heads[run + 1] > position {
                break;
            }
            run += 1;
        }
        Step {
            coords: Coords::new(run, position - self.heads[run]),
            position,
            probes,
        }
    }

    /// Coordinates of position `j` by binary search over heads.
    pub fn locate(&self, j: usize) -> Result<Coords> {
        if j >= self.n {
            return Err(out_of_range("position", j, self.n));
        }
        let run = self.heads.partition_point(|&h| h <= j) - 1;
        Ok(Coords::new(run, j - self.heads[run]))
    }

    pub fn position(&self, c: Coords) -> Result<usize> {
        self.check(c)?;
        Ok(self.heads[c.run] + c.offset)
    }
}
