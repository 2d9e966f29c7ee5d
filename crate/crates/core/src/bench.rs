//! Step-timing for the ψ hot path and the LF move table.

use std::hint::black_box;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::movetab::MoveTable;
use crate::psi::PsiIndex;

#[derive(Clone, Debug, PartialEq)]
pub struct Timing {
    pub steps: usize,
    pub nanos: u128,
    pub max_probes: usize,
}

impl Timing {
    pub fn ns_per_step(&self) -> f64 {
        if self.steps == 0 {
            return 0.0;
        }
        self.nanos as f64 / self.steps as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub queries: usize,
    pub seed: u64,
    pub start: usize,
    pub psi: Option<Timing>,
    pub lf: Option<Timing>,
}

/// Iterates ψ `steps` times from position `start`; entry lookup is not timed.
pub fn time_psi(idx: &PsiIndex, start: usize, steps: usize) -> Timing {
    let mut c = idx.coords_of_position(start).expect("start < n");
    let mut max_probes = 0;
    let mut acc = 0usize;
    let t = Instant::now();
    for _ in 0..steps {
        let s = idx.psi_step_unchecked(black_box(c));
        max_probes = max_probes.max(s.probes);
        acc ^= s.position;
        c = s.coords;
    }
    let nanos = t.elapsed().as_nanos();
    black_box(acc);
    Timing {
        steps,
        nanos,
        max_probes,
    }
}

pub fn time_move(table: &MoveTable, start: usize, steps: usize) -> Timing {
    let mut c = table.locate(start).expect("start < n");
    let mut max_probes = 0;
    let mut acc = 0usize;
    let t = Instant::now();
    for _ in 0..steps {
        let s = table.step_unchecked(black_box(c));
        max_probes = max_probes.max(s.probes);
        acc ^= s.position;
        c = s.coords;
    }
    let nanos = t.elapsed().as_nanos();
    black_box(acc);
    Timing {
        steps,
        nanos,
        max_probes,
    }
}

/// Times `queries` ψ steps and, when a table is given, as many LF steps, from
/// one start position drawn from `seed`.
pub fn run(idx: &PsiIndex, lf: Option<&MoveTable>, queries: usize, seed: u64) -> BenchReport {
    let start = StdRng::seed_from_u64(seed).gen_range(0..idx.n());
    if queries == 0 {
        return BenchReport {
            queries,
            seed,
            start,
            psi: None,
            lf: None,
        };
    }
    BenchReport {
        queries,
        seed,
        start,
        psi: Some(time_psi(idx, start, queries)),
        lf: lf.map(|t| time_move(t, start, queries)),
    }
}
