//! Constant-time ψ over sub-run boundaries in the F column and the BWT.
//!
//! The index keeps three bitvectors and one small permutation:
//!
//! * `bf`: sub-run heads in the F column (sparse, Elias-Fano);
//! * `bl`: sub-run heads in the BWT (sparse, Elias-Fano);
//! * `bfl`: the two head sets interleaved in position order, `0` for an F head
//!   and `1` for a BWT head, with the `0` first when both fall on one position;
//! * `tau`: for F sub-run `i`, the BWT rank of the sub-run holding ψ of its head.
//!
//! For `j` at offset `g` in F sub-run `i`:
//!
//! ```text
//! ψ(j) = bl.select1(τ(i) + 1) + g
//! ℓ    = bfl.rank0(bfl.select1(τ(i) + 1)) − 1 = bfl.select1(τ(i) + 1) − (τ(i) + 1)
//! i'   = last F sub-run with head ≤ ψ(j), found scanning forward from ℓ
//! g'   = ψ(j) − bf.select1(i' + 1)
//! ```
//!
//! `ℓ` is the first F sub-run overlapping the BWT sub-run that holds `ψ(j)`.
//! Balancing the heads bounds the scan by `2d` probes, so no sparse rank is
//! needed on the query path.

use std::ops::Range;

use crate::balance::{balance_runs, BalancedRuns};
use crate::bits::{IntVector, PlainBits, SparseBits};
use crate::error::{out_of_range, Error, Result};
use crate::movetab::{Coords, MoveTable};
use crate::text::{
    AlphabetMap, Convention, OracleKind, PermutationOracle, RunDecomposition, SuffixStructures, Text,
};

/// τ with the F-column symbol blocks it splits into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauPermutation {
    values: IntVector,
    // block_starts[c]..block_starts[c + 1] are the F sub-runs of symbol c.
    block_starts: Vec<usize>,
}

fn bit_width(max: usize) -> u8 {
    (usize::BITS - max.leading_zeros()) as u8
}

impl TauPermutation {
    /// `symbols[i]` is the F-column symbol of sub-run `i`; must be non-decreasing.
    pub fn new(values: &[usize], symbols: &[u8], sigma: usize) -> Result<Self> {
        let r = values.len();
        if symbols.len() != r {
            return Err(Error::InvalidParameter(format!(
                "{} symbols for {r} sub-runs",
                symbols.len()
            )));
        }
        let mut seen = vec![false; r];
        for &v in values {
            if v >= r || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!("tau value {v} repeats or exceeds {r}")));
            }
        }
        if symbols.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("sub-run symbols must be non-decreasing".into()));
        }
        if symbols.iter().any(|&c| c as usize >= sigma) {
            return Err(Error::InvalidParameter(format!("sub-run symbol exceeds sigma {sigma}")));
        }
        let mut block_starts = vec![0; sigma + 1];
        for &c in symbols {
            block_starts[c as usize + 1] += 1;
        }
        for c in 1..=sigma {
            block_starts[c] += block_starts[c - 1];
        }
        let width = bit_width(r.saturating_sub(1));
        let packed: Vec<u64> = values.iter().map(|&v| v as u64).collect();
        Ok(TauPermutation {
            values: IntVector::from_slice(width, &packed),
            block_starts,
        })
    }

    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.values.get(i) as usize
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn sigma(&self) -> usize {
        self.block_starts.len() - 1
    }

    /// F sub-runs carrying symbol `c`.
    pub fn block(&self, c: usize) -> Range<usize> {
        self.block_starts[c]..self.block_starts[c + 1]
    }

    pub fn symbol_of(&self, i: usize) -> u8 {
        (self.block_starts.partition_point(|&s| s <= i) - 1) as u8
    }

    pub fn symbols(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.symbol_of(i)).collect()
    }

    /// Whether τ increases inside every symbol block.
    pub fn increasing_in_blocks(&self) -> bool {
        (0..self.sigma()).all(|c| {
            let b = self.block(c);
            (b.start + 1..b.end).all(|i| self.get(i - 1) < self.get(i))
        })
    }

    /// Symbol of each BWT sub-run: `τ⁻¹` applied to the F symbols.
    pub fn bwt_symbols(&self) -> Vec<u8> {
        let mut out = vec![0; self.len()];
        for i in 0..self.len() {
            out[self.get(i)] = self.symbol_of(i);
        }
        out
    }

    pub fn packed_bits(&self) -> usize {
        self.values.bits()
    }

    pub fn width(&self) -> u8 {
        self.values.width()
    }
}

/// Result of one ψ step, with the scan diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PsiStep {
    pub coords: Coords,
    pub position: usize,
    /// `ℓ`: the F sub-run the scan starts from.
    pub lower_bound: usize,
    pub probes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiIndex {
    n: usize,
    d: usize,
    convention: Convention,
    alphabet: AlphabetMap,
    tau: TauPermutation,
    bl: SparseBits,
    bf: SparseBits,
    bfl: PlainBits,
}

/// Interleaves F heads (0) and BWT heads (1); on a shared position the 0 comes first.
pub fn interleave(bf: &[usize], bl: &[usize]) -> Vec<bool> {
    let mut out = Vec::with_capacity(bf.len() + bl.len());
    let (mut a, mut b) = (0, 0);
    while a < bf.len() || b < bl.len() {
        if b == bl.len() || (a < bf.len() && bf[a] <= bl[b]) {
            out.push(false);
            a += 1;
        } else {
            out.push(true);
            b += 1;
        }
    }
    out
}

impl PsiIndex {
    pub fn build(text: &Text, d: usize) -> Result<Self> {
        let structures = SuffixStructures::build(text);
        Self::build_with(text, &structures, d)
    }

    pub fn build_with(text: &Text, structures: &SuffixStructures, d: usize) -> Result<Self> {
        let psi = structures.oracle(OracleKind::Psi);
        let runs = structures.natural_runs(&psi);
        let balanced = balance_runs(&runs, &psi, d)?;
        Self::from_balanced(text, structures, &balanced)
    }

    pub fn from_balanced(text: &Text, structures: &SuffixStructures, b: &BalancedRuns) -> Result<Self> {
        let n = text.len();
        let q_sorted = b.q_sorted();
        let tau: Vec<usize> = b
            .images()
            .iter()
            .map(|q| q_sorted.binary_search(q).expect("image is in Q'"))
            .collect();
        let symbols: Vec<u8> = b.p_heads().iter().map(|&h| structures.f_symbol(h)).collect();
        Self::from_parts(
            n,
            b.d(),
            text.convention(),
            text.alphabet().clone(),
            TauPermutation::new(&tau, &symbols, text.sigma())?,
            SparseBits::new(&q_sorted, n)?,
            SparseBits::new(b.p_heads(), n)?,
            PlainBits::from_bools(interleave(b.p_heads(), &q_sorted)),
        )
    }

    /// Assembles an index from its components, checking the structural invariants
    /// that do not need the text.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        n: usize,
        d: usize,
        convention: Convention,
        alphabet: AlphabetMap,
        tau: TauPermutation,
        bl: SparseBits,
        bf: SparseBits,
        bfl: PlainBits,
    ) -> Result<Self> {
        let r = tau.len();
        if d < 2 {
            return Err(Error::InvalidParameter(format!("d must be at least 2, got {d}")));
        }
        if n == 0 || r == 0 {
            return Err(Error::InvalidParameter("index over an empty text".into()));
        }
        if tau.sigma() != alphabet.sigma() {
            return Err(Error::InvalidParameter("tau blocks disagree with the alphabet".into()));
        }
        if bl.universe() != n || bf.universe() != n || bl.count() != r || bf.count() != r {
            return Err(Error::InvalidParameter(format!(
                "boundary vectors must hold {r} positions in universe {n}"
            )));
        }
        if bf.select_unchecked(1) != 0 || bl.select_unchecked(1) != 0 {
            return Err(Error::InvalidParameter("first sub-run must start at 0".into()));
        }
        let f: Vec<usize> = bf.iter().collect();
        let l: Vec<usize> = bl.iter().collect();
        if bfl.len() != 2 * r || !bfl.iter().eq(interleave(&f, &l)) {
            return Err(Error::InvalidParameter("interleave vector disagrees with boundaries".into()));
        }
        let idx = PsiIndex {
            n,
            d,
            convention,
            alphabet,
            tau,
            bl,
            bf,
            bfl,
        };
        for i in 0..r {
            if idx.f_len(i) != idx.l_len(idx.tau.get(i)) {
                return Err(Error::InvalidParameter(format!(
                    "F sub-run {i} and its BWT sub-run differ in length"
                )));
            }
        }
        Ok(idx)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.sigma()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of sub-runs `r'`.
    pub fn r_prime(&self) -> usize {
        self.tau.len()
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn alphabet(&self) -> &AlphabetMap {
        &self.alphabet
    }

    pub fn tau(&self) -> &TauPermutation {
        &self.tau
    }

    pub fn bl(&self) -> &SparseBits {
        &self.bl
    }

    pub fn bf(&self) -> &SparseBits {
        &self.bf
    }

    pub fn bfl(&self) -> &PlainBits {
        &self.bfl
    }

    pub fn tau_eval(&self, i: usize) -> Result<usize> {
        if i >= self.r_prime() {
            return Err(out_of_range("sub-run", i, self.r_prime()));
        }
        Ok(self.tau.get(i))
    }

    fn f_len(&self, i: usize) -> usize {
        let end = if i + 1 < self.r_prime() {
            self.bf.select_unchecked(i + 2)
        } else {
            self.n
        };
        end - self.bf.select_unchecked(i + 1)
    }

    fn l_len(&self, k: usize) -> usize {
        let end = if k + 1 < self.r_prime() {
            self.bl.select_unchecked(k + 2)
        } else {
            self.n
        };
        end - self.bl.select_unchecked(k + 1)
    }

    fn check(&self, c: Coords) -> Result<()> {
        if c.run >= self.r_prime() {
            return Err(out_of_range("sub-run", c.run, self.r_prime()));
        }
        let len = self.f_len(c.run);
        if c.offset >= len {
            return Err(out_of_range("offset", c.offset, len));
        }
        Ok(())
    }

    pub fn psi_step(&self, c: Coords) -> Result<PsiStep> {
        self.check(c)?;
        Ok(self.psi_step_unchecked(c))
    }

    /// ψ step on coordinates already known to be valid.
    #[inline]
    pub fn psi_step_unchecked(&self, c: Coords) -> PsiStep {
        let x = self.tau.get(c.run) + 1;
        let position = self.bl.select_unchecked(x) + c.offset;
        let lower_bound = self.bfl.select_unchecked(true, x) - x;

        let r = self.r_prime();
        let mut run = lower_bound;
        let mut head = self.bf.select_unchecked(run + 1);
        let mut probes = 0;
        while run + 1 < r {
            probes += 1;
            let next = self.bf.select_unchecked(run + 2);
            if next > position {
                break;
            }
            run += 1;
            head = next;
        }
        PsiStep {
            coords: Coords::new(run, position - head),
            position,
            lower_bound,
            probes,
        }
    }

    /// `ℓ` computed literally as `rank0(select1(τ(i) + 1)) − 1`.
    pub fn lower_bound(&self, run: usize) -> Result<usize> {
        let x = self.tau_eval(run)? + 1;
        Ok(self.bfl.rank0(self.bfl.select1(x)?)? - 1)
    }

    /// ψ step through a sparse rank on `bf`; O(log r'), for cross-checking only.
    pub fn psi_step_by_rank(&self, c: Coords) -> Result<(Coords, usize)> {
        self.check(c)?;
        let position = self.bl.select_unchecked(self.tau.get(c.run) + 1) + c.offset;
        let run = self.bf.rank1(position) - 1;
        let head = self.bf.select_unchecked(run + 1);
        Ok((Coords::new(run, position - head), position))
    }

    pub fn coords_of_position(&self, j: usize) -> Result<Coords> {
        if j >= self.n {
            return Err(out_of_range("position", j, self.n));
        }
        let (ord, head) = self.bf.pred(j)?;
        Ok(Coords::new(ord - 1, j - head))
    }

    pub fn position_of_coords(&self, c: Coords) -> Result<usize> {
        self.check(c)?;
        Ok(self.bf.select_unchecked(c.run + 1) + c.offset)
    }

    /// ψ for every position, decoded sub-run by sub-run.
    pub fn expand_psi(&self) -> PermutationOracle {
        let mut values = vec![0; self.n];
        for i in 0..self.r_prime() {
            let head = self.bf.select_unchecked(i + 1);
            let image = self.bl.select_unchecked(self.tau.get(i) + 1);
            for g in 0..self.f_len(i) {
                values[head + g] = image + g;
            }
        }
        PermutationOracle::from_values(OracleKind::Psi, values).expect("sub-runs tile 0..n")
    }

    /// LF move table recovered from the index alone: ψ is expanded and
    /// inverted, then cut at the BWT run heads.
    pub fn lf_table(&self) -> Result<MoveTable> {
        let lf = PermutationOracle::from_values(OracleKind::Lf, self.expand_psi().inverse_values())?;
        let bwt = self.bwt();
        let heads: Vec<usize> = (0..self.n)
            .filter(|&i| i == 0 || bwt[i] != bwt[i - 1])
            .collect();
        let runs = RunDecomposition::with_breaks(&lf, &heads);
        Ok(MoveTable::build(&balance_runs(&runs, &lf, self.d)?))
    }

    /// BWT symbol of every row.
    pub fn bwt(&self) -> Vec<u8> {
        let symbols = self.tau.bwt_symbols();
        let mut out = Vec::with_capacity(self.n);
        for (k, &c) in symbols.iter().enumerate() {
            out.extend(std::iter::repeat_n(c, self.l_len(k)));
        }
        out
    }

    /// Runs in the BWT; each BWT sub-run holds a single symbol.
    pub fn bwt_runs(&self) -> usize {
        let s = self.tau.bwt_symbols();
        1 + s.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn space_report(&self) -> SpaceReport {
        let r = self.r_prime() as f64;
        let n = self.n as f64;
        let log2 = |x: f64| if x > 1.0 { x.log2() } else { 0.0 };
        let metadata_bits = 4 * 64 + 8 + 256 * 8;
        let tau_blocks_bits = self.tau.block_starts.len() * 64;
        let mut report = SpaceReport {
            n: self.n,
            sigma: self.sigma(),
            d: self.d,
            r_prime: self.r_prime(),
            tau_bits: self.tau.packed_bits(),
            tau_blocks_bits,
            bl_bits: self.bl.payload_bits(),
            bl_aux_bits: self.bl.aux_bits(),
            bf_bits: self.bf.payload_bits(),
            bf_aux_bits: self.bf.aux_bits(),
            bfl_bits: self.bfl.payload_bits(),
            bfl_aux_bits: self.bfl.aux_bits(),
            metadata_bits,
            total_bits: 0,
            ref_sparse: r * log2(n / r),
            ref_sigma: r * log2(self.sigma() as f64),
            ref_tau: r * log2(r),
        };
        report.total_bits = report.tau_bits
            + report.tau_blocks_bits
            + report.bl_bits
            + report.bl_aux_bits
            + report.bf_bits
            + report.bf_aux_bits
            + report.bfl_bits
            + report.bfl_aux_bits
            + report.metadata_bits;
        report
    }
}

/// Bits per component, next to the reference terms `r'·log(n/r')`,
/// `r'·log σ` and `r'·log r'`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceReport {
    pub n: usize,
    pub sigma: usize,
    pub d: usize,
    pub r_prime: usize,
    pub tau_bits: usize,
    pub tau_blocks_bits: usize,
    pub bl_bits: usize,
    pub bl_aux_bits: usize,
    pub bf_bits: usize,
    pub bf_aux_bits: usize,
    pub bfl_bits: usize,
    pub bfl_aux_bits: usize,
    pub metadata_bits: usize,
    pub total_bits: usize,
    pub ref_sparse: f64,
    pub ref_sigma: f64,
    pub ref_tau: f64,
}

/// Outcome of an exhaustive check of an index against the ψ oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub positions: usize,
    pub mismatches: usize,
    /// `(j, index answer, oracle answer)` of the first mismatch.
    pub first_mismatch: Option<(usize, usize, usize)>,
    pub max_probes: usize,
    pub probe_bound_ok: bool,
    pub lower_bound_ok: bool,
    pub coords_consistent: bool,
    pub rank_path_ok: bool,
    pub head_alignment_ok: bool,
    pub interleave_ok: bool,
    pub cycle_ok: bool,
    /// τ increases inside symbol blocks. Holds whenever LF preserves order
    /// within a symbol, e.g. rotation order of a primitive text or a text
    /// ending in a unique minimum; not part of `pass`.
    pub tau_blocks_increasing: bool,
    pub pass: bool,
}

pub fn verify_index(idx: &PsiIndex, oracle: &PermutationOracle) -> IndexReport {
    let n = idx.n();
    let d = idx.d();
    let mut report = IndexReport {
        positions: n,
        mismatches: 0,
        first_mismatch: None,
        max_probes: 0,
        probe_bound_ok: true,
        lower_bound_ok: true,
        coords_consistent: true,
        rank_path_ok: true,
        head_alignment_ok: true,
        interleave_ok: true,
        cycle_ok: false,
        tau_blocks_increasing: idx.tau().increasing_in_blocks(),
        pass: false,
    };
    if oracle.len() != n || oracle.kind() != OracleKind::Psi {
        report.mismatches = n.max(oracle.len());
        return report;
    }

    for i in 0..idx.r_prime() {
        let head = idx.bf.select_unchecked(i + 1);
        if idx.bl.select_unchecked(idx.tau.get(i) + 1) != oracle.get(head) {
            report.head_alignment_ok = false;
        }
    }
    let f: Vec<usize> = idx.bf.iter().collect();
    let l: Vec<usize> = idx.bl.iter().collect();
    report.interleave_ok = idx.bfl.iter().eq(interleave(&f, &l));

    for j in 0..n {
        let c = match idx.coords_of_position(j) {
            Ok(c) => c,
            Err(_) => {
                report.coords_consistent = false;
                continue;
            }
        };
        let step = idx.psi_step_unchecked(c);
        if step.position != oracle.get(j) {
            report.mismatches += 1;
            report.first_mismatch.get_or_insert((j, step.position, oracle.get(j)));
        }
        report.max_probes = report.max_probes.max(step.probes);
        if step.lower_bound > step.coords.run || step.coords.run - step.lower_bound >= 2 * d {
            report.lower_bound_ok = false;
        }
        if idx.lower_bound(c.run).ok() != Some(step.lower_bound) {
            report.lower_bound_ok = false;
        }
        if idx.position_of_coords(step.coords).ok() != Some(step.position) {
            report.coords_consistent = false;
        }
        if idx.psi_step_by_rank(c).ok() != Some((step.coords, step.position)) {
            report.rank_path_ok = false;
        }
    }
    report.probe_bound_ok = report.max_probes <= 2 * d;
    report.cycle_ok = cycle_ok(idx, 0);
    report.pass = report.mismatches == 0
        && report.probe_bound_ok
        && report.lower_bound_ok
        && report.coords_consistent
        && report.rank_path_ok
        && report.head_alignment_ok
        && report.interleave_ok
        && report.cycle_ok;
    report
}

/// Iterates ψ `n` times from `start`; true if every position is visited once
/// and the walk ends where it began.
pub fn cycle_ok(idx: &PsiIndex, start: usize) -> bool {
    let Ok(mut c) = idx.coords_of_position(start) else {
        return false;
    };
    let mut seen = vec![false; idx.n()];
    let mut position = start;
    for _ in 0..idx.n() {
        if std::mem::replace(&mut seen[position], true) {
            return false;
        }
        let step = idx.psi_step_unchecked(c);
        c = step.coords;
        position = step.position;
    }
    position == start
}
