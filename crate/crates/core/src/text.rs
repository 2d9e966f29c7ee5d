//! Text ingestion, suffix structures, and explicit permutation oracles.
//!
//! Everything here is built the slow, obvious way: explicit arrays of `n`
//! entries. These structures feed index construction and serve as the ground
//! truth the compressed structures are checked against.

use std::fmt;

use crate::error::{Error, Result};

/// Sort order used for the suffix array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Plain lexicographic order of suffixes; a proper prefix sorts first.
    SuffixOrder,
    /// Lexicographic order of cyclic rotations, ties broken by start position.
    RotationOrder,
}

impl Convention {
    pub fn code(self) -> u8 {
        match self {
            Convention::SuffixOrder => 0,
            Convention::RotationOrder => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Convention::SuffixOrder),
            1 => Some(Convention::RotationOrder),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::SuffixOrder => "suffix",
            Convention::RotationOrder => "rotation",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Order-preserving map from input bytes to dense symbols.
///
/// When a sentinel is present it takes symbol 0 and every byte symbol is
/// shifted up by one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetMap {
    symbols: [Option<u8>; 256],
    sigma: usize,
    sentinel: bool,
}

/// Marker for bytes absent from the text in the serialized map.
const ABSENT: u8 = 0xFF;

impl AlphabetMap {
    fn from_present(present: &[bool; 256], sentinel: bool) -> Self {
        let mut symbols = [None; 256];
        let mut next = usize::from(sentinel);
        for (byte, &here) in present.iter().enumerate() {
            if here {
                symbols[byte] = Some(next as u8);
                next += 1;
            }
        }
        AlphabetMap {
            symbols,
            sigma: next,
            sentinel,
        }
    }

    pub fn symbol(&self, byte: u8) -> Option<u8> {
        self.symbols[byte as usize]
    }

    /// Inverse lookup; `None` for the sentinel or an unused symbol.
    pub fn byte(&self, symbol: u8) -> Option<u8> {
        self.symbols
            .iter()
            .position(|&s| s == Some(symbol))
            .map(|b| b as u8)
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn has_sentinel(&self) -> bool {
        self.sentinel
    }

    /// 256-byte table: the dense symbol of each byte, `0xFF` for absent bytes.
    pub fn to_bytes(&self) -> [u8; 256] {
        let mut out = [ABSENT; 256];
        for (o, s) in out.iter_mut().zip(self.symbols.iter()) {
            if let Some(s) = s {
                *o = *s;
            }
        }
        out
    }

    pub fn from_bytes(table: &[u8; 256], sigma: usize) -> Result<Self> {
        if sigma == 0 || sigma > 256 {
            return Err(Error::Format(format!("alphabet size {sigma} out of range")));
        }
        let mut present = [false; 256];
        if sigma == 256 {
            present = [true; 256];
        } else {
            for (p, &v) in present.iter_mut().zip(table.iter()) {
                *p = v != ABSENT;
            }
        }
        let count = present.iter().filter(|&&p| p).count();
        let sentinel = match sigma.checked_sub(count) {
            Some(0) => false,
            Some(1) => true,
            _ => {
                return Err(Error::Format(format!(
                    "alphabet map lists {count} bytes for sigma {sigma}"
                )))
            }
        };
        let map = AlphabetMap::from_present(&present, sentinel);
        if map.to_bytes() != *table {
            return Err(Error::Format("alphabet map is not a dense order-preserving remap".into()));
        }
        Ok(map)
    }
}

/// An ingested text over the dense alphabet `[0, sigma)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Text {
    data: Vec<u8>,
    alphabet: AlphabetMap,
    convention: Convention,
}

impl Text {
    /// Remaps `bytes` onto a dense alphabet, preserving byte order.
    pub fn new(bytes: &[u8], convention: Convention) -> Result<Self> {
        Self::ingest(bytes, convention, false)
    }

    /// Like [`Text::new`] but appends a unique symbol smaller than every byte.
    pub fn with_sentinel(bytes: &[u8], convention: Convention) -> Result<Self> {
        Self::ingest(bytes, convention, true)
    }

    pub fn ingest(bytes: &[u8], convention: Convention, append_sentinel: bool) -> Result<Self> {
        if bytes.is_empty() {
            return Err(Error::EmptyText);
        }
        let mut present = [false; 256];
        for &b in bytes {
            present[b as usize] = true;
        }
        let distinct = present.iter().filter(|&&p| p).count();
        if append_sentinel && distinct > 254 {
            return Err(Error::InvalidParameter(format!(
                "a sentinel needs a free symbol, but the text uses {distinct} distinct bytes (limit 254)"
            )));
        }
        let alphabet = AlphabetMap::from_present(&present, append_sentinel);
        let mut data: Vec<u8> = bytes
            .iter()
            .map(|&b| alphabet.symbol(b).expect("byte was marked present"))
            .collect();
        if append_sentinel {
            data.push(0);
        }
        Ok(Text {
            data,
            alphabet,
            convention,
        })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.sigma()
    }

    pub fn alphabet(&self) -> &AlphabetMap {
        &self.alphabet
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }
}

/// Suffix array, its inverse, the BWT, and the F-column symbol boundaries.
#[derive(Clone, Debug)]
pub struct SuffixStructures {
    sa: Vec<usize>,
    isa: Vec<usize>,
    bwt: Vec<u8>,
    runs: usize,
    // symbol_starts[c] = first F-column row holding symbol c; length sigma + 1.
    symbol_starts: Vec<usize>,
}

impl SuffixStructures {
    pub fn build(text: &Text) -> Self {
        let s = text.symbols();
        let n = s.len();
        let sa = prefix_doubling(s, text.convention() == Convention::RotationOrder);
        let mut isa = vec![0; n];
        for (rank, &pos) in sa.iter().enumerate() {
            isa[pos] = rank;
        }
        let bwt: Vec<u8> = sa.iter().map(|&p| s[(p + n - 1) % n]).collect();
        let runs = 1 + bwt.windows(2).filter(|w| w[0] != w[1]).count();

        let mut symbol_starts = vec![0; text.sigma() + 1];
        for &c in s {
            symbol_starts[c as usize + 1] += 1;
        }
        for c in 1..symbol_starts.len() {
            symbol_starts[c] += symbol_starts[c - 1];
        }

        SuffixStructures {
            sa,
            isa,
            bwt,
            runs,
            symbol_starts,
        }
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    pub fn sa(&self) -> &[usize] {
        &self.sa
    }

    pub fn isa(&self) -> &[usize] {
        &self.isa
    }

    pub fn bwt(&self) -> &[u8] {
        &self.bwt
    }

    /// Number of maximal equal-symbol runs in the BWT.
    pub fn bwt_runs(&self) -> usize {
        self.runs
    }

    /// Row boundaries of each symbol's block in the F column.
    pub fn symbol_starts(&self) -> &[usize] {
        &self.symbol_starts
    }

    /// Symbol in the F column at row `row`.
    pub fn f_symbol(&self, row: usize) -> u8 {
        (self.symbol_starts.partition_point(|&s| s <= row) - 1) as u8
    }

    pub fn oracle(&self, kind: OracleKind) -> PermutationOracle {
        let n = self.len();
        let (sa, isa) = (&self.sa, &self.isa);
        let values: Vec<usize> = match kind {
            OracleKind::Lf => (0..n).map(|i| isa[(sa[i] + n - 1) % n]).collect(),
            OracleKind::Psi => (0..n).map(|i| isa[(sa[i] + 1) % n]).collect(),
            OracleKind::Phi => (0..n).map(|i| sa[(isa[i] + n - 1) % n]).collect(),
            OracleKind::PhiInv => (0..n).map(|i| sa[(isa[i] + 1) % n]).collect(),
        };
        PermutationOracle { kind, values }
    }

    /// Run decomposition aligned with the BWT's run structure.
    ///
    /// For ψ this is the minimal decomposition cut additionally at every
    /// F-column symbol boundary, so each run carries a single symbol; for LF
    /// it is cut at every BWT run head. φ and φ⁻¹ use the minimal one.
    pub fn natural_runs(&self, perm: &PermutationOracle) -> RunDecomposition {
        match perm.kind() {
            OracleKind::Psi => {
                let starts: Vec<usize> = self
                    .symbol_starts
                    .iter()
                    .copied()
                    .filter(|&s| s < self.len())
                    .collect();
                RunDecomposition::with_breaks(perm, &starts)
            }
            OracleKind::Lf => {
                let heads: Vec<usize> = (0..self.len())
                    .filter(|&i| i == 0 || self.bwt[i] != self.bwt[i - 1])
                    .collect();
                RunDecomposition::with_breaks(perm, &heads)
            }
            OracleKind::Phi | OracleKind::PhiInv => RunDecomposition::minimal(perm),
        }
    }
}

/// Prefix-doubling suffix sorting, O(n log² n).
///
/// With `cyclic` set, rotations are compared instead of suffixes and equal
/// rotations are ordered by start position.
fn prefix_doubling(s: &[u8], cyclic: bool) -> Vec<usize> {
    let n = s.len();
    let mut rank: Vec<usize> = s.iter().map(|&c| c as usize).collect();
    let mut sa: Vec<usize> = (0..n).collect();
    if n <= 1 {
        return sa;
    }
    let mut next = vec![0usize; n];
    let mut k = 1;
    loop {
        let key = |i: usize| {
            let second = if cyclic {
                rank[(i + k) % n] + 1
            } else if i + k < n {
                rank[i + k] + 1
            } else {
                0
            };
            (rank[i], second)
        };
        sa.sort_unstable_by_key(|&i| key(i));
        next[sa[0]] = 0;
        for w in 1..n {
            let bump = usize::from(key(sa[w]) != key(sa[w - 1]));
            next[sa[w]] = next[sa[w - 1]] + bump;
        }
        std::mem::swap(&mut rank, &mut next);
        if rank[sa[n - 1]] == n - 1 || 2 * k >= n {
            break;
        }
        k *= 2;
    }
    if cyclic {
        sa.sort_unstable_by_key(|&i| (rank[i], i));
    }
    sa
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleKind {
    Lf,
    Phi,
    PhiInv,
    Psi,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::Lf => "lf",
            OracleKind::Phi => "phi",
            OracleKind::PhiInv => "phi-inv",
            OracleKind::Psi => "psi",
        }
    }
}

/// An explicit permutation of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationOracle {
    kind: OracleKind,
    values: Vec<usize>,
}

impl PermutationOracle {
    pub fn from_values(kind: OracleKind, values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!(
                    "value {v} breaks the permutation of 0..{n}"
                )));
            }
        }
        Ok(PermutationOracle { kind, values })
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn inverse_values(&self) -> Vec<usize> {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v] = i;
        }
        inv
    }
}

/// Run heads `P` of a permutation and their images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunDecomposition {
    p_heads: Vec<usize>,
    q_values: Vec<usize>,
}

impl RunDecomposition {
    /// The minimal decomposition: a head wherever `π(i) ≠ π(i−1) + 1`.
    pub fn minimal(perm: &PermutationOracle) -> Self {
        Self::with_breaks(perm, &[])
    }

    /// The minimal decomposition with extra forced heads.
    pub fn with_breaks(perm: &PermutationOracle, breaks: &[usize]) -> Self {
        let v = perm.values();
        let mut is_head: Vec<bool> = (0..v.len())
            .map(|i| i == 0 || v[i] != v[i - 1] + 1)
            .collect();
        for &b in breaks {
            is_head[b] = true;
        }
        let p_heads: Vec<usize> = (0..v.len()).filter(|&i| is_head[i]).collect();
        let q_values = p_heads.iter().map(|&h| v[h]).collect();
        RunDecomposition { p_heads, q_values }
    }

    pub fn p_heads(&self) -> &[usize] {
        &self.p_heads
    }

    pub fn q_values(&self) -> &[usize] {
        &self.q_values
    }

    pub fn len(&self) -> usize {
        self.p_heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_heads.is_empty()
    }
}
