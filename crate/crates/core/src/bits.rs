//! Rank/select bit structures.
//!
//! Convention used throughout the crate: `rank_b(p)` counts `b`-bits at
//! positions `0..=p` (inclusive) and `select_b(x)` returns the position of the
//! `x`-th `b`-bit, with `x` counted from 1.

use crate::error::{out_of_range, Error, Result};

const WORD: usize = 64;
const WORDS_PER_SUPER: usize = 8;
const SUPER: usize = WORD * WORDS_PER_SUPER;
const SELECT_SAMPLE: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Position of the `k`-th (0-based) set bit of `word`.
#[inline]
fn select_in_word(mut word: u64, k: u32) -> u32 {
    for _ in 0..k {
        word &= word - 1;
    }
    word.trailing_zeros()
}

/// Fixed-width packed integers; element `i` occupies bits `[i·w, (i+1)·w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntVector {
    width: u8,
    len: usize,
    words: Vec<u64>,
}

impl IntVector {
    pub fn with_width(width: u8, len: usize) -> Self {
        assert!(width <= 64, "width {width} exceeds 64");
        IntVector {
            width,
            len,
            words: vec![0; words_for(len * width as usize)],
        }
    }

    pub fn from_slice(width: u8, values: &[u64]) -> Self {
        let mut v = Self::with_width(width, values.len());
        for (i, &x) in values.iter().enumerate() {
            v.set(i, x);
        }
        v
    }

    pub(crate) fn from_words(width: u8, len: usize, words: Vec<u64>) -> Result<Self> {
        if width > 64 || words.len() != words_for(len * width as usize) {
            return Err(Error::Format(format!(
                "packed array of {len} x {width} bits needs {} words, found {}",
                words_for(len * width as usize),
                words.len()
            )));
        }
        Ok(IntVector { width, len, words })
    }

    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    pub fn set(&mut self, i: usize, value: u64) {
        assert!(i < self.len);
        if self.width == 0 {
            return;
        }
        let value = value & self.mask();
        let bit = i * self.width as usize;
        let (w, off) = (bit / WORD, bit % WORD);
        self.words[w] &= !(self.mask() << off);
        self.words[w] |= value << off;
        if off + self.width as usize > WORD {
            let spill = WORD - off;
            self.words[w + 1] &= !(self.mask() >> spill);
            self.words[w + 1] |= value >> spill;
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        if self.width == 0 {
            return 0;
        }
        let bit = i * self.width as usize;
        let (w, off) = (bit / WORD, bit % WORD);
        let mut v = self.words[w] >> off;
        if off + self.width as usize > WORD {
            v |= self.words[w + 1] << (WORD - off);
        }
        v & self.mask()
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn bits(&self) -> usize {
        self.len * self.width as usize
    }
}

/// Uncompressed bitvector with a two-level rank directory and sampled select.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainBits {
    words: Vec<u64>,
    len: usize,
    ones: usize,
    // Ones before each superblock; one extra entry holding the total.
    supers: Vec<u64>,
    // Ones before each word, relative to its superblock.
    blocks: Vec<u16>,
    // Superblock holding the (k·64 + 1)-th one / zero.
    select1_samples: Vec<u32>,
    select0_samples: Vec<u32>,
}

impl PlainBits {
    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % WORD);
            }
            len += 1;
        }
        Self::from_words(words, len).expect("word count matches length")
    }

    /// Parses a string of `'0'`/`'1'` characters.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let bits: Result<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!("bit character {other:?}"))),
            })
            .collect();
        Ok(Self::from_bools(bits?))
    }

    pub fn from_words(mut words: Vec<u64>, len: usize) -> Result<Self> {
        if words.len() != words_for(len) {
            return Err(Error::Format(format!(
                "{len} bits need {} words, found {}",
                words_for(len),
                words.len()
            )));
        }
        if !len.is_multiple_of(WORD) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % WORD)) - 1;
            }
        }

        let n_supers = words.len().div_ceil(WORDS_PER_SUPER);
        let mut supers = Vec::with_capacity(n_supers + 1);
        let mut blocks = Vec::with_capacity(words.len());
        let mut total = 0u64;
        for chunk in words.chunks(WORDS_PER_SUPER) {
            supers.push(total);
            let mut local = 0u16;
            for w in chunk {
                blocks.push(local);
                local += w.count_ones() as u16;
            }
            total += u64::from(local);
        }
        supers.push(total);
        let ones = total as usize;

        let mut v = PlainBits {
            words,
            len,
            ones,
            supers,
            blocks,
            select1_samples: Vec::new(),
            select0_samples: Vec::new(),
        };
        v.select1_samples = v.sample(true);
        v.select0_samples = v.sample(false);
        Ok(v)
    }

    fn sample(&self, bit: bool) -> Vec<u32> {
        let count = self.count(bit);
        let mut out = Vec::with_capacity(count.div_ceil(SELECT_SAMPLE));
        let mut s = 0;
        let mut x = 1;
        while x <= count {
            while s + 1 < self.n_supers() && self.before_super(bit, s + 1) < x {
                s += 1;
            }
            out.push(s as u32);
            x += SELECT_SAMPLE;
        }
        out
    }

    fn n_supers(&self) -> usize {
        self.supers.len() - 1
    }

    #[inline]
    fn before_super(&self, bit: bool, s: usize) -> usize {
        let ones = self.supers[s] as usize;
        if bit {
            ones
        } else {
            s * SUPER - ones
        }
    }

    #[inline]
    fn before_word(&self, bit: bool, w: usize) -> usize {
        let s = w / WORDS_PER_SUPER;
        let ones = self.supers[s] as usize + self.blocks[w] as usize;
        if bit {
            ones
        } else {
            w * WORD - ones
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    pub fn count(&self, bit: bool) -> usize {
        if bit {
            self.count_ones()
        } else {
            self.count_zeros()
        }
    }

    pub fn get(&self, p: usize) -> bool {
        assert!(p < self.len, "bit {p} out of range");
        (self.words[p / WORD] >> (p % WORD)) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |p| self.get(p))
    }

    /// Number of `bit`s in positions `0..=p`.
    pub fn rank(&self, bit: bool, p: usize) -> Result<usize> {
        if p >= self.len {
            return Err(out_of_range("rank position", p, self.len));
        }
        Ok(self.rank_unchecked(bit, p))
    }

    #[inline]
    pub(crate) fn rank_unchecked(&self, bit: bool, p: usize) -> usize {
        let w = p / WORD;
        let off = p % WORD;
        let mask = if off == WORD - 1 {
            u64::MAX
        } else {
            (1u64 << (off + 1)) - 1
        };
        let ones = self.supers[w / WORDS_PER_SUPER] as usize
            + self.blocks[w] as usize
            + (self.words[w] & mask).count_ones() as usize;
        if bit {
            ones
        } else {
            p + 1 - ones
        }
    }

    pub fn rank1(&self, p: usize) -> Result<usize> {
        self.rank(true, p)
    }

    pub fn rank0(&self, p: usize) -> Result<usize> {
        self.rank(false, p)
    }

    /// Position of the `x`-th `bit`, `x` counted from 1.
    pub fn select(&self, bit: bool, x: usize) -> Result<usize> {
        if x == 0 || x > self.count(bit) {
            return Err(out_of_range("select ordinal", x, self.count(bit)));
        }
        Ok(self.select_unchecked(bit, x))
    }

    #[inline]
    pub(crate) fn select_unchecked(&self, bit: bool, x: usize) -> usize {
        let samples = if bit {
            &self.select1_samples
        } else {
            &self.select0_samples
        };
        let k = (x - 1) / SELECT_SAMPLE;
        let mut lo = samples[k] as usize;
        let mut hi = samples
            .get(k + 1)
            .map_or(self.n_supers() - 1, |&s| s as usize);
        // Last superblock with fewer than x occurrences before it.
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.before_super(bit, mid) < x {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let first = lo * WORDS_PER_SUPER;
        let last = (first + WORDS_PER_SUPER).min(self.words.len());
        let mut w = first;
        while w + 1 < last && self.before_word(bit, w + 1) < x {
            w += 1;
        }
        let word = if bit { self.words[w] } else { !self.words[w] };
        let k = (x - self.before_word(bit, w) - 1) as u32;
        w * WORD + select_in_word(word, k) as usize
    }

    pub fn select1(&self, x: usize) -> Result<usize> {
        self.select(true, x)
    }

    pub fn select0(&self, x: usize) -> Result<usize> {
        self.select(false, x)
    }

    /// Bits of the raw sequence.
    pub fn payload_bits(&self) -> usize {
        self.len
    }

    /// Bits of the rank and select directories.
    pub fn aux_bits(&self) -> usize {
        self.supers.len() * 64
            + self.blocks.len() * 16
            + (self.select1_samples.len() + self.select0_samples.len()) * 32
    }
}

/// Elias-Fano encoded strictly increasing positions with constant-work select.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBits {
    universe: usize,
    low: IntVector,
    high: PlainBits,
}

/// Low-part width `⌊log₂(universe / count)⌋`, 0 when the ratio is below 2.
pub fn low_width(universe: usize, count: usize) -> u8 {
    if count == 0 || universe <= count {
        return 0;
    }
    (universe / count).ilog2() as u8
}

impl SparseBits {
    pub fn new(positions: &[usize], universe: usize) -> Result<Self> {
        for (i, &p) in positions.iter().enumerate() {
            if p >= universe || (i > 0 && p <= positions[i - 1]) {
                return Err(Error::NotIncreasing(format!(
                    "entry {i} = {p}, universe {universe}"
                )));
            }
        }
        let count = positions.len();
        let w = low_width(universe, count);
        let mut low = IntVector::with_width(w, count);
        let high_len = count + (universe >> w) + 1;
        let mut high = vec![false; high_len];
        for (i, &p) in positions.iter().enumerate() {
            low.set(i, p as u64);
            high[(p >> w) + i] = true;
        }
        Ok(SparseBits {
            universe,
            low,
            high: PlainBits::from_bools(high),
        })
    }

    pub(crate) fn from_parts(universe: usize, low: IntVector, high: PlainBits) -> Result<Self> {
        let count = low.len();
        let w = low_width(universe, count);
        if low.width() != w {
            return Err(Error::Format(format!(
                "low width {} does not match {w} for {count} entries in universe {universe}",
                low.width()
            )));
        }
        if high.len() != count + (universe >> w) + 1 || high.count_ones() != count {
            return Err(Error::Format("high bits inconsistent with count".into()));
        }
        let v = SparseBits {
            universe,
            low,
            high,
        };
        let mut prev = None;
        for x in 1..=count {
            let p = v.select_unchecked(x);
            if p >= universe || prev.is_some_and(|q| p <= q) {
                return Err(Error::Format("decoded positions not strictly increasing".into()));
            }
            prev = Some(p);
        }
        Ok(v)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn count(&self) -> usize {
        self.low.len()
    }

    pub fn low(&self) -> &IntVector {
        &self.low
    }

    pub fn high(&self) -> &PlainBits {
        &self.high
    }

    /// The `x`-th stored position, `x` counted from 1.
    pub fn select1(&self, x: usize) -> Result<usize> {
        if x == 0 || x > self.count() {
            return Err(out_of_range("select ordinal", x, self.count()));
        }
        Ok(self.select_unchecked(x))
    }

    #[inline]
    pub(crate) fn select_unchecked(&self, x: usize) -> usize {
        let high = self.high.select_unchecked(true, x) - (x - 1);
        (high << self.low.width()) | self.low.get(x - 1) as usize
    }

    /// Largest stored position `≤ p` with its 1-based ordinal. O(log count).
    pub fn pred(&self, p: usize) -> Result<(usize, usize)> {
        let count = self.count();
        if count == 0 || self.select_unchecked(1) > p {
            return Err(Error::OutOfRange {
                what: "predecessor query",
                value: p,
                bound: if count == 0 { 0 } else { self.select_unchecked(1) },
            });
        }
        // Ordinals 1..=ord have positions <= p.
        let (mut lo, mut hi) = (1, count);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.select_unchecked(mid) <= p {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Ok((lo, self.select_unchecked(lo)))
    }

    /// Number of stored positions `≤ p`; the ω(1) sparse rank.
    pub fn rank1(&self, p: usize) -> usize {
        self.pred(p).map_or(0, |(ord, _)| ord)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.count()).map(move |x| self.select_unchecked(x))
    }

    /// Length-`universe` 0/1 rendering.
    pub fn to_bit_string(&self) -> String {
        let mut s = vec![b'0'; self.universe];
        for p in self.iter() {
            s[p] = b'1';
        }
        String::from_utf8(s).unwrap()
    }

    /// Elias-Fano payload: packed low parts plus the unary high-part vector.
    pub fn payload_bits(&self) -> usize {
        self.low.bits() + self.high.payload_bits()
    }

    pub fn aux_bits(&self) -> usize {
        self.high.aux_bits()
    }
}
