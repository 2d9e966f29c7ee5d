//! Binary index file.
//!
//! All integers little-endian:
//!
//! ```text
//! magic          8 bytes  "RPSIIDX1"
//! version        u32      1
//! convention     u8       0 suffix, 1 rotation
//! reserved       3 bytes  zero
//! n, sigma, d, r u64 x 4
//! alphabet_map   256 bytes  dense symbol per byte, 0xFF if absent
//! char_of_subrun r bytes
//! tau            r x u32
//! bf, bl         each: u8 low width w, u64 count, ceil(count*w/64) u64 words,
//!                      u64 high bit length, ceil(len/64) u64 words
//! bfl            u64 bit length (= 2r), ceil(len/64) u64 words
//! checksum       u64  FNV-1a-64 of all preceding bytes
//! ```

use std::io::{Read, Write};

use crate::bits::{IntVector, PlainBits, SparseBits};
use crate::error::{Error, Result};
use crate::psi::{PsiIndex, TauPermutation};
use crate::text::{AlphabetMap, Convention};

pub const MAGIC: &[u8; 8] = b"RPSIIDX1";
pub const VERSION: u32 = 1;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_words(out: &mut Vec<u8>, words: &[u64]) {
    for &w in words {
        put_u64(out, w);
    }
}

fn put_sparse(out: &mut Vec<u8>, v: &SparseBits) {
    out.push(v.low().width());
    put_u64(out, v.count() as u64);
    put_words(out, v.low().words());
    put_u64(out, v.high().len() as u64);
    put_words(out, v.high().words());
}

pub fn to_bytes(idx: &PsiIndex) -> Vec<u8> {
    let r = idx.r_prime();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(idx.convention().code());
    out.extend_from_slice(&[0; 3]);
    for v in [idx.n(), idx.sigma(), idx.d(), r] {
        put_u64(&mut out, v as u64);
    }
    out.extend_from_slice(&idx.alphabet().to_bytes());
    out.extend_from_slice(&idx.tau().symbols());
    for v in idx.tau().values() {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    put_sparse(&mut out, idx.bf());
    put_sparse(&mut out, idx.bl());
    put_u64(&mut out, idx.bfl().len() as u64);
    put_words(&mut out, idx.bfl().words());
    let sum = fnv1a64(&out);
    put_u64(&mut out, sum);
    out
}

pub fn write_index<W: Write>(idx: &PsiIndex, mut w: W) -> Result<()> {
    if idx.r_prime() > u32::MAX as usize {
        return Err(Error::InvalidParameter(format!(
            "{} sub-runs exceed the format's u32 tau entries",
            idx.r_prime()
        )));
    }
    w.write_all(&to_bytes(idx))?;
    w.flush()?;
    Ok(())
}

pub fn read_index<R: Read>(mut r: R) -> Result<PsiIndex> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .at
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format(format!("truncated at byte {}", self.at)))?;
        let s = &self.bytes[self.at..end];
        self.at = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self, what: &str) -> Result<usize> {
        let v = self.u64()?;
        // Every stored count is bounded by the bytes that follow it, give or take 64x for bits.
        if v > (self.bytes.len() as u64).saturating_mul(64) + 64 {
            return Err(Error::Format(format!("{what} = {v} is implausible for this file size")));
        }
        Ok(v as usize)
    }

    fn words(&mut self, count: usize) -> Result<Vec<u64>> {
        let raw = self.take(count.checked_mul(8).ok_or_else(|| Error::Format("word count overflow".into()))?)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    fn plain(&mut self) -> Result<PlainBits> {
        let len = self.usize("bit length")?;
        let words = self.words(len.div_ceil(64))?;
        if len % 64 != 0 && words.last().is_some_and(|&w| w >> (len % 64) != 0) {
            return Err(Error::Format("nonzero padding bits".into()));
        }
        PlainBits::from_words(words, len)
    }

    fn sparse(&mut self, universe: usize) -> Result<SparseBits> {
        let width = self.u8()?;
        let count = self.usize("sparse count")?;
        if width > 64 {
            return Err(Error::Format(format!("low width {width}")));
        }
        let words = self.words((count * width as usize).div_ceil(64))?;
        let low = IntVector::from_words(width, count, words)?;
        let high = self.plain()?;
        SparseBits::from_parts(universe, low, high)
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<PsiIndex> {
    if bytes.len() < MAGIC.len() + 8 {
        return Err(Error::Format("file too short".into()));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    let computed = fnv1a64(body);
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }

    let mut c = Cursor { bytes: body, at: 0 };
    if c.take(8)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let code = c.u8()?;
    let convention =
        Convention::from_code(code).ok_or_else(|| Error::Format(format!("convention code {code}")))?;
    if c.take(3)? != [0, 0, 0] {
        return Err(Error::Format("reserved bytes must be zero".into()));
    }
    let n = c.usize("n")?;
    let sigma = c.usize("sigma")?;
    let d = c.usize("d")?;
    let r = c.usize("r_prime")?;
    let alphabet = AlphabetMap::from_bytes(c.take(256)?.try_into().unwrap(), sigma)?;
    let symbols = c.take(r)?.to_vec();
    let mut tau = Vec::with_capacity(r);
    for _ in 0..r {
        tau.push(c.u32()? as usize);
    }
    let bf = c.sparse(n)?;
    let bl = c.sparse(n)?;
    let bfl = c.plain()?;
    if c.at != body.len() {
        return Err(Error::Format(format!("{} trailing bytes", body.len() - c.at)));
    }
    let tau = TauPermutation::new(&tau, &symbols, sigma).map_err(|e| Error::Format(e.to_string()))?;
    PsiIndex::from_parts(n, d, convention, alphabet, tau, bl, bf, bfl).map_err(|e| match e {
        Error::InvalidParameter(m) => Error::Format(m),
        other => other,
    })
}
