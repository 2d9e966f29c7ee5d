#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const EXAMPLE_TEXT: &[u8] = b"GATTACAT$AGATACAT$GATACAT$GATTAGAT$GATTAGATA$";
pub const EXAMPLE_BL: &str = "101100000001100100000010000010001000011010100";
pub const EXAMPLE_BF: &str = "110001100000100001010010010000001010000000110";
pub const EXAMPLE_BFL: &str = "01011001011000101010111010";
pub const EXAMPLE_TAU: [usize; 13] = [3, 7, 1, 6, 8, 10, 12, 4, 5, 0, 2, 9, 11];

pub const SIGMAS: [usize; 4] = [2, 4, 16, 96];

/// Bytes over the first `sigma` printable characters starting at `!`.
pub fn random_bytes(rng: &mut StdRng, n: usize, sigma: usize) -> Vec<u8> {
    (0..n).map(|_| b'!' + rng.gen_range(0..sigma) as u8).collect()
}

/// Text built by copying earlier pieces with occasional edits, so the BWT has
/// long runs.
pub fn repetitive_bytes(rng: &mut StdRng, n: usize, sigma: usize) -> Vec<u8> {
    let seed_len = rng.gen_range(1..=n.min(64));
    let mut out = random_bytes(rng, seed_len, sigma);
    while out.len() < n {
        let start = rng.gen_range(0..out.len());
        let len = rng.gen_range(1..=(out.len() - start).min(n - out.len()));
        let mut piece = out[start..start + len].to_vec();
        for c in piece.iter_mut() {
            if rng.gen_bool(0.02) {
                *c = b'!' + rng.gen_range(0..sigma) as u8;
            }
        }
        out.extend(piece);
    }
    out
}

/// `count` texts with n ≤ `max_n`, cycling through [`SIGMAS`], alternating
/// uniform and repetitive content.
pub fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<(usize, Vec<u8>)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let sigma = SIGMAS[k % SIGMAS.len()];
            let n = rng.gen_range(1..=max_n);
            let bytes = if k % 2 == 0 {
                random_bytes(&mut rng, n, sigma)
            } else {
                repetitive_bytes(&mut rng, n, sigma)
            };
            (sigma, bytes)
        })
        .collect()
}

/// Permutation made of shuffled blocks; `skew` mixes one long block with
/// many singletons so a single run's image covers many heads.
pub fn adversarial_permutation(rng: &mut StdRng, n: usize) -> Vec<usize> {
    match rng.gen_range(0..3) {
        0 => {
            // One long run onto the top half, singletons reversed below.
            let m = n / 2;
            let mut v: Vec<usize> = (n - m..n).collect();
            v.extend((0..n - m).rev());
            v
        }
        1 => {
            let blocks = rng.gen_range(1..=n.min(400));
            block_shuffle(rng, n, blocks)
        }
        _ => {
            // Few long blocks interleaved with many tiny ones.
            let mut cuts: Vec<usize> = Vec::new();
            let mut at = 0;
            while at < n {
                cuts.push(at);
                at += if rng.gen_bool(0.1) { rng.gen_range(1..=n / 4 + 1) } else { 1 };
            }
            cuts.push(n);
            let mut pieces: Vec<_> = cuts.windows(2).map(|w| w[0]..w[1]).collect();
            pieces.shuffle(rng);
            pieces.into_iter().flatten().collect()
        }
    }
}

pub fn block_shuffle(rng: &mut StdRng, n: usize, blocks: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    cuts.truncate(blocks.saturating_sub(1));
    cuts.extend([0, n]);
    cuts.sort_unstable();
    let mut pieces: Vec<_> = cuts.windows(2).map(|w| w[0]..w[1]).collect();
    pieces.shuffle(rng);
    pieces.into_iter().flatten().collect()
}

/// `a…a$` of total length `n`.
pub fn unary_text(n: usize) -> Vec<u8> {
    let mut v = vec![b'a'; n - 1];
    v.push(b'$');
    v
}

pub fn positions_of_ones(bits: &str) -> Vec<usize> {
    bits.bytes()
        .enumerate()
        .filter(|&(_, b)| b == b'1')
        .map(|(i, _)| i)
        .collect()
}
