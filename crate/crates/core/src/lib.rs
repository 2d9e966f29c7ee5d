//! Run-length compressed index answering ψ in constant time.
//!
//! ψ maps the suffix-array row of text position `p` to the row of `p + 1`.
//! The index stores the sub-run boundaries of ψ in the F column and in the
//! BWT as two Elias-Fano vectors, an interleave bitvector over both, and a
//! small permutation `τ` between the two orders of sub-runs. A ψ step costs a
//! few selects and at most `2d` probes, whatever `n` is.
//!
//! Modules:
//!
//! - [`text`]: ingestion, suffix array, BWT, and explicit LF/φ/φ⁻¹/ψ oracles
//! - [`bits`]: plain rank/select bitvector and Elias-Fano positions
//! - [`balance`]: run splitting that bounds every scan
//! - [`movetab`]: move tables for LF, φ, φ⁻¹ (and ψ as a baseline)
//! - [`psi`]: the compressed ψ index
//! - [`file`]: the binary index format
//! - [`bench`], [`cli`]: timing and the command-line front end
//!
//! ```
//! use rlpsi::{Convention, PsiIndex, Text};
//!
//! let text = Text::with_sentinel(b"mississippi", Convention::SuffixOrder).unwrap();
//! let idx = PsiIndex::build(&text, 4).unwrap();
//! let mut c = idx.coords_of_position(0).unwrap();
//! for _ in 0..idx.n() {
//!     c = idx.psi_step(c).unwrap().coords;
//! }
//! assert_eq!(idx.position_of_coords(c).unwrap(), 0);
//! ```

pub mod balance;
pub mod bench;
pub mod bits;
pub mod cli;
pub mod error;
pub mod file;
pub mod movetab;
pub mod psi;
pub mod text;

pub use balance::{balance_runs, verify_balanced, BalanceReport, BalancedRuns};
pub use bits::{PlainBits, SparseBits};
pub use error::{Error, Result};
pub use movetab::{Coords, MoveTable, Step};
pub use psi::{verify_index, IndexReport, PsiIndex, PsiStep, SpaceReport, TauPermutation};
pub use text::{
    AlphabetMap, Convention, OracleKind, PermutationOracle, RunDecomposition, SuffixStructures,
    Text,
};

#[cfg(test)]
pub(crate) const EXAMPLE_TEXT: &[u8] = b"GATTACAT$AGATACAT$GATACAT$GATTAGAT$GATTAGATA$";
