//! Solver for Exact k-Nim (every move reduces exactly `k` of `n` piles) and
//! Moore's Nim (every move reduces between 1 and `k` piles).
//!
//! * [`tetris`]: the Tetris function, its linear-time evaluation and moves
//!   to a prescribed Tetris value.
//! * [`sg_exact`]: closed-form Sprague-Grundy values for `2k >= n` and moves
//!   to any smaller value.
//! * [`moore`]: Moore's digit function and moves to 0- and 1-positions.
//! * [`oracle`]: brute-force mex tables for small boards.
//! * [`degseq`]: degree sequences of k-uniform multi-hypergraphs.

pub mod degseq;
pub mod error;
pub mod moore;
pub mod oracle;
pub mod position;
pub mod sg_exact;
pub mod tetris;
pub mod util;

pub mod cli;

pub use error::{Error, Result};
pub use position::{
    apply_legal_move, apply_move, is_legal_move, normalize, validate, GameSpec, Move, Pile,
    Position, Ruleset, SortedView,
};
