//! Oval track puzzles: `n` tiles on a loop, with a turntable that reverses
//! `k` of them.
//!
//! The crate classifies the group generated by the two moves for every
//! `(n, k)`, decides whether an arrangement can be solved, produces explicit
//! solutions, and helps put the tiles of a broken puzzle back so that it stays
//! solvable. An independent brute-force and stabilizer-chain oracle checks the
//! classification.
//!
//! ```
//! use ovaltrack::{classify, is_member, GroupFamily, Permutation, PuzzleSpec};
//!
//! let top_spin = PuzzleSpec::top_spin();
//! assert_eq!(classify(top_spin).family, GroupFamily::Symmetric);
//!
//! let spec = PuzzleSpec::new(7, 4)?;
//! let swap = Permutation::parse_cycles("(1 2)", 7)?;
//! assert!(!is_member(spec, &swap)?.member);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod classify;
pub mod macros;
pub mod moves;
pub mod oracle;
pub mod perm;
pub mod repair;
pub mod solver;

pub use classify::{classify, is_member, order, repair_rule, GroupDescriptor, GroupFamily, Membership};
pub use moves::{apply_word, conjugate_word, eval_word, phi, tau, Move, MoveWord, PuzzleSpec};
pub use oracle::{enumerate_group, group_order_stabchain, verify_spec_range, CensusMode, StabilizerChain};
pub use perm::{CycleDecomposition, Half, ParityType, PermError, Permutation};
pub use repair::{random_solvable, validate, CycleBuilder, Verdict};
pub use solver::{bfs_solve, solve, SolveError, SolveResult, Solver};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/moves.md")]
    mod moves {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/repair.md")]
    mod repair {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
