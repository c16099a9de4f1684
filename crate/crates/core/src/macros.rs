//! Compound moves built from the translation and the flip.
//!
//! Each constructor returns a [`MoveWord`] that can be executed on a real
//! puzzle; [`eval_word`](crate::moves::eval_word) gives the permutation it
//! performs. Preconditions are checked up front and violations are reported
//! as [`MacroError`] rather than producing a word with a different effect.
//!
//! | macro | requires | effect |
//! |---|---|---|
//! | [`rho`] | always | `phi * tau` |
//! | [`pi_shuffle`] | `n >= k + 2` | `tau * phi * tau^-1 * phi` |
//! | [`macro_k_cycle`] | `n - k` even | `(1 2 ... k)` |
//! | [`macro_k1_cycle`] | `k` even, `n >= k + 2` | `(k+1 k ... 1)` |
//! | [`macro_3cycle_a`] | `n - k` even, `k >= 2`, `n >= k + 2` | `(k-1 k k+1)` |
//! | [`macro_3cycle_b`] | `k` even, `n >= k + 2` | `(k k+1 k+2)` |
//! | [`macro_3cycle_kodd`] | `k` odd, `k >= 3`, `n >= k + 2` | `(1 3 k+2)` |
//! | [`macro_odd_3cycle`] | `n` even, `k` odd, `1 < k < n - 1` | `(1 3 5)` |

use thiserror::Error;

use crate::moves::{conjugate_word, Move, MoveWord, PuzzleSpec};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{name} needs {requirement}, got {spec}")]
pub struct MacroError {
    pub name: &'static str,
    pub requirement: &'static str,
    pub spec: PuzzleSpec,
}

fn require(ok: bool, name: &'static str, requirement: &'static str, spec: PuzzleSpec) -> Result<(), MacroError> {
    if ok {
        Ok(())
    } else {
        Err(MacroError {
            name,
            requirement,
            spec,
        })
    }
}

fn t() -> MoveWord {
    MoveWord::single(Move::T)
}

fn t_inv() -> MoveWord {
    MoveWord::single(Move::TInv)
}

fn f() -> MoveWord {
    MoveWord::single(Move::F)
}

/// Flip-translation: carries the tile just left of the turntable across it.
pub fn rho(_spec: PuzzleSpec) -> MoveWord {
    MoveWord::product(&[f(), t()])
}

/// The shuffle. For even `k` it is the `(k+1)`-cycle `(1 3 5 ... k+1 2 4 ... k)`;
/// for odd `k` the pair `(1 3 ... k)(2 4 ... k+1)`.
pub fn pi_shuffle(spec: PuzzleSpec) -> Result<MoveWord, MacroError> {
    require(spec.n() >= spec.k() + 2, "the shuffle", "n >= k + 2", spec)?;
    Ok(shuffle())
}

fn shuffle() -> MoveWord {
    MoveWord::product(&[t(), f(), t_inv(), f()])
}

/// The consecutive `k`-cycle `(1 2 ... k)` as `tau * rho^(n-k)`.
pub fn macro_k_cycle(spec: PuzzleSpec) -> Result<MoveWord, MacroError> {
    require((spec.n() - spec.k()) % 2 == 0, "the k-cycle", "n - k even", spec)?;
    Ok(MoveWord::product(&[t(), rho(spec).pow((spec.n() - spec.k()) as i64)]))
}

/// The consecutive `(k+1)`-cycle `(k+1 k ... 1)` as `pi^(k/2)`.
pub fn macro_k1_cycle(spec: PuzzleSpec) -> Result<MoveWord, MacroError> {
    require(
        spec.k() % 2 == 0 && spec.n() >= spec.k() + 2,
        "the (k+1)-cycle",
        "k even and n >= k + 2",
        spec,
    )?;
    Ok(shuffle().pow((spec.k() / 2) as i64))
}

/// The 3-cycle `(k-1 k k+1)` as `pi^-1 * (tau * rho^(n-k))^2`.
pub fn macro_3cycle_a(spec: PuzzleSpec) -> Result<MoveWord, MacroError> {
    require(
        (spec.n() - spec.k()) % 2 == 0 && spec.k() >= 2 && spec.n() >= spec.k() + 2,
        "the 3-cycle (k-1 k k+1)",
        "n - k even, k >= 2 and n >= k + 2",
        spec,
    )?;
    let k_cycle = macro_k_cycle(spec)?;
    Ok(MoveWord::product(&[shuffle().inverse(), k_cycle.pow(2)]))
}

/// The 3-cycle `(k k+1 k+2)` as `pi^(k/2) * tau * pi^(k/2) * phi * rho^-1`.
pub fn macro_3cycle_b(spec: PuzzleSpec) -> Result<MoveWord, MacroError> {
    require(
        spec.k() % 2 == 0 && spec.n() >= spec.k() + 2,
        "the 3-cycle (k k+1 k+2)",
        "k even and n >= k + 2",
        spec,
    )?;
    let half_turn = shuffle().pow((spec.k() / 2) as i64);
    Ok(MoveWord::product(&[half_turn.clone(), t(), half_turn, f(), rho(spec).inverse()]))
}

/// The 3-cycle `(1 3 k+2)` as the commutator `pi * tau * pi^-1 * tau^-1`.
pub fn macro_3cycle_kodd(spec: PuzzleSpec) -> Result<MoveWord, MacroError> {
    require(
        spec.k() % 2 == 1 && spec.k() >= 3 && spec.n() >= spec.k() + 2,
        "the 3-cycle (1 3 k+2)",
        "k odd, k >= 3 and n >= k + 2",
        spec,
    )?;
    Ok(MoveWord::product(&[shuffle(), t(), shuffle().inverse(), t_inv()]))
}

/// The consecutive odd 3-cycle `(1 3 5)` for even `n` and odd `k`.
///
/// When `n >= k + 5` the commutator `(1 3 k+2)` is conjugated by the square
/// of `tau^3 * pi * tau^-3`, which fixes 1 and 3 and sends `k+2` to 5. When
/// `n = k + 3` that conjugator wraps around the track, but then the
/// commutator is `(1 3 n-1)` and conjugating by `tau^2` gives `(3 5 1)`.
pub fn macro_odd_3cycle(spec: PuzzleSpec) -> Result<MoveWord, MacroError> {
    let (n, k) = (spec.n(), spec.k());
    require(
        n % 2 == 0 && k % 2 == 1 && 1 < k && k + 1 < n,
        "the odd 3-cycle (1 3 5)",
        "n even, k odd and 1 < k < n - 1",
        spec,
    )?;
    let commutator = macro_3cycle_kodd(spec)?;
    let by = if n >= k + 5 {
        let gamma = MoveWord::product(&[MoveWord::translation(3), shuffle(), MoveWord::translation(-3)]);
        gamma.pow(2)
    } else {
        MoveWord::translation(2)
    };
    Ok(conjugate_word(&by, &commutator))
}

/// The permutation each macro is meant to perform, for checking.
pub fn expected_cycle(name: MacroKind, spec: PuzzleSpec) -> Permutation {
    let (n, k) = (spec.n(), spec.k());
    let cycle: Vec<usize> = match name {
        MacroKind::KCycle => (1..=k).collect(),
        MacroKind::K1Cycle => (1..=k + 1).rev().collect(),
        MacroKind::ThreeCycleA => vec![k - 1, k, k + 1],
        MacroKind::ThreeCycleB => vec![k, k + 1, k + 2],
        MacroKind::ThreeCycleKOdd => vec![1, 3, k + 2],
        MacroKind::OddThreeCycle => vec![1, 3, 5],
    };
    Permutation::from_cycles(n, &[cycle]).expect("macro cycle fits the track")
}

/// The cycle-producing macros, for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MacroKind {
    KCycle,
    K1Cycle,
    ThreeCycleA,
    ThreeCycleB,
    ThreeCycleKOdd,
    OddThreeCycle,
}

impl MacroKind {
    pub const ALL: [MacroKind; 6] = [
        MacroKind::KCycle,
        MacroKind::K1Cycle,
        MacroKind::ThreeCycleA,
        MacroKind::ThreeCycleB,
        MacroKind::ThreeCycleKOdd,
        MacroKind::OddThreeCycle,
    ];

    pub fn build(self, spec: PuzzleSpec) -> Result<MoveWord, MacroError> {
        match self {
            MacroKind::KCycle => macro_k_cycle(spec),
            MacroKind::K1Cycle => macro_k1_cycle(spec),
            MacroKind::ThreeCycleA => macro_3cycle_a(spec),
            MacroKind::ThreeCycleB => macro_3cycle_b(spec),
            MacroKind::ThreeCycleKOdd => macro_3cycle_kodd(spec),
            MacroKind::OddThreeCycle => macro_odd_3cycle(spec),
        }
    }
}
