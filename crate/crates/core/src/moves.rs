//! Puzzle geometry, primitive moves, and move words.
//!
//! A [`MoveWord`] is read left to right: its first move is performed first
//! on the physical puzzle. Moves act on arrangements from the left, so the
//! word `[m1, m2, ..., mr]` evaluates to the product `mr * ... * m2 * m1`.
//! [`MoveWord::product`] builds words from factors written the algebraic
//! way round, which is how the macro moves are usually stated.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("a puzzle needs at least one tile")]
    NoTiles,
    #[error("turntable size {k} must lie in 1..={n}")]
    BadTurntable { n: usize, k: usize },
}

/// Track length `n` and turntable size `k`, with `1 <= k <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct PuzzleSpec {
    n: usize,
    k: usize,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    n: usize,
    k: usize,
}

impl TryFrom<RawSpec> for PuzzleSpec {
    type Error = SpecError;

    fn try_from(raw: RawSpec) -> Result<Self, SpecError> {
        PuzzleSpec::new(raw.n, raw.k)
    }
}

impl From<PuzzleSpec> for RawSpec {
    fn from(spec: PuzzleSpec) -> Self {
        RawSpec { n: spec.n, k: spec.k }
    }
}

impl PuzzleSpec {
    pub fn new(n: usize, k: usize) -> Result<PuzzleSpec, SpecError> {
        if n == 0 {
            return Err(SpecError::NoTiles);
        }
        if k == 0 || k > n {
            return Err(SpecError::BadTurntable { n, k });
        }
        Ok(PuzzleSpec { n, k })
    }

    /// The commercial Top Spin puzzle: twenty tiles, a turntable of four.
    pub fn top_spin() -> PuzzleSpec {
        PuzzleSpec { n: 20, k: 4 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl fmt::Display for PuzzleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, k={})", self.n, self.k)
    }
}

/// The translation `(1 2 ... n)`: every tile moves one position clockwise.
pub fn tau(spec: PuzzleSpec) -> Permutation {
    let images: Vec<usize> = (1..=spec.n).map(|i| i % spec.n + 1).collect();
    Permutation::from_images(&images).expect("rotation is a bijection")
}

/// The flip `(1 k)(2 k-1)...`: reverses the tiles in the turntable.
pub fn phi(spec: PuzzleSpec) -> Permutation {
    let images: Vec<usize> = (1..=spec.n)
        .map(|i| if i <= spec.k { spec.k + 1 - i } else { i })
        .collect();
    Permutation::from_images(&images).expect("reversal is a bijection")
}

/// A primitive move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    /// Translate clockwise.
    #[serde(rename = "T")]
    T,
    /// Translate counterclockwise.
    #[serde(rename = "T'")]
    TInv,
    /// Flip the turntable.
    #[serde(rename = "F")]
    F,
}

impl Move {
    pub fn inverse(self) -> Move {
        match self {
            Move::T => Move::TInv,
            Move::TInv => Move::T,
            Move::F => Move::F,
        }
    }

    pub fn permutation(self, spec: PuzzleSpec) -> Permutation {
        match self {
            Move::T => tau(spec),
            Move::TInv => tau(spec).inverse(),
            Move::F => phi(spec),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Move::T => "T",
            Move::TInv => "T'",
            Move::F => "F",
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown move {0:?} (expected T, T' or F)")]
pub struct ParseMoveError(pub String);

impl FromStr for Move {
    type Err = ParseMoveError;

    fn from_str(s: &str) -> Result<Move, ParseMoveError> {
        match s {
            "T" => Ok(Move::T),
            "T'" | "Ti" | "T-" => Ok(Move::TInv),
            "F" => Ok(Move::F),
            other => Err(ParseMoveError(other.to_string())),
        }
    }
}

/// A finite sequence of moves, performed left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveWord {
    moves: Vec<Move>,
}

impl MoveWord {
    pub fn new(moves: Vec<Move>) -> MoveWord {
        MoveWord { moves }
    }

    pub fn empty() -> MoveWord {
        MoveWord::default()
    }

    pub fn single(m: Move) -> MoveWord {
        MoveWord { moves: vec![m] }
    }

    /// `tau^exponent`, written with `T` or `T'`.
    pub fn translation(exponent: i64) -> MoveWord {
        let m = if exponent < 0 { Move::TInv } else { Move::T };
        MoveWord {
            moves: vec![m; exponent.unsigned_abs() as usize],
        }
    }

    /// The word whose evaluation is the algebraic product
    /// `factors[0] * factors[1] * ... * factors[last]`. The last factor is
    /// performed first.
    pub fn product(factors: &[MoveWord]) -> MoveWord {
        let mut moves = Vec::with_capacity(factors.iter().map(MoveWord::len).sum());
        for factor in factors.iter().rev() {
            moves.extend_from_slice(&factor.moves);
        }
        MoveWord { moves }
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, m: Move) {
        self.moves.push(m);
    }

    /// Appends `other`, to be performed after `self`.
    pub fn extend(&mut self, other: &MoveWord) {
        self.moves.extend_from_slice(&other.moves);
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &MoveWord) -> MoveWord {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn inverse(&self) -> MoveWord {
        MoveWord {
            moves: self.moves.iter().rev().map(|m| m.inverse()).collect(),
        }
    }

    /// The word repeated `exponent` times; negative exponents repeat the
    /// inverse.
    pub fn pow(&self, exponent: i64) -> MoveWord {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut moves = Vec::with_capacity(base.len() * exponent.unsigned_abs() as usize);
        for _ in 0..exponent.unsigned_abs() {
            moves.extend_from_slice(&base.moves);
        }
        MoveWord { moves }
    }

    /// Cancels `F F`, `T T'` and `T' T`, and reduces each run of
    /// translations modulo `n` to its shortest form. The evaluation is
    /// unchanged.
    pub fn normalized(&self, spec: PuzzleSpec) -> MoveWord {
        #[derive(Clone, Copy)]
        enum Token {
            Flip,
            Turn(i64),
        }
        let n = spec.n as i64;
        let reduce = |r: i64| {
            let r = r.rem_euclid(n);
            if 2 * r > n {
                r - n
            } else {
                r
            }
        };
        // with k = 1 the flip is the identity
        let flip_trivial = spec.k == 1;
        let mut stack: Vec<Token> = Vec::new();
        for &m in &self.moves {
            let delta = match m {
                Move::F if flip_trivial => continue,
                Move::F => {
                    if let Some(Token::Flip) = stack.last() {
                        stack.pop();
                    } else {
                        stack.push(Token::Flip);
                    }
                    continue;
                }
                Move::T => 1,
                Move::TInv => -1,
            };
            let total = match stack.last() {
                Some(Token::Turn(r)) => {
                    let r = *r;
                    stack.pop();
                    reduce(r + delta)
                }
                _ => reduce(delta),
            };
            if total != 0 {
                stack.push(Token::Turn(total));
            }
        }
        let mut out = MoveWord::empty();
        for token in stack {
            match token {
                Token::Flip => out.push(Move::F),
                Token::Turn(r) => out.extend(&MoveWord::translation(r)),
            }
        }
        out
    }
}

impl fmt::Display for MoveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.moves.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(m.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for MoveWord {
    type Err = ParseMoveError;

    fn from_str(s: &str) -> Result<MoveWord, ParseMoveError> {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(MoveWord::new)
    }
}

impl FromIterator<Move> for MoveWord {
    fn from_iter<I: IntoIterator<Item = Move>>(iter: I) -> Self {
        MoveWord::new(iter.into_iter().collect())
    }
}

/// The permutation a word performs, starting from the solved puzzle.
pub fn eval_word(word: &MoveWord, spec: PuzzleSpec) -> Permutation {
    let t = tau(spec);
    let t_inv = t.inverse();
    let f = phi(spec);
    let mut acc = Permutation::identity(spec.n);
    for m in word.moves() {
        let g = match m {
            Move::T => &t,
            Move::TInv => &t_inv,
            Move::F => &f,
        };
        acc = g * &acc;
    }
    acc
}

/// Performs `word` on `arrangement`: the result is `eval_word(word) * arrangement`.
pub fn apply_word(word: &MoveWord, arrangement: &Permutation, spec: PuzzleSpec) -> Result<Permutation, PermError> {
    eval_word(word, spec).compose(arrangement)
}

/// `by * word * by^-1` as a word: undo `by`, perform `word`, redo `by`.
pub fn conjugate_word(by: &MoveWord, word: &MoveWord) -> MoveWord {
    MoveWord::product(&[by.clone(), word.clone(), by.inverse()])
}
