//! Constructive solving: a move sequence that returns any reachable
//! arrangement to the solved state.
//!
//! The arrangement is first pushed into the "core" of its group (even, or
//! Type I with even halves) by at most two short fixes, then sorted from the
//! right end by consecutive 3-cycles, each realized as a rotated copy of one
//! of the 3-cycle macros. Degenerate puzzles are a rotation or a reflection
//! away from solved.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::classify::{classify, half_signs, is_member, GroupFamily, MembershipReason};
use crate::macros::{macro_3cycle_a, macro_3cycle_b, macro_odd_3cycle, MacroError};
use crate::moves::{apply_word, conjugate_word, eval_word, phi, Move, MoveWord, PuzzleSpec};
use crate::perm::{Half, ParityType, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("arrangement has {got} tiles but the puzzle has {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("arrangement cannot be reached: {0}")]
    NotMember(MembershipReason),
    #[error("search gave up after {visited} states (limit {limit})")]
    Exhausted { visited: usize, limit: usize },
    #[error("cannot decompose: {0}")]
    Decomposition(String),
    #[error(transparent)]
    Macro(#[from] MacroError),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub word: MoveWord,
    pub length: usize,
    pub verified: bool,
}

/// Spacing of the consecutive 3-cycles used to sort a core element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stride {
    /// `(i i+1 i+2)`
    One,
    /// `(i i+2 i+4)`, sorting the two parity classes separately.
    Two,
}

/// Writes `p` as `c(s_1) * c(s_2) * ... * c(s_m)`, returning the starts
/// `s_j`, where `c(s)` is `(s s+1 s+2)` for [`Stride::One`] and
/// `(s s+2 s+4)` for [`Stride::Two`].
///
/// Fails when `p` is odd (stride one) or is not Type I with both halves
/// even (stride two).
pub fn decompose_into_consecutive_3cycles(p: &Permutation, stride: Stride) -> Result<Vec<usize>, SolveError> {
    match stride {
        Stride::One => decompose_stride_one(p)
            .ok_or_else(|| SolveError::Decomposition(format!("{p} is not an even permutation"))),
        Stride::Two => {
            if p.parity_type() != ParityType::TypeI {
                return Err(SolveError::Decomposition(format!("{p} does not preserve parity")));
            }
            let mut starts = Vec::new();
            for half in [Half::Odd, Half::Even] {
                let part = match p.restrict_half(half) {
                    Ok(part) => part,
                    Err(_) => continue,
                };
                let local = decompose_stride_one(&part).ok_or_else(|| {
                    SolveError::Decomposition(format!("the {half} half of {p} is odd"))
                })?;
                starts.extend(local.into_iter().map(|j| half.point(j)));
            }
            Ok(starts)
        }
    }
}

fn decompose_stride_one(p: &Permutation) -> Option<Vec<usize>> {
    let n = p.degree();
    // sort by left multiplication, remembering each 3-cycle applied
    let mut position_of: Vec<usize> = (0..=n).map(|i| if i == 0 { 0 } else { p.image(i) }).collect();
    let mut tile_at = vec![0usize; n + 1];
    for tile in 1..=n {
        tile_at[position_of[tile]] = tile;
    }
    let mut applied = Vec::new();
    let mut rotate = |start: usize, position_of: &mut Vec<usize>, tile_at: &mut Vec<usize>| {
        let (a, b, c) = (tile_at[start], tile_at[start + 1], tile_at[start + 2]);
        tile_at[start + 1] = a;
        tile_at[start + 2] = b;
        tile_at[start] = c;
        position_of[a] = start + 1;
        position_of[b] = start + 2;
        position_of[c] = start;
        applied.push(start);
    };
    for target in (3..=n).rev() {
        while position_of[target] + 2 <= target {
            let q = position_of[target];
            rotate(q, &mut position_of, &mut tile_at);
            rotate(q, &mut position_of, &mut tile_at);
        }
        if position_of[target] + 1 == target {
            rotate(target - 2, &mut position_of, &mut tile_at);
        }
    }
    if n >= 2 && tile_at[1] != 1 {
        return None;
    }
    // applied_m * ... * applied_1 * p = id, so p = applied_1^-1 * ... * applied_m^-1
    Some(applied.into_iter().flat_map(|s| [s, s]).collect())
}

/// Finds solutions for one puzzle, caching the rotated 3-cycle macros.
#[derive(Debug, Clone)]
pub struct Solver {
    spec: PuzzleSpec,
    family: GroupFamily,
    // base macro performing c(base_start), when the puzzle has a core
    base: Option<(MoveWord, usize)>,
    cache: HashMap<usize, MoveWord>,
}

impl Solver {
    pub fn new(spec: PuzzleSpec) -> Result<Solver, SolveError> {
        let family = classify(spec).family;
        let (n, k) = (spec.n(), spec.k());
        let base = if family.is_degenerate() {
            None
        } else if k % 2 == 0 {
            Some((macro_3cycle_b(spec)?, k))
        } else if (n - k) % 2 == 0 {
            Some((macro_3cycle_a(spec)?, k - 1))
        } else {
            Some((macro_odd_3cycle(spec)?, 1))
        };
        Ok(Solver {
            spec,
            family,
            base,
            cache: HashMap::new(),
        })
    }

    pub fn spec(&self) -> PuzzleSpec {
        self.spec
    }

    fn stride(&self) -> Stride {
        match self.family.collection() {
            Some(1 | 2) => Stride::One,
            _ => Stride::Two,
        }
    }

    /// A word performing the 3-cycle starting at `start` with the solver's stride.
    fn three_cycle(&mut self, start: usize) -> MoveWord {
        let n = self.spec.n() as i64;
        let (base, base_start) = self.base.as_ref().expect("core solving needs a base macro");
        self.cache
            .entry(start)
            .or_insert_with(|| {
                let mut shift = (start as i64 - *base_start as i64).rem_euclid(n);
                if 2 * shift > n {
                    shift -= n;
                }
                conjugate_word(&MoveWord::translation(shift), base)
            })
            .clone()
    }

    pub fn solve(&mut self, arrangement: &Permutation) -> Result<SolveResult, SolveError> {
        let spec = self.spec;
        let membership = is_member(spec, arrangement).map_err(|_| SolveError::DegreeMismatch {
            expected: spec.n(),
            got: arrangement.degree(),
        })?;
        if !membership.member {
            return Err(SolveError::NotMember(membership.reason));
        }
        let raw = if self.family.is_degenerate() {
            solve_rotation_or_reflection(spec, arrangement)?
        } else {
            self.solve_core(arrangement)?
        };
        let word = raw.normalized(spec);
        let solved = apply_word(&word, arrangement, spec).map_err(|e| SolveError::Internal(e.to_string()))?;
        if !solved.is_identity() {
            return Err(SolveError::Internal(format!(
                "word for {arrangement} on {spec} leaves {solved}"
            )));
        }
        Ok(SolveResult {
            length: word.len(),
            word,
            verified: true,
        })
    }

    fn solve_core(&mut self, arrangement: &Permutation) -> Result<MoveWord, SolveError> {
        let spec = self.spec;
        let k = spec.k();
        let mut word = MoveWord::empty();
        let mut state = arrangement.clone();
        let perform = |w: &MoveWord, state: &mut Permutation, word: &mut MoveWord| {
            *state = &eval_word(w, spec) * state;
            word.extend(w);
        };
        let t = MoveWord::single(Move::T);
        let f = MoveWord::single(Move::F);
        match self.family {
            GroupFamily::Symmetric if !state.is_even() => {
                let fix = if k % 4 >= 2 { &f } else { &t };
                perform(fix, &mut state, &mut word);
            }
            GroupFamily::ParitySubgroup | GroupFamily::TypeICosetEven | GroupFamily::DoubleEvenCoset => {
                if state.parity_type() == ParityType::TypeII {
                    perform(&t, &mut state, &mut word);
                }
                let (odd, even) = half_signs(&state);
                match self.family {
                    GroupFamily::ParitySubgroup => {
                        // phi has exactly one odd half; its conjugate by tau has the other
                        let (phi_odd, _) = half_signs(&phi(spec));
                        let shifted_flip = conjugate_word(&t, &f);
                        let odd_fix = if phi_odd == -1 { &f } else { &shifted_flip };
                        let even_fix = if phi_odd == -1 { &shifted_flip } else { &f };
                        if odd == -1 {
                            perform(odd_fix, &mut state, &mut word);
                        }
                        if even == -1 {
                            perform(even_fix, &mut state, &mut word);
                        }
                    }
                    GroupFamily::TypeICosetEven if odd == -1 && even == -1 => {
                        let fix = if k % 8 == 5 { f.clone() } else { t.pow(2) };
                        perform(&fix, &mut state, &mut word);
                    }
                    _ => {}
                }
            }
            _ => {}
        }
        let starts = decompose_into_consecutive_3cycles(&state.inverse(), self.stride())?;
        for &start in starts.iter().rev() {
            let w = self.three_cycle(start);
            word.extend(&w);
        }
        Ok(word)
    }
}

fn rotation_amount(p: &Permutation) -> Option<usize> {
    let n = p.degree();
    let shift = (p.image(1) + n - 1) % n;
    (1..=n).all(|i| p.image(i) == (i - 1 + shift) % n + 1).then_some(shift)
}

fn solve_rotation_or_reflection(spec: PuzzleSpec, p: &Permutation) -> Result<MoveWord, SolveError> {
    if let Some(a) = rotation_amount(p) {
        return Ok(MoveWord::translation(-(a as i64)));
    }
    // p = tau^a * phi, undone by tau^-a and then phi
    if let Some(a) = rotation_amount(&(p * &phi(spec))) {
        let mut word = MoveWord::translation(-(a as i64));
        word.push(Move::F);
        return Ok(word);
    }
    Err(SolveError::Internal(format!("{p} is neither a rotation nor a reflection")))
}

/// Solves `arrangement` on `spec`, or explains why it cannot be reached.
pub fn solve(spec: PuzzleSpec, arrangement: &Permutation) -> Result<SolveResult, SolveError> {
    Solver::new(spec)?.solve(arrangement)
}

/// A shortest solution, by breadth-first search over at most `state_limit`
/// arrangements.
pub fn bfs_solve(spec: PuzzleSpec, arrangement: &Permutation, state_limit: usize) -> Result<MoveWord, SolveError> {
    if arrangement.degree() != spec.n() {
        return Err(SolveError::DegreeMismatch {
            expected: spec.n(),
            got: arrangement.degree(),
        });
    }
    let moves = [Move::T, Move::TInv, Move::F];
    let generators: Vec<Permutation> = moves.iter().map(|m| m.permutation(spec)).collect();
    let mut parent: HashMap<Permutation, Option<(Permutation, Move)>> = HashMap::from([(arrangement.clone(), None)]);
    let mut queue = VecDeque::from([arrangement.clone()]);
    let mut found = arrangement.is_identity().then(|| arrangement.clone());
    while found.is_none() {
        let Some(current) = queue.pop_front() else {
            let membership = is_member(spec, arrangement).expect("degrees checked");
            return Err(SolveError::NotMember(membership.reason));
        };
        for (m, g) in moves.iter().zip(&generators) {
            let next = g * &current;
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), Some((current.clone(), *m)));
            if next.is_identity() {
                found = Some(next);
                break;
            }
            if parent.len() > state_limit {
                return Err(SolveError::Exhausted {
                    visited: parent.len(),
                    limit: state_limit,
                });
            }
            queue.push_back(next);
        }
    }
    let mut moves_back = Vec::new();
    let mut cursor = found.expect("loop ends with a solution");
    while let Some(Some((previous, m))) = parent.get(&cursor) {
        moves_back.push(*m);
        cursor = previous.clone();
    }
    moves_back.reverse();
    Ok(MoveWord::new(moves_back))
}
