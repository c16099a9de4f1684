//! The operations behind each subcommand and endpoint.

use ovaltrack::classify::{classify as classify_spec, is_member};
use ovaltrack::moves::{apply_word, MoveWord};
use ovaltrack::oracle::{verify_spec_range_with_limit, CensusMode, CensusReport, DEFAULT_STATE_LIMIT};
use ovaltrack::repair::{random_solvable, validate as validate_arrangement, Provenance, Verdict};
use ovaltrack::solver::{bfs_solve, SolveError, Solver};
use ovaltrack::repair_rule;
use serde::{Deserialize, Serialize};

use crate::wire::{
    spec, ApiError, ArrangementRequest, ClassifyResponse, MemberResponse, ScrambleResponse, SolveResponse,
    WireArrangement,
};

pub const STATE_LIMIT_VAR: &str = "OVALTRACK_STATE_LIMIT";

/// BFS state limit, overridable through `OVALTRACK_STATE_LIMIT`.
pub fn state_limit() -> Result<usize, ApiError> {
    match std::env::var(STATE_LIMIT_VAR) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| ApiError::invalid(format!("{STATE_LIMIT_VAR} must be a positive integer, got {text:?}"))),
        Err(_) => Ok(DEFAULT_STATE_LIMIT),
    }
}

pub fn classify(n: usize, k: usize) -> Result<ClassifyResponse, ApiError> {
    let s = spec(n, k)?;
    let descriptor = classify_spec(s);
    Ok(ClassifyResponse {
        collection: descriptor.family.collection(),
        descriptor,
        repair_rule: repair_rule(s),
    })
}

pub fn member(request: &ArrangementRequest) -> Result<MemberResponse, ApiError> {
    let (s, p) = request.resolve()?;
    let membership = is_member(s, &p).map_err(ApiError::invalid)?;
    Ok(MemberResponse {
        member: membership.member,
        reason: membership.reason,
        arrangement: WireArrangement::new(s, &p),
    })
}

fn solve_error(e: SolveError) -> ApiError {
    match e {
        SolveError::NotMember(reason) => ApiError::unsolvable(format!("arrangement cannot be reached: {reason}")),
        SolveError::DegreeMismatch { .. } => ApiError::invalid(e),
        SolveError::Exhausted { .. } => ApiError::unsolvable(e),
        other => ApiError::internal(other),
    }
}

/// Solves and re-checks the word before returning it. `shortest` switches
/// to breadth-first search, bounded by [`state_limit`].
pub fn solve(request: &ArrangementRequest, shortest: bool) -> Result<SolveResponse, ApiError> {
    let (s, p) = request.resolve()?;
    let word = if shortest {
        bfs_solve(s, &p, state_limit()?).map_err(solve_error)?
    } else {
        Solver::new(s).and_then(|mut solver| solver.solve(&p)).map_err(solve_error)?.word
    };
    let end = apply_word(&word, &p, s).map_err(ApiError::internal)?;
    if !end.is_identity() {
        return Err(ApiError::internal(format!("solution for {p} leaves {end}")));
    }
    Ok(SolveResponse {
        word: word.to_string(),
        length: word.len(),
        moves: word,
        verified: true,
        arrangement: WireArrangement::new(s, &p),
    })
}

pub fn scramble(n: usize, k: usize, seed: Option<u64>) -> Result<ScrambleResponse, ApiError> {
    let s = spec(n, k)?;
    let seed = seed.unwrap_or_else(rand::random);
    let p = random_solvable(s, seed);
    if !is_member(s, &p).map_err(ApiError::internal)?.member {
        return Err(ApiError::internal(format!("scramble {p} is not solvable")));
    }
    Ok(ScrambleResponse {
        seed,
        arrangement: WireArrangement::new(s, &p),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateResponse {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub arrangement: WireArrangement,
}

pub fn validate(request: &ArrangementRequest) -> Result<ValidateResponse, ApiError> {
    let (s, p) = request.resolve()?;
    let verdict = validate_arrangement(s, &p).map_err(ApiError::invalid)?;
    Ok(ValidateResponse {
        verdict,
        arrangement: WireArrangement::new(s, &p),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerateResponse {
    pub seed: u64,
    pub provenance: Provenance,
    pub arrangement: WireArrangement,
    pub verdict: Verdict,
}

pub fn generate(n: usize, k: usize, seed: Option<u64>) -> Result<GenerateResponse, ApiError> {
    let s = spec(n, k)?;
    let seed = seed.unwrap_or_else(rand::random);
    let p = random_solvable(s, seed);
    let verdict = validate_arrangement(s, &p).map_err(ApiError::internal)?;
    if !verdict.valid {
        return Err(ApiError::internal(format!("generated replacement {p} is not solvable")));
    }
    Ok(GenerateResponse {
        seed,
        provenance: Provenance::Generated,
        arrangement: WireArrangement::new(s, &p),
        verdict,
    })
}

#[derive(Debug, Clone, Deserialize)]
pub struct ApplyRequest {
    #[serde(flatten)]
    pub target: ArrangementRequest,
    pub word: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApplyResponse {
    pub arrangement: WireArrangement,
    pub member: bool,
    pub solved: bool,
}

pub fn apply(request: &ApplyRequest) -> Result<ApplyResponse, ApiError> {
    let (s, p) = request.target.resolve()?;
    let word: MoveWord = request.word.parse().map_err(ApiError::invalid)?;
    let after = apply_word(&word, &p, s).map_err(ApiError::internal)?;
    Ok(ApplyResponse {
        member: is_member(s, &after).map_err(ApiError::internal)?.member,
        solved: after.is_identity(),
        arrangement: WireArrangement::new(s, &after),
    })
}

pub fn census(n_max: usize, mode: CensusMode) -> Result<CensusReport, ApiError> {
    if n_max == 0 {
        return Err(ApiError::invalid("--nmax must be at least 1"));
    }
    verify_spec_range_with_limit(n_max, mode, state_limit()?).map_err(ApiError::internal)
}
