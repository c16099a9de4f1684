//! JSON shapes shared by the command line and the HTTP service, and the
//! error taxonomy behind both exit codes and status codes.

use std::fmt;

use ovaltrack::classify::{GroupDescriptor, MembershipReason, RepairRule};
use ovaltrack::moves::{MoveWord, PuzzleSpec};
use ovaltrack::perm::Permutation;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    InvalidInput,
    Unsolvable,
    NotFound,
    Internal,
}

impl ErrorCode {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCode::InvalidInput | ErrorCode::NotFound => 1,
            ErrorCode::Unsolvable => 2,
            ErrorCode::Internal => 3,
        }
    }

    pub fn status(self) -> u16 {
        match self {
            ErrorCode::InvalidInput => 400,
            ErrorCode::NotFound => 404,
            ErrorCode::Unsolvable => 422,
            ErrorCode::Internal => 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

impl ApiError {
    pub fn invalid(message: impl fmt::Display) -> ApiError {
        ApiError {
            code: ErrorCode::InvalidInput,
            message: message.to_string(),
        }
    }

    pub fn unsolvable(message: impl fmt::Display) -> ApiError {
        ApiError {
            code: ErrorCode::Unsolvable,
            message: message.to_string(),
        }
    }

    pub fn not_found(message: impl fmt::Display) -> ApiError {
        ApiError {
            code: ErrorCode::NotFound,
            message: message.to_string(),
        }
    }

    pub fn internal(message: impl fmt::Display) -> ApiError {
        ApiError {
            code: ErrorCode::Internal,
            message: message.to_string(),
        }
    }

    /// `{"error": {"code", "message"}}`
    pub fn body(&self) -> serde_json::Value {
        serde_json::json!({ "error": self })
    }
}

impl fmt::Display for ApiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for ApiError {}

pub fn spec(n: usize, k: usize) -> Result<PuzzleSpec, ApiError> {
    PuzzleSpec::new(n, k).map_err(ApiError::invalid)
}

/// An arrangement given either as tiles by position or in cycle notation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
pub struct ArrangementInput {
    #[serde(default)]
    pub tiles: Option<Vec<usize>>,
    #[serde(default)]
    pub cycles: Option<String>,
}

impl ArrangementInput {
    pub fn resolve(&self, n: usize) -> Result<Permutation, ApiError> {
        match (&self.tiles, &self.cycles) {
            (Some(tiles), None) => {
                if tiles.len() != n {
                    return Err(ApiError::invalid(format!("expected {n} tiles, got {}", tiles.len())));
                }
                Permutation::from_tiles(tiles).map_err(ApiError::invalid)
            }
            (None, Some(cycles)) => Permutation::parse_cycles(cycles, n).map_err(ApiError::invalid),
            (None, None) => Err(ApiError::invalid("give the arrangement as \"tiles\" or \"cycles\"")),
            (Some(_), Some(_)) => Err(ApiError::invalid("give only one of \"tiles\" and \"cycles\"")),
        }
    }
}

/// A puzzle plus an arrangement on it, as requests carry them.
#[derive(Debug, Clone, Deserialize)]
pub struct ArrangementRequest {
    pub n: usize,
    pub k: usize,
    #[serde(flatten)]
    pub arrangement: ArrangementInput,
}

impl ArrangementRequest {
    pub fn resolve(&self) -> Result<(PuzzleSpec, Permutation), ApiError> {
        let spec = spec(self.n, self.k)?;
        Ok((spec, self.arrangement.resolve(self.n)?))
    }
}

/// Tiles by position (position 1 is the left slot of the turntable, then
/// clockwise) together with cycle notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireArrangement {
    pub n: usize,
    pub k: usize,
    pub tiles: Vec<usize>,
    pub cycles: String,
}

impl WireArrangement {
    pub fn new(spec: PuzzleSpec, p: &Permutation) -> WireArrangement {
        WireArrangement {
            n: spec.n(),
            k: spec.k(),
            tiles: p.tiles(),
            cycles: p.to_string(),
        }
    }

    pub fn permutation(&self) -> Result<Permutation, ApiError> {
        Permutation::from_tiles(&self.tiles).map_err(ApiError::invalid)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyResponse {
    #[serde(flatten)]
    pub descriptor: GroupDescriptor,
    pub collection: Option<u8>,
    pub repair_rule: RepairRule,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberResponse {
    pub member: bool,
    pub reason: MembershipReason,
    pub arrangement: WireArrangement,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResponse {
    pub word: String,
    pub moves: MoveWord,
    pub length: usize,
    pub verified: bool,
    pub arrangement: WireArrangement,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScrambleResponse {
    pub seed: u64,
    pub arrangement: WireArrangement,
}
