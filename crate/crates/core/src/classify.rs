//! Which group do the translation and the flip generate?
//!
//! [`classify`] maps a [`PuzzleSpec`] to a [`GroupDescriptor`]. The small or
//! degenerate puzzles (`k = 1`, `n = k = 2`, `k >= n - 1`) give cyclic, `S_2`
//! and dihedral groups. Everything else falls into one of five collections:
//!
//! | collection | condition | group | order |
//! |---|---|---|---|
//! | 1 | `n`, `k` even; or `n` odd, `k = 2, 3 (mod 4)` | `S_n` | `n!` |
//! | 2 | `n` odd, `k = 0, 1 (mod 4)` | `A_n` | `n!/2` |
//! | 3 | `n` even, `k = 3 (mod 4)` | parity subgroup | `2 (n/2)!^2` |
//! | 4 | `n` even, `k = 5 (mod 8)`; or `n = 0 (mod 4)`, `k = 1 (mod 8)` | even Type I elements and their `tau`-coset | `(n/2)!^2` |
//! | 5 | `n = 2 (mod 4)`, `k = 1 (mod 8)` | Type I elements with both halves even, and their `tau`-coset | `(n/2)!^2 / 2` |
//!
//! Membership in each group is decided directly from the permutation by
//! [`is_member`], which is what makes an arrangement solvable or not.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::moves::{phi, tau, PuzzleSpec};
use crate::perm::{Half, ParityType, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("arrangement acts on {got} points but the puzzle has {expected} tiles")]
    DegreeMismatch { expected: usize, got: usize },
}

/// The isomorphism family of an oval track group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupFamily {
    Cyclic,
    Sym2,
    Dihedral,
    Symmetric,
    Alternating,
    ParitySubgroup,
    TypeICosetEven,
    DoubleEvenCoset,
}

impl GroupFamily {
    /// The wire name, e.g. `"double-even-coset"`.
    pub fn name(self) -> &'static str {
        match self {
            GroupFamily::Cyclic => "cyclic",
            GroupFamily::Sym2 => "sym2",
            GroupFamily::Dihedral => "dihedral",
            GroupFamily::Symmetric => "symmetric",
            GroupFamily::Alternating => "alternating",
            GroupFamily::ParitySubgroup => "parity-subgroup",
            GroupFamily::TypeICosetEven => "type-i-coset-even",
            GroupFamily::DoubleEvenCoset => "double-even-coset",
        }
    }

    /// Collection number (1 to 5) for the non-degenerate families.
    pub fn collection(self) -> Option<u8> {
        match self {
            GroupFamily::Symmetric => Some(1),
            GroupFamily::Alternating => Some(2),
            GroupFamily::ParitySubgroup => Some(3),
            GroupFamily::TypeICosetEven => Some(4),
            GroupFamily::DoubleEvenCoset => Some(5),
            _ => None,
        }
    }

    pub fn is_degenerate(self) -> bool {
        self.collection().is_none()
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The classified group of one puzzle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    pub family: GroupFamily,
    pub spec: PuzzleSpec,
}

impl GroupDescriptor {
    pub fn n(&self) -> usize {
        self.spec.n()
    }

    /// Exact group order.
    pub fn order(&self) -> BigUint {
        order(self)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        match self.family {
            GroupFamily::Cyclic => write!(f, "Z_{n}"),
            GroupFamily::Sym2 => f.write_str("S_2"),
            GroupFamily::Dihedral => write!(f, "D_{n}"),
            GroupFamily::Symmetric => write!(f, "S_{n}"),
            GroupFamily::Alternating => write!(f, "A_{n}"),
            GroupFamily::ParitySubgroup => write!(f, "PS_{n}"),
            GroupFamily::TypeICosetEven => write!(f, "(S_{m} x S_{m} ∩ A_{n}) ∪ tau-coset", m = n / 2),
            GroupFamily::DoubleEvenCoset => write!(f, "(A_{m} x A_{m}) ∪ tau-coset", m = n / 2),
        }
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            family: &'a str,
            n: usize,
            k: usize,
            order: String,
        }
        Wire {
            family: self.family.name(),
            n: self.spec.n(),
            k: self.spec.k(),
            order: self.order().to_string(),
        }
        .serialize(serializer)
    }
}

pub fn classify(spec: PuzzleSpec) -> GroupDescriptor {
    let (n, k) = (spec.n(), spec.k());
    let family = if k == 1 {
        GroupFamily::Cyclic
    } else if n == 2 {
        GroupFamily::Sym2
    } else if k + 1 >= n {
        GroupFamily::Dihedral
    } else if n % 2 == 1 {
        if k % 4 >= 2 {
            GroupFamily::Symmetric
        } else {
            GroupFamily::Alternating
        }
    } else if k % 2 == 0 {
        GroupFamily::Symmetric
    } else if k % 4 == 3 {
        GroupFamily::ParitySubgroup
    } else if k % 8 == 5 || n % 4 == 0 {
        GroupFamily::TypeICosetEven
    } else {
        GroupFamily::DoubleEvenCoset
    };
    GroupDescriptor { family, spec }
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::from(1u32), |acc, i| acc * i)
}

pub fn order(descriptor: &GroupDescriptor) -> BigUint {
    let n = descriptor.n();
    let half = || factorial(n / 2);
    match descriptor.family {
        GroupFamily::Cyclic => BigUint::from(n),
        GroupFamily::Sym2 => BigUint::from(2u32),
        GroupFamily::Dihedral => BigUint::from(2 * n),
        GroupFamily::Symmetric => factorial(n),
        GroupFamily::Alternating => factorial(n) / 2u32,
        GroupFamily::ParitySubgroup => half().pow(2) * 2u32,
        GroupFamily::TypeICosetEven => half().pow(2),
        GroupFamily::DoubleEvenCoset => half().pow(2) / 2u32,
    }
}

/// One named test in a membership decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

/// Why a permutation is or is not in the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipReason {
    pub family: GroupFamily,
    pub sign: i8,
    pub parity_type: ParityType,
    pub cycle_count: usize,
    /// Signs of the odd and even halves of the Type I part, when the
    /// arrangement lies in the parity subgroup.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_signs: Option<(i8, i8)>,
    pub checks: Vec<Check>,
}

impl MembershipReason {
    /// The first failed check, if any.
    pub fn failed(&self) -> Option<&'static str> {
        self.checks.iter().find(|c| !c.passed).map(|c| c.name)
    }
}

impl fmt::Display for MembershipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sign {:+}, {}, {} cycles",
            self.sign, self.parity_type, self.cycle_count
        )?;
        if let Some((odd, even)) = self.half_signs {
            write!(f, ", half signs {odd:+}/{even:+}")?;
        }
        for check in &self.checks {
            write!(f, "; {}: {}", check.name, if check.passed { "pass" } else { "fail" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub reason: MembershipReason,
}

/// Is `p` reachable from the solved puzzle? Equivalently: is it an element
/// of the oval track group of `spec`?
pub fn is_member(spec: PuzzleSpec, p: &Permutation) -> Result<Membership, ClassifyError> {
    if p.degree() != spec.n() {
        return Err(ClassifyError::DegreeMismatch {
            expected: spec.n(),
            got: p.degree(),
        });
    }
    let descriptor = classify(spec);
    let parity_type = p.parity_type();
    let mut reason = MembershipReason {
        family: descriptor.family,
        sign: p.sign(),
        parity_type,
        cycle_count: p.cycle_count(),
        half_signs: None,
        checks: Vec::new(),
    };
    let mut check = |name: &'static str, passed: bool| {
        reason.checks.push(Check { name, passed });
        passed
    };
    let member = match descriptor.family {
        GroupFamily::Symmetric | GroupFamily::Sym2 => check("any_permutation", true),
        GroupFamily::Alternating => check("sign_even", p.is_even()),
        GroupFamily::Cyclic => check("rotation", rotation_amount(p).is_some()),
        GroupFamily::Dihedral => {
            let rotation = rotation_amount(p).is_some();
            let reflection = !rotation && rotation_amount(&(p * &phi(spec))).is_some();
            check("rotation_or_reflection", rotation || reflection)
        }
        GroupFamily::ParitySubgroup => check(
            "type_i_or_type_ii",
            matches!(parity_type, ParityType::TypeI | ParityType::TypeII),
        ),
        GroupFamily::TypeICosetEven | GroupFamily::DoubleEvenCoset => {
            let core = type_i_part(spec, p);
            let in_parity_subgroup = check("type_i_or_type_ii", core.is_some());
            match core {
                Some(core) if in_parity_subgroup => {
                    let signs = half_signs(&core);
                    reason.half_signs = Some(signs);
                    if descriptor.family == GroupFamily::TypeICosetEven {
                        reason.checks.push(Check {
                            name: "type_i_part_even",
                            passed: core.is_even(),
                        });
                        core.is_even()
                    } else {
                        let (odd, even) = signs;
                        reason.checks.push(Check {
                            name: "odd_half_even",
                            passed: odd == 1,
                        });
                        reason.checks.push(Check {
                            name: "even_half_even",
                            passed: even == 1,
                        });
                        odd == 1 && even == 1
                    }
                }
                _ => false,
            }
        }
    };
    Ok(Membership { member, reason })
}

/// `a` if `p = tau^a`.
fn rotation_amount(p: &Permutation) -> Option<usize> {
    let n = p.degree();
    let shift = (p.image(1) + n - 1) % n;
    (1..=n).all(|i| p.image(i) == (i - 1 + shift) % n + 1).then_some(shift)
}

/// The Type I element `beta` with `p = beta` or `p = tau * beta`, if `p` is in
/// the parity subgroup.
pub fn type_i_part(spec: PuzzleSpec, p: &Permutation) -> Option<Permutation> {
    match p.parity_type() {
        ParityType::TypeI => Some(p.clone()),
        ParityType::TypeII => Some(&tau(spec).inverse() * p),
        ParityType::Neither => None,
    }
}

/// Signs of the odd and even halves of a Type I permutation with `n >= 2`.
pub fn half_signs(type_i: &Permutation) -> (i8, i8) {
    let sign_of = |half| {
        type_i
            .restrict_half(half)
            .expect("both halves of a Type I permutation on n >= 2 points")
            .sign()
    };
    (sign_of(Half::Odd), sign_of(Half::Even))
}

/// What a replacement of the tiles has to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    /// Tiles must follow each other clockwise; any rotation is fine.
    ConsecutiveClockwise,
    /// Both arrangements of two tiles work.
    EitherWay,
    /// Tiles must follow each other clockwise or counterclockwise.
    ConsecutiveEitherDirection,
    /// Anything works.
    Any,
    /// The arrangement must have an odd number of cycles.
    TotalCycleCountOdd,
    /// Odd tiles fill one colour of position and even tiles the other.
    ParityAlternation,
    /// Parity alternation, and the cycles built from the two piles must be
    /// even in number overall (the swapped-colour arrangement then has an
    /// odd cycle count of its own).
    PileCyclesEvenInTotal,
    /// Parity alternation, and each pile on its own must build an odd number
    /// of cycles.
    EachPileCycleCountOdd,
}

/// Machine-readable repair instructions plus a rendered sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairRule {
    pub family: GroupFamily,
    pub collection: Option<u8>,
    pub rule: RuleKind,
    /// Whether tiles must be split into an odd pile and an even pile.
    pub separate_parities: bool,
    /// Whether cycle counts matter, and for what.
    pub cycle_counts_matter: bool,
    pub text: String,
}

pub fn repair_rule(spec: PuzzleSpec) -> RepairRule {
    let descriptor = classify(spec);
    let m = spec.n() / 2;
    let (rule, text) = match descriptor.family {
        GroupFamily::Cyclic => (
            RuleKind::ConsecutiveClockwise,
            "the tiles must go back in consecutive clockwise order; any tile may take the first position".to_string(),
        ),
        GroupFamily::Sym2 => (RuleKind::EitherWay, "either way of returning the two tiles works".to_string()),
        GroupFamily::Dihedral => (
            RuleKind::ConsecutiveEitherDirection,
            "place any tile anywhere; the rest must follow consecutively, clockwise or counterclockwise".to_string(),
        ),
        GroupFamily::Symmetric => (RuleKind::Any, "any replacement works".to_string()),
        GroupFamily::Alternating => (
            RuleKind::TotalCycleCountOdd,
            format!(
                "build the arrangement out of cycles; it is solvable exactly when the number of cycles c \
                 (fixed tiles included) is odd, since it then splits into {} - c transpositions, an even number",
                spec.n()
            ),
        ),
        GroupFamily::ParitySubgroup => (
            RuleKind::ParityAlternation,
            "colour the odd positions blue and the even positions red; put all odd tiles on one colour and all \
             even tiles on the other, so tiles of equal parity are never neighbours"
                .to_string(),
        ),
        GroupFamily::TypeICosetEven => (
            RuleKind::PileCyclesEvenInTotal,
            format!(
                "split the tiles into an odd pile and an even pile, each renumbered 1..{m}, and fill one colour of \
                 position per pile (swapping colours shifts the labels so the first odd position is position \
                 three); the cycles built from both piles together must be even in number, which for swapped \
                 colours means the finished arrangement has an odd number of cycles"
            ),
        ),
        GroupFamily::DoubleEvenCoset => (
            RuleKind::EachPileCycleCountOdd,
            format!(
                "split the tiles into an odd pile and an even pile, each renumbered 1..{m}, and fill one colour of \
                 position per pile; each pile on its own must build an odd number of cycles"
            ),
        ),
    };
    RepairRule {
        family: descriptor.family,
        collection: descriptor.family.collection(),
        rule,
        separate_parities: matches!(
            descriptor.family,
            GroupFamily::ParitySubgroup | GroupFamily::TypeICosetEven | GroupFamily::DoubleEvenCoset
        ),
        cycle_counts_matter: matches!(
            descriptor.family,
            GroupFamily::Alternating | GroupFamily::TypeICosetEven | GroupFamily::DoubleEvenCoset
        ),
        text,
    }
}
