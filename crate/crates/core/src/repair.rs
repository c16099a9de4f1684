//! Putting the tiles back: random legal replacements, verdicts on proposed
//! replacements, and an interactive cycle builder.
//!
//! Positions are coloured: odd positions blue, even positions red. In the
//! parity families the odd tiles form the blue pile and the even tiles the
//! red pile, each relabelled `1..n/2`. A pile is laid either on its own
//! colour (`swapped_colors = false`) or on the other one, in which case every
//! home shifts one place clockwise and label 1 of the red pile sits at
//! position three.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{classify, half_signs, is_member, repair_rule, type_i_part, GroupFamily, RepairRule, RuleKind};
use crate::moves::{phi, tau, PuzzleSpec};
use crate::perm::{Half, ParityType, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepairError {
    #[error("arrangement has {got} tiles but the puzzle has {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("tile {tile} is not on this puzzle")]
    NoSuchTile { tile: usize },
    #[error("position {position} is not on this puzzle")]
    NoSuchPosition { position: usize },
    #[error("position {position} already holds tile {tile}")]
    PositionFilled { position: usize, tile: usize },
    #[error("tile {tile} has already been placed")]
    TileAlreadyPlaced { tile: usize },
    #[error("the next tile must be {expected}, the one belonging to the last filled position, not {got}")]
    WrongTile { expected: usize, got: usize },
    #[error("tile {tile} belongs to the {expected} pile, not the {got} pile")]
    WrongPile { tile: usize, expected: Pile, got: Pile },
    #[error("the {pile} pile goes on {colour} positions, and position {position} is not one")]
    WrongColour { pile: Pile, colour: Pile, position: usize },
}

/// A pile of tiles, and the colour of the positions named after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pile {
    Blue,
    Red,
}

impl Pile {
    pub fn of_tile(tile: usize) -> Pile {
        if tile % 2 == 1 {
            Pile::Blue
        } else {
            Pile::Red
        }
    }

    pub fn of_position(position: usize) -> Pile {
        Pile::of_tile(position)
    }

    pub fn other(self) -> Pile {
        match self {
            Pile::Blue => Pile::Red,
            Pile::Red => Pile::Blue,
        }
    }

    fn half(self) -> Half {
        match self {
            Pile::Blue => Half::Odd,
            Pile::Red => Half::Even,
        }
    }
}

impl std::fmt::Display for Pile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Pile::Blue => "blue",
            Pile::Red => "red",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Generated,
    UserSupplied,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplacementProposal {
    pub spec: PuzzleSpec,
    pub arrangement: Permutation,
    pub provenance: Provenance,
}

impl ReplacementProposal {
    pub fn generated(spec: PuzzleSpec, seed: u64) -> ReplacementProposal {
        ReplacementProposal {
            spec,
            arrangement: random_solvable(spec, seed),
            provenance: Provenance::Generated,
        }
    }

    pub fn user_supplied(spec: PuzzleSpec, arrangement: Permutation) -> ReplacementProposal {
        ReplacementProposal {
            spec,
            arrangement,
            provenance: Provenance::UserSupplied,
        }
    }

    pub fn validate(&self) -> Result<Verdict, RepairError> {
        validate(self.spec, &self.arrangement)
    }
}

/// A uniformly random solvable arrangement, reproducible from `seed`.
pub fn random_solvable(spec: PuzzleSpec, seed: u64) -> Permutation {
    random_solvable_with(spec, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_solvable_with<R: Rng + ?Sized>(spec: PuzzleSpec, rng: &mut R) -> Permutation {
    let n = spec.n();
    let rotation = |rng: &mut R| tau(spec).pow(rng.random_range(0..n) as i64);
    match classify(spec).family {
        GroupFamily::Symmetric => shuffled(n, rng),
        GroupFamily::Alternating => {
            let p = shuffled(n, rng);
            if p.is_even() {
                p
            } else {
                &Permutation::from_cycles(n, &[[1, 2]]).expect("n >= 2") * &p
            }
        }
        GroupFamily::Cyclic => rotation(rng),
        GroupFamily::Sym2 | GroupFamily::Dihedral => {
            let r = rotation(rng);
            if rng.random_bool(0.5) {
                &r * &phi(spec)
            } else {
                r
            }
        }
        family => {
            let m = n / 2;
            let mut odd = shuffled(m, rng);
            let mut even = shuffled(m, rng);
            let swap = Permutation::from_cycles(m, &[[1, 2]]).expect("halves have at least two points");
            match family {
                GroupFamily::TypeICosetEven if odd.sign() != even.sign() => even = &swap * &even,
                GroupFamily::DoubleEvenCoset => {
                    if !odd.is_even() {
                        odd = &swap * &odd;
                    }
                    if !even.is_even() {
                        even = &swap * &even;
                    }
                }
                _ => {}
            }
            let core = Permutation::from_halves(n, &odd, Some(&even)).expect("halves fit");
            if rng.random_bool(0.5) {
                &tau(spec) * &core
            } else {
                core
            }
        }
    }
}

fn shuffled<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Permutation::from_images(&images).expect("a shuffle is a permutation")
}

/// How the two piles sit on the coloured positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coloring {
    /// Each pile on its own colour.
    Direct,
    /// Each pile on the other colour, labels shifted by one position.
    Swapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PileCounts {
    pub blue: usize,
    pub red: usize,
}

impl PileCounts {
    pub fn total(&self) -> usize {
        self.blue + self.red
    }
}

/// The counts behind a verdict, and the verdict in words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Explanation {
    pub cycle_count: usize,
    pub sign: i8,
    pub parity_type: ParityType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Coloring>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pile_cycle_counts: Option<PileCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_check: Option<&'static str>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub rule: RepairRule,
    pub explanation: Explanation,
}

/// Judges a replacement. `valid` is exactly membership in the puzzle's group.
pub fn validate(spec: PuzzleSpec, arrangement: &Permutation) -> Result<Verdict, RepairError> {
    let membership = is_member(spec, arrangement).map_err(|_| RepairError::DegreeMismatch {
        expected: spec.n(),
        got: arrangement.degree(),
    })?;
    let rule = repair_rule(spec);
    let n = spec.n();
    let c = arrangement.cycle_count();
    let valid = membership.member;
    let parity_type = arrangement.parity_type();
    let coloring = match (rule.separate_parities, parity_type) {
        (true, ParityType::TypeI) => Some(Coloring::Direct),
        (true, ParityType::TypeII) => Some(Coloring::Swapped),
        _ => None,
    };
    let pile_cycle_counts = coloring.map(|_| pile_counts(spec, arrangement));
    let text = match rule.rule {
        RuleKind::ConsecutiveClockwise => match rotation_amount(arrangement) {
            Some(a) => format!("the tiles follow each other clockwise, turned {a} places"),
            None => "the tiles do not follow each other clockwise".to_string(),
        },
        RuleKind::EitherWay => "either way of returning the two tiles works".to_string(),
        RuleKind::ConsecutiveEitherDirection => {
            if let Some(a) = rotation_amount(arrangement) {
                format!("the tiles follow each other clockwise, turned {a} places")
            } else if rotation_amount(&(arrangement * &phi(spec))).is_some() {
                "the tiles follow each other counterclockwise".to_string()
            } else {
                "the tiles are not in consecutive order in either direction".to_string()
            }
        }
        RuleKind::Any => "any replacement works".to_string(),
        RuleKind::TotalCycleCountOdd => {
            let verdict = if c % 2 == 1 {
                "odd, so the arrangement is an even permutation"
            } else {
                "even, so the arrangement is an odd permutation"
            };
            format!(
                "{c} cycles (fixed tiles included), leaving {} transpositions; the cycle count is {verdict}",
                n - c
            )
        }
        RuleKind::ParityAlternation | RuleKind::PileCyclesEvenInTotal | RuleKind::EachPileCycleCountOdd => {
            parity_text(spec, arrangement, rule.rule, coloring, pile_cycle_counts, c)
        }
    };
    Ok(Verdict {
        valid,
        rule,
        explanation: Explanation {
            cycle_count: c,
            sign: arrangement.sign(),
            parity_type,
            coloring,
            pile_cycle_counts,
            failed_check: membership.reason.failed(),
            text,
        },
    })
}

fn parity_text(
    spec: PuzzleSpec,
    arrangement: &Permutation,
    rule: RuleKind,
    coloring: Option<Coloring>,
    piles: Option<PileCounts>,
    c: usize,
) -> String {
    let (Some(coloring), Some(piles)) = (coloring, piles) else {
        let n = spec.n();
        let tile_at = arrangement.inverse();
        let clash = (1..=n)
            .find(|&p| tile_at.image(p) % 2 == tile_at.image(p % n + 1) % 2)
            .expect("a non-alternating arrangement has equal-parity neighbours");
        return format!(
            "tiles {} and {} have the same parity and sit next to each other at positions {} and {}",
            tile_at.image(clash),
            tile_at.image(clash % n + 1),
            clash,
            clash % n + 1
        );
    };
    let placement = match coloring {
        Coloring::Direct => "odd tiles sit on the blue positions and even tiles on the red ones",
        Coloring::Swapped => "odd tiles sit on the red positions and even tiles on the blue ones (colours swapped)",
    };
    let (blue, red, total) = (piles.blue, piles.red, piles.total());
    match rule {
        RuleKind::ParityAlternation => format!("{placement}, so no two tiles of equal parity are neighbours"),
        RuleKind::PileCyclesEvenInTotal => {
            let ok = if total % 2 == 0 { "even, as required" } else { "odd, which cannot be reached" };
            let own = match coloring {
                Coloring::Swapped => format!(
                    "; after the colour relabelling the arrangement itself has {c} cycles, {}",
                    if c % 2 == 1 { "an odd total cycle count" } else { "an even total cycle count" }
                ),
                Coloring::Direct => String::new(),
            };
            format!("{placement}; the blue pile builds {blue} cycles and the red pile {red}, {total} in total, which is {ok}{own}")
        }
        RuleKind::EachPileCycleCountOdd => {
            let word = |x: usize| if x % 2 == 1 { "odd" } else { "even" };
            format!(
                "{placement}; the blue pile builds {blue} cycles ({}) and the red pile {red} ({}); both must be odd",
                word(blue),
                word(red)
            )
        }
        _ => unreachable!("only parity rules reach here"),
    }
}

fn pile_counts(spec: PuzzleSpec, arrangement: &Permutation) -> PileCounts {
    let core = type_i_part(spec, arrangement).expect("parity-respecting arrangement");
    let count = |half| core.restrict_half(half).expect("n >= 2").cycle_count();
    PileCounts {
        blue: count(Half::Odd),
        red: count(Half::Even),
    }
}

fn rotation_amount(p: &Permutation) -> Option<usize> {
    let n = p.degree();
    let shift = (p.image(1) + n - 1) % n;
    (1..=n).all(|i| p.image(i) == (i - 1 + shift) % n + 1).then_some(shift)
}

/// Whether the builder tracks piles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum BuilderMode {
    Flat,
    Piles { swapped_colors: bool },
}

impl BuilderMode {
    /// Piles for the parity families, flat otherwise.
    pub fn default_for(spec: PuzzleSpec) -> BuilderMode {
        if repair_rule(spec).separate_parities {
            BuilderMode::Piles { swapped_colors: false }
        } else {
            BuilderMode::Flat
        }
    }
}

/// One pick-and-place step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub tile: usize,
    pub position: usize,
    #[serde(default)]
    pub pile: Option<Pile>,
}

/// Cycles closed so far, split by pile, in pile labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PileCycles {
    pub blue: Vec<Vec<usize>>,
    pub red: Vec<Vec<usize>>,
}

/// What the board would be if every unplaced tile went home now.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Projection {
    pub arrangement: Permutation,
    pub valid: bool,
    pub cycle_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pile_cycle_counts: Option<PileCounts>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuilderSnapshot {
    pub spec: PuzzleSpec,
    #[serde(flatten)]
    pub mode: BuilderMode,
    /// Tile at each position, `None` for empty ones.
    pub tiles: Vec<Option<usize>>,
    /// Closed cycles in tile numbers, in the order they were closed.
    pub cycles: Vec<Vec<usize>>,
    /// The cycle being built.
    pub open_cycle: Vec<usize>,
    /// The tile that must be placed next, if the order is forced.
    pub next_tile: Option<usize>,
    pub cycle_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pile_cycles: Option<PileCycles>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pile_cycle_counts: Option<PileCounts>,
    pub complete: bool,
    pub projection: Projection,
}

/// Builds a replacement cycle by cycle: pick any tile and place it anywhere,
/// then place the tile that belongs to the position just filled, until the
/// cycle closes.
///
/// A tile's home is the position it takes in the solved board under the
/// session's colouring: its own number, or one further clockwise when the
/// colours are swapped. The cycles recorded are those of the map from homes
/// to chosen positions.
#[derive(Debug, Clone)]
pub struct CycleBuilder {
    spec: PuzzleSpec,
    mode: BuilderMode,
    // position_of[tile], one-based, 0 when unplaced
    position_of: Vec<usize>,
    tile_at: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    open_cycle: Vec<usize>,
}

impl CycleBuilder {
    pub fn new(spec: PuzzleSpec, mode: BuilderMode) -> CycleBuilder {
        let n = spec.n();
        CycleBuilder {
            spec,
            mode,
            position_of: vec![0; n + 1],
            tile_at: vec![0; n + 1],
            cycles: Vec::new(),
            open_cycle: Vec::new(),
        }
    }

    pub fn spec(&self) -> PuzzleSpec {
        self.spec
    }

    pub fn mode(&self) -> BuilderMode {
        self.mode
    }

    fn swapped(&self) -> bool {
        matches!(self.mode, BuilderMode::Piles { swapped_colors: true })
    }

    fn home(&self, tile: usize) -> usize {
        if self.swapped() {
            tile % self.spec.n() + 1
        } else {
            tile
        }
    }

    fn tile_whose_home_is(&self, position: usize) -> usize {
        let n = self.spec.n();
        if self.swapped() {
            (position + n - 2) % n + 1
        } else {
            position
        }
    }

    pub fn next_tile(&self) -> Option<usize> {
        let last = *self.open_cycle.last()?;
        Some(self.tile_whose_home_is(self.position_of[last]))
    }

    pub fn place(&mut self, step: Placement) -> Result<BuilderSnapshot, RepairError> {
        let n = self.spec.n();
        let Placement { tile, position, pile } = step;
        if !(1..=n).contains(&tile) {
            return Err(RepairError::NoSuchTile { tile });
        }
        if !(1..=n).contains(&position) {
            return Err(RepairError::NoSuchPosition { position });
        }
        if self.position_of[tile] != 0 {
            return Err(RepairError::TileAlreadyPlaced { tile });
        }
        if self.tile_at[position] != 0 {
            return Err(RepairError::PositionFilled {
                position,
                tile: self.tile_at[position],
            });
        }
        if let Some(expected) = self.next_tile() {
            if expected != tile {
                return Err(RepairError::WrongTile { expected, got: tile });
            }
        }
        if let BuilderMode::Piles { swapped_colors } = self.mode {
            let own = Pile::of_tile(tile);
            match pile {
                Some(got) if got != own => {
                    return Err(RepairError::WrongPile {
                        tile,
                        expected: own,
                        got,
                    })
                }
                _ => {}
            }
            let colour = if swapped_colors { own.other() } else { own };
            if Pile::of_position(position) != colour {
                return Err(RepairError::WrongColour {
                    pile: own,
                    colour,
                    position,
                });
            }
        }
        self.position_of[tile] = position;
        self.tile_at[position] = tile;
        self.open_cycle.push(tile);
        let first = self.open_cycle[0];
        if self.tile_whose_home_is(position) == first {
            self.cycles.push(std::mem::take(&mut self.open_cycle));
        }
        Ok(self.snapshot())
    }

    pub fn is_complete(&self) -> bool {
        self.position_of[1..].iter().all(|&p| p != 0)
    }

    /// The finished arrangement, once every tile is placed.
    pub fn arrangement(&self) -> Option<Permutation> {
        self.is_complete()
            .then(|| Permutation::from_images(&self.position_of[1..]).expect("every position filled once"))
    }

    fn projected(&self) -> Permutation {
        let mut position_of = self.position_of.clone();
        if let (Some(&first), Some(pending)) = (self.open_cycle.first(), self.next_tile()) {
            position_of[pending] = self.home(first);
        }
        for tile in 1..=self.spec.n() {
            if position_of[tile] == 0 {
                position_of[tile] = self.home(tile);
            }
        }
        Permutation::from_images(&position_of[1..]).expect("unplaced tiles fill the free homes")
    }

    pub fn snapshot(&self) -> BuilderSnapshot {
        let spec = self.spec;
        let projected = self.projected();
        let piles = matches!(self.mode, BuilderMode::Piles { .. }) && spec.n() >= 2;
        let pile_cycles = piles.then(|| {
            let mut split = PileCycles {
                blue: Vec::new(),
                red: Vec::new(),
            };
            for cycle in &self.cycles {
                let pile = Pile::of_tile(cycle[0]);
                let labels = cycle.iter().map(|&t| pile.half().label(t)).collect();
                match pile {
                    Pile::Blue => split.blue.push(labels),
                    Pile::Red => split.red.push(labels),
                }
            }
            split
        });
        let projection_piles = (piles && projected.parity_type() != ParityType::Neither)
            .then(|| pile_counts(spec, &projected));
        BuilderSnapshot {
            spec,
            mode: self.mode,
            tiles: self.tile_at[1..].iter().map(|&t| (t != 0).then_some(t)).collect(),
            cycles: self.cycles.clone(),
            open_cycle: self.open_cycle.clone(),
            next_tile: self.next_tile(),
            cycle_count: self.cycles.len(),
            pile_cycle_counts: pile_cycles.as_ref().map(|c| PileCounts {
                blue: c.blue.len(),
                red: c.red.len(),
            }),
            pile_cycles,
            complete: self.is_complete(),
            projection: Projection {
                valid: is_member(spec, &projected).expect("degree matches").member,
                cycle_count: projected.cycle_count(),
                pile_cycle_counts: projection_piles,
                arrangement: projected,
            },
        }
    }

    /// The verdict on the finished arrangement.
    pub fn verdict(&self) -> Option<Verdict> {
        self.arrangement()
            .map(|p| validate(self.spec, &p).expect("degree matches"))
    }
}

/// Convenience for a fresh builder in the default mode for `spec`.
pub fn cycle_builder_session(spec: PuzzleSpec) -> CycleBuilder {
    CycleBuilder::new(spec, BuilderMode::default_for(spec))
}

/// The signs of the two piles, `None` outside the parity subgroup.
pub fn pile_signs(spec: PuzzleSpec, arrangement: &Permutation) -> Option<(i8, i8)> {
    if spec.n() < 2 || spec.n() % 2 == 1 {
        return None;
    }
    type_i_part(spec, arrangement).map(|core| half_signs(&core))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_group, DEFAULT_STATE_LIMIT};
    use proptest::prelude::*;

    fn spec(n: usize, k: usize) -> PuzzleSpec {
        PuzzleSpec::new(n, k).unwrap()
    }

    fn cyc(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    const SWAPPED_PILES: &str = "(1 6 9 12 13 20 19 10 3 8 7 2 11 14)(4 5)(15 16 17 18)";

    #[test]
    fn generated_arrangements_are_members() {
        for n in 1..=14 {
            for k in 1..=n {
                let s = spec(n, k);
                for seed in 0..20 {
                    let p = random_solvable(s, seed);
                    assert!(is_member(s, &p).unwrap().member, "{s} seed {seed}: {p}");
                }
            }
        }
        assert_eq!(random_solvable(spec(20, 5), 7), random_solvable(spec(20, 5), 7));
    }

    #[test]
    fn cyclic_replacements_are_rotations() {
        let s = spec(9, 1);
        let mut seen = std::collections::HashSet::new();
        for seed in 0..200 {
            let p = random_solvable(s, seed);
            assert!(rotation_amount(&p).is_some());
            seen.insert(p);
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn samples_cover_small_groups() {
        let s = spec(6, 3);
        let group = enumerate_group(s, DEFAULT_STATE_LIMIT).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..3000 {
            let p = random_solvable_with(s, &mut rng);
            assert!(group.contains(&p));
            seen.insert(p);
        }
        assert_eq!(seen.len(), 72);
    }

    #[test]
    fn swapped_pile_example_verdict() {
        let s = spec(20, 5);
        let verdict = validate(s, &cyc(SWAPPED_PILES, 20)).unwrap();
        assert!(verdict.valid);
        let e = &verdict.explanation;
        assert_eq!(e.coloring, Some(Coloring::Swapped));
        assert_eq!(e.pile_cycle_counts, Some(PileCounts { blue: 4, red: 6 }));
        assert_eq!(e.cycle_count, 3);
        assert_eq!(e.sign, -1);
        assert!(e.text.contains("10 in total"), "{}", e.text);
        assert!(e.text.contains("an odd total cycle count"), "{}", e.text);
    }

    #[test]
    fn transposition_on_an_alternating_puzzle() {
        let verdict = validate(spec(7, 4), &cyc("(1 2)", 7)).unwrap();
        assert!(!verdict.valid);
        assert_eq!(verdict.explanation.cycle_count, 6);
        assert!(verdict.explanation.text.contains("6 cycles"));
        assert!(verdict.explanation.text.contains("odd permutation"));
        assert_eq!(verdict.explanation.failed_check, Some("sign_even"));
    }

    #[test]
    fn identity_is_always_valid() {
        for n in 1..=12 {
            for k in 1..=n {
                assert!(validate(spec(n, k), &Permutation::identity(n)).unwrap().valid);
            }
        }
    }

    #[test]
    fn explains_parity_clashes() {
        let verdict = validate(spec(8, 3), &cyc("(1 2)", 8)).unwrap();
        assert!(!verdict.valid);
        assert!(verdict.explanation.text.contains("same parity"), "{}", verdict.explanation.text);
        let degenerate = validate(spec(6, 5), &cyc("(1 6 5 4 3 2)", 6)).unwrap();
        assert!(degenerate.valid);
        let backwards = validate(spec(6, 5), &(&tau(spec(6, 5)).pow(2) * &phi(spec(6, 5)))).unwrap();
        assert!(backwards.explanation.text.contains("counterclockwise"));
    }

    proptest! {
        #[test]
        fn validate_agrees_with_membership(n in 1usize..=12, k_seed in 0usize..12, seed in any::<u64>()) {
            let k = k_seed % n + 1;
            let s = spec(n, k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = shuffled(n, &mut rng);
            let verdict = validate(s, &p).unwrap();
            prop_assert_eq!(verdict.valid, is_member(s, &p).unwrap().member);
            if classify(s).family == GroupFamily::Alternating {
                prop_assert_eq!(verdict.valid, p.cycle_count() % 2 == 1);
            }
        }

        #[test]
        fn builder_reproduces_any_arrangement(n in 2usize..=12, k_seed in 0usize..12, seed in any::<u64>()) {
            let k = k_seed % n + 1;
            let s = spec(n, k);
            let target = random_solvable(s, seed);
            let mode = match target.parity_type() {
                ParityType::TypeII if BuilderMode::default_for(s) != BuilderMode::Flat => {
                    BuilderMode::Piles { swapped_colors: true }
                }
                _ => BuilderMode::default_for(s),
            };
            let mut builder = CycleBuilder::new(s, mode);
            while !builder.is_complete() {
                let tile = builder.next_tile().unwrap_or_else(|| (1..=n).find(|&t| builder.position_of[t] == 0).unwrap());
                builder.place(Placement { tile, position: target.image(tile), pile: None }).unwrap();
            }
            prop_assert_eq!(builder.arrangement().unwrap(), target.clone());
            prop_assert!(builder.verdict().unwrap().valid);
        }
    }

    fn place(builder: &mut CycleBuilder, tile: usize, position: usize, pile: Option<Pile>) -> BuilderSnapshot {
        builder
            .place(Placement { tile, position, pile })
            .unwrap_or_else(|e| panic!("tile {tile} at {position}: {e}"))
    }

    #[test]
    fn swapped_pile_example_by_piles() {
        let s = spec(20, 5);
        let mut builder = CycleBuilder::new(s, BuilderMode::Piles { swapped_colors: true });
        // labels i -> b(i) with the odd pile on even positions 2 b(i),
        // labels j -> r(j) with the even pile on odd positions 2 r(j) + 1
        let blue = cyc("(5 6 7 10)(2 4 1 3)(8)(9)", 10);
        let red = cyc("(3 4)(2)(1 5)(6)(7 10 9)(8)", 10);
        let blue_order = [5, 6, 7, 10, 2, 4, 1, 3, 8, 9];
        let red_order = [3, 4, 2, 1, 5, 6, 7, 10, 9, 8];
        for label in blue_order {
            place(&mut builder, 2 * label - 1, 2 * blue.image(label), Some(Pile::Blue));
        }
        for label in red_order {
            place(&mut builder, 2 * label, (2 * red.image(label)) % 20 + 1, Some(Pile::Red));
        }
        let snapshot = builder.snapshot();
        assert!(snapshot.complete);
        assert_eq!(snapshot.pile_cycle_counts, Some(PileCounts { blue: 4, red: 6 }));
        assert_eq!(snapshot.pile_cycles.as_ref().unwrap().blue[0], vec![5, 6, 7, 10]);
        assert_eq!(builder.arrangement().unwrap(), cyc(SWAPPED_PILES, 20));
        assert!(builder.verdict().unwrap().valid);
        assert_eq!(snapshot.projection.arrangement, cyc(SWAPPED_PILES, 20));
    }

    #[test]
    fn builder_enforces_the_pick_order() {
        let s = spec(7, 4);
        let mut builder = cycle_builder_session(s);
        assert_eq!(builder.mode(), BuilderMode::Flat);
        place(&mut builder, 3, 5, None);
        assert_eq!(builder.next_tile(), Some(5));
        assert!(matches!(
            builder.place(Placement { tile: 4, position: 1, pile: None }),
            Err(RepairError::WrongTile { expected: 5, got: 4 })
        ));
        assert!(matches!(
            builder.place(Placement { tile: 5, position: 5, pile: None }),
            Err(RepairError::PositionFilled { position: 5, tile: 3 })
        ));
        assert!(matches!(
            builder.place(Placement { tile: 3, position: 1, pile: None }),
            Err(RepairError::TileAlreadyPlaced { tile: 3 })
        ));
        let snapshot = place(&mut builder, 5, 3, None);
        assert_eq!(snapshot.cycles, vec![vec![3, 5]]);
        assert_eq!(snapshot.cycle_count, 1);
        assert_eq!(snapshot.next_tile, None);
        // projection: a transposition plus five fixed tiles
        assert_eq!(snapshot.projection.cycle_count, 6);
        assert!(!snapshot.projection.valid);
    }

    #[test]
    fn single_seven_cycle_is_valid() {
        let s = spec(7, 4);
        let mut builder = cycle_builder_session(s);
        let mut tile = 1;
        for _ in 0..7 {
            let position = tile % 7 + 1;
            place(&mut builder, tile, position, None);
            tile = position;
        }
        assert_eq!(builder.snapshot().cycle_count, 1);
        assert!(builder.verdict().unwrap().valid);
    }

    #[test]
    fn home_placements_give_singletons() {
        for (n, k) in [(7, 4), (20, 5), (14, 9), (6, 3)] {
            let s = spec(n, k);
            let mut builder = cycle_builder_session(s);
            for t in 1..=n {
                place(&mut builder, t, t, None);
            }
            let snapshot = builder.snapshot();
            assert_eq!(snapshot.cycle_count, n);
            assert!(builder.verdict().unwrap().valid);
        }
    }

    #[test]
    fn pile_mode_errors() {
        let s = spec(8, 5);
        let mut builder = cycle_builder_session(s);
        assert!(matches!(
            builder.place(Placement { tile: 1, position: 3, pile: Some(Pile::Red) }),
            Err(RepairError::WrongPile { tile: 1, expected: Pile::Blue, got: Pile::Red })
        ));
        assert!(matches!(
            builder.place(Placement { tile: 1, position: 2, pile: Some(Pile::Blue) }),
            Err(RepairError::WrongColour { position: 2, .. })
        ));
        let mut swapped = CycleBuilder::new(s, BuilderMode::Piles { swapped_colors: true });
        place(&mut swapped, 1, 4, None);
        assert_eq!(swapped.next_tile(), Some(3));
    }

    #[test]
    fn snapshot_json() {
        let mut builder = cycle_builder_session(spec(6, 3));
        let snapshot = place(&mut builder, 1, 1, Some(Pile::Blue));
        let json = serde_json::to_value(&snapshot).unwrap();
        assert_eq!(json["mode"], "piles");
        assert_eq!(json["swapped_colors"], false);
        assert_eq!(json["tiles"][0], 1);
        assert!(json["tiles"][1].is_null());
        assert_eq!(json["pile_cycle_counts"]["blue"], 1);
        assert_eq!(json["projection"]["valid"], true);
        let step: Placement = serde_json::from_str(r#"{"tile": 3, "position": 5, "pile": null}"#).unwrap();
        assert_eq!(step.pile, None);
        assert_eq!(pile_signs(spec(6, 3), &Permutation::identity(6)), Some((1, 1)));
    }
}
