//! Ground truth for the classification, computed without it.
//!
//! Two independent routes to `|<tau, phi>|`:
//!
//! * [`enumerate_group`] closes the identity under the three moves by
//!   breadth-first search, storing each permutation as its Lehmer rank.
//!   Practical up to a few million elements.
//! * [`StabilizerChain`] runs deterministic Schreier–Sims on the two
//!   generators and multiplies the basic orbit lengths. Practical for every
//!   `n` up to [`MAX_CHAIN_DEGREE`].
//!
//! [`verify_spec_range`] compares either route with
//! [`classify`](crate::classify::classify) over a whole range of puzzles.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{classify, is_member, GroupFamily};
use crate::moves::{phi, tau, PuzzleSpec};
use crate::perm::Permutation;

/// Default cap on the number of states a breadth-first enumeration may visit.
pub const DEFAULT_STATE_LIMIT: usize = 10_000_000;

/// Largest `n` whose permutations fit a `u64` Lehmer rank (`20! < 2^63`).
pub const MAX_PACKED_DEGREE: usize = 20;

/// Largest `n` accepted by the stabilizer-chain oracle.
pub const MAX_CHAIN_DEGREE: usize = 64;

/// Largest `n` for which the census checks membership on all `n!` permutations.
pub const POINTWISE_MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration of {spec} stopped after {visited} states (limit {limit})")]
    LimitExceeded {
        spec: PuzzleSpec,
        visited: usize,
        limit: usize,
    },
    #[error("n = {n} exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },
}

/// Lehmer rank of `p` in `0..n!`. Requires `n <= 20`.
pub fn pack(p: &Permutation) -> u64 {
    let n = p.degree();
    assert!(n <= MAX_PACKED_DEGREE, "cannot pack a permutation of degree {n}");
    let raw = p.raw();
    let mut code = 0u64;
    for i in 0..n {
        let smaller_after = raw[i + 1..].iter().filter(|&&x| x < raw[i]).count() as u64;
        code = code * (n - i) as u64 + smaller_after;
    }
    code
}

/// Inverse of [`pack`].
pub fn unpack(mut code: u64, n: usize) -> Permutation {
    assert!((1..=MAX_PACKED_DEGREE).contains(&n), "cannot unpack degree {n}");
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let radix = (n - i) as u64;
        digits[i] = (code % radix) as usize;
        code /= radix;
    }
    let mut remaining: Vec<usize> = (1..=n).collect();
    let images: Vec<usize> = digits.into_iter().map(|d| remaining.remove(d)).collect();
    Permutation::from_images(&images).expect("Lehmer digits give a permutation")
}

/// The full element set of `<tau, phi>` found by breadth-first search.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub spec: PuzzleSpec,
    pub elements: HashSet<u64>,
    /// Largest distance from the identity, in moves `T`, `T'`, `F`.
    pub diameter: usize,
    pub states_expanded: usize,
}

impl EnumerationResult {
    pub fn count(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.spec.n() && self.elements.contains(&pack(p))
    }
}

pub fn enumerate_group(spec: PuzzleSpec, state_limit: usize) -> Result<EnumerationResult, OracleError> {
    let n = spec.n();
    if n > MAX_PACKED_DEGREE {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_PACKED_DEGREE,
        });
    }
    let t = tau(spec);
    let generators = [t.clone(), t.inverse(), phi(spec)];
    let identity = Permutation::identity(n);
    let mut elements = HashSet::from([pack(&identity)]);
    let mut frontier = vec![pack(&identity)];
    let mut diameter = 0;
    let mut states_expanded = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for code in frontier {
            let p = unpack(code, n);
            states_expanded += 1;
            for g in &generators {
                let q = pack(&(g * &p));
                if elements.insert(q) {
                    if elements.len() > state_limit {
                        return Err(OracleError::LimitExceeded {
                            spec,
                            visited: elements.len(),
                            limit: state_limit,
                        });
                    }
                    next.push(q);
                }
            }
        }
        if !next.is_empty() {
            diameter += 1;
        }
        frontier = next;
    }
    Ok(EnumerationResult {
        spec,
        elements,
        diameter,
        states_expanded,
    })
}

type Images = Vec<u8>;

fn compose(a: &[u8], b: &[u8]) -> Images {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn invert(a: &[u8]) -> Images {
    let mut out = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

fn is_identity(a: &[u8]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i == x as usize)
}

#[derive(Debug, Clone)]
struct Level {
    base: usize,
    generators: Vec<Images>,
    orbit: Vec<usize>,
    // transversal[x] = u with u(base) = x, stored alongside its inverse
    transversal: Vec<Option<(Images, Images)>>,
}

impl Level {
    fn new(base: usize, n: usize) -> Level {
        let mut level = Level {
            base,
            generators: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; n],
        };
        level.rebuild_orbit();
        level
    }

    fn rebuild_orbit(&mut self) {
        let n = self.transversal.len();
        let identity: Images = (0..n as u8).collect();
        self.transversal = vec![None; n];
        self.transversal[self.base] = Some((identity.clone(), identity));
        self.orbit = vec![self.base];
        let mut queue = VecDeque::from([self.base]);
        while let Some(x) = queue.pop_front() {
            let u_x = self.transversal[x].as_ref().expect("orbit point has a coset rep").0.clone();
            for s in &self.generators {
                let y = s[x] as usize;
                if self.transversal[y].is_none() {
                    let u_y = compose(s, &u_x);
                    let inv = invert(&u_y);
                    self.transversal[y] = Some((u_y, inv));
                    self.orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
    }
}

/// Base and strong generating set for a permutation group, built by the
/// deterministic Schreier–Sims algorithm.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    n: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(n: usize, generators: &[Permutation]) -> Result<StabilizerChain, OracleError> {
        if n > MAX_CHAIN_DEGREE {
            return Err(OracleError::TooLarge {
                n,
                max: MAX_CHAIN_DEGREE,
            });
        }
        let gens: Vec<Images> = generators
            .iter()
            .map(|g| g.raw().iter().map(|&x| x as u8).collect::<Images>())
            .filter(|g| !is_identity(g))
            .collect();
        let mut chain = StabilizerChain { n, levels: Vec::new() };
        // every generator must move some base point
        for g in &gens {
            if chain.levels.iter().all(|l| g[l.base] as usize == l.base) {
                let moved = (0..n).find(|&x| g[x] as usize != x).expect("non-identity generator");
                chain.levels.push(Level::new(moved, n));
            }
        }
        for g in &gens {
            for level in chain.levels.iter_mut() {
                level.generators.push(g.clone());
                if g[level.base] as usize != level.base {
                    break;
                }
            }
        }
        for level in chain.levels.iter_mut() {
            level.rebuild_orbit();
        }
        chain.complete();
        Ok(chain)
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`levels.len()` if it passed every level).
    fn strip(&self, g: Images, from: usize) -> (Images, usize) {
        let mut h = g;
        for (index, level) in self.levels.iter().enumerate().skip(from) {
            let x = h[level.base] as usize;
            match &level.transversal[x] {
                Some((_, u_inv)) => h = compose(u_inv, &h),
                None => return (h, index),
            }
        }
        let depth = self.levels.len();
        (h, depth)
    }

    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let level_index = i - 1;
            match self.find_missing_generator(level_index) {
                Some((residue, depth)) => {
                    if depth == self.levels.len() {
                        let moved = (0..self.n)
                            .find(|&x| residue[x] as usize != x)
                            .expect("non-identity residue");
                        self.levels.push(Level::new(moved, self.n));
                    }
                    for level in &mut self.levels[level_index + 1..=depth] {
                        level.generators.push(residue.clone());
                        level.rebuild_orbit();
                    }
                    i = depth + 1;
                }
                None => i -= 1,
            }
        }
    }

    /// A Schreier generator of `level` that does not sift through the levels
    /// below it.
    fn find_missing_generator(&self, level: usize) -> Option<(Images, usize)> {
        let current = &self.levels[level];
        for &x in &current.orbit {
            let (u_x, _) = current.transversal[x].as_ref().expect("orbit point");
            for s in &current.generators {
                let y = s[x] as usize;
                let (_, u_y_inv) = current.transversal[y].as_ref().expect("orbit is closed");
                let schreier = compose(u_y_inv, &compose(s, u_x));
                if is_identity(&schreier) {
                    continue;
                }
                let (residue, depth) = self.strip(schreier, level + 1);
                if !is_identity(&residue) {
                    return Some((residue, depth));
                }
            }
        }
        None
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * l.orbit.len())
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.n {
            return false;
        }
        let images: Images = p.raw().iter().map(|&x| x as u8).collect();
        let (residue, depth) = self.strip(images, 0);
        depth == self.levels.len() && is_identity(&residue)
    }

    /// Base points, one-based.
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base + 1).collect()
    }
}

/// `|<tau, phi>|` by Schreier–Sims.
pub fn group_order_stabchain(spec: PuzzleSpec) -> Result<BigUint, OracleError> {
    Ok(StabilizerChain::new(spec.n(), &[tau(spec), phi(spec)])?.order())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    Bfs,
    Chain,
}

impl std::str::FromStr for CensusMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bfs" => Ok(CensusMode::Bfs),
            "chain" => Ok(CensusMode::Chain),
            other => Err(format!("unknown census mode {other:?} (expected bfs or chain)")),
        }
    }
}

/// One line of a census: prediction against oracle for a single `(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    pub k: usize,
    pub family: GroupFamily,
    pub predicted_order: String,
    pub oracle_order: String,
    pub oracle: CensusMode,
    pub agree: bool,
    pub diameter: Option<usize>,
    /// Permutations on which membership disagreed with the enumerated set,
    /// when all `n!` were checked.
    pub membership_mismatches: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub n_max: usize,
    pub mode: CensusMode,
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    pub fn disagreements(&self) -> Vec<&CensusRow> {
        self.rows.iter().filter(|r| !r.agree).collect()
    }

    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            writer.serialize(row).expect("census rows serialize to csv");
        }
        String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }
}

pub fn verify_spec_range(n_max: usize, mode: CensusMode) -> Result<CensusReport, OracleError> {
    verify_spec_range_with_limit(n_max, mode, DEFAULT_STATE_LIMIT)
}

/// Compares the classification with an oracle for every `1 <= k <= n <= n_max`.
///
/// In BFS mode a puzzle whose group is too big to enumerate within
/// `state_limit` is checked by the stabilizer chain instead, and for
/// `n <= 8` membership is also compared on every permutation of `S_n`.
pub fn verify_spec_range_with_limit(
    n_max: usize,
    mode: CensusMode,
    state_limit: usize,
) -> Result<CensusReport, OracleError> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for k in 1..=n {
            let spec = PuzzleSpec::new(n, k).expect("1 <= k <= n");
            rows.push(census_row(spec, mode, state_limit)?);
        }
    }
    Ok(CensusReport { n_max, mode, rows })
}

fn census_row(spec: PuzzleSpec, mode: CensusMode, state_limit: usize) -> Result<CensusRow, OracleError> {
    let descriptor = classify(spec);
    let predicted = descriptor.order();
    let enumeration = match mode {
        CensusMode::Bfs => match enumerate_group(spec, state_limit) {
            Ok(result) => Some(result),
            Err(OracleError::LimitExceeded { .. } | OracleError::TooLarge { .. }) => None,
        },
        CensusMode::Chain => None,
    };
    let (oracle_order, oracle, diameter, mismatches) = match &enumeration {
        Some(result) => {
            let mismatches = (spec.n() <= POINTWISE_MAX_DEGREE).then(|| pointwise_mismatches(spec, result));
            (
                BigUint::from(result.count()),
                CensusMode::Bfs,
                Some(result.diameter),
                mismatches,
            )
        }
        None => (group_order_stabchain(spec)?, CensusMode::Chain, None, None),
    };
    Ok(CensusRow {
        n: spec.n(),
        k: spec.k(),
        family: descriptor.family,
        agree: predicted == oracle_order && mismatches.unwrap_or(0) == 0,
        predicted_order: predicted.to_string(),
        oracle_order: oracle_order.to_string(),
        oracle,
        diameter,
        membership_mismatches: mismatches,
    })
}

fn pointwise_mismatches(spec: PuzzleSpec, enumeration: &EnumerationResult) -> u64 {
    let n = spec.n();
    let total: u64 = (1..=n as u64).product();
    (0..total)
        .filter(|&code| {
            let p = unpack(code, n);
            let predicted = is_member(spec, &p).expect("degrees match").member;
            predicted != enumeration.elements.contains(&code)
        })
        .count() as u64
}
