//! Permutations of `{1, ..., n}`.
//!
//! A [`Permutation`] is stored as its image table. Points are one-based at
//! every interface: `p.image(1)` is where `1` goes. Composition is ordinary
//! function composition, so `p.compose(&q)` is the map `x -> p(q(x))` and the
//! right-hand factor acts first.
//!
//! When a permutation describes a puzzle arrangement, it maps each tile to the
//! position it occupies (position 1 is the leftmost turntable slot).

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("permutations act on different point sets ({left} vs {right})")]
    DegreeMismatch { left: usize, right: usize },
    #[error("a permutation must act on at least one point")]
    ZeroDegree,
    #[error("point {point} is outside 1..={n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
    #[error("permutation is not Type I (it does not preserve parity)")]
    NotTypeI,
    #[error("the {0} half of a permutation on one point is empty")]
    EmptyHalf(Half),
}

/// Parity behaviour of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityType {
    /// Odd points go to odd points and even points to even points.
    TypeI,
    /// Every odd point goes to an even point and vice versa. Only possible
    /// when `n` is even.
    TypeII,
    Neither,
}

impl fmt::Display for ParityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityType::TypeI => "Type I",
            ParityType::TypeII => "Type II",
            ParityType::Neither => "neither",
        })
    }
}

/// One of the two parity classes of `{1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    Odd,
    Even,
}

impl Half {
    /// Number of points of this parity in `{1, ..., n}`.
    pub fn size(self, n: usize) -> usize {
        match self {
            Half::Odd => n.div_ceil(2),
            Half::Even => n / 2,
        }
    }

    /// The `i`-th point (one-based) of this parity.
    pub fn point(self, i: usize) -> usize {
        match self {
            Half::Odd => 2 * i - 1,
            Half::Even => 2 * i,
        }
    }

    /// Inverse of [`Half::point`].
    pub fn label(self, point: usize) -> usize {
        point.div_ceil(2)
    }

    pub fn of(point: usize) -> Half {
        if point % 2 == 1 {
            Half::Odd
        } else {
            Half::Even
        }
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Half::Odd => "odd",
            Half::Even => "even",
        })
    }
}

/// A bijection of `{1, ..., n}` with `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PermutationRepr", into = "PermutationRepr")]
pub struct Permutation {
    // zero-based image table
    images: Box<[u32]>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        assert!(n >= 1, "a permutation must act on at least one point");
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from its one-based image table: `images[i - 1]`
    /// is the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Permutation, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        let mut table = Vec::with_capacity(n);
        for &point in images {
            if point == 0 || point > n {
                return Err(PermError::PointOutOfRange { point, n });
            }
            if std::mem::replace(&mut seen[point - 1], true) {
                return Err(PermError::RepeatedPoint(point));
            }
            table.push((point - 1) as u32);
        }
        Ok(Permutation {
            images: table.into_boxed_slice(),
        })
    }

    /// Builds a permutation from disjoint cycles. Singleton cycles are
    /// allowed and ignored.
    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: &[C]) -> Result<Permutation, PermError> {
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut table: Vec<u32> = (0..n as u32).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &point in cycle {
                if point == 0 || point > n {
                    return Err(PermError::PointOutOfRange { point, n });
                }
                if std::mem::replace(&mut seen[point - 1], true) {
                    return Err(PermError::RepeatedPoint(point));
                }
            }
            for (i, &point) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                table[point - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation {
            images: table.into_boxed_slice(),
        })
    }

    /// Parses cycle notation such as `"(1 3 5)(2 6)"`. The identity may be
    /// written as `"()"`, `"id"` or the empty string. Points inside a cycle
    /// are separated by whitespace (commas are tolerated).
    pub fn parse_cycles(text: &str, n: usize) -> Result<Permutation, PermError> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "id" {
            return Permutation::from_cycles::<Vec<usize>>(n, &[]);
        }
        let mut cycles = Vec::new();
        let mut rest = trimmed;
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(PermError::Malformed(format!("expected '(' at {rest:?}")));
            };
            let Some(close) = body.find(')') else {
                return Err(PermError::Malformed("unclosed '('".into()));
            };
            let inner = &body[..close];
            if inner.contains('(') {
                return Err(PermError::Malformed("nested '('".into()));
            }
            let cycle = inner
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| PermError::Malformed(format!("not a point: {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cycle);
            rest = body[close + 1..].trim_start();
        }
        Permutation::from_cycles(n, &cycles)
    }

    /// The arrangement with `tiles[p - 1]` sitting at position `p`.
    pub fn from_tiles(tiles: &[usize]) -> Result<Permutation, PermError> {
        Ok(Permutation::from_images(tiles)?.inverse())
    }

    /// Tiles by position, the inverse of [`Permutation::from_tiles`].
    pub fn tiles(&self) -> Vec<usize> {
        self.inverse().images()
    }

    /// Reads an arrangement written either in cycle notation or as a list of
    /// tiles by position (`"3 1 2"` or `"[3, 1, 2]"`).
    pub fn parse_arrangement(text: &str, n: usize) -> Result<Permutation, PermError> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "id" || trimmed.starts_with('(') {
            return Permutation::parse_cycles(trimmed, n);
        }
        let body = trimmed.strip_prefix('[').and_then(|b| b.strip_suffix(']')).unwrap_or(trimmed);
        let tiles = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| PermError::Malformed(format!("not a tile: {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if tiles.len() != n {
            return Err(PermError::DegreeMismatch {
                left: n,
                right: tiles.len(),
            });
        }
        Permutation::from_tiles(&tiles)
    }

    /// Number of points acted on.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the one-based point `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// One-based image table.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    fn check_degree(&self, other: &Permutation) -> Result<(), PermError> {
        if self.degree() == other.degree() {
            Ok(())
        } else {
            Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            })
        }
    }

    /// `x -> self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(other)?;
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut table = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            table[x as usize] = i as u32;
        }
        Permutation {
            images: table.into_boxed_slice(),
        }
    }

    /// `theta * self * theta^-1`. Its cycles are those of `self` with every
    /// point relabelled through `theta`.
    pub fn conjugated_by(&self, theta: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(theta)?;
        let mut table = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            table[theta.images[i] as usize] = theta.images[x as usize];
        }
        Ok(Permutation {
            images: table.into_boxed_slice(),
        })
    }

    /// `self` raised to an integer power; negative exponents use the inverse.
    pub fn pow(&self, exponent: i64) -> Permutation {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut result = Permutation::identity(self.degree());
        let mut square = base;
        let mut e = exponent.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &square;
            }
            square = &square * &square;
            e >>= 1;
        }
        result
    }

    /// Number of orbits on `{1, ..., n}`, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
            }
        }
        count
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i8 {
        if (self.degree() - self.cycle_count()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.sign() == 1
    }

    pub fn cycles(&self) -> CycleDecomposition {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            cycles.push(cycle);
        }
        CycleDecomposition { degree: n, cycles }
    }

    /// Sorted multiset of cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().cycles.iter().map(Vec::len).collect();
        let moved: usize = lengths.iter().sum();
        lengths.extend(std::iter::repeat_n(1, self.degree() - moved));
        lengths.sort_unstable();
        lengths
    }

    pub fn parity_type(&self) -> ParityType {
        // zero-based storage flips the parity of every point, uniformly
        let preserves = self.images.iter().enumerate().all(|(i, &x)| i % 2 == x as usize % 2);
        if preserves {
            return ParityType::TypeI;
        }
        let swaps = self.images.iter().enumerate().all(|(i, &x)| i % 2 != x as usize % 2);
        if swaps && self.degree() % 2 == 0 {
            ParityType::TypeII
        } else {
            ParityType::Neither
        }
    }

    /// The action of a Type I permutation on one parity class, relabelled so
    /// that the `i`-th point of that class becomes `i`.
    pub fn restrict_half(&self, half: Half) -> Result<Permutation, PermError> {
        if self.parity_type() != ParityType::TypeI {
            return Err(PermError::NotTypeI);
        }
        let size = half.size(self.degree());
        if size == 0 {
            return Err(PermError::EmptyHalf(half));
        }
        let images: Vec<usize> = (1..=size).map(|i| half.label(self.image(half.point(i)))).collect();
        Permutation::from_images(&images)
    }

    /// Reassembles a Type I permutation of `{1, ..., n}` from its two halves.
    /// For `n = 1` the even half is absent and `even` must be `None`.
    pub fn from_halves(n: usize, odd: &Permutation, even: Option<&Permutation>) -> Result<Permutation, PermError> {
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let expect = |p: &Permutation, half: Half| {
            let size = half.size(n);
            if p.degree() == size {
                Ok(())
            } else {
                Err(PermError::DegreeMismatch {
                    left: size,
                    right: p.degree(),
                })
            }
        };
        expect(odd, Half::Odd)?;
        let mut images = vec![0usize; n];
        for i in 1..=odd.degree() {
            images[Half::Odd.point(i) - 1] = Half::Odd.point(odd.image(i));
        }
        match even {
            Some(even) => {
                expect(even, Half::Even)?;
                for i in 1..=even.degree() {
                    images[Half::Even.point(i) - 1] = Half::Even.point(even.image(i));
                }
            }
            None if n >= 2 => return Err(PermError::EmptyHalf(Half::Even)),
            None => {}
        }
        Permutation::from_images(&images)
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.images
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Same as [`Permutation::compose`]; panics on a degree mismatch.
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs).expect("degree mismatch in permutation product")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.cycles().fmt(f)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self.cycles())
    }
}

#[derive(Serialize, Deserialize)]
struct PermutationRepr {
    n: usize,
    images: Vec<usize>,
}

impl TryFrom<PermutationRepr> for Permutation {
    type Error = PermError;

    fn try_from(repr: PermutationRepr) -> Result<Self, Self::Error> {
        if repr.images.len() != repr.n {
            return Err(PermError::DegreeMismatch {
                left: repr.n,
                right: repr.images.len(),
            });
        }
        Permutation::from_images(&repr.images)
    }
}

impl From<Permutation> for PermutationRepr {
    fn from(p: Permutation) -> Self {
        PermutationRepr {
            n: p.degree(),
            images: p.images(),
        }
    }
}

/// Disjoint cycles of a permutation in canonical form: each cycle starts at
/// its smallest point, cycles are ordered by that point, and fixed points are
/// left out.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    degree: usize,
    cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// All orbits, fixed points included as singleton cycles, ordered by
    /// smallest point.
    pub fn with_fixed_points(&self) -> Vec<Vec<usize>> {
        let mut moved = vec![false; self.degree + 1];
        for point in self.cycles.iter().flatten() {
            moved[*point] = true;
        }
        let mut all = self.cycles.clone();
        all.extend((1..=self.degree).filter(|&p| !moved[p]).map(|p| vec![p]));
        all.sort_by_key(|c| c[0]);
        all
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_cycles(self.degree, &self.cycles).expect("canonical cycles are valid")
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in &self.cycles {
            f.write_str("(")?;
            for (i, point) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{point}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let p = cyc("(2 5)(3 4)", 6);
        let q = cyc("(1 4)(2 3)", 6);
        assert_eq!(p.compose(&q).unwrap(), cyc("(1 3 5 2 4)", 6));
        assert_eq!(Permutation::identity(6).compose(&q).unwrap(), q);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn compose_rejects_mismatched_degrees() {
        let err = Permutation::identity(3).compose(&Permutation::identity(4));
        assert_eq!(err, Err(PermError::DegreeMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn inverse_reverses_cycles() {
        assert!(Permutation::identity(5).inverse().is_identity());
        assert_eq!(cyc("(1 2 3 4)", 4).inverse(), cyc("(4 3 2 1)", 4));
        assert_eq!(cyc("(1 2 3 4)", 4).inverse().to_string(), "(1 4 3 2)");
        assert_eq!(cyc("(1 3 5)(2 6)", 6).inverse(), cyc("(1 5 3)(2 6)", 6));
    }

    #[test]
    fn conjugation_relabels_cycles() {
        let theta = cyc("(1 2 3 4)", 6);
        let sigma = cyc("(1 3 5)(2 6)", 6);
        assert_eq!(sigma.conjugated_by(&theta).unwrap().to_string(), "(2 4 5)(3 6)");
        assert_eq!(sigma.conjugated_by(&Permutation::identity(6)).unwrap(), sigma);
        assert!(Permutation::identity(6).conjugated_by(&theta).unwrap().is_identity());
    }

    #[test]
    fn signs() {
        assert_eq!(Permutation::identity(7).sign(), 1);
        let tau20 = Permutation::from_cycles(20, &[(1..=20).collect::<Vec<_>>()]).unwrap();
        assert_eq!(tau20.sign(), -1);
        assert_eq!(cyc("(1 5)(2 4)", 5).sign(), 1);
    }

    #[test]
    fn parse_and_print() {
        let p = cyc("(1 3 5)(2 6)", 6);
        assert_eq!(p.images(), vec![3, 6, 5, 4, 1, 2]);
        assert!(Permutation::identity(4).cycles().cycles().is_empty());
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert!(cyc("id", 3).is_identity());
        assert_eq!(cyc("(3 1)", 3).to_string(), "(1 3)");
        let piles = cyc("(1 6 9 12 13 20 19 10 3 8 7 2 11 14)(4 5)(15 16 17 18)", 20);
        assert_eq!(piles.degree(), 20);
        assert_eq!(piles.cycle_count(), 3);
    }

    #[test]
    fn tile_lists() {
        let closing = Permutation::from_tiles(&[9, 10, 7, 6, 13, 2, 1, 4, 3, 12, 11, 14, 5, 8]).unwrap();
        assert_eq!(closing.to_string(), "(1 7 3 9)(2 6 4 8 14 12 10)(5 13)");
        assert_eq!(closing.tiles(), vec![9, 10, 7, 6, 13, 2, 1, 4, 3, 12, 11, 14, 5, 8]);
        assert_eq!(Permutation::parse_arrangement("[2, 3, 1]", 3).unwrap(), cyc("(1 3 2)", 3));
        assert_eq!(Permutation::parse_arrangement("2 3 1", 3).unwrap(), cyc("(1 3 2)", 3));
        assert_eq!(Permutation::parse_arrangement("(1 2)", 3).unwrap(), cyc("(1 2)", 3));
        assert!(Permutation::parse_arrangement("id", 4).unwrap().is_identity());
        assert!(Permutation::parse_arrangement("1 2", 3).is_err());
        assert!(Permutation::parse_arrangement("1 1 2", 3).is_err());
        assert!(Permutation::parse_arrangement("1 x 2", 3).is_err());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Permutation::parse_cycles("(1 2)(2 3)", 3), Err(PermError::RepeatedPoint(2)));
        assert_eq!(
            Permutation::parse_cycles("(1 9)", 3),
            Err(PermError::PointOutOfRange { point: 9, n: 3 })
        );
        assert!(matches!(Permutation::parse_cycles("(1 2", 3), Err(PermError::Malformed(_))));
        assert!(matches!(Permutation::parse_cycles("1 2)", 3), Err(PermError::Malformed(_))));
        assert!(matches!(Permutation::parse_cycles("(1 x)", 3), Err(PermError::Malformed(_))));
        assert_eq!(Permutation::from_images(&[1, 1]), Err(PermError::RepeatedPoint(1)));
        assert_eq!(Permutation::from_images(&[]), Err(PermError::ZeroDegree));
    }

    #[test]
    fn parity_types() {
        assert_eq!(cyc("(1 3 5)(2 6)", 6).parity_type(), ParityType::TypeI);
        assert_eq!(cyc("(1 2 3 4)", 4).parity_type(), ParityType::TypeII);
        assert_eq!(cyc("(1 2 3 4)", 6).parity_type(), ParityType::Neither);
        assert_eq!(Permutation::identity(5).parity_type(), ParityType::TypeI);
        // an odd degree never admits a parity swap
        assert_eq!(cyc("(1 2)", 3).parity_type(), ParityType::Neither);
    }

    #[test]
    fn halves() {
        let p = cyc("(1 3 5)(2 6)", 6);
        let odd = p.restrict_half(Half::Odd).unwrap();
        let even = p.restrict_half(Half::Even).unwrap();
        assert_eq!(odd, cyc("(1 2 3)", 3));
        assert_eq!(even, cyc("(1 3)", 3));
        assert_eq!(Permutation::from_halves(6, &odd, Some(&even)).unwrap(), p);

        let tau_sq = Permutation::from_cycles(8, &[(1..=8).collect::<Vec<_>>()]).unwrap().pow(2);
        assert_eq!(tau_sq.to_string(), "(1 3 5 7)(2 4 6 8)");
        assert_eq!(tau_sq.restrict_half(Half::Odd).unwrap(), cyc("(1 2 3 4)", 4));

        let id = Permutation::identity(7);
        assert!(id.restrict_half(Half::Odd).unwrap().is_identity());
        assert!(id.restrict_half(Half::Even).unwrap().is_identity());
        assert_eq!(cyc("(1 2)", 4).restrict_half(Half::Odd), Err(PermError::NotTypeI));
        assert_eq!(
            Permutation::identity(1).restrict_half(Half::Even),
            Err(PermError::EmptyHalf(Half::Even))
        );
    }

    #[test]
    fn cycle_counts() {
        assert_eq!(Permutation::identity(5).cycle_count(), 5);
        assert_eq!(cyc("(1 2 3 4 5)", 5).cycle_count(), 1);
    }

    #[test]
    fn json_form() {
        let p = cyc("(1 3 5)(2 6)", 6);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"n":6,"images":[3,6,5,4,1,2]}"#);
        assert_eq!(serde_json::from_str::<Permutation>(&text).unwrap(), p);
        assert!(serde_json::from_str::<Permutation>(r#"{"n":3,"images":[1,1,2]}"#).is_err());
        assert!(serde_json::from_str::<Permutation>(r#"{"n":4,"images":[1,2,3]}"#).is_err());
    }

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n).prop_flat_map(|n| {
            Just((1..=n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::from_images(&v).unwrap())
        })
    }

    fn arb_pair(max_n: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
        (1..=max_n).prop_flat_map(|n| {
            let one = Just((1..=n).collect::<Vec<_>>()).prop_shuffle();
            (one.clone(), one).prop_map(|(a, b)| {
                (Permutation::from_images(&a).unwrap(), Permutation::from_images(&b).unwrap())
            })
        })
    }

    fn type_i_of_half(m: usize) -> impl Strategy<Value = Permutation> {
        let half = Just((1..=m).collect::<Vec<_>>()).prop_shuffle();
        (half.clone(), half).prop_map(move |(a, b)| {
            let odd = Permutation::from_images(&a).unwrap();
            let even = Permutation::from_images(&b).unwrap();
            Permutation::from_halves(2 * m, &odd, Some(&even)).unwrap()
        })
    }

    fn arb_type_i(max_half: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_half).prop_flat_map(type_i_of_half)
    }

    fn arb_type_i_pair(max_half: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
        (1..=max_half).prop_flat_map(|m| (type_i_of_half(m), type_i_of_half(m)))
    }

    proptest! {
        #[test]
        fn tile_lists_round_trip(p in arb_perm(16)) {
            prop_assert_eq!(Permutation::from_tiles(&p.tiles()).unwrap(), p.clone());
            let text = p.tiles().iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
            prop_assert_eq!(Permutation::parse_arrangement(&text, p.degree()).unwrap(), p);
        }

        #[test]
        fn products_stay_bijective((p, q) in arb_pair(12)) {
            let r = p.compose(&q).unwrap();
            prop_assert!(Permutation::from_images(&r.images()).is_ok());
            prop_assert!(Permutation::from_images(&p.inverse().images()).is_ok());
        }

        #[test]
        fn conjugation_preserves_cycle_type((theta, sigma) in arb_pair(12)) {
            prop_assert_eq!(sigma.conjugated_by(&theta).unwrap().cycle_type(), sigma.cycle_type());
            let by_product = &(&theta * &sigma) * &theta.inverse();
            prop_assert_eq!(sigma.conjugated_by(&theta).unwrap(), by_product);
        }

        #[test]
        fn sign_is_multiplicative((p, q) in arb_pair(12)) {
            prop_assert_eq!((&p * &q).sign(), p.sign() * q.sign());
        }

        #[test]
        fn sign_matches_cycle_count(p in arb_perm(14)) {
            let expected = if (p.degree() - p.cycle_count()) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(p.sign(), expected);
        }

        #[test]
        fn cycle_text_round_trips(p in arb_perm(14)) {
            prop_assert_eq!(p.cycles().to_permutation(), p.clone());
            prop_assert_eq!(Permutation::parse_cycles(&p.to_string(), p.degree()).unwrap(), p);
        }

        #[test]
        fn pow_agrees_with_repeated_product(p in arb_perm(9), e in -7i64..7) {
            let mut expected = Permutation::identity(p.degree());
            let step = if e < 0 { p.inverse() } else { p.clone() };
            for _ in 0..e.unsigned_abs() {
                expected = &expected * &step;
            }
            prop_assert_eq!(p.pow(e), expected);
        }

        #[test]
        fn parity_types_compose((a, b) in arb_type_i_pair(6)) {
            let n = a.degree();
            let tau = Permutation::from_cycles(n, &[(1..=n).collect::<Vec<_>>()]).unwrap();
            let a2 = &tau * &a;
            let b2 = &b * &tau;
            prop_assert_eq!((&a * &b).parity_type(), ParityType::TypeI);
            if n >= 2 {
                prop_assert_eq!(a2.parity_type(), ParityType::TypeII);
                prop_assert_eq!((&a * &b2).parity_type(), ParityType::TypeII);
                prop_assert_eq!((&a2 * &b2).parity_type(), ParityType::TypeI);
            }
        }

        #[test]
        fn halves_determine_type_i(p in arb_type_i(7)) {
            let odd = p.restrict_half(Half::Odd).unwrap();
            let even = p.restrict_half(Half::Even).unwrap();
            prop_assert_eq!(Permutation::from_halves(p.degree(), &odd, Some(&even)).unwrap(), p);
        }
    }
}
