//! Finite-support permutations of the ray set `X_n`.

pub mod involution;

pub use involution::{
    commuting_involution_core, find_squares, xi_chi, Hexagon, Square, XiChiReport,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A site `(ray, pos)` of `X_n`; rays are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub ray: usize,
    pub pos: i64,
}

impl Point {
    pub const fn new(ray: usize, pos: i64) -> Self {
        Point { ray, pos }
    }

    pub fn is_valid(&self, n: usize) -> bool {
        self.ray >= 1 && self.ray <= n && self.pos >= 1
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.is_valid(n) {
            Ok(())
        } else {
            Err(Error::InvalidPoint { point: *self, n })
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.ray, self.pos)
    }
}

impl FromStr for Point {
    type Err = Error;

    /// Accepts `(r,p)` or `r,p`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').unwrap_or(t);
        let t = t.strip_suffix(')').unwrap_or(t);
        let mut it = t.split(',');
        let (Some(r), Some(p), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::parse(1, 1, format!("expected a point `r,p`, got `{s}`")));
        };
        let ray = r
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::parse(1, 1, format!("bad ray `{r}`: {e}")))?;
        let pos = p
            .trim()
            .parse::<i64>()
            .map_err(|e| Error::parse(1, 1, format!("bad position `{p}`: {e}")))?;
        Ok(Point { ray, pos })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// Element of `FSym_n`, stored as the sorted list of moved points and their images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePermutation {
    n: usize,
    pairs: Vec<(Point, Point)>,
}

impl FinitePermutation {
    pub fn identity(n: usize) -> Self {
        FinitePermutation { n, pairs: Vec::new() }
    }

    /// Builds from arbitrary `(x, x·p)` pairs; fixed pairs are dropped.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Point)>,
    {
        let mut map = BTreeMap::new();
        for (a, b) in pairs {
            a.check(n)?;
            b.check(n)?;
            if map.insert(a, b).is_some_and(|old| old != b) {
                return Err(Error::NotBijective(format!("{a} has two images")));
            }
        }
        map.retain(|a, b| a != b);
        let sources: BTreeSet<Point> = map.keys().copied().collect();
        let images: BTreeSet<Point> = map.values().copied().collect();
        if images.len() != map.len() {
            return Err(Error::NotBijective("two points share an image".into()));
        }
        if sources != images {
            return Err(Error::NotBijective(
                "moved points are not mapped onto themselves".into(),
            ));
        }
        Ok(FinitePermutation {
            n,
            pairs: map.into_iter().collect(),
        })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, pairs: Vec<(Point, Point)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        FinitePermutation { n, pairs }
    }

    pub fn transposition(n: usize, a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::Degenerate(a));
        }
        Self::from_pairs(n, [(a, b), (b, a)])
    }

    /// A single cycle `a_1 -> a_2 -> ... -> a_k -> a_1`.
    pub fn cycle(n: usize, points: &[Point]) -> Result<Self> {
        let distinct: BTreeSet<_> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::NotBijective("repeated point in cycle".into()));
        }
        if points.len() < 2 {
            return Ok(Self::identity(n));
        }
        let k = points.len();
        Self::from_pairs(n, (0..k).map(|j| (points[j], points[(j + 1) % k])))
    }

    /// Product of cycles applied left to right.
    pub fn from_cycles(n: usize, cycles: &[Vec<Point>]) -> Result<Self> {
        let mut acc = Self::identity(n);
        for c in cycles {
            acc = acc.compose(&Self::cycle(n, c)?)?;
        }
        Ok(acc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(Point, Point)] {
        &self.pairs
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.pairs.iter().map(|&(a, _)| a)
    }

    pub fn support_len(&self) -> usize {
        self.pairs.len()
    }

    pub fn apply(&self, x: Point) -> Point {
        match self.pairs.binary_search_by(|(a, _)| a.cmp(&x)) {
            Ok(j) => self.pairs[j].1,
            Err(_) => x,
        }
    }

    pub fn inverse(&self) -> Self {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(a, b)| (b, a)).collect();
        pairs.sort_unstable();
        FinitePermutation { n: self.n, pairs }
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let domain: BTreeSet<Point> = self.support().chain(other.support()).collect();
        let pairs = domain
            .into_iter()
            .filter_map(|x| {
                let y = other.apply(self.apply(x));
                (y != x).then_some((x, y))
            })
            .collect();
        Ok(FinitePermutation { n: self.n, pairs })
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.n);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base).expect("same ambient");
        }
        acc
    }

    /// Disjoint cycles, each starting at its least point, sorted by that point.
    pub fn cycle_decomposition(&self) -> Vec<Vec<Point>> {
        let mut seen = BTreeSet::new();
        let mut cycles = Vec::new();
        for &(start, _) in &self.pairs {
            if seen.contains(&start) {
                continue;
            }
            let mut c = vec![start];
            seen.insert(start);
            let mut x = self.apply(start);
            while x != start {
                seen.insert(x);
                c.push(x);
                x = self.apply(x);
            }
            cycles.push(c);
        }
        cycles
    }

    pub fn parity(&self) -> Parity {
        let s: usize = self.cycle_decomposition().iter().map(|c| c.len() - 1).sum();
        if s.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn in_falt(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn is_involution(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| self.apply(b) == a)
    }

    pub fn order(&self) -> u64 {
        self.cycle_decomposition()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Transpositions of an involution as `(min, max)` pairs sorted by the first point.
    pub fn transpositions(&self) -> Vec<(Point, Point)> {
        self.pairs
            .iter()
            .filter(|(a, b)| a < b && self.apply(*b) == *a)
            .copied()
            .collect()
    }

    pub fn max_pos(&self) -> i64 {
        self.pairs.iter().map(|(a, _)| a.pos).max().unwrap_or(0)
    }

    /// Parses cycle notation such as `((1,1)(1,2)(2,1))((3,2)(3,3))`.
    pub fn parse_cycles(n: usize, s: &str) -> Result<Self> {
        let cycles = parse_cycle_list(s)?;
        Self::from_cycles(n, &cycles)
    }

    pub fn to_cycle_string(&self) -> String {
        if self.is_identity() {
            return "()".into();
        }
        let mut out = String::new();
        for c in self.cycle_decomposition() {
            out.push('(');
            for p in c {
                out.push_str(&p.to_string());
            }
            out.push(')');
        }
        out
    }
}

impl fmt::Display for FinitePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Tokenizer for cycle notation; reports 1-based columns.
fn parse_cycle_list(s: &str) -> Result<Vec<Vec<Point>>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut cycles = Vec::new();
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    let expect = |i: &mut usize, c: char| -> Result<()> {
        if *i < chars.len() && chars[*i] == c {
            *i += 1;
            Ok(())
        } else {
            Err(Error::parse(1, *i + 1, format!("expected `{c}`")))
        }
    };
    let number = |i: &mut usize| -> Result<i64> {
        let start = *i;
        if *i < chars.len() && chars[*i] == '-' {
            *i += 1;
        }
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        let text: String = chars[start..*i].iter().collect();
        text.parse::<i64>()
            .map_err(|_| Error::parse(1, start + 1, "expected an integer"))
    };
    skip_ws(&mut i);
    while i < chars.len() {
        expect(&mut i, '(')?;
        skip_ws(&mut i);
        let mut cycle = Vec::new();
        while i < chars.len() && chars[i] == '(' {
            i += 1;
            skip_ws(&mut i);
            let col = i + 1;
            let r = number(&mut i)?;
            skip_ws(&mut i);
            expect(&mut i, ',')?;
            skip_ws(&mut i);
            let p = number(&mut i)?;
            skip_ws(&mut i);
            expect(&mut i, ')')?;
            skip_ws(&mut i);
            if r < 1 {
                return Err(Error::parse(1, col, "ray must be positive"));
            }
            cycle.push(Point::new(r as usize, p));
        }
        expect(&mut i, ')')?;
        skip_ws(&mut i);
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
    }
    Ok(cycles)
}
