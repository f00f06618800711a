//! Word length in the Cayley graph: exact by bidirectional search, and a π lower bound.

use std::collections::HashMap;

use crate::element::EventualTranslation;
use crate::error::{Error, Result};
use crate::word::Letter;

pub const DEFAULT_DEPTH: usize = 12;
pub const DEFAULT_MAX_NODES: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordLength {
    Exact(usize),
    /// `|g|` is larger than the depth limit.
    Exceeded,
}

impl WordLength {
    pub fn exact(self) -> Option<usize> {
        match self {
            WordLength::Exact(d) => Some(d),
            WordLength::Exceeded => None,
        }
    }
}

/// Letters of the standard generating set and their inverses.
pub fn generating_letters(n: usize) -> Vec<Letter> {
    let mut v: Vec<Letter> = (2..=n).flat_map(|i| [Letter::g(i), Letter::g_inv(i)]).collect();
    if n == 2 {
        v.push(Letter::ALPHA);
    }
    v
}

/// `max(‖π(g)‖_∞, ⌈‖π(g)‖₁ / 2⌉)`; each letter moves π by `±(e_i - e_1)`.
pub fn word_length_lower_bound(g: &EventualTranslation) -> u64 {
    let inf = g.pi().iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let one: u64 = g.pi().iter().map(|x| x.unsigned_abs()).sum();
    inf.max(one.div_ceil(2)).max(u64::from(!g.is_identity()))
}

pub fn word_length_exact(g: &EventualTranslation, depth_limit: usize) -> Result<WordLength> {
    word_length_bounded(g, depth_limit, DEFAULT_MAX_NODES)
}

/// Bidirectional breadth-first search from the identity and from `g`, expanding
/// the smaller frontier one full level at a time.
pub fn word_length_bounded(
    g: &EventualTranslation,
    depth_limit: usize,
    max_nodes: usize,
) -> Result<WordLength> {
    if g.is_identity() {
        return Ok(WordLength::Exact(0));
    }
    if word_length_lower_bound(g) as usize > depth_limit {
        return Ok(WordLength::Exceeded);
    }
    let n = g.n();
    let gens: Vec<EventualTranslation> = generating_letters(n)
        .iter()
        .map(|l| l.element(n))
        .collect::<Result<_>>()?;
    let id = EventualTranslation::identity(n);
    let mut seen = [HashMap::from([(id.clone(), 0usize)]), HashMap::from([(g.clone(), 0usize)])];
    let mut frontier = [vec![id], vec![g.clone()]];
    let mut depth = [0usize, 0usize];
    while depth[0] + depth[1] < depth_limit {
        let side = if frontier[0].len() <= frontier[1].len() { 0 } else { 1 };
        if frontier[side].is_empty() {
            break;
        }
        let d = depth[side] + 1;
        let mut next = Vec::new();
        let mut best: Option<usize> = None;
        for x in &frontier[side] {
            for s in &gens {
                let y = x.compose(s)?;
                if seen[side].contains_key(&y) {
                    continue;
                }
                if let Some(&e) = seen[1 - side].get(&y) {
                    best = Some(best.map_or(d + e, |b: usize| b.min(d + e)));
                }
                seen[side].insert(y.clone(), d);
                next.push(y);
            }
        }
        let total = seen[0].len() + seen[1].len();
        if total > max_nodes {
            return Err(Error::ResourceLimit {
                what: "breadth-first search nodes",
                size: total,
                cap: max_nodes,
            });
        }
        depth[side] = d;
        frontier[side] = next;
        if let Some(b) = best {
            return Ok(if b <= depth_limit {
                WordLength::Exact(b)
            } else {
                WordLength::Exceeded
            });
        }
    }
    Ok(WordLength::Exceeded)
}
