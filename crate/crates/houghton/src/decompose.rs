//! Words for elements: transposition conjugators and the stack-shunting decomposition.

use crate::element::{coordinate, EventualTranslation};
use crate::error::{Error, Result};
use crate::fsym::Point;
use crate::word::{Letter, Word};

fn g(i: usize) -> Letter {
    Letter::g(i)
}

/// `α` as a word: the letter `a` when `n = 2`, otherwise `[g_2, g_3]`.
pub fn alpha_word(n: usize) -> Word {
    if n == 2 {
        Word::from_letters(vec![Letter::ALPHA])
    } else {
        Word::from_letters(vec![g(2), g(3), Letter::g_inv(2), Letter::g_inv(3)])
    }
}

/// Position on the line `X_2 ≅ Z`: `(1,p) ↦ 1-p`, `(2,p) ↦ p`.
fn line_coord(p: Point) -> i64 {
    if p.ray == 1 {
        1 - p.pos
    } else {
        p.pos
    }
}

/// Conjugator `h` with `α^h = (P Q)`.
pub fn transposition_conjugator(p: Point, q: Point, n: usize) -> Result<Word> {
    p.check(n)?;
    q.check(n)?;
    if p == q {
        return Err(Error::Degenerate(p));
    }
    let mut h = Word::new();
    if n == 2 {
        let (a, b) = {
            let (x, y) = (line_coord(p), line_coord(q));
            (x.min(y), x.max(y))
        };
        for _ in 0..(b - a - 1) {
            h.push(g(2));
            h.push(Letter::ALPHA);
        }
        h.push_pow(g(2), a + 1);
        return Ok(h.free_reduce());
    }
    let (mut x, mut y) = (coordinate(p), coordinate(q));
    let on_r1 = |c: (usize, i64)| c.0 == 2 && c.1 <= 0;
    if on_r1(y) && !on_r1(x) {
        std::mem::swap(&mut x, &mut y);
    }
    if on_r1(x) && on_r1(y) {
        // both on R_1
        let (m, mp) = (x.1.min(y.1), x.1.max(y.1));
        h.push(g(2));
        h.push_pow(g(3), m - mp + 1);
        h.push_pow(g(2), mp - 1);
    } else if on_r1(x) {
        let (m, (i, mp)) = (x.1, y);
        if i == 2 {
            h.push(g(2));
            h.push(g(3));
            h.push_pow(g(2), mp - 1);
            h.push_pow(g(3), m - 1);
        } else {
            h.push(g(2));
            h.push_pow(g(i), mp);
            h.push_pow(g(2), m - 1);
        }
    } else if x.0 == y.0 {
        let i = x.0;
        let (mp, m) = (x.1.min(y.1), x.1.max(y.1));
        h.push(g(2));
        h.push_pow(g(3), -(m - mp - 1));
        h.push(Letter::g_inv(2));
        h.push_pow(g(i), m);
    } else {
        let ((i, m), (j, mp)) = (x, y);
        h.push(g(i));
        h.push(g(j));
        h.push_pow(g(i), m - 1);
        h.push_pow(g(j), mp - 1);
    }
    Ok(h.free_reduce())
}

/// Word for the transposition `(P Q)` as `h⁻¹ α h`.
pub fn transposition_word(p: Point, q: Point, n: usize) -> Result<Word> {
    let h = transposition_conjugator(p, q, n)?;
    Ok(alpha_word(n).conjugate(&h).free_reduce())
}

/// Removes the translation part: `g · g_n^{-m_n} ⋯ g_2^{-m_2}`, returning it with the tail word.
fn split_translation(g: &EventualTranslation) -> Result<(EventualTranslation, Word)> {
    let n = g.n();
    let m = g.pi().clone();
    let mut f = g.clone();
    for i in (2..=n).rev() {
        f = f.compose(&EventualTranslation::generator(n, i)?.pow(-m[i - 1]))?;
    }
    let mut tail = Word::new();
    for i in 2..=n {
        tail.push_pow(g_letter(i), m[i - 1]);
    }
    Ok((f, tail))
}

fn g_letter(i: usize) -> Letter {
    Letter::g(i)
}

/// Decomposition through transpositions: strip the translation part, split the
/// remaining finite permutation into transpositions `(x_1 x_j)` and emit each
/// via [`transposition_word`].
pub fn element_to_word_transpositions(g: &EventualTranslation) -> Result<Word> {
    let n = g.n();
    let (f, tail) = split_translation(g)?;
    let mut w = Word::new();
    for c in f.to_fsym()?.cycle_decomposition() {
        for &x in &c[1..] {
            w.extend(&transposition_word(c[0], x, n)?);
        }
    }
    w.extend(&tail);
    Ok(w.free_reduce())
}

/// A word evaluating to `g`; the shorter of the shunting decompositions of `g` and of `g⁻¹`.
pub fn element_to_word(g: &EventualTranslation) -> Word {
    if g.is_identity() {
        return Word::new();
    }
    if g.n() == 2 {
        return line_word(g);
    }
    let direct = shunt_word(g);
    let reverse = shunt_word(&g.inverse()).inverse().free_reduce();
    let mut best = if reverse.len() < direct.len() {
        reverse
    } else {
        direct
    };
    if g.num_exceptions() <= SMALL_SUPPORT {
        if let Ok(t) = element_to_word_transpositions(g) {
            if t.len() < best.len() {
                best = t;
            }
        }
    }
    best
}

/// Up to this many exceptions the transposition decomposition is also tried.
const SMALL_SUPPORT: usize = 16;

/// Rays as stacks with tops at the junction; `g_i` moves the top of `R_1` onto `R_i`.
struct Shunter {
    stacks: Vec<Vec<Point>>,
    letters: Vec<Letter>,
}

impl Shunter {
    fn push(&mut self, i: usize) {
        let c = self.stacks[0].pop().expect("car on R_1");
        self.stacks[i - 1].push(c);
        self.letters.push(Letter::g(i));
    }

    fn pull(&mut self, i: usize) {
        let c = self.stacks[i - 1].pop().expect("car on bin");
        self.stacks[0].push(c);
        self.letters.push(Letter::g_inv(i));
    }

    /// Top `len` cars of `R_1`, top first.
    fn top(&self, len: usize) -> Vec<Point> {
        self.stacks[0].iter().rev().take(len).copied().collect()
    }

    /// Deals `from` (the current top of `R_1`) into bins, then gathers them back as `to`.
    fn pass(&mut self, from: &[Point], to: &[Point], bin: &dyn Fn(Point) -> usize) {
        for &c in from {
            debug_assert_eq!(self.stacks[0].last(), Some(&c));
            self.push(bin(c));
        }
        for &c in to.iter().rev() {
            let b = bin(c);
            debug_assert_eq!(self.stacks[b - 1].last(), Some(&c));
            self.pull(b);
        }
    }
}

/// Packet index per value for the rising sequences of `seq`, where `seq` lists values `0..len`.
fn rising_packets(seq: &[usize]) -> (Vec<usize>, usize) {
    let mut at = vec![0usize; seq.len()];
    for (j, &v) in seq.iter().enumerate() {
        at[v] = j;
    }
    let mut packet = vec![0usize; seq.len()];
    let mut cur = 0;
    for v in 1..seq.len() {
        if at[v] < at[v - 1] {
            cur += 1;
        }
        packet[v] = cur;
    }
    (packet, if seq.is_empty() { 0 } else { cur + 1 })
}

fn digits_needed(count: usize, base: usize) -> usize {
    let mut d = 0;
    let mut reach = 1usize;
    while reach < count {
        reach = reach.saturating_mul(base);
        d += 1;
    }
    d
}

fn digit(x: usize, b: usize, base: usize) -> usize {
    (x / base.pow(b as u32)) % base
}

fn stable_partition(seq: &[Point], key: &dyn Fn(Point) -> usize, base: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(seq.len());
    for d in 0..base {
        out.extend(seq.iter().copied().filter(|&c| key(c) == d));
    }
    out
}

/// Rewrites the top of `R_1` from `s` to `f` with radix passes through the other rays.
fn sort_block(sh: &mut Shunter, s: &[Point], f: &[Point], n: usize) {
    use std::collections::HashMap;
    let base = n - 1;
    let len = s.len();
    if len < 2 || s == f {
        return;
    }
    let idx_s: HashMap<Point, usize> = s.iter().enumerate().map(|(j, &c)| (c, j)).collect();
    let idx_f: HashMap<Point, usize> = f.iter().enumerate().map(|(j, &c)| (c, j)).collect();
    // riffle form: packets are rising runs of `f` read in `s`-order
    let o: Vec<usize> = f.iter().map(|c| idx_s[c]).collect();
    let (pk_a, ra) = rising_packets(&o);
    // unriffle form: packets are rising runs of `s` read in `f`-order
    let t: Vec<usize> = s.iter().map(|c| idx_f[c]).collect();
    let (pk_b, rb) = rising_packets(&t);
    let pa = digits_needed(ra, base);
    let pb = digits_needed(rb, base);
    if pa <= pb {
        let key = |c: Point| pk_a[idx_s[&c]];
        let mut xs = vec![f.to_vec()];
        for b in 0..pa {
            let kb = |c: Point| digit(key(c), b, base);
            let next = stable_partition(xs.last().unwrap(), &kb, base);
            xs.push(next);
        }
        debug_assert_eq!(xs[pa], s);
        for b in (0..pa).rev() {
            let bin = |c: Point| 2 + digit(key(c), b, base);
            sh.pass(&xs[b + 1].clone(), &xs[b].clone(), &bin);
        }
    } else {
        let key = |c: Point| pk_b[idx_f[&c]];
        let mut cur = s.to_vec();
        for b in 0..pb {
            let kb = |c: Point| digit(key(c), b, base);
            let next = stable_partition(&cur, &kb, base);
            let bin = |c: Point| 2 + digit(key(c), b, base);
            sh.pass(&cur, &next, &bin);
            cur = next;
        }
        debug_assert_eq!(cur, f);
    }
}

/// Gathers the exceptional window onto `R_1`, sorts it by radix passes, and deals it out.
fn shunt_word(g: &EventualTranslation) -> Word {
    let n = g.n();
    let m = g.pi();
    let mut d = vec![0i64; n];
    for &(a, b) in g.exceptions() {
        let (ra, rb) = (a.ray - 1, b.ray - 1);
        d[ra] = d[ra].max(a.pos);
        d[rb] = d[rb].max(b.pos - m[rb]);
    }
    for r in 0..n {
        d[r] = d[r].max(-m[r]).max(0);
    }
    let mut sh = Shunter {
        stacks: (0..n)
            .map(|r| (1..=d[r]).rev().map(|p| Point::new(r + 1, p)).collect())
            .collect(),
        letters: Vec::new(),
    };
    for i in 2..=n {
        for _ in 0..d[i - 1] {
            sh.pull(i);
        }
    }
    let total: i64 = d.iter().sum();
    let s = sh.top(total as usize);
    let mut by_target: Vec<(Point, Point)> = s.iter().map(|&c| (g.apply(c), c)).collect();
    by_target.sort_unstable();
    let mut f: Vec<Point> = Vec::with_capacity(s.len());
    for i in 2..=n {
        f.extend(
            by_target
                .iter()
                .filter(|(t, _)| t.ray == i)
                .rev()
                .map(|&(_, c)| c),
        );
    }
    f.extend(by_target.iter().filter(|(t, _)| t.ray == 1).map(|&(_, c)| c));
    sort_block(&mut sh, &s, &f, n);
    for i in 2..=n {
        for _ in 0..(d[i - 1] + m[i - 1]) {
            sh.push(i);
        }
    }
    Word::from_letters(sh.letters).free_reduce()
}

/// `H_2`: strip the translation, then bubble-sort the line with `α^{g_2^j}` swaps.
fn line_word(g: &EventualTranslation) -> Word {
    let m2 = g.pi()[1];
    let f = g
        .compose(&EventualTranslation::generator(2, 2).expect("n = 2").pow(-m2))
        .expect("same ambient");
    let coords: Vec<i64> = f.exceptions().iter().map(|e| line_coord(e.0)).collect();
    let mut w = Word::new();
    if let (Some(&lo), Some(&hi)) = (coords.iter().min(), coords.iter().max()) {
        let width = (hi - lo + 1) as usize;
        let to_point = |z: i64| {
            if z <= 0 {
                Point::new(1, 1 - z)
            } else {
                Point::new(2, z)
            }
        };
        // arr[k]: target coordinate of the point currently at lo + k
        let mut arr: Vec<i64> = (0..width)
            .map(|k| line_coord(f.apply(to_point(lo + k as i64))))
            .collect();
        let mut swaps: Vec<i64> = Vec::new();
        let mut forward = true;
        loop {
            let mut changed = false;
            let ks: Vec<usize> = if forward {
                (1..width).collect()
            } else {
                (1..width).rev().collect()
            };
            for k in ks {
                if arr[k - 1] > arr[k] {
                    arr.swap(k - 1, k);
                    swaps.push(lo + k as i64);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
            forward = !forward;
        }
        let mut cursor = 0i64;
        for j in swaps {
            w.push_pow(Letter::g(2), cursor - j);
            w.push(Letter::ALPHA);
            cursor = j;
        }
        w.push_pow(Letter::g(2), cursor);
    }
    w.push_pow(Letter::g(2), m2);
    w.free_reduce()
}
