//! Words over `g_2, ..., g_n` (and `α` when `n = 2`).

use std::collections::VecDeque;
use std::fmt;

use crate::element::EventualTranslation;
use crate::error::{Error, Result};
use crate::fsym::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    /// `g_i`, `i ≥ 2`.
    G(usize),
    /// `α`, the transposition of `(1,1)` and `(1,2)`.
    Alpha,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub inv: bool,
}

impl Letter {
    pub const fn g(i: usize) -> Self {
        Letter {
            gen: Gen::G(i),
            inv: false,
        }
    }

    pub const fn g_inv(i: usize) -> Self {
        Letter {
            gen: Gen::G(i),
            inv: true,
        }
    }

    pub const ALPHA: Letter = Letter {
        gen: Gen::Alpha,
        inv: false,
    };

    /// `α` is an involution, so its inverse letter is itself.
    pub fn inverse(self) -> Self {
        match self.gen {
            Gen::Alpha => self,
            Gen::G(_) => Letter {
                gen: self.gen,
                inv: !self.inv,
            },
        }
    }

    pub fn name(&self) -> String {
        match self.gen {
            Gen::G(i) => format!("g{i}"),
            Gen::Alpha => "a".into(),
        }
    }

    pub fn element(&self, n: usize) -> Result<EventualTranslation> {
        match self.gen {
            Gen::G(i) => {
                let g = EventualTranslation::generator(n, i)?;
                Ok(if self.inv { g.inverse() } else { g })
            }
            Gen::Alpha => Ok(EventualTranslation::alpha(n)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    /// Appends `l^e` (`l⁻¹` repeated when `e < 0`).
    pub fn push_pow(&mut self, l: Letter, e: i64) {
        let x = if e < 0 { l.inverse() } else { l };
        self.letters
            .extend(std::iter::repeat_n(x, e.unsigned_abs() as usize));
    }

    pub fn power(l: Letter, e: i64) -> Self {
        let mut w = Word::new();
        w.push_pow(l, e);
        w
    }

    pub fn extend(&mut self, other: &Word) {
        self.letters.extend_from_slice(&other.letters);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Removes adjacent `x x⁻¹` pairs, including `α α`.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last().is_some_and(|&t| t == l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// `h⁻¹ w h`.
    pub fn conjugate(&self, h: &Word) -> Word {
        h.inverse().concat(self).concat(h)
    }

    /// Largest ray index used, or 0 for words in `α` only.
    pub fn max_ray(&self) -> usize {
        self.letters
            .iter()
            .map(|l| match l.gen {
                Gen::G(i) => i,
                Gen::Alpha => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Sum of the letters' translation vectors.
    pub fn pi(&self, n: usize) -> Vec<i64> {
        let mut m = vec![0; n];
        for l in &self.letters {
            if let Gen::G(i) = l.gen {
                let s = if l.inv { -1 } else { 1 };
                m[0] -= s;
                m[i - 1] += s;
            }
        }
        m
    }

    /// Evaluates in `H_n` by moving the points near the junction as stacks, one per ray.
    pub fn evaluate(&self, n: usize) -> Result<EventualTranslation> {
        for l in &self.letters {
            if let Gen::G(i) = l.gen {
                if i < 2 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, n });
                }
            }
        }
        // deepest excursion below the initial stack top on each ray
        let mut level = vec![0i64; n];
        let mut low = vec![0i64; n];
        for l in &self.letters {
            match (l.gen, l.inv) {
                (Gen::G(i), false) => {
                    level[0] -= 1;
                    level[i - 1] += 1;
                }
                (Gen::G(i), true) => {
                    level[i - 1] -= 1;
                    level[0] += 1;
                }
                (Gen::Alpha, _) => {
                    low[0] = low[0].min(level[0] - 2);
                }
            }
            for r in 0..n {
                low[r] = low[r].min(level[r]);
            }
        }
        let depth: Vec<i64> = low.iter().map(|&x| -x).collect();
        let mut rays: Vec<VecDeque<Point>> = (0..n)
            .map(|r| (1..=depth[r]).map(|p| Point::new(r + 1, p)).collect())
            .collect();
        for l in &self.letters {
            match (l.gen, l.inv) {
                (Gen::G(i), false) => {
                    let c = rays[0].pop_front().expect("stack depth");
                    rays[i - 1].push_front(c);
                }
                (Gen::G(i), true) => {
                    let c = rays[i - 1].pop_front().expect("stack depth");
                    rays[0].push_front(c);
                }
                (Gen::Alpha, _) => rays[0].swap(0, 1),
            }
        }
        let m: Vec<i64> = (0..n).map(|r| rays[r].len() as i64 - depth[r]).collect();
        let mut exc = Vec::new();
        for (r, ray) in rays.iter().enumerate() {
            for (q, &car) in ray.iter().enumerate() {
                let img = Point::new(r + 1, q as i64 + 1);
                if img != Point::new(car.ray, car.pos + m[car.ray - 1]) {
                    exc.push((car, img));
                }
            }
        }
        EventualTranslation::new(n, m, exc)
    }

    /// Parses `g2 g3^-1 a g2^4`; the token `1` is the empty word.
    pub fn parse(s: &str) -> Result<Word> {
        let mut w = Word::new();
        for (line_no, line) in s.lines().enumerate() {
            let mut col = 0;
            for tok in line.split_whitespace() {
                let start = line[col..].find(tok).map(|o| o + col).unwrap_or(col);
                col = start + tok.len();
                let column = start + 1;
                let (name, exp) = match tok.split_once('^') {
                    Some((a, b)) => {
                        let e = b.parse::<i64>().map_err(|_| {
                            Error::parse(line_no + 1, column, format!("bad exponent in `{tok}`"))
                        })?;
                        (a, e)
                    }
                    None => (tok, 1),
                };
                if name == "1" {
                    continue;
                }
                let letter = if name == "a" {
                    Letter::ALPHA
                } else if let Some(d) = name.strip_prefix('g') {
                    let i = d.parse::<usize>().ok().filter(|&i| i >= 2).ok_or_else(|| {
                        Error::parse(line_no + 1, column, format!("bad generator `{name}`"))
                    })?;
                    Letter::g(i)
                } else {
                    return Err(Error::parse(
                        line_no + 1,
                        column,
                        format!("unknown generator `{name}`"),
                    ));
                };
                w.push_pow(letter, exp);
            }
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    /// Runs of equal letters print as powers; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut j = 0;
        while j < self.letters.len() {
            let l = self.letters[j];
            let mut k = j;
            while k < self.letters.len() && self.letters[k] == l && l.gen != Gen::Alpha {
                k += 1;
            }
            let run = (k - j).max(1);
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let e = if l.inv { -(run as i64) } else { run as i64 };
            if e == 1 {
                write!(f, "{}", l.name())?;
            } else {
                write!(f, "{}^{}", l.name(), e)?;
            }
            j += run;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word {
            letters: iter.into_iter().collect(),
        }
    }
}
