//! Growth-rate sandwiches for endomorphisms.

use std::fmt;
use std::fmt::Write as _;

use crate::bfs::{word_length_bounded, word_length_lower_bound, WordLength};
use crate::decompose::{element_to_word, transposition_word};
use crate::element::EventualTranslation;
use crate::endo::{Endomorphism, KernelClass, LetterTable};
use crate::error::{Error, Result};
use crate::fsym::{FinitePermutation, Point};
use crate::mono::{mono_profile, stable_thresholds};
use crate::scalar::Real;
use crate::word::{Letter, Word};

pub const DEFAULT_MAX_K: u32 = 12;
pub const MAX_K_CAP: u32 = 40;

/// Longest substituted word kept as an upper-bound candidate.
const SUBSTITUTION_CAP: usize = 200_000;

#[derive(Clone, Debug)]
pub struct GrowthOptions {
    /// BFS is attempted when `upper_k` is at most this.
    pub bfs_depth: usize,
    pub bfs_max_nodes: usize,
    /// `γ` with `φ = inner(γ)`; adds `γ^{-k} g γ^k` as a candidate word.
    pub conjugator: Option<Word>,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            bfs_depth: 6,
            bfs_max_nodes: 2_000_000,
            conjugator: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub k: u32,
    pub lower: u64,
    pub upper: u64,
    pub exact: Option<u64>,
    pub lower_root: Real,
    pub upper_root: Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremTag {
    Automorphism,
    NonMono,
    Mono,
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremTag::Automorphism => "automorphism",
            TheoremTag::NonMono => "non-mono",
            TheoremTag::Mono => "mono",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub expected: Option<Real>,
    pub tag: Option<TheoremTag>,
}

fn root(x: u64, k: u32) -> Real {
    (x as Real).powf(1.0 / k as Real)
}

fn fmt_real(x: Real) -> String {
    format!("{x:.6}")
}

impl GrowthReport {
    /// `[max_k lower_root, inf_k upper_root]`.
    pub fn verdict(&self) -> (Real, Real) {
        let lo = self.rows.iter().map(|r| r.lower_root).fold(0.0, Real::max);
        let hi = self
            .rows
            .iter()
            .map(|r| r.upper_root)
            .fold(Real::INFINITY, Real::min);
        (lo, hi)
    }

    pub fn row(&self, k: u32) -> Option<&GrowthRow> {
        self.rows.iter().find(|r| r.k == k)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,lower,upper,exact,lower_root,upper_root\n");
        for r in &self.rows {
            let exact = r.exact.map(|e| e.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.k,
                r.lower,
                r.upper,
                exact,
                fmt_real(r.lower_root),
                fmt_real(r.upper_root)
            );
        }
        let (a, b) = self.verdict();
        let expected = self.expected.map(fmt_real).unwrap_or_else(|| "none".into());
        let tag = self.tag.map(|t| t.to_string()).unwrap_or_else(|| "none".into());
        let _ = writeln!(
            out,
            "# verdict=[{},{}] expected={expected} tag={tag}",
            fmt_real(a),
            fmt_real(b)
        );
        out
    }

    /// Rows where `upper_root` rose above an earlier row.
    pub fn upper_root_increases(&self) -> Vec<u32> {
        self.rows
            .windows(2)
            .filter(|w| w[1].upper_root > w[0].upper_root + 1e-12)
            .map(|w| w[1].k)
            .collect()
    }
}

fn generator_letters(n: usize) -> Vec<Letter> {
    if n == 2 {
        vec![Letter::g(2), Letter::ALPHA]
    } else {
        (2..=n).map(Letter::g).collect()
    }
}

/// Image words of the generator letters, and their translation skeletons
/// `g_2^{m_2} ... g_n^{m_n}` read off `π`.
struct Recurrence {
    letters: Vec<Letter>,
    images: Vec<Word>,
    skeletons: Vec<Word>,
}

impl Recurrence {
    fn new(phi: &Endomorphism, letters: &[Letter]) -> Self {
        let n = phi.n();
        let images = letters
            .iter()
            .map(|&l| element_to_word(&phi.letter_image(l)).free_reduce())
            .collect();
        let skeletons = letters
            .iter()
            .map(|&l| {
                let m = phi.letter_image(l).pi().clone();
                let mut w = Word::new();
                for i in 2..=n {
                    w.push_pow(Letter::g(i), m[i - 1]);
                }
                w
            })
            .collect();
        Recurrence {
            letters: letters.to_vec(),
            images,
            skeletons,
        }
    }

    /// Replaces every letter of `w` by its previous-level word.
    fn substitute(&self, w: &Word, prev: &[Word]) -> Option<Word> {
        let mut out = Word::new();
        for &x in w.letters() {
            let key = Letter { inv: false, ..x };
            let j = self.letters.iter().position(|&l| l == key)?;
            out.extend(&if x.inv { prev[j].inverse() } else { prev[j].clone() });
            if out.len() > SUBSTITUTION_CAP {
                return None;
            }
        }
        Some(out)
    }

    /// Candidate words for `φ^k(l_j) = g`, given the best words for `φ^{k-1}`.
    fn candidates(&self, j: usize, g: &EventualTranslation, prev: &[Word]) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        if let Some(w) = self.substitute(&self.images[j], prev) {
            out.push(w);
        }
        if let Some(s) = self.substitute(&self.skeletons[j], prev) {
            let s = s.free_reduce();
            let e = s.evaluate(g.n())?;
            let right = e.inverse().compose(g)?;
            out.push(s.concat(&element_to_word(&right)));
            let left = g.compose(&e.inverse())?;
            out.push(element_to_word(&left).concat(&s));
        }
        Ok(out)
    }
}

/// Shortest verified word among the candidates for `g`.
fn best_word(g: &EventualTranslation, candidates: impl IntoIterator<Item = Word>) -> Result<Word> {
    let mut best = element_to_word(g).free_reduce();
    for w in candidates {
        let w = w.free_reduce();
        if w.len() < best.len() && &w.evaluate(g.n())? == g {
            best = w;
        }
    }
    Ok(best)
}

pub fn growth_report(phi: &Endomorphism, max_k: u32, opts: &GrowthOptions) -> Result<GrowthReport> {
    if max_k > MAX_K_CAP {
        return Err(Error::ResourceLimit {
            what: "growth depth",
            size: max_k as usize,
            cap: MAX_K_CAP as usize,
        });
    }
    let n = phi.n();
    let letters = generator_letters(n);
    let tables: Vec<LetterTable> = phi.iterates(max_k)?;
    let rec = Recurrence::new(phi, &letters);
    let gamma = opts.conjugator.as_ref().map(|w| w.free_reduce());
    let mut prev: Vec<Word> = letters.iter().map(|&l| Word::from_letters(vec![l])).collect();
    let mut rows = Vec::with_capacity(max_k as usize);
    for k in 1..=max_k {
        let table = &tables[k as usize];
        let (mut lower, mut upper) = (0u64, 0u64);
        let mut elements = Vec::with_capacity(letters.len());
        let mut next = Vec::with_capacity(letters.len());
        for (j, &l) in letters.iter().enumerate() {
            let g = table.get(l);
            lower = lower.max(word_length_lower_bound(&g));
            let mut cands = rec.candidates(j, &g, &prev)?;
            if let Some(gm) = &gamma {
                let mut p = Word::new();
                for _ in 0..k {
                    p.extend(gm);
                }
                cands.push(Word::from_letters(vec![l]).conjugate(&p));
            }
            let w = best_word(&g, cands)?;
            upper = upper.max(w.len() as u64);
            next.push(w);
            elements.push(g);
        }
        prev = next;
        let mut exact = None;
        if upper as usize <= opts.bfs_depth {
            let mut best = 0u64;
            let mut ok = true;
            for g in &elements {
                match word_length_bounded(g, opts.bfs_depth, opts.bfs_max_nodes) {
                    Ok(WordLength::Exact(d)) => best = best.max(d as u64),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                exact = Some(best);
            }
        }
        rows.push(GrowthRow {
            k,
            lower,
            upper,
            exact,
            lower_root: root(lower, k),
            upper_root: root(upper, k),
        });
    }
    let (tag, expected) = match theorem_expectation(phi) {
        Ok((t, e)) => (Some(t), e),
        Err(_) => (None, None),
    };
    Ok(GrowthReport {
        rows,
        expected,
        tag,
    })
}

/// Growth rate predicted by the classification: `1` for automorphisms
/// (`ℓ = 1`), `ℓ` for other monomorphism candidates, and `sp[φ̄]` (or `1`
/// when `φ(α)` is odd and `φ̄` is nilpotent) when the kernel is nontrivial.
pub fn theorem_expectation(phi: &Endomorphism) -> Result<(TheoremTag, Option<Real>)> {
    match phi.classify_kernel()? {
        KernelClass::MonoCandidate => match mono_profile(phi) {
            Ok(p) if p.ell == 1 => Ok((TheoremTag::Automorphism, Some(1.0))),
            Ok(p) => Ok((TheoremTag::Mono, Some(p.ell as Real))),
            Err(_) => Ok((TheoremTag::Mono, None)),
        },
        _ => {
            let a = phi.abelianization_matrix();
            let odd = phi.alpha_image().to_fsym()?.parity() == crate::fsym::Parity::Odd;
            let v = if odd && a.is_nilpotent() {
                1.0
            } else {
                a.spectral_radius()
            };
            Ok((TheoremTag::NonMono, Some(v)))
        }
    }
}

/// Distance from `expected` to the verdict interval allowed at depth `k`.
pub fn tolerance(max_k: u32) -> Real {
    if max_k >= 12 {
        0.25
    } else {
        0.5
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremCheck {
    pub tag: TheoremTag,
    pub expected: Option<Real>,
    pub verdict: (Real, Real),
    /// Distance from `expected` to the verdict interval.
    pub distance: Option<Real>,
    pub consistent: bool,
}

pub fn theorem_check(phi: &Endomorphism, max_k: u32, opts: &GrowthOptions) -> Result<TheoremCheck> {
    let (tag, expected) = theorem_expectation(phi)?;
    let report = growth_report(phi, max_k, opts)?;
    let (a, b) = report.verdict();
    let distance = expected.map(|e| {
        if e < a {
            a - e
        } else if e > b {
            e - b
        } else {
            0.0
        }
    });
    let consistent = distance.is_some_and(|d| d <= tolerance(max_k));
    Ok(TheoremCheck {
        tag,
        expected,
        verdict: (a, b),
        distance,
        consistent,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranspositionRow {
    pub k: u32,
    /// Number of transpositions in `φ^k(τ)`.
    pub transpositions: usize,
    /// Number of moved points.
    pub support: usize,
    /// Largest moved position.
    pub radius: i64,
    /// `A_0 ℓ^k + s` when thresholds are defined.
    pub radius_bound: Option<i64>,
    pub word_len: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranspositionGrowth {
    pub ell: i64,
    pub rows: Vec<TranspositionRow>,
    /// Least-squares slope of `log(len) - k log ℓ` against `log k` over `k ≥ 1`.
    pub poly_degree: Option<Real>,
}

pub fn transposition_growth(
    phi: &Endomorphism,
    p: Point,
    q: Point,
    max_k: u32,
) -> Result<TranspositionGrowth> {
    if p == q {
        return Err(Error::Degenerate(p));
    }
    let n = phi.n();
    let profile = mono_profile(phi)?;
    for x in [p, q] {
        if !profile.is_essential(x) {
            return Err(Error::Precondition(format!("{x} is not an essential point")));
        }
    }
    let ell = profile.ell;
    let th = stable_thresholds(&profile).ok();
    let a0 = th
        .as_ref()
        .map(|t| [p, q].iter().filter_map(|&x| t.a0(x, ell)).max().unwrap_or(0));
    let tau = EventualTranslation::from_fsym(&FinitePermutation::transposition(n, p, q)?);
    let mut rows = Vec::with_capacity(max_k as usize + 1);
    let mut x = tau;
    for k in 0..=max_k {
        if k > 0 {
            x = phi.apply(&x)?;
        }
        let f = x.to_fsym()?;
        let word_len = if k == 0 {
            transposition_word(p, q, n)?.len() as u64
        } else {
            element_to_word(&x).free_reduce().len() as u64
        };
        let radius_bound = match (&th, a0) {
            (Some(t), Some(a)) if t.is_stable(p) && t.is_stable(q) => {
                Some(a * ell.pow(k) + t.max())
            }
            _ => None,
        };
        rows.push(TranspositionRow {
            k,
            transpositions: f.transpositions().len(),
            support: f.support_len(),
            radius: f.max_pos(),
            radius_bound,
            word_len,
        });
    }
    let pts: Vec<(Real, Real)> = rows
        .iter()
        .filter(|r| r.k >= 1 && r.word_len > 0)
        .map(|r| {
            let k = r.k as Real;
            (k.ln(), (r.word_len as Real).ln() - k * (ell as Real).ln())
        })
        .collect();
    let poly_degree = fit_slope(&pts);
    Ok(TranspositionGrowth {
        ell,
        rows,
        poly_degree,
    })
}

fn fit_slope(pts: &[(Real, Real)]) -> Option<Real> {
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as Real;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: Real = pts.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: Real = pts.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
