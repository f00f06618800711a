//! Endomorphisms of `H_n` given by generator images.

use std::fmt;

use nalgebra::DMatrix;
use num_traits::Float;

use crate::decompose::element_to_word;
use crate::element::{check_ray_permutation, EventualTranslation};
use crate::error::{Error, Result};
use crate::presentation::{check_presentation, GeneratorImages, RelationReport, DEFAULT_K_MAX};
use crate::scalar::{Real, Scalar};
use crate::word::{Gen, Letter, Word};

pub const DEFAULT_MAX_SUPPORT: usize = 1_000_000;
pub const MAX_SUPPORT_ENV: &str = "HOUGHTON_MAX_SUPPORT";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest exception table an iterate may carry.
    pub max_support: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_support: DEFAULT_MAX_SUPPORT,
        }
    }
}

impl Limits {
    /// Reads `HOUGHTON_MAX_SUPPORT`, falling back to the default.
    pub fn from_env() -> Self {
        let max_support = std::env::var(MAX_SUPPORT_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_SUPPORT);
        Limits { max_support }
    }

    pub fn check(&self, g: &EventualTranslation) -> Result<()> {
        if g.num_exceptions() > self.max_support {
            Err(Error::ResourceLimit {
                what: "exception table",
                size: g.num_exceptions(),
                cap: self.max_support,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelClass {
    MonoCandidate,
    ContainsFAlt,
    ContainsFSym,
}

impl fmt::Display for KernelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelClass::MonoCandidate => "mono-candidate",
            KernelClass::ContainsFAlt => "kernel-contains-FAlt",
            KernelClass::ContainsFSym => "kernel-contains-FSym",
        })
    }
}

/// A verified endomorphism; construction fails unless every relation holds on the images.
#[derive(Clone, Debug)]
pub struct Endomorphism {
    images: GeneratorImages,
    alpha_image: EventualTranslation,
    report: RelationReport,
    limits: Limits,
}

impl Endomorphism {
    pub fn build(images: GeneratorImages) -> Result<Self> {
        Self::build_with(images, DEFAULT_K_MAX, Limits::from_env())
    }

    pub fn build_with(images: GeneratorImages, k_max: i64, limits: Limits) -> Result<Self> {
        let report = check_presentation(&images, k_max)?;
        let alpha_image = images.alpha_image()?;
        Ok(Endomorphism {
            images,
            alpha_image,
            report,
            limits,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::build(GeneratorImages::standard(n)?)
    }

    /// `g_i ↦ g_i^e` for every `i` (`α ↦ α` when `n = 2`, valid only for `e = ±1` there).
    pub fn power_map(n: usize, e: i64) -> Result<Self> {
        let mut imgs = GeneratorImages::standard(n)?;
        for g in imgs.g.iter_mut() {
            *g = g.pow(e);
        }
        Self::build(imgs)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> Result<EventualTranslation>) -> Result<Self> {
        let g = (2..=n).map(&f).collect::<Result<Vec<_>>>()?;
        Self::build(GeneratorImages { n, g, alpha: None })
    }

    /// The inner automorphism `g ↦ h⁻¹ g h`.
    pub fn inner(h: &EventualTranslation) -> Result<Self> {
        let n = h.n();
        let mut imgs = GeneratorImages::standard(n)?;
        for g in imgs.g.iter_mut() {
            *g = g.conjugate(h)?;
        }
        if let Some(a) = imgs.alpha.as_mut() {
            *a = a.conjugate(h)?;
        }
        Self::build(imgs)
    }

    /// `g_i ↦ g_{σ(1)}⁻¹ g_{σ(i)}` with `g_1 = 1`; `sigma[r-1] = σ(r)`.
    pub fn ray_permutation(sigma: &[usize]) -> Result<Self> {
        let n = sigma.len();
        check_ray_permutation(n, sigma)?;
        let g = |r: usize| -> Result<EventualTranslation> {
            if r == 1 {
                Ok(EventualTranslation::identity(n))
            } else {
                EventualTranslation::generator(n, r)
            }
        };
        let mut imgs = GeneratorImages::standard(n)?;
        for i in 2..=n {
            imgs.g[i - 2] = g(sigma[0])?.inverse().compose(&g(sigma[i - 1])?)?;
        }
        if let Some(a) = imgs.alpha.as_mut() {
            *a = a.relabel_rays(sigma)?;
        }
        Self::build(imgs)
    }

    pub fn n(&self) -> usize {
        self.images.n
    }

    pub fn images(&self) -> &GeneratorImages {
        &self.images
    }

    /// Image of `g_i`.
    pub fn image(&self, i: usize) -> &EventualTranslation {
        self.images.gen(i)
    }

    pub fn alpha_image(&self) -> &EventualTranslation {
        &self.alpha_image
    }

    pub fn report(&self) -> &RelationReport {
        &self.report
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn letter_image(&self, l: Letter) -> EventualTranslation {
        let x = match l.gen {
            Gen::G(i) => self.images.gen(i),
            Gen::Alpha => &self.alpha_image,
        };
        if l.inv {
            x.inverse()
        } else {
            x.clone()
        }
    }

    /// Letterwise substitution.
    pub fn apply_word(&self, w: &Word) -> Result<EventualTranslation> {
        let n = self.n();
        for l in w.letters() {
            if let Gen::G(i) = l.gen {
                if i < 2 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, n });
                }
            }
        }
        if n > 2 && w.letters().iter().any(|l| l.gen == Gen::Alpha) {
            return self.apply_word(&expand_alpha(w));
        }
        let mut acc = EventualTranslation::identity(n);
        for &l in w.letters() {
            acc = acc.compose(&self.letter_image(l))?;
            self.limits.check(&acc)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, g: &EventualTranslation) -> Result<EventualTranslation> {
        if g.n() != self.n() {
            return Err(Error::AmbientMismatch {
                left: self.n(),
                right: g.n(),
            });
        }
        self.apply_word(&element_to_word(g))
    }

    /// `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        let n = self.n();
        let g = (2..=n)
            .map(|i| self.apply(other.image(i)))
            .collect::<Result<Vec<_>>>()?;
        let alpha = if n == 2 {
            Some(self.apply(other.alpha_image())?)
        } else {
            None
        };
        Self::build_with(GeneratorImages { n, g, alpha }, DEFAULT_K_MAX, self.limits)
    }

    /// `φ^k` as an endomorphism (`k ≥ 0`).
    pub fn power(&self, k: u32) -> Result<Endomorphism> {
        let n = self.n();
        let g = (2..=n)
            .map(|i| self.iterate(i, k))
            .collect::<Result<Vec<_>>>()?;
        let alpha = if n == 2 {
            Some(self.iterate_letter(Letter::ALPHA, k)?)
        } else {
            None
        };
        Ok(Endomorphism {
            alpha_image: GeneratorImages {
                n,
                g: g.clone(),
                alpha: alpha.clone(),
            }
            .alpha_image()?,
            images: GeneratorImages { n, g, alpha },
            report: self.report.clone(),
            limits: self.limits,
        })
    }

    /// `φ^k(g_i)`.
    pub fn iterate(&self, i: usize, k: u32) -> Result<EventualTranslation> {
        self.iterate_letter(Letter::g(i), k)
    }

    /// `φ^k(l)`.
    pub fn iterate_letter(&self, l: Letter, k: u32) -> Result<EventualTranslation> {
        Ok(self.iterates(k)?.pop().expect("k+1 levels").take(l))
    }

    /// Level tables `φ^j` on every generator letter, `j = 0..=k`, built by
    /// substituting the level `j-1` table into fixed words for the images.
    pub fn iterates(&self, k: u32) -> Result<Vec<LetterTable>> {
        let n = self.n();
        let letters: Vec<Letter> = if n == 2 {
            vec![Letter::g(2), Letter::ALPHA]
        } else {
            (2..=n).map(Letter::g).collect()
        };
        let words: Vec<Word> = letters
            .iter()
            .map(|&l| element_to_word(&self.letter_image(l)))
            .collect();
        let base = LetterTable {
            n,
            entries: letters
                .iter()
                .map(|&l| (l, l.element(n)))
                .map(|(l, e)| e.map(|e| (l, e)))
                .collect::<Result<_>>()?,
        };
        let mut out = vec![base];
        for _ in 0..k {
            let prev = out.last().expect("nonempty");
            let mut entries = Vec::with_capacity(letters.len());
            for (&l, w) in letters.iter().zip(&words) {
                let mut acc = EventualTranslation::identity(n);
                for &x in w.letters() {
                    acc = acc.compose(&prev.get(x))?;
                    self.limits.check(&acc)?;
                }
                entries.push((l, acc));
            }
            out.push(LetterTable { n, entries });
        }
        Ok(out)
    }

    /// `φ^k(g)` by repeated application.
    pub fn iterate_element(&self, g: &EventualTranslation, k: u32) -> Result<EventualTranslation> {
        let mut x = g.clone();
        for _ in 0..k {
            x = self.apply(&x)?;
            self.limits.check(&x)?;
        }
        Ok(x)
    }

    pub fn classify_kernel(&self) -> Result<KernelClass> {
        let a = &self.alpha_image;
        if a.is_identity() {
            return Ok(KernelClass::ContainsFSym);
        }
        let t = a.compose(&a.conjugate(self.image(2))?)?;
        Ok(if t.is_identity() {
            KernelClass::ContainsFAlt
        } else {
            KernelClass::MonoCandidate
        })
    }

    pub fn abelianization_matrix(&self) -> AbelianizationMatrix {
        let n = self.n();
        let cols: Vec<Vec<i64>> = (2..=n).map(|i| self.image(i).pi()[1..].to_vec()).collect();
        AbelianizationMatrix::from_columns(&cols)
    }
}

/// Replaces `a` by `g2 g3 g2⁻¹ g3⁻¹`.
fn expand_alpha(w: &Word) -> Word {
    let mut out = Word::new();
    for &l in w.letters() {
        if l.gen == Gen::Alpha {
            out.extend(&crate::decompose::alpha_word(3));
        } else {
            out.push(l);
        }
    }
    out
}

/// `φ^j` evaluated on the generator letters.
#[derive(Clone, Debug)]
pub struct LetterTable {
    n: usize,
    entries: Vec<(Letter, EventualTranslation)>,
}

impl LetterTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, l: Letter) -> EventualTranslation {
        if l.gen == Gen::Alpha && self.n > 2 {
            return self
                .get(Letter::g(2))
                .commutator(&self.get(Letter::g(3)))
                .expect("same ambient");
        }
        let key = Letter { inv: false, ..l };
        let x = &self
            .entries
            .iter()
            .find(|(m, _)| *m == key)
            .expect("letter in table")
            .1;
        if l.inv {
            x.inverse()
        } else {
            x.clone()
        }
    }

    fn take(mut self, l: Letter) -> EventualTranslation {
        if l.gen == Gen::Alpha && self.n > 2 {
            return self.get(l);
        }
        let key = Letter { inv: false, ..l };
        let j = self.entries.iter().position(|(m, _)| *m == key).expect("letter in table");
        let x = self.entries.swap_remove(j).1;
        if l.inv {
            x.inverse()
        } else {
            x
        }
    }
}

/// Integer matrix of the induced map on `Z^{n-1}` in the basis `ḡ_2, ..., ḡ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationMatrix {
    /// Row-major entries.
    rows: Vec<Vec<i64>>,
}

impl AbelianizationMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        AbelianizationMatrix { rows }
    }

    pub fn from_columns(cols: &[Vec<i64>]) -> Self {
        let d = cols.len();
        let rows = (0..d).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        AbelianizationMatrix { rows }
    }

    pub fn identity(d: usize) -> Self {
        AbelianizationMatrix {
            rows: (0..d)
                .map(|r| (0..d).map(|c| i64::from(r == c)).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.rows[r][c]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.dim();
        AbelianizationMatrix {
            rows: (0..d)
                .map(|r| {
                    (0..d)
                        .map(|c| (0..d).map(|k| self.rows[r][k] * other.rows[k][c]).sum())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim()), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, s: i64) -> Self {
        AbelianizationMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x * s).collect())
                .collect(),
        }
    }

    pub fn trace(&self) -> i64 {
        (0..self.dim()).map(|j| self.rows[j][j]).sum()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.dim() as u32).rows.iter().flatten().all(|&x| x == 0)
    }

    pub fn to_matrix<T: Scalar>(&self) -> DMatrix<T> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |r, c| {
            <T as num_traits::NumCast>::from(self.rows[r][c]).expect("representable entry")
        })
    }

    /// Largest eigenvalue modulus, from a dense Schur decomposition.
    pub fn spectral_radius_in<T: Scalar>(&self) -> T {
        if self.dim() == 0 {
            return T::zero();
        }
        self.to_matrix::<T>()
            .complex_eigenvalues()
            .iter()
            .map(|z| Float::sqrt(z.re * z.re + z.im * z.im))
            .fold(T::zero(), Float::max)
    }

    pub fn spectral_radius(&self) -> Real {
        self.spectral_radius_in::<Real>()
    }

    /// `max_{k ≤ j ≤ 2k} |trace(A^j)|^{1/j}`, an independent estimate from below up to a factor `dim^{1/k}`.
    pub fn trace_root(&self, k: u32) -> Real {
        let mut p = self.pow(k);
        let mut best: Real = 0.0;
        for j in k..=2 * k {
            let t = p.trace().unsigned_abs() as Real;
            if t > 0.0 {
                best = best.max(t.powf(1.0 / j as Real));
            }
            p = p.mul(self);
        }
        best
    }
}

impl fmt::Display for AbelianizationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let v: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", v.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}
