//! Relation checking for candidate generator images.

use std::collections::BTreeSet;

use crate::element::EventualTranslation;
use crate::error::{Error, Result};
use crate::fsym::Point;
use crate::orbit::{escape_radius, orbit_within, Orbit};

pub const DEFAULT_K_MAX: i64 = 20;

/// Images of `g_2, ..., g_n`, plus `α` when `n = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorImages {
    pub n: usize,
    /// `g[i-2]` is the image of `g_i`.
    pub g: Vec<EventualTranslation>,
    pub alpha: Option<EventualTranslation>,
}

impl GeneratorImages {
    pub fn standard(n: usize) -> Result<Self> {
        Ok(GeneratorImages {
            n,
            g: (2..=n)
                .map(|i| EventualTranslation::generator(n, i))
                .collect::<Result<_>>()?,
            alpha: (n == 2).then(|| EventualTranslation::alpha(2)),
        })
    }

    pub fn gen(&self, i: usize) -> &EventualTranslation {
        &self.g[i - 2]
    }

    /// Image of `α`: `[g_2, g_3]` images for `n ≥ 3`, the explicit image for `n = 2`.
    pub fn alpha_image(&self) -> Result<EventualTranslation> {
        if self.n == 2 {
            self.alpha
                .clone()
                .ok_or_else(|| Error::Precondition("H_2 needs an explicit image for α".into()))
        } else {
            self.gen(2).commutator(self.gen(3))
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 || self.g.len() != self.n - 1 {
            return Err(Error::Precondition(format!(
                "expected {} generator images for H_{}",
                self.n.saturating_sub(1),
                self.n
            )));
        }
        for x in self.g.iter().chain(self.alpha.iter()) {
            if x.n() != self.n {
                return Err(Error::AmbientMismatch {
                    left: self.n,
                    right: x.n(),
                });
            }
        }
        Ok(())
    }
}

/// Outcome of a presentation check that passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub n: usize,
    /// Number of relator evaluations performed.
    pub evaluated: usize,
    /// `H_2` only: beyond this `|k|` the commutation family is decided by residues mod `period`.
    pub threshold: Option<i64>,
    pub period: Option<u64>,
}

fn witness(x: &EventualTranslation) -> Point {
    x.exceptions().first().map(|e| e.0).unwrap_or_else(|| {
        let r = x.pi().iter().position(|&m| m != 0).unwrap_or(0);
        Point::new(r + 1, 1)
    })
}

fn trivial(x: &EventualTranslation, name: impl FnOnce() -> String) -> Result<()> {
    if x.is_identity() {
        Ok(())
    } else {
        Err(Error::RelationFailure {
            relation: name(),
            witness: witness(x),
        })
    }
}

fn equal(x: &EventualTranslation, y: &EventualTranslation, name: impl FnOnce() -> String) -> Result<()> {
    if x == y {
        Ok(())
    } else {
        trivial(&x.compose(&y.inverse())?, name)
    }
}

/// Checks every defining relation on the images; an error names the first violated one.
pub fn check_presentation(images: &GeneratorImages, k_max: i64) -> Result<RelationReport> {
    images.validate()?;
    let n = images.n;
    let a = images.alpha_image()?;
    let g2 = images.gen(2);
    let mut evaluated = 0;
    trivial(&a.pow(2), || "α² = 1".into())?;
    let a_g2 = a.conjugate(g2)?;
    trivial(&a.compose(&a_g2)?.pow(3), || "(αα^{g2})³ = 1".into())?;
    evaluated += 2;
    if n >= 3 {
        trivial(&a.commutator(&a.conjugate(&g2.pow(2))?)?, || {
            "[α, α^{g2²}] = 1".into()
        })?;
        evaluated += 1;
        for i in 2..=n {
            for j in 2..=n {
                if i == j {
                    continue;
                }
                let (gi, gj) = (images.gen(i), images.gen(j));
                equal(&a, &gi.commutator(gj)?, || format!("α = [g{i}, g{j}]"))?;
                equal(&a.conjugate(&gi.inverse())?, &a.conjugate(&gj.inverse())?, || {
                    format!("α^{{g{i}⁻¹}} = α^{{g{j}⁻¹}}")
                })?;
                evaluated += 2;
            }
        }
        return Ok(RelationReport {
            n,
            evaluated,
            threshold: None,
            period: None,
        });
    }
    let commutes = |k: i64| -> Result<()> {
        trivial(&a.commutator(&a.conjugate(&g2.pow(k))?)?, || {
            format!("[α, α^{{g2^{k}}}] = 1")
        })
    };
    for k in 2..=k_max.max(2) {
        commutes(k)?;
        commutes(-k)?;
        evaluated += 2;
    }
    let (threshold, period) = separation_certificate(g2, &a)?;
    let start = threshold.max(k_max).max(1) + 1;
    for k in start..start + period as i64 {
        commutes(k)?;
        commutes(-k)?;
        evaluated += 2;
    }
    Ok(RelationReport {
        n,
        evaluated,
        threshold: Some(threshold),
        period: Some(period),
    })
}

/// For `S = supp a`, returns `(K, P)` such that for `|k| > K` the set `S ∩ S·g^k`,
/// together with the identification it induces, depends only on `k mod P`.
pub fn separation_certificate(g: &EventualTranslation, a: &EventualTranslation) -> Result<(i64, u64)> {
    let support: BTreeSet<Point> = a.exceptions().iter().map(|e| e.0).collect();
    let radius = escape_radius(g).max(a.radius());
    let mut threshold = 0i64;
    let mut period = 1u64;
    for &x in &support {
        match orbit_within(g, x, radius) {
            Orbit::Periodic(c) => {
                let p = c.len() as u64;
                period = period / gcd(period, p) * p;
                if period > 1_000_000 {
                    return Err(Error::ResourceLimit {
                        what: "orbit period",
                        size: period as usize,
                        cap: 1_000_000,
                    });
                }
            }
            Orbit::Escaping { points, start, .. } => {
                for (j, y) in points.iter().enumerate() {
                    if support.contains(y) {
                        threshold = threshold.max((j as i64 - start as i64).abs());
                    }
                }
            }
        }
    }
    Ok((threshold, period))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
