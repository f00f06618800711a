//! JSON endomorphism configs.
//!
//! ```json
//! {"n": 3, "images": {"g2": {"word": "g2^2", "cycles": "((1,1)(1,2)(2,1))"}, "g3": {...}}}
//! ```
//!
//! Each image is the word's value followed by the cycle permutation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::element::EventualTranslation;
use crate::endo::{Endomorphism, Limits};
use crate::error::{Error, Result};
use crate::fsym::FinitePermutation;
use crate::presentation::{GeneratorImages, DEFAULT_K_MAX};
use crate::word::Word;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<String>,
}

impl ImageSpec {
    pub fn evaluate(&self, n: usize) -> Result<EventualTranslation> {
        let w = match &self.word {
            Some(s) => Word::parse(s)?.evaluate(n)?,
            None => EventualTranslation::identity(n),
        };
        match &self.cycles {
            Some(c) => w.compose(&EventualTranslation::from_fsym(
                &FinitePermutation::parse_cycles(n, c)?,
            )),
            None => Ok(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoConfig {
    pub n: usize,
    pub images: BTreeMap<String, ImageSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ImageSpec>,
}

impl EndoConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn images(&self) -> Result<GeneratorImages> {
        let n = self.n;
        if n < 2 {
            return Err(Error::Precondition(format!("n = {n} is below 2")));
        }
        for key in self.images.keys() {
            let ok = key
                .strip_prefix('g')
                .and_then(|d| d.parse::<usize>().ok())
                .is_some_and(|i| (2..=n).contains(&i));
            if !ok {
                return Err(Error::parse(1, 1, format!("unknown generator `{key}`")));
            }
        }
        let g = (2..=n)
            .map(|i| {
                self.images
                    .get(&format!("g{i}"))
                    .ok_or_else(|| Error::Precondition(format!("no image for g{i}")))?
                    .evaluate(n)
            })
            .collect::<Result<Vec<_>>>()?;
        let alpha = match (&self.alpha, n) {
            (Some(a), 2) => Some(a.evaluate(n)?),
            (None, 2) => return Err(Error::Precondition("H_2 needs an image for α".into())),
            (Some(_), _) => {
                return Err(Error::Precondition(
                    "α is derived from g2, g3 when n ≥ 3".into(),
                ))
            }
            (None, _) => None,
        };
        Ok(GeneratorImages { n, g, alpha })
    }

    pub fn build(&self) -> Result<Endomorphism> {
        Endomorphism::build_with(self.images()?, DEFAULT_K_MAX, Limits::from_env())
    }
}
