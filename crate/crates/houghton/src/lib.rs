#![allow(clippy::needless_range_loop)]

pub mod bfs;
pub mod config;
pub mod decompose;
pub mod element;
pub mod endo;
pub mod error;
pub mod fsym;
pub mod growth;
pub mod mono;
pub mod orbit;
pub mod presentation;
pub mod scalar;
pub mod word;

pub use bfs::{word_length_exact, word_length_lower_bound, WordLength};
pub use decompose::{element_to_word, transposition_word};
pub use element::{coordinate, point_of, EventualTranslation, RayVector};
pub use error::{Error, Result};
pub use fsym::{FinitePermutation, Point};
pub use presentation::{check_presentation, GeneratorImages, RelationReport};
pub use word::{Letter, Word};
pub use endo::{AbelianizationMatrix, Endomorphism, KernelClass, Limits};
pub use scalar::{Real, Real32, Scalar};
pub use config::EndoConfig;
pub use mono::{LabeledTree, MonoProfile, PartialTranslation, Thresholds};
pub use growth::{growth_report, theorem_check, GrowthOptions, GrowthReport, TheoremTag};
