//! Spelling-variant generation for noisy-text keyword search.
//!
//! Given a word-vector model and a seed keyword, [`generator::generate_variants`]
//! recursively collects embedding neighbours that stay lexically close to the
//! seed. The remaining modules cover the lexical measures, learning of
//! position weights, and evaluation against labelled data.

pub mod evaluate;
pub mod generator;
pub mod lexical;
pub mod vector_model;
pub mod weights;

#[cfg(feature = "cli")]
pub mod cli;

pub use evaluate::{EvalReport, GoldStandard};
pub use generator::{generate_batch, generate_variants, GenerationConfig, Mode, VariantSet};
pub use lexical::{edit_distance, lev_ratio, weighted_lev_ratio, EditCosts, WeightProfile, WindowSize};
pub use vector_model::{ModelFormat, Neighbor, VectorModel};
