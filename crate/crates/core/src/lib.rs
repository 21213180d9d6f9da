//! Parameter-free syntactic probing of masked language models.
//!
//! The toolkit consumes impact matrices (how much masking one word changes
//! the model's representation of another), induces dependency, constituency
//! and discourse trees from them, and scores those trees against gold
//! treebanks.

pub mod cli;
pub mod constituency;
pub mod dep;
pub mod error;
pub mod heatmap;
pub mod matrix;
pub mod metrics;
pub mod pkm;
pub mod rng;
pub mod treebank;

pub use error::{Error, Result};
pub use matrix::{ImpactMatrix, MatrixCorpus, Metric, UnitKind};
