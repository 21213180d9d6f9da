//! Deterministic random impact matrices.
//!
//! The generator is SplitMix64: the state advances by the golden-ratio
//! increment `0x9E3779B97F4A7C15` and each output is mixed with
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! (wrapping arithmetic). The initial state is the seed itself. A uniform
//! double on `[0, 1)` is `(z >> 11) * 2^-53`. Matrices are filled row-major,
//! skipping the diagonal, so any language reproduces the same values.

use crate::error::{Error, Result};
use crate::matrix::{ImpactMatrix, Metric, UnitKind};

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw on `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// An `n x n` synthetic matrix with i.i.d. uniform off-diagonal entries.
///
/// Units are labelled `u1..un` and the id is `rand-{n}-{seed}`.
pub fn random_matrix(n: usize, seed: u64) -> Result<ImpactMatrix> {
    random_matrix_with_units(
        format!("rand-{n}-{seed}"),
        (1..=n).map(|i| format!("u{i}")).collect(),
        seed,
    )
}

/// Like [`random_matrix`], but with caller-supplied id and unit labels.
pub fn random_matrix_with_units(id: impl Into<String>, units: Vec<String>, seed: u64) -> Result<ImpactMatrix> {
    let n = units.len();
    if n == 0 {
        return Err(Error::InvalidMatrix {
            id: id.into(),
            message: "random matrix needs n >= 1".to_owned(),
        });
    }
    let mut rng = SplitMix64::new(seed);
    let rows = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { rng.next_f64() }).collect())
        .collect();
    ImpactMatrix::new(id, UnitKind::Token, Metric::Synthetic, units, rows)
}
