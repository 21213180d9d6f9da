//! Impact matrices and matrix corpora.
//!
//! An impact matrix `F` holds, for every ordered pair of units, how strongly
//! perturbing unit `j` changes the representation of unit `i`. Rows are the
//! affected unit, columns the perturbed unit. The diagonal is fixed at zero
//! and carries no information.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether the units of a matrix are words or multi-token spans (EDUs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKind {
    Token,
    Span,
}

/// The perturbation measure that produced the matrix values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Dist,
    Prob,
    Synthetic,
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitKind::Token => "token",
            UnitKind::Span => "span",
        })
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Dist => "dist",
            Metric::Prob => "prob",
            Metric::Synthetic => "synthetic",
        })
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dist" => Ok(Metric::Dist),
            "prob" => Ok(Metric::Prob),
            "synthetic" => Ok(Metric::Synthetic),
            other => Err(format!("unknown metric {other:?}")),
        }
    }
}

/// A validated square impact matrix over `T >= 1` units.
#[derive(Clone, Debug, PartialEq)]
pub struct ImpactMatrix {
    id: String,
    kind: UnitKind,
    metric: Metric,
    units: Vec<String>,
    values: Vec<f64>,
}

impl ImpactMatrix {
    /// Build a matrix from row-major nested values.
    ///
    /// Fails if the matrix is empty, not square with side `units.len()`,
    /// contains non-finite entries, or has a non-zero diagonal.
    pub fn new(
        id: impl Into<String>,
        kind: UnitKind,
        metric: Metric,
        units: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let id = id.into();
        let invalid = |message: String| Error::InvalidMatrix {
            id: id.clone(),
            message,
        };

        let n = units.len();
        if n == 0 {
            return Err(invalid("matrix has no units".to_owned()));
        }
        if rows.len() != n {
            return Err(invalid(format!(
                "dimension mismatch: {} units but {} rows",
                n,
                rows.len()
            )));
        }

        let mut values = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(invalid(format!(
                    "dimension mismatch: row {} has {} columns, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            for (j, v) in row.into_iter().enumerate() {
                if !v.is_finite() {
                    return Err(invalid(format!("non-finite entry at ({}, {})", i + 1, j + 1)));
                }
                if i == j && v != 0.0 {
                    return Err(invalid(format!("diagonal entry {} is {}, must be 0", i + 1, v)));
                }
                values.push(v);
            }
        }

        Ok(ImpactMatrix {
            id,
            kind,
            metric,
            units,
            values,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> UnitKind {
        self.kind
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    /// Number of units `T`.
    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Impact of unit `j` on unit `i`, both 0-based.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    /// Row `i` (0-based) as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.len())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Minimum and maximum over all entries, diagonal included.
    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Restrict the matrix to the given 0-based unit indices, in order.
    pub fn submatrix(&self, keep: &[usize]) -> Result<ImpactMatrix> {
        if let Some(&bad) = keep.iter().find(|&&k| k >= self.len()) {
            return Err(Error::Index(format!(
                "unit {} outside matrix {:?} with {} units",
                bad + 1,
                self.id,
                self.len()
            )));
        }
        let units = keep.iter().map(|&k| self.units[k].clone()).collect();
        let rows = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        ImpactMatrix::new(self.id.clone(), self.kind, self.metric, units, rows)
    }

    /// Copy of this matrix under a different id.
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }
}

/// An ordered collection of matrices sharing one kind and metric.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixCorpus {
    pub kind: UnitKind,
    pub metric: Metric,
    pub meta: BTreeMap<String, serde_json::Value>,
    matrices: Vec<ImpactMatrix>,
}

impl MatrixCorpus {
    pub fn new(kind: UnitKind, metric: Metric) -> Self {
        MatrixCorpus {
            kind,
            metric,
            meta: BTreeMap::new(),
            matrices: Vec::new(),
        }
    }

    /// Build a corpus from matrices, checking id uniqueness and homogeneity.
    pub fn from_matrices(
        kind: UnitKind,
        metric: Metric,
        matrices: impl IntoIterator<Item = ImpactMatrix>,
    ) -> Result<Self> {
        let mut corpus = MatrixCorpus::new(kind, metric);
        for m in matrices {
            corpus.push(m)?;
        }
        Ok(corpus)
    }

    pub fn push(&mut self, matrix: ImpactMatrix) -> Result<()> {
        if matrix.kind() != self.kind {
            return Err(Error::MixedCorpus {
                field: "kind",
                first: self.kind.to_string(),
                other: matrix.kind().to_string(),
            });
        }
        if matrix.metric() != self.metric {
            return Err(Error::MixedCorpus {
                field: "metric",
                first: self.metric.to_string(),
                other: matrix.metric().to_string(),
            });
        }
        if self.matrices.iter().any(|m| m.id() == matrix.id()) {
            return Err(Error::DuplicateId(matrix.id().to_owned()));
        }
        self.matrices.push(matrix);
        Ok(())
    }

    pub fn matrices(&self) -> &[ImpactMatrix] {
        &self.matrices
    }

    pub fn get(&self, id: &str) -> Option<&ImpactMatrix> {
        self.matrices.iter().find(|m| m.id() == id)
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn ids(&self) -> HashSet<&str> {
        self.matrices.iter().map(ImpactMatrix::id).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("w{i}")).collect()
    }

    #[test]
    fn rejects_non_square() {
        let err = ImpactMatrix::new(
            "s1",
            UnitKind::Token,
            Metric::Dist,
            units(2),
            vec![vec![0.0, 1.0], vec![2.0, 0.0], vec![3.0, 4.0]],
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("s1") && msg.contains("dimension mismatch"), "{msg}");
    }

    #[test]
    fn rejects_nonzero_diagonal_and_nan() {
        assert!(ImpactMatrix::new(
            "d",
            UnitKind::Token,
            Metric::Dist,
            units(2),
            vec![vec![1.0, 1.0], vec![2.0, 0.0]],
        )
        .is_err());
        assert!(ImpactMatrix::new(
            "n",
            UnitKind::Token,
            Metric::Dist,
            units(2),
            vec![vec![0.0, f64::NAN], vec![2.0, 0.0]],
        )
        .is_err());
    }

    #[test]
    fn submatrix_keeps_order() {
        let m = ImpactMatrix::new(
            "s",
            UnitKind::Token,
            Metric::Prob,
            units(3),
            vec![vec![0.0, 1.0, 2.0], vec![3.0, 0.0, 4.0], vec![5.0, 6.0, 0.0]],
        )
        .unwrap();
        let sub = m.submatrix(&[0, 2]).unwrap();
        assert_eq!(sub.to_rows(), vec![vec![0.0, 2.0], vec![5.0, 0.0]]);
        assert_eq!(sub.units(), &["w1".to_owned(), "w3".to_owned()]);
    }

    #[test]
    fn corpus_rejects_duplicates_and_mixing() {
        let m = |id: &str, metric| ImpactMatrix::new(id, UnitKind::Token, metric, units(1), vec![vec![0.0]]).unwrap();
        let mut c = MatrixCorpus::new(UnitKind::Token, Metric::Dist);
        c.push(m("a", Metric::Dist)).unwrap();
        assert!(matches!(c.push(m("a", Metric::Dist)), Err(Error::DuplicateId(_))));
        assert!(matches!(c.push(m("b", Metric::Prob)), Err(Error::MixedCorpus { .. })));
    }
}
