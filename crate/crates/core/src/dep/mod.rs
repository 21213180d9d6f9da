//! Dependency tree induction from impact matrices.
//!
//! Unit positions are 1-based throughout this module, matching the CoNLL-U
//! `HEAD` column: `heads[d - 1] == h` means unit `h` governs unit `d`, and
//! `h == 0` marks the artificial root.

mod cle;
mod eisner;

pub use cle::cle;
pub use eisner::eisner;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ImpactMatrix;

/// A rooted dependency tree over `n` units.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DepTree {
    heads: Vec<usize>,
}

impl DepTree {
    /// Validate a head vector: exactly one root, no self loops, no cycles.
    pub fn new(heads: Vec<usize>) -> Result<Self> {
        validate_heads(&heads)?;
        Ok(DepTree { heads })
    }

    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heads.is_empty()
    }

    pub fn heads(&self) -> &[usize] {
        &self.heads
    }

    /// Head of the 1-based unit `dep`.
    pub fn head(&self, dep: usize) -> usize {
        self.heads[dep - 1]
    }

    /// The unit attached to the artificial root.
    pub fn root(&self) -> usize {
        self.heads.iter().position(|&h| h == 0).map_or(0, |p| p + 1)
    }

    /// True if no two arcs cross, counting the arc from the artificial root.
    pub fn is_projective(&self) -> bool {
        let arcs: Vec<(usize, usize)> = self
            .heads
            .iter()
            .enumerate()
            .map(|(d, &h)| (h.min(d + 1), h.max(d + 1)))
            .collect();
        arcs.iter().all(|&(a, b)| {
            arcs.iter()
                .all(|&(c, d)| !((a < c && c < b && b < d) || (c < a && a < d && d < b)))
        })
    }
}

impl fmt::Display for DepTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.heads)
    }
}

pub(crate) fn validate_heads(heads: &[usize]) -> Result<()> {
    let n = heads.len();
    let mut roots = 0;
    for (i, &h) in heads.iter().enumerate() {
        if h > n {
            return Err(Error::InvalidTree(format!(
                "unit {} has head {} outside 0..={}",
                i + 1,
                h,
                n
            )));
        }
        if h == i + 1 {
            return Err(Error::InvalidTree(format!("unit {} heads itself", i + 1)));
        }
        if h == 0 {
            roots += 1;
        }
    }
    if n > 0 && roots != 1 {
        return Err(Error::InvalidTree(format!("expected exactly one root, found {roots}")));
    }

    // Walk up from every unit; a path longer than n means a cycle.
    let mut state = vec![0u8; n + 1]; // 0 unseen, 1 on path, 2 reaches root
    state[0] = 2;
    for start in 1..=n {
        let mut path = Vec::new();
        let mut cur = start;
        while state[cur] == 0 {
            state[cur] = 1;
            path.push(cur);
            cur = heads[cur - 1];
        }
        if state[cur] == 1 {
            return Err(Error::InvalidTree(format!("cycle through unit {cur}")));
        }
        for p in path {
            state[p] = 2;
        }
    }
    Ok(())
}

/// How an impact matrix entry becomes an arc score.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScoreDirection {
    /// Arc `h -> d` scores `F[d][h]`: the head's impact on the dependent.
    #[default]
    HeadImpactsDep,
    /// Arc `h -> d` scores `F[h][d]`.
    DepImpactsHead,
    /// Mean of both directions.
    Symmetric,
}

impl FromStr for ScoreDirection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "h2d" | "head_impacts_dep" => Ok(ScoreDirection::HeadImpactsDep),
            "d2h" | "dep_impacts_head" => Ok(ScoreDirection::DepImpactsHead),
            "sym" | "symmetric" => Ok(ScoreDirection::Symmetric),
            other => Err(format!("unknown score direction {other:?}")),
        }
    }
}

/// Where the root of a decoded tree comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMode {
    /// A given 1-based unit, usually the gold root.
    Gold(usize),
    /// The row-sum argmax of the impact matrix, see [`infer_root`].
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreOptions {
    pub direction: ScoreDirection,
    /// Exponent of the `|h - d|^-beta` short-arc bias; 0 disables it.
    pub distance_bias_beta: f64,
    pub root_mode: RootMode,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        ScoreOptions {
            direction: ScoreDirection::HeadImpactsDep,
            distance_bias_beta: 0.0,
            root_mode: RootMode::Heuristic,
        }
    }
}

impl ScoreOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.distance_bias_beta >= 0.0 && self.distance_bias_beta.is_finite()) {
            return Err(Error::Index(format!(
                "distance bias must be a finite value >= 0, got {}",
                self.distance_bias_beta
            )));
        }
        if let RootMode::Gold(0) = self.root_mode {
            return Err(Error::Index("gold root must be >= 1".to_owned()));
        }
        Ok(())
    }

    /// Resolve the root unit for a matrix.
    pub fn root_for(&self, m: &ImpactMatrix) -> Result<usize> {
        match self.root_mode {
            RootMode::Gold(r) if r >= 1 && r <= m.len() => Ok(r),
            RootMode::Gold(r) => Err(Error::Index(format!(
                "gold root {} outside 1..={} for {:?}",
                r,
                m.len(),
                m.id()
            ))),
            RootMode::Heuristic => Ok(infer_root(m)),
        }
    }
}

/// Dense arc-score matrix, `score(h, d)` for 1-based `h != d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcScores {
    n: usize,
    data: Vec<f64>,
}

impl ArcScores {
    /// Build scores from a closure over 1-based `(head, dep)`; the diagonal
    /// is never queried and stored as 0.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for h in 1..=n {
            for d in 1..=n {
                if h != d {
                    data[(h - 1) * n + (d - 1)] = f(h, d);
                }
            }
        }
        ArcScores { n, data }
    }

    /// From row-major nested rows, `rows[h-1][d-1]`; diagonal ignored.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        ArcScores::from_fn(rows.len(), |h, d| rows[h - 1][d - 1])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn score(&self, head: usize, dep: usize) -> f64 {
        self.data[(head - 1) * self.n + (dep - 1)]
    }

    /// Sum of arc scores of a tree; the root attachment contributes nothing.
    pub fn tree_score(&self, tree: &DepTree) -> f64 {
        tree.heads()
            .iter()
            .enumerate()
            .filter(|(_, &h)| h != 0)
            .map(|(d, &h)| self.score(h, d + 1))
            .sum()
    }

    /// Same scores shifted by `c` and scaled by `lambda` off the diagonal.
    pub fn affine(&self, lambda: f64, c: f64) -> ArcScores {
        ArcScores::from_fn(self.n, |h, d| lambda * self.score(h, d) + c)
    }
}

/// Map an impact matrix to arc scores.
///
/// `S[h][d] = base(h, d) * |h - d|^-beta`, with `base` picked by the
/// direction option.
pub fn arc_scores(m: &ImpactMatrix, opts: &ScoreOptions) -> ArcScores {
    let beta = opts.distance_bias_beta;
    ArcScores::from_fn(m.len(), |h, d| {
        let (hi, di) = (h - 1, d - 1);
        let base = match opts.direction {
            ScoreDirection::HeadImpactsDep => m.get(di, hi),
            ScoreDirection::DepImpactsHead => m.get(hi, di),
            ScoreDirection::Symmetric => (m.get(di, hi) + m.get(hi, di)) / 2.0,
        };
        if beta == 0.0 {
            base
        } else {
            base * (h.abs_diff(d) as f64).powf(-beta)
        }
    })
}

/// The unit with the largest row sum of `F`; ties go to the smaller index.
pub fn infer_root(m: &ImpactMatrix) -> usize {
    let mut best = 1;
    let mut best_sum = f64::NEG_INFINITY;
    for (i, row) in m.rows().enumerate() {
        let sum: f64 = row.iter().sum();
        if sum > best_sum {
            best_sum = sum;
            best = i + 1;
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainDirection {
    /// Every unit is headed by its successor.
    Right,
    /// Every unit is headed by its predecessor.
    Left,
}

impl FromStr for ChainDirection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "right" => Ok(ChainDirection::Right),
            "left" => Ok(ChainDirection::Left),
            other => Err(format!("unknown chain direction {other:?}")),
        }
    }
}

/// Right- or left-chain tree with the given root spliced in.
///
/// The unit that would have pointed past the sentence edge (the last unit
/// for right chains, the first for left chains) attaches to `root` instead.
/// With `root` at that edge the result is the plain chain.
pub fn chain_baseline(n: usize, direction: ChainDirection, root: usize) -> Result<DepTree> {
    if n == 0 || root == 0 || root > n {
        return Err(Error::Index(format!("chain root {root} outside 1..={n}")));
    }
    let heads = (1..=n)
        .map(|i| {
            if i == root {
                return 0;
            }
            match direction {
                ChainDirection::Right if i < n => i + 1,
                ChainDirection::Left if i > 1 => i - 1,
                _ => root,
            }
        })
        .collect();
    DepTree::new(heads)
}

/// Decode a tree from a matrix with the chosen decoder and options.
pub fn decode(m: &ImpactMatrix, opts: &ScoreOptions, decoder: Decoder) -> Result<DepTree> {
    opts.validate()?;
    let root = opts.root_for(m)?;
    let scores = arc_scores(m, opts);
    match decoder {
        Decoder::Eisner => eisner(&scores, root),
        Decoder::Cle => cle(&scores, root),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decoder {
    /// Projective decoding.
    Eisner,
    /// Non-projective maximum spanning arborescence.
    Cle,
}

fn check_decoder_input(scores: &ArcScores, root: usize) -> Result<()> {
    let n = scores.len();
    if n == 0 {
        return Err(Error::Index("cannot decode an empty sentence".to_owned()));
    }
    if root == 0 || root > n {
        return Err(Error::Index(format!("root {root} outside 1..={n}")));
    }
    Ok(())
}
