//! Top-down constituency induction from impact matrices.
//!
//! A span `[i..j]` is split at the `k` that maximises the mean impact inside
//! the two halves `[i..k]` and `[k+1..j]` minus the mean impact across them,
//! and both halves are split recursively down to single words.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::ImpactMatrix;

/// A 1-based inclusive span `(start, end)`.
pub type Span = (usize, usize);

/// An unlabeled binary bracketing of `n` tokens.
///
/// Spans are stored in a sorted set, singletons included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstTree {
    n: usize,
    spans: BTreeSet<Span>,
}

impl ConstTree {
    /// Validate a full binary bracketing: contains `(1, n)` and every
    /// singleton, spans nest properly, and every non-singleton span splits
    /// into exactly two child spans.
    pub fn from_spans(n: usize, spans: impl IntoIterator<Item = Span>) -> Result<Self> {
        let spans: BTreeSet<Span> = spans.into_iter().collect();
        let tree = ConstTree { n, spans };
        tree.validate()?;
        Ok(tree)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidTree("bracketing over zero tokens".to_owned()));
        }
        if !self.spans.contains(&(1, n)) {
            return Err(Error::InvalidTree(format!("missing whole span (1, {n})")));
        }
        for &(a, b) in &self.spans {
            if a < 1 || b > n || a > b {
                return Err(Error::InvalidTree(format!("span ({a}, {b}) out of range")));
            }
        }
        if !nested(self.spans.iter().copied()) {
            return Err(Error::InvalidTree("crossing spans".to_owned()));
        }
        for i in 1..=n {
            if !self.spans.contains(&(i, i)) {
                return Err(Error::InvalidTree(format!("missing leaf ({i}, {i})")));
            }
        }
        for &(a, b) in self.spans.iter().filter(|(a, b)| a < b) {
            let split = (a..b)
                .filter(|&k| self.spans.contains(&(a, k)) && self.spans.contains(&(k + 1, b)))
                .count();
            if split != 1 {
                return Err(Error::InvalidTree(format!(
                    "span ({a}, {b}) does not have exactly two children"
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn contains(&self, span: Span) -> bool {
        self.spans.contains(&span)
    }

    /// All spans, singletons included, in sorted order.
    pub fn spans(&self) -> impl Iterator<Item = Span> + '_ {
        self.spans.iter().copied()
    }

    /// Spans covering at least two tokens.
    pub fn constituents(&self) -> impl Iterator<Item = Span> + '_ {
        self.spans().filter(|(a, b)| a < b)
    }

    /// Render as `( ( w1 w2 ) ( w3 w4 ) )`; singletons print as bare words.
    pub fn to_bracketed(&self, words: &[String]) -> String {
        let mut out = String::new();
        self.write_span(1, self.n, words, &mut out);
        out
    }

    fn write_span(&self, a: usize, b: usize, words: &[String], out: &mut String) {
        if a == b {
            out.push_str(&words[a - 1]);
            return;
        }
        let k = (a..b)
            .find(|&k| self.spans.contains(&(a, k)) && self.spans.contains(&(k + 1, b)))
            .expect("validated bracketing");
        out.push_str("( ");
        self.write_span(a, k, words, out);
        out.push(' ');
        self.write_span(k + 1, b, words, out);
        out.push_str(" )");
    }
}

/// Parse a bracketed string such as `( ( a b ) c )` into a binary tree and
/// its words.
pub fn parse_bracketed(text: &str) -> Result<(ConstTree, Vec<String>)> {
    let mut words = Vec::new();
    let mut spans = Vec::new();
    let mut open: Vec<usize> = Vec::new();
    let spaced = text.replace('(', " ( ").replace(')', " ) ");
    for tok in spaced.split_whitespace() {
        match tok {
            "(" => open.push(words.len() + 1),
            ")" => {
                let start = open
                    .pop()
                    .ok_or_else(|| Error::parse(1, "unbalanced ')' in bracketing"))?;
                if start > words.len() {
                    return Err(Error::parse(1, "empty bracket"));
                }
                spans.push((start, words.len()));
            }
            w => {
                words.push(w.to_owned());
                spans.push((words.len(), words.len()));
            }
        }
    }
    if !open.is_empty() {
        return Err(Error::parse(1, "unbalanced '(' in bracketing"));
    }
    let tree = ConstTree::from_spans(words.len(), spans)?;
    Ok((tree, words))
}

fn nested(spans: impl Iterator<Item = Span> + Clone) -> bool {
    spans.clone().all(|(a, b)| {
        spans
            .clone()
            .all(|(c, d)| !((a < c && c <= b && b < d) || (c < a && a <= d && d < b)))
    })
}

/// Mean over the block `rows x cols` (1-based inclusive ranges). Square
/// blocks on the diagonal average only their off-diagonal entries and are 0
/// for a single unit.
fn block_mean(m: &ImpactMatrix, rows: Span, cols: Span) -> f64 {
    let mut sum = 0.0;
    for i in rows.0..=rows.1 {
        let row = m.row(i - 1);
        for j in cols.0..=cols.1 {
            if i != j {
                sum += row[j - 1];
            }
        }
    }
    let r = rows.1 - rows.0 + 1;
    let c = cols.1 - cols.0 + 1;
    if rows == cols {
        if r == 1 {
            0.0
        } else {
            sum / (r * (r - 1)) as f64
        }
    } else {
        sum / (r * c) as f64
    }
}

/// Split objective for dividing `[i..j]` into `[i..k]` and `[k+1..j]`.
pub fn split_gain(m: &ImpactMatrix, i: usize, j: usize, k: usize) -> Result<f64> {
    if i < 1 || j > m.len() || !(i <= k && k < j) {
        return Err(Error::Index(format!(
            "split ({i}, {j}, k={k}) invalid for {} units",
            m.len()
        )));
    }
    let left = (i, k);
    let right = (k + 1, j);
    Ok(block_mean(m, left, left) + block_mean(m, right, right)
        - block_mean(m, left, right)
        - block_mean(m, right, left))
}

/// Best split point of `[i..j]`, `j > i`.
///
/// The objective is `split_gain + lambda * (j - k) / (j - i + 1)`: a
/// positive `lambda` rewards short left halves, i.e. right-branching
/// structure. Ties go to the smaller `k`.
pub fn best_split(m: &ImpactMatrix, i: usize, j: usize, right_bias_lambda: f64) -> usize {
    let width = (j - i + 1) as f64;
    let mut best_k = i;
    let mut best = f64::NEG_INFINITY;
    for k in i..j {
        let gain = split_gain(m, i, j, k).expect("k in range");
        let objective = gain + right_bias_lambda * (j - k) as f64 / width;
        if objective > best {
            best = objective;
            best_k = k;
        }
    }
    best_k
}

/// Recursive top-down parse of the whole matrix.
pub fn mart_parse(m: &ImpactMatrix, right_bias_lambda: f64) -> Result<ConstTree> {
    if !(right_bias_lambda >= 0.0 && right_bias_lambda.is_finite()) {
        return Err(Error::Index(format!(
            "right-branching bias must be finite and >= 0, got {right_bias_lambda}"
        )));
    }
    let n = m.len();
    let mut spans = BTreeSet::new();
    let mut stack = vec![(1, n)];
    while let Some((i, j)) = stack.pop() {
        spans.insert((i, j));
        if i < j {
            let k = best_split(m, i, j, right_bias_lambda);
            stack.push((i, k));
            stack.push((k + 1, j));
        }
    }
    Ok(ConstTree { n, spans })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branching {
    Right,
    Left,
}

impl FromStr for Branching {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "right" => Ok(Branching::Right),
            "left" => Ok(Branching::Left),
            other => Err(format!("unknown branching direction {other:?}")),
        }
    }
}

/// Purely right- or left-branching bracketing of `n` tokens.
pub fn branching_baseline(n: usize, direction: Branching) -> Result<ConstTree> {
    if n == 0 {
        return Err(Error::Index("branching baseline needs n >= 1".to_owned()));
    }
    let mut spans: BTreeSet<Span> = (1..=n).map(|i| (i, i)).collect();
    for s in 1..n {
        spans.insert(match direction {
            Branching::Right => (s, n),
            Branching::Left => (1, n + 1 - s),
        });
    }
    spans.insert((1, n));
    Ok(ConstTree { n, spans })
}
