//! Evaluation of induced trees against gold annotation.
//!
//! Dependency metrics work on 1-based head vectors; all scores aggregate
//! micro-style (corpus-level counts).

use std::collections::BTreeSet;
use std::ops::{Add, AddAssign};

use serde::Serialize;

use crate::constituency::{ConstTree, Span};
use crate::error::{Error, Result};
use crate::treebank::Bracket;

/// Correct/total counts of one metric.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub correct: usize,
    pub total: usize,
}

impl Counts {
    pub fn new(correct: usize, total: usize) -> Self {
        Counts { correct, total }
    }

    /// `100 * correct / total`, undefined for an empty total.
    pub fn percentage(&self) -> Option<f64> {
        (self.total > 0).then(|| 100.0 * self.correct as f64 / self.total as f64)
    }
}

impl Add for Counts {
    type Output = Counts;

    fn add(self, rhs: Counts) -> Counts {
        Counts::new(self.correct + rhs.correct, self.total + rhs.total)
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for Counts {
    fn sum<I: Iterator<Item = Counts>>(iter: I) -> Counts {
        iter.fold(Counts::default(), Add::add)
    }
}

fn check_len(predicted: usize, gold: usize) -> Result<()> {
    if predicted != gold {
        return Err(Error::LengthMismatch { predicted, gold });
    }
    Ok(())
}

/// Unlabeled attachment: tokens whose predicted head equals the gold head.
///
/// Predictions are plain head vectors (`DepTree::heads`), so partial or
/// ill-formed outputs of other systems can be scored too.
pub fn uas(pred: &[usize], gold: &[usize]) -> Result<Counts> {
    check_len(pred.len(), gold.len())?;
    let correct = pred.iter().zip(gold).filter(|(p, g)| p == g).count();
    Ok(Counts::new(correct, gold.len()))
}

fn undirected_edges(heads: &[usize]) -> BTreeSet<(usize, usize)> {
    heads
        .iter()
        .enumerate()
        .filter(|(_, &h)| h != 0)
        .map(|(d, &h)| (h.min(d + 1), h.max(d + 1)))
        .collect()
}

/// Undirected attachment over non-root edges; total is `n - 1`.
pub fn uuas(pred: &[usize], gold: &[usize]) -> Result<Counts> {
    check_len(pred.len(), gold.len())?;
    let pred_edges = undirected_edges(pred);
    let gold_edges = undirected_edges(gold);
    let correct = pred_edges.intersection(&gold_edges).count();
    Ok(Counts::new(correct, gold_edges.len()))
}

/// Neutral edge direction.
///
/// A token is correct when its predicted head is its gold parent, one of its
/// gold children, or its gold grandparent. A predicted root attachment is
/// correct only when the gold head is the root too.
pub fn ned(pred: &[usize], gold: &[usize]) -> Result<Counts> {
    check_len(pred.len(), gold.len())?;
    let n = gold.len();
    let correct = (1..=n)
        .filter(|&i| {
            let p = pred[i - 1];
            let g = gold[i - 1];
            if p == 0 {
                return g == 0;
            }
            p == g || gold[p - 1] == i || (g != 0 && gold[g - 1] == p)
        })
        .count();
    Ok(Counts::new(correct, n))
}

/// Attachment accuracy bucketed by the number of units strictly between a
/// token and its gold head (0 = adjacent). Root-attached tokens are not
/// bucketed. Returns one count per requested distance, in order.
pub fn accuracy_by_distance(pred: &[usize], gold: &[usize], distances: &[usize]) -> Result<Vec<Counts>> {
    check_len(pred.len(), gold.len())?;
    let mut out = vec![Counts::default(); distances.len()];
    for (i, &g) in gold.iter().enumerate() {
        if g == 0 {
            continue;
        }
        let d = g.abs_diff(i + 1) - 1;
        if let Some(slot) = distances.iter().position(|&x| x == d) {
            out[slot].total += 1;
            if pred[i] == g {
                out[slot].correct += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BracketOptions {
    /// Count the whole-sentence span as a constituent.
    pub include_full_span: bool,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions {
            include_full_span: true,
        }
    }
}

/// Matched, predicted and gold constituent counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BracketCounts {
    pub matched: usize,
    pub predicted: usize,
    pub gold: usize,
}

impl BracketCounts {
    pub fn precision(&self) -> Counts {
        Counts::new(self.matched, self.predicted)
    }

    pub fn recall(&self) -> Counts {
        Counts::new(self.matched, self.gold)
    }

    /// F1 expressed as counts: `2 * matched / (predicted + gold)`.
    pub fn f1(&self) -> Counts {
        Counts::new(2 * self.matched, self.predicted + self.gold)
    }
}

impl Add for BracketCounts {
    type Output = BracketCounts;

    fn add(self, rhs: BracketCounts) -> BracketCounts {
        BracketCounts {
            matched: self.matched + rhs.matched,
            predicted: self.predicted + rhs.predicted,
            gold: self.gold + rhs.gold,
        }
    }
}

fn span_set(spans: impl Iterator<Item = Span>, n: usize, opts: BracketOptions) -> BTreeSet<Span> {
    spans
        .filter(|&(a, b)| a < b)
        .filter(|&s| opts.include_full_span || s != (1, n))
        .collect()
}

/// Unlabeled bracket counts of one sentence; singleton spans never count.
pub fn bracket_f1(pred: &ConstTree, gold: &[Bracket], gold_len: usize, opts: BracketOptions) -> Result<BracketCounts> {
    check_len(pred.len(), gold_len)?;
    let n = gold_len;
    let pred_spans = span_set(pred.spans(), n, opts);
    let gold_spans = span_set(gold.iter().map(|b| (b.start, b.end)), n, opts);
    Ok(BracketCounts {
        matched: pred_spans.intersection(&gold_spans).count(),
        predicted: pred_spans.len(),
        gold: gold_spans.len(),
    })
}

/// Share of gold constituents labelled `tag` that the prediction contains.
pub fn tag_accuracy(pred: &ConstTree, gold: &[Bracket], tag: &str) -> Counts {
    let spans: BTreeSet<Span> = gold
        .iter()
        .filter(|b| b.tag == tag && b.start < b.end)
        .map(|b| (b.start, b.end))
        .collect();
    let correct = spans.iter().filter(|&&s| pred.contains(s)).count();
    Counts::new(correct, spans.len())
}

/// Per-sentence counts of one unit of evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SentenceCounts {
    pub id: String,
    pub counts: Counts,
}

/// Corpus-level result of one metric with its per-sentence breakdown.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub metric: String,
    pub counts: Counts,
    pub per_sentence: Vec<SentenceCounts>,
}

impl EvalReport {
    pub fn new(metric: impl Into<String>) -> Self {
        EvalReport {
            metric: metric.into(),
            counts: Counts::default(),
            per_sentence: Vec::new(),
        }
    }

    pub fn push(&mut self, id: impl Into<String>, counts: Counts) {
        self.counts += counts;
        self.per_sentence.push(SentenceCounts { id: id.into(), counts });
    }

    pub fn score(&self) -> Option<f64> {
        self.counts.percentage()
    }
}
