use super::{check_decoder_input, ArcScores, DepTree};
use crate::error::Result;

/// Span tables for the first-order projective dynamic program.
///
/// `left` spans are headed by their right end, `right` spans by their left
/// end. Indices are 0-based unit positions.
struct Chart {
    n: usize,
    complete_left: Vec<f64>,
    complete_right: Vec<f64>,
    incomplete_left: Vec<f64>,
    incomplete_right: Vec<f64>,
    split_cl: Vec<usize>,
    split_cr: Vec<usize>,
    split_i: Vec<usize>,
}

#[derive(Clone, Copy)]
enum Span {
    CompleteLeft(usize, usize),
    CompleteRight(usize, usize),
    IncompleteLeft(usize, usize),
    IncompleteRight(usize, usize),
}

impl Chart {
    fn new(n: usize) -> Self {
        Chart {
            n,
            complete_left: vec![0.0; n * n],
            complete_right: vec![0.0; n * n],
            incomplete_left: vec![0.0; n * n],
            incomplete_right: vec![0.0; n * n],
            split_cl: vec![0; n * n],
            split_cr: vec![0; n * n],
            split_i: vec![0; n * n],
        }
    }

    #[inline]
    fn at(&self, s: usize, t: usize) -> usize {
        s * self.n + t
    }

    fn fill(&mut self, scores: &ArcScores) {
        let n = self.n;
        for len in 1..n {
            for s in 0..n - len {
                let t = s + len;
                let st = self.at(s, t);

                // Strict comparison keeps the smallest split on ties.
                let mut best = f64::NEG_INFINITY;
                let mut best_q = s;
                for q in s..t {
                    let v = self.complete_right[self.at(s, q)] + self.complete_left[self.at(q + 1, t)];
                    if v > best {
                        best = v;
                        best_q = q;
                    }
                }
                self.incomplete_left[st] = best + scores.score(t + 1, s + 1);
                self.incomplete_right[st] = best + scores.score(s + 1, t + 1);
                self.split_i[st] = best_q;

                let mut best = f64::NEG_INFINITY;
                let mut best_q = s;
                for q in s..t {
                    let v = self.complete_left[self.at(s, q)] + self.incomplete_left[self.at(q, t)];
                    if v > best {
                        best = v;
                        best_q = q;
                    }
                }
                self.complete_left[st] = best;
                self.split_cl[st] = best_q;

                let mut best = f64::NEG_INFINITY;
                let mut best_q = s + 1;
                for q in s + 1..=t {
                    let v = self.incomplete_right[self.at(s, q)] + self.complete_right[self.at(q, t)];
                    if v > best {
                        best = v;
                        best_q = q;
                    }
                }
                self.complete_right[st] = best;
                self.split_cr[st] = best_q;
            }
        }
    }

    fn backtrack(&self, root: usize) -> Vec<usize> {
        let n = self.n;
        let mut heads = vec![0; n];
        let mut stack = vec![Span::CompleteLeft(0, root), Span::CompleteRight(root, n - 1)];
        while let Some(span) = stack.pop() {
            match span {
                Span::CompleteLeft(s, t) | Span::CompleteRight(s, t) if s == t => {}
                Span::CompleteLeft(s, t) => {
                    let q = self.split_cl[self.at(s, t)];
                    stack.push(Span::CompleteLeft(s, q));
                    stack.push(Span::IncompleteLeft(q, t));
                }
                Span::CompleteRight(s, t) => {
                    let q = self.split_cr[self.at(s, t)];
                    stack.push(Span::IncompleteRight(s, q));
                    stack.push(Span::CompleteRight(q, t));
                }
                Span::IncompleteLeft(s, t) => {
                    heads[s] = t + 1;
                    let q = self.split_i[self.at(s, t)];
                    stack.push(Span::CompleteRight(s, q));
                    stack.push(Span::CompleteLeft(q + 1, t));
                }
                Span::IncompleteRight(s, t) => {
                    heads[t] = s + 1;
                    let q = self.split_i[self.at(s, t)];
                    stack.push(Span::CompleteRight(s, q));
                    stack.push(Span::CompleteLeft(q + 1, t));
                }
            }
        }
        heads
    }
}

/// Highest-scoring projective tree whose only root attachment is `root`.
///
/// Runs the O(n^3) Eisner span dynamic program over the units; the
/// artificial root can only govern `root`, so the tree is the best left
/// half-tree of `root` over `1..=root` joined with its best right half-tree
/// over `root..=n`. Ties prefer the smaller split point.
pub fn eisner(scores: &ArcScores, root: usize) -> Result<DepTree> {
    check_decoder_input(scores, root)?;
    let mut chart = Chart::new(scores.len());
    chart.fill(scores);
    DepTree::new(chart.backtrack(root - 1))
}
