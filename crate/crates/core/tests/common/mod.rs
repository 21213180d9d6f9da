//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls the decoders or metrics under test; the oracles are
//! exhaustive searches that only read raw arc scores.

#![allow(dead_code)]

use std::path::PathBuf;

use impact_probe::dep::ArcScores;
use impact_probe::rng::SplitMix64;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Uniform integer in `0..n`.
pub fn below(rng: &mut SplitMix64, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// Random rooted tree on `n` units (1-based heads, 0 = root): nodes are
/// visited in random order and each attaches to an earlier one.
pub fn random_tree(rng: &mut SplitMix64, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        order.swap(i, below(rng, i + 1));
    }
    let mut heads = vec![0; n];
    for k in 1..n {
        heads[order[k] - 1] = order[below(rng, k)];
    }
    heads
}

pub fn random_scores(rng: &mut SplitMix64, n: usize) -> ArcScores {
    ArcScores::from_fn(n, |h, d| if h == d { 0.0 } else { rng.next_f64() })
}

/// Sum of arc scores, root attachment excluded.
pub fn heads_score(scores: &ArcScores, heads: &[usize]) -> f64 {
    heads
        .iter()
        .enumerate()
        .filter(|(_, &h)| h != 0)
        .map(|(d, &h)| scores.score(h, d + 1))
        .sum()
}

pub fn is_tree(heads: &[usize]) -> bool {
    let n = heads.len();
    if heads.iter().filter(|&&h| h == 0).count() != 1 || heads.iter().any(|&h| h > n) {
        return false;
    }
    (1..=n).all(|start| {
        let mut x = start;
        for _ in 0..=n {
            if x == 0 {
                return true;
            }
            x = heads[x - 1];
        }
        false
    })
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

fn reaches(heads: &[usize], mut from: usize, target: usize) -> bool {
    // Follows assigned heads only (0 marks both root and "unassigned").
    while from != 0 {
        if from == target {
            return true;
        }
        from = heads[from - 1];
    }
    false
}

/// Best projective tree with `root` as the only child of the artificial
/// root, by backtracking over head assignments with crossing and cycle
/// pruning. The artificial root sits at position 0, so no arc may span
/// over `root`.
pub fn brute_projective(scores: &ArcScores, root: usize) -> Vec<usize> {
    let n = scores.len();
    let mut heads = vec![0; n];
    let mut arcs = vec![(0, root)];
    let mut best = (f64::NEG_INFINITY, Vec::new());
    projective_search(scores, root, 1, &mut heads, &mut arcs, &mut best);
    best.1
}

fn projective_search(
    scores: &ArcScores,
    root: usize,
    d: usize,
    heads: &mut Vec<usize>,
    arcs: &mut Vec<(usize, usize)>,
    best: &mut (f64, Vec<usize>),
) {
    let n = scores.len();
    if d > n {
        let s = heads_score(scores, heads);
        if s > best.0 {
            *best = (s, heads.clone());
        }
        return;
    }
    if d == root {
        projective_search(scores, root, d + 1, heads, arcs, best);
        return;
    }
    for h in (1..=n).filter(|&h| h != d) {
        let arc = (h.min(d), h.max(d));
        if arcs.iter().any(|&a| crosses(a, arc)) || reaches(heads, h, d) {
            continue;
        }
        heads[d - 1] = h;
        arcs.push(arc);
        projective_search(scores, root, d + 1, heads, arcs, best);
        arcs.pop();
        heads[d - 1] = 0;
    }
}

/// Best arborescence rooted at `root` over every head assignment.
pub fn brute_arborescence(scores: &ArcScores, root: usize) -> Vec<usize> {
    let n = scores.len();
    let free: Vec<usize> = (1..=n).filter(|&d| d != root).collect();
    let mut heads = vec![0; n];
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut choice = vec![0usize; free.len()];
    loop {
        for (slot, &d) in free.iter().enumerate() {
            // candidates for d: 1..=n without d
            let h = choice[slot] + 1;
            heads[d - 1] = if h >= d { h + 1 } else { h };
        }
        if is_tree(&heads) {
            let s = heads_score(scores, &heads);
            if s > best.0 {
                best = (s, heads.clone());
            }
        }
        // odometer over (n-1)^(n-1) assignments
        let mut slot = 0;
        loop {
            if slot == free.len() {
                return best.1;
            }
            choice[slot] += 1;
            if choice[slot] < n - 1 {
                break;
            }
            choice[slot] = 0;
            slot += 1;
        }
    }
}

/// Planted block matrix: 1.0 inside blocks, 0.0 across, 0 on the diagonal.
pub fn block_matrix(sizes: &[usize]) -> Vec<Vec<f64>> {
    let block: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect();
    let n = block.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i != j && block[i] == block[j] { 1.0 } else { 0.0 })
                .collect()
        })
        .collect()
}
