use super::{check_decoder_input, ArcScores, DepTree};
use crate::error::Result;

const NO_EDGE: f64 = f64::NEG_INFINITY;
const NONE: usize = usize::MAX;

/// Maximum spanning arborescence rooted at `root` (Chu-Liu/Edmonds).
///
/// Every other unit greedily takes its best incoming arc; cycles are
/// contracted and rescored until the greedy choice is acyclic, then the
/// contractions are expanded again. Among equal incoming arcs the smaller
/// head index wins.
pub fn cle(scores: &ArcScores, root: usize) -> Result<DepTree> {
    check_decoder_input(scores, root)?;
    let n = scores.len();
    let root = root - 1;

    let weights: Vec<Vec<f64>> = (0..n)
        .map(|h| {
            (0..n)
                .map(|d| {
                    if h == d || d == root {
                        NO_EDGE
                    } else {
                        scores.score(h + 1, d + 1)
                    }
                })
                .collect()
        })
        .collect();

    let parents = arborescence(&weights, root);
    let heads = parents.iter().map(|&p| if p == NONE { 0 } else { p + 1 }).collect();
    DepTree::new(heads)
}

/// `weights[u][v]` is the score of arc `u -> v`, `NO_EDGE` if absent.
/// Returns the parent of every node, `NONE` for the root.
fn arborescence(weights: &[Vec<f64>], root: usize) -> Vec<usize> {
    let m = weights.len();

    let mut best_in = vec![NONE; m];
    for v in (0..m).filter(|&v| v != root) {
        let mut best = NO_EDGE;
        for (u, row) in weights.iter().enumerate() {
            if u != v && row[v] > best {
                best = row[v];
                best_in[v] = u;
            }
        }
    }

    let cycle = match find_cycle(&best_in, root) {
        Some(cycle) => cycle,
        None => return best_in,
    };

    let mut in_cycle = vec![false; m];
    for &v in &cycle {
        in_cycle[v] = true;
    }

    // Non-cycle nodes keep their relative order; the contracted node is last.
    let mut to_new = vec![NONE; m];
    let mut to_old = Vec::new();
    for v in (0..m).filter(|&v| !in_cycle[v]) {
        to_new[v] = to_old.len();
        to_old.push(v);
    }
    let contracted = to_old.len();
    let mut reduced = vec![vec![NO_EDGE; contracted + 1]; contracted + 1];

    // Which cycle node an arc into / out of the contraction really uses.
    let mut enters = vec![NONE; m];
    let mut leaves = vec![NONE; m];

    for &u in &to_old {
        for &v in &to_old {
            reduced[to_new[u]][to_new[v]] = weights[u][v];
        }

        let mut best = NO_EDGE;
        for v in (0..m).filter(|&v| in_cycle[v]) {
            if weights[u][v] == NO_EDGE {
                continue;
            }
            let gain = weights[u][v] - weights[best_in[v]][v];
            if gain > best {
                best = gain;
                enters[u] = v;
            }
        }
        reduced[to_new[u]][contracted] = best;

        let mut best = NO_EDGE;
        for v in (0..m).filter(|&v| in_cycle[v]) {
            if weights[v][u] > best {
                best = weights[v][u];
                leaves[u] = v;
            }
        }
        reduced[contracted][to_new[u]] = best;
    }

    let reduced_parents = arborescence(&reduced, to_new[root]);

    let mut parents = best_in;
    for &v in &to_old {
        if v == root {
            continue;
        }
        let p = reduced_parents[to_new[v]];
        parents[v] = if p == contracted { leaves[v] } else { to_old[p] };
    }
    let outside = to_old[reduced_parents[contracted]];
    parents[enters[outside]] = outside;
    parents
}

fn find_cycle(parents: &[usize], root: usize) -> Option<Vec<usize>> {
    let m = parents.len();
    let mut state = vec![0u8; m]; // 0 unseen, 1 on current path, 2 done
    state[root] = 2;
    for start in 0..m {
        let mut path = Vec::new();
        let mut cur = start;
        while cur != NONE && state[cur] == 0 {
            state[cur] = 1;
            path.push(cur);
            cur = parents[cur];
        }
        if cur != NONE && state[cur] == 1 {
            let pos = path.iter().position(|&v| v == cur).unwrap();
            let mut cycle = path[pos..].to_vec();
            cycle.sort_unstable();
            return Some(cycle);
        }
        for v in path {
            state[v] = 2;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_unit() {
        let s = ArcScores::from_fn(1, |_, _| 0.0);
        assert_eq!(cle(&s, 1).unwrap().heads(), &[0]);
    }

    #[test]
    fn recovers_crossing_structure() {
        let s = ArcScores::from_fn(4, |h, d| match (h, d) {
            (2, 4) | (3, 1) => 10.0,
            (2, 3) => 1.0,
            _ => 0.0,
        });
        let tree = cle(&s, 2).unwrap();
        assert_eq!(tree.heads(), &[3, 0, 2, 2]);
        assert!(!tree.is_projective());
    }

    #[test]
    fn flat_tree_when_root_dominates() {
        let s = ArcScores::from_fn(5, |h, _| if h == 3 { 5.0 } else { 1.0 });
        assert_eq!(cle(&s, 3).unwrap().heads(), &[3, 3, 0, 3, 3]);
    }

    #[test]
    fn breaks_two_cycle() {
        // 1 and 2 prefer each other; the root 3 must enter the cycle.
        let s = ArcScores::from_fn(3, |h, d| match (h, d) {
            (1, 2) | (2, 1) => 10.0,
            (3, 1) => 2.0,
            (3, 2) => 1.0,
            _ => 0.0,
        });
        assert_eq!(cle(&s, 3).unwrap().heads(), &[3, 1, 0]);
    }
}
