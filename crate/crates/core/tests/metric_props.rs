mod common;

use common::{below, random_tree};
use impact_probe::constituency::{mart_parse, ConstTree};
use impact_probe::dep::{chain_baseline, ChainDirection};
use impact_probe::metrics::{accuracy_by_distance, bracket_f1, ned, uas, uuas, BracketOptions, Counts};
use impact_probe::rng::{random_matrix, SplitMix64};
use impact_probe::treebank::Bracket;

#[test]
fn uas_never_exceeds_ned() {
    let mut rng = SplitMix64::new(31);
    for _ in 0..1000 {
        let n = 1 + below(&mut rng, 12);
        let gold = random_tree(&mut rng, n);
        let pred = random_tree(&mut rng, n);
        let u = uas(&pred, &gold).unwrap();
        let e = ned(&pred, &gold).unwrap();
        assert!(u.correct <= e.correct, "pred {pred:?} gold {gold:?}");
        assert_eq!(u.total, e.total);
        for c in [u, e, uuas(&pred, &gold).unwrap()] {
            assert!(c.correct <= c.total);
        }
    }
}

#[test]
fn identical_trees_score_full_marks() {
    let mut rng = SplitMix64::new(32);
    for _ in 0..200 {
        let n = 2 + below(&mut rng, 12);
        let gold = random_tree(&mut rng, n);
        for f in [uas, uuas, ned] {
            assert_eq!(f(&gold, &gold).unwrap().percentage(), Some(100.0));
        }
    }
}

#[test]
fn reversed_chain_keeps_undirected_edges() {
    for n in 2..10 {
        let right = chain_baseline(n, ChainDirection::Right, n).unwrap();
        let left = chain_baseline(n, ChainDirection::Left, 1).unwrap();
        assert_eq!(uuas(left.heads(), right.heads()).unwrap(), Counts::new(n - 1, n - 1));
    }
}

#[test]
fn metrics_are_permutation_covariant() {
    let mut rng = SplitMix64::new(33);
    for _ in 0..300 {
        let n = 1 + below(&mut rng, 12);
        let gold = random_tree(&mut rng, n);
        let pred = random_tree(&mut rng, n);
        let mut perm: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            perm.swap(i, below(&mut rng, i + 1));
        }
        // relabel unit i as perm[i-1]
        let relabel = |heads: &[usize]| {
            let mut out = vec![0; n];
            for (i, &h) in heads.iter().enumerate() {
                out[perm[i] - 1] = if h == 0 { 0 } else { perm[h - 1] };
            }
            out
        };
        let (pg, pp) = (relabel(&gold), relabel(&pred));
        for f in [uas, uuas, ned] {
            assert_eq!(f(&pred, &gold).unwrap(), f(&pp, &pg).unwrap());
        }
    }
}

#[test]
fn right_chain_is_only_right_when_adjacent() {
    let mut rng = SplitMix64::new(34);
    let distances: Vec<usize> = (0..12).collect();
    for _ in 0..300 {
        let n = 2 + below(&mut rng, 11);
        let gold = random_tree(&mut rng, n);
        let root = gold.iter().position(|&h| h == 0).unwrap() + 1;
        let pred = chain_baseline(n, ChainDirection::Right, root).unwrap();
        let buckets = accuracy_by_distance(pred.heads(), &gold, &distances).unwrap();
        for (d, c) in buckets.iter().enumerate().skip(1) {
            // the spliced last unit may legitimately point far to the root
            if c.correct > 0 {
                assert_eq!(gold[n - 1], root, "bucket {d}");
                assert_eq!(c.correct, 1);
            }
        }
    }
}

fn brackets(spans: &[(usize, usize)]) -> Vec<Bracket> {
    spans
        .iter()
        .map(|&(start, end)| Bracket {
            start,
            end,
            tag: "X".into(),
        })
        .collect()
}

fn tree_of(n: usize, spans: &[(usize, usize)]) -> ConstTree {
    ConstTree::from_spans(n, spans.iter().copied().chain((1..=n).map(|i| (i, i)))).unwrap()
}

#[test]
fn bracket_f1_is_symmetric() {
    let opts = BracketOptions::default();
    for seed in 0..200u64 {
        let n = 2 + (seed as usize % 12);
        let a = mart_parse(&random_matrix(n, seed).unwrap(), 0.0).unwrap();
        let b = mart_parse(&random_matrix(n, seed + 1000).unwrap(), 0.0).unwrap();
        let as_gold = |t: &ConstTree| brackets(&t.constituents().collect::<Vec<_>>());
        let ab = bracket_f1(&a, &as_gold(&b), n, opts).unwrap();
        let ba = bracket_f1(&b, &as_gold(&a), n, opts).unwrap();
        assert_eq!(ab.precision(), ba.recall());
        assert_eq!(ab.recall(), ba.precision());
        assert_eq!(ab.f1(), ba.f1());
    }
}

#[test]
fn full_span_flag() {
    let pred = tree_of(4, &[(1, 4), (1, 2), (3, 4)]);
    let gold = brackets(&[(1, 4), (2, 4), (3, 4)]);
    let with = bracket_f1(
        &pred,
        &gold,
        4,
        BracketOptions {
            include_full_span: true,
        },
    )
    .unwrap();
    let without = bracket_f1(
        &pred,
        &gold,
        4,
        BracketOptions {
            include_full_span: false,
        },
    )
    .unwrap();
    assert_eq!((with.matched, with.predicted, with.gold), (2, 3, 3));
    assert_eq!((without.matched, without.predicted, without.gold), (1, 2, 2));

    let two = tree_of(2, &[(1, 2)]);
    let c = bracket_f1(&two, &brackets(&[(1, 2)]), 2, BracketOptions::default()).unwrap();
    assert_eq!(c.f1().percentage(), Some(100.0));
}

#[test]
fn length_mismatch_is_an_error() {
    assert!(uas(&[0, 1], &[0]).is_err());
    assert!(uuas(&[0], &[2, 0]).is_err());
    assert!(ned(&[0, 1, 1], &[0, 1]).is_err());
    assert!(bracket_f1(&tree_of(3, &[(1, 3), (2, 3)]), &[], 4, BracketOptions::default()).is_err());
}
