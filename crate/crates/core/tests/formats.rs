mod common;

use common::{below, fixture, is_tree, random_tree};
use impact_probe::dep::DepTree;
use impact_probe::heatmap::render_heatmap;
use impact_probe::pkm::{load_corpus, read_corpus, save_corpus, write_corpus};
use impact_probe::rng::{random_matrix_with_units, SplitMix64};
use impact_probe::treebank::{
    parse_conllu, read_conllu, read_ptb, read_scidtb, strip_punct, write_conllu, write_conllu_to, wsj10_filter,
    Bracket, GoldSentence, PunctPolicy,
};
use impact_probe::{ImpactMatrix, MatrixCorpus, Metric, UnitKind};
use proptest::prelude::*;

fn value() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6f64..1e6,
        0.0f64..1.0,
        Just(f64::MIN_POSITIVE),
        Just(5e-324),
        Just(-0.0),
        Just(f64::MAX),
        Just(1e-300),
    ]
}

fn matrix_strategy() -> impl Strategy<Value = (Vec<String>, Vec<Vec<f64>>)> {
    (1usize..7).prop_flat_map(|n| {
        (
            prop::collection::vec("[a-zé\"\\\\ ,.]{0,6}", n),
            prop::collection::vec(prop::collection::vec(value(), n), n),
        )
    })
}

fn corpus_strategy() -> impl Strategy<Value = MatrixCorpus> {
    (
        prop::collection::vec(matrix_strategy(), 0..6),
        prop::bool::ANY,
        0u8..3,
        prop::option::of("[a-z]{1,8}"),
    )
        .prop_map(|(mats, span, metric, note)| {
            let kind = if span { UnitKind::Span } else { UnitKind::Token };
            let metric = [Metric::Dist, Metric::Prob, Metric::Synthetic][metric as usize];
            let mut corpus = MatrixCorpus::new(kind, metric);
            if let Some(note) = note {
                corpus.meta.insert("note".into(), note.into());
                corpus.meta.insert("layer".into(), 7.into());
            }
            for (k, (units, mut rows)) in mats.into_iter().enumerate() {
                for (i, row) in rows.iter_mut().enumerate() {
                    row[i] = 0.0;
                }
                corpus
                    .push(ImpactMatrix::new(format!("m{k}"), kind, metric, units, rows).unwrap())
                    .unwrap();
            }
            corpus
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pkm_round_trip_is_identity(corpus in corpus_strategy()) {
        let mut bytes = Vec::new();
        write_corpus(&corpus, &mut bytes).unwrap();
        let back = read_corpus(bytes.as_slice()).unwrap();
        prop_assert_eq!(back.kind, corpus.kind);
        prop_assert_eq!(back.metric, corpus.metric);
        prop_assert_eq!(&back.meta, &corpus.meta);
        prop_assert_eq!(back.len(), corpus.len());
        for (a, b) in back.matrices().iter().zip(corpus.matrices()) {
            prop_assert_eq!(a.id(), b.id());
            prop_assert_eq!(a.units(), b.units());
            for (ra, rb) in a.rows().zip(b.rows()) {
                for (x, y) in ra.iter().zip(rb) {
                    prop_assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
        let mut again = Vec::new();
        write_corpus(&back, &mut again).unwrap();
        prop_assert_eq!(again, bytes);
    }
}

#[test]
fn pkm_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = load_corpus(fixture("synthetic.pkm")).unwrap();
    let path = dir.path().join("copy.pkm");
    save_corpus(&corpus, &path).unwrap();
    let back = load_corpus(&path).unwrap();
    assert_eq!(back.len(), 20);
    for (a, b) in back.matrices().iter().zip(corpus.matrices()) {
        assert_eq!(a, b);
    }
    assert!(load_corpus(dir.path().join("missing.pkm")).is_err());
}

#[test]
fn pkm_errors_name_the_line() {
    let text = "{\"pkm_version\":\"1\",\"kind\":\"token\",\"metric\":\"dist\",\"meta\":{}}\n\
                {\"id\":\"a\",\"units\":[\"x\"],\"values\":[[0.0]]}\n\
                {\"id\":\"b\",\"units\":[\"x\",\"y\"],\"values\":[[0.0,1.0]]}\n";
    let err = read_corpus(text.as_bytes()).unwrap_err().to_string();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn shipped_synthetic_corpus_matches_the_generator() {
    let gold = read_conllu(fixture("sentences.conllu")).unwrap();
    let corpus = load_corpus(fixture("synthetic.pkm")).unwrap();
    assert_eq!(corpus.metric, Metric::Synthetic);
    assert_eq!(corpus.len(), gold.len());
    for (k, (m, g)) in corpus.matrices().iter().zip(&gold).enumerate() {
        let expected = random_matrix_with_units(g.id.clone().unwrap(), g.tokens.clone(), 42 + k as u64).unwrap();
        assert_eq!(m, &expected, "record {}", k + 1);
    }
}

#[test]
fn conllu_write_read_keeps_heads() {
    let mut rng = SplitMix64::new(41);
    let trees: Vec<(Vec<String>, DepTree)> = (0..100)
        .map(|k| {
            let n = 1 + below(&mut rng, 15);
            let words = (0..n).map(|i| format!("w{k}_{i}")).collect();
            (words, DepTree::new(random_tree(&mut rng, n)).unwrap())
        })
        .collect();
    let mut bytes = Vec::new();
    write_conllu_to(&trees, &mut bytes).unwrap();
    let back = parse_conllu(std::str::from_utf8(&bytes).unwrap()).unwrap();
    assert_eq!(back.len(), trees.len());
    for (s, (words, tree)) in back.iter().zip(&trees) {
        assert_eq!(&s.tokens, words);
        assert_eq!(s.gold_heads.as_deref(), Some(tree.heads()));
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.conllu");
    write_conllu(&trees, &path).unwrap();
    let from_file = read_conllu(&path).unwrap();
    assert_eq!(from_file, back);
}

#[test]
fn conllu_fixture() {
    let gold = read_conllu(fixture("sentences.conllu")).unwrap();
    assert_eq!(gold.len(), 20);
    assert_eq!(gold[0].id.as_deref(), Some("s1"));
    assert_eq!(gold[3].tokens, ["I", "do", "n't", "like", "rainy", "days", "."]);
    assert_eq!(gold[3].gold_heads, Some(vec![4, 4, 4, 0, 6, 4, 4]));
    assert_eq!(gold[19].gold_heads, Some(vec![0]));
    assert!(gold.iter().all(|s| is_tree(s.gold_heads.as_ref().unwrap())));
}

#[test]
fn conllu_errors() {
    let bad_head = "1\ta\t_\t_\t_\t_\tx\t_\t_\t_\n";
    assert!(parse_conllu(bad_head).unwrap_err().to_string().contains("line 1"));
    let cycle = "1\ta\t_\t_\t_\t_\t2\t_\t_\t_\n2\tb\t_\t_\t_\t_\t1\t_\t_\t_\n";
    assert!(parse_conllu(cycle).is_err());
    let range = "1\ta\t_\t_\t_\t_\t3\t_\t_\t_\n";
    assert!(parse_conllu(range).is_err());
}

#[test]
fn heatmap_fixture_pixels() {
    let corpus = load_corpus(fixture("heatmap_2x2.pkm")).unwrap();
    let m = corpus.get("s1").unwrap();
    let img = render_heatmap(m);
    // 255 * (v - min) / (max - min), rounded half away from zero
    let (lo, hi) = m.min_max();
    for i in 0..2 {
        for j in 0..2 {
            let expected = (255.0 * (m.get(i, j) - lo) / (hi - lo)).round() as u8;
            assert_eq!(img.pixel(i, j), expected);
        }
    }
    assert_eq!(img.to_pgm(), "P2\n2 2\n255\n0 255\n128 0\n");
}

#[test]
fn heatmap_is_monotone() {
    for seed in 0..50u64 {
        let m = impact_probe::rng::random_matrix(1 + (seed as usize % 8), seed).unwrap();
        let img = render_heatmap(&m);
        let n = m.len();
        let cells: Vec<(f64, u8)> = (0..n * n)
            .map(|c| (m.get(c / n, c % n), img.pixel(c / n, c % n)))
            .collect();
        for a in &cells {
            for b in &cells {
                if a.0 <= b.0 {
                    assert!(a.1 <= b.1);
                }
            }
        }
    }
}

#[test]
fn strip_punct_keeps_valid_trees() {
    let mut rng = SplitMix64::new(42);
    let policy = PunctPolicy::default();
    for _ in 0..100 {
        let n = 1 + below(&mut rng, 14);
        let heads = random_tree(&mut rng, n);
        let upos: Vec<String> = (0..n)
            .map(|_| if below(&mut rng, 3) == 0 { "PUNCT" } else { "NOUN" }.to_owned())
            .collect();
        let s = GoldSentence {
            tokens: (0..n).map(|i| format!("t{i}")).collect(),
            upos: Some(upos.clone()),
            gold_heads: Some(heads),
            ..Default::default()
        };
        let t = strip_punct(&s, &policy);
        let kept: Vec<String> = (0..n)
            .filter(|&i| upos[i] != "PUNCT")
            .map(|i| format!("t{i}"))
            .collect();
        assert_eq!(t.tokens, kept);
        let heads = t.gold_heads.unwrap();
        assert_eq!(heads.len(), kept.len());
        if !kept.is_empty() {
            assert!(is_tree(&heads), "{heads:?}");
        }
        assert!(t.upos.unwrap().iter().all(|u| u != "PUNCT"));
    }
}

#[test]
fn wsj10_is_idempotent() {
    let gold = read_conllu(fixture("sentences.conllu")).unwrap();
    let policy = PunctPolicy::default();
    let once = wsj10_filter(&gold, &policy);
    // s19 has ten words before its full stop; all twenty qualify
    assert_eq!(once.len(), 20);
    assert_eq!(wsj10_filter(&once, &policy), once);
    let long = GoldSentence {
        tokens: vec!["w".into(); 11],
        upos: Some(vec!["NOUN".into(); 11]),
        ..Default::default()
    };
    assert!(wsj10_filter(&[long], &policy).is_empty());
}

#[test]
fn ptb_fixture() {
    let trees = read_ptb(fixture("tiny.mrg")).unwrap();
    assert_eq!(trees.len(), 3);
    assert_eq!(trees[0].tokens, ["The", "cat", "sat", "on", "the", "mat", "."]);
    let b = |start, end, tag: &str| Bracket {
        start,
        end,
        tag: tag.into(),
    };
    let first = trees[0].gold_brackets.as_ref().unwrap();
    for expected in [b(1, 7, "S"), b(1, 2, "NP"), b(3, 6, "VP"), b(4, 6, "PP"), b(5, 6, "NP")] {
        assert!(first.contains(&expected), "{expected:?} in {first:?}");
    }
    // empty elements vanish together with the constituents they leave empty
    assert_eq!(trees[1].tokens, ["Go", "home", "!"]);
    assert!(!trees[1].gold_brackets.as_ref().unwrap().iter().any(|x| x.tag == "NP"));
    assert!(trees[2].gold_brackets.as_ref().unwrap().contains(&b(3, 4, "SBAR")));

    let stripped = strip_punct(&trees[0], &PunctPolicy::default());
    assert_eq!(stripped.len(), 6);
    assert!(stripped.gold_brackets.unwrap().contains(&b(1, 6, "S")));
}

#[test]
fn scidtb_fixture() {
    let docs = read_scidtb(fixture("scidtb")).unwrap();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0].id.as_deref(), Some("d1"));
    assert_eq!(docs[0].gold_heads, Some(vec![0, 1, 1]));
    assert_eq!(docs[1].gold_heads, Some(vec![2, 0]));
    assert_eq!(docs[1].tokens[0], "Although results vary ,");
}
