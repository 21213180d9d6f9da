use std::collections::BTreeSet;

use super::{Bracket, Edu, GoldSentence};

/// PTB punctuation tags removed before evaluation.
pub const PTB_PUNCT_TAGS: [&str; 9] = [".", ",", ":", "``", "''", "-LRB-", "-RRB-", "#", "$"];

/// Which tags count as punctuation.
///
/// A token is tested on its UPOS tag when one is present (not `_`), and on
/// its XPOS tag otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PunctPolicy {
    pub xpos: BTreeSet<String>,
    pub upos: BTreeSet<String>,
}

impl Default for PunctPolicy {
    fn default() -> Self {
        PunctPolicy {
            xpos: PTB_PUNCT_TAGS.iter().map(|t| t.to_string()).collect(),
            upos: ["PUNCT".to_owned()].into_iter().collect(),
        }
    }
}

impl PunctPolicy {
    pub fn is_punct(&self, s: &GoldSentence, i: usize) -> bool {
        let tag = |tags: &Option<Vec<String>>| {
            tags.as_ref()
                .and_then(|t| t.get(i))
                .filter(|t| !t.is_empty() && t.as_str() != "_")
                .cloned()
        };
        if let Some(upos) = tag(&s.upos) {
            return self.upos.contains(&upos);
        }
        if let Some(xpos) = tag(&s.xpos) {
            return self.xpos.contains(&xpos);
        }
        false
    }

    /// 0-based indices of the tokens that survive punctuation removal.
    pub fn retained(&self, s: &GoldSentence) -> Vec<usize> {
        (0..s.len()).filter(|&i| !self.is_punct(s, i)).collect()
    }

    pub fn word_count(&self, s: &GoldSentence) -> usize {
        (0..s.len()).filter(|&i| !self.is_punct(s, i)).count()
    }
}

/// Remove punctuation tokens and reindex heads and brackets.
///
/// Dependents of a removed token climb to its nearest retained ancestor. If
/// the root itself is removed, the leftmost token that would reach the
/// artificial root becomes the new root and the others attach to it.
/// Brackets shrink to their retained tokens; brackets left empty vanish.
pub fn strip_punct(s: &GoldSentence, policy: &PunctPolicy) -> GoldSentence {
    let keep = policy.retained(s);
    if keep.len() == s.len() {
        return s.clone();
    }
    let n = s.len();
    let mut removed = vec![true; n + 1];
    removed[0] = false;
    for &k in &keep {
        removed[k + 1] = false;
    }

    // new_index[old 1-based] = new 1-based
    let mut new_index = vec![0usize; n + 1];
    for (new, &old) in keep.iter().enumerate() {
        new_index[old + 1] = new + 1;
    }

    let pick = |v: &Option<Vec<String>>| -> Option<Vec<String>> {
        v.as_ref().map(|v| keep.iter().map(|&k| v[k].clone()).collect())
    };

    let remap_heads = |heads: &[usize]| -> Vec<usize> {
        let mut out: Vec<usize> = keep
            .iter()
            .map(|&k| {
                let mut h = heads[k];
                while h != 0 && removed[h] {
                    h = heads[h - 1];
                }
                new_index[h]
            })
            .collect();
        if let Some(first_root) = out.iter().position(|&h| h == 0) {
            for (i, h) in out.iter_mut().enumerate() {
                if *h == 0 && i != first_root {
                    *h = first_root + 1;
                }
            }
        }
        out
    };

    let gold_heads = s.gold_heads.as_deref().map(remap_heads);

    let kept_before: Vec<usize> = {
        // kept_before[i] = retained tokens among the first i tokens
        let mut acc = vec![0; n + 1];
        for i in 0..n {
            acc[i + 1] = acc[i] + usize::from(!removed[i + 1]);
        }
        acc
    };
    let gold_brackets = s.gold_brackets.as_ref().map(|brackets| {
        brackets
            .iter()
            .filter_map(|b| {
                let start = kept_before[b.start - 1] + 1;
                let end = kept_before[b.end];
                (start <= end).then(|| Bracket {
                    start,
                    end,
                    tag: b.tag.clone(),
                })
            })
            .collect()
    });

    let edus = s.edus.as_ref().map(|edus| {
        let heads: Vec<usize> = edus.iter().map(|e| e.head).collect();
        let heads = remap_heads(&heads);
        keep.iter()
            .zip(heads)
            .map(|(&k, head)| Edu {
                head,
                ..edus[k].clone()
            })
            .collect()
    });

    GoldSentence {
        id: s.id.clone(),
        tokens: keep.iter().map(|&k| s.tokens[k].clone()).collect(),
        upos: pick(&s.upos),
        xpos: pick(&s.xpos),
        gold_heads,
        gold_brackets,
        edus,
    }
}

/// Keep sentences with at most ten words once punctuation is discounted.
pub fn wsj10_filter(corpus: &[GoldSentence], policy: &PunctPolicy) -> Vec<GoldSentence> {
    corpus.iter().filter(|s| policy.word_count(s) <= 10).cloned().collect()
}
