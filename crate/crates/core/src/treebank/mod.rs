//! Gold-standard corpora: CoNLL-U dependencies, PTB brackets and SciDTB
//! discourse trees, plus punctuation handling.

mod conllu;
mod ptb;
mod punct;
mod scidtb;

pub use conllu::{parse_conllu, read_conllu, write_conllu, write_conllu_to};
pub use ptb::{parse_ptb, read_ptb};
pub use punct::{strip_punct, wsj10_filter, PunctPolicy};
pub use scidtb::{parse_scidtb, read_scidtb};

use serde::Serialize;

/// A labelled gold span `(start, end)`, 1-based inclusive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bracket {
    pub start: usize,
    pub end: usize,
    pub tag: String,
}

/// An elementary discourse unit with its gold head (0 = root).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edu {
    pub text: String,
    pub head: usize,
    pub relation: String,
}

/// One gold sentence (or, for discourse, one document of EDUs).
///
/// For discourse documents `tokens` holds the EDU texts so that every
/// consumer can treat units uniformly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GoldSentence {
    pub id: Option<String>,
    pub tokens: Vec<String>,
    pub upos: Option<Vec<String>>,
    pub xpos: Option<Vec<String>>,
    pub gold_heads: Option<Vec<usize>>,
    pub gold_brackets: Option<Vec<Bracket>>,
    pub edus: Option<Vec<Edu>>,
}

impl GoldSentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// 1-based root unit of the gold dependency tree, if present.
    pub fn gold_root(&self) -> Option<usize> {
        self.gold_heads
            .as_ref()
            .and_then(|h| h.iter().position(|&x| x == 0))
            .map(|p| p + 1)
    }
}
