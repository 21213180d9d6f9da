use std::fs;
use std::path::Path;

use super::{Bracket, GoldSentence};
use crate::error::{Error, Result};

enum Node {
    Leaf(String),
    Tree { label: String, children: Vec<Node> },
}

#[derive(Debug, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(text: &str) -> Vec<(Token<'_>, usize)> {
    let mut tokens = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let mut rest = line;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            rest = &rest[start..];
            let token = if rest.starts_with('(') {
                rest = &rest[1..];
                Token::Open
            } else if rest.starts_with(')') {
                rest = &rest[1..];
                Token::Close
            } else {
                let end = rest
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(rest.len());
                let atom = &rest[..end];
                rest = &rest[end..];
                Token::Atom(atom)
            };
            tokens.push((token, idx + 1));
        }
    }
    tokens
}

struct Parser<'a> {
    tokens: Vec<(Token<'a>, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn line(&self) -> usize {
        self.tokens.get(self.pos).or(self.tokens.last()).map_or(1, |t| t.1)
    }

    /// Parse one tree; the opening parenthesis has been consumed.
    fn tree(&mut self) -> Result<Node> {
        let label = match self.tokens.get(self.pos) {
            Some((Token::Atom(a), _)) => {
                self.pos += 1;
                (*a).to_owned()
            }
            _ => String::new(),
        };
        let mut children = Vec::new();
        loop {
            match self.tokens.get(self.pos) {
                None => return Err(Error::parse(self.line(), "unbalanced parentheses: missing ')'")),
                Some((Token::Close, _)) => {
                    self.pos += 1;
                    return Ok(Node::Tree { label, children });
                }
                Some((Token::Open, _)) => {
                    self.pos += 1;
                    children.push(self.tree()?);
                }
                Some((Token::Atom(a), _)) => {
                    self.pos += 1;
                    children.push(Node::Leaf((*a).to_owned()));
                }
            }
        }
    }
}

/// Strip function tags and indices: `NP-SBJ-1` becomes `NP`.
fn base_label(label: &str) -> &str {
    if label.starts_with('-') {
        return label;
    }
    label.split(['-', '=']).next().unwrap_or(label)
}

#[derive(Default)]
struct Collector {
    tokens: Vec<String>,
    tags: Vec<String>,
    brackets: Vec<Bracket>,
}

impl Collector {
    fn visit(&mut self, node: &Node) {
        match node {
            Node::Leaf(word) => {
                self.tokens.push(word.clone());
                self.tags.push(String::new());
            }
            Node::Tree { label, children } => {
                if let [Node::Leaf(word)] = children.as_slice() {
                    if label != "-NONE-" {
                        self.tokens.push(word.clone());
                        self.tags.push(label.clone());
                    }
                    return;
                }
                let start = self.tokens.len() + 1;
                for child in children {
                    self.visit(child);
                }
                let end = self.tokens.len();
                // Constituents that only covered empty elements vanish.
                if end >= start && !label.is_empty() {
                    self.brackets.push(Bracket {
                        start,
                        end,
                        tag: base_label(label).to_owned(),
                    });
                }
            }
        }
    }
}

/// Parse Penn Treebank bracketed trees, one per line or in `.mrg` layout.
///
/// Empty elements (`-NONE-`) are dropped together with constituents that
/// become empty; bracket tags lose their function tags.
pub fn parse_ptb(text: &str) -> Result<Vec<GoldSentence>> {
    let mut parser = Parser {
        tokens: tokenize(text),
        pos: 0,
    };
    let mut sentences = Vec::new();
    while parser.pos < parser.tokens.len() {
        match parser.tokens[parser.pos] {
            (Token::Open, _) => {
                parser.pos += 1;
                let tree = parser.tree()?;
                let mut c = Collector::default();
                c.visit(&tree);
                if c.tokens.is_empty() {
                    continue;
                }
                c.brackets.sort_by(|a, b| a.start.cmp(&b.start).then(b.end.cmp(&a.end)));
                sentences.push(GoldSentence {
                    tokens: c.tokens,
                    xpos: Some(c.tags),
                    gold_brackets: Some(c.brackets),
                    ..Default::default()
                });
            }
            (Token::Close, line) => return Err(Error::parse(line, "unbalanced parentheses: unexpected ')'")),
            (Token::Atom(a), line) => return Err(Error::parse(line, format!("unexpected token {a:?} outside a tree"))),
        }
    }
    Ok(sentences)
}

pub fn read_ptb(path: impl AsRef<Path>) -> Result<Vec<GoldSentence>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ptb(&text)
}
