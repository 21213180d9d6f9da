use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use super::GoldSentence;
use crate::dep::{validate_heads, DepTree};
use crate::error::{Error, Result};

#[derive(Default)]
struct Block {
    id: Option<String>,
    start_line: usize,
    tokens: Vec<String>,
    upos: Vec<String>,
    xpos: Vec<String>,
    heads: Vec<Option<usize>>,
    head_lines: Vec<usize>,
}

impl Block {
    fn finish(self) -> Result<GoldSentence> {
        let n = self.tokens.len();
        let gold_heads = if self.heads.iter().all(Option::is_none) {
            None
        } else if let Some(pos) = self.heads.iter().position(Option::is_none) {
            return Err(Error::parse(
                self.head_lines[pos],
                "HEAD is '_' while other tokens of the sentence have heads",
            ));
        } else {
            let heads: Vec<usize> = self.heads.iter().map(|h| h.unwrap()).collect();
            if let Some(pos) = heads.iter().position(|&h| h > n) {
                return Err(Error::parse(
                    self.head_lines[pos],
                    format!("HEAD {} out of range for {} tokens", heads[pos], n),
                ));
            }
            validate_heads(&heads).map_err(|e| Error::parse(self.start_line, e.to_string()))?;
            Some(heads)
        };

        Ok(GoldSentence {
            id: self.id,
            tokens: self.tokens,
            upos: Some(self.upos),
            xpos: Some(self.xpos),
            gold_heads,
            ..Default::default()
        })
    }
}

/// Parse CoNLL-U text. Multiword-token ranges (`3-4`) and empty nodes
/// (`5.1`) are skipped; `# sent_id = ...` comments set the sentence id.
pub fn parse_conllu(text: &str) -> Result<Vec<GoldSentence>> {
    let mut sentences = Vec::new();
    let mut block: Option<Block> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end_matches('\r');

        if line.trim().is_empty() {
            if let Some(b) = block.take() {
                if !b.tokens.is_empty() {
                    sentences.push(b.finish()?);
                }
            }
            continue;
        }

        let b = block.get_or_insert_with(|| Block {
            start_line: lineno,
            ..Default::default()
        });

        if let Some(comment) = line.strip_prefix('#') {
            if let Some(id) = comment.trim().strip_prefix("sent_id") {
                let id = id.trim_start().trim_start_matches('=').trim();
                b.id = Some(id.to_owned());
            }
            continue;
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 7 {
            return Err(Error::parse(
                lineno,
                format!("expected 10 tab-separated columns, found {}", fields.len()),
            ));
        }
        let id = fields[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let id: usize = id
            .parse()
            .map_err(|_| Error::parse(lineno, format!("invalid token ID {id:?}")))?;
        if id != b.tokens.len() + 1 {
            return Err(Error::parse(
                lineno,
                format!("token ID {} out of sequence, expected {}", id, b.tokens.len() + 1),
            ));
        }

        let head = match fields[6] {
            "_" => None,
            h => Some(
                h.parse::<usize>()
                    .map_err(|_| Error::parse(lineno, format!("non-integer HEAD {h:?}")))?,
            ),
        };

        b.tokens.push(fields[1].to_owned());
        b.upos.push(fields[3].to_owned());
        b.xpos.push(fields[4].to_owned());
        b.heads.push(head);
        b.head_lines.push(lineno);
    }

    if let Some(b) = block {
        if !b.tokens.is_empty() {
            sentences.push(b.finish()?);
        }
    }
    Ok(sentences)
}

pub fn read_conllu(path: impl AsRef<Path>) -> Result<Vec<GoldSentence>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_conllu(&text)
}

/// Write minimal CoNLL-U: ID, FORM and HEAD filled in, other columns `_`.
pub fn write_conllu_to<W: Write>(trees: &[(Vec<String>, DepTree)], mut out: W) -> std::io::Result<()> {
    for (tokens, tree) in trees {
        for (i, (form, head)) in tokens.iter().zip(tree.heads()).enumerate() {
            writeln!(out, "{}\t{}\t_\t_\t_\t_\t{}\t_\t_\t_", i + 1, form, head)?;
        }
        writeln!(out)?;
    }
    out.flush()
}

pub fn write_conllu(trees: &[(Vec<String>, DepTree)], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_conllu_to(trees, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
