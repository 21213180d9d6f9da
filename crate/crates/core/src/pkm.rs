//! Line-delimited JSON serialization of matrix corpora (`.pkm`).
//!
//! ```text
//! {"pkm_version":"1","kind":"token","metric":"dist","meta":{}}
//! {"id":"s1","units":["a","b"],"values":[[0.0,1.0],[2.0,0.0]]}
//! ```
//!
//! The first line is the header, every following line one matrix. Floats are
//! written in their shortest round-trip decimal form.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ImpactMatrix, MatrixCorpus, Metric, UnitKind};

pub const PKM_VERSION: &str = "1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    pkm_version: String,
    kind: UnitKind,
    metric: Metric,
    #[serde(default)]
    meta: BTreeMap<String, serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    id: String,
    units: Vec<String>,
    values: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct RecordRef<'a> {
    id: &'a str,
    units: &'a [String],
    values: Vec<&'a [f64]>,
}

/// Read a corpus from any buffered reader.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<MatrixCorpus> {
    let mut corpus: Option<MatrixCorpus> = None;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }

        match corpus.as_mut() {
            None => {
                let header: Header =
                    serde_json::from_str(&line).map_err(|e| Error::parse(lineno, format!("malformed header: {e}")))?;
                if header.pkm_version != PKM_VERSION {
                    return Err(Error::parse(
                        lineno,
                        format!("unsupported pkm_version {:?}", header.pkm_version),
                    ));
                }
                let mut c = MatrixCorpus::new(header.kind, header.metric);
                c.meta = header.meta;
                corpus = Some(c);
            }
            Some(c) => {
                let record: Record =
                    serde_json::from_str(&line).map_err(|e| Error::parse(lineno, format!("malformed record: {e}")))?;
                let matrix = ImpactMatrix::new(record.id, c.kind, c.metric, record.units, record.values)
                    .map_err(|e| Error::parse(lineno, e.to_string()))?;
                c.push(matrix).map_err(|e| Error::parse(lineno, e.to_string()))?;
            }
        }
    }

    corpus.ok_or_else(|| Error::parse(1, "missing header line"))
}

/// Write a corpus to any writer.
pub fn write_corpus<W: Write>(corpus: &MatrixCorpus, mut writer: W) -> std::io::Result<()> {
    let header = Header {
        pkm_version: PKM_VERSION.to_owned(),
        kind: corpus.kind,
        metric: corpus.metric,
        meta: corpus.meta.clone(),
    };
    serde_json::to_writer(&mut writer, &header)?;
    writer.write_all(b"\n")?;

    for m in corpus.matrices() {
        let record = RecordRef {
            id: m.id(),
            units: m.units(),
            values: m.rows().collect(),
        };
        serde_json::to_writer(&mut writer, &record)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<MatrixCorpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file))
}

pub fn save_corpus(corpus: &MatrixCorpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_corpus(corpus, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
