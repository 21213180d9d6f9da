use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::{Edu, GoldSentence};
use crate::dep::validate_heads;
use crate::error::{Error, Result};

#[derive(Deserialize)]
struct Document {
    root: Vec<Entry>,
}

#[derive(Deserialize)]
struct Entry {
    id: i64,
    parent: Option<i64>,
    #[serde(default)]
    text: String,
    #[serde(default)]
    relation: Option<String>,
}

/// Parse one SciDTB document. Entry 0 is the artificial root and is dropped;
/// EDUs must be numbered `1..=N`.
pub fn parse_scidtb(text: &str, id: Option<String>) -> Result<GoldSentence> {
    let text = text.trim_start_matches('\u{feff}');
    let doc: Document =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), format!("malformed SciDTB JSON: {e}")))?;

    let mut entries: Vec<Entry> = doc.root.into_iter().filter(|e| e.id != 0).collect();
    entries.sort_by_key(|e| e.id);
    let n = entries.len();

    let doc_err = |message: String| Error::InvalidTree(format!("{}: {message}", id.as_deref().unwrap_or("document")));

    let mut edus = Vec::with_capacity(n);
    for (pos, e) in entries.into_iter().enumerate() {
        if e.id != pos as i64 + 1 {
            return Err(doc_err(format!("EDU ids not contiguous at id {}", e.id)));
        }
        let parent = e.parent.ok_or_else(|| doc_err(format!("EDU {} has no parent", e.id)))?;
        if parent < 0 || parent as usize > n {
            return Err(doc_err(format!("EDU {} has parent {} outside 0..={}", e.id, parent, n)));
        }
        edus.push(Edu {
            text: e.text.trim().to_owned(),
            head: parent as usize,
            relation: e.relation.unwrap_or_default(),
        });
    }

    let heads: Vec<usize> = edus.iter().map(|e| e.head).collect();
    let roots = heads.iter().filter(|&&h| h == 0).count();
    if n > 0 && roots != 1 {
        return Err(doc_err(format!("forest with {roots} roots")));
    }
    validate_heads(&heads).map_err(|e| doc_err(e.to_string()))?;

    Ok(GoldSentence {
        id,
        tokens: edus.iter().map(|e| e.text.clone()).collect(),
        gold_heads: Some(heads),
        edus: Some(edus),
        ..Default::default()
    })
}

/// Read a SciDTB file, or every `.dep`/`.json` file of a directory in file
/// name order. Document ids are the file stems.
pub fn read_scidtb(path: impl AsRef<Path>) -> Result<Vec<GoldSentence>> {
    let path = path.as_ref();
    let files = if path.is_dir() {
        let mut files: Vec<_> = fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && matches!(p.extension().and_then(|e| e.to_str()), Some("dep") | Some("json")))
            .collect();
        files.sort();
        files
    } else {
        vec![path.to_path_buf()]
    };

    files
        .iter()
        .map(|file| {
            let text = fs::read_to_string(file).map_err(|e| Error::io(file, e))?;
            let id = file.file_stem().map(|s| s.to_string_lossy().into_owned());
            parse_scidtb(&text, id)
        })
        .collect()
}
