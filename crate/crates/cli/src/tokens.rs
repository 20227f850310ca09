//! JSON Lines serialization of lexed tokens, one object per token.

use std::io::{self, BufRead, Write};

use invlex_core::json::{JsonRules, JsonToken};
use serde::{Deserialize, Serialize};

use crate::decode::Decoded;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenRecord {
    pub tag: String,
    #[serde(rename = "isSeparator")]
    pub is_separator: bool,
    /// Length in characters.
    pub size: usize,
    /// Byte offset of the token in the input file.
    pub offset: usize,
    pub text: String,
}

/// Records for `tokens`, which must be a lex of a prefix of `decoded`.
pub fn records(rules: &JsonRules, tokens: &[JsonToken], decoded: &Decoded) -> Vec<TokenRecord> {
    let mut pos = 0;
    tokens
        .iter()
        .map(|t| {
            let rec = TokenRecord {
                tag: t.tag().to_string(),
                is_separator: t.is_separator(),
                size: t.size(),
                offset: decoded.byte_offset(pos),
                text: rules.characters(t).into_iter().collect(),
            };
            pos += t.size();
            rec
        })
        .collect()
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[TokenRecord]) -> io::Result<()> {
    for rec in records {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_jsonl<R: BufRead>(input: R) -> io::Result<Vec<TokenRecord>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}
