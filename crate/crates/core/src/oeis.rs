//! OEIS b-file parsing and comparison. Fetching lives in the CLI.

use serde::Serialize;

use crate::analysis::{compare_reference, ReferenceEntry, VerificationReport};
use crate::enumerator::CountTable;
use crate::{Count, Error, Result};

/// Number of finite O-sequences of multiplicity `d`.
pub const O_SEQUENCE_ID: &str = "A232476";

pub fn bfile_url(id: &str) -> String {
    format!("https://oeis.org/{id}/b{}.txt", id.trim_start_matches('A'))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OeisReference {
    pub id: String,
    pub entries: Vec<(u32, Count)>,
}

impl OeisReference {
    /// Parses `index value` lines; blank lines and `#` comments are skipped.
    pub fn parse(id: &str, text: &str) -> Result<Self> {
        let mut entries: Vec<(u32, Count)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::Format { line: lineno, msg };
            let mut fields = line.split_whitespace();
            let (Some(i), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(bad(format!("expected `index value`, found {line:?}")));
            };
            let i: u32 = i.parse().map_err(|_| bad(format!("bad index {i:?}")))?;
            let v: Count = v.parse().map_err(|_| bad(format!("bad value {v:?}")))?;
            if v == 0 {
                return Err(bad("values must be positive".into()));
            }
            if entries.last().is_some_and(|&(prev, _)| prev >= i) {
                return Err(bad(format!("index {i} is not increasing")));
            }
            entries.push((i, v));
        }
        Ok(OeisReference {
            id: id.to_string(),
            entries,
        })
    }

    pub fn to_reference(&self, max_index: u32) -> Vec<ReferenceEntry> {
        self.entries
            .iter()
            .filter(|&&(d, _)| d <= max_index)
            .map(|&(d, value)| ReferenceEntry {
                d,
                value,
                flagged: false,
            })
            .collect()
    }

    /// Compares `O_1..O_max_d` with the fetched entries.
    pub fn compare(&self, t: &CountTable, max_d: u32) -> VerificationReport {
        let mut r = compare_reference(t, &self.to_reference(max_d));
        r.suite = format!("oeis-{}", self.id);
        r
    }
}
