//! Parsing and checking published lists of representations.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};

use super::scan::{enumerate, ScanOptions};
use super::tokens::{OrbitKey, TokenTuple};

/// The shipped `SO(3)` list (105 entries).
pub const SO3_LIST: &str = include_str!("../../data/appendix_so3.txt");
/// The shipped `SO(4)` list (882 entries).
pub const SO4_LIST: &str = include_str!("../../data/appendix_so4.txt");

/// Parse tuples `(x1, x2, x3, x4, x5)`. A line may hold several tuples
/// separated by commas, optionally wrapped in braces; blank lines and lines
/// starting with `#` are skipped.
pub fn parse_list(text: &str, n: usize) -> Result<Vec<TokenTuple>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut rest = line;
        loop {
            rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',' || c == '{' || c == '}');
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('(') {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected '(' at {:?}", rest.chars().take(12).collect::<String>()),
                });
            }
            let close = rest.find(')').ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "unterminated tuple".into(),
            })?;
            let t = TokenTuple::parse(&rest[..=close], n).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
            out.push(t);
            rest = &rest[close + 1..];
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub group: String,
    pub entries: usize,
    /// Entries whose expanded representation fails to certify.
    pub uncertified: Vec<String>,
    /// Pairs of entries in the same gauge orbit.
    pub duplicates: Vec<(String, String)>,
    /// Certified orbits from the exhaustive enumeration absent from the list.
    pub missing: Vec<OrbitKey>,
    pub enumerated_orbits: usize,
    pub passed: bool,
}

/// Check that every entry certifies, no two entries are gauge equivalent, and
/// the entries cover every certified orbit.
pub fn verify_appendix(list: &[TokenTuple], n: usize) -> Result<AppendixReport> {
    if let Some(t) = list.iter().find(|t| t.n() != n) {
        return Err(Error::Domain(format!("entry {t} is not an SO({n}) tuple")));
    }
    let catalog = enumerate(n, ScanOptions::default())?;
    let certified: BTreeSet<OrbitKey> = catalog.keys().into_iter().collect();

    let mut seen: BTreeMap<OrbitKey, TokenTuple> = BTreeMap::new();
    let mut duplicates = Vec::new();
    let mut uncertified = Vec::new();
    for t in list {
        let k = t.canonical_key();
        if !certified.contains(&k) {
            // Keys outside the catalog are either inadmissible or fail the
            // exact certificate; recompute to be sure.
            let rep = crate::certify::certify_unchecked(&t.expand(), false);
            if !rep.certified {
                uncertified.push(t.to_string());
            }
        }
        if let Some(prev) = seen.insert(k, *t) {
            duplicates.push((prev.to_string(), t.to_string()));
        }
    }
    let missing: Vec<OrbitKey> = certified
        .iter()
        .filter(|k| !seen.contains_key(k))
        .cloned()
        .collect();
    let passed = uncertified.is_empty() && duplicates.is_empty() && missing.is_empty();
    Ok(AppendixReport {
        group: format!("SO({n})"),
        entries: list.len(),
        uncertified,
        duplicates,
        missing,
        enumerated_orbits: certified.len(),
        passed,
    })
}
