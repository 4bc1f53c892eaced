//! Spelling correction from a word-frequency list.
//!
//! A misspelled token is replaced by the highest-frequency dictionary word
//! within Levenshtein distance 2 (ties: smaller distance, then alphabetical).
//! Lookup is case-insensitive; corrections return the dictionary casing.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::keymatch::edit_distance;

#[derive(Debug, Clone, Default)]
pub struct SpellingDictionary {
    // lowercase word -> (original casing, frequency count)
    entries: BTreeMap<String, (String, u64)>,
}

impl SpellingDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads a `word<TAB>count` list.
    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut dict = SpellingDictionary::new();
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, count) = line.split_once('\t').ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: "expected `word<TAB>count`".into(),
            })?;
            let count: u64 = count.trim().parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: format!("bad count '{count}'"),
            })?;
            dict.insert(word, count);
        }
        Ok(dict)
    }

    /// Parses the bundled list shipped with the crate.
    pub fn from_tsv_str(data: &str) -> Self {
        let mut dict = SpellingDictionary::new();
        for line in data.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((word, count)) = line.split_once('\t') {
                if let Ok(count) = count.trim().parse() {
                    dict.insert(word, count);
                }
            }
        }
        dict
    }

    pub fn insert(&mut self, word: &str, count: u64) {
        self.entries
            .insert(word.to_lowercase(), (word.to_string(), count));
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.values().map(|(w, c)| (w.as_str(), *c))
    }

    /// Corrects one alphabetic token; everything else passes through.
    pub fn correct(&self, token: &str) -> String {
        if token.is_empty() || !token.chars().all(|c| c.is_ascii_alphabetic()) {
            return token.to_string();
        }
        let lower = token.to_lowercase();
        if self.entries.contains_key(&lower) {
            return token.to_string();
        }

        // generation covers every string within Levenshtein distance 2
        // (plus a few transposition extras, filtered out below)
        let mut candidates: HashSet<String> = HashSet::new();
        for e1 in edits1(&lower) {
            if self.entries.contains_key(&e1) {
                candidates.insert(e1.clone());
            }
            for e2 in edits1(&e1) {
                if self.entries.contains_key(&e2) {
                    candidates.insert(e2);
                }
            }
        }

        let best = candidates
            .into_iter()
            .filter_map(|cand| {
                let dist = edit_distance(&lower, &cand) as u64;
                (dist <= 2).then_some((cand, dist))
            })
            .map(|(cand, dist)| {
                let count = self.entries[&cand].1;
                (cand, count, dist)
            })
            .max_by(|a, b| {
                (a.1, std::cmp::Reverse(a.2), std::cmp::Reverse(&a.0))
                    .cmp(&(b.1, std::cmp::Reverse(b.2), std::cmp::Reverse(&b.0)))
            });

        match best {
            Some((cand, _, _)) => self.entries[&cand].0.clone(),
            None => token.to_string(),
        }
    }
}

/// All strings one delete, transpose, replace, or insert away.
fn edits1(word: &str) -> Vec<String> {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    let w = word.as_bytes();
    let n = w.len();
    let mut out = Vec::with_capacity(54 * n + 25);
    let push = |out: &mut Vec<String>, bytes: Vec<u8>| {
        out.push(String::from_utf8(bytes).expect("ascii edits"));
    };
    for i in 0..n {
        // deletes
        let mut d = w.to_vec();
        d.remove(i);
        push(&mut out, d);
        // transposes
        if i + 1 < n {
            let mut t = w.to_vec();
            t.swap(i, i + 1);
            push(&mut out, t);
        }
        // replaces
        for &c in ALPHABET {
            if c != w[i] {
                let mut r = w.to_vec();
                r[i] = c;
                push(&mut out, r);
            }
        }
    }
    // inserts
    for i in 0..=n {
        for &c in ALPHABET {
            let mut ins = w.to_vec();
            ins.insert(i, c);
            push(&mut out, ins);
        }
    }
    out
}
