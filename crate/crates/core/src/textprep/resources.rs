//! Bundled preprocessing resources and loaders for user-supplied ones.
//!
//! File formats: word lists are one entry per line; maps are UTF-8 TSV
//! `surface<TAB>replacement`; the spelling list is `word<TAB>count`.
//! Lines starting with `#` are comments.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::textprep::spell::SpellingDictionary;

const STOPWORDS_TXT: &str = include_str!("../../data/stopwords.txt");
const SLANG_TSV: &str = include_str!("../../data/slang.tsv");
const CONTRACTIONS_TSV: &str = include_str!("../../data/contractions.tsv");
const NEGATORS_TXT: &str = include_str!("../../data/negators.txt");
const SPELL_FREQ_TSV: &str = include_str!("../../data/spell_freq.tsv");

static STOPWORDS: LazyLock<BTreeSet<String>> = LazyLock::new(|| parse_word_list(STOPWORDS_TXT));
static SLANG: LazyLock<BTreeMap<String, String>> = LazyLock::new(|| parse_map(SLANG_TSV));
static CONTRACTIONS: LazyLock<BTreeMap<String, String>> =
    LazyLock::new(|| parse_map(CONTRACTIONS_TSV));
static NEGATORS: LazyLock<BTreeSet<String>> = LazyLock::new(|| parse_word_list(NEGATORS_TXT));
static SPELLING: LazyLock<SpellingDictionary> =
    LazyLock::new(|| SpellingDictionary::from_tsv_str(SPELL_FREQ_TSV));

pub fn bundled_stopwords() -> &'static BTreeSet<String> {
    &STOPWORDS
}

pub fn bundled_slang() -> &'static BTreeMap<String, String> {
    &SLANG
}

pub fn bundled_contractions() -> &'static BTreeMap<String, String> {
    &CONTRACTIONS
}

pub fn bundled_negators() -> &'static BTreeSet<String> {
    &NEGATORS
}

pub fn bundled_spelling() -> &'static SpellingDictionary {
    &SPELLING
}

fn parse_word_list(data: &str) -> BTreeSet<String> {
    data.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

fn parse_map(data: &str) -> BTreeMap<String, String> {
    data.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| {
            l.split_once('\t')
                .map(|(k, v)| (k.to_lowercase(), v.trim().to_string()))
        })
        .collect()
}

/// Loads a one-word-per-line list (stopwords, negators).
pub fn load_word_list(path: &Path) -> Result<BTreeSet<String>> {
    Ok(parse_word_list(&read(path)?))
}

/// Loads a `surface<TAB>replacement` map (slang, contractions).
pub fn load_map(path: &Path) -> Result<BTreeMap<String, String>> {
    let data = read(path)?;
    for (idx, line) in data.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !line.contains('\t') {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: "expected `surface<TAB>replacement`".into(),
            });
        }
    }
    Ok(parse_map(&data))
}

fn read(path: &Path) -> Result<String> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = String::new();
    for line in BufReader::new(file).lines() {
        out.push_str(&line.map_err(|e| Error::io(path, e))?);
        out.push('\n');
    }
    Ok(out)
}
