//! Emotion lexicon handling and per-day etf-idf emotion vectors.
//!
//! `etf(e, doc)` counts occurrences of terms flagged with emotion `e` in a
//! document; `idf(e, docs) = ln(N / (1 + df(e)))` over one day's documents.
//! A day's value for an emotion is the sum of per-document etf counts times
//! the day's idf. The +1 smoothing makes idf slightly negative when every
//! document carries the emotion; such values are kept, not clamped.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marketdata::Ticker;

/// The eight core emotions, in stable (alphabetical) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
}

pub const ALL_EMOTIONS: [Emotion; 8] = [
    Emotion::Anger,
    Emotion::Anticipation,
    Emotion::Disgust,
    Emotion::Fear,
    Emotion::Joy,
    Emotion::Sadness,
    Emotion::Surprise,
    Emotion::Trust,
];

/// Emotions carried by the five-emotion gold-standard source.
pub const GOLD_EMOTIONS: [Emotion; 5] = [
    Emotion::Joy,
    Emotion::Anger,
    Emotion::Sadness,
    Emotion::Fear,
    Emotion::Disgust,
];

impl Emotion {
    pub fn name(&self) -> &'static str {
        match self {
            Emotion::Anger => "anger",
            Emotion::Anticipation => "anticipation",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Joy => "joy",
            Emotion::Sadness => "sadness",
            Emotion::Surprise => "surprise",
            Emotion::Trust => "trust",
        }
    }

    pub fn parse(s: &str) -> Result<Emotion> {
        ALL_EMOTIONS
            .iter()
            .copied()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownEmotion(s.to_string()))
    }

    fn bit(&self) -> u8 {
        1 << ALL_EMOTIONS.iter().position(|e| e == self).unwrap()
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-word emotion flags, one bit per emotion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EmotionSet(u8);

impl EmotionSet {
    pub fn empty() -> Self {
        EmotionSet(0)
    }

    pub fn with(mut self, e: Emotion) -> Self {
        self.0 |= e.bit();
        self
    }

    pub fn contains(&self, e: Emotion) -> bool {
        self.0 & e.bit() != 0
    }

    pub fn union(&self, other: EmotionSet) -> EmotionSet {
        EmotionSet(self.0 | other.0)
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Emotion> + '_ {
        ALL_EMOTIONS.into_iter().filter(|e| self.contains(*e))
    }
}

impl FromIterator<Emotion> for EmotionSet {
    fn from_iter<T: IntoIterator<Item = Emotion>>(iter: T) -> Self {
        iter.into_iter().fold(EmotionSet::empty(), EmotionSet::with)
    }
}

/// Word -> emotion-flag lexicon. Every stored entry has at least one flag;
/// words whose source rows are all zero are never inserted.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmotionLexicon {
    entries: BTreeMap<String, EmotionSet>,
}

impl EmotionLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, word: impl Into<String>, set: EmotionSet) {
        if set.is_empty() {
            return;
        }
        let word = word.into();
        let slot = self.entries.entry(word).or_insert_with(EmotionSet::empty);
        *slot = slot.union(set);
    }

    pub fn get(&self, word: &str) -> Option<EmotionSet> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &EmotionSet)> {
        self.entries.iter()
    }

    /// Loads the NRC-style TSV layout: `word<TAB>emotion<TAB>0|1`.
    ///
    /// Rows whose label is not one of the eight core emotions (the published
    /// file also carries `positive`/`negative` rows) are skipped.
    pub fn load_nrc_tsv(path: &Path) -> Result<EmotionLexicon> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lex = EmotionLexicon::new();
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split('\t');
            let (word, label, flag) = match (parts.next(), parts.next(), parts.next()) {
                (Some(w), Some(l), Some(f)) => (w, l, f),
                _ => {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line: line_no,
                        message: format!("expected `word<TAB>emotion<TAB>0|1`, got '{line}'"),
                    })
                }
            };
            let flag = match flag.trim() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line: line_no,
                        message: format!("flag must be 0 or 1, got '{other}'"),
                    })
                }
            };
            if !flag {
                continue;
            }
            if let Ok(e) = Emotion::parse(label) {
                lex.insert(word, EmotionSet::empty().with(e));
            }
        }
        Ok(lex)
    }

    /// Loads the gold-standard CSV layout: a `word` column followed by one
    /// 0/1 column per emotion (any subset of the eight core labels).
    pub fn load_gold_csv(path: &Path) -> Result<EmotionLexicon> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: 0,
                message: e.to_string(),
            })?;
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        let mut emotion_cols: Vec<(usize, Emotion)> = Vec::new();
        for (i, h) in headers.iter().enumerate() {
            if let Ok(e) = Emotion::parse(h) {
                emotion_cols.push((i, e));
            }
        }
        if emotion_cols.is_empty() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: "no emotion columns found in header".into(),
            });
        }
        let mut lex = EmotionLexicon::new();
        for (idx, rec) in reader.records().enumerate() {
            let line_no = idx + 2;
            let rec = rec.map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: e.to_string(),
            })?;
            let word = rec.get(0).unwrap_or("").to_string();
            if word.is_empty() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: line_no,
                    message: "empty word column".into(),
                });
            }
            let mut set = EmotionSet::empty();
            for &(col, e) in &emotion_cols {
                match rec.get(col).map(str::trim) {
                    Some("1") => set = set.with(e),
                    Some("0") | Some("") | None => {}
                    Some(other) => {
                        return Err(Error::Parse {
                            path: path.to_path_buf(),
                            line: line_no,
                            message: format!("flag must be 0 or 1, got '{other}'"),
                        })
                    }
                }
            }
            lex.insert(word, set);
        }
        Ok(lex)
    }
}

/// Union-merges two lexicons; flags of shared words are OR-ed. Emotions
/// absent from a source are simply absent from its flag sets (nulled), so
/// gold-only words carry flags only for the gold emotion subset.
pub fn merge_lexicons(nrc: &EmotionLexicon, gold: &EmotionLexicon) -> EmotionLexicon {
    let mut merged = nrc.clone();
    for (word, set) in gold.iter() {
        merged.insert(word.clone(), *set);
    }
    merged
}

/// Emotion term frequency: occurrences in `doc` of terms flagged with
/// `emotion`, multiplicity counted. A term flagged with several emotions
/// contributes fully to each.
pub fn etf(emotion: Emotion, doc: &[String], lexicon: &EmotionLexicon) -> u64 {
    doc.iter()
        .filter(|tok| {
            lexicon
                .get(tok.as_str())
                .map(|set| set.contains(emotion))
                .unwrap_or(false)
        })
        .count() as u64
}

/// Inverse document frequency: `ln(N / (1 + df))` where `df` is the number
/// of documents containing at least one term flagged with the emotion.
pub fn idf(emotion: Emotion, docs: &[Vec<String>], lexicon: &EmotionLexicon) -> Result<f64> {
    if docs.is_empty() {
        return Err(Error::InvalidInput("idf over an empty document list".into()));
    }
    let n = docs.len() as f64;
    let df = docs.iter().filter(|d| etf(emotion, d, lexicon) > 0).count() as f64;
    Ok((n / (1.0 + df)).ln())
}

/// One day's etf-idf emotion vector for a (ticker, date).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionVector {
    pub ticker: Ticker,
    pub date: NaiveDate,
    pub values: BTreeMap<Emotion, f64>,
    pub doc_count: usize,
    /// True when no document that day hit the lexicon at all.
    pub no_signal: bool,
}

/// Computes the day's vector: `values[e] = (sum of per-doc etf) * idf(e)`.
/// Returns `None` when `docs` is empty (the day is skipped).
pub fn daily_emotion_vector(
    ticker: &Ticker,
    date: NaiveDate,
    docs: &[Vec<String>],
    lexicon: &EmotionLexicon,
) -> Result<Option<EmotionVector>> {
    if docs.is_empty() {
        return Ok(None);
    }
    let mut values = BTreeMap::new();
    let mut any_hit = false;
    for e in ALL_EMOTIONS {
        let etf_sum: u64 = docs.iter().map(|d| etf(e, d, lexicon)).sum();
        let v = if etf_sum == 0 {
            0.0
        } else {
            any_hit = true;
            etf_sum as f64 * idf(e, docs, lexicon)?
        };
        values.insert(e, v);
    }
    Ok(Some(EmotionVector {
        ticker: ticker.clone(),
        date,
        values,
        doc_count: docs.len(),
        no_signal: !any_hit,
    }))
}

/// JSONL row shape for emitted emotion vectors.
#[derive(Debug, Serialize, Deserialize)]
pub struct EmotionRow {
    pub ticker: Ticker,
    pub date: NaiveDate,
    pub anger: f64,
    pub anticipation: f64,
    pub disgust: f64,
    pub fear: f64,
    pub joy: f64,
    pub sadness: f64,
    pub surprise: f64,
    pub trust: f64,
    pub doc_count: usize,
}

impl From<&EmotionVector> for EmotionRow {
    fn from(v: &EmotionVector) -> Self {
        let g = |e: Emotion| v.values.get(&e).copied().unwrap_or(0.0);
        EmotionRow {
            ticker: v.ticker.clone(),
            date: v.date,
            anger: g(Emotion::Anger),
            anticipation: g(Emotion::Anticipation),
            disgust: g(Emotion::Disgust),
            fear: g(Emotion::Fear),
            joy: g(Emotion::Joy),
            sadness: g(Emotion::Sadness),
            surprise: g(Emotion::Surprise),
            trust: g(Emotion::Trust),
            doc_count: v.doc_count,
        }
    }
}
