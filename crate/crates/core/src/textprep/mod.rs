//! Text preprocessing pipeline.
//!
//! Stage order: punctuation/bracket strip, URL and non-ASCII removal,
//! hashtag-word and stopword removal, then for Twitter text slang
//! replacement, contraction expansion and spelling correction, then
//! lemmatization, and for Loughran-McDonald scoring a final stemming pass.
//! Case is never folded; the `@` glyph is removed but the mention body kept.

mod lemma;
mod porter;
mod pos;
pub mod resources;
mod spell;

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

pub use lemma::{Lemmatizer, RuleLemmatizer};
pub use porter::stem;
pub use pos::{pos_filter, PosTag, PosTagger, RuleTagger, TaggedToken};
pub use spell::SpellingDictionary;

use crate::ingest::Source;
use crate::marketdata::Ticker;

/// Engagement metadata captured for Twitter posts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Engagement {
    pub likes: u64,
    pub retweets: u64,
    pub replies: u64,
}

/// One dated, ticker-tagged, source-tagged text entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextDocument {
    pub id: String,
    pub date: NaiveDate,
    pub ticker: Ticker,
    pub source: Source,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engagement: Option<Engagement>,
}

impl TextDocument {
    /// Engagement present only for Twitter documents.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.engagement.is_some() && self.source != Source::Twitter {
            return Err(format!(
                "document {}: engagement metadata on non-twitter source {:?}",
                self.id, self.source
            ));
        }
        Ok(())
    }
}

/// Which pipeline branches apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrepMode {
    /// Shared stages only.
    Generic,
    /// Adds slang replacement, contraction expansion, spelling correction.
    Twitter,
    /// Adds stemming; contractions stay intact for the negation scan.
    Lm,
}

/// Preprocessing configuration. The bundled resources are the defaults;
/// each piece can be replaced from user-supplied files.
#[derive(Debug, Clone)]
pub struct PrepConfig {
    pub mode: PrepMode,
    pub stopwords: BTreeSet<String>,
    pub slang: BTreeMap<String, String>,
    pub contractions: BTreeMap<String, String>,
    pub spelling: SpellingDictionary,
}

impl PrepConfig {
    pub fn new(mode: PrepMode) -> Self {
        PrepConfig {
            mode,
            stopwords: resources::bundled_stopwords().clone(),
            slang: resources::bundled_slang().clone(),
            contractions: resources::bundled_contractions().clone(),
            spelling: resources::bundled_spelling().clone(),
        }
    }

    pub fn generic() -> Self {
        Self::new(PrepMode::Generic)
    }

    pub fn twitter() -> Self {
        Self::new(PrepMode::Twitter)
    }

    pub fn lm() -> Self {
        Self::new(PrepMode::Lm)
    }

    /// The mode a source's documents should be preprocessed with when
    /// feeding dictionary sentiment.
    pub fn for_source(source: Source) -> Self {
        match source {
            Source::Twitter => Self::twitter(),
            _ => Self::lm(),
        }
    }
}

/// Runs the full pipeline over a document's text.
pub fn preprocess(doc: &TextDocument, cfg: &PrepConfig) -> Vec<String> {
    preprocess_text(&doc.text, cfg)
}

/// Runs the full pipeline over raw text.
pub fn preprocess_text(text: &str, cfg: &PrepConfig) -> Vec<String> {
    let lemmatizer = RuleLemmatizer;
    preprocess_with(text, cfg, &lemmatizer)
}

/// Pipeline with a caller-supplied lemmatizer.
pub fn preprocess_with(text: &str, cfg: &PrepConfig, lemmatizer: &dyn Lemmatizer) -> Vec<String> {
    // stages 1-2: punctuation/brackets, URLs, non-ASCII
    let mut tokens: Vec<String> = Vec::new();
    for raw in text.split_whitespace() {
        if is_url(raw) {
            continue;
        }
        for piece in split_separators(raw) {
            let cleaned = strip_token(&piece);
            if !cleaned.is_empty() {
                tokens.push(cleaned);
            }
        }
    }

    // stage 3: hashtag words and stopwords
    tokens.retain(|t| !t.starts_with('#'));
    tokens.retain(|t| !cfg.stopwords.contains(&t.to_lowercase()));

    // stage 4 (twitter): slang, contractions, spelling
    if cfg.mode == PrepMode::Twitter {
        tokens = expand_map(&tokens, &cfg.slang);
        tokens = expand_map(&tokens, &cfg.contractions);
        // tokens shorter than 3 chars carry too little signal to correct
        tokens = tokens
            .iter()
            .map(|t| {
                if t.len() >= 3 {
                    cfg.spelling.correct(t)
                } else {
                    t.clone()
                }
            })
            .collect();
    }

    // stage 5: lemmatization
    tokens = tokens.iter().map(|t| lemmatizer.lemma(t)).collect();

    // stage 6 (lm): stemming, applied to a fixed point so a second pipeline
    // pass over rejoined output is a no-op
    if cfg.mode == PrepMode::Lm {
        tokens = tokens.iter().map(|t| stem_stable(t)).collect();
    }

    tokens
}

/// Iterates the stemmer until the token stops changing. The raw algorithm
/// is not idempotent for a handful of shapes (increase -> increas ->
/// increa); downstream joins need a stable form.
pub fn stem_stable(token: &str) -> String {
    let mut cur = token.to_string();
    loop {
        let next = stem(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Tags text for the emotion branch: minimal processing (URL/punctuation
/// strip only — stopwords must still be present for context), then the
/// supplied tagger.
pub fn tag_minimal(text: &str, tagger: &dyn PosTagger) -> Vec<TaggedToken> {
    let mut tokens = Vec::new();
    for raw in text.split_whitespace() {
        if is_url(raw) {
            continue;
        }
        for piece in split_separators(raw) {
            let cleaned = strip_token(&piece);
            if !cleaned.is_empty() && !cleaned.starts_with('#') {
                tokens.push(cleaned);
            }
        }
    }
    tagger.tag(&tokens)
}

fn is_url(token: &str) -> bool {
    let t = token.trim_matches(|c: char| c.is_ascii_punctuation() && c != '/' && c != ':');
    if t.starts_with("http://") || t.starts_with("https://") || t.starts_with("www.") {
        return true;
    }
    // bare-domain heuristic: host.tld or host.tld/path
    let host = t.split('/').next().unwrap_or("");
    if let Some((name, tld)) = host.rsplit_once('.') {
        let known = [
            "com", "org", "net", "io", "co", "gov", "edu", "ly", "me", "tv", "news",
        ];
        return !name.is_empty()
            && known.contains(&tld.to_lowercase().as_str())
            && (t.contains('/') || name.contains('.') || name.len() > 1);
    }
    false
}

/// Hyphens and slashes separate words rather than joining them.
fn split_separators(raw: &str) -> Vec<String> {
    raw.split(['-', '/', '\u{2013}', '\u{2014}'])
        .map(|s| s.to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Removes punctuation, brackets, and non-ASCII symbols from one token.
/// Kept: internal apostrophes (contractions), a leading `#` (hashtag
/// marker for the next stage), and alphanumerics. The `@` glyph is always
/// removed; the mention body survives.
fn strip_token(raw: &str) -> String {
    // normalize curly apostrophes before the non-ASCII sweep
    let raw = raw.replace(['\u{2018}', '\u{2019}'], "'");
    let mut out = String::with_capacity(raw.len());
    let hashtag = raw.starts_with('#');
    for (i, c) in raw.chars().enumerate() {
        if c == '#' && i == 0 {
            continue; // re-attached below so '#stocks' is recognizable
        }
        if c.is_ascii_alphanumeric() || c == '\'' {
            out.push(c);
        }
    }
    let out = out.trim_matches('\'').to_string();
    if out.is_empty() {
        return out;
    }
    if hashtag {
        format!("#{out}")
    } else {
        out
    }
}

/// Replaces tokens found in the map (case-insensitive key match) with their
/// expansion, splitting multi-word expansions.
fn expand_map(tokens: &[String], map: &BTreeMap<String, String>) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    for t in tokens {
        match map.get(&t.to_lowercase()) {
            Some(expansion) => out.extend(expansion.split_whitespace().map(str::to_string)),
            None => out.push(t.clone()),
        }
    }
    out
}
