//! Dictionary-based sentiment scoring.
//!
//! Polarity = (pos - neg) / (pos + neg); the paper's subjectivity variant
//! is (pos - neg) / count. A positive lexicon hit preceded by a negation
//! marker within the scan window counts as negative instead.

mod external;

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use external::{
    BackendConfig, ExternalScorer, ScorerRegistry, ScorerRequest, ScorerResponse,
};

use crate::error::{Error, Result};
use crate::textprep::{resources, stem_stable};

/// Sentiment class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Neutral,
    Negative,
}

impl Label {
    pub fn name(&self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Neutral => "neutral",
            Label::Negative => "negative",
        }
    }

    pub fn parse(s: &str) -> Result<Label> {
        match s.to_lowercase().as_str() {
            "positive" => Ok(Label::Positive),
            "neutral" => Ok(Label::Neutral),
            "negative" => Ok(Label::Negative),
            other => Err(Error::Data(format!("unknown label '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LexiconName {
    LoughranMcdonald,
    HarvardIv,
    Custom,
}

/// Word-set sentiment lexicon. Words are stored case-folded; membership is
/// an exact string match against normalized tokens.
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    pub name: Option<LexiconName>,
    pub positive: BTreeSet<String>,
    pub negative: BTreeSet<String>,
    pub litigious: BTreeSet<String>,
    pub uncertainty: BTreeSet<String>,
    pub strong_modal: BTreeSet<String>,
    pub weak_modal: BTreeSet<String>,
    pub constraining: BTreeSet<String>,
}

impl SentimentLexicon {
    pub fn new(name: LexiconName) -> Self {
        SentimentLexicon {
            name: Some(name),
            ..Default::default()
        }
    }

    pub fn add_positive(&mut self, word: &str) {
        self.positive.insert(word.to_lowercase());
    }

    pub fn add_negative(&mut self, word: &str) {
        self.negative.insert(word.to_lowercase());
    }

    /// Loads either the publisher's master-dictionary CSV (a `Word` column
    /// plus per-category columns holding nonzero markers) or a simple
    /// two-column `word,category` fallback.
    pub fn load_csv(path: &Path) -> Result<SentimentLexicon> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
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

        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name) || h.eq_ignore_ascii_case(&name.replace('_', " ")))
        };
        let word_col = col("word");
        let category_cols: Vec<(usize, &str)> = [
            "positive",
            "negative",
            "litigious",
            "uncertainty",
            "strong_modal",
            "weak_modal",
            "constraining",
        ]
        .iter()
        .filter_map(|cat| col(cat).map(|i| (i, *cat)))
        .collect();

        let mut lex = SentimentLexicon::new(LexiconName::Custom);
        if let (Some(word_col), false) = (word_col, category_cols.is_empty()) {
            // master-dictionary layout
            for (idx, rec) in reader.records().enumerate() {
                let rec = rec.map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 2,
                    message: e.to_string(),
                })?;
                let Some(word) = rec.get(word_col) else { continue };
                for &(ci, cat) in &category_cols {
                    let member = rec
                        .get(ci)
                        .map(|v| !matches!(v.trim(), "" | "0"))
                        .unwrap_or(false);
                    if member {
                        lex.set_for(cat).insert(word.to_lowercase());
                    }
                }
            }
        } else {
            // two-column fallback: word,category
            for (idx, rec) in reader.records().enumerate() {
                let rec = rec.map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 2,
                    message: e.to_string(),
                })?;
                if rec.len() < 2 {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line: idx + 2,
                        message: "expected `word,category`".into(),
                    });
                }
                let word = rec[0].to_lowercase();
                lex.set_for(&rec[1].to_lowercase()).insert(word);
            }
        }
        lex.check_disjoint()?;
        Ok(lex)
    }

    fn set_for(&mut self, category: &str) -> &mut BTreeSet<String> {
        match category {
            "positive" => &mut self.positive,
            "negative" => &mut self.negative,
            "litigious" => &mut self.litigious,
            "uncertainty" | "unsure" => &mut self.uncertainty,
            "strong_modal" => &mut self.strong_modal,
            "weak_modal" => &mut self.weak_modal,
            _ => &mut self.constraining,
        }
    }

    fn check_disjoint(&self) -> Result<()> {
        if let Some(w) = self.positive.intersection(&self.negative).next() {
            return Err(Error::Data(format!(
                "lexicon has '{w}' in both positive and negative sets"
            )));
        }
        Ok(())
    }

    /// Returns a copy with every entry stemmed to match lm-mode tokens.
    /// Words whose stems land in both polarity sets are dropped from both.
    pub fn stemmed(&self) -> SentimentLexicon {
        let stem_set =
            |s: &BTreeSet<String>| s.iter().map(|w| stem_stable(w)).collect::<BTreeSet<_>>();
        let mut out = SentimentLexicon {
            name: self.name,
            positive: stem_set(&self.positive),
            negative: stem_set(&self.negative),
            litigious: stem_set(&self.litigious),
            uncertainty: stem_set(&self.uncertainty),
            strong_modal: stem_set(&self.strong_modal),
            weak_modal: stem_set(&self.weak_modal),
            constraining: stem_set(&self.constraining),
        };
        let collisions: Vec<String> = out
            .positive
            .intersection(&out.negative)
            .cloned()
            .collect();
        if !collisions.is_empty() {
            log::warn!(
                "{} stem collisions between positive and negative sets; dropping both sides",
                collisions.len()
            );
            for w in collisions {
                out.positive.remove(&w);
                out.negative.remove(&w);
            }
        }
        out
    }

    /// Swaps the positive and negative sets (test hook for the Eq. 1
    /// antisymmetry property).
    pub fn swapped(&self) -> SentimentLexicon {
        let mut out = self.clone();
        std::mem::swap(&mut out.positive, &mut out.negative);
        out
    }
}

/// Per-document sentiment result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentScore {
    /// Eq. 1: (pos - neg) / (pos + neg); 0 when there are no hits.
    pub polarity: f64,
    /// Eq. 2 as printed in the source: (pos - neg) / count.
    pub subjectivity: f64,
    /// The conventional density variant: (pos + neg) / count.
    pub conventional_subjectivity: f64,
    pub pos_count: usize,
    pub neg_count: usize,
    pub word_count: usize,
    pub label: Label,
    /// True when no lexicon word was hit; such scores are excluded from
    /// daily aggregation.
    pub no_signal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl SentimentScore {
    fn no_signal_score(word_count: usize) -> SentimentScore {
        SentimentScore {
            polarity: 0.0,
            subjectivity: 0.0,
            conventional_subjectivity: 0.0,
            pos_count: 0,
            neg_count: 0,
            word_count,
            label: Label::Neutral,
            no_signal: true,
            provenance: None,
        }
    }
}

pub const DEFAULT_NEGATION_WINDOW: usize = 3;

/// Scores tokens with the bundled negator set.
pub fn score_document(
    tokens: &[String],
    lexicon: &SentimentLexicon,
    negation_window: usize,
) -> SentimentScore {
    score_document_with(
        tokens,
        lexicon,
        negation_window,
        resources::bundled_negators(),
    )
}

/// Scores tokens against a lexicon. A positive hit whose preceding
/// `negation_window` tokens contain a negator is counted as negative;
/// negated negatives stay negative.
pub fn score_document_with(
    tokens: &[String],
    lexicon: &SentimentLexicon,
    negation_window: usize,
    negators: &BTreeSet<String>,
) -> SentimentScore {
    if tokens.is_empty() {
        return SentimentScore::no_signal_score(0);
    }
    let is_negator = |token: &str| {
        let lower = token.to_lowercase();
        negators.contains(&lower) || (negators.contains("n't") && lower.ends_with("n't"))
    };

    let mut pos = 0usize;
    let mut neg = 0usize;
    for (i, token) in tokens.iter().enumerate() {
        let key = token.to_lowercase();
        if lexicon.positive.contains(&key) {
            let start = i.saturating_sub(negation_window);
            let negated = tokens[start..i].iter().any(|t| is_negator(t));
            if negated {
                neg += 1;
            } else {
                pos += 1;
            }
        } else if lexicon.negative.contains(&key) {
            neg += 1;
        }
    }

    let count = tokens.len();
    if pos + neg == 0 {
        return SentimentScore::no_signal_score(count);
    }
    let polarity = (pos as f64 - neg as f64) / (pos as f64 + neg as f64);
    let label = if polarity > 0.0 {
        Label::Positive
    } else if polarity < 0.0 {
        Label::Negative
    } else {
        Label::Neutral
    };
    SentimentScore {
        polarity,
        subjectivity: (pos as f64 - neg as f64) / count as f64,
        conventional_subjectivity: (pos as f64 + neg as f64) / count as f64,
        pos_count: pos,
        neg_count: neg,
        word_count: count,
        label,
        no_signal: false,
        provenance: None,
    }
}

/// Maps a tool compound value to a label: >= 0.05 positive, <= -0.05
/// negative, neutral between.
pub fn classify_compound(compound: f64) -> Result<Label> {
    if !compound.is_finite() || !(-1.0..=1.0).contains(&compound) {
        return Err(Error::InvalidInput(format!(
            "compound value {compound} outside [-1, 1]"
        )));
    }
    Ok(if compound >= 0.05 {
        Label::Positive
    } else if compound <= -0.05 {
        Label::Negative
    } else {
        Label::Neutral
    })
}

/// Discretizes a regression-style score: >= 0.15 positive, <= -0.15
/// negative, neutral between.
pub fn discretize_regression_label(score: f64) -> Result<Label> {
    if !score.is_finite() || !(-1.0..=1.0).contains(&score) {
        return Err(Error::InvalidInput(format!(
            "regression score {score} outside [-1, 1]"
        )));
    }
    Ok(if score >= 0.15 {
        Label::Positive
    } else if score <= -0.15 {
        Label::Negative
    } else {
        Label::Neutral
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprep::{preprocess_text, PrepConfig};
    use proptest::prelude::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    fn toy_lexicon() -> SentimentLexicon {
        let mut lex = SentimentLexicon::new(LexiconName::Custom);
        for w in ["well", "gain", "boom", "strong"] {
            lex.add_positive(w);
        }
        for w in ["loss", "crash", "weak"] {
            lex.add_negative(w);
        }
        lex
    }

    #[test]
    fn eq1_eq2_direct_substitution() {
        // pos=2, neg=1 in a 10-token document
        let tokens = toks(&[
            "gain", "x1", "boom", "x2", "loss", "x3", "x4", "x5", "x6", "x7",
        ]);
        let s = score_document(&tokens, &toy_lexicon(), 3);
        assert_eq!(s.pos_count, 2);
        assert_eq!(s.neg_count, 1);
        assert_eq!(s.word_count, 10);
        assert!((s.polarity - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.subjectivity - 0.1).abs() < 1e-15);
        assert!((s.conventional_subjectivity - 0.3).abs() < 1e-15);
        assert_eq!(s.label, Label::Positive);
    }

    #[test]
    fn paper_negation_sentence_is_negative() {
        let cfg = PrepConfig::lm();
        let tokens = preprocess_text("The stock market is not doing well", &cfg);
        let s = score_document(&tokens, &toy_lexicon(), DEFAULT_NEGATION_WINDOW);
        assert_eq!(s.label, Label::Negative, "tokens: {tokens:?}");
        assert_eq!(s.pos_count, 0);
        assert_eq!(s.neg_count, 1);

        // removing the negator flips it back to positive
        let tokens = preprocess_text("The stock market is doing well", &cfg);
        let s = score_document(&tokens, &toy_lexicon(), DEFAULT_NEGATION_WINDOW);
        assert_eq!(s.label, Label::Positive);
    }

    #[test]
    fn negation_window_is_bounded() {
        // negator four tokens before the hit: outside the window of 3
        let tokens = toks(&["not", "a", "b", "c", "well"]);
        let s = score_document(&tokens, &toy_lexicon(), 3);
        assert_eq!(s.pos_count, 1);
        assert_eq!(s.neg_count, 0);
    }

    #[test]
    fn nt_contraction_acts_as_negator() {
        let tokens = toks(&["market", "isn't", "doing", "well"]);
        let s = score_document(&tokens, &toy_lexicon(), 3);
        assert_eq!(s.label, Label::Negative);
    }

    #[test]
    fn negated_negative_stays_negative() {
        let tokens = toks(&["not", "a", "loss"]);
        let s = score_document(&tokens, &toy_lexicon(), 3);
        assert_eq!(s.neg_count, 1);
        assert_eq!(s.label, Label::Negative);
    }

    #[test]
    fn no_hits_is_no_signal() {
        let s = score_document(&toks(&["plain", "words", "here"]), &toy_lexicon(), 3);
        assert!(s.no_signal);
        assert_eq!(s.polarity, 0.0);
        assert_eq!(s.label, Label::Neutral);
    }

    #[test]
    fn empty_tokens_is_no_signal_with_zero_counts() {
        let s = score_document(&[], &toy_lexicon(), 3);
        assert!(s.no_signal);
        assert_eq!(s.word_count, 0);
    }

    #[test]
    fn compound_thresholds() {
        assert_eq!(classify_compound(0.06).unwrap(), Label::Positive);
        assert_eq!(classify_compound(0.05).unwrap(), Label::Positive);
        assert_eq!(classify_compound(0.0).unwrap(), Label::Neutral);
        assert_eq!(classify_compound(-0.05).unwrap(), Label::Negative);
        assert_eq!(classify_compound(-0.5).unwrap(), Label::Negative);
        assert!(classify_compound(1.5).is_err());
        assert!(classify_compound(f64::NAN).is_err());
    }

    #[test]
    fn regression_thresholds() {
        assert_eq!(discretize_regression_label(0.2).unwrap(), Label::Positive);
        assert_eq!(discretize_regression_label(0.15).unwrap(), Label::Positive);
        assert_eq!(discretize_regression_label(0.0).unwrap(), Label::Neutral);
        assert_eq!(discretize_regression_label(-0.15).unwrap(), Label::Negative);
        assert_eq!(discretize_regression_label(-0.5).unwrap(), Label::Negative);
        assert!(discretize_regression_label(-1.01).is_err());
    }

    #[test]
    fn two_column_lexicon_loads() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        use std::io::Write;
        writeln!(f, "word,category").unwrap();
        writeln!(f, "boom,positive").unwrap();
        writeln!(f, "bust,negative").unwrap();
        writeln!(f, "maybe,uncertainty").unwrap();
        let lex = SentimentLexicon::load_csv(f.path()).unwrap();
        assert!(lex.positive.contains("boom"));
        assert!(lex.negative.contains("bust"));
        assert!(lex.uncertainty.contains("maybe"));
    }

    #[test]
    fn master_dictionary_layout_loads() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        use std::io::Write;
        writeln!(f, "Word,Seq_num,Negative,Positive,Uncertainty,Litigious,Strong_Modal,Weak_Modal,Constraining").unwrap();
        writeln!(f, "ABANDON,1,2009,0,0,0,0,0,0").unwrap();
        writeln!(f, "ACHIEVE,2,0,2009,0,0,0,0,0").unwrap();
        writeln!(f, "MAY,3,0,0,0,0,0,2009,0").unwrap();
        let lex = SentimentLexicon::load_csv(f.path()).unwrap();
        assert!(lex.negative.contains("abandon"));
        assert!(lex.positive.contains("achieve"));
        assert!(lex.weak_modal.contains("may"));
    }

    #[test]
    fn overlapping_polarity_sets_are_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        use std::io::Write;
        writeln!(f, "word,category").unwrap();
        writeln!(f, "odd,positive").unwrap();
        writeln!(f, "odd,negative").unwrap();
        assert!(SentimentLexicon::load_csv(f.path()).is_err());
    }

    proptest! {
        #[test]
        fn lexicon_swap_negates_polarity(
            words in proptest::collection::vec(
                "(well|gain|boom|loss|crash|weak|alpha|beta|gamma)", 1..30),
        ) {
            let tokens: Vec<String> = words;
            let lex = toy_lexicon();
            let swapped = lex.swapped();
            let a = score_document(&tokens, &lex, 3);
            let b = score_document(&tokens, &swapped, 3);
            prop_assert_eq!(a.no_signal, b.no_signal);
            prop_assert!((a.polarity + b.polarity).abs() < 1e-15);
        }

        #[test]
        fn polarity_and_subjectivity_are_bounded(
            words in proptest::collection::vec(
                "(well|gain|loss|not|never|filler|other)", 1..40),
        ) {
            let s = score_document(&words, &toy_lexicon(), 3);
            prop_assert!(s.polarity >= -1.0 && s.polarity <= 1.0);
            prop_assert!(s.subjectivity.abs() <= s.conventional_subjectivity + 1e-15);
            prop_assert!(s.conventional_subjectivity <= 1.0 + 1e-15);
        }

        #[test]
        fn inserting_negator_never_increases_pos_count(
            words in proptest::collection::vec("(well|gain|loss|filler)", 1..20),
            at in 0usize..20,
        ) {
            let tokens: Vec<String> = words;
            let at = at.min(tokens.len());
            let base = score_document(&tokens, &toy_lexicon(), 3);
            let mut with_neg = tokens.clone();
            with_neg.insert(at, "not".to_string());
            let negated = score_document(&with_neg, &toy_lexicon(), 3);
            prop_assert!(negated.pos_count <= base.pos_count);
        }
    }
}
