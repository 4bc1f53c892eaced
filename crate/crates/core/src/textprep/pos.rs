//! Part-of-speech tagging boundary and the emotion-analysis POS filter.
//!
//! Tagging runs on minimally processed text (before stopword removal); the
//! filter then keeps only adjectives, adverbs, and interjections.

use std::sync::LazyLock;

use regex::Regex;

use crate::error::{Error, Result};

/// Coarse part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosTag {
    Adjective,
    Adverb,
    Interjection,
    Noun,
    Verb,
    Pronoun,
    Determiner,
    Preposition,
    Conjunction,
    Numeral,
    Other,
}

#[derive(Debug, Clone)]
pub struct TaggedToken {
    pub text: String,
    pub tag: Option<PosTag>,
}

impl TaggedToken {
    pub fn new(text: impl Into<String>, tag: PosTag) -> Self {
        TaggedToken {
            text: text.into(),
            tag: Some(tag),
        }
    }
}

/// Pluggable tagger boundary; the bundled implementation is lexicon- and
/// suffix-rule based.
pub trait PosTagger: Send + Sync {
    fn tag(&self, tokens: &[String]) -> Vec<TaggedToken>;
}

const INTERJECTIONS: &[&str] = &[
    "wow", "ouch", "oops", "hey", "oh", "ah", "aha", "yay", "ugh", "alas", "bravo", "hurray",
    "hooray", "yikes", "whoa", "phew", "huh", "hmm", "damn", "gosh",
];

const ADJECTIVES: &[&str] = &[
    "good", "bad", "great", "poor", "strong", "weak", "high", "low", "big", "small", "new",
    "old", "bullish", "bearish", "volatile", "happy", "sad", "angry", "fearful", "positive",
    "negative", "risky", "safe", "cheap", "expensive", "profitable", "terrible", "awful",
    "excellent", "solid", "shaky", "hot", "cold", "fast", "slow", "early", "late", "major",
    "minor", "huge", "tiny", "red", "green", "well",
];

const ADVERBS: &[&str] = &[
    "very", "too", "quite", "rather", "extremely", "sharply", "slightly", "quickly", "slowly",
    "up", "down", "higher", "lower", "again", "never", "always", "often", "soon", "now",
    "today", "yesterday", "tomorrow", "terribly", "badly",
];

const PRONOUNS: &[&str] = &[
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us", "them", "my",
    "your", "his", "its", "our", "their", "this", "that", "these", "those", "who", "what",
];

const DETERMINERS: &[&str] = &["a", "an", "the", "some", "any", "no", "every", "each"];

const PREPOSITIONS: &[&str] = &[
    "in", "on", "at", "by", "for", "with", "about", "against", "between", "into", "through",
    "during", "before", "after", "above", "below", "to", "from", "of", "over", "under",
];

const CONJUNCTIONS: &[&str] = &["and", "or", "but", "nor", "so", "yet", "because", "while", "if"];

const VERBS: &[&str] = &[
    "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "do", "does",
    "did", "will", "would", "can", "could", "may", "might", "shall", "should", "must", "buy",
    "sell", "hold", "rise", "fall", "drop", "gain", "lose", "surge", "crash", "soar", "plunge",
    "say", "said", "report", "expect", "beat", "miss",
];

// suffix heuristics, checked after the closed-class lists
static ADJ_SUFFIX: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)(ful|ous|ive|able|ible|ish|less|ic|ical|al|ary)$").unwrap());
static ADV_SUFFIX: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)ly$").unwrap());
static VERB_SUFFIX: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)(ize|ise|ify|ate|ing|ed)$").unwrap());
static NOUN_SUFFIX: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)(tion|sion|ment|ness|ity|ship|hood|ism|er|or|ist)$").unwrap());
static NUMERAL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\d+([.,]\d+)*%?$").unwrap());

/// Bundled regex-lexicon tagger.
#[derive(Debug, Default, Clone)]
pub struct RuleTagger;

impl PosTagger for RuleTagger {
    fn tag(&self, tokens: &[String]) -> Vec<TaggedToken> {
        tokens
            .iter()
            .map(|t| TaggedToken::new(t.clone(), tag_one(t)))
            .collect()
    }
}

fn tag_one(token: &str) -> PosTag {
    let lower = token.to_lowercase();
    let in_list = |list: &[&str]| list.contains(&lower.as_str());
    if NUMERAL.is_match(token) {
        return PosTag::Numeral;
    }
    if in_list(INTERJECTIONS) {
        return PosTag::Interjection;
    }
    if in_list(ADVERBS) {
        return PosTag::Adverb;
    }
    if in_list(ADJECTIVES) {
        return PosTag::Adjective;
    }
    if in_list(PRONOUNS) {
        return PosTag::Pronoun;
    }
    if in_list(DETERMINERS) {
        return PosTag::Determiner;
    }
    if in_list(PREPOSITIONS) {
        return PosTag::Preposition;
    }
    if in_list(CONJUNCTIONS) {
        return PosTag::Conjunction;
    }
    if in_list(VERBS) {
        return PosTag::Verb;
    }
    if ADV_SUFFIX.is_match(&lower) {
        return PosTag::Adverb;
    }
    if ADJ_SUFFIX.is_match(&lower) {
        return PosTag::Adjective;
    }
    if VERB_SUFFIX.is_match(&lower) {
        return PosTag::Verb;
    }
    if NOUN_SUFFIX.is_match(&lower) {
        return PosTag::Noun;
    }
    PosTag::Noun
}

/// Keeps only adjective, adverb, and interjection tokens, order preserved.
/// Untagged input is rejected: tagging must run first.
pub fn pos_filter(tokens: &[TaggedToken]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for t in tokens {
        match t.tag {
            None => return Err(Error::UntaggedToken(t.text.clone())),
            Some(PosTag::Adjective) | Some(PosTag::Adverb) | Some(PosTag::Interjection) => {
                out.push(t.text.clone())
            }
            Some(_) => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_adjectives_adverbs_interjections() {
        let tagged = vec![
            TaggedToken::new("terribly", PosTag::Adverb),
            TaggedToken::new("bad", PosTag::Adjective),
            TaggedToken::new("stock", PosTag::Noun),
        ];
        assert_eq!(pos_filter(&tagged).unwrap(), vec!["terribly", "bad"]);
    }

    #[test]
    fn all_noun_sentence_filters_to_empty() {
        let tagged = vec![
            TaggedToken::new("stock", PosTag::Noun),
            TaggedToken::new("market", PosTag::Noun),
        ];
        assert!(pos_filter(&tagged).unwrap().is_empty());
    }

    #[test]
    fn interjection_is_kept() {
        let tagged = vec![TaggedToken::new("wow", PosTag::Interjection)];
        assert_eq!(pos_filter(&tagged).unwrap(), vec!["wow"]);
    }

    #[test]
    fn untagged_input_is_rejected() {
        let tagged = vec![TaggedToken {
            text: "stock".into(),
            tag: None,
        }];
        assert!(matches!(
            pos_filter(&tagged),
            Err(Error::UntaggedToken(_))
        ));
    }

    #[test]
    fn rule_tagger_covers_the_filter_classes() {
        let toks: Vec<String> = ["terribly", "bad", "stock", "wow", "quickly", "hopeful"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let tagged = RuleTagger.tag(&toks);
        let kept = pos_filter(&tagged).unwrap();
        assert_eq!(kept, vec!["terribly", "bad", "wow", "quickly", "hopeful"]);
    }
}
