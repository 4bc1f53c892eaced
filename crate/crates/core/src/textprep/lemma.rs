//! Pluggable lemmatization with a bundled suffix-rule fallback.

/// Maps a token to its lemma. Implementations must be pure.
pub trait Lemmatizer: Send + Sync {
    fn lemma(&self, token: &str) -> String;
}

/// Suffix-rule lemmatizer: irregular table plus -ing/-ed/plural stripping
/// with doubling and silent-e repair. Capitalized tokens pass through so
/// entity names survive.
#[derive(Debug, Default, Clone)]
pub struct RuleLemmatizer;

const IRREGULAR: &[(&str, &str)] = &[
    ("am", "be"),
    ("are", "be"),
    ("is", "be"),
    ("was", "be"),
    ("were", "be"),
    ("been", "be"),
    ("being", "be"),
    ("has", "have"),
    ("had", "have"),
    ("having", "have"),
    ("does", "do"),
    ("did", "do"),
    ("doing", "do"),
    ("done", "do"),
    ("went", "go"),
    ("gone", "go"),
    ("goes", "go"),
    ("said", "say"),
    ("made", "make"),
    ("men", "man"),
    ("women", "woman"),
    ("children", "child"),
    ("feet", "foot"),
    ("fell", "fall"),
    ("fallen", "fall"),
    ("rose", "rise"),
    ("risen", "rise"),
    ("grew", "grow"),
    ("grown", "grow"),
    ("sold", "sell"),
    ("bought", "buy"),
    ("held", "hold"),
    ("lost", "lose"),
    ("won", "win"),
    ("better", "good"),
    ("best", "good"),
    ("worse", "bad"),
    ("worst", "bad"),
];

impl Lemmatizer for RuleLemmatizer {
    fn lemma(&self, token: &str) -> String {
        if token.len() < 3
            || !token.bytes().all(|b| b.is_ascii_alphabetic())
            || token.as_bytes()[0].is_ascii_uppercase()
        {
            return token.to_string();
        }
        let lower = token.to_lowercase();
        if let Some((_, base)) = IRREGULAR.iter().find(|(w, _)| *w == lower) {
            return (*base).to_string();
        }
        let w = lower.as_bytes();

        if let Some(stem) = strip_participle(w, b"ing") {
            return stem;
        }
        if lower.ends_with("ied") && w.len() > 4 {
            return format!("{}y", &lower[..lower.len() - 3]);
        }
        if let Some(stem) = strip_participle(w, b"ed") {
            return stem;
        }
        strip_plural(&lower)
    }
}

fn is_vowel(b: u8) -> bool {
    matches!(b, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

/// Strips -ing/-ed and repairs the stem: undo consonant doubling
/// (hopping -> hop) and restore a silent e after a short cvc stem
/// (making -> make, but booming -> boom).
fn strip_participle(w: &[u8], suffix: &[u8]) -> Option<String> {
    let n = w.len();
    if n <= suffix.len() + 2 || !w.ends_with(suffix) {
        return None;
    }
    let stem = &w[..n - suffix.len()];
    if !stem.iter().any(|&b| is_vowel(b)) {
        return None; // e.g. "sing": "s" is not a word stem
    }
    let k = stem.len();
    let mut out = stem.to_vec();
    if k >= 3 && stem[k - 1] == stem[k - 2] && !is_vowel(stem[k - 1])
        && !matches!(stem[k - 1], b'l' | b's' | b'z')
    {
        out.pop();
    } else if k >= 3
        && !is_vowel(stem[k - 1])
        && is_vowel(stem[k - 2])
        && !is_vowel(stem[k - 3])
        && !matches!(stem[k - 1], b'w' | b'x' | b'y')
        && count_vowel_groups(stem) == 1
    {
        out.push(b'e');
    }
    Some(String::from_utf8(out).expect("ascii"))
}

fn count_vowel_groups(w: &[u8]) -> usize {
    let mut groups = 0;
    let mut in_group = false;
    for &b in w {
        if is_vowel(b) {
            if !in_group {
                groups += 1;
            }
            in_group = true;
        } else {
            in_group = false;
        }
    }
    groups
}

fn strip_plural(lower: &str) -> String {
    let n = lower.len();
    if n > 4 && lower.ends_with("ies") {
        return format!("{}y", &lower[..n - 3]);
    }
    for es_suffix in ["ches", "shes", "sses", "xes", "zes"] {
        if n > es_suffix.len() + 1 && lower.ends_with(es_suffix) {
            return lower[..n - 2].to_string();
        }
    }
    if n > 3
        && lower.ends_with('s')
        && !lower.ends_with("ss")
        && !lower.ends_with("us")
        && !lower.ends_with("is")
    {
        return lower[..n - 1].to_string();
    }
    lower.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_rules() {
        let l = RuleLemmatizer;
        let cases = [
            ("booming", "boom"),
            ("making", "make"),
            ("hoping", "hope"),
            ("hopping", "hop"),
            ("running", "run"),
            ("falling", "fall"),
            ("looked", "look"),
            ("moved", "move"),
            ("studied", "study"),
            ("companies", "company"),
            ("stocks", "stock"),
            ("boxes", "box"),
            ("crashes", "crash"),
            ("losses", "loss"),
            ("is", "be"),
            ("went", "go"),
            ("sold", "sell"),
            ("market", "market"),
            ("sing", "sing"),
            ("bonus", "bonus"),
            ("crisis", "crisis"),
        ];
        for (input, want) in cases {
            assert_eq!(l.lemma(input), want, "lemma({input})");
        }
    }

    #[test]
    fn capitalized_tokens_pass_through() {
        let l = RuleLemmatizer;
        assert_eq!(l.lemma("Apple"), "Apple");
        assert_eq!(l.lemma("Stocks"), "Stocks");
    }

    #[test]
    fn idempotent_on_own_output() {
        let l = RuleLemmatizer;
        for w in [
            "booming", "making", "hopping", "studied", "companies", "stocks",
            "crashes", "losses", "moved", "running",
        ] {
            let once = l.lemma(w);
            assert_eq!(l.lemma(&once), once, "lemma not stable on {w} -> {once}");
        }
    }
}
