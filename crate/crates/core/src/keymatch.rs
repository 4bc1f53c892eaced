//! Keyword-to-ticker matching via character-trigram cosine similarity and
//! Levenshtein edit distance.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marketdata::Ticker;

/// A ticker plus the name strings it may appear under in article keywords.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TickerProfile {
    pub ticker: Ticker,
    pub aliases: Vec<String>,
}

/// Loads profiles from CSV `ticker,alias`, one row per alias.
pub fn load_profiles(path: &Path) -> Result<Vec<TickerProfile>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
    let mut by_ticker: BTreeMap<String, Vec<String>> = BTreeMap::new();
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
                message: "expected `ticker,alias`".into(),
            });
        }
        by_ticker
            .entry(rec[0].to_string())
            .or_default()
            .push(rec[1].to_string());
    }
    Ok(by_ticker
        .into_iter()
        .map(|(ticker, aliases)| TickerProfile {
            ticker: Ticker::new(ticker),
            aliases,
        })
        .collect())
}

fn trigrams(s: &str) -> BTreeMap<Vec<char>, usize> {
    let chars: Vec<char> = s.chars().collect();
    let mut counts = BTreeMap::new();
    if chars.len() < 3 {
        // short strings use the whole string as a single gram
        *counts.entry(chars).or_insert(0) += 1;
        return counts;
    }
    for win in chars.windows(3) {
        *counts.entry(win.to_vec()).or_insert(0) += 1;
    }
    counts
}

/// Cosine of the character-trigram count vectors of `a` and `b`, in [0, 1].
pub fn cosine_sim(a: &str, b: &str) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput(
            "cosine_sim requires non-empty strings".into(),
        ));
    }
    let va = trigrams(a);
    let vb = trigrams(b);
    let dot: f64 = va
        .iter()
        .filter_map(|(g, &ca)| vb.get(g).map(|&cb| (ca * cb) as f64))
        .sum();
    let na: f64 = va.values().map(|&c| (c * c) as f64).sum::<f64>().sqrt();
    let nb: f64 = vb.values().map(|&c| (c * c) as f64).sum::<f64>().sqrt();
    Ok(dot / (na * nb))
}

/// Levenshtein distance with unit insert/delete/substitute costs.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Outcome of matching one keyword list against the profile table.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub ticker: Ticker,
    pub cosine: f64,
    pub edit: usize,
    pub keyword: String,
    pub alias: String,
}

pub const DEFAULT_COS_THRESHOLD: f64 = 0.6;
pub const DEFAULT_EDIT_THRESHOLD: usize = 2;

/// Returns the profile whose best alias match satisfies
/// `cosine >= cos_threshold` or `edit <= edit_threshold`, or `None` when no
/// profile qualifies. Ties break by higher cosine, then lower edit distance,
/// then alphabetical ticker.
pub fn match_ticker(
    keywords: &[String],
    profiles: &[TickerProfile],
    cos_threshold: f64,
    edit_threshold: usize,
) -> Result<Option<MatchResult>> {
    if profiles.is_empty() {
        return Err(Error::InvalidInput("empty profile list".into()));
    }
    let mut best: Option<MatchResult> = None;
    for profile in profiles {
        let mut profile_best: Option<MatchResult> = None;
        for keyword in keywords {
            if keyword.is_empty() {
                continue;
            }
            for alias in &profile.aliases {
                let cosine = cosine_sim(keyword, alias)?;
                let edit = edit_distance(keyword, alias);
                let cand = MatchResult {
                    ticker: profile.ticker.clone(),
                    cosine,
                    edit,
                    keyword: keyword.clone(),
                    alias: alias.clone(),
                };
                if profile_best
                    .as_ref()
                    .map(|b| better(&cand, b))
                    .unwrap_or(true)
                {
                    profile_best = Some(cand);
                }
            }
        }
        let Some(cand) = profile_best else { continue };
        if cand.cosine >= cos_threshold || cand.edit <= edit_threshold {
            if best.as_ref().map(|b| better(&cand, b)).unwrap_or(true) {
                best = Some(cand);
            }
        }
    }
    Ok(best)
}

fn better(a: &MatchResult, b: &MatchResult) -> bool {
    (b.cosine, std::cmp::Reverse(b.edit), std::cmp::Reverse(&b.ticker))
        < (a.cosine, std::cmp::Reverse(a.edit), std::cmp::Reverse(&a.ticker))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn profiles() -> Vec<TickerProfile> {
        vec![
            TickerProfile {
                ticker: Ticker::from("GS"),
                aliases: vec!["Goldman Sachs".into(), "Goldman Sachs Group".into()],
            },
            TickerProfile {
                ticker: Ticker::from("MSFT"),
                aliases: vec!["Microsoft".into()],
            },
            TickerProfile {
                ticker: Ticker::from("DJIA"),
                aliases: vec!["Dow Jones".into(), "Dow Jones Industrial Average".into()],
            },
        ]
    }

    #[test]
    fn identical_strings_have_cosine_one() {
        assert!((cosine_sim("Dow Jones", "Dow Jones").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_trigrams_have_cosine_zero() {
        assert_eq!(cosine_sim("abcd", "wxyz").unwrap(), 0.0);
    }

    #[test]
    fn goldman_cosine_matches_hand_enumeration() {
        // Independent oracle: enumerate trigram count vectors by hand and
        // compute the cosine directly from them.
        let grams = |s: &str| -> BTreeMap<String, usize> {
            let cs: Vec<char> = s.chars().collect();
            let mut m = BTreeMap::new();
            for w in cs.windows(3) {
                *m.entry(w.iter().collect::<String>()).or_insert(0) += 1;
            }
            m
        };
        let a = "Goldman Sachs";
        let b = "Goldman Sachs Group";
        let (va, vb) = (grams(a), grams(b));
        let dot: f64 = va
            .iter()
            .map(|(g, ca)| (ca * vb.get(g).copied().unwrap_or(0)) as f64)
            .sum();
        let na = va.values().map(|c| (c * c) as f64).sum::<f64>().sqrt();
        let nb = vb.values().map(|c| (c * c) as f64).sum::<f64>().sqrt();
        let expected = dot / (na * nb);
        assert!((cosine_sim(a, b).unwrap() - expected).abs() < 1e-12);
        assert!(expected > 0.7 && expected < 1.0, "expected {expected}");
    }

    #[test]
    fn edit_distance_basics() {
        assert_eq!(edit_distance("kitten", "sitting"), 3);
        assert_eq!(edit_distance("", "abc"), 3);
        assert_eq!(edit_distance("abc", "abc"), 0);
    }

    #[test]
    fn microsoft_corp_matches_msft_with_defaults() {
        // Hand check: cosine("Microsoft Corp", "Microsoft") with trigram
        // vectors — "Microsoft Corp" has 12 trigrams, sharing the 7 trigrams
        // of "Microsoft", so cos = 7/sqrt(12*7) ≈ 0.764 >= 0.6.
        let kw = vec!["Microsoft Corp".to_string()];
        let m = match_ticker(&kw, &profiles(), DEFAULT_COS_THRESHOLD, DEFAULT_EDIT_THRESHOLD)
            .unwrap()
            .expect("should match");
        assert_eq!(m.ticker, Ticker::from("MSFT"));
        assert!((m.cosine - 7.0 / (12.0f64 * 7.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unrelated_keywords_match_nothing() {
        let kw = vec!["weather report".to_string()];
        let m = match_ticker(&kw, &profiles(), DEFAULT_COS_THRESHOLD, DEFAULT_EDIT_THRESHOLD)
            .unwrap();
        assert!(m.is_none());
    }

    #[test]
    fn exact_alias_hit_wins_regardless_of_thresholds() {
        let kw = vec!["Dow Jones".to_string()];
        let m = match_ticker(&kw, &profiles(), 1.0, 0).unwrap().expect("exact hit");
        assert_eq!(m.ticker, Ticker::from("DJIA"));
        assert_eq!(m.edit, 0);
    }

    #[test]
    fn empty_profile_list_is_an_error() {
        assert!(match_ticker(&["x".to_string()], &[], 0.6, 2).is_err());
    }

    #[test]
    fn lowering_cos_threshold_never_unmatches() {
        let kw = vec!["Goldman Sach".to_string()];
        let strict = match_ticker(&kw, &profiles(), 0.9, 0).unwrap();
        let loose = match_ticker(&kw, &profiles(), 0.3, 0).unwrap();
        if strict.is_some() {
            assert!(loose.is_some());
        }
    }

    proptest! {
        #[test]
        fn cosine_is_symmetric(a in "[a-z ]{1,12}", b in "[a-z ]{1,12}") {
            let ab = cosine_sim(&a, &b).unwrap();
            let ba = cosine_sim(&b, &a).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
        }

        #[test]
        fn cosine_self_is_one(a in "[a-z ]{1,16}") {
            prop_assert!((cosine_sim(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn edit_distance_triangle_inequality(
            a in "[a-z]{0,8}", b in "[a-z]{0,8}", c in "[a-z]{0,8}",
        ) {
            let ab = edit_distance(&a, &b);
            let bc = edit_distance(&b, &c);
            let ac = edit_distance(&a, &c);
            prop_assert!(ac <= ab + bc);
        }

        #[test]
        fn edit_distance_symmetric(a in "[a-z]{0,10}", b in "[a-z]{0,10}") {
            prop_assert_eq!(edit_distance(&a, &b), edit_distance(&b, &a));
        }
    }
}
