//! Daily signal aggregation and Spearman rank correlation of returns
//! against each sentiment/emotion channel.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::emotion::Emotion;
use crate::error::{Error, Result};
use crate::ingest::Source;
use crate::marketdata::{ReturnSeries, Ticker};

/// A correlation channel: one of the four text-source sentiment streams or
/// one of the eight emotion streams. Serializes as its snake_case name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Channel {
    TwitterSentiment,
    NewsArchiveSentiment,
    RadioTranscriptSentiment,
    NewsApiSentiment,
    Emotion(Emotion),
}

impl Serialize for Channel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Channel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Channel::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl Channel {
    pub fn name(&self) -> String {
        match self {
            Channel::TwitterSentiment => "twitter_sentiment".into(),
            Channel::NewsArchiveSentiment => "news_archive_sentiment".into(),
            Channel::RadioTranscriptSentiment => "radio_transcript_sentiment".into(),
            Channel::NewsApiSentiment => "news_api_sentiment".into(),
            Channel::Emotion(e) => e.name().into(),
        }
    }

    pub fn parse(s: &str) -> Result<Channel> {
        match s {
            "twitter_sentiment" => Ok(Channel::TwitterSentiment),
            "news_archive_sentiment" => Ok(Channel::NewsArchiveSentiment),
            "radio_transcript_sentiment" => Ok(Channel::RadioTranscriptSentiment),
            "news_api_sentiment" => Ok(Channel::NewsApiSentiment),
            other => Emotion::parse(other).map(Channel::Emotion).map_err(|_| {
                Error::InvalidInput(format!("unknown channel '{other}'"))
            }),
        }
    }

    /// The sentiment channel a text source feeds.
    pub fn for_source(source: Source) -> Channel {
        match source {
            Source::Twitter => Channel::TwitterSentiment,
            Source::NewsArchive => Channel::NewsArchiveSentiment,
            Source::RadioTranscript => Channel::RadioTranscriptSentiment,
            Source::NewsApi => Channel::NewsApiSentiment,
        }
    }

    /// All channels in stable alphabetical order (for report columns).
    pub fn all() -> Vec<Channel> {
        let mut chans: Vec<Channel> = vec![
            Channel::TwitterSentiment,
            Channel::NewsArchiveSentiment,
            Channel::RadioTranscriptSentiment,
            Channel::NewsApiSentiment,
        ];
        chans.extend(crate::emotion::ALL_EMOTIONS.map(Channel::Emotion));
        chans.sort_by_key(|c| c.name());
        chans
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// One document's contribution to a day's channel signal.
#[derive(Debug, Clone)]
pub struct DocSignal {
    pub ticker: Ticker,
    pub date: NaiveDate,
    pub channel: Channel,
    pub polarity: f64,
    pub no_signal: bool,
    /// Aggregation weight; 1.0 unweighted, `1 + likes + retweets` when
    /// engagement weighting is enabled.
    pub weight: f64,
}

/// Per (ticker, date, channel) aggregated value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailySignal {
    pub ticker: Ticker,
    pub date: NaiveDate,
    pub channel: Channel,
    pub value: f64,
    pub doc_count: usize,
}

/// Mean (optionally weighted) document polarity for one day and channel.
/// Documents flagged no-signal are excluded; a day where every document is
/// no-signal emits nothing.
pub fn aggregate_daily(docs: &[DocSignal], weighted: bool) -> Result<Option<DailySignal>> {
    let Some(first) = docs.first() else {
        return Ok(None);
    };
    for d in docs {
        if d.ticker != first.ticker || d.date != first.date || d.channel != first.channel {
            return Err(Error::InvalidInput(format!(
                "aggregate_daily: mixed keys ({}/{}/{} vs {}/{}/{})",
                first.ticker, first.date, first.channel, d.ticker, d.date, d.channel
            )));
        }
    }
    let live: Vec<&DocSignal> = docs.iter().filter(|d| !d.no_signal).collect();
    if live.is_empty() {
        return Ok(None);
    }
    let (mut num, mut den) = (0.0, 0.0);
    for d in &live {
        let w = if weighted { d.weight } else { 1.0 };
        num += w * d.polarity;
        den += w;
    }
    Ok(Some(DailySignal {
        ticker: first.ticker.clone(),
        date: first.date,
        channel: first.channel,
        value: num / den,
        doc_count: live.len(),
    }))
}

/// Average ranks (1-based); tied values share the mean of their rank span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("non-NaN values"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) share the mean rank
        let mean_rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean_rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank-order correlation: Pearson correlation of average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::UndefinedCorrelation(format!(
            "need at least 3 observations, got {}",
            x.len()
        )));
    }
    let constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if constant(x) || constant(y) {
        return Err(Error::UndefinedCorrelation(
            "constant input vector has no rank ordering".into(),
        ));
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    Ok(pearson(&rx, &ry))
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    cov / (vx.sqrt() * vy.sqrt())
}

/// Permutation test settings for optional p-values.
#[derive(Debug, Clone, Copy)]
pub struct PermutationTest {
    pub shuffles: usize,
    pub seed: u64,
}

impl Default for PermutationTest {
    fn default() -> Self {
        PermutationTest {
            shuffles: 10_000,
            seed: 0,
        }
    }
}

/// Two-sided permutation p-value for an observed Spearman rho.
pub fn permutation_p_value(x: &[f64], y: &[f64], rho_obs: f64, cfg: PermutationTest) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut shuffled: Vec<f64> = y.to_vec();
    let mut hits = 0usize;
    for _ in 0..cfg.shuffles {
        shuffled.shuffle(&mut rng);
        if let Ok(rho) = spearman(x, &shuffled) {
            if rho.abs() >= rho_obs.abs() {
                hits += 1;
            }
        }
    }
    (1 + hits) as f64 / (1 + cfg.shuffles) as f64
}

/// One report row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub ticker: Ticker,
    pub channel: Channel,
    pub rho: Option<f64>,
    pub n_days: usize,
    pub p_value: Option<f64>,
    /// Set when rho is undefined (sparse overlap or constant signal).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub rows: Vec<CorrelationRow>,
}

/// Options for `correlate_returns`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CorrelateOptions {
    /// Signal at day t is paired with the return at day t+lag.
    pub lag: i64,
    pub permutation: Option<PermutationTest>,
}

/// Inner-joins the return series with each channel's daily signals on date
/// and computes one Spearman coefficient per (ticker, channel).
pub fn correlate_returns(
    returns: &ReturnSeries,
    signals: &[DailySignal],
    opts: CorrelateOptions,
) -> CorrelationReport {
    let ret_by_date: BTreeMap<NaiveDate, f64> = returns.entries.iter().copied().collect();
    let mut by_channel: BTreeMap<Channel, Vec<&DailySignal>> = BTreeMap::new();
    for s in signals.iter().filter(|s| s.ticker == returns.ticker) {
        by_channel.entry(s.channel).or_default().push(s);
    }

    let mut rows = Vec::new();
    for (channel, sigs) in by_channel {
        let mut xs = Vec::new(); // returns
        let mut ys = Vec::new(); // signal values
        for s in sigs {
            let target = s.date + chrono::Duration::days(opts.lag);
            if let Some(&r) = ret_by_date.get(&target) {
                xs.push(r);
                ys.push(s.value);
            }
        }
        let n_days = xs.len();
        match spearman(&xs, &ys) {
            Ok(rho) => {
                let p_value = opts
                    .permutation
                    .map(|cfg| permutation_p_value(&xs, &ys, rho, cfg));
                rows.push(CorrelationRow {
                    ticker: returns.ticker.clone(),
                    channel,
                    rho: Some(rho),
                    n_days,
                    p_value,
                    flag: None,
                });
            }
            Err(e) => rows.push(CorrelationRow {
                ticker: returns.ticker.clone(),
                channel,
                rho: None,
                n_days,
                p_value: None,
                flag: Some(if n_days < 3 {
                    "sparse-data".into()
                } else {
                    e.to_string()
                }),
            }),
        }
    }
    rows.sort_by(|a, b| (&a.ticker, a.channel.name()).cmp(&(&b.ticker, b.channel.name())));
    CorrelationReport { rows }
}

impl CorrelationReport {
    /// CSV layout: `ticker,channel,rho,n_days,p_value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let err = |e: std::io::Error| Error::io("<writer>", e);
        writeln!(w, "ticker,channel,rho,n_days,p_value").map_err(err)?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.ticker,
                r.channel,
                r.rho.map(|v| format!("{v:.6}")).unwrap_or_default(),
                r.n_days,
                r.p_value.map(|v| format!("{v:.6}")).unwrap_or_default(),
            )
            .map_err(err)?;
        }
        Ok(())
    }

    /// Human-readable table: ticker, channel, coefficient.
    pub fn write_table<W: Write>(&self, mut w: W) -> Result<()> {
        let err = |e: std::io::Error| Error::io("<writer>", e);
        writeln!(w, "{:<8} {:<28} {:>12}", "Ticker", "Sentiment Category", "Spearman Corr")
            .map_err(err)?;
        writeln!(w, "{}", "-".repeat(50)).map_err(err)?;
        for r in &self.rows {
            let rho = match r.rho {
                Some(v) => format!("{v:.3}"),
                None => format!("({})", r.flag.as_deref().unwrap_or("undefined")),
            };
            writeln!(w, "{:<8} {:<28} {:>12}", r.ticker.as_str(), r.channel.name(), rho)
                .map_err(err)?;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: CorrelationReport) {
        self.rows.extend(other.rows);
        self.rows
            .sort_by(|a, b| (&a.ticker, a.channel.name()).cmp(&(&b.ticker, b.channel.name())));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent brute-force oracle: explicit rank tables with tie
    /// averaging, then textbook Pearson over the ranks.
    pub(crate) fn spearman_oracle(x: &[f64], y: &[f64]) -> f64 {
        fn ranks(v: &[f64]) -> Vec<f64> {
            let n = v.len();
            let mut r = vec![0.0; n];
            for i in 0..n {
                let mut less = 0usize;
                let mut equal = 0usize;
                for j in 0..n {
                    if v[j] < v[i] {
                        less += 1;
                    } else if v[j] == v[i] {
                        equal += 1;
                    }
                }
                // ranks occupied by the tie group: less+1 ..= less+equal
                let sum: f64 = (less + 1..=less + equal).map(|k| k as f64).sum();
                r[i] = sum / equal as f64;
            }
            r
        }
        let rx = ranks(x);
        let ry = ranks(y);
        let n = x.len() as f64;
        let mx = rx.iter().sum::<f64>() / n;
        let my = ry.iter().sum::<f64>() / n;
        let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
        let vx: f64 = rx.iter().map(|a| (a - mx) * (a - mx)).sum();
        let vy: f64 = ry.iter().map(|b| (b - my) * (b - my)).sum();
        cov / (vx.sqrt() * vy.sqrt())
    }

    #[test]
    fn perfect_monotone_is_one() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_inverse_is_minus_one() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn tied_case_matches_brute_force_oracle() {
        let x = [1.0, 2.0, 2.0, 4.0];
        let y = [1.0, 3.0, 2.0, 4.0];
        let got = spearman(&x, &y).unwrap();
        let want = spearman_oracle(&x, &y);
        assert!((got - want).abs() < 1e-12, "got {got}, oracle {want}");
    }

    #[test]
    fn constant_vector_is_undefined() {
        assert!(matches!(
            spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::UndefinedCorrelation(_))
        ));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(matches!(
            spearman(&[1.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn aggregate_mean_of_polarities() {
        let docs: Vec<DocSignal> = [1.0, 0.0, -1.0]
            .iter()
            .map(|&p| doc("T", 5, Channel::TwitterSentiment, p, false, 1.0))
            .collect();
        let s = aggregate_daily(&docs, false).unwrap().unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.doc_count, 3);
    }

    #[test]
    fn aggregate_single_doc() {
        let docs = vec![doc("T", 5, Channel::NewsApiSentiment, 0.4, false, 1.0)];
        let s = aggregate_daily(&docs, false).unwrap().unwrap();
        assert!((s.value - 0.4).abs() < 1e-12);
    }

    #[test]
    fn all_no_signal_emits_nothing() {
        let docs = vec![
            doc("T", 5, Channel::TwitterSentiment, 0.0, true, 1.0),
            doc("T", 5, Channel::TwitterSentiment, 0.0, true, 1.0),
        ];
        assert!(aggregate_daily(&docs, false).unwrap().is_none());
    }

    #[test]
    fn mixed_dates_error() {
        let docs = vec![
            doc("T", 5, Channel::TwitterSentiment, 0.1, false, 1.0),
            doc("T", 6, Channel::TwitterSentiment, 0.1, false, 1.0),
        ];
        assert!(aggregate_daily(&docs, false).is_err());
    }

    #[test]
    fn weighted_mean_uses_engagement_weights() {
        let docs = vec![
            doc("T", 5, Channel::TwitterSentiment, 1.0, false, 3.0),
            doc("T", 5, Channel::TwitterSentiment, 0.0, false, 1.0),
        ];
        let s = aggregate_daily(&docs, true).unwrap().unwrap();
        assert!((s.value - 0.75).abs() < 1e-12);
    }

    #[test]
    fn signal_equal_to_returns_gives_rho_one() {
        let (returns, signals) = fixture_series(&[0.01, -0.02, 0.005, 0.03, -0.01]);
        let report = correlate_returns(&returns, &signals, CorrelateOptions::default());
        assert_eq!(report.rows.len(), 1);
        assert!((report.rows[0].rho.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(report.rows[0].n_days, 5);
    }

    #[test]
    fn disjoint_dates_flag_sparse() {
        let (returns, mut signals) = fixture_series(&[0.01, -0.02, 0.005]);
        for s in &mut signals {
            s.date += chrono::Duration::days(365);
        }
        let report = correlate_returns(&returns, &signals, CorrelateOptions::default());
        assert_eq!(report.rows.len(), 1);
        assert!(report.rows[0].rho.is_none());
        assert_eq!(report.rows[0].flag.as_deref(), Some("sparse-data"));
    }

    #[test]
    fn permutation_p_value_is_reproducible() {
        let x = [0.3, -0.1, 0.2, 0.5, -0.4, 0.0, 0.1];
        let y = [0.2, -0.2, 0.1, 0.4, -0.3, 0.05, 0.12];
        let rho = spearman(&x, &y).unwrap();
        let cfg = PermutationTest { shuffles: 500, seed: 42 };
        let p1 = permutation_p_value(&x, &y, rho, cfg);
        let p2 = permutation_p_value(&x, &y, rho, cfg);
        assert_eq!(p1, p2);
        assert!(p1 > 0.0 && p1 <= 1.0);
    }

    fn doc(t: &str, day: u32, channel: Channel, polarity: f64, no_signal: bool, weight: f64) -> DocSignal {
        DocSignal {
            ticker: Ticker::from(t),
            date: NaiveDate::from_ymd_opt(2021, 3, day).unwrap(),
            channel,
            polarity,
            no_signal,
            weight,
        }
    }

    fn fixture_series(vals: &[f64]) -> (ReturnSeries, Vec<DailySignal>) {
        let d0 = NaiveDate::from_ymd_opt(2021, 3, 1).unwrap();
        let returns = ReturnSeries {
            ticker: Ticker::from("T"),
            entries: vals
                .iter()
                .enumerate()
                .map(|(i, &v)| (d0 + chrono::Duration::days(i as i64), v))
                .collect(),
        };
        let signals = vals
            .iter()
            .enumerate()
            .map(|(i, &v)| DailySignal {
                ticker: Ticker::from("T"),
                date: d0 + chrono::Duration::days(i as i64),
                channel: Channel::NewsArchiveSentiment,
                value: v,
                doc_count: 1,
            })
            .collect();
        (returns, signals)
    }

    proptest! {
        #[test]
        fn matches_oracle_on_random_pairs(
            pairs in proptest::collection::vec((-100i32..100, -100i32..100), 3..60),
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
            prop_assume!(x.iter().any(|&v| v != x[0]));
            prop_assume!(y.iter().any(|&v| v != y[0]));
            let got = spearman(&x, &y).unwrap();
            let want = spearman_oracle(&x, &y);
            prop_assert!((got - want).abs() < 1e-12);
        }

        #[test]
        fn invariant_under_monotone_transforms(
            pairs in proptest::collection::vec((-50i32..50, -50i32..50), 3..40),
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
            prop_assume!(x.iter().any(|&v| v != x[0]));
            prop_assume!(y.iter().any(|&v| v != y[0]));
            let base = spearman(&x, &y).unwrap();
            let ex: Vec<f64> = x.iter().map(|&v| (v / 10.0).exp()).collect();
            let cy: Vec<f64> = y.iter().map(|&v| v * v * v).collect();
            // strictly increasing transforms preserve ranks exactly
            prop_assert_eq!(base, spearman(&ex, &y).unwrap());
            prop_assert_eq!(base, spearman(&x, &cy).unwrap());
        }

        #[test]
        fn symmetric_and_antisymmetric(
            pairs in proptest::collection::vec((-50i32..50, -50i32..50), 3..40),
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
            prop_assume!(x.iter().any(|&v| v != x[0]));
            prop_assume!(y.iter().any(|&v| v != y[0]));
            let xy = spearman(&x, &y).unwrap();
            let yx = spearman(&y, &x).unwrap();
            prop_assert!((xy - yx).abs() < 1e-12);

            // negation flips the sign when y has no ties
            let mut sorted = y.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let has_ties = sorted.windows(2).any(|w| w[0] == w[1]);
            if !has_ties {
                let ny: Vec<f64> = y.iter().map(|&v| -v).collect();
                let flipped = spearman(&x, &ny).unwrap();
                prop_assert!((xy + flipped).abs() < 1e-12);
            }
        }
    }
}
