//! Daily price series: loading, validation, and return computation.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ticker symbol (e.g. "MSFT", "DJIA").
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ticker(pub String);

impl Ticker {
    pub fn new(sym: impl Into<String>) -> Self {
        Ticker(sym.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ticker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Ticker {
    fn from(s: &str) -> Self {
        Ticker(s.to_string())
    }
}

/// One trading day of OHLCV data for one ticker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceBar {
    pub ticker: Ticker,
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub volume: u64,
}

impl PriceBar {
    /// Checks the per-bar invariants: positive prices, low <= open/close <= high.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for (name, v) in [
            ("open", self.open),
            ("high", self.high),
            ("low", self.low),
            ("close", self.close),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(format!("{name} must be a positive finite price, got {v}"));
            }
        }
        if self.low > self.high {
            return Err(format!("low {} > high {}", self.low, self.high));
        }
        if self.open < self.low || self.open > self.high {
            return Err(format!(
                "open {} outside [low {}, high {}]",
                self.open, self.low, self.high
            ));
        }
        if self.close < self.low || self.close > self.high {
            return Err(format!(
                "close {} outside [low {}, high {}]",
                self.close, self.low, self.high
            ));
        }
        Ok(())
    }
}

/// Per-ticker return series: entry count is one less than the price series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub ticker: Ticker,
    pub entries: Vec<(NaiveDate, f64)>,
}

impl ReturnSeries {
    pub fn value_on(&self, date: NaiveDate) -> Option<f64> {
        self.entries
            .iter()
            .find(|(d, _)| *d == date)
            .map(|(_, r)| *r)
    }
}

/// Price file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriceFormat {
    Csv,
    Jsonl,
}

impl PriceFormat {
    /// Guess from the file extension; defaults to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") | Some("json") => PriceFormat::Jsonl,
            _ => PriceFormat::Csv,
        }
    }
}

#[derive(Debug, Deserialize)]
struct CsvBarRow {
    ticker: String,
    date: String,
    open: f64,
    high: f64,
    low: f64,
    close: f64,
    volume: u64,
}

/// Loads and validates daily bars, grouped per ticker and sorted by date.
///
/// CSV layout: header `ticker,date,open,high,low,close,volume`, ISO-8601 dates.
/// JSONL uses the same field names, one object per line.
pub fn load_prices(path: &Path, format: PriceFormat) -> Result<BTreeMap<Ticker, Vec<PriceBar>>> {
    let raw = match format {
        PriceFormat::Csv => load_csv_rows(path)?,
        PriceFormat::Jsonl => load_jsonl_rows(path)?,
    };
    if raw.is_empty() {
        log::warn!("{}: no price rows found", path.display());
        return Ok(BTreeMap::new());
    }

    let mut by_ticker: BTreeMap<Ticker, Vec<PriceBar>> = BTreeMap::new();
    for (row_no, bar) in raw {
        bar.validate()
            .map_err(|message| Error::InvalidBar { row: row_no, message })?;
        by_ticker.entry(bar.ticker.clone()).or_default().push(bar);
    }

    for (ticker, bars) in by_ticker.iter_mut() {
        bars.sort_by_key(|b| b.date);
        for pair in bars.windows(2) {
            if pair[0].date == pair[1].date {
                return Err(Error::DuplicateBar {
                    ticker: ticker.to_string(),
                    date: pair[0].date.to_string(),
                });
            }
        }
    }
    Ok(by_ticker)
}

fn load_csv_rows(path: &Path) -> Result<Vec<(usize, PriceBar)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
    let mut out = Vec::new();
    for (idx, record) in reader.deserialize::<CsvBarRow>().enumerate() {
        let line = idx + 2; // header is line 1
        let row = record.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        })?;
        let date = parse_date(&row.date).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        })?;
        out.push((
            line,
            PriceBar {
                ticker: Ticker::new(row.ticker),
                date,
                open: row.open,
                high: row.high,
                low: row.low,
                close: row.close,
                volume: row.volume,
            },
        ));
    }
    Ok(out)
}

fn load_jsonl_rows(path: &Path) -> Result<Vec<(usize, PriceBar)>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let bar: PriceBar = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message: e.to_string(),
        })?;
        out.push((line_no, bar));
    }
    Ok(out)
}

fn parse_date(s: &str) -> std::result::Result<NaiveDate, String> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| format!("bad date '{s}': {e}"))
}

/// Writes bars back out in the CSV interchange layout.
pub fn write_prices_csv<W: Write>(mut w: W, bars: &[PriceBar]) -> Result<()> {
    let err = |e: std::io::Error| Error::io("<writer>", e);
    writeln!(w, "ticker,date,open,high,low,close,volume").map_err(err)?;
    for b in bars {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            b.ticker, b.date, b.open, b.high, b.low, b.close, b.volume
        )
        .map_err(err)?;
    }
    Ok(())
}

/// Daily return series: return_t = (close_t - close_{t-1}) / close_{t-1},
/// dated at t. Gaps between trading days are legal; returns run between
/// consecutive available bars.
pub fn compute_returns(bars: &[PriceBar]) -> Result<ReturnSeries> {
    if bars.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 bars to compute returns, got {}",
            bars.len()
        )));
    }
    let ticker = &bars[0].ticker;
    for pair in bars.windows(2) {
        if pair[1].ticker != *ticker {
            return Err(Error::InvalidInput(format!(
                "mixed tickers in one series: {} and {}",
                ticker, pair[1].ticker
            )));
        }
        if pair[1].date <= pair[0].date {
            return Err(Error::OutOfOrder {
                last: pair[0].date.to_string(),
                next: pair[1].date.to_string(),
            });
        }
    }
    let mut entries = Vec::with_capacity(bars.len() - 1);
    for pair in bars.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        if prev.close <= 0.0 || cur.close <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "non-positive close on {} or {}",
                prev.date, cur.date
            )));
        }
        entries.push((cur.date, (cur.close - prev.close) / prev.close));
    }
    Ok(ReturnSeries {
        ticker: ticker.clone(),
        entries,
    })
}

#[cfg(test)]
pub(crate) fn bar(ticker: &str, date: &str, close: f64) -> PriceBar {
    PriceBar {
        ticker: Ticker::from(ticker),
        date: date.parse().unwrap(),
        open: close,
        high: close,
        low: close,
        close,
        volume: 1000,
    }
}
