//! Quote ingestion and aligned log series.
//!
//! Raw quotes are kept as levels in [`RateObservation`]; logs are taken only
//! in [`build_aligned`]. All quotes are domestic currency per unit of foreign
//! currency. Source files quoting the inverse are flipped by their adapter.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    year: i32,
    month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::Domain(format!("month {month} out of range 1..=12")));
        }
        Ok(Self { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    pub fn succ(self) -> Self {
        if self.month == 12 {
            Self { year: self.year + 1, month: 1 }
        } else {
            Self { year: self.year, month: self.month + 1 }
        }
    }

    /// Month `n` steps later.
    pub fn add_months(self, n: u32) -> Self {
        let idx = self.year as i64 * 12 + (self.month as i64 - 1) + n as i64;
        Self { year: idx.div_euclid(12) as i32, month: idx.rem_euclid(12) as u32 + 1 }
    }

    /// Parses `YYYY-MM`, `YYYY-MM-DD`, `YYYY/MM/DD`, `DD Mon YYYY` and
    /// `Mon YYYY`. Day components are dropped.
    pub fn parse_loose(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((y, m)) = s.split_once('-') {
            if !m.contains('-') {
                if let (4, Ok(y), Ok(m)) = (y.len(), y.parse::<i32>(), m.parse::<u32>()) {
                    return Self::new(y, m);
                }
            }
        }
        for fmt in ["%Y-%m-%d", "%Y/%m/%d", "%d %b %Y", "%d-%b-%Y", "%d %B %Y"] {
            if let Ok(d) = NaiveDate::parse_from_str(s, fmt) {
                return Self::new(d.year(), d.month());
            }
        }
        for fmt in ["%d %b %Y", "%d %B %Y"] {
            if let Ok(d) = NaiveDate::parse_from_str(&format!("1 {s}"), fmt) {
                return Self::new(d.year(), d.month());
            }
        }
        Err(Error::Domain(format!("unrecognised date '{s}'")))
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_loose(s)
    }
}

impl Serialize for YearMonth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for YearMonth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One month's spot and one-month forward quote, in levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateObservation {
    pub date: YearMonth,
    pub spot: f64,
    pub forward_1m: f64,
}

impl RateObservation {
    pub fn new(date: YearMonth, spot: f64, forward_1m: f64) -> Result<Self> {
        if !(spot.is_finite() && spot > 0.0) {
            return Err(Error::Domain(format!("{date}: spot rate {spot} must be positive")));
        }
        if !(forward_1m.is_finite() && forward_1m > 0.0) {
            return Err(Error::Domain(format!("{date}: forward rate {forward_1m} must be positive")));
        }
        Ok(Self { date, spot, forward_1m })
    }
}

/// Column layout of an input file.
///
/// * `Generic`: header `date,spot,forward`, dates `YYYY-MM` (a day part is
///   accepted and dropped).
/// * `BoeExport`: Bank of England database download. First column `DATE`
///   (`DD Mon YYYY`), then the spot series column, then the one-month forward
///   series column. Quotes are already USD per GBP.
/// * `HkmaExport`: HKMA monthly bulletin download. First column is the end of
///   month, then spot and one-month forward, quoted HKD per USD. The adapter
///   inverts both so they become USD per HKD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuoteFormat {
    Generic,
    BoeExport,
    HkmaExport,
}

impl QuoteFormat {
    /// Whether the file quotes foreign per domestic and must be inverted.
    pub fn inverts_quote(self) -> bool {
        matches!(self, QuoteFormat::HkmaExport)
    }
}

impl FromStr for QuoteFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Self::Generic),
            "boe_export" | "boe" => Ok(Self::BoeExport),
            "hkma_export" | "hkma" => Ok(Self::HkmaExport),
            other => Err(Error::Parameter(format!("unknown input format '{other}'"))),
        }
    }
}

impl fmt::Display for QuoteFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuoteFormat::Generic => "generic",
            QuoteFormat::BoeExport => "boe_export",
            QuoteFormat::HkmaExport => "hkma_export",
        })
    }
}

pub fn ingest_csv(path: impl AsRef<Path>, format: QuoteFormat) -> Result<Vec<RateObservation>> {
    let file = std::fs::File::open(path)?;
    ingest_reader(file, format)
}

/// Reads observations from any CSV source, sorts them by month and checks
/// that months are unique and contiguous.
pub fn ingest_reader<R: Read>(reader: R, format: QuoteFormat) -> Result<Vec<RateObservation>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(reader);

    let headers = rdr.headers()?.clone();
    if format == QuoteFormat::Generic {
        let names: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
        if names != ["date", "spot", "forward"] {
            return Err(Error::Parse {
                row: 1,
                message: format!("expected header 'date,spot,forward', got '{}'", names.join(",")),
            });
        }
    } else if headers.len() < 3 {
        return Err(Error::Parse {
            row: 1,
            message: format!("{format} export needs at least 3 columns, got {}", headers.len()),
        });
    }

    let mut obs = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        // header is row 1
        let row = i + 2;
        let record = record.map_err(|e| Error::Parse { row, message: e.to_string() })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if record.len() < 3 || (format == QuoteFormat::Generic && record.len() != 3) {
            return Err(Error::Parse { row, message: format!("expected 3 fields, got {}", record.len()) });
        }
        let date = YearMonth::parse_loose(&record[0]).map_err(|e| Error::Parse { row, message: e.to_string() })?;
        let num = |idx: usize, what: &str| -> Result<f64> {
            record[idx]
                .parse::<f64>()
                .map_err(|_| Error::Parse { row, message: format!("{what} '{}' is not a number", &record[idx]) })
        };
        let mut spot = num(1, "spot")?;
        let mut forward = num(2, "forward")?;
        if format.inverts_quote() && spot > 0.0 && forward > 0.0 {
            spot = 1.0 / spot;
            forward = 1.0 / forward;
        }
        obs.push(RateObservation::new(date, spot, forward)?);
    }
    sort_and_check(&mut obs)?;
    Ok(obs)
}

fn sort_and_check(obs: &mut [RateObservation]) -> Result<()> {
    obs.sort_by_key(|o| o.date);
    for pair in obs.windows(2) {
        let (a, b) = (pair[0].date, pair[1].date);
        if a == b {
            return Err(Error::DuplicateMonth(a));
        }
        if a.succ() != b {
            return Err(Error::Continuity { missing: a.succ() });
        }
    }
    Ok(())
}

/// Keeps observations with `from <= date <= to`.
pub fn filter_range(obs: &[RateObservation], from: Option<YearMonth>, to: Option<YearMonth>) -> Vec<RateObservation> {
    obs.iter().filter(|o| from.is_none_or(|f| o.date >= f) && to.is_none_or(|t| o.date <= t)).copied().collect()
}

/// Log series aligned on the forward's quote month.
///
/// `fwd_err[t] = ln f_t - ln s_{t+1}`, `spot_chg[t] = ln s_{t+1} - ln s_t`,
/// `fs_diff[t] = ln f_t - ln s_t`. The last raw observation only contributes
/// its spot, so `T = N - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignedSeries {
    dates: Vec<YearMonth>,
    fwd_err: Vec<f64>,
    spot_chg: Vec<f64>,
    fs_diff: Vec<f64>,
}

impl AlignedSeries {
    pub fn dates(&self) -> &[YearMonth] {
        &self.dates
    }

    pub fn fwd_err(&self) -> &[f64] {
        &self.fwd_err
    }

    pub fn spot_chg(&self) -> &[f64] {
        &self.spot_chg
    }

    pub fn fs_diff(&self) -> &[f64] {
        &self.fs_diff
    }

    pub fn t_count(&self) -> usize {
        self.fwd_err.len()
    }

    /// Largest violation of `fwd_err + spot_chg = fs_diff`.
    pub fn identity_residual(&self) -> f64 {
        self.fwd_err
            .iter()
            .zip(&self.spot_chg)
            .zip(&self.fs_diff)
            .map(|((fe, ds), fs)| (fe + ds - fs).abs())
            .fold(0.0, f64::max)
    }

    /// Writes `date,fwd_err,spot_chg,fs_diff` with 10 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["date", "fwd_err", "spot_chg", "fs_diff"])?;
        for t in 0..self.t_count() {
            w.write_record([
                self.dates[t].to_string(),
                fmt_sig(self.fwd_err[t], 10),
                fmt_sig(self.spot_chg[t], 10),
                fmt_sig(self.fs_diff[t], 10),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn build_aligned(obs: &[RateObservation]) -> Result<AlignedSeries> {
    if obs.len() < 3 {
        return Err(Error::InsufficientData { required: 3, actual: obs.len() });
    }
    let mut sorted = obs.to_vec();
    sort_and_check(&mut sorted)?;

    let ln_s: Vec<f64> = sorted.iter().map(|o| o.spot.ln()).collect();
    let ln_f: Vec<f64> = sorted.iter().map(|o| o.forward_1m.ln()).collect();
    let t_count = sorted.len() - 1;

    let mut fwd_err = Vec::with_capacity(t_count);
    let mut spot_chg = Vec::with_capacity(t_count);
    let mut fs_diff = Vec::with_capacity(t_count);
    for t in 0..t_count {
        fwd_err.push(ln_f[t] - ln_s[t + 1]);
        spot_chg.push(ln_s[t + 1] - ln_s[t]);
        fs_diff.push(ln_f[t] - ln_s[t]);
    }
    Ok(AlignedSeries { dates: sorted[..t_count].iter().map(|o| o.date).collect(), fwd_err, spot_chg, fs_diff })
}

/// Formats `x` with `digits` significant digits, switching to exponent
/// notation for very large or very small magnitudes.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = digits as i32 - 1 - exp;
    if (0..=20).contains(&decimals) && exp < digits as i32 {
        format!("{x:.*}", decimals as usize)
    } else {
        format!("{x:.*e}", digits - 1)
    }
}

pub fn write_observations_csv<W: Write>(obs: &[RateObservation], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["date", "spot", "forward"])?;
    for o in obs {
        w.write_record([o.date.to_string(), fmt_sig(o.spot, 12), fmt_sig(o.forward_1m, 12)])?;
    }
    w.flush()?;
    Ok(())
}
