//! End-to-end analysis: descriptives, regressions, identification, the
//! state-space fits and the residual checks, written as one JSON report plus
//! CSV files.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::diagnostics::{
    adf_test, correlogram, jarque_bera, ljung_box, moments, write_correlogram_csv, CorrelogramRow, MomentSummary,
    TestResult,
};
use crate::error::{Error, Result};
use crate::identification::{
    default_candidates, fit_candidates, identify_orders, map_fe_to_rp_process, selected_candidate, CandidateReport,
    LB_LAGS,
};
use crate::regressions::{test_time_varying_premia, PremiaTimeVariationVerdict, Table5};
use crate::state_space::{extract_premia, mle_fit, FittedReport, MleOptions, PremiaSeries};
use crate::timeseries::{build_aligned, filter_range, fmt_sig, ingest_csv, QuoteFormat, RateObservation, YearMonth};

pub const SCHEMA_VERSION: u32 = 1;
pub const CORRELOGRAM_LAGS: usize = 12;

/// Which covariance variants of the premium model to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstrainC {
    #[default]
    Both,
    ZeroOnly,
    FreeOnly,
}

impl ConstrainC {
    fn variants(self) -> &'static [bool] {
        match self {
            ConstrainC::Both => &[true, false],
            ConstrainC::ZeroOnly => &[true],
            ConstrainC::FreeOnly => &[false],
        }
    }
}

impl FromStr for ConstrainC {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "both" => Ok(ConstrainC::Both),
            "zero_only" | "zero" | "true" => Ok(ConstrainC::ZeroOnly),
            "free_only" | "free" | "false" => Ok(ConstrainC::FreeOnly),
            other => Err(Error::Parameter(format!("unknown covariance option '{other}'"))),
        }
    }
}

impl fmt::Display for ConstrainC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstrainC::Both => "both",
            ConstrainC::ZeroOnly => "zero_only",
            ConstrainC::FreeOnly => "free_only",
        })
    }
}

/// Batch settings read from a plain `key = value` file. Blank lines and
/// lines starting with `#` are ignored.
///
/// ```text
/// p = 1
/// q = 0
/// constrain_c = both
/// max_iter = 500
/// rel_tol = 1e-9
/// ```
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ModelSpecFile {
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub constrain_c: Option<ConstrainC>,
    pub max_iter: Option<usize>,
    pub rel_tol: Option<f64>,
}

impl FromStr for ModelSpecFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut out = ModelSpecFile::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { row: i + 1, message: format!("expected key = value, got '{line}'") })?;
            let value = value.trim();
            let bad = |what: &str| Error::Parse { row: i + 1, message: format!("{what} '{value}'") };
            match key.trim().to_ascii_lowercase().as_str() {
                "p" => out.p = Some(value.parse().map_err(|_| bad("invalid p"))?),
                "q" => out.q = Some(value.parse().map_err(|_| bad("invalid q"))?),
                "constrain_c" => out.constrain_c = Some(value.parse()?),
                "max_iter" => out.max_iter = Some(value.parse().map_err(|_| bad("invalid max_iter"))?),
                "rel_tol" => out.rel_tol = Some(value.parse().map_err(|_| bad("invalid rel_tol"))?),
                other => return Err(Error::Parse { row: i + 1, message: format!("unknown key '{other}'") }),
            }
        }
        if out.p.is_some() != out.q.is_some() {
            return Err(Error::Parameter("spec file must set both p and q or neither".into()));
        }
        Ok(out)
    }
}

impl ModelSpecFile {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        fs::read_to_string(path)?.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub format: QuoteFormat,
    pub from: Option<YearMonth>,
    pub to: Option<YearMonth>,
    pub level: f64,
    /// Overrides the candidate ARMA orders for the forward errors.
    pub candidates: Option<Vec<(usize, usize)>>,
    /// Overrides the premium model order chosen by identification.
    pub premium_order: Option<(usize, usize)>,
    pub constrain_c: ConstrainC,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub mle: MleOptions,
}

impl PipelineConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            format: QuoteFormat::Generic,
            from: None,
            to: None,
            level: 0.05,
            candidates: None,
            premium_order: None,
            constrain_c: ConstrainC::Both,
            out_dir: out_dir.into(),
            seed: 0,
            mle: MleOptions::default(),
        }
    }

    /// Applies the settings of a spec file on top of this config.
    pub fn apply_spec_file(&mut self, spec: &ModelSpecFile) {
        if let (Some(p), Some(q)) = (spec.p, spec.q) {
            self.premium_order = Some((p, q));
        }
        if let Some(c) = spec.constrain_c {
            self.constrain_c = c;
        }
        if let Some(m) = spec.max_iter {
            self.mle.max_iter = m;
        }
        if let Some(t) = spec.rel_tol {
            self.mle.rel_tol = t;
        }
    }
}

/// A report section, either computed or skipped with the reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "data", rename_all = "snake_case")]
pub enum Section<T> {
    Ok(T),
    Skipped { reason: String },
}

impl<T> Section<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Section::Ok(v) => Some(v),
            Section::Skipped { .. } => None,
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, Section::Skipped { .. })
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Section::Skipped { reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1 {
    pub first: YearMonth,
    pub last: YearMonth,
    pub moments: MomentSummary,
    pub jarque_bera: TestResult,
    pub adf: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table2 {
    pub rows: Vec<CorrelogramRow>,
    pub p_suggested: usize,
    pub q_suggested: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tables34 {
    pub candidates: Vec<CandidateReport>,
    /// Forward-error order picked by the most criteria.
    pub selected: Option<(usize, usize)>,
    /// Premium order implied by the selection.
    pub premium_order: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table5Report {
    pub table: Table5,
    pub detail: PremiaTimeVariationVerdict,
}

/// Key under which a covariance variant is reported.
pub fn variant_key(c_zero: bool) -> &'static str {
    if c_zero {
        "c_zero"
    } else {
        "c_free"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSpaceFits {
    pub order: (usize, usize),
    pub fits: BTreeMap<String, Section<FittedReport>>,
    /// Variant with the lowest AIC when both were estimated.
    pub preferred_by_aic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhitenessReport {
    pub correlogram: Vec<CorrelogramRow>,
    pub lb_p_values: BTreeMap<usize, f64>,
    /// No partial or plain autocorrelation significant at the level.
    pub correlogram_clean: bool,
    /// Every Ljung-Box p-value above the level.
    pub lb_pass: bool,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiaVariant {
    pub dates: Vec<YearMonth>,
    pub series: PremiaSeries,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub config: PipelineConfig,
    pub n_observations: usize,
    pub t_count: usize,
    pub table1: Section<Table1>,
    pub table2: Section<Table2>,
    pub tables3_4: Section<Tables34>,
    pub table5: Section<Table5Report>,
    pub tables6_8: Section<StateSpaceFits>,
    pub tables7_9: Section<BTreeMap<String, Section<WhitenessReport>>>,
    pub premia_series: Section<BTreeMap<String, Section<PremiaVariant>>>,
}

impl AnalysisReport {
    /// True when a section or a fitted variant is skipped, or a fit did not
    /// converge.
    pub fn is_degraded(&self) -> bool {
        self.table1.is_skipped()
            || self.table2.is_skipped()
            || self.tables3_4.is_skipped()
            || self.table5.is_skipped()
            || self.tables6_8.is_skipped()
            || self.tables7_9.is_skipped()
            || self.premia_series.is_skipped()
            || self.tables6_8.ok().is_some_and(|f| f.fits.values().any(|s| s.ok().is_none_or(|fit| !fit.converged)))
            || nested_skipped(&self.tables7_9)
            || nested_skipped(&self.premia_series)
    }

    /// `0` for a full run, `2` when degraded.
    pub fn exit_code(&self) -> i32 {
        if self.is_degraded() {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn nested_skipped<T>(s: &Section<BTreeMap<String, Section<T>>>) -> bool {
    s.ok().is_some_and(|m| m.values().any(Section::is_skipped))
}

/// Correlogram to lag 12 and Ljung-Box at 12, 24 and 36 of the combined
/// residual after its burn-in. Degrees of freedom are reduced by the number
/// of ARMA coefficients in the premium model.
pub fn check_residual_whiteness(premia: &PremiaSeries, level: f64) -> Result<WhitenessReport> {
    let x = premia.combined_after_burn_in();
    if x.len() <= 40 {
        return Err(Error::InsufficientData { required: 41, actual: x.len() });
    }
    let rows = correlogram(x, CORRELOGRAM_LAGS)?;
    let fitted = premia.order.0 + premia.order.1;
    let mut lb_p_values = BTreeMap::new();
    for lags in LB_LAGS {
        if lags > fitted && lags < x.len() {
            lb_p_values.insert(lags, ljung_box(x, lags, fitted)?.p_value);
        }
    }
    let correlogram_clean = rows.iter().all(|r| !r.pac_sig.rejects_at(level) && !r.ac_sig.rejects_at(level));
    let lb_pass = lb_p_values.values().all(|p| *p > level);
    Ok(WhitenessReport {
        correlogram: rows,
        lb_p_values,
        correlogram_clean,
        lb_pass,
        verdict: correlogram_clean && lb_pass,
    })
}

/// Runs every stage on already ingested quotes. Errors only for problems
/// that make the whole analysis meaningless (bad input, degenerate data);
/// later failures mark sections skipped.
pub fn analyze(obs: &[RateObservation], config: &PipelineConfig) -> Result<AnalysisReport> {
    if !(config.level > 0.0 && config.level < 1.0) {
        return Err(Error::Parameter(format!("significance level {} not in (0, 1)", config.level)));
    }
    let obs = filter_range(obs, config.from, config.to);
    if obs.is_empty() {
        return Err(Error::InsufficientData { required: 3, actual: 0 });
    }
    let aligned = build_aligned(&obs)?;
    let fe = aligned.fwd_err();
    let dates = aligned.dates();

    let table1 = Table1 {
        first: dates[0],
        last: dates[dates.len() - 1],
        moments: moments(fe)?,
        jarque_bera: jarque_bera(fe)?,
        adf: adf_test(fe, None)?,
    };

    let table2 = match identify_orders(fe, CORRELOGRAM_LAGS, config.level) {
        Ok(s) => Section::Ok(Table2 { rows: s.correlogram, p_suggested: s.p_suggested, q_suggested: s.q_suggested }),
        Err(e) => Section::skipped(format!("correlogram: {e}")),
    };

    let candidates =
        config.candidates.clone().or_else(|| table2.ok().map(|t| default_candidates(t.p_suggested, t.q_suggested)));
    let tables3_4 = match candidates {
        None => Section::skipped("no candidate orders: correlogram unavailable"),
        Some(c) => match fit_candidates(fe, &c, &config.mle) {
            Ok(reports) => {
                let selected = selected_candidate(&reports).map(|r| (r.p, r.q));
                let premium_order = selected.and_then(|s| map_fe_to_rp_process(s).ok());
                Section::Ok(Tables34 { candidates: reports, selected, premium_order })
            }
            Err(e) => Section::skipped(format!("candidate estimation: {e}")),
        },
    };

    let table5 = match test_time_varying_premia(&aligned, config.level) {
        Ok(v) => Section::Ok(Table5Report { table: v.table(), detail: v }),
        Err(e) => Section::skipped(format!("regressions: {e}")),
    };

    let order = config.premium_order.or_else(|| tables3_4.ok().and_then(|t| t.premium_order));
    let mut premia = BTreeMap::new();
    let tables6_8 = match order {
        None => Section::skipped(match tables3_4.ok() {
            Some(t) => format!("selected order {:?} has no premium-process mapping", t.selected),
            None => "identification unavailable".to_string(),
        }),
        Some((p, q)) => {
            let mut fits = BTreeMap::new();
            for &c_zero in config.constrain_c.variants() {
                let key = variant_key(c_zero).to_string();
                match mle_fit(p, q, fe, c_zero, &config.mle) {
                    Ok(fit) => {
                        let series =
                            extract_premia(&fit, fe).map(|series| PremiaVariant { dates: dates.to_vec(), series });
                        premia.insert(key.clone(), series);
                        fits.insert(key, Section::Ok(fit.report()));
                    }
                    Err(e) => {
                        fits.insert(key, Section::skipped(format!("estimation: {e}")));
                    }
                }
            }
            let preferred_by_aic = fits
                .iter()
                .filter_map(|(k, s)| s.ok().map(|f| (k.clone(), f.aic)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(k, _)| k)
                .filter(|_| fits.len() > 1);
            Section::Ok(StateSpaceFits { order: (p, q), fits, preferred_by_aic })
        }
    };

    let (tables7_9, premia_series) = if tables6_8.is_skipped() {
        (Section::skipped("no fitted premium model"), Section::skipped("no fitted premium model"))
    } else {
        let mut white = BTreeMap::new();
        let mut series = BTreeMap::new();
        for (key, p) in premia {
            match p {
                Ok(v) => {
                    let w = check_residual_whiteness(&v.series, config.level)
                        .map_or_else(|e| Section::skipped(format!("whiteness: {e}")), Section::Ok);
                    white.insert(key.clone(), w);
                    series.insert(key, Section::Ok(v));
                }
                Err(e) => {
                    white.insert(key.clone(), Section::skipped(format!("premia: {e}")));
                    series.insert(key, Section::skipped(format!("premia: {e}")));
                }
            }
        }
        (Section::Ok(white), Section::Ok(series))
    };

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        n_observations: obs.len(),
        t_count: aligned.t_count(),
        table1: Section::Ok(table1),
        table2,
        tables3_4,
        table5,
        tables6_8,
        tables7_9,
        premia_series,
    })
}

/// Ingests the configured file, analyses it and writes every output file.
pub fn run_pipeline(config: &PipelineConfig) -> Result<AnalysisReport> {
    let obs = ingest_csv(&config.input, config.format)?;
    let report = analyze(&obs, config)?;
    fs::create_dir_all(&config.out_dir)?;
    let aligned = build_aligned(&filter_range(&obs, config.from, config.to))?;
    aligned.write_csv(create(&config.out_dir, "aligned.csv")?)?;
    write_outputs(&report, &config.out_dir)?;
    Ok(report)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Writes `report.json` and the per-table CSV files.
pub fn write_outputs(report: &AnalysisReport, dir: &Path) -> Result<()> {
    let mut json = create(dir, "report.json")?;
    json.write_all(report.to_json()?.as_bytes())?;
    json.write_all(b"\n")?;
    json.flush()?;

    if let Some(t1) = report.table1.ok() {
        let mut w = csv::Writer::from_writer(create(dir, "table1.csv")?);
        w.write_record(["statistic", "value"])?;
        let opt = |v: Option<f64>| v.map_or_else(String::new, |v| fmt_sig(v, 10));
        let rows = [
            ("observations", t1.moments.n.to_string()),
            ("mean", fmt_sig(t1.moments.mean, 10)),
            ("sd", fmt_sig(t1.moments.sd, 10)),
            ("skewness", opt(t1.moments.skewness)),
            ("excess_kurtosis", opt(t1.moments.excess_kurtosis)),
            ("jb_stat", fmt_sig(t1.jarque_bera.statistic, 10)),
            ("jb_p_value", fmt_sig(t1.jarque_bera.p_value, 10)),
            ("adf_t_stat", fmt_sig(t1.adf.statistic, 10)),
            ("adf_p_value", fmt_sig(t1.adf.p_value, 10)),
        ];
        for (k, v) in rows {
            w.write_record([k, v.as_str()])?;
        }
        w.flush()?;
    }

    if let Some(t2) = report.table2.ok() {
        write_correlogram_csv(&t2.rows, create(dir, "correlogram.csv")?)?;
    }
    if let Some(white) = report.tables7_9.ok() {
        for (key, w) in white {
            if let Some(w) = w.ok() {
                write_correlogram_csv(&w.correlogram, create(dir, &format!("correlogram_combined_{key}.csv"))?)?;
            }
        }
    }

    if let Some(t34) = report.tables3_4.ok() {
        let mut w = csv::Writer::from_writer(create(dir, "candidates.csv")?);
        w.write_record([
            "p",
            "q",
            "aic",
            "sc",
            "hqc",
            "lb12_p",
            "lb24_p",
            "lb36_p",
            "bg_p",
            "resid_adf_p",
            "selected_by",
            "converged",
            "error",
        ])?;
        let opt = |v: Option<f64>| v.map_or_else(String::new, |v| fmt_sig(v, 10));
        for c in &t34.candidates {
            let sel: Vec<String> = c.selected_by.iter().map(|s| format!("{s:?}").to_lowercase()).collect();
            w.write_record([
                c.p.to_string(),
                c.q.to_string(),
                opt(c.aic),
                opt(c.sc),
                opt(c.hqc),
                opt(c.lb_p_values.get(&12).copied()),
                opt(c.lb_p_values.get(&24).copied()),
                opt(c.lb_p_values.get(&36).copied()),
                opt(c.bg_p_value),
                opt(c.resid_adf_p),
                sel.join(";"),
                c.converged.to_string(),
                c.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
    }

    if let Some(t5) = report.table5.ok() {
        let mut w = csv::Writer::from_writer(create(dir, "table5.csv")?);
        w.write_record(["coefficient", "estimate", "se", "t", "p", "resid_adf_p"])?;
        for (name, row) in [("beta3", &t5.table.beta3), ("beta4", &t5.table.beta4)] {
            w.write_record([
                name.to_string(),
                fmt_sig(row.beta, 10),
                fmt_sig(row.se, 10),
                fmt_sig(row.t, 10),
                fmt_sig(row.p, 10),
                fmt_sig(row.resid_adf_p, 10),
            ])?;
        }
        w.flush()?;
    }

    if let Some(fits) = report.tables6_8.ok() {
        let mut w = csv::Writer::from_writer(create(dir, "state_space.csv")?);
        w.write_record(["variant", "parameter", "raw", "se", "p_value"])?;
        for (key, f) in &fits.fits {
            let Some(f) = f.ok() else { continue };
            let opt = |v: Option<f64>| v.map_or_else(String::new, |v| fmt_sig(v, 10));
            for prm in &f.params {
                w.write_record([key.clone(), prm.name.clone(), fmt_sig(prm.raw, 10), opt(prm.se), opt(prm.p_value)])?;
            }
            for (name, v) in [("loglik", f.loglik), ("aic", f.aic), ("sc", f.sc), ("hqc", f.hqc)] {
                w.write_record([key.clone(), name.to_string(), fmt_sig(v, 10), String::new(), String::new()])?;
            }
        }
        w.flush()?;
    }

    if let Some(series) = report.premia_series.ok() {
        for (key, s) in series {
            let Some(v) = s.ok() else { continue };
            let name = if key == variant_key(true) || series.len() == 1 {
                "premia.csv".to_string()
            } else {
                format!("premia_{key}.csv")
            };
            v.series.write_csv(&v.dates, create(dir, &name)?)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_space::{build_arma_spec, extract_premia_with_spec, simulate};

    #[test]
    fn spec_file_parsing() {
        let s: ModelSpecFile =
            "# premium model\np = 1\nq=0\nconstrain_c = zero_only\nmax_iter = 200\nrel_tol = 1e-8\n".parse().unwrap();
        assert_eq!((s.p, s.q), (Some(1), Some(0)));
        assert_eq!(s.constrain_c, Some(ConstrainC::ZeroOnly));
        assert_eq!(s.max_iter, Some(200));
        assert_eq!(s.rel_tol, Some(1e-8));
        assert!("p = 1".parse::<ModelSpecFile>().is_err());
        assert!(matches!("p = x\nq = 0".parse::<ModelSpecFile>(), Err(Error::Parse { row: 1, .. })));
        assert!("colour = red".parse::<ModelSpecFile>().is_err());

        let mut cfg = PipelineConfig::new("in.csv", "out");
        cfg.apply_spec_file(&s);
        assert_eq!(cfg.premium_order, Some((1, 0)));
        assert_eq!(cfg.mle.max_iter, 200);
    }

    #[test]
    fn constrain_option_round_trip() {
        for c in [ConstrainC::Both, ConstrainC::ZeroOnly, ConstrainC::FreeOnly] {
            assert_eq!(c.to_string().parse::<ConstrainC>().unwrap(), c);
        }
        assert!("sometimes".parse::<ConstrainC>().is_err());
    }

    #[test]
    fn whiteness_flags_underfit() {
        let truth = build_arma_spec(2, 0, &[0.5, 0.3], &[], 0.5, 1.0, 0.0).unwrap();
        let fe = simulate(&truth, 446, 1).unwrap().fe;
        // premium model with no dynamics leaves fe as the combined residual
        let flat = build_arma_spec(1, 0, &[0.0], &[], 0.5, 1.0, 0.0).unwrap();
        let ps = extract_premia_with_spec(&flat, &fe).unwrap();
        let w = check_residual_whiteness(&ps, 0.05).unwrap();
        assert!(!w.verdict && !w.lb_pass);
        assert_eq!(w.correlogram.len(), 12);
        assert_eq!(w.lb_p_values.keys().copied().collect::<Vec<_>>(), vec![12, 24, 36]);
    }

    #[test]
    fn whiteness_needs_enough_data() {
        let s = build_arma_spec(1, 0, &[0.5], &[], 1.0, 1.0, 0.0).unwrap();
        let ps = extract_premia_with_spec(&s, &[0.1; 30]).unwrap();
        assert!(matches!(check_residual_whiteness(&ps, 0.05), Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn section_serialization() {
        let s: Section<u32> = Section::skipped("why");
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"status":"skipped","data":{"reason":"why"}}"#);
        assert_eq!(serde_json::to_string(&Section::Ok(3)).unwrap(), r#"{"status":"ok","data":3}"#);
    }
}
