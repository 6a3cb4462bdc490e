use std::path::PathBuf;

use fxpremia::timeseries::{build_aligned, filter_range, ingest_csv};
use fxpremia::{QuoteFormat, YearMonth};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ym(y: i32, m: u32) -> YearMonth {
    YearMonth::new(y, m).unwrap()
}

#[test]
fn boe_export_reads_dates_and_quotes() {
    let obs = ingest_csv(fixture("boe_sample.csv"), QuoteFormat::BoeExport).unwrap();
    assert_eq!(obs.len(), 8);
    assert_eq!(obs[0].date, ym(1979, 1));
    assert_eq!(obs[7].date, ym(1979, 8));
    assert_eq!(obs[2].spot, 2.0640);
    assert_eq!(obs[2].forward_1m, 2.0605);
    let al = build_aligned(&obs).unwrap();
    assert_eq!(al.t_count(), 7);
    assert!(al.identity_residual() < 1e-15);
    assert!((al.fwd_err()[0] - (2.0060f64.ln() - 2.0210f64.ln())).abs() < 1e-15);
}

#[test]
fn hkma_export_is_inverted() {
    let obs = ingest_csv(fixture("hkma_sample.csv"), QuoteFormat::HkmaExport).unwrap();
    assert_eq!(obs.len(), 6);
    assert!((obs[0].spot - 1.0 / 7.7450).abs() < 1e-15);
    assert!((obs[5].forward_1m - 1.0 / 7.8120).abs() < 1e-15);
    let al = build_aligned(&obs).unwrap();
    // forward error in USD per HKD is the negative of the HKD per USD one
    let direct = 7.7420f64.ln() - 7.8200f64.ln();
    assert!((al.fwd_err()[0] - direct).abs() < 1e-15);
}

#[test]
fn range_filter_is_inclusive() {
    let obs = ingest_csv(fixture("boe_sample.csv"), QuoteFormat::BoeExport).unwrap();
    let kept = filter_range(&obs, Some(ym(1979, 3)), Some(ym(1979, 6)));
    assert_eq!(kept.len(), 4);
    assert_eq!(kept[0].date, ym(1979, 3));
    assert_eq!(kept[3].date, ym(1979, 6));
}

#[test]
fn generic_fixture_reads() {
    let obs = ingest_csv(fixture("simulated_ar1_seed42.csv"), QuoteFormat::Generic).unwrap();
    assert_eq!(obs.len(), 447);
    assert_eq!(obs[0].date, ym(1979, 1));
    assert_eq!(build_aligned(&obs).unwrap().t_count(), 446);
}

#[test]
fn wrong_format_is_rejected() {
    assert!(ingest_csv(fixture("boe_sample.csv"), QuoteFormat::Generic).is_err());
}
