use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fxpremia::pipeline::{run_pipeline, ConstrainC, ModelSpecFile, PipelineConfig};
use fxpremia::regressions::test_time_varying_premia;
use fxpremia::state_space::{build_arma_spec, simulate_fx_market, ExpectedChange, MleOptions};
use fxpremia::timeseries::{build_aligned, filter_range, fmt_sig, ingest_csv, write_observations_csv};
use fxpremia::{QuoteFormat, YearMonth};

#[derive(Parser)]
#[command(name = "fxpremia", version, about = "Foreign-exchange risk premia from spot and forward rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: descriptives, regressions, identification, state-space fits.
    Analyze(AnalyzeArgs),
    /// Simulate monthly spot and forward quotes from a premium model.
    Simulate(SimulateArgs),
    /// Only the regression test for existing, time-varying premia.
    TestPremia(TestPremiaArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "generic")]
    format: QuoteFormat,
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    /// both, zero_only or free_only
    #[arg(long, default_value = "both")]
    constrain_c: ConstrainC,
    #[arg(long, env = "FXPREMIA_OUT_DIR", default_value = "fxpremia-out")]
    out: PathBuf,
    /// First month kept, YYYY-MM
    #[arg(long)]
    from: Option<YearMonth>,
    /// Last month kept, YYYY-MM
    #[arg(long)]
    to: Option<YearMonth>,
    /// Candidate forward-error orders, e.g. "1,0;0,1;1,1"
    #[arg(long, value_parser = parse_candidates)]
    candidates: Option<Candidates>,
    /// key = value file with p, q, constrain_c, max_iter, rel_tol
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    q: usize,
    /// AR coefficients, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    phi: Vec<f64>,
    /// MA coefficients, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta: Vec<f64>,
    /// Rational-error variance R
    #[arg(long)]
    r: f64,
    /// Premium-shock variance Q
    #[arg(long)]
    qvar: f64,
    /// Noise covariance C
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c: f64,
    /// Number of forward errors; one more quote month is written
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Variance of the expected spot change not explained by the premium
    #[arg(long, default_value_t = 0.0)]
    dse_var: f64,
    /// Loading of the expected spot change on the premium
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    kappa: f64,
    /// Also write the hidden components to this CSV
    #[arg(long)]
    components: Option<PathBuf>,
    #[arg(long, default_value = "1979-01")]
    start: YearMonth,
}

#[derive(Args)]
struct TestPremiaArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "generic")]
    format: QuoteFormat,
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    #[arg(long)]
    from: Option<YearMonth>,
    #[arg(long)]
    to: Option<YearMonth>,
}

#[derive(Clone)]
struct Candidates(Vec<(usize, usize)>);

fn parse_candidates(s: &str) -> Result<Candidates, String> {
    s.split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|c| {
            let (p, q) = c.split_once(',').ok_or_else(|| format!("expected p,q in '{c}'"))?;
            let p = p.trim().parse().map_err(|_| format!("bad p in '{c}'"))?;
            let q = q.trim().parse().map_err(|_| format!("bad q in '{c}'"))?;
            Ok((p, q))
        })
        .collect::<Result<_, String>>()
        .map(Candidates)
}

fn analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let mut config = PipelineConfig::new(&args.input, &args.out);
    config.format = args.format;
    config.level = args.level;
    config.constrain_c = args.constrain_c;
    config.from = args.from;
    config.to = args.to;
    config.candidates = args.candidates.map(|c| c.0);
    config.seed = args.seed;
    config.mle = MleOptions::default();
    if let Some(path) = &args.spec {
        let spec = ModelSpecFile::read(path).with_context(|| format!("reading {}", path.display()))?;
        config.apply_spec_file(&spec);
    }
    let report = run_pipeline(&config)?;
    let mut out = io::stdout().lock();
    writeln!(out, "report written to {}", config.out_dir.join("report.json").display())?;
    if let Some(t5) = report.table5.ok() {
        writeln!(out, "premia exist and vary: {}", t5.table.premia_exist_and_vary)?;
    }
    if let Some(t34) = report.tables3_4.ok() {
        writeln!(out, "selected forward-error model: {:?}", t34.selected)?;
    }
    if report.is_degraded() {
        writeln!(out, "some sections were skipped or did not converge")?;
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    if args.phi.len() != args.p || args.theta.len() != args.q {
        bail!("--phi needs {} and --theta needs {} coefficients", args.p, args.q);
    }
    let spec = build_arma_spec(args.p, args.q, &args.phi, &args.theta, args.r, args.qvar, args.c)?;
    let expected = ExpectedChange { kappa: args.kappa, eta_var: args.dse_var };
    let market = simulate_fx_market(&spec, args.t, expected, args.start, args.seed)?;
    let file = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_observations_csv(&market.observations, BufWriter::new(file))?;
    if let Some(path) = &args.components {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        writeln!(w, "date,fe,rp,re,a,spot_chg_e")?;
        for t in 0..args.t {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                market.observations[t].date,
                fmt_sig(market.path.fe[t], 12),
                fmt_sig(market.path.rp[t], 12),
                fmt_sig(market.path.re[t], 12),
                fmt_sig(market.path.a[t], 12),
                fmt_sig(market.spot_chg_e[t], 12),
            )?;
        }
        w.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn test_premia(args: TestPremiaArgs) -> Result<ExitCode> {
    let obs = ingest_csv(&args.input, args.format)?;
    let aligned = build_aligned(&filter_range(&obs, args.from, args.to))?;
    let verdict = test_time_varying_premia(&aligned, args.level)?;
    println!("{}", serde_json::to_string_pretty(&verdict.table())?);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Simulate(a) => simulate(a),
        Command::TestPremia(a) => test_premia(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    })
}
