//! Command-line front end.
//!
//! Exit codes: 0 success (no rejection), 1 malformed input data, 2 invalid
//! configuration or arguments, 3 at least one rejection or failed check.

use crate::asymptotics::{
    efficacy_report, hellinger_fold, hellinger_grid, named_perturbation, DEFAULT_TOL,
};
use crate::error::Error;
use crate::montecarlo::{
    lemma1_check, power_study, run_tests, CriticalValueCache, Decision, Method, PowerStudyConfig,
    RunOptions, TestReport, DEFAULT_NULL_REPLICATIONS,
};
use crate::rng::RngStream;
use crate::sampling::AlternativeFamily;
use crate::spacings::{Order, Sample};
use crate::statistics::{Combination, HFunction, StatSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

/// Study design matching the published power tables.
pub const BUNDLED_TABLES_CONFIG: &str = include_str!("../configs/paper-tables.json");

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_REJECT: i32 = 3;

const GRAMMAR: &str = "\
Statistic specs (--stat):
  <h>[:co|:max][:m=<int>:disjoint|:m=<int>:overlap]
  h        greenwood (x^2) | moran (-log x) | rao (|x-1|) | entropy (x log x)
  :co      spacings of the centre-outward ranks |2x-1|
  :max     larger of the usual and centre-outward statistics
  :m=<int> m-step spacings; m > 1 needs :disjoint or :overlap
  examples: greenwood, moran:co, rao:max, entropy:co:m=2:overlap

Family specs (--family, --null):
  uniform | A:<k> | B:<k> | C:<k> | beta:<k>     (k > 0, case-insensitive)
  A: 1-(1-x)^k   B/C: symmetric about 1/2   beta: Beta(k, k)

Perturbation specs (--perturbation):
  linear | hump | quadratic | cos[:<int>] | sin[:<int>]

Exit codes: 0 ok, 1 malformed input, 2 invalid config, 3 rejection or failed check.";

#[derive(Debug, Parser)]
#[command(name = "cospacings", version, about = "Spacings goodness-of-fit tests for uniformity", after_help = GRAMMAR)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Calibration {
    /// Simulated null distribution.
    MonteCarlo,
    /// Normal limit; simple spacings and single orderings only.
    Asymptotic,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed for every simulation.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a data file (one value per line, '#' comments) for uniformity.
    #[command(after_help = GRAMMAR)]
    Test {
        /// Data file, or '-' for stdin.
        input: PathBuf,
        #[arg(long = "stat", default_value = "greenwood")]
        stats: Vec<StatSpec>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Null replications for Monte Carlo calibration.
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        /// Transform the data by this family's CDF before testing.
        #[arg(long)]
        null: Option<AlternativeFamily>,
        #[arg(long, value_enum, default_value_t = Calibration::MonteCarlo)]
        method: Calibration,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo critical values.
    #[command(name = "critical-values", after_help = GRAMMAR)]
    CriticalValues {
        #[arg(long = "stat", default_value = "greenwood")]
        stats: Vec<StatSpec>,
        /// Number of observations (repeatable).
        #[arg(long = "n", required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_NULL_REPLICATIONS)]
        reps: usize,
        /// JSON file of cached critical values, created if missing.
        #[arg(long)]
        cv_cache: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical power study; CSV output also writes a `.meta.json` sidecar.
    #[command(after_help = GRAMMAR)]
    Power {
        /// JSON study configuration.
        #[arg(long, conflicts_with = "bundled_tables")]
        config: Option<PathBuf>,
        /// Use the bundled configuration for the published tables.
        #[arg(long)]
        bundled_tables: bool,
        #[arg(long = "family")]
        families: Vec<AlternativeFamily>,
        #[arg(long = "n")]
        sizes: Vec<usize>,
        #[arg(long = "stat")]
        stats: Vec<StatSpec>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Replications per cell.
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        null_reps: Option<usize>,
        /// Worker threads; results do not depend on it.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        cv_cache: Option<PathBuf>,
        /// Overrides the configuration's seed when given.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local efficacy of each score function along given directions.
    #[command(after_help = GRAMMAR)]
    Efficacy {
        /// Score functions, optionally with `:co`.
        #[arg(long = "stat")]
        stats: Vec<StatSpec>,
        #[arg(long = "perturbation", default_value = "linear")]
        perturbations: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Hellinger distance from uniform of a family and of its centre-outward fold.
    #[command(after_help = GRAMMAR)]
    Hellinger {
        /// Families; defaults to {A, B, C, beta} x {0.5, 1.5, 2.5}.
        #[arg(long = "family")]
        families: Vec<AlternativeFamily>,
        #[command(flatten)]
        common: Common,
    },
    /// Null equality of usual and folded statistics, and the Hellinger fold inequality.
    #[command(name = "lemma-checks", after_help = GRAMMAR)]
    LemmaChecks {
        /// Observations per simulated sample.
        #[arg(long, default_value_t = 19)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        reps: usize,
        /// KS p-value below which the null-equality check fails.
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
        #[arg(long = "family")]
        families: Vec<AlternativeFamily>,
        #[command(flatten)]
        common: Common,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Input(_) | Error::EmptySample | Error::Domain { .. } => {
                EXIT_INPUT
            }
            _ => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::input(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value).map_err(Error::from)? + "\n")
}

/// Reads one value per line, skipping blanks and `#` comments.
pub fn parse_values(text: &str) -> Result<Vec<f64>, Error> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Input(format!("line {}: `{t}` is not a number", i + 1)))?;
        if !v.is_finite() {
            return Err(Error::Input(format!("line {}: `{t}` is not finite", i + 1)));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(out)
}

fn read_sample(input: &Path, null: Option<AlternativeFamily>) -> CliResult<Sample> {
    let text = if input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::input(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| CliError::input(format!("{}: {e}", input.display())))?
    };
    let mut values = parse_values(&text)?;
    match null {
        Some(fam) => {
            for v in &mut values {
                *v = if *v <= 0.0 {
                    0.0
                } else if *v >= 1.0 {
                    1.0
                } else {
                    fam.cdf(*v)?
                };
            }
        }
        None => {
            if let Some((i, v)) = values
                .iter()
                .enumerate()
                .find(|(_, v)| !(0.0..=1.0).contains(*v))
            {
                return Err(CliError::input(format!(
                    "value {v} (data point {}) is outside [0, 1]; pass --null to transform",
                    i + 1
                )));
            }
        }
    }
    Ok(Sample::new(values)?)
}

fn tests_csv(reports: &[TestReport]) -> String {
    let mut s = String::from("statistic,value,p_value,critical_value,alpha,decision,degenerate\n");
    for r in reports {
        let decision = match r.decision {
            Decision::Reject => "reject",
            Decision::FailToReject => "fail_to_reject",
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.spec, r.statistic.value, r.p_value, r.critical_value, r.alpha, decision, r.degenerate
        );
    }
    s
}

#[derive(Serialize)]
struct CriticalValueRecord {
    statistic: String,
    n: usize,
    alpha: f64,
    replications: usize,
    seed: u64,
    critical_value: f64,
}

/// Efficacy and Hellinger records share this layout.
#[derive(Serialize)]
struct Record {
    h: String,
    family_or_l: String,
    value: f64,
    quadrature_error: f64,
    #[serde(flatten)]
    extra: serde_json::Map<String, serde_json::Value>,
}

fn records_csv(records: &[Record], extra_cols: &[&str]) -> String {
    let mut s = String::from("h,family_or_l,value,quadrature_error");
    for c in extra_cols {
        s.push(',');
        s.push_str(c);
    }
    s.push('\n');
    for r in records {
        let _ = write!(
            s,
            "{},{},{},{}",
            r.h, r.family_or_l, r.value, r.quadrature_error
        );
        for c in extra_cols {
            let v = r.extra.get(*c).map(|v| v.to_string()).unwrap_or_default();
            let _ = write!(s, ",{}", v.trim_matches('"'));
        }
        s.push('\n');
    }
    s
}

fn default_grid() -> Vec<AlternativeFamily> {
    let mut out = Vec::new();
    for kind in ["A", "B", "C", "beta"] {
        for k in [0.5, 1.5, 2.5] {
            out.push(AlternativeFamily::new(kind, k).expect("valid grid"));
        }
    }
    out
}

fn execute(command: Command) -> CliResult<i32> {
    match command {
        Command::Test {
            input,
            stats,
            alpha,
            reps,
            null,
            method,
            common,
        } => {
            let sample = read_sample(&input, null)?;
            let method = match method {
                Calibration::MonteCarlo => Method::MonteCarlo {
                    replications: reps,
                    seed: common.seed,
                },
                Calibration::Asymptotic => Method::AsymptoticNormal,
            };
            let reports = run_tests(&sample, &stats, alpha, method)?;
            let text = match common.format {
                Format::Json => json(&reports)?,
                Format::Csv => tests_csv(&reports),
            };
            emit(common.out.as_deref(), &text)?;
            Ok(if reports.iter().any(|r| r.decision == Decision::Reject) {
                EXIT_REJECT
            } else {
                EXIT_OK
            })
        }
        Command::CriticalValues {
            stats,
            sizes,
            alpha,
            reps,
            cv_cache,
            common,
        } => {
            let mut cache = match &cv_cache {
                Some(p) => CriticalValueCache::load(p)?,
                None => CriticalValueCache::default(),
            };
            let rng = RngStream::new(common.seed, 0);
            let mut records = Vec::new();
            for &n in &sizes {
                let values = cache.critical_values(&stats, n, alpha, reps, rng)?;
                for (spec, c) in stats.iter().zip(values) {
                    records.push(CriticalValueRecord {
                        statistic: spec.to_string(),
                        n,
                        alpha,
                        replications: reps,
                        seed: common.seed,
                        critical_value: c,
                    });
                }
            }
            if let Some(p) = &cv_cache {
                cache.save(p)?;
            }
            let text = match common.format {
                Format::Json => json(&records)?,
                Format::Csv => {
                    let mut s =
                        String::from("statistic,n,alpha,replications,seed,critical_value\n");
                    for r in &records {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            r.statistic, r.n, r.alpha, r.replications, r.seed, r.critical_value
                        );
                    }
                    s
                }
            };
            emit(common.out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Power {
            config,
            bundled_tables,
            families,
            sizes,
            stats,
            alpha,
            reps,
            null_reps,
            workers,
            cv_cache,
            seed,
            format,
            out,
        } => {
            let base = if bundled_tables {
                Some(BUNDLED_TABLES_CONFIG.to_string())
            } else if let Some(p) = &config {
                Some(std::fs::read_to_string(p).map_err(|e| CliError {
                    code: EXIT_CONFIG,
                    message: format!("{}: {e}", p.display()),
                })?)
            } else {
                None
            };
            let mut cfg = match base {
                Some(text) => {
                    serde_json::from_str::<PowerStudyConfig>(&text).map_err(|e| CliError {
                        code: EXIT_CONFIG,
                        message: format!("invalid configuration: {e}"),
                    })?
                }
                None => PowerStudyConfig {
                    alternatives: vec![],
                    sample_sizes: vec![],
                    statistics: vec![],
                    alpha: 0.05,
                    replications: 10_000,
                    null_replications: DEFAULT_NULL_REPLICATIONS,
                    master_seed: 1,
                },
            };
            if !families.is_empty() {
                cfg.alternatives = families;
            }
            if !sizes.is_empty() {
                cfg.sample_sizes = sizes;
            }
            if !stats.is_empty() {
                cfg.statistics = stats;
            }
            cfg.alpha = alpha.unwrap_or(cfg.alpha);
            cfg.replications = reps.unwrap_or(cfg.replications);
            cfg.null_replications = null_reps.unwrap_or(cfg.null_replications);
            cfg.master_seed = seed.unwrap_or(cfg.master_seed);
            cfg.validate()?;
            let mut cache = match &cv_cache {
                Some(p) => Some(CriticalValueCache::load(p)?),
                None => None,
            };
            let table = power_study(
                &cfg,
                RunOptions {
                    workers,
                    cache: cache.as_mut(),
                },
            )?;
            if let (Some(p), Some(c)) = (&cv_cache, &cache) {
                c.save(p)?;
            }
            eprintln!(
                "power study finished in {:.1}s",
                table.metadata.wall_time_secs
            );
            match (format, &out) {
                (Format::Csv, Some(p)) => table.write_csv(p)?,
                (Format::Csv, None) => emit(None, &table.to_csv())?,
                (Format::Json, _) => emit(out.as_deref(), &table.to_json()?)?,
            }
            Ok(EXIT_OK)
        }
        Command::Efficacy {
            stats,
            perturbations,
            common,
        } => {
            let stats = if stats.is_empty() {
                HFunction::BUILT_INS
                    .iter()
                    .map(|h| StatSpec::simple(h.clone(), Order::Usual))
                    .collect()
            } else {
                stats
            };
            let mut records = Vec::new();
            for name in &perturbations {
                let alt = named_perturbation(name)?;
                alt.validate(1e-8)?;
                let mut best: Option<(String, f64)> = None;
                for spec in &stats {
                    let order = match (spec.combination, spec.step) {
                        (Combination::Single(o), 1) => o,
                        _ => {
                            return Err(CliError {
                                code: EXIT_CONFIG,
                                message: format!(
                                "efficacy is defined for simple single statistics, not `{spec}`"
                            ),
                            })
                        }
                    };
                    let rep = match order {
                        Order::Usual => efficacy_report(&spec.h, |x| alt.l(x), DEFAULT_TOL)?,
                        Order::CentreOutward => {
                            efficacy_report(&spec.h, alt.co_derivative(), DEFAULT_TOL)?
                        }
                    };
                    if best.as_ref().is_none_or(|(_, v)| rep.value > *v) {
                        best = Some((spec.to_string(), rep.value));
                    }
                    let mut extra = serde_json::Map::new();
                    extra.insert("statistic".into(), spec.to_string().into());
                    extra.insert("integral_l2".into(), rep.integral_l2.into());
                    extra.insert("null_variance".into(), rep.moments.null_variance().into());
                    records.push(Record {
                        h: spec.h.name().to_string(),
                        family_or_l: name.clone(),
                        value: rep.value,
                        quadrature_error: rep.quadrature_error,
                        extra,
                    });
                }
                if let Some((stat, _)) = best {
                    for r in records.iter_mut().filter(|r| r.family_or_l == *name) {
                        let is_best = r.extra["statistic"] == stat.as_str();
                        r.extra.insert("argmax".into(), is_best.into());
                    }
                }
            }
            let text = match common.format {
                Format::Json => json(&records)?,
                Format::Csv => records_csv(
                    &records,
                    &["statistic", "integral_l2", "null_variance", "argmax"],
                ),
            };
            emit(common.out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Hellinger { families, common } => {
            let families = if families.is_empty() {
                default_grid()
            } else {
                families
            };
            let mut records = Vec::new();
            for fam in families {
                let r = hellinger_fold(fam, DEFAULT_TOL)?;
                let mut extra = serde_json::Map::new();
                extra.insert("value_co".into(), r.hd_co.into());
                extra.insert("gap".into(), r.gap().into());
                extra.insert("symmetric".into(), fam.is_symmetric().into());
                extra.insert("inequality_holds".into(), r.inequality_holds(1e-8).into());
                records.push(Record {
                    h: "hellinger".into(),
                    family_or_l: fam.to_string(),
                    value: r.hd_direct,
                    quadrature_error: r.quadrature_error_bound,
                    extra,
                });
            }
            let text = match common.format {
                Format::Json => json(&records)?,
                Format::Csv => records_csv(
                    &records,
                    &["value_co", "gap", "symmetric", "inequality_holds"],
                ),
            };
            emit(common.out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::LemmaChecks {
            n,
            reps,
            threshold,
            families,
            common,
        } => {
            let report = structural_checks(n, reps, threshold, &families, common.seed)?;
            let text = match common.format {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let mut s = String::from("check,subject,statistic,value,pass\n");
                    for r in &report.null_equality {
                        let _ = writeln!(
                            s,
                            "null_equality,{},ks_p_value,{},{}",
                            r.h, r.p_value, r.pass
                        );
                    }
                    for r in &report.fold_inequality {
                        let _ =
                            writeln!(s, "fold_inequality,{},gap,{},{}", r.family, r.gap, r.pass);
                    }
                    s
                }
            };
            emit(common.out.as_deref(), &text)?;
            Ok(if report.pass { EXIT_OK } else { EXIT_REJECT })
        }
    }
}

#[derive(Debug, Serialize)]
pub struct NullEqualityRecord {
    pub h: String,
    pub n_obs: usize,
    pub replications: usize,
    pub ks_statistic: f64,
    pub p_value: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct FoldRecord {
    pub family: AlternativeFamily,
    pub hd_direct: f64,
    pub hd_co: f64,
    pub gap: f64,
    pub quadrature_error: f64,
    pub symmetric: bool,
    /// "equal" for symmetric families, "strict" or "inequality" otherwise.
    pub relation: &'static str,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct StructuralReport {
    pub null_equality: Vec<NullEqualityRecord>,
    pub fold_inequality: Vec<FoldRecord>,
    pub pass: bool,
}

/// Runs both structural checks with their default tolerances.
pub fn structural_checks(
    n_obs: usize,
    replications: usize,
    threshold: f64,
    families: &[AlternativeFamily],
    seed: u64,
) -> Result<StructuralReport, Error> {
    let mut null_equality = Vec::new();
    for (i, h) in HFunction::BUILT_INS.iter().enumerate() {
        let ks = lemma1_check(h, n_obs, replications, RngStream::new(seed, i as u64 + 1))?;
        null_equality.push(NullEqualityRecord {
            h: h.name().to_string(),
            n_obs,
            replications,
            ks_statistic: ks.statistic,
            p_value: ks.p_value,
            pass: ks.p_value > threshold,
        });
    }
    let grid = if families.is_empty() {
        hellinger_grid(&[0.5, 1.5, 2.5], DEFAULT_TOL)?
    } else {
        families
            .iter()
            .map(|f| hellinger_fold(*f, DEFAULT_TOL))
            .collect::<Result<_, _>>()?
    };
    let fold_inequality: Vec<FoldRecord> = grid
        .into_iter()
        .map(|r| {
            let symmetric = r.family.is_symmetric();
            let (relation, pass) = if symmetric {
                ("equal", r.gap().abs() <= 1e-6)
            } else if r.gap() > 1e-4 {
                ("strict", true)
            } else {
                ("inequality", r.hd_co <= r.hd_direct + 1e-8)
            };
            FoldRecord {
                family: r.family,
                hd_direct: r.hd_direct,
                hd_co: r.hd_co,
                gap: r.gap(),
                quadrature_error: r.quadrature_error_bound,
                symmetric,
                relation,
                pass,
            }
        })
        .collect();
    let pass = null_equality.iter().all(|r| r.pass) && fold_inequality.iter().all(|r| r.pass);
    Ok(StructuralReport {
        null_equality,
        fold_inequality,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_parsing() {
        assert_eq!(
            parse_values("# header\n0.5\n\n 0.25 \n").unwrap(),
            vec![0.5, 0.25]
        );
        assert_eq!(parse_values("# only\n\n"), Err(Error::EmptySample));
        assert!(matches!(parse_values("0.1\nabc\n"), Err(Error::Input(_))));
        assert!(matches!(parse_values("NaN\n"), Err(Error::Input(_))));
    }

    #[test]
    fn bundled_config_is_valid() {
        let cfg = PowerStudyConfig::from_json(BUNDLED_TABLES_CONFIG).unwrap();
        assert_eq!(cfg.alternatives.len(), 6);
        assert_eq!(cfg.sample_sizes, vec![10, 20, 30, 50, 80, 100, 200, 300]);
        let labels: Vec<String> = cfg.statistics.iter().map(StatSpec::label).collect();
        assert_eq!(labels, ["G", "G*", "L", "L*", "E", "E*", "R", "R*"]);
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn bad_spec_is_a_config_error() {
        assert_eq!(
            main_with_args(["cospacings", "critical-values", "--n", "5", "--stat", "wat"]),
            EXIT_CONFIG
        );
    }
}
