//! Seeded Monte Carlo engine: null distributions, critical values, tests and
//! power studies.
//!
//! Replication `r` of any simulation draws from its own stream derived from
//! `(master seed, purpose, coordinates, r)`, so results never depend on how
//! replications are scheduled across threads.

use crate::asymptotics::{null_limit, LocalAlternative};
use crate::diagnostics::{two_sample_ks, KsResult};
use crate::error::{Error, Result};
use crate::rng::{label_key, RngStream, RNG_ALGORITHM};
use crate::sampling::AlternativeFamily;
use crate::spacings::{Order, Sample};
use crate::special::{normal_quantile, normal_sf};
use crate::statistics::{Combination, HFunction, StatSpec, StatisticValue, Workspace};
use crate::table::{CriticalValueEntry, PowerMetadata, PowerRow, PowerTable};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

pub const DEFAULT_NULL_REPLICATIONS: usize = 100_000;

const TAG_NULL: u64 = 0x4e55_4c4c;
const TAG_CELL: u64 = 0x4345_4c4c;
const TAG_SIM: u64 = 0x5349_4d55;

/// Empirical quantile at probability `p`: position `p·(R+1)` (1-based) in the
/// sorted sample, linearly interpolated and clamped to the data range.
pub fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let r = sorted.len();
    let h = p * (r as f64 + 1.0);
    if h <= 1.0 {
        return sorted[0];
    }
    if h >= r as f64 {
        return sorted[r - 1];
    }
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    let (a, b) = (sorted[lo - 1], sorted[lo]);
    if frac == 0.0 || a == b {
        a
    } else {
        a + frac * (b - a)
    }
}

/// Simulated null distribution of one statistic at one sample size.
#[derive(Debug, Clone)]
pub struct NullDistribution {
    pub key: String,
    pub n_obs: usize,
    sorted: Vec<f64>,
}

impl NullDistribution {
    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn replications(&self) -> usize {
        self.sorted.len()
    }

    /// Upper-tail critical value at level `alpha`.
    pub fn critical_value(&self, alpha: f64) -> f64 {
        empirical_quantile(&self.sorted, 1.0 - alpha)
    }

    /// `(1 + #{null ≥ observed}) / (R + 1)`.
    pub fn p_value(&self, observed: f64) -> f64 {
        let below = self.sorted.partition_point(|&v| v < observed);
        let at_or_above = self.sorted.len() - below;
        (1 + at_or_above) as f64 / (self.sorted.len() + 1) as f64
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )))
    }
}

/// Representative of a null-key class: single specs are simulated on usual spacings.
fn null_representative(spec: &StatSpec) -> StatSpec {
    let mut rep = spec.clone();
    if let Combination::Single(_) = rep.combination {
        rep.combination = Combination::Single(Order::Usual);
    }
    rep
}

/// Null distributions for every distinct null key among `specs`, from one
/// shared set of uniform samples.
pub fn null_distributions(
    specs: &[StatSpec],
    n_obs: usize,
    replications: usize,
    rng: RngStream,
) -> Result<BTreeMap<String, NullDistribution>> {
    if n_obs == 0 || replications == 0 {
        return Err(Error::InvalidParameter(
            "null simulation needs n_obs ≥ 1 and replications ≥ 1".into(),
        ));
    }
    let mut reps: Vec<(String, StatSpec)> = Vec::new();
    for spec in specs {
        spec.check_size(n_obs)?;
        let key = spec.null_key();
        if !reps.iter().any(|(k, _)| *k == key) {
            reps.push((key, null_representative(spec)));
        }
    }
    let width = reps.len();
    let mut flat = vec![0.0; replications * width];
    flat.par_chunks_mut(width).enumerate().for_each_init(
        || (Workspace::default(), vec![0.0; n_obs]),
        |(ws, buf), (r, out)| {
            let mut g = RngStream::derive(
                rng.master_seed,
                &[rng.stream_id, TAG_NULL, n_obs as u64, r as u64],
            )
            .generator();
            AlternativeFamily::Uniform.fill(&mut g, buf);
            ws.reset();
            for (slot, (_, spec)) in out.iter_mut().zip(&reps) {
                *slot = ws.value(buf, spec);
            }
        },
    );
    let mut out = BTreeMap::new();
    for (col, (key, _)) in reps.into_iter().enumerate() {
        let mut sorted: Vec<f64> = flat.iter().skip(col).step_by(width).copied().collect();
        sorted.sort_unstable_by(f64::total_cmp);
        out.insert(key.clone(), NullDistribution { key, n_obs, sorted });
    }
    Ok(out)
}

pub fn null_distribution(
    spec: &StatSpec,
    n_obs: usize,
    replications: usize,
    rng: RngStream,
) -> Result<NullDistribution> {
    let mut all = null_distributions(std::slice::from_ref(spec), n_obs, replications, rng)?;
    Ok(all
        .remove(&spec.null_key())
        .expect("requested key is simulated"))
}

/// Monte Carlo (1 − alpha)-quantile of the null distribution.
pub fn critical_value(
    spec: &StatSpec,
    n_obs: usize,
    alpha: f64,
    replications: usize,
    rng: RngStream,
) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(null_distribution(spec, n_obs, replications, rng)?.critical_value(alpha))
}

/// Persistent critical values keyed by everything that determines them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueCache {
    pub entries: BTreeMap<String, f64>,
}

impl CriticalValueCache {
    pub fn key(
        spec: &StatSpec,
        n_obs: usize,
        alpha: f64,
        replications: usize,
        rng: RngStream,
    ) -> String {
        format!(
            "{}|n={n_obs}|alpha={alpha}|reps={replications}|rng={RNG_ALGORITHM}|seed={}|stream={}",
            spec.null_key(),
            rng.master_seed,
            rng.stream_id
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Ok(Self::default());
        }
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    /// Critical values for all `specs` at `n_obs`, simulating only the missing ones.
    pub fn critical_values(
        &mut self,
        specs: &[StatSpec],
        n_obs: usize,
        alpha: f64,
        replications: usize,
        rng: RngStream,
    ) -> Result<Vec<f64>> {
        check_alpha(alpha)?;
        let missing: Vec<StatSpec> = specs
            .iter()
            .filter(|s| {
                !self
                    .entries
                    .contains_key(&Self::key(s, n_obs, alpha, replications, rng))
            })
            .cloned()
            .collect();
        if !missing.is_empty() {
            let nulls = null_distributions(&missing, n_obs, replications, rng)?;
            for spec in &missing {
                let c = nulls[&spec.null_key()].critical_value(alpha);
                self.entries
                    .insert(Self::key(spec, n_obs, alpha, replications, rng), c);
            }
        }
        Ok(specs
            .iter()
            .map(|s| self.entries[&Self::key(s, n_obs, alpha, replications, rng)])
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Reject,
    FailToReject,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Method {
    MonteCarlo { replications: usize, seed: u64 },
    AsymptoticNormal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub spec: String,
    pub statistic: StatisticValue,
    pub p_value: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub decision: Decision,
    pub method: Method,
    pub rng_algorithm: &'static str,
    pub degenerate: bool,
}

fn finish_report(
    spec: &StatSpec,
    statistic: StatisticValue,
    mut p_value: f64,
    critical_value: f64,
    alpha: f64,
    method: Method,
) -> TestReport {
    let degenerate = statistic.degenerate;
    if degenerate {
        p_value = 0.0;
    }
    let decision = if degenerate || statistic.value > critical_value {
        Decision::Reject
    } else {
        Decision::FailToReject
    };
    TestReport {
        spec: spec.to_string(),
        statistic,
        p_value,
        critical_value,
        alpha,
        decision,
        method,
        rng_algorithm: RNG_ALGORITHM,
        degenerate,
    }
}

/// Tests uniformity of `sample` with an upper-tail test on `spec`.
pub fn run_test(
    sample: &Sample,
    spec: &StatSpec,
    alpha: f64,
    method: Method,
) -> Result<TestReport> {
    Ok(run_tests(sample, std::slice::from_ref(spec), alpha, method)?.remove(0))
}

/// Like [`run_test`] for several statistics; Monte Carlo calibration shares
/// one set of null samples across all of them.
pub fn run_tests(
    sample: &Sample,
    specs: &[StatSpec],
    alpha: f64,
    method: Method,
) -> Result<Vec<TestReport>> {
    check_alpha(alpha)?;
    for spec in specs {
        spec.check_size(sample.len())?;
    }
    match method {
        Method::MonteCarlo { replications, seed } => {
            let nulls =
                null_distributions(specs, sample.len(), replications, RngStream::new(seed, 0))?;
            specs
                .iter()
                .map(|spec| {
                    let statistic = spec.evaluate(sample)?;
                    let null = &nulls[&spec.null_key()];
                    let p = null.p_value(statistic.value);
                    let crit = null.critical_value(alpha);
                    Ok(finish_report(spec, statistic, p, crit, alpha, method))
                })
                .collect()
        }
        Method::AsymptoticNormal => specs
            .iter()
            .map(|spec| asymptotic_test(sample, spec, alpha))
            .collect(),
    }
}

fn asymptotic_test(sample: &Sample, spec: &StatSpec, alpha: f64) -> Result<TestReport> {
    if spec.step != 1 || spec.combination == Combination::Max {
        return Err(Error::Unsupported(format!(
            "no asymptotic null for `{spec}`; use Monte Carlo calibration"
        )));
    }
    let statistic = spec.evaluate(sample)?;
    let (mean, var) = null_limit(&spec.h)?;
    if var <= 0.0 {
        return Err(Error::DegenerateVariance(spec.h.name().to_string()));
    }
    let sd = (var / sample.n_effective() as f64).sqrt();
    let p = normal_sf((statistic.value - mean) / sd);
    let crit = mean + normal_quantile(1.0 - alpha) * sd;
    Ok(finish_report(
        spec,
        statistic,
        p,
        crit,
        alpha,
        Method::AsymptoticNormal,
    ))
}

/// Power-study design. Sample sizes count observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerStudyConfig {
    pub alternatives: Vec<AlternativeFamily>,
    pub sample_sizes: Vec<usize>,
    pub statistics: Vec<StatSpec>,
    pub alpha: f64,
    pub replications: usize,
    #[serde(default = "default_null_replications")]
    pub null_replications: usize,
    pub master_seed: u64,
}

fn default_null_replications() -> usize {
    DEFAULT_NULL_REPLICATIONS
}

impl PowerStudyConfig {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.alpha >= 1.0 {
            return Err(Error::InvalidParameter("alpha must be below 1".into()));
        }
        if self.replications == 0 || self.null_replications == 0 {
            return Err(Error::InvalidParameter(
                "replication counts must be positive".into(),
            ));
        }
        if self.alternatives.is_empty()
            || self.statistics.is_empty()
            || self.sample_sizes.is_empty()
        {
            return Err(Error::InvalidParameter(
                "need at least one alternative, statistic and sample size".into(),
            ));
        }
        for fam in &self.alternatives {
            fam.validate()?;
        }
        for &n in &self.sample_sizes {
            if n < 2 {
                return Err(Error::InvalidParameter(format!(
                    "sample size {n} is below 2"
                )));
            }
            for s in &self.statistics {
                s.check_size(n)?;
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runtime knobs that do not affect results.
#[derive(Debug, Default)]
pub struct RunOptions<'a> {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub cache: Option<&'a mut CriticalValueCache>,
}

/// Stream of replication `r` in the (alternative, n) cell.
pub fn cell_stream(master_seed: u64, family: &AlternativeFamily, n: usize, r: usize) -> RngStream {
    RngStream::derive(
        master_seed,
        &[TAG_CELL, label_key(&family.to_string()), n as u64, r as u64],
    )
}

/// Rejection counts for every spec over `replications` samples of `family`.
fn rejection_counts(
    family: &AlternativeFamily,
    n: usize,
    specs: &[StatSpec],
    critical: &[f64],
    replications: usize,
    master_seed: u64,
) -> Vec<u64> {
    let k = specs.len();
    (0..replications)
        .into_par_iter()
        .fold(
            || (vec![0u64; k], Workspace::default(), vec![0.0; n]),
            |(mut counts, mut ws, mut buf), r| {
                let mut g = cell_stream(master_seed, family, n, r).generator();
                family.fill(&mut g, &mut buf);
                ws.reset();
                for (j, spec) in specs.iter().enumerate() {
                    let v = ws.value(&buf, spec);
                    // +∞ (degenerate) always exceeds a finite critical value
                    if v > critical[j] || v.is_nan() {
                        counts[j] += 1;
                    }
                }
                (counts, ws, buf)
            },
        )
        .map(|(counts, _, _)| counts)
        .reduce(
            || vec![0u64; k],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

pub fn power_study(config: &PowerStudyConfig, options: RunOptions<'_>) -> Result<PowerTable> {
    config.validate()?;
    let RunOptions { workers, cache } = options;
    let run = move || -> Result<PowerTable> {
        let started = Instant::now();
        let mut local = CriticalValueCache::default();
        let cache = match cache {
            Some(c) => c,
            None => &mut local,
        };
        let null_rng = RngStream::new(config.master_seed, 0);
        let mut rows = Vec::new();
        let mut critical_values = Vec::new();
        for &n in &config.sample_sizes {
            let crit = cache.critical_values(
                &config.statistics,
                n,
                config.alpha,
                config.null_replications,
                null_rng,
            )?;
            for (spec, &c) in config.statistics.iter().zip(&crit) {
                critical_values.push(CriticalValueEntry {
                    statistic: spec.to_string(),
                    n,
                    value: c,
                });
            }
            for fam in &config.alternatives {
                let counts = rejection_counts(
                    fam,
                    n,
                    &config.statistics,
                    &crit,
                    config.replications,
                    config.master_seed,
                );
                let rates = counts
                    .iter()
                    .map(|&c| c as f64 / config.replications as f64)
                    .collect();
                rows.push((*fam, n, rates));
            }
        }
        // present rows grouped by alternative, like the published tables
        let mut ordered = Vec::with_capacity(rows.len());
        for fam in &config.alternatives {
            for &n in &config.sample_sizes {
                let pos = rows
                    .iter()
                    .position(|(f, m, _)| f == fam && *m == n)
                    .expect("every cell was simulated");
                let (alternative, n, rates) = rows.swap_remove(pos);
                ordered.push(PowerRow {
                    alternative,
                    n,
                    rates,
                });
            }
        }
        Ok(PowerTable {
            columns: config.statistics.iter().map(StatSpec::label).collect(),
            rows: ordered,
            metadata: PowerMetadata {
                config: config.clone(),
                rng_algorithm: RNG_ALGORITHM.to_string(),
                critical_values,
                wall_time_secs: started.elapsed().as_secs_f64(),
            },
        })
    };
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// `replications` values of `spec` on samples of `family`, drawn from
/// streams under `rng`. Output order follows the replication index.
pub fn simulate_statistic(
    spec: &StatSpec,
    family: &AlternativeFamily,
    n_obs: usize,
    replications: usize,
    rng: RngStream,
) -> Result<Vec<f64>> {
    spec.check_size(n_obs)?;
    family.validate()?;
    let mut out = vec![0.0; replications];
    out.par_iter_mut().enumerate().for_each_init(
        || (Workspace::default(), vec![0.0; n_obs]),
        |(ws, buf), (r, slot)| {
            let mut g = RngStream::derive(
                rng.master_seed,
                &[rng.stream_id, TAG_SIM, n_obs as u64, r as u64],
            )
            .generator();
            family.fill(&mut g, buf);
            ws.reset();
            *slot = ws.value(buf, spec);
        },
    );
    Ok(out)
}

/// Compares the null laws of W(h) and W*(h) with a two-sample KS test on
/// independent uniform samples.
pub fn lemma1_check(
    h: &HFunction,
    n_obs: usize,
    replications: usize,
    rng: RngStream,
) -> Result<KsResult> {
    let usual = simulate_statistic(
        &StatSpec::simple(h.clone(), Order::Usual),
        &AlternativeFamily::Uniform,
        n_obs,
        replications,
        RngStream::new(rng.master_seed, rng.stream_id.wrapping_mul(2)),
    )?;
    let co = simulate_statistic(
        &StatSpec::simple(h.clone(), Order::CentreOutward),
        &AlternativeFamily::Uniform,
        n_obs,
        replications,
        RngStream::new(rng.master_seed, rng.stream_id.wrapping_mul(2) + 1),
    )?;
    Ok(two_sample_ks(&usual, &co))
}

/// Draws of `√n (W − E h(Z)) / σₕ` under the null with `n_effective` simple
/// spacings.
pub fn standardized_null_sample(
    h: &HFunction,
    order: Order,
    n_effective: usize,
    replications: usize,
    rng: RngStream,
) -> Result<Vec<f64>> {
    let (mean, var) = null_limit(h)?;
    if var <= 0.0 {
        return Err(Error::DegenerateVariance(h.name().to_string()));
    }
    let spec = StatSpec::simple(h.clone(), order);
    let n = n_effective as f64;
    let sd = var.sqrt();
    Ok(simulate_statistic(
        &spec,
        &AlternativeFamily::Uniform,
        n_effective - 1,
        replications,
        rng,
    )?
    .into_iter()
    .map(|w| n.sqrt() * (w - mean) / sd)
    .collect())
}

/// Solves `x + L(x)/s = u` for x in [0, 1] by safeguarded Newton.
fn local_quantile(alt: &LocalAlternative, scale: f64, u: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x = u;
    for _ in 0..100 {
        let f = x + alt.big_l(x).unwrap_or(0.0) / scale - u;
        if f == 0.0 {
            return x;
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = 1.0 + alt.l(x) / scale;
        let mut next = x - f / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() < 1e-15 {
            return next;
        }
        x = next;
    }
    x
}

/// Draws of `√n (W − E h(Z))` under `F_n(x) = x + L(x)/n^{1/4}` with
/// `n = n_effective`.
pub fn local_alternative_sample(
    h: &HFunction,
    order: Order,
    alt: &LocalAlternative,
    n_effective: usize,
    replications: usize,
    rng: RngStream,
) -> Result<Vec<f64>> {
    if alt.big_l(0.5).is_none() {
        return Err(Error::InvalidParameter(
            "sampling from a local alternative needs the perturbation L itself".into(),
        ));
    }
    let (mean, _) = null_limit(h)?;
    let n = n_effective as f64;
    let scale = n.powf(0.25);
    // F_n must be a distribution function
    for i in 0..=1000 {
        let x = i as f64 / 1000.0;
        if 1.0 + alt.l(x) / scale < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "F_n is decreasing near {x} at n = {n_effective}"
            )));
        }
    }
    let spec = StatSpec::simple(h.clone(), order);
    let n_obs = n_effective - 1;
    let mut out = vec![0.0; replications];
    out.par_iter_mut().enumerate().for_each_init(
        || (Workspace::default(), vec![0.0; n_obs]),
        |(ws, buf), (r, slot)| {
            let mut g = RngStream::derive(
                rng.master_seed,
                &[rng.stream_id, TAG_SIM ^ 0x4c, n_obs as u64, r as u64],
            )
            .generator();
            for v in buf.iter_mut() {
                *v = local_quantile(alt, scale, g.next_f64());
            }
            ws.reset();
            *slot = n.sqrt() * (ws.value(buf, &spec) - mean);
        },
    );
    Ok(out)
}
