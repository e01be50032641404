//! Per-subcommand drivers. Each returns rows or a summary; `main` does I/O.

use bohrsum::additive::{mult_energy, rudnev_ratio, sumset};
use bohrsum::bohr::BohrNormTable;
use bohrsum::recurrence::{
    brute_force_best, kth_power_recurrence, primitive_root_recurrence, Predicate, RecurrenceResult,
};
use bohrsum::zp::FieldCtx;
use bohrsum::Rational;
use serde::Serialize;

use crate::config::{EpsilonPolicy, ExperimentConfig, RatioText};
use crate::report::CsvRow;
use crate::rng::Rng;
use crate::sample::{self, choose_epsilon, gamma_text, random_gamma, ratio_f64, ratio_text};
use crate::suites::{self, SuiteOutcome};
use crate::HarnessError;

const FIND_TAG: u64 = 0x4649_4E44;
const RECUR_TAG: u64 = 0x5245_4355;
const ENERGY_TAG: u64 = 0x454E_4552;
const AVG_TAG: u64 = 0x4156_4753;

/// Exhaustive oracles are run up to this modulus.
pub const ORACLE_LIMIT: u32 = 1_000_000;

/// `(p, d, sample)` triples with `d < p`, in output order.
fn instances(cfg: &ExperimentConfig) -> Vec<(u32, usize, usize)> {
    let mut out = Vec::new();
    for p in cfg.primes() {
        for &d in &cfg.d_values {
            if (d as u32) < p {
                out.extend((0..cfg.gamma_samples).map(|s| (p, d, s)));
            }
        }
    }
    out
}

fn sample_table(
    cfg: &ExperimentConfig,
    tag: u64,
    p: u32,
    d: usize,
    s: usize,
) -> bohrsum::Result<(FieldCtx, BohrNormTable, Rng)> {
    let mut rng = Rng::stream(cfg.seed, &[tag, p as u64, d as u64, s as u64]);
    let ctx = FieldCtx::new(p as u64)?;
    let gamma = random_gamma(&mut rng, p, d);
    let table = BohrNormTable::build(&ctx, &gamma)?;
    Ok((ctx, table, rng))
}

fn collect<T: Send>(
    cfg: &ExperimentConfig,
    n: usize,
    f: impl Fn(usize) -> Result<T, HarnessError> + Sync + Send,
) -> Result<Vec<T>, HarnessError> {
    sample::with_threads(cfg.threads, || sample::par_tasks(n, f))
        .into_iter()
        .collect()
}

// ------------------------------------------------------------- find-regular

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularRow {
    pub experiment_id: String,
    pub p: u32,
    pub d: usize,
    pub gamma: String,
    pub delta: String,
    pub epsilon: String,
    pub bohr_size: usize,
    pub regular: bool,
    pub worst_kappa: String,
    pub worst_ratio: String,
    pub breakpoints_checked: usize,
}

impl CsvRow for RegularRow {
    const HEADER: &'static [&'static str] = &[
        "experiment_id",
        "p",
        "d",
        "gamma",
        "delta",
        "epsilon",
        "bohr_size",
        "regular",
        "worst_kappa",
        "worst_ratio",
        "breakpoints_checked",
    ];
}

/// A regular value near `δ` for each sampled Γ; a `fixed` policy is read
/// as `δ`. Fails when no regular value is found.
pub fn find_regular_rows(cfg: &ExperimentConfig) -> Result<Vec<RegularRow>, HarnessError> {
    let delta = match cfg.epsilon_policy {
        EpsilonPolicy::RegularNear(RatioText(d)) | EpsilonPolicy::Fixed(RatioText(d)) => d,
        EpsilonPolicy::TargetSizeExponent(_) => {
            return Err(HarnessError::Config(
                "find-regular needs regular_near or fixed δ".into(),
            ))
        }
    };
    if delta > Rational::new(1, 4) {
        return Err(HarnessError::Config(format!("δ = {delta} exceeds 1/4")));
    }
    let tasks = instances(cfg);
    collect(cfg, tasks.len(), |i| {
        let (p, d, s) = tasks[i];
        let (_, table, _) = sample_table(cfg, FIND_TAG, p, d, s)?;
        let eps = table
            .find_regular_value(&delta)
            .map_err(|e| HarnessError::Invariant(format!("p={p} Γ={:?}: {e}", table.gamma())))?;
        let v = table.is_regular(&eps)?;
        Ok(RegularRow {
            experiment_id: cfg.experiment_id.clone(),
            p,
            d,
            gamma: gamma_text(table.gamma()),
            delta: ratio_text(&delta),
            epsilon: ratio_text(&eps),
            bohr_size: table.size(&eps),
            regular: v.regular,
            worst_kappa: ratio_text(&v.worst_kappa),
            worst_ratio: ratio_text(&v.worst_ratio),
            breakpoints_checked: v.checked,
        })
    })
}

// --------------------------------------------------------------- recurrence

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceRow {
    pub experiment_id: String,
    pub p: u32,
    pub d: usize,
    pub gamma: String,
    /// `k` for k-th powers, 0 for primitive roots.
    pub k: u64,
    pub x: u32,
    pub root: String,
    pub quality: String,
    pub epsilon_initial: String,
    pub epsilon_used: String,
    pub escalations: u32,
    pub bound_shape: f64,
    pub quality_over_shape: f64,
    pub oracle_quality: String,
    pub matches_oracle: bool,
}

impl CsvRow for RecurrenceRow {
    const HEADER: &'static [&'static str] = &[
        "experiment_id",
        "p",
        "d",
        "gamma",
        "k",
        "x",
        "root",
        "quality",
        "epsilon_initial",
        "epsilon_used",
        "escalations",
        "bound_shape",
        "quality_over_shape",
        "oracle_quality",
        "matches_oracle",
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantSummary {
    /// 0 for primitive roots.
    pub k: u64,
    pub instances: usize,
    /// `max quality/shape`: the least constant whose radius contains the
    /// optimal witness on every instance.
    pub smallest_working_constant: f64,
    /// Instances solved without escalating from the configured constant.
    pub initial_radius_sufficed: usize,
    pub oracle_mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceSummary {
    pub experiment_id: String,
    pub constant_c: f64,
    pub per_k: Vec<ConstantSummary>,
}

fn recurrence_row(
    cfg: &ExperimentConfig,
    p: u32,
    d: usize,
    k: u64,
    table: &BohrNormTable,
    r: &RecurrenceResult,
    oracle: Option<&RecurrenceResult>,
) -> RecurrenceRow {
    let ratio = ratio_f64(&r.quality) / r.bound_value;
    RecurrenceRow {
        experiment_id: cfg.experiment_id.clone(),
        p,
        d,
        gamma: gamma_text(table.gamma()),
        k,
        x: r.x,
        root: r.root.map(|y| y.to_string()).unwrap_or_default(),
        quality: ratio_text(&r.quality),
        epsilon_initial: ratio_text(&r.epsilon_initial),
        epsilon_used: ratio_text(&r.epsilon_used),
        escalations: r.escalations,
        bound_shape: r.bound_value,
        quality_over_shape: ratio,
        oracle_quality: oracle.map(|o| ratio_text(&o.quality)).unwrap_or_default(),
        matches_oracle: oracle.is_none_or(|o| o.quality == r.quality),
    }
}

/// k-th-power recurrence for every sampled Γ and every `k` in `k_values`,
/// starting from `constant_C` times the bound shape.
pub fn kpower_rows(cfg: &ExperimentConfig) -> Result<Vec<RecurrenceRow>, HarnessError> {
    let tasks = instances(cfg);
    let chunks = collect(cfg, tasks.len(), |i| {
        let (p, d, s) = tasks[i];
        let (ctx, table, _) = sample_table(cfg, RECUR_TAG, p, d, s)?;
        cfg.k_values
            .iter()
            .map(|&k| {
                let k = k as u64;
                let r = kth_power_recurrence(&ctx, &table, k, cfg.constant_c)?;
                let oracle = (p <= ORACLE_LIMIT)
                    .then(|| brute_force_best(&ctx, table.gamma(), Predicate::KthPower(k)))
                    .transpose()?;
                Ok(recurrence_row(cfg, p, d, k, &table, &r, oracle.as_ref()))
            })
            .collect::<Result<Vec<_>, HarnessError>>()
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Primitive-root recurrence; `constant_C` is the character-sum constant
/// in the counting radius.
pub fn primroot_rows(cfg: &ExperimentConfig) -> Result<Vec<RecurrenceRow>, HarnessError> {
    let tasks = instances(cfg);
    collect(cfg, tasks.len(), |i| {
        let (p, d, s) = tasks[i];
        let (ctx, table, _) = sample_table(cfg, RECUR_TAG, p, d, s)?;
        let r = primitive_root_recurrence(&ctx, &table, cfg.constant_c)?;
        let oracle = (p <= ORACLE_LIMIT)
            .then(|| brute_force_best(&ctx, table.gamma(), Predicate::PrimitiveRoot))
            .transpose()?;
        Ok(recurrence_row(cfg, p, d, 0, &table, &r, oracle.as_ref()))
    })
}

pub fn recurrence_summary(cfg: &ExperimentConfig, rows: &[RecurrenceRow]) -> RecurrenceSummary {
    let mut ks: Vec<u64> = rows.iter().map(|r| r.k).collect();
    ks.sort_unstable();
    ks.dedup();
    let per_k = ks
        .into_iter()
        .map(|k| {
            let sel: Vec<&RecurrenceRow> = rows.iter().filter(|r| r.k == k).collect();
            ConstantSummary {
                k,
                instances: sel.len(),
                smallest_working_constant: sel
                    .iter()
                    .map(|r| r.quality_over_shape)
                    .fold(0.0, f64::max),
                initial_radius_sufficed: sel.iter().filter(|r| r.escalations == 0).count(),
                oracle_mismatches: sel.iter().filter(|r| !r.matches_oracle).count(),
            }
        })
        .collect();
    RecurrenceSummary {
        experiment_id: cfg.experiment_id.clone(),
        constant_c: cfg.constant_c,
        per_k,
    }
}

// ------------------------------------------------------------------- energy

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyRow {
    pub experiment_id: String,
    pub p: u32,
    pub d: usize,
    pub gamma: String,
    pub epsilon: String,
    pub bohr_size: usize,
    pub sumset_size: usize,
    /// Energy of `B∖{0}`.
    pub energy: String,
    pub rudnev_ratio: f64,
}

impl CsvRow for EnergyRow {
    const HEADER: &'static [&'static str] = &[
        "experiment_id",
        "p",
        "d",
        "gamma",
        "epsilon",
        "bohr_size",
        "sumset_size",
        "energy",
        "rudnev_ratio",
    ];
}

/// Energy of small Bohr sets: the largest breakpoint radius with
/// `2 ≤ |B∖{0}| < √p`. Samples with no such radius are skipped.
pub fn energy_rows(cfg: &ExperimentConfig) -> Result<Vec<EnergyRow>, HarnessError> {
    let tasks = instances(cfg);
    let rows = collect(cfg, tasks.len(), |i| {
        let (p, d, s) = tasks[i];
        let (_, table, _) = sample_table(cfg, ENERGY_TAG, p, d, s)?;
        let sorted = table.sorted_norms();
        // at most `cap` nonzero elements, cap² < p; the first norm that
        // would push |B| past cap + 1 is sorted[cap + 1]
        let cap = (1..p as usize)
            .take_while(|&n| n * n < p as usize)
            .last()
            .unwrap_or(0);
        let Some(&too_far) = sorted.get(cap + 1) else {
            return Ok(None);
        };
        let size = table.size_below(too_far as u64);
        if size < 3 {
            return Ok(None);
        }
        let m = sorted[size - 1];
        let eps = Rational::new(m as i128, p as i128);
        let b = table.bohr_set(&eps).without_zero();
        let energy = mult_energy(&b, &b);
        let ratio = rudnev_ratio(&b)?;
        Ok(Some(EnergyRow {
            experiment_id: cfg.experiment_id.clone(),
            p,
            d,
            gamma: gamma_text(table.gamma()),
            epsilon: ratio_text(&eps),
            bohr_size: b.len() + 1,
            sumset_size: sumset(&b, &b).len(),
            energy: energy.to_string(),
            rudnev_ratio: ratio,
        }))
    })?;
    Ok(rows.into_iter().flatten().collect())
}

// ----------------------------------------------------------------- avg-size

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvgSizeEntry {
    pub p: u32,
    pub d: usize,
    pub epsilon: String,
    pub samples: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvgSizeSummary {
    pub experiment_id: String,
    pub seed: u64,
    pub entries: Vec<AvgSizeEntry>,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Distribution of `|B(Γ,ε)|/(ε^d p)` over uniformly sampled Γ, per
/// `(p, d)`. Needs a `fixed` radius and at least 100 samples.
pub fn avg_size(cfg: &ExperimentConfig) -> Result<AvgSizeSummary, HarnessError> {
    let EpsilonPolicy::Fixed(RatioText(eps)) = cfg.epsilon_policy else {
        return Err(HarnessError::Config(
            "avg-size needs a fixed epsilon_policy".into(),
        ));
    };
    if cfg.gamma_samples < 100 {
        return Err(HarnessError::Config(
            "avg-size needs gamma_samples ≥ 100".into(),
        ));
    }
    let mut entries = Vec::new();
    for p in cfg.primes() {
        for &d in &cfg.d_values {
            if d as u32 >= p {
                continue;
            }
            let values = collect(cfg, cfg.gamma_samples, |s| {
                let (_, table, _) = sample_table(cfg, AVG_TAG, p, d, s)?;
                let eps = choose_epsilon(&cfg.epsilon_policy, &table)?;
                let expected = ratio_f64(&eps).powi(d as i32) * p as f64;
                Ok(table.size(&eps) as f64 / expected)
            })?;
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            entries.push(AvgSizeEntry {
                p,
                d,
                epsilon: ratio_text(&eps),
                samples: values.len(),
                mean: values.iter().sum::<f64>() / values.len() as f64,
                min: sorted[0],
                q1: quantile(&sorted, 0.25),
                median: quantile(&sorted, 0.5),
                q3: quantile(&sorted, 0.75),
                max: sorted[sorted.len() - 1],
            });
        }
    }
    Ok(AvgSizeSummary {
        experiment_id: cfg.experiment_id.clone(),
        seed: cfg.seed,
        entries,
    })
}

// ------------------------------------------------------------------- verify

/// Every invariant suite, sized from the config: exhaustive suites run
/// over the primes in `prime_range` (capped at 199 for the cubic ones),
/// randomized suites draw `verify_instances` instances each.
pub fn verify(cfg: &ExperimentConfig) -> Vec<SuiteOutcome> {
    let n = cfg.verify_instances;
    let seed = cfg.seed;
    let primes = cfg.primes();
    let small: Vec<u32> = primes.iter().copied().filter(|&p| p <= 199).collect();
    let fourier_primes = [101, 499, 1009];
    let weil_max = cfg.prime_range[1].clamp(3, 500) as u32;
    sample::with_threads(cfg.threads, || {
        vec![
            suites::gauss_sums(&small),
            suites::indicator_identities(&small),
            suites::fourier_identities(&fourier_primes, n.clamp(1, 100), seed),
            suites::bohr_bounds(n, seed, 10007, 3),
            suites::find_regular(n, seed, 10007, 3),
            suites::regularity_grid(n, seed, 401, 3, 64),
            suites::translation(n, seed),
            suites::dilation(n, seed),
            suites::pv_chain(n, seed, 5003),
            suites::basic_burgess(n, seed),
            suites::weil_exhaustive(weil_max, seed),
            suites::averaging(n, seed),
            suites::energy_bounds(n, seed),
            suites::energy_brute(n, seed),
            suites::squares(n, seed),
            suites::recurrence_oracle(n, seed, 2003, &[2, 3]),
        ]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(range: [u64; 2]) -> ExperimentConfig {
        ExperimentConfig {
            prime_range: range,
            gamma_samples: 2,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn find_regular_rows_are_regular() {
        let rows = find_regular_rows(&cfg([11, 80])).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.regular && r.delta == "1/10"));
    }

    #[test]
    fn recurrence_rows_match_oracle() {
        let c = cfg([5, 200]);
        let rows = kpower_rows(&c).unwrap();
        assert!(rows.iter().all(|r| r.matches_oracle));
        let summary = recurrence_summary(&c, &rows);
        assert_eq!(
            summary.per_k.iter().map(|s| s.k).collect::<Vec<_>>(),
            vec![2, 3]
        );
        let rows = primroot_rows(&c).unwrap();
        assert!(rows.iter().all(|r| r.matches_oracle && r.k == 0));
    }

    #[test]
    fn energy_rows_respect_size_cap() {
        for r in energy_rows(&cfg([100, 400])).unwrap() {
            let nz = (r.bohr_size - 1) as u64;
            assert!(nz >= 2 && nz * nz < r.p as u64, "{r:?}");
            assert!(r.rudnev_ratio.is_finite() && r.rudnev_ratio > 0.0);
        }
    }

    #[test]
    fn interval_average_is_two() {
        // d = 1: |B| = 2⌊εp⌋ + 1 for every Γ
        let c = ExperimentConfig {
            prime_range: [101, 101],
            d_values: vec![1],
            gamma_samples: 100,
            epsilon_policy: EpsilonPolicy::Fixed(RatioText(Rational::new(1, 10))),
            ..ExperimentConfig::default()
        };
        let s = avg_size(&c).unwrap();
        let e = &s.entries[0];
        assert_eq!(e.samples, 100);
        let want = 21.0 / 10.1;
        assert!((e.mean - want).abs() < 1e-12 && (e.q1 - want).abs() < 1e-12);
    }

    #[test]
    fn avg_size_preconditions() {
        assert!(matches!(
            avg_size(&cfg([101, 101])),
            Err(HarnessError::Config(_))
        ));
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(
            (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 1.0)),
            (2.0, 3.0, 5.0)
        );
    }
}
