//! Character-sum sweeps over sampled Bohr sets.

use std::time::Instant;

use bohrsum::bohr::BohrNormTable;
use bohrsum::burgess::burgess_bound;
use bohrsum::fourier::interval_l1_closed_form;
use bohrsum::zp::FieldCtx;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::report::ReportRow;
use crate::rng::Rng;
use crate::sample::{
    self, choose_characters, choose_epsilon, gamma_text, random_gamma, ratio_text,
};
use crate::HarnessError;

const SWEEP_TAG: u64 = 0x0053_5745_4550;

/// `constant·√p·(ln p)^d`.
pub fn pv_bound(p: u32, d: usize, constant: f64) -> f64 {
    let pf = p as f64;
    constant * pf.sqrt() * pf.ln().powi(d as i32)
}

/// Sampled tables, one per `(p, d, sample)`, in output order.
fn tasks(cfg: &ExperimentConfig) -> Vec<(u32, usize, usize)> {
    let mut out = Vec::new();
    for p in cfg.primes() {
        for &d in &cfg.d_values {
            if d as u32 >= p {
                continue;
            }
            for s in 0..cfg.gamma_samples {
                out.push((p, d, s));
            }
        }
    }
    out
}

fn sweep_task(
    cfg: &ExperimentConfig,
    p: u32,
    d: usize,
    s: usize,
) -> Result<Vec<ReportRow>, HarnessError> {
    let mut rng = Rng::stream(cfg.seed, &[SWEEP_TAG, p as u64, d as u64, s as u64]);
    let ctx = FieldCtx::new(p as u64)?;
    let gamma = random_gamma(&mut rng, p, d);
    let table = BohrNormTable::build(&ctx, &gamma)?;
    let eps = choose_epsilon(&cfg.epsilon_policy, &table)?;
    let regular = table.is_regular(&eps)?.regular;
    let b = table.bohr_set(&eps);
    let js = choose_characters(&mut rng, cfg.characters, p);

    let pv = pv_bound(p, d, cfg.constant_c);
    let burgess = burgess_bound(p, d, cfg.k_values[0], b.len(), &eps, cfg.constant_c);
    let gamma_col = gamma_text(table.gamma());
    let eps_col = ratio_text(&eps);
    Ok(js
        .into_iter()
        .map(|j| {
            let start = Instant::now();
            let s_abs = ctx.character(j as u64).sum_over(&b).norm();
            let runtime_ms = if cfg.record_timing {
                start.elapsed().as_millis() as u64
            } else {
                0
            };
            ReportRow {
                experiment_id: cfg.experiment_id.clone(),
                p,
                d,
                gamma: gamma_col.clone(),
                epsilon: eps_col.clone(),
                bohr_size: b.len(),
                regular,
                chi_index: j,
                s_abs,
                pv_bound: pv,
                burgess_bound_large: burgess.large_regime,
                burgess_bound_small: burgess.small_regime,
                ratio_pv: s_abs / pv,
                ratio_burgess_large: s_abs / burgess.large_regime,
                ratio_burgess_small: s_abs / burgess.small_regime,
                runtime_ms,
            }
        })
        .collect())
}

/// One row per `(p, Γ, ε, χ)`, ordered by `(p, d, sample, χ)` whatever the
/// thread count.
pub fn sweep_rows(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>, HarnessError> {
    let tasks = tasks(cfg);
    let chunks = sample::with_threads(cfg.threads, || {
        sample::par_tasks(tasks.len(), |i| {
            let (p, d, s) = tasks[i];
            sweep_task(cfg, p, d, s)
        })
    });
    let mut rows = Vec::new();
    for chunk in chunks {
        rows.extend(chunk?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioMax {
    pub d: usize,
    pub rows: usize,
    pub max_ratio: f64,
    pub argmax_p: u32,
    pub max_ratio_p_le_1000: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PvSummary {
    pub experiment_id: String,
    pub rows: usize,
    pub constant_c: f64,
    /// Max of `|S|/(√p(ln p)^d)` with the constant divided out, per `d`.
    pub per_d: Vec<RatioMax>,
    /// Max of `‖1̂_I‖₁ / ln p` over the sampled `(p, ε)`.
    pub max_interval_l1_over_log_p: f64,
}

/// Max of normalized `|S|/(√p(ln p)^d)` per `d`, with the `p ≤ 1000` part.
pub fn pv_summary(cfg: &ExperimentConfig, rows: &[ReportRow]) -> PvSummary {
    let mut per_d = Vec::new();
    for &d in &cfg.d_values {
        let mut m = RatioMax {
            d,
            rows: 0,
            max_ratio: 0.0,
            argmax_p: 0,
            max_ratio_p_le_1000: None,
        };
        for r in rows.iter().filter(|r| r.d == d) {
            let ratio = r.ratio_pv * cfg.constant_c;
            m.rows += 1;
            if ratio > m.max_ratio {
                m.max_ratio = ratio;
                m.argmax_p = r.p;
            }
            if r.p <= 1000 {
                let cur = m.max_ratio_p_le_1000.unwrap_or(0.0);
                m.max_ratio_p_le_1000 = Some(cur.max(ratio));
            }
        }
        per_d.push(m);
    }
    let mut max_interval = 0.0f64;
    let mut last = (0u32, String::new());
    for r in rows {
        if (r.p, r.epsilon.clone()) == last {
            continue;
        }
        last = (r.p, r.epsilon.clone());
        let eps = crate::config::parse_ratio(&r.epsilon).expect("own output");
        let n = bohrsum::bohr::threshold(&eps, r.p).unwrap_or(0) as u32;
        let l1 = interval_l1_closed_form(r.p, n.min(r.p / 2));
        max_interval = max_interval.max(l1 / (r.p as f64).ln());
    }
    PvSummary {
        experiment_id: cfg.experiment_id.clone(),
        rows: rows.len(),
        constant_c: cfg.constant_c,
        per_d,
        max_interval_l1_over_log_p: max_interval,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeMax {
    pub k: u32,
    /// Rows with `|B| ≥ √p`, compared against the large-set bound.
    pub large_rows: usize,
    pub large_max_ratio: f64,
    /// Rows with `|B| < √p`, compared against the small-set bound.
    pub small_rows: usize,
    pub small_max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BurgessSummary {
    pub experiment_id: String,
    pub rows: usize,
    pub constant_c: f64,
    pub per_k: Vec<RegimeMax>,
    pub max_ratio_pv: f64,
}

/// Max measured `|S|/bound` in each regime, for every `k` in `k_values`.
pub fn burgess_summary(cfg: &ExperimentConfig, rows: &[ReportRow]) -> BurgessSummary {
    let per_k = cfg
        .k_values
        .iter()
        .map(|&k| {
            let mut m = RegimeMax {
                k,
                large_rows: 0,
                large_max_ratio: 0.0,
                small_rows: 0,
                small_max_ratio: 0.0,
            };
            for r in rows {
                let eps = crate::config::parse_ratio(&r.epsilon).expect("own output");
                let b = burgess_bound(r.p, r.d, k, r.bohr_size, &eps, cfg.constant_c);
                if (r.bohr_size as f64) * (r.bohr_size as f64) >= r.p as f64 {
                    m.large_rows += 1;
                    m.large_max_ratio = m.large_max_ratio.max(r.s_abs / b.large_regime);
                } else {
                    m.small_rows += 1;
                    m.small_max_ratio = m.small_max_ratio.max(r.s_abs / b.small_regime);
                }
            }
            m
        })
        .collect();
    BurgessSummary {
        experiment_id: cfg.experiment_id.clone(),
        rows: rows.len(),
        constant_c: cfg.constant_c,
        per_k,
        max_ratio_pv: rows.iter().map(|r| r.ratio_pv).fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CharacterSelection, EpsilonPolicy, RatioText};
    use bohrsum::Rational;

    fn small_cfg() -> ExperimentConfig {
        ExperimentConfig {
            prime_range: [3, 60],
            gamma_samples: 2,
            characters: CharacterSelection::Sample(3),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn rows_are_ordered_and_consistent() {
        let cfg = small_cfg();
        let rows = sweep_rows(&cfg).unwrap();
        assert!(!rows.is_empty());
        let keys: Vec<_> = rows.iter().map(|r| (r.p, r.d)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for r in &rows {
            assert!(r.s_abs <= r.bohr_size as f64 + 1e-9);
            assert_eq!(r.pv_bound, pv_bound(r.p, r.d, cfg.constant_c));
            assert_eq!(r.ratio_pv, r.s_abs / r.pv_bound);
            assert!(r.regular);
        }
    }

    #[test]
    fn thread_count_does_not_change_rows() {
        let cfg = small_cfg();
        let one = sweep_rows(&ExperimentConfig {
            threads: Some(1),
            ..cfg.clone()
        })
        .unwrap();
        let many = sweep_rows(&ExperimentConfig {
            threads: Some(4),
            ..cfg
        })
        .unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn interval_gamma_row() {
        // p = 7, Γ = {r}: B(Γ, 1/7) always has 3 elements
        let cfg = ExperimentConfig {
            prime_range: [7, 7],
            d_values: vec![1],
            gamma_samples: 3,
            epsilon_policy: EpsilonPolicy::Fixed(RatioText(Rational::new(1, 7))),
            characters: CharacterSelection::All,
            ..ExperimentConfig::default()
        };
        let rows = sweep_rows(&cfg).unwrap();
        assert_eq!(rows.len(), 15);
        assert!(rows.iter().all(|r| r.bohr_size == 3 && r.epsilon == "1/7"));
        let summary = pv_summary(&cfg, &rows);
        assert_eq!(summary.per_d[0].rows, 15);
    }

    #[test]
    fn empty_range_gives_no_rows() {
        let cfg = ExperimentConfig {
            prime_range: [24, 28],
            ..ExperimentConfig::default()
        };
        assert!(sweep_rows(&cfg).unwrap().is_empty());
    }
}
