//! Acceptance criteria, one line each. Runs as a plain binary so every
//! verdict is printed; exits nonzero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use bohrsum::Rational;
use bohrsum_cli::commands::{kpower_rows, primroot_rows, recurrence_summary};
use bohrsum_cli::config::{CharacterSelection, EpsilonPolicy, ExperimentConfig, RatioText};
use bohrsum_cli::report::csv_bytes;
use bohrsum_cli::sample::primes_between;
use bohrsum_cli::suites::{self, SuiteOutcome};
use bohrsum_cli::sweep::{pv_summary, sweep_rows};

const SEED: u64 = 0x5EED_2024;

struct Verdict {
    pass: bool,
    detail: String,
}

fn from_suites(outcomes: &[SuiteOutcome]) -> Verdict {
    Verdict {
        pass: outcomes.iter().all(SuiteOutcome::passed),
        detail: outcomes
            .iter()
            .map(|o| o.line())
            .collect::<Vec<_>>()
            .join("\n      "),
    }
}

fn c1_gauss() -> Verdict {
    from_suites(&[suites::gauss_sums(&primes_between(5, 199))])
}

fn c2_indicators() -> Verdict {
    from_suites(&[suites::indicator_identities(&primes_between(3, 199))])
}

fn c3_fourier() -> Verdict {
    from_suites(&[suites::fourier_identities(&[101, 499, 1009], 100, SEED)])
}

fn c4_bohr() -> Verdict {
    from_suites(&[
        suites::bohr_bounds(500, SEED, 10007, 3),
        suites::dilation(200, SEED),
    ])
}

fn c5_regularity() -> Verdict {
    from_suites(&[
        suites::find_regular(200, SEED, 10007, 3),
        suites::regularity_grid(50, SEED, 401, 3, 64),
    ])
}

fn c6_translation() -> Verdict {
    from_suites(&[suites::translation(100, SEED)])
}

fn c7_pv() -> Verdict {
    let chain = suites::pv_chain(300, SEED, 5003);
    let cfg = ExperimentConfig {
        experiment_id: "pv-growth".into(),
        prime_range: [5, 10_000],
        d_values: vec![1, 2],
        gamma_samples: 2,
        epsilon_policy: EpsilonPolicy::RegularNear(RatioText(Rational::new(1, 10))),
        characters: CharacterSelection::Sample(4),
        seed: SEED,
        ..ExperimentConfig::default()
    };
    let (pass, growth) = match sweep_rows(&cfg) {
        Ok(rows) => {
            let s = pv_summary(&cfg, &rows);
            let mut ok = true;
            let mut parts = Vec::new();
            for m in &s.per_d {
                let small = m.max_ratio_p_le_1000.unwrap_or(f64::NAN);
                ok &= m.max_ratio <= 4.0 * small;
                parts.push(format!(
                    "d={}: max |S|/(√p(ln p)^d) = {:.4} (p={}), over p ≤ 1000 = {:.4}, rows {}",
                    m.d, m.max_ratio, m.argmax_p, small, m.rows
                ));
            }
            parts.push(format!(
                "max ‖1̂_I‖₁/ln p = {:.4}",
                s.max_interval_l1_over_log_p
            ));
            (ok, parts.join("; "))
        }
        Err(e) => (false, format!("sweep failed: {e}")),
    };
    Verdict {
        pass: chain.passed() && pass,
        detail: format!(
            "{}\n      [{}] growth sweep: {growth}",
            chain.line(),
            if pass { "PASS" } else { "FAIL" }
        ),
    }
}

fn c8_burgess() -> Verdict {
    from_suites(&[
        suites::basic_burgess(200, SEED),
        suites::weil_exhaustive(500, SEED),
    ])
}

fn c9_averaging() -> Verdict {
    from_suites(&[suites::averaging(100, SEED)])
}

fn c10_energy() -> Verdict {
    from_suites(&[
        suites::energy_bounds(500, SEED),
        suites::energy_brute(200, SEED),
    ])
}

fn c11_recurrence() -> Verdict {
    let mut v = from_suites(&[
        suites::squares(500, SEED),
        suites::recurrence_oracle(200, SEED, 2003, &[2, 3]),
    ]);
    let cfg = ExperimentConfig {
        experiment_id: "recurrence-constants".into(),
        prime_range: [5, 10_000],
        d_values: vec![1, 2],
        gamma_samples: 1,
        k_values: vec![2, 3],
        seed: SEED,
        ..ExperimentConfig::default()
    };
    let mut lines = Vec::new();
    for (name, rows) in [
        ("k-th power", kpower_rows(&cfg)),
        ("primitive root", primroot_rows(&cfg)),
    ] {
        match rows {
            Ok(rows) => {
                for s in recurrence_summary(&cfg, &rows).per_k {
                    let label = if s.k == 0 {
                        name.to_string()
                    } else {
                        format!("{name} k={}", s.k)
                    };
                    v.pass &= s.oracle_mismatches == 0;
                    lines.push(format!(
                        "{label}: smallest working C = {:.4} over {} instances, C=1 radius sufficed on {}, oracle mismatches {}",
                        s.smallest_working_constant, s.instances, s.initial_radius_sufficed, s.oracle_mismatches
                    ));
                }
            }
            Err(e) => {
                v.pass = false;
                lines.push(format!("{name} sweep failed: {e}"));
            }
        }
    }
    v.detail = format!("{}\n      {}", v.detail, lines.join("\n      "));
    v
}

fn c12_determinism() -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let config = dir.path().join("sweep.json");
    std::fs::write(
        &config,
        r#"{"prime_range": [3, 1500], "d_values": [1, 2], "gamma_samples": 3,
            "characters": {"sample": 5}, "seed": 77}"#,
    )
    .unwrap();
    let bin = env!("CARGO_BIN_EXE_bohrsum");
    let run = |sub: &str, name: &str, threads: Option<&str>| {
        let out = dir.path().join(name);
        let mut cmd = Command::new(bin);
        cmd.args([sub, "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out);
        if let Some(t) = threads {
            cmd.env("RAYON_NUM_THREADS", t);
        }
        let status = cmd.status().expect("run binary");
        (status.success(), std::fs::read(&out).unwrap_or_default())
    };
    let (ok_a, a) = run("sweep-pv", "a.csv", None);
    let (ok_b, b) = run("sweep-pv", "b.csv", None);
    let (ok_c, c) = run("sweep-pv", "c.csv", Some("1"));
    let (ok_d, d) = run("sweep-burgess", "d.csv", None);
    let (ok_e, e) = run("sweep-burgess", "e.csv", Some("3"));

    let cfg = ExperimentConfig {
        prime_range: [3, 1500],
        gamma_samples: 3,
        characters: CharacterSelection::Sample(5),
        seed: 77,
        ..ExperimentConfig::default()
    };
    let lib = csv_bytes(&sweep_rows(&cfg).unwrap()).unwrap();
    let pass = ok_a
        && ok_b
        && ok_c
        && ok_d
        && ok_e
        && !a.is_empty()
        && a == b
        && a == c
        && d == e
        && a == lib;
    Verdict {
        pass,
        detail: format!(
            "sweep-pv: {} bytes, repeat identical {}, 1-thread identical {}, library identical {}; sweep-burgess repeat identical {}",
            a.len(),
            a == b,
            a == c,
            a == lib,
            d == e
        ),
    }
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 12] = [
        ("1 gauss sum law", c1_gauss),
        ("2 indicator identities", c2_indicators),
        ("3 fourier identities", c3_fourier),
        ("4 bohr size bounds", c4_bohr),
        ("5 regularity", c5_regularity),
        ("6 translation corollary", c6_translation),
        ("7 pv chain and growth", c7_pv),
        ("8 basic burgess and weil", c8_burgess),
        ("9 averaging step", c9_averaging),
        ("10 multiplicative energy", c10_energy),
        ("11 recurrence", c11_recurrence),
        ("12 determinism", c12_determinism),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (name, run) in criteria {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let start = Instant::now();
        let v = run();
        println!(
            "{} criterion {name} ({:.1}s)\n      {}",
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
