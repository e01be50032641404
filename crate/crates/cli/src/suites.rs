//! Invariant suites driven by `verify` and by the acceptance tests.
//!
//! Margins are relative slacks: `(bound − value)/bound` for inequalities
//! and `(tol − err)/tol` for identities checked up to a tolerance. A
//! negative margin is a violation.

use bohrsum::additive::{mult_energy, sumset};
use bohrsum::bohr::{dilate, meets_size_lower_bound, BohrNormTable};
use bohrsum::burgess::{
    averaging_diagnostic, averaging_shift_threshold, basic_burgess_sides, max_shift_multiplier,
    weil_check, RootSpec,
};
use bohrsum::characters::{kth_power_indicator, primitive_root_indicator};
use bohrsum::fourier::{dft, inverse_dft, pv_chain_report};
use bohrsum::recurrence::{
    brute_force_best, find_square_in_bohr, kth_power_recurrence, primitive_root_recurrence,
    Predicate,
};
use bohrsum::zp::FieldCtx;
use bohrsum::{Rational, ResidueSet};
use num_complex::Complex64;
use serde::Serialize;

use crate::oracle;
use crate::rng::Rng;
use crate::sample::{par_tasks, random_gamma, random_prime, random_ratio, ratio_f64};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub instances: usize,
    pub checks: usize,
    pub failures: usize,
    pub worst_margin: f64,
    pub note: String,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.instances > 0
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {}: {} instances, {} checks, {} failures, worst margin {:.3e}{}{}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.instances,
            self.checks,
            self.failures,
            self.worst_margin,
            if self.note.is_empty() { "" } else { "; " },
            self.note
        )
    }
}

/// Per-instance bookkeeping merged in task order.
#[derive(Debug, Clone)]
struct Tally {
    checks: usize,
    failures: usize,
    worst: f64,
    first_failure: Option<String>,
    counters: Vec<(&'static str, usize)>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: 0,
            worst: f64::INFINITY,
            first_failure: None,
            counters: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, margin: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if margin.is_nan() {
            self.worst = f64::NAN;
        } else if !self.worst.is_nan() {
            self.worst = self.worst.min(margin);
        }
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn exact(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.check(ok, if ok { 1.0 } else { -1.0 }, what);
    }

    fn count(&mut self, key: &'static str) {
        match self.counters.iter_mut().find(|(k, _)| *k == key) {
            Some((_, n)) => *n += 1,
            None => self.counters.push((key, 1)),
        }
    }

    fn fail(&mut self, msg: String) {
        self.check(false, -1.0, || msg);
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures += other.failures;
        self.worst = if self.worst.is_nan() || other.worst.is_nan() {
            f64::NAN
        } else {
            self.worst.min(other.worst)
        };
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        for (k, n) in other.counters {
            match self.counters.iter_mut().find(|(kk, _)| *kk == k) {
                Some((_, m)) => *m += n,
                None => self.counters.push((k, n)),
            }
        }
    }
}

fn finish(name: &str, instances: usize, tallies: Vec<Tally>, extra: &str) -> SuiteOutcome {
    let mut t = Tally::new();
    for x in tallies {
        t.merge(x);
    }
    let mut notes: Vec<String> = t.counters.iter().map(|(k, n)| format!("{k}={n}")).collect();
    if !extra.is_empty() {
        notes.push(extra.to_string());
    }
    if let Some(f) = &t.first_failure {
        notes.push(format!("first failure: {f}"));
    }
    SuiteOutcome {
        name: name.to_string(),
        instances,
        checks: t.checks,
        failures: t.failures,
        worst_margin: if t.worst.is_infinite() { 0.0 } else { t.worst },
        note: notes.join(", "),
    }
}

/// Runs `n` randomized instances in parallel, each on its own stream.
fn randomized(
    name: &str,
    seed: u64,
    tag: u64,
    n: usize,
    f: impl Fn(&mut Rng, &mut Tally) -> bohrsum::Result<()> + Sync + Send,
) -> SuiteOutcome {
    let tallies = par_tasks(n, |i| {
        let mut rng = Rng::stream(seed, &[tag, i as u64]);
        let mut t = Tally::new();
        if let Err(e) = f(&mut rng, &mut t) {
            t.fail(format!("instance {i}: {e}"));
        }
        t
    });
    finish(name, n, tallies, "")
}

fn ctx_for(p: u32) -> FieldCtx {
    FieldCtx::new(p as u64).expect("prime modulus")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

// ---------------------------------------------------------------- characters

/// `|τ(χ,−x)| = √p` for `x ≠ 0` and `τ(χ,0) = 0`, every nontrivial `χ`.
pub fn gauss_sums(primes: &[u32]) -> SuiteOutcome {
    let tallies = par_tasks(primes.len(), |i| {
        let p = primes[i];
        let ctx = ctx_for(p);
        let sqrt_p = (p as f64).sqrt();
        let mut t = Tally::new();
        for chi in ctx.characters().filter(|c| !c.is_trivial()) {
            for x in 0..p as u64 {
                let tau = match chi.gauss_sum(x) {
                    Ok(v) => v,
                    Err(e) => {
                        t.fail(format!("p={p} j={} x={x}: {e}", chi.index()));
                        continue;
                    }
                };
                if x == 0 {
                    let err = tau.norm();
                    t.check(err <= 1e-8, (1e-8 - err) / 1e-8, || {
                        format!("p={p} j={} |tau(0)|={err:e}", chi.index())
                    });
                } else {
                    let err = (tau.norm() - sqrt_p).abs();
                    let tol = 1e-7 * sqrt_p;
                    t.check(err <= tol, (tol - err) / tol, || {
                        format!("p={p} j={} x={x} |tau|={}", chi.index(), tau.norm())
                    });
                }
            }
        }
        t
    });
    finish("gauss-sums", primes.len(), tallies, "")
}

/// Character expansions of the k-th power and primitive-root indicators
/// against the direct predicates, for every `k | p−1`.
pub fn indicator_identities(primes: &[u32]) -> SuiteOutcome {
    const TOL: f64 = 1e-9;
    let tallies = par_tasks(primes.len(), |i| {
        let p = primes[i];
        let ctx = ctx_for(p);
        let mut t = Tally::new();
        for k in bohrsum::zp::divisors(p as u64 - 1) {
            for x in 0..p {
                let want = if oracle::is_kth_power(p, k, x) {
                    1.0
                } else {
                    0.0
                };
                match kth_power_indicator(&ctx, k, x as u64) {
                    Ok(v) => {
                        let err = (v - want).abs();
                        t.check(err <= TOL, (TOL - err) / TOL, || {
                            format!("p={p} k={k} x={x}: {v} vs {want}")
                        })
                    }
                    Err(e) => t.fail(format!("p={p} k={k} x={x}: {e}")),
                }
            }
        }
        for x in 1..p {
            let want = if oracle::is_primitive_root(p, x) {
                1.0
            } else {
                0.0
            };
            match primitive_root_indicator(&ctx, x as u64) {
                Ok(v) => {
                    let err = (v - want).abs();
                    t.check(err <= TOL, (TOL - err) / TOL, || {
                        format!("p={p} primitive x={x}: {v} vs {want}")
                    })
                }
                Err(e) => t.fail(format!("p={p} x={x}: {e}")),
            }
        }
        t
    });
    finish("indicator-identities", primes.len(), tallies, "")
}

// ------------------------------------------------------------------- fourier

fn random_function(rng: &mut Rng, p: u32) -> Vec<Complex64> {
    (0..p)
        .map(|_| Complex64::new(2.0 * rng.unit() - 1.0, 2.0 * rng.unit() - 1.0))
        .collect()
}

/// Inversion, Parseval and Plancherel on random complex functions; the
/// first function per prime is also compared with a naive transform.
pub fn fourier_identities(primes: &[u32], per_prime: usize, seed: u64) -> SuiteOutcome {
    const TOL: f64 = 1e-8;
    let tasks: Vec<(u32, usize)> = primes
        .iter()
        .flat_map(|&p| (0..per_prime).map(move |i| (p, i)))
        .collect();
    let ctxs: Vec<FieldCtx> = primes.iter().map(|&p| ctx_for(p)).collect();
    let tallies = par_tasks(tasks.len(), |n| {
        let (p, i) = tasks[n];
        let ctx = &ctxs[primes.iter().position(|&q| q == p).unwrap()];
        let mut rng = Rng::stream(seed, &[0xF0, p as u64, i as u64]);
        let mut t = Tally::new();
        let f = random_function(&mut rng, p);
        let g = random_function(&mut rng, p);
        let (fh, gh) = match (dft(ctx, &f), dft(ctx, &g)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                t.fail(format!("p={p}: transform failed"));
                return t;
            }
        };
        let back = inverse_dft(ctx, &fh).expect("length p");
        let norm2 = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let diff: Vec<Complex64> = f.iter().zip(&back).map(|(a, b)| a - b).collect();
        let inv_err = (norm2(&diff) / norm2(&f)).sqrt();
        t.check(inv_err <= TOL, (TOL - inv_err) / TOL, || {
            format!("p={p} inversion {inv_err:e}")
        });

        let pf = p as f64;
        let inner: Complex64 = f.iter().zip(&g).map(|(a, b)| a * b.conj()).sum();
        let inner_hat: Complex64 = fh
            .values()
            .iter()
            .zip(gh.values())
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            / pf;
        let scale = (norm2(&f) * norm2(&g)).sqrt();
        let pars_err = (inner - inner_hat).norm() / scale;
        t.check(pars_err <= TOL, (TOL - pars_err) / TOL, || {
            format!("p={p} parseval {pars_err:e}")
        });

        let planch_err = rel(norm2(fh.values()) / pf, norm2(&f));
        t.check(planch_err <= TOL, (TOL - planch_err) / TOL, || {
            format!("p={p} plancherel {planch_err:e}")
        });

        if i == 0 {
            let naive = oracle::naive_dft(&f);
            let d: Vec<Complex64> = naive.iter().zip(fh.values()).map(|(a, b)| a - b).collect();
            let err = (norm2(&d) / norm2(&naive)).sqrt();
            t.check(err <= TOL, (TOL - err) / TOL, || {
                format!("p={p} dft vs naive {err:e}")
            });
        }
        t
    });
    finish("fourier-identities", tasks.len(), tallies, "")
}

// ---------------------------------------------------------------------- bohr

/// Size lower bound, doubling, sumset bound and sumset inclusion, with
/// every set recomputed from the definition.
pub fn bohr_bounds(n: usize, seed: u64, p_max: u32, d_max: usize) -> SuiteOutcome {
    randomized("bohr-bounds", seed, 0xB0, n, |rng, t| {
        let p = random_prime(rng, 5, p_max);
        let d = rng.range(1, d_max as u64) as usize;
        let ctx = ctx_for(p);
        let table = BohrNormTable::build(&ctx, &random_gamma(rng, p, d))?;
        let gamma = table.gamma().to_vec();
        let eps = random_ratio(rng, 4, 4000, Rational::new(0, 1), Rational::new(1, 4));
        let (num, den) = (*eps.numer(), *eps.denom());
        let b = table.bohr_set(&eps);
        let members = oracle::bohr_members(p, &gamma, num, den);
        t.exact(b.as_slice() == members.as_slice(), || {
            format!("p={p} Γ={gamma:?} ε={eps} membership")
        });

        let size = b.len() as i128;
        let lower = num.pow(d as u32) * p as i128;
        let upper = size * den.pow(d as u32);
        t.check(
            lower <= upper,
            (upper - lower) as f64 / upper as f64,
            || format!("p={p} Γ={gamma:?} ε={eps}: |B|={size} below ε^d p"),
        );
        t.exact(
            meets_size_lower_bound(&eps, d, p, b.len()) == (lower <= upper),
            || format!("p={p} ε={eps}: lower-bound helper disagrees"),
        );

        let four_d = 4i128.pow(d as u32) * size;
        let doubled = oracle::bohr_members(p, &gamma, 2 * num, den);
        let b2 = doubled.len() as i128;
        t.check(b2 <= four_d, (four_d - b2) as f64 / four_d as f64, || {
            format!("p={p} Γ={gamma:?} ε={eps}: |B(2ε)|={b2} > 4^d|B|")
        });
        let bb = sumset(&b, &b);
        let s = bb.len() as i128;
        t.check(s <= four_d, (four_d - s) as f64 / four_d as f64, || {
            format!("p={p} Γ={gamma:?} ε={eps}: |B+B|={s} > 4^d|B|")
        });
        let inside = bb.iter().all(|x| doubled.binary_search(&x).is_ok());
        t.exact(inside, || format!("p={p} Γ={gamma:?} ε={eps}: B+B ⊄ B(2ε)"));
        Ok(())
    })
}

/// `find_regular_value` lands in `(δ, 2δ)` on a regular radius.
pub fn find_regular(n: usize, seed: u64, p_max: u32, d_max: usize) -> SuiteOutcome {
    randomized("find-regular", seed, 0xB1, n, |rng, t| {
        let p = random_prime(rng, 11, p_max);
        let d = rng.range(1, d_max as u64) as usize;
        let ctx = ctx_for(p);
        let table = BohrNormTable::build(&ctx, &random_gamma(rng, p, d))?;
        let delta = random_ratio(rng, 8, 2000, Rational::new(0, 1), Rational::new(1, 4));
        let eps = match table.find_regular_value(&delta) {
            Ok(e) => e,
            Err(e) => {
                t.fail(format!("p={p} Γ={:?} δ={delta}: {e}", table.gamma()));
                return Ok(());
            }
        };
        t.exact(delta < eps && eps < delta * 2, || {
            format!("p={p} δ={delta}: ε={eps} outside")
        });
        let v = table.is_regular(&eps)?;
        t.check(v.regular, ratio_f64(&v.worst_margin), || {
            format!("p={p} Γ={:?} ε={eps}: not regular", table.gamma())
        });
        Ok(())
    })
}

/// Exact regularity verdicts against the dense κ-grid brute force.
pub fn regularity_grid(
    n: usize,
    seed: u64,
    p_max: u32,
    d_max: usize,
    refine: i128,
) -> SuiteOutcome {
    let outcome = par_tasks(n, |i| {
        let mut rng = Rng::stream(seed, &[0xB2, i as u64]);
        let mut t = Tally::new();
        let p = random_prime(&mut rng, 11, p_max);
        let d = rng.range(1, d_max as u64) as usize;
        let ctx = ctx_for(p);
        let table = BohrNormTable::build(&ctx, &random_gamma(&mut rng, p, d)).expect("valid Γ");
        // half the radii sit exactly on a breakpoint, where regularity often fails
        let eps = if i % 2 == 0 {
            let norms = table.sorted_norms();
            let m = (*rng.pick(norms)).max(1);
            Rational::new(m as i128, p as i128)
        } else {
            random_ratio(&mut rng, 2, 2000, Rational::new(0, 1), Rational::new(1, 2))
        };
        let exact = table.is_regular(&eps).expect("positive radius").regular;
        let grid = oracle::grid_regular(p, table.gamma(), *eps.numer(), *eps.denom(), refine);
        t.count(if exact { "regular" } else { "irregular" });
        t.exact(exact == grid, || {
            format!(
                "p={p} Γ={:?} ε={eps}: exact {exact}, grid {grid}",
                table.gamma()
            )
        });
        t
    });
    finish(
        "regularity-grid",
        n,
        outcome,
        &format!("grid denominator 100d·p·{refine}"),
    )
}

/// Translation defect of a regular Bohr set under shifts from `B(Γ, η)`,
/// `η = δε/(200d)`, against `nδ|B|`.
pub fn translation(n: usize, seed: u64) -> SuiteOutcome {
    randomized("translation", seed, 0xB3, n, |rng, t| {
        let p = random_prime(rng, 10_000, 100_003);
        let d = rng.range(1, 2) as usize;
        let ctx = ctx_for(p);
        let table = BohrNormTable::build(&ctx, &random_gamma(rng, p, d))?;
        let delta0 = random_ratio(rng, 16, 400, Rational::new(1, 16), Rational::new(1, 4));
        let eps = table.find_regular_value(&delta0)?;
        let delta = random_ratio(rng, 1, 8, Rational::new(0, 1), Rational::new(1, 1));
        let eta = delta * eps / Rational::from_integer(200 * d as i128);
        let pool = table.members_by_norm(&eta);
        let count = rng.range(1, 5) as usize;
        let shifts: Vec<u32> = (0..count).map(|_| *rng.pick(pool)).collect();
        let defect = table.translation_defect(&eps, &shifts);

        let total = shifts.iter().map(|&y| y as u64).sum::<u64>() % p as u64;
        let (num, den) = (*eps.numer(), *eps.denom());
        let gamma = table.gamma();
        let brute = (0..p)
            .filter(|&x| {
                let xs = ((x as u64 + total) % p as u64) as u32;
                oracle::in_bohr(p, gamma, num, den, x) != oracle::in_bohr(p, gamma, num, den, xs)
            })
            .count();
        t.exact(brute == defect, || {
            format!("p={p} ε={eps}: defect {defect} vs {brute}")
        });

        let size = table.size(&eps) as i128;
        let lhs = defect as i128 * delta.denom();
        let rhs = count as i128 * delta.numer() * size;
        t.check(lhs <= rhs, (rhs - lhs) as f64 / rhs as f64, || {
            format!("p={p} Γ={gamma:?} ε={eps} δ={delta} n={count}: defect {defect}")
        });
        t.count(if total == 0 {
            "zero_shift"
        } else {
            "nonzero_shift"
        });
        Ok(())
    })
}

/// `x·B(Γ,ε) = B(x⁻¹Γ,ε)` and `B ∩ xB ⊇ B(Γ ∪ x⁻¹Γ, ε)`.
pub fn dilation(n: usize, seed: u64) -> SuiteOutcome {
    randomized("dilation", seed, 0xB4, n, |rng, t| {
        let p = random_prime(rng, 5, 5003);
        let d = rng.range(1, 3.min(p as u64 - 2)) as usize;
        let ctx = ctx_for(p);
        let gamma = random_gamma(rng, p, d);
        let x = rng.range(1, p as u64 - 1);
        let eps = random_ratio(rng, 2, 1000, Rational::new(0, 1), Rational::new(1, 2));
        let (num, den) = (*eps.numer(), *eps.denom());
        let g32: Vec<u32> = gamma.iter().map(|&r| r as u32).collect();
        let dil: Vec<u32> = dilate(&ctx, &gamma, x)?.iter().map(|&r| r as u32).collect();
        let b = ResidueSet::new(
            p,
            oracle::bohr_members(p, &g32, num, den)
                .into_iter()
                .map(u64::from),
        );
        let xb = b.dilate(x as u32);
        let rhs = ResidueSet::new(
            p,
            oracle::bohr_members(p, &dil, num, den)
                .into_iter()
                .map(u64::from),
        );
        t.exact(xb == rhs, || {
            format!("p={p} Γ={gamma:?} x={x} ε={eps}: dilation")
        });

        let mut union = g32.clone();
        union.extend(dil.iter().copied());
        union.sort_unstable();
        union.dedup();
        let small = oracle::bohr_members(p, &union, num, den);
        let ok = small.iter().all(|&z| b.contains(z) && xb.contains(z));
        t.exact(ok, || {
            format!("p={p} Γ={gamma:?} x={x} ε={eps}: intersection")
        });
        Ok(())
    })
}

// ----------------------------------------------------------------- PV chain

/// `|S(χ)| ≤ √p‖1̂_B‖₁ ≤ √p‖1̂_I‖₁^d` up to `1e−6` relative.
pub fn pv_chain(n: usize, seed: u64, p_max: u32) -> SuiteOutcome {
    randomized("pv-chain", seed, 0xC0, n, |rng, t| {
        let p = random_prime(rng, 5, p_max);
        let d = rng.range(1, 3) as usize;
        let ctx = ctx_for(p);
        let gamma = random_gamma(rng, p, d);
        let eps = random_ratio(rng, 2, 1000, Rational::new(0, 1), Rational::new(99, 200));
        let chi = ctx.character(rng.range(1, p as u64 - 2));
        let r = pv_chain_report(&ctx, &gamma, &eps, &chi)?;
        let tol = 1e-6 * r.right;
        let m = ((r.mid + tol - r.s_abs).min(r.right + tol - r.mid)) / r.right;
        t.check(r.holds(), m, || {
            format!(
                "p={p} Γ={gamma:?} ε={eps} j={}: {} ≤ {} ≤ {}",
                chi.index(),
                r.s_abs,
                r.mid,
                r.right
            )
        });
        let g32: Vec<u32> = gamma.iter().map(|&x| x as u32).collect();
        let size = oracle::bohr_members(p, &g32, *eps.numer(), *eps.denom()).len();
        t.exact(r.bohr_size == size && r.s_abs <= size as f64 + 1e-9, || {
            format!("p={p} Γ={gamma:?} ε={eps}: |S| exceeds |B|")
        });
        Ok(())
    })
}

// ------------------------------------------------------------------ burgess

/// Both sides of the Hölder/Weil inequality on random sets; `A` and `B`
/// avoid 0 (the energy factor needs `F_p^×`).
pub fn basic_burgess(n: usize, seed: u64) -> SuiteOutcome {
    const PRIMES: [u32; 3] = [101, 211, 401];
    randomized("basic-burgess", seed, 0xD0, n, |rng, t| {
        let p = *rng.pick(&PRIMES);
        let ctx = ctx_for(p);
        let mut set = |lo: u64| {
            let size = rng.range(1, 12) as usize;
            ResidueSet::new(p, rng.distinct(size, lo, p as u64 - 1))
        };
        let (a, b, c) = (set(1), set(1), set(0));
        let k = rng.range(1, 3) as u32;
        let chi = ctx.character(rng.range(1, p as u64 - 2));
        let s = basic_burgess_sides(&chi, &a, &b, &c, k)?;
        t.check(s.holds(), (s.rhs - s.lhs) / s.rhs, || {
            format!(
                "p={p} k={k} j={} A={:?} B={:?} C={:?}: {} > {}",
                chi.index(),
                a.as_slice(),
                b.as_slice(),
                c.as_slice(),
                s.lhs,
                s.rhs
            )
        });
        if s.t3_exact <= s.t3 * (1.0 + 1e-9) {
            t.count("t3_dominated");
        } else {
            t.count("t3_exceeded");
        }
        Ok(())
    })
}

fn partitions(n: u64, max: u64) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Multiplicity patterns of every polynomial of degree 1..=4.
pub fn degree_patterns() -> Vec<Vec<u64>> {
    (1..=4).flat_map(|deg| partitions(deg, deg)).collect()
}

/// Weil's bound for every nontrivial character and every root pattern of
/// degree ≤ 4 (two random root placements each), plus Burgess-shaped
/// `f_c` with `k ≤ 2`; primes `3 ≤ p ≤ p_max`.
pub fn weil_exhaustive(p_max: u32, seed: u64) -> SuiteOutcome {
    let primes = crate::sample::primes_between(3, p_max);
    let patterns = degree_patterns();
    let tallies = par_tasks(primes.len(), |i| {
        let p = primes[i];
        let ctx = ctx_for(p);
        let mut rng = Rng::stream(seed, &[0xD1, p as u64]);
        let mut polys = Vec::new();
        for pat in &patterns {
            if pat.len() as u64 > p as u64 {
                continue;
            }
            for _ in 0..2 {
                let roots = rng.distinct(pat.len(), 0, p as u64 - 1);
                let spec: Vec<(u64, u64)> = roots.into_iter().zip(pat.iter().copied()).collect();
                polys.push(RootSpec::new(p, &spec).expect("distinct roots"));
            }
        }
        for k in 1..=2u64 {
            let c: Vec<u64> = (0..2 * k).map(|_| rng.below(p as u64)).collect();
            polys.push(RootSpec::burgess_shape(p, &c));
        }
        let mut t = Tally::new();
        for chi in ctx.characters().filter(|c| !c.is_trivial()) {
            for f in &polys {
                let w = match weil_check(&chi, f) {
                    Ok(w) => w,
                    Err(e) => {
                        t.fail(format!("p={p}: {e}"));
                        continue;
                    }
                };
                if w.is_lth_power {
                    let want = p as f64 - f.distinct_roots() as f64;
                    let err = (w.value - Complex64::new(want, 0.0)).norm();
                    t.check(err <= 1e-6, (1e-6 - err) / 1e-6, || {
                        format!(
                            "p={p} j={} {:?}: trivial pattern sum {}",
                            chi.index(),
                            f.roots(),
                            w.value
                        )
                    });
                    t.count("lth_power");
                } else {
                    t.check(w.pass, (w.bound - w.value.norm()) / w.bound, || {
                        format!(
                            "p={p} j={} {:?}: |sum|={} > {}",
                            chi.index(),
                            f.roots(),
                            w.value.norm(),
                            w.bound
                        )
                    });
                }
            }
        }
        t
    });
    finish("weil-exhaustive", primes.len(), tallies, "")
}

/// `|S − Σ_{x∈B} χ(x−ny)| ≤ n·p^{−1/k}·|B|` for regular `ε` and
/// `y ∈ B(Γ, p^{−1/k}ε/(200d))`.
pub fn averaging(n: usize, seed: u64) -> SuiteOutcome {
    randomized("averaging", seed, 0xD2, n, |rng, t| {
        let p = random_prime(rng, 50_000, 300_000);
        let d = rng.range(1, 2) as usize;
        let k = rng.range(3, 5) as u32;
        let ctx = ctx_for(p);
        let table = BohrNormTable::build(&ctx, &random_gamma(rng, p, d))?;
        let delta = random_ratio(rng, 20, 400, Rational::new(1, 20), Rational::new(1, 5));
        let eps = table.find_regular_value(&delta)?;
        let (_, cutoff) = averaging_shift_threshold(p, d, k, &eps);
        let pool = table.members_by_norm(&Rational::new(cutoff as i128, p as i128));
        let y = if pool.len() > 1 {
            pool[1 + rng.below(pool.len() as u64 - 1) as usize]
        } else {
            0
        };
        let max_n = max_shift_multiplier(p, k).max(1);
        let mult = rng.range(1, max_n);
        let chi = ctx.character(rng.range(1, p as u64 - 2));
        let a = averaging_diagnostic(&chi, &table, &eps, k, mult, y)?;
        let gap = (a.s - a.shifted).norm();
        let bound = a.defect_bound;
        t.check(
            a.holds() && gap <= bound + 1e-8,
            (bound - gap) / bound,
            || {
                format!(
                    "p={p} Γ={:?} ε={eps} k={k} n={mult} y={y}: gap {gap} defect {} bound {bound}",
                    table.gamma(),
                    a.defect
                )
            },
        );
        t.count(if y == 0 {
            "zero_shift"
        } else {
            "nonzero_shift"
        });
        Ok(())
    })
}

// ------------------------------------------------------------------- energy

fn random_nonzero_set(rng: &mut Rng, p: u32, max: usize) -> ResidueSet {
    let size = rng.range(1, max.min(p as usize - 1) as u64) as usize;
    ResidueSet::new(p, rng.distinct(size, 1, p as u64 - 1))
}

/// `E(A,B)² ≤ E(A,A)·E(B,B)` and `|A||B| ≤ E(A,B) ≤ |A||B|·min(|A|,|B|)`
/// over nonzero sets, exact.
pub fn energy_bounds(n: usize, seed: u64) -> SuiteOutcome {
    randomized("energy-cauchy-schwarz", seed, 0xE0, n, |rng, t| {
        let p = random_prime(rng, 50, 2000);
        let a = random_nonzero_set(rng, p, 60);
        let b = random_nonzero_set(rng, p, 60);
        let (eab, eaa, ebb) = (
            mult_energy(&a, &b),
            mult_energy(&a, &a),
            mult_energy(&b, &b),
        );
        let lhs = eab * eab;
        let rhs = eaa * ebb;
        t.check(lhs <= rhs, (rhs as f64 - lhs as f64) / rhs as f64, || {
            format!(
                "p={p} |A|={} |B|={}: E(A,B)²={lhs} > {rhs}",
                a.len(),
                b.len()
            )
        });
        let (na, nb) = (a.len() as u128, b.len() as u128);
        t.exact(na * nb <= eab && eab <= na * nb * na.min(nb), || {
            format!(
                "p={p}: E(A,B)={eab} outside [{}, {}]",
                na * nb,
                na * nb * na.min(nb)
            )
        });
        Ok(())
    })
}

/// `mult_energy` against the quadruple count, sets of size ≤ 12 (0 allowed).
pub fn energy_brute(n: usize, seed: u64) -> SuiteOutcome {
    randomized("energy-quadruples", seed, 0xE1, n, |rng, t| {
        let p = random_prime(rng, 13, 500);
        let mut set = || {
            let size = rng.range(1, 12) as usize;
            rng.distinct(size, 0, p as u64 - 1)
                .into_iter()
                .map(|x| x as u32)
                .collect::<Vec<_>>()
        };
        let (a, b) = (set(), set());
        let ra = ResidueSet::new(p, a.iter().map(|&x| x as u64));
        let rb = ResidueSet::new(p, b.iter().map(|&x| x as u64));
        t.exact(
            mult_energy(&ra, &rb) == oracle::energy_quadruples(p, &a, &b),
            || format!("p={p} A={a:?} B={b:?}: E(A,B)"),
        );
        t.exact(
            mult_energy(&ra, &ra) == oracle::energy_quadruples(p, &a, &a),
            || format!("p={p} A={a:?}: E(A,A)"),
        );
        Ok(())
    })
}

// --------------------------------------------------------------- recurrence

/// A nonzero square in `B(Γ,ε)` whenever `ε^{2d}p > 1`.
pub fn squares(n: usize, seed: u64) -> SuiteOutcome {
    randomized("squares", seed, 0xF1, n, |rng, t| {
        let p = random_prime(rng, 5, 10007);
        // the hypothesis needs p > 4^d, since ε ≤ 1/2
        let d_max = (1..=3u32)
            .take_while(|&d| 4u64.pow(d) < p as u64)
            .last()
            .unwrap_or(1);
        let d = rng.range(1, d_max as u64) as usize;
        let ctx = ctx_for(p);
        let table = BohrNormTable::build(&ctx, &random_gamma(rng, p, d))?;
        let eps = loop {
            let e = random_ratio(rng, 2, 2000, Rational::new(0, 1), Rational::new(1, 2));
            let (num, den) = (*e.numer() as u128, *e.denom() as u128);
            if num.pow(2 * d as u32) * p as u128 > den.pow(2 * d as u32) {
                break e;
            }
        };
        match find_square_in_bohr(&ctx, &table, &eps) {
            Some(x) => {
                let ok = x != 0
                    && oracle::is_kth_power(p, 2, x)
                    && oracle::in_bohr(p, table.gamma(), *eps.numer(), *eps.denom(), x);
                t.exact(ok, || {
                    format!("p={p} Γ={:?} ε={eps}: bad witness {x}", table.gamma())
                });
            }
            None => t.fail(format!(
                "p={p} Γ={:?} ε={eps}: no square found",
                table.gamma()
            )),
        }
        Ok(())
    })
}

/// Solver witnesses against exhaustive search, for k-th powers (and the
/// `gcd(k, p−1)` reduction) and primitive roots.
pub fn recurrence_oracle(n: usize, seed: u64, p_max: u32, ks: &[u64]) -> SuiteOutcome {
    randomized("recurrence-oracle", seed, 0xF2, n, |rng, t| {
        let p = random_prime(rng, 5, p_max);
        let d = rng.range(1, 2) as usize;
        let ctx = ctx_for(p);
        let table = BohrNormTable::build(&ctx, &random_gamma(rng, p, d))?;
        let gamma = table.gamma().to_vec();
        let quality_ok = |x: u32, q: &Rational, used: &Rational| {
            *q == Rational::new(oracle::quality_numerator(p, &gamma, x) as i128, p as i128)
                && q <= used
        };
        for &k in ks {
            let r = kth_power_recurrence(&ctx, &table, k, 1.0)?;
            let best = brute_force_best(&ctx, &gamma, Predicate::KthPower(k))?;
            let root_ok = r.root.is_some_and(|y| ctx.pow(y as u64, k) == r.x);
            t.exact(oracle::is_kth_power(p, k, r.x) && root_ok, || {
                format!("p={p} Γ={gamma:?} k={k}: invalid witness {}", r.x)
            });
            t.exact(quality_ok(r.x, &r.quality, &r.epsilon_used), || {
                format!("p={p} Γ={gamma:?} k={k}: quality {}", r.quality)
            });
            t.exact(r.quality == best.quality, || {
                format!(
                    "p={p} Γ={gamma:?} k={k}: quality {} vs optimum {}",
                    r.quality, best.quality
                )
            });
            let l = num_gcd(k, p as u64 - 1);
            let reduced = kth_power_recurrence(&ctx, &table, l, 1.0)?;
            t.exact(reduced.x == r.x && reduced.quality == r.quality, || {
                format!("p={p} Γ={gamma:?} k={k}: gcd reduction differs")
            });
        }
        let r = primitive_root_recurrence(&ctx, &table, 1.0)?;
        let best = brute_force_best(&ctx, &gamma, Predicate::PrimitiveRoot)?;
        t.exact(oracle::is_primitive_root(p, r.x), || {
            format!("p={p}: {} not primitive", r.x)
        });
        t.exact(quality_ok(r.x, &r.quality, &r.epsilon_used), || {
            format!("p={p} Γ={gamma:?}: primitive quality {}", r.quality)
        });
        t.exact(r.quality == best.quality, || {
            format!(
                "p={p} Γ={gamma:?}: primitive quality {} vs optimum {}",
                r.quality, best.quality
            )
        });
        Ok(())
    })
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns_cover_degrees_up_to_four() {
        let pats = degree_patterns();
        assert_eq!(pats.len(), 1 + 2 + 3 + 5);
        assert!(pats.contains(&vec![2, 1, 1]) && pats.contains(&vec![4]));
    }

    #[test]
    fn small_suites_pass() {
        for s in [
            gauss_sums(&[5, 7, 11]),
            indicator_identities(&[7, 13]),
            fourier_identities(&[11, 13], 2, 1),
            bohr_bounds(10, 1, 300, 3),
            find_regular(10, 1, 300, 3),
            regularity_grid(6, 1, 60, 2, 8),
            translation(3, 1),
            dilation(10, 1),
            pv_chain(5, 1, 200),
            basic_burgess(5, 1),
            weil_exhaustive(13, 1),
            energy_bounds(10, 1),
            energy_brute(5, 1),
            squares(10, 1),
            recurrence_oracle(5, 1, 200, &[2, 3]),
        ] {
            assert!(s.passed(), "{}", s.line());
        }
    }

    #[test]
    fn failures_are_reported() {
        let mut t = Tally::new();
        t.check(true, 0.5, String::new);
        t.check(false, -0.25, || "boom".into());
        let s = finish("x", 1, vec![t], "");
        assert!(!s.passed());
        assert_eq!((s.checks, s.failures, s.worst_margin), (2, 1, -0.25));
        assert!(s.note.contains("boom"));
    }
}
