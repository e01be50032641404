//! Instance sampling shared by sweeps and suites.

use bohrsum::bohr::BohrNormTable;
use bohrsum::{Rational, Result};
use rayon::prelude::*;

use crate::config::{CharacterSelection, EpsilonPolicy, RatioText};
use crate::rng::Rng;

/// `d` distinct nonzero residues mod `p`, in draw order.
pub fn random_gamma(rng: &mut Rng, p: u32, d: usize) -> Vec<u64> {
    rng.distinct(d, 1, p as u64 - 1)
}

/// A rational `num/den` drawn with `den ∈ [den_lo, den_hi]` and
/// `lo < num/den ≤ hi`, reduced. Falls back to `hi` when no numerator fits.
pub fn random_ratio(
    rng: &mut Rng,
    den_lo: u64,
    den_hi: u64,
    lo: Rational,
    hi: Rational,
) -> Rational {
    let den = rng.range(den_lo, den_hi) as i128;
    // numerators with lo < n/den ≤ hi
    let n_lo = (lo * den).floor().to_integer() + 1;
    let n_hi = (hi * den).floor().to_integer();
    if n_lo > n_hi {
        return hi;
    }
    let n = rng.range(n_lo as u64, n_hi as u64) as i128;
    Rational::new(n, den)
}

/// The radius a sweep uses for one sampled table.
pub fn choose_epsilon(policy: &EpsilonPolicy, table: &BohrNormTable) -> Result<Rational> {
    match *policy {
        EpsilonPolicy::Fixed(RatioText(e)) => Ok(e),
        EpsilonPolicy::RegularNear(RatioText(delta)) => table.find_regular_value(&delta),
        EpsilonPolicy::TargetSizeExponent(theta) => {
            let p = table.p();
            let target = (p as f64).powf(theta).ceil().max(1.0) as usize;
            let sorted = table.sorted_norms();
            let m = sorted[(target - 1).min(sorted.len() - 1)].max(1);
            Ok(Rational::new(m as i128, p as i128))
        }
    }
}

/// Character indices for one Bohr set, ascending.
pub fn choose_characters(rng: &mut Rng, selection: CharacterSelection, p: u32) -> Vec<u32> {
    let nontrivial = p as u64 - 2;
    let mut js: Vec<u32> = match selection {
        CharacterSelection::All => (1..=nontrivial as u32).collect(),
        CharacterSelection::Sample(n) => rng
            .distinct((n as u64).min(nontrivial) as usize, 1, nontrivial)
            .into_iter()
            .map(|j| j as u32)
            .collect(),
    };
    js.sort_unstable();
    js
}

pub fn gamma_text(gamma: &[u32]) -> String {
    gamma
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn ratio_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ratio_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Runs `f` on a dedicated pool of `threads` workers, or inline on the
/// global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// Ordered parallel map over task indices.
pub fn par_tasks<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

/// A uniform prime in `[lo, hi]` (rejection on uniform integers).
pub fn random_prime(rng: &mut Rng, lo: u32, hi: u32) -> u32 {
    loop {
        let n = rng.range(lo as u64, hi as u64);
        if bohrsum::zp::is_prime(n) {
            return n as u32;
        }
    }
}

/// All primes in `[lo, hi]`.
pub fn primes_between(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi)
        .filter(|&n| bohrsum::zp::is_prime(n as u64))
        .collect()
}
