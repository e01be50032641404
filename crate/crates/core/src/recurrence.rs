//! Recurrence of special residues in Bohr sets: nonzero squares, k-th
//! powers and primitive roots, plus an exhaustive oracle.
//!
//! All solvers walk a [`BohrNormTable`] in increasing Bohr norm (ties by
//! residue), so the first witness found inside a radius is also the best
//! witness overall.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::bohr::{approximation_quality, BohrNormTable};
use crate::error::{Error, Result};
use crate::zp::{totient, FieldCtx};
use crate::Rational;

/// A witness together with how well it approximates 0 along Γ.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceResult {
    /// The residue found in the Bohr set.
    pub x: u32,
    /// For k-th powers: some `y` with `y^k ≡ x`.
    pub root: Option<u32>,
    /// `max_{r∈Γ} ‖x·r/p‖`.
    pub quality: Rational,
    /// Radius at which the witness was found.
    pub epsilon_used: Rational,
    /// Radius suggested by the configured constant before escalation.
    pub epsilon_initial: Rational,
    /// Number of radius doublings needed.
    pub escalations: u32,
    /// Shape of the asymptotic bound, without its constant.
    pub bound_value: f64,
}

impl RecurrenceResult {
    pub fn initial_radius_sufficed(&self) -> bool {
        self.escalations == 0
    }
}

/// Which residues count as witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    KthPower(u64),
    PrimitiveRoot,
    AnyNonzero,
}

impl Predicate {
    pub fn holds(&self, ctx: &FieldCtx, x: u32) -> bool {
        if x == 0 {
            return false;
        }
        match *self {
            Predicate::KthPower(k) => ctx.is_kth_power(x as u64, k).expect("nonzero"),
            Predicate::PrimitiveRoot => ctx.is_primitive_root(x as u64).expect("nonzero"),
            Predicate::AnyNonzero => true,
        }
    }
}

/// `ε^{2d}·p > 1`, exactly.
pub fn square_guarantee_holds(eps: &Rational, d: usize, p: u32) -> bool {
    let e = 2 * d as u32;
    BigInt::from(*eps.numer()).pow(e) * p > BigInt::from(*eps.denom()).pow(e)
}

/// A nonzero quadratic residue in `B(Γ, ε)` of least Bohr norm.
///
/// Guaranteed to exist whenever `ε^{2d}·p > 1`.
pub fn find_square_in_bohr(ctx: &FieldCtx, table: &BohrNormTable, eps: &Rational) -> Option<u32> {
    table
        .members_by_norm(eps)
        .iter()
        .copied()
        .find(|&x| x != 0 && ctx.is_kth_power(x as u64, 2).expect("nonzero"))
}

fn first_in_radius(
    ctx: &FieldCtx,
    table: &BohrNormTable,
    eps: &Rational,
    pred: Predicate,
) -> Option<u32> {
    table
        .members_by_norm(eps)
        .iter()
        .copied()
        .find(|&x| pred.holds(ctx, x))
}

// Scan B(Γ, ε), doubling ε (capped at 1/2) until a witness appears.
fn escalating_search(
    ctx: &FieldCtx,
    table: &BohrNormTable,
    start: Rational,
    pred: Predicate,
) -> Result<(u32, Rational, u32)> {
    let half = Rational::new(1, 2);
    let mut eps = start.min(half);
    let mut escalations = 0;
    loop {
        if let Some(x) = first_in_radius(ctx, table, &eps, pred) {
            return Ok((x, eps, escalations));
        }
        if eps >= half {
            return Err(Error::NoWitness);
        }
        eps = (eps * 2).min(half);
        escalations += 1;
    }
}

// Smallest radius m/p (m ≥ 1) that is at least the real radius `r`.
fn rational_radius(p: u32, r: f64) -> Rational {
    let m = (r * p as f64).ceil().clamp(1.0, (p / 2) as f64) as i128;
    Rational::new(m, p as i128)
}

/// `p^{−1/2d}·ln p·l^{1/d}` with `l = gcd(k, p−1)`.
pub fn kth_power_bound_shape(p: u32, d: usize, k: u64) -> f64 {
    let l = k.gcd(&(p as u64 - 1)) as f64;
    let (pf, df) = (p as f64, d as f64);
    pf.powf(-1.0 / (2.0 * df)) * pf.ln() * l.powf(1.0 / df)
}

/// `p^{1/2d}·ln p / φ(p−1)^{1/d}`.
pub fn primitive_root_bound_shape(p: u32, d: usize) -> f64 {
    let (pf, df) = (p as f64, d as f64);
    pf.powf(1.0 / (2.0 * df)) * pf.ln() / (totient(p as u64 - 1) as f64).powf(1.0 / df)
}

/// A nonzero k-th power in a Bohr set of radius
/// `min(1/2, C·p^{−1/2d}·ln p·gcd(k,p−1)^{1/d})`, escalating if needed.
pub fn kth_power_recurrence(
    ctx: &FieldCtx,
    table: &BohrNormTable,
    k: u64,
    constant: f64,
) -> Result<RecurrenceResult> {
    let p = ctx.p();
    let d = table.rank();
    let shape = kth_power_bound_shape(p, d, k);
    let start = rational_radius(p, (constant * shape).min(0.5));
    let (x, eps, escalations) = escalating_search(ctx, table, start, Predicate::KthPower(k))?;
    Ok(RecurrenceResult {
        x,
        root: ctx.kth_root(x as u64, k)?,
        quality: approximation_quality(p, table.gamma(), x as u64),
        epsilon_used: eps,
        epsilon_initial: start,
        escalations,
        bound_value: shape,
    })
}

/// Smallest breakpoint radius with `|B|·φ(p−1)/(p−1) > C_pv·√p·(ln p)^d`,
/// or 1/2 when no radius qualifies.
pub fn primitive_root_counting_radius(table: &BohrNormTable, pv_constant: f64) -> Rational {
    let p = table.p();
    let d = table.rank() as i32;
    let pf = p as f64;
    let density = totient(p as u64 - 1) as f64 / (pf - 1.0);
    let needed = pv_constant * pf.sqrt() * pf.ln().powi(d) / density;
    let sorted = table.sorted_norms();
    // sizes are counts of norms ≤ m; first index whose prefix count exceeds `needed`
    let idx = needed.floor().max(0.0) as usize;
    match sorted.get(idx) {
        Some(&m) if m >= 1 => Rational::new(m as i128, p as i128),
        Some(_) => Rational::new(1, p as i128),
        None => Rational::new(1, 2),
    }
}

/// A primitive root of least Bohr norm, starting from the radius at which
/// the character-sum count guarantees one.
pub fn primitive_root_recurrence(
    ctx: &FieldCtx,
    table: &BohrNormTable,
    pv_constant: f64,
) -> Result<RecurrenceResult> {
    let p = ctx.p();
    let start = primitive_root_counting_radius(table, pv_constant);
    let (x, eps, escalations) = escalating_search(ctx, table, start, Predicate::PrimitiveRoot)?;
    Ok(RecurrenceResult {
        x,
        root: None,
        quality: approximation_quality(p, table.gamma(), x as u64),
        epsilon_used: eps,
        epsilon_initial: start,
        escalations,
        bound_value: primitive_root_bound_shape(p, table.rank()),
    })
}

/// Exhaustive scan of `[1, p−1]` for the witness minimizing
/// `max_{r∈Γ} ‖xr/p‖`, ties to the smallest `x`.
pub fn brute_force_best(
    ctx: &FieldCtx,
    gamma: &[u32],
    pred: Predicate,
) -> Result<RecurrenceResult> {
    let p = ctx.p();
    let mut best: Option<(Rational, u32)> = None;
    for x in 1..p {
        if !pred.holds(ctx, x) {
            continue;
        }
        let q = approximation_quality(p, gamma, x as u64);
        if best.as_ref().is_none_or(|(bq, _)| q < *bq) {
            best = Some((q, x));
        }
    }
    let (quality, x) = best.ok_or(Error::NoWitness)?;
    let root = match pred {
        Predicate::KthPower(k) => ctx.kth_root(x as u64, k)?,
        _ => None,
    };
    Ok(RecurrenceResult {
        x,
        root,
        quality,
        epsilon_used: quality,
        epsilon_initial: quality,
        escalations: 0,
        bound_value: f64::NAN,
    })
}
