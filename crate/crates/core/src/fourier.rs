//! Discrete Fourier analysis on (Z/pZ, +).
//!
//! Conventions: `f̂(t) = Σ_x f(x)·e_p(−tx)`, and every L^q norm carries
//! the normalizing factor `1/p`, i.e. `‖f‖_q = ((1/p)·Σ_x |f(x)|^q)^{1/q}`.
//! Under these conventions inversion reads `f(x) = (1/p)·Σ_t f̂(t)·e_p(tx)`.

use num_complex::Complex64;

use crate::bohr::BohrNormTable;
use crate::characters::Character;
use crate::error::{Error, Result};
use crate::sets::ResidueSet;
use crate::zp::FieldCtx;
use crate::Rational;

/// `f̂` as a length-p vector indexed by `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumVector {
    p: u32,
    values: Vec<Complex64>,
}

impl SpectrumVector {
    pub fn new(p: u32, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != p as usize {
            return Err(Error::LengthMismatch {
                expected: p as usize,
                got: values.len(),
            });
        }
        Ok(SpectrumVector { p, values })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

fn check_len(ctx: &FieldCtx, len: usize) -> Result<()> {
    if len != ctx.p() as usize {
        return Err(Error::LengthMismatch {
            expected: ctx.p() as usize,
            got: len,
        });
    }
    Ok(())
}

// Σ_x f(x)·e_p(sign·t·x) for every t, direct O(p²).
fn direct_transform(ctx: &FieldCtx, f: &[Complex64], sign: i64) -> Vec<Complex64> {
    let p = ctx.p();
    let roots = ctx.additive_roots();
    (0..p)
        .map(|t| {
            let step = if sign < 0 { (p - t) % p } else { t };
            let mut idx = 0u32;
            let mut acc = Complex64::new(0.0, 0.0);
            for &v in f {
                acc += v * roots[idx as usize];
                idx += step;
                if idx >= p {
                    idx -= p;
                }
            }
            acc
        })
        .collect()
}

/// `f̂(t) = Σ_x f(x)·e_p(−tx)`, evaluated straight from the definition.
pub fn dft(ctx: &FieldCtx, f: &[Complex64]) -> Result<SpectrumVector> {
    check_len(ctx, f.len())?;
    Ok(SpectrumVector {
        p: ctx.p(),
        values: direct_transform(ctx, f, -1),
    })
}

/// `1̂_A` in O(p·|A|).
pub fn dft_indicator(ctx: &FieldCtx, set: &ResidueSet) -> SpectrumVector {
    let p = ctx.p();
    let roots = ctx.additive_roots();
    let mut values = vec![Complex64::new(0.0, 0.0); p as usize];
    for a in set.iter() {
        // e_p(−t·a), t = 0, 1, …
        let step = (p - a) % p;
        let mut idx = 0u32;
        for v in values.iter_mut() {
            *v += roots[idx as usize];
            idx += step;
            if idx >= p {
                idx -= p;
            }
        }
    }
    SpectrumVector { p, values }
}

/// `f(x) = (1/p)·Σ_t F(t)·e_p(tx)`.
pub fn inverse_dft(ctx: &FieldCtx, spectrum: &SpectrumVector) -> Result<Vec<Complex64>> {
    check_len(ctx, spectrum.values.len())?;
    let scale = 1.0 / ctx.p() as f64;
    Ok(direct_transform(ctx, &spectrum.values, 1)
        .into_iter()
        .map(|v| v * scale)
        .collect())
}

/// `‖f‖_q = ((1/p)·Σ |f(x)|^q)^{1/q}` with `p = f.len()`.
///
/// Panics if `q < 1`.
pub fn lq_norm(f: &[Complex64], q: f64) -> f64 {
    assert!(q >= 1.0, "L^q norm needs q >= 1, got {q}");
    if f.is_empty() {
        return 0.0;
    }
    let mean = f.iter().map(|v| v.norm().powf(q)).sum::<f64>() / f.len() as f64;
    mean.powf(1.0 / q)
}

/// `‖1̂_I‖₁` for `I = [−n, n]` from the Dirichlet-kernel closed form
/// `|1̂_I(t)| = |sin(π(2n+1)t/p) / sin(πt/p)|`.
pub fn interval_l1_closed_form(p: u32, n: u32) -> f64 {
    let n = n.min((p - 1) / 2);
    let width = (2 * n + 1) as f64;
    let pf = p as f64;
    let tail: f64 = (1..p)
        .map(|t| {
            let a = std::f64::consts::PI * t as f64 / pf;
            ((width * a).sin() / a.sin()).abs()
        })
        .sum();
    (width + tail) / pf
}

/// The three sides of `|S(χ)| ≤ √p·‖1̂_B‖₁ ≤ √p·‖1̂_I‖₁^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PVChainReport {
    /// `|S(χ)|` over `B(Γ, ε)`.
    pub s_abs: f64,
    /// `√p·‖1̂_B‖₁`.
    pub mid: f64,
    /// `√p·‖1̂_I‖₁^d`.
    pub right: f64,
    /// `‖1̂_I‖₁` with `I = [−⌊εp⌋, ⌊εp⌋]`.
    pub interval_l1: f64,
    pub bohr_size: usize,
    pub rank: usize,
}

impl PVChainReport {
    /// The chain holds up to `1e−6·right`.
    pub fn holds(&self) -> bool {
        let tol = 1e-6 * self.right.max(1.0);
        self.s_abs <= self.mid + tol && self.mid <= self.right + tol
    }
}

/// Evaluates every quantity of the Pólya–Vinogradov chain for one instance.
pub fn pv_chain_report(
    ctx: &FieldCtx,
    gamma: &[u64],
    eps: &Rational,
    chi: &Character<'_>,
) -> Result<PVChainReport> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let spec = crate::bohr::BohrSpec::new(ctx.p(), gamma, *eps)?;
    let table = BohrNormTable::build(ctx, gamma)?;
    let b = table.bohr_set(&spec.eps);
    let n = table.threshold(&spec.eps).unwrap_or(0) as u32;
    let interval = ResidueSet::interval(ctx.p(), n);

    let sqrt_p = (ctx.p() as f64).sqrt();
    let b_l1 = lq_norm(dft_indicator(ctx, &b).values(), 1.0);
    let i_l1 = lq_norm(dft_indicator(ctx, &interval).values(), 1.0);
    let d = spec.rank();
    Ok(PVChainReport {
        s_abs: chi.sum_over(&b).norm(),
        mid: sqrt_p * b_l1,
        right: sqrt_p * i_l1.powi(d as i32),
        interval_l1: i_l1,
        bohr_size: b.len(),
        rank: d,
    })
}
