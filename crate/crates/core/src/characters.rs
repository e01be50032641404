//! Multiplicative characters of F_p^×.
//!
//! Characters are indexed by `j ∈ [0, p−2]` through the least primitive
//! root `g` of the field context: `χ_j(g^m) = e(jm/(p−1))` and `χ_j(0) = 0`.
//! This enumeration is a convention of this crate; reports that name a
//! character by index refer to it.

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::sets::ResidueSet;
use crate::zp::{self, FieldCtx};

pub type ComplexValue = Complex64;

/// The character `χ_j` over a shared field context.
#[derive(Clone, Copy, Debug)]
pub struct Character<'a> {
    ctx: &'a FieldCtx,
    j: u32,
}

impl PartialEq for Character<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p() == other.ctx.p() && self.j == other.j
    }
}

impl Eq for Character<'_> {}

impl FieldCtx {
    /// `χ_j` with `j` reduced mod `p − 1`.
    pub fn character(&self, j: u64) -> Character<'_> {
        Character {
            ctx: self,
            j: (j % self.group_order() as u64) as u32,
        }
    }

    /// All `p − 1` characters in index order.
    pub fn characters(&self) -> impl Iterator<Item = Character<'_>> + '_ {
        (0..self.group_order()).map(move |j| Character { ctx: self, j })
    }
}

impl<'a> Character<'a> {
    pub fn index(&self) -> u32 {
        self.j
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn is_trivial(&self) -> bool {
        self.j == 0
    }

    /// Least `l ≥ 1` with `χ^l` trivial: `(p−1)/gcd(j, p−1)`.
    pub fn order(&self) -> u32 {
        let n = self.ctx.group_order();
        n / self.j.gcd(&n)
    }

    /// Exponent `j·dlog(x) mod (p−1)`; `None` at zero.
    #[inline]
    pub(crate) fn phase(&self, x: u32) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let n = self.ctx.group_order() as u64;
        Some((self.j as u64 * self.ctx.dlog_unchecked(x) as u64 % n) as u32)
    }

    /// Phase index for `x` of `χ(x)`, i.e. `χ(x) = exp(2πi·phase/(p−1))`.
    #[inline]
    pub(crate) fn value_at_phase(&self, phase: u32) -> Complex64 {
        self.ctx.mult_roots()[phase as usize]
    }

    /// `χ(x)`, with `χ(0) = 0`.
    #[inline]
    pub fn eval(&self, x: u64) -> ComplexValue {
        match self.phase(self.ctx.reduce(x)) {
            None => Complex64::new(0.0, 0.0),
            Some(ph) => self.value_at_phase(ph),
        }
    }

    /// `τ(χ, −x) = Σ_y χ(y)·e_p(−xy)`, evaluated directly.
    pub fn gauss_sum(&self, x: u64) -> Result<ComplexValue> {
        if self.is_trivial() {
            return Err(Error::TrivialCharacter);
        }
        let p = self.ctx.p();
        let x = self.ctx.reduce(x);
        let roots = self.ctx.additive_roots();
        let step = if x == 0 { 0 } else { p - x };
        let mut idx = 0u32; // (−x·y) mod p
        let mut acc = Complex64::new(0.0, 0.0);
        for y in 1..p {
            idx += step;
            if idx >= p {
                idx -= p;
            }
            acc += self.eval(y as u64) * roots[idx as usize];
        }
        Ok(acc)
    }

    /// `S(χ) = Σ_{a∈A} χ(a)`.
    pub fn sum_over(&self, set: &ResidueSet) -> ComplexValue {
        set.iter().map(|a| self.eval(a as u64)).sum()
    }
}

fn check_divisor(ctx: &FieldCtx, k: u64) -> Result<u64> {
    let n = ctx.group_order() as u64;
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::NotDivisor { k, p_minus_one: n });
    }
    Ok(n / k)
}

/// The `k` characters trivial on the subgroup of k-th powers:
/// `{χ_j : j ≡ 0 mod (p−1)/k}`.
pub fn subgroup_dual(ctx: &FieldCtx, k: u64) -> Result<Vec<Character<'_>>> {
    let step = check_divisor(ctx, k)?;
    Ok((0..k).map(|i| ctx.character(i * step)).collect())
}

/// `Re((1/k)·Σ_{χ∈K^⊥} χ(x))`, the indicator of the k-th powers.
pub fn kth_power_indicator(ctx: &FieldCtx, k: u64, x: u64) -> Result<f64> {
    let dual = subgroup_dual(ctx, k)?;
    let total: Complex64 = dual.iter().map(|chi| chi.eval(x)).sum();
    Ok(total.re / k as f64)
}

/// Characters of order exactly `d`: `{χ_j : gcd(j, p−1) = (p−1)/d}`.
pub fn characters_of_order(ctx: &FieldCtx, d: u64) -> Result<Vec<Character<'_>>> {
    let step = check_divisor(ctx, d)?;
    Ok((0..d)
        .filter(|i| i.gcd(&d) == 1)
        .map(|i| ctx.character(i * step))
        .collect())
}

/// Indicator of the primitive roots through the expansion
/// `(φ(p−1)/(p−1))·Σ_{d|p−1} (μ(d)/φ(d))·Σ_{ord χ = d} χ(x)`.
pub fn primitive_root_indicator(ctx: &FieldCtx, x: u64) -> Result<f64> {
    if ctx.reduce(x) == 0 {
        return Err(Error::ZeroArgument);
    }
    let n = ctx.group_order() as u64;
    let mut acc = 0.0f64;
    for d in zp::divisors(n) {
        let mu = zp::mobius(d);
        if mu == 0 {
            continue;
        }
        let inner: Complex64 = characters_of_order(ctx, d)?
            .iter()
            .map(|chi| chi.eval(x))
            .sum();
        acc += mu as f64 / zp::totient(d) as f64 * inner.re;
    }
    Ok(zp::totient(n) as f64 / n as f64 * acc)
}
