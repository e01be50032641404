//! Exact arithmetic in the prime field F_p.
//!
//! A [`FieldCtx`] fixes the modulus, its least primitive root `g`, and the
//! full discrete-logarithm table. Every other module evaluates characters
//! through this table, so construction is O(p) in time and memory and the
//! modulus is capped at 2^31.

use std::sync::OnceLock;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest modulus accepted by [`FieldCtx::new`].
pub const MAX_MODULUS: u64 = 1 << 31;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(q, _)| acc / q * (q - 1))
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (q, e) in factorize(n) {
        let len = out.len();
        let mut qk = 1;
        for _ in 0..e {
            qk *= q;
            for i in 0..len {
                out.push(out[i] * qk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Distance from `x/p` to the nearest integer, in units of `1/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScaledNorm(pub u32);

impl ScaledNorm {
    pub fn value(self) -> u32 {
        self.0
    }
}

/// `‖x/p‖·p = min(x, p − x)` for `x` reduced mod `p`.
#[inline]
pub fn scaled_norm(x: u64, p: u32) -> ScaledNorm {
    let x = (x % p as u64) as u32;
    ScaledNorm(x.min(p - x))
}

/// Evaluation context for F_p: modulus, least primitive root and
/// discrete-log tables. Immutable once built.
#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    g: u32,
    // dlog[x] = m with g^m = x; dlog[0] is unused.
    dlog: Vec<u32>,
    // pow_g[m] = g^m for m in [0, p-2].
    pow_g: Vec<u32>,
    p_minus_one_factors: Vec<(u64, u32)>,
    additive_roots: OnceLock<Vec<Complex64>>,
    mult_roots: OnceLock<Vec<Complex64>>,
}

impl FieldCtx {
    /// Build the context for the prime `p`, 3 ≤ p ≤ 2^31.
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::TooLarge(p));
        }
        if p < 3 {
            return Err(if p == 2 {
                Error::TooSmall(p)
            } else {
                Error::NotPrime(p)
            });
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order = p - 1;
        let p_minus_one_factors = factorize(order);
        let g = (2..p)
            .find(|&c| {
                p_minus_one_factors
                    .iter()
                    .all(|&(q, _)| pow_mod(c, order / q, p) != 1)
            })
            .expect("a prime modulus has a primitive root") as u32;

        let n = p as usize;
        let mut pow_g = Vec::with_capacity(n - 1);
        let mut dlog = vec![u32::MAX; n];
        let mut acc = 1u64;
        for m in 0..(n - 1) {
            pow_g.push(acc as u32);
            dlog[acc as usize] = m as u32;
            acc = acc * g as u64 % p;
        }
        Ok(FieldCtx {
            p: p as u32,
            g,
            dlog,
            pow_g,
            p_minus_one_factors,
            additive_roots: OnceLock::new(),
            mult_roots: OnceLock::new(),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// The least primitive root.
    #[inline]
    pub fn generator(&self) -> u32 {
        self.g
    }

    /// Order of the multiplicative group, `p − 1`.
    #[inline]
    pub fn group_order(&self) -> u32 {
        self.p - 1
    }

    /// Prime factorization of `p − 1`.
    pub fn group_order_factors(&self) -> &[(u64, u32)] {
        &self.p_minus_one_factors
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        (x % self.p as u64) as u32
    }

    /// Exponent `m ∈ [0, p−2]` with `g^m ≡ x`.
    pub fn discrete_log(&self, x: u64) -> Result<u32> {
        let x = self.reduce(x);
        if x == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(self.dlog[x as usize])
    }

    /// Table lookup without the zero check; `x` must be a nonzero residue.
    #[inline]
    pub(crate) fn dlog_unchecked(&self, x: u32) -> u32 {
        self.dlog[x as usize]
    }

    /// `g^m mod p` for any `m`.
    #[inline]
    pub fn pow_generator(&self, m: u64) -> u32 {
        self.pow_g[(m % (self.p as u64 - 1)) as usize]
    }

    pub fn pow(&self, x: u64, e: u64) -> u32 {
        pow_mod(x, e, self.p as u64) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inverse(&self, x: u64) -> Result<u32> {
        let m = self.discrete_log(x)? as u64;
        let order = self.p as u64 - 1;
        Ok(self.pow_generator((order - m) % order))
    }

    /// `x` is a k-th power iff `x^((p−1)/gcd(k, p−1)) ≡ 1`.
    pub fn is_kth_power(&self, x: u64, k: u64) -> Result<bool> {
        let x = self.reduce(x);
        if x == 0 {
            return Err(Error::ZeroArgument);
        }
        let order = self.p as u64 - 1;
        let l = k.gcd(&order);
        Ok(pow_mod(x as u64, order / l, self.p as u64) == 1)
    }

    /// True iff `x` has multiplicative order exactly `p − 1`.
    pub fn is_primitive_root(&self, x: u64) -> Result<bool> {
        let m = self.discrete_log(x)? as u64;
        Ok(m.gcd(&(self.p as u64 - 1)) == 1)
    }

    /// A k-th root of `x` if one exists.
    pub fn kth_root(&self, x: u64, k: u64) -> Result<Option<u32>> {
        let m = self.discrete_log(x)? as u64;
        let order = self.p as u64 - 1;
        let l = k.gcd(&order);
        if !m.is_multiple_of(l) {
            return Ok(None);
        }
        let modulus = order / l;
        if modulus == 1 {
            return Ok(Some(self.pow_generator(m / l)));
        }
        // solve (k/l)·t ≡ m/l (mod (p−1)/l)
        let kk = ((k / l) % modulus) as i128;
        let inv = mod_inverse_i128(kk, modulus as i128).expect("k/l is a unit");
        let t = ((m / l) as i128 * inv).rem_euclid(modulus as i128) as u64;
        Ok(Some(self.pow_generator(t)))
    }

    /// `e_p(m) = exp(2πi m/p)`, tabulated on first use.
    pub(crate) fn additive_roots(&self) -> &[Complex64] {
        self.additive_roots
            .get_or_init(|| unit_roots(self.p as usize))
    }

    /// `exp(2πi m/(p−1))`, tabulated on first use.
    pub(crate) fn mult_roots(&self) -> &[Complex64] {
        self.mult_roots
            .get_or_init(|| unit_roots(self.p as usize - 1))
    }

    /// `e_p(m)` for any integer `m`.
    #[inline]
    pub fn e_p(&self, m: i64) -> Complex64 {
        self.additive_roots()[m.rem_euclid(self.p as i64) as usize]
    }
}

fn unit_roots(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|m| {
            let (s, c) = (std::f64::consts::TAU * m as f64 / n as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

fn mod_inverse_i128(a: i128, m: i128) -> Option<i128> {
    let e = a.extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}
