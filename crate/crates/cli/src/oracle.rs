//! Brute-force reference implementations used by the verification suites.
//!
//! Nothing here touches the norm tables, dlog tables or transforms of the
//! core crate; every quantity is recomputed from its definition.

use std::f64::consts::TAU;

use num_complex::Complex64;

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `min(xr mod p, p − xr mod p)`, maximized over `r ∈ Γ`.
pub fn bohr_norm(p: u32, gamma: &[u32], x: u32) -> u64 {
    gamma
        .iter()
        .map(|&r| {
            let t = x as u64 * r as u64 % p as u64;
            t.min(p as u64 - t)
        })
        .max()
        .unwrap_or(0)
}

/// Membership `N(x)·den ≤ num·p`.
pub fn in_bohr(p: u32, gamma: &[u32], num: i128, den: i128, x: u32) -> bool {
    bohr_norm(p, gamma, x) as i128 * den <= num * p as i128
}

pub fn bohr_members(p: u32, gamma: &[u32], num: i128, den: i128) -> Vec<u32> {
    (0..p).filter(|&x| in_bohr(p, gamma, num, den, x)).collect()
}

/// Multiplicative order of a nonzero `x` by repeated multiplication.
pub fn mult_order(p: u32, x: u32) -> u64 {
    let (p, x) = (p as u64, x as u64 % p as u64);
    let mut y = x;
    let mut n = 1;
    while y != 1 {
        y = y * x % p;
        n += 1;
    }
    n
}

/// Euler-style criterion: `x^{(p−1)/gcd(k,p−1)} = 1`.
pub fn is_kth_power(p: u32, k: u64, x: u32) -> bool {
    let n = p as u64 - 1;
    !(x as u64).is_multiple_of(p as u64) && pow_mod(x as u64, n / gcd(k, n), p as u64) == 1
}

pub fn is_primitive_root(p: u32, x: u32) -> bool {
    !(x as u64).is_multiple_of(p as u64) && mult_order(p, x) == p as u64 - 1
}

/// `max_r ‖xr/p‖` as `(numerator, p)`.
pub fn quality_numerator(p: u32, gamma: &[u32], x: u32) -> u64 {
    bohr_norm(p, gamma, x)
}

/// Direct `O(p²)` transform `f̂(t) = Σ_x f(x)·e(−tx/p)` with angles reduced
/// exactly before the trigonometric call.
pub fn naive_dft(f: &[Complex64]) -> Vec<Complex64> {
    let p = f.len() as u64;
    (0..p)
        .map(|t| {
            f.iter()
                .enumerate()
                .map(|(x, &v)| {
                    let m = (p - t * x as u64 % p) % p;
                    v * Complex64::from_polar(1.0, TAU * m as f64 / p as f64)
                })
                .sum()
        })
        .collect()
}

/// Quadruple count `#{a₁b₁ = a₂b₂}`.
pub fn energy_quadruples(p: u32, a: &[u32], b: &[u32]) -> u128 {
    let p = p as u64;
    let mut n = 0u128;
    for &a1 in a {
        for &a2 in a {
            for &b1 in b {
                for &b2 in b {
                    if a1 as u64 * b1 as u64 % p == a2 as u64 * b2 as u64 % p {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// Sorted Bohr norms of all residues, from the definition.
pub fn sorted_norms(p: u32, gamma: &[u32]) -> Vec<u64> {
    let mut v: Vec<u64> = (0..p).map(|x| bohr_norm(p, gamma, x)).collect();
    v.sort_unstable();
    v
}

/// Regularity decided on the grid `κ = j/G`, `|κ| < 1/(100d)`, with
/// `G = 100d·p·refine`. Each radius `(1+κ)ε` is compared exactly.
pub fn grid_regular(p: u32, gamma: &[u32], num: i128, den: i128, refine: i128) -> bool {
    let norms = sorted_norms(p, gamma);
    let count = |n_num: i128, n_den: i128| -> i128 {
        // #{x : N(x)·n_den ≤ n_num·p}
        norms.partition_point(|&n| n as i128 * n_den <= n_num * p as i128) as i128
    };
    let hd = 100 * gamma.len() as i128;
    let g = hd * p as i128 * refine;
    let s0 = count(num, den);
    let reach = g / hd; // |j| < G/(100d)
    for j in -(reach - 1)..reach {
        let s = count((g + j) * num, g * den);
        let spread = hd * j.abs();
        if s * g < s0 * (g - spread) || s * g > s0 * (g + spread) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(bohr_members(7, &[1], 1, 7), vec![0, 1, 6]);
        assert_eq!(bohr_members(13, &[1, 5], 2, 13), vec![0]);
        assert_eq!(bohr_norm(13, &[1, 5], 1), 5);
        assert!(is_primitive_root(7, 3) && is_primitive_root(7, 5) && !is_primitive_root(7, 2));
        assert!(is_kth_power(101, 2, 100) && !is_kth_power(101, 2, 2));
        assert_eq!(energy_quadruples(5, &[1, 2], &[1, 2]), 6);
        let f = vec![Complex64::new(1.0, 0.0); 5];
        let t = naive_dft(&f);
        assert!((t[0].re - 5.0).abs() < 1e-12 && t[1].norm() < 1e-12);
    }

    #[test]
    fn grid_matches_hand_cases() {
        assert!(grid_regular(101, &[1], 29, 202, 8));
        assert!(!grid_regular(101, &[1], 14, 101, 8));
    }
}
