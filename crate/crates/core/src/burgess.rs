//! The Burgess machinery: character sums of polynomials given by their
//! roots, Weil-bound checks, the Hölder inequality behind the Burgess
//! argument, the closed-form Bohr-set bound and the averaging step.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::additive::{mult_energy, product_rep_counts};
use crate::bohr::BohrNormTable;
use crate::characters::{Character, ComplexValue};
use crate::error::{Error, Result};
use crate::sets::ResidueSet;
use crate::zp::FieldCtx;
use crate::Rational;

/// A polynomial `Π (t − root)^multiplicity` with distinct roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSpec {
    roots: Vec<(u32, u64)>,
}

impl RootSpec {
    /// Roots are reduced mod `p`; zero multiplicities are dropped.
    pub fn new(p: u32, roots: &[(u64, u64)]) -> Result<Self> {
        let mut out: Vec<(u32, u64)> = Vec::with_capacity(roots.len());
        for &(c, m) in roots {
            let c = (c % p as u64) as u32;
            if out.iter().any(|&(r, _)| r == c) {
                return Err(Error::RepeatedRoot(c));
            }
            if m > 0 {
                out.push((c, m));
            }
        }
        Ok(RootSpec { roots: out })
    }

    /// `f_c(t) = (t−c₁)⋯(t−c_k)·(t−c_{k+1})^{p−2}⋯(t−c_{2k})^{p−2}`, the
    /// polynomial whose character sum expands `|Σ_c χ(t − c)|^{2k}`.
    /// Repeated entries of `c` merge into one root.
    pub fn burgess_shape(p: u32, c: &[u64]) -> Self {
        assert!(c.len().is_multiple_of(2), "c-vector must have even length");
        let k = c.len() / 2;
        let mut roots: Vec<(u32, u64)> = Vec::new();
        for (i, &ci) in c.iter().enumerate() {
            let ci = (ci % p as u64) as u32;
            let m = if i < k { 1 } else { p as u64 - 2 };
            match roots.iter_mut().find(|(r, _)| *r == ci) {
                Some(entry) => entry.1 += m,
                None => roots.push((ci, m)),
            }
        }
        RootSpec { roots }
    }

    pub fn roots(&self) -> &[(u32, u64)] {
        &self.roots
    }

    pub fn distinct_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn degree(&self) -> u64 {
        self.roots.iter().map(|&(_, m)| m).sum()
    }

    /// True iff every multiplicity is divisible by `l`.
    pub fn is_lth_power(&self, l: u64) -> bool {
        self.roots.iter().all(|&(_, m)| m % l == 0)
    }
}

/// `Σ_{x∈F_p} χ(Π (x − c)^m)`, direct O(p·#roots).
pub fn poly_char_sum(chi: &Character<'_>, f: &RootSpec) -> Result<ComplexValue> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let ctx = chi.ctx();
    let p = ctx.p();
    let n = ctx.group_order() as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    'x: for x in 0..p {
        // dlog of the product = Σ m·dlog(x − c) mod (p − 1)
        let mut log = 0u64;
        for &(c, m) in &f.roots {
            let diff = if x >= c { x - c } else { x + p - c };
            if diff == 0 {
                continue 'x;
            }
            log = (log + (m % n) * ctx.discrete_log(diff as u64)? as u64) % n;
        }
        let phase = chi.phase(ctx.pow_generator(log)).expect("nonzero");
        acc += chi.value_at_phase(phase);
    }
    Ok(acc)
}

/// Weil's bound applied to one polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeilCheck {
    pub value: ComplexValue,
    /// `r·√p`, `r` the number of distinct roots.
    pub bound: f64,
    pub is_lth_power: bool,
    /// Vacuously true for l-th powers.
    pub pass: bool,
}

pub fn weil_check(chi: &Character<'_>, f: &RootSpec) -> Result<WeilCheck> {
    let value = poly_char_sum(chi, f)?;
    let l = chi.order() as u64;
    let bound = f.distinct_roots() as f64 * (chi.ctx().p() as f64).sqrt();
    let is_lth_power = f.is_lth_power(l);
    let pass = is_lth_power || value.norm() <= bound * (1.0 + 1e-12) + 1e-9;
    Ok(WeilCheck {
        value,
        bound,
        is_lth_power,
        pass,
    })
}

/// Both sides of the Hölder/Weil inequality
/// `Σ_x r(x)|Σ_{c∈C} χ(x+c)| ≤ T₁^{1−1/k}·(E(A,A)E(B,B))^{1/4k}·T₃^{1/2k}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgessSides {
    pub lhs: f64,
    pub rhs: f64,
    /// `|A|·|B|`.
    pub t1: f64,
    /// `E_×(A, B)`.
    pub t2: f64,
    /// Closed-form bound `|C|^{2k}·2k√p + (2k|C|)^k·p` on `T₃`.
    pub t3: f64,
    /// `T₃ = Σ_x |Σ_{c∈C} χ(x+c)|^{2k}` computed exactly.
    pub t3_exact: f64,
    /// `E_×(A,A)^{1/4k}·E_×(B,B)^{1/4k}` after Cauchy–Schwarz.
    pub energy_factor: f64,
}

impl BurgessSides {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-6 * self.rhs.max(1.0)
    }
}

pub fn basic_burgess_sides(
    chi: &Character<'_>,
    a: &ResidueSet,
    b: &ResidueSet,
    c: &ResidueSet,
    k: u32,
) -> Result<BurgessSides> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    assert!(k >= 1, "k must be positive");
    let ctx = chi.ctx();
    let p = ctx.p();
    let reps = product_rep_counts(a, b);

    // inner sums s(x) = Σ_c χ(x + c) for every x
    let inner: Vec<Complex64> = (0..p)
        .map(|x| c.iter().map(|cc| chi.eval(x as u64 + cc as u64)).sum())
        .collect();
    let lhs: f64 = reps
        .iter()
        .map(|(x, r)| r as f64 * inner[x as usize].norm())
        .sum();
    let t3_exact: f64 = inner.iter().map(|s| s.norm().powi(2 * k as i32)).sum();

    let kf = k as f64;
    let t1 = (a.len() * b.len()) as f64;
    let t2 = reps.sum_of_squares() as f64;
    let ea = mult_energy(a, a) as f64;
    let eb = mult_energy(b, b) as f64;
    let cf = c.len() as f64;
    let pf = p as f64;
    let t3 = cf.powf(2.0 * kf) * 2.0 * kf * pf.sqrt() + (2.0 * kf * cf).powf(kf) * pf;
    let energy_factor = ea.powf(1.0 / (4.0 * kf)) * eb.powf(1.0 / (4.0 * kf));
    let rhs = if t1 == 0.0 {
        0.0
    } else {
        t1.powf(1.0 - 1.0 / kf) * energy_factor * t3.powf(1.0 / (2.0 * kf))
    };
    Ok(BurgessSides {
        lhs,
        rhs,
        t1,
        t2,
        t3,
        t3_exact,
        energy_factor,
    })
}

/// Closed-form evaluation of the two Burgess-type bounds for Bohr sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgessBound {
    /// Regime `|B| ≥ √p`: last factor `(p/|B|)^{−1/8k}`.
    pub large_regime: f64,
    /// Regime `|B| < √p`: last factor `(|B|⁵/p²)^{−1/8k}`.
    pub small_regime: f64,
}

/// `constant·|B|·p^{5d/16k²}·(|B|/(ε^d p))^{5/16k}·L`, with the `o(1)` in
/// the exponent taken as 0. Evaluated in logarithms.
pub fn burgess_bound(
    p: u32,
    d: usize,
    k: u32,
    bohr_size: usize,
    eps: &Rational,
    constant: f64,
) -> BurgessBound {
    let (lp, lb) = ((p as f64).ln(), (bohr_size as f64).ln());
    let (kf, df) = (k as f64, d as f64);
    let ln_eps = ratio_ln(eps);
    let common = constant.ln()
        + lb
        + 5.0 * df / (16.0 * kf * kf) * lp
        + 5.0 / (16.0 * kf) * (lb - df * ln_eps - lp);
    let large = common - 1.0 / (8.0 * kf) * (lp - lb);
    let small = common - 1.0 / (8.0 * kf) * (5.0 * lb - 2.0 * lp);
    BurgessBound {
        large_regime: large.exp(),
        small_regime: small.exp(),
    }
}

fn ratio_ln(r: &Rational) -> f64 {
    let num = r.numer().to_f64().unwrap_or(f64::NAN);
    let den = r.denom().to_f64().unwrap_or(f64::NAN);
    num.ln() - den.ln()
}

/// Consecutive blocks of `set`, each of size at most `⌈√p⌉ − 1`, using the
/// fewest blocks and balancing their sizes. Every block then has at least
/// `⌊(⌈√p⌉ − 1)/2⌋` elements once `|set| ≥ ⌈√p⌉`.
pub fn split_into_blocks(set: &ResidueSet) -> Vec<ResidueSet> {
    let p = set.p();
    let hi = ((p as f64).sqrt().ceil() as usize).saturating_sub(1).max(1);
    let elems = set.as_slice();
    let count = elems.len().div_ceil(hi).max(1);
    let (base, extra) = (elems.len() / count, elems.len() % count);
    let mut blocks = Vec::with_capacity(count);
    let mut start = 0;
    for i in 0..count {
        let take = base + usize::from(i < extra);
        blocks.push(ResidueSet::new(
            p,
            elems[start..start + take].iter().map(|&x| x as u64),
        ));
        start += take;
    }
    blocks
}

/// `{b⁻¹ : b ∈ B, b ≠ 0}`.
pub fn inverse_set(ctx: &FieldCtx, set: &ResidueSet) -> ResidueSet {
    ResidueSet::new(
        ctx.p(),
        set.iter()
            .filter(|&x| x != 0)
            .map(|x| ctx.inverse(x as u64).expect("nonzero") as u64),
    )
}

/// One instance of the shift-averaging step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingDiagnostic {
    /// `S(χ)` over `B(Γ, ε)`.
    pub s: ComplexValue,
    /// `Σ_{x∈B} χ(x − ny)`.
    pub shifted: ComplexValue,
    /// Exact translation defect for the shift `ny`.
    pub defect: usize,
    /// `n·p^{−1/k}·|B|`.
    pub defect_bound: f64,
    /// `η = p^{−1/k}·ε/(200d)`.
    pub eta: f64,
}

impl AveragingDiagnostic {
    pub fn holds(&self) -> bool {
        let gap = (self.s - self.shifted).norm();
        gap <= self.defect as f64 + 1e-8 && (self.defect as f64) <= self.defect_bound + 1e-8
    }
}

/// Largest admissible `n` for a given `k`: `⌊p^{1/2k}⌋`.
pub fn max_shift_multiplier(p: u32, k: u32) -> u64 {
    let mut n = (p as f64).powf(1.0 / (2.0 * k as f64)).floor() as u64;
    // guard against pow rounding at perfect powers
    while ((n + 1) as f64).powi(2 * k as i32) <= p as f64 {
        n += 1;
    }
    while n > 0 && (n as f64).powi(2 * k as i32) > p as f64 {
        n -= 1;
    }
    n
}

/// `⌊ηp⌋` for `η = p^{−1/k}·ε/(200d)`: the Bohr-norm cutoff of `B(Γ, η)`.
pub fn averaging_shift_threshold(p: u32, d: usize, k: u32, eps: &Rational) -> (f64, u64) {
    let eps_f = ratio_ln(eps).exp();
    let eta = (p as f64).powf(-1.0 / k as f64) * eps_f / (200.0 * d as f64);
    (eta, (eta * p as f64).floor() as u64)
}

pub fn averaging_diagnostic(
    chi: &Character<'_>,
    table: &BohrNormTable,
    eps: &Rational,
    k: u32,
    n: u64,
    y: u32,
) -> Result<AveragingDiagnostic> {
    if !table.is_regular(eps)?.regular {
        return Err(Error::NotRegular);
    }
    let ctx = chi.ctx();
    let p = ctx.p();
    let y = y % p;
    let (eta, cutoff) = averaging_shift_threshold(p, table.rank(), k, eps);
    if table.norm(y) as u64 > cutoff {
        return Err(Error::ShiftOutOfRange(y));
    }
    let max_n = max_shift_multiplier(p, k);
    if n > max_n {
        return Err(Error::MultiplierOutOfRange { n, max: max_n });
    }
    let b = table.bohr_set(eps);
    let shift = (n % p as u64 * y as u64 % p as u64) as u32;
    let s = chi.sum_over(&b);
    let shifted: Complex64 = b
        .iter()
        .map(|x| chi.eval(ctx.add(x, ctx.neg(shift)) as u64))
        .sum();
    let defect = table.translation_defect(eps, &[shift]);
    let defect_bound = n as f64 * (p as f64).powf(-1.0 / k as f64) * b.len() as f64;
    Ok(AveragingDiagnostic {
        s,
        shifted,
        defect,
        defect_bound,
        eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_sum_examples() {
        let ctx = FieldCtx::new(13).unwrap();
        let chi = ctx.character(6);
        assert_eq!(chi.order(), 2);
        // f = x(x + 1): roots 0 and −1
        let f = RootSpec::new(13, &[(0, 1), (12, 1)]).unwrap();
        let v = poly_char_sum(&chi, &f).unwrap();
        // direct 13-term Legendre sum
        let legendre = |a: u64| -> i64 {
            let a = a % 13;
            if a == 0 {
                0
            } else if (1..13u64).any(|y| y * y % 13 == a) {
                1
            } else {
                -1
            }
        };
        let oracle: i64 = (0..13u64).map(|x| legendre(x * (x + 1))).sum();
        assert_eq!(oracle, -1);
        assert!((v.re + 1.0).abs() <= 1e-9 && v.im.abs() <= 1e-9);

        let sq = RootSpec::new(13, &[(5, 2)]).unwrap();
        let v = poly_char_sum(&chi, &sq).unwrap();
        assert!((v.re - 12.0).abs() <= 1e-9);
        assert_eq!(
            poly_char_sum(&ctx.character(0), &f),
            Err(Error::TrivialCharacter)
        );
    }

    #[test]
    fn weil_examples() {
        let ctx = FieldCtx::new(13).unwrap();
        let chi = ctx.character(6);
        let w = weil_check(&chi, &RootSpec::new(13, &[(0, 1), (12, 1)]).unwrap()).unwrap();
        assert!(w.pass && !w.is_lth_power);
        assert!((w.bound - 2.0 * 13f64.sqrt()).abs() <= 1e-12);
        let w = weil_check(&chi, &RootSpec::new(13, &[(3, 2)]).unwrap()).unwrap();
        assert!(w.is_lth_power && w.pass);
    }

    #[test]
    fn lth_power_pattern_sums_to_p_minus_roots() {
        let ctx = FieldCtx::new(31).unwrap();
        for chi in ctx.characters().skip(1) {
            let l = chi.order() as u64;
            let f = RootSpec::new(31, &[(2, l), (9, 2 * l), (30, l)]).unwrap();
            let v = poly_char_sum(&chi, &f).unwrap();
            assert!((v - Complex64::new(28.0, 0.0)).norm() <= 1e-8);
        }
    }

    #[test]
    fn burgess_shape_merges_roots() {
        let f = RootSpec::burgess_shape(11, &[1, 2, 1, 3]);
        assert_eq!(f.roots(), &[(1, 10), (2, 1), (3, 9)]);
        let g = RootSpec::burgess_shape(11, &[4, 4]);
        assert_eq!(g.roots(), &[(4, 10)]);
        assert!(g.is_lth_power(10) && g.is_lth_power(5));
        assert!(RootSpec::new(11, &[(1, 1), (12, 2)]).is_err());
    }

    #[test]
    fn conjugate_factor_matches_burgess_expansion() {
        // Σ_x |Σ_c χ(x + c)|² = Σ_{c1,c2} Σ_x χ(f_c(x)) with f_c built from −c
        let ctx = FieldCtx::new(41).unwrap();
        let chi = ctx.character(3);
        let c = [0u64, 5, 17];
        let direct: f64 = (0..41u64)
            .map(|x| {
                c.iter()
                    .map(|&cc| chi.eval(x + cc))
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum();
        let mut expanded = Complex64::new(0.0, 0.0);
        for &c1 in &c {
            for &c2 in &c {
                let f = RootSpec::burgess_shape(41, &[(41 - c1) % 41, (41 - c2) % 41]);
                expanded += poly_char_sum(&chi, &f).unwrap();
            }
        }
        assert!((expanded.re - direct).abs() <= 1e-8 && expanded.im.abs() <= 1e-8);
    }

    #[test]
    fn basic_burgess_examples() {
        let ctx = FieldCtx::new(101).unwrap();
        let chi = ctx.character(1);
        let empty = ResidueSet::empty(101);
        let abc = ResidueSet::new(101, [1, 2, 3]);
        let c = ResidueSet::new(101, [0, 1, 2]);
        let s = basic_burgess_sides(&chi, &empty, &abc, &c, 2).unwrap();
        assert_eq!((s.lhs, s.rhs), (0.0, 0.0));
        assert!(s.holds());

        let s = basic_burgess_sides(&chi, &abc, &abc, &c, 2).unwrap();
        assert!(s.holds());
        assert!(s.t3_exact <= s.t3);
        // oracle: straight from the definition
        let mut lhs = 0.0;
        for x in 0..101u64 {
            let r = (1..=3u64)
                .flat_map(|a| (1..=3u64).map(move |b| a * b % 101))
                .filter(|&v| v == x)
                .count() as f64;
            let inner: Complex64 = (0..3u64).map(|cc| chi.eval(x + cc)).sum();
            lhs += r * inner.norm();
        }
        assert!((s.lhs - lhs).abs() <= 1e-9);
        let e = mult_energy(&abc, &abc) as f64;
        let t3 = 81.0 * 4.0 * 101f64.sqrt() + 144.0 * 101.0;
        let rhs = 9f64.powf(0.5) * e.powf(0.125) * e.powf(0.125) * t3.powf(0.25);
        assert!((s.rhs - rhs).abs() <= 1e-9 * rhs);
    }

    #[test]
    fn burgess_bound_formula() {
        let eps = Rational::new(1, 20);
        let (p, d, k, b) = (10_007u32, 2usize, 3u32, 400usize);
        let out = burgess_bound(p, d, k, b, &eps, 1.0);
        let (pf, bf, kf, df) = (p as f64, b as f64, k as f64, d as f64);
        let base = bf
            * pf.powf(5.0 * df / (16.0 * kf * kf))
            * (bf / (0.05f64.powf(df) * pf)).powf(5.0 / (16.0 * kf));
        let large = base * (pf / bf).powf(-1.0 / (8.0 * kf));
        let small = base * (bf.powi(5) / (pf * pf)).powf(-1.0 / (8.0 * kf));
        assert!((out.large_regime - large).abs() <= 1e-9 * large);
        assert!((out.small_regime - small).abs() <= 1e-9 * small);
        let doubled = burgess_bound(p, d, k, b, &eps, 2.0);
        assert!((doubled.large_regime - 2.0 * out.large_regime).abs() <= 1e-9 * large);
        assert!((doubled.small_regime - 2.0 * out.small_regime).abs() <= 1e-9 * small);
    }

    #[test]
    fn blocks_have_sqrt_p_sizes() {
        let p = 10_007u32;
        let root = (p as f64).sqrt().ceil() as usize; // 101
        for n in [30usize, 100, 101, 150, 1000, 4321] {
            let set = ResidueSet::new(p, 0..n as u64);
            let blocks = split_into_blocks(&set);
            let total: usize = blocks.iter().map(|b| b.len()).sum();
            assert_eq!(total, n);
            for b in &blocks {
                assert!(b.len() < root, "n={n} {}", b.len());
                if n >= root {
                    assert!(b.len() >= (root - 1) / 2, "n={n} {}", b.len());
                }
            }
        }
    }

    #[test]
    fn inverse_set_drops_zero() {
        let ctx = FieldCtx::new(11).unwrap();
        let s = inverse_set(&ctx, &ResidueSet::new(11, [0, 1, 2, 10]));
        assert_eq!(s.as_slice(), &[1, 6, 10]);
    }

    #[test]
    fn averaging_trivial_shifts() {
        let p = 100_003u32;
        let ctx = FieldCtx::new(p as u64).unwrap();
        let table = BohrNormTable::build(&ctx, &[1]).unwrap();
        let eps = table.find_regular_value(&Rational::new(1, 10)).unwrap();
        let chi = ctx.character(7);
        let (_, cutoff) = averaging_shift_threshold(p, 1, 3, &eps);
        assert!(cutoff >= 1);
        let diag = averaging_diagnostic(&chi, &table, &eps, 3, 3, 0).unwrap();
        assert_eq!(diag.s, diag.shifted);
        let diag = averaging_diagnostic(&chi, &table, &eps, 3, 0, 1).unwrap();
        assert_eq!(diag.s, diag.shifted);
        let diag = averaging_diagnostic(&chi, &table, &eps, 3, 2, p - 1).unwrap();
        assert!(diag.holds());
        assert_eq!(diag.defect, 4);

        let not_regular = Rational::new(100, p as i128);
        assert_eq!(
            averaging_diagnostic(&chi, &table, &not_regular, 3, 1, 0).unwrap_err(),
            Error::NotRegular
        );
        assert_eq!(
            averaging_diagnostic(&chi, &table, &eps, 3, 1, 500).unwrap_err(),
            Error::ShiftOutOfRange(500)
        );
        assert!(matches!(
            averaging_diagnostic(&chi, &table, &eps, 3, 1000, 0),
            Err(Error::MultiplierOutOfRange { .. })
        ));
    }

    #[test]
    fn shift_multiplier_cap() {
        assert_eq!(max_shift_multiplier(101, 1), 10);
        assert_eq!(max_shift_multiplier(10_007, 1), 100);
        assert_eq!(max_shift_multiplier(10_007, 2), 10);
        assert_eq!(max_shift_multiplier(4, 1), 2);
    }
}
