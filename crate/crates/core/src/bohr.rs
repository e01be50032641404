//! Bohr sets `B(Γ, ε) = {x : ‖xr/p‖ ≤ ε for every r ∈ Γ}`.
//!
//! Everything is driven by the Bohr norm `N(x) = max_{r∈Γ} min(xr, p − xr)`,
//! an integer in units of `1/p`. Membership is `N(x) ≤ εp`, so for a fixed Γ
//! the size `|B(Γ, ε)|` is a right-continuous step function of `ε` that only
//! jumps at radii `m/p` with `m` a value of `N`. Those jump points are the
//! *breakpoints*; regularity is decided exactly by examining them with
//! rational arithmetic, never by sampling.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::sets::ResidueSet;
use crate::zp::{scaled_norm, FieldCtx};
use crate::Rational;

/// Frequencies and radius of a Bohr set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BohrSpec {
    pub gamma: Vec<u32>,
    pub eps: Rational,
}

impl BohrSpec {
    /// Validates Γ (nonempty, nonzero mod p, distinct) and `0 < ε ≤ 1/2`.
    pub fn new(p: u32, gamma: &[u64], eps: Rational) -> Result<Self> {
        let gamma = validate_gamma(p, gamma)?;
        if !eps.is_positive() || eps > Rational::new(1, 2) {
            return Err(Error::InvalidRadius);
        }
        Ok(BohrSpec { gamma, eps })
    }

    pub fn rank(&self) -> usize {
        self.gamma.len()
    }
}

fn validate_gamma(p: u32, gamma: &[u64]) -> Result<Vec<u32>> {
    if gamma.is_empty() {
        return Err(Error::EmptyGamma);
    }
    let mut out: Vec<u32> = Vec::with_capacity(gamma.len());
    for &r in gamma {
        let r = (r % p as u64) as u32;
        if r == 0 {
            return Err(Error::ZeroFrequency);
        }
        if out.contains(&r) {
            return Err(Error::DuplicateFrequency(r));
        }
        out.push(r);
    }
    Ok(out)
}

/// Outcome of an exact regularity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityVerdict {
    pub regular: bool,
    /// κ at which the two-sided bound is tightest (or violated); 0 when the
    /// κ-window holds no breakpoint.
    pub worst_kappa: Rational,
    /// `|B(Γ,(1+κ)ε)| / |B(Γ,ε)|` at `worst_kappa` (one-sided limit from below
    /// for κ < 0).
    pub worst_ratio: Rational,
    /// Signed slack of the violated-or-tightest constraint; negative iff not
    /// regular.
    pub worst_margin: Rational,
    /// Number of breakpoints examined.
    pub checked: usize,
}

/// Per-residue Bohr norms for a fixed Γ.
#[derive(Debug, Clone)]
pub struct BohrNormTable {
    p: u32,
    gamma: Vec<u32>,
    norms: Vec<u32>,
    sorted_norms: Vec<u32>,
    // residues ordered by (norm, residue)
    by_norm: Vec<u32>,
}

impl BohrNormTable {
    /// O(d·p) construction of `N(x) = max_{r∈Γ} scaled_norm(xr)`.
    pub fn build(ctx: &FieldCtx, gamma: &[u64]) -> Result<Self> {
        let p = ctx.p();
        let gamma = validate_gamma(p, gamma)?;
        let mut norms = vec![0u32; p as usize];
        for &r in &gamma {
            // walk xr mod p incrementally
            let mut xr = 0u32;
            for n in norms.iter_mut() {
                let v = xr.min(p - xr);
                if v > *n {
                    *n = v;
                }
                xr += r;
                if xr >= p {
                    xr -= p;
                }
            }
        }
        let mut by_norm: Vec<u32> = (0..p).collect();
        by_norm.sort_by_key(|&x| (norms[x as usize], x));
        let sorted_norms = by_norm.iter().map(|&x| norms[x as usize]).collect();
        Ok(BohrNormTable {
            p,
            gamma,
            norms,
            sorted_norms,
            by_norm,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn gamma(&self) -> &[u32] {
        &self.gamma
    }

    /// `d = |Γ|`.
    pub fn rank(&self) -> usize {
        self.gamma.len()
    }

    #[inline]
    pub fn norm(&self, x: u32) -> u32 {
        self.norms[(x % self.p) as usize]
    }

    pub fn norms(&self) -> &[u32] {
        &self.norms
    }

    pub fn sorted_norms(&self) -> &[u32] {
        &self.sorted_norms
    }

    /// Residues in increasing Bohr norm, ties by residue.
    pub fn by_norm(&self) -> &[u32] {
        &self.by_norm
    }

    /// Largest integer `m` with `m ≤ εp`, or `None` when `ε < 0`.
    pub fn threshold(&self, eps: &Rational) -> Option<u64> {
        threshold(eps, self.p)
    }

    pub fn contains(&self, x: u32, eps: &Rational) -> bool {
        match self.threshold(eps) {
            Some(t) => self.norm(x) as u64 <= t,
            None => false,
        }
    }

    /// `#{x : N(x) ≤ m}`.
    pub fn size_at_most(&self, m: u64) -> usize {
        self.sorted_norms.partition_point(|&n| n as u64 <= m)
    }

    /// `#{x : N(x) < m}`: the size just below the radius `m/p`.
    pub fn size_below(&self, m: u64) -> usize {
        self.sorted_norms.partition_point(|&n| (n as u64) < m)
    }

    /// `|B(Γ, ε)|` by binary search.
    pub fn size(&self, eps: &Rational) -> usize {
        self.threshold(eps).map_or(0, |t| self.size_at_most(t))
    }

    /// The Bohr set itself, sorted.
    pub fn bohr_set(&self, eps: &Rational) -> ResidueSet {
        let elems = match self.threshold(eps) {
            Some(t) => (0..self.p)
                .filter(|&x| self.norms[x as usize] as u64 <= t)
                .collect(),
            None => Vec::new(),
        };
        ResidueSet::from_sorted(self.p, elems)
    }

    /// Elements of `B(Γ, ε)` in increasing norm (ties by residue).
    pub fn members_by_norm(&self, eps: &Rational) -> &[u32] {
        &self.by_norm[..self.size(eps)]
    }

    /// Distinct radii `m/p` with `lo < m/p ≤ hi` at which membership changes.
    pub fn breakpoints(&self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        self.breakpoint_numerators(lo, hi)
            .map(|m| Rational::new(m as i128, self.p as i128))
            .collect()
    }

    fn breakpoint_numerators<'s>(
        &'s self,
        lo: &Rational,
        hi: &Rational,
    ) -> impl Iterator<Item = u32> + 's {
        // lo < m/p  ⇔  m > floor(lo·p)  (when lo ≥ 0)
        let start = match threshold(lo, self.p) {
            Some(t) => self.size_at_most(t),
            None => 0,
        };
        let end = threshold(hi, self.p).map_or(0, |t| self.size_at_most(t));
        let slice = if start < end {
            &self.sorted_norms[start..end]
        } else {
            &[][..]
        };
        let mut last = None;
        slice.iter().copied().filter(move |&m| {
            let fresh = last != Some(m);
            last = Some(m);
            fresh
        })
    }

    /// Exact regularity check of `ε` for all real `|κ| < 1/(100d)`.
    ///
    /// For κ ≥ 0 only the upper constraint can fail, and only at a
    /// breakpoint where the size steps up. For κ < 0 only the lower
    /// constraint can fail; on each constant piece it is tightest as the
    /// radius approaches the next breakpoint from below, so it is checked
    /// as that one-sided limit.
    pub fn is_regular(&self, eps: &Rational) -> Result<RegularityVerdict> {
        if !eps.is_positive() {
            return Err(Error::InvalidRadius);
        }
        let s0 = self.size(eps);
        if s0 == 0 {
            return Err(Error::EmptyBohrSet);
        }
        let s0 = s0 as i128;
        let hundred_d = 100 * self.rank() as i128;
        let one = Rational::one();
        let w = Rational::new(1, hundred_d);
        let p = self.p as i128;

        let mut verdict = RegularityVerdict {
            regular: true,
            worst_kappa: Rational::zero(),
            worst_ratio: Rational::one(),
            worst_margin: Rational::one(),
            checked: 0,
        };
        let mut record = |kappa: Rational, ratio: Rational, margin: Rational| {
            verdict.checked += 1;
            if margin < verdict.worst_margin {
                verdict.worst_margin = margin;
                verdict.worst_kappa = kappa;
                verdict.worst_ratio = ratio;
            }
        };

        // κ < 0: breakpoints b with (1 − w)ε < b ≤ ε
        let lower_edge = (one - w) * *eps;
        for m in self.breakpoint_numerators(&lower_edge, eps) {
            let b = Rational::new(m as i128, p);
            if b <= lower_edge {
                continue;
            }
            let kappa = b / *eps - one;
            let ratio = Rational::new(self.size_below(m as u64) as i128, s0);
            let bound = one + kappa * hundred_d; // 1 − 100d|κ|
            record(kappa, ratio, ratio - bound);
        }
        // κ > 0: breakpoints b with ε < b < (1 + w)ε
        let upper_edge = (one + w) * *eps;
        for m in self.breakpoint_numerators(eps, &upper_edge) {
            let b = Rational::new(m as i128, p);
            if b >= upper_edge {
                continue;
            }
            let kappa = b / *eps - one;
            let ratio = Rational::new(self.size_at_most(m as u64) as i128, s0);
            let bound = one + kappa * hundred_d;
            record(kappa, ratio, bound - ratio);
        }
        verdict.regular = !verdict.worst_margin.is_negative();
        Ok(verdict)
    }

    /// A regular value in `(δ, 2δ)`.
    ///
    /// Candidates, in order: midpoints of consecutive points of
    /// `δ < b₁ < … < b_n < 2δ` (breakpoints, bracketed by δ and 2δ), then
    /// the breakpoints themselves.
    pub fn find_regular_value(&self, delta: &Rational) -> Result<Rational> {
        let two_delta = *delta * 2;
        let bps: Vec<Rational> = self
            .breakpoints(delta, &two_delta)
            .into_iter()
            .filter(|b| *b < two_delta)
            .collect();
        let mut fence = Vec::with_capacity(bps.len() + 2);
        fence.push(*delta);
        fence.extend(bps.iter().copied());
        fence.push(two_delta);
        let two = Rational::from_integer(2);
        let midpoints = fence.windows(2).map(|w| (w[0] + w[1]) / two);
        for eps in midpoints.chain(bps.iter().copied()) {
            if self.is_regular(&eps)?.regular {
                return Ok(eps);
            }
        }
        Err(Error::NotFound {
            lo: delta.to_string(),
            hi: two_delta.to_string(),
        })
    }

    /// `#{x : 1_B(x + y₁ + … + y_n) ≠ 1_B(x)}` for `B = B(Γ, ε)`.
    pub fn translation_defect(&self, eps: &Rational, shifts: &[u32]) -> usize {
        let p = self.p as u64;
        let s = (shifts.iter().map(|&y| y as u64).sum::<u64>() % p) as u32;
        let Some(t) = self.threshold(eps) else {
            return 0;
        };
        let inside = |x: u32| self.norms[x as usize] as u64 <= t;
        (0..self.p)
            .filter(|&x| {
                let xs = if x + s >= self.p {
                    x + s - self.p
                } else {
                    x + s
                };
                inside(x) != inside(xs)
            })
            .count()
    }
}

/// `⌊εp⌋`, or `None` for negative ε.
pub fn threshold(eps: &Rational, p: u32) -> Option<u64> {
    if eps.is_negative() {
        return None;
    }
    let v = (eps.numer() * p as i128).div_euclid(*eps.denom());
    Some(v.min(p as i128) as u64)
}

/// `{x⁻¹·r : r ∈ Γ}`, so that `x·B(Γ, ε) = B(x⁻¹Γ, ε)`.
pub fn dilate(ctx: &FieldCtx, gamma: &[u64], x: u64) -> Result<Vec<u64>> {
    let inv = ctx.inverse(x)?;
    Ok(gamma
        .iter()
        .map(|&r| ctx.mul(inv, ctx.reduce(r)) as u64)
        .collect())
}

/// Exact test of `ε^d·p ≤ size`.
pub fn meets_size_lower_bound(eps: &Rational, d: usize, p: u32, size: usize) -> bool {
    let num = BigInt::from(*eps.numer()).pow(d as u32) * p;
    let den = BigInt::from(*eps.denom()).pow(d as u32) * size;
    num <= den
}

/// `max_{r∈Γ} ‖xr/p‖` as a rational.
pub fn approximation_quality(p: u32, gamma: &[u32], x: u64) -> Rational {
    let m = gamma
        .iter()
        .map(|&r| scaled_norm(x * r as u64, p).value())
        .max()
        .unwrap_or(0);
    Rational::new(m as i128, p as i128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn table(p: u64, gamma: &[u64]) -> BohrNormTable {
        BohrNormTable::build(&FieldCtx::new(p).unwrap(), gamma).unwrap()
    }

    // membership straight from the definition
    fn brute_set(p: u32, gamma: &[u64], eps: &Rational) -> Vec<u32> {
        (0..p)
            .filter(|&x| {
                gamma.iter().all(|&g| {
                    let v = (x as u64 * g % p as u64) as i128;
                    let dist = v.min(p as i128 - v);
                    Rational::new(dist, p as i128) <= *eps
                })
            })
            .collect()
    }

    #[test]
    fn norm_table_examples() {
        assert_eq!(table(7, &[1]).norms(), &[0, 1, 2, 3, 3, 2, 1]);
        assert_eq!(table(13, &[1, 5]).norm(1), 5);
        let ctx = FieldCtx::new(7).unwrap();
        assert_eq!(
            BohrNormTable::build(&ctx, &[0]).unwrap_err(),
            Error::ZeroFrequency
        );
        assert_eq!(
            BohrNormTable::build(&ctx, &[]).unwrap_err(),
            Error::EmptyGamma
        );
        assert_eq!(
            BohrNormTable::build(&ctx, &[7]).unwrap_err(),
            Error::ZeroFrequency
        );
        assert_eq!(
            BohrNormTable::build(&ctx, &[2, 9]).unwrap_err(),
            Error::DuplicateFrequency(2)
        );
    }

    #[test]
    fn norm_table_symmetry() {
        let t = table(101, &[3, 17, 40]);
        assert_eq!(t.norm(0), 0);
        for x in 1..101 {
            assert_eq!(t.norm(x), t.norm(101 - x));
        }
    }

    #[test]
    fn bohr_set_examples() {
        assert_eq!(table(7, &[1]).bohr_set(&r(1, 7)).as_slice(), &[0, 1, 6]);
        assert_eq!(table(13, &[1, 5]).bohr_set(&r(2, 13)).as_slice(), &[0]);
        assert_eq!(brute_set(13, &[1, 5], &r(2, 13)), vec![0]);
        assert_eq!(table(13, &[1, 5]).bohr_set(&r(1, 2)).len(), 13);
        assert_eq!(table(13, &[1, 5]).bohr_set(&r(3, 4)).len(), 13);
        assert_eq!(table(7, &[1]).size(&r(1, 7)), 3);
    }

    #[test]
    fn bohr_set_matches_definition() {
        for &(p, ref gamma) in &[
            (101u64, vec![1u64]),
            (211, vec![5, 77]),
            (97, vec![2, 30, 41]),
        ] {
            let t = table(p, gamma);
            for num in 0..=60 {
                let eps = r(num, 120);
                let set = t.bohr_set(&eps);
                assert_eq!(set.as_slice(), brute_set(p as u32, gamma, &eps).as_slice());
                assert_eq!(t.size(&eps), set.len());
            }
        }
    }

    #[test]
    fn breakpoints_examples() {
        let t = table(7, &[1]);
        assert_eq!(
            t.breakpoints(&r(0, 1), &r(1, 2)),
            vec![r(1, 7), r(2, 7), r(3, 7)]
        );
        assert!(t.breakpoints(&r(1, 4), &r(1, 4)).is_empty());
        assert!(t.breakpoints(&r(3, 7), &r(1, 2)).is_empty());
        let t = table(13, &[1, 5]);
        let mut distinct: Vec<u32> = t.norms().iter().copied().filter(|&m| m > 0).collect();
        distinct.sort_unstable();
        distinct.dedup();
        let expected: Vec<Rational> = distinct.iter().map(|&m| r(m as i128, 13)).collect();
        assert_eq!(t.breakpoints(&r(0, 1), &r(1, 2)), expected);
    }

    #[test]
    fn regularity_examples() {
        let t = table(101, &[1]);
        let v = t.is_regular(&r(29, 202)).unwrap();
        assert!(v.regular);
        assert_eq!(v.checked, 0);
        assert_eq!(v.worst_ratio, Rational::one());

        let v = t.is_regular(&r(14, 101)).unwrap();
        assert!(!v.regular);
        assert_eq!(v.worst_kappa, Rational::zero());
        assert_eq!(v.worst_ratio, r(27, 29));
        assert!(v.worst_margin.is_negative());

        assert_eq!(t.is_regular(&r(0, 1)).unwrap_err(), Error::InvalidRadius);
    }

    #[test]
    fn window_edge_is_not_a_constraint() {
        // d = 1, ε = 100/101: window edges sit exactly at radii 99/101 and 101/101
        let t = table(211, &[1]);
        let eps = r(100, 211);
        let v = t.is_regular(&eps).unwrap();
        // 99/211 lies strictly below (1 − 1/100)·100/211 = 99/211: excluded
        assert_eq!(v.checked, 1); // only ε itself
        assert!(!v.regular);
    }

    #[test]
    fn find_regular_value_examples() {
        let t = table(101, &[1]);
        let delta = r(1, 10);
        let eps = t.find_regular_value(&delta).unwrap();
        assert!(eps > delta && eps < delta * 2);
        assert!(t.is_regular(&eps).unwrap().regular);

        // B(Γ, δ) already all of F_p: first candidate is the midpoint 3δ/2
        let t = table(7, &[1]);
        let delta = r(1, 4);
        assert_eq!(t.size(&delta), 3);
        let t = table(5, &[1]);
        assert_eq!(t.size(&r(2, 5)), 5);
        assert_eq!(t.find_regular_value(&r(2, 5)).unwrap(), r(3, 5));
    }

    #[test]
    fn translation_defect_examples() {
        let t = table(101, &[3, 8]);
        let eps = r(1, 5);
        assert_eq!(t.translation_defect(&eps, &[0]), 0);
        assert_eq!(t.translation_defect(&eps, &[40, 61]), 0);
        let full = r(1, 2);
        assert_eq!(t.translation_defect(&full, &[17, 5]), 0);
        // brute force on a nontrivial shift
        let b = t.bohr_set(&eps);
        let oracle = (0..101u32)
            .filter(|&x| b.contains(x) != b.contains((x + 23) % 101))
            .count();
        assert_eq!(t.translation_defect(&eps, &[20, 3]), oracle);
    }

    #[test]
    fn dilation_examples() {
        let ctx = FieldCtx::new(7).unwrap();
        assert_eq!(dilate(&ctx, &[1, 3], 1).unwrap(), vec![1, 3]);
        let g2 = dilate(&ctx, &[1], 2).unwrap();
        assert_eq!(g2, vec![4]);
        let lhs = table(7, &[1]).bohr_set(&r(1, 7)).dilate(2);
        let rhs = table(7, &g2).bohr_set(&r(1, 7));
        assert_eq!(lhs.as_slice(), &[0, 2, 5]);
        assert_eq!(lhs, rhs);
        assert_eq!(dilate(&ctx, &[1], 0).unwrap_err(), Error::ZeroArgument);
    }

    #[test]
    fn size_lower_bound_is_exact() {
        assert!(meets_size_lower_bound(&r(1, 7), 1, 7, 1));
        assert!(!meets_size_lower_bound(&r(2, 7), 1, 7, 1));
        assert!(meets_size_lower_bound(&r(2, 7), 1, 7, 2));
    }

    #[test]
    fn spec_validation() {
        assert!(BohrSpec::new(7, &[1, 2], r(1, 3)).is_ok());
        assert_eq!(
            BohrSpec::new(7, &[1], r(2, 3)).unwrap_err(),
            Error::InvalidRadius
        );
        assert_eq!(
            BohrSpec::new(7, &[1], r(0, 3)).unwrap_err(),
            Error::InvalidRadius
        );
        assert_eq!(
            BohrSpec::new(7, &[14], r(1, 3)).unwrap_err(),
            Error::ZeroFrequency
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn instance() -> impl Strategy<Value = (u64, Vec<u64>, Rational)> {
            (
                prop::sample::select(vec![101u64, 211, 401, 1009]),
                prop::collection::vec(1u64..1000, 1..=3),
                (1i128..=50, 51i128..=200),
            )
                .prop_map(|(p, g, (n, d))| {
                    let mut g: Vec<u64> = g.into_iter().map(|x| x % (p - 1) + 1).collect();
                    g.sort_unstable();
                    g.dedup();
                    (p, g, Rational::new(n, d))
                })
        }

        proptest! {
            #[test]
            fn size_bounds_hold((p, gamma, eps) in instance()) {
                let t = table(p, &gamma);
                let d = gamma.len();
                let s = t.size(&eps);
                prop_assert!(meets_size_lower_bound(&eps, d, p as u32, s));
                prop_assert!(t.size(&(eps * 2)) <= 4usize.pow(d as u32) * s);
            }

            #[test]
            fn bohr_sets_are_monotone((p, gamma, eps) in instance(), bump in 1i128..20) {
                let t = table(p, &gamma);
                let small = t.bohr_set(&eps);
                let large = t.bohr_set(&(eps + Rational::new(bump, 400)));
                prop_assert!(small.is_subset(&large));
            }

            #[test]
            fn dilation_identity((p, gamma, eps) in instance(), x in 1u64..1000) {
                let ctx = FieldCtx::new(p).unwrap();
                let x = x % (p - 1) + 1;
                let lhs = BohrNormTable::build(&ctx, &gamma).unwrap().bohr_set(&eps).dilate(x as u32);
                let g2 = dilate(&ctx, &gamma, x).unwrap();
                let rhs = BohrNormTable::build(&ctx, &g2).unwrap().bohr_set(&eps);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
