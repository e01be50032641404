//! Finite subsets of F_p stored as sorted residue lists.

use std::fmt;

/// A subset of F_p: sorted, duplicate-free canonical residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    p: u32,
    elems: Vec<u32>,
}

impl ResidueSet {
    pub fn empty(p: u32) -> Self {
        ResidueSet {
            p,
            elems: Vec::new(),
        }
    }

    /// Reduces every element mod `p`, sorts and removes duplicates.
    pub fn new<I: IntoIterator<Item = u64>>(p: u32, elems: I) -> Self {
        let mut v: Vec<u32> = elems.into_iter().map(|x| (x % p as u64) as u32).collect();
        v.sort_unstable();
        v.dedup();
        ResidueSet { p, elems: v }
    }

    /// Wraps an already sorted, deduplicated, reduced list.
    pub(crate) fn from_sorted(p: u32, elems: Vec<u32>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.last().is_none_or(|&x| x < p));
        ResidueSet { p, elems }
    }

    /// The symmetric interval `{−n, …, n}` as residues.
    pub fn interval(p: u32, n: u32) -> Self {
        let n = n.min((p - 1) / 2) as i64;
        Self::new(p, (-n..=n).map(|k| k.rem_euclid(p as i64) as u64))
    }

    /// Indicator of the set as a dense boolean vector of length `p`.
    pub fn indicator(&self) -> Vec<bool> {
        let mut v = vec![false; self.p as usize];
        for &x in &self.elems {
            v[x as usize] = true;
        }
        v
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elems.binary_search(&(x % self.p)).is_ok()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = u32> + '_ {
        self.elems.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.elems
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }

    /// The set with 0 removed.
    pub fn without_zero(&self) -> Self {
        ResidueSet {
            p: self.p,
            elems: self.elems.iter().copied().filter(|&x| x != 0).collect(),
        }
    }

    /// `{c·a mod p : a ∈ A}`.
    pub fn dilate(&self, c: u32) -> Self {
        let p = self.p as u64;
        Self::new(self.p, self.elems.iter().map(|&a| a as u64 * c as u64 % p))
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueSet(p={}, {:?})", self.p, self.elems)
    }
}
