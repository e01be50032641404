//! Sumsets, product representation counts and multiplicative energy.

use crate::error::{Error, Result};
use crate::sets::ResidueSet;

/// `r_×(x) = #{(a, b) ∈ A × B : ab = x}` for every residue `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCounts {
    counts: Vec<u64>,
}

impl RepCounts {
    pub fn get(&self, x: u32) -> u64 {
        self.counts.get(x as usize).copied().unwrap_or(0)
    }

    /// `(x, r(x))` for every `x` with `r(x) > 0`, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(x, &c)| (x as u32, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn sum_of_squares(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128 * c as u128).sum()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }
}

// Cyclic bitset over Z/pZ stored twice over so that any rotation is a
// contiguous bit window.
struct DoubledBits {
    p: usize,
    words: Vec<u64>,
}

impl DoubledBits {
    fn new(set: &ResidueSet) -> Self {
        let p = set.p() as usize;
        let mut words = vec![0u64; (2 * p + 64) / 64 + 1];
        for x in set.iter() {
            for pos in [x as usize, x as usize + p] {
                words[pos / 64] |= 1 << (pos % 64);
            }
        }
        DoubledBits { p, words }
    }

    // 64 bits starting at bit `start`.
    #[inline]
    fn window(&self, start: usize) -> u64 {
        let (w, s) = (start / 64, start % 64);
        if s == 0 {
            self.words[w]
        } else {
            (self.words[w] >> s) | (self.words[w + 1] << (64 - s))
        }
    }
}

/// `A + B = {a + b mod p}`.
pub fn sumset(a: &ResidueSet, b: &ResidueSet) -> ResidueSet {
    let p = a.p();
    debug_assert_eq!(p, b.p());
    if a.is_empty() || b.is_empty() {
        return ResidueSet::empty(p);
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if (small.len() as u64) * (large.len() as u64) <= 4 * p as u64 {
        return ResidueSet::new(
            p,
            small
                .iter()
                .flat_map(|x| large.iter().map(move |y| x as u64 + y as u64)),
        );
    }
    let bits = DoubledBits::new(large);
    let n_words = (p as usize).div_ceil(64);
    let mut out = vec![0u64; n_words];
    for s in small.iter() {
        // bit x of the result ← bit (x − s) of `large` = doubled bit x − s + p
        let base = bits.p - s as usize;
        for (i, w) in out.iter_mut().enumerate() {
            *w |= bits.window(base + 64 * i);
        }
    }
    let elems = (0..p)
        .filter(|&x| out[x as usize / 64] >> (x % 64) & 1 == 1)
        .collect();
    ResidueSet::from_sorted(p, elems)
}

/// Product representation counts of `A·B`.
pub fn product_rep_counts(a: &ResidueSet, b: &ResidueSet) -> RepCounts {
    let p = a.p() as u64;
    let mut counts = vec![0u64; p as usize];
    for x in a.iter() {
        for y in b.iter() {
            counts[(x as u64 * y as u64 % p) as usize] += 1;
        }
    }
    RepCounts { counts }
}

/// `E_×(A, B) = Σ_x r_×(x)²`.
pub fn mult_energy(a: &ResidueSet, b: &ResidueSet) -> u128 {
    product_rep_counts(a, b).sum_of_squares()
}

/// `E_×(A, A) / (|A|·|A+A|^{7/4}·ln|A|)`, for `2 ≤ |A| < √p`.
pub fn rudnev_ratio(a: &ResidueSet) -> Result<f64> {
    let n = a.len();
    if n < 2 {
        return Err(Error::SetTooSmall(n));
    }
    if (n as u64) * (n as u64) >= a.p() as u64 {
        return Err(Error::SetTooLarge { size: n, p: a.p() });
    }
    let energy = mult_energy(a, a) as f64;
    let doubling = sumset(a, a).len() as f64;
    let nf = n as f64;
    Ok(energy / (nf * doubling.powf(1.75) * nf.ln()))
}
