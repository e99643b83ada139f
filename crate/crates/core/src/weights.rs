//! Torus weight vectors and their deterministic sampling.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rat;

/// The torus weights `l_0..l_r` defining the action on `P^r`. Pairwise
/// distinct by construction; full genericity (no vanishing localization
/// denominator) is checked lazily during evaluation, and a violation makes
/// the caller resample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightVector(Vec<Rat>);

impl WeightVector {
    pub fn new(weights: Vec<Rat>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidArgument("need at least two weights (r >= 1)".into()));
        }
        for i in 0..weights.len() {
            for j in (i + 1)..weights.len() {
                if weights[i] == weights[j] {
                    return Err(Error::NonGenericWeights(format!(
                        "weights {} and {} coincide",
                        i, j
                    )));
                }
            }
        }
        Ok(WeightVector(weights))
    }

    /// The collapse choice `(0, -1)` on `P^1`: only comb-shaped graphs
    /// survive in the multiple-cover numerator.
    pub fn manin() -> Self {
        WeightVector(vec![Rat::zero(), Rat::from_int(-1)])
    }

    pub fn r(&self) -> u8 {
        (self.0.len() - 1) as u8
    }

    pub fn get(&self, i: u8) -> &Rat {
        &self.0[i as usize]
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.0
    }

    pub fn scaled(&self, c: &Rat) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidArgument("scale factor must be nonzero".into()));
        }
        Ok(WeightVector(self.0.iter().map(|w| w * c).collect()))
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        WeightVector(perm.iter().map(|&i| self.0[i].clone()).collect())
    }
}

impl std::fmt::Display for WeightVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

const WEIGHT_PRIMES: [i64; 32] = [
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269,
];

/// Deterministic stream of generic weight vectors for `P^r`, seeded for
/// reproducibility. Each draw picks `r+1` distinct primes with random signs,
/// so entries are pairwise distinct and nonzero.
pub struct WeightStream {
    rng: ChaCha8Rng,
    r: u8,
}

impl WeightStream {
    pub fn new(r: u8, seed: u64) -> Self {
        WeightStream { rng: ChaCha8Rng::seed_from_u64(seed), r }
    }
}

impl Iterator for WeightStream {
    type Item = WeightVector;

    fn next(&mut self) -> Option<WeightVector> {
        let count = self.r as usize + 1;
        let mut indices: Vec<usize> = (0..WEIGHT_PRIMES.len()).collect();
        // partial Fisher-Yates for the first `count` positions
        for i in 0..count {
            let j = i + (self.rng.next_u64() as usize) % (indices.len() - i);
            indices.swap(i, j);
        }
        let weights: Vec<Rat> = indices[..count]
            .iter()
            .map(|&idx| {
                let sign = if self.rng.next_u64().is_multiple_of(2) { 1 } else { -1 };
                Rat::from_int(sign * WEIGHT_PRIMES[idx])
            })
            .collect();
        Some(WeightVector(weights))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_is_deterministic() {
        let a: Vec<WeightVector> = WeightStream::new(2, 42).take(5).collect();
        let b: Vec<WeightVector> = WeightStream::new(2, 42).take(5).collect();
        assert_eq!(a, b);
        let c: Vec<WeightVector> = WeightStream::new(2, 43).take(5).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn drawn_weights_are_distinct_and_nonzero() {
        for w in WeightStream::new(3, 7).take(20) {
            let s = w.as_slice();
            assert_eq!(s.len(), 4);
            for i in 0..s.len() {
                assert!(!s[i].is_zero());
                for j in (i + 1)..s.len() {
                    assert_ne!(s[i], s[j]);
                }
            }
        }
    }

    #[test]
    fn rejects_coincident_weights() {
        assert!(WeightVector::new(vec![Rat::one(), Rat::one()]).is_err());
        assert!(WeightVector::new(vec![Rat::one()]).is_err());
    }
}
