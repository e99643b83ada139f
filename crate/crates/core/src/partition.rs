//! Integer partitions with automorphism orders.

use num_bigint::BigInt;
use num_traits::One;

use crate::combinatorics::factorial;
use crate::error::{Error, Result};

/// An unordered multiset of positive integers, stored non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Parts must be positive; they are sorted non-increasing.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts, `L(m)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Order of the stabilizer of the symmetric-group action on the parts:
    /// the product of (multiplicity)! over distinct part values.
    pub fn aut_order(&self) -> BigInt {
        let mut acc = BigInt::one();
        let mut i = 0;
        while i < self.parts.len() {
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == self.parts[i] {
                j += 1;
            }
            acc *= factorial((j - i) as u64);
            i = j;
        }
        acc
    }

    /// Product of the parts.
    pub fn product_of_parts(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &p in &self.parts {
            acc *= p;
        }
        acc
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Every partition of `d`, each exactly once, in lexicographic descending
/// order: `(d)`, ..., `(1,...,1)`.
pub fn partitions_of(d: u32) -> Result<Vec<Partition>> {
    if d == 0 {
        return Err(Error::InvalidArgument("partitions_of requires d >= 1".into()));
    }
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    fn rec(remaining: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        let hi = remaining.min(max_part);
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(remaining - p, p, cur, out);
            cur.pop();
        }
    }
    rec(d, d, &mut cur, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rat;

    #[test]
    fn enumeration_order_and_counts() {
        let p1 = partitions_of(1).unwrap();
        assert_eq!(p1.len(), 1);
        assert_eq!(p1[0].parts(), &[1]);

        let p3 = partitions_of(3).unwrap();
        let parts: Vec<&[u32]> = p3.iter().map(|p| p.parts()).collect();
        assert_eq!(parts, vec![&[3][..], &[2, 1][..], &[1, 1, 1][..]]);

        assert_eq!(partitions_of(8).unwrap().len(), 22);
        assert!(partitions_of(0).is_err());
    }

    #[test]
    fn aut_orders() {
        assert_eq!(Partition::new(vec![2, 1]).unwrap().aut_order(), BigInt::from(1));
        assert_eq!(Partition::new(vec![1, 1, 1]).unwrap().aut_order(), BigInt::from(6));
        assert_eq!(
            Partition::new(vec![2, 2, 1, 1, 1]).unwrap().aut_order(),
            BigInt::from(12)
        );
    }

    #[test]
    fn exp_log_coefficient_identity() {
        // sum over partitions of d of 1/(Aut(m) * prod m_i) = 1 for every d:
        // these are the coefficients of exp(sum_k t^k / k) = 1/(1-t).
        for d in 1..=12u32 {
            let mut acc = Rat::zero();
            for m in partitions_of(d).unwrap() {
                acc += Rat::one()
                    / (Rat::from_bigint(m.aut_order()) * Rat::from_bigint(m.product_of_parts()));
            }
            assert_eq!(acc, Rat::one(), "identity fails at d={d}");
        }
    }
}
