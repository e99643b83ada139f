//! Factorials, binomials, compositions, and Bernoulli numbers.

use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::Rat;

/// `(-1)^n`.
pub fn neg_one_pow(n: u64) -> Rat {
    if n.is_multiple_of(2) {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Bernoulli number `B_n` for even `n >= 2`, under the convention
/// `B_2 = 1/6`, `B_4 = -1/30` (so `|B_4|/(4*2!) = 1/240`).
pub fn bernoulli(n: u32) -> Result<Rat> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "bernoulli requires an even index >= 2, got {n}"
        )));
    }
    Ok(bernoulli_seq(n as usize)[n as usize].clone())
}

/// `B_0..B_n` from the defining recurrence `sum_k C(n+1,k) B_k = 0`.
fn bernoulli_seq(n: usize) -> Vec<Rat> {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rat::one()]));
    let mut seq = cache.lock().unwrap();
    while seq.len() <= n {
        let m = seq.len(); // computing B_m
        let mut acc = Rat::zero();
        for (k, b) in seq.iter().enumerate() {
            acc += Rat::from_bigint(binomial(m as u64 + 1, k as u64)) * b;
        }
        let b_m = -acc / Rat::from_bigint(BigInt::from(m as u64 + 1));
        seq.push(b_m);
    }
    seq[..=n].to_vec()
}

/// All vectors of `parts` non-negative integers summing to `total`,
/// in lexicographic order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
    fn rec(total: u32, idx: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx + 1 == cur.len() {
            cur[idx] = total;
            out.push(cur.clone());
            return;
        }
        for v in 0..=total {
            cur[idx] = v;
            rec(total - v, idx + 1, cur, out);
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(2).unwrap(), Rat::new(1, 6));
        assert_eq!(bernoulli(4).unwrap(), Rat::new(-1, 30));
        assert_eq!(bernoulli(6).unwrap(), Rat::new(1, 42));
        assert_eq!(bernoulli(12).unwrap(), Rat::new(-691, 2730));
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(0).is_err());
    }

    #[test]
    fn bernoulli_recurrence_holds() {
        // sum_{k=0}^{n} C(n+1,k) B_k = 0 for 1 <= n <= 20
        let seq = bernoulli_seq(20);
        for n in 1..=20usize {
            let mut acc = Rat::zero();
            for k in 0..=n {
                acc += Rat::from_bigint(binomial(n as u64 + 1, k as u64)) * &seq[k];
            }
            assert!(acc.is_zero(), "recurrence fails at n={n}");
        }
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 7), BigInt::from(0));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }

    #[test]
    fn compositions_cover() {
        let c = compositions(3, 2);
        assert_eq!(c.len(), 4);
        assert!(c.contains(&vec![0, 3]) && c.contains(&vec![3, 0]));
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert_eq!(compositions(2, 0), Vec::<Vec<u32>>::new());
    }
}
