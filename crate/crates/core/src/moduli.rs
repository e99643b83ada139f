//! Exact intersection numbers on moduli spaces of pointed curves.
//!
//! Genus 0 descendant integrals have the multinomial closed form
//! `(n-3)!/prod a_i!`. Genus 1 descendant integrals are extracted from the
//! genus-0 generating function via
//!
//! ```text
//! < exp sum z_i s_i >_1 = (1/24) log < s_0^3 exp sum z_i s_i >_0
//! ```
//!
//! and integrals of the genus-1 Hodge class reduce to genus 0 through the
//! boundary relation `lambda = Delta_0 / 12` (the class is pulled back from a
//! one-pointed space, so `lambda^2 = 0` everywhere here). An independent
//! string/dilaton recursion is provided as a cross-check oracle.

use crate::cache::{self, IntegralKey};
use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::rational::Rat;

/// A monomial integrand over one moduli factor `M_{g,n}`: one cotangent-class
/// exponent per marked point, plus an optional power of the genus-1 Hodge
/// class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexIntegrand {
    genus: u8,
    psi_exponents: Vec<u32>,
    lambda_power: u8,
}

impl VertexIntegrand {
    pub fn new(genus: u8, psi_exponents: Vec<u32>, lambda_power: u8) -> Result<Self> {
        if lambda_power > 1 {
            return Err(Error::InvalidArgument(
                "lambda_power must be 0 or 1 (the square of the genus-1 Hodge class vanishes)"
                    .into(),
            ));
        }
        if genus == 0 && lambda_power != 0 {
            return Err(Error::InvalidArgument(
                "genus-0 spaces carry no Hodge class".into(),
            ));
        }
        Ok(VertexIntegrand { genus, psi_exponents, lambda_power })
    }

    pub fn genus(&self) -> u8 {
        self.genus
    }

    pub fn psi_exponents(&self) -> &[u32] {
        &self.psi_exponents
    }

    pub fn lambda_power(&self) -> u8 {
        self.lambda_power
    }

    /// Total cohomological degree of the integrand.
    pub fn degree(&self) -> u32 {
        self.psi_exponents.iter().sum::<u32>() + self.lambda_power as u32
    }
}

/// `int_{M_{0,n}} prod psi_i^{a_i}`: equals `(n-3)!/prod a_i!` when
/// `sum a_i = n-3`, zero otherwise. Requires `n >= 3`.
pub fn integral_g0(exponents: &[u32]) -> Result<Rat> {
    let n = exponents.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "genus-0 integral needs at least 3 points, got {n}"
        )));
    }
    let total: u32 = exponents.iter().sum();
    if total as usize != n - 3 {
        return Ok(Rat::zero());
    }
    let mut denom = Rat::one();
    for &a in exponents {
        denom *= Rat::from_bigint(factorial(a as u64));
    }
    Ok(Rat::from_bigint(factorial((n - 3) as u64)) / denom)
}

/// Genus-0 vertex in closed form: `(prod 1/w_i) * (sum 1/w_i)^{n-3}` for
/// nonzero weights `w_i`, with `n = len(w)`. The formula continues to
/// `n = 1` (value `w_1`) and `n = 2` (value `1/(w_1+w_2)`), which are the
/// factors an unstable vertex contributes.
pub fn integral_g0_closed(weights: &[Rat]) -> Result<Rat> {
    integral_g0_closed_with_extra(weights, 0)
}

/// Same closed form with `extra` additional psi-free marked points, i.e.
/// the exponent becomes `len(w) + extra - 3`.
pub(crate) fn integral_g0_closed_with_extra(weights: &[Rat], extra: usize) -> Result<Rat> {
    if weights.is_empty() {
        return Err(Error::InvalidArgument("closed-form vertex needs at least one weight".into()));
    }
    if weights.iter().any(Rat::is_zero) {
        return Err(Error::SingularWeight("zero weight in genus-0 vertex".into()));
    }
    let mut prod = Rat::one();
    let mut sum = Rat::zero();
    for w in weights {
        let inv = w.recip();
        prod *= &inv;
        sum += &inv;
    }
    let e = weights.len() as i64 + extra as i64 - 3;
    if e < 0 && sum.is_zero() {
        return Err(Error::SingularWeight(
            "reciprocal weights of an unstable vertex sum to zero".into(),
        ));
    }
    Ok(prod * sum.pow(e))
}

/// `int_{M_{1,n}} prod psi_i^{a_i}`: nonzero only when `sum a_i = n`.
pub fn integral_g1(exponents: &[u32]) -> Rat {
    let n = exponents.len() as u32;
    if exponents.iter().sum::<u32>() != n || n == 0 {
        return Rat::zero();
    }
    let mut sorted = exponents.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let key = IntegralKey { genus: 1, exponents: sorted.clone(), lambda_power: 0 };
    if let Some(v) = cache::global().get(&key) {
        return v;
    }
    let value = genus1_from_log(&sorted);
    cache::global().insert(key, value.clone());
    value
}

/// `int_{M_{1,n}} lambda * prod psi_i^{a_i}`: nonzero only when
/// `sum a_i = n - 1`; equals `(1/24) int_{M_{0,n+2}} prod psi_i^{a_i}`.
pub fn integral_g1_lambda(exponents: &[u32]) -> Rat {
    let n = exponents.len();
    if n == 0 || exponents.iter().sum::<u32>() as usize != n - 1 {
        return Rat::zero();
    }
    let mut sorted = exponents.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let key = IntegralKey { genus: 1, exponents: sorted.clone(), lambda_power: 1 };
    if let Some(v) = cache::global().get(&key) {
        return v;
    }
    let mut padded = sorted.clone();
    padded.push(0);
    padded.push(0);
    let value = Rat::new(1, 24) * integral_g0(&padded).expect("n+2 >= 3");
    cache::global().insert(key, value.clone());
    value
}

/// Exact integral of a [`VertexIntegrand`] over its moduli space. Returns 0
/// on a dimension mismatch. Genus >= 2 is not integrated natively.
pub fn vertex_integral(v: &VertexIntegrand) -> Result<Rat> {
    match v.genus {
        0 => integral_g0(&v.psi_exponents),
        1 => match v.lambda_power {
            0 => Ok(integral_g1(&v.psi_exponents)),
            _ => Ok(integral_g1_lambda(&v.psi_exponents)),
        },
        g => Err(Error::UnsupportedGenus(g as u32)),
    }
}

/// Independent oracle: the same integrals computed purely by the string and
/// dilaton equations from the seeds `<s_0^3>_0 = 1` and `<s_1>_1 = 1/24`.
pub fn string_dilaton_oracle(genus: u8, exponents: &[u32]) -> Result<Rat> {
    if genus > 1 {
        return Err(Error::UnsupportedGenus(genus as u32));
    }
    let mut sorted = exponents.to_vec();
    sorted.sort_unstable();
    Ok(sd_recurse(genus, &sorted))
}

fn sd_recurse(genus: u8, sorted: &[u32]) -> Rat {
    let n = sorted.len();
    let total: u32 = sorted.iter().sum();
    let dim = 3 * genus as i64 - 3 + n as i64;
    if dim < 0 || total as i64 != dim {
        return Rat::zero();
    }
    if genus == 0 && n == 3 {
        return Rat::one();
    }
    if genus == 1 && n == 1 {
        return Rat::new(1, 24); // sorted == [1] by the dimension check
    }
    if sorted[0] == 0 {
        // string equation: remove one psi-free point, lower each exponent
        let rest = &sorted[1..];
        let mut acc = Rat::zero();
        for j in 0..rest.len() {
            if rest[j] >= 1 {
                let mut red: Vec<u32> = rest.to_vec();
                red[j] -= 1;
                red.sort_unstable();
                acc += sd_recurse(genus, &red);
            }
        }
        acc
    } else {
        // no zeros: the dimension count forces a 1; dilaton removes it
        debug_assert_eq!(sorted[0], 1);
        let rest = &sorted[1..];
        let factor = 2 * genus as i64 - 2 + rest.len() as i64;
        Rat::from_int(factor) * sd_recurse(genus, rest)
    }
}

// ---------------------------------------------------------------------------
// genus-1 extraction from the genus-0 generating function
// ---------------------------------------------------------------------------

/// Compute `<prod s_{a_i}>_1` as (prod r_v!) times the coefficient of
/// `prod z_v^{r_v}` in `(1/24) log <s_0^3 exp sum z_v s_v>_0`, where `r_v` is
/// the multiplicity of the exponent value `v` among the `a_i`.
fn genus1_from_log(sorted_desc: &[u32]) -> Rat {
    // distinct exponent values with multiplicities (the truncation caps)
    let mut values: Vec<u32> = Vec::new();
    let mut caps: Vec<u32> = Vec::new();
    for &a in sorted_desc {
        if let Some(last) = values.last() {
            if *last == a {
                *caps.last_mut().unwrap() += 1;
                continue;
            }
        }
        values.push(a);
        caps.push(1);
    }

    let poly_g = genus0_generating(&values, &caps);
    let log = poly_g.log_one_plus();
    let target = log.coeff_at_caps();
    let mut mult = Rat::one();
    for &r in &caps {
        mult *= Rat::from_bigint(factorial(r as u64));
    }
    target * mult * Rat::new(1, 24)
}

/// `<s_0^3 exp sum z_v s_v>_0` truncated at the given per-variable caps.
fn genus0_generating(values: &[u32], caps: &[u32]) -> MultiPoly {
    let mut g = MultiPoly::zero(caps);
    for s in cap_vectors(caps) {
        // dimension: sum v*s_v must equal the number of extra points sum s_v
        let points: u32 = s.iter().sum();
        let weighted: u64 = s.iter().zip(values).map(|(&sv, &v)| sv as u64 * v as u64).sum();
        if weighted != points as u64 {
            continue;
        }
        // <s_0^{3+s_0...} ...>_0 = (points)! / prod (v!)^{s_v}, divided by the
        // exp-series factor prod s_v!
        let mut coeff = Rat::from_bigint(factorial(points as u64));
        for (&sv, &v) in s.iter().zip(values) {
            let f = Rat::from_bigint(factorial(v as u64));
            coeff /= &f.pow(sv as i64);
            coeff /= &Rat::from_bigint(factorial(sv as u64));
        }
        g.add_term(&s, coeff);
    }
    g
}

fn cap_vectors(caps: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &c in caps {
        let mut next = Vec::with_capacity(out.len() * (c as usize + 1));
        for v in out {
            for x in 0..=c {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Dense multivariate polynomial truncated component-wise at fixed caps.
struct MultiPoly {
    caps: Vec<u32>,
    strides: Vec<usize>,
    coeffs: Vec<Rat>,
}

impl MultiPoly {
    fn zero(caps: &[u32]) -> Self {
        let mut strides = Vec::with_capacity(caps.len());
        let mut size = 1usize;
        for &c in caps {
            strides.push(size);
            size *= c as usize + 1;
        }
        MultiPoly { caps: caps.to_vec(), strides, coeffs: vec![Rat::zero(); size] }
    }

    fn index(&self, expo: &[u32]) -> usize {
        expo.iter().zip(&self.strides).map(|(&e, &s)| e as usize * s).sum()
    }

    fn add_term(&mut self, expo: &[u32], coeff: Rat) {
        let idx = self.index(expo);
        self.coeffs[idx] += coeff;
    }

    fn expo_of(&self, mut idx: usize) -> Vec<u32> {
        let mut expo = vec![0u32; self.caps.len()];
        for (i, &c) in self.caps.iter().enumerate() {
            let base = c as usize + 1;
            expo[i] = (idx % base) as u32;
            idx /= base;
        }
        expo
    }

    fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.caps);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.expo_of(i);
            'terms: for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let eb = other.expo_of(j);
                let mut e = vec![0u32; ea.len()];
                for k in 0..ea.len() {
                    e[k] = ea[k] + eb[k];
                    if e[k] > self.caps[k] {
                        continue 'terms;
                    }
                }
                let idx = out.index(&e);
                out.coeffs[idx] += a * b;
            }
        }
        out
    }

    /// `log(self)` for a polynomial with constant term 1: the constant is
    /// dropped and `log(1+u) = sum (-1)^{k+1} u^k / k` terminates because `u`
    /// is nilpotent under the caps.
    fn log_one_plus(&self) -> MultiPoly {
        let mut u = MultiPoly::zero(&self.caps);
        u.coeffs.clone_from_slice(&self.coeffs);
        debug_assert!(u.coeffs[0].is_one(), "generating function must start at 1");
        u.coeffs[0] = Rat::zero();

        let max_k: u32 = self.caps.iter().sum();
        let mut out = MultiPoly::zero(&self.caps);
        let mut power = MultiPoly::zero(&self.caps);
        power.coeffs.clone_from_slice(&u.coeffs);
        for k in 1..=max_k.max(1) {
            let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
            let scale = sign / Rat::from_int(k as i64);
            let mut all_zero = true;
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                if !p.is_zero() {
                    all_zero = false;
                    *o += &scale * p;
                }
            }
            if all_zero || k == max_k {
                break;
            }
            power = power.mul(&u);
        }
        out
    }

    fn coeff_at_caps(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::compositions;

    #[test]
    fn genus0_examples() {
        assert_eq!(integral_g0(&[0, 0, 0]).unwrap(), Rat::one());
        assert_eq!(integral_g0(&[1, 0, 0, 0]).unwrap(), Rat::one());
        assert_eq!(integral_g0(&[1, 1, 0, 0, 0]).unwrap(), Rat::from_int(2));
        assert_eq!(integral_g0(&[2, 0, 0, 0, 0]).unwrap(), Rat::one());
        assert_eq!(integral_g0(&[1, 0, 0]).unwrap(), Rat::zero());
        assert!(integral_g0(&[0, 0]).is_err());
    }

    #[test]
    fn genus0_sum_against_partition_expansion() {
        // int over M_{0,4} of 1/((1-2e_1)(1-e_2)) picks the degree-1 terms:
        // 2 * <e_1> + 1 * <e_2> = 3 = (2+1)^{2-1}
        let mut acc = Rat::zero();
        acc += Rat::from_int(2) * integral_g0(&[1, 0, 0, 0]).unwrap();
        acc += integral_g0(&[0, 1, 0, 0]).unwrap();
        assert_eq!(acc, Rat::from_int(3));
    }

    #[test]
    fn closed_form_examples() {
        let one = Rat::one();
        assert_eq!(
            integral_g0_closed(&[one.clone(), one.clone(), one.clone()]).unwrap(),
            Rat::one()
        );
        assert_eq!(integral_g0_closed(&[Rat::from_int(5)]).unwrap(), Rat::from_int(5));
        assert_eq!(
            integral_g0_closed(&[Rat::from_int(2), Rat::from_int(3)]).unwrap(),
            Rat::new(1, 5)
        );
        assert!(integral_g0_closed(&[Rat::zero()]).is_err());
        // two opposite weights on an unstable vertex have no closed-form value
        assert!(integral_g0_closed(&[Rat::from_int(2), Rat::from_int(-2)]).is_err());
    }

    #[test]
    fn closed_form_matches_series_for_unit_weights() {
        // all weights 1, n >= 3: closed form is n^{n-3}; the expansion is the
        // multinomial sum of integral_g0 over all exponent vectors
        for n in 3..=6usize {
            let w = vec![Rat::one(); n];
            let closed = integral_g0_closed(&w).unwrap();
            let mut series = Rat::zero();
            for a in compositions((n - 3) as u32, n) {
                series += integral_g0(&a).unwrap();
            }
            assert_eq!(closed, series, "n={n}");
        }
    }

    #[test]
    fn genus1_examples() {
        assert_eq!(integral_g1(&[1]), Rat::new(1, 24));
        assert_eq!(integral_g1(&[1, 1]), Rat::new(1, 24));
        assert_eq!(integral_g1(&[2]), Rat::zero());
        assert_eq!(integral_g1(&[0, 2]), Rat::new(1, 24));
        assert_eq!(integral_g1_lambda(&[0]), Rat::new(1, 24));
        assert_eq!(integral_g1_lambda(&[1, 0]), Rat::new(1, 24));
        assert_eq!(integral_g1_lambda(&[0, 0]), Rat::zero());
    }

    #[test]
    fn vertex_integral_dispatch() {
        let v = VertexIntegrand::new(1, vec![1], 0).unwrap();
        assert_eq!(vertex_integral(&v).unwrap(), Rat::new(1, 24));
        let v = VertexIntegrand::new(0, vec![0, 0, 0], 0).unwrap();
        assert_eq!(vertex_integral(&v).unwrap(), Rat::one());
        let v = VertexIntegrand::new(1, vec![0], 1).unwrap();
        assert_eq!(vertex_integral(&v).unwrap(), Rat::new(1, 24));
        assert!(VertexIntegrand::new(0, vec![0, 0, 0], 1).is_err());
        assert!(VertexIntegrand::new(1, vec![0], 2).is_err());
        let v = VertexIntegrand::new(2, vec![4], 0).unwrap();
        assert!(matches!(vertex_integral(&v), Err(Error::UnsupportedGenus(2))));
    }

    #[test]
    fn oracle_equivalence_exhaustive_small() {
        // genus 0 and 1, up to 7 points, every exponent vector of the correct
        // total degree: the closed/log path equals the string-dilaton recursion
        for n in 3..=7usize {
            for a in compositions((n - 3) as u32, n) {
                let lhs = integral_g0(&a).unwrap();
                let rhs = string_dilaton_oracle(0, &a).unwrap();
                assert_eq!(lhs, rhs, "g=0 a={a:?}");
            }
        }
        for n in 1..=7usize {
            for a in compositions(n as u32, n) {
                let lhs = integral_g1(&a);
                let rhs = string_dilaton_oracle(1, &a).unwrap();
                assert_eq!(lhs, rhs, "g=1 a={a:?}");
            }
        }
    }

    #[test]
    fn genus1_string_equation() {
        // <s_0 prod s_{a_i}>_1 = sum_j <... s_{a_j - 1} ...>_1
        let cases: Vec<Vec<u32>> = vec![vec![0, 2], vec![0, 1, 2], vec![0, 3, 1, 0]];
        for a in cases {
            let lhs = integral_g1(&a);
            let rest: Vec<u32> = a[1..].to_vec();
            let mut rhs = Rat::zero();
            for j in 0..rest.len() {
                if rest[j] >= 1 {
                    let mut red = rest.clone();
                    red[j] -= 1;
                    rhs += integral_g1(&red);
                }
            }
            assert_eq!(lhs, rhs, "string fails for {a:?}");
        }
    }

    #[test]
    fn permutation_symmetry() {
        assert_eq!(integral_g1(&[2, 1, 0]), integral_g1(&[0, 2, 1]));
        assert_eq!(integral_g0(&[2, 0, 0, 1, 0]).unwrap(), integral_g0(&[0, 0, 2, 0, 1]).unwrap());
    }
}
