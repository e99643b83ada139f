//! Top-level Gromov-Witten invariants of projective space and enumerative
//! wrappers, with an independent genus-0 recursion oracle.

use num_bigint::BigInt;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::localization::{
    direct_graph_sum, graph_sum_resampling, weighted_graph_sum, EngineOptions, GraphSum,
};
use crate::rational::Rat;
use crate::weights::{WeightStream, WeightVector};

/// Expected dimension `(r+1)d + (r-3)(1-g) + n` of the moduli of stable maps.
pub fn virtual_dimension(genus: u32, degree: u32, r: u8, n: u32) -> i64 {
    (r as i64 + 1) * degree as i64 + (r as i64 - 3) * (1 - genus as i64) + n as i64
}

/// A validated invariant query: hyperplane-power insertions whose total
/// degree matches the virtual dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantQuery {
    genus: u32,
    degree: u32,
    r: u8,
    insertions: Vec<u8>,
}

impl InvariantQuery {
    pub fn new(genus: u32, degree: u32, r: u8, insertions: Vec<u8>) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidArgument("target dimension r must be >= 1".into()));
        }
        if degree < 1 {
            return Err(Error::InvalidArgument("degree must be >= 1".into()));
        }
        if let Some(&l) = insertions.iter().find(|&&l| l > r) {
            return Err(Error::InvalidArgument(format!(
                "insertion H^{l} exceeds the cohomology of P^{r}"
            )));
        }
        let total: i64 = insertions.iter().map(|&l| l as i64).sum();
        let vdim = virtual_dimension(genus, degree, r, insertions.len() as u32);
        if total != vdim {
            return Err(Error::DimensionMismatch(format!(
                "insertion degrees sum to {total}, virtual dimension is {vdim}"
            )));
        }
        Ok(InvariantQuery { genus, degree, r, insertions })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn insertions(&self) -> &[u8] {
        &self.insertions
    }

    pub fn marks(&self) -> u32 {
        self.insertions.len() as u32
    }
}

/// The invariant as a fixed-graph sum with automatic generic weights.
pub fn gw_invariant(q: &InvariantQuery, opts: &EngineOptions) -> Result<GraphSum> {
    if q.genus > 1 {
        return Err(Error::UnsupportedGenus(q.genus));
    }
    graph_sum_resampling(q.genus, q.marks(), q.r, q.degree, &q.insertions, false, opts)
}

/// Same sum under a caller-chosen weight vector.
pub fn gw_invariant_with_weights(q: &InvariantQuery, w: &WeightVector, cap: u64) -> Result<Rat> {
    if q.genus > 1 {
        return Err(Error::UnsupportedGenus(q.genus));
    }
    if w.r() != q.r {
        return Err(Error::InvalidArgument("weight vector has the wrong length".into()));
    }
    Ok(weighted_graph_sum(q.genus, q.marks(), q.r, q.degree, &q.insertions, w, false, cap)?.0)
}

/// Same sum via explicit enumeration of every marked graph (no leg grouping).
pub fn gw_invariant_direct(q: &InvariantQuery, w: &WeightVector, cap: u64) -> Result<Rat> {
    if q.genus > 1 {
        return Err(Error::UnsupportedGenus(q.genus));
    }
    Ok(direct_graph_sum(q.genus, q.marks(), q.r, q.degree, &q.insertions, w, false, cap)?.0)
}

/// Count of degree-`d` genus-`g` plane curves through `3d + g - 1` general
/// points: the invariant with that many point insertions on `P^2`.
pub fn plane_curve_count(genus: u32, degree: u32, opts: &EngineOptions) -> Result<GraphSum> {
    if genus > 1 {
        return Err(Error::UnsupportedGenus(genus));
    }
    if degree < 1 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    let n = 3 * degree as i64 + genus as i64 - 1;
    let q = InvariantQuery::new(genus, degree, 2, vec![2; n as usize])?;
    gw_invariant(&q, opts)
}

/// Kontsevich's recursion for the number `N_d` of rational plane curves of
/// degree `d` through `3d - 1` points:
/// `N_d = sum_{d1+d2=d} N_{d1} N_{d2} d1^2 d2 (d2 C(3d-4,3d1-2) - d1 C(3d-4,3d1-1))`.
/// Used only as a test oracle.
pub fn wdvv_oracle(degree: u32) -> Result<Rat> {
    if degree < 1 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    let mut n: Vec<BigInt> = vec![BigInt::from(0), BigInt::from(1)];
    for d in 2..=degree as u64 {
        let mut acc = BigInt::from(0);
        for d1 in 1..d {
            let d2 = d - d1;
            let c1 = binomial(3 * d - 4, 3 * d1 - 2);
            let c2 = binomial(3 * d - 4, 3 * d1 - 1);
            let term = &n[d1 as usize]
                * &n[d2 as usize]
                * BigInt::from(d1 * d1)
                * BigInt::from(d2)
                * (BigInt::from(d2) * c1 - BigInt::from(d1) * c2);
            acc += term;
        }
        n.push(acc);
    }
    Ok(Rat::from_bigint(n[degree as usize].clone()))
}

/// Report of evaluating one query under several independent weight vectors.
#[derive(Clone, Debug)]
pub struct WeightIndependence {
    pub consistent: bool,
    pub values: Vec<(WeightVector, Rat)>,
}

/// Evaluate `q` under `trials` distinct generic weight vectors and compare
/// the exact values. The dimension gate of [`InvariantQuery`] has already
/// rejected queries for which the sum would be weight-dependent noise.
pub fn weight_independence_check(
    q: &InvariantQuery,
    trials: u32,
    opts: &EngineOptions,
) -> Result<WeightIndependence> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    if q.genus > 1 {
        return Err(Error::UnsupportedGenus(q.genus));
    }
    let mut values = Vec::with_capacity(trials as usize);
    let mut stream = WeightStream::new(q.r, opts.seed);
    let mut attempts = 0;
    while values.len() < trials as usize {
        let w = stream.next().expect("stream is infinite");
        attempts += 1;
        if attempts > opts.max_weight_attempts + trials {
            return Err(Error::NonGenericWeights("too many degenerate weight draws".into()));
        }
        match weighted_graph_sum(
            q.genus,
            q.marks(),
            q.r,
            q.degree,
            &q.insertions,
            &w,
            false,
            opts.graph_cap,
        ) {
            Ok((value, _)) => values.push((w, value)),
            Err(Error::NonGenericWeights(_) | Error::SingularWeight(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let consistent = values.windows(2).all(|p| p[0].1 == p[1].1);
    Ok(WeightIndependence { consistent, values })
}
