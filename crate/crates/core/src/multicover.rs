//! Multiple-cover contributions of a rigid rational curve with normal bundle
//! `O(-1) + O(-1)` in a Calabi-Yau 3-fold: direct fixed-graph sums with the
//! obstruction-bundle numerator, the equivalent partition closed forms,
//! their generating functions, and the higher-genus conjectural evaluator.
//!
//! Closed forms computed here: the genus-0 contribution is `1/d^3`, the
//! genus-1 contribution is `1/(12d)`, splitting into a Hodge-class part and a
//! pure cotangent part of `1/(24d)` each.

use crate::combinatorics::{bernoulli, compositions, factorial, neg_one_pow};
use crate::error::{Error, Result};
use crate::graph::FixedGraph;
use crate::hodge::{HodgeKey, HodgeTable};
use crate::localization::{
    graph_sum_resampling, obstruction_edge_part, obstruction_vertex_part, weighted_graph_sum,
    EngineOptions, GraphSum, LambdaLinear,
};
use crate::moduli::{integral_g0, integral_g1, integral_g1_lambda};
use crate::partition::{partitions_of, Partition};
use crate::rational::Rat;
use crate::weights::WeightVector;

/// Equivariant Euler class of the rank-`2d + 2g - 2` obstruction bundle
/// restricted to one fixed locus, split into a global edge scalar and one
/// Hodge-linear factor per vertex.
#[derive(Clone, Debug)]
pub struct ObstructionClass {
    pub edge_scalar: Rat,
    pub vertex_terms: Vec<LambdaLinear>,
}

impl ObstructionClass {
    /// Scalar part when no vertex carries a Hodge contribution.
    pub fn scalar(&self) -> Rat {
        let mut acc = self.edge_scalar.clone();
        for t in &self.vertex_terms {
            acc *= &t.c0;
        }
        acc
    }
}

/// The obstruction-bundle class on a `P^1` fixed graph, both `O(-1)` summands
/// included.
pub fn obstruction_euler(graph: &FixedGraph, w: &WeightVector) -> Result<ObstructionClass> {
    if graph.r != 1 {
        return Err(Error::InvalidArgument(
            "multiple-cover numerator is defined over P^1 only".into(),
        ));
    }
    if graph.vertices.iter().any(|v| v.genus > 1) {
        return Err(Error::UnsupportedGenus(
            graph.vertices.iter().map(|v| v.genus as u32).max().unwrap_or(0),
        ));
    }
    let edge_scalar = obstruction_edge_part(graph, w);
    let vertex_terms = (0..graph.vertices.len())
        .map(|v| obstruction_vertex_part(graph, v, w))
        .collect();
    Ok(ObstructionClass { edge_scalar, vertex_terms })
}

/// Total multiple-cover contribution in genus `g <= 1` and degree `d` as a
/// fixed-graph sum with generic weights.
pub fn multicover_graphsum(genus: u32, d: u32, opts: &EngineOptions) -> Result<GraphSum> {
    if genus > 1 {
        return Err(Error::UnsupportedGenus(genus));
    }
    graph_sum_resampling(genus, 0, 1, d, &[], true, opts)
}

/// Same sum under a caller-chosen weight vector (e.g. the collapse choice
/// `(0, -1)`).
pub fn multicover_graphsum_with_weights(
    genus: u32,
    d: u32,
    w: &WeightVector,
    cap: u64,
) -> Result<Rat> {
    if genus > 1 {
        return Err(Error::UnsupportedGenus(genus));
    }
    Ok(weighted_graph_sum(genus, 0, 1, d, &[], w, true, cap)?.0)
}

fn partition_coefficient(d: u32, m: &Partition) -> Rat {
    neg_one_pow((d as usize - m.len()) as u64)
        / (Rat::from_bigint(m.aut_order()) * Rat::from_bigint(m.product_of_parts()))
}

/// `int over M_{1,L} of prod 1/(1 - m_i e_i)`: the pure cotangent terms.
fn psi_part(m: &Partition) -> Rat {
    let parts = m.parts();
    let l = parts.len();
    let mut acc = Rat::zero();
    for a in compositions(l as u32, l) {
        let mut coef = Rat::one();
        for (&mi, &ai) in parts.iter().zip(&a) {
            coef *= Rat::from_int(mi as i64).pow(ai as i64);
        }
        acc += coef * integral_g1(&a);
    }
    acc
}

/// `int over M_{1,L} of lambda / prod (1 - m_i e_i)`.
fn lambda_part(m: &Partition) -> Rat {
    let parts = m.parts();
    let l = parts.len();
    if l == 0 {
        return Rat::zero();
    }
    let mut acc = Rat::zero();
    for a in compositions(l as u32 - 1, l) {
        let mut coef = Rat::one();
        for (&mi, &ai) in parts.iter().zip(&a) {
            coef *= Rat::from_int(mi as i64).pow(ai as i64);
        }
        acc += coef * integral_g1_lambda(&a);
    }
    acc
}

/// Genus-1 multiple cover contribution in partition form:
/// `sum_{m |- d} (-1)^{d-L}/(Aut(m) prod m_i) * int (1+lambda)/prod(1-m_i e_i)`.
/// Equals `1/(12d)`.
pub fn mast_sum(d: u32) -> Result<Rat> {
    let mut acc = Rat::zero();
    for m in partitions_of(d)? {
        acc += partition_coefficient(d, &m) * (psi_part(&m) + lambda_part(&m));
    }
    Ok(acc)
}

/// The Hodge-class half of the partition sum; equals `1/(24d)`.
pub fn lemma_lambda_sum(d: u32) -> Result<Rat> {
    let mut acc = Rat::zero();
    for m in partitions_of(d)? {
        acc += partition_coefficient(d, &m) * lambda_part(&m);
    }
    Ok(acc)
}

/// The pure cotangent half of the partition sum; equals `1/(24d)`.
pub fn lemma_psi_sum(d: u32) -> Result<Rat> {
    let mut acc = Rat::zero();
    for m in partitions_of(d)? {
        acc += partition_coefficient(d, &m) * psi_part(&m);
    }
    Ok(acc)
}

/// `sum_{m |- d} (-1)^{-L}/(Aut(m) prod m_i) * d^L`; evaluates to `(-1)^d`.
pub fn manin_sum(d: u32) -> Result<Rat> {
    let mut acc = Rat::zero();
    for m in partitions_of(d)? {
        let l = m.len();
        acc += neg_one_pow(l as u64) * Rat::from_int(d as i64).pow(l as i64)
            / (Rat::from_bigint(m.aut_order()) * Rat::from_bigint(m.product_of_parts()));
    }
    Ok(acc)
}

/// Coefficients `s_beta` of the genus-0 three-point generating function,
/// computed through the genus-0 integrals over `M_{0,L+3}`; evaluates to
/// `(-1)^beta`.
pub fn s_beta(beta: u32) -> Result<Rat> {
    let mut acc = Rat::zero();
    for m in partitions_of(beta)? {
        let parts = m.parts();
        let l = parts.len();
        // int over M_{0,L+3} of prod 1/(1 - m_i e_i)
        let mut integral = Rat::zero();
        for a in compositions(l as u32, l) {
            let mut coef = Rat::one();
            for (&mi, &ai) in parts.iter().zip(&a) {
                coef *= Rat::from_int(mi as i64).pow(ai as i64);
            }
            let mut padded = a.clone();
            padded.extend_from_slice(&[0, 0, 0]);
            integral += coef * integral_g0(&padded)?;
        }
        integral *= neg_one_pow(l as u64)
            / (Rat::from_bigint(m.aut_order()) * Rat::from_bigint(m.product_of_parts()));
        acc += integral;
    }
    Ok(acc)
}

/// Coefficients of `t^1..t^order` of the genus-1 generating function
/// `gamma(t) = sum (-1)^a g_a t^a` built from the partition sums; matches
/// `-log(1+t)/24` term by term.
pub fn gamma_series(order: u32) -> Result<Vec<Rat>> {
    if order < 1 {
        return Err(Error::InvalidArgument("series order must be >= 1".into()));
    }
    (1..=order)
        .map(|d| Ok(neg_one_pow(d as u64) * lemma_psi_sum(d)?))
        .collect()
}

/// Coefficients of `t^0..t^order` of `psi(t) = 1 + sum s_beta t^beta`; the
/// closed form is `1/(1+t)`.
pub fn psi_series(order: u32) -> Result<Vec<Rat>> {
    let mut out = vec![Rat::one()];
    for beta in 1..=order {
        out.push(s_beta(beta)?);
    }
    Ok(out)
}

/// The two closed forms of the conjectural genus >= 2 multiple-cover value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureValue {
    /// `|B_2g| d^{2g-3} / (2g (2g-2)!)`.
    pub bernoulli_form: Rat,
    /// `|chi(M_g)| d^{2g-3} / (2g-3)!` with `chi(M_g) = B_2g / (2g(2g-2))`.
    pub euler_characteristic_form: Rat,
}

impl ConjectureValue {
    pub fn value(&self) -> &Rat {
        &self.bernoulli_form
    }
}

/// Evaluate the conjectural closed form for genus `g >= 2, degree `d`, by
/// both routes, asserting they agree.
pub fn conjecture_value(genus: u32, d: u32) -> Result<ConjectureValue> {
    if genus < 2 {
        return Err(Error::InvalidArgument("conjecture evaluator needs genus >= 2".into()));
    }
    if d < 1 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    let b = bernoulli(2 * genus)?;
    let d_pow = Rat::from_int(d as i64).pow(2 * genus as i64 - 3);
    let bernoulli_form = b.abs() * &d_pow
        / (Rat::from_int(2 * genus as i64) * Rat::from_bigint(factorial(2 * genus as u64 - 2)));
    let chi = b / (Rat::from_int(2 * genus as i64) * Rat::from_int(2 * genus as i64 - 2));
    let euler_characteristic_form =
        chi.abs() * d_pow / Rat::from_bigint(factorial(2 * genus as u64 - 3));
    assert_eq!(
        bernoulli_form, euler_characteristic_form,
        "the two closed forms are algebraically identical"
    );
    Ok(ConjectureValue { bernoulli_form, euler_characteristic_form })
}

/// The general-genus partition sum with integrand
/// `(1 + c_1(E) + ... + c_g(E)) / prod (1 - m_i e_i)`. Genus 1 is evaluated
/// natively (and reproduces [`mast_sum`]); genus >= 2 requires a table of
/// Hodge integrals covering every needed record.
pub fn mast2_sum(genus: u32, d: u32, table: Option<&HodgeTable>) -> Result<Rat> {
    match genus {
        0 => Err(Error::InvalidArgument(
            "the partition form starts at genus 1; genus 0 is the graph sum 1/d^3".into(),
        )),
        1 => mast_sum(d),
        _ => {
            let partitions = partitions_of(d)?;
            // every (partition, chern index, exponent vector) the sum touches
            let mut missing: Vec<HodgeKey> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            let mut acc = Rat::zero();
            for m in &partitions {
                let parts = m.parts();
                let l = parts.len();
                let dim = 3 * (genus as i64) - 3 + l as i64;
                let mut partial = Rat::zero();
                for k in 0..=genus {
                    let psi_total = dim - k as i64;
                    if psi_total < 0 {
                        continue;
                    }
                    for a in compositions(psi_total as u32, l) {
                        let chern: Vec<u32> = if k == 0 { vec![] } else { vec![k] };
                        let key = HodgeKey::new(genus, a.clone(), chern);
                        let value = table.and_then(|t| t.get(&key).cloned());
                        match value {
                            Some(v) => {
                                let mut coef = Rat::one();
                                for (&mi, &ai) in parts.iter().zip(&a) {
                                    coef *= Rat::from_int(mi as i64).pow(ai as i64);
                                }
                                partial += coef * v;
                            }
                            None => {
                                if seen.insert(key.clone()) {
                                    missing.push(key);
                                }
                            }
                        }
                    }
                }
                acc += partition_coefficient(d, m) * partial;
            }
            if !missing.is_empty() {
                missing.sort_by(|a, b| (a.genus, &a.psi, &a.chern).cmp(&(b.genus, &b.psi, &b.chern)));
                return Err(Error::MissingHodgeIntegrals(missing));
            }
            Ok(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_graphs;
    use num_bigint::BigInt;

    #[test]
    fn mast_values() {
        assert_eq!(mast_sum(1).unwrap(), Rat::new(1, 12));
        assert_eq!(mast_sum(2).unwrap(), Rat::new(1, 24));
        assert_eq!(mast_sum(4).unwrap(), Rat::new(1, 48));
        assert_eq!(mast_sum(6).unwrap(), Rat::new(1, 72));
    }

    #[test]
    fn lemma_halves() {
        for d in 1..=8u32 {
            let expect = Rat::from_big(BigInt::from(1), BigInt::from(24 * d));
            assert_eq!(lemma_lambda_sum(d).unwrap(), expect, "lambda half at d={d}");
            assert_eq!(lemma_psi_sum(d).unwrap(), expect, "psi half at d={d}");
        }
    }

    #[test]
    fn manin_and_s_beta_signs() {
        for d in 1..=10u32 {
            let expect = if d % 2 == 0 { Rat::one() } else { -Rat::one() };
            assert_eq!(manin_sum(d).unwrap(), expect, "manin at d={d}");
        }
        for beta in 1..=8u32 {
            let expect = if beta % 2 == 0 { Rat::one() } else { -Rat::one() };
            assert_eq!(s_beta(beta).unwrap(), expect, "s_beta at {beta}");
        }
    }

    #[test]
    fn gamma_matches_log_expansion() {
        let coeffs = gamma_series(10).unwrap();
        for (i, c) in coeffs.iter().enumerate() {
            let d = i as i64 + 1;
            let sign = if d % 2 == 0 { 1 } else { -1 };
            assert_eq!(*c, Rat::new(sign, 24 * d), "gamma coefficient at t^{d}");
        }
    }

    #[test]
    fn psi_series_is_geometric() {
        let coeffs = psi_series(8).unwrap();
        for (b, c) in coeffs.iter().enumerate() {
            let sign = if b % 2 == 0 { Rat::one() } else { -Rat::one() };
            assert_eq!(*c, sign, "psi coefficient at t^{b}");
        }
    }

    #[test]
    fn conjecture_values() {
        assert_eq!(*conjecture_value(2, 1).unwrap().value(), Rat::new(1, 240));
        assert_eq!(*conjecture_value(2, 2).unwrap().value(), Rat::new(1, 120));
        assert_eq!(*conjecture_value(3, 1).unwrap().value(), Rat::new(1, 6048));
        assert!(conjecture_value(1, 1).is_err());
    }

    #[test]
    fn obstruction_on_degree_one_graph() {
        // rank 0 bundle on the single degree-1 graph: the class is 1
        let graph = enumerate_graphs(0, 0, 1, 1, 10).unwrap().remove(0);
        let w = WeightVector::new(vec![Rat::from_int(7), Rat::from_int(-3)]).unwrap();
        let cls = obstruction_euler(&graph, &w).unwrap();
        assert_eq!(cls.scalar(), Rat::one());
        assert!(cls.vertex_terms.iter().all(|t| t.c1.is_zero()));
    }

    #[test]
    fn genus0_graphsum_is_inverse_cube() {
        let opts = EngineOptions::default();
        for d in 1..=3u32 {
            let out = multicover_graphsum(0, d, &opts).unwrap();
            assert_eq!(out.value, Rat::new(1, (d as i64).pow(3)), "d={d}");
        }
    }

    #[test]
    fn genus1_graphsum_matches_partition_form() {
        let opts = EngineOptions::default();
        for d in 1..=3u32 {
            let graph_form = multicover_graphsum(1, d, &opts).unwrap().value;
            let partition_form = mast_sum(d).unwrap();
            assert_eq!(graph_form, partition_form, "d={d}");
            assert_eq!(graph_form, Rat::from_big(1.into(), (12 * d).into()));
        }
    }

    #[test]
    fn manin_weights_collapse_to_combs() {
        // under weights (0,-1) every graph that is not a comb (an elliptic
        // backbone at the nonzero fixed point with valence-1 teeth at the
        // zero one) contributes exactly 0, and the collapsed sum still gives
        // the full value
        let w = WeightVector::manin();
        for d in 1..=3u32 {
            let mut total = Rat::zero();
            for graph in enumerate_graphs(1, 0, 1, d, 100_000).unwrap() {
                let c = crate::localization::contribution(&graph, &w, &[], true).unwrap();
                let zero_label_ok = graph
                    .vertices
                    .iter()
                    .enumerate()
                    .all(|(i, v)| v.label != 0 || graph.valence(i) == 1);
                let backbone_count = graph
                    .vertices
                    .iter()
                    .filter(|v| v.label == 1 && v.genus == 1)
                    .count();
                let is_comb =
                    zero_label_ok && backbone_count == 1 && graph.first_betti() == 0;
                if !is_comb {
                    assert!(c.is_zero(), "non-comb graph must vanish, got {c}");
                }
                total += c;
            }
            assert_eq!(total, Rat::from_big(1.into(), (12 * d).into()), "d={d}");
        }
    }

    #[test]
    fn mast2_reduces_to_mast_at_genus_one() {
        for d in 1..=4u32 {
            assert_eq!(mast2_sum(1, d, None).unwrap(), mast_sum(d).unwrap());
        }
        assert!(mast2_sum(0, 2, None).is_err());
    }

    #[test]
    fn mast2_genus_two_needs_and_uses_a_table() {
        match mast2_sum(2, 1, None) {
            Err(Error::MissingHodgeIntegrals(keys)) => {
                assert_eq!(keys.len(), 3);
                let shown: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
                assert!(shown.contains(&"2; 4; ".to_string()), "{shown:?}");
                assert!(shown.contains(&"2; 3; 1".to_string()), "{shown:?}");
                assert!(shown.contains(&"2; 2; 2".to_string()), "{shown:?}");
            }
            other => panic!("expected missing-integral error, got {other:?}"),
        }
        let table = HodgeTable::parse(
            "2; 4; ; 1/1152\n2; 3; 1; 1/480\n2; 2; 2; 7/5760\n",
        )
        .unwrap();
        let total = mast2_sum(2, 1, Some(&table)).unwrap();
        assert_eq!(total, Rat::new(1, 240));
        assert_eq!(total, *conjecture_value(2, 1).unwrap().value());
    }
}
