//! Assembly of fixed-graph contributions: insertion numerators times the
//! inverse Euler class of the virtual normal bundle, expanded in cotangent
//! classes and integrated over the product moduli space.
//!
//! Every contribution is a product over edges, flags, and vertices:
//!
//! * each edge of degree `d_e` between labels `i, j` contributes
//!   `(-1)^{d_e} d_e^{2 d_e} / (d_e!^2 (l_i - l_j)^{2 d_e})` times the
//!   reciprocals of `(a l_i + b l_j)/d_e - l_k` over `a + b = d_e`,
//!   `k != i, j`;
//! * each flag contributes `prod_{j != i(F)} (l_{i(F)} - l_j)` and the series
//!   `1/(w_F - psi_F)`;
//! * each vertex contributes `prod_{j != i(v)} c_{1/(l_i - l_j)}(E*) *
//!   (l_i - l_j)^{g(v)-1}`.
//!
//! Genus-0 vertex integrals collapse to the closed form
//! `(prod 1/w)(sum 1/w)^{n-3}`, which also covers the unstable one- and
//! two-point vertices; genus-1 vertices expand against the exact descendant
//! and Hodge-class integrals. The whole computation is exact.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::combinatorics::{compositions, factorial, neg_one_pow};
use crate::error::{Error, Result};
use crate::graph::{enumerate_skeletons, placement_class_count, FixedGraph, Flag};
use crate::moduli::{integral_g0_closed_with_extra, integral_g1, integral_g1_lambda};
use crate::rational::Rat;
use crate::weights::{WeightStream, WeightVector};

/// Degree-one polynomial `c0 + c1 * lambda` in the genus-1 Hodge class
/// (whose square vanishes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaLinear {
    pub c0: Rat,
    pub c1: Rat,
}

impl LambdaLinear {
    pub fn constant(c0: Rat) -> Self {
        LambdaLinear { c0, c1: Rat::zero() }
    }

    pub fn one() -> Self {
        LambdaLinear::constant(Rat::one())
    }

    pub fn mul(&self, other: &LambdaLinear) -> LambdaLinear {
        LambdaLinear {
            c0: &self.c0 * &other.c0,
            c1: &self.c0 * &other.c1 + &self.c1 * &other.c0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }
}

/// Tuning knobs for graph-sum evaluation.
#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Seed of the deterministic weight stream.
    pub seed: u64,
    /// Upper bound on enumerated graphs; exceeding it is a recoverable error.
    pub graph_cap: u64,
    /// How many weight vectors to try before giving up on genericity.
    pub max_weight_attempts: u32,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { seed: 42, graph_cap: 10_000_000, max_weight_attempts: 32 }
    }
}

/// Result of a full graph sum under one weight vector.
#[derive(Clone, Debug)]
pub struct GraphSum {
    pub value: Rat,
    /// Number of isomorphism classes of marked graphs in the sum.
    pub graph_count: u128,
    pub weights: WeightVector,
}

/// `w_F = (l_{i(F)} - l_{j(F)}) / d_e`, the tangent weight of the edge
/// component at its preimage over the near fixed point.
pub fn flag_weight(graph: &FixedGraph, flag: &Flag, w: &WeightVector) -> Rat {
    let d_e = graph.edges[flag.edge].degree;
    (w.get(flag.near_label) - w.get(flag.far_label)) / Rat::from_int(d_e as i64)
}

/// The edge part of the inverse Euler class of the virtual normal bundle.
pub fn edge_factor(graph: &FixedGraph, edge_idx: usize, w: &WeightVector) -> Result<Rat> {
    let e = &graph.edges[edge_idx];
    let i = graph.vertices[e.v0].label;
    let j = graph.vertices[e.v1].label;
    let d_e = e.degree;
    let diff = w.get(i) - w.get(j);
    let mut f = neg_one_pow(d_e as u64) * Rat::from_bigint(big_pow(d_e as u64, 2 * d_e))
        / (Rat::from_bigint(factorial(d_e as u64)).pow(2) * diff.pow(2 * d_e as i64));
    for a in 0..=d_e {
        let b = d_e - a;
        for k in 0..=graph.r {
            if k == i || k == j {
                continue;
            }
            let den = (Rat::from_int(a as i64) * w.get(i) + Rat::from_int(b as i64) * w.get(j))
                / Rat::from_int(d_e as i64)
                - w.get(k);
            if den.is_zero() {
                return Err(Error::NonGenericWeights(format!(
                    "edge denominator ({a} l_{i} + {b} l_{j})/{d_e} - l_{k} vanishes"
                )));
            }
            f /= &den;
        }
    }
    Ok(f)
}

/// The vertex part: `prod_{j != i} c_{1/(l_i - l_j)}(E*) (l_i - l_j)^{g-1}`,
/// truncated at linear order in the genus-1 Hodge class.
pub fn vertex_factor(graph: &FixedGraph, vertex: usize, w: &WeightVector) -> Result<LambdaLinear> {
    let i = graph.vertices[vertex].label;
    let genus = graph.vertices[vertex].genus;
    match genus {
        0 => {
            let mut c0 = Rat::one();
            for k in 0..=graph.r {
                if k != i {
                    c0 /= &(w.get(i) - w.get(k));
                }
            }
            Ok(LambdaLinear::constant(c0))
        }
        1 => {
            // dual Hodge bundle has rank 1: prod (1 - lambda/(l_i - l_j))
            let mut c1 = Rat::zero();
            for k in 0..=graph.r {
                if k != i {
                    c1 -= &(w.get(i) - w.get(k)).recip();
                }
            }
            Ok(LambdaLinear { c0: Rat::one(), c1 })
        }
        g => Err(Error::UnsupportedGenus(g as u32)),
    }
}

/// The flag series `prod_{j != i(F)} (l_{i(F)} - l_j) * sum_k psi^k / w_F^{k+1}`
/// truncated at the dimension of the flag's vertex moduli factor; returned as
/// the coefficient list of `psi^0..psi^dim`.
pub fn flag_factor(graph: &FixedGraph, flag: &Flag, w: &WeightVector) -> Result<Vec<Rat>> {
    let omega = flag_weight(graph, flag, w);
    if omega.is_zero() {
        return Err(Error::SingularWeight("flag weight vanishes".into()));
    }
    let mut numerator = Rat::one();
    for k in 0..=graph.r {
        if k != flag.near_label {
            numerator *= &(w.get(flag.near_label) - w.get(k));
        }
    }
    let v = flag.vertex;
    let dim = (3 * graph.vertices[v].genus as i64 - 3 + graph.points_at(v) as i64).max(0);
    let mut coeffs = Vec::with_capacity(dim as usize + 1);
    for k in 0..=dim {
        coeffs.push(&numerator * omega.pow(-(k + 1)));
    }
    Ok(coeffs)
}

fn big_pow(base: u64, exp: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    let b = BigInt::from(base);
    for _ in 0..exp {
        acc *= &b;
    }
    acc
}

// ---------------------------------------------------------------------------
// per-graph assembly
// ---------------------------------------------------------------------------

/// Obstruction-bundle edge part for the rank-2 normal bundle `O(-1)+O(-1)`:
/// per edge and per summand, the product of the `d_e - 1` weights
/// `-(a l_i + b l_j)/d_e`, `a, b >= 1`.
pub(crate) fn obstruction_edge_part(graph: &FixedGraph, w: &WeightVector) -> Rat {
    let mut f = Rat::one();
    for e in &graph.edges {
        let i = graph.vertices[e.v0].label;
        let j = graph.vertices[e.v1].label;
        for a in 1..e.degree {
            let b = e.degree - a;
            let weight = -(Rat::from_int(a as i64) * w.get(i)
                + Rat::from_int(b as i64) * w.get(j))
                / Rat::from_int(e.degree as i64);
            f *= weight.pow(2); // both summands
        }
    }
    f
}

/// Obstruction-bundle vertex part at `v` for both summands: weight
/// `(-l_{i(v)})^{2(val-1)}` from the fiber terms of the normalization
/// sequence, times `e(E* (x) fiber)^2 = (w - lambda)^2` on a genus-1 vertex.
pub(crate) fn obstruction_vertex_part(graph: &FixedGraph, vertex: usize, w: &WeightVector) -> LambdaLinear {
    let val = graph.valence(vertex);
    let fiber = -w.get(graph.vertices[vertex].label);
    let scal = fiber.pow(2 * (val as i64 - 1));
    match graph.vertices[vertex].genus {
        0 => LambdaLinear::constant(scal),
        _ => LambdaLinear {
            c0: &scal * fiber.pow(2),
            c1: scal * Rat::from_int(-2) * &fiber,
        },
    }
}

struct VertexStatic {
    genus: u8,
    label: u8,
    flag_weights: Vec<Rat>,
    hodge: LambdaLinear,
}

struct GraphStatics {
    /// Product of edge factors, flag numerators, and (when enabled) the
    /// obstruction edge part.
    scalar: Rat,
    vertices: Vec<VertexStatic>,
}

fn graph_statics(graph: &FixedGraph, w: &WeightVector, obstruction: bool) -> Result<GraphStatics> {
    let mut scalar = Rat::one();
    for idx in 0..graph.edges.len() {
        scalar *= edge_factor(graph, idx, w)?;
    }
    if obstruction {
        if graph.r != 1 {
            return Err(Error::InvalidArgument(
                "multiple-cover numerator is defined over P^1 only".into(),
            ));
        }
        scalar *= obstruction_edge_part(graph, w);
    }

    let mut flag_weights: Vec<Vec<Rat>> = vec![Vec::new(); graph.vertices.len()];
    for flag in graph.flags() {
        let omega = flag_weight(graph, &flag, w);
        // flag numerator prod_{j != i(F)} (l_{i(F)} - l_j)
        for k in 0..=graph.r {
            if k != flag.near_label {
                scalar *= &(w.get(flag.near_label) - w.get(k));
            }
        }
        flag_weights[flag.vertex].push(omega);
    }

    let mut vertices = Vec::with_capacity(graph.vertices.len());
    for v in 0..graph.vertices.len() {
        let mut hodge = vertex_factor(graph, v, w)?;
        if obstruction {
            hodge = hodge.mul(&obstruction_vertex_part(graph, v, w));
        }
        vertices.push(VertexStatic {
            genus: graph.vertices[v].genus,
            label: graph.vertices[v].label,
            flag_weights: std::mem::take(&mut flag_weights[v]),
            hodge,
        });
    }
    Ok(GraphStatics { scalar, vertices })
}

/// Integral over one vertex moduli factor of
/// `prod_F 1/(w_F - psi_F) * (c0 + c1 lambda)`, with `extra` psi-free points.
fn vertex_value(vs: &VertexStatic, extra: usize) -> Result<Rat> {
    match vs.genus {
        0 => {
            debug_assert!(vs.hodge.c1.is_zero());
            if vs.hodge.c0.is_zero() {
                return Ok(Rat::zero());
            }
            Ok(&vs.hodge.c0 * integral_g0_closed_with_extra(&vs.flag_weights, extra)?)
        }
        1 => {
            let k = vs.flag_weights.len();
            let n_v = k + extra;
            let mut acc = Rat::zero();
            if !vs.hodge.c0.is_zero() {
                for a in compositions(n_v as u32, k) {
                    let mut coef = vs.hodge.c0.clone();
                    for (omega, &ax) in vs.flag_weights.iter().zip(&a) {
                        coef *= omega.pow(-(ax as i64 + 1));
                    }
                    let mut padded = a.clone();
                    padded.resize(n_v, 0);
                    acc += coef * integral_g1(&padded);
                }
            }
            if !vs.hodge.c1.is_zero() && n_v >= 1 {
                for a in compositions(n_v as u32 - 1, k) {
                    let mut coef = vs.hodge.c1.clone();
                    for (omega, &ax) in vs.flag_weights.iter().zip(&a) {
                        coef *= omega.pow(-(ax as i64 + 1));
                    }
                    let mut padded = a.clone();
                    padded.resize(n_v, 0);
                    acc += coef * integral_g1_lambda(&padded);
                }
            }
            Ok(acc)
        }
        g => Err(Error::UnsupportedGenus(g as u32)),
    }
}

pub(crate) fn contribution(
    graph: &FixedGraph,
    w: &WeightVector,
    insertions: &[u8],
    obstruction: bool,
) -> Result<Rat> {
    if insertions.len() != graph.marks as usize {
        return Err(Error::InvalidArgument(format!(
            "expected {} insertion exponents, got {}",
            graph.marks,
            insertions.len()
        )));
    }
    let statics = graph_statics(graph, w, obstruction)?;
    let mut total = statics.scalar.clone();
    for (v, vs) in statics.vertices.iter().enumerate() {
        if total.is_zero() {
            return Ok(Rat::zero());
        }
        let legs = &graph.vertices[v].legs;
        total *= vertex_value(vs, legs.len())?;
        for &m in legs {
            total *= w.get(vs.label).pow(insertions[m as usize - 1] as i64);
        }
    }
    Ok(total / Rat::from_bigint(BigInt::from(graph.automorphism_order())))
}

/// Contribution of one marked graph: `(1/|A|) * prod legs l^{insertion} *
/// prod edge factors * int over the moduli product of the flag and vertex
/// factors`. Exact; zero when no integrand term matches the moduli dimension.
pub fn graph_contribution(graph: &FixedGraph, w: &WeightVector, insertions: &[u8]) -> Result<Rat> {
    contribution(graph, w, insertions, false)
}

// ---------------------------------------------------------------------------
// graph sums
// ---------------------------------------------------------------------------

/// Sum of contributions over every marked-graph class, evaluated per leg-free
/// skeleton: distinguishable legs with equal insertion exponents are grouped
/// into per-vertex counts, each count pattern weighted by the number of leg
/// assignments realizing it, and the whole batch divided by the skeleton
/// automorphism order (the orbit-sum identity makes this exactly the sum over
/// numbered classes of `contribution / |A|`).
pub(crate) fn weighted_graph_sum(
    g: u32,
    n: u32,
    r: u8,
    d: u32,
    insertions: &[u8],
    w: &WeightVector,
    obstruction: bool,
    cap: u64,
) -> Result<(Rat, u128)> {
    debug_assert_eq!(insertions.len(), n as usize);
    let skeletons = enumerate_skeletons(g, r, d, cap)?;

    // group equal insertion exponents into classes
    let mut classes: Vec<(u8, u32)> = Vec::new();
    {
        let mut sorted = insertions.to_vec();
        sorted.sort_unstable();
        for l in sorted {
            match classes.last_mut() {
                Some((v, c)) if *v == l => *c += 1,
                _ => classes.push((l, 1)),
            }
        }
    }

    let results: Result<Vec<(Rat, u128)>> = skeletons
        .par_iter()
        .map(|skeleton| {
            let value = skeleton_sum(skeleton, w, &classes, obstruction)?;
            Ok((value, placement_class_count(skeleton, n)))
        })
        .collect();
    let results = results?;
    let mut total = Rat::zero();
    let mut count: u128 = 0;
    for (v, c) in results {
        total += v;
        count += c;
    }
    Ok((total, count))
}

fn skeleton_sum(
    skeleton: &FixedGraph,
    w: &WeightVector,
    classes: &[(u8, u32)],
    obstruction: bool,
) -> Result<Rat> {
    let statics = graph_statics(skeleton, w, obstruction)?;
    if statics.scalar.is_zero() {
        return Ok(Rat::zero());
    }
    let v_count = skeleton.vertices.len();

    // per-class leg-count distributions over the vertices
    let per_class: Vec<Vec<Vec<u32>>> =
        classes.iter().map(|&(_, k)| compositions(k, v_count)).collect();

    // memoized vertex integrals by number of attached legs
    let mut memo: Vec<std::collections::HashMap<usize, Rat>> = vec![Default::default(); v_count];
    let mut vertex_int = |vidx: usize, legs: usize, statics: &GraphStatics| -> Result<Rat> {
        if let Some(hit) = memo[vidx].get(&legs) {
            return Ok(hit.clone());
        }
        let val = vertex_value(&statics.vertices[vidx], legs)?;
        memo[vidx].insert(legs, val.clone());
        Ok(val)
    };

    let mut acc = Rat::zero();
    let mut choice = vec![0usize; classes.len()];
    'outer: loop {
        // assemble per-vertex leg counts and insertion-degree sums
        let mut legs = vec![0usize; v_count];
        let mut ins_sum = vec![0u32; v_count];
        let mut multinomial = Rat::one();
        for (ci, &(l, k)) in classes.iter().enumerate() {
            let dist = &per_class[ci][choice[ci]];
            let mut denom = BigInt::from(1);
            for (vi, &c) in dist.iter().enumerate() {
                legs[vi] += c as usize;
                ins_sum[vi] += l as u32 * c;
                denom *= factorial(c as u64);
            }
            multinomial *= Rat::from_bigint(factorial(k as u64)) / Rat::from_bigint(denom);
        }

        let mut term = multinomial;
        for vidx in 0..v_count {
            if term.is_zero() {
                break;
            }
            term *= vertex_int(vidx, legs[vidx], &statics)?;
            if ins_sum[vidx] > 0 {
                term *= w.get(statics.vertices[vidx].label).pow(ins_sum[vidx] as i64);
            }
        }
        acc += term;

        // odometer over the per-class distributions
        let mut ci = 0;
        loop {
            if ci == classes.len() {
                break 'outer;
            }
            choice[ci] += 1;
            if choice[ci] < per_class[ci].len() {
                break;
            }
            choice[ci] = 0;
            ci += 1;
        }
    }

    Ok(acc * statics.scalar
        / Rat::from_bigint(BigInt::from(skeleton.automorphism_order())))
}

/// Direct sum over explicitly enumerated marked graphs. Slower than the
/// grouped path; used for cross-checks and per-graph dumps.
pub(crate) fn direct_graph_sum(
    g: u32,
    n: u32,
    r: u8,
    d: u32,
    insertions: &[u8],
    w: &WeightVector,
    obstruction: bool,
    cap: u64,
) -> Result<(Rat, u128)> {
    let graphs = crate::graph::enumerate_graphs(g, n, r, d, cap)?;
    let count = graphs.len() as u128;
    let total: Result<Vec<Rat>> = graphs
        .par_iter()
        .map(|graph| contribution(graph, w, insertions, obstruction))
        .collect();
    Ok((total?.into_iter().sum(), count))
}

/// Every marked graph with its individual contribution, for inspection and
/// dumps. Draws weights like the graph sums do.
pub fn per_graph_contributions(
    g: u32,
    n: u32,
    r: u8,
    d: u32,
    insertions: &[u8],
    obstruction: bool,
    opts: &EngineOptions,
) -> Result<(Vec<(FixedGraph, Rat)>, WeightVector)> {
    let graphs = crate::graph::enumerate_graphs(g, n, r, d, opts.graph_cap)?;
    let mut stream = WeightStream::new(r, opts.seed);
    'attempts: for _ in 0..opts.max_weight_attempts {
        let w = stream.next().expect("weight stream is infinite");
        let mut out = Vec::with_capacity(graphs.len());
        for graph in &graphs {
            match contribution(graph, &w, insertions, obstruction) {
                Ok(value) => out.push((graph.clone(), value)),
                Err(Error::NonGenericWeights(_) | Error::SingularWeight(_)) => continue 'attempts,
                Err(e) => return Err(e),
            }
        }
        return Ok((out, w));
    }
    Err(Error::NonGenericWeights("no generic weight vector found".into()))
}

/// Run a graph sum, drawing weight vectors from the deterministic stream and
/// resampling on any non-generic denominator.
pub(crate) fn graph_sum_resampling(
    g: u32,
    n: u32,
    r: u8,
    d: u32,
    insertions: &[u8],
    obstruction: bool,
    opts: &EngineOptions,
) -> Result<GraphSum> {
    let mut stream = WeightStream::new(r, opts.seed);
    let mut last_err = None;
    for _ in 0..opts.max_weight_attempts {
        let w = stream.next().expect("weight stream is infinite");
        match weighted_graph_sum(g, n, r, d, insertions, &w, obstruction, opts.graph_cap) {
            Ok((value, graph_count)) => {
                return Ok(GraphSum { value, graph_count, weights: w })
            }
            Err(e @ (Error::NonGenericWeights(_) | Error::SingularWeight(_))) => {
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::NonGenericWeights("no generic weight vector found".into())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_graphs;

    fn weights(vals: &[i64]) -> WeightVector {
        WeightVector::new(vals.iter().map(|&v| Rat::from_int(v)).collect()).unwrap()
    }

    #[test]
    fn flag_weight_examples() {
        let graphs = enumerate_graphs(0, 0, 1, 1, 10).unwrap();
        let g = &graphs[0];
        let w = weights(&[0, -1]);
        let flags = g.flags();
        let values: Vec<Rat> = flags.iter().map(|f| flag_weight(g, f, &w)).collect();
        // the two flags of the degree-1 edge carry opposite weights +-1
        assert!(values.contains(&Rat::one()) && values.contains(&-Rat::one()));
    }

    #[test]
    fn flag_weight_scaled_by_degree() {
        let g = FixedGraph::new(
            1,
            2,
            0,
            vec![
                crate::graph::GraphVertex { label: 0, genus: 0, legs: vec![] },
                crate::graph::GraphVertex { label: 1, genus: 0, legs: vec![] },
            ],
            vec![crate::graph::GraphEdge { v0: 0, v1: 1, degree: 2 }],
        )
        .unwrap();
        let w = weights(&[0, -1]);
        let flags = g.flags();
        let f1 = flags.iter().find(|f| f.near_label == 1).unwrap();
        assert_eq!(flag_weight(&g, f1, &w), Rat::new(-1, 2));
        let w2 = weights(&[5, 1, -7]);
        // (l_0 - l_2)/3 = (5 - (-7))/3 = 4 on a degree-3 edge between 0 and 2
        let g3 = FixedGraph::new(
            2,
            3,
            0,
            vec![
                crate::graph::GraphVertex { label: 0, genus: 0, legs: vec![] },
                crate::graph::GraphVertex { label: 2, genus: 0, legs: vec![] },
            ],
            vec![crate::graph::GraphEdge { v0: 0, v1: 1, degree: 3 }],
        )
        .unwrap();
        let flags = g3.flags();
        let f0 = flags.iter().find(|f| f.near_label == 0).unwrap();
        assert_eq!(flag_weight(&g3, f0, &w2), Rat::from_int(4));
    }

    #[test]
    fn edge_factor_examples() {
        let w = weights(&[0, -1]);
        let g1 = enumerate_graphs(0, 0, 1, 1, 10).unwrap().remove(0);
        assert_eq!(edge_factor(&g1, 0, &w).unwrap(), -Rat::one());

        let g2 = FixedGraph::new(
            1,
            2,
            0,
            vec![
                crate::graph::GraphVertex { label: 0, genus: 0, legs: vec![] },
                crate::graph::GraphVertex { label: 1, genus: 0, legs: vec![] },
            ],
            vec![crate::graph::GraphEdge { v0: 0, v1: 1, degree: 2 }],
        )
        .unwrap();
        assert_eq!(edge_factor(&g2, 0, &w).unwrap(), Rat::from_int(4));

        // r=2 brings in the k != i,j product: the two factors at degree 1 are
        // (l_1 - l_2) and (l_0 - l_2) = -4, -3, so the value is -1/12
        let g3 = FixedGraph::new(
            2,
            1,
            0,
            vec![
                crate::graph::GraphVertex { label: 0, genus: 0, legs: vec![] },
                crate::graph::GraphVertex { label: 1, genus: 0, legs: vec![] },
            ],
            vec![crate::graph::GraphEdge { v0: 0, v1: 1, degree: 1 }],
        )
        .unwrap();
        let w3 = weights(&[0, -1, 3]);
        assert_eq!(edge_factor(&g3, 0, &w3).unwrap(), Rat::new(-1, 12));
    }

    #[test]
    fn vertex_factor_examples() {
        let w = weights(&[0, -1]);
        let g = FixedGraph::new(
            1,
            1,
            0,
            vec![
                crate::graph::GraphVertex { label: 0, genus: 0, legs: vec![] },
                crate::graph::GraphVertex { label: 1, genus: 1, legs: vec![] },
            ],
            vec![crate::graph::GraphEdge { v0: 0, v1: 1, degree: 1 }],
        )
        .unwrap();
        // genus 0 at label 0: 1/(l_0 - l_1) = 1
        assert_eq!(vertex_factor(&g, 0, &w).unwrap(), LambdaLinear::one());
        // genus 1 at label 1 with l = (0,-1): 1 - lambda/(l_1 - l_0) = 1 + lambda
        assert_eq!(
            vertex_factor(&g, 1, &w).unwrap(),
            LambdaLinear { c0: Rat::one(), c1: Rat::one() }
        );

        let w3 = weights(&[0, -1, 3]);
        let g3 = FixedGraph::new(
            2,
            1,
            0,
            vec![
                crate::graph::GraphVertex { label: 1, genus: 0, legs: vec![] },
                crate::graph::GraphVertex { label: 0, genus: 0, legs: vec![] },
            ],
            vec![crate::graph::GraphEdge { v0: 0, v1: 1, degree: 1 }],
        )
        .unwrap();
        // ((l_1 - l_0)(l_1 - l_2))^{-1} = ((-1)(-4))^{-1} = 1/4
        assert_eq!(vertex_factor(&g3, 0, &w3).unwrap().c0, Rat::new(1, 4));
    }

    #[test]
    fn flag_factor_truncation() {
        let w = weights(&[7, -3]);
        // stable genus-1 end: dimension 1 gives two series terms
        let g = FixedGraph::new(
            1,
            1,
            0,
            vec![
                crate::graph::GraphVertex { label: 0, genus: 1, legs: vec![] },
                crate::graph::GraphVertex { label: 1, genus: 0, legs: vec![] },
            ],
            vec![crate::graph::GraphEdge { v0: 0, v1: 1, degree: 1 }],
        )
        .unwrap();
        let flags = g.flags();
        let at_genus1 = flags.iter().find(|f| f.vertex == 0).unwrap();
        let series = flag_factor(&g, at_genus1, &w).unwrap();
        assert_eq!(series.len(), 2);
        let omega = flag_weight(&g, at_genus1, &w);
        assert_eq!(series[1], &series[0] / omega);
        // dimension-0 end: constant term only
        let at_genus0 = flags.iter().find(|f| f.vertex == 1).unwrap();
        assert_eq!(flag_factor(&g, at_genus0, &w).unwrap().len(), 1);
    }

    #[test]
    fn smoke_degree_one_invariant_is_one() {
        // the unique graph computes the full invariant: the moduli space of
        // degree-1 unmarked rational maps to P^1 is a point
        let g = enumerate_graphs(0, 0, 1, 1, 10).unwrap().remove(0);
        for vals in [[7, -3], [5, 2], [-11, 13]] {
            let w = weights(&vals);
            assert_eq!(graph_contribution(&g, &w, &[]).unwrap(), Rat::one());
        }
    }

    #[test]
    fn grouped_equals_direct_with_legs() {
        // every leg pattern grouped per skeleton must reproduce the direct
        // numbered-graph sum exactly
        let w = weights(&[11, -4, 3]);
        let cases: Vec<(u32, u32, u8, u32, Vec<u8>)> = vec![
            (0, 2, 2, 1, vec![2, 2]),
            (0, 3, 1, 1, vec![1, 1, 1]),
            (0, 4, 2, 1, vec![2, 2, 1, 1]),
            (1, 2, 1, 1, vec![1, 0]),
        ];
        for (g, n, r, d, ins) in cases {
            let wr = WeightVector::new(w.as_slice()[..=(r as usize)].to_vec()).unwrap();
            let grouped = weighted_graph_sum(g, n, r, d, &ins, &wr, false, 1_000_000).unwrap();
            let direct = direct_graph_sum(g, n, r, d, &ins, &wr, false, 1_000_000).unwrap();
            assert_eq!(grouped.0, direct.0, "value mismatch at ({g},{n},{r},{d})");
            assert_eq!(grouped.1, direct.1, "count mismatch at ({g},{n},{r},{d})");
        }
    }

    #[test]
    fn non_generic_weights_detected() {
        // for r=2 the edge product ranges over k != i,j and can vanish:
        // weights (0, -1, -1/2) kill (a l_0 + b l_1)/2 - l_2 at a = b = 1
        let g = FixedGraph::new(
            2,
            2,
            0,
            vec![
                crate::graph::GraphVertex { label: 0, genus: 0, legs: vec![] },
                crate::graph::GraphVertex { label: 1, genus: 0, legs: vec![] },
            ],
            vec![crate::graph::GraphEdge { v0: 0, v1: 1, degree: 2 }],
        )
        .unwrap();
        let w = WeightVector::new(vec![Rat::zero(), Rat::from_int(-1), Rat::new(-1, 2)]).unwrap();
        assert!(matches!(edge_factor(&g, 0, &w), Err(Error::NonGenericWeights(_))));
    }
}
