//! Exact Gromov-Witten invariants of projective space by torus localization.
//!
//! The moduli of stable maps to `P^r` carries a torus action whose fixed loci
//! are indexed by marked graphs; equivariant integrals reduce to a sum of
//! per-graph contributions assembled from explicit edge, flag, and vertex
//! factors and evaluated against exact intersection numbers on moduli of
//! pointed curves. Everything is computed in arbitrary-precision rational
//! arithmetic; no floating point appears anywhere.
//!
//! The crate covers:
//!
//! * graph enumeration with canonical forms and automorphism orders
//!   ([`graph`]);
//! * the contribution engine with deterministic generic weights and parallel
//!   exact reduction ([`localization`], [`weights`]);
//! * invariants of `P^r` and plane-curve counts with an independent
//!   recursion oracle ([`gw`]);
//! * multiple-cover contributions of a `(-1,-1)` rational curve in a
//!   Calabi-Yau 3-fold, as graph sums and as partition closed forms, with
//!   generating functions and the higher-genus conjectural evaluator
//!   ([`multicover`]);
//! * psi- and Hodge-class integrals on genus 0 and 1 moduli ([`moduli`]),
//!   backed by a persistent memo table ([`cache`]).

pub mod cache;
pub mod combinatorics;
pub mod error;
pub mod graph;
pub mod gw;
pub mod hodge;
pub mod localization;
pub mod moduli;
pub mod multicover;
pub mod partition;
pub mod rational;
pub mod selfcheck;
pub mod weights;

pub use error::{Error, Result};
pub use graph::{enumerate_graphs, FixedGraph, Flag, GraphEdge, GraphVertex};
pub use gw::{
    gw_invariant, plane_curve_count, virtual_dimension, wdvv_oracle, weight_independence_check,
    InvariantQuery, WeightIndependence,
};
pub use localization::{
    edge_factor, flag_factor, flag_weight, graph_contribution, vertex_factor, EngineOptions,
    GraphSum, LambdaLinear,
};
pub use moduli::{
    integral_g0, integral_g0_closed, integral_g1, integral_g1_lambda, string_dilaton_oracle,
    vertex_integral, VertexIntegrand,
};
pub use multicover::{
    conjecture_value, gamma_series, lemma_lambda_sum, lemma_psi_sum, manin_sum, mast2_sum,
    mast_sum, multicover_graphsum, multicover_graphsum_with_weights, obstruction_euler,
    psi_series, s_beta, ConjectureValue, ObstructionClass,
};
pub use partition::{partitions_of, Partition};
pub use rational::Rat;
pub use weights::{WeightStream, WeightVector};
