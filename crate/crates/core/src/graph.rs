//! Marked graphs indexing components of the torus-fixed locus of the moduli
//! of stable maps to projective space.
//!
//! A graph carries: vertex labels `i(v)` in `{0..r}` (the fixed point the
//! component is contracted to), vertex genera, numbered legs (marked points),
//! and edge degrees (multiple covers of the coordinate line joining the two
//! endpoint fixed points). Adjacent labels always differ, edge degrees sum to
//! the total degree, and vertex genera plus the first Betti number give the
//! total genus.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphVertex {
    pub label: u8,
    pub genus: u8,
    /// Marking indices attached to this vertex, sorted ascending.
    pub legs: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphEdge {
    pub v0: usize,
    pub v1: usize,
    pub degree: u32,
}

/// An incident edge-vertex pair, with the labels of the near and far
/// endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flag {
    pub edge: usize,
    pub vertex: usize,
    pub near_label: u8,
    pub far_label: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedGraph {
    /// Ambient projective dimension.
    pub r: u8,
    /// Total map degree (sum of edge degrees).
    pub degree: u32,
    /// Number of numbered legs.
    pub marks: u32,
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
}

impl FixedGraph {
    pub fn new(
        r: u8,
        degree: u32,
        marks: u32,
        vertices: Vec<GraphVertex>,
        mut edges: Vec<GraphEdge>,
    ) -> Result<Self> {
        for e in &mut edges {
            if e.v0 > e.v1 {
                std::mem::swap(&mut e.v0, &mut e.v1);
            }
        }
        edges.sort_unstable_by_key(|e| (e.v0, e.v1, e.degree));
        let g = FixedGraph { r, degree, marks, vertices, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.vertices.len();
        if v == 0 || self.edges.is_empty() {
            return Err(Error::InvalidArgument("graph needs vertices and edges".into()));
        }
        let mut adj = vec![Vec::new(); v];
        let mut total = 0u32;
        for e in &self.edges {
            if e.v0 >= v || e.v1 >= v {
                return Err(Error::InvalidArgument("edge endpoint out of range".into()));
            }
            if e.v0 == e.v1 {
                return Err(Error::InvalidArgument("loops are forbidden".into()));
            }
            if e.degree == 0 {
                return Err(Error::InvalidArgument("edge degree must be positive".into()));
            }
            if self.vertices[e.v0].label == self.vertices[e.v1].label {
                return Err(Error::InvalidArgument("adjacent vertex labels must differ".into()));
            }
            adj[e.v0].push(e.v1);
            adj[e.v1].push(e.v0);
            total += e.degree;
        }
        if total != self.degree {
            return Err(Error::InvalidArgument("edge degrees do not sum to the total degree".into()));
        }
        for vert in &self.vertices {
            if vert.label > self.r {
                return Err(Error::InvalidArgument("vertex label exceeds r".into()));
            }
        }
        // connectivity
        let mut seen = vec![false; v];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument("graph is not connected".into()));
        }
        // legs partition {1..n}
        let mut legs: Vec<u32> = self.vertices.iter().flat_map(|vt| vt.legs.iter().copied()).collect();
        legs.sort_unstable();
        let expect: Vec<u32> = (1..=self.marks).collect();
        if legs != expect {
            return Err(Error::InvalidArgument("legs must partition {1..n}".into()));
        }
        Ok(())
    }

    pub fn first_betti(&self) -> u32 {
        (self.edges.len() + 1 - self.vertices.len()) as u32
    }

    /// Total genus: vertex genera plus the first Betti number.
    pub fn total_genus(&self) -> u32 {
        self.vertices.iter().map(|v| v.genus as u32).sum::<u32>() + self.first_betti()
    }

    pub fn flags(&self) -> Vec<Flag> {
        let mut out = Vec::with_capacity(2 * self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            out.push(Flag {
                edge: i,
                vertex: e.v0,
                near_label: self.vertices[e.v0].label,
                far_label: self.vertices[e.v1].label,
            });
            out.push(Flag {
                edge: i,
                vertex: e.v1,
                near_label: self.vertices[e.v1].label,
                far_label: self.vertices[e.v0].label,
            });
        }
        out
    }

    pub fn flags_at(&self, v: usize) -> Vec<Flag> {
        self.flags().into_iter().filter(|f| f.vertex == v).collect()
    }

    /// Number of incident edge-ends at `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.v0 == v) as usize + (e.v1 == v) as usize)
            .sum()
    }

    /// Marked points on the moduli factor at `v`: flags plus legs.
    pub fn points_at(&self, v: usize) -> usize {
        self.valence(v) + self.vertices[v].legs.len()
    }

    /// Dimension of the product moduli space, unstable genus-0 factors
    /// contributing zero.
    pub fn moduli_dimension(&self) -> u32 {
        let mut dim = 0i64;
        for v in 0..self.vertices.len() {
            let d = 3 * self.vertices[v].genus as i64 - 3 + self.points_at(v) as i64;
            dim += d.max(0);
        }
        dim as u32
    }

    fn bundles(&self) -> HashMap<(usize, usize), Vec<u32>> {
        let mut map: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
        for e in &self.edges {
            map.entry((e.v0, e.v1)).or_default().push(e.degree);
        }
        for degs in map.values_mut() {
            degs.sort_unstable();
        }
        map
    }

    /// Iterated-refinement vertex classes: two vertices share a class only if
    /// no invariant distinguishes them. Returns per-vertex rank ids, ranks
    /// ordered by the invariant data itself (so isomorphic graphs refine to
    /// the same ranked partition).
    fn refined_classes(&self) -> Vec<usize> {
        let v = self.vertices.len();
        let mut keys: Vec<Vec<u8>> = (0..v)
            .map(|i| {
                let mut k = vec![self.vertices[i].label, self.vertices[i].genus];
                k.push(self.vertices[i].legs.len() as u8);
                for &m in &self.vertices[i].legs {
                    k.extend_from_slice(&m.to_le_bytes());
                }
                let mut inc: Vec<u32> = self
                    .edges
                    .iter()
                    .flat_map(|e| {
                        let mut ds = Vec::new();
                        if e.v0 == i {
                            ds.push(e.degree);
                        }
                        if e.v1 == i {
                            ds.push(e.degree);
                        }
                        ds
                    })
                    .collect();
                inc.sort_unstable();
                for d in inc {
                    k.extend_from_slice(&d.to_le_bytes());
                }
                k
            })
            .collect();

        let mut ranks = rank_keys(&keys);
        loop {
            let prev_classes = ranks.iter().collect::<HashSet<_>>().len();
            for (i, key) in keys.iter_mut().enumerate().take(v) {
                let mut neigh: Vec<(u32, usize)> = self
                    .edges
                    .iter()
                    .flat_map(|e| {
                        let mut ns = Vec::new();
                        if e.v0 == i {
                            ns.push((e.degree, ranks[e.v1]));
                        }
                        if e.v1 == i {
                            ns.push((e.degree, ranks[e.v0]));
                        }
                        ns
                    })
                    .collect();
                neigh.sort_unstable();
                for (d, rk) in neigh {
                    key.extend_from_slice(&d.to_le_bytes());
                    key.extend_from_slice(&(rk as u32).to_le_bytes());
                }
            }
            let next = rank_keys(&keys);
            let next_classes = next.iter().collect::<HashSet<_>>().len();
            let stable = next_classes == prev_classes;
            ranks = next;
            if stable {
                break;
            }
        }
        ranks
    }

    fn encode_with_order(&self, order: &[usize]) -> Vec<u8> {
        // order[new] = old; pos[old] = new
        let mut pos = vec![0usize; order.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let mut out = Vec::new();
        out.extend_from_slice(&[1u8, self.r]);
        out.extend_from_slice(&self.degree.to_le_bytes());
        out.extend_from_slice(&self.marks.to_le_bytes());
        out.push(self.vertices.len() as u8);
        out.push(self.edges.len() as u8);
        for &old in order {
            let vt = &self.vertices[old];
            out.push(vt.label);
            out.push(vt.genus);
            out.push(vt.legs.len() as u8);
            for &m in &vt.legs {
                out.extend_from_slice(&m.to_le_bytes());
            }
        }
        let mut edges: Vec<(usize, usize, u32)> = self
            .edges
            .iter()
            .map(|e| {
                let a = pos[e.v0].min(pos[e.v1]);
                let b = pos[e.v0].max(pos[e.v1]);
                (a, b, e.degree)
            })
            .collect();
        edges.sort_unstable();
        for (a, b, d) in edges {
            out.push(a as u8);
            out.push(b as u8);
            out.extend_from_slice(&d.to_le_bytes());
        }
        out
    }

    /// Concatenation of the refined class blocks in rank order; the base
    /// ordering relative to which block permutations are enumerated.
    fn class_base(&self, ranks: &[usize]) -> Vec<usize> {
        let rank_vals: std::collections::BTreeSet<usize> = ranks.iter().copied().collect();
        let mut base = Vec::with_capacity(self.vertices.len());
        for rank in rank_vals {
            for i in 0..self.vertices.len() {
                if ranks[i] == rank {
                    base.push(i);
                }
            }
        }
        base
    }

    fn orderings_from(&self, ranks: &[usize]) -> Vec<Vec<usize>> {
        let rank_vals: std::collections::BTreeSet<usize> = ranks.iter().copied().collect();
        rank_vals
            .into_iter()
            .map(|rank| {
                let members: Vec<usize> =
                    (0..self.vertices.len()).filter(|&i| ranks[i] == rank).collect();
                let len = members.len();
                members.into_iter().permutations(len)
            })
            .multi_cartesian_product()
            .map(|parts| parts.into_iter().flatten().collect())
            .collect()
    }

    /// Canonical byte encoding: equal iff two graphs are isomorphic as marked
    /// graphs (labels, genera, degrees, and numbered legs all respected).
    pub fn canonical_form(&self) -> Vec<u8> {
        let ranks = self.refined_classes();
        self.orderings_from(&ranks)
            .into_iter()
            .map(|order| self.encode_with_order(&order))
            .min()
            .expect("graph has at least one vertex ordering")
    }

    /// Vertex permutations (old index -> new index) that preserve labels,
    /// genera, legs pointwise, and edge-bundle degree multisets.
    pub(crate) fn aut_vertex_perms(&self) -> Vec<Vec<usize>> {
        let bundles = self.bundles();
        let ranks = self.refined_classes();
        let base = self.class_base(&ranks);
        let mut perms = Vec::new();
        'outer: for order in self.orderings_from(&ranks) {
            let mut sigma = vec![0usize; self.vertices.len()];
            for (k, &img) in order.iter().enumerate() {
                sigma[base[k]] = img;
            }
            // vertex data must match exactly (legs pointwise)
            for i in 0..self.vertices.len() {
                if self.vertices[sigma[i]].label != self.vertices[i].label
                    || self.vertices[sigma[i]].genus != self.vertices[i].genus
                    || self.vertices[sigma[i]].legs != self.vertices[i].legs
                {
                    continue 'outer;
                }
            }
            // bundle compatibility
            for (&(u, v), degs) in &bundles {
                let key = (sigma[u].min(sigma[v]), sigma[u].max(sigma[v]));
                if bundles.get(&key) != Some(degs) {
                    continue 'outer;
                }
            }
            perms.push(sigma);
        }
        perms
    }

    /// Order of the full automorphism group `A`: graph automorphisms fixing
    /// the numbered legs pointwise (including swaps of parallel equal-degree
    /// edges), times the product of edge degrees.
    pub fn automorphism_order(&self) -> u128 {
        let bundles = self.bundles();
        let mut aut: u128 = 0;
        let ext: u128 = bundles
            .values()
            .map(|degs| {
                let mut f: u128 = 1;
                let mut i = 0;
                while i < degs.len() {
                    let mut j = i;
                    while j < degs.len() && degs[j] == degs[i] {
                        j += 1;
                    }
                    f *= (1..=(j - i) as u128).product::<u128>();
                    i = j;
                }
                f
            })
            .product();
        aut += self.aut_vertex_perms().len() as u128 * ext;
        let prod_de: u128 = self.edges.iter().map(|e| e.degree as u128).product();
        aut * prod_de
    }
}

fn rank_keys(keys: &[Vec<u8>]) -> Vec<usize> {
    let mut sorted: Vec<&Vec<u8>> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).expect("key present"))
        .collect()
}

// ---------------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------------

/// Leg-free graphs (skeletons) for total genus `g`, target `P^r`, degree `d`:
/// one representative per isomorphism class, sorted by canonical form.
pub(crate) fn enumerate_skeletons(g: u32, r: u8, d: u32, cap: u64) -> Result<Vec<FixedGraph>> {
    if r < 1 || d < 1 {
        return Err(Error::InvalidArgument("need r >= 1 and d >= 1".into()));
    }
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut out: Vec<FixedGraph> = Vec::new();

    for edge_count in 1..=d as usize {
        let min_v = 2usize.max((edge_count + 1).saturating_sub(g as usize));
        for v_count in min_v..=edge_count + 1 {
            let b1 = (edge_count + 1 - v_count) as u32;
            if b1 > g {
                continue;
            }
            let pairs: Vec<(usize, usize)> = (0..v_count)
                .flat_map(|u| ((u + 1)..v_count).map(move |w| (u, w)))
                .collect();
            for pick in (0..pairs.len()).combinations_with_replacement(edge_count) {
                if !covers_and_connects(v_count, &pick, &pairs) {
                    continue;
                }
                for extra in crate::combinatorics::compositions(d - edge_count as u32, edge_count)
                {
                    // parallel runs of the same pair keep non-decreasing
                    // degrees; other duplicates fall to the canonical dedup
                    let degs: Vec<u32> = extra.iter().map(|x| x + 1).collect();
                    if (1..edge_count).any(|i| pick[i] == pick[i - 1] && degs[i] < degs[i - 1]) {
                        continue;
                    }
                    for labels in label_assignments(v_count, r, &pick, &pairs) {
                        for genera in crate::combinatorics::compositions(g - b1, v_count) {
                            let vertices: Vec<GraphVertex> = (0..v_count)
                                .map(|i| GraphVertex {
                                    label: labels[i],
                                    genus: genera[i] as u8,
                                    legs: Vec::new(),
                                })
                                .collect();
                            let edges: Vec<GraphEdge> = pick
                                .iter()
                                .zip(&degs)
                                .map(|(&pi, &deg)| GraphEdge {
                                    v0: pairs[pi].0,
                                    v1: pairs[pi].1,
                                    degree: deg,
                                })
                                .collect();
                            let graph = FixedGraph::new(r, d, 0, vertices, edges)
                                .expect("construction is valid by enumeration");
                            if seen.insert(graph.canonical_form()) {
                                if out.len() as u64 >= cap {
                                    return Err(Error::GraphCapExceeded { cap });
                                }
                                out.push(graph);
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort_by_cached_key(|g| g.canonical_form());
    Ok(out)
}

fn covers_and_connects(v_count: usize, pick: &[usize], pairs: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); v_count];
    for &pi in pick {
        let (u, w) = pairs[pi];
        adj[u].push(w);
        adj[w].push(u);
    }
    if adj.iter().any(|a| a.is_empty()) {
        return false;
    }
    let mut seen = vec![false; v_count];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn label_assignments(
    v_count: usize,
    r: u8,
    pick: &[usize],
    pairs: &[(usize, usize)],
) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; v_count];
    fn rec(
        idx: usize,
        r: u8,
        pick: &[usize],
        pairs: &[(usize, usize)],
        cur: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
    ) {
        if idx == cur.len() {
            out.push(cur.clone());
            return;
        }
        'labels: for l in 0..=r {
            for &pi in pick {
                let (u, w) = pairs[pi];
                if (u == idx && w < idx && cur[w] == l) || (w == idx && u < idx && cur[u] == l) {
                    continue 'labels;
                }
            }
            cur[idx] = l;
            rec(idx + 1, r, pick, pairs, cur, out);
        }
    }
    rec(0, r, pick, pairs, &mut cur, &mut out);
    out
}

/// Number of isomorphism classes of numbered-leg placements on a skeleton
/// (Burnside over the skeleton automorphisms).
pub(crate) fn placement_class_count(skeleton: &FixedGraph, n: u32) -> u128 {
    let perms = skeleton.aut_vertex_perms();
    let order = perms.len() as u128;
    let mut total: u128 = 0;
    for sigma in &perms {
        let fixed = sigma.iter().enumerate().filter(|(i, &img)| *i == img).count() as u128;
        total += fixed.pow(n);
    }
    total / order
}

/// Every isomorphism class of marked graph for `(g, n, r, d)`, exactly once.
/// `cap` bounds the number of graphs produced; exceeding it is a recoverable
/// error.
pub fn enumerate_graphs(g: u32, n: u32, r: u8, d: u32, cap: u64) -> Result<Vec<FixedGraph>> {
    let skeletons = enumerate_skeletons(g, r, d, cap)?;
    let mut expected: u128 = 0;
    for s in &skeletons {
        expected += placement_class_count(s, n);
        if expected > cap as u128 {
            return Err(Error::GraphCapExceeded { cap });
        }
    }
    let mut out = Vec::with_capacity(expected as usize);
    for skeleton in &skeletons {
        let perms = skeleton.aut_vertex_perms();
        let v_count = skeleton.vertices.len();
        let mut placement = vec![0usize; n as usize];
        loop {
            // orbit representative: lexicographically minimal under the
            // skeleton automorphisms acting on leg positions
            let minimal = perms.iter().all(|sigma| {
                let mapped: Vec<usize> = placement.iter().map(|&v| sigma[v]).collect();
                mapped >= placement
            });
            if minimal {
                let mut vertices = skeleton.vertices.clone();
                for (m, &v) in placement.iter().enumerate() {
                    vertices[v].legs.push(m as u32 + 1);
                }
                out.push(
                    FixedGraph::new(r, d, n, vertices, skeleton.edges.clone())
                        .expect("placement preserves validity"),
                );
            }
            // odometer
            let mut idx = placement.len();
            loop {
                if idx == 0 {
                    break;
                }
                idx -= 1;
                placement[idx] += 1;
                if placement[idx] < v_count {
                    break;
                }
                placement[idx] = 0;
            }
            if placement.iter().all(|&x| x == 0) {
                break;
            }
            if n == 0 {
                break;
            }
        }
    }
    Ok(out)
}
