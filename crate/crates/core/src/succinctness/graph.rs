//! Separation graphs and exact chromatic numbers.
//!
//! A set `V` of pointed models with one successor each and a set `E` with
//! two successors each induce a graph: the vertices are the successors of
//! the members of `V`, and each member of `E` whose two successors are both
//! vertices contributes the edge between them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::GraphError;
use crate::kripke::PointedModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Largest graph accepted by [`chromatic_number`].
pub const MAX_COLOR_VERTICES: usize = 64;

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange(a.max(b)));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        es.dedup();
        Ok(SimpleGraph { n, edges: es })
    }

    pub fn complete(n: usize) -> Self {
        SimpleGraph { n, edges: (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect() }
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    /// Whether `colors` assigns different colors to adjacent vertices.
    pub fn is_proper(&self, colors: &[usize]) -> bool {
        colors.len() == self.n && self.edges.iter().all(|&(a, b)| colors[a] != colors[b])
    }

    /// The subgraph induced by `keep`, renumbered in the given order.
    pub fn induced(&self, keep: &[usize]) -> SimpleGraph {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|(a, b)| Some((*pos.get(a)?, *pos.get(b)?)))
            .collect();
        SimpleGraph { n: keep.len(), edges }
    }

    /// Same vertices, only the listed edges.
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> SimpleGraph {
        SimpleGraph::new(self.n, edges.iter().copied()).expect("edges from this graph")
    }
}

/// Exact chromatic number together with an optimal coloring.
///
/// DSATUR-ordered branch and bound, seeded with a greedy clique as lower
/// bound. Complete graphs are answered directly.
pub fn chromatic_number(g: &SimpleGraph) -> Result<(usize, Vec<usize>), GraphError> {
    if g.n > MAX_COLOR_VERTICES {
        return Err(GraphError::TooLarge(g.n));
    }
    if g.n == 0 {
        return Ok((0, Vec::new()));
    }
    if g.is_complete() {
        return Ok((g.n, (0..g.n).collect()));
    }
    let adj = g.adjacency();
    let lower = greedy_clique(&adj);
    let mut best = greedy_coloring(&adj);
    let mut best_k = best.iter().max().unwrap() + 1;
    if best_k > lower {
        let mut colors = vec![usize::MAX; g.n];
        branch(&adj, &mut colors, 0, 0, lower, &mut best_k, &mut best);
    }
    Ok((best_k, best))
}

fn greedy_clique(adj: &[u64]) -> usize {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].count_ones()));
    let mut best = 1;
    for &start in &order {
        let mut clique = 1u64 << start;
        let mut cand = adj[start];
        for &v in &order {
            if cand >> v & 1 == 1 {
                clique |= 1 << v;
                cand &= adj[v];
            }
        }
        best = best.max(clique.count_ones() as usize);
    }
    best
}

fn greedy_coloring(adj: &[u64]) -> Vec<usize> {
    let n = adj.len();
    let mut colors = vec![usize::MAX; n];
    for v in 0..n {
        let used: Vec<usize> = (0..n).filter(|&u| adj[v] >> u & 1 == 1 && colors[u] != usize::MAX).map(|u| colors[u]).collect();
        colors[v] = (0..).find(|c| !used.contains(c)).unwrap();
    }
    colors
}

fn branch(
    adj: &[u64],
    colors: &mut [usize],
    colored: usize,
    used: usize,
    lower: usize,
    best_k: &mut usize,
    best: &mut Vec<usize>,
) {
    if used >= *best_k || *best_k == lower {
        return;
    }
    let n = adj.len();
    if colored == n {
        *best_k = used;
        best.copy_from_slice(colors);
        return;
    }
    // pick the uncolored vertex with the most distinct neighbor colors
    let mut pick = usize::MAX;
    let mut pick_sat = 0;
    let mut pick_deg = 0;
    let mut pick_forbidden = 0u64;
    for v in 0..n {
        if colors[v] != usize::MAX {
            continue;
        }
        let mut forbidden = 0u64;
        let mut nb = adj[v];
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if colors[u] != usize::MAX {
                forbidden |= 1 << colors[u];
            }
        }
        let sat = forbidden.count_ones();
        let deg = adj[v].count_ones();
        if pick == usize::MAX || sat > pick_sat || (sat == pick_sat && deg > pick_deg) {
            pick = v;
            pick_sat = sat;
            pick_deg = deg;
            pick_forbidden = forbidden;
        }
    }
    for c in 0..=used.min(n - 1) {
        if pick_forbidden >> c & 1 == 1 {
            continue;
        }
        let new_used = used.max(c + 1);
        if new_used >= *best_k {
            continue;
        }
        colors[pick] = c;
        branch(adj, colors, colored + 1, new_used, lower, best_k, best);
        colors[pick] = usize::MAX;
        if *best_k == lower {
            return;
        }
    }
}

/// Graph induced by a vertex family and an edge family of pointed models.
/// Successors are identified up to their generated submodels.
#[derive(Clone, Debug)]
pub struct SeparationGraph {
    pub vertices: Vec<PointedModel>,
    pub graph: SimpleGraph,
    /// For each edge of `graph`, the edge-family member that produced it.
    pub edge_sources: Vec<Vec<usize>>,
}

pub fn build_graph(v: &[PointedModel], e: &[PointedModel]) -> Result<SeparationGraph, GraphError> {
    let mut index: BTreeMap<PointedModel, usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    for pm in v {
        let succ = pm.successors();
        if succ.len() != 1 {
            return Err(GraphError::VertexShape(succ.len()));
        }
        let key = succ[0].generated();
        if !index.contains_key(&key) {
            index.insert(key.clone(), vertices.len());
            vertices.push(key);
        }
    }
    let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, pm) in e.iter().enumerate() {
        let succ = pm.successors();
        if succ.len() != 2 {
            return Err(GraphError::EdgeShape(succ.len()));
        }
        let (x, y) = (succ[0].generated(), succ[1].generated());
        if let (Some(&a), Some(&b)) = (index.get(&x), index.get(&y)) {
            if a == b {
                return Err(GraphError::EdgeShape(1));
            }
            by_edge.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    let edges: Vec<(usize, usize)> = by_edge.keys().copied().collect();
    let graph = SimpleGraph::new(vertices.len(), edges)?;
    let edge_sources = by_edge.into_values().collect();
    Ok(SeparationGraph { vertices, graph, edge_sources })
}

/// Which way a graph was divided.
#[derive(Clone, Debug)]
pub enum Split {
    Vertices(Vec<usize>, Vec<usize>),
    Edges(Vec<(usize, usize)>, Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub whole: usize,
    pub first: usize,
    pub second: usize,
    /// `first + second` for vertex splits, `first * second` for edge splits.
    pub bound: usize,
    pub holds: bool,
}

/// Checks `chi(G) <= chi(G1) + chi(G2)` for a vertex split, or
/// `chi(G) <= chi(G1) * chi(G2)` for an edge split.
pub fn check_coloring_inequalities(g: &SimpleGraph, split: &Split) -> Result<InequalityReport, GraphError> {
    let whole = chromatic_number(g)?.0;
    let (g1, g2, additive) = match split {
        Split::Vertices(v1, v2) => {
            let mut all: Vec<usize> = v1.iter().chain(v2).copied().collect();
            all.sort_unstable();
            all.dedup();
            if all != (0..g.n).collect::<Vec<_>>() {
                return Err(GraphError::NotACover);
            }
            (g.induced(v1), g.induced(v2), true)
        }
        Split::Edges(e1, e2) => {
            let mut all: Vec<(usize, usize)> =
                e1.iter().chain(e2).map(|&(a, b)| (a.min(b), a.max(b))).collect();
            all.sort_unstable();
            all.dedup();
            if all != g.edges {
                return Err(GraphError::NotACover);
            }
            (g.with_edges(e1), g.with_edges(e2), false)
        }
    };
    let first = chromatic_number(&g1)?.0;
    let second = chromatic_number(&g2)?.0;
    let bound = if additive { first + second } else { first * second };
    Ok(InequalityReport { whole, first, second, bound, holds: whole <= bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_chi(g: &SimpleGraph) -> usize {
        if g.n == 0 {
            return 0;
        }
        for k in 1..=g.n {
            let mut colors = vec![0usize; g.n];
            loop {
                if g.is_proper(&colors) {
                    return k;
                }
                let mut i = 0;
                while i < g.n {
                    colors[i] += 1;
                    if colors[i] < k {
                        break;
                    }
                    colors[i] = 0;
                    i += 1;
                }
                if i == g.n {
                    break;
                }
            }
        }
        g.n
    }

    #[test]
    fn small_graphs_match_brute_force() {
        let cycle5 = SimpleGraph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(chromatic_number(&cycle5).unwrap().0, 3);
        let k4 = SimpleGraph::complete(4);
        assert_eq!(chromatic_number(&k4).unwrap().0, 4);
        let empty = SimpleGraph::new(3, []).unwrap();
        assert_eq!(chromatic_number(&empty).unwrap().0, 1);
        assert_eq!(chromatic_number(&SimpleGraph::new(0, []).unwrap()).unwrap().0, 0);
        // every graph on 5 vertices with edges drawn from a fixed pattern
        let all: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        for mask in 0u32..(1 << all.len()) {
            let g = SimpleGraph::new(5, all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e)).unwrap();
            let (k, col) = chromatic_number(&g).unwrap();
            assert!(g.is_proper(&col));
            assert_eq!(k, brute_chi(&g), "mask {mask}");
        }
    }

    #[test]
    fn petersen_graph_is_three_chromatic() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = SimpleGraph::new(10, outer.chain(spokes).chain(inner)).unwrap();
        assert_eq!(chromatic_number(&g).unwrap().0, 3);
    }

    #[test]
    fn inequalities_hold_on_a_cycle() {
        let g = SimpleGraph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let r = check_coloring_inequalities(&g, &Split::Vertices(vec![0, 1], vec![2, 3, 4])).unwrap();
        assert!(r.holds);
        assert_eq!((r.whole, r.first, r.second), (3, 2, 2));
        let r = check_coloring_inequalities(&g, &Split::Edges(vec![(0, 1), (1, 2)], vec![(2, 3), (3, 4), (4, 0)])).unwrap();
        assert!(r.holds);
        assert!(check_coloring_inequalities(&g, &Split::Vertices(vec![0], vec![1])).is_err());
    }
}
