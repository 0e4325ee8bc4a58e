//! Partitioning temporal nodes into temporal communities.
//!
//! Clustering ignores link direction: a [`ModularityView`] folds the directed
//! temporal graph into an undirected weighted graph on which classic
//! (resolution 1) modularity is optimized.

mod brute_force;
mod girvan_newman;
mod louvain;

pub use brute_force::{brute_force_best, BRUTE_FORCE_MAX_NODES};
pub use girvan_newman::{girvan_newman, GIRVAN_NEWMAN_MAX_NODES};
pub use louvain::louvain;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::temporal_graph::TemporalGraph;

/// Assignment of every node to exactly one community. Ids are contiguous
/// from zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cover {
    assignment: Vec<usize>,
    count: usize,
}

impl Cover {
    /// Renumbers arbitrary labels to `0..k` in order of first appearance.
    pub fn from_labels<L: Eq + std::hash::Hash>(labels: impl IntoIterator<Item = L>) -> Self {
        let mut ids = HashMap::new();
        let assignment = labels
            .into_iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l).or_insert(next)
            })
            .collect();
        Self {
            assignment,
            count: ids.len(),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            count: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn community(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    /// Node indices of each community, in increasing order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c].push(node);
        }
        out
    }
}

/// Undirected weighted view of a temporal graph for modularity.
///
/// The weight between two distinct nodes is the sum of the directed weights
/// both ways. A self-loop of weight `w` adds `2w` to its node's degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularityView {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    degree: Vec<f64>,
    total_weight: f64,
}

impl ModularityView {
    pub fn from_temporal(graph: &TemporalGraph) -> Self {
        let edges: Vec<_> = graph
            .links()
            .iter()
            .map(|l| (l.source, l.target, l.weight as f64))
            .collect();
        Self::from_edges(graph.node_count(), &edges)
    }

    /// Builds the view from undirected edges; repeated pairs add up.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut pairs: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut self_loops = vec![0.0; n];
        for &(a, b, w) in edges {
            assert!(a < n && b < n, "edge ({a}, {b}) out of range for {n} nodes");
            if a == b {
                self_loops[a] += w;
            } else {
                *pairs.entry((a.min(b), a.max(b))).or_insert(0.0) += w;
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut degree: Vec<f64> = self_loops.iter().map(|w| 2.0 * w).collect();
        let mut total_weight: f64 = self_loops.iter().sum();
        for (&(a, b), &w) in &pairs {
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
            degree[a] += w;
            degree[b] += w;
            total_weight += w;
        }
        for row in &mut adjacency {
            row.sort_by_key(|&(j, _)| j);
        }
        Self {
            adjacency,
            self_loops,
            degree,
            total_weight,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Neighbors other than the node itself, sorted by index.
    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    pub fn self_loop(&self, node: usize) -> f64 {
        self.self_loops[node]
    }

    pub fn degree(&self, node: usize) -> f64 {
        self.degree[node]
    }

    /// Total edge weight `m`; degrees sum to `2m`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Distinct undirected non-loop edges `(a, b, w)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (a, row) in self.adjacency.iter().enumerate() {
            for &(b, w) in row {
                if a < b {
                    out.push((a, b, w));
                }
            }
        }
        out
    }

    /// Collapses each community into one node. Internal weight becomes a
    /// self-loop.
    pub(crate) fn aggregate(&self, cover: &Cover) -> Self {
        let k = cover.community_count();
        let mut edges = Vec::new();
        let mut loops = vec![0.0; k];
        for a in 0..self.node_count() {
            let ca = cover.community(a);
            loops[ca] += self.self_loops[a];
            for &(b, w) in &self.adjacency[a] {
                if a < b {
                    let cb = cover.community(b);
                    if ca == cb {
                        loops[ca] += w;
                    } else {
                        edges.push((ca, cb, w));
                    }
                }
            }
        }
        edges.extend(loops.into_iter().enumerate().map(|(c, w)| (c, c, w)));
        Self::from_edges(k, &edges)
    }
}

/// Newman-Girvan modularity, `sum_c in_c / 2m - (deg_c / 2m)^2`.
pub fn modularity(view: &ModularityView, cover: &Cover) -> Result<f64> {
    if cover.len() != view.node_count() {
        return Err(Error::Mismatch(format!(
            "cover has {} nodes, graph has {}",
            cover.len(),
            view.node_count()
        )));
    }
    let two_m = 2.0 * view.total_weight();
    if two_m <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    let k = cover.community_count();
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for node in 0..view.node_count() {
        let c = cover.community(node);
        degree[c] += view.degree(node);
        internal[c] += 2.0 * view.self_loop(node);
        for &(other, w) in view.neighbors(node) {
            if cover.community(other) == c {
                internal[c] += w;
            }
        }
    }
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(i, d)| i / two_m - (d / two_m).powi(2))
        .sum())
}

/// Community detection algorithm selectable from the command line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Algorithm {
    #[default]
    Louvain,
    GirvanNewman,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "louvain" => Ok(Self::Louvain),
            "gn" | "girvan-newman" => Ok(Self::GirvanNewman),
            _ => Err(Error::Argument(format!("unknown algorithm `{s}`"))),
        }
    }
}

/// Runs `algorithm` on the undirected view of `graph`.
pub fn detect(graph: &TemporalGraph, algorithm: Algorithm, seed: u64) -> Result<Cover> {
    let view = ModularityView::from_temporal(graph);
    match algorithm {
        Algorithm::Louvain => louvain(&view, seed),
        Algorithm::GirvanNewman => girvan_newman(&view, GIRVAN_NEWMAN_MAX_NODES),
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::temporal_graph::RawLink;

    const EXACT: f64 = 1e-12;

    #[test]
    fn single_edge_covers() {
        let view = ModularityView::from_edges(2, &[(0, 1, 1.0)]);
        let together = modularity(&view, &Cover::single(2)).unwrap();
        let apart = modularity(&view, &Cover::singletons(2)).unwrap();
        assert!(together.abs() < EXACT);
        assert!((apart + 0.5).abs() < EXACT);
    }

    #[test]
    fn barbell_triangles() {
        let cover = Cover::from_labels([0, 0, 0, 1, 1, 1]);
        let q = modularity(&barbell(), &cover).unwrap();
        assert!((q - 5.0 / 14.0).abs() < EXACT, "{q}");
    }

    #[test]
    fn empty_graph_is_an_error() {
        let view = ModularityView::from_edges(3, &[]);
        assert!(matches!(
            modularity(&view, &Cover::single(3)),
            Err(Error::EmptyGraph)
        ));
        assert!(matches!(
            modularity(&barbell(), &Cover::single(3)),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn self_loops_count_twice_in_degree() {
        let view = ModularityView::from_edges(2, &[(0, 0, 2.0), (0, 1, 1.0)]);
        assert_eq!(view.degree(0), 5.0);
        assert_eq!(view.total_weight(), 3.0);
        let sum: f64 = (0..2).map(|i| view.degree(i)).sum();
        assert_eq!(sum, 2.0 * view.total_weight());
        assert!(modularity(&view, &Cover::single(2)).unwrap().abs() < EXACT);
    }

    #[test]
    fn symmetrizes_directed_links() {
        let links = vec![
            RawLink::new("A", 2, "B", 1),
            RawLink::new("B", 1, "A", 2),
            RawLink::new("A", 2, "B", 1),
            RawLink::new("A", 2, "A", 2),
        ];
        let g = TemporalGraph::from_links(&links);
        let view = ModularityView::from_temporal(&g);
        let a = g.lookup("A", 2).unwrap();
        let b = g.lookup("B", 1).unwrap();
        assert_eq!(view.neighbors(a), &[(b, 3.0)]);
        assert_eq!(view.self_loop(a), 1.0);
        assert_eq!(view.total_weight(), 4.0);
    }

    #[test]
    fn aggregation_preserves_modularity() {
        let view = barbell();
        let cover = Cover::from_labels([0, 0, 0, 1, 1, 1]);
        let agg = view.aggregate(&cover);
        assert_eq!(agg.node_count(), 2);
        assert_eq!(agg.total_weight(), view.total_weight());
        let q_fine = modularity(&view, &cover).unwrap();
        let q_coarse = modularity(&agg, &Cover::singletons(2)).unwrap();
        assert!((q_fine - q_coarse).abs() < EXACT);
    }

    #[test]
    fn cover_renumbers_by_first_appearance() {
        let cover = Cover::from_labels([7, 3, 7, 9]);
        assert_eq!(cover.assignment(), &[0, 1, 0, 2]);
        assert_eq!(cover.community_count(), 3);
        assert_eq!(cover.members(), vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(Cover::single(0).community_count(), 0);
    }

    #[test]
    fn relabeling_keeps_modularity() {
        let view = two_pairs();
        let a = Cover::from_labels([0, 0, 1, 1]);
        let b = Cover::from_labels([5, 5, 2, 2]);
        assert_eq!(
            modularity(&view, &a).unwrap(),
            modularity(&view, &b).unwrap()
        );
        assert!((modularity(&view, &a).unwrap() - 0.5).abs() < EXACT);
    }
}
