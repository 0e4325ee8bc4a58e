//! Divisive clustering by repeated removal of the edge with the highest
//! shortest-path betweenness. Betweenness uses hop counts; weights only enter
//! the modularity used to pick the best split along the removal sequence.

use std::collections::VecDeque;

use super::{modularity, Cover, ModularityView};
use crate::error::{Error, Result};

/// Node limit guarding the cubic running time.
pub const GIRVAN_NEWMAN_MAX_NODES: usize = 500;

pub fn girvan_newman(view: &ModularityView, max_nodes: usize) -> Result<Cover> {
    let n = view.node_count();
    if n > max_nodes {
        return Err(Error::TooLarge {
            algorithm: "girvan-newman",
            nodes: n,
            limit: max_nodes,
        });
    }
    if view.total_weight() <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    let mut graph = EdgeGraph::new(view);
    let mut best = Cover::from_labels(graph.components());
    let mut best_q = modularity(view, &best)?;
    let mut component_count = best.community_count();

    let all: Vec<usize> = (0..n).collect();
    graph.accumulate_betweenness(&all);
    while let Some(edge) = graph.most_central() {
        let (a, b) = graph.remove(edge);
        let mut affected = graph.reachable(a);
        if !affected.contains(&b) {
            affected.extend(graph.reachable(b));
        }
        graph.reset_betweenness(&affected);
        graph.accumulate_betweenness(&affected);

        let labels = graph.components();
        let cover = Cover::from_labels(labels);
        if cover.community_count() > component_count {
            component_count = cover.community_count();
            let q = modularity(view, &cover)?;
            if q > best_q + 1e-12 {
                best_q = q;
                best = cover;
            }
        }
    }
    Ok(best)
}

struct EdgeGraph {
    ends: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
    alive: Vec<bool>,
    betweenness: Vec<f64>,
}

impl EdgeGraph {
    fn new(view: &ModularityView) -> Self {
        let ends: Vec<_> = view.edges().into_iter().map(|(a, b, _)| (a, b)).collect();
        let mut adjacency = vec![Vec::new(); view.node_count()];
        for (e, &(a, b)) in ends.iter().enumerate() {
            adjacency[a].push((b, e));
            adjacency[b].push((a, e));
        }
        Self {
            alive: vec![true; ends.len()],
            betweenness: vec![0.0; ends.len()],
            ends,
            adjacency,
        }
    }

    fn live_neighbors(&self, node: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency[node]
            .iter()
            .copied()
            .filter(|&(_, e)| self.alive[e])
    }

    /// Highest-betweenness live edge; near-ties go to the lowest edge id.
    fn most_central(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (e, &b) in self.betweenness.iter().enumerate() {
            if !self.alive[e] {
                continue;
            }
            if best.is_none_or(|(_, top)| b > top + 1e-9 * top.max(1.0)) {
                best = Some((e, b));
            }
        }
        best.map(|(e, _)| e)
    }

    fn remove(&mut self, edge: usize) -> (usize, usize) {
        self.alive[edge] = false;
        self.betweenness[edge] = 0.0;
        self.ends[edge]
    }

    fn reachable(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.adjacency.len()];
        let mut out = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < out.len() {
            let v = out[i];
            i += 1;
            for (w, _) in self.live_neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        out
    }

    fn components(&self) -> Vec<usize> {
        let n = self.adjacency.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            for v in self.reachable(s) {
                label[v] = next;
            }
            next += 1;
        }
        label
    }

    fn reset_betweenness(&mut self, nodes: &[usize]) {
        for &v in nodes {
            for &(_, e) in &self.adjacency[v] {
                self.betweenness[e] = 0.0;
            }
        }
    }

    /// Brandes' accumulation of edge dependencies from every source in
    /// `sources`.
    fn accumulate_betweenness(&mut self, sources: &[usize]) {
        let n = self.adjacency.len();
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![usize::MAX; n];
        let mut delta = vec![0.0f64; n];
        let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        for &s in sources {
            for &v in &order {
                sigma[v] = 0.0;
                dist[v] = usize::MAX;
                delta[v] = 0.0;
                preds[v].clear();
            }
            order.clear();
            sigma[s] = 1.0;
            dist[s] = 0;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for (w, e) in self.live_neighbors(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                    if dist[w] == dist[v] + 1 {
                        sigma[w] += sigma[v];
                        preds[w].push((v, e));
                    }
                }
            }
            for &w in order.iter().rev() {
                for &(v, e) in &preds[w] {
                    let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                    self.betweenness[e] += c;
                    delta[v] += c;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn components_already_optimal() {
        let cover = girvan_newman(&two_pairs(), 10).unwrap();
        assert_eq!(cover, Cover::from_labels([0, 0, 1, 1]));
    }

    #[test]
    fn bridge_has_unique_top_betweenness() {
        let view = barbell();
        let mut g = EdgeGraph::new(&view);
        g.accumulate_betweenness(&(0..6).collect::<Vec<_>>());
        let bridge = g.ends.iter().position(|&e| e == (2, 3)).unwrap();
        assert_eq!(g.most_central(), Some(bridge));
        // 3 x 3 node pairs route through the bridge, counted from both ends.
        assert!((g.betweenness[bridge] - 18.0).abs() < 1e-12);
        let runner_up = g
            .betweenness
            .iter()
            .enumerate()
            .filter(|&(e, _)| e != bridge)
            .map(|(_, &b)| b)
            .fold(0.0, f64::max);
        assert!(runner_up < 18.0);
    }

    #[test]
    fn barbell_two_triangles() {
        let cover = girvan_newman(&barbell(), 10).unwrap();
        assert_eq!(cover, Cover::from_labels([0, 0, 0, 1, 1, 1]));
    }

    #[test]
    fn incremental_matches_full_recomputation() {
        let edges: Vec<_> = (0..12)
            .flat_map(|i| [(i, (i + 1) % 12, 1.0), (i, (i * 5 + 2) % 12, 1.0)])
            .filter(|&(a, b, _)| a != b)
            .collect();
        let view = ModularityView::from_edges(12, &edges);
        let mut inc = EdgeGraph::new(&view);
        let all: Vec<usize> = (0..12).collect();
        inc.accumulate_betweenness(&all);
        for _ in 0..5 {
            let e = inc.most_central().unwrap();
            let (a, b) = inc.remove(e);
            let mut affected = inc.reachable(a);
            if !affected.contains(&b) {
                affected.extend(inc.reachable(b));
            }
            inc.reset_betweenness(&affected);
            inc.accumulate_betweenness(&affected);

            let mut full = EdgeGraph::new(&view);
            full.alive.clone_from(&inc.alive);
            full.accumulate_betweenness(&all);
            for (x, y) in inc.betweenness.iter().zip(&full.betweenness) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn size_guard() {
        let view = ModularityView::from_edges(6, &[(0, 1, 1.0)]);
        assert!(matches!(
            girvan_newman(&view, 5),
            Err(Error::TooLarge { nodes: 6, limit: 5, .. })
        ));
    }
}
