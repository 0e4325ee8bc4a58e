//! Exhaustive modularity maximization over all set partitions. Test oracle
//! for tiny graphs only: the number of partitions grows as the Bell numbers.

use super::{Cover, ModularityView};
use crate::error::{Error, Result};

pub const BRUTE_FORCE_MAX_NODES: usize = 12;

/// Returns a partition of maximal modularity and its value.
pub fn brute_force_best(view: &ModularityView) -> Result<(Cover, f64)> {
    let n = view.node_count();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::TooLarge {
            algorithm: "exhaustive search",
            nodes: n,
            limit: BRUTE_FORCE_MAX_NODES,
        });
    }
    if view.total_weight() <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    let mut search = Search {
        view,
        two_m: 2.0 * view.total_weight(),
        labels: vec![0; n],
        internal: vec![0.0; n],
        degree: vec![0.0; n],
        best_labels: vec![0; n],
        best_q: f64::NEG_INFINITY,
    };
    search.assign(0, 0);
    Ok((Cover::from_labels(search.best_labels), search.best_q))
}

/// Restricted-growth-string enumeration with incremental community sums.
struct Search<'a> {
    view: &'a ModularityView,
    two_m: f64,
    labels: Vec<usize>,
    internal: Vec<f64>,
    degree: Vec<f64>,
    best_labels: Vec<usize>,
    best_q: f64,
}

impl Search<'_> {
    fn assign(&mut self, node: usize, used: usize) {
        if node == self.labels.len() {
            let q: f64 = (0..used)
                .map(|c| self.internal[c] / self.two_m - (self.degree[c] / self.two_m).powi(2))
                .sum();
            if q > self.best_q + 1e-12 {
                self.best_q = q;
                self.best_labels.clone_from(&self.labels);
            }
            return;
        }
        let k = self.view.degree(node);
        for c in 0..=used {
            let mut added = 2.0 * self.view.self_loop(node);
            for &(other, w) in self.view.neighbors(node) {
                if other < node && self.labels[other] == c {
                    added += 2.0 * w;
                }
            }
            self.labels[node] = c;
            self.internal[c] += added;
            self.degree[c] += k;
            self.assign(node + 1, used.max(c + 1));
            self.internal[c] -= added;
            self.degree[c] -= k;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::modularity;
    use super::*;

    #[test]
    fn single_edge() {
        let view = ModularityView::from_edges(2, &[(0, 1, 1.0)]);
        let (cover, q) = brute_force_best(&view).unwrap();
        assert_eq!(cover, Cover::single(2));
        assert!(q.abs() < 1e-12);
    }

    #[test]
    fn barbell_optimum() {
        let (cover, q) = brute_force_best(&barbell()).unwrap();
        assert_eq!(cover, Cover::from_labels([0, 0, 0, 1, 1, 1]));
        assert!((q - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn two_pairs_among_fifteen_partitions() {
        let (cover, q) = brute_force_best(&two_pairs()).unwrap();
        assert_eq!(cover, Cover::from_labels([0, 0, 1, 1]));
        assert!((q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn path_of_three_edges() {
        // 0-1-2-3: the split {01|23} scores 2 * (2/6 - (3/6)^2) = 1/6.
        let view = ModularityView::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]);
        let (cover, q) = brute_force_best(&view).unwrap();
        assert!((modularity(&view, &cover).unwrap() - q).abs() < 1e-12);
        assert_eq!(cover, Cover::from_labels([0, 0, 1, 1]));
        assert!((q - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn size_guard() {
        let view = ModularityView::from_edges(13, &[(0, 1, 1.0)]);
        assert!(matches!(brute_force_best(&view), Err(Error::TooLarge { .. })));
    }
}
