//! Two-phase greedy modularity optimization (Louvain).
//!
//! Phase one moves single nodes to the neighboring community with the best
//! strictly positive modularity gain until a full pass makes no move. A node
//! may also leave for an empty community when staying costs modularity. Phase
//! two collapses communities into super-nodes. Both phases repeat on the
//! collapsed graph until phase one leaves it unchanged.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{modularity, Cover, ModularityView};
use crate::error::{Error, Result};

/// Gains within this margin count as ties.
const GAIN_EPS: f64 = 1e-10;

/// Clusters the view. The visiting order of every pass is a shuffle drawn
/// from `seed`, so the result is a pure function of `(view, seed)`.
pub fn louvain(view: &ModularityView, seed: u64) -> Result<Cover> {
    if view.total_weight() <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Community of every original node, in terms of the current level's nodes.
    let mut membership: Vec<usize> = (0..view.node_count()).collect();
    let mut level = view.clone();
    loop {
        let (cover, moved) = move_nodes(&level, &mut rng);
        if !moved {
            break;
        }
        for c in &mut membership {
            *c = cover.community(*c);
        }
        level = level.aggregate(&cover);
    }
    let cover = Cover::from_labels(membership);
    debug_assert!(
        modularity(view, &cover)? + GAIN_EPS >= modularity(view, &Cover::singletons(view.node_count()))?
    );
    Ok(cover)
}

/// Local moving phase on one level, starting from singletons.
fn move_nodes(view: &ModularityView, rng: &mut ChaCha8Rng) -> (Cover, bool) {
    let n = view.node_count();
    let two_m = 2.0 * view.total_weight();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total: Vec<f64> = (0..n).map(|i| view.degree(i)).collect();
    let mut size = vec![1usize; n];
    let mut empty: BTreeSet<usize> = BTreeSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    // Scratch space: weight from the current node to each community.
    let mut link_weight = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;

    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &node in &order {
            let k = view.degree(node);
            if k == 0.0 {
                continue;
            }
            let home = community[node];
            for &(other, w) in view.neighbors(node) {
                let c = community[other];
                if link_weight[c] == 0.0 {
                    touched.push(c);
                }
                link_weight[c] += w;
            }
            total[home] -= k;

            let gain = |c: usize, w: f64| w - total[c] * k / two_m;
            let stay = gain(home, link_weight[home]);
            // Ascending scan: among near-equal gains the smallest id wins.
            touched.sort_unstable();
            let mut best: Option<(usize, f64)> = None;
            for &c in &touched {
                if c == home {
                    continue;
                }
                let g = gain(c, link_weight[c]);
                if best.is_none_or(|(_, b)| g > b + GAIN_EPS) {
                    best = Some((c, g));
                }
            }
            let mut target = match best {
                Some((c, g)) if g > stay + GAIN_EPS => c,
                _ => home,
            };
            // An empty community gains exactly zero.
            let best_gain = if target == home { stay } else { best.map_or(stay, |b| b.1) };
            if best_gain < -GAIN_EPS {
                if let Some(&c) = empty.first() {
                    target = c;
                }
            }
            total[target] += k;
            if target != home {
                size[home] -= 1;
                if size[home] == 0 {
                    empty.insert(home);
                }
                if size[target] == 0 {
                    empty.remove(&target);
                }
                size[target] += 1;
                community[node] = target;
                moved = true;
            }
            for &c in &touched {
                link_weight[c] = 0.0;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    (Cover::from_labels(community), moved_any)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn two_disconnected_edges() {
        let cover = louvain(&two_pairs(), 1).unwrap();
        assert_eq!(cover, Cover::from_labels([0, 0, 1, 1]));
        let q = modularity(&two_pairs(), &cover).unwrap();
        assert!((q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn barbell_splits_at_bridge() {
        for seed in 0..20 {
            let cover = louvain(&barbell(), seed).unwrap();
            assert_eq!(cover, Cover::from_labels([0, 0, 0, 1, 1, 1]), "seed {seed}");
        }
    }

    #[test]
    fn zero_edges_is_an_error() {
        let view = ModularityView::from_edges(4, &[]);
        assert!(matches!(louvain(&view, 0), Err(Error::EmptyGraph)));
    }

    #[test]
    fn isolated_nodes_stay_alone() {
        let view = ModularityView::from_edges(5, &[(0, 1, 1.0), (2, 3, 1.0)]);
        let cover = louvain(&view, 3).unwrap();
        assert_eq!(cover.community_count(), 3);
        let lone = cover.community(4);
        assert!((0..4).all(|i| cover.community(i) != lone));
    }

    #[test]
    fn deterministic_in_seed() {
        let edges: Vec<_> = (0..30)
            .flat_map(|i| [(i, (i + 1) % 30, 1.0), (i, (i * 7 + 3) % 30, 1.0)])
            .collect();
        let view = ModularityView::from_edges(30, &edges);
        assert_eq!(louvain(&view, 11).unwrap(), louvain(&view, 11).unwrap());
    }
}
