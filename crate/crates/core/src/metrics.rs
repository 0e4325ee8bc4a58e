//! Temporal community metrics and per-node behavior statistics.
//!
//! For a community `C` of temporal nodes:
//! - `z` counts the distinct physical nodes in `C`;
//! - node activity `NA = 1 - z / |C|` measures how often nodes recur;
//! - self-citation `SC` is the weight share of internal links joining two
//!   instances of one physical node;
//! - heterogeneity `HI` rescales the inverse Herfindahl index of outgoing
//!   internal link weight per physical node into `[0, 1]`.
//!
//! Only internal links (both endpoints in `C`) enter `SC` and `HI`, and link
//! weights count as multiplicities.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

use crate::detection::Cover;
use crate::error::{Error, Result};
use crate::temporal_graph::{PhysicalNodeId, TemporalGraph, TemporalNode};

/// Metrics of one temporal community.
#[derive(Clone, Debug, PartialEq)]
pub struct CommunityReport {
    pub community: usize,
    pub z: usize,
    pub temporal_size: usize,
    pub na: f64,
    pub sc: f64,
    pub hi: f64,
    /// Total weight of links with both endpoints inside.
    pub internal_links: u64,
    /// `HI` is 0/0 here (one physical node, or no internal link) and was set
    /// to 1 by convention.
    pub hi_degenerate: bool,
}

/// Behavior of one physical node across its temporal instances.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeReport {
    pub node: PhysicalNodeId,
    /// Number of distinct active timesteps.
    pub lifetime: usize,
    /// Number of distinct communities over the node's instances.
    pub membership: usize,
    /// `membership / lifetime`.
    pub cm: f64,
    /// Share of consecutive active timesteps at which the community changes.
    pub ct: f64,
}

fn require_nonempty(len: usize) -> Result<()> {
    if len == 0 {
        Err(Error::Argument("community is empty".into()))
    } else {
        Ok(())
    }
}

/// Number of distinct physical nodes.
pub fn community_size(members: &[TemporalNode]) -> Result<usize> {
    require_nonempty(members.len())?;
    Ok(members.iter().map(|n| n.node).collect::<HashSet<_>>().len())
}

pub fn node_activity(members: &[TemporalNode]) -> Result<f64> {
    let z = community_size(members)?;
    Ok(1.0 - z as f64 / members.len() as f64)
}

#[derive(Default)]
struct InternalLinks {
    total: u64,
    self_links: u64,
    by_source: BTreeMap<PhysicalNodeId, u64>,
}

fn internal_links(graph: &TemporalGraph, members: &[usize]) -> InternalLinks {
    let inside: HashSet<usize> = members.iter().copied().collect();
    let mut acc = InternalLinks::default();
    for &v in members {
        for &li in graph.outgoing(v) {
            let link = graph.links()[li];
            if !inside.contains(&link.target) {
                continue;
            }
            let source = graph.node(link.source).node;
            acc.total += link.weight;
            if source == graph.node(link.target).node {
                acc.self_links += link.weight;
            }
            *acc.by_source.entry(source).or_insert(0) += link.weight;
        }
    }
    acc
}

fn physical_nodes(graph: &TemporalGraph, members: &[usize]) -> usize {
    members
        .iter()
        .map(|&i| graph.node(i).node)
        .collect::<HashSet<_>>()
        .len()
}

/// Self-citation ratio of the community given by node indices of `graph`.
/// Zero when there is no internal link.
pub fn self_citation(graph: &TemporalGraph, members: &[usize]) -> Result<f64> {
    require_nonempty(members.len())?;
    let links = internal_links(graph, members);
    Ok(sc_from(&links))
}

fn sc_from(links: &InternalLinks) -> f64 {
    if links.total == 0 {
        0.0
    } else {
        links.self_links as f64 / links.total as f64
    }
}

/// Heterogeneity index. One for a single physical node or no internal link.
pub fn heterogeneity(graph: &TemporalGraph, members: &[usize]) -> Result<f64> {
    require_nonempty(members.len())?;
    let links = internal_links(graph, members);
    Ok(hi_from(physical_nodes(graph, members), &links).0)
}

fn hi_from(z: usize, links: &InternalLinks) -> (f64, bool) {
    if z <= 1 || links.total == 0 {
        return (1.0, true);
    }
    let total = links.total as f64;
    let concentration: f64 = links
        .by_source
        .values()
        .map(|&w| (w as f64 / total).powi(2))
        .sum();
    // h = 1 / (z * sum p^2) and HI = (z h - 1) / (z - 1).
    let hi = (1.0 / concentration - 1.0) / (z - 1) as f64;
    (hi.clamp(0.0, 1.0), false)
}

/// Normalized count of node pairs grouped together by exactly one of the two
/// assignments. Both slices are indexed by the same nodes.
pub fn dissimilarity<A, B>(a: &[A], b: &[B]) -> Result<f64>
where
    A: Eq + Hash,
    B: Eq + Hash,
{
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "assignments cover {} and {} nodes",
            a.len(),
            b.len()
        )));
    }
    let n = a.len() as u64;
    if n < 2 {
        return Err(Error::Argument("dissimilarity needs at least two nodes".into()));
    }
    fn same_pairs<K: Eq + Hash>(keys: impl Iterator<Item = K>) -> u64 {
        let mut counts: HashMap<K, u64> = HashMap::new();
        for k in keys {
            *counts.entry(k).or_insert(0) += 1;
        }
        counts.values().map(|c| c * (c - 1) / 2).sum()
    }
    let in_a = same_pairs(a.iter());
    let in_b = same_pairs(b.iter());
    let in_both = same_pairs(a.iter().zip(b.iter()));
    let disagreements = in_a + in_b - 2 * in_both;
    Ok(disagreements as f64 / (n * (n - 1) / 2) as f64)
}

/// [`dissimilarity`] over assignments keyed by node; key sets must match.
pub fn dissimilarity_keyed<K, A, B>(a: &BTreeMap<K, A>, b: &BTreeMap<K, B>) -> Result<f64>
where
    K: Ord,
    A: Eq + Hash,
    B: Eq + Hash,
{
    if a.len() != b.len() || !a.keys().zip(b.keys()).all(|(x, y)| x == y) {
        return Err(Error::Argument("assignments cover different node sets".into()));
    }
    let la: Vec<&A> = a.values().collect();
    let lb: Vec<&B> = b.values().collect();
    dissimilarity(&la, &lb)
}

fn check_cover(graph: &TemporalGraph, cover: &Cover) -> Result<()> {
    if cover.len() != graph.node_count() {
        return Err(Error::Mismatch(format!(
            "cover has {} nodes, graph has {}",
            cover.len(),
            graph.node_count()
        )));
    }
    Ok(())
}

/// One report per community of `cover`, in community id order.
pub fn community_reports(graph: &TemporalGraph, cover: &Cover) -> Result<Vec<CommunityReport>> {
    check_cover(graph, cover)?;
    let reports = cover
        .members()
        .into_iter()
        .enumerate()
        .map(|(community, members)| {
            let z = physical_nodes(graph, &members);
            let links = internal_links(graph, &members);
            let (hi, hi_degenerate) = hi_from(z, &links);
            CommunityReport {
                community,
                z,
                temporal_size: members.len(),
                na: 1.0 - z as f64 / members.len() as f64,
                sc: sc_from(&links),
                hi,
                internal_links: links.total,
                hi_degenerate,
            }
        })
        .collect();
    Ok(reports)
}

/// One report per physical node present in the graph, in label order.
pub fn node_reports(graph: &TemporalGraph, cover: &Cover) -> Result<Vec<NodeReport>> {
    check_cover(graph, cover)?;
    let mut reports = Vec::new();
    // Nodes are sorted by (physical id, timestep), so instances are contiguous.
    let nodes = graph.nodes();
    let mut start = 0;
    while start < nodes.len() {
        let id = nodes[start].node;
        let end = start + nodes[start..].iter().take_while(|n| n.node == id).count();
        let communities: Vec<usize> = (start..end).map(|i| cover.community(i)).collect();
        let lifetime = communities.len();
        let membership = communities.iter().collect::<HashSet<_>>().len();
        let toggles = communities.windows(2).filter(|w| w[0] != w[1]).count();
        reports.push(NodeReport {
            node: id,
            lifetime,
            membership,
            cm: membership as f64 / lifetime as f64,
            ct: if lifetime > 1 {
                toggles as f64 / (lifetime - 1) as f64
            } else {
                0.0
            },
        });
        start = end;
    }
    Ok(reports)
}

/// Averages over a set of community reports.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MeanMetrics {
    pub na: f64,
    pub sc: f64,
    pub hi: f64,
    pub z: f64,
}

impl MeanMetrics {
    pub fn of(reports: &[CommunityReport]) -> Self {
        if reports.is_empty() {
            return Self::default();
        }
        let k = reports.len() as f64;
        let mean = |f: fn(&CommunityReport) -> f64| reports.iter().map(f).sum::<f64>() / k;
        Self {
            na: mean(|r| r.na),
            sc: mean(|r| r.sc),
            hi: mean(|r| r.hi),
            z: mean(|r| r.z as f64),
        }
    }
}
