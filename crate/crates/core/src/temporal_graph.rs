//! Diachronic data model: raw timestamped links, the temporal graph built on
//! `(node, timestep)` vertices, and its time-aggregated physical projection.
//!
//! Link files hold one link per line as four whitespace-separated fields,
//! `src_label src_time dst_label dst_time`. Lines starting with `#` and blank
//! lines are skipped.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Discretized time unit (years, days, ...).
pub type Timestep = u64;

/// Dense index of a physical node label within one [`TemporalGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhysicalNodeId(pub u32);

impl PhysicalNodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A physical node observed at one timestep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemporalNode {
    pub node: PhysicalNodeId,
    pub t: Timestep,
}

/// One line of a link file: `source` at `source_time` cites `target` at
/// `target_time`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RawLink {
    pub source: String,
    pub source_time: Timestep,
    pub target: String,
    pub target_time: Timestep,
}

impl RawLink {
    pub fn new(
        source: impl Into<String>,
        source_time: Timestep,
        target: impl Into<String>,
        target_time: Timestep,
    ) -> Self {
        Self {
            source: source.into(),
            source_time,
            target: target.into(),
            target_time,
        }
    }
}

/// How strictly link timestamps are checked while parsing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ValidationMode {
    /// Citation data: a link may only point to the same or an earlier timestep.
    #[default]
    StrictCitation,
    /// Generic diachronic data: any pair of timesteps is accepted.
    Permissive,
}

/// Reads links from a link file. Duplicated lines are preserved.
pub fn parse_links<R: BufRead>(reader: R, mode: ValidationMode) -> Result<Vec<RawLink>> {
    let mut links = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let time = |s: &str| {
            s.parse::<Timestep>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid timestep `{s}`"),
            })
        };
        let link = RawLink::new(fields[0], time(fields[1])?, fields[2], time(fields[3])?);
        if mode == ValidationMode::StrictCitation && link.target_time > link.source_time {
            return Err(Error::Validation {
                line: line_no,
                source_label: link.source,
                source_time: link.source_time,
                target_label: link.target,
                target_time: link.target_time,
            });
        }
        links.push(link);
    }
    Ok(links)
}

pub fn parse_links_str(text: &str, mode: ValidationMode) -> Result<Vec<RawLink>> {
    parse_links(text.as_bytes(), mode)
}

/// Writes links in link-file format, one per line, in the given order.
pub fn write_links<W: Write>(mut out: W, links: &[RawLink]) -> std::io::Result<()> {
    for l in links {
        writeln!(
            out,
            "{} {} {} {}",
            l.source, l.source_time, l.target, l.target_time
        )?;
    }
    Ok(())
}

/// A directed temporal link between two node indices of a [`TemporalGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TemporalLink {
    pub source: usize,
    pub target: usize,
    /// Number of identical raw links folded into this one.
    pub weight: u64,
}

/// Directed weighted graph over temporal nodes.
///
/// Labels are sorted lexicographically and temporal nodes are sorted by
/// `(label, timestep)`, so the same multiset of raw links always produces the
/// same indices regardless of input order. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalGraph {
    labels: Vec<String>,
    nodes: Vec<TemporalNode>,
    index: HashMap<TemporalNode, usize>,
    links: Vec<TemporalLink>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    total_weight: u64,
}

type LinkWeights = BTreeMap<(TemporalNode, TemporalNode), u64>;

impl TemporalGraph {
    pub fn from_links(links: &[RawLink]) -> Self {
        Self::with_isolated(links, &[])
    }

    /// Builds the graph from raw links plus explicitly declared temporal
    /// nodes that may carry no link.
    pub fn with_isolated(links: &[RawLink], isolated: &[(String, Timestep)]) -> Self {
        let mut label_set: BTreeSet<&str> = BTreeSet::new();
        for l in links {
            label_set.insert(&l.source);
            label_set.insert(&l.target);
        }
        for (label, _) in isolated {
            label_set.insert(label);
        }
        let labels: Vec<String> = label_set.into_iter().map(str::to_owned).collect();
        let ids: HashMap<&str, PhysicalNodeId> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), PhysicalNodeId(i as u32)))
            .collect();
        let tnode = |label: &str, t| TemporalNode { node: ids[label], t };

        let mut nodes = BTreeSet::new();
        let mut weights = LinkWeights::new();
        for l in links {
            let s = tnode(&l.source, l.source_time);
            let d = tnode(&l.target, l.target_time);
            nodes.insert(s);
            nodes.insert(d);
            *weights.entry((s, d)).or_insert(0) += 1;
        }
        for (label, t) in isolated {
            nodes.insert(tnode(label, *t));
        }
        Self::assemble(labels, nodes, weights)
    }

    fn assemble(labels: Vec<String>, nodes: BTreeSet<TemporalNode>, weights: LinkWeights) -> Self {
        let nodes: Vec<TemporalNode> = nodes.into_iter().collect();
        let index: HashMap<TemporalNode, usize> =
            nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut outgoing = vec![Vec::new(); nodes.len()];
        let mut incoming = vec![Vec::new(); nodes.len()];
        let mut links = Vec::with_capacity(weights.len());
        let mut total_weight = 0;
        for ((s, d), weight) in weights {
            let (source, target) = (index[&s], index[&d]);
            outgoing[source].push(links.len());
            incoming[target].push(links.len());
            links.push(TemporalLink {
                source,
                target,
                weight,
            });
            total_weight += weight;
        }
        let graph = Self {
            labels,
            nodes,
            index,
            links,
            outgoing,
            incoming,
            total_weight,
        };
        debug_assert_eq!(
            graph.total_weight,
            graph.links.iter().map(|l| l.weight).sum::<u64>()
        );
        graph
    }

    /// Physical node labels, indexed by [`PhysicalNodeId`].
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, id: PhysicalNodeId) -> &str {
        &self.labels[id.index()]
    }

    pub fn physical_id(&self, label: &str) -> Option<PhysicalNodeId> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .ok()
            .map(|i| PhysicalNodeId(i as u32))
    }

    pub fn physical_count(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> &[TemporalNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> TemporalNode {
        self.nodes[index]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_index(&self, node: TemporalNode) -> Option<usize> {
        self.index.get(&node).copied()
    }

    /// Index of the temporal node `(label, t)`, if present.
    pub fn lookup(&self, label: &str, t: Timestep) -> Option<usize> {
        let node = self.physical_id(label)?;
        self.node_index(TemporalNode { node, t })
    }

    /// Distinct directed links, sorted by `(source, target)`.
    pub fn links(&self) -> &[TemporalLink] {
        &self.links
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    /// Indices into [`links`](Self::links) of the links leaving `node`.
    pub fn outgoing(&self, node: usize) -> &[usize] {
        &self.outgoing[node]
    }

    pub fn incoming(&self, node: usize) -> &[usize] {
        &self.incoming[node]
    }

    /// Number of raw links the graph was built from.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    /// Expands weighted links back into raw links, sorted.
    pub fn to_raw_links(&self) -> Vec<RawLink> {
        let mut out = Vec::with_capacity(self.total_weight as usize);
        for l in &self.links {
            let (s, d) = (self.nodes[l.source], self.nodes[l.target]);
            for _ in 0..l.weight {
                out.push(RawLink::new(
                    self.label(s.node),
                    s.t,
                    self.label(d.node),
                    d.t,
                ));
            }
        }
        out
    }

    /// Temporal nodes carrying no link at all.
    pub fn isolated(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.outgoing[i].is_empty() && self.incoming[i].is_empty())
    }

    /// Aggregates all links over time into the physical graph.
    pub fn project_physical(&self) -> PhysicalGraph {
        let mut edges = BTreeMap::new();
        for l in &self.links {
            let key = (self.nodes[l.source].node, self.nodes[l.target].node);
            *edges.entry(key).or_insert(0) += l.weight;
        }
        let nodes: BTreeSet<PhysicalNodeId> = self.nodes.iter().map(|n| n.node).collect();
        PhysicalGraph {
            labels: self.labels.clone(),
            nodes: nodes.into_iter().collect(),
            edges,
        }
    }

    /// Maps every timestep `t` to `t / k`. Temporal nodes landing in the same
    /// bin merge and their link multiplicities add up.
    pub fn coarsen_time(&self, k: Timestep) -> Result<Self> {
        if k == 0 {
            return Err(Error::Argument("coarsening factor must be at least 1".into()));
        }
        let bin = |n: TemporalNode| TemporalNode {
            node: n.node,
            t: n.t / k,
        };
        let nodes: BTreeSet<TemporalNode> = self.nodes.iter().map(|&n| bin(n)).collect();
        let mut weights = LinkWeights::new();
        for l in &self.links {
            let key = (bin(self.nodes[l.source]), bin(self.nodes[l.target]));
            *weights.entry(key).or_insert(0) += l.weight;
        }
        Ok(Self::assemble(self.labels.clone(), nodes, weights))
    }
}

/// Time-aggregated directed graph over physical nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhysicalGraph {
    labels: Vec<String>,
    nodes: Vec<PhysicalNodeId>,
    edges: BTreeMap<(PhysicalNodeId, PhysicalNodeId), u64>,
}

impl PhysicalGraph {
    pub fn nodes(&self) -> &[PhysicalNodeId] {
        &self.nodes
    }

    pub fn label(&self, id: PhysicalNodeId) -> &str {
        &self.labels[id.index()]
    }

    /// Directed edges `(source, target, weight)` in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (PhysicalNodeId, PhysicalNodeId, u64)> + '_ {
        self.edges.iter().map(|(&(s, d), &w)| (s, d, w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, source: PhysicalNodeId, target: PhysicalNodeId) -> u64 {
        self.edges.get(&(source, target)).copied().unwrap_or(0)
    }

    /// Edges keyed by label pairs; handy when comparing graphs built from
    /// different label sets.
    pub fn labeled_edges(&self) -> BTreeMap<(&str, &str), u64> {
        self.edges
            .iter()
            .map(|(&(s, d), &w)| ((self.label(s), self.label(d)), w))
            .collect()
    }
}
