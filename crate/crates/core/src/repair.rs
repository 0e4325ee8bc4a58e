//! Merging temporal communities that share physical nodes.
//!
//! Each step considers every pair of communities sharing at least
//! `min_overlap` physical nodes and scores it by
//! `NA(C1 ∪ C2) - max(NA(C1), NA(C2))`. The best strictly positive pair is
//! merged (ties go to the lexicographically smallest id pair) until no pair
//! gains. Every merge removes one community, so the loop ends after at most
//! `k - 1` steps.

use std::collections::BTreeSet;

use crate::detection::Cover;
use crate::error::{Error, Result};
use crate::temporal_graph::{PhysicalNodeId, TemporalGraph};

/// One merge of community `b` into community `a`. Ids refer to the input
/// cover; a merged community keeps the smaller id.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeStep {
    pub a: usize,
    pub b: usize,
    pub merged_na: f64,
    pub gain: f64,
}

pub type MergeTrace = Vec<MergeStep>;

struct Group {
    members: Vec<usize>,
    physical: BTreeSet<PhysicalNodeId>,
}

impl Group {
    fn size(&self) -> usize {
        self.members.len()
    }

    fn z(&self) -> usize {
        self.physical.len()
    }

    fn na(&self) -> f64 {
        1.0 - self.z() as f64 / self.size() as f64
    }
}

pub fn repair(
    cover: &Cover,
    graph: &TemporalGraph,
    min_overlap: usize,
) -> Result<(Cover, MergeTrace)> {
    if cover.len() != graph.node_count() {
        return Err(Error::Mismatch(format!(
            "cover has {} nodes, graph has {}",
            cover.len(),
            graph.node_count()
        )));
    }
    if min_overlap == 0 {
        return Err(Error::Argument("min_overlap must be at least 1".into()));
    }
    let mut groups: Vec<Option<Group>> = cover
        .members()
        .into_iter()
        .map(|members| {
            let physical = members.iter().map(|&i| graph.node(i).node).collect();
            Some(Group { members, physical })
        })
        .collect();

    let mut trace = MergeTrace::new();
    while let Some(step) = best_merge(&groups, min_overlap) {
        let absorbed = groups[step.b].take().expect("live community");
        let keep = groups[step.a].as_mut().expect("live community");
        keep.members.extend(absorbed.members);
        keep.physical.extend(absorbed.physical);
        trace.push(step);
    }

    let mut labels = vec![0; cover.len()];
    for (id, group) in groups.iter().enumerate() {
        for &node in group.iter().flat_map(|g| &g.members) {
            labels[node] = id;
        }
    }
    Ok((Cover::from_labels(labels), trace))
}

fn best_merge(groups: &[Option<Group>], min_overlap: usize) -> Option<MergeStep> {
    let mut best: Option<MergeStep> = None;
    for (a, ga) in groups.iter().enumerate() {
        let Some(ga) = ga else { continue };
        for (b, gb) in groups.iter().enumerate().skip(a + 1) {
            let Some(gb) = gb else { continue };
            let overlap = ga.physical.intersection(&gb.physical).count();
            if overlap < min_overlap {
                continue;
            }
            let z = ga.z() + gb.z() - overlap;
            let size = ga.size() + gb.size();
            // NA(merged) > max(NA parts) iff z / size < min(z_i / size_i),
            // checked on integers so the sign of the gain is exact.
            let improves = [ga, gb].iter().all(|g| z * g.size() < g.z() * size);
            if !improves {
                continue;
            }
            let merged_na = 1.0 - z as f64 / size as f64;
            let gain = merged_na - ga.na().max(gb.na());
            if best.as_ref().is_none_or(|s| gain > s.gain) {
                best = Some(MergeStep {
                    a,
                    b,
                    merged_na,
                    gain,
                });
            }
        }
    }
    best
}
