//! CSV formats for covers, metric tables, and merge traces.
//!
//! | table       | header                                                |
//! |-------------|-------------------------------------------------------|
//! | cover       | `node,timestep,community`                             |
//! | communities | `community,z,temporal_size,NA,SC,HI,internal_links`   |
//! | nodes       | `node,lifetime,membership,CM,CT`                      |
//! | merge trace | `step,community_a,community_b,merged_NA,gain`         |

use std::collections::BTreeSet;

use crate::detection::Cover;
use crate::error::{Error, Result};
use crate::metrics::{CommunityReport, NodeReport};
use crate::repair::MergeTrace;
use crate::temporal_graph::{TemporalGraph, Timestep};

pub const COVER_HEADER: [&str; 3] = ["node", "timestep", "community"];
pub const COMMUNITY_HEADER: [&str; 7] = [
    "community",
    "z",
    "temporal_size",
    "NA",
    "SC",
    "HI",
    "internal_links",
];
pub const NODE_HEADER: [&str; 5] = ["node", "lifetime", "membership", "CM", "CT"];
pub const TRACE_HEADER: [&str; 5] = ["step", "community_a", "community_b", "merged_NA", "gain"];

fn to_string(rows: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    rows(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

/// One row per temporal node, in graph order, with original labels.
pub fn write_cover(graph: &TemporalGraph, cover: &Cover) -> String {
    to_string(|w| {
        w.write_record(COVER_HEADER)?;
        for (i, n) in graph.nodes().iter().enumerate() {
            w.write_record([
                graph.label(n.node),
                &n.t.to_string(),
                &cover.community(i).to_string(),
            ])?;
        }
        Ok(())
    })
}

/// A cover read back from CSV, with notes about normalization applied.
#[derive(Debug)]
pub struct CoverFile {
    pub cover: Cover,
    pub warnings: Vec<String>,
}

/// Reads a cover CSV against `graph`. Every temporal node of the graph must
/// appear exactly once. Community ids are re-densified if they have gaps.
pub fn read_cover(graph: &TemporalGraph, text: &str) -> Result<CoverFile> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    check_header(reader.headers()?, &COVER_HEADER)?;
    let mut labels: Vec<Option<u64>> = vec![None; graph.node_count()];
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let field = |k: usize| record.get(k).unwrap_or("").trim();
        let bad = |message: String| Error::Parse { line, message };
        let t: Timestep = field(1)
            .parse()
            .map_err(|_| bad(format!("invalid timestep `{}`", field(1))))?;
        let community: u64 = field(2)
            .parse()
            .map_err(|_| bad(format!("invalid community `{}`", field(2))))?;
        let node = graph.lookup(field(0), t).ok_or_else(|| {
            Error::Mismatch(format!(
                "line {line}: unknown temporal node ({}, {t})",
                field(0)
            ))
        })?;
        if labels[node].replace(community).is_some() {
            return Err(Error::Mismatch(format!(
                "line {line}: temporal node ({}, {t}) assigned twice",
                field(0)
            )));
        }
    }
    let mut missing = labels.iter().enumerate().filter(|(_, l)| l.is_none());
    if let Some((i, _)) = missing.next() {
        let n = graph.node(i);
        return Err(Error::Mismatch(format!(
            "temporal node ({}, {}) and {} more have no community",
            graph.label(n.node),
            n.t,
            missing.count()
        )));
    }
    let labels: Vec<u64> = labels.into_iter().flatten().collect();
    let ids: BTreeSet<u64> = labels.iter().copied().collect();
    let mut warnings = Vec::new();
    let dense = ids.iter().copied().eq(0..ids.len() as u64);
    if !dense {
        warnings.push(format!(
            "community ids are not contiguous ({} distinct, max {}); renumbered",
            ids.len(),
            ids.last().copied().unwrap_or(0)
        ));
    }
    Ok(CoverFile {
        cover: Cover::from_labels(labels),
        warnings,
    })
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    if found.iter().map(str::trim).eq(expected.iter().copied()) {
        Ok(())
    } else {
        Err(Error::Parse {
            line: 1,
            message: format!("expected header `{}`", expected.join(",")),
        })
    }
}

pub fn write_community_reports(reports: &[CommunityReport]) -> String {
    to_string(|w| {
        w.write_record(COMMUNITY_HEADER)?;
        for r in reports {
            w.write_record([
                r.community.to_string(),
                r.z.to_string(),
                r.temporal_size.to_string(),
                r.na.to_string(),
                r.sc.to_string(),
                r.hi.to_string(),
                r.internal_links.to_string(),
            ])?;
        }
        Ok(())
    })
}

/// Reads a community metrics table. The degenerate-HI flag is not stored and
/// reads back as `false`.
pub fn read_community_reports(text: &str) -> Result<Vec<CommunityReport>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    check_header(reader.headers()?, &COMMUNITY_HEADER)?;
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let get = |k: usize| record.get(k).unwrap_or("").trim();
        fn num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
            s.parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid number `{s}`"),
            })
        }
        out.push(CommunityReport {
            community: num(get(0), line)?,
            z: num(get(1), line)?,
            temporal_size: num(get(2), line)?,
            na: num(get(3), line)?,
            sc: num(get(4), line)?,
            hi: num(get(5), line)?,
            internal_links: num(get(6), line)?,
            hi_degenerate: false,
        });
    }
    Ok(out)
}

pub fn write_node_reports(graph: &TemporalGraph, reports: &[NodeReport]) -> String {
    to_string(|w| {
        w.write_record(NODE_HEADER)?;
        for r in reports {
            w.write_record([
                graph.label(r.node).to_owned(),
                r.lifetime.to_string(),
                r.membership.to_string(),
                r.cm.to_string(),
                r.ct.to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn write_trace(trace: &MergeTrace) -> String {
    to_string(|w| {
        w.write_record(TRACE_HEADER)?;
        for (i, s) in trace.iter().enumerate() {
            w.write_record([
                (i + 1).to_string(),
                s.a.to_string(),
                s.b.to_string(),
                s.merged_na.to_string(),
                s.gain.to_string(),
            ])?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::community_reports;
    use crate::temporal_graph::RawLink;

    fn graph() -> TemporalGraph {
        TemporalGraph::from_links(&[
            RawLink::new("A", 2, "B", 1),
            RawLink::new("A", 3, "A", 2),
            RawLink::new("C,x", 3, "B", 1),
        ])
    }

    #[test]
    fn cover_round_trip() {
        let g = graph();
        let cover = Cover::from_labels([0, 0, 1, 2]);
        let text = write_cover(&g, &cover);
        assert!(text.starts_with("node,timestep,community\nA,2,0\n"));
        assert!(text.contains("\"C,x\",3,2"));
        let back = read_cover(&g, &text).unwrap();
        assert_eq!(back.cover, cover);
        assert!(back.warnings.is_empty());
    }

    #[test]
    fn cover_gaps_are_densified() {
        let g = graph();
        let text = "node,timestep,community\nA,2,4\nA,3,4\nB,1,9\n\"C,x\",3,0\n";
        let back = read_cover(&g, text).unwrap();
        assert_eq!(back.cover.assignment(), &[0, 0, 1, 2]);
        assert_eq!(back.warnings.len(), 1);
    }

    #[test]
    fn cover_mismatches() {
        let g = graph();
        let unknown = "node,timestep,community\nA,2,0\nA,3,0\nB,1,0\n\"C,x\",3,0\nZ,1,0\n";
        assert!(matches!(read_cover(&g, unknown), Err(Error::Mismatch(_))));
        let missing = "node,timestep,community\nA,2,0\n";
        assert!(matches!(read_cover(&g, missing), Err(Error::Mismatch(_))));
        let twice = "node,timestep,community\nA,2,0\nA,2,1\n";
        assert!(matches!(read_cover(&g, twice), Err(Error::Mismatch(_))));
        let header = "a,b,c\n";
        assert!(matches!(read_cover(&g, header), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn community_table_round_trip() {
        let g = graph();
        let reports = community_reports(&g, &Cover::from_labels([0, 0, 1, 1])).unwrap();
        let text = write_community_reports(&reports);
        assert!(text.starts_with("community,z,temporal_size,NA,SC,HI,internal_links\n"));
        let back = read_community_reports(&text).unwrap();
        for (a, b) in reports.iter().zip(&back) {
            assert_eq!((a.community, a.z, a.temporal_size), (b.community, b.z, b.temporal_size));
            assert_eq!((a.na, a.sc, a.hi), (b.na, b.sc, b.hi));
        }
    }
}
