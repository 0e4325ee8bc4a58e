use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use diachron_core::detection::{detect, Algorithm};
use diachron_core::generator::{cell_config, generate, SweepParam};
use diachron_core::io::{
    read_community_reports, read_cover, write_community_reports, write_cover, write_node_reports,
    write_trace,
};
use diachron_core::metrics::{community_reports, dissimilarity, node_reports, MeanMetrics};
use diachron_core::repair::repair;
use diachron_core::temporal_graph::{parse_links, write_links, ValidationMode};
use diachron_core::{Cover, GeneratorConfig, TemporalGraph, Timestep};
use rayon::prelude::*;

use crate::profile;
use crate::UsageError;

pub struct GraphInput<'a> {
    pub links: &'a Path,
    pub permissive: bool,
    pub coarsen: Timestep,
}

impl GraphInput<'_> {
    pub fn load(&self) -> Result<TemporalGraph> {
        let mode = if self.permissive {
            ValidationMode::Permissive
        } else {
            ValidationMode::StrictCitation
        };
        let file = fs::File::open(self.links)
            .with_context(|| format!("cannot open {}", self.links.display()))?;
        let links = parse_links(std::io::BufReader::new(file), mode)
            .with_context(|| format!("reading {}", self.links.display()))?;
        let graph = TemporalGraph::from_links(&links);
        if self.coarsen == 1 {
            return Ok(graph);
        }
        Ok(graph.coarsen_time(self.coarsen)?)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn load_config(path: &Path) -> Result<GeneratorConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    Ok(GeneratorConfig::from_json(&text)?)
}

fn load_cover(graph: &TemporalGraph, path: &Path) -> Result<Cover> {
    let file = read_cover(graph, &read(path)?).with_context(|| format!("reading {}", path.display()))?;
    for w in &file.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(file.cover)
}

fn links_text(links: &[diachron_core::RawLink]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_links(&mut buf, links).expect("writing to memory");
    buf
}

pub fn default_assignment_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".assignment");
    PathBuf::from(name)
}

pub fn generate_cmd(config: &Path, out: &Path, assignment: Option<&Path>) -> Result<()> {
    let config = load_config(config)?;
    let (links, planted) = generate(&config)?;
    write(out, links_text(&links))?;
    let sidecar = assignment.map_or_else(|| default_assignment_path(out), Path::to_path_buf);
    write(&sidecar, planted.to_text())?;
    eprintln!(
        "wrote {} links to {} and planted assignment to {}",
        links.len(),
        out.display(),
        sidecar.display()
    );
    Ok(())
}

pub fn detect_cmd(input: &GraphInput, out: &Path, algorithm: Algorithm, seed: u64) -> Result<()> {
    let graph = input.load()?;
    let cover = detect(&graph, algorithm, seed)?;
    write(out, write_cover(&graph, &cover))?;
    eprintln!(
        "{} temporal nodes in {} communities",
        graph.node_count(),
        cover.community_count()
    );
    Ok(())
}

pub fn metrics_cmd(
    input: &GraphInput,
    cover: &Path,
    communities: Option<&Path>,
    nodes: Option<&Path>,
) -> Result<()> {
    let graph = input.load()?;
    let cover = load_cover(&graph, cover)?;
    let community_csv = write_community_reports(&community_reports(&graph, &cover)?);
    let node_csv = write_node_reports(&graph, &node_reports(&graph, &cover)?);
    match communities {
        Some(path) => write(path, &community_csv)?,
        None => print!("{community_csv}"),
    }
    match nodes {
        Some(path) => write(path, &node_csv)?,
        None => {
            if communities.is_none() {
                println!();
            }
            print!("{node_csv}");
        }
    }
    Ok(())
}

pub fn profile_cmd(communities: &Path, out: Option<&Path>) -> Result<()> {
    let reports = read_community_reports(&read(communities)?)
        .with_context(|| format!("reading {}", communities.display()))?;
    let svg = profile::render(&reports);
    match out {
        Some(path) => write(path, svg),
        None => {
            print!("{svg}");
            Ok(())
        }
    }
}

pub const SUMMARY_HEADER: &str = "value,seed,communities,D,mean_NA,mean_SC,mean_HI,mean_z";

struct CellSummary {
    communities: usize,
    d: f64,
    means: MeanMetrics,
}

#[allow(clippy::too_many_arguments)]
pub fn sweep_cmd(
    config: &Path,
    param: SweepParam,
    values: &[f64],
    seeds: &[u64],
    out: &Path,
    jobs: usize,
    algorithm: Algorithm,
) -> Result<()> {
    let base = load_config(config)?;
    if values.is_empty() || seeds.is_empty() {
        return Err(UsageError("sweep needs at least one value and one seed".into()).into());
    }
    let cells: Vec<(f64, u64, GeneratorConfig)> = values
        .iter()
        .flat_map(|&v| seeds.iter().map(move |&s| (v, s)))
        .map(|(v, s)| (v, s, cell_config(&base, param, v, s)))
        .collect();
    for (_, _, c) in &cells {
        c.validate()?;
    }
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let name = match param {
        SweepParam::P => "p",
        SweepParam::D => "d",
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .context("cannot start worker pool")?;
    let results: Vec<Result<CellSummary>> = pool.install(|| {
        cells
            .par_iter()
            .map(|(value, seed, config)| {
                let dir = out.join(format!("{name}={value}_seed={seed}"));
                fs::create_dir_all(&dir)?;
                let (links, planted) = generate(config)?;
                let graph = TemporalGraph::from_links(&links);
                let cover = detect(&graph, algorithm, config.seed)?;
                let reports = community_reports(&graph, &cover)?;
                let truth = planted.temporal_labels(&graph)?;
                let d = dissimilarity(&truth, cover.assignment())?;
                write(&dir.join("config.json"), config.to_json())?;
                write(&dir.join("links.txt"), links_text(&links))?;
                write(&dir.join("planted.txt"), planted.to_text())?;
                write(&dir.join("cover.csv"), write_cover(&graph, &cover))?;
                write(&dir.join("communities.csv"), write_community_reports(&reports))?;
                Ok(CellSummary {
                    communities: cover.community_count(),
                    d,
                    means: MeanMetrics::of(&reports),
                })
            })
            .collect()
    });
    let mut summary = String::from(SUMMARY_HEADER);
    summary.push('\n');
    for ((value, seed, _), result) in cells.iter().zip(results) {
        let s = result?;
        summary.push_str(&format!(
            "{value},{seed},{},{},{},{},{},{}\n",
            s.communities, s.d, s.means.na, s.means.sc, s.means.hi, s.means.z
        ));
    }
    write(&out.join("summary.csv"), summary)?;
    eprintln!("{} cells written to {}", cells.len(), out.display());
    Ok(())
}

pub fn repair_cmd(
    input: &GraphInput,
    cover: &Path,
    min_overlap: usize,
    out: &Path,
    trace_out: &Path,
) -> Result<()> {
    let graph = input.load()?;
    let cover = load_cover(&graph, cover)?;
    let (repaired, trace) = repair(&cover, &graph, min_overlap)?;
    write(out, write_cover(&graph, &repaired))?;
    write(trace_out, write_trace(&trace))?;
    eprintln!(
        "{} merges: {} -> {} communities",
        trace.len(),
        cover.community_count(),
        repaired.community_count()
    );
    Ok(())
}
