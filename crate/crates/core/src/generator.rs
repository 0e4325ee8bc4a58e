//! Planted-community synthetic citation data.
//!
//! `n = m * n_c` physical nodes are split into `n_c` contiguous blocks of `m`
//! members. At every timestep `t` in `1..=t_max`, `d * n` links are emitted:
//! the source is drawn uniformly among all nodes, the target node lies in the
//! source's block with probability `p` (self included) and in another block
//! otherwise, and the target timestep is uniform over `max(1, t - w)..=t`.
//! A temporal node never cites itself at the same instant.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal_graph::{RawLink, TemporalGraph, Timestep};

/// Benchmark parameters. Serialized as a flat JSON object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Number of planted communities.
    pub n_c: usize,
    /// Members per community.
    pub m: usize,
    pub t_max: Timestep,
    /// Sliding window width, in timesteps.
    pub w: Timestep,
    /// Average out-degree per temporal node per timestep.
    pub d: f64,
    /// Intra-community citation probability.
    pub p: f64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            n_c: 4,
            m: 5,
            t_max: 20,
            w: 10,
            d: 3.0,
            p: 1.0,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Number of physical nodes.
    pub fn node_count(&self) -> usize {
        self.n_c * self.m
    }

    /// `d * n`, the number of links emitted at each timestep.
    pub fn links_per_step(&self) -> Result<usize> {
        let exact = self.d * self.node_count() as f64;
        let rounded = exact.round();
        if !exact.is_finite() || rounded < 1.0 || (exact - rounded).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "d * n = {exact} must be a positive integer"
            )));
        }
        Ok(rounded as usize)
    }

    /// Probability of an intra-community link under fully random linking.
    pub fn p_random(&self) -> f64 {
        1.0 / self.n_c as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_c == 0 || self.m == 0 || self.t_max == 0 {
            return Err(Error::Config("n_c, m and t_max must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Config(format!("p = {} is outside [0, 1]", self.p)));
        }
        if self.n_c == 1 && self.p < 1.0 {
            return Err(Error::Config(
                "p < 1 needs at least two communities to link across".into(),
            ));
        }
        if self.m == 1 && self.p > 0.0 {
            // The only intra-community target at t = 1 would be the source itself.
            return Err(Error::Config(
                "p > 0 needs at least two members per community".into(),
            ));
        }
        self.links_per_step()?;
        Ok(())
    }
}

/// A-priori community of every physical node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedAssignment {
    labels: Vec<String>,
    communities: Vec<usize>,
}

impl PlantedAssignment {
    /// Contiguous blocks: node `i` belongs to community `i / m`.
    pub fn blocks(n_c: usize, m: usize) -> Self {
        let n = n_c * m;
        let width = n.saturating_sub(1).to_string().len();
        Self {
            labels: (0..n).map(|i| format!("v{i:0width$}")).collect(),
            communities: (0..n).map(|i| i / m).collect(),
        }
    }

    pub fn from_pairs(pairs: Vec<(String, usize)>) -> Self {
        let (labels, communities) = pairs.into_iter().unzip();
        Self {
            labels,
            communities,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn community(&self, node: usize) -> usize {
        self.communities[node]
    }

    pub fn community_of(&self, label: &str) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.communities[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.communities.iter().copied())
    }

    /// Planted community of every temporal node of `graph`, by node index.
    pub fn temporal_labels(&self, graph: &TemporalGraph) -> Result<Vec<usize>> {
        let by_label: std::collections::HashMap<&str, usize> = self.iter().collect();
        graph
            .nodes()
            .iter()
            .map(|n| {
                let label = graph.label(n.node);
                by_label
                    .get(label)
                    .copied()
                    .ok_or_else(|| Error::Mismatch(format!("node `{label}` has no planted community")))
            })
            .collect()
    }

    /// Sidecar format: `label community_index` per line.
    pub fn to_text(&self) -> String {
        self.iter().map(|(l, c)| format!("{l} {c}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let mut fields = line.split_whitespace();
            let (Some(label), Some(c), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(bad("expected `label community_index`".into()));
            };
            let c = c
                .parse()
                .map_err(|_| bad(format!("invalid community index `{c}`")))?;
            pairs.push((label.to_owned(), c));
        }
        Ok(Self::from_pairs(pairs))
    }
}

/// Generates one benchmark dataset. Deterministic in `config.seed`.
pub fn generate(config: &GeneratorConfig) -> Result<(Vec<RawLink>, PlantedAssignment)> {
    config.validate()?;
    let per_step = config.links_per_step()?;
    let planted = PlantedAssignment::blocks(config.n_c, config.m);
    let n = config.node_count();
    let m = config.m;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut links = Vec::with_capacity(per_step * config.t_max as usize);

    for t in 1..=config.t_max {
        let earliest = t.saturating_sub(config.w).max(1);
        for _ in 0..per_step {
            let source = rng.gen_range(0..n);
            let block = source / m;
            let intra = rng.gen_bool(config.p);
            let mut target = if intra {
                block * m + rng.gen_range(0..m)
            } else {
                // Uniform over the n - m nodes outside the source's block.
                let k = rng.gen_range(0..n - m);
                if k < block * m {
                    k
                } else {
                    k + m
                }
            };
            let mut t_target = rng.gen_range(earliest..=t);
            if target == source && t_target == t {
                if earliest < t {
                    t_target = rng.gen_range(earliest..t);
                } else {
                    // Single-step window: only another member can be cited.
                    let k = rng.gen_range(0..m - 1);
                    target = block * m + if k < source - block * m { k } else { k + 1 };
                }
            }
            links.push(RawLink::new(
                planted.label(source),
                t,
                planted.label(target),
                t_target,
            ));
        }
    }
    Ok((links, planted))
}

/// Parameter varied by a [`sweep`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    P,
    D,
}

impl std::str::FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(Self::P),
            "d" => Ok(Self::D),
            _ => Err(Error::Argument(format!("unknown sweep parameter `{s}`"))),
        }
    }
}

/// One dataset of a parameter sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub value: f64,
    pub seed: u64,
    pub config: GeneratorConfig,
    pub links: Vec<RawLink>,
    pub planted: PlantedAssignment,
}

/// Seed of a sweep cell, a fixed mix of the user seed and the swept value.
pub fn cell_seed(seed: u64, value: f64) -> u64 {
    let mut z = seed ^ value.to_bits().rotate_left(17) ^ 0x9E37_79B9_7F4A_7C15;
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Config of the `(value, seed)` cell derived from `base`.
pub fn cell_config(
    base: &GeneratorConfig,
    param: SweepParam,
    value: f64,
    seed: u64,
) -> GeneratorConfig {
    let mut config = base.clone();
    match param {
        SweepParam::P => config.p = value,
        SweepParam::D => config.d = value,
    }
    config.seed = cell_seed(seed, value);
    config
}

/// Generates one dataset per `(value, seed)` pair, values-major.
pub fn sweep(
    base: &GeneratorConfig,
    param: SweepParam,
    values: &[f64],
    seeds: &[u64],
) -> Result<Vec<SweepCell>> {
    if values.is_empty() || seeds.is_empty() {
        return Err(Error::Argument("sweep needs at least one value and one seed".into()));
    }
    let mut cells = Vec::with_capacity(values.len() * seeds.len());
    for &value in values {
        for &seed in seeds {
            let config = cell_config(base, param, value, seed);
            let (links, planted) = generate(&config)?;
            cells.push(SweepCell {
                value,
                seed,
                config,
                links,
                planted,
            });
        }
    }
    Ok(cells)
}
