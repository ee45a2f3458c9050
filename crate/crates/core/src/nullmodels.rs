//! Comparison graphs for the tag network: Barabási–Albert growth over the
//! observed tag pool, and the coordinate-permuted ("diffeomorphic") graph that
//! keeps the observed topology.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::netmetrics::{EdgeCoordinates, ExpositionWeighting, NodeLabel, TagNetwork, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullModelConfig {
    pub seed: u64,
    pub n: usize,
    /// Edges added per new vertex.
    pub m: usize,
    pub lambda: f64,
    /// Allow `n` beyond the observed tag pool; extra vertices get `ba-<i>`
    /// labels and annotations resampled from the pool.
    pub synthetic: bool,
}

impl NullModelConfig {
    /// Size-matched to `network`: same node count, `m = round(edges / nodes)`.
    pub fn matching(network: &TagNetwork, seed: u64, lambda: f64) -> Self {
        let n = network.nodes.len();
        let m = if n == 0 {
            1
        } else {
            ((network.edges.len() as f64 / n as f64).round() as usize).clamp(1, n.saturating_sub(1).max(1))
        };
        Self {
            seed,
            n,
            m,
            lambda,
            synthetic: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 || self.m >= self.n {
            return Err(Error::Config(format!(
                "attachment count m = {} must satisfy 1 <= m < n = {}",
                self.m, self.n
            )));
        }
        Ok(())
    }
}

/// Edge count of a BA graph grown from an `(m+1)`-clique to `n` vertices.
pub fn ba_edge_count(n: usize, m: usize) -> usize {
    m * (m + 1) / 2 + m * (n - m - 1)
}

/// Preferential-attachment topology: an `(m+1)`-clique, then each new vertex
/// links to `m` distinct earlier vertices drawn proportionally to degree.
pub fn ba_topology(n: usize, m: usize, rng: &mut impl Rng) -> Result<Vec<(usize, usize)>> {
    if m < 1 || m >= n {
        return Err(Error::Config(format!(
            "attachment count m = {m} must satisfy 1 <= m < n = {n}"
        )));
    }
    let mut edges = Vec::with_capacity(ba_edge_count(n, m));
    // each edge contributes both endpoints, so a uniform draw is degree-biased
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * ba_edge_count(n, m));
    for i in 0..=m {
        for j in i + 1..=m {
            edges.push((i, j));
            endpoints.extend([i, j]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in m + 1..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    Ok(edges)
}

/// BA graph whose vertices take labels, resources and exposures from the
/// observed network, drawn without replacement. Edge weight is
/// `g(mean of the endpoint exposures)`.
pub fn gen_ba(cfg: &NullModelConfig, network: &TagNetwork) -> Result<WeightedGraph> {
    cfg.validate()?;
    let pool = network.nodes.len();
    if !cfg.synthetic {
        if pool == 0 {
            return Err(Error::Config("no observed tags to draw vertices from".into()));
        }
        if cfg.n > pool {
            return Err(Error::Config(format!(
                "n = {} exceeds the {pool} observed tags; enable synthetic mode",
                cfg.n
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let drawn = index::sample(&mut rng, pool, cfg.n.min(pool)).into_vec();
    let mut nodes: Vec<NodeLabel> = drawn.iter().map(|&k| network.nodes[k].clone()).collect();
    let mut exposure: Vec<f64> = drawn.iter().map(|&k| network.node_exposure[k]).collect();
    for i in nodes.len()..cfg.n {
        let (resources, e) = if pool == 0 {
            (Default::default(), 0.0)
        } else {
            let k = rng.gen_range(0..pool);
            (network.nodes[k].resources.clone(), network.node_exposure[k])
        };
        nodes.push(NodeLabel {
            tag: format!("ba-{i}"),
            resources,
        });
        exposure.push(e);
    }
    let topology = ba_topology(cfg.n, cfg.m, &mut rng)?;
    let g = ExpositionWeighting::new(cfg.lambda);
    WeightedGraph::new(
        nodes,
        topology
            .into_iter()
            .map(|(a, b)| (a, b, g.weight(0.5 * (exposure[a] + exposure[b])))),
    )
}

/// The three bijections of a diffeomorphic rearrangement. `context` and
/// `exposure` act on edge coordinates, `resource` on node annotations:
/// position `k` takes the value found at `perm[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffeoPermutation {
    pub context: Vec<usize>,
    pub exposure: Vec<usize>,
    pub resource: Vec<usize>,
}

impl DiffeoPermutation {
    pub fn identity(network: &TagNetwork) -> Self {
        let e: Vec<usize> = (0..network.edges.len()).collect();
        Self {
            context: e.clone(),
            exposure: e,
            resource: (0..network.nodes.len()).collect(),
        }
    }

    /// Three independent shuffles, each from its own seed-derived stream.
    pub fn random(network: &TagNetwork, seed: u64) -> Self {
        let mut p = Self::identity(network);
        let streams = [&mut p.context, &mut p.exposure, &mut p.resource];
        for (k, perm) in streams.into_iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64 + 1);
            perm.shuffle(&mut rng);
        }
        p
    }
}

/// Rebuilds `network` with permuted coordinates on the same edge set.
pub fn apply_diffeo(network: &TagNetwork, perm: &DiffeoPermutation, g: &ExpositionWeighting) -> Result<WeightedGraph> {
    let ne = network.edges.len();
    let nn = network.nodes.len();
    if perm.context.len() != ne || perm.exposure.len() != ne || perm.resource.len() != nn {
        return Err(Error::Config("permutation sizes do not match the network".into()));
    }
    let nodes = network
        .nodes
        .iter()
        .zip(&perm.resource)
        .map(|(n, &src)| NodeLabel {
            tag: n.tag.clone(),
            resources: network.nodes[src].resources.clone(),
        })
        .collect();
    let edges = network.edges.iter().enumerate().map(|(k, e)| {
        let strength = network.edges[perm.context[k]].strength;
        let exposure = network.edges[perm.exposure[k]].exposure;
        (e.a, e.b, strength * g.weight(exposure))
    });
    WeightedGraph::new(nodes, edges)
}

/// Diffeomorphic comparison graph for `network` under `seed`.
pub fn gen_diffeo(network: &TagNetwork, g: &ExpositionWeighting, seed: u64) -> Result<WeightedGraph> {
    apply_diffeo(network, &DiffeoPermutation::random(network, seed), g)
}

/// Permuted edge coordinates, for inspection.
pub fn permuted_edges(network: &TagNetwork, perm: &DiffeoPermutation) -> Vec<EdgeCoordinates> {
    network
        .edges
        .iter()
        .enumerate()
        .map(|(k, e)| EdgeCoordinates {
            a: e.a,
            b: e.b,
            strength: network.edges[perm.context[k]].strength,
            exposure: network.edges[perm.exposure[k]].exposure,
        })
        .collect()
}
