//! The exposition-weighted tag network and its statistics: connectivity,
//! weighted clustering coefficient, the per-resource global coefficient,
//! characteristic path length and cluster assignment.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::context::{Relation, SimilarityProvider};
use crate::error::{Error, Result};
use crate::folksodriven::FolksodrivenTuple;

/// `g(e) = 1 / (1 + λ e)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpositionWeighting {
    pub lambda: f64,
}

impl Default for ExpositionWeighting {
    fn default() -> Self {
        Self { lambda: 1.0 }
    }
}

impl ExpositionWeighting {
    pub fn new(lambda: f64) -> Self {
        Self { lambda }
    }

    pub fn weight(&self, exposure: f64) -> f64 {
        1.0 / (1.0 + self.lambda * exposure)
    }

    /// Weighting for expositions multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> Self {
        Self {
            lambda: self.lambda * scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeLabel {
    pub tag: String,
    pub resources: BTreeSet<String>,
}

impl NodeLabel {
    pub fn new(tag: impl Into<String>) -> Self {
        Self {
            tag: tag.into(),
            resources: BTreeSet::new(),
        }
    }

    pub fn with_resources<I, S>(tag: impl Into<String>, resources: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            tag: tag.into(),
            resources: resources.into_iter().map(Into::into).collect(),
        }
    }
}

/// Symmetric weighted adjacency with the diagonal fixed at 1.
///
/// Stored as sorted neighbour lists; absent pairs weigh 0 and only positive
/// off-diagonal weights are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    nodes: Vec<NodeLabel>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    /// Builds from undirected edges. Zero weights are dropped; a repeated pair
    /// keeps its last weight.
    pub fn new(nodes: Vec<NodeLabel>, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let n = nodes.len();
        let mut maps: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for (i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::NodeOutOfRange {
                    index: i.max(j),
                    len: n,
                });
            }
            if i == j {
                return Err(Error::Config(format!("self loop at node {i}")));
            }
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::Config(format!("weight {w} of ({i}, {j}) is outside [0, 1]")));
            }
            if w == 0.0 {
                maps[i].remove(&j);
                maps[j].remove(&i);
            } else {
                maps[i].insert(j, w);
                maps[j].insert(i, w);
            }
        }
        let adj = maps.into_iter().map(|m| m.into_iter().collect()).collect();
        Ok(Self { nodes, adj })
    }

    /// Unlabelled nodes, for tests and synthetic graphs.
    pub fn unlabelled(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        Self::new((0..n).map(|i| NodeLabel::new(format!("n{i}"))).collect(), edges)
    }

    pub fn empty() -> Self {
        Self {
            nodes: Vec::new(),
            adj: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[NodeLabel] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &NodeLabel {
        &self.nodes[i]
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    /// `a_ij`, with `a_ii = 1`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 1.0;
        }
        self.adj[i]
            .binary_search_by_key(&j, |e| e.0)
            .map_or(0.0, |k| self.adj[i][k].1)
    }

    pub fn binary_degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Each undirected edge once, as `(i, j, w)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |e| e.0 > i).map(move |&(j, w)| (i, j, w)))
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    /// `k_i = Σ_{j≠i} a_ij`.
    pub fn connectivity(&self, i: usize) -> Result<f64> {
        self.check(i)?;
        Ok(self.adj[i].iter().map(|e| e.1).sum())
    }

    pub fn connectivities(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.adj[i].iter().map(|e| e.1).sum()).collect()
    }

    /// Weighted clustering coefficient of node `i`:
    ///
    /// ```text
    ///        Σ_{l≠i} Σ_{m≠i,l} a_il a_lm a_mi
    /// C_i = ----------------------------------
    ///        (Σ_{l≠i} a_il)² − Σ_{l≠i} a_il²
    /// ```
    ///
    /// 0 when the denominator vanishes (at most one neighbour).
    pub fn cluster_coef(&self, i: usize) -> Result<f64> {
        self.check(i)?;
        let mut scratch = vec![0.0; self.len()];
        Ok(self.cluster_coef_with(i, &mut scratch))
    }

    /// `cluster_coef` for every node.
    pub fn cluster_coefs(&self) -> Vec<f64> {
        let mut scratch = vec![0.0; self.len()];
        (0..self.len())
            .map(|i| self.cluster_coef_with(i, &mut scratch))
            .collect()
    }

    /// `cluster_coef` for the listed nodes.
    pub fn cluster_coefs_of(&self, nodes: &[usize]) -> Result<Vec<f64>> {
        let mut scratch = vec![0.0; self.len()];
        nodes
            .iter()
            .map(|&i| {
                self.check(i)?;
                Ok(self.cluster_coef_with(i, &mut scratch))
            })
            .collect()
    }

    fn cluster_coef_with(&self, i: usize, to_i: &mut [f64]) -> f64 {
        let ns = &self.adj[i];
        let (mut sum, mut sq) = (0.0, 0.0);
        for &(l, w) in ns {
            to_i[l] = w;
            sum += w;
            sq += w * w;
        }
        let mut num = 0.0;
        for &(l, a_il) in ns {
            for &(m, a_lm) in &self.adj[l] {
                if m != i {
                    num += a_il * a_lm * to_i[m];
                }
            }
        }
        for &(l, _) in ns {
            to_i[l] = 0.0;
        }
        let den = sum * sum - sq;
        if den <= 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// Nodes annotated with resource `r`.
    pub fn nodes_of(&self, r: &str) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.nodes[i].resources.contains(r))
            .collect()
    }

    /// `K_r`: mean clustering coefficient over the nodes carrying `r`.
    pub fn global_cluster_coef(&self, r: &str) -> Result<f64> {
        let nodes = self.nodes_of(r);
        if nodes.is_empty() {
            return Err(Error::UnknownResource(r.to_string()));
        }
        let cc = self.cluster_coefs_of(&nodes)?;
        Ok(cc.iter().sum::<f64>() / cc.len() as f64)
    }

    /// Every resource annotation, sorted.
    pub fn resources(&self) -> BTreeSet<&str> {
        self.nodes
            .iter()
            .flat_map(|n| n.resources.iter().map(String::as_str))
            .collect()
    }

    /// Neighbour lists keeping only `a_ij ≥ threshold`.
    fn thresholded(&self, threshold: f64) -> Vec<Vec<usize>> {
        self.adj
            .iter()
            .map(|ns| ns.iter().filter(|e| e.1 >= threshold).map(|e| e.0).collect())
            .collect()
    }

    /// Characteristic path length over all ordered pairs.
    pub fn char_path_length(&self, threshold: f64) -> Result<PathLength> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.char_path_length_from(&all, threshold)
    }

    /// Mean hop count from each source to every node it reaches, on the graph
    /// binarized at `a_ij ≥ threshold`. Breadth-first.
    pub fn char_path_length_from(&self, sources: &[usize], threshold: f64) -> Result<PathLength> {
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(Error::Config(format!("threshold {threshold} is outside (0, 1]")));
        }
        for &s in sources {
            self.check(s)?;
        }
        let adj = self.thresholded(threshold);
        if adj.iter().all(Vec::is_empty) {
            return Err(Error::NoEdges(threshold));
        }
        let n = self.len();
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        let (mut total, mut pairs) = (0u64, 0u64);
        for &s in sources {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        total += dist[v] as u64;
                        pairs += 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        let possible = (sources.len() * n.saturating_sub(1)) as f64;
        Ok(PathLength {
            mean: if pairs == 0 { 0.0 } else { total as f64 / pairs as f64 },
            connected_fraction: if possible == 0.0 { 0.0 } else { pairs as f64 / possible },
            connected_pairs: pairs,
        })
    }

    /// Cluster ids per node.
    ///
    /// Overlapping: for each resource (sorted), the connected components of the
    /// thresholded subgraph induced on that resource's nodes are clusters;
    /// identical member sets share one id and nodes without resources form
    /// singletons. Exclusive: each node keeps, among its overlapping clusters,
    /// the one it is most strongly tied to (sum of weights to the other
    /// members), ties to the lowest id.
    pub fn assign_clusters(&self, strategy: ClusterStrategy, threshold: f64) -> Result<Vec<BTreeSet<usize>>> {
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(Error::Config(format!("threshold {threshold} is outside (0, 1]")));
        }
        let adj = self.thresholded(threshold);
        let n = self.len();
        let mut ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        let mut register = |members: Vec<usize>, clusters: &mut Vec<Vec<usize>>| -> usize {
            *ids.entry(members.clone()).or_insert_with(|| {
                clusters.push(members);
                clusters.len() - 1
            })
        };
        let mut of: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for r in self.resources() {
            let inside: Vec<bool> = (0..n).map(|i| self.nodes[i].resources.contains(r)).collect();
            let mut seen = vec![false; n];
            for start in 0..n {
                if !inside[start] || seen[start] {
                    continue;
                }
                let mut members = vec![start];
                seen[start] = true;
                let mut k = 0;
                while k < members.len() {
                    let u = members[k];
                    for &v in &adj[u] {
                        if inside[v] && !seen[v] {
                            seen[v] = true;
                            members.push(v);
                        }
                    }
                    k += 1;
                }
                members.sort_unstable();
                let id = register(members.clone(), &mut clusters);
                for m in members {
                    of[m].insert(id);
                }
            }
        }
        for (i, set) in of.iter_mut().enumerate() {
            if set.is_empty() {
                set.insert(register(vec![i], &mut clusters));
            }
        }
        if strategy == ClusterStrategy::Exclusive {
            for (i, set) in of.iter_mut().enumerate() {
                let mut best: Option<(usize, f64)> = None;
                for &id in set.iter() {
                    let tie: f64 = clusters[id]
                        .iter()
                        .filter(|&&m| m != i)
                        .map(|&m| self.weight(i, m))
                        .sum();
                    if best.is_none_or(|(_, b)| tie > b) {
                        best = Some((id, tie));
                    }
                }
                *set = best.map(|b| b.0).into_iter().collect();
            }
        }
        Ok(of)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterStrategy {
    Exclusive,
    Overlapping,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLength {
    pub mean: f64,
    /// Reached ordered pairs over all ordered (source, other) pairs.
    pub connected_fraction: f64,
    pub connected_pairs: u64,
}

/// What a tag-graph edge is made of, before exposition weighting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCoordinates {
    pub a: usize,
    pub b: usize,
    /// (co-occurrences + similarity bonus) / maximum over all edges.
    pub strength: f64,
    /// Mean ctr of the points where the two tags co-occur.
    pub exposure: f64,
}

/// Nodes and edge coordinates of the tag network; weights follow once an
/// exposition weighting is chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct TagNetwork {
    pub nodes: Vec<NodeLabel>,
    pub edges: Vec<EdgeCoordinates>,
    /// Mean ctr of the points whose context holds the tag.
    pub node_exposure: Vec<f64>,
}

impl TagNetwork {
    /// Nodes are the distinct tags (title and description) of the contexts in
    /// `X`, in first-seen order, annotated with the resources they appear
    /// with. Two tags are linked when some point's context holds both; the
    /// raw strength is that co-occurrence count, plus 1 when `sim` relates the
    /// two tags, normalized by the strongest edge.
    pub fn from_fd(fd: &FolksodrivenTuple, sim: &dyn SimilarityProvider) -> Self {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut nodes: Vec<NodeLabel> = Vec::new();
        let mut exposure_sum: Vec<(f64, u32)> = Vec::new();
        let context_tags: Vec<Vec<String>> = fd
            .contexts()
            .iter()
            .map(|c| c.all_tags().iter().map(str::to_string).collect())
            .collect();
        let mut pairs: HashMap<(usize, usize), (u32, f64)> = HashMap::new();
        for p in fd.points() {
            let ctr = fd.exposition_of(p).ctr();
            let uri = fd.resource_of(p).uri();
            let mut ids: Vec<usize> = context_tags[p.context]
                .iter()
                .map(|t| {
                    let next = nodes.len();
                    let id = *index.entry(t.clone()).or_insert(next);
                    if id == next {
                        nodes.push(NodeLabel::new(t.clone()));
                        exposure_sum.push((0.0, 0));
                    }
                    id
                })
                .collect();
            ids.sort_unstable();
            for &id in &ids {
                nodes[id].resources.insert(uri.to_string());
                exposure_sum[id].0 += ctr;
                exposure_sum[id].1 += 1;
            }
            for (x, &a) in ids.iter().enumerate() {
                for &b in &ids[x + 1..] {
                    let e = pairs.entry((a, b)).or_insert((0, 0.0));
                    e.0 += 1;
                    e.1 += ctr;
                }
            }
        }
        let mut raw: Vec<(usize, usize, f64, f64)> = pairs
            .into_iter()
            .map(|((a, b), (count, ctr_sum))| {
                let bonus = match sim.relate(&nodes[a].tag, &nodes[b].tag) {
                    Relation::Unrelated => 0.0,
                    _ => 1.0,
                };
                (a, b, count as f64 + bonus, ctr_sum / count as f64)
            })
            .collect();
        raw.sort_by_key(|e| (e.0, e.1));
        let max = raw.iter().map(|e| e.2).fold(0.0, f64::max);
        let edges = raw
            .into_iter()
            .map(|(a, b, r, exposure)| EdgeCoordinates {
                a,
                b,
                strength: r / max,
                exposure,
            })
            .collect();
        let node_exposure = exposure_sum.iter().map(|(s, c)| s / *c as f64).collect();
        Self {
            nodes,
            edges,
            node_exposure,
        }
    }

    /// `a_ab = strength × g(exposure)`.
    pub fn to_graph(&self, g: &ExpositionWeighting) -> WeightedGraph {
        WeightedGraph::new(
            self.nodes.clone(),
            self.edges.iter().map(|e| (e.a, e.b, e.strength * g.weight(e.exposure))),
        )
        .expect("strength and g stay in [0, 1]")
    }
}

/// The Folksodriven tag network weighted by `g`.
pub fn build_tag_graph(fd: &FolksodrivenTuple, sim: &dyn SimilarityProvider, g: &ExpositionWeighting) -> WeightedGraph {
    TagNetwork::from_fd(fd, sim).to_graph(g)
}

fn node_table_path(edges: &Path) -> PathBuf {
    let mut s = edges.as_os_str().to_owned();
    s.push(".nodes");
    PathBuf::from(s)
}

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl WeightedGraph {
    /// Edge list `i<TAB>j<TAB>weight`, weights with 17 significant digits.
    pub fn edge_list_text(&self) -> String {
        let mut s = String::new();
        for (i, j, w) in self.edges() {
            let _ = writeln!(s, "{i}\t{j}\t{}", format_f64(w));
        }
        s
    }

    /// Node table `index<TAB>tag<TAB>resource…`, one resource per column.
    pub fn node_table_text(&self) -> String {
        let mut s = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = write!(s, "{i}\t{}", n.tag);
            for r in &n.resources {
                let _ = write!(s, "\t{r}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(edge_list: &str, node_table: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for (idx, line) in node_table.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let i: usize = parse_col(cols.next(), idx)?;
            if i != nodes.len() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected node index {}, found {i}", nodes.len()),
                });
            }
            let tag = cols.next().ok_or_else(|| missing(idx))?;
            nodes.push(NodeLabel::with_resources(tag, cols));
        }
        let mut edges = Vec::new();
        for (idx, line) in edge_list.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let i: usize = parse_col(cols.next(), idx)?;
            let j: usize = parse_col(cols.next(), idx)?;
            let w: f64 = parse_col(cols.next(), idx)?;
            edges.push((i, j, w));
        }
        Self::new(nodes, edges)
    }

    /// Writes the edge list to `path` and the node table to `<path>.nodes`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let nodes = node_table_path(path);
        fs::write(path, self.edge_list_text()).map_err(|source| Error::Write {
            path: path.to_path_buf(),
            source,
        })?;
        fs::write(&nodes, self.node_table_text()).map_err(|source| Error::Write {
            path: nodes.clone(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let read = |p: &Path| {
            fs::read_to_string(p).map_err(|source| Error::Read {
                path: p.to_path_buf(),
                source,
            })
        };
        Self::from_text(&read(path)?, &read(&node_table_path(path))?)
    }
}

fn missing(idx: usize) -> Error {
    Error::Parse {
        line: idx + 1,
        message: "missing column".into(),
    }
}

fn parse_col<T: std::str::FromStr>(col: Option<&str>, idx: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let col = col.ok_or_else(|| missing(idx))?;
    col.parse().map_err(|e: T::Err| Error::Parse {
        line: idx + 1,
        message: format!("{col:?}: {e}"),
    })
}
