//! Multigraphs with loops, configuration-model sampling, subgraph edge
//! counts and exhaustive small-graph oracles.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identity of the PRNG behind every seeded routine in this crate.
pub const RNG_NAME: &str = "pcg64 (rand_pcg::Lcg128Xsl64, seed_from_u64)";
/// Largest vertex count accepted by the exhaustive subset scans.
pub const BRUTE_FORCE_MAX_N: usize = 24;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    InvalidEdge(usize, usize, usize),
    #[error("vertex {0} outside 0..{1}")]
    InvalidVertex(usize, usize),
    #[error("duplicate vertex {0} in set")]
    DuplicateVertex(usize),
    #[error("n * d = {0} is odd")]
    Parity(usize),
    #[error("no simple graph after {0} tries")]
    MaxTriesExceeded(usize),
    #[error("set is not independent: edge ({0}, {1}) lies inside it")]
    NotIndependent(usize, usize),
    #[error("{0} vertices exceeds the exhaustive-scan cap of {1}")]
    TooLarge(usize, usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GraphError>;

pub fn rng_from_seed(seed: u64) -> Pcg64 {
    Pcg64::seed_from_u64(seed)
}

/// Undirected multigraph on `0..n`. Edge ids are positions in the edge list;
/// a loop `(v, v)` shows up twice in `v`'s adjacency and counts 2 towards its
/// degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(GraphError::InvalidEdge(u, v, n));
            }
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        Ok(Self { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::new(n, edges).expect("valid endpoints")
    }

    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Self::new(n, edges).expect("valid endpoints")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::new(10, edges).expect("valid endpoints")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `(neighbor, edge id)` pairs; loops appear twice.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    /// `Some(d)` if every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn has_loop_at(&self, v: usize) -> bool {
        self.adj[v].iter().any(|&(w, _)| w == v)
    }

    /// Subgraph induced by `set`, with maps back to this graph.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Subgraph {
        let mut local = vec![usize::MAX; self.n];
        let vertices: Vec<usize> = set.iter().collect();
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        let mut edge_ids = Vec::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if set.contains(u) && set.contains(v) {
                edges.push((local[u], local[v]));
                edge_ids.push(id);
            }
        }
        Subgraph {
            graph: Graph::new(vertices.len(), edges).expect("local ids are valid"),
            vertices,
            edge_ids,
        }
    }

    /// Text form: `N d` then one `u v` line per edge. `d` is the common
    /// degree, or the maximum degree for irregular graphs.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(12 * (self.m() + 1));
        let d = self.regular_degree().unwrap_or_else(|| self.max_degree());
        writeln!(out, "{} {}", self.n, d).unwrap();
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    /// Parses the text form. The header degree is checked against the edges.
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (n, d) = loop {
            let Some((i, line)) = lines.next() else {
                return Err(GraphError::Parse {
                    line: 1,
                    msg: "missing header".into(),
                });
            };
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let [n, d] = parse_fields::<2>(&line, i + 1)?;
            break (n, d);
        };
        let mut edges = Vec::new();
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let [u, v] = parse_fields::<2>(&line, i + 1)?;
            if u >= n || v >= n {
                return Err(GraphError::Parse {
                    line: i + 1,
                    msg: format!("vertex out of range 0..{n}"),
                });
            }
            edges.push((u, v));
        }
        let g = Graph::new(n, edges)?;
        let want = g.regular_degree().unwrap_or_else(|| g.max_degree());
        if n > 0 && want != d {
            return Err(GraphError::Parse {
                line: 1,
                msg: format!("header degree {d} but edges give {want}"),
            });
        }
        Ok(g)
    }
}

pub(crate) fn parse_fields<const K: usize>(line: &str, lineno: usize) -> Result<[usize; K]> {
    let mut out = [0usize; K];
    let mut fields = line.split_whitespace();
    for slot in out.iter_mut() {
        let field = fields.next().ok_or_else(|| GraphError::Parse {
            line: lineno,
            msg: format!("expected {K} fields"),
        })?;
        *slot = field.parse().map_err(|e| GraphError::Parse {
            line: lineno,
            msg: format!("{field:?}: {e}"),
        })?;
    }
    if fields.next().is_some() {
        return Err(GraphError::Parse {
            line: lineno,
            msg: format!("expected {K} fields"),
        });
    }
    Ok(out)
}

/// An induced subgraph together with its embedding.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    /// Local vertex id -> vertex of the parent graph.
    pub vertices: Vec<usize>,
    /// Local edge id -> edge id of the parent graph.
    pub edge_ids: Vec<usize>,
}

/// A set of vertices of a graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    mask: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        Self {
            mask: vec![false; n],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            mask: vec![true; n],
            len: n,
        }
    }

    pub fn from_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::new(n);
        for v in ids {
            if v >= n {
                return Err(GraphError::InvalidVertex(v, n));
            }
            if !set.insert(v) {
                return Err(GraphError::DuplicateVertex(v));
            }
        }
        Ok(set)
    }

    /// Bit `i` of `mask` selects vertex `i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut set = Self::new(n);
        for v in (0..n).filter(|&v| mask >> v & 1 == 1) {
            set.insert(v);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.mask[v]
    }

    /// Returns false if `v` was already present.
    pub fn insert(&mut self, v: usize) -> bool {
        if self.mask[v] {
            return false;
        }
        self.mask[v] = true;
        self.len += 1;
        true
    }

    /// Returns false if `v` was absent.
    pub fn remove(&mut self, v: usize) -> bool {
        if !self.mask[v] {
            return false;
        }
        self.mask[v] = false;
        self.len -= 1;
        true
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: self.mask.iter().map(|b| !b).collect(),
            len: self.mask.len() - self.len,
        }
    }
}

/// `e[U]`: edges with both endpoints in `set` (a loop counts once).
pub fn induced_edges(g: &Graph, set: &VertexSet) -> usize {
    g.edges
        .iter()
        .filter(|&&(u, v)| set.contains(u) && set.contains(v))
        .count()
}

/// `e[U, U^c]`: edges with exactly one endpoint in `set`.
pub fn cut_edges(g: &Graph, set: &VertexSet) -> usize {
    g.edges
        .iter()
        .filter(|&&(u, v)| set.contains(u) != set.contains(v))
        .count()
}

/// `e[v, U]`: edges from `v` to members of `set` other than `v` itself.
pub fn edges_to(g: &Graph, v: usize, set: &VertexSet) -> usize {
    g.adj[v]
        .iter()
        .filter(|&&(w, _)| w != v && set.contains(w))
        .count()
}

pub fn is_simple(g: &Graph) -> bool {
    let mut seen = vec![usize::MAX; g.n];
    for v in 0..g.n {
        for &(w, _) in &g.adj[v] {
            if w == v || seen[w] == v {
                return false;
            }
            seen[w] = v;
        }
    }
    true
}

fn config_model_with<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Graph> {
    if n * d % 2 == 1 {
        return Err(GraphError::Parity(n * d));
    }
    let mut half_edges: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    half_edges.shuffle(rng);
    let edges = half_edges.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    Graph::new(n, edges)
}

/// Configuration model: a uniform perfect matching of the `n d` half-edges.
/// The result is d-regular but may have loops and parallel edges.
pub fn config_model_sample(n: usize, d: usize, seed: u64) -> Result<Graph> {
    config_model_with(n, d, &mut rng_from_seed(seed))
}

/// Rejection-sampling statistics of [`sample_simple`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleSampleStats {
    pub tries: usize,
    /// `1 / tries`: a one-run estimate of the simplicity probability.
    pub acceptance_rate: f64,
}

/// Configuration-model samples until one is simple.
pub fn sample_simple(
    n: usize,
    d: usize,
    seed: u64,
    max_tries: usize,
) -> Result<(Graph, SimpleSampleStats)> {
    let mut rng = rng_from_seed(seed);
    for tries in 1..=max_tries {
        let g = config_model_with(n, d, &mut rng)?;
        if is_simple(&g) {
            let stats = SimpleSampleStats {
                tries,
                acceptance_rate: 1.0 / tries as f64,
            };
            return Ok((g, stats));
        }
    }
    Err(GraphError::MaxTriesExceeded(max_tries))
}

/// Fraction of `tries` configuration-model samples that are simple.
pub fn simple_acceptance_rate(n: usize, d: usize, seed: u64, tries: usize) -> Result<f64> {
    let mut rng = rng_from_seed(seed);
    let mut accepted = 0usize;
    for _ in 0..tries {
        if is_simple(&config_model_with(n, d, &mut rng)?) {
            accepted += 1;
        }
    }
    Ok(accepted as f64 / tries as f64)
}

/// Non-loop neighbor multiplicities as bitmask rows, for subset scans.
struct SmallGraph {
    n: usize,
    /// `(neighbor mask, multiplicity)` grouped per vertex.
    rows: Vec<Vec<(usize, usize)>>,
    loops: Vec<usize>,
    nonloop_degree: Vec<usize>,
}

impl SmallGraph {
    fn new(g: &Graph) -> Result<Self> {
        if g.n > BRUTE_FORCE_MAX_N {
            return Err(GraphError::TooLarge(g.n, BRUTE_FORCE_MAX_N));
        }
        let mut mult = vec![vec![0usize; g.n]; g.n];
        let mut loops = vec![0usize; g.n];
        for &(u, v) in &g.edges {
            if u == v {
                loops[u] += 1;
            } else {
                mult[u][v] += 1;
                mult[v][u] += 1;
            }
        }
        let rows = mult
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(_, &m)| m > 0)
                    .map(|(w, &m)| (w, m))
                    .collect()
            })
            .collect::<Vec<Vec<_>>>();
        let nonloop_degree = mult.iter().map(|r| r.iter().sum()).collect();
        Ok(Self {
            n: g.n,
            rows,
            loops,
            nonloop_degree,
        })
    }

    fn edges_into(&self, v: usize, mask: u32) -> usize {
        self.rows[v]
            .iter()
            .filter(|&&(w, _)| mask >> w & 1 == 1)
            .map(|&(_, m)| m)
            .sum()
    }

    /// Visits every subset in Gray-code order with `(mask, |U|, e[U], e[U, U^c])`,
    /// including the empty set first.
    fn for_each_subset(&self, mut visit: impl FnMut(u32, usize, usize, usize)) {
        let (mut mask, mut size, mut inside, mut cut) = (0u32, 0usize, 0usize, 0usize);
        visit(mask, size, inside, cut);
        for i in 1u64..(1u64 << self.n) {
            let v = i.trailing_zeros() as usize;
            let to_u = self.edges_into(v, mask);
            if mask >> v & 1 == 0 {
                mask |= 1 << v;
                size += 1;
                inside += to_u + self.loops[v];
                cut = cut + self.nonloop_degree[v] - 2 * to_u;
            } else {
                mask &= !(1 << v);
                size -= 1;
                inside -= to_u + self.loops[v];
                cut = cut + 2 * to_u - self.nonloop_degree[v];
            }
            visit(mask, size, inside, cut);
        }
    }
}

fn size_cap(n: usize, x0: f64) -> usize {
    // tolerate x0 * n landing a hair below an integer
    ((x0 * n as f64) + 1e-9).floor().max(0.0) as usize
}

/// Generalized Cheeger constant by exhaustive scan: the minimum of
/// `e[U, U^c] / |U|` over nonempty `U` with `|U| <= x0 n`. Infinite when no
/// such `U` exists.
pub fn cheeger_bruteforce(g: &Graph, x0: f64) -> Result<f64> {
    let small = SmallGraph::new(g)?;
    let cap = size_cap(g.n, x0);
    let mut best = f64::INFINITY;
    small.for_each_subset(|_, size, _, cut| {
        if size > 0 && size <= cap {
            best = best.min(cut as f64 / size as f64);
        }
    });
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Exact,
    Sampled { samples: usize, seed: u64 },
}

/// Induced average degree measurement over small sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvgDegreeReport {
    pub mode: CheckMode,
    pub x0: f64,
    pub rho: f64,
    /// Reference degree: the maximum degree of the graph.
    pub d: usize,
    /// Largest `2 e[U] / (d |U|)` seen, i.e. average degree of `G[U]` over `d`.
    pub max_ratio: f64,
    pub worst_set: Vec<usize>,
    /// Smallest `e[U, U^c] / |U|` seen (the observed isoperimetric constant).
    pub min_expansion: f64,
    /// Exact mode only: whether `e[U] <= rho d |U| / 2` for every scanned `U`.
    pub satisfied: Option<bool>,
}

/// Checks `e[U] <= rho d |U| / 2` for every `U` with `0 < |U| <= x0 n`
/// (exact mode) or measures the largest ratio over random such sets.
pub fn induced_avg_degree_check(
    g: &Graph,
    x0: f64,
    rho: f64,
    mode: CheckMode,
) -> Result<AvgDegreeReport> {
    let d = g.max_degree();
    let cap = size_cap(g.n, x0);
    let ratio = |inside: usize, size: usize| {
        if d == 0 {
            0.0
        } else {
            2.0 * inside as f64 / (d as f64 * size as f64)
        }
    };
    let mut max_ratio = 0.0f64;
    let mut worst: Option<Vec<usize>> = None;
    let mut min_expansion = f64::INFINITY;
    let satisfied = match mode {
        CheckMode::Exact => {
            let small = SmallGraph::new(g)?;
            let mut ok = true;
            let mut worst_mask = None;
            small.for_each_subset(|mask, size, inside, cut| {
                if size == 0 || size > cap {
                    return;
                }
                let r = ratio(inside, size);
                if r > max_ratio || worst_mask.is_none() {
                    max_ratio = max_ratio.max(r);
                    worst_mask = Some(mask);
                }
                min_expansion = min_expansion.min(cut as f64 / size as f64);
                if 2.0 * inside as f64 > rho * d as f64 * size as f64 {
                    ok = false;
                }
            });
            worst = worst_mask.map(|m| VertexSet::from_mask(g.n, m as u64).to_vec());
            Some(ok)
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = rng_from_seed(seed);
            let mut ids: Vec<usize> = (0..g.n).collect();
            for _ in 0..samples {
                if cap == 0 {
                    break;
                }
                let size = rng.random_range(1..=cap);
                let (chosen, _) = ids.partial_shuffle(&mut rng, size);
                let set = VertexSet::from_ids(g.n, chosen.iter().copied())?;
                let r = ratio(induced_edges(g, &set), size);
                if r > max_ratio || worst.is_none() {
                    max_ratio = max_ratio.max(r);
                    worst = Some(set.to_vec());
                }
                min_expansion = min_expansion.min(cut_edges(g, &set) as f64 / size as f64);
            }
            None
        }
    };
    Ok(AvgDegreeReport {
        mode,
        x0,
        rho,
        d,
        max_ratio,
        worst_set: worst.unwrap_or_default(),
        min_expansion,
        satisfied,
    })
}

/// Vertex selection rule for [`greedy_independent_set`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyRule {
    /// Scan vertices in a seeded random order, keeping each one with no kept
    /// neighbor.
    #[default]
    RandomOrder,
    /// Repeatedly keep a vertex of least remaining degree, ties broken by a
    /// seeded random order, and delete it with its neighbors.
    MinDegree,
}

/// Maximal independent set by the given greedy rule. Vertices with loops are
/// never taken.
pub fn greedy_independent_set(g: &Graph, seed: u64, rule: GreedyRule) -> VertexSet {
    let mut rank: Vec<usize> = (0..g.n()).collect();
    rank.shuffle(&mut rng_from_seed(seed));
    match rule {
        GreedyRule::RandomOrder => random_order_greedy(g, &rank),
        GreedyRule::MinDegree => min_degree_greedy(g, &rank),
    }
}

fn random_order_greedy(g: &Graph, order: &[usize]) -> VertexSet {
    let mut set = VertexSet::new(g.n);
    let mut blocked: Vec<bool> = (0..g.n).map(|v| g.has_loop_at(v)).collect();
    for &v in order {
        if blocked[v] {
            continue;
        }
        set.insert(v);
        blocked[v] = true;
        for &(w, _) in &g.adj[v] {
            blocked[w] = true;
        }
    }
    set
}

fn min_degree_greedy(g: &Graph, rank: &[usize]) -> VertexSet {
    let mut removed = vec![false; g.n];
    let mut degree: Vec<usize> = (0..g.n).map(|v| g.degree(v)).collect();
    let mut set = VertexSet::new(g.n);
    let mut heap = BinaryHeap::new();

    let delete = |v: usize,
                  removed: &mut Vec<bool>,
                  degree: &mut Vec<usize>,
                  heap: &mut BinaryHeap<Reverse<(usize, usize, usize)>>| {
        removed[v] = true;
        for &(w, _) in &g.adj[v] {
            if !removed[w] {
                degree[w] -= 1;
                heap.push(Reverse((degree[w], rank[w], w)));
            }
        }
    };

    for v in 0..g.n {
        if g.has_loop_at(v) {
            delete(v, &mut removed, &mut degree, &mut heap);
        }
    }
    for v in 0..g.n {
        if !removed[v] {
            heap.push(Reverse((degree[v], rank[v], v)));
        }
    }
    while let Some(Reverse((deg, _, v))) = heap.pop() {
        if removed[v] || deg != degree[v] {
            continue;
        }
        set.insert(v);
        delete(v, &mut removed, &mut degree, &mut heap);
        let nbrs: Vec<usize> = g.adj[v].iter().map(|&(w, _)| w).collect();
        for w in nbrs {
            if !removed[w] {
                delete(w, &mut removed, &mut degree, &mut heap);
            }
        }
    }
    set
}

/// First edge with both endpoints in `set`, if any.
pub fn internal_edge(g: &Graph, set: &VertexSet) -> Option<(usize, usize)> {
    g.edges
        .iter()
        .copied()
        .find(|&(u, v)| set.contains(u) && set.contains(v))
}

/// Whether the independent set `set` is `d_hat`-thin: every vertex outside
/// it has at most `d_hat` neighbors inside.
pub fn check_thin(g: &Graph, set: &VertexSet, d_hat: usize) -> Result<bool> {
    if let Some((u, v)) = internal_edge(g, set) {
        return Err(GraphError::NotIndependent(u, v));
    }
    Ok((0..g.n)
        .filter(|&v| !set.contains(v))
        .all(|v| edges_to(g, v, set) <= d_hat))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(n, ids.iter().copied()).unwrap()
    }

    #[test]
    fn forced_pairings() {
        for seed in 0..20 {
            let g = config_model_sample(2, 1, seed).unwrap();
            assert_eq!(g.m(), 1);
            let (u, v) = g.edge(0);
            assert_eq!((u.min(v), u.max(v)), (0, 1));

            let g = config_model_sample(1, 2, seed).unwrap();
            assert_eq!(g.edges(), &[(0, 0)]);
            assert_eq!(g.degree(0), 2);
            assert!(!is_simple(&g));
        }
        assert!(matches!(
            config_model_sample(3, 3, 0),
            Err(GraphError::Parity(9))
        ));
    }

    #[test]
    fn config_model_is_regular_and_seeded() {
        for seed in 0..10 {
            let g = config_model_sample(50, 5, seed).unwrap();
            assert_eq!(g.regular_degree(), Some(5));
            assert_eq!(g.m(), 125);
            assert_eq!(g, config_model_sample(50, 5, seed).unwrap());
        }
        assert_ne!(
            config_model_sample(50, 5, 1).unwrap(),
            config_model_sample(50, 5, 2).unwrap()
        );
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&Graph::cycle(3)));
        assert!(!is_simple(&Graph::new(2, vec![(0, 0), (0, 1)]).unwrap()));
        assert!(!is_simple(&Graph::new(2, vec![(0, 1), (1, 0)]).unwrap()));
        let (g, stats) = sample_simple(30, 3, 7, 1000).unwrap();
        assert!(is_simple(&g));
        assert!(stats.tries >= 1);
        assert!(matches!(
            sample_simple(1, 2, 0, 5),
            Err(GraphError::MaxTriesExceeded(5))
        ));
    }

    #[test]
    fn edge_counts_on_k4() {
        let g = Graph::complete(4);
        let all = VertexSet::full(4);
        assert_eq!(induced_edges(&g, &all), 6);
        assert_eq!(cut_edges(&g, &all), 0);
        let pair = set(4, &[0, 1]);
        assert_eq!(induced_edges(&g, &pair), 1);
        assert_eq!(cut_edges(&g, &pair), 4);
        assert_eq!(edges_to(&g, 2, &pair), 2);
    }

    #[test]
    fn loops_count_twice_in_degree() {
        let g = Graph::new(2, vec![(0, 0), (0, 1)]).unwrap();
        assert_eq!(g.degree(0), 3);
        assert_eq!(induced_edges(&g, &set(2, &[0])), 1);
        assert_eq!(cut_edges(&g, &set(2, &[0])), 1);
    }

    #[test]
    fn vertex_set_validation() {
        assert!(matches!(
            VertexSet::from_ids(3, [0, 3]),
            Err(GraphError::InvalidVertex(3, 3))
        ));
        assert!(matches!(
            VertexSet::from_ids(3, [1, 1]),
            Err(GraphError::DuplicateVertex(1))
        ));
        let s = set(5, &[4, 0, 2]);
        assert_eq!(s.to_vec(), vec![0, 2, 4]);
        assert_eq!(s.complement().to_vec(), vec![1, 3]);
    }

    #[test]
    fn cheeger_small_cases() {
        assert_eq!(cheeger_bruteforce(&Graph::complete(4), 0.5).unwrap(), 2.0);
        for n in 3..=12 {
            let want = 2.0 / (n / 2) as f64;
            assert!((cheeger_bruteforce(&Graph::cycle(n), 0.5).unwrap() - want).abs() < 1e-15);
        }
        assert!(matches!(
            cheeger_bruteforce(&Graph::empty(25), 0.5),
            Err(GraphError::TooLarge(25, 24))
        ));
    }

    #[test]
    fn avg_degree_check_cases() {
        let r = induced_avg_degree_check(&Graph::empty(6), 0.5, 0.1, CheckMode::Exact).unwrap();
        assert_eq!(r.satisfied, Some(true));

        let k5 = Graph::complete(5);
        let r = induced_avg_degree_check(&k5, 1.0, 0.99, CheckMode::Exact).unwrap();
        assert_eq!(r.satisfied, Some(false));
        assert_eq!(r.max_ratio, 1.0);
        assert_eq!(r.worst_set, vec![0, 1, 2, 3, 4]);
        let r = induced_avg_degree_check(&k5, 1.0, 1.0, CheckMode::Exact).unwrap();
        assert_eq!(r.satisfied, Some(true));

        let g = config_model_sample(40, 4, 3).unwrap();
        let r = induced_avg_degree_check(
            &g,
            0.5,
            0.9,
            CheckMode::Sampled {
                samples: 200,
                seed: 1,
            },
        )
        .unwrap();
        assert!(r.satisfied.is_none());
        assert!(r.max_ratio <= 1.0);
        assert!(!r.worst_set.is_empty() && r.worst_set.len() <= 20);
    }

    const RULES: [GreedyRule; 2] = [GreedyRule::RandomOrder, GreedyRule::MinDegree];

    #[test]
    fn greedy_examples() {
        for rule in RULES {
            assert_eq!(greedy_independent_set(&Graph::empty(7), 0, rule).len(), 7);
            assert_eq!(
                greedy_independent_set(&Graph::complete(6), 3, rule).len(),
                1
            );
            for seed in 0..50 {
                assert_eq!(
                    greedy_independent_set(&Graph::cycle(5), seed, rule).len(),
                    2
                );
            }
            let looped = Graph::new(3, vec![(0, 0), (1, 2)]).unwrap();
            let s = greedy_independent_set(&looped, 0, rule);
            assert!(!s.contains(0));
            assert_eq!(s.len(), 1);
        }
    }

    #[test]
    fn min_degree_prefers_leaves() {
        // path 0-1-2-3-4: min-degree greedy always takes both ends first
        let path = Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        for seed in 0..20 {
            let s = greedy_independent_set(&path, seed, GreedyRule::MinDegree);
            assert_eq!(s.to_vec(), vec![0, 2, 4]);
        }
    }

    #[test]
    fn greedy_is_maximal_and_independent() {
        for (seed, rule) in (0..10).flat_map(|s| RULES.map(|r| (s, r))) {
            let g = config_model_sample(200, 6, seed).unwrap();
            let s = greedy_independent_set(&g, seed, rule);
            assert!(internal_edge(&g, &s).is_none());
            for v in (0..g.n()).filter(|&v| !s.contains(v) && !g.has_loop_at(v)) {
                assert!(edges_to(&g, v, &s) > 0, "vertex {v} could be added");
            }
        }
    }

    #[test]
    fn thin_checks() {
        let g = Graph::complete(4);
        assert!(check_thin(&g, &VertexSet::new(4), 0).unwrap());
        assert!(matches!(
            check_thin(&g, &set(4, &[0, 1]), 3),
            Err(GraphError::NotIndependent(0, 1))
        ));
        // star K_{1,3} centered at 0 with leaves as the set
        let star = Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let leaves = set(4, &[1, 2, 3]);
        assert!(!check_thin(&star, &leaves, 2).unwrap());
        assert!(check_thin(&star, &leaves, 3).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::new(3, vec![(2, 0), (1, 1), (0, 2), (1, 0)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "3 3\n2 0\n1 1\n0 2\n1 0\n");
        let back = Graph::read_from(text.as_bytes()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_parse_errors() {
        assert!(Graph::read_from("".as_bytes()).is_err());
        assert!(Graph::read_from("2 1\n0 2\n".as_bytes()).is_err());
        assert!(Graph::read_from("2 1\n0 x\n".as_bytes()).is_err());
        assert!(Graph::read_from("2 2\n0 1\n".as_bytes()).is_err());
        assert!(Graph::read_from("2 1\n0 1 1\n".as_bytes()).is_err());
    }
}
