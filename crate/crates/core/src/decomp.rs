//! k-star decompositions of regular graphs through thin independent sets and
//! in-regular orientations.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    self, check_thin, edges_to, greedy_independent_set, induced_edges, internal_edge, Graph,
    GraphError, GreedyRule, VertexSet,
};

/// Vertex cap for the exhaustive orientation and subset scans.
pub const BRUTE_FORCE_MAX_N: usize = 20;
pub const DEFAULT_MAX_RETRIES: usize = 10;

#[derive(Debug, Error)]
pub enum DecompError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("set too small: {size} < target {target}")]
    SetTooSmall { size: usize, target: usize },
    #[error("vertex {vertex} has out-degree {out} < k = {k}")]
    OutDegreeTooSmall { vertex: usize, out: usize, k: usize },
    #[error("{0} vertices exceeds the exhaustive-scan cap of {1}")]
    TooLarge(usize, usize),
    #[error("decomposition failed at stage {}", .0.stage)]
    Failed(Box<DecomposeFailure>),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DecompError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientationMode {
    /// Every in-degree equals `ell`; needs `e(H) = ell |V(H)|`.
    Exact,
    /// Every in-degree is at most `ell`; needs `e(H) <= ell |V(H)|`.
    AtMost,
}

/// Head assignment for every edge of a graph.
#[derive(Debug, Clone)]
pub struct Orientation<'g> {
    graph: &'g Graph,
    ell: usize,
    mode: OrientationMode,
    heads: Vec<usize>,
}

impl<'g> Orientation<'g> {
    /// Checks that every head is an endpoint of its edge.
    pub fn new(
        graph: &'g Graph,
        ell: usize,
        mode: OrientationMode,
        heads: Vec<usize>,
    ) -> Result<Self> {
        if heads.len() != graph.m() {
            return Err(DecompError::InvalidInput(format!(
                "{} heads for {} edges",
                heads.len(),
                graph.m()
            )));
        }
        for (id, &h) in heads.iter().enumerate() {
            let (u, v) = graph.edge(id);
            if h != u && h != v {
                return Err(DecompError::InvalidInput(format!(
                    "head {h} is not an endpoint of edge {id} ({u}, {v})"
                )));
            }
        }
        Ok(Self {
            graph,
            ell,
            mode,
            heads,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn mode(&self) -> OrientationMode {
        self.mode
    }

    pub fn head(&self, edge: usize) -> usize {
        self.heads[edge]
    }

    /// The other endpoint; for a loop, the vertex itself.
    pub fn tail(&self, edge: usize) -> usize {
        let (u, v) = self.graph.edge(edge);
        if self.heads[edge] == u {
            v
        } else {
            u
        }
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.graph.n()];
        for &h in &self.heads {
            deg[h] += 1;
        }
        deg
    }

    /// Whether in-degrees meet the mode's bound.
    pub fn is_valid(&self) -> bool {
        let deg = self.in_degrees();
        match self.mode {
            OrientationMode::Exact => deg.iter().all(|&x| x == self.ell),
            OrientationMode::AtMost => deg.iter().all(|&x| x <= self.ell),
        }
    }
}

/// Result of [`in_regular_orientation`].
#[derive(Debug, Clone)]
pub enum OrientationOutcome<'g> {
    Feasible(Orientation<'g>),
    /// A set with `e[U] > ell |U|`, taken from the source side of a minimum cut.
    Infeasible {
        witness: VertexSet,
        induced: usize,
        bound: usize,
        flow: usize,
    },
}

impl OrientationOutcome<'_> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible(_))
    }
}

struct Dinic {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<usize>,
    next: Vec<usize>,
    level: Vec<usize>,
    iter: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Dinic {
    fn new(nodes: usize) -> Self {
        Self {
            head: vec![NIL; nodes],
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
            level: vec![NIL; nodes],
            iter: vec![NIL; nodes],
        }
    }

    /// Returns the arc index; its reverse is `index ^ 1`.
    fn add_arc(&mut self, from: usize, to: usize, cap: usize) -> usize {
        let id = self.to.len();
        for (a, b, c) in [(from, to, cap), (to, from, 0)] {
            self.to.push(b);
            self.cap.push(c);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
        id
    }

    fn bfs(&mut self, s: usize) {
        self.level.fill(NIL);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let mut a = self.head[u];
            while a != NIL {
                let v = self.to[a];
                if self.cap[a] > 0 && self.level[v] == NIL {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
                a = self.next[a];
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: usize) -> usize {
        if u == t {
            return pushed;
        }
        while self.iter[u] != NIL {
            let a = self.iter[u];
            let v = self.to[a];
            if self.cap[a] > 0 && self.level[v] == self.level[u] + 1 {
                let got = self.dfs(v, t, pushed.min(self.cap[a]));
                if got > 0 {
                    self.cap[a] -= got;
                    self.cap[a ^ 1] += got;
                    return got;
                }
            }
            self.iter[u] = self.next[a];
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] == NIL {
                return flow;
            }
            self.iter.clone_from(&self.head);
            loop {
                let got = self.dfs(s, t, usize::MAX);
                if got == 0 {
                    break;
                }
                flow += got;
            }
        }
    }

    /// Nodes reachable from `s` in the residual graph after the last BFS.
    fn reachable(&self) -> impl Fn(usize) -> bool + '_ {
        move |v| self.level[v] != NIL
    }
}

/// Orients `h` so that every in-degree is `ell` (exact) or at most `ell`,
/// via integral max flow on source -> edge -> endpoint -> sink.
pub fn in_regular_orientation(
    h: &Graph,
    ell: usize,
    mode: OrientationMode,
) -> Result<OrientationOutcome<'_>> {
    let (n, m) = (h.n(), h.m());
    let budget = ell * n;
    match mode {
        OrientationMode::Exact if m != budget => {
            return Err(DecompError::InvalidInput(format!(
                "exact mode needs e(H) = ell |V(H)|, got {m} != {budget}"
            )))
        }
        OrientationMode::AtMost if m > budget => {
            return Err(DecompError::InvalidInput(format!(
                "at-most mode needs e(H) <= ell |V(H)|, got {m} > {budget}"
            )))
        }
        _ => {}
    }
    let source = 0;
    let sink = 1;
    let edge_node = |e: usize| 2 + e;
    let vertex_node = |v: usize| 2 + m + v;
    let mut net = Dinic::new(2 + m + n);
    let mut head_arcs = Vec::with_capacity(m);
    for (e, &(u, v)) in h.edges().iter().enumerate() {
        net.add_arc(source, edge_node(e), 1);
        let first = net.add_arc(edge_node(e), vertex_node(u), 1);
        let second = (u != v).then(|| net.add_arc(edge_node(e), vertex_node(v), 1));
        head_arcs.push((first, second));
    }
    for v in 0..n {
        net.add_arc(vertex_node(v), sink, ell);
    }
    let flow = net.max_flow(source, sink);

    if flow == m {
        let heads = h
            .edges()
            .iter()
            .zip(&head_arcs)
            .map(|(&(u, v), &(first, _))| if net.cap[first] == 0 { u } else { v })
            .collect();
        return Ok(OrientationOutcome::Feasible(Orientation::new(
            h, ell, mode, heads,
        )?));
    }
    let reach = net.reachable();
    let witness = VertexSet::from_ids(n, (0..n).filter(|&v| reach(vertex_node(v))))?;
    let induced = induced_edges(h, &witness);
    let bound = ell * witness.len();
    debug_assert!(induced > bound);
    Ok(OrientationOutcome::Infeasible {
        witness,
        induced,
        bound,
        flow,
    })
}

/// Exhaustive check of `e[U] <= ell |U|` over every vertex subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceOrientation {
    pub feasible: bool,
    /// First violating set in increasing bitmask order.
    pub witness: Option<Vec<usize>>,
    /// Whether the complementary form agrees subset by subset: equivalent when
    /// `e(H) = ell |V(H)|`, and implies the first form when `e(H) < ell |V(H)|`.
    pub complement_form_consistent: bool,
}

pub fn orientation_feasible_bruteforce(h: &Graph, ell: usize) -> Result<BruteForceOrientation> {
    let n = h.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(DecompError::TooLarge(n, BRUTE_FORCE_MAX_N));
    }
    let m = h.m();
    let masks: Vec<(u32, u32)> = h
        .edges()
        .iter()
        .map(|&(u, v)| (1u32 << u, 1u32 << v))
        .collect();
    let mut witness = None;
    let mut consistent = true;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        let (mut inside, mut outside, mut cut) = (0usize, 0usize, 0usize);
        for &(a, b) in &masks {
            match (mask & a != 0, mask & b != 0) {
                (true, true) => inside += 1,
                (false, false) => outside += 1,
                _ => cut += 1,
            }
        }
        let first = inside <= ell * size;
        let second = outside + cut >= ell * (n - size);
        if m == ell * n {
            consistent &= first == second;
        } else if m < ell * n {
            consistent &= !second || first;
        }
        if !first && witness.is_none() {
            witness = Some(VertexSet::from_mask(n, mask as u64).to_vec());
        }
    }
    Ok(BruteForceOrientation {
        feasible: witness.is_none(),
        witness,
        complement_form_consistent: consistent,
    })
}

/// An independent set in which every outside vertex has at most `d_hat`
/// neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinIndependentSet {
    pub set: VertexSet,
    pub d_hat: usize,
    pub verified: bool,
    /// Vertices dropped to reach this state, in removal order.
    pub removed: Vec<usize>,
}

/// Drops members of `a` until it is `d_hat`-thin: each outside vertex, in
/// increasing order, loses its lowest-id neighbors in the set until at most
/// `d_hat` edges remain towards it.
pub fn thin_down(g: &Graph, a: &VertexSet, d_hat: usize) -> Result<ThinIndependentSet> {
    if d_hat == 0 {
        return Err(DecompError::InvalidInput("d_hat must be positive".into()));
    }
    if let Some((u, v)) = internal_edge(g, a) {
        return Err(GraphError::NotIndependent(u, v).into());
    }
    let mut set = a.clone();
    let mut removed = Vec::new();
    for v in (0..g.n()).filter(|&v| !a.contains(v)) {
        let mut excess = edges_to(g, v, &set).saturating_sub(d_hat);
        if excess == 0 {
            continue;
        }
        let mut inside: Vec<usize> = g
            .neighbors(v)
            .iter()
            .map(|&(w, _)| w)
            .filter(|&w| set.contains(w))
            .collect();
        inside.sort_unstable();
        inside.dedup();
        for w in inside {
            if excess == 0 {
                break;
            }
            let mult = g.neighbors(v).iter().filter(|&&(x, _)| x == w).count();
            set.remove(w);
            removed.push(w);
            excess = excess.saturating_sub(mult);
        }
    }
    let verified = check_thin(g, &set, d_hat)?;
    Ok(ThinIndependentSet {
        set,
        d_hat,
        verified,
        removed,
    })
}

/// Trims `a` to `target` members by dropping its highest ids.
pub fn adjust_size(g: &Graph, a: &ThinIndependentSet, target: usize) -> Result<ThinIndependentSet> {
    let size = a.set.len();
    if size < target {
        return Err(DecompError::SetTooSmall { size, target });
    }
    let mut out = a.clone();
    let drop: Vec<usize> = a.set.iter().rev().take(size - target).collect();
    for v in drop {
        out.set.remove(v);
        out.removed.push(v);
    }
    out.verified = check_thin(g, &out.set, out.d_hat)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub center: usize,
    pub leaves: Vec<usize>,
}

/// Edge-disjoint k-stars plus the edges they leave uncovered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarDecomposition {
    pub k: usize,
    pub stars: Vec<Star>,
    pub leftover: Vec<(usize, usize)>,
}

impl StarDecomposition {
    /// Text form: `k r`, one `center leaf_1 .. leaf_k` line per star, then
    /// `r` leftover `u v` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.k, self.leftover.len()).unwrap();
        for star in &self.stars {
            write!(out, "{}", star.center).unwrap();
            for leaf in &star.leaves {
                write!(out, " {leaf}").unwrap();
            }
            out.push('\n');
        }
        for &(u, v) in &self.leftover {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields = line
                .split_whitespace()
                .map(|f| {
                    f.parse::<usize>().map_err(|e| DecompError::Parse {
                        line: i + 1,
                        msg: format!("{f:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push((i + 1, fields));
        }
        let mut rows = rows.into_iter();
        let Some((hline, header)) = rows.next() else {
            return Err(DecompError::Parse {
                line: 1,
                msg: "missing header".into(),
            });
        };
        let [k, r] = header[..] else {
            return Err(DecompError::Parse {
                line: hline,
                msg: "header must be `k r`".into(),
            });
        };
        let rows: Vec<_> = rows.collect();
        if rows.len() < r {
            return Err(DecompError::Parse {
                line: hline,
                msg: format!(
                    "header promises {r} leftover lines, file has {}",
                    rows.len()
                ),
            });
        }
        let (star_rows, left_rows) = rows.split_at(rows.len() - r);
        let stars = star_rows
            .iter()
            .map(|(_, f)| Star {
                center: f[0],
                leaves: f[1..].to_vec(),
            })
            .collect();
        let leftover = left_rows
            .iter()
            .map(|(line, f)| match f[..] {
                [u, v] => Ok((u, v)),
                _ => Err(DecompError::Parse {
                    line: *line,
                    msg: "leftover line must be `u v`".into(),
                }),
            })
            .collect::<Result<_>>()?;
        Ok(Self { k, stars, leftover })
    }
}

fn exact_alpha_target(n: usize, d: usize, k: usize) -> usize {
    // ceil((1 - d/(2k)) n) = n - floor(d n / (2k))
    n - d * n / (2 * k)
}

/// Builds stars from an orientation of `g[A^c]`: edges from outside `A` into
/// `A` point at `A`, every outside vertex keeps its out-edges, the first `k`
/// by edge id form its star and the rest go to leftover.
pub fn stars_from_orientation(
    g: &Graph,
    a: &VertexSet,
    orientation: &Orientation<'_>,
    k: usize,
) -> Result<StarDecomposition> {
    if k == 0 {
        return Err(DecompError::InvalidInput("k must be positive".into()));
    }
    if let Some(v) = (0..g.n()).find(|&v| g.has_loop_at(v)) {
        return Err(DecompError::InvalidInput(format!(
            "loop at vertex {v} cannot belong to a star"
        )));
    }
    if let Some((u, v)) = internal_edge(g, a) {
        return Err(GraphError::NotIndependent(u, v).into());
    }
    let sub = g.induced_subgraph(&a.complement());
    if orientation.graph() != &sub.graph {
        return Err(DecompError::InvalidInput(
            "orientation is not over the subgraph induced by the complement".into(),
        ));
    }
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in sub.vertices.iter().enumerate() {
        local[v] = i;
    }
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        match (a.contains(u), a.contains(v)) {
            (false, true) => out_edges[u].push(id),
            (true, false) => out_edges[v].push(id),
            _ => {}
        }
    }
    for (lid, &gid) in sub.edge_ids.iter().enumerate() {
        out_edges[sub.vertices[orientation.tail(lid)]].push(gid);
    }
    let mut stars = Vec::new();
    let mut leftover = Vec::new();
    for &v in &sub.vertices {
        let outs = &mut out_edges[v];
        if outs.len() < k {
            return Err(DecompError::OutDegreeTooSmall {
                vertex: v,
                out: outs.len(),
                k,
            });
        }
        outs.sort_unstable();
        let other = |id: usize| {
            let (x, y) = g.edge(id);
            if x == v {
                y
            } else {
                x
            }
        };
        stars.push(Star {
            center: v,
            leaves: outs[..k].iter().map(|&id| other(id)).collect(),
        });
        leftover.extend(outs[k..].iter().map(|&id| g.edge(id)));
    }
    Ok(StarDecomposition { k, stars, leftover })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Greedy,
    ThinDown,
    AdjustSize,
    Orientation,
    Stars,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Greedy => "greedy",
            Self::ThinDown => "thin_down",
            Self::AdjustSize => "adjust_size",
            Self::Orientation => "orientation",
            Self::Stars => "stars",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeOptions {
    pub seed: u64,
    /// Extra attempts, each with the next greedy seed, after the first fails.
    pub max_retries: usize,
    /// Thinness bound for the independent set; `None` means `k`.
    pub d_hat: Option<usize>,
    pub greedy: GreedyRule,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_retries: DEFAULT_MAX_RETRIES,
            d_hat: None,
            greedy: GreedyRule::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttemptReport {
    pub seed: u64,
    pub greedy_size: usize,
    pub thinned_size: usize,
    pub target: usize,
    pub stage_failed: Option<Stage>,
    pub message: Option<String>,
    /// Violating set `U` with `e[U] > ell |U|` when the orientation fails.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeFailure {
    pub stage: Stage,
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub attempts: Vec<AttemptReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposed {
    pub decomposition: StarDecomposition,
    pub mode: OrientationMode,
    pub d: usize,
    pub d_hat: usize,
    pub attempts: Vec<AttemptReport>,
}

/// Greedy independent set, thinning, trimming to `ceil(alpha_{d,k} n)`,
/// orientation of the complement and star extraction, retried with fresh
/// greedy seeds.
pub fn decompose(g: &Graph, k: usize, options: &DecomposeOptions) -> Result<Decomposed> {
    let d = g
        .regular_degree()
        .ok_or_else(|| DecompError::InvalidInput("graph is not regular".into()))?;
    if !graph::is_simple(g) {
        return Err(DecompError::InvalidInput("graph is not simple".into()));
    }
    if 2 * k <= d || k > d {
        return Err(DecompError::InvalidInput(format!(
            "need d/2 < k <= d, got d = {d}, k = {k}"
        )));
    }
    let n = g.n();
    let d_hat = options.d_hat.unwrap_or(k);
    let target = exact_alpha_target(n, d, k);
    let ell = d - k;
    let mode = if (n * d) % (2 * k) == 0 {
        OrientationMode::Exact
    } else {
        OrientationMode::AtMost
    };

    let mut attempts = Vec::new();
    let mut last_stage = Stage::Greedy;
    for i in 0..=options.max_retries {
        let seed = options.seed.wrapping_add(i as u64);
        let greedy = greedy_independent_set(g, seed, options.greedy);
        let mut report = AttemptReport {
            seed,
            greedy_size: greedy.len(),
            thinned_size: 0,
            target,
            stage_failed: None,
            message: None,
            witness: None,
        };
        let mut fail = |report: &mut AttemptReport, stage: Stage, msg: String| {
            report.stage_failed = Some(stage);
            report.message = Some(msg);
            last_stage = stage;
        };
        if greedy.len() < target {
            let msg = format!("greedy set has {} < {target} vertices", greedy.len());
            fail(&mut report, Stage::Greedy, msg);
            attempts.push(report);
            continue;
        }
        let thin = thin_down(g, &greedy, d_hat)?;
        report.thinned_size = thin.set.len();
        let sized = match adjust_size(g, &thin, target) {
            Ok(s) => s,
            Err(e) => {
                fail(&mut report, Stage::AdjustSize, e.to_string());
                attempts.push(report);
                continue;
            }
        };
        let sub = g.induced_subgraph(&sized.set.complement());
        match in_regular_orientation(&sub.graph, ell, mode)? {
            OrientationOutcome::Infeasible {
                witness,
                induced,
                bound,
                ..
            } => {
                let msg = format!("e[U] = {induced} > {bound} for |U| = {}", witness.len());
                fail(&mut report, Stage::Orientation, msg);
                report.witness = Some(witness.iter().map(|v| sub.vertices[v]).collect());
                attempts.push(report);
            }
            OrientationOutcome::Feasible(orientation) => {
                match stars_from_orientation(g, &sized.set, &orientation, k) {
                    Ok(decomposition) => {
                        attempts.push(report);
                        return Ok(Decomposed {
                            decomposition,
                            mode,
                            d,
                            d_hat,
                            attempts,
                        });
                    }
                    Err(e) => {
                        fail(&mut report, Stage::Stars, e.to_string());
                        attempts.push(report);
                    }
                }
            }
        }
    }
    Err(DecompError::Failed(Box::new(DecomposeFailure {
        stage: last_stage,
        k,
        d,
        n,
        attempts,
    })))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

fn pair(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Checks that the stars and leftover partition the edge multiset of `g`,
/// that every star has `k` edges at its center and that at most `k - 1`
/// edges are left over (none when `k` divides `e(g)`).
pub fn verify_decomposition(g: &Graph, sd: &StarDecomposition) -> VerifyReport {
    let mut diagnostics = Vec::new();
    let k = sd.k;
    if k == 0 {
        diagnostics.push("k must be positive".to_string());
    }
    let mut available: HashMap<(usize, usize), usize> = HashMap::new();
    for &(u, v) in g.edges() {
        *available.entry(pair(u, v)).or_default() += 1;
    }
    let mut used: HashMap<(usize, usize), usize> = HashMap::new();
    let mut non_edges = Vec::new();
    let mut take = |u: usize, v: usize, context: String, diagnostics: &mut Vec<String>| {
        if u >= g.n() || v >= g.n() {
            diagnostics.push(format!("{context}: vertex out of range 0..{}", g.n()));
            return;
        }
        let key = pair(u, v);
        if !available.contains_key(&key) {
            non_edges.push(format!("{context}: ({u}, {v}) is not an edge"));
            return;
        }
        *used.entry(key).or_default() += 1;
    };
    for (i, star) in sd.stars.iter().enumerate() {
        if star.leaves.len() != k {
            diagnostics.push(format!(
                "star {i} at center {} has {} edges, expected {k}",
                star.center,
                star.leaves.len()
            ));
        }
        for &leaf in &star.leaves {
            take(star.center, leaf, format!("star {i}"), &mut diagnostics);
        }
    }
    for (i, &(u, v)) in sd.leftover.iter().enumerate() {
        take(u, v, format!("leftover {i}"), &mut diagnostics);
    }
    diagnostics.extend(non_edges);
    let mut over: Vec<_> = used
        .iter()
        .filter(|(key, &c)| c > available[*key])
        .map(|(&key, _)| key)
        .collect();
    over.sort_unstable();
    for (u, v) in over {
        diagnostics.push(format!(
            "edge covered twice: ({u}, {v}) used {} times, multiplicity {}",
            used[&(u, v)],
            available[&(u, v)]
        ));
    }
    let missing: usize = available
        .iter()
        .map(|(key, &c)| c.saturating_sub(used.get(key).copied().unwrap_or(0)))
        .sum();
    if missing > 0 {
        diagnostics.push(format!("uncovered edges: {missing}"));
    }
    if k > 0 {
        if sd.leftover.len() > k - 1 {
            diagnostics.push(format!(
                "leftover has {} edges, more than k - 1 = {}",
                sd.leftover.len(),
                k - 1
            ));
        }
        if g.m() % k == 0 && !sd.leftover.is_empty() {
            diagnostics.push(format!(
                "k = {k} divides e(g) = {} but {} edges are left over",
                g.m(),
                sd.leftover.len()
            ));
        }
    }
    VerifyReport {
        valid: diagnostics.is_empty(),
        diagnostics,
    }
}

/// Separate verdicts on the three sufficient conditions for a k-star
/// decomposition built from `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SufficientConditionsReport {
    /// `A` is independent, `d_hat`-thin and has density exactly `alpha_{d,k}`.
    pub thin_with_density: bool,
    /// `e[U] <= (d - k)|U|` for all `U` outside `A` with `|U| <= c n`.
    pub small_sets_sparse: bool,
    /// `e[W] <= (k - d_hat)|W|` for all `W` outside `A` with
    /// `|W| < (1 - alpha_{d,k} - c) n`.
    pub large_complements_sparse: bool,
}

impl SufficientConditionsReport {
    pub fn all(&self) -> bool {
        self.thin_with_density && self.small_sets_sparse && self.large_complements_sparse
    }
}

pub fn check_sufficient_conditions(
    g: &Graph,
    a: &VertexSet,
    d_hat: usize,
    c: f64,
    k: usize,
) -> Result<SufficientConditionsReport> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(DecompError::TooLarge(n, BRUTE_FORCE_MAX_N));
    }
    let d = g
        .regular_degree()
        .ok_or_else(|| DecompError::InvalidInput("graph is not regular".into()))?;
    if 2 * k <= d || d_hat == 0 || d_hat >= k || !(c > 0.0 && c < 1.0) {
        return Err(DecompError::InvalidInput(format!(
            "need d/2 < k, 0 < d_hat < k, 0 < c < 1; got d = {d}, k = {k}, d_hat = {d_hat}, c = {c}"
        )));
    }
    let independent = internal_edge(g, a).is_none();
    let thin = independent && check_thin(g, a, d_hat)?;
    // |A| = (1 - d/(2k)) n  <=>  2k|A| = (2k - d) n
    let density = 2 * k * a.len() == (2 * k - d) * n;

    let outside: Vec<usize> = a.complement().to_vec();
    let small_cap = c * n as f64;
    let large_cap = (d as f64 / (2.0 * k as f64) - c) * n as f64;
    let mut small_ok = true;
    let mut large_ok = true;
    let local: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter_map(|&(u, v)| {
            let iu = outside.binary_search(&u).ok()?;
            let iv = outside.binary_search(&v).ok()?;
            Some((iu, iv))
        })
        .collect();
    for mask in 0u32..(1u32 << outside.len()) {
        let size = mask.count_ones() as usize;
        let inside = local
            .iter()
            .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .count();
        if (size as f64) <= small_cap && inside > (d - k) * size {
            small_ok = false;
        }
        if (size as f64) < large_cap && inside > (k - d_hat) * size {
            large_ok = false;
        }
    }
    Ok(SufficientConditionsReport {
        thin_with_density: thin && density,
        small_sets_sparse: small_ok,
        large_complements_sparse: large_ok,
    })
}
