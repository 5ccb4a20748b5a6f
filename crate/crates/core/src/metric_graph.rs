//! Finite metric graphs with positive edge lengths: cycle rank, exact girth,
//! the `32N²/ε²` homology rank certificate, coarse subdivisions, and good
//! subgraphs. Multi-edges and loops are allowed throughout.
//!
//! Text format: one line `V <count>`, then lines `E <u> <v> <length>`.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct MetricGraph {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GraphError {
    NonpositiveLength { edge: usize, length: f64 },
    VertexOutOfRange { edge: usize, vertex: usize },
    /// Parse failure with a 1-based line number.
    Parse { line: usize, message: String },
    /// Which coarse-subdivision hypothesis failed.
    UnivalentVertex(usize),
    RankTooSmall { rank: usize },
    NotConnected,
    /// Which rank-certificate hypothesis failed.
    LengthHypothesis { total: f64, n: f64 },
    GirthHypothesis { girth: f64, eps: f64 },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonpositiveLength { edge, length } => {
                write!(f, "edge {edge} has nonpositive length {length}")
            }
            Self::VertexOutOfRange { edge, vertex } => {
                write!(f, "edge {edge} references vertex {vertex} out of range")
            }
            Self::Parse { line, message } => write!(f, "line {line}: {message}"),
            Self::UnivalentVertex(v) => write!(f, "vertex {v} is univalent; graph is not closed"),
            Self::RankTooSmall { rank } => write!(f, "cycle rank {rank} is below 2"),
            Self::NotConnected => write!(f, "graph is not connected"),
            Self::LengthHypothesis { total, n } => {
                write!(f, "total length {total} is not below N = {n}")
            }
            Self::GirthHypothesis { girth, eps } => {
                write!(f, "girth {girth} is below eps = {eps}")
            }
        }
    }
}

impl std::error::Error for GraphError {}

impl MetricGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        for (i, e) in edges.iter().enumerate() {
            if e.length.is_nan() || e.length <= 0.0 {
                return Err(GraphError::NonpositiveLength { edge: i, length: e.length });
            }
            if e.u >= vertex_count || e.v >= vertex_count {
                return Err(GraphError::VertexOutOfRange {
                    edge: i,
                    vertex: e.u.max(e.v),
                });
            }
        }
        Ok(Self { vertex_count, edges })
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Edge-end degree; a loop contributes 2 at its vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    pub fn component_count(&self) -> usize {
        let mut dsu = Dsu::new(self.vertex_count);
        for e in &self.edges {
            dsu.union(e.u, e.v);
        }
        dsu.count()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.component_count() == 1
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&i| self.find(i) == i).count()
    }
}

/// First Betti number of the underlying topological graph:
/// `E − V + (components)`.
pub fn cycle_rank(g: &MetricGraph) -> usize {
    g.edges.len() + g.component_count() - g.vertex_count
}

/// Minimal length over simple closed curves; `f64::INFINITY` for forests.
///
/// Exact search: every self-loop is a candidate, and for every non-loop edge
/// `e = (u,v)` the shortest `u→v` path avoiding `e` (Dijkstra over the
/// remaining multigraph) closes up to a simple cycle through `e`.
pub fn girth(g: &MetricGraph) -> f64 {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.vertex_count];
    for (i, e) in g.edges.iter().enumerate() {
        adj[e.u].push((i, e.v));
        adj[e.v].push((i, e.u));
    }
    let mut best = f64::INFINITY;
    for (i, e) in g.edges.iter().enumerate() {
        if e.u == e.v {
            best = best.min(e.length);
            continue;
        }
        let d = dijkstra_avoiding(g, &adj, e.u, e.v, i);
        if d.is_finite() {
            best = best.min(d + e.length);
        }
    }
    best
}

fn dijkstra_avoiding(
    g: &MetricGraph,
    adj: &[Vec<(usize, usize)>],
    from: usize,
    to: usize,
    banned_edge: usize,
) -> f64 {
    let mut dist = vec![f64::INFINITY; g.vertex_count];
    let mut done = vec![false; g.vertex_count];
    dist[from] = 0.0;
    loop {
        let mut cur = None;
        let mut cur_d = f64::INFINITY;
        for v in 0..g.vertex_count {
            if !done[v] && dist[v] < cur_d {
                cur = Some(v);
                cur_d = dist[v];
            }
        }
        let Some(v) = cur else {
            return dist[to];
        };
        if v == to {
            return dist[to];
        }
        done[v] = true;
        for &(ei, w) in &adj[v] {
            if ei == banned_edge {
                continue;
            }
            let nd = dist[v] + g.edges[ei].length;
            if nd < dist[w] {
                dist[w] = nd;
            }
        }
    }
}

/// Certificate for the homology rank bound `Rank H₁(G) ≤ 32N²/ε²` under the
/// hypotheses `length(G) < N` and girth ≥ ε.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphCertificate {
    pub total_length: f64,
    pub girth: f64,
    pub rank: usize,
    pub bound: f64,
}

impl GraphCertificate {
    pub fn holds(&self) -> bool {
        (self.rank as f64) <= self.bound
    }
}

pub fn rank_bound_certificate(
    g: &MetricGraph,
    n: f64,
    eps: f64,
) -> Result<GraphCertificate, GraphError> {
    let total = g.total_length();
    if total.is_nan() || n.is_nan() || total >= n {
        return Err(GraphError::LengthHypothesis { total, n });
    }
    let gir = girth(g);
    if gir < eps {
        return Err(GraphError::GirthHypothesis { girth: gir, eps });
    }
    Ok(GraphCertificate {
        total_length: total,
        girth: gir,
        rank: cycle_rank(g),
        bound: 32.0 * n * n / (eps * eps),
    })
}

/// Amalgamate across bivalent vertices until every vertex has valence ≥ 3,
/// for a closed connected graph of rank ≥ 2. The result has at most
/// `3(rank − 1)` edges; lengths add along amalgamated chains and the rank is
/// unchanged.
pub fn coarse_subdivision(g: &MetricGraph) -> Result<MetricGraph, GraphError> {
    let deg = g.degrees();
    if let Some(v) = deg.iter().position(|&d| d == 1) {
        return Err(GraphError::UnivalentVertex(v));
    }
    if !g.is_connected() || deg.contains(&0) && g.vertex_count > 1 {
        return Err(GraphError::NotConnected);
    }
    let rank = cycle_rank(g);
    if rank < 2 {
        return Err(GraphError::RankTooSmall { rank });
    }

    let mut edges: Vec<Option<Edge>> = g.edges.iter().copied().map(Some).collect();
    loop {
        // Recompute incidence over live edges.
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count];
        for (i, e) in edges.iter().enumerate() {
            if let Some(e) = e {
                incident[e.u].push(i);
                if e.v != e.u {
                    incident[e.v].push(i);
                }
            }
        }
        let mut changed = false;
        for (v, inc) in incident.iter().enumerate() {
            let loops = inc
                .iter()
                .filter(|&&i| edges[i].map(|e| e.u == e.v).unwrap_or(false))
                .count();
            let valence = inc.len() + loops;
            if valence == 2 && inc.len() == 2 {
                let (i, j) = (inc[0], inc[1]);
                let (ei, ej) = (edges[i].unwrap(), edges[j].unwrap());
                let a = if ei.u == v { ei.v } else { ei.u };
                let b = if ej.u == v { ej.v } else { ej.u };
                edges[i] = Some(Edge { u: a, v: b, length: ei.length + ej.length });
                edges[j] = None;
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }

    // Compact: drop dead edges, renumber surviving vertices in order.
    let live: Vec<Edge> = edges.into_iter().flatten().collect();
    let mut used = vec![false; g.vertex_count];
    for e in &live {
        used[e.u] = true;
        used[e.v] = true;
    }
    let mut remap = vec![usize::MAX; g.vertex_count];
    let mut next = 0;
    for v in 0..g.vertex_count {
        if used[v] {
            remap[v] = next;
            next += 1;
        }
    }
    let out = MetricGraph::new(
        next,
        live.iter()
            .map(|e| Edge { u: remap[e.u], v: remap[e.v], length: e.length })
            .collect(),
    )?;

    debug_assert_eq!(cycle_rank(&out), rank);
    debug_assert!(out.degrees().iter().all(|&d| d >= 3));
    debug_assert!(out.edges.len() <= 3 * (rank - 1));
    Ok(out)
}

/// Maximal closed subgraph: iteratively delete univalent vertices with their
/// edges, then drop isolated vertices. Carries the full first homology of
/// the input; never longer than it.
pub fn good_subgraph(g: &MetricGraph) -> MetricGraph {
    let mut edges: Vec<Option<Edge>> = g.edges.iter().copied().map(Some).collect();
    loop {
        let mut deg = vec![0usize; g.vertex_count];
        for e in edges.iter().flatten() {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        let mut changed = false;
        for slot in edges.iter_mut() {
            if let Some(e) = *slot {
                let leaf = (deg[e.u] == 1) || (deg[e.v] == 1 && e.u != e.v);
                if leaf {
                    *slot = None;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let live: Vec<Edge> = edges.into_iter().flatten().collect();
    let mut used = vec![false; g.vertex_count];
    for e in &live {
        used[e.u] = true;
        used[e.v] = true;
    }
    let mut remap = vec![usize::MAX; g.vertex_count];
    let mut next = 0;
    for v in 0..g.vertex_count {
        if used[v] {
            remap[v] = next;
            next += 1;
        }
    }
    MetricGraph {
        vertex_count: next,
        edges: live
            .iter()
            .map(|e| Edge { u: remap[e.u], v: remap[e.v], length: e.length })
            .collect(),
    }
}

/// Parse the `V`/`E` line format.
pub fn parse(text: &str) -> Result<MetricGraph, GraphError> {
    let mut vertex_count: Option<usize> = None;
    let mut edges = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut parts = s.split_whitespace();
        match parts.next() {
            Some("V") => {
                let n = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(GraphError::Parse { line, message: "expected `V <count>`".into() })?;
                vertex_count = Some(n);
            }
            Some("E") => {
                let mut field = |what: &str| -> Result<String, GraphError> {
                    parts
                        .next()
                        .map(str::to_string)
                        .ok_or(GraphError::Parse { line, message: format!("expected {what}") })
                };
                let bad = |what: &str| GraphError::Parse {
                    line,
                    message: format!("malformed {what}"),
                };
                let u = field("vertex")?.parse().map_err(|_| bad("vertex"))?;
                let v = field("vertex")?.parse().map_err(|_| bad("vertex"))?;
                let length = field("length")?.parse().map_err(|_| bad("length"))?;
                edges.push(Edge { u, v, length });
            }
            Some(other) => {
                return Err(GraphError::Parse {
                    line,
                    message: format!("unknown record `{other}`"),
                })
            }
            None => unreachable!("empty lines were skipped"),
        }
    }
    let n = vertex_count
        .ok_or(GraphError::Parse { line: 0, message: "missing `V <count>` line".into() })?;
    MetricGraph::new(n, edges)
}

pub fn print(g: &MetricGraph) -> String {
    let mut out = format!("V {}\n", g.vertex_count);
    for e in &g.edges {
        out.push_str(&format!("E {} {} {}\n", e.u, e.v, e.length));
    }
    out
}

/// Seeded random multigraph (loops and parallel edges allowed).
pub fn random_graph(rng: &mut crate::rng::SplitMix64, max_vertices: u64, max_edges: u64) -> MetricGraph {
    let n = rng.below(max_vertices) as usize + 1;
    let m = rng.below(max_edges + 1) as usize;
    let edges = (0..m)
        .map(|_| Edge {
            u: rng.below(n as u64) as usize,
            v: rng.below(n as u64) as usize,
            length: rng.range_f64(0.2, 3.0),
        })
        .collect();
    MetricGraph { vertex_count: n, edges }
}

/// Seeded random closed connected graph of rank ≥ 2: a cycle plus chords,
/// with some edges subdivided into bivalent chains.
pub fn random_closed_graph(rng: &mut crate::rng::SplitMix64) -> MetricGraph {
    let k = rng.below(5) as usize + 3;
    let mut edges: Vec<Edge> = (0..k)
        .map(|i| Edge { u: i, v: (i + 1) % k, length: rng.range_f64(0.3, 2.0) })
        .collect();
    let chords = rng.below(4) as usize + 1;
    for _ in 0..chords {
        edges.push(Edge {
            u: rng.below(k as u64) as usize,
            v: rng.below(k as u64) as usize,
            length: rng.range_f64(0.3, 2.0),
        });
    }
    let mut g = MetricGraph { vertex_count: k, edges };
    // Subdivide a few edges to plant bivalent vertices.
    for _ in 0..rng.below(6) {
        let i = rng.below(g.edges.len() as u64) as usize;
        let e = g.edges[i];
        let mid = g.vertex_count;
        g.vertex_count += 1;
        let t = rng.range_f64(0.2, 0.8);
        g.edges[i] = Edge { u: e.u, v: mid, length: e.length * t };
        g.edges.push(Edge { u: mid, v: e.v, length: e.length * (1.0 - t) });
    }
    g
}
