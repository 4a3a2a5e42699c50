//! Simple undirected graphs, the standard families, joins, and graph
//! distance matrices.
//!
//! Vertices are dense indices `0..n`. In a join `g1 + g2` the vertices of
//! `g1` keep their indices and those of `g2` are shifted by `g1.n()`, so the
//! adjacency matrix of the join has the block form `[[A1, J], [J, A2]]`.

mod expr;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{QecError, Result};

pub use expr::{parse_graph_expr, parse_expr, render, GraphExpr};

/// The graph families understood by [`family`] and the expression grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Empty,
    Path,
    Cycle,
    Complete,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Empty => "empty",
            FamilyKind::Path => "path",
            FamilyKind::Cycle => "cycle",
            FamilyKind::Complete => "complete",
        }
    }

    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::Empty,
        FamilyKind::Path,
        FamilyKind::Cycle,
        FamilyKind::Complete,
    ];
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = QecError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empty" => Ok(FamilyKind::Empty),
            "path" => Ok(FamilyKind::Path),
            "cycle" => Ok(FamilyKind::Cycle),
            "complete" => Ok(FamilyKind::Complete),
            other => Err(QecError::UnknownFamily(other.to_string())),
        }
    }
}

/// An undirected simple graph on the vertex set `0..n`.
///
/// Equality compares vertex count and edge set only; the label is
/// presentational.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    label: Option<String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an edge list. Pairs may be given in either
    /// orientation; self-loops, duplicates and out-of-range endpoints are
    /// rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(QecError::invalid("a graph needs at least one vertex"));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(QecError::invalid(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(QecError::invalid(format!(
                    "edge {{{a},{b}}} out of range for {n} vertices"
                )));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(QecError::invalid(format!("duplicate edge {{{},{}}}", e.0, e.1)));
            }
        }
        Ok(Graph {
            n,
            edges: set,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let first = deg[0];
        deg.iter().all(|&d| d == first).then_some(first)
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n - 1) / 2
    }

    pub fn is_connected(&self) -> bool {
        self.unreachable_pair().is_none()
    }

    fn unreachable_pair(&self) -> Option<(usize, usize)> {
        let dist = bfs(&self.neighbors(), 0);
        dist.iter().position(|d| d.is_none()).map(|v| (0, v))
    }

    /// Integer adjacency matrix.
    pub fn adjacency(&self) -> DMatrix<i64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1;
            a[(j, i)] = 1;
        }
        a
    }

    pub fn adjacency_f64(&self) -> DMatrix<f64> {
        self.adjacency().map(|v| v as f64)
    }

    /// Disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(a, b)| (a + shift, b + shift)))
            .collect();
        Graph {
            n: self.n + other.n,
            edges,
            label: None,
        }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "graph(n={}, m={})", self.n, self.edges.len()),
        }
    }
}

/// The standard member of a graph family on `n` vertices.
///
/// Path vertices are consecutive: `{0,1}, {1,2}, ...`; the cycle adds
/// `{0, n-1}`.
pub fn family(kind: FamilyKind, n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(QecError::invalid(format!("{kind} graph needs n >= 1")));
    }
    let edges: Vec<(usize, usize)> = match kind {
        FamilyKind::Empty => Vec::new(),
        FamilyKind::Path => (1..n).map(|i| (i - 1, i)).collect(),
        FamilyKind::Cycle => {
            if n < 3 {
                return Err(QecError::invalid(format!("cycle needs n >= 3, got {n}")));
            }
            (1..n).map(|i| (i - 1, i)).chain([(0, n - 1)]).collect()
        }
        FamilyKind::Complete => (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect(),
    };
    Ok(Graph::new(n, edges)?.with_label(format!("{kind}:{n}")))
}

/// Graph join: disjoint union plus every edge between the two parts.
pub fn join(g1: &Graph, g2: &Graph) -> Graph {
    let shift = g1.n;
    let mut g = g1.disjoint_union(g2);
    for i in 0..g1.n {
        for j in 0..g2.n {
            g.edges.insert((i, j + shift));
        }
    }
    if let (Some(a), Some(b)) = (g1.label(), g2.label()) {
        g.label = Some(format!("join({a}, {b})"));
    }
    g
}

/// Reads the edge-list format: first line `n`, then one `i j` pair per line
/// (0-based). Blank lines are ignored.
pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => QecError::FileNotFound(path.to_path_buf()),
        _ => QecError::EdgeList {
            path: path.to_path_buf(),
            message: e.to_string(),
        },
    })?;
    parse_edge_list(&text).map_err(|message| QecError::EdgeList {
        path: path.to_path_buf(),
        message,
    })
}

pub(crate) fn parse_edge_list(text: &str) -> std::result::Result<Graph, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, first) = lines.next().ok_or("empty file")?;
    let n: usize = first
        .parse()
        .map_err(|_| format!("line 1: expected vertex count, got `{first}`"))?;
    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let mut it = line.split_whitespace();
        let mut next = || -> std::result::Result<usize, String> {
            it.next()
                .ok_or_else(|| format!("line {lineno}: expected `i j`"))?
                .parse()
                .map_err(|_| format!("line {lineno}: bad vertex index"))
        };
        let (a, b) = (next()?, next()?);
        if it.next().is_some() {
            return Err(format!("line {lineno}: trailing tokens"));
        }
        edges.push((a, b));
    }
    Graph::new(n, edges).map_err(|e| e.to_string())
}

/// Graph distances `d(i, j)` stored as integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j) as f64)
    }

    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// Checks symmetry, zero diagonal, positivity off the diagonal and the
    /// triangle inequality. Returns a description of the first violation.
    pub fn check_metric(&self) -> std::result::Result<(), String> {
        let n = self.n;
        for i in 0..n {
            if self.get(i, i) != 0 {
                return Err(format!("d({i},{i}) != 0"));
            }
            for j in 0..n {
                if self.get(i, j) != self.get(j, i) {
                    return Err(format!("asymmetric at ({i},{j})"));
                }
                if i != j && self.get(i, j) == 0 {
                    return Err(format!("d({i},{j}) = 0"));
                }
                for k in 0..n {
                    if self.get(i, k) > self.get(i, j) + self.get(j, k) {
                        return Err(format!("triangle inequality fails at ({i},{j},{k})"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn bfs(adj: &[Vec<usize>], src: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// All-pairs shortest path lengths by breadth-first search from each vertex.
pub fn distance_matrix(g: &Graph) -> Result<DistanceMatrix> {
    let n = g.n();
    let adj = g.neighbors();
    let mut d = vec![0u32; n * n];
    for s in 0..n {
        for (t, dt) in bfs(&adj, s).into_iter().enumerate() {
            d[s * n + t] = dt.ok_or(QecError::NotConnected(s, t))?;
        }
    }
    Ok(DistanceMatrix { n, d })
}

/// Distance matrix of `g1 + g2` as `2J - 2I - A`, with `A` the adjacency
/// matrix of the join. Joins have diameter at most two.
pub fn join_distance_matrix(g1: &Graph, g2: &Graph) -> DistanceMatrix {
    let n = g1.n() + g2.n();
    let shift = g1.n();
    let adjacent = |i: usize, j: usize| -> bool {
        match (i < shift, j < shift) {
            (true, true) => g1.has_edge(i, j),
            (false, false) => g2.has_edge(i - shift, j - shift),
            _ => true,
        }
    };
    let mut d = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                d[i * n + j] = 2 - u32::from(adjacent(i, j));
            }
        }
    }
    DistanceMatrix { n, d }
}
