//! Underlying undirected loopless graphs and weighted digraphs of evolution
//! algebras. Vertices are 0-based; edge lists are kept sorted so iteration
//! (and every witness derived from it) is reproducible.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::algebra::EvolutionAlgebra;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Scalar};

/// A simple graph: no loops, no parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Builds a graph from unordered pairs. Loops and out-of-range endpoints
    /// are rejected; duplicate pairs collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut norm = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange { vertex: a.max(b), n });
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("loop at vertex {a}")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        norm.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &norm {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(SimpleGraph { n, edges: norm, adj })
    }

    pub fn empty(n: usize) -> Self {
        SimpleGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Parses an edge list with one `i j` pair per line; `#` starts a comment.
    /// Without an explicit vertex count, `n` is one more than the largest
    /// endpoint.
    pub fn from_edge_list(text: &str, n: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<usize> {
                s.and_then(|s| s.parse().ok()).ok_or_else(|| {
                    Error::Parse(format!("line {}: expected `i j`", lineno + 1))
                })
            };
            let a = parse(parts.next())?;
            let b = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::Parse(format!("line {}: trailing tokens", lineno + 1)));
            }
            edges.push((a, b));
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0));
        SimpleGraph::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (a, b) in &self.edges {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(min, max)` pairs in sorted order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn is_regular(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut head = 0;
            while head < members.len() {
                let v = members[head];
                head += 1;
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The empty graph counts as connected, as does a single vertex.
    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(source)?;
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].expect("queued vertices have distances");
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Graph distance; `None` when `i` and `j` lie in different components.
    pub fn distance(&self, i: usize, j: usize) -> Result<Option<usize>> {
        self.check_vertex(j)?;
        Ok(self.bfs_distances(i)?[j])
    }

    /// `None` for a disconnected graph (infinite diameter).
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in 0..self.n {
            let dist = self.bfs_distances(v).expect("vertex in range");
            for d in dist {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Vertices within distance `k` of `i`, sorted.
    pub fn ball(&self, i: usize, k: usize) -> Result<Vec<usize>> {
        Ok(self
            .bfs_distances(i)?
            .into_iter()
            .enumerate()
            .filter(|(_, d)| d.is_some_and(|d| d <= k))
            .map(|(v, _)| v)
            .collect())
    }

    /// The image of this graph under the vertex relabeling `v -> sigma[v]`.
    pub fn relabel(&self, sigma: &[usize]) -> Result<SimpleGraph> {
        crate::algebra::validate_permutation(sigma, self.n)?;
        SimpleGraph::new(self.n, self.edges.iter().map(|&(a, b)| (sigma[a], sigma[b])))
    }

    /// Categorical (tensor) product with row-major indexing `(i, j) -> i * m + j`.
    pub fn categorical_product(&self, other: &SimpleGraph) -> SimpleGraph {
        let m = other.n;
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            for &(c, d) in &other.edges {
                edges.push((a * m + c, b * m + d));
                edges.push((a * m + d, b * m + c));
            }
        }
        SimpleGraph::new(self.n * m, edges).expect("product edges are valid")
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {} {{\n", dot_id(name));
        for v in 0..self.n {
            let _ = writeln!(out, "  {v};");
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  {a} -- {b};");
        }
        out.push_str("}\n");
        out
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }
}

fn dot_id(name: &str) -> String {
    if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        name.to_string()
    } else {
        format!("\"{}\"", name.replace('"', "\\\""))
    }
}

/// A directed arc `from -> to` carrying the structural constant `a_{from,to}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub weight: Scalar,
}

/// Weighted digraph of an algebra: an arc `i -> j` for each nonzero `a_ij`,
/// `i != j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Kahn's algorithm: a cycle exists iff some vertex is never freed.
    pub fn has_directed_cycle(&self) -> bool {
        let mut indeg = vec![0usize; self.n];
        for arc in &self.arcs {
            indeg[arc.to] += 1;
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for &w in &self.out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        removed < self.n
    }

    /// Every vertex reaches every other along arcs.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut reverse = vec![Vec::new(); self.n];
        for arc in &self.arcs {
            reverse[arc.to].push(arc.from);
        }
        reaches_all(&self.out, 0) && reaches_all(&reverse, 0)
    }

    pub fn symmetrization(&self) -> SimpleGraph {
        SimpleGraph::new(self.n, self.arcs.iter().map(|a| (a.from, a.to)))
            .expect("arcs are loop-free and in range")
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {} {{\n", dot_id(name));
        for v in 0..self.n {
            let _ = writeln!(out, "  {v};");
        }
        for arc in &self.arcs {
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{}\"];",
                arc.from, arc.to, arc.weight
            );
        }
        out.push_str("}\n");
        out
    }
}

fn reaches_all(adj: &[Vec<usize>], start: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == adj.len()
}

/// The underlying undirected loopless graph: `{i, j}` is an edge iff
/// `a_ij != 0` or `a_ji != 0`; diagonal constants contribute nothing.
pub fn underlying_graph(algebra: &EvolutionAlgebra) -> SimpleGraph {
    SimpleGraph::new(
        algebra.dim(),
        algebra
            .nonzeros()
            .filter(|(i, j, _)| i != j)
            .map(|(i, j, _)| (i, j)),
    )
    .expect("algebra indices are in range")
}

pub fn digraph(algebra: &EvolutionAlgebra) -> Digraph {
    let n = algebra.dim();
    let arcs: Vec<Arc> = algebra
        .nonzeros()
        .filter(|(i, j, _)| i != j)
        .map(|(i, j, v)| Arc {
            from: i,
            to: j,
            weight: v.clone(),
        })
        .collect();
    let mut out = vec![Vec::new(); n];
    for arc in &arcs {
        out[arc.from].push(arc.to);
    }
    Digraph { n, arcs, out }
}

/// The graphicable algebra of a graph: `a_ij = 1` on edges, zero elsewhere.
pub fn algebra_from_graph(graph: &SimpleGraph, field: FieldDescriptor) -> Result<EvolutionAlgebra> {
    let one = Scalar::one(field);
    EvolutionAlgebra::from_triplets(
        field,
        graph.n().max(1),
        graph
            .edges()
            .iter()
            .flat_map(|&(a, b)| [(a, b, one.clone()), (b, a, one.clone())]),
    )
}

/// Random-walk weights `a_ij = 1/deg(i)` on edges (row-stochastic).
pub fn stochastic_algebra_from_graph(
    graph: &SimpleGraph,
    field: FieldDescriptor,
) -> Result<EvolutionAlgebra> {
    if let FieldDescriptor::Prime(_) = field {
        return Err(Error::PrimeFieldUnsupported("stochastic weights"));
    }
    let triplets = (0..graph.n())
        .flat_map(|v| {
            let deg = graph.degree(v) as i64;
            graph.neighbors(v).iter().map(move |&w| (v, w, deg))
        })
        .map(|(v, w, deg)| {
            let weight = match field {
                FieldDescriptor::Real => Scalar::Real(1.0 / deg as f64),
                _ => crate::algebra::q(1, deg),
            };
            (v, w, weight)
        })
        .collect::<Vec<_>>();
    EvolutionAlgebra::from_triplets(field, graph.n().max(1), triplets)
}
