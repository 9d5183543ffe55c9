//! Immutable simple-graph representation with cached all-pairs distances.
//!
//! Vertices are dense integer labels `0..n-1`. The only ingestion format is a
//! line-oriented edge list with an `n <count>` header; see [`Graph::parse_edge_list`].

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Marker for an unreachable pair in a [`DistanceMatrix`].
pub const INFINITE: u32 = u32::MAX;

/// An immutable simple undirected graph.
#[derive(Debug)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    neighbor_mask: Vec<u64>,
    edge_count: usize,
    distances: OnceLock<DistanceMatrix>,
}

/// All-pairs hop distances; `INFINITE` marks unreachable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn order(&self) -> usize {
        self.n
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adjacency == other.adjacency
    }
}
impl Eq for Graph {}

impl Clone for Graph {
    fn clone(&self) -> Self {
        Graph {
            n: self.n,
            adjacency: self.adjacency.clone(),
            neighbor_mask: self.neighbor_mask.clone(),
            edge_count: self.edge_count,
            distances: OnceLock::new(),
        }
    }
}

impl Graph {
    /// Builds a graph from an edge list; duplicate edges are dropped.
    ///
    /// Rejects self-loops and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut adjacency = vec![Vec::new(); n];
        let mut mask = vec![0u64; n];
        let mut edge_count = 0;
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
            }
            let hi = u.max(v);
            if hi >= n {
                return Err(Error::IndexOutOfRange { index: hi, order: n });
            }
            if n <= 64 && mask[u] & (1 << v) != 0 {
                continue;
            }
            if n > 64 && adjacency[u].contains(&v) {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            if n <= 64 {
                mask[u] |= 1 << v;
                mask[v] |= 1 << u;
            }
            edge_count += 1;
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { n, adjacency, neighbor_mask: mask, edge_count, distances: OnceLock::new() })
    }

    /// Parses the edge-list text format: an `n <count>` header, one `u v`
    /// pair per line, `#`-prefixed comments and blank lines ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut order: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let first = toks.next().unwrap();
            if order.is_none() {
                if first != "n" {
                    return Err(Error::parse(lineno, "expected header line 'n <count>'"));
                }
                let count = toks
                    .next()
                    .ok_or_else(|| Error::parse(lineno, "missing vertex count after 'n'"))?;
                let count: usize = count
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad vertex count '{count}'")))?;
                if toks.next().is_some() {
                    return Err(Error::parse(lineno, "trailing tokens after header"));
                }
                order = Some(count);
                continue;
            }
            let n = order.unwrap();
            let u: usize = first
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad vertex token '{first}'")))?;
            let second = toks.next().ok_or_else(|| Error::parse(lineno, "missing second endpoint"))?;
            let v: usize = second
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad vertex token '{second}'")))?;
            if toks.next().is_some() {
                return Err(Error::parse(lineno, "trailing tokens after edge"));
            }
            if u == v {
                return Err(Error::parse(lineno, format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::parse(lineno, format!("vertex index out of range (order {n})")));
            }
            edges.push((u, v));
        }
        let n = order.ok_or_else(|| Error::parse(0, "missing 'n <count>' header"))?;
        Graph::from_edges(n, &edges)
    }

    /// Renders the graph in the same edge-list format `parse_edge_list` reads.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted list of edges (u, v) with u < v.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n {
            for &v in &self.adjacency[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Open neighborhood N(v), sorted.
    pub fn neighborhood(&self, v: usize) -> Result<&[usize]> {
        self.adjacency
            .get(v)
            .map(|list| list.as_slice())
            .ok_or(Error::IndexOutOfRange { index: v, order: self.n })
    }

    /// Neighbors without the bounds check; panics on bad index.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Bitmask of N(v); only valid for n <= 64.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.neighbor_mask[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if self.n <= 64 {
            u < self.n && v < self.n && self.neighbor_mask[u] & (1 << v) != 0
        } else {
            u < self.n && self.adjacency[u].binary_search(&v).is_ok()
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    fn bfs(&self, source: usize, out: &mut [u32]) {
        out.fill(INFINITE);
        out[source] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = out[u];
            for &v in &self.adjacency[u] {
                if out[v] == INFINITE {
                    out[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
    }

    /// All-pairs hop distances, computed once and cached.
    pub fn distances(&self) -> &DistanceMatrix {
        self.distances.get_or_init(|| {
            let mut dist = vec![INFINITE; self.n * self.n];
            for s in 0..self.n {
                self.bfs(s, &mut dist[s * self.n..(s + 1) * self.n]);
            }
            DistanceMatrix { n: self.n, dist }
        })
    }

    pub fn distance(&self, u: usize, v: usize) -> u32 {
        self.distances().get(u, v)
    }

    /// Max finite distance, or `None` when disconnected.
    pub fn diameter(&self) -> Option<u32> {
        let d = self.distances();
        let mut best = 0;
        for u in 0..self.n {
            for v in 0..self.n {
                let duv = d.get(u, v);
                if duv == INFINITE {
                    return None;
                }
                best = best.max(duv);
            }
        }
        Some(best)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut dist = vec![INFINITE; self.n];
        self.bfs(0, &mut dist);
        dist.iter().all(|&d| d != INFINITE)
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut dist = vec![INFINITE; self.n];
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            self.bfs(s, &mut dist);
            let comp: Vec<usize> =
                (0..self.n).filter(|&v| dist[v] != INFINITE).collect();
            for &v in &comp {
                seen[v] = true;
            }
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on `vertices` (relabeled 0..len-1 in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for &u in vertices {
            for &v in &self.adjacency[u] {
                if u < v && index[v] != usize::MAX {
                    edges.push((index[u], index[v]));
                }
            }
        }
        Graph::from_edges(vertices.len(), &edges).expect("induced subgraph is simple")
    }
}
