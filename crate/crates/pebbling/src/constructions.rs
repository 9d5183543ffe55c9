//! Builders for the graph families and transformations the solvers consume:
//! standard graphs, the lexicographic product, the H_m family, quotient
//! collapsing, the OPN-to-ROPN reduction, and the product witness
//! distribution.

use crate::engine::{k_reachable, is_solvable, Distribution};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// The flat labeling of V(G) x V(H): (g, h) <-> g * |V(H)| + h.
/// Fibers over G are contiguous index ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductLabeling {
    pub g_order: usize,
    pub h_order: usize,
}

impl ProductLabeling {
    pub fn index(&self, g: usize, h: usize) -> usize {
        debug_assert!(g < self.g_order && h < self.h_order);
        g * self.h_order + h
    }

    pub fn pair(&self, index: usize) -> (usize, usize) {
        debug_assert!(index < self.g_order * self.h_order);
        (index / self.h_order, index % self.h_order)
    }
}

/// A total vertex map between two graphs, used as a quotient map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap {
    target_order: usize,
    image: Vec<usize>,
}

impl VertexMap {
    pub fn new(target_order: usize, image: Vec<usize>) -> Result<VertexMap> {
        for &h in &image {
            if h >= target_order {
                return Err(Error::IndexOutOfRange { index: h, order: target_order });
            }
        }
        Ok(VertexMap { target_order, image })
    }

    pub fn identity(n: usize) -> VertexMap {
        VertexMap { target_order: n, image: (0..n).collect() }
    }

    pub fn source_order(&self) -> usize {
        self.image.len()
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }

    pub fn apply(&self, g: usize) -> usize {
        self.image[g]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target_order];
        for &h in &self.image {
            hit[h] = true;
        }
        hit.iter().all(|&b| b)
    }

    /// Parses lines of "source target" pairs; the target order is
    /// 1 + max target label.
    pub fn parse(source_order: usize, text: &str) -> Result<VertexMap> {
        let mut image = vec![usize::MAX; source_order];
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let src: usize = toks
                .next()
                .unwrap()
                .parse()
                .map_err(|_| Error::parse(lineno, "bad source vertex"))?;
            let dst: usize = toks
                .next()
                .ok_or_else(|| Error::parse(lineno, "missing target vertex"))?
                .parse()
                .map_err(|_| Error::parse(lineno, "bad target vertex"))?;
            if src >= source_order {
                return Err(Error::parse(lineno, format!("source {src} out of range")));
            }
            image[src] = dst;
        }
        if let Some(src) = image.iter().position(|&h| h == usize::MAX) {
            return Err(Error::InvalidArgument(format!("map is not total: vertex {src} unmapped")));
        }
        let target_order = image.iter().max().map_or(0, |&m| m + 1);
        VertexMap::new(target_order, image)
    }
}

pub fn complete_graph(m: usize) -> Result<Graph> {
    if m < 1 {
        return Err(Error::InvalidArgument("complete graph needs m >= 1".into()));
    }
    let edges: Vec<_> = (0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v))).collect();
    Graph::from_edges(m, &edges)
}

pub fn path_graph(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidArgument("path graph needs n >= 1".into()));
    }
    let edges: Vec<_> = (0..n.saturating_sub(1)).map(|u| (u, u + 1)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument("cycle graph needs n >= 3".into()));
    }
    let edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// Lexicographic product G . H: (g1,h1) ~ (g2,h2) iff g1 ~ g2 in G, or
/// g1 = g2 and h1 ~ h2 in H.
pub fn lexicographic_product(g: &Graph, h: &Graph) -> Result<(Graph, ProductLabeling)> {
    let (gn, hn) = (g.order(), h.order());
    if gn < 1 || hn < 1 {
        return Err(Error::InvalidArgument("product factors need order >= 1".into()));
    }
    let labeling = ProductLabeling { g_order: gn, h_order: hn };
    let mut edges = Vec::new();
    for g1 in 0..gn {
        for h1 in 0..hn {
            for g2 in 0..gn {
                for h2 in 0..hn {
                    let a = labeling.index(g1, h1);
                    let b = labeling.index(g2, h2);
                    if a >= b {
                        continue;
                    }
                    if g.has_edge(g1, g2) || (g1 == g2 && h.has_edge(h1, h2)) {
                        edges.push((a, b));
                    }
                }
            }
        }
    }
    Ok((Graph::from_edges(gn * hn, &edges)?, labeling))
}

/// The H_m family: two K_m's each minus the perfect matching on consecutive
/// odd-even pairs, a hub w adjacent to all odd-indexed u_i and v_i, and cross
/// edges {u_i, v_i} for even i. Labeling: u_1..u_m -> 0..m-1,
/// v_1..v_m -> m..2m-1, w -> 2m.
pub fn h_family(m: usize) -> Result<Graph> {
    if m < 4 || m % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "H_m is defined for even m >= 4, got m = {m}"
        )));
    }
    let u = |i: usize| i - 1; // u_i, 1-based
    let v = |i: usize| m + i - 1; // v_i, 1-based
    let w = 2 * m;
    let mut edges = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            // The removed matching joins u_i to u_{i+1} for odd i.
            if j == i + 1 && i % 2 == 1 {
                continue;
            }
            edges.push((u(i), u(j)));
            edges.push((v(i), v(j)));
        }
    }
    for i in (1..=m).step_by(2) {
        edges.push((w, u(i)));
        edges.push((w, v(i)));
    }
    for i in (2..=m).step_by(2) {
        edges.push((u(i), v(i)));
    }
    Graph::from_edges(2 * m + 1, &edges)
}

/// Named vertices of H_m under the fixed labeling.
pub mod h_labels {
    pub fn u(m: usize, i: usize) -> usize {
        debug_assert!((1..=m).contains(&i));
        i - 1
    }

    pub fn v(m: usize, i: usize) -> usize {
        debug_assert!((1..=m).contains(&i));
        m + i - 1
    }

    pub fn w(m: usize) -> usize {
        2 * m
    }
}

/// Collapses G along a surjective map: H has edge {h1,h2} iff some preimage
/// edge maps onto it (within-fiber edges vanish, keeping H simple), and the
/// collapsed distribution sums pebbles over fibers.
pub fn collapse(g: &Graph, map: &VertexMap, d: &Distribution) -> Result<(Graph, Distribution)> {
    if map.source_order() != g.order() {
        return Err(Error::InvalidArgument(format!(
            "map covers {} vertices but graph has {}",
            map.source_order(),
            g.order()
        )));
    }
    if !map.is_surjective() {
        return Err(Error::InvalidArgument("quotient map must be surjective".into()));
    }
    let hn = map.target_order();
    let mut edges = Vec::new();
    for (a, b) in g.edges() {
        let (ha, hb) = (map.apply(a), map.apply(b));
        if ha != hb {
            edges.push((ha, hb));
        }
    }
    let h = Graph::from_edges(hn, &edges)?;
    let mut collapsed = Distribution::empty(hn);
    for v in 0..g.order() {
        let target = map.apply(v);
        collapsed.set(target, collapsed.get(target) + d.get(v));
    }
    Ok((h, collapsed))
}

/// The quotient map (g, i) -> g for a product G . K_m.
pub fn fiber_map(labeling: ProductLabeling) -> VertexMap {
    let image = (0..labeling.g_order * labeling.h_order)
        .map(|idx| labeling.pair(idx).0)
        .collect();
    VertexMap { target_order: labeling.g_order, image }
}

/// The OPN-to-ROPN reduction f(G) = G . K_{|V(G)|}.
pub fn opn_to_ropn_reduction(g: &Graph) -> Result<(Graph, ProductLabeling)> {
    if g.order() < 2 {
        return Err(Error::InvalidArgument("reduction needs order >= 2".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    lexicographic_product(g, &complete_graph(g.order())?)
}

/// Builds the 2-restricted witness distribution Q (or Q') on G . K_m from a
/// normalized solvable distribution D on G: pairs of pebbles go to
/// (g, 1), ..., (g, floor(D(g)/2)) and an odd remainder pebble to (g, 0);
/// when all 2m pebbles sit on one vertex, two pebbles go to every (g, i).
pub fn product_witness(g: &Graph, d: &Distribution, m: usize) -> Result<Distribution> {
    let n = g.order();
    if d.order() != n {
        return Err(Error::InvalidArgument("distribution order mismatch".into()));
    }
    if 3 * m < n {
        return Err(Error::InvalidArgument(format!(
            "m = {m} too small: need m >= ceil({n}/3)"
        )));
    }
    if !is_solvable(g, d) {
        return Err(Error::Unsolvable);
    }
    for v in d.support() {
        if k_reachable(g, d, v, 2).is_none() {
            return Err(Error::InvalidArgument(format!(
                "distribution not normalized: loaded vertex {v} is not 2-reachable"
            )));
        }
    }
    let labeling = ProductLabeling { g_order: n, h_order: m };
    let total = d.size();
    let mut q = Distribution::empty(n * m);
    if let Some(heavy) = (0..n).find(|&v| u64::from(d.get(v)) == 2 * m as u64) {
        if total == 2 * m as u64 {
            for i in 0..m {
                q.set(labeling.index(heavy, i), 2);
            }
            return Ok(q);
        }
    }
    for v in 0..n {
        let c = d.get(v) as usize;
        let pairs = c / 2;
        if pairs > m.saturating_sub(1) {
            return Err(Error::InvalidArgument(format!(
                "m = {m} too small for {c} pebbles at vertex {v}"
            )));
        }
        for i in 1..=pairs {
            q.set(labeling.index(v, i), 2);
        }
        if c % 2 == 1 {
            q.set(labeling.index(v, 0), 1);
        }
    }
    Ok(q)
}
