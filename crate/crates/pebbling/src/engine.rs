//! Core pebbling semantics: distributions, moves, exact reachability,
//! the dyadic weight lower bound, and optimal-distribution normalization.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, INFINITE};

/// A pebble distribution: per-vertex non-negative counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Distribution {
    counts: Vec<u32>,
}

impl Distribution {
    pub fn new(counts: Vec<u32>) -> Distribution {
        Distribution { counts }
    }

    pub fn empty(n: usize) -> Distribution {
        Distribution { counts: vec![0; n] }
    }

    /// Builds from sparse (vertex, count) pairs; unlisted vertices get 0.
    pub fn from_pairs(n: usize, pairs: &[(usize, u32)]) -> Result<Distribution> {
        let mut counts = vec![0u32; n];
        for &(v, c) in pairs {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, order: n });
            }
            counts[v] += c;
        }
        Ok(Distribution { counts })
    }

    pub fn order(&self) -> usize {
        self.counts.len()
    }

    pub fn get(&self, v: usize) -> u32 {
        self.counts[v]
    }

    pub fn set(&mut self, v: usize, c: u32) {
        self.counts[v] = c;
    }

    /// |D|, the total number of pebbles.
    pub fn size(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn is_t_restricted(&self, t: u32) -> bool {
        self.counts.iter().all(|&c| c <= t)
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Vertices with at least one pebble, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.counts.len()).filter(|&v| self.counts[v] > 0).collect()
    }

    /// Sparse "v:count" rendering, e.g. `0:2,4:2,8:1`.
    pub fn to_sparse_string(&self) -> String {
        let parts: Vec<String> = self
            .support()
            .iter()
            .map(|&v| format!("{v}:{}", self.counts[v]))
            .collect();
        if parts.is_empty() { "empty".to_string() } else { parts.join(",") }
    }

    /// Parses the sparse "v:count,v:count" syntax; "empty" (the rendering
    /// of an all-zero distribution) and "" both parse as empty.
    pub fn parse_sparse(n: usize, text: &str) -> Result<Distribution> {
        if text.trim() == "empty" {
            return Ok(Distribution::empty(n));
        }
        let mut pairs = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (v, c) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("expected v:count, got '{part}'")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad vertex '{v}'")))?;
            let c: u32 = c
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad count '{c}'")))?;
            pairs.push((v, c));
        }
        Distribution::from_pairs(n, &pairs)
    }
}

/// A single pebbling move: remove two pebbles from `from`, place one on `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub from: usize,
    pub to: usize,
}

impl Move {
    pub fn new(from: usize, to: usize) -> Move {
        Move { from, to }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}->{})", self.from, self.to)
    }
}

pub type MoveSequence = Vec<Move>;

/// Applies one pebbling move, rejecting deficits and non-edges.
pub fn apply_move(g: &Graph, d: &Distribution, m: Move) -> Result<Distribution> {
    if !g.has_edge(m.from, m.to) {
        return Err(Error::InvalidArgument(format!("{m} is not an edge")));
    }
    if d.get(m.from) < 2 {
        return Err(Error::InvalidArgument(format!(
            "insufficient pebbles at vertex {} for {m}",
            m.from
        )));
    }
    let mut out = d.clone();
    out.set(m.from, out.get(m.from) - 2);
    out.set(m.to, out.get(m.to) + 1);
    Ok(out)
}

/// True iff every prefix of the sequence applies without overdrawing a vertex.
pub fn is_executable(g: &Graph, d: &Distribution, sequence: &[Move]) -> bool {
    let mut cur = d.clone();
    for &m in sequence {
        match apply_move(g, &cur, m) {
            Ok(next) => cur = next,
            Err(_) => return false,
        }
    }
    true
}

/// Applies a whole sequence, checking executability.
pub fn apply_sequence(g: &Graph, d: &Distribution, sequence: &[Move]) -> Result<Distribution> {
    let mut cur = d.clone();
    for &m in sequence {
        cur = apply_move(g, &cur, m)?;
    }
    Ok(cur)
}

/// Search options for reachability and the solvers.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Prune states whose weight at the target rules the goal out.
    /// Sound by the weight argument; toggleable for differential testing.
    pub weight_prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { weight_prune: true }
    }
}

/// Exact dyadic rational `num / 2^exp`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dyadic {
    num: u64,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: u64, exp: u32) -> Dyadic {
        let mut d = Dyadic { num, exp };
        d.reduce();
        d
    }

    pub fn from_int(n: u64) -> Dyadic {
        Dyadic { num: n, exp: 0 }
    }

    fn reduce(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.exp -= 1;
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator_exp(&self) -> u32 {
        self.exp
    }

    pub fn cmp_int(&self, k: u64) -> std::cmp::Ordering {
        (self.num as u128).cmp(&((k as u128) << self.exp))
    }

    pub fn less_than_int(&self, k: u64) -> bool {
        self.cmp_int(k) == std::cmp::Ordering::Less
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = (self.num as u128) << other.exp;
        let rhs = (other.num as u128) << self.exp;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u64 << self.exp)
        }
    }
}

/// W_D(u) = sum_v D(v) * 2^(-d(u,v)), as an exact dyadic.
///
/// Rejects disconnected graphs; the weight is only defined where all
/// distances are finite.
pub fn weight(g: &Graph, d: &Distribution, u: usize) -> Result<Dyadic> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(weight_unchecked(g, d.counts(), u))
}

/// Weight with unreachable vertices contributing 0 (2^-inf = 0).
/// Used by the pruner, which must also work componentwise.
pub(crate) fn weight_unchecked(g: &Graph, counts: &[u32], u: usize) -> Dyadic {
    let dist = g.distances();
    let mut max_d = 0u32;
    for v in 0..counts.len() {
        if counts[v] > 0 && dist.get(u, v) != INFINITE {
            max_d = max_d.max(dist.get(u, v));
        }
    }
    let mut num: u64 = 0;
    for v in 0..counts.len() {
        if counts[v] == 0 {
            continue;
        }
        let duv = dist.get(u, v);
        if duv == INFINITE {
            continue;
        }
        num += u64::from(counts[v]) << (max_d - duv);
    }
    Dyadic::new(num, max_d)
}

struct ReachSearch<'a> {
    graph: &'a Graph,
    target: usize,
    k: u32,
    opts: SearchOptions,
    failed: HashSet<Vec<u32>>,
    path: Vec<Move>,
}

impl ReachSearch<'_> {
    fn dfs(&mut self, counts: &mut Vec<u32>) -> bool {
        if counts[self.target] >= self.k {
            return true;
        }
        let total: u64 = counts.iter().map(|&c| u64::from(c)).sum();
        if total < u64::from(self.k) {
            return false;
        }
        if self.opts.weight_prune
            && weight_unchecked(self.graph, counts, self.target).less_than_int(u64::from(self.k))
        {
            return false;
        }
        if self.failed.contains(counts) {
            return false;
        }
        for from in 0..counts.len() {
            if counts[from] < 2 {
                continue;
            }
            for &to in self.graph.neighbors(from) {
                counts[from] -= 2;
                counts[to] += 1;
                self.path.push(Move::new(from, to));
                if self.dfs(counts) {
                    return true;
                }
                self.path.pop();
                counts[to] -= 1;
                counts[from] += 2;
            }
        }
        self.failed.insert(counts.clone());
        false
    }
}

/// Exact k-reachability decision; returns an executable witness sequence on
/// success (empty when the target already holds k pebbles).
pub fn k_reachable_with(
    g: &Graph,
    d: &Distribution,
    target: usize,
    k: u32,
    opts: SearchOptions,
) -> Option<MoveSequence> {
    assert!(k >= 1, "k-reachability requires k >= 1");
    let mut search = ReachSearch {
        graph: g,
        target,
        k,
        opts,
        failed: HashSet::new(),
        path: Vec::new(),
    };
    let mut counts = d.counts().to_vec();
    if search.dfs(&mut counts) {
        Some(search.path)
    } else {
        None
    }
}

pub fn k_reachable(g: &Graph, d: &Distribution, target: usize, k: u32) -> Option<MoveSequence> {
    k_reachable_with(g, d, target, k, SearchOptions::default())
}

/// True iff every vertex is reachable (1-reachable) under `d`.
pub fn is_solvable_with(g: &Graph, d: &Distribution, opts: SearchOptions) -> bool {
    (0..g.order()).all(|v| k_reachable_with(g, d, v, 1, opts).is_some())
}

pub fn is_solvable(g: &Graph, d: &Distribution) -> bool {
    is_solvable_with(g, d, SearchOptions::default())
}

/// Lemma-style normalization of a solvable distribution: repeatedly relocate
/// the pebble of a loaded, not-2-reachable vertex to a neighbor, until every
/// loaded vertex is 2-reachable. Size and solvability are preserved.
pub fn normalize_optimal(g: &Graph, d: &Distribution) -> Result<Distribution> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.order() < 2 {
        return Err(Error::InvalidArgument("order must be at least 2".into()));
    }
    if !is_solvable(g, d) {
        return Err(Error::Unsolvable);
    }
    let mut cur = d.clone();
    loop {
        let stuck = (0..g.order())
            .find(|&v| cur.get(v) > 0 && k_reachable(g, &cur, v, 2).is_none());
        let Some(v) = stuck else {
            return Ok(cur);
        };
        // A loaded vertex that is not 2-reachable holds exactly one pebble.
        debug_assert_eq!(cur.get(v), 1);
        let mut without = cur.clone();
        without.set(v, 0);
        let neighbors = g.neighbors(v);
        let u = neighbors
            .iter()
            .copied()
            .find(|&u| k_reachable(g, &without, u, 2).is_some())
            .unwrap_or(neighbors[0]);
        cur.set(v, 0);
        cur.set(u, cur.get(u) + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_graph, cycle_graph, h_family, path_graph};

    fn dist(counts: &[u32]) -> Distribution {
        Distribution::new(counts.to_vec())
    }

    #[test]
    fn apply_move_basic() {
        let p2 = path_graph(2).unwrap();
        let d = apply_move(&p2, &dist(&[2, 0]), Move::new(0, 1)).unwrap();
        assert_eq!(d.counts(), &[0, 1]);
    }

    #[test]
    fn apply_move_insufficient() {
        let p2 = path_graph(2).unwrap();
        assert!(apply_move(&p2, &dist(&[1, 0]), Move::new(0, 1)).is_err());
    }

    #[test]
    fn apply_move_non_edge() {
        let p3 = path_graph(3).unwrap();
        assert!(apply_move(&p3, &dist(&[2, 0, 0]), Move::new(0, 2)).is_err());
    }

    #[test]
    fn apply_move_composition() {
        let p3 = path_graph(3).unwrap();
        let d = apply_sequence(&p3, &dist(&[4, 0, 0]), &[Move::new(0, 1), Move::new(0, 1)]).unwrap();
        assert_eq!(d.counts(), &[0, 2, 0]);
    }

    #[test]
    fn move_conservation() {
        let c5 = cycle_graph(5).unwrap();
        let d = dist(&[3, 0, 2, 1, 0]);
        let after = apply_move(&c5, &d, Move::new(2, 3)).unwrap();
        assert_eq!(after.size(), d.size() - 1);
    }

    #[test]
    fn executability_examples() {
        let p3 = path_graph(3).unwrap();
        assert!(!is_executable(&p3, &dist(&[2, 0, 0]), &[Move::new(0, 1), Move::new(1, 2)]));
        assert!(is_executable(
            &p3,
            &dist(&[4, 0, 0]),
            &[Move::new(0, 1), Move::new(0, 1), Move::new(1, 2)]
        ));
        assert!(is_executable(&p3, &dist(&[0, 0, 0]), &[]));
    }

    #[test]
    fn reachability_examples() {
        let p3 = path_graph(3).unwrap();
        let w = k_reachable(&p3, &dist(&[0, 2, 0]), 2, 1).unwrap();
        assert_eq!(w, vec![Move::new(1, 2)]);
        assert!(k_reachable(&p3, &dist(&[2, 0, 0]), 2, 1).is_none());
    }

    // Unpruned brute force over all move orderings, independent of the
    // DFS implementation path.
    fn oracle_reachable(g: &Graph, d: &Distribution, target: usize, k: u32) -> bool {
        fn go(g: &Graph, counts: &mut Vec<u32>, target: usize, k: u32) -> bool {
            if counts[target] >= k {
                return true;
            }
            for from in 0..counts.len() {
                if counts[from] < 2 {
                    continue;
                }
                for &to in g.neighbors(from) {
                    counts[from] -= 2;
                    counts[to] += 1;
                    let hit = go(g, counts, target, k);
                    counts[to] -= 1;
                    counts[from] += 2;
                    if hit {
                        return true;
                    }
                }
            }
            false
        }
        go(g, &mut d.counts().to_vec(), target, k)
    }

    #[test]
    fn c4_two_reachability_matches_oracle() {
        let c4 = cycle_graph(4).unwrap();
        let d = dist(&[2, 0, 1, 0]);
        let expected = oracle_reachable(&c4, &d, 2, 2);
        assert!(!expected);
        assert_eq!(k_reachable(&c4, &d, 2, 2).is_some(), expected);
        let unpruned = SearchOptions { weight_prune: false };
        assert_eq!(k_reachable_with(&c4, &d, 2, 2, unpruned).is_some(), expected);
    }

    #[test]
    fn pruned_matches_oracle_on_small_cases() {
        let graphs = [
            path_graph(4).unwrap(),
            cycle_graph(5).unwrap(),
            complete_graph(4).unwrap(),
        ];
        for g in &graphs {
            let n = g.order();
            for a in 0..n {
                for b in 0..n {
                    let mut d = Distribution::empty(n);
                    d.set(a, 3);
                    d.set(b, d.get(b) + 1);
                    for target in 0..n {
                        for k in 1..=2 {
                            let expected = oracle_reachable(g, &d, target, k);
                            assert_eq!(k_reachable(g, &d, target, k).is_some(), expected);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reachability_monotone_in_k() {
        let c5 = cycle_graph(5).unwrap();
        let d = dist(&[4, 0, 1, 0, 0]);
        for target in 0..5 {
            for k in 1..4 {
                if k_reachable(&c5, &d, target, k + 1).is_some() {
                    assert!(k_reachable(&c5, &d, target, k).is_some());
                }
            }
        }
    }

    #[test]
    fn witness_is_executable_and_delivers() {
        let c5 = cycle_graph(5).unwrap();
        let d = dist(&[4, 0, 0, 0, 0]);
        for target in 0..5 {
            if let Some(w) = k_reachable(&c5, &d, target, 1) {
                let after = apply_sequence(&c5, &d, &w).unwrap();
                assert!(after.get(target) >= 1);
            }
        }
    }

    #[test]
    fn solvability_examples() {
        let k4 = complete_graph(4).unwrap();
        assert!(is_solvable(&k4, &dist(&[0, 2, 0, 0])));
        let p3 = path_graph(3).unwrap();
        assert!(!is_solvable(&p3, &dist(&[1, 0, 1])));
        let h4 = h_family(4).unwrap();
        let d_star = Distribution::from_pairs(9, &[(0, 2), (4, 2), (8, 1)]).unwrap();
        assert!(is_solvable(&h4, &d_star));
    }

    #[test]
    fn weight_examples() {
        let p2 = path_graph(2).unwrap();
        let w = weight(&p2, &dist(&[2, 0]), 1).unwrap();
        assert_eq!(w, Dyadic::from_int(1));
    }

    #[test]
    fn weight_rejects_disconnected() {
        let g = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(weight(&g, &dist(&[1, 0]), 1), Err(Error::Disconnected));
    }

    #[test]
    fn weight_monotone_under_moves() {
        let c5 = cycle_graph(5).unwrap();
        let d = dist(&[4, 1, 0, 2, 0]);
        for from in 0..5 {
            if d.get(from) < 2 {
                continue;
            }
            for &to in c5.neighbors(from) {
                let after = apply_move(&c5, &d, Move::new(from, to)).unwrap();
                for u in 0..5 {
                    assert!(weight(&c5, &after, u).unwrap() <= weight(&c5, &d, u).unwrap());
                }
            }
        }
    }

    #[test]
    fn weight_soundness_small() {
        // weight < 1 implies unreachable, checked against the oracle.
        let g = cycle_graph(6).unwrap();
        let d = dist(&[2, 0, 0, 0, 0, 0]);
        for u in 0..6 {
            if weight(&g, &d, u).unwrap().less_than_int(1) {
                assert!(!oracle_reachable(&g, &d, u, 1));
            }
        }
    }

    #[test]
    fn normalize_identity_when_already_normalized() {
        let k3 = complete_graph(3).unwrap();
        let d = dist(&[2, 0, 0]);
        assert_eq!(normalize_optimal(&k3, &d).unwrap(), d);
    }

    #[test]
    fn normalize_rejects_unsolvable() {
        let p4 = path_graph(4).unwrap();
        assert_eq!(normalize_optimal(&p4, &dist(&[2, 0, 0, 1])), Err(Error::Unsolvable));
    }

    #[test]
    fn normalize_relocates_stranded_pebble() {
        // On P_5, (2,0,2,0,1): vertex 4 is loaded but not 2-reachable.
        let p5 = path_graph(5).unwrap();
        let d = dist(&[2, 0, 2, 0, 1]);
        assert!(is_solvable(&p5, &d));
        let out = normalize_optimal(&p5, &d).unwrap();
        assert_eq!(out.size(), d.size());
        assert!(is_solvable(&p5, &out));
        for v in out.support() {
            assert!(k_reachable(&p5, &out, v, 2).is_some());
        }
        // Idempotent.
        assert_eq!(normalize_optimal(&p5, &out).unwrap(), out);
    }

    #[test]
    fn three_pile_reduction_property() {
        // A solvable 3-pile-plus-singles distribution stays solvable after
        // removing one pebble from the pile.
        let graphs = [path_graph(3).unwrap(), complete_graph(2).unwrap(), cycle_graph(4).unwrap()];
        for g in &graphs {
            let n = g.order();
            for v in 0..n {
                for mask in 0u32..(1 << n) {
                    if mask & (1 << v) != 0 {
                        continue;
                    }
                    let mut d = Distribution::empty(n);
                    d.set(v, 3);
                    for u in 0..n {
                        if mask & (1 << u) != 0 {
                            d.set(u, 1);
                        }
                    }
                    if is_solvable(g, &d) {
                        let mut reduced = d.clone();
                        reduced.set(v, 2);
                        assert!(is_solvable(g, &reduced));
                    }
                }
            }
        }
    }

    #[test]
    fn dyadic_ordering() {
        assert!(Dyadic::new(3, 2) < Dyadic::from_int(1));
        assert_eq!(Dyadic::new(4, 2), Dyadic::from_int(1));
        assert!(Dyadic::new(5, 2) > Dyadic::from_int(1));
        assert!(Dyadic::new(3, 2).less_than_int(1));
        assert_eq!(format!("{}", Dyadic::new(3, 2)), "3/4");
    }

    use crate::error::Error;
    use crate::graph::Graph;

    proptest::proptest! {
        #[test]
        fn sparse_string_round_trips(counts in proptest::collection::vec(0u32..6, 1..9)) {
            let d = Distribution::new(counts);
            let back = Distribution::parse_sparse(d.order(), &d.to_sparse_string()).unwrap();
            proptest::prop_assert_eq!(back, d);
        }

        #[test]
        fn weight_never_decreases_when_pebbles_are_added(
            counts in proptest::collection::vec(0u32..4, 6),
            v in 0usize..6,
        ) {
            let g = crate::constructions::cycle_graph(6).unwrap();
            let d = Distribution::new(counts);
            let mut bigger = d.clone();
            bigger.set(v, bigger.get(v) + 1);
            for u in 0..6 {
                proptest::prop_assert!(weight(&g, &d, u).unwrap() <= weight(&g, &bigger, u).unwrap());
            }
        }
    }
}
