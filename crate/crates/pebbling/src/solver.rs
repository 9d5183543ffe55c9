//! Exact computation of the pebbling and domination parameters and their
//! decision problems.
//!
//! All searches enumerate candidates in a fixed deterministic order (sizes
//! ascending, count vectors lexicographic), so reported witnesses are stable
//! across runs.

use crate::engine::{is_solvable_with, weight_unchecked, Distribution, SearchOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Witness attached to a computed parameter value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Pebbling(Distribution),
    VertexSet(Vec<usize>),
    RomanLabeling(Vec<u8>),
}

/// Result of an exact search: the value, a re-checkable witness, and search
/// effort counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverResult {
    pub value: u64,
    pub witness: Witness,
    pub explored: u64,
    pub pruned: u64,
}

impl SolverResult {
    pub fn distribution(&self) -> Option<&Distribution> {
        match &self.witness {
            Witness::Pebbling(d) => Some(d),
            _ => None,
        }
    }
}

/// ceil(2n/3), the optimal pebbling upper bound for connected graphs.
pub fn size_cap(n: usize) -> u64 {
    ((2 * n + 2) / 3) as u64
}

/// Visits every count vector of length `n` summing to `k` with entries at
/// most `max_per_vertex`, in lexicographic order. Stops early when the
/// visitor returns true.
fn for_each_count_vector(
    n: usize,
    k: u32,
    max_per_vertex: u32,
    visit: &mut impl FnMut(&[u32]) -> bool,
) -> bool {
    fn rec(
        counts: &mut Vec<u32>,
        n: usize,
        left: u32,
        max: u32,
        visit: &mut impl FnMut(&[u32]) -> bool,
    ) -> bool {
        let pos = counts.len();
        if pos == n {
            return left == 0 && visit(counts);
        }
        let remaining_slots = (n - pos - 1) as u32;
        for c in 0..=left.min(max) {
            // Remaining vertices must be able to absorb the rest.
            if remaining_slots.saturating_mul(max) < left - c {
                continue;
            }
            counts.push(c);
            if rec(counts, n, left - c, max, visit) {
                return true;
            }
            counts.pop();
        }
        false
    }
    let mut counts = Vec::with_capacity(n);
    rec(&mut counts, n, k, max_per_vertex, visit)
}

struct PebblingSearch<'a> {
    graph: &'a Graph,
    opts: SearchOptions,
    explored: u64,
    pruned: u64,
}

impl PebblingSearch<'_> {
    /// First solvable count vector of size `k` with per-vertex cap, in
    /// lexicographic order.
    fn find_at_size(&mut self, k: u32, max_per_vertex: u32) -> Option<Distribution> {
        let mut found = None;
        for_each_count_vector(self.graph.order(), k, max_per_vertex, &mut |counts| {
            self.explored += 1;
            if self.opts.weight_prune {
                let hopeless = (0..self.graph.order())
                    .any(|u| weight_unchecked(self.graph, counts, u).less_than_int(1));
                if hopeless {
                    self.pruned += 1;
                    return false;
                }
            }
            let d = Distribution::new(counts.to_vec());
            if is_solvable_with(self.graph, &d, self.opts) {
                found = Some(d);
                true
            } else {
                false
            }
        });
        found
    }
}

fn solve_connected(
    g: &Graph,
    max_per_vertex: u32,
    opts: SearchOptions,
) -> Result<SolverResult> {
    let cap = size_cap(g.order());
    let mut search = PebblingSearch { graph: g, opts, explored: 0, pruned: 0 };
    for k in 1..=cap {
        if let Some(d) = search.find_at_size(k as u32, max_per_vertex) {
            return Ok(SolverResult {
                value: k,
                witness: Witness::Pebbling(d),
                explored: search.explored,
                pruned: search.pruned,
            });
        }
    }
    Err(Error::CapExceeded(format!(
        "no solvable distribution of size <= {cap} found (unexpected for a connected graph)"
    )))
}

/// The optimal pebbling number pi*(G).
///
/// Disconnected graphs are handled as the sum over components, since pebbles
/// cannot cross components.
pub fn optimal_pebbling_number_with(g: &Graph, opts: SearchOptions) -> Result<SolverResult> {
    if g.order() == 0 {
        return Err(Error::InvalidArgument("graph must have at least one vertex".into()));
    }
    if g.is_connected() {
        return solve_connected(g, u32::MAX, opts);
    }
    let mut value = 0;
    let mut combined = Distribution::empty(g.order());
    let mut explored = 0;
    let mut pruned = 0;
    for comp in g.components() {
        let sub = g.induced(&comp);
        let res = solve_connected(&sub, u32::MAX, opts)?;
        let d = res.distribution().expect("pebbling witness");
        for (local, &global) in comp.iter().enumerate() {
            combined.set(global, d.get(local));
        }
        value += res.value;
        explored += res.explored;
        pruned += res.pruned;
    }
    Ok(SolverResult { value, witness: Witness::Pebbling(combined), explored, pruned })
}

pub fn optimal_pebbling_number(g: &Graph) -> Result<SolverResult> {
    optimal_pebbling_number_with(g, SearchOptions::default())
}

/// The t-restricted optimal pebbling number pi*_t(G).
pub fn restricted_optimal_pebbling_number_with(
    g: &Graph,
    t: u32,
    opts: SearchOptions,
) -> Result<SolverResult> {
    if t == 0 {
        return Err(Error::InvalidArgument("restriction t must be at least 1".into()));
    }
    if g.order() == 0 {
        return Err(Error::InvalidArgument("graph must have at least one vertex".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if t == 1 {
        // pi*_1(G) = |V(G)|: one pebble everywhere is the only solvable
        // 1-restricted distribution shape.
        let d = Distribution::new(vec![1; g.order()]);
        return Ok(SolverResult {
            value: g.order() as u64,
            witness: Witness::Pebbling(d),
            explored: 1,
            pruned: 0,
        });
    }
    solve_connected(g, t, opts)
}

pub fn restricted_optimal_pebbling_number(g: &Graph, t: u32) -> Result<SolverResult> {
    restricted_optimal_pebbling_number_with(g, t, SearchOptions::default())
}

/// OPN: is pi*(G) <= k?
pub fn opn_decision(g: &Graph, k: u64) -> Result<bool> {
    Ok(optimal_pebbling_number(g)?.value <= k)
}

/// ROPN: is pi*_t(G) <= k?
pub fn ropn_decision(g: &Graph, t: u32, k: u64) -> Result<bool> {
    Ok(restricted_optimal_pebbling_number(g, t)?.value <= k)
}

fn closed_neighborhood_masks(g: &Graph) -> Vec<u64> {
    (0..g.order()).map(|v| g.neighbor_mask(v) | (1 << v)).collect()
}

fn subset_dominates(masks: &[u64], full: u64, subset: &[usize]) -> bool {
    let mut covered = 0u64;
    for &v in subset {
        covered |= masks[v];
    }
    covered == full
}

/// First dominating set of the given size in lexicographic order.
fn find_dominating_set(masks: &[u64], full: u64, n: usize, size: usize, explored: &mut u64) -> Option<Vec<usize>> {
    fn rec(
        masks: &[u64],
        full: u64,
        n: usize,
        start: usize,
        left: usize,
        covered: u64,
        chosen: &mut Vec<usize>,
        explored: &mut u64,
    ) -> bool {
        if left == 0 {
            *explored += 1;
            return covered == full;
        }
        for v in start..n {
            if n - v < left {
                break;
            }
            chosen.push(v);
            if rec(masks, full, n, v + 1, left - 1, covered | masks[v], chosen, explored) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if rec(masks, full, n, 0, size, 0, &mut chosen, explored) {
        Some(chosen)
    } else {
        None
    }
}

/// The domination number gamma(G), by subset search between a degree lower
/// bound and a greedy upper bound.
pub fn domination_number(g: &Graph) -> Result<SolverResult> {
    let n = g.order();
    if n == 0 {
        return Err(Error::InvalidArgument("graph must have at least one vertex".into()));
    }
    let masks = closed_neighborhood_masks(g);
    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let max_degree = (0..n).map(|v| g.degree(v)).max().unwrap();
    let lower = n.div_ceil(max_degree + 1);
    // Greedy: always take the vertex covering the most uncovered.
    let mut covered = 0u64;
    let mut greedy = Vec::new();
    while covered != full {
        let pick = (0..n)
            .max_by_key(|&v| ((masks[v] & !covered).count_ones(), std::cmp::Reverse(v)))
            .unwrap();
        greedy.push(pick);
        covered |= masks[pick];
    }
    let mut explored = 0;
    for size in lower..greedy.len() {
        if let Some(set) = find_dominating_set(&masks, full, n, size, &mut explored) {
            return Ok(SolverResult {
                value: size as u64,
                witness: Witness::VertexSet(set),
                explored,
                pruned: 0,
            });
        }
    }
    greedy.sort_unstable();
    debug_assert!(subset_dominates(&masks, full, &greedy));
    // The greedy set is optimal; still report the lexicographically least
    // witness of that size.
    let set = find_dominating_set(&masks, full, n, greedy.len(), &mut explored)
        .expect("greedy size is feasible");
    Ok(SolverResult { value: set.len() as u64, witness: Witness::VertexSet(set), explored, pruned: 0 })
}

/// The Roman domination number gamma_R(G).
///
/// Exact via the identity gamma_R = min over S of 2|S| + #(vertices not
/// dominated by S): vertices outside S that S fails to dominate must carry
/// label 1, everything else can be 0.
pub fn roman_domination_number(g: &Graph) -> Result<SolverResult> {
    let n = g.order();
    if n == 0 {
        return Err(Error::InvalidArgument("graph must have at least one vertex".into()));
    }
    if n > 20 {
        return Err(Error::CapExceeded(format!("Roman domination search capped at order 20, got {n}")));
    }
    let masks = closed_neighborhood_masks(g);
    let full: u64 = (1 << n) - 1;
    let mut best_weight = u64::MAX;
    let mut best_subset = 0u64;
    for subset in 0u64..(1 << n) {
        let twos = subset.count_ones() as u64;
        if 2 * twos >= best_weight {
            continue;
        }
        let mut covered = 0u64;
        let mut bits = subset;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            covered |= masks[v];
            bits &= bits - 1;
        }
        // Vertices in S cover themselves, so the gaps are outside S.
        let ones = (full & !covered).count_ones() as u64;
        let weight = 2 * twos + ones;
        if weight < best_weight {
            best_weight = weight;
            best_subset = subset;
        }
    }
    let mut labeling = vec![0u8; n];
    let mut covered = 0u64;
    for v in 0..n {
        if best_subset & (1 << v) != 0 {
            labeling[v] = 2;
            covered |= masks[v];
        }
    }
    for v in 0..n {
        if labeling[v] == 0 && covered & (1 << v) == 0 {
            labeling[v] = 1;
        }
    }
    Ok(SolverResult {
        value: best_weight,
        witness: Witness::RomanLabeling(labeling),
        explored: 1 << n,
        pruned: 0,
    })
}

/// Validates a Roman domination labeling: every 0-vertex has a 2-neighbor.
pub fn is_roman_dominating(g: &Graph, labeling: &[u8]) -> bool {
    labeling.len() == g.order()
        && (0..g.order()).all(|v| {
            labeling[v] != 0 || g.neighbors(v).iter().any(|&u| labeling[u] == 2)
        })
}

/// Validates a dominating set.
pub fn is_dominating_set(g: &Graph, set: &[usize]) -> bool {
    let masks = closed_neighborhood_masks(g);
    let full: u64 = if g.order() == 64 { u64::MAX } else { (1 << g.order()) - 1 };
    set.iter().all(|&v| v < g.order()) && subset_dominates(&masks, full, set)
}

/// Searches for vertices x <= y whose two-pile {2,2} distribution is
/// solvable (one pile of 2 when x = y). Present whenever pi*_2(G) <= 4.
pub fn two_pile_witness(g: &Graph) -> Result<Option<(usize, usize)>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.order();
    for x in 0..n {
        for y in x..n {
            let mut d = Distribution::empty(n);
            d.set(x, 2);
            d.set(y, 2);
            if is_solvable_with(g, &d, SearchOptions::default()) {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// First pair u < v such that {u,v} union (N(u) intersect N(v)) is a
/// dominating set.
pub fn dominating_pair_witness(g: &Graph) -> Option<(usize, usize)> {
    let n = g.order();
    let masks = closed_neighborhood_masks(g);
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n).wrapping_sub(1) };
    if n == 0 {
        return None;
    }
    for u in 0..n {
        for v in u + 1..n {
            let common = g.neighbor_mask(u) & g.neighbor_mask(v);
            let mut covered = masks[u] | masks[v];
            let mut bits = common;
            while bits != 0 {
                let w = bits.trailing_zeros() as usize;
                covered |= masks[w];
                bits &= bits - 1;
            }
            if covered == full {
                return Some((u, v));
            }
        }
    }
    None
}
