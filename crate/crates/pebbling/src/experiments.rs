//! Executable re-verification of the named claims and a seeded search
//! harness for the conjectures. Reports come in a human-readable text form
//! and as line-delimited records; both are deterministic given the inputs.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{complete_graph, h_family, h_labels, lexicographic_product, product_witness};
use crate::engine::{is_solvable, normalize_optimal, Distribution};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::{
    dominating_pair_witness, optimal_pebbling_number, restricted_optimal_pebbling_number,
    roman_domination_number, size_cap,
};

/// One verified claim instance: what was expected, what was computed, and
/// the verdict.
#[derive(Debug, Clone)]
pub struct ClaimReport {
    pub claim: String,
    pub instance: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    pub elapsed_ms: u128,
    pub witnesses: Vec<String>,
}

impl ClaimReport {
    /// Human-readable block. Timing is opt-in so default output stays
    /// byte-identical across runs.
    pub fn render_text(&self, timing: bool) -> String {
        let mut out = String::new();
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "[{verdict}] {} ({})", self.claim, self.instance);
        let _ = writeln!(out, "  expected: {}", self.expected);
        let _ = writeln!(out, "  computed: {}", self.computed);
        for w in &self.witnesses {
            let _ = writeln!(out, "  witness:  {w}");
        }
        if timing {
            let _ = writeln!(out, "  elapsed:  {} ms", self.elapsed_ms);
        }
        out
    }

    /// One tab-separated machine record per instance.
    pub fn render_record(&self) -> String {
        format!(
            "claim={}\tinstance={}\texpected={}\tcomputed={}\tverdict={}\n",
            self.claim,
            self.instance,
            self.expected,
            self.computed,
            if self.pass { "pass" } else { "fail" }
        )
    }
}

/// Configurable search caps with safe defaults.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Largest m for verify_h_family.
    pub h_family_max_m: usize,
    /// Largest n*m for verify_product_theorem.
    pub product_max_nm: usize,
    /// Largest order for verify_chain.
    pub chain_max_n: usize,
    /// Largest order for conjecture_search samples.
    pub search_max_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { h_family_max_m: 6, product_max_nm: 12, chain_max_n: 12, search_max_n: 10 }
    }
}

/// Visits all labeled graphs on n vertices (n <= 7 stays tractable).
pub fn for_each_labeled_graph(n: usize, mut visit: impl FnMut(&Graph)) {
    let slots: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    assert!(slots.len() <= 25, "labeled enumeration capped at 25 edge slots");
    for mask in 0u64..(1u64 << slots.len()) {
        let edges: Vec<(usize, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).expect("enumerated graph is simple");
        visit(&g);
    }
}

/// Visits all connected labeled graphs on n vertices.
pub fn for_each_connected_labeled_graph(n: usize, mut visit: impl FnMut(&Graph)) {
    for_each_labeled_graph(n, |g| {
        if g.is_connected() {
            visit(g);
        }
    });
}

/// Cheap isomorphism-invariant signature: the sorted multiset of
/// (degree, sorted distance row) per vertex.
fn invariant_signature(g: &Graph) -> Vec<(usize, Vec<u32>)> {
    let d = g.distances();
    let mut sig: Vec<(usize, Vec<u32>)> = (0..g.order())
        .map(|v| {
            let mut row: Vec<u32> = (0..g.order()).map(|u| d.get(v, u)).collect();
            row.sort_unstable();
            (g.degree(v), row)
        })
        .collect();
    sig.sort();
    sig
}

/// Connected graphs on n vertices with minimum degree at least `min_deg`,
/// deduplicated by the invariant signature. Output order follows the
/// enumeration order, so it is deterministic.
pub fn deduped_connected_graphs(n: usize, min_deg: usize) -> Vec<Graph> {
    let mut seen: HashSet<Vec<(usize, Vec<u32>)>> = HashSet::new();
    let mut out = Vec::new();
    for_each_labeled_graph(n, |g| {
        if g.min_degree() < min_deg || !g.is_connected() {
            return;
        }
        if seen.insert(invariant_signature(g)) {
            out.push(g.clone());
        }
    });
    out
}

/// Seeded random connected graph with minimum degree at least `min_deg`,
/// uniform over edge sets by rejection.
pub fn random_connected_min_degree(
    n: usize,
    min_deg: usize,
    rng: &mut impl Rng,
) -> Result<Graph> {
    if n == 0 || min_deg >= n {
        return Err(Error::InvalidArgument(format!(
            "no {n}-vertex graph has minimum degree {min_deg}"
        )));
    }
    let slots: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    for _ in 0..1_000_000 {
        let edges: Vec<(usize, usize)> =
            slots.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let g = Graph::from_edges(n, &edges).expect("sampled graph is simple");
        if g.min_degree() >= min_deg && g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::InvalidArgument(format!(
        "rejection sampling failed for n={n}, min degree {min_deg}"
    )))
}

/// Claim: pi*(H_m) = 4 and pi*_2(H_m) = 5, with the named witnessing
/// distributions re-checked.
pub fn verify_h_family(m: usize, caps: &Caps) -> Result<ClaimReport> {
    if m % 2 != 0 || m < 4 {
        return Err(Error::InvalidArgument(format!("H_m needs even m >= 4, got {m}")));
    }
    if m > caps.h_family_max_m {
        return Err(Error::CapExceeded(format!(
            "m = {m} exceeds the H_m cap {}; raise the cap to run this instance",
            caps.h_family_max_m
        )));
    }
    let start = Instant::now();
    let g = h_family(m)?;
    let pi = optimal_pebbling_number(&g)?;
    let pi2 = restricted_optimal_pebbling_number(&g, 2)?;
    let n = g.order();
    let d_star = Distribution::from_pairs(
        n,
        &[(h_labels::u(m, 1), 2), (h_labels::v(m, 1), 2), (h_labels::w(m), 1)],
    )?;
    let d_star_ok = is_solvable(&g, &d_star) && d_star.is_t_restricted(2);
    let four_at_w = Distribution::from_pairs(n, &[(h_labels::w(m), 4)])?;
    let four_at_w_ok = is_solvable(&g, &four_at_w);
    let pass = pi.value == 4 && pi2.value == 5 && d_star_ok && four_at_w_ok;
    Ok(ClaimReport {
        claim: "h-family".into(),
        instance: format!("m={m}"),
        expected: "pi*=4 pi*_2=5 D* solvable 2-restricted, 4@w solvable".into(),
        computed: format!(
            "pi*={} pi*_2={} D*={} 4@w={}",
            pi.value,
            pi2.value,
            if d_star_ok { "ok" } else { "bad" },
            if four_at_w_ok { "ok" } else { "bad" }
        ),
        pass,
        elapsed_ms: start.elapsed().as_millis(),
        witnesses: vec![
            format!("pi* witness {}", pi.distribution().unwrap().to_sparse_string()),
            format!("pi*_2 witness {}", pi2.distribution().unwrap().to_sparse_string()),
        ],
    })
}

/// Claim: pi*(G) = pi*(G.K_m) = pi*_t(G.K_m), plus the Q-witness path.
pub fn verify_product_theorem(g: &Graph, m: usize, t: u32, caps: &Caps) -> Result<ClaimReport> {
    let n = g.order();
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if t < 2 {
        return Err(Error::InvalidArgument("theorem requires t >= 2".into()));
    }
    if 3 * m < n {
        return Err(Error::InvalidArgument(format!("need m >= ceil({n}/3), got {m}")));
    }
    if n * m > caps.product_max_nm {
        return Err(Error::CapExceeded(format!(
            "n*m = {} exceeds the product cap {}",
            n * m,
            caps.product_max_nm
        )));
    }
    let start = Instant::now();
    let (product, _) = lexicographic_product(g, &complete_graph(m)?)?;
    let pi_g = optimal_pebbling_number(g)?;
    let pi_prod = optimal_pebbling_number(&product)?;
    let pi_t_prod = restricted_optimal_pebbling_number(&product, t)?;
    let equal = pi_g.value == pi_prod.value && pi_prod.value == pi_t_prod.value;

    // Witness path: normalize the optimal distribution on G, lift it, and
    // re-check the lifted distribution on the product.
    let mut witnesses = Vec::new();
    let mut witness_ok = true;
    if n >= 2 {
        let normalized = normalize_optimal(g, pi_g.distribution().unwrap())?;
        let q = product_witness(g, &normalized, m)?;
        witness_ok = q.size() == pi_g.value && q.is_t_restricted(2) && is_solvable(&product, &q);
        witnesses.push(format!("Q witness {}", q.to_sparse_string()));
    }
    let pass = equal && witness_ok;
    Ok(ClaimReport {
        claim: "product-theorem".into(),
        instance: format!("n={n} m={m} t={t}"),
        expected: "pi*(G) = pi*(G.Km) = pi*_t(G.Km), Q solvable 2-restricted of equal size".into(),
        computed: format!(
            "pi*(G)={} pi*(G.Km)={} pi*_t(G.Km)={} witness={}",
            pi_g.value,
            pi_prod.value,
            pi_t_prod.value,
            if witness_ok { "ok" } else { "bad" }
        ),
        pass,
        elapsed_ms: start.elapsed().as_millis(),
        witnesses,
    })
}

/// Claim: the chain pi*_2 >= pi*_t >= pi*_{t+1} >= pi*, plus
/// pi*_1 = n, pi*_2 <= gamma_R, gamma <= gamma_R <= 2 gamma, and the
/// ceil(2n/3) upper bound.
pub fn verify_chain(g: &Graph, t_max: u32, caps: &Caps) -> Result<ClaimReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.order() > caps.chain_max_n {
        return Err(Error::CapExceeded(format!(
            "order {} exceeds the chain cap {}",
            g.order(),
            caps.chain_max_n
        )));
    }
    let start = Instant::now();
    let n = g.order() as u64;
    let pi = optimal_pebbling_number(g)?.value;
    let pi1 = restricted_optimal_pebbling_number(g, 1)?.value;
    let mut values = Vec::new();
    for t in 2..=t_max.max(2) {
        values.push(restricted_optimal_pebbling_number(g, t)?.value);
    }
    let gamma = crate::solver::domination_number(g)?.value;
    let gamma_r = roman_domination_number(g)?.value;
    let cap = size_cap(g.order());

    let mut ok = pi1 == n;
    for window in values.windows(2) {
        ok &= window[0] >= window[1];
    }
    if let Some(&last) = values.last() {
        ok &= last >= pi;
    }
    let pi2 = values.first().copied().unwrap_or(pi);
    ok &= pi2 <= gamma_r;
    ok &= gamma <= gamma_r && gamma_r <= 2 * gamma;
    ok &= pi <= cap && pi2 <= cap;

    Ok(ClaimReport {
        claim: "chain".into(),
        instance: format!("n={} edges={}", g.order(), g.edge_count()),
        expected: "pi*_1=n, pi*_2 >= ... >= pi*, pi*_2 <= gamma_R, gamma <= gamma_R <= 2 gamma, values <= ceil(2n/3)".into(),
        computed: format!(
            "pi*={pi} pi*_1={pi1} pi*_t={values:?} gamma={gamma} gamma_R={gamma_r} cap={cap}"
        ),
        pass: ok,
        elapsed_ms: start.elapsed().as_millis(),
        witnesses: Vec::new(),
    })
}

/// Claim: delta(G) >= (2/3)n - 1 forces diameter <= 2, pi* <= 4 and
/// pi*_2 = pi*, with either a small optimum or a dominating pair explaining
/// the equality. Graphs failing the hypothesis are skipped and counted.
pub fn verify_min_degree_claim<'a>(
    graphs: impl IntoIterator<Item = &'a Graph>,
) -> Result<ClaimReport> {
    let start = Instant::now();
    let mut tested = 0u64;
    let mut skipped = 0u64;
    let mut failures = Vec::new();
    for g in graphs {
        let n = g.order();
        // delta >= (2/3)n - 1  <=>  3*delta + 3 >= 2n.
        if n == 0 || !g.is_connected() || 3 * g.min_degree() + 3 < 2 * n {
            skipped += 1;
            continue;
        }
        tested += 1;
        let pi = optimal_pebbling_number(g)?.value;
        let pi2 = restricted_optimal_pebbling_number(g, 2)?.value;
        let diam_ok = n == 1 || g.diameter().is_some_and(|d| d <= 2);
        let explained = pi <= 3 || dominating_pair_witness(g).is_some();
        if !(diam_ok && pi <= 4 && pi2 == pi && explained) {
            failures.push(format!(
                "n={n} edges={:?} pi*={pi} pi*_2={pi2} diam_ok={diam_ok} explained={explained}",
                g.edges()
            ));
        }
    }
    Ok(ClaimReport {
        claim: "min-degree".into(),
        instance: format!("tested={tested} skipped={skipped}"),
        expected: "every qualifying graph: diam <= 2, pi* <= 4, pi*_2 = pi*".into(),
        computed: if failures.is_empty() {
            "no violations".into()
        } else {
            format!("{} violations: {}", failures.len(), failures.join("; "))
        },
        pass: failures.is_empty(),
        elapsed_ms: start.elapsed().as_millis(),
        witnesses: Vec::new(),
    })
}

/// Claim: a solvable distribution with one 3-pile and singles elsewhere
/// stays solvable after removing one pebble from the pile. Exhaustive over
/// connected graphs up to n_max.
pub fn three_pile_lemma_scan(n_max: usize) -> Result<ClaimReport> {
    if n_max > 6 {
        return Err(Error::CapExceeded(format!("three-pile scan capped at n = 6, got {n_max}")));
    }
    let start = Instant::now();
    let mut checked = 0u64;
    let mut violations = 0u64;
    for n in 1..=n_max {
        for_each_connected_labeled_graph(n, |g| {
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
                        checked += 1;
                        let mut reduced = d.clone();
                        reduced.set(v, 2);
                        if !is_solvable(g, &reduced) {
                            violations += 1;
                        }
                    }
                }
            }
        });
    }
    Ok(ClaimReport {
        claim: "three-pile".into(),
        instance: format!("n_max={n_max}"),
        expected: "solvable 3-pile stays solvable after removing one pile pebble".into(),
        computed: format!("checked={checked} violations={violations}"),
        pass: violations == 0,
        elapsed_ms: start.elapsed().as_millis(),
        witnesses: Vec::new(),
    })
}

/// Seeded search for counterexamples to the two conjectures on random
/// connected graphs with delta >= ceil(n/2). Deterministic given
/// (seed, range, samples).
pub fn conjecture_search(
    n_min: usize,
    n_max: usize,
    samples: usize,
    seed: u64,
    caps: &Caps,
) -> Result<ClaimReport> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::InvalidArgument(format!("bad order range {n_min}..={n_max}")));
    }
    if n_max > caps.search_max_n {
        return Err(Error::CapExceeded(format!(
            "order {n_max} exceeds the search cap {}",
            caps.search_max_n
        )));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut examined = 0u64;
    let mut counterexamples = Vec::new();
    for n in n_min..=n_max {
        let min_deg = n.div_ceil(2);
        if min_deg >= n {
            return Err(Error::InvalidArgument(format!(
                "degree constraint ceil({n}/2) is infeasible"
            )));
        }
        for _ in 0..samples {
            let g = random_connected_min_degree(n, min_deg, &mut rng)?;
            examined += 1;
            let pi = optimal_pebbling_number(&g)?.value;
            let pi2 = restricted_optimal_pebbling_number(&g, 2)?.value;
            if pi2 != pi {
                counterexamples.push(format!(
                    "conjecture-1: n={n} edges={:?} pi*={pi} pi*_2={pi2}",
                    g.edges()
                ));
            }
            if dominating_pair_witness(&g).is_none() {
                counterexamples.push(format!(
                    "conjecture-2: n={n} edges={:?} no dominating pair",
                    g.edges()
                ));
            }
        }
    }
    Ok(ClaimReport {
        claim: "conjectures".into(),
        instance: format!("n={n_min}..={n_max} samples={samples} seed={seed}"),
        expected: "no counterexample (the conjectures are open; this only records the search)".into(),
        computed: if counterexamples.is_empty() {
            format!("no counterexample among {examined} samples")
        } else {
            counterexamples.join("; ")
        },
        pass: counterexamples.is_empty(),
        elapsed_ms: start.elapsed().as_millis(),
        witnesses: Vec::new(),
    })
}
