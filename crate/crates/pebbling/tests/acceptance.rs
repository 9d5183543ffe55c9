//! End-to-end acceptance checks. Each test covers one numbered criterion
//! and prints a single verdict line (visible with `--nocapture`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pebbling::certificates::{
    transcript_feasible, verify_certificate, SolvabilityCertificate, Transcript,
};
use pebbling::constructions::{
    complete_graph, cycle_graph, h_family, h_labels, lexicographic_product, path_graph,
};
use pebbling::engine::{
    is_solvable, k_reachable, k_reachable_with, normalize_optimal, weight, Dyadic, SearchOptions,
};
use pebbling::experiments::{
    conjecture_search, deduped_connected_graphs, for_each_connected_labeled_graph,
    random_connected_min_degree, verify_chain, verify_h_family, verify_min_degree_claim,
    verify_product_theorem, three_pile_lemma_scan, Caps,
};
use pebbling::solver::{
    opn_decision, optimal_pebbling_number, optimal_pebbling_number_with,
    restricted_optimal_pebbling_number, ropn_decision, size_cap, two_pile_witness,
};
use pebbling::{Distribution, Error, Graph, Move};

fn verdict(id: u32, name: &str, pass: bool) {
    println!("criterion {id:02} {name}: {}", if pass { "pass" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed");
}

/// All distributions of total size <= max on n vertices.
fn for_each_distribution(n: usize, max: u32, visit: &mut impl FnMut(&Distribution)) {
    fn rec(counts: &mut Vec<u32>, n: usize, left: u32, visit: &mut impl FnMut(&Distribution)) {
        if counts.len() == n {
            visit(&Distribution::new(counts.clone()));
            return;
        }
        for c in 0..=left {
            counts.push(c);
            rec(counts, n, left - c, visit);
            counts.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, max, visit);
}

#[test]
fn criterion_01_h_family_values() {
    let caps = Caps::default();
    let r4 = verify_h_family(4, &caps).unwrap();
    let mut pass = r4.pass;
    match verify_h_family(6, &caps) {
        Ok(r6) => pass &= r6.pass,
        Err(Error::CapExceeded(msg)) => println!("criterion 01 note: m=6 skipped ({msg})"),
        Err(e) => panic!("unexpected error for m=6: {e}"),
    }
    verdict(1, "H_m family values", pass);
}

#[test]
fn criterion_02_product_theorem() {
    let caps = Caps::default();
    let instances = [
        (path_graph(3).unwrap(), 1usize),
        (path_graph(3).unwrap(), 2),
        (path_graph(4).unwrap(), 2),
        (cycle_graph(4).unwrap(), 2),
        (complete_graph(3).unwrap(), 1),
    ];
    let mut pass = true;
    for (g, m) in &instances {
        for t in [2u32, 3] {
            let r = verify_product_theorem(g, *m, t, &caps).unwrap();
            if !r.pass {
                println!("criterion 02 failure: {}", r.render_text(false));
                pass = false;
            }
        }
    }
    verdict(2, "product theorem with Q-witness", pass);
}

#[test]
fn criterion_03_chain_inequalities() {
    let caps = Caps::default();
    let mut pass = true;
    let mut check = |g: &Graph| {
        let r = verify_chain(g, 3, &caps).unwrap();
        if !r.pass {
            println!("criterion 03 failure: {}", r.render_text(false));
            pass = false;
        }
    };
    for n in 1..=5 {
        for_each_connected_labeled_graph(n, &mut check);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in [6usize, 7] {
        for _ in 0..100 {
            let g = random_connected_min_degree(n, 1, &mut rng).unwrap();
            check(&g);
        }
    }
    verdict(3, "chain inequalities", pass);
}

#[test]
fn criterion_04_t1_identity() {
    let mut pass = true;
    let mut graphs = vec![
        path_graph(6).unwrap(),
        cycle_graph(7).unwrap(),
        complete_graph(5).unwrap(),
        h_family(4).unwrap(),
    ];
    graphs.extend((2..=6).flat_map(|n| deduped_connected_graphs(n, 0)));
    for g in &graphs {
        let res = restricted_optimal_pebbling_number(g, 1).unwrap();
        pass &= res.value == g.order() as u64;
        pass &= res.distribution().unwrap().counts().iter().all(|&c| c == 1);
    }
    verdict(4, "pi*_1 = n identity", pass);
}

#[test]
fn criterion_05_upper_bound() {
    let mut pass = true;
    for n in 2..=6usize {
        for g in deduped_connected_graphs(n, 0) {
            let cap = size_cap(n);
            pass &= optimal_pebbling_number(&g).unwrap().value <= cap;
            pass &= restricted_optimal_pebbling_number(&g, 2).unwrap().value <= cap;
        }
    }
    verdict(5, "ceil(2n/3) upper bound", pass);
}

#[test]
fn criterion_06_weight_soundness() {
    let unpruned = SearchOptions { weight_prune: false };
    let mut pass = true;
    // Weight < 1 at u must imply u is unreachable, checked by brute force.
    for n in 1..=5usize {
        for_each_connected_labeled_graph(n, |g| {
            for_each_distribution(n, 4, &mut |d| {
                for u in 0..n {
                    if weight(g, d, u).unwrap().less_than_int(1)
                        && k_reachable_with(g, d, u, 1, unpruned).is_some()
                    {
                        println!(
                            "criterion 06 violation: edges={:?} d={:?} u={u}",
                            g.edges(),
                            d.counts()
                        );
                        pass = false;
                    }
                }
            });
        });
    }
    // Pruned and unpruned solvers agree on the value everywhere.
    for n in 2..=6usize {
        for g in deduped_connected_graphs(n, 0) {
            let with = optimal_pebbling_number(&g).unwrap().value;
            let without = optimal_pebbling_number_with(&g, unpruned).unwrap().value;
            pass &= with == without;
        }
    }
    verdict(6, "weight-argument soundness", pass);
}

#[test]
fn criterion_07_claim8_weights() {
    let three_quarters = Dyadic::new(3, 2);
    let one = Dyadic::from_int(1);
    let mut pass = true;
    for m in [4usize, 6] {
        let g = h_family(m).unwrap();
        let n = g.order();
        // Targets u_{2k+2}, 1-based indices.
        for target_i in (2..=m).step_by(2) {
            let target = h_labels::u(m, target_i);
            // W(u_{2k+2}) = 3/4 under {w: 2, v_{2k+1}: 2}.
            let d = Distribution::from_pairs(
                n,
                &[(h_labels::w(m), 2), (h_labels::v(m, target_i - 1), 2)],
            )
            .unwrap();
            pass &= weight(&g, &d, target).unwrap() == three_quarters;
            // W(u_{2k+2}) = 1 under {w: 2, v_{2k}: 2} (needs 2k >= 2).
            if target_i >= 4 {
                let d = Distribution::from_pairs(
                    n,
                    &[(h_labels::w(m), 2), (h_labels::v(m, target_i - 2), 2)],
                )
                .unwrap();
                pass &= weight(&g, &d, target).unwrap() == one;
            }
            // {v_{2k+1}: 2, u_{2l+1}: 2}: the quoted W(u_{2k+2}) <= 3/4
            // holds exactly when l = k (for l != k, u_{2l+1} is adjacent to
            // u_{2k+2} and W = 5/4); unsolvability holds for every l.
            for l_i in (1..=m).step_by(2) {
                let d = Distribution::from_pairs(
                    n,
                    &[(h_labels::v(m, target_i - 1), 2), (h_labels::u(m, l_i), 2)],
                )
                .unwrap();
                if l_i == target_i - 1 {
                    pass &= weight(&g, &d, target).unwrap() <= three_quarters;
                }
                pass &= !is_solvable(&g, &d);
            }
        }
    }
    verdict(7, "odd-pair exact weights", pass);
}

#[test]
fn criterion_08_normalization() {
    let mut pass = true;
    for n in 2..=6usize {
        for g in deduped_connected_graphs(n, 0) {
            let d = optimal_pebbling_number(&g).unwrap();
            let d = d.distribution().unwrap();
            let nd = normalize_optimal(&g, d).unwrap();
            pass &= nd.size() == d.size();
            pass &= is_solvable(&g, &nd);
            pass &= nd
                .support()
                .iter()
                .all(|&v| k_reachable(&g, &nd, v, 2).is_some());
            // Idempotence.
            pass &= normalize_optimal(&g, &nd).unwrap() == nd;
        }
    }
    verdict(8, "witness normalization", pass);
}

#[test]
fn criterion_09_three_pile_scan() {
    let r = three_pile_lemma_scan(5).unwrap();
    if !r.pass {
        println!("criterion 09 failure: {}", r.render_text(false));
    }
    verdict(9, "three-pile reduction scan", r.pass);
}

#[test]
fn criterion_10_two_pile_equivalence() {
    let mut pass = true;
    for n in 2..=6usize {
        for g in deduped_connected_graphs(n, 0) {
            let small = restricted_optimal_pebbling_number(&g, 2).unwrap().value <= 4;
            let witness = two_pile_witness(&g).unwrap().is_some();
            if small != witness {
                println!(
                    "criterion 10 violation: edges={:?} pi*_2<=4 is {small}, witness {witness}",
                    g.edges()
                );
                pass = false;
            }
        }
    }
    // On H_4 specifically no two-pile witness exists (pi*_2 = 5).
    pass &= two_pile_witness(&h_family(4).unwrap()).unwrap().is_none();
    verdict(10, "two-pile equivalence", pass);
}

#[test]
fn criterion_11_min_degree_claim() {
    let mut graphs = Vec::new();
    for n in 3..=7usize {
        // delta >= (2/3)n - 1 <=> delta >= ceil((2n-3)/3).
        let min_deg = (2 * n - 1) / 3;
        graphs.extend(deduped_connected_graphs(n, min_deg));
    }
    let r = verify_min_degree_claim(graphs.iter()).unwrap();
    if !r.pass {
        println!("criterion 11 failure: {}", r.render_text(false));
    }
    verdict(11, "min-degree consequences", r.pass && !graphs.is_empty());
}

#[test]
fn criterion_12_transcript_machinery() {
    let mut pass = true;
    // Differential: transcript_feasible against the exhaustive-ordering
    // oracle. Exhaustive on n = 3, seeded random on n in {4, 5}.
    for_each_connected_labeled_graph(3, |g| {
        let moves: Vec<Move> = g
            .edges()
            .iter()
            .flat_map(|&(a, b)| [Move::new(a, b), Move::new(b, a)])
            .collect();
        let mut transcripts = vec![Transcript::new()];
        for _ in 0..3 {
            let snapshot = transcripts.clone();
            for tr in &snapshot {
                for &m in &moves {
                    let mut t2 = tr.clone();
                    t2.add(m, 1);
                    transcripts.push(t2);
                }
            }
        }
        for_each_distribution(3, 3, &mut |d| {
            for tr in &transcripts {
                let got = transcript_feasible(g, d, tr, 0).unwrap().feasible;
                let expected = oracle_feasible(d, tr);
                if got != expected {
                    println!(
                        "criterion 12 disagreement: edges={:?} d={:?} tr={tr:?}",
                        g.edges(),
                        d.counts()
                    );
                    pass = false;
                }
            }
        });
    });
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..500 {
        let n = rng.gen_range(4..=5usize);
        let g = random_connected_min_degree(n, 1, &mut rng).unwrap();
        let mut d = Distribution::empty(n);
        for _ in 0..rng.gen_range(0..=5u32) {
            let v = rng.gen_range(0..n);
            d.set(v, d.get(v) + 1);
        }
        let edges = g.edges();
        let mut tr = Transcript::new();
        for _ in 0..rng.gen_range(0..=5u32) {
            let (a, b) = edges[rng.gen_range(0..edges.len())];
            let m = if rng.gen_bool(0.5) { Move::new(a, b) } else { Move::new(b, a) };
            tr.add(m, 1);
        }
        let got = transcript_feasible(&g, &d, &tr, 0).unwrap().feasible;
        if got != oracle_feasible(&d, &tr) {
            println!("criterion 12 disagreement: edges={edges:?} d={:?} tr={tr:?}", d.counts());
            pass = false;
        }
    }
    // Every solver witness converts to an accepted certificate whose
    // claimed bound matches the exact value.
    for n in 2..=5usize {
        for g in deduped_connected_graphs(n, 0) {
            let res = optimal_pebbling_number(&g).unwrap();
            let cert = SolvabilityCertificate::from_solver_result(&g, &res, 0).unwrap();
            pass &= verify_certificate(&g, &cert).unwrap();
            pass &= cert.k >= res.value;
        }
    }
    verdict(12, "transcript machinery", pass);
}

// Exhaustive ordering search over the transcript's move multiset.
fn oracle_feasible(d: &Distribution, tr: &Transcript) -> bool {
    fn go(counts: &mut Vec<i64>, remaining: &mut Vec<(Move, u64)>) -> bool {
        if remaining.iter().all(|&(_, c)| c == 0) {
            return true;
        }
        for i in 0..remaining.len() {
            let (m, c) = remaining[i];
            if c == 0 || counts[m.from] < 2 {
                continue;
            }
            counts[m.from] -= 2;
            counts[m.to] += 1;
            remaining[i].1 -= 1;
            let ok = go(counts, remaining);
            remaining[i].1 += 1;
            counts[m.from] += 2;
            counts[m.to] -= 1;
            if ok {
                return true;
            }
        }
        false
    }
    let mut counts: Vec<i64> = d.counts().iter().map(|&c| i64::from(c)).collect();
    let mut remaining: Vec<(Move, u64)> = tr.moves().collect();
    go(&mut counts, &mut remaining)
}

#[test]
fn criterion_13_reduction_sanity() {
    let mut pass = true;
    for g in [path_graph(2).unwrap(), path_graph(3).unwrap(), complete_graph(3).unwrap()] {
        let n = g.order();
        let (f, _) = pebbling::constructions::opn_to_ropn_reduction(&g).unwrap();
        for k in 1..=size_cap(n) {
            for t in [2u32, 3] {
                let lhs = opn_decision(&g, k).unwrap();
                let rhs = ropn_decision(&f, t, k).unwrap();
                if lhs != rhs {
                    println!("criterion 13 mismatch: n={n} k={k} t={t} opn={lhs} ropn={rhs}");
                    pass = false;
                }
            }
        }
    }
    verdict(13, "OPN-to-ROPN reduction sanity", pass);
}

#[test]
fn criterion_14_determinism() {
    let caps = Caps::default();
    let mut pass = true;
    // Same seed, same report bytes.
    let a = conjecture_search(4, 6, 5, 31337, &caps).unwrap();
    let b = conjecture_search(4, 6, 5, 31337, &caps).unwrap();
    pass &= a.render_record() == b.render_record();
    pass &= a.render_text(false) == b.render_text(false);
    // Same graph, same witness bytes.
    let g = lexicographic_product(&path_graph(4).unwrap(), &complete_graph(2).unwrap())
        .unwrap()
        .0;
    let w1 = optimal_pebbling_number(&g).unwrap();
    let w2 = optimal_pebbling_number(&g).unwrap();
    pass &= w1.distribution() == w2.distribution();
    pass &= w1.distribution().unwrap().to_sparse_string()
        == w2.distribution().unwrap().to_sparse_string();
    // Same claim run twice, same rendering.
    let r1 = verify_h_family(4, &caps).unwrap();
    let r2 = verify_h_family(4, &caps).unwrap();
    pass &= r1.render_text(false) == r2.render_text(false);
    verdict(14, "determinism", pass);
}
