//! Single-binary CLI over the pebbling library: solve, decide, construct,
//! reduce, certify, and re-run the claim verification harnesses.
//!
//! Exit codes: 0 = success / "yes", 1 = "no" (decision problems, failed
//! verification), 2 = usage error, 3 = input format error, 4 = cap exceeded.

use std::io::Read as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pebbling::certificates::{
    emit_certificate, parse_certificate, verify_certificate, SolvabilityCertificate,
};
use pebbling::constructions::{
    collapse, complete_graph, h_family, lexicographic_product, opn_to_ropn_reduction, VertexMap,
};
use pebbling::engine::{k_reachable_with, SearchOptions};
use pebbling::experiments::{
    conjecture_search, deduped_connected_graphs, for_each_connected_labeled_graph, verify_chain,
    verify_h_family, verify_min_degree_claim, verify_product_theorem, three_pile_lemma_scan, Caps,
    ClaimReport,
};
use pebbling::solver::{
    opn_decision, optimal_pebbling_number_with, restricted_optimal_pebbling_number_with,
    ropn_decision,
};
use pebbling::{Distribution, Error, Graph};

#[derive(Parser)]
#[command(name = "pebbling", version, about = "Exact optimal-pebbling solver suite")]
struct Cli {
    /// Graph edge-list input: a path, or "-" for stdin.
    #[arg(short, long, global = true, default_value = "-")]
    input: String,

    /// Disable the weight-function pruning rule (slower, for cross-checks).
    #[arg(long, global = true)]
    no_prune: bool,

    /// Emit one machine-readable record per claim instead of text blocks.
    #[arg(long, global = true)]
    records: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute pi*(G), or pi*_t(G) with -t.
    Solve {
        /// Restriction bound t (t = 1 forces one pebble per vertex).
        #[arg(short)]
        t: Option<u32>,
    },
    /// Decide pi*(G) <= k (or pi*_t(G) <= k). Exit 0 = yes, 1 = no.
    Decide {
        #[arg(short)]
        k: u64,
        #[arg(short)]
        t: Option<u32>,
    },
    /// Decide whether k pebbles can be moved to vertex v from distribution D.
    Reach {
        #[arg(short)]
        v: usize,
        #[arg(short)]
        k: u32,
        /// Distribution as comma-separated "vertex:count" pairs.
        #[arg(short = 'D')]
        dist: String,
    },
    /// Emit the lexicographic product G.K_m as an edge list.
    Product {
        #[arg(short)]
        m: usize,
    },
    /// Emit a named graph family member.
    Family {
        #[command(subcommand)]
        family: FamilyCmd,
    },
    /// Emit f(G) = G.K_n, the OPN-to-ROPN reduction of the input graph.
    Reduce,
    /// Collapse the input graph and a distribution through a vertex map.
    Collapse {
        /// File with one "source target" pair per line.
        #[arg(long)]
        map: String,
        /// Distribution to push through the map (defaults to empty).
        #[arg(short = 'D')]
        dist: Option<String>,
    },
    /// Emit or verify solvability certificates.
    Cert {
        #[command(subcommand)]
        action: CertCmd,
    },
    /// Re-verify the named claims on their native instances.
    VerifyPaper {
        /// Restrict to one claim: h-family, product-theorem, chain,
        /// min-degree, or three-pile.
        #[arg(long)]
        claim: Option<String>,
        /// H_m family parameter (h-family claim only).
        #[arg(short)]
        m: Option<usize>,
    },
    /// Seeded random search for conjecture counterexamples.
    Search {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// The 2m+1-vertex family H_m (even m >= 4) with pi* = 4, pi*_2 = 5.
    Hm {
        #[arg(short)]
        m: usize,
    },
}

#[derive(Subcommand)]
enum CertCmd {
    /// Build a certificate for the input graph and write it to stdout.
    Emit(CertEmit),
    /// Check a certificate file against the input graph. Exit 0 = valid.
    Verify {
        /// Certificate file path.
        #[arg(long)]
        cert: String,
    },
}

#[derive(Args)]
struct CertEmit {
    /// Restriction bound for the claim (omitted = unrestricted).
    #[arg(short)]
    t: Option<u32>,
    /// Certify this distribution instead of solving for an optimal one.
    #[arg(short = 'D')]
    dist: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } => 3,
                Error::CapExceeded(_) => 4,
                Error::FingerprintMismatch(_) => 1,
                _ => 2,
            })
        }
    }
}

fn run(cli: &Cli) -> pebbling::Result<ExitCode> {
    let opts = SearchOptions { weight_prune: !cli.no_prune };
    match &cli.cmd {
        Cmd::Solve { t } => {
            let g = read_graph(&cli.input)?;
            let res = match t {
                Some(t) => restricted_optimal_pebbling_number_with(&g, *t, opts)?,
                None => optimal_pebbling_number_with(&g, opts)?,
            };
            println!("{}", res.value);
            if let Some(d) = res.distribution() {
                println!("witness {}", d.to_sparse_string());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Decide { k, t } => {
            let g = read_graph(&cli.input)?;
            let yes = match t {
                Some(t) => ropn_decision(&g, *t, *k)?,
                None => opn_decision(&g, *k)?,
            };
            println!("{}", if yes { "yes" } else { "no" });
            Ok(decision(yes))
        }
        Cmd::Reach { v, k, dist } => {
            let g = read_graph(&cli.input)?;
            let d = Distribution::parse_sparse(g.order(), dist)?;
            if *v >= g.order() {
                return Err(Error::IndexOutOfRange { index: *v, order: g.order() });
            }
            match k_reachable_with(&g, &d, *v, *k, opts) {
                Some(moves) => {
                    println!("reachable");
                    for m in moves {
                        println!("{m}");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("unreachable");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::Product { m } => {
            let g = read_graph(&cli.input)?;
            let (product, _) = lexicographic_product(&g, &complete_graph(*m)?)?;
            print!("{}", product.to_edge_list());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Family { family } => {
            let FamilyCmd::Hm { m } = family;
            print!("{}", h_family(*m)?.to_edge_list());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Reduce => {
            let g = read_graph(&cli.input)?;
            let (f, _) = opn_to_ropn_reduction(&g)?;
            print!("{}", f.to_edge_list());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Collapse { map, dist } => {
            let g = read_graph(&cli.input)?;
            let text = read_to_string(map)?;
            let vm = VertexMap::parse(g.order(), &text)?;
            let d = match dist {
                Some(s) => Distribution::parse_sparse(g.order(), s)?,
                None => Distribution::empty(g.order()),
            };
            let (q, qd) = collapse(&g, &vm, &d)?;
            print!("{}", q.to_edge_list());
            println!("distribution {}", qd.to_sparse_string());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Cert { action } => run_cert(cli, action, opts),
        Cmd::VerifyPaper { claim, m } => {
            let caps = caps_from_env();
            let reports = run_verify_paper(claim.as_deref(), *m, &caps)?;
            print_reports(&reports, cli.records);
            Ok(decision(reports.iter().all(|r| r.pass)))
        }
        Cmd::Search { seed, samples, n_min, n_max } => {
            let caps = caps_from_env();
            let report = conjecture_search(*n_min, *n_max, *samples, *seed, &caps)?;
            let pass = report.pass;
            print_reports(&[report], cli.records);
            Ok(decision(pass))
        }
    }
}

fn run_cert(cli: &Cli, action: &CertCmd, opts: SearchOptions) -> pebbling::Result<ExitCode> {
    let g = read_graph(&cli.input)?;
    match action {
        CertCmd::Emit(emit) => {
            let t = emit.t.unwrap_or(0);
            let cert = match &emit.dist {
                Some(s) => {
                    let d = Distribution::parse_sparse(g.order(), s)?;
                    SolvabilityCertificate::build(&g, &d, t)?
                }
                None => {
                    let res = match t {
                        0 => optimal_pebbling_number_with(&g, opts)?,
                        t => restricted_optimal_pebbling_number_with(&g, t, opts)?,
                    };
                    SolvabilityCertificate::from_solver_result(&g, &res, t)?
                }
            };
            print!("{}", emit_certificate(&cert));
            Ok(ExitCode::SUCCESS)
        }
        CertCmd::Verify { cert } => {
            let text = read_to_string(cert)?;
            let parsed = parse_certificate(&text)?;
            let ok = verify_certificate(&g, &parsed)?;
            println!("{}", if ok { "valid" } else { "invalid" });
            Ok(decision(ok))
        }
    }
}

fn run_verify_paper(
    claim: Option<&str>,
    m: Option<usize>,
    caps: &Caps,
) -> pebbling::Result<Vec<ClaimReport>> {
    let all = claim.is_none();
    let want = |name: &str| all || claim == Some(name);
    let mut reports = Vec::new();
    if want("h-family") {
        reports.push(verify_h_family(m.unwrap_or(4), caps)?);
    }
    if want("product-theorem") {
        for (g, pm) in product_instances()? {
            for t in [2u32, 3] {
                reports.push(verify_product_theorem(&g, pm, t, caps)?);
            }
        }
    }
    if want("chain") {
        reports.push(chain_summary(5, caps)?);
    }
    if want("min-degree") {
        let mut graphs = Vec::new();
        for n in 3..=7usize {
            // delta >= (2/3)n - 1  <=>  delta >= ceil((2n-3)/3).
            let min_deg = (2 * n - 1) / 3;
            graphs.extend(deduped_connected_graphs(n, min_deg));
        }
        reports.push(verify_min_degree_claim(graphs.iter())?);
    }
    if want("three-pile") {
        reports.push(three_pile_lemma_scan(5)?);
    }
    if reports.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "unknown claim {:?}; expected h-family, product-theorem, chain, min-degree or three-pile",
            claim.unwrap_or("")
        )));
    }
    Ok(reports)
}

/// The product-theorem test instances: (G, m) with m >= ceil(|G|/3).
fn product_instances() -> pebbling::Result<Vec<(Graph, usize)>> {
    use pebbling::constructions::{cycle_graph, path_graph};
    Ok(vec![
        (path_graph(3)?, 1),
        (path_graph(3)?, 2),
        (path_graph(4)?, 2),
        (cycle_graph(4)?, 2),
        (complete_graph(3)?, 1),
    ])
}

/// Chain inequalities on every connected labeled graph up to n_max,
/// aggregated to one report.
fn chain_summary(n_max: usize, caps: &Caps) -> pebbling::Result<ClaimReport> {
    let mut checked = 0u64;
    let mut failures: Vec<String> = Vec::new();
    let mut first_err = None;
    for n in 1..=n_max {
        for_each_connected_labeled_graph(n, |g| {
            if first_err.is_some() {
                return;
            }
            match verify_chain(g, 3, caps) {
                Ok(r) => {
                    checked += 1;
                    if !r.pass {
                        failures.push(format!("{}: {}", r.instance, r.computed));
                    }
                }
                Err(e) => first_err = Some(e),
            }
        });
    }
    if let Some(e) = first_err {
        return Err(e);
    }
    Ok(ClaimReport {
        claim: "chain".into(),
        instance: format!("all connected labeled graphs n<={n_max}"),
        expected: "chain inequalities hold on every graph".into(),
        computed: if failures.is_empty() {
            format!("checked={checked} no violations")
        } else {
            format!("{} violations: {}", failures.len(), failures.join("; "))
        },
        pass: failures.is_empty(),
        elapsed_ms: 0,
        witnesses: Vec::new(),
    })
}

fn print_reports(reports: &[ClaimReport], records: bool) {
    for r in reports {
        if records {
            print!("{}", r.render_record());
        } else {
            print!("{}", r.render_text(false));
        }
    }
}

/// Search caps with environment-variable overrides (caps only, per the
/// external-interface contract).
fn caps_from_env() -> Caps {
    let mut caps = Caps::default();
    let read = |name: &str| std::env::var(name).ok().and_then(|v| v.parse::<usize>().ok());
    if let Some(v) = read("PEBBLING_CAP_H_FAMILY_M") {
        caps.h_family_max_m = v;
    }
    if let Some(v) = read("PEBBLING_CAP_PRODUCT_NM") {
        caps.product_max_nm = v;
    }
    if let Some(v) = read("PEBBLING_CAP_CHAIN_N") {
        caps.chain_max_n = v;
    }
    if let Some(v) = read("PEBBLING_CAP_SEARCH_N") {
        caps.search_max_n = v;
    }
    caps
}

fn decision(yes: bool) -> ExitCode {
    if yes {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn read_graph(input: &str) -> pebbling::Result<Graph> {
    Graph::parse_edge_list(&read_to_string(input)?)
}

fn read_to_string(path: &str) -> pebbling::Result<String> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::InvalidArgument(format!("reading stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("reading {path}: {e}")))?;
    }
    Ok(text)
}
