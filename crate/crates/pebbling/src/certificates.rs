//! Compact transcripts of pebbling sequences and serializable solvability
//! certificates with an independent verifier.
//!
//! A transcript forgets the order of a move sequence and keeps only the
//! count of each distinct move. Feasibility (does some ordering execute?) is
//! decided by greedy saturation with an exact memoized fallback, and the
//! test suite gates the result against an exhaustive-ordering oracle at
//! small scale.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::engine::{k_reachable, Distribution, Move, MoveSequence};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::SolverResult;

/// An order-free multiset of pebbling moves with counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Transcript {
    counts: BTreeMap<Move, u64>,
}

impl Transcript {
    pub fn new() -> Transcript {
        Transcript::default()
    }

    pub fn add(&mut self, m: Move, count: u64) {
        if count > 0 {
            *self.counts.entry(m).or_insert(0) += count;
        }
    }

    pub fn moves(&self) -> impl Iterator<Item = (Move, u64)> + '_ {
        self.counts.iter().map(|(&m, &c)| (m, c))
    }

    pub fn total_moves(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Collapses a move sequence into its transcript.
pub fn transcript_of(sequence: &[Move]) -> Transcript {
    let mut tr = Transcript::new();
    for &m in sequence {
        tr.add(m, 1);
    }
    tr
}

/// Outcome of a transcript feasibility check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptCheck {
    /// Some ordering of exactly the transcript's moves is executable.
    pub feasible: bool,
    /// The (order-independent) final distribution leaves >= 1 pebble on the
    /// target. Only meaningful when `feasible` holds.
    pub delivers: bool,
    /// A concrete executable ordering, when feasible.
    pub order: Option<MoveSequence>,
}

/// Final count identity: final(v) = d(v) + in(v) - 2*out(v), independent of
/// ordering. Returns None if some vertex would end up negative.
pub fn final_counts(d: &Distribution, tr: &Transcript) -> Option<Vec<i64>> {
    let mut out: Vec<i64> = d.counts().iter().map(|&c| i64::from(c)).collect();
    for (m, c) in tr.moves() {
        let c = c as i64;
        out[m.from] -= 2 * c;
        out[m.to] += c;
    }
    if out.iter().any(|&c| c < 0) {
        None
    } else {
        Some(out)
    }
}

/// Decides whether some ordering of the transcript executes under `d`.
///
/// Greedy saturation (repeatedly run the lex-least remaining move whose
/// source holds two pebbles) is tried first; it can stall on orderable
/// transcripts -- e.g. (0,3,1,0) on P_4 with moves {1->0, 1->2, 2->1} needs
/// 1->2 before 1->0 -- so a stall falls back to an exact memoized search
/// over the remaining-move multiset.
pub fn transcript_feasible(
    g: &Graph,
    d: &Distribution,
    tr: &Transcript,
    target: usize,
) -> Result<TranscriptCheck> {
    for (m, _) in tr.moves() {
        if !g.has_edge(m.from, m.to) {
            return Err(Error::InvalidArgument(format!("transcript move {m} is not an edge")));
        }
    }
    if target >= g.order() {
        return Err(Error::IndexOutOfRange { index: target, order: g.order() });
    }
    let Some(finals) = final_counts(d, tr) else {
        return Ok(TranscriptCheck { feasible: false, delivers: false, order: None });
    };
    let mut remaining: BTreeMap<Move, u64> = tr.counts.clone();
    let mut counts: Vec<i64> = d.counts().iter().map(|&c| i64::from(c)).collect();
    let mut order = Vec::with_capacity(tr.total_moves() as usize);
    loop {
        let next = remaining
            .iter()
            .find(|(m, _)| counts[m.from] >= 2)
            .map(|(&m, _)| m);
        let Some(m) = next else { break };
        counts[m.from] -= 2;
        counts[m.to] += 1;
        order.push(m);
        let left = remaining.get_mut(&m).unwrap();
        *left -= 1;
        if *left == 0 {
            remaining.remove(&m);
        }
    }
    if !remaining.is_empty() {
        // Greedy committed to an ordering that stalled; redo from scratch
        // exactly, since its early choices may be what blocked it.
        remaining = tr.counts.clone();
        counts = d.counts().iter().map(|&c| i64::from(c)).collect();
        order.clear();
        if !exact_ordering(&mut counts, &mut remaining, &mut order) {
            return Ok(TranscriptCheck { feasible: false, delivers: false, order: None });
        }
    }
    debug_assert_eq!(
        counts,
        finals,
        "executed transcript must land on the order-free final counts"
    );
    Ok(TranscriptCheck { feasible: true, delivers: finals[target] >= 1, order: Some(order) })
}

/// Exact search for an executable ordering of `remaining` from `counts`,
/// memoized on the remaining-move multiset (the pebble counts are a function
/// of it, given the fixed starting point). On success the moves are appended
/// to `order` and `counts` is advanced to the final state.
fn exact_ordering(
    counts: &mut Vec<i64>,
    remaining: &mut BTreeMap<Move, u64>,
    order: &mut MoveSequence,
) -> bool {
    fn go(
        counts: &mut Vec<i64>,
        remaining: &mut BTreeMap<Move, u64>,
        order: &mut MoveSequence,
        move_universe: &[Move],
        dead: &mut HashSet<Vec<u64>>,
    ) -> bool {
        if remaining.is_empty() {
            return true;
        }
        let key: Vec<u64> =
            move_universe.iter().map(|m| remaining.get(m).copied().unwrap_or(0)).collect();
        if dead.contains(&key) {
            return false;
        }
        let runnable: Vec<Move> =
            remaining.keys().copied().filter(|m| counts[m.from] >= 2).collect();
        for m in runnable {
            counts[m.from] -= 2;
            counts[m.to] += 1;
            order.push(m);
            let exhausted = {
                let left = remaining.get_mut(&m).unwrap();
                *left -= 1;
                *left == 0
            };
            if exhausted {
                remaining.remove(&m);
            }
            if go(counts, remaining, order, move_universe, dead) {
                return true;
            }
            if exhausted {
                remaining.insert(m, 1);
            } else {
                *remaining.get_mut(&m).unwrap() += 1;
            }
            order.pop();
            counts[m.from] += 2;
            counts[m.to] -= 1;
        }
        dead.insert(key);
        false
    }
    let move_universe: Vec<Move> = remaining.keys().copied().collect();
    go(counts, remaining, order, &move_universe, &mut HashSet::new())
}

/// 64-bit FNV-1a over the order and sorted edge list.
pub fn graph_fingerprint(g: &Graph) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    let mut eat = |x: u64| {
        for byte in x.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(PRIME);
        }
    };
    eat(g.order() as u64);
    for (u, v) in g.edges() {
        eat(u as u64);
        eat(v as u64);
    }
    h
}

/// A serializable, independently verifiable solvability claim:
/// pi*_t(G) <= k (or pi*(G) <= k when t = 0), backed by a distribution and
/// one transcript per target vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvabilityCertificate {
    pub order: usize,
    pub edge_count: usize,
    pub fingerprint: u64,
    /// Restriction bound; 0 means unrestricted.
    pub t: u32,
    /// Claimed bound on the pebbling parameter.
    pub k: u64,
    pub distribution: Distribution,
    /// transcripts[v] delivers a pebble to vertex v.
    pub transcripts: Vec<Transcript>,
}

impl SolvabilityCertificate {
    /// Builds a certificate for a solvable distribution by extracting one
    /// reachability witness per vertex.
    pub fn build(g: &Graph, d: &Distribution, t: u32) -> Result<SolvabilityCertificate> {
        if t >= 1 && !d.is_t_restricted(t) {
            return Err(Error::InvalidArgument(format!("distribution is not {t}-restricted")));
        }
        let mut transcripts = Vec::with_capacity(g.order());
        for v in 0..g.order() {
            let seq = k_reachable(g, d, v, 1).ok_or(Error::Unsolvable)?;
            transcripts.push(transcript_of(&seq));
        }
        Ok(SolvabilityCertificate {
            order: g.order(),
            edge_count: g.edge_count(),
            fingerprint: graph_fingerprint(g),
            t,
            k: d.size(),
            distribution: d.clone(),
            transcripts,
        })
    }

    /// Builds a certificate from a solver result's pebbling witness.
    pub fn from_solver_result(g: &Graph, res: &SolverResult, t: u32) -> Result<SolvabilityCertificate> {
        let d = res
            .distribution()
            .ok_or_else(|| Error::InvalidArgument("solver result has no pebbling witness".into()))?;
        SolvabilityCertificate::build(g, d, t)
    }
}

/// Checks a certificate against a graph: fingerprint, size, restriction, and
/// one feasible pebble-delivering transcript per vertex.
pub fn verify_certificate(g: &Graph, cert: &SolvabilityCertificate) -> Result<bool> {
    if cert.order != g.order()
        || cert.edge_count != g.edge_count()
        || cert.fingerprint != graph_fingerprint(g)
    {
        return Err(Error::FingerprintMismatch(format!(
            "expected n={} m={} hash={:016x}",
            g.order(),
            g.edge_count(),
            graph_fingerprint(g)
        )));
    }
    if cert.distribution.order() != g.order() || cert.transcripts.len() != g.order() {
        return Ok(false);
    }
    if cert.distribution.size() != cert.k {
        return Ok(false);
    }
    if cert.t >= 1 && !cert.distribution.is_t_restricted(cert.t) {
        return Ok(false);
    }
    for v in 0..g.order() {
        let check = transcript_feasible(g, &cert.distribution, &cert.transcripts[v], v)?;
        if !check.feasible || !check.delivers {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Renders the canonical line-oriented certificate document.
pub fn emit_certificate(cert: &SolvabilityCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "PEBBLING-CERT 1");
    let _ = writeln!(out, "GRAPH");
    let _ = writeln!(out, "n {}", cert.order);
    let _ = writeln!(out, "m {}", cert.edge_count);
    let _ = writeln!(out, "hash {:016x}", cert.fingerprint);
    let _ = writeln!(out, "CLAIM");
    let _ = writeln!(out, "t {}", cert.t);
    let _ = writeln!(out, "k {}", cert.k);
    let _ = writeln!(out, "DISTRIBUTION");
    for v in cert.distribution.support() {
        let _ = writeln!(out, "{v} {}", cert.distribution.get(v));
    }
    for (v, tr) in cert.transcripts.iter().enumerate() {
        let _ = writeln!(out, "TRANSCRIPT {v}");
        for (m, c) in tr.moves() {
            let _ = writeln!(out, "{} {} {c}", m.from, m.to);
        }
    }
    let _ = writeln!(out, "END");
    out
}

/// Parses a certificate document, reporting the offending line on error.
pub fn parse_certificate(text: &str) -> Result<SolvabilityCertificate> {
    let mut lines = text.lines().enumerate().peekable();

    fn expect<'a>(
        lines: &mut impl Iterator<Item = (usize, &'a str)>,
        what: &str,
    ) -> Result<(usize, &'a str)> {
        lines
            .next()
            .map(|(i, l)| (i + 1, l.trim()))
            .ok_or_else(|| Error::parse(0, format!("truncated document: expected {what}")))
    }

    fn keyword_line<'a>(
        lines: &mut impl Iterator<Item = (usize, &'a str)>,
        keyword: &str,
    ) -> Result<(usize, Vec<&'a str>)> {
        let (lineno, line) = expect(lines, keyword)?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() != Some(&keyword) {
            return Err(Error::parse(lineno, format!("expected '{keyword}', got '{line}'")));
        }
        Ok((lineno, toks[1..].to_vec()))
    }

    fn one_number(lineno: usize, toks: &[&str]) -> Result<u64> {
        if toks.len() != 1 {
            return Err(Error::parse(lineno, "expected exactly one value"));
        }
        toks[0]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad number '{}'", toks[0])))
    }

    let (lineno, toks) = keyword_line(&mut lines, "PEBBLING-CERT")?;
    if toks != ["1"] {
        return Err(Error::parse(lineno, "unsupported certificate version"));
    }
    keyword_line(&mut lines, "GRAPH")?;
    let (lineno, toks) = keyword_line(&mut lines, "n")?;
    let order = one_number(lineno, &toks)? as usize;
    let (lineno, toks) = keyword_line(&mut lines, "m")?;
    let edge_count = one_number(lineno, &toks)? as usize;
    let (lineno, toks) = keyword_line(&mut lines, "hash")?;
    if toks.len() != 1 {
        return Err(Error::parse(lineno, "expected one hash value"));
    }
    let fingerprint = u64::from_str_radix(toks[0], 16)
        .map_err(|_| Error::parse(lineno, format!("bad hash '{}'", toks[0])))?;
    keyword_line(&mut lines, "CLAIM")?;
    let (lineno, toks) = keyword_line(&mut lines, "t")?;
    let t = one_number(lineno, &toks)? as u32;
    let (lineno, toks) = keyword_line(&mut lines, "k")?;
    let k = one_number(lineno, &toks)?;
    keyword_line(&mut lines, "DISTRIBUTION")?;

    let mut distribution = Distribution::empty(order);
    loop {
        let Some(&(idx, raw)) = lines.peek() else {
            return Err(Error::parse(0, "truncated document: expected TRANSCRIPT sections"));
        };
        let line = raw.trim();
        if line.starts_with("TRANSCRIPT") || line == "END" {
            break;
        }
        lines.next();
        let lineno = idx + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::parse(lineno, "expected 'vertex count'"));
        }
        let v: usize = toks[0]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad vertex '{}'", toks[0])))?;
        let c: u32 = toks[1]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad count '{}'", toks[1])))?;
        if v >= order {
            return Err(Error::parse(lineno, format!("vertex {v} out of range (order {order})")));
        }
        distribution.set(v, c);
    }

    let mut transcripts = vec![Transcript::new(); order];
    let mut expected_v = 0usize;
    loop {
        let (lineno, line) = expect(&mut lines, "TRANSCRIPT or END")?;
        if line == "END" {
            if expected_v != order {
                return Err(Error::parse(
                    lineno,
                    format!("expected {order} transcript sections, found {expected_v}"),
                ));
            }
            break;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() != Some(&"TRANSCRIPT") || toks.len() != 2 {
            return Err(Error::parse(lineno, format!("expected 'TRANSCRIPT <v>', got '{line}'")));
        }
        let v: usize = toks[1]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad vertex '{}'", toks[1])))?;
        if v != expected_v {
            return Err(Error::parse(lineno, format!("expected TRANSCRIPT {expected_v}, got {v}")));
        }
        while let Some(&(idx, raw)) = lines.peek() {
            let inner = raw.trim();
            if inner.starts_with("TRANSCRIPT") || inner == "END" {
                break;
            }
            lines.next();
            let lineno = idx + 1;
            let toks: Vec<&str> = inner.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(Error::parse(lineno, "expected 'from to count'"));
            }
            let from: usize = toks[0]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad vertex '{}'", toks[0])))?;
            let to: usize = toks[1]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad vertex '{}'", toks[1])))?;
            let c: u64 = toks[2]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad count '{}'", toks[2])))?;
            if from >= order || to >= order {
                return Err(Error::parse(lineno, "move endpoint out of range"));
            }
            if c == 0 {
                return Err(Error::parse(lineno, "move count must be positive"));
            }
            transcripts[v].add(Move::new(from, to), c);
        }
        expected_v += 1;
    }

    Ok(SolvabilityCertificate {
        order,
        edge_count,
        fingerprint,
        t,
        k,
        distribution,
        transcripts,
    })
}
