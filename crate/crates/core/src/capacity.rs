//! Exact computation of the largest set of pairwise G-different permutations
//! of `[n]`, via branch-and-bound maximum-clique search on the difference
//! graph over all n! permutations.
//!
//! The search is exact: greedy-coloring upper bounds prune the tree but the
//! returned size is always the true clique number. Deterministic mode
//! additionally pins the witness to the lexicographically least maximum
//! clique.

use std::fmt;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graphs::GraphSpec;

/// Default ceiling on n; 6! = 720 vertices is still comfortable, 7! is not.
pub const DEFAULT_N_LIMIT: u64 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CapacityError {
    #[error("not a permutation of [{n}]: {reason}")]
    NotAPermutation { n: u64, reason: String },
    #[error("n = {n} exceeds the difference-graph limit {limit}; vertex count would be n!")]
    NAboveLimit { n: u64, limit: u64 },
    #[error("base graph covers vertices 1..={limit} and cannot host permutations of [{n}]")]
    BaseTooSmall { n: u64, limit: u64 },
    #[error("clique search timed out after {elapsed_ms} ms")]
    Timeout { elapsed_ms: u64 },
    #[error("internal: witness failed independent pairwise re-verification")]
    WitnessVerification,
}

/// An arrangement of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinitePermutation {
    entries: Vec<u64>,
}

impl FinitePermutation {
    pub fn new(entries: Vec<u64>) -> Result<FinitePermutation, CapacityError> {
        let n = entries.len() as u64;
        let mut seen = vec![false; entries.len() + 1];
        for &v in &entries {
            if v < 1 || v > n {
                return Err(CapacityError::NotAPermutation {
                    n,
                    reason: format!("entry {v} outside 1..={n}"),
                });
            }
            if seen[v as usize] {
                return Err(CapacityError::NotAPermutation {
                    n,
                    reason: format!("entry {v} repeats"),
                });
            }
            seen[v as usize] = true;
        }
        Ok(FinitePermutation { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// One-line notation: digits concatenated for n <= 9 ("2413"),
    /// comma-separated otherwise.
    pub fn one_line(&self) -> String {
        if self.entries.len() <= 9 {
            self.entries.iter().map(|v| v.to_string()).collect()
        } else {
            self.entries.iter().join(",")
        }
    }
}

impl fmt::Display for FinitePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

impl Serialize for FinitePermutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// True iff some position holds a pair adjacent in `base`.
pub fn g_different(p: &FinitePermutation, r: &FinitePermutation, base: &GraphSpec) -> bool {
    assert_eq!(p.n(), r.n(), "permutation lengths differ");
    p.entries
        .iter()
        .zip(&r.entries)
        .any(|(&a, &b)| base.adjacent(a, b))
}

/// All permutations of `[n]` in lexicographic order.
pub fn all_permutations(n: u64) -> Vec<FinitePermutation> {
    (1..=n)
        .permutations(n as usize)
        .map(|entries| FinitePermutation { entries })
        .collect()
}

/// The G-difference relation over all n! permutations of `[n]`, stored as a
/// symmetric bit matrix. Vertex ids follow lexicographic permutation order.
#[derive(Debug, Clone)]
pub struct DifferenceGraph {
    n: u64,
    base: GraphSpec,
    verts: Vec<FinitePermutation>,
    words: usize,
    adj: Vec<Vec<u64>>,
}

impl DifferenceGraph {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn base(&self) -> &GraphSpec {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn vertices(&self) -> &[FinitePermutation] {
        &self.verts
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = (0..self.vertex_count()).map(|v| self.degree(v)).sum();
        total / 2
    }

    /// The same graph with vertices relabeled by `order` (new id `u` is old
    /// id `order[u]`). Only useful for checking order independence.
    pub fn permuted(&self, order: &[usize]) -> DifferenceGraph {
        let count = self.vertex_count();
        assert_eq!(order.len(), count);
        let verts = order.iter().map(|&o| self.verts[o].clone()).collect();
        let mut adj = vec![vec![0u64; self.words]; count];
        for u in 0..count {
            for v in 0..count {
                if self.adjacent(order[u], order[v]) {
                    adj[u][v / 64] |= 1 << (v % 64);
                }
            }
        }
        DifferenceGraph {
            n: self.n,
            base: self.base.clone(),
            verts,
            words: self.words,
            adj,
        }
    }
}

/// Materializes the difference graph for permutations of `[n]`.
pub fn build_difference_graph(
    n: u64,
    base: &GraphSpec,
    limit: u64,
) -> Result<DifferenceGraph, CapacityError> {
    assert!(n >= 1, "n must be >= 1");
    if n > limit {
        return Err(CapacityError::NAboveLimit { n, limit });
    }
    if let Some(vl) = base.vertex_limit() {
        if n > vl {
            return Err(CapacityError::BaseTooSmall { n, limit: vl });
        }
    }
    let verts = all_permutations(n);
    let count = verts.len();
    let words = count.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; count];
    for u in 0..count {
        for v in (u + 1)..count {
            if g_different(&verts[u], &verts[v], base) {
                adj[u][v / 64] |= 1 << (v % 64);
                adj[v][u / 64] |= 1 << (u % 64);
            }
        }
    }
    Ok(DifferenceGraph {
        n,
        base: base.clone(),
        verts,
        words,
        adj,
    })
}

#[derive(Debug, Clone)]
pub struct CliqueOptions {
    /// Pin the witness to the lexicographically least maximum clique and
    /// skip all seeded tie-breaking.
    pub deterministic: bool,
    /// Seed for tie-breaking in the initial vertex order (ignored in
    /// deterministic mode).
    pub seed: u64,
    pub timeout: Option<Duration>,
}

impl Default for CliqueOptions {
    fn default() -> Self {
        CliqueOptions {
            deterministic: false,
            seed: 0,
            timeout: None,
        }
    }
}

/// ω(G_n) with a witness clique and the rate `log2(omega) / n`.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityResult {
    pub omega: u64,
    pub witness: Vec<FinitePermutation>,
    pub rate: f64,
}

struct Search<'g> {
    g: &'g DifferenceGraph,
    best: Vec<u32>,
    best_size: usize,
    /// Stop as soon as a clique of this size is found (decision mode).
    target: Option<usize>,
    done: bool,
    deadline: Option<Instant>,
    started: Instant,
}

impl Search<'_> {
    fn new(g: &DifferenceGraph, deadline: Option<Instant>, started: Instant) -> Search<'_> {
        Search {
            g,
            best: Vec::new(),
            best_size: 0,
            target: None,
            done: false,
            deadline,
            started,
        }
    }

    fn check_deadline(&self) -> Result<(), CapacityError> {
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                return Err(CapacityError::Timeout {
                    elapsed_ms: self.started.elapsed().as_millis() as u64,
                });
            }
        }
        Ok(())
    }

    /// Tomita-style expansion: candidates are greedily colored, then visited
    /// from the highest color down so that `|R| + color` prunes whole
    /// suffixes at once.
    fn expand(&mut self, r: &mut Vec<u32>, p: &[u32]) -> Result<(), CapacityError> {
        self.check_deadline()?;
        if p.is_empty() {
            if r.len() > self.best_size {
                self.best_size = r.len();
                self.best = r.clone();
                if self.target.is_some_and(|t| self.best_size >= t) {
                    self.done = true;
                }
            }
            return Ok(());
        }
        let (ordered, colors) = color_sort(self.g, p);
        for idx in (0..ordered.len()).rev() {
            if self.done {
                return Ok(());
            }
            if r.len() + colors[idx] <= self.best_size {
                return Ok(());
            }
            let v = ordered[idx];
            let next: Vec<u32> = ordered[..idx]
                .iter()
                .copied()
                .filter(|&u| self.g.adjacent(v as usize, u as usize))
                .collect();
            r.push(v);
            self.expand(r, &next)?;
            r.pop();
        }
        Ok(())
    }
}

/// Greedy coloring in list order; returns candidates regrouped by color
/// class (ascending) with their color numbers.
fn color_sort(g: &DifferenceGraph, p: &[u32]) -> (Vec<u32>, Vec<usize>) {
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for &v in p {
        let slot = classes.iter_mut().find(|class| {
            class
                .iter()
                .all(|&u| !g.adjacent(u as usize, v as usize))
        });
        match slot {
            Some(class) => class.push(v),
            None => classes.push(vec![v]),
        }
    }
    let mut ordered = Vec::with_capacity(p.len());
    let mut colors = Vec::with_capacity(p.len());
    for (ci, class) in classes.iter().enumerate() {
        for &v in class {
            ordered.push(v);
            colors.push(ci + 1);
        }
    }
    (ordered, colors)
}

/// Exact maximum clique of the difference graph.
///
/// The witness is re-verified pairwise with [`g_different`] before it is
/// returned, independently of the search bookkeeping.
pub fn max_clique(
    graph: &DifferenceGraph,
    opts: &CliqueOptions,
) -> Result<CapacityResult, CapacityError> {
    let started = Instant::now();
    let deadline = opts.timeout.map(|t| started + t);
    let count = graph.vertex_count();

    let mut order: Vec<u32> = (0..count as u32).collect();
    if !opts.deterministic {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        order.shuffle(&mut rng);
    }
    // Stable sort: equal degrees keep the (possibly shuffled) relative order.
    order.sort_by_key(|&v| std::cmp::Reverse(graph.degree(v as usize)));

    let mut search = Search::new(graph, deadline, started);
    let mut r = Vec::new();
    search.expand(&mut r, &order)?;
    let omega = search.best_size;

    let mut clique = if opts.deterministic {
        lex_least_clique(graph, omega, deadline, started)?
    } else {
        search.best.clone()
    };
    clique.sort_unstable();

    let witness: Vec<FinitePermutation> = clique
        .iter()
        .map(|&v| graph.vertices()[v as usize].clone())
        .collect();
    for (a, b) in witness.iter().tuple_combinations() {
        if !g_different(a, b, graph.base()) {
            return Err(CapacityError::WitnessVerification);
        }
    }
    if witness.len() != omega {
        return Err(CapacityError::WitnessVerification);
    }

    Ok(CapacityResult {
        omega: omega as u64,
        rate: rate(omega as u64, graph.n()),
        witness,
    })
}

/// Is there a clique of size at least `k` inside the candidate list?
fn clique_at_least(
    graph: &DifferenceGraph,
    cand: &[u32],
    k: usize,
    deadline: Option<Instant>,
    started: Instant,
) -> Result<bool, CapacityError> {
    if k == 0 {
        return Ok(true);
    }
    if cand.len() < k {
        return Ok(false);
    }
    let mut search = Search::new(graph, deadline, started);
    search.best_size = k - 1; // only improvements of size >= k matter
    search.target = Some(k);
    let mut r = Vec::new();
    search.expand(&mut r, cand)?;
    Ok(search.best_size >= k)
}

/// The lexicographically least maximum clique, as an ascending id list:
/// repeatedly fix the smallest vertex that still extends to a clique of the
/// required size among strictly larger candidates.
fn lex_least_clique(
    graph: &DifferenceGraph,
    omega: usize,
    deadline: Option<Instant>,
    started: Instant,
) -> Result<Vec<u32>, CapacityError> {
    let mut chosen: Vec<u32> = Vec::with_capacity(omega);
    let mut cand: Vec<u32> = (0..graph.vertex_count() as u32).collect();
    while chosen.len() < omega {
        let need = omega - chosen.len() - 1;
        let mut advanced = false;
        for pos in 0..cand.len() {
            let v = cand[pos];
            let rest: Vec<u32> = cand[pos + 1..]
                .iter()
                .copied()
                .filter(|&u| graph.adjacent(v as usize, u as usize))
                .collect();
            if clique_at_least(graph, &rest, need, deadline, started)? {
                chosen.push(v);
                cand = rest;
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Err(CapacityError::WitnessVerification);
        }
    }
    Ok(chosen)
}

fn rate(omega: u64, n: u64) -> f64 {
    (omega as f64).log2() / n as f64
}

/// `C(n, floor(n/2))`, the conjectured ω for the distance-1 graph.
pub fn middle_binomial(n: u64) -> u64 {
    let k = n / 2;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaRow {
    pub n: u64,
    pub outcome: RowOutcome,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowOutcome {
    Solved {
        omega: u64,
        /// `C(n, floor(n/2))`, present only for the distance-1 graph.
        conjecture: Option<u64>,
        /// Whether omega matched the conjecture (a mismatch is a finding,
        /// not an error).
        matches: Option<bool>,
        rate: f64,
        elapsed_ms: u64,
        witness: Vec<String>,
    },
    TimedOut { elapsed_ms: u64 },
}

/// One capacity result per `n` in `2..=n_max`. Timeouts are recorded per
/// row; structural errors (n over the limit, base too small) abort.
pub fn omega_table(
    base: &GraphSpec,
    n_max: u64,
    limit: u64,
    opts: &CliqueOptions,
) -> Result<Vec<OmegaRow>, CapacityError> {
    let conjectured = matches!(base, GraphSpec::Distance { k: 1 });
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let graph = build_difference_graph(n, base, limit)?;
        let start = Instant::now();
        let outcome = match max_clique(&graph, opts) {
            Ok(result) => {
                let conjecture = conjectured.then(|| middle_binomial(n));
                let matches = conjecture.map(|c| c == result.omega);
                RowOutcome::Solved {
                    omega: result.omega,
                    conjecture,
                    matches,
                    rate: result.rate,
                    elapsed_ms: start.elapsed().as_millis() as u64,
                    witness: result.witness.iter().map(|p| p.one_line()).collect(),
                }
            }
            Err(CapacityError::Timeout { elapsed_ms }) => RowOutcome::TimedOut { elapsed_ms },
            Err(other) => return Err(other),
        };
        rows.push(OmegaRow { n, outcome });
    }
    Ok(rows)
}
