//! Adjacency predicates shared by the prefix verifiers and the capacity
//! module: distance graphs on the naturals, the complete graph, residue
//! graphs, and explicit finite edge lists.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// An adjacency predicate on the positive naturals (or on `[n]` for
/// `FiniteEdges`). Vertices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    /// `a ~ b` iff `|a - b| = k`.
    Distance { k: u64 },
    /// `a ~ b` iff `a != b`.
    Complete,
    /// `a ~ b` iff `a != b` and `a = b (mod q)`.
    Residue { q: u64 },
    /// Explicit edge set over `[n]`; pairs are stored as `(min, max)`.
    FiniteEdges { n: u64, edges: BTreeSet<(u64, u64)> },
}

impl GraphSpec {
    pub fn distance(k: u64) -> Result<GraphSpec, GraphError> {
        if k < 1 {
            return Err(GraphError::Invalid("distance parameter must be >= 1".into()));
        }
        Ok(GraphSpec::Distance { k })
    }

    pub fn complete() -> GraphSpec {
        GraphSpec::Complete
    }

    pub fn residue(q: u64) -> Result<GraphSpec, GraphError> {
        if q < 2 {
            return Err(GraphError::Invalid("residue modulus must be >= 2".into()));
        }
        Ok(GraphSpec::Residue { q })
    }

    pub fn finite_edges<I>(n: u64, edges: I) -> Result<GraphSpec, GraphError>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::Invalid(format!("self-loop at vertex {a}")));
            }
            if a < 1 || b < 1 || a > n || b > n {
                return Err(GraphError::Invalid(format!(
                    "edge ({a}, {b}) has an endpoint outside 1..={n}"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(GraphSpec::FiniteEdges { n, edges: set })
    }

    /// Parses the finite-graph text format: a first line holding `n`, then
    /// one `a b` pair per line (1-based, whitespace-separated). Blank lines
    /// and `#` comments are skipped.
    pub fn parse_finite_edges(text: &str) -> Result<GraphSpec, GraphError> {
        let mut n: Option<u64> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if n.is_none() {
                n = Some(trimmed.parse().map_err(|_| GraphError::Parse {
                    line,
                    reason: format!("expected the vertex count, found {trimmed:?}"),
                })?);
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let a = parts.next();
            let b = parts.next();
            let (a, b) = match (a, b, parts.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(GraphError::Parse {
                        line,
                        reason: format!("expected two vertices, found {trimmed:?}"),
                    })
                }
            };
            let a: u64 = a.parse().map_err(|_| GraphError::Parse {
                line,
                reason: format!("bad vertex {a:?}"),
            })?;
            let b: u64 = b.parse().map_err(|_| GraphError::Parse {
                line,
                reason: format!("bad vertex {b:?}"),
            })?;
            edges.push((a, b));
        }
        let n = n.ok_or(GraphError::Parse {
            line: 0,
            reason: "empty graph file".into(),
        })?;
        GraphSpec::finite_edges(n, edges)
    }

    /// Adjacency test. For `FiniteEdges` both vertices must lie in `1..=n`;
    /// callers that feed unconstrained values should check
    /// [`vertex_limit`](GraphSpec::vertex_limit) first.
    pub fn adjacent(&self, a: u64, b: u64) -> bool {
        match self {
            GraphSpec::Distance { k } => a.abs_diff(b) == *k,
            GraphSpec::Complete => a != b,
            GraphSpec::Residue { q } => a != b && a % q == b % q,
            GraphSpec::FiniteEdges { n, edges } => {
                assert!(
                    (1..=*n).contains(&a) && (1..=*n).contains(&b),
                    "vertex out of range: ({a}, {b}) not within 1..={n}"
                );
                a != b && edges.contains(&(a.min(b), a.max(b)))
            }
        }
    }

    /// Largest usable vertex, when the graph is finite.
    pub fn vertex_limit(&self) -> Option<u64> {
        match self {
            GraphSpec::FiniteEdges { n, .. } => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Distance { k } => write!(f, "distance:{k}"),
            GraphSpec::Complete => write!(f, "complete"),
            GraphSpec::Residue { q } => write!(f, "residue:{q}"),
            GraphSpec::FiniteEdges { n, edges } => {
                write!(f, "finite-edges(n={n}, m={})", edges.len())
            }
        }
    }
}

impl Serialize for GraphSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Finite sanity check that the distance graphs partition pairs: every
/// `1 <= a < b <= n` with `b - a <= kmax` must be adjacent in exactly one of
/// `Distance(1..=kmax)`, and pairs further apart in none of them.
pub fn distance_partition_check(kmax: u64, n: u64) -> bool {
    assert!(kmax >= 1 && n >= 2, "kmax must be >= 1 and n >= 2");
    let graphs: Vec<GraphSpec> = (1..=kmax).map(|k| GraphSpec::Distance { k }).collect();
    for a in 1..=n {
        for b in (a + 1)..=n {
            let hits = graphs.iter().filter(|g| g.adjacent(a, b)).count();
            let expected = usize::from(b - a <= kmax);
            if hits != expected {
                return false;
            }
        }
    }
    true
}
