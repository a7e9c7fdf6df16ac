//! Path and cycle certificates and the checks shared by every construction.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Minimal graph interface used to validate certificates.
pub trait Adjacency {
    /// Whether `v` is a (surviving) vertex.
    fn contains(&self, v: u64) -> bool;
    /// Whether `(u, v)` is a (surviving) edge.
    fn adjacent(&self, u: u64, v: u64) -> bool;
    /// Number of (surviving) vertices.
    fn order(&self) -> u64;
}

impl<T: Adjacency + ?Sized> Adjacency for &T {
    fn contains(&self, v: u64) -> bool {
        (**self).contains(v)
    }
    fn adjacent(&self, u: u64, v: u64) -> bool {
        (**self).adjacent(u, v)
    }
    fn order(&self) -> u64 {
        (**self).order()
    }
}

/// First reason a path or cycle certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Empty,
    WrongStart { expected: u64, found: u64 },
    WrongEnd { expected: u64, found: u64 },
    NotAVertex(u64),
    Repeated(u64),
    NotAdjacent(u64, u64),
    Coverage { expected: u64, found: u64 },
    TooShortForCycle(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty sequence"),
            Violation::WrongStart { expected, found } => write!(f, "starts at {found}, expected {expected}"),
            Violation::WrongEnd { expected, found } => write!(f, "ends at {found}, expected {expected}"),
            Violation::NotAVertex(v) => write!(f, "{v} is not a vertex of the graph"),
            Violation::Repeated(v) => write!(f, "vertex {v} repeated"),
            Violation::NotAdjacent(a, b) => write!(f, "({a}, {b}) is not an edge"),
            Violation::Coverage { expected, found } => write!(f, "covers {found} of {expected} vertices"),
            Violation::TooShortForCycle(len) => write!(f, "a cycle needs at least 3 vertices, got {len}"),
        }
    }
}

/// Outcome of a certificate check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCheck {
    pub violation: Option<Violation>,
}

impl PathCheck {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }

    fn fail(v: Violation) -> Self {
        PathCheck { violation: Some(v) }
    }

    const OK: PathCheck = PathCheck { violation: None };
}

fn check_walk<G: Adjacency + ?Sized>(g: &G, seq: &[u64]) -> Option<Violation> {
    let mut seen = HashSet::with_capacity(seq.len());
    for &x in seq {
        if !g.contains(x) {
            return Some(Violation::NotAVertex(x));
        }
        if !seen.insert(x) {
            return Some(Violation::Repeated(x));
        }
    }
    seq.windows(2).find(|w| !g.adjacent(w[0], w[1])).map(|w| Violation::NotAdjacent(w[0], w[1]))
}

/// Checks that `p` is a `(u, v)`-path of `g`; with `hamiltonian` also that it
/// covers every vertex.
pub fn verify_path<G: Adjacency + ?Sized>(g: &G, p: &[u64], u: u64, v: u64, hamiltonian: bool) -> PathCheck {
    let (first, last) = match (p.first(), p.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return PathCheck::fail(Violation::Empty),
    };
    if first != u {
        return PathCheck::fail(Violation::WrongStart { expected: u, found: first });
    }
    if last != v {
        return PathCheck::fail(Violation::WrongEnd { expected: v, found: last });
    }
    if let Some(bad) = check_walk(g, p) {
        return PathCheck::fail(bad);
    }
    if hamiltonian && p.len() as u64 != g.order() {
        return PathCheck::fail(Violation::Coverage { expected: g.order(), found: p.len() as u64 });
    }
    PathCheck::OK
}

/// Checks that `c` (listed without repeating the first vertex) is a
/// Hamiltonian cycle of `g`.
pub fn verify_cycle<G: Adjacency + ?Sized>(g: &G, c: &[u64]) -> PathCheck {
    if c.is_empty() {
        return PathCheck::fail(Violation::Empty);
    }
    if c.len() < 3 {
        return PathCheck::fail(Violation::TooShortForCycle(c.len()));
    }
    if let Some(bad) = check_walk(g, c) {
        return PathCheck::fail(bad);
    }
    let (first, last) = (c[0], c[c.len() - 1]);
    if !g.adjacent(last, first) {
        return PathCheck::fail(Violation::NotAdjacent(last, first));
    }
    if c.len() as u64 != g.order() {
        return PathCheck::fail(Violation::Coverage { expected: g.order(), found: c.len() as u64 });
    }
    PathCheck::OK
}

/// Whether the undirected edge `(a, b)` is traversed by `path`.
pub fn path_uses_edge(path: &[u64], a: u64, b: u64) -> bool {
    path.windows(2).any(|w| (w[0] == a && w[1] == b) || (w[0] == b && w[1] == a))
}
