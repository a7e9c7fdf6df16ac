//! Bondy–Chvátal closure and Hamiltonian cycles recovered from it.

use std::collections::VecDeque;

use crate::oracle::{find_hc, SmallGraph};
use crate::path::Adjacency;

/// Dense undirected simple graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<bool>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph { adj: vec![vec![false; n]; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SimpleGraph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = SimpleGraph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimpleGraph::from_edges(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds `(a, b)`; loops and out-of-range endpoints are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b && a < self.adj.len() && b < self.adj.len() {
            self.adj[a][b] = true;
            self.adj[b][a] = true;
        }
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        if a < self.adj.len() && b < self.adj.len() {
            self.adj[a][b] = false;
            self.adj[b][a] = false;
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.adj.len() && b < self.adj.len() && self.adj[a][b]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&e| e).count()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.adj.len();
        (0..n).flat_map(|a| (a + 1..n).filter(move |&b| self.adj[a][b]).map(move |b| (a, b))).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.adj.len();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }
}

impl Adjacency for SimpleGraph {
    fn contains(&self, v: u64) -> bool {
        (v as usize) < self.adj.len()
    }

    fn adjacent(&self, u: u64, v: u64) -> bool {
        self.has_edge(u as usize, v as usize)
    }

    fn order(&self) -> u64 {
        self.adj.len() as u64
    }
}

/// Closure of a graph with the edges in the order they were added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub graph: SimpleGraph,
    pub added: Vec<(usize, usize)>,
}

/// Adds `(i, j)` while `d(i) + d(j) ≥ |V|` for some non-adjacent pair.
pub fn bc_closure(g: &SimpleGraph) -> Closure {
    let n = g.vertex_count();
    let mut h = g.clone();
    let mut deg: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for a in 0..n {
        for b in a + 1..n {
            if !h.has_edge(a, b) && deg[a] + deg[b] >= n {
                queue.push_back((a, b));
            }
        }
    }
    let mut added = Vec::new();
    while let Some((a, b)) = queue.pop_front() {
        if h.has_edge(a, b) {
            continue;
        }
        h.add_edge(a, b);
        deg[a] += 1;
        deg[b] += 1;
        added.push((a, b));
        for x in [a, b] {
            for y in 0..n {
                if y != x && !h.has_edge(x, y) && deg[x] + deg[y] >= n {
                    queue.push_back((x.min(y), x.max(y)));
                }
            }
        }
    }
    Closure { graph: h, added }
}

/// Largest graph handed to the exhaustive fallback.
pub const FALLBACK_CAP: usize = 20;

/// Hamiltonian cycle of `g` (each vertex once, closing edge implied).
pub fn hc_via_closure(g: &SimpleGraph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n < 3 {
        return None;
    }
    let closure = bc_closure(g);
    if closure.graph.is_complete() {
        if let Some(c) = unwind(g, &closure.added) {
            return Some(c);
        }
    }
    if n > FALLBACK_CAP {
        return None;
    }
    let small = SmallGraph::from_edges(n, &g.edges()).ok()?;
    let cert = find_hc(&small).ok()?;
    if !cert.found() {
        return None;
    }
    let mut seq: Vec<usize> = cert.sequence.iter().map(|&x| x as usize).collect();
    if seq.len() > n && seq.first() == seq.last() {
        seq.pop();
    }
    Some(seq)
}

/// Removes the added edges from a cycle of the complete closure, newest first.
fn unwind(g: &SimpleGraph, added: &[(usize, usize)]) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    const ABSENT: usize = usize::MAX;
    // stage 0: original edge; stage r + 1: r-th added edge
    let mut stage = vec![vec![ABSENT; n]; n];
    for (a, b) in g.edges() {
        stage[a][b] = 0;
        stage[b][a] = 0;
    }
    for (r, &(a, b)) in added.iter().enumerate() {
        stage[a][b] = r + 1;
        stage[b][a] = r + 1;
    }
    let mut cycle: Vec<usize> = (0..n).collect();
    for i in (0..added.len()).rev() {
        let (a, b) = added[i];
        let present = |x: usize, y: usize| stage[x][y] != ABSENT && stage[x][y] <= i;
        let pa = cycle.iter().position(|&x| x == a)?;
        let pb = cycle.iter().position(|&x| x == b)?;
        let next_of_a = (pa + 1) % n;
        let prev_of_a = (pa + n - 1) % n;
        if next_of_a != pb && prev_of_a != pb {
            continue;
        }
        // lay the cycle out as a path a .. b
        let mut p: Vec<usize> = Vec::with_capacity(n);
        if prev_of_a == pb {
            p.extend((0..n).map(|s| cycle[(pa + s) % n]));
        } else {
            p.extend((0..n).map(|s| cycle[(pa + n - s) % n]));
        }
        let j = (1..n - 2).find(|&j| present(p[0], p[j + 1]) && present(p[j], p[n - 1]))?;
        p[j + 1..].reverse();
        cycle = p;
    }
    Some(cycle)
}
