//! Reference implementations used to cross-check the library.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// `t_k` by direct recursion.
pub fn ref_t(n: u64, k: usize) -> u64 {
    (0..k).fold(n, |t, _| t * (t + 1))
}

/// Explicit DCell built copy by copy.
pub struct RefGraph {
    pub adj: Vec<BTreeSet<u64>>,
}

impl RefGraph {
    pub fn dcell(n: u64, k: usize) -> Self {
        let mut edges: Vec<(u64, u64)> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        let mut size = n;
        for _ in 1..=k {
            let copies = size + 1;
            let mut next = Vec::with_capacity(edges.len() * copies as usize + (copies * size / 2) as usize);
            for c in 0..copies {
                next.extend(edges.iter().map(|&(a, b)| (c * size + a, c * size + b)));
            }
            for i in 0..copies {
                for j in i + 1..copies {
                    next.push((i * size + (j - 1), j * size + i));
                }
            }
            edges = next;
            size *= copies;
        }
        let mut adj = vec![BTreeSet::new(); size as usize];
        for (a, b) in edges {
            adj[a as usize].insert(b);
            adj[b as usize].insert(a);
        }
        RefGraph { adj }
    }

    pub fn order(&self) -> u64 {
        self.adj.len() as u64
    }

    pub fn edges(&self) -> BTreeSet<(u64, u64)> {
        let mut out = BTreeSet::new();
        for (a, ns) in self.adj.iter().enumerate() {
            for &b in ns {
                if (a as u64) < b {
                    out.insert((a as u64, b));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        (a as usize) < self.adj.len() && self.adj[a as usize].contains(&b)
    }

    /// Whether `seq` is a Hamiltonian `(u, v)`-path of the graph minus the
    /// given vertices and edges.
    pub fn is_hp(&self, seq: &[u64], u: u64, v: u64, dead_v: &[u64], dead_e: &[(u64, u64)]) -> bool {
        self.is_spanning_walk(seq, dead_v, dead_e) && seq.first() == Some(&u) && seq.last() == Some(&v)
    }

    pub fn is_hc(&self, seq: &[u64], dead_v: &[u64], dead_e: &[(u64, u64)]) -> bool {
        seq.len() >= 3
            && self.is_spanning_walk(seq, dead_v, dead_e)
            && self.alive_edge(seq[seq.len() - 1], seq[0], dead_e)
    }

    fn alive_edge(&self, a: u64, b: u64, dead_e: &[(u64, u64)]) -> bool {
        self.has_edge(a, b) && !dead_e.contains(&(a.min(b), a.max(b)))
    }

    fn is_spanning_walk(&self, seq: &[u64], dead_v: &[u64], dead_e: &[(u64, u64)]) -> bool {
        let alive = self.order() - dead_v.len() as u64;
        let distinct: BTreeSet<u64> = seq.iter().copied().collect();
        distinct.len() == seq.len()
            && seq.len() as u64 == alive
            && seq.iter().all(|x| (*x as usize) < self.adj.len() && !dead_v.contains(x))
            && seq.windows(2).all(|w| self.alive_edge(w[0], w[1], dead_e))
    }
}

/// `0…0` followed by the recursive list of the non-zero tuples.
pub fn reference_order(bounds: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0; bounds.len()]];
    out.extend(nonzero_list(bounds));
    out
}

fn nonzero_list(bounds: &[u64]) -> Vec<Vec<u64>> {
    if bounds.len() == 1 {
        return (1..bounds[0]).map(|m| vec![m]).collect();
    }
    let a2 = *bounds.last().unwrap();
    let rest = nonzero_list(&bounds[1..]);
    let zeros = vec![0; bounds.len() - 1];
    let with = |m: u64, tail: &[u64]| {
        let mut t = vec![m];
        t.extend_from_slice(tail);
        t
    };
    let mut out = Vec::new();
    for m in 1..a2.min(bounds[0]) {
        out.push(with(m, &zeros));
    }
    for m in 0..a2.min(bounds[0]) {
        out.extend(rest.iter().map(|t| with(m, t)));
    }
    for m in a2..bounds[0] {
        out.push(with(m, &zeros));
        out.extend(rest.iter().map(|t| with(m, t)));
    }
    out
}

/// Every tuple of the shape, lexicographically.
pub fn all_tuples(bounds: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out.into_iter().flat_map(|t| (0..b).map(move |d| [t.clone(), vec![d]].concat())).collect();
    }
    out
}
