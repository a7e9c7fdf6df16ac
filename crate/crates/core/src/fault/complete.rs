//! Hamiltonian paths and cycles in complete graphs with a few edges removed.
//!
//! Vertices are laid out in ascending order and every missing edge along the
//! sequence is repaired by reversing a segment. Callers fall back to
//! exhaustive search when no reversal applies.

fn repair<F: Fn(u64, u64) -> bool>(p: &mut [u64], dead: &F) -> bool {
    let len = p.len();
    let last = len - 1;
    let cap = 4 * len * len + 16;
    for _ in 0..cap {
        let bad = match (0..last).find(|&i| dead(p[i], p[i + 1])) {
            None => return true,
            Some(i) => i,
        };
        // both reversals keep p[0] and p[last] in place
        let forward = (bad + 1..last).find(|&j| !dead(p[bad], p[j]) && !dead(p[bad + 1], p[j + 1]));
        if let Some(j) = forward {
            p[bad + 1..=j].reverse();
            continue;
        }
        let backward = (0..bad).find(|&j| !dead(p[j], p[bad]) && !dead(p[j + 1], p[bad + 1]));
        if let Some(j) = backward {
            p[j + 1..=bad].reverse();
            continue;
        }
        return false;
    }
    false
}

/// Hamiltonian `(s, t)`-path over `vertices` avoiding pairs for which `dead`
/// holds.
pub(crate) fn complete_hp<F: Fn(u64, u64) -> bool>(vertices: &[u64], dead: F, s: u64, t: u64) -> Option<Vec<u64>> {
    if s == t {
        return None;
    }
    let mut p = Vec::with_capacity(vertices.len());
    p.push(s);
    p.extend(vertices.iter().copied().filter(|&x| x != s && x != t));
    p.push(t);
    if p.len() != vertices.len() {
        return None;
    }
    repair(&mut p, &dead).then_some(p)
}

/// Hamiltonian cycle over `vertices`, starting at the smallest one.
pub(crate) fn complete_hc<F: Fn(u64, u64) -> bool>(vertices: &[u64], dead: F) -> Option<Vec<u64>> {
    if vertices.len() < 3 {
        return None;
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    // a cycle through s is a path s .. w closed by the edge (w, s)
    let s = sorted[0];
    sorted[1..].iter().filter(|&&w| !dead(s, w)).find_map(|&w| complete_hp(&sorted, &dead, s, w))
}
