//! Hamiltonian paths in the copy graph.
//!
//! The copy graph of a level has one node per copy and an edge for every
//! surviving link between two copies. A route visits a chosen set of copies
//! from a start copy to an end copy. Some edges are required (they come from
//! constraints inside a copy) and some copies may only use required edges.

/// Search problem over copies `0..copies`.
pub(crate) struct RouteProblem<'a> {
    pub include: &'a [bool],
    pub start: usize,
    pub end: usize,
    pub required: &'a [(usize, usize)],
    /// Copies whose two route edges must both be required ones.
    pub locked: &'a [bool],
    pub banned: &'a dyn Fn(usize, usize) -> bool,
}

struct Search<'a, 'b> {
    p: &'b RouteProblem<'a>,
    req: Vec<Vec<usize>>,
    visited: Vec<bool>,
    path: Vec<usize>,
    budget: u64,
}

fn find_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Route from `start` to `end` through every included copy, or `None`.
/// `budget` bounds the number of search steps.
pub(crate) fn find_route(p: &RouteProblem, budget: u64) -> Option<Vec<usize>> {
    let copies = p.include.len();
    if p.start == p.end || !p.include[p.start] || !p.include[p.end] {
        return None;
    }
    let mut req = vec![Vec::new(); copies];
    let mut parent: Vec<usize> = (0..copies).collect();
    for &(a, b) in p.required {
        if a == b || !p.include[a] || !p.include[b] || (p.banned)(a, b) {
            return None;
        }
        if req[a].contains(&b) {
            continue;
        }
        let (ra, rb) = (find_root(&mut parent, a), find_root(&mut parent, b));
        if ra == rb {
            return None;
        }
        parent[ra] = rb;
        req[a].push(b);
        req[b].push(a);
    }
    if req.iter().any(|r| r.len() > 2) || req[p.start].len() > 1 || req[p.end].len() > 1 {
        return None;
    }
    let total = p.include.iter().filter(|&&x| x).count();
    let mut visited = vec![false; copies];
    visited[p.start] = true;
    let mut s = Search { p, req, visited, path: vec![p.start], budget };
    if s.dfs(p.start, None, total - 1) {
        Some(s.path)
    } else {
        None
    }
}

impl Search<'_, '_> {
    fn enterable(&self, from: usize, w: usize, remaining: usize) -> bool {
        if self.visited[w] || !self.p.include[w] || (self.p.banned)(from, w) {
            return false;
        }
        if w == self.p.end {
            return remaining == 1 && self.req[w].is_empty();
        }
        if self.p.locked[w] {
            return false;
        }
        match self.req[w].as_slice() {
            [] => true,
            [z] => !self.visited[*z],
            _ => false,
        }
    }

    fn dfs(&mut self, c: usize, prev: Option<usize>, remaining: usize) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        if remaining == 0 {
            return c == self.p.end;
        }
        if c == self.p.end {
            return false;
        }
        let forced: Vec<usize> = self.req[c].iter().copied().filter(|&w| Some(w) != prev).collect();
        let candidates: Vec<usize> = match forced.as_slice() {
            [] => {
                if self.p.locked[c] {
                    return false;
                }
                (0..self.p.include.len()).filter(|&w| self.enterable(c, w, remaining)).collect()
            }
            [w] => {
                if self.visited[*w] || (*w == self.p.end && remaining != 1) {
                    return false;
                }
                vec![*w]
            }
            _ => return false,
        };
        for w in candidates {
            self.visited[w] = true;
            self.path.push(w);
            if self.dfs(w, Some(c), remaining - 1) {
                return true;
            }
            self.path.pop();
            self.visited[w] = false;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges_of(route: &[usize]) -> Vec<(usize, usize)> {
        route.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect()
    }

    #[test]
    fn plain_and_constrained_routes() {
        let include = vec![true; 6];
        let locked = vec![false; 6];
        let none = |_: usize, _: usize| false;
        let p = RouteProblem { include: &include, start: 0, end: 5, required: &[], locked: &locked, banned: &none };
        assert_eq!(find_route(&p, 1000).unwrap(), vec![0, 1, 2, 3, 4, 5]);

        let banned = |a: usize, b: usize| (a.min(b), a.max(b)) == (0, 1);
        let required = [(2, 4), (4, 1)];
        let mut locked = vec![false; 6];
        locked[4] = true;
        let p =
            RouteProblem { include: &include, start: 0, end: 5, required: &required, locked: &locked, banned: &banned };
        let r = find_route(&p, 1000).unwrap();
        assert_eq!((r[0], r[5]), (0, 5));
        let e = edges_of(&r);
        assert!(e.contains(&(2, 4)) && e.contains(&(1, 4)) && !e.contains(&(0, 1)));
    }

    #[test]
    fn infeasible_routes() {
        let include = vec![true; 4];
        let locked = vec![false; 4];
        // the end copy is cut off
        let banned = |a: usize, b: usize| a.max(b) == 3;
        let p = RouteProblem { include: &include, start: 0, end: 3, required: &[], locked: &locked, banned: &banned };
        assert!(find_route(&p, 1000).is_none());
        // required edges forming a cycle
        let none = |_: usize, _: usize| false;
        let required = [(1, 2), (2, 0), (0, 1)];
        let p =
            RouteProblem { include: &include, start: 0, end: 3, required: &required, locked: &locked, banned: &none };
        assert!(find_route(&p, 1000).is_none());
    }

    #[test]
    fn excluded_copies_are_skipped() {
        let include = vec![true, false, true, true];
        let locked = vec![false; 4];
        let none = |_: usize, _: usize| false;
        let p = RouteProblem { include: &include, start: 3, end: 0, required: &[], locked: &locked, banned: &none };
        assert_eq!(find_route(&p, 100).unwrap(), vec![3, 2, 0]);
    }
}
