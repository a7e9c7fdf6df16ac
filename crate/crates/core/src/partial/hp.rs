//! Hamiltonian paths in `K_c`-connected partial DCells.

use serde::{Deserialize, Serialize};

use crate::construct::Builder;
use crate::error::{DcellError, Result};
use crate::path::verify_path;
use crate::topology::t;

use super::closure::{hc_via_closure, SimpleGraph};
use super::listing::Prefix;
use super::topology::PartialTopology;

/// A Hamiltonian path of a partial DCell with bookkeeping about how it
/// treats the block `[0, t_ω)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialPath {
    pub sequence: Vec<u64>,
    pub omega: usize,
    /// Gaps between successive block vertices along the path.
    pub block_breaks: usize,
    /// Same-copy stitches that could not use the preferred pair inside the block.
    pub fallback_stitches: usize,
}

/// The `ω` for which `(n, k, c)` admits a construction, or an
/// unsupported-parameters error.
pub fn partial_omega(n: usize, k: usize, c: u64) -> Result<usize> {
    let t1 = t(n, 1)?;
    let n64 = n as u64;
    let k64 = k as u64;
    if n < 4 || c == 0 || n64 > c - 1 || c - 1 > t1 {
        return Err(DcellError::Unsupported(format!("need 4 ≤ n ≤ c − 1 < t_1 + 1, got n={n}, c={c}, t_1={t1}")));
    }
    if c < t1 + 1 && k64 < n64 {
        Ok(0)
    } else if c == t1 + 1 && k64 < t1 {
        Ok(1)
    } else {
        Err(DcellError::Unsupported(format!("k={k} is too large for n={n}, c={c}")))
    }
}

/// Number of gaps between consecutive block vertices of `[0, t_ω)` along `path`.
pub fn block_breaks(partial: &PartialTopology, path: &[u64], omega: usize) -> usize {
    let limit = partial.dcell().size(omega);
    let pos: Vec<usize> = path.iter().enumerate().filter(|&(_, &x)| x < limit).map(|(i, _)| i).collect();
    pos.windows(2).filter(|w| w[1] != w[0] + 1).count()
}

/// Hamiltonian `(u, v)`-path of a `K_c`-connected partial DCell.
pub fn partial_hp(partial: &PartialTopology, c: u64, u: u64, v: u64) -> Result<PartialPath> {
    let omega = partial_omega(partial.n(), partial.k(), c)?;
    let report = partial.listing().is_kc_connected(c)?;
    if let Some(w) = report.witness {
        return Err(DcellError::InvalidArgument(format!("listing is not K_{c}-connected at prefix {w}")));
    }
    for x in [u, v] {
        if !partial.has_vertex(x) {
            return Err(DcellError::OutOfRange(format!("{x} is not a vertex of the partial DCell")));
        }
    }
    if u == v {
        return Err(DcellError::InvalidArgument("path endpoints must differ".into()));
    }
    let mut solver = Solver { p: partial, builder: Builder::new(partial.dcell())?, omega, fallback_stitches: 0 };
    let sequence = solver.path(partial.k(), u, v)?;
    if let Some(bad) = verify_path(partial, &sequence, u, v, true).violation {
        return Err(DcellError::Invariant(format!("partial path rejected: {bad}")));
    }
    let breaks = block_breaks(partial, &sequence, omega);
    Ok(PartialPath { sequence, omega, block_breaks: breaks, fallback_stitches: solver.fallback_stitches })
}

struct Solver<'a> {
    p: &'a PartialTopology,
    builder: Builder<'a>,
    omega: usize,
    fallback_stitches: usize,
}

impl Solver<'_> {
    /// Digits `α_k … α_{j+1}` of the `D_j` holding `x`.
    fn prefix(&self, x: u64, j: usize) -> Prefix {
        let mut digits = self.p.tuple_of(x);
        digits.truncate(self.p.k() - j);
        Prefix(digits)
    }

    /// Endpoints of the level-`j` link from copy `a` to copy `b` of the `D_j`
    /// at `base`, if both are present.
    fn link(&self, j: usize, base: u64, a: u64, b: u64) -> Option<(u64, u64)> {
        let e = self.p.dcell().level_edge(j, a, b).ok()?;
        let (ea, eb) = if a < b { (base + e.u, base + e.v) } else { (base + e.v, base + e.u) };
        (self.p.has_vertex(ea) && self.p.has_vertex(eb)).then_some((ea, eb))
    }

    fn path(&mut self, j: usize, u: u64, v: u64) -> Result<Vec<u64>> {
        let dcell = self.p.dcell();
        let size = dcell.size(j);
        let base = u - u % size;
        let prefix = self.prefix(u, j);
        let listing = self.p.listing();
        if listing.is_full_prefix(&prefix)? {
            let mut out = vec![0u64; size as usize];
            self.builder.hp(j, base, u - base, v - base, &mut out)?;
            return Ok(out);
        }
        let inner = dcell.size(j - 1);
        let mut kids = Vec::new();
        for i in 0..=inner {
            if !listing.is_empty_prefix(&prefix.child(i))? {
                kids.push(i);
            }
        }
        if kids.len() == 1 {
            return self.path(j - 1, u, v);
        }
        let (alpha, beta) = (dcell.copy_of(u, j), dcell.copy_of(v, j));
        if alpha == beta {
            self.same_copy(j, base, &kids, u, v)
        } else {
            self.split_copies(j, base, &kids, u, v)
        }
    }

    /// Walks `copies` in order, entering the first at `entry` and leaving the
    /// last at `exit`.
    fn walk(
        &mut self,
        j: usize,
        base: u64,
        copies: &[u64],
        mut entry: u64,
        exit: u64,
        out: &mut Vec<u64>,
    ) -> Result<()> {
        for (i, &cur) in copies.iter().enumerate() {
            let (leave, next_entry) = match copies.get(i + 1) {
                None => (exit, 0),
                Some(&nxt) => self
                    .link(j, base, cur, nxt)
                    .ok_or_else(|| DcellError::Invariant(format!("copies {cur} and {nxt} are not linked")))?,
            };
            out.extend(self.path(j - 1, entry, leave)?);
            entry = next_entry;
        }
        Ok(())
    }

    fn same_copy(&mut self, j: usize, base: u64, kids: &[u64], u: u64, v: u64) -> Result<Vec<u64>> {
        let dcell = self.p.dcell();
        let alpha = dcell.copy_of(u, j);
        let inner_path = self.path(j - 1, u, v)?;
        let block_lo = base + alpha * dcell.size(j - 1);
        let block_hi = block_lo + dcell.size(self.omega);
        let in_block = |x: u64| x >= block_lo && x < block_hi;
        let usable = |x: u64| self.p.has_vertex(dcell.neighbor_unchecked(x, j));

        let mut candidates: Vec<usize> = Vec::new();
        let block_pos: Vec<usize> =
            inner_path.iter().enumerate().filter(|&(_, &x)| in_block(x)).map(|(i, _)| i).collect();
        if block_pos.len() > j && block_pos[j] == block_pos[j - 1] + 1 {
            candidates.push(block_pos[j - 1]);
        }
        let preferred = candidates.first().copied();
        candidates.extend(block_pos.windows(2).filter(|w| w[1] == w[0] + 1).map(|w| w[0]));
        candidates.extend(0..inner_path.len() - 1);
        let mut seen = vec![false; inner_path.len()];
        candidates.retain(|&i| !std::mem::replace(&mut seen[i], true));

        let index_of = |c: u64| kids.iter().position(|&k| k == c);
        for pos in candidates {
            let (x, y) = (inner_path[pos], inner_path[pos + 1]);
            if !usable(x) || !usable(y) {
                continue;
            }
            let mut g = SimpleGraph::new(kids.len());
            for (ia, &a) in kids.iter().enumerate() {
                for (ib, &b) in kids.iter().enumerate().skip(ia + 1) {
                    let Some((ea, eb)) = self.link(j, base, a, b) else { continue };
                    if (a == alpha && ea != x && ea != y) || (b == alpha && eb != x && eb != y) {
                        continue;
                    }
                    g.add_edge(ia, ib);
                }
            }
            let Some(mut cycle) = hc_via_closure(&g) else { continue };
            let start = index_of(alpha).expect("alpha is listed");
            let at = cycle.iter().position(|&c| c == start).expect("cycle covers alpha");
            cycle.rotate_left(at);
            let nx = dcell.neighbor_unchecked(x, j);
            if kids[cycle[1]] != dcell.copy_of(nx, j) {
                cycle[1..].reverse();
            }
            let copies: Vec<u64> = cycle[1..].iter().map(|&c| kids[c]).collect();
            let mut out = Vec::with_capacity(self.p.vertex_count() as usize);
            out.extend_from_slice(&inner_path[..=pos]);
            self.walk(j, base, &copies, nx, dcell.neighbor_unchecked(y, j), &mut out)?;
            out.extend_from_slice(&inner_path[pos + 1..]);
            if preferred != Some(pos) {
                self.fallback_stitches += 1;
            }
            return Ok(out);
        }
        Err(DcellError::Invariant(format!("no level-{j} cycle through copy {alpha}")))
    }

    fn split_copies(&mut self, j: usize, base: u64, kids: &[u64], u: u64, v: u64) -> Result<Vec<u64>> {
        let dcell = self.p.dcell();
        let (alpha, beta) = (dcell.copy_of(u, j), dcell.copy_of(v, j));
        let nu = dcell.neighbor_unchecked(u, j);
        let nv = dcell.neighbor_unchecked(v, j);
        let gamma = self.p.has_vertex(nu).then(|| dcell.copy_of(nu, j));
        let delta = self.p.has_vertex(nv).then(|| dcell.copy_of(nv, j));
        let pair = |a: u64, b: u64| (a.min(b), a.max(b));
        let skip: Vec<(u64, u64)> =
            [gamma.map(|g| pair(alpha, g)), delta.map(|d| pair(d, beta))].into_iter().flatten().collect();

        let t_node = kids.len();
        let mut g = SimpleGraph::new(kids.len() + 1);
        for (ia, &a) in kids.iter().enumerate() {
            for (ib, &b) in kids.iter().enumerate().skip(ia + 1) {
                if !skip.contains(&(a, b)) && self.link(j, base, a, b).is_some() {
                    g.add_edge(ia, ib);
                }
            }
        }
        let index_of = |c: u64| kids.iter().position(|&k| k == c).expect("endpoint copy is listed");
        g.add_edge(t_node, index_of(alpha));
        g.add_edge(t_node, index_of(beta));
        let mut cycle = hc_via_closure(&g)
            .ok_or_else(|| DcellError::Invariant(format!("no level-{j} route from copy {alpha} to copy {beta}")))?;
        let at = cycle.iter().position(|&c| c == t_node).expect("cycle covers t");
        cycle.rotate_left(at);
        if kids[cycle[1]] != alpha {
            cycle[1..].reverse();
        }
        let copies: Vec<u64> = cycle[1..].iter().map(|&c| kids[c]).collect();
        let mut out = Vec::with_capacity(self.p.vertex_count() as usize);
        self.walk(j, base, &copies, u, v, &mut out)?;
        Ok(out)
    }
}
