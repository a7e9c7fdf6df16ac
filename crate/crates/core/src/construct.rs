//! Recursive Hamiltonian path construction in fault-free DCells.
//!
//! Paths are built directly in uid space. Every copy of `D_{j-1}` visited by
//! a path occupies a contiguous slice of the output, so the slices of one
//! copy sequence are filled independently (in parallel for large copies).

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DcellError, Result};
use crate::oracle::{base_table, is_searched_base, BaseTable};
use crate::path::verify_path;
use crate::topology::Dcell;

/// Copies below this size are filled sequentially.
const PAR_THRESHOLD: u64 = 2048;

/// Fails with `ResourceLimit` when `D_k` has more than `cap` vertices.
pub fn ensure_within(dcell: &Dcell, cap: u64) -> Result<()> {
    if dcell.vertex_count() > cap {
        return Err(DcellError::ResourceLimit(format!(
            "{} has {} vertices, cap is {cap}",
            dcell.params(),
            dcell.vertex_count()
        )));
    }
    Ok(())
}

/// Whether Hamiltonian paths between all vertex pairs are constructible.
pub fn check_supported(dcell: &Dcell) -> Result<()> {
    if !dcell.is_default_rule() {
        return Err(DcellError::Unsupported(format!(
            "path construction needs the standard connection rule, got '{}'",
            dcell.rule_name()
        )));
    }
    if dcell.n() == 2 && dcell.k() == 1 {
        return Err(DcellError::Unsupported("DCell_1 with n=2 is a 6-cycle and is not Hamiltonian-connected".into()));
    }
    Ok(())
}

/// Orders `universe \ exclude` ascending, then swaps neighbors at either end
/// so that the first element differs from `first_forbidden` and the last from
/// `last_forbidden`.
pub fn make_sigma(
    universe: &[u64],
    exclude: &[u64],
    first_forbidden: Option<u64>,
    last_forbidden: Option<u64>,
) -> Result<Vec<u64>> {
    let mut sigma: Vec<u64> = universe.iter().copied().filter(|c| !exclude.contains(c)).collect();
    sigma.sort_unstable();
    sigma.dedup();
    if sigma.is_empty() {
        return Ok(sigma);
    }
    let last = sigma.len() - 1;
    if first_forbidden == Some(sigma[0]) && last > 0 {
        sigma.swap(0, 1);
    }
    if last_forbidden == Some(sigma[last]) && last > 0 {
        sigma.swap(last - 1, last);
    }
    if first_forbidden == Some(sigma[0]) || last_forbidden == Some(sigma[last]) {
        return Err(DcellError::Infeasible(format!(
            "no ordering of {sigma:?} avoids first={first_forbidden:?}, last={last_forbidden:?}"
        )));
    }
    Ok(sigma)
}

/// Inner uid in copy `a` of the vertex joined to copy `c` (standard rule).
#[inline]
pub(crate) fn exit_toward(a: u64, c: u64) -> u64 {
    if c > a {
        c - 1
    } else {
        c
    }
}

pub(crate) struct Builder<'a> {
    dcell: &'a Dcell,
    table: Option<Arc<BaseTable>>,
}

impl<'a> Builder<'a> {
    pub(crate) fn new(dcell: &'a Dcell) -> Result<Self> {
        let base_level = (0..=dcell.k()).find(|&j| is_searched_base(dcell.n(), j));
        let table = match base_level {
            Some(j) => Some(base_table(dcell.n(), j)?),
            None => None,
        };
        Ok(Builder { dcell, table })
    }

    /// Fills `out` (length `t_j`) with a Hamiltonian path of the `D_j` at
    /// `base` from local uid `u` to local uid `v`. Returns the number of calls.
    pub(crate) fn hp(&self, j: usize, base: u64, u: u64, v: u64, out: &mut [u64]) -> Result<u64> {
        let n = self.dcell.n() as u64;
        if j == 0 {
            out[0] = base + u;
            let mut i = 1;
            for x in (0..n).filter(|&x| x != u && x != v) {
                out[i] = base + x;
                i += 1;
            }
            out[i] = base + v;
            return Ok(1);
        }
        if is_searched_base(self.dcell.n(), j) {
            let table = self.table.as_ref().expect("table loaded for base level");
            if !table.fill(u, v, base, out) {
                return Err(DcellError::Invariant(format!("no cached path for ({u}, {v})")));
            }
            return Ok(1);
        }
        if j == 1 && n == 2 {
            return Err(DcellError::Unsupported("DCell_1 with n=2 has no path between some pairs".into()));
        }
        let inner = self.dcell.size(j - 1);
        let copies = inner + 1;
        let total = self.dcell.size(j);
        let (alpha, beta) = (u / inner, v / inner);
        let all: Vec<u64> = (0..copies).collect();
        if alpha == beta {
            let mut calls = self.hp(j - 1, base + alpha * inner, u % inner, v % inner, &mut out[..inner as usize])?;
            let x = out[inner as usize - 2] - base;
            let (x_copy, x_inner) = self.dcell_partner(alpha, x % inner);
            let (v_copy, v_inner) = self.dcell_partner(alpha, v % inner);
            let sigma = make_sigma(&all, &[alpha, x_copy, v_copy], None, None)?;
            let mut h = Vec::with_capacity(copies as usize - 1);
            h.push(x_copy);
            h.extend(sigma);
            h.push(v_copy);
            calls += self.seq(j, base, &h, x_inner, v_inner, &mut out[inner as usize - 1..total as usize - 1])?;
            out[total as usize - 1] = base + v;
            Ok(calls + 1)
        } else {
            let (u_copy, _) = self.dcell_partner(alpha, u % inner);
            let (v_copy, _) = self.dcell_partner(beta, v % inner);
            let sigma = make_sigma(&all, &[alpha, beta], Some(u_copy), Some(v_copy))?;
            let mut h = Vec::with_capacity(copies as usize);
            h.push(alpha);
            h.extend(sigma);
            h.push(beta);
            Ok(self.seq(j, base, &h, u % inner, v % inner, out)? + 1)
        }
    }

    /// Level-`j` partner `(copy, inner uid)` of inner uid `i` in copy `c`.
    fn dcell_partner(&self, c: u64, i: u64) -> (u64, u64) {
        if i >= c {
            (i + 1, c)
        } else {
            (i, c - 1)
        }
    }

    /// Visits the copies `h` of `D_{j-1}` in order, entering the first at
    /// local uid `s` and leaving the last at local uid `e`.
    fn seq(&self, j: usize, base: u64, h: &[u64], s: u64, e: u64, out: &mut [u64]) -> Result<u64> {
        let inner = self.dcell.size(j - 1);
        let last = h.len() - 1;
        let ends = |i: usize| -> (u64, u64) {
            let entry = if i == 0 { s } else { exit_toward(h[i], h[i - 1]) };
            let exit = if i == last { e } else { exit_toward(h[i], h[i + 1]) };
            (entry, exit)
        };
        let work = |(i, chunk): (usize, &mut [u64])| -> Result<u64> {
            let (entry, exit) = ends(i);
            self.hp(j - 1, base + h[i] * inner, entry, exit, chunk)
        };
        if inner >= PAR_THRESHOLD {
            out.par_chunks_mut(inner as usize).enumerate().map(work).sum()
        } else {
            out.chunks_mut(inner as usize).enumerate().map(work).sum()
        }
    }
}

fn check_endpoints(dcell: &Dcell, u: u64, v: u64) -> Result<()> {
    let top = dcell.vertex_count();
    for x in [u, v] {
        if x >= top {
            return Err(DcellError::OutOfRange(format!("uid {x} not in 0..{top}")));
        }
    }
    if u == v {
        return Err(DcellError::InvalidArgument("path endpoints must differ".into()));
    }
    Ok(())
}

/// Hamiltonian `(u, v)`-path of `D_k` together with the number of recursive
/// calls made.
pub fn counted_dcell_hp(dcell: &Dcell, u: u64, v: u64) -> Result<(Vec<u64>, u64)> {
    check_supported(dcell)?;
    check_endpoints(dcell, u, v)?;
    let builder = Builder::new(dcell)?;
    let mut out = vec![0u64; dcell.vertex_count() as usize];
    let calls = builder.hp(dcell.k(), 0, u, v, &mut out)?;
    Ok((out, calls))
}

/// Hamiltonian `(u, v)`-path of `D_k` for any `u ≠ v`.
pub fn dcell_hp(dcell: &Dcell, u: u64, v: u64) -> Result<Vec<u64>> {
    counted_dcell_hp(dcell, u, v).map(|(p, _)| p)
}

/// Like [`dcell_hp`], re-checking the result and reporting any defect as an
/// invariant violation.
pub fn dcell_hp_verified(dcell: &Dcell, u: u64, v: u64) -> Result<Vec<u64>> {
    let p = dcell_hp(dcell, u, v)?;
    let check = verify_path(dcell, &p, u, v, true);
    match check.violation {
        None => Ok(p),
        Some(bad) => Err(DcellError::Invariant(format!("constructed path rejected: {bad}"))),
    }
}

/// Expected number of recursive calls for `D_k`, assuming every level above
/// the base behaves like the general case.
pub fn expected_calls(dcell: &Dcell) -> u64 {
    let n = dcell.n();
    let mut calls = 1u64;
    for j in 1..=dcell.k() {
        if is_searched_base(n, j) {
            calls = 1;
        } else {
            calls = 1 + (dcell.size(j - 1) + 1) * calls;
        }
    }
    calls
}

/// On-disk form of a path or cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDocument {
    pub n: usize,
    pub k: usize,
    /// `"HP"` or `"HC"`.
    pub kind: String,
    pub sequence: Vec<u64>,
}

impl PathDocument {
    pub fn path(dcell: &Dcell, sequence: Vec<u64>) -> Self {
        PathDocument { n: dcell.n(), k: dcell.k(), kind: "HP".into(), sequence }
    }

    pub fn cycle(dcell: &Dcell, sequence: Vec<u64>) -> Self {
        PathDocument { n: dcell.n(), k: dcell.k(), kind: "HC".into(), sequence }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_golden() {
        let universe: Vec<u64> = (0..7).collect();
        assert_eq!(make_sigma(&universe, &[1, 3], Some(0), None).unwrap(), vec![2, 0, 4, 5, 6]);
        assert_eq!(make_sigma(&universe, &[1, 3], None, Some(6)).unwrap(), vec![0, 2, 4, 6, 5]);
        assert_eq!(make_sigma(&universe, &[1, 3], None, None).unwrap(), vec![0, 2, 4, 5, 6]);
        assert!(matches!(make_sigma(&[4], &[], Some(4), None), Err(DcellError::Infeasible(_))));
        assert!(matches!(make_sigma(&[4, 5], &[], Some(4), Some(4)), Err(DcellError::Infeasible(_))));
        assert_eq!(make_sigma(&[4, 5], &[], Some(4), Some(5)).unwrap(), vec![5, 4]);
    }

    #[test]
    fn complete_graph_paths() {
        let d = Dcell::from_nk(5, 0).unwrap();
        assert_eq!(dcell_hp(&d, 3, 1).unwrap(), vec![3, 0, 2, 4, 1]);
    }

    #[test]
    fn all_pairs_small() {
        for (n, k) in [(3, 1), (4, 1), (5, 1), (2, 2), (3, 2)] {
            let d = Dcell::from_nk(n, k).unwrap();
            let t = d.vertex_count();
            for u in 0..t {
                for v in 0..t {
                    if u != v {
                        let p = dcell_hp(&d, u, v).unwrap();
                        assert!(verify_path(&d, &p, u, v, true).is_valid(), "({n},{k}) {u}->{v}");
                    }
                }
            }
        }
    }

    #[test]
    fn unsupported_and_bad_input() {
        let d = Dcell::from_nk(2, 1).unwrap();
        assert!(matches!(dcell_hp(&d, 0, 3), Err(DcellError::Unsupported(_))));
        let d = Dcell::from_nk(4, 1).unwrap();
        assert!(matches!(dcell_hp(&d, 0, 0), Err(DcellError::InvalidArgument(_))));
        assert!(matches!(dcell_hp(&d, 0, 20), Err(DcellError::OutOfRange(_))));
    }

    #[test]
    fn call_counts() {
        let d = Dcell::from_nk(4, 2).unwrap();
        let (_, calls) = counted_dcell_hp(&d, 0, 419).unwrap();
        assert_eq!(calls, expected_calls(&d));
        // 1 + 21 * (1 + 5)
        assert_eq!(calls, 1 + 21 * 6);
        let d = Dcell::from_nk(2, 3).unwrap();
        assert_eq!(counted_dcell_hp(&d, 5, 1000).unwrap().1, 44);
    }
}
