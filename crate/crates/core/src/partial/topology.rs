//! Partial DCells built from a listing of `DCell_1` units.

use std::collections::BTreeSet;

use crate::error::{DcellError, Result};
use crate::path::Adjacency;
use crate::topology::{Dcell, Edge};

use super::listing::{Listing, Prefix, ShapeA};

/// The listed `DCell_1` units of `D_k` and every edge between their vertices.
#[derive(Debug, Clone)]
pub struct PartialTopology {
    dcell: Dcell,
    listing: Listing,
    units: BTreeSet<u64>,
}

/// Materializes the partial DCell described by `listing`, which must use the
/// DCell shape of `(n, k)`.
pub fn materialize_partial(listing: &Listing, n: usize, k: usize, vertex_cap: u64) -> Result<PartialTopology> {
    let shape = ShapeA::dcell(n, k)?;
    if listing.shape() != &shape {
        return Err(DcellError::InvalidArgument(format!(
            "listing shape {} is not the DCell shape {shape} of n={n}, k={k}",
            listing.shape()
        )));
    }
    let dcell = Dcell::from_nk(n, k)?;
    let vertices =
        listing.d().checked_mul(dcell.size(1)).ok_or_else(|| DcellError::Overflow("partial vertex count".into()))?;
    if vertices > vertex_cap {
        return Err(DcellError::ResourceLimit(format!("{vertices} vertices exceed cap {vertex_cap}")));
    }
    let units = listing.listed().iter().map(|t| shape.index(t)).collect::<Result<BTreeSet<_>>>()?;
    Ok(PartialTopology { dcell, listing: listing.clone(), units })
}

impl PartialTopology {
    pub fn dcell(&self) -> &Dcell {
        &self.dcell
    }

    pub fn listing(&self) -> &Listing {
        &self.listing
    }

    pub fn n(&self) -> usize {
        self.dcell.n()
    }

    pub fn k(&self) -> usize {
        self.dcell.k()
    }

    /// Unit indices (`uid / t_1`) of the listed units, ascending.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        self.units.iter().copied()
    }

    pub fn unit_count(&self) -> u64 {
        self.units.len() as u64
    }

    pub fn vertex_count(&self) -> u64 {
        self.unit_count() * self.dcell.size(1)
    }

    pub fn has_vertex(&self, x: u64) -> bool {
        x < self.dcell.vertex_count() && self.units.contains(&(x / self.dcell.size(1)))
    }

    /// Vertices in ascending uid order.
    pub fn vertices(&self) -> impl Iterator<Item = u64> + '_ {
        let t1 = self.dcell.size(1);
        self.units.iter().flat_map(move |&u| u * t1..(u + 1) * t1)
    }

    /// Neighbors of a present vertex that are present, with edge levels.
    pub fn neighbors(&self, x: u64) -> Vec<(u64, usize)> {
        if !self.has_vertex(x) {
            return Vec::new();
        }
        let mut out: Vec<(u64, usize)> =
            self.dcell.level0_neighbors(x).expect("present vertex").into_iter().map(|y| (y, 0)).collect();
        for j in 1..=self.k() {
            let y = self.dcell.neighbor_unchecked(x, j);
            if self.has_vertex(y) {
                out.push((y, j));
            }
        }
        out
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.vertices()
            .flat_map(|x| {
                self.neighbors(x).into_iter().filter(move |&(y, _)| x < y).map(move |(y, l)| Edge::new(x, y, l))
            })
            .collect()
    }

    /// Tuple of the unit containing `x`.
    pub fn tuple_of(&self, x: u64) -> Vec<u64> {
        self.listing.shape().tuple(x / self.dcell.size(1)).expect("vertex in range")
    }

    /// First uid of the `D_l` whose unit tuples start with `p`.
    pub fn block_base(&self, p: &Prefix) -> u64 {
        let k = self.k();
        p.digits().iter().enumerate().map(|(i, &d)| d * self.dcell.size(k - 1 - i)).sum()
    }
}

impl Adjacency for PartialTopology {
    fn contains(&self, v: u64) -> bool {
        self.has_vertex(v)
    }

    fn adjacent(&self, u: u64, v: u64) -> bool {
        self.has_vertex(u) && self.has_vertex(v) && self.dcell.edge_level(u, v).is_some()
    }

    fn order(&self) -> u64 {
        self.vertex_count()
    }
}

/// How the children of one prefix are linked to each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyConnectivityReport {
    /// Largest non-empty child, if any.
    pub m: Option<u64>,
    /// Pairs `i < j < m` without a link.
    pub missing_pairs: Vec<(u64, u64)>,
    /// Siblings linked to child `m`.
    pub m_links: u64,
    /// `min(m, t_1)`.
    pub m_required: u64,
}

impl CopyConnectivityReport {
    pub fn passed(&self) -> bool {
        self.missing_pairs.is_empty() && self.m_links >= self.m_required
    }
}

/// Checks the links among the sub-partial `DCell_l`s under prefix `p`, which
/// must have `k − l − 1` digits.
pub fn check_copy_connectivity(partial: &PartialTopology, p: &Prefix, l: usize) -> Result<CopyConnectivityReport> {
    let k = partial.k();
    if l == 0 || l >= k {
        return Err(DcellError::InvalidLevel { level: l, reason: format!("need 1 ≤ l ≤ {}", k - 1) });
    }
    if p.len() != k - l - 1 {
        return Err(DcellError::InvalidArgument(format!("prefix {p} does not select a DCell_{} for l = {l}", l + 1)));
    }
    let listing = partial.listing();
    let bound = listing.shape().bounds()[p.len()];
    let mut nonempty = Vec::new();
    for i in 0..bound {
        if !listing.is_empty_prefix(&p.child(i))? {
            nonempty.push(i);
        }
    }
    let m = match nonempty.last() {
        Some(&m) => m,
        None => return Ok(CopyConnectivityReport { m: None, missing_pairs: vec![], m_links: 0, m_required: 0 }),
    };
    let base = partial.block_base(p);
    let dcell = partial.dcell();
    let linked = |a: u64, b: u64| -> Result<bool> {
        let e = dcell.level_edge(l + 1, a, b)?;
        Ok(partial.has_vertex(base + e.u) && partial.has_vertex(base + e.v))
    };
    let mut missing_pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if !linked(i, j)? {
                missing_pairs.push((i, j));
            }
        }
    }
    let mut m_links = 0;
    for &i in nonempty.iter().filter(|&&i| i != m) {
        if linked(i, m)? {
            m_links += 1;
        }
    }
    Ok(CopyConnectivityReport { m: Some(m), missing_pairs, m_links, m_required: m.min(dcell.size(1)) })
}
