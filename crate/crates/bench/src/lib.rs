//! Shared inputs for the benchmarks.

use dcell_core::fault::FaultSet;
use dcell_core::partial::{materialize_partial, Listing, PartialTopology, ShapeA};
use dcell_core::Dcell;

/// `(n, k)` pairs timed by the construction benchmarks.
pub const SIZES: &[(usize, usize)] = &[(2, 3), (3, 2), (4, 2), (5, 2), (3, 3)];

pub fn dcell(n: usize, k: usize) -> Dcell {
    Dcell::from_nk(n, k).expect("valid benchmark parameters")
}

/// First and last vertex.
pub fn far_pair(d: &Dcell) -> (u64, u64) {
    (0, d.vertex_count() - 1)
}

/// `count` faulty vertices spread over distinct copies, avoiding vertex 0.
pub fn spread_faults(d: &Dcell, count: usize) -> FaultSet {
    let inner = d.size(d.k() - 1);
    let mut f = FaultSet::new();
    for i in 0..count as u64 {
        f.add_vertex(d, (i + 1) * inner + i % inner).expect("vertex in range");
    }
    f
}

/// Partial DCell with `d` units of the `(n, k)` shape.
pub fn partial(n: usize, k: usize, d: u64) -> PartialTopology {
    let listing = Listing::with_calls(ShapeA::dcell(n, k).expect("shape"), d).expect("listing");
    materialize_partial(&listing, n, k, u64::MAX).expect("partial")
}
