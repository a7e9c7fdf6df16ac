//! Partial DCells grown one `DCell_1` at a time.

mod closure;
mod hp;
mod listing;
mod topology;

pub use closure::{bc_closure, hc_via_closure, Closure, SimpleGraph, FALLBACK_CAP};
pub use hp::{block_breaks, partial_hp, partial_omega, PartialPath};
pub use listing::{KcReport, Listing, ListingFile, Prefix, ShapeA};
pub use topology::{check_copy_connectivity, materialize_partial, CopyConnectivityReport, PartialTopology};
