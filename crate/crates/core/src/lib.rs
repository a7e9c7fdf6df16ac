//! Hamiltonian paths and cycles in DCell data-center networks.

pub mod broadcast;
pub mod construct;
pub mod error;
pub mod fault;
pub mod oracle;
pub mod partial;
pub mod path;
pub mod topology;

pub use broadcast::{Scheme, SimConfig, SimResult};
pub use construct::{dcell_hp, dcell_hp_verified, PathDocument};
pub use error::{DcellError, Result};
pub use fault::{ft_hc, ft_hp, FaultElement, FaultSet};
pub use oracle::{certify_base_cases, CertKind, Certificate, SmallGraph};
pub use partial::{materialize_partial, partial_hp, Listing, PartialTopology, Prefix, ShapeA};
pub use path::{verify_cycle, verify_path, Adjacency, PathCheck, Violation};
pub use topology::{build_graph, t, ConnectionRule, Dcell, DefaultRule, Edge, Params, Topology, VertexLabel};
