//! Finite lattices, the wedge-below relation, and the algebra of
//! order-preserving maps under its two derived compositions.

pub mod audit;
pub mod bitmat;
pub mod error;
pub mod files;
pub mod lattice;
pub mod laws;
pub mod limits;
pub mod maps;
pub mod poset;
pub mod wedge;
pub mod witness;

pub use audit::{Claim, ClaimReport, ClaimSelection, ClaimStatus, Mode, Verdict};
pub use error::{Error, Result};
pub use lattice::Lattice;
pub use limits::Limits;
pub use maps::MonotoneMap;
pub use poset::Poset;
pub use wedge::{WedgeKind, WedgeMethod, WedgeRelation};
