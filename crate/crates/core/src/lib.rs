//! Higher Bruhat orders `B(n, δ+1)`, first higher Stasheff-Tamari orders
//! `S(n, δ)` and the cross-section map `g` between them.

pub mod cli;
pub mod crosssection;
pub mod enumerate;
pub mod error;
pub mod ground;
pub mod io;
pub mod poset;
pub mod simplicial;
pub mod subset;
pub mod verify;
pub mod witness;
pub mod zonotopal;

pub use enumerate::{Enumeration, Limits};
pub use error::{Error, Result};
pub use simplicial::Triangulation;
pub use subset::Subset;
pub use zonotopal::Cubillage;
