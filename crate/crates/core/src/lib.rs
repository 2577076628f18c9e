//! Stabilizers and periodic points of subshifts of finite type.

pub mod abelian;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod periods;
pub mod realizer;
pub mod report;
pub mod semilinear;
pub mod tileset;
pub mod z2;

pub use error::{Error, Result};
pub use semilinear::{Progression, SemilinearSet};
pub use tileset::TilesetGraph;
