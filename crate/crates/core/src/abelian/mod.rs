//! SFTs over finitely generated abelian groups and the four constructions
//! relating subgroups, quotients and the ambient group.

mod constructions;
mod free;
mod group;
mod lattice;
mod sft;

pub use constructions::{
    fix_subshift, free_extension, higher_power, normalize_in_fix, pull_back, push_forward, MAX_POWER_LETTERS,
};
pub use free::{free_elements_check, FreeCheck};
pub use group::{format_element, FgAbelianGroup, GroupExpr};
pub use lattice::{hnf, mat_mul, smith_columns, Quotient, SubgroupLattice};
pub use sft::{AbelianNnSft, Pattern};

/// `coset_transversal` as a free function.
pub fn coset_transversal(lattice: &SubgroupLattice) -> crate::Result<Vec<Vec<i64>>> {
    lattice.coset_transversal()
}
