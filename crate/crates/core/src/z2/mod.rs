//! Nearest-neighbor ℤ²-SFTs: tori, single-vector reductions and periodization.

mod probe;
mod sft;
mod torus;
mod vector;

pub use probe::{aperiodicity_probe, ProbeReport, MAX_BLOCKS};
pub use sft::Nn2Sft;
pub use torus::{
    check_torus, kernel_of_witnesses, locally_valid_square, search_torus, stabilizer_lattice, Direction, Lattice2,
    TorusConfig, Violation, Witness,
};
pub use vector::{period_vector_graph, periodize, PeriodVector};
