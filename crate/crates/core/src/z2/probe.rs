//! Bounded search for periodic and vector-stabilized configurations.

use rayon::prelude::*;

use super::sft::Nn2Sft;
use super::torus::{check_torus, locally_valid_square, search_torus, stabilizer_lattice, TorusConfig};
use super::vector::{periodize, PeriodVector};

/// Vectors whose reduction would have more blocks than this are skipped.
pub const MAX_BLOCKS: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeReport {
    /// No locally valid `(bound+1) × (bound+1)` square: the SFT is empty.
    EmptyWithinBound { bound: usize },
    /// A doubly periodic configuration: the SFT is not weakly aperiodic.
    PeriodicPointFound { witness: TorusConfig },
    /// A configuration stabilized by `vector`: the SFT is not strongly
    /// aperiodic, and `witness` is a periodization of it.
    VectorStabilizedFound { vector: PeriodVector, witness: TorusConfig },
    /// Nothing found within the bound. `skipped` lists vectors left out
    /// because their reduction was too large.
    Unknown { bound: usize, skipped: Vec<PeriodVector> },
}

impl ProbeReport {
    pub fn witness(&self) -> Option<&TorusConfig> {
        match self {
            ProbeReport::PeriodicPointFound { witness } | ProbeReport::VectorStabilizedFound { witness, .. } => {
                Some(witness)
            }
            _ => None,
        }
    }

    pub fn outcome(&self) -> &'static str {
        match self {
            ProbeReport::EmptyWithinBound { .. } => "EmptyWithinBound",
            ProbeReport::PeriodicPointFound { .. } => "PeriodicPointFound",
            ProbeReport::VectorStabilizedFound { .. } => "VectorStabilizedFound",
            ProbeReport::Unknown { .. } => "Unknown",
        }
    }
}

/// Three-valued search: emptiness certificate, periodic torus with sides at
/// most `bound`, or a primitive stabilizing vector with `|p|, q ≤ bound`.
/// The smallest witness (by area, then width) wins.
pub fn aperiodicity_probe(sft: &Nn2Sft, bound: usize) -> ProbeReport {
    let bound = bound.max(1);
    // side bound+1 so that even bound 1 checks one adjacency per direction
    if !locally_valid_square(sft, bound + 1) {
        return ProbeReport::EmptyWithinBound { bound };
    }
    let mut shapes: Vec<(usize, usize)> = (1..=bound).flat_map(|p| (1..=bound).map(move |q| (p, q))).collect();
    shapes.sort_by_key(|&(p, q)| (p * q, p, q));
    if let Some(witness) = shapes.par_iter().find_map_first(|&(p, q)| search_torus(sft, p, q)) {
        return ProbeReport::PeriodicPointFound { witness };
    }
    let n = sft.letter_count() as u64;
    let (vectors, skipped): (Vec<PeriodVector>, Vec<PeriodVector>) = PeriodVector::enumerate(bound as i64, bound as i64)
        .into_iter()
        .filter(PeriodVector::is_primitive)
        .partition(|v| {
            let cells = if v.q() == 0 { v.p() as u32 } else { (v.p().unsigned_abs().max(1) * v.q() as u64) as u32 };
            n.checked_pow(cells).is_some_and(|b| b <= MAX_BLOCKS)
        });
    let found = vectors
        .par_iter()
        .find_map_first(|&v| periodize(sft, v).map(|w| (v, w)));
    if let Some((vector, witness)) = found {
        debug_assert!(check_torus(sft, &witness).unwrap().is_empty());
        debug_assert!(stabilizer_lattice(&witness).contains(vector.p(), vector.q()));
        return ProbeReport::VectorStabilizedFound { vector, witness };
    }
    ProbeReport::Unknown { bound, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_examples() {
        let board =
            Nn2Sft::from_labels(&["a", "b"], &[("a", "a"), ("b", "b")], &[("a", "a"), ("b", "b")]).unwrap();
        match aperiodicity_probe(&board, 2) {
            ProbeReport::PeriodicPointFound { witness } => {
                assert_eq!(witness, TorusConfig::from_fn(2, 2, |i, j| (i + j) % 2).unwrap())
            }
            other => panic!("{other:?}"),
        }
        let full = Nn2Sft::full_shift(&["a"]);
        match aperiodicity_probe(&full, 1) {
            ProbeReport::PeriodicPointFound { witness } => assert_eq!((witness.p(), witness.q()), (1, 1)),
            other => panic!("{other:?}"),
        }
        let empty = Nn2Sft::from_labels(&["a"], &[("a", "a")], &[("a", "a")]).unwrap();
        assert_eq!(aperiodicity_probe(&empty, 1), ProbeReport::EmptyWithinBound { bound: 1 });
    }

    #[test]
    fn vector_found_beyond_torus_bound() {
        // rows must be 3-periodic (a b c a b c ...) and each row is the one
        // below shifted by one: no torus with sides ≤ 2 exists
        let s = Nn2Sft::from_labels(
            &["a", "b", "c"],
            &[("a", "a"), ("a", "c"), ("b", "a"), ("b", "b"), ("c", "b"), ("c", "c")],
            &[("a", "a"), ("a", "c"), ("b", "a"), ("b", "b"), ("c", "b"), ("c", "c")],
        )
        .unwrap();
        match aperiodicity_probe(&s, 2) {
            ProbeReport::VectorStabilizedFound { vector, witness } => {
                assert!(witness.fixed_by(vector.p(), vector.q()));
                assert!(check_torus(&s, &witness).unwrap().is_empty());
            }
            other => panic!("{other:?}"),
        }
    }
}
