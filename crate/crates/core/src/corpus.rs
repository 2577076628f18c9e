//! Seeded random instances and the golden corpus run.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::abelian::{fix_subshift, pull_back, push_forward, AbelianNnSft, FgAbelianGroup, Pattern, Quotient};
use crate::periods::{has_aperiodic_point, multiples, structural_bound};
use crate::realizer::realize;
use crate::semilinear::{Progression, SemilinearSet};
use crate::tileset::{prune_essential, TilesetGraph};
use crate::z2::{aperiodicity_probe, period_vector_graph, periodize, stabilizer_lattice, Nn2Sft, PeriodVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn letters(n: usize, prefix: &str) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Random graph on `1..=max_vertices` vertices, each edge present with
/// probability `density`.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, density: f64) -> TilesetGraph {
    let n = rng.gen_range(1..=max_vertices);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    TilesetGraph::new(letters(n, "v"), edges).expect("generated labels")
}

/// Random non-empty essential graph with at most `max_vertices` vertices.
pub fn random_essential_graph(rng: &mut impl Rng, max_vertices: usize) -> TilesetGraph {
    loop {
        let density = rng.gen_range(0.15..0.6);
        let g = prune_essential(&random_graph(rng, max_vertices, density));
        if !g.is_empty() {
            return g;
        }
    }
}

/// Realizable target: at most 4 finite values in `1..=9` and at most 2
/// progressions `a(N+k)` with `a ≤ 3`, `k ≤ 4` (0 added when infinite).
pub fn random_target(rng: &mut impl Rng) -> SemilinearSet {
    loop {
        let nprog = rng.gen_range(0..=2);
        let progs: Vec<Progression> = (0..nprog)
            .map(|_| Progression::multiples(rng.gen_range(1..=3), rng.gen_range(1..=4)).expect("positive"))
            .collect();
        let nfin = rng.gen_range(0..=4);
        let mut finite: BTreeSet<u64> = (0..nfin).map(|_| rng.gen_range(1..=9)).collect();
        if !progs.is_empty() {
            finite.insert(0);
        }
        let s = SemilinearSet::new(finite, progs);
        if !s.is_empty() {
            debug_assert!(s.is_realizable_period_set());
            return s;
        }
    }
}

/// A set violating the characterization: finite with 0, or infinite without 0.
pub fn random_unrealizable(rng: &mut impl Rng) -> SemilinearSet {
    let nfin = rng.gen_range(0..=4);
    let mut finite: BTreeSet<u64> = (0..nfin).map(|_| rng.gen_range(1..=9)).collect();
    if rng.gen_bool(0.5) {
        finite.insert(0);
        SemilinearSet::new(finite, [])
    } else {
        let nprog = rng.gen_range(1..=2);
        let progs: Vec<Progression> = (0..nprog)
            .map(|_| Progression::new(rng.gen_range(1..=12), rng.gen_range(1..=3)).expect("positive"))
            .collect();
        SemilinearSet::new(finite, progs)
    }
}

/// Random nearest-neighbor ℤ²-SFT on `1..=max_letters` letters.
pub fn random_nn2(rng: &mut impl Rng, max_letters: usize) -> Nn2Sft {
    let n = rng.gen_range(1..=max_letters);
    let density = rng.gen_range(0.1..0.5);
    let mut h = Vec::new();
    let mut v = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                h.push((a, b));
            }
            if rng.gen_bool(density) {
                v.push((a, b));
            }
        }
    }
    Nn2Sft::new(letters(n, "l"), h, v).expect("generated labels")
}

/// Random SFT over `group` whose offsets are canonical generators or their
/// negatives.
pub fn random_abelian(rng: &mut impl Rng, group: &FgAbelianGroup, n_letters: usize, max_patterns: usize) -> AbelianNnSft {
    let gens = group.generators();
    let count = rng.gen_range(0..=max_patterns);
    let patterns: Vec<Pattern> = (0..count)
        .map(|_| {
            let g = gens.choose(rng).expect("non-trivial group").clone();
            let offset = if rng.gen_bool(0.5) { g } else { group.neg(&g) };
            Pattern::new(rng.gen_range(0..n_letters), rng.gen_range(0..n_letters), offset)
        })
        .collect();
    AbelianNnSft::new(group.clone(), letters(n_letters, "a"), patterns).expect("generated patterns")
}

/// Random SFT inside `Fix_A(N)` over the ambient group of `q`: the
/// inequality rules of `N` plus rules along `±ρ(s)` for canonical generators
/// `s` of the quotient.
pub fn random_fixed(rng: &mut impl Rng, q: &Quotient, n_letters: usize, max_patterns: usize) -> AbelianNnSft {
    let alphabet = letters(n_letters, "a");
    let fix = fix_subshift(&q.ambient(), &alphabet, q.generators()).expect("valid generators");
    let lifts: Vec<Vec<i64>> = q.target().generators().iter().map(|s| q.section(s)).collect();
    let count = rng.gen_range(0..=max_patterns);
    let extra: Vec<Pattern> = (0..count)
        .map(|_| {
            let o = lifts.choose(rng).expect("non-trivial quotient").clone();
            let o = if rng.gen_bool(0.5) { o } else { o.iter().map(|c| -c).collect() };
            Pattern::new(rng.gen_range(0..n_letters), rng.gen_range(0..n_letters), o)
        })
        .collect();
    AbelianNnSft::new(q.ambient(), alphabet, fix.patterns().iter().cloned().chain(extra)).expect("generated patterns")
}

/// The three quotient universes used for construction round-trips:
/// ℤ³/⟨e₃⟩ ≅ ℤ², ℤ²/⟨(0,2)⟩ ≅ ℤ × ℤ/2 and ℤ/⟨3⟩ ≅ ℤ/3.
pub fn universes() -> Vec<Quotient> {
    vec![
        Quotient::new(3, vec![vec![0, 0, 1]]).expect("valid"),
        Quotient::new(2, vec![vec![0, 2]]).expect("valid"),
        Quotient::new(1, vec![vec![3]]).expect("valid"),
    ]
}

/// Deterministic summary of a seeded run over every module, used as the
/// golden corpus report.
pub fn run_corpus(seed: u64) -> Value {
    let mut rng = rng(seed);
    let graphs: Vec<Value> = (0..20)
        .map(|_| {
            let g = random_essential_graph(&mut rng, 5);
            let m = multiples(&g, structural_bound(&g)).expect("essential graph");
            json!({
                "graph": g.to_string(),
                "multiples": m.to_string(),
                "aperiodic": has_aperiodic_point(&g).expect("essential graph"),
            })
        })
        .collect();
    let realized: Vec<Value> = (0..10)
        .map(|_| {
            let target = random_target(&mut rng);
            let g = realize(&target).expect("admissible target");
            let m = multiples(&g, structural_bound(&g)).expect("realized graph");
            json!({
                "target": target.to_string(),
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "verified": m.equal_sl(&target),
            })
        })
        .collect();
    let planes: Vec<Value> = (0..10)
        .map(|_| {
            let sft = random_nn2(&mut rng, 3);
            let probe = aperiodicity_probe(&sft, 2);
            let vectors: Vec<Value> = PeriodVector::enumerate(1, 1)
                .into_iter()
                .map(|v| {
                    let nonempty = !prune_essential(&period_vector_graph(&sft, v)).is_empty();
                    let lattice = periodize(&sft, v).map(|t| stabilizer_lattice(&t).basis());
                    json!({ "vector": v.to_string(), "nonempty": nonempty, "lattice": lattice })
                })
                .collect();
            json!({
                "sft": sft.to_string(),
                "probe": probe.outcome(),
                "witness": probe.witness().map(|w| w.to_witness(&sft)),
                "vectors": vectors,
            })
        })
        .collect();
    let constructions: Vec<Value> = universes()
        .iter()
        .map(|q| {
            let x = random_abelian(&mut rng, q.target(), 2, 4);
            let y = pull_back(&x, q).expect("matching groups");
            let back = push_forward(&y, q).expect("pull-back lies in Fix(N)");
            json!({
                "quotient": q.target().to_string(),
                "source": x.to_string(),
                "pulled": y.to_string(),
                "round_trip": back == x,
            })
        })
        .collect();
    json!({
        "seed": seed,
        "graphs": graphs,
        "realized": realized,
        "planes": planes,
        "constructions": constructions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_reproducible() {
        let a: Vec<String> = (0..5).map(|_| random_essential_graph(&mut rng(7), 4).to_string()).collect();
        let b: Vec<String> = (0..5).map(|_| random_essential_graph(&mut rng(7), 4).to_string()).collect();
        assert_eq!(a, b);
        let mut r = rng(3);
        for _ in 0..50 {
            assert!(random_target(&mut r).is_realizable_period_set());
            assert!(!random_unrealizable(&mut r).is_realizable_period_set());
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(run_corpus(11), run_corpus(11));
    }
}
