//! Tileset graphs with a prescribed set of multiples.

use crate::error::{Error, Result};
use crate::semilinear::SemilinearSet;
use crate::tileset::{union, TilesetGraph};

/// Directed simple cycle `c0 → c1 → … → c{p-1} → c0`. Its only period is `p`.
pub fn gamma_cycle(p: u64) -> Result<TilesetGraph> {
    if p == 0 {
        return Err(Error::ZeroPeriod);
    }
    let labels: Vec<String> = (0..p).map(|i| format!("c{i}")).collect();
    let p = p as usize;
    TilesetGraph::new(labels, (0..p).map(|i| (i, (i + 1) % p)))
}

/// Graph with multiples `{0} ∪ {a(k+n) : n ∈ ℕ}`.
///
/// A `k`-cycle `c{i}` where every cycle edge `c{i} → c{i+1}` gets a detour
/// `c{i} → t{i} → c{i+1}`; for `a > 1` every edge is then replaced by a path
/// of length `a` through vertices `s{e}.{j}`, `e` indexing the edges in the
/// order `c{i}→c{i+1}, c{i}→t{i}, t{i}→c{i+1}`.
pub fn gamma_progression(a: u64, k: u64) -> Result<TilesetGraph> {
    if a == 0 || k == 0 {
        return Err(Error::ZeroPeriod);
    }
    let k = k as usize;
    let mut labels: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    labels.extend((0..k).map(|i| format!("t{i}")));
    let mut base = Vec::with_capacity(3 * k);
    for i in 0..k {
        let next = (i + 1) % k;
        base.push((i, next));
        base.push((i, k + i));
        base.push((k + i, next));
    }
    if a == 1 {
        return TilesetGraph::new(labels, base);
    }
    let mut edges = Vec::with_capacity(base.len() * a as usize);
    for (e, &(from, to)) in base.iter().enumerate() {
        let mut prev = from;
        for j in 1..a {
            labels.push(format!("s{e}.{j}"));
            let cur = labels.len() - 1;
            edges.push((prev, cur));
            prev = cur;
        }
        edges.push((prev, to));
    }
    TilesetGraph::new(labels, edges)
}

/// A tileset graph whose set of multiples is exactly `target`.
///
/// Finite targets must omit 0 and infinite ones must contain it, with
/// every progression of the form `a(N+k)`.
pub fn realize(target: &SemilinearSet) -> Result<TilesetGraph> {
    if !target.is_realizable_period_set() {
        let why = if target.is_empty() {
            "the empty set is not the set of multiples of a non-empty SFT"
        } else if target.is_finite() {
            "a finite set of multiples cannot contain 0 (no aperiodic point without infinitely many periods)"
        } else if !target.member(0) {
            "an infinite set of multiples must contain 0 (infinitely many periods force an aperiodic point)"
        } else {
            "every progression must have the form a(N+k)"
        };
        return Err(Error::NotRealizable(format!("{target}: {why}")));
    }
    let mut g = TilesetGraph::empty();
    for &p in target.finite_part() {
        if p != 0 {
            g = union(&g, &gamma_cycle(p)?);
        }
    }
    for prog in target.progressions() {
        g = union(&g, &gamma_progression(prog.step, prog.start / prog.step)?);
    }
    Ok(g)
}
