//! Periodic points, least periods and the set of multiples `M(X)` of a
//! nearest-neighbor ℤ-SFT given by its tileset graph.
//!
//! Closed-walk counts `tr(Aⁿ)` are computed per cyclic component: the first
//! `|V|` traces by sparse matrix powers, the rest by the Newton recurrence
//! from the characteristic polynomial. All arithmetic is exact.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::semilinear::{divisors, Progression, SemilinearSet};
use crate::tileset::{prune_essential, TilesetGraph};

/// Number of points fixed by the `n`-th shift power, for `n` in `1..=bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodCountTable {
    bound: u64,
    counts: Vec<BigUint>,
}

impl PeriodCountTable {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// `counts[n]`; panics when `n` is 0 or above the bound.
    pub fn get(&self, n: u64) -> &BigUint {
        assert!(n >= 1 && n <= self.bound, "period {n} outside table 1..={}", self.bound);
        &self.counts[(n - 1) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigUint)> {
        self.counts.iter().enumerate().map(|(i, c)| (i as u64 + 1, c))
    }

    /// Points whose least period is exactly `n` (Möbius inversion over the
    /// divisors of `n`).
    pub fn least_period_count(&self, n: u64) -> BigUint {
        let mut acc = BigInt::zero();
        for d in divisors(n) {
            match mobius(n / d) {
                1 => acc += BigInt::from(self.get(d).clone()),
                -1 => acc -= BigInt::from(self.get(d).clone()),
                _ => {}
            }
        }
        debug_assert!(!acc.is_negative());
        acc.to_biguint().unwrap_or_default()
    }
}

pub(crate) fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Traces of `Aⁿ` for `n` in `1..=bound` for a strongly connected graph.
fn component_traces(c: &TilesetGraph, bound: u64) -> Vec<BigInt> {
    let v = c.vertex_count();
    let bound = bound as usize;
    if c.edge_count() == v {
        // simple cycle of length v
        return (1..=bound)
            .map(|n| if n % v == 0 { BigInt::from(v) } else { BigInt::zero() })
            .collect();
    }
    let head = bound.min(v);
    let mut traces = Vec::with_capacity(bound);
    let mut power: Vec<Vec<BigUint>> = (0..v)
        .map(|i| (0..v).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect())
        .collect();
    let edges: Vec<(usize, usize)> = c.edges().iter().copied().collect();
    for _ in 0..head {
        power = power
            .par_iter()
            .map(|row| {
                let mut next = vec![BigUint::zero(); v];
                for &(k, j) in &edges {
                    if !row[k].is_zero() {
                        next[j] += &row[k];
                    }
                }
                next
            })
            .collect();
        let tr: BigUint = (0..v).map(|i| &power[i][i]).sum();
        traces.push(BigInt::from(tr));
    }
    if bound <= v {
        return traces;
    }
    // elementary symmetric functions of the eigenvalues via Newton's identities
    let mut e = vec![BigInt::one()];
    for k in 1..=v {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &traces[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        e.push(q);
    }
    for n in v + 1..=bound {
        let mut acc = BigInt::zero();
        for k in 1..=v {
            if e[k].is_zero() {
                continue;
            }
            let term = &e[k] * &traces[n - k - 1];
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        traces.push(acc);
    }
    traces
}

/// Closed-walk counts of lengths `1..=bound`.
pub fn count_periodic_points(g: &TilesetGraph, bound: u64) -> Result<PeriodCountTable> {
    if bound == 0 {
        return Err(Error::ZeroPeriod);
    }
    let comps = g.cyclic_components();
    let per_comp: Vec<Vec<BigInt>> = comps.par_iter().map(|c| component_traces(c, bound)).collect();
    let mut counts = vec![BigUint::zero(); bound as usize];
    for traces in per_comp {
        for (slot, t) in counts.iter_mut().zip(traces) {
            let (sign, mag) = t.into_parts();
            assert!(sign != Sign::Minus, "negative closed-walk count");
            *slot += mag;
        }
    }
    Ok(PeriodCountTable { bound, counts })
}

fn require_essential(g: &TilesetGraph) -> Result<()> {
    if g.is_empty() {
        return Err(Error::EmptySft);
    }
    if let Some(v) = g.first_inessential() {
        return Err(Error::NotEssential(v.to_string()));
    }
    Ok(())
}

/// Whether some configuration has trivial stabilizer, i.e. some strongly
/// connected component is more than a single simple cycle.
pub fn has_aperiodic_point(g: &TilesetGraph) -> Result<bool> {
    require_essential(g)?;
    Ok(g.cyclic_components().iter().any(|c| c.edge_count() > c.vertex_count()))
}

/// Whether some configuration has stabilizer exactly `pℤ`.
pub fn least_period_exists(g: &TilesetGraph, p: u64) -> Result<bool> {
    if p == 0 {
        return Err(Error::ZeroPeriod);
    }
    let table = count_periodic_points(g, p)?;
    Ok(!table.least_period_count(p).is_zero())
}

/// gcd of the cycle lengths of a strongly connected graph.
pub fn cycle_gcd(c: &TilesetGraph) -> u64 {
    let n = c.vertex_count();
    if n == 0 {
        return 0;
    }
    let succ = c.successors();
    let mut level = vec![i64::MIN; n];
    level[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &w in &succ[u] {
            if level[w] == i64::MIN {
                level[w] = level[u] + 1;
                queue.push_back(w);
            }
        }
    }
    c.edges()
        .iter()
        .fold(0u64, |acc, &(u, w)| acc.gcd(&(level[u] + 1 - level[w]).unsigned_abs()))
}

/// Smallest bound accepted by [`multiples`]: the maximum over components
/// that are not a single cycle of `|V_C|² + gcd of cycle lengths`.
pub fn structural_bound(g: &TilesetGraph) -> u64 {
    prune_essential(g)
        .cyclic_components()
        .iter()
        .filter(|c| c.edge_count() > c.vertex_count())
        .map(|c| (c.vertex_count() as u64).pow(2) + cycle_gcd(c))
        .max()
        .unwrap_or(1)
}

fn component_multiples(c: &TilesetGraph, bound: u64) -> Result<SemilinearSet> {
    let v = c.vertex_count() as u64;
    if c.edge_count() as u64 == v {
        return Ok(SemilinearSet::finite([v]));
    }
    let step = cycle_gcd(c);
    let traces = component_traces(c, bound);
    let table = PeriodCountTable {
        bound,
        counts: traces.into_iter().map(|t| t.to_biguint().expect("non-negative trace")).collect(),
    };
    let least: BTreeSet<u64> = (1..=bound).filter(|&n| !table.least_period_count(n).is_zero()).collect();
    // the tail must consist of every multiple of the cycle gcd
    let last_mismatch = (1..=bound)
        .rev()
        .find(|&n| least.contains(&n) != (n % step == 0))
        .unwrap_or(0);
    if bound - last_mismatch < step || last_mismatch >= v * v + step {
        return Err(Error::BoundTooSmall {
            given: bound,
            required: (last_mismatch + 2 * step).max(bound + step),
        });
    }
    let threshold = last_mismatch + 1;
    let finite: Vec<u64> = least.iter().copied().filter(|&n| n < threshold).collect();
    let start = threshold.div_ceil(step) * step;
    Ok(SemilinearSet::new(
        finite.into_iter().chain([0]),
        [Progression { start, step }],
    ))
}

/// The exact set `M(X_Γ)` of `p` such that some configuration has stabilizer
/// `pℤ` (0 standing for an aperiodic point), in normal form.
///
/// The input is pruned first. `bound` must be at least
/// [`structural_bound`]; the eventual periodicity is then certified inside
/// the window below `bound`.
pub fn multiples(g: &TilesetGraph, bound: u64) -> Result<SemilinearSet> {
    let pruned = prune_essential(g);
    if pruned.is_empty() {
        return Err(Error::EmptySft);
    }
    let required = structural_bound(&pruned);
    if bound < required {
        return Err(Error::BoundTooSmall { given: bound, required });
    }
    let parts: Vec<Result<SemilinearSet>> = pruned
        .cyclic_components()
        .par_iter()
        .map(|c| component_multiples(c, bound))
        .collect();
    let mut acc = SemilinearSet::empty();
    for part in parts {
        acc = acc.union(&part?);
    }
    Ok(acc)
}

/// A closed walk of exactly `n` edges, as its vertex sequence `v₀ … vₙ₋₁`.
pub fn closed_walk(g: &TilesetGraph, n: usize) -> Option<Vec<usize>> {
    if n == 0 {
        return None;
    }
    let v = g.vertex_count();
    let succ = g.successors();
    for start in 0..v {
        // reach[k][u]: u reachable from start in k steps
        let mut reach = vec![vec![false; v]; n + 1];
        reach[0][start] = true;
        for k in 0..n {
            for u in 0..v {
                if reach[k][u] {
                    for &w in &succ[u] {
                        reach[k + 1][w] = true;
                    }
                }
            }
        }
        if !reach[n][start] {
            continue;
        }
        let preds: Vec<Vec<usize>> = {
            let mut p = vec![Vec::new(); v];
            for &(a, b) in g.edges() {
                p[b].push(a);
            }
            p
        };
        let mut walk = vec![start; n];
        let mut cur = start;
        for k in (1..n).rev() {
            cur = *preds[cur].iter().find(|&&u| reach[k][u]).expect("backtrack");
            walk[k] = cur;
        }
        return Some(walk);
    }
    None
}

/// A shortest cycle (ties broken by lowest start vertex).
pub fn shortest_cycle(g: &TilesetGraph) -> Option<Vec<usize>> {
    let v = g.vertex_count();
    let succ = g.successors();
    let mut best: Option<Vec<usize>> = None;
    for start in 0..v {
        let mut parent = vec![usize::MAX; v];
        let mut dist = vec![usize::MAX; v];
        let mut queue = VecDeque::new();
        for &w in &succ[start] {
            if dist[w] == usize::MAX {
                dist[w] = 1;
                parent[w] = start;
                queue.push_back(w);
            }
        }
        let mut found = None;
        while let Some(u) = queue.pop_front() {
            if u == start {
                found = Some(dist[u]);
                break;
            }
            if best.as_ref().is_some_and(|b| dist[u] >= b.len()) {
                break;
            }
            for &w in &succ[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if let Some(len) = found {
            if best.as_ref().is_none_or(|b| len < b.len()) {
                let mut cycle = vec![start; len];
                let mut cur = parent[start];
                for k in (1..len).rev() {
                    cycle[k] = cur;
                    cur = parent[cur];
                }
                best = Some(cycle);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tileset::{product, union};

    fn gamma(p: usize) -> TilesetGraph {
        let labels: Vec<String> = (0..p).map(|i| format!("c{i}")).collect();
        TilesetGraph::new(labels, (0..p).map(|i| (i, (i + 1) % p))).unwrap()
    }

    fn counts(g: &TilesetGraph, bound: u64) -> Vec<u64> {
        let t = count_periodic_points(g, bound).unwrap();
        t.iter().map(|(_, c)| u64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn count_examples() {
        assert_eq!(counts(&gamma(3), 6), vec![0, 0, 3, 0, 0, 3]);
        assert_eq!(counts(&gamma(1), 4), vec![1, 1, 1, 1]);
        assert_eq!(counts(&TilesetGraph::full_shift(&["0", "1"]), 3), vec![2, 4, 8]);
    }

    #[test]
    fn newton_recurrence_past_vertex_count() {
        // golden mean shift: traces are Lucas numbers
        let g = TilesetGraph::from_labels(&["0", "1"], &[("0", "0"), ("0", "1"), ("1", "0")]).unwrap();
        assert_eq!(counts(&g, 10), vec![1, 3, 4, 7, 11, 18, 29, 47, 76, 123]);
    }

    #[test]
    fn large_counts_do_not_wrap() {
        let g = TilesetGraph::full_shift(&["0", "1"]);
        let t = count_periodic_points(&g, 100).unwrap();
        assert_eq!(t.get(100), &(BigUint::one() << 100usize));
    }

    #[test]
    fn aperiodic_point_examples() {
        assert!(!has_aperiodic_point(&gamma(3)).unwrap());
        assert!(has_aperiodic_point(&TilesetGraph::full_shift(&["0", "1"])).unwrap());
        let sink = TilesetGraph::from_labels(&["a", "b"], &[("a", "a"), ("a", "b")]).unwrap();
        assert_eq!(has_aperiodic_point(&sink), Err(Error::NotEssential("b".into())));
        assert_eq!(has_aperiodic_point(&TilesetGraph::empty()), Err(Error::EmptySft));
    }

    #[test]
    fn least_period_examples() {
        assert!(least_period_exists(&gamma(3), 3).unwrap());
        assert!(!least_period_exists(&gamma(3), 6).unwrap());
        assert!(least_period_exists(&TilesetGraph::full_shift(&["0", "1"]), 1).unwrap());
        let p = product(&gamma(2), &gamma(3)).unwrap();
        assert!(least_period_exists(&p, 6).unwrap());
        assert!(!least_period_exists(&p, 2).unwrap());
        assert_eq!(least_period_exists(&p, 0), Err(Error::ZeroPeriod));
    }

    #[test]
    fn multiples_examples() {
        let m = multiples(&gamma(5), 1).unwrap();
        assert_eq!(m, SemilinearSet::finite([5]));
        let u = union(&gamma(2), &gamma(3));
        assert_eq!(multiples(&u, 1).unwrap(), SemilinearSet::finite([2, 3]));
        assert_eq!(multiples(&union(&gamma(2), &gamma(2)), 1).unwrap(), SemilinearSet::finite([2]));
        assert_eq!(multiples(&TilesetGraph::empty(), 10), Err(Error::EmptySft));
    }

    #[test]
    fn multiples_of_product_with_full_shift() {
        let p = product(&gamma(2), &TilesetGraph::full_shift(&["0", "1"])).unwrap();
        let b = structural_bound(&p);
        assert_eq!(multiples(&p, b).unwrap(), "{0} + 2(N+1)".parse().unwrap());
    }

    #[test]
    fn bound_too_small_is_reported() {
        let g = TilesetGraph::full_shift(&["0", "1"]);
        assert_eq!(structural_bound(&g), 5);
        assert_eq!(multiples(&g, 4), Err(Error::BoundTooSmall { given: 4, required: 5 }));
        assert_eq!(multiples(&g, 5).unwrap(), "{0} + 1(N+1)".parse().unwrap());
    }

    #[test]
    fn cycle_gcd_of_bipartite_component() {
        let g = TilesetGraph::from_labels(&["a", "b", "c"], &[("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")]).unwrap();
        assert_eq!(cycle_gcd(&g), 2);
        assert_eq!(cycle_gcd(&gamma(7)), 7);
    }

    #[test]
    fn walks_and_cycles() {
        let g = TilesetGraph::full_shift(&["0", "1"]);
        let w = closed_walk(&g, 5).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(closed_walk(&gamma(3), 4), None);
        assert_eq!(closed_walk(&gamma(3), 6).unwrap(), vec![0, 1, 2, 0, 1, 2]);
        assert_eq!(shortest_cycle(&gamma(4)).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(shortest_cycle(&g).unwrap(), vec![0]);
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i32> = (1..=10).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
