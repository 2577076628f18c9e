//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use stablab::abelian::AbelianNnSft;
use stablab::z2::{Nn2Sft, TorusConfig};
use stablab::TilesetGraph;

pub fn successors(g: &TilesetGraph) -> Vec<Vec<usize>> {
    let mut s = vec![vec![]; g.vertex_count()];
    for &(a, b) in g.edges() {
        s[a].push(b);
    }
    s
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn primitive(w: &[usize]) -> bool {
    let n = w.len();
    divisors(n).into_iter().filter(|&d| d < n).all(|d| (0..n).any(|i| w[i] != w[(i + d) % n]))
}

/// Visits closed walks of length `n` (as vertex words) until `visit` returns true.
fn closed_walks(succ: &[Vec<usize>], n: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(succ: &[Vec<usize>], n: usize, w: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let last = *w.last().unwrap();
        if w.len() == n {
            return succ[last].contains(&w[0]) && visit(w);
        }
        for &b in &succ[last] {
            w.push(b);
            if go(succ, n, w, visit) {
                return true;
            }
            w.pop();
        }
        false
    }
    (0..succ.len()).any(|v| go(succ, n, &mut vec![v], visit))
}

/// Whether some cyclic word of length `p` has no smaller cyclic period.
pub fn least_period_exists(g: &TilesetGraph, p: usize) -> bool {
    closed_walks(&successors(g), p, &mut |w| primitive(w))
}

pub fn least_periods(g: &TilesetGraph, max: usize) -> BTreeSet<u64> {
    (1..=max).filter(|&p| least_period_exists(g, p)).map(|p| p as u64).collect()
}

/// Number of cyclic words of length `n`, by enumeration.
pub fn count_cyclic_words(g: &TilesetGraph, n: usize) -> u64 {
    let mut count = 0u64;
    closed_walks(&successors(g), n, &mut |_| {
        count += 1;
        false
    });
    count
}

/// `trace(Aⁿ)` for `n = 1..=max` by repeated sparse multiplication.
pub fn trace_counts(g: &TilesetGraph, max: usize) -> Vec<u128> {
    let v = g.vertex_count();
    let succ = successors(g);
    let mut m: Vec<Vec<u128>> = (0..v).map(|i| (0..v).map(|j| u128::from(i == j)).collect()).collect();
    let mut out = vec![0];
    for _ in 0..max {
        let mut next = vec![vec![0u128; v]; v];
        for (i, row) in m.iter().enumerate() {
            for (k, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for &j in &succ[k] {
                    next[i][j] = next[i][j].checked_add(x).expect("walk count overflow");
                }
            }
        }
        m = next;
        out.push((0..v).map(|i| m[i][i]).sum());
    }
    out
}

fn mu(mut n: usize) -> i128 {
    let mut r = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            r = -r;
        }
        d += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

/// Least periods up to `max`, by Möbius inversion of `trace_counts`.
pub fn least_periods_by_trace(g: &TilesetGraph, max: usize) -> BTreeSet<u64> {
    let c = trace_counts(g, max);
    (1..=max)
        .filter(|&n| divisors(n).into_iter().map(|d| mu(n / d) * c[d] as i128).sum::<i128>() > 0)
        .map(|n| n as u64)
        .collect()
}

/// Validity of a configuration on the finite quotient `∏ ℤ/sizes[k]` of the
/// group of `x`, stored with the first coordinate varying fastest.
pub fn valid_on_box(x: &AbelianNnSft, sizes: &[usize], cfg: &[usize]) -> bool {
    let total: usize = sizes.iter().product();
    assert_eq!(cfg.len(), total);
    (0..total).all(|cell| {
        let here = unflatten(sizes, cell);
        x.patterns().iter().all(|p| {
            if cfg[cell] != p.a {
                return true;
            }
            let there: Vec<i64> = here.iter().zip(&p.offset).map(|(c, o)| c + o).collect();
            cfg[flatten(sizes, &there)] != p.b
        })
    })
}

pub fn unflatten(sizes: &[usize], mut cell: usize) -> Vec<i64> {
    sizes
        .iter()
        .map(|&s| {
            let c = cell % s;
            cell /= s;
            c as i64
        })
        .collect()
}

pub fn flatten(sizes: &[usize], coords: &[i64]) -> usize {
    let mut idx = 0;
    for (k, &s) in sizes.iter().enumerate().rev() {
        idx = idx * s + coords[k].rem_euclid(s as i64) as usize;
    }
    idx
}

/// Every assignment of `letters` letters to `cells` cells.
pub fn assignments(letters: usize, cells: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = letters.pow(cells as u32);
    (0..total).map(move |mut k| {
        (0..cells)
            .map(|_| {
                let d = k % letters;
                k /= letters;
                d
            })
            .collect()
    })
}

/// Nearest-neighbor ℤ² validity of a torus, checked cell by cell.
pub fn nn2_valid(sft: &Nn2Sft, cfg: &TorusConfig) -> bool {
    let (p, q) = (cfg.p(), cfg.q());
    let c = cfg.cells();
    (0..p).all(|i| {
        (0..q).all(|j| {
            !sft.h_forbidden().contains(&(c[i][j], c[(i + 1) % p][j]))
                && !sft.v_forbidden().contains(&(c[i][j], c[i][(j + 1) % q]))
        })
    })
}

/// Whether some valid `w × h` torus (w, h ≤ max) is fixed by `(a, b)`.
pub fn small_torus_fixed_by(sft: &Nn2Sft, a: i64, b: i64, max: usize) -> bool {
    let n = sft.letter_count();
    (1..=max).any(|w| {
        (1..=max).any(|h| {
            assignments(n, w * h).any(|flat| {
                let cfg = TorusConfig::from_fn(w, h, |i, j| flat[j * w + i]).unwrap();
                cfg.fixed_by(a, b) && nn2_valid(sft, &cfg)
            })
        })
    })
}
