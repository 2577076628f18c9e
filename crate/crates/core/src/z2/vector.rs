//! Configurations stabilized by a single vector, as walks on a 1-D graph.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::sft::Nn2Sft;
use super::torus::{check_torus, TorusConfig};
use crate::error::{Error, Result};
use crate::periods::shortest_cycle;
use crate::tileset::{prune_essential, TilesetGraph};

/// A nonzero vector of ℤ², canonicalized so that `q > 0`, or `q = 0` and `p > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PeriodVector {
    p: i64,
    q: i64,
}

impl PeriodVector {
    /// Canonical representative of `±(p,q)`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidVector("(0,0) stabilizes everything".into()));
        }
        if q < 0 || (q == 0 && p < 0) {
            Ok(PeriodVector { p: -p, q: -q })
        } else {
            Ok(PeriodVector { p, q })
        }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_primitive(&self) -> bool {
        self.p.gcd(&self.q) == 1
    }

    /// Canonical vectors with `|p| ≤ max_p` and `0 ≤ q ≤ max_q`, ordered by `(q, |p|, p)`.
    pub fn enumerate(max_p: i64, max_q: i64) -> Vec<PeriodVector> {
        let mut out = Vec::new();
        for q in 0..=max_q {
            for p in -max_p..=max_p {
                if (q == 0 && p <= 0) || (p == 0 && q == 0) {
                    continue;
                }
                out.push(PeriodVector { p, q });
            }
        }
        out.sort_by_key(|v| (v.q, v.p.abs(), v.p));
        out
    }
}

impl fmt::Display for PeriodVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl std::str::FromStr for PeriodVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidVector(format!("expected `p,q`, got `{s}`")))?;
        let num = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| Error::InvalidVector(format!("`{t}`: {e}")))
        };
        PeriodVector::new(num(a)?, num(b)?)
    }
}

/// The vertices of the reduction: `w × h` blocks stored as `block[c][r]`.
struct Reduction {
    graph: TilesetGraph,
    blocks: Vec<Vec<Vec<usize>>>,
    width: usize,
    height: usize,
}

fn all_blocks(n: usize, w: usize, h: usize, valid: impl Fn(&[Vec<usize>]) -> bool) -> Vec<Vec<Vec<usize>>> {
    let cells = w * h;
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut digits = vec![0usize; cells];
    loop {
        let block: Vec<Vec<usize>> = (0..w).map(|c| (0..h).map(|r| digits[c * h + r]).collect()).collect();
        if valid(&block) {
            out.push(block);
        }
        let mut k = cells;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < n {
                break;
            }
            digits[k] = 0;
        }
    }
}

fn block_label(sft: &Nn2Sft, block: &[Vec<usize>]) -> String {
    let h = block[0].len();
    (0..h)
        .map(|r| block.iter().map(|col| sft.alphabet()[col[r]].as_str()).collect::<Vec<_>>().join("."))
        .collect::<Vec<_>>()
        .join("/")
}

fn reduce(sft: &Nn2Sft, v: PeriodVector) -> Reduction {
    let n = sft.letter_count();
    let (p, q) = (v.p, v.q);
    let (w, h) = if q == 0 { (p as usize, 1) } else { (p.unsigned_abs().max(1) as usize, q as usize) };
    let blocks = all_blocks(n, w, h, |b| {
        for c in 0..w {
            for r in 0..h {
                if c + 1 < w && !sft.h_allowed(b[c][r], b[c + 1][r]) {
                    return false;
                }
                if r + 1 < h && !sft.v_allowed(b[c][r], b[c][r + 1]) {
                    return false;
                }
            }
        }
        if q == 0 {
            // a row repeating with period p
            (0..w).all(|c| sft.h_allowed(b[c][0], b[(c + 1) % w][0]))
        } else if p == 0 {
            // x(0,q) = x(0,0)
            sft.v_allowed(b[0][h - 1], b[0][0])
        } else {
            true
        }
    });
    let compatible = |b: &[Vec<usize>], b2: &[Vec<usize>]| -> bool {
        if q == 0 {
            return (0..w).all(|c| sft.v_allowed(b[c][0], b2[c][0]));
        }
        if !(0..h).all(|r| sft.h_allowed(b[w - 1][r], b2[0][r])) {
            return false;
        }
        match p.signum() {
            // x(i,q) = x(i-p,0): the top row of one block sits under the bottom
            // row of its horizontal neighbor
            1 => (0..w).all(|c| sft.v_allowed(b2[c][h - 1], b[c][0])),
            -1 => (0..w).all(|c| sft.v_allowed(b[c][h - 1], b2[c][0])),
            _ => true,
        }
    };
    let mut edges = Vec::new();
    for (x, b) in blocks.iter().enumerate() {
        for (y, b2) in blocks.iter().enumerate() {
            if compatible(b, b2) {
                edges.push((x, y));
            }
        }
    }
    let mut labels: Vec<String> = blocks.iter().map(|b| block_label(sft, b)).collect();
    if labels.iter().collect::<std::collections::HashSet<_>>().len() < labels.len() {
        // letters containing the separators; fall back to numbered blocks
        labels = (0..blocks.len()).map(|k| format!("b{k}")).collect();
    }
    let graph = TilesetGraph::new(labels, edges).expect("block labels are distinct");
    Reduction { graph, blocks, width: w, height: h }
}

/// One-dimensional tileset graph whose bi-infinite walks correspond to the
/// configurations stabilized by `v`.
///
/// For `v = (p,0)` the vertices are width-`p` rows (cyclically valid) and walks
/// go upward. Otherwise the strip `ℤ × [0,q)` is cut into blocks of width
/// `max(|p|,1)` and walks go rightward, with row `q` identified with row 0
/// shifted by `p`.
pub fn period_vector_graph(sft: &Nn2Sft, v: PeriodVector) -> TilesetGraph {
    reduce(sft, v).graph
}

/// A doubly periodic configuration stabilized by `v`, built from a shortest
/// cycle of the reduction; `None` iff no configuration is stabilized by `v`.
///
/// For `v = (p,0)` the torus is `p × m` with `m ≤ |A|^p`.
pub fn periodize(sft: &Nn2Sft, v: PeriodVector) -> Option<TorusConfig> {
    let red = reduce(sft, v);
    let pruned = prune_essential(&red.graph);
    let cycle = shortest_cycle(&pruned)?;
    let block = |k: usize| {
        let label = &pruned.alphabet()[cycle[k]];
        let orig = red.graph.index_of(label).expect("pruned vertex");
        &red.blocks[orig]
    };
    let m = cycle.len();
    let cfg = if v.q == 0 {
        TorusConfig::from_fn(red.width, m, |i, j| block(j)[i][0])
    } else {
        let strip_w = m * red.width;
        let h = red.height;
        let t = if v.p == 0 { 1 } else { strip_w / strip_w.gcd(&(v.p.unsigned_abs() as usize)) };
        let strip = |i: usize, r: usize| block(i / red.width)[i % red.width][r];
        TorusConfig::from_fn(strip_w, t * h, |i, j| {
            let (s, r) = (j / h, j % h);
            let col = (i as i64 - s as i64 * v.p).rem_euclid(strip_w as i64) as usize;
            strip(col, r)
        })
    }
    .expect("non-empty torus");
    assert!(check_torus(sft, &cfg).expect("letters in range").is_empty(), "periodization produced an invalid torus");
    assert!(cfg.fixed_by(v.p, v.q), "periodization lost the stabilizing vector");
    Some(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::z2::torus::stabilizer_lattice;

    fn checkerboard() -> Nn2Sft {
        Nn2Sft::from_labels(&["a", "b"], &[("a", "a"), ("b", "b")], &[("a", "a"), ("b", "b")]).unwrap()
    }

    #[test]
    fn canonical_vectors() {
        assert_eq!(PeriodVector::new(2, -1).unwrap(), PeriodVector::new(-2, 1).unwrap());
        assert_eq!(PeriodVector::new(-3, 0).unwrap().p(), 3);
        assert!(PeriodVector::new(0, 0).is_err());
        assert_eq!("1,0".parse::<PeriodVector>().unwrap(), PeriodVector::new(1, 0).unwrap());
        assert_eq!("(-1,-2)".parse::<PeriodVector>().unwrap(), PeriodVector::new(1, 2).unwrap());
        let vs = PeriodVector::enumerate(1, 1);
        let shown: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        assert_eq!(shown, ["(1,0)", "(0,1)", "(-1,1)", "(1,1)"]);
    }

    #[test]
    fn graph_examples() {
        let full = Nn2Sft::full_shift(&["a", "b"]);
        let g = period_vector_graph(&full, PeriodVector::new(1, 0).unwrap());
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 4);
        let board = checkerboard();
        assert!(prune_essential(&period_vector_graph(&board, PeriodVector::new(1, 0).unwrap())).is_empty());
        assert!(!prune_essential(&period_vector_graph(&board, PeriodVector::new(1, 1).unwrap())).is_empty());
    }

    #[test]
    fn periodize_examples() {
        let full = Nn2Sft::full_shift(&["a", "b"]);
        let t = periodize(&full, PeriodVector::new(1, 0).unwrap()).unwrap();
        assert_eq!((t.p(), t.q()), (1, 1));
        let board = checkerboard();
        let t = periodize(&board, PeriodVector::new(2, 0).unwrap()).unwrap();
        assert_eq!(t.p(), 2);
        assert!(t.q() <= 4);
        assert_eq!(periodize(&board, PeriodVector::new(1, 0).unwrap()), None);
        let t = periodize(&board, PeriodVector::new(-1, 1).unwrap()).unwrap();
        assert!(stabilizer_lattice(&t).contains(-1, 1));
    }

    #[test]
    fn twisted_constraint_direction() {
        // rows alternate a/b and `a` may not sit on top of `b`
        let s = Nn2Sft::from_labels(&["a", "b"], &[("a", "a"), ("b", "b")], &[("b", "a")]).unwrap();
        for v in PeriodVector::enumerate(2, 2) {
            let nonempty = !prune_essential(&period_vector_graph(&s, v)).is_empty();
            let brute = (1..=4).any(|k| {
                (1..=3).any(|m| {
                    let w = k * v.p().unsigned_abs().max(1) as usize;
                    let h = m * v.q().max(1) as usize;
                    if w * h > 12 {
                        return false;
                    }
                    all_tori(&s, w, h).iter().any(|c| c.fixed_by(v.p(), v.q()))
                })
            });
            assert_eq!(nonempty, brute, "{v}");
        }
    }

    fn all_tori(s: &Nn2Sft, w: usize, h: usize) -> Vec<TorusConfig> {
        let n = s.letter_count();
        let mut out = Vec::new();
        for code in 0..n.pow((w * h) as u32) {
            let cfg = TorusConfig::from_fn(w, h, |i, j| code / n.pow((j * w + i) as u32) % n).unwrap();
            if check_torus(s, &cfg).unwrap().is_empty() {
                out.push(cfg);
            }
        }
        out
    }
}
