use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::sft::Nn2Sft;
use crate::error::{Error, Result};

/// A `p × q` array read as the configuration `x(i,j) = cells[i mod p][j mod q]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusConfig {
    p: usize,
    q: usize,
    cells: Vec<Vec<usize>>,
}

impl TorusConfig {
    /// `cells[i][j]` with `i` horizontal, `j` vertical.
    pub fn new(cells: Vec<Vec<usize>>) -> Result<Self> {
        let p = cells.len();
        let q = cells.first().map_or(0, Vec::len);
        if p == 0 || q == 0 {
            return Err(Error::DimensionMismatch("torus must be at least 1x1".into()));
        }
        if cells.iter().any(|col| col.len() != q) {
            return Err(Error::DimensionMismatch("columns of unequal height".into()));
        }
        Ok(TorusConfig { p, q, cells })
    }

    /// Builds a torus from a function of the fundamental-domain coordinates.
    pub fn from_fn(p: usize, q: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        TorusConfig::new((0..p).map(|i| (0..q).map(|j| f(i, j)).collect()).collect())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// `x(i,j)` for arbitrary integer coordinates.
    pub fn at(&self, i: i64, j: i64) -> usize {
        self.cells[i.rem_euclid(self.p as i64) as usize][j.rem_euclid(self.q as i64) as usize]
    }

    /// Whether shifting by `(a,b)` fixes the configuration.
    pub fn fixed_by(&self, a: i64, b: i64) -> bool {
        (0..self.p as i64).all(|i| (0..self.q as i64).all(|j| self.at(i + a, j + b) == self.at(i, j)))
    }

    pub fn to_witness(&self, sft: &Nn2Sft) -> Witness {
        Witness {
            p: self.p,
            q: self.q,
            rows: (0..self.q)
                .map(|j| (0..self.p).map(|i| sft.alphabet()[self.cells[i][j]].clone()).collect())
                .collect(),
        }
    }

    pub fn from_witness(sft: &Nn2Sft, w: &Witness) -> Result<Self> {
        if w.rows.len() != w.q || w.rows.iter().any(|r| r.len() != w.p) {
            return Err(Error::DimensionMismatch(format!("witness rows do not form a {}x{} array", w.p, w.q)));
        }
        let mut cells = vec![vec![0; w.q]; w.p];
        for (j, row) in w.rows.iter().enumerate() {
            for (i, label) in row.iter().enumerate() {
                cells[i][j] = sft
                    .index_of(label)
                    .ok_or_else(|| Error::parse(0, format!("unknown letter `{label}` in witness")))?;
            }
        }
        TorusConfig::new(cells)
    }
}

/// JSON form of a torus: `rows[j]` lists the labels of row `j` left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub p: usize,
    pub q: usize,
    pub rows: Vec<Vec<String>>,
}

impl Witness {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// A forbidden pair found at `(i,j)` and its right (or upper) neighbor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub direction: Direction,
    pub pair: (String, String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
        };
        write!(f, "({},{}) {dir}: {} {}", self.i, self.j, self.pair.0, self.pair.1)
    }
}

/// All forbidden pairs in the wrapped configuration.
pub fn check_torus(sft: &Nn2Sft, cfg: &TorusConfig) -> Result<Vec<Violation>> {
    let n = sft.letter_count();
    if let Some(&bad) = cfg.cells.iter().flatten().find(|&&c| c >= n) {
        return Err(Error::DimensionMismatch(format!("cell letter {bad} outside an alphabet of {n}")));
    }
    let label = |c: usize| sft.alphabet()[c].clone();
    let mut out = Vec::new();
    for j in 0..cfg.q {
        for i in 0..cfg.p {
            let here = cfg.cells[i][j];
            let right = cfg.cells[(i + 1) % cfg.p][j];
            if !sft.h_allowed(here, right) {
                out.push(Violation { i, j, direction: Direction::Horizontal, pair: (label(here), label(right)) });
            }
            let up = cfg.cells[i][(j + 1) % cfg.q];
            if !sft.v_allowed(here, up) {
                out.push(Violation { i, j, direction: Direction::Vertical, pair: (label(here), label(up)) });
            }
        }
    }
    Ok(out)
}

/// Backtracking fill of a `w × h` rectangle, row by row, letters in alphabet
/// order. With `wrap` the rectangle is a torus.
fn fill(sft: &Nn2Sft, w: usize, h: usize, wrap: bool) -> Option<Vec<Vec<usize>>> {
    let n = sft.letter_count();
    if n == 0 || w == 0 || h == 0 {
        return None;
    }
    let total = w * h;
    let mut cells = vec![usize::MAX; total];
    let mut next = vec![0usize; total];
    let ok = |cells: &[usize], k: usize, c: usize| {
        let (i, j) = (k % w, k / w);
        if i > 0 && !sft.h_allowed(cells[k - 1], c) {
            return false;
        }
        if wrap && i == w - 1 {
            let first = if i == 0 { c } else { cells[j * w] };
            if !sft.h_allowed(c, first) {
                return false;
            }
        }
        if j > 0 && !sft.v_allowed(cells[k - w], c) {
            return false;
        }
        if wrap && j == h - 1 {
            let bottom = if j == 0 { c } else { cells[i] };
            if !sft.v_allowed(c, bottom) {
                return false;
            }
        }
        true
    };
    let mut k = 0;
    loop {
        let mut placed = false;
        while next[k] < n {
            let c = next[k];
            next[k] += 1;
            if ok(&cells, k, c) {
                cells[k] = c;
                placed = true;
                break;
            }
        }
        if placed {
            k += 1;
            if k == total {
                return Some((0..w).map(|i| (0..h).map(|j| cells[j * w + i]).collect()).collect());
            }
            next[k] = 0;
        } else {
            cells[k] = usize::MAX;
            if k == 0 {
                return None;
            }
            k -= 1;
        }
    }
}

/// First valid `p × q` torus in row-major lexicographic order, if any.
pub fn search_torus(sft: &Nn2Sft, p: usize, q: usize) -> Option<TorusConfig> {
    let cells = fill(sft, p, q, true)?;
    let cfg = TorusConfig::new(cells).expect("non-empty torus");
    debug_assert!(check_torus(sft, &cfg).unwrap().is_empty());
    Some(cfg)
}

/// Whether some `size × size` square (no wraparound) avoids every forbidden
/// pair. Failure certifies that the SFT is empty.
pub fn locally_valid_square(sft: &Nn2Sft, size: usize) -> bool {
    fill(sft, size, size, false).is_some()
}

/// A sublattice of ℤ² in Hermite normal form, with basis rows `(a,0)` and
/// `(b,d)`, `a,d > 0`, `0 ≤ b < a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice2 {
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

impl Lattice2 {
    pub fn basis(&self) -> [[i64; 2]; 2] {
        [[self.a, 0], [self.b, self.d]]
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        y.rem_euclid(self.d) == 0 && (x - (y / self.d) * self.b).rem_euclid(self.a) == 0
    }

    pub fn index(&self) -> i64 {
        self.a * self.d
    }

    /// Lattice of all `(x,y)` satisfying `member`, which must describe a
    /// subgroup containing `(w,0)` and `(0,h)`.
    pub fn from_predicate(w: usize, h: usize, member: impl Fn(i64, i64) -> bool) -> Lattice2 {
        let (w, h) = (w as i64, h as i64);
        let a = (1..=w).find(|&x| member(x, 0)).unwrap_or(w);
        let (b, d) = (1..=h)
            .find_map(|y| (0..a).find(|&x| member(x, y)).map(|x| (x, y)))
            .unwrap_or((0, h));
        Lattice2 { a, b, d }
    }
}

impl Serialize for Lattice2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis().serialize(s)
    }
}

impl fmt::Display for Lattice2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<({},0), ({},{})>", self.a, self.b, self.d)
    }
}

/// Exact stabilizer of a doubly periodic configuration.
pub fn stabilizer_lattice(cfg: &TorusConfig) -> Lattice2 {
    Lattice2::from_predicate(cfg.p, cfg.q, |x, y| cfg.fixed_by(x, y))
}

/// Intersection of the stabilizers of several tori (the part of the kernel
/// visible from these witnesses).
pub fn kernel_of_witnesses(cfgs: &[TorusConfig]) -> Option<Lattice2> {
    if cfgs.is_empty() {
        return None;
    }
    let w = cfgs.iter().fold(1usize, |acc, c| acc.lcm(&c.p));
    let h = cfgs.iter().fold(1usize, |acc, c| acc.lcm(&c.q));
    Some(Lattice2::from_predicate(w, h, |x, y| cfgs.iter().all(|c| c.fixed_by(x, y))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checkerboard() -> Nn2Sft {
        Nn2Sft::from_labels(&["a", "b"], &[("a", "a"), ("b", "b")], &[("a", "a"), ("b", "b")]).unwrap()
    }

    #[test]
    fn check_examples() {
        let full = Nn2Sft::full_shift(&["a", "b"]);
        let cfg = TorusConfig::from_fn(3, 2, |i, j| (i * j) % 2).unwrap();
        assert!(check_torus(&full, &cfg).unwrap().is_empty());

        let no_aa = Nn2Sft::from_labels(&["a"], &[("a", "a")], &[]).unwrap();
        let one = TorusConfig::new(vec![vec![0]]).unwrap();
        let v = check_torus(&no_aa, &one).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].i, v[0].j, v[0].direction), (0, 0, Direction::Horizontal));

        let board = TorusConfig::from_fn(2, 2, |i, j| (i + j) % 2).unwrap();
        assert!(check_torus(&checkerboard(), &board).unwrap().is_empty());
        let bad = TorusConfig::new(vec![vec![0], vec![5]]).unwrap();
        assert!(matches!(check_torus(&checkerboard(), &bad), Err(Error::DimensionMismatch(_))));
        assert!(TorusConfig::new(vec![vec![0, 1], vec![0]]).is_err());
    }

    #[test]
    fn search_examples() {
        let s = checkerboard();
        let found = search_torus(&s, 2, 2).unwrap();
        assert_eq!(found, TorusConfig::from_fn(2, 2, |i, j| (i + j) % 2).unwrap());
        assert_eq!(search_torus(&s, 1, 1), None);
        assert_eq!(search_torus(&s, 3, 3), None);
        assert!(search_torus(&s, 4, 2).is_some());
    }

    #[test]
    fn square_certificate() {
        let empty = Nn2Sft::from_labels(&["a"], &[("a", "a")], &[("a", "a")]).unwrap();
        assert!(locally_valid_square(&empty, 1));
        assert!(!locally_valid_square(&empty, 2));
        assert!(locally_valid_square(&checkerboard(), 5));
    }

    #[test]
    fn lattice_examples() {
        let one = TorusConfig::new(vec![vec![0]]).unwrap();
        assert_eq!(stabilizer_lattice(&one).basis(), [[1, 0], [0, 1]]);
        let board = TorusConfig::from_fn(2, 2, |i, j| (i + j) % 2).unwrap();
        assert_eq!(stabilizer_lattice(&board).basis(), [[2, 0], [1, 1]]);
        let ab = TorusConfig::new(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(stabilizer_lattice(&ab).basis(), [[2, 0], [0, 1]]);
    }

    #[test]
    fn lattice_matches_shift_enumeration() {
        // every 0/1 torus up to 3x3
        for p in 1..=3usize {
            for q in 1..=3usize {
                for bits in 0u32..(1 << (p * q)) {
                    let cfg = TorusConfig::from_fn(p, q, |i, j| ((bits >> (j * p + i)) & 1) as usize).unwrap();
                    let l = stabilizer_lattice(&cfg);
                    for x in -4..=4 {
                        for y in -4..=4 {
                            assert_eq!(l.contains(x, y), cfg.fixed_by(x, y), "{cfg:?} ({x},{y})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_is_intersection() {
        let board = TorusConfig::from_fn(2, 2, |i, j| (i + j) % 2).unwrap();
        let stripes = TorusConfig::new(vec![vec![0], vec![1]]).unwrap();
        let k = kernel_of_witnesses(&[board, stripes]).unwrap();
        assert_eq!(k.basis(), [[2, 0], [0, 2]]);
    }

    #[test]
    fn witness_json_round_trip() {
        let s = checkerboard();
        let cfg = TorusConfig::from_fn(2, 1, |i, _| i).unwrap();
        let w = cfg.to_witness(&s);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"p":2,"q":1,"rows":[["a","b"]]}"#);
        let back: Witness = serde_json::from_str(&json).unwrap();
        assert_eq!(TorusConfig::from_witness(&s, &back).unwrap(), cfg);
    }
}
