//! Integer lattices: Hermite and Smith normal forms, subgroups of ℤᵈ and
//! quotient maps ℤᵈ → ℤᵈ/N with a canonical section.

use super::group::FgAbelianGroup;
use crate::error::{Error, Result};

type Matrix = Vec<Vec<i64>>;

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn row_sub(m: &mut Matrix, dst: usize, src: usize, q: i64) {
    if q == 0 {
        return;
    }
    for j in 0..m[dst].len() {
        let s = m[src][j];
        m[dst][j] -= q * s;
    }
}

fn col_sub(m: &mut Matrix, dst: usize, src: usize, q: i64) {
    if q == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[dst] -= q * row[src];
    }
}

fn col_swap(m: &mut Matrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Row Hermite normal form. Returns `(h, t)` with `t·a = h`, `t`
/// unimodular, `h` in row echelon form with positive pivots, entries above
/// each pivot in `[0, pivot)` and zero rows last.
pub fn hnf(a: &[Vec<i64>], ncols: usize) -> (Matrix, Matrix) {
    let m = a.len();
    let mut h: Matrix = a.to_vec();
    let mut t = identity(m);
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m).filter(|&i| h[i][c] != 0).min_by_key(|&i| h[i][c].abs());
            let Some(piv) = piv else { break };
            h.swap(r, piv);
            t.swap(r, piv);
            let mut done = true;
            for i in r + 1..m {
                if h[i][c] != 0 {
                    let q = h[i][c].div_euclid(h[r][c]);
                    row_sub(&mut h, i, r, q);
                    row_sub(&mut t, i, r, q);
                    if h[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c] == 0 {
            continue;
        }
        if h[r][c] < 0 {
            for x in h[r].iter_mut() {
                *x = -*x;
            }
            for x in t[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let q = h[i][c].div_euclid(h[r][c]);
            row_sub(&mut h, i, r, q);
            row_sub(&mut t, i, r, q);
        }
        r += 1;
    }
    (h, t)
}

/// Smith normal form by row and column operations, tracking the column
/// transform. Returns `(diag, u)` with `p·a·u = diag(d₁,…,d_r,0,…)` for some
/// unimodular `p`, `d₁ | d₂ | …`, all `dᵢ > 0`.
pub fn smith_columns(a: &[Vec<i64>], ncols: usize) -> (Vec<i64>, Matrix) {
    let m = a.len();
    let mut s: Matrix = a.to_vec();
    let mut u = identity(ncols);
    let mut diag = Vec::new();
    for t in 0..m.min(ncols) {
        'pivot: loop {
            let best = (t..m)
                .flat_map(|i| (t..ncols).map(move |j| (i, j)))
                .filter(|&(i, j)| s[i][j] != 0)
                .min_by_key(|&(i, j)| s[i][j].abs());
            let Some((pi, pj)) = best else { return (diag, u) };
            s.swap(t, pi);
            col_swap(&mut s, t, pj);
            col_swap(&mut u, t, pj);
            let mut clean = true;
            for i in t + 1..m {
                let q = s[i][t].div_euclid(s[t][t]);
                row_sub(&mut s, i, t, q);
                clean &= s[i][t] == 0;
            }
            for j in t + 1..ncols {
                let q = s[t][j].div_euclid(s[t][t]);
                col_sub(&mut s, j, t, q);
                col_sub(&mut u, j, t, q);
                clean &= s[t][j] == 0;
            }
            if !clean {
                continue;
            }
            for i in t + 1..m {
                for j in t + 1..ncols {
                    if s[i][j] % s[t][t] != 0 {
                        // fold the offending row in and start over
                        let row = s[i].clone();
                        for (x, y) in s[t].iter_mut().zip(row) {
                            *x += y;
                        }
                        continue 'pivot;
                    }
                }
            }
            break;
        }
        diag.push(s[t][t].abs());
    }
    (diag, u)
}

fn vec_mat(x: &[i64], m: &Matrix) -> Vec<i64> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| x.iter().zip(m).map(|(a, row)| a * row[j]).sum()).collect()
}

/// A subgroup of ℤᵈ given by generators, with its HNF basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupLattice {
    dim: usize,
    generators: Vec<Vec<i64>>,
    basis: Vec<Vec<i64>>,
}

impl SubgroupLattice {
    pub fn new(dim: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != dim) {
            return Err(Error::Group(format!("generator of the wrong dimension for Z^{dim}")));
        }
        let (h, _) = hnf(&generators, dim);
        let basis = h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
        Ok(SubgroupLattice { dim, generators, basis })
    }

    /// `mℤ ≤ ℤ` or more generally `m·ℤᵈ`.
    pub fn scaled(dim: usize, m: i64) -> Result<Self> {
        SubgroupLattice::new(dim, (0..dim).map(|i| (0..dim).map(|j| if i == j { m } else { 0 }).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// HNF basis rows.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn is_finite_index(&self) -> bool {
        self.basis.len() == self.dim
    }

    pub fn index(&self) -> Option<u64> {
        self.is_finite_index()
            .then(|| self.basis.iter().enumerate().map(|(i, r)| r[i] as u64).product())
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for row in &self.basis {
            let c = row.iter().position(|&x| x != 0).expect("nonzero basis row");
            let q = v[c].div_euclid(row[c]);
            for (x, y) in v.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Componentwise residues `0 ≤ vᵢ < hᵢᵢ`, in lexicographic order; as many
    /// as the index.
    pub fn coset_transversal(&self) -> Result<Vec<Vec<i64>>> {
        if !self.is_finite_index() {
            return Err(Error::Group("subgroup has infinite index".into()));
        }
        let sides: Vec<i64> = (0..self.dim).map(|i| self.basis[i][i]).collect();
        let mut out = vec![Vec::new()];
        for &s in &sides {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..s).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Coordinates of a lattice element in the HNF basis.
    pub fn coordinates(&self, v: &[i64]) -> Result<Vec<i64>> {
        if !self.is_finite_index() {
            return Err(Error::Group("subgroup has infinite index".into()));
        }
        let mut v = v.to_vec();
        let mut c = vec![0; self.dim];
        for (i, row) in self.basis.iter().enumerate() {
            if v[i] % row[i] != 0 {
                return Err(Error::Group(format!("{v:?} is not in the lattice")));
            }
            c[i] = v[i] / row[i];
            for (x, y) in v.iter_mut().zip(row) {
                *x -= c[i] * y;
            }
        }
        if v.iter().any(|&x| x != 0) {
            return Err(Error::Group("vector is not in the lattice".into()));
        }
        Ok(c)
    }
}

/// The quotient map `π: ℤᵈ → ℤᵈ/N` onto invariant-factor coordinates, with
/// the section `ρ` sending each class to the preimage whose torsion
/// coordinates are least nonnegative residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    ambient_dim: usize,
    generators: Vec<Vec<i64>>,
    target: FgAbelianGroup,
    /// column transform; columns ordered killed, torsion, free
    u: Matrix,
    u_inv: Matrix,
    killed: usize,
}

impl Quotient {
    pub fn new(ambient_dim: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != ambient_dim) {
            return Err(Error::Group(format!("generator of the wrong dimension for Z^{ambient_dim}")));
        }
        let d = ambient_dim;
        let (diag, mut u) = smith_columns(&generators, d);
        let killed = diag.iter().take_while(|&&x| x == 1).count();
        let torsion: Vec<u64> = diag[killed..].iter().map(|&x| x as u64).collect();
        let r = diag.len();
        let f = d - r;
        // free block: bring the functionals into Hermite form
        if f > 0 {
            let block: Matrix = (r..d).map(|j| (0..d).map(|i| u[i][j]).collect()).collect();
            let (h, _) = hnf(&block, d);
            for (k, row) in h.iter().enumerate() {
                for i in 0..d {
                    u[i][r + k] = row[i];
                }
            }
            // reduce the other columns against the free pivots
            for k in 0..f {
                let Some(p) = h[k].iter().position(|&x| x != 0) else { continue };
                for j in 0..r {
                    let q = u[p][j].div_euclid(h[k][p]);
                    col_sub(&mut u, j, r + k, q);
                }
            }
        }
        for j in 0..r {
            if let Some(&first) = (0..d).map(|i| &u[i][j]).find(|&&x| x != 0) {
                if first < 0 {
                    for row in u.iter_mut() {
                        row[j] = -row[j];
                    }
                }
            }
        }
        let (h, t) = hnf(&u, d);
        assert_eq!(h, identity(d), "column transform must stay unimodular");
        let target = FgAbelianGroup::new(f, torsion)?;
        Ok(Quotient { ambient_dim, generators, target, u, u_inv: t, killed })
    }

    pub fn ambient(&self) -> FgAbelianGroup {
        FgAbelianGroup::free(self.ambient_dim)
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    /// `π(x)`.
    pub fn project(&self, x: &[i64]) -> Vec<i64> {
        let y = vec_mat(x, &self.u);
        let r = self.killed + self.target.torsion().len();
        let mut out: Vec<i64> = y[r..].to_vec();
        out.extend_from_slice(&y[self.killed..r]);
        self.target.reduce(out).expect("target dimension")
    }

    /// `ρ(q)`.
    pub fn section(&self, q: &[i64]) -> Vec<i64> {
        let q = self.target.reduce(q.to_vec()).expect("element of the quotient");
        let rank = self.target.rank();
        let mut y = vec![0; self.killed];
        y.extend_from_slice(&q[rank..]);
        y.extend_from_slice(&q[..rank]);
        vec_mat(&y, &self.u_inv)
    }

    /// Whether `x ∈ N`.
    pub fn in_kernel(&self, x: &[i64]) -> bool {
        self.project(x).iter().all(|&c| c == 0)
    }
}

/// Matrix product of row-major integer matrices.
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Matrix {
    let b = b.to_vec();
    a.iter().map(|row| vec_mat(row, &b)).collect()
}
