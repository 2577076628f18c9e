//! Free extension, higher power, pull-back and push-forward at the level of
//! forbidden-pattern sets.

use std::collections::{BTreeSet, HashMap};

use super::group::{format_element, FgAbelianGroup};
use super::lattice::{Quotient, SubgroupLattice};
use super::sft::{normalize_pattern, AbelianNnSft, Pattern};
use crate::error::{Error, Result};

/// Largest alphabet `higher_power` will build.
pub const MAX_POWER_LETTERS: usize = 1 << 12;

/// `Fix_A(N)`: the inequality rules `x(g) ≠ x(g + t)` for each generator `t`.
pub fn fix_subshift(group: &FgAbelianGroup, alphabet: &[String], n_gens: &[Vec<i64>]) -> Result<AbelianNnSft> {
    let n = alphabet.len();
    let mut patterns = Vec::new();
    for t in n_gens {
        let t = group.reduce(t.clone())?;
        if t.iter().all(|&c| c == 0) {
            continue;
        }
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    patterns.push(Pattern::new(a, b, t.clone()));
                }
            }
        }
    }
    AbelianNnSft::new(group.clone(), alphabet.to_vec(), patterns)
}

/// Reads the forbidden patterns of a ℤᵏ-SFT in ℤᵈ (first `k` coordinates).
pub fn free_extension(x: &AbelianNnSft, d: usize) -> Result<AbelianNnSft> {
    let k = x.group().dim();
    if !x.group().is_free() {
        return Err(Error::Group(format!("free extension needs a free source group, got {}", x.group())));
    }
    if d < k {
        return Err(Error::Group(format!("cannot extend Z^{k} to Z^{d}")));
    }
    let patterns = x.patterns().iter().map(|p| {
        let mut offset = p.offset.clone();
        offset.resize(d, 0);
        Pattern::new(p.a, p.b, offset)
    });
    x.with_group(FgAbelianGroup::free(d), patterns)
}

/// Recoding over a finite-index lattice `H ≤ ℤᵈ` with transversal `reps`:
/// the letter at `h ∈ H` is the tuple `(x(h + r))_{r ∈ R}`, labeled by
/// joining with `|`. `H` is identified with ℤᵈ through its HNF basis.
///
/// A rule whose two cells fall in the same block forbids that letter
/// outright, written as the letter followed by anything along `e₁`.
pub fn higher_power(x: &AbelianNnSft, lattice: &SubgroupLattice, reps: &[Vec<i64>]) -> Result<AbelianNnSft> {
    let d = lattice.dim();
    if x.group() != &FgAbelianGroup::free(d) {
        return Err(Error::Group(format!("higher power over Z^{d} needs an SFT over Z^{d}, got {}", x.group())));
    }
    let index = lattice
        .index()
        .ok_or_else(|| Error::Group("lattice has infinite index".into()))?;
    if reps.len() as u64 != index || reps.iter().any(|r| r.len() != d) {
        return Err(Error::Group(format!("a transversal needs exactly {index} representatives in Z^{d}")));
    }
    let mut class_of: HashMap<Vec<i64>, usize> = HashMap::new();
    for (i, r) in reps.iter().enumerate() {
        if class_of.insert(lattice.reduce(r), i).is_some() {
            return Err(Error::Group(format!("representatives repeat the coset of ({})", format_element(r))));
        }
    }
    let n = x.letter_count();
    let k = reps.len();
    let size = (n as u128).pow(k as u32);
    if size > MAX_POWER_LETTERS as u128 {
        return Err(Error::Unsupported(format!("{n}^{k} letters is too many")));
    }
    let size = size as usize;
    let digits = |code: usize| -> Vec<usize> {
        let mut out = vec![0; k];
        let mut c = code;
        for slot in out.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        out
    };
    let words: Vec<Vec<usize>> = (0..size).map(digits).collect();
    let alphabet: Vec<String> = words
        .iter()
        .map(|w| w.iter().map(|&c| x.alphabet()[c].as_str()).collect::<Vec<_>>().join("|"))
        .collect();
    let e1: Vec<i64> = (0..d).map(|i| i64::from(i == 0)).collect();
    let mut patterns = BTreeSet::new();
    for p in x.patterns() {
        for (ri, r) in reps.iter().enumerate() {
            let t: Vec<i64> = r.iter().zip(&p.offset).map(|(a, b)| a + b).collect();
            let rj = class_of[&lattice.reduce(&t)];
            let h: Vec<i64> = t.iter().zip(&reps[rj]).map(|(a, b)| a - b).collect();
            let c = lattice.coordinates(&h)?;
            let firsts = words.iter().enumerate().filter(|(_, w)| w[ri] == p.a).map(|(i, _)| i);
            if c.iter().all(|&v| v == 0) {
                for l in firsts.filter(|&l| words[l][rj] == p.b) {
                    for m in 0..size {
                        patterns.insert(Pattern::new(l, m, e1.clone()));
                    }
                }
            } else {
                let seconds: Vec<usize> = (0..size).filter(|&m| words[m][rj] == p.b).collect();
                for l in firsts {
                    for &m in &seconds {
                        patterns.insert(Pattern::new(l, m, c.clone()));
                    }
                }
            }
        }
    }
    AbelianNnSft::new(FgAbelianGroup::free(d), alphabet, patterns)
}

/// `π*(X)` over `G = ℤᵈ`: the inequality rules along each generator of `N`
/// plus every rule of `X` lifted through the section.
pub fn pull_back(x: &AbelianNnSft, q: &Quotient) -> Result<AbelianNnSft> {
    if x.group() != q.target() {
        return Err(Error::Group(format!("SFT lives on {}, quotient is {}", x.group(), q.target())));
    }
    let fix = fix_subshift(&q.ambient(), x.alphabet(), q.generators())?;
    let lifted = x.patterns().iter().map(|p| Pattern::new(p.a, p.b, q.section(&p.offset)));
    AbelianNnSft::new(q.ambient(), x.alphabet().to_vec(), fix.patterns().iter().cloned().chain(lifted))
}

/// `ρ*(Y)` over `G/N`, for `Y` syntactically inside `Fix_A(N)`: every rule
/// other than the inequality rules must have offset `±ρ(s)`.
pub fn push_forward(y: &AbelianNnSft, q: &Quotient) -> Result<AbelianNnSft> {
    let ambient = q.ambient();
    if y.group() != &ambient {
        return Err(Error::Group(format!("SFT lives on {}, quotient expects {}", y.group(), ambient)));
    }
    let fix = fix_subshift(&ambient, y.alphabet(), q.generators())?;
    if let Some(missing) = fix.patterns().iter().find(|p| !y.patterns().contains(p)) {
        return Err(Error::Precondition(format!(
            "not inside Fix(N): the rule {} != {} along ({}) is missing",
            y.alphabet()[missing.a],
            y.alphabet()[missing.b],
            format_element(&missing.offset)
        )));
    }
    let target = q.target();
    let mut out = Vec::new();
    for p in y.patterns().iter().filter(|p| !fix.patterns().contains(p)) {
        let s = q.project(&p.offset);
        let describe = || format!("{} {} ({})", y.alphabet()[p.a], y.alphabet()[p.b], format_element(&p.offset));
        if s.iter().all(|&c| c == 0) {
            return Err(Error::Precondition(format!("rule {} has its offset in N", describe())));
        }
        if p.offset == q.section(&s) {
            out.push(Pattern::new(p.a, p.b, s));
        } else {
            let neg_s = target.neg(&s);
            let neg_o: Vec<i64> = p.offset.iter().map(|c| -c).collect();
            if neg_o == q.section(&neg_s) {
                out.push(Pattern::new(p.b, p.a, neg_s));
            } else {
                return Err(Error::Precondition(format!(
                    "rule {} is not along a lifted generator ±ρ(s)",
                    describe()
                )));
            }
        }
    }
    AbelianNnSft::new(target.clone(), y.alphabet().to_vec(), out)
}

/// Pattern set of `y` modulo the inequality rules of `N`, used to compare
/// SFTs inside `Fix_A(N)`. Each remaining rule `(a, b, o)` is rewritten along
/// `ρ(π(o))` in canonical orientation; rules with `o ∈ N` keep only the
/// letter bans `a = b` and drop the rest, which never match.
pub fn normalize_in_fix(y: &AbelianNnSft, q: &Quotient) -> Result<BTreeSet<Pattern>> {
    let fix = fix_subshift(y.group(), y.alphabet(), q.generators())?;
    let mut out = BTreeSet::new();
    for p in y.patterns().iter().filter(|p| !fix.patterns().contains(p)) {
        let s = q.project(&p.offset);
        if s.iter().all(|&c| c == 0) {
            if p.a == p.b {
                out.extend(normalize_pattern(y.group(), p)?);
            }
            continue;
        }
        for r in normalize_pattern(q.target(), &Pattern::new(p.a, p.b, s))? {
            out.insert(Pattern::new(r.a, r.b, q.section(&r.offset)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::{count_periodic_points, multiples, structural_bound};
    use crate::semilinear::SemilinearSet;
    use crate::tileset::TilesetGraph;

    fn letters(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    fn gamma2_shift() -> AbelianNnSft {
        AbelianNnSft::new(
            FgAbelianGroup::free(1),
            letters(&["0", "1"]),
            [Pattern::new(0, 0, vec![1]), Pattern::new(1, 1, vec![1])],
        )
        .unwrap()
    }

    fn counts(x: &AbelianNnSft, bound: u64) -> Vec<u64> {
        count_periodic_points(&x.to_tileset_graph().unwrap(), bound)
            .unwrap()
            .iter()
            .map(|(_, c)| u64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn fix_examples() {
        let z = FgAbelianGroup::free(1);
        let full = fix_subshift(&z, &letters(&["a", "b"]), &[]).unwrap();
        assert!(full.patterns().is_empty());
        let two = fix_subshift(&z, &letters(&["a", "b"]), &[vec![2]]).unwrap();
        let g = two.to_tileset_graph().unwrap();
        assert_eq!(multiples(&g, structural_bound(&g)).unwrap(), "{1,2}".parse().unwrap());
    }

    #[test]
    fn free_extension_examples() {
        let x = gamma2_shift();
        let up = free_extension(&x, 2).unwrap();
        let n = up.to_nn2().unwrap();
        assert_eq!(n.h_forbidden().len(), 2);
        assert!(n.v_forbidden().is_empty());
        assert!(free_extension(&up, 1).is_err());
    }

    #[test]
    fn higher_power_golden_mean() {
        let x = AbelianNnSft::new(FgAbelianGroup::free(1), letters(&["0", "1"]), [Pattern::new(1, 1, vec![1])]).unwrap();
        let l = SubgroupLattice::scaled(1, 2).unwrap();
        let y = higher_power(&x, &l, &l.coset_transversal().unwrap()).unwrap();
        assert_eq!(y.letter_count(), 4);
        let cx = counts(&x, 12);
        let cy = counts(&y, 6);
        for n in 1..=6 {
            assert_eq!(cy[n - 1], cx[2 * n - 1], "n={n}");
        }
    }

    #[test]
    fn higher_power_folds_gamma2() {
        let l = SubgroupLattice::scaled(1, 2).unwrap();
        let y = higher_power(&gamma2_shift(), &l, &[vec![0], vec![1]]).unwrap();
        assert!(counts(&y, 1)[0] > 0);
        // a bad transversal
        assert!(higher_power(&gamma2_shift(), &l, &[vec![0], vec![2]]).is_err());
        assert!(higher_power(&gamma2_shift(), &l, &[vec![0]]).is_err());
    }

    #[test]
    fn higher_power_full_shift() {
        let x = AbelianNnSft::new(FgAbelianGroup::free(2), letters(&["a", "b"]), []).unwrap();
        let l = SubgroupLattice::new(2, vec![vec![1, 1], vec![1, -1]]).unwrap();
        let y = higher_power(&x, &l, &l.coset_transversal().unwrap()).unwrap();
        assert_eq!(y.letter_count(), 4);
        assert!(y.patterns().is_empty());
    }

    #[test]
    fn pull_back_ztwo() {
        let q = Quotient::new(2, vec![vec![0, 2]]).unwrap();
        let x = AbelianNnSft::new(q.target().clone(), letters(&["a", "b"]), []).unwrap();
        let y = pull_back(&x, &q).unwrap();
        assert_eq!(y.patterns().len(), 2);
        assert!(y.patterns().iter().all(|p| p.offset == vec![0, 2]));
        assert_eq!(push_forward(&y, &q).unwrap(), x);
    }

    #[test]
    fn pull_back_to_z_gives_gamma3() {
        let q = Quotient::new(1, vec![vec![3]]).unwrap();
        let g3 = q.target().clone();
        let mut pats = Vec::new();
        for a in 0..3 {
            pats.push(Pattern::new(a, a, vec![1]));
        }
        let x = AbelianNnSft::new(g3, letters(&["a", "b", "c"]), pats).unwrap();
        let y = pull_back(&x, &q).unwrap();
        let g = y.to_tileset_graph().unwrap();
        assert_eq!(multiples(&g, structural_bound(&g)).unwrap(), SemilinearSet::finite([3]));
    }

    #[test]
    fn push_forward_of_vertically_constant_golden_mean() {
        let q = Quotient::new(2, vec![vec![0, 1]]).unwrap();
        let fix = fix_subshift(&q.ambient(), &letters(&["0", "1"]), q.generators()).unwrap();
        let y = AbelianNnSft::new(
            q.ambient(),
            letters(&["0", "1"]),
            fix.patterns().iter().cloned().chain([Pattern::new(1, 1, vec![1, 0])]),
        )
        .unwrap();
        let x = push_forward(&y, &q).unwrap();
        let golden = TilesetGraph::from_labels(&["0", "1"], &[("0", "0"), ("0", "1"), ("1", "0")]).unwrap();
        let gx = x.to_tileset_graph().unwrap();
        assert_eq!(gx, golden);
        assert_eq!(
            multiples(&gx, structural_bound(&gx)).unwrap(),
            multiples(&golden, structural_bound(&golden)).unwrap()
        );
    }

    #[test]
    fn push_forward_rejects_outside_fix() {
        let q = Quotient::new(2, vec![vec![0, 1]]).unwrap();
        let y = AbelianNnSft::new(q.ambient(), letters(&["a", "b"]), [Pattern::new(0, 0, vec![1, 0])]).unwrap();
        assert!(matches!(push_forward(&y, &q), Err(Error::Precondition(_))));
        let fix = fix_subshift(&q.ambient(), &letters(&["a", "b"]), q.generators()).unwrap();
        let bad = AbelianNnSft::new(
            q.ambient(),
            letters(&["a", "b"]),
            fix.patterns().iter().cloned().chain([Pattern::new(0, 0, vec![1, 1])]),
        )
        .unwrap();
        assert!(matches!(push_forward(&bad, &q), Err(Error::Precondition(_))));
        // Fix(N) alone pushes to the full shift
        let full = push_forward(&fix, &q).unwrap();
        assert!(full.patterns().is_empty());
    }

    #[test]
    fn constant_configurations_of_full_fix() {
        let g = FgAbelianGroup::free(2);
        let fix = fix_subshift(&g, &letters(&["a", "b"]), &g.generators()).unwrap();
        let n = fix.to_nn2().unwrap();
        let t = crate::z2::search_torus(&n, 2, 2).unwrap();
        assert_eq!(crate::z2::stabilizer_lattice(&t).basis(), [[1, 0], [0, 1]]);
        assert!(crate::z2::search_torus(&n, 1, 1).is_some());
    }
}
