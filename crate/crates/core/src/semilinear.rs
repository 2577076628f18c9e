//! Eventually periodic subsets of ℕ (semi-linear sets), the home of period sets.
//!
//! A [`SemilinearSet`] is kept in a canonical normal form so that two values
//! are equal exactly when they denote the same set:
//!
//! * the tail is described with its least eventual period `L`;
//! * every residue subgroup `aℤ/Lℤ` lying inside the tail becomes one
//!   progression of step `a` (only the minimal such `a` under divisibility);
//! * residues not covered that way become progressions of step `L`;
//! * every start is as small as possible and positive, so `0` always sits in
//!   the finite part;
//! * the finite part holds what is left over.
//!
//! Text syntax: `{2,3} + 4(N+1) + 6N*`, where `a(N+k)` is `{a(n+k) : n ∈ ℕ}`,
//! `aN*` is `aℕ∖{0}`, `aN` is `aℕ` and `(s+aN)` is the progression starting
//! at `s` with step `a`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `{start + n·step : n ∈ ℕ}` with `step ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Progression {
    pub start: u64,
    pub step: u64,
}

impl Progression {
    pub fn new(start: u64, step: u64) -> Result<Self> {
        if step == 0 {
            return Err(Error::parse(0, "progression step must be positive"));
        }
        Ok(Progression { start, step })
    }

    /// The progression `a(ℕ+k)`.
    pub fn multiples(a: u64, k: u64) -> Result<Self> {
        Progression::new(a * k, a)
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.start && (n - self.start) % self.step == 0
    }

    /// True when the progression has the shape `a(ℕ+k)`.
    pub fn is_aligned(&self) -> bool {
        self.start % self.step == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemilinearSet {
    finite: BTreeSet<u64>,
    progressions: Vec<Progression>,
}

/// The `F ∪ ⋃ (kᵢℕ ∖ F′ᵢ)` presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofiniteForm {
    pub finite: BTreeSet<u64>,
    pub parts: Vec<(u64, BTreeSet<u64>)>,
}

impl SemilinearSet {
    /// Builds and normalizes.
    pub fn new(finite: impl IntoIterator<Item = u64>, progressions: impl IntoIterator<Item = Progression>) -> Self {
        let raw = SemilinearSet {
            finite: finite.into_iter().collect(),
            progressions: progressions.into_iter().collect(),
        };
        raw.normalized()
    }

    pub fn empty() -> Self {
        SemilinearSet {
            finite: BTreeSet::new(),
            progressions: Vec::new(),
        }
    }

    pub fn finite(values: impl IntoIterator<Item = u64>) -> Self {
        SemilinearSet::new(values, [])
    }

    pub fn finite_part(&self) -> &BTreeSet<u64> {
        &self.finite
    }

    pub fn progressions(&self) -> &[Progression] {
        &self.progressions
    }

    pub fn is_finite(&self) -> bool {
        self.progressions.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.progressions.is_empty()
    }

    pub fn member(&self, n: u64) -> bool {
        self.finite.contains(&n) || self.progressions.iter().any(|p| p.contains(n))
    }

    /// Members in `[0, bound]`, ascending.
    pub fn members_up_to(&self, bound: u64) -> Vec<u64> {
        (0..=bound).filter(|&n| self.member(n)).collect()
    }

    fn step_lcm(&self) -> u64 {
        self.progressions.iter().fold(1, |acc, p| acc.lcm(&p.step))
    }

    fn max_anchor(&self) -> u64 {
        let f = self.finite.iter().next_back().copied().unwrap_or(0);
        let s = self.progressions.iter().map(|p| p.start).max().unwrap_or(0);
        f.max(s)
    }

    fn normalized(&self) -> SemilinearSet {
        if self.progressions.is_empty() {
            return SemilinearSet {
                finite: self.finite.clone(),
                progressions: Vec::new(),
            };
        }
        let period_bound = self.step_lcm();
        // beyond `tail` membership is `period_bound`-periodic
        let tail = self
            .finite
            .iter()
            .next_back()
            .map(|&f| f + 1)
            .unwrap_or(0)
            .max(self.progressions.iter().map(|p| p.start).max().unwrap_or(0));
        let ind = |n: u64| self.member(n);

        let period = divisors(period_bound)
            .into_iter()
            .find(|&l| (tail..tail + period_bound).all(|n| ind(n) == ind(n + l)))
            .unwrap_or(period_bound);

        let in_tail = |r: u64| {
            let n = tail + (r + period - tail % period) % period;
            ind(n)
        };
        let residues: BTreeSet<u64> = (0..period).filter(|&r| in_tail(r)).collect();

        let mut chosen: Vec<u64> = Vec::new();
        for a in divisors(period) {
            if chosen.iter().any(|&c| a % c == 0) {
                continue;
            }
            if (0..period / a).all(|j| residues.contains(&(j * a))) {
                chosen.push(a);
            }
        }
        let covered = |r: u64| chosen.iter().any(|&a| r % a == 0);

        let mut progressions = Vec::new();
        for &a in &chosen {
            let mut s = tail.max(a).div_ceil(a) * a;
            while s > a && ind(s - a) {
                s -= a;
            }
            progressions.push(Progression { start: s, step: a });
        }
        for &r in residues.iter().filter(|&&r| !covered(r)) {
            let mut s = tail + (r + period - tail % period) % period;
            while s > period && ind(s - period) {
                s -= period;
            }
            progressions.push(Progression { start: s, step: period });
        }
        progressions.sort_by_key(|p| (p.step, p.start));

        let finite = (0..tail.max(1))
            .filter(|&n| ind(n) && !progressions.iter().any(|p| p.contains(n)))
            .collect();
        SemilinearSet { finite, progressions }
    }

    /// Pointwise union.
    pub fn union(&self, other: &SemilinearSet) -> SemilinearSet {
        SemilinearSet::new(
            self.finite.iter().chain(other.finite.iter()).copied(),
            self.progressions.iter().chain(other.progressions.iter()).copied(),
        )
    }

    /// `{lcm(p,q) : p ∈ self, q ∈ other}` with `lcm(0,·) = 0`.
    ///
    /// Exact whenever no two non-aligned progressions meet; a product of two
    /// progressions is only certified when both have the shape `a(ℕ+k)`.
    pub fn lcm_combine(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        let mut finite = BTreeSet::new();
        let mut progs = Vec::new();
        for &p in &self.finite {
            for &q in &other.finite {
                finite.insert(lcm0(p, q));
            }
            for prog in &other.progressions {
                point_times_progression(p, prog, &mut finite, &mut progs);
            }
        }
        for prog in &self.progressions {
            for &q in &other.finite {
                point_times_progression(q, prog, &mut finite, &mut progs);
            }
            for prog2 in &other.progressions {
                progression_times_progression(prog, prog2, &mut finite, &mut progs)?;
            }
        }
        Ok(SemilinearSet::new(finite, progs))
    }

    /// Pointwise equality checked on `[0, B*]` with
    /// `B* = max(starts, finite elements) + 2·lcm(steps)`.
    pub fn equal_sl(&self, other: &SemilinearSet) -> bool {
        let anchor = self.max_anchor().max(other.max_anchor());
        let l = self.step_lcm().lcm(&other.step_lcm());
        let bound = anchor + 2 * l;
        (0..=bound).all(|n| self.member(n) == other.member(n))
    }

    /// Whether some nearest-neighbor ℤ-SFT has exactly this set of multiples:
    /// either finite, non-empty and without 0, or infinite with 0 and a tail
    /// made of full `aℕ` progressions.
    pub fn is_realizable_period_set(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        if self.is_finite() {
            return !self.finite.contains(&0);
        }
        self.finite.contains(&0) && self.progressions.iter().all(Progression::is_aligned)
    }

    /// `(F, [(a, k)])` with the set equal to `F ∪ ⋃ a(ℕ+k)`, when every
    /// progression is aligned.
    pub fn to_multiple_form(&self) -> Option<(BTreeSet<u64>, Vec<(u64, u64)>)> {
        if !self.progressions.iter().all(Progression::is_aligned) {
            return None;
        }
        let parts = self.progressions.iter().map(|p| (p.step, p.start / p.step)).collect();
        Some((self.finite.clone(), parts))
    }

    pub fn from_multiple_form(finite: &BTreeSet<u64>, parts: &[(u64, u64)]) -> Result<Self> {
        let progs = parts
            .iter()
            .map(|&(a, k)| Progression::multiples(a, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(SemilinearSet::new(finite.iter().copied(), progs))
    }

    /// The `F ∪ ⋃ (kℕ ∖ F′)` presentation (ℕ includes 0). Exists exactly when
    /// every progression is aligned.
    pub fn to_cofinite_form(&self) -> Option<CofiniteForm> {
        let (finite, parts) = self.to_multiple_form()?;
        let parts = parts
            .into_iter()
            .map(|(a, k)| (a, (0..k).map(|j| j * a).collect()))
            .collect();
        Some(CofiniteForm { finite, parts })
    }

    pub fn from_cofinite_form(form: &CofiniteForm) -> Result<Self> {
        let mut finite = form.finite.clone();
        let mut progs = Vec::new();
        for (k, excluded) in &form.parts {
            if *k == 0 {
                return Err(Error::parse(0, "0ℕ is not a progression"));
            }
            // kℕ∖F′ = (multiples of k below the cut, minus F′) ∪ k(ℕ+cut)
            let cut = excluded.iter().map(|e| e / k + 1).max().unwrap_or(0);
            finite.extend((0..cut).map(|j| j * k).filter(|m| !excluded.contains(m)));
            progs.push(Progression::multiples(*k, cut)?);
        }
        Ok(SemilinearSet::new(finite, progs))
    }
}

fn point_times_progression(p: u64, prog: &Progression, finite: &mut BTreeSet<u64>, out: &mut Vec<Progression>) {
    if p == 0 {
        finite.insert(0);
        return;
    }
    // q mod p cycles with period p / gcd(p, step) along the progression
    let cycle = p / p.gcd(&prog.step);
    let big_step = prog.step.lcm(&p);
    for j in 0..cycle {
        let q0 = prog.start + j * prog.step;
        if q0 == 0 {
            finite.insert(0);
            let q1 = q0 + big_step;
            let scale = p / p.gcd(&q1);
            out.push(Progression {
                start: scale * q1,
                step: scale * big_step,
            });
            continue;
        }
        let scale = p / p.gcd(&q0);
        out.push(Progression {
            start: scale * q0,
            step: scale * big_step,
        });
    }
}

fn progression_times_progression(
    a: &Progression,
    b: &Progression,
    finite: &mut BTreeSet<u64>,
    out: &mut Vec<Progression>,
) -> Result<()> {
    if !a.is_aligned() || !b.is_aligned() {
        return Err(Error::Uncertified(format!(
            "lcm of progressions ({}+{}N) and ({}+{}N) need not be eventually periodic",
            a.start, a.step, b.start, b.step
        )));
    }
    if a.start == 0 || b.start == 0 {
        finite.insert(0);
    }
    let l = a.step.lcm(&b.step);
    let ka = (a.start / a.step).max(1);
    let kb = (b.start / b.step).max(1);
    let threshold = l * ka.max(kb);
    // every value is a multiple of l, and all multiples from `threshold` on occur
    out.push(Progression {
        start: threshold,
        step: l,
    });
    let mut m = l;
    while m < threshold {
        let divs = divisors(m);
        let hit = divs.iter().filter(|&&q1| q1 > 0 && a.contains(q1)).any(|&q1| {
            divs.iter()
                .filter(|&&q2| q2 > 0 && b.contains(q2))
                .any(|&q2| q1.lcm(&q2) == m)
        });
        if hit {
            finite.insert(m);
        }
        m += l;
    }
    Ok(())
}

/// `lcm` with the convention `lcm(0, ·) = 0`.
pub fn lcm0(p: u64, q: u64) -> u64 {
    if p == 0 || q == 0 {
        0
    } else {
        p.lcm(&q)
    }
}

/// Positive divisors, ascending.
pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if !self.finite.is_empty() || self.progressions.is_empty() {
            let elems: Vec<String> = self.finite.iter().map(u64::to_string).collect();
            terms.push(format!("{{{}}}", elems.join(",")));
        }
        for p in &self.progressions {
            if p.is_aligned() {
                terms.push(format!("{}(N+{})", p.step, p.start / p.step));
            } else {
                terms.push(format!("({}+{}N)", p.start, p.step));
            }
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl std::str::FromStr for SemilinearSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_set(s)
    }
}

/// Parses the set syntax; see the module docs.
pub fn parse_set(text: &str) -> Result<SemilinearSet> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::parse(1, "empty set expression"));
    }
    let mut finite = BTreeSet::new();
    let mut progs = Vec::new();
    for term in split_top_level(&compact)? {
        parse_term(term, &mut finite, &mut progs)?;
    }
    Ok(SemilinearSet::new(finite, progs))
}

fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut begin = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::parse(1, "unbalanced brackets"));
                }
            }
            '+' if depth == 0 => {
                out.push(&s[begin..i]);
                begin = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::parse(1, "unbalanced brackets"));
    }
    out.push(&s[begin..]);
    if out.iter().any(|t| t.is_empty()) {
        return Err(Error::parse(1, "empty term"));
    }
    Ok(out)
}

fn number(s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| Error::parse(1, format!("expected a natural number, found `{s}`")))
}

fn coefficient(s: &str) -> Result<u64> {
    if s.is_empty() {
        Ok(1)
    } else {
        number(s)
    }
}

fn parse_term(term: &str, finite: &mut BTreeSet<u64>, progs: &mut Vec<Progression>) -> Result<()> {
    if let Some(inner) = term.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| Error::parse(1, format!("bad finite part `{term}`")))?;
        if !inner.is_empty() {
            for tok in inner.split(',') {
                finite.insert(number(tok)?);
            }
        }
        return Ok(());
    }
    if let Some(inner) = term.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        if let Some((s, a)) = inner.split_once('+') {
            if let Some(a) = a.strip_suffix('N') {
                let step = coefficient(a)?;
                progs.push(Progression::new(number(s)?, step)?);
                return Ok(());
            }
        }
    }
    if let Some(a) = term.strip_suffix("N*") {
        let step = coefficient(a)?;
        progs.push(Progression::new(step, step)?);
        return Ok(());
    }
    if let Some(a) = term.strip_suffix('N') {
        let step = coefficient(a)?;
        progs.push(Progression::new(0, step)?);
        return Ok(());
    }
    if let Some(head) = term.strip_suffix(')') {
        if let Some((a, rest)) = head.split_once("(N") {
            let step = coefficient(a)?;
            let k = if rest.is_empty() {
                0
            } else {
                number(rest.strip_prefix('+').ok_or_else(|| Error::parse(1, format!("bad term `{term}`")))?)?
            };
            if step == 0 {
                return Err(Error::parse(1, "progression step must be positive"));
            }
            progs.push(Progression::multiples(step, k)?);
            return Ok(());
        }
    }
    finite.insert(number(term)?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> SemilinearSet {
        s.parse().unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(SemilinearSet::finite([2, 3]).member(3));
        let fig = SemilinearSet::new([0], [Progression::new(4, 1).unwrap()]);
        assert!(fig.member(4));
        assert!(!fig.member(3));
        let six = SemilinearSet::new([], [Progression::new(6, 6).unwrap()]);
        assert!(six.member(12));
        assert!(!six.member(0));
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(set("{2,4} + (6+2N)"), set("2N*"));
        assert_eq!(set("(4+1N)"), set("{4} + (5+1N)"));
        assert_ne!(set("{3}"), set("{3,6}"));
        assert_eq!(set("{0} + 1(N+4)").to_string(), "{0} + 1(N+4)");
        // 0 stays in the finite part
        assert_eq!(set("3N").to_string(), "{0} + 3(N+1)");
    }

    #[test]
    fn normal_form_chooses_minimal_subgroups() {
        let s = set("{0} + 2(N+2) + 3(N+2)");
        assert_eq!(s.progressions().iter().map(|p| p.step).collect::<Vec<_>>(), vec![2, 3]);
        assert!(s.is_realizable_period_set());
        assert_eq!(s.to_string(), "{0} + 2(N+2) + 3(N+2)");
    }

    #[test]
    fn non_aligned_tail_kept_with_least_period() {
        let s = set("{0} + (5+2N)");
        assert_eq!(s.progressions(), &[Progression { start: 5, step: 2 }]);
        assert!(!s.is_realizable_period_set());
        assert_eq!(s.to_string(), "{0} + (5+2N)");
    }

    #[test]
    fn equal_sl_examples() {
        assert!(set("{2,4} + (6+2N)").equal_sl(&set("(2+2N)")));
        assert!(set("(4+1N)").equal_sl(&set("(5+1N) + {4}")));
        assert!(!set("{3}").equal_sl(&set("{3,6}")));
    }

    #[test]
    fn union_and_lcm_examples() {
        assert_eq!(set("{2}").union(&set("{3}")), set("{2,3}"));
        assert_eq!(set("{2}").lcm_combine(&set("{3}")).unwrap(), set("{6}"));
        let fig = set("{0} + 1(N+4)");
        assert_eq!(fig.lcm_combine(&set("{2}")).unwrap(), set("{0} + 2(N+2)"));
    }

    #[test]
    fn lcm_rejects_unaligned_pairs() {
        let odd = set("(5+2N)");
        assert!(matches!(odd.lcm_combine(&odd), Err(Error::Uncertified(_))));
        // point against any progression is fine
        assert!(odd.lcm_combine(&set("{4}")).is_ok());
    }

    #[test]
    fn realizability_examples() {
        assert!(set("{2,3,7}").is_realizable_period_set());
        assert!(set("{0} + 1(N+4)").is_realizable_period_set());
        assert!(!set("2N*").is_realizable_period_set());
        assert!(!set("{0,5}").is_realizable_period_set());
        assert!(!SemilinearSet::empty().is_realizable_period_set());
    }

    #[test]
    fn syntax_variants() {
        assert_eq!(set("{2,3} + 4(N+1) + 6N*"), set("{2,3} + (4+4N) + (6+6N)"));
        assert_eq!(set("N"), set("{0} + 1(N+1)"));
        assert_eq!(set("7"), set("{7}"));
        assert_eq!(set("{}"), SemilinearSet::empty());
        assert_eq!(SemilinearSet::empty().to_string(), "{}");
        assert!(parse_set("{1,,2}").is_err());
        assert!(parse_set("0N*").is_err());
        assert!(parse_set("(3+2N").is_err());
        assert!(parse_set("").is_err());
    }

    #[test]
    fn multiple_form_conversion() {
        let s = set("{0,1} + 3(N+2) + 2(N+5)");
        let (f, parts) = s.to_multiple_form().unwrap();
        assert_eq!(SemilinearSet::from_multiple_form(&f, &parts).unwrap(), s);
        assert!(set("(5+2N)").to_multiple_form().is_none());
    }

    #[test]
    fn cofinite_form_conversion() {
        let s = set("{0,1} + 3(N+2) + 2(N+5)");
        let form = s.to_cofinite_form().unwrap();
        assert_eq!(form.parts[0], (2, BTreeSet::from([0, 2, 4, 6, 8])));
        assert_eq!(SemilinearSet::from_cofinite_form(&form).unwrap(), s);
        // 5ℕ∖{0,10} = {5} ∪ 5(ℕ+3)
        let form = CofiniteForm {
            finite: BTreeSet::new(),
            parts: vec![(5, BTreeSet::from([0, 10]))],
        };
        assert_eq!(SemilinearSet::from_cofinite_form(&form).unwrap(), set("{5} + 5(N+3)"));
        assert!(set("(5+2N)").to_cofinite_form().is_none());
    }

    #[test]
    fn divisors_ascending() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }
}
