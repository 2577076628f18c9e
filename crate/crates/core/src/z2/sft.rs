use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::tileset::{check_label, split_key, strip_comment};

/// Nearest-neighbor ℤ²-SFT: `h_forbidden` holds pairs `(x(i,j), x(i+1,j))`,
/// `v_forbidden` holds pairs `(x(i,j), x(i,j+1))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nn2Sft {
    alphabet: Vec<String>,
    h_forbidden: BTreeSet<(usize, usize)>,
    v_forbidden: BTreeSet<(usize, usize)>,
    h_ok: Vec<Vec<bool>>,
    v_ok: Vec<Vec<bool>>,
}

impl Nn2Sft {
    pub fn new(
        alphabet: Vec<String>,
        h_forbidden: impl IntoIterator<Item = (usize, usize)>,
        v_forbidden: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for l in &alphabet {
            check_label(l, 0)?;
            if !seen.insert(l.as_str()) {
                return Err(Error::parse(0, format!("duplicate letter `{l}`")));
            }
        }
        let n = alphabet.len();
        let h_forbidden: BTreeSet<_> = h_forbidden.into_iter().collect();
        let v_forbidden: BTreeSet<_> = v_forbidden.into_iter().collect();
        for &(a, b) in h_forbidden.iter().chain(&v_forbidden) {
            if a >= n || b >= n {
                return Err(Error::parse(0, format!("pair ({a},{b}) references a missing letter")));
            }
        }
        let table = |f: &BTreeSet<(usize, usize)>| {
            (0..n).map(|a| (0..n).map(|b| !f.contains(&(a, b))).collect()).collect()
        };
        Ok(Nn2Sft {
            h_ok: table(&h_forbidden),
            v_ok: table(&v_forbidden),
            alphabet,
            h_forbidden,
            v_forbidden,
        })
    }

    pub fn from_labels(alphabet: &[&str], h: &[(&str, &str)], v: &[(&str, &str)]) -> Result<Self> {
        let alphabet: Vec<String> = alphabet.iter().map(|s| s.to_string()).collect();
        let lookup = |pairs: &[(&str, &str)]| -> Result<Vec<(usize, usize)>> {
            pairs
                .iter()
                .map(|(a, b)| {
                    let ia = alphabet.iter().position(|l| l == a);
                    let ib = alphabet.iter().position(|l| l == b);
                    ia.zip(ib)
                        .ok_or_else(|| Error::parse(0, format!("pair {a} {b} references a missing letter")))
                })
                .collect()
        };
        let (h, v) = (lookup(h)?, lookup(v)?);
        Nn2Sft::new(alphabet, h, v)
    }

    /// No constraints at all.
    pub fn full_shift(letters: &[&str]) -> Self {
        Nn2Sft::from_labels(letters, &[], &[]).expect("distinct labels")
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn h_forbidden(&self) -> &BTreeSet<(usize, usize)> {
        &self.h_forbidden
    }

    pub fn v_forbidden(&self) -> &BTreeSet<(usize, usize)> {
        &self.v_forbidden
    }

    #[inline]
    pub fn h_allowed(&self, a: usize, b: usize) -> bool {
        self.h_ok[a][b]
    }

    #[inline]
    pub fn v_allowed(&self, a: usize, b: usize) -> bool {
        self.v_ok[a][b]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l == label)
    }

    /// Conjugate copy in which letter `i` moves to position `perm[i]`
    /// (labels travel with their letters).
    pub fn permute(&self, perm: &[usize]) -> Result<Nn2Sft> {
        let n = self.letter_count();
        let mut check: Vec<usize> = perm.to_vec();
        check.sort_unstable();
        if check != (0..n).collect::<Vec<_>>() {
            return Err(Error::Precondition("not a permutation of the alphabet".into()));
        }
        let mut alphabet = vec![String::new(); n];
        for (i, l) in self.alphabet.iter().enumerate() {
            alphabet[perm[i]] = l.clone();
        }
        let map = |f: &BTreeSet<(usize, usize)>| f.iter().map(|&(a, b)| (perm[a], perm[b])).collect::<Vec<_>>();
        Nn2Sft::new(alphabet, map(&self.h_forbidden), map(&self.v_forbidden))
    }

    /// Parses `alphabet:`, `hforbid: a b` and `vforbid: a b` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Vec<String>> = None;
        let mut h = Vec::new();
        let mut v = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let (key, rest) = split_key(line, line_no)?;
            match key {
                "alphabet" => {
                    if alphabet.is_some() {
                        return Err(Error::parse(line_no, "duplicate alphabet declaration"));
                    }
                    let letters: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                    let mut seen = HashSet::new();
                    for l in &letters {
                        check_label(l, line_no)?;
                        if !seen.insert(l.clone()) {
                            return Err(Error::parse(line_no, format!("duplicate letter `{l}`")));
                        }
                    }
                    alphabet = Some(letters);
                }
                "hforbid" | "vforbid" => {
                    let letters = alphabet
                        .as_ref()
                        .ok_or_else(|| Error::parse(line_no, "forbidden pair before alphabet declaration"))?;
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(Error::parse(line_no, "forbidden pair needs exactly two letters"));
                    }
                    let lookup = |t: &str| {
                        letters
                            .iter()
                            .position(|l| l == t)
                            .ok_or_else(|| Error::parse(line_no, format!("unknown letter `{t}`")))
                    };
                    let pair = (lookup(toks[0])?, lookup(toks[1])?);
                    if key == "hforbid" {
                        h.push(pair);
                    } else {
                        v.push(pair);
                    }
                }
                other => return Err(Error::parse(line_no, format!("unknown declaration `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing alphabet declaration"))?;
        Nn2Sft::new(alphabet, h, v)
    }
}

impl fmt::Display for Nn2Sft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alphabet:")?;
        for l in &self.alphabet {
            write!(f, " {l}")?;
        }
        writeln!(f)?;
        for &(a, b) in &self.h_forbidden {
            writeln!(f, "hforbid: {} {}", self.alphabet[a], self.alphabet[b])?;
        }
        for &(a, b) in &self.v_forbidden {
            writeln!(f, "vforbid: {} {}", self.alphabet[a], self.alphabet[b])?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Nn2Sft {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Nn2Sft::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let text = "alphabet: a b\nhforbid: a a\nhforbid: b b\nvforbid: a a\nvforbid: b b\n";
        let s = Nn2Sft::parse(text).unwrap();
        assert_eq!(s.to_string(), text);
        assert!(!s.h_allowed(0, 0));
        assert!(s.v_allowed(0, 1));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Nn2Sft::parse("alphabet: a\n\nhforbid: a z\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(Nn2Sft::parse("hforbid: a a"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn permutation_moves_labels_with_letters() {
        let s = Nn2Sft::from_labels(&["a", "b", "c"], &[("a", "b")], &[("c", "c")]).unwrap();
        let t = s.permute(&[2, 0, 1]).unwrap();
        assert_eq!(t.alphabet(), &["b", "c", "a"]);
        assert!(!t.h_allowed(t.index_of("a").unwrap(), t.index_of("b").unwrap()));
        assert!(!t.v_allowed(t.index_of("c").unwrap(), t.index_of("c").unwrap()));
        assert!(s.permute(&[0, 0, 1]).is_err());
    }
}
