use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::group::{format_element, FgAbelianGroup};
use crate::error::{Error, Result};
use crate::tileset::{check_label, split_key, strip_comment, TilesetGraph};
use crate::z2::{Nn2Sft, TorusConfig};

/// Forbids `x(g) = a` together with `x(g + offset) = b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub offset: Vec<i64>,
    pub a: usize,
    pub b: usize,
}

impl Pattern {
    pub fn new(a: usize, b: usize, offset: Vec<i64>) -> Self {
        Pattern { offset, a, b }
    }
}

/// Two-cell SFT over a finitely generated abelian group.
///
/// Offsets may be any nonzero group elements. Patterns are stored
/// normalized: offsets point in the canonical direction, and for offsets
/// with `s = −s` both orientations are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianNnSft {
    group: FgAbelianGroup,
    alphabet: Vec<String>,
    forbidden: BTreeSet<Pattern>,
}

pub(crate) fn normalize_pattern(group: &FgAbelianGroup, p: &Pattern) -> Result<Vec<Pattern>> {
    let offset = group.reduce(p.offset.clone())?;
    if offset.iter().all(|&c| c == 0) {
        return Err(Error::Group("pattern offset must be nonzero".into()));
    }
    let neg = group.neg(&offset);
    Ok(if neg == offset {
        vec![Pattern::new(p.a, p.b, offset.clone()), Pattern::new(p.b, p.a, offset)]
    } else if group.is_canonical_direction(&offset) {
        vec![Pattern::new(p.a, p.b, offset)]
    } else {
        vec![Pattern::new(p.b, p.a, neg)]
    })
}

impl AbelianNnSft {
    pub fn new(group: FgAbelianGroup, alphabet: Vec<String>, patterns: impl IntoIterator<Item = Pattern>) -> Result<Self> {
        let mut seen = HashSet::new();
        for l in &alphabet {
            check_label(l, 0)?;
            if !seen.insert(l.as_str()) {
                return Err(Error::parse(0, format!("duplicate letter `{l}`")));
            }
        }
        let mut forbidden = BTreeSet::new();
        for p in patterns {
            if p.a >= alphabet.len() || p.b >= alphabet.len() {
                return Err(Error::parse(0, "pattern references a missing letter"));
            }
            forbidden.extend(normalize_pattern(&group, &p)?);
        }
        Ok(AbelianNnSft { group, alphabet, forbidden })
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn patterns(&self) -> &BTreeSet<Pattern> {
        &self.forbidden
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l == label)
    }

    /// Whether `x(g) = a, x(g + offset) = b` is forbidden.
    pub fn forbids(&self, a: usize, b: usize, offset: &[i64]) -> bool {
        match normalize_pattern(&self.group, &Pattern::new(a, b, offset.to_vec())) {
            Ok(ps) => ps.iter().all(|p| self.forbidden.contains(p)),
            Err(_) => false,
        }
    }

    /// Same patterns, same alphabet, over another group of the same shape.
    pub(crate) fn with_group(&self, group: FgAbelianGroup, patterns: impl IntoIterator<Item = Pattern>) -> Result<Self> {
        AbelianNnSft::new(group, self.alphabet.clone(), patterns)
    }

    /// The ℤ-SFT of walks on a tileset graph.
    pub fn from_tileset_graph(g: &TilesetGraph) -> Self {
        let n = g.vertex_count();
        let patterns = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !g.has_edge(a, b))
            .map(|(a, b)| Pattern::new(a, b, vec![1]));
        AbelianNnSft::new(FgAbelianGroup::free(1), g.alphabet().to_vec(), patterns).expect("valid graph")
    }

    /// Tileset graph of a ℤ-SFT, through the higher-block presentation with
    /// window `max |offset|` when offsets longer than 1 occur. Vertices of the
    /// higher-block graph are the allowed words, labeled by joining letters
    /// with `.`.
    pub fn to_tileset_graph(&self) -> Result<TilesetGraph> {
        Ok(self.to_tileset_graph_with_letters()?.0)
    }

    /// As [`to_tileset_graph`](Self::to_tileset_graph), also returning the
    /// letter read at each vertex.
    pub fn to_tileset_graph_with_letters(&self) -> Result<(TilesetGraph, Vec<usize>)> {
        if self.group != FgAbelianGroup::free(1) {
            return Err(Error::Unsupported(format!("tileset graphs need the group Z, not {}", self.group)));
        }
        let n = self.letter_count();
        let w = self.forbidden.iter().map(|p| p.offset[0] as usize).max().unwrap_or(1);
        let word_ok = |word: &[usize]| {
            self.forbidden
                .iter()
                .all(|p| (0..word.len()).all(|i| {
                    let j = i + p.offset[0] as usize;
                    j >= word.len() || word[i] != p.a || word[j] != p.b
                }))
        };
        if w == 1 {
            let edges = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| word_ok(&[a, b]));
            return Ok((TilesetGraph::new(self.alphabet.clone(), edges)?, (0..n).collect()));
        }
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..w {
            words = words
                .into_iter()
                .flat_map(|wd| {
                    (0..n).map(move |c| {
                        let mut v = wd.clone();
                        v.push(c);
                        v
                    })
                })
                .filter(|wd| word_ok(wd))
                .collect();
        }
        let labels = words
            .iter()
            .map(|wd| wd.iter().map(|&c| self.alphabet[c].as_str()).collect::<Vec<_>>().join("."))
            .collect::<Vec<_>>();
        let mut edges = Vec::new();
        for (x, u) in words.iter().enumerate() {
            for (y, v) in words.iter().enumerate() {
                if u[1..] == v[..w - 1] {
                    let mut joined = u.clone();
                    joined.push(v[w - 1]);
                    if word_ok(&joined) {
                        edges.push((x, y));
                    }
                }
            }
        }
        let letters = words.iter().map(|wd| wd[0]).collect();
        Ok((TilesetGraph::new(labels, edges)?, letters))
    }

    /// Nearest-neighbor ℤ²-SFT view; offsets must be `(1,0)` and `(0,1)`.
    pub fn to_nn2(&self) -> Result<Nn2Sft> {
        if self.group != FgAbelianGroup::free(2) {
            return Err(Error::Unsupported(format!("expected Z^2, got {}", self.group)));
        }
        let mut h = Vec::new();
        let mut v = Vec::new();
        for p in &self.forbidden {
            match p.offset.as_slice() {
                [1, 0] => h.push((p.a, p.b)),
                [0, 1] => v.push((p.a, p.b)),
                other => {
                    return Err(Error::Unsupported(format!(
                        "offset ({}) is not a unit vector",
                        format_element(other)
                    )))
                }
            }
        }
        Nn2Sft::new(self.alphabet.clone(), h, v)
    }

    pub fn from_nn2(sft: &Nn2Sft) -> Self {
        let h = sft.h_forbidden().iter().map(|&(a, b)| Pattern::new(a, b, vec![1, 0]));
        let v = sft.v_forbidden().iter().map(|&(a, b)| Pattern::new(a, b, vec![0, 1]));
        AbelianNnSft::new(FgAbelianGroup::free(2), sft.alphabet().to_vec(), h.chain(v)).expect("valid sft")
    }

    /// Validity of a periodic configuration on a two-coordinate group, read
    /// as `x(i,j) = cells[i mod p][j mod q]`. A torsion coordinate's period
    /// must divide its modulus.
    pub fn valid_on_torus(&self, cfg: &TorusConfig) -> Result<bool> {
        if self.group.dim() != 2 {
            return Err(Error::DimensionMismatch(format!("{} is not two-dimensional", self.group)));
        }
        let periods = [cfg.p() as i64, cfg.q() as i64];
        for (k, &per) in periods.iter().enumerate() {
            let m = self.group.modulus(k) as i64;
            if m > 0 && m % per != 0 {
                return Err(Error::DimensionMismatch(format!("period {per} does not divide the modulus {m}")));
            }
        }
        for i in 0..periods[0] {
            for j in 0..periods[1] {
                let here = cfg.at(i, j);
                for p in &self.forbidden {
                    if here == p.a && cfg.at(i + p.offset[0], j + p.offset[1]) == p.b {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Parses `group:`, `alphabet:` and `forbid: a b <offset>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut group = None;
        let mut alphabet: Option<Vec<String>> = None;
        let mut patterns = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let (key, rest) = split_key(line, line_no)?;
            match key {
                "group" => {
                    group = Some(FgAbelianGroup::parse(rest).map_err(|e| Error::parse(line_no, e.to_string()))?);
                }
                "alphabet" => {
                    let letters: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                    for l in &letters {
                        check_label(l, line_no)?;
                    }
                    alphabet = Some(letters);
                }
                "forbid" => {
                    let g = group
                        .as_ref()
                        .ok_or_else(|| Error::parse(line_no, "forbid before group declaration"))?;
                    let letters = alphabet
                        .as_ref()
                        .ok_or_else(|| Error::parse(line_no, "forbid before alphabet declaration"))?;
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    if toks.len() < 3 {
                        return Err(Error::parse(line_no, "expected `forbid: a b offset`"));
                    }
                    let lookup = |t: &str| {
                        letters
                            .iter()
                            .position(|l| l == t)
                            .ok_or_else(|| Error::parse(line_no, format!("unknown letter `{t}`")))
                    };
                    let offset = g
                        .parse_element(&toks[2..].concat())
                        .map_err(|e| Error::parse(line_no, e.to_string()))?;
                    if offset.iter().all(|&c| c == 0) {
                        return Err(Error::parse(line_no, "offset must be nonzero"));
                    }
                    patterns.push(Pattern::new(lookup(toks[0])?, lookup(toks[1])?, offset));
                }
                other => return Err(Error::parse(line_no, format!("unknown declaration `{other}`"))),
            }
        }
        let group = group.ok_or_else(|| Error::parse(0, "missing group declaration"))?;
        let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing alphabet declaration"))?;
        AbelianNnSft::new(group, alphabet, patterns)
    }
}

impl fmt::Display for AbelianNnSft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group: {}", self.group)?;
        write!(f, "alphabet:")?;
        for l in &self.alphabet {
            write!(f, " {l}")?;
        }
        writeln!(f)?;
        for p in &self.forbidden {
            writeln!(f, "forbid: {} {} {}", self.alphabet[p.a], self.alphabet[p.b], format_element(&p.offset))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for AbelianNnSft {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AbelianNnSft::parse(s)
    }
}
