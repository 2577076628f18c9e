use std::fmt;

use crate::error::{Error, Result};

/// `ℤ^rank × ℤ/m₁ × … × ℤ/mₛ` with `m₁ | m₂ | … | mₛ`, every `mᵢ ≥ 2`.
///
/// Elements are integer vectors, free coordinates first; torsion
/// coordinates are kept reduced to `[0, mᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<u64>,
}

impl FgAbelianGroup {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(&m) = torsion.iter().find(|&&m| m < 2) {
            return Err(Error::Group(format!("invariant factor {m} must be at least 2")));
        }
        if torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Group(format!("invariant factors {torsion:?} do not form a divisibility chain")));
        }
        Ok(FgAbelianGroup { rank, torsion })
    }

    /// `ℤ^d`.
    pub fn free(d: usize) -> Self {
        FgAbelianGroup { rank: d, torsion: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Number of coordinates of an element.
    pub fn dim(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Modulus of coordinate `i`, 0 for free coordinates.
    pub fn modulus(&self, i: usize) -> u64 {
        if i < self.rank {
            0
        } else {
            self.torsion[i - self.rank]
        }
    }

    pub fn reduce(&self, mut v: Vec<i64>) -> Result<Vec<i64>> {
        if v.len() != self.dim() {
            return Err(Error::Group(format!("element has {} coordinates, {self} needs {}", v.len(), self.dim())));
        }
        for (i, m) in self.torsion.iter().enumerate() {
            v[self.rank + i] = v[self.rank + i].rem_euclid(*m as i64);
        }
        Ok(v)
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.dim()]
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        self.reduce(x.iter().zip(y).map(|(a, b)| a + b).collect()).expect("same dimension")
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        self.reduce(x.iter().map(|a| -a).collect()).expect("same dimension")
    }

    pub fn scale(&self, n: i64, x: &[i64]) -> Vec<i64> {
        self.reduce(x.iter().map(|a| n * a).collect()).expect("same dimension")
    }

    /// Representatives in `(−m/2, m/2]` for torsion coordinates.
    pub fn signed(&self, x: &[i64]) -> Vec<i64> {
        x.iter()
            .enumerate()
            .map(|(i, &c)| {
                let m = self.modulus(i) as i64;
                if m > 0 && 2 * c > m {
                    c - m
                } else {
                    c
                }
            })
            .collect()
    }

    /// Whether `x` is the preferred one of `x` and `−x`: its first nonzero
    /// signed coordinate is positive. Elements with `x = −x` count as
    /// preferred.
    pub fn is_canonical_direction(&self, x: &[i64]) -> bool {
        self.signed(x).into_iter().find(|&c| c != 0).is_none_or(|c| c > 0)
    }

    /// Parses `1,0`, `(1,0)` or a single integer.
    pub fn parse_element(&self, text: &str) -> Result<Vec<i64>> {
        let v = parse_tuple(text)?;
        self.reduce(v)
    }

    /// The canonical generators: one unit vector per coordinate.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| i64::from(i == j)).collect())
            .collect()
    }

    /// Parses `Z^2`, `Z x Z/2`, `Z/3`, `0`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(FgAbelianGroup::free(0));
        }
        let mut rank = 0;
        let mut torsion = Vec::new();
        for part in text.split(['x', '×']) {
            let part = part.trim().replace(' ', "");
            if part == "Z" {
                rank += 1;
            } else if let Some(k) = part.strip_prefix("Z^") {
                rank += k.parse::<usize>().map_err(|e| Error::Group(format!("`{part}`: {e}")))?;
            } else if let Some(m) = part.strip_prefix("Z/") {
                torsion.push(m.parse::<u64>().map_err(|e| Error::Group(format!("`{part}`: {e}")))?);
            } else {
                return Err(Error::Group(format!("cannot read group factor `{part}`")));
            }
            if !torsion.is_empty() && part.starts_with("Z") && !part.starts_with("Z/") {
                return Err(Error::Group("free factors must precede torsion factors".into()));
            }
        }
        FgAbelianGroup::new(rank, torsion)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|m| format!("Z/{m}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

pub fn format_element(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

pub(crate) fn parse_tuple(text: &str) -> Result<Vec<i64>> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| Error::Group(format!("bad coordinate `{}` in `{text}`: {e}", t.trim())))
        })
        .collect()
}

/// A group written as `G` or `G / <g₁, g₂, …>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupExpr {
    pub ambient: FgAbelianGroup,
    pub subgroup: Option<Vec<Vec<i64>>>,
}

impl GroupExpr {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let Some(lt) = text.find('<') else {
            return Ok(GroupExpr { ambient: FgAbelianGroup::parse(text)?, subgroup: None });
        };
        let head = text[..lt].trim_end();
        let head = head
            .strip_suffix('/')
            .ok_or_else(|| Error::Group(format!("expected `G / <...>` in `{text}`")))?;
        let ambient = FgAbelianGroup::parse(head)?;
        let body = text[lt + 1..]
            .trim_end()
            .strip_suffix('>')
            .ok_or_else(|| Error::Group(format!("unterminated `<` in `{text}`")))?;
        let mut gens = Vec::new();
        let body = body.trim();
        if body.contains('(') {
            let mut rest = body;
            while let Some(open) = rest.find('(') {
                let close = rest[open..]
                    .find(')')
                    .ok_or_else(|| Error::Group(format!("unbalanced parentheses in `{text}`")))?;
                gens.push(ambient.parse_element(&rest[open..open + close + 1])?);
                rest = &rest[open + close + 1..];
            }
        } else if !body.is_empty() {
            for t in body.split(',') {
                gens.push(ambient.parse_element(t)?);
            }
        }
        Ok(GroupExpr { ambient, subgroup: Some(gens) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for text in ["Z^2", "Z x Z/2", "Z/3", "Z", "Z^3 x Z/2 x Z/4", "0"] {
            assert_eq!(FgAbelianGroup::parse(text).unwrap().to_string(), text);
        }
        assert!(FgAbelianGroup::parse("Z/2 x Z/3").is_err());
        assert!(FgAbelianGroup::parse("Z/1").is_err());
        assert!(FgAbelianGroup::parse("Q").is_err());
    }

    #[test]
    fn element_arithmetic() {
        let g = FgAbelianGroup::parse("Z x Z/4").unwrap();
        assert_eq!(g.parse_element("(1,7)").unwrap(), vec![1, 3]);
        assert_eq!(g.neg(&[1, 1]), vec![-1, 3]);
        assert_eq!(g.signed(&[0, 3]), vec![0, -1]);
        assert!(!g.is_canonical_direction(&[0, 3]));
        assert!(g.is_canonical_direction(&[0, 2]));
        assert!(g.reduce(vec![1]).is_err());
    }

    #[test]
    fn quotient_expressions() {
        let e = GroupExpr::parse("Z^2 / <(0,2)>").unwrap();
        assert_eq!(e.ambient, FgAbelianGroup::free(2));
        assert_eq!(e.subgroup, Some(vec![vec![0, 2]]));
        let e = GroupExpr::parse("Z/<3>").unwrap();
        assert_eq!(e.subgroup, Some(vec![vec![3]]));
        let e = GroupExpr::parse("Z^3/<(0,0,1),(1,1,0)>").unwrap();
        assert_eq!(e.subgroup.unwrap().len(), 2);
        assert_eq!(GroupExpr::parse("Z x Z/2").unwrap().subgroup, None);
    }
}
