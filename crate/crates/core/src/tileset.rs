//! Tileset graphs: the directed-graph presentation of nearest-neighbor ℤ-SFTs.
//!
//! Vertices are letters and an edge `a -> b` means the word `ab` is allowed.
//! The configurations of the SFT are exactly the bi-infinite walks.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// A finite directed graph whose bi-infinite walks form a ℤ-SFT.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TilesetGraph {
    alphabet: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl TilesetGraph {
    /// Builds a graph from labels and index pairs.
    ///
    /// Labels must be distinct, non-empty and free of whitespace and `#`.
    pub fn new(alphabet: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for label in &alphabet {
            check_label(label, 0)?;
            if !seen.insert(label.as_str()) {
                return Err(Error::parse(0, format!("duplicate letter `{label}`")));
            }
        }
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= alphabet.len() || b >= alphabet.len()) {
            return Err(Error::parse(0, format!("edge ({a},{b}) references a missing letter")));
        }
        Ok(TilesetGraph { alphabet, edges })
    }

    /// Convenience constructor from string labels.
    pub fn from_labels(alphabet: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let alphabet: Vec<String> = alphabet.iter().map(|s| s.to_string()).collect();
        let mut idx = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = alphabet.iter().position(|l| l == a);
            let ib = alphabet.iter().position(|l| l == b);
            match (ia, ib) {
                (Some(ia), Some(ib)) => idx.push((ia, ib)),
                _ => return Err(Error::parse(0, format!("edge {a} {b} references a missing letter"))),
            }
        }
        TilesetGraph::new(alphabet, idx)
    }

    pub fn empty() -> Self {
        TilesetGraph {
            alphabet: Vec::new(),
            edges: BTreeSet::new(),
        }
    }

    /// The full shift on the given letters (complete graph with loops).
    pub fn full_shift(letters: &[&str]) -> Self {
        let n = letters.len();
        let edges = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
        TilesetGraph::new(letters.iter().map(|s| s.to_string()).collect(), edges)
            .expect("distinct labels")
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l == label)
    }

    /// Out-neighbour lists indexed by vertex.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.alphabet.len()];
        for &(a, b) in &self.edges {
            succ[a].push(b);
        }
        succ
    }

    /// True when every vertex has positive in- and out-degree.
    pub fn is_essential(&self) -> bool {
        let n = self.alphabet.len();
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for &(a, b) in &self.edges {
            outdeg[a] += 1;
            indeg[b] += 1;
        }
        (0..n).all(|v| indeg[v] > 0 && outdeg[v] > 0)
    }

    /// Returns the first vertex that lies on no bi-infinite walk, if any.
    pub(crate) fn first_inessential(&self) -> Option<&str> {
        let pruned = prune_essential(self);
        self.alphabet
            .iter()
            .find(|l| pruned.index_of(l).is_none())
            .map(String::as_str)
    }

    /// Subgraph induced by `keep` (must be sorted), preserving alphabet order.
    pub fn induced(&self, keep: &[usize]) -> TilesetGraph {
        let mut map = vec![usize::MAX; self.alphabet.len()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let alphabet = keep.iter().map(|&v| self.alphabet[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| map[a] != usize::MAX && map[b] != usize::MAX)
            .map(|&(a, b)| (map[a], map[b]))
            .collect();
        TilesetGraph { alphabet, edges }
    }

    /// Strongly connected components in reverse topological order (Tarjan).
    ///
    /// Each component is sorted; singleton components without a loop are
    /// included.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.alphabet.len();
        let succ = self.successors();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;

        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            // (vertex, next successor position)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(top) = call.last_mut() {
                let v = top.0;
                if top.1 < succ[v].len() {
                    let w = succ[v][top.1];
                    top.1 += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    /// Components that carry at least one cycle, each as an induced subgraph.
    pub fn cyclic_components(&self) -> Vec<TilesetGraph> {
        self.strongly_connected_components()
            .into_iter()
            .filter(|c| c.len() > 1 || self.has_edge(c[0], c[0]))
            .map(|mut c| {
                c.sort_unstable();
                self.induced(&c)
            })
            .collect()
    }

    /// Parses the line-oriented text format (`alphabet:` / `edge:` lines).
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Vec<String>> = None;
        let mut edges = BTreeSet::new();
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
                "edge" => {
                    let letters = alphabet
                        .as_ref()
                        .ok_or_else(|| Error::parse(line_no, "edge before alphabet declaration"))?;
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(Error::parse(line_no, "edge needs exactly two letters"));
                    }
                    let lookup = |t: &str| {
                        letters
                            .iter()
                            .position(|l| l == t)
                            .ok_or_else(|| Error::parse(line_no, format!("unknown letter `{t}`")))
                    };
                    edges.insert((lookup(toks[0])?, lookup(toks[1])?));
                }
                other => return Err(Error::parse(line_no, format!("unknown declaration `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing alphabet declaration"))?;
        Ok(TilesetGraph { alphabet, edges })
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tileset {\n");
        for l in &self.alphabet {
            out.push_str(&format!("  \"{l}\";\n"));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  \"{}\" -> \"{}\";\n", self.alphabet[a], self.alphabet[b]));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for TilesetGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alphabet:")?;
        for l in &self.alphabet {
            write!(f, " {l}")?;
        }
        writeln!(f)?;
        for &(a, b) in &self.edges {
            writeln!(f, "edge: {} {}", self.alphabet[a], self.alphabet[b])?;
        }
        Ok(())
    }
}

pub(crate) fn strip_comment(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

pub(crate) fn split_key(line: &str, line_no: usize) -> Result<(&str, &str)> {
    let (key, rest) = line
        .split_once(':')
        .ok_or_else(|| Error::parse(line_no, "expected `key: value`"))?;
    Ok((key.trim(), rest.trim()))
}

pub(crate) fn check_label(label: &str, line: usize) -> Result<()> {
    if label.is_empty() || label.contains(char::is_whitespace) || label.contains('#') {
        return Err(Error::parse(line, format!("invalid letter label `{label}`")));
    }
    Ok(())
}

/// Removes every vertex that lies on no bi-infinite walk.
///
/// Repeatedly strips sources and sinks; the result may be empty.
pub fn prune_essential(g: &TilesetGraph) -> TilesetGraph {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    let mut preds = vec![Vec::new(); n];
    let succ = g.successors();
    for &(a, b) in g.edges() {
        outdeg[a] += 1;
        indeg[b] += 1;
        preds[b].push(a);
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0 || outdeg[v] == 0).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in &succ[v] {
            if alive[w] && w != v {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        for &u in &preds[v] {
            if alive[u] && u != v {
                outdeg[u] -= 1;
                if outdeg[u] == 0 {
                    queue.push(u);
                }
            }
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    g.induced(&keep)
}

/// Disjoint union. Letters of `g2` that collide with `g1` get a `'` suffix
/// until unique.
pub fn union(g1: &TilesetGraph, g2: &TilesetGraph) -> TilesetGraph {
    let mut taken: HashSet<String> = g1.alphabet.iter().cloned().collect();
    let mut alphabet = g1.alphabet.clone();
    for l in &g2.alphabet {
        let mut name = l.clone();
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        alphabet.push(name);
    }
    let off = g1.vertex_count();
    let edges = g1
        .edges
        .iter()
        .copied()
        .chain(g2.edges.iter().map(|&(a, b)| (a + off, b + off)))
        .collect();
    TilesetGraph { alphabet, edges }
}

/// Tensor product: vertex `(a,b)` for every pair, edge iff both coordinates
/// have the edge.
pub fn product(g1: &TilesetGraph, g2: &TilesetGraph) -> Result<TilesetGraph> {
    if prune_essential(g1).is_empty() || prune_essential(g2).is_empty() {
        return Err(Error::EmptySft);
    }
    let n2 = g2.vertex_count();
    let alphabet = g1
        .alphabet
        .iter()
        .flat_map(|a| g2.alphabet.iter().map(move |b| format!("({a},{b})")))
        .collect();
    let mut edges = BTreeSet::new();
    for &(a1, b1) in &g1.edges {
        for &(a2, b2) in &g2.edges {
            edges.insert((a1 * n2 + a2, b1 * n2 + b2));
        }
    }
    Ok(TilesetGraph { alphabet, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma3_with_sink() -> TilesetGraph {
        TilesetGraph::from_labels(
            &["c0", "c1", "c2", "s"],
            &[("c0", "c1"), ("c1", "c2"), ("c2", "c0"), ("c1", "s")],
        )
        .unwrap()
    }

    #[test]
    fn prune_keeps_self_loop() {
        let g = TilesetGraph::from_labels(&["a"], &[("a", "a")]).unwrap();
        assert_eq!(prune_essential(&g), g);
    }

    #[test]
    fn prune_single_edge_is_empty() {
        let g = TilesetGraph::from_labels(&["a", "b"], &[("a", "b")]).unwrap();
        assert!(prune_essential(&g).is_empty());
    }

    #[test]
    fn prune_removes_sink_hanging_off_cycle() {
        let g = gamma3_with_sink();
        let p = prune_essential(&g);
        assert_eq!(p.alphabet(), &["c0", "c1", "c2"]);
        assert_eq!(p.edge_count(), 3);
        assert_eq!(g.first_inessential(), Some("s"));
    }

    #[test]
    fn scc_of_two_cycles_and_bridge() {
        let g = TilesetGraph::from_labels(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "a"), ("b", "c"), ("c", "d"), ("d", "c")],
        )
        .unwrap();
        let mut comps = g.strongly_connected_components();
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn text_format_round_trip() {
        let text = "# the 3-cycle\nalphabet: x y z\nedge: x y\n  edge:   y z # c\nedge: z x\n";
        let g = TilesetGraph::parse(text).unwrap();
        assert_eq!(g.edge_count(), 3);
        let printed = g.to_string();
        assert_eq!(TilesetGraph::parse(&printed).unwrap(), g);
        assert_eq!(TilesetGraph::parse(&printed).unwrap().to_string(), printed);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = TilesetGraph::parse("alphabet: a b\nedge: a q\n").unwrap_err();
        assert_eq!(err, Error::parse(2, "unknown letter `q`"));
        assert!(matches!(TilesetGraph::parse("edge: a b"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(TilesetGraph::parse("alphabet: a a"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn union_relabels_collisions() {
        let g = TilesetGraph::from_labels(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
        let u = union(&g, &g);
        assert_eq!(u.alphabet(), &["a", "b", "a'", "b'"]);
        assert_eq!(u.edge_count(), 4);
    }

    #[test]
    fn product_of_empty_is_error() {
        let g = TilesetGraph::from_labels(&["a"], &[("a", "a")]).unwrap();
        assert_eq!(product(&g, &TilesetGraph::empty()), Err(Error::EmptySft));
    }

    #[test]
    fn dot_lists_every_edge() {
        let dot = gamma3_with_sink().to_dot();
        assert_eq!(dot.matches("->").count(), 4);
    }
}
