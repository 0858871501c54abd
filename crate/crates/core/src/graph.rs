//! Finite labeled graphs, vertex sets, label words and the labeled-path
//! language primitives everything else is built on.
//!
//! The text format is line based:
//!
//! ```text
//! # comment
//! vertices: v1 v2 v3
//! edge v1 a v2
//! ```
//!
//! Vertices and labels are indexed in declaration order; the alphabet is
//! the set of labels that occur on edges, in order of first use, so the
//! labeling is onto by construction.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::{self, AtomTable};
use crate::verdict::Verdict;

/// Separator used when rendering words over multi-character labels.
pub const WORD_SEPARATOR: char = '.';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub label: Label,
    pub target: usize,
}

/// A finite sequence of labels. The empty word stands for ε and is only
/// accepted where an operation admits it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Label>);

impl Word {
    pub fn epsilon() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, l: Label) {
        self.0.push(l);
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// Left rotation by `k` positions.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.rotate_left(k % self.len());
        Word(v)
    }

    /// The shortest `root` with `self = root^m`.
    pub fn primitive_root(&self) -> Word {
        let n = self.len();
        for p in 1..=n {
            if n.is_multiple_of(p) && (p..n).all(|i| self.0[i] == self.0[i - p]) {
                return Word(self.0[..p].to_vec());
            }
        }
        self.clone()
    }

    /// Canonical representative of the rotation class (least rotation).
    pub fn least_rotation(&self) -> Word {
        (0..self.len().max(1))
            .map(|k| self.rotate(k))
            .min()
            .unwrap_or_default()
    }
}

/// A subset of the vertex set, stored as a characteristic vector over the
/// declaration order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(BitSet);

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet(BitSet::empty(n))
    }

    pub fn full(n: usize) -> Self {
        VertexSet(BitSet::full(n))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        VertexSet(BitSet::from_indices(n, it))
    }

    pub fn from_bits(bits: BitSet) -> Self {
        VertexSet(bits)
    }

    pub fn bits(&self) -> &BitSet {
        &self.0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0))
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.intersection(&other.0))
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.difference(&other.0))
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.0.union_with(&other.0);
    }

    pub fn insert(&mut self, v: usize) {
        self.0.insert(v);
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl Deref for VertexSet {
    type Target = BitSet;

    fn deref(&self) -> &BitSet {
        &self.0
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone)]
pub struct LabeledGraph {
    vertices: Vec<String>,
    alphabet: Vec<String>,
    edges: Vec<Edge>,
    // succ[label][vertex]: targets of `label`-edges leaving `vertex`
    succ: Vec<Vec<BitSet>>,
    // pred[label][vertex]: sources of `label`-edges entering `vertex`
    pred: Vec<Vec<BitSet>>,
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.alphabet == other.alphabet
            && self.edges == other.edges
    }
}

impl Eq for LabeledGraph {}

impl LabeledGraph {
    /// Builds a graph from names. Labels are registered in order of first
    /// use. Edge `i` is attributed to line `i + 1` in errors.
    pub fn from_named_edges<S: AsRef<str>>(
        vertices: &[S],
        edges: &[(S, S, S)],
    ) -> Result<LabeledGraph> {
        let mut b = Builder::default();
        for v in vertices {
            b.declare_vertex(v.as_ref(), 0)?;
        }
        for (i, (s, l, t)) in edges.iter().enumerate() {
            b.add_edge(s.as_ref(), l.as_ref(), t.as_ref(), i + 1)?;
        }
        b.finish()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> impl DoubleEndedIterator<Item = Label> + Clone {
        (0..self.alphabet.len()).map(Label)
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn label_index(&self, name: &str) -> Result<Label> {
        self.alphabet
            .iter()
            .position(|a| a == name)
            .map(Label)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn label_name(&self, l: Label) -> &str {
        &self.alphabet[l.0]
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.vertex_count())
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    pub fn singleton(&self, v: usize) -> VertexSet {
        VertexSet::from_indices(self.vertex_count(), [v])
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        let mut s = self.empty_set();
        for n in names {
            s.insert(self.vertex_index(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.succ.iter().map(|row| row[v].count()).sum()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.pred.iter().map(|row| row[v].count()).sum()
    }

    pub fn successors(&self, v: usize, l: Label) -> &BitSet {
        &self.succ[l.0][v]
    }

    pub fn predecessors(&self, v: usize, l: Label) -> &BitSet {
        &self.pred[l.0][v]
    }

    /// r(A, a): targets of `a`-labeled edges leaving `A`.
    pub fn letter_image(&self, set: &VertexSet, l: Label) -> VertexSet {
        let mut out = BitSet::empty(self.vertex_count());
        for v in set.iter() {
            out.union_with(&self.succ[l.0][v]);
        }
        VertexSet::from_bits(out)
    }

    /// r(A, α), letter by letter; r(A, ε) = A.
    pub fn relative_range(&self, set: &VertexSet, word: &Word) -> VertexSet {
        let mut cur = set.clone();
        for &l in word.labels() {
            if cur.is_empty() {
                break;
            }
            cur = self.letter_image(&cur, l);
        }
        cur
    }

    /// r(α) = r(E⁰, α).
    pub fn range(&self, word: &Word) -> VertexSet {
        self.relative_range(&self.all_vertices(), word)
    }

    /// 𝓛(AE¹): labels of edges leaving `set`, in alphabet order.
    pub fn out_labels(&self, set: &VertexSet) -> Vec<Label> {
        self.labels()
            .filter(|l| set.iter().any(|v| !self.succ[l.0][v].is_empty()))
            .collect()
    }

    /// 𝓛(AEⁿ): label words of the length-`n` paths starting in `set`,
    /// obtained by expanding the (word, range) frontier one letter at a time.
    pub fn labeled_paths(&self, set: &VertexSet, n: usize) -> Result<BTreeSet<Word>> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        if n == 0 {
            return Err(Error::InvalidParam("path length must be at least 1".into()));
        }
        let mut frontier: BTreeMap<Word, VertexSet> = BTreeMap::new();
        frontier.insert(Word::epsilon(), set.clone());
        for _ in 0..n {
            let mut next = BTreeMap::new();
            for (w, r) in &frontier {
                for l in self.labels() {
                    let img = self.letter_image(r, l);
                    if !img.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(l);
                        next.insert(w2, img);
                    }
                }
            }
            frontier = next;
        }
        Ok(frontier.into_keys().collect())
    }

    /// Parses a word: `.`-separated labels, or one character per label when
    /// every label is a single character. The empty string is ε.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::epsilon());
        }
        let single = self.alphabet.iter().all(|a| a.chars().count() == 1);
        let parts: Vec<String> = if text.contains(WORD_SEPARATOR) || !single {
            text.split(WORD_SEPARATOR).map(str::to_string).collect()
        } else {
            text.chars().map(String::from).collect()
        };
        parts
            .iter()
            .map(|p| self.label_index(p))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn format_word(&self, w: &Word) -> String {
        let single = self.alphabet.iter().all(|a| a.chars().count() == 1);
        let names = w.labels().iter().map(|&l| self.label_name(l));
        if single {
            names.collect()
        } else {
            names.collect::<Vec<_>>().join(&WORD_SEPARATOR.to_string())
        }
    }

    pub fn set_names(&self, s: &VertexSet) -> Vec<String> {
        s.iter().map(|v| self.vertices[v].clone()).collect()
    }

    pub fn format_set(&self, s: &VertexSet) -> String {
        format!("{{{}}}", self.set_names(s).join(", "))
    }

    /// True when every edge carries its own label.
    pub fn has_trivial_labeling(&self) -> bool {
        self.alphabet.len() == self.edges.len()
    }

    /// Renders the graph in the input format; `parse_graph` inverts this.
    pub fn to_text(&self) -> String {
        let mut out = format!("vertices: {}\n", self.vertices.join(" "));
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} {}\n",
                self.vertices[e.source], self.alphabet[e.label.0], self.vertices[e.target]
            ));
        }
        out
    }
}

#[derive(Default)]
struct Builder {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    alphabet: Vec<String>,
    label_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    seen: HashSet<Edge>,
}

impl Builder {
    fn declare_vertex(&mut self, name: &str, line: usize) -> Result<()> {
        check_identifier(name, line)?;
        if self.index.contains_key(name) {
            return Err(Error::DuplicateVertex {
                line,
                name: name.to_string(),
            });
        }
        self.index.insert(name.to_string(), self.vertices.len());
        self.vertices.push(name.to_string());
        Ok(())
    }

    fn add_edge(&mut self, src: &str, label: &str, dst: &str, line: usize) -> Result<()> {
        check_identifier(label, line)?;
        let lookup = |name: &str| {
            self.index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UndeclaredVertex {
                    line,
                    name: name.to_string(),
                })
        };
        let (source, target) = (lookup(src)?, lookup(dst)?);
        let next = self.alphabet.len();
        let l = *self.label_index.entry(label.to_string()).or_insert(next);
        if l == next {
            self.alphabet.push(label.to_string());
        }
        let edge = Edge {
            source,
            label: Label(l),
            target,
        };
        if !self.seen.insert(edge) {
            return Err(Error::DuplicateEdge {
                line,
                source_name: src.to_string(),
                label: label.to_string(),
                target: dst.to_string(),
            });
        }
        self.edges.push(edge);
        Ok(())
    }

    fn finish(self) -> Result<LabeledGraph> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let k = self.alphabet.len();
        let mut succ = vec![vec![BitSet::empty(n); n]; k];
        let mut pred = vec![vec![BitSet::empty(n); n]; k];
        for e in &self.edges {
            succ[e.label.0][e.source].insert(e.target);
            pred[e.label.0][e.target].insert(e.source);
        }
        Ok(LabeledGraph {
            vertices: self.vertices,
            alphabet: self.alphabet,
            edges: self.edges,
            succ,
            pred,
        })
    }
}

fn check_identifier(name: &str, line: usize) -> Result<()> {
    if name.is_empty() || name.starts_with('#') || name.contains(WORD_SEPARATOR) || name == "ε" {
        return Err(Error::Syntax {
            line,
            message: format!("invalid identifier `{name}`"),
        });
    }
    Ok(())
}

/// Parses the line format described in the module docs.
pub fn parse_graph(text: &str) -> Result<LabeledGraph> {
    let mut b = Builder::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        if let Some(rest) = content.strip_prefix("vertices:") {
            for name in rest.split_whitespace() {
                b.declare_vertex(name, line)?;
            }
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["edge", src, label, dst] => b.add_edge(src, label, dst, line)?,
            ["edge", ..] => {
                return Err(Error::Syntax {
                    line,
                    message: "expected `edge <src> <label> <dst>`".into(),
                })
            }
            _ => {
                return Err(Error::Syntax {
                    line,
                    message: format!("unrecognized declaration `{content}`"),
                })
            }
        }
    }
    b.finish()
}

/// One structural check and the vertices that fail it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCheck {
    pub passed: bool,
    pub offending: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub no_sinks: VertexCheck,
    pub no_sources: VertexCheck,
    pub weakly_left_resolving: Verdict,
    /// Automatic for finite graphs: each set emits finitely many labeled edges.
    pub set_finite: bool,
    /// Automatic for finite graphs: each set receives finitely many labeled edges.
    pub receiver_set_finite: bool,
}

impl ValidationReport {
    pub fn in_scope(&self) -> bool {
        self.no_sinks.passed && self.no_sources.passed && self.weakly_left_resolving.holds
    }

    /// Human-readable reasons the graph is outside theorem scope.
    pub fn failures(&self, g: &LabeledGraph) -> Vec<String> {
        let names = |vs: &[usize]| {
            vs.iter()
                .map(|&v| g.vertices()[v].clone())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut out = Vec::new();
        if !self.no_sinks.passed {
            out.push(format!("sinks: {}", names(&self.no_sinks.offending)));
        }
        if !self.no_sources.passed {
            out.push(format!("sources: {}", names(&self.no_sources.offending)));
        }
        if !self.weakly_left_resolving.holds {
            out.push("not weakly left-resolving".to_string());
        }
        out
    }

    /// `Ok` when in scope, otherwise the refusal every analysis returns.
    pub fn require_scope(&self, g: &LabeledGraph) -> Result<()> {
        if self.in_scope() {
            Ok(())
        } else {
            Err(Error::OutsideScope(self.failures(g).join("; ")))
        }
    }
}

pub fn validate(g: &LabeledGraph, atoms: &AtomTable) -> ValidationReport {
    let sinks: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| g.out_degree(v) == 0)
        .collect();
    let sources: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| g.in_degree(v) == 0)
        .collect();
    ValidationReport {
        no_sinks: VertexCheck {
            passed: sinks.is_empty(),
            offending: sinks,
        },
        no_sources: VertexCheck {
            passed: sources.is_empty(),
            offending: sources,
        },
        weakly_left_resolving: lattice::is_weakly_left_resolving(g, atoms),
        set_finite: true,
        receiver_set_finite: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn words(g: &LabeledGraph, ws: &[&str]) -> BTreeSet<Word> {
        ws.iter().map(|w| g.parse_word(w).unwrap()).collect()
    }

    #[test]
    fn parses_fixture_shapes() {
        let g1 = fixtures::load("G1");
        assert_eq!((g1.vertex_count(), g1.edge_count()), (1, 1));
        assert_eq!(g1.alphabet(), ["a"]);
        let g3 = fixtures::load("G3");
        assert_eq!((g3.vertex_count(), g3.edge_count()), (3, 3));
        assert_eq!(g3.alphabet(), ["a", "b"]);
    }

    #[test]
    fn rejects_undeclared_vertex() {
        let err = parse_graph("vertices: v\nedge v a w\n").unwrap_err();
        assert_eq!(
            err,
            Error::UndeclaredVertex {
                line: 2,
                name: "w".into()
            }
        );
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(matches!(
            parse_graph("vertices: v v\n"),
            Err(Error::DuplicateVertex { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("vertices: v\nedge v a v\n# again\nedge v a v\n"),
            Err(Error::DuplicateEdge { line: 4, .. })
        ));
        assert!(matches!(
            parse_graph("vertices: v\nedge v a\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("vertices: v\nloop v\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert_eq!(parse_graph("# nothing\n"), Err(Error::NoVertices));
    }

    #[test]
    fn text_round_trip() {
        for name in fixtures::NAMES {
            let g = fixtures::load(name);
            assert_eq!(parse_graph(&g.to_text()).unwrap(), g, "{name}");
        }
    }

    #[test]
    fn labeled_paths_examples() {
        let g1 = fixtures::load("G1");
        assert_eq!(
            g1.labeled_paths(&g1.singleton(0), 3).unwrap(),
            words(&g1, &["aaa"])
        );
        let g2 = fixtures::load("G2");
        assert_eq!(
            g2.labeled_paths(&g2.singleton(0), 2).unwrap(),
            words(&g2, &["aa", "ab", "ba", "bb"])
        );
        let g3 = fixtures::load("G3");
        let v1 = g3.set_of(&["v1"]).unwrap();
        assert_eq!(g3.labeled_paths(&v1, 3).unwrap(), words(&g3, &["aab"]));
        assert_eq!(g3.labeled_paths(&g3.empty_set(), 1), Err(Error::EmptySet));
    }

    #[test]
    fn relative_range_examples() {
        let g3 = fixtures::load("G3");
        let a = g3.parse_word("a").unwrap();
        let b = g3.parse_word("b").unwrap();
        assert_eq!(
            g3.relative_range(&g3.set_of(&["v1", "v2"]).unwrap(), &a),
            g3.set_of(&["v2", "v3"]).unwrap()
        );
        assert!(g3
            .relative_range(&g3.set_of(&["v1"]).unwrap(), &b)
            .is_empty());
        let g1 = fixtures::load("G1");
        let v = g1.singleton(0);
        assert_eq!(g1.relative_range(&v, &g1.parse_word("aa").unwrap()), v);
        assert_eq!(g1.relative_range(&v, &Word::epsilon()), v);
        assert_eq!(g1.parse_word("b"), Err(Error::UnknownSymbol("b".into())));
    }

    #[test]
    fn multi_character_labels_use_separator() {
        let g5 = fixtures::load("G5");
        let w = g5.parse_word("e1.e2").unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(g5.format_word(&w), "e1.e2");
        assert!(g5.has_trivial_labeling());
    }

    #[test]
    fn word_helpers() {
        let g3 = fixtures::load("G3");
        let w = g3.parse_word("abab").unwrap();
        assert_eq!(g3.format_word(&w.primitive_root()), "ab");
        assert_eq!(
            g3.format_word(&g3.parse_word("baa").unwrap().least_rotation()),
            "aab"
        );
        assert_eq!(
            g3.format_word(&g3.parse_word("aab").unwrap().rotate(1)),
            "aba"
        );
    }

    #[test]
    fn validation_flags_sources() {
        let g = parse_graph("vertices: v s\nedge v a v\nedge s a v\n").unwrap();
        let atoms = lattice::stable_partition(&g);
        let report = validate(&g, &atoms);
        assert!(report.no_sinks.passed);
        assert!(!report.no_sources.passed);
        assert_eq!(report.no_sources.offending, vec![1]);
        assert!(!report.in_scope());
    }

    #[test]
    fn validation_of_fixtures() {
        let g1 = fixtures::load("G1");
        let r = validate(&g1, &lattice::stable_partition(&g1));
        assert!(r.in_scope() && r.set_finite && r.receiver_set_finite);

        let g7 = fixtures::load("G7");
        let r = validate(&g7, &lattice::stable_partition(&g7));
        assert!(!r.in_scope());
        assert_eq!(
            r.failures(&g7),
            vec!["not weakly left-resolving".to_string()]
        );
    }
}
