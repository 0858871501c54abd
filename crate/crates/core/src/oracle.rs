//! Independent cross-checks: a definition-level disagreeability search,
//! the classical Condition (L) and cofinality criteria for the underlying
//! directed graph, a seeded random graph generator, and the per-graph
//! consistency record that ties them together.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::Dfs;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::build_range_automaton;
use crate::conditions::{self, Limits};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::lattice::{is_weakly_left_resolving, stable_partition, AtomTable};
use crate::verdict::{Verdict, Witness};
use crate::witness;

/// Largest lattice the brute-force search will sweep.
pub const BRUTEFORCE_ATOM_CAP: usize = 12;

/// Disagreeability straight from the language criterion: a nonempty
/// A ∈ 𝓔 and β with 𝓛(A·E^{n|β|}) = {βⁿ} for all n.
///
/// With S the number of states of the range automaton seeded at A, any β
/// passing for n = 1..=S+1 forces more than S consecutive steps, so the
/// forced trajectory of A has revisited a set and the letter stream is
/// periodic from there on. By the Fine and Wilf bound that period agrees with
/// |β|, so passing the finite test implies all n. Candidates β are the
/// words of length ≤ S with 𝓛(A·E^{|β|}) = {β}.
pub fn disagreeable_bruteforce(
    g: &LabeledGraph,
    atoms: &AtomTable,
    limits: Limits,
) -> Result<Verdict> {
    if atoms.len() > BRUTEFORCE_ATOM_CAP {
        return Err(Error::BoundExceeded(format!(
            "{} atoms exceed the brute-force cap of {BRUTEFORCE_ATOM_CAP}",
            atoms.len()
        )));
    }
    for e in atoms.elements().skip(1) {
        let set = atoms.vertex_set(&e);
        let states =
            build_range_automaton(g, std::slice::from_ref(&set), limits.state_cap)?.state_count();
        for m in 1..=states {
            let lang = g.labeled_paths(&set, m)?;
            if lang.len() != 1 {
                break;
            }
            let beta = lang.into_iter().next().expect("singleton");
            let mut all = true;
            for n in 2..=states + 1 {
                let lang = g.labeled_paths(&set, m * n)?;
                if lang.len() != 1 || !lang.contains(&beta.repeat(n)) {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(Verdict::with_witness(
                    false,
                    Witness::Disagree { set, word: beta },
                ));
            }
        }
    }
    Ok(Verdict::holds())
}

fn underlying(g: &LabeledGraph) -> DiGraph<(), ()> {
    let mut d = DiGraph::new();
    let nodes: Vec<NodeIndex> = (0..g.vertex_count()).map(|_| d.add_node(())).collect();
    for e in g.edges() {
        d.add_edge(nodes[e.source], nodes[e.target], ());
    }
    d
}

fn is_cyclic_component(d: &DiGraph<(), ()>, scc: &[NodeIndex]) -> bool {
    scc.len() > 1 || d.contains_edge(scc[0], scc[0])
}

/// Classical Condition (L): every loop of the underlying graph has an exit.
/// A loop has no exit exactly when each vertex on it emits only the loop's
/// edge; such a loop cannot be left, so it is a whole strongly connected
/// component in which every vertex has out-degree one.
pub fn condition_l_graph(g: &LabeledGraph) -> bool {
    let d = underlying(g);
    !tarjan_scc(&d).iter().any(|scc| {
        is_cyclic_component(&d, scc) && scc.iter().all(|&v| g.out_degree(v.index()) == 1)
    })
}

/// Graph cofinality: every vertex connects to every infinite path. On a
/// finite graph each infinite path ends inside a cyclic strongly connected
/// component and every such component carries one, so this is "every
/// vertex reaches every cyclic component".
pub fn graph_cofinal(g: &LabeledGraph) -> bool {
    let d = underlying(g);
    let cyclic: Vec<Vec<NodeIndex>> = tarjan_scc(&d)
        .into_iter()
        .filter(|scc| is_cyclic_component(&d, scc))
        .collect();
    d.node_indices().all(|v| {
        let mut reach = vec![false; d.node_count()];
        let mut dfs = Dfs::new(&d, v);
        while let Some(w) = dfs.next(&d) {
            reach[w.index()] = true;
        }
        cyclic
            .iter()
            .all(|scc| scc.iter().any(|w| reach[w.index()]))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzParams {
    pub max_vertices: usize,
    pub max_labels: usize,
    /// Probability of an edge for each ordered vertex pair.
    pub edge_density: f64,
    pub count: usize,
    pub seed: u64,
    /// Relabel every edge with its own label before filtering.
    pub trivial_labeling: bool,
}

impl Default for FuzzParams {
    fn default() -> Self {
        FuzzParams {
            max_vertices: 5,
            max_labels: 3,
            edge_density: 0.35,
            count: 100,
            seed: 42,
            trivial_labeling: false,
        }
    }
}

impl FuzzParams {
    pub fn check(&self) -> Result<()> {
        if self.max_vertices == 0 {
            return Err(Error::InvalidParam(
                "max_vertices must be at least 1".into(),
            ));
        }
        if self.max_labels == 0 {
            return Err(Error::InvalidParam("max_labels must be at least 1".into()));
        }
        if self.count == 0 {
            return Err(Error::InvalidParam("count must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.edge_density) {
            return Err(Error::InvalidParam(
                "edge_density must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Deterministic stream of in-scope random graphs. Sinks and sources are
/// repaired with self-loops; graphs that are not weakly left-resolving are
/// discarded and counted.
pub struct FuzzGraphs {
    params: FuzzParams,
    rng: ChaCha8Rng,
    emitted: usize,
    discarded: usize,
}

pub fn fuzz_graphs(params: FuzzParams) -> Result<FuzzGraphs> {
    params.check()?;
    Ok(FuzzGraphs {
        params,
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        emitted: 0,
        discarded: 0,
    })
}

impl FuzzGraphs {
    pub fn discarded(&self) -> usize {
        self.discarded
    }

    fn label_name(i: usize) -> String {
        if i < 26 {
            char::from(b'a' + i as u8).to_string()
        } else {
            format!("l{i}")
        }
    }

    fn generate(&mut self) -> LabeledGraph {
        let p = self.params;
        let n = self.rng.random_range(1..=p.max_vertices);
        let k = self.rng.random_range(1..=p.max_labels);
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if self.rng.random_bool(p.edge_density) {
                    edges.push((u, self.rng.random_range(0..k), v));
                }
            }
        }
        let mut fresh = k;
        for v in 0..n {
            let out = edges.iter().any(|e| e.0 == v);
            let inc = edges.iter().any(|e| e.2 == v);
            if !out || !inc {
                let label = if self.rng.random_bool(0.5) {
                    fresh += 1;
                    fresh - 1
                } else {
                    self.rng.random_range(0..k)
                };
                edges.push((v, label, v));
            }
        }
        let vertices: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
        let named: Vec<(String, String, String)> = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, l, v))| {
                let label = if p.trivial_labeling {
                    format!("e{i}")
                } else {
                    Self::label_name(l)
                };
                (vertices[u].clone(), label, vertices[v].clone())
            })
            .collect();
        LabeledGraph::from_named_edges(&vertices, &named).expect("generated graph is well formed")
    }
}

impl Iterator for FuzzGraphs {
    type Item = LabeledGraph;

    fn next(&mut self) -> Option<LabeledGraph> {
        if self.emitted == self.params.count {
            return None;
        }
        loop {
            let g = self.generate();
            if is_weakly_left_resolving(&g, &stable_partition(&g)).holds {
                self.emitted += 1;
                return Some(g);
            }
            self.discarded += 1;
        }
    }
}

/// Outcome of the classical-criteria branch for trivially labeled graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialLabelingCheck {
    pub condition_l: bool,
    pub cofinal: bool,
}

#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    /// Replayable input, in the fixture format.
    pub graph_text: String,
    pub atoms: usize,
    pub disagreeable: bool,
    pub disagreeable_bruteforce: bool,
    pub strongly_cofinal: bool,
    pub cycles_without_exit: usize,
    pub proper_hereditary_saturated: bool,
    /// Bound used for the loop sweep, 2·#atoms.
    pub loop_bound: usize,
    /// Every loop up to `loop_bound` has an exit.
    pub bounded_loops_have_exits: bool,
    pub domain_condition: bool,
    pub simple: bool,
    pub condition_c: bool,
    pub trivial_labeling: Option<TrivialLabelingCheck>,
    pub violations: Vec<String>,
    /// Findings of interest that are not violations, such as a finite
    /// graph separating the loop conditions.
    pub notes: Vec<String>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates every condition on `g` and records each cross-check.
pub fn cross_check(g: &LabeledGraph, limits: Limits) -> Result<ConsistencyReport> {
    let report = conditions::simplicity_verdict(g, limits)?;
    let atoms = &report.atoms;
    let brute = disagreeable_bruteforce(g, atoms, limits)?;
    let loop_bound = 2 * atoms.len();
    let loops = conditions::classify_loops(g, atoms, loop_bound, limits)?;
    let bounded_loops_have_exits = loops.without_exit().next().is_none();

    let mut violations = Vec::new();
    let mut notes = Vec::new();
    if brute.holds != report.disagreeable.holds {
        violations.push(format!(
            "disagreeable: structural {} vs brute force {}",
            report.disagreeable.holds, brute.holds
        ));
    }
    if report.disagreeable.holds && !bounded_loops_have_exits {
        violations.push("disagreeable but a loop has no exit".into());
    }
    if bounded_loops_have_exits && !report.cycles_without_exit.is_empty() {
        violations.push("every bounded loop has an exit but a cycle has none".into());
    }
    if !report.consistent {
        violations.push(format!(
            "domain condition holds but simple = {} and condition (c) = {}",
            report.simple, report.condition_c
        ));
    }
    for (name, err) in witness::verify_report(g, &report) {
        violations.push(format!("{name} witness fails replay: {err}"));
    }
    let trivial_labeling = g.has_trivial_labeling().then(|| TrivialLabelingCheck {
        condition_l: condition_l_graph(g),
        cofinal: graph_cofinal(g),
    });
    if let Some(t) = &trivial_labeling {
        if report.disagreeable.holds != t.condition_l {
            violations.push(format!(
                "trivial labeling: disagreeable = {} but Condition (L) = {}",
                report.disagreeable.holds, t.condition_l
            ));
        }
        if report.simple != (t.condition_l && t.cofinal) {
            violations.push(format!(
                "trivial labeling: simple = {} but (L) = {}, cofinal = {}",
                report.simple, t.condition_l, t.cofinal
            ));
        }
    }
    if !report.disagreeable.holds && bounded_loops_have_exits {
        notes.push("every bounded loop has an exit but the space is not disagreeable".into());
    }
    if report.cycles_without_exit.is_empty() && !bounded_loops_have_exits {
        notes.push("no cycle without exit, yet a loop without exit".into());
    }
    Ok(ConsistencyReport {
        graph_text: g.to_text(),
        atoms: atoms.len(),
        disagreeable: report.disagreeable.holds,
        disagreeable_bruteforce: brute.holds,
        strongly_cofinal: report.strongly_cofinal.holds,
        cycles_without_exit: report.cycles_without_exit.len(),
        proper_hereditary_saturated: report.proper_hereditary_saturated.holds,
        loop_bound,
        bounded_loops_have_exits,
        domain_condition: report.domain.verdict.holds,
        simple: report.simple,
        condition_c: report.condition_c,
        trivial_labeling,
        violations,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::parse_graph;

    fn brute(name: &str) -> Verdict {
        let g = fixtures::load(name);
        disagreeable_bruteforce(&g, &stable_partition(&g), Limits::default()).unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        let g1 = fixtures::load("G1");
        let v = brute("G1");
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::Disagree {
                set: g1.singleton(0),
                word: g1.parse_word("a").unwrap()
            })
        );
        assert!(brute("G2").holds);
        let v = brute("G3");
        assert!(!v.holds);
        let g3 = fixtures::load("G3");
        match v.witness {
            Some(Witness::Disagree { word, .. }) => {
                assert_eq!(g3.format_word(&word.least_rotation()), "aab")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn condition_l_examples() {
        assert!(!condition_l_graph(&fixtures::load("G5")));
        assert!(condition_l_graph(&fixtures::load("G2")));
        assert!(!condition_l_graph(&fixtures::load("G1")));
        // A cycle whose vertex branches into a sink-free tail still has an exit.
        assert!(condition_l_graph(&fixtures::load("G8")));
    }

    #[test]
    fn cofinal_examples() {
        assert!(!graph_cofinal(&fixtures::load("G4")));
        assert!(graph_cofinal(&fixtures::load("G3")));
        assert!(graph_cofinal(&fixtures::load("G2")));
        // z's loop is unreachable from u and w
        assert!(!graph_cofinal(&fixtures::load("G9")));
    }

    #[test]
    fn fuzz_is_deterministic_and_in_scope() {
        let p = FuzzParams {
            count: 3,
            seed: 42,
            ..FuzzParams::default()
        };
        let a: Vec<_> = fuzz_graphs(p).unwrap().collect();
        let b: Vec<_> = fuzz_graphs(p).unwrap().collect();
        assert_eq!(a.len(), 3);
        assert_eq!(a, b);
        for g in &a {
            assert!(crate::validate(g, &stable_partition(g)).in_scope());
        }
    }

    #[test]
    fn single_vertex_fuzz_gives_roses() {
        let p = FuzzParams {
            max_vertices: 1,
            count: 20,
            seed: 7,
            ..FuzzParams::default()
        };
        for g in fuzz_graphs(p).unwrap() {
            assert_eq!(g.vertex_count(), 1);
            assert!(g.edge_count() >= 1);
        }
    }

    #[test]
    fn fuzz_rejects_bad_params() {
        let p = FuzzParams {
            count: 0,
            ..FuzzParams::default()
        };
        assert!(matches!(fuzz_graphs(p), Err(Error::InvalidParam(_))));
    }

    #[test]
    fn trivial_labeling_stream() {
        let p = FuzzParams {
            count: 10,
            trivial_labeling: true,
            ..FuzzParams::default()
        };
        let mut s = fuzz_graphs(p).unwrap();
        for g in s.by_ref() {
            assert!(g.has_trivial_labeling());
        }
        assert_eq!(s.discarded(), 0);
    }

    #[test]
    fn cross_check_examples() {
        let lim = Limits::default();
        let r = cross_check(&fixtures::load("G5"), lim).unwrap();
        assert_eq!(
            r.trivial_labeling,
            Some(TrivialLabelingCheck {
                condition_l: false,
                cofinal: true
            })
        );
        assert!(!r.disagreeable && !r.simple);
        assert!(r.is_consistent(), "{:?}", r.violations);

        for name in ["G2", "G3"] {
            let r = cross_check(&fixtures::load(name), lim).unwrap();
            assert!(r.domain_condition);
            assert!(r.is_consistent(), "{name}: {:?}", r.violations);
        }

        let g = parse_graph(&r.graph_text).unwrap();
        assert_eq!(g.vertex_count(), 2);
    }
}
