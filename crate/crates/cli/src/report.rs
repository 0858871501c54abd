use std::fmt::Write as _;
use std::time::Instant;

use labeled_simplicity::conditions::{
    classify_loops, simplicity_verdict, Limits, SimplicityReport,
};
use labeled_simplicity::witness::verify;
use labeled_simplicity::{AtomTable, LabeledGraph, LatticeElement, VertexSet, Witness, Word};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub labels: usize,
    pub vertex_names: Vec<String>,
    pub alphabet: Vec<String>,
    pub trivial_labeling: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSummary {
    pub count: usize,
    pub stabilization_level: usize,
    pub classes: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub no_sinks: bool,
    pub no_sources: bool,
    pub weakly_left_resolving: bool,
    pub set_finite: bool,
    pub receiver_set_finite: bool,
    pub in_scope: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisagreeWitness {
    pub set: Vec<String>,
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CofinalWitness {
    pub atom: Vec<String>,
    pub stem: String,
    pub cycle: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HereditarySaturatedWitness {
    pub support: Vec<String>,
    pub members: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainWitness {
    pub word: String,
}

/// Certificates for the failing side of each condition; `null` when absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    pub disagreeable: Option<DisagreeWitness>,
    pub strongly_cofinal: Option<CofinalWitness>,
    pub proper_hereditary_saturated: Option<HereditarySaturatedWitness>,
    pub domain_condition: Option<DomainWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleEntry {
    pub word: String,
    pub set: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopEntry {
    pub word: String,
    pub set: Vec<String>,
    pub exit_type_one: bool,
    pub exit_type_two: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopSummary {
    pub max_len: usize,
    pub loops: Vec<LoopEntry>,
    pub without_exit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayEntry {
    pub condition: String,
    pub ok: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub graph: GraphSummary,
    pub atoms: AtomSummary,
    pub validation: ValidationSummary,
    pub disagreeable: bool,
    pub strongly_cofinal: bool,
    pub cycles_without_exit: Vec<CycleEntry>,
    pub proper_hereditary_saturated: bool,
    pub domain_condition: bool,
    pub simple: bool,
    pub condition_c: bool,
    pub consistent: bool,
    pub witnesses: Witnesses,
    pub loops: Option<LoopSummary>,
    pub witness_replay: Option<Vec<ReplayEntry>>,
    pub timing: Timing,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    pub verify_witness: bool,
    pub max_loop_len: Option<usize>,
    pub limits: Limits,
}

fn names(g: &LabeledGraph, s: &VertexSet) -> Vec<String> {
    g.set_names(s)
}

fn element_names(g: &LabeledGraph, atoms: &AtomTable, e: &LatticeElement) -> Vec<String> {
    names(g, &atoms.vertex_set(e))
}

fn witnesses(g: &LabeledGraph, r: &SimplicityReport) -> Witnesses {
    let disagreeable = match &r.disagreeable.witness {
        Some(Witness::Disagree { set, word }) => Some(DisagreeWitness {
            set: names(g, set),
            word: g.format_word(word),
        }),
        _ => None,
    };
    let strongly_cofinal = match &r.strongly_cofinal.witness {
        Some(Witness::Cofinal { atom, stem, cycle }) => Some(CofinalWitness {
            atom: names(g, atom),
            stem: g.format_word(stem),
            cycle: g.format_word(cycle),
        }),
        _ => None,
    };
    let proper_hereditary_saturated = match &r.proper_hereditary_saturated.witness {
        Some(Witness::ProperHereditarySaturated { support, members }) => {
            Some(HereditarySaturatedWitness {
                support: element_names(g, &r.atoms, support),
                members: members
                    .iter()
                    .map(|m| element_names(g, &r.atoms, m))
                    .collect(),
            })
        }
        _ => None,
    };
    let domain_condition = match &r.domain.verdict.witness {
        Some(Witness::DomainFail { word }) => Some(DomainWitness {
            word: g.format_word(word),
        }),
        _ => None,
    };
    Witnesses {
        disagreeable,
        strongly_cofinal,
        proper_hereditary_saturated,
        domain_condition,
    }
}

/// Runs every check on an in-scope graph; scope refusals surface as
/// `Error::OutsideScope`.
pub fn analyze(
    g: &LabeledGraph,
    opts: AnalyzeOptions,
) -> labeled_simplicity::Result<AnalysisReport> {
    let start = Instant::now();
    let r = simplicity_verdict(g, opts.limits)?;
    let atoms = &r.atoms;
    let loops = match opts.max_loop_len {
        Some(max_len) => {
            let lr = classify_loops(g, atoms, max_len, opts.limits)?;
            Some(LoopSummary {
                max_len,
                without_exit: lr.without_exit().count(),
                loops: lr
                    .loops
                    .iter()
                    .map(|l| LoopEntry {
                        word: g.format_word(&l.word),
                        set: element_names(g, atoms, &l.set),
                        exit_type_one: l.exit_type_one,
                        exit_type_two: l.exit_type_two,
                    })
                    .collect(),
            })
        }
        None => None,
    };
    let mut report = AnalysisReport {
        graph: GraphSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            labels: g.label_count(),
            vertex_names: g.vertices().to_vec(),
            alphabet: g.alphabet().to_vec(),
            trivial_labeling: g.has_trivial_labeling(),
        },
        atoms: AtomSummary {
            count: atoms.len(),
            stabilization_level: atoms.stabilization_level(),
            classes: atoms.atoms().iter().map(|a| names(g, a)).collect(),
        },
        validation: ValidationSummary {
            no_sinks: r.validation.no_sinks.passed,
            no_sources: r.validation.no_sources.passed,
            weakly_left_resolving: r.validation.weakly_left_resolving.holds,
            set_finite: r.validation.set_finite,
            receiver_set_finite: r.validation.receiver_set_finite,
            in_scope: r.validation.in_scope(),
        },
        disagreeable: r.disagreeable.holds,
        strongly_cofinal: r.strongly_cofinal.holds,
        cycles_without_exit: r
            .cycles_without_exit
            .iter()
            .map(|c| CycleEntry {
                word: g.format_word(&c.word),
                set: element_names(g, atoms, &c.set),
            })
            .collect(),
        proper_hereditary_saturated: r.proper_hereditary_saturated.holds,
        domain_condition: r.domain.verdict.holds,
        simple: r.simple,
        condition_c: r.condition_c,
        consistent: r.consistent,
        witnesses: witnesses(g, &r),
        loops,
        witness_replay: None,
        timing: Timing { elapsed_ms: 0.0 },
    };
    if opts.verify_witness {
        report.witness_replay = Some(replay_witnesses(g, atoms, &report));
    }
    report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn parse_set(g: &LabeledGraph, names: &[String]) -> Result<VertexSet, String> {
    g.set_of(names).map_err(|e| e.to_string())
}

fn parse_word(g: &LabeledGraph, text: &str) -> Result<Word, String> {
    g.parse_word(text).map_err(|e| e.to_string())
}

fn parse_element(
    g: &LabeledGraph,
    atoms: &AtomTable,
    names: &[String],
) -> Result<LatticeElement, String> {
    let s = parse_set(g, names)?;
    atoms.element_of(&s).ok_or_else(|| {
        format!(
            "{} is not a union of generalized vertices",
            g.format_set(&s)
        )
    })
}

/// Rebuilds each witness from its serialized strings and re-checks it
/// against the definitions.
pub fn replay_witnesses(
    g: &LabeledGraph,
    atoms: &AtomTable,
    report: &AnalysisReport,
) -> Vec<ReplayEntry> {
    let w = &report.witnesses;
    let mut rebuilt: Vec<(&str, Result<Witness, String>)> = Vec::new();
    if let Some(d) = &w.disagreeable {
        rebuilt.push((
            "disagreeable",
            parse_set(g, &d.set).and_then(|set| {
                Ok(Witness::Disagree {
                    set,
                    word: parse_word(g, &d.word)?,
                })
            }),
        ));
    }
    if let Some(c) = &w.strongly_cofinal {
        rebuilt.push((
            "strongly_cofinal",
            parse_set(g, &c.atom).and_then(|atom| {
                Ok(Witness::Cofinal {
                    atom,
                    stem: parse_word(g, &c.stem)?,
                    cycle: parse_word(g, &c.cycle)?,
                })
            }),
        ));
    }
    if let Some(h) = &w.proper_hereditary_saturated {
        rebuilt.push((
            "proper_hereditary_saturated",
            parse_element(g, atoms, &h.support).and_then(|support| {
                let members = h
                    .members
                    .iter()
                    .map(|m| parse_element(g, atoms, m))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Witness::ProperHereditarySaturated { support, members })
            }),
        ));
    }
    if let Some(d) = &w.domain_condition {
        rebuilt.push((
            "domain_condition",
            parse_word(g, &d.word).map(|word| Witness::DomainFail { word }),
        ));
    }
    for c in &report.cycles_without_exit {
        rebuilt.push((
            "cycles_without_exit",
            parse_set(g, &c.set).and_then(|set| {
                Ok(Witness::CycleNoExit {
                    word: parse_word(g, &c.word)?,
                    set,
                })
            }),
        ));
    }
    rebuilt
        .into_iter()
        .map(|(condition, w)| {
            let outcome = w.and_then(|w| verify(g, atoms, &w));
            ReplayEntry {
                condition: condition.to_string(),
                ok: outcome.is_ok(),
                error: outcome.err(),
            }
        })
        .collect()
}

fn braces(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Plain-text rendering of a report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let g = &r.graph;
    let _ = writeln!(
        out,
        "graph: {} vertices, {} edges, {} labels{}",
        g.vertices,
        g.edges,
        g.labels,
        if g.trivial_labeling {
            " (trivial labeling)"
        } else {
            ""
        }
    );
    let classes: Vec<String> = r.atoms.classes.iter().map(|c| braces(c)).collect();
    let _ = writeln!(
        out,
        "atoms: {} at stabilization level {}: {}",
        r.atoms.count,
        r.atoms.stabilization_level,
        classes.join(" ")
    );
    let _ = writeln!(out, "in scope: {}", yes_no(r.validation.in_scope));
    let _ = write!(out, "disagreeable: {}", yes_no(r.disagreeable));
    if let Some(w) = &r.witnesses.disagreeable {
        let _ = write!(out, " (forced word {} from {})", w.word, braces(&w.set));
    }
    out.push('\n');
    let _ = write!(out, "strongly cofinal: {}", yes_no(r.strongly_cofinal));
    if let Some(w) = &r.witnesses.strongly_cofinal {
        let _ = write!(
            out,
            " ({} ({})^ω escapes the ranges of {})",
            w.stem,
            w.cycle,
            braces(&w.atom)
        );
    }
    out.push('\n');
    if r.cycles_without_exit.is_empty() {
        let _ = writeln!(out, "cycles without exit: none");
    } else {
        let cycles: Vec<String> = r
            .cycles_without_exit
            .iter()
            .map(|c| format!("({}, {})", c.word, braces(&c.set)))
            .collect();
        let _ = writeln!(out, "cycles without exit: {}", cycles.join(" "));
    }
    let _ = write!(
        out,
        "proper hereditary saturated family: {}",
        yes_no(r.proper_hereditary_saturated)
    );
    if let Some(w) = &r.witnesses.proper_hereditary_saturated {
        let members: Vec<String> = w.members.iter().map(|m| braces(m)).collect();
        let _ = write!(out, " ({})", members.join(", "));
    }
    out.push('\n');
    let _ = writeln!(out, "domain condition: {}", yes_no(r.domain_condition));
    let _ = writeln!(out, "simple: {}", yes_no(r.simple));
    let _ = writeln!(out, "condition (c): {}", yes_no(r.condition_c));
    let _ = writeln!(out, "consistent: {}", yes_no(r.consistent));
    if let Some(l) = &r.loops {
        let _ = writeln!(
            out,
            "loops up to length {}: {} classes, {} without exit",
            l.max_len,
            l.loops.len(),
            l.without_exit
        );
        for e in &l.loops {
            let mut kinds = Vec::new();
            if e.exit_type_one {
                kinds.push("I");
            }
            if e.exit_type_two {
                kinds.push("II");
            }
            let exits = if kinds.is_empty() {
                "no exit".to_string()
            } else {
                format!("exit {}", kinds.join("+"))
            };
            let _ = writeln!(out, "  ({}, {}): {}", e.word, braces(&e.set), exits);
        }
    }
    if let Some(replay) = &r.witness_replay {
        let failed = replay.iter().filter(|e| !e.ok).count();
        let _ = writeln!(
            out,
            "witness replay: {} checked, {} failed",
            replay.len(),
            failed
        );
        for e in replay.iter().filter(|e| !e.ok) {
            let _ = writeln!(
                out,
                "  {}: {}",
                e.condition,
                e.error.as_deref().unwrap_or("")
            );
        }
    }
    out
}
