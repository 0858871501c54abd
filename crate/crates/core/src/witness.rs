//! Re-checks certificates against the raw definitions, using only
//! labeled-path languages, relative ranges and lattice enumeration.

use std::collections::{BTreeSet, HashSet};

use crate::conditions::{CycleWithoutExit, SimplicityReport};
use crate::graph::{LabeledGraph, VertexSet, Word};
use crate::lattice::{AtomTable, LatticeElement};
use crate::verdict::Witness;

pub type Check = std::result::Result<(), String>;

fn singleton(w: &Word) -> BTreeSet<Word> {
    BTreeSet::from([w.clone()])
}

fn require_element(atoms: &AtomTable, set: &VertexSet, what: &str) -> Check {
    if set.is_empty() {
        return Err(format!("{what} is empty"));
    }
    atoms
        .element_of(set)
        .map(|_| ())
        .ok_or_else(|| format!("{what} is not a union of generalized vertices"))
}

/// 𝓛(set·E^{n|word|}) = {wordⁿ} for every n ≥ 1. The sets r(set, wordⁿ)
/// are eventually periodic, so checking each distinct one covers all n.
pub fn check_forced_periodic(g: &LabeledGraph, set: &VertexSet, word: &Word) -> Check {
    if word.is_empty() {
        return Err("empty word".into());
    }
    let mut seen = HashSet::new();
    let mut cur = set.clone();
    while seen.insert(cur.clone()) {
        let lang = g
            .labeled_paths(&cur, word.len())
            .map_err(|e| e.to_string())?;
        if lang != singleton(word) {
            return Err(format!(
                "{} emits {} words of length {}",
                g.format_set(&cur),
                lang.len(),
                word.len()
            ));
        }
        cur = g.relative_range(&cur, word);
    }
    for n in 1..=3 {
        let lang = g
            .labeled_paths(set, n * word.len())
            .map_err(|e| e.to_string())?;
        if lang != singleton(&word.repeat(n)) {
            return Err(format!(
                "language at length {} is not a power",
                n * word.len()
            ));
        }
    }
    Ok(())
}

/// ⋃ r(atom, λ) over λ of length ≥ 1, by iterating relative ranges of sets.
pub fn covered_by_ranges(g: &LabeledGraph, atom: &VertexSet) -> VertexSet {
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut frontier = vec![atom.clone()];
    let mut union = g.empty_set();
    while let Some(s) = frontier.pop() {
        for l in g.labels() {
            let r = g.relative_range(&s, &Word(vec![l]));
            if !r.is_empty() && seen.insert(r.clone()) {
                union.union_with(&r);
                frontier.push(r);
            }
        }
    }
    union
}

fn check_cofinal(
    g: &LabeledGraph,
    atoms: &AtomTable,
    atom: &VertexSet,
    stem: &Word,
    cycle: &Word,
) -> Check {
    if !atoms.atoms().contains(atom) {
        return Err(format!(
            "{} is not a generalized vertex",
            g.format_set(atom)
        ));
    }
    if cycle.is_empty() {
        return Err("empty cycle".into());
    }
    let covered = covered_by_ranges(g, atom);
    let mut prefix = Word::epsilon();
    let check_prefix = |prefix: &Word| -> Check {
        let r = g.range(prefix);
        if r.is_empty() {
            return Err(format!("prefix {} has empty range", g.format_word(prefix)));
        }
        if r.is_subset(&covered) {
            return Err(format!("prefix {} is covered", g.format_word(prefix)));
        }
        Ok(())
    };
    for &l in stem.labels() {
        prefix.push(l);
        check_prefix(&prefix)?;
    }
    let mut boundaries = HashSet::new();
    while boundaries.insert(g.range(&prefix)) {
        for &l in cycle.labels() {
            prefix.push(l);
            check_prefix(&prefix)?;
        }
    }
    Ok(())
}

/// Cycle condition, checked on every member of `set ⊓ 𝓔`.
pub fn check_cycle_without_exit(
    g: &LabeledGraph,
    atoms: &AtomTable,
    word: &Word,
    set: &VertexSet,
) -> Check {
    require_element(atoms, set, "cycle set")?;
    if word.is_empty() {
        return Err("empty word".into());
    }
    let lang = g
        .labeled_paths(set, word.len())
        .map_err(|e| e.to_string())?;
    if lang != singleton(word) {
        return Err(format!("type-(I) exit from {}", g.format_set(set)));
    }
    let e = atoms.element_of(set).expect("checked above");
    for b in e.submasks() {
        let bs = atoms.vertex_set(&b);
        if g.relative_range(&bs, word) != bs {
            return Err(format!("{} is not fixed", g.format_set(&bs)));
        }
    }
    Ok(())
}

/// Definitional sweep for a hereditary saturated family given by its full
/// member list: subsets, unions, relative ranges for every word of length
/// 1..=`range_depth`, and saturation via one-letter images.
pub fn check_hereditary_saturated(
    g: &LabeledGraph,
    atoms: &AtomTable,
    members: &[LatticeElement],
    range_depth: usize,
) -> Check {
    let fam: HashSet<&LatticeElement> = members.iter().collect();
    let all: Vec<LatticeElement> = atoms.elements().collect();
    let in_fam = |s: &VertexSet| atoms.element_of(s).is_some_and(|e| fam.contains(&e));
    for m in members {
        for e in all.iter().filter(|e| e.is_subset(m)) {
            if !fam.contains(e) {
                return Err(format!("not closed under subsets at {m:?}"));
            }
        }
        for n in members {
            if !fam.contains(&m.union(n)) {
                return Err(format!("not closed under unions at {m:?}, {n:?}"));
            }
        }
        // layer k holds r(m, α) for all |α| = k
        let mut layer: HashSet<VertexSet> = HashSet::from([atoms.vertex_set(m)]);
        for _ in 0..range_depth {
            let mut next = HashSet::new();
            for s in &layer {
                for l in g.labels() {
                    let r = g.relative_range(s, &Word(vec![l]));
                    if !in_fam(&r) {
                        return Err(format!("range {} escapes the family", g.format_set(&r)));
                    }
                    next.insert(r);
                }
            }
            layer = next;
        }
    }
    for e in all.iter().filter(|e| !fam.contains(e)) {
        let s = atoms.vertex_set(e);
        if g.labels()
            .all(|l| in_fam(&g.relative_range(&s, &Word(vec![l]))))
        {
            return Err(format!("not saturated at {}", g.format_set(&s)));
        }
    }
    Ok(())
}

/// Re-checks one witness against its defining condition.
pub fn verify(g: &LabeledGraph, atoms: &AtomTable, witness: &Witness) -> Check {
    match witness {
        Witness::Disagree { set, word } => {
            require_element(atoms, set, "witness set")?;
            check_forced_periodic(g, set, word)
        }
        Witness::Cofinal { atom, stem, cycle } => check_cofinal(g, atoms, atom, stem, cycle),
        Witness::CycleNoExit { word, set } => check_cycle_without_exit(g, atoms, word, set),
        Witness::ProperHereditarySaturated { support, members } => {
            if !members.iter().any(|m| !m.is_empty()) {
                return Err("family has no nonempty member".into());
            }
            if members.contains(&atoms.full_element()) {
                return Err("family is all of the lattice".into());
            }
            if !members.contains(support) {
                return Err("support is not a member".into());
            }
            check_hereditary_saturated(g, atoms, members, 1)
        }
        Witness::DomainFail { word } => {
            let target = g.range(word);
            for d in atoms.elements() {
                if g.relative_range(&atoms.vertex_set(&d), word) == target {
                    return Err(format!("{d:?} is a domain"));
                }
            }
            Ok(())
        }
        Witness::NotWeaklyLeftResolving { left, right, word } => {
            let lhs = g
                .relative_range(left, word)
                .intersection(&g.relative_range(right, word));
            if lhs == g.relative_range(&left.intersection(right), word) {
                Err("identity holds".into())
            } else {
                Ok(())
            }
        }
    }
}

/// Every certificate in a report, labeled by the condition it supports.
pub fn report_witnesses(report: &SimplicityReport) -> Vec<(String, Witness)> {
    let mut out = Vec::new();
    for (name, v) in [
        ("disagreeable", &report.disagreeable),
        ("strongly_cofinal", &report.strongly_cofinal),
        (
            "proper_hereditary_saturated",
            &report.proper_hereditary_saturated,
        ),
        ("domain_condition", &report.domain.verdict),
    ] {
        if let Some(w) = &v.witness {
            out.push((name.to_string(), w.clone()));
        }
    }
    for CycleWithoutExit { word, set } in &report.cycles_without_exit {
        out.push((
            "cycles_without_exit".to_string(),
            Witness::CycleNoExit {
                word: word.clone(),
                set: report.atoms.vertex_set(set),
            },
        ));
    }
    out
}

/// Verifies every certificate in a report; returns the failures.
pub fn verify_report(g: &LabeledGraph, report: &SimplicityReport) -> Vec<(String, String)> {
    report_witnesses(report)
        .into_iter()
        .filter_map(|(name, w)| verify(g, &report.atoms, &w).err().map(|e| (name, e)))
        .collect()
}
