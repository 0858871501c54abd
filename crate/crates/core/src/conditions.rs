//! The labeled-space conditions and the simplicity verdict.
//!
//! Everything here assumes a graph that passed [`crate::graph::validate`]:
//! no sinks, no sources, weakly left-resolving. Under those assumptions
//! relative ranges of atoms are unions of atoms, distinct atoms have
//! disjoint letter images, and every nonempty set emits at least one label.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::automaton::{self, build_range_automaton, TrajectoryShape, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::graph::{validate, LabeledGraph, ValidationReport, VertexSet, Word};
use crate::lattice::{stable_partition, AtomTable, LatticeElement, DEFAULT_LATTICE_CAP};
use crate::verdict::{Verdict, Witness};

/// Caps on the exhaustive sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub lattice_cap: usize,
    pub state_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            lattice_cap: DEFAULT_LATTICE_CAP,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

/// Disagreeable iff no atom has an infinite forced trajectory.
///
/// If 𝓛(A·E^k) is a singleton for a nonempty A ∈ 𝓔 then so is 𝓛(C·E^k)
/// for every atom C ⊆ A, since each is a nonempty subset. Conversely an
/// atom whose forcing never breaks yields the witness set on its lasso
/// cycle, which is a relative range of an atom and hence lies in 𝓔.
pub fn is_disagreeable(g: &LabeledGraph, atoms: &AtomTable) -> Verdict {
    for atom in atoms.atoms() {
        if let Some((set, word)) =
            automaton::purely_periodic_forced_word(g, atom).expect("atoms are nonempty")
        {
            return Verdict::with_witness(false, Witness::Disagree { set, word });
        }
    }
    Verdict::holds()
}

/// ⋃ r(B, λ) over all labeled paths λ of length ≥ 1: the vertices reached
/// from `set` by at least one edge.
pub fn reachable_union(g: &LabeledGraph, set: &VertexSet) -> VertexSet {
    let mut reached = g.empty_set();
    let mut queue: VecDeque<usize> = set.iter().collect();
    while let Some(v) = queue.pop_front() {
        for l in g.labels() {
            for w in g.successors(v, l).iter() {
                if !reached.contains(w) {
                    reached.insert(w);
                    queue.push_back(w);
                }
            }
        }
    }
    reached
}

/// Strong cofinality over the closure of the infinite label sequences.
///
/// A sequence x lies in the closure iff r(x_[1,n]) ≠ ∅ for all n, so the
/// closure elements are exactly the infinite runs of the range automaton
/// seeded at the letter ranges r(a). For an atom B, x escapes coverage iff
/// every state on its run fails to be contained in U(B), the union of all
/// relative ranges of B; such a run exists iff a cycle is reachable inside
/// the non-covered states. Checking atoms suffices: each atom is a
/// generalized vertex, and any [v]_l contains the atom of v, whose
/// relative ranges are smaller.
pub fn is_strongly_cofinal(g: &LabeledGraph, atoms: &AtomTable, limits: Limits) -> Result<Verdict> {
    let mut seeds: Vec<VertexSet> = Vec::new();
    let mut seed_letter = Vec::new();
    for l in g.labels() {
        let r = g.range(&Word(vec![l]));
        if !r.is_empty() && !seeds.contains(&r) {
            seeds.push(r);
            seed_letter.push(l);
        }
    }
    let aut = build_range_automaton(g, &seeds, limits.state_cap)?;
    for atom in atoms.atoms() {
        let covered = reachable_union(g, atom);
        let outside: Vec<bool> = aut
            .states()
            .iter()
            .map(|s| !s.is_subset(&covered))
            .collect();
        if let Some((seed, stem, cycle)) = aut.find_lasso(|s| outside[s]) {
            let letter = seed_letter[aut.seeds().iter().position(|&s| s == seed).unwrap()];
            return Ok(Verdict::with_witness(
                false,
                Witness::Cofinal {
                    atom: atom.clone(),
                    stem: Word(vec![letter]).concat(&stem),
                    cycle,
                },
            ));
        }
    }
    Ok(Verdict::holds())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWithoutExit {
    pub word: Word,
    pub set: LatticeElement,
}

/// All pairs (α, A) with A ∈ 𝓔 nonempty that are cycles without exit,
/// one per set A, with the shortest such α.
///
/// No type-(I) exit means 𝓛(A·E^{|α|}) = {α}, and r(A, α) = A then makes
/// the forced trajectory of A purely periodic. With w the letters of one
/// trajectory period, the cycle condition B = r(B, α) for B ∈ A ⊓ 𝓔 reduces
/// to atoms, on which r(·, w) acts as a permutation; α = w^k with k its order.
pub fn find_cycles_without_exit(
    g: &LabeledGraph,
    atoms: &AtomTable,
    limits: Limits,
) -> Result<Vec<CycleWithoutExit>> {
    atoms.check_cap(limits.lattice_cap)?;
    let mut out = Vec::new();
    for e in atoms.elements().skip(1) {
        let set = atoms.vertex_set(&e);
        let t = automaton::forced_trajectory(g, &set)?;
        let TrajectoryShape::Lasso { stem: 0, .. } = t.shape else {
            continue;
        };
        let w = t.cycle_word().expect("lasso");
        let Some(order) = permutation_order(g, atoms, &e, &w) else {
            continue;
        };
        let word = w.repeat(order);
        let is_cycle = e.atom_indices().all(|i| {
            let c = atoms.atom(i);
            g.relative_range(c, &word) == *c
        });
        if is_cycle {
            out.push(CycleWithoutExit { word, set: e });
        }
    }
    Ok(out)
}

/// Order of the map C ↦ r(C, w) on the atoms of `e`, if it permutes them.
fn permutation_order(
    g: &LabeledGraph,
    atoms: &AtomTable,
    e: &LatticeElement,
    w: &Word,
) -> Option<usize> {
    let members: Vec<usize> = e.atom_indices().collect();
    let mut step = HashMap::new();
    for &i in &members {
        let img = atoms.element_of(&g.relative_range(atoms.atom(i), w))?;
        if img.atom_count() != 1 || !img.is_subset(e) {
            return None;
        }
        step.insert(i, img.atom_indices().next().unwrap());
    }
    let mut order = 1;
    for &i in &members {
        let mut len = 1;
        let mut cur = step[&i];
        while cur != i {
            cur = step[&cur];
            len += 1;
            if len > members.len() {
                return None;
            }
        }
        order = lcm(order, len);
    }
    Some(order)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopRecord {
    pub word: Word,
    pub set: LatticeElement,
    /// Another path of the same length leaves the set.
    pub exit_type_one: bool,
    /// The set is properly contained in its range.
    pub exit_type_two: bool,
}

impl LoopRecord {
    pub fn has_exit(&self) -> bool {
        self.exit_type_one || self.exit_type_two
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopReport {
    pub max_len: usize,
    pub loops: Vec<LoopRecord>,
}

impl LoopReport {
    pub fn without_exit(&self) -> impl Iterator<Item = &LoopRecord> {
        self.loops.iter().filter(|l| !l.has_exit())
    }
}

/// Loops (α, A), A ⊆ r(A, α), with |α| ≤ `max_len`, tagged with their exit
/// types. Complete only up to `max_len`.
///
/// Both exit types depend on α only through the length |α|, the range
/// r(A, α) and whether α is the forced prefix of A, so one record is kept
/// per class (A, |α|, r(A, α), forced), represented by its first word in
/// label order. This keeps the sweep polynomial in the number of ranges.
pub fn classify_loops(
    g: &LabeledGraph,
    atoms: &AtomTable,
    max_len: usize,
    limits: Limits,
) -> Result<LoopReport> {
    if max_len == 0 {
        return Err(Error::InvalidParam("max_len must be at least 1".into()));
    }
    atoms.check_cap(limits.lattice_cap)?;
    let mut loops = Vec::new();
    for e in atoms.elements().skip(1) {
        let set = atoms.vertex_set(&e);
        // 𝓛(A·E^n) is a singleton exactly along the forced prefix.
        let t = automaton::forced_trajectory(g, &set)?;
        let forced: Vec<_> = match t.shape {
            TrajectoryShape::Finite => t.letters.clone(),
            TrajectoryShape::Lasso { stem, period } => (0..max_len)
                .map(|i| {
                    if i < stem {
                        t.letters[i]
                    } else {
                        t.letters[stem + (i - stem) % period]
                    }
                })
                .collect(),
        };
        let mut layer: Vec<(Word, VertexSet, bool)> = vec![(Word::epsilon(), set.clone(), true)];
        for n in 1..=max_len {
            let mut seen: HashSet<(VertexSet, bool)> = HashSet::new();
            let mut next = Vec::new();
            for (word, range, on_forced) in &layer {
                for l in g.labels() {
                    let img = g.letter_image(range, l);
                    let still_forced = *on_forced && forced.get(n - 1) == Some(&l);
                    if img.is_empty() || !seen.insert((img.clone(), still_forced)) {
                        continue;
                    }
                    let mut w = word.clone();
                    w.push(l);
                    next.push((w, img, still_forced));
                }
            }
            for (word, range, on_forced) in &next {
                if set.is_subset(range) {
                    loops.push(LoopRecord {
                        exit_type_one: !on_forced,
                        exit_type_two: range != &set,
                        word: word.clone(),
                        set: e.clone(),
                    });
                }
            }
            layer = next;
        }
    }
    Ok(LoopReport { max_len, loops })
}

/// A hereditary saturated family. Closed under subsets and finite unions,
/// it is exactly the down-set of its union `support`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsFamily {
    pub support: LatticeElement,
}

impl HsFamily {
    pub fn contains(&self, e: &LatticeElement) -> bool {
        e.is_subset(&self.support)
    }

    /// All members, smallest mask first.
    pub fn members(&self, limits: Limits) -> Result<Vec<LatticeElement>> {
        let k = self.support.atom_count();
        if k > limits.lattice_cap {
            return Err(Error::LatticeCap {
                atoms: k,
                cap: limits.lattice_cap,
            });
        }
        let mut m = self.support.submasks();
        m.sort();
        Ok(m)
    }

    pub fn is_proper(&self, atoms: &AtomTable) -> bool {
        self.support != atoms.full_element()
    }
}

/// Smallest hereditary saturated family containing `seed`.
///
/// Hereditary closure adds the atoms of letter images; saturation adds any
/// atom all of whose letter images already lie in the family. One-letter
/// images suffice: if every r(A, a) is in a hereditary H then so is every
/// r(A, aβ) = r(r(A, a), β).
pub fn hereditary_saturated_closure(
    g: &LabeledGraph,
    atoms: &AtomTable,
    seed: &LatticeElement,
    limits: Limits,
) -> Result<HsFamily> {
    if seed.is_empty() {
        return Err(Error::EmptySet);
    }
    atoms.check_cap(limits.lattice_cap)?;
    let mut support = seed.clone();
    loop {
        let mut queue: Vec<usize> = support.atom_indices().collect();
        while let Some(i) = queue.pop() {
            for l in g.labels() {
                let img = g.letter_image(atoms.atom(i), l);
                for j in atoms.atoms_meeting(&img).atom_indices() {
                    if !support.contains_atom(j) {
                        support = support.union(&atoms.single(j));
                        queue.push(j);
                    }
                }
            }
        }
        let covered = atoms.vertex_set(&support);
        let saturated: Vec<usize> = (0..atoms.len())
            .filter(|&j| !support.contains_atom(j))
            .filter(|&j| {
                g.labels()
                    .all(|l| g.letter_image(atoms.atom(j), l).is_subset(&covered))
            })
            .collect();
        if saturated.is_empty() {
            return Ok(HsFamily { support });
        }
        for j in saturated {
            support = support.union(&atoms.single(j));
        }
    }
}

/// Holds iff 𝓔 has a proper nonempty hereditary saturated subfamily.
/// Any such family contains an atom, and that atom's closure is contained
/// in it, so the atom closures are the only candidates.
pub fn has_proper_hereditary_saturated(
    g: &LabeledGraph,
    atoms: &AtomTable,
    limits: Limits,
) -> Result<Verdict> {
    for i in 0..atoms.len() {
        let fam = hereditary_saturated_closure(g, atoms, &atoms.single(i), limits)?;
        if fam.is_proper(atoms) {
            let members = fam.members(limits)?;
            return Ok(Verdict::with_witness(
                true,
                Witness::ProperHereditarySaturated {
                    support: fam.support,
                    members,
                },
            ));
        }
    }
    Ok(Verdict::fails())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainCheck {
    pub verdict: Verdict,
    /// Distinct range profiles ⟨r(A, α)⟩_A over realized words α.
    pub word_classes: usize,
}

/// Every realized word α needs some D ∈ 𝓔 with r(D, α) = r(α).
///
/// Two words with the same profile ⟨r(A, α)⟩ over the atoms A behave the
/// same, so the quantifier runs over the states of the product range
/// automaton. For each class the candidate D is the union of the atoms
/// with nonempty α-range; if it fails, every member of 𝓔 is tried.
/// Since the atoms cover E⁰, E⁰ itself is in 𝓔 and the condition always
/// holds on finite graphs; the check still evaluates it class by class.
pub fn check_domain_condition(
    g: &LabeledGraph,
    atoms: &AtomTable,
    limits: Limits,
) -> Result<DomainCheck> {
    atoms.check_cap(limits.lattice_cap)?;
    let mut index: HashMap<Vec<VertexSet>, usize> = HashMap::new();
    let mut profiles: Vec<(Vec<VertexSet>, Word)> = Vec::new();
    let start: Vec<VertexSet> = atoms.atoms().to_vec();
    let mut queue: VecDeque<(Vec<VertexSet>, Word)> = VecDeque::from([(start, Word::epsilon())]);
    while let Some((profile, word)) = queue.pop_front() {
        for l in g.labels() {
            let next: Vec<VertexSet> = profile.iter().map(|s| g.letter_image(s, l)).collect();
            if next.iter().all(|s| s.is_empty()) || index.contains_key(&next) {
                continue;
            }
            if profiles.len() >= limits.state_cap {
                return Err(Error::StateCap {
                    cap: limits.state_cap,
                });
            }
            let mut w = word.clone();
            w.push(l);
            index.insert(next.clone(), profiles.len());
            profiles.push((next.clone(), w.clone()));
            queue.push_back((next, w));
        }
    }
    for (profile, word) in &profiles {
        let target = profile.iter().fold(g.empty_set(), |acc, s| acc.union(s));
        let domain = LatticeElement::from_atoms(
            atoms.len(),
            (0..atoms.len()).filter(|&i| !profile[i].is_empty()),
        );
        let image = |e: &LatticeElement| {
            e.atom_indices()
                .fold(g.empty_set(), |acc, i| acc.union(&profile[i]))
        };
        if image(&domain) != target && !atoms.elements().any(|d| image(&d) == target) {
            return Ok(DomainCheck {
                verdict: Verdict::with_witness(false, Witness::DomainFail { word: word.clone() }),
                word_classes: profiles.len(),
            });
        }
    }
    Ok(DomainCheck {
        verdict: Verdict::holds(),
        word_classes: profiles.len(),
    })
}

#[derive(Debug, Clone)]
pub struct SimplicityReport {
    pub atoms: AtomTable,
    pub validation: ValidationReport,
    pub disagreeable: Verdict,
    pub strongly_cofinal: Verdict,
    pub cycles_without_exit: Vec<CycleWithoutExit>,
    pub proper_hereditary_saturated: Verdict,
    pub domain: DomainCheck,
    /// Strongly cofinal and disagreeable.
    pub simple: bool,
    /// No cycle without exit and no proper hereditary saturated family.
    pub condition_c: bool,
    /// False only if the domain condition holds and `simple != condition_c`,
    /// which would be an internal soundness failure.
    pub consistent: bool,
}

pub fn simplicity_verdict(g: &LabeledGraph, limits: Limits) -> Result<SimplicityReport> {
    let atoms = stable_partition(g);
    let validation = validate(g, &atoms);
    validation.require_scope(g)?;
    let disagreeable = is_disagreeable(g, &atoms);
    let strongly_cofinal = is_strongly_cofinal(g, &atoms, limits)?;
    let cycles_without_exit = find_cycles_without_exit(g, &atoms, limits)?;
    let proper_hereditary_saturated = has_proper_hereditary_saturated(g, &atoms, limits)?;
    let domain = check_domain_condition(g, &atoms, limits)?;
    let simple = strongly_cofinal.holds && disagreeable.holds;
    let condition_c = cycles_without_exit.is_empty() && !proper_hereditary_saturated.holds;
    let consistent = !domain.verdict.holds || simple == condition_c;
    Ok(SimplicityReport {
        atoms,
        validation,
        disagreeable,
        strongly_cofinal,
        cycles_without_exit,
        proper_hereditary_saturated,
        domain,
        simple,
        condition_c,
        consistent,
    })
}
