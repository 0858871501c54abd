//! The range automaton `S --a--> r(S, a)` on nonempty vertex sets, forced
//! trajectories and their eventual periodicity.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Label, LabeledGraph, VertexSet, Word};

pub const DEFAULT_STATE_CAP: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeAutomaton {
    states: Vec<VertexSet>,
    // transitions[state][label]; `None` where the image is empty
    transitions: Vec<Vec<Option<usize>>>,
    seeds: Vec<usize>,
}

impl RangeAutomaton {
    pub fn states(&self) -> &[VertexSet] {
        &self.states
    }

    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition(&self, state: usize, l: Label) -> Option<usize> {
        self.transitions[state][l.0]
    }

    pub fn index_of(&self, set: &VertexSet) -> Option<usize> {
        self.states.iter().position(|s| s == set)
    }

    /// Finds a cycle reachable from an allowed seed through allowed states
    /// only. Returns `(seed, stem, cycle)` where `stem` leads from the seed to
    /// the first cycle state and `cycle` returns to it.
    pub fn find_lasso<F>(&self, allowed: F) -> Option<(usize, Word, Word)>
    where
        F: Fn(usize) -> bool,
    {
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let labels = self.transitions.first().map_or(0, Vec::len);
        let mut color = vec![WHITE; self.states.len()];
        for &seed in &self.seeds {
            if !allowed(seed) || color[seed] != WHITE {
                continue;
            }
            // (state, next label to try, label taken to enter this state)
            let mut stack: Vec<(usize, usize, Option<Label>)> = vec![(seed, 0, None)];
            color[seed] = GRAY;
            while let Some(top) = stack.last_mut() {
                let (s, next) = (top.0, top.1);
                if next == labels {
                    color[s] = BLACK;
                    stack.pop();
                    continue;
                }
                top.1 += 1;
                let l = Label(next);
                let Some(t) = self.transitions[s][next] else {
                    continue;
                };
                if !allowed(t) {
                    continue;
                }
                match color[t] {
                    WHITE => {
                        color[t] = GRAY;
                        stack.push((t, 0, Some(l)));
                    }
                    GRAY => {
                        let at = stack
                            .iter()
                            .position(|&(st, _, _)| st == t)
                            .expect("gray state is on the stack");
                        let stem = Word(stack[1..=at].iter().filter_map(|e| e.2).collect());
                        let mut cycle: Word =
                            Word(stack[at + 1..].iter().filter_map(|e| e.2).collect());
                        cycle.push(l);
                        return Some((seed, stem, cycle));
                    }
                    _ => {}
                }
            }
        }
        None
    }
}

/// Breadth-first closure of `seeds` under letter images, dropping empty
/// images. States are numbered in discovery order, seeds first.
pub fn build_range_automaton(
    g: &LabeledGraph,
    seeds: &[VertexSet],
    cap: usize,
) -> Result<RangeAutomaton> {
    let mut states: Vec<VertexSet> = Vec::new();
    let mut index: HashMap<VertexSet, usize> = HashMap::new();
    let mut seed_ids = Vec::new();
    let mut intern = |s: VertexSet, states: &mut Vec<VertexSet>| -> Result<usize> {
        if let Some(&i) = index.get(&s) {
            return Ok(i);
        }
        if states.len() >= cap {
            return Err(Error::StateCap { cap });
        }
        index.insert(s.clone(), states.len());
        states.push(s);
        Ok(states.len() - 1)
    };
    for s in seeds {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let id = intern(s.clone(), &mut states)?;
        if !seed_ids.contains(&id) {
            seed_ids.push(id);
        }
    }
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let mut row = Vec::with_capacity(g.label_count());
        for l in g.labels() {
            let img = g.letter_image(&states[next], l);
            row.push(if img.is_empty() {
                None
            } else {
                Some(intern(img, &mut states)?)
            });
        }
        transitions.push(row);
        next += 1;
    }
    Ok(RangeAutomaton {
        states,
        transitions,
        seeds: seed_ids,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryShape {
    /// Forcing breaks at the last listed set (two or more out-labels).
    Finite,
    /// `sets[stem + period]` would equal `sets[stem]`.
    Lasso { stem: usize, period: usize },
}

/// `sets[i + 1] = r(sets[i], letters[i])` where `letters[i]` is the only
/// label leaving `sets[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedTrajectory {
    pub sets: Vec<VertexSet>,
    pub letters: Vec<Label>,
    pub shape: TrajectoryShape,
}

impl ForcedTrajectory {
    /// Letters read around the lasso cycle, starting at `sets[stem]`.
    pub fn cycle_word(&self) -> Option<Word> {
        match self.shape {
            TrajectoryShape::Finite => None,
            TrajectoryShape::Lasso { stem, period } => {
                Some(Word(self.letters[stem..stem + period].to_vec()))
            }
        }
    }
}

pub fn forced_trajectory(g: &LabeledGraph, start: &VertexSet) -> Result<ForcedTrajectory> {
    if start.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut seen: HashMap<VertexSet, usize> = HashMap::new();
    let mut sets = vec![start.clone()];
    let mut letters = Vec::new();
    seen.insert(start.clone(), 0);
    loop {
        let cur = sets.last().expect("nonempty");
        let out = g.out_labels(cur);
        let [l] = out.as_slice() else {
            return Ok(ForcedTrajectory {
                sets,
                letters,
                shape: TrajectoryShape::Finite,
            });
        };
        let next = g.letter_image(cur, *l);
        letters.push(*l);
        if let Some(&p) = seen.get(&next) {
            let period = sets.len() - p;
            return Ok(ForcedTrajectory {
                sets,
                letters,
                shape: TrajectoryShape::Lasso { stem: p, period },
            });
        }
        seen.insert(next.clone(), sets.len());
        sets.push(next);
    }
}

/// If the forced trajectory of `start` is a lasso, the first set on its
/// cycle together with the primitive root β of the cycle word; then
/// 𝓛(W·E^{n|β|}) = {βⁿ} for all n ≥ 1.
pub fn purely_periodic_forced_word(
    g: &LabeledGraph,
    start: &VertexSet,
) -> Result<Option<(VertexSet, Word)>> {
    let t = forced_trajectory(g, start)?;
    Ok(match t.shape {
        TrajectoryShape::Finite => None,
        TrajectoryShape::Lasso { stem, .. } => {
            let w = t.cycle_word().expect("lasso has a cycle word");
            Some((t.sets[stem].clone(), w.primitive_root()))
        }
    })
}

/// Least N ≥ 1 with r(A₀, β̄_[1,N+k]) ⊆ ⋃_{j ≤ N} r(A₀, β̄_[1,j]) for all k ≥ 1,
/// where β̄ is the infinite repetition of β.
///
/// Writing T_j = r(A₀, β̄_[1,j]), the pair (T_j, j mod |β|) is eventually
/// periodic; once it first repeats, every later T_j has already appeared,
/// so only the finitely many sets before the repeat need checking.
pub fn range_stabilization(g: &LabeledGraph, start: &VertexSet, beta: &Word) -> Result<usize> {
    if start.is_empty() {
        return Err(Error::EmptySet);
    }
    if beta.is_empty() {
        return Err(Error::EmptyWord);
    }
    let period = beta.len();
    let mut ranges: Vec<VertexSet> = Vec::new();
    let mut seen: HashMap<(VertexSet, usize), usize> = HashMap::new();
    let mut cur = start.clone();
    let mut j = 1;
    loop {
        cur = g.letter_image(&cur, beta.labels()[(j - 1) % period]);
        if j <= period && cur.is_empty() {
            return Err(Error::NotRealizable {
                word: g.format_word(beta),
            });
        }
        if seen.insert((cur.clone(), j % period), j).is_some() {
            break;
        }
        ranges.push(cur.clone());
        j += 1;
    }
    // ranges[i] = T_{i+1}; every T_j with j ≥ 1 occurs in `ranges`.
    let mut covered = VertexSet::empty(g.vertex_count());
    for n in 1..=ranges.len() {
        covered.union_with(&ranges[n - 1]);
        if ranges[n..].iter().all(|t| t.is_subset(&covered)) {
            return Ok(n);
        }
    }
    unreachable!("N = number of distinct ranges always works")
}
