use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::automaton::{Automaton, StateId};
use crate::event::{Alphabet, Word};
use crate::ops::{enumerate_language, project_onto};
use crate::system::ModularSystem;

use super::{CheckVerdict, Witness};

/// Upper limit of the default MOC bound.
pub const MOC_BOUND_CAP: usize = 12;

/// Twice the state count of the global plant, capped at [`MOC_BOUND_CAP`].
pub fn default_moc_bound(plant: &Automaton) -> usize {
    (2 * plant.state_count()).min(MOC_BOUND_CAP)
}

/// Bounded MOC check of `L = ∥ L_j` for module `i`.
pub fn check_moc_bounded(m: &ModularSystem, i: usize, bound: usize) -> CheckVerdict {
    check_moc(&m.global_plant(), m.local_alphabet(i), &m.observable(), bound).renamed(format!("moc[{}]", i + 1))
}

/// Bounded modified observation consistency of the generated language of
/// `plant` with respect to the projections onto `local`, onto `observable`,
/// and onto `local ∩ observable`.
///
/// Every `s ∈ L` and `t' ∈ P_loc(L)` of length at most `bound` with the same
/// local observation is examined. For each such pair the existence of `s'` is
/// decided exactly, with no bound on `|s'|`.
pub fn check_moc(plant: &Automaton, local: &Alphabet, observable: &Alphabet, bound: usize) -> CheckVerdict {
    let name = "moc";
    let observable: Alphabet = plant.alphabet().intersection(observable).cloned().collect();
    let local: Alphabet = plant.alphabet().intersection(local).cloned().collect();
    let local_obs: Alphabet = local.intersection(&observable).cloned().collect();

    // Targets t', grouped by their local observation.
    let images = enumerate_language(&project_onto(plant, &local), bound).generated;
    let mut by_view: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
    for t in images {
        by_view.entry(t.project(&local_obs)).or_default().push(t);
    }

    for (w, s) in observations(plant, &observable, bound) {
        let Some(targets) = by_view.get(&w.project(&local_obs)) else {
            continue;
        };
        for t in targets {
            if !realizable(plant, &observable, &local, &w, t) {
                return CheckVerdict::fails(name, vec![Witness::word("s", &s), Witness::word("t'", t)]);
            }
        }
    }
    CheckVerdict::holds_up_to(name, bound)
}

/// Distinct observations `P(s)` of strings `s ∈ L` with `|s| ≤ bound`, each
/// with a shortest representative `s`.
fn observations(plant: &Automaton, observable: &Alphabet, bound: usize) -> BTreeMap<Word, Word> {
    let mut out: BTreeMap<Word, Word> = BTreeMap::new();
    let mut visited: HashSet<(StateId, Word)> = HashSet::new();
    let mut layer = vec![(0, Word::empty(), Word::empty())];
    visited.insert((0, Word::empty()));
    for depth in 0..=bound {
        let mut next = Vec::new();
        for (q, w, s) in layer {
            if depth < bound {
                for (e, r) in plant.transitions(q) {
                    let mut w2 = w.clone();
                    if observable.contains(e) {
                        w2.push(e.clone());
                    }
                    if visited.insert((r, w2.clone())) {
                        let mut s2 = s.clone();
                        s2.push(e.clone());
                        next.push((r, w2, s2));
                    }
                }
            }
            out.entry(w).or_insert(s);
        }
        layer = next;
    }
    out
}

/// Whether some `s' ∈ L` has `P(s') = w` and `P_loc(s') = t`.
fn realizable(plant: &Automaton, observable: &Alphabet, local: &Alphabet, w: &Word, t: &Word) -> bool {
    let (w, t) = (w.events(), t.events());
    let start = (0, 0, 0);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((q, i, j)) = queue.pop_front() {
        if i == w.len() && j == t.len() {
            return true;
        }
        for (e, r) in plant.transitions(q) {
            let mut next = (r, i, j);
            if observable.contains(e) {
                if w.get(i) != Some(e) {
                    continue;
                }
                next.1 += 1;
            }
            if local.contains(e) {
                if t.get(j) != Some(e) {
                    continue;
                }
                next.2 += 1;
            }
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    false
}
