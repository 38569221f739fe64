use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automaton::{Automaton, StateId};
use crate::event::{Alphabet, Word};
use crate::ops::closure_under;

use super::{CheckVerdict, Witness};

/// Shortest strings to every reachable state, in breadth-first order.
fn shortest_paths(l: &Automaton) -> Vec<(StateId, Word)> {
    let mut seen = vec![false; l.state_count()];
    seen[0] = true;
    let mut out = vec![(0, Word::empty())];
    let mut i = 0;
    while i < out.len() {
        let (q, s) = out[i].clone();
        for (e, r) in l.transitions(q) {
            if !seen[r] {
                seen[r] = true;
                let mut s2 = s.clone();
                s2.push(e.clone());
                out.push((r, s2));
            }
        }
        i += 1;
    }
    out
}

/// Output control consistency of the projection onto `gamma` for `L(l)`.
///
/// Fails on a string `s'σ1⋯σk` with `σk ∈ Γ` uncontrollable, `σ1⋯σ(k-1)`
/// outside `Γ`, `s'` empty or ending in `Γ`, and some `σi` (`i < k`)
/// controllable. The witness is a shortest such string.
pub fn is_occ(l: &Automaton, gamma: &Alphabet, uncontrollable: &Alphabet) -> CheckVerdict {
    let name = "occ";
    // Phase: whether the current Γ-free segment holds a controllable event.
    let start = (l.initial(), false);
    let mut paths: HashMap<(StateId, bool), Word> = HashMap::from([(start, Word::empty())]);
    let mut queue = VecDeque::from([start]);
    while let Some((q, dirty)) = queue.pop_front() {
        let s = paths[&(q, dirty)].clone();
        for (e, r) in l.transitions(q) {
            let in_gamma = gamma.contains(e);
            if in_gamma && dirty && uncontrollable.contains(e) {
                let mut w = s.clone();
                w.push(e.clone());
                return CheckVerdict::fails(name, vec![Witness::word("s", &w)]);
            }
            let next = (r, !in_gamma && (dirty || !uncontrollable.contains(e)));
            if let Entry::Vacant(slot) = paths.entry(next) {
                let mut s2 = s.clone();
                s2.push(e.clone());
                slot.insert(s2);
                queue.push_back(next);
            }
        }
    }
    CheckVerdict::holds(name)
}

/// Local control consistency of the projection onto `gamma` for `L(l)`.
///
/// Fails at `s` and `e ∈ Γ ∩ Σuc` when `sue ∈ L` for some `u ∈ (Σ∖Γ)*` but
/// for no `u ∈ (Σuc∖Γ)*`. Both conditions depend on the state reached by
/// `s` only, so every reachable state is examined once with a shortest `s`.
pub fn is_lcc(l: &Automaton, gamma: &Alphabet, uncontrollable: &Alphabet) -> CheckVerdict {
    let name = "lcc";
    let targets: Alphabet = gamma.intersection(uncontrollable).cloned().collect();
    if targets.is_empty() {
        return CheckVerdict::holds(name);
    }
    // Events that the uncontrollable closure must not follow.
    let blocked: Alphabet = l
        .alphabet()
        .iter()
        .filter(|e| gamma.contains(*e) || !uncontrollable.contains(*e))
        .cloned()
        .collect();
    for (q, s) in shortest_paths(l) {
        let mut any = BTreeSet::from([q]);
        closure_under(l, gamma, &mut any);
        let mut unc = BTreeSet::from([q]);
        closure_under(l, &blocked, &mut unc);
        for e in &targets {
            let enabled = |set: &BTreeSet<StateId>| set.iter().any(|&p| l.successor(p, e).is_some());
            if enabled(&any) && !enabled(&unc) {
                return CheckVerdict::fails(name, vec![Witness::word("s", &s), Witness::event("e", e)]);
            }
        }
    }
    CheckVerdict::holds(name)
}
