use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::automaton::{Automaton, StateId};
use crate::event::{Alphabet, Word};
use crate::ops::{closure_under, project_onto, trim};

use super::{alphabet_note, CheckVerdict, Witness};

/// Decides whether the projection onto `gamma` is an `Lm(g)`-observer.
///
/// Runs on `trim(g)`; a blocking `g` is trimmed first and the verdict says so.
/// A failure carries `s ∈ L(trim g)` and `t ∈ R(Lm(g))` with `R(s) ≤ t` such
/// that no continuation `u` gives `su ∈ Lm(g)` and `R(su) = t`.
pub fn is_observer(g: &Automaton, gamma: &Alphabet) -> CheckVerdict {
    let name = "observer";
    let gamma: Alphabet = g.alphabet().intersection(gamma).cloned().collect();
    let t = trim(g);
    let note = (t.state_count() != g.state_count() || t.transition_count() != g.transition_count())
        .then(|| "blocking input trimmed".to_string());
    let verdict = match search(&t, &gamma) {
        None => CheckVerdict::holds(name),
        Some((s, w)) => CheckVerdict::fails(name, vec![Witness::word("s", &s), Witness::word("t", &w)])
            .with_note(format!("R onto {}", alphabet_note(&gamma))),
    };
    match note {
        Some(n) => match verdict.note.clone() {
            Some(m) => verdict.with_note(format!("{n}; {m}")),
            None => verdict.with_note(n),
        },
        None => verdict,
    }
}

fn search(g: &Automaton, gamma: &Alphabet) -> Option<(Word, Word)> {
    if !g.has_marked_state() {
        return None;
    }
    let o = project_onto(g, gamma);

    // Outer: pairs (q, x) of g and its projection, with shortest s.
    let mut outer: HashMap<(StateId, StateId), Word> = HashMap::new();
    let mut queue = VecDeque::from([(0, 0)]);
    outer.insert((0, 0), Word::empty());
    let mut order = Vec::new();
    while let Some((q, x)) = queue.pop_front() {
        order.push((q, x));
        let s = outer[&(q, x)].clone();
        for (e, r) in g.transitions(q) {
            let y = if gamma.contains(e) {
                o.successor(x, e).expect("projection follows plant")
            } else {
                x
            };
            if let Entry::Vacant(slot) = outer.entry((r, y)) {
                let mut s2 = s.clone();
                s2.push(e.clone());
                slot.insert(s2);
                queue.push_back((r, y));
            }
        }
    }

    // Inner: (Y, x') with Y the plant states reachable by continuations u
    // with R(u) = v. Bad when x' is marked but no state of Y is.
    let mut inner: HashSet<(BTreeSet<StateId>, StateId)> = HashSet::new();
    for (q, x) in order {
        let mut y0 = BTreeSet::from([q]);
        closure_under(g, gamma, &mut y0);
        if inner.contains(&(y0.clone(), x)) {
            continue;
        }
        inner.insert((y0.clone(), x));
        let mut queue = VecDeque::from([(y0, x, Word::empty())]);
        while let Some((ys, xp, v)) = queue.pop_front() {
            if o.is_marked(xp) && !ys.iter().any(|&y| g.is_marked(y)) {
                let s = outer[&(q, x)].clone();
                let mut t = s.project(gamma);
                for e in v.events() {
                    t.push(e.clone());
                }
                return Some((s, t));
            }
            for (e, xn) in o.transitions(xp) {
                let mut yn: BTreeSet<StateId> = ys.iter().filter_map(|&y| g.successor(y, e)).collect();
                closure_under(g, gamma, &mut yn);
                let key = (yn, xn);
                if inner.insert(key.clone()) {
                    let mut v2 = v.clone();
                    v2.push(e.clone());
                    queue.push_back((key.0, key.1, v2));
                }
            }
        }
    }
    None
}
