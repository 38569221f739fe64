//! Language operations on [`Automaton`]s.
//!
//! Every operation is a pure function and returns an accessible automaton.

mod compare;
mod enumerate;
mod minimize;
mod product;
mod projection;

use std::collections::{BTreeMap, HashMap, VecDeque};

pub use compare::{language_equal, language_subset, LanguageComparison};
pub use enumerate::{enumerate_language, EnumeratedLanguage};
pub use minimize::minimize;
pub use product::{difference, is_nonconflicting, parallel, parallel_with_cap};
pub use projection::{inverse_project, lift, project, project_onto, ProjectionSpec};

pub(crate) use projection::closure_under;

use crate::automaton::{cap_name, Automaton, StateId, DEFAULT_NAME_CAP};

/// States from which some marked state is reachable.
pub fn coaccessible(a: &Automaton) -> Vec<bool> {
    let n = a.state_count();
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for q in a.states() {
        for (_, r) in a.transitions(q) {
            preds[r].push(q);
        }
    }
    let mut seen: Vec<bool> = a.marked_flags().to_vec();
    let mut stack: Vec<StateId> = (0..n).filter(|&q| seen[q]).collect();
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Nonblocking: every reachable state can reach a marked state.
pub fn is_nonblocking(a: &Automaton) -> bool {
    coaccessible(a).iter().all(|&c| c)
}

/// Keeps exactly the states that are reachable and co-reachable.
///
/// When the initial state is not co-reachable the marked language is empty and
/// the canonical empty automaton is returned.
pub fn trim(a: &Automaton) -> Automaton {
    let co = coaccessible(a);
    if co.iter().all(|&c| c) {
        return a.clone();
    }
    if !co[0] {
        return Automaton::empty(a.name(), a.alphabet().clone());
    }
    restrict(a, &co)
}

/// Sub-automaton induced by `keep` (which must contain state 0), restricted to
/// what remains reachable.
pub(crate) fn restrict(a: &Automaton, keep: &[bool]) -> Automaton {
    debug_assert!(keep[0]);
    let mut index = vec![usize::MAX; a.state_count()];
    let mut kept = Vec::new();
    for q in a.states().filter(|&q| keep[q]) {
        index[q] = kept.len();
        kept.push(q);
    }
    let states = kept.iter().map(|&q| a.state_name(q).to_string()).collect();
    let marked = kept.iter().map(|&q| a.is_marked(q)).collect();
    let delta = kept
        .iter()
        .map(|&q| {
            a.transitions(q)
                .filter(|&(_, r)| keep[r])
                .map(|(e, r)| (e.clone(), index[r]))
                .collect()
        })
        .collect();
    Automaton::from_parts(a.name().to_string(), a.alphabet().clone(), states, marked, delta)
}

/// Marks every state that lies on a path to a marked state: the marked
/// language becomes the prefix closure of the original marked language.
pub fn prefix_closure(a: &Automaton) -> Automaton {
    a.with_marking(coaccessible(a))
}

/// Strings of `a` none of whose prefixes (including the string itself) is
/// marked by `b`. Both automata must share an alphabet. Marking is taken
/// from `a`.
pub fn remove_extensions(a: &Automaton, b: &Automaton) -> Automaton {
    debug_assert_eq!(a.alphabet(), b.alphabet());
    let cut = |qb: Option<StateId>| qb.is_some_and(|q| b.is_marked(q));
    if cut(Some(0)) {
        return Automaton::empty(a.name(), a.alphabet().clone());
    }
    let mut index: HashMap<(StateId, Option<StateId>), StateId> = HashMap::new();
    let mut pairs = vec![(0, Some(0))];
    index.insert((0, Some(0)), 0);
    let mut delta: Vec<BTreeMap<_, _>> = vec![BTreeMap::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (qa, qb) = pairs[i];
        for (e, ra) in a.transitions(qa) {
            let rb = qb.and_then(|q| b.successor(q, e));
            if cut(rb) {
                continue;
            }
            let j = *index.entry((ra, rb)).or_insert_with(|| {
                pairs.push((ra, rb));
                delta.push(BTreeMap::new());
                queue.push_back(pairs.len() - 1);
                pairs.len() - 1
            });
            delta[i].insert(e.clone(), j);
        }
    }
    let states = pairs
        .iter()
        .map(|&(qa, qb)| {
            let right = qb.map_or("sink", |q| b.state_name(q));
            cap_name(format!("{}.{}", a.state_name(qa), right), DEFAULT_NAME_CAP)
        })
        .collect();
    let marked = pairs.iter().map(|&(qa, _)| a.is_marked(qa)).collect();
    Automaton::from_parts(a.name().to_string(), a.alphabet().clone(), states, marked, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{alphabet, Word};
    use crate::AutomatonBuilder;

    fn chain(word: &str, closed: bool) -> Automaton {
        let w = Word::parse(word);
        let sigma = w.events().iter().cloned().collect();
        Automaton::from_word("w", sigma, &w, closed)
    }

    #[test]
    fn trim_keeps_fully_marked_automaton() {
        let a = chain("a b", true);
        assert_eq!(trim(&a), a);
    }

    #[test]
    fn trim_drops_blocking_state() {
        let mut b = AutomatonBuilder::new("g", alphabet(["a", "b"]));
        b.initial("0").marked("1");
        b.transition("0", "a", "1").unwrap();
        b.transition("0", "b", "dead").unwrap();
        let g = b.build().unwrap();
        let t = trim(&g);
        assert_eq!(t.state_count(), 2);
        assert!(is_nonblocking(&t));
        assert!(!t.generates(&Word::parse("b")));
    }

    #[test]
    fn trim_of_empty_marked_language_is_canonical_empty() {
        let a = chain("a b", false).with_marking(vec![false; 3]);
        let t = trim(&a);
        assert_eq!(t.state_count(), 1);
        assert_eq!(t.transition_count(), 0);
        assert!(!t.is_marked(0));
    }

    #[test]
    fn trim_u1uc_is_unchanged() {
        let l1 = chain("u1 u c", true);
        assert_eq!(trim(&l1), l1);
    }

    #[test]
    fn prefix_closure_marks_prefixes() {
        let a = chain("a b", false);
        let c = prefix_closure(&a);
        assert!(c.accepts(&Word::empty()));
        assert!(c.accepts(&Word::parse("a")));
        assert!(c.accepts(&Word::parse("a b")));
        let none = a.with_marking(vec![false; 3]);
        assert!(!prefix_closure(&none).has_marked_state());
        assert_eq!(prefix_closure(&c), c);
    }

    #[test]
    fn remove_extensions_cuts_at_first_marked_prefix() {
        let a = chain("a b c", true);
        let b = Automaton::from_word("d", a.alphabet().clone(), &Word::parse("a b"), false);
        let r = remove_extensions(&a, &b);
        assert!(r.accepts(&Word::parse("a")));
        assert!(!r.generates(&Word::parse("a b")));
    }
}
