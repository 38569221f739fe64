use std::collections::{BTreeMap, HashMap};

use crate::automaton::Automaton;

/// Minimal automaton with the same marked and generated languages.
///
/// Moore-style partition refinement on the implicitly completed automaton:
/// a missing transition is treated as a move to a distinguished sink class,
/// so states are separated both by marking and by what they generate.
pub fn minimize(a: &Automaton) -> Automaton {
    let n = a.state_count();
    let events: Vec<_> = a.alphabet().iter().cloned().collect();
    let mut class: Vec<usize> = (0..n).map(|q| usize::from(a.is_marked(q))).collect();
    let mut count = 0;
    loop {
        let mut ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let sig: Vec<Option<usize>> = events.iter().map(|e| a.successor(q, e).map(|r| class[r])).collect();
            let len = ids.len();
            next[q] = *ids.entry((class[q], sig)).or_insert(len);
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    // One representative per class; `from_parts` renumbers by search order.
    let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
    for q in 0..n {
        rep.entry(class[q]).or_insert(q);
    }
    // Relabel classes so that the initial state's class comes first.
    let mut order: Vec<usize> = rep.keys().copied().collect();
    let init = class[0];
    order.retain(|&c| c != init);
    order.insert(0, init);
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let states = order.iter().map(|c| a.state_name(rep[c]).to_string()).collect();
    let marked = order.iter().map(|c| a.is_marked(rep[c])).collect();
    let delta = order
        .iter()
        .map(|c| {
            a.transitions(rep[c])
                .map(|(e, r)| (e.clone(), pos[&class[r]]))
                .collect()
        })
        .collect();
    Automaton::from_parts(a.name().to_string(), a.alphabet().clone(), states, marked, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::alphabet;
    use crate::ops::language_equal;
    use crate::AutomatonBuilder;

    #[test]
    fn minimal_input_is_unchanged_up_to_isomorphism() {
        let mut b = AutomatonBuilder::new("g", alphabet(["a", "b"]));
        b.initial("0").marked("1");
        b.transition("0", "a", "1").unwrap();
        b.transition("1", "b", "0").unwrap();
        let g = b.build().unwrap();
        assert_eq!(minimize(&g), g);
    }

    #[test]
    fn equivalent_states_merge() {
        let mut b = AutomatonBuilder::new("g", alphabet(["a", "b"]));
        b.initial("0").marked("1").marked("2");
        b.transition("0", "a", "1").unwrap();
        b.transition("0", "b", "2").unwrap();
        let g = b.build().unwrap();
        let m = minimize(&g);
        assert_eq!(m.state_count(), 2);
        assert!(language_equal(&m, &g).unwrap().holds());
    }

    #[test]
    fn generated_language_separates_unmarked_states() {
        // 1 can still move, 2 cannot: both unmarked but not equivalent.
        let mut b = AutomatonBuilder::new("g", alphabet(["a", "b"]));
        b.initial("0");
        b.transition("0", "a", "1").unwrap();
        b.transition("0", "b", "2").unwrap();
        b.transition("1", "a", "3").unwrap();
        let g = b.build().unwrap();
        let m = minimize(&g);
        assert!(language_equal(&m, &g).unwrap().holds());
        assert_eq!(m.state_count(), 3);
    }
}
