use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::automaton::{cap_name, Automaton, StateId, DEFAULT_NAME_CAP};
use crate::error::{Error, Result};
use crate::event::Alphabet;

use super::{is_nonblocking, trim};

/// Synchronous product. Shared events move every component that has them in
/// its alphabet; private events move only their owner.
pub fn parallel<'a>(automata: impl IntoIterator<Item = &'a Automaton>) -> Automaton {
    parallel_with_cap(automata, DEFAULT_NAME_CAP)
}

/// [`parallel`] with an explicit cap on composed state-name length.
pub fn parallel_with_cap<'a>(automata: impl IntoIterator<Item = &'a Automaton>, cap: usize) -> Automaton {
    let parts: Vec<&Automaton> = automata.into_iter().collect();
    match parts.len() {
        0 => return Automaton::epsilon("parallel", Alphabet::new()),
        1 => return parts[0].clone(),
        _ => {}
    }
    let alphabet: Alphabet = parts.iter().flat_map(|a| a.alphabet().iter().cloned()).collect();
    let name = parts.iter().map(|a| a.name()).collect::<Vec<_>>().join("||");
    // For each event, the components that synchronize on it.
    let owners: BTreeMap<_, Vec<usize>> = alphabet
        .iter()
        .map(|e| {
            let who = parts
                .iter()
                .enumerate()
                .filter(|(_, a)| a.alphabet().contains(e))
                .map(|(i, _)| i)
                .collect();
            (e.clone(), who)
        })
        .collect();

    let start = vec![0; parts.len()];
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::from([(start.clone(), 0)]);
    let mut tuples = vec![start];
    let mut delta: Vec<BTreeMap<_, StateId>> = vec![BTreeMap::new()];
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        'events: for (e, who) in &owners {
            let mut next = tuples[i].clone();
            for &k in who {
                match parts[k].successor(next[k], e) {
                    Some(r) => next[k] = r,
                    None => continue 'events,
                }
            }
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = tuples.len();
                    index.insert(next.clone(), j);
                    tuples.push(next);
                    delta.push(BTreeMap::new());
                    queue.push_back(j);
                    j
                }
            };
            delta[i].insert(e.clone(), j);
        }
    }
    let states = tuples
        .iter()
        .map(|t| {
            let joined = t
                .iter()
                .zip(&parts)
                .map(|(&q, a)| a.state_name(q))
                .collect::<Vec<_>>()
                .join(".");
            cap_name(joined, cap)
        })
        .collect();
    let marked = tuples
        .iter()
        .map(|t| t.iter().zip(&parts).all(|(&q, a)| a.is_marked(q)))
        .collect();
    Automaton::from_parts(name, alphabet, states, marked, delta)
}

/// Marks `Lm(a) \ Lm(b)`; the generated language stays `L(a)`.
pub fn difference(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "difference of `{}` and `{}`",
            a.name(),
            b.name()
        )));
    }
    // `b` is completed implicitly: `None` is its sink.
    let mut index: HashMap<(StateId, Option<StateId>), StateId> = HashMap::from([((0, Some(0)), 0)]);
    let mut pairs = vec![(0, Some(0))];
    let mut delta: Vec<BTreeMap<_, StateId>> = vec![BTreeMap::new()];
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let (qa, qb) = pairs[i];
        for (e, ra) in a.transitions(qa) {
            let rb = qb.and_then(|q| b.successor(q, e));
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
    let marked = pairs
        .iter()
        .map(|&(qa, qb)| a.is_marked(qa) && !qb.is_some_and(|q| b.is_marked(q)))
        .collect();
    Ok(Automaton::from_parts(
        format!("{}-{}", a.name(), b.name()),
        a.alphabet().clone(),
        states,
        marked,
        delta,
    ))
}

/// Whether the closure of the composed marked languages equals the
/// composition of their closures.
pub fn is_nonconflicting<'a>(automata: impl IntoIterator<Item = &'a Automaton>) -> bool {
    let trimmed: Vec<Automaton> = automata.into_iter().map(trim).collect();
    // An empty marked language makes both sides empty.
    if trimmed.iter().any(|a| !a.has_marked_state()) {
        return true;
    }
    is_nonblocking(&parallel(&trimmed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{alphabet, Word};
    use crate::ops::enumerate_language;

    fn word(name: &str, sigma: &[&str], w: &str, closed: bool) -> Automaton {
        Automaton::from_word(name, alphabet(sigma.iter().copied()), &Word::parse(w), closed)
    }

    fn marked(a: &Automaton, bound: usize) -> Vec<String> {
        enumerate_language(a, bound)
            .marked
            .iter()
            .map(|w| w.to_string())
            .collect()
    }

    #[test]
    fn disjoint_alphabets_shuffle() {
        let a = word("A", &["a"], "a", false);
        let b = word("B", &["b"], "b", false);
        let p = parallel([&a, &b]);
        assert_eq!(marked(&p, 4), vec!["a b", "b a"]);
        assert_eq!(p.alphabet(), &alphabet(["a", "b"]));
    }

    #[test]
    fn identical_alphabets_intersect() {
        let mut ab = crate::AutomatonBuilder::new("ab", alphabet(["a", "b"]));
        ab.initial("0").marked("0");
        ab.transition("0", "a", "0").unwrap();
        ab.transition("0", "b", "1").unwrap();
        let ab = ab.build().unwrap();
        let x = word("x", &["a", "b"], "a a", false);
        let p = parallel([&ab, &x]);
        assert_eq!(marked(&p, 4), vec!["a a"]);
    }

    #[test]
    fn counterexample_plants_block_u_and_c() {
        let l1 = word("L1", &["u1", "u", "c"], "u1 u c", true);
        let l2 = word("L2", &["u2", "c", "u"], "u2 c u", true);
        let l3 = word("L3", &["u3", "c"], "u3 c", true);
        let l = parallel([&l1, &l2, &l3]);
        let gen = enumerate_language(&l, 6).generated;
        assert!(gen
            .iter()
            .all(|w| w.events().iter().all(|e| ["u1", "u2", "u3"].contains(&e.as_str()))));
        assert_eq!(gen.len(), 16); // all prefixes of interleavings of u1, u2, u3
    }

    #[test]
    fn difference_marks_l1_minus_k1() {
        let sigma = ["u1", "u", "c"];
        let l1 = word("L1", &sigma, "u1 u c", true);
        let k1 = word("K1", &sigma, "u1", true);
        let d = difference(&l1, &k1).unwrap();
        assert_eq!(marked(&d, 5), vec!["u1 u", "u1 u c"]);
        assert!(marked(&difference(&l1, &l1).unwrap(), 5).is_empty());
        let none = k1.with_marking(vec![false; 2]);
        assert_eq!(marked(&difference(&l1, &none).unwrap(), 5), marked(&l1, 5));
    }

    #[test]
    fn nonconflicting_examples() {
        let ab = word("A", &["a", "b"], "a b", false);
        let ba = word("B", &["a", "b"], "b a", false);
        assert!(!is_nonconflicting([&ab, &ba]));
        let a = word("A", &["a"], "a", false);
        let b = word("B", &["b"], "b", false);
        assert!(is_nonconflicting([&a, &b]));
        let c1 = word("C1", &["a", "b"], "a b", true);
        let c2 = word("C2", &["a", "b"], "b a", true);
        assert!(is_nonconflicting([&c1, &c2]));
    }

    #[test]
    fn difference_rejects_alphabet_mismatch() {
        let a = word("A", &["a"], "a", false);
        let b = word("B", &["b"], "b", false);
        assert!(difference(&a, &b).is_err());
    }
}
