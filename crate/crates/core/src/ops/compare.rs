use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::event::{Event, Word};

/// Outcome of comparing two automata on marked and generated languages.
///
/// A witness is a shortest string that violates the relation, or `None` when
/// it holds on that side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageComparison {
    pub marked: Option<Word>,
    pub generated: Option<Word>,
}

impl LanguageComparison {
    pub fn marked_holds(&self) -> bool {
        self.marked.is_none()
    }

    pub fn generated_holds(&self) -> bool {
        self.generated.is_none()
    }

    /// Holds on both marked and generated languages.
    pub fn holds(&self) -> bool {
        self.marked_holds() && self.generated_holds()
    }
}

#[derive(Clone, Copy)]
enum Relation {
    Equal,
    Subset,
}

/// Decides `Lm(a) = Lm(b)` and `L(a) = L(b)`.
pub fn language_equal(a: &Automaton, b: &Automaton) -> Result<LanguageComparison> {
    compare(a, b, Relation::Equal)
}

/// Decides `Lm(a) ⊆ Lm(b)` and `L(a) ⊆ L(b)`; witnesses lie in `a` but not `b`.
pub fn language_subset(a: &Automaton, b: &Automaton) -> Result<LanguageComparison> {
    compare(a, b, Relation::Subset)
}

fn compare(a: &Automaton, b: &Automaton, rel: Relation) -> Result<LanguageComparison> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "cannot compare `{}` and `{}` over different alphabets",
            a.name(),
            b.name()
        )));
    }
    type Pair = (Option<StateId>, Option<StateId>);
    let marked = |a: &Automaton, q: Option<StateId>| q.is_some_and(|q| a.is_marked(q));
    let violates = |x: bool, y: bool| match rel {
        Relation::Equal => x != y,
        Relation::Subset => x && !y,
    };

    let start: Pair = (Some(0), Some(0));
    let mut parent: HashMap<Pair, Option<(Pair, Event)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    let mut result = LanguageComparison {
        marked: None,
        generated: None,
    };
    let path = |parent: &HashMap<Pair, Option<(Pair, Event)>>, mut p: Pair| {
        let mut events = Vec::new();
        while let Some(Some((prev, e))) = parent.get(&p) {
            events.push(e.clone());
            p = *prev;
        }
        events.reverse();
        Word(events)
    };
    while let Some(p @ (qa, qb)) = queue.pop_front() {
        if result.generated.is_none() && violates(qa.is_some(), qb.is_some()) {
            result.generated = Some(path(&parent, p));
        }
        if result.marked.is_none() && violates(marked(a, qa), marked(b, qb)) {
            result.marked = Some(path(&parent, p));
        }
        if result.marked.is_some() && result.generated.is_some() {
            break;
        }
        for e in a.alphabet() {
            let ra = qa.and_then(|q| a.successor(q, e));
            let rb = qb.and_then(|q| b.successor(q, e));
            if ra.is_none() && rb.is_none() {
                continue;
            }
            let next = (ra, rb);
            if let Entry::Vacant(slot) = parent.entry(next) {
                slot.insert(Some((p, e.clone())));
                queue.push_back(next);
            }
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::alphabet;
    use crate::ops::{minimize, parallel};
    use crate::AutomatonBuilder;

    fn sigma() -> crate::Alphabet {
        alphabet(["u1", "u", "c"])
    }

    #[test]
    fn automaton_equals_itself() {
        let l1 = Automaton::from_word("L1", sigma(), &Word::parse("u1 u c"), true);
        assert!(language_equal(&l1, &l1).unwrap().holds());
    }

    #[test]
    fn k1_subset_of_l1_with_witness() {
        let l1 = Automaton::from_word("L1", sigma(), &Word::parse("u1 u c"), true);
        let k1 = Automaton::from_word("K1", sigma(), &Word::parse("u1"), true);
        assert!(language_subset(&k1, &l1).unwrap().holds());
        let eq = language_equal(&k1, &l1).unwrap();
        assert!(!eq.holds());
        assert_eq!(eq.marked, Some(Word::parse("u1 u")));
        assert_eq!(eq.generated, Some(Word::parse("u1 u")));
    }

    #[test]
    fn minimized_and_redundant_recognizers_are_equal() {
        let s = alphabet(["a"]);
        let mut b = AutomatonBuilder::new("a*", s.clone());
        b.initial("0").marked("0").marked("1");
        b.transition("0", "a", "1").unwrap();
        b.transition("1", "a", "0").unwrap();
        let two = b.build().unwrap();
        let one = minimize(&two);
        assert_eq!(one.state_count(), 1);
        assert!(language_equal(&one, &two).unwrap().holds());
        let p = parallel([&two, &two]);
        assert_eq!(minimize(&p).state_count(), one.state_count());
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let a = Automaton::epsilon("a", alphabet(["a"]));
        let b = Automaton::epsilon("b", alphabet(["b"]));
        assert!(language_equal(&a, &b).is_err());
    }
}
