use std::collections::BTreeSet;

use crate::automaton::Automaton;
use crate::event::Word;

/// Bounded slices of the marked and generated languages.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumeratedLanguage {
    pub marked: BTreeSet<Word>,
    pub generated: BTreeSet<Word>,
    /// True when no generated string is longer than the bound, so the slices
    /// are the complete languages.
    pub complete: bool,
}

/// All strings of length at most `bound` in `Lm(a)` and `L(a)`.
pub fn enumerate_language(a: &Automaton, bound: usize) -> EnumeratedLanguage {
    let mut out = EnumeratedLanguage {
        complete: true,
        ..Default::default()
    };
    let mut layer = vec![(0, Word::empty())];
    for depth in 0..=bound {
        let mut next = Vec::new();
        for (q, w) in layer {
            if a.is_marked(q) {
                out.marked.insert(w.clone());
            }
            for (e, r) in a.transitions(q) {
                if depth == bound {
                    out.complete = false;
                    break;
                }
                let mut v = w.clone();
                v.push(e.clone());
                next.push((r, v));
            }
            out.generated.insert(w);
        }
        layer = next;
    }
    out
}
