//! Brute-force ground truth on finite string sets.
//!
//! Nothing here builds or walks an automaton except [`BoundedLanguage::marked`]
//! and [`BoundedLanguage::generated`], which only read strings off one. Every
//! function is a direct transcription of a definition, exponential in the
//! bound, and exact when its inputs are complete (no string was cut off by the
//! bound).

use std::collections::BTreeSet;

use crate::automaton::Automaton;
use crate::event::{Alphabet, Event, Word};
use crate::ops::enumerate_language;

/// A finite set of strings of length at most `bound` over `alphabet`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedLanguage {
    pub alphabet: Alphabet,
    pub bound: usize,
    pub strings: BTreeSet<Word>,
    /// The slice is the whole language.
    pub complete: bool,
}

impl BoundedLanguage {
    pub fn new(alphabet: Alphabet, bound: usize, strings: impl IntoIterator<Item = Word>, complete: bool) -> Self {
        let strings: BTreeSet<Word> = strings.into_iter().collect();
        assert!(strings.iter().all(|w| w.len() <= bound), "string longer than bound");
        BoundedLanguage {
            alphabet,
            bound,
            strings,
            complete,
        }
    }

    /// Marked strings of `a` up to `bound`.
    pub fn marked(a: &Automaton, bound: usize) -> Self {
        let en = enumerate_language(a, bound);
        Self::new(a.alphabet().clone(), bound, en.marked, en.complete)
    }

    /// Generated strings of `a` up to `bound`.
    pub fn generated(a: &Automaton, bound: usize) -> Self {
        let en = enumerate_language(a, bound);
        Self::new(a.alphabet().clone(), bound, en.generated, en.complete)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.strings.contains(w)
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn closure(&self) -> BoundedLanguage {
        let strings = self.strings.iter().flat_map(|w| w.prefixes()).collect::<BTreeSet<_>>();
        Self::new(self.alphabet.clone(), self.bound, strings, self.complete)
    }

    pub fn is_prefix_closed(&self) -> bool {
        self.strings
            .iter()
            .all(|w| w.prefixes().all(|p| self.strings.contains(&p)))
    }

    /// Images under the projection onto `target`.
    pub fn project(&self, target: &Alphabet) -> BTreeSet<Word> {
        self.strings.iter().map(|w| w.project(target)).collect()
    }

    fn with_strings(&self, strings: BTreeSet<Word>) -> Self {
        Self::new(self.alphabet.clone(), self.bound, strings, self.complete)
    }

    /// Sorted rendering, one string per line.
    pub fn render(&self) -> String {
        self.strings.iter().map(|w| format!("{w}\n")).collect()
    }
}

/// Strings `t` of `closure` for which some `t'' ∈ plant` with the same
/// observation lies outside `closure`.
fn normality_violations(closure: &BTreeSet<Word>, plant: &BoundedLanguage, observable: &Alphabet) -> BTreeSet<Word> {
    let outside: BTreeSet<Word> = plant
        .strings
        .iter()
        .filter(|w| !closure.contains(*w))
        .map(|w| w.project(observable))
        .collect();
    closure
        .iter()
        .filter(|t| outside.contains(&t.project(observable)))
        .cloned()
        .collect()
}

/// Strings `t` of `closure` with `tσ ∈ plant ∖ closure`, `σ` uncontrollable.
fn controllability_violations(
    closure: &BTreeSet<Word>,
    plant: &BoundedLanguage,
    uncontrollable: &Alphabet,
) -> BTreeSet<Word> {
    closure
        .iter()
        .filter(|t| {
            uncontrollable.iter().any(|e| {
                let mut next = (*t).clone();
                next.push(e.clone());
                plant.contains(&next) && !closure.contains(&next)
            })
        })
        .cloned()
        .collect()
}

fn closure_of(set: &BTreeSet<Word>) -> BTreeSet<Word> {
    set.iter().flat_map(|w| w.prefixes()).collect()
}

/// Removes strings with a violating prefix until nothing is removed.
fn filter_to_fixpoint(
    spec: &BoundedLanguage,
    violations: impl Fn(&BTreeSet<Word>) -> BTreeSet<Word>,
) -> BoundedLanguage {
    let mut kept = spec.strings.clone();
    loop {
        let bad = violations(&closure_of(&kept));
        let next: BTreeSet<Word> = kept
            .iter()
            .filter(|w| !w.prefixes().any(|p| bad.contains(&p)))
            .cloned()
            .collect();
        if next.len() == kept.len() {
            return spec.with_strings(kept);
        }
        kept = next;
    }
}

/// Largest subset of `spec` whose closure is normal with respect to `plant`
/// and the projection onto `observable`.
pub fn oracle_sup_n(spec: &BoundedLanguage, plant: &BoundedLanguage, observable: &Alphabet) -> BoundedLanguage {
    filter_to_fixpoint(spec, |c| normality_violations(c, plant, observable))
}

/// Largest subset of `spec` whose closure is controllable with respect to
/// `plant` and `uncontrollable`.
pub fn oracle_sup_c(spec: &BoundedLanguage, plant: &BoundedLanguage, uncontrollable: &Alphabet) -> BoundedLanguage {
    filter_to_fixpoint(spec, |c| controllability_violations(c, plant, uncontrollable))
}

/// Largest subset of `spec` that is both controllable and normal.
pub fn oracle_sup_cn(
    spec: &BoundedLanguage,
    plant: &BoundedLanguage,
    uncontrollable: &Alphabet,
    observable: &Alphabet,
) -> BoundedLanguage {
    filter_to_fixpoint(spec, |c| {
        let mut bad = controllability_violations(c, plant, uncontrollable);
        bad.extend(normality_violations(c, plant, observable));
        bad
    })
}

/// Strings `w` over the union alphabet with `|w| ≤ bound` and
/// `P_i(w) ∈ parts[i]` for every `i`. The parts must be prefix-closed.
fn compose_closed(parts: &[BTreeSet<Word>], alphabets: &[&Alphabet], bound: usize) -> BTreeSet<Word> {
    let sigma: Alphabet = alphabets.iter().flat_map(|a| a.iter().cloned()).collect();
    let mut out = BTreeSet::new();
    let mut stack = vec![Word::empty()];
    while let Some(w) = stack.pop() {
        if !parts.iter().zip(alphabets).all(|(p, a)| p.contains(&w.project(a))) {
            continue;
        }
        if w.len() < bound {
            for e in &sigma {
                let mut v = w.clone();
                v.push(e.clone());
                stack.push(v);
            }
        }
        out.insert(w);
    }
    out
}

/// Outcome of [`oracle_nonconflicting`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonconflictOracle {
    pub holds: bool,
    /// A string of the composed closures that is not a prefix of a composed
    /// marked string.
    pub witness: Option<Word>,
    /// No composed string reached the bound and every input was complete.
    pub exact: bool,
}

/// Compares `closure(∥ Lm_i)` with `∥ closure(Lm_i)` on strings up to `bound`.
pub fn oracle_nonconflicting(marked: &[BoundedLanguage], bound: usize) -> NonconflictOracle {
    let alphabets: Vec<&Alphabet> = marked.iter().map(|m| &m.alphabet).collect();
    let closures: Vec<BTreeSet<Word>> = marked.iter().map(|m| m.closure().strings).collect();
    let of_closures = compose_closed(&closures, &alphabets, bound);
    let composed: BTreeSet<Word> = of_closures
        .iter()
        .filter(|w| marked.iter().all(|m| m.contains(&w.project(&m.alphabet))))
        .cloned()
        .collect();
    let closure_of_composed = closure_of(&composed);
    let witness = of_closures.iter().find(|w| !closure_of_composed.contains(*w)).cloned();
    NonconflictOracle {
        holds: witness.is_none(),
        witness,
        exact: marked.iter().all(|m| m.complete) && of_closures.iter().all(|w| w.len() < bound),
    }
}

/// Strings of the composition of the prefix-closed `parts` up to `bound`.
pub fn oracle_compose(parts: &[BoundedLanguage], bound: usize) -> BoundedLanguage {
    let alphabets: Vec<&Alphabet> = parts.iter().map(|p| &p.alphabet).collect();
    let sets: Vec<BTreeSet<Word>> = parts.iter().map(|p| p.strings.clone()).collect();
    let strings = compose_closed(&sets, &alphabets, bound);
    let complete = parts.iter().all(|p| p.complete) && strings.iter().all(|w| w.len() < bound);
    let sigma = alphabets.iter().flat_map(|a| a.iter().cloned()).collect();
    BoundedLanguage::new(sigma, bound, strings, complete)
}

/// Counterexample to modified observation consistency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MocCounterexample {
    pub s: Word,
    pub t: Word,
}

/// Literal triple loop: for every `s ∈ L` and `t' ∈ P_i(L)` with equal local
/// observations, search `s' ∈ L` with `P(s') = P(s)` and `P_i(s') = t'`.
/// All three strings range over the slice `plant`.
pub fn oracle_moc(plant: &BoundedLanguage, local: &Alphabet, observable: &Alphabet) -> Option<MocCounterexample> {
    let local_obs: Alphabet = local.intersection(observable).cloned().collect();
    let images = plant.project(local);
    for s in &plant.strings {
        let seen = s.project(&local_obs);
        let observed = s.project(observable);
        for t in &images {
            if t.project(&local_obs) != seen {
                continue;
            }
            let found = plant
                .strings
                .iter()
                .any(|s2| s2.project(observable) == observed && s2.project(local) == *t);
            if !found {
                return Some(MocCounterexample {
                    s: s.clone(),
                    t: t.clone(),
                });
            }
        }
    }
    None
}

/// Observer counterexample `(s, t)`: `t ∈ R(Lm)`, `s ∈ closure(Lm)`, `R(s)` a
/// prefix of `t`, and no `u` with `su ∈ Lm` and `R(su) = t`.
pub fn oracle_observer(marked: &BoundedLanguage, gamma: &Alphabet) -> Option<(Word, Word)> {
    let targets = marked.project(gamma);
    for s in &marked.closure().strings {
        let rs = s.project(gamma);
        for t in &targets {
            if !rs.is_prefix_of(t) {
                continue;
            }
            let ok = marked
                .strings
                .iter()
                .any(|m| s.is_prefix_of(m) && m.project(gamma) == *t);
            if !ok {
                return Some((s.clone(), t.clone()));
            }
        }
    }
    None
}

/// OCC counterexample: a string `s'σ1⋯σk` of `generated` whose last event
/// `σk ∈ Γ` is uncontrollable, `σ1⋯σ(k-1)` avoid `Γ`, `s'` is empty or ends
/// in `Γ`, and some `σi` with `i < k` is controllable.
pub fn oracle_occ(generated: &BoundedLanguage, gamma: &Alphabet, uncontrollable: &Alphabet) -> Option<Word> {
    for s in &generated.strings {
        let events = s.events();
        let Some((last, body)) = events.split_last() else {
            continue;
        };
        if !gamma.contains(last) || !uncontrollable.contains(last) {
            continue;
        }
        let segment = body.iter().rev().take_while(|e| !gamma.contains(*e));
        if segment.into_iter().any(|e| !uncontrollable.contains(e)) {
            return Some(s.clone());
        }
    }
    None
}

/// LCC counterexample `(s, e)`: `e ∈ Γ ∩ Σuc`, `R(s)e ∈ R(L)`, some
/// `u ∈ (Σ∖Γ)*` has `sue ∈ L`, but no `u ∈ (Σuc∖Γ)*` does.
pub fn oracle_lcc(generated: &BoundedLanguage, gamma: &Alphabet, uncontrollable: &Alphabet) -> Option<(Word, Event)> {
    let images = generated.project(gamma);
    for s in &generated.strings {
        for e in gamma.intersection(uncontrollable) {
            let mut rse = s.project(gamma);
            rse.push(e.clone());
            if !images.contains(&rse) {
                continue;
            }
            // Extensions `s u e` of `s` with `u` free of Γ.
            let extensions = generated.strings.iter().filter_map(|w| {
                let rest = w.events().strip_prefix(s.events())?;
                let (last, u) = rest.split_last()?;
                (last == e && u.iter().all(|x| !gamma.contains(x))).then_some(u)
            });
            let mut any = false;
            let mut uncontrollable_path = false;
            for u in extensions {
                any = true;
                if u.iter().all(|x| uncontrollable.contains(x)) {
                    uncontrollable_path = true;
                    break;
                }
            }
            if any && !uncontrollable_path {
                return Some((s.clone(), e.clone()));
            }
        }
    }
    None
}
