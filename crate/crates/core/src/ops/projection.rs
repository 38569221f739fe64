use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::automaton::{cap_name, Automaton, StateId, DEFAULT_NAME_CAP};
use crate::error::{Error, Result};
use crate::event::{fmt_alphabet, Alphabet};

/// A natural projection from `source*` to `target*`, `target ⊆ source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSpec {
    source: Alphabet,
    target: Alphabet,
}

impl ProjectionSpec {
    pub fn new(source: Alphabet, target: Alphabet) -> Result<Self> {
        if !target.is_subset(&source) {
            return Err(Error::InvalidProjection(format!(
                "target {} is not a subset of source {}",
                fmt_alphabet(&target),
                fmt_alphabet(&source)
            )));
        }
        Ok(ProjectionSpec { source, target })
    }

    /// Projection from `source` onto `target ∩ source`.
    pub fn restricted(source: &Alphabet, target: &Alphabet) -> Self {
        ProjectionSpec {
            source: source.clone(),
            target: source.intersection(target).cloned().collect(),
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    /// Events erased by the projection.
    pub fn erased(&self) -> Alphabet {
        self.source.difference(&self.target).cloned().collect()
    }
}

/// Closes `set` under transitions labelled with events outside `target`.
pub(crate) fn closure_under(a: &Automaton, target: &Alphabet, set: &mut BTreeSet<StateId>) {
    let mut stack: Vec<StateId> = set.iter().copied().collect();
    while let Some(q) = stack.pop() {
        for (e, r) in a.transitions(q) {
            if !target.contains(e) && set.insert(r) {
                stack.push(r);
            }
        }
    }
}

/// Projects `a` onto `p.target()`; `p.source()` must equal the alphabet of `a`.
pub fn project(a: &Automaton, p: &ProjectionSpec) -> Result<Automaton> {
    if p.source() != a.alphabet() {
        return Err(Error::InvalidProjection(format!(
            "source {} differs from the alphabet of `{}`",
            fmt_alphabet(p.source()),
            a.name()
        )));
    }
    Ok(project_onto(a, p.target()))
}

/// Projects `a` onto `target ∩ alphabet(a)` by subset construction.
///
/// The generated language of the result is `P(L(a))` and its marked language
/// is `P(Lm(a))`.
pub fn project_onto(a: &Automaton, target: &Alphabet) -> Automaton {
    let target: Alphabet = a.alphabet().intersection(target).cloned().collect();
    if &target == a.alphabet() {
        return a.clone();
    }
    let mut start = BTreeSet::from([0]);
    closure_under(a, &target, &mut start);
    let mut index: HashMap<BTreeSet<StateId>, StateId> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut delta: Vec<BTreeMap<_, StateId>> = vec![BTreeMap::new()];
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let mut moves: BTreeMap<_, BTreeSet<StateId>> = BTreeMap::new();
        for &q in &sets[i] {
            for (e, r) in a.transitions(q) {
                if target.contains(e) {
                    moves.entry(e.clone()).or_default().insert(r);
                }
            }
        }
        for (e, mut next) in moves {
            closure_under(a, &target, &mut next);
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = sets.len();
                    index.insert(next.clone(), j);
                    sets.push(next);
                    delta.push(BTreeMap::new());
                    queue.push_back(j);
                    j
                }
            };
            delta[i].insert(e, j);
        }
    }
    let states = sets
        .iter()
        .map(|s| {
            let names: Vec<&str> = s.iter().map(|&q| a.state_name(q)).collect();
            cap_name(format!("{{{}}}", names.join(",")), DEFAULT_NAME_CAP)
        })
        .collect();
    let marked = sets.iter().map(|s| s.iter().any(|&q| a.is_marked(q))).collect();
    Automaton::from_parts(format!("P({})", a.name()), target, states, marked, delta)
}

/// Inverse projection: `p.target()` must equal the alphabet of `a`; the result
/// lives over `p.source()`.
pub fn inverse_project(a: &Automaton, p: &ProjectionSpec) -> Result<Automaton> {
    if p.target() != a.alphabet() {
        return Err(Error::InvalidProjection(format!(
            "target {} differs from the alphabet of `{}`",
            fmt_alphabet(p.target()),
            a.name()
        )));
    }
    Ok(lift(a, p.source()))
}

/// Adds self-loops on `source \ alphabet(a)` at every state. The result lives
/// over `source ∪ alphabet(a)`.
pub fn lift(a: &Automaton, source: &Alphabet) -> Automaton {
    let extra: Vec<_> = source.difference(a.alphabet()).cloned().collect();
    if extra.is_empty() {
        return a.clone();
    }
    let alphabet: Alphabet = a.alphabet().union(source).cloned().collect();
    let delta = a
        .states()
        .map(|q| {
            let mut out: BTreeMap<_, _> = a.transitions(q).map(|(e, r)| (e.clone(), r)).collect();
            for e in &extra {
                out.insert(e.clone(), q);
            }
            out
        })
        .collect();
    Automaton::from_parts(
        a.name().to_string(),
        alphabet,
        a.state_names().to_vec(),
        a.marked_flags().to_vec(),
        delta,
    )
}
