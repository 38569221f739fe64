use std::collections::{BTreeMap, HashMap, VecDeque};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::event::{valid_event_name, Alphabet, Event, Word};

pub type StateId = usize;

/// Default cap on generated state names; longer names are shortened with a
/// stable hash suffix.
pub const DEFAULT_NAME_CAP: usize = 64;

/// Shortens `name` to at most `cap` characters plus a stable hash suffix.
pub fn cap_name(name: String, cap: usize) -> String {
    if name.chars().count() <= cap {
        return name;
    }
    let digest = Sha256::digest(name.as_bytes());
    let hash: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    let head: String = name.chars().take(cap.saturating_sub(17)).collect();
    format!("{head}~{hash}")
}

/// A deterministic finite automaton over an alphabet.
///
/// State `0` is the initial state, and every state is reachable from it.
/// The generated language is the set of strings with a defined run; the
/// marked language is the subset ending in a marked state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    marked: Vec<bool>,
    delta: Vec<BTreeMap<Event, StateId>>,
}

impl Automaton {
    /// The canonical empty automaton: one unmarked initial state, no transitions.
    /// Its marked language is empty and its generated language is `{ε}`.
    pub fn empty(name: impl Into<String>, alphabet: Alphabet) -> Self {
        Automaton {
            name: name.into(),
            alphabet,
            states: vec!["empty".to_string()],
            marked: vec![false],
            delta: vec![BTreeMap::new()],
        }
    }

    /// One marked state, no transitions: marks and generates `{ε}`.
    pub fn epsilon(name: impl Into<String>, alphabet: Alphabet) -> Self {
        Automaton {
            name: name.into(),
            alphabet,
            states: vec!["eps".to_string()],
            marked: vec![true],
            delta: vec![BTreeMap::new()],
        }
    }

    /// Recognizer of a single word; `prefix_closed` marks every prefix.
    pub fn from_word(name: impl Into<String>, alphabet: Alphabet, word: &Word, prefix_closed: bool) -> Self {
        let n = word.len();
        let mut delta = vec![BTreeMap::new(); n + 1];
        for (i, e) in word.events().iter().enumerate() {
            delta[i].insert(e.clone(), i + 1);
        }
        let mut marked = vec![prefix_closed; n + 1];
        marked[n] = true;
        Automaton {
            name: name.into(),
            alphabet,
            states: (0..=n).map(|i| i.to_string()).collect(),
            marked,
            delta,
        }
    }

    /// Assembles an automaton from parts produced by a construction that
    /// discovers states by search from state 0. Unreachable states are dropped.
    pub(crate) fn from_parts(
        name: String,
        alphabet: Alphabet,
        states: Vec<String>,
        marked: Vec<bool>,
        delta: Vec<BTreeMap<Event, StateId>>,
    ) -> Self {
        debug_assert_eq!(states.len(), marked.len());
        debug_assert_eq!(states.len(), delta.len());
        Automaton {
            name,
            alphabet,
            states,
            marked,
            delta,
        }
        .accessible()
    }

    /// Restricts to states reachable from the initial state, renumbered in
    /// breadth-first order.
    fn accessible(self) -> Self {
        let n = self.states.len();
        let mut order = Vec::with_capacity(n);
        let mut index = vec![usize::MAX; n];
        let mut queue = VecDeque::from([0]);
        index[0] = 0;
        order.push(0);
        while let Some(q) = queue.pop_front() {
            for &r in self.delta[q].values() {
                if index[r] == usize::MAX {
                    index[r] = order.len();
                    order.push(r);
                    queue.push_back(r);
                }
            }
        }
        if order.len() == n && order.iter().enumerate().all(|(i, &q)| i == q) {
            return self;
        }
        let states = order.iter().map(|&q| self.states[q].clone()).collect();
        let marked = order.iter().map(|&q| self.marked[q]).collect();
        let delta = order
            .iter()
            .map(|&q| self.delta[q].iter().map(|(e, &r)| (e.clone(), index[r])).collect())
            .collect();
        Automaton {
            name: self.name,
            alphabet: self.alphabet,
            states,
            marked,
            delta,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        0
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().map(BTreeMap::len).sum()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.marked[q]
    }

    pub fn marked_flags(&self) -> &[bool] {
        &self.marked
    }

    pub fn has_marked_state(&self) -> bool {
        self.marked.iter().any(|&m| m)
    }

    pub fn successor(&self, q: StateId, e: &Event) -> Option<StateId> {
        self.delta[q].get(e).copied()
    }

    /// Outgoing transitions of `q` in event order.
    pub fn transitions(&self, q: StateId) -> impl Iterator<Item = (&Event, StateId)> {
        self.delta[q].iter().map(|(e, &r)| (e, r))
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.states.len()
    }

    /// Runs `word` from the initial state.
    pub fn run(&self, word: &Word) -> Option<StateId> {
        word.events().iter().try_fold(0, |q, e| self.successor(q, e))
    }

    pub fn generates(&self, word: &Word) -> bool {
        self.run(word).is_some()
    }

    pub fn accepts(&self, word: &Word) -> bool {
        self.run(word).is_some_and(|q| self.marked[q])
    }

    /// Same automaton with every state marked: the marked language becomes the
    /// generated language.
    pub fn mark_all(&self) -> Automaton {
        let mut a = self.clone();
        a.marked = vec![true; a.states.len()];
        a
    }

    pub(crate) fn with_marking(&self, marked: Vec<bool>) -> Automaton {
        debug_assert_eq!(marked.len(), self.states.len());
        let mut a = self.clone();
        a.marked = marked;
        a
    }

    /// Checks the structural invariants: determinism is guaranteed by the
    /// representation, so this verifies accessibility and alphabet membership.
    pub fn check_invariants(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        let mut seen = vec![false; self.states.len()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(q) = stack.pop() {
            for (e, &r) in &self.delta[q] {
                if !self.alphabet.contains(e) {
                    return Err(Error::InvalidAutomaton(format!("event `{e}` outside the alphabet")));
                }
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidAutomaton("unreachable state".into()));
        }
        Ok(())
    }
}

/// Incremental constructor for automata with named states.
#[derive(Debug)]
pub struct AutomatonBuilder {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    index: HashMap<String, StateId>,
    initial: Option<StateId>,
    marked: Vec<bool>,
    delta: Vec<BTreeMap<Event, StateId>>,
}

impl AutomatonBuilder {
    pub fn new(name: impl Into<String>, alphabet: Alphabet) -> Self {
        AutomatonBuilder {
            name: name.into(),
            alphabet,
            states: Vec::new(),
            index: HashMap::new(),
            initial: None,
            marked: Vec::new(),
            delta: Vec::new(),
        }
    }

    /// Returns the id of the state named `name`, creating it if needed.
    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&q) = self.index.get(name) {
            return q;
        }
        let q = self.states.len();
        self.states.push(name.to_string());
        self.index.insert(name.to_string(), q);
        self.marked.push(false);
        self.delta.push(BTreeMap::new());
        q
    }

    pub fn contains_state(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.initial = Some(q);
        self
    }

    pub fn marked(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.marked[q] = true;
        self
    }

    /// Adds `src --event--> dst`. A second, different successor for the same
    /// `(src, event)` is an error.
    pub fn transition(&mut self, src: &str, event: &str, dst: &str) -> Result<&mut Self> {
        let e = Event::new(event);
        if !self.alphabet.contains(&e) {
            return Err(Error::AlphabetMismatch(format!(
                "event `{event}` is not in the alphabet of `{}`",
                self.name
            )));
        }
        let s = self.state(src);
        let d = self.state(dst);
        if let Some(&prev) = self.delta[s].get(&e) {
            if prev != d {
                return Err(Error::Nondeterministic {
                    state: src.to_string(),
                    event: event.to_string(),
                });
            }
        }
        self.delta[s].insert(e, d);
        Ok(self)
    }

    /// Finishes construction; unreachable states are dropped.
    pub fn build(self) -> Result<Automaton> {
        let init = self
            .initial
            .ok_or_else(|| Error::InvalidAutomaton(format!("`{}` has no initial state", self.name)))?;
        for s in &self.states {
            if !valid_event_name(s) {
                return Err(Error::InvalidName(s.clone()));
            }
        }
        // Move the initial state to position 0.
        let n = self.states.len();
        let mut perm: Vec<StateId> = (0..n).collect();
        perm.swap(0, init);
        let mut inverse = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let states = perm.iter().map(|&q| self.states[q].clone()).collect();
        let marked = perm.iter().map(|&q| self.marked[q]).collect();
        let delta = perm
            .iter()
            .map(|&q| self.delta[q].iter().map(|(e, &r)| (e.clone(), inverse[r])).collect())
            .collect();
        Ok(Automaton::from_parts(self.name, self.alphabet, states, marked, delta))
    }
}
