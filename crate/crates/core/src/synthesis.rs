//! Supremal normal, controllable, and controllable-and-normal sublanguages.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::automaton::{cap_name, Automaton, StateId, DEFAULT_NAME_CAP};
use crate::error::{Error, Result};
use crate::event::{fmt_alphabet, Alphabet, Event, EventTable, Word};
use crate::ops::{
    difference, is_nonblocking, language_subset, lift, parallel, prefix_closure, project_onto, remove_extensions, trim,
    ProjectionSpec,
};

/// A specification `K` against a plant `L` with uncontrollable events and an
/// observation projection.
///
/// The plant contributes its generated language only. `Lm(spec) ⊆ L(plant)`
/// is checked on construction.
#[derive(Clone, Debug)]
pub struct SynthesisProblem {
    spec: Automaton,
    plant: Automaton,
    uncontrollable: Alphabet,
    observation: ProjectionSpec,
}

impl SynthesisProblem {
    /// `uncontrollable` and `observable` are intersected with the plant alphabet.
    pub fn new(spec: Automaton, plant: Automaton, uncontrollable: &Alphabet, observable: &Alphabet) -> Result<Self> {
        if spec.alphabet() != plant.alphabet() {
            return Err(Error::AlphabetMismatch(format!(
                "spec `{}` is over {} but plant `{}` is over {}",
                spec.name(),
                fmt_alphabet(spec.alphabet()),
                plant.name(),
                fmt_alphabet(plant.alphabet())
            )));
        }
        let cmp = language_subset(&spec, &plant.mark_all())?;
        if let Some(w) = cmp.marked {
            return Err(Error::NotSublanguage { witness: w.to_string() });
        }
        let sigma = plant.alphabet();
        Ok(SynthesisProblem {
            uncontrollable: sigma.intersection(uncontrollable).cloned().collect(),
            observation: ProjectionSpec::restricted(sigma, observable),
            spec,
            plant,
        })
    }

    /// Attributes taken from `table`.
    pub fn with_table(spec: Automaton, plant: Automaton, table: &EventTable) -> Result<Self> {
        Self::new(spec, plant, &table.uncontrollable(), &table.observable())
    }

    /// Like [`SynthesisProblem::new`] but replaces the spec by its intersection
    /// with the plant's generated language instead of rejecting it.
    pub fn intersecting(
        spec: Automaton,
        plant: Automaton,
        uncontrollable: &Alphabet,
        observable: &Alphabet,
    ) -> Result<Self> {
        if spec.alphabet() != plant.alphabet() {
            return Self::new(spec, plant, uncontrollable, observable);
        }
        let name = spec.name().to_string();
        let spec = parallel([&spec, &plant.mark_all()]).with_name(name);
        Self::new(spec, plant, uncontrollable, observable)
    }

    pub fn spec(&self) -> &Automaton {
        &self.spec
    }

    pub fn plant(&self) -> &Automaton {
        &self.plant
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.plant.alphabet()
    }

    pub fn uncontrollable(&self) -> &Alphabet {
        &self.uncontrollable
    }

    pub fn observable(&self) -> &Alphabet {
        self.observation.target()
    }

    pub fn observation(&self) -> &ProjectionSpec {
        &self.observation
    }

    /// Same plant and attributes with another specification.
    pub fn with_spec(&self, spec: Automaton) -> Result<Self> {
        Self::new(spec, self.plant.clone(), &self.uncontrollable, self.observable())
    }

    /// Whether `Lm(spec)` is prefix-closed.
    pub fn spec_is_prefix_closed(&self) -> bool {
        let t = trim(&self.spec);
        !t.has_marked_state() || t.marked_flags().iter().all(|&m| m)
    }

    /// Shortest `sσ` with `s ∈ K̄`, `σ` uncontrollable, `sσ ∈ L ∖ K̄`.
    pub fn controllability_witness(&self) -> Option<Word> {
        let k = trim(&self.spec);
        if !k.has_marked_state() {
            return None;
        }
        let start = (0, 0);
        let mut parent: HashMap<(StateId, StateId), Option<((StateId, StateId), Event)>> =
            HashMap::from([(start, None)]);
        let mut queue = VecDeque::from([start]);
        while let Some(p @ (qk, qg)) = queue.pop_front() {
            for (e, rg) in self.plant.transitions(qg) {
                match k.successor(qk, e) {
                    Some(rk) => {
                        if let std::collections::hash_map::Entry::Vacant(v) = parent.entry((rk, rg)) {
                            v.insert(Some((p, e.clone())));
                            queue.push_back((rk, rg));
                        }
                    }
                    None if self.uncontrollable.contains(e) => {
                        let mut events = vec![e.clone()];
                        let mut cur = p;
                        while let Some(Some((prev, f))) = parent.get(&cur) {
                            events.push(f.clone());
                            cur = *prev;
                        }
                        events.reverse();
                        return Some(Word(events));
                    }
                    None => {}
                }
            }
        }
        None
    }

    pub fn is_controllable(&self) -> bool {
        self.controllability_witness().is_none()
    }

    /// Shortest string of `P⁻¹P(K̄) ∩ L` outside `K̄`.
    pub fn normality_witness(&self) -> Option<Word> {
        let closure = prefix_closure(&trim(&self.spec));
        let seen = lift(&project_onto(&closure, self.observable()), self.alphabet());
        let right = parallel([&seen, &self.plant.mark_all()]);
        language_subset(&right, &closure)
            .expect("both over the plant alphabet")
            .marked
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    /// Supremal normal sublanguage of `Lm(spec)`.
    ///
    /// Prefix-closed specifications go through [`Self::sup_n_closed`];
    /// everything else through [`Self::sup_n_fixpoint`].
    pub fn sup_n(&self) -> Automaton {
        if self.spec_is_prefix_closed() {
            self.sup_n_closed()
        } else {
            self.sup_n_fixpoint()
        }
    }

    /// `K̄ ∖ DΣ*` with `D = K̄ ∩ P⁻¹P(L ∖ K̄)`: the supremal normal sublanguage
    /// of the prefix closure `K̄`.
    pub fn sup_n_closed(&self) -> Automaton {
        let closure = prefix_closure(&trim(&self.spec));
        let outside = difference(&self.plant.mark_all(), &closure).expect("same alphabet");
        let confusable = lift(&project_onto(&outside, self.observable()), self.alphabet());
        let d = parallel([&closure, &confusable]);
        let sup = remove_extensions(&closure, &d);
        trim(&sup).with_name(format!("supN({})", self.spec.name()))
    }

    /// Supremal normal sublanguage by fixpoint on the observer-refined product.
    pub fn sup_n_fixpoint(&self) -> Automaton {
        Refined::build(self, true)
            .supremal(self, false, true)
            .with_name(format!("supN({})", self.spec.name()))
    }

    /// Supremal controllable sublanguage of `Lm(spec)`.
    pub fn sup_c(&self) -> Automaton {
        Refined::build(self, false)
            .supremal(self, true, false)
            .with_name(format!("supC({})", self.spec.name()))
    }

    /// Supremal controllable and normal sublanguage of `Lm(spec)`.
    pub fn sup_cn(&self) -> Automaton {
        Refined::build(self, true)
            .supremal(self, true, true)
            .with_name(format!("supCN({})", self.spec.name()))
    }
}

/// Closed loop of a supervisor automaton with its plant.
#[derive(Clone, Debug)]
pub struct ClosedLoop {
    pub automaton: Automaton,
    pub nonblocking: bool,
}

/// Composes `supervisor` with `plant`. The supervisor's alphabet must be a
/// subset of the plant's.
pub fn closed_loop(supervisor: &Automaton, plant: &Automaton) -> Result<ClosedLoop> {
    if !supervisor.alphabet().is_subset(plant.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "supervisor `{}` uses events outside plant `{}`",
            supervisor.name(),
            plant.name()
        )));
    }
    let automaton = parallel([supervisor, plant]);
    let nonblocking = is_nonblocking(&automaton);
    Ok(ClosedLoop { automaton, nonblocking })
}

/// Product of the completed trim spec with the plant, refined by the set of
/// product states consistent with the observation so far.
///
/// Every string of `L` reaches exactly one state. Two strings with the same
/// observation reach states of the same class, and every product state of a
/// class is reached by strings of every observation that leads to it.
struct Refined {
    /// Spec component (`None` is the sink) and plant component.
    base: Vec<(Option<StateId>, StateId)>,
    class: Vec<usize>,
    succ: Vec<Vec<(Event, usize)>>,
    marked: Vec<bool>,
    class_count: usize,
}

impl Refined {
    fn build(p: &SynthesisProblem, observe: bool) -> Self {
        let k = trim(&p.spec);
        let g = &p.plant;
        let k_alive = k.has_marked_state();
        // Base product: trim spec completed with a sink, times the plant.
        let start = (if k_alive { Some(0) } else { None }, 0);
        let mut base_index: HashMap<(Option<StateId>, StateId), usize> = HashMap::from([(start, 0)]);
        let mut base = vec![start];
        let mut base_succ: Vec<Vec<(Event, usize)>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            let (qk, qg) = base[i];
            for (e, rg) in g.transitions(qg) {
                let rk = qk.and_then(|q| k.successor(q, e));
                let j = *base_index.entry((rk, rg)).or_insert_with(|| {
                    base.push((rk, rg));
                    base_succ.push(Vec::new());
                    queue.push_back(base.len() - 1);
                    base.len() - 1
                });
                base_succ[i].push((e.clone(), j));
            }
        }

        let observable = p.observable();
        let close = |set: &mut BTreeSet<usize>| {
            let mut stack: Vec<usize> = set.iter().copied().collect();
            while let Some(a) = stack.pop() {
                for (e, b) in &base_succ[a] {
                    if !observable.contains(e) && set.insert(*b) {
                        stack.push(*b);
                    }
                }
            }
        };
        let mut classes: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut class_sets: Vec<BTreeSet<usize>> = Vec::new();
        let intern = |classes: &mut HashMap<BTreeSet<usize>, usize>,
                      class_sets: &mut Vec<BTreeSet<usize>>,
                      set: BTreeSet<usize>|
         -> usize {
            let len = class_sets.len();
            *classes.entry(set.clone()).or_insert_with(|| {
                class_sets.push(set);
                len
            })
        };
        let c0 = if observe {
            let mut x0 = BTreeSet::from([0]);
            close(&mut x0);
            intern(&mut classes, &mut class_sets, x0)
        } else {
            intern(&mut classes, &mut class_sets, BTreeSet::new())
        };

        let mut index: HashMap<(usize, usize), usize> = HashMap::from([((0, c0), 0)]);
        let mut states = vec![(0, c0)];
        let mut succ: Vec<Vec<(Event, usize)>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0]);
        // Memo for class transitions on observable events.
        let mut class_step: HashMap<(usize, Event), usize> = HashMap::new();
        while let Some(h) = queue.pop_front() {
            let (a, c) = states[h];
            for (e, b) in base_succ[a].clone() {
                let c2 = if observe && observable.contains(&e) {
                    match class_step.get(&(c, e.clone())) {
                        Some(&c2) => c2,
                        None => {
                            let mut next: BTreeSet<usize> = class_sets[c]
                                .iter()
                                .flat_map(|&x| base_succ[x].iter().filter(|(f, _)| *f == e).map(|(_, y)| *y))
                                .collect();
                            close(&mut next);
                            let c2 = intern(&mut classes, &mut class_sets, next);
                            class_step.insert((c, e.clone()), c2);
                            c2
                        }
                    }
                } else {
                    c
                };
                let j = *index.entry((b, c2)).or_insert_with(|| {
                    states.push((b, c2));
                    succ.push(Vec::new());
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                succ[h].push((e, j));
            }
        }

        let marked = states
            .iter()
            .map(|&(a, _)| base[a].0.is_some_and(|q| k.is_marked(q)))
            .collect();
        Refined {
            base: states.iter().map(|&(a, _)| base[a]).collect(),
            class: states.iter().map(|&(_, c)| c).collect(),
            succ,
            marked,
            class_count: class_sets.len(),
        }
    }

    /// Largest set of states closed under the requested conditions and trim;
    /// returns its recognizer.
    fn supremal(&self, p: &SynthesisProblem, controllable: bool, normal: bool) -> Automaton {
        let n = self.base.len();
        let mut good: Vec<bool> = self.base.iter().map(|(k, _)| k.is_some()).collect();
        loop {
            let mut changed = false;
            if controllable {
                loop {
                    let mut pass = false;
                    for h in 0..n {
                        if good[h]
                            && self.succ[h]
                                .iter()
                                .any(|(e, j)| !good[*j] && p.uncontrollable.contains(e))
                        {
                            good[h] = false;
                            pass = true;
                        }
                    }
                    if !pass {
                        break;
                    }
                    changed = true;
                }
            }
            if normal {
                let mut bad = vec![false; self.class_count];
                for h in 0..n {
                    if !good[h] {
                        bad[self.class[h]] = true;
                    }
                }
                for h in 0..n {
                    if good[h] && bad[self.class[h]] {
                        good[h] = false;
                        changed = true;
                    }
                }
            }
            changed |= self.trim_good(&mut good);
            if !changed {
                break;
            }
        }
        self.restrict(p, &good)
    }

    /// Drops good states not reachable within good states or unable to reach
    /// a marked good state. Returns whether anything changed.
    fn trim_good(&self, good: &mut [bool]) -> bool {
        let n = good.len();
        let mut reach = vec![false; n];
        if good[0] {
            reach[0] = true;
            let mut stack = vec![0];
            while let Some(h) = stack.pop() {
                for (_, j) in &self.succ[h] {
                    if good[*j] && !reach[*j] {
                        reach[*j] = true;
                        stack.push(*j);
                    }
                }
            }
        }
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for h in 0..n {
            if reach[h] {
                for (_, j) in &self.succ[h] {
                    if reach[*j] {
                        pred[*j].push(h);
                    }
                }
            }
        }
        let mut coreach = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&h| reach[h] && self.marked[h]).collect();
        for &h in &stack {
            coreach[h] = true;
        }
        while let Some(h) = stack.pop() {
            for &i in &pred[h] {
                if !coreach[i] {
                    coreach[i] = true;
                    stack.push(i);
                }
            }
        }
        let mut changed = false;
        for h in 0..n {
            if good[h] && !coreach[h] {
                good[h] = false;
                changed = true;
            }
        }
        changed
    }

    fn restrict(&self, p: &SynthesisProblem, good: &[bool]) -> Automaton {
        if !good[0] {
            return Automaton::empty("empty", p.alphabet().clone());
        }
        let k = trim(&p.spec);
        let keep: Vec<usize> = (0..good.len()).filter(|&h| good[h]).collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &h)| (h, i)).collect();
        let states = keep
            .iter()
            .map(|&h| {
                let (qk, qg) = self.base[h];
                let left = qk.map_or("sink", |q| k.state_name(q));
                cap_name(format!("{left}.{}", p.plant.state_name(qg)), DEFAULT_NAME_CAP)
            })
            .collect();
        let marked = keep.iter().map(|&h| self.marked[h]).collect();
        let delta = keep
            .iter()
            .map(|&h| {
                self.succ[h]
                    .iter()
                    .filter_map(|(e, j)| pos.get(j).map(|&r| (e.clone(), r)))
                    .collect::<BTreeMap<_, _>>()
            })
            .collect();
        Automaton::from_parts("sup".into(), p.alphabet().clone(), states, marked, delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::alphabet;
    use crate::ops::{language_equal, parallel};
    use crate::AutomatonBuilder;

    fn closed(name: &str, sigma: &[&str], w: &str) -> Automaton {
        Automaton::from_word(name, alphabet(sigma.iter().copied()), &Word::parse(w), true)
    }

    fn module(i: usize) -> (Automaton, Automaton) {
        match i {
            1 => (
                closed("K1", &["u1", "u", "c"], "u1"),
                closed("L1", &["u1", "u", "c"], "u1 u c"),
            ),
            2 => (
                closed("K2", &["u2", "c", "u"], "u2"),
                closed("L2", &["u2", "c", "u"], "u2 c u"),
            ),
            _ => (closed("K3", &["u3", "c"], "u3"), closed("L3", &["u3", "c"], "u3 c")),
        }
    }

    fn obs_c() -> Alphabet {
        alphabet(["c"])
    }

    fn equal(a: &Automaton, b: &Automaton) -> bool {
        language_equal(a, b).unwrap().holds()
    }

    #[test]
    fn rejects_spec_outside_plant() {
        let k = closed("K", &["a", "b"], "b");
        let l = closed("L", &["a", "b"], "a");
        let err = SynthesisProblem::new(k.clone(), l.clone(), &Alphabet::new(), &Alphabet::new()).unwrap_err();
        assert!(matches!(err, Error::NotSublanguage { .. }));
        let p = SynthesisProblem::intersecting(k, l, &Alphabet::new(), &Alphabet::new()).unwrap();
        assert!(!p.spec().generates(&Word::parse("b")));
    }

    #[test]
    fn controllability_examples() {
        let (k1, l1) = module(1);
        let none = SynthesisProblem::new(k1.clone(), l1.clone(), &Alphabet::new(), &obs_c()).unwrap();
        assert!(none.is_controllable());
        let same = SynthesisProblem::new(l1.clone(), l1.clone(), &alphabet(["u"]), &obs_c()).unwrap();
        assert!(same.is_controllable());
        let p = SynthesisProblem::new(k1, l1, &alphabet(["u"]), &obs_c()).unwrap();
        assert_eq!(p.controllability_witness(), Some(Word::parse("u1 u")));
    }

    #[test]
    fn normality_examples() {
        let (k1, l1) = module(1);
        let full = SynthesisProblem::new(k1.clone(), l1.clone(), &Alphabet::new(), l1.alphabet()).unwrap();
        assert!(full.is_normal());
        let p = SynthesisProblem::new(k1, l1, &Alphabet::new(), &obs_c()).unwrap();
        assert_eq!(p.normality_witness(), Some(Word::parse("u1 u")));
        let (k2, l2) = module(2);
        assert!(SynthesisProblem::new(k2, l2, &Alphabet::new(), &obs_c())
            .unwrap()
            .is_normal());
    }

    #[test]
    fn local_sup_n_of_three_module_system() {
        let (k1, l1) = module(1);
        let p1 = SynthesisProblem::new(k1.clone(), l1, &Alphabet::new(), &obs_c()).unwrap();
        for sup in [p1.sup_n(), p1.sup_n_fixpoint()] {
            assert!(!sup.has_marked_state());
        }
        let (k2, l2) = module(2);
        let p2 = SynthesisProblem::new(k2.clone(), l2, &Alphabet::new(), &obs_c()).unwrap();
        assert!(equal(&p2.sup_n(), &k2));
        assert!(equal(&p2.sup_n_fixpoint(), &k2));
    }

    #[test]
    fn global_sup_n_of_three_module_system_is_k() {
        let (k1, l1) = module(1);
        let (k2, l2) = module(2);
        let (k3, l3) = module(3);
        let k = parallel([&k1, &k2, &k3]);
        let l = parallel([&l1, &l2, &l3]);
        let p = SynthesisProblem::new(k.clone(), l, &Alphabet::new(), &obs_c()).unwrap();
        assert!(equal(&p.sup_n(), &k));
        assert!(equal(&p.sup_n_fixpoint(), &k));
    }

    #[test]
    fn full_observation_keeps_spec() {
        let (k1, l1) = module(1);
        let sigma = l1.alphabet().clone();
        let p = SynthesisProblem::new(k1.clone(), l1, &Alphabet::new(), &sigma).unwrap();
        assert!(equal(&p.sup_n(), &k1));
    }

    #[test]
    fn sup_c_examples() {
        let (k1, l1) = module(1);
        let p = SynthesisProblem::new(k1.clone(), l1.clone(), &Alphabet::new(), &obs_c()).unwrap();
        assert!(equal(&p.sup_c(), &k1));
        let p = SynthesisProblem::new(l1.clone(), l1.clone(), &alphabet(["u", "c"]), &obs_c()).unwrap();
        assert!(equal(&p.sup_c(), &l1));
        let p = SynthesisProblem::new(k1.clone(), l1.clone(), &alphabet(["u", "c"]), &obs_c()).unwrap();
        let eps = Automaton::epsilon("eps", l1.alphabet().clone());
        assert!(equal(&p.sup_c(), &eps));
    }

    #[test]
    fn sup_cn_examples() {
        let (k1, l1) = module(1);
        let sigma = l1.alphabet().clone();
        let p = SynthesisProblem::new(k1.clone(), l1.clone(), &Alphabet::new(), &sigma).unwrap();
        assert!(equal(&p.sup_cn(), &k1));
        let p = SynthesisProblem::new(k1.clone(), l1.clone(), &Alphabet::new(), &obs_c()).unwrap();
        assert!(equal(&p.sup_cn(), &p.sup_n()));
        let p = SynthesisProblem::new(k1, l1, &alphabet(["u"]), &obs_c()).unwrap();
        assert!(!p.sup_cn().has_marked_state());
    }

    #[test]
    fn marked_spec_fixpoint_trims_blocking_prefixes() {
        // K marks only `a b`; `a` is unobservable and `a c` is in L, so after
        // observing nothing the supervisor cannot tell `ε` from `a`.
        let sigma = alphabet(["a", "b", "c"]);
        let mut g = AutomatonBuilder::new("L", sigma.clone());
        g.initial("0");
        g.transition("0", "a", "1").unwrap();
        g.transition("1", "b", "2").unwrap();
        g.transition("1", "c", "3").unwrap();
        let l = g.build().unwrap();
        let k = Automaton::from_word("K", sigma.clone(), &Word::parse("a b"), false);
        let p = SynthesisProblem::new(k.clone(), l.clone(), &Alphabet::new(), &alphabet(["b", "c"])).unwrap();
        assert!(equal(&p.sup_n(), &k));
        let p = SynthesisProblem::new(k, l, &alphabet(["c"]), &alphabet(["b", "c"])).unwrap();
        assert!(!p.sup_c().has_marked_state());
        assert!(!p.sup_cn().has_marked_state());
    }

    #[test]
    fn closed_loop_with_plant_is_plant() {
        let (_, l1) = module(1);
        let cl = closed_loop(&l1, &l1).unwrap();
        assert!(equal(&cl.automaton, &l1));
        assert!(cl.nonblocking);
        let stray = closed("S", &["z"], "z");
        assert!(closed_loop(&stray, &l1).is_err());
    }
}
