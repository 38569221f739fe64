//! Seeded random instances for property tests, oracle comparisons and
//! benchmarks. The same seed always yields the same instance.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::Automaton;
use crate::event::{Alphabet, Event, EventAttrs, EventTable};
use crate::system::{shared_events, ModularSystem};

/// Which attribute the shared events are forced to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SharedEvents {
    Unconstrained,
    Observable,
    ControllableObservable,
}

/// Shape of a random modular system.
#[derive(Clone, Debug)]
pub struct SystemConfig {
    pub modules: usize,
    pub events: usize,
    pub max_states: usize,
    pub acyclic: bool,
    /// Expected number of extra transitions per (state, event) pair.
    pub density: f64,
    pub p_controllable: f64,
    pub p_observable: f64,
    pub shared: SharedEvents,
    pub prefix_closed_specs: bool,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            modules: 2,
            events: 4,
            max_states: 4,
            acyclic: false,
            density: 0.3,
            p_controllable: 0.6,
            p_observable: 0.6,
            shared: SharedEvents::Unconstrained,
            prefix_closed_specs: true,
        }
    }
}

/// Event names `a`, `b`, … used by the generator.
pub fn event_names(n: usize) -> Alphabet {
    (0..n)
        .map(|i| {
            let c = char::from(b'a' + (i % 26) as u8);
            if i < 26 {
                Event::new(&c.to_string())
            } else {
                Event::new(&format!("{c}{}", i / 26))
            }
        })
        .collect()
}

pub struct Generator {
    seed: u64,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A connected automaton with `1..=max_states` states. Every state is
    /// reachable through a random spanning tree; extra transitions are added
    /// with probability `density`. Acyclic automata only move to higher
    /// states.
    pub fn automaton(
        &mut self,
        name: &str,
        alphabet: &Alphabet,
        max_states: usize,
        acyclic: bool,
        density: f64,
        all_marked: bool,
    ) -> Automaton {
        let events: Vec<Event> = alphabet.iter().cloned().collect();
        let mut n = self.rng.gen_range(1..=max_states.max(1));
        if events.is_empty() {
            n = 1;
        }
        let mut delta: Vec<BTreeMap<Event, usize>> = vec![BTreeMap::new(); n];
        for q in 1..n {
            let free: Vec<(usize, &Event)> = (0..q)
                .flat_map(|p| events.iter().map(move |e| (p, e)))
                .filter(|(p, e)| !delta[*p].contains_key(*e))
                .collect();
            match free.choose(&mut self.rng) {
                Some(&(p, e)) => {
                    delta[p].insert(e.clone(), q);
                }
                None => {
                    n = q;
                    delta.truncate(q);
                    break;
                }
            }
        }
        for p in 0..n {
            for e in &events {
                if delta[p].contains_key(e) || !self.rng.gen_bool(density) {
                    continue;
                }
                let lo = if acyclic { p + 1 } else { 0 };
                if lo < n {
                    let r = self.rng.gen_range(lo..n);
                    delta[p].insert(e.clone(), r);
                }
            }
        }
        let marked = (0..n).map(|_| all_marked || self.rng.gen_bool(0.5)).collect();
        let states = (0..n).map(|q| q.to_string()).collect();
        Automaton::from_parts(name.to_string(), alphabet.clone(), states, marked, delta)
    }

    /// Random attributes for `alphabet`.
    pub fn table(&mut self, alphabet: &Alphabet, p_controllable: f64, p_observable: f64) -> EventTable {
        let mut t = EventTable::new();
        for e in alphabet {
            let attrs = EventAttrs::new(self.rng.gen_bool(p_controllable), self.rng.gen_bool(p_observable));
            t.set(e.clone(), attrs);
        }
        t
    }

    /// A random sublanguage of `a`: transitions dropped with probability
    /// `0.2`, and either every state marked or each marked with probability
    /// one half.
    pub fn sublanguage(&mut self, a: &Automaton, name: &str, prefix_closed: bool) -> Automaton {
        let delta = a
            .states()
            .map(|q| {
                a.transitions(q)
                    .filter(|_| !self.rng.gen_bool(0.2))
                    .map(|(e, r)| (e.clone(), r))
                    .collect()
            })
            .collect();
        let marked = a.states().map(|_| prefix_closed || self.rng.gen_bool(0.5)).collect();
        Automaton::from_parts(
            name.to_string(),
            a.alphabet().clone(),
            a.state_names().to_vec(),
            marked,
            delta,
        )
    }

    /// Random module alphabets over `events` names: each event joins each
    /// module with probability one half, and every module gets at least one.
    pub fn alphabets(&mut self, modules: usize, events: usize) -> Vec<Alphabet> {
        let sigma: Vec<Event> = event_names(events).into_iter().collect();
        (0..modules)
            .map(|_| {
                let mut a: Alphabet = sigma.iter().filter(|_| self.rng.gen_bool(0.5)).cloned().collect();
                if a.is_empty() {
                    a.insert(sigma.choose(&mut self.rng).expect("events > 0").clone());
                }
                a
            })
            .collect()
    }

    /// Random attributes with the shared-event constraint applied.
    pub fn constrained_table(&mut self, alphabets: &[Alphabet], cfg: &SystemConfig) -> EventTable {
        let sigma: Alphabet = alphabets.iter().flat_map(|a| a.iter().cloned()).collect();
        let mut table = self.table(&sigma, cfg.p_controllable, cfg.p_observable);
        for e in shared_events(alphabets) {
            let mut attrs = table.get(&e).expect("event in table");
            match cfg.shared {
                SharedEvents::Unconstrained => {}
                SharedEvents::Observable => attrs.observable = true,
                SharedEvents::ControllableObservable => {
                    attrs.observable = true;
                    attrs.controllable = true;
                }
            }
            table.set(e, attrs);
        }
        table
    }

    /// Plants `L_i` (all states marked) without specifications.
    pub fn plants(&mut self, cfg: &SystemConfig) -> (Vec<Automaton>, EventTable) {
        let alphabets = self.alphabets(cfg.modules, cfg.events);
        let table = self.constrained_table(&alphabets, cfg);
        let plants = alphabets
            .iter()
            .enumerate()
            .map(|(i, a)| {
                self.automaton(
                    &format!("L{}", i + 1),
                    a,
                    cfg.max_states,
                    cfg.acyclic,
                    cfg.density,
                    true,
                )
            })
            .collect();
        (plants, table)
    }

    /// A modular system with random local specifications `K_i ⊆ L_i`.
    pub fn local_system(&mut self, cfg: &SystemConfig) -> ModularSystem {
        let (plants, table) = self.plants(cfg);
        let specs = plants
            .iter()
            .enumerate()
            .map(|(i, l)| self.sublanguage(l, &format!("K{}", i + 1), cfg.prefix_closed_specs))
            .collect();
        ModularSystem::new(plants, &table)
            .and_then(|m| m.with_local_specs(specs))
            .expect("generated system is valid")
    }

    /// A modular system with a random global specification `K ⊆ ∥ L_i`.
    pub fn global_system(&mut self, cfg: &SystemConfig) -> ModularSystem {
        let (plants, table) = self.plants(cfg);
        let m = ModularSystem::new(plants, &table).expect("generated system is valid");
        let k = self.sublanguage(&m.global_plant(), "K", cfg.prefix_closed_specs);
        m.with_global_spec(k).expect("generated spec is a sublanguage")
    }
}
