//! Instance generators shared by the benchmarks.

use modsup_core::random::{event_names, Generator, SharedEvents, SystemConfig};
use modsup_core::{ModularSystem, SynthesisProblem};

/// A single plant with `states` states over `events` events and a random
/// sublanguage as specification.
pub fn problem(seed: u64, states: usize, events: usize, prefix_closed: bool) -> SynthesisProblem {
    let mut g = Generator::new(seed);
    let sigma = event_names(events);
    let plant = g.automaton("L", &sigma, states, false, 0.5, true);
    let spec = g.sublanguage(&plant, "K", prefix_closed);
    let table = g.table(&sigma, 0.6, 0.6);
    SynthesisProblem::with_table(spec, plant, &table).expect("sublanguage of the plant")
}

/// A local-spec modular system whose shared events are observable.
pub fn local_system(seed: u64, modules: usize, max_states: usize) -> ModularSystem {
    let cfg = SystemConfig {
        modules,
        events: 2 * modules + 2,
        max_states,
        acyclic: false,
        density: 0.3,
        p_controllable: 0.6,
        p_observable: 0.6,
        shared: SharedEvents::Observable,
        prefix_closed_specs: true,
    };
    Generator::new(seed).local_system(&cfg)
}
