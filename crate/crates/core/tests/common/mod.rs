#![allow(dead_code)]

use modsup_core::random::{event_names, Generator};
use modsup_core::{Alphabet, Automaton};

/// Strings up to this length cover every acyclic instance below.
pub const CHECK_BOUND: usize = 6;

/// An acyclic automaton with at most six states, a projection alphabet and
/// an uncontrollable set.
pub struct CheckInstance {
    pub automaton: Automaton,
    pub gamma: Alphabet,
    pub uncontrollable: Alphabet,
}

pub fn check_instance(seed: u64) -> CheckInstance {
    let mut g = Generator::new(seed);
    let sigma = event_names(2 + (seed % 3) as usize);
    let mut a = g.automaton("G", &sigma, 6, true, 0.5, false);
    while a.state_count() < 3 {
        a = g.automaton("G", &sigma, 6, true, 0.5, false);
    }
    let table = g.table(&sigma, 0.5, 0.5);
    CheckInstance {
        automaton: a,
        gamma: table.observable(),
        uncontrollable: table.uncontrollable(),
    }
}

/// Renders a witness value back to a word.
pub fn word(value: &str) -> modsup_core::Word {
    modsup_core::Word::parse(&value.replace('ε', ""))
}
