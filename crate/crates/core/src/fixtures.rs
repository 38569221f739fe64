//! Reference systems shipped in `data/`.
//!
//! The three-module system has shared events `u` (unobservable) and `c`
//! (observable). The railroad has two trains, `w` and `e`, each cycling
//! through wait, approach, enter and leave; leaving is unobservable and every
//! event is controllable. Train plants and the global specification are a
//! reconstruction: a train may wait before or after approaching, and the
//! global specification alternates the trains through the shared section.

use std::path::PathBuf;

use crate::automaton::Automaton;
use crate::checks::merge_tables;
use crate::event::EventTable;
use crate::format::parse_automaton;
use crate::system::ModularSystem;

/// Directory holding the fixture automata and project manifests.
pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn load(texts: &[(&str, &str)]) -> (Vec<Automaton>, EventTable) {
    let mut tables = Vec::new();
    let mut automata = Vec::new();
    for (file, text) in texts {
        let (a, t) = parse_automaton(text).expect("fixture parses");
        automata.push(a);
        tables.push((file.to_string(), t));
    }
    (automata, merge_tables(&tables).expect("fixture tables agree"))
}

macro_rules! fixture {
    ($($file:literal),* $(,)?) => {
        load(&[$(($file, include_str!(concat!("../data/", $file)))),*])
    };
}

/// `L1 = closure{u1 u c}`, `L2 = closure{u2 c u}`, `L3 = closure{u3 c}` with
/// `K_i = closure{u_i}` and `Σo = {c}`.
pub fn three_module() -> ModularSystem {
    let (plants, t1) = fixture!("three_L1.aut", "three_L2.aut", "three_L3.aut");
    let (specs, t2) = fixture!("three_K1.aut", "three_K2.aut", "three_K3.aut");
    let mut table = t1;
    table.merge(&t2).expect("fixture tables agree");
    ModularSystem::new(plants, &table)
        .and_then(|m| m.with_local_specs(specs))
        .expect("fixture is valid")
}

/// The two train plants.
pub fn railroad_plants() -> (Vec<Automaton>, EventTable) {
    fixture!("rail_train_w.aut", "rail_train_e.aut")
}

/// Trains with local specifications `K_w = (w_w a_w e_w l_w)*` and
/// `K_e = (w_e a_e e_e l_e)*`.
pub fn railroad_local() -> ModularSystem {
    let (plants, table) = railroad_plants();
    let (specs, _) = fixture!("rail_K_w.aut", "rail_K_e.aut");
    ModularSystem::new(plants, &table)
        .and_then(|m| m.with_local_specs(specs))
        .expect("fixture is valid")
}

/// Trains with the global specification
/// `closure(w_w w_e (a_w e_w l_w w_w a_e e_e l_e w_e)*)`.
pub fn railroad_global() -> ModularSystem {
    let (plants, table) = railroad_plants();
    let (spec, _) = fixture!("rail_K.aut");
    ModularSystem::new(plants, &table)
        .and_then(|m| m.with_global_spec(spec.into_iter().next().expect("one spec")))
        .expect("fixture is valid")
}
