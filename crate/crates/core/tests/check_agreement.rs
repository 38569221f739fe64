mod common;

use common::{check_instance, word, CHECK_BOUND};
use modsup_core::checks::{check_moc_bounded, is_lcc, is_observer, is_occ};
use modsup_core::ops::trim;
use modsup_core::oracle::{oracle_lcc, oracle_moc, oracle_observer, oracle_occ, BoundedLanguage};
use modsup_core::random::{Generator, SystemConfig};
use modsup_core::ModularSystem;

const SEEDS: u64 = 200;

#[test]
fn observer_matches_definition() {
    let mut fails = 0;
    for seed in 0..SEEDS {
        let c = check_instance(seed);
        let marked = BoundedLanguage::marked(&c.automaton, CHECK_BOUND);
        assert!(marked.complete);
        let v = is_observer(&c.automaton, &c.gamma);
        let o = oracle_observer(&marked, &c.gamma);
        assert_eq!(v.failed(), o.is_some(), "seed {seed}: {v}");
        if v.failed() {
            fails += 1;
            let (s, t) = (word(&v.witness[0].value), word(&v.witness[1].value));
            let g = trim(&c.automaton);
            assert!(g.generates(&s) && s.project(&c.gamma).is_prefix_of(&t), "seed {seed}");
            let realized = marked
                .strings
                .iter()
                .any(|m| s.is_prefix_of(m) && m.project(&c.gamma) == t);
            assert!(!realized, "seed {seed}: witness is not a violation");
        }
    }
    assert!(fails > 10 && fails < SEEDS - 10, "{fails} failures");
}

#[test]
fn occ_matches_definition() {
    let mut fails = 0;
    for seed in 0..SEEDS {
        let c = check_instance(seed);
        let l = BoundedLanguage::generated(&c.automaton, CHECK_BOUND);
        let v = is_occ(&c.automaton, &c.gamma, &c.uncontrollable);
        let o = oracle_occ(&l, &c.gamma, &c.uncontrollable);
        assert_eq!(v.failed(), o.is_some(), "seed {seed}: {v}");
        if v.failed() {
            fails += 1;
            let s = word(&v.witness[0].value);
            let one = BoundedLanguage::new(l.alphabet.clone(), CHECK_BOUND, s.prefixes(), true);
            assert!(l.contains(&s));
            assert!(oracle_occ(&one, &c.gamma, &c.uncontrollable).is_some(), "seed {seed}");
        }
    }
    assert!(fails > 10 && fails < SEEDS - 10, "{fails} failures");
}

#[test]
fn lcc_matches_definition() {
    let mut fails = 0;
    for seed in 0..SEEDS {
        let c = check_instance(seed);
        let l = BoundedLanguage::generated(&c.automaton, CHECK_BOUND);
        let v = is_lcc(&c.automaton, &c.gamma, &c.uncontrollable);
        let o = oracle_lcc(&l, &c.gamma, &c.uncontrollable);
        assert_eq!(v.failed(), o.is_some(), "seed {seed}: {v}");
        if v.failed() {
            fails += 1;
        }
    }
    assert!(fails > 10 && fails < SEEDS - 10, "{fails} failures");
}

#[test]
fn moc_matches_definition() {
    let cfg = SystemConfig {
        modules: 2,
        events: 4,
        max_states: 3,
        acyclic: true,
        density: 0.5,
        p_observable: 0.5,
        ..SystemConfig::default()
    };
    let mut fails = 0;
    for seed in 0..SEEDS {
        let (plants, table) = Generator::new(seed).plants(&cfg);
        let m = ModularSystem::new(plants, &table).unwrap();
        let l = m.global_plant();
        let lang = BoundedLanguage::generated(&l, CHECK_BOUND);
        assert!(lang.complete);
        for i in 0..m.len() {
            let v = check_moc_bounded(&m, i, CHECK_BOUND);
            let o = oracle_moc(&lang, m.local_alphabet(i), &m.observable());
            assert_eq!(v.failed(), o.is_some(), "seed {seed} module {i}: {v}");
            if v.failed() {
                fails += 1;
            }
        }
    }
    assert!(fails > 5, "{fails} failures");
}
