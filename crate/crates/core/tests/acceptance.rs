//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{check_instance, CHECK_BOUND};
use modsup_core::checks::{check_moc_bounded, is_lcc, is_observer, is_occ, repair_locals};
use modsup_core::coordination::{extend_kappa, localize};
use modsup_core::fixtures::{data_dir, railroad_global, railroad_local, three_module};
use modsup_core::ops::{is_nonconflicting, language_equal, language_subset, parallel, project_onto, trim};
use modsup_core::oracle::{
    oracle_lcc, oracle_moc, oracle_nonconflicting, oracle_observer, oracle_occ, oracle_sup_c, oracle_sup_cn,
    oracle_sup_n, BoundedLanguage,
};
use modsup_core::pipeline::{
    run_global_mode, run_local_mode, run_project, Certification, ProjectManifest, RunOptions, SynthesisKind,
    SynthesisReport,
};
use modsup_core::random::{event_names, Generator, SharedEvents, SystemConfig};
use modsup_core::{alphabet, Alphabet, Automaton, EventAttrs, ModularSystem, SynthesisProblem, Word};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn equal(a: &Automaton, b: &Automaton) -> bool {
    language_equal(a, b).expect("same alphabet").holds()
}

fn within(started: Instant, limit: Duration, detail: String) -> Outcome {
    let took = started.elapsed();
    ensure!(took < limit, "took {took:.2?}, limit {limit:?}; {detail}");
    Ok(format!("{detail}; {took:.2?}"))
}

fn normal(kind: SynthesisKind, repair: bool) -> RunOptions {
    RunOptions {
        synthesis: kind,
        verify_monolithic: true,
        repair_locals: repair,
        ..RunOptions::default()
    }
}

fn random_config(seed: u64, shared: SharedEvents, prefix_closed: bool) -> SystemConfig {
    SystemConfig {
        modules: 2 + (seed % 2) as usize,
        events: 4,
        max_states: 4,
        acyclic: false,
        density: 0.3,
        p_controllable: 0.6,
        p_observable: 0.5,
        shared,
        prefix_closed_specs: prefix_closed,
    }
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let m = three_module();
    let obs = m.observable();
    ensure!(obs == alphabet(["c"]), "observable events {obs:?}");
    let local: Vec<Automaton> = (0..3).map(|i| m.local_problem(i).unwrap().sup_n()).collect();
    ensure!(!local[0].has_marked_state(), "supN(K1) is not empty");
    let closed =
        |n: &str, s: &[&str], w: &str| Automaton::from_word(n, alphabet(s.iter().copied()), &Word::parse(w), true);
    ensure!(
        equal(&local[1], &closed("u2", &["u2", "c", "u"], "u2")),
        "supN(K2) != closure{{u2}}"
    );
    ensure!(
        equal(&local[2], &closed("u3", &["u3", "c"], "u3")),
        "supN(K3) != closure{{u3}}"
    );
    let k = m.global_spec_automaton().unwrap();
    let global = m.global_problem().unwrap().sup_n();
    ensure!(equal(&global, &k), "global supN != K1 || K2 || K3");
    let p1 = project_onto(&global, m.local_alphabet(0));
    ensure!(p1.accepts(&Word::parse("u1")), "u1 not in P1(global supN)");
    let out = run_local_mode(&m, &normal(SynthesisKind::Normal, false)).map_err(|e| e.to_string())?;
    let eq = out.report.equivalence.clone().unwrap();
    ensure!(eq.failed(), "equivalence not refuted");
    ensure!(out.exit_code() == 2, "exit code {}", out.exit_code());
    within(
        started,
        Duration::from_secs(1),
        format!("equivalence FALSE [{}]", eq.witness_text()),
    )
}

fn criterion_2() -> Outcome {
    let started = Instant::now();
    let (mut strict, mut nonempty) = (0, 0);
    for seed in 0..200 {
        let m = Generator::new(seed).local_system(&random_config(seed, SharedEvents::Unconstrained, true));
        let l = m.global_plant();
        let locals: Vec<Automaton> = (0..m.len()).map(|i| m.local_problem(i).unwrap().sup_n()).collect();
        let composed = parallel(&locals);
        let p = SynthesisProblem::with_table(trim(&composed), l, m.table()).unwrap();
        ensure!(
            p.is_normal(),
            "seed {seed}: composition not normal, witness {:?}",
            p.normality_witness()
        );
        let global = m.global_problem().unwrap().sup_n();
        let sub = language_subset(&trim(&composed), &global).unwrap();
        ensure!(sub.holds(), "seed {seed}: composition not inside global supN: {sub:?}");
        if !equal(&trim(&composed), &global) {
            strict += 1;
        }
        if composed.has_marked_state() {
            nonempty += 1;
        }
    }
    within(
        started,
        Duration::from_secs(60),
        format!("200/200; {strict} strict inclusions, {nonempty} nonempty"),
    )
}

/// Suite 3 systems: shared events observable, locals repaired.
fn suite_three(seed: u64) -> ModularSystem {
    let m = Generator::new(seed).local_system(&random_config(seed, SharedEvents::Observable, seed.is_multiple_of(2)));
    repair_locals(&m).unwrap()
}

fn criterion_3() -> Outcome {
    let started = Instant::now();
    let (mut certified, mut conflicting, mut nontrivial) = (0, 0, 0);
    for seed in 0..200 {
        let m = suite_three(seed);
        let out = run_local_mode(&m, &normal(SynthesisKind::Normal, false)).map_err(|e| e.to_string())?;
        let r = &out.report;
        if r.check("nonconflicting").is_some_and(|v| v.failed()) {
            conflicting += 1;
            let eq = r.equivalence.as_ref().unwrap();
            ensure!(eq.certified(), "seed {seed} (conflicting): {eq}");
            certified += 1;
            continue;
        }
        ensure!(
            r.certification
                == Certification::Certified {
                    route: "shared-observable".into()
                },
            "seed {seed}: {:?}",
            r.certification
        );
        let eq = r.equivalence.as_ref().unwrap();
        ensure!(eq.certified(), "seed {seed}: {eq}");
        certified += 1;
        let k = m.global_spec_automaton().unwrap();
        if !equal(out.monolithic.as_ref().unwrap(), &k) && out.monolithic.as_ref().unwrap().has_marked_state() {
            nontrivial += 1;
        }
    }
    ensure!(certified == 200, "{certified}/200");
    within(
        started,
        Duration::from_secs(120),
        format!("{certified}/200 equal on marked languages ({conflicting} with blocking composition, {nontrivial} strict nonempty)"),
    )
}

fn criterion_4() -> Outcome {
    let started = Instant::now();
    let mut checked = 0;
    for seed in 0..200 {
        let m = suite_three(seed);
        for i in 0..m.len() {
            let v = check_moc_bounded(&m, i, 6);
            ensure!(v.passed(), "seed {seed} module {i}: {v}");
            checked += 1;
        }
    }
    let mut coordinated = 0;
    let mut equal_runs = 0;
    for seed in 0..100 {
        let cfg = SystemConfig {
            modules: 2,
            ..random_config(seed, SharedEvents::Observable, true)
        };
        let m = Generator::new(1000 + seed).global_system(&cfg);
        let k = m.global_spec().unwrap();
        let kappa = extend_kappa(k, &m.local_alphabets(), &Alphabet::new(), &m.observable());
        let mut table = m.table().clone();
        for e in &kappa {
            let attrs = table.get(e).unwrap();
            table.set(e.clone(), EventAttrs::new(attrs.controllable, true));
        }
        let m = ModularSystem::new(m.plants().to_vec(), &table)
            .and_then(|s| s.with_global_spec(k.clone()))
            .unwrap();
        let plan = localize(&m, &kappa).map_err(|e| e.to_string())?;
        ensure!(plan.certified(), "seed {seed}: plan\n{}", plan.summary());
        let local = plan.system(m.table()).unwrap();
        for i in 0..local.len() {
            let v = check_moc_bounded(&local, i, 6);
            ensure!(v.passed(), "seed {seed} extended module {i}: {v}");
            coordinated += 1;
        }
        let opts = RunOptions {
            kappa: Some(kappa),
            ..normal(SynthesisKind::Normal, false)
        };
        let out = run_global_mode(&m, &opts).map_err(|e| e.to_string())?;
        ensure!(
            out.report.certification.is_certified(),
            "seed {seed}: {:?}",
            out.report.certification
        );
        ensure!(
            out.report.equivalence.as_ref().unwrap().certified(),
            "seed {seed}: {}",
            out.report.to_text()
        );
        equal_runs += 1;
    }
    within(
        started,
        Duration::from_secs(120),
        format!("{checked} module checks, {coordinated} extended-module checks, 0 counterexamples; {equal_runs} coordinated runs equal"),
    )
}

fn criterion_5() -> Outcome {
    const BOUND: usize = 5;
    let started = Instant::now();
    let mut strict = 0;
    for seed in 0..300 {
        let mut g = Generator::new(seed);
        let sigma = event_names(2 + (seed % 3) as usize);
        let mut plant = g.automaton("L", &sigma, 4, true, 0.6, true);
        while plant.state_count() < 3 {
            plant = g.automaton("L", &sigma, 4, true, 0.6, true);
        }
        let spec = g.sublanguage(&plant, "K", seed.is_multiple_of(2));
        let table = g.table(&sigma, 0.75, 0.75);
        let p = SynthesisProblem::with_table(spec, plant, &table).unwrap();
        let k = BoundedLanguage::marked(p.spec(), BOUND);
        let l = BoundedLanguage::generated(p.plant(), BOUND);
        ensure!(
            k.complete && l.complete,
            "seed {seed}: instance not exact at bound {BOUND}"
        );
        let marked = |a: &Automaton| BoundedLanguage::marked(a, BOUND).strings;
        let n = marked(&p.sup_n());
        ensure!(n == oracle_sup_n(&k, &l, p.observable()).strings, "seed {seed}: sup_n");
        ensure!(
            marked(&p.sup_c()) == oracle_sup_c(&k, &l, p.uncontrollable()).strings,
            "seed {seed}: sup_c"
        );
        let cn = marked(&p.sup_cn());
        ensure!(
            cn == oracle_sup_cn(&k, &l, p.uncontrollable(), p.observable()).strings,
            "seed {seed}: sup_cn"
        );
        if !cn.is_empty() && cn != k.strings {
            strict += 1;
        }
    }
    let mut conflicts = 0;
    for seed in 0..300 {
        let mut g = Generator::new(5000 + seed);
        let alphabets = g.alphabets(2, 3);
        let parts: Vec<Automaton> = alphabets
            .iter()
            .enumerate()
            .map(|(i, a)| g.automaton(&format!("A{i}"), a, 3, true, 0.6, false))
            .collect();
        let langs: Vec<BoundedLanguage> = parts.iter().map(|a| BoundedLanguage::marked(a, BOUND)).collect();
        let o = oracle_nonconflicting(&langs, BOUND);
        ensure!(o.exact, "seed {seed}: nonconflict oracle not exact");
        ensure!(is_nonconflicting(&parts) == o.holds, "seed {seed}: nonconflict");
        if !o.holds {
            conflicts += 1;
        }
    }
    let mut moc_failures = 0;
    let moc_cfg = SystemConfig {
        modules: 2,
        events: 4,
        max_states: 3,
        acyclic: true,
        density: 0.5,
        p_observable: 0.5,
        ..SystemConfig::default()
    };
    for seed in 0..300 {
        let (plants, table) = Generator::new(9000 + seed).plants(&moc_cfg);
        let m = ModularSystem::new(plants, &table).unwrap();
        let lang = BoundedLanguage::generated(&m.global_plant(), BOUND);
        ensure!(lang.complete, "seed {seed}: MOC instance not exact");
        for i in 0..m.len() {
            let v = check_moc_bounded(&m, i, BOUND);
            let o = oracle_moc(&lang, m.local_alphabet(i), &m.observable());
            ensure!(v.failed() == o.is_some(), "seed {seed} module {i}: {v} vs {o:?}");
            if v.failed() {
                moc_failures += 1;
            }
        }
    }
    within(
        started,
        Duration::from_secs(120),
        format!("3x300 agree; {strict} strict supCN, {conflicts} conflicting pairs, {moc_failures} MOC failures"),
    )
}

fn criterion_6() -> Outcome {
    let started = Instant::now();
    let (mut certified, mut conflicting) = (0, 0);
    for seed in 0..100 {
        let cfg = random_config(seed, SharedEvents::ControllableObservable, seed.is_multiple_of(2));
        let m = Generator::new(2000 + seed).local_system(&cfg);
        let out = run_local_mode(&m, &normal(SynthesisKind::ControllableNormal, true)).map_err(|e| e.to_string())?;
        let r = &out.report;
        if r.check("nonconflicting").is_some_and(|v| v.failed()) {
            conflicting += 1;
            let eq = r.equivalence.as_ref().unwrap();
            ensure!(eq.certified(), "seed {seed} (conflicting): {eq}");
            certified += 1;
            continue;
        }
        ensure!(
            r.certification.route() == Some("shared-controllable-observable") && r.certification.is_certified(),
            "seed {seed}: {:?}",
            r.certification
        );
        let eq = r.equivalence.as_ref().unwrap();
        ensure!(eq.certified(), "seed {seed}: {eq}");
        certified += 1;
    }
    ensure!(certified == 100, "{certified}/100");
    within(
        started,
        Duration::from_secs(120),
        format!("{certified}/100 equal on marked languages ({conflicting} with blocking composition)"),
    )
}

fn criterion_7() -> Outcome {
    let started = Instant::now();
    let mut fails = [0; 3];
    for seed in 0..200 {
        let c = check_instance(seed);
        let marked = BoundedLanguage::marked(&c.automaton, CHECK_BOUND);
        let generated = BoundedLanguage::generated(&c.automaton, CHECK_BOUND);
        ensure!(marked.complete && generated.complete, "seed {seed}: instance not exact");
        let verdicts = [
            (
                is_observer(&c.automaton, &c.gamma).failed(),
                oracle_observer(&marked, &c.gamma).is_some(),
            ),
            (
                is_occ(&c.automaton, &c.gamma, &c.uncontrollable).failed(),
                oracle_occ(&generated, &c.gamma, &c.uncontrollable).is_some(),
            ),
            (
                is_lcc(&c.automaton, &c.gamma, &c.uncontrollable).failed(),
                oracle_lcc(&generated, &c.gamma, &c.uncontrollable).is_some(),
            ),
        ];
        for (k, (exact, brute)) in verdicts.into_iter().enumerate() {
            ensure!(exact == brute, "seed {seed}: check {k} disagrees ({exact} vs {brute})");
            fails[k] += exact as usize;
        }
    }
    within(
        started,
        Duration::from_secs(60),
        format!(
            "3x200 agree; failures observer {}, occ {}, lcc {}",
            fails[0], fails[1], fails[2]
        ),
    )
}

fn criterion_8() -> Outcome {
    let started = Instant::now();
    let m = railroad_local();
    for i in 0..2 {
        let sup = m.local_problem(i).unwrap().sup_n();
        ensure!(
            equal(&sup, &m.local_specs().unwrap()[i]),
            "supN(K{}) != K{}",
            i + 1,
            i + 1
        );
    }
    let k = m.global_spec_automaton().unwrap();
    ensure!(
        equal(&m.global_problem().unwrap().sup_n(), &k),
        "supN(K1 || K2) != K1 || K2"
    );
    let out = run_local_mode(&m, &normal(SynthesisKind::Normal, false)).map_err(|e| e.to_string())?;
    ensure!(
        out.report.certification.is_certified(),
        "local mode {:?}",
        out.report.certification
    );
    ensure!(
        out.report.equivalence.as_ref().unwrap().certified(),
        "local mode equivalence"
    );
    let g = railroad_global();
    let opts = RunOptions {
        kappa: Some(alphabet(["w_w", "w_e"])),
        ..normal(SynthesisKind::Normal, false)
    };
    let out = run_global_mode(&g, &opts).map_err(|e| e.to_string())?;
    let route = out.report.certification.clone();
    ensure!(
        route
            == Certification::Certified {
                route: "coordinated-observable".into()
            },
        "global mode {route:?}"
    );
    ensure!(
        out.report.equivalence.as_ref().unwrap().certified(),
        "global mode equivalence"
    );
    within(
        started,
        Duration::from_secs(5),
        "Ki, K1||K2 and global mode with kappa {w_e,w_w} certified".into(),
    )
}

fn strip_timings(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with("time ") && !l.starts_with("time."))
        .collect::<Vec<_>>()
        .join("\n")
}

fn criterion_9() -> Outcome {
    let started = Instant::now();
    let manifest = ProjectManifest::load(data_dir().join("railroad-global.project")).map_err(|e| e.to_string())?;
    let a = run_project(&manifest).map_err(|e| e.to_string())?.report;
    let b = run_project(&manifest).map_err(|e| e.to_string())?.report;
    ensure!(
        strip_timings(&a.to_text()) == strip_timings(&b.to_text()),
        "text reports differ"
    );
    ensure!(
        strip_timings(&a.to_machine()) == strip_timings(&b.to_machine()),
        "machine reports differ"
    );
    ensure!(
        SynthesisReport::parse_machine(&a.to_machine()).unwrap() == a,
        "machine report does not parse back"
    );
    let text = a.to_text();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| ["States", "Trans.", "Events"].iter().any(|h| l.starts_with(h)))
        .collect();
    ensure!(rows.len() == 3, "table rows: {rows:?}");
    let header = text.lines().find(|l| l.contains("S1")).unwrap_or("");
    for label in ["K", "G_w", "G_e", "Gk", "S1", "S2", "S"] {
        ensure!(
            header.split_whitespace().any(|c| c == label),
            "column {label} missing in `{header}`"
        );
    }
    within(
        started,
        Duration::from_secs(5),
        "tables of published experiments not reproducible (external models); layout and determinism checked".into(),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("three-module counterexample goldens", criterion_1),
        (
            "local supN composition normal and inside global supN (200)",
            criterion_2,
        ),
        ("shared events observable: local equals global supN (200)", criterion_3),
        ("bounded MOC holds on suite 3 and coordinated systems", criterion_4),
        ("oracle agreement at bound 5 (300)", criterion_5),
        (
            "shared events controllable and observable: supCN equality (100)",
            criterion_6,
        ),
        ("observer / OCC / LCC exactness (200 each)", criterion_7),
        ("railroad reconstruction", criterion_8),
        ("report layout and determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
