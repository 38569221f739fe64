//! Project-driven runs: load a modular system, discharge the hypotheses of a
//! sufficient condition for maximal permissiveness, synthesize local
//! supervisors and optionally compare them with the monolithic supervisor.
//!
//! Routes, in the order they are tried:
//!
//! | kind | route | hypotheses |
//! |------|-------|------------|
//! | normal | `shared-observable` | `Σs ⊆ Σo`, `P_i(L) = L_i`, nonconflicting |
//! | normal | `moc` | `P_i(L) = L_i`, nonconflicting, bounded MOC |
//! | controllable-normal | `shared-controllable-observable` | `Σs ⊆ Σc ∩ Σo`, `P_i(L) = L_i`, nonconflicting |
//! | controllable-normal | `observer-lcc` | `Σs ⊆ Σo`, `P_i(L) = L_i`, nonconflicting, observer, LCC |
//! | controllable-normal | `observer-lcc-moc` | `P_i(L) = L_i`, nonconflicting, observer, LCC, bounded MOC |
//! | controllable | `shared-controllable` | `Σs ⊆ Σc`, `P_i(L) = L_i`, nonconflicting |
//! | controllable | `observer-lcc` | `P_i(L) = L_i`, nonconflicting, observer, LCC |
//!
//! In global-spec mode the same routes run on the localized modules, whose
//! shared events are exactly `Σκ`; the route names then start with
//! `coordinated-` instead of `shared-`. A route that rests on bounded MOC is
//! never reported as certified.

mod manifest;
mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use crate::automaton::Automaton;
use crate::checks::{
    check_moc_bounded, check_natural_projection_consistency, check_shared_controllable,
    check_shared_controllable_observable, check_shared_observable, default_moc_bound, is_lcc, is_observer, is_occ,
    repair_locals, CheckVerdict, Status, Witness,
};
use crate::coordination::{extend_kappa, is_conditionally_decomposable, localize, CoordinationPlan};
use crate::error::{Error, Result};
use crate::event::{fmt_alphabet, Alphabet, EventTable};
use crate::format::save_automaton;
use crate::ops::{coaccessible, language_equal, language_subset, minimize, parallel, trim};
use crate::synthesis::SynthesisProblem;
use crate::system::ModularSystem;

pub use manifest::{Mode, ProjectManifest, SynthesisKind};
pub use report::{emit_report, ArtifactCounts, Certification, ReportFormat, SynthesisReport};

/// Run settings that are not part of the modular system itself.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub synthesis: SynthesisKind,
    pub verify_monolithic: bool,
    pub repair_locals: bool,
    /// Check OCC instead of LCC.
    pub occ: bool,
    pub minimize: bool,
    pub moc_bound: Option<usize>,
    /// Global-spec mode only; computed when absent.
    pub kappa: Option<Alphabet>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            synthesis: SynthesisKind::Normal,
            verify_monolithic: false,
            repair_locals: false,
            occ: false,
            minimize: false,
            moc_bound: None,
            kappa: None,
        }
    }
}

impl RunOptions {
    pub fn from_manifest(m: &ProjectManifest) -> Self {
        RunOptions {
            synthesis: m.synthesis,
            verify_monolithic: m.verify_monolithic,
            repair_locals: m.repair_locals,
            occ: m.occ,
            minimize: m.minimize,
            moc_bound: m.moc_bound,
            kappa: m.kappa.clone(),
        }
    }
}

/// Everything a run produces.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: SynthesisReport,
    /// The modular system after any repair.
    pub system: ModularSystem,
    pub supervisors: Vec<Automaton>,
    pub monolithic: Option<Automaton>,
    pub plan: Option<CoordinationPlan>,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code()
    }

    /// Writes `supervisor_i.aut`, `monolithic.aut`, the plan directory,
    /// `report.txt` and `report.kv` into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let table = self.system.table();
        for (i, s) in self.supervisors.iter().enumerate() {
            save_automaton(s, table, dir.join(format!("supervisor_{}.aut", i + 1)))?;
        }
        if let Some(s) = &self.monolithic {
            save_automaton(s, table, dir.join("monolithic.aut"))?;
        }
        if let Some(p) = &self.plan {
            p.save(dir.join("plan"), table)?;
        }
        fs::write(dir.join("report.txt"), self.report.to_text())?;
        fs::write(dir.join("report.kv"), self.report.to_machine())?;
        Ok(())
    }
}

/// Loads the project and runs the pipeline for its mode.
pub fn run_project(manifest: &ProjectManifest) -> Result<RunOutput> {
    let started = Instant::now();
    let system = manifest.load_system()?;
    let load_time = started.elapsed().as_micros() as u64;
    let opts = RunOptions::from_manifest(manifest);
    let mut out = match manifest.mode {
        Mode::LocalSpecs => run_local_mode(&system, &opts)?,
        Mode::GlobalSpec => run_global_mode(&system, &opts)?,
    };
    out.report.timings.insert(0, ("load".into(), load_time));
    Ok(out)
}

/// `∥ locals = monolithic` on marked languages, then on generated ones. The
/// witness is a shortest string in exactly one side.
pub fn verify_equivalence(locals: &[Automaton], monolithic: &Automaton) -> CheckVerdict {
    let name = "equivalence";
    let composed = composition(locals, monolithic.alphabet());
    let cmp = language_equal(&composed, monolithic).expect("same alphabet");
    let (w, kind) = match (cmp.marked, cmp.generated) {
        (None, None) => return CheckVerdict::holds(name),
        (Some(w), _) => (w, "marked"),
        (None, Some(w)) => (w, "generated"),
    };
    let local_side = if kind == "marked" {
        composed.accepts(&w)
    } else {
        composed.generates(&w)
    };
    let side = if local_side {
        "local composition only"
    } else {
        "monolithic only"
    };
    CheckVerdict::fails(name, vec![Witness::word("s", &w)]).with_note(format!("{kind} language, {side}"))
}

/// `∥ locals ⊆ monolithic` on marked languages.
pub fn verify_inclusion(locals: &[Automaton], monolithic: &Automaton) -> CheckVerdict {
    let name = "inclusion";
    let composed = composition(locals, monolithic.alphabet());
    match language_subset(&composed, monolithic).expect("same alphabet").marked {
        None => CheckVerdict::holds(name),
        Some(w) => CheckVerdict::fails(name, vec![Witness::word("s", &w)]),
    }
}

/// Trimmed composition: blocking is reported by the nonconflict check, so
/// the comparisons here are between marked languages and their closures.
fn composition(locals: &[Automaton], alphabet: &Alphabet) -> Automaton {
    let composed = trim(&parallel(locals));
    if composed.alphabet() == alphabet {
        composed
    } else {
        crate::ops::lift(&composed, alphabet)
    }
}

/// Nonconflict of the local results, with a shortest string of
/// `∥ closure(S_i)` outside `closure(∥ S_i)` as witness.
fn check_nonconflicting(locals: &[Automaton]) -> CheckVerdict {
    let name = "nonconflicting";
    let trimmed: Vec<Automaton> = locals.iter().map(trim).collect();
    if trimmed.iter().any(|a| !a.has_marked_state()) {
        return CheckVerdict::holds(name).with_note("a local marked language is empty");
    }
    let composed = parallel(&trimmed);
    let co = coaccessible(&composed);
    let mut paths = vec![None; composed.state_count()];
    paths[0] = Some(crate::event::Word::empty());
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(q) = queue.pop_front() {
        let s = paths[q].clone().expect("visited");
        if !co[q] {
            return CheckVerdict::fails(name, vec![Witness::word("s", &s)]);
        }
        for (e, r) in composed.transitions(q) {
            if paths[r].is_none() {
                let mut s2 = s.clone();
                s2.push(e.clone());
                paths[r] = Some(s2);
                queue.push_back(r);
            }
        }
    }
    CheckVerdict::holds(name)
}

fn synthesize(p: &SynthesisProblem, kind: SynthesisKind) -> Automaton {
    match kind {
        SynthesisKind::Normal => p.sup_n(),
        SynthesisKind::Controllable => p.sup_c(),
        SynthesisKind::ControllableNormal => p.sup_cn(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Hypothesis {
    SharedObservable,
    SharedControllableObservable,
    SharedControllable,
    Consistency,
    Nonconflicting,
    Observer,
    LocalControl,
    Moc,
}

fn routes(kind: SynthesisKind) -> Vec<(&'static str, Vec<Hypothesis>)> {
    use Hypothesis::*;
    match kind {
        SynthesisKind::Normal => vec![
            ("shared-observable", vec![SharedObservable, Consistency, Nonconflicting]),
            ("moc", vec![Consistency, Nonconflicting, Moc]),
        ],
        SynthesisKind::ControllableNormal => vec![
            (
                "shared-controllable-observable",
                vec![SharedControllableObservable, Consistency, Nonconflicting],
            ),
            (
                "observer-lcc",
                vec![SharedObservable, Consistency, Nonconflicting, Observer, LocalControl],
            ),
            (
                "observer-lcc-moc",
                vec![Consistency, Nonconflicting, Observer, LocalControl, Moc],
            ),
        ],
        SynthesisKind::Controllable => vec![
            (
                "shared-controllable",
                vec![SharedControllable, Consistency, Nonconflicting],
            ),
            (
                "observer-lcc",
                vec![Consistency, Nonconflicting, Observer, LocalControl],
            ),
        ],
    }
}

/// Runs and caches the checks behind each hypothesis.
struct Auditor<'a> {
    m: &'a ModularSystem,
    supervisors: &'a [Automaton],
    opts: &'a RunOptions,
    plant: Automaton,
    checks: Vec<CheckVerdict>,
    results: BTreeMap<Hypothesis, Status>,
}

impl Auditor<'_> {
    fn status(&mut self, h: Hypothesis) -> Status {
        if let Some(s) = self.results.get(&h) {
            return *s;
        }
        let n = self.m.len();
        let verdicts: Vec<CheckVerdict> = match h {
            Hypothesis::SharedObservable => vec![check_shared_observable(self.m)],
            Hypothesis::SharedControllableObservable => vec![check_shared_controllable_observable(self.m)],
            Hypothesis::SharedControllable => vec![check_shared_controllable(self.m)],
            Hypothesis::Consistency => (0..n)
                .map(|i| check_natural_projection_consistency(self.m, i))
                .collect(),
            Hypothesis::Nonconflicting => vec![check_nonconflicting(self.supervisors)],
            Hypothesis::Observer => (0..n)
                .map(|i| is_observer(&self.plant, self.m.local_alphabet(i)).renamed(format!("observer[{}]", i + 1)))
                .collect(),
            Hypothesis::LocalControl => (0..n)
                .map(|i| {
                    let (gamma, unc) = (self.m.local_alphabet(i), self.m.uncontrollable());
                    if self.opts.occ {
                        is_occ(&self.plant, gamma, &unc).renamed(format!("occ[{}]", i + 1))
                    } else {
                        is_lcc(&self.plant, gamma, &unc).renamed(format!("lcc[{}]", i + 1))
                    }
                })
                .collect(),
            Hypothesis::Moc => {
                let bound = self.opts.moc_bound.unwrap_or_else(|| default_moc_bound(&self.plant));
                (0..n).map(|i| check_moc_bounded(self.m, i, bound)).collect()
            }
        };
        let status = if verdicts.iter().any(CheckVerdict::failed) {
            Status::Fails
        } else if let Some(b) = verdicts.iter().find_map(CheckVerdict::bound) {
            Status::HoldsUpToBound(b)
        } else {
            Status::Holds
        };
        self.checks.extend(verdicts);
        self.results.insert(h, status);
        status
    }

    /// Tries the routes in order and stops at the first one whose
    /// hypotheses all hold; within a route, stops at the first failure.
    fn certify(&mut self, kind: SynthesisKind, coordinated: bool) -> Certification {
        let rename = |r: &str| -> String {
            if !coordinated {
                r.to_string()
            } else if let Some(rest) = r.strip_prefix("shared-") {
                format!("coordinated-{rest}")
            } else {
                format!("coordinated-{r}")
            }
        };
        if self.m.len() == 1 {
            return Certification::Certified {
                route: rename("single-module"),
            };
        }
        let mut bounded = None;
        'routes: for (route, hyps) in routes(kind) {
            let mut bound = None;
            for h in hyps {
                match self.status(h) {
                    Status::Holds => {}
                    Status::HoldsUpToBound(b) => bound = Some(b),
                    Status::Fails | Status::NotRun => continue 'routes,
                }
            }
            match bound {
                None => return Certification::Certified { route: rename(route) },
                Some(b) => {
                    bounded.get_or_insert(Certification::UpToBound {
                        route: rename(route),
                        bound: b,
                    });
                }
            }
        }
        bounded.unwrap_or(Certification::NotCertified)
    }
}

fn elapsed_us(t: Instant) -> u64 {
    t.elapsed().as_micros() as u64
}

/// The shared part of both modes: `m` has local specifications.
fn run_modules(
    m: ModularSystem,
    opts: &RunOptions,
    monolithic_problem: Option<SynthesisProblem>,
    mut report: SynthesisReport,
    coordinated: bool,
) -> Result<(SynthesisReport, ModularSystem, Vec<Automaton>, Option<Automaton>)> {
    let t = Instant::now();
    let mut supervisors = Vec::with_capacity(m.len());
    for i in 0..m.len() {
        let sup = synthesize(&m.local_problem(i)?, opts.synthesis);
        let sup = if opts.minimize { minimize(&sup) } else { sup };
        supervisors.push(sup.with_name(format!("S{}", i + 1)));
    }
    report.timings.push(("local-synthesis".into(), elapsed_us(t)));

    let t = Instant::now();
    let mut auditor = Auditor {
        m: &m,
        supervisors: &supervisors,
        opts,
        plant: m.global_plant().mark_all(),
        checks: Vec::new(),
        results: BTreeMap::new(),
    };
    report.certification = auditor.certify(opts.synthesis, coordinated);
    report.checks.extend(auditor.checks);
    report.timings.push(("checks".into(), elapsed_us(t)));

    for (i, s) in supervisors.iter().enumerate() {
        report
            .artifacts
            .push(ArtifactCounts::of(format!("S{}", i + 1), "supervisor", s));
    }

    let mut monolithic = None;
    if opts.verify_monolithic {
        let t = Instant::now();
        let p = match monolithic_problem {
            Some(p) => p,
            None => m.global_problem()?,
        };
        let sup = synthesize(&p, opts.synthesis);
        let sup = if opts.minimize { minimize(&sup) } else { sup };
        let sup = sup.with_name("S");
        report.equivalence = Some(verify_equivalence(&supervisors, &sup));
        report.inclusion = Some(verify_inclusion(&supervisors, &sup));
        report.artifacts.push(ArtifactCounts::of("S", "monolithic", &sup));
        report.timings.push(("monolithic".into(), elapsed_us(t)));
        monolithic = Some(sup);
    }
    Ok((report, m, supervisors, monolithic))
}

/// Local specifications: one `K_i ⊆ L_i` per module.
pub fn run_local_mode(m: &ModularSystem, opts: &RunOptions) -> Result<RunOutput> {
    let specs = m
        .local_specs()
        .ok_or_else(|| Error::InvalidSystem("local-specs mode needs one specification per module".into()))?;
    let mut report = SynthesisReport::new(Mode::LocalSpecs.as_str(), opts.synthesis.as_str());
    for k in specs {
        report.artifacts.push(ArtifactCounts::of(k.name(), "spec", k));
    }
    for l in m.plants() {
        report.artifacts.push(ArtifactCounts::of(l.name(), "plant", l));
    }
    let system = if opts.repair_locals {
        let repaired = repair_locals(m)?;
        let changed = (0..m.len())
            .filter(|&i| check_natural_projection_consistency(m, i).failed())
            .count();
        report.notes.push(format!(
            "repair-locals: L_i replaced by P_i(L) ({changed} module(s) changed)"
        ));
        repaired
    } else {
        m.clone()
    };
    let (report, system, supervisors, monolithic) = run_modules(system, opts, None, report, false)?;
    Ok(RunOutput {
        report,
        system,
        supervisors,
        monolithic,
        plan: None,
    })
}

/// Global specification: choose `Σκ`, localize, then run the local routes
/// on the extended modules. The monolithic problem stays `(K, L)`.
pub fn run_global_mode(m: &ModularSystem, opts: &RunOptions) -> Result<RunOutput> {
    let k = m
        .global_spec()
        .ok_or_else(|| Error::InvalidSystem("global-spec mode needs a global specification".into()))?;
    let mut report = SynthesisReport::new(Mode::GlobalSpec.as_str(), opts.synthesis.as_str());
    report.artifacts.push(ArtifactCounts::of(k.name(), "spec", k));
    for l in m.plants() {
        report.artifacts.push(ArtifactCounts::of(l.name(), "plant", l));
    }

    let t = Instant::now();
    let alphabets = m.local_alphabets();
    let shared = m.shared_alphabet();
    let kappa = match &opts.kappa {
        Some(kappa) => {
            if !shared.is_subset(kappa) {
                return Err(Error::InvalidSystem(format!(
                    "kappa {} does not contain the shared events {}",
                    fmt_alphabet(kappa),
                    fmt_alphabet(&shared)
                )));
            }
            kappa.clone()
        }
        None => {
            let prefer = match opts.synthesis {
                SynthesisKind::Normal => m.observable(),
                SynthesisKind::Controllable => m.controllable(),
                SynthesisKind::ControllableNormal => m.observable().intersection(&m.controllable()).cloned().collect(),
            };
            let kappa = extend_kappa(k, &alphabets, &Alphabet::new(), &prefer);
            report.notes.push(format!("kappa computed: {}", fmt_alphabet(&kappa)));
            kappa
        }
    };
    report.kappa = Some(kappa.clone());
    let decomposable = is_conditionally_decomposable(k, &alphabets, &kappa);
    if decomposable.failed() {
        return Err(Error::InvalidSystem(format!(
            "specification is not conditionally decomposable for kappa {}: {}",
            fmt_alphabet(&kappa),
            decomposable.witness_text()
        )));
    }
    let plan = localize(m, &kappa)?;
    report.timings.push(("coordination".into(), elapsed_us(t)));
    report.checks.extend(plan.certificates.iter().cloned());
    report
        .artifacts
        .push(ArtifactCounts::of("Gk", "coordinator", &plan.coordinator));
    if !plan.certified() {
        report.notes.push("coordination plan certificates failed".into());
    }

    let local = plan.system(m.table())?;
    let monolithic_problem = if opts.verify_monolithic {
        Some(m.global_problem()?)
    } else {
        None
    };
    let (mut report, system, supervisors, monolithic) = run_modules(local, opts, monolithic_problem, report, true)?;
    if !plan.certified() {
        report.certification = Certification::NotCertified;
    }
    Ok(RunOutput {
        report,
        system,
        supervisors,
        monolithic,
        plan: Some(plan),
    })
}

/// Loads `report.kv` from a run directory.
pub fn load_report(dir: impl AsRef<Path>) -> Result<SynthesisReport> {
    let path = dir.as_ref().join("report.kv");
    let text = fs::read_to_string(&path).map_err(|e| Error::Load {
        path: path.display().to_string(),
        source: Box::new(e.into()),
    })?;
    SynthesisReport::parse_machine(&text)
}

/// Event attributes of a run, for writing artifacts.
pub fn table_of(out: &RunOutput) -> &EventTable {
    out.system.table()
}
