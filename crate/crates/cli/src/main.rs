use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use modsup_core::checks::{
    check_moc_bounded, check_natural_projection_consistency, check_observability_agreement, check_shared_controllable,
    check_shared_controllable_observable, check_shared_observable, default_moc_bound, is_lcc, is_observer, is_occ,
    merge_tables, CheckVerdict,
};
use modsup_core::coordination::{extend_kappa, is_conditionally_decomposable};
use modsup_core::format::load_automaton;
use modsup_core::oracle::{oracle_moc, oracle_sup_c, oracle_sup_cn, oracle_sup_n, BoundedLanguage};
use modsup_core::pipeline::{load_report, run_project, ProjectManifest, SynthesisKind};
use modsup_core::{Alphabet, Automaton, Event, EventTable, ModularSystem, SynthesisProblem};

const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "modsup",
    version,
    about = "Modular supervisor synthesis under partial observation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the synthesis pipeline on a project file.
    Synth(SynthArgs),
    /// Run one structural check.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Compare a synthesis result or check with its brute-force oracle.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Print the report stored in a run directory.
    Report {
        run_dir: PathBuf,
        /// Print the key=value form instead of the table.
        #[arg(long)]
        machine: bool,
    },
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    project: PathBuf,
    /// Override the synthesis kind: normal, controllable or controllable-normal.
    #[arg(long, value_parser = parse_kind)]
    synthesis: Option<SynthesisKind>,
    /// Minimize emitted supervisors before counting.
    #[arg(long)]
    minimize: bool,
    /// Also compute the monolithic supervisor and compare.
    #[arg(long)]
    verify_monolithic: bool,
    /// Check OCC instead of LCC.
    #[arg(long)]
    occ: bool,
    /// Replace each plant by the projection of the global plant.
    #[arg(long)]
    replace_locals: bool,
    /// Intersect specifications with their plants instead of rejecting them.
    #[arg(long)]
    intersect_spec: bool,
    /// Pin the coordinator alphabet (comma separated, may be empty).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    kappa: Option<Vec<String>>,
    #[arg(long)]
    moc_bound: Option<usize>,
    /// Write supervisors and reports into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the key=value report instead of the table.
    #[arg(long)]
    machine: bool,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Bounded modified observation consistency for each module.
    Moc {
        #[command(flatten)]
        plants: Plants,
        /// Module number, starting at 1. All modules when absent.
        #[arg(long)]
        module: Option<usize>,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Observer property of the projection onto Γ.
    Observer(GammaArgs),
    /// Output control consistency.
    Occ(GammaArgs),
    /// Local control consistency.
    Lcc(GammaArgs),
    /// Conditional decomposability of a global specification.
    Condec {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        plants: Plants,
        /// Coordinator alphabet (comma separated). Computed when absent.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        kappa: Option<Vec<String>>,
    },
    /// Shared-event conditions and projection consistency.
    Shared {
        #[command(flatten)]
        plants: Plants,
    },
}

#[derive(Args)]
struct Plants {
    /// Plant automaton file; repeat for each module.
    #[arg(long = "plant", required = true)]
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct GammaArgs {
    #[arg(long)]
    automaton: PathBuf,
    /// Target alphabet of the projection (comma separated).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    gamma: Vec<String>,
}

#[derive(Subcommand)]
enum OracleCommand {
    Supn(SupArgs),
    Supc(SupArgs),
    Supcn(SupArgs),
    Moc {
        #[command(flatten)]
        plants: Plants,
        #[arg(long)]
        module: Option<usize>,
        #[arg(long, default_value_t = 5)]
        bound: usize,
    },
}

#[derive(Args)]
struct SupArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    plant: PathBuf,
    #[arg(long, default_value_t = 5)]
    bound: usize,
    #[arg(long)]
    intersect_spec: bool,
}

fn parse_kind(s: &str) -> std::result::Result<SynthesisKind, String> {
    SynthesisKind::parse(s).ok_or_else(|| format!("unknown synthesis kind `{s}`"))
}

fn events(names: &[String]) -> Alphabet {
    names.iter().filter(|n| !n.is_empty()).map(|n| Event::new(n)).collect()
}

fn load(path: &Path) -> Result<(Automaton, EventTable)> {
    Ok(load_automaton(path)?)
}

/// Loads several files and merges their event tables after the
/// observability agreement audit.
fn load_all(paths: &[PathBuf]) -> Result<(Vec<Automaton>, EventTable)> {
    let mut automata = Vec::new();
    let mut tables = Vec::new();
    for p in paths {
        let (a, t) = load(p)?;
        automata.push(a);
        tables.push((p.display().to_string(), t));
    }
    let agreement = check_observability_agreement(&tables);
    if agreement.failed() {
        bail!("{agreement}");
    }
    Ok((automata, merge_tables(&tables)?))
}

fn load_system(plants: &Plants) -> Result<ModularSystem> {
    let (automata, table) = load_all(&plants.files)?;
    Ok(ModularSystem::new(automata, &table)?)
}

fn modules(m: &ModularSystem, module: Option<usize>) -> Result<Vec<usize>> {
    match module {
        None => Ok((0..m.len()).collect()),
        Some(k) if (1..=m.len()).contains(&k) => Ok(vec![k - 1]),
        Some(k) => bail!("module {k} out of range 1..={}", m.len()),
    }
}

/// Prints verdicts; exit 1 if any fails.
fn verdicts(vs: &[CheckVerdict]) -> u8 {
    for v in vs {
        println!("{v}");
    }
    u8::from(vs.iter().any(|v| v.failed()))
}

fn synth(args: SynthArgs) -> Result<u8> {
    let mut manifest = ProjectManifest::load(&args.project)?;
    if let Some(kind) = args.synthesis {
        manifest.synthesis = kind;
    }
    manifest.minimize |= args.minimize;
    manifest.verify_monolithic |= args.verify_monolithic;
    manifest.occ |= args.occ;
    manifest.repair_locals |= args.replace_locals;
    manifest.intersect_spec |= args.intersect_spec;
    if let Some(k) = &args.kappa {
        manifest.kappa = Some(events(k));
    }
    if args.moc_bound.is_some() {
        manifest.moc_bound = args.moc_bound;
    }
    let out = run_project(&manifest)?;
    if let Some(dir) = &args.out {
        out.save(dir).with_context(|| format!("writing {}", dir.display()))?;
    }
    if args.machine {
        print!("{}", out.report.to_machine());
    } else {
        print!("{}", out.report.to_text());
    }
    Ok(out.exit_code() as u8)
}

fn check(cmd: CheckCommand) -> Result<u8> {
    match cmd {
        CheckCommand::Moc { plants, module, bound } => {
            let m = load_system(&plants)?;
            let bound = bound.unwrap_or_else(|| default_moc_bound(&m.global_plant()));
            let vs: Vec<_> = modules(&m, module)?
                .into_iter()
                .map(|i| check_moc_bounded(&m, i, bound))
                .collect();
            Ok(verdicts(&vs))
        }
        CheckCommand::Observer(g) => {
            let (a, _) = load(&g.automaton)?;
            Ok(verdicts(&[is_observer(&a, &gamma(&a, &g.gamma)?)]))
        }
        CheckCommand::Occ(g) => {
            let (a, t) = load(&g.automaton)?;
            Ok(verdicts(&[is_occ(&a, &gamma(&a, &g.gamma)?, &t.uncontrollable())]))
        }
        CheckCommand::Lcc(g) => {
            let (a, t) = load(&g.automaton)?;
            Ok(verdicts(&[is_lcc(&a, &gamma(&a, &g.gamma)?, &t.uncontrollable())]))
        }
        CheckCommand::Condec { spec, plants, kappa } => {
            let m = load_system(&plants)?;
            let (k, _) = load(&spec)?;
            if !k.alphabet().is_subset(&m.alphabet()) {
                bail!("specification `{}` uses events outside the plants", k.name());
            }
            let alphabets = m.local_alphabets();
            let kappa = match kappa {
                Some(names) => events(&names),
                None => {
                    let kappa = extend_kappa(&k, &alphabets, &Alphabet::new(), &m.observable());
                    println!("kappa = {}", modsup_core::event::fmt_alphabet(&kappa));
                    kappa
                }
            };
            Ok(verdicts(&[is_conditionally_decomposable(&k, &alphabets, &kappa)]))
        }
        CheckCommand::Shared { plants } => {
            let m = load_system(&plants)?;
            let mut vs = vec![
                check_shared_observable(&m),
                check_shared_controllable(&m),
                check_shared_controllable_observable(&m),
            ];
            vs.extend((0..m.len()).map(|i| check_natural_projection_consistency(&m, i)));
            // Shared-event conditions are alternatives; only consistency fails the command.
            for v in &vs {
                println!("{v}");
            }
            Ok(u8::from(vs[3..].iter().any(|v| v.failed())))
        }
    }
}

fn gamma(a: &Automaton, names: &[String]) -> Result<Alphabet> {
    let g = events(names);
    if let Some(e) = g.iter().find(|e| !a.alphabet().contains(*e)) {
        bail!("event `{e}` is not in the alphabet of `{}`", a.name());
    }
    Ok(g)
}

fn print_side(label: &str, lang: &BoundedLanguage) {
    println!("{label} ({} strings, length <= {}):", lang.len(), lang.bound);
    print!("{}", lang.render());
}

fn oracle(cmd: OracleCommand) -> Result<u8> {
    let (args, kind) = match cmd {
        OracleCommand::Supn(a) => (a, SynthesisKind::Normal),
        OracleCommand::Supc(a) => (a, SynthesisKind::Controllable),
        OracleCommand::Supcn(a) => (a, SynthesisKind::ControllableNormal),
        OracleCommand::Moc { plants, module, bound } => {
            let m = load_system(&plants)?;
            let lang = BoundedLanguage::generated(&m.global_plant(), bound);
            let mut differ = false;
            for i in modules(&m, module)? {
                let v = check_moc_bounded(&m, i, bound);
                let o = oracle_moc(&lang, m.local_alphabet(i), &m.observable());
                println!("automaton: {v}");
                match &o {
                    Some(c) => println!("oracle: moc[{}]: fails [s={}, t'={}]", i + 1, c.s, c.t),
                    None => println!("oracle: moc[{}]: holds up to {bound}", i + 1),
                }
                differ |= v.failed() != o.is_some();
            }
            if !lang.complete {
                println!(
                    "note: the plant language exceeds the bound; oracle counterexamples may be truncation artifacts"
                );
            }
            println!("{}", if differ { "differ" } else { "agree" });
            return Ok(u8::from(differ));
        }
    };
    let (spec, st) = load(&args.spec)?;
    let (plant, pt) = load(&args.plant)?;
    let tables = [
        (args.spec.display().to_string(), st),
        (args.plant.display().to_string(), pt),
    ];
    let table = merge_tables(&tables)?;
    let unc = table.uncontrollable();
    let obs = table.observable();
    let p = if args.intersect_spec {
        SynthesisProblem::intersecting(spec, plant, &unc, &obs)?
    } else {
        SynthesisProblem::new(spec, plant, &unc, &obs)?
    };
    let k = BoundedLanguage::marked(p.spec(), args.bound);
    let l = BoundedLanguage::generated(p.plant(), args.bound);
    let (computed, expected) = match kind {
        SynthesisKind::Normal => (p.sup_n(), oracle_sup_n(&k, &l, p.observable())),
        SynthesisKind::Controllable => (p.sup_c(), oracle_sup_c(&k, &l, p.uncontrollable())),
        SynthesisKind::ControllableNormal => (p.sup_cn(), oracle_sup_cn(&k, &l, p.uncontrollable(), p.observable())),
    };
    let computed = BoundedLanguage::marked(&computed, args.bound);
    print_side("automaton", &computed);
    print_side("oracle", &expected);
    if !(k.complete && l.complete) {
        println!("note: languages exceed the bound; the oracle is an under-approximation");
    }
    let agree = computed.strings == expected.strings;
    println!("{}", if agree { "agree" } else { "differ" });
    Ok(u8::from(!agree))
}

fn report(dir: &Path, machine: bool) -> Result<u8> {
    let r = load_report(dir)?;
    if machine {
        print!("{}", r.to_machine());
    } else {
        print!("{}", r.to_text());
    }
    Ok(r.exit_code() as u8)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Synth(args) => synth(args),
        Command::Check(cmd) => check(cmd),
        Command::Oracle(cmd) => oracle(cmd),
        Command::Report { run_dir, machine } => report(&run_dir, machine),
    }
}

/// The error chain, skipping causes already spelled out by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if !out.ends_with(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(INPUT_ERROR);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(INPUT_ERROR)
        }
    }
}
