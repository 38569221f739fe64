//! Global specifications: coordinator alphabets, conditional
//! decomposability, coordinators and localized modules.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::automaton::Automaton;
use crate::checks::{CheckVerdict, Witness};
use crate::error::{Error, Result};
use crate::event::{fmt_alphabet, Alphabet, EventTable};
use crate::format::save_automaton;
use crate::ops::{language_equal, parallel, project_onto};
use crate::system::{shared_events, ModularSystem};

fn extended(alphabets: &[Alphabet], kappa: &Alphabet) -> Vec<Alphabet> {
    alphabets.iter().map(|a| a.union(kappa).cloned().collect()).collect()
}

/// `∥ P_{i+κ}(K)`.
fn recomposed(spec: &Automaton, alphabets: &[Alphabet], kappa: &Alphabet) -> Automaton {
    let parts: Vec<Automaton> = extended(alphabets, kappa)
        .iter()
        .map(|a| project_onto(spec, a))
        .collect();
    parallel(&parts)
}

/// `K = ∥ P_{i+κ}(K)` on marked languages. The witness is a shortest string
/// of the composition outside `K`.
pub fn is_conditionally_decomposable(spec: &Automaton, alphabets: &[Alphabet], kappa: &Alphabet) -> CheckVerdict {
    let name = "conditional-decomposability";
    let shared = shared_events(alphabets);
    if let Some(e) = shared.iter().find(|e| !kappa.contains(*e)) {
        return CheckVerdict::fails(name, vec![Witness::event("shared-event-outside-kappa", e)]);
    }
    let composed = recomposed(spec, alphabets, kappa);
    match language_equal(&composed, spec).expect("same alphabet").marked {
        None => CheckVerdict::holds(name),
        Some(w) => CheckVerdict::fails(name, vec![Witness::word("s", &w)]),
    }
}

/// Greedily grows `seed ∪ Σs` until `spec` is conditionally decomposable.
///
/// Each round adds one event outside `κ`: the first candidate whose addition
/// removes the current witness, or the first candidate if none does.
/// Candidates in `prefer` come first, then by name.
pub fn extend_kappa(spec: &Automaton, alphabets: &[Alphabet], seed: &Alphabet, prefer: &Alphabet) -> Alphabet {
    let sigma: Alphabet = alphabets.iter().flat_map(|a| a.iter().cloned()).collect();
    let mut kappa: Alphabet = seed.union(&shared_events(alphabets)).cloned().collect();
    loop {
        let composed = recomposed(spec, alphabets, &kappa);
        let Some(w) = language_equal(&composed, spec).expect("same alphabet").marked else {
            return kappa;
        };
        let mut candidates: Vec<_> = sigma.difference(&kappa).cloned().collect();
        candidates.sort_by_key(|e| (!prefer.contains(e), e.clone()));
        let first = candidates.first().expect("κ = Σ is always decomposable").clone();
        let pick = candidates
            .into_iter()
            .find(|e| {
                let mut k = kappa.clone();
                k.insert(e.clone());
                !recomposed(spec, alphabets, &k).accepts(&w)
            })
            .unwrap_or(first);
        kappa.insert(pick);
    }
}

/// `L_κ = ∥ P^i_{κ,i}(L_i)`, which equals `P_κ(L)` when `Σs ⊆ κ`.
pub fn build_coordinator(m: &ModularSystem, kappa: &Alphabet) -> Automaton {
    let parts: Vec<Automaton> = m
        .plants()
        .iter()
        .map(|l| {
            let target: Alphabet = l.alphabet().intersection(kappa).cloned().collect();
            project_onto(l, &target).mark_all()
        })
        .collect();
    let mut coordinator = parallel(&parts).with_name("Lk");
    let sigma = m.alphabet();
    let kappa: Alphabet = kappa.intersection(&sigma).cloned().collect();
    if coordinator.alphabet() != &kappa {
        coordinator = crate::ops::lift(&coordinator, &kappa).with_name("Lk");
    }
    debug_assert!(
        !m.shared_alphabet().is_subset(&kappa)
            || language_equal(&coordinator, &project_onto(&m.global_plant(), &kappa).mark_all())
                .expect("same alphabet")
                .holds(),
        "coordinator differs from the projected plant"
    );
    coordinator
}

/// A global specification split into extended modules `Σ_{i+κ} = Σ_i ∪ Σκ`.
#[derive(Clone, Debug)]
pub struct CoordinationPlan {
    pub kappa: Alphabet,
    pub local_alphabets: Vec<Alphabet>,
    pub coordinator: Automaton,
    /// `L_{i+κ} = L_i ∥ L_κ`.
    pub plants: Vec<Automaton>,
    /// `K_{i+κ} = P_{i+κ}(K)`.
    pub specs: Vec<Automaton>,
    /// Checked equalities that make the plan sound.
    pub certificates: Vec<CheckVerdict>,
}

impl CoordinationPlan {
    /// The localized modules as a modular system with local specifications.
    pub fn system(&self, table: &EventTable) -> Result<ModularSystem> {
        ModularSystem::new(self.plants.clone(), table)?
            .with_local_specs(self.specs.clone())?
            .with_kappa(self.kappa.clone())
    }

    pub fn certified(&self) -> bool {
        self.certificates.iter().all(CheckVerdict::certified)
    }

    /// Writes `coordinator.aut`, `plant_i.aut`, `spec_i.aut` and `plan.txt`.
    pub fn save(&self, dir: impl AsRef<Path>, table: &EventTable) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        save_automaton(&self.coordinator, table, dir.join("coordinator.aut"))?;
        for (i, (l, k)) in self.plants.iter().zip(&self.specs).enumerate() {
            save_automaton(l, table, dir.join(format!("plant_{}.aut", i + 1)))?;
            save_automaton(k, table, dir.join(format!("spec_{}.aut", i + 1)))?;
        }
        fs::write(dir.join("plan.txt"), self.summary())?;
        Ok(())
    }

    /// `kappa` line, one line per extended alphabet, one per certificate.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kappa = {}", fmt_alphabet(&self.kappa));
        for (i, a) in self.local_alphabets.iter().enumerate() {
            let _ = writeln!(out, "alphabet[{}] = {}", i + 1, fmt_alphabet(a));
        }
        for c in &self.certificates {
            let _ = writeln!(out, "{c}");
        }
        out
    }
}

fn equality(name: &str, a: &Automaton, b: &Automaton, marked: bool) -> CheckVerdict {
    let cmp = language_equal(a, b).expect("same alphabet");
    match if marked { cmp.marked } else { cmp.generated } {
        None => CheckVerdict::holds(name),
        Some(w) => CheckVerdict::fails(name, vec![Witness::word("s", &w)]),
    }
}

/// Builds the coordinator and the extended modules for the global
/// specification of `m`. Fails when `Σs ⊄ κ` or when the specification is not
/// conditionally decomposable.
pub fn localize(m: &ModularSystem, kappa: &Alphabet) -> Result<CoordinationPlan> {
    let k = m
        .global_spec()
        .ok_or_else(|| Error::InvalidSystem("localization needs a global specification".into()))?;
    let alphabets = m.local_alphabets();
    let decomposable = is_conditionally_decomposable(k, &alphabets, kappa);
    if !decomposable.certified() {
        return Err(Error::InvalidSystem(format!(
            "specification is not conditionally decomposable for kappa {}: {}",
            fmt_alphabet(kappa),
            decomposable.witness_text()
        )));
    }
    let coordinator = build_coordinator(m, kappa);
    let local_alphabets = extended(&alphabets, kappa);
    let plants: Vec<Automaton> = m
        .plants()
        .iter()
        .map(|l| parallel([l, &coordinator]).with_name(format!("{}+k", l.name())))
        .collect();
    let specs: Vec<Automaton> = local_alphabets
        .iter()
        .enumerate()
        .map(|(i, a)| project_onto(k, a).with_name(format!("K{}+k", i + 1)))
        .collect();

    let l = m.global_plant();
    let mut certificates = vec![
        decomposable,
        equality("coordinator", &coordinator, &project_onto(&l, kappa).mark_all(), false),
        equality("plants-recompose", &parallel(&plants), &l, false),
        equality("specs-recompose", &parallel(&specs), k, true),
    ];
    for (i, (p, a)) in plants.iter().zip(&local_alphabets).enumerate() {
        certificates.push(equality(
            &format!("plant-projection[{}]", i + 1),
            p,
            &project_onto(&l, a).mark_all(),
            false,
        ));
    }
    Ok(CoordinationPlan {
        kappa: kappa.clone(),
        local_alphabets,
        coordinator,
        plants,
        specs,
        certificates,
    })
}
