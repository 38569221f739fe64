use std::collections::BTreeSet;

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::event::{fmt_alphabet, Alphabet, EventTable};
use crate::ops::{language_subset, parallel};
use crate::synthesis::SynthesisProblem;

/// How the specification of a modular system is given.
#[derive(Clone, Debug)]
pub enum Specification {
    /// One specification per module, over that module's alphabet.
    Local(Vec<Automaton>),
    /// One specification over the union alphabet.
    Global(Automaton),
}

/// Plant modules `L_i` over alphabets `Σ_i`, an optional specification, the
/// shared event table, and an optional coordinator alphabet `Σκ`.
#[derive(Clone, Debug)]
pub struct ModularSystem {
    plants: Vec<Automaton>,
    spec: Option<Specification>,
    table: EventTable,
    kappa: Option<Alphabet>,
}

impl ModularSystem {
    /// Every plant event must have attributes in `table`; the table is
    /// restricted to the plant events.
    pub fn new(plants: Vec<Automaton>, table: &EventTable) -> Result<Self> {
        if plants.is_empty() {
            return Err(Error::InvalidSystem("no plant modules".into()));
        }
        let sigma: Alphabet = plants.iter().flat_map(|p| p.alphabet().iter().cloned()).collect();
        if let Some(e) = sigma.iter().find(|e| !table.contains(e)) {
            return Err(Error::InvalidSystem(format!("event `{e}` has no attributes")));
        }
        Ok(ModularSystem {
            plants,
            spec: None,
            table: table.restrict(&sigma),
            kappa: None,
        })
    }

    /// Attaches per-module specifications; `Lm(K_i) ⊆ L(L_i)` is checked.
    pub fn with_local_specs(mut self, specs: Vec<Automaton>) -> Result<Self> {
        if specs.len() != self.plants.len() {
            return Err(Error::InvalidSystem(format!(
                "{} specifications for {} modules",
                specs.len(),
                self.plants.len()
            )));
        }
        for (i, (k, l)) in specs.iter().zip(&self.plants).enumerate() {
            if k.alphabet() != l.alphabet() {
                return Err(Error::InvalidSystem(format!(
                    "specification {} is over {} but plant {} is over {}",
                    i + 1,
                    fmt_alphabet(k.alphabet()),
                    i + 1,
                    fmt_alphabet(l.alphabet())
                )));
            }
            sublanguage_check(k, l)?;
        }
        self.spec = Some(Specification::Local(specs));
        Ok(self)
    }

    /// Attaches a global specification over the union alphabet;
    /// `Lm(K) ⊆ L(∥ L_i)` is checked.
    pub fn with_global_spec(mut self, spec: Automaton) -> Result<Self> {
        if spec.alphabet() != &self.alphabet() {
            return Err(Error::InvalidSystem(format!(
                "global specification is over {} but the plants are over {}",
                fmt_alphabet(spec.alphabet()),
                fmt_alphabet(&self.alphabet())
            )));
        }
        sublanguage_check(&spec, &self.global_plant())?;
        self.spec = Some(Specification::Global(spec));
        Ok(self)
    }

    /// Sets `Σκ`; it must be a subset of the union alphabet.
    pub fn with_kappa(mut self, kappa: Alphabet) -> Result<Self> {
        if !kappa.is_subset(&self.alphabet()) {
            return Err(Error::InvalidSystem(format!(
                "kappa {} contains events outside the plants",
                fmt_alphabet(&kappa)
            )));
        }
        self.kappa = Some(kappa);
        Ok(self)
    }

    /// Replaces the plants, keeping specification and table. Used by the
    /// `L_i := P_i(L)` repair.
    pub(crate) fn replace_plants(&mut self, plants: Vec<Automaton>) {
        debug_assert_eq!(plants.len(), self.plants.len());
        self.plants = plants;
    }

    pub(crate) fn replace_local_specs(&mut self, specs: Vec<Automaton>) {
        self.spec = Some(Specification::Local(specs));
    }

    pub fn len(&self) -> usize {
        self.plants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plants.is_empty()
    }

    pub fn plants(&self) -> &[Automaton] {
        &self.plants
    }

    pub fn plant(&self, i: usize) -> &Automaton {
        &self.plants[i]
    }

    pub fn specification(&self) -> Option<&Specification> {
        self.spec.as_ref()
    }

    pub fn local_specs(&self) -> Option<&[Automaton]> {
        match &self.spec {
            Some(Specification::Local(specs)) => Some(specs),
            _ => None,
        }
    }

    pub fn global_spec(&self) -> Option<&Automaton> {
        match &self.spec {
            Some(Specification::Global(k)) => Some(k),
            _ => None,
        }
    }

    pub fn table(&self) -> &EventTable {
        &self.table
    }

    pub fn kappa(&self) -> Option<&Alphabet> {
        self.kappa.as_ref()
    }

    /// `Σ`, the union of module alphabets.
    pub fn alphabet(&self) -> Alphabet {
        self.plants.iter().flat_map(|p| p.alphabet().iter().cloned()).collect()
    }

    pub fn local_alphabet(&self, i: usize) -> &Alphabet {
        self.plants[i].alphabet()
    }

    pub fn local_alphabets(&self) -> Vec<Alphabet> {
        self.plants.iter().map(|p| p.alphabet().clone()).collect()
    }

    /// `Σs`: events in at least two module alphabets.
    pub fn shared_alphabet(&self) -> Alphabet {
        shared_events(&self.local_alphabets())
    }

    pub fn observable(&self) -> Alphabet {
        self.table.observable()
    }

    pub fn controllable(&self) -> Alphabet {
        self.table.controllable()
    }

    pub fn uncontrollable(&self) -> Alphabet {
        self.table.uncontrollable()
    }

    /// `L = ∥ L_i`.
    pub fn global_plant(&self) -> Automaton {
        parallel(&self.plants).with_name("L")
    }

    /// `K`: the global specification, or the composition of local ones.
    pub fn global_spec_automaton(&self) -> Option<Automaton> {
        match &self.spec {
            Some(Specification::Local(specs)) => Some(parallel(specs).with_name("K")),
            Some(Specification::Global(k)) => Some(k.clone()),
            None => None,
        }
    }

    /// `(K_i, L_i, Σ_i,uc, P^i_{i,o})` for a local-spec system.
    pub fn local_problem(&self, i: usize) -> Result<SynthesisProblem> {
        let specs = self
            .local_specs()
            .ok_or_else(|| Error::InvalidSystem("system has no local specifications".into()))?;
        SynthesisProblem::with_table(specs[i].clone(), self.plants[i].clone(), &self.table)
    }

    /// `(K, L, Σuc, P)`.
    pub fn global_problem(&self) -> Result<SynthesisProblem> {
        let k = self
            .global_spec_automaton()
            .ok_or_else(|| Error::InvalidSystem("system has no specification".into()))?;
        SynthesisProblem::with_table(k, self.global_plant(), &self.table)
    }
}

fn sublanguage_check(k: &Automaton, l: &Automaton) -> Result<()> {
    match language_subset(k, &l.mark_all())?.marked {
        None => Ok(()),
        Some(w) => Err(Error::NotSublanguage { witness: w.to_string() }),
    }
}

/// Events occurring in at least two of `alphabets`.
pub fn shared_events(alphabets: &[Alphabet]) -> Alphabet {
    let mut seen = BTreeSet::new();
    let mut shared = BTreeSet::new();
    for a in alphabets {
        for e in a {
            if !seen.insert(e.clone()) {
                shared.insert(e.clone());
            }
        }
    }
    shared
}
