//! Structural conditions under which local synthesis equals monolithic
//! synthesis.

mod consistency;
mod control;
mod moc;
mod observer;

use std::fmt;

use crate::event::{fmt_alphabet, Alphabet, Event, EventTable, Word};
use crate::system::{shared_events, ModularSystem};

pub use consistency::{check_natural_projection_consistency, repair_locals};
pub use control::{is_lcc, is_occ};
pub use moc::{check_moc, check_moc_bounded, default_moc_bound, MOC_BOUND_CAP};
pub use observer::is_observer;

/// Outcome of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    /// Verified for all strings up to the bound only.
    HoldsUpToBound(usize),
    Fails,
    NotRun,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::HoldsUpToBound(_) => "holds-up-to-bound",
            Status::Fails => "fails",
            Status::NotRun => "not-run",
        }
    }
}

/// One labelled part of a counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub value: String,
}

impl Witness {
    pub fn word(label: &str, w: &Word) -> Self {
        Witness {
            label: label.to_string(),
            value: w.to_string(),
        }
    }

    pub fn event(label: &str, e: &Event) -> Self {
        Witness {
            label: label.to_string(),
            value: e.to_string(),
        }
    }

    pub fn text(label: &str, value: impl Into<String>) -> Self {
        Witness {
            label: label.to_string(),
            value: value.into(),
        }
    }
}

/// Result of a structural check. A witness is present exactly when the check
/// fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckVerdict {
    pub name: String,
    pub status: Status,
    pub witness: Vec<Witness>,
    pub note: Option<String>,
}

impl CheckVerdict {
    pub fn holds(name: impl Into<String>) -> Self {
        Self::with_status(name, Status::Holds)
    }

    pub fn holds_up_to(name: impl Into<String>, bound: usize) -> Self {
        Self::with_status(name, Status::HoldsUpToBound(bound))
    }

    pub fn fails(name: impl Into<String>, witness: Vec<Witness>) -> Self {
        assert!(!witness.is_empty(), "a failing verdict needs a witness");
        CheckVerdict {
            witness,
            ..Self::with_status(name, Status::Fails)
        }
    }

    pub fn not_run(name: impl Into<String>, note: impl Into<String>) -> Self {
        Self::with_status(name, Status::NotRun).with_note(note)
    }

    fn with_status(name: impl Into<String>, status: Status) -> Self {
        CheckVerdict {
            name: name.into(),
            status,
            witness: Vec::new(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Holds without qualification.
    pub fn certified(&self) -> bool {
        self.status == Status::Holds
    }

    /// Holds, possibly only up to a bound.
    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Holds | Status::HoldsUpToBound(_))
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn bound(&self) -> Option<usize> {
        match self.status {
            Status::HoldsUpToBound(b) => Some(b),
            _ => None,
        }
    }

    /// `a, b` style rendering of the witness.
    pub fn witness_text(&self) -> String {
        self.witness
            .iter()
            .map(|w| format!("{}={}", w.label, w.value))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for CheckVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.status.as_str())?;
        if let Some(b) = self.bound() {
            write!(f, " (bound {b})")?;
        }
        if !self.witness.is_empty() {
            write!(f, " [{}]", self.witness_text())?;
        }
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

/// `Σs = ⋃_{i≠j} Σi ∩ Σj`.
pub fn shared_alphabet(m: &ModularSystem) -> Alphabet {
    m.shared_alphabet()
}

fn check_subset(name: &str, shared: &Alphabet, allowed: &Alphabet) -> CheckVerdict {
    match shared.iter().find(|e| !allowed.contains(*e)) {
        None => CheckVerdict::holds(name),
        Some(e) => CheckVerdict::fails(name, vec![Witness::event("event", e)]),
    }
}

/// `Σs ⊆ Σo`.
pub fn check_shared_observable(m: &ModularSystem) -> CheckVerdict {
    check_subset("shared-observable", &m.shared_alphabet(), &m.observable())
}

/// `Σs ⊆ Σc ∩ Σo`.
pub fn check_shared_controllable_observable(m: &ModularSystem) -> CheckVerdict {
    let co: Alphabet = m.controllable().intersection(&m.observable()).cloned().collect();
    check_subset("shared-controllable-observable", &m.shared_alphabet(), &co)
}

/// `Σs ⊆ Σc`.
pub fn check_shared_controllable(m: &ModularSystem) -> CheckVerdict {
    check_subset("shared-controllable", &m.shared_alphabet(), &m.controllable())
}

/// Every event declared in several tables has the same observability flag
/// in all of them. Controllability conflicts are reported too, since a
/// single event table must hold both.
pub fn check_observability_agreement(tables: &[(String, EventTable)]) -> CheckVerdict {
    let name = "observability-agreement";
    let alphabets: Vec<Alphabet> = tables.iter().map(|(_, t)| t.events()).collect();
    for e in shared_events(&alphabets) {
        let owners: Vec<(&String, _)> = tables
            .iter()
            .filter_map(|(file, t)| t.get(&e).map(|a| (file, a)))
            .collect();
        let (first_file, first) = owners[0];
        if let Some((file, attrs)) = owners.iter().find(|(_, a)| *a != first) {
            let what = if attrs.observable != first.observable {
                "observability"
            } else {
                "controllability"
            };
            return CheckVerdict::fails(
                name,
                vec![
                    Witness::event("event", &e),
                    Witness::text(
                        "files",
                        format!("{first_file}:{} {file}:{}", first.code(), attrs.code()),
                    ),
                ],
            )
            .with_note(format!("{what} differs"));
        }
    }
    CheckVerdict::holds(name)
}

/// Merges per-file tables into one; conflicting attributes are an error.
pub fn merge_tables(tables: &[(String, EventTable)]) -> crate::Result<EventTable> {
    let mut merged = EventTable::new();
    for (file, t) in tables {
        merged.merge(t).map_err(|e| crate::Error::Load {
            path: file.clone(),
            source: Box::new(e),
        })?;
    }
    Ok(merged)
}

/// Renders an alphabet for notes.
pub(crate) fn alphabet_note(a: &Alphabet) -> String {
    fmt_alphabet(a)
}
