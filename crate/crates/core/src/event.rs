use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An event label. Cheap to clone; ordered by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event(Arc<str>);

impl Event {
    pub fn new(name: &str) -> Self {
        Event(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Event {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Event {
    fn from(s: &str) -> Self {
        Event::new(s)
    }
}

impl From<String> for Event {
    fn from(s: String) -> Self {
        Event(Arc::from(s))
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite set of events.
pub type Alphabet = BTreeSet<Event>;

/// Builds an alphabet from event names.
pub fn alphabet<I, S>(names: I) -> Alphabet
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    names.into_iter().map(|s| Event::new(s.as_ref())).collect()
}

/// Renders an alphabet as `{a,b,c}`.
pub fn fmt_alphabet(a: &Alphabet) -> String {
    let names: Vec<&str> = a.iter().map(Event::as_str).collect();
    format!("{{{}}}", names.join(","))
}

/// Event names are whitespace-free tokens that cannot start a comment.
pub(crate) fn valid_event_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(char::is_whitespace) && !name.contains('#') && name != "ε"
}

/// A finite string of events.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Event>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a space-separated list of events; `ε` or the empty string is the empty word.
    pub fn parse(s: &str) -> Self {
        Word(s.split_whitespace().filter(|t| *t != "ε").map(Event::new).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.0
    }

    pub fn push(&mut self, e: Event) {
        self.0.push(e);
    }

    /// Natural projection onto `target`.
    pub fn project(&self, target: &Alphabet) -> Word {
        Word(self.0.iter().filter(|e| target.contains(*e)).cloned().collect())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// All prefixes, shortest first, including the empty word and the word itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.0.len()).map(|n| Word(self.0[..n].to_vec()))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }
}

impl From<Vec<Event>> for Word {
    fn from(v: Vec<Event>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(e.as_str())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Control and observation status of one event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EventAttrs {
    pub controllable: bool,
    pub observable: bool,
}

impl EventAttrs {
    pub const fn new(controllable: bool, observable: bool) -> Self {
        EventAttrs {
            controllable,
            observable,
        }
    }

    /// Two-letter code used by the automaton text format (`co`, `cx`, `uo`, `ux`).
    pub fn code(&self) -> &'static str {
        match (self.controllable, self.observable) {
            (true, true) => "co",
            (true, false) => "cx",
            (false, true) => "uo",
            (false, false) => "ux",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        let mut chars = code.chars();
        let c = match chars.next()? {
            'c' => true,
            'u' => false,
            _ => return None,
        };
        let o = match chars.next()? {
            'o' => true,
            'x' => false,
            _ => return None,
        };
        if chars.next().is_some() {
            return None;
        }
        Some(EventAttrs::new(c, o))
    }
}

/// Global registry of events with their attributes.
///
/// Uncontrollable and unobservable sets are derived from the stored flags, so
/// the four sets are always consistent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventTable {
    attrs: BTreeMap<Event, EventAttrs>,
}

impl EventTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an event. Re-registering with identical attributes is a no-op;
    /// conflicting attributes are an error.
    pub fn insert(&mut self, event: Event, attrs: EventAttrs) -> Result<()> {
        if !valid_event_name(event.as_str()) {
            return Err(Error::InvalidName(event.to_string()));
        }
        match self.attrs.get(&event) {
            Some(prev) if *prev != attrs => Err(Error::AttributeConflict {
                event: event.to_string(),
                first: prev.code().to_string(),
                second: attrs.code().to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                self.attrs.insert(event, attrs);
                Ok(())
            }
        }
    }

    /// Convenience for tests and fixtures; panics on conflicts.
    pub fn with(mut self, name: &str, controllable: bool, observable: bool) -> Self {
        self.insert(Event::new(name), EventAttrs::new(controllable, observable))
            .expect("conflicting event attributes");
        self
    }

    pub fn merge(&mut self, other: &EventTable) -> Result<()> {
        for (e, a) in &other.attrs {
            self.insert(e.clone(), *a)?;
        }
        Ok(())
    }

    pub fn get(&self, event: &Event) -> Option<EventAttrs> {
        self.attrs.get(event).copied()
    }

    pub fn contains(&self, event: &Event) -> bool {
        self.attrs.contains_key(event)
    }

    pub fn len(&self) -> usize {
        self.attrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Event, &EventAttrs)> {
        self.attrs.iter()
    }

    pub fn events(&self) -> Alphabet {
        self.attrs.keys().cloned().collect()
    }

    fn select(&self, f: impl Fn(&EventAttrs) -> bool) -> Alphabet {
        self.attrs
            .iter()
            .filter(|(_, a)| f(a))
            .map(|(e, _)| e.clone())
            .collect()
    }

    pub fn controllable(&self) -> Alphabet {
        self.select(|a| a.controllable)
    }

    pub fn uncontrollable(&self) -> Alphabet {
        self.select(|a| !a.controllable)
    }

    pub fn observable(&self) -> Alphabet {
        self.select(|a| a.observable)
    }

    pub fn unobservable(&self) -> Alphabet {
        self.select(|a| !a.observable)
    }

    /// The sub-table over `events` (events missing from `self` are skipped).
    pub fn restrict(&self, events: &Alphabet) -> EventTable {
        EventTable {
            attrs: self
                .attrs
                .iter()
                .filter(|(e, _)| events.contains(*e))
                .map(|(e, a)| (e.clone(), *a))
                .collect(),
        }
    }

    /// Overrides attributes unconditionally.
    pub fn set(&mut self, event: Event, attrs: EventAttrs) {
        self.attrs.insert(event, attrs);
    }
}
