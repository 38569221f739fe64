//! Plain-text automaton files.
//!
//! ```text
//! # comment
//! AUTOMATON <name>
//! EVENTS
//! <event> <c|u><o|x>
//! STATES
//! <state> [initial] [marked]
//! TRANSITIONS
//! <src> <event> <dst>
//! END
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::automaton::{Automaton, AutomatonBuilder};
use crate::error::{Error, Result};
use crate::event::{Alphabet, Event, EventAttrs, EventTable};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Header,
    Events,
    States,
    Transitions,
    End,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses an automaton file, returning the automaton and the attributes of
/// its events.
pub fn parse_automaton(text: &str) -> Result<(Automaton, EventTable)> {
    let mut section = Section::Header;
    let mut name = None;
    let mut table = EventTable::new();
    let mut states: Vec<(usize, String, bool, bool)> = Vec::new();
    let mut transitions: Vec<(usize, String, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let next = match line {
            "EVENTS" => Some(Section::Events),
            "STATES" => Some(Section::States),
            "TRANSITIONS" => Some(Section::Transitions),
            "END" => Some(Section::End),
            _ => None,
        };
        if let Some(next) = next {
            if name.is_none() {
                return Err(parse_err(n, "expected `AUTOMATON <name>` first"));
            }
            if next <= section {
                return Err(parse_err(n, format!("unexpected section `{line}`")));
            }
            section = next;
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Header => {
                let rest = line
                    .strip_prefix("AUTOMATON")
                    .filter(|r| r.starts_with(char::is_whitespace))
                    .map(str::trim)
                    .filter(|r| !r.is_empty())
                    .ok_or_else(|| parse_err(n, "expected `AUTOMATON <name>`"))?;
                if name.is_some() {
                    return Err(parse_err(n, "duplicate AUTOMATON line"));
                }
                name = Some(rest.to_string());
            }
            Section::Events => {
                let [event, code] = tokens[..] else {
                    return Err(parse_err(n, "expected `<event> <c|u><o|x>`"));
                };
                let attrs =
                    EventAttrs::from_code(code).ok_or_else(|| parse_err(n, format!("bad attribute code `{code}`")))?;
                let e = Event::new(event);
                if table.contains(&e) {
                    return Err(parse_err(n, format!("event `{event}` declared twice")));
                }
                table.insert(e, attrs).map_err(|err| parse_err(n, err.to_string()))?;
            }
            Section::States => {
                let (state, flags) = tokens.split_first().expect("nonempty line");
                let (mut initial, mut marked) = (false, false);
                for &flag in flags {
                    match flag {
                        "initial" if !initial => initial = true,
                        "marked" if !marked => marked = true,
                        _ => return Err(parse_err(n, format!("unexpected state flag `{flag}`"))),
                    }
                }
                if states.iter().any(|(_, s, _, _)| s == state) {
                    return Err(parse_err(n, format!("state `{state}` declared twice")));
                }
                states.push((n, state.to_string(), initial, marked));
            }
            Section::Transitions => {
                let [src, event, dst] = tokens[..] else {
                    return Err(parse_err(n, "expected `<src> <event> <dst>`"));
                };
                transitions.push((n, src.to_string(), event.to_string(), dst.to_string()));
            }
            Section::End => return Err(parse_err(n, "content after END")),
        }
    }
    if section != Section::End {
        return Err(parse_err(text.lines().count(), "missing END"));
    }
    let name = name.expect("checked at first section");

    let initials: Vec<_> = states.iter().filter(|s| s.2).collect();
    let init = match initials[..] {
        [one] => one.1.clone(),
        [] => return Err(parse_err(0, "no initial state")),
        [_, second, ..] => return Err(parse_err(second.0, "more than one initial state")),
    };
    let alphabet: Alphabet = table.events();
    let mut b = AutomatonBuilder::new(name, alphabet.clone());
    for (n, state, _, marked) in &states {
        if !crate::event::valid_event_name(state) {
            return Err(parse_err(*n, format!("invalid state name `{state}`")));
        }
        b.state(state);
        if *marked {
            b.marked(state);
        }
    }
    b.initial(&init);
    let mut seen = HashSet::new();
    for (n, src, event, dst) in &transitions {
        for s in [src, dst] {
            if !b.contains_state(s) {
                return Err(parse_err(*n, format!("undeclared state `{s}`")));
            }
        }
        if !alphabet.contains(event.as_str()) {
            return Err(parse_err(*n, format!("undeclared event `{event}`")));
        }
        if !seen.insert((src.clone(), event.clone())) {
            return Err(parse_err(*n, format!("duplicate transition from `{src}` on `{event}`")));
        }
        b.transition(src, event, dst)
            .map_err(|err| parse_err(*n, err.to_string()))?;
    }
    Ok((b.build()?, table))
}

/// Reads and parses an automaton file; errors carry the path.
pub fn load_automaton(path: impl AsRef<Path>) -> Result<(Automaton, EventTable)> {
    let path = path.as_ref();
    let wrap = |e: Error| Error::Load {
        path: path.display().to_string(),
        source: Box::new(e),
    };
    let text = std::fs::read_to_string(path).map_err(|e| wrap(e.into()))?;
    parse_automaton(&text).map_err(wrap)
}

/// Serializes `a` with attributes taken from `table`. Every event of `a` must
/// appear in `table`. Output is deterministic: events sorted, states in id
/// order, transitions by source then event.
///
/// Duplicate state names, which composition can produce when component names
/// contain dots, get a `'k` suffix so the file reads back unambiguously.
pub fn write_automaton(a: &Automaton, table: &EventTable) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "AUTOMATON {}", a.name()).unwrap();
    out.push_str("EVENTS\n");
    for e in a.alphabet() {
        let attrs = table
            .get(e)
            .ok_or_else(|| Error::InvalidAutomaton(format!("no attributes for event `{e}`")))?;
        writeln!(out, "{e} {}", attrs.code()).unwrap();
    }
    let names = unique_names(a);
    out.push_str("STATES\n");
    for q in a.states() {
        out.push_str(&names[q]);
        if q == a.initial() {
            out.push_str(" initial");
        }
        if a.is_marked(q) {
            out.push_str(" marked");
        }
        out.push('\n');
    }
    out.push_str("TRANSITIONS\n");
    for q in a.states() {
        for (e, r) in a.transitions(q) {
            writeln!(out, "{} {e} {}", names[q], names[r]).unwrap();
        }
    }
    out.push_str("END\n");
    Ok(out)
}

fn unique_names(a: &Automaton) -> Vec<String> {
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for q in a.states() {
        *count.entry(a.state_name(q)).or_default() += 1;
    }
    let taken: HashSet<&str> = count.keys().copied().collect();
    let mut used: HashSet<String> = HashSet::new();
    a.states()
        .map(|q| {
            let base = a.state_name(q);
            if count[base] == 1 {
                return base.to_string();
            }
            let mut k = 0;
            loop {
                let candidate = if k == 0 {
                    base.to_string()
                } else {
                    format!("{base}'{k}")
                };
                if (k == 0 || !taken.contains(candidate.as_str())) && used.insert(candidate.clone()) {
                    return candidate;
                }
                k += 1;
            }
        })
        .collect()
}

/// Writes `a` to `path`.
pub fn save_automaton(a: &Automaton, table: &EventTable, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_automaton(a, table)?)?;
    Ok(())
}
