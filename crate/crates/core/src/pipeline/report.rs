use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::automaton::Automaton;
use crate::checks::{CheckVerdict, Status, Witness};
use crate::error::{Error, Result};
use crate::event::{Alphabet, Event};

/// Size of one input or output automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtifactCounts {
    pub label: String,
    pub role: String,
    pub states: usize,
    pub transitions: usize,
    pub events: usize,
}

impl ArtifactCounts {
    pub fn of(label: impl Into<String>, role: &str, a: &Automaton) -> Self {
        ArtifactCounts {
            label: label.into(),
            role: role.to_string(),
            states: a.state_count(),
            transitions: a.transition_count(),
            events: a.alphabet().len(),
        }
    }
}

/// Whether local synthesis was shown to be maximally permissive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Every hypothesis of `route` holds.
    Certified {
        route: String,
    },
    /// As above, except MOC, which holds only up to `bound`.
    UpToBound {
        route: String,
        bound: usize,
    },
    NotCertified,
}

impl Certification {
    pub fn route(&self) -> Option<&str> {
        match self {
            Certification::Certified { route } | Certification::UpToBound { route, .. } => Some(route),
            Certification::NotCertified => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified { .. })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Certification::Certified { .. } => "certified",
            Certification::UpToBound { .. } => "certified-up-to-bound",
            Certification::NotCertified => "not-certified",
        }
    }
}

/// Outcome of a pipeline run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisReport {
    pub mode: String,
    pub synthesis: String,
    pub kappa: Option<Alphabet>,
    pub artifacts: Vec<ArtifactCounts>,
    pub checks: Vec<CheckVerdict>,
    pub certification: Certification,
    pub equivalence: Option<CheckVerdict>,
    pub inclusion: Option<CheckVerdict>,
    pub notes: Vec<String>,
    /// Wall-clock time per stage in microseconds.
    pub timings: Vec<(String, u64)>,
}

impl SynthesisReport {
    pub fn new(mode: &str, synthesis: &str) -> Self {
        SynthesisReport {
            mode: mode.to_string(),
            synthesis: synthesis.to_string(),
            kappa: None,
            artifacts: Vec::new(),
            checks: Vec::new(),
            certification: Certification::NotCertified,
            equivalence: None,
            inclusion: None,
            notes: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckVerdict> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// 0 certified, 1 not certified, 2 equivalence refuted.
    pub fn exit_code(&self) -> i32 {
        if self.equivalence.as_ref().is_some_and(CheckVerdict::failed) {
            2
        } else if self.certification.is_certified() {
            0
        } else {
            1
        }
    }

    /// Human-readable form: a States/Trans./Events table, then checks and
    /// verdicts. Timings come last, one per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = writeln!(out, "synthesis: {}", self.synthesis);
        if let Some(k) = &self.kappa {
            let _ = writeln!(out, "kappa: {}", crate::event::fmt_alphabet(k));
        }
        if !self.artifacts.is_empty() {
            out.push('\n');
            out.push_str(&self.table());
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\nchecks:");
            for c in &self.checks {
                let _ = writeln!(out, "  {c}");
            }
        }
        out.push('\n');
        let _ = match &self.certification {
            Certification::Certified { route } => writeln!(out, "maximal permissiveness: certified by {route}"),
            Certification::UpToBound { route, bound } => writeln!(
                out,
                "maximal permissiveness: not certified; {route} holds with MOC checked up to length {bound}"
            ),
            Certification::NotCertified => writeln!(out, "maximal permissiveness: not certified"),
        };
        for v in [&self.equivalence, &self.inclusion].into_iter().flatten() {
            let _ = writeln!(out, "{v}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if !self.timings.is_empty() {
            out.push('\n');
            for (stage, us) in &self.timings {
                let _ = writeln!(out, "time {stage}: {:.3} ms", *us as f64 / 1000.0);
            }
        }
        out
    }

    fn table(&self) -> String {
        let rows: [(&str, fn(&ArtifactCounts) -> usize); 3] = [
            ("States", |a| a.states),
            ("Trans.", |a| a.transitions),
            ("Events", |a| a.events),
        ];
        let cells: Vec<Vec<String>> = self
            .artifacts
            .iter()
            .map(|a| {
                let mut col = vec![a.label.clone()];
                col.extend(rows.iter().map(|(_, f)| f(a).to_string()));
                col
            })
            .collect();
        let widths: Vec<usize> = cells
            .iter()
            .map(|c| c.iter().map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        let head_width = 6;
        for r in 0..4 {
            let head = if r == 0 { "" } else { rows[r - 1].0 };
            let mut line = format!("{head:<head_width$}");
            for (col, w) in cells.iter().zip(&widths) {
                let _ = write!(line, "  {:>w$}", col[r], w = *w);
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out
    }

    /// `key=value` lines; [`SynthesisReport::parse_machine`] reads them back.
    pub fn to_machine(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &str| {
            debug_assert!(!v.contains('\n'));
            let _ = writeln!(out, "{k}={v}");
        };
        kv("mode", &self.mode);
        kv("synthesis", &self.synthesis);
        if let Some(k) = &self.kappa {
            kv("kappa", &k.iter().map(Event::as_str).collect::<Vec<_>>().join(" "));
        }
        for (i, a) in self.artifacts.iter().enumerate() {
            let p = format!("artifact.{}", i + 1);
            kv(&format!("{p}.label"), &a.label);
            kv(&format!("{p}.role"), &a.role);
            kv(&format!("{p}.states"), &a.states.to_string());
            kv(&format!("{p}.transitions"), &a.transitions.to_string());
            kv(&format!("{p}.events"), &a.events.to_string());
        }
        let mut verdict = |p: &str, v: &CheckVerdict| {
            kv(&format!("{p}.name"), &v.name);
            kv(&format!("{p}.status"), v.status.as_str());
            if let Some(b) = v.bound() {
                kv(&format!("{p}.bound"), &b.to_string());
            }
            for (j, w) in v.witness.iter().enumerate() {
                kv(&format!("{p}.witness.{}.label", j + 1), &w.label);
                kv(&format!("{p}.witness.{}.value", j + 1), &w.value);
            }
            if let Some(n) = &v.note {
                kv(&format!("{p}.note"), n);
            }
        };
        for (i, c) in self.checks.iter().enumerate() {
            verdict(&format!("check.{}", i + 1), c);
        }
        if let Some(v) = &self.equivalence {
            verdict("equivalence", v);
        }
        if let Some(v) = &self.inclusion {
            verdict("inclusion", v);
        }
        kv("certification", self.certification.as_str());
        match &self.certification {
            Certification::Certified { route } => kv("route", route),
            Certification::UpToBound { route, bound } => {
                kv("route", route);
                kv("route.bound", &bound.to_string());
            }
            Certification::NotCertified => {}
        }
        for (i, n) in self.notes.iter().enumerate() {
            kv(&format!("note.{}", i + 1), n);
        }
        for (stage, us) in &self.timings {
            kv(&format!("time.{stage}"), &us.to_string());
        }
        out
    }

    /// Parses the output of [`SynthesisReport::to_machine`].
    pub fn parse_machine(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Manifest(format!("report: {msg}"));
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        let mut timings = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key=value", i + 1)))?;
            if let Some(stage) = k.strip_prefix("time.") {
                let us = v.parse().map_err(|_| bad(format!("line {}: bad timing", i + 1)))?;
                timings.push((stage.to_string(), us));
            } else if map.insert(k.to_string(), v.to_string()).is_some() {
                return Err(bad(format!("line {}: duplicate key `{k}`", i + 1)));
            }
        }
        let get = |k: &str| map.get(k).cloned().ok_or_else(|| bad(format!("missing `{k}`")));
        let num = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| bad(format!("`{k}` is not a number"))) };

        let mut r = SynthesisReport::new(&get("mode")?, &get("synthesis")?);
        r.kappa = map.get("kappa").map(|k| k.split_whitespace().map(Event::new).collect());
        for i in 1.. {
            let p = format!("artifact.{i}");
            if !map.contains_key(&format!("{p}.label")) {
                break;
            }
            r.artifacts.push(ArtifactCounts {
                label: get(&format!("{p}.label"))?,
                role: get(&format!("{p}.role"))?,
                states: num(&format!("{p}.states"))?,
                transitions: num(&format!("{p}.transitions"))?,
                events: num(&format!("{p}.events"))?,
            });
        }
        let verdict = |p: &str| -> Result<Option<CheckVerdict>> {
            let Some(name) = map.get(&format!("{p}.name")) else {
                return Ok(None);
            };
            let status = match get(&format!("{p}.status"))?.as_str() {
                "holds" => Status::Holds,
                "holds-up-to-bound" => Status::HoldsUpToBound(num(&format!("{p}.bound"))?),
                "fails" => Status::Fails,
                "not-run" => Status::NotRun,
                s => return Err(bad(format!("unknown status `{s}`"))),
            };
            let mut witness = Vec::new();
            for j in 1.. {
                let Some(label) = map.get(&format!("{p}.witness.{j}.label")) else {
                    break;
                };
                witness.push(Witness::text(label, get(&format!("{p}.witness.{j}.value"))?));
            }
            Ok(Some(CheckVerdict {
                name: name.clone(),
                status,
                witness,
                note: map.get(&format!("{p}.note")).cloned(),
            }))
        };
        for i in 1.. {
            match verdict(&format!("check.{i}"))? {
                Some(v) => r.checks.push(v),
                None => break,
            }
        }
        r.equivalence = verdict("equivalence")?;
        r.inclusion = verdict("inclusion")?;
        r.certification = match get("certification")?.as_str() {
            "certified" => Certification::Certified { route: get("route")? },
            "certified-up-to-bound" => Certification::UpToBound {
                route: get("route")?,
                bound: num("route.bound")?,
            },
            "not-certified" => Certification::NotCertified,
            s => return Err(bad(format!("unknown certification `{s}`"))),
        };
        for i in 1.. {
            match map.get(&format!("note.{i}")) {
                Some(n) => r.notes.push(n.clone()),
                None => break,
            }
        }
        r.timings = timings;
        Ok(r)
    }
}

/// Output format of [`emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Machine,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "text" => Some(ReportFormat::Text),
            "machine" => Some(ReportFormat::Machine),
            _ => None,
        }
    }
}

/// Serializes a report.
pub fn emit_report(r: &SynthesisReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Text => r.to_text().into_bytes(),
        ReportFormat::Machine => r.to_machine().into_bytes(),
    }
}
