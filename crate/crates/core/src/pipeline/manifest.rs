use std::fs;
use std::path::{Path, PathBuf};

use crate::automaton::Automaton;
use crate::checks::{check_observability_agreement, merge_tables};
use crate::error::{Error, Result};
use crate::event::{fmt_alphabet, valid_event_name, Alphabet, Event, EventTable};
use crate::format::load_automaton;
use crate::ops::parallel;
use crate::system::ModularSystem;

/// Whether specifications are given per module or globally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    LocalSpecs,
    GlobalSpec,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::LocalSpecs => "local-specs",
            Mode::GlobalSpec => "global-spec",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "local-specs" => Some(Mode::LocalSpecs),
            "global-spec" => Some(Mode::GlobalSpec),
            _ => None,
        }
    }
}

/// Which supremal sublanguage is synthesized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SynthesisKind {
    Normal,
    Controllable,
    ControllableNormal,
}

impl SynthesisKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SynthesisKind::Normal => "normal",
            SynthesisKind::Controllable => "controllable",
            SynthesisKind::ControllableNormal => "controllable-normal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "normal" => Some(SynthesisKind::Normal),
            "controllable" => Some(SynthesisKind::Controllable),
            "controllable-normal" => Some(SynthesisKind::ControllableNormal),
            _ => None,
        }
    }
}

/// A project file: flat `key = value` lines, `#` comments, repeated keys
/// for lists. Relative paths are resolved against the manifest directory.
///
/// ```text
/// mode = local-specs
/// plant = L1.aut
/// plant = L2.aut
/// spec = K1.aut
/// spec = K2.aut
/// synthesis = normal
/// verify-monolithic = true
/// ```
///
/// Other keys: `kappa` (one event per line; `kappa =` alone pins the empty
/// set), `moc-bound`, `repair-locals`, `intersect-spec`, `occ`, `minimize`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectManifest {
    pub mode: Mode,
    pub plants: Vec<PathBuf>,
    pub specs: Vec<PathBuf>,
    pub kappa: Option<Alphabet>,
    pub synthesis: SynthesisKind,
    pub moc_bound: Option<usize>,
    pub verify_monolithic: bool,
    pub repair_locals: bool,
    pub intersect_spec: bool,
    pub occ: bool,
    pub minimize: bool,
}

fn manifest_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Manifest(format!("line {line}: {msg}"))
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(manifest_err(
            line,
            format!("`{key}` expects true or false, got `{value}`"),
        )),
    }
}

impl ProjectManifest {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut mode = None;
        let mut synthesis = SynthesisKind::Normal;
        let mut m = ProjectManifest {
            mode: Mode::LocalSpecs,
            plants: Vec::new(),
            specs: Vec::new(),
            kappa: None,
            synthesis,
            moc_bound: None,
            verify_monolithic: false,
            repair_locals: false,
            intersect_spec: false,
            occ: false,
            minimize: false,
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| manifest_err(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "mode" => {
                    mode =
                        Some(Mode::parse(value).ok_or_else(|| manifest_err(line, format!("unknown mode `{value}`")))?)
                }
                "plant" => m.plants.push(base.join(value)),
                "spec" => m.specs.push(base.join(value)),
                "kappa" => {
                    let kappa = m.kappa.get_or_insert_with(Alphabet::new);
                    for name in value.split_whitespace() {
                        if !valid_event_name(name) {
                            return Err(manifest_err(line, format!("invalid event name `{name}`")));
                        }
                        kappa.insert(Event::new(name));
                    }
                }
                "synthesis" => {
                    synthesis = SynthesisKind::parse(value)
                        .ok_or_else(|| manifest_err(line, format!("unknown synthesis kind `{value}`")))?
                }
                "moc-bound" => {
                    m.moc_bound = Some(value.parse().map_err(|_| {
                        manifest_err(
                            line,
                            format!("`moc-bound` expects a non-negative integer, got `{value}`"),
                        )
                    })?)
                }
                "verify-monolithic" => m.verify_monolithic = parse_bool(line, key, value)?,
                "repair-locals" => m.repair_locals = parse_bool(line, key, value)?,
                "intersect-spec" => m.intersect_spec = parse_bool(line, key, value)?,
                "occ" => m.occ = parse_bool(line, key, value)?,
                "minimize" => m.minimize = parse_bool(line, key, value)?,
                _ => return Err(manifest_err(line, format!("unknown key `{key}`"))),
            }
        }
        m.mode = mode.ok_or_else(|| Error::Manifest("missing `mode`".into()))?;
        m.synthesis = synthesis;
        if m.plants.is_empty() {
            return Err(Error::Manifest("no `plant` entries".into()));
        }
        match m.mode {
            Mode::LocalSpecs if m.specs.len() != m.plants.len() => {
                return Err(Error::Manifest(format!(
                    "local-specs mode needs one spec per plant ({} plants, {} specs)",
                    m.plants.len(),
                    m.specs.len()
                )))
            }
            Mode::LocalSpecs if m.kappa.is_some() => {
                return Err(Error::Manifest("`kappa` is only used in global-spec mode".into()))
            }
            Mode::GlobalSpec if m.specs.len() != 1 => {
                return Err(Error::Manifest(format!(
                    "global-spec mode needs exactly one spec ({} given)",
                    m.specs.len()
                )))
            }
            _ => {}
        }
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Load {
            path: path.display().to_string(),
            source: Box::new(e.into()),
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base).map_err(|e| Error::Load {
            path: path.display().to_string(),
            source: Box::new(e),
        })
    }

    /// Loads every referenced file into a modular system. Per-file event
    /// attributes must agree.
    pub fn load_system(&self) -> Result<ModularSystem> {
        let mut tables = Vec::new();
        let mut load = |p: &PathBuf| -> Result<Automaton> {
            let (a, t) = load_automaton(p)?;
            tables.push((p.display().to_string(), t));
            Ok(a)
        };
        let plants = self.plants.iter().map(&mut load).collect::<Result<Vec<_>>>()?;
        let specs = self.specs.iter().map(&mut load).collect::<Result<Vec<_>>>()?;
        let agreement = check_observability_agreement(&tables);
        if agreement.failed() {
            return Err(Error::Manifest(agreement.to_string()));
        }
        let table: EventTable = merge_tables(&tables)?;
        let m = ModularSystem::new(plants, &table)?;
        match self.mode {
            Mode::LocalSpecs => {
                let specs = if self.intersect_spec {
                    specs
                        .iter()
                        .zip(m.plants())
                        .map(|(k, l)| parallel([k, &l.mark_all()]).with_name(k.name()))
                        .collect()
                } else {
                    specs
                };
                m.with_local_specs(specs)
            }
            Mode::GlobalSpec => {
                let mut k = specs.into_iter().next().expect("one spec");
                if self.intersect_spec {
                    k = parallel([&k, &m.global_plant().mark_all()]).with_name(k.name());
                }
                let m = m.with_global_spec(k)?;
                match &self.kappa {
                    Some(kappa) if !kappa.is_subset(&m.alphabet()) => Err(Error::InvalidSystem(format!(
                        "kappa {} contains events outside the plants",
                        fmt_alphabet(kappa)
                    ))),
                    _ => Ok(m),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_flags() {
        let text = "mode = global-spec\nplant = a.aut\nplant = b.aut # two\nspec = k.aut\nkappa = x\nkappa = y z\nmoc-bound = 4\nminimize = yes\n";
        let m = ProjectManifest::parse(text, Path::new("/p")).unwrap();
        assert_eq!(m.mode, Mode::GlobalSpec);
        assert_eq!(m.plants, vec![PathBuf::from("/p/a.aut"), PathBuf::from("/p/b.aut")]);
        assert_eq!(m.kappa.unwrap().len(), 3);
        assert_eq!(m.moc_bound, Some(4));
        assert!(m.minimize && !m.verify_monolithic);
        let empty =
            ProjectManifest::parse("mode = global-spec\nplant = a\nspec = k\nkappa =\n", Path::new(".")).unwrap();
        assert_eq!(empty.kappa, Some(Alphabet::new()));
    }

    #[test]
    fn rejects_bad_manifests() {
        let base = Path::new(".");
        for text in [
            "plant = a\nspec = k\n",
            "mode = local-specs\nplant = a\n",
            "mode = local-specs\nplant = a\nspec = k\nkappa = x\n",
            "mode = global-spec\nplant = a\n",
            "mode = local-specs\nplant = a\nspec = k\ncolour = red\n",
            "mode = local-specs\nplant = a\nspec = k\nmoc-bound = -1\n",
            "mode = local-specs\nplant = a\nspec = k\nsynthesis = magic\n",
            "mode = local-specs\nplant a\n",
        ] {
            assert!(ProjectManifest::parse(text, base).is_err(), "{text}");
        }
    }
}
