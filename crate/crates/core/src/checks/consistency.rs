use crate::error::Result;
use crate::ops::{language_equal, parallel, project_onto};
use crate::system::ModularSystem;

use super::{CheckVerdict, Witness};

/// `P_i(L) = L_i` on generated languages.
pub fn check_natural_projection_consistency(m: &ModularSystem, i: usize) -> CheckVerdict {
    let name = format!("projection-consistency[{}]", i + 1);
    let image = project_onto(&m.global_plant(), m.local_alphabet(i)).mark_all();
    let cmp = language_equal(&image, &m.plant(i).mark_all()).expect("same alphabet");
    match cmp.generated {
        None => CheckVerdict::holds(name),
        Some(w) => {
            let side = if image.generates(&w) {
                "in P_i(L) only"
            } else {
                "in L_i only"
            };
            CheckVerdict::fails(name, vec![Witness::word("s", &w)]).with_note(side)
        }
    }
}

/// Replaces every `L_i` by `P_i(L)` and every local specification `K_i` by
/// `K_i ∩ P_i(L)`. The global plant `L` is unchanged.
pub fn repair_locals(m: &ModularSystem) -> Result<ModularSystem> {
    let l = m.global_plant();
    let images: Vec<_> = (0..m.len())
        .map(|i| {
            project_onto(&l, m.local_alphabet(i))
                .mark_all()
                .with_name(m.plant(i).name())
        })
        .collect();
    let mut out = m.clone();
    if let Some(specs) = m.local_specs() {
        let specs = specs
            .iter()
            .zip(&images)
            .map(|(k, p)| parallel([k, p]).with_name(k.name()))
            .collect();
        out.replace_local_specs(specs);
    }
    out.replace_plants(images);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Automaton;
    use crate::event::{alphabet, EventTable, Word};

    fn closed(name: &str, sigma: &[&str], w: &str) -> Automaton {
        Automaton::from_word(name, alphabet(sigma.iter().copied()), &Word::parse(w), true)
    }

    fn three_module() -> ModularSystem {
        let t = EventTable::new()
            .with("u1", true, false)
            .with("u2", true, false)
            .with("u3", true, false)
            .with("u", true, false)
            .with("c", true, true);
        ModularSystem::new(
            vec![
                closed("L1", &["u1", "u", "c"], "u1 u c"),
                closed("L2", &["u2", "c", "u"], "u2 c u"),
                closed("L3", &["u3", "c"], "u3 c"),
            ],
            &t,
        )
        .unwrap()
        .with_local_specs(vec![
            closed("K1", &["u1", "u", "c"], "u1 u"),
            closed("K2", &["u2", "c", "u"], "u2 c"),
            closed("K3", &["u3", "c"], "u3"),
        ])
        .unwrap()
    }

    #[test]
    fn three_module_module_one_is_inconsistent() {
        let m = three_module();
        let v = check_natural_projection_consistency(&m, 0);
        assert!(v.failed());
        assert_eq!(v.witness_text(), "s=u1 u");
        assert_eq!(v.note.as_deref(), Some("in L_i only"));
    }

    #[test]
    fn repair_restores_consistency() {
        let m = three_module();
        let r = repair_locals(&m).unwrap();
        for i in 0..3 {
            assert!(check_natural_projection_consistency(&r, i).certified());
        }
        let expected = closed("P1", &["u1", "u", "c"], "u1");
        assert!(language_equal(r.plant(0), &expected).unwrap().holds());
        assert!(language_equal(&r.global_plant(), &m.global_plant()).unwrap().holds());
        assert!(language_equal(&r.local_specs().unwrap()[0], &expected).unwrap().holds());
    }

    #[test]
    fn disjoint_and_equal_alphabets_hold() {
        let t = EventTable::new().with("a", true, true).with("b", false, false);
        let m = ModularSystem::new(vec![closed("L1", &["a"], "a a"), closed("L2", &["b"], "b")], &t).unwrap();
        assert!(check_natural_projection_consistency(&m, 0).certified());
        assert!(check_natural_projection_consistency(&m, 1).certified());
        let l = closed("L", &["a", "b"], "a b");
        let m = ModularSystem::new(vec![l.clone(), l.clone(), l], &t).unwrap();
        assert!(check_natural_projection_consistency(&m, 2).certified());
    }
}
