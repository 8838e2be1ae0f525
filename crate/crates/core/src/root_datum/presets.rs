//! The embedded preset catalog.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use super::{ExplicitDatum, LatticeForm, RootDatum};
use crate::error::{Error, Result};

#[derive(Deserialize)]
struct Catalog {
    cartan: BTreeMap<String, Vec<Vec<i64>>>,
    explicit: BTreeMap<String, ExplicitDatum>,
}

fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        serde_json::from_str(include_str!("presets.json")).expect("embedded preset table is valid")
    })
}

/// Every name accepted by [`RootDatum::preset`], in catalog form.
pub fn preset_names() -> Vec<String> {
    let c = catalog();
    let mut out: Vec<String> = c.explicit.keys().cloned().collect();
    for t in c.cartan.keys() {
        out.push(format!("{t}-ad"));
        out.push(format!("{t}-sc"));
    }
    out.extend((2..=8).flat_map(|n| [format!("SL{n}"), format!("PGL{n}")]));
    out.extend(["Sp4", "Sp6", "SO5", "SO7"].map(String::from));
    out
}

pub(super) fn build(name: &str) -> Result<RootDatum> {
    let unknown = || Error::UnknownPreset(name.to_string());
    let key = name.trim().to_ascii_uppercase().replace('_', "");
    let c = catalog();
    if let Some(e) = c.explicit.get(&key) {
        let mut e = e.clone();
        e.name = Some(key.clone());
        return e.build();
    }
    let number = |prefix: &str| -> Option<usize> { key.strip_prefix(prefix)?.parse().ok() };
    let (cartan_key, form) = if let Some(n) = number("PGL") {
        (
            format!("A{}", n.checked_sub(1).ok_or_else(unknown)?),
            LatticeForm::Adjoint,
        )
    } else if let Some(n) = number("SL") {
        (
            format!("A{}", n.checked_sub(1).ok_or_else(unknown)?),
            LatticeForm::SimplyConnected,
        )
    } else if let Some(n) = number("SP") {
        if n % 2 != 0 {
            return Err(unknown());
        }
        (format!("C{}", n / 2), LatticeForm::SimplyConnected)
    } else if let Some(n) = number("SO") {
        if n % 2 != 1 {
            return Err(unknown());
        }
        (format!("B{}", n / 2), LatticeForm::Adjoint)
    } else {
        let (base, form) = if let Some(b) = key.strip_suffix("-SC").or(key.strip_suffix("SC")) {
            (b, LatticeForm::SimplyConnected)
        } else if let Some(b) = key.strip_suffix("-AD").or(key.strip_suffix("AD")) {
            (b, LatticeForm::Adjoint)
        } else {
            (key.as_str(), LatticeForm::Adjoint)
        };
        (base.to_string(), form)
    };
    let cartan = c.cartan.get(&cartan_key).ok_or_else(unknown)?;
    RootDatum::from_cartan(&display_name(name), cartan, form)
}

fn display_name(name: &str) -> String {
    let t = name.trim();
    let upper = t.to_ascii_uppercase();
    for p in ["PGL", "SL", "GL", "SO"] {
        if upper.starts_with(p) {
            return upper;
        }
    }
    if upper.starts_with("SP") {
        return format!("Sp{}", &t[2..]);
    }
    upper
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_name_builds() {
        for name in preset_names() {
            if name.starts_with("E8") || name.starts_with("E7") {
                continue;
            }
            let d = build(&name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!d.hash().is_empty());
        }
    }

    #[test]
    fn aliases_agree() {
        assert_eq!(build("Sp4").unwrap().hash(), build("C2-sc").unwrap().hash());
        assert_eq!(build("SO5").unwrap().hash(), build("B2-ad").unwrap().hash());
        assert_eq!(build("PGL3").unwrap().hash(), build("A2").unwrap().hash());
        assert_eq!(build("SL2").unwrap().hash(), build("a1-sc").unwrap().hash());
        assert_ne!(build("SL2").unwrap().hash(), build("PGL2").unwrap().hash());
    }

    #[test]
    fn unknown_names_rejected() {
        for bad in ["H3", "SL0", "Sp5", "SO6", "X"] {
            assert!(matches!(build(bad), Err(Error::UnknownPreset(_))), "{bad}");
        }
    }
}
