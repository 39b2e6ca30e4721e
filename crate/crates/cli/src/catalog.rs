//! The case catalog: what each command can run and the statement each case
//! checks.

use duality_core::verify::{INTERTWINING_CASES, REGISTERED_CASES};
use serde::Serialize;

use crate::config::Command;

pub struct OrthoInfo {
    pub name: &'static str,
    pub anchor: &'static str,
}

pub const ORTHO_FAMILIES: [OrthoInfo; 6] = [
    OrthoInfo { name: "charlier", anchor: "Charlier orthogonality relation" },
    OrthoInfo { name: "meixner", anchor: "Meixner orthogonality relation" },
    OrthoInfo { name: "krawtchouk", anchor: "Krawtchouk orthogonality relation" },
    OrthoInfo { name: "hermite", anchor: "Hermite orthogonality relation" },
    OrthoInfo { name: "laguerre", anchor: "Laguerre orthogonality relation" },
    OrthoInfo { name: "meixner-pollaczek", anchor: "Meixner-Pollaczek orthogonality relation" },
];

/// Duality cases with a Markov process on both sides, simulable by
/// `simulate`.
pub const MC_CASES: [&str; 6] =
    ["irw-charlier", "irw-dif-hermite", "sip-meixner", "sep-krawtchouk", "sip-bep-laguerre", "bep-bessel"];

pub const ALGEBRA_GROUPS: [&str; 4] = ["lie-algebras", "morphisms", "named-elements", "representations"];

pub const GENERATOR_FAMILIES: [&str; 5] = ["generator/irw", "generator/sip", "generator/sep", "generator/dif", "generator/bep"];

fn intertwining_anchor(name: &str) -> &'static str {
    match name {
        "charlier" => "Charlier kernel intertwining proposition",
        "hermite" => "Hermite kernel intertwining proposition",
        "exp" => "exponential kernel intertwining proposition",
        "meixner" => "Meixner kernel intertwining proposition",
        "laguerre" => "Laguerre kernel intertwining proposition",
        "bessel" => "Bessel kernel intertwining proposition",
        _ => "Meixner-Pollaczek kernel intertwining proposition",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub kind: &'static str,
    pub name: String,
    pub anchor: String,
    pub detail: String,
}

/// Every case in a fixed order: duality, intertwining, orthogonality.
pub fn list_cases() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for c in &REGISTERED_CASES {
        out.push(CatalogEntry {
            kind: "duality",
            name: c.name.to_string(),
            anchor: c.anchor.to_string(),
            detail: format!("{} / {} with {} kernel", c.left.name(), c.right.name(), c.kernel),
        });
    }
    for k in INTERTWINING_CASES {
        out.push(CatalogEntry {
            kind: "intertwining",
            name: format!("intertwining/{}", k.name()),
            anchor: intertwining_anchor(k.name()).to_string(),
            detail: k.relation().to_string(),
        });
    }
    for f in &ORTHO_FAMILIES {
        out.push(CatalogEntry {
            kind: "orthogonality",
            name: f.name.to_string(),
            anchor: f.anchor.to_string(),
            detail: "orthogonality, Gram and cross-validation checks".to_string(),
        });
    }
    out
}

/// Names accepted by `--case` for a command.
pub fn selectors(cmd: Command) -> Vec<&'static str> {
    let duality: Vec<&'static str> = REGISTERED_CASES.iter().map(|c| c.name).collect();
    let intertwining = INTERTWINING_CASES.map(|k| match k.name() {
        "charlier" => "intertwining/charlier",
        "hermite" => "intertwining/hermite",
        "exp" => "intertwining/exp",
        "meixner" => "intertwining/meixner",
        "laguerre" => "intertwining/laguerre",
        "bessel" => "intertwining/bessel",
        _ => "intertwining/meixner-pollaczek",
    });
    let ortho = ORTHO_FAMILIES.iter().map(|f| f.name);
    match cmd {
        Command::VerifyAlgebra => ALGEBRA_GROUPS.to_vec(),
        Command::VerifyDuality => GENERATOR_FAMILIES.into_iter().chain(duality).chain(intertwining).collect(),
        Command::VerifyOrthogonality => ortho.collect(),
        Command::Simulate => MC_CASES.to_vec(),
        Command::All => {
            let mut v: Vec<&str> = ALGEBRA_GROUPS.to_vec();
            v.extend(GENERATOR_FAMILIES);
            v.extend(duality);
            v.extend(intertwining);
            // orthogonality names overlap the intertwining kernels only
            // behind the "intertwining/" prefix, so they can share one list
            v.extend(ortho);
            v
        }
        Command::ListCases => Vec::new(),
    }
}
