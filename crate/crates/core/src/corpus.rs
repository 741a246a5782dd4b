//! The built-in exercise corpus and a reference script for each exercise.
//!
//! The pack lives in `corpus/exercises.json`; the script for exercise `id` is
//! `corpus/scripts/<id>.nd`.

use std::sync::OnceLock;

use crate::exercise::{ExercisePack, ExerciseSpec};

pub const PACK_JSON: &str = include_str!("../corpus/exercises.json");

macro_rules! scripts {
    ($($id:literal,)*) => {
        &[$(($id, include_str!(concat!("../corpus/scripts/", $id, ".nd")))),*]
    };
}

static SCRIPTS: &[(&str, &str)] = scripts![
    "identity",
    "weakening",
    "modus-ponens",
    "and-comm",
    "or-comm",
    "syllogism",
    "contrapositive",
    "double-negation",
    "excluded-middle",
    "peirce",
    "de-morgan-or",
    "de-morgan-or-converse",
    "de-morgan-and",
    "iff-from-implications",
    "iff-symmetric",
    "explosion",
    "curry",
    "uncurry",
    "and-over-or",
    "or-over-and",
    "implication-as-or",
    "or-as-implication",
    "negated-implication",
    "absorption",
    "case-split",
    "dilemma",
    "iff-transitive",
    "frege",
    "and-assoc",
    "or-assoc",
    "double-negation-intro",
    "keep-the-premise",
    "classical-contraposition",
    "linearity",
    "chain",
    "modus-ponens-internal",
    "four-atoms",
    "iff-negation",
    "quantifier-shift",
    "forall-and-left",
    "forall-modus-ponens",
    "exists-intro",
    "exists-monotone",
    "forall-to-exists",
    "not-exists",
    "exists-not",
    "forall-and-intro",
    "equality-reflexive",
    "equality-rewrite",
    "union-of-intersections",
    "difference",
    "intersection-commutes",
    "union-monotone",
    "converse",
    "affirming-the-consequent",
    "exists-to-forall",
    "mystery-or-monotone",
    "mystery-export",
    "mystery-import",
    "mystery-exists",
];

/// The corpus pack, parsed and validated once.
pub fn pack() -> &'static ExercisePack {
    static PACK: OnceLock<ExercisePack> = OnceLock::new();
    PACK.get_or_init(|| ExercisePack::from_json_str(PACK_JSON).expect("the corpus pack is valid"))
}

pub fn exercise(id: &str) -> Option<&'static ExerciseSpec> {
    pack().exercises.iter().find(|e| e.id == id)
}

/// The reference script for an exercise.
pub fn script(id: &str) -> Option<&'static str> {
    SCRIPTS.iter().find(|(i, _)| *i == id).map(|(_, s)| *s)
}

/// Every exercise paired with its script, in pack order.
pub fn entries() -> impl Iterator<Item = (&'static ExerciseSpec, &'static str)> {
    pack().exercises.iter().map(|e| (e, script(&e.id).expect("every corpus exercise has a script")))
}

#[cfg(test)]
mod tests;
