use super::*;
use crate::exercise::{HiddenStatus, Mode};
use crate::generate::difficulty;
use crate::kernel::{check_tree, Verdict};
use crate::tactic::{command::parse_script, Command, ProofStatus, Runner};

fn expected(e: &ExerciseSpec) -> ProofStatus {
    match (e.mode, e.hidden_status) {
        (Mode::Refute, _) | (Mode::Mystery, Some(HiddenStatus::Refutable)) => ProofStatus::Refuted,
        _ => ProofStatus::Proved,
    }
}

#[test]
fn every_script_reaches_its_status() {
    let mut failures = Vec::new();
    for (e, text) in entries() {
        let mut r = Runner::new(e.clone()).unwrap();
        match r.run_script(text) {
            Ok(_) if r.status() == expected(e) => {}
            Ok(_) => failures.push(format!("{}: ended {:?}", e.id, r.status())),
            Err((line, err)) => failures.push(format!("{}: line {line}: {err}", e.id)),
        }
        if let Some(tree) = r.proof_tree() {
            assert_eq!(check_tree(tree, &e.sequent, &e.definitions), Verdict::Ok, "{}", e.id);
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn difficulty_matches_the_measure() {
    let wrong: Vec<_> = pack()
        .exercises
        .iter()
        .filter(|e| e.difficulty != difficulty(&e.sequent, &e.signature))
        .map(|e| format!("\"{}\": {}", e.id, difficulty(&e.sequent, &e.signature)))
        .collect();
    assert!(wrong.is_empty(), "{{{}}}", wrong.join(", "));
}

#[test]
fn ids_are_unique_and_scripted() {
    let mut ids: Vec<_> = pack().exercises.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids.len(), SCRIPTS.len());
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), SCRIPTS.len());
}

#[test]
fn the_union_script_is_short() {
    let e = exercise("union-of-intersections").unwrap();
    let cmds = parse_script(script(&e.id).unwrap(), &e.signature).unwrap();
    assert!(cmds.len() <= 8);
    let unfolds = cmds.iter().filter(|(_, c)| matches!(c, Command::Rewrite { .. })).count();
    assert!(unfolds >= 2);
}

#[test]
fn the_pack_round_trips() {
    let text = pack().to_json_string(crate::exercise::View::Instructor);
    assert_eq!(&ExercisePack::from_json_str(&text).unwrap(), pack());
}
