use std::sync::Arc;

use ndlab_core::corpus;
use ndlab_core::kernel::{check_tree, tree_from_json, Verdict};
use ndlab_core::tactic::{ProofStatus, Runner};
use ndlab_service::session::{Outcome, SessionStatus};
use ndlab_service::store::{Export, ExportForm};
use ndlab_service::{ServiceError, Store};

fn store() -> (tempfile::TempDir, Store) {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    (dir, store)
}

fn rejected_kind(o: &Outcome) -> Option<&str> {
    match o {
        Outcome::Rejected { error } => Some(&error.kind),
        Outcome::Accepted { .. } => None,
    }
}

#[test]
fn creating_sessions() {
    let (_d, s) = store();
    let a = s.create_session("identity", "ann").unwrap();
    assert!(a.events.is_empty());
    assert_eq!(a.goals.len(), 1);
    assert_eq!(a.status, SessionStatus::Open);
    assert!(a.exercise.get("hidden_status").is_none());
    let b = s.create_session("identity", "ann").unwrap();
    assert_ne!(a.id, b.id);
    assert!(matches!(s.create_session("nope", "ann"), Err(ServiceError::NoSuchExercise(_))));
    assert!(matches!(s.session("missing"), Err(ServiceError::NoSuchSession(_))));
    assert!(matches!(s.session("../etc"), Err(ServiceError::NoSuchSession(_))));
}

#[test]
fn commands_append_events() {
    let (_d, s) = store();
    let id = s.create_session("identity", "ann").unwrap().id;
    let e = s.apply_command(&id, "backward impl_intro").unwrap();
    let Outcome::Accepted { report } = &e.outcome else { panic!("{e:?}") };
    assert_eq!(report.new_goals.len(), 1);
    let e = s.apply_command(&id, "backward impl_elim(").unwrap();
    assert_eq!(rejected_kind(&e.outcome), Some("SyntaxError"));
    let e = s.apply_command(&id, "qed").unwrap();
    assert_eq!(rejected_kind(&e.outcome), Some("ProofIncomplete"));
    let view = s.session(&id).unwrap();
    assert_eq!(view.status, SessionStatus::Open);
    assert_eq!(view.events.iter().map(|e| e.ordinal).collect::<Vec<_>>(), [0, 1, 2]);
    assert!(view.palette.contains(&"backward assumption".to_string()));
}

#[test]
fn closed_sessions_refuse_commands_but_not_undo() {
    let (_d, s) = store();
    let id = s.create_session("identity", "ann").unwrap().id;
    for c in ["backward impl_intro", "backward assumption", "qed"] {
        assert!(s.apply_command(&id, c).unwrap().outcome.is_accepted());
    }
    assert_eq!(s.session(&id).unwrap().status, SessionStatus::Proved);
    assert!(matches!(
        s.apply_command(&id, "backward raa"),
        Err(ServiceError::SessionClosed(SessionStatus::Proved))
    ));
    assert!(s.undo(&id).unwrap().outcome.is_accepted());
    assert_eq!(s.session(&id).unwrap().status, SessionStatus::Open);
}

#[test]
fn refuting_closes_the_session() {
    let (_d, s) = store();
    let id = s.create_session("converse", "ann").unwrap().id;
    let e = s.apply_command(&id, "refute with p=0, q=1").unwrap();
    let Outcome::Accepted { report } = &e.outcome else { panic!() };
    assert!(report.refutation.is_some());
    assert_eq!(s.session(&id).unwrap().status, SessionStatus::Refuted);
    assert!(matches!(s.export(&id, ExportForm::Tree), Err(ServiceError::ProofIncomplete)));
}

#[test]
fn replay_frames_and_determinism() {
    let (_d, s) = store();
    let id = s.create_session("identity", "ann").unwrap().id;
    for c in ["backward impl_intro", "backward assumption", "qed"] {
        s.apply_command(&id, c).unwrap();
    }
    let log = s.replay(&id).unwrap();
    assert_eq!(log.frames.iter().map(|f| f.goals.len()).collect::<Vec<_>>(), [1, 1, 0]);
    assert_eq!(s.replay(&id).unwrap(), log);
    assert_eq!(log.frames.last().unwrap().hash, s.live_hash(&id).unwrap());
}

#[test]
fn undo_behaviour() {
    let (_d, s) = store();
    let id = s.create_session("and-comm", "ann").unwrap().id;
    let e = s.undo(&id).unwrap();
    assert_eq!(rejected_kind(&e.outcome), Some("NothingToUndo"));
    let h0 = s.live_hash(&id).unwrap();
    s.apply_command(&id, "forward h1 and_elim1").unwrap();
    let h1 = s.live_hash(&id).unwrap();
    s.undo(&id).unwrap();
    assert_eq!(s.live_hash(&id).unwrap(), h0);
    s.apply_command(&id, "forward h1 and_elim1").unwrap();
    assert_eq!(s.live_hash(&id).unwrap(), h1);
    let view = s.session(&id).unwrap();
    assert_eq!(view.events.len(), 4);
    assert_eq!(view.events[2].command, "undo");
}

#[test]
fn exports() {
    let (_d, s) = store();
    let e = corpus::exercise("union-of-intersections").unwrap();
    let id = s.create_session(&e.id, "ann").unwrap().id;
    s.apply_command(&id, "backward frobnicate").unwrap();
    for line in corpus::script(&e.id).unwrap().lines() {
        s.apply_command(&id, line).unwrap();
        if line.starts_with("forward") {
            s.apply_command(&id, "forward h42 and_elim1").unwrap();
        }
    }
    let Export::Tree(doc) = s.export(&id, ExportForm::Tree).unwrap() else { panic!() };
    let tree = tree_from_json(&doc["tree"], &e.signature).unwrap();
    assert_eq!(check_tree(&tree, &e.sequent, &e.definitions), Verdict::Ok);
    assert!(doc["text"].as_str().unwrap().contains(":: definition"));

    let Export::Script(script) = s.export(&id, ExportForm::Script).unwrap() else { panic!() };
    let mut r = Runner::new(e.clone()).unwrap();
    r.run_script(&script).unwrap();
    assert_eq!(r.status(), ProofStatus::Proved);

    let Export::Movie(movie) = s.export(&id, ExportForm::Movie).unwrap() else { panic!() };
    let rejected: Vec<_> = movie.events.iter().filter(|e| !e.outcome.is_accepted()).map(|e| e.ordinal).collect();
    assert_eq!(rejected.len(), 2);
    assert_eq!(movie.events.last().unwrap().command, "qed");
    assert_eq!(movie.frames.last().unwrap().goals.len(), 0);
}

#[test]
fn logs_only_grow() {
    let (_d, s) = store();
    let id = s.create_session("modus-ponens", "ann").unwrap().id;
    let path = s.session_path(&id);
    let mut last = std::fs::metadata(&path).unwrap().len();
    for c in ["forward h2 impl_elim", "nonsense", "undo", "undo", "auto 1", "qed", "undo"] {
        s.apply_command(&id, c).unwrap();
        s.replay(&id).unwrap();
        s.export(&id, ExportForm::Movie).unwrap();
        let len = std::fs::metadata(&path).unwrap().len();
        assert!(len > last);
        last = len;
    }
}

#[test]
fn failed_appends_leave_no_trace() {
    let (_d, s) = store();
    let id = s.create_session("identity", "ann").unwrap().id;
    s.apply_command(&id, "backward impl_intro").unwrap();
    let hash = s.live_hash(&id).unwrap();
    let path = s.session_path(&id);
    let saved = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let err = s.apply_command(&id, "backward assumption").unwrap_err();
    assert!(err.retriable(), "{err:?}");
    assert_eq!(s.live_hash(&id).unwrap(), hash);
    assert_eq!(s.session(&id).unwrap().events.len(), 1);
    std::fs::write(&path, saved).unwrap();
    let e = s.apply_command(&id, "backward assumption").unwrap();
    assert_eq!(e.ordinal, 1);
    assert_eq!(s.replay(&id).unwrap().frames.len(), 3);
}

#[test]
fn sessions_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let id = {
        let s = Store::open(dir.path()).unwrap();
        let id = s.create_session("syllogism", "ann").unwrap().id;
        for c in ["backward impl_intro", "forward h1 impl_elim", "oops"] {
            s.apply_command(&id, c).unwrap();
        }
        id
    };
    let s = Store::open(dir.path()).unwrap();
    let view = s.session(&id).unwrap();
    assert_eq!(view.events.len(), 3);
    assert_eq!(view.goals.len(), 2);
    assert_eq!(s.apply_command(&id, "backward assumption").unwrap().ordinal, 3);
}

#[test]
fn tampering_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let id = {
        let s = Store::open(dir.path()).unwrap();
        let id = s.create_session("identity", "ann").unwrap().id;
        s.apply_command(&id, "backward impl_intro").unwrap();
        s.apply_command(&id, "backward assumption").unwrap();
        id
    };
    let path = dir.path().join("sessions").join(format!("{id}.jsonl"));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("\"backward assumption\"", "\"backward raa\"")).unwrap();
    let s = Store::open(dir.path()).unwrap();
    match s.session(&id) {
        Err(ServiceError::CorruptLog { ordinal, .. }) => assert_eq!(ordinal, 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn generated_exercises_persist() {
    let dir = tempfile::tempdir().unwrap();
    let config = ndlab_core::generate::GeneratorConfig::new(7, ndlab_core::exercise::Mode::Mystery);
    let spec = Store::open(dir.path()).unwrap().generate(&config).unwrap();
    let s = Store::open(dir.path()).unwrap();
    assert_eq!(s.exercise(&spec.id).unwrap(), spec);
    s.create_session(&spec.id, "bob").unwrap();
}

#[test]
fn one_session_is_serialized_across_threads() {
    let (_d, s) = store();
    let s = Arc::new(s);
    let id = s.create_session("and-comm", "ann").unwrap().id;
    let other = s.create_session("or-comm", "bob").unwrap().id;
    let handles: Vec<_> = (0..8)
        .map(|i| {
            let s = s.clone();
            let id = if i % 2 == 0 { id.clone() } else { other.clone() };
            std::thread::spawn(move || {
                for _ in 0..10 {
                    s.apply_command(&id, "forward h1 and_elim1").unwrap();
                    s.apply_command(&id, "undo").unwrap();
                }
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
    for sid in [&id, &other] {
        let view = s.session(sid).unwrap();
        assert_eq!(view.events.len(), 80);
        assert!(view.events.iter().enumerate().all(|(i, e)| e.ordinal == i as u64));
        assert_eq!(s.replay(sid).unwrap().frames.last().unwrap().hash, s.live_hash(sid).unwrap());
    }
}
