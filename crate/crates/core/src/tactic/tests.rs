use super::*;
use crate::exercise::ExerciseSpec;
use crate::formula::{parse_formula, Signature};
use crate::kernel::{Hypothesis, Sequent};

fn pq() -> Signature {
    Signature::propositional(["p", "q", "r"])
}

fn exercise(sig: Signature, hyps: &[&str], goal: &str) -> ExerciseSpec {
    let hypotheses = hyps
        .iter()
        .enumerate()
        .map(|(i, h)| Hypothesis {
            label: format!("h{}", i + 1),
            formula: parse_formula(h, &sig).unwrap(),
        })
        .collect();
    let conclusion = parse_formula(goal, &sig).unwrap();
    ExerciseSpec::prove("t", sig, Sequent::new(hypotheses, conclusion))
}

fn runner(hyps: &[&str], goal: &str) -> Runner {
    Runner::new(exercise(pq(), hyps, goal)).unwrap()
}

#[test]
fn identity_script_is_proved() {
    let mut r = runner(&[], "p -> p");
    let reports = r.run_script("backward impl_intro\nbackward assumption\nqed\n").unwrap();
    assert_eq!(reports.len(), 3);
    assert_eq!(r.status(), ProofStatus::Proved);
    assert_eq!(reports[0].new_goals, vec![2]);
    assert!(reports[1].open_goals.is_empty());
    assert!(r.proof_tree().is_some());
}

#[test]
fn qed_needs_zero_open_goals() {
    let mut r = runner(&[], "p -> p");
    let e = r.execute("qed").unwrap_err();
    assert_eq!(e.kind(), "ProofIncomplete");
    assert_eq!(r.status(), ProofStatus::Open);
}

#[test]
fn refute_closes_as_refuted() {
    let mut r = runner(&["p -> q"], "q -> p");
    let rep = r.execute("refute with p=0, q=1").unwrap().unwrap();
    assert_eq!(rep.status, ProofStatus::Refuted);
    assert!(rep.refutation.is_some());
    assert_eq!(r.execute("backward impl_intro").unwrap_err().kind(), "ExerciseClosed");
}

#[test]
fn refute_with_a_failing_model() {
    let mut r = runner(&["p -> q"], "q -> p");
    let e = r.execute("refute with p=1, q=1").unwrap_err();
    assert_eq!(e.kind(), "RefutationOfProvable");
    assert_eq!(r.status(), ProofStatus::Open);
    assert_eq!(r.undo_depth(), 0);
}

#[test]
fn undo_restores_the_previous_frame() {
    let mut r = runner(&[], "p -> p");
    assert_eq!(r.execute("undo").unwrap_err(), TacticError::NothingToUndo);
    let init = r.state().clone();
    r.execute("backward impl_intro").unwrap();
    assert_ne!(r.state(), &init);
    r.execute("undo").unwrap();
    assert_eq!(r.state(), &init);
    r.run_script("backward impl_intro\nbackward assumption\nqed").unwrap();
    r.execute("undo").unwrap();
    assert_eq!(r.status(), ProofStatus::Open);
    assert!(r.proof_tree().is_none());
}

#[test]
fn level1_on_conjunction_takes_three_steps() {
    let mut r = runner(&["p", "q"], "p /\\ q");
    let rep = r.execute("auto 1").unwrap().unwrap();
    let steps: Vec<&str> = rep.applied.iter().map(|s| s.step.as_str()).collect();
    assert_eq!(steps, ["backward and_intro", "backward assumption", "backward assumption"]);
    assert!(rep.open_goals.is_empty());
}

#[test]
fn level1_respects_the_budget() {
    let mut ex = exercise(pq(), &["p", "q"], "p /\\ q");
    ex.automation_cap = AutomationPolicy::new(1, 2);
    let mut r = Runner::new(ex).unwrap();
    let rep = r.execute("auto 1").unwrap().unwrap();
    assert_eq!(rep.applied.len(), 2);
    assert_eq!(rep.open_goals.len(), 1);
}

#[test]
fn level1_uses_forward_and_elimination() {
    let mut r = runner(&["p /\\ q"], "q");
    let rep = r.execute("auto 1").unwrap().unwrap();
    let steps: Vec<&str> = rep.applied.iter().map(|s| s.step.as_str()).collect();
    assert_eq!(steps, ["forward h1 and_elim1", "forward h1 and_elim2", "backward assumption"]);
}

#[test]
fn level2_proves_modus_ponens() {
    let mut r = runner(&[], "((p -> q) /\\ p) -> q");
    let rep = r.execute("auto 2").unwrap().unwrap();
    assert!(rep.open_goals.is_empty());
    assert!(rep.applied.len() > 3);
    r.execute("qed").unwrap();
    assert_eq!(r.status(), ProofStatus::Proved);
}

#[test]
fn level2_reports_invalid_goals_without_change() {
    let mut r = runner(&[], "p -> q");
    let before = r.state().clone();
    let e = r.execute("auto 2").unwrap_err();
    let TacticError::NotValid { countermodel, .. } = &e else { panic!("{e:?}") };
    assert_eq!(countermodel.get("p"), Some(true));
    assert_eq!(countermodel.get("q"), Some(false));
    assert_eq!(r.state(), &before);
}

#[test]
fn level2_above_the_cap() {
    let mut ex = exercise(pq(), &[], "p -> p");
    ex.automation_cap = AutomationPolicy::new(1, 100);
    let mut r = Runner::new(ex).unwrap();
    assert_eq!(r.execute("auto 2").unwrap_err().kind(), "AutomationCapExceeded");
}

#[test]
fn level2_out_of_budget_reverts() {
    let mut ex = exercise(pq(), &[], "p \\/ ~p");
    ex.automation_cap = AutomationPolicy::new(2, 3);
    let mut r = Runner::new(ex).unwrap();
    let before = r.state().clone();
    assert_eq!(r.execute("auto 2").unwrap_err().kind(), "AutomationCapExceeded");
    assert_eq!(r.state(), &before);
}

#[test]
fn level2_classical_tautologies() {
    for goal in [
        "p \\/ ~p",
        "~~p -> p",
        "((p -> q) -> p) -> p",
        "(p -> q) \\/ (q -> p)",
        "~(p /\\ q) <-> (~p \\/ ~q)",
        "(p <-> q) <-> (q <-> p)",
        "(p -> (q -> r)) -> ((p -> q) -> (p -> r))",
        "false -> p",
        "(p /\\ ~p) -> q",
    ] {
        let mut r = runner(&[], goal);
        r.execute("auto 2").unwrap_or_else(|e| panic!("{goal}: {e}"));
        r.execute("qed").unwrap_or_else(|e| panic!("{goal}: {e}"));
    }
}

#[test]
fn level2_on_first_order_goals() {
    let sig = Signature::new().with_predicate("P", 1).unwrap().with_constant("c").unwrap();
    let mut r = Runner::new(exercise(sig.clone(), &["P(c) -> false"], "~P(c)")).unwrap();
    r.execute("auto 2").unwrap();
    r.execute("qed").unwrap();
    let mut r = Runner::new(exercise(sig, &[], "(forall x) P(x) -> P(c)")).unwrap();
    let e = r.execute("auto 2").unwrap_err();
    assert_eq!(e.kind(), "QuantifiersPresent");
}

#[test]
fn auto_level0_changes_nothing() {
    let mut r = runner(&[], "p -> p");
    let rep = r.execute("auto 0").unwrap().unwrap();
    assert!(!rep.state_changed);
    assert!(rep.applied.is_empty());
}

#[test]
fn goal_prefix_selects_a_goal() {
    let mut r = runner(&["p", "q"], "p /\\ q");
    r.execute("backward and_intro").unwrap();
    let rep = r.execute("goal 3: backward assumption").unwrap().unwrap();
    assert_eq!(rep.goal, Some(3));
    assert_eq!(rep.open_goals, vec![2]);
    assert_eq!(r.execute("goal 9: backward assumption").unwrap_err().kind(), "NoSuchGoal");
}

#[test]
fn hints() {
    let sig = Signature::new().with_predicate("P", 2).unwrap();
    let r = Runner::new(exercise(sig, &["(forall x) (forall y) P(x, y)"], "(forall y) (forall x) P(x, y)")).unwrap();
    let h = r.hint(None).unwrap();
    assert_eq!((h.rule, h.direction), (Rule::ForallI, Direction::Backward));

    let r = runner(&["p"], "p");
    assert_eq!(r.hint(None).unwrap().rule, Rule::Assumption);

    let sig = Signature::new().with_predicate("P", 1).unwrap().with_predicate("Q", 1).unwrap();
    let r = Runner::new(exercise(sig, &["(exists y) (P(y) /\\ Q(y))"], "(exists x) P(x)")).unwrap();
    let h = r.hint(None).unwrap();
    assert_eq!((h.rule, h.direction, h.hypothesis.as_deref()), (Rule::ExistsE, Direction::Forward, Some("h1")));
}

#[test]
fn report_round_trips_through_json() {
    let mut r = runner(&["p", "q"], "p /\\ q");
    let rep = r.execute("auto 1").unwrap().unwrap();
    let text = serde_json::to_string(&rep).unwrap();
    assert_eq!(serde_json::from_str::<StepReport>(&text).unwrap(), rep);
}
