use std::sync::Arc;

use super::*;
use crate::definitions::DefinitionSet;
use crate::formula::{parse_formula, Param, Signature, Term};

fn prop() -> Arc<Signature> {
    Arc::new(Signature::propositional(["p", "q", "r"]))
}

fn fo() -> Arc<Signature> {
    Arc::new(
        Signature::new()
            .with_predicate("P", 2)
            .unwrap()
            .with_predicate("Q", 1)
            .unwrap()
            .with_constant("c")
            .unwrap(),
    )
}

fn seq(sig: &Signature, hyps: &[&str], goal: &str) -> Sequent {
    Sequent::from_formulas(
        hyps.iter().map(|h| parse_formula(h, sig).unwrap()).collect(),
        parse_formula(goal, sig).unwrap(),
    )
}

fn b(rule: Rule) -> RuleInstance {
    RuleInstance::backward(rule, vec![])
}

fn first(s: &ProofState) -> GoalId {
    s.open_goals()[0]
}

fn no_defs() -> DefinitionSet {
    DefinitionSet::default()
}

#[test]
fn identity_proof_tree() {
    let sig = prop();
    let s0 = ProofState::init(sig.clone(), seq(&sig, &[], "p -> p")).unwrap();
    assert_eq!(s0.open_goals().len(), 1);
    let s1 = s0.apply_rule(1, &b(Rule::ImpI)).unwrap();
    assert_eq!(s1.open_goals().len(), 1);
    let s2 = s1.apply_rule(first(&s1), &b(Rule::Assumption)).unwrap();
    assert!(s2.is_complete());
    let tree = s2.extract_tree().unwrap();
    assert_eq!(tree.rule, Rule::ImpI);
    assert_eq!(tree.children.len(), 1);
    assert_eq!(tree.children[0].rule, Rule::Supposition);
    assert_eq!(tree.children[0].label.as_deref(), Some(tree.discharged[0].label.as_str()));
    assert_eq!(check_tree(&tree, s2.exercise(), &no_defs()), Verdict::Ok);
    assert_eq!(tree_to_text(&tree), "p -> p :: impl_intro discharges {h1: p}\n  p :: supposition h1\n");
}

#[test]
fn incomplete_state_has_no_tree() {
    let sig = prop();
    let s0 = ProofState::init(sig.clone(), seq(&sig, &[], "p -> p")).unwrap();
    assert_eq!(s0.extract_tree(), Err(KernelError::ProofIncomplete(vec![1])));
}

#[test]
fn malformed_sequents() {
    let sig = prop();
    let bad = Sequent::from_formulas(vec![], crate::formula::Formula::atom("zz"));
    assert!(matches!(ProofState::init(sig.clone(), bad), Err(KernelError::MalformedSequent(_))));
    let with_param = Sequent::from_formulas(
        vec![],
        crate::formula::Formula::pred("Q", vec![Term::param("x", 1)]),
    );
    assert!(matches!(ProofState::init(fo(), with_param), Err(KernelError::MalformedSequent(_))));
}

#[test]
fn and_intro_splits() {
    let sig = prop();
    let s0 = ProofState::init(sig.clone(), seq(&sig, &[], "p /\\ q")).unwrap();
    let s1 = s0.apply_rule(1, &b(Rule::AndI)).unwrap();
    let goals = s1.open_goal_views();
    assert_eq!(goals.len(), 2);
    assert_eq!(goals[0].conclusion.to_string(), "p");
    assert_eq!(goals[1].conclusion.to_string(), "q");
    assert!(matches!(s0.apply_rule(1, &b(Rule::OrI1)), Err(KernelError::RuleShapeMismatch { .. })));
    assert!(matches!(s0.apply_rule(9, &b(Rule::AndI)), Err(KernelError::NoSuchGoal(9))));
}

fn quantifier_shift() -> (Arc<Signature>, ProofState) {
    let sig = fo();
    let s = ProofState::init(sig.clone(), seq(&sig, &["(forall x)(forall y) P(x,y)"], "(forall y)(forall x) P(x,y)")).unwrap();
    (sig, s)
}

#[test]
fn quantifier_shift_in_the_right_order() {
    let (_, s) = quantifier_shift();
    let y1 = ArgInput::Term(Term::param("y", 1));
    let x1 = ArgInput::Term(Term::param("x", 1));
    let s = s.apply_rule(1, &RuleInstance::backward(Rule::ForallI, vec![y1.clone()])).unwrap();
    let s = s.apply_rule(first(&s), &RuleInstance::backward(Rule::ForallI, vec![x1.clone()])).unwrap();
    assert_eq!(s.goal(first(&s)).unwrap().conclusion.to_string(), "P(x1, y1)");
    let s = s.apply_rule(first(&s), &RuleInstance::forward("h1", Rule::ForallE, vec![x1])).unwrap();
    let s = s.apply_rule(first(&s), &RuleInstance::forward("h2", Rule::ForallE, vec![y1])).unwrap();
    let s = s
        .apply_rule(first(&s), &RuleInstance::backward(Rule::Assumption, vec![ArgInput::Label("h3".into())]))
        .unwrap();
    assert!(s.is_complete());
    let tree = s.extract_tree().unwrap();
    assert_eq!(
        tree.rules(),
        vec![Rule::ForallI, Rule::ForallI, Rule::ForallE, Rule::ForallE, Rule::Assumption]
    );
    assert_eq!(check_tree(&tree, s.exercise(), &no_defs()), Verdict::Ok);
}

#[test]
fn quantifier_shift_in_the_wrong_order() {
    let (_, s) = quantifier_shift();
    let c = ArgInput::Term(Term::constant("c"));
    let s = s.apply_rule(1, &RuleInstance::forward("h1", Rule::ForallE, vec![c.clone()])).unwrap();
    let s = s.apply_rule(first(&s), &RuleInstance::forward("h2", Rule::ForallE, vec![c.clone()])).unwrap();
    let err = s.apply_rule(first(&s), &RuleInstance::backward(Rule::ForallI, vec![c])).unwrap_err();
    assert!(matches!(err, KernelError::EigenvariableViolation(_)));
}

#[test]
fn fresh_parameters_are_never_reused() {
    let (_, s) = quantifier_shift();
    let s = s.apply_rule(1, &b(Rule::ForallI)).unwrap();
    let err = s
        .apply_rule(first(&s), &RuleInstance::backward(Rule::ForallI, vec![ArgInput::Term(Term::param("y", 1))]))
        .unwrap_err();
    assert!(matches!(err, KernelError::EigenvariableViolation(_)));
    let s = s.apply_rule(first(&s), &b(Rule::ForallI)).unwrap();
    let params: Vec<Param> = s.introduced_parameters().iter().cloned().collect();
    assert_eq!(params, vec![Param::new("x", 1), Param::new("y", 1)]);
}

#[test]
fn checker_catches_eigenvariable_in_open_hypothesis() {
    // Q(x1) |- (forall x) Q(x), justified by generalizing x1 over its own hypothesis.
    let q = |t: Term| crate::formula::Formula::pred("Q", vec![t]);
    let tree = DerivationTree {
        formula: crate::formula::Formula::forall("x", q(Term::var("x"))),
        rule: Rule::ForallI,
        args: vec![RuleArg::Term(Term::param("x", 1))],
        label: None,
        discharged: vec![],
        children: vec![DerivationTree::leaf(q(Term::param("x", 1)), Rule::Assumption, "h1")],
    };
    let claimed = Sequent::from_formulas(vec![q(Term::param("x", 1))], tree.formula.clone());
    match check_tree(&tree, &claimed, &no_defs()) {
        Verdict::FirstViolation { path, reason } => {
            assert!(path.is_empty());
            assert!(reason.contains("eigenvariable"), "{reason}");
        }
        Verdict::Ok => panic!("accepted an unsound generalization"),
    }
}

#[test]
fn unknowns_and_instantiation() {
    let sig = fo();
    let s = ProofState::init(sig.clone(), seq(&sig, &["Q(c)"], "(exists x) Q(x)")).unwrap();
    let s = s.apply_rule(1, &RuleInstance::backward(Rule::ExistsI, vec![ArgInput::NewUnknown])).unwrap();
    let g = s.goal(first(&s)).unwrap();
    assert_eq!(g.conclusion.to_string(), "Q(?1)");
    assert_eq!(g.pending_unknowns.into_iter().collect::<Vec<_>>(), vec![1]);
    assert!(matches!(s.instantiate(2, &Term::constant("c")), Err(KernelError::NoSuchUnknown(2))));
    let s = s.instantiate(1, &Term::constant("c")).unwrap();
    let s = s.apply_rule(first(&s), &b(Rule::Assumption)).unwrap();
    let tree = s.extract_tree().unwrap();
    assert_eq!(check_tree(&tree, s.exercise(), &no_defs()), Verdict::Ok);
}

#[test]
fn pending_unknowns_block_generalization() {
    let sig = fo();
    let s = ProofState::init(sig.clone(), seq(&sig, &[], "(exists x) (forall y) P(x, y)")).unwrap();
    let s = s.apply_rule(1, &RuleInstance::backward(Rule::ExistsI, vec![ArgInput::NewUnknown])).unwrap();
    assert!(matches!(
        s.apply_rule(first(&s), &b(Rule::ForallI)),
        Err(KernelError::EigenvariableViolation(_))
    ));
}

#[test]
fn no_progress_is_rejected() {
    let sig = prop();
    let s = ProofState::init(sig.clone(), seq(&sig, &["p -> p"], "p")).unwrap();
    let err = s.apply_rule(1, &RuleInstance::forward("h1", Rule::ImpE, vec![])).unwrap_err();
    assert_eq!(err, KernelError::NoProgress);
    let bot = ProofState::init(sig.clone(), seq(&sig, &[], "false")).unwrap();
    assert_eq!(bot.apply_rule(1, &b(Rule::BottomE)).unwrap_err(), KernelError::NoProgress);
}

#[test]
fn palette() {
    let sig = prop();
    let s = ProofState::init(sig.clone(), seq(&sig, &["p /\\ q", "q"], "p /\\ q")).unwrap();
    let names: Vec<String> = s.list_applicable(1).unwrap().iter().map(|r| r.to_string()).collect();
    assert!(names.contains(&"backward and_intro".to_string()));
    assert!(names.contains(&"backward assumption".to_string()));
    assert!(names.contains(&"forward h1 and_elim1".to_string()));
    let bot = ProofState::init(sig.clone(), seq(&sig, &[], "false")).unwrap();
    let names: Vec<Rule> = bot.list_applicable(1).unwrap().iter().map(|r| r.rule).collect();
    assert_eq!(names, vec![Rule::NotE, Rule::Raa]);
    let fo_sig = fo();
    let s = ProofState::init(fo_sig.clone(), seq(&fo_sig, &["(forall x) Q(x)"], "Q(c)")).unwrap();
    let entries: Vec<String> = s.list_applicable(1).unwrap().iter().map(|r| r.to_string()).collect();
    assert!(entries.contains(&"forward h1 forall_elim <witness>".to_string()));
}

#[test]
fn backward_eliminations() {
    let sig = prop();
    let s = ProofState::init(sig.clone(), seq(&sig, &["p \\/ q", "p -> r", "q -> r"], "r")).unwrap();
    let or = parse_formula("p \\/ q", &sig).unwrap();
    let s = s.apply_rule(1, &RuleInstance::backward(Rule::OrE, vec![ArgInput::Formula(or)])).unwrap();
    assert_eq!(s.open_goals().len(), 3);
    let mut s = s;
    s.apply_rule_mut(first(&s), &b(Rule::Assumption)).unwrap();
    for imp in ["p -> r", "q -> r"] {
        let f = parse_formula(imp, &sig).unwrap();
        s.apply_rule_mut(first(&s), &RuleInstance::backward(Rule::ImpE, vec![ArgInput::Formula(f)]))
            .unwrap();
        s.apply_rule_mut(first(&s), &b(Rule::Assumption)).unwrap();
        s.apply_rule_mut(first(&s), &b(Rule::Assumption)).unwrap();
    }
    assert!(s.is_complete());
    let tree = s.extract_tree().unwrap();
    assert_eq!(check_tree(&tree, s.exercise(), &no_defs()), Verdict::Ok);
}

#[test]
fn failed_application_leaves_state_untouched() {
    let sig = prop();
    let mut s = ProofState::init(sig.clone(), seq(&sig, &["p -> p"], "p")).unwrap();
    let before = s.clone();
    assert!(s.apply_rule_mut(1, &RuleInstance::forward("h1", Rule::ImpE, vec![])).is_err());
    assert!(s.apply_rule_mut(1, &RuleInstance::forward("h9", Rule::ImpE, vec![])).is_err());
    assert_eq!(s, before);
}

#[test]
fn json_round_trip() {
    let (sig, s) = quantifier_shift();
    let mut s = s;
    s.apply_rule_mut(1, &b(Rule::ForallI)).unwrap();
    s.apply_rule_mut(first(&s), &b(Rule::ForallI)).unwrap();
    s.apply_rule_mut(first(&s), &RuleInstance::forward("h1", Rule::ForallE, vec![ArgInput::Term(Term::param("x", 1))]))
        .unwrap();
    s.apply_rule_mut(first(&s), &RuleInstance::forward("h2", Rule::ForallE, vec![ArgInput::Term(Term::param("y", 1))]))
        .unwrap();
    s.apply_rule_mut(first(&s), &b(Rule::Assumption)).unwrap();
    let tree = s.extract_tree().unwrap();
    let back = tree_from_json(&tree_to_json(&tree), &sig).unwrap();
    assert_eq!(back, tree);
}

#[test]
fn structural_hash_tracks_equality() {
    let sig = prop();
    let s0 = ProofState::init(sig.clone(), seq(&sig, &[], "p -> p")).unwrap();
    let s1 = s0.apply_rule(1, &b(Rule::ImpI)).unwrap();
    let again = s0.apply_rule(1, &b(Rule::ImpI)).unwrap();
    assert_eq!(s1.structural_hash(), again.structural_hash());
    assert_ne!(s0.structural_hash(), s1.structural_hash());
    assert_eq!(s0.structural_hash().len(), 64);
}
