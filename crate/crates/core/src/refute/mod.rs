//! Countermodels for invalid conjectures, with satisfaction traces that
//! justify each verdict clause by clause.

mod eval;
mod model;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eval::{
    check_refutation, check_total, evaluate, satisfies, verify_trace, Clause, Evaluation, LabeledStep,
    RefutationVerdict, Step, TraceBundle,
};
pub use model::{
    parse_model, FiniteStructure, FunctionTable, Model, PredicateTable, Valuation, MAX_DOMAIN, MAX_FUNCTION_ARITY,
};

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum RefuteError {
    #[error("the formula contains unknowns")]
    UnknownsPresent,
    #[error("the model does not interpret {0}")]
    IncompleteModel(String),
    #[error("{0} is not bound to an element")]
    UnboundParameter(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("model syntax error at position {position}: expected {expected}")]
    ModelSyntax { position: usize, expected: String },
}

impl RefuteError {
    pub fn kind(&self) -> &'static str {
        match self {
            RefuteError::UnknownsPresent => "UnknownsPresent",
            RefuteError::IncompleteModel(_) => "IncompleteModel",
            RefuteError::UnboundParameter(_) => "UnboundParameter",
            RefuteError::InvalidModel(_) => "InvalidModel",
            RefuteError::ModelSyntax { .. } => "ModelSyntax",
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::formula::{parse_formula, Signature};
    use crate::kernel::Sequent;

    fn eval_text(f: &str, sig: &Signature, model: &str) -> Evaluation {
        let f = parse_formula(f, sig).unwrap();
        let m = parse_model(model, sig).unwrap();
        evaluate(&f, &m, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn vacuous_antecedent() {
        let sig = Signature::propositional(["p", "q"]);
        let e = eval_text("p -> q", &sig, "p=0");
        assert!(e.value);
        assert_eq!(e.trace.clause, Clause::VacuousAntecedent);
        assert_eq!(e.trace.children.len(), 1);
        assert_eq!(verify_trace(&e.trace, None), Ok(()));
    }

    #[test]
    fn universal_counterexample() {
        let sig = Signature::new().with_predicate("P", 1).unwrap();
        let e = eval_text("(forall x) P(x)", &sig, "domain = {0,1}; P = {(0)}");
        assert!(!e.value);
        assert_eq!(e.trace.clause, Clause::UniversalCounterexample);
        assert_eq!(e.trace.witness.as_deref(), Some("1"));
        assert_eq!(e.trace.children.len(), 2);
        assert_eq!(e.trace.children[1].formula, "P(x)");
        assert_eq!(e.trace.children[1].environment["x"], "1");
        assert_eq!(verify_trace(&e.trace, Some(2)), Ok(()));
        assert_eq!(verify_trace(&e.trace, Some(3)), Err(vec![]));
    }

    #[test]
    fn missing_symbols() {
        let sig = Signature::propositional(["p", "q"]);
        let f = parse_formula("p /\\ q", &sig).unwrap();
        let m = parse_model("p=1", &sig).unwrap();
        assert_eq!(
            evaluate(&f, &m, &BTreeMap::new()),
            Err(RefuteError::IncompleteModel("q".into()))
        );
        let s = Sequent::from_formulas(vec![], f);
        let short = parse_model("p=0", &sig).unwrap();
        assert_eq!(check_refutation(&s, &short), Err(RefuteError::IncompleteModel("q".into())));
    }

    #[test]
    fn refuting_a_converse() {
        let sig = Signature::propositional(["p", "q"]);
        let s = Sequent::from_formulas(
            vec![parse_formula("p -> q", &sig).unwrap()],
            parse_formula("q -> p", &sig).unwrap(),
        );
        let v = check_refutation(&s, &parse_model("p=0, q=1", &sig).unwrap()).unwrap();
        assert!(v.refutes());
        assert_eq!(v.trace().hypotheses[0].label, "h1");
        let other = check_refutation(&s, &parse_model("p=1, q=1", &sig).unwrap()).unwrap();
        assert!(matches!(other, RefutationVerdict::Fails { .. }));
    }

    #[test]
    fn identity_is_never_refuted() {
        let sig = Signature::propositional(["p"]);
        let s = Sequent::from_formulas(vec![parse_formula("p", &sig).unwrap()], parse_formula("p", &sig).unwrap());
        for m in ["p=0", "p=1"] {
            let v = check_refutation(&s, &parse_model(m, &sig).unwrap()).unwrap();
            assert!(!v.refutes());
        }
    }

    #[test]
    fn first_order_refutation() {
        let sig = Signature::new()
            .with_predicate("P", 1)
            .unwrap()
            .with_predicate("Q", 1)
            .unwrap();
        let s = Sequent::from_formulas(
            vec![parse_formula("(forall x) P(x)", &sig).unwrap()],
            parse_formula("(exists x) Q(x)", &sig).unwrap(),
        );
        let m = parse_model("domain = {0}; P = {(0)}; Q = {}", &sig).unwrap();
        let v = check_refutation(&s, &m).unwrap();
        assert!(v.refutes());
        assert_eq!(v.trace().conclusion.clause, Clause::ExistentialNone);
    }

    #[test]
    fn equality_and_functions() {
        let sig = Signature::new().with_function("f", 1).unwrap().with_constant("c").unwrap();
        let e = eval_text("(exists x) f(x) = c", &sig, "domain = {a,b}; f = {a->a, b->a}; c = b");
        assert!(!e.value);
        let e = eval_text("f(c) = f(f(c))", &sig, "domain = {a,b}; f = {a->a, b->a}; c = b");
        assert!(e.value);
        assert_eq!(e.trace.clause, Clause::Equality);
    }

    #[test]
    fn tampered_trace_is_caught() {
        let sig = Signature::propositional(["p", "q"]);
        let mut e = eval_text("p /\\ q", &sig, "p=1, q=0").trace;
        assert_eq!(e.clause, Clause::ConjunctionFalse);
        e.children[1].verdict = true;
        e.children[1].clause = Clause::Atom;
        assert_eq!(verify_trace(&e, None), Err(vec![]));
    }
}
