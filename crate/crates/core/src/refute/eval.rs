//! Satisfaction with step-by-step traces.
//!
//! Propositional connectives are evaluated left to right and stop as soon as
//! the verdict is known, so a false conjunct or a false antecedent yields a
//! single child. Quantifiers always enumerate every domain element.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::model::{FiniteStructure, Model};
use super::RefuteError;
use crate::formula::{print_formula, Formula, Param, SymbolUse, Term};
use crate::kernel::Sequent;

/// The satisfaction clause a step appeals to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Atom,
    Equality,
    Bottom,
    Negation,
    ConjunctionTrue,
    ConjunctionFalse,
    DisjunctionTrue,
    DisjunctionFalse,
    VacuousAntecedent,
    TrueConsequent,
    FalsifiedConditional,
    BiconditionalAgree,
    BiconditionalDisagree,
    UniversalHolds,
    UniversalCounterexample,
    ExistentialWitness,
    ExistentialNone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub formula: String,
    /// Bound variables and parameters in scope, with the elements they denote.
    pub environment: BTreeMap<String, String>,
    pub verdict: bool,
    pub clause: Clause,
    /// Element exhibited by a counterexample or witness clause.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Step>,
}

impl Step {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Step::size).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: bool,
    pub trace: Step,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledStep {
    pub label: String,
    pub step: Step,
}

/// Traces for every hypothesis and the conclusion of a sequent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceBundle {
    pub hypotheses: Vec<LabeledStep>,
    pub conclusion: Step,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RefutationVerdict {
    Refutes { trace: TraceBundle },
    Fails { reason: String, trace: TraceBundle },
}

impl RefutationVerdict {
    pub fn refutes(&self) -> bool {
        matches!(self, RefutationVerdict::Refutes { .. })
    }

    pub fn trace(&self) -> &TraceBundle {
        match self {
            RefutationVerdict::Refutes { trace } | RefutationVerdict::Fails { trace, .. } => trace,
        }
    }
}

struct Evaluator<'a> {
    model: &'a Model,
    params: &'a BTreeMap<Param, usize>,
    /// Bound variables, innermost last.
    vars: Vec<(String, usize)>,
    tracing: bool,
}

impl<'a> Evaluator<'a> {
    fn structure(&self, symbol: &str) -> Result<&'a FiniteStructure, RefuteError> {
        match self.model {
            Model::Structure(s) => Ok(s),
            Model::Valuation(_) => Err(RefuteError::IncompleteModel(symbol.to_string())),
        }
    }

    fn name(&self, e: usize) -> String {
        match self.model {
            Model::Structure(s) => s.domain[e].clone(),
            Model::Valuation(_) => e.to_string(),
        }
    }

    fn term(&self, t: &Term) -> Result<usize, RefuteError> {
        match t {
            Term::Var(x) => self
                .vars
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, e)| *e)
                .ok_or_else(|| RefuteError::UnboundParameter(x.clone())),
            Term::Param(p) => self
                .params
                .get(p)
                .copied()
                .ok_or_else(|| RefuteError::UnboundParameter(p.to_string())),
            Term::Unknown(_) => Err(RefuteError::UnknownsPresent),
            Term::Const(c) => {
                let s = self.structure(c)?;
                if let Some(&e) = s.constants.get(c) {
                    return Ok(e);
                }
                match s.functions.get(c) {
                    Some(f) if f.arity == 0 => f.table.get(&Vec::new()).copied(),
                    _ => None,
                }
                .ok_or_else(|| RefuteError::IncompleteModel(c.clone()))
            }
            Term::App(f, args) => {
                let s = self.structure(f)?;
                let table = s.functions.get(f).ok_or_else(|| RefuteError::IncompleteModel(f.clone()))?;
                if table.arity != args.len() {
                    return Err(RefuteError::InvalidModel(format!(
                        "{f} is interpreted with arity {}, used with {}",
                        table.arity,
                        args.len()
                    )));
                }
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                table.table.get(&vals).copied().ok_or_else(|| RefuteError::IncompleteModel(f.clone()))
            }
        }
    }

    fn environment(&self) -> BTreeMap<String, String> {
        let mut env: BTreeMap<String, String> = self.params.iter().map(|(p, &e)| (p.to_string(), self.name(e))).collect();
        for (x, e) in &self.vars {
            env.insert(x.clone(), self.name(*e));
        }
        env
    }

    fn step(&self, f: &Formula, verdict: bool, clause: Clause, witness: Option<usize>, children: Vec<Step>) -> Step {
        if !self.tracing {
            return Step {
                formula: String::new(),
                environment: BTreeMap::new(),
                verdict,
                clause,
                witness: None,
                children: Vec::new(),
            };
        }
        Step {
            formula: print_formula(f),
            environment: self.environment(),
            verdict,
            clause,
            witness: witness.map(|e| self.name(e)),
            children,
        }
    }

    fn atom(&self, p: &str, args: &[Term]) -> Result<bool, RefuteError> {
        match self.model {
            Model::Valuation(v) => {
                if !args.is_empty() {
                    return Err(RefuteError::IncompleteModel(p.to_string()));
                }
                v.get(p).ok_or_else(|| RefuteError::IncompleteModel(p.to_string()))
            }
            Model::Structure(s) => {
                let table = s.predicates.get(p).ok_or_else(|| RefuteError::IncompleteModel(p.to_string()))?;
                if table.arity != args.len() {
                    return Err(RefuteError::InvalidModel(format!(
                        "{p} is interpreted with arity {}, used with {}",
                        table.arity,
                        args.len()
                    )));
                }
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(table.tuples.contains(&vals))
            }
        }
    }

    fn eval(&mut self, f: &Formula) -> Result<Step, RefuteError> {
        Ok(match f {
            Formula::Pred(p, args) => {
                let v = self.atom(p, args)?;
                self.step(f, v, Clause::Atom, None, vec![])
            }
            Formula::Eq(s, t) => {
                self.structure("=")?;
                let v = self.term(s)? == self.term(t)?;
                self.step(f, v, Clause::Equality, None, vec![])
            }
            Formula::Bottom => self.step(f, false, Clause::Bottom, None, vec![]),
            Formula::Not(a) => {
                let c = self.eval(a)?;
                self.step(f, !c.verdict, Clause::Negation, None, vec![c])
            }
            Formula::And(a, b) => {
                let l = self.eval(a)?;
                if !l.verdict {
                    return Ok(self.step(f, false, Clause::ConjunctionFalse, None, vec![l]));
                }
                let r = self.eval(b)?;
                let (v, clause) = if r.verdict {
                    (true, Clause::ConjunctionTrue)
                } else {
                    (false, Clause::ConjunctionFalse)
                };
                self.step(f, v, clause, None, vec![l, r])
            }
            Formula::Or(a, b) => {
                let l = self.eval(a)?;
                if l.verdict {
                    return Ok(self.step(f, true, Clause::DisjunctionTrue, None, vec![l]));
                }
                let r = self.eval(b)?;
                let (v, clause) = if r.verdict {
                    (true, Clause::DisjunctionTrue)
                } else {
                    (false, Clause::DisjunctionFalse)
                };
                self.step(f, v, clause, None, vec![l, r])
            }
            Formula::Implies(a, b) => {
                let l = self.eval(a)?;
                if !l.verdict {
                    return Ok(self.step(f, true, Clause::VacuousAntecedent, None, vec![l]));
                }
                let r = self.eval(b)?;
                let (v, clause) = if r.verdict {
                    (true, Clause::TrueConsequent)
                } else {
                    (false, Clause::FalsifiedConditional)
                };
                self.step(f, v, clause, None, vec![l, r])
            }
            Formula::Iff(a, b) => {
                let l = self.eval(a)?;
                let r = self.eval(b)?;
                let (v, clause) = if l.verdict == r.verdict {
                    (true, Clause::BiconditionalAgree)
                } else {
                    (false, Clause::BiconditionalDisagree)
                };
                self.step(f, v, clause, None, vec![l, r])
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let n = match self.model {
                    Model::Structure(s) => s.size(),
                    Model::Valuation(_) => {
                        return Err(RefuteError::InvalidModel(
                            "quantified formulas need a finite structure".into(),
                        ))
                    }
                };
                let mut children = Vec::new();
                let mut decisive = None;
                for e in 0..n {
                    self.vars.push((x.clone(), e));
                    let c = self.eval(body);
                    self.vars.pop();
                    let c = c?;
                    if decisive.is_none() && c.verdict != universal {
                        decisive = Some(e);
                        if !self.tracing {
                            break;
                        }
                    }
                    children.push(c);
                }
                let (v, clause) = match (universal, decisive) {
                    (true, None) => (true, Clause::UniversalHolds),
                    (true, Some(_)) => (false, Clause::UniversalCounterexample),
                    (false, None) => (false, Clause::ExistentialNone),
                    (false, Some(_)) => (true, Clause::ExistentialWitness),
                };
                self.step(f, v, clause, decisive, children)
            }
        })
    }
}

/// Evaluates `f` in `model`, with `env` giving the elements its parameters denote.
pub fn evaluate(f: &Formula, model: &Model, env: &BTreeMap<Param, usize>) -> Result<Evaluation, RefuteError> {
    let mut ev = Evaluator {
        model,
        params: env,
        vars: Vec::new(),
        tracing: true,
    };
    let trace = ev.eval(f)?;
    Ok(Evaluation {
        value: trace.verdict,
        trace,
    })
}

/// Truth value only, without building a trace.
pub fn satisfies(f: &Formula, model: &Model, env: &BTreeMap<Param, usize>) -> Result<bool, RefuteError> {
    let mut ev = Evaluator {
        model,
        params: env,
        vars: Vec::new(),
        tracing: false,
    };
    Ok(ev.eval(f)?.verdict)
}

/// Fails with `IncompleteModel` unless every symbol of `s` is interpreted.
pub fn check_total(s: &Sequent, model: &Model) -> Result<(), RefuteError> {
    let mut used = SymbolUse::default();
    for f in s.formulas() {
        f.collect_symbols(&mut used);
    }
    match model {
        Model::Valuation(v) => {
            if let Some((p, _)) = used.predicates.iter().find(|(p, k)| *k > 0 || v.get(p).is_none()) {
                return Err(RefuteError::IncompleteModel(p.clone()));
            }
            if let Some((f, _)) = used.functions.iter().next() {
                return Err(RefuteError::IncompleteModel(f.clone()));
            }
            if let Some(c) = used.constants.iter().next() {
                return Err(RefuteError::IncompleteModel(c.clone()));
            }
            if used.uses_equality || s.has_quantifiers() {
                return Err(RefuteError::InvalidModel(
                    "equality and quantifiers need a finite structure".into(),
                ));
            }
        }
        Model::Structure(st) => {
            for (p, k) in &used.predicates {
                match st.predicates.get(p) {
                    None => return Err(RefuteError::IncompleteModel(p.clone())),
                    Some(t) if t.arity != *k => {
                        return Err(RefuteError::InvalidModel(format!("{p} is interpreted with arity {}", t.arity)))
                    }
                    _ => {}
                }
            }
            for (f, k) in &used.functions {
                let ok = match st.functions.get(f) {
                    Some(t) => t.arity == *k,
                    None => *k == 0 && st.constants.contains_key(f),
                };
                if !ok {
                    return Err(RefuteError::IncompleteModel(f.clone()));
                }
            }
            for c in &used.constants {
                if !st.constants.contains_key(c) {
                    return Err(RefuteError::IncompleteModel(c.clone()));
                }
            }
        }
    }
    Ok(())
}

/// Decides whether `model` refutes `claimed`: every hypothesis true and the conclusion false.
pub fn check_refutation(claimed: &Sequent, model: &Model) -> Result<RefutationVerdict, RefuteError> {
    model.validate()?;
    check_total(claimed, model)?;
    let env = BTreeMap::new();
    let mut hypotheses = Vec::new();
    let mut failure = None;
    for h in &claimed.hypotheses {
        let e = evaluate(&h.formula, model, &env)?;
        if !e.value && failure.is_none() {
            failure = Some(format!("hypothesis {} is false in the model", h.label));
        }
        hypotheses.push(LabeledStep {
            label: h.label.clone(),
            step: e.trace,
        });
    }
    let conclusion = evaluate(&claimed.conclusion, model, &env)?;
    if conclusion.value && failure.is_none() {
        failure = Some("the conclusion is true in the model".to_string());
    }
    let trace = TraceBundle {
        hypotheses,
        conclusion: conclusion.trace,
    };
    Ok(match failure {
        None => RefutationVerdict::Refutes { trace },
        Some(reason) => RefutationVerdict::Fails { reason, trace },
    })
}

/// Replays a trace: every step's verdict must follow from its children by its
/// clause. With `domain_size`, quantifier steps must enumerate exactly that many
/// elements. Returns the path of the first inconsistent step.
pub fn verify_trace(step: &Step, domain_size: Option<usize>) -> Result<(), Vec<usize>> {
    fn go(s: &Step, n: Option<usize>, path: &mut Vec<usize>) -> Result<(), Vec<usize>> {
        let v: Vec<bool> = s.children.iter().map(|c| c.verdict).collect();
        let ok = match s.clause {
            Clause::Atom | Clause::Equality => v.is_empty(),
            Clause::Bottom => v.is_empty() && !s.verdict,
            Clause::Negation => v.len() == 1 && s.verdict == !v[0],
            Clause::ConjunctionTrue => v == [true, true] && s.verdict,
            Clause::ConjunctionFalse => (v == [false] || v == [true, false]) && !s.verdict,
            Clause::DisjunctionTrue => (v == [true] || v == [false, true]) && s.verdict,
            Clause::DisjunctionFalse => v == [false, false] && !s.verdict,
            Clause::VacuousAntecedent => v == [false] && s.verdict,
            Clause::TrueConsequent => v == [true, true] && s.verdict,
            Clause::FalsifiedConditional => v == [true, false] && !s.verdict,
            Clause::BiconditionalAgree => v.len() == 2 && v[0] == v[1] && s.verdict,
            Clause::BiconditionalDisagree => v.len() == 2 && v[0] != v[1] && !s.verdict,
            Clause::UniversalHolds => !v.is_empty() && v.iter().all(|&b| b) && s.verdict,
            Clause::UniversalCounterexample => v.iter().any(|&b| !b) && s.witness.is_some() && !s.verdict,
            Clause::ExistentialWitness => v.iter().any(|&b| b) && s.witness.is_some() && s.verdict,
            Clause::ExistentialNone => !v.is_empty() && v.iter().all(|&b| !b) && !s.verdict,
        };
        let quantifier = matches!(
            s.clause,
            Clause::UniversalHolds | Clause::UniversalCounterexample | Clause::ExistentialWitness | Clause::ExistentialNone
        );
        if !ok || (quantifier && n.is_some_and(|n| n != v.len())) {
            return Err(path.clone());
        }
        for (i, c) in s.children.iter().enumerate() {
            path.push(i);
            go(c, n, path)?;
            path.pop();
        }
        Ok(())
    }
    go(step, domain_size, &mut Vec::new())
}
