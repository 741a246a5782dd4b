//! Rule application. Every rule validates its inputs before touching the
//! state, so a failed application leaves the state unchanged.
//!
//! Backward eliminations take their major premise as a formula argument:
//! `or_elim A \/ B`, `impl_elim A -> C`, `not_elim ~A` (goal `false`),
//! `and_elim1 C /\ B`, `and_elim2 A /\ C`, `iff_elim1 A <-> C`,
//! `iff_elim2 C <-> B`, `forall_elim (forall x) A` (witness found by matching),
//! `exists_elim (exists x) A [param]`.

use std::collections::BTreeSet;

use super::state::{GoalRecord, Node, Premise, ProofState, Solution};
use super::{ArgInput, Direction, GoalId, Hypothesis, KernelError, Rule, RuleArg, RuleInstance, RuleSchema};
use crate::definitions::{DefinitionSet, RewriteDirection};
use crate::formula::{
    alpha_equal, free_symbols, instantiate, match_instance, replace_term_at, subterm_at, term_free_symbols, Formula,
    Param, Path, Term,
};

/// A premise of a planned inference.
enum Prem {
    Hyp(String),
    /// A new goal under the current hypotheses plus `suppose`.
    New { suppose: Vec<Formula>, conclusion: Formula },
}

fn new(conclusion: Formula) -> Prem {
    Prem::New {
        suppose: Vec::new(),
        conclusion,
    }
}

fn supposing(s: Formula, conclusion: Formula) -> Prem {
    Prem::New {
        suppose: vec![s],
        conclusion,
    }
}

/// A term argument, or a fresh unknown to be created on commit.
enum Witness {
    Term(Term),
    Fresh,
}

/// Where a definitional rewrite applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RewriteTarget {
    Conclusion,
    Hypothesis(String),
}

fn mismatch(rule: Rule, reason: impl Into<String>) -> KernelError {
    KernelError::RuleShapeMismatch {
        rule,
        reason: reason.into(),
    }
}

fn missing(rule: Rule, what: &str) -> KernelError {
    KernelError::ArgumentMissing {
        rule,
        what: what.to_string(),
    }
}

fn bad(rule: Rule, reason: impl Into<String>) -> KernelError {
    KernelError::BadArgument {
        rule,
        reason: reason.into(),
    }
}

impl ProofState {
    /// Applies a rule to an open goal, returning the successor state.
    pub fn apply_rule(&self, goal: GoalId, inst: &RuleInstance) -> Result<ProofState, KernelError> {
        let mut s = self.clone();
        s.apply_rule_mut(goal, inst)?;
        Ok(s)
    }

    /// In-place variant of [`apply_rule`](Self::apply_rule); returns the new
    /// goals. On error the state is untouched.
    pub fn apply_rule_mut(&mut self, goal: GoalId, inst: &RuleInstance) -> Result<Vec<GoalId>, KernelError> {
        let g = self.open_goal(goal)?.clone();
        match inst.direction {
            Direction::Backward => self.backward(goal, &g, inst),
            Direction::Forward => {
                let label = inst
                    .hypothesis
                    .clone()
                    .ok_or_else(|| missing(inst.rule, "a hypothesis label"))?;
                if !g.hyps.contains(&label) {
                    return Err(KernelError::NoSuchHypothesis(label));
                }
                self.forward(goal, &g, &label, inst)
            }
        }
    }

    // Argument helpers.

    fn check_term_arg(&self, g: &GoalRecord, rule: Rule, t: &Term) -> Result<(), KernelError> {
        self.signature.check_term(t).map_err(|e| bad(rule, e.to_string()))?;
        if !t.is_closed() {
            return Err(bad(rule, format!("`{t}` has free variables")));
        }
        let fs = term_free_symbols(t);
        if let Some(p) = fs.parameters.iter().find(|p| !g.params.contains(p)) {
            return Err(KernelError::ParameterOutOfScope(p.clone()));
        }
        self.check_unknowns_visible(g, &fs.unknowns)
    }

    fn check_formula_arg(&self, g: &GoalRecord, rule: Rule, f: &Formula) -> Result<(), KernelError> {
        self.signature.check_formula(f).map_err(|e| bad(rule, e.to_string()))?;
        if !f.is_closed() {
            return Err(bad(rule, format!("`{f}` has free variables")));
        }
        let fs = free_symbols(f);
        if let Some(p) = fs.parameters.iter().find(|p| !g.params.contains(p)) {
            return Err(KernelError::ParameterOutOfScope(p.clone()));
        }
        self.check_unknowns_visible(g, &fs.unknowns)
    }

    /// Existing unknowns may only be mentioned where they already occur.
    fn check_unknowns_visible(&self, g: &GoalRecord, unknowns: &BTreeSet<u32>) -> Result<(), KernelError> {
        if unknowns.is_empty() {
            return Ok(());
        }
        let mut visible = free_symbols(&g.conclusion).unknowns;
        for l in &g.hyps {
            visible.extend(free_symbols(self.goal_formula_of(l)).unknowns);
        }
        match unknowns.iter().find(|n| !visible.contains(n)) {
            Some(n) => Err(KernelError::NoSuchUnknown(*n)),
            None => Ok(()),
        }
    }

    fn formula_arg(&self, g: &GoalRecord, inst: &RuleInstance, i: usize, what: &str) -> Result<Formula, KernelError> {
        match inst.args.get(i) {
            Some(ArgInput::Formula(f)) => {
                self.check_formula_arg(g, inst.rule, f)?;
                Ok(f.clone())
            }
            Some(other) => Err(bad(inst.rule, format!("expected {what}, found `{other}`"))),
            None => Err(missing(inst.rule, what)),
        }
    }

    fn witness_arg(&self, g: &GoalRecord, inst: &RuleInstance, i: usize) -> Result<Witness, KernelError> {
        match inst.args.get(i) {
            Some(ArgInput::Term(t)) => {
                self.check_term_arg(g, inst.rule, t)?;
                Ok(Witness::Term(t.clone()))
            }
            Some(ArgInput::NewUnknown) => Ok(Witness::Fresh),
            Some(other) => Err(bad(inst.rule, format!("expected a witness term, found `{other}`"))),
            None => Err(missing(inst.rule, "a witness term (or `?`)")),
        }
    }

    /// The eigenvariable for ForallI / ExistsE: nominated or fresh.
    fn eigen_arg(&self, g: &GoalRecord, inst: &RuleInstance, i: usize, binder: &str) -> Result<Param, KernelError> {
        if self.goal_has_unknowns(g) {
            return Err(KernelError::EigenvariableViolation(
                "the goal still contains unresolved unknowns".into(),
            ));
        }
        match inst.args.get(i) {
            None => Ok(self.fresh_param(binder)),
            Some(ArgInput::Term(Term::Param(p))) => {
                if self.params.contains(p) {
                    Err(KernelError::EigenvariableViolation(format!("{p} is already in use")))
                } else if self.signature.kind(&p.to_string()).is_some() {
                    Err(KernelError::EigenvariableViolation(format!("{p} is a declared symbol")))
                } else {
                    Ok(p.clone())
                }
            }
            Some(ArgInput::Term(t)) => Err(KernelError::EigenvariableViolation(format!(
                "`{t}` is a specific object, not a fresh parameter"
            ))),
            Some(other) => Err(bad(inst.rule, format!("expected a parameter, found `{other}`"))),
        }
    }

    fn no_extra_args(inst: &RuleInstance, allowed: usize) -> Result<(), KernelError> {
        if inst.args.len() > allowed {
            return Err(bad(inst.rule, format!("unexpected argument `{}`", inst.args[allowed])));
        }
        Ok(())
    }

    fn equation_arg(&self, g: &GoalRecord, inst: &RuleInstance) -> Result<(String, Term, Term, Path), KernelError> {
        let label = match inst.args.first() {
            Some(ArgInput::Label(l)) => l.clone(),
            Some(ArgInput::Term(Term::Const(l))) => l.clone(),
            Some(other) => return Err(bad(inst.rule, format!("expected an equation label, found `{other}`"))),
            None => return Err(missing(inst.rule, "an equation label")),
        };
        if !g.hyps.contains(&label) {
            return Err(KernelError::NoSuchHypothesis(label));
        }
        let (s, t) = match self.goal_formula_of(&label) {
            Formula::Eq(s, t) => (s.clone(), t.clone()),
            _ => return Err(mismatch(inst.rule, format!("`{label}` is not an equation"))),
        };
        let path = match inst.args.get(1) {
            Some(ArgInput::Path(p)) => p.clone(),
            Some(other) => return Err(bad(inst.rule, format!("expected a position, found `{other}`"))),
            None => return Err(missing(inst.rule, "a term position")),
        };
        Ok((label, s, t, path))
    }

    fn resolve_witness(&mut self, g: &GoalRecord, w: Witness) -> Term {
        match w {
            Witness::Term(t) => t,
            Witness::Fresh => Term::Unknown(self.new_unknown(g.params.clone())),
        }
    }

    // Commit helpers.

    fn check_progress(&self, g: &GoalRecord, prems: &[Prem]) -> Result<(), KernelError> {
        for p in prems {
            if let Prem::New { suppose, conclusion } = p {
                if suppose.is_empty() && alpha_equal(conclusion, &g.conclusion) {
                    return Err(KernelError::NoProgress);
                }
            }
        }
        Ok(())
    }

    fn materialize(
        &mut self,
        goal: GoalId,
        g: &GoalRecord,
        prems: Vec<Prem>,
        extra_params: &[Param],
    ) -> (Vec<Premise>, Vec<Hypothesis>, Vec<GoalId>) {
        let mut params = g.params.clone();
        for p in extra_params {
            params.insert(p.clone());
            self.params.insert(p.clone());
        }
        let mut premises = Vec::new();
        let mut discharged = Vec::new();
        let mut children = Vec::new();
        for p in prems {
            match p {
                Prem::Hyp(l) => premises.push(Premise::Hyp(l)),
                Prem::New { suppose, conclusion } => {
                    let mut hyps = g.hyps.clone();
                    for s in suppose {
                        let label = self.add_supposition(s.clone());
                        hyps.push(label.clone());
                        discharged.push(Hypothesis { label, formula: s });
                    }
                    let child = self.spawn(goal, hyps, conclusion, params.clone());
                    premises.push(Premise::Goal(child));
                    children.push(child);
                }
            }
        }
        (premises, discharged, children)
    }

    /// Closes `goal` by an inference concluding its conclusion.
    fn close_with(
        &mut self,
        goal: GoalId,
        g: &GoalRecord,
        rule: Rule,
        args: Vec<RuleArg>,
        prems: Vec<Prem>,
        extra_params: &[Param],
    ) -> Result<Vec<GoalId>, KernelError> {
        self.check_progress(g, &prems)?;
        let (premises, discharged, children) = self.materialize(goal, g, prems, extra_params);
        let node = self.add_node(Node {
            formula: g.conclusion.clone(),
            rule,
            args,
            premises,
            discharged,
        });
        self.solve(goal, Solution::Node(node), &children);
        Ok(children)
    }

    /// Adds a derived hypothesis and continues in a successor goal.
    fn derive(
        &mut self,
        goal: GoalId,
        g: &GoalRecord,
        formula: Formula,
        rule: Rule,
        args: Vec<RuleArg>,
        prems: Vec<Prem>,
    ) -> Result<Vec<GoalId>, KernelError> {
        self.check_progress(g, &prems)?;
        let (premises, discharged, mut children) = self.materialize(goal, g, prems, &[]);
        let label = self.add_derived(Node {
            formula,
            rule,
            args,
            premises,
            discharged,
        });
        let mut hyps = g.hyps.clone();
        hyps.push(label);
        let succ = self.spawn(goal, hyps, g.conclusion.clone(), g.params.clone());
        children.push(succ);
        self.solve(goal, Solution::Goal(succ), &children);
        Ok(children)
    }

    fn assumption(&mut self, goal: GoalId, g: &GoalRecord, label: Option<&str>) -> Result<Vec<GoalId>, KernelError> {
        let label = match label {
            Some(l) => {
                if !g.hyps.iter().any(|h| h == l) {
                    return Err(KernelError::NoSuchHypothesis(l.to_string()));
                }
                if !alpha_equal(self.goal_formula_of(l), &g.conclusion) {
                    return Err(mismatch(Rule::Assumption, format!("`{l}` is not the goal")));
                }
                l.to_string()
            }
            None => self
                .find_hyp(g, &g.conclusion)
                .ok_or_else(|| mismatch(Rule::Assumption, "no hypothesis matches the goal"))?,
        };
        self.solve(goal, Solution::Hyp(label), &[]);
        Ok(Vec::new())
    }

    fn backward(&mut self, goal: GoalId, g: &GoalRecord, inst: &RuleInstance) -> Result<Vec<GoalId>, KernelError> {
        let rule = inst.rule;
        let c = g.conclusion.clone();
        let shape = |what: &str| mismatch(rule, format!("the goal is not {what}"));
        match rule {
            Rule::Assumption => {
                Self::no_extra_args(inst, 1)?;
                let label = match inst.args.first() {
                    Some(ArgInput::Label(l)) => Some(l.clone()),
                    Some(ArgInput::Term(Term::Const(l))) => Some(l.clone()),
                    Some(other) => return Err(bad(rule, format!("expected a label, found `{other}`"))),
                    None => None,
                };
                self.assumption(goal, g, label.as_deref())
            }
            Rule::AndI => {
                Self::no_extra_args(inst, 0)?;
                let Formula::And(a, b) = c else { return Err(shape("a conjunction")) };
                self.close_with(goal, g, rule, vec![], vec![new(*a), new(*b)], &[])
            }
            Rule::OrI1 | Rule::OrI2 => {
                Self::no_extra_args(inst, 0)?;
                let Formula::Or(a, b) = c else { return Err(shape("a disjunction")) };
                let side = if rule == Rule::OrI1 { *a } else { *b };
                self.close_with(goal, g, rule, vec![], vec![new(side)], &[])
            }
            Rule::ImpI => {
                Self::no_extra_args(inst, 0)?;
                let Formula::Implies(a, b) = c else { return Err(shape("a conditional")) };
                self.close_with(goal, g, rule, vec![], vec![supposing(*a, *b)], &[])
            }
            Rule::IffI => {
                Self::no_extra_args(inst, 0)?;
                let Formula::Iff(a, b) = c else { return Err(shape("a biconditional")) };
                let ab = Formula::implies((*a).clone(), (*b).clone());
                let ba = Formula::implies(*b, *a);
                self.close_with(goal, g, rule, vec![], vec![new(ab), new(ba)], &[])
            }
            Rule::NotI => {
                Self::no_extra_args(inst, 0)?;
                let Formula::Not(a) = c else { return Err(shape("a negation")) };
                self.close_with(goal, g, rule, vec![], vec![supposing(*a, Formula::Bottom)], &[])
            }
            Rule::Raa => {
                Self::no_extra_args(inst, 0)?;
                self.close_with(goal, g, rule, vec![], vec![supposing(Formula::not(c), Formula::Bottom)], &[])
            }
            Rule::BottomE => {
                Self::no_extra_args(inst, 0)?;
                self.close_with(goal, g, rule, vec![], vec![new(Formula::Bottom)], &[])
            }
            Rule::EqualityRefl => {
                Self::no_extra_args(inst, 0)?;
                match &c {
                    Formula::Eq(s, t) if s == t => self.close_with(goal, g, rule, vec![], vec![], &[]),
                    _ => Err(shape("of the form `t = t`")),
                }
            }
            Rule::ForallI => {
                Self::no_extra_args(inst, 1)?;
                let Formula::Forall(x, body) = &c else { return Err(shape("universally quantified")) };
                let p = self.eigen_arg(g, inst, 0, x)?;
                let child = instantiate(body, x, &Term::Param(p.clone()));
                self.close_with(goal, g, rule, vec![RuleArg::Term(Term::Param(p.clone()))], vec![new(child)], &[p])
            }
            Rule::ExistsI => {
                Self::no_extra_args(inst, 1)?;
                let Formula::Exists(x, body) = &c else { return Err(shape("existentially quantified")) };
                let w = self.witness_arg(g, inst, 0)?;
                let t = self.resolve_witness(g, w);
                let child = instantiate(body, x, &t);
                self.close_with(goal, g, rule, vec![RuleArg::Term(t)], vec![new(child)], &[])
            }
            Rule::AndE1 | Rule::AndE2 => {
                Self::no_extra_args(inst, 1)?;
                let major = self.formula_arg(g, inst, 0, "the conjunction")?;
                let Formula::And(a, b) = &major else {
                    return Err(mismatch(rule, "the argument is not a conjunction"));
                };
                let side = if rule == Rule::AndE1 { a } else { b };
                if !alpha_equal(side, &c) {
                    return Err(mismatch(rule, "the selected conjunct is not the goal"));
                }
                self.close_with(goal, g, rule, vec![], vec![new(major)], &[])
            }
            Rule::OrE => {
                Self::no_extra_args(inst, 1)?;
                let major = self.formula_arg(g, inst, 0, "the disjunction")?;
                let Formula::Or(a, b) = &major else {
                    return Err(mismatch(rule, "the argument is not a disjunction"));
                };
                let prems = vec![
                    new(major.clone()),
                    supposing((**a).clone(), c.clone()),
                    supposing((**b).clone(), c.clone()),
                ];
                self.close_with(goal, g, rule, vec![], prems, &[])
            }
            Rule::ImpE => {
                Self::no_extra_args(inst, 1)?;
                let major = self.formula_arg(g, inst, 0, "the conditional")?;
                let Formula::Implies(a, b) = &major else {
                    return Err(mismatch(rule, "the argument is not a conditional"));
                };
                if !alpha_equal(b, &c) {
                    return Err(mismatch(rule, "the consequent is not the goal"));
                }
                let a = (**a).clone();
                self.close_with(goal, g, rule, vec![], vec![new(major), new(a)], &[])
            }
            Rule::IffE1 | Rule::IffE2 => {
                Self::no_extra_args(inst, 1)?;
                let major = self.formula_arg(g, inst, 0, "the biconditional")?;
                let Formula::Iff(a, b) = &major else {
                    return Err(mismatch(rule, "the argument is not a biconditional"));
                };
                let (from, to) = if rule == Rule::IffE1 { (a, b) } else { (b, a) };
                if !alpha_equal(to, &c) {
                    return Err(mismatch(rule, "the biconditional does not yield the goal"));
                }
                let from = (**from).clone();
                self.close_with(goal, g, rule, vec![], vec![new(major), new(from)], &[])
            }
            Rule::NotE => {
                Self::no_extra_args(inst, 1)?;
                if !c.is_bottom() {
                    return Err(shape("`false`"));
                }
                let major = self.formula_arg(g, inst, 0, "the negation")?;
                let Formula::Not(a) = &major else {
                    return Err(mismatch(rule, "the argument is not a negation"));
                };
                let a = (**a).clone();
                self.close_with(goal, g, rule, vec![], vec![new(major), new(a)], &[])
            }
            Rule::ForallE => {
                Self::no_extra_args(inst, 2)?;
                let major = self.formula_arg(g, inst, 0, "the universal formula")?;
                let Formula::Forall(x, body) = &major else {
                    return Err(mismatch(rule, "the argument is not universally quantified"));
                };
                let t = match match_instance(body, x, &c) {
                    None => return Err(mismatch(rule, "the goal is not an instance of the argument")),
                    Some(Some(t)) => Some(t),
                    Some(None) => match inst.args.get(1) {
                        Some(ArgInput::Term(t)) => {
                            self.check_term_arg(g, rule, t)?;
                            Some(t.clone())
                        }
                        _ => None,
                    },
                };
                let args = t.into_iter().map(RuleArg::Term).collect();
                self.close_with(goal, g, rule, args, vec![new(major)], &[])
            }
            Rule::ExistsE => {
                Self::no_extra_args(inst, 2)?;
                let major = self.formula_arg(g, inst, 0, "the existential formula")?;
                let Formula::Exists(x, body) = &major else {
                    return Err(mismatch(rule, "the argument is not existentially quantified"));
                };
                let p = self.eigen_arg(g, inst, 1, x)?;
                let inst_body = instantiate(body, x, &Term::Param(p.clone()));
                let prems = vec![new(major.clone()), supposing(inst_body, c.clone())];
                self.close_with(goal, g, rule, vec![RuleArg::Term(Term::Param(p.clone()))], prems, &[p])
            }
            Rule::EqualityRewrite => {
                Self::no_extra_args(inst, 2)?;
                let (label, s, t, path) = self.equation_arg(g, inst)?;
                match subterm_at(&c, &path) {
                    Some(found) if *found == t => {}
                    _ => return Err(mismatch(rule, format!("the goal has no `{t}` at {path}"))),
                }
                let child = replace_term_at(&c, &path.0, &s).ok_or_else(|| mismatch(rule, "bad position"))?;
                self.close_with(goal, g, rule, vec![RuleArg::Path(path)], vec![Prem::Hyp(label), new(child)], &[])
            }
            Rule::Definition | Rule::Supposition => Err(mismatch(rule, "not a user rule")),
        }
    }

    fn forward(
        &mut self,
        goal: GoalId,
        g: &GoalRecord,
        label: &str,
        inst: &RuleInstance,
    ) -> Result<Vec<GoalId>, KernelError> {
        let rule = inst.rule;
        let h = self.goal_formula_of(label).clone();
        let c = g.conclusion.clone();
        let major = || Prem::Hyp(label.to_string());
        let shape = |what: &str| mismatch(rule, format!("`{label}` is not {what}"));
        match rule {
            Rule::Assumption => {
                Self::no_extra_args(inst, 0)?;
                self.assumption(goal, g, Some(label))
            }
            Rule::AndE1 | Rule::AndE2 => {
                Self::no_extra_args(inst, 0)?;
                let Formula::And(a, b) = h else { return Err(shape("a conjunction")) };
                let out = if rule == Rule::AndE1 { *a } else { *b };
                self.derive(goal, g, out, rule, vec![], vec![major()])
            }
            Rule::OrE => {
                Self::no_extra_args(inst, 0)?;
                let Formula::Or(a, b) = h else { return Err(shape("a disjunction")) };
                let prems = vec![major(), supposing(*a, c.clone()), supposing(*b, c.clone())];
                self.close_with(goal, g, rule, vec![], prems, &[])
            }
            Rule::ImpE => {
                Self::no_extra_args(inst, 0)?;
                let Formula::Implies(a, b) = h else { return Err(shape("a conditional")) };
                self.derive(goal, g, *b, rule, vec![], vec![major(), new(*a)])
            }
            Rule::IffE1 | Rule::IffE2 => {
                Self::no_extra_args(inst, 0)?;
                let Formula::Iff(a, b) = h else { return Err(shape("a biconditional")) };
                let (from, to) = if rule == Rule::IffE1 { (*a, *b) } else { (*b, *a) };
                self.derive(goal, g, to, rule, vec![], vec![major(), new(from)])
            }
            Rule::NotE => {
                Self::no_extra_args(inst, 0)?;
                let Formula::Not(a) = h else { return Err(shape("a negation")) };
                if c.is_bottom() {
                    self.close_with(goal, g, rule, vec![], vec![major(), new(*a)], &[])
                } else {
                    self.derive(goal, g, Formula::Bottom, rule, vec![], vec![major(), new(*a)])
                }
            }
            Rule::BottomE => {
                Self::no_extra_args(inst, 0)?;
                if !h.is_bottom() {
                    return Err(shape("`false`"));
                }
                self.close_with(goal, g, rule, vec![], vec![major()], &[])
            }
            Rule::ForallE => {
                Self::no_extra_args(inst, 1)?;
                let Formula::Forall(x, body) = &h else { return Err(shape("universally quantified")) };
                let w = self.witness_arg(g, inst, 0)?;
                let t = self.resolve_witness(g, w);
                let out = instantiate(body, x, &t);
                self.derive(goal, g, out, rule, vec![RuleArg::Term(t)], vec![major()])
            }
            Rule::ExistsE => {
                Self::no_extra_args(inst, 1)?;
                let Formula::Exists(x, body) = &h else { return Err(shape("existentially quantified")) };
                let p = self.eigen_arg(g, inst, 0, x)?;
                let inst_body = instantiate(body, x, &Term::Param(p.clone()));
                let prems = vec![major(), supposing(inst_body, c.clone())];
                self.close_with(goal, g, rule, vec![RuleArg::Term(Term::Param(p.clone()))], prems, &[p])
            }
            Rule::EqualityRewrite => {
                Self::no_extra_args(inst, 2)?;
                let (eq, s, t, path) = self.equation_arg(g, inst)?;
                match subterm_at(&h, &path) {
                    Some(found) if *found == s => {}
                    _ => return Err(mismatch(rule, format!("`{label}` has no `{s}` at {path}"))),
                }
                let out = replace_term_at(&h, &path.0, &t).ok_or_else(|| mismatch(rule, "bad position"))?;
                self.derive(goal, g, out, rule, vec![RuleArg::Path(path)], vec![Prem::Hyp(eq), major()])
            }
            _ => Err(mismatch(rule, "has no forward form")),
        }
    }

    /// Unfolds or folds a definition at `path` in the goal's conclusion or in
    /// one of its hypotheses.
    pub fn rewrite_definition(
        &self,
        goal: GoalId,
        target: &RewriteTarget,
        defs: &DefinitionSet,
        name: &str,
        direction: RewriteDirection,
        path: &Path,
    ) -> Result<ProofState, KernelError> {
        let mut s = self.clone();
        s.rewrite_definition_mut(goal, target, defs, name, direction, path)?;
        Ok(s)
    }

    pub fn rewrite_definition_mut(
        &mut self,
        goal: GoalId,
        target: &RewriteTarget,
        defs: &DefinitionSet,
        name: &str,
        direction: RewriteDirection,
        path: &Path,
    ) -> Result<Vec<GoalId>, KernelError> {
        let g = self.open_goal(goal)?.clone();
        let def = defs.get(name)?;
        let args = vec![
            RuleArg::Definition {
                name: name.to_string(),
                direction,
            },
            RuleArg::Path(path.clone()),
        ];
        match target {
            RewriteTarget::Conclusion => {
                let child = def.rewrite_at(&g.conclusion, path, direction)?;
                self.close_with(goal, &g, Rule::Definition, args, vec![new(child)], &[])
            }
            RewriteTarget::Hypothesis(label) => {
                if !g.hyps.contains(label) {
                    return Err(KernelError::NoSuchHypothesis(label.clone()));
                }
                let out = def.rewrite_at(self.goal_formula_of(label), path, direction)?;
                self.derive(goal, &g, out, Rule::Definition, args, vec![Prem::Hyp(label.clone())])
            }
        }
    }

    /// Rules that fit the goal: introductions by the shape of the conclusion,
    /// proof by contradiction, assumption, and eliminations by hypothesis shape.
    pub fn list_applicable(&self, goal: GoalId) -> Result<Vec<RuleSchema>, KernelError> {
        let g = self.open_goal(goal)?;
        let back = |rule: Rule, placeholders: &[&str]| RuleSchema {
            rule,
            direction: Direction::Backward,
            hypothesis: None,
            placeholders: placeholders.iter().map(|s| s.to_string()).collect(),
        };
        let mut out = Vec::new();
        if self.find_hyp(g, &g.conclusion).is_some() {
            out.push(back(Rule::Assumption, &[]));
        }
        match &g.conclusion {
            Formula::And(..) => out.push(back(Rule::AndI, &[])),
            Formula::Or(..) => {
                out.push(back(Rule::OrI1, &[]));
                out.push(back(Rule::OrI2, &[]));
            }
            Formula::Implies(..) => out.push(back(Rule::ImpI, &[])),
            Formula::Iff(..) => out.push(back(Rule::IffI, &[])),
            Formula::Not(..) => out.push(back(Rule::NotI, &[])),
            Formula::Forall(..) if !self.goal_has_unknowns(g) => out.push(back(Rule::ForallI, &[])),
            Formula::Exists(..) => out.push(back(Rule::ExistsI, &["witness"])),
            Formula::Eq(s, t) if s == t => out.push(back(Rule::EqualityRefl, &[])),
            Formula::Bottom => out.push(back(Rule::NotE, &["negation"])),
            _ => {}
        }
        out.push(back(Rule::Raa, &[]));
        for l in &g.hyps {
            let fwd = |rule: Rule, placeholders: &[&str]| RuleSchema {
                rule,
                direction: Direction::Forward,
                hypothesis: Some(l.clone()),
                placeholders: placeholders.iter().map(|s| s.to_string()).collect(),
            };
            match self.goal_formula_of(l) {
                Formula::And(..) => {
                    out.push(fwd(Rule::AndE1, &[]));
                    out.push(fwd(Rule::AndE2, &[]));
                }
                Formula::Or(..) => out.push(fwd(Rule::OrE, &[])),
                Formula::Implies(..) => out.push(fwd(Rule::ImpE, &[])),
                Formula::Iff(..) => {
                    out.push(fwd(Rule::IffE1, &[]));
                    out.push(fwd(Rule::IffE2, &[]));
                }
                Formula::Not(..) => out.push(fwd(Rule::NotE, &[])),
                Formula::Bottom => out.push(fwd(Rule::BottomE, &[])),
                Formula::Forall(..) => out.push(fwd(Rule::ForallE, &["witness"])),
                Formula::Exists(..) if !self.goal_has_unknowns(g) => out.push(fwd(Rule::ExistsE, &[])),
                _ => {}
            }
        }
        Ok(out)
    }
}
