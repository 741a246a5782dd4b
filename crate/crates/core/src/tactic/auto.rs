//! Automation. Every step taken here is an ordinary kernel rule application,
//! so automated parts of a proof stay inspectable and are checked like any
//! other inference.
//!
//! Level 1 repeatedly applies, to the lowest-numbered open goal under the
//! starting goal: `assumption`, then the introductions for `/\`, `->`, `<->`
//! and `forall` (the last only when no unknowns are pending), then forward
//! `and_elim1`/`and_elim2` on a conjunction whose conjunct is not yet a
//! hypothesis. It stops when nothing applies or the budget is spent.
//!
//! Level 2 runs level 1 and then completes every remaining goal with a
//! Kalmár-style construction. Atoms (including ground first-order atoms) are
//! treated propositionally; a goal is first confirmed valid by the oracle.
//! The construction works under `raa`: it reads a partial valuation off the
//! literal hypotheses, finds a hypothesis false under it and derives `false`
//! from it compositionally, splitting on `a \/ ~a` (proved inline) when the
//! valuation does not decide any hypothesis.

use super::{AppliedStep, TacticError};
use crate::formula::{alpha_equal, print_formula, Formula};
use crate::kernel::{ArgInput, GoalId, KernelError, ProofState, Rule, RuleInstance, Sequent};
use crate::oracle;
use crate::refute::Valuation;

pub(super) struct Auto {
    pub state: ProofState,
    pub applied: Vec<AppliedStep>,
    budget: usize,
    /// Whether running out of budget is an error.
    strict: bool,
}

/// How a false formula is made available as a goal to prove.
enum Via {
    /// It is the hypothesis with this label.
    Assume,
    /// It is a conjunct of the conjunction `major`, a hypothesis.
    AndE(Rule, Formula),
    /// It follows from the hypothesis `major` and a true side premise.
    Elim(Rule, Formula, Formula),
}

type PartialValuation = Vec<(Formula, bool)>;

fn lookup(v: &PartialValuation, atom: &Formula) -> Option<bool> {
    v.iter().find(|(a, _)| a == atom).map(|(_, b)| *b)
}

/// Three-valued evaluation under a partial valuation.
fn eval3(f: &Formula, v: &PartialValuation) -> Option<bool> {
    match f {
        Formula::Pred(..) => lookup(v, f),
        Formula::Bottom => Some(false),
        Formula::Not(a) => eval3(a, v).map(|b| !b),
        Formula::And(a, b) => match (eval3(a, v), eval3(b, v)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Formula::Or(a, b) => match (eval3(a, v), eval3(b, v)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        Formula::Implies(a, b) => match (eval3(a, v), eval3(b, v)) {
            (Some(false), _) | (_, Some(true)) => Some(true),
            (Some(true), Some(false)) => Some(false),
            _ => None,
        },
        Formula::Iff(a, b) => Some(eval3(a, v)? == eval3(b, v)?),
        Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..) => None,
    }
}

fn first_unassigned(f: &Formula, v: &PartialValuation) -> Option<Formula> {
    match f {
        Formula::Pred(..) => lookup(v, f).is_none().then(|| f.clone()),
        _ => f.children().into_iter().find_map(|c| first_unassigned(c, v)),
    }
}

fn quantifier_free(f: &Formula) -> bool {
    match f {
        Formula::Pred(..) | Formula::Bottom => true,
        Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..) => false,
        _ => f.children().into_iter().all(quantifier_free),
    }
}

/// Replaces each atom by a propositional symbol `#a<k>`, collecting the atoms.
fn abstract_atoms(f: &Formula, atoms: &mut Vec<Formula>) -> Formula {
    match f {
        Formula::Pred(..) => {
            let k = match atoms.iter().position(|a| a == f) {
                Some(k) => k,
                None => {
                    atoms.push(f.clone());
                    atoms.len() - 1
                }
            };
            Formula::atom(format!("#a{k}"))
        }
        Formula::Bottom => Formula::Bottom,
        Formula::Not(a) => Formula::not(abstract_atoms(a, atoms)),
        Formula::And(a, b) => Formula::and(abstract_atoms(a, atoms), abstract_atoms(b, atoms)),
        Formula::Or(a, b) => Formula::or(abstract_atoms(a, atoms), abstract_atoms(b, atoms)),
        Formula::Implies(a, b) => Formula::implies(abstract_atoms(a, atoms), abstract_atoms(b, atoms)),
        Formula::Iff(a, b) => Formula::iff(abstract_atoms(a, atoms), abstract_atoms(b, atoms)),
        Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..) => unreachable!("checked quantifier-free"),
    }
}

fn internal(reason: &str) -> TacticError {
    TacticError::Kernel(KernelError::MalformedSequent(format!("automation invariant broken: {reason}")))
}

fn back(rule: Rule) -> RuleInstance {
    RuleInstance::backward(rule, Vec::new())
}

fn back_on(rule: Rule, major: &Formula) -> RuleInstance {
    RuleInstance::backward(rule, vec![ArgInput::Formula(major.clone())])
}

impl Auto {
    pub fn new(state: ProofState, budget: usize, strict: bool) -> Self {
        Auto {
            state,
            applied: Vec::new(),
            budget,
            strict,
        }
    }

    fn apply(&mut self, goal: GoalId, inst: RuleInstance) -> Result<Vec<GoalId>, TacticError> {
        if self.applied.len() >= self.budget {
            return Err(TacticError::AutomationCapExceeded {
                reason: format!("the step budget of {} ran out", self.budget),
            });
        }
        let children = self.state.apply_rule_mut(goal, &inst).map_err(TacticError::Kernel)?;
        self.applied.push(AppliedStep {
            goal,
            step: super::command::instance_text(&inst),
            rule: inst.rule,
            direction: inst.direction,
            hypothesis: inst.hypothesis,
        });
        Ok(children)
    }

    fn one(&mut self, goal: GoalId, inst: RuleInstance) -> Result<GoalId, TacticError> {
        self.apply(goal, inst)?
            .first()
            .copied()
            .ok_or_else(|| internal("expected a new goal"))
    }

    fn two(&mut self, goal: GoalId, inst: RuleInstance) -> Result<(GoalId, GoalId), TacticError> {
        match self.apply(goal, inst)?[..] {
            [a, b, ..] => Ok((a, b)),
            _ => Err(internal("expected two new goals")),
        }
    }

    fn has_hyp(&self, goal: GoalId, f: &Formula) -> Result<bool, TacticError> {
        let view = self.state.goal(goal).map_err(TacticError::Kernel)?;
        Ok(view.hypotheses.iter().any(|h| alpha_equal(&h.formula, f)))
    }

    // ---------------------------------------------------------------- level 1

    fn level1_step(&self, goal: GoalId) -> Result<Option<RuleInstance>, TacticError> {
        let view = self.state.goal(goal).map_err(TacticError::Kernel)?;
        let has = |f: &Formula| view.hypotheses.iter().any(|h| alpha_equal(&h.formula, f));
        if has(&view.conclusion) {
            return Ok(Some(back(Rule::Assumption)));
        }
        match &view.conclusion {
            Formula::And(..) => return Ok(Some(back(Rule::AndI))),
            Formula::Implies(..) => return Ok(Some(back(Rule::ImpI))),
            Formula::Iff(..) => return Ok(Some(back(Rule::IffI))),
            Formula::Forall(..) if view.pending_unknowns.is_empty() => return Ok(Some(back(Rule::ForallI))),
            _ => {}
        }
        for h in &view.hypotheses {
            if let Formula::And(a, b) = &h.formula {
                if !has(a) {
                    return Ok(Some(RuleInstance::forward(&h.label, Rule::AndE1, Vec::new())));
                }
                if !has(b) {
                    return Ok(Some(RuleInstance::forward(&h.label, Rule::AndE2, Vec::new())));
                }
            }
        }
        Ok(None)
    }

    /// Level-1 saturation of the goals under `root`.
    pub fn level1(&mut self, root: GoalId) -> Result<(), TacticError> {
        'outer: loop {
            if !self.strict && self.applied.len() >= self.budget {
                return Ok(());
            }
            for g in self.state.open_goals_under(root) {
                if let Some(inst) = self.level1_step(g)? {
                    self.apply(g, inst)?;
                    continue 'outer;
                }
            }
            return Ok(());
        }
    }

    // ---------------------------------------------------------------- level 2

    /// Level 1, then a complete propositional construction for what remains.
    pub fn level2(&mut self, root: GoalId) -> Result<(), TacticError> {
        self.level1(root)?;
        let remaining = self.state.open_goals_under(root);
        for &g in &remaining {
            let view = self.state.goal(g).map_err(TacticError::Kernel)?;
            let s = view.sequent();
            if !s.formulas().all(quantifier_free) {
                return Err(TacticError::QuantifiersPresent { goal: g });
            }
            let mut atoms = Vec::new();
            let abstracted = Sequent::new(
                s.hypotheses
                    .iter()
                    .map(|h| crate::kernel::Hypothesis {
                        label: h.label.clone(),
                        formula: abstract_atoms(&h.formula, &mut atoms),
                    })
                    .collect(),
                abstract_atoms(&s.conclusion, &mut atoms),
            );
            let countermodel = oracle::find_countermodel(&abstracted).map_err(|_| TacticError::QuantifiersPresent { goal: g })?;
            if let Some(v) = countermodel {
                let readable: Valuation = v
                    .assignment
                    .iter()
                    .filter_map(|(k, b)| {
                        let i: usize = k.strip_prefix("#a")?.parse().ok()?;
                        Some((print_formula(&atoms[i]), *b))
                    })
                    .collect();
                return Err(TacticError::NotValid {
                    goal: g,
                    countermodel: readable,
                });
            }
        }
        self.strict = true;
        for g in remaining {
            self.complete(g)?;
        }
        Ok(())
    }

    fn complete(&mut self, g: GoalId) -> Result<(), TacticError> {
        let view = self.state.goal(g).map_err(TacticError::Kernel)?;
        if view.hypotheses.iter().any(|h| alpha_equal(&h.formula, &view.conclusion)) {
            self.apply(g, back(Rule::Assumption))?;
            return Ok(());
        }
        if let Some(h) = view.hypotheses.iter().find(|h| h.formula.is_bottom()) {
            self.apply(g, RuleInstance::forward(&h.label, Rule::BottomE, Vec::new()))?;
            return Ok(());
        }
        if view.conclusion.is_bottom() {
            self.refute_hyps(g)
        } else {
            let r = self.one(g, back(Rule::Raa))?;
            self.refute_hyps(r)
        }
    }

    /// Literal hypotheses give the valuation, first occurrence wins.
    fn valuation(&self, g: GoalId) -> Result<PartialValuation, TacticError> {
        let view = self.state.goal(g).map_err(TacticError::Kernel)?;
        let mut v: PartialValuation = Vec::new();
        for h in &view.hypotheses {
            let (atom, value) = match &h.formula {
                a @ Formula::Pred(..) => (a, true),
                Formula::Not(a) if matches!(**a, Formula::Pred(..)) => (&**a, false),
                _ => continue,
            };
            if lookup(&v, atom).is_none() {
                v.push((atom.clone(), value));
            }
        }
        Ok(v)
    }

    /// Closes a goal `false` whose hypotheses are jointly unsatisfiable.
    fn refute_hyps(&mut self, g: GoalId) -> Result<(), TacticError> {
        let v = self.valuation(g)?;
        let view = self.state.goal(g).map_err(TacticError::Kernel)?;
        if let Some(h) = view.hypotheses.iter().find(|h| eval3(&h.formula, &v) == Some(false)) {
            return match &h.formula {
                Formula::Bottom => self.apply(g, back(Rule::Assumption)).map(drop),
                Formula::Not(d) => {
                    let (neg, pos) = self.two(g, back_on(Rule::NotE, &h.formula))?;
                    self.apply(neg, back(Rule::Assumption))?;
                    self.prove_true(pos, d, &v)
                }
                f => self.contradict(g, f, Via::Assume, &v),
            };
        }
        let atom = view
            .hypotheses
            .iter()
            .find(|h| eval3(&h.formula, &v).is_none())
            .and_then(|h| first_unassigned(&h.formula, &v))
            .ok_or_else(|| internal("the hypotheses are satisfiable"))?;
        let lem = Formula::or(atom.clone(), Formula::not(atom));
        let children = self.apply(g, back_on(Rule::OrE, &lem))?;
        let [major, left, right] = children[..] else {
            return Err(internal("or_elim gives three goals"));
        };
        self.prove_lem(major)?;
        self.refute_hyps(left)?;
        self.refute_hyps(right)
    }

    /// `a \/ ~a` for an atom `a`.
    fn prove_lem(&mut self, g: GoalId) -> Result<(), TacticError> {
        let goal = self.state.goal(g).map_err(TacticError::Kernel)?.conclusion;
        let r = self.one(g, back(Rule::Raa))?;
        let neg = Formula::not(goal);
        let (n0, n1) = self.two(r, back_on(Rule::NotE, &neg))?;
        self.apply(n0, back(Rule::Assumption))?;
        let o = self.one(n1, back(Rule::OrI2))?;
        let i = self.one(o, back(Rule::NotI))?;
        let (m0, m1) = self.two(i, back_on(Rule::NotE, &neg))?;
        self.apply(m0, back(Rule::Assumption))?;
        let p = self.one(m1, back(Rule::OrI1))?;
        self.apply(p, back(Rule::Assumption)).map(drop)
    }

    /// Proves `a`, true under `v`.
    fn prove_true(&mut self, g: GoalId, a: &Formula, v: &PartialValuation) -> Result<(), TacticError> {
        if self.has_hyp(g, a)? {
            return self.apply(g, back(Rule::Assumption)).map(drop);
        }
        match a {
            Formula::Not(b) => self.prove_neg(g, b, v),
            Formula::And(b, c) => {
                let (l, r) = self.two(g, back(Rule::AndI))?;
                self.prove_true(l, b, v)?;
                self.prove_true(r, c, v)
            }
            Formula::Or(b, c) => {
                if eval3(b, v) == Some(true) {
                    let l = self.one(g, back(Rule::OrI1))?;
                    self.prove_true(l, b, v)
                } else {
                    let r = self.one(g, back(Rule::OrI2))?;
                    self.prove_true(r, c, v)
                }
            }
            Formula::Implies(b, c) => {
                let ch = self.one(g, back(Rule::ImpI))?;
                if eval3(c, v) == Some(true) {
                    self.prove_true(ch, c, v)
                } else {
                    let bottom = if c.is_bottom() { ch } else { self.one(ch, back(Rule::BottomE))? };
                    self.contradict(bottom, b, Via::Assume, v)
                }
            }
            Formula::Iff(b, c) => {
                let (l, r) = self.two(g, back(Rule::IffI))?;
                self.prove_true(l, &Formula::implies((**b).clone(), (**c).clone()), v)?;
                self.prove_true(r, &Formula::implies((**c).clone(), (**b).clone()), v)
            }
            _ => Err(internal("a true atom is not a hypothesis")),
        }
    }

    /// Proves `~b` for `b` false under `v`.
    fn prove_neg(&mut self, g: GoalId, b: &Formula, v: &PartialValuation) -> Result<(), TacticError> {
        if self.has_hyp(g, &Formula::not(b.clone()))? {
            return self.apply(g, back(Rule::Assumption)).map(drop);
        }
        let ch = self.one(g, back(Rule::NotI))?;
        self.refute_supposed(ch, b, v)
    }

    /// Closes goal `false` where the newest hypothesis is `b`, false under `v`.
    fn refute_supposed(&mut self, g: GoalId, b: &Formula, v: &PartialValuation) -> Result<(), TacticError> {
        match b {
            Formula::Pred(..) | Formula::Bottom => self.contradict(g, b, Via::Assume, v),
            Formula::Not(d) => {
                let (neg, pos) = self.two(g, back_on(Rule::NotE, b))?;
                self.apply(neg, back(Rule::Assumption))?;
                self.prove_true(pos, d, v)
            }
            Formula::And(d, e) => {
                if eval3(d, v) == Some(false) {
                    self.contradict(g, d, Via::AndE(Rule::AndE1, b.clone()), v)
                } else {
                    self.contradict(g, e, Via::AndE(Rule::AndE2, b.clone()), v)
                }
            }
            Formula::Or(d, e) => {
                let children = self.apply(g, back_on(Rule::OrE, b))?;
                let [major, left, right] = children[..] else {
                    return Err(internal("or_elim gives three goals"));
                };
                self.apply(major, back(Rule::Assumption))?;
                self.contradict(left, d, Via::Assume, v)?;
                self.contradict(right, e, Via::Assume, v)
            }
            Formula::Implies(d, e) => self.contradict(g, e, Via::Elim(Rule::ImpE, b.clone(), (**d).clone()), v),
            Formula::Iff(d, e) => {
                if eval3(d, v) == Some(true) {
                    self.contradict(g, e, Via::Elim(Rule::IffE1, b.clone(), (**d).clone()), v)
                } else {
                    self.contradict(g, d, Via::Elim(Rule::IffE2, b.clone(), (**e).clone()), v)
                }
            }
            _ => Err(internal("not a propositional formula")),
        }
    }

    /// Closes goal `false` given that `x`, false under `v`, is obtainable via `via`.
    fn contradict(&mut self, g: GoalId, x: &Formula, via: Via, v: &PartialValuation) -> Result<(), TacticError> {
        if x.is_bottom() {
            return self.obtain(g, via, v);
        }
        let (neg, pos) = self.two(g, back_on(Rule::NotE, &Formula::not(x.clone())))?;
        self.prove_neg(neg, x, v)?;
        self.obtain(pos, via, v)
    }

    fn obtain(&mut self, g: GoalId, via: Via, v: &PartialValuation) -> Result<(), TacticError> {
        match via {
            Via::Assume => self.apply(g, back(Rule::Assumption)).map(drop),
            Via::AndE(rule, major) => {
                let m = self.one(g, back_on(rule, &major))?;
                self.apply(m, back(Rule::Assumption)).map(drop)
            }
            Via::Elim(rule, major, side) => {
                let (m, s) = self.two(g, back_on(rule, &major))?;
                self.apply(m, back(Rule::Assumption))?;
                self.prove_true(s, &side, v)
            }
        }
    }
}
