//! Independent derivation-tree checker. It shares no code with rule
//! application: every node is re-validated against its children from the
//! rule's schema alone, in a single top-down pass.

use serde::{Deserialize, Serialize};

use super::{DerivationTree, Hypothesis, Rule, RuleArg, Sequent};
use crate::definitions::{DefinitionSet, RewriteDirection};
use crate::formula::{alpha_equal, free_symbols, instantiate, replace_term_at, subterm_at, Formula, Param, Term};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Ok,
    /// The first offending node in pre-order, by child-index path.
    FirstViolation { path: Vec<usize>, reason: String },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

struct Scope {
    label: String,
    formula: Formula,
    depth: usize,
}

struct Eigen {
    param: Param,
    depth: usize,
    path: Vec<usize>,
}

struct Checker<'a> {
    claimed: &'a Sequent,
    defs: &'a DefinitionSet,
    scope: Vec<Scope>,
    eigen: Vec<Eigen>,
    path: Vec<usize>,
}

type Check = Result<(), (Vec<usize>, String)>;

pub fn check_tree(tree: &DerivationTree, claimed: &Sequent, defs: &DefinitionSet) -> Verdict {
    if !alpha_equal(&tree.formula, &claimed.conclusion) {
        return Verdict::FirstViolation {
            path: Vec::new(),
            reason: "the root is not the claimed conclusion".into(),
        };
    }
    let mut c = Checker {
        claimed,
        defs,
        scope: Vec::new(),
        eigen: Vec::new(),
        path: Vec::new(),
    };
    match c.node(tree) {
        Ok(()) => Verdict::Ok,
        Err((path, reason)) => Verdict::FirstViolation { path, reason },
    }
}

fn params_of(f: &Formula) -> std::collections::BTreeSet<Param> {
    free_symbols(f).parameters
}

impl Checker<'_> {
    fn fail<T>(&self, reason: impl Into<String>) -> Result<T, (Vec<usize>, String)> {
        Err((self.path.clone(), reason.into()))
    }

    fn depth(&self) -> usize {
        self.path.len()
    }

    fn same(&self, a: &Formula, b: &Formula, what: &str) -> Check {
        if alpha_equal(a, b) {
            Ok(())
        } else {
            self.fail(format!("{what}: expected `{b}`, found `{a}`"))
        }
    }

    /// An open assumption `f` (introduced at `depth`, or a given hypothesis
    /// when `None`) must not mention an eigenvariable chosen below it.
    fn check_open_assumption(&self, f: &Formula, depth: Option<usize>) -> Check {
        let ps = params_of(f);
        for e in &self.eigen {
            let open_at_eigen = match depth {
                None => true,
                Some(d) => e.depth > d,
            };
            if open_at_eigen && ps.contains(&e.param) {
                return Err((
                    e.path.clone(),
                    format!("eigenvariable {} occurs in the open assumption `{f}`", e.param),
                ));
            }
        }
        Ok(())
    }

    /// The scope entry for a discharged supposition whose formula the rule fixes.
    fn discharge(&self, d: &Hypothesis, expected: Formula) -> Result<(String, Formula), (Vec<usize>, String)> {
        self.same(&d.formula, &expected, "discharged supposition")?;
        Ok((d.label.clone(), expected))
    }

    fn term_arg(&self, t: &DerivationTree, i: usize) -> Result<Term, (Vec<usize>, String)> {
        match t.args.get(i) {
            Some(RuleArg::Term(term)) if term.is_closed() => Ok(term.clone()),
            _ => self.fail(format!("{} needs a closed term argument", t.rule)),
        }
    }

    fn node(&mut self, t: &DerivationTree) -> Check {
        let leaf = matches!(t.rule, Rule::Assumption | Rule::Supposition);
        if leaf {
            return self.leaf(t);
        }
        if t.label.is_some() {
            return self.fail(format!("{} is not a leaf rule but carries a label", t.rule));
        }
        if t.discharged.len() != t.rule.discharge_count() {
            return self.fail(format!(
                "{} discharges {} supposition(s), found {}",
                t.rule,
                t.rule.discharge_count(),
                t.discharged.len()
            ));
        }
        for (i, d) in t.discharged.iter().enumerate() {
            let l = &d.label;
            if self.scope.iter().any(|s| &s.label == l)
                || self.claimed.hypothesis(l).is_some()
                || t.discharged[..i].iter().any(|e| &e.label == l)
            {
                return self.fail(format!("label `{l}` cannot be discharged here"));
            }
        }
        let arity = match t.rule {
            Rule::EqualityRefl => 0,
            Rule::AndE1 | Rule::AndE2 | Rule::OrI1 | Rule::OrI2 | Rule::ImpI | Rule::NotI | Rule::BottomE => 1,
            Rule::Raa | Rule::ForallI | Rule::ForallE | Rule::ExistsI | Rule::Definition => 1,
            Rule::AndI | Rule::ImpE | Rule::IffI | Rule::IffE1 | Rule::IffE2 | Rule::NotE => 2,
            Rule::ExistsE | Rule::EqualityRewrite => 2,
            Rule::OrE => 3,
            Rule::Assumption | Rule::Supposition => 0,
        };
        if t.children.len() != arity {
            return self.fail(format!("{} needs {arity} premise(s), found {}", t.rule, t.children.len()));
        }
        let f = &t.formula;
        let cs: Vec<&Formula> = t.children.iter().map(|c| &c.formula).collect();
        // Per child: suppositions it may use, and an eigenvariable guarded in it.
        let mut child_scope: Vec<Vec<(String, Formula)>> = vec![Vec::new(); arity];
        let mut child_eigen: Vec<Option<Param>> = vec![None; arity];
        match t.rule {
            Rule::AndI => {
                let Formula::And(a, b) = f else { return self.fail("and_intro must conclude a conjunction") };
                self.same(cs[0], a, "left premise")?;
                self.same(cs[1], b, "right premise")?;
            }
            Rule::AndE1 | Rule::AndE2 => {
                let Formula::And(a, b) = cs[0] else { return self.fail("the premise must be a conjunction") };
                let side = if t.rule == Rule::AndE1 { a } else { b };
                self.same(f, side, "conclusion")?;
            }
            Rule::OrI1 | Rule::OrI2 => {
                let Formula::Or(a, b) = f else { return self.fail("or_intro must conclude a disjunction") };
                let side = if t.rule == Rule::OrI1 { a } else { b };
                self.same(cs[0], side, "premise")?;
            }
            Rule::OrE => {
                let Formula::Or(a, b) = cs[0] else { return self.fail("the major premise must be a disjunction") };
                self.same(cs[1], f, "first case")?;
                self.same(cs[2], f, "second case")?;
                child_scope[1].push(self.discharge(&t.discharged[0], (**a).clone())?);
                child_scope[2].push(self.discharge(&t.discharged[1], (**b).clone())?);
            }
            Rule::ImpI => {
                let Formula::Implies(a, b) = f else { return self.fail("impl_intro must conclude a conditional") };
                self.same(cs[0], b, "premise")?;
                child_scope[0].push(self.discharge(&t.discharged[0], (**a).clone())?);
            }
            Rule::ImpE => {
                let Formula::Implies(a, b) = cs[0] else { return self.fail("the major premise must be a conditional") };
                self.same(cs[1], a, "minor premise")?;
                self.same(f, b, "conclusion")?;
            }
            Rule::IffI => {
                let Formula::Iff(a, b) = f else { return self.fail("iff_intro must conclude a biconditional") };
                self.same(cs[0], &Formula::implies((**a).clone(), (**b).clone()), "first premise")?;
                self.same(cs[1], &Formula::implies((**b).clone(), (**a).clone()), "second premise")?;
            }
            Rule::IffE1 | Rule::IffE2 => {
                let Formula::Iff(a, b) = cs[0] else { return self.fail("the major premise must be a biconditional") };
                let (from, to) = if t.rule == Rule::IffE1 { (a, b) } else { (b, a) };
                self.same(cs[1], from, "minor premise")?;
                self.same(f, to, "conclusion")?;
            }
            Rule::NotI => {
                let Formula::Not(a) = f else { return self.fail("not_intro must conclude a negation") };
                self.same(cs[0], &Formula::Bottom, "premise")?;
                child_scope[0].push(self.discharge(&t.discharged[0], (**a).clone())?);
            }
            Rule::NotE => {
                self.same(f, &Formula::Bottom, "conclusion")?;
                let Formula::Not(a) = cs[0] else { return self.fail("the major premise must be a negation") };
                self.same(cs[1], a, "minor premise")?;
            }
            Rule::BottomE => {
                self.same(cs[0], &Formula::Bottom, "premise")?;
            }
            Rule::Raa => {
                self.same(cs[0], &Formula::Bottom, "premise")?;
                child_scope[0].push(self.discharge(&t.discharged[0], Formula::not(f.clone()))?);
            }
            Rule::ForallI => {
                let Formula::Forall(x, body) = f else { return self.fail("forall_intro must conclude a universal") };
                let Term::Param(p) = self.term_arg(t, 0)? else {
                    return self.fail("forall_intro must generalize a parameter");
                };
                self.same(cs[0], &instantiate(body, x, &Term::Param(p.clone())), "premise")?;
                if params_of(f).contains(&p) {
                    return self.fail(format!("eigenvariable {p} occurs in the conclusion"));
                }
                child_eigen[0] = Some(p);
            }
            Rule::ForallE => {
                let Formula::Forall(x, body) = cs[0] else { return self.fail("the premise must be a universal") };
                let expected = match t.args.first() {
                    Some(_) => instantiate(body, x, &self.term_arg(t, 0)?),
                    None if !body.free_vars().contains(x) => (**body).clone(),
                    None => return self.fail("forall_elim needs its witness"),
                };
                self.same(f, &expected, "conclusion")?;
            }
            Rule::ExistsI => {
                let Formula::Exists(x, body) = f else { return self.fail("exists_intro must conclude an existential") };
                let w = self.term_arg(t, 0)?;
                self.same(cs[0], &instantiate(body, x, &w), "premise")?;
            }
            Rule::ExistsE => {
                let Formula::Exists(x, body) = cs[0] else { return self.fail("the major premise must be an existential") };
                self.same(cs[1], f, "minor premise")?;
                let Term::Param(p) = self.term_arg(t, 0)? else {
                    return self.fail("exists_elim must introduce a parameter");
                };
                if params_of(f).contains(&p) || params_of(cs[0]).contains(&p) {
                    return self.fail(format!("eigenvariable {p} escapes its scope"));
                }
                child_scope[1].push(self.discharge(&t.discharged[0], instantiate(body, x, &Term::Param(p.clone())))?);
                child_eigen[1] = Some(p);
            }
            Rule::EqualityRefl => {
                if !matches!(f, Formula::Eq(s, r) if s == r) {
                    return self.fail("eq_refl must conclude `t = t`");
                }
            }
            Rule::EqualityRewrite => {
                let Formula::Eq(s, r) = cs[0] else { return self.fail("the first premise must be an equation") };
                let Some(RuleArg::Path(p)) = t.args.first() else { return self.fail("eq_rewrite needs a position") };
                if subterm_at(cs[1], p) != Some(s) {
                    return self.fail(format!("the second premise has no `{s}` at {p}"));
                }
                match replace_term_at(cs[1], &p.0, r) {
                    Some(expected) => self.same(f, &expected, "conclusion")?,
                    None => return self.fail("bad rewrite position"),
                }
            }
            Rule::Definition => {
                let (Some(RuleArg::Definition { name, .. }), Some(RuleArg::Path(p))) = (t.args.first(), t.args.get(1))
                else {
                    return self.fail("definition needs a name and a position");
                };
                let Ok(def) = self.defs.get(name) else { return self.fail(format!("unknown definition `{name}`")) };
                let fits = [RewriteDirection::Unfold, RewriteDirection::Fold]
                    .iter()
                    .any(|d| matches!(def.rewrite_at(cs[0], p, *d), Ok(g) if alpha_equal(&g, f)));
                if !fits {
                    return self.fail(format!("`{f}` is not a rewrite of `{}` by `{name}` at {p}", cs[0]));
                }
            }
            Rule::Assumption | Rule::Supposition => unreachable!(),
        }
        let depth = self.depth();
        let here = self.path.clone();
        for (i, child) in t.children.iter().enumerate() {
            let pushed_scope = child_scope[i].len();
            for (label, formula) in child_scope[i].drain(..) {
                self.scope.push(Scope { label, formula, depth });
            }
            let pushed_eigen = child_eigen[i].is_some();
            if let Some(param) = child_eigen[i].take() {
                self.eigen.push(Eigen {
                    param,
                    depth,
                    path: here.clone(),
                });
            }
            self.path.push(i);
            let r = self.node(child);
            self.path.pop();
            self.scope.truncate(self.scope.len() - pushed_scope);
            if pushed_eigen {
                self.eigen.pop();
            }
            r?;
        }
        Ok(())
    }

    fn leaf(&mut self, t: &DerivationTree) -> Check {
        if !t.children.is_empty() {
            return self.fail(format!("{} must be a leaf", t.rule));
        }
        if !t.discharged.is_empty() || !t.args.is_empty() {
            return self.fail(format!("{} takes no arguments or discharges", t.rule));
        }
        let Some(label) = &t.label else { return self.fail("a leaf must name its hypothesis") };
        match t.rule {
            Rule::Assumption => {
                let Some(h) = self.claimed.hypothesis(label) else {
                    return self.fail(format!("`{label}` is not a hypothesis of the claimed sequent"));
                };
                self.same(&t.formula, h, "given hypothesis")?;
                self.check_open_assumption(&t.formula, None)
            }
            _ => {
                let Some(s) = self.scope.iter().rev().find(|s| &s.label == label) else {
                    return self.fail(format!("supposition `{label}` is not discharged below"));
                };
                let (formula, depth) = (s.formula.clone(), s.depth);
                self.same(&t.formula, &formula, "supposition")?;
                self.check_open_assumption(&t.formula, Some(depth))
            }
        }
    }
}
