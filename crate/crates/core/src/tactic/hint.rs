//! Strategy hints from a fixed table over the goal and hypothesis shapes.
//!
//! Rows are tried top to bottom and the first one that fits wins:
//!
//! | situation                          | suggestion                 |
//! |------------------------------------|----------------------------|
//! | the goal is a hypothesis           | backward `assumption`      |
//! | a hypothesis is `false`            | forward `bottom_elim`      |
//! | a hypothesis is existential        | forward `exists_elim`      |
//! | the goal is `forall`, `->`, `/\`, `<->`, `~`, `exists`, `t = t` | its introduction |
//! | a hypothesis is a conjunction      | forward `and_elim1`        |
//! | a hypothesis is a disjunction      | forward `or_elim`          |
//! | a hypothesis is a conditional      | forward `impl_elim`        |
//! | a hypothesis is universal          | forward `forall_elim`      |
//! | the goal is a disjunction          | backward `or_intro1`       |
//! | the goal is `false`, a hypothesis is a negation | forward `not_elim` |
//! | otherwise                          | backward `raa`             |
//!
//! Existential hypotheses come before goal introductions: eliminating them
//! first keeps their parameter available to later witnesses. A hint names a
//! rule and never a witness term.

use serde::{Deserialize, Serialize};

use crate::formula::{alpha_equal, Formula};
use crate::kernel::{Direction, GoalId, KernelError, ProofState, Rule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyHint {
    pub rule: Rule,
    pub direction: Direction,
    pub hypothesis: Option<String>,
    pub text: String,
}

fn backward(rule: Rule, text: &str) -> StrategyHint {
    StrategyHint {
        rule,
        direction: Direction::Backward,
        hypothesis: None,
        text: text.to_string(),
    }
}

fn forward(rule: Rule, label: &str, text: String) -> StrategyHint {
    StrategyHint {
        rule,
        direction: Direction::Forward,
        hypothesis: Some(label.to_string()),
        text,
    }
}

pub fn hint(state: &ProofState, goal: GoalId) -> Result<StrategyHint, KernelError> {
    let view = state.goal(goal)?;
    let hyps = &view.hypotheses;
    let c = &view.conclusion;
    if hyps.iter().any(|h| alpha_equal(&h.formula, c)) {
        return Ok(backward(Rule::Assumption, "The goal is already a hypothesis: close it with `backward assumption`."));
    }
    if let Some(h) = hyps.iter().find(|h| h.formula.is_bottom()) {
        return Ok(forward(
            Rule::BottomE,
            &h.label,
            format!("`{}` is false, so anything follows: `forward {} bottom_elim`.", h.label, h.label),
        ));
    }
    if view.pending_unknowns.is_empty() {
        if let Some(h) = hyps.iter().find(|h| matches!(h.formula, Formula::Exists(..))) {
            return Ok(forward(
                Rule::ExistsE,
                &h.label,
                format!(
                    "Name the object that `{}` provides before introducing anything: `forward {} exists_elim`.",
                    h.label, h.label
                ),
            ));
        }
    }
    let intro = match c {
        Formula::Forall(..) if view.pending_unknowns.is_empty() => {
            Some((Rule::ForallI, "Fix an arbitrary object: `backward forall_intro`."))
        }
        Formula::Implies(..) => Some((Rule::ImpI, "Suppose the antecedent: `backward impl_intro`.")),
        Formula::And(..) => Some((Rule::AndI, "Prove each conjunct on its own: `backward and_intro`.")),
        Formula::Iff(..) => Some((Rule::IffI, "Prove both directions: `backward iff_intro`.")),
        Formula::Not(..) => Some((Rule::NotI, "Suppose the formula and derive `false`: `backward not_intro`.")),
        Formula::Exists(..) => Some((
            Rule::ExistsI,
            "Pick a witness with `backward exists_intro`, or use `?` to decide later.",
        )),
        Formula::Eq(s, t) if s == t => Some((Rule::EqualityRefl, "Both sides agree: `backward eq_refl`.")),
        _ => None,
    };
    if let Some((rule, text)) = intro {
        return Ok(backward(rule, text));
    }
    for h in hyps {
        let l = &h.label;
        let row = match &h.formula {
            Formula::And(..) => Some((Rule::AndE1, format!("Take `{l}` apart: `forward {l} and_elim1` and `and_elim2`."))),
            Formula::Or(..) => Some((Rule::OrE, format!("Reason by cases on `{l}`: `forward {l} or_elim`."))),
            Formula::Implies(..) => Some((
                Rule::ImpE,
                format!("Use the conditional `{l}`: `forward {l} impl_elim`, then prove its antecedent."),
            )),
            Formula::Forall(..) => Some((
                Rule::ForallE,
                format!("Specialize `{l}` to a term you need: `forward {l} forall_elim`."),
            )),
            _ => None,
        };
        if let Some((rule, text)) = row {
            if !is_exhausted(hyps, &h.formula) {
                return Ok(forward(rule, l, text));
            }
        }
    }
    if matches!(c, Formula::Or(..)) {
        return Ok(backward(
            Rule::OrI1,
            "Choose the disjunct you can prove with `backward or_intro1` or `or_intro2`; if neither works yet, try `backward raa`.",
        ));
    }
    if c.is_bottom() {
        if let Some(h) = hyps.iter().find(|h| matches!(h.formula, Formula::Not(..))) {
            return Ok(forward(
                Rule::NotE,
                &h.label,
                format!("Contradict `{}`: `forward {} not_elim`, then prove what it denies.", h.label, h.label),
            ));
        }
    }
    Ok(backward(Rule::Raa, "Argue by contradiction: `backward raa`."))
}

/// A conjunction both of whose conjuncts are already hypotheses.
fn is_exhausted(hyps: &[crate::kernel::Hypothesis], f: &Formula) -> bool {
    let has = |g: &Formula| hyps.iter().any(|h| alpha_equal(&h.formula, g));
    match f {
        Formula::And(a, b) => has(a) && has(b),
        _ => false,
    }
}
