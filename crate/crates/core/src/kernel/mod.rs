//! Natural-deduction proof states, rule application in both directions,
//! derivation-tree extraction and an independent tree checker.

mod check;
mod export;
mod rules;
mod sequent;
mod state;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::definitions::{DefinitionError, RewriteDirection};
use crate::formula::{print_formula, print_term, Formula, FormulaError, Param, Path, Term};

pub use check::{check_tree, Verdict};
pub use export::{tree_from_json, tree_to_json, tree_to_text};
pub use sequent::{Hypothesis, Sequent};
pub use state::{GoalId, GoalView, HypOrigin, HypRecord, Node, NodeId, Premise, ProofState, Solution};
pub use rules::RewriteTarget;
pub use tree::DerivationTree;

/// The rule catalog, plus the bookkeeping justifications that appear in trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    ImpI,
    ImpE,
    IffI,
    IffE1,
    IffE2,
    NotI,
    NotE,
    BottomE,
    Raa,
    ForallI,
    ForallE,
    ExistsI,
    ExistsE,
    Assumption,
    EqualityRefl,
    EqualityRewrite,
    /// Definitional rewriting step.
    Definition,
    /// Leaf: a temporary supposition discharged further down.
    Supposition,
}

impl Rule {
    pub const ALL: [Rule; 24] = [
        Rule::AndI,
        Rule::AndE1,
        Rule::AndE2,
        Rule::OrI1,
        Rule::OrI2,
        Rule::OrE,
        Rule::ImpI,
        Rule::ImpE,
        Rule::IffI,
        Rule::IffE1,
        Rule::IffE2,
        Rule::NotI,
        Rule::NotE,
        Rule::BottomE,
        Rule::Raa,
        Rule::ForallI,
        Rule::ForallE,
        Rule::ExistsI,
        Rule::ExistsE,
        Rule::Assumption,
        Rule::EqualityRefl,
        Rule::EqualityRewrite,
        Rule::Definition,
        Rule::Supposition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::AndI => "and_intro",
            Rule::AndE1 => "and_elim1",
            Rule::AndE2 => "and_elim2",
            Rule::OrI1 => "or_intro1",
            Rule::OrI2 => "or_intro2",
            Rule::OrE => "or_elim",
            Rule::ImpI => "impl_intro",
            Rule::ImpE => "impl_elim",
            Rule::IffI => "iff_intro",
            Rule::IffE1 => "iff_elim1",
            Rule::IffE2 => "iff_elim2",
            Rule::NotI => "not_intro",
            Rule::NotE => "not_elim",
            Rule::BottomE => "bottom_elim",
            Rule::Raa => "raa",
            Rule::ForallI => "forall_intro",
            Rule::ForallE => "forall_elim",
            Rule::ExistsI => "exists_intro",
            Rule::ExistsE => "exists_elim",
            Rule::Assumption => "assumption",
            Rule::EqualityRefl => "eq_refl",
            Rule::EqualityRewrite => "eq_rewrite",
            Rule::Definition => "definition",
            Rule::Supposition => "supposition",
        }
    }

    /// Number of suppositions the rule discharges.
    pub fn discharge_count(self) -> usize {
        match self {
            Rule::ImpI | Rule::NotI | Rule::Raa | Rule::ExistsE => 1,
            Rule::OrE => 2,
            _ => 0,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| KernelError::UnknownRule(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Backward,
    Forward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Backward => "backward",
            Direction::Forward => "forward",
        })
    }
}

/// An argument recorded on a derivation node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleArg {
    Term(Term),
    Formula(Formula),
    Label(String),
    Path(Path),
    Definition { name: String, direction: RewriteDirection },
}

impl fmt::Display for RuleArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleArg::Term(t) => f.write_str(&print_term(t)),
            RuleArg::Formula(g) => f.write_str(&print_formula(g)),
            RuleArg::Label(l) => f.write_str(l),
            RuleArg::Path(p) => write!(f, "{p}"),
            RuleArg::Definition { name, direction } => write!(f, "{direction} {name}"),
        }
    }
}

/// An argument supplied when applying a rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArgInput {
    Term(Term),
    /// `?`: a fresh unknown standing for a witness chosen later.
    NewUnknown,
    Formula(Formula),
    Label(String),
    Path(Path),
}

impl fmt::Display for ArgInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgInput::Term(t) => f.write_str(&print_term(t)),
            ArgInput::NewUnknown => f.write_str("?"),
            ArgInput::Formula(g) => f.write_str(&print_formula(g)),
            ArgInput::Label(l) => f.write_str(l),
            ArgInput::Path(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleInstance {
    pub rule: Rule,
    pub direction: Direction,
    /// Principal hypothesis of a forward step.
    pub hypothesis: Option<String>,
    pub args: Vec<ArgInput>,
}

impl RuleInstance {
    pub fn backward(rule: Rule, args: Vec<ArgInput>) -> Self {
        Self {
            rule,
            direction: Direction::Backward,
            hypothesis: None,
            args,
        }
    }

    pub fn forward(label: impl Into<String>, rule: Rule, args: Vec<ArgInput>) -> Self {
        Self {
            rule,
            direction: Direction::Forward,
            hypothesis: Some(label.into()),
            args,
        }
    }
}

/// A rule-palette entry: what could be applied, with argument placeholders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSchema {
    pub rule: Rule,
    pub direction: Direction,
    pub hypothesis: Option<String>,
    pub placeholders: Vec<String>,
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.direction, &self.hypothesis) {
            (Direction::Forward, Some(h)) => write!(f, "forward {h} {}", self.rule)?,
            _ => write!(f, "backward {}", self.rule)?,
        }
        for p in &self.placeholders {
            write!(f, " <{p}>")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum KernelError {
    #[error("malformed sequent: {0}")]
    MalformedSequent(String),
    #[error("no open goal {0}")]
    NoSuchGoal(GoalId),
    #[error("no hypothesis `{0}` in the current goal")]
    NoSuchHypothesis(String),
    #[error("{rule} does not apply: {reason}")]
    RuleShapeMismatch { rule: Rule, reason: String },
    #[error("{rule} needs {what}")]
    ArgumentMissing { rule: Rule, what: String },
    #[error("bad argument for {rule}: {reason}")]
    BadArgument { rule: Rule, reason: String },
    #[error("eigenvariable condition violated: {0}")]
    EigenvariableViolation(String),
    #[error("parameter {0} is not available in this goal")]
    ParameterOutOfScope(Param),
    #[error("the step would reproduce the goal it starts from")]
    NoProgress,
    #[error("no pending unknown ?{0}")]
    NoSuchUnknown(u32),
    #[error("?{0} cannot be instantiated with a term containing itself")]
    OccursCheck(u32),
    #[error("proof incomplete: open goals {0:?}")]
    ProofIncomplete(Vec<GoalId>),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("{0}")]
    Formula(String),
    #[error("{0}")]
    UnknownDefinition(String),
    #[error("{0}")]
    NoMatchAtPosition(String),
    #[error("extracted tree failed the checker at {path}: {reason}")]
    CheckerRejected { path: String, reason: String },
}

impl KernelError {
    /// Stable identifier used in logs and the HTTP API.
    pub fn kind(&self) -> &'static str {
        match self {
            KernelError::MalformedSequent(_) => "MalformedSequent",
            KernelError::NoSuchGoal(_) => "NoSuchGoal",
            KernelError::NoSuchHypothesis(_) => "NoSuchHypothesis",
            KernelError::RuleShapeMismatch { .. } => "RuleShapeMismatch",
            KernelError::ArgumentMissing { .. } => "ArgumentMissing",
            KernelError::BadArgument { .. } => "BadArgument",
            KernelError::EigenvariableViolation(_) => "EigenvariableViolation",
            KernelError::ParameterOutOfScope(_) => "ParameterOutOfScope",
            KernelError::NoProgress => "NoProgress",
            KernelError::NoSuchUnknown(_) => "NoSuchUnknown",
            KernelError::OccursCheck(_) => "OccursCheck",
            KernelError::ProofIncomplete(_) => "ProofIncomplete",
            KernelError::UnknownRule(_) => "UnknownRule",
            KernelError::Formula(_) => "FormulaError",
            KernelError::UnknownDefinition(_) => "UnknownDefinition",
            KernelError::NoMatchAtPosition(_) => "NoMatchAtPosition",
            KernelError::CheckerRejected { .. } => "CheckerRejected",
        }
    }
}

impl From<FormulaError> for KernelError {
    fn from(e: FormulaError) -> Self {
        KernelError::Formula(e.to_string())
    }
}

impl From<DefinitionError> for KernelError {
    fn from(e: DefinitionError) -> Self {
        match e {
            DefinitionError::UnknownDefinition(_) => KernelError::UnknownDefinition(e.to_string()),
            DefinitionError::NoMatchAtPosition { .. } => KernelError::NoMatchAtPosition(e.to_string()),
            other => KernelError::Formula(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests;
