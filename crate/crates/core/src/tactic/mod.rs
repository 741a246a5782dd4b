//! The tactic engine: executes script commands against a proof state, keeps
//! undo frames, and provides bounded automation and strategy hints.

mod auto;
pub mod command;
mod hint;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use command::{instance_text, parse_command, parse_script, Command, ScriptError, SyntaxError};
pub use hint::{hint, StrategyHint};

use crate::exercise::ExerciseSpec;
use crate::kernel::{DerivationTree, Direction, GoalId, KernelError, ProofState, Rule};
use crate::refute::{check_refutation, Model, RefutationVerdict, RefuteError, TraceBundle, Valuation};

/// Budget used when an exercise does not set one.
pub const DEFAULT_AUTO_BUDGET: usize = 2000;

/// The automation an exercise allows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AutomationPolicy {
    pub max_level: u8,
    /// Most rule applications a single `auto` command may make.
    pub budget: usize,
}

impl AutomationPolicy {
    pub fn new(max_level: u8, budget: usize) -> Self {
        Self { max_level, budget }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.max_level > 2 {
            return Err(format!("automation level {} does not exist", self.max_level));
        }
        Ok(())
    }
}

impl Default for AutomationPolicy {
    fn default() -> Self {
        Self {
            max_level: 2,
            budget: DEFAULT_AUTO_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofStatus {
    Open,
    Proved,
    Refuted,
}

/// One rule application made by a command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedStep {
    pub goal: GoalId,
    /// Script text of the application.
    pub step: String,
    pub rule: Rule,
    pub direction: Direction,
    pub hypothesis: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub command: String,
    /// The goal the command acted on, if any.
    pub goal: Option<GoalId>,
    pub new_goals: Vec<GoalId>,
    pub open_goals: Vec<GoalId>,
    pub applied: Vec<AppliedStep>,
    pub state_changed: bool,
    pub status: ProofStatus,
    pub refutation: Option<TraceBundle>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Error, Serialize, Deserialize)]
pub enum TacticError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error(transparent)]
    Kernel(KernelError),
    #[error("automation limit: {reason}")]
    AutomationCapExceeded { reason: String },
    #[error("goal {goal} is not valid; counterexample {countermodel}")]
    NotValid { goal: GoalId, countermodel: Valuation },
    #[error("goal {goal} is not propositional")]
    QuantifiersPresent { goal: GoalId },
    #[error("the model does not refute the exercise: {reason}")]
    RefutationOfProvable { reason: String, trace: Box<TraceBundle> },
    #[error(transparent)]
    Refute(RefuteError),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("no open goal")]
    NoOpenGoal,
    #[error("the exercise is already {0:?}")]
    ExerciseClosed(ProofStatus),
}

impl TacticError {
    /// Stable identifier used in logs and the HTTP API.
    pub fn kind(&self) -> &'static str {
        match self {
            TacticError::Syntax(_) => "SyntaxError",
            TacticError::Kernel(e) => e.kind(),
            TacticError::AutomationCapExceeded { .. } => "AutomationCapExceeded",
            TacticError::NotValid { .. } => "NotValid",
            TacticError::QuantifiersPresent { .. } => "QuantifiersPresent",
            TacticError::RefutationOfProvable { .. } => "RefutationOfProvable",
            TacticError::Refute(e) => e.kind(),
            TacticError::NothingToUndo => "NothingToUndo",
            TacticError::NoOpenGoal => "NoOpenGoal",
            TacticError::ExerciseClosed(_) => "ExerciseClosed",
        }
    }
}

impl From<KernelError> for TacticError {
    fn from(e: KernelError) -> Self {
        TacticError::Kernel(e)
    }
}

impl From<SyntaxError> for TacticError {
    fn from(e: SyntaxError) -> Self {
        TacticError::Syntax(e.message)
    }
}

/// Runs automation of the given level on `goal`, returning the new state and
/// the steps taken. On error the input state is untouched.
pub fn auto(
    state: &ProofState,
    goal: GoalId,
    level: u8,
    budget: usize,
) -> Result<(ProofState, Vec<AppliedStep>), TacticError> {
    if !state.open_goals().contains(&goal) {
        return Err(KernelError::NoSuchGoal(goal).into());
    }
    let mut a = auto::Auto::new(state.clone(), budget, false);
    match level {
        0 => {}
        1 => a.level1(goal)?,
        2 => a.level2(goal)?,
        _ => {
            return Err(TacticError::AutomationCapExceeded {
                reason: format!("automation level {level} does not exist"),
            })
        }
    }
    Ok((a.state, a.applied))
}

#[derive(Clone, Debug)]
struct Frame {
    state: ProofState,
    status: ProofStatus,
    refutation: Option<(Model, TraceBundle)>,
}

/// An interactive proof attempt on one exercise.
#[derive(Clone, Debug)]
pub struct Runner {
    exercise: ExerciseSpec,
    current: Frame,
    history: Vec<Frame>,
    tree: Option<DerivationTree>,
}

impl Runner {
    pub fn new(exercise: ExerciseSpec) -> Result<Self, KernelError> {
        let state = exercise.init_proof()?;
        Ok(Runner {
            exercise,
            current: Frame {
                state,
                status: ProofStatus::Open,
                refutation: None,
            },
            history: Vec::new(),
            tree: None,
        })
    }

    pub fn exercise(&self) -> &ExerciseSpec {
        &self.exercise
    }

    pub fn state(&self) -> &ProofState {
        &self.current.state
    }

    pub fn status(&self) -> ProofStatus {
        self.current.status
    }

    /// The checked derivation, once proved.
    pub fn proof_tree(&self) -> Option<&DerivationTree> {
        self.tree.as_ref()
    }

    /// The accepted countermodel and its trace, once refuted.
    pub fn refutation(&self) -> Option<&(Model, TraceBundle)> {
        self.current.refutation.as_ref()
    }

    pub fn undo_depth(&self) -> usize {
        self.history.len()
    }

    pub fn hint(&self, goal: Option<GoalId>) -> Result<StrategyHint, TacticError> {
        let g = self.target(goal)?;
        Ok(hint(&self.current.state, g)?)
    }

    fn target(&self, goal: Option<GoalId>) -> Result<GoalId, TacticError> {
        match goal {
            Some(g) => Ok(g),
            None => self
                .current
                .state
                .open_goals()
                .first()
                .copied()
                .ok_or(TacticError::NoOpenGoal),
        }
    }

    /// Parses and runs one script line; blank lines give `None`.
    pub fn execute(&mut self, line: &str) -> Result<Option<StepReport>, TacticError> {
        match parse_command(line, self.exercise.signature.as_ref())? {
            Some(cmd) => self.step(&cmd).map(Some),
            None => Ok(None),
        }
    }

    /// Runs a whole script, stopping at the first rejected line.
    pub fn run_script(&mut self, text: &str) -> Result<Vec<StepReport>, (usize, TacticError)> {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            match self.execute(line) {
                Ok(Some(r)) => out.push(r),
                Ok(None) => {}
                Err(e) => return Err((i + 1, e)),
            }
        }
        Ok(out)
    }

    pub fn step(&mut self, cmd: &Command) -> Result<StepReport, TacticError> {
        if let Command::Undo = cmd {
            let prev = self.history.pop().ok_or(TacticError::NothingToUndo)?;
            self.current = prev;
            if self.current.status != ProofStatus::Proved {
                self.tree = None;
            }
            return Ok(self.report(cmd, None, &[], Vec::new(), true, Vec::new()));
        }
        if self.current.status != ProofStatus::Open {
            return Err(TacticError::ExerciseClosed(self.current.status));
        }
        let before: Vec<GoalId> = self.current.state.open_goals().to_vec();
        let mut next = self.current.clone();
        let mut applied = Vec::new();
        let mut diagnostics = Vec::new();
        let mut goal = None;
        let mut tree = None;
        match cmd {
            Command::Rule { goal: g, instance } => {
                let g = self.target(*g)?;
                goal = Some(g);
                next.state.apply_rule_mut(g, instance)?;
                applied.push(AppliedStep {
                    goal: g,
                    step: instance_text(instance),
                    rule: instance.rule,
                    direction: instance.direction,
                    hypothesis: instance.hypothesis.clone(),
                });
            }
            Command::Rewrite {
                goal: g,
                direction,
                definition,
                target,
                path,
            } => {
                let g = self.target(*g)?;
                goal = Some(g);
                next.state
                    .rewrite_definition_mut(g, target, &self.exercise.definitions, definition, *direction, path)?;
                applied.push(AppliedStep {
                    goal: g,
                    step: format!("{direction} {definition}"),
                    rule: Rule::Definition,
                    direction: Direction::Backward,
                    hypothesis: match target {
                        crate::kernel::RewriteTarget::Hypothesis(l) => Some(l.clone()),
                        crate::kernel::RewriteTarget::Conclusion => None,
                    },
                });
            }
            Command::Auto { goal: g, level } => {
                let policy = self.exercise.automation_cap;
                if *level > policy.max_level {
                    return Err(TacticError::AutomationCapExceeded {
                        reason: format!("this exercise allows automation up to level {}", policy.max_level),
                    });
                }
                let g = self.target(*g)?;
                goal = Some(g);
                let (state, steps) = auto(&next.state, g, *level, policy.budget)?;
                next.state = state;
                if steps.len() >= policy.budget && *level > 0 {
                    diagnostics.push(format!("stopped after the budget of {} steps", policy.budget));
                }
                applied = steps;
            }
            Command::Instantiate { unknown, term } => {
                next.state = next.state.instantiate(*unknown, term)?;
            }
            Command::Refute { model } => {
                let verdict = check_refutation(&self.exercise.sequent, model).map_err(TacticError::Refute)?;
                match verdict {
                    RefutationVerdict::Refutes { trace } => {
                        next.status = ProofStatus::Refuted;
                        next.refutation = Some((model.clone(), trace));
                    }
                    RefutationVerdict::Fails { reason, trace } => {
                        return Err(TacticError::RefutationOfProvable { reason, trace: Box::new(trace) });
                    }
                }
            }
            Command::Qed => {
                let t = next.state.checked_tree(&self.exercise.definitions)?;
                diagnostics.push(format!("proof checked: {} inferences", t.size()));
                tree = Some(t);
                next.status = ProofStatus::Proved;
            }
            Command::Undo => unreachable!("handled above"),
        }
        if !next.state.pending_unknowns().is_empty() {
            let names: Vec<String> = next.state.pending_unknowns().iter().map(|n| format!("?{n}")).collect();
            diagnostics.push(format!("pending unknowns: {}", names.join(", ")));
        }
        let changed = next.state != self.current.state || next.status != self.current.status;
        let prev = std::mem::replace(&mut self.current, next);
        self.history.push(prev);
        if tree.is_some() {
            self.tree = tree;
        }
        Ok(self.report(cmd, goal, &before, applied, changed, diagnostics))
    }

    fn report(
        &self,
        cmd: &Command,
        goal: Option<GoalId>,
        before: &[GoalId],
        applied: Vec<AppliedStep>,
        state_changed: bool,
        diagnostics: Vec<String>,
    ) -> StepReport {
        let open = self.current.state.open_goals().to_vec();
        let mut new_goals: Vec<GoalId> = open.iter().copied().filter(|g| !before.contains(g)).collect();
        if matches!(cmd, Command::Undo) {
            new_goals.clear();
        }
        new_goals.sort_unstable();
        let mut open_goals = open;
        open_goals.sort_unstable();
        StepReport {
            command: cmd.to_string(),
            goal,
            new_goals,
            open_goals,
            applied,
            state_changed,
            status: self.current.status,
            refutation: self.current.refutation.as_ref().map(|(_, t)| t.clone()).filter(|_| matches!(cmd, Command::Refute { .. })),
            diagnostics,
        }
    }
}

#[cfg(test)]
mod tests;
