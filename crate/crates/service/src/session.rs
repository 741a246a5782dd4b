//! Sessions as append-only event logs, and their replay.
//!
//! A session file is JSON lines: the first line is a [`SessionHeader`], each
//! following line one [`Event`]. The header embeds the full exercise so that a
//! file replays on its own.

use ndlab_core::exercise::{ExerciseSpec, View};
use ndlab_core::formula::print_formula;
use ndlab_core::kernel::{GoalId, ProofState};
use ndlab_core::tactic::{ProofStatus, Runner, StepReport, TacticError};
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionStatus {
    Open,
    Proved,
    Refuted,
}

impl From<ProofStatus> for SessionStatus {
    fn from(s: ProofStatus) -> Self {
        match s {
            ProofStatus::Open => SessionStatus::Open,
            ProofStatus::Proved => SessionStatus::Proved,
            ProofStatus::Refuted => SessionStatus::Refuted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionHeader {
    pub id: String,
    pub exercise_id: String,
    pub student_id: String,
    pub created: String,
    /// Instructor view of the exercise at creation time.
    pub exercise: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Accepted { report: Box<StepReport> },
    Rejected { error: Rejection },
}

impl Outcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Outcome::Accepted { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub ordinal: u64,
    pub timestamp: String,
    pub command: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisJson {
    pub label: String,
    pub formula: String,
}

/// A goal with formulas as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalJson {
    pub id: GoalId,
    pub hypotheses: Vec<HypothesisJson>,
    pub conclusion: String,
    pub parameters: Vec<String>,
    pub unknowns: Vec<u32>,
}

pub fn goals_of(state: &ProofState) -> Vec<GoalJson> {
    state
        .open_goals()
        .iter()
        .filter_map(|g| state.goal(*g).ok())
        .map(|g| GoalJson {
            id: g.id,
            hypotheses: g
                .hypotheses
                .iter()
                .map(|h| HypothesisJson {
                    label: h.label.clone(),
                    formula: print_formula(&h.formula),
                })
                .collect(),
            conclusion: print_formula(&g.conclusion),
            parameters: g.introduced_parameters.iter().map(|p| p.to_string()).collect(),
            unknowns: g.pending_unknowns.iter().copied().collect(),
        })
        .collect()
}

/// One proof state of the movie.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub index: usize,
    /// The event that produced this frame; `None` for the initial state.
    pub ordinal: Option<u64>,
    pub command: Option<String>,
    pub hash: String,
    pub status: SessionStatus,
    pub goals: Vec<GoalJson>,
}

impl Frame {
    fn capture(index: usize, event: Option<&Event>, runner: &Runner) -> Self {
        Frame {
            index,
            ordinal: event.map(|e| e.ordinal),
            command: event.map(|e| e.command.clone()),
            hash: runner.state().structural_hash(),
            status: runner.status().into(),
            goals: goals_of(runner.state()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayLog {
    pub session_id: String,
    pub frames: Vec<Frame>,
}

impl ReplayLog {
    pub fn hashes(&self) -> Vec<&str> {
        self.frames.iter().map(|f| f.hash.as_str()).collect()
    }
}

pub fn rejection(e: &TacticError) -> Rejection {
    Rejection {
        kind: e.kind().to_string(),
        message: e.to_string(),
    }
}

/// Runs one command against `runner`, producing the event to append.
pub fn execute(runner: &mut Runner, ordinal: u64, timestamp: String, command: &str) -> Event {
    let outcome = match runner.execute(command) {
        Ok(Some(report)) => Outcome::Accepted { report: Box::new(report) },
        Ok(None) => Outcome::Rejected {
            error: Rejection {
                kind: "SyntaxError".into(),
                message: "empty command".into(),
            },
        },
        Err(e) => Outcome::Rejected { error: rejection(&e) },
    };
    Event {
        ordinal,
        timestamp,
        command: command.to_string(),
        outcome,
    }
}

/// Re-executes `events` from the initial state. Frames are taken after every
/// accepted event that changes the proof state. Fails with `CorruptLog` at
/// the first event whose recorded outcome does not reproduce.
pub fn replay(session_id: &str, exercise: &ExerciseSpec, events: &[Event]) -> Result<(ReplayLog, Runner), ServiceError> {
    let corrupt = |ordinal: u64, reason: String| ServiceError::CorruptLog { ordinal, reason };
    let mut runner = Runner::new(exercise.clone()).map_err(|e| corrupt(0, e.to_string()))?;
    let mut frames = vec![Frame::capture(0, None, &runner)];
    for (i, e) in events.iter().enumerate() {
        if e.ordinal != i as u64 {
            return Err(corrupt(i as u64, format!("expected ordinal {i}, found {}", e.ordinal)));
        }
        let before = runner.state().structural_hash();
        let again = execute(&mut runner, e.ordinal, e.timestamp.clone(), &e.command);
        match (&e.outcome, &again.outcome) {
            (Outcome::Accepted { report: a }, Outcome::Accepted { report: b }) if a == b => {}
            (Outcome::Rejected { error: a }, Outcome::Rejected { error: b }) if a.kind == b.kind => {}
            (recorded, _) => {
                let what = if recorded.is_accepted() { "accepted" } else { "rejected" };
                return Err(corrupt(e.ordinal, format!("recorded as {what} but replays differently")));
            }
        }
        if again.outcome.is_accepted() && runner.state().structural_hash() != before {
            frames.push(Frame::capture(frames.len(), Some(e), &runner));
        }
    }
    Ok((
        ReplayLog {
            session_id: session_id.to_string(),
            frames,
        },
        runner,
    ))
}

/// Accepted commands in order, one per line.
pub fn script_of(events: &[Event]) -> String {
    events
        .iter()
        .filter(|e| e.outcome.is_accepted())
        .map(|e| format!("{}\n", e.command.trim()))
        .collect()
}

/// Session as returned by the API: student view plus derived state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub exercise_id: String,
    pub student_id: String,
    pub created: String,
    pub exercise: serde_json::Value,
    pub status: SessionStatus,
    pub goals: Vec<GoalJson>,
    /// Applicable rules for the first open goal.
    pub palette: Vec<String>,
    pub events: Vec<Event>,
}

impl SessionView {
    pub fn new(header: &SessionHeader, exercise: &ExerciseSpec, runner: &Runner, events: &[Event]) -> Self {
        let state = runner.state();
        let palette = state
            .open_goals()
            .first()
            .and_then(|g| state.list_applicable(*g).ok())
            .map(|rs| rs.iter().map(|r| r.to_string()).collect())
            .unwrap_or_default();
        SessionView {
            id: header.id.clone(),
            exercise_id: header.exercise_id.clone(),
            student_id: header.student_id.clone(),
            created: header.created.clone(),
            exercise: exercise.to_json(View::Student),
            status: runner.status().into(),
            goals: goals_of(state),
            palette,
            events: events.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndlab_core::corpus;

    fn run(id: &str, commands: &[&str]) -> (ExerciseSpec, Vec<Event>, Runner) {
        let e = corpus::exercise(id).unwrap().clone();
        let mut r = Runner::new(e.clone()).unwrap();
        let events = commands
            .iter()
            .enumerate()
            .map(|(i, c)| execute(&mut r, i as u64, "t".into(), c))
            .collect();
        (e, events, r)
    }

    #[test]
    fn identity_frames() {
        let (e, events, live) = run("identity", &["backward impl_intro", "backward assumption", "qed"]);
        let (log, r) = replay("s", &e, &events).unwrap();
        let open: Vec<usize> = log.frames.iter().map(|f| f.goals.len()).collect();
        assert_eq!(open, [1, 1, 0]);
        assert_eq!(r.status(), ProofStatus::Proved);
        assert_eq!(log.frames.last().unwrap().hash, live.state().structural_hash());
    }

    #[test]
    fn rejected_events_replay() {
        let (e, events, _) = run("identity", &["backward frob", "qed", "", "backward impl_intro"]);
        let kinds: Vec<_> = events
            .iter()
            .map(|e| match &e.outcome {
                Outcome::Rejected { error } => error.kind.as_str(),
                Outcome::Accepted { .. } => "accepted",
            })
            .collect();
        assert_eq!(kinds, ["SyntaxError", "ProofIncomplete", "SyntaxError", "accepted"]);
        let (log, _) = replay("s", &e, &events).unwrap();
        assert_eq!(log.frames.len(), 2);
        assert_eq!(log.frames[1].ordinal, Some(3));
    }

    #[test]
    fn tampered_logs_are_corrupt() {
        let (e, mut events, _) = run("identity", &["backward impl_intro", "backward assumption"]);
        events[1].command = "backward raa".into();
        match replay("s", &e, &events) {
            Err(ServiceError::CorruptLog { ordinal, .. }) => assert_eq!(ordinal, 1),
            other => panic!("{other:?}"),
        }
        let (e, mut events, _) = run("identity", &["backward impl_intro"]);
        events[0].ordinal = 4;
        assert!(matches!(replay("s", &e, &events), Err(ServiceError::CorruptLog { ordinal: 0, .. })));
    }

    #[test]
    fn undo_frames_return_to_earlier_states() {
        let (e, events, _) = run("identity", &["backward impl_intro", "undo", "backward impl_intro"]);
        let (log, _) = replay("s", &e, &events).unwrap();
        let h = log.hashes();
        assert_eq!(h.len(), 4);
        assert_eq!(h[0], h[2]);
        assert_eq!(h[1], h[3]);
    }

    #[test]
    fn script_keeps_accepted_commands() {
        let (_, events, _) = run("identity", &["backward impl_intro", "oops", "backward assumption", "qed"]);
        assert_eq!(script_of(&events), "backward impl_intro\nbackward assumption\nqed\n");
    }
}
