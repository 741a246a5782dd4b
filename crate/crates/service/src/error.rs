use ndlab_core::exercise::ExerciseError;
use ndlab_core::generate::GenerateError;
use thiserror::Error;

use crate::session::SessionStatus;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("no exercise `{0}`")]
    NoSuchExercise(String),
    #[error("no session `{0}`")]
    NoSuchSession(String),
    #[error("the session is closed ({0:?})")]
    SessionClosed(SessionStatus),
    #[error("the session log is corrupt at event {ordinal}: {reason}")]
    CorruptLog { ordinal: u64, reason: String },
    #[error("the proof is not complete")]
    ProofIncomplete,
    #[error("storage failure: {0}")]
    Persistence(String),
    #[error("{0}")]
    BadRequest(String),
    #[error(transparent)]
    Exercise(#[from] ExerciseError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
}

impl ServiceError {
    pub fn kind(&self) -> &'static str {
        match self {
            ServiceError::NoSuchExercise(_) => "NoSuchExercise",
            ServiceError::NoSuchSession(_) => "NoSuchSession",
            ServiceError::SessionClosed(_) => "SessionClosed",
            ServiceError::CorruptLog { .. } => "CorruptLog",
            ServiceError::ProofIncomplete => "ProofIncomplete",
            ServiceError::Persistence(_) => "Persistence",
            ServiceError::BadRequest(_) => "BadRequest",
            ServiceError::Exercise(_) => "InvalidExercise",
            ServiceError::Generate(e) => e.kind(),
        }
    }

    /// Whether retrying the same request may succeed.
    pub fn retriable(&self) -> bool {
        matches!(self, ServiceError::Persistence(_))
    }
}

impl From<std::io::Error> for ServiceError {
    fn from(e: std::io::Error) -> Self {
        ServiceError::Persistence(e.to_string())
    }
}
