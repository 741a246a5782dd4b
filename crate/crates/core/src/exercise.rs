//! Exercise specifications and exercise-pack files.
//!
//! An exercise serializes as JSON with formulas as text:
//!
//! ```json
//! {
//!   "id": "shift",
//!   "signature": {"predicates": {"P": 2}, "functions": {}, "constants": []},
//!   "hypotheses": [{"label": "h1", "formula": "(forall x) (forall y) P(x, y)"}],
//!   "conclusion": "(forall y) (forall x) P(x, y)",
//!   "mode": "prove",
//!   "definitions": [],
//!   "automation_cap": {"max_level": 1, "budget": 50},
//!   "difficulty": 6,
//!   "provenance": {"kind": "handcrafted"}
//! }
//! ```
//!
//! The instructor view adds `hidden_status` (mystery exercises) and
//! `certificate` (a countermodel, see [`Model`]) when present. The student
//! view never carries either. A pack is `{"name": ..., "exercises": [...]}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::definitions::{Definition, DefinitionSet, DefinitionVerdict};
use crate::formula::{parse_formula, print_formula, Signature};
use crate::kernel::{Hypothesis, ProofState, Sequent};
use crate::oracle;
use crate::refute::{check_refutation, Model};
use crate::tactic::AutomationPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Prove,
    Refute,
    Mystery,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HiddenStatus {
    Provable,
    Refutable,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Generated { seed: u64, config_digest: String },
    Handcrafted,
}

/// Which fields a serialization includes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum View {
    Instructor,
    Student,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExerciseSpec {
    pub id: String,
    pub signature: Arc<Signature>,
    pub sequent: Sequent,
    pub mode: Mode,
    pub hidden_status: Option<HiddenStatus>,
    pub certificate: Option<Model>,
    pub definitions: DefinitionSet,
    pub automation_cap: AutomationPolicy,
    pub difficulty: u32,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExerciseError {
    #[error("malformed exercise file: {0}")]
    Json(String),
    #[error("exercise {id}: {reason}")]
    Invalid { id: String, reason: String },
}

#[derive(Serialize, Deserialize)]
struct HypothesisJson {
    label: String,
    formula: String,
}

#[derive(Serialize, Deserialize)]
struct ExerciseJson {
    id: String,
    signature: Signature,
    hypotheses: Vec<HypothesisJson>,
    conclusion: String,
    mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hidden_status: Option<HiddenStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certificate: Option<Model>,
    #[serde(default)]
    definitions: Vec<String>,
    automation_cap: AutomationPolicy,
    #[serde(default)]
    difficulty: u32,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct PackJson {
    name: String,
    exercises: Vec<serde_json::Value>,
}

/// A named collection of exercises, as stored in one pack file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExercisePack {
    pub name: String,
    pub exercises: Vec<ExerciseSpec>,
}

impl ExerciseSpec {
    /// A handcrafted prove exercise with default automation and no definitions.
    pub fn prove(id: impl Into<String>, signature: Signature, sequent: Sequent) -> Self {
        ExerciseSpec {
            id: id.into(),
            signature: Arc::new(signature),
            sequent,
            mode: Mode::Prove,
            hidden_status: None,
            certificate: None,
            definitions: DefinitionSet::default(),
            automation_cap: AutomationPolicy::default(),
            difficulty: 0,
            provenance: Provenance::Handcrafted,
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> ExerciseError {
        ExerciseError::Invalid {
            id: self.id.clone(),
            reason: reason.into(),
        }
    }

    /// Checks the invariants tied to the mode: a prove exercise is valid, a
    /// refute exercise carries a certificate that refutes it, and a mystery
    /// exercise records a status agreeing with the oracle.
    pub fn validate(&self) -> Result<(), ExerciseError> {
        self.signature.validate().map_err(|e| self.invalid(e.to_string()))?;
        self.sequent.validate(&self.signature).map_err(|e| self.invalid(e.to_string()))?;
        if let DefinitionVerdict::Cycle(c) = self.definitions.check() {
            return Err(self.invalid(format!("circular definitions: {}", c.join(" -> "))));
        }
        self.automation_cap.validate().map_err(|e| self.invalid(e))?;
        let propositional = self.sequent.is_propositional();
        let valid = if propositional {
            Some(oracle::truth_table_valid(&self.sequent).map_err(|e| self.invalid(e.to_string()))?)
        } else {
            None
        };
        let certificate_refutes = |m: &Model| -> Result<(), ExerciseError> {
            match check_refutation(&self.sequent, m) {
                Ok(v) if v.refutes() => Ok(()),
                Ok(_) => Err(self.invalid("the certificate does not refute the sequent")),
                Err(e) => Err(self.invalid(format!("bad certificate: {e}"))),
            }
        };
        match self.mode {
            Mode::Prove => {
                if self.hidden_status.is_some() || self.certificate.is_some() {
                    return Err(self.invalid("prove exercises carry no status or certificate"));
                }
                if valid == Some(false) {
                    return Err(self.invalid("the sequent is not valid"));
                }
            }
            Mode::Refute => {
                let Some(m) = &self.certificate else {
                    return Err(self.invalid("refute exercises need a certificate"));
                };
                certificate_refutes(m)?;
            }
            Mode::Mystery => {
                let status = self.hidden_status.ok_or_else(|| self.invalid("mystery exercises need a hidden status"))?;
                if let Some(v) = valid {
                    if v != (status == HiddenStatus::Provable) {
                        return Err(self.invalid("the hidden status disagrees with the oracle"));
                    }
                }
                match (status, &self.certificate) {
                    (HiddenStatus::Refutable, Some(m)) => certificate_refutes(m)?,
                    (HiddenStatus::Refutable, None) if !propositional => {
                        return Err(self.invalid("first-order refutable exercises need a certificate"))
                    }
                    (HiddenStatus::Provable, Some(_)) => return Err(self.invalid("a provable exercise has no countermodel")),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// The initial proof state.
    pub fn init_proof(&self) -> Result<ProofState, crate::kernel::KernelError> {
        ProofState::init(self.signature.clone(), self.sequent.clone())
    }

    pub fn to_json(&self, view: View) -> serde_json::Value {
        let instructor = view == View::Instructor;
        let dto = ExerciseJson {
            id: self.id.clone(),
            signature: (*self.signature).clone(),
            hypotheses: self
                .sequent
                .hypotheses
                .iter()
                .map(|h| HypothesisJson {
                    label: h.label.clone(),
                    formula: print_formula(&h.formula),
                })
                .collect(),
            conclusion: print_formula(&self.sequent.conclusion),
            mode: self.mode,
            hidden_status: self.hidden_status.filter(|_| instructor),
            certificate: self.certificate.clone().filter(|_| instructor),
            definitions: self.definitions.iter().map(|d| d.to_string()).collect(),
            automation_cap: self.automation_cap,
            difficulty: self.difficulty,
            provenance: self.provenance.clone(),
        };
        serde_json::to_value(dto).expect("exercise serializes")
    }

    /// Parses and validates one exercise object.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, ExerciseError> {
        let dto: ExerciseJson = serde_json::from_value(v.clone()).map_err(|e| ExerciseError::Json(e.to_string()))?;
        let id = dto.id.clone();
        let invalid = |reason: String| ExerciseError::Invalid { id: id.clone(), reason };
        dto.signature.validate().map_err(|e| invalid(e.to_string()))?;
        let sig = dto.signature;
        let hypotheses = dto
            .hypotheses
            .iter()
            .map(|h| {
                Ok(Hypothesis {
                    label: h.label.clone(),
                    formula: parse_formula(&h.formula, &sig).map_err(|e| invalid(format!("{}: {e}", h.label)))?,
                })
            })
            .collect::<Result<Vec<_>, ExerciseError>>()?;
        let conclusion = parse_formula(&dto.conclusion, &sig).map_err(|e| invalid(format!("conclusion: {e}")))?;
        let defs = dto
            .definitions
            .iter()
            .map(|d| Definition::parse(d, &sig).map_err(|e| invalid(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let spec = ExerciseSpec {
            id: dto.id,
            signature: Arc::new(sig),
            sequent: Sequent::new(hypotheses, conclusion),
            mode: dto.mode,
            hidden_status: dto.hidden_status,
            certificate: dto.certificate,
            definitions: DefinitionSet::new(defs),
            automation_cap: dto.automation_cap,
            difficulty: dto.difficulty,
            provenance: dto.provenance,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Pretty JSON text; byte-stable for equal specs.
    pub fn to_json_string(&self, view: View) -> String {
        serde_json::to_string_pretty(&self.to_json(view)).expect("exercise serializes")
    }
}

impl ExercisePack {
    pub fn to_json(&self, view: View) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "exercises": self.exercises.iter().map(|e| e.to_json(view)).collect::<Vec<_>>(),
        })
    }

    pub fn to_json_string(&self, view: View) -> String {
        serde_json::to_string_pretty(&self.to_json(view)).expect("pack serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, ExerciseError> {
        let dto: PackJson = serde_json::from_str(text).map_err(|e| ExerciseError::Json(e.to_string()))?;
        let exercises = dto.exercises.iter().map(ExerciseSpec::from_json).collect::<Result<Vec<_>, _>>()?;
        Ok(ExercisePack {
            name: dto.name,
            exercises,
        })
    }
}
