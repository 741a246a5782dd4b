use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::KernelError;
use crate::formula::{free_symbols, print_formula, Formula, Signature};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hypothesis {
    pub label: String,
    pub formula: Formula,
}

/// Labelled hypotheses and a conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(hypotheses: Vec<Hypothesis>, conclusion: Formula) -> Self {
        Self { hypotheses, conclusion }
    }

    /// Hypotheses labelled `h1`, `h2`, ... in order.
    pub fn from_formulas(hypotheses: Vec<Formula>, conclusion: Formula) -> Self {
        let hypotheses = hypotheses
            .into_iter()
            .enumerate()
            .map(|(i, formula)| Hypothesis {
                label: format!("h{}", i + 1),
                formula,
            })
            .collect();
        Self { hypotheses, conclusion }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.hypotheses.iter().map(|h| &h.formula).chain(std::iter::once(&self.conclusion))
    }

    pub fn hypothesis(&self, label: &str) -> Option<&Formula> {
        self.hypotheses.iter().find(|h| h.label == label).map(|h| &h.formula)
    }

    pub fn is_propositional(&self) -> bool {
        self.formulas().all(Formula::is_propositional)
    }

    pub fn has_quantifiers(&self) -> bool {
        self.formulas().any(Formula::has_quantifiers)
    }

    /// Propositional symbols in order of first occurrence, hypotheses first.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        for f in self.formulas() {
            f.collect_atoms(&mut out);
        }
        out
    }

    /// Checks the conditions for starting a proof: unique labels, closed
    /// formulas over `sig`, no parameters or unknowns.
    pub fn validate(&self, sig: &Signature) -> Result<(), KernelError> {
        let mut seen = BTreeSet::new();
        for h in &self.hypotheses {
            if !crate::formula::is_identifier(&h.label) {
                return Err(KernelError::MalformedSequent(format!("invalid label `{}`", h.label)));
            }
            if !seen.insert(&h.label) {
                return Err(KernelError::MalformedSequent(format!("duplicate label `{}`", h.label)));
            }
        }
        for f in self.formulas() {
            sig.check_formula(f).map_err(|e| KernelError::MalformedSequent(e.to_string()))?;
            if !f.is_closed() {
                return Err(KernelError::MalformedSequent(format!(
                    "`{}` has free variables",
                    print_formula(f)
                )));
            }
            let fs = free_symbols(f);
            if !fs.parameters.is_empty() || !fs.unknowns.is_empty() {
                return Err(KernelError::MalformedSequent(format!(
                    "`{}` mentions parameters or unknowns",
                    print_formula(f)
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hyps: Vec<String> = self.hypotheses.iter().map(|h| print_formula(&h.formula)).collect();
        if hyps.is_empty() {
            write!(f, "|- {}", print_formula(&self.conclusion))
        } else {
            write!(f, "{} |- {}", hyps.join(", "), print_formula(&self.conclusion))
        }
    }
}
