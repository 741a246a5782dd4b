//! Core of the natural-deduction workbench: formulas, the proof kernel,
//! countermodels, decision procedures, tactics and exercise generation.

pub mod formula;
pub mod definitions;
pub mod kernel;
pub mod oracle;
pub mod refute;
pub mod exercise;
pub mod tactic;
pub mod generate;
pub mod corpus;
