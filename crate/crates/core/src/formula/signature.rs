use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::syntax::{Formula, Term};
use super::FormulaError;

/// What a declared name stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Predicate(usize),
    Function(usize),
    Constant,
}

/// Declared predicate, function and constant symbols. A name belongs to at
/// most one of the three groups.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    predicates: BTreeMap<String, usize>,
    #[serde(default)]
    functions: BTreeMap<String, usize>,
    #[serde(default)]
    constants: BTreeSet<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Nullary predicates only.
    pub fn propositional<I, S>(symbols: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut sig = Signature::new();
        for s in symbols {
            let s = s.into();
            sig.predicates.entry(s).or_insert(0);
        }
        sig
    }

    fn check_fresh(&self, name: &str) -> Result<(), FormulaError> {
        if self.kind(name).is_some() {
            return Err(FormulaError::DuplicateSymbol(name.to_string()));
        }
        if !is_identifier(name) || is_keyword(name) {
            return Err(FormulaError::InvalidSymbol(name.to_string()));
        }
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), FormulaError> {
        self.check_fresh(name)?;
        self.predicates.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), FormulaError> {
        self.check_fresh(name)?;
        self.functions.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), FormulaError> {
        self.check_fresh(name)?;
        self.constants.insert(name.to_string());
        Ok(())
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Result<Self, FormulaError> {
        self.add_predicate(name, arity)?;
        Ok(self)
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Result<Self, FormulaError> {
        self.add_function(name, arity)?;
        Ok(self)
    }

    pub fn with_constant(mut self, name: &str) -> Result<Self, FormulaError> {
        self.add_constant(name)?;
        Ok(self)
    }

    pub fn kind(&self, name: &str) -> Option<SymbolKind> {
        if let Some(a) = self.predicates.get(name) {
            Some(SymbolKind::Predicate(*a))
        } else if let Some(a) = self.functions.get(name) {
            Some(SymbolKind::Function(*a))
        } else if self.constants.contains(name) {
            Some(SymbolKind::Constant)
        } else {
            None
        }
    }

    pub fn predicates(&self) -> &BTreeMap<String, usize> {
        &self.predicates
    }

    pub fn functions(&self) -> &BTreeMap<String, usize> {
        &self.functions
    }

    pub fn constants(&self) -> &BTreeSet<String> {
        &self.constants
    }

    /// Re-checks the group-uniqueness invariant (useful after deserialization).
    pub fn validate(&self) -> Result<(), FormulaError> {
        let mut seen = BTreeSet::new();
        let names = self
            .predicates
            .keys()
            .chain(self.functions.keys())
            .chain(self.constants.iter());
        for name in names {
            if !seen.insert(name) {
                return Err(FormulaError::DuplicateSymbol(name.clone()));
            }
            if !is_identifier(name) || is_keyword(name) {
                return Err(FormulaError::InvalidSymbol(name.clone()));
            }
        }
        Ok(())
    }

    /// Checks that every symbol of `f` is declared with the right arity.
    pub fn check_formula(&self, f: &Formula) -> Result<(), FormulaError> {
        match f {
            Formula::Pred(p, args) => {
                match self.kind(p) {
                    Some(SymbolKind::Predicate(a)) if a == args.len() => {}
                    Some(SymbolKind::Predicate(a)) => {
                        return Err(FormulaError::ArityMismatch {
                            symbol: p.clone(),
                            expected: a,
                            found: args.len(),
                        })
                    }
                    _ => return Err(FormulaError::UnknownSymbol(p.clone())),
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
            Formula::Eq(l, r) => {
                self.check_term(l)?;
                self.check_term(r)
            }
            Formula::Bottom => Ok(()),
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => self.check_formula(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
        }
    }

    pub fn check_term(&self, t: &Term) -> Result<(), FormulaError> {
        match t {
            Term::Const(c) => match self.kind(c) {
                Some(SymbolKind::Constant) | Some(SymbolKind::Function(0)) => Ok(()),
                _ => Err(FormulaError::UnknownSymbol(c.clone())),
            },
            Term::App(fun, args) => {
                match self.kind(fun) {
                    Some(SymbolKind::Function(a)) if a == args.len() => {}
                    Some(SymbolKind::Function(a)) => {
                        return Err(FormulaError::ArityMismatch {
                            symbol: fun.clone(),
                            expected: a,
                            found: args.len(),
                        })
                    }
                    _ => return Err(FormulaError::UnknownSymbol(fun.clone())),
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            Term::Var(_) | Term::Param(_) | Term::Unknown(_) => Ok(()),
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn is_keyword(s: &str) -> bool {
    matches!(s, "forall" | "exists" | "false")
}
