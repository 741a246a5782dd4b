//! Abstract syntax for first-order terms and formulas.
//!
//! Three kinds of variable-like terms are kept apart:
//!
//! - [`Term::Var`] is a variable bound by a quantifier (named, renamed on demand),
//! - [`Term::Param`] is an eigenvariable (`x1`) standing for an arbitrary object,
//! - [`Term::Unknown`] is a placeholder (`?1`) that may be instantiated later.
//!
//! Parameters and unknowns are never bound by a quantifier.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// An eigenvariable. Printed as its base name followed by its ordinal, e.g. `y1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub ordinal: u32,
}

impl Param {
    pub fn new(name: impl Into<String>, ordinal: u32) -> Self {
        Self {
            name: name.into(),
            ordinal,
        }
    }

    /// Splits an identifier such as `x12` into a parameter `(x, 12)`.
    ///
    /// Only purely alphabetic base names followed by at least one digit qualify.
    pub fn from_ident(ident: &str) -> Option<Param> {
        let split = ident.find(|c: char| c.is_ascii_digit())?;
        let (base, digits) = ident.split_at(split);
        if base.is_empty()
            || !base.chars().all(|c| c.is_ascii_alphabetic())
            || !digits.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let ordinal = digits.parse().ok()?;
        Some(Param::new(base, ordinal))
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name, self.ordinal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    /// Quantifier-bound variable.
    Var(String),
    Param(Param),
    /// Placeholder `?n`.
    Unknown(u32),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn param(name: impl Into<String>, ordinal: u32) -> Self {
        Term::Param(Param::new(name, ordinal))
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_params(&self, out: &mut BTreeSet<Param>) {
        match self {
            Term::Param(p) => {
                out.insert(p.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_params(out)),
            _ => {}
        }
    }

    pub fn collect_unknowns(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Unknown(n) => {
                out.insert(*n);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_unknowns(out)),
            _ => {}
        }
    }

    /// True when the term mentions no bound variable.
    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_closed),
            _ => true,
        }
    }

    pub fn contains_unknown(&self, n: u32) -> bool {
        match self {
            Term::Unknown(m) => *m == n,
            Term::App(_, args) => args.iter().any(|a| a.contains_unknown(n)),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    /// A nullary predicate, i.e. a propositional symbol.
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Pred(name.into(), Vec::new())
    }

    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Pred(name.into(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Formula::Bottom)
    }

    pub fn has_quantifiers(&self) -> bool {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => true,
            Formula::Not(a) => a.has_quantifiers(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.has_quantifiers() || b.has_quantifiers()
            }
            _ => false,
        }
    }

    /// Quantifier-free and built only from nullary predicates and `false`.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Pred(_, args) => args.is_empty(),
            Formula::Bottom => true,
            Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..) => false,
            Formula::Not(a) => a.is_propositional(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
        }
    }

    /// Number of connective and quantifier nodes.
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Pred(..) | Formula::Eq(..) | Formula::Bottom => 0,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.connective_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.connective_count() + b.connective_count()
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Pred(..) | Formula::Eq(..) | Formula::Bottom => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Propositional symbols in order of first occurrence (left to right).
    pub fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            Formula::Pred(p, args) if args.is_empty() => {
                if !out.iter().any(|q| q == p) {
                    out.push(p.clone());
                }
            }
            Formula::Pred(..) | Formula::Eq(..) | Formula::Bottom => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Bound-variable names occurring free (only non-empty for open formulas).
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Pred(_, args) => args.iter().for_each(|t| term(t, bound, out)),
            Formula::Eq(l, r) => {
                term(l, bound, out);
                term(r, bound, out);
            }
            Formula::Bottom => {}
            Formula::Not(a) => a.collect_free_vars(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free_vars(bound, out);
                b.collect_free_vars(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                body.collect_free_vars(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every term occurrence, in left-to-right order.
    pub fn for_each_term<'a>(&'a self, visit: &mut impl FnMut(&'a Term)) {
        match self {
            Formula::Pred(_, args) => args.iter().for_each(&mut *visit),
            Formula::Eq(l, r) => {
                visit(l);
                visit(r);
            }
            Formula::Bottom => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.for_each_term(visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.for_each_term(visit);
                b.for_each_term(visit);
            }
        }
    }

    /// Collects every symbol name (predicates, functions, constants) with its
    /// arity and kind.
    pub fn collect_symbols(&self, out: &mut SymbolUse) {
        fn term(t: &Term, out: &mut SymbolUse) {
            match t {
                Term::Const(c) => {
                    out.constants.insert(c.clone());
                }
                Term::App(f, args) => {
                    out.functions.insert((f.clone(), args.len()));
                    args.iter().for_each(|a| term(a, out));
                }
                _ => {}
            }
        }
        match self {
            Formula::Pred(p, args) => {
                out.predicates.insert((p.clone(), args.len()));
                args.iter().for_each(|a| term(a, out));
            }
            Formula::Eq(l, r) => {
                out.uses_equality = true;
                term(l, out);
                term(r, out);
            }
            Formula::Bottom => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.collect_symbols(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }

    /// Immediate subformulas, in position order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                vec![a, b]
            }
            _ => Vec::new(),
        }
    }
}

/// Symbols occurring in a formula or sequent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolUse {
    pub predicates: BTreeSet<(String, usize)>,
    pub functions: BTreeSet<(String, usize)>,
    pub constants: BTreeSet<String>,
    pub uses_equality: bool,
}

/// Parameters and unknowns occurring in a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeSymbols {
    pub parameters: BTreeSet<Param>,
    pub unknowns: BTreeSet<u32>,
}

/// Parameters and unknowns of `f`. Neither can be bound, so every occurrence counts.
pub fn free_symbols(f: &Formula) -> FreeSymbols {
    let mut out = FreeSymbols::default();
    f.for_each_term(&mut |t| {
        t.collect_params(&mut out.parameters);
        t.collect_unknowns(&mut out.unknowns);
    });
    out
}

pub fn term_free_symbols(t: &Term) -> FreeSymbols {
    let mut out = FreeSymbols::default();
    t.collect_params(&mut out.parameters);
    t.collect_unknowns(&mut out.unknowns);
    out
}
