//! Conversion to conjunctive normal form.
//!
//! The naive route pushes negations inward and distributes disjunction over
//! conjunction. Its result is kept when it has at most [`NAIVE_LITERAL_LIMIT`]
//! literals; otherwise (or when the intermediate form outgrows
//! [`NAIVE_WORK_LIMIT`] literals) the definitional encoding is used instead,
//! naming every binary subformula with an auxiliary symbol `#t1`, `#t2`, ...
//! in post-order. Auxiliary names cannot clash with user symbols, which never
//! contain `#`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::formula::Formula;

/// Literal count above which the definitional encoding is preferred.
pub const NAIVE_LITERAL_LIMIT: usize = 64;
/// Bound on the intermediate size of the naive conversion.
pub const NAIVE_WORK_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub symbol: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(symbol: impl Into<String>) -> Self {
        Self {
            symbol: symbol.into(),
            positive: true,
        }
    }

    pub fn neg(symbol: impl Into<String>) -> Self {
        Self {
            symbol: symbol.into(),
            positive: false,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            symbol: self.symbol.clone(),
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            f.write_str(&self.symbol)
        } else {
            write!(f, "~{}", self.symbol)
        }
    }
}

pub type Clause = Vec<Literal>;

/// A conjunction of clauses. No clauses is true; an empty clause is false.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub clauses: Vec<Clause>,
}

impl Cnf {
    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    /// Symbols in order of first occurrence.
    pub fn symbols(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for l in self.clauses.iter().flatten() {
            if seen.insert(l.symbol.as_str()) {
                out.push(l.symbol.clone());
            }
        }
        out
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let ls: Vec<String> = c.iter().map(|l| l.to_string()).collect();
                format!("({})", ls.join(" \\/ "))
            })
            .collect();
        write!(f, "{{{}}}", cs.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfConversion {
    pub cnf: Cnf,
    pub aux_symbols: BTreeSet<String>,
}

fn check_propositional(f: &Formula) -> Result<(), OracleError> {
    if f.is_propositional() {
        Ok(())
    } else {
        Err(OracleError::QuantifiersPresent)
    }
}

/// Adds `l` to `c` unless present; returns false if `c` becomes a tautology.
fn push_literal(c: &mut Clause, l: &Literal) -> bool {
    if c.iter().any(|m| m.symbol == l.symbol && m.positive != l.positive) {
        return false;
    }
    if !c.contains(l) {
        c.push(l.clone());
    }
    true
}

fn and_cnf(mut a: Vec<Clause>, b: Vec<Clause>) -> Vec<Clause> {
    for c in b {
        if !a.contains(&c) {
            a.push(c);
        }
    }
    a
}

fn or_cnf(a: &[Clause], b: &[Clause], work: &mut usize) -> Option<Vec<Clause>> {
    let mut out: Vec<Clause> = Vec::new();
    for x in a {
        for y in b {
            let mut c = x.clone();
            if y.iter().all(|l| push_literal(&mut c, l)) && !out.contains(&c) {
                *work += c.len();
                if *work > NAIVE_WORK_LIMIT {
                    return None;
                }
                out.push(c);
            }
        }
    }
    Some(out)
}

/// CNF of `f` (if `positive`) or of its negation, as a clause list.
fn naive(f: &Formula, positive: bool, work: &mut usize) -> Option<Vec<Clause>> {
    let t = Vec::new();
    let bot = vec![Vec::new()];
    match f {
        Formula::Pred(p, _) => Some(vec![vec![Literal {
            symbol: p.clone(),
            positive,
        }]]),
        Formula::Bottom => Some(if positive { bot } else { t }),
        Formula::Not(a) => naive(a, !positive, work),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let conj = matches!(f, Formula::And(..)) == positive;
            let l = naive(a, positive, work)?;
            let r = naive(b, positive, work)?;
            if conj {
                Some(and_cnf(l, r))
            } else {
                or_cnf(&l, &r, work)
            }
        }
        Formula::Implies(a, b) => {
            if positive {
                let l = naive(a, false, work)?;
                let r = naive(b, true, work)?;
                or_cnf(&l, &r, work)
            } else {
                Some(and_cnf(naive(a, true, work)?, naive(b, false, work)?))
            }
        }
        Formula::Iff(a, b) => {
            // a <-> b is (~a \/ b) /\ (a \/ ~b); its negation is (a \/ b) /\ (~a \/ ~b).
            let (pa, na) = (naive(a, true, work)?, naive(a, false, work)?);
            let (pb, nb) = (naive(b, true, work)?, naive(b, false, work)?);
            if positive {
                Some(and_cnf(or_cnf(&na, &pb, work)?, or_cnf(&pa, &nb, work)?))
            } else {
                Some(and_cnf(or_cnf(&pa, &pb, work)?, or_cnf(&na, &nb, work)?))
            }
        }
        Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..) => None,
    }
}

struct Tseitin {
    clauses: Vec<Clause>,
    aux: BTreeSet<String>,
    next: usize,
}

impl Tseitin {
    fn fresh(&mut self) -> String {
        self.next += 1;
        let name = format!("#t{}", self.next);
        self.aux.insert(name.clone());
        name
    }

    fn encode(&mut self, f: &Formula) -> Literal {
        match f {
            Formula::Pred(p, _) => Literal::pos(p.clone()),
            Formula::Not(a) => self.encode(a).negated(),
            Formula::Bottom => {
                let t = Literal::pos(self.fresh());
                self.clauses.push(vec![t.negated()]);
                t
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let x = self.encode(a);
                let y = self.encode(b);
                let t = Literal::pos(self.fresh());
                let (nt, nx, ny) = (t.negated(), x.negated(), y.negated());
                let gate: Vec<Clause> = match f {
                    Formula::And(..) => vec![vec![nt.clone(), x.clone()], vec![nt, y.clone()], vec![t.clone(), nx, ny]],
                    Formula::Or(..) => vec![vec![nt, x.clone(), y.clone()], vec![t.clone(), nx], vec![t.clone(), ny]],
                    Formula::Implies(..) => vec![vec![nt, nx, y.clone()], vec![t.clone(), x.clone()], vec![t.clone(), ny]],
                    _ => vec![
                        vec![nt.clone(), nx.clone(), y.clone()],
                        vec![nt, x.clone(), ny.clone()],
                        vec![t.clone(), x, y],
                        vec![t.clone(), nx, ny],
                    ],
                };
                self.clauses.extend(gate);
                t
            }
            Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..) => unreachable!("checked propositional"),
        }
    }
}

/// The definitional encoding, regardless of size.
pub fn to_cnf_definitional(f: &Formula) -> Result<CnfConversion, OracleError> {
    check_propositional(f)?;
    let mut ts = Tseitin {
        clauses: Vec::new(),
        aux: BTreeSet::new(),
        next: 0,
    };
    let root = ts.encode(f);
    ts.clauses.push(vec![root]);
    Ok(CnfConversion {
        cnf: Cnf { clauses: ts.clauses },
        aux_symbols: ts.aux,
    })
}

/// An equisatisfiable CNF of `f`, naive when small enough.
pub fn to_cnf(f: &Formula) -> Result<CnfConversion, OracleError> {
    check_propositional(f)?;
    let mut work = 0;
    if let Some(clauses) = naive(f, true, &mut work) {
        let cnf = Cnf { clauses };
        if cnf.literal_count() <= NAIVE_LITERAL_LIMIT {
            return Ok(CnfConversion {
                cnf,
                aux_symbols: BTreeSet::new(),
            });
        }
    }
    to_cnf_definitional(f)
}
