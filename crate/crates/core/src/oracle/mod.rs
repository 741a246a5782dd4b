//! Classical semantics by brute force and by SAT solving: truth tables, CNF
//! conversion, DPLL, and countermodel search.

mod cnf;
mod dpll;
mod fo;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;
use crate::kernel::Sequent;
use crate::refute::Valuation;

pub use cnf::{to_cnf, to_cnf_definitional, Clause, Cnf, CnfConversion, Literal, NAIVE_LITERAL_LIMIT, NAIVE_WORK_LIMIT};
pub use dpll::{dpll, to_dimacs, SatResult};
pub use fo::{fo_countermodel_search, search_space, SEARCH_LIMIT};

/// Most symbols a truth table will enumerate.
pub const TRUTH_TABLE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum OracleError {
    #[error("the formula is not propositional")]
    QuantifiersPresent,
    #[error("{found} symbols exceed the truth-table limit of {limit}")]
    TooManySymbols { found: usize, limit: usize },
    #[error("{count} candidate structures of size {domain_size} exceed the search limit")]
    SignatureTooLarge { domain_size: usize, count: u128 },
    #[error("{0}")]
    InvalidArgument(String),
}

impl OracleError {
    pub fn kind(&self) -> &'static str {
        match self {
            OracleError::QuantifiersPresent => "QuantifiersPresent",
            OracleError::TooManySymbols { .. } => "TooManySymbols",
            OracleError::SignatureTooLarge { .. } => "SignatureTooLarge",
            OracleError::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleVerdict {
    Valid,
    Invalid(Valuation),
}

/// Propositional symbols of `s` in order of first occurrence.
pub fn sequent_symbols(s: &Sequent) -> Result<Vec<String>, OracleError> {
    if !s.formulas().all(Formula::is_propositional) {
        return Err(OracleError::QuantifiersPresent);
    }
    Ok(s.atoms())
}

/// Index-based formula for fast row evaluation.
enum Compiled {
    Var(usize),
    Bottom,
    Not(Box<Compiled>),
    Bin(u8, Box<Compiled>, Box<Compiled>),
}

fn compile(f: &Formula, symbols: &[String]) -> Compiled {
    let bin = |op, a: &Formula, b: &Formula| Compiled::Bin(op, Box::new(compile(a, symbols)), Box::new(compile(b, symbols)));
    match f {
        Formula::Pred(p, _) => Compiled::Var(symbols.iter().position(|s| s == p).expect("collected")),
        Formula::Bottom => Compiled::Bottom,
        Formula::Not(a) => Compiled::Not(Box::new(compile(a, symbols))),
        Formula::And(a, b) => bin(0, a, b),
        Formula::Or(a, b) => bin(1, a, b),
        Formula::Implies(a, b) => bin(2, a, b),
        Formula::Iff(a, b) => bin(3, a, b),
        Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..) => unreachable!("checked propositional"),
    }
}

fn row_value(c: &Compiled, row: u32) -> bool {
    match c {
        Compiled::Var(i) => row >> i & 1 == 1,
        Compiled::Bottom => false,
        Compiled::Not(a) => !row_value(a, row),
        Compiled::Bin(op, a, b) => {
            let (x, y) = (row_value(a, row), row_value(b, row));
            match op {
                0 => x && y,
                1 => x || y,
                2 => !x || y,
                _ => x == y,
            }
        }
    }
}

/// First falsifying row of the truth table, counting with the first symbol as
/// the least significant bit.
pub fn truth_table_countermodel(s: &Sequent) -> Result<Option<Valuation>, OracleError> {
    let symbols = sequent_symbols(s)?;
    if symbols.len() > TRUTH_TABLE_LIMIT {
        return Err(OracleError::TooManySymbols {
            found: symbols.len(),
            limit: TRUTH_TABLE_LIMIT,
        });
    }
    let hyps: Vec<Compiled> = s.hypotheses.iter().map(|h| compile(&h.formula, &symbols)).collect();
    let concl = compile(&s.conclusion, &symbols);
    for row in 0..(1u32 << symbols.len()) {
        if hyps.iter().all(|h| row_value(h, row)) && !row_value(&concl, row) {
            return Ok(Some(
                symbols
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (p.clone(), row >> i & 1 == 1))
                    .collect(),
            ));
        }
    }
    Ok(None)
}

pub fn truth_table_valid(s: &Sequent) -> Result<bool, OracleError> {
    Ok(truth_table_countermodel(s)?.is_none())
}

/// The formula satisfied exactly by the countermodels of `s`.
pub fn refutation_formula(s: &Sequent) -> Formula {
    let negated = Formula::not(s.conclusion.clone());
    s.hypotheses
        .iter()
        .rev()
        .fold(negated, |acc, h| Formula::and(h.formula.clone(), acc))
}

/// A countermodel found by the SAT route, total on the symbols of `s`.
pub fn find_countermodel(s: &Sequent) -> Result<Option<Valuation>, OracleError> {
    let symbols = sequent_symbols(s)?;
    let conv = to_cnf(&refutation_formula(s))?;
    Ok(match dpll(&conv.cnf) {
        SatResult::Unsat => None,
        SatResult::Sat(a) => Some(
            symbols
                .into_iter()
                .map(|p| {
                    let v = a.get(&p).copied().unwrap_or(false);
                    (p, v)
                })
                .collect(),
        ),
    })
}

pub fn decide(s: &Sequent) -> Result<OracleVerdict, OracleError> {
    Ok(match find_countermodel(s)? {
        None => OracleVerdict::Valid,
        Some(v) => OracleVerdict::Invalid(v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Signature};
    use crate::refute::{check_refutation, FiniteStructure, Model};

    fn prop() -> Signature {
        Signature::propositional(["p", "q", "r"])
    }

    fn seq(sig: &Signature, hyps: &[&str], goal: &str) -> Sequent {
        Sequent::from_formulas(
            hyps.iter().map(|h| parse_formula(h, sig).unwrap()).collect(),
            parse_formula(goal, sig).unwrap(),
        )
    }

    #[test]
    fn truth_tables() {
        let sig = prop();
        assert!(truth_table_valid(&seq(&sig, &[], "p \\/ ~p")).unwrap());
        assert!(!truth_table_valid(&seq(&sig, &["p -> q"], "q -> p")).unwrap());
        assert!(truth_table_valid(&seq(&sig, &[], "(p <-> q) <-> ((p -> q) /\\ (q -> p))")).unwrap());
        assert!(truth_table_valid(&seq(&sig, &[], "((p -> q) -> p) -> p")).unwrap());
        let fo = Signature::new().with_predicate("P", 1).unwrap().with_constant("c").unwrap();
        assert_eq!(
            truth_table_valid(&seq(&fo, &[], "P(c)")),
            Err(OracleError::QuantifiersPresent)
        );
    }

    #[test]
    fn too_many_symbols() {
        let names: Vec<String> = (0..21).map(|i| format!("a{i}x")).collect();
        let f = names
            .iter()
            .map(|n| Formula::atom(n.clone()))
            .reduce(Formula::or)
            .unwrap();
        let s = Sequent::from_formulas(vec![], f);
        assert_eq!(
            truth_table_valid(&s),
            Err(OracleError::TooManySymbols { found: 21, limit: 20 })
        );
        assert!(find_countermodel(&s).unwrap().is_some());
    }

    #[test]
    fn cnf_examples() {
        let sig = prop();
        let c = to_cnf(&parse_formula("p /\\ q", &sig).unwrap()).unwrap();
        assert_eq!(c.cnf.clauses, vec![vec![Literal::pos("p")], vec![Literal::pos("q")]]);
        assert!(c.aux_symbols.is_empty());
        let c = to_cnf(&parse_formula("~(p \\/ q)", &sig).unwrap()).unwrap();
        assert_eq!(c.cnf.clauses, vec![vec![Literal::neg("p")], vec![Literal::neg("q")]]);
        assert_eq!(c.cnf.to_string(), "{(~p), (~q)}");
        let c = to_cnf(&parse_formula("p \\/ (q /\\ r)", &sig).unwrap()).unwrap();
        assert_eq!(c.cnf.to_string(), "{(p \\/ q), (p \\/ r)}");
        let t = to_cnf(&parse_formula("p \\/ ~p", &sig).unwrap()).unwrap();
        assert!(t.cnf.clauses.is_empty());
        let f = to_cnf(&Formula::Bottom).unwrap();
        assert_eq!(f.cnf.clauses, vec![Vec::<Literal>::new()]);
    }

    #[test]
    fn large_formulas_use_auxiliary_symbols() {
        let names: Vec<String> = (0..8).map(|i| ["p", "q", "r", "s", "t", "u", "v", "w"][i].to_string()).collect();
        let sig = Signature::propositional(names.iter().cloned());
        let text = "(p /\\ q) \\/ (r /\\ s) \\/ (t /\\ u) \\/ (v /\\ w)";
        let at_limit = to_cnf(&parse_formula(text, &sig).unwrap()).unwrap();
        assert_eq!(at_limit.cnf.literal_count(), NAIVE_LITERAL_LIMIT);
        assert!(at_limit.aux_symbols.is_empty());
        let f = parse_formula(&format!("{text} \\/ (p /\\ ~q)"), &sig).unwrap();
        let c = to_cnf(&f).unwrap();
        assert!(!c.aux_symbols.is_empty());
        assert!(c.aux_symbols.iter().all(|a| a.starts_with("#t")));
        assert!(dpll(&c.cnf).is_sat());
        let d = to_cnf_definitional(&parse_formula("p /\\ q", &sig).unwrap()).unwrap();
        assert_eq!(d.aux_symbols.len(), 1);
        assert_eq!(d.cnf.clauses.len(), 4);
    }

    #[test]
    fn dpll_examples() {
        assert_eq!(dpll(&Cnf::default()), SatResult::Sat(Default::default()));
        let cnf = Cnf {
            clauses: vec![vec![Literal::pos("p")], vec![Literal::neg("p")]],
        };
        assert_eq!(dpll(&cnf), SatResult::Unsat);
        // No units or pure literals: the false branch of p is tried first, forcing q.
        let cnf = Cnf {
            clauses: vec![
                vec![Literal::pos("p"), Literal::pos("q")],
                vec![Literal::neg("p"), Literal::neg("q")],
            ],
        };
        let SatResult::Sat(a) = dpll(&cnf) else { panic!() };
        assert!(!a["p"]);
        assert!(a["q"]);
    }

    #[test]
    fn dimacs() {
        let cnf = Cnf {
            clauses: vec![vec![Literal::pos("p"), Literal::neg("q")], vec![Literal::pos("q")], vec![]],
        };
        assert_eq!(to_dimacs(&cnf), "c var 1 p\nc var 2 q\np cnf 2 3\n1 -2 0\n2 0\n0\n");
    }

    #[test]
    fn countermodels() {
        let sig = prop();
        assert_eq!(find_countermodel(&seq(&sig, &["p"], "p")).unwrap(), None);
        let s = seq(&sig, &["p -> q"], "p");
        let v = find_countermodel(&s).unwrap().unwrap();
        assert_eq!(v.get("p"), Some(false));
        assert!(check_refutation(&s, &Model::Valuation(v)).unwrap().refutes());
        let bottom = Sequent::from_formulas(vec![], Formula::Bottom);
        assert_eq!(find_countermodel(&bottom).unwrap(), Some(Valuation::new()));
    }

    #[test]
    fn finite_model_search() {
        let sig = Signature::new()
            .with_predicate("P", 1)
            .unwrap()
            .with_predicate("Q", 1)
            .unwrap()
            .with_predicate("R", 2)
            .unwrap()
            .with_constant("c")
            .unwrap();
        let s = seq(&sig, &["(forall x) P(x)"], "(exists x) Q(x)");
        let m = fo_countermodel_search(&s, 4).unwrap().unwrap();
        let mut expected = FiniteStructure::with_size(1);
        expected.set_predicate("P", 1, [vec![0]]);
        expected.set_predicate("Q", 1, []);
        assert_eq!(m, expected);
        assert_eq!(Model::Structure(m).to_text(), "domain = {0}; P = {(0)}; Q = {}");
        assert_eq!(fo_countermodel_search(&seq(&sig, &["P(c)"], "P(c)"), 8).unwrap(), None);
        let shift = seq(&sig, &["(forall x)(forall y) R(x,y)"], "(forall y)(forall x) R(x,y)");
        assert_eq!(fo_countermodel_search(&shift, 4).unwrap(), None);
        assert!(matches!(
            fo_countermodel_search(&shift, 5),
            Err(OracleError::SignatureTooLarge { domain_size: 5, .. })
        ));
        let swap = seq(&sig, &["(exists x)(forall y) R(x,y)"], "(forall y)(exists x) R(y,x)");
        let m = fo_countermodel_search(&swap, 3).unwrap().unwrap();
        assert_eq!(m.size(), 2);
        assert!(check_refutation(&swap, &Model::Structure(m)).unwrap().refutes());
    }

    #[test]
    fn search_space_formula() {
        let sig = Signature::new().with_predicate("R", 2).unwrap().with_function("f", 1).unwrap().with_constant("c").unwrap();
        let s = seq(&sig, &["R(c, f(c))"], "false");
        let mut used = crate::formula::SymbolUse::default();
        s.formulas().for_each(|f| f.collect_symbols(&mut used));
        assert_eq!(search_space(&used, 2), (1 << 4) * 4 * 2);
        assert_eq!(search_space(&used, 3), (1 << 9) * 27 * 3);
    }
}
