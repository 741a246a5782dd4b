//! Countermodel search over small finite structures.
//!
//! For domain size `n` the search space has
//!
//! ```text
//! prod_P 2^(n^arity(P)) * prod_f n^(n^arity(f)) * n^(#constants)
//! ```
//!
//! candidates. A size whose count exceeds [`SEARCH_LIMIT`] aborts the search
//! with `SignatureTooLarge`. Elements are `0..n`; candidates are enumerated
//! odometer-style with predicate entries least significant, then function
//! entries, then constants (symbols alphabetically, argument tuples
//! lexicographically).
//!
//! Two symmetry cuts skip candidates isomorphic to earlier ones: constants must
//! name elements in first-use order (the first constant denotes `0`, each later
//! one at most one more than the largest used so far), and among the elements
//! no constant names, the first unary predicate's extension must be an initial
//! segment.

use std::collections::BTreeMap;

use super::OracleError;
use crate::formula::{free_symbols, SymbolUse};
use crate::kernel::Sequent;
use crate::refute::{check_refutation, satisfies, FiniteStructure, Model, MAX_DOMAIN, MAX_FUNCTION_ARITY};

/// Largest number of candidate structures examined for one domain size.
pub const SEARCH_LIMIT: u128 = 1 << 20;

enum Slot {
    Pred(String, Vec<usize>),
    Func(String, Vec<usize>),
    Const(String),
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// Number of candidate structures of size `n`.
pub fn search_space(used: &SymbolUse, n: usize) -> u128 {
    let n = n as u128;
    let mut total: u128 = 1;
    let mut mul = |base: u128, exp: u128| {
        for _ in 0..exp {
            total = total.saturating_mul(base);
            if total > u64::MAX as u128 {
                return;
            }
        }
    };
    for (_, k) in &used.predicates {
        mul(2, n.pow(*k as u32));
    }
    for (_, k) in &used.functions {
        mul(n, n.pow(*k as u32));
    }
    mul(n, used.constants.len() as u128);
    total
}

fn symbols(s: &Sequent) -> SymbolUse {
    let mut used = SymbolUse::default();
    for f in s.formulas() {
        f.collect_symbols(&mut used);
    }
    used
}

struct Search<'a> {
    s: &'a Sequent,
    slots: Vec<Slot>,
    radix: Vec<usize>,
    digits: Vec<usize>,
    model: Model,
    constants: Vec<usize>,
    first_unary: Option<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(s: &'a Sequent, used: &SymbolUse, n: usize) -> Self {
        let mut structure = FiniteStructure::with_size(n);
        let mut slots = Vec::new();
        let mut radix = Vec::new();
        let mut first_unary = None;
        for (p, k) in &used.predicates {
            structure.set_predicate(p, *k, []);
            let start = slots.len();
            for t in tuples(n, *k) {
                slots.push(Slot::Pred(p.clone(), t));
                radix.push(2);
            }
            if *k == 1 && first_unary.is_none() {
                first_unary = Some((start..slots.len()).collect());
            }
        }
        for (f, k) in &used.functions {
            let ts = tuples(n, *k);
            structure.set_function(f, *k, ts.iter().map(|t| (t.clone(), 0)));
            for t in ts {
                slots.push(Slot::Func(f.clone(), t));
                radix.push(n);
            }
        }
        let mut constants = Vec::new();
        for c in &used.constants {
            structure.set_constant(c, 0);
            constants.push(slots.len());
            slots.push(Slot::Const(c.clone()));
            radix.push(n);
        }
        let digits = vec![0; slots.len()];
        Search {
            s,
            slots,
            radix,
            digits,
            model: Model::Structure(structure),
            constants,
            first_unary,
        }
    }

    fn structure(&self) -> &FiniteStructure {
        match &self.model {
            Model::Structure(s) => s,
            Model::Valuation(_) => unreachable!("built as a structure"),
        }
    }

    fn write(&mut self, i: usize) {
        let d = self.digits[i];
        let Model::Structure(structure) = &mut self.model else {
            unreachable!("built as a structure")
        };
        match &self.slots[i] {
            Slot::Pred(p, t) => {
                let table = structure.predicates.get_mut(p).expect("declared");
                if d == 1 {
                    table.tuples.insert(t.clone());
                } else {
                    table.tuples.remove(t);
                }
            }
            Slot::Func(f, t) => {
                structure.functions.get_mut(f).expect("declared").table.insert(t.clone(), d);
            }
            Slot::Const(c) => {
                structure.constants.insert(c.clone(), d);
            }
        }
    }

    /// Advances to the next candidate; false once all were visited.
    fn advance(&mut self) -> bool {
        for i in 0..self.digits.len() {
            self.digits[i] += 1;
            if self.digits[i] < self.radix[i] {
                self.write(i);
                return true;
            }
            self.digits[i] = 0;
            self.write(i);
        }
        false
    }

    fn canonical(&self) -> bool {
        let mut named = 0;
        for &i in &self.constants {
            let v = self.digits[i];
            if v > named {
                return false;
            }
            if v == named {
                named += 1;
            }
        }
        if let Some(slots) = &self.first_unary {
            // Slot j holds element j.
            let mut outside = false;
            for &i in &slots[named.min(slots.len())..] {
                if self.digits[i] == 1 && outside {
                    return false;
                }
                outside |= self.digits[i] == 0;
            }
        }
        true
    }

    fn refutes(&self) -> bool {
        let env = BTreeMap::new();
        let holds = |f| satisfies(f, &self.model, &env).unwrap_or(false);
        self.s.hypotheses.iter().all(|h| holds(&h.formula))
            && !satisfies(&self.s.conclusion, &self.model, &env).unwrap_or(true)
    }

    fn run(&mut self) -> Option<FiniteStructure> {
        loop {
            if self.canonical()
                && self.refutes()
                && check_refutation(self.s, &self.model).is_ok_and(|v| v.refutes())
            {
                return Some(self.structure().clone());
            }
            if !self.advance() {
                return None;
            }
        }
    }
}

/// Searches domain sizes `1..=max_domain` for a structure refuting `s`.
pub fn fo_countermodel_search(s: &Sequent, max_domain: usize) -> Result<Option<FiniteStructure>, OracleError> {
    if max_domain == 0 || max_domain > MAX_DOMAIN {
        return Err(OracleError::InvalidArgument(format!("max_domain must be between 1 and {MAX_DOMAIN}")));
    }
    for f in s.formulas() {
        let fr = free_symbols(f);
        if !fr.parameters.is_empty() || !fr.unknowns.is_empty() {
            return Err(OracleError::InvalidArgument("the sequent mentions parameters or unknowns".into()));
        }
    }
    let used = symbols(s);
    if let Some((f, k)) = used.functions.iter().find(|(_, k)| *k > MAX_FUNCTION_ARITY) {
        return Err(OracleError::InvalidArgument(format!("{f} has arity {k}, at most {MAX_FUNCTION_ARITY} is supported")));
    }
    for n in 1..=max_domain {
        let count = search_space(&used, n);
        if count > SEARCH_LIMIT {
            return Err(OracleError::SignatureTooLarge { domain_size: n, count });
        }
        if let Some(m) = Search::new(s, &used, n).run() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
