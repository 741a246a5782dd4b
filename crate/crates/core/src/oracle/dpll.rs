//! A small DPLL solver and DIMACS export.
//!
//! Symbols are indexed by first occurrence in the clause list. Each round runs
//! unit propagation to a fixpoint, then assigns pure literals; when neither
//! applies the solver splits on the lowest-indexed unassigned symbol, trying
//! `false` before `true`. Symbols left unassigned in a model are set to `false`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cnf::Cnf;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SatResult {
    Sat(BTreeMap<String, bool>),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

/// Clause literals as (symbol index, polarity).
type Lits = Vec<(usize, bool)>;

enum Status {
    Satisfied,
    Conflict,
    Unit(usize, bool),
    Open,
}

fn status(c: &Lits, assign: &[Option<bool>]) -> Status {
    let mut free = None;
    let mut free_count = 0;
    for &(v, pol) in c {
        match assign[v] {
            Some(b) if b == pol => return Status::Satisfied,
            Some(_) => {}
            None => {
                free_count += 1;
                free = Some((v, pol));
            }
        }
    }
    match (free_count, free) {
        (0, _) => Status::Conflict,
        (1, Some((v, pol))) => Status::Unit(v, pol),
        _ => Status::Open,
    }
}

fn solve(clauses: &[Lits], assign: &mut Vec<Option<bool>>) -> bool {
    loop {
        let mut changed = false;
        let mut all_satisfied = true;
        for c in clauses {
            match status(c, assign) {
                Status::Satisfied => {}
                Status::Conflict => return false,
                Status::Unit(v, pol) => {
                    assign[v] = Some(pol);
                    changed = true;
                    all_satisfied = false;
                }
                Status::Open => all_satisfied = false,
            }
        }
        if changed {
            continue;
        }
        if all_satisfied {
            return true;
        }
        // Pure literals among the clauses not yet satisfied.
        let mut seen: Vec<(bool, bool)> = vec![(false, false); assign.len()];
        for c in clauses {
            if matches!(status(c, assign), Status::Satisfied) {
                continue;
            }
            for &(v, pol) in c {
                if assign[v].is_none() {
                    if pol {
                        seen[v].0 = true;
                    } else {
                        seen[v].1 = true;
                    }
                }
            }
        }
        for (v, &(p, n)) in seen.iter().enumerate() {
            if p != n {
                assign[v] = Some(p);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let Some(v) = assign.iter().position(Option::is_none) else {
        return clauses.iter().all(|c| matches!(status(c, assign), Status::Satisfied));
    };
    for value in [false, true] {
        let saved = assign.clone();
        assign[v] = Some(value);
        if solve(clauses, assign) {
            return true;
        }
        *assign = saved;
    }
    false
}

pub fn dpll(cnf: &Cnf) -> SatResult {
    let symbols = cnf.symbols();
    let index: BTreeMap<&str, usize> = symbols.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let clauses: Vec<Lits> = cnf
        .clauses
        .iter()
        .map(|c| c.iter().map(|l| (index[l.symbol.as_str()], l.positive)).collect())
        .collect();
    let mut assign = vec![None; symbols.len()];
    if !solve(&clauses, &mut assign) {
        return SatResult::Unsat;
    }
    SatResult::Sat(
        symbols
            .into_iter()
            .zip(assign)
            .map(|(s, v)| (s, v.unwrap_or(false)))
            .collect(),
    )
}

/// DIMACS text: one `c var <index> <symbol>` comment per symbol (1-based, in
/// first-occurrence order), the `p cnf <vars> <clauses>` header, then one line
/// per clause of space-separated literals terminated by `0`.
pub fn to_dimacs(cnf: &Cnf) -> String {
    let symbols = cnf.symbols();
    let index: BTreeMap<&str, usize> = symbols.iter().enumerate().map(|(i, s)| (s.as_str(), i + 1)).collect();
    let mut out = String::new();
    for (i, s) in symbols.iter().enumerate() {
        out.push_str(&format!("c var {} {s}\n", i + 1));
    }
    out.push_str(&format!("p cnf {} {}\n", symbols.len(), cnf.clauses.len()));
    for c in &cnf.clauses {
        for l in c {
            let v = index[l.symbol.as_str()] as i64;
            out.push_str(&format!("{} ", if l.positive { v } else { -v }));
        }
        out.push_str("0\n");
    }
    out
}
