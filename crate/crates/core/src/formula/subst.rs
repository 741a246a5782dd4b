//! Capture-avoiding substitution, alpha-equivalence and positions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::syntax::{Formula, Param, Term};

/// What [`substitute`] replaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    /// Free occurrences of a bound-variable name.
    Var(String),
    Param(Param),
    Unknown(u32),
}

impl Target {
    fn matches(&self, t: &Term) -> bool {
        match (self, t) {
            (Target::Var(x), Term::Var(y)) => x == y,
            (Target::Param(p), Term::Param(q)) => p == q,
            (Target::Unknown(n), Term::Unknown(m)) => n == m,
            _ => false,
        }
    }
}

pub fn substitute_term(t: &Term, target: &Target, replacement: &Term) -> Term {
    if target.matches(t) {
        return replacement.clone();
    }
    match t {
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| substitute_term(a, target, replacement)).collect()),
        _ => t.clone(),
    }
}

fn occurs(f: &Formula, target: &Target) -> bool {
    match target {
        Target::Var(x) => f.free_vars().contains(x),
        _ => {
            let mut found = false;
            f.for_each_term(&mut |t| found |= term_mentions(t, target));
            found
        }
    }
}

fn term_mentions(t: &Term, target: &Target) -> bool {
    target.matches(t)
        || match t {
            Term::App(_, args) => args.iter().any(|a| term_mentions(a, target)),
            _ => false,
        }
}

/// A variant of `base` (adding primes) not in `avoid`.
pub fn fresh_variant(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// Replaces every free occurrence of `target` in `f` by `replacement`,
/// renaming binders that would capture a variable of the replacement.
pub fn substitute(f: &Formula, target: &Target, replacement: &Term) -> Formula {
    let rvars = replacement.vars();
    subst_rec(f, target, replacement, &rvars)
}

fn subst_rec(f: &Formula, target: &Target, r: &Term, rvars: &BTreeSet<String>) -> Formula {
    match f {
        Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|a| substitute_term(a, target, r)).collect()),
        Formula::Eq(a, b) => Formula::Eq(substitute_term(a, target, r), substitute_term(b, target, r)),
        Formula::Bottom => Formula::Bottom,
        Formula::Not(a) => Formula::not(subst_rec(a, target, r, rvars)),
        Formula::And(a, b) => Formula::and(subst_rec(a, target, r, rvars), subst_rec(b, target, r, rvars)),
        Formula::Or(a, b) => Formula::or(subst_rec(a, target, r, rvars), subst_rec(b, target, r, rvars)),
        Formula::Implies(a, b) => Formula::implies(subst_rec(a, target, r, rvars), subst_rec(b, target, r, rvars)),
        Formula::Iff(a, b) => Formula::iff(subst_rec(a, target, r, rvars), subst_rec(b, target, r, rvars)),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let rebuild = |x: String, body: Formula| {
                if universal {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                }
            };
            if matches!(target, Target::Var(v) if v == x) || !occurs(body, target) {
                return f.clone();
            }
            if rvars.contains(x) {
                let mut avoid = rvars.clone();
                avoid.extend(body.free_vars());
                if let Target::Var(v) = target {
                    avoid.insert(v.clone());
                }
                let fresh = fresh_variant(x, &avoid);
                let renamed = subst_rec(body, &Target::Var(x.clone()), &Term::Var(fresh.clone()), &BTreeSet::from([fresh.clone()]));
                return rebuild(fresh, subst_rec(&renamed, target, r, rvars));
            }
            rebuild(x.clone(), subst_rec(body, target, r, rvars))
        }
    }
}

/// `body[x := t]` for the body of a quantifier over `x`.
pub fn instantiate(body: &Formula, x: &str, t: &Term) -> Formula {
    substitute(body, &Target::Var(x.to_string()), t)
}

/// Equality up to renaming of bound variables.
pub fn alpha_equal(f: &Formula, g: &Formula) -> bool {
    alpha_rec(f, g, &mut Vec::new(), &mut Vec::new())
}

fn lookup(stack: &[String], x: &str) -> Option<usize> {
    stack.iter().rev().position(|y| y == x)
}

fn alpha_term(s: &Term, t: &Term, ls: &[String], rs: &[String]) -> bool {
    match (s, t) {
        (Term::Var(a), Term::Var(b)) => match (lookup(ls, a), lookup(rs, b)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => a == b,
            _ => false,
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, ls, rs))
        }
        _ => s == t,
    }
}

fn alpha_rec(f: &Formula, g: &Formula, ls: &mut Vec<String>, rs: &mut Vec<String>) -> bool {
    match (f, g) {
        (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, ls, rs))
        }
        (Formula::Eq(a, b), Formula::Eq(c, d)) => alpha_term(a, c, ls, rs) && alpha_term(b, d, ls, rs),
        (Formula::Bottom, Formula::Bottom) => true,
        (Formula::Not(a), Formula::Not(b)) => alpha_rec(a, b, ls, rs),
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Implies(a, b), Formula::Implies(c, d))
        | (Formula::Iff(a, b), Formula::Iff(c, d)) => alpha_rec(a, c, ls, rs) && alpha_rec(b, d, ls, rs),
        (Formula::Forall(x, a), Formula::Forall(y, b)) | (Formula::Exists(x, a), Formula::Exists(y, b)) => {
            ls.push(x.clone());
            rs.push(y.clone());
            let eq = alpha_rec(a, b, ls, rs);
            ls.pop();
            rs.pop();
            eq
        }
        _ => false,
    }
}

/// Renames binders to a canonical scheme (`#0`, `#1`, ... by depth) so that
/// alpha-equal formulas become syntactically equal.
pub fn alpha_normalize(f: &Formula) -> Formula {
    fn term(t: &Term, stack: &[(String, String)]) -> Term {
        match t {
            Term::Var(x) => match stack.iter().rev().find(|(o, _)| o == x) {
                Some((_, n)) => Term::Var(n.clone()),
                None => t.clone(),
            },
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| term(a, stack)).collect()),
            _ => t.clone(),
        }
    }
    fn go(f: &Formula, stack: &mut Vec<(String, String)>) -> Formula {
        match f {
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|a| term(a, stack)).collect()),
            Formula::Eq(a, b) => Formula::Eq(term(a, stack), term(b, stack)),
            Formula::Bottom => Formula::Bottom,
            Formula::Not(a) => Formula::not(go(a, stack)),
            Formula::And(a, b) => Formula::and(go(a, stack), go(b, stack)),
            Formula::Or(a, b) => Formula::or(go(a, stack), go(b, stack)),
            Formula::Implies(a, b) => Formula::implies(go(a, stack), go(b, stack)),
            Formula::Iff(a, b) => Formula::iff(go(a, stack), go(b, stack)),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let name = format!("#{}", stack.len());
                stack.push((x.clone(), name.clone()));
                let b = go(body, stack);
                stack.pop();
                if matches!(f, Formula::Forall(..)) {
                    Formula::forall(name, b)
                } else {
                    Formula::exists(name, b)
                }
            }
        }
    }
    go(f, &mut Vec::new())
}

/// Matches `pattern` against `target`, binding the free variables of
/// `pattern` listed in `schematic`. Other free pattern variables must occur
/// verbatim. Bound variables correspond by binding position, and a schematic
/// variable never captures a variable bound inside the match.
pub fn match_pattern(
    pattern: &Formula,
    target: &Formula,
    schematic: &BTreeSet<String>,
) -> Option<std::collections::BTreeMap<String, Term>> {
    let mut m = Matcher {
        schematic,
        pb: Vec::new(),
        tb: Vec::new(),
        bindings: Default::default(),
    };
    m.formula(pattern, target).then_some(m.bindings)
}

struct Matcher<'a> {
    schematic: &'a BTreeSet<String>,
    pb: Vec<String>,
    tb: Vec<String>,
    bindings: std::collections::BTreeMap<String, Term>,
}

impl Matcher<'_> {
    fn mentions_local(&self, t: &Term) -> bool {
        t.vars().iter().any(|v| self.tb.contains(v))
    }

    fn term(&mut self, p: &Term, t: &Term) -> bool {
        match p {
            Term::Var(x) if lookup(&self.pb, x).is_some() => match t {
                Term::Var(y) => lookup(&self.pb, x) == lookup(&self.tb, y),
                _ => false,
            },
            Term::Var(x) if self.schematic.contains(x) => {
                if self.mentions_local(t) {
                    return false;
                }
                match self.bindings.get(x) {
                    Some(prev) => prev == t,
                    None => {
                        self.bindings.insert(x.clone(), t.clone());
                        true
                    }
                }
            }
            Term::Var(x) => matches!(t, Term::Var(y) if y == x && lookup(&self.tb, y).is_none()),
            Term::App(f, xs) => match t {
                Term::App(g, ys) => f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.term(x, y)),
                _ => false,
            },
            _ => p == t,
        }
    }

    fn formula(&mut self, p: &Formula, t: &Formula) -> bool {
        match (p, t) {
            (Formula::Pred(a, xs), Formula::Pred(b, ys)) => {
                a == b && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.term(x, y))
            }
            (Formula::Eq(a, b), Formula::Eq(c, d)) => self.term(a, c) && self.term(b, d),
            (Formula::Bottom, Formula::Bottom) => true,
            (Formula::Not(a), Formula::Not(b)) => self.formula(a, b),
            (Formula::And(a, b), Formula::And(c, d))
            | (Formula::Or(a, b), Formula::Or(c, d))
            | (Formula::Implies(a, b), Formula::Implies(c, d))
            | (Formula::Iff(a, b), Formula::Iff(c, d)) => self.formula(a, c) && self.formula(b, d),
            (Formula::Forall(x, a), Formula::Forall(y, b)) | (Formula::Exists(x, a), Formula::Exists(y, b)) => {
                self.pb.push(x.clone());
                self.tb.push(y.clone());
                let ok = self.formula(a, b);
                self.pb.pop();
                self.tb.pop();
                ok
            }
            _ => false,
        }
    }
}

/// Finds `t` with `body[x := t]` alpha-equal to `target`. `Some(None)` when
/// `x` does not occur in `body` and the two agree.
pub fn match_instance(body: &Formula, x: &str, target: &Formula) -> Option<Option<Term>> {
    let schematic = BTreeSet::from([x.to_string()]);
    let mut bindings = match_pattern(body, target, &schematic)?;
    Some(bindings.remove(x))
}

/// Root-to-node child indices. Formula children are numbered as in
/// [`Formula::children`]; an atom's children are its argument terms and an
/// application's children are its arguments.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Path {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathParseError(pub String);

impl fmt::Display for PathParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid path `{}` (expected `root` or dotted indices like `0.1`)", self.0)
    }
}

impl std::error::Error for PathParseError {}

impl FromStr for Path {
    type Err = PathParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "root" || s.is_empty() {
            return Ok(Path::root());
        }
        s.split('.')
            .map(|p| p.parse::<usize>().map_err(|_| PathParseError(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Path)
    }
}

/// What a path points at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Located<'a> {
    Formula(&'a Formula),
    Term(&'a Term),
}

fn term_args(f: &Formula) -> Option<Vec<&Term>> {
    match f {
        Formula::Pred(_, args) => Some(args.iter().collect()),
        Formula::Eq(a, b) => Some(vec![a, b]),
        _ => None,
    }
}

pub fn locate<'a>(f: &'a Formula, path: &Path) -> Option<Located<'a>> {
    let mut cur = Located::Formula(f);
    for &i in &path.0 {
        cur = match cur {
            Located::Formula(g) => match term_args(g) {
                Some(args) => Located::Term(args.get(i).copied()?),
                None => Located::Formula(g.children().get(i).copied()?),
            },
            Located::Term(Term::App(_, args)) => Located::Term(args.get(i)?),
            Located::Term(_) => return None,
        };
    }
    Some(cur)
}

pub fn subformula_at<'a>(f: &'a Formula, path: &Path) -> Option<&'a Formula> {
    match locate(f, path)? {
        Located::Formula(g) => Some(g),
        Located::Term(_) => None,
    }
}

pub fn subterm_at<'a>(f: &'a Formula, path: &Path) -> Option<&'a Term> {
    match locate(f, path)? {
        Located::Term(t) => Some(t),
        Located::Formula(_) => None,
    }
}

/// Bound-variable names of the binders enclosing the node at `path`.
pub fn binders_above(f: &Formula, path: &Path) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = f;
    for &i in &path.0 {
        if let Formula::Forall(x, _) | Formula::Exists(x, _) = cur {
            out.push(x.clone());
        }
        match cur.children().get(i) {
            Some(g) => cur = g,
            None => break,
        }
    }
    out
}

/// Replaces the subformula at `path`. `None` if the path does not lead to a
/// formula.
pub fn replace_formula_at(f: &Formula, path: &[usize], new: Formula) -> Option<Formula> {
    let Some((&i, rest)) = path.split_first() else {
        return Some(new);
    };
    let sub = |g: &Formula| replace_formula_at(g, rest, new.clone());
    Some(match (f, i) {
        (Formula::Not(a), 0) => Formula::not(sub(a)?),
        (Formula::Forall(x, a), 0) => Formula::forall(x.clone(), sub(a)?),
        (Formula::Exists(x, a), 0) => Formula::exists(x.clone(), sub(a)?),
        (Formula::And(a, b), 0) => Formula::and(sub(a)?, (**b).clone()),
        (Formula::And(a, b), 1) => Formula::and((**a).clone(), sub(b)?),
        (Formula::Or(a, b), 0) => Formula::or(sub(a)?, (**b).clone()),
        (Formula::Or(a, b), 1) => Formula::or((**a).clone(), sub(b)?),
        (Formula::Implies(a, b), 0) => Formula::implies(sub(a)?, (**b).clone()),
        (Formula::Implies(a, b), 1) => Formula::implies((**a).clone(), sub(b)?),
        (Formula::Iff(a, b), 0) => Formula::iff(sub(a)?, (**b).clone()),
        (Formula::Iff(a, b), 1) => Formula::iff((**a).clone(), sub(b)?),
        _ => return None,
    })
}

fn replace_in_term(t: &Term, path: &[usize], new: &Term) -> Option<Term> {
    let Some((&i, rest)) = path.split_first() else {
        return Some(new.clone());
    };
    match t {
        Term::App(g, args) if i < args.len() => {
            let mut args = args.clone();
            args[i] = replace_in_term(&args[i], rest, new)?;
            Some(Term::App(g.clone(), args))
        }
        _ => None,
    }
}

/// Replaces the term at `path`. `None` if the path does not lead to a term.
pub fn replace_term_at(f: &Formula, path: &[usize], new: &Term) -> Option<Formula> {
    let (&i, rest) = path.split_first()?;
    match f {
        Formula::Pred(p, args) if i < args.len() => {
            let mut args = args.clone();
            args[i] = replace_in_term(&args[i], rest, new)?;
            Some(Formula::Pred(p.clone(), args))
        }
        Formula::Eq(a, b) if i < 2 => {
            let (a, b) = if i == 0 {
                (replace_in_term(a, rest, new)?, b.clone())
            } else {
                (a.clone(), replace_in_term(b, rest, new)?)
            };
            Some(Formula::Eq(a, b))
        }
        Formula::Pred(..) | Formula::Eq(..) | Formula::Bottom => None,
        _ => {
            let child = (*f.children().get(i)?).clone();
            let replaced = replace_term_at(&child, rest, new)?;
            replace_formula_at(f, &[i], replaced)
        }
    }
}
