//! Pretty printer producing the ASCII syntax accepted by the parser.
//!
//! Precedence, loosest first: `<->`, `->`, `\/`, `/\`, `~`. Conditionals and
//! biconditionals associate to the right, conjunction and disjunction to the
//! left. A quantifier's scope is a single atom, so compound bodies are
//! parenthesised.

use std::collections::BTreeSet;
use std::fmt;

use super::signature::is_keyword;
use super::subst::fresh_variant;
use super::syntax::{Formula, Term};

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NEG: u8 = 5;
const ATOM: u8 = 6;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Not(..) => NEG,
        _ => ATOM,
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    Printer { stack: Vec::new() }.formula(f, IFF, &mut out);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    Printer { stack: Vec::new() }.term(t, &mut out);
    out
}

struct Printer {
    /// (binder name in the tree, printed name)
    stack: Vec<(String, String)>,
}

impl Printer {
    fn printed_var(&self, x: &str) -> String {
        self.stack
            .iter()
            .rev()
            .find(|(o, _)| o == x)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| x.to_string())
    }

    /// Choose a printed name for binder `x` over `body` that re-parses to the
    /// same binding structure.
    fn binder_name(&self, x: &str, body: &Formula) -> String {
        let mut avoid = BTreeSet::new();
        let mut uses = super::syntax::SymbolUse::default();
        body.collect_symbols(&mut uses);
        avoid.extend(uses.predicates.into_iter().map(|(p, _)| p));
        avoid.extend(uses.functions.into_iter().map(|(p, _)| p));
        avoid.extend(uses.constants);
        let fs = super::syntax::free_symbols(body);
        avoid.extend(fs.parameters.iter().map(|p| p.to_string()));
        for v in body.free_vars() {
            if v != x {
                avoid.insert(self.printed_var(&v));
            }
        }
        if !avoid.contains(x) && !is_keyword(x) {
            return x.to_string();
        }
        avoid.insert("forall".into());
        avoid.insert("exists".into());
        avoid.insert("false".into());
        fresh_variant(x, &avoid)
    }

    fn formula(&mut self, f: &Formula, min: u8, out: &mut String) {
        let paren = level(f) < min;
        if paren {
            out.push('(');
        }
        match f {
            Formula::Pred(p, args) => {
                out.push_str(p);
                if !args.is_empty() {
                    self.args(args, out);
                }
            }
            Formula::Eq(a, b) => {
                self.term(a, out);
                out.push_str(" = ");
                self.term(b, out);
            }
            Formula::Bottom => out.push_str("false"),
            Formula::Not(a) => {
                out.push('~');
                self.formula(a, NEG, out);
            }
            Formula::And(a, b) => self.binary(a, " /\\ ", b, AND, AND + 1, out),
            Formula::Or(a, b) => self.binary(a, " \\/ ", b, OR, OR + 1, out),
            Formula::Implies(a, b) => self.binary(a, " -> ", b, IMP + 1, IMP, out),
            Formula::Iff(a, b) => self.binary(a, " <-> ", b, IFF + 1, IFF, out),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let name = self.binder_name(x, body);
                out.push_str(if matches!(f, Formula::Forall(..)) { "(forall " } else { "(exists " });
                out.push_str(&name);
                out.push_str(") ");
                self.stack.push((x.clone(), name));
                self.formula(body, ATOM, out);
                self.stack.pop();
            }
        }
        if paren {
            out.push(')');
        }
    }

    fn binary(&mut self, a: &Formula, op: &str, b: &Formula, lmin: u8, rmin: u8, out: &mut String) {
        self.formula(a, lmin, out);
        out.push_str(op);
        self.formula(b, rmin, out);
    }

    fn args(&mut self, args: &[Term], out: &mut String) {
        out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.term(a, out);
        }
        out.push(')');
    }

    fn term(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Var(x) => out.push_str(&self.printed_var(x)),
            Term::Param(p) => out.push_str(&p.to_string()),
            Term::Unknown(n) => {
                out.push('?');
                out.push_str(&n.to_string());
            }
            Term::Const(c) => out.push_str(c),
            Term::App(g, args) => {
                out.push_str(g);
                if !args.is_empty() {
                    self.args(args, out);
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{alpha_equal, parse_formula, Signature};

    fn sig() -> Signature {
        Signature::propositional(["p", "q", "r"])
            .with_predicate("P", 1)
            .unwrap()
            .with_predicate("Q", 2)
            .unwrap()
            .with_constant("c")
            .unwrap()
            .with_function("f", 2)
            .unwrap()
    }

    fn round(text: &str) -> String {
        print_formula(&parse_formula(text, &sig()).unwrap())
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(round("((p -> q) -> r)"), "(p -> q) -> r");
        assert_eq!(round("(p -> (q -> r))"), "p -> q -> r");
        assert_eq!(round("((p /\\ q) /\\ r)"), "p /\\ q /\\ r");
        assert_eq!(round("(p /\\ (q /\\ r))"), "p /\\ (q /\\ r)");
        assert_eq!(round("~(p \\/ q) <-> ~~p"), "~(p \\/ q) <-> ~~p");
        assert_eq!(round("(p \\/ q) /\\ r"), "(p \\/ q) /\\ r");
    }

    #[test]
    fn quantifiers() {
        assert_eq!(round("(forall x)(forall y) Q(x,y)"), "(forall x) (forall y) Q(x, y)");
        assert_eq!(round("(forall x) (~P(x))"), "(forall x) (~P(x))");
        assert_eq!(round("(exists x) (P(x) /\\ P(f(x, c)))"), "(exists x) (P(x) /\\ P(f(x, c)))");
        assert_eq!(round("~(forall x) P(x)"), "~(forall x) P(x)");
    }

    #[test]
    fn binder_clash_is_renamed() {
        let f = Formula::forall("c", Formula::pred("Q", vec![Term::var("c"), Term::constant("c")]));
        let text = print_formula(&f);
        assert_eq!(text, "(forall c') Q(c', c)");
        assert!(alpha_equal(&parse_formula(&text, &sig()).unwrap(), &f));
        let g = Formula::forall("x1", Formula::pred("Q", vec![Term::var("x1"), Term::param("x", 1)]));
        let text = print_formula(&g);
        assert!(alpha_equal(&parse_formula(&text, &sig()).unwrap(), &g));
    }

    #[test]
    fn terms() {
        assert_eq!(print_term(&Term::Unknown(3)), "?3");
        assert_eq!(print_term(&Term::param("y", 2)), "y2");
    }
}
