//! Recursive-descent parser for the ASCII surface syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" iff)?
//! imp     := or ("->" imp)?
//! or      := and ("\/" and)*
//! and     := neg ("/\" neg)*
//! neg     := "~" neg | atom
//! atom    := ident "(" termlist ")" | ident | "false" | "(" formula ")"
//!          | "(" ("forall"|"exists") ident ")" atom
//!          | term "=" term
//! term    := ident "(" termlist ")" | ident | "?" digits
//! ```
//!
//! Unicode input aliases: `∀ ∃ ∧ ∨ ¬ → ↔ ⊥`.
//!
//! Identifiers in term position resolve, in order, to an enclosing binder or
//! schematic variable, a declared constant (or nullary function), and finally
//! a parameter when they have the shape `letters digits` (`x1`).

use std::collections::BTreeSet;

use super::signature::{Signature, SymbolKind};
use super::syntax::{Formula, Param, Term};
use super::FormulaError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Unknown(u32),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Eq,
    Forall,
    Exists,
    False,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Unknown(n) => format!("`?{n}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Not => "`~`".into(),
        Tok::And => "`/\\`".into(),
        Tok::Or => "`\\/`".into(),
        Tok::Imp => "`->`".into(),
        Tok::Iff => "`<->`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Forall => "`forall`".into(),
        Tok::Exists => "`exists`".into(),
        Tok::False => "`false`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let rest = |n: usize| chars[i..].iter().take(n).collect::<String>();
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '~' | '¬' => (Tok::Not, 1),
            '∧' => (Tok::And, 1),
            '∨' => (Tok::Or, 1),
            '→' => (Tok::Imp, 1),
            '↔' => (Tok::Iff, 1),
            '∀' => (Tok::Forall, 1),
            '∃' => (Tok::Exists, 1),
            '⊥' => (Tok::False, 1),
            '=' => (Tok::Eq, 1),
            '/' if rest(2) == "/\\" => (Tok::And, 2),
            '\\' if rest(2) == "\\/" => (Tok::Or, 2),
            '-' if rest(2) == "->" => (Tok::Imp, 2),
            '<' if rest(3) == "<->" => (Tok::Iff, 3),
            '?' => {
                let digits: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_digit()).collect();
                if digits.is_empty() {
                    return Err(FormulaError::Syntax {
                        position: pos + 1,
                        expected: "digits after `?`".into(),
                    });
                }
                let n = digits.parse().map_err(|_| FormulaError::Syntax {
                    position: pos + 1,
                    expected: "a small unknown index".into(),
                })?;
                (Tok::Unknown(n), 1 + digits.len())
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let word: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_' || **c == '\'')
                    .collect();
                let len = word.chars().count();
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                (tok, len)
            }
            _ => {
                return Err(FormulaError::Syntax {
                    position: pos,
                    expected: "a formula token".into(),
                })
            }
        };
        out.push((tok, pos));
        i += len;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
    scope: Vec<String>,
    schematic: &'a BTreeSet<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at < self.toks.len() - 1 {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            position: self.pos(),
            expected: format!("{expected} (found {})", describe(self.peek())),
        })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), FormulaError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(expected)
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, FormulaError> {
        let left = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let right = self.iff()?;
            return Ok(Formula::iff(left, right));
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, FormulaError> {
        let left = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let right = self.and()?;
            acc = Formula::or(acc, right);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.neg()?;
        while *self.peek() == Tok::And {
            self.bump();
            let right = self.neg()?;
            acc = Formula::and(acc, right);
        }
        Ok(acc)
    }

    fn neg(&mut self) -> Result<Formula, FormulaError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::not(self.neg()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::False => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::LParen => {
                if matches!(self.peek_at(1), Tok::Forall | Tok::Exists) {
                    self.bump();
                    let universal = self.bump() == Tok::Forall;
                    let binder = match self.peek().clone() {
                        Tok::Ident(name) => {
                            self.bump();
                            name
                        }
                        _ => return self.error("a bound variable name"),
                    };
                    self.expect(Tok::RParen, "`)` after the quantified variable")?;
                    self.scope.push(binder.clone());
                    let body = self.atom();
                    self.scope.pop();
                    let body = body?;
                    return Ok(if universal {
                        Formula::forall(binder, body)
                    } else {
                        Formula::exists(binder, body)
                    });
                }
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) if !self.scope.contains(&name) && !self.schematic.contains(&name) => match self.sig.kind(&name) {
                Some(SymbolKind::Predicate(arity)) => {
                    self.bump();
                    let args = if *self.peek() == Tok::LParen {
                        self.bump();
                        self.termlist()?
                    } else {
                        Vec::new()
                    };
                    if args.len() != arity {
                        return Err(FormulaError::ArityMismatch {
                            symbol: name,
                            expected: arity,
                            found: args.len(),
                        });
                    }
                    Ok(Formula::Pred(name, args))
                }
                _ => self.equation(),
            },
            Tok::Ident(_) | Tok::Unknown(_) => self.equation(),
            _ => self.error("a formula"),
        }
    }

    fn equation(&mut self) -> Result<Formula, FormulaError> {
        let left = self.term()?;
        if *self.peek() != Tok::Eq {
            // A bare identifier that is neither a predicate nor part of an equation.
            if let Term::Const(name) | Term::Var(name) = &left {
                if *self.peek() != Tok::Eq && self.sig.kind(name).is_none() {
                    return Err(FormulaError::UnknownSymbol(name.clone()));
                }
            }
            return self.error("`=`");
        }
        self.bump();
        let right = self.term()?;
        Ok(Formula::Eq(left, right))
    }

    /// Parses `t1, ..., tn )` after an opening parenthesis.
    fn termlist(&mut self) -> Result<Vec<Term>, FormulaError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return self.error("`,` or `)`"),
            }
        }
    }

    fn term(&mut self) -> Result<Term, FormulaError> {
        match self.peek().clone() {
            Tok::Unknown(n) => {
                self.bump();
                Ok(Term::Unknown(n))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let args = self.termlist()?;
                    return match self.sig.kind(&name) {
                        Some(SymbolKind::Function(arity)) if arity == args.len() => Ok(Term::App(name, args)),
                        Some(SymbolKind::Function(arity)) => Err(FormulaError::ArityMismatch {
                            symbol: name,
                            expected: arity,
                            found: args.len(),
                        }),
                        _ => Err(FormulaError::UnknownSymbol(name)),
                    };
                }
                if self.scope.contains(&name) || self.schematic.contains(&name) {
                    return Ok(Term::Var(name));
                }
                match self.sig.kind(&name) {
                    Some(SymbolKind::Constant) => return Ok(Term::Const(name)),
                    Some(SymbolKind::Function(0)) => return Ok(Term::App(name, Vec::new())),
                    Some(SymbolKind::Function(arity)) => {
                        return Err(FormulaError::ArityMismatch {
                            symbol: name,
                            expected: arity,
                            found: 0,
                        })
                    }
                    Some(SymbolKind::Predicate(_)) => return Err(FormulaError::UnknownSymbol(name)),
                    None => {}
                }
                if let Some(p) = Param::from_ident(&name) {
                    return Ok(Term::Param(p));
                }
                Err(FormulaError::UnknownSymbol(name))
            }
            _ => self.error("a term"),
        }
    }
}

fn run<T>(
    text: &str,
    sig: &Signature,
    schematic: &BTreeSet<String>,
    f: impl FnOnce(&mut Parser) -> Result<T, FormulaError>,
) -> Result<T, FormulaError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig,
        scope: Vec::new(),
        schematic,
    };
    let out = f(&mut p)?;
    if *p.peek() != Tok::End {
        return p.error("end of input");
    }
    Ok(out)
}

/// Parses a closed formula over `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, FormulaError> {
    run(text, sig, &BTreeSet::new(), |p| p.formula())
}

/// Parses a formula in which the given names may occur free as variables
/// (used for definition schemas).
pub fn parse_open_formula(text: &str, sig: &Signature, free: &BTreeSet<String>) -> Result<Formula, FormulaError> {
    run(text, sig, free, |p| p.formula())
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, FormulaError> {
    run(text, sig, &BTreeSet::new(), |p| p.term())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::propositional(["p", "q", "r"])
            .with_predicate("P", 2)
            .unwrap()
            .with_predicate("Q", 1)
            .unwrap()
            .with_predicate("R", 1)
            .unwrap()
            .with_constant("c")
            .unwrap()
            .with_function("f", 1)
            .unwrap()
    }

    #[test]
    fn nested_quantifiers() {
        let f = parse_formula("(forall x)(forall y) P(x,y)", &sig()).unwrap();
        let expected = Formula::forall(
            "x",
            Formula::forall("y", Formula::pred("P", vec![Term::var("x"), Term::var("y")])),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn identity_conditional() {
        let f = parse_formula("p -> p", &sig()).unwrap();
        assert_eq!(f, Formula::implies(Formula::atom("p"), Formula::atom("p")));
    }

    #[test]
    fn truncated_application_reports_position() {
        let sig = Signature::new().with_predicate("P", 1).unwrap();
        match parse_formula("P(", &sig) {
            Err(FormulaError::Syntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let s = sig();
        let f = parse_formula("~p /\\ q \\/ r -> p <-> q", &s).unwrap();
        let expected = Formula::iff(
            Formula::implies(
                Formula::or(
                    Formula::and(Formula::not(Formula::atom("p")), Formula::atom("q")),
                    Formula::atom("r"),
                ),
                Formula::atom("p"),
            ),
            Formula::atom("q"),
        );
        assert_eq!(f, expected);
        let rassoc = parse_formula("p -> q -> r", &s).unwrap();
        assert_eq!(
            rassoc,
            Formula::implies(Formula::atom("p"), Formula::implies(Formula::atom("q"), Formula::atom("r")))
        );
        let lassoc = parse_formula("p /\\ q /\\ r", &s).unwrap();
        assert_eq!(
            lassoc,
            Formula::and(Formula::and(Formula::atom("p"), Formula::atom("q")), Formula::atom("r"))
        );
    }

    #[test]
    fn quantifier_scope_is_one_atom() {
        let f = parse_formula("(forall x) Q(x) -> p", &sig()).unwrap();
        assert!(matches!(f, Formula::Implies(..)));
    }

    #[test]
    fn unicode_aliases() {
        let s = sig();
        let a = parse_formula("(∀x) (Q(x) → ¬R(x)) ∧ ⊥ ∨ (∃y) Q(y) ↔ p", &s).unwrap();
        let b = parse_formula("(forall x) (Q(x) -> ~R(x)) /\\ false \\/ (exists y) Q(y) <-> p", &s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn term_kinds() {
        let f = parse_formula("P(x1, ?2) /\\ Q(f(c))", &sig()).unwrap();
        let expected = Formula::and(
            Formula::pred("P", vec![Term::param("x", 1), Term::Unknown(2)]),
            Formula::pred("Q", vec![Term::app("f", vec![Term::constant("c")])]),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn equality_atoms() {
        let f = parse_formula("f(c) = c", &sig()).unwrap();
        assert_eq!(f, Formula::Eq(Term::app("f", vec![Term::constant("c")]), Term::constant("c")));
    }

    #[test]
    fn errors() {
        let s = sig();
        assert_eq!(parse_formula("S(c)", &s), Err(FormulaError::UnknownSymbol("S".into())));
        assert_eq!(parse_formula("zz", &s), Err(FormulaError::UnknownSymbol("zz".into())));
        assert!(matches!(
            parse_formula("P(c)", &s),
            Err(FormulaError::ArityMismatch { ref symbol, expected: 2, found: 1 }) if symbol == "P"
        ));
        assert!(matches!(parse_formula("p /\\", &s), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse_formula("(p", &s), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse_formula("p q", &s), Err(FormulaError::Syntax { .. })));
    }

    #[test]
    fn bound_name_shadows_constant() {
        let f = parse_formula("(forall c) Q(c)", &sig()).unwrap();
        assert_eq!(f, Formula::forall("c", Formula::pred("Q", vec![Term::var("c")])));
    }
}
