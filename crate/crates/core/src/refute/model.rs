//! Valuations, finite structures and their text form.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! valuation  := ( binding ("," binding)* )?
//! binding    := IDENT "=" bool
//! bool       := "1" | "0" | "true" | "false" | "T" | "F"
//! structure  := "domain" "=" "{" elem ("," elem)* "}" (";" stmt)* ";"?
//! stmt       := IDENT "=" "{" ( entry ("," entry)* )? "}"
//!             | IDENT "=" elem
//!             | IDENT "=" bool
//! entry      := tuple | tuple "->" elem
//! tuple      := elem | "(" ( elem ("," elem)* )? ")"
//! elem       := IDENT | DIGITS
//! ```
//!
//! Text starting with `domain` is a structure, anything else a valuation. A
//! set without `->` interprets a predicate, a set of `->` entries a function,
//! and a bare element a constant. A nullary predicate may be written as a
//! boolean. The signature decides between readings when a name is declared,
//! and supplies the arity of an empty predicate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::RefuteError;
use crate::formula::{Signature, SymbolKind};

/// Largest domain a structure may have.
pub const MAX_DOMAIN: usize = 8;
/// Largest function arity accepted in a structure.
pub const MAX_FUNCTION_ARITY: usize = 2;

/// Truth values for propositional symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation {
    pub assignment: BTreeMap<String, bool>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, symbol: impl Into<String>, value: bool) -> Self {
        self.assignment.insert(symbol.into(), value);
        self
    }

    pub fn get(&self, symbol: &str) -> Option<bool> {
        self.assignment.get(symbol).copied()
    }
}

impl FromIterator<(String, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (String, bool)>>(iter: I) -> Self {
        Self {
            assignment: iter.into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredicateTable {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    pub arity: usize,
    pub table: BTreeMap<Vec<usize>, usize>,
}

/// A finite interpretation. Elements are referred to by their index in `domain`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FiniteStructure {
    pub domain: Vec<String>,
    pub predicates: BTreeMap<String, PredicateTable>,
    pub functions: BTreeMap<String, FunctionTable>,
    pub constants: BTreeMap<String, usize>,
}

impl FiniteStructure {
    /// Elements named `0`, `1`, ... and nothing interpreted yet.
    pub fn with_size(n: usize) -> Self {
        Self {
            domain: (0..n).map(|i| i.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|e| e == name)
    }

    pub fn set_predicate(&mut self, name: &str, arity: usize, tuples: impl IntoIterator<Item = Vec<usize>>) {
        self.predicates.insert(
            name.to_string(),
            PredicateTable {
                arity,
                tuples: tuples.into_iter().collect(),
            },
        );
    }

    pub fn set_function(&mut self, name: &str, arity: usize, table: impl IntoIterator<Item = (Vec<usize>, usize)>) {
        self.functions.insert(
            name.to_string(),
            FunctionTable {
                arity,
                table: table.into_iter().collect(),
            },
        );
    }

    pub fn set_constant(&mut self, name: &str, element: usize) {
        self.constants.insert(name.to_string(), element);
    }

    /// Checks that the structure is well-formed: a non-empty domain of at most
    /// [`MAX_DOMAIN`] distinct elements, tables in range and total.
    pub fn validate(&self) -> Result<(), RefuteError> {
        let n = self.domain.len();
        let invalid = |m: String| Err(RefuteError::InvalidModel(m));
        if n == 0 {
            return invalid("the domain is empty".into());
        }
        if n > MAX_DOMAIN {
            return invalid(format!("the domain has {n} elements, at most {MAX_DOMAIN} are allowed"));
        }
        let distinct: BTreeSet<&String> = self.domain.iter().collect();
        if distinct.len() != n {
            return invalid("domain elements must be distinct".into());
        }
        for (name, p) in &self.predicates {
            for t in &p.tuples {
                if t.len() != p.arity || t.iter().any(|&e| e >= n) {
                    return invalid(format!("bad tuple in the interpretation of {name}"));
                }
            }
        }
        for (name, f) in &self.functions {
            if f.arity > MAX_FUNCTION_ARITY {
                return invalid(format!("{name} has arity {}, at most {MAX_FUNCTION_ARITY} is supported", f.arity));
            }
            for (args, &v) in &f.table {
                if args.len() != f.arity || args.iter().any(|&e| e >= n) || v >= n {
                    return invalid(format!("bad entry in the table of {name}"));
                }
            }
            if f.table.len() != n.pow(f.arity as u32) {
                return invalid(format!("the table of {name} is not total"));
            }
        }
        for (name, &c) in &self.constants {
            if c >= n {
                return invalid(format!("{name} denotes no domain element"));
            }
        }
        Ok(())
    }
}

/// A candidate countermodel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Valuation(Valuation),
    Structure(FiniteStructure),
}

impl From<Valuation> for Model {
    fn from(v: Valuation) -> Self {
        Model::Valuation(v)
    }
}

impl From<FiniteStructure> for Model {
    fn from(s: FiniteStructure) -> Self {
        Model::Structure(s)
    }
}

impl Model {
    pub fn validate(&self) -> Result<(), RefuteError> {
        match self {
            Model::Valuation(_) => Ok(()),
            Model::Structure(s) => s.validate(),
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

// ---------------------------------------------------------------- printing

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .assignment
            .iter()
            .map(|(k, &v)| format!("{k}={}", u8::from(v)))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

fn tuple_text(s: &FiniteStructure, t: &[usize]) -> String {
    let names: Vec<&str> = t.iter().map(|&e| s.domain[e].as_str()).collect();
    format!("({})", names.join(","))
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![format!("domain = {{{}}}", self.domain.join(","))];
        for (name, p) in &self.predicates {
            let ts: Vec<String> = p.tuples.iter().map(|t| tuple_text(self, t)).collect();
            parts.push(format!("{name} = {{{}}}", ts.join(", ")));
        }
        for (name, g) in &self.functions {
            let es: Vec<String> = g
                .table
                .iter()
                .map(|(args, &v)| {
                    let lhs = if args.len() == 1 {
                        self.domain[args[0]].clone()
                    } else {
                        tuple_text(self, args)
                    };
                    format!("{lhs}->{}", self.domain[v])
                })
                .collect();
            parts.push(format!("{name} = {{{}}}", es.join(", ")));
        }
        for (name, &c) in &self.constants {
            parts.push(format!("{name} = {}", self.domain[c]));
        }
        f.write_str(&parts.join("; "))
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Valuation(v) => v.fmt(f),
            Model::Structure(s) => s.fmt(f),
        }
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Eq,
    Comma,
    Semi,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Arrow,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, RefuteError> {
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
        let single = match c {
            '=' => Some(Tok::Eq),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '→' => Some(Tok::Arrow),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((pos, Tok::Arrow));
            i += 2;
        } else if c.is_alphanumeric() || c == '_' || c == '\'' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((pos, Tok::Word(chars[start..i].iter().collect())));
        } else {
            return Err(RefuteError::ModelSyntax {
                position: pos,
                expected: "a name, `=`, `,`, `;`, braces, parentheses or `->`".into(),
            });
        }
    }
    out.push((chars.len() + 1, Tok::End));
    Ok(out)
}

fn parse_bool(w: &str) -> Option<bool> {
    match w {
        "1" | "true" | "T" => Some(true),
        "0" | "false" | "F" => Some(false),
        _ => None,
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    sig: &'a Signature,
}

enum Entry {
    Tuple(Vec<String>),
    Map(Vec<String>, String),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn fail<T>(&self, expected: &str) -> Result<T, RefuteError> {
        Err(RefuteError::ModelSyntax {
            position: self.toks[self.pos].0,
            expected: expected.to_string(),
        })
    }

    fn eat(&mut self, t: Tok, what: &str) -> Result<(), RefuteError> {
        if *self.peek() == t {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn word(&mut self, what: &str) -> Result<String, RefuteError> {
        if let Tok::Word(w) = self.peek().clone() {
            self.pos += 1;
            Ok(w)
        } else {
            self.fail(what)
        }
    }

    fn valuation(&mut self) -> Result<Valuation, RefuteError> {
        let mut v = Valuation::new();
        if *self.peek() == Tok::End {
            return Ok(v);
        }
        loop {
            let name = self.word("a propositional symbol")?;
            self.eat(Tok::Eq, "`=`")?;
            let value = self.word("a truth value")?;
            let Some(b) = parse_bool(&value) else {
                self.pos -= 1;
                return self.fail("a truth value (1, 0, true, false, T, F)");
            };
            if v.assignment.insert(name.clone(), b).is_some() {
                return Err(RefuteError::InvalidModel(format!("{name} is assigned twice")));
            }
            match self.peek() {
                Tok::Comma => self.pos += 1,
                Tok::End => return Ok(v),
                _ => return self.fail("`,` or end of input"),
            }
        }
    }

    fn tuple(&mut self) -> Result<Vec<String>, RefuteError> {
        if *self.peek() == Tok::LParen {
            self.pos += 1;
            let mut out = Vec::new();
            if *self.peek() == Tok::RParen {
                self.pos += 1;
                return Ok(out);
            }
            loop {
                out.push(self.word("a domain element")?);
                match self.peek() {
                    Tok::Comma => self.pos += 1,
                    Tok::RParen => {
                        self.pos += 1;
                        return Ok(out);
                    }
                    _ => return self.fail("`,` or `)`"),
                }
            }
        }
        Ok(vec![self.word("a domain element or a tuple")?])
    }

    fn set(&mut self) -> Result<Vec<Entry>, RefuteError> {
        self.eat(Tok::LBrace, "`{`")?;
        let mut out = Vec::new();
        if *self.peek() == Tok::RBrace {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            let t = self.tuple()?;
            if *self.peek() == Tok::Arrow {
                self.pos += 1;
                out.push(Entry::Map(t, self.word("a domain element")?));
            } else {
                out.push(Entry::Tuple(t));
            }
            match self.peek() {
                Tok::Comma => self.pos += 1,
                Tok::RBrace => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.fail("`,` or `}`"),
            }
        }
    }

    fn structure(&mut self) -> Result<FiniteStructure, RefuteError> {
        self.pos += 1; // `domain`
        self.eat(Tok::Eq, "`=`")?;
        let mut s = FiniteStructure::default();
        for e in self.set()? {
            match e {
                Entry::Tuple(t) if t.len() == 1 => s.domain.push(t.into_iter().next().unwrap_or_default()),
                _ => return Err(RefuteError::InvalidModel("domain elements must be plain names".into())),
            }
        }
        let mut seen = BTreeSet::new();
        loop {
            match self.peek() {
                Tok::End => break,
                Tok::Semi => self.pos += 1,
                _ => return self.fail("`;` or end of input"),
            }
            if *self.peek() == Tok::End {
                break;
            }
            let name = self.word("a symbol name")?;
            if name == "domain" || !seen.insert(name.clone()) {
                return Err(RefuteError::InvalidModel(format!("{name} is interpreted twice")));
            }
            self.eat(Tok::Eq, "`=`")?;
            self.statement(&mut s, &name)?;
        }
        s.validate()?;
        Ok(s)
    }

    fn element(s: &FiniteStructure, name: &str) -> Result<usize, RefuteError> {
        s.element(name)
            .ok_or_else(|| RefuteError::InvalidModel(format!("{name} is not a domain element")))
    }

    fn statement(&mut self, s: &mut FiniteStructure, name: &str) -> Result<(), RefuteError> {
        let kind = self.sig.kind(name);
        if *self.peek() != Tok::LBrace {
            let value = self.word("a set, an element or a truth value")?;
            let as_bool = parse_bool(&value);
            let nullary = matches!(kind, Some(SymbolKind::Predicate(0)))
                || (kind.is_none() && s.element(&value).is_none() && as_bool.is_some());
            if nullary {
                let Some(b) = as_bool else {
                    return Err(RefuteError::InvalidModel(format!("{name} needs a truth value")));
                };
                s.set_predicate(name, 0, if b { vec![vec![]] } else { vec![] });
                return Ok(());
            }
            if !matches!(kind, None | Some(SymbolKind::Constant) | Some(SymbolKind::Function(0))) {
                return Err(RefuteError::InvalidModel(format!("{name} needs a set")));
            }
            let e = Self::element(s, &value)?;
            if matches!(kind, Some(SymbolKind::Function(0))) {
                s.set_function(name, 0, [(vec![], e)]);
            } else {
                s.set_constant(name, e);
            }
            return Ok(());
        }
        let entries = self.set()?;
        let is_function = match kind {
            Some(SymbolKind::Function(_)) => true,
            Some(SymbolKind::Predicate(_)) => false,
            Some(SymbolKind::Constant) => {
                return Err(RefuteError::InvalidModel(format!("constant {name} needs an element")));
            }
            None => entries.iter().any(|e| matches!(e, Entry::Map(..))),
        };
        let mut arity = match kind {
            Some(SymbolKind::Function(k)) | Some(SymbolKind::Predicate(k)) => Some(k),
            _ => None,
        };
        let mut check_arity = |len: usize| -> Result<usize, RefuteError> {
            match arity {
                Some(k) if k != len => Err(RefuteError::InvalidModel(format!("{name} has arity {k}, got a {len}-tuple"))),
                _ => {
                    arity = Some(len);
                    Ok(len)
                }
            }
        };
        if is_function {
            let mut table = BTreeMap::new();
            for e in entries {
                let Entry::Map(args, v) = e else {
                    return Err(RefuteError::InvalidModel(format!("{name} is a function, use `args->value`")));
                };
                check_arity(args.len())?;
                let args = args.iter().map(|a| Self::element(s, a)).collect::<Result<Vec<_>, _>>()?;
                let v = Self::element(s, &v)?;
                if table.insert(args, v).is_some() {
                    return Err(RefuteError::InvalidModel(format!("{name} has two values for one argument")));
                }
            }
            let k = arity.ok_or_else(|| RefuteError::InvalidModel(format!("cannot tell the arity of {name}")))?;
            s.set_function(name, k, table);
        } else {
            let mut tuples = BTreeSet::new();
            for e in entries {
                let Entry::Tuple(t) = e else {
                    return Err(RefuteError::InvalidModel(format!("{name} is a predicate, list tuples")));
                };
                check_arity(t.len())?;
                tuples.insert(t.iter().map(|a| Self::element(s, a)).collect::<Result<Vec<_>, _>>()?);
            }
            let k = arity.ok_or_else(|| RefuteError::InvalidModel(format!("cannot tell the arity of {name}")))?;
            s.set_predicate(name, k, tuples);
        }
        Ok(())
    }
}

/// Parses the model text grammar. `sig` resolves names the syntax leaves ambiguous.
pub fn parse_model(text: &str, sig: &Signature) -> Result<Model, RefuteError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, sig };
    let model = if matches!(p.peek(), Tok::Word(w) if w == "domain") {
        Model::Structure(p.structure()?)
    } else {
        Model::Valuation(p.valuation()?)
    };
    if *p.peek() != Tok::End {
        return p.fail("end of input");
    }
    Ok(model)
}

// ---------------------------------------------------------------- JSON

#[derive(Serialize, Deserialize)]
struct PredicateJson {
    arity: usize,
    tuples: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    args: Vec<String>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct FunctionJson {
    arity: usize,
    table: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ModelJson {
    Valuation {
        valuation: BTreeMap<String, bool>,
    },
    Structure {
        domain: Vec<String>,
        #[serde(default)]
        predicates: BTreeMap<String, PredicateJson>,
        #[serde(default)]
        functions: BTreeMap<String, FunctionJson>,
        #[serde(default)]
        constants: BTreeMap<String, String>,
    },
}

impl Serialize for Model {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let dto = match self {
            Model::Valuation(v) => ModelJson::Valuation {
                valuation: v.assignment.clone(),
            },
            Model::Structure(s) => {
                let name = |e: &usize| s.domain.get(*e).cloned().unwrap_or_default();
                ModelJson::Structure {
                    domain: s.domain.clone(),
                    predicates: s
                        .predicates
                        .iter()
                        .map(|(k, p)| {
                            let tuples = p.tuples.iter().map(|t| t.iter().map(name).collect()).collect();
                            (k.clone(), PredicateJson { arity: p.arity, tuples })
                        })
                        .collect(),
                    functions: s
                        .functions
                        .iter()
                        .map(|(k, f)| {
                            let table = f
                                .table
                                .iter()
                                .map(|(args, v)| EntryJson {
                                    args: args.iter().map(name).collect(),
                                    value: name(v),
                                })
                                .collect();
                            (k.clone(), FunctionJson { arity: f.arity, table })
                        })
                        .collect(),
                    constants: s.constants.iter().map(|(k, v)| (k.clone(), name(v))).collect(),
                }
            }
        };
        dto.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match ModelJson::deserialize(deserializer)? {
            ModelJson::Valuation { valuation } => Ok(Model::Valuation(Valuation { assignment: valuation })),
            ModelJson::Structure {
                domain,
                predicates,
                functions,
                constants,
            } => {
                let mut s = FiniteStructure {
                    domain,
                    ..FiniteStructure::default()
                };
                let index = |s: &FiniteStructure, e: &str| {
                    s.element(e).ok_or_else(|| D::Error::custom(format!("{e} is not a domain element")))
                };
                for (k, p) in predicates {
                    let tuples = p
                        .tuples
                        .iter()
                        .map(|t| t.iter().map(|e| index(&s, e)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    s.set_predicate(&k, p.arity, tuples);
                }
                for (k, f) in functions {
                    let table = f
                        .table
                        .iter()
                        .map(|en| {
                            let args = en.args.iter().map(|e| index(&s, e)).collect::<Result<Vec<_>, _>>()?;
                            Ok((args, index(&s, &en.value)?))
                        })
                        .collect::<Result<Vec<_>, D::Error>>()?;
                    s.set_function(&k, f.arity, table);
                }
                for (k, v) in constants {
                    let e = index(&s, &v)?;
                    s.set_constant(&k, e);
                }
                s.validate().map_err(D::Error::custom)?;
                Ok(Model::Structure(s))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new()
            .with_predicate("P", 1)
            .unwrap()
            .with_predicate("R", 2)
            .unwrap()
            .with_predicate("Q", 1)
            .unwrap()
            .with_function("f", 1)
            .unwrap()
            .with_function("g", 2)
            .unwrap()
            .with_constant("c")
            .unwrap()
    }

    #[test]
    fn valuation_shorthand() {
        let m = parse_model("p=1, q=0", &Signature::new()).unwrap();
        assert_eq!(m, Model::Valuation(Valuation::new().with("p", true).with("q", false)));
        assert_eq!(m.to_text(), "p=1, q=0");
        assert_eq!(parse_model("p = true,q=F", &Signature::new()).unwrap().to_text(), "p=1, q=0");
        assert_eq!(parse_model("", &Signature::new()).unwrap(), Model::Valuation(Valuation::new()));
    }

    #[test]
    fn structure_text() {
        let text = "domain = {a,b}; P = {(a)}; f = {a->b, b->b}; c = a";
        let m = parse_model(text, &sig()).unwrap();
        let Model::Structure(s) = &m else { panic!() };
        assert_eq!(s.domain, vec!["a", "b"]);
        assert_eq!(s.predicates["P"].tuples, BTreeSet::from([vec![0]]));
        assert_eq!(s.functions["f"].table, BTreeMap::from([(vec![0], 1), (vec![1], 1)]));
        assert_eq!(s.constants["c"], 0);
        assert_eq!(m.to_text(), text);
        let again = parse_model(&m.to_text(), &sig()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn structure_binary_and_empty() {
        let text = "domain = {0,1}; Q = {}; R = {(0,1), (1,1)}; g = {(0,0)->0, (0,1)->1, (1,0)->1, (1,1)->0}";
        let m = parse_model(text, &sig()).unwrap();
        let Model::Structure(s) = &m else { panic!() };
        assert_eq!(s.predicates["Q"].arity, 1);
        assert!(s.predicates["Q"].tuples.is_empty());
        assert_eq!(s.functions["g"].table[&vec![1, 0]], 1);
        assert_eq!(m.to_text(), text);
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(serde_json::from_value::<Model>(json).unwrap(), m);
    }

    #[test]
    fn malformed_structures() {
        let s = sig();
        assert!(matches!(parse_model("domain = {}", &s), Err(RefuteError::InvalidModel(_))));
        assert!(matches!(parse_model("domain = {a}; f = {}", &s), Err(RefuteError::InvalidModel(_))));
        assert!(matches!(parse_model("domain = {a}; c = b", &s), Err(RefuteError::InvalidModel(_))));
        assert!(matches!(
            parse_model("domain = {a,b,c2,d,e,f2,g2,h,i}", &s),
            Err(RefuteError::InvalidModel(_))
        ));
        assert!(matches!(parse_model("p = 2", &s), Err(RefuteError::ModelSyntax { position: 5, .. })));
        assert!(matches!(parse_model("domain = {a}; P = {(a,a)}", &s), Err(RefuteError::InvalidModel(_))));
    }

    #[test]
    fn nullary_predicates_in_structures() {
        let s = Signature::propositional(["p"]).with_constant("c").unwrap();
        let m = parse_model("domain = {0,1}; p = 1; c = 1", &s).unwrap();
        let Model::Structure(st) = m else { panic!() };
        assert_eq!(st.predicates["p"].tuples, BTreeSet::from([vec![]]));
        assert_eq!(st.constants["c"], 1);
    }
}
