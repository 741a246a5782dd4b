//! Definitions that may be unfolded (definiendum to definiens) or folded back
//! at an addressed position.
//!
//! Text form, one per line:
//!
//! ```text
//! def union [u, S]: In(u, Union(S)) := (exists y) (In(y, S) /\ In(u, y))
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{
    match_pattern, parse_open_formula, print_formula, replace_formula_at, subformula_at, substitute, Formula,
    FormulaError, Path, Signature, SymbolUse, Target, Term,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Definition {
    pub name: String,
    pub schematic: Vec<String>,
    pub definiendum: Formula,
    pub definiens: Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewriteDirection {
    Unfold,
    Fold,
}

impl fmt::Display for RewriteDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RewriteDirection::Unfold => "unfold",
            RewriteDirection::Fold => "fold",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DefinitionError {
    #[error("unknown definition `{0}`")]
    UnknownDefinition(String),
    #[error("`{name}` does not match at position {path}")]
    NoMatchAtPosition { name: String, path: String },
    #[error("malformed definition `{name}`: {reason}")]
    Malformed { name: String, reason: String },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Serialized form: formulas as text, parsed against the exercise signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionText {
    pub name: String,
    pub schematic: Vec<String>,
    pub definiendum: String,
    pub definiens: String,
}

impl Definition {
    pub fn new(
        name: impl Into<String>,
        schematic: Vec<String>,
        definiendum: Formula,
        definiens: Formula,
    ) -> Result<Self, DefinitionError> {
        let def = Definition {
            name: name.into(),
            schematic,
            definiendum,
            definiens,
        };
        def.validate()?;
        Ok(def)
    }

    fn malformed(&self, reason: impl Into<String>) -> DefinitionError {
        DefinitionError::Malformed {
            name: self.name.clone(),
            reason: reason.into(),
        }
    }

    pub fn validate(&self) -> Result<(), DefinitionError> {
        let vars: BTreeSet<String> = self.schematic.iter().cloned().collect();
        if vars.len() != self.schematic.len() {
            return Err(self.malformed("repeated schematic variable"));
        }
        if !matches!(self.definiendum, Formula::Pred(..)) {
            return Err(self.malformed("definiendum must be an atom"));
        }
        if self.definiendum.free_vars() != vars {
            return Err(self.malformed("definiendum must mention exactly the schematic variables"));
        }
        if !self.definiens.free_vars().is_subset(&vars) {
            return Err(self.malformed("definiens mentions a variable missing from the definiendum"));
        }
        Ok(())
    }

    /// The symbol being defined: the outermost function symbol among the
    /// definiendum's arguments, or its predicate when all arguments are variables.
    pub fn head(&self) -> &str {
        match &self.definiendum {
            Formula::Pred(p, args) => args
                .iter()
                .find_map(|a| match a {
                    Term::App(f, _) => Some(f.as_str()),
                    _ => None,
                })
                .unwrap_or(p),
            _ => "",
        }
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Self, DefinitionError> {
        let malformed = |reason: &str| DefinitionError::Malformed {
            name: text.trim().to_string(),
            reason: reason.to_string(),
        };
        let rest = text.trim().strip_prefix("def ").ok_or_else(|| malformed("expected `def`"))?;
        let (name, rest) = rest.split_once('[').ok_or_else(|| malformed("expected `[`"))?;
        let (vars, rest) = rest.split_once("]:").ok_or_else(|| malformed("expected `]:`"))?;
        let (lhs, rhs) = rest.split_once(":=").ok_or_else(|| malformed("expected `:=`"))?;
        let schematic: Vec<String> = vars
            .split(',')
            .map(|v| v.trim().to_string())
            .filter(|v| !v.is_empty())
            .collect();
        Self::from_parts(name.trim(), schematic, lhs.trim(), rhs.trim(), sig)
    }

    pub fn from_text(t: &DefinitionText, sig: &Signature) -> Result<Self, DefinitionError> {
        Self::from_parts(&t.name, t.schematic.clone(), &t.definiendum, &t.definiens, sig)
    }

    fn from_parts(
        name: &str,
        schematic: Vec<String>,
        lhs: &str,
        rhs: &str,
        sig: &Signature,
    ) -> Result<Self, DefinitionError> {
        let free: BTreeSet<String> = schematic.iter().cloned().collect();
        let definiendum = parse_open_formula(lhs, sig, &free)?;
        let definiens = parse_open_formula(rhs, sig, &free)?;
        Definition::new(name, schematic, definiendum, definiens)
    }

    pub fn to_text(&self) -> DefinitionText {
        DefinitionText {
            name: self.name.clone(),
            schematic: self.schematic.clone(),
            definiendum: print_formula(&self.definiendum),
            definiens: print_formula(&self.definiens),
        }
    }

    fn instantiate(&self, schema: &Formula, bindings: &BTreeMap<String, Term>) -> Formula {
        // Rename first so the substitution is simultaneous.
        let mut out = schema.clone();
        for (k, v) in self.schematic.iter().enumerate() {
            out = substitute(&out, &Target::Var(v.clone()), &Term::Var(format!("#{k}")));
        }
        for (k, v) in self.schematic.iter().enumerate() {
            if let Some(t) = bindings.get(v) {
                out = substitute(&out, &Target::Var(format!("#{k}")), t);
            }
        }
        out
    }

    /// Rewrites `f` itself (not a subformula) in the given direction.
    pub fn apply(&self, f: &Formula, direction: RewriteDirection) -> Option<Formula> {
        let vars: BTreeSet<String> = self.schematic.iter().cloned().collect();
        let (from, to) = match direction {
            RewriteDirection::Unfold => (&self.definiendum, &self.definiens),
            RewriteDirection::Fold => (&self.definiens, &self.definiendum),
        };
        let bindings = match_pattern(from, f, &vars)?;
        if !self.schematic.iter().all(|v| bindings.contains_key(v)) {
            return None;
        }
        Some(self.instantiate(to, &bindings))
    }

    /// Rewrites the occurrence at `path`, leaving every other position intact.
    pub fn rewrite_at(&self, f: &Formula, path: &Path, direction: RewriteDirection) -> Result<Formula, DefinitionError> {
        let no_match = || DefinitionError::NoMatchAtPosition {
            name: self.name.clone(),
            path: path.to_string(),
        };
        let sub = subformula_at(f, path).ok_or_else(no_match)?;
        let replaced = self.apply(sub, direction).ok_or_else(no_match)?;
        replace_formula_at(f, &path.0, replaced).ok_or_else(no_match)
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "def {} [{}]: {} := {}",
            self.name,
            self.schematic.join(", "),
            print_formula(&self.definiendum),
            print_formula(&self.definiens)
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionSet {
    defs: Vec<Definition>,
}

/// Outcome of [`DefinitionSet::check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DefinitionVerdict {
    Ok,
    /// Definition names along a dependency cycle, starting from the smallest.
    Cycle(Vec<String>),
}

impl DefinitionSet {
    pub fn new(defs: Vec<Definition>) -> Self {
        Self { defs }
    }

    pub fn get(&self, name: &str) -> Result<&Definition, DefinitionError> {
        self.defs
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| DefinitionError::UnknownDefinition(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Definition> {
        self.defs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    /// Edge `d1 -> d2` whenever the head of `d2` occurs in the definiens of `d1`.
    /// Ok iff that graph is acyclic.
    pub fn check(&self) -> DefinitionVerdict {
        let n = self.defs.len();
        let uses: Vec<BTreeSet<String>> = self
            .defs
            .iter()
            .map(|d| {
                let mut u = SymbolUse::default();
                d.definiens.collect_symbols(&mut u);
                u.predicates
                    .into_iter()
                    .map(|(p, _)| p)
                    .chain(u.functions.into_iter().map(|(f, _)| f))
                    .chain(u.constants)
                    .collect()
            })
            .collect();
        let edges: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| uses[i].contains(self.defs[j].head())).collect())
            .collect();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut color = vec![0u8; n];
        let mut stack = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.defs[a].name.cmp(&self.defs[b].name));
        fn dfs(v: usize, edges: &[Vec<usize>], color: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
            color[v] = 1;
            stack.push(v);
            for &w in &edges[v] {
                if color[w] == 1 {
                    let start = stack.iter().position(|&x| x == w).unwrap_or(0);
                    return Some(stack[start..].to_vec());
                }
                if color[w] == 0 {
                    if let Some(c) = dfs(w, edges, color, stack) {
                        return Some(c);
                    }
                }
            }
            stack.pop();
            color[v] = 2;
            None
        }
        for &v in &order {
            if color[v] == 0 {
                if let Some(cycle) = dfs(v, &edges, &mut color, &mut stack) {
                    return DefinitionVerdict::Cycle(cycle.into_iter().map(|i| self.defs[i].name.clone()).collect());
                }
            }
        }
        DefinitionVerdict::Ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn sig() -> Signature {
        Signature::new()
            .with_predicate("In", 2)
            .unwrap()
            .with_function("Union", 1)
            .unwrap()
            .with_function("Diff", 2)
            .unwrap()
            .with_constant("a")
            .unwrap()
            .with_constant("b")
            .unwrap()
            .with_constant("c")
            .unwrap()
            .with_constant("F")
            .unwrap()
            .with_constant("x")
            .unwrap()
    }

    fn diff() -> Definition {
        Definition::parse("def diff [u, A, B]: In(u, Diff(A, B)) := In(u, A) /\\ ~In(u, B)", &sig()).unwrap()
    }

    fn union() -> Definition {
        Definition::parse("def union [u, S]: In(u, Union(S)) := (exists y) (In(y, S) /\\ In(u, y))", &sig()).unwrap()
    }

    #[test]
    fn unfold_difference_under_negation() {
        let s = sig();
        let h = parse_formula("~In(c, Diff(a, b))", &s).unwrap();
        let out = diff().rewrite_at(&h, &"0".parse().unwrap(), RewriteDirection::Unfold).unwrap();
        assert_eq!(out, parse_formula("~(In(c, a) /\\ ~In(c, b))", &s).unwrap());
    }

    #[test]
    fn unfold_union_and_fold_back() {
        let s = sig();
        let g = parse_formula("In(x, Union(F))", &s).unwrap();
        let out = union().rewrite_at(&g, &Path::root(), RewriteDirection::Unfold).unwrap();
        assert_eq!(out, parse_formula("(exists y) (In(y, F) /\\ In(x, y))", &s).unwrap());
        let back = union().rewrite_at(&out, &Path::root(), RewriteDirection::Fold).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn unfold_avoids_capture() {
        let s = sig();
        // The matched argument is the bound `y` of the context.
        let f = parse_formula("(exists y) In(y, Union(y))", &s).unwrap();
        let out = union().rewrite_at(&f, &"0".parse().unwrap(), RewriteDirection::Unfold).unwrap();
        let expected = parse_formula("(exists y) (exists z) (In(z, y) /\\ In(y, z))", &s).unwrap();
        assert!(crate::formula::alpha_equal(&out, &expected), "{out}");
    }

    #[test]
    fn no_match() {
        let s = sig();
        let g = parse_formula("In(x, F)", &s).unwrap();
        assert!(matches!(
            union().rewrite_at(&g, &Path::root(), RewriteDirection::Unfold),
            Err(DefinitionError::NoMatchAtPosition { .. })
        ));
        assert!(union().rewrite_at(&g, &"3".parse().unwrap(), RewriteDirection::Unfold).is_err());
    }

    #[test]
    fn heads_and_cycles() {
        assert_eq!(union().head(), "Union");
        assert_eq!(DefinitionSet::new(vec![diff(), union()]).check(), DefinitionVerdict::Ok);
        assert_eq!(DefinitionSet::default().check(), DefinitionVerdict::Ok);
        let s = Signature::propositional(["A", "B", "q"]);
        let a = Definition::parse("def a []: A := B /\\ q", &s).unwrap();
        let b = Definition::parse("def b []: B := A \\/ q", &s).unwrap();
        assert_eq!(
            DefinitionSet::new(vec![a, b]).check(),
            DefinitionVerdict::Cycle(vec!["a".into(), "b".into()])
        );
    }

    #[test]
    fn text_round_trip() {
        let d = union();
        let text = d.to_string();
        assert_eq!(Definition::parse(&text, &sig()).unwrap(), d);
        assert_eq!(Definition::from_text(&d.to_text(), &sig()).unwrap(), d);
    }
}
