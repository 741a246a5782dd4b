//! Tree export formats.
//!
//! Text: one node per line, children indented by two spaces below their parent:
//!
//! ```text
//! p -> p :: impl_intro discharges {h1: p}
//!   p :: supposition h1
//! ```
//!
//! A line is `FORMULA :: RULE`, then ` [ARG; ARG]` when the node has
//! arguments, then ` discharges {L: FORMULA; L: FORMULA}` when it discharges
//! suppositions, then
//! ` LABEL` at leaves.
//!
//! JSON: `{"formula", "rule", "args": [..], "label"?, "discharged": [{"label", "formula"}],
//! "children": [..]}` with formulas and arguments as text.

use serde_json::{json, Value};

use super::{DerivationTree, Hypothesis, KernelError, Rule};
use crate::definitions::RewriteDirection;
use crate::formula::{parse_formula, parse_term, print_formula, Signature};
use crate::kernel::RuleArg;

pub fn tree_to_text(tree: &DerivationTree) -> String {
    let mut out = String::new();
    fn go(t: &DerivationTree, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&print_formula(&t.formula));
        out.push_str(" :: ");
        out.push_str(t.rule.name());
        if !t.args.is_empty() {
            let args: Vec<String> = t.args.iter().map(|a| a.to_string()).collect();
            out.push_str(&format!(" [{}]", args.join("; ")));
        }
        if !t.discharged.is_empty() {
            let ds: Vec<String> = t.discharged.iter().map(|d| format!("{}: {}", d.label, print_formula(&d.formula))).collect();
            out.push_str(&format!(" discharges {{{}}}", ds.join("; ")));
        }
        if let Some(l) = &t.label {
            out.push(' ');
            out.push_str(l);
        }
        out.push('\n');
        for c in &t.children {
            go(c, depth + 1, out);
        }
    }
    go(tree, 0, &mut out);
    out
}

pub fn tree_to_json(tree: &DerivationTree) -> Value {
    let mut v = json!({
        "formula": print_formula(&tree.formula),
        "rule": tree.rule.name(),
        "args": tree.args.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "discharged": tree
            .discharged
            .iter()
            .map(|d| json!({"label": d.label, "formula": print_formula(&d.formula)}))
            .collect::<Vec<_>>(),
        "children": tree.children.iter().map(tree_to_json).collect::<Vec<_>>(),
    });
    if let Some(l) = &tree.label {
        v["label"] = json!(l);
    }
    v
}

fn bad(msg: impl Into<String>) -> KernelError {
    KernelError::Formula(msg.into())
}

fn parse_arg(rule: Rule, text: &str, sig: &Signature) -> Result<RuleArg, KernelError> {
    match rule {
        Rule::EqualityRewrite => text.parse().map(RuleArg::Path).map_err(|e| bad(e.to_string())),
        Rule::Definition => {
            if let Ok(p) = text.parse() {
                return Ok(RuleArg::Path(p));
            }
            let (dir, name) = text.split_once(' ').ok_or_else(|| bad(format!("bad definition argument `{text}`")))?;
            let direction = match dir {
                "unfold" => RewriteDirection::Unfold,
                "fold" => RewriteDirection::Fold,
                _ => return Err(bad(format!("bad rewrite direction `{dir}`"))),
            };
            Ok(RuleArg::Definition {
                name: name.to_string(),
                direction,
            })
        }
        _ => Ok(RuleArg::Term(parse_term(text, sig)?)),
    }
}

/// Reads the JSON form back, parsing formulas against `sig`.
pub fn tree_from_json(v: &Value, sig: &Signature) -> Result<DerivationTree, KernelError> {
    let s = |key: &str| v.get(key).and_then(Value::as_str).ok_or_else(|| bad(format!("missing `{key}`")));
    let rule: Rule = s("rule")?.parse()?;
    let strings = |key: &str| -> Result<Vec<String>, KernelError> {
        match v.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad(format!("`{key}` must hold strings"))))
                .collect(),
            Some(_) => Err(bad(format!("`{key}` must be an array"))),
        }
    };
    let args = strings("args")?
        .iter()
        .map(|a| parse_arg(rule, a, sig))
        .collect::<Result<Vec<_>, _>>()?;
    let discharged = match v.get("discharged") {
        None => Vec::new(),
        Some(Value::Array(xs)) => xs
            .iter()
            .map(|d| {
                let field = |k: &str| d.get(k).and_then(Value::as_str).ok_or_else(|| bad(format!("a discharge needs `{k}`")));
                Ok(Hypothesis {
                    label: field("label")?.to_string(),
                    formula: parse_formula(field("formula")?, sig)?,
                })
            })
            .collect::<Result<Vec<_>, KernelError>>()?,
        Some(_) => return Err(bad("`discharged` must be an array")),
    };
    let children = match v.get("children") {
        None => Vec::new(),
        Some(Value::Array(xs)) => xs.iter().map(|c| tree_from_json(c, sig)).collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(bad("`children` must be an array")),
    };
    Ok(DerivationTree {
        formula: parse_formula(s("formula")?, sig)?,
        rule,
        args,
        label: v.get("label").and_then(Value::as_str).map(str::to_string),
        discharged,
        children,
    })
}
