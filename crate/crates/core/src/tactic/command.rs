//! The tactic-script language, one command per line:
//!
//! ```text
//! [goal N:] backward RULE [ARG; ARG ...]
//! [goal N:] forward LABEL RULE [ARG; ...]
//! [goal N:] unfold DEF at (goal | LABEL) PATH
//! [goal N:] fold DEF at (goal | LABEL) PATH
//! [goal N:] auto LEVEL
//! instantiate ?N := TERM
//! refute with MODEL
//! undo
//! qed
//! ```
//!
//! `#` starts a comment; blank lines are ignored. Arguments are separated by
//! `;` (the label and path of `eq_rewrite` may also be separated by spaces).
//! A witness argument of `?` asks for a fresh unknown. Without a `goal N:`
//! prefix a command acts on the first open goal. Open goals are listed in
//! tree order, so the subgoals of the latest step come first.

use std::fmt;

use thiserror::Error;

use crate::definitions::RewriteDirection;
use crate::formula::{parse_formula, parse_term, print_term, Path, Signature, Term};
use crate::kernel::{ArgInput, Direction, GoalId, RewriteTarget, Rule, RuleInstance};
use crate::refute::{parse_model, Model};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Rule {
        goal: Option<GoalId>,
        instance: RuleInstance,
    },
    Rewrite {
        goal: Option<GoalId>,
        direction: RewriteDirection,
        definition: String,
        target: RewriteTarget,
        path: Path,
    },
    Auto {
        goal: Option<GoalId>,
        level: u8,
    },
    Instantiate {
        unknown: u32,
        term: Term,
    },
    Refute {
        model: Model,
    },
    Undo,
    Qed,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct SyntaxError {
    pub message: String,
}

fn syntax(message: impl Into<String>) -> SyntaxError {
    SyntaxError {
        message: message.into(),
    }
}

/// What a rule argument slot accepts.
#[derive(Clone, Copy)]
enum Slot {
    Label,
    /// A term, or `?` for a fresh unknown.
    Witness,
    Term,
    Formula,
    Path,
}

fn slots(rule: Rule, direction: Direction) -> &'static [Slot] {
    use Slot::*;
    match (direction, rule) {
        (_, Rule::EqualityRewrite) => &[Label, Path],
        (Direction::Backward, Rule::Assumption) => &[Label],
        (Direction::Backward, Rule::ForallI) => &[Term],
        (Direction::Backward, Rule::ExistsI) => &[Witness],
        (Direction::Backward, Rule::ForallE) => &[Formula, Witness],
        (Direction::Backward, Rule::ExistsE) => &[Formula, Term],
        (
            Direction::Backward,
            Rule::AndE1 | Rule::AndE2 | Rule::OrE | Rule::ImpE | Rule::IffE1 | Rule::IffE2 | Rule::NotE,
        ) => &[Formula],
        (Direction::Forward, Rule::ForallE) => &[Witness],
        (Direction::Forward, Rule::ExistsE) => &[Term],
        _ => &[],
    }
}

fn parse_slot(slot: Slot, text: &str, sig: &Signature) -> Result<ArgInput, SyntaxError> {
    match slot {
        Slot::Label => {
            if text.chars().all(|c| c.is_alphanumeric() || c == '_') {
                Ok(ArgInput::Label(text.to_string()))
            } else {
                Err(syntax(format!("`{text}` is not a hypothesis label")))
            }
        }
        Slot::Witness if text == "?" => Ok(ArgInput::NewUnknown),
        Slot::Witness | Slot::Term => parse_term(text, sig)
            .map(ArgInput::Term)
            .map_err(|e| syntax(format!("in term `{text}`: {e}"))),
        Slot::Formula => parse_formula(text, sig)
            .map(ArgInput::Formula)
            .map_err(|e| syntax(format!("in formula `{text}`: {e}"))),
        Slot::Path => text.parse().map(ArgInput::Path).map_err(|e| syntax(format!("{e}"))),
    }
}

fn parse_args(rule: Rule, direction: Direction, text: &str, sig: &Signature) -> Result<Vec<ArgInput>, SyntaxError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let mut pieces: Vec<&str> = text.split(';').map(str::trim).collect();
    if rule == Rule::EqualityRewrite && pieces.len() == 1 {
        pieces = text.split_whitespace().collect();
    }
    let expected = slots(rule, direction);
    if pieces.len() > expected.len() {
        return Err(syntax(format!(
            "{direction} {rule} takes at most {} argument(s), got {}",
            expected.len(),
            pieces.len()
        )));
    }
    pieces
        .iter()
        .zip(expected)
        .map(|(p, s)| {
            if p.is_empty() {
                Err(syntax("empty argument"))
            } else {
                parse_slot(*s, p, sig)
            }
        })
        .collect()
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim_start()),
        None => (s, ""),
    }
}

fn no_rest(keyword: &str, rest: &str) -> Result<(), SyntaxError> {
    if rest.is_empty() {
        Ok(())
    } else {
        Err(syntax(format!("unexpected `{rest}` after {keyword}")))
    }
}

fn parse_rule(name: &str) -> Result<Rule, SyntaxError> {
    match name.parse::<Rule>() {
        Ok(Rule::Definition | Rule::Supposition) | Err(_) => Err(syntax(format!("unknown rule `{name}`"))),
        Ok(r) => Ok(r),
    }
}

/// Parses one script line. Blank and comment-only lines give `None`.
pub fn parse_command(line: &str, sig: &Signature) -> Result<Option<Command>, SyntaxError> {
    let text = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim();
    if text.is_empty() {
        return Ok(None);
    }
    let (mut goal, mut text) = (None, text);
    if let Some(rest) = text.strip_prefix("goal") {
        if rest.starts_with(|c: char| c.is_whitespace()) {
            let (n, rest) = rest
                .trim_start()
                .split_once(':')
                .ok_or_else(|| syntax("expected `goal N:`"))?;
            goal = Some(n.trim().parse::<GoalId>().map_err(|_| syntax(format!("`{}` is not a goal number", n.trim())))?);
            text = rest.trim();
        }
    }
    let (keyword, rest) = split_word(text);
    let cmd = match keyword {
        "backward" => {
            let (rule, args) = split_word(rest);
            if rule.is_empty() {
                return Err(syntax("backward needs a rule name"));
            }
            let rule = parse_rule(rule)?;
            Command::Rule {
                goal,
                instance: RuleInstance::backward(rule, parse_args(rule, Direction::Backward, args, sig)?),
            }
        }
        "forward" => {
            let (label, rest) = split_word(rest);
            let (rule, args) = split_word(rest);
            if label.is_empty() || rule.is_empty() {
                return Err(syntax("forward needs a hypothesis label and a rule name"));
            }
            let rule = parse_rule(rule)?;
            Command::Rule {
                goal,
                instance: RuleInstance::forward(label, rule, parse_args(rule, Direction::Forward, args, sig)?),
            }
        }
        "unfold" | "fold" => {
            let direction = if keyword == "unfold" {
                RewriteDirection::Unfold
            } else {
                RewriteDirection::Fold
            };
            let (definition, rest) = split_word(rest);
            let (at, rest) = split_word(rest);
            let (target, rest) = split_word(rest);
            let (path, rest) = split_word(rest);
            if definition.is_empty() || at != "at" || target.is_empty() {
                return Err(syntax(format!("expected `{keyword} DEF at (goal | LABEL) PATH`")));
            }
            no_rest(keyword, rest)?;
            Command::Rewrite {
                goal,
                direction,
                definition: definition.to_string(),
                target: if target == "goal" {
                    RewriteTarget::Conclusion
                } else {
                    RewriteTarget::Hypothesis(target.to_string())
                },
                path: path.parse().map_err(|e| syntax(format!("{e}")))?,
            }
        }
        "auto" => {
            let (level, rest) = split_word(rest);
            no_rest("auto", rest)?;
            let level = match level {
                "0" => 0,
                "1" => 1,
                "2" => 2,
                _ => return Err(syntax("auto takes a level 0, 1 or 2")),
            };
            Command::Auto { goal, level }
        }
        _ if goal.is_some() => return Err(syntax(format!("`{keyword}` does not take a goal prefix"))),
        "instantiate" => {
            let (lhs, term) = rest.split_once(":=").ok_or_else(|| syntax("expected `instantiate ?N := TERM`"))?;
            let n = lhs
                .trim()
                .strip_prefix('?')
                .and_then(|d| d.parse::<u32>().ok())
                .ok_or_else(|| syntax(format!("`{}` is not an unknown", lhs.trim())))?;
            Command::Instantiate {
                unknown: n,
                term: parse_term(term.trim(), sig).map_err(|e| syntax(format!("in term `{}`: {e}", term.trim())))?,
            }
        }
        "refute" => {
            let model = rest.strip_prefix("with").ok_or_else(|| syntax("expected `refute with MODEL`"))?;
            Command::Refute {
                model: parse_model(model.trim(), sig).map_err(|e| syntax(format!("in model: {e}")))?,
            }
        }
        "undo" => {
            no_rest("undo", rest)?;
            Command::Undo
        }
        "qed" => {
            no_rest("qed", rest)?;
            Command::Qed
        }
        "" => return Err(syntax("missing command after goal prefix")),
        other => return Err(syntax(format!("unknown command `{other}`"))),
    };
    Ok(Some(cmd))
}

/// A parse failure tagged with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {error}")]
pub struct ScriptError {
    pub line: usize,
    pub error: SyntaxError,
}

/// Parses a whole script, keeping each command's line number.
pub fn parse_script(text: &str, sig: &Signature) -> Result<Vec<(usize, Command)>, ScriptError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        match parse_command(line, sig) {
            Ok(Some(c)) => out.push((i + 1, c)),
            Ok(None) => {}
            Err(error) => return Err(ScriptError { line: i + 1, error }),
        }
    }
    Ok(out)
}

/// The script text of a rule application, without goal prefix.
pub fn instance_text(inst: &RuleInstance) -> String {
    let mut s = match (&inst.direction, &inst.hypothesis) {
        (Direction::Forward, Some(h)) => format!("forward {h} {}", inst.rule),
        _ => format!("backward {}", inst.rule),
    };
    if !inst.args.is_empty() {
        let args: Vec<String> = inst.args.iter().map(ToString::to_string).collect();
        s.push(' ');
        s.push_str(&args.join("; "));
    }
    s
}

impl Command {
    /// The goal named by an explicit prefix.
    pub fn goal(&self) -> Option<GoalId> {
        match self {
            Command::Rule { goal, .. } | Command::Rewrite { goal, .. } | Command::Auto { goal, .. } => *goal,
            _ => None,
        }
    }

    /// The same command with its goal prefix set.
    pub fn with_goal(mut self, id: GoalId) -> Self {
        if let Command::Rule { goal, .. } | Command::Rewrite { goal, .. } | Command::Auto { goal, .. } = &mut self {
            *goal = Some(id);
        }
        self
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = self.goal() {
            write!(f, "goal {g}: ")?;
        }
        match self {
            Command::Rule { instance, .. } => f.write_str(&instance_text(instance)),
            Command::Rewrite {
                direction,
                definition,
                target,
                path,
                ..
            } => {
                let target = match target {
                    RewriteTarget::Conclusion => "goal",
                    RewriteTarget::Hypothesis(l) => l,
                };
                write!(f, "{direction} {definition} at {target} {path}")
            }
            Command::Auto { level, .. } => write!(f, "auto {level}"),
            Command::Instantiate { unknown, term } => write!(f, "instantiate ?{unknown} := {}", print_term(term)),
            Command::Refute { model } => write!(f, "refute with {model}"),
            Command::Undo => f.write_str("undo"),
            Command::Qed => f.write_str("qed"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn sig() -> Signature {
        Signature::propositional(["p", "q"])
            .with_predicate("P", 1)
            .unwrap()
            .with_predicate("Q", 2)
            .unwrap()
            .with_constant("c")
            .unwrap()
    }

    fn parse(s: &str) -> Command {
        parse_command(s, &sig()).unwrap().unwrap()
    }

    #[test]
    fn comments_and_blank_lines() {
        assert_eq!(parse_command("   # nothing", &sig()), Ok(None));
        assert_eq!(parse_command("", &sig()), Ok(None));
        assert_eq!(parse("qed # done"), Command::Qed);
    }

    #[test]
    fn rules_with_arguments() {
        assert_eq!(
            parse("goal 3: backward or_elim p \\/ q"),
            Command::Rule {
                goal: Some(3),
                instance: RuleInstance::backward(
                    Rule::OrE,
                    vec![ArgInput::Formula(Formula::or(Formula::atom("p"), Formula::atom("q")))]
                ),
            }
        );
        assert_eq!(
            parse("forward h1 forall_elim ?"),
            Command::Rule {
                goal: None,
                instance: RuleInstance::forward("h1", Rule::ForallE, vec![ArgInput::NewUnknown]),
            }
        );
        let Command::Rule { instance, .. } = parse("forward h2 eq_rewrite h3 0.1") else { panic!() };
        assert_eq!(instance.args, vec![ArgInput::Label("h3".into()), ArgInput::Path(Path(vec![0, 1]))]);
        let Command::Rule { instance, .. } = parse("backward forall_elim (forall x) Q(x, c); c") else { panic!() };
        assert_eq!(instance.args.len(), 2);
    }

    #[test]
    fn display_round_trips() {
        for line in [
            "goal 2: backward and_intro",
            "forward h1 and_elim1",
            "backward exists_intro ?",
            "backward not_elim ~p",
            "goal 1: unfold subset at h2 0",
            "fold subset at goal root",
            "auto 2",
            "instantiate ?1 := c",
            "refute with p=0, q=1",
            "undo",
            "qed",
        ] {
            let c = parse(line);
            assert_eq!(c.to_string(), line);
            assert_eq!(parse(&c.to_string()), c);
        }
    }

    #[test]
    fn syntax_errors() {
        for bad in [
            "backward",
            "backward frobnicate",
            "backward supposition",
            "auto 3",
            "goal x: auto 1",
            "goal 1: undo",
            "instantiate 1 := c",
            "refute p=1",
            "backward and_intro p",
            "backward or_elim p \\/",
            "unfold subset goal",
            "jump",
        ] {
            assert!(parse_command(bad, &sig()).is_err(), "{bad}");
        }
    }

    #[test]
    fn script_errors_carry_line_numbers() {
        let e = parse_script("backward impl_intro\n\nbackward nope\n", &sig()).unwrap_err();
        assert_eq!(e.line, 3);
        let ok = parse_script("# header\nbackward impl_intro\nqed\n", &sig()).unwrap();
        assert_eq!(ok.iter().map(|(l, _)| *l).collect::<Vec<_>>(), vec![2, 3]);
    }
}
