//! First-order formulas: syntax, signatures, parsing, printing, substitution.

mod parse;
mod print;
mod signature;
mod subst;
mod syntax;

use thiserror::Error;

pub use parse::{parse_formula, parse_open_formula, parse_term};
pub use print::{print_formula, print_term};
pub(crate) use signature::is_identifier;
pub use signature::{Signature, SymbolKind};
pub use subst::{
    alpha_equal, alpha_normalize, binders_above, fresh_variant, instantiate, locate, match_instance, match_pattern, replace_formula_at,
    replace_term_at, subformula_at, substitute, substitute_term, subterm_at, Located, Path, PathParseError, Target,
};
pub use syntax::{free_symbols, term_free_symbols, Formula, FreeSymbols, Param, SymbolUse, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at column {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    InvalidSymbol(String),
}
