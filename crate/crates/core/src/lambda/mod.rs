//! λ-terms, simple types and their translation into linear logic proofs.

mod term;
mod translate;
mod types;

use thiserror::Error;

pub use term::{
    app, beta_normalize, beta_step, church, church_value, closed_terms, is_affine, lam, random_affine_term, substitute,
    var, BetaResult, Term,
};
pub use translate::{expected_conclusion, hypothesis, star_type, translate, translate_labeled};
pub use types::{arrow, infer, tatom, typecheck, SimpleType, TypingDerivation, GROUND_ATOM};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambdaError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("type error in `{subterm}`: {msg}")]
    Type { subterm: String, msg: String },
    #[error("bad context: {0}")]
    Context(String),
    #[error("translation failed: {0}")]
    Translate(String),
}
