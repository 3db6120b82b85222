//! The `.kt-op` operator description language.
//!
//! A document declares the base dimension, the fields and the components of
//! one operator; verification bundles append candidate stages:
//!
//! ```text
//! base 2
//! field phi
//! operator grad {
//!   E1 = d(1, phi)
//!   E2 = d(2, phi)
//! }
//! stage 0 {
//!   D1 = jet_c(-1, 2, [1]) - jet_c(-1, 1, [2])
//! }
//! ```

mod ast;
mod lower;
mod parser;

use thiserror::Error;

pub use ast::{render, render_expr, Equation, Expr, Ident, SpecAst, Span, StageBlock, StageItem};
pub use lower::{lower, lower_bundle, VerifyBundle};
pub use parser::{is_reserved, parse};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("{span}: parse error: expected {}, found {found}", expected.join(" or "))]
    Parse {
        span: Span,
        found: String,
        expected: Vec<String>,
    },
    #[error("{span}: {message}")]
    Semantic { span: Span, message: String },
    #[error("{span}: antifield atom in operator component `{component}`")]
    OddAtomInOperator { span: Span, component: String },
}

impl DslError {
    pub fn span(&self) -> Span {
        match self {
            DslError::Parse { span, .. }
            | DslError::Semantic { span, .. }
            | DslError::OddAtomInOperator { span, .. } => *span,
        }
    }
}
