//! Weighted output regular expressions compiled to ranged, functional
//! subsequential transducers, with a lexicographic-weight evaluator.

pub mod analysis;
pub mod error;
pub mod eval;
pub mod glushkov;
pub mod range_index;
pub mod regex;
pub mod text;
pub mod transducer;
pub mod types;

pub use error::CoreError;
pub use eval::{evaluate, trace, EvalError, Evaluator, Layout};
pub use glushkov::{compile, GlushkovError};
pub use range_index::RangeIndex;
pub use regex::{parse, Ast, ParseError};
pub use transducer::{StateId, Transducer, TransducerBuilder, Transition};
pub use types::{lex_compare, Effect, OutputString, Policy, RangeLabel, Symbol, Weight};
