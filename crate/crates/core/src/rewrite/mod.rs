//! Normal forms modulo the graded identities: straightening, SSE reduction,
//! the SSE order and finite enumeration.

pub mod enumerate;
pub mod normal;
pub mod order;
pub mod rules;
pub mod straighten;

pub use enumerate::{sse_dimension, sse_enumerate, ENUMERATION_LIMIT};
pub use normal::{
    extract_p_part, split_exponent, sse_reduce, NormalForm, PMonomial, PPolynomial, ReduceConfig, SseMonomial,
};
pub use order::{
    aligned_exp_xy, equiv01, ext, fallback_events, leading_term, less01, sort_ascending, sse_compare,
    sse_compare_case, CompareCase,
};
pub use rules::{Rule, RuleSet};
pub use straighten::{straighten, StraightTerm, Straightened, DEFAULT_MAX_STEPS};
