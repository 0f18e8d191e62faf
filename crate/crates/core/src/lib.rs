//! Learning and applying normalization rules for natural-language time
//! expressions.
//!
//! The pipeline has three stages:
//!
//! 1. **Capture** ([`capture`]): given a base value (usually the document
//!    creation time), a target TIMEX3 value, and the numbers surfacing in the
//!    expression, search for low-redundancy operation sequences that turn the
//!    base into the target.
//! 2. **Learning** ([`rule`]): abstract captured sequences against tokenized
//!    surface forms into pattern rules and rank them by corpus support.
//! 3. **Normalization** ([`normalize`]): apply learned rules to new
//!    expressions, falling back to minimal segment covers when no single rule
//!    matches the whole expression.

pub mod capture;
pub mod codec;
pub mod corpus;
pub mod error;
pub mod lexicon;
pub mod normalize;
pub mod op;
pub mod rule;
pub mod unit;
pub mod value;

pub use codec::{parse_timex_value, serialize_timex_value};
pub use error::{Result, TemporalError};
pub use op::{execute, parse_operation, parse_sequence, sort_sequence, Operation, OperationSequence, Slot};
pub use unit::{Bound, EnumConst, TimeField, TimeUnit};
pub use value::{ApproxKind, DurationValue, FieldValue, Instant, TemporalValue};
