//! Power-free infinite words and their subword complexity.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: finite words, morphisms, codings, Parikh vectors and the
//!   registry of named infinite words (as prefix generators).
//! * [`repetition`]: periods, exact exponents, runs and power-freeness checks.
//! * [`complexity`]: factor counts, special factors, closed forms for the
//!   Thue-Morse family, minimal forbidden words, μ-factorizations.
//! * [`codewalk`]: the jump-graph encoding of ternary square-free words.
//! * [`krieger`]: critical exponents of morphic words from series of runs.
//! * [`search`]: backtracking over power-free languages with complexity caps.
//!
//! Positions are 0-indexed everywhere.

pub mod codewalk;
pub mod complexity;
mod error;
mod index;
pub mod krieger;
pub mod repetition;
pub mod search;
pub mod words;

pub use error::{Error, Result};
pub use repetition::{PowerBound, Rational};
pub use words::{GeneratorSpec, Morphism, ParikhVector, Word};
