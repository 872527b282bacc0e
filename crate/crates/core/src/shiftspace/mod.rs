//! Symbolic dynamics: points of the full shift, subshifts of finite type and
//! the block construction of a DC1-scrambled set.

pub mod growth;
pub mod point;
pub mod scrambled;
pub mod subshift;

pub use growth::{dyadic_threshold, validate_growth, GrowthKind, GrowthSequence, GrowthValidation, ValidatedGrowth};
pub use point::{format_word, parse_word, shift_metric, sigma, Rule, Symbol, SymbolicPoint, Word};
pub use scrambled::{lambda_map, lambda_nu_word, nu_map, scrambled_point, ScrambledPair, ScrambledPoint};
pub use subshift::{horseshoe_check, sft_language, Subshift, SubshiftSpec};
