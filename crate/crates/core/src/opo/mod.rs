//! Operators written as contraction graphs of Poisson-tensor factors, and
//! the ordering predicate on such representations.
//!
//! Being ordered is a property of a written term, not of the operator it
//! denotes: one operator can have ordered and unordered representations.

mod calculus;
mod concrete;
mod enumerate;
pub mod examples;
mod gauge;
mod graph;
mod term;

pub use calculus::{abstract_bracket, abstract_delta, abstract_delta_term, abstract_product, abstract_product_term};
pub use concrete::{concretize, concretize_operator, concretize_operator_with, concretize_with};
pub use enumerate::{all_terms, ordered_terms, parity_basis};
pub use gauge::{opo_basis, OpoBasis, OpoGauge};
pub use graph::{is_opo, is_ordered_as_written, opo_arrangement};
pub use term::{
    parse_term, AbstractOperator, AbstractTerm, AbstractTermJson, Arrangement, FactorJson, PFactor, Target,
};
