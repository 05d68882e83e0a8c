//! Association measures for two-way contingency tables based on
//! proportional reduction in error over the top t categories.
//!
//! The classic Goodman-Kruskal lambda asks: by how much does knowing the
//! row category shrink the probability of mispredicting the column
//! category, when the prediction is always the single most likely column?
//! This crate generalizes the question to the `t` most likely columns for
//! every order `1 <= t < c`, in two flavors:
//!
//! * [`measures::lambda`] - conditional error probabilities pooled by
//!   their weighted arithmetic mean (order 1 is Goodman-Kruskal lambda);
//! * [`measures::lambda_k`] - pooled by the weighted root mean square
//!   (order 1 is Kvalseth's alternative lambda). This family dominates
//!   the plain one and vanishes at every order exactly when the table is
//!   completely independent.
//!
//! Both directions of prediction are supported, along with the classic
//! symmetric lambda, delta-method standard errors and Wald confidence
//! intervals ([`inference`]), equal-frequency discretizations of the
//! bivariate normal for calibration sweeps ([`normal`]), and plain-text
//! table parsing ([`parse`]).
//!
//! ```
//! use mclambda::measures::{lambda, lambda_k, Direction};
//! use mclambda::table::ProbabilityTable;
//!
//! let p = ProbabilityTable::from_rows(&[
//!     vec![0.30, 0.18, 0.02],
//!     vec![0.20, 0.10, 0.00],
//!     vec![0.10, 0.02, 0.08],
//! ])
//! .unwrap();
//! // Blind at order 1 (all row maxima share a column) ...
//! assert_eq!(lambda(&p, 1, Direction::YGivenX).unwrap().value, 0.0);
//! // ... but strongly associated at order 2.
//! assert!((lambda(&p, 2, Direction::YGivenX).unwrap().value - 0.6).abs() < 1e-12);
//! assert!(lambda_k(&p, 2, Direction::YGivenX).unwrap().value > 0.6);
//! ```

pub mod error;
pub mod fixtures;
pub mod inference;
pub mod measures;
pub mod normal;
pub mod parse;
pub mod report;
pub mod table;

pub use error::{Error, Result};
pub use measures::{Direction, Family, MeasureResult};
pub use table::{ContingencyTable, ProbabilityTable, TopKSelection};
