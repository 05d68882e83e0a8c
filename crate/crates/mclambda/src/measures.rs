//! Proportional-reduction-in-error association measures.
//!
//! All measures compare the probability of mispredicting the response
//! when nothing is known (case 1: guess the top-t marginal categories)
//! against the probability of mispredicting it when the explanatory
//! category is known (case 2: guess the top-t categories of the observed
//! row). The measure is the relative reduction
//! `(E1 - E2) / E1`.
//!
//! Two families are provided for every order `1 <= t < c`:
//!
//! * the plain family, which aggregates the conditional error
//!   probabilities by their weighted arithmetic mean (the classic
//!   Goodman-Kruskal lambda is the t = 1 case), and
//! * the K family, which aggregates them by the weighted root mean
//!   square instead (Kvalseth's alternative lambda is the t = 1 case).
//!
//! The K family dominates the plain family for every table and order,
//! and vanishing K values for all orders characterize complete
//! independence; the plain family can vanish without independence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::{ProbabilityTable, TopKSelection};

/// Degeneracy threshold for the PRE denominator `1 - S_B`.
pub(crate) const DEGENERACY_TOL: f64 = 1e-12;

/// Which aggregation of conditional error probabilities a measure uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Weighted arithmetic mean (Goodman-Kruskal style).
    Plain,
    /// Weighted root mean square (Kvalseth style).
    K,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Plain => "plain",
            Family::K => "k",
        })
    }
}

/// Prediction direction of an asymmetric measure, or the symmetric blend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    /// Rows explain columns (the default asymmetric setup).
    #[serde(rename = "y-given-x")]
    YGivenX,
    /// Columns explain rows; computed on the transposed table.
    #[serde(rename = "x-given-y")]
    XGivenY,
    /// Weighted mean of both asymmetric directions (order 1 only).
    #[serde(rename = "symmetric")]
    Symmetric,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::YGivenX => "y-given-x",
            Direction::XGivenY => "x-given-y",
            Direction::Symmetric => "symmetric",
        })
    }
}

/// A measure value together with the error probabilities it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureResult {
    /// The PRE value, in [0, 1].
    pub value: f64,
    pub family: Family,
    pub direction: Direction,
    pub t: usize,
    /// Probability of a prediction error without the predictor.
    pub error_case1: f64,
    /// Probability of a prediction error with the predictor.
    pub error_case2: f64,
    /// True when some top-t selection boundary was decided by a tie.
    pub tie_flag: bool,
}

/// Weights of the two asymmetric directions inside the symmetric measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricWeights {
    pub w_y: f64,
    pub w_x: f64,
}

/// Orients the table for an asymmetric direction.
fn oriented(p: &ProbabilityTable, direction: Direction) -> Result<ProbabilityTable> {
    match direction {
        Direction::YGivenX => Ok(p.clone()),
        Direction::XGivenY => Ok(p.transpose()),
        Direction::Symmetric => Err(Error::BadDirection("symmetric")),
    }
}

/// Plain-family measure of order `t`.
///
/// `value = (sum_i s_i - S_B) / (1 - S_B)` where `s_i` is the top-t sum of
/// row i and `S_B` the top-t marginal sum. For t = 1 this is the classic
/// Goodman-Kruskal lambda.
pub fn lambda(p: &ProbabilityTable, t: usize, direction: Direction) -> Result<MeasureResult> {
    let q = oriented(p, direction)?;
    let sel = q.top_k(t)?;
    let s_b = sel.marginal_top_sum();
    if 1.0 - s_b < DEGENERACY_TOL {
        return Err(Error::DegenerateMarginal { t });
    }
    let sum_s: f64 = sel.row_top_sums().iter().sum();
    let value = ((sum_s - s_b) / (1.0 - s_b)).clamp(0.0, 1.0);
    Ok(MeasureResult {
        value,
        family: Family::Plain,
        direction,
        t,
        error_case1: 1.0 - s_b,
        error_case2: (1.0 - sum_s).max(0.0),
        tie_flag: sel.tie_flag(),
    })
}

/// Root-mean-square term `a = sqrt(sum_i s_i^2 / p_{i+})` of the K family.
///
/// Written as `sum_i b_i * s_i` with `b_i = s_i / p_{i+}` so that rows
/// fully captured by their top-t cells contribute exactly `s_i`; rows with
/// zero marginal contribute 0.
pub(crate) fn rms_term(q: &ProbabilityTable, sel: &TopKSelection) -> f64 {
    let mut sum = 0.0;
    for i in 0..q.rows() {
        let pi = q.row_marginal(i);
        if pi > 0.0 {
            let s = sel.row_top_sum(i);
            sum += (s / pi) * s;
        }
    }
    sum.sqrt()
}

/// K-family measure of order `t`.
///
/// `value = (a - S_B) / (1 - S_B)` with `a` the weighted root mean square
/// of the top-t conditional sums. For t = 1 this is Kvalseth's alternative
/// lambda.
pub fn lambda_k(p: &ProbabilityTable, t: usize, direction: Direction) -> Result<MeasureResult> {
    let q = oriented(p, direction)?;
    let sel = q.top_k(t)?;
    let s_b = sel.marginal_top_sum();
    if 1.0 - s_b < DEGENERACY_TOL {
        return Err(Error::DegenerateMarginal { t });
    }
    let a = rms_term(&q, &sel);
    if a == 0.0 {
        return Err(Error::DegenerateRms);
    }
    let value = ((a - s_b) / (1.0 - s_b)).clamp(0.0, 1.0);
    Ok(MeasureResult {
        value,
        family: Family::K,
        direction,
        t,
        error_case1: 1.0 - s_b,
        error_case2: (1.0 - a).max(0.0),
        tie_flag: sel.tie_flag(),
    })
}

/// Dispatches on the family tag.
pub fn measure(
    p: &ProbabilityTable,
    family: Family,
    t: usize,
    direction: Direction,
) -> Result<MeasureResult> {
    match family {
        Family::Plain => lambda(p, t, direction),
        Family::K => lambda_k(p, t, direction),
    }
}

/// Classic symmetric lambda: the weighted mean of the two order-1
/// asymmetric measures, with weights proportional to their case-1 error
/// probabilities.
///
/// The error probabilities reported correspond to a prediction task that
/// targets each variable half the time.
pub fn symmetric_lambda(p: &ProbabilityTable) -> Result<(MeasureResult, SymmetricWeights)> {
    let sel_y = p.top_k(1)?;
    let sel_x = p.transpose().top_k(1)?;
    let den_y = 1.0 - sel_y.marginal_top_sum();
    let den_x = 1.0 - sel_x.marginal_top_sum();
    let den = den_y + den_x;
    if den < DEGENERACY_TOL {
        return Err(Error::DegenerateMarginal { t: 1 });
    }
    let num_y: f64 = sel_y.row_top_sums().iter().sum::<f64>() - sel_y.marginal_top_sum();
    let num_x: f64 = sel_x.row_top_sums().iter().sum::<f64>() - sel_x.marginal_top_sum();
    let value = ((num_y + num_x) / den).clamp(0.0, 1.0);
    let result = MeasureResult {
        value,
        family: Family::Plain,
        direction: Direction::Symmetric,
        t: 1,
        error_case1: den / 2.0,
        error_case2: ((den_y - num_y) + (den_x - num_x)).max(0.0) / 2.0,
        tie_flag: sel_y.tie_flag() || sel_x.tie_flag(),
    };
    let weights = SymmetricWeights {
        w_y: den_y / den,
        w_x: den_x / den,
    };
    Ok((result, weights))
}

/// One order of a [`measure_profile`], degenerate orders flagged in place.
#[derive(Debug, Clone)]
pub struct ProfileEntry {
    pub family: Family,
    pub t: usize,
    pub result: Result<MeasureResult>,
}

/// Both families evaluated at every valid order, in increasing order of t
/// with the plain family first. Degenerate orders are reported as entries
/// carrying their error; the remaining orders are still returned.
pub fn measure_profile(p: &ProbabilityTable, direction: Direction) -> Result<Vec<ProfileEntry>> {
    let q = oriented(p, direction)?;
    let mut out = Vec::with_capacity(2 * (q.cols() - 1));
    for t in 1..q.cols() {
        for family in [Family::Plain, Family::K] {
            out.push(ProfileEntry {
                family,
                t,
                result: measure(p, family, t, direction),
            });
        }
    }
    Ok(out)
}
