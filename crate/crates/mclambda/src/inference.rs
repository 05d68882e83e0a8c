//! Delta-method standard errors and Wald confidence intervals for the
//! measures, treating the observed counts as one multinomial draw.
//!
//! The asymptotic variance of a plug-in estimator is
//! `sigma^2 = sum p_ij D_ij^2 - (sum p_ij D_ij)^2` where `D_ij` is the
//! partial derivative of the measure with respect to cell (i, j). The
//! derivatives only depend on membership of j in the row's top-t set and
//! in the marginal top-t set, so the grids are cheap to form. Note that
//! on the probability simplex the gradient is determined only up to an
//! additive constant; the variance above is invariant under that shift.

use crate::error::{Error, Result};
use crate::measures::{self, Direction, Family, MeasureResult};
use crate::normal;
use crate::table::{ContingencyTable, ProbabilityTable, TopKSelection};

/// Grid of partial derivatives of a measure with respect to the cells.
#[derive(Debug, Clone)]
pub struct GradientGrid {
    delta: Vec<f64>,
    rows: usize,
    cols: usize,
    family: Family,
    t: usize,
    /// Root-mean-square term `a` (K family only).
    a: Option<f64>,
    /// Per-row ratios `b_i = s_i / p_{i+}` (K family only).
    b: Option<Vec<f64>>,
}

impl GradientGrid {
    pub fn delta(&self, i: usize, j: usize) -> f64 {
        self.delta[i * self.cols + j]
    }

    pub fn deltas(&self) -> &[f64] {
        &self.delta
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> usize {
        self.t
    }

    pub fn rms_term(&self) -> Option<f64> {
        self.a
    }

    pub fn row_ratios(&self) -> Option<&[f64]> {
        self.b.as_deref()
    }
}

/// Gradient of the plain-family measure:
/// `D_ij = (1/(1-S_B)) * [1{j in A_i} - (1 - lambda) * 1{j in B}]`.
pub fn gradient_plain(p: &ProbabilityTable, sel: &TopKSelection) -> Result<GradientGrid> {
    let t = sel.order();
    let s_b = sel.marginal_top_sum();
    if 1.0 - s_b < measures::DEGENERACY_TOL {
        return Err(Error::DegenerateMarginal { t });
    }
    let sum_s: f64 = sel.row_top_sums().iter().sum();
    let lam = ((sum_s - s_b) / (1.0 - s_b)).clamp(0.0, 1.0);
    let scale = 1.0 / (1.0 - s_b);
    let shrink = 1.0 - lam;

    let (rows, cols) = (p.rows(), p.cols());
    let in_b = membership(sel.marginal_top_set(), cols);
    let mut delta = vec![0.0; rows * cols];
    for i in 0..rows {
        let in_a = membership(sel.row_top_set(i), cols);
        for j in 0..cols {
            let a_ind = if in_a[j] { 1.0 } else { 0.0 };
            let b_ind = if in_b[j] { 1.0 } else { 0.0 };
            delta[i * cols + j] = scale * (a_ind - shrink * b_ind);
        }
    }
    Ok(GradientGrid {
        delta,
        rows,
        cols,
        family: Family::Plain,
        t,
        a: None,
        b: None,
    })
}

/// Gradient of the K-family measure:
/// `D_ij = (1/(1-S_B)) * [(b_i/a) * (1{j in A_i} - b_i/2)
///                        - (1 - lambda_K) * 1{j in B}]`,
/// with `b_i = 0` for rows with zero marginal.
pub fn gradient_k(p: &ProbabilityTable, sel: &TopKSelection) -> Result<GradientGrid> {
    let t = sel.order();
    let s_b = sel.marginal_top_sum();
    if 1.0 - s_b < measures::DEGENERACY_TOL {
        return Err(Error::DegenerateMarginal { t });
    }
    let a = measures::rms_term(p, sel);
    if a == 0.0 {
        return Err(Error::DegenerateRms);
    }
    let lam = ((a - s_b) / (1.0 - s_b)).clamp(0.0, 1.0);
    let scale = 1.0 / (1.0 - s_b);
    let shrink = 1.0 - lam;

    let (rows, cols) = (p.rows(), p.cols());
    let ratios: Vec<f64> = (0..rows)
        .map(|i| {
            let pi = p.row_marginal(i);
            if pi > 0.0 {
                sel.row_top_sum(i) / pi
            } else {
                0.0
            }
        })
        .collect();
    let in_b = membership(sel.marginal_top_set(), cols);
    let mut delta = vec![0.0; rows * cols];
    for i in 0..rows {
        let in_a = membership(sel.row_top_set(i), cols);
        let b_i = ratios[i];
        for j in 0..cols {
            let a_ind = if in_a[j] { 1.0 } else { 0.0 };
            let b_ind = if in_b[j] { 1.0 } else { 0.0 };
            delta[i * cols + j] = scale * ((b_i / a) * (a_ind - b_i / 2.0) - shrink * b_ind);
        }
    }
    Ok(GradientGrid {
        delta,
        rows,
        cols,
        family: Family::K,
        t,
        a: Some(a),
        b: Some(ratios),
    })
}

fn membership(set: &[usize], len: usize) -> Vec<bool> {
    let mut m = vec![false; len];
    for &j in set {
        m[j] = true;
    }
    m
}

/// `sigma^2 = sum p_ij D_ij^2 - (sum p_ij D_ij)^2`, clamped to zero when
/// rounding drives it a hair negative.
pub fn asymptotic_variance(p: &ProbabilityTable, grad: &GradientGrid) -> f64 {
    debug_assert_eq!((p.rows(), p.cols()), (grad.rows(), grad.cols()));
    let mut mean = 0.0;
    let mut second = 0.0;
    for (pi, di) in p.cells().iter().zip(grad.deltas()) {
        mean += pi * di;
        second += pi * di * di;
    }
    let var = second - mean * mean;
    debug_assert!(var > -1e-12, "variance of the gradient grid must be >= 0");
    var.max(0.0)
}

/// Point estimate with standard error and Wald confidence bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceResult {
    pub measure: MeasureResult,
    /// Asymptotic variance `sigma^2` of `sqrt(n) * (estimate - truth)`.
    pub sigma2: f64,
    /// Estimated standard error `sigma / sqrt(n)`.
    pub std_error: f64,
    /// Confidence bounds, absent when the interval is degenerate. Bounds
    /// are not clipped to [0, 1].
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub alpha: f64,
    /// Set when the standard error vanishes (boundary estimates); the
    /// interval is suppressed rather than reported with zero width.
    pub degenerate: bool,
    /// Set when a top-t selection boundary was decided by a tie; the delta
    /// method is unreliable there because the measure is not
    /// differentiable.
    pub tie_warning: bool,
}

impl InferenceResult {
    pub fn estimate(&self) -> f64 {
        self.measure.value
    }
}

/// Threshold below which a standard error is treated as exactly zero.
const DEGENERATE_SE: f64 = 1e-12;

/// Plug-in estimate, delta-method standard error, and a Wald
/// `100(1-alpha)%` interval `estimate +/- z_{alpha/2} * sigma / sqrt(n)`.
pub fn confidence_interval(
    table: &ContingencyTable,
    family: Family,
    t: usize,
    direction: Direction,
    alpha: f64,
) -> Result<InferenceResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadAlpha { alpha });
    }
    let oriented = match direction {
        Direction::YGivenX => table.clone(),
        Direction::XGivenY => table.transpose(),
        Direction::Symmetric => return Err(Error::BadDirection("symmetric")),
    };
    let p = oriented.normalize();
    let sel = p.top_k(t)?;
    let measure = measures::measure(&p, family, t, Direction::YGivenX)?;
    let grad = match family {
        Family::Plain => gradient_plain(&p, &sel)?,
        Family::K => gradient_k(&p, &sel)?,
    };
    let sigma2 = asymptotic_variance(&p, &grad);
    let std_error = (sigma2 / table.total()).sqrt();
    let degenerate = std_error <= DEGENERATE_SE;
    let (ci_low, ci_high) = if degenerate {
        (None, None)
    } else {
        let z = normal::normal_quantile(1.0 - alpha / 2.0)?;
        (
            Some(measure.value - z * std_error),
            Some(measure.value + z * std_error),
        )
    };
    let tie_warning = sel.tie_flag();
    let measure = MeasureResult {
        direction,
        ..measure
    };
    Ok(InferenceResult {
        measure,
        sigma2,
        std_error,
        ci_low,
        ci_high,
        alpha,
        degenerate,
        tie_warning,
    })
}
