//! Contingency and probability tables, marginals, and ordered top-k
//! selection of cells.
//!
//! Everything downstream (measures, gradients, simulation) consumes the
//! types defined here. Tables are immutable after construction and all
//! operations are pure, so values can be shared freely across threads.

use crate::error::{Error, Result};

/// Tolerance for accepting a probability table as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// An r x c table of observed (possibly weighted) frequencies.
///
/// Counts are real-valued so that pre-aggregated or weighted tables are
/// accepted; the measures only ever use proportions.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    counts: Vec<f64>,
    rows: usize,
    cols: usize,
    total: f64,
}

impl ContingencyTable {
    /// Builds a table from row-major cells, validating shape and signs.
    pub fn new(rows: usize, cols: usize, counts: Vec<f64>) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::TooFewCategories { rows, cols });
        }
        assert_eq!(counts.len(), rows * cols, "cell vector length mismatch");
        for (k, &v) in counts.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::NegativeCount {
                    row: k / cols,
                    col: k % cols,
                    value: v,
                });
            }
        }
        let total: f64 = counts.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroTotal);
        }
        Ok(Self {
            counts,
            rows,
            cols,
            total,
        })
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::NotRectangular {
                    line: i + 1,
                    expected: c,
                    got: row.len(),
                });
            }
        }
        Self::new(r, c, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Grand total n.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn count(&self, i: usize, j: usize) -> f64 {
        self.counts[i * self.cols + j]
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    /// Divides every cell by the grand total.
    pub fn normalize(&self) -> ProbabilityTable {
        let cells: Vec<f64> = self.counts.iter().map(|&c| c / self.total).collect();
        // Construction cannot fail: signs and shape were checked on the way
        // in, and the cell sum is 1 up to rounding.
        ProbabilityTable::new(self.rows, self.cols, cells)
            .expect("normalized contingency table must validate")
    }

    /// Transposed copy (rows and columns swapped).
    pub fn transpose(&self) -> ContingencyTable {
        let mut counts = vec![0.0; self.counts.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                counts[j * self.rows + i] = self.count(i, j);
            }
        }
        ContingencyTable {
            counts,
            rows: self.cols,
            cols: self.rows,
            total: self.total,
        }
    }

    /// Rescales every count by a positive factor.
    pub fn scale(&self, factor: f64) -> Result<ContingencyTable> {
        let counts = self.counts.iter().map(|&c| c * factor).collect();
        Self::new(self.rows, self.cols, counts)
    }
}

/// An r x c table of cell probabilities with recomputed marginals.
///
/// Marginals are always derived from the cells, never trusted from the
/// caller, so `p_{i+}` and `p_{+j}` are consistent with the grid by
/// construction. Rows with zero marginal are allowed; the measures define
/// their contribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    p: Vec<f64>,
    rows: usize,
    cols: usize,
    row_marginals: Vec<f64>,
    col_marginals: Vec<f64>,
}

impl ProbabilityTable {
    /// Validates a raw grid: entries nonnegative, at least 2x2, and summing
    /// to 1 within [`NORMALIZATION_TOL`].
    pub fn new(rows: usize, cols: usize, cells: Vec<f64>) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::TooFewCategories { rows, cols });
        }
        assert_eq!(cells.len(), rows * cols, "cell vector length mismatch");
        for (k, &v) in cells.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::NegativeEntry {
                    row: k / cols,
                    col: k % cols,
                    value: v,
                });
            }
        }
        let sum: f64 = cells.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        let mut row_marginals = vec![0.0; rows];
        let mut col_marginals = vec![0.0; cols];
        for i in 0..rows {
            for j in 0..cols {
                let v = cells[i * cols + j];
                row_marginals[i] += v;
                col_marginals[j] += v;
            }
        }
        Ok(Self {
            p: cells,
            rows,
            cols,
            row_marginals,
            col_marginals,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::NotRectangular {
                    line: i + 1,
                    expected: c,
                    got: row.len(),
                });
            }
        }
        Self::new(r, c, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.cols + j]
    }

    pub fn cells(&self) -> &[f64] {
        &self.p
    }

    /// Row marginal `p_{i+}`.
    pub fn row_marginal(&self, i: usize) -> f64 {
        self.row_marginals[i]
    }

    /// Column marginal `p_{+j}`.
    pub fn col_marginal(&self, j: usize) -> f64 {
        self.col_marginals[j]
    }

    pub fn row_marginals(&self) -> &[f64] {
        &self.row_marginals
    }

    pub fn col_marginals(&self) -> &[f64] {
        &self.col_marginals
    }

    /// Transposed copy: `result(j, i) = p(i, j)`, marginals swapped.
    pub fn transpose(&self) -> ProbabilityTable {
        let mut p = vec![0.0; self.p.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                p[j * self.rows + i] = self.cell(i, j);
            }
        }
        ProbabilityTable {
            p,
            rows: self.cols,
            cols: self.rows,
            row_marginals: self.col_marginals.clone(),
            col_marginals: self.row_marginals.clone(),
        }
    }

    /// Ordered top-t selection per row and for the column marginals.
    ///
    /// Values are taken in descending order; ties are broken toward the
    /// lowest column index, deterministically. The returned sums are
    /// invariant under any other tie resolution, only the index sets can
    /// differ. `tie_flag` reports whether any selection boundary was
    /// decided by a tie, i.e. the t-th and (t+1)-th largest values in some
    /// row (or in the marginals) are equal.
    pub fn top_k(&self, t: usize) -> Result<TopKSelection> {
        if t < 1 || t >= self.cols {
            return Err(Error::BadOrder {
                t,
                max: self.cols.saturating_sub(1),
            });
        }
        let mut tie_flag = false;
        let mut row_top_sets = Vec::with_capacity(self.rows);
        let mut row_top_sums = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = &self.p[i * self.cols..(i + 1) * self.cols];
            let (set, sum, tie) = select_descending(row, t);
            tie_flag |= tie;
            row_top_sets.push(set);
            row_top_sums.push(sum);
        }
        let (marginal_top_set, marginal_top_sum, tie) = select_descending(&self.col_marginals, t);
        tie_flag |= tie;
        Ok(TopKSelection {
            t,
            row_top_sets,
            row_top_sums,
            marginal_top_set,
            marginal_top_sum,
            tie_flag,
        })
    }
}

/// Sorts indices of `values` by descending value (ties toward the lowest
/// index) and returns the first `t` of them, their sum, and whether the
/// boundary between kept and dropped entries was a tie.
fn select_descending(values: &[f64], t: usize) -> (Vec<usize>, f64, bool) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .expect("table cells are finite")
            .then(a.cmp(&b))
    });
    let tie = values[order[t - 1]] == values[order[t]];
    let kept = order[..t].to_vec();
    let sum = kept.iter().map(|&j| values[j]).sum();
    (kept, sum, tie)
}

/// The ordered top-t cells of each row and of the column marginals,
/// together with the partial sums the measures consume.
#[derive(Debug, Clone, PartialEq)]
pub struct TopKSelection {
    t: usize,
    row_top_sets: Vec<Vec<usize>>,
    row_top_sums: Vec<f64>,
    marginal_top_set: Vec<usize>,
    marginal_top_sum: f64,
    tie_flag: bool,
}

impl TopKSelection {
    pub fn order(&self) -> usize {
        self.t
    }

    /// Column indices of the t largest cells of row `i`, descending.
    pub fn row_top_set(&self, i: usize) -> &[usize] {
        &self.row_top_sets[i]
    }

    /// `s_i`: sum of the t largest cells of row `i`.
    pub fn row_top_sum(&self, i: usize) -> f64 {
        self.row_top_sums[i]
    }

    pub fn row_top_sums(&self) -> &[f64] {
        &self.row_top_sums
    }

    /// Column indices of the t largest column marginals, descending.
    pub fn marginal_top_set(&self) -> &[usize] {
        &self.marginal_top_set
    }

    /// `S_B`: sum of the t largest column marginals.
    pub fn marginal_top_sum(&self) -> f64 {
        self.marginal_top_sum
    }

    /// True when any selection boundary was decided by a tie. Measure
    /// values are unaffected, but gradient index sets (and hence the delta
    /// method) are unreliable at ties.
    pub fn tie_flag(&self) -> bool {
        self.tie_flag
    }
}

/// Product table `p_ij = row[i] * col[j]`, the canonical completely
/// independent table with the given marginals.
pub fn build_independent(row_marginals: &[f64], col_marginals: &[f64]) -> Result<ProbabilityTable> {
    for (v, n) in [(row_marginals, "row"), (col_marginals, "col")] {
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        let _ = n;
    }
    let rows = row_marginals.len();
    let cols = col_marginals.len();
    let mut cells = Vec::with_capacity(rows * cols);
    for &ri in row_marginals {
        for &cj in col_marginals {
            cells.push(ri * cj);
        }
    }
    ProbabilityTable::new(rows, cols, cells)
}
