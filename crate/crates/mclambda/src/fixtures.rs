//! Small bundled tables used by the verification command, the demo page,
//! and the test suites.

use crate::table::{ContingencyTable, ProbabilityTable};

/// 3x3 grid with a completely independent structure (product of marginals
/// (0.5, 0.3, 0.2) and (0.6, 0.3, 0.1)).
pub fn independent_3x3() -> ProbabilityTable {
    ProbabilityTable::from_rows(&[
        vec![0.30, 0.15, 0.05],
        vec![0.18, 0.09, 0.03],
        vec![0.12, 0.06, 0.02],
    ])
    .expect("fixture is valid")
}

/// 3x3 grid whose row maxima are all concentrated in the first column, so
/// the order-1 measures are blind to the association carried by the other
/// columns.
pub fn concentrated_3x3() -> ProbabilityTable {
    ProbabilityTable::from_rows(&[
        vec![0.30, 0.18, 0.02],
        vec![0.20, 0.10, 0.00],
        vec![0.10, 0.02, 0.08],
    ])
    .expect("fixture is valid")
}

/// Variant of [`concentrated_3x3`] whose first column is additionally
/// quasi-independent (`p_i1 = p_{i+} * p_{+1}`), which drives the order-1
/// K measure to zero as well.
pub fn quasi_independent_3x3() -> ProbabilityTable {
    ProbabilityTable::from_rows(&[
        vec![0.30, 0.18, 0.02],
        vec![0.18, 0.10, 0.02],
        vec![0.12, 0.02, 0.06],
    ])
    .expect("fixture is valid")
}

/// Students' survey on alcohol consumption (rows) versus cannabis use
/// (columns), University of Ioannina, 1995; published by Marselos et al.
/// (1997). Column categories: never / once or twice / more often.
pub fn cannabis_counts() -> ContingencyTable {
    ContingencyTable::from_rows(&[
        vec![204.0, 6.0, 1.0],
        vec![211.0, 13.0, 5.0],
        vec![357.0, 44.0, 38.0],
        vec![92.0, 34.0, 49.0],
    ])
    .expect("fixture is valid")
}

/// Reference 4x4 discretization of the standard bivariate normal with
/// correlation 0.4 into equal-probability bins, rounded to 4 decimals.
pub const NORMAL_4X4_RHO04: [[f64; 4]; 4] = [
    [0.1072, 0.0692, 0.0477, 0.0258],
    [0.0692, 0.0698, 0.0632, 0.0477],
    [0.0477, 0.0632, 0.0698, 0.0692],
    [0.0258, 0.0477, 0.0692, 0.1072],
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survey_total() {
        assert_eq!(cannabis_counts().total(), 1054.0);
    }

    #[test]
    fn fixture_marginals_match() {
        for p in [
            independent_3x3(),
            concentrated_3x3(),
            quasi_independent_3x3(),
        ] {
            for (m, want) in p.row_marginals().iter().zip([0.5, 0.3, 0.2]) {
                assert!((m - want).abs() < 1e-12);
            }
            for (m, want) in p.col_marginals().iter().zip([0.6, 0.3, 0.1]) {
                assert!((m - want).abs() < 1e-12);
            }
        }
    }
}
