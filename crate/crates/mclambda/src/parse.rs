//! Parsing of comma-separated numeric grids into tables.
//!
//! The format is deliberately plain: one table row per line, cells
//! separated by commas, optional first header line and optional first
//! label column. Whether the numbers are counts or probabilities is an
//! explicit caller decision, never inferred from the data (a probability
//! table scaled by 100 is indistinguishable from counts).

use crate::error::{Error, Result};
use crate::table::{ContingencyTable, ProbabilityTable};

/// How to interpret a table file.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Cells are probabilities (validated to sum to 1) instead of counts.
    pub probabilities: bool,
    /// Skip the first non-empty line (column headers).
    pub header: bool,
    /// Skip the first field of every data line (row labels).
    pub labels: bool,
}

/// A parsed table in either mode.
#[derive(Debug, Clone)]
pub enum ParsedTable {
    Counts(ContingencyTable),
    Probabilities(ProbabilityTable),
}

impl ParsedTable {
    pub fn rows(&self) -> usize {
        match self {
            ParsedTable::Counts(t) => t.rows(),
            ParsedTable::Probabilities(p) => p.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            ParsedTable::Counts(t) => t.cols(),
            ParsedTable::Probabilities(p) => p.cols(),
        }
    }

    /// Counts normalize to proportions; probabilities pass through.
    pub fn probabilities(&self) -> ProbabilityTable {
        match self {
            ParsedTable::Counts(t) => t.normalize(),
            ParsedTable::Probabilities(p) => p.clone(),
        }
    }
}

/// Parses CSV text into a table. Line and column numbers in errors are
/// 1-based and refer to the original text, including any header line.
pub fn parse_table(text: &str, opts: &ParseOptions) -> Result<ParsedTable> {
    let mut grid: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    let mut seen_nonempty = 0usize;

    for (line_idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim_end_matches('\r');
        // Blank lines and '#' comments (e.g. sampling metadata) are skipped.
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        seen_nonempty += 1;
        if opts.header && seen_nonempty == 1 {
            continue;
        }
        let mut cells = Vec::new();
        for (col_idx, field) in line.split(',').enumerate() {
            if opts.labels && col_idx == 0 {
                continue;
            }
            let trimmed = field.trim();
            match trimmed.parse::<f64>() {
                Ok(v) => cells.push(v),
                Err(_) => {
                    return Err(Error::ParseError {
                        line: line_idx + 1,
                        column: col_idx + 1,
                        message: format!("expected a number, found {trimmed:?}"),
                    })
                }
            }
        }
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(Error::NotRectangular {
                    line: line_idx + 1,
                    expected: w,
                    got: cells.len(),
                });
            }
            _ => {}
        }
        grid.push(cells);
    }

    let rows = grid.len();
    let cols = width.unwrap_or(0);
    if rows < 2 || cols < 2 {
        return Err(Error::TooFewCategories { rows, cols });
    }
    let cells = grid.concat();
    if opts.probabilities {
        Ok(ParsedTable::Probabilities(ProbabilityTable::new(
            rows, cols, cells,
        )?))
    } else {
        Ok(ParsedTable::Counts(ContingencyTable::new(
            rows, cols, cells,
        )?))
    }
}

/// Formats a probability table as CSV at full round-trip precision, so a
/// grid written here and re-ingested reproduces measure values bit for
/// bit.
pub fn probability_table_to_csv(p: &ProbabilityTable) -> String {
    let mut out = String::new();
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{}", p.cell(i, j)));
        }
        out.push('\n');
    }
    out
}

/// Formats a contingency table as CSV.
pub fn contingency_table_to_csv(t: &ContingencyTable) -> String {
    let mut out = String::new();
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{}", t.count(i, j)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SURVEY: &str = "never,once_or_twice,more_often\n204,6,1\n211,13,5\n357,44,38\n92,34,49\n";

    #[test]
    fn parses_counts_with_header() {
        let opts = ParseOptions {
            header: true,
            ..Default::default()
        };
        let parsed = parse_table(SURVEY, &opts).unwrap();
        match parsed {
            ParsedTable::Counts(ref t) => {
                assert_eq!((t.rows(), t.cols()), (4, 3));
                assert_eq!(t.total(), 1054.0);
            }
            _ => panic!("expected counts"),
        }
    }

    #[test]
    fn parses_labels_column() {
        let text = "alcohol,never,once,often\nmonthly,204,6,1\ntwice_monthly,211,13,5\nweekly,357,44,38\ndaily,92,34,49\n";
        let opts = ParseOptions {
            header: true,
            labels: true,
            ..Default::default()
        };
        let parsed = parse_table(text, &opts).unwrap();
        assert_eq!((parsed.rows(), parsed.cols()), (4, 3));
    }

    #[test]
    fn ragged_input_rejected() {
        let err = parse_table("1,2,3\n4,5\n", &ParseOptions::default()).unwrap_err();
        assert_eq!(
            err,
            Error::NotRectangular {
                line: 2,
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn bad_cell_reports_position() {
        let err = parse_table("1,2\n3,x\n", &ParseOptions::default()).unwrap_err();
        match err {
            Error::ParseError { line, column, .. } => {
                assert_eq!((line, column), (2, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unnormalized_probabilities_rejected() {
        let opts = ParseOptions {
            probabilities: true,
            ..Default::default()
        };
        let err = parse_table("0.5,0.2\n0.3,0.2\n", &opts).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn blank_lines_ignored() {
        let parsed = parse_table("\n1,2\n\n3,4\n\n", &ParseOptions::default()).unwrap();
        assert_eq!((parsed.rows(), parsed.cols()), (2, 2));
    }

    #[test]
    fn comment_lines_ignored() {
        let text = "# generator=ChaCha12 seed=42 n=7\n3,2\n1,1\n";
        let parsed = parse_table(text, &ParseOptions::default()).unwrap();
        assert_eq!((parsed.rows(), parsed.cols()), (2, 2));
        match parsed {
            ParsedTable::Counts(t) => assert_eq!(t.total(), 7.0),
            _ => panic!("expected counts"),
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let p = crate::fixtures::cannabis_counts().normalize();
        let csv = probability_table_to_csv(&p);
        let opts = ParseOptions {
            probabilities: true,
            ..Default::default()
        };
        match parse_table(&csv, &opts).unwrap() {
            ParsedTable::Probabilities(q) => assert_eq!(q, p),
            _ => panic!("expected probabilities"),
        }
    }
}
