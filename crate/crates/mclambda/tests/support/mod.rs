//! Shared helpers and independent oracles for the integration suites.
//!
//! Everything here deliberately avoids the library's selection machinery:
//! naive measures sort whole rows, the subset selector enumerates every
//! candidate index set, rectangle probabilities come from composite
//! Simpson quadrature of the density, and quantiles from bisection of the
//! CDF. These are the reference implementations the fast paths are
//! checked against.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use mclambda::measures::{self, Direction, Family};
use mclambda::normal;
use mclambda::table::ProbabilityTable;

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Random table with Dirichlet(1) cells (exponential weights normalized).
pub fn random_table<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ProbabilityTable {
    let mut cells: Vec<f64> = (0..rows * cols)
        .map(|_| -rng.random::<f64>().max(1e-12).ln())
        .collect();
    let total: f64 = cells.iter().sum();
    for c in cells.iter_mut() {
        *c /= total;
    }
    ProbabilityTable::new(rows, cols, cells).expect("random table is valid")
}

/// Random probability vector of the given length.
pub fn random_marginals<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..len)
        .map(|_| -rng.random::<f64>().max(1e-12).ln())
        .collect();
    let total: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= total;
    }
    v
}

/// Plain measure computed the slow way: sort every row fully, take the
/// top-t sums directly from the sorted copies.
pub fn naive_lambda(p: &ProbabilityTable, t: usize) -> f64 {
    let (sum_s, s_b) = naive_sums(p, t);
    (sum_s - s_b) / (1.0 - s_b)
}

/// K measure computed the slow way.
pub fn naive_lambda_k(p: &ProbabilityTable, t: usize) -> f64 {
    let (_, s_b) = naive_sums(p, t);
    let mut acc = 0.0;
    for i in 0..p.rows() {
        let mut row: Vec<f64> = (0..p.cols()).map(|j| p.cell(i, j)).collect();
        row.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let s: f64 = row[..t].iter().sum();
        let pi = p.row_marginal(i);
        if pi > 0.0 {
            acc += s * s / pi;
        }
    }
    (acc.sqrt() - s_b) / (1.0 - s_b)
}

fn naive_sums(p: &ProbabilityTable, t: usize) -> (f64, f64) {
    let mut sum_s = 0.0;
    for i in 0..p.rows() {
        let mut row: Vec<f64> = (0..p.cols()).map(|j| p.cell(i, j)).collect();
        row.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sum_s += row[..t].iter().sum::<f64>();
    }
    let mut m: Vec<f64> = p.col_marginals().to_vec();
    m.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let s_b = m[..t].iter().sum();
    (sum_s, s_b)
}

/// Enumerates every size-t index subset and returns the maximal top-t sum
/// plus the number of subsets realizing the maximal value multiset.
///
/// Subsets are ranked by their descending-sorted value vectors, compared
/// elementwise, never through float addition (tied subsets hold the same
/// values at different indices, but summing them in a different order can
/// shift the total by an ulp). More than one maximizer means a selection
/// boundary was tied.
pub fn brute_force_top_sum(values: &[f64], t: usize) -> (f64, usize) {
    let n = values.len();
    let mut best: Option<Vec<f64>> = None;
    let mut count = 0usize;
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        let mut sorted: Vec<f64> = idx.iter().map(|&j| values[j]).collect();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        match &best {
            Some(b) => {
                use std::cmp::Ordering;
                let ord = sorted
                    .iter()
                    .zip(b)
                    .map(|(x, y)| x.partial_cmp(y).unwrap())
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal);
                match ord {
                    Ordering::Greater => {
                        best = Some(sorted);
                        count = 1;
                    }
                    Ordering::Equal => count += 1,
                    Ordering::Less => {}
                }
            }
            None => {
                best = Some(sorted);
                count = 1;
            }
        }
        // Next combination in lexicographic order.
        let mut k = t;
        loop {
            if k == 0 {
                let sum = best.expect("at least one subset").iter().sum();
                return (sum, count);
            }
            k -= 1;
            if idx[k] != k + n - t {
                break;
            }
        }
        idx[k] += 1;
        for j in k + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Directional derivative of a measure along the simplex-preserving
/// direction `e_{ij} - e_{kl}`, by central differences.
pub fn fd_directional(
    p: &ProbabilityTable,
    family: Family,
    t: usize,
    up: (usize, usize),
    down: (usize, usize),
    eps: f64,
) -> f64 {
    let plus = perturbed(p, up, down, eps);
    let minus = perturbed(p, up, down, -eps);
    let f = |q: &ProbabilityTable| {
        measures::measure(q, family, t, Direction::YGivenX)
            .expect("perturbed table stays non-degenerate")
            .value
    };
    (f(&plus) - f(&minus)) / (2.0 * eps)
}

fn perturbed(
    p: &ProbabilityTable,
    up: (usize, usize),
    down: (usize, usize),
    eps: f64,
) -> ProbabilityTable {
    let mut cells = p.cells().to_vec();
    cells[up.0 * p.cols() + up.1] += eps;
    cells[down.0 * p.cols() + down.1] -= eps;
    ProbabilityTable::new(p.rows(), p.cols(), cells).expect("perturbation keeps the table valid")
}

/// Smallest gap between the t-th and (t+1)-th largest values over all rows
/// and over the column marginals: the tie margin of the selection.
pub fn selection_margin(p: &ProbabilityTable, t: usize) -> f64 {
    let gap = |values: &[f64]| {
        let mut v = values.to_vec();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v[t - 1] - v[t]
    };
    let mut margin = gap(p.col_marginals());
    for i in 0..p.rows() {
        let row: Vec<f64> = (0..p.cols()).map(|j| p.cell(i, j)).collect();
        margin = margin.min(gap(&row));
    }
    margin
}

/// Standard bivariate normal density.
pub fn bvn_density(x: f64, y: f64, rho: f64) -> f64 {
    let omr = 1.0 - rho * rho;
    ((x * x - 2.0 * rho * x * y + y * y) / (-2.0 * omr)).exp()
        / (2.0 * std::f64::consts::PI * omr.sqrt())
}

/// Composite 2-D Simpson quadrature of the density over the rectangle,
/// with infinite bounds clipped to +/-8 (mass beyond is ~1e-15).
pub fn simpson_rectangle(x1: f64, x2: f64, y1: f64, y2: f64, rho: f64, n: usize) -> f64 {
    let clip = |v: f64| v.clamp(-8.0, 8.0);
    let (a, b, c, d) = (clip(x1), clip(x2), clip(y1), clip(y2));
    assert!(n.is_multiple_of(2));
    let hx = (b - a) / n as f64;
    let hy = (d - c) / n as f64;
    let wt = |k: usize| {
        if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let mut total = 0.0;
    for i in 0..=n {
        let x = a + i as f64 * hx;
        let mut inner = 0.0;
        for j in 0..=n {
            let y = c + j as f64 * hy;
            inner += wt(j) * bvn_density(x, y, rho);
        }
        total += wt(i) * inner;
    }
    total * hx * hy / 9.0
}

/// Standard normal quantile by bisection of the CDF; independent of the
/// closed-form approximation in the library.
pub fn bisect_quantile(u: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal::normal_cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Random table in which every row has at most `t` nonzero cells, the
/// perfectly predictable structure.
pub fn random_perfect_table<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    t: usize,
) -> ProbabilityTable {
    let mut cells = vec![0.0; rows * cols];
    for i in 0..rows {
        let nonzero = 1 + rng.random_range(0..t);
        let mut chosen = Vec::new();
        while chosen.len() < nonzero {
            let j = rng.random_range(0..cols);
            if !chosen.contains(&j) {
                chosen.push(j);
            }
        }
        for &j in &chosen {
            cells[i * cols + j] = rng.random::<f64>().max(1e-6);
        }
    }
    let total: f64 = cells.iter().sum();
    for c in cells.iter_mut() {
        *c /= total;
    }
    ProbabilityTable::new(rows, cols, cells).expect("perfect table is valid")
}

/// Random table that is quasi-independent at order `t`: the top-t cells of
/// every row sit in the first `t` columns with mass `p_{i+} * q_k`, while
/// the remaining columns carry arbitrary (dependence-breaking) mass small
/// enough not to disturb the selections.
pub fn random_quasi_independent_table<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    t: usize,
) -> ProbabilityTable {
    assert!(t < cols);
    // Head masses q_1 >= ... >= q_t >= 1 - sum(q) > 0.
    let mut u: Vec<f64> = (0..t).map(|_| 1.0 + rng.random::<f64>()).collect();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let s: f64 = u.iter().sum();
    let q: Vec<f64> = u.iter().map(|&x| x / (s + 1.0)).collect();
    let head: f64 = q.iter().sum();
    let tail = 1.0 - head;

    let w = random_marginals(rng, rows);
    let mut cells = vec![0.0; rows * cols];
    for i in 0..rows {
        for (k, &qk) in q.iter().enumerate() {
            cells[i * cols + k] = w[i] * qk;
        }
        let d = random_marginals(rng, cols - t);
        for j in t..cols {
            cells[i * cols + j] = w[i] * tail * d[j - t];
        }
    }
    ProbabilityTable::new(rows, cols, cells).expect("quasi-independent table is valid")
}

/// Largest absolute deviation of the table from the product of its own
/// marginals.
pub fn independence_gap(p: &ProbabilityTable) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            worst = worst.max((p.cell(i, j) - p.row_marginal(i) * p.col_marginal(j)).abs());
        }
    }
    worst
}
