//! `mclambda verify`: recompute the bundled reference results and compare
//! against their published values, one PASS/FAIL line per item.
//!
//! Tolerances follow the precision the reference values are printed at:
//! 5e-4 for 3-decimal measure values and interval bounds, 5e-5 for the
//! 4-decimal grid cells, 1e-9 where the expectation is exact arithmetic
//! on the printed grids.

use std::process::ExitCode;

use mclambda::fixtures;
use mclambda::inference::confidence_interval;
use mclambda::measures::{lambda, lambda_k, measure_profile, Direction, Family};
use mclambda::normal::{bvn_rectangle, normal_quantile, NormalGridSpec};
use mclambda::table::{build_independent, ProbabilityTable};

#[derive(Default)]
pub struct Harness {
    items: usize,
    failures: usize,
}

impl Harness {
    pub fn check(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        self.items += 1;
        if (got - want).abs() <= tol {
            println!("PASS  {name}: got {got:.6}, expected {want} (tol {tol:e})");
        } else {
            self.failures += 1;
            println!("FAIL  {name}: got {got:.6}, expected {want} (tol {tol:e})");
        }
    }

    pub fn check_flag(&mut self, name: &str, got: bool, want: bool) {
        self.items += 1;
        if got == want {
            println!("PASS  {name}: got {got}, expected {want}");
        } else {
            self.failures += 1;
            println!("FAIL  {name}: got {got}, expected {want}");
        }
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    fn summary(&self) -> ExitCode {
        let failed = self.failures();
        println!(
            "verify: {}/{} items passed",
            self.items - failed,
            self.items
        );
        if failed == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }
    }
}

pub fn run() -> ExitCode {
    let mut h = Harness::default();

    table_plumbing(&mut h);
    measure_values(&mut h);
    inference_results(&mut h);
    normal_grids(&mut h);

    h.summary()
}

fn table_plumbing(h: &mut Harness) {
    let p = fixtures::cannabis_counts().normalize();
    h.check("normalize/survey cell(1,1)", p.cell(0, 0), 0.19355, 5e-6);

    let ind = fixtures::independent_3x3();
    for (j, want) in [0.60, 0.30, 0.10].into_iter().enumerate() {
        h.check(
            &format!("marginals/independent col {}", j + 1),
            ind.col_marginal(j),
            want,
            1e-9,
        );
    }

    let sel = fixtures::concentrated_3x3().top_k(2).unwrap();
    for (i, want) in [0.48, 0.30, 0.18].into_iter().enumerate() {
        h.check(
            &format!("top2/concentrated row {} sum", i + 1),
            sel.row_top_sum(i),
            want,
            1e-9,
        );
    }
    h.check(
        "top2/concentrated marginal sum",
        sel.marginal_top_sum(),
        0.90,
        1e-9,
    );

    let tr = ind.transpose();
    for (j, want) in [0.60, 0.30, 0.10].into_iter().enumerate() {
        h.check(
            &format!("transpose/independent row marginal {}", j + 1),
            tr.row_marginal(j),
            want,
            1e-9,
        );
    }

    let product = build_independent(&[0.5, 0.3, 0.2], &[0.6, 0.3, 0.1]).unwrap();
    let worst = product
        .cells()
        .iter()
        .zip(ind.cells())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    h.check("product/independent grid max deviation", worst, 0.0, 1e-9);
}

fn measure_values(h: &mut Harness) {
    let grids: [(&str, ProbabilityTable); 3] = [
        ("independent", fixtures::independent_3x3()),
        ("concentrated", fixtures::concentrated_3x3()),
        ("quasi-independent", fixtures::quasi_independent_3x3()),
    ];
    let expected: [[f64; 4]; 3] = [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.007, 0.6, 0.606],
        [0.0, 0.0, 0.4, 0.403],
    ];
    for ((name, p), want) in grids.iter().zip(expected) {
        let got = [
            lambda(p, 1, Direction::YGivenX).unwrap().value,
            lambda_k(p, 1, Direction::YGivenX).unwrap().value,
            lambda(p, 2, Direction::YGivenX).unwrap().value,
            lambda_k(p, 2, Direction::YGivenX).unwrap().value,
        ];
        for (k, label) in ["plain t=1", "k t=1", "plain t=2", "k t=2"]
            .iter()
            .enumerate()
        {
            h.check(&format!("measures/{name} {label}"), got[k], want[k], 5e-4);
        }
    }

    let profile = measure_profile(&fixtures::concentrated_3x3(), Direction::YGivenX).unwrap();
    let tags: Vec<(Family, usize)> = profile.iter().map(|e| (e.family, e.t)).collect();
    h.check_flag(
        "profile/concentrated order (plain/k per t, ascending t)",
        tags == vec![
            (Family::Plain, 1),
            (Family::K, 1),
            (Family::Plain, 2),
            (Family::K, 2),
        ],
        true,
    );
}

fn inference_results(h: &mut Harness) {
    let t4 = fixtures::cannabis_counts();

    let r = confidence_interval(&t4, Family::Plain, 1, Direction::YGivenX, 0.05).unwrap();
    h.check("inference/plain t=1 estimate", r.estimate(), 0.0, 5e-4);
    h.check("inference/plain t=1 se", r.std_error, 0.0, 5e-4);
    h.check_flag(
        "inference/plain t=1 interval suppressed",
        r.degenerate,
        true,
    );

    let cases = [
        ("k t=1", Family::K, 1, 0.070, 0.012, 0.047, 0.094),
        ("plain t=2", Family::Plain, 2, 0.161, 0.090, -0.015, 0.337),
        ("k t=2", Family::K, 2, 0.186, 0.083, 0.024, 0.348),
    ];
    for (label, family, t, est, se, lo, hi) in cases {
        let r = confidence_interval(&t4, family, t, Direction::YGivenX, 0.05).unwrap();
        h.check(
            &format!("inference/{label} estimate"),
            r.estimate(),
            est,
            5e-4,
        );
        h.check(&format!("inference/{label} se"), r.std_error, se, 5e-4);
        h.check(
            &format!("inference/{label} ci low"),
            r.ci_low.unwrap(),
            lo,
            5e-4,
        );
        h.check(
            &format!("inference/{label} ci high"),
            r.ci_high.unwrap(),
            hi,
            5e-4,
        );
    }
}

fn normal_grids(h: &mut Harness) {
    // Quartile cutpoint, for the direct rectangle checks.
    let c = normal_quantile(0.25).unwrap();
    h.check(
        "normal/quartile cell at rho=0",
        bvn_rectangle(f64::NEG_INFINITY, c, f64::NEG_INFINITY, c, 0.0).unwrap(),
        0.0625,
        5e-5,
    );
    h.check(
        "normal/corner cell at rho=0.4",
        bvn_rectangle(f64::NEG_INFINITY, c, f64::NEG_INFINITY, c, 0.4).unwrap(),
        0.1072,
        5e-5,
    );

    let p0 = NormalGridSpec::new(4, 0.0).unwrap().build().unwrap();
    let worst0 = p0
        .cells()
        .iter()
        .map(|&x| (x - 0.0625).abs())
        .fold(0.0f64, f64::max);
    h.check("normal/4x4 rho=0 max cell deviation", worst0, 0.0, 5e-5);

    let p04 = NormalGridSpec::new(4, 0.4).unwrap().build().unwrap();
    let mut worst04: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst04 = worst04.max((p04.cell(i, j) - fixtures::NORMAL_4X4_RHO04[i][j]).abs());
        }
    }
    h.check("normal/4x4 rho=0.4 max cell deviation", worst04, 0.0, 5e-5);

    let p1 = NormalGridSpec::new(4, 1.0).unwrap().build().unwrap();
    let mut worst1: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j { 0.25 } else { 0.0 };
            worst1 = worst1.max((p1.cell(i, j) - want).abs());
        }
    }
    h.check("normal/4x4 rho=1 max cell deviation", worst1, 0.0, 5e-5);
}
