//! Univariate and bivariate normal machinery, equal-frequency
//! discretization of the bivariate normal into probability tables,
//! correlation sweeps, and multinomial sampling.
//!
//! * `normal_cdf` follows the rational approximation of Hart (1968,
//!   algorithm 5666) with a continued-fraction tail, good to ~1e-15.
//! * `normal_quantile` is Acklam's rational approximation polished by one
//!   Newton step against `normal_cdf`, good to ~1e-13.
//! * `bvn_rectangle` reduces rectangle probabilities to the bivariate CDF
//!   by inclusion-exclusion; the CDF itself is the Drezner-Wesolowsky
//!   single-integral method in Genz's double-precision formulation
//!   (Gauss-Legendre panels of 6/12/20 points selected by |rho|).
//!   Correlations within 1e-12 of +/-1 are dispatched to an analytic
//!   line-mass branch, where the quadrature degenerates.

// Approximation constants are kept at their published precision.
#![allow(clippy::excessive_precision)]
// Negated comparisons are deliberate: they reject NaN bounds as invalid.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::measures::{self, Direction, Family};
use crate::table::{ContingencyTable, ProbabilityTable};

/// Correlations at least this close to +/-1 use the line-mass branch.
pub const DEGENERATE_RHO: f64 = 1e-12;

/// Counter-based generator used by all sampling entry points.
pub const RNG_ALGORITHM: &str = "ChaCha12";

// ---------------------------------------------------------------------------
// Univariate normal
// ---------------------------------------------------------------------------

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal CDF (Hart 5666 rational approximation).
pub fn normal_cdf(z: f64) -> f64 {
    const P: [f64; 7] = [
        220.206_867_912_376_1,
        221.213_596_169_931_1,
        112.079_291_497_870_9,
        33.912_866_078_383,
        6.373_962_203_531_65,
        0.700_383_064_443_688_1,
        0.035_262_496_599_891_1,
    ];
    const Q: [f64; 8] = [
        440.413_735_824_752_2,
        793.826_512_519_948_4,
        637.333_633_378_831_1,
        296.564_248_779_673_7,
        86.780_732_202_946_08,
        16.064_177_579_206_95,
        1.755_667_163_182_642,
        0.088_388_347_648_318_44,
    ];
    const CUTOFF: f64 = 7.071_067_811_865_475; // 5 * sqrt(2)
    const ROOT_2PI: f64 = 2.506_628_274_631_001;

    let zabs = z.abs();
    let p = if zabs > 37.0 {
        0.0
    } else {
        let e = (-0.5 * zabs * zabs).exp();
        if zabs < CUTOFF {
            let num = P.iter().rev().fold(0.0, |acc, &c| acc * zabs + c);
            let den = Q.iter().rev().fold(0.0, |acc, &c| acc * zabs + c);
            e * num / den
        } else {
            e / (zabs + 1.0 / (zabs + 2.0 / (zabs + 3.0 / (zabs + 4.0 / (zabs + 0.65))))) / ROOT_2PI
        }
    };
    if z > 0.0 {
        1.0 - p
    } else {
        p
    }
}

/// Standard normal quantile (inverse CDF).
///
/// Acklam's rational approximation refined by one Newton step, so the
/// round trip `normal_cdf(normal_quantile(u))` recovers `u` to well below
/// 1e-10 across the open unit interval.
pub fn normal_quantile(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::DomainError {
            what: "normal_quantile",
            value: u,
        });
    }

    const A: [f64; 6] = [
        -39.696_830_286_653_8,
        220.946_098_424_521,
        -275.928_510_446_969,
        138.357_751_867_269,
        -30.664_798_066_147_2,
        2.506_628_277_459_24,
    ];
    const B: [f64; 5] = [
        -54.476_098_798_224_1,
        161.585_836_858_041,
        -155.698_979_859_887,
        66.801_311_887_719_7,
        -13.280_681_552_885_7,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_29e-3,
        -0.322_396_458_041_136,
        -2.400_758_277_161_84,
        -2.549_732_539_343_73,
        4.374_664_141_464_97,
        2.938_163_982_698_78,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_46e-3,
        0.322_467_129_070_04,
        2.445_134_137_143,
        3.754_408_661_907_42,
    ];
    const LOW: f64 = 0.02425;

    let x = if u < LOW {
        let q = (-2.0 * u.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if u <= 1.0 - LOW {
        let q = u - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - u).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // One Newton step; skip it where the density underflows (|x| > 37).
    let pdf = normal_pdf(x);
    if pdf > 1e-300 {
        Ok(x - (normal_cdf(x) - u) / pdf)
    } else {
        Ok(x)
    }
}

// ---------------------------------------------------------------------------
// Bivariate normal
// ---------------------------------------------------------------------------

// Gauss-Legendre weights and points (on [-1, 1], halved ranges), as used by
// Genz's BVND.
const GL_6: [(f64, f64); 3] = [
    (0.171_324_492_379_170_5, -0.932_469_514_203_152_2),
    (0.360_761_573_048_138_4, -0.661_209_386_466_264_7),
    (0.467_913_934_572_690_4, -0.238_619_186_083_197_0),
];
const GL_12: [(f64, f64); 6] = [
    (0.047_175_336_386_511_77, -0.981_560_634_246_719_1),
    (0.106_939_325_995_318_3, -0.904_117_256_370_475_0),
    (0.160_078_328_543_346_4, -0.769_902_674_194_305_0),
    (0.203_167_426_723_065_9, -0.587_317_954_286_617_1),
    (0.233_492_536_538_354_7, -0.367_831_498_998_180_2),
    (0.249_147_045_813_402_9, -0.125_233_408_511_469_2),
];
const GL_20: [(f64, f64); 10] = [
    (0.017_614_007_139_152_12, -0.993_128_599_185_094_9),
    (0.040_601_429_800_386_94, -0.963_971_927_277_913_8),
    (0.062_672_048_334_109_06, -0.912_234_428_251_325_9),
    (0.083_276_741_576_704_75, -0.839_116_971_822_218_8),
    (0.101_930_119_817_240_4, -0.746_331_906_460_150_8),
    (0.118_194_531_961_518_4, -0.636_053_680_726_515_0),
    (0.131_688_638_449_176_6, -0.510_867_001_950_827_1),
    (0.142_096_109_318_382_1, -0.373_706_088_715_419_6),
    (0.149_172_986_472_603_7, -0.227_785_851_141_645_1),
    (0.152_753_387_130_725_9, -0.076_526_521_133_497_33),
];

/// Upper-quadrant probability `P(X > h, Y > k)` for the standard bivariate
/// normal with correlation `r` (Genz's formulation of the
/// Drezner-Wesolowsky method).
fn bvnd(dh: f64, dk: f64, r: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let h = dh;
    let mut k = dk;
    let mut hk = h * k;
    let mut bvn = 0.0;

    let quad: &[(f64, f64)] = if r.abs() < 0.3 {
        &GL_6
    } else if r.abs() < 0.75 {
        &GL_12
    } else {
        &GL_20
    };

    if r.abs() < 0.925 {
        if r.abs() > 0.0 {
            let hs = (h * h + k * k) / 2.0;
            let asr = r.asin();
            for &(w, x) in quad {
                for sign in [-1.0, 1.0] {
                    let sn = (asr * (sign * x + 1.0) / 2.0).sin();
                    bvn += w * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
                }
            }
            bvn = bvn * asr / (2.0 * two_pi);
        }
        bvn + normal_cdf(-h) * normal_cdf(-k)
    } else {
        if r < 0.0 {
            k = -k;
            hk = -hk;
        }
        if r.abs() < 1.0 {
            let a_sq = (1.0 - r) * (1.0 + r);
            let mut a = a_sq.sqrt();
            let b_sq = (h - k) * (h - k);
            let c = (4.0 - hk) / 8.0;
            let d = (12.0 - hk) / 16.0;
            let asr = -(b_sq / a_sq + hk) / 2.0;
            if asr > -100.0 {
                bvn = a
                    * asr.exp()
                    * (1.0 - c * (b_sq - a_sq) * (1.0 - d * b_sq / 5.0) / 3.0
                        + c * d * a_sq * a_sq / 5.0);
            }
            if -hk < 100.0 {
                let b = b_sq.sqrt();
                bvn -= (-hk / 2.0).exp()
                    * two_pi.sqrt()
                    * normal_cdf(-b / a)
                    * b
                    * (1.0 - c * b_sq * (1.0 - d * b_sq / 5.0) / 3.0);
            }
            a /= 2.0;
            for &(w, x) in quad {
                for sign in [-1.0, 1.0] {
                    let xs = (a * (sign * x + 1.0)).powi(2);
                    let rs = (1.0 - xs).sqrt();
                    let asr = -(b_sq / xs + hk) / 2.0;
                    if asr > -100.0 {
                        let sp = 1.0 + c * xs * (1.0 + d * xs);
                        let ep = (-hk * (1.0 - rs) / (2.0 * (1.0 + rs))).exp() / rs;
                        bvn += a * w * asr.exp() * (ep - sp);
                    }
                }
            }
            bvn = -bvn / two_pi;
        }
        if r > 0.0 {
            bvn + normal_cdf(-h.max(k))
        } else {
            bvn = -bvn;
            if k > h {
                bvn += normal_cdf(k) - normal_cdf(h);
            }
            bvn
        }
    }
}

/// Bivariate normal CDF `P(X <= x, Y <= y)` with infinite arguments
/// handled as limits.
pub fn bvn_cdf(x: f64, y: f64, rho: f64) -> f64 {
    if x == f64::NEG_INFINITY || y == f64::NEG_INFINITY {
        0.0
    } else if x == f64::INFINITY && y == f64::INFINITY {
        1.0
    } else if x == f64::INFINITY {
        normal_cdf(y)
    } else if y == f64::INFINITY {
        normal_cdf(x)
    } else {
        bvnd(-x, -y, rho).clamp(0.0, 1.0)
    }
}

/// `P(x1 < X <= x2, y1 < Y <= y2)` for the standard bivariate normal with
/// correlation `rho`. Bounds may be infinite. Correlations within
/// [`DEGENERATE_RHO`] of +/-1 place all mass on the line `y = +/-x`.
pub fn bvn_rectangle(x1: f64, x2: f64, y1: f64, y2: f64, rho: f64) -> Result<f64> {
    if !(x1 < x2) || !(y1 < y2) {
        return Err(Error::BadRectangle { x1, x2, y1, y2 });
    }
    if !(rho.abs() <= 1.0) {
        return Err(Error::DomainError {
            what: "bvn_rectangle correlation",
            value: rho,
        });
    }
    if rho.abs() >= 1.0 - DEGENERATE_RHO {
        // All mass lives on y = x (rho -> 1) or y = -x (rho -> -1).
        let mass = if rho > 0.0 {
            phi_ext(x2.min(y2)) - phi_ext(x1.max(y1))
        } else {
            phi_ext(x2.min(-y1)) - phi_ext(x1.max(-y2))
        };
        return Ok(mass.max(0.0));
    }
    let f = |x: f64, y: f64| bvn_cdf(x, y, rho);
    Ok((f(x2, y2) - f(x1, y2) - f(x2, y1) + f(x1, y1)).max(0.0))
}

/// CDF extended to infinite arguments.
fn phi_ext(x: f64) -> f64 {
    if x == f64::INFINITY {
        1.0
    } else if x == f64::NEG_INFINITY {
        0.0
    } else {
        normal_cdf(x)
    }
}

// ---------------------------------------------------------------------------
// Equal-frequency discretization
// ---------------------------------------------------------------------------

/// Specification of an r x r equal-frequency discretization of the
/// standard bivariate normal with correlation `rho`: both margins are cut
/// at the quantiles `k/r`, so every marginal bin has probability `1/r`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalGridSpec {
    r: usize,
    rho: f64,
    cutpoints: Vec<f64>,
}

impl NormalGridSpec {
    pub fn new(r: usize, rho: f64) -> Result<Self> {
        if r < 2 {
            return Err(Error::TooFewCategories { rows: r, cols: r });
        }
        if !(rho.abs() <= 1.0) {
            return Err(Error::DomainError {
                what: "correlation",
                value: rho,
            });
        }
        let cutpoints = (1..r)
            .map(|k| normal_quantile(k as f64 / r as f64))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { r, rho, cutpoints })
    }

    pub fn categories(&self) -> usize {
        self.r
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// The r - 1 interior cutpoints, strictly increasing.
    pub fn cutpoints(&self) -> &[f64] {
        &self.cutpoints
    }

    /// Builds the r x r probability table of rectangle masses over the
    /// cutpoint grid (with infinite end bins). The quadrature leaves a
    /// residue of order 1e-15 in the total mass, so cells are renormalized
    /// until they sum to exactly 1 and validation holds with no slack.
    pub fn build(&self) -> Result<ProbabilityTable> {
        let r = self.r;
        let mut edges = Vec::with_capacity(r + 1);
        edges.push(f64::NEG_INFINITY);
        edges.extend_from_slice(&self.cutpoints);
        edges.push(f64::INFINITY);

        let mut cells = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                cells.push(bvn_rectangle(
                    edges[i],
                    edges[i + 1],
                    edges[j],
                    edges[j + 1],
                    self.rho,
                )?);
            }
        }
        renormalize_exact(&mut cells);
        ProbabilityTable::new(r, r, cells)
    }
}

/// Scales cells so they sum to exactly 1.0, pushing the final rounding
/// residue (a few ulps) into the largest cell.
fn renormalize_exact(cells: &mut [f64]) {
    let total: f64 = cells.iter().sum();
    for c in cells.iter_mut() {
        *c /= total;
    }
    let largest = cells
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite cells"))
        .map(|(k, _)| k)
        .expect("non-empty grid");
    for _ in 0..4 {
        let sum: f64 = cells.iter().sum();
        if sum == 1.0 {
            break;
        }
        cells[largest] += 1.0 - sum;
    }
}

// ---------------------------------------------------------------------------
// Correlation sweeps
// ---------------------------------------------------------------------------

/// One measure value inside a sweep row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepValue {
    pub family: Family,
    pub t: usize,
    pub value: f64,
}

/// All measure values of one correlation grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub rho: f64,
    pub values: Vec<SweepValue>,
}

/// Evaluates both families at every order `1..r` on the equal-frequency
/// r x r normal table, for each requested correlation, in input order.
pub fn sweep(r: usize, rho_grid: &[f64]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(rho_grid.len());
    for &rho in rho_grid {
        let table = NormalGridSpec::new(r, rho)?.build()?;
        let mut values = Vec::with_capacity(2 * (r - 1));
        for t in 1..r {
            for family in [Family::Plain, Family::K] {
                let m = measures::measure(&table, family, t, Direction::YGivenX)?;
                values.push(SweepValue {
                    family,
                    t,
                    value: m.value,
                });
            }
        }
        rows.push(SweepRow { rho, values });
    }
    Ok(rows)
}

/// Serializes sweep rows as `rho,family,t,value` CSV.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("rho,family,t,value\n");
    for row in rows {
        for v in &row.values {
            out.push_str(&format!(
                "{},{},{},{:.6}\n",
                row.rho, v.family, v.t, v.value
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Multinomial sampling
// ---------------------------------------------------------------------------

/// Draws a contingency table with `n` observations from `multinomial(n, p)`
/// using the conditional-binomial decomposition (cell by cell, each count
/// binomial given the remaining total).
pub fn sample_multinomial<R: Rng>(p: &ProbabilityTable, n: u64, rng: &mut R) -> ContingencyTable {
    let cells = p.cells();
    let mut counts = vec![0.0; cells.len()];
    let mut remaining_n = n;
    let mut remaining_p = 1.0;
    for (k, &pk) in cells.iter().enumerate() {
        if remaining_n == 0 {
            break;
        }
        if k == cells.len() - 1 {
            counts[k] = remaining_n as f64;
            break;
        }
        let ratio = if remaining_p > 0.0 {
            (pk / remaining_p).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = if ratio <= 0.0 {
            0
        } else if ratio >= 1.0 {
            remaining_n
        } else {
            Binomial::new(remaining_n, ratio)
                .expect("ratio is a valid probability")
                .sample(rng)
        };
        counts[k] = draw as f64;
        remaining_n -= draw;
        remaining_p -= pk;
    }
    ContingencyTable::new(p.rows(), p.cols(), counts)
        .expect("sampled counts form a valid contingency table")
}

/// Deterministic sampling entry point: a fixed seed yields a fixed table
/// (generator: [`RNG_ALGORITHM`]).
pub fn sample_multinomial_seeded(p: &ProbabilityTable, n: u64, seed: u64) -> ContingencyTable {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    sample_multinomial(p, n, &mut rng)
}
