//! Partial sums Σ_{r≤x} N_k(n, r) for the eight average-order cases, their
//! main terms, and residual reports against the error envelopes.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::SpfSieve;
use crate::constants::ConstantTable;
use crate::counting::{count_factored, CongruenceSpec, CountOptions, Method};
use crate::error::{Error, Result};
use crate::fixed::{ln_int, Fixed};

pub const DEFAULT_SUM_BUDGET: u64 = 1_000_000;
pub const SUPPORTED_CASES: [(u32, i64); 8] = [(1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1), (4, 0), (4, 1)];

/// Calibration for residual checks: every normalized residual within
/// ±NORMALIZED_BOUND, and partial/main within RATIO_TOLERANCE of 1 at the
/// largest point of the calibration grid.
pub const NORMALIZED_BOUND: f64 = 5.0;
pub const RATIO_TOLERANCE: f64 = 0.02;

/// Grid used for calibration, by number of variables.
pub fn calibration_grid(k: u32) -> &'static [u64] {
    match k {
        1 | 2 => &[1_000, 3_000, 10_000, 30_000, 100_000],
        3 => &[100, 1_000, 10_000],
        _ => &[100, 1_000, 4_000],
    }
}

/// Work unit for the parallel scan.
const CHUNK: u64 = 2048;

/// Bound on the remainder: x^p (log x)^q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub label: &'static str,
    pub p: f64,
    pub q: f64,
}

impl Envelope {
    pub fn eval(&self, x: u64) -> f64 {
        let xf = x as f64;
        let log = if self.q == 0.0 {
            1.0
        } else {
            xf.ln().max(1.0).powf(self.q)
        };
        xf.powf(self.p) * log
    }
}

impl fmt::Display for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label)
    }
}

/// Shape of the main term: coeff·x^power·(log x)^{0 or 1} + secondary·x.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainTermShape {
    pub expression: &'static str,
    pub power: u32,
    pub log_factor: bool,
    pub secondary_linear: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticCase {
    pub k: u32,
    pub n: i64,
    pub main_term: MainTermShape,
    pub constants_used: Vec<&'static str>,
    pub envelope: Envelope,
}

impl AsymptoticCase {
    pub fn new(k: u32, n: i64) -> Result<Self> {
        let shape = |expression, power, log_factor, secondary_linear| MainTermShape {
            expression,
            power,
            log_factor,
            secondary_linear,
        };
        let env = |label, p: f64, q: f64| Envelope { label, p, q };
        let (main_term, constants_used, envelope) = match (k, n) {
            (1, 0) => (
                shape(
                    "(3/pi^2) x log x + c x, c = (3/pi^2)(3 gamma - 1 - 2 zeta'(2)/zeta(2))",
                    1,
                    true,
                    true,
                ),
                vec!["pi", "gamma", "zeta_prime2_over_zeta2"],
                env("x^(2/3)", 2.0 / 3.0, 0.0),
            ),
            (1, 1) => (
                shape(
                    "(6/pi^2) x log x + c1 x, c1 = (6/pi^2)(2 gamma - 1 - (log 2)/2 - 2 zeta'(2)/zeta(2))",
                    1,
                    true,
                    true,
                ),
                vec!["pi", "gamma", "ln2", "zeta_prime2_over_zeta2"],
                env("x^(1/2)", 0.5, 0.0),
            ),
            (2, 0) => (
                shape("pi/(8 G) x^2", 2, false, false),
                vec!["pi", "catalan_g"],
                env(
                    "x^(1+131/416) (log x)^(26947/8320)",
                    1.0 + 131.0 / 416.0,
                    26947.0 / 8320.0,
                ),
            ),
            (2, 1) => (
                shape("5/(8 G) x^2", 2, false, false),
                vec!["catalan_g"],
                env("x log x", 1.0, 1.0),
            ),
            (3, 0) => (
                shape("24 zeta(3)/pi^4 x^3", 3, false, false),
                vec!["zeta3", "pi"],
                env("x^2 log x", 2.0, 1.0),
            ),
            (3, 1) => (
                shape("36 G/pi^4 x^3", 3, false, false),
                vec!["catalan_g", "pi"],
                env("x^2 log x", 2.0, 1.0),
            ),
            (4, 0) => (
                shape("5 pi^2/(168 zeta(3)) x^4", 4, false, false),
                vec!["pi", "zeta3"],
                env("x^3 log x", 3.0, 1.0),
            ),
            (4, 1) => (
                shape("2/(7 zeta(3)) x^4", 4, false, false),
                vec!["zeta3"],
                env("x^3", 3.0, 0.0),
            ),
            _ => return Err(Error::UnsupportedCase { k, n }),
        };
        Ok(AsymptoticCase {
            k,
            n,
            main_term,
            constants_used,
            envelope,
        })
    }

    pub fn all() -> Vec<AsymptoticCase> {
        SUPPORTED_CASES
            .iter()
            .map(|&(k, n)| AsymptoticCase::new(k, n).expect("supported case"))
            .collect()
    }

    /// Leading coefficient of x^power (times log x for k = 1).
    pub fn leading_coefficient(&self, c: &ConstantTable) -> Fixed {
        let bits = c.bits();
        let pi2 = c.pi.square();
        let pi4 = pi2.square();
        let g = &c.catalan_g;
        let z3 = &c.zeta3;
        match (self.k, self.n) {
            (1, 0) => Fixed::from_int(3, bits) / &pi2,
            (1, 1) => Fixed::from_int(6, bits) / &pi2,
            (2, 0) => &c.pi / &g.mul_int(8),
            (2, 1) => Fixed::from_int(5, bits) / &g.mul_int(8),
            (3, 0) => z3.mul_int(24) / &pi4,
            (3, 1) => g.mul_int(36) / &pi4,
            (4, 0) => pi2.mul_int(5) / &z3.mul_int(168),
            (4, 1) => Fixed::from_int(2, bits) / &z3.mul_int(7),
            _ => unreachable!("validated in new"),
        }
    }

    /// Coefficient of the secondary x term (zero unless k = 1).
    pub fn secondary_coefficient(&self, c: &ConstantTable) -> Fixed {
        let bits = c.bits();
        let one = Fixed::from_int(1, bits);
        let ratio = c.zeta_prime2_over_zeta2.mul_int(2);
        match (self.k, self.n) {
            (1, 0) => {
                let inner = c.gamma.mul_int(3) - &one - &ratio;
                &self.leading_coefficient(c) * &inner
            }
            (1, 1) => {
                let inner = c.gamma.mul_int(2) - &one - &c.ln2.div_int(2) - &ratio;
                &self.leading_coefficient(c) * &inner
            }
            _ => Fixed::zero(bits),
        }
    }
}

impl fmt::Display for AsymptoticCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k, n) = ({}, {})", self.k, self.n)
    }
}

fn check_budget(x: u64, budget: u64) -> Result<()> {
    if x == 0 {
        return Err(Error::InvalidArgument("x must be at least 1".into()));
    }
    if x > budget {
        return Err(Error::BudgetExceeded {
            what: "x",
            value: x,
            budget,
        });
    }
    if x > u32::MAX as u64 {
        return Err(Error::InvalidArgument(format!("x = {x} is too large for the sieve")));
    }
    Ok(())
}

fn block_sum(case: &AsymptoticCase, sieve: &SpfSieve, lo: u64, hi: u64) -> Result<BigUint> {
    let opts = CountOptions::default();
    let mut total = BigUint::zero();
    for r in lo..=hi {
        let spec = CongruenceSpec::all_ones(case.k, case.n, r)?;
        let f = sieve.factorize(r as u32)?;
        total += count_factored(&spec, &f, Method::Auto, &opts)?.count;
    }
    Ok(total)
}

/// Exact Σ_{r≤x} N_k(n, r) at each point of an ascending grid, from one scan.
pub fn partial_sums(case: &AsymptoticCase, grid: &[u64], budget: u64) -> Result<Vec<BigUint>> {
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("grid must be strictly ascending".into()));
    }
    for &x in grid {
        check_budget(x, budget)?;
    }
    let xmax = *grid.last().expect("nonempty");
    let sieve = SpfSieve::new(xmax as u32);

    // Blocks never straddle a grid point, so prefix sums land exactly on it.
    let mut blocks = Vec::new();
    let mut lo = 1;
    for &x in grid {
        while lo <= x {
            let hi = (lo + CHUNK - 1).min(x);
            blocks.push((lo, hi));
            lo = hi + 1;
        }
    }
    let sums = blocks
        .par_iter()
        .map(|&(lo, hi)| block_sum(case, &sieve, lo, hi))
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(grid.len());
    let mut acc = BigUint::zero();
    let mut next = grid.iter().peekable();
    for (&(_, hi), s) in blocks.iter().zip(sums) {
        acc += s;
        if next.peek() == Some(&&hi) {
            out.push(acc.clone());
            next.next();
        }
    }
    Ok(out)
}

pub fn partial_sum(case: &AsymptoticCase, x: u64, budget: u64) -> Result<BigUint> {
    Ok(partial_sums(case, &[x], budget)?.remove(0))
}

/// Main term at x, at the working precision of the constant table.
pub fn main_term(case: &AsymptoticCase, x: u64, constants: &ConstantTable) -> Fixed {
    let bits = constants.bits();
    let xf = Fixed::from_int(x, bits);
    let lead = case.leading_coefficient(constants);
    let mut value = &lead * &xf.powi(case.main_term.power);
    if case.main_term.log_factor {
        value = &value * &ln_int(x, bits);
    }
    if case.main_term.secondary_linear {
        value = value + &(&case.secondary_coefficient(constants) * &xf);
    }
    value
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub k: u32,
    pub n: i64,
    pub envelope: String,
    pub x_grid: Vec<u64>,
    #[serde(serialize_with = "crate::report::ser_biguints")]
    pub partial_sums: Vec<BigUint>,
    #[serde(serialize_with = "crate::report::ser_decimals")]
    pub main_terms: Vec<String>,
    #[serde(serialize_with = "crate::report::ser_decimals")]
    pub residuals: Vec<String>,
    pub normalized_residuals: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Decimal places used when rendering main terms and residuals.
pub const REPORT_PLACES: usize = 6;

impl AsymptoticReport {
    pub fn rows(&self) -> impl Iterator<Item = ReportRow<'_>> {
        (0..self.x_grid.len()).map(move |i| ReportRow {
            x: self.x_grid[i],
            partial_sum: &self.partial_sums[i],
            main_term: &self.main_terms[i],
            residual: &self.residuals[i],
            normalized_residual: self.normalized_residuals[i],
        })
    }
}

/// One CSV line: x, partial_sum, main_term, residual, normalized_residual.
#[derive(Debug, Clone, Copy)]
pub struct ReportRow<'a> {
    pub x: u64,
    pub partial_sum: &'a BigUint,
    pub main_term: &'a str,
    pub residual: &'a str,
    pub normalized_residual: f64,
}

pub fn residual_report(
    case: &AsymptoticCase,
    grid: &[u64],
    constants: &ConstantTable,
    budget: u64,
) -> Result<AsymptoticReport> {
    let sums = partial_sums(case, grid, budget)?;
    let bits = constants.bits();
    let mut main_terms = Vec::new();
    let mut residuals = Vec::new();
    let mut normalized = Vec::new();
    let mut ratios = Vec::new();
    for (&x, s) in grid.iter().zip(&sums) {
        let m = main_term(case, x, constants);
        let exact = Fixed::from_int(BigInt::from(s.clone()), bits);
        let res = &exact - &m;
        normalized.push(res.to_f64() / case.envelope.eval(x));
        ratios.push((&exact / &m).to_f64());
        main_terms.push(m.to_decimal(REPORT_PLACES));
        residuals.push(res.to_decimal(REPORT_PLACES));
    }
    Ok(AsymptoticReport {
        k: case.k,
        n: case.n,
        envelope: case.envelope.to_string(),
        x_grid: grid.to_vec(),
        partial_sums: sums,
        main_terms,
        residuals,
        normalized_residuals: normalized,
        ratios,
    })
}
