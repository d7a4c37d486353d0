//! High-precision constants for the asymptotic main terms.
//!
//! Every constant is computed twice by unrelated methods and the two results
//! must agree to 1e-12 relative before the table is returned.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed::{atan_inv, atanh, bits_for_digits, ln, ln2, ln_int, Fixed};

pub const DEFAULT_DIGITS: u32 = 30;
pub const AGREEMENT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ConstantTable {
    pub digits: u32,
    pub pi: Fixed,
    pub ln2: Fixed,
    pub gamma: Fixed,
    pub zeta3: Fixed,
    pub zeta_prime2_over_zeta2: Fixed,
    /// Σ (−1)ⁿ/(2n+1)² = 0.9159655941…
    pub catalan_g: Fixed,
    pub checks: Vec<ConstantCheck>,
}

/// Outcome of comparing the two evaluations of one constant.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantCheck {
    pub name: &'static str,
    pub primary: String,
    pub secondary: String,
    pub relative_difference: f64,
}

impl ConstantTable {
    pub fn bits(&self) -> u32 {
        self.pi.bits()
    }

    pub fn zeta2(&self) -> Fixed {
        self.pi.square().div_int(6)
    }

    pub fn named(&self) -> Vec<(&'static str, &Fixed)> {
        vec![
            ("pi", &self.pi),
            ("ln2", &self.ln2),
            ("gamma", &self.gamma),
            ("zeta3", &self.zeta3),
            ("zeta_prime2_over_zeta2", &self.zeta_prime2_over_zeta2),
            ("catalan_g", &self.catalan_g),
        ]
    }
}

/// Computes the table at `digits` significant digits (at least 16).
pub fn compute_constants(digits: u32) -> Result<ConstantTable> {
    if digits < 16 {
        return Err(Error::InvalidArgument(format!(
            "precision of {digits} digits is below the 16 required"
        )));
    }
    let bits = bits_for_digits(digits);
    let mut checks = Vec::new();
    let mut pair = |name: &'static str, a: Fixed, b: Fixed| -> Result<Fixed> {
        let diff = (&a - &b).abs().to_f64() / a.abs().to_f64();
        checks.push(ConstantCheck {
            name,
            primary: a.to_decimal(digits as usize),
            secondary: b.to_decimal(digits as usize),
            relative_difference: diff,
        });
        if diff.is_nan() || diff > AGREEMENT_TOLERANCE {
            return Err(Error::ConstantMismatch { name, difference: diff });
        }
        Ok(a)
    };

    let pi = pair("pi", pi_machin(bits), pi_gauss(bits))?;
    let ln2 = pair("ln2", ln2(bits), ln2_binary_series(bits))?;
    let gamma = pair("gamma", gamma_brent_mcmillan(bits), gamma_euler_maclaurin(bits, digits))?;
    let zeta3 = pair("zeta3", zeta3_apery(bits), zeta3_euler_maclaurin(bits, digits))?;
    let zeta2 = pi.square().div_int(6);
    let zp_em = zeta_prime2_euler_maclaurin(bits, digits);
    let zp_eta = zeta_prime2_eta(bits, &pi, &ln2);
    let zeta_prime2_over_zeta2 = pair("zeta_prime2_over_zeta2", &zp_em / &zeta2, &zp_eta / &zeta2)?;
    let catalan_g = pair("catalan_g", catalan_cvz(bits), catalan_ramanujan(bits, &pi))?;

    Ok(ConstantTable {
        digits,
        pi,
        ln2,
        gamma,
        zeta3,
        zeta_prime2_over_zeta2,
        catalan_g,
        checks,
    })
}

/// π = 16 atan(1/5) − 4 atan(1/239).
pub fn pi_machin(bits: u32) -> Fixed {
    atan_inv(5, bits).mul_int(16) - atan_inv(239, bits).mul_int(4)
}

/// π = 48 atan(1/18) + 32 atan(1/57) − 20 atan(1/239).
pub fn pi_gauss(bits: u32) -> Fixed {
    atan_inv(18, bits).mul_int(48) + atan_inv(57, bits).mul_int(32) - atan_inv(239, bits).mul_int(20)
}

/// ln 2 = Σ_{k≥1} 1/(k·2^k).
pub fn ln2_binary_series(bits: u32) -> Fixed {
    let mut sum = Fixed::zero(bits);
    let mut power = Fixed::from_ratio(1, 2, bits);
    let mut k = 1u64;
    while !power.is_zero() {
        sum = sum + power.div_int(k);
        power = power.div_int(2);
        k += 1;
    }
    sum
}

/// Brent–McMillan: γ = U/V − ln n with U, V the weighted Bessel-type sums.
pub fn gamma_brent_mcmillan(bits: u32) -> Fixed {
    let n = (bits as f64 * std::f64::consts::LN_2 / 4.0).ceil() as u64 + 2;
    // Terms grow to about e^{2n} before decaying.
    let wide = bits + (3 * n as u32);
    let n2 = BigInt::from(n * n);
    let mut a = -ln_int(n, wide);
    let mut b = Fixed::from_int(1, wide);
    let mut u = a.clone();
    let mut v = b.clone();
    let mut k = 1u64;
    loop {
        b = b.mul_int(n2.clone()).div_int(k * k);
        a = (a.mul_int(n2.clone()).div_int(k) + &b).div_int(k);
        if k > n && a.is_zero() && b.is_zero() {
            break;
        }
        u = u + &a;
        v = v + &b;
        k += 1;
    }
    (&u / &v).with_bits(bits)
}

/// B_0, B_2, …, B_{2j} as exact rationals.
pub fn bernoulli_even(j: usize) -> Vec<BigRational> {
    let m_max = 2 * j;
    let mut b: Vec<BigRational> = Vec::with_capacity(m_max + 1);
    b.push(BigRational::one());
    for m in 1..=m_max {
        let mut binom = BigInt::one(); // C(m+1, i)
        let mut acc = BigRational::zero();
        for (i, bi) in b.iter().enumerate() {
            acc += bi * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - i) / BigInt::from(i + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b.into_iter().step_by(2).collect()
}

fn rational(q: &BigRational, bits: u32) -> Fixed {
    Fixed::from_ratio(q.numer().clone(), q.denom().clone(), bits)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Cut-off N and correction count J for Euler–Maclaurin at `digits` digits.
fn em_parameters(digits: u32) -> (u64, usize) {
    (2 * digits as u64 + 10, digits as usize)
}

/// γ = H_{N−1} − ln N + 1/(2N) + Σ_j B_{2j}/(2j·N^{2j}).
pub fn gamma_euler_maclaurin(bits: u32, digits: u32) -> Fixed {
    let (n, j) = em_parameters(digits);
    let bern = bernoulli_even(j);
    let mut sum = Fixed::zero(bits);
    for i in 1..n {
        sum = sum + Fixed::from_ratio(1, i, bits);
    }
    sum = sum - ln_int(n, bits) + Fixed::from_ratio(1, 2 * n, bits);
    for (idx, b) in bern.iter().enumerate().skip(1) {
        let denom = BigInt::from(2 * idx as u64) * BigInt::from(n).pow(2 * idx as u32);
        sum = sum + rational(&(b / BigRational::from_integer(denom)), bits);
    }
    sum
}

/// ζ(3) = (5/2) Σ_{k≥1} (−1)^{k+1} / (k³ C(2k, k)).
pub fn zeta3_apery(bits: u32) -> Fixed {
    let mut sum = Fixed::zero(bits);
    let mut central = BigInt::one();
    let mut k = 1u64;
    loop {
        central = central * BigInt::from(2 * (2 * k - 1)) / BigInt::from(k);
        let term = Fixed::from_ratio(1, BigInt::from(k * k * k) * &central, bits);
        if term.is_zero() {
            break;
        }
        sum = if k % 2 == 1 { sum + term } else { sum - term };
        k += 1;
    }
    sum.mul_int(5).div_int(2)
}

/// ζ(s) for integer s ≥ 2 by Euler–Maclaurin at cut-off N.
fn zeta_euler_maclaurin(s: u32, bits: u32, digits: u32) -> Fixed {
    let (n, j) = em_parameters(digits);
    let bern = bernoulli_even(j);
    let nb = BigInt::from(n);
    let mut sum = Fixed::zero(bits);
    for i in 1..n {
        sum = sum + Fixed::from_ratio(1, BigInt::from(i).pow(s), bits);
    }
    sum = sum + Fixed::from_ratio(1, BigInt::from(s - 1) * nb.pow(s - 1), bits);
    sum = sum + Fixed::from_ratio(1, nb.pow(s) * 2, bits);
    // B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}
    let mut rising = BigInt::from(s);
    for (idx, b) in bern.iter().enumerate().skip(1) {
        let m = 2 * idx as u32;
        if idx > 1 {
            rising = rising * (s + m - 3) * (s + m - 2);
        }
        let q = b * BigRational::new(rising.clone(), factorial(m as u64) * nb.pow(s + m - 1));
        sum = sum + rational(&q, bits);
    }
    sum
}

pub fn zeta3_euler_maclaurin(bits: u32, digits: u32) -> Fixed {
    zeta_euler_maclaurin(3, bits, digits)
}

/// ζ′(2) by Euler–Maclaurin applied to h(x) = ln x / x², using
/// h^{(m)}(x) = (−1)^m (m+1)! x^{−2−m} (ln x − Σ_{i<m} 1/(2+i)).
pub fn zeta_prime2_euler_maclaurin(bits: u32, digits: u32) -> Fixed {
    let (n, j) = em_parameters(digits);
    let bern = bernoulli_even(j);
    let ln_n = ln_int(n, bits);
    let mut sum = Fixed::zero(bits);
    for i in 2..n {
        sum = sum + ln_int(i, bits).div_int(i * i);
    }
    sum = sum + (&ln_n + &Fixed::from_int(1, bits)).div_int(n);
    sum = sum + ln_n.div_int(2 * n * n);
    let nb = BigInt::from(n);
    for (idx, b) in bern.iter().enumerate().skip(1) {
        let m = 2 * idx as u64 - 1;
        let harmonic: BigRational = (0..m)
            .map(|i| BigRational::new(BigInt::one(), BigInt::from(2 + i)))
            .sum();
        // h^{(m)}(N) with m odd carries the sign −1.
        let coeff = BigRational::new(factorial(m + 1), nb.pow(2 + m as u32));
        let deriv = -(&ln_n - &rational(&harmonic, bits)).mul_int(1);
        let deriv = &deriv * &rational(&coeff, bits);
        let weight = b / BigRational::from_integer(factorial(m + 1));
        sum = sum - &(&rational(&weight, bits) * &deriv);
    }
    -sum
}

/// Cohen–Villegas–Zagier acceleration of Σ_{k≥0} (−1)^k a_k.
fn cvz_alternating(bits: u32, a: impl Fn(u64, u32) -> Fixed) -> Fixed {
    let n = (bits as f64 * std::f64::consts::LN_2 / (3.0 + 8f64.sqrt()).ln()).ceil() as u64 + 4;
    let wide = bits + 3 * n as u32 + 16;
    let root8 = Fixed::from_int(8, wide).sqrt();
    let mut d = (Fixed::from_int(3, wide) + root8).powi(n as u32);
    d = (&d + &(Fixed::from_int(1, wide) / &d)).div_int(2);
    let mut b = Fixed::from_int(-1, wide);
    let mut c = -&d;
    let mut s = Fixed::zero(wide);
    let nb = n as i64;
    for k in 0..n {
        c = &b - &c;
        s = s + &(&c * &a(k, wide));
        let ki = k as i64;
        b = b.mul_int(2 * (ki + nb) * (ki - nb)).div_int((2 * ki + 1) * (ki + 1));
    }
    (&s / &d).with_bits(bits)
}

/// G = Σ (−1)^k/(2k+1)² via CVZ acceleration.
pub fn catalan_cvz(bits: u32) -> Fixed {
    cvz_alternating(bits, |k, w| Fixed::from_ratio(1, BigInt::from(2 * k + 1).pow(2), w))
}

/// G = (π/8) ln(2+√3) + (3/8) Σ_{n≥0} 1/((2n+1)² C(2n, n)).
pub fn catalan_ramanujan(bits: u32, pi: &Fixed) -> Fixed {
    let mut sum = Fixed::zero(bits);
    let mut central = BigInt::one();
    let mut n = 0u64;
    loop {
        if n > 0 {
            central = central * BigInt::from(2 * (2 * n - 1)) / BigInt::from(n);
        }
        let term = Fixed::from_ratio(1, BigInt::from(2 * n + 1).pow(2) * &central, bits);
        if term.is_zero() {
            break;
        }
        sum = sum + term;
        n += 1;
    }
    // ln(2+√3) = 2 atanh(1/√3)
    let inv_root3 = Fixed::from_ratio(1, 3, bits).sqrt();
    let log = atanh(&inv_root3).mul_int(2);
    (pi * &log).div_int(8) + sum.mul_int(3).div_int(8)
}

/// ζ′(2) = 2η′(2) − ln 2·ζ(2), with η′(2) = −Σ_{k≥0} (−1)^k ln(k+1)/(k+1)²
/// evaluated by CVZ acceleration.
pub fn zeta_prime2_eta(bits: u32, pi: &Fixed, ln2: &Fixed) -> Fixed {
    let s = cvz_alternating(bits, |k, w| ln(&Fixed::from_int(k + 1, w)).div_int((k + 1) * (k + 1)));
    let zeta2 = pi.square().div_int(6);
    -s.mul_int(2) - &(ln2 * &zeta2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn starts(v: &Fixed, prefix: &str) {
        let s = v.to_decimal(40);
        assert!(s.starts_with(prefix), "{s} does not start with {prefix}");
    }

    #[test]
    fn table_values() {
        let t = compute_constants(DEFAULT_DIGITS).unwrap();
        starts(&t.pi, "3.14159265358979323846264338327");
        starts(&t.ln2, "0.69314718055994530941723212145");
        starts(&t.gamma, "0.57721566490153286060651209008");
        starts(&t.zeta3, "1.20205690315959428539973816151");
        starts(&t.catalan_g, "0.91596559417721901505460351493");
        starts(&-&t.zeta_prime2_over_zeta2, "0.569960993094532806399864360019730");
        assert_eq!(t.checks.len(), 6);
        for c in &t.checks {
            assert!(c.relative_difference < 1e-25, "{}: {}", c.name, c.relative_difference);
        }
    }

    #[test]
    fn bernoulli() {
        let b = bernoulli_even(3);
        let want = [(1, 1), (1, 6), (-1, 30), (1, 42)];
        for (q, (p, d)) in b.iter().zip(want) {
            assert_eq!(*q, BigRational::new(p.into(), d.into()));
        }
    }

    #[test]
    fn low_precision_refused() {
        assert!(compute_constants(8).is_err());
        assert!(compute_constants(60).is_ok());
    }

    #[test]
    fn zeta_em_matches_pi_power() {
        let bits = bits_for_digits(30);
        let z2 = zeta_euler_maclaurin(2, bits, 30);
        let want = pi_machin(bits).square().div_int(6);
        assert!((&z2 - &want).abs().to_f64() < 1e-30);
    }
}
