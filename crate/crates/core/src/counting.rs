//! Exact N_k(n, r, a): the number of tuples x ∈ (Z/rZ)^k with
//! a₁x₁² + ⋯ + a_kx_k² ≡ n (mod r).
//!
//! `r` is split into prime powers; each local factor is evaluated by a closed
//! form when its hypotheses hold, otherwise by an exact histogram convolution.
//! The local counts multiply back to the global one.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{big_pow, factorize, is_prime, jacobi_reduced, mul_mod, ramanujan_sum_factored, Factorization};
use crate::charsums::exp_sum_direct;
use crate::error::{Error, Result};

pub mod identities;

/// Default cap on the modulus handed to the histogram oracle.
pub const DEFAULT_ORACLE_BUDGET: u64 = 2000;

/// One counting problem a₁x₁² + ⋯ + a_kx_k² ≡ n (mod r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSpec {
    k: u32,
    n: i64,
    r: u64,
    a: Vec<i64>,
}

impl CongruenceSpec {
    pub fn new(k: u32, n: i64, r: u64, a: Vec<i64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if r == 0 {
            return Err(Error::InvalidArgument("modulus r must be positive".into()));
        }
        if a.len() != k as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {k} coefficients, got {}",
                a.len()
            )));
        }
        Ok(Self { k, n, r, a })
    }

    /// The diagonal form x₁² + ⋯ + x_k².
    pub fn all_ones(k: u32, n: i64, r: u64) -> Result<Self> {
        Self::new(k, n, r, vec![1; k as usize])
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    /// n reduced into [0, m).
    pub fn n_mod(&self, m: u64) -> u64 {
        reduce(self.n, m)
    }

    /// Coefficients reduced into [0, m).
    pub fn a_mod(&self, m: u64) -> Vec<u64> {
        self.a.iter().map(|&c| reduce(c, m)).collect()
    }

    pub fn is_all_ones(&self) -> bool {
        self.a.iter().all(|&c| c == 1)
    }
}

fn reduce(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

/// How a count (or a local factor of it) was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    ClosedFormOdd,
    ClosedFormTwo,
    HistogramOracle,
    ExponentialSum,
    CrtComposite,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::ClosedFormOdd => "closed-form-odd",
            CountMethod::ClosedFormTwo => "closed-form-two",
            CountMethod::HistogramOracle => "histogram-oracle",
            CountMethod::ExponentialSum => "exponential-sum",
            CountMethod::CrtComposite => "crt-composite",
        })
    }
}

/// Count for one factor of the modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalCount {
    pub modulus: u64,
    #[serde(serialize_with = "crate::report::ser_biguint")]
    pub count: BigUint,
    pub method: CountMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "crate::report::ser_biguint")]
    pub count: BigUint,
    pub method: CountMethod,
    pub per_factor: Vec<LocalCount>,
}

/// Strategy requested by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Closed forms where their hypotheses hold, the oracle elsewhere.
    #[default]
    Auto,
    /// Closed forms only; any uncovered local factor is a refusal.
    Closed,
    /// Histogram convolution over the whole modulus.
    Oracle,
    /// Floating-point exponential-sum evaluation, rounded.
    Exponential,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "closed" => Ok(Method::Closed),
            "oracle" => Ok(Method::Oracle),
            "exponential" => Ok(Method::Exponential),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub oracle_budget: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            oracle_budget: DEFAULT_ORACLE_BUDGET,
        }
    }
}

/// Entry v counts x ∈ [0, r) with coef·x² ≡ v (mod r).
pub fn square_histogram(coef: i64, r: u64) -> Vec<u64> {
    let c = reduce(coef, r) as u128;
    let m = r as u128;
    let mut hist = vec![0u64; r as usize];
    for x in 0..m {
        hist[(c * (x * x % m) % m) as usize] += 1;
    }
    hist
}

/// Cyclic convolution of the histograms, starting from the point mass at 0.
fn convolve_all<T>(hists: &[Vec<u64>], r: usize) -> Vec<T>
where
    T: Zero + Clone + From<u64> + for<'a> std::ops::AddAssign<&'a T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    let mut acc: Vec<T> = vec![T::zero(); r];
    acc[0] = T::from(1u64);
    for hist in hists {
        let support: Vec<(usize, T)> = hist
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(v, &c)| (v, T::from(c)))
            .collect();
        let mut next: Vec<T> = vec![T::zero(); r];
        for (u, au) in acc.iter().enumerate() {
            if au.is_zero() {
                continue;
            }
            for (v, c) in &support {
                let w = if u + v >= r { u + v - r } else { u + v };
                next[w] += &(au * c);
            }
        }
        acc = next;
    }
    acc
}

fn convolve_to<T>(hists: &[Vec<u64>], target: usize) -> T
where
    T: Zero + Clone + From<u64> + for<'a> std::ops::AddAssign<&'a T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    let r = hists[0].len();
    let (last, init) = hists.split_last().expect("at least one histogram");
    let acc: Vec<T> = convolve_all(init, r);
    let mut total = T::zero();
    for (u, au) in acc.iter().enumerate() {
        let v = (target + r - u) % r;
        if last[v] != 0 && !au.is_zero() {
            total += &(au * &T::from(last[v]));
        }
    }
    total
}

fn oracle_budget_check(r: u64, budget: u64) -> Result<()> {
    if r > budget {
        return Err(Error::BudgetExceeded {
            what: "oracle modulus",
            value: r,
            budget,
        });
    }
    Ok(())
}

/// r^k bounds every intermediate entry, so u128 suffices below 2^126.
fn fits_u128(r: u64, k: usize) -> bool {
    (r as f64).log2() * (k as f64) < 126.0
}

/// Oracle counts N_k(n, r, a) for every n ∈ [0, r) at once.
pub fn count_all_targets(r: u64, a: &[i64], budget: u64) -> Result<Vec<BigUint>> {
    if r == 0 || a.is_empty() {
        return Err(Error::InvalidArgument("need r ≥ 1 and at least one coefficient".into()));
    }
    oracle_budget_check(r, budget)?;
    let hists: Vec<Vec<u64>> = a.iter().map(|&c| square_histogram(c, r)).collect();
    if fits_u128(r, a.len()) {
        Ok(convolve_all::<u128>(&hists, r as usize)
            .into_iter()
            .map(BigUint::from)
            .collect())
    } else {
        Ok(convolve_all::<BigUint>(&hists, r as usize))
    }
}

/// Exact count by k-fold cyclic convolution of the square histograms.
///
/// Independent of every closed form; refuses moduli above `budget`.
pub fn count_bruteforce(spec: &CongruenceSpec, budget: u64) -> Result<BigUint> {
    oracle_budget_check(spec.r, budget)?;
    let hists: Vec<Vec<u64>> = spec.a.iter().map(|&c| square_histogram(c, spec.r)).collect();
    let target = spec.n_mod(spec.r) as usize;
    if fits_u128(spec.r, hists.len()) {
        Ok(BigUint::from(convolve_to::<u128>(&hists, target)))
    } else {
        Ok(convolve_to::<BigUint>(&hists, target))
    }
}

/// Rounded floating-point evaluation of
/// r^{k−1} Σ_{d|r} d^{−k} Σ_{(ℓ,d)=1} e(−ℓn/d) ∏ S(ℓa_i, d).
pub fn count_exponential(spec: &CongruenceSpec, budget: u64) -> Result<BigUint> {
    let r = spec.r;
    if r > budget {
        return Err(Error::BudgetExceeded {
            what: "exponential-sum modulus",
            value: r,
            budget,
        });
    }
    let a = spec.a_mod(r);
    let n = spec.n_mod(r);
    let f = factorize(r)?;
    let mut total = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for d in f.divisors() {
        // S(x, d)/d for each residue x, filled lazily
        let mut cache: Vec<Option<Complex64>> = vec![None; d as usize];
        let mut inner = Complex64::new(0.0, 0.0);
        for l in 1..=d {
            if l.gcd(&d) != 1 {
                continue;
            }
            let phase = (d - mul_mod(l, n % d, d)) % d;
            let mut term = Complex64::from_polar(1.0, std::f64::consts::TAU * phase as f64 / d as f64);
            for &ai in &a {
                let x = mul_mod(l, ai % d, d) as usize;
                let s = *cache[x].get_or_insert_with(|| exp_sum_direct(x as i64, d) / d as f64);
                term *= s;
            }
            inner += term;
        }
        // Kahan step on the outer sum
        let y = inner - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    let value = total.re * (r as f64).powi(spec.k as i32 - 1);
    let rounded = value.round();
    let residue = (value - rounded).abs().max(total.im.abs());
    if residue > 1e-3 || rounded < 0.0 {
        return Err(Error::NumericResidue { value, residue });
    }
    Ok(BigUint::from(rounded as u128))
}

fn signed_to_unsigned(v: BigInt) -> BigUint {
    debug_assert!(v.sign() != Sign::Minus, "negative count {v}");
    v.to_biguint().expect("nonnegative count")
}

fn rational_to_count(q: BigRational) -> BigUint {
    assert!(q.is_integer(), "closed form produced non-integer {q}");
    signed_to_unsigned(q.to_integer())
}

fn pow2(e: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    num_traits::pow::Pow::pow(&two, e)
}

/// Local count N_k(n, p^e, a) for odd p and p ∤ a₁⋯a_k, from the product of the
/// coefficients alone.
///
/// k even uses the Ramanujan-sum expansion; k odd uses the Möbius–Jacobi
/// expansion when p ∤ n and the a-independent divisor sum when p^e | n.
/// Odd k with 0 < v_p(n) < e has no closed form here.
pub fn count_prime_power_odd(k: u32, n: i64, p: u64, e: u32, aprod: i64) -> Result<BigUint> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenModulus(p));
    }
    if !is_prime(p) || e == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "need k ≥ 1 and an odd prime power, got k = {k}, {p}^{e}"
        )));
    }
    let q = p
        .checked_pow(e)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{e} overflows u64")))?;
    local_odd(k, reduce(n, q), p, e, reduce(aprod, q)).map_err(|err| match err {
        Error::NotCoprime { modulus, .. } => Error::NotCoprime { value: aprod, modulus },
        other => other,
    })
}

fn local_odd(k: u32, n: u64, p: u64, e: u32, aprod: u64) -> Result<BigUint> {
    if aprod.is_multiple_of(p) {
        return Err(Error::NotCoprime {
            value: aprod as i64,
            modulus: p,
        });
    }
    if k.is_multiple_of(2) {
        // r^{k−1} Σ_{j=0}^{e} c_{p^j}(n) ((−1)^m a / p^j) / p^{jm},  k = 2m
        let m = k / 2;
        let sign_a = if m % 2 == 1 { p - aprod % p } else { aprod % p };
        let chi_p = jacobi_reduced(sign_a, p) as i64;
        let mut sum = BigInt::zero();
        for j in 0..=e {
            let d = Factorization::from_factors(if j == 0 { vec![] } else { vec![(p, j)] })?;
            let c = ramanujan_sum_factored(&d, n as i128);
            if c == 0 {
                continue;
            }
            let chi = chi_p.pow(j);
            let term = BigInt::from(c * chi) * BigInt::from(big_pow(p, e * (k - 1) - j * m));
            sum += term;
        }
        return Ok(signed_to_unsigned(sum));
    }
    let q = p.pow(e);
    if n.is_multiple_of(q) {
        // r^{k−1} Σ_{d² | r} φ(d) / d^{k−1}
        let mut sum = BigUint::zero();
        for j in 0..=e / 2 {
            let phi = if j == 0 { 1 } else { (p - 1) * p.pow(j - 1) };
            sum += BigUint::from(phi) * big_pow(p, (e - j) * (k - 1));
        }
        return Ok(sum);
    }
    if !n.is_multiple_of(p) {
        // r^{2m} [1 + ((−1)^m n a / p) / p^m],  k = 2m + 1
        let m = (k - 1) / 2;
        let na = mul_mod(n % p, aprod % p, p);
        let signed = if m % 2 == 1 { p - na } else { na };
        let chi = jacobi_reduced(signed, p);
        let main = BigInt::from(big_pow(p, 2 * m * e));
        let corr = BigInt::from(big_pow(p, 2 * m * e - m)) * chi;
        return Ok(signed_to_unsigned(main + corr));
    }
    Err(Error::NoClosedForm {
        prime: p,
        exponent: e,
        reason: format!("odd k = {k} with p | n but p^e ∤ n"),
    })
}

/// Local count N_k(n, 2^ν) for a = (1, …, 1), in the cases with a closed form:
/// ν = 1; k even with n odd; n ≡ 0 (mod 2^ν); k ≡ 3 (mod 4) with n ≡ 1 (mod 4);
/// k = 1 with n odd.
pub fn count_prime_power_two(k: u32, n: i64, nu: u32) -> Result<BigUint> {
    if nu == 0 || nu > 63 || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "need k ≥ 1 and 1 ≤ ν ≤ 63, got k = {k}, ν = {nu}"
        )));
    }
    local_two(k, reduce(n, 1u64 << nu), nu)
}

fn local_two(k: u32, n: u64, nu: u32) -> Result<BigUint> {
    let ki = k as i64;
    let nui = nu as i64;
    if nu == 1 {
        // x² ≡ x (mod 2) makes the form linear.
        return Ok(big_pow(2, k - 1));
    }
    if k.is_multiple_of(2) && n % 2 == 1 {
        // 2^{ν(k−1)} (1 − cos((k + 2n)π/4) / 2^{k/2−1})
        let cos = match (k as u64 + 2 * n) % 8 {
            0 => 1,
            4 => -1,
            _ => 0,
        };
        let base = BigInt::from(big_pow(2, nu * (k - 1)));
        let corr = BigInt::from(big_pow(2, nu * (k - 1) - (k / 2 - 1)));
        return Ok(signed_to_unsigned(base - corr * cos));
    }
    if n == 0 {
        let q = if k.is_multiple_of(4) {
            let m = ki / 4;
            let a = pow2((nui - 1) * (2 * m - 1));
            let b = pow2(2 * m - 1) - BigRational::one();
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let frac = (a.clone() - BigRational::one()) / (a * b);
            pow2(nui * (4 * m - 1)) * (BigRational::one() + frac * BigInt::from(sign))
        } else if k % 4 == 2 {
            pow2(nui * (ki - 1))
        } else {
            let f = nui / 2;
            let sign = if ((ki * ki - 1) / 8) % 2 == 0 { 1 } else { -1 };
            let num = (pow2((ki - 2) * f) - BigRational::one()) * BigInt::from(sign);
            let den = pow2((ki - 2) * f - (ki - 3) / 2) * (pow2(ki - 2) - BigRational::one());
            pow2(nui * (ki - 1)) * (BigRational::one() + num / den)
        };
        return Ok(rational_to_count(q));
    }
    if k % 4 == 3 && n % 4 == 1 {
        let m = (ki - 3) / 4;
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let q = pow2(nui * (4 * m + 2)) * (BigRational::one() + pow2(-(2 * m + 1)) * BigInt::from(sign));
        return Ok(rational_to_count(q));
    }
    if k == 1 && n % 2 == 1 {
        // square roots of an odd residue modulo 2^ν
        let roots = match nu {
            2 if n % 4 == 1 => 2u32,
            2 => 0,
            _ if n % 8 == 1 => 4,
            _ => 0,
        };
        return Ok(BigUint::from(roots));
    }
    Err(Error::NoClosedForm {
        prime: 2,
        exponent: nu,
        reason: format!("k = {k}, n ≡ {n} (mod 2^{nu}) not covered"),
    })
}

fn local_fallback(
    spec: &CongruenceSpec,
    q: u64,
    p: u64,
    e: u32,
    method: Method,
    why: Error,
    opts: &CountOptions,
) -> Result<LocalCount> {
    if method == Method::Closed {
        return Err(match why {
            err @ Error::NoClosedForm { .. } => err,
            other => Error::NoClosedForm {
                prime: p,
                exponent: e,
                reason: other.to_string(),
            },
        });
    }
    let local = CongruenceSpec {
        k: spec.k,
        n: spec.n_mod(q) as i64,
        r: q,
        a: spec.a_mod(q).into_iter().map(|c| c as i64).collect(),
    };
    Ok(LocalCount {
        modulus: q,
        count: count_bruteforce(&local, opts.oracle_budget)?,
        method: CountMethod::HistogramOracle,
    })
}

fn local_count(
    spec: &CongruenceSpec,
    p: u64,
    e: u32,
    q: u64,
    method: Method,
    opts: &CountOptions,
) -> Result<LocalCount> {
    let n = spec.n_mod(q);
    let a = spec.a_mod(q);
    let attempt = if p == 2 {
        if a.iter().all(|&c| c == 1 % q) {
            local_two(spec.k, n, e).map(|c| (c, CountMethod::ClosedFormTwo))
        } else {
            Err(Error::NoClosedForm {
                prime: 2,
                exponent: e,
                reason: "2-adic closed forms need every a_i ≡ 1".into(),
            })
        }
    } else {
        let aprod = a.iter().fold(1 % q, |acc, &c| mul_mod(acc, c, q));
        local_odd(spec.k, n, p, e, aprod).map(|c| (c, CountMethod::ClosedFormOdd))
    };
    match attempt {
        Ok((count, method)) => Ok(LocalCount {
            modulus: q,
            count,
            method,
        }),
        Err(why) => local_fallback(spec, q, p, e, method, why, opts),
    }
}

/// Counts with a precomputed factorization of `spec.r()`; `method` must be
/// `Auto` or `Closed`.
pub fn count_factored(
    spec: &CongruenceSpec,
    factors: &Factorization,
    method: Method,
    opts: &CountOptions,
) -> Result<CountResult> {
    assert_eq!(factors.value(), spec.r, "factorization does not match modulus");
    let per_factor = factors
        .prime_powers()
        .map(|(p, e, q)| local_count(spec, p, e, q, method, opts))
        .collect::<Result<Vec<_>>>()?;
    let count = per_factor.iter().map(|l| &l.count).product();
    let method = match per_factor.as_slice() {
        [only] => only.method,
        _ => CountMethod::CrtComposite,
    };
    Ok(CountResult {
        count,
        method,
        per_factor,
    })
}

/// Exact N_k(n, r, a) with provenance.
pub fn count(spec: &CongruenceSpec, method: Method, opts: &CountOptions) -> Result<CountResult> {
    let whole = |count: BigUint, method: CountMethod| CountResult {
        count: count.clone(),
        method,
        per_factor: vec![LocalCount {
            modulus: spec.r,
            count,
            method,
        }],
    };
    match method {
        Method::Auto | Method::Closed => count_factored(spec, &factorize(spec.r)?, method, opts),
        Method::Oracle => Ok(whole(
            count_bruteforce(spec, opts.oracle_budget)?,
            CountMethod::HistogramOracle,
        )),
        Method::Exponential => Ok(whole(
            count_exponential(spec, opts.oracle_budget)?,
            CountMethod::ExponentialSum,
        )),
    }
}

/// N_k(n, r) for k ≡ 0 (mod 4) and odd r as r^{k/2−1} Σ_{d | gcd(n,r)} d·J_{k/2}(r/d).
pub fn count_jordan_form(k: u32, n: i64, r: u64) -> Result<BigUint> {
    if k == 0 || !k.is_multiple_of(4) {
        return Err(Error::InvalidArgument(format!(
            "k = {k} is not a positive multiple of 4"
        )));
    }
    if r.is_multiple_of(2) {
        return Err(Error::EvenModulus(r));
    }
    let g = reduce(n, r).gcd(&r);
    let mut sum = BigUint::zero();
    for d in factorize(g)?.divisors() {
        sum += factorize(r / d)?.jordan(k / 2) * d;
    }
    Ok(big_pow(r, k / 2 - 1) * sum)
}

fn split_two(r: u64) -> (u32, u64) {
    let nu = r.trailing_zeros();
    (nu, r >> nu)
}

/// N_3(0, r, (1, 1, −1)): solutions of x² + y² ≡ z² (mod r).
pub fn count_pythagorean(r: u64) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::InvalidArgument("modulus r must be positive".into()));
    }
    let (nu, odd) = split_two(r);
    let odd_part = identities::odd_zero_target(3, odd)?;
    let two_part = if nu == 0 {
        BigUint::one()
    } else {
        // 2^{2ν}(2 − 2^{−⌊ν/2⌋})
        big_pow(2, 2 * nu + 1) - big_pow(2, 2 * nu - nu / 2)
    };
    Ok(odd_part * two_part)
}

/// N_2(1, r, (1, −1)): solutions of x² − y² ≡ 1 (mod r), equal to φ(2r).
pub fn count_hyperbolic(r: u64) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::InvalidArgument("modulus r must be positive".into()));
    }
    let (nu, odd) = split_two(r);
    let odd_part = identities::jordan_form_negative(2, 1, odd)?;
    Ok(odd_part * big_pow(2, nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_targets_agree_with_single_counts() {
        for r in [1u64, 2, 9, 12, 25] {
            let all = count_all_targets(r, &[1, 2, -1], 100).unwrap();
            assert_eq!(all.iter().sum::<BigUint>(), BigUint::from(r.pow(3)));
            for (n, v) in all.iter().enumerate() {
                let spec = CongruenceSpec::new(3, n as i64, r, vec![1, 2, -1]).unwrap();
                assert_eq!(*v, count_bruteforce(&spec, 100).unwrap());
            }
        }
        assert!(count_all_targets(101, &[1], 100).is_err());
    }

    fn ones(k: u32, n: i64, r: u64) -> CongruenceSpec {
        CongruenceSpec::all_ones(k, n, r).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn naive(spec: &CongruenceSpec) -> u64 {
        let r = spec.r();
        let target = spec.n_mod(r);
        let a = spec.a_mod(r);
        let mut total = 0;
        let mut x = vec![0u64; spec.k() as usize];
        loop {
            let s = x
                .iter()
                .zip(&a)
                .fold(0u64, |acc, (&xi, &ai)| (acc + ai * xi % r * xi) % r);
            if s == target {
                total += 1;
            }
            let mut i = 0;
            loop {
                if i == x.len() {
                    return total;
                }
                x[i] += 1;
                if x[i] < r {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(CongruenceSpec::new(0, 0, 5, vec![]).is_err());
        assert!(CongruenceSpec::new(2, 0, 0, vec![1, 1]).is_err());
        assert!(CongruenceSpec::new(2, 0, 5, vec![1]).is_err());
        let s = CongruenceSpec::new(2, -1, 5, vec![-1, 7]).unwrap();
        assert_eq!(s.n_mod(5), 4);
        assert_eq!(s.a_mod(5), vec![4, 2]);
    }

    #[test]
    fn histogram_examples() {
        assert_eq!(square_histogram(1, 4), vec![2, 2, 0, 0]);
        assert_eq!(square_histogram(1, 5), vec![1, 2, 0, 0, 2]);
        assert_eq!(square_histogram(-1, 3), vec![1, 0, 2]);
        for r in 1..50 {
            assert_eq!(square_histogram(3, r).iter().sum::<u64>(), r);
        }
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(count_bruteforce(&ones(2, 1, 4), 2000).unwrap(), big(8));
        assert_eq!(count_bruteforce(&ones(1, 0, 1), 2000).unwrap(), big(1));
        assert_eq!(count_bruteforce(&ones(3, 0, 9), 2000).unwrap(), big(99));
        assert!(matches!(
            count_bruteforce(&ones(2, 0, 2001), 2000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn bruteforce_matches_tuple_enumeration() {
        for r in 1..=12u64 {
            for k in 1..=3u32 {
                for n in 0..r as i64 {
                    for a in [vec![1i64, 1, 1], vec![2, -1, 3], vec![5, 0, -2]] {
                        let spec = CongruenceSpec::new(k, n, r, a[..k as usize].to_vec()).unwrap();
                        assert_eq!(count_bruteforce(&spec, 100).unwrap(), big(naive(&spec)));
                    }
                }
            }
        }
    }

    #[test]
    fn bruteforce_big_path_agrees_with_u128_path() {
        // 7^50 needs more than 126 bits, forcing the BigUint accumulator.
        let spec = ones(50, 3, 7);
        let c = count_bruteforce(&spec, 100).unwrap();
        let closed = count(&spec, Method::Closed, &CountOptions::default()).unwrap();
        assert_eq!(c, closed.count);
    }

    #[test]
    fn exponential_examples() {
        let b = 2000;
        assert_eq!(count_exponential(&ones(2, 0, 5), b).unwrap(), big(9));
        assert_eq!(count_exponential(&ones(1, 1, 2), b).unwrap(), big(1));
        assert_eq!(count_exponential(&ones(4, 1, 3), b).unwrap(), big(24));
        // coefficients sharing a factor with r
        let shared = CongruenceSpec::new(2, 1, 6, vec![1, 3]).unwrap();
        assert_eq!(
            count_exponential(&shared, b).unwrap(),
            count_bruteforce(&shared, b).unwrap()
        );
    }

    #[test]
    fn odd_prime_power_examples() {
        assert_eq!(count_prime_power_odd(2, 1, 5, 1, 1).unwrap(), big(4));
        assert_eq!(count_prime_power_odd(3, 0, 3, 2, 1).unwrap(), big(99));
        assert_eq!(count_prime_power_odd(3, 1, 5, 1, 1).unwrap(), big(30));
        assert_eq!(count_prime_power_odd(2, 1, 3, 1, -1).unwrap(), big(2));
        assert!(matches!(
            count_prime_power_odd(3, 3, 3, 2, 1),
            Err(Error::NoClosedForm { .. })
        ));
        assert!(matches!(
            count_prime_power_odd(2, 1, 3, 1, 3),
            Err(Error::NotCoprime { .. })
        ));
        assert_eq!(count_prime_power_odd(2, 1, 4, 1, 1), Err(Error::EvenModulus(4)));
        assert!(count_prime_power_odd(2, 1, 9, 1, 1).is_err());
    }

    #[test]
    fn two_power_examples() {
        assert_eq!(count_prime_power_two(4, 1, 3).unwrap(), big(512));
        assert_eq!(count_prime_power_two(2, 1, 3).unwrap(), big(16));
        assert_eq!(count_prime_power_two(3, 1, 2).unwrap(), big(24));
        assert_eq!(count_prime_power_two(2, 0, 5).unwrap(), big(32));
        assert!(matches!(
            count_prime_power_two(5, 1, 3),
            Err(Error::NoClosedForm { .. })
        ));
        assert!(matches!(
            count_prime_power_two(2, 2, 3),
            Err(Error::NoClosedForm { .. })
        ));
    }

    #[test]
    fn count_examples() {
        let opts = CountOptions::default();
        let res = count(&ones(4, 0, 3), Method::Auto, &opts).unwrap();
        assert_eq!(res.count, big(33));
        let res = count(&ones(2, 1, 15), Method::Auto, &opts).unwrap();
        assert_eq!(res.count, big(16));
        assert_eq!(res.method, CountMethod::CrtComposite);
        assert_eq!(
            res.per_factor
                .iter()
                .map(|l| (l.modulus, l.count.clone()))
                .collect::<Vec<_>>(),
            vec![(3, big(4)), (5, big(4))]
        );
        assert_eq!(count(&ones(1, 0, 12), Method::Auto, &opts).unwrap().count, big(2));
        let hyp = CongruenceSpec::new(2, 1, 2, vec![1, -1]).unwrap();
        let res = count(&hyp, Method::Auto, &opts).unwrap();
        assert_eq!(res.count, big(2));
        // (1, −1) ≡ (1, 1) mod 2
        assert_eq!(res.method, CountMethod::ClosedFormTwo);
    }

    #[test]
    fn closed_method_refuses_uncovered_factor() {
        let opts = CountOptions::default();
        let spec = ones(3, 3, 9);
        assert!(matches!(
            count(&spec, Method::Closed, &opts),
            Err(Error::NoClosedForm {
                prime: 3,
                exponent: 2,
                ..
            })
        ));
        assert_eq!(count(&spec, Method::Auto, &opts).unwrap().count, big(naive(&spec)));
        let spec = CongruenceSpec::new(2, 1, 9, vec![3, 1]).unwrap();
        assert!(count(&spec, Method::Closed, &opts).unwrap_err().is_refusal());
    }

    #[test]
    fn auto_refuses_large_uncovered_factor() {
        let opts = CountOptions { oracle_budget: 100 };
        let spec = ones(5, 1, 128);
        assert!(matches!(
            count(&spec, Method::Auto, &opts),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn oracle_and_exponential_methods_report_whole_modulus() {
        let opts = CountOptions::default();
        let spec = ones(3, 2, 45);
        let o = count(&spec, Method::Oracle, &opts).unwrap();
        let e = count(&spec, Method::Exponential, &opts).unwrap();
        let a = count(&spec, Method::Auto, &opts).unwrap();
        assert_eq!(o.count, a.count);
        assert_eq!(e.count, a.count);
        assert_eq!(o.per_factor.len(), 1);
        assert_eq!(e.method, CountMethod::ExponentialSum);
    }

    #[test]
    fn jordan_form_examples() {
        assert_eq!(count_jordan_form(4, 1, 9).unwrap(), big(648));
        assert_eq!(count_jordan_form(4, 0, 3).unwrap(), big(33));
        assert_eq!(count_jordan_form(4, 5, 3).unwrap(), count_jordan_form(4, 2, 3).unwrap());
        assert!(count_jordan_form(6, 1, 3).is_err());
        assert_eq!(count_jordan_form(4, 1, 4), Err(Error::EvenModulus(4)));
    }

    #[test]
    fn special_congruence_examples() {
        assert_eq!(count_pythagorean(4).unwrap(), big(24));
        assert_eq!(count_pythagorean(1).unwrap(), big(1));
        assert_eq!(count_hyperbolic(15).unwrap(), big(8));
        assert_eq!(count_hyperbolic(1).unwrap(), big(1));
    }

    #[test]
    fn method_parsing() {
        assert_eq!("auto".parse::<Method>().unwrap(), Method::Auto);
        assert_eq!("exponential".parse::<Method>().unwrap(), Method::Exponential);
        assert!("fast".parse::<Method>().is_err());
    }
}
