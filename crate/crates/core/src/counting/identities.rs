//! Whole-modulus divisor-sum identities for odd r.
//!
//! These evaluate N_k(n, r, a) straight from sums over d | r instead of the
//! per-prime-power dispatch in the parent module, so the two routes check
//! each other.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{big_pow, factorize, jacobi};
use crate::error::{Error, Result};

fn require_odd(r: u64) -> Result<()> {
    if r == 0 {
        Err(Error::InvalidArgument("modulus r must be positive".into()))
    } else if r.is_multiple_of(2) {
        Err(Error::EvenModulus(r))
    } else {
        Ok(())
    }
}

fn require_coprime(n: i64, r: u64) -> Result<()> {
    if ((n as i128).rem_euclid(r as i128) as u64).gcd(&r) != 1 {
        Err(Error::NotCoprime { value: n, modulus: r })
    } else {
        Ok(())
    }
}

fn to_count(v: BigInt) -> BigUint {
    v.to_biguint().expect("divisor sum is a nonnegative count")
}

/// (−1)^{(d−1)/2} for odd d.
fn chi4(d: u64) -> i64 {
    if d % 4 == 1 {
        1
    } else {
        -1
    }
}

/// The four all-ones identities, selected by k mod 4:
///
/// * k ≡ 0: r^{k−1} Σ_{d|r} c_d(n)/d^{k/2}
/// * k ≡ 1: r^{k−1} Σ_{d|r} μ²(d)(n/d)/d^{(k−1)/2}, gcd(n, r) = 1
/// * k ≡ 2: r^{k−1} Σ_{d|r} (−1)^{(d−1)/2} c_d(n)/d^{k/2}
/// * k ≡ 3: r^{k−1} Σ_{d|r} (−1)^{(d−1)/2} μ²(d)(n/d)/d^{(k−1)/2}, gcd(n, r) = 1
pub fn cohen_all_ones(k: u32, n: i64, r: u64) -> Result<BigUint> {
    require_odd(r)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k % 2 == 1 {
        require_coprime(n, r)?;
    }
    let f = factorize(r)?;
    let mut sum = BigInt::zero();
    for d in f.divisors() {
        let fd = factorize(d)?;
        let (weight, power) = if k.is_multiple_of(2) {
            (crate::arith::ramanujan_sum(d, n)?, k / 2)
        } else {
            let mu2 = fd.moebius().abs() as i64;
            (mu2 * jacobi(n, d)? as i64, (k - 1) / 2)
        };
        let sign = if k % 4 >= 2 { chi4(d) } else { 1 };
        if weight == 0 {
            continue;
        }
        // d^power divides r^{k−1} because d | r and power ≤ k − 1.
        let scale = big_pow(r, k - 1) / big_pow(d, power);
        sum += BigInt::from(scale) * (weight * sign);
    }
    Ok(to_count(sum))
}

/// General-a even-k expansion: r^{k−1} Σ_{d|r} c_d(n)/d^{m} ((−1)^m a₁⋯a_k / d), k = 2m.
pub fn ramanujan_expansion(k: u32, n: i64, r: u64, aprod: i64) -> Result<BigUint> {
    require_odd(r)?;
    if k == 0 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("k = {k} must be even")));
    }
    require_coprime(aprod, r)?;
    let m = k / 2;
    let signed = if m % 2 == 1 { -(aprod as i128) } else { aprod as i128 };
    let signed = signed.rem_euclid(r as i128) as i64;
    let mut sum = BigInt::zero();
    for d in factorize(r)?.divisors() {
        let c = crate::arith::ramanujan_sum(d, n)?;
        if c == 0 {
            continue;
        }
        let chi = jacobi(signed, d)? as i64;
        sum += BigInt::from(big_pow(r, k - 1) / big_pow(d, m)) * (c * chi);
    }
    Ok(to_count(sum))
}

/// General-a odd-k expansion for gcd(n, r) = 1:
/// r^{k−1} Σ_{d|r} μ²(d)/d^{m} ((−1)^m n a₁⋯a_k / d), k = 2m + 1.
pub fn mobius_jacobi_expansion(k: u32, n: i64, r: u64, aprod: i64) -> Result<BigUint> {
    require_odd(r)?;
    if k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("k = {k} must be odd")));
    }
    require_coprime(aprod, r)?;
    require_coprime(n, r)?;
    let m = (k - 1) / 2;
    let mut prod = (n as i128 * aprod as i128).rem_euclid(r as i128);
    if m % 2 == 1 {
        prod = (r as i128 - prod) % r as i128;
    }
    let mut sum = BigInt::zero();
    for d in factorize(r)?.divisors() {
        if factorize(d)?.moebius() == 0 {
            continue;
        }
        let chi = jacobi(prod as i64, d)? as i64;
        sum += BigInt::from(big_pow(r, k - 1) / big_pow(d, m)) * chi;
    }
    Ok(to_count(sum))
}

/// Odd k, n ≡ 0: r^{k−1} Σ_{d² | r} φ(d)/d^{k−1}, independent of a.
pub fn odd_zero_target(k: u32, r: u64) -> Result<BigUint> {
    require_odd(r)?;
    if k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("k = {k} must be odd")));
    }
    let mut sum = BigUint::zero();
    for d in factorize(r)?.divisors() {
        if !r.is_multiple_of(d * d) {
            continue;
        }
        let phi = factorize(d)?.euler_phi();
        sum += big_pow(r, k - 1) / big_pow(d, k - 1) * phi;
    }
    Ok(sum)
}

/// k ≡ 2 (mod 4) with a₁⋯a_k ≡ −1: r^{2m} Σ_{d | gcd(n,r)} d·J_{2m+1}(r/d), k = 4m + 2.
pub fn jordan_form_negative(k: u32, n: i64, r: u64) -> Result<BigUint> {
    require_odd(r)?;
    if k % 4 != 2 {
        return Err(Error::InvalidArgument(format!("k = {k} is not 2 mod 4")));
    }
    let m = (k - 2) / 4;
    let g = ((n as i128).rem_euclid(r as i128) as u64).gcd(&r);
    let mut sum = BigUint::zero();
    for d in factorize(g)?.divisors() {
        sum += factorize(r / d)?.jordan(2 * m + 1) * d;
    }
    Ok(big_pow(r, 2 * m) * sum)
}

/// k ≡ 3 (mod 4), a₁⋯a_k ≡ −1: r^{2m+1} ψ_{2m+1}(r), k = 4m + 3.
///
/// Valid when n is a quadratic residue modulo every prime dividing r (n = 1 in
/// particular); for other n the Jacobi twist (n/d) no longer drops out and the
/// input is refused.
pub fn psi_form(k: u32, n: i64, r: u64) -> Result<BigUint> {
    require_odd(r)?;
    if k % 4 != 3 {
        return Err(Error::InvalidArgument(format!("k = {k} is not 3 mod 4")));
    }
    require_coprime(n, r)?;
    let f = factorize(r)?;
    if let Some(&(p, _)) = f.factors().iter().find(|&&(p, _)| jacobi(n, p) != Ok(1)) {
        return Err(Error::InvalidArgument(format!(
            "{n} is not a quadratic residue modulo {p}"
        )));
    }
    let m = (k - 3) / 4;
    Ok(big_pow(r, 2 * m + 1) * f.dedekind_psi(2 * m + 1))
}
