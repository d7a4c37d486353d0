//! Integer primitives: factorization, Jacobi symbol and the multiplicative
//! functions (μ, φ, J_k, ψ_k, Ramanujan sums) the counting formulas are built on.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs, checking every invariant.
    pub fn from_factors(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        let mut value: u64 = 1;
        for (i, &(p, e)) in factors.iter().enumerate() {
            if e == 0 || !is_prime(p) || (i > 0 && factors[i - 1].0 == p) {
                return Err(Error::InvalidArgument(format!("bad factor {p}^{e} in factorization")));
            }
            value = p
                .checked_pow(e)
                .and_then(|q| value.checked_mul(q))
                .ok_or_else(|| Error::InvalidArgument("factorization overflows u64".into()))?;
        }
        Ok(Self { value, factors })
    }

    pub fn one() -> Self {
        Self {
            value: 1,
            factors: Vec::new(),
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// `(p, e, p^e)` for each prime power exactly dividing the value.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.factors.iter().map(|&(p, e)| (p, e, p.pow(e)))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_square(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e % 2 == 0)
    }

    /// Product of `p^e` over the factors.
    pub fn recompose(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e))
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let base = divs.len();
            let mut q = 1u64;
            for _ in 0..e {
                q *= p;
                for i in 0..base {
                    divs.push(divs[i] * q);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    pub fn moebius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
    }

    /// J_k = n^k ∏ (1 − p^−k), evaluated as ∏ (p^{ke} − p^{k(e−1)}).
    pub fn jordan(&self, k: u32) -> BigUint {
        self.factors
            .iter()
            .map(|&(p, e)| {
                let p = BigUint::from(p);
                Pow::pow(&p, k * e) - Pow::pow(&p, k * (e - 1))
            })
            .product()
    }

    /// ψ_k = n^k ∏ (1 + p^−k).
    pub fn dedekind_psi(&self, k: u32) -> BigUint {
        self.factors
            .iter()
            .map(|&(p, e)| {
                let p = BigUint::from(p);
                Pow::pow(&p, k * e) + Pow::pow(&p, k * (e - 1))
            })
            .product()
    }
}

fn require_positive(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases suffice below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho. `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = y;
        let mut len = 1u64;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..len {
                y = f(y);
            }
            let mut k = 0;
            while k < len && g == 1 {
                ys = y;
                for _ in 0..m.min(len - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            len *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Trial division up to 10^6, then Miller–Rabin and Pollard rho on the cofactor.
pub fn factorize(m: u64) -> Result<Factorization> {
    require_positive(m, "argument of factorize")?;
    let mut n = m;
    let mut factors = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    // 6k ± 1 wheel
    let mut p = 5u64;
    while p <= TRIAL_LIMIT && p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        let mut rest = Vec::new();
        split_large(n, &mut rest);
        rest.sort_unstable();
        for q in rest {
            match factors.last_mut() {
                Some((p, e)) if *p == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
    }
    Ok(Factorization { value: m, factors })
}

/// Jacobi symbol (l/r) for odd r ≥ 1, by the binary reciprocity algorithm.
pub fn jacobi(l: i64, r: u64) -> Result<i8> {
    if r.is_multiple_of(2) {
        return Err(Error::EvenModulus(r));
    }
    let a = (l as i128).rem_euclid(r as i128) as u64;
    Ok(jacobi_reduced(a, r))
}

/// Same as [`jacobi`] for an already nonnegative numerator; `r` must be odd.
pub(crate) fn jacobi_reduced(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        let s = a.trailing_zeros();
        a >>= s;
        if s % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

pub fn moebius(n: u64) -> Result<i8> {
    Ok(factorize(n)?.moebius())
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.euler_phi())
}

pub fn jordan(k: u32, n: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidArgument("Jordan order must be positive".into()));
    }
    Ok(factorize(n)?.jordan(k))
}

pub fn dedekind_psi(k: u32, n: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidArgument("Dedekind order must be positive".into()));
    }
    Ok(factorize(n)?.dedekind_psi(k))
}

/// c_r(n) through Hölder's identity c_r(n) = φ(r) μ(r/g) / φ(r/g), g = gcd(n, r).
pub fn ramanujan_sum(r: u64, n: i64) -> Result<i64> {
    let f = factorize(r)?;
    Ok(ramanujan_sum_factored(&f, n as i128))
}

pub(crate) fn ramanujan_sum_factored(r: &Factorization, n: i128) -> i64 {
    // Factor m = r / gcd(n, r) straight from the factorization of r.
    let mut m_factors = Vec::new();
    for (p, e, q) in r.prime_powers() {
        let mut residue = n.rem_euclid(q as i128) as u64;
        let mut v = 0;
        while v < e && residue.is_multiple_of(p) {
            residue /= p;
            v += 1;
            if residue == 0 {
                v = e;
            }
        }
        if v < e {
            m_factors.push((p, e - v));
        }
    }
    let m = Factorization {
        value: m_factors.iter().map(|&(p, e)| p.pow(e)).product(),
        factors: m_factors,
    };
    (r.euler_phi() / m.euler_phi()) as i64 * m.moebius() as i64
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

/// Integer square root floor.
pub fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// `base^exp` as a big integer.
pub(crate) fn big_pow(base: u64, exp: u32) -> BigUint {
    if exp == 0 {
        return BigUint::one();
    }
    Pow::pow(&BigUint::from(base), exp)
}

/// Linear sieve of smallest prime factors for `1..=limit`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let j = i * p as usize;
                if p > spf[i] || j > n {
                    break;
                }
                spf[j] = p;
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    pub fn smallest_prime_factor(&self, n: u32) -> u32 {
        self.spf[n as usize]
    }

    pub fn factorize(&self, n: u32) -> Result<Factorization> {
        require_positive(n as u64, "argument of factorize")?;
        if n > self.limit() {
            return Err(Error::BudgetExceeded {
                what: "sieve argument",
                value: n as u64,
                budget: self.limit() as u64,
            });
        }
        let mut m = n;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m as usize];
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Ok(Factorization {
            value: n as u64,
            factors,
        })
    }
}
