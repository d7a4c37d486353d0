//! Exact quadratic Gauss sums S(ℓ, r), the Jacobi-character sums T(n, r) and
//! V(r) = T(0, r), plus floating-point evaluations of the defining sums.
//!
//! Exact values live in Z[ζ₈]·√m. That ring holds every value needed here:
//! i = ζ₈², √2 = ζ₈ − ζ₈³, and e(ℓ/8) = ζ₈^ℓ.

use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use num_integer::Integer;

use crate::arith::{factorize, jacobi, jacobi_reduced};
use crate::error::{Error, Result};

/// An exact value (c₀ + c₁ζ₈ + c₂ζ₈² + c₃ζ₈³)·√m with m squarefree.
///
/// The radicand is kept odd (a factor √2 is folded into the coefficients as
/// ζ₈ − ζ₈³), which makes the representation canonical: equal values compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cyclo8Radical {
    coeffs: [i128; 4],
    radicand: u64,
}

const SQRT2: [i128; 4] = [0, 1, 0, -1];

fn ring_mul(a: &[i128; 4], b: &[i128; 4]) -> [i128; 4] {
    let mut out = [0i128; 4];
    for i in 0..4 {
        for j in 0..4 {
            let prod = a[i] * b[j];
            if i + j < 4 {
                out[i + j] += prod;
            } else {
                // ζ₈⁴ = −1
                out[i + j - 4] -= prod;
            }
        }
    }
    out
}

impl Cyclo8Radical {
    /// Normalizes `coeffs · √radicand`, pulling square factors and 2 out of the radicand.
    pub fn new(coeffs: [i128; 4], radicand: u64) -> Result<Self> {
        if radicand == 0 {
            return Err(Error::InvalidArgument("radicand must be positive".into()));
        }
        if coeffs == [0; 4] {
            return Ok(Self::zero());
        }
        let f = factorize(radicand)?;
        let mut scale: i128 = 1;
        let mut odd_part: u64 = 1;
        let mut has_two = false;
        for &(p, e) in f.factors() {
            scale *= (p as i128).pow(e / 2);
            if e % 2 == 1 {
                if p == 2 {
                    has_two = true;
                } else {
                    odd_part *= p;
                }
            }
        }
        let mut c = coeffs.map(|x| x * scale);
        if has_two {
            c = ring_mul(&c, &SQRT2);
        }
        Ok(Self {
            coeffs: c,
            radicand: odd_part,
        })
    }

    pub fn zero() -> Self {
        Self {
            coeffs: [0; 4],
            radicand: 1,
        }
    }

    pub fn from_int(v: i128) -> Self {
        if v == 0 {
            Self::zero()
        } else {
            Self {
                coeffs: [v, 0, 0, 0],
                radicand: 1,
            }
        }
    }

    pub fn i() -> Self {
        Self {
            coeffs: [0, 0, 1, 0],
            radicand: 1,
        }
    }

    /// ζ₈^k for any integer k.
    pub fn zeta8_pow(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut coeffs = [0i128; 4];
        if k < 4 {
            coeffs[k] = 1;
        } else {
            coeffs[k - 4] = -1;
        }
        Self { coeffs, radicand: 1 }
    }

    pub fn coeffs(&self) -> [i128; 4] {
        self.coeffs
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0; 4]
    }

    /// The value as a rational integer, when it is one.
    pub fn as_integer(&self) -> Option<i128> {
        match self.coeffs {
            [c, 0, 0, 0] if self.radicand == 1 => Some(c),
            _ => None,
        }
    }

    pub fn scale(&self, k: i128) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.map(|c| c * k),
            radicand: self.radicand,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let basis = [
            Complex64::new(1.0, 0.0),
            Complex64::new(h, h),
            Complex64::new(0.0, 1.0),
            Complex64::new(-h, h),
        ];
        let sum: Complex64 = self.coeffs.iter().zip(basis).map(|(&c, b)| b * c as f64).sum();
        sum * (self.radicand as f64).sqrt()
    }
}

impl Mul for Cyclo8Radical {
    type Output = Cyclo8Radical;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let g = self.radicand.gcd(&rhs.radicand);
        let coeffs = ring_mul(&self.coeffs, &rhs.coeffs).map(|c| c * g as i128);
        // Both radicands are odd and squarefree, so their cofactors are coprime.
        Self {
            coeffs,
            radicand: (self.radicand / g) * (rhs.radicand / g),
        }
    }
}

impl Neg for Cyclo8Radical {
    type Output = Cyclo8Radical;

    fn neg(self) -> Self {
        self.scale(-1)
    }
}

impl fmt::Display for Cyclo8Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const BASIS: [&str; 4] = ["", "ζ8", "i", "ζ8^3"];
        let mut terms = Vec::new();
        for (&c, name) in self.coeffs.iter().zip(BASIS) {
            if c == 0 {
                continue;
            }
            let term = match (c, name) {
                (c, "") => c.to_string(),
                (1, n) => n.to_string(),
                (-1, n) => format!("-{n}"),
                (c, n) => format!("{c}{n}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let inner = terms.join(" + ").replace("+ -", "- ");
        match (self.radicand, terms.len()) {
            (1, _) => write!(f, "{inner}"),
            (m, 1) if inner == "1" => write!(f, "√{m}"),
            (m, 1) if inner == "-1" => write!(f, "-√{m}"),
            (m, 1) => write!(f, "{inner}√{m}"),
            (m, _) => write!(f, "({inner})√{m}"),
        }
    }
}

fn unit_for_odd(r: u64) -> Cyclo8Radical {
    if r % 4 == 1 {
        Cyclo8Radical::from_int(1)
    } else {
        Cyclo8Radical::i()
    }
}

/// Exact S(ℓ, r) = Σ_{j=1}^{r} e(ℓj²/r) for gcd(ℓ, r) = 1.
///
/// Odd r gives (ℓ/r)√r or i(ℓ/r)√r according to r mod 4. For r = 2^ν:
/// 0 when ν = 1, (1 + i^ℓ)·2^{ν/2} for even ν, 2^{(ν+1)/2}·ζ₈^ℓ for odd ν > 1.
/// Moduli mixing 2^ν (ν ≥ 1) with an odd part > 1 are refused.
pub fn gauss_sum(l: i64, r: u64) -> Result<Cyclo8Radical> {
    if r == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let residue = (l as i128).rem_euclid(r as i128) as u64;
    if residue.gcd(&r) != 1 {
        return Err(Error::NotCoprime { value: l, modulus: r });
    }
    if r % 2 == 1 {
        let symbol = jacobi_reduced(residue, r) as i128;
        return Cyclo8Radical::new([symbol, 0, 0, 0], r).map(|v| v * unit_for_odd(r));
    }
    if !r.is_power_of_two() {
        return Err(Error::MixedModulus(r));
    }
    let nu = r.trailing_zeros();
    Ok(match nu {
        1 => Cyclo8Radical::zero(),
        _ if nu.is_multiple_of(2) => {
            let i_pow = if residue % 4 == 1 { 1 } else { -1 };
            Cyclo8Radical {
                coeffs: [1, 0, i_pow, 0],
                radicand: 1,
            }
            .scale(1i128 << (nu / 2))
        }
        _ => Cyclo8Radical::zeta8_pow((residue % 8) as i64).scale(1i128 << nu.div_ceil(2)),
    })
}

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    fn add_part(acc: &mut (f64, f64), x: f64) {
        let t = acc.0 + x;
        if acc.0.abs() >= x.abs() {
            acc.1 += (acc.0 - t) + x;
        } else {
            acc.1 += (x - t) + acc.0;
        }
        acc.0 = t;
    }

    fn add(&mut self, z: Complex64) {
        Self::add_part(&mut self.re, z.re);
        Self::add_part(&mut self.im, z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// e(t/r) with t already reduced to [0, r).
fn unit_root(t: u64, r: u64) -> Complex64 {
    let angle = std::f64::consts::TAU * (t as f64 / r as f64);
    Complex64::from_polar(1.0, angle)
}

/// Floating-point evaluation of Σ_{j=1}^{r} e(ℓj²/r).
pub fn exp_sum_direct(l: i64, r: u64) -> Complex64 {
    if r == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let lr = (l as i128).rem_euclid(r as i128) as u128;
    let mut acc = CompensatedSum::default();
    for j in 1..=r as u128 {
        let t = (lr * ((j * j) % r as u128) % r as u128) as u64;
        acc.add(unit_root(t, r));
    }
    acc.value()
}

/// Exact T(n, r) = Σ_{gcd(j,r)=1} (j/r) e(jn/r) for odd r and gcd(n, r) = 1.
pub fn jacobi_char_sum(n: i64, r: u64) -> Result<Cyclo8Radical> {
    if r.is_multiple_of(2) {
        return Err(Error::EvenModulus(r));
    }
    let residue = (n as i128).rem_euclid(r as i128) as u64;
    if residue.gcd(&r) != 1 {
        return Err(Error::NotCoprime { value: n, modulus: r });
    }
    let f = factorize(r)?;
    if !f.is_squarefree() {
        return Ok(Cyclo8Radical::zero());
    }
    let symbol = jacobi(n, r)? as i128;
    Ok(Cyclo8Radical::new([symbol, 0, 0, 0], r)? * unit_for_odd(r))
}

/// Floating-point T(n, r) for odd r and any n, including gcd(n, r) > 1.
pub fn jacobi_char_sum_direct(n: i64, r: u64) -> Result<Complex64> {
    if r.is_multiple_of(2) {
        return Err(Error::EvenModulus(r));
    }
    let nr = (n as i128).rem_euclid(r as i128) as u128;
    let mut acc = CompensatedSum::default();
    for j in 1..=r {
        let chi = jacobi_reduced(j, r);
        if chi != 0 {
            let t = (nr * j as u128 % r as u128) as u64;
            acc.add(unit_root(t, r) * chi as f64);
        }
    }
    Ok(acc.value())
}

/// V(r) = Σ_{gcd(j,r)=1} (j/r): φ(r) if r is a perfect square, 0 otherwise.
pub fn jacobi_char_mass(r: u64) -> Result<u64> {
    if r.is_multiple_of(2) {
        return Err(Error::EvenModulus(r));
    }
    let f = factorize(r)?;
    Ok(if f.is_square() { f.euler_phi() } else { 0 })
}
