//! Small, deliberately naive arithmetic used as independent oracles by the
//! integration tests. Nothing here calls into the library.

#![allow(dead_code)]

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Trial-division factorization as (p, e) pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == vec![(n, 1)]
}

pub fn primes_below(n: u64) -> Vec<u64> {
    (2..n).filter(|&p| is_prime(p)).collect()
}

/// φ(n) by counting residues coprime to n.
pub fn phi_by_count(n: u64) -> u64 {
    (1..=n).filter(|&j| gcd(j, n) == 1).count() as u64
}

pub fn mobius(n: u64) -> i64 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Nonprincipal character mod 4 as the sequence 0, 1, 0, −1.
pub fn chi4(n: u64) -> i64 {
    [0, 1, 0, -1][(n % 4) as usize]
}

/// Number of squarefree divisors.
pub fn squarefree_divisor_count(n: u64) -> i64 {
    (1..=n).filter(|&d| n.is_multiple_of(d) && mobius(d) != 0).count() as i64
}

/// Dirichlet convolution of two sequences indexed from 1 (entry 0 unused).
pub fn dirichlet(f: &[i64], g: &[i64]) -> Vec<i64> {
    let len = f.len().min(g.len());
    let mut h = vec![0i64; len];
    for a in 1..len {
        for b in 1..=(len - 1) / a {
            h[a * b] += f[a] * g[b];
        }
    }
    h
}

pub fn table(len: usize, f: impl Fn(u64) -> i64) -> Vec<i64> {
    (0..len).map(|n| if n == 0 { 0 } else { f(n as u64) }).collect()
}

/// Σ_{a²b²c = r} μ(a)·b
pub fn n1_zero_series(len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    for a in 1..len {
        for b in 1..len {
            let ab2 = a * a * b * b;
            if ab2 >= len {
                break;
            }
            for c in 1..=(len - 1) / ab2 {
                out[ab2 * c] += mobius(a as u64) * b as i64;
            }
        }
    }
    out
}

/// Σ_{ab = r} τ⁽²⁾(a)·h(b) with h supported on 1, 2, 4.
pub fn n1_one_series(len: usize) -> Vec<i64> {
    let h = table(len, |n| match n {
        1 => 1,
        2 => -1,
        4 => 2,
        _ => 0,
    });
    dirichlet(&table(len, squarefree_divisor_count), &h)
}

/// (id·(1∗χ)) ∗ (μχ)
pub fn n2_zero_series(len: usize) -> Vec<i64> {
    let one_chi = dirichlet(&table(len, |_| 1), &table(len, chi4));
    let left: Vec<i64> = one_chi.iter().enumerate().map(|(n, v)| n as i64 * v).collect();
    dirichlet(&left, &table(len, |n| mobius(n) * chi4(n)))
}

/// Deterministic xorshift for sampling.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// `count` distinct targets in [0, r), or all of them when r is small.
pub fn sample_targets(r: u64, count: usize, rng: &mut Rng) -> Vec<u64> {
    if r as usize <= count {
        return (0..r).collect();
    }
    let mut picked = std::collections::BTreeSet::new();
    while picked.len() < count {
        picked.insert(rng.below(r));
    }
    picked.into_iter().collect()
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Jacobi symbol (a/r) for odd r from Euler's criterion on each prime factor.
pub fn jacobi_euler(a: i64, r: u64) -> i64 {
    let mut out = 1;
    for (p, e) in factor(r) {
        let a = a.rem_euclid(p as i64) as u64;
        let l: i64 = match pow_mod(a, (p - 1) / 2, p) {
            0 => 0,
            1 => 1,
            _ => -1,
        };
        out *= l.pow(e);
    }
    out
}
