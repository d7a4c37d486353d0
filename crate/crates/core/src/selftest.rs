//! Consistency sweeps run by `quadcong selftest`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::big_pow;
use crate::counting::{count, count_bruteforce, CongruenceSpec, CountOptions, Method};
use crate::error::{Error, Result};

pub const DEFAULT_RMAX: u64 = 200;
pub const DEFAULT_KMAX: u32 = 4;
const MAX_REPORTED: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: u64,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Suite {
    result: SuiteResult,
    failed: usize,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            result: SuiteResult {
                name,
                checked: 0,
                failures: Vec::new(),
            },
            failed: 0,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.result.checked += 1;
        if !ok {
            self.failed += 1;
            if self.result.failures.len() < MAX_REPORTED {
                self.result.failures.push(what());
            }
        }
    }

    fn finish(mut self) -> SuiteResult {
        if self.failed > MAX_REPORTED {
            let extra = self.failed - MAX_REPORTED;
            self.result.failures.push(format!("... and {extra} more"));
        }
        self.result
    }
}

fn auto(spec: &CongruenceSpec, opts: &CountOptions) -> Result<BigUint> {
    Ok(count(spec, Method::Auto, opts)?.count)
}

/// A spread of targets n ∈ [0, r) including 0 and 1.
fn sample_targets(r: u64) -> Vec<i64> {
    let mut ns: Vec<u64> = vec![0, 1 % r, r - 1, r / 2, r / 3];
    let step = (r / 7).max(1) | 1;
    ns.extend((0..8).map(|j| (j * step + 2) % r));
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter().map(|n| n as i64).collect()
}

fn oracle_equivalence(rmax: u64, kmax: u32, opts: &CountOptions) -> Result<SuiteResult> {
    let mut s = Suite::new("oracle-equivalence");
    for r in 1..=rmax {
        for k in 1..=kmax {
            for n in sample_targets(r) {
                let spec = CongruenceSpec::all_ones(k, n, r)?;
                let (fast, slow) = (
                    auto(&spec, opts)?,
                    count_bruteforce(&spec, rmax.max(opts.oracle_budget))?,
                );
                s.check(fast == slow, || {
                    format!("N_{k}({n}, {r}): engine {fast}, oracle {slow}")
                });
            }
        }
    }
    Ok(s.finish())
}

fn multiplicativity(rmax: u64, kmax: u32, opts: &CountOptions) -> Result<SuiteResult> {
    let mut s = Suite::new("multiplicativity");
    for r1 in 2..=rmax {
        for r2 in (r1 + 1)..=(rmax / r1) {
            if r1.gcd(&r2) != 1 {
                continue;
            }
            for k in 1..=kmax {
                for n in [0i64, 1, 2, -1] {
                    let n_of = |r| CongruenceSpec::all_ones(k, n, r);
                    let whole = count_bruteforce(&n_of(r1 * r2)?, rmax.max(opts.oracle_budget))?;
                    let parts = auto(&n_of(r1)?, opts)? * auto(&n_of(r2)?, opts)?;
                    s.check(whole == parts, || {
                        format!("N_{k}({n}, {}) = {whole} but N({r1})·N({r2}) = {parts}", r1 * r2)
                    });
                }
            }
        }
    }
    Ok(s.finish())
}

fn total_mass(rmax: u64, kmax: u32, opts: &CountOptions) -> Result<SuiteResult> {
    let mut s = Suite::new("total-mass");
    for r in 1..=rmax.min(120) {
        for k in 1..=kmax {
            let mut total = BigUint::zero();
            for n in 0..r as i64 {
                total += auto(&CongruenceSpec::all_ones(k, n, r)?, opts)?;
            }
            let want = big_pow(r, k);
            s.check(total == want, || {
                format!("k={k} r={r}: Σ_n N = {total}, expected {want}")
            });
        }
    }
    Ok(s.finish())
}

/// For odd r and even k the count depends on n only through gcd(n, r).
fn evenness(rmax: u64, kmax: u32, opts: &CountOptions) -> Result<SuiteResult> {
    let mut s = Suite::new("evenness");
    for r in (1..=rmax.min(150)).step_by(2) {
        for k in (2..=kmax).step_by(2) {
            for n in 0..r {
                let g = n.gcd(&r) % r;
                let lhs = auto(&CongruenceSpec::all_ones(k, n as i64, r)?, opts)?;
                let rhs = auto(&CongruenceSpec::all_ones(k, g as i64, r)?, opts)?;
                s.check(lhs == rhs, || format!("k={k} r={r}: N({n}) = {lhs}, N(gcd) = {rhs}"));
            }
        }
    }
    Ok(s.finish())
}

/// For odd k and odd r, N_k(0, r, a) does not depend on a (gcd(a_i, r) = 1).
fn a_independence(rmax: u64, kmax: u32, opts: &CountOptions) -> Result<SuiteResult> {
    let mut s = Suite::new("a-independence");
    const POOL: [i64; 10] = [1, -1, 2, -3, 5, 7, -11, 13, -17, 19];
    for r in (1..=rmax).step_by(2) {
        let usable: Vec<i64> = POOL
            .iter()
            .copied()
            .filter(|a| (a.unsigned_abs()).gcd(&r) == 1)
            .collect();
        for k in (1..=kmax).step_by(2) {
            let base = auto(&CongruenceSpec::all_ones(k, 0, r)?, opts)?;
            for shift in 0..5usize {
                let a: Vec<i64> = (0..k as usize)
                    .map(|i| usable[(i * 3 + shift * 7) % usable.len()])
                    .collect();
                let spec = CongruenceSpec::new(k, 0, r, a.clone())?;
                let got = count_bruteforce(&spec, rmax.max(opts.oracle_budget))?;
                s.check(got == base, || format!("k={k} r={r} a={a:?}: {got} vs {base}"));
            }
        }
    }
    Ok(s.finish())
}

pub fn run(rmax: u64, kmax: u32, opts: &CountOptions) -> Result<Vec<SuiteResult>> {
    if rmax == 0 {
        return Err(Error::InvalidArgument("rmax must be positive".into()));
    }
    if kmax == 0 {
        return Err(Error::InvalidArgument("kmax must be positive".into()));
    }
    Ok(vec![
        oracle_equivalence(rmax, kmax, opts)?,
        multiplicativity(rmax, kmax, opts)?,
        total_mass(rmax, kmax, opts)?,
        evenness(rmax, kmax, opts)?,
        a_independence(rmax, kmax, opts)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let results = run(30, 3, &CountOptions::default()).unwrap();
        assert_eq!(results.len(), 5);
        for r in &results {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
            assert!(r.checked > 0, "{}", r.name);
        }
        assert!(run(0, 4, &CountOptions::default()).is_err());
    }

    #[test]
    fn targets_in_range() {
        for r in 1..50 {
            let ns = sample_targets(r);
            assert!(ns.iter().all(|&n| (0..r as i64).contains(&n)));
            assert!(ns.contains(&0));
        }
    }
}
