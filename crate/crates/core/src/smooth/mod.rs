//! Primes, largest-prime-factor tables, and exact smooth-number counts.
//!
//! All set membership uses `⌊x⌋`: `n` is counted when `1 <= n <= x`.

mod cache;

use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

pub use cache::{cache_dir_from_env, CACHE_ENV};

/// Largest table or segmented-sieve range accepted unless overridden.
pub const DEFAULT_CAPACITY: u64 = 100_000_000;

/// Longest list `enumerate_smooth` will materialise.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

const SEGMENT: u64 = 1 << 18;

/// Immutable sieve data shared by every other module.
#[derive(Debug, Clone)]
pub struct SmoothContext {
    y_bound: u64,
    primes: Vec<u64>,
    log_primes: Vec<f64>,
    lpf: Option<Vec<u32>>,
    table_limit: u64,
    capacity: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiValue {
    pub x: f64,
    pub y: f64,
    pub count: u64,
}

impl SmoothContext {
    /// Primes up to `y_bound` and a largest-prime-factor table for `n <= table_limit`.
    pub fn new(y_bound: u64, table_limit: u64) -> Result<Self> {
        Self::with_capacity(y_bound, table_limit, DEFAULT_CAPACITY)
    }

    /// Primes only; factorisation falls back to trial division.
    pub fn primes_only(y_bound: u64) -> Result<Self> {
        Self::with_capacity(y_bound, 0, DEFAULT_CAPACITY)
    }

    pub fn with_capacity(y_bound: u64, table_limit: u64, capacity: u64) -> Result<Self> {
        check_limits(y_bound, table_limit, capacity)?;
        let lpf = (table_limit > 0).then(|| lpf_table(table_limit as usize));
        Ok(Self::from_parts(y_bound, lpf, table_limit, capacity))
    }

    fn from_parts(y_bound: u64, lpf: Option<Vec<u32>>, table_limit: u64, capacity: u64) -> Self {
        let primes = primes_up_to(y_bound);
        let log_primes = primes.iter().map(|&p| (p as f64).ln()).collect();
        SmoothContext {
            y_bound,
            primes,
            log_primes,
            lpf,
            table_limit,
            capacity,
        }
    }

    pub fn y_bound(&self) -> u64 {
        self.y_bound
    }

    pub fn table_limit(&self) -> u64 {
        self.table_limit
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn log_primes(&self) -> &[f64] {
        &self.log_primes
    }

    pub fn lpf_table(&self) -> Option<&[u32]> {
        self.lpf.as_deref()
    }

    /// Number of primes `p <= y`; errors when `y` exceeds the context's prime bound.
    pub fn prime_count_le(&self, y: f64) -> Result<usize> {
        if !(y >= 2.0) {
            return Err(Error::invalid(format!("y = {y} must be at least 2")));
        }
        let yi = y.floor();
        if yi > self.y_bound as f64 {
            return Err(Error::invalid(format!(
                "y = {y} exceeds the context prime bound {}",
                self.y_bound
            )));
        }
        let yi = yi as u64;
        Ok(self.primes.partition_point(|&p| p <= yi))
    }

    /// Primes `p <= y` together with their logarithms.
    pub fn primes_le(&self, y: f64) -> Result<(&[u64], &[f64])> {
        let k = self.prime_count_le(y)?;
        Ok((&self.primes[..k], &self.log_primes[..k]))
    }

    /// P⁺(n), with P⁺(1) = 1.
    pub fn largest_prime_factor(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::invalid("largest_prime_factor(0) is undefined"));
        }
        if let Some(t) = &self.lpf {
            if n <= self.table_limit {
                return Ok(t[n as usize] as u64);
            }
        }
        Ok(self.lpf_trial(n))
    }

    fn lpf_trial(&self, mut n: u64) -> u64 {
        let mut best = 1;
        for &p in &self.primes {
            if p * p > n {
                break;
            }
            if n.is_multiple_of(p) {
                best = p;
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
        }
        if n == 1 {
            return best;
        }
        // Cofactor free of primes <= y_bound; continue with odd trial divisors.
        let mut d = (self.y_bound + 1).max(3) | 1;
        while d.saturating_mul(d) <= n {
            if n.is_multiple_of(d) {
                best = d;
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 2;
        }
        best.max(n)
    }

    /// Smoothness test that uses the table when `n` is inside it.
    pub fn is_smooth(&self, n: u64, y: f64) -> Result<bool> {
        Ok(self.largest_prime_factor(n)? as f64 <= y)
    }

    /// Ψ(x, y) exactly: table scan inside the table, segmented sieve beyond it.
    pub fn psi_exact(&self, x: f64, y: f64) -> Result<PsiValue> {
        let n = check_xy(x, y)?;
        let count = if y >= n as f64 {
            n
        } else if n <= self.table_limit {
            let t = self
                .lpf
                .as_ref()
                .expect("table present when table_limit > 0");
            let yb = y.floor() as u64;
            t[1..=n as usize]
                .par_chunks(1 << 16)
                .map(|c| c.iter().filter(|&&v| v as u64 <= yb).count() as u64)
                .sum()
        } else {
            self.check_capacity("psi_exact range", n)?;
            let mut count = 0u64;
            self.segmented(n, y, |_| count += 1);
            count
        };
        Ok(PsiValue { x, y, count })
    }

    /// Calls `f` on every member of S(x, y) in ascending order without materialising the set.
    pub fn for_each_smooth(&self, x: f64, y: f64, mut f: impl FnMut(u64)) -> Result<()> {
        let n = check_xy(x, y)?;
        if n <= self.table_limit {
            let t = self
                .lpf
                .as_ref()
                .expect("table present when table_limit > 0");
            let yb = y.floor().min(u32::MAX as f64) as u64;
            for (i, &v) in t[1..=n as usize].iter().enumerate() {
                if v as u64 <= yb {
                    f(i as u64 + 1);
                }
            }
        } else if y >= n as f64 {
            (1..=n).for_each(f);
        } else {
            self.check_capacity("smooth-number stream", n)?;
            self.segmented(n, y, f);
        }
        Ok(())
    }

    /// S(x, y) as an ascending list, capped at [`ENUMERATION_LIMIT`] elements.
    pub fn enumerate_smooth(&self, x: f64, y: f64) -> Result<Vec<u64>> {
        let n = check_xy(x, y)?;
        if n <= self.table_limit || y >= n as f64 {
            if n > ENUMERATION_LIMIT {
                let count = self.psi_exact(x, y)?.count;
                if count > ENUMERATION_LIMIT {
                    return Err(Error::Capacity {
                        what: "smooth-number list",
                        requested: count,
                        limit: ENUMERATION_LIMIT,
                    });
                }
            }
            let mut out = Vec::new();
            self.for_each_smooth(x, y, |m| out.push(m))?;
            return Ok(out);
        }
        let primes = self.primes_for(y.floor().min(n as f64) as u64);
        let mut out = smooth_dfs(n, &primes, ENUMERATION_LIMIT)?;
        out.sort_unstable();
        Ok(out)
    }

    fn primes_for(&self, y: u64) -> std::borrow::Cow<'_, [u64]> {
        if y <= self.y_bound {
            let k = self.primes.partition_point(|&p| p <= y);
            std::borrow::Cow::Borrowed(&self.primes[..k])
        } else {
            std::borrow::Cow::Owned(primes_up_to(y))
        }
    }

    fn check_capacity(&self, what: &'static str, n: u64) -> Result<()> {
        if n > self.capacity {
            return Err(Error::Capacity {
                what,
                requested: n,
                limit: self.capacity,
            });
        }
        Ok(())
    }

    /// Segmented sieve over `[1, n]`: each cell accumulates the product of its prime-power
    /// divisors with `p <= y`, and the cell is smooth exactly when that product equals it.
    fn segmented(&self, n: u64, y: f64, mut f: impl FnMut(u64)) {
        let primes = self.primes_for(y.floor().min(n as f64) as u64);
        let mut prod = vec![1u64; SEGMENT as usize];
        let mut lo = 1u64;
        while lo <= n {
            let hi = (lo + SEGMENT - 1).min(n);
            let len = (hi - lo + 1) as usize;
            prod[..len].fill(1);
            for &p in primes.iter() {
                if p > hi {
                    break;
                }
                let mut pk = p;
                loop {
                    let first = lo.div_ceil(pk) * pk;
                    let mut m = first;
                    while m <= hi {
                        prod[(m - lo) as usize] *= p;
                        m += pk;
                    }
                    match pk.checked_mul(p) {
                        Some(next) if next <= hi => pk = next,
                        _ => break,
                    }
                }
            }
            for (i, &v) in prod[..len].iter().enumerate() {
                if v == lo + i as u64 {
                    f(v);
                }
            }
            lo = hi + 1;
        }
    }
}

fn check_limits(y_bound: u64, table_limit: u64, capacity: u64) -> Result<()> {
    if y_bound < 2 {
        return Err(Error::invalid("y_bound must be at least 2"));
    }
    if table_limit > capacity {
        return Err(Error::Capacity {
            what: "largest-prime-factor table",
            requested: table_limit,
            limit: capacity,
        });
    }
    if table_limit > u32::MAX as u64 {
        return Err(Error::invalid("table_limit must fit in 32 bits"));
    }
    Ok(())
}

fn check_xy(x: f64, y: f64) -> Result<u64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::invalid(format!(
            "x = {x} must be a finite real >= 1"
        )));
    }
    if !(y >= 2.0) {
        return Err(Error::invalid(format!("y = {y} must be at least 2")));
    }
    Ok(x.floor() as u64)
}

/// Membership test for S(∞, y) by trial division with divisors up to `min(y, √n)`.
pub fn is_smooth(n: u64, y: f64) -> Result<bool> {
    if n == 0 {
        return Err(Error::invalid("is_smooth(0) is undefined"));
    }
    let mut n = n;
    let mut d = 2u64;
    loop {
        if d as f64 > y {
            // every remaining prime factor exceeds y
            return Ok(n == 1);
        }
        if d.saturating_mul(d) > n {
            // n is 1 or a prime
            return Ok(n as f64 <= y);
        }
        while n.is_multiple_of(d) {
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
}

/// Sieve of Eratosthenes over odd numbers.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let half = ((n - 1) / 2) as usize; // index i stands for 2i + 1
    let mut composite = vec![false; half + 1];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j <= half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(approx_pi(n));
    out.push(2);
    out.extend(
        (1..=half)
            .filter(|&i| !composite[i])
            .map(|i| 2 * i as u64 + 1),
    );
    out
}

fn approx_pi(n: u64) -> usize {
    let x = n as f64;
    if x < 17.0 {
        return 8;
    }
    (1.26 * x / x.ln()) as usize
}

/// Largest prime factor for every `n <= limit`, via a linear smallest-prime-factor sieve
/// that is then rewritten in place: `lpf(n) = max(spf(n), lpf(n / spf(n)))`.
pub fn lpf_table(limit: usize) -> Vec<u32> {
    let mut t = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::with_capacity(approx_pi(limit as u64));
    for i in 2..=limit {
        if t[i] == 0 {
            t[i] = i as u32;
            primes.push(i as u32);
        }
        let si = t[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > si || m > limit {
                break;
            }
            t[m] = p;
        }
    }
    if limit >= 1 {
        t[1] = 1;
    }
    for n in 2..=limit {
        let s = t[n];
        let rest = t[n / s as usize];
        if rest > s {
            t[n] = rest;
        }
    }
    t
}

/// Depth-first generation of every `m <= n` whose prime factors lie in `primes`.
/// Work is proportional to the output; fails once more than `budget` values appear.
pub fn smooth_dfs(n: u64, primes: &[u64], budget: u64) -> Result<Vec<u64>> {
    let mut out = vec![1u64];
    let mut stack: Vec<(u64, usize)> = vec![(1, 0)];
    while let Some((m, start)) = stack.pop() {
        for (j, &p) in primes.iter().enumerate().skip(start) {
            let Some(c) = m.checked_mul(p) else { break };
            if c > n {
                break;
            }
            out.push(c);
            if out.len() as u64 > budget {
                return Err(Error::Capacity {
                    what: "smooth-number list",
                    requested: out.len() as u64,
                    limit: budget,
                });
            }
            stack.push((c, j));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lpf_oracle(mut n: u64) -> u64 {
        let mut best = 1;
        let mut d = 2;
        while n > 1 {
            if n.is_multiple_of(d) {
                best = d;
                n /= d;
            } else {
                d += 1;
            }
        }
        best
    }

    #[test]
    fn largest_prime_factor_examples() {
        let ctx = SmoothContext::new(100, 1000).unwrap();
        assert_eq!(ctx.largest_prime_factor(1).unwrap(), 1);
        assert_eq!(ctx.largest_prime_factor(12).unwrap(), 3);
        assert_eq!(ctx.largest_prime_factor(97).unwrap(), 97);
        assert!(matches!(
            ctx.largest_prime_factor(0),
            Err(Error::InvalidInput(_))
        ));
        // past the table: trial division continues beyond y_bound
        assert_eq!(ctx.largest_prime_factor(101 * 103).unwrap(), 103);
        assert_eq!(
            ctx.largest_prime_factor(2 * 3 * 1_000_003).unwrap(),
            1_000_003
        );
        assert_eq!(ctx.largest_prime_factor(1 << 40).unwrap(), 2);
    }

    #[test]
    fn is_smooth_examples() {
        assert!(is_smooth(8, 2.0).unwrap());
        assert!(!is_smooth(10, 3.0).unwrap());
        assert!(is_smooth(1, 2.0).unwrap());
        assert!(is_smooth(49, 7.5).unwrap());
        assert!(!is_smooth(49, 6.9).unwrap());
        assert!(is_smooth(0, 2.0).is_err());
    }

    #[test]
    fn is_smooth_matches_oracle() {
        for n in 1..=3000u64 {
            for y in [2.0, 3.0, 5.5, 7.0, 10.0, 31.0, 100.0] {
                assert_eq!(
                    is_smooth(n, y).unwrap(),
                    lpf_oracle(n) as f64 <= y,
                    "n={n} y={y}"
                );
            }
        }
    }

    #[test]
    fn table_matches_trial_division() {
        let t = lpf_table(20_000);
        for n in 1..=20_000u64 {
            assert_eq!(t[n as usize] as u64, lpf_oracle(n), "n={n}");
        }
    }

    #[test]
    fn primes_sieve() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    }

    #[test]
    fn psi_examples() {
        let ctx = SmoothContext::new(100, 1000).unwrap();
        assert_eq!(ctx.psi_exact(10.0, 2.0).unwrap().count, 4);
        assert_eq!(ctx.psi_exact(57.9, 57.9).unwrap().count, 57);
        let oracle = (1..=100u64).filter(|&n| lpf_oracle(n) <= 5).count() as u64;
        assert_eq!(ctx.psi_exact(100.0, 5.0).unwrap().count, oracle);
        assert_eq!(oracle, 34);
        assert!(ctx.psi_exact(0.5, 2.0).is_err());
        assert!(ctx.psi_exact(10.0, 1.5).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let ctx = SmoothContext::new(10, 100).unwrap();
        assert_eq!(ctx.enumerate_smooth(4.0, 2.0).unwrap(), vec![1, 2, 4]);
        assert_eq!(
            ctx.enumerate_smooth(10.0, 3.0).unwrap(),
            vec![1, 2, 3, 4, 6, 8, 9]
        );
        assert_eq!(ctx.enumerate_smooth(1.0, 2.0).unwrap(), vec![1]);
        // beyond the table: depth-first route
        let big = ctx.enumerate_smooth(1e12, 5.0).unwrap();
        assert!(big.windows(2).all(|w| w[0] < w[1]));
        assert!(big.iter().all(|&m| is_smooth(m, 5.0).unwrap()));
        assert_eq!(big.len() as u64, dfs_count(1_000_000_000_000, &[2, 3, 5]));
    }

    fn dfs_count(n: u64, ps: &[u64]) -> u64 {
        match ps.split_first() {
            None => 1,
            Some((&p, rest)) => {
                let mut total = 0;
                let mut m = n;
                loop {
                    total += dfs_count(m, rest);
                    if m < p {
                        break;
                    }
                    m /= p;
                }
                total
            }
        }
    }

    #[test]
    fn segmented_matches_table() {
        let with_table = SmoothContext::new(50, 300_000).unwrap();
        let without = SmoothContext::primes_only(50).unwrap();
        for &(x, y) in &[
            (300_000.0, 50.0),
            (262_144.0, 7.0),
            (262_145.0, 2.0),
            (99_999.0, 200.0),
        ] {
            assert_eq!(
                with_table.psi_exact(x, y).unwrap().count,
                without.psi_exact(x, y).unwrap().count,
                "x={x} y={y}"
            );
        }
        let mut a = Vec::new();
        without
            .for_each_smooth(300_000.0, 13.0, |m| a.push(m))
            .unwrap();
        assert_eq!(a, with_table.enumerate_smooth(300_000.0, 13.0).unwrap());
    }

    #[test]
    fn capacity_is_enforced() {
        let ctx = SmoothContext::with_capacity(10, 0, 1000).unwrap();
        match ctx.psi_exact(5000.0, 3.0) {
            Err(Error::Capacity { limit, .. }) => assert_eq!(limit, 1000),
            other => panic!("{other:?}"),
        }
        assert!(SmoothContext::with_capacity(10, 2000, 1000).is_err());
    }

    #[test]
    fn buchstab_identity() {
        let ctx = SmoothContext::new(10_000, 10_000).unwrap();
        for x in (1..=10_000u64).step_by(37) {
            for &y in &[2u64, 3, 10, 97, 1000] {
                let lhs = ctx.psi_exact(x as f64, y as f64).unwrap().count;
                let mut rhs = 1;
                for &p in ctx.primes().iter().take_while(|&&p| p <= y) {
                    if p <= x {
                        rhs += ctx.psi_exact((x / p) as f64, p as f64).unwrap().count;
                    }
                }
                assert_eq!(lhs, rhs, "x={x} y={y}");
            }
        }
    }
}
