//! Euler products for the arithmetic factor of `a + b = c` in smooth numbers.
//!
//! Every factor has the form `1 + t_p` with
//! `t_p = (p−1)(p−p^{a})(p−p^{b})(p−p^{c}) / (p(p^{S−1}−1)(p−1)³)`, `S = a + b + c`.
//! For exponents in `(0, 1]` and `S > 2` one has `0 ≤ t_p ≤ (p/(p−1))³ p^{1−S}`, and
//! with `π(t) < 1.25506 t / log t` partial summation gives, for primes above `P`,
//! `Σ_{p>P} p^{1−S} ≤ 1.25506 (S−1) P^{2−S} / ((S−2) log P)`.
//! The reported value sits inside the resulting rigorous interval.

use rayon::prelude::*;
use serde::Serialize;

use crate::saddle;
use crate::smooth::primes_up_to;
use crate::{Error, Result, SmoothContext};

pub const DEFAULT_P_MAX: u64 = 100_000;

const ROSSER_SCHOENFELD: f64 = 1.25506;
const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Largest prime included in the partial product.
    pub p_max: u64,
    /// The true value lies in `[value − tail_bound, value + tail_bound]`.
    pub tail_bound: f64,
}

/// `log t_p` ingredients evaluated without cancellation near exponent 1.
pub fn factor_excess(p: u64, a: f64, b: f64, c: f64) -> f64 {
    let pf = p as f64;
    let l = pf.ln();
    let s = a + b + c;
    let gap = |e: f64| -(((e - 1.0) * l).exp_m1()); // 1 − p^{e−1}
    pf * pf * gap(a) * gap(b) * gap(c) / (((s - 1.0) * l).exp_m1() * (pf - 1.0) * (pf - 1.0))
}

/// The Euler factor written literally, for cross-checks.
pub fn factor_direct(p: u64, a: f64, b: f64, c: f64) -> f64 {
    let pf = p as f64;
    let s = a + b + c;
    1.0 + (pf - 1.0) * (pf - pf.powf(a)) * (pf - pf.powf(b)) * (pf - pf.powf(c))
        / (pf * (pf.powf(s - 1.0) - 1.0) * (pf - 1.0).powi(3))
}

/// Rigorous bound on `Σ_{p > big_p} log(1 + t_p)`.
pub fn log_tail_bound(s: f64, big_p: u64) -> f64 {
    let pf = big_p.max(2) as f64;
    let c = ((pf + 1.0) / pf).powi(3);
    c * ROSSER_SCHOENFELD * (s - 1.0) * pf.powf(2.0 - s) / ((s - 2.0) * pf.ln())
}

/// Heuristic size of the same tail from the prime number theorem:
/// `∫_P^∞ t^{1−S} dt / log t = E₁((S−2) log P)`, damped by the factor gaps at `P`.
fn log_tail_estimate(a: f64, b: f64, c: f64, big_p: u64) -> f64 {
    let pf = big_p.max(2) as f64;
    let l = pf.ln();
    let gap = |e: f64| -(((e - 1.0) * l).exp_m1());
    exp_integral_e1((a + b + c - 2.0) * l) * gap(a) * gap(b) * gap(c)
}

/// Exponential integral `E₁(z)` for `z > 0`.
pub fn exp_integral_e1(z: f64) -> f64 {
    assert!(z > 0.0);
    if z < 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -z / k as f64;
            sum -= term / k as f64;
            if term.abs() < 1e-18 {
                break;
            }
        }
        -0.577_215_664_901_532_9 - z.ln() + sum
    } else {
        // continued fraction (modified Lentz)
        let tiny = 1e-300;
        let mut b = z + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-z).exp()
    }
}

fn check_exponents(a: f64, b: f64, c: f64) -> Result<f64> {
    for e in [a, b, c] {
        if !(e > 0.0 && e <= 1.0) {
            return Err(Error::domain(format!(
                "exponent {e} outside (0, 1]; the Euler factors are only controlled there"
            )));
        }
    }
    let s = a + b + c;
    if !(s > 2.0) {
        return Err(Error::domain(format!(
            "exponent sum {s} <= 2: the product diverges"
        )));
    }
    Ok(s)
}

fn log_partial(primes: &[u64], a: f64, b: f64, c: f64) -> f64 {
    let chunk = |ps: &[u64]| {
        ps.iter()
            .map(|&p| factor_excess(p, a, b, c).ln_1p())
            .sum::<f64>()
    };
    if primes.len() <= CHUNK {
        return chunk(primes);
    }
    let parts: Vec<f64> = primes.par_chunks(CHUNK).map(chunk).collect();
    parts.into_iter().sum()
}

/// `∏_p (1 + t_p)` for exponents `(a, b, c)`.
pub fn s1_general(a: f64, b: f64, c: f64, p_max: u64) -> Result<SeriesValue> {
    let s = check_exponents(a, b, c)?;
    if p_max < 2 {
        return Err(Error::invalid("p_max must be at least 2"));
    }
    let primes = primes_up_to(p_max);
    let big_p = *primes.last().unwrap();
    if a == 1.0 || b == 1.0 || c == 1.0 {
        return Ok(SeriesValue {
            value: 1.0,
            p_max: big_p,
            tail_bound: 0.0,
        });
    }
    let lower = log_partial(&primes, a, b, c);
    let bound = log_tail_bound(s, big_p);
    let est = log_tail_estimate(a, b, c, big_p).min(bound);
    let value = (lower + est).exp();
    let lo = lower.exp();
    let hi = (lower + bound).exp();
    Ok(SeriesValue {
        value,
        p_max: big_p,
        tail_bound: (value - lo).max(hi - value),
    })
}

/// The same product restricted to `p ≤ y`; exact up to rounding, so `tail_bound = 0`.
pub fn s1_general_finite(a: f64, b: f64, c: f64, y: f64) -> Result<SeriesValue> {
    check_exponents(a, b, c)?;
    if !(y >= 2.0) {
        return Err(Error::invalid(format!("y = {y} must be at least 2")));
    }
    let primes = primes_up_to(y.floor() as u64);
    Ok(SeriesValue {
        value: log_partial(&primes, a, b, c).exp(),
        p_max: *primes.last().unwrap(),
        tail_bound: 0.0,
    })
}

/// 𝔖₁(α) with factors `1 + (p−1)/(p(p^{3α−1}−1)) · ((p−p^α)/(p−1))³`.
pub fn s1(alpha: f64, p_max: u64) -> Result<SeriesValue> {
    if !(alpha > 2.0 / 3.0) {
        return Err(Error::domain(format!(
            "alpha = {alpha} <= 2/3: the product diverges"
        )));
    }
    s1_general(alpha, alpha, alpha, p_max)
}

/// 𝔖₁*(α, y) = 𝔖₁(α)/ζ(3α−1, y), or 𝔖₁(α)/ζ(3α−1) when `y` is `None`.
pub fn s1_star(alpha: f64, y: Option<f64>, ctx: &SmoothContext) -> Result<SeriesValue> {
    s1_star_with(alpha, y, DEFAULT_P_MAX, ctx)
}

pub fn s1_star_with(
    alpha: f64,
    y: Option<f64>,
    p_max: u64,
    ctx: &SmoothContext,
) -> Result<SeriesValue> {
    let base = s1(alpha, p_max)?;
    let s = 3.0 * alpha - 1.0;
    let z = match y {
        Some(y) => saddle::log_zeta_derivative(0, s, y, ctx)?.exp(),
        None => riemann_zeta(s)?,
    };
    Ok(SeriesValue {
        value: base.value / z,
        p_max: base.p_max,
        tail_bound: base.tail_bound / z,
    })
}

/// ζ(s) for real `s > 1` by Euler–Maclaurin summation.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::domain(format!("riemann_zeta needs s > 1, got {s}")));
    }
    const N: f64 = 16.0;
    // B_{2k} / (2k)!
    const B: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    ];
    let mut sum: f64 = (1..N as usize).map(|n| (n as f64).powf(-s)).sum();
    sum += N.powf(1.0 - s) / (s - 1.0) + 0.5 * N.powf(-s);
    let mut rising = s; // s(s+1)…(s+2k−2)
    let mut power = N.powf(-s - 1.0);
    for (k, b) in B.iter().enumerate() {
        sum += b * rising * power;
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        power /= N * N;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_known_values() {
        assert!((riemann_zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((riemann_zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((riemann_zeta(1.5).unwrap() - 2.612_375_348_685_488).abs() < 1e-14);
        // ζ(s) ~ 1/(s−1) + γ near the pole
        let s = 1.0 + 1e-6;
        let e = s - 1.0;
        assert!((riemann_zeta(s).unwrap() - 1.0 / e - 0.577_215_664_9).abs() < 1e-6);
        assert!(riemann_zeta(1.0).is_err());
    }

    #[test]
    fn e1_known_values() {
        assert!((exp_integral_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((exp_integral_e1(0.1) - 1.822_923_958_419_39).abs() < 1e-14);
        assert!((exp_integral_e1(5.0) - 0.001_148_295_591_275_325_6).abs() < 1e-17);
    }

    #[test]
    fn alpha_one_is_exactly_one() {
        let v = s1(1.0, 1000).unwrap();
        assert_eq!((v.value, v.tail_bound), (1.0, 0.0));
        let g = s1_general(1.0, 0.8, 0.9, 1000).unwrap();
        assert_eq!(g.value, 1.0);
    }

    #[test]
    fn factor_two_ways() {
        let want = 1.0 + (2.0 - 2f64.powf(0.9)).powi(3) / (2.0 * (2f64.powf(1.7) - 1.0));
        for (a, b, c) in [(0.9, 0.9, 0.9), (0.7, 0.85, 0.99), (0.75, 0.75, 0.75)] {
            for p in [2u64, 3, 97, 7919] {
                let d = factor_direct(p, a, b, c);
                let e = 1.0 + factor_excess(p, a, b, c);
                assert!(((d - e) / d).abs() < 1e-12, "p={p}");
            }
        }
        assert!((1.0 + factor_excess(2, 0.9, 0.9, 0.9) - want).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(s1(2.0 / 3.0, 100), Err(Error::Domain(_))));
        assert!(s1(1.05, 100).is_err());
        assert!(s1_general(0.6, 0.7, 0.7, 100).is_err());
    }

    #[test]
    fn truncation_is_sound() {
        for alpha in [0.72, 0.8, 0.9, 0.97] {
            let coarse = s1(alpha, 10_000).unwrap();
            let mid = s1(alpha, 100_000).unwrap();
            let fine = s1(alpha, 10_000_000).unwrap();
            assert!(mid.tail_bound < coarse.tail_bound);
            assert!(fine.tail_bound < mid.tail_bound);
            assert!(
                (fine.value - coarse.value).abs() <= coarse.tail_bound,
                "alpha={alpha}"
            );
            assert!(
                (fine.value - mid.value).abs() <= mid.tail_bound,
                "alpha={alpha}"
            );
        }
    }

    #[test]
    fn permutation_symmetry() {
        let base = s1_general(0.9, 0.85, 0.95, 50_000).unwrap().value;
        for (a, b, c) in [(0.85, 0.9, 0.95), (0.95, 0.85, 0.9), (0.9, 0.95, 0.85)] {
            let v = s1_general(a, b, c, 50_000).unwrap().value;
            assert!(((v - base) / base).abs() < 1e-14);
        }
    }

    #[test]
    fn equal_exponents_specialise() {
        let a = s1_general(0.85, 0.85, 0.85, 20_000).unwrap();
        let b = s1(0.85, 20_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn star_variants() {
        let ctx = SmoothContext::primes_only(1000).unwrap();
        let fin = s1_star(1.0, Some(100.0), &ctx).unwrap().value;
        let prod: f64 = primes_up_to(100)
            .iter()
            .map(|&p| 1.0 - 1.0 / (p * p) as f64)
            .product();
        assert!((fin - prod).abs() < 1e-14);
        let inf = s1_star(1.0, None, &ctx).unwrap().value;
        assert!((inf - 6.0 / (PI * PI)).abs() < 1e-15);

        let v = s1_star(0.8, Some(100.0), &ctx).unwrap();
        let z = saddle::zeta_y(num_complex::Complex64::new(1.4, 0.0), 100.0, &ctx)
            .unwrap()
            .re;
        let hi = s1(0.8, 10_000_000).unwrap();
        assert!((v.value - hi.value / z).abs() <= v.tail_bound + hi.tail_bound / z);
        assert!(s1_star(0.6, None, &ctx).is_err());
    }

    #[test]
    fn finite_product_close_to_full() {
        for (a, b, c) in [(0.9, 0.9, 0.9), (0.8, 0.85, 0.95)] {
            for y in [100.0, 1000.0] {
                let fin = s1_general_finite(a, b, c, y).unwrap().value;
                let full = s1_general(a, b, c, 1_000_000).unwrap();
                let lo = fin;
                let hi = fin * log_tail_bound(a + b + c, y as u64).exp();
                assert!(full.value + full.tail_bound >= lo && full.value - full.tail_bound <= hi);
            }
        }
    }

    #[test]
    fn lipschitz_in_alpha() {
        let mut prev = s1(0.75, DEFAULT_P_MAX).unwrap().value;
        let mut a = 0.75;
        while a < 1.0 {
            let next = (a + 0.01f64).min(1.0);
            let v = s1(next, DEFAULT_P_MAX).unwrap().value;
            assert!(((v - prev) / (next - a)).abs() <= 20.0, "alpha={a}");
            prev = v;
            a = next;
        }
    }
}
