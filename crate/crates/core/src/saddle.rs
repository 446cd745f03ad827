//! The saddle point α(x, y) of `ζ(s, y) x^s / s`, prime sums for the derivatives of
//! `log ζ(s, y)`, and the estimates for Ψ(x, y) built from them.
//!
//! For `z = p^{-s}` the k-th derivative of `-log(1 - z)` in `s` is
//! `(-log p)^k · Li_{1-k}(z)`, so every derivative is a closed-form prime sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::quad::{self, Tolerance};
use crate::{Error, Result, SmoothContext};

const CHUNK: usize = 1 << 15;

/// Domain constant of 𝒟* used when the caller gives none.
pub const DEFAULT_C0: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleData {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub alpha: f64,
    pub zeta_alpha_y: f64,
    pub log_zeta: f64,
    /// Derivatives 1..=4 of `log ζ(s, y)` at `s = α`; `sigma[0] = -log x` at the root.
    pub sigma: [f64; 4],
    pub h_u: f64,
    pub t0: f64,
    /// `σ₁(α) + log x`.
    pub residual: f64,
}

impl SaddleData {
    pub fn log_x(&self) -> f64 {
        self.x.ln()
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma[1]
    }
}

/// Deterministic chunked sum of `f(log p)` over the given logarithms.
fn prime_sum<const N: usize>(logs: &[f64], f: impl Fn(f64) -> [f64; N] + Sync) -> [f64; N] {
    let add = |mut a: [f64; N], b: [f64; N]| {
        for i in 0..N {
            a[i] += b[i];
        }
        a
    };
    let chunk = |c: &[f64]| c.iter().map(|&l| f(l)).fold([0.0; N], add);
    if logs.len() <= CHUNK {
        return chunk(logs);
    }
    let parts: Vec<[f64; N]> = logs.par_chunks(CHUNK).map(chunk).collect();
    parts.into_iter().fold([0.0; N], add)
}

fn prime_sum_c(logs: &[f64], f: impl Fn(f64) -> Complex64 + Sync) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    let chunk = |c: &[f64]| c.iter().fold(zero, |a, &l| a + f(l));
    if logs.len() <= CHUNK {
        return chunk(logs);
    }
    let parts: Vec<Complex64> = logs.par_chunks(CHUNK).map(chunk).collect();
    parts.into_iter().fold(zero, |a, b| a + b)
}

/// `(z, 1 - z)` for `z = e^{-s·l}`, with `1 - z` free of cancellation near `s·l = 0`.
fn z_and_one_minus(s: Complex64, l: f64) -> (Complex64, Complex64) {
    let a = -s.re * l;
    let b = -s.im * l;
    let ea = a.exp();
    let (sb, cb) = b.sin_cos();
    let half = (0.5 * b).sin();
    let em1 = Complex64::new(a.exp_m1() * cb - 2.0 * half * half, ea * sb);
    (Complex64::new(ea * cb, ea * sb), -em1)
}

/// `Li_{1-k}(z)` for `k = 1..=4`, written with `w = 1 - z`.
fn polylog_neg(k: usize, z: Complex64, w: Complex64) -> Complex64 {
    match k {
        1 => z / w,
        2 => z / (w * w),
        3 => z * (1.0 + z) / (w * w * w),
        4 => z * (1.0 + 4.0 * z + z * z) / (w * w * w * w),
        _ => unreachable!(),
    }
}

fn polylog_neg_real(k: usize, z: f64, w: f64) -> f64 {
    match k {
        1 => z / w,
        2 => z / (w * w),
        3 => z * (1.0 + z) / (w * w * w),
        4 => z * (1.0 + z * (4.0 + z)) / (w * w * w * w),
        _ => unreachable!(),
    }
}

fn check_re(s: Complex64) -> Result<()> {
    if !(s.re > 0.0) {
        return Err(Error::domain(format!(
            "Re s = {} must be positive for the partial Euler product",
            s.re
        )));
    }
    Ok(())
}

/// `log ζ(s, y) = Σ_{p ≤ y} -log(1 - p^{-s})`, principal branch per factor.
pub fn log_zeta_y(s: Complex64, y: f64, ctx: &SmoothContext) -> Result<Complex64> {
    check_re(s)?;
    let (_, logs) = ctx.primes_le(y)?;
    Ok(prime_sum_c(logs, |l| -z_and_one_minus(s, l).1.ln()))
}

pub fn zeta_y(s: Complex64, y: f64, ctx: &SmoothContext) -> Result<Complex64> {
    Ok(log_zeta_y(s, y, ctx)?.exp())
}

/// k-th derivative (k ≤ 4) of `log ζ(s, y)` on the real axis.
pub fn log_zeta_derivative(k: usize, sigma: f64, y: f64, ctx: &SmoothContext) -> Result<f64> {
    if k > 4 {
        return Err(Error::invalid(format!("derivative order {k} > 4")));
    }
    if !(sigma > 0.0) {
        return Err(Error::domain(format!("sigma = {sigma} must be positive")));
    }
    let (_, logs) = ctx.primes_le(y)?;
    let [v] = prime_sum(logs, |l| {
        let w = -(-sigma * l).exp_m1();
        if k == 0 {
            return [-w.ln()];
        }
        let z = 1.0 - w;
        [(-l).powi(k as i32) * polylog_neg_real(k, z, w)]
    });
    Ok(v)
}

/// Complex counterpart of [`log_zeta_derivative`].
pub fn log_zeta_derivative_complex(
    k: usize,
    s: Complex64,
    y: f64,
    ctx: &SmoothContext,
) -> Result<Complex64> {
    if k > 4 {
        return Err(Error::invalid(format!("derivative order {k} > 4")));
    }
    if k == 0 {
        return log_zeta_y(s, y, ctx);
    }
    check_re(s)?;
    let (_, logs) = ctx.primes_le(y)?;
    Ok(prime_sum_c(logs, |l| {
        let (z, w) = z_and_one_minus(s, l);
        polylog_neg(k, z, w) * (-l).powi(k as i32)
    }))
}

/// `(Σ log p/(p^α − 1), Σ (log p)² p^α/(p^α − 1)²)` in one pass.
fn saddle_sums(alpha: f64, logs: &[f64]) -> (f64, f64) {
    let [a, b] = prime_sum(logs, |l| {
        let w = -(-alpha * l).exp_m1();
        let q = (1.0 - w) / w;
        [l * q, l * l * q / w]
    });
    (a, b)
}

/// Solves `Σ_{p ≤ y} log p / (p^α − 1) = log x` by bisection to width 1e-3 followed by
/// safeguarded Newton steps.
pub fn solve_alpha(x: f64, y: f64, ctx: &SmoothContext) -> Result<SaddleData> {
    if !(y >= 2.0) || !(x >= y) || !x.is_finite() {
        return Err(Error::invalid(format!(
            "solve_alpha needs x >= y >= 2, got x = {x}, y = {y}"
        )));
    }
    let (_, logs) = ctx.primes_le(y)?;
    let log_x = x.ln();
    let g = |a: f64| saddle_sums(a, logs).0 - log_x;

    let (mut lo, mut hi) = (1e-6, 1.1);
    let mut grow = 0;
    while g(hi) > 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 20 {
            return Err(Error::Consistency(
                "saddle equation not bracketed above".into(),
            ));
        }
    }
    while g(lo) < 0.0 {
        lo *= 1e-3;
        if lo < 1e-300 {
            return Err(Error::Consistency(
                "saddle equation not bracketed below".into(),
            ));
        }
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut a = 0.5 * (lo + hi);
    let target = 1e-12 * log_x;
    let mut best = (f64::INFINITY, a);
    for _ in 0..60 {
        let (s1, s2) = saddle_sums(a, logs);
        let r = s1 - log_x;
        if r.abs() < best.0 {
            best = (r.abs(), a);
        }
        if r.abs() <= target {
            break;
        }
        if r > 0.0 {
            lo = a;
        } else {
            hi = a;
        }
        let next = a + r / s2;
        a = if next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-16 * a {
            break;
        }
    }
    let alpha = best.1;
    let data = saddle_data(x, y, alpha, ctx)?;
    if data.residual.abs() > 1e-9 * log_x {
        return Err(Error::Consistency(format!(
            "saddle residual {} exceeds 1e-9·log x",
            data.residual
        )));
    }
    Ok(data)
}

/// Fills every [`SaddleData`] field at a given abscissa (no root finding).
pub fn saddle_data(x: f64, y: f64, alpha: f64, ctx: &SmoothContext) -> Result<SaddleData> {
    let (_, logs) = ctx.primes_le(y)?;
    let [l0, s1, s2, s3, s4] = prime_sum(logs, |l| {
        let w = -(-alpha * l).exp_m1();
        let z = 1.0 - w;
        [
            -w.ln(),
            -l * polylog_neg_real(1, z, w),
            l * l * polylog_neg_real(2, z, w),
            -l * l * l * polylog_neg_real(3, z, w),
            l * l * l * l * polylog_neg_real(4, z, w),
        ]
    });
    let log_x = x.ln();
    let u = log_x / y.ln();
    Ok(SaddleData {
        x,
        y,
        u,
        alpha,
        zeta_alpha_y: l0.exp(),
        log_zeta: l0,
        sigma: [s1, s2, s3, s4],
        h_u: h_of_u(u.max(1.0))?,
        t0: u.powf(-1.0 / 3.0) / y.ln(),
        residual: s1 + log_x,
    })
}

/// `x^α ζ(α, y) / (α √(2π σ₂))`.
pub fn ht_psi_estimate(sd: &SaddleData) -> f64 {
    (sd.alpha * sd.log_x() + sd.log_zeta - sd.alpha.ln() - 0.5 * (2.0 * PI * sd.sigma2()).ln())
        .exp()
}

/// `ζ(α + iτ, y) x^{α+iτ} / (α + iτ)`.
pub fn perron_integrand(sd: &SaddleData, tau: f64, ctx: &SmoothContext) -> Result<Complex64> {
    let s = Complex64::new(sd.alpha, tau);
    let lz = log_zeta_y(s, sd.y, ctx)?;
    Ok((lz + s * sd.log_x()).exp() / s)
}

/// `(1/2π) ∫_{-T}^{T} Re[ζ(α+iτ, y) x^{α+iτ}/(α+iτ)] dτ` with `T = tau_max`.
///
/// `steps` is the number of panels across `[-T, T]`; panels are further narrowed to
/// `min(1/log x, T₀/8)` and refined adaptively.
pub fn psi_contour_estimate(
    sd: &SaddleData,
    tau_max: f64,
    steps: usize,
    ctx: &SmoothContext,
) -> Result<f64> {
    if !(tau_max >= sd.t0) {
        return Err(Error::invalid(format!(
            "tau_max = {tau_max} is below T0 = {}",
            sd.t0
        )));
    }
    let log_x = sd.log_x();
    let spacing = 2.0 * tau_max / steps.max(1) as f64;
    if steps == 0 || spacing > PI / log_x {
        return Err(Error::Parameter(format!(
            "{steps} steps over [-{tau_max}, {tau_max}] give spacing {spacing:.3e}, \
             coarser than pi/log x = {:.3e}",
            PI / log_x
        )));
    }
    ctx.primes_le(sd.y)?;
    let width = spacing.min(1.0 / log_x).min(sd.t0 / 8.0);
    // scale out x^α ζ(α, y) so the quadrature works with O(1) values
    let scale = sd.alpha * log_x + sd.log_zeta;
    let est = quad::integrate_breaks(
        |tau| {
            let s = Complex64::new(sd.alpha, tau);
            let lz = log_zeta_y(s, sd.y, ctx).expect("checked above");
            ((lz + s * log_x - scale).exp() / s).re
        },
        &[0.0, tau_max],
        Some(width),
        Tolerance::default(),
    );
    Ok(est.value / PI * scale.exp())
}

/// `H(u) = exp(u / log²(u + 1))`.
pub fn h_of_u(u: f64) -> Result<f64> {
    if !(u >= 1.0) {
        return Err(Error::invalid(format!("H(u) needs u >= 1, got {u}")));
    }
    let l = (u + 1.0).ln();
    Ok((u / (l * l)).exp())
}

/// Membership in 𝒟(κ) = {2 ≤ (log x)^κ ≤ y ≤ x}, intersected with
/// {(log y) H(u)^{-c₀} ≤ 1} when `c0` is given.
pub fn in_domain(x: f64, y: f64, kappa: f64, c0: Option<f64>) -> Result<bool> {
    if !(kappa >= 1.0) {
        return Err(Error::invalid(format!("kappa = {kappa} must be >= 1")));
    }
    if !(x > 1.0) || !(y > 1.0) {
        return Ok(false);
    }
    let lk = x.ln().powf(kappa);
    if !(2.0 <= lk && lk <= y && y <= x) {
        return Ok(false);
    }
    match c0 {
        None => Ok(true),
        Some(c0) => {
            let u = x.ln() / y.ln();
            // compare logarithms: H(u)^{-c0} underflows for large u
            let lhs = y.ln().ln() - c0 * (u / (u + 1.0).ln().powi(2));
            Ok(lhs <= 0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayProbe {
    /// `|ζ(α+iτ, y)| / ζ(α, y)`.
    pub ratio: f64,
    /// `uτ² / ((1−α)² + τ²)`.
    pub bound_shape: f64,
    /// `−log(ratio) / bound_shape`, the largest constant the decay bound allows here.
    pub fitted_c2: f64,
}

pub fn zeta_decay_probe(sd: &SaddleData, tau: f64, ctx: &SmoothContext) -> Result<DecayProbe> {
    let t = tau.abs();
    if t < 1.0 / sd.y.ln() || t > sd.y {
        return Err(Error::invalid(format!(
            "tau = {tau} outside [1/log y, y] = [{}, {}]",
            1.0 / sd.y.ln(),
            sd.y
        )));
    }
    let lz = log_zeta_y(Complex64::new(sd.alpha, tau), sd.y, ctx)?;
    let log_ratio = lz.re - sd.log_zeta;
    let ratio = log_ratio.exp();
    if ratio > 1.0 + 1e-12 {
        return Err(Error::Consistency(format!(
            "|ζ(α+iτ,y)|/ζ(α,y) = {ratio} > 1"
        )));
    }
    let d = 1.0 - sd.alpha;
    let bound_shape = sd.u * tau * tau / (d * d + tau * tau);
    Ok(DecayProbe {
        ratio,
        bound_shape,
        fitted_c2: -log_ratio / bound_shape,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorProbe {
    /// Modulus of `log ζ(α+iτ) − [log ζ(α) − iτ log x − τ²σ₂/2 − iτ³σ₃/6]`.
    pub remainder: f64,
    /// `τ⁴ σ₄`.
    pub scale: f64,
    pub fitted_c: f64,
}

pub fn taylor_remainder(sd: &SaddleData, tau: f64, ctx: &SmoothContext) -> Result<TaylorProbe> {
    let lz = log_zeta_y(Complex64::new(sd.alpha, tau), sd.y, ctx)?;
    let i = Complex64::i();
    let approx = sd.log_zeta
        - i * tau * sd.log_x()
        - tau * tau * sd.sigma[1] / 2.0
        - i * tau.powi(3) * sd.sigma[2] / 6.0;
    let remainder = (lz - approx).norm();
    let scale = tau.powi(4) * sd.sigma[3];
    Ok(TaylorProbe {
        remainder,
        scale,
        fitted_c: if scale > 0.0 { remainder / scale } else { 0.0 },
    })
}

/// `log ζ(α, y) / u`, which tends to 1 as u grows.
pub fn log_zeta_over_u(sd: &SaddleData) -> f64 {
    sd.log_zeta / sd.u
}
