//! Test functions Φ, their Mellin–Fourier transforms, and the archimedean
//! double integrals weighting solutions of `a + b = c`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::quad::{self, Tolerance};
use crate::{Error, Result};

/// A weight on `(0, ∞)`: either a C^∞ bump equal to 1 on `[1/2, 1]` and supported in
/// `[(1−δ)/2, 1+δ]`, or the indicator of a half-open interval `]lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    SmoothBump { delta: f64 },
    Indicator { lo: f64, hi: f64 },
}

/// `f(t) = e^{−1/t}` for `t > 0` with its first two derivatives.
fn mollifier(t: f64) -> [f64; 3] {
    if t <= 0.0 {
        return [0.0; 3];
    }
    let f = (-1.0 / t).exp();
    let t2 = t * t;
    [f, f / t2, f * (1.0 - 2.0 * t) / (t2 * t2)]
}

/// Smooth step `S(t) = f(t)/(f(t)+f(1−t))` and its first two derivatives.
fn smooth_step(t: f64) -> [f64; 3] {
    if t <= 0.0 {
        return [0.0, 0.0, 0.0];
    }
    if t >= 1.0 {
        return [1.0, 0.0, 0.0];
    }
    let [f, f1, f2] = mollifier(t);
    let [g, h1, h2] = mollifier(1.0 - t);
    // g(t) = f(1−t): g' = −f'(1−t), g'' = f''(1−t)
    let (g1, g2) = (-h1, h2);
    let d = f + g;
    let d1 = f1 + g1;
    let n = f1 * g - f * g1;
    let n1 = f2 * g - f * g2;
    [f / d, n / (d * d), (n1 * d - 2.0 * n * d1) / (d * d * d)]
}

pub fn make_bump(delta: f64) -> Result<TestFunction> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::invalid(format!(
            "bump delta = {delta} outside (0, 1/2)"
        )));
    }
    Ok(TestFunction::SmoothBump { delta })
}

impl TestFunction {
    /// `1_{]0,1]}`.
    pub fn indicator_unit() -> Self {
        TestFunction::Indicator { lo: 0.0, hi: 1.0 }
    }

    pub fn indicator(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::invalid(format!(
                "indicator ]{lo}, {hi}] is not a valid interval"
            )));
        }
        Ok(TestFunction::Indicator { lo, hi })
    }

    /// Closed hull `[a, b]` of the support.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            TestFunction::SmoothBump { delta } => ((1.0 - delta) / 2.0, 1.0 + delta),
            TestFunction::Indicator { lo, hi } => (lo, hi),
        }
    }

    /// Right end of the support, the constant K bounding `n ≤ K x`.
    pub fn k_bound(&self) -> f64 {
        self.support().1
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self, TestFunction::SmoothBump { .. })
    }

    /// Points where the piecewise description changes.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            TestFunction::SmoothBump { delta } => vec![(1.0 - delta) / 2.0, 0.5, 1.0, 1.0 + delta],
            TestFunction::Indicator { lo, hi } => vec![lo, hi],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.derivatives(t)[0]
    }

    /// `[Φ(t), Φ'(t), Φ''(t)]`; the indicator reports zero derivatives.
    pub fn derivatives(&self, t: f64) -> [f64; 3] {
        match *self {
            TestFunction::Indicator { lo, hi } => {
                [if t > lo && t <= hi { 1.0 } else { 0.0 }, 0.0, 0.0]
            }
            TestFunction::SmoothBump { delta } => {
                let a = (1.0 - delta) / 2.0;
                if t <= a || t >= 1.0 + delta {
                    [0.0; 3]
                } else if t < 0.5 {
                    let k = 2.0 / delta;
                    let [s, s1, s2] = smooth_step((t - a) * k);
                    [s, s1 * k, s2 * k * k]
                } else if t <= 1.0 {
                    [1.0, 0.0, 0.0]
                } else {
                    let k = 1.0 / delta;
                    let [s, s1, s2] = smooth_step((1.0 + delta - t) * k);
                    [s, -s1 * k, s2 * k * k]
                }
            }
        }
    }
}

/// `e(x) = exp(2πix)`.
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MellinValue {
    pub lambda: f64,
    pub s: Complex64,
    pub value: Complex64,
}

/// `Φ̌(λ, s) = ∫₀^∞ Φ(t) e(λt) t^{s−1} dt`.
pub fn mellin(phi: &TestFunction, lambda: f64, s: Complex64) -> Result<MellinValue> {
    mellin_with(phi, lambda, s, Tolerance::default())
}

pub fn mellin_with(
    phi: &TestFunction,
    lambda: f64,
    s: Complex64,
    tol: Tolerance,
) -> Result<MellinValue> {
    let value = match *phi {
        TestFunction::Indicator { lo, hi } => {
            if lambda != 0.0 {
                return Err(Error::Unsupported(
                    "Mellin transform of an indicator at lambda != 0".into(),
                ));
            }
            if lo == 0.0 && !(s.re > 0.0) {
                return Err(Error::domain("indicator touching 0 needs Re s > 0"));
            }
            let pow = |t: f64| {
                if t == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    (s * t.ln()).exp()
                }
            };
            (pow(hi) - pow(lo)) / s
        }
        TestFunction::SmoothBump { .. } => {
            let width = 1.0 / (4.0 * (1.0 + lambda.abs() + s.im.abs()));
            quad::integrate_breaks(
                |t| (s - 1.0).expf(t) * e(lambda * t) * phi.eval(t),
                &phi.breakpoints(),
                Some(width),
                tol,
            )
            .value
        }
    };
    Ok(MellinValue { lambda, s, value })
}

/// `∫ |Φ̌(λ, σ + iτ)| dτ` over all real τ.
///
/// With `t = e^v` the transform is the Fourier transform of
/// `h(v) = Φ(e^v) e(λe^v) e^{σv}`, a smooth function of compact support, so a
/// trapezoid rule evaluated by FFT gives every τ at once with spectral accuracy.
pub fn mellin_l1_probe(phi: &TestFunction, lambda: f64, sigma: f64) -> Result<f64> {
    let (dtau, values) = mellin_tau_grid(phi, lambda, sigma)?;
    Ok(values.iter().map(|z| z.norm()).sum::<f64>() * dtau)
}

/// `|Φ̌(λ, σ + iτ_k)|` on the grid `τ_k = k·dtau` (wrapped: indices past the
/// midpoint stand for negative τ). Returns `(dtau, magnitudes)`.
pub fn mellin_tau_grid(
    phi: &TestFunction,
    lambda: f64,
    sigma: f64,
) -> Result<(f64, Vec<Complex64>)> {
    let TestFunction::SmoothBump { delta } = *phi else {
        return Err(Error::Unsupported(
            "tau-grid transform needs a smooth test function".into(),
        ));
    };
    let (a, b) = phi.support();
    let (v0, v1) = (a.ln(), b.ln());
    let freq = 1.0 + 2.0 * PI * lambda.abs() * b;
    let min_pts = ((v1 - v0) * 32.0 * freq.max(8.0 / delta)).ceil() as usize;
    let n = min_pts.max(4096).next_power_of_two();
    let dv = (v1 - v0) / n as f64;
    let m = 16 * n;
    let mut buf: Vec<Complex64> = (0..m)
        .map(|j| {
            if j >= n {
                return Complex64::new(0.0, 0.0);
            }
            let v = v0 + j as f64 * dv;
            let t = v.exp();
            e(lambda * t) * (phi.eval(t) * (sigma * v).exp())
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let dtau = 2.0 * PI / (m as f64 * dv);
    for (k, z) in buf.iter_mut().enumerate() {
        let tau = if k < m / 2 {
            k as f64
        } else {
            k as f64 - m as f64
        } * dtau;
        *z *= Complex64::from_polar(dv, tau * v0);
    }
    Ok((dtau, buf))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 2.0 / 3.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "alpha = {alpha} outside (2/3, 1] where the archimedean factor is defined"
        )));
    }
    Ok(())
}

/// `∬ Φ(m₁t₁)Φ(m₂t₂)Φ(m₃w) t₁^{a−1} t₂^{b−1} w^{c−1} dt₁dt₂`, `w = l₁t₁ + l₂t₂`.
///
/// A variable whose range reaches 0 is replaced by `v = t^e`, which turns
/// `t^{e−1}dt` into `dv/e` and removes the endpoint singularity.
fn double_integral(
    phi: &TestFunction,
    m: [f64; 3],
    l: [f64; 2],
    ex: [f64; 3],
    tol: Tolerance,
) -> f64 {
    let (lo, hi) = phi.support();
    let br = phi.breakpoints();
    let (r1, r2) = ((lo / m[0], hi / m[0]), (lo / m[1], hi / m[1]));
    let (w_lo, w_hi) = (lo / m[2], hi / m[2]);
    let inner_tol = Tolerance {
        rel: tol.rel * 0.05,
        abs: tol.abs * 0.05,
    };

    let inner = |t1: f64| -> f64 {
        let phi1 = phi.eval(m[0] * t1);
        if phi1 == 0.0 && phi.is_smooth() {
            return 0.0;
        }
        let base = l[0] * t1;
        let a = r2.0.max((w_lo - base) / l[1]);
        let b = r2.1.min((w_hi - base) / l[1]);
        if !(b > a) {
            return 0.0;
        }
        let f = |t2: f64| {
            let w = base + l[1] * t2;
            phi.eval(m[1] * t2) * phi.eval(m[2] * w) * w.powf(ex[2] - 1.0)
        };
        let mut cuts: Vec<f64> = br
            .iter()
            .flat_map(|&z| [z / m[1], (z / m[2] - base) / l[1]])
            .filter(|&z| z > a && z < b)
            .collect();
        cuts.push(a);
        cuts.push(b);
        cuts.sort_by(f64::total_cmp);
        let v = if a <= 0.0 {
            let e = ex[1];
            let vb: Vec<f64> = cuts.iter().map(|&t| t.max(0.0).powf(e)).collect();
            quad::integrate_breaks(|v: f64| f(v.powf(1.0 / e)), &vb, None, inner_tol).value / e
        } else {
            quad::integrate_breaks(
                |t2: f64| f(t2) * t2.powf(ex[1] - 1.0),
                &cuts,
                None,
                inner_tol,
            )
            .value
        };
        phi1 * v
    };

    // outer break points: support edges in t₁ and where the inner limits switch
    let mut cuts: Vec<f64> = Vec::new();
    for &z in &br {
        cuts.push(z / m[0]);
        for &z2 in &br {
            cuts.push((z / m[2] - l[1] * z2 / m[1]) / l[0]);
        }
    }
    cuts.retain(|&z| z > r1.0 && z < r1.1);
    cuts.push(r1.0);
    cuts.push(r1.1);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    if r1.0 <= 0.0 {
        let e = ex[0];
        let vb: Vec<f64> = cuts.iter().map(|&t| t.max(0.0).powf(e)).collect();
        quad::integrate_breaks(|v: f64| inner(v.powf(1.0 / e)), &vb, None, tol).value / e
    } else {
        quad::integrate_breaks(|t1: f64| inner(t1) * t1.powf(ex[0] - 1.0), &cuts, None, tol).value
    }
}

/// `α_Aα_Bα_C ∬ Φ(t₁)Φ(t₂)Φ(λ₁t₁+λ₂t₂) t₁^{α_A−1} t₂^{α_B−1} (λ₁t₁+λ₂t₂)^{α_C−1}`
/// with `λ₁ = A/C`, `λ₂ = B/C`.
pub fn s0_general(
    phi: &TestFunction,
    a: f64,
    b: f64,
    c: f64,
    alpha_a: f64,
    alpha_b: f64,
    alpha_c: f64,
) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::invalid(format!(
            "sizes A = {a}, B = {b}, C = {c} must be positive"
        )));
    }
    for al in [alpha_a, alpha_b, alpha_c] {
        check_alpha(al)?;
    }
    let v = double_integral(
        phi,
        [1.0; 3],
        [a / c, b / c],
        [alpha_a, alpha_b, alpha_c],
        Tolerance::default(),
    );
    Ok(alpha_a * alpha_b * alpha_c * v)
}

/// 𝔖₀(Φ, α).
pub fn s0_phi(phi: &TestFunction, alpha: f64) -> Result<f64> {
    s0_general(phi, 1.0, 1.0, 1.0, alpha, alpha, alpha)
}

/// 𝔖₀(1_{]0,1]}, α): `α³ ∬_{t₁+t₂≤1} (t₁t₂(t₁+t₂))^{α−1}`.
pub fn s0_indicator(alpha: f64) -> Result<f64> {
    s0_phi(&TestFunction::indicator_unit(), alpha)
}

/// The dyadic form `∬ Φ(v₁2^{k₁})Φ(v₂2^{k₂})Φ((v₁+v₂)2^{k₃}) v₁^{α_A−1} v₂^{α_B−1} (v₁+v₂)^{α_C−1}`.
pub fn dyadic_v_integral(phi: &TestFunction, k: [u32; 3], alphas: [f64; 3]) -> Result<f64> {
    for al in alphas {
        check_alpha(al)?;
    }
    let m = k.map(|k| 2f64.powi(k as i32));
    Ok(double_integral(
        phi,
        m,
        [1.0, 1.0],
        alphas,
        Tolerance::default(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarlo {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Independent estimate of 𝔖₀(Φ, α). Coordinates whose support reaches 0 are drawn as
/// `t = hi·U^{1/α}` (density ∝ t^{α−1}); otherwise uniformly on the support.
/// Blocks use their own ChaCha stream, so the result depends only on `seed`.
pub fn s0_monte_carlo(
    phi: &TestFunction,
    alpha: f64,
    samples: u64,
    seed: u64,
) -> Result<MonteCarlo> {
    check_alpha(alpha)?;
    if samples < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    const BLOCK: u64 = 1 << 16;
    let (lo, hi) = phi.support();
    let importance = lo <= 0.0;
    let blocks = samples.div_ceil(BLOCK);
    let sums: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(blk);
            let count = BLOCK.min(samples - blk * BLOCK);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                let (t1, t2, w12);
                if importance {
                    t1 = hi * rng.random::<f64>().powf(1.0 / alpha);
                    t2 = hi * rng.random::<f64>().powf(1.0 / alpha);
                    // α² (t₁t₂)^{α−1} dt₁dt₂ = hi^{2α} dU₁dU₂
                    w12 = hi.powf(2.0 * alpha) / (alpha * alpha);
                } else {
                    t1 = lo + (hi - lo) * rng.random::<f64>();
                    t2 = lo + (hi - lo) * rng.random::<f64>();
                    w12 = (hi - lo) * (hi - lo) * (t1 * t2).powf(alpha - 1.0);
                }
                let w = t1 + t2;
                let v = alpha.powi(3)
                    * w12
                    * phi.eval(t1)
                    * phi.eval(t2)
                    * phi.eval(w)
                    * w.powf(alpha - 1.0);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples as f64;
    let mean = s / n;
    let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(MonteCarlo {
        mean,
        std_error: (var / n).sqrt(),
        samples,
    })
}
