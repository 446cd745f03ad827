//! Counts of smooth solutions of `a + b = c`, exact and weighted, and the predictions
//! they are compared against.
//!
//! Solutions are counted as ordered pairs `(a, b)`: `(1, 2, 3)` and `(2, 1, 3)` are two
//! solutions. `N(x, y)` is the number of ordered pairs with `a`, `b` and `c = a + b` all in
//! `S(x, y)`; `N*(x, y)` keeps those with `gcd(a, b) = 1`.

use rayon::prelude::*;
use serde::Serialize;

use crate::archimedean::{s0_phi, TestFunction};
use crate::arith::{gcd, mobius_table};
use crate::circle::dft;
use crate::circle::sums::weighted_smooth;
use crate::saddle::{self, SaddleData};
use crate::series::{self, riemann_zeta, SeriesValue};
use crate::{Error, Result, SmoothContext};

/// Default cap on `⌊x⌋` for exact counts.
pub const DEFAULT_COUNT_BUDGET: u64 = 10_000_000;

/// Largest `N(x, y)` for which [`count_primitive_exact`] walks every solution.
pub const PRIMITIVE_DIRECT_LIMIT: u64 = 400_000_000;

/// Above this many solutions [`count_primitive`] switches to the Möbius sum.
pub const PRIMITIVE_AUTO_LIMIT: u64 = 20_000_000;

/// Cap on the number of `(a, b)` pairs a weighted count may visit.
pub const WEIGHTED_PAIR_BUDGET: u64 = 4_000_000_000;

/// Default `ε` in the cutoff `D₀ = x^{(1+ε−α)/(2α−1)}`.
pub const DEFAULT_CUTOFF_EPS: f64 = 0.1;

/// Algorithm used for an exact count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    /// Double loop over smooth `a`, `b` with a membership test for `a + b`.
    Pairs,
    /// For each smooth `a`, `popcount(S ∧ (S ≫ a))` over 64-bit words.
    Bitset,
    /// Autocorrelation of the indicator of `S(x, y)` by number-theoretic transform.
    Ntt,
}

fn floor_checked(x: f64, budget: u64) -> Result<u64> {
    if !(x >= 1.0 && x.is_finite()) {
        return Err(Error::invalid(format!(
            "x = {x} must be a finite real >= 1"
        )));
    }
    let n = x.floor() as u64;
    if n > budget {
        return Err(Error::Capacity {
            what: "exact count range floor(x)",
            requested: n,
            limit: budget,
        });
    }
    Ok(n)
}

struct Members {
    n: u64,
    list: Vec<u64>,
    words: Vec<u64>,
}

impl Members {
    fn new(x: f64, y: f64, budget: u64, ctx: &SmoothContext) -> Result<Self> {
        let n = floor_checked(x, budget)?;
        let list = ctx.enumerate_smooth(x, y)?;
        let mut words = vec![0u64; n as usize / 64 + 2];
        for &m in &list {
            words[m as usize / 64] |= 1 << (m % 64);
        }
        Ok(Members { n, list, words })
    }

    fn contains(&self, m: u64) -> bool {
        self.words[m as usize / 64] >> (m % 64) & 1 == 1
    }

    /// Bits `off .. off+64` as one word.
    fn window(&self, off: u64) -> u64 {
        let i = off as usize / 64;
        let r = off % 64;
        if r == 0 {
            self.words[i]
        } else {
            (self.words[i] >> r) | (self.words[i + 1] << (64 - r))
        }
    }

    /// Words of `{b : b ∈ S, a + b ∈ S, b ≤ n − a}`, passed with their base index.
    fn partner_words(&self, a: u64, mut f: impl FnMut(u64, u64)) {
        let top = self.n - a;
        for k in 0..=top / 64 {
            let mut w = self.words[k as usize] & self.window(a + 64 * k);
            let hi = 64 * k + 63;
            if hi > top {
                w &= u64::MAX >> (hi - top);
            }
            if w != 0 {
                f(64 * k, w);
            }
        }
    }

    fn cost(&self, method: CountMethod) -> f64 {
        let psi = self.list.len() as f64;
        let n = self.n as f64;
        match method {
            CountMethod::Pairs => psi * psi / 2.0,
            CountMethod::Bitset => psi * n / 128.0 + psi,
            CountMethod::Ntt => {
                let len = (2 * self.n + 1).next_power_of_two() as f64;
                6.0 * len * len.log2()
            }
        }
    }

    fn count(&self, method: CountMethod) -> Result<u64> {
        let n = self.n;
        Ok(match method {
            CountMethod::Pairs => self
                .list
                .par_iter()
                .map(|&a| {
                    self.list
                        .iter()
                        .take_while(|&&b| b <= n - a)
                        .filter(|&&b| self.contains(a + b))
                        .count() as u64
                })
                .sum(),
            CountMethod::Bitset => self
                .list
                .par_iter()
                .filter(|&&a| a < n)
                .map(|&a| {
                    let mut c = 0u64;
                    self.partner_words(a, |_, w| c += w.count_ones() as u64);
                    c
                })
                .sum(),
            CountMethod::Ntt => {
                let reps = self.representations()?;
                self.list.iter().map(|&c| reps[c as usize]).sum()
            }
        })
    }

    /// `r(c) = #{(a, b) ∈ S² : a + b = c}` for `c ≤ n`.
    fn representations(&self) -> Result<Vec<u64>> {
        let mut ind = vec![0u64; self.n as usize + 1];
        for &m in &self.list {
            ind[m as usize] = 1;
        }
        let mut conv = dft::convolve_mod(&ind, &ind)?;
        conv.truncate(self.n as usize + 1);
        Ok(conv)
    }

    fn best_method(&self) -> CountMethod {
        [CountMethod::Pairs, CountMethod::Bitset, CountMethod::Ntt]
            .into_iter()
            .min_by(|a, b| self.cost(*a).total_cmp(&self.cost(*b)))
            .unwrap()
    }
}

/// `N(x, y)`: ordered pairs `(a, b)` with `a`, `b`, `a + b` in `S(x, y)`.
pub fn count_exact(x: f64, y: f64, ctx: &SmoothContext) -> Result<u64> {
    count_exact_with(x, y, DEFAULT_COUNT_BUDGET, ctx)
}

pub fn count_exact_with(x: f64, y: f64, budget: u64, ctx: &SmoothContext) -> Result<u64> {
    let m = Members::new(x, y, budget, ctx)?;
    m.count(m.best_method())
}

/// `N(x, y)` by a chosen algorithm; all methods give identical results.
pub fn count_exact_via(x: f64, y: f64, method: CountMethod, ctx: &SmoothContext) -> Result<u64> {
    let m = Members::new(x, y, DEFAULT_COUNT_BUDGET, ctx)?;
    m.count(method)
}

/// `N*(x, y)` by visiting every solution and testing `gcd(a, b) = 1`.
pub fn count_primitive_exact(x: f64, y: f64, ctx: &SmoothContext) -> Result<u64> {
    let m = Members::new(x, y, DEFAULT_COUNT_BUDGET, ctx)?;
    let total = m.count(m.best_method())?;
    if total > PRIMITIVE_DIRECT_LIMIT {
        return Err(Error::Capacity {
            what: "solutions visited for the primitive count",
            requested: total,
            limit: PRIMITIVE_DIRECT_LIMIT,
        });
    }
    Ok(primitive_walk(&m))
}

fn primitive_walk(m: &Members) -> u64 {
    m.list
        .par_iter()
        .filter(|&&a| a < m.n)
        .map(|&a| {
            let mut c = 0u64;
            m.partner_words(a, |base, mut w| {
                while w != 0 {
                    let b = base + w.trailing_zeros() as u64;
                    w &= w - 1;
                    if gcd(a, b) == 1 {
                        c += 1;
                    }
                }
            });
            c
        })
        .sum()
}

/// `N*(x, y) = Σ_{P⁺(d)≤y} μ(d) N(x/d, y)`, all terms read from one [`SolutionProfile`].
pub fn count_primitive_mobius(x: f64, y: f64, ctx: &SmoothContext) -> Result<u64> {
    SolutionProfile::new(x, y, ctx)?.n_star_mobius(x)
}

/// `N*(x, y)`, walking the solutions when there are few enough and using the Möbius sum otherwise.
pub fn count_primitive(x: f64, y: f64, ctx: &SmoothContext) -> Result<u64> {
    let m = Members::new(x, y, DEFAULT_COUNT_BUDGET, ctx)?;
    if m.count(m.best_method())? <= PRIMITIVE_AUTO_LIMIT {
        Ok(primitive_walk(&m))
    } else {
        count_primitive_mobius(x, y, ctx)
    }
}

/// `N(m, y)` for every `m ≤ x_max`, from the representation counts `r(c)`.
#[derive(Debug, Clone)]
pub struct SolutionProfile {
    pub x_max: u64,
    pub y: f64,
    prefix: Vec<u64>,
    smooth: Vec<bool>,
}

impl SolutionProfile {
    pub fn new(x_max: f64, y: f64, ctx: &SmoothContext) -> Result<Self> {
        let m = Members::new(x_max, y, DEFAULT_COUNT_BUDGET, ctx)?;
        let reps = if m.cost(CountMethod::Pairs) < m.cost(CountMethod::Ntt) {
            let mut r = vec![0u64; m.n as usize + 1];
            for &a in &m.list {
                for &b in m.list.iter().take_while(|&&b| a + b <= m.n) {
                    r[(a + b) as usize] += 1;
                }
            }
            r
        } else {
            m.representations()?
        };
        let mut prefix = vec![0u64; m.n as usize + 1];
        let mut smooth = vec![false; m.n as usize + 1];
        for &c in &m.list {
            smooth[c as usize] = true;
        }
        let mut acc = 0;
        for c in 1..=m.n as usize {
            if smooth[c] {
                acc += reps[c];
            }
            prefix[c] = acc;
        }
        Ok(SolutionProfile {
            x_max: m.n,
            y,
            prefix,
            smooth,
        })
    }

    /// `N(x, y)` for `x ≤ x_max`; zero below 1.
    pub fn n(&self, x: f64) -> Result<u64> {
        if x.floor() as u64 > self.x_max {
            return Err(Error::invalid(format!(
                "x = {x} beyond profile range {}",
                self.x_max
            )));
        }
        Ok(if x < 1.0 {
            0
        } else {
            self.prefix[x.floor() as usize]
        })
    }

    /// `Σ_{d ≤ x, P⁺(d) ≤ y} μ(d) N(x/d, y)`.
    pub fn n_star_mobius(&self, x: f64) -> Result<u64> {
        let n = x.floor() as u64;
        if n > self.x_max {
            return Err(Error::invalid(format!(
                "x = {x} beyond profile range {}",
                self.x_max
            )));
        }
        let mu = mobius_table(n as usize);
        let mut total: i64 = 0;
        for d in 1..=n {
            if mu[d as usize] != 0 && self.smooth[d as usize] {
                total += mu[d as usize] as i64 * self.prefix[(n / d) as usize] as i64;
            }
        }
        u64::try_from(total).map_err(|_| Error::Consistency(format!("negative Möbius sum {total}")))
    }

    /// `Σ_{d ≤ x, P⁺(d) ≤ y} N*(x/d, y)` given primitive counts for every `m ≤ x`.
    pub fn n_from_primitive(&self, x: f64, n_star: &[u64]) -> u64 {
        let n = x.floor() as u64;
        (1..=n)
            .filter(|&d| self.smooth[d as usize])
            .map(|d| n_star[(n / d) as usize])
            .sum()
    }
}

/// Both sides of `N*(x, y) = Σ_{P⁺(d)≤y} μ(d) N(x/d, y)`: a gcd walk and a Möbius sum.
pub fn mobius_check(x: f64, y: f64, ctx: &SmoothContext) -> Result<bool> {
    let direct = count_primitive_exact(x, y, ctx)?;
    let via = count_primitive_mobius(x, y, ctx)?;
    Ok(direct == via)
}

/// Primitive counts `N*(m, y)` for every `m ≤ x` by a gcd walk over all pairs.
pub fn primitive_profile(x: f64, y: f64, ctx: &SmoothContext) -> Result<Vec<u64>> {
    let m = Members::new(x, y, DEFAULT_COUNT_BUDGET, ctx)?;
    let mut r = vec![0u64; m.n as usize + 1];
    for &a in &m.list {
        if a >= m.n {
            break;
        }
        m.partner_words(a, |base, mut w| {
            while w != 0 {
                let b = base + w.trailing_zeros() as u64;
                w &= w - 1;
                if gcd(a, b) == 1 {
                    r[(a + b) as usize] += 1;
                }
            }
        });
    }
    let mut acc = 0;
    for v in r.iter_mut() {
        acc += *v;
        *v = acc;
    }
    Ok(r)
}

/// `N(A, B, C, y; Φ) = Σ Φ(a/A)Φ(b/B)Φ(c/C)` over smooth `a + b = c`.
pub fn count_weighted(
    a: f64,
    b: f64,
    c: f64,
    y: f64,
    phi: &TestFunction,
    ctx: &SmoothContext,
) -> Result<f64> {
    let ta = weighted_smooth(a, y, phi, ctx)?;
    let tb = weighted_smooth(b, y, phi, ctx)?;
    let tc = weighted_smooth(c, y, phi, ctx)?;
    let pairs = ta.len() as u64 * tb.len() as u64;
    if pairs > WEIGHTED_PAIR_BUDGET {
        return Err(Error::Capacity {
            what: "weighted pair loop",
            requested: pairs,
            limit: WEIGHTED_PAIR_BUDGET,
        });
    }
    let Some(&(c_max, _)) = tc.last() else {
        return Ok(0.0);
    };
    let mut wc = vec![0.0; c_max as usize + 1];
    for &(n, w) in &tc {
        wc[n as usize] = w;
    }
    let parts: Vec<f64> = ta
        .par_chunks(256)
        .map(|chunk| {
            let mut s = 0.0;
            for &(a, wa) in chunk {
                let mut inner = 0.0;
                for &(b, wb) in tb.iter().take_while(|t| t.0 + a <= c_max) {
                    inner += wb * wc[(a + b) as usize];
                }
                s += wa * inner;
            }
            s
        })
        .collect();
    Ok(parts.iter().sum())
}

/// `N(x, y; Φ) = N(x, x, x, y; Φ)`.
pub fn count_weighted_diag(x: f64, y: f64, phi: &TestFunction, ctx: &SmoothContext) -> Result<f64> {
    count_weighted(x, x, x, y, phi, ctx)
}

/// `N*(x, y; Φ) = Σ_{P⁺(d)≤y} μ(d) N(x/d, y; Φ)`.
pub fn count_weighted_primitive(
    x: f64,
    y: f64,
    phi: &TestFunction,
    ctx: &SmoothContext,
) -> Result<f64> {
    let d_max = (phi.k_bound() * x).floor() as u64;
    let mu = mobius_table(d_max as usize);
    let mut total = 0.0;
    for d in 1..=d_max {
        if mu[d as usize] != 0 && ctx.is_smooth(d, y)? {
            let xd = x / d as f64;
            if phi.k_bound() * xd >= 1.0 {
                total += mu[d as usize] as f64 * count_weighted_diag(xd, y, phi, ctx)?;
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictOptions {
    pub count_budget: u64,
    pub primitive: bool,
    pub p_max: u64,
}

impl Default for PredictOptions {
    fn default() -> Self {
        PredictOptions {
            count_budget: DEFAULT_COUNT_BUDGET,
            primitive: true,
            p_max: series::DEFAULT_P_MAX,
        }
    }
}

/// Exact counts next to `𝔖₀ 𝔖₁ Ψ³/x` and its primitive variants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub alpha: f64,
    pub psi: u64,
    pub test_function: TestFunction,
    pub n_exact: Option<u64>,
    pub n_star_exact: Option<u64>,
    pub n_weighted: Option<f64>,
    pub n_star_weighted: Option<f64>,
    pub s0: Option<f64>,
    pub s1: Option<SeriesValue>,
    /// `𝔖₁(α)/ζ(3α−1, y)`.
    pub s1_star_y: Option<f64>,
    /// `𝔖₁(α)/ζ(3α−1)`.
    pub s1_star: Option<f64>,
    /// `𝔖₀ 𝔖₁ Ψ³/x`.
    pub prediction: Option<f64>,
    /// `𝔖₀ 𝔖₁*(α, y) Ψ³/x`.
    pub prediction_star_y: Option<f64>,
    /// `𝔖₀ 𝔖₁*(α) Ψ³/x`.
    pub prediction_star: Option<f64>,
    /// `N(x, y)·x/Ψ³`.
    pub ratio: Option<f64>,
    /// Observed count over `prediction`: `n_exact` for the indicator, `n_weighted` for a bump.
    pub ratio_to_prediction: Option<f64>,
    pub ratio_star_to_prediction_star_y: Option<f64>,
    pub ratio_star_to_prediction_star: Option<f64>,
    pub available: bool,
    pub unavailable_reason: Option<String>,
}

pub fn predict(x: f64, y: f64, phi: &TestFunction, ctx: &SmoothContext) -> Result<CountReport> {
    predict_with(x, y, phi, &PredictOptions::default(), ctx)
}

/// Assembles a [`CountReport`]. For `y ≥ x` every integer is smooth and `α = 1` is used.
pub fn predict_with(
    x: f64,
    y: f64,
    phi: &TestFunction,
    opts: &PredictOptions,
    ctx: &SmoothContext,
) -> Result<CountReport> {
    if !(x >= 2.0 && y >= 2.0) {
        return Err(Error::invalid(format!(
            "predict needs x, y >= 2, got x = {x}, y = {y}"
        )));
    }
    let alpha = if y >= x {
        1.0
    } else {
        saddle::solve_alpha(x, y, ctx)?.alpha
    };
    let psi = ctx.psi_exact(x, y)?.count;
    let within = x.floor() as u64 <= opts.count_budget;
    let n_exact = if within {
        Some(count_exact_with(x, y, opts.count_budget, ctx)?)
    } else {
        None
    };
    let n_star_exact = if within && opts.primitive {
        Some(count_primitive(x, y, ctx)?)
    } else {
        None
    };
    let (n_weighted, n_star_weighted) =
        if phi.is_smooth() && phi.k_bound() * x <= opts.count_budget as f64 {
            let w = count_weighted_diag(x, y, phi, ctx)?;
            let ws = if opts.primitive {
                Some(count_weighted_primitive(x, y, phi, ctx)?)
            } else {
                None
            };
            (Some(w), ws)
        } else {
            (None, None)
        };
    let psi_f = psi as f64;
    let scale = psi_f.powi(3) / x;
    let mut report = CountReport {
        x,
        y,
        u: x.ln() / y.ln(),
        alpha,
        psi,
        test_function: *phi,
        n_exact,
        n_star_exact,
        n_weighted,
        n_star_weighted,
        s0: None,
        s1: None,
        s1_star_y: None,
        s1_star: None,
        prediction: None,
        prediction_star_y: None,
        prediction_star: None,
        ratio: n_exact.map(|n| n as f64 / scale),
        ratio_to_prediction: None,
        ratio_star_to_prediction_star_y: None,
        ratio_star_to_prediction_star: None,
        available: false,
        unavailable_reason: None,
    };
    if alpha <= 2.0 / 3.0 {
        report.unavailable_reason = Some(format!(
            "alpha = {alpha:.6} <= 2/3: the singular series diverges"
        ));
        return Ok(report);
    }
    let s0 = s0_phi(phi, alpha)?;
    let s1 = series::s1(alpha, opts.p_max)?;
    let zeta_y = saddle::log_zeta_derivative(0, 3.0 * alpha - 1.0, y, ctx)?.exp();
    let zeta = riemann_zeta(3.0 * alpha - 1.0)?;
    let pred = s0 * s1.value * scale;
    let pred_y = pred / zeta_y;
    let pred_inf = pred / zeta;
    let (observed, observed_star) = if phi.is_smooth() {
        (n_weighted, n_star_weighted)
    } else {
        (n_exact.map(|n| n as f64), n_star_exact.map(|n| n as f64))
    };
    report.s0 = Some(s0);
    report.s1 = Some(s1);
    report.s1_star_y = Some(s1.value / zeta_y);
    report.s1_star = Some(s1.value / zeta);
    report.prediction = Some(pred);
    report.prediction_star_y = Some(pred_y);
    report.prediction_star = Some(pred_inf);
    report.ratio_to_prediction = observed.map(|n| n / pred);
    report.ratio_star_to_prediction_star_y = observed_star.map(|n| n / pred_y);
    report.ratio_star_to_prediction_star = observed_star.map(|n| n / pred_inf);
    report.available = true;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalRatio {
    pub d: u64,
    /// `log d / log y`.
    pub t: f64,
    /// `Ψ(x/d, y) d^α / Ψ(x, y)`.
    pub ratio: f64,
    /// `(1 − t²/u²)^u`.
    pub envelope: f64,
    /// `b` with `ratio = (1 − t²/u²)^{bu}`, when `0 < t < u` and the ratio is positive.
    pub fitted_b: Option<f64>,
}

pub fn local_ratio_check(x: f64, y: f64, d: u64, ctx: &SmoothContext) -> Result<LocalRatio> {
    let sd = saddle::solve_alpha(x, y, ctx)?;
    let psi = ctx.psi_exact(x, y)?.count;
    local_ratio_with(&sd, psi, d, ctx)
}

/// [`local_ratio_check`] with `α` and `Ψ(x, y)` supplied.
pub fn local_ratio_with(
    sd: &SaddleData,
    psi: u64,
    d: u64,
    ctx: &SmoothContext,
) -> Result<LocalRatio> {
    if d == 0 {
        return Err(Error::invalid("d must be at least 1"));
    }
    let xd = sd.x / d as f64;
    let psi_d = if xd < 1.0 {
        0
    } else {
        ctx.psi_exact(xd, sd.y)?.count
    };
    let t = (d as f64).ln() / sd.y.ln();
    let ratio = psi_d as f64 * (d as f64).powf(sd.alpha) / psi as f64;
    let q = 1.0 - (t / sd.u).powi(2);
    let fitted_b = (t > 0.0 && t < sd.u && ratio > 0.0).then(|| ratio.ln() / (sd.u * q.ln()));
    Ok(LocalRatio {
        d,
        t,
        ratio,
        envelope: q.max(0.0).powf(sd.u),
        fitted_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DyadicCheck {
    pub n_exact: u64,
    /// `Σ_{k₁,k₂ ≥ k₃} N(x2^{−k₁}, x2^{−k₂}, x2^{−k₃}, y; 1_{]1/2,1]})`.
    pub dyadic_sum: f64,
    /// The same sum with the bump in place of the indicator.
    pub bump_sum: f64,
    pub blocks: usize,
}

/// Splits `N(x, y)` into dyadic blocks and bounds it by the bump-weighted blocks.
pub fn dyadic_check(x: f64, y: f64, delta: f64, ctx: &SmoothContext) -> Result<DyadicCheck> {
    let n_exact = count_exact(x, y, ctx)?;
    let half = TestFunction::indicator(0.5, 1.0)?;
    let bump = crate::archimedean::make_bump(delta)?;
    let k_max = x.log2().floor() as i32;
    let size = |k: i32| x * 2f64.powi(-k);
    let mut triples = Vec::new();
    for k3 in 0..=k_max {
        for k1 in k3..=k_max {
            for k2 in k3..=k_max {
                triples.push((k1, k2, k3));
            }
        }
    }
    let mut dyadic_sum = 0.0;
    let mut bump_sum = 0.0;
    for &(k1, k2, k3) in &triples {
        let (a, b, c) = (size(k1), size(k2), size(k3));
        dyadic_sum += count_weighted(a, b, c, y, &half, ctx)?;
        if bump.k_bound() * a >= 1.0 && bump.k_bound() * b >= 1.0 {
            bump_sum += count_weighted(a, b, c, y, &bump, ctx)?;
        }
    }
    Ok(DyadicCheck {
        n_exact,
        dyadic_sum,
        bump_sum,
        blocks: triples.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffReport {
    pub alpha: f64,
    pub u: f64,
    pub eps: f64,
    /// `δ₀ = (1 + ε − α)/(2α − 1)`.
    pub delta0: f64,
    /// `x^{δ₀}`.
    pub d0: f64,
    /// `u^{1/(3α−2)}`.
    pub d1: f64,
    pub n_star: u64,
    /// `Σ_{d ≤ D₀, P⁺(d) ≤ y} μ(d) N(x/d, y)`.
    pub partial_d0: i64,
    pub partial_d1: i64,
    /// `Σ_{d > D₁} d^{1−3α}`.
    pub tail_sum: f64,
    pub inv_u: f64,
}

/// Partial Möbius sums at the cutoffs `D₀`, `D₁`, and the tail `Σ_{d>D₁} d^{1−3α}` against `1/u`.
pub fn mobius_cutoff_diagnostic(
    x: f64,
    y: f64,
    eps: f64,
    ctx: &SmoothContext,
) -> Result<CutoffReport> {
    let sd = saddle::solve_alpha(x, y, ctx)?;
    let alpha = sd.alpha;
    if alpha <= 2.0 / 3.0 {
        return Err(Error::domain(format!("alpha = {alpha} <= 2/3")));
    }
    let profile = SolutionProfile::new(x, y, ctx)?;
    let n = profile.x_max;
    let delta0 = (1.0 + eps - alpha) / (2.0 * alpha - 1.0);
    let d0 = x.powf(delta0);
    let d1 = sd.u.powf(1.0 / (3.0 * alpha - 2.0));
    let mu = mobius_table(n as usize);
    let (mut p0, mut p1, mut all) = (0i64, 0i64, 0i64);
    for d in 1..=n {
        if mu[d as usize] != 0 && profile.smooth[d as usize] {
            let term = mu[d as usize] as i64 * profile.prefix[(n / d) as usize] as i64;
            all += term;
            if d as f64 <= d0 {
                p0 += term;
            }
            if d as f64 <= d1 {
                p1 += term;
            }
        }
    }
    let s = 3.0 * alpha - 1.0;
    let head: f64 = (1..=d1.floor() as u64).map(|d| (d as f64).powf(-s)).sum();
    Ok(CutoffReport {
        alpha,
        u: sd.u,
        eps,
        delta0,
        d0,
        d1,
        n_star: all as u64,
        partial_d0: p0,
        partial_d1: p1,
        tail_sum: riemann_zeta(s)? - head,
        inv_u: 1.0 / sd.u,
    })
}
