//! Exponential sums over smooth numbers and their major-arc main terms.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::characters::{Character, CharacterTable};
use super::dft;
use crate::archimedean::{mellin, TestFunction};
use crate::arith::{euler_phi, factorize, gcd, mobius};
use crate::saddle::{self, SaddleData};
use crate::smooth::{primes_up_to, smooth_dfs};
use crate::{Error, Result, SmoothContext};

pub use crate::archimedean::e;

/// Default cap on `K·x`, the largest integer a weighted sum visits.
pub const DEFAULT_SUM_BUDGET: u64 = 10_000_000;

/// Largest modulus accepted by [`character_identity_check`].
pub const IDENTITY_MAX_Q: u64 = 200;

fn budget_limit(what: &'static str, kx: f64) -> Result<u64> {
    if !(kx.is_finite() && kx >= 0.0) {
        return Err(Error::invalid(format!("{what}: bad range {kx}")));
    }
    let n = kx.floor() as u64;
    if n > DEFAULT_SUM_BUDGET {
        return Err(Error::Capacity {
            what,
            requested: n,
            limit: DEFAULT_SUM_BUDGET,
        });
    }
    Ok(n)
}

/// `(n, Φ(n/x))` for every y-smooth `n` with `Φ(n/x) ≠ 0`, ascending.
pub fn weighted_smooth(
    x: f64,
    y: f64,
    phi: &TestFunction,
    ctx: &SmoothContext,
) -> Result<Vec<(u64, f64)>> {
    if !(x > 0.0) {
        return Err(Error::invalid(format!("size {x} must be positive")));
    }
    let (lo, hi) = phi.support();
    let n_max = budget_limit("weighted smooth sum", hi * x)?;
    let mut out = Vec::new();
    if n_max == 0 {
        return Ok(out);
    }
    let n_min = (lo * x).floor() as u64;
    ctx.for_each_smooth(n_max as f64, y, |n| {
        if n > n_min {
            let w = phi.eval(n as f64 / x);
            if w != 0.0 {
                out.push((n, w));
            }
        }
    })?;
    Ok(out)
}

/// `E_Φ(x, y; ϑ) = Σ_{P⁺(n)≤y} e(nϑ) Φ(n/x)`.
pub fn e_phi(
    x: f64,
    y: f64,
    theta: f64,
    phi: &TestFunction,
    ctx: &SmoothContext,
) -> Result<Complex64> {
    let theta = theta - theta.floor();
    let terms = weighted_smooth(x, y, phi, ctx)?;
    Ok(terms.iter().map(|&(n, w)| e(reduce(n, theta)) * w).sum())
}

/// `nϑ mod 1`, computed so large `n` keep the fractional accuracy of `ϑ`.
fn reduce(n: u64, theta: f64) -> f64 {
    // θ = k/2²⁶ + r with |r| ≤ 2⁻²⁷; the first part is reduced in integers
    const SCALE: f64 = (1u64 << 26) as f64;
    let k = (theta * SCALE).round();
    let r = theta - k / SCALE;
    let head = ((n as u128 * k as u128) & ((1 << 26) - 1)) as f64 / SCALE;
    (head + n as f64 * r).rem_euclid(1.0)
}

/// `E_Φ(x, y; a/q + β)` with the rational part of the phase reduced exactly.
pub fn e_phi_rational(
    x: f64,
    y: f64,
    a: u64,
    q: u64,
    beta: f64,
    phi: &TestFunction,
    ctx: &SmoothContext,
) -> Result<Complex64> {
    if q == 0 {
        return Err(Error::invalid("q must be positive"));
    }
    let terms = weighted_smooth(x, y, phi, ctx)?;
    Ok(terms
        .iter()
        .map(|&(n, w)| {
            let r = ((n % q) * (a % q) % q) as f64 / q as f64;
            e(r) * e(reduce(n, beta - beta.floor())) * w
        })
        .sum())
}

/// `∫₀¹ E_Φ(A; ϑ)E_Φ(B; ϑ)E_Φ(C; −ϑ) dϑ`, evaluated as the average over the `L`-th
/// roots of unity of the product of the three length-`L` DFTs, `L > K(A+B)`.
/// For such `L` no index wraps, so the average is exactly the coefficient pairing.
pub fn triple_product(
    a: f64,
    b: f64,
    c: f64,
    y: f64,
    phi: &TestFunction,
    ctx: &SmoothContext,
) -> Result<f64> {
    let k = phi.k_bound();
    let len = ((k * a).floor() as usize + (k * b).floor() as usize + 1).next_power_of_two();
    if len > dft::FFT_MAX_LEN {
        return Err(Error::Capacity {
            what: "DFT length",
            requested: len as u64,
            limit: dft::FFT_MAX_LEN as u64,
        });
    }
    let dense = |size: f64, cap: usize| -> Result<Vec<f64>> {
        let mut w = vec![0.0; cap];
        for (n, v) in weighted_smooth(size, y, phi, ctx)? {
            if (n as usize) < cap {
                w[n as usize] = v;
            }
        }
        Ok(w)
    };
    let fa = dft::dft(&dense(a, len)?, len)?;
    let fb = dft::dft(&dense(b, len)?, len)?;
    let fc = dft::dft(&dense(c, len)?, len)?;
    let total: Complex64 = fa
        .iter()
        .zip(&fb)
        .zip(&fc)
        .map(|((x, y), z)| x * y * z.conj())
        .sum();
    Ok(total.re / len as f64)
}

/// Integer evaluation of the same pairing for an indicator weight: the 0/1 sequences
/// for `A` and `B` are convolved by NTT and the result is paired with the one for `C`.
pub fn triple_product_exact(
    a: f64,
    b: f64,
    c: f64,
    y: f64,
    phi: &TestFunction,
    ctx: &SmoothContext,
) -> Result<u64> {
    if phi.is_smooth() {
        return Err(Error::Unsupported(
            "exact triple product needs 0/1 weights (an indicator)".into(),
        ));
    }
    let ind = |size: f64| -> Result<Vec<u64>> {
        let terms = weighted_smooth(size, y, phi, ctx)?;
        let n = terms.last().map_or(0, |t| t.0 as usize);
        let mut v = vec![0u64; n + 1];
        for (m, _) in terms {
            v[m as usize] = 1;
        }
        Ok(v)
    };
    let (va, vb, vc) = (ind(a)?, ind(b)?, ind(c)?);
    let conv = if a == b {
        dft::convolve_mod(&va, &va)?
    } else {
        dft::convolve_mod(&va, &vb)?
    };
    Ok(conv.iter().zip(&vc).map(|(x, y)| x * y).sum())
}

fn divisor_weights(q: u64) -> Vec<f64> {
    // weight[g] for g | q is μ(q/g)/φ(q/g); zero elsewhere
    let mut w = vec![0.0; q as usize + 1];
    for g in 1..=q {
        if q.is_multiple_of(g) {
            let r = q / g;
            w[g as usize] = mobius(r) as f64 / euler_phi(r) as f64;
        }
    }
    w
}

/// `M_Φ(x, y; q, β) = Σ_{P⁺(n)≤y} μ(q/(q,n))/φ(q/(q,n)) e(nβ) Φ(n/x)`.
pub fn m_phi(
    x: f64,
    y: f64,
    q: u64,
    beta: f64,
    phi: &TestFunction,
    ctx: &SmoothContext,
) -> Result<Complex64> {
    if q == 0 {
        return Err(Error::invalid("q must be positive"));
    }
    let w = divisor_weights(q);
    let b = beta - beta.floor();
    let terms = weighted_smooth(x, y, phi, ctx)?;
    Ok(terms
        .iter()
        .map(|&(n, v)| e(reduce(n, b)) * (w[gcd(n, q) as usize] * v))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiSource {
    Exact,
    Estimate,
}

/// `∏_{p | q₀} (1 − (p^s − 1)/(p − 1))`.
pub fn local_product(q0: u64, s: Complex64) -> Complex64 {
    factorize(q0)
        .iter()
        .map(|&(p, _)| {
            let pf = p as f64;
            1.0 - ((s * pf.ln()).exp() - 1.0) / (pf - 1.0)
        })
        .product()
}

fn check_smooth_q0(q0: u64, y: f64) -> Result<()> {
    if q0 == 0 {
        return Err(Error::invalid("q0 must be positive"));
    }
    if factorize(q0).last().is_some_and(|&(p, _)| p as f64 > y) {
        return Err(Error::invalid(format!("q0 = {q0} is not {y}-smooth")));
    }
    Ok(())
}

/// `α q₀^{−α} ∏_{p|q₀}(1 − (p^α − 1)/(p − 1)) Φ̌(βx, α) Ψ(x, y)`.
#[allow(clippy::too_many_arguments)]
pub fn m_tilde_phi(
    x: f64,
    y: f64,
    q0: u64,
    beta: f64,
    phi: &TestFunction,
    sd: &SaddleData,
    source: PsiSource,
    ctx: &SmoothContext,
) -> Result<Complex64> {
    check_smooth_q0(q0, y)?;
    let alpha = Complex64::new(sd.alpha, 0.0);
    let psi = match source {
        PsiSource::Exact => ctx.psi_exact(x, y)?.count as f64,
        PsiSource::Estimate => saddle::ht_psi_estimate(sd),
    };
    let transform = mellin(phi, beta * x, alpha)?.value;
    let q0f = q0 as f64;
    Ok(transform * local_product(q0, alpha) * (sd.alpha * q0f.powf(-sd.alpha) * psi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwistedZeta {
    pub closed_form: Complex64,
    pub direct: Complex64,
    /// Truncation point of the direct sum.
    pub n_max: u64,
    /// `ζ(σ, y) − Σ_{n ≤ n_max} n^{−σ}`, which bounds the omitted part of the direct sum.
    pub tail_bound: f64,
    pub abs_diff: f64,
}

/// `ζ(s; y, q₀) = q₀^{−s} ∏_{p|q₀}(1 − (p^s − 1)/(p − 1)) ζ(s, y)`, checked against the
/// truncated Dirichlet series `Σ μ(q₀/(q₀,n))/φ(q₀/(q₀,n)) n^{−s}`.
pub fn zeta_y_twisted(s: Complex64, y: f64, q0: u64, ctx: &SmoothContext) -> Result<Complex64> {
    let t = zeta_y_twisted_check(s, y, q0, ctx)?;
    if t.abs_diff > t.tail_bound + 1e-10 * (1.0 + t.closed_form.norm()) {
        return Err(Error::Consistency(format!(
            "twisted zeta closed form differs from the direct sum by {} (tail bound {})",
            t.abs_diff, t.tail_bound
        )));
    }
    Ok(t.closed_form)
}

pub fn zeta_y_twisted_check(
    s: Complex64,
    y: f64,
    q0: u64,
    ctx: &SmoothContext,
) -> Result<TwistedZeta> {
    check_smooth_q0(q0, y)?;
    let zeta = saddle::zeta_y(s, y, ctx)?;
    let closed = (-s * (q0 as f64).ln()).exp() * local_product(q0, s) * zeta;
    let zeta_re = saddle::zeta_y(Complex64::new(s.re, 0.0), y, ctx)?.re;
    let primes = primes_up_to(y.floor() as u64);
    let w = divisor_weights(q0);
    let target = 1e-9 * (1.0 + closed.norm());
    let mut n_max = 1_000_000u64;
    loop {
        let mut smooth = smooth_dfs(n_max, &primes, 20_000_000)?;
        smooth.sort_unstable();
        let mut direct = Complex64::new(0.0, 0.0);
        let mut partial = 0.0;
        for &n in &smooth {
            let ln = (n as f64).ln();
            partial += (-s.re * ln).exp();
            let c = w[gcd(n, q0) as usize];
            if c != 0.0 {
                direct += (-s * ln).exp() * c;
            }
        }
        let tail_bound = (zeta_re - partial).max(0.0);
        let next = n_max.saturating_mul(1000);
        if tail_bound <= target || next > 1_000_000_000_000_000_000 {
            return Ok(TwistedZeta {
                closed_form: closed,
                direct,
                n_max,
                tail_bound,
                abs_diff: (closed - direct).norm(),
            });
        }
        n_max = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_diff: f64,
}

/// Both sides of the decomposition of `E_Φ(x, y; a/q + β)` into Dirichlet characters:
/// `Σ_{d|q, P⁺(d)≤y} φ(q/d)^{−1} Σ_{χ mod q/d} χ(a) τ(χ̄) Σ_{P⁺(m)≤y} e(mdβ) χ(m) Φ(md/x)`.
#[allow(clippy::too_many_arguments)]
pub fn character_identity_check(
    x: f64,
    y: f64,
    q: u64,
    a: u64,
    beta: f64,
    phi: &TestFunction,
    ctx: &SmoothContext,
) -> Result<IdentityCheck> {
    if q == 0 || q > IDENTITY_MAX_Q {
        return Err(Error::Capacity {
            what: "character table modulus",
            requested: q,
            limit: IDENTITY_MAX_Q,
        });
    }
    if gcd(a, q) != 1 {
        return Err(Error::invalid(format!("a = {a} is not coprime to q = {q}")));
    }
    let lhs = e_phi_rational(x, y, a, q, beta, phi, ctx)?;
    let terms = weighted_smooth(x, y, phi, ctx)?;
    let b = beta - beta.floor();
    let mut rhs = Complex64::new(0.0, 0.0);
    for d in 1..=q {
        if !q.is_multiple_of(d) || factorize(d).last().is_some_and(|&(p, _)| p as f64 > y) {
            continue;
        }
        let r = q / d;
        // residue-class sums R[m mod r] = Σ e(mdβ) Φ(md/x) over smooth m, using n = md
        let mut classes = vec![Complex64::new(0.0, 0.0); r as usize];
        for &(n, w) in &terms {
            if n % d == 0 {
                let m = n / d;
                classes[(m % r) as usize] += e(reduce(n, b)) * w;
            }
        }
        let table = CharacterTable::new(r)?;
        let mut inner = Complex64::new(0.0, 0.0);
        for (chi, tau) in table.characters.iter().zip(&table.gauss_sums) {
            let s: Complex64 = classes.iter().zip(&chi.values).map(|(c, v)| c * v).sum();
            inner += chi.eval(a) * tau * s;
        }
        rhs += inner / euler_phi(r) as f64;
    }
    Ok(IdentityCheck {
        lhs,
        rhs,
        abs_diff: (lhs - rhs).norm(),
    })
}

/// `L(s, χ; y) = ∏_{p≤y} (1 − χ(p) p^{−s})^{−1}`.
pub fn l_function_y(
    s: Complex64,
    chi: &Character,
    y: f64,
    ctx: &SmoothContext,
) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::domain(format!("Re s = {} must be positive", s.re)));
    }
    if chi.values.len() as u64 != chi.modulus {
        return Err(Error::invalid("character table does not match its modulus"));
    }
    let (primes, logs) = ctx.primes_le(y)?;
    let log_l: Complex64 = primes
        .par_iter()
        .zip(logs.par_iter())
        .map(|(&p, &l)| -(1.0 - chi.eval(p) * (-s * l).exp()).ln())
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    Ok(log_l.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LProbe {
    pub abs_l: f64,
    /// `(q(1 + |τ|))^{0.1}`.
    pub reference: f64,
    pub ratio: f64,
}

/// `|L(s, χ; y)|` next to `(q(1+|τ|))^{0.1}`; a diagnostic only.
pub fn l_function_probe(
    s: Complex64,
    chi: &Character,
    y: f64,
    ctx: &SmoothContext,
) -> Result<LProbe> {
    let abs_l = l_function_y(s, chi, y, ctx)?.norm();
    let reference = (chi.modulus as f64 * (1.0 + s.im.abs())).powf(0.1);
    Ok(LProbe {
        abs_l,
        reference,
        ratio: abs_l / reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archimedean::make_bump;

    fn ctx() -> SmoothContext {
        SmoothContext::new(1000, 200_000).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn e_phi_basic_properties() {
        let ctx = ctx();
        let phi = make_bump(0.2).unwrap();
        let at0 = e_phi(1000.0, 30.0, 0.0, &phi, &ctx).unwrap();
        let direct: f64 = (1..=1200u64)
            .filter(|&n| crate::smooth::is_smooth(n, 30.0).unwrap())
            .map(|n| phi.eval(n as f64 / 1000.0))
            .sum();
        assert!((at0.re - direct).abs() < 1e-9 && at0.im == 0.0);
        for theta in [0.1, 0.37, 0.5, 0.9001] {
            let a = e_phi(1000.0, 30.0, theta, &phi, &ctx).unwrap();
            let b = e_phi(1000.0, 30.0, 1.0 - theta, &phi, &ctx).unwrap();
            assert!((a - b.conj()).norm() < 1e-9);
            assert!(a.norm() <= at0.re + 1e-9);
        }
    }

    #[test]
    fn reduce_keeps_precision() {
        let theta = 0.123_456_789_012_345_6f64;
        // θ·2⁶⁴ is an integer for this θ, so nθ mod 1 is exact in u128
        let m = (theta * 2f64.powi(64)) as u128;
        for n in [1u64, 12345, 1 << 40, 98_765_432_109] {
            let want = ((n as u128 * m) % (1u128 << 64)) as f64 / 2f64.powi(64);
            assert!((reduce(n, theta) - want).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn triple_product_matches_direct_count() {
        let ctx = ctx();
        let phi = make_bump(0.2).unwrap();
        let t = triple_product(1000.0, 1000.0, 1000.0, 30.0, &phi, &ctx).unwrap();
        let terms = weighted_smooth(1000.0, 30.0, &phi, &ctx).unwrap();
        let map: std::collections::HashMap<u64, f64> = terms.iter().cloned().collect();
        let mut direct = 0.0;
        for &(a, wa) in &terms {
            for &(b, wb) in &terms {
                if let Some(wc) = map.get(&(a + b)) {
                    direct += wa * wb * wc;
                }
            }
        }
        assert!(((t - direct) / direct).abs() < 1e-9, "{t} vs {direct}");
        // C beyond K(A+B): nothing reachable
        let far = triple_product(100.0, 100.0, 1000.0, 30.0, &phi, &ctx).unwrap();
        assert!(far.abs() < 1e-9);
    }

    #[test]
    fn exact_triple_product_small() {
        let ctx = ctx();
        let ind = TestFunction::indicator_unit();
        assert_eq!(
            triple_product_exact(4.0, 4.0, 4.0, 2.0, &ind, &ctx).unwrap(),
            2
        );
        assert_eq!(
            triple_product_exact(1000.0, 1000.0, 1000.0, 1000.0, &ind, &ctx).unwrap(),
            499_500
        );
        assert!(
            triple_product_exact(10.0, 10.0, 10.0, 2.0, &make_bump(0.1).unwrap(), &ctx).is_err()
        );
    }

    #[test]
    fn m_phi_special_cases() {
        let ctx = ctx();
        let phi = make_bump(0.3).unwrap();
        let beta = 1e-4;
        let m1 = m_phi(1000.0, 30.0, 1, beta, &phi, &ctx).unwrap();
        let e1 = e_phi(1000.0, 30.0, beta, &phi, &ctx).unwrap();
        assert!((m1 - e1).norm() < 1e-9);

        // q = p > y prime, β = 0: two-case Möbius
        let p = 37u64;
        let mp = m_phi(1000.0, 30.0, p, 0.0, &phi, &ctx).unwrap();
        let terms = weighted_smooth(1000.0, 30.0, &phi, &ctx).unwrap();
        let on = |hit: bool| -> f64 {
            terms
                .iter()
                .filter(|t| (t.0 % p == 0) == hit)
                .map(|t| t.1)
                .sum()
        };
        let want = on(true) - on(false) / (p - 1) as f64;
        assert!((mp.re - want).abs() < 1e-9 && mp.im.abs() < 1e-12);

        // independent loop with per-n gcd for q = 6
        let q = 6u64;
        let beta = 1e-4;
        let got = m_phi(1000.0, 30.0, q, beta, &phi, &ctx).unwrap();
        let mut want = c(0.0, 0.0);
        for n in 1..=1300u64 {
            if !crate::smooth::is_smooth(n, 30.0).unwrap() {
                continue;
            }
            let r = q / gcd(n, q);
            let coef = mobius(r) as f64 / euler_phi(r) as f64;
            want += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * n as f64 * beta)
                * coef
                * phi.eval(n as f64 / 1000.0);
        }
        assert!((got - want).norm() < 1e-9);
    }

    #[test]
    fn m_phi_factorises_over_rough_part() {
        let ctx = ctx();
        let phi = make_bump(0.25).unwrap();
        let y = 10.0;
        for q in 1..=200u64 {
            let (q0, q1) = crate::circle::arcs::split_smooth(q, y);
            let lhs = m_phi(2000.0, y, q, 3e-4, &phi, &ctx).unwrap();
            let base = m_phi(2000.0, y, q0, 3e-4, &phi, &ctx).unwrap();
            let rhs = base * (mobius(q1) as f64 / euler_phi(q1) as f64);
            assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + base.norm()), "q={q}");
        }
    }

    #[test]
    fn m_tilde_examples() {
        let ctx = SmoothContext::new(100, 1_100_000).unwrap();
        let phi = make_bump(0.2).unwrap();
        let sd = saddle::solve_alpha(1e6, 100.0, &ctx).unwrap();
        let mt = m_tilde_phi(1e6, 100.0, 1, 0.0, &phi, &sd, PsiSource::Exact, &ctx).unwrap();
        let psi = ctx.psi_exact(1e6, 100.0).unwrap().count as f64;
        let want = sd.alpha * mellin(&phi, 0.0, c(sd.alpha, 0.0)).unwrap().value.re * psi;
        assert!((mt.re - want).abs() < 1e-9 * want);
        let m = m_phi(1e6, 100.0, 1, 0.0, &phi, &ctx).unwrap();
        let r = m.re / mt.re;
        assert!((0.8..=1.25).contains(&r), "ratio {r}");
        assert!(m_tilde_phi(1e6, 100.0, 101, 0.0, &phi, &sd, PsiSource::Exact, &ctx).is_err());

        // local factor at a prime, two ways
        let p = 97u64;
        let a = 0.7;
        let direct = 1.0 - ((p as f64).powf(a) - 1.0) / (p as f64 - 1.0);
        let via_log = 1.0 - (a * (p as f64).ln()).exp_m1() / (p as f64 - 1.0);
        assert!((local_product(p, c(a, 0.0)).re - direct).abs() < 1e-14);
        assert!((direct - via_log).abs() < 1e-14);
    }

    #[test]
    fn twisted_zeta_cases() {
        let ctx = ctx();
        let z = |s: Complex64, q0| zeta_y_twisted(s, 10.0, q0, &ctx).unwrap();
        let s = c(1.1, 0.3);
        assert!((z(s, 1) - saddle::zeta_y(s, 10.0, &ctx).unwrap()).norm() < 1e-12);
        for p in [2u64, 3, 5, 7] {
            let want = (((1.0 - s) * (p as f64).ln()).exp() - 1.0) / (p as f64 - 1.0)
                * saddle::zeta_y(s, 10.0, &ctx).unwrap();
            assert!((z(s, p) - want).norm() < 1e-12);
        }
        let chk = zeta_y_twisted_check(c(1.3, 0.0), 10.0, 6, &ctx).unwrap();
        assert!(chk.abs_diff <= chk.tail_bound + 1e-12);
        for q0 in [4u64, 12] {
            let t = zeta_y_twisted_check(c(0.9, 0.5), 10.0, q0, &ctx).unwrap();
            assert!(t.abs_diff <= t.tail_bound + 1e-10, "q0={q0}");
        }
        assert!(zeta_y_twisted(s, 10.0, 11, &ctx).is_err());
    }

    #[test]
    fn character_identity_small() {
        let ctx = ctx();
        let ind = TestFunction::indicator_unit();
        let bump = make_bump(0.2).unwrap();
        for (q, a, beta, phi) in [
            (1, 0, 0.001, &ind),
            (3, 1, 0.0, &ind),
            (4, 3, 0.0, &ind),
            (12, 5, 2e-3, &bump),
            (30, 7, -1e-3, &bump),
        ] {
            let r = character_identity_check(100.0, 10.0, q, a, beta, phi, &ctx).unwrap();
            assert!(r.abs_diff <= 1e-8 * (1.0 + r.lhs.norm()), "q={q}: {r:?}");
        }
        assert!(character_identity_check(100.0, 10.0, 6, 3, 0.0, &ind, &ctx).is_err());
        assert!(character_identity_check(100.0, 10.0, 201, 1, 0.0, &ind, &ctx).is_err());
    }

    #[test]
    fn l_function_cases() {
        let ctx = ctx();
        let s = c(0.8, 2.0);
        let one = CharacterTable::new(1).unwrap();
        let l = l_function_y(s, one.principal(), 100.0, &ctx).unwrap();
        assert!((l - saddle::zeta_y(s, 100.0, &ctx).unwrap()).norm() < 1e-10);

        let t3 = CharacterTable::new(3).unwrap();
        let chi = &t3.characters[1];
        let l1 = l_function_y(c(1.0, 0.0), chi, 100.0, &ctx).unwrap();
        // direct smooth sum with the tail bounded by the principal series at σ
        let s2 = c(1.5, 0.0);
        let l2 = l_function_y(s2, chi, 100.0, &ctx).unwrap();
        let mut direct = c(0.0, 0.0);
        let mut partial = 0.0;
        ctx.for_each_smooth(200_000.0, 100.0, |n| {
            direct += chi.eval(n) * (n as f64).powf(-1.5);
            partial += (n as f64).powf(-1.5);
        })
        .unwrap();
        let tail = saddle::zeta_y(s2, 100.0, &ctx).unwrap().re - partial;
        assert!((l2 - direct).norm() <= tail);
        assert!(l1.re > 0.0);

        let t7 = CharacterTable::new(7).unwrap();
        for chi in &t7.characters {
            let a = l_function_y(s, chi, 100.0, &ctx).unwrap().norm();
            let b = l_function_y(s.conj(), &chi.conj(), 100.0, &ctx)
                .unwrap()
                .norm();
            assert!((a - b).abs() < 1e-10 * a);
        }
        let probe = l_function_probe(s, &t7.characters[2], 100.0, &ctx).unwrap();
        assert!(probe.abs_l > 0.0 && probe.reference > 1.0);
    }
}
