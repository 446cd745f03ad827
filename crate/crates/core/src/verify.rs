//! Self-check suites run by `friable verify`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::archimedean::{make_bump, s0_indicator, TestFunction};
use crate::arith::{euler_phi, gcd};
use crate::circle::{self, CharacterTable};
use crate::counting::{self, CountMethod, SolutionProfile};
use crate::saddle;
use crate::series;
use crate::{Error, Result, SmoothContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Saddle,
    Series,
    Circle,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identities" => Suite::Identities,
            "saddle" => Suite::Saddle,
            "series" => Suite::Series,
            "circle" => Suite::Circle,
            "all" => Suite::All,
            _ => return Err(Error::invalid(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Largest modulus used by the character checks.
    pub q_max: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, q_max: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<CheckRow>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

struct Rows<'a> {
    suite: &'static str,
    out: &'a mut Vec<CheckRow>,
}

impl Rows<'_> {
    fn push(&mut self, name: impl Into<String>, check: Result<(bool, String)>) {
        let (passed, detail) = check.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.out.push(CheckRow {
            suite: self.suite,
            name: name.into(),
            passed,
            detail,
        });
    }
}

pub fn run(suite: Suite, opts: &VerifyOptions, ctx: &SmoothContext) -> VerifyReport {
    let mut rows = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Identities {
        identities(
            &mut Rows {
                suite: "identities",
                out: &mut rows,
            },
            opts,
            ctx,
        );
    }
    if all || suite == Suite::Saddle {
        saddle_suite(
            &mut Rows {
                suite: "saddle",
                out: &mut rows,
            },
            opts,
            ctx,
        );
    }
    if all || suite == Suite::Series {
        series_suite(
            &mut Rows {
                suite: "series",
                out: &mut rows,
            },
            ctx,
        );
    }
    if all || suite == Suite::Circle {
        circle_suite(
            &mut Rows {
                suite: "circle",
                out: &mut rows,
            },
            opts,
            ctx,
        );
    }
    VerifyReport { rows }
}

/// Context large enough for every suite.
pub fn default_context() -> Result<SmoothContext> {
    SmoothContext::new(1000, 100_000)
}

fn identities(rows: &mut Rows, opts: &VerifyOptions, ctx: &SmoothContext) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rows.push(
        "count methods agree",
        (|| {
            for _ in 0..5 {
                let x = rng.random_range(10..20_000) as f64;
                let y = [3.0, 10.0, 30.0, 100.0][rng.random_range(0..4)];
                let p = counting::count_exact_via(x, y, CountMethod::Pairs, ctx)?;
                let b = counting::count_exact_via(x, y, CountMethod::Bitset, ctx)?;
                let n = counting::count_exact_via(x, y, CountMethod::Ntt, ctx)?;
                if p != b || b != n {
                    return Ok((false, format!("x={x} y={y}: {p} {b} {n}")));
                }
            }
            Ok((true, "5 random (x, y)".into()))
        })(),
    );
    rows.push(
        "triple product equals count",
        (|| {
            let ind = TestFunction::indicator_unit();
            for _ in 0..5 {
                let x = rng.random_range(2..2000) as f64;
                let y = [5.0, 10.0, 30.0, x][rng.random_range(0..4)];
                let t = circle::triple_product_exact(x, x, x, y, &ind, ctx)?;
                let n = counting::count_exact(x, y, ctx)?;
                if t != n {
                    return Ok((false, format!("x={x} y={y}: {t} vs {n}")));
                }
            }
            Ok((true, "5 random (x, y)".into()))
        })(),
    );
    rows.push(
        "Möbius identity for x <= 2000",
        (|| {
            for y in [2.0, 3.0, 5.0, 10.0, 30.0, 100.0] {
                let prof = SolutionProfile::new(2000.0, y, ctx)?;
                let star = counting::primitive_profile(2000.0, y, ctx)?;
                for x in 1..=2000u64 {
                    if prof.n_star_mobius(x as f64)? != star[x as usize] {
                        return Ok((false, format!("x={x} y={y}")));
                    }
                }
            }
            Ok((true, "6 values of y".into()))
        })(),
    );
    rows.push(
        "dyadic decomposition",
        (|| {
            let d = counting::dyadic_check(1000.0, 10.0, 0.2, ctx)?;
            Ok((
                d.dyadic_sum == d.n_exact as f64 && d.bump_sum >= d.dyadic_sum,
                format!(
                    "N = {}, dyadic = {}, bump = {:.1}",
                    d.n_exact, d.dyadic_sum, d.bump_sum
                ),
            ))
        })(),
    );
}

fn saddle_suite(rows: &mut Rows, opts: &VerifyOptions, ctx: &SmoothContext) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5add1e);
    rows.push(
        "saddle residual",
        (|| {
            let mut worst: f64 = 0.0;
            for _ in 0..20 {
                let lx = rng.random_range(3.0..8.0) * std::f64::consts::LN_10;
                let x = lx.exp();
                let y = rng.random_range(10f64.ln()..lx.min(1000f64.ln())).exp();
                let sd = saddle::solve_alpha(x, y, ctx)?;
                worst = worst.max(sd.residual.abs() / lx);
            }
            Ok((worst <= 1e-9, format!("max |residual|/log x = {worst:.2e}")))
        })(),
    );
    rows.push(
        "derivatives against differences",
        (|| {
            let h = 1e-5;
            let mut worst: f64 = 0.0;
            for (sigma, y) in [(0.7, 100.0), (0.9, 1000.0), (0.5, 30.0)] {
                for k in 1..=4 {
                    let d = saddle::log_zeta_derivative(k, sigma, y, ctx)?;
                    let fd = (saddle::log_zeta_derivative(k - 1, sigma + h, y, ctx)?
                        - saddle::log_zeta_derivative(k - 1, sigma - h, y, ctx)?)
                        / (2.0 * h);
                    worst = worst.max(((d - fd) / d).abs());
                }
            }
            Ok((worst <= 1e-6, format!("max relative gap {worst:.2e}")))
        })(),
    );
    rows.push(
        "estimate against exact count",
        (|| {
            let mut worst: f64 = 0.0;
            for (x, y) in [(1e4, 30.0), (1e5, 100.0), (1e5, 30.0)] {
                let sd = saddle::solve_alpha(x, y, ctx)?;
                let exact = ctx.psi_exact(x, y)?.count as f64;
                let err = (saddle::ht_psi_estimate(&sd) / exact - 1.0).abs();
                if err > 0.02f64.max(3.0 / sd.u) {
                    return Ok((false, format!("x={x} y={y}: {err:.3}")));
                }
                worst = worst.max(err);
            }
            Ok((true, format!("max relative error {worst:.4}")))
        })(),
    );
}

fn series_suite(rows: &mut Rows, ctx: &SmoothContext) {
    rows.push(
        "indicator factor at alpha = 1",
        (|| {
            let s0 = s0_indicator(1.0)?;
            let s1 = series::s1(1.0, series::DEFAULT_P_MAX)?.value;
            Ok((
                (s0 - 0.5).abs() < 1e-8 && (s0 * s1 - 0.5).abs() < 1e-8,
                format!("{s0:.12} x {s1}"),
            ))
        })(),
    );
    rows.push("local factors two ways", {
        let mut worst: f64 = 0.0;
        for p in [2u64, 3, 101, 9973] {
            for a in [0.7, 0.8, 0.95] {
                let lhs = 1.0 + series::factor_excess(p, a, a, a);
                let rhs = series::factor_direct(p, a, a, a);
                worst = worst.max(((lhs - rhs) / rhs).abs());
            }
        }
        Ok((worst < 1e-12, format!("max relative gap {worst:.2e}")))
    });
    rows.push(
        "primitive series ratio",
        (|| {
            let a = 0.85;
            let s1 = series::s1(a, series::DEFAULT_P_MAX)?.value;
            let star = series::s1_star(a, Some(100.0), ctx)?.value;
            let z = saddle::log_zeta_derivative(0, 3.0 * a - 1.0, 100.0, ctx)?.exp();
            let gap = (star / s1 - 1.0 / z).abs();
            Ok((gap < 1e-12, format!("gap {gap:.2e}")))
        })(),
    );
}

fn circle_suite(rows: &mut Rows, opts: &VerifyOptions, ctx: &SmoothContext) {
    let q_max = opts.q_max.clamp(1, circle::sums::IDENTITY_MAX_Q);
    rows.push(
        format!("character tables q <= {q_max}"),
        (|| {
            for q in 1..=q_max {
                let t = CharacterTable::new(q)?;
                if t.len() as u64 != euler_phi(q) {
                    return Ok((false, format!("q={q}: {} characters", t.len())));
                }
                for (i, a) in t.characters.iter().enumerate() {
                    for (j, b) in t.characters.iter().enumerate() {
                        let s: Complex64 = a
                            .values
                            .iter()
                            .zip(&b.values)
                            .map(|(u, v)| u * v.conj())
                            .sum();
                        let want = if i == j { euler_phi(q) as f64 } else { 0.0 };
                        if (s - want).norm() > 1e-10 {
                            return Ok((false, format!("q={q}: orthogonality {i},{j}")));
                        }
                    }
                    if a.is_primitive()
                        && (t.gauss_sums[i].norm() - (q as f64).sqrt()).abs() > 1e-10
                    {
                        return Ok((false, format!("q={q}: Gauss sum of character {i}")));
                    }
                }
            }
            Ok((true, "orthogonality and Gauss sums".into()))
        })(),
    );
    rows.push(
        "character decomposition",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xc1c1e);
            let mut worst: f64 = 0.0;
            for _ in 0..10 {
                let q = rng.random_range(1..=q_max);
                let a = loop {
                    let a = rng.random_range(0..q.max(2));
                    if gcd(a, q) == 1 {
                        break a % q.max(1);
                    }
                };
                let beta = rng.random_range(-1e-3..1e-3);
                let x = rng.random_range(50.0..1000.0);
                let y = [5.0, 10.0, 30.0][rng.random_range(0..3)];
                let phi = if rng.random::<bool>() {
                    make_bump(0.2)?
                } else {
                    TestFunction::indicator_unit()
                };
                let r = circle::character_identity_check(x, y, q, a, beta, &phi, ctx)?;
                worst = worst.max(r.abs_diff / (1.0 + r.lhs.norm()));
            }
            Ok((worst <= 1e-8, format!("max relative residual {worst:.2e}")))
        })(),
    );
    rows.push(
        "twisted zeta closed form",
        (|| {
            for q0 in [1u64, 2, 3, 4, 6, 12, 30] {
                for s in [Complex64::new(0.8, 0.5), Complex64::new(1.2, 0.0)] {
                    circle::zeta_y_twisted(s, 10.0, q0, ctx)?;
                }
            }
            Ok((true, "q0 in {1,2,3,4,6,12,30}".into()))
        })(),
    );
    rows.push(
        "major arcs disjoint",
        (|| {
            let m = circle::major_arcs(1e4, 0.1, 50.0, ctx)?;
            Ok((
                m.disjoint,
                format!("{} arcs, measure {:.4}", m.arcs.len(), m.total_measure),
            ))
        })(),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_deterministic() {
        let ctx = default_context().unwrap();
        let opts = VerifyOptions {
            seed: 42,
            q_max: 30,
        };
        let a = run(Suite::All, &opts, &ctx);
        for r in &a.rows {
            assert!(r.passed, "{r:?}");
        }
        let b = run(Suite::Circle, &opts, &ctx);
        let circle: Vec<_> = a
            .rows
            .iter()
            .filter(|r| r.suite == "circle")
            .cloned()
            .collect();
        assert_eq!(b.rows, circle);
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("nope".parse::<Suite>().is_err());
    }
}
