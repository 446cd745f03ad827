//! Major arcs `|ϑ − a/q| ≤ C^{δ−1}`, `q ≤ C^{1/4}`, and a grid probe of `|E_Φ|` off them.

use rayon::prelude::*;
use serde::Serialize;

use super::sums::e_phi;
use crate::archimedean::TestFunction;
use crate::arith::{euler_phi, factorize, gcd};
use crate::{Error, Result, SmoothContext};

/// Default number of points in the minor-arc grid.
pub const DEFAULT_GRID: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub a: u64,
    pub q: u64,
    /// y-smooth part of `q`.
    pub q0: u64,
    /// y-rough part of `q`, all prime factors above `y`.
    pub q1: u64,
    pub beta_halfwidth: f64,
}

impl Arc {
    pub fn center(&self) -> f64 {
        self.a as f64 / self.q as f64
    }

    /// Whether `ϑ` (taken mod 1) lies on the arc.
    pub fn contains(&self, theta: f64) -> bool {
        circle_distance(theta, self.center()) <= self.beta_halfwidth
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorArcs {
    pub size: f64,
    pub delta: f64,
    pub y: f64,
    pub q_max: u64,
    pub halfwidth: f64,
    pub arcs: Vec<Arc>,
    /// `Σ_q φ(q)·2C^{δ−1}`.
    pub total_measure: f64,
    pub minor_measure: f64,
    pub disjoint: bool,
}

impl MajorArcs {
    /// The arc containing `ϑ`, if any. Only `q ≤ q_max` fractions nearest to `ϑ` are tried.
    pub fn locate(&self, theta: f64) -> Option<Arc> {
        let t = theta - theta.floor();
        (1..=self.q_max).find_map(|q| {
            let a = (t * q as f64).round() as u64 % q;
            let arc = Arc {
                a,
                q,
                q0: 0,
                q1: 0,
                beta_halfwidth: self.halfwidth,
            };
            if gcd(a, q) == 1 && arc.contains(t) {
                let (q0, q1) = split_smooth(q, self.y);
                Some(Arc { q0, q1, ..arc })
            } else {
                None
            }
        })
    }
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// `q = q₀q₁` with `P⁺(q₀) ≤ y < P⁻(q₁)`.
pub fn split_smooth(q: u64, y: f64) -> (u64, u64) {
    factorize(q).iter().fold((1, 1), |(q0, q1), &(p, k)| {
        let pk = p.pow(k);
        if p as f64 <= y {
            (q0 * pk, q1)
        } else {
            (q0, q1 * pk)
        }
    })
}

/// All major arcs for `C`, `δ`, with a pairwise-disjointness check.
pub fn major_arcs(size: f64, delta: f64, y: f64, _ctx: &SmoothContext) -> Result<MajorArcs> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::invalid(format!(
            "delta = {delta} must lie in (0, 1/4)"
        )));
    }
    if !(size >= 1.0 && size.is_finite()) {
        return Err(Error::invalid(format!("C = {size} must be at least 1")));
    }
    let q_max = (size.powf(0.25) + 1e-9).floor() as u64;
    let halfwidth = size.powf(delta - 1.0);
    let mut arcs = Vec::new();
    for q in 1..=q_max {
        let (q0, q1) = split_smooth(q, y);
        for a in 0..q {
            if gcd(a, q) == 1 {
                arcs.push(Arc {
                    a,
                    q,
                    q0,
                    q1,
                    beta_halfwidth: halfwidth,
                });
            }
        }
    }
    let mut centers: Vec<f64> = arcs.iter().map(Arc::center).collect();
    centers.sort_by(f64::total_cmp);
    let gaps = centers
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(
            1.0 + centers[0] - centers[centers.len() - 1],
        ));
    let disjoint = centers.len() == 1 || gaps.clone().all(|g| g > 2.0 * halfwidth);
    if !disjoint || 2.0 * halfwidth >= 1.0 {
        return Err(Error::Consistency(format!(
            "major arcs overlap for C = {size}, delta = {delta}"
        )));
    }
    let total_measure: f64 =
        (1..=q_max).map(|q| euler_phi(q) as f64).sum::<f64>() * 2.0 * halfwidth;
    Ok(MajorArcs {
        size,
        delta,
        y,
        q_max,
        halfwidth,
        arcs,
        total_measure,
        minor_measure: 1.0 - total_measure,
        disjoint,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    pub theta: f64,
    pub abs_e: f64,
    pub on_major_arc: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorProbe {
    pub rows: Vec<ProbeRow>,
    /// Largest `|E_Φ(C, y; ϑ)|` over grid points off the major arcs.
    pub sup_minor: f64,
    pub theta_at_sup: f64,
    /// `C^{3/4}`.
    pub reference: f64,
    pub ratio: f64,
}

/// `|E_Φ(C, y; ϑ)|` on the Weyl grid `ϑ_j = {jγ}`, `γ = (√5 − 1)/2`, `j = 1..=points`.
pub fn minor_arc_probe(
    arcs: &MajorArcs,
    phi: &TestFunction,
    points: usize,
    ctx: &SmoothContext,
) -> Result<MinorProbe> {
    let gamma = (5f64.sqrt() - 1.0) / 2.0;
    let rows = (1..=points)
        .into_par_iter()
        .map(|j| {
            let theta = (j as f64 * gamma).fract();
            let abs_e = e_phi(arcs.size, arcs.y, theta, phi, ctx)?.norm();
            Ok(ProbeRow {
                theta,
                abs_e,
                on_major_arc: arcs.locate(theta).is_some(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (sup_minor, theta_at_sup) =
        rows.iter()
            .filter(|r| !r.on_major_arc)
            .fold((0.0, f64::NAN), |acc, r| {
                if r.abs_e > acc.0 {
                    (r.abs_e, r.theta)
                } else {
                    acc
                }
            });
    let reference = arcs.size.powf(0.75);
    Ok(MinorProbe {
        rows,
        sup_minor,
        theta_at_sup,
        reference,
        ratio: sup_minor / reference,
    })
}
