//! Discrete Fourier transforms: a number-theoretic transform for exact integer
//! convolutions and a thin `rustfft` wrapper for real-weighted ones.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::arith::mod_pow;
use crate::{Error, Result};

/// `7·2^26 + 1`, with primitive root 3.
pub const NTT_PRIME: u64 = 469_762_049;
const NTT_ROOT: u64 = 3;
pub const NTT_MAX_LOG: u32 = 26;

/// Longest floating-point transform accepted.
pub const FFT_MAX_LEN: usize = 1 << 26;

fn mul(a: u64, b: u64) -> u64 {
    a * b % NTT_PRIME
}

/// In-place iterative radix-2 NTT; `a.len()` must be a power of two ≤ 2^26.
pub fn ntt(a: &mut [u64], invert: bool) {
    let n = a.len();
    assert!(n.is_power_of_two() && n <= 1 << NTT_MAX_LOG);
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = mod_pow(NTT_ROOT, (NTT_PRIME - 1) / len as u64, NTT_PRIME);
        if invert {
            w = mod_pow(w, NTT_PRIME - 2, NTT_PRIME);
        }
        let half = len / 2;
        let mut tw = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            tw.push(cur);
            cur = mul(cur, w);
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = mul(hi[k], tw[k]);
                lo[k] = if u + v >= NTT_PRIME {
                    u + v - NTT_PRIME
                } else {
                    u + v
                };
                hi[k] = if u >= v { u - v } else { u + NTT_PRIME - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv = mod_pow(n as u64, NTT_PRIME - 2, NTT_PRIME);
        for x in a.iter_mut() {
            *x = mul(*x, inv);
        }
    }
}

fn ntt_len(needed: usize) -> Result<usize> {
    let len = needed.max(1).next_power_of_two();
    if len > 1 << NTT_MAX_LOG {
        return Err(Error::Capacity {
            what: "NTT length",
            requested: len as u64,
            limit: 1 << NTT_MAX_LOG,
        });
    }
    Ok(len)
}

/// Acyclic convolution modulo [`NTT_PRIME`]; exact whenever every true coefficient is
/// below the prime.
pub fn convolve_mod(a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let out_len = a.len() + b.len() - 1;
    let n = ntt_len(out_len)?;
    let mut fa = a.to_vec();
    fa.resize(n, 0);
    ntt(&mut fa, false);
    if std::ptr::eq(a, b) {
        for x in fa.iter_mut() {
            *x = mul(*x, *x);
        }
    } else {
        let mut fb = b.to_vec();
        fb.resize(n, 0);
        ntt(&mut fb, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = mul(*x, *y);
        }
    }
    ntt(&mut fa, true);
    fa.truncate(out_len);
    Ok(fa)
}

/// Forward DFT `F_j = Σ_n w_n e(−nj/L)` of `w` zero-padded to length `len`.
pub fn dft(w: &[f64], len: usize) -> Result<Vec<Complex64>> {
    if len > FFT_MAX_LEN || w.len() > len {
        return Err(Error::Capacity {
            what: "DFT length",
            requested: len.max(w.len()) as u64,
            limit: FFT_MAX_LEN as u64,
        });
    }
    let mut buf: Vec<Complex64> = w.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(len, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    Ok(buf)
}
