use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use super::ThickenedCone;
use crate::error::{domain, Result};
use crate::mathcore::{unit_ball_volume, GaussLegendre, RngStream};

/// `λ_n` of the thickened cone with axis length `len`, aperture `q` and
/// thickness `t`, viewed as a body of revolution in `R^n` (`n >= 1`).
///
/// The body is the convex hull of `B(0, t)` and `B(x, q + t)`, so its profile
/// `ρ(u)` consists of two circular arcs joined by the common outer tangent.
/// Volume is `κ_{n-1} ∫ ρ(u)^{n-1} du`; the arcs are integrated in angle form
/// (`∫ sin^n`) and the tangent piece, a polynomial, by an exact Gauss rule.
pub fn revolve_volume_axial(len: f64, q: f64, t: f64, n: usize) -> f64 {
    assert!(n >= 1, "revolution bodies need n >= 1");
    assert!(len >= 0.0 && q >= 0.0 && t >= 0.0, "negative extent");
    let outer = q + t;
    if q >= len {
        return unit_ball_volume(n as u32) * outer.powi(n as i32);
    }
    let sin_b = q / len;
    let cos_b = (1.0 - sin_b * sin_b).sqrt();
    let beta = sin_b.asin();
    let apex_cap = t.powi(n as i32) * sin_power_integral(n, FRAC_PI_2 - beta);
    let end_cap = outer.powi(n as i32) * sin_power_integral(n, FRAC_PI_2 + beta);
    let u1 = -t * sin_b;
    let u2 = len - outer * sin_b;
    let tangent_piece = if n == 1 {
        u2 - u1
    } else {
        let rule = GaussLegendre::cached(n / 2 + 1);
        rule.integrate(u1, u2, |u| ((t + u * sin_b) / cos_b).powi(n as i32 - 1))
    };
    unit_ball_volume(n as u32 - 1) * (apex_cap + tangent_piece + end_cap)
}

/// `∫_0^a sin^n φ dφ` by the standard reduction formula.
fn sin_power_integral(n: usize, a: f64) -> f64 {
    let (s, c) = a.sin_cos();
    let mut even = a;
    let mut odd = 1.0 - c;
    if n == 0 {
        return even;
    }
    if n == 1 {
        return odd;
    }
    let mut k = 2;
    loop {
        let kf = k as f64;
        let next = -s.powi(k as i32 - 1) * c / kf + (kf - 1.0) / kf * if k % 2 == 0 { even } else { odd };
        if k % 2 == 0 {
            even = next;
        } else {
            odd = next;
        }
        if k == n {
            return next;
        }
        k += 1;
    }
}

/// `λ_n(ℓ_x^q(t))` for the body's own axis length.
pub fn revolve_volume(body: &ThickenedCone, n: usize) -> Result<f64> {
    if n == 0 {
        return domain("revolution volume needs n >= 1");
    }
    let cone = body.cone();
    Ok(revolve_volume_axial(
        cone.axis_length(),
        cone.aperture(),
        body.thickness(),
        n,
    ))
}

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoundingBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return domain("box corners must share a positive dimension");
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite()) {
            return domain("box corners must be finite with lo <= hi");
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }
}

const ORACLE_CHUNK: u64 = 1 << 16;

/// Hit-or-miss volume estimate of `{p in box : membership(p)}`.
///
/// Returns `(estimate, stderr)` with `stderr = vol(box) sqrt(p(1-p)/n)`.
/// Points are drawn in fixed chunks, each from its own fork of `stream`, so
/// the estimate does not depend on the thread count.
pub fn mc_volume_oracle<F>(membership: F, bbox: &BoundingBox, n_points: u64, stream: &RngStream) -> (f64, f64)
where
    F: Fn(&[f64]) -> bool + Sync,
{
    if n_points == 0 {
        return (0.0, 0.0);
    }
    let dim = bbox.lo.len();
    let chunks = n_points.div_ceil(ORACLE_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream.fork(k);
            let count = ORACLE_CHUNK.min(n_points - k * ORACLE_CHUNK);
            let mut p = vec![0.0; dim];
            let mut hits = 0u64;
            for _ in 0..count {
                for (i, x) in p.iter_mut().enumerate() {
                    *x = bbox.lo[i] + (bbox.hi[i] - bbox.lo[i]) * rng.uniform();
                }
                if membership(&p) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let frac = hits as f64 / n_points as f64;
    let vol = bbox.volume();
    (vol * frac, vol * (frac * (1.0 - frac) / n_points as f64).sqrt())
}
