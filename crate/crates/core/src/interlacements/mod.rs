//! Brownian interlacements through Newtonian capacity.
//!
//! The avoidance probability of a compact `K` is `exp(-α cap(K))`, so every
//! visibility functional is a capacity. Capacities are estimated with a
//! walk-on-spheres engine and compared with their large-`r` asymptotics.

mod shapes;
mod wos;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::mathcore::{gamma_ln, green_constant, Dimension, RngStream};

pub use shapes::TargetShape;
pub use wos::{
    enclosing_spheroid, estimate_capacity, spheroid_capacity, wos_hits, CapacityEstimate, Launch,
    WosConfig,
};

/// `ϰ_d`: `π` for `d = 3`, `2π^{(d-1)/2} / Γ((d-3)/2)` above.
pub fn kappa(d: Dimension) -> Result<f64> {
    let d = d.require_transient()?.get();
    if d == 3 {
        return Ok(PI);
    }
    let df = f64::from(d);
    Ok(2.0 * PI.powf((df - 1.0) / 2.0) / gamma_ln((df - 3.0) / 2.0)?.exp())
}

/// `β_d = √π Γ((d-3)/2) / (2 Γ((d-2)/2))` for `d >= 4`.
pub fn beta_constant(d: Dimension) -> Result<f64> {
    let df = d.as_f64();
    if d.get() < 4 {
        return domain(format!("β_d needs d >= 4, got {d}"));
    }
    Ok(PI.sqrt() * (gamma_ln((df - 3.0) / 2.0)? - gamma_ln((df - 2.0) / 2.0)?).exp() / 2.0)
}

/// Leading order of `cap(ℓ_{r e_1}(ρ))`: `ϰ_d ρ^{d-3} r / log r` in `d = 3`,
/// `ϰ_d ρ^{d-3} r` above.
pub fn capacity_asymptotic(r: f64, rho: f64, d: Dimension) -> Result<f64> {
    let k = kappa(d)?;
    if !(r > std::f64::consts::E) {
        return domain(format!("asymptotic capacity needs r > e, got {r}"));
    }
    let lead = k * rho.powi(d.get() as i32 - 3);
    Ok(if d.get() == 3 { lead * r / r.ln() } else { lead * r })
}

/// Central value of the sharp bounds on the probability that Brownian motion
/// started at axial coordinate `x_axis` and distance `offset` from the axis
/// never hits `ℓ_{r e_1}(ρ)`: `(offset - ρ)/ρ · (1/log r` in `d = 3`, `d - 3` above`)`.
///
/// Defined on the window `r/log² r <= x_axis <= r - r/log² r`,
/// `ρ <= offset < 2ρ`.
pub fn nonhit_asymptotic(x_axis: f64, offset: f64, r: f64, rho: f64, d: Dimension) -> Result<f64> {
    let d = d.require_transient()?.get();
    if !(r > std::f64::consts::E) {
        return domain(format!("r must exceed e, got {r}"));
    }
    let margin = r / r.ln().powi(2);
    if x_axis < margin || x_axis > r - margin {
        return domain(format!("axial coordinate {x_axis} outside [{margin}, {}]", r - margin));
    }
    if !(offset >= rho) || offset >= 2.0 * rho {
        return domain(format!("offset {offset} outside [ρ, 2ρ) = [{rho}, {})", 2.0 * rho));
    }
    let factor = if d == 3 { 1.0 / r.ln() } else { f64::from(d - 3) };
    Ok((offset - rho) / rho * factor)
}

/// `P[H_{ℓ_{r e_1}(ρ)} = ∞]` from `x`, with its standard error.
pub fn estimate_nonhit(x: &[f64], r: f64, rho: f64, cfg: &WosConfig, n: u64, stream: &RngStream) -> Result<(f64, f64)> {
    let shape = TargetShape::axis_cylinder(x.len(), r, rho)?;
    if n == 0 {
        return domain("non-hit estimate needs at least one walker");
    }
    let misses = wos::count_misses(&shape, x, cfg, n, stream)?;
    let p = misses as f64 / n as f64;
    Ok((p, (p * (1.0 - p) / n as f64).sqrt()))
}

/// `½ α ϰ_d ρ^{d-4} (1 in d = 3, d - 3 above)`.
pub fn lambda_bi(alpha: f64, rho: f64, d: Dimension) -> Result<f64> {
    let k = kappa(d)?;
    let factor = if d.get() == 3 { 1.0 } else { d.as_f64() - 3.0 };
    Ok(0.5 * alpha * k * rho.powi(d.get() as i32 - 4) * factor)
}

/// Visibility window: `log² r / r` in `d = 3`, `1/r` above.
pub fn delta_bi(d: Dimension, r: f64) -> Result<f64> {
    let d = d.require_transient()?;
    Ok(if d.get() == 3 { r.ln().powi(2) / r } else { r.recip() })
}

/// Monte Carlo estimate of `P[Q > s δ_r | visible]` with a confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalEstimate {
    pub s: f64,
    pub survival: f64,
    pub lo: f64,
    pub hi: f64,
    /// `cap(ℓ^{sδ_r}(ρ)) - cap(ℓ(ρ))` and its standard error.
    pub delta_cap: f64,
    pub delta_cap_stderr: f64,
    pub n_walkers: u64,
}

/// Coupled estimate of `exp(-α [cap(ℓ^{sδ_r}_{r e_1}(ρ)) - cap(ℓ_{r e_1}(ρ))])`.
///
/// Walkers start from the equilibrium measure of a spheroid around the
/// widest cone. Each one is run against the cone and, once it hits, the same
/// trajectory continues against the inner cylinder, so a walker counts toward
/// the difference exactly when it hits the cone and misses the cylinder. The
/// indicator difference is a single Bernoulli variable whose variance is the
/// small difference itself, not the sum of two capacities' variances.
pub fn conditional_survival_mc(
    alpha: f64,
    rho: f64,
    d: Dimension,
    r: f64,
    s: f64,
    n: u64,
    level: f64,
    stream: &RngStream,
) -> Result<SurvivalEstimate> {
    Ok(conditional_survival_grid(alpha, rho, d, r, &[s], n, level, stream)?[0])
}

/// [`conditional_survival_mc`] on a grid of `s` values sharing walkers: the
/// cones for increasing `s` are nested, so one trajectory walks the whole
/// decreasing sequence.
#[allow(clippy::too_many_arguments)]
pub fn conditional_survival_grid(
    alpha: f64,
    rho: f64,
    d: Dimension,
    r: f64,
    s_grid: &[f64],
    n: u64,
    level: f64,
    stream: &RngStream,
) -> Result<Vec<SurvivalEstimate>> {
    let dim = d.require_transient()?.as_usize();
    if !(alpha > 0.0) || !(rho > 0.0) {
        return domain("α and ρ must be positive");
    }
    if s_grid.is_empty() || s_grid.iter().any(|s| !(*s >= 0.0)) {
        return domain("s grid must be non-empty and non-negative");
    }
    if n == 0 {
        return domain("survival estimate needs at least one walker");
    }
    let delta = delta_bi(d, r)?;
    let mut order: Vec<usize> = (0..s_grid.len()).collect();
    order.sort_by(|&a, &b| s_grid[b].total_cmp(&s_grid[a]));
    let mut shapes = order
        .iter()
        .map(|&i| TargetShape::axis_cone(dim, r, s_grid[i] * delta, rho))
        .collect::<Result<Vec<_>>>()?;
    shapes.push(TargetShape::axis_cylinder(dim, r, rho)?);
    let cfg = WosConfig::for_shape(&shapes[0])?;
    let mass = cfg.launch_mass(d)?;
    let counts = wos::nested_counts(&shapes, &cfg, n, stream)?;
    let inner = *counts.last().expect("cylinder is last");
    let z = crate::simharness::normal_quantile(0.5 + 0.5 * level)?;
    let mut out = vec![None; s_grid.len()];
    for (slot, &i) in order.iter().enumerate() {
        let hits_cone = counts[slot];
        assert!(hits_cone >= inner, "walker hit the cylinder without hitting the cone");
        let p = (hits_cone - inner) as f64 / n as f64;
        let delta_cap = mass * p;
        let se = mass * (p * (1.0 - p) / n as f64).sqrt();
        out[i] = Some(SurvivalEstimate {
            s: s_grid[i],
            survival: (-alpha * delta_cap).exp(),
            lo: (-alpha * (delta_cap + z * se)).exp(),
            hi: (-alpha * (delta_cap - z * se).max(0.0)).exp(),
            delta_cap,
            delta_cap_stderr: se,
            n_walkers: n,
        });
    }
    Ok(out.into_iter().map(|e| e.expect("every slot filled")).collect())
}

/// Exponential-limit approximation `exp(-α cap)` of the visibility
/// probability with the leading-order capacity.
pub fn visibility_probability_asymptotic(alpha: f64, rho: f64, d: Dimension, r: f64) -> Result<f64> {
    Ok((-alpha * capacity_asymptotic(r, rho, d)?).exp())
}

/// `cap(B(0, radius)) = radius^{d-2} / γ_d`.
pub fn ball_capacity(d: Dimension, radius: f64) -> Result<f64> {
    Ok(radius.powi(d.get() as i32 - 2) / green_constant(d)?)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::E;

    use super::*;

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(dim(3)).unwrap(), PI);
        assert!((kappa(dim(4)).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((kappa(dim(5)).unwrap() - 2.0 * PI * PI).abs() < 1e-12);
        assert!(kappa(dim(2)).is_err());
    }

    #[test]
    fn kappa_from_green_and_beta() {
        for d in [4u32, 5, 6, 8] {
            let lhs = kappa(dim(d)).unwrap();
            let rhs = 1.0 / (2.0 * beta_constant(dim(d)).unwrap() * green_constant(dim(d)).unwrap());
            assert!((lhs - rhs).abs() < 1e-10 * lhs, "d={d}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn asymptotic_capacity_examples() {
        let a = capacity_asymptotic(E * E, 1.0, dim(3)).unwrap();
        assert!((a - PI * E * E / 2.0).abs() < 1e-12);
        let b = capacity_asymptotic(100.0, 1.0, dim(5)).unwrap();
        assert!((b - 200.0 * PI * PI).abs() < 1e-9);
        let c = capacity_asymptotic(50.0, 2.0, dim(4)).unwrap();
        assert!((c - 200.0 * PI).abs() < 1e-10);
        assert!(capacity_asymptotic(2.0, 1.0, dim(4)).is_err());
    }

    #[test]
    fn nonhit_central_values() {
        assert_eq!(nonhit_asymptotic(500.0, 1.0, 1000.0, 1.0, dim(4)).unwrap(), 0.0);
        assert!((nonhit_asymptotic(500.0, 1.05, 1000.0, 1.0, dim(4)).unwrap() - 0.05).abs() < 1e-12);
        let r = E.powi(10);
        assert!((nonhit_asymptotic(r / 2.0, 1.05, r, 1.0, dim(3)).unwrap() - 0.005).abs() < 1e-12);
        assert!(nonhit_asymptotic(1.0, 1.05, 1000.0, 1.0, dim(4)).is_err());
        assert!(nonhit_asymptotic(500.0, 0.9, 1000.0, 1.0, dim(4)).is_err());
    }

    #[test]
    fn rates() {
        assert!((lambda_bi(0.7, 2.0, dim(3)).unwrap() - 0.7 * PI / 4.0).abs() < 1e-12);
        assert!((lambda_bi(0.7, 1.0, dim(4)).unwrap() - 0.7 * PI).abs() < 1e-12);
        assert!((lambda_bi(0.7, 2.0, dim(5)).unwrap() - 4.0 * 0.7 * PI * PI).abs() < 1e-12);
        assert!(lambda_bi(0.7, 2.0, dim(2)).is_err());
    }

    #[test]
    fn windows() {
        assert!((delta_bi(dim(3), E.powi(10)).unwrap() - 100.0 * E.powi(-10)).abs() < 1e-15);
        assert_eq!(delta_bi(dim(4), 100.0).unwrap(), 0.01);
    }

    #[test]
    fn zero_aperture_survival_is_one() {
        let est = conditional_survival_mc(0.5, 1.0, dim(4), 20.0, 0.0, 2000, 0.95, &RngStream::new(1, 1)).unwrap();
        assert_eq!(est.survival, 1.0);
        assert_eq!(est.delta_cap, 0.0);
    }

    #[test]
    fn survival_is_at_most_one_and_monotone_on_a_grid() {
        let grid = [0.5, 4.0, 2.0];
        let est = conditional_survival_grid(0.5, 1.0, dim(4), 20.0, &grid, 4000, 0.95, &RngStream::new(2, 2)).unwrap();
        for e in &est {
            assert!(e.survival <= 1.0 && e.lo <= e.survival && e.survival <= e.hi);
        }
        assert_eq!(est[0].s, 0.5);
        assert!(est[0].delta_cap <= est[2].delta_cap && est[2].delta_cap <= est[1].delta_cap);
    }
}
