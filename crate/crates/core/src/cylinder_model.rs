//! Poisson cylinders: `ρ`-neighbourhoods of a Poisson process of lines with
//! rotation-invariant intensity `α μ`.
//!
//! `μ(K)` is the mean `(d-1)`-volume of the projection of `K` along a uniform
//! direction. For the thickened cone the projection is again a thickened cone
//! of axis length `r ‖ξ‖`, so every `μ` reduces to revolution volumes in
//! dimension `d - 1` averaged over the law of `‖ξ‖`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{revolve_volume_axial, ObstacleLine, Vect};
use crate::mathcore::{beta_fn, integrate_adaptive, unit_ball_volume, Dimension, RngStream};
use crate::scene::{Obstacle, ObstacleScene, SamplingWindow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderParams {
    pub alpha: f64,
    pub rho: f64,
    pub d: Dimension,
}

impl CylinderParams {
    pub fn new(alpha: f64, rho: f64, d: Dimension) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return domain(format!("intensity must be positive, got {alpha}"));
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return domain(format!("cylinder radius must be positive, got {rho}"));
        }
        Ok(Self { alpha, rho, d })
    }

    /// Visibility window: `1` in the plane, `1/r` above.
    pub fn delta(&self, r: f64) -> f64 {
        if self.d.get() == 2 {
            1.0
        } else {
            r.recip()
        }
    }
}

/// `E‖ξ‖` for the projection `ξ` of a uniform unit vector onto a hyperplane.
pub fn e_norm_xi(d: Dimension) -> f64 {
    let d = d.as_f64();
    beta_fn(0.5, d / 2.0).expect("positive arguments") / beta_fn(0.5, (d - 1.0) / 2.0).expect("positive arguments")
}

/// `μ(B(ℓ_{r e_1}, thickness))` in closed form.
fn mu_capsule(d: Dimension, r: f64, thickness: f64) -> f64 {
    let d = d.get();
    unit_ball_volume(d - 1) * thickness.powi(d as i32 - 1)
        + unit_ball_volume(d - 2) * thickness.powi(d as i32 - 2) * r * e_norm_xi(Dimension::new(d).unwrap())
}

/// `μ(ℓ_{r e_1}(ρ))`.
pub fn mu_segment(params: &CylinderParams, r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(mu_capsule(params.d, r, params.rho))
}

/// `μ(ℓ_{r e_1}^{sδ_r}(ρ)) - μ(ℓ_{r e_1}(ρ))`.
///
/// `‖ξ‖ = sin θ` with `θ` of density `∝ sin^{d-2} θ` on `[0, π]`. The
/// integrand changes form where the end ball swallows the apex, at
/// `r sin θ = q`, so the quadrature is split there.
pub fn mu_increment(params: &CylinderParams, r: f64, s: f64) -> Result<f64> {
    check_r(r)?;
    if !(s >= 0.0) {
        return domain(format!("s must be non-negative, got {s}"));
    }
    let q = s * params.delta(r);
    if q >= r {
        return domain(format!("aperture s δ_r = {q} must stay below r = {r}"));
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    let d = params.d.get();
    let n = d as usize - 1;
    let rho = params.rho;
    let weight_total = beta_fn(0.5, (f64::from(d) - 1.0) / 2.0)?;
    let integrand = |theta: f64| {
        let len = r * theta.sin();
        let diff = revolve_volume_axial(len, q, rho, n) - revolve_volume_axial(len, 0.0, rho, n);
        diff * theta.sin().powi(d as i32 - 2)
    };
    let kink = (q / r).asin();
    let half = integrate_adaptive(integrand, 0.0, kink, 0.0, 1e-11)
        + integrate_adaptive(integrand, kink, FRAC_PI_2, 0.0, 1e-11);
    Ok(2.0 * half / weight_total)
}

/// `μ(ℓ_{r e_1}^{sδ_r}(ρ))`.
pub fn mu_cone(params: &CylinderParams, r: f64, s: f64) -> Result<f64> {
    Ok(mu_segment(params, r)? + mu_increment(params, r, s)?)
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("distance r must be positive, got {r}"));
    }
    Ok(())
}

/// Rate of the exponential limit law.
pub fn lambda_pc(params: &CylinderParams) -> f64 {
    let d = params.d.get();
    if d == 2 {
        return params.alpha;
    }
    0.5 * params.alpha
        * f64::from(d - 2)
        * unit_ball_volume(d - 2)
        * params.rho.powi(d as i32 - 3)
        * e_norm_xi(params.d)
}

/// `P[no cylinder meets [0, r e_1]]`.
pub fn visibility_probability(params: &CylinderParams, r: f64) -> Result<f64> {
    Ok((-params.alpha * mu_segment(params, r)?).exp())
}

/// `P[Q > s δ_r | [0, r e_1] visible]`, exact at finite `r`.
pub fn conditional_survival_exact(params: &CylinderParams, r: f64, s: f64) -> Result<f64> {
    Ok((-params.alpha * mu_increment(params, r, s)?).exp())
}

/// Maps `x` by the reflection exchanging `e_last` and the unit vector `to`.
fn reflect_last_to(to: &[f64], x: &mut [f64]) {
    let m = to.len();
    let mut v: Vec<f64> = to.iter().map(|t| -t).collect();
    v[m - 1] += 1.0;
    let vv: f64 = v.iter().map(|c| c * c).sum();
    if vv < 1e-30 {
        return;
    }
    let k = 2.0 * v.iter().zip(x.iter()).map(|(a, b)| a * b).sum::<f64>() / vv;
    x.iter_mut().zip(&v).for_each(|(xi, vi)| *xi -= k * vi);
}

/// A line with direction `dir` through the point of `dir^⊥` with coordinates
/// `local` (in `R^{d-1}`, pushed forward by the reflection `e_d -> dir`).
fn line_from_local(dir: Vec<f64>, local: &[f64]) -> Result<ObstacleLine> {
    let mut base = local.to_vec();
    base.push(0.0);
    reflect_last_to(&dir, &mut base);
    ObstacleLine::new(Vect::new(base)?, Vect::new(dir)?)
}

/// All lines of the process that hit `B(0, bounding_radius)`.
pub fn sample_lines(params: &CylinderParams, bounding_radius: f64, rng: &mut RngStream) -> Result<Vec<ObstacleLine>> {
    if !(bounding_radius > 0.0) {
        return domain(format!("bounding radius must be positive, got {bounding_radius}"));
    }
    let d = params.d.get();
    let mass = unit_ball_volume(d - 1) * bounding_radius.powi(d as i32 - 1);
    let count = rng.poisson(params.alpha * mass)?;
    let mut local = vec![0.0; d as usize - 1];
    (0..count)
        .map(|_| {
            let dir = rng.unit_sphere(d as usize);
            rng.fill_uniform_ball(&mut local, bounding_radius);
            line_from_local(dir, &local)
        })
        .collect()
}

/// All lines of the process that hit the capsule `B([0, r e_1], radius)`.
///
/// The direction has density proportional to the `(d-1)`-volume of the
/// projected capsule (drawn by rejection) and the offset is uniform in that
/// projection, itself a capsule with axis `r π(e_1)`.
pub fn sample_capsule_lines(params: &CylinderParams, r: f64, radius: f64, rng: &mut RngStream) -> Result<Vec<ObstacleLine>> {
    check_r(r)?;
    if !(radius > 0.0) {
        return domain(format!("capsule radius must be positive, got {radius}"));
    }
    let d = params.d.get();
    let m = d as usize - 1;
    let cap_ball = unit_ball_volume(d - 1) * radius.powi(m as i32);
    let cap_side = unit_ball_volume(d - 2) * radius.powi(m as i32 - 1) * r;
    let count = rng.poisson(params.alpha * mu_capsule(params.d, r, radius))?;
    let mut lines = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let (dir, proj_len) = loop {
            let dir = rng.unit_sphere(d as usize);
            let proj_len = r * (1.0 - dir[0] * dir[0]).max(0.0).sqrt();
            if rng.uniform() * (cap_ball + cap_side) <= cap_ball + cap_side * proj_len / r {
                break (dir, proj_len);
            }
        };
        // Capsule along e_1 in R^m, rotated onto the projected axis.
        let window = SamplingWindow { dim: m, axis_length: proj_len, radius };
        let mut local = sample_capsule_local(&window, rng);
        // Projected axis r(e_1 - dir_1 dir) expressed in the local frame.
        let mut axis: Vec<f64> = dir.iter().map(|&c| -r * dir[0] * c).collect();
        axis[0] += r;
        reflect_last_to(&dir, &mut axis);
        axis.truncate(m);
        let axis_norm = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
        if axis_norm > 1e-12 * r && m > 1 {
            axis.iter_mut().for_each(|c| *c /= axis_norm);
            // Reflection taking e_1 to the axis direction, written via e_last.
            let mut first_to_last = local.clone();
            first_to_last.swap(0, m - 1);
            let mut axis_perm = axis.clone();
            axis_perm.swap(0, m - 1);
            reflect_last_to(&axis_perm, &mut first_to_last);
            first_to_last.swap(0, m - 1);
            local = first_to_last;
        } else if m == 1 && axis.first().is_some_and(|&a| a < 0.0) {
            local[0] = -local[0];
        }
        lines.push(line_from_local(dir, &local)?);
    }
    Ok(lines)
}

/// Uniform point of a capsule along `e_1` in any dimension `>= 1`.
fn sample_capsule_local(w: &SamplingWindow, rng: &mut RngStream) -> Vec<f64> {
    if w.dim >= 2 {
        return w.sample_point(rng);
    }
    vec![-w.radius + (w.axis_length + 2.0 * w.radius) * rng.uniform()]
}

/// The line process given that `[0, r e_1]` is visible, restricted to lines
/// within `q_cap + ρ` of the segment.
pub fn sample_conditional_scene(params: &CylinderParams, r: f64, q_cap: f64, rng: &mut RngStream) -> Result<ObstacleScene> {
    check_r(r)?;
    if !(q_cap > 0.0) || q_cap >= r {
        return domain(format!("aperture cap must lie in (0, r) = (0, {r}), got {q_cap}"));
    }
    let d = params.d.as_usize();
    let radius = q_cap + params.rho;
    let lines = sample_capsule_lines(params, r, radius, rng)?;
    let obstacles = lines
        .into_iter()
        .map(|line| Obstacle::Cylinder { line, radius: params.rho })
        .collect();
    let window = SamplingWindow::new(d, r, radius)?;
    Ok(ObstacleScene::unconditioned(Vect::axis(d, 0, r), obstacles, window).condition())
}

/// `E[(q - r‖ξ‖)_+]` in the plane, where `‖ξ‖ = |sin θ|` with `θ` uniform.
pub fn planar_excess(r: f64, q: f64) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    let kink = (q / r).min(1.0).asin();
    2.0 / PI * (q * kink - r * (1.0 - kink.cos()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dist_line_segment, SegmentToTarget};
    use crate::mathcore::GaussLegendre;
    use crate::scene::sample_q;

    fn params(alpha: f64, rho: f64, d: u32) -> CylinderParams {
        CylinderParams::new(alpha, rho, Dimension::new(d).unwrap()).unwrap()
    }

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn projection_length_mean() {
        assert!((e_norm_xi(dim(2)) - 2.0 / PI).abs() < 1e-13);
        assert!((e_norm_xi(dim(3)) - PI / 4.0).abs() < 1e-13);
        let mut rng = RngStream::new(8, 0);
        let n = 1_000_000;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let u = rng.unit_sphere(5);
            let xi = (1.0 - u[0] * u[0]).sqrt();
            sum += xi;
            sum2 += xi * xi;
        }
        let mean = sum / n as f64;
        let sd = ((sum2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - e_norm_xi(dim(5))).abs() < 4.0 * sd, "{mean}");
    }

    #[test]
    fn segment_measure_examples() {
        assert!((mu_segment(&params(1.0, 1.0, 2), 10.0).unwrap() - (2.0 + 20.0 / PI)).abs() < 1e-12);
        assert!((mu_segment(&params(1.0, 1.0, 3), 100.0).unwrap() - 51.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn rates() {
        assert_eq!(lambda_pc(&params(0.3, 2.0, 2)), 0.3);
        assert!((lambda_pc(&params(0.3, 2.0, 3)) - 0.3 * PI / 4.0).abs() < 1e-13);
        assert!((lambda_pc(&params(0.3, 1.0, 4)) - 0.8).abs() < 1e-13);
    }

    #[test]
    fn planar_increment_has_a_quadratic_excess() {
        let p = params(0.3, 1.0, 2);
        for r in [5.0, 50.0, 500.0] {
            for s in [0.5, 2.0, 4.0] {
                let got = mu_increment(&p, r, s).unwrap();
                let expect = s + planar_excess(r, s);
                assert!((got - expect).abs() < 1e-10, "r={r} s={s}: {got} vs {expect}");
                // E[(s - r sin θ)_+] ≈ s²/(π r) for small s/r
                assert!(got - s > 0.0);
            }
        }
        assert!((planar_excess(1000.0, 1.0) - 1.0 / (PI * 1000.0)).abs() < 1e-8);
    }

    #[test]
    fn increment_zero_only_at_zero() {
        let p = params(0.3, 1.0, 3);
        assert_eq!(mu_cone(&p, 50.0, 0.0).unwrap(), mu_segment(&p, 50.0).unwrap());
        for s in [0.01, 1.0, 10.0] {
            assert!(mu_cone(&p, 50.0, s).unwrap() > mu_segment(&p, 50.0).unwrap());
        }
        assert!(mu_increment(&p, 5.0, 100.0).is_err());
    }

    #[test]
    fn increment_matches_fixed_rule_oracle() {
        // Independent 2048-point Gauss-Legendre over θ on each side of the kink.
        for d in 3..=5u32 {
            let p = params(0.3, 1.3, d);
            let (r, s) = (40.0, 3.0);
            let q = s / r;
            let n = d as usize - 1;
            let f = |t: f64| {
                let len = r * t.sin();
                (revolve_volume_axial(len, q, 1.3, n) - revolve_volume_axial(len, 0.0, 1.3, n))
                    * t.sin().powi(d as i32 - 2)
            };
            let kink = (q / r).asin();
            let rule = GaussLegendre::new(2048);
            let total = rule.integrate(0.0, kink, f) + rule.integrate(kink, PI - kink, f) + rule.integrate(PI - kink, PI, f);
            let expect = total / beta_fn(0.5, (d as f64 - 1.0) / 2.0).unwrap();
            let got = mu_increment(&p, r, s).unwrap();
            assert!((got - expect).abs() < 1e-9 * expect, "d={d}: {got} vs {expect}");
        }
    }

    #[test]
    fn increment_tends_to_the_rate() {
        for d in 3..=5u32 {
            let p = params(1.0, 1.2, d);
            let limit = lambda_pc(&p);
            let devs: Vec<f64> = [100.0, 400.0, 1600.0]
                .iter()
                .map(|&r| (mu_increment(&p, r, 2.0).unwrap() / 2.0 - limit).abs())
                .collect();
            assert!(devs.windows(2).all(|w| w[1] < w[0]), "d={d}: {devs:?}");
        }
    }

    #[test]
    fn planar_survival_is_close_to_exponential() {
        let p = params(0.3, 1.0, 2);
        let v = conditional_survival_exact(&p, 10.0, 2.0).unwrap();
        assert!((v - (-0.3 * (2.0 + planar_excess(10.0, 2.0))).exp()).abs() < 1e-12);
    }

    #[test]
    fn line_count_is_poisson() {
        let p = params(0.05, 1.0, 3);
        let root = RngStream::new(77, 0);
        let n = 10_000;
        let mean_expect = 0.05 * PI * 100.0;
        let total: usize = (0..n).map(|i| sample_lines(&p, 10.0, &mut root.fork(i)).unwrap().len()).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - mean_expect).abs() < 4.0 * (mean_expect / n as f64).sqrt(), "{mean}");
    }

    fn avoidance_frequency(p: &CylinderParams, r: f64, n: u64, sampler: impl Fn(&mut RngStream) -> Vec<ObstacleLine>) -> f64 {
        let seg = SegmentToTarget::new(Vect::axis(p.d.as_usize(), 0, r)).unwrap();
        let root = RngStream::new(91, p.d.get() as u64);
        let free = (0..n)
            .filter(|&i| {
                sampler(&mut root.fork(i))
                    .iter()
                    .all(|l| dist_line_segment(l, &seg) > p.rho)
            })
            .count();
        free as f64 / n as f64
    }

    #[test]
    fn avoidance_matches_the_functional() {
        for d in [2u32, 3, 4] {
            let p = params(0.04, 1.0, d);
            let r = 8.0;
            let expect = visibility_probability(&p, r).unwrap();
            let n = 20_000;
            let sd = (expect * (1.0 - expect) / n as f64).sqrt();
            let ball = avoidance_frequency(&p, r, n, |rng| sample_lines(&p, r + 1.5, rng).unwrap());
            assert!((ball - expect).abs() < 3.0 * sd, "d={d} ball window: {ball} vs {expect}");
            let capsule = avoidance_frequency(&p, r, n, |rng| sample_capsule_lines(&p, r, 1.5, rng).unwrap());
            assert!((capsule - expect).abs() < 3.0 * sd, "d={d} capsule window: {capsule} vs {expect}");
        }
    }

    #[test]
    fn capsule_lines_all_hit_the_capsule() {
        for d in [2u32, 3, 5] {
            let p = params(0.5, 1.0, d);
            let seg = SegmentToTarget::new(Vect::axis(d as usize, 0, 20.0)).unwrap();
            let mut rng = RngStream::new(5, d as u64);
            for l in sample_capsule_lines(&p, 20.0, 2.0, &mut rng).unwrap() {
                assert!(dist_line_segment(&l, &seg) <= 2.0 + 1e-9);
            }
        }
    }

    #[test]
    fn isotropy_of_hits() {
        // A test ball at distance 5 is hit equally often from 8 directions.
        let p = params(0.02, 0.5, 3);
        let dirs: Vec<[f64; 3]> = (0..8)
            .map(|k| {
                let a = PI * k as f64 / 4.0;
                let z = if k % 2 == 0 { 0.6 } else { -0.6 };
                let s = (1.0f64 - z * z).sqrt();
                [s * a.cos(), s * a.sin(), z]
            })
            .collect();
        let root = RngStream::new(3, 3);
        let mut counts = [0u64; 8];
        let n = 4000;
        for i in 0..n {
            let lines = sample_lines(&p, 7.0, &mut root.fork(i)).unwrap();
            for (k, dvec) in dirs.iter().enumerate() {
                let center = Vect::new(dvec.iter().map(|c| 5.0 * c).collect()).unwrap();
                let seg = SegmentToTarget::new(center).unwrap();
                // hit iff the line passes within 1 of the test point
                let hit = lines.iter().any(|l| {
                    let diff: Vec<f64> = seg.target().iter().zip(l.base().iter()).map(|(a, b)| a - b).collect();
                    let t: f64 = diff.iter().zip(l.direction().iter()).map(|(a, b)| a * b).sum();
                    let perp2: f64 = diff.iter().zip(l.direction().iter()).map(|(a, b)| (a - t * b).powi(2)).sum();
                    perp2 <= 1.0
                });
                counts[k] += u64::from(hit);
            }
        }
        let mean = counts.iter().sum::<u64>() as f64 / 8.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - mean).powi(2) / mean).sum();
        // χ²_7 at p = 0.001 is 24.32
        assert!(chi2 < 24.32, "{counts:?} chi2={chi2}");
    }

    #[test]
    fn conditional_scenes_are_free() {
        let p = params(0.5, 1.0, 3);
        let mut rng = RngStream::new(2, 2);
        for _ in 0..20 {
            let scene = sample_conditional_scene(&p, 30.0, 0.5, &mut rng).unwrap();
            assert!(!scene.segment_blocked());
            sample_q(&scene, 0.5).unwrap();
        }
        let tiny = params(1e-12, 1.0, 3);
        assert!(sample_conditional_scene(&tiny, 30.0, 0.5, &mut rng).unwrap().is_empty());
    }
}
