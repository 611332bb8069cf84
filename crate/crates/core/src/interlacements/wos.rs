use rayon::prelude::*;
use serde::Serialize;

use super::shapes::TargetShape;
use crate::error::{domain, Error, Result};
use crate::mathcore::{green_constant, integrate_adaptive, Dimension, RngStream};

/// Walkers per deterministic work unit.
const CHUNK: u64 = 2048;

/// How walkers are launched for capacity estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Launch {
    /// Uniform on the sphere of this radius about the shape centre.
    Sphere { radius: f64 },
    /// Equilibrium measure of the spheroid with semi-axis `along` on the
    /// shape axis and `across` in the orthogonal directions.
    Spheroid { along: f64, across: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WosConfig {
    /// A walker closer than this to the target counts as a hit.
    pub hit_tolerance: f64,
    /// Walkers beyond this distance from `center` play roulette.
    pub outer_radius: f64,
    /// The target lies inside `B(center, enclosing_radius)`.
    pub enclosing_radius: f64,
    pub center: Vec<f64>,
    /// Unit axis for spheroid launches.
    pub axis: Option<Vec<f64>>,
    pub launch: Launch,
    pub max_steps: u64,
    /// Re-enter with the exact return probability instead of stopping.
    pub roulette: bool,
}

impl WosConfig {
    /// Defaults: tolerance `1e-6 R_K`, roulette at `4 R_K`, sphere launch at
    /// `2 R_K` for balls and the smallest enclosing spheroid of the
    /// surrounding capsule otherwise.
    pub fn for_shape(shape: &TargetShape) -> Result<Self> {
        let rk = shape.enclosing_radius();
        let launch = match shape {
            TargetShape::Ball { .. } => Launch::Sphere { radius: 2.0 * rk },
            _ => {
                let (half, radius) = shape.capsule();
                let (along, across) = enclosing_spheroid(Dimension::new(shape.dim() as u32)?, half, radius)?;
                Launch::Spheroid { along, across }
            }
        };
        Ok(Self {
            hit_tolerance: 1e-6 * rk,
            outer_radius: 4.0 * rk,
            enclosing_radius: rk,
            center: shape.center(),
            axis: shape.axis(),
            launch,
            max_steps: 1_000_000,
            roulette: true,
        })
    }

    pub fn with_sphere_launch(mut self, radius: f64) -> Self {
        self.launch = Launch::Sphere { radius };
        self
    }

    pub fn with_roulette(mut self, roulette: bool) -> Self {
        self.roulette = roulette;
        self
    }

    fn validate(&self, shape: &TargetShape) -> Result<Dimension> {
        let d = Dimension::new(shape.dim() as u32)?.require_transient()?;
        if self.center.len() != shape.dim() {
            return domain("configuration centre and shape differ in dimension");
        }
        if !(self.hit_tolerance > 0.0) {
            return domain("hit tolerance must be positive");
        }
        if !(self.outer_radius >= self.enclosing_radius) || !(self.enclosing_radius > 0.0) {
            return domain("outer radius must be at least the enclosing radius");
        }
        if let Launch::Sphere { radius } = self.launch {
            if radius <= self.enclosing_radius {
                return domain("launch sphere must enclose the target");
            }
        }
        Ok(d)
    }

    /// Total mass of the launch measure: the capacity of the launch body.
    pub fn launch_mass(&self, d: Dimension) -> Result<f64> {
        match self.launch {
            Launch::Sphere { radius } => Ok(radius.powi(d.get() as i32 - 2) / green_constant(d)?),
            Launch::Spheroid { along, across } => spheroid_capacity(d, along, across),
        }
    }

    fn launch_point(&self, rng: &mut RngStream, out: &mut [f64]) {
        rng.fill_unit_sphere(out);
        match self.launch {
            Launch::Sphere { radius } => out.iter_mut().for_each(|x| *x *= radius),
            Launch::Spheroid { along, across } => {
                let axis = self.axis.as_ref().expect("spheroid launch needs an axis");
                let t: f64 = out.iter().zip(axis).map(|(a, b)| a * b).sum();
                for (x, e) in out.iter_mut().zip(axis) {
                    *x = across * (*x - t * e) + along * t * e;
                }
            }
        }
        out.iter_mut().zip(&self.center).for_each(|(x, c)| *x += c);
    }
}

/// `cap(E)` for the spheroid with semi-axes `along` (once) and `across`
/// (`d - 1` times): `2 / ((d-2) γ_d ∫_0^∞ ∏ (a_i² + t)^{-1/2} dt)`.
pub fn spheroid_capacity(d: Dimension, along: f64, across: f64) -> Result<f64> {
    let d_f = d.as_f64();
    if !(along > 0.0) || !(across > 0.0) {
        return domain("spheroid semi-axes must be positive");
    }
    // t = across² (1/u² - 1) maps [0, ∞) onto (0, 1].
    let b2 = across * across;
    let integrand = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let t = b2 * (1.0 / (u * u) - 1.0);
        let jac = 2.0 * b2 / (u * u * u);
        jac * (along * along + t).powf(-0.5) * (b2 + t).powf(-(d_f - 1.0) / 2.0)
    };
    let scale = (along / across).max(1.0);
    let knot = (1.0 / scale).clamp(1e-12, 1.0);
    let integral = integrate_adaptive(integrand, 0.0, knot, 0.0, 1e-13) + integrate_adaptive(integrand, knot, 1.0, 0.0, 1e-13);
    Ok(2.0 / ((d_f - 2.0) * green_constant(d)? * integral))
}

/// The spheroid of least capacity containing the capsule with axis
/// half-length `half` and radius `radius`.
pub fn enclosing_spheroid(d: Dimension, half: f64, radius: f64) -> Result<(f64, f64)> {
    let along_for = |across: f64| {
        let n = 4096;
        let mut worst: f64 = 0.0;
        for k in 0..=n {
            let phi = std::f64::consts::FRAC_PI_2 * k as f64 / n as f64;
            let x = half + radius * phi.cos();
            let y = radius * phi.sin();
            worst = worst.max(x * x / (1.0 - (y / across).powi(2)));
        }
        worst.sqrt() * (1.0 + 1e-6)
    };
    let cap = |beta: f64| {
        let across = radius * beta;
        spheroid_capacity(d, along_for(across), across).unwrap_or(f64::INFINITY)
    };
    // Golden-section search over across / radius.
    let (mut lo, mut hi) = (1.0 + 1e-6, 8.0);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (cap(x1), cap(x2));
    for _ in 0..60 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = cap(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = cap(x2);
        }
    }
    let across = radius * 0.5 * (lo + hi);
    Ok((along_for(across), across))
}

/// Moves the walker at `x` (outside the target) until it comes within the
/// hit tolerance of the set described by `dist` or escapes for good.
fn walk(
    dist: impl Fn(&[f64]) -> f64,
    x: &mut [f64],
    cfg: &WosConfig,
    d: Dimension,
    rng: &mut RngStream,
    dir: &mut [f64],
) -> Result<bool> {
    let dm2 = d.get() as i32 - 2;
    let rk = cfg.enclosing_radius;
    let mut steps = 0u64;
    loop {
        let gap = dist(x);
        if gap < cfg.hit_tolerance {
            return Ok(true);
        }
        let far2: f64 = x.iter().zip(&cfg.center).map(|(a, c)| (a - c) * (a - c)).sum();
        if far2 >= cfg.outer_radius * cfg.outer_radius {
            let far = far2.sqrt();
            if !cfg.roulette || rng.uniform() >= (rk / far).powi(dm2) {
                return Ok(false);
            }
            reenter(x, &cfg.center, far, rk, d, rng, dir);
            continue;
        }
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::StepLimit { max_steps: cfg.max_steps });
        }
        rng.fill_unit_sphere(dir);
        x.iter_mut().zip(dir.iter()).for_each(|(xi, di)| *xi += gap * di);
    }
}

/// Places the walker at `x` (distance `far` from `center`) on the sphere
/// `∂B(center, rk)` according to the harmonic measure seen from `x`, whose
/// density is proportional to `|x - z|^{-d}`; drawn by rejection from the
/// uniform law with acceptance `((far - rk) / |x - z|)^d`.
fn reenter(x: &mut [f64], center: &[f64], far: f64, rk: f64, d: Dimension, rng: &mut RngStream, z: &mut [f64]) {
    let n = d.get() as i32;
    loop {
        rng.fill_unit_sphere(z);
        let mut gap2 = 0.0;
        for i in 0..z.len() {
            z[i] = center[i] + rk * z[i];
            gap2 += (x[i] - z[i]) * (x[i] - z[i]);
        }
        if rng.uniform() < ((far - rk) / gap2.sqrt()).powi(n) {
            x.copy_from_slice(z);
            return;
        }
    }
}

/// One Bernoulli sample of `{H_shape < ∞}` for Brownian motion from `start`.
pub fn wos_hits(shape: &TargetShape, start: &[f64], cfg: &WosConfig, rng: &mut RngStream) -> Result<bool> {
    let d = cfg.validate(shape)?;
    if start.len() != shape.dim() {
        return domain("start point and shape differ in dimension");
    }
    let mut x = start.to_vec();
    let mut dir = vec![0.0; x.len()];
    walk(|p| shape.distance(p), &mut x, cfg, d, rng, &mut dir)
}

/// Number of leading shapes of the decreasing sequence `shapes` hit by one
/// walker: after hitting `shapes[k]` the same trajectory continues against
/// `shapes[k + 1]`, which by the strong Markov property is a sample of
/// hitting the inner set. A walker hitting an inner set hits every outer one.
fn nested_depth(shapes: &[TargetShape], start: &mut [f64], cfg: &WosConfig, d: Dimension, rng: &mut RngStream, dir: &mut [f64]) -> Result<usize> {
    for (k, shape) in shapes.iter().enumerate() {
        if !walk(|p| shape.distance(p), start, cfg, d, rng, dir)? {
            return Ok(k);
        }
    }
    Ok(shapes.len())
}

/// Launches `n` walkers from the configured launch measure and tallies how
/// many reach each depth of the nested sequence. `counts[k]` is the number
/// of walkers hitting `shapes[k]`.
pub(crate) fn nested_counts(shapes: &[TargetShape], cfg: &WosConfig, n: u64, stream: &RngStream) -> Result<Vec<u64>> {
    let first = shapes.first().ok_or_else(|| Error::Domain("no target shapes".into()))?;
    let d = cfg.validate(first)?;
    for pair in shapes.windows(2) {
        if !pair[0].contains_shape(&pair[1]) && pair[0] != pair[1] {
            return domain("coupled shapes must be nested, outermost first");
        }
    }
    let chunks = n.div_ceil(CHUNK);
    let per_chunk = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream.fork(c);
            let mut hist = vec![0u64; shapes.len() + 1];
            let mut x = vec![0.0; d.as_usize()];
            let mut dir = vec![0.0; d.as_usize()];
            for _ in 0..CHUNK.min(n - c * CHUNK) {
                cfg.launch_point(&mut rng, &mut x);
                hist[nested_depth(shapes, &mut x, cfg, d, &mut rng, &mut dir)?] += 1;
            }
            Ok(hist)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut hist = vec![0u64; shapes.len() + 1];
    for h in per_chunk {
        hist.iter_mut().zip(h).for_each(|(a, b)| *a += b);
    }
    // counts[k] = walkers with depth > k
    let mut counts = vec![0u64; shapes.len()];
    let mut acc = 0;
    for k in (0..shapes.len()).rev() {
        acc += hist[k + 1];
        counts[k] = acc;
    }
    Ok(counts)
}

/// Number of walkers out of `n`, all started at `start`, that never hit `shape`.
pub(crate) fn count_misses(shape: &TargetShape, start: &[f64], cfg: &WosConfig, n: u64, stream: &RngStream) -> Result<u64> {
    let d = cfg.validate(shape)?;
    if start.len() != shape.dim() {
        return domain("start point and shape differ in dimension");
    }
    let chunks = n.div_ceil(CHUNK);
    let per_chunk = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream.fork(c);
            let mut x = vec![0.0; start.len()];
            let mut dir = vec![0.0; start.len()];
            let mut misses = 0u64;
            for _ in 0..CHUNK.min(n - c * CHUNK) {
                x.copy_from_slice(start);
                if !walk(|p| shape.distance(p), &mut x, cfg, d, &mut rng, &mut dir)? {
                    misses += 1;
                }
            }
            Ok(misses)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_chunk.into_iter().sum())
}

/// A Monte Carlo capacity with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_walkers: u64,
    /// Bound on the systematic error: the hit tolerance inflates the target
    /// to `B(K, ε) ⊂ (1 + ε/ρ_in) K`, so its capacity exceeds `cap(K)` by at
    /// most `(1 + ε/ρ_in)^{d-2} - 1` relative; without roulette a walker
    /// stopped at `R_out` would have returned with probability at most
    /// `(R_K/R_out)^{d-2}`.
    pub bias_bound: f64,
}

/// `cap(shape)` as launch mass times the hit frequency of `n` walkers.
pub fn estimate_capacity(shape: &TargetShape, cfg: &WosConfig, n: u64, stream: &RngStream) -> Result<CapacityEstimate> {
    if n == 0 {
        return domain("capacity estimate needs at least one walker");
    }
    let d = cfg.validate(shape)?;
    let mass = cfg.launch_mass(d)?;
    let hits = nested_counts(std::slice::from_ref(shape), cfg, n, stream)?[0];
    let p = hits as f64 / n as f64;
    let value = mass * p;
    let stderr = mass * (p * (1.0 - p) / n as f64).sqrt();
    let dm2 = d.get() as i32 - 2;
    let mut bias_bound = ((1.0 + cfg.hit_tolerance / shape.inradius()).powi(dm2) - 1.0) * value;
    if !cfg.roulette {
        bias_bound += mass * (1.0 - p) * (cfg.enclosing_radius / cfg.outer_radius).powi(dm2);
    }
    Ok(CapacityEstimate { value, stderr, n_walkers: n, bias_bound })
}
