//! Finite obstacle scenes around the segment `[0, r e_1]` and the visibility
//! radius they induce.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::geometry::{
    dist_line_segment, dist_point_segment, Aperture, Blocker, ObstacleBall, ObstacleLine,
    SegmentToTarget, Vect,
};
use crate::mathcore::{unit_ball_volume, RngStream};

/// A sampled obstacle together with its blocking radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstacle {
    Ball(ObstacleBall),
    Cylinder { line: ObstacleLine, radius: f64 },
}

impl Obstacle {
    pub fn blocker(&self) -> Blocker<'_> {
        match self {
            Obstacle::Ball(b) => Blocker::Ball(b),
            Obstacle::Cylinder { line, radius } => Blocker::Cylinder { line, radius: *radius },
        }
    }

    /// Whether the obstacle meets the segment `[0, x]`.
    pub fn blocks_segment(&self, seg: &SegmentToTarget) -> bool {
        match self {
            Obstacle::Ball(b) => dist_point_segment(b.center(), seg) <= b.radius(),
            Obstacle::Cylinder { line, radius } => dist_line_segment(line, seg) <= *radius,
        }
    }
}

/// The capsule `B([0, r e_1], radius)`: every obstacle able to reach the
/// capped cone has its core inside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplingWindow {
    pub dim: usize,
    pub axis_length: f64,
    pub radius: f64,
}

impl SamplingWindow {
    pub fn new(dim: usize, axis_length: f64, radius: f64) -> Result<Self> {
        if dim < 2 || !(axis_length > 0.0) || !(radius > 0.0) {
            return domain(format!(
                "capsule needs d >= 2 and positive extents, got d={dim}, r={axis_length}, R={radius}"
            ));
        }
        Ok(Self { dim, axis_length, radius })
    }

    pub fn volume(&self) -> f64 {
        let d = self.dim as u32;
        unit_ball_volume(d) * self.radius.powi(d as i32)
            + unit_ball_volume(d - 1) * self.radius.powi(d as i32 - 1) * self.axis_length
    }

    /// Uniform point of the capsule, by rejection from its bounding cylinder.
    pub fn sample_point(&self, rng: &mut RngStream) -> Vec<f64> {
        let mut p = vec![0.0; self.dim];
        loop {
            let u = -self.radius + (self.axis_length + 2.0 * self.radius) * rng.uniform();
            rng.fill_uniform_ball(&mut p[1..], self.radius);
            p[0] = u;
            let overshoot = if u < 0.0 {
                -u
            } else if u > self.axis_length {
                u - self.axis_length
            } else {
                0.0
            };
            let h2: f64 = p[1..].iter().map(|c| c * c).sum();
            if overshoot * overshoot + h2 <= self.radius * self.radius {
                return p;
            }
        }
    }
}

/// A finite list of obstacles around the segment to `target`.
#[derive(Debug, Clone, Serialize)]
pub struct ObstacleScene {
    target: Vect,
    obstacles: Vec<Obstacle>,
    window: SamplingWindow,
    conditioned: bool,
}

impl ObstacleScene {
    pub fn unconditioned(target: Vect, obstacles: Vec<Obstacle>, window: SamplingWindow) -> Self {
        Self { target, obstacles, window, conditioned: false }
    }

    /// A scene in which no obstacle meets `[0, target]`; checked here.
    pub fn conditioned(target: Vect, obstacles: Vec<Obstacle>, window: SamplingWindow) -> Result<Self> {
        let seg = SegmentToTarget::new(target.clone())?;
        if let Some(i) = obstacles.iter().position(|o| o.blocks_segment(&seg)) {
            return Err(Error::Precondition(format!(
                "obstacle {i} of a conditioned scene blocks the segment"
            )));
        }
        Ok(Self { target, obstacles, window, conditioned: true })
    }

    /// Restriction to the obstacles that leave the segment free.
    pub fn condition(self) -> Self {
        let seg = SegmentToTarget::new(self.target.clone()).expect("scene target is non-zero");
        let obstacles = self
            .obstacles
            .into_iter()
            .filter(|o| !o.blocks_segment(&seg))
            .collect();
        Self { obstacles, conditioned: true, ..self }
    }

    pub fn target(&self) -> &Vect {
        &self.target
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn window(&self) -> &SamplingWindow {
        &self.window
    }

    pub fn is_conditioned(&self) -> bool {
        self.conditioned
    }

    pub fn len(&self) -> usize {
        self.obstacles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obstacles.is_empty()
    }

    /// Whether some obstacle meets `[0, target]`.
    pub fn segment_blocked(&self) -> bool {
        let seg = SegmentToTarget::new(self.target.clone()).expect("scene target is non-zero");
        self.obstacles.iter().any(|o| o.blocks_segment(&seg))
    }
}

/// The visibility radius of a conditioned scene, capped at `q_cap`.
///
/// Each obstacle is first tested at the current minimum; only those that
/// block there need a bisection.
pub fn sample_q(scene: &ObstacleScene, q_cap: f64) -> Result<Aperture> {
    if !scene.conditioned {
        return Err(Error::Precondition("visibility radius needs a conditioned scene".into()));
    }
    let len = scene.target.norm();
    if !(q_cap > 0.0) || q_cap >= len {
        return domain(format!("aperture cap must lie in (0, |x|) = (0, {len}), got {q_cap}"));
    }
    let tol = 1e-9 * len;
    let mut best = Aperture { q: q_cap, censored: true };
    for o in &scene.obstacles {
        let view = o.blocker().planar_view(&scene.target);
        if view.clearance(best.q) > 0.0 {
            continue;
        }
        best = view.max_aperture(best.q, tol)?;
    }
    Ok(best)
}
