use serde::Serialize;

use crate::error::{domain, Result};
use crate::geometry::{axial_coords, hull_distance_planar, Vect};

/// A compact target set with an exact distance function.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetShape {
    Ball { center: Vect, radius: f64 },
    /// `B([0, target], rho)`.
    SegmentCylinder { target: Vect, rho: f64 },
    /// `B(hull({0} ∪ B(target, aperture)), rho)`.
    Cone { target: Vect, aperture: f64, rho: f64 },
}

impl TargetShape {
    pub fn ball(center: Vect, radius: f64) -> Result<Self> {
        positive("ball radius", radius)?;
        Ok(Self::Ball { center, radius })
    }

    pub fn segment_cylinder(target: Vect, rho: f64) -> Result<Self> {
        positive("cylinder radius", rho)?;
        positive("axis length", target.norm())?;
        Ok(Self::SegmentCylinder { target, rho })
    }

    pub fn cone(target: Vect, aperture: f64, rho: f64) -> Result<Self> {
        positive("cylinder radius", rho)?;
        let len = target.norm();
        if !(aperture >= 0.0) || aperture >= len {
            return domain(format!("cone aperture must lie in [0, |x|) = [0, {len}), got {aperture}"));
        }
        Ok(Self::Cone { target, aperture, rho })
    }

    /// `ℓ_{r e_1}(ρ)` in `R^d`.
    pub fn axis_cylinder(d: usize, r: f64, rho: f64) -> Result<Self> {
        Self::segment_cylinder(Vect::axis(d, 0, r), rho)
    }

    /// `ℓ_{r e_1}^q(ρ)` in `R^d`.
    pub fn axis_cone(d: usize, r: f64, q: f64, rho: f64) -> Result<Self> {
        Self::cone(Vect::axis(d, 0, r), q, rho)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { center, .. } => center.dim(),
            Self::SegmentCylinder { target, .. } | Self::Cone { target, .. } => target.dim(),
        }
    }

    /// Distance from `p` to the set, zero inside.
    pub fn distance(&self, p: &[f64]) -> f64 {
        match self {
            Self::Ball { center, radius } => {
                let d2: f64 = p.iter().zip(center.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2.sqrt() - radius).max(0.0)
            }
            Self::SegmentCylinder { target, rho } => {
                let (u, h, len) = axial_coords(p, target);
                (hull_distance_planar(u, h, len, 0.0) - rho).max(0.0)
            }
            Self::Cone { target, aperture, rho } => {
                let (u, h, len) = axial_coords(p, target);
                (hull_distance_planar(u, h, len, *aperture) - rho).max(0.0)
            }
        }
    }

    /// Midpoint of the axis (or the ball centre).
    pub fn center(&self) -> Vec<f64> {
        match self {
            Self::Ball { center, .. } => center.to_vec(),
            Self::SegmentCylinder { target, .. } | Self::Cone { target, .. } => {
                target.iter().map(|c| 0.5 * c).collect()
            }
        }
    }

    /// Unit axis direction; `None` for balls.
    pub fn axis(&self) -> Option<Vec<f64>> {
        match self {
            Self::Ball { .. } => None,
            Self::SegmentCylinder { target, .. } | Self::Cone { target, .. } => {
                let len = target.norm();
                Some(target.iter().map(|c| c / len).collect())
            }
        }
    }

    /// Half-length of the axis and radius of a capsule about it containing
    /// the set. The thickened cone lies in `B([0, x], q + ρ)`.
    pub fn capsule(&self) -> (f64, f64) {
        match self {
            Self::Ball { radius, .. } => (0.0, *radius),
            Self::SegmentCylinder { target, rho } => (0.5 * target.norm(), *rho),
            Self::Cone { target, aperture, rho } => (0.5 * target.norm(), aperture + rho),
        }
    }

    /// Radius of a ball about [`Self::center`] containing the set.
    pub fn enclosing_radius(&self) -> f64 {
        let (half, radius) = self.capsule();
        half + radius
    }

    /// Radius of a ball contained in the set. A convex set containing
    /// `B(c, ρ_in)` satisfies `B(K, ε) ⊂ c + (1 + ε/ρ_in)(K - c)`.
    pub fn inradius(&self) -> f64 {
        match self {
            Self::Ball { radius, .. } => *radius,
            Self::SegmentCylinder { rho, .. } | Self::Cone { rho, .. } => *rho,
        }
    }

    /// Whether `other` is a subset of `self` (only decided for the nested
    /// cones and cylinders sharing an axis used by the coupled estimator).
    pub(crate) fn contains_shape(&self, other: &TargetShape) -> bool {
        let key = |s: &TargetShape| match s {
            TargetShape::SegmentCylinder { target, rho } => Some((target.clone(), 0.0, *rho)),
            TargetShape::Cone { target, aperture, rho } => Some((target.clone(), *aperture, *rho)),
            TargetShape::Ball { .. } => None,
        };
        match (key(self), key(other)) {
            (Some((t1, q1, r1)), Some((t2, q2, r2))) => t1 == t2 && q1 >= q2 && r1 >= r2,
            _ => false,
        }
    }
}

fn positive(what: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return domain(format!("{what} must be positive, got {v}"));
    }
    Ok(())
}
