//! Segments, balls, lines and the thickened cone `B(hull({0} ∪ B(x, q)), t)`.
//!
//! Every cone distance is reduced to a planar problem: the hull is a body of
//! revolution about the axis through `0` and `x`, so the distance from a point
//! depends only on its axial coordinate `u` and radial offset `h`. Lines reduce
//! to the same planar problem after projecting along their direction.

mod aperture;
mod distance;
mod volume;

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use aperture::{max_aperture, Aperture, Blocker, PlanarView};
pub use distance::{
    axial_coords, dist_line_cone, dist_line_segment, dist_point_cone, dist_point_segment,
    hull_distance_planar,
};
pub use volume::{mc_volume_oracle, revolve_volume, revolve_volume_axial, BoundingBox};

/// A point of `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vect(Vec<f64>);

impl Vect {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return domain("a vector needs at least one coordinate");
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return domain("vector coordinates must be finite");
        }
        Ok(Self(coords))
    }

    /// `len * e_axis` in `R^dim`.
    pub fn axis(dim: usize, axis: usize, len: f64) -> Self {
        let mut v = vec![0.0; dim];
        v[axis] = len;
        Self(v)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Vect {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Vect {
    type Error = crate::Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Vect> for Vec<f64> {
    fn from(v: Vect) -> Vec<f64> {
        v.0
    }
}

/// The segment `[0, target]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentToTarget {
    target: Vect,
}

impl SegmentToTarget {
    pub fn new(target: Vect) -> Result<Self> {
        if target.norm() <= 0.0 {
            return domain("segment target must be non-zero");
        }
        Ok(Self { target })
    }

    pub fn target(&self) -> &Vect {
        &self.target
    }

    pub fn length(&self) -> f64 {
        self.target.norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstacleBall {
    center: Vect,
    radius: f64,
}

impl ObstacleBall {
    pub fn new(center: Vect, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return domain(format!("ball radius must be positive, got {radius}"));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &Vect {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// A line `{base + t * direction}` with a unit direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstacleLine {
    base: Vect,
    direction: Vect,
}

impl ObstacleLine {
    pub fn new(base: Vect, direction: Vect) -> Result<Self> {
        if base.dim() != direction.dim() {
            return domain("line base and direction differ in dimension");
        }
        if (direction.norm() - 1.0).abs() > 1e-12 {
            return domain(format!(
                "line direction must be a unit vector, norm is {}",
                direction.norm()
            ));
        }
        Ok(Self { base, direction })
    }

    pub fn base(&self) -> &Vect {
        &self.base
    }

    pub fn direction(&self) -> &Vect {
        &self.direction
    }
}

/// `hull({0} ∪ B(target, aperture))` with `0 <= aperture < |target|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    target: Vect,
    aperture: f64,
}

impl ConeSpec {
    pub fn new(target: Vect, aperture: f64) -> Result<Self> {
        let len = target.norm();
        if len <= 0.0 {
            return domain("cone target must be non-zero");
        }
        if !(aperture >= 0.0) || aperture >= len {
            return domain(format!(
                "cone aperture must lie in [0, |x|) = [0, {len}), got {aperture}"
            ));
        }
        Ok(Self { target, aperture })
    }

    pub fn target(&self) -> &Vect {
        &self.target
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    pub fn axis_length(&self) -> f64 {
        self.target.norm()
    }
}

/// The closed `thickness`-neighbourhood of a [`ConeSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct ThickenedCone {
    cone: ConeSpec,
    thickness: f64,
}

impl ThickenedCone {
    pub fn new(cone: ConeSpec, thickness: f64) -> Result<Self> {
        if !(thickness >= 0.0) || !thickness.is_finite() {
            return domain(format!("thickness must be non-negative, got {thickness}"));
        }
        Ok(Self { cone, thickness })
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        dist_point_cone(p, &self.cone) <= self.thickness
    }

    /// Axis-aligned box containing the body.
    pub fn bounding_box(&self) -> BoundingBox {
        let x = self.cone.target();
        let reach = self.cone.aperture() + self.thickness;
        let lo = x.iter().map(|&c| c.min(0.0) - reach).collect();
        let hi = x.iter().map(|&c| c.max(0.0) + reach).collect();
        BoundingBox::new(lo, hi).expect("box of a finite body is valid")
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
