use super::distance::{axial_coords, hull_distance_planar, line_planar_coords};
use super::{ObstacleBall, ObstacleLine, Vect};
use crate::error::{domain, Error, Result};

/// An obstacle together with the radius at which it blocks a sight line.
#[derive(Debug, Clone, Copy)]
pub enum Blocker<'a> {
    /// A ball blocks when it touches the cone.
    Ball(&'a ObstacleBall),
    /// A line blocks when it comes within `radius` of the cone.
    Cylinder { line: &'a ObstacleLine, radius: f64 },
}

impl Blocker<'_> {
    /// Reduces the obstacle to the planar problem for the cone axis `target`.
    pub fn planar_view(&self, target: &[f64]) -> PlanarView {
        match *self {
            Blocker::Ball(ball) => {
                let (u, h, len) = axial_coords(ball.center(), target);
                PlanarView::new(u, h, len, ball.radius())
            }
            Blocker::Cylinder { line, radius } => {
                let (u, h, len) = line_planar_coords(line, target);
                PlanarView::new(u, h, len, radius)
            }
        }
    }
}

/// An obstacle seen from the cone axis: planar coordinates `(u, h)` of its
/// core, the axis length and its blocking radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarView {
    pub u: f64,
    pub h: f64,
    pub len: f64,
    pub radius: f64,
}

/// Result of the aperture search; `censored` means the cap was reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aperture {
    pub q: f64,
    pub censored: bool,
}

impl PlanarView {
    pub fn new(u: f64, h: f64, len: f64, radius: f64) -> Self {
        Self { u, h, len, radius }
    }

    /// Gap between the obstacle and the cone of aperture `q`; blocked iff `<= 0`.
    pub fn clearance(&self, q: f64) -> f64 {
        hull_distance_planar(self.u, self.h, self.len, q) - self.radius
    }

    /// Largest `q <= q_cap` for which the obstacle leaves the cone of aperture
    /// `q` untouched, by bisection to absolute tolerance `tol`.
    pub fn max_aperture(&self, q_cap: f64, tol: f64) -> Result<Aperture> {
        let at_zero = self.clearance(0.0);
        if at_zero < 0.0 {
            return Err(Error::Precondition(format!(
                "obstacle already blocks the segment (clearance {at_zero})"
            )));
        }
        if at_zero == 0.0 {
            return Ok(Aperture { q: 0.0, censored: false });
        }
        if self.clearance(q_cap) > 0.0 {
            return Ok(Aperture { q: q_cap, censored: true });
        }
        let (mut lo, mut hi) = (0.0, q_cap);
        let mut last_open = at_zero;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            let gap = self.clearance(mid);
            if gap > 0.0 {
                debug_assert!(gap <= last_open + 1e-12, "blocking predicate is not monotone");
                last_open = gap;
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Aperture { q: 0.5 * (lo + hi), censored: false })
    }
}

/// Largest aperture `q <= q_cap` such that `obstacle` blocks no sight line
/// from `0` to a point of `B(x, q)`.
///
/// Fails when the obstacle already blocks the segment `[0, x]`.
pub fn max_aperture(obstacle: Blocker<'_>, x: &Vect, q_cap: f64) -> Result<Aperture> {
    let len = x.norm();
    if !(q_cap > 0.0) || q_cap >= len {
        return domain(format!("aperture cap must lie in (0, |x|) = (0, {len}), got {q_cap}"));
    }
    obstacle
        .planar_view(x)
        .max_aperture(q_cap, 1e-9 * len)
}
