use super::{dot, norm, ConeSpec, ObstacleLine, SegmentToTarget};

/// Axial coordinate `u`, radial offset `h >= 0` and axis length of `p`
/// relative to the axis through `0` and `target`.
///
/// The radial part is accumulated component-wise so that small offsets from
/// long axes keep their precision.
pub fn axial_coords(p: &[f64], target: &[f64]) -> (f64, f64, f64) {
    let len = norm(target);
    if len == 0.0 {
        return (0.0, norm(p), 0.0);
    }
    let u = dot(p, target) / len;
    let scale = u / len;
    let h2: f64 = p
        .iter()
        .zip(target)
        .map(|(&pi, &ti)| {
            let r = pi - scale * ti;
            r * r
        })
        .sum();
    (u, h2.sqrt(), len)
}

/// Distance from the planar point `(u, h)` to `hull({0} ∪ B((len, 0), q))`.
///
/// Valid for every `q >= 0`, including the degenerate hull `B((len, 0), q)`
/// when the ball swallows the apex.
pub fn hull_distance_planar(u: f64, h: f64, len: f64, q: f64) -> f64 {
    let h = h.abs();
    let to_center = (u - len).hypot(h);
    if q >= len {
        return (to_center - q).max(0.0);
    }
    if to_center <= q {
        return 0.0;
    }
    // Upper generator runs from the apex to the tangent point T on the ball.
    let sin_b = q / len;
    let cos_b = (1.0 - sin_b * sin_b).sqrt();
    let tangent_len = (len * len - q * q).sqrt();
    let u_t = tangent_len * cos_b;
    let along = u * cos_b + h * sin_b;
    let outward = h * cos_b - u * sin_b;
    if outward <= 0.0 && u >= 0.0 && u <= u_t {
        return 0.0;
    }
    let generator = if along <= 0.0 {
        u.hypot(h)
    } else if along >= tangent_len {
        (u - u_t).hypot(h - tangent_len * sin_b)
    } else {
        outward.abs()
    };
    generator.min(to_center - q)
}

/// Euclidean distance from `c` to the segment `[0, x]`.
pub fn dist_point_segment(c: &[f64], seg: &SegmentToTarget) -> f64 {
    let (u, h, len) = axial_coords(c, seg.target());
    segment_distance_planar(u, h, len)
}

pub(crate) fn segment_distance_planar(u: f64, h: f64, len: f64) -> f64 {
    if u <= 0.0 {
        u.hypot(h)
    } else if u >= len {
        (u - len).hypot(h)
    } else {
        h
    }
}

/// Euclidean distance from `c` to `hull({0} ∪ B(x, q))`; zero inside.
pub fn dist_point_cone(c: &[f64], cone: &ConeSpec) -> f64 {
    let (u, h, len) = axial_coords(c, cone.target());
    hull_distance_planar(u, h, len, cone.aperture())
}

/// Projects `v` onto the orthogonal complement of the unit vector `dir`.
pub(crate) fn project_out(v: &[f64], dir: &[f64]) -> Vec<f64> {
    let s = dot(v, dir);
    v.iter().zip(dir).map(|(&a, &b)| a - s * b).collect()
}

/// Planar coordinates of `line` against the cone axis after projecting along
/// the line direction: `(u, h, len)` of the projected base point relative to
/// the projected target.
pub(crate) fn line_planar_coords(line: &ObstacleLine, target: &[f64]) -> (f64, f64, f64) {
    let dir = line.direction();
    let base = project_out(line.base(), dir);
    let axis = project_out(target, dir);
    let len = norm(&axis);
    if len <= 1e-300 {
        return (0.0, norm(&base), 0.0);
    }
    axial_coords(&base, &axis)
}

/// Infimum over line points `p` of [`dist_point_cone`].
///
/// Computed exactly: the distance from a line to a convex set equals the
/// distance, inside the hyperplane orthogonal to the line, between the
/// projections, and the projection of the cone is the lower-dimensional cone
/// spanned by the projected target with the same aperture.
pub fn dist_line_cone(line: &ObstacleLine, cone: &ConeSpec) -> f64 {
    let (u, h, len) = line_planar_coords(line, cone.target());
    hull_distance_planar(u, h, len, cone.aperture())
}

/// Distance between a line and the segment `[0, x]`.
pub fn dist_line_segment(line: &ObstacleLine, seg: &SegmentToTarget) -> f64 {
    let (u, h, len) = line_planar_coords(line, seg.target());
    segment_distance_planar(u, h, len)
}

#[cfg(test)]
mod tests {
    use super::super::{ThickenedCone, Vect};
    use super::*;
    use crate::mathcore::RngStream;
    use proptest::prelude::*;

    fn v(c: &[f64]) -> Vect {
        Vect::new(c.to_vec()).unwrap()
    }

    fn cone(x: &[f64], q: f64) -> ConeSpec {
        ConeSpec::new(v(x), q).unwrap()
    }

    /// Brute-force distance to the hull: minimise over the segments `[0, y]`
    /// for `y` on a dense sample of the boundary circle of `B(x, q)` in the
    /// plane of `c`, counting the thin triangles between neighbouring segments
    /// as inside.
    fn brute_planar(c: [f64; 2], len: f64, q: f64) -> f64 {
        let mut best = f64::INFINITY;
        let n = 20_000;
        let cross = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];
        let mut prev = [len + q, 0.0];
        for k in 0..=n {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            let y = [len + q * a.cos(), q * a.sin()];
            let (s1, s2) = (cross(prev, c), cross(c, y));
            let s3 = cross([y[0] - prev[0], y[1] - prev[1]], [c[0] - prev[0], c[1] - prev[1]]);
            let side = cross(prev, y).signum();
            if k > 0 && s1 * side >= 0.0 && s2 * side >= 0.0 && s3 * side >= 0.0 {
                return 0.0;
            }
            prev = y;
            // distance from c to segment [0, y]
            let yy = y[0] * y[0] + y[1] * y[1];
            let t = ((c[0] * y[0] + c[1] * y[1]) / yy).clamp(0.0, 1.0);
            let d = (c[0] - t * y[0]).hypot(c[1] - t * y[1]);
            best = best.min(d);
        }
        // Interior points of B(x, q) also belong to the hull.
        let to_ball = ((c[0] - len).hypot(c[1]) - q).max(0.0);
        best.min(to_ball)
    }

    #[test]
    fn segment_examples() {
        let seg = SegmentToTarget::new(v(&[10.0, 0.0])).unwrap();
        assert_eq!(dist_point_segment(&[10.0, 0.0], &seg), 0.0);
        assert!((dist_point_segment(&[5.0, 3.0], &seg) - 3.0).abs() < 1e-12);
        assert!((dist_point_segment(&[13.0, 4.0], &seg) - 5.0).abs() < 1e-12);
        assert!((dist_point_segment(&[-3.0, -4.0], &seg) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn cone_examples() {
        let c = cone(&[10.0, 0.0], 1.0);
        assert_eq!(dist_point_cone(&[0.0, 0.0], &c), 0.0);
        assert!((dist_point_cone(&[10.0, 3.0], &c) - 2.0).abs() < 1e-12);
        // Collinear beyond the target: u|x| - q.
        for u in [0.05, 0.5, 2.0] {
            let p = [10.0 * (1.0 + u), 0.0];
            assert!((dist_point_cone(&p, &c) - (10.0 * u - 1.0).max(0.0)).abs() < 1e-12);
        }
        // Inside the cone part.
        assert_eq!(dist_point_cone(&[5.0, 0.2], &c), 0.0);
        // Behind the apex.
        assert!((dist_point_cone(&[-3.0, 0.0], &c) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_aperture_is_the_segment() {
        let seg = SegmentToTarget::new(v(&[4.0, 1.0, -2.0])).unwrap();
        let c = cone(&[4.0, 1.0, -2.0], 0.0);
        let mut rng = RngStream::new(1, 0);
        for _ in 0..1000 {
            let p: Vec<f64> = (0..3).map(|_| 10.0 * rng.uniform() - 5.0).collect();
            let a = dist_point_segment(&p, &seg);
            let b = dist_point_cone(&p, &c);
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn matches_brute_force_in_the_plane() {
        let mut rng = RngStream::new(7, 0);
        for _ in 0..200 {
            let len = 1.0 + 9.0 * rng.uniform();
            let q = 0.95 * len * rng.uniform();
            let p = [-4.0 + 18.0 * rng.uniform(), 6.0 * rng.uniform()];
            let exact = hull_distance_planar(p[0], p[1], len, q);
            let brute = brute_planar(p, len, q);
            assert!((exact - brute).abs() < 1e-5, "p={p:?} len={len} q={q}: {exact} vs {brute}");
        }
    }

    #[test]
    fn degenerate_hull_is_the_ball() {
        assert!((hull_distance_planar(0.0, 0.0, 1.0, 2.0)).abs() < 1e-15);
        assert!((hull_distance_planar(1.0, 5.0, 1.0, 2.0) - 3.0).abs() < 1e-12);
        assert!((hull_distance_planar(3.0, 4.0, 0.0, 1.0) - 4.0).abs() < 1e-12);
    }

    /// Ternary search over the line parameter with `dist_point_cone` as the
    /// objective; independent of the projection identity.
    fn line_cone_by_search(line: &ObstacleLine, c: &ConeSpec) -> f64 {
        let b = line.base();
        let u = line.direction();
        let t0 = -dot(b, u);
        let span = 4.0 * (c.axis_length() + c.aperture()) + norm(b);
        let (mut lo, mut hi) = (t0 - span, t0 + span);
        let at = |t: f64| {
            let p: Vec<f64> = b.iter().zip(u.iter()).map(|(bi, ui)| bi + t * ui).collect();
            dist_point_cone(&p, c)
        };
        for _ in 0..300 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if at(m1) <= at(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        at(0.5 * (lo + hi))
    }

    #[test]
    fn line_examples() {
        let through_origin =
            ObstacleLine::new(v(&[0.0, 0.0, 0.0]), v(&[0.0, 0.6, 0.8])).unwrap();
        assert!(dist_line_cone(&through_origin, &cone(&[10.0, 0.0, 0.0], 1.0)) < 1e-12);
        let parallel = ObstacleLine::new(v(&[0.0, 5.0, 0.0]), v(&[1.0, 0.0, 0.0])).unwrap();
        assert!((dist_line_cone(&parallel, &cone(&[10.0, 0.0, 0.0], 0.0)) - 5.0).abs() < 1e-12);
        let seg = SegmentToTarget::new(v(&[10.0, 0.0, 0.0])).unwrap();
        assert!((dist_line_segment(&parallel, &seg) - 5.0).abs() < 1e-12);
        // Parallel line against a cone of aperture 1: the end ball is the
        // closest part, so the distance is 5 - 1.
        let d = dist_line_cone(&parallel, &cone(&[10.0, 0.0, 0.0], 1.0));
        let oracle = line_cone_by_search(&parallel, &cone(&[10.0, 0.0, 0.0], 1.0));
        assert!((d - oracle).abs() < 1e-8, "{d} vs {oracle}");
        assert!((d - 4.0).abs() < 1e-12);
    }

    #[test]
    fn line_distance_matches_search_oracle() {
        let mut rng = RngStream::new(11, 3);
        for d in [2usize, 3, 4, 5] {
            for _ in 0..100 {
                let x: Vec<f64> = (0..d).map(|_| 8.0 * rng.gaussian()).collect();
                let len = norm(&x);
                let c = cone(&x, 0.9 * len * rng.uniform());
                let base: Vec<f64> = (0..d).map(|_| 6.0 * rng.gaussian()).collect();
                let dir = rng.unit_sphere(d);
                let line = ObstacleLine::new(v(&base), v(&dir)).unwrap();
                let exact = dist_line_cone(&line, &c);
                let oracle = line_cone_by_search(&line, &c);
                assert!(
                    (exact - oracle).abs() < 1e-7 * (1.0 + len),
                    "d={d}: {exact} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn thickened_cone_membership() {
        let body = ThickenedCone::new(cone(&[10.0, 0.0], 1.0), 0.5).unwrap();
        assert!(body.contains(&[10.0, 1.4]));
        assert!(!body.contains(&[10.0, 1.6]));
        assert!(body.contains(&[-0.4, 0.0]));
    }

    proptest! {
        #[test]
        fn cone_grows_with_aperture(
            cx in -20.0f64..20.0, cy in -20.0f64..20.0, cz in -20.0f64..20.0,
            len in 0.5f64..15.0, f1 in 0.0f64..1.0, f2 in 0.0f64..1.0,
        ) {
            let q1 = 0.99 * len * f1.min(f2);
            let q2 = 0.99 * len * f1.max(f2);
            let p = [cx, cy, cz];
            let small = dist_point_cone(&p, &cone(&[0.0, len, 0.0], q1));
            let large = dist_point_cone(&p, &cone(&[0.0, len, 0.0], q2));
            prop_assert!(large <= small + 1e-12);
        }

        #[test]
        fn cone_distance_is_one_lipschitz(
            cx in -20.0f64..20.0, cy in -20.0f64..20.0,
            dx in -1.0f64..1.0, dy in -1.0f64..1.0,
            len in 0.5f64..15.0, f in 0.0f64..0.99,
        ) {
            let c = cone(&[len, 0.0], f * len);
            let a = dist_point_cone(&[cx, cy], &c);
            let b = dist_point_cone(&[cx + dx, cy + dy], &c);
            prop_assert!((a - b).abs() <= dx.hypot(dy) + 1e-12);
        }
    }
}
