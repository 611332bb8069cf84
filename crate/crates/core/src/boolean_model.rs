//! Poisson-Boolean obstacles: balls centred at a Poisson process of
//! intensity `α` with i.i.d. radii.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{revolve_volume_axial, ObstacleBall, Vect};
use crate::mathcore::{unit_ball_volume, Dimension, GaussLegendre, RngStream};
use crate::scene::{Obstacle, ObstacleScene, SamplingWindow};

const LAW_NODES: usize = 64;
const PROB_TOL: f64 = 1e-9;

/// Distribution of the ball radius `ϱ`. All supports are bounded.
#[derive(Debug, Clone, PartialEq)]
pub enum RadiusLaw {
    Constant(f64),
    Uniform { lo: f64, hi: f64 },
    /// Atoms `(value, probability)`.
    Discrete(Vec<(f64, f64)>),
}

impl RadiusLaw {
    pub fn constant(value: f64) -> Result<Self> {
        check_radius(value)?;
        Ok(Self::Constant(value))
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        check_radius(lo)?;
        check_radius(hi)?;
        if lo >= hi {
            return domain(format!("uniform radius law needs lo < hi, got [{lo}, {hi}]"));
        }
        Ok(Self::Uniform { lo, hi })
    }

    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return domain("discrete radius law needs at least one atom");
        }
        for &(v, p) in &atoms {
            check_radius(v)?;
            if !(0.0..=1.0).contains(&p) {
                return domain(format!("atom probability {p} outside [0, 1]"));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > PROB_TOL {
            return domain(format!("atom probabilities sum to {total}, not 1"));
        }
        Ok(Self::Discrete(atoms))
    }

    /// Largest radius in the support.
    pub fn max_radius(&self) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::Uniform { hi, .. } => *hi,
            Self::Discrete(atoms) => atoms.iter().map(|a| a.0).fold(0.0, f64::max),
        }
    }

    /// `E[f(ϱ)]`; uniform laws use a 64-node Gauss-Legendre rule.
    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.expect_with(LAW_NODES, f)
    }

    pub(crate) fn expect_with(&self, nodes: usize, f: impl Fn(f64) -> f64) -> f64 {
        match self {
            Self::Constant(v) => f(*v),
            Self::Uniform { lo, hi } => GaussLegendre::cached(nodes).integrate(*lo, *hi, f) / (hi - lo),
            Self::Discrete(atoms) => atoms.iter().map(|&(v, p)| p * f(v)).sum(),
        }
    }

    pub fn moment(&self, k: f64) -> f64 {
        self.expect(|r| r.powf(k))
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::Uniform { lo, hi } => lo + (hi - lo) * rng.uniform(),
            Self::Discrete(atoms) => {
                let u = rng.uniform();
                let mut acc = 0.0;
                for &(v, p) in atoms {
                    acc += p;
                    if u < acc {
                        return v;
                    }
                }
                atoms.last().expect("non-empty law").0
            }
        }
    }
}

fn check_radius(v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return domain(format!("radius values must be positive and finite, got {v}"));
    }
    Ok(())
}

/// Parses `const:V`, `unif:A:B` or `disc:v1@p1,v2@p2,...`.
impl FromStr for RadiusLaw {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad number {s:?} in radius law {spec:?}")))
        };
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::Domain(format!("radius law {spec:?} lacks a kind prefix")))?;
        match kind {
            "const" => Self::constant(num(rest)?),
            "unif" => {
                let (a, b) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Domain(format!("expected unif:A:B, got {spec:?}")))?;
                Self::uniform(num(a)?, num(b)?)
            }
            "disc" => {
                let atoms = rest
                    .split(',')
                    .map(|atom| {
                        let (v, p) = atom
                            .split_once('@')
                            .ok_or_else(|| Error::Domain(format!("expected value@prob, got {atom:?}")))?;
                        Ok((num(v)?, num(p)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::discrete(atoms)
            }
            other => domain(format!("unknown radius law kind {other:?}; use const, unif or disc")),
        }
    }
}

impl fmt::Display for RadiusLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(v) => write!(f, "const:{v}"),
            Self::Uniform { lo, hi } => write!(f, "unif:{lo}:{hi}"),
            Self::Discrete(atoms) => {
                write!(f, "disc:")?;
                for (i, (v, p)) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}@{p}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for RadiusLaw {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RadiusLaw {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BooleanParams {
    pub alpha: f64,
    pub law: RadiusLaw,
    pub d: Dimension,
}

impl BooleanParams {
    pub fn new(alpha: f64, law: RadiusLaw, d: Dimension) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return domain(format!("intensity must be positive, got {alpha}"));
        }
        Ok(Self { alpha, law, d })
    }
}

/// `E[λ_d(B(ℓ_{r e_1}^q, ϱ))]`.
pub fn expected_nbhd_volume(params: &BooleanParams, r: f64, q: f64) -> Result<f64> {
    check_cone(r, q)?;
    let d = params.d.as_usize();
    Ok(params.law.expect(|rho| revolve_volume_axial(r, q, rho, d)))
}

fn check_cone(r: f64, q: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("distance r must be positive, got {r}"));
    }
    if !(q >= 0.0) || q >= r {
        return domain(format!("aperture must lie in [0, r) = [0, {r}), got {q}"));
    }
    Ok(())
}

/// `P[no ball meets [0, r e_1]]`.
pub fn visibility_probability(params: &BooleanParams, r: f64) -> Result<f64> {
    Ok((-params.alpha * expected_nbhd_volume(params, r, 0.0)?).exp())
}

/// `P[Q > s/r | [0, r e_1] visible]`, exact at finite `r`.
pub fn conditional_survival_exact(params: &BooleanParams, r: f64, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return domain(format!("s must be non-negative, got {s}"));
    }
    let q = s / r;
    check_cone(r, q)?;
    let d = params.d.as_usize();
    let increment = params
        .law
        .expect(|rho| revolve_volume_axial(r, q, rho, d) - revolve_volume_axial(r, 0.0, rho, d));
    Ok((-params.alpha * increment).exp())
}

/// Rate of the exponential limit law, `½ α (d-1) κ_{d-1} E[ϱ^{d-2}]`.
pub fn lambda_bm(params: &BooleanParams) -> f64 {
    let d = params.d.get();
    0.5 * params.alpha
        * f64::from(d - 1)
        * unit_ball_volume(d - 1)
        * params.law.moment(f64::from(d) - 2.0)
}

/// Every ball of the process restricted to the capsule `B([0, r e_1], reach + r_max)`,
/// which holds all balls that can meet `B(ℓ_{r e_1}^q, 0)` for `q <= reach`.
pub fn sample_scene(params: &BooleanParams, r: f64, reach: f64, rng: &mut RngStream) -> Result<ObstacleScene> {
    let d = params.d.as_usize();
    let window = SamplingWindow::new(d, r, reach + params.law.max_radius())?;
    let count = rng.poisson(params.alpha * window.volume())?;
    let obstacles = (0..count)
        .map(|_| {
            let center = Vect::new(window.sample_point(rng))?;
            let radius = params.law.sample(rng);
            Ok(Obstacle::Ball(ObstacleBall::new(center, radius)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ObstacleScene::unconditioned(Vect::axis(d, 0, r), obstacles, window))
}

/// A scene distributed as the process given that `[0, r e_1]` is visible.
///
/// Uses the restriction property: the conditional process is the Poisson
/// process of the non-blocking (centre, radius) pairs, so blocking balls are
/// simply deleted.
pub fn sample_conditional_scene(params: &BooleanParams, r: f64, q_cap: f64, rng: &mut RngStream) -> Result<ObstacleScene> {
    check_cone(r, q_cap)?;
    Ok(sample_scene(params, r, q_cap, rng)?.condition())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::scene::sample_q;

    fn params(alpha: f64, law: &str, d: u32) -> BooleanParams {
        BooleanParams::new(alpha, law.parse().unwrap(), Dimension::new(d).unwrap()).unwrap()
    }

    #[test]
    fn law_grammar() {
        assert_eq!("const:1.5".parse::<RadiusLaw>().unwrap(), RadiusLaw::Constant(1.5));
        assert_eq!("unif:1:2".parse::<RadiusLaw>().unwrap(), RadiusLaw::Uniform { lo: 1.0, hi: 2.0 });
        let disc: RadiusLaw = "disc:1@0.5,2@0.5".parse().unwrap();
        assert_eq!(disc, RadiusLaw::Discrete(vec![(1.0, 0.5), (2.0, 0.5)]));
        assert_eq!(disc.to_string().parse::<RadiusLaw>().unwrap(), disc);
        for bad in ["const:-1", "unif:2:1", "disc:1@0.5,2@0.4", "gauss:1", "const", "disc:1"] {
            assert!(bad.parse::<RadiusLaw>().is_err(), "{bad}");
        }
        assert!("disc:1@0.3333333333,2@0.6666666667".parse::<RadiusLaw>().is_ok());
    }

    #[test]
    fn segment_volume_closed_form() {
        for d in 2..=5u32 {
            let p = params(0.1, "const:1.3", d);
            let rho: f64 = 1.3;
            let exact = unit_ball_volume(d) * rho.powi(d as i32)
                + unit_ball_volume(d - 1) * rho.powi(d as i32 - 1) * 30.0;
            let got = expected_nbhd_volume(&p, 30.0, 0.0).unwrap();
            assert!((got - exact).abs() < 1e-9 * exact);
        }
        let got = expected_nbhd_volume(&params(0.1, "const:1", 2), 20.0, 0.0).unwrap();
        assert!((got - (PI + 40.0)).abs() < 1e-10);
    }

    #[test]
    fn discrete_law_is_a_mixture() {
        let got = expected_nbhd_volume(&params(0.1, "disc:1@0.5,2@0.5", 2), 10.0, 0.0).unwrap();
        let expect = 0.5 * (PI + 20.0) + 0.5 * (4.0 * PI + 40.0);
        assert!((got - expect).abs() < 1e-10);
    }

    #[test]
    fn uniform_law_quadrature_is_converged() {
        let p = params(0.1, "unif:0.5:2.5", 4);
        let f = |rho: f64| revolve_volume_axial(50.0, 0.3, rho, 4);
        let a = p.law.expect_with(64, f);
        let b = p.law.expect_with(128, f);
        assert!((a - b).abs() <= 1e-8 * a);
        // E[ϱ^2] for U(0.5, 2.5) is (2.5^3 - 0.5^3) / 6
        assert!((p.law.moment(2.0) - (15.625 - 0.125) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn visibility_examples() {
        let v = visibility_probability(&params(0.05, "const:1", 2), 20.0).unwrap();
        assert!((v - (-0.05 * (PI + 40.0)).exp()).abs() < 1e-12);
        assert!((v - 0.115_662_405).abs() < 1e-9);
        let tiny = visibility_probability(&params(1e-12, "const:1", 3), 20.0).unwrap();
        assert!((tiny - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rates() {
        for law in ["const:1", "unif:0.2:3", "disc:1@0.25,4@0.75"] {
            assert!((lambda_bm(&params(0.37, law, 2)) - 0.37).abs() < 1e-12);
        }
        assert!((lambda_bm(&params(0.2, "const:1.5", 3)) - 0.2 * PI * 1.5).abs() < 1e-12);
        assert!((lambda_bm(&params(0.2, "const:2", 4)) - 8.0 * PI * 0.2).abs() < 1e-12);
    }

    #[test]
    fn survival_shape() {
        let p = params(0.05, "const:1", 2);
        assert_eq!(conditional_survival_exact(&p, 100.0, 0.0).unwrap(), 1.0);
        let mut last = 1.0;
        for k in 1..40 {
            let s = 0.5 * k as f64;
            let v = conditional_survival_exact(&p, 100.0, s).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(conditional_survival_exact(&p, 10.0, 100.0).is_err());
        // log-linear in α
        let a = conditional_survival_exact(&params(0.05, "unif:1:2", 3), 80.0, 2.0).unwrap();
        let b = conditional_survival_exact(&params(0.15, "unif:1:2", 3), 80.0, 2.0).unwrap();
        assert!((b.ln() - 3.0 * a.ln()).abs() < 1e-12);
    }

    #[test]
    fn survival_tends_to_the_limit_law() {
        for (d, law) in [(2, "const:1"), (3, "unif:0.5:1.5"), (4, "disc:1@0.5,2@0.5")] {
            let p = params(0.3, law, d);
            let limit = (-lambda_bm(&p) * 2.0).exp();
            let devs: Vec<f64> = [50.0, 100.0, 200.0, 400.0, 800.0]
                .iter()
                .map(|&r| (conditional_survival_exact(&p, r, 2.0).unwrap() - limit).abs())
                .collect();
            assert!(devs.windows(2).all(|w| w[1] < w[0]), "d={d}: {devs:?}");
            assert!(devs[4] < 1e-2, "{devs:?}");
        }
    }

    #[test]
    fn conditional_scenes_respect_the_invariant() {
        let p = params(0.5, "unif:0.5:1.5", 3);
        let mut rng = RngStream::new(11, 0);
        for _ in 0..50 {
            let scene = sample_conditional_scene(&p, 30.0, 1.0, &mut rng).unwrap();
            assert!(scene.is_conditioned());
            assert!(!scene.segment_blocked());
            sample_q(&scene, 1.0).unwrap();
        }
    }

    #[test]
    fn vanishing_intensity_gives_empty_scenes() {
        let p = params(1e-12, "const:1", 2);
        let mut rng = RngStream::new(1, 1);
        assert!(sample_conditional_scene(&p, 50.0, 1.0, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn unconditioned_visibility_frequency() {
        let p = params(0.05, "const:1", 2);
        let expect = visibility_probability(&p, 20.0).unwrap();
        let n = 20_000;
        let root = RngStream::new(2024, 3);
        let visible = (0..n)
            .filter(|&i| !sample_scene(&p, 20.0, 0.1, &mut root.fork(i)).unwrap().segment_blocked())
            .count();
        let freq = visible as f64 / n as f64;
        let sd = (expect * (1.0 - expect) / n as f64).sqrt();
        assert!((freq - expect).abs() < 3.0 * sd, "{freq} vs {expect}");
    }
}
