use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Ambient dimension of a model, always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return domain(format!("dimension must be at least 2, got {d}"));
        }
        Ok(Self(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// Checks the extra requirement of the Brownian models (transience).
    pub fn require_transient(self) -> Result<Self> {
        if self.0 < 3 {
            return domain(format!(
                "Brownian capacity requires d >= 3, got d = {}",
                self.0
            ));
        }
        Ok(self)
    }
}

impl TryFrom<u32> for Dimension {
    type Error = crate::Error;

    fn try_from(d: u32) -> Result<Self> {
        Self::new(d)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the gamma function for positive arguments.
pub fn gamma_ln(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("gamma_ln requires a finite positive argument, got {x}"));
    }
    if x < 0.5 {
        // ln Γ(x) = ln Γ(x + 1) - ln x keeps the series in its accurate range.
        return Ok(lanczos_ln(x + 1.0) - x.ln());
    }
    Ok(lanczos_ln(x))
}

fn lanczos_ln(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Euler beta function `Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return domain(format!("beta_fn requires positive arguments, got ({a}, {b})"));
    }
    Ok((gamma_ln(a)? + gamma_ln(b)? - gamma_ln(a + b)?).exp())
}

/// Volume `κ_n = π^{n/2} / Γ(n/2 + 1)` of the unit ball in `R^n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    let half = f64::from(n) / 2.0;
    // n/2 + 1 >= 1, so gamma_ln cannot fail here.
    (half * PI.ln() - lanczos_ln(half + 1.0)).exp()
}

/// Green function constant `γ_d = Γ((d-2)/2) / (2π^{d/2})` of standard Brownian motion.
pub fn green_constant(d: Dimension) -> Result<f64> {
    let d = d.require_transient()?.as_f64();
    Ok((gamma_ln((d - 2.0) / 2.0)? - (d / 2.0) * PI.ln()).exp() / 2.0)
}
