//! Statistics and serialization shared by the experiment drivers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{domain, Error, Result};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// `Φ^{-1}(p)` of the standard normal law.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("normal quantile needs p in (0, 1), got {p}"));
    }
    Ok(Normal::standard().inverse_cdf(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomialCI {
    pub p_hat: f64,
    pub lo: f64,
    pub hi: f64,
    pub n: u64,
    pub level: f64,
}

/// Wilson score interval for `successes` out of `n` at confidence `level`.
pub fn bernoulli_ci(successes: u64, n: u64, level: f64) -> Result<BinomialCI> {
    if n == 0 || successes > n {
        return domain(format!("need 0 <= successes <= n and n >= 1, got {successes}/{n}"));
    }
    if !(level > 0.0 && level < 1.0) {
        return domain(format!("confidence level must lie in (0, 1), got {level}"));
    }
    let z = normal_quantile(0.5 + 0.5 * level)?;
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let center = (p + z2 / (2.0 * nf)) / (1.0 + z2 / nf);
    let half = z / (1.0 + z2 / nf) * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == n { 1.0 } else { (center + half).min(1.0) };
    Ok(BinomialCI { p_hat: p, lo: lo.min(p), hi: hi.max(p), n, level })
}

/// Empirical distribution function of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|x| x.is_nan()) {
            return domain("samples must not contain NaN");
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    /// `#{x_i <= t} / n`; right-continuous.
    pub fn eval(&self, t: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        let k = self.sorted.partition_point(|&x| x <= t);
        k as f64 / self.sorted.len() as f64
    }

    pub fn survival(&self, t: f64) -> f64 {
        1.0 - self.eval(t)
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }
}

/// One per-scene row of a simulation output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub scene_index: u64,
    pub q: f64,
    pub q_over_delta: f64,
    pub censored: bool,
}

/// Writes `scene_index,q,q_over_delta,censored` rows with a header.
pub fn write_samples_csv(path: &Path, rows: &[SampleRow]) -> Result<()> {
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file));
    if rows.is_empty() {
        w.write_record(["scene_index", "q", "q_over_delta", "censored"]).map_err(csv_err)?;
    }
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn read_samples_csv(path: &Path) -> Result<Vec<SampleRow>> {
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().collect::<std::result::Result<Vec<_>, _>>().map_err(csv_err)
}

/// Pretty JSON with a trailing newline.
pub fn write_report_json<T: Serialize>(path: &Path, report: &T) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, report).map_err(|source| Error::Json { path: path.to_path_buf(), source })?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn read_report_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
}

/// Runs `run` for seeds `base, base + 1, ...` and collects the results in
/// seed order.
pub fn seed_batch<T>(base_seed: u64, count: usize, run: impl Fn(u64) -> Result<T>) -> Result<Vec<T>> {
    (0..count as u64).map(|k| run(base_seed + k)).collect()
}

/// Median of a non-empty sample.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
