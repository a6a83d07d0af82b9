//! Rademacher projection sampling and distortion simulation.
//!
//! Matrices follow two schemes: dense (`±1/√m` everywhere) and sparse
//! (`0` with probability `1−p`, `±1/√(mp)` with probability `p/2` each), so
//! every entry satisfies `E[entry²] = 1/m` and the squared norm of the
//! projection is unbiased.
//!
//! Simulation is matrix-free: each trial owns one RNG substream (trial index
//! → substream, see [`crate::rng`]) and `‖Φx‖²` accumulates row by row with
//! compensated summation, addressing entries by their linear index. A
//! materialized [`SignMatrix`] with the same seed reproduces trial 0 of the
//! matrix-free path bit for bit. Trials run on a worker pool and are
//! assembled in trial-index order, so results are schedule-independent.
//!
//! Dense sign bits come packed 64 per raw draw; sparse entries spend one
//! draw each on an inversion decision for the zero/sign split.

use rayon::prelude::*;

use crate::bounds::{validate_grid, CurveMeta, Method, TailCurve};
use crate::dataio::SparseColumn;
use crate::error::{Error, Result};
use crate::moments::Exactness;
use crate::numeric::CompensatedSum;
use crate::rng::{derive_seed, CounterRng};

/// Projection matrix sampling scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    DenseRademacher,
    SparseRademacher,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::DenseRademacher => "dense",
            Scheme::SparseRademacher => "sparse",
        }
    }
}

fn check_density(scheme: Scheme, density: f64) -> Result<f64> {
    match scheme {
        Scheme::DenseRademacher => {
            if density == 1.0 {
                Ok(1.0)
            } else {
                Err(Error::InvalidDensity {
                    density,
                    scheme: "dense",
                })
            }
        }
        Scheme::SparseRademacher => {
            if density > 0.0 && density <= 1.0 {
                Ok(density)
            } else {
                Err(Error::InvalidDensity {
                    density,
                    scheme: "sparse",
                })
            }
        }
    }
}

#[inline]
fn entry_at(rng: &CounterRng, index: u64, scheme: Scheme, density: f64, scale: f64) -> f64 {
    match scheme {
        Scheme::DenseRademacher => {
            // bit-packed: one raw word carries 64 signs
            let word = rng.word(index >> 6);
            if (word >> (index & 63)) & 1 == 1 {
                scale
            } else {
                -scale
            }
        }
        Scheme::SparseRademacher => {
            let u = rng.uniform(index);
            if u < density / 2.0 {
                scale
            } else if u < density {
                -scale
            } else {
                0.0
            }
        }
    }
}

/// A realized `m×n` projection matrix with entries in `{−s, 0, +s}`,
/// `s = 1/√(m·p)`, together with the seed that produced it.
#[derive(Clone, Debug)]
pub struct SignMatrix {
    m: usize,
    n: usize,
    scheme: Scheme,
    density: f64,
    scale: f64,
    seed: u64,
    entries: Vec<f64>,
}

/// Samples a matrix. Identical `(seed, shape, scheme, density)` produce a
/// bit-identical matrix; the realization equals trial 0 of the matrix-free
/// simulation path under the same seed.
pub fn sample_matrix(
    m: usize,
    n: usize,
    scheme: Scheme,
    density: f64,
    seed: u64,
) -> Result<SignMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::Invalid("matrix dimensions must be positive".into()));
    }
    let density = check_density(scheme, density)?;
    let scale = 1.0 / ((m as f64) * density).sqrt();
    let rng = CounterRng::new(seed, 0);
    let mut entries = Vec::with_capacity(m * n);
    for e in 0..(m as u64 * n as u64) {
        entries.push(entry_at(&rng, e, scheme, density, scale));
    }
    Ok(SignMatrix {
        m,
        n,
        scheme,
        density,
        scale,
        seed,
        entries,
    })
}

impl SignMatrix {
    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    /// Entry magnitude `1/√(m·p)`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.entries[k * self.n..(k + 1) * self.n]
    }

    pub fn entry(&self, k: usize, j: usize) -> f64 {
        self.entries[k * self.n + j]
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.iter().filter(|&&v| v != 0.0).count()
    }

    /// `Φx`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|k| {
                let mut acc = CompensatedSum::default();
                for (coef, xj) in self.row(k).iter().zip(x) {
                    acc.add(coef * xj);
                }
                acc.total()
            })
            .collect()
    }
}

/// Realized distortion `E(x) = ‖Φx‖²/‖x‖² − 1` of a materialized matrix.
pub fn distortion(matrix: &SignMatrix, x: &[f64]) -> Result<f64> {
    if x.len() != matrix.n {
        return Err(Error::Invalid(format!(
            "vector length {} does not match matrix columns {}",
            x.len(),
            matrix.n
        )));
    }
    let mut norm2 = CompensatedSum::default();
    for v in x {
        norm2.add(v * v);
    }
    let norm2 = norm2.total();
    if norm2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut sq = CompensatedSum::default();
    for y in matrix.apply(x) {
        sq.add(y * y);
    }
    Ok(sq.total() / norm2 - 1.0)
}

fn one_trial(
    rng: &CounterRng,
    support: &[(usize, f64)],
    n: usize,
    m: usize,
    scheme: Scheme,
    density: f64,
    scale: f64,
    norm2: f64,
) -> f64 {
    let mut sq = CompensatedSum::default();
    for k in 0..m {
        let row_base = k as u64 * n as u64;
        let mut acc = CompensatedSum::default();
        for &(j, xj) in support {
            let entry = entry_at(rng, row_base + j as u64, scheme, density, scale);
            if entry != 0.0 {
                acc.add(entry * xj);
            }
        }
        let y = acc.total();
        sq.add(y * y);
    }
    sq.total() / norm2 - 1.0
}

fn simulate_support(
    support: &[(usize, f64)],
    n: usize,
    m: usize,
    scheme: Scheme,
    density: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::Invalid("row count must be positive".into()));
    }
    if trials == 0 {
        return Err(Error::Invalid("trial count must be positive".into()));
    }
    let density = check_density(scheme, density)?;
    let mut norm2 = CompensatedSum::default();
    for &(_, v) in support {
        norm2.add(v * v);
    }
    let norm2 = norm2.total();
    if norm2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let scale = 1.0 / ((m as f64) * density).sqrt();
    let values: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let rng = CounterRng::new(seed, trial);
            one_trial(&rng, support, n, m, scheme, density, scale, norm2)
        })
        .collect();
    Ok(values)
}

fn dense_support(x: &[f64]) -> Vec<(usize, f64)> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, v)| (i, *v))
        .collect()
}

/// Realized distortion values of independent trials, with the parameters
/// that produced them.
#[derive(Clone, Debug)]
pub struct DistortionSample {
    pub values: Vec<f64>,
    pub trials: usize,
    pub n: usize,
    pub k: usize,
    pub norm: f64,
    pub m: usize,
    pub scheme: Scheme,
    pub density: f64,
    pub seed: u64,
}

impl DistortionSample {
    pub fn mean(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for &v in &self.values {
            acc.add(v);
        }
        acc.total() / self.trials as f64
    }

    pub fn raw_moment(&self, q: u32) -> f64 {
        let mut acc = CompensatedSum::default();
        for &v in &self.values {
            acc.add(v.powi(q as i32));
        }
        acc.total() / self.trials as f64
    }

    pub fn mean_abs(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for &v in &self.values {
            acc.add(v.abs());
        }
        acc.total() / self.trials as f64
    }

    pub fn rms(&self) -> f64 {
        self.raw_moment(2).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
    }

    /// Standard error of the sample mean, estimated from the sample.
    pub fn mean_standard_error(&self) -> f64 {
        let m1 = self.mean();
        let var = (self.raw_moment(2) - m1 * m1).max(0.0);
        (var / self.trials as f64).sqrt()
    }

    /// Standard error of the sample second moment, estimated from the sample.
    pub fn second_moment_standard_error(&self) -> f64 {
        let m2 = self.raw_moment(2);
        let var = (self.raw_moment(4) - m2 * m2).max(0.0);
        (var / self.trials as f64).sqrt()
    }

    /// Nearest-rank quantile of `|E|` for `p ∈ (0, 1]`.
    pub fn quantile_abs(&self, p: f64) -> f64 {
        assert!(p > 0.0 && p <= 1.0, "quantile level out of range");
        let mut sorted: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let rank = ((p * sorted.len() as f64).ceil() as usize).max(1);
        sorted[rank.min(sorted.len()) - 1]
    }

    /// Fraction of trials with `|E| > eps`.
    pub fn ccdf_at(&self, eps: f64) -> f64 {
        let count = self.values.iter().filter(|v| v.abs() > eps).count();
        count as f64 / self.trials as f64
    }
}

/// Simulates distortions of an explicit vector; each trial draws a fresh
/// matrix from its own substream.
pub fn simulate_distortions(
    x: &[f64],
    m: usize,
    scheme: Scheme,
    density: f64,
    trials: usize,
    seed: u64,
) -> Result<DistortionSample> {
    let support = dense_support(x);
    let values = simulate_support(&support, x.len(), m, scheme, density, trials, seed)?;
    let norm2: f64 = support.iter().map(|&(_, v)| v * v).sum();
    Ok(DistortionSample {
        values,
        trials,
        n: x.len(),
        k: support.len(),
        norm: norm2.sqrt(),
        m,
        scheme,
        density,
        seed,
    })
}

/// The flat `K`-sparse unit vector in dimension `n`: the synthetic worst-case
/// input used for all synthetic runs (first `K` coordinates equal `1/√K`).
pub fn flat_unit_vector(n: usize, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > n {
        return Err(Error::Invalid(format!(
            "sparsity {k} must lie in 1..={n}"
        )));
    }
    let mut x = vec![0.0; n];
    let value = 1.0 / (k as f64).sqrt();
    for slot in x.iter_mut().take(k) {
        *slot = value;
    }
    Ok(x)
}

/// Empirical CCDF of `|E(x)|` for the flat `K`-sparse unit vector.
pub fn empirical_ccdf(
    n: usize,
    k: usize,
    m: usize,
    scheme: Scheme,
    density: f64,
    trials: usize,
    eps_grid: &[f64],
    seed: u64,
) -> Result<TailCurve> {
    let x = flat_unit_vector(n, k)?;
    empirical_ccdf_of(&x, m, scheme, density, trials, eps_grid, seed)
}

/// Empirical CCDF of `|E(x)|` for an explicit vector.
pub fn empirical_ccdf_of(
    x: &[f64],
    m: usize,
    scheme: Scheme,
    density: f64,
    trials: usize,
    eps_grid: &[f64],
    seed: u64,
) -> Result<TailCurve> {
    validate_grid(eps_grid)?;
    let sample = simulate_distortions(x, m, scheme, density, trials, seed)?;
    let points: Vec<(f64, f64)> = eps_grid
        .iter()
        .map(|&eps| (eps, sample.ccdf_at(eps)))
        .collect();
    let raw = points.iter().map(|&(_, b)| b).collect();
    Ok(TailCurve::new(
        Method::Empirical,
        m as u32,
        Some(sample.k as u64),
        points,
        CurveMeta {
            qmax: None,
            exactness: Exactness::Approximate,
            raw,
            note: Some(format!(
                "{} trials, scheme {}, density {}",
                trials,
                scheme.label(),
                density
            )),
        },
    ))
}

/// Per-(column, scheme) distortion summary over a dataset sweep.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub column: usize,
    pub k: usize,
    pub norm: f64,
    pub scheme: Scheme,
    pub density: f64,
    pub trials: usize,
    pub mean_abs: f64,
    pub rms: f64,
    pub p50: f64,
    pub p90: f64,
    pub p99: f64,
}

/// Result of [`dataset_distortion_sweep`]: one row per (nonzero column,
/// scheme/density), plus the number of zero columns skipped.
#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub skipped_zero_columns: usize,
}

/// Sweeps dataset columns against a list of `(scheme, density)` settings.
///
/// Sub-seeds derive deterministically from `(column index, scheme index)`
/// via [`derive_seed`], so the sweep is reproducible regardless of order of
/// evaluation. Zero columns are skipped and counted.
pub fn dataset_distortion_sweep(
    dim: usize,
    columns: &[SparseColumn],
    m: usize,
    schemes: &[(Scheme, f64)],
    trials: usize,
    seed: u64,
) -> Result<SweepSummary> {
    if schemes.is_empty() {
        return Err(Error::Invalid("no schemes requested".into()));
    }
    let mut rows = Vec::new();
    let mut skipped = 0usize;
    let mut any_nonzero = false;
    for (ci, column) in columns.iter().enumerate() {
        let support: Vec<(usize, f64)> = column
            .indices
            .iter()
            .copied()
            .zip(column.values.iter().copied())
            .collect();
        if support.is_empty() {
            skipped += 1;
            continue;
        }
        any_nonzero = true;
        let norm2: f64 = support.iter().map(|&(_, v)| v * v).sum();
        for (si, &(scheme, density)) in schemes.iter().enumerate() {
            let sub_seed = derive_seed(seed, &[ci as u64, si as u64]);
            let values = simulate_support(&support, dim, m, scheme, density, trials, sub_seed)?;
            let sample = DistortionSample {
                values,
                trials,
                n: dim,
                k: support.len(),
                norm: norm2.sqrt(),
                m,
                scheme,
                density,
                seed: sub_seed,
            };
            rows.push(SweepRow {
                column: ci,
                k: sample.k,
                norm: sample.norm,
                scheme,
                density,
                trials,
                mean_abs: sample.mean_abs(),
                rms: sample.rms(),
                p50: sample.quantile_abs(0.5),
                p90: sample.quantile_abs(0.9),
                p99: sample.quantile_abs(0.99),
            });
        }
    }
    if !any_nonzero {
        return Err(Error::AllColumnsZero);
    }
    Ok(SweepSummary {
        rows,
        skipped_zero_columns: skipped,
    })
}
