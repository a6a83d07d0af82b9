//! Distortion tail-bound curves.
//!
//! The sharp bound is the moment method applied to the dominating variable:
//! `P[|E(x)| > ε] ≤ min over even q ≤ qmax of ν_q / ε^q`, with `ν_q` the
//! exact `m`-row distortion moment at sparsity `K`. It is compared against
//! two input-oblivious references,
//!
//! - `2·exp(−(mε²/4)(1 − 2ε/3))`, the best previous Rademacher bound, and
//! - `2·exp(−mε²/(4 + 4ε))`, the sub-gamma chi-square tail obtained by
//!   majorizing with Gaussian rows (variance factor `2m`, scale `2`),
//!
//! plus the asymptotic no-go lower curve `2·exp(−mε²/4)` (the vanishing term
//! in its exponent is dropped; it is a reference line, never a guarantee).
//! All emitted bounds are clipped to `[0, 1]`; raw values are kept in the
//! curve metadata.

use crate::error::{Error, Result};
use crate::moments::{
    distortion_moment_f64, rational_to_f64, DistortionMomentTable, Exactness, EXACT_K_LIMIT,
    EXACT_Q_LIMIT,
};

/// Producing method of a tail curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Sharp,
    Achlioptas,
    SubGamma,
    NogoLower,
    Empirical,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Sharp => "sharp",
            Method::Achlioptas => "achlioptas",
            Method::SubGamma => "subgamma",
            Method::NogoLower => "nogo_lower",
            Method::Empirical => "empirical",
        }
    }
}

/// Provenance details attached to a curve.
#[derive(Clone, Debug)]
pub struct CurveMeta {
    /// Largest moment order scanned (sharp curves only).
    pub qmax: Option<u32>,
    /// Whether the producing arithmetic was exact or the float fast path.
    pub exactness: Exactness,
    /// Unclipped bound values, same order as `points`.
    pub raw: Vec<f64>,
    /// Free-form qualifier (declared constants, asymptotic labels).
    pub note: Option<String>,
}

/// A `(ε, bound)` curve produced by one method.
#[derive(Clone, Debug)]
pub struct TailCurve {
    pub method: Method,
    pub m: u32,
    pub k: Option<u64>,
    pub points: Vec<(f64, f64)>,
    pub meta: CurveMeta,
}

impl TailCurve {
    /// Assembles a curve, checking the structural invariants: strictly
    /// increasing grid, bounds clipped to `[0, 1]`.
    pub fn new(
        method: Method,
        m: u32,
        k: Option<u64>,
        points: Vec<(f64, f64)>,
        meta: CurveMeta,
    ) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].0 < w[1].0), "grid not increasing");
        debug_assert!(
            points.iter().all(|&(_, b)| (0.0..=1.0).contains(&b)),
            "bound outside [0, 1]"
        );
        if method == Method::Sharp {
            debug_assert!(
                points.windows(2).all(|w| w[0].1 >= w[1].1),
                "sharp curve must be non-increasing"
            );
        }
        TailCurve {
            method,
            m,
            k,
            points,
            meta,
        }
    }
}

/// Checks that a grid is nonempty, positive and strictly increasing.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid[0] <= 0.0 || !grid[0].is_finite() {
        return Err(Error::InvalidGrid);
    }
    if !grid.windows(2).all(|w| w[1].is_finite() && w[0] < w[1]) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

/// Precomputed even distortion moments for one `(m, K)`, ready to optimize
/// the moment-method bound over many thresholds.
#[derive(Clone, Debug)]
pub struct SharpBoundTable {
    m: u32,
    k: u64,
    qmax: u32,
    even_moments: Vec<(u32, f64)>,
    exactness: Exactness,
}

impl SharpBoundTable {
    /// Computes `ν_q` for even `q = 2, 4, …, qmax`. Exact rational arithmetic
    /// is used up to [`EXACT_K_LIMIT`] / [`EXACT_Q_LIMIT`]; beyond that the
    /// log-space float path takes over and the table is flagged approximate.
    pub fn new(m: u32, k: u64, qmax: u32) -> Self {
        assert!(m >= 1, "row count must be positive");
        assert!(qmax >= 2, "qmax must be at least 2");
        let qmax = qmax - qmax % 2;
        let (even_moments, exactness) = if k <= EXACT_K_LIMIT && qmax <= EXACT_Q_LIMIT {
            let table = DistortionMomentTable::new(m, k as u32, qmax);
            let moments = (2..=qmax)
                .step_by(2)
                .map(|q| (q, rational_to_f64(table.moment(q))))
                .collect();
            (moments, Exactness::Exact)
        } else {
            let moments = (2..=qmax)
                .step_by(2)
                .map(|q| (q, distortion_moment_f64(m as u64, k, q)))
                .collect();
            (moments, Exactness::Approximate)
        };
        SharpBoundTable {
            m,
            k,
            qmax,
            even_moments,
            exactness,
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn qmax(&self) -> u32 {
        self.qmax
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    /// Unclipped `min_q ν_q / ε^q` and the optimizing `q`.
    pub fn raw_bound(&self, eps: f64) -> (f64, u32) {
        assert!(eps > 0.0, "threshold must be positive");
        let mut best = f64::INFINITY;
        let mut best_q = self.even_moments.first().map_or(2, |&(q, _)| q);
        for &(q, nu) in &self.even_moments {
            let candidate = nu / eps.powi(q as i32);
            if candidate < best {
                best = candidate;
                best_q = q;
            }
        }
        (best, best_q)
    }

    /// Clipped bound in `[0, 1]`.
    pub fn bound(&self, eps: f64) -> f64 {
        clip(self.raw_bound(eps).0)
    }
}

fn clip(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

/// Moment-method tail bound `min over even q ≤ qmax of ν_q / ε^q`, clipped.
///
/// Only even orders enter the scan: Markov on `|E|^q` needs `E^q ≥ 0`.
/// For `K ≤ 1` every moment vanishes and the bound is 0 at any `ε > 0`.
pub fn sharp_tail_bound(m: u32, k: u64, eps: f64, qmax: u32) -> f64 {
    SharpBoundTable::new(m, k, qmax).bound(eps)
}

/// [`sharp_tail_bound`] along with the raw value and the optimizing order.
pub fn sharp_tail_bound_detail(m: u32, k: u64, eps: f64, qmax: u32) -> (f64, f64, u32) {
    let table = SharpBoundTable::new(m, k, qmax);
    let (raw, q) = table.raw_bound(eps);
    (clip(raw), raw, q)
}

/// Prior-work bound `2·exp(−(mε²/4)(1 − 2ε/3))`, clipped to `[0, 1]`.
pub fn achlioptas_bound(m: u32, eps: f64) -> f64 {
    assert!(eps > 0.0, "threshold must be positive");
    let m = m as f64;
    clip(2.0 * (-(m * eps * eps / 4.0) * (1.0 - 2.0 * eps / 3.0)).exp())
}

/// Sub-gamma chi-square tail `2·exp(−mε²/(4 + 4ε))` from the Gaussian
/// majorization argument (variance factor `2m`, scale `2`), clipped.
pub fn subgamma_bound(m: u32, eps: f64) -> f64 {
    assert!(eps > 0.0, "threshold must be positive");
    let m = m as f64;
    clip(2.0 * (-(m * eps * eps) / (4.0 + 4.0 * eps)).exp())
}

/// Asymptotic lower reference `2·exp(−mε²/4)` with the vanishing correction
/// dropped; for plotting only, never a guarantee.
pub fn nogo_lower_curve(m: u32, eps: f64) -> f64 {
    assert!(eps > 0.0, "threshold must be positive");
    let m = m as f64;
    clip(2.0 * (-(m * eps * eps) / 4.0).exp())
}

/// One curve per method over a common grid: sharp (at the given sparsity),
/// the two prior bounds, and the no-go reference.
pub fn compare_curves(m: u32, k: u64, eps_grid: &[f64], qmax: u32) -> Result<Vec<TailCurve>> {
    validate_grid(eps_grid)?;
    let table = SharpBoundTable::new(m, k, qmax);
    let mut sharp_points = Vec::with_capacity(eps_grid.len());
    let mut sharp_raw = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let (raw, _) = table.raw_bound(eps);
        sharp_raw.push(raw);
        sharp_points.push((eps, clip(raw)));
    }
    let sharp = TailCurve::new(
        Method::Sharp,
        m,
        Some(k),
        sharp_points,
        CurveMeta {
            qmax: Some(table.qmax()),
            exactness: table.exactness(),
            raw: sharp_raw,
            note: None,
        },
    );

    let closed_form = |method: Method, f: &dyn Fn(f64) -> f64, note: Option<String>| {
        let raw: Vec<f64> = eps_grid.iter().map(|&eps| f(eps)).collect();
        let points = eps_grid
            .iter()
            .zip(&raw)
            .map(|(&eps, &v)| (eps, clip(v)))
            .collect();
        TailCurve::new(
            method,
            m,
            None,
            points,
            CurveMeta {
                qmax: None,
                exactness: Exactness::Exact,
                raw,
                note,
            },
        )
    };

    Ok(vec![
        sharp,
        closed_form(Method::Achlioptas, &|eps| achlioptas_bound(m, eps), None),
        closed_form(
            Method::SubGamma,
            &|eps| subgamma_bound(m, eps),
            Some("chi-square sub-gamma with variance factor 2m, scale 2".into()),
        ),
        closed_form(
            Method::NogoLower,
            &|eps| nogo_lower_curve(m, eps),
            Some("asymptotic lower reference, vanishing term dropped".into()),
        ),
    ])
}
