//! Brute-force ground truth by exact sign enumeration.
//!
//! For small supports the law of the quadratic chaos
//! `Σ_{i≠j} x_i x_j r_i r_j` can be computed exactly: enumerate the `2^K`
//! sign assignments on the support, evaluate each chaos value through the
//! square-completion identity `(Σ x_i r_i)² − Σ x_i²`, and collect atoms.
//! Distortion laws for `m` rows follow by exact convolution. Nothing here
//! consults the closed forms in [`crate::moments`]; this module is the
//! independent check of them.
//!
//! Two exactness devices keep the enumeration honest and fast:
//!
//! - sign vectors `v` and `−v` give the same chaos value, so only `2^{K−1}`
//!   representatives with the first sign pinned are walked, in Gray-code
//!   order with an incrementally updated running sum;
//! - enumeration works on the square-commensurable root factorization of the
//!   profile (see [`WeightProfile::root_form`]), so every atom value is an
//!   exact rational even when the component magnitudes themselves are
//!   irrational (as for flat profiles like `x_i = 1/√K`).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::majorization::WeightProfile;
use crate::Rational;

/// Caps on exact enumeration and convolution size.
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Largest support size enumerated (`2^K` sign assignments).
    pub enumeration_cap: usize,
    /// Largest atom count an exact convolution may reach.
    pub atom_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            enumeration_cap: 20,
            atom_cap: 1_000_000,
        }
    }
}

/// Exact finitely-supported probability law: distinct atom values with
/// positive probabilities summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteLaw {
    atoms: Vec<(Rational, Rational)>,
}

impl DiscreteLaw {
    /// Builds a law from (value, probability) pairs, merging equal values and
    /// dropping zero-probability atoms.
    ///
    /// Panics when probabilities are negative or do not sum to exactly one;
    /// all construction sites produce proper laws by design, so a violation
    /// is a bug.
    pub fn from_atoms(atoms: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut merged: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (value, prob) in atoms {
            assert!(!prob.is_negative(), "negative probability");
            if !prob.is_zero() {
                *merged.entry(value).or_insert_with(Rational::zero) += prob;
            }
        }
        let law = DiscreteLaw {
            atoms: merged.into_iter().collect(),
        };
        assert!(law.total_probability().is_one(), "probabilities must sum to 1");
        law
    }

    fn total_probability(&self) -> Rational {
        self.atoms.iter().map(|(_, p)| p).sum()
    }

    /// Atoms as (value, probability), values strictly increasing.
    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }

    /// Raw moment `E V^q = Σ p_i v_i^q`.
    pub fn moment(&self, q: u32) -> Rational {
        let mut acc = Rational::zero();
        for (value, prob) in &self.atoms {
            let mut term = prob.clone();
            for _ in 0..q {
                term *= value;
            }
            acc += term;
        }
        acc
    }

    /// `E V`.
    pub fn mean(&self) -> Rational {
        self.moment(1)
    }

    /// Exact tail mass `P[|V| > eps]` (strict inequality).
    pub fn tail(&self, eps: &Rational) -> Rational {
        self.atoms
            .iter()
            .filter(|(value, _)| value.abs() > *eps)
            .map(|(_, prob)| prob)
            .sum()
    }
}

/// Walks the `2^{K−1}` sign assignments with the first sign pinned to `+`,
/// visiting the running sum `Σ s_i t_i` for each. Gray-code order: one sign
/// flips per step, so the sum updates in O(1) rational operations.
pub(crate) fn for_each_half_sign_sum(roots: &[Rational], mut visit: impl FnMut(&Rational)) {
    let k = roots.len();
    if k == 0 {
        return;
    }
    assert!(k <= 48, "sign enumeration over {k} coordinates is not feasible");
    let doubled: Vec<Rational> = roots.iter().map(|t| t + t).collect();
    let mut positive = vec![true; k];
    let mut sum: Rational = roots.iter().sum();
    visit(&sum);
    let steps: u64 = 1 << (k - 1);
    for step in 1..steps {
        let idx = step.trailing_zeros() as usize + 1;
        if positive[idx] {
            sum -= &doubled[idx];
        } else {
            sum += &doubled[idx];
        }
        positive[idx] = !positive[idx];
        visit(&sum);
    }
}

/// Chaos values over the support as a (value → representative count) map,
/// together with the log2 of the total representative count.
fn chaos_counts(
    p: &WeightProfile,
    cfg: &OracleConfig,
) -> Result<(BTreeMap<Rational, u64>, usize)> {
    let rf = p.root_form()?;
    let k = rf.support.len();
    if k > cfg.enumeration_cap {
        return Err(Error::EnumerationTooLarge {
            k,
            cap: cfg.enumeration_cap,
        });
    }
    let mut counts: BTreeMap<Rational, u64> = BTreeMap::new();
    if k == 0 {
        counts.insert(Rational::zero(), 1);
        return Ok((counts, 0));
    }
    let sq_sum: Rational = rf.roots.iter().map(|t| t * t).sum();
    for_each_half_sign_sum(&rf.roots, |s| {
        let value = &rf.scale * (s * s - &sq_sum);
        *counts.entry(value).or_insert(0) += 1;
    });
    Ok((counts, k - 1))
}

/// Exact law of the quadratic chaos `Σ_{i≠j} x_i x_j r_i r_j` of the profile.
pub fn chaos_law(p: &WeightProfile) -> Result<DiscreteLaw> {
    chaos_law_with(p, &OracleConfig::default())
}

/// [`chaos_law`] under explicit caps.
pub fn chaos_law_with(p: &WeightProfile, cfg: &OracleConfig) -> Result<DiscreteLaw> {
    let (counts, log2_total) = chaos_counts(p, cfg)?;
    let denom = BigInt::one() << log2_total;
    Ok(DiscreteLaw::from_atoms(counts.into_iter().map(
        |(value, count)| (value, Rational::new(BigInt::from(count), denom.clone())),
    )))
}

/// Exact law of the `m`-row distortion
/// `E(x) = (1/m) Σ_{k≤m} C_k / total(p)` for IID chaos copies `C_k`,
/// by repeated exact convolution with atom merging.
pub fn distortion_law(p: &WeightProfile, m: u32) -> Result<DiscreteLaw> {
    distortion_law_with(p, m, &OracleConfig::default())
}

/// [`distortion_law`] under explicit caps.
pub fn distortion_law_with(p: &WeightProfile, m: u32, cfg: &OracleConfig) -> Result<DiscreteLaw> {
    if m == 0 {
        return Err(Error::Invalid("row count must be positive".into()));
    }
    let total = p.total();
    if total.is_zero() {
        return Err(Error::ZeroVector);
    }
    let (counts, log2_reps) = chaos_counts(p, cfg)?;
    // Per-row law of C / (m · total); convolve counts, not probabilities, so
    // the only rational work is on atom values.
    let scale = (Rational::from_integer(m.into()) * &total).recip();
    let base: Vec<(Rational, BigUint)> = counts
        .into_iter()
        .map(|(value, count)| (value * &scale, BigUint::from(count)))
        .collect();
    let mut acc = base.clone();
    for _ in 1..m {
        acc = convolve_counts(&acc, &base, cfg.atom_cap)?;
    }
    let log2_total = log2_reps as u64 * m as u64;
    let denom: BigInt = BigInt::one() << log2_total;
    Ok(DiscreteLaw::from_atoms(acc.into_iter().map(
        |(value, count)| (value, Rational::new(count.into(), denom.clone())),
    )))
}

fn convolve_counts(
    a: &[(Rational, BigUint)],
    b: &[(Rational, BigUint)],
    atom_cap: usize,
) -> Result<Vec<(Rational, BigUint)>> {
    let mut merged: BTreeMap<Rational, BigUint> = BTreeMap::new();
    for (va, ca) in a {
        for (vb, cb) in b {
            let value = va + vb;
            let weight = ca * cb;
            *merged.entry(value).or_insert_with(BigUint::zero) += weight;
            if merged.len() > atom_cap {
                return Err(Error::AtomCapExceeded {
                    atoms: merged.len(),
                    cap: atom_cap,
                });
            }
        }
    }
    Ok(merged.into_iter().collect())
}
