//! Squared-weight profiles and the majorization order.
//!
//! Every Schur statement in this crate is a statement about the vector of
//! squared components `(x_i²)` of an input. [`WeightProfile`] stores that
//! vector exactly, as non-negative rationals, so majorization comparisons and
//! conservation of the total `‖x‖²` are decision-exact rather than subject to
//! float rounding.
//!
//! A profile `b` is dominated by `a` (written `b ≺ a`) when, after sorting
//! both non-increasingly, every prefix sum of `a` is at least the matching
//! prefix sum of `b`, with equal full sums. Equivalently, `b` can be produced
//! from `a` by a sequence of Robin-Hood transfers that move mass from a larger
//! component to a smaller one. Dominated means more spread out: the flattest
//! profile with a given support and total is dominated by every other profile
//! with that support and total.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Non-negative squared-weight vector `(x_i²)` with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightProfile {
    weights: Vec<Rational>,
}

/// Representation of the square roots of a profile as `x_i = t_i · √c` with a
/// common scale `c` and rational factors `t_i` over the support.
///
/// Exact sign enumeration needs the chaos values `(Σ s_i x_i)² − Σ x_i²` to be
/// rational, which holds exactly when all pairwise products `w_i w_j` of
/// positive weights are perfect rational squares. That is equivalent to this
/// factorization existing, with `c` the first positive weight and
/// `t_i² = w_i / c`.
#[derive(Clone, Debug)]
pub struct RootForm {
    /// Common scale `c`; `weights[support[i]] = c · roots[i]²`.
    pub scale: Rational,
    /// Indices of the strictly positive weights, ascending.
    pub support: Vec<usize>,
    /// Positive rational factors `t_i`, aligned with `support`.
    pub roots: Vec<Rational>,
}

impl WeightProfile {
    /// Builds the profile of squared components of `x`.
    pub fn from_vector(x: &[Rational]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(WeightProfile {
            weights: x.iter().map(|v| v * v).collect(),
        })
    }

    /// Builds the profile of squared components of a float vector.
    ///
    /// Each finite float embeds exactly as a binary fraction before squaring,
    /// so no rounding is introduced. Non-finite entries are rejected.
    pub fn from_f64_vector(x: &[f64]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyVector);
        }
        let mut weights = Vec::with_capacity(x.len());
        for (i, &v) in x.iter().enumerate() {
            let r = Rational::from_float(v)
                .ok_or_else(|| Error::Invalid(format!("non-finite component at index {i}")))?;
            weights.push(&r * &r);
        }
        Ok(WeightProfile { weights })
    }

    /// Wraps an explicit weight vector; every entry must be `≥ 0`.
    pub fn from_weights(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::Invalid(format!("negative weight at index {i}")));
        }
        Ok(WeightProfile { weights })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Dimension `n` of the underlying vector.
    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// Sparsity `K = ‖x‖₀`: the number of strictly positive weights.
    pub fn sparsity(&self) -> usize {
        self.weights.iter().filter(|w| w.is_positive()).count()
    }

    /// Total `‖x‖² = Σ x_i²`, preserved by every Robin-Hood transfer.
    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// Indices of the strictly positive weights, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_positive())
            .map(|(i, _)| i)
            .collect()
    }

    /// True when all positive weights are equal (the extremal flat shape).
    pub fn is_flat(&self) -> bool {
        let mut positive = self.weights.iter().filter(|w| w.is_positive());
        match positive.next() {
            None => true,
            Some(first) => positive.all(|w| w == first),
        }
    }

    /// Whether `other ≺ self`: `self` majorizes (is at least as concentrated
    /// as) `other`.
    ///
    /// Profiles of different dimension are compared after zero-padding the
    /// shorter one; majorization is invariant to appended zeros. Totals must
    /// agree exactly, otherwise the profiles are incomparable.
    pub fn majorizes(&self, other: &WeightProfile) -> Result<bool> {
        if self.total() != other.total() {
            return Err(Error::IncomparableTotals);
        }
        let n = self.dimension().max(other.dimension());
        let sorted_desc = |p: &WeightProfile| {
            let mut v = p.weights.clone();
            v.resize(n, Rational::zero());
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        };
        let a = sorted_desc(self);
        let b = sorted_desc(other);
        let mut prefix_a = Rational::zero();
        let mut prefix_b = Rational::zero();
        for k in 0..n {
            prefix_a += &a[k];
            prefix_b += &b[k];
            if prefix_a < prefix_b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Transfers `eps` from component `i` to component `j`.
    ///
    /// Requires `weights[i] > weights[j]` and `0 < eps < (w_i − w_j)/2`, so
    /// the result is strictly dominated by the input and the total is
    /// unchanged.
    pub fn robin_hood(&self, i: usize, j: usize, eps: &Rational) -> Result<WeightProfile> {
        let dim = self.dimension();
        for index in [i, j] {
            if index >= dim {
                return Err(Error::IndexOutOfBounds { index, dim });
            }
        }
        let gap = &self.weights[i] - &self.weights[j];
        if !gap.is_positive() {
            return Err(Error::InvalidTransfer);
        }
        let two = Rational::from_integer(2.into());
        if !eps.is_positive() || *eps >= gap / two {
            return Err(Error::InvalidTransfer);
        }
        let mut weights = self.weights.clone();
        weights[i] -= eps;
        weights[j] += eps;
        Ok(WeightProfile { weights })
    }

    /// The flat profile with the same support and total: `K` equal weights
    /// `total/K` on the support positions, zeros elsewhere. It is dominated by
    /// every profile with that support and total.
    pub fn flatten(&self) -> Result<WeightProfile> {
        let support = self.support();
        if support.is_empty() {
            return Err(Error::ZeroVectorFlatten);
        }
        let k = Rational::from_integer((support.len() as i64).into());
        let mean = self.total() / k;
        let mut weights = vec![Rational::zero(); self.dimension()];
        for i in support {
            weights[i] = mean.clone();
        }
        Ok(WeightProfile { weights })
    }

    /// Factors the square roots of the support weights as `t_i · √c`.
    ///
    /// Errors with [`Error::Incommensurable`] when some ratio `w_i / c` is not
    /// a perfect rational square, in which case no exact sign enumeration over
    /// this profile is possible.
    pub fn root_form(&self) -> Result<RootForm> {
        let support = self.support();
        if support.is_empty() {
            return Ok(RootForm {
                scale: Rational::one(),
                support,
                roots: Vec::new(),
            });
        }
        let scale = self.weights[support[0]].clone();
        let mut roots = Vec::with_capacity(support.len());
        for &i in &support {
            let ratio = &self.weights[i] / &scale;
            match rational_sqrt(&ratio) {
                Some(t) => roots.push(t),
                None => return Err(Error::Incommensurable { index: i }),
            }
        }
        Ok(RootForm {
            scale,
            support,
            roots,
        })
    }
}

impl fmt::Display for WeightProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer();
    let den = r.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn profile(ws: &[(i64, i64)]) -> WeightProfile {
        WeightProfile::from_weights(ws.iter().map(|&(n, d)| r(n, d)).collect()).unwrap()
    }

    #[test]
    fn from_vector_squares_components() {
        let p = WeightProfile::from_vector(&[r(1, 4), r(1, 4), r(1, 4), r(0, 1)]).unwrap();
        assert_eq!(p.weights(), &[r(1, 16), r(1, 16), r(1, 16), r(0, 1)]);
        assert_eq!(p.sparsity(), 3);

        let zero = WeightProfile::from_vector(&[r(0, 1)]).unwrap();
        assert_eq!(zero.sparsity(), 0);

        let signed = WeightProfile::from_vector(&[r(3, 1), r(-4, 1)]).unwrap();
        assert_eq!(signed.weights(), &[r(9, 1), r(16, 1)]);
        assert_eq!(signed.total(), r(25, 1));
    }

    #[test]
    fn from_vector_rejects_empty() {
        assert!(matches!(
            WeightProfile::from_vector(&[]),
            Err(Error::EmptyVector)
        ));
    }

    #[test]
    fn majorizes_thirds_over_quarters() {
        let a = profile(&[(1, 3), (1, 3), (1, 3), (0, 1)]);
        let b = profile(&[(1, 4), (1, 4), (1, 4), (1, 4)]);
        assert!(a.majorizes(&b).unwrap());
        assert!(!b.majorizes(&a).unwrap());
    }

    #[test]
    fn majorizes_is_reflexive() {
        let a = profile(&[(2, 5), (1, 5), (2, 5)]);
        assert!(a.majorizes(&a).unwrap());
    }

    #[test]
    fn majorizes_rejects_more_concentrated_rhs() {
        let a = profile(&[(1, 2), (1, 2), (0, 1)]);
        let b = profile(&[(1, 1), (0, 1), (0, 1)]);
        assert!(!a.majorizes(&b).unwrap());
        assert!(b.majorizes(&a).unwrap());
    }

    #[test]
    fn majorizes_zero_pads_dimensions() {
        let a = profile(&[(1, 2), (1, 2)]);
        let b = profile(&[(1, 2), (1, 2), (0, 1), (0, 1)]);
        assert!(a.majorizes(&b).unwrap());
        assert!(b.majorizes(&a).unwrap());
    }

    #[test]
    fn majorizes_requires_equal_totals() {
        let a = profile(&[(1, 1)]);
        let b = profile(&[(1, 2)]);
        assert!(matches!(
            a.majorizes(&b),
            Err(Error::IncomparableTotals)
        ));
    }

    #[test]
    fn robin_hood_transfers_mass() {
        let p = profile(&[(1, 1), (0, 1)]);
        let q = p.robin_hood(0, 1, &r(1, 4)).unwrap();
        assert_eq!(q.weights(), &[r(3, 4), r(1, 4)]);
        assert_eq!(q.total(), p.total());
        assert!(p.majorizes(&q).unwrap());
        assert!(!q.majorizes(&p).unwrap());
    }

    #[test]
    fn robin_hood_rejects_equal_components() {
        let p = profile(&[(1, 2), (1, 2)]);
        assert!(matches!(
            p.robin_hood(0, 1, &r(1, 10)),
            Err(Error::InvalidTransfer)
        ));
    }

    #[test]
    fn robin_hood_three_components() {
        let p = profile(&[(2, 3), (1, 3), (0, 1)]);
        let q = p.robin_hood(0, 2, &r(1, 6)).unwrap();
        assert_eq!(q.weights(), &[r(1, 2), r(1, 3), r(1, 6)]);
        assert!(p.majorizes(&q).unwrap());
    }

    #[test]
    fn robin_hood_rejects_amount_at_half_gap() {
        let p = profile(&[(1, 1), (0, 1)]);
        assert!(matches!(
            p.robin_hood(0, 1, &r(1, 2)),
            Err(Error::InvalidTransfer)
        ));
        assert!(matches!(
            p.robin_hood(0, 1, &r(0, 1)),
            Err(Error::InvalidTransfer)
        ));
    }

    #[test]
    fn robin_hood_rejects_out_of_bounds() {
        let p = profile(&[(1, 1), (0, 1)]);
        assert!(matches!(
            p.robin_hood(0, 2, &r(1, 4)),
            Err(Error::IndexOutOfBounds { index: 2, dim: 2 })
        ));
    }

    #[test]
    fn flatten_examples() {
        let already = profile(&[(1, 2), (1, 2), (0, 1)]);
        assert_eq!(already.flatten().unwrap(), already);

        let two = profile(&[(3, 4), (1, 4)]);
        assert_eq!(two.flatten().unwrap(), profile(&[(1, 2), (1, 2)]));

        let one = profile(&[(1, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(one.flatten().unwrap(), one);

        let zero = profile(&[(0, 1), (0, 1)]);
        assert!(matches!(zero.flatten(), Err(Error::ZeroVectorFlatten)));
    }

    #[test]
    fn flatten_is_fixed_point_and_dominated() {
        let p = profile(&[(5, 8), (1, 4), (1, 8), (0, 1)]);
        let flat = p.flatten().unwrap();
        assert_eq!(flat.flatten().unwrap(), flat);
        assert!(p.majorizes(&flat).unwrap());
    }

    #[test]
    fn root_form_on_rational_vector() {
        let p = WeightProfile::from_vector(&[r(3, 5), r(4, 5), r(0, 1)]).unwrap();
        let rf = p.root_form().unwrap();
        assert_eq!(rf.support, vec![0, 1]);
        // scale is the first support weight; roots are relative to it
        assert_eq!(rf.scale, r(9, 25));
        assert_eq!(rf.roots, vec![r(1, 1), r(4, 3)]);
        for (idx, t) in rf.support.iter().zip(&rf.roots) {
            assert_eq!(&rf.scale * t * t, p.weights()[*idx]);
        }
    }

    #[test]
    fn root_form_on_flat_profile() {
        let p = profile(&[(1, 3), (1, 3), (1, 3)]);
        let rf = p.root_form().unwrap();
        assert_eq!(rf.scale, r(1, 3));
        assert_eq!(rf.roots, vec![r(1, 1); 3]);
    }

    #[test]
    fn root_form_rejects_incommensurable_weights() {
        let p = profile(&[(1, 2), (1, 3)]);
        assert!(matches!(
            p.root_form(),
            Err(Error::Incommensurable { index: 1 })
        ));
    }

    #[test]
    fn rational_sqrt_detects_perfect_squares() {
        assert_eq!(rational_sqrt(&r(9, 16)), Some(r(3, 4)));
        assert_eq!(rational_sqrt(&r(2, 1)), None);
        assert_eq!(rational_sqrt(&r(0, 1)), Some(r(0, 1)));
        assert_eq!(rational_sqrt(&r(-1, 1)), None);
    }
}
