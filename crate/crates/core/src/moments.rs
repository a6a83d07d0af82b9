//! Exact closed-form moment engine.
//!
//! The distortion of an `m`-row Rademacher projection applied to a `K`-sparse
//! vector is moment-dominated by the average of `m` IID copies of `Z² − 1`,
//! where `Z` standardizes the symmetric binomial with `K` trials. This module
//! evaluates all the closed forms behind that statement exactly:
//!
//! - [`rademacher_sum_moment`]: `E(Σ_{i≤K} r_i)^q = 2^{−K} Σ_i C(K,i)(K−2i)^q`,
//! - [`chaos_extreme_moment`]: `μ_q = E(Z² − 1)^q`, the worst-case chaos
//!   moment of a unit-norm `K`-sparse input,
//! - [`DistortionMomentTable`] / [`distortion_moment`]: `ν_q = E E_*^q` for
//!   the `m`-row average `E_* = (1/m) Σ (Z_i² − 1)`, expanded over integer
//!   partitions of `q` with all parts `≥ 2` (first moments vanish, which
//!   prunes the expansion dramatically),
//! - [`khintchine_moment`]: `E(Σ x_i r_i)^q` by sign enumeration over the
//!   support, and [`gaussian_moment`] for the Gaussian comparison
//!   `σ^q (q−1)!!`.
//!
//! Everything is computed over arbitrary-precision rationals; binomial sums
//! accumulate integer numerators with incrementally updated binomial
//! coefficients, so `K` in the thousands stays cheap. For `K` or `q` beyond
//! [`EXACT_K_LIMIT`] / [`EXACT_Q_LIMIT`] a log-space floating-point path
//! ([`chaos_extreme_moment_f64`], [`distortion_moment_f64`]) takes over;
//! results from that path are flagged [`Exactness::Approximate`].

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::majorization::WeightProfile;
use crate::oracle::for_each_half_sign_sum;
use crate::Rational;

/// Largest sparsity for which the exact rational path is the default.
pub const EXACT_K_LIMIT: u64 = 10_000;
/// Largest moment order for which the exact rational path is the default.
pub const EXACT_Q_LIMIT: u32 = 64;
/// Default cap on the support size of the Khintchine sign enumeration.
pub const DEFAULT_KHINTCHINE_CAP: usize = 20;

/// Whether a numeric result came from exact rational arithmetic or from the
/// floating-point fast path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Approximate,
}

/// Integer partition `λ ⊢ q` in non-increasing part order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Parts in non-increasing order.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The partitioned integer `q = Σ λ_i`.
    pub fn sum(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts `ℓ(λ)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Frequency notation: `(part, multiplicity)` pairs, parts descending.
    pub fn frequencies(&self) -> Vec<(u32, u32)> {
        let mut freq: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match freq.last_mut() {
                Some((part, mult)) if *part == p => *mult += 1,
                _ => freq.push((p, 1)),
            }
        }
        freq
    }

    /// All partitions of `q` with every part `≥ min_part` and at most
    /// `max_len` parts, in descending lexicographic order.
    pub fn generate(q: u32, min_part: u32, max_len: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        if q == 0 {
            out.push(Partition { parts: Vec::new() });
            return out;
        }
        let mut current = Vec::new();
        descend(q, q, min_part.max(1), max_len, &mut current, &mut out);
        out
    }
}

fn descend(
    remaining: u32,
    max_part: u32,
    min_part: u32,
    slots: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if slots == 0 {
        return;
    }
    let mut p = remaining.min(max_part);
    while p >= min_part {
        if p == remaining {
            let mut parts = current.clone();
            parts.push(p);
            out.push(Partition { parts });
        } else if remaining - p >= min_part {
            current.push(p);
            descend(remaining - p, p, min_part, slots - 1, current, out);
            current.pop();
        }
        p -= 1;
    }
}

fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= i;
    }
    acc
}

fn double_factorial_odd(q: u32) -> BigInt {
    // (q−1)!! for even q ≥ 2: 1·3·5···(q−1)
    let mut acc = BigInt::one();
    let mut i = 1u64;
    while i < q as u64 {
        acc *= i;
        i += 2;
    }
    acc
}

/// `E(Σ_{i=1..K} r_i)^q` for IID signs: `2^{−K} Σ_i C(K,i)(K−2i)^q`.
///
/// Zero for odd `q` by symmetry.
pub fn rademacher_sum_moment(k: u32, q: u32) -> Rational {
    if q == 0 {
        return Rational::one();
    }
    if q % 2 == 1 || k == 0 {
        return Rational::zero();
    }
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one();
    for i in 0..=k / 2 {
        let base = BigInt::from(k as i64 - 2 * i as i64);
        let weight = if i != k - i { &binom * 2 } else { binom.clone() };
        sum += weight * base.pow(q);
        binom = binom * (k - i) / (i + 1);
    }
    Rational::new(sum, BigInt::one() << k)
}

/// Table of the extreme chaos moments `μ_q = E(Z² − 1)^q`, `q = 1..=qmax`,
/// for `Z` the standardized `Binom(K, 1/2)`.
///
/// `μ_q` equals the `q`-th chaos moment of the unit-norm flat `K`-sparse
/// vector, the maximum over all inputs of that norm and sparsity.
#[derive(Clone, Debug)]
pub struct ChaosMomentTable {
    k: u32,
    moments: Vec<Rational>,
}

impl ChaosMomentTable {
    /// Computes `μ_1..μ_qmax` in a single sweep over the binomial support.
    ///
    /// With `n_i = (2i−K)² − K` the moment is `Σ_i C(K,i) n_i^q / (2^K K^q)`;
    /// numerators accumulate as integers and the binomial coefficient updates
    /// incrementally, so the sweep is polynomial in `K`.
    pub fn new(k: u32, qmax: u32) -> Self {
        let mut moments = Vec::with_capacity(qmax as usize);
        if k == 0 {
            moments.resize(qmax as usize, Rational::zero());
            return ChaosMomentTable { k, moments };
        }
        let kb = BigInt::from(k);
        let mut sums = vec![BigInt::zero(); qmax as usize];
        let mut binom = BigInt::one();
        for i in 0..=k / 2 {
            let d = BigInt::from(2 * i as i64 - k as i64);
            let n_i = &d * &d - &kb;
            let weight = if i != k - i { &binom * 2 } else { binom.clone() };
            let mut power = BigInt::one();
            for q in 1..=qmax as usize {
                power *= &n_i;
                sums[q - 1] += &weight * &power;
            }
            binom = binom * (k - i) / (i + 1);
        }
        let two_k = BigInt::one() << k;
        let mut denom = two_k;
        for q in 1..=qmax as usize {
            denom *= &kb;
            moments.push(Rational::new(sums[q - 1].clone(), denom.clone()));
        }
        ChaosMomentTable { k, moments }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn qmax(&self) -> u32 {
        self.moments.len() as u32
    }

    /// `μ_q` for `1 ≤ q ≤ qmax`.
    pub fn moment(&self, q: u32) -> &Rational {
        assert!(q >= 1 && q <= self.qmax(), "moment order {q} out of table range");
        &self.moments[q as usize - 1]
    }
}

/// `μ_q = E(Z² − 1)^q` for the standardized symmetric binomial with `K`
/// trials; the sharp chaos moment of a unit-norm `K`-sparse input.
pub fn chaos_extreme_moment(k: u32, q: u32) -> Rational {
    if q == 0 {
        return Rational::one();
    }
    if k <= 1 {
        return Rational::zero();
    }
    ChaosMomentTable::new(k, q).moment(q).clone()
}

/// Sharp upper bound `total(p)^q · μ_q(K)` on the chaos moment `R_q(x)` over
/// all inputs with the norm and sparsity of `p`.
pub fn chaos_extreme_moment_scaled(p: &WeightProfile, q: u32) -> Result<Rational> {
    let k = p.sparsity();
    if k == 0 {
        return Err(Error::ZeroVector);
    }
    let scale = power(&p.total(), q);
    Ok(scale * chaos_extreme_moment(k as u32, q))
}

/// Table of the distortion moments `ν_q = E E_*^q`, `q = 2..=qmax`, for the
/// `m`-row average of IID extreme chaoses at sparsity `K`.
#[derive(Clone, Debug)]
pub struct DistortionMomentTable {
    m: u32,
    k: u32,
    qmax: u32,
    moments: Vec<Rational>,
}

impl DistortionMomentTable {
    pub fn new(m: u32, k: u32, qmax: u32) -> Self {
        assert!(m >= 1, "row count must be positive");
        let mu = ChaosMomentTable::new(k, qmax.max(2));
        let moments = (2..=qmax)
            .map(|q| distortion_moment_from_table(m, &mu, q))
            .collect();
        DistortionMomentTable { m, k, qmax, moments }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn qmax(&self) -> u32 {
        self.qmax
    }

    /// `ν_q` for `2 ≤ q ≤ qmax`.
    pub fn moment(&self, q: u32) -> &Rational {
        assert!(q >= 2 && q <= self.qmax, "moment order {q} out of table range");
        &self.moments[q as usize - 2]
    }
}

/// `ν_q = E[((1/m) Σ_{i≤m} W_i)^q]` for IID `W_i` with moments
/// `μ_j = chaos_extreme_moment(K, j)`.
pub fn distortion_moment(m: u32, k: u32, q: u32) -> Rational {
    if q == 0 {
        return Rational::one();
    }
    let mu = ChaosMomentTable::new(k, q);
    distortion_moment_from_table(m, &mu, q)
}

/// Partition expansion of `ν_q` against a precomputed `μ` table.
///
/// `ν_q = m^{−q} Σ_{λ ⊢ q} [q!/Π λ_i!] · [m!/((m−ℓ)! Π f_j!)] · Π μ_{λ_i}`
/// restricted to partitions with all parts `≥ 2` and length `ℓ ≤ m`, since
/// `μ_1 = 0` kills every term containing a singleton part.
pub fn distortion_moment_from_table(m: u32, mu: &ChaosMomentTable, q: u32) -> Rational {
    assert!(m >= 1, "row count must be positive");
    if q == 0 {
        return Rational::one();
    }
    let max_len = (m as usize).min(q as usize / 2);
    let q_fact = factorial(q);
    let mut total = Rational::zero();
    for partition in Partition::generate(q, 2, max_len) {
        let mut part_fact = BigInt::one();
        for &part in partition.parts() {
            part_fact *= factorial(part);
        }
        let multinomial = exact_div(&q_fact, &part_fact);

        let len = partition.len() as u32;
        let mut falling = BigInt::one();
        for j in 0..len {
            falling *= m as u64 - j as u64;
        }
        let mut freq_fact = BigInt::one();
        for (_, mult) in partition.frequencies() {
            freq_fact *= factorial(mult);
        }
        let placements = exact_div(&falling, &freq_fact);

        let mut term = Rational::from_integer(multinomial * placements);
        for &part in partition.parts() {
            term *= mu.moment(part);
        }
        total += term;
    }
    total / power(&Rational::from_integer(m.into()), q)
}

fn exact_div(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!((num % den).is_zero(), "inexact coefficient division");
    num / den
}

fn power(base: &Rational, q: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..q {
        acc *= base;
    }
    acc
}

/// `E(Σ_i x_i r_i)^q` for the profile `p = (x_i²)`, exact.
///
/// Odd moments are zero by sign symmetry and returned without computation.
/// Even moments are evaluated by enumerating the `2^K` sign assignments over
/// the support (symmetry-halved), which requires the support weights to be
/// square-commensurable; the default cap is [`DEFAULT_KHINTCHINE_CAP`].
pub fn khintchine_moment(p: &WeightProfile, q: u32) -> Result<Rational> {
    khintchine_moment_with_cap(p, q, DEFAULT_KHINTCHINE_CAP)
}

/// [`khintchine_moment`] with an explicit support cap.
pub fn khintchine_moment_with_cap(p: &WeightProfile, q: u32, cap: usize) -> Result<Rational> {
    if q == 0 {
        return Ok(Rational::one());
    }
    if q % 2 == 1 {
        return Ok(Rational::zero());
    }
    let rf = p.root_form()?;
    let k = rf.support.len();
    if k == 0 {
        return Ok(Rational::zero());
    }
    if k > cap {
        return Err(Error::KhintchineCap { k, cap });
    }
    // E(Σ x_i r_i)^q = c^{q/2} · 2^{−(K−1)} Σ_reps (Σ s_i t_i)^q over the
    // half enumeration with the first sign pinned (q even, so ±S agree).
    let mut acc = Rational::zero();
    for_each_half_sign_sum(&rf.roots, |s| {
        acc += power(s, q);
    });
    let norm = Rational::new(BigInt::one(), BigInt::one() << (k - 1));
    Ok(power(&rf.scale, q / 2) * acc * norm)
}

/// Gaussian comparison moment `E Norm(0, σ²)^q = σ^q (q−1)!!` for even `q`,
/// zero for odd `q`. Takes `σ²` so the result stays rational.
pub fn gaussian_moment(sigma2: &Rational, q: u32) -> Rational {
    if q == 0 {
        return Rational::one();
    }
    if q % 2 == 1 {
        return Rational::zero();
    }
    Rational::from_integer(double_factorial_odd(q)) * power(sigma2, q / 2)
}

/// Converts an exact rational to the nearest `f64`, robust to numerators and
/// denominators far outside the float range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() || r.denom().is_one() {
            return v;
        }
    }
    // Fallback: scale down by a power of two until both sides convert.
    let bits = r.numer().bits().max(r.denom().bits());
    let shift = bits.saturating_sub(400);
    let num = r.numer() >> shift;
    let den = r.denom() >> shift;
    match (num.to_f64(), den.to_f64()) {
        (Some(n), Some(d)) if d != 0.0 => n / d,
        _ => f64::NAN,
    }
}

// ---------------------------------------------------------------------------
// Floating-point fast path
// ---------------------------------------------------------------------------

use crate::numeric::CompensatedSum;

/// Floating-point `μ_q` via log-space binomial weights and compensated
/// summation; intended for `K` or `q` beyond the exact-path limits.
pub fn chaos_extreme_moment_f64(k: u64, q: u32) -> f64 {
    if q == 0 {
        return 1.0;
    }
    if k <= 1 {
        return 0.0;
    }
    let kf = k as f64;
    let ln2k = kf * std::f64::consts::LN_2;
    let mut log_binom = 0.0f64; // ln C(k, 0)
    let mut acc = CompensatedSum::default();
    for i in 0..=k / 2 {
        let d = 2.0 * i as f64 - kf;
        let v = d * d / kf - 1.0;
        if v != 0.0 {
            let magnitude = (log_binom - ln2k + q as f64 * v.abs().ln()).exp();
            let signed = if v < 0.0 && q % 2 == 1 { -magnitude } else { magnitude };
            let weight = if i != k - i { 2.0 } else { 1.0 };
            acc.add(weight * signed);
        }
        log_binom += ((k - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    acc.total()
}

/// Floating-point `ν_q` via the same partition expansion as the exact path,
/// with log-space coefficients.
pub fn distortion_moment_f64(m: u64, k: u64, q: u32) -> f64 {
    assert!(m >= 1, "row count must be positive");
    if q == 0 {
        return 1.0;
    }
    let mut mu = vec![0.0f64; q as usize + 1];
    for order in 2..=q {
        mu[order as usize] = chaos_extreme_moment_f64(k, order);
    }
    let mut ln_fact = vec![0.0f64; q as usize + 1];
    for i in 2..=q as usize {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let ln_m = (m as f64).ln();
    let max_len = (m as usize).min(q as usize / 2);
    let mut acc = CompensatedSum::default();
    for partition in Partition::generate(q, 2, max_len) {
        let mut log_coef = ln_fact[q as usize] - q as f64 * ln_m;
        for &part in partition.parts() {
            log_coef -= ln_fact[part as usize];
        }
        for j in 0..partition.len() as u64 {
            log_coef += ((m - j) as f64).ln();
        }
        for (_, mult) in partition.frequencies() {
            log_coef -= ln_fact[mult as usize];
        }
        let mut product = 1.0f64;
        for &part in partition.parts() {
            product *= mu[part as usize];
        }
        acc.add(log_coef.exp() * product);
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn rademacher_sum_moment_small_cases() {
        assert_eq!(rademacher_sum_moment(2, 2), int(2));
        assert_eq!(rademacher_sum_moment(2, 4), int(8));
        assert_eq!(rademacher_sum_moment(5, 3), int(0));
        assert_eq!(rademacher_sum_moment(3, 4), int(21));
        assert_eq!(rademacher_sum_moment(7, 0), int(1));
        assert_eq!(rademacher_sum_moment(0, 2), int(0));
    }

    #[test]
    fn rademacher_sum_moment_matches_direct_enumeration() {
        // independent route: walk all 2^k sign vectors
        for k in 1..=10u32 {
            for q in (2..=8u32).step_by(2) {
                let mut total = BigInt::zero();
                for mask in 0u32..(1 << k) {
                    let s = k as i64 - 2 * mask.count_ones() as i64;
                    total += BigInt::from(s).pow(q);
                }
                let expected = Rational::new(total, BigInt::one() << k);
                assert_eq!(rademacher_sum_moment(k, q), expected, "k={k} q={q}");
            }
        }
    }

    #[test]
    fn chaos_extreme_moment_known_values() {
        for q in 1..=10 {
            assert_eq!(chaos_extreme_moment(1, q), int(0));
        }
        assert_eq!(chaos_extreme_moment(2, 2), int(1));
        assert_eq!(chaos_extreme_moment(3, 2), r(4, 3));
        assert_eq!(chaos_extreme_moment(7, 0), int(1));
    }

    #[test]
    fn chaos_moments_are_standardized() {
        for k in 1..=12 {
            let table = ChaosMomentTable::new(k, 10);
            assert_eq!(table.moment(1), &int(0), "μ_1 must vanish for k={k}");
            for q in (2..=10).step_by(2) {
                assert!(
                    !table.moment(q).is_negative(),
                    "even moment μ_{q} negative for k={k}"
                );
            }
        }
    }

    #[test]
    fn chaos_extreme_moment_scaled_applies_norm_power() {
        let flat3 = WeightProfile::from_weights(vec![r(1, 3), r(1, 3), r(1, 3)]).unwrap();
        assert_eq!(chaos_extreme_moment_scaled(&flat3, 2).unwrap(), r(4, 3));

        let two = WeightProfile::from_weights(vec![int(2), int(2)]).unwrap();
        assert_eq!(chaos_extreme_moment_scaled(&two, 2).unwrap(), int(16));

        let one = WeightProfile::from_weights(vec![int(1)]).unwrap();
        assert_eq!(chaos_extreme_moment_scaled(&one, 7).unwrap(), int(0));

        let zero = WeightProfile::from_weights(vec![int(0)]).unwrap();
        assert!(chaos_extreme_moment_scaled(&zero, 2).is_err());
    }

    #[test]
    fn distortion_moment_examples() {
        assert_eq!(distortion_moment(1, 3, 2), r(4, 3));
        assert_eq!(distortion_moment(2, 2, 2), r(1, 2));
        assert_eq!(distortion_moment(2, 2, 3), int(0));
    }

    #[test]
    fn distortion_moment_reduces_to_chaos_moment_for_single_row() {
        for k in 1..=8 {
            for q in 1..=8 {
                assert_eq!(
                    distortion_moment(1, k, q),
                    chaos_extreme_moment(k, q),
                    "k={k} q={q}"
                );
            }
        }
    }

    #[test]
    fn distortion_second_moment_scales_inversely_with_rows() {
        for m in 1..=5u32 {
            for k in 2..=8 {
                let expected = chaos_extreme_moment(k, 2) / int(m as i64);
                assert_eq!(distortion_moment(m, k, 2), expected, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn khintchine_moment_examples() {
        let ones = WeightProfile::from_vector(&[int(1), int(1)]).unwrap();
        assert_eq!(khintchine_moment(&ones, 2).unwrap(), int(2));
        assert_eq!(khintchine_moment(&ones, 3).unwrap(), int(0));

        // flat n=3 with unit norm: σ^q n^{−q/2} · rademacher_sum_moment(n, q)
        let flat3 = WeightProfile::from_weights(vec![r(1, 3); 3]).unwrap();
        let direct = khintchine_moment(&flat3, 4).unwrap();
        let structural = r(1, 9) * rademacher_sum_moment(3, 4);
        assert_eq!(direct, structural);
        assert_eq!(direct, r(7, 3));

        let pythagorean = WeightProfile::from_vector(&[r(3, 5), r(4, 5)]).unwrap();
        assert_eq!(khintchine_moment(&pythagorean, 4).unwrap(), r(1201, 625));
    }

    #[test]
    fn khintchine_moment_polynomial_oracle() {
        // Independent route: multinomial expansion over even exponents,
        // E(Σ x_i r_i)^q = Σ_{Σ a_i = q/2} q!/Π(2a_i)! · Π w_i^{a_i}.
        fn expansion(weights: &[Rational], q: u32) -> Rational {
            fn rec(weights: &[Rational], budget: u32, q: u32, exps: &mut Vec<u32>, total: &mut Rational) {
                if weights.len() == exps.len() {
                    if budget == 0 {
                        let mut coef = factorial(q);
                        for &a in exps.iter() {
                            coef = exact_div(&coef, &factorial(2 * a));
                        }
                        let mut term = Rational::from_integer(coef);
                        for (w, &a) in weights.iter().zip(exps.iter()) {
                            term *= power(w, a);
                        }
                        *total += term;
                    }
                    return;
                }
                for a in 0..=budget {
                    exps.push(a);
                    rec(weights, budget - a, q, exps, total);
                    exps.pop();
                }
            }
            let mut total = Rational::zero();
            rec(weights, q / 2, q, &mut Vec::new(), &mut total);
            total
        }

        let cases: Vec<Vec<Rational>> = vec![
            vec![r(3, 5), r(4, 5)],
            vec![int(1), int(2), int(3)],
            vec![r(1, 2), r(1, 2), r(1, 3), r(2, 3)],
            vec![r(5, 7), int(0), r(1, 7)],
        ];
        for x in cases {
            let p = WeightProfile::from_vector(&x).unwrap();
            for q in (2..=8u32).step_by(2) {
                assert_eq!(
                    khintchine_moment(&p, q).unwrap(),
                    expansion(p.weights(), q),
                    "x={x:?} q={q}"
                );
            }
        }
    }

    #[test]
    fn khintchine_moment_respects_cap() {
        let p = WeightProfile::from_weights(vec![int(1); 12]).unwrap();
        let err = khintchine_moment_with_cap(&p, 2, 10).unwrap_err();
        assert!(err.to_string().contains("use flat-vector or Gaussian bound"));
        assert!(khintchine_moment(&p, 2).is_ok());

        let wide = WeightProfile::from_weights(vec![int(1); 21]).unwrap();
        assert!(khintchine_moment(&wide, 2).is_err());
    }

    #[test]
    fn gaussian_moment_double_factorial() {
        assert_eq!(gaussian_moment(&int(1), 4), int(3));
        assert_eq!(gaussian_moment(&int(1), 2), int(1));
        assert_eq!(gaussian_moment(&int(4), 6), int(960));
        assert_eq!(gaussian_moment(&int(9), 3), int(0));
        assert_eq!(gaussian_moment(&int(9), 0), int(1));
    }

    #[test]
    fn partition_generation() {
        let parts: Vec<Vec<u32>> = Partition::generate(4, 2, 2)
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(parts, vec![vec![4], vec![2, 2]]);

        let of_three = Partition::generate(3, 2, 3);
        assert_eq!(of_three.len(), 1);
        assert_eq!(of_three[0].parts(), &[3]);

        // frequency notation stays consistent with the parts list
        for p in Partition::generate(10, 1, 10) {
            let rebuilt: u32 = p.frequencies().iter().map(|(part, mult)| part * mult).sum();
            assert_eq!(rebuilt, 10);
        }
        assert_eq!(Partition::generate(8, 2, 8).len(), Partition::generate(8, 2, 4).len());
    }

    #[test]
    fn fast_path_tracks_exact_values() {
        for (k, q) in [(10u32, 4u32), (50, 8), (200, 6), (1000, 4)] {
            let exact = rational_to_f64(&chaos_extreme_moment(k, q));
            let fast = chaos_extreme_moment_f64(k as u64, q);
            let rel = ((fast - exact) / exact).abs();
            assert!(rel < 1e-10, "k={k} q={q}: exact={exact} fast={fast}");
        }
        for (m, k, q) in [(10u32, 50u32, 6u32), (100, 256, 8)] {
            let exact = rational_to_f64(&distortion_moment(m, k, q));
            let fast = distortion_moment_f64(m as u64, k as u64, q);
            let rel = ((fast - exact) / exact).abs();
            assert!(rel < 1e-9, "m={m} k={k} q={q}: exact={exact} fast={fast}");
        }
    }

    #[test]
    fn rational_to_f64_survives_huge_components() {
        // value ~ 1.5 but numerator and denominator far beyond f64 range
        let shift = 2000u32;
        let num = BigInt::from(3) * (BigInt::one() << shift);
        let den = BigInt::from(2) * (BigInt::one() << shift);
        let v = rational_to_f64(&Rational::new(num, den));
        assert!((v - 1.5).abs() < 1e-12, "got {v}");

        let tiny = Rational::new(BigInt::one(), BigInt::one() << 2000);
        assert_eq!(rational_to_f64(&tiny), 0.0);

        let k = 1024u32;
        let big = chaos_extreme_moment(k, 32);
        let approx = chaos_extreme_moment_f64(k as u64, 32);
        let exact = rational_to_f64(&big);
        assert!(((exact - approx) / approx).abs() < 1e-9, "exact={exact} approx={approx}");
    }
}
