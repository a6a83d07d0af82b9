//! Seeded verification suites cross-checking closed forms against the
//! enumeration oracle.
//!
//! Four suites cover the load-bearing identities and inequalities:
//!
//! 1. **formula equivalence** — the standardized-binomial closed form equals
//!    the brute-force chaos moment of the flat unit-norm profile, exactly;
//! 2. **Schur transfers** — a Robin-Hood transfer (more balanced profile)
//!    never decreases an even chaos moment, exactly;
//! 3. **moment domination** — every exact distortion-law moment is bounded
//!    by the worst-case closed form, with equality on flat profiles;
//! 4. **Khintchine chain** — first-order moments grow under flattening and
//!    are capped by the Gaussian comparison.
//!
//! All randomness is drawn from seeded sequential streams, so a report is a
//! pure function of its configuration.
//!
//! Exactness is fragile here: enumeration needs square-commensurable weight
//! profiles, and Schur pairs must stay commensurable *after* the transfer.
//! The pair generator achieves that by rotating two components of a rational
//! vector through a rational rotation `(cos, sin) = ((u²−1)/(u²+1),
//! 2u/(u²+1))`: the rotated components are again rational, their squared sum
//! is preserved exactly, and for `u` large enough the move is a strict
//! Robin-Hood transfer on the squares.

use num_traits::Zero;

use crate::majorization::WeightProfile;
use crate::moments::{
    chaos_extreme_moment, distortion_moment_from_table, gaussian_moment, khintchine_moment,
    ChaosMomentTable,
};
use crate::oracle::{chaos_law_with, distortion_law_with, OracleConfig};
use crate::rng::SequentialRng;
use crate::Rational;

/// Stream index of the Schur-transfer profile generator.
pub const SCHUR_STREAM: u64 = 1;
/// Stream index of the moment-domination profile generator.
pub const DOMINATION_STREAM: u64 = 2;
/// Stream index of the Khintchine profile generator.
pub const KHINTCHINE_STREAM: u64 = 3;

/// Outcome of one suite: how many checks ran and which failed.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}: {} checks, {} failures ... {}",
            self.name,
            self.checks,
            self.failures.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Caps and sample counts for the verification suites.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub formula_max_k: u32,
    pub formula_max_q: u32,
    pub schur_pairs: usize,
    pub schur_max_k: usize,
    pub schur_max_q: u32,
    pub domination_profiles: usize,
    pub domination_max_k: usize,
    pub domination_max_m: u32,
    pub domination_max_q: u32,
    pub khintchine_profiles: usize,
    pub khintchine_max_k: usize,
    pub khintchine_max_q: u32,
    pub oracle: OracleConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 7,
            formula_max_k: 12,
            formula_max_q: 10,
            schur_pairs: 200,
            schur_max_k: 10,
            schur_max_q: 8,
            domination_profiles: 50,
            domination_max_k: 8,
            domination_max_m: 3,
            domination_max_q: 8,
            khintchine_profiles: 100,
            khintchine_max_k: 10,
            khintchine_max_q: 10,
            oracle: OracleConfig::default(),
        }
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Random profile built from an integer vector (components in `1..=4`, a few
/// interleaved zeros); roughly one in five profiles is flat.
pub fn random_integer_profile(rng: &mut SequentialRng, max_k: usize) -> WeightProfile {
    assert!(max_k >= 1);
    let k = 1 + rng.next_below(max_k as u64) as usize;
    let mut components: Vec<Rational> = if rng.next_below(5) == 0 {
        let v = 1 + rng.next_below(3) as i64;
        vec![int(v); k]
    } else {
        (0..k).map(|_| int(1 + rng.next_below(4) as i64)).collect()
    };
    for _ in 0..rng.next_below(3) {
        let pos = rng.next_below(components.len() as u64 + 1) as usize;
        components.insert(pos, int(0));
    }
    WeightProfile::from_vector(&components).expect("nonempty by construction")
}

/// Random profile built from a rational vector (numerators `1..=5`,
/// denominators `1..=3`, a few interleaved zeros).
pub fn random_rational_profile(rng: &mut SequentialRng, max_k: usize) -> WeightProfile {
    assert!(max_k >= 1);
    let k = 1 + rng.next_below(max_k as u64) as usize;
    let mut components: Vec<Rational> = (0..k)
        .map(|_| {
            ratio(
                1 + rng.next_below(5) as i64,
                1 + rng.next_below(3) as i64,
            )
        })
        .collect();
    for _ in 0..rng.next_below(3) {
        let pos = rng.next_below(components.len() as u64 + 1) as usize;
        components.insert(pos, int(0));
    }
    WeightProfile::from_vector(&components).expect("nonempty by construction")
}

/// Random `(profile, Robin-Hood transfer of it)` pair, both exactly
/// enumerable by the oracle.
///
/// The returned transferred profile literally equals
/// `p.robin_hood(i, j, eps)` for the reported amount; it is produced by a
/// rational rotation of the components behind weights `i` and `j`, which
/// keeps the whole vector rational.
pub fn random_transfer_pair(
    rng: &mut SequentialRng,
    max_k: usize,
) -> (WeightProfile, WeightProfile) {
    assert!(max_k >= 2);
    let k = 2 + rng.next_below(max_k as u64 - 1) as usize;
    let mut components: Vec<Rational> = (0..k)
        .map(|_| int(1 + rng.next_below(4) as i64))
        .collect();
    // guarantee a strict gap between the first two support components
    let bump = &components[1] + int(1 + rng.next_below(3) as i64);
    components[0] = bump;
    for _ in 0..rng.next_below(3) {
        let pos = rng.next_below(components.len() as u64 + 1) as usize;
        components.insert(pos, int(0));
    }
    let profile = WeightProfile::from_vector(&components).expect("nonempty");

    // donor i: strictly larger weight than receiver j
    let weights = profile.weights();
    let (mut donor, mut receiver) = (0usize, 0usize);
    'outer: for i in 0..weights.len() {
        for j in 0..weights.len() {
            if weights[i] > weights[j] && !weights[j].is_zero() {
                donor = i;
                receiver = j;
                break 'outer;
            }
        }
    }
    let a = components[donor].clone();
    let b = components[receiver].clone();
    debug_assert!(&a * &a > &b * &b);

    // rotate (a, b) by the rational rotation with parameter u; larger u means
    // a smaller, always-valid transfer amount
    let mut u = 3 + rng.next_below(8) as i64;
    let threshold = (&a * &a + &b * &b) / int(2);
    let eps = loop {
        let uu = int(u * u);
        let denom = &uu + int(1);
        let cos = (&uu - int(1)) / &denom;
        let sin = int(2 * u) / &denom;
        let c = &a * &cos - &b * &sin;
        let c2 = &c * &c;
        if c2 > threshold {
            break &a * &a - c2;
        }
        u *= 2;
    };
    let transferred = profile
        .robin_hood(donor, receiver, &eps)
        .expect("rotation yields a valid transfer");
    (profile, transferred)
}

/// Suite 1 against an arbitrary closed form; the production form is
/// [`chaos_extreme_moment`]. Taking the formula as a parameter lets tests
/// inject a perturbed one and watch the harness catch it.
pub fn formula_equivalence_suite_with(
    formula: &dyn Fn(u32, u32) -> Rational,
    cfg: &VerifyConfig,
) -> SuiteReport {
    let mut report = SuiteReport {
        name: "formula_equivalence",
        checks: 0,
        failures: Vec::new(),
    };
    for k in 1..=cfg.formula_max_k {
        let flat = WeightProfile::from_weights(vec![ratio(1, k as i64); k as usize])
            .expect("flat profile");
        let law = chaos_law_with(&flat, &cfg.oracle).expect("flat profiles enumerate exactly");
        for q in 1..=cfg.formula_max_q {
            report.checks += 1;
            let closed = formula(k, q);
            let enumerated = law.moment(q);
            if closed != enumerated {
                report.failures.push(format!(
                    "K={k} q={q}: closed form {closed} != oracle {enumerated}"
                ));
            }
        }
    }
    report
}

/// Suite 1: exact equivalence of the standardized-binomial closed form and
/// the brute-force flat-profile chaos moment.
pub fn formula_equivalence_suite(cfg: &VerifyConfig) -> SuiteReport {
    formula_equivalence_suite_with(&chaos_extreme_moment, cfg)
}

/// Suite 2: Robin-Hood transfers never decrease even chaos moments.
pub fn schur_transfer_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport {
        name: "schur_transfers",
        checks: 0,
        failures: Vec::new(),
    };
    let mut rng = SequentialRng::new(cfg.seed, SCHUR_STREAM);
    for _ in 0..cfg.schur_pairs {
        let (original, transferred) = random_transfer_pair(&mut rng, cfg.schur_max_k);
        let law_original = chaos_law_with(&original, &cfg.oracle).expect("generator output enumerates");
        let law_transferred =
            chaos_law_with(&transferred, &cfg.oracle).expect("generator output enumerates");
        let mut q = 2;
        while q <= cfg.schur_max_q {
            report.checks += 1;
            let before = law_original.moment(q);
            let after = law_transferred.moment(q);
            if after < before {
                report.failures.push(format!(
                    "q={q}: transfer decreased moment {before} -> {after}, original {original}, transferred {transferred}"
                ));
            }
            q += 2;
        }
    }
    report
}

/// Suite 3: exact distortion-law moments never exceed the worst-case closed
/// form, with exact equality on flat profiles.
pub fn moment_domination_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport {
        name: "moment_domination",
        checks: 0,
        failures: Vec::new(),
    };
    let mut rng = SequentialRng::new(cfg.seed, DOMINATION_STREAM);
    for _ in 0..cfg.domination_profiles {
        let profile = random_integer_profile(&mut rng, cfg.domination_max_k);
        let k = profile.sparsity() as u32;
        let flat = profile.is_flat();
        let mu = ChaosMomentTable::new(k, cfg.domination_max_q);
        for m in 1..=cfg.domination_max_m {
            let law = distortion_law_with(&profile, m, &cfg.oracle)
                .expect("small instances convolve exactly");
            for q in 2..=cfg.domination_max_q {
                report.checks += 1;
                let exact = law.moment(q);
                let bound = distortion_moment_from_table(m, &mu, q);
                let ok = if flat { exact == bound } else { exact <= bound };
                if !ok {
                    report.failures.push(format!(
                        "m={m} q={q} flat={flat}: law moment {exact} vs bound {bound}, profile {profile}"
                    ));
                }
            }
        }
    }
    report
}

/// Suite 4: `E(Σ x_i r_i)^q ≤ E(flattened)^q ≤ E Norm(0, ‖x‖²)^q` for even q.
pub fn khintchine_chain_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport {
        name: "khintchine_chain",
        checks: 0,
        failures: Vec::new(),
    };
    let mut rng = SequentialRng::new(cfg.seed, KHINTCHINE_STREAM);
    for _ in 0..cfg.khintchine_profiles {
        let profile = random_rational_profile(&mut rng, cfg.khintchine_max_k);
        let flat = profile.flatten().expect("positive sparsity");
        let total = profile.total();
        let mut q = 2;
        while q <= cfg.khintchine_max_q {
            report.checks += 1;
            let lhs = khintchine_moment(&profile, q).expect("within cap");
            let mid = khintchine_moment(&flat, q).expect("flat profiles enumerate");
            let rhs = gaussian_moment(&total, q);
            if lhs > mid {
                report.failures.push(format!(
                    "q={q}: moment {lhs} exceeds flattened {mid}, profile {profile}"
                ));
            }
            if mid > rhs {
                report.failures.push(format!(
                    "q={q}: flattened moment {mid} exceeds gaussian {rhs}, profile {profile}"
                ));
            }
            q += 2;
        }
    }
    report
}

/// Runs all four suites.
pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    vec![
        formula_equivalence_suite(cfg),
        schur_transfer_suite(cfg),
        moment_domination_suite(cfg),
        khintchine_chain_suite(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config() -> VerifyConfig {
        VerifyConfig {
            seed: 11,
            formula_max_k: 6,
            formula_max_q: 6,
            schur_pairs: 20,
            schur_max_k: 6,
            schur_max_q: 6,
            domination_profiles: 8,
            domination_max_k: 5,
            domination_max_m: 2,
            domination_max_q: 6,
            khintchine_profiles: 20,
            khintchine_max_k: 7,
            khintchine_max_q: 8,
            oracle: OracleConfig::default(),
        }
    }

    #[test]
    fn all_suites_pass_on_reduced_caps() {
        for report in run_all(&quick_config()) {
            assert!(report.passed(), "{}", report.summary_line());
            assert!(report.checks > 0);
        }
    }

    #[test]
    fn perturbed_formula_is_caught_with_witness() {
        let cfg = quick_config();
        let perturbed =
            |k: u32, q: u32| chaos_extreme_moment(k, q) + Rational::new(1.into(), 100.into());
        let report = formula_equivalence_suite_with(&perturbed, &cfg);
        assert!(!report.passed());
        assert!(report.failures[0].contains("K="));
        assert!(report.failures[0].contains("!= oracle"));
    }

    #[test]
    fn transfer_pairs_are_genuine_and_commensurable() {
        let mut rng = SequentialRng::new(3, 0);
        for _ in 0..50 {
            let (original, transferred) = random_transfer_pair(&mut rng, 8);
            assert_eq!(original.total(), transferred.total());
            assert!(original.majorizes(&transferred).unwrap());
            assert!(!transferred.majorizes(&original).unwrap());
            // both sides stay exactly enumerable
            assert!(original.root_form().is_ok());
            assert!(transferred.root_form().is_ok());
        }
    }

    #[test]
    fn zero_pairs_requested_yields_trivially_passing_suite() {
        let mut cfg = quick_config();
        cfg.schur_pairs = 0;
        let report = schur_transfer_suite(&cfg);
        assert_eq!(report.checks, 0);
        assert!(report.passed());
        // the formula suite still runs independently
        assert!(formula_equivalence_suite(&cfg).checks > 0);
    }
}
