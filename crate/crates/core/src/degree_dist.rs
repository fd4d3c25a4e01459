//! Edge-perspective degree distributions for irregular LDPC code design.
//!
//! A distribution stores, for each node degree `d`, the fraction of graph
//! edges attached to a node of that degree. The generating polynomial is
//! evaluated as `sum_d coeff[d] * x^(d-1)`. Coefficients outside `[0,1]` are
//! representable on purpose: optimizers hold invalid intermediate states and
//! only project to a valid distribution when a design is extracted.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the coefficient sum for [`DegreeDistribution::is_valid`].
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Edge-perspective degree distribution with support `1..=max_degree`.
///
/// Immutable after creation; all operations return new values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionJson", into = "DistributionJson")]
pub struct DegreeDistribution {
    coeffs: BTreeMap<usize, f64>,
    max_degree: usize,
    /// `dense[d]` is the coefficient of degree `d`; index 0 is unused.
    dense: Vec<f64>,
}

/// Wire form: `{"coeffs": {"2": 0.4, ...}, "max_degree": 15}`.
#[derive(Serialize, Deserialize)]
struct DistributionJson {
    coeffs: BTreeMap<usize, f64>,
    max_degree: usize,
}

impl TryFrom<DistributionJson> for DegreeDistribution {
    type Error = Error;
    fn try_from(raw: DistributionJson) -> Result<Self> {
        Self::new(raw.coeffs, raw.max_degree)
    }
}

impl From<DegreeDistribution> for DistributionJson {
    fn from(dist: DegreeDistribution) -> Self {
        DistributionJson { coeffs: dist.coeffs, max_degree: dist.max_degree }
    }
}

impl DegreeDistribution {
    /// Builds a distribution from a degree -> coefficient map.
    ///
    /// Every stored degree must satisfy `1 <= d <= max_degree`. Coefficient
    /// values are unrestricted here; see [`DegreeDistribution::is_valid`].
    pub fn new(coeffs: BTreeMap<usize, f64>, max_degree: usize) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::InvalidDistribution("max_degree must be >= 1".into()));
        }
        for (&d, &c) in &coeffs {
            if d == 0 || d > max_degree {
                return Err(Error::InvalidDistribution(format!(
                    "degree {d} outside 1..={max_degree}"
                )));
            }
            if !c.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "non-finite coefficient at degree {d}"
                )));
            }
        }
        let mut dense = vec![0.0; max_degree + 1];
        for (&d, &c) in &coeffs {
            dense[d] = c;
        }
        Ok(Self { coeffs, max_degree, dense })
    }

    /// Convenience constructor from `(degree, coefficient)` pairs.
    pub fn from_pairs(pairs: &[(usize, f64)], max_degree: usize) -> Result<Self> {
        Self::new(pairs.iter().copied().collect(), max_degree)
    }

    /// The regular distribution: all edges attach to nodes of degree `d`.
    pub fn regular(d: usize) -> Self {
        Self::from_pairs(&[(d, 1.0)], d).expect("regular distribution is well-formed")
    }

    /// Samples a valid distribution supported on `min_degree..=max_degree`.
    pub fn random_valid<R: Rng>(min_degree: usize, max_degree: usize, rng: &mut R) -> Self {
        assert!(min_degree >= 1 && min_degree <= max_degree);
        let mut coeffs = BTreeMap::new();
        let mut sum = 0.0;
        for d in min_degree..=max_degree {
            let c: f64 = rng.gen();
            coeffs.insert(d, c);
            sum += c;
        }
        for c in coeffs.values_mut() {
            *c /= sum;
        }
        Self::new(coeffs, max_degree).expect("normalized coefficients are well-formed")
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, f64> {
        &self.coeffs
    }

    /// Coefficient of degree `d` (0 when absent or out of range).
    pub fn coeff(&self, d: usize) -> f64 {
        self.dense.get(d).copied().unwrap_or(0.0)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Smallest degree carrying nonzero mass.
    pub fn support_min(&self) -> Option<usize> {
        self.coeffs.iter().find(|(_, &c)| c != 0.0).map(|(&d, _)| d)
    }

    /// Largest degree carrying nonzero mass.
    pub fn support_max(&self) -> Option<usize> {
        self.coeffs.iter().rev().find(|(_, &c)| c != 0.0).map(|(&d, _)| d)
    }

    /// Sum of all coefficients.
    pub fn sum(&self) -> f64 {
        self.coeffs.values().sum()
    }

    /// True iff every coefficient lies in `[0,1]` and the sum is 1 within
    /// [`SUM_TOLERANCE`].
    pub fn is_valid(&self) -> bool {
        let mut sum = 0.0;
        for &c in self.coeffs.values() {
            if !(0.0..=1.0).contains(&c) {
                return false;
            }
            sum += c;
        }
        (sum - 1.0).abs() <= SUM_TOLERANCE
    }

    /// Evaluates the edge polynomial `sum_d coeff[d] * x^(d-1)`.
    ///
    /// Defined for any coefficient values; optimizers evaluate invalid
    /// intermediate states.
    pub fn eval(&self, x: f64) -> f64 {
        // Horner over ascending powers: coefficient of x^(d-1) is dense[d].
        let mut acc = 0.0;
        for d in (1..=self.max_degree).rev() {
            acc = acc * x + self.dense[d];
        }
        acc
    }

    /// Evaluates the derivative `sum_d coeff[d] * (d-1) * x^(d-2)`.
    ///
    /// The degree-1 term contributes nothing.
    pub fn eval_derivative(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for d in (2..=self.max_degree).rev() {
            acc = acc * x + self.dense[d] * (d - 1) as f64;
        }
        acc
    }

    /// Integral of the edge fractions, `sum_d coeff[d] / d`.
    ///
    /// Equals the reciprocal of the average node degree for valid
    /// distributions.
    pub fn inv_avg_node_degree(&self) -> f64 {
        self.coeffs.iter().map(|(&d, &c)| c / d as f64).sum()
    }

    /// Average node degree implied by the edge fractions,
    /// `(sum_d coeff[d]/d)^-1`.
    pub fn avg_node_degree(&self) -> Result<f64> {
        if self.coeffs.values().any(|&c| c < 0.0) {
            return Err(Error::InvalidDistribution(
                "negative coefficient in average-degree computation".into(),
            ));
        }
        let inv = self.inv_avg_node_degree();
        if inv == 0.0 {
            return Err(Error::InvalidDistribution(
                "zero total mass in average-degree computation".into(),
            ));
        }
        Ok(1.0 / inv)
    }

    /// Average degree seen from a uniformly random edge, `sum_d d*coeff[d]`.
    pub fn avg_edge_degree(&self) -> f64 {
        self.coeffs.iter().map(|(&d, &c)| d as f64 * c).sum()
    }

    /// Clamps every coefficient to `[0,1]` and renormalizes to sum 1.
    ///
    /// Degrees whose clamped coefficient is exactly zero are dropped.
    /// Idempotent on its own output.
    pub fn project_to_valid(&self) -> Result<DegreeDistribution> {
        let clamped: BTreeMap<usize, f64> = self
            .coeffs
            .iter()
            .map(|(&d, &c)| (d, c.clamp(0.0, 1.0)))
            .filter(|&(_, c)| c > 0.0)
            .collect();
        let sum: f64 = clamped.values().sum();
        if sum == 0.0 {
            return Err(Error::DegenerateDistribution);
        }
        let normalized = clamped.into_iter().map(|(d, c)| (d, c / sum)).collect();
        Self::new(normalized, self.max_degree)
    }
}

/// Design rate `1 - (sum_d rho[d]/d) / (sum_d lambda[d]/d)` of a valid pair.
pub fn design_rate(lambda: &DegreeDistribution, rho: &DegreeDistribution) -> Result<f64> {
    if !lambda.is_valid() || !rho.is_valid() {
        return Err(Error::InvalidDistribution(
            "design_rate requires valid distributions".into(),
        ));
    }
    Ok(1.0 - rho.inv_avg_node_degree() / lambda.inv_avg_node_degree())
}

/// Block-code parameters: `k` message bits in codewords of `n` bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeParams {
    /// Message length in bits.
    pub k: usize,
    /// Codeword length in bits.
    pub n: usize,
    /// Code rate, exactly `k / n`.
    pub rate: f64,
    /// Target fraction of ones in the parity-check matrix.
    pub density: f64,
}

impl CodeParams {
    pub fn new(k: usize, n: usize, density: f64) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidConfig(format!("need 0 < k < n, got k={k}, n={n}")));
        }
        Ok(Self { k, n, rate: k as f64 / n as f64, density })
    }

    /// Derives `n` from a target rate, then recomputes the exact rate `k/n`.
    pub fn from_rate(k: usize, rate: f64, density: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rate) || rate == 0.0 {
            return Err(Error::InvalidConfig(format!("rate {rate} outside (0,1)")));
        }
        let n = (k as f64 / rate).round() as usize;
        Self::new(k, n, density)
    }

    /// Shannon limit of the erasure channel at this rate, `1 - R`.
    pub fn eps_shannon(&self) -> f64 {
        1.0 - self.rate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dist(pairs: &[(usize, f64)], max: usize) -> DegreeDistribution {
        DegreeDistribution::from_pairs(pairs, max).unwrap()
    }

    #[test]
    fn eval_regular_degree_three() {
        let lam = DegreeDistribution::regular(3);
        assert!((lam.eval(0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn eval_at_zero_without_degree_one_mass() {
        let lam = dist(&[(2, 0.5), (7, 0.5)], 10);
        assert_eq!(lam.eval(0.0), 0.0);
    }

    #[test]
    fn eval_two_term_mixture() {
        // 0.4 * 0.5 + 0.6 * 0.25
        let lam = dist(&[(2, 0.4), (3, 0.6)], 3);
        assert!((lam.eval(0.5) - 0.35).abs() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(DegreeDistribution::regular(3).eval_derivative(0.0), 0.0);
        assert!((DegreeDistribution::regular(6).eval_derivative(1.0) - 5.0).abs() < 1e-12);
        let lam = dist(&[(2, 0.4), (3, 0.6)], 3);
        assert!((lam.eval_derivative(1.0) - 1.6).abs() < 1e-12);
    }

    #[test]
    fn degree_one_term_contributes_zero_to_derivative() {
        let lam = dist(&[(1, 0.3), (2, 0.7)], 2);
        assert!((lam.eval_derivative(0.5) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn avg_node_degree_examples() {
        assert!((DegreeDistribution::regular(3).avg_node_degree().unwrap() - 3.0).abs() < 1e-12);
        assert!((DegreeDistribution::regular(6).avg_node_degree().unwrap() - 6.0).abs() < 1e-12);
        let mix = dist(&[(2, 0.5), (4, 0.5)], 4);
        assert!((mix.avg_node_degree().unwrap() - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn avg_node_degree_rejects_negative_coefficients() {
        let bad = dist(&[(2, -0.1), (3, 1.1)], 3);
        assert!(bad.avg_node_degree().is_err());
    }

    #[test]
    fn design_rate_regular_codes() {
        let r36 = design_rate(&DegreeDistribution::regular(3), &DegreeDistribution::regular(6));
        assert!((r36.unwrap() - 0.5).abs() < 1e-12);
        let r48 = design_rate(&DegreeDistribution::regular(4), &DegreeDistribution::regular(8));
        assert!((r48.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn design_rate_irregular_reference_pair() {
        // Mixtures with node averages 3.6043 and 7.1470; the implied rate
        // is about 0.4956.
        let a = 12.0 * (1.0 / 3.6043 - 0.25);
        let lam = dist(&[(3, a), (4, 1.0 - a)], 4);
        let b = 56.0 * (1.0 / 7.1470 - 0.125);
        let rho = dist(&[(7, b), (8, 1.0 - b)], 8);
        assert!((lam.avg_node_degree().unwrap() - 3.6043).abs() < 1e-9);
        assert!((rho.avg_node_degree().unwrap() - 7.1470).abs() < 1e-9);
        let rate = design_rate(&lam, &rho).unwrap();
        assert!((rate - 0.4956).abs() < 1e-3, "rate {rate}");
    }

    #[test]
    fn design_rate_rejects_invalid_input() {
        let bad = dist(&[(2, 0.7)], 3);
        assert!(design_rate(&bad, &DegreeDistribution::regular(6)).is_err());
    }

    #[test]
    fn projection_examples() {
        let fixed = DegreeDistribution::regular(3).project_to_valid().unwrap();
        assert_eq!(fixed, DegreeDistribution::regular(3));

        let over = dist(&[(2, 0.5), (3, 1.5)], 3).project_to_valid().unwrap();
        assert!((over.coeff(2) - 1.0 / 3.0).abs() < 1e-12);
        assert!((over.coeff(3) - 2.0 / 3.0).abs() < 1e-12);

        let neg = dist(&[(2, -0.2), (3, 0.8)], 3).project_to_valid().unwrap();
        assert_eq!(neg.coeffs().len(), 1);
        assert!((neg.coeff(3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_of_all_nonpositive_mass_is_degenerate() {
        let zero = dist(&[(2, -0.5), (3, -0.1)], 3);
        assert!(matches!(zero.project_to_valid(), Err(Error::DegenerateDistribution)));
    }

    #[test]
    fn valid_distributions_evaluate_to_one_at_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let d = DegreeDistribution::random_valid(2, 15, &mut rng);
            assert!(d.is_valid());
            assert!((d.eval(1.0) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 1e-6;
        for _ in 0..100 {
            let d = DegreeDistribution::random_valid(2, 12, &mut rng);
            let x: f64 = rng.gen_range(0.05..0.95);
            let fd = (d.eval(x + h) - d.eval(x - h)) / (2.0 * h);
            let an = d.eval_derivative(x);
            let denom = fd.abs().max(1e-9);
            assert!(
                ((an - fd) / denom).abs() < 1e-5,
                "analytic {an} vs finite difference {fd} at x={x}"
            );
        }
    }

    #[test]
    fn projection_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let mut coeffs = BTreeMap::new();
            for d in 2..=10 {
                coeffs.insert(d, rng.gen_range(-0.5..1.5));
            }
            let raw = DegreeDistribution::new(coeffs, 10).unwrap();
            let once = match raw.project_to_valid() {
                Ok(p) => p,
                Err(_) => continue,
            };
            let twice = once.project_to_valid().unwrap();
            for (&d, &c) in once.coeffs() {
                assert!((c - twice.coeff(d)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rate_positive_when_lambda_average_below_rho_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let lam = DegreeDistribution::random_valid(2, 6, &mut rng);
            let rho = DegreeDistribution::random_valid(2, 12, &mut rng);
            let la = lam.avg_node_degree().unwrap();
            let ra = rho.avg_node_degree().unwrap();
            if la < ra {
                let rate = design_rate(&lam, &rho).unwrap();
                assert!(rate > 0.0 && rate < 1.0, "rate {rate} for averages {la}, {ra}");
            }
        }
    }

    #[test]
    fn json_round_trip_uses_string_degree_keys() {
        let lam = dist(&[(2, 0.4), (15, 0.6)], 15);
        let text = serde_json::to_string(&lam).unwrap();
        assert!(text.contains("\"2\":0.4"), "serialized form: {text}");
        assert!(text.contains("\"max_degree\":15"));
        let back: DegreeDistribution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, lam);
    }

    #[test]
    fn json_rejects_out_of_range_degree() {
        let text = r#"{"coeffs": {"16": 1.0}, "max_degree": 15}"#;
        assert!(serde_json::from_str::<DegreeDistribution>(text).is_err());
    }

    #[test]
    fn code_params_rate_is_exact_ratio() {
        let code = CodeParams::from_rate(1024, 0.5, 0.01).unwrap();
        assert_eq!(code.n, 2048);
        assert_eq!(code.rate, 0.5);
        assert_eq!(code.eps_shannon(), 0.5);
        assert!(CodeParams::new(10, 10, 0.01).is_err());
    }
}
