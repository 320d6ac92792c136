//! Hermite polynomials with the 1/i! normalization, multidimensional
//! products indexed by multi-indices, finite expansions, and Gaussian inner
//! products by Gauss-Hermite quadrature.
//!
//! The i-th polynomial here satisfies H_0 = 1, H_1 = x and the stable
//! recurrence H_{i+1} = (x·H_i - H_{i-1})/(i+1); its squared norm against
//! the standard Gaussian weight is 1/i!. Multidimensional elements are
//! products H_I(x) = Π_n H_{i_n}(x_n) over the occupied sites of a
//! multi-index, and form an orthogonal basis of the Gaussian L² space in
//! which every computation of this crate happens degree by degree.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

/// Value of H_i(x) by the three-term recurrence.
pub fn hermite_eval(i: u32, x: f64) -> f64 {
    if i == 0 {
        return 1.0;
    }
    let mut prev = 1.0; // H_0
    let mut cur = x; // H_1
    for k in 1..i {
        let next = (x * cur - prev) / (k as f64 + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// n! as f64 (exact for n ≤ 20, far beyond the degrees used here).
pub fn factorial(n: u32) -> f64 {
    (1..=n as u64).product::<u64>() as f64
}

/// A finitely supported configuration supplying a real value per site.
pub type Configuration = BTreeMap<i64, f64>;

/// Finite real linear combination of multidimensional Hermite polynomials.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HermiteExpansion {
    terms: BTreeMap<MultiIndex, f64>,
}

impl HermiteExpansion {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant c (coefficient of H_0).
    pub fn constant(c: f64) -> Self {
        Self::from_terms([(MultiIndex::zero(), c)])
    }

    /// The coordinate function x_site = H_{δ_site}.
    pub fn x(site: i64) -> Self {
        Self::from_terms([(MultiIndex::delta(site), 1.0)])
    }

    pub fn from_terms<T: IntoIterator<Item = (MultiIndex, f64)>>(terms: T) -> Self {
        let mut exp = HermiteExpansion::default();
        for (index, coeff) in terms {
            exp.add_term(index, coeff);
        }
        exp
    }

    pub fn add_term(&mut self, index: MultiIndex, coeff: f64) {
        let entry = self.terms.entry(index).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            let key = self
                .terms
                .iter()
                .find(|(_, &v)| v == 0.0)
                .map(|(k, _)| k.clone());
            if let Some(key) = key {
                self.terms.remove(&key);
            }
        }
    }

    pub fn coeff(&self, index: &MultiIndex) -> f64 {
        self.terms.get(index).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.terms.iter().map(|(i, &c)| (i, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest |coefficient| (0 for the zero expansion).
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest total degree appearing (None when empty).
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|i| i.degree()).max()
    }

    /// Terms of total degree N only.
    pub fn project(&self, degree: u32) -> HermiteExpansion {
        HermiteExpansion {
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.degree() == degree)
                .map(|(i, &c)| (i.clone(), c))
                .collect(),
        }
    }

    /// τ^k applied as an operator on functions: H_I ↦ H_{τ^{-k} I}, i.e.
    /// every occupied site moves up by k.
    pub fn translate(&self, k: i64) -> HermiteExpansion {
        HermiteExpansion {
            terms: self
                .terms
                .iter()
                .map(|(i, &c)| (i.shift(-k), c))
                .collect(),
        }
    }

    /// Point evaluation Σ_I ξ̂_I Π_n H_{i_n}(x_n). Every occupied site must
    /// carry a configuration value.
    pub fn eval(&self, config: &Configuration) -> Result<f64> {
        let mut total = 0.0;
        for (index, coeff) in &self.terms {
            let mut product = *coeff;
            for (site, count) in index.iter() {
                let x = config
                    .get(&site)
                    .copied()
                    .ok_or(Error::MissingSiteValue(site))?;
                product *= hermite_eval(count, x);
            }
            total += product;
        }
        Ok(total)
    }

    /// Σ_I ξ̂_I² Π_n 1/i_n!, the squared Gaussian L² norm.
    pub fn norm_sq(&self) -> f64 {
        self.terms
            .iter()
            .map(|(index, c)| {
                let weight: f64 = index.iter().map(|(_, count)| 1.0 / factorial(count)).product();
                c * c * weight
            })
            .sum()
    }

    /// File format: one `multiindex<TAB>coefficient` line per term.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (index, coeff) in &self.terms {
            out.push_str(&format!("{index}\t{coeff}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut exp = HermiteExpansion::zero();
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let (index, coeff) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("expected multiindex<TAB>coeff: `{line}`")))?;
            let index: MultiIndex = index.parse()?;
            let coeff: f64 = coeff
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad coefficient `{coeff}`: {e}")))?;
            exp.add_term(index, coeff);
        }
        Ok(exp)
    }
}

impl std::ops::Add for HermiteExpansion {
    type Output = HermiteExpansion;
    fn add(mut self, rhs: HermiteExpansion) -> HermiteExpansion {
        for (index, coeff) in rhs.terms {
            self.add_term(index, coeff);
        }
        self
    }
}

impl std::ops::Sub for HermiteExpansion {
    type Output = HermiteExpansion;
    fn sub(mut self, rhs: HermiteExpansion) -> HermiteExpansion {
        for (index, coeff) in rhs.terms {
            self.add_term(index, -coeff);
        }
        self
    }
}

impl std::ops::Mul<f64> for HermiteExpansion {
    type Output = HermiteExpansion;
    fn mul(self, rhs: f64) -> HermiteExpansion {
        HermiteExpansion::from_terms(self.terms.into_iter().map(|(i, c)| (i, c * rhs)))
    }
}

impl fmt::Display for HermiteExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (index, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            if index.is_zero() {
                write!(f, "{coeff}")?;
            } else {
                write!(f, "{coeff}·H[{index}]")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Gauss-Hermite rule adapted to the standard Gaussian probability weight:
/// integrates f against e^(-x²/2)/√(2π) exactly for polynomials of degree
/// ≤ 2n-1.
///
/// Nodes and weights come from the Golub-Welsch algorithm: eigenvalues of
/// the symmetric tridiagonal Jacobi matrix with √(k/2) off the diagonal,
/// weights from the first eigenvector components, then the substitution
/// x = √2 t converts from the e^(-t²) weight.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 0..n - 1 {
            let b = ((k as f64 + 1.0) * 0.5).sqrt();
            jacobi[(k, k + 1)] = b;
            jacobi[(k + 1, k)] = b;
        }
        let eigen = jacobi.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = eigen
            .eigenvalues
            .iter()
            .zip(eigen.eigenvectors.row(0).iter())
            .map(|(&t, &v)| (std::f64::consts::SQRT_2 * t, v * v))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Σ v² = 1 already matches ∫ e^(-x²/2)/√(2π) dx = 1
        GaussHermite {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gaussian inner product <a, b> by product Gauss-Hermite quadrature over
/// the union of the occupied sites; exact for the polynomial integrand.
pub fn inner_product(a: &HermiteExpansion, b: &HermiteExpansion) -> f64 {
    let mut sites: Vec<i64> = Vec::new();
    let mut degree = 0u32;
    for exp in [a, b] {
        if let Some(d) = exp.max_degree() {
            degree += d;
        }
        for (index, _) in exp.terms() {
            for site in index.support() {
                if !sites.contains(&site) {
                    sites.push(site);
                }
            }
        }
    }
    sites.sort_unstable();
    if sites.is_empty() {
        return a.coeff(&MultiIndex::zero()) * b.coeff(&MultiIndex::zero());
    }
    let rule = GaussHermite::new(degree as usize + 2);
    let mut config = Configuration::new();
    integrate_rec(a, b, &rule, &sites, 0, &mut config)
}

fn integrate_rec(
    a: &HermiteExpansion,
    b: &HermiteExpansion,
    rule: &GaussHermite,
    sites: &[i64],
    pos: usize,
    config: &mut Configuration,
) -> f64 {
    if pos == sites.len() {
        return a.eval(config).expect("all sites set") * b.eval(config).expect("all sites set");
    }
    let mut total = 0.0;
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        config.insert(sites[pos], x);
        total += w * integrate_rec(a, b, rule, sites, pos + 1, config);
    }
    config.remove(&sites[pos]);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Dense univariate polynomial with exact rational coefficients,
    /// ascending powers. Test-only oracle, independent of the recurrence
    /// evaluation path.
    #[derive(Debug, Clone, PartialEq)]
    struct RatPoly(Vec<BigRational>);

    impl RatPoly {
        fn constant(c: i64) -> Self {
            RatPoly(vec![BigRational::from(BigInt::from(c))])
        }

        fn x() -> Self {
            RatPoly(vec![BigRational::zero(), BigRational::one()])
        }

        fn trim(mut self) -> Self {
            while self.0.last().is_some_and(Zero::is_zero) && self.0.len() > 1 {
                self.0.pop();
            }
            self
        }

        fn add(&self, other: &Self) -> Self {
            let n = self.0.len().max(other.0.len());
            let mut out = vec![BigRational::zero(); n];
            for (k, c) in self.0.iter().enumerate() {
                out[k] += c;
            }
            for (k, c) in other.0.iter().enumerate() {
                out[k] += c;
            }
            RatPoly(out).trim()
        }

        fn scale(&self, r: BigRational) -> Self {
            RatPoly(self.0.iter().map(|c| c * &r).collect()).trim()
        }

        fn mul_x(&self) -> Self {
            let mut out = vec![BigRational::zero()];
            out.extend(self.0.iter().cloned());
            RatPoly(out).trim()
        }

        fn derivative(&self) -> Self {
            if self.0.len() <= 1 {
                return RatPoly(vec![BigRational::zero()]);
            }
            RatPoly(
                self.0[1..]
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * BigRational::from(BigInt::from(k as i64 + 1)))
                    .collect(),
            )
            .trim()
        }

        fn eval_f64(&self, x: f64) -> f64 {
            self.0.iter().rev().fold(0.0, |acc, c| {
                acc * x
                    + c.numer().to_string().parse::<f64>().unwrap()
                        / c.denom().to_string().parse::<f64>().unwrap()
            })
        }
    }

    /// H_i as an exact polynomial via the Rodrigues route:
    /// d^i/dx^i e^(-x²/2) = p_i e^(-x²/2) with p_0 = 1, p_{i+1} = p_i' - x p_i,
    /// and H_i = (-1)^i p_i / i!.
    fn hermite_rodrigues(i: u32) -> RatPoly {
        let mut p = RatPoly::constant(1);
        for _ in 0..i {
            p = p.derivative().add(&p.mul_x().scale(-BigRational::one()));
        }
        let mut fact = BigRational::one();
        for k in 1..=i as i64 {
            fact *= BigRational::from(BigInt::from(k));
        }
        let sign = if i % 2 == 0 { 1 } else { -1 };
        p.scale(BigRational::from(BigInt::from(sign)) / fact)
    }

    /// H_i by the recurrence, in exact arithmetic.
    fn hermite_recurrence(i: u32) -> RatPoly {
        if i == 0 {
            return RatPoly::constant(1);
        }
        let mut prev = RatPoly::constant(1);
        let mut cur = RatPoly::x();
        for k in 1..i {
            let next = cur
                .mul_x()
                .add(&prev.scale(-BigRational::one()))
                .scale(BigRational::one() / BigRational::from(BigInt::from(k as i64 + 1)));
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn recurrence_matches_rodrigues_exactly() {
        for i in 0..=8 {
            assert_eq!(hermite_recurrence(i), hermite_rodrigues(i), "i={i}");
        }
    }

    #[test]
    fn derivative_lowers_index_exactly() {
        // ∂H_i = H_{i-1}
        for i in 1..=6 {
            assert_eq!(hermite_rodrigues(i).derivative(), hermite_rodrigues(i - 1));
        }
    }

    #[test]
    fn creation_identity_with_normalization() {
        // (x - d/dx) H_i = (i+1) H_{i+1}: the normalized creation constant.
        for i in 0..=6 {
            let h = hermite_rodrigues(i);
            let lhs = h.mul_x().add(&h.derivative().scale(-BigRational::one()));
            let rhs =
                hermite_rodrigues(i + 1).scale(BigRational::from(BigInt::from(i as i64 + 1)));
            assert_eq!(lhs, rhs, "i={i}");
        }
    }

    #[test]
    fn hermite_eval_examples() {
        assert_eq!(hermite_eval(0, 2.7), 1.0);
        assert_eq!(hermite_eval(1, -0.4), -0.4);
        for x in [-2.0, -0.3, 0.0, 1.5] {
            assert_abs_diff_eq!(hermite_eval(2, x), (x * x - 1.0) / 2.0, epsilon = 1e-15);
        }
        assert_eq!(hermite_eval(3, 0.0), 0.0);
    }

    #[test]
    fn hermite_eval_matches_exact_polynomial() {
        for i in 0..=8u32 {
            let exact = hermite_rodrigues(i);
            for x in [-3.0, -1.1, 0.0, 0.7, 2.5] {
                assert_abs_diff_eq!(hermite_eval(i, x), exact.eval_f64(x), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn eval_examples() {
        let mut config = Configuration::new();
        config.insert(0, 2.5);
        assert_eq!(HermiteExpansion::x(0).eval(&config).unwrap(), 2.5);

        let h2 = HermiteExpansion::from_terms([(MultiIndex::from_pairs([(0, 2)]), 1.0)]);
        config.insert(0, 1.0);
        assert_eq!(h2.eval(&config).unwrap(), 0.0);

        assert_eq!(HermiteExpansion::constant(1.0).eval(&config).unwrap(), 1.0);

        let err = HermiteExpansion::x(5).eval(&config).unwrap_err();
        assert!(matches!(err, Error::MissingSiteValue(5)));
    }

    #[test]
    fn norm_sq_examples() {
        assert_eq!(HermiteExpansion::x(0).norm_sq(), 1.0);
        let two_h2 = HermiteExpansion::from_terms([(MultiIndex::from_pairs([(0, 2)]), 2.0)]);
        assert_eq!(two_h2.norm_sq(), 2.0);
        assert_eq!(HermiteExpansion::zero().norm_sq(), 0.0);
    }

    #[test]
    fn project_partitions_terms() {
        let exp = HermiteExpansion::x(0)
            + HermiteExpansion::from_terms([(MultiIndex::from_pairs([(1, 2)]), 1.0)]);
        assert_eq!(exp.project(1), HermiteExpansion::x(0));
        assert!(exp.project(3).is_zero());
        let recombined = exp.project(0) + exp.project(1) + exp.project(2);
        assert_eq!(recombined, exp);
    }

    #[test]
    fn orthogonality_and_norms_small_degrees() {
        // <H_I, H_J> = δ_IJ Π 1/i_n! for |I|,|J| ≤ 4 on sites {0, 1, 2}
        let sites = [0i64, 1, 2];
        let mut indices = vec![MultiIndex::zero()];
        for d in 1..=4u32 {
            for tuple in crate::multiindex::enumerate_sorted_tuples(d, 0, 2) {
                let _ = sites;
                indices.push(MultiIndex::decode(&tuple));
            }
        }
        for a in &indices {
            for b in &indices {
                let ea = HermiteExpansion::from_terms([(a.clone(), 1.0)]);
                let eb = HermiteExpansion::from_terms([(b.clone(), 1.0)]);
                let expected = if a == b {
                    a.iter().map(|(_, c)| 1.0 / factorial(c)).product()
                } else {
                    0.0
                };
                assert_abs_diff_eq!(inner_product(&ea, &eb), expected, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn quadrature_matches_analytic_norm() {
        let exp = HermiteExpansion::from_terms([
            (MultiIndex::from_pairs([(0, 2), (1, 1)]), 0.7),
            (MultiIndex::from_pairs([(1, 3)]), -1.2),
            (MultiIndex::zero(), 0.3),
        ]);
        assert_abs_diff_eq!(inner_product(&exp, &exp), exp.norm_sq(), epsilon = 1e-10);
    }

    #[test]
    fn annihilation_identity_by_finite_differences() {
        // d/dx_n eval(H_I) ≈ eval(H_{I-δ_n}) at random configurations
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let indices = [
            MultiIndex::from_pairs([(0, 2), (1, 1)]),
            MultiIndex::from_pairs([(-1, 1), (0, 1), (2, 2)]),
            MultiIndex::from_pairs([(0, 4)]),
        ];
        for index in &indices {
            let exp = HermiteExpansion::from_terms([(index.clone(), 1.0)]);
            for _ in 0..20 {
                let mut config = Configuration::new();
                for site in index.support() {
                    config.insert(site, rng.gen_range(-1.5..1.5));
                }
                for site in index.support().collect::<Vec<_>>() {
                    let lowered = match index.lower(site) {
                        Some(j) => HermiteExpansion::from_terms([(j, 1.0)]),
                        None => HermiteExpansion::zero(),
                    };
                    let h = 1e-5;
                    let x = config[&site];
                    let mut up = config.clone();
                    up.insert(site, x + h);
                    let mut down = config.clone();
                    down.insert(site, x - h);
                    let derivative =
                        (exp.eval(&up).unwrap() - exp.eval(&down).unwrap()) / (2.0 * h);
                    let expected = lowered.eval(&config).unwrap();
                    assert_abs_diff_eq!(derivative, expected, epsilon = 1e-6);
                }
            }
        }
    }

    #[test]
    fn shift_identity_by_evaluation() {
        // (τ^k ξ)(x) = ξ(τ^k x) with (τx)_n = x_{n+1}
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let exp = HermiteExpansion::from_terms([
            (MultiIndex::from_pairs([(0, 1), (1, 2)]), 1.5),
            (MultiIndex::from_pairs([(-2, 1)]), -0.4),
        ]);
        for k in -3i64..=3 {
            let translated = exp.translate(k);
            for _ in 0..10 {
                let mut config = Configuration::new();
                for site in -8i64..=8 {
                    config.insert(site, rng.gen_range(-1.5..1.5));
                }
                let shifted_config: Configuration =
                    config.iter().map(|(&s, &v)| (s - k, v)).collect();
                assert_abs_diff_eq!(
                    translated.eval(&config).unwrap(),
                    exp.eval(&shifted_config).unwrap(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let exp = HermiteExpansion::from_terms([
            (MultiIndex::from_pairs([(-1, 1), (3, 2)]), 1.25),
            (MultiIndex::zero(), -0.5),
        ]);
        let text = exp.to_file_string();
        assert_eq!(HermiteExpansion::parse(&text).unwrap(), exp);
    }

    proptest! {
        #[test]
        fn norm_equivalence_bounds(coeffs in proptest::collection::vec(-2.0f64..2.0, 1..6)) {
            // (1/(N!)^N) Σ ξ̂_I² ≤ ‖ξ‖² ≤ Σ ξ̂_I² for degree-N expansions
            let n = 3u32;
            let tuples = crate::multiindex::enumerate_sorted_tuples(n, -1, 1);
            let exp = HermiteExpansion::from_terms(
                coeffs
                    .iter()
                    .zip(&tuples)
                    .map(|(&c, t)| (MultiIndex::decode(t), c)),
            );
            let sum_sq: f64 = exp.terms().map(|(_, c)| c * c).sum();
            let norm = exp.norm_sq();
            let lower = sum_sq / factorial(n).powi(n as i32);
            prop_assert!(norm <= sum_sq + 1e-12);
            prop_assert!(norm >= lower - 1e-12);
        }

        #[test]
        fn translation_is_isometric(k in -4i64..=4, c in -3.0f64..3.0) {
            let exp = HermiteExpansion::from_terms([
                (MultiIndex::from_pairs([(0, 2)]), c),
                (MultiIndex::from_pairs([(1, 1)]), 1.0),
            ]);
            prop_assert!((exp.translate(k).norm_sq() - exp.norm_sq()).abs() < 1e-12);
            prop_assert_eq!(exp.translate(k).translate(-k), exp);
        }
    }
}
