//! Constant-coefficient vector fields D_n = Σ_k a_k ∂_{k+n}, their action on
//! Hermite expansions, the exactness constructor from local functions, and
//! closedness verification in symbolic and Fourier-coefficient form.
//!
//! A function ξ is closed when D_n(τ^m ξ) = D_m(τ^n ξ) for all integers
//! m, n; it is exact when ξ = D_0(Σ_k τ^k g) for a local g. On the Fourier
//! side of a degree-N piece, closedness is the family of coefficient
//! relations Σ_k a_k ξ̂_{I+δ_{n+k}} = Σ_k a_k ξ̂_{τ^n(I+δ_k)} over
//! degree-(N-1) multi-indices I.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::hermite::HermiteExpansion;
use crate::multiindex::{enumerate_sorted_tuples, LatticePoint, MultiIndex};

/// Default absolute tolerance for violations in floating coefficient data.
pub const COEFF_TOL: f64 = 1e-9;

/// Finitely supported coefficient sequence (a_k) defining D_0 = Σ a_k ∂_k.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    coeffs: BTreeMap<i64, f64>,
    sum: f64,
}

impl VectorField {
    pub fn new<T: IntoIterator<Item = (i64, f64)>>(coeffs: T) -> Result<Self> {
        let coeffs: BTreeMap<i64, f64> =
            coeffs.into_iter().filter(|&(_, a)| a != 0.0).collect();
        if coeffs.is_empty() {
            return Err(Error::EmptyField);
        }
        let sum = coeffs.values().sum();
        Ok(VectorField { coeffs, sum })
    }

    /// The Glauber field ∂_0.
    pub fn d0() -> Self {
        Self::new([(0, 1.0)]).expect("nonzero")
    }

    /// The second-order Ginzburg-Landau field Y_0 = ∂_1 - ∂_0.
    pub fn y0() -> Self {
        Self::new([(1, 1.0), (0, -1.0)]).expect("nonzero")
    }

    /// The fourth-order Ginzburg-Landau field X_0 = ∂_1 - 2∂_0 + ∂_{-1}.
    pub fn x0() -> Self {
        Self::new([(1, 1.0), (0, -2.0), (-1, 1.0)]).expect("nonzero")
    }

    /// ∂_3 - ∂_0, whose symbol has three distinct unit roots.
    pub fn d3_minus_d0() -> Self {
        Self::new([(3, 1.0), (0, -1.0)]).expect("nonzero")
    }

    /// Built-in fields by their conventional names.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "Y0" => Some(Self::y0()),
            "X0" => Some(Self::x0()),
            "d0" => Some(Self::d0()),
            "d3-d0" => Some(Self::d3_minus_d0()),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.coeffs.iter().map(|(&k, &a)| (k, a))
    }

    pub fn coeff(&self, k: i64) -> f64 {
        self.coeffs.get(&k).copied().unwrap_or(0.0)
    }

    /// Σ a_k, which decides whether constants are exact.
    pub fn coefficient_sum(&self) -> f64 {
        self.sum
    }

    pub fn support_min(&self) -> i64 {
        *self.coeffs.keys().next().expect("nonempty")
    }

    pub fn support_max(&self) -> i64 {
        *self.coeffs.keys().next_back().expect("nonempty")
    }

    /// max |k| over the support.
    pub fn support_radius(&self) -> i64 {
        self.support_min().abs().max(self.support_max().abs())
    }

    /// D_n applied to an expansion: Σ_I ξ̂_I Σ_k a_k H_{I-δ_{k+n}}, with
    /// negative multi-indices dropped.
    pub fn apply_d(&self, n: i64, exp: &HermiteExpansion) -> HermiteExpansion {
        let mut out = HermiteExpansion::zero();
        for (index, coeff) in exp.terms() {
            for (k, a) in self.iter() {
                if let Some(lowered) = index.lower(k + n) {
                    out.add_term(lowered, coeff * a);
                }
            }
        }
        out
    }

    /// The exact function ξ^g = D_0(Σ_k τ^k g); the sum is finite because
    /// D_0 kills every translate whose support misses the field's.
    pub fn exact_from_local(&self, g: &HermiteExpansion) -> HermiteExpansion {
        let sites: Vec<i64> = g
            .terms()
            .flat_map(|(index, _)| index.support().collect::<Vec<_>>())
            .collect();
        let (Some(&site_min), Some(&site_max)) = (sites.iter().min(), sites.iter().max()) else {
            return HermiteExpansion::zero();
        };
        let mut out = HermiteExpansion::zero();
        for k in (self.support_min() - site_max)..=(self.support_max() - site_min) {
            out = out + self.apply_d(0, &g.translate(k));
        }
        out
    }

    /// Scans D_n(τ^m ξ) = D_m(τ^n ξ) for all |m|, |n| ≤ range as expansion
    /// equality. Integer-coefficient data can run at tol = 0.0.
    pub fn is_closed_symbolic(
        &self,
        exp: &HermiteExpansion,
        range: i64,
        tol: f64,
    ) -> SymbolicClosednessReport {
        let mut violations = Vec::new();
        for n in -range..=range {
            for m in (n + 1)..=range {
                let lhs = self.apply_d(n, &exp.translate(m));
                let rhs = self.apply_d(m, &exp.translate(n));
                let max_abs_diff = (lhs - rhs).max_abs_coeff();
                if max_abs_diff > tol {
                    violations.push(SymbolicViolation { n, m, max_abs_diff });
                }
            }
        }
        SymbolicClosednessReport {
            range,
            closed: violations.is_empty(),
            violations,
        }
    }

    /// Checks the coefficient relations on every (n, I) whose referenced
    /// multi-indices stay inside the data window; out-of-window conditions
    /// are counted as skipped, never assumed.
    pub fn is_closed_coeffs(
        &self,
        coeffs: &CoefficientField,
        tol: f64,
    ) -> CoeffClosednessReport {
        let window = coeffs.window();
        let radius = self.support_radius();
        let n_bound = 2 * window + radius;
        let mut violations = Vec::new();
        let mut pairs_checked = 0usize;
        let mut pairs_skipped = 0usize;
        for base in enumerate_sorted_tuples(coeffs.degree() - 1, -window, window) {
            let base = MultiIndex::decode(&base);
            for n in -n_bound..=n_bound {
                let mut lhs = 0.0;
                let mut rhs = 0.0;
                let mut in_window = true;
                for (k, a) in self.iter() {
                    let left = base.raise(n + k);
                    let right = base.raise(k).shift(n);
                    if !coeffs.sites_in_window(&left) || !coeffs.sites_in_window(&right) {
                        in_window = false;
                        break;
                    }
                    lhs += a * coeffs.value_at_index(&left);
                    rhs += a * coeffs.value_at_index(&right);
                }
                if !in_window {
                    pairs_skipped += 1;
                    continue;
                }
                pairs_checked += 1;
                if (lhs - rhs).abs() > tol {
                    violations.push(CoeffViolation {
                        n,
                        base: base.clone(),
                        lhs,
                        rhs,
                    });
                }
            }
        }
        CoeffClosednessReport {
            window,
            pairs_checked,
            pairs_skipped,
            closed: violations.is_empty(),
            violations,
        }
    }

    /// File format: one `k a_k` line per coefficient.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (k, a) in self.iter() {
            out.push_str(&format!("{k} {a}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(k), Some(a), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("expected `k a_k`, got `{line}`")));
            };
            let k: i64 = k
                .parse()
                .map_err(|e| Error::Parse(format!("bad index `{k}`: {e}")))?;
            let a: f64 = a
                .parse()
                .map_err(|e| Error::Parse(format!("bad coefficient `{a}`: {e}")))?;
            coeffs.push((k, a));
        }
        Self::new(coeffs)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{a}·∂_{k}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SymbolicViolation {
    pub n: i64,
    pub m: i64,
    pub max_abs_diff: f64,
}

#[derive(Debug, Clone)]
pub struct SymbolicClosednessReport {
    pub range: i64,
    pub closed: bool,
    pub violations: Vec<SymbolicViolation>,
}

#[derive(Debug, Clone)]
pub struct CoeffViolation {
    pub n: i64,
    pub base: MultiIndex,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct CoeffClosednessReport {
    pub window: i64,
    pub pairs_checked: usize,
    pub pairs_skipped: usize,
    pub closed: bool,
    pub violations: Vec<CoeffViolation>,
}

/// Degree-N Fourier coefficient data on a truncated window, stored once per
/// S_N-class (sorted lattice vector).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    degree: u32,
    window: i64,
    values: BTreeMap<LatticePoint, f64>,
}

impl CoefficientField {
    pub fn new<T: IntoIterator<Item = (LatticePoint, f64)>>(
        degree: u32,
        window: i64,
        entries: T,
    ) -> Result<Self> {
        assert!(degree >= 1, "degree-0 data is a scalar, not a field");
        let mut values = BTreeMap::new();
        for (point, value) in entries {
            if point.dim() != degree as usize {
                return Err(Error::DimensionMismatch {
                    expected: degree as usize,
                    got: point.dim(),
                });
            }
            let point = point.sorted();
            if let Some(&site) = point.coords().iter().find(|c| c.abs() > window) {
                return Err(Error::WindowOverflow { window, site });
            }
            if value != 0.0 {
                *values.entry(point).or_insert(0.0) += value;
            }
        }
        values.retain(|_, v| *v != 0.0);
        Ok(CoefficientField {
            degree,
            window,
            values,
        })
    }

    pub fn empty(degree: u32, window: i64) -> Self {
        Self::new(degree, window, []).expect("no entries")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, f64)> + '_ {
        self.values.iter().map(|(p, &v)| (p, v))
    }

    /// ξ̂ at a lattice point; constant on S_N-classes.
    pub fn value_at_point(&self, point: &LatticePoint) -> f64 {
        self.values.get(&point.sorted()).copied().unwrap_or(0.0)
    }

    /// ξ̂_I through the coding I ↦ z_I.
    pub fn value_at_index(&self, index: &MultiIndex) -> f64 {
        self.values.get(&index.encode()).copied().unwrap_or(0.0)
    }

    pub fn sites_in_window(&self, index: &MultiIndex) -> bool {
        index.support().all(|s| s.abs() <= self.window)
    }

    /// ℓ² norm over the S_N-invariant extension to Z^N (each stored class
    /// counted with its number of distinct permutations).
    pub fn norm_sq_symmetrized(&self) -> f64 {
        self.values
            .iter()
            .map(|(p, v)| distinct_permutation_count(p) as f64 * v * v)
            .sum()
    }

    /// File format: header `degree N window W`, then `z_1 … z_N value` lines.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("degree {} window {}\n", self.degree, self.window);
        for (point, value) in self.iter() {
            out.push_str(&format!("{point} {value}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty coefficient field file".into()))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        let (degree, window) = match tokens.as_slice() {
            ["degree", n, "window", w] => (
                n.parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad degree `{n}`: {e}")))?,
                w.parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad window `{w}`: {e}")))?,
            ),
            _ => {
                return Err(Error::Parse(format!(
                    "expected header `degree N window W`, got `{header}`"
                )))
            }
        };
        let mut entries = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != degree as usize + 1 {
                return Err(Error::Parse(format!(
                    "expected {} coordinates and a value, got `{line}`",
                    degree
                )));
            }
            let coords = tokens[..degree as usize]
                .iter()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|e| Error::Parse(format!("bad coordinate `{t}`: {e}")))
                })
                .collect::<Result<Vec<i64>>>()?;
            let value: f64 = tokens[degree as usize]
                .parse()
                .map_err(|e| Error::Parse(format!("bad value: {e}")))?;
            entries.push((LatticePoint::new(coords), value));
        }
        Self::new(degree, window, entries)
    }
}

fn distinct_permutation_count(point: &LatticePoint) -> usize {
    let mut total = (1..=point.dim()).product::<usize>();
    let mut run = 1usize;
    let coords = point.coords();
    for i in 1..coords.len() {
        if coords[i] == coords[i - 1] {
            run += 1;
            total /= run;
        } else {
            run = 1;
        }
    }
    total
}

/// The degree-N slice of an expansion as a coefficient field:
/// ξ̂(z_I) = coefficient of H_I.
pub fn expansion_to_coeffs(
    exp: &HermiteExpansion,
    degree: u32,
    window: i64,
) -> Result<CoefficientField> {
    let slice = exp.project(degree);
    CoefficientField::new(
        degree,
        window,
        slice.terms().map(|(index, coeff)| (index.encode(), coeff)),
    )
}
