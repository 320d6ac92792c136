//! Exact-function generators from finitely supported orbit functions.
//!
//! A function c on the degree-N orbit space lifts to an S̃_N-invariant
//! lattice function c̃(z) = c(canonical form of z), and T c̃ restricted to
//! the sorted codings is the coefficient field of an exact function. The
//! same function arises symbolically as Σ_o c(o) D_0[Σ_n τ^n H_{R(o)+δ_0}];
//! both routes are implemented and cross-checked term by term.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{CoefficientField, VectorField};
use crate::hermite::HermiteExpansion;
use crate::multiindex::{enumerate_sorted_tuples, LatticePoint, MultiIndex};
use crate::symmetry::{canonicalize, Region};
use crate::transport::LatticeFunction;

/// Finitely supported real function on the degree-N orbit space, keyed by
/// cone points.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OrbitFunction {
    degree: u32,
    values: BTreeMap<LatticePoint, f64>,
}

impl OrbitFunction {
    pub fn new<T: IntoIterator<Item = (LatticePoint, f64)>>(
        degree: u32,
        entries: T,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (point, value) in entries {
            if point.dim() != degree as usize {
                return Err(Error::DimensionMismatch {
                    expected: degree as usize,
                    got: point.dim(),
                });
            }
            if !point.is_cone() {
                return Err(Error::NotConePoint(point.to_string()));
            }
            if value != 0.0 {
                *values.entry(point).or_insert(0.0) += value;
            }
        }
        values.retain(|_, v| *v != 0.0);
        Ok(OrbitFunction { degree, values })
    }

    /// The indicator of a single orbit.
    pub fn indicator(cone_point: LatticePoint) -> Result<Self> {
        let degree = cone_point.dim() as u32;
        Self::new(degree, [(cone_point, 1.0)])
    }

    pub fn degree(&self) -> u32 {
        self.degree
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

    pub fn value(&self, cone_point: &LatticePoint) -> f64 {
        self.values.get(cone_point).copied().unwrap_or(0.0)
    }

    /// Largest coordinate over the support (0 when empty).
    pub fn max_coordinate(&self) -> i64 {
        self.values
            .keys()
            .flat_map(|p| p.coords().iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// File format: header `degree N`, then `z_1 … z_N value` lines.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        for (point, value) in self.iter() {
            if self.degree == 0 {
                out.push_str(&format!("{value}\n"));
            } else {
                out.push_str(&format!("{point} {value}\n"));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty orbit function file".into()))?;
        let degree: u32 = header
            .trim()
            .strip_prefix("degree")
            .ok_or_else(|| Error::Parse(format!("expected header `degree N`, got `{header}`")))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad degree: {e}")))?;
        let mut entries = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != degree as usize + 1 {
                return Err(Error::Parse(format!(
                    "expected {degree} coordinates and a value, got `{line}`"
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
        Self::new(degree, entries)
    }
}

/// The S̃_N-invariant extension c̃(z) = c(canonicalize(z)) restricted to a
/// bounded region.
pub fn lift(c: &OrbitFunction, region: &Region) -> Result<LatticeFunction> {
    if region.dim() != c.degree() as usize {
        return Err(Error::DimensionMismatch {
            expected: c.degree() as usize,
            got: region.dim(),
        });
    }
    LatticeFunction::new(
        region.dim(),
        region
            .points()
            .iter()
            .map(|z| (z.clone(), c.value(&canonicalize(z)))),
    )
}

/// Coefficient field of the exact function generated by c:
/// ξ̂(z_I) = (T c̃)(z_I) = Σ_k a_k c̃(z_I - ke).
///
/// The window expands automatically to c's reach plus the field's radius so
/// the generated support is never silently truncated.
pub fn gen_exact(
    field: &VectorField,
    c: &OrbitFunction,
    window: i64,
) -> Result<CoefficientField> {
    assert!(c.degree() >= 1, "degree-0 generation is gen_exact_degree0");
    let required = c.max_coordinate() + field.support_radius();
    let window = window.max(required);
    let mut entries = Vec::new();
    for z in enumerate_sorted_tuples(c.degree(), -window, window) {
        let mut value = 0.0;
        for (k, a) in field.iter() {
            value += a * c.value(&canonicalize(&z.add_diagonal(-k)));
        }
        if value != 0.0 {
            entries.push((z, value));
        }
    }
    CoefficientField::new(c.degree(), window, entries)
}

/// The same exact function built symbolically from Definition of exactness:
/// ξ = Σ_o c(o) D_0[Σ_n τ^n H_{R(o)+δ_0}], with the n-sum over the finite
/// window where D_0 survives.
pub fn gen_exact_symbolic(field: &VectorField, c: &OrbitFunction) -> HermiteExpansion {
    let mut out = HermiteExpansion::zero();
    for (cone, value) in c.iter() {
        let local = MultiIndex::decode(cone).raise(0);
        let sites: Vec<i64> = local.support().collect();
        let site_min = *sites.first().expect("raise(0) occupies site 0");
        let site_max = *sites.last().expect("nonempty");
        for n in (field.support_min() - site_max)..=(field.support_max() - site_min) {
            let translated =
                HermiteExpansion::from_terms([(local.shift(-n), value)]);
            out = out + field.apply_d(0, &translated);
        }
    }
    out
}

/// The degree-0 component producible by exact functions, per unit of
/// g = x_0: the coefficient sum Σ a_k, zero exactly when constants are not
/// exact.
pub fn gen_exact_degree0(field: &VectorField) -> f64 {
    field.coefficient_sum()
}
