//! The lattice symmetry group S̃_N generated by coordinate swaps σ_{i,j} and
//! γ_1(z) = (-z_1, z_2-z_1, …, z_N-z_1), its frequency-side image Σ̃_N, the
//! canonical form on the cone, and the invariant truncation regions P_i.
//!
//! S̃_N is generated as words over {σ_{i,j}, γ_1}; a word applies right to
//! left (function composition). The quotient Z^N/S̃_N is realized by
//! [`canonicalize`], which sends every point to the unique member of its
//! orbit in the cone 0 ≤ z_1 ≤ … ≤ z_N.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::multiindex::LatticePoint;

/// One generator of S̃_N. Swap indices are 0-based axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Swap(usize, usize),
    Gamma1,
}

impl Generator {
    fn apply(&self, z: &mut Vec<i64>) {
        match *self {
            Generator::Swap(i, j) => z.swap(i, j),
            Generator::Gamma1 => {
                let z1 = z[0];
                for (axis, c) in z.iter_mut().enumerate() {
                    *c = if axis == 0 { -z1 } else { *c - z1 };
                }
            }
        }
    }

    fn max_axis(&self) -> usize {
        match *self {
            Generator::Swap(i, j) => i.max(j),
            Generator::Gamma1 => 0,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Swap(i, j) => write!(f, "s{},{}", i + 1, j + 1),
            Generator::Gamma1 => write!(f, "g1"),
        }
    }
}

/// A word over the generators; the rightmost generator applies first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupElement {
    word: Vec<Generator>,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn gamma1() -> Self {
        GroupElement {
            word: vec![Generator::Gamma1],
        }
    }

    pub fn swap(i: usize, j: usize) -> Self {
        GroupElement {
            word: vec![Generator::Swap(i, j)],
        }
    }

    /// γ_{axis+1} = σ_{1,axis+1} γ_1 σ_{1,axis+1}, the coset representative
    /// playing the γ_1 role in slot `axis`.
    pub fn gamma(axis: usize) -> Self {
        if axis == 0 {
            Self::gamma1()
        } else {
            GroupElement {
                word: vec![
                    Generator::Swap(0, axis),
                    Generator::Gamma1,
                    Generator::Swap(0, axis),
                ],
            }
        }
    }

    /// self ∘ first (so `first` applies first).
    pub fn compose(&self, first: &GroupElement) -> GroupElement {
        let mut word = self.word.clone();
        word.extend_from_slice(&first.word);
        GroupElement { word }
    }

    /// The formal inverse: every generator is an involution, so the inverse
    /// is the reversed word.
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    pub fn apply(&self, z: &LatticePoint) -> Result<LatticePoint> {
        let dim = z.dim();
        for gen in &self.word {
            if gen.max_axis() >= dim {
                return Err(Error::DimensionMismatch {
                    expected: gen.max_axis() + 1,
                    got: dim,
                });
            }
            if matches!(gen, Generator::Gamma1) && dim == 0 {
                return Err(Error::DimensionMismatch { expected: 1, got: 0 });
            }
        }
        let mut coords = z.coords().to_vec();
        for gen in self.word.iter().rev() {
            gen.apply(&mut coords);
        }
        Ok(LatticePoint::new(coords))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "id");
        }
        for (k, gen) in self.word.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            write!(f, "{gen}")?;
        }
        Ok(())
    }
}

/// The unique cone member of the S̃_N-orbit of `z`: sort, apply γ_1 once if
/// the minimum is negative (which makes every coordinate nonnegative), sort
/// again.
pub fn canonicalize(z: &LatticePoint) -> LatticePoint {
    let sorted = z.sorted();
    match sorted.coords().first() {
        Some(&min) if min < 0 => {
            let mut coords = sorted.coords().to_vec();
            Generator::Gamma1.apply(&mut coords);
            coords.sort_unstable();
            LatticePoint::new(coords)
        }
        _ => sorted,
    }
}

/// Every element of S̃_N, enumerated by breadth-first closure over the
/// generators. The result has (N+1)! elements, deduplicated by action on a
/// generic point.
pub fn enumerate_group(dim: usize) -> Vec<GroupElement> {
    let generic = generic_point(dim);
    let mut gens = vec![Generator::Gamma1];
    for i in 0..dim.saturating_sub(1) {
        gens.push(Generator::Swap(i, i + 1));
    }
    let mut seen: BTreeMap<Vec<i64>, GroupElement> = BTreeMap::new();
    let identity = GroupElement::identity();
    seen.insert(generic.coords().to_vec(), identity.clone());
    let mut frontier = vec![identity];
    let mut out = Vec::new();
    while let Some(g) = frontier.pop() {
        out.push(g.clone());
        for gen in &gens {
            let next = GroupElement { word: vec![*gen] }.compose(&g);
            let image = next.apply(&generic).expect("generic point has full dim");
            if !seen.contains_key(image.coords()) {
                seen.insert(image.coords().to_vec(), next.clone());
                frontier.push(next);
            }
        }
    }
    out
}

fn generic_point(dim: usize) -> LatticePoint {
    LatticePoint::new((0..dim).map(|j| 10i64.pow(j as u32 + 1)).collect())
}

/// Checks the defining relations of S̃_N on lattice points and the coset
/// decomposition S̃_N = S_N ∪ γ_1 S_N ∪ … ∪ γ_N S_N:
/// (γ_1 σ_{1,2})^3 = id, γ_1 σ_{i,i+1} = σ_{i+1,i} γ_1 for 2 ≤ i ≤ N-1, and
/// (N+1)·N! distinct maps on a generic point.
pub fn verify_group_relations(dim: usize) -> bool {
    assert!(dim >= 2, "relations need at least two coordinates");
    let points = fuzz_points(dim);

    let cubic = {
        let gs = GroupElement::gamma1().compose(&GroupElement::swap(0, 1));
        let gs3 = gs.compose(&gs).compose(&gs);
        points
            .iter()
            .all(|z| gs3.apply(z).expect("dim checked") == *z)
    };
    if !cubic {
        return false;
    }

    // γ_1 commutes with swaps that do not touch the first coordinate.
    for i in 1..dim - 1 {
        let lhs = GroupElement::gamma1().compose(&GroupElement::swap(i, i + 1));
        let rhs = GroupElement::swap(i, i + 1).compose(&GroupElement::gamma1());
        let ok = points
            .iter()
            .all(|z| lhs.apply(z).expect("dim") == rhs.apply(z).expect("dim"));
        if !ok {
            return false;
        }
    }

    // Coset decomposition: (N+1)·N! distinct maps on a generic point.
    let perms = permutation_elements(dim);
    if perms.len() != factorial(dim) {
        return false;
    }
    let generic = generic_point(dim);
    let mut images = std::collections::BTreeSet::new();
    for coset in 0..=dim {
        let rep = if coset == 0 {
            GroupElement::identity()
        } else {
            GroupElement::gamma(coset - 1)
        };
        for perm in &perms {
            let g = rep.compose(perm);
            images.insert(g.apply(&generic).expect("dim").coords().to_vec());
        }
    }
    images.len() == (dim + 1) * factorial(dim)
}

/// The subgroup S_N as swap words, via closure over adjacent swaps.
fn permutation_elements(dim: usize) -> Vec<GroupElement> {
    let generic = generic_point(dim);
    let gens: Vec<Generator> = (0..dim - 1).map(|i| Generator::Swap(i, i + 1)).collect();
    let mut seen: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    let identity = GroupElement::identity();
    seen.insert(generic.coords().to_vec(), ());
    let mut frontier = vec![identity.clone()];
    let mut out = Vec::new();
    while let Some(g) = frontier.pop() {
        out.push(g.clone());
        for gen in &gens {
            let next = GroupElement { word: vec![*gen] }.compose(&g);
            let image = next.apply(&generic).expect("dim");
            if !seen.contains_key(image.coords()) {
                seen.insert(image.coords().to_vec(), ());
                frontier.push(next);
            }
        }
    }
    out
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn fuzz_points(dim: usize) -> Vec<LatticePoint> {
    if dim <= 3 {
        // exhaustive box [-3, 3]^dim
        let mut out = Vec::new();
        let mut current = vec![0i64; dim];
        fn rec(out: &mut Vec<LatticePoint>, current: &mut Vec<i64>, pos: usize) {
            if pos == current.len() {
                out.push(LatticePoint::new(current.clone()));
                return;
            }
            for z in -3..=3 {
                current[pos] = z;
                rec(out, current, pos + 1);
            }
        }
        rec(&mut out, &mut current, 0);
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x53594d);
        (0..400)
            .map(|_| LatticePoint::new((0..dim).map(|_| rng.gen_range(-6..=6)).collect()))
            .collect()
    }
}

/// Which symmetry group a check runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    /// S_N, coordinate permutations.
    Symmetric,
    /// S̃_N, permutations together with γ_1.
    Extended,
}

fn group_generators(group: Group, dim: usize) -> Vec<GroupElement> {
    let mut gens: Vec<GroupElement> = (0..dim.saturating_sub(1))
        .map(|i| GroupElement::swap(i, i + 1))
        .collect();
    if group == Group::Extended && dim >= 1 {
        gens.push(GroupElement::gamma1());
    }
    gens
}

/// Failure evidence for [`is_invariant`].
#[derive(Debug, Clone)]
pub struct InvarianceWitness {
    pub point: LatticePoint,
    pub image: LatticePoint,
    pub generator: String,
    pub value: f64,
    pub image_value: f64,
}

/// Result of an invariance scan over a region.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub witness: Option<InvarianceWitness>,
}

/// Tests whether `f` is constant along group orbits on `region`. The region
/// must be closed under the group, otherwise the check is meaningless and an
/// error is returned.
pub fn is_invariant<F: Fn(&LatticePoint) -> f64>(
    f: F,
    region: &Region,
    group: Group,
    tol: f64,
) -> Result<InvarianceReport> {
    let gens = group_generators(group, region.dim());
    for point in region.points() {
        for gen in &gens {
            let image = gen.apply(point)?;
            if !region.contains(&image) {
                return Err(Error::RegionNotClosed(point.to_string()));
            }
        }
    }
    for point in region.points() {
        let value = f(point);
        for gen in &gens {
            let image = gen.apply(point)?;
            let image_value = f(&image);
            if (value - image_value).abs() > tol {
                return Ok(InvarianceReport {
                    invariant: false,
                    witness: Some(InvarianceWitness {
                        point: point.clone(),
                        image,
                        generator: gen.to_string(),
                        value,
                        image_value,
                    }),
                });
            }
        }
    }
    Ok(InvarianceReport {
        invariant: true,
        witness: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RegionKind {
    /// The invariant truncation region P_i.
    P { i: i64 },
    /// An explicit point set with no predicate beyond membership.
    Custom,
}

/// A bounded lattice region: an explicit point list, with the defining
/// predicate retained for membership queries when the region is a P_i.
#[derive(Debug, Clone)]
pub struct Region {
    dim: usize,
    kind: RegionKind,
    points: Vec<LatticePoint>,
}

impl Region {
    /// P_i = ∪_{γ ∈ S̃_N} γ{0 ≤ z_1 ≤ … ≤ z_N ≤ i-1}: the segment
    /// [-i+1, i-1] for N = 1, the hexagon for N = 2.
    pub fn p_region(i: i64, dim: usize) -> Region {
        assert!(i >= 1 && dim >= 1);
        let r = i - 1;
        let mut points = Vec::new();
        let mut current = vec![0i64; dim];
        fn rec(points: &mut Vec<LatticePoint>, current: &mut Vec<i64>, pos: usize, i: i64, r: i64) {
            if pos == current.len() {
                let p = LatticePoint::new(current.clone());
                if in_p_region(i, &p) {
                    points.push(p);
                }
                return;
            }
            for z in -r..=r {
                current[pos] = z;
                rec(points, current, pos + 1, i, r);
            }
        }
        rec(&mut points, &mut current, 0, i, r);
        Region {
            dim,
            kind: RegionKind::P { i },
            points,
        }
    }

    /// A region from an explicit point set.
    pub fn from_points<T: IntoIterator<Item = LatticePoint>>(dim: usize, points: T) -> Region {
        let mut points: Vec<LatticePoint> =
            points.into_iter().filter(|p| p.dim() == dim).collect();
        points.sort();
        points.dedup();
        Region {
            dim,
            kind: RegionKind::Custom,
            points,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The index i when the region is a P_i.
    pub fn truncation(&self) -> Option<i64> {
        match self.kind {
            RegionKind::P { i } => Some(i),
            RegionKind::Custom => None,
        }
    }

    pub fn contains(&self, z: &LatticePoint) -> bool {
        if z.dim() != self.dim {
            return false;
        }
        match self.kind {
            RegionKind::P { i } => in_p_region(i, z),
            RegionKind::Custom => self.points.binary_search(z).is_ok(),
        }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dump format: header `N=<dim> kind=P i=<i>` (or `kind=custom`), one
    /// point per line.
    pub fn dump(&self) -> String {
        let mut out = match self.kind {
            RegionKind::P { i } => format!("N={} kind=P i={}\n", self.dim, i),
            RegionKind::Custom => format!("N={} kind=custom\n", self.dim),
        };
        for p in &self.points {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }
}

/// Membership in P_i without materializing the point set. A point lies in
/// P_i exactly when its canonical form fits under i-1, equivalently when the
/// values {0, z_1, …, z_N} span at most i-1.
pub fn in_p_region(i: i64, z: &LatticePoint) -> bool {
    let mut lo = 0i64;
    let mut hi = 0i64;
    for &c in z.coords() {
        lo = lo.min(c);
        hi = hi.max(c);
    }
    hi - lo <= i - 1
}

/// Remainder in [-π, π) of t modulo 2π.
pub fn mod_2pi(t: f64) -> f64 {
    use std::f64::consts::PI;
    let b = t - 2.0 * PI * ((t + PI) / (2.0 * PI)).floor();
    // guard against rounding landing exactly on π
    if b >= PI {
        b - 2.0 * PI
    } else {
        b
    }
}

/// The finite Σ̃_N-orbit of a frequency vector under adjacent swaps and
/// g(α) = (mod_2π(-α_1-…-α_N), α_2, …, α_N), computed by closure under the
/// generators with a 1e-12 circular duplicate test.
pub fn freq_orbit(alpha: &[f64]) -> Vec<Vec<f64>> {
    const TOL: f64 = 1e-12;
    let n = alpha.len();
    let close = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .all(|(&x, &y)| mod_2pi(x - y).abs() <= TOL)
    };
    let mut orbit: Vec<Vec<f64>> = vec![alpha.to_vec()];
    let mut frontier = vec![alpha.to_vec()];
    while let Some(cur) = frontier.pop() {
        let mut images: Vec<Vec<f64>> = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let mut im = cur.clone();
            im.swap(i, i + 1);
            images.push(im);
        }
        if n >= 1 {
            let mut im = cur.clone();
            im[0] = mod_2pi(-cur.iter().sum::<f64>());
            images.push(im);
        }
        for im in images {
            if !orbit.iter().any(|o| close(o, &im)) {
                orbit.push(im.clone());
                frontier.push(im);
            }
        }
    }
    orbit.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    orbit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;
    use proptest::prelude::*;
    use rand::Rng;

    fn lp(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    #[test]
    fn apply_examples() {
        let g1 = GroupElement::gamma1();
        assert_eq!(g1.apply(&lp(&[-2, 1, 3])).unwrap(), lp(&[2, 3, 5]));
        assert_eq!(
            GroupElement::swap(0, 1).apply(&lp(&[1, 2])).unwrap(),
            lp(&[2, 1])
        );
        let z = lp(&[4, -1, 7]);
        assert_eq!(g1.apply(&g1.apply(&z).unwrap()).unwrap(), z);
    }

    #[test]
    fn apply_dimension_mismatch() {
        let err = GroupElement::swap(0, 2).apply(&lp(&[1, 2])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(&lp(&[3, -2, 1])), lp(&[2, 3, 5]));
        assert_eq!(canonicalize(&lp(&[0, 1, 1])), lp(&[0, 1, 1]));
        assert_eq!(canonicalize(&lp(&[-1])), lp(&[1]));
    }

    #[test]
    fn relations_hold() {
        for dim in 2..=5 {
            assert!(verify_group_relations(dim), "N={dim}");
        }
    }

    #[test]
    fn group_order_matches_cosets() {
        assert_eq!(enumerate_group(1).len(), 2);
        assert_eq!(enumerate_group(2).len(), 6);
        assert_eq!(enumerate_group(3).len(), 24);
        assert_eq!(enumerate_group(4).len(), 120);
    }

    #[test]
    fn p_region_examples() {
        let p = Region::p_region(2, 1);
        let pts: Vec<i64> = p.points().iter().map(|z| z.coords()[0]).collect();
        assert_eq!(pts, vec![-1, 0, 1]);

        let p = Region::p_region(2, 2);
        let mut pts: Vec<Vec<i64>> = p.points().iter().map(|z| z.coords().to_vec()).collect();
        pts.sort();
        let mut expected = vec![
            vec![0, 0],
            vec![0, 1],
            vec![1, 0],
            vec![1, 1],
            vec![-1, -1],
            vec![0, -1],
            vec![-1, 0],
        ];
        expected.sort();
        assert_eq!(pts, expected);

        for i in 1..=5 {
            assert!(Region::p_region(i, 2).contains(&lp(&[0, 0])));
        }
    }

    #[test]
    fn p_region_matches_group_union() {
        // brute-force ∪_γ γ(base) against the stored point set
        for dim in 1..=3usize {
            for i in 1..=4i64 {
                let group = enumerate_group(dim);
                let mut union = std::collections::BTreeSet::new();
                for base in crate::multiindex::enumerate_orbits(dim as u32, i - 1) {
                    for g in &group {
                        union.insert(g.apply(&base).unwrap());
                    }
                }
                let region = Region::p_region(i, dim);
                let stored: std::collections::BTreeSet<_> =
                    region.points().iter().cloned().collect();
                assert_eq!(union, stored, "i={i} N={dim}");
            }
        }
    }

    #[test]
    fn p_region_nested_and_exhausts() {
        for dim in 1..=2usize {
            for i in 1..=6i64 {
                let inner = Region::p_region(i, dim);
                let outer = Region::p_region(i + 1, dim);
                assert!(inner.points().iter().all(|z| outer.contains(z)));
            }
            // the box of radius 6 is covered once i is large enough
            let big = Region::p_region(13, dim);
            let mut current = vec![0i64; dim];
            fn rec(big: &Region, current: &mut Vec<i64>, pos: usize) {
                if pos == current.len() {
                    assert!(big.contains(&LatticePoint::new(current.clone())));
                    return;
                }
                for z in -6..=6 {
                    current[pos] = z;
                    rec(big, current, pos + 1);
                }
            }
            rec(&big, &mut current, 0);
        }
    }

    #[test]
    fn p_region_invariant_under_generators() {
        for dim in 1..=2usize {
            for i in 1..=4i64 {
                let region = Region::p_region(i, dim);
                let report = is_invariant(
                    |z| if canonicalize(z) == canonicalize(z) { 0.0 } else { 1.0 },
                    &region,
                    Group::Extended,
                    0.0,
                )
                .unwrap();
                assert!(report.invariant, "closure check i={i} N={dim}");
            }
        }
    }

    #[test]
    fn invariance_examples() {
        let region = Region::p_region(4, 1);
        let even = |z: &LatticePoint| if z.coords()[0] == 0 { 1.0 } else { 0.0 };
        assert!(is_invariant(even, &region, Group::Extended, 0.0)
            .unwrap()
            .invariant);

        let skew = |z: &LatticePoint| if z.coords()[0] == 1 { 1.0 } else { 0.0 };
        let report = is_invariant(skew, &region, Group::Extended, 0.0).unwrap();
        assert!(!report.invariant);
        let witness = report.witness.unwrap();
        assert_eq!(witness.point.coords()[0].abs(), 1);
    }

    #[test]
    fn invariance_rejects_open_region() {
        // a region missing γ_1-images cannot be scanned
        let region = Region::from_points(1, [lp(&[0]), lp(&[1]), lp(&[2])]);
        let err = is_invariant(|_| 0.0, &region, Group::Extended, 0.0).unwrap_err();
        assert!(matches!(err, Error::RegionNotClosed(_)));
    }

    #[test]
    fn canonical_composition_is_invariant() {
        let region = Region::p_region(3, 2);
        let f = |z: &LatticePoint| {
            let c = canonicalize(z);
            (c.coords()[0] * 7 + c.coords()[1] * 3) as f64
        };
        assert!(is_invariant(f, &region, Group::Extended, 0.0)
            .unwrap()
            .invariant);
    }

    #[test]
    fn freq_orbit_examples() {
        assert_eq!(freq_orbit(&[0.0]), vec![vec![0.0]]);
        let orbit = freq_orbit(&[0.5]);
        assert_eq!(orbit.len(), 2);
        assert!(orbit.iter().any(|o| (o[0] - 0.5).abs() < 1e-15));
        assert!(orbit.iter().any(|o| (o[0] + 0.5).abs() < 1e-15));

        let orbit = freq_orbit(&[0.3, 0.4]);
        assert!(orbit.len() <= 6);
        let g_image = [mod_2pi(-0.7), 0.4];
        assert!(orbit
            .iter()
            .any(|o| (o[0] - g_image[0]).abs() < 1e-12 && (o[1] - g_image[1]).abs() < 1e-12));
    }

    #[test]
    fn mod_2pi_range() {
        use std::f64::consts::PI;
        for t in [-10.0, -PI, -1.0, 0.0, 1.0, PI, 10.0, 123.456] {
            let b = mod_2pi(t);
            assert!((-PI..PI).contains(&b), "t={t} b={b}");
            assert!(((t - b) / (2.0 * PI)).round() * 2.0 * PI - (t - b) < 1e-9);
        }
    }

    fn arb_point() -> impl Strategy<Value = LatticePoint> {
        proptest::collection::vec(-8i64..=8, 1..4).prop_map(LatticePoint::new)
    }

    proptest! {
        #[test]
        fn word_times_inverse_is_identity(z in arb_point(), seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dim = z.dim();
            let mut g = GroupElement::identity();
            for _ in 0..6 {
                let next = if dim >= 2 && rng.gen_bool(0.5) {
                    let i = rng.gen_range(0..dim);
                    let j = rng.gen_range(0..dim);
                    GroupElement::swap(i, j)
                } else {
                    GroupElement::gamma1()
                };
                g = next.compose(&g);
            }
            let round = g.inverse().compose(&g);
            prop_assert_eq!(round.apply(&z).unwrap(), z);
        }

        #[test]
        fn canonicalize_idempotent_and_orbit_constant(z in arb_point(), seed in 0u64..1000) {
            let canon = canonicalize(&z);
            prop_assert!(canon.is_cone());
            prop_assert_eq!(canonicalize(&canon), canon.clone());
            // random group word preserves the canonical form
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dim = z.dim();
            let mut image = z.clone();
            for _ in 0..5 {
                let g = if dim >= 2 && rng.gen_bool(0.5) {
                    GroupElement::swap(rng.gen_range(0..dim), rng.gen_range(0..dim))
                } else {
                    GroupElement::gamma1()
                };
                image = g.apply(&image).unwrap();
            }
            prop_assert_eq!(canonicalize(&image), canon);
        }

        #[test]
        fn quotients_agree(pairs in proptest::collection::vec((-5i64..=5, 1u32..=2), 1..3)) {
            // canonicalize(encode(I)) = cone_point(I)
            let i = MultiIndex::from_pairs(pairs);
            prop_assert_eq!(canonicalize(&i.encode()), i.cone_point());
        }

        #[test]
        fn freq_orbit_size_bounded(alpha in proptest::collection::vec(-3.1f64..3.1, 1..4)) {
            let orbit = freq_orbit(&alpha);
            let n = alpha.len();
            let bound = (1..=n + 1).product::<usize>();
            prop_assert!(orbit.len() <= bound, "len {} > {}", orbit.len(), bound);
        }
    }
}
