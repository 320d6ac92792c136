//! Multi-index bookkeeping: the coding to lattice vectors, the dot action,
//! orbit shadows, representatives and cone canonical forms.
//!
//! A multi-index assigns a particle count to finitely many lattice sites and
//! labels one multidimensional Hermite basis element. The shift convention is
//! fixed once for the whole crate: `shift(I, n)` moves a particle at site `k`
//! to site `k - n`, so that translating a function by `τ` corresponds to
//! translating its basis labels by `shift(·, -1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Finitely supported map site → particle count. Zero counts are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    entries: BTreeMap<i64, u32>,
}

impl MultiIndex {
    /// The empty (degree-0) multi-index.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Single particle at `site`.
    pub fn delta(site: i64) -> Self {
        Self::from_pairs([(site, 1)])
    }

    pub fn from_pairs<T: IntoIterator<Item = (i64, u32)>>(pairs: T) -> Self {
        let mut entries = BTreeMap::new();
        for (site, count) in pairs {
            if count > 0 {
                *entries.entry(site).or_insert(0) += count;
            }
        }
        MultiIndex { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Particle count at `site` (0 if unoccupied).
    pub fn count(&self, site: i64) -> u32 {
        self.entries.get(&site).copied().unwrap_or(0)
    }

    /// Occupied sites in increasing order.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.entries.iter().map(|(&s, &c)| (s, c))
    }

    /// Total particle count Σ i_n.
    pub fn degree(&self) -> u32 {
        self.entries.values().sum()
    }

    /// Point-wise sum of two multi-indices.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        let mut entries = self.entries.clone();
        for (&site, &count) in &other.entries {
            *entries.entry(site).or_insert(0) += count;
        }
        MultiIndex { entries }
    }

    /// Add one particle at `site`.
    pub fn raise(&self, site: i64) -> MultiIndex {
        let mut entries = self.entries.clone();
        *entries.entry(site).or_insert(0) += 1;
        MultiIndex { entries }
    }

    /// Remove one particle at `site`; `None` if the site is unoccupied
    /// (a negative entry, for which the Hermite element vanishes).
    pub fn lower(&self, site: i64) -> Option<MultiIndex> {
        let mut entries = self.entries.clone();
        match entries.get_mut(&site) {
            Some(c) if *c > 1 => *c -= 1,
            Some(_) => {
                entries.remove(&site);
            }
            None => return None,
        }
        Some(MultiIndex { entries })
    }

    /// τ^n: every particle at site `k` moves to `k - n`.
    pub fn shift(&self, n: i64) -> MultiIndex {
        MultiIndex {
            entries: self.iter().map(|(s, c)| (s - n, c)).collect(),
        }
    }

    /// The dot action n·I = τ^n(I - δ_n + δ_0), defined only when the
    /// intermediate entries stay nonnegative (n = 0 or i_n ≥ 1).
    pub fn dot_action(&self, n: i64) -> Option<MultiIndex> {
        if n == 0 {
            return Some(self.clone());
        }
        let moved = self.lower(n)?.raise(0);
        Some(moved.shift(n))
    }

    /// The orbit shadow {n·I : n ∈ s(I) ∪ {0}}. Always contains `self`.
    pub fn orbit(&self) -> Vec<MultiIndex> {
        let mut out = vec![self.clone()];
        for site in self.support().collect::<Vec<_>>() {
            if site == 0 {
                continue;
            }
            if let Some(j) = self.dot_action(site) {
                if !out.contains(&j) {
                    out.push(j);
                }
            }
        }
        out.sort();
        out
    }

    /// The unique orbit member supported on the nonnegative sites.
    pub fn representative(&self) -> MultiIndex {
        match self.support().next() {
            Some(leftmost) if leftmost < 0 => self
                .dot_action(leftmost)
                .expect("leftmost occupied site always acts"),
            _ => self.clone(),
        }
    }

    /// Nondecreasing list of occupied sites with multiplicity (Eq. z_I).
    pub fn encode(&self) -> LatticePoint {
        let mut coords = Vec::with_capacity(self.degree() as usize);
        for (site, count) in self.iter() {
            for _ in 0..count {
                coords.push(site);
            }
        }
        LatticePoint::new(coords)
    }

    /// Inverse of [`encode`](Self::encode); unsorted input collapses to its
    /// S_N-class first.
    pub fn decode(point: &LatticePoint) -> MultiIndex {
        Self::from_pairs(point.coords().iter().map(|&s| (s, 1)))
    }

    /// Canonical cone coding of the orbit: `encode(representative())`.
    /// Constant on orbits.
    pub fn cone_point(&self) -> LatticePoint {
        self.representative().encode()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (site, count) in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{site}:{count}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(MultiIndex::zero());
        }
        let mut pairs = Vec::new();
        for part in s.split(',') {
            let (site, count) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected site:count, got `{part}`")))?;
            let site: i64 = site
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad site `{site}`: {e}")))?;
            let count: u32 = count
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad count `{count}`: {e}")))?;
            if count == 0 {
                return Err(Error::Parse(format!("zero count at site {site}")));
            }
            pairs.push((site, count));
        }
        Ok(MultiIndex::from_pairs(pairs))
    }
}

/// Integer vector of length N; the degree-0 case is the empty vector.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    pub(crate) coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint { coords }
    }

    pub fn origin(dim: usize) -> Self {
        LatticePoint {
            coords: vec![0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Same coordinates in nondecreasing order (the S_N-class representative).
    pub fn sorted(&self) -> LatticePoint {
        let mut coords = self.coords.clone();
        coords.sort_unstable();
        LatticePoint { coords }
    }

    /// True when 0 ≤ z_1 ≤ … ≤ z_N.
    pub fn is_cone(&self) -> bool {
        self.coords.first().map_or(true, |&z| z >= 0)
            && self.coords.windows(2).all(|w| w[0] <= w[1])
    }

    /// z + k·e with e = (1, …, 1).
    pub fn add_diagonal(&self, k: i64) -> LatticePoint {
        LatticePoint {
            coords: self.coords.iter().map(|&z| z + k).collect(),
        }
    }

    /// z + k·e_axis (axis is 0-based).
    pub fn add_unit(&self, axis: usize, k: i64) -> LatticePoint {
        let mut coords = self.coords.clone();
        coords[axis] += k;
        LatticePoint { coords }
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(coords: Vec<i64>) -> Self {
        LatticePoint { coords }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for z in &self.coords {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{z}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for LatticePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad coordinate `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticePoint { coords })
    }
}

/// All cone points z ∈ C_N^+ with z_N ≤ bound, in lexicographic order.
/// For N = 0 this is the single empty point.
pub fn enumerate_orbits(degree: u32, bound: i64) -> Vec<LatticePoint> {
    let n = degree as usize;
    let mut out = Vec::new();
    let mut current = vec![0i64; n];
    fn rec(out: &mut Vec<LatticePoint>, current: &mut Vec<i64>, pos: usize, lo: i64, bound: i64) {
        if pos == current.len() {
            out.push(LatticePoint::new(current.clone()));
            return;
        }
        for z in lo..=bound {
            current[pos] = z;
            rec(out, current, pos + 1, z, bound);
        }
    }
    rec(&mut out, &mut current, 0, 0, bound);
    out
}

/// All nondecreasing length-N tuples with entries in [lo, hi]; the sorted
/// codings of every degree-N multi-index supported there.
pub fn enumerate_sorted_tuples(degree: u32, lo: i64, hi: i64) -> Vec<LatticePoint> {
    let n = degree as usize;
    let mut out = Vec::new();
    let mut current = vec![0i64; n];
    fn rec(out: &mut Vec<LatticePoint>, current: &mut Vec<i64>, pos: usize, lo: i64, hi: i64) {
        if pos == current.len() {
            out.push(LatticePoint::new(current.clone()));
            return;
        }
        for z in lo..=hi {
            current[pos] = z;
            rec(out, current, pos + 1, z, hi);
        }
    }
    if n == 0 {
        out.push(LatticePoint::default());
    } else {
        rec(&mut out, &mut current, 0, lo, hi);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(pairs: &[(i64, u32)]) -> MultiIndex {
        MultiIndex::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn degree_examples() {
        assert_eq!(MultiIndex::zero().degree(), 0);
        assert_eq!(MultiIndex::delta(3).degree(), 1);
        assert_eq!(mi(&[(1, 1), (3, 2)]).degree(), 3);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(mi(&[(1, 1), (3, 2)]).encode().coords(), &[1, 3, 3]);
        assert_eq!(mi(&[(0, 2)]).encode().coords(), &[0, 0]);
        assert_eq!(mi(&[(-2, 1), (5, 1)]).encode().coords(), &[-2, 5]);
        assert!(MultiIndex::zero().encode().coords().is_empty());
    }

    #[test]
    fn decode_examples() {
        assert_eq!(
            MultiIndex::decode(&LatticePoint::new(vec![1, 3, 3])),
            mi(&[(1, 1), (3, 2)])
        );
        // S_N-class invariance: unsorted input gives the same multi-index.
        assert_eq!(
            MultiIndex::decode(&LatticePoint::new(vec![3, 1, 3])),
            mi(&[(1, 1), (3, 2)])
        );
        assert_eq!(
            MultiIndex::decode(&LatticePoint::default()),
            MultiIndex::zero()
        );
    }

    #[test]
    fn shift_examples() {
        assert_eq!(MultiIndex::delta(0).shift(1), MultiIndex::delta(-1));
        let i = mi(&[(-1, 2), (4, 1)]);
        assert_eq!(i.shift(0), i);
        assert_eq!(i.shift(3).shift(-3), i);
    }

    #[test]
    fn dot_action_examples() {
        let i = mi(&[(1, 1), (3, 2)]);
        assert_eq!(i.dot_action(0), Some(i.clone()));
        assert_eq!(MultiIndex::delta(1).dot_action(1), Some(MultiIndex::delta(-1)));
        assert_eq!(MultiIndex::delta(1).dot_action(2), None);
    }

    #[test]
    fn orbit_examples() {
        let orbit = MultiIndex::delta(1).orbit();
        assert_eq!(orbit, vec![MultiIndex::delta(-1), MultiIndex::delta(1)]);
        assert_eq!(MultiIndex::zero().orbit(), vec![MultiIndex::zero()]);
        assert_eq!(mi(&[(0, 2)]).orbit(), vec![mi(&[(0, 2)])]);
    }

    #[test]
    fn representative_examples() {
        assert_eq!(MultiIndex::delta(-1).representative(), MultiIndex::delta(1));
        let i = mi(&[(1, 1), (3, 2)]);
        assert_eq!(i.representative(), i);
        assert_eq!(MultiIndex::zero().representative(), MultiIndex::zero());
    }

    #[test]
    fn cone_point_examples() {
        assert_eq!(MultiIndex::delta(-1).cone_point().coords(), &[1]);
        assert_eq!(mi(&[(1, 1), (3, 2)]).cone_point().coords(), &[1, 3, 3]);
        assert!(MultiIndex::zero().cone_point().coords().is_empty());
    }

    #[test]
    fn enumerate_orbit_examples() {
        assert_eq!(enumerate_orbits(0, 7), vec![LatticePoint::default()]);
        let deg1: Vec<_> = enumerate_orbits(1, 3)
            .into_iter()
            .map(|p| p.coords()[0])
            .collect();
        assert_eq!(deg1, vec![0, 1, 2, 3]);
        let deg2 = enumerate_orbits(2, 1);
        let expected: Vec<LatticePoint> =
            vec![vec![0, 0].into(), vec![0, 1].into(), vec![1, 1].into()];
        assert_eq!(deg2, expected);
    }

    #[test]
    fn enumeration_count_is_binomial() {
        // |{0 <= z_1 <= ... <= z_N <= b}| = C(b + N, N)
        fn binom(n: u64, k: u64) -> u64 {
            (1..=k).fold(1, |acc, j| acc * (n - k + j) / j)
        }
        for n in 1..=4u32 {
            for b in 0..=5i64 {
                let count = enumerate_orbits(n, b).len() as u64;
                assert_eq!(count, binom(b as u64 + n as u64, n as u64), "N={n} b={b}");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let i = mi(&[(-1, 1), (3, 2)]);
        assert_eq!(i.to_string(), "-1:1,3:2");
        assert_eq!("-1:1,3:2".parse::<MultiIndex>().unwrap(), i);
        assert_eq!("".parse::<MultiIndex>().unwrap(), MultiIndex::zero());
        let p = LatticePoint::new(vec![-2, 5]);
        assert_eq!(p.to_string(), "-2 5");
        assert_eq!("-2 5".parse::<LatticePoint>().unwrap(), p);
    }

    /// Every (I, k) decomposes uniquely as I = shift(m·R(o), k) over
    /// enumerated orbits; the freeness property behind the exact-generator
    /// bookkeeping.
    #[test]
    fn freeness_unique_decomposition() {
        let sites = -4i64..=4;
        let mut multis: Vec<MultiIndex> = Vec::new();
        for a in sites.clone() {
            multis.push(MultiIndex::delta(a));
            for b in sites.clone() {
                multis.push(MultiIndex::delta(a).raise(b));
                for c in sites.clone() {
                    multis.push(MultiIndex::delta(a).raise(b).raise(c));
                }
            }
        }
        multis.sort();
        multis.dedup();
        let orbits_by_degree: Vec<Vec<MultiIndex>> = (0..=3)
            .map(|n| {
                enumerate_orbits(n, 16)
                    .iter()
                    .map(MultiIndex::decode)
                    .collect()
            })
            .collect();
        for i in &multis {
            let reps = &orbits_by_degree[i.degree() as usize];
            for k in -4i64..=4 {
                let mut hits = 0;
                for rep in reps {
                    for m in -20i64..=20 {
                        if let Some(j) = rep.dot_action(m) {
                            if &j.shift(-k) == i {
                                hits += 1;
                            }
                        }
                    }
                }
                assert_eq!(hits, 1, "I={i} k={k}");
            }
        }
    }

    fn arb_multiindex() -> impl Strategy<Value = MultiIndex> {
        proptest::collection::vec((-6i64..=6, 1u32..=2), 0..4)
            .prop_map(|pairs| MultiIndex::from_pairs(pairs))
            .prop_filter("degree cap", |i| i.degree() <= 4)
    }

    proptest! {
        #[test]
        fn decode_encode_identity(i in arb_multiindex()) {
            prop_assert_eq!(MultiIndex::decode(&i.encode()), i);
        }

        #[test]
        fn encode_decode_is_sort(coords in proptest::collection::vec(-6i64..=6, 0..5)) {
            let p = LatticePoint::new(coords);
            prop_assert_eq!(MultiIndex::decode(&p).encode(), p.sorted());
        }

        #[test]
        fn shift_preserves_degree(i in arb_multiindex(), n in -5i64..=5) {
            prop_assert_eq!(i.shift(n).degree(), i.degree());
            prop_assert_eq!(i.shift(n).shift(-n), i);
        }

        #[test]
        fn orbit_well_defined(i in arb_multiindex()) {
            let orbit = i.orbit();
            prop_assert!(orbit.contains(&i));
            let cone = i.cone_point();
            prop_assert!(cone.is_cone());
            for j in &orbit {
                prop_assert_eq!(j.degree(), i.degree());
                prop_assert_eq!(j.orbit(), orbit.clone());
                prop_assert_eq!(j.cone_point(), cone.clone());
            }
        }

        #[test]
        fn representative_unique_nonnegative(i in arb_multiindex()) {
            let rep = i.representative();
            prop_assert!(rep.support().all(|s| s >= 0));
            let nonneg: Vec<_> = i
                .orbit()
                .into_iter()
                .filter(|j| j.support().all(|s| s >= 0))
                .collect();
            prop_assert_eq!(nonneg, vec![rep]);
        }
    }
}
