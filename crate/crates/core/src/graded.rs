//! Finitely supported graded abelian groups and the cohomology of the
//! spaces that occur as components of character schemes.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coeff {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "F2")]
    F2,
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coeff::Integers => "Z",
            Coeff::F2 => "F2",
        })
    }
}

/// One graded piece: `Z^rank ⊕ ⊕ Z/order` (over `F2` only `rank` is used).
#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub rank: u64,
    #[serde(default)]
    torsion: Vec<u64>,
}

impl Entry {
    /// Torsion orders, sorted ascending.
    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = if self.torsion.is_empty() { 1 } else { 2 };
        let mut st = serializer.serialize_struct("Entry", n)?;
        st.serialize_field("rank", &self.rank)?;
        if !self.torsion.is_empty() {
            st.serialize_field("torsion", &self.torsion)?;
        }
        st.end()
    }
}

fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return m == 1;
        }
        p += 1;
    }
    true
}

/// A graded abelian group `⊕_n A_(n)` with finitely many nonzero pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedGroup {
    coeff: Coeff,
    entries: BTreeMap<i64, Entry>,
}

impl GradedGroup {
    pub fn zero(coeff: Coeff) -> Self {
        GradedGroup { coeff, entries: BTreeMap::new() }
    }

    /// Build from `(degree, rank)` pairs; repeated degrees accumulate.
    pub fn from_ranks(coeff: Coeff, ranks: &[(i64, u64)]) -> Self {
        ranks
            .iter()
            .fold(GradedGroup::zero(coeff), |g, &(d, r)| g.with_rank(d, r))
    }

    /// Add `rank` free summands in `degree`.
    pub fn with_rank(mut self, degree: i64, rank: u64) -> Self {
        if rank > 0 {
            self.entries.entry(degree).or_default().rank += rank;
        }
        self
    }

    /// Add a cyclic summand `Z/order` in `degree`.
    pub fn with_torsion(mut self, degree: i64, order: u64) -> Result<Self> {
        if self.coeff == Coeff::F2 || !is_prime_power(order) {
            return Err(Error::InvalidTorsion(order));
        }
        let e = self.entries.entry(degree).or_default();
        e.torsion.push(order);
        e.torsion.sort_unstable();
        Ok(self)
    }

    pub fn coeff(&self) -> Coeff {
        self.coeff
    }

    pub fn entries(&self) -> &BTreeMap<i64, Entry> {
        &self.entries
    }

    pub fn entry(&self, degree: i64) -> Option<&Entry> {
        self.entries.get(&degree)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Degrees carrying a nonzero piece, ascending.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn direct_sum(&self, other: &GradedGroup) -> Result<GradedGroup> {
        if self.coeff != other.coeff {
            return Err(Error::CoefficientMismatch);
        }
        let mut out = self.clone();
        for (&d, e) in &other.entries {
            let slot = out.entries.entry(d).or_default();
            slot.rank += e.rank;
            slot.torsion.extend_from_slice(&e.torsion);
            slot.torsion.sort_unstable();
        }
        Ok(out)
    }

    /// `H^{*+k}`: the piece in degree `n` of the result is the piece in degree `n + k` of `self`.
    pub fn shift(&self, k: i64) -> GradedGroup {
        GradedGroup {
            coeff: self.coeff,
            entries: self.entries.iter().map(|(&d, e)| (d - k, e.clone())).collect(),
        }
    }

    /// `n`-fold direct sum.
    pub fn scale(&self, n: u64) -> GradedGroup {
        if n == 0 {
            return GradedGroup::zero(self.coeff);
        }
        let entries = self
            .entries
            .iter()
            .map(|(&d, e)| {
                let mut torsion: Vec<u64> = e
                    .torsion
                    .iter()
                    .flat_map(|&o| std::iter::repeat(o).take(n as usize))
                    .collect();
                torsion.sort_unstable();
                (d, Entry { rank: e.rank * n, torsion })
            })
            .collect();
        GradedGroup { coeff: self.coeff, entries }
    }

    /// Free rank (dimension over `F2`) in `degree`; torsion is ignored.
    pub fn rank_at(&self, degree: i64) -> u64 {
        self.entries.get(&degree).map_or(0, |e| e.rank)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.entries
            .iter()
            .map(|(&d, e)| if d.rem_euclid(2) == 0 { e.rank as i64 } else { -(e.rank as i64) })
            .sum()
    }

    /// Total rank over all degrees.
    pub fn total_rank(&self) -> u64 {
        self.entries.values().map(|e| e.rank).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graded group serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        let ring = match self.coeff {
            Coeff::Integers => "Z",
            Coeff::F2 => "F",
        };
        let mut first = true;
        for (d, e) in self.entries.iter().rev() {
            let mut parts = Vec::new();
            if e.rank == 1 {
                parts.push(format!("{ring}_({d})"));
            } else if e.rank > 1 {
                parts.push(format!("{ring}_({d})^{}", e.rank));
            }
            for o in &e.torsion {
                parts.push(format!("(Z/{o})_({d})"));
            }
            for part in parts {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                f.write_str(&part)?;
            }
        }
        Ok(())
    }
}

impl Serialize for GradedGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Entries<'a>(&'a BTreeMap<i64, Entry>);
        impl Serialize for Entries<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = serializer.serialize_map(Some(self.0.len()))?;
                for (d, e) in self.0.iter().rev() {
                    m.serialize_entry(&d.to_string(), e)?;
                }
                m.end()
            }
        }
        let mut st = serializer.serialize_struct("GradedGroup", 2)?;
        st.serialize_field("coeff", &self.coeff)?;
        st.serialize_field("entries", &Entries(&self.entries))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GradedGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor;
        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = BTreeMap<i64, Entry>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from decimal degree strings to entries")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((k, v)) = map.next_entry::<String, Entry>()? {
                    let d: i64 = k.parse().map_err(|_| de::Error::custom(format!("bad degree {k:?}")))?;
                    if out.insert(d, v).is_some() {
                        return Err(de::Error::custom(format!("duplicate degree {d}")));
                    }
                }
                Ok(out)
            }
        }
        struct EntriesField(BTreeMap<i64, Entry>);
        impl<'de> Deserialize<'de> for EntriesField {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                d.deserialize_map(EntriesVisitor).map(EntriesField)
            }
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            coeff: Coeff,
            entries: EntriesField,
        }

        let raw = Raw::deserialize(deserializer)?;
        let mut g = GradedGroup::zero(raw.coeff);
        for (d, mut e) in raw.entries.0 {
            if raw.coeff == Coeff::F2 && !e.torsion.is_empty() {
                return Err(de::Error::custom("torsion is not allowed over F2"));
            }
            if let Some(o) = e.torsion.iter().find(|&&o| !is_prime_power(o)) {
                return Err(de::Error::custom(format!("torsion order {o} is not a prime power")));
            }
            e.torsion.sort_unstable();
            if !e.is_zero() {
                g.entries.insert(d, e);
            }
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpaceType {
    Point,
    CP1,
    /// Tangent bundle of CP1; homotopy equivalent to CP1.
    TCP1,
    Cstar,
    CstarMinusPoint,
    PSL2C,
    SurfaceS,
}

impl SpaceType {
    pub const ALL: [SpaceType; 7] = [
        SpaceType::Point,
        SpaceType::CP1,
        SpaceType::TCP1,
        SpaceType::Cstar,
        SpaceType::CstarMinusPoint,
        SpaceType::PSL2C,
        SpaceType::SurfaceS,
    ];
}

/// Singular cohomology of `space`.
///
/// PSL(2,C) deformation retracts to SO(3) = RP^3, and C*∖{1} to a wedge of two
/// circles. The cubic surface row is the known table `(Z, 0, Z^2, Z^4)`.
pub fn cohomology(space: SpaceType, coeff: Coeff) -> GradedGroup {
    let ranks: &[(i64, u64)] = match (space, coeff) {
        (SpaceType::Point, _) => &[(0, 1)],
        (SpaceType::CP1 | SpaceType::TCP1, _) => &[(0, 1), (2, 1)],
        (SpaceType::Cstar, _) => &[(0, 1), (1, 1)],
        (SpaceType::CstarMinusPoint, _) => &[(0, 1), (1, 2)],
        (SpaceType::PSL2C, Coeff::Integers) => &[(0, 1), (3, 1)],
        (SpaceType::PSL2C, Coeff::F2) => &[(0, 1), (1, 1), (2, 1), (3, 1)],
        (SpaceType::SurfaceS, _) => &[(0, 1), (2, 2), (3, 4)],
    };
    let g = GradedGroup::from_ranks(coeff, ranks);
    match (space, coeff) {
        (SpaceType::PSL2C, Coeff::Integers) => g.with_torsion(2, 2).expect("2 is prime"),
        _ => g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(ranks: &[(i64, u64)]) -> GradedGroup {
        GradedGroup::from_ranks(Coeff::Integers, ranks)
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(z(&[(0, 1)]).direct_sum(&z(&[(0, 1)])).unwrap(), z(&[(0, 2)]));
        assert_eq!(z(&[(0, 1)]).direct_sum(&z(&[(-2, 1)])).unwrap(), z(&[(0, 1), (-2, 1)]));
        let g = cohomology(SpaceType::PSL2C, Coeff::Integers);
        assert_eq!(g.direct_sum(&GradedGroup::zero(Coeff::Integers)).unwrap(), g);
        let f = GradedGroup::zero(Coeff::F2);
        assert_eq!(g.direct_sum(&f), Err(Error::CoefficientMismatch));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(z(&[(0, 1)]).shift(0), z(&[(0, 1)]));
        let psl = cohomology(SpaceType::PSL2C, Coeff::Integers).shift(3);
        let expected = z(&[(-3, 1), (0, 1)]).with_torsion(-1, 2).unwrap();
        assert_eq!(psl, expected);
        assert_eq!(cohomology(SpaceType::CP1, Coeff::Integers).shift(2), z(&[(-2, 1), (0, 1)]));
    }

    #[test]
    fn scale_examples() {
        assert_eq!(z(&[(0, 3)]).scale(2), z(&[(0, 6)]));
        let g = cohomology(SpaceType::PSL2C, Coeff::Integers);
        assert_eq!(g.scale(1), g);
        assert!(g.scale(0).is_zero());
        assert_eq!(g.scale(2).entry(2).unwrap().torsion(), &[2, 2]);
    }

    #[test]
    fn rank_and_euler() {
        assert_eq!(z(&[(0, 4), (-2, 1)]).rank_at(-2), 1);
        assert_eq!(z(&[(0, 4)]).rank_at(7), 0);
        let psl = cohomology(SpaceType::PSL2C, Coeff::Integers).shift(3);
        assert_eq!(psl.rank_at(-1), 0);
        assert_eq!(cohomology(SpaceType::CP1, Coeff::Integers).euler_characteristic(), 2);
        let thm = GradedGroup::from_ranks(Coeff::F2, &[(1, 4), (0, 4), (-2, 1)]);
        assert_eq!(thm.euler_characteristic(), 1);
        assert_eq!(GradedGroup::zero(Coeff::F2).euler_characteristic(), 0);
    }

    #[test]
    fn table_rows() {
        assert_eq!(cohomology(SpaceType::SurfaceS, Coeff::Integers), z(&[(0, 1), (2, 2), (3, 4)]));
        assert_eq!(cohomology(SpaceType::CstarMinusPoint, Coeff::Integers), z(&[(0, 1), (1, 2)]));
        assert_eq!(
            cohomology(SpaceType::PSL2C, Coeff::Integers),
            z(&[(0, 1), (3, 1)]).with_torsion(2, 2).unwrap()
        );
        assert_eq!(
            cohomology(SpaceType::TCP1, Coeff::Integers),
            cohomology(SpaceType::CP1, Coeff::Integers)
        );
    }

    #[test]
    fn universal_coefficients_hold_for_table() {
        for space in SpaceType::ALL {
            let gz = cohomology(space, Coeff::Integers);
            let gf = cohomology(space, Coeff::F2);
            for n in -1..=5 {
                let tors = |d: i64| gz.entry(d).map_or(0, |e| e.torsion().len() as u64);
                assert_eq!(gf.rank_at(n), gz.rank_at(n) + tors(n) + tors(n + 1), "{space:?} degree {n}");
            }
        }
    }

    #[test]
    fn torsion_validation() {
        assert_eq!(z(&[]).with_torsion(0, 6), Err(Error::InvalidTorsion(6)));
        assert_eq!(z(&[]).with_torsion(0, 1), Err(Error::InvalidTorsion(1)));
        assert!(z(&[]).with_torsion(0, 9).is_ok());
        assert!(GradedGroup::zero(Coeff::F2).with_torsion(0, 2).is_err());
    }

    #[test]
    fn json_is_descending_and_omits_empty_torsion() {
        let g = GradedGroup::from_ranks(Coeff::F2, &[(1, 4), (0, 4), (-2, 1)]);
        assert_eq!(
            g.to_json(),
            r#"{"coeff":"F2","entries":{"1":{"rank":4},"0":{"rank":4},"-2":{"rank":1}}}"#
        );
        let psl = cohomology(SpaceType::PSL2C, Coeff::Integers);
        assert_eq!(
            psl.to_json(),
            r#"{"coeff":"Z","entries":{"3":{"rank":1},"2":{"rank":0,"torsion":[2]},"0":{"rank":1}}}"#
        );
    }

    #[test]
    fn json_rejects_bad_input() {
        assert!(GradedGroup::from_json(r#"{"coeff":"F2","entries":{"0":{"rank":1,"torsion":[2]}}}"#).is_err());
        assert!(GradedGroup::from_json(r#"{"coeff":"Z","entries":{"0":{"rank":1,"torsion":[6]}}}"#).is_err());
        assert!(GradedGroup::from_json(r#"{"coeff":"Z","entries":{"x":{"rank":1}}}"#).is_err());
        assert!(GradedGroup::from_json(r#"{"coeff":"Z","entries":{},"extra":1}"#).is_err());
        // zero entries are dropped
        let g = GradedGroup::from_json(r#"{"coeff":"Z","entries":{"4":{"rank":0}}}"#).unwrap();
        assert!(g.is_zero());
    }

    fn arb_group() -> impl Strategy<Value = GradedGroup> {
        prop::collection::vec((-6i64..6, 0u64..5, prop::option::of(prop::sample::select(vec![2u64, 3, 4, 8]))), 0..6)
            .prop_map(|v| {
                v.into_iter().fold(GradedGroup::zero(Coeff::Integers), |g, (d, r, t)| {
                    let g = g.with_rank(d, r);
                    match t {
                        Some(o) => g.with_torsion(d, o).unwrap(),
                        None => g,
                    }
                })
            })
    }

    proptest! {
        #[test]
        fn sum_commutes_and_associates(a in arb_group(), b in arb_group(), c in arb_group()) {
            prop_assert_eq!(a.direct_sum(&b).unwrap(), b.direct_sum(&a).unwrap());
            prop_assert_eq!(
                a.direct_sum(&b).unwrap().direct_sum(&c).unwrap(),
                a.direct_sum(&b.direct_sum(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.direct_sum(&b).unwrap().euler_characteristic(),
                a.euler_characteristic() + b.euler_characteristic()
            );
        }

        #[test]
        fn shifts_compose(g in arb_group(), a in -10i64..10, b in -10i64..10) {
            prop_assert_eq!(g.shift(a).shift(b), g.shift(a + b));
            let sign = if a.rem_euclid(2) == 0 { 1 } else { -1 };
            prop_assert_eq!(g.shift(a).euler_characteristic(), sign * g.euler_characteristic());
        }

        #[test]
        fn scale_multiplies_ranks(g in arb_group(), n in 0u64..6, d in -6i64..6) {
            prop_assert_eq!(g.scale(n).rank_at(d), n * g.rank_at(d));
        }

        #[test]
        fn json_round_trip(g in arb_group()) {
            prop_assert_eq!(GradedGroup::from_json(&g.to_json()).unwrap(), g);
        }
    }

    /// Integral cohomology of a cochain complex given by its coboundary
    /// matrices, via Smith normal form. Independent of the table above.
    mod cochain_oracle {
        /// Diagonal of the Smith normal form (nonzero entries only).
        fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<i64> {
            let rows = m.len();
            let cols = if rows == 0 { 0 } else { m[0].len() };
            let mut diag = Vec::new();
            let mut t = 0;
            while t < rows.min(cols) {
                let pivot = (t..rows)
                    .flat_map(|i| (t..cols).map(move |j| (i, j)))
                    .filter(|&(i, j)| m[i][j] != 0)
                    .min_by_key(|&(i, j)| m[i][j].abs());
                let Some((pi, pj)) = pivot else { break };
                m.swap(t, pi);
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
                loop {
                    let mut dirty = false;
                    for i in t + 1..rows {
                        let f = m[i][t] / m[t][t];
                        for j in 0..cols {
                            m[i][j] -= f * m[t][j];
                        }
                        if m[i][t] != 0 {
                            dirty = true;
                        }
                    }
                    for j in t + 1..cols {
                        let f = m[t][j] / m[t][t];
                        for i in 0..rows {
                            m[i][j] -= f * m[i][t];
                        }
                        if m[t][j] != 0 {
                            dirty = true;
                        }
                    }
                    if !dirty {
                        break;
                    }
                    let (pi, pj) = (t..rows)
                        .flat_map(|i| (t..cols).map(move |j| (i, j)))
                        .filter(|&(i, j)| (i == t || j == t) && m[i][j] != 0)
                        .min_by_key(|&(i, j)| m[i][j].abs())
                        .unwrap();
                    m.swap(t, pi);
                    for row in m.iter_mut() {
                        row.swap(t, pj);
                    }
                }
                diag.push(m[t][t].abs());
                t += 1;
            }
            diag
        }

        /// `deltas[k]` is the coboundary C^k -> C^{k+1} as a matrix with
        /// `dims[k+1]` rows and `dims[k]` columns. Returns (rank, torsion) per degree.
        pub fn cohomology(dims: &[usize], deltas: &[Vec<Vec<i64>>]) -> Vec<(u64, Vec<u64>)> {
            let snf: Vec<Vec<i64>> = deltas.iter().map(|d| smith_diagonal(d.clone())).collect();
            (0..dims.len())
                .map(|k| {
                    let rank_out = if k < snf.len() { snf[k].len() } else { 0 };
                    let (rank_in, tors) = if k > 0 {
                        let s = &snf[k - 1];
                        (s.len(), s.iter().filter(|&&x| x > 1).map(|&x| x as u64).collect())
                    } else {
                        (0, Vec::new())
                    };
                    ((dims[k] - rank_out - rank_in) as u64, tors)
                })
                .collect()
        }
    }

    #[test]
    fn oracle_rp3_matches_psl2c_row() {
        // Cellular cochains of RP^3: one cell per dimension, coboundaries 0, 2, 0.
        let dims = [1, 1, 1, 1];
        let deltas = vec![vec![vec![0]], vec![vec![2]], vec![vec![0]]];
        let h = cochain_oracle::cohomology(&dims, &deltas);
        let table = cohomology(SpaceType::PSL2C, Coeff::Integers);
        for (k, (rank, tors)) in h.iter().enumerate() {
            let k = k as i64;
            assert_eq!(*rank, table.rank_at(k), "degree {k}");
            assert_eq!(tors.as_slice(), table.entry(k).map_or(&[][..], |e| e.torsion()), "degree {k}");
        }
    }

    #[test]
    fn oracle_wedge_of_two_circles_matches_cstar_minus_point() {
        // Two triangles glued at vertex 0: vertices 0..5, edges
        // 01 12 20 03 34 40. Coboundary C^0 -> C^1 is the transposed boundary.
        let edges = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)];
        let mut delta0 = vec![vec![0i64; 5]; edges.len()];
        for (e, &(a, b)) in edges.iter().enumerate() {
            delta0[e][a] -= 1;
            delta0[e][b] += 1;
        }
        let h = cochain_oracle::cohomology(&[5, edges.len()], &[delta0]);
        let table = cohomology(SpaceType::CstarMinusPoint, Coeff::Integers);
        assert_eq!(h[0], (table.rank_at(0), vec![]));
        assert_eq!(h[1], (table.rank_at(1), vec![]));
    }
}
