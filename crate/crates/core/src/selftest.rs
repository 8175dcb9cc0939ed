//! Sweeps over the quantified invariants, runnable from the CLI.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::Signed;
use serde::Serialize;

use crate::casson::{casson_invariant, hp_small_knot, hp_two_bridge, KnotRecord};
use crate::census::{longitude_trace, verify_cubic_point, CubicPoint, QuadExt};
use crate::error::Error;
use crate::floer::{
    default_protected_window, hp_closed, hp_consistency_with, hp_sharp, limit_data, triangle_check, ContributionTable,
    Family,
};
use crate::graded::{cohomology, Coeff, SpaceType};
use crate::polys::{alexander_condition, compose_connected_sum, cyclotomic, IntPoly, SummandSpec};
use crate::roots::{trefoil_surgery_count, Chirality};
use crate::slope::Slope;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ranges {
    /// Trefoil sweeps: `|p| <= trefoil_p`, `q <= trefoil_q`.
    pub trefoil_p: i64,
    pub trefoil_q: i64,
    /// Census/closed-form sweep.
    pub census_p: i64,
    pub census_q: i64,
}

impl Ranges {
    pub fn full() -> Self {
        Ranges { trefoil_p: 99, trefoil_q: 20, census_p: 200, census_q: 50 }
    }

    pub fn quick() -> Self {
        Ranges { trefoil_p: 50, trefoil_q: 10, census_p: 50, census_q: 10 }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: u64,
    pub failures: Vec<String>,
    /// Known, documented mismatches that are not counted as failures.
    pub expected_findings: u64,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, ..Default::default() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            let status = if s.passed() { "PASS" } else { "FAIL" };
            write!(f, "[{status}] {:<28} {} checks", s.name, s.checked)?;
            if s.expected_findings > 0 {
                write!(f, ", {} EXPECTED discrepancies", s.expected_findings)?;
            }
            writeln!(f)?;
            for msg in s.failures.iter().filter(|m| !m.is_empty()) {
                writeln!(f, "    {msg}")?;
            }
        }
        Ok(())
    }
}

fn trefoil_oracle(r: Ranges) -> SuiteResult {
    let mut out = SuiteResult::new("trefoil-lambda-oracle");
    let k = KnotRecord::trefoil_right();
    for s in Slope::sweep(r.trefoil_p, r.trefoil_q) {
        if s.p() % 12 == 0 || k.boundary_slopes.contains(&s.as_ratio()) {
            continue;
        }
        let lambda = casson_invariant(&k, s);
        let oracle = trefoil_surgery_count(s.p(), s.q(), Chirality::R, true);
        out.check(lambda.is_ok() && lambda == oracle, || format!("{s}: {lambda:?} vs oracle {oracle:?}"));
        out.check(hp_small_knot(&k, s) == hp_two_bridge(&k, s), || format!("{s}: small/two-bridge disagree"));
    }
    out
}

fn alexander_sweep() -> SuiteResult {
    let mut out = SuiteResult::new("alexander-condition");
    let trefoil = IntPoly::new(vec![1, -1, 1]);
    for p in (-200i64..=200).filter(|&p| p != 0) {
        let ok = alexander_condition(&trefoil, p) == Ok(p % 12 != 0);
        out.check(ok, || format!("p = {p}"));
    }
    for d in 1..=60u64 {
        out.check(IntPoly::x_pow_minus_one(d as usize).divisible_by_monic(&cyclotomic(d)), || format!("Phi_{d}"));
    }
    out
}

fn census_consistency(r: Ranges, table: &ContributionTable) -> SuiteResult {
    let mut out = SuiteResult::new("census-closed-form");
    for s in Slope::sweep(r.census_p, r.census_q) {
        for family in [Family::Granny, Family::Square] {
            let report = match hp_consistency_with(table, family, s) {
                Ok(rep) => rep,
                Err(e) => {
                    out.check(false, || format!("{family} {s}: {e}"));
                    continue;
                }
            };
            let known_gap = family == Family::Square && s.p() % 12 == 0 && s.p() != 0;
            if known_gap {
                let ok = report.nonzero() == [(-1, -2)].into();
                out.check(ok, || format!("{family} {s}: delta {:?}", report.nonzero()));
                if ok {
                    out.expected_findings += 1;
                }
            } else {
                out.check(report.is_zero(), || format!("{family} {s}: delta {:?}", report.nonzero()));
            }
        }
    }
    out
}

fn hp_sharp_ranks(r: Ranges) -> SuiteResult {
    let mut out = SuiteResult::new("hp-sharp-degree-zero");
    let k = KnotRecord::trefoil_right();
    for s in Slope::sweep(r.trefoil_p, r.trefoil_q) {
        let g = match hp_sharp(&k, s) {
            Ok(g) => g,
            Err(Error::NonAdmissible(_)) => continue,
            Err(e) => {
                out.check(false, || format!("{s}: {e}"));
                continue;
            }
        };
        let sigma = s.sigma();
        let lambda = trefoil_surgery_count(s.p(), s.q(), Chirality::R, true).unwrap_or(0) as i64;
        let expected = (2 - sigma) + (s.p().abs() - 2 + sigma) / 2 + lambda;
        out.check(g.rank_at(0) as i64 == expected, || format!("{s}: rank {} vs {expected}", g.rank_at(0)));
    }
    out
}

fn cohomology_table() -> SuiteResult {
    let mut out = SuiteResult::new("universal-coefficients");
    for space in SpaceType::ALL {
        let gz = cohomology(space, Coeff::Integers);
        let gf = cohomology(space, Coeff::F2);
        let tors = |d: i64| gz.entry(d).map_or(0, |e| e.torsion().len() as u64);
        for n in -1..=4 {
            out.check(gf.rank_at(n) == gz.rank_at(n) + tors(n) + tors(n + 1), || format!("{space:?} degree {n}"));
        }
    }
    out
}

fn cubic_and_trace() -> SuiteResult {
    let mut out = SuiteResult::new("cubic-surface-and-trace");
    let mut values = Vec::new();
    for a in -4..=4 {
        for b in -1..=1 {
            values.push(QuadExt::new(Ratio::new(a, 2), Ratio::from_integer(b)));
        }
    }
    let r3 = QuadExt::sqrt3();
    let two = QuadExt::from(2);
    let expected: BTreeSet<_> = [(r3, -r3, two), (-r3, r3, two)].into_iter().map(|t| format!("{t:?}")).collect();
    let mut found = BTreeSet::new();
    for &x in &values {
        for &y in &values {
            for &z in &values {
                if verify_cubic_point(x, y, z) == CubicPoint::Singular {
                    found.insert(format!("{:?}", (x, y, z)));
                }
            }
        }
    }
    out.check(found == expected, || format!("singular points {found:?}"));
    let r = Ratio::from_integer;
    for x in -5..=5 {
        let x = r(x);
        let x2 = x * x;
        let restricted = -x2 * x2 * x2 + r(6) * x2 * x2 - r(9) * x2 + r(2);
        out.check(longitude_trace(x, x2 - r(1)) == restricted, || format!("y = x^2 - 1 at {x}"));
        out.check(longitude_trace(x, r(2)) == r(2), || format!("y = 2 at {x}"));
    }
    out
}

fn apoly() -> SuiteResult {
    let mut out = SuiteResult::new("a-polynomials");
    let r = SummandSpec::trefoil_right;
    let granny = compose_connected_sum(&[r(), r()]).map(|a| (a.to_string(), a.newton_slopes()));
    let square = compose_connected_sum(&[r(), SummandSpec::trefoil_left()]).map(|a| (a.to_string(), a.newton_slopes()));
    let set = |v: &[i64]| v.iter().map(|&x| Ratio::from_integer(x)).collect::<BTreeSet<_>>();
    out.check(
        granny == Ok(("(L - 1)(L + M^-6)(L - M^-12)".to_string(), set(&[0, 6, 12]))),
        || format!("granny {granny:?}"),
    );
    out.check(
        square == Ok(("(L - 1)(L + M^-6)(L + M^6)".to_string(), set(&[-6, 0, 6]))),
        || format!("square {square:?}"),
    );
    out
}

fn limits() -> SuiteResult {
    let mut out = SuiteResult::new("limit-ranks");
    let expected = [
        (Family::Granny, 0, 12),
        (Family::Granny, -1, 6),
        (Family::Square, 0, 6),
        (Family::Square, -1, 0),
    ];
    for (family, degree, value) in expected {
        for p in [1i64, 2, 7, 12] {
            let Ok((lim, bound)) = limit_data(family, degree, p) else {
                out.check(false, || format!("{family} degree {degree} p {p}"));
                continue;
            };
            out.check(lim == Ratio::from_integer(value), || format!("{family} {degree} p={p}: {lim}"));
            for q in [101i64, 103] {
                let Ok(s) = Slope::new(p, q) else { continue };
                let rank = hp_closed(family, s).map(|g| g.rank_at(degree) as i64).unwrap_or(-1);
                let dev = (Ratio::from_integer(rank) - lim * q).abs();
                out.check(dev <= bound, || format!("{family} {s} degree {degree}: deviation {dev}"));
            }
        }
    }
    out
}

fn triangle() -> SuiteResult {
    let mut out = SuiteResult::new("exact-triangle-obstruction");
    let k = KnotRecord::trefoil_right();
    let (a, b) = match (hp_sharp(&k, Slope::integral(2)), hp_sharp(&k, Slope::integral(3))) {
        (Ok(a), Ok(b)) => (a, b),
        other => {
            out.check(false, || format!("{other:?}"));
            return out;
        }
    };
    out.check(a.rank_at(-2) == 0 && b.rank_at(-2) == 1, || "degree -2 ranks".into());
    let windows: [&[i64]; 8] = [&[], &[-1], &[0], &[1], &[-1, 0], &[0, 1], &[-1, 1], &[-1, 0, 1]];
    for w in windows {
        let w: BTreeSet<i64> = w.iter().copied().collect();
        let v = triangle_check(&a, &b, &w);
        out.check(
            v.as_ref().is_ok_and(|v| !v.compatible && v.obstruction_degrees.contains(&-2)),
            || format!("window {w:?}: {v:?}"),
        );
    }
    let v = triangle_check(&a, &b, &default_protected_window());
    out.check(v.is_ok_and(|v| v.obstruction_degrees == [-3, -2].into()), || "default window".into());
    out
}

/// Run every suite with the given ranges and contribution table.
pub fn run_with(ranges: Ranges, table: &ContributionTable) -> Report {
    Report {
        suites: vec![
            trefoil_oracle(ranges),
            alexander_sweep(),
            census_consistency(ranges, table),
            hp_sharp_ranks(ranges),
            cohomology_table(),
            cubic_and_trace(),
            apoly(),
            limits(),
            triangle(),
        ],
    }
}

pub fn run(quick: bool) -> Report {
    let ranges = if quick { Ranges::quick() } else { Ranges::full() };
    run_with(ranges, &ContributionTable::standard())
}

/// Number of reduced slopes in the census sweep with `p ≡ 0 mod 12`, `p ≠ 0`.
pub fn expected_square_discrepancies(ranges: Ranges) -> u64 {
    Slope::sweep(ranges.census_p, ranges.census_q)
        .filter(|s| s.p() % 12 == 0 && s.p() != 0)
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::ComponentType;
    use crate::graded::GradedGroup;

    #[test]
    fn quick_run_passes() {
        let report = run(true);
        assert!(report.passed(), "{report}");
        let census = report.suites.iter().find(|s| s.name == "census-closed-form").unwrap();
        assert_eq!(census.expected_findings, expected_square_discrepancies(Ranges::quick()));
    }

    #[test]
    fn tampered_table_fails() {
        let bad = ContributionTable::standard()
            .with_row(ComponentType::Cstar, GradedGroup::from_ranks(Coeff::F2, &[(0, 1), (1, 1)]));
        let report = run_with(Ranges::quick(), &bad);
        assert!(!report.passed());
        let census = report.suites.iter().find(|s| s.name == "census-closed-form").unwrap();
        assert!(!census.passed());
    }
}
