//! SL(2,C) Casson invariants of knot surgeries from total Culler–Shalen
//! seminorm data, and the resulting Floer cohomology for small and
//! two-bridge knots.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{AdmissibilityReason, Error, Result};
use crate::graded::{Coeff, GradedGroup};
use crate::polys::{alexander_condition, IntPoly};
use crate::slope::{format_ratio, parse_ratio, Slope};

/// Weighted sum of seminorms `Σ coeff · |p·b - q·a|`, one entry per
/// one-dimensional component with kernel slope `a/b`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeminormSpec {
    entries: Vec<SeminormEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeminormEntry {
    pub coeff: Ratio<i64>,
    pub slope: Ratio<i64>,
}

impl SeminormSpec {
    pub fn new(entries: Vec<SeminormEntry>) -> Result<Self> {
        for e in &entries {
            if !e.coeff.is_positive() {
                return Err(Error::data("seminorm", "weights must be positive"));
            }
        }
        Ok(SeminormSpec { entries })
    }

    pub fn entries(&self) -> &[SeminormEntry] {
        &self.entries
    }

    pub fn total(&self, s: Slope) -> Ratio<i64> {
        total_seminorm(self, s)
    }
}

pub fn total_seminorm(spec: &SeminormSpec, s: Slope) -> Ratio<i64> {
    spec.entries
        .iter()
        .map(|e| {
            let (a, b) = (*e.slope.numer(), *e.slope.denom());
            e.coeff * Ratio::from_integer((s.p() * b - s.q() * a).abs())
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoBridge {
    pub alpha: i64,
    pub beta: i64,
}

/// Ingested knot data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotRecord {
    pub name: String,
    pub alexander: IntPoly,
    pub two_bridge: Option<TwoBridge>,
    pub boundary_slopes: BTreeSet<Ratio<i64>>,
    pub irregular_slopes: BTreeSet<Ratio<i64>>,
    pub seminorm: SeminormSpec,
    pub e0: Ratio<i64>,
    pub e1: Ratio<i64>,
    pub small: bool,
}

fn is_half_integer(r: &Ratio<i64>) -> bool {
    !r.is_negative() && (*r * 2).is_integer()
}

impl KnotRecord {
    /// Right-handed trefoil, the two-bridge knot K(3,1).
    pub fn trefoil_right() -> Self {
        KnotRecord {
            name: "trefoil-r".into(),
            alexander: IntPoly::new(vec![1, -1, 1]),
            two_bridge: Some(TwoBridge { alpha: 3, beta: 1 }),
            boundary_slopes: [Ratio::from_integer(0), Ratio::from_integer(6)].into(),
            irregular_slopes: BTreeSet::new(),
            seminorm: SeminormSpec {
                entries: vec![SeminormEntry { coeff: Ratio::from_integer(1), slope: Ratio::from_integer(6) }],
            },
            e0: Ratio::from_integer(0),
            e1: Ratio::new(1, 2),
            small: true,
        }
    }

    /// Left-handed trefoil, the mirror of [`KnotRecord::trefoil_right`].
    pub fn trefoil_left() -> Self {
        KnotRecord {
            name: "trefoil-l".into(),
            two_bridge: Some(TwoBridge { alpha: 3, beta: -1 }),
            boundary_slopes: [Ratio::from_integer(0), Ratio::from_integer(-6)].into(),
            seminorm: SeminormSpec {
                entries: vec![SeminormEntry { coeff: Ratio::from_integer(1), slope: Ratio::from_integer(-6) }],
            },
            ..KnotRecord::trefoil_right()
        }
    }

    pub fn builtins() -> Vec<KnotRecord> {
        vec![KnotRecord::trefoil_right(), KnotRecord::trefoil_left()]
    }

    pub fn correction(&self, s: Slope) -> Ratio<i64> {
        if s.sigma() == 0 {
            self.e0
        } else {
            self.e1
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::data("name", "must be nonempty"));
        }
        if self.alexander.is_zero() {
            return Err(Error::data("alexander", "must be a nonzero polynomial"));
        }
        if let Some(tb) = self.two_bridge {
            if tb.alpha < 3 || tb.alpha % 2 == 0 {
                return Err(Error::data("two_bridge", "alpha must be odd and at least 3"));
            }
            if tb.alpha.gcd(&tb.beta) != 1 {
                return Err(Error::data("two_bridge", "alpha and beta must be coprime"));
            }
        }
        if !is_half_integer(&self.e0) {
            return Err(Error::data("E0", "must be a nonnegative half-integer"));
        }
        if !is_half_integer(&self.e1) {
            return Err(Error::data("E1", "must be a nonnegative half-integer"));
        }
        if self.seminorm.entries.iter().any(|e| !e.coeff.is_positive()) {
            return Err(Error::data("seminorm", "weights must be positive"));
        }
        Ok(())
    }

    /// Admissibility: not a boundary slope, not an irregular slope, and no
    /// `p'`-th root of unity is a root of the Alexander polynomial.
    pub fn check_admissible(&self, s: Slope) -> Result<()> {
        self.check_boundary(s)?;
        if self.irregular_slopes.contains(&s.as_ratio()) {
            return Err(Error::NonAdmissible(AdmissibilityReason::IrregularSlope));
        }
        self.check_alexander(s)
    }

    fn check_boundary(&self, s: Slope) -> Result<()> {
        if self.boundary_slopes.contains(&s.as_ratio()) {
            return Err(Error::NonAdmissible(AdmissibilityReason::BoundarySlope));
        }
        Ok(())
    }

    fn check_alexander(&self, s: Slope) -> Result<()> {
        match alexander_condition(&self.alexander, s.p()) {
            Ok(true) => Ok(()),
            Ok(false) => Err(Error::NonAdmissible(AdmissibilityReason::AlexanderRoot)),
            Err(Error::ZeroSurgeryCoefficient) => {
                // p = 0 has p' = 0; every root of unity divides t^0 - 1 = 0
                Err(Error::NonAdmissible(AdmissibilityReason::AlexanderRoot))
            }
            Err(e) => Err(e),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&KnotRecordJson::from(self)).expect("knot record serializes")
    }
}

fn to_count(value: Ratio<i64>, what: &str) -> Result<u64> {
    if !value.is_integer() || value.is_negative() {
        return Err(Error::NonIntegerResult(format!("{what} = {}", format_ratio(&value))));
    }
    Ok(value.to_integer() as u64)
}

/// `λ = ½‖p/q‖_T - E_σ(p)` on admissible slopes.
pub fn casson_invariant(k: &KnotRecord, s: Slope) -> Result<u64> {
    k.check_admissible(s)?;
    let lambda = total_seminorm(&k.seminorm, s) / 2 - k.correction(s);
    to_count(lambda, &format!("lambda({}, {s})", k.name))
}

/// Small knot, non-boundary slope: `HP = Z^λ` in degree 0.
pub fn hp_small_knot(k: &KnotRecord, s: Slope) -> Result<GradedGroup> {
    if !k.small {
        return Err(Error::NotSmallKnot(k.name.clone()));
    }
    k.check_boundary(s)?;
    let lambda = casson_invariant(k, s)?;
    Ok(GradedGroup::from_ranks(Coeff::Integers, &[(0, lambda)]))
}

/// Number of isolated irreducible characters of a two-bridge surgery:
/// `½‖p/q‖_T`, minus `(α-1)/4` when `p` is odd.
pub fn two_bridge_lambda(k: &KnotRecord, s: Slope) -> Result<u64> {
    let tb = k.two_bridge.ok_or_else(|| Error::NotTwoBridge(k.name.clone()))?;
    k.check_boundary(s)?;
    k.check_alexander(s)?;
    let half = total_seminorm(&k.seminorm, s) / 2;
    let value = if s.sigma() == 0 {
        half
    } else {
        half - Ratio::new(tb.alpha - 1, 4)
    };
    to_count(value, &format!("two-bridge rank({}, {s})", k.name))
}

pub fn hp_two_bridge(k: &KnotRecord, s: Slope) -> Result<GradedGroup> {
    let rank = two_bridge_lambda(k, s)?;
    Ok(GradedGroup::from_ranks(Coeff::Integers, &[(0, rank)]))
}

// ---- JSON schema -------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeminormEntryJson {
    coeff: String,
    slope: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnotRecordJson {
    name: String,
    alexander: Vec<i64>,
    #[serde(default)]
    two_bridge: Option<[i64; 2]>,
    boundary_slopes: Vec<String>,
    #[serde(default)]
    irregular_slopes: Vec<String>,
    seminorm: Vec<SeminormEntryJson>,
    #[serde(rename = "E0")]
    e0: String,
    #[serde(rename = "E1")]
    e1: String,
    small: bool,
}

impl From<&KnotRecord> for KnotRecordJson {
    fn from(k: &KnotRecord) -> Self {
        KnotRecordJson {
            name: k.name.clone(),
            alexander: k.alexander.coeffs().to_vec(),
            two_bridge: k.two_bridge.map(|tb| [tb.alpha, tb.beta]),
            boundary_slopes: k.boundary_slopes.iter().map(format_ratio).collect(),
            irregular_slopes: k.irregular_slopes.iter().map(format_ratio).collect(),
            seminorm: k
                .seminorm
                .entries
                .iter()
                .map(|e| SeminormEntryJson { coeff: format_ratio(&e.coeff), slope: format_ratio(&e.slope) })
                .collect(),
            e0: format_ratio(&k.e0),
            e1: format_ratio(&k.e1),
            small: k.small,
        }
    }
}

fn ratio_field(field: &str, s: &str) -> Result<Ratio<i64>> {
    parse_ratio(s).map_err(|m| Error::data(field, m))
}

impl TryFrom<KnotRecordJson> for KnotRecord {
    type Error = Error;

    fn try_from(j: KnotRecordJson) -> Result<Self> {
        let slopes = |field: &str, v: &[String]| -> Result<BTreeSet<Ratio<i64>>> {
            v.iter().map(|s| ratio_field(field, s)).collect()
        };
        let mut entries = Vec::with_capacity(j.seminorm.len());
        for e in &j.seminorm {
            let slope: Slope = e
                .slope
                .parse()
                .map_err(|err: Error| Error::data("seminorm.slope", err.to_string()))?;
            entries.push(SeminormEntry { coeff: ratio_field("seminorm.coeff", &e.coeff)?, slope: slope.as_ratio() });
        }
        let record = KnotRecord {
            name: j.name,
            alexander: IntPoly::new(j.alexander),
            two_bridge: j.two_bridge.map(|[alpha, beta]| TwoBridge { alpha, beta }),
            boundary_slopes: slopes("boundary_slopes", &j.boundary_slopes)?,
            irregular_slopes: slopes("irregular_slopes", &j.irregular_slopes)?,
            seminorm: SeminormSpec { entries },
            e0: ratio_field("E0", &j.e0)?,
            e1: ratio_field("E1", &j.e1)?,
            small: j.small,
        };
        record.validate()?;
        Ok(record)
    }
}

fn serde_to_data(err: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let msg = err.inner().to_string();
    let path = err.path().to_string();
    // unknown/missing keys are named in backticks; anything else sits at the path
    let field = if msg.starts_with("unknown field") || msg.starts_with("missing field") {
        msg.split('`').nth(1).map(str::to_string)
    } else {
        None
    };
    let field = field.unwrap_or_else(|| {
        // "[3].seminorm[0].coeff" -> "seminorm.coeff"
        let mut out = String::new();
        let mut depth = 0;
        for c in path.chars() {
            match c {
                '[' => depth += 1,
                ']' => depth -= 1,
                _ if depth == 0 => out.push(c),
                _ => {}
            }
        }
        let out = out.trim_start_matches('.').to_string();
        if out.is_empty() || out == "." {
            "<record>".to_string()
        } else {
            out
        }
    });
    if path == "." {
        Error::data(field, msg)
    } else {
        Error::data(field, format!("{path}: {msg}"))
    }
}

fn from_json<T: serde::de::DeserializeOwned>(json: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(json);
    let value = serde_path_to_error::deserialize(&mut de).map_err(serde_to_data)?;
    de.end().map_err(|e| Error::data("<record>", e.to_string()))?;
    Ok(value)
}

/// Parse one knot record.
pub fn parse_record(json: &str) -> Result<KnotRecord> {
    KnotRecord::try_from(from_json::<KnotRecordJson>(json)?)
}

/// Parse a database: a JSON array of knot records.
pub fn parse_database(json: &str) -> Result<Vec<KnotRecord>> {
    let raw: Vec<KnotRecordJson> = from_json(json)?;
    let records = raw.into_iter().map(KnotRecord::try_from).collect::<Result<Vec<_>>>()?;
    let mut names = BTreeSet::new();
    for r in &records {
        if !names.insert(r.name.as_str()) {
            return Err(Error::data("name", format!("duplicate record {:?}", r.name)));
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::roots::{trefoil_surgery_count, Chirality};

    fn slope(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn seminorm_examples() {
        let k = KnotRecord::trefoil_right();
        assert_eq!(total_seminorm(&k.seminorm, slope(7, 1)), Ratio::from_integer(1));
        assert_eq!(total_seminorm(&k.seminorm, slope(6, 1)), Ratio::zero());
        assert_eq!(total_seminorm(&k.seminorm, slope(2, 1)), Ratio::from_integer(4));
    }

    #[test]
    fn casson_examples() {
        let k = KnotRecord::trefoil_right();
        assert_eq!(casson_invariant(&k, slope(2, 1)), Ok(2));
        assert_eq!(casson_invariant(&k, slope(7, 1)), Ok(0));
        assert_eq!(
            casson_invariant(&k, slope(12, 1)),
            Err(Error::NonAdmissible(AdmissibilityReason::AlexanderRoot))
        );
        assert_eq!(
            casson_invariant(&k, slope(0, 1)),
            Err(Error::NonAdmissible(AdmissibilityReason::BoundarySlope))
        );
    }

    #[test]
    fn irregular_slopes_are_excluded() {
        let mut k = KnotRecord::trefoil_right();
        k.irregular_slopes.insert(Ratio::from_integer(5));
        assert_eq!(
            casson_invariant(&k, slope(5, 1)),
            Err(Error::NonAdmissible(AdmissibilityReason::IrregularSlope))
        );
        // two-bridge formula does not consult the irregular list
        assert!(hp_two_bridge(&k, slope(5, 1)).is_ok());
    }

    #[test]
    fn non_integer_data_is_reported() {
        let mut k = KnotRecord::trefoil_right();
        k.e1 = Ratio::from_integer(0);
        assert!(matches!(casson_invariant(&k, slope(7, 1)), Err(Error::NonIntegerResult(_))));
        k.e1 = Ratio::from_integer(3);
        assert!(matches!(casson_invariant(&k, slope(7, 1)), Err(Error::NonIntegerResult(_))));
    }

    #[test]
    fn hp_examples() {
        let k = KnotRecord::trefoil_right();
        assert_eq!(hp_small_knot(&k, slope(2, 1)).unwrap(), GradedGroup::from_ranks(Coeff::Integers, &[(0, 2)]));
        assert!(hp_small_knot(&k, slope(7, 1)).unwrap().is_zero());
        assert_eq!(
            hp_small_knot(&k, slope(6, 1)),
            Err(Error::NonAdmissible(AdmissibilityReason::BoundarySlope))
        );
        assert_eq!(hp_two_bridge(&k, slope(3, 1)).unwrap(), GradedGroup::from_ranks(Coeff::Integers, &[(0, 1)]));
        assert_eq!(hp_two_bridge(&k, slope(2, 1)).unwrap(), GradedGroup::from_ranks(Coeff::Integers, &[(0, 2)]));
        assert_eq!(
            hp_two_bridge(&k, slope(24, 1)),
            Err(Error::NonAdmissible(AdmissibilityReason::AlexanderRoot))
        );
        let mut big = k.clone();
        big.small = false;
        assert_eq!(hp_small_knot(&big, slope(2, 1)), Err(Error::NotSmallKnot("trefoil-r".into())));
        big.two_bridge = None;
        assert_eq!(hp_two_bridge(&big, slope(2, 1)), Err(Error::NotTwoBridge("trefoil-r".into())));
    }

    #[test]
    fn trefoil_oracle_sweep() {
        for k in KnotRecord::builtins() {
            let chir = if k.name == "trefoil-r" { Chirality::R } else { Chirality::L };
            for s in Slope::sweep(99, 20) {
                match casson_invariant(&k, s) {
                    Ok(l) => {
                        assert_eq!(l, trefoil_surgery_count(s.p(), s.q(), chir, true).unwrap(), "{} {s}", k.name);
                        assert_eq!(hp_small_knot(&k, s).unwrap(), hp_two_bridge(&k, s).unwrap());
                    }
                    Err(Error::NonAdmissible(_)) => assert!(s.p() % 12 == 0 || k.boundary_slopes.contains(&s.as_ratio())),
                    Err(e) => panic!("{} {s}: {e}", k.name),
                }
            }
        }
    }

    #[test]
    fn mirror_symmetry_of_seminorm() {
        let r = KnotRecord::trefoil_right();
        let l = KnotRecord::trefoil_left();
        for s in Slope::sweep(40, 7) {
            assert_eq!(casson_invariant(&r, s).ok(), casson_invariant(&l, s.negated()).ok());
        }
    }

    #[test]
    fn seminorm_vanishes_only_on_entry_slopes() {
        let spec = SeminormSpec::new(vec![
            SeminormEntry { coeff: Ratio::new(1, 2), slope: Ratio::new(-4, 1) },
            SeminormEntry { coeff: Ratio::from_integer(2), slope: Ratio::new(3, 2) },
        ])
        .unwrap();
        // a weighted sum of nonnegative terms vanishes only where every term does,
        // which never happens for two distinct kernel slopes
        assert!(Slope::sweep(30, 6).all(|s| !total_seminorm(&spec, s).is_zero()));
        let single = KnotRecord::trefoil_right().seminorm;
        for s in Slope::sweep(30, 6) {
            assert_eq!(total_seminorm(&single, s).is_zero(), s == Slope::integral(6));
        }
    }

    #[test]
    fn json_schema() {
        let text = r#"{"name":"trefoil-r","alexander":[1,-1,1],"two_bridge":[3,1],"boundary_slopes":["0/1","6/1"],"irregular_slopes":[],"seminorm":[{"coeff":"1","slope":"6/1"}],"E0":"0","E1":"1/2","small":true}"#;
        let k = parse_record(text).unwrap();
        assert_eq!(k, KnotRecord::trefoil_right());
        assert_eq!(parse_record(&k.to_json()).unwrap(), k);

        let bad_e1 = text.replace(r#""E1":"1/2""#, r#""E1":"1/3""#);
        assert!(matches!(parse_record(&bad_e1), Err(Error::Data { field, .. }) if field == "E1"));
        let unknown = text.replace(r#""small":true"#, r#""small":true,"genus":1"#);
        assert!(matches!(parse_record(&unknown), Err(Error::Data { field, .. }) if field == "genus"));
        let even_alpha = text.replace("[3,1]", "[4,1]");
        assert!(matches!(parse_record(&even_alpha), Err(Error::Data { field, .. }) if field == "two_bridge"));
        let unreduced = text.replace(r#""slope":"6/1""#, r#""slope":"12/2""#);
        assert!(matches!(parse_record(&unreduced), Err(Error::Data { field, .. }) if field == "seminorm.slope"));
        let missing = text.replace(r#","small":true"#, "");
        assert!(matches!(parse_record(&missing), Err(Error::Data { field, .. }) if field == "small"));
    }

    #[test]
    fn database_rejects_duplicates() {
        let r = KnotRecord::trefoil_right().to_json();
        assert_eq!(parse_database(&format!("[{r}]")).unwrap().len(), 1);
        assert!(parse_database(&format!("[{r},{r}]")).is_err());
    }
}
