//! Integer polynomials in one variable and Laurent polynomials in the
//! meridian/longitude eigenvalues `M`, `L`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::slope::Slope;

/// Dense polynomial over Z; `coeffs[i]` is the coefficient of `t^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl From<Vec<i64>> for IntPoly {
    fn from(v: Vec<i64>) -> Self {
        IntPoly::new(v)
    }
}

impl From<IntPoly> for Vec<i64> {
    fn from(p: IntPoly) -> Self {
        p.coeffs
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        IntPoly::new(vec![c])
    }

    /// `t^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[0] = -1;
        c[n] += 1;
        IntPoly::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    /// Quotient and remainder by a monic divisor. Panics if `divisor` is not monic.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        assert_eq!(divisor.coeffs[dd], 1, "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![0; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd];
            quot[k] = c;
            if c != 0 {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= c * d;
                }
            }
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    pub fn divisible_by_monic(&self, divisor: &IntPoly) -> bool {
        self.div_rem_monic(divisor).1.is_zero()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{a}t^{i}")?,
            }
        }
        Ok(())
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The `d`-th cyclotomic polynomial, by dividing `t^d - 1` by `Φ_e` for every proper divisor `e`.
pub fn cyclotomic(d: u64) -> IntPoly {
    assert!(d >= 1, "cyclotomic index must be positive");
    let mut p = IntPoly::x_pow_minus_one(d as usize);
    for e in divisors(d) {
        if e < d {
            let (q, r) = p.div_rem_monic(&cyclotomic(e));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    p
}

/// True when no `p'`-th root of unity is a root of `delta`, where
/// `p' = |p|` for odd `p` and `|p|/2` for even `p`.
pub fn alexander_condition(delta: &IntPoly, p: i64) -> Result<bool> {
    if p == 0 {
        return Err(Error::ZeroSurgeryCoefficient);
    }
    assert!(!delta.is_zero(), "Alexander polynomial must be nonzero");
    let p_prime = Slope::integral(p).p_prime();
    Ok(divisors(p_prime)
        .into_iter()
        .all(|d| !delta.divisible_by_monic(&cyclotomic(d))))
}

/// Laurent polynomial in `M`, `L` with integer coefficients, keyed by `(M-exponent, L-exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), i64>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        LaurentPoly2::default()
    }

    pub fn monomial(coeff: i64, m_exp: i64, l_exp: i64) -> Self {
        LaurentPoly2::from_terms([(m_exp, l_exp, coeff)])
    }

    pub fn one() -> Self {
        LaurentPoly2::monomial(1, 0, 0)
    }

    /// `L - eps * M^k`
    pub fn longitude_binomial(eps: i64, k: i64) -> Self {
        LaurentPoly2::from_terms([(0, 1, 1), (k, 0, -eps)])
    }

    /// Sum of `(m_exp, l_exp, coeff)` triples; repeated exponents accumulate.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64, i64)>) -> Self {
        let mut p = LaurentPoly2::zero();
        for (m, l, c) in terms {
            p.add_term(m, l, c);
        }
        p
    }

    fn add_term(&mut self, m: i64, l: i64, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry((m, l)).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&(m, l));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&(m, l), &c) in &other.terms {
            out.add_term(m, l, c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::zero();
        for (&(m1, l1), &c1) in &self.terms {
            for (&(m2, l2), &c2) in &other.terms {
                out.add_term(m1 + m2, l1 + l2, c1 * c2);
            }
        }
        out
    }

    /// Multiply by `sign * M^a L^b`.
    pub fn times_monomial(&self, sign: i64, a: i64, b: i64) -> LaurentPoly2 {
        LaurentPoly2 {
            terms: self.terms.iter().map(|(&(m, l), &c)| ((m + a, l + b), sign * c)).collect(),
        }
    }

    /// Representative up to units `±M^a L^b`: lowest exponents zero and the
    /// coefficient of the largest `(L, M)` exponent positive.
    pub fn normalized(&self) -> LaurentPoly2 {
        if self.is_zero() {
            return self.clone();
        }
        let min_m = self.terms.keys().map(|k| k.0).min().unwrap();
        let min_l = self.terms.keys().map(|k| k.1).min().unwrap();
        let lead = self
            .terms
            .iter()
            .max_by_key(|(&(m, l), _)| (l, m))
            .map(|(_, &c)| c)
            .unwrap();
        self.times_monomial(lead.signum(), -min_m, -min_l)
    }

    pub fn same_up_to_units(&self, other: &LaurentPoly2) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn eval(&self, m: Ratio<i64>, l: Ratio<i64>) -> Ratio<i64> {
        let pow = |x: Ratio<i64>, e: i64| -> Ratio<i64> {
            if e >= 0 {
                num_traits::pow(x, e as usize)
            } else {
                num_traits::pow(x.recip(), (-e) as usize)
            }
        };
        self.terms
            .iter()
            .map(|(&(a, b), &c)| Ratio::from_integer(c) * pow(m, a) * pow(l, b))
            .sum()
    }

    /// Edge slopes `ΔM/ΔL` of the Newton polygon, skipping edges with `ΔL = 0`.
    pub fn newton_slopes(&self) -> BTreeSet<Ratio<i64>> {
        let mut pts: Vec<(i64, i64)> = self.terms.keys().copied().collect();
        pts.sort_unstable();
        let hull = convex_hull(&pts);
        let mut out = BTreeSet::new();
        if hull.len() < 2 {
            return out;
        }
        for i in 0..hull.len() {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            let dm = b.0 - a.0;
            let dl = b.1 - a.1;
            if dl != 0 {
                out.insert(Ratio::new(dm, dl));
            }
        }
        out
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain on sorted, distinct points; collinear points dropped.
fn convex_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    if pts.len() < 3 {
        return pts.to_vec();
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let fmt_var = |v: &str, e: i64| -> String {
            match e {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{e}"),
            }
        };
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|(&(m, l), _)| std::cmp::Reverse((l, m)));
        let mut first = true;
        for (&(m, l), &c) in ordered {
            let vars = format!("{}{}", fmt_var("L", l), fmt_var("M", m));
            let a = c.unsigned_abs();
            let body = if vars.is_empty() {
                a.to_string()
            } else if a == 1 {
                vars
            } else {
                format!("{a}{vars}")
            };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
                first = false;
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            f.write_str(&body)?;
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (&(m, l), &c) in &self.terms {
            seq.serialize_element(&[m, l, c])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let triples = Vec::<[i64; 3]>::deserialize(d)?;
        Ok(LaurentPoly2::from_terms(triples.into_iter().map(|[m, l, c]| (m, l, c))))
    }
}

/// Longitude eigenvalue on the irreducible locus as a signed monomial `L = sign * M^exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongitudeRule {
    pub sign: i64,
    pub exp: i64,
}

/// One summand of a connected sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandSpec {
    pub name: String,
    pub irreducible_factors: Vec<LaurentPoly2>,
    pub longitude: Option<LongitudeRule>,
}

impl SummandSpec {
    /// Right-handed trefoil: `L = -M^{-6}` on irreducibles.
    pub fn trefoil_right() -> Self {
        SummandSpec {
            name: "trefoil-r".into(),
            irreducible_factors: vec![LaurentPoly2::longitude_binomial(-1, -6)],
            longitude: Some(LongitudeRule { sign: -1, exp: -6 }),
        }
    }

    /// Left-handed trefoil: `L = -M^{6}` on irreducibles.
    pub fn trefoil_left() -> Self {
        SummandSpec {
            name: "trefoil-l".into(),
            irreducible_factors: vec![LaurentPoly2::longitude_binomial(-1, 6)],
            longitude: Some(LongitudeRule { sign: -1, exp: 6 }),
        }
    }
}

/// An A-polynomial kept as its list of distinct factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredAPoly {
    irreducible: Vec<LaurentPoly2>,
    include_reducible: bool,
}

impl FactoredAPoly {
    pub fn new(irreducible: Vec<LaurentPoly2>, include_reducible: bool) -> Self {
        let mut out = FactoredAPoly { irreducible: Vec::new(), include_reducible };
        for f in irreducible {
            assert!(!f.is_zero() && !f.is_monomial(), "A-polynomial factors must not be monomials");
            if !out.irreducible.iter().any(|g| g.same_up_to_units(&f)) {
                out.irreducible.push(f);
            }
        }
        out
    }

    /// All factors: `L - 1` (when reducibles are included) followed by the
    /// irreducible factors, repeated factors omitted.
    pub fn factors(&self) -> Vec<LaurentPoly2> {
        let mut out = Vec::new();
        if self.include_reducible {
            out.push(LaurentPoly2::longitude_binomial(1, 0));
        }
        for f in &self.irreducible {
            if !out.iter().any(|g: &LaurentPoly2| g.same_up_to_units(f)) {
                out.push(f.clone());
            }
        }
        out
    }

    /// Factors coming from irreducible characters only.
    pub fn irreducible(&self) -> &[LaurentPoly2] {
        &self.irreducible
    }

    pub fn include_reducible(&self) -> bool {
        self.include_reducible
    }

    pub fn expanded(&self) -> LaurentPoly2 {
        self.factors().iter().fold(LaurentPoly2::one(), |acc, f| acc.mul(f))
    }

    pub fn newton_slopes(&self) -> BTreeSet<Ratio<i64>> {
        newton_slopes(self)
    }
}

impl fmt::Display for FactoredAPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for factor in self.factors() {
            write!(f, "({factor})")?;
        }
        Ok(())
    }
}

/// A-polynomial of a connected sum. Each summand contributes its own
/// irreducible factors, and the stratum irreducible on every summand
/// contributes `L - (Π sign_i) M^{Σ exp_i}`.
pub fn compose_connected_sum(summands: &[SummandSpec]) -> Result<FactoredAPoly> {
    let mut factors = Vec::new();
    let mut sign = 1;
    let mut exp = 0;
    for s in summands {
        let rule = s
            .longitude
            .ok_or_else(|| Error::UnsupportedSummand(s.name.clone()))?;
        factors.extend(s.irreducible_factors.iter().cloned());
        sign *= rule.sign;
        exp += rule.exp;
    }
    if !summands.is_empty() {
        factors.push(LaurentPoly2::longitude_binomial(sign, exp));
    }
    Ok(FactoredAPoly::new(factors, true))
}

pub fn newton_slopes(a: &FactoredAPoly) -> BTreeSet<Ratio<i64>> {
    a.factors().iter().flat_map(|f| f.newton_slopes()).collect()
}

/// Slope whose surgery curve `M^p L^q = 1` contains the zero set of
/// `L - eps M^k` identically. Only `eps = +1` qualifies: for `eps = -1` the
/// condition forces `q` even while `p = -kq`, so `p/q` cannot be reduced.
pub fn coincident_surgery_slope(factor: &LaurentPoly2) -> Option<Slope> {
    let n = factor.normalized();
    if n.term_count() != 2 {
        return None;
    }
    let (&(m1, _), &l_coeff) = n.terms.iter().find(|(&(_, l), _)| l == 1)?;
    let (&(m0, _), &c0) = n.terms.iter().find(|(&(_, l), _)| l == 0)?;
    if l_coeff.abs() != 1 || c0.abs() != 1 {
        return None;
    }
    // factor ~ l_coeff M^{m1} L + c0 M^{m0}, so L = -(c0 / l_coeff) M^{m0 - m1}
    let eps = -c0 * l_coeff;
    let k = m0 - m1;
    (eps == 1).then(|| Slope::integral(-k))
}
