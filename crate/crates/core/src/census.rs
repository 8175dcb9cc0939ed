//! Components of the irreducible character schemes of surgeries on the
//! granny knot (two right-handed trefoils) and the square knot (a trefoil
//! and its mirror), plus exact checks on the cubic surface and the trefoil
//! longitude trace.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::SpaceType;
use crate::roots::{count_conjugacy_classes, surviving_orders, trefoil_surgery_count, Chirality, RootCountSpec, Sign};
use crate::slope::Slope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentType {
    Point,
    Cstar,
    CstarMinusPoint,
    SurfaceS,
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentType::Point => "Point",
            ComponentType::Cstar => "Cstar",
            ComponentType::CstarMinusPoint => "CstarMinusPoint",
            ComponentType::SurfaceS => "SurfaceS",
        })
    }
}

impl ComponentType {
    pub const ALL: [ComponentType; 4] = [
        ComponentType::Point,
        ComponentType::Cstar,
        ComponentType::CstarMinusPoint,
        ComponentType::SurfaceS,
    ];

    /// Complex dimension. The character schemes are smooth, so this is also
    /// the Zariski tangent space dimension `dim H^1(π1; ad ρ)` along the component.
    pub fn dimension(self) -> i64 {
        match self {
            ComponentType::Point => 0,
            ComponentType::Cstar | ComponentType::CstarMinusPoint => 1,
            ComponentType::SurfaceS => 2,
        }
    }

    pub fn space(self) -> SpaceType {
        match self {
            ComponentType::Point => SpaceType::Point,
            ComponentType::Cstar => SpaceType::Cstar,
            ComponentType::CstarMinusPoint => SpaceType::CstarMinusPoint,
            ComponentType::SurfaceS => SpaceType::SurfaceS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentCensus {
    pub point: u64,
    pub cstar: u64,
    pub cstar_minus_point: u64,
    pub surface_s: u64,
}

impl ComponentCensus {
    pub fn count(&self, t: ComponentType) -> u64 {
        match t {
            ComponentType::Point => self.point,
            ComponentType::Cstar => self.cstar,
            ComponentType::CstarMinusPoint => self.cstar_minus_point,
            ComponentType::SurfaceS => self.surface_s,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.surface_s <= 1 && (self.surface_s == 0 || (self.cstar == 0 && self.cstar_minus_point == 0))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("census serializes")
    }
}

impl fmt::Display for ComponentCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "points: {}, C*: {}, C*-{{1}}: {}, S: {}",
            self.point, self.cstar, self.cstar_minus_point, self.surface_s
        )
    }
}

/// Classes of `M^N = 1` on the stratum irreducible on both summands,
/// excluding `M = ±1` and, when `12 | p`, the two order-12 classes where the
/// characters are non-abelian reducible.
fn irr_irr_classes(n: i64, p: i64) -> Result<u64> {
    let mut excluded = vec![1, 2];
    if p % 12 == 0 {
        excluded.push(12);
    }
    let spec = RootCountSpec::new(n.unsigned_abs(), Sign::Plus, excluded);
    let orders = surviving_orders(&spec)?;
    if orders.contains_key(&1) || orders.contains_key(&2) {
        return Err(Error::Inconsistent(format!("class with meridional trace ±2 survived at p = {p}")));
    }
    count_conjugacy_classes(&spec)
}

fn nar_nar_components(p: i64) -> u64 {
    if p % 12 == 0 {
        2
    } else {
        0
    }
}

pub fn granny_census(s: Slope) -> Result<ComponentCensus> {
    let (p, q) = (s.p(), s.q());
    let per_summand = trefoil_surgery_count(p, q, Chirality::R, true)?;
    let point = 2 * per_summand;
    if p == 12 * q {
        assert_eq!((p, q), (12, 1));
        return Ok(ComponentCensus { point, surface_s: 1, ..Default::default() });
    }
    Ok(ComponentCensus {
        point,
        cstar: irr_irr_classes(p - 12 * q, p)?,
        cstar_minus_point: nar_nar_components(p),
        surface_s: 0,
    })
}

pub fn square_census(s: Slope) -> Result<ComponentCensus> {
    let (p, q) = (s.p(), s.q());
    let point = trefoil_surgery_count(p, q, Chirality::R, true)? + trefoil_surgery_count(p, q, Chirality::L, true)?;
    if p == 0 {
        assert_eq!(q, 1);
        return Ok(ComponentCensus { point, surface_s: 1, ..Default::default() });
    }
    Ok(ComponentCensus {
        point,
        cstar: irr_irr_classes(p, p)?,
        cstar_minus_point: nar_nar_components(p),
        surface_s: 0,
    })
}

/// `a + b√3` with rational `a`, `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct QuadExt {
    pub a: Ratio<i64>,
    pub b: Ratio<i64>,
}

impl QuadExt {
    pub fn new(a: Ratio<i64>, b: Ratio<i64>) -> Self {
        QuadExt { a, b }
    }

    pub fn int(a: i64, b: i64) -> Self {
        QuadExt { a: Ratio::from_integer(a), b: Ratio::from_integer(b) }
    }

    pub fn sqrt3() -> Self {
        QuadExt::int(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::int(n, 0)
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        QuadExt { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        QuadExt { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b }
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        QuadExt {
            a: self.a * o.a + Ratio::from_integer(3) * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√3", self.b),
            (false, false) => write!(f, "{} + {}√3", self.a, self.b),
        }
    }
}

/// Ring operations needed for exact polynomial evaluation.
pub trait ExactRing: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + From<i64> {}

impl<T> ExactRing for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + From<i64> {}

fn pow<T: ExactRing>(x: T, n: u32) -> T {
    (0..n).fold(T::from(1), |acc, _| acc * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CubicPoint {
    Smooth,
    Singular,
    NotOnSurface,
}

/// `f = x² + y² + z² + xyz - z - 2`
pub fn cubic_f<T: ExactRing>(x: T, y: T, z: T) -> T {
    x * x + y * y + z * z + x * y * z - z - T::from(2)
}

pub fn cubic_gradient<T: ExactRing>(x: T, y: T, z: T) -> [T; 3] {
    let two = T::from(2);
    [two * x + y * z, two * y + x * z, two * z + x * y - T::from(1)]
}

pub fn verify_cubic_point(x: QuadExt, y: QuadExt, z: QuadExt) -> CubicPoint {
    if !cubic_f(x, y, z).is_zero() {
        return CubicPoint::NotOnSurface;
    }
    if cubic_gradient(x, y, z).iter().all(QuadExt::is_zero) {
        CubicPoint::Singular
    } else {
        CubicPoint::Smooth
    }
}

/// Trace of the longitude of the trefoil in the plane-curve coordinates
/// `x = tr ρ(m)`, `y = tr ρ(m·a)`:
/// `x⁶y - 2x⁶ - x⁴y² - 2x⁴y + 8x⁴ + 2x²y² + x²y - 10x² + 2`.
pub fn longitude_trace<T: ExactRing>(x: T, y: T) -> T {
    let c = |n: i64| T::from(n);
    let (x2, x4, x6) = (pow(x, 2), pow(x, 4), pow(x, 6));
    let y2 = y * y;
    x6 * y - c(2) * x6 - x4 * y2 - c(2) * x4 * y + c(8) * x4 + c(2) * x2 * y2 + x2 * y - c(10) * x2 + c(2)
}
