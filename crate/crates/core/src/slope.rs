use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// A reduced Dehn surgery coefficient `p/q` with `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidSlope(format!("{p}/{q}: denominator must be positive")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(Slope { p, q })
    }

    /// Integral slope `p/1`.
    pub fn integral(p: i64) -> Self {
        Slope { p, q: 1 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Parity of `p`: 0 for even, 1 for odd.
    pub fn sigma(&self) -> i64 {
        self.p.rem_euclid(2)
    }

    /// `|p|` for odd `p`, `|p|/2` for even `p`.
    pub fn p_prime(&self) -> u64 {
        let a = self.p.unsigned_abs();
        if a % 2 == 1 {
            a
        } else {
            a / 2
        }
    }

    pub fn as_ratio(&self) -> Ratio<i64> {
        Ratio::new(self.p, self.q)
    }

    pub fn negated(&self) -> Self {
        Slope { p: -self.p, q: self.q }
    }

    /// All reduced slopes with `|p| <= p_max` and `1 <= q <= q_max`.
    pub fn sweep(p_max: i64, q_max: i64) -> impl Iterator<Item = Slope> {
        (-p_max..=p_max).flat_map(move |p| {
            (1..=q_max).filter_map(move |q| Slope::new(p, q).ok())
        })
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let p: i64 = num
            .parse()
            .map_err(|_| Error::InvalidSlope(format!("bad numerator in {s:?}")))?;
        if den.starts_with(['+', '-']) {
            return Err(Error::InvalidSlope(format!("denominator of {s:?} must be unsigned")));
        }
        let q: i64 = den
            .parse()
            .map_err(|_| Error::InvalidSlope(format!("bad denominator in {s:?}")))?;
        Slope::new(p, q)
    }
}

/// Parse an `a/b` rational string (or a bare integer) without requiring lowest terms.
pub fn parse_ratio(s: &str) -> std::result::Result<Ratio<i64>, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let a: i64 = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let b: i64 = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if b <= 0 {
        return Err(format!("denominator of {s:?} must be positive"));
    }
    Ok(Ratio::new(a, b))
}

pub fn format_ratio(r: &Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
