//! Counting conjugacy classes of meridional eigenvalues on surgery equations
//! `M^N = ±1`, with `M ~ M^{-1}`. Everything is exponent arithmetic; no
//! complex numbers are formed.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^n`
    pub fn parity_of(n: i64) -> Sign {
        if n.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    R,
    L,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCountSpec {
    pub exponent: u64,
    pub rhs: Sign,
    pub excluded_orders: BTreeSet<u64>,
}

impl RootCountSpec {
    pub fn new(exponent: u64, rhs: Sign, excluded: impl IntoIterator<Item = u64>) -> Self {
        RootCountSpec {
            exponent,
            rhs,
            excluded_orders: excluded.into_iter().collect(),
        }
    }

    /// Whether the primitive roots of unity of order `d` solve `M^N = rhs`.
    pub fn order_solves(&self, d: u64) -> bool {
        let n = self.exponent;
        match self.rhs {
            Sign::Plus => n % d == 0,
            // ζ^N = -1 iff ζ^N has order exactly 2, i.e. d | 2N and 2N/d is odd
            Sign::Minus => (2 * n) % d == 0 && ((2 * n) / d) % 2 == 1,
        }
    }
}

fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Number of inversion classes of primitive `d`-th roots of unity.
pub fn classes_of_order(d: u64) -> u64 {
    if d <= 2 {
        1
    } else {
        euler_phi(d) / 2
    }
}

pub fn count_conjugacy_classes(spec: &RootCountSpec) -> Result<u64> {
    let n = spec.exponent;
    if n == 0 {
        return match spec.rhs {
            Sign::Plus => Err(Error::PositiveDimensional),
            Sign::Minus => Ok(0),
        };
    }
    let solutions = n;
    let one_solves = spec.rhs == Sign::Plus;
    let minus_one_solves = Sign::parity_of(n as i64) == spec.rhs;
    let fixed = one_solves as u64 + minus_one_solves as u64;
    let classes = (solutions - fixed) / 2 + fixed;
    let excluded: u64 = spec
        .excluded_orders
        .iter()
        .filter(|&&d| d >= 1 && spec.order_solves(d))
        .map(|&d| classes_of_order(d))
        .sum();
    Ok(classes - excluded)
}

/// Multiplicative orders of the classes that survive exclusion, with class counts.
pub fn surviving_orders(spec: &RootCountSpec) -> Result<BTreeMap<u64, u64>> {
    let n = spec.exponent;
    if n == 0 {
        return match spec.rhs {
            Sign::Plus => Err(Error::PositiveDimensional),
            Sign::Minus => Ok(BTreeMap::new()),
        };
    }
    Ok((1..=2 * n)
        .filter(|&d| spec.order_solves(d) && !spec.excluded_orders.contains(&d))
        .map(|d| (d, classes_of_order(d)))
        .collect())
}

/// Characters of `p/q` surgery on a trefoil in one factor of a connected sum.
/// On the irreducible locus `L = -M^{∓6}`, so the surgery equation becomes
/// `M^{p ∓ 6q} = (-1)^q` (upper sign for the right-handed trefoil).
/// Orders 1 and 2 are always removed; `exclude_nar` also removes order 12,
/// where the Alexander polynomial vanishes at `M^2`.
pub fn trefoil_surgery_count(p: i64, q: i64, chirality: Chirality, exclude_nar: bool) -> Result<u64> {
    if q < 1 || p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let n = match chirality {
        Chirality::R => p - 6 * q,
        Chirality::L => p + 6 * q,
    };
    let mut excluded = vec![1, 2];
    if exclude_nar {
        excluded.push(12);
    }
    let spec = RootCountSpec::new(n.unsigned_abs(), Sign::parity_of(q), excluded);
    count_conjugacy_classes(&spec).map_err(|e| match e {
        Error::PositiveDimensional => {
            Error::Inconsistent(format!("trefoil surgery {p}/{q} reached a positive dimensional stratum"))
        }
        other => other,
    })
}
