//! Free-fermion two-point function on the half-filled ring.
//!
//! `G₀(x) = <a⁺_{i+x} a_i> = sin(πx/2) / (L sin(πx/L))` on a ring of length
//! `L`, and `sin(πx/2) / (πx)` in the thermodynamic limit.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Length of a ring that hosts a non-degenerate half-filled ground state:
/// even, with `M = L/2` odd, and at least 6 sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring(usize);

impl Ring {
    pub fn new(len: usize) -> Result<Self> {
        if len % 4 != 2 {
            return Err(domain(format!(
                "L = {len}: L must satisfy L/2 odd (L = 2 mod 4)"
            )));
        }
        if len < 6 {
            return Err(domain(format!("L = {len}: ring must have at least 6 sites")));
        }
        Ok(Ring(len))
    }

    pub fn len(self) -> usize {
        self.0
    }

    /// Number of up spins (fermions) in the half-filled sector.
    pub fn filling(self) -> usize {
        self.0 / 2
    }

    /// Smallest admissible ring with at least `len` sites.
    pub fn at_least(len: usize) -> Ring {
        let mut l = len.max(6);
        while l % 4 != 2 {
            l += 1;
        }
        Ring(l)
    }
}

/// The domain every route is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lattice {
    Finite(Ring),
    Infinite,
}

impl Lattice {
    pub fn finite(len: usize) -> Result<Self> {
        Ring::new(len).map(Lattice::Finite)
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            Lattice::Finite(r) => Some(r.len()),
            Lattice::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Lattice::Infinite)
    }

    /// Checks `1 <= x` and, on a ring, `x <= L - 1`.
    pub fn check_distance(&self, x: usize) -> Result<()> {
        if x == 0 {
            return Err(domain("distance must be at least 1"));
        }
        if let Lattice::Finite(r) = self {
            if x >= r.len() {
                return Err(domain(format!(
                    "distance {x} out of range for L = {} (need x <= L - 1)",
                    r.len()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lattice::Finite(r) => write!(f, "{}", r.len()),
            Lattice::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Lattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Lattice::Infinite);
        }
        let len: usize = s
            .parse()
            .map_err(|_| domain(format!("cannot parse lattice length {s:?}")))?;
        Lattice::finite(len)
    }
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Lattice::Finite(r) => serializer.serialize_u64(r.len() as u64),
            Lattice::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// `sin(π p / q)` with the argument reduced exactly in integers first, so
/// the float argument never exceeds π/2.
pub fn sin_pi_ratio(p: i64, q: i64) -> f64 {
    debug_assert!(q > 0);
    let period = 2 * q;
    let mut r = p.rem_euclid(period);
    let mut sign = 1.0;
    if r >= q {
        r -= q;
        sign = -1.0;
    }
    let r = r.min(q - r);
    sign * (PI * r as f64 / q as f64).sin()
}

/// `sin(πx/2)` for integer `x`, which is exactly one of 0, ±1.
fn sin_half_pi(x: i64) -> f64 {
    match x.rem_euclid(4) {
        1 => 1.0,
        3 => -1.0,
        _ => 0.0,
    }
}

/// Free-fermion Green function `G₀(x)`.
///
/// `x = 0` returns the half-filling density 1/2; every other even distance
/// returns exactly 0.
pub fn g0(x: i64, lattice: Lattice) -> Result<f64> {
    if let Lattice::Finite(r) = lattice {
        let l = r.len() as i64;
        if x <= -l || x >= l {
            return Err(domain(format!("G0 distance {x} outside (-L, L) for L = {l}")));
        }
    }
    Ok(g0_unchecked(x, lattice))
}

pub(crate) fn g0_unchecked(x: i64, lattice: Lattice) -> f64 {
    if x == 0 {
        return 0.5;
    }
    let num = sin_half_pi(x);
    if num == 0.0 {
        return 0.0;
    }
    match lattice {
        Lattice::Finite(r) => {
            let l = r.len() as i64;
            num / (l as f64 * sin_pi_ratio(x, l))
        }
        Lattice::Infinite => num / (PI * x as f64),
    }
}

/// Wick contraction `<B_i A_j> = 2 G₀(i - j) - δ_ij` with
/// `A = a⁺ + a`, `B = a⁺ - a`. At half filling the on-site value is 0.
pub fn contraction(r: i64, lattice: Lattice) -> f64 {
    if r == 0 {
        0.0
    } else {
        2.0 * g0_unchecked(r, lattice)
    }
}
