//! Exact measurement and rotation angles.
//!
//! An angle is `(num/den)·π + alpha_count·α0` where `α0` is a fixed irrational
//! multiple of π. The rational part is kept reduced modulo 2π, so two angles
//! with the same value compare equal and Pauli angles are detected exactly.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::Serialize;

/// The irrational base angle `α0`, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Alpha0(pub f64);

impl Alpha0 {
    /// `π·(√5−1)/2`.
    pub fn golden() -> Self {
        Alpha0(PI * (5f64.sqrt() - 1.0) / 2.0)
    }

    /// `α0 = (p/q)·π`, used by overrides from the command line.
    pub fn from_pi_fraction(p: i64, q: i64) -> Self {
        Alpha0(PI * p as f64 / q as f64)
    }
}

impl Default for Alpha0 {
    fn default() -> Self {
        Self::golden()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Angle {
    num: i64,
    den: i64,
    alpha_count: i64,
}

impl Angle {
    pub const ZERO: Angle = Angle {
        num: 0,
        den: 1,
        alpha_count: 0,
    };
    pub const PI: Angle = Angle {
        num: 1,
        den: 1,
        alpha_count: 0,
    };
    pub const HALF_PI: Angle = Angle {
        num: 1,
        den: 2,
        alpha_count: 0,
    };

    /// `(num/den)·π + alpha_count·α0`, canonicalised.
    ///
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64, alpha_count: i64) -> Self {
        assert!(den != 0, "angle denominator must be non-zero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        // reduce modulo 2π
        num = num.rem_euclid(2 * den);
        Angle {
            num,
            den,
            alpha_count,
        }
    }

    /// `(num/den)·π`.
    pub fn pi_fraction(num: i64, den: i64) -> Self {
        Self::new(num, den, 0)
    }

    /// `k·α0`.
    pub fn alpha0_multiple(k: i64) -> Self {
        Self::new(0, 1, k)
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn alpha_count(&self) -> i64 {
        self.alpha_count
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0 && self.alpha_count == 0
    }

    /// True for the angles `0, π/2, π, 3π/2`.
    pub fn is_pauli(&self) -> bool {
        self.alpha_count == 0 && (self.den == 1 || self.den == 2)
    }

    /// For Pauli angles, the index `k` with angle `k·π/2`.
    pub fn quarter_turns(&self) -> Option<u8> {
        if !self.is_pauli() {
            return None;
        }
        Some(((self.num * 2 / self.den) % 4) as u8)
    }

    pub fn plus_pi(self) -> Self {
        self + Angle::PI
    }

    pub fn radians(&self, alpha0: Alpha0) -> f64 {
        let r = PI * self.num as f64 / self.den as f64 + self.alpha_count as f64 * alpha0.0;
        r.rem_euclid(2.0 * PI)
    }
}

impl Default for Angle {
    fn default() -> Self {
        Angle::ZERO
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        let l = self.den.lcm(&rhs.den);
        let num = self.num * (l / self.den) + rhs.num * (l / rhs.den);
        Angle::new(num, l, self.alpha_count + rhs.alpha_count)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-self.num, self.den, -self.alpha_count)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        self + (-rhs)
    }
}

/// Canonical text form: `0`, `pi`-multiples as `p/qpi` (or `ppi` when `q = 1`),
/// followed by `+ka0` / `-ka0` when `α0` contributes.
impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")?;
        } else if self.den == 1 {
            write!(f, "{}pi", self.num)?;
        } else {
            write!(f, "{}/{}pi", self.num, self.den)?;
        }
        if self.alpha_count != 0 {
            write!(f, "{:+}a0", self.alpha_count)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_reduction() {
        assert_eq!(Angle::pi_fraction(2, 4), Angle::HALF_PI);
        assert_eq!(Angle::pi_fraction(-1, 2), Angle::pi_fraction(3, 2));
        assert_eq!(Angle::pi_fraction(5, 1), Angle::PI);
        assert_eq!(Angle::pi_fraction(1, -2), Angle::pi_fraction(3, 2));
        assert_eq!(Angle::pi_fraction(4, 2), Angle::ZERO);
    }

    #[test]
    fn pauli_detection() {
        for (n, d, k) in [(0, 1, 0u8), (1, 2, 1), (1, 1, 2), (3, 2, 3)] {
            let a = Angle::pi_fraction(n, d);
            assert!(a.is_pauli());
            assert_eq!(a.quarter_turns(), Some(k));
        }
        assert!(!Angle::pi_fraction(1, 4).is_pauli());
        assert!(!Angle::alpha0_multiple(1).is_pauli());
        assert!(!(Angle::PI + Angle::alpha0_multiple(2)).is_pauli());
    }

    #[test]
    fn arithmetic() {
        let a = Angle::pi_fraction(1, 4);
        assert_eq!(-a, Angle::pi_fraction(7, 4));
        assert_eq!(a + a, Angle::HALF_PI);
        assert_eq!(a.plus_pi(), Angle::pi_fraction(5, 4));
        let b = Angle::new(1, 3, 2);
        assert_eq!(b - b, Angle::ZERO);
        assert_eq!((-b).alpha_count(), -2);
    }

    #[test]
    fn radians_in_range() {
        let a0 = Alpha0::golden();
        let a = -Angle::alpha0_multiple(1);
        let r = a.radians(a0);
        assert!((0.0..2.0 * PI).contains(&r));
        assert!((r - (2.0 * PI - a0.0)).abs() < 1e-12);
        assert!((Angle::pi_fraction(3, 2).radians(a0) - 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn display() {
        assert_eq!(Angle::ZERO.to_string(), "0");
        assert_eq!(Angle::PI.to_string(), "1pi");
        assert_eq!(Angle::pi_fraction(1, 4).to_string(), "1/4pi");
        assert_eq!(Angle::new(1, 2, -1).to_string(), "1/2pi-1a0");
        assert_eq!(Angle::alpha0_multiple(3).to_string(), "0+3a0");
    }
}
