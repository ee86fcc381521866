//! Angles and spider phases.
//!
//! Two related types live here. [`Angle`] is a gate parameter as written in
//! the source program: it is never reduced modulo 2π, because controlled
//! decompositions halve their parameters and `θ/2` depends on the
//! representative. [`Phase`] is a spider phase or measurement angle, always
//! reduced into `[0, 2π)`.
//!
//! Both keep an exact rational multiple of π whenever the value allows it,
//! falling back to radians otherwise. Clifford tests only ever succeed on the
//! exact form.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::rational::Ratio;
use num::{Integer, Zero};

pub type Rational = Ratio<i64>;

fn reduce_i128(num: i128, den: i128) -> Option<Rational> {
    if den == 0 {
        return None;
    }
    let g = num.gcd(&den);
    let (mut n, mut d) = (num / g, den / g);
    if d < 0 {
        n = -n;
        d = -d;
    }
    Some(Rational::new_raw(i64::try_from(n).ok()?, i64::try_from(d).ok()?))
}

/// Overflow-checked rational addition.
pub fn checked_add(a: Rational, b: Rational) -> Option<Rational> {
    let (an, ad) = (*a.numer() as i128, *a.denom() as i128);
    let (bn, bd) = (*b.numer() as i128, *b.denom() as i128);
    reduce_i128(an.checked_mul(bd)?.checked_add(bn.checked_mul(ad)?)?, ad.checked_mul(bd)?)
}

/// Overflow-checked rational multiplication.
pub fn checked_mul(a: Rational, b: Rational) -> Option<Rational> {
    let (an, ad) = (*a.numer() as i128, *a.denom() as i128);
    let (bn, bd) = (*b.numer() as i128, *b.denom() as i128);
    reduce_i128(an.checked_mul(bn)?, ad.checked_mul(bd)?)
}

/// Overflow-checked rational division. `None` on division by zero.
pub fn checked_div(a: Rational, b: Rational) -> Option<Rational> {
    if b.is_zero() {
        return None;
    }
    checked_mul(a, Rational::new(*b.denom(), *b.numer()))
}

fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// A gate parameter, unreduced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    /// Exact rational multiple of π.
    Pi(Rational),
    /// Plain radians.
    Radians(f64),
}

impl Angle {
    pub fn zero() -> Self {
        Angle::Pi(Rational::zero())
    }

    /// `num/den · π`.
    pub fn pi_frac(num: i64, den: i64) -> Self {
        Angle::Pi(Rational::new(num, den))
    }

    pub fn radians(&self) -> f64 {
        match *self {
            Angle::Pi(r) => ratio_to_f64(r) * PI,
            Angle::Radians(x) => x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Pi(_))
    }

    /// Multiply by an exact rational factor, staying exact when possible.
    pub fn scale(self, factor: Rational) -> Self {
        match self {
            Angle::Pi(r) => match checked_mul(r, factor) {
                Some(x) => Angle::Pi(x),
                None => Angle::Radians(ratio_to_f64(r) * PI * ratio_to_f64(factor)),
            },
            Angle::Radians(x) => Angle::Radians(x * ratio_to_f64(factor)),
        }
    }

    pub fn half(self) -> Self {
        self.scale(Rational::new(1, 2))
    }

    pub fn to_phase(self) -> Phase {
        match self {
            Angle::Pi(r) => Phase::exact(r),
            Angle::Radians(x) => Phase::from_radians(x),
        }
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        if let (Angle::Pi(a), Angle::Pi(b)) = (self, rhs) {
            if let Some(s) = checked_add(a, b) {
                return Angle::Pi(s);
            }
        }
        Angle::Radians(self.radians() + rhs.radians())
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        match self {
            Angle::Pi(r) => Angle::Pi(-r),
            Angle::Radians(x) => Angle::Radians(-x),
        }
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        self + (-rhs)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Pi(r) => write_pi_fraction(f, *r),
            Angle::Radians(x) => write!(f, "{x}"),
        }
    }
}

/// A spider phase or a measurement angle, reduced into `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Phase {
    /// `r·π` with `r ∈ [0, 2)`.
    Exact(Rational),
    /// Radians in `[0, 2π)`.
    Float(f64),
}

impl Default for Phase {
    fn default() -> Self {
        Phase::zero()
    }
}

impl Phase {
    pub fn zero() -> Self {
        Phase::Exact(Rational::zero())
    }

    pub fn pi() -> Self {
        Phase::Exact(Rational::from_integer(1))
    }

    pub fn exact(r: Rational) -> Self {
        let two = 2 * *r.denom() as i128;
        let n = (*r.numer() as i128).rem_euclid(two);
        // the denominator is unchanged, so the reduced numerator always fits
        Phase::Exact(Rational::new(n as i64, *r.denom()))
    }

    /// `num/den · π`.
    pub fn pi_frac(num: i64, den: i64) -> Self {
        Phase::exact(Rational::new(num, den))
    }

    pub fn from_radians(x: f64) -> Self {
        let r = x.rem_euclid(TAU);
        Phase::Float(if r >= TAU { 0.0 } else { r })
    }

    pub fn radians(&self) -> f64 {
        match *self {
            Phase::Exact(r) => ratio_to_f64(r) * PI,
            Phase::Float(x) => x,
        }
    }

    pub fn as_ratio(&self) -> Option<Rational> {
        match *self {
            Phase::Exact(r) => Some(r),
            Phase::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Phase::Exact(_))
    }

    /// Exactly zero. Float phases never count, even `0.0`.
    pub fn is_zero(&self) -> bool {
        matches!(self, Phase::Exact(r) if r.is_zero())
    }

    /// Exactly 0 or π.
    pub fn is_pauli(&self) -> bool {
        matches!(self, Phase::Exact(r) if r.is_integer())
    }

    /// Exactly π/2 or 3π/2.
    pub fn is_proper_clifford(&self) -> bool {
        matches!(self, Phase::Exact(r) if *r.denom() == 2)
    }

    /// Exact multiple of π/2.
    pub fn is_clifford(&self) -> bool {
        self.is_pauli() || self.is_proper_clifford()
    }

    /// Anything that is not an exact multiple of π/2.
    pub fn is_non_clifford(&self) -> bool {
        !self.is_clifford()
    }

    /// Multiple of π/2 in `0..4` for Clifford phases.
    pub fn quarter_turns(&self) -> Option<u8> {
        match *self {
            Phase::Exact(r) if self.is_clifford() => Some((*(r * 2).numer()).rem_euclid(4) as u8),
            _ => None,
        }
    }

    /// Approximate equality on the circle.
    pub fn approx_eq(&self, other: &Phase, tol: f64) -> bool {
        let d = (self.radians() - other.radians()).rem_euclid(TAU);
        d.min(TAU - d) <= tol
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        if let (Phase::Exact(a), Phase::Exact(b)) = (self, rhs) {
            if let Some(s) = checked_add(a, b) {
                return Phase::exact(s);
            }
        }
        Phase::from_radians(self.radians() + rhs.radians())
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        match self {
            Phase::Exact(r) => Phase::exact(-r),
            Phase::Float(x) => Phase::from_radians(-x),
        }
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl From<Angle> for Phase {
    fn from(a: Angle) -> Phase {
        a.to_phase()
    }
}

fn write_pi_fraction(f: &mut fmt::Formatter<'_>, r: Rational) -> fmt::Result {
    let (n, d) = (*r.numer(), *r.denom());
    if n == 0 {
        return write!(f, "0");
    }
    let sign = if n.is_negative() { "-" } else { "" };
    let k = n.abs();
    match (k, d) {
        (1, 1) => write!(f, "{sign}π"),
        (_, 1) => write!(f, "{sign}{k}π"),
        (1, _) => write!(f, "{sign}π/{d}"),
        _ => write!(f, "{sign}{k}π/{d}"),
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Exact(r) => write_pi_fraction(f, *r),
            Phase::Float(x) => write!(f, "{x:.6}"),
        }
    }
}
