//! Coefficient fields.
//!
//! Two realizations share the [`Scalar`] interface: exact rationals
//! ([`Rational`]) for Groebner bases and exact normal forms, and double
//! precision complex numbers ([`Complex`]) for numerical continuation and
//! eigenvalue computations. Conversion from rational to complex is always
//! explicit, through [`Scalar::to_complex`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type Complex = Complex64;

/// A coefficient field.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    /// `false` for NaN or infinite floating components. Always `true` for rationals.
    fn is_finite(&self) -> bool;

    fn to_complex(&self) -> Complex;

    /// Absolute value as a float, used for pivot selection and norms.
    fn magnitude(&self) -> f64;

    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    /// Splits a coefficient into a sign and the text of its absolute value,
    /// for canonical polynomial printing.
    fn sign_and_abs_text(&self) -> (bool, String);
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn to_complex(&self) -> Complex {
        Complex::new(rational_to_f64(self), 0.0)
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }

    fn sign_and_abs_text(&self) -> (bool, String) {
        let neg = self.is_negative();
        let a = self.abs();
        let text = if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        };
        (neg, text)
    }
}

impl Scalar for Complex {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn to_complex(&self) -> Complex {
        *self
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn sign_and_abs_text(&self) -> (bool, String) {
        if self.im == 0.0 {
            (self.re < 0.0, format!("{}", self.re.abs()))
        } else {
            (false, format!("({}{:+}*I)", self.re, self.im))
        }
    }
}

/// Converts a rational to the nearest double, falling back to a scaled
/// division when numerator or denominator overflow `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let ns = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let ds = (d >> shift).to_f64().unwrap_or(f64::NAN);
    ns / ds
}

/// Exact rational from an `f64` (every finite double is a dyadic rational).
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    BigRational::from_float(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn huge_rational_converts() {
        let big = BigInt::from(10).pow(400u32);
        let r = BigRational::new(big.clone() * 3, big);
        assert!((rational_to_f64(&r) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn complex_finiteness() {
        assert!(Complex::new(1.0, 2.0).is_finite());
        assert!(!Complex::new(f64::NAN, 0.0).is_finite());
        assert!(!Complex::new(0.0, f64::INFINITY).is_finite());
    }

    #[test]
    fn coefficient_text() {
        assert_eq!(rat(-7, 5).sign_and_abs_text(), (true, "7/5".to_string()));
        assert_eq!(rat(3, 1).sign_and_abs_text(), (false, "3".to_string()));
    }
}
