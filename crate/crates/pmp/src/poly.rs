//! Distribution polynomials with exact nonnegative big-integer coefficients.
//!
//! A `DistPoly` stores P(x) = sum c_e x^e densely, lowest exponent first,
//! with trailing zero coefficients trimmed. For a statistic distribution over
//! S_n the coefficients sum to n!.

use std::fmt;
use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DistPoly {
    coeffs: Vec<BigUint>,
}

impl DistPoly {
    pub fn zero() -> Self {
        DistPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DistPoly::constant(1)
    }

    pub fn constant(c: u64) -> Self {
        DistPoly::from_biguints(vec![BigUint::from(c)])
    }

    /// c0 + c1 x.
    pub fn linear(c0: u64, c1: u64) -> Self {
        DistPoly::from_biguints(vec![BigUint::from(c0), BigUint::from(c1)])
    }

    /// Builds from a dense histogram (index = exponent).
    pub fn from_counts(counts: &[u64]) -> Self {
        DistPoly::from_biguints(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn from_biguints(coeffs: Vec<BigUint>) -> Self {
        let mut poly = DistPoly { coeffs };
        poly.trim();
        poly
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of x^e (zero beyond the stored length).
    pub fn coeff(&self, e: usize) -> BigUint {
        self.coeffs.get(e).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> BigUint {
        self.coeff(0)
    }

    /// (degree, leading coefficient); None for the zero polynomial.
    pub fn leading(&self) -> Option<(usize, &BigUint)> {
        self.coeffs.last().map(|c| (self.coeffs.len() - 1, c))
    }

    /// Value at x = 1; for a distribution this is the number of permutations.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// self * c x^k, exact.
    pub fn times_monomial(&self, c: u64, k: usize) -> Self {
        if c == 0 || self.is_zero() {
            return DistPoly::zero();
        }
        let c = BigUint::from(c);
        let mut coeffs = vec![BigUint::zero(); k];
        coeffs.extend(self.coeffs.iter().map(|a| a * &c));
        DistPoly::from_biguints(coeffs)
    }

    /// Full product, exact convolution.
    pub fn mul(&self, other: &DistPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return DistPoly::zero();
        }
        let mut coeffs = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        DistPoly::from_biguints(coeffs)
    }

    /// Decimal coefficient strings, lowest exponent first (the JSON form).
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_coeff_strings<S: AsRef<str>>(strings: &[S]) -> Result<Self> {
        let coeffs = strings
            .iter()
            .map(|s| {
                s.as_ref()
                    .parse::<BigUint>()
                    .map_err(|e| Error::Parse(format!("bad coefficient {:?}: {e}", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DistPoly::from_biguints(coeffs))
    }
}

impl AddAssign<&DistPoly> for DistPoly {
    fn add_assign(&mut self, rhs: &DistPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigUint::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

/// Human form: "1430 + 5536x + 10232x^2 + ...". The zero polynomial is "0".
impl fmt::Display for DistPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => f.write_str("x")?,
                1 => write!(f, "{c}x")?,
                _ if c.is_one() => write!(f, "x^{e}")?,
                _ => write!(f, "{c}x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DistPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DistPoly({self})")
    }
}

impl Serialize for DistPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeff_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DistPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        DistPoly::from_coeff_strings(&strings).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_trim() {
        assert!(DistPoly::zero().is_zero());
        assert_eq!(DistPoly::from_counts(&[5, 1, 0, 0]).degree(), Some(1));
        assert_eq!(DistPoly::constant(0), DistPoly::zero());
        assert_eq!(DistPoly::from_counts(&[]).degree(), None);
    }

    #[test]
    fn arithmetic() {
        let p = DistPoly::from_counts(&[5, 1]);
        let mut q = DistPoly::from_counts(&[1, 2, 3]);
        q += &p;
        assert_eq!(q, DistPoly::from_counts(&[6, 3, 3]));

        // (5 + x) * 2x = 10x + 2x^2
        assert_eq!(p.times_monomial(2, 1), DistPoly::from_counts(&[0, 10, 2]));
        assert_eq!(p.times_monomial(0, 3), DistPoly::zero());

        // (1 + x)^2 = 1 + 2x + x^2
        let b = DistPoly::linear(1, 1);
        assert_eq!(b.mul(&b), DistPoly::from_counts(&[1, 2, 1]));
        assert_eq!(b.mul(&DistPoly::zero()), DistPoly::zero());

        assert_eq!(p.total(), 6u32.into());
        assert_eq!(p.coeff(0), 5u32.into());
        assert_eq!(p.coeff(7), 0u32.into());
        assert_eq!(p.leading().unwrap().0, 1);
    }

    #[test]
    fn rendering() {
        assert_eq!(DistPoly::zero().to_string(), "0");
        assert_eq!(DistPoly::from_counts(&[5, 1]).to_string(), "5 + x");
        assert_eq!(
            DistPoly::from_counts(&[14, 8, 2]).to_string(),
            "14 + 8x + 2x^2"
        );
        assert_eq!(DistPoly::from_counts(&[0, 0, 1]).to_string(), "x^2");
        assert_eq!(DistPoly::from_counts(&[2]).to_string(), "2");
    }

    #[test]
    fn string_roundtrip() {
        let p = DistPoly::from_counts(&[1430, 5536, 10232, 11264, 7814, 3324, 720]);
        let strings = p.coeff_strings();
        assert_eq!(DistPoly::from_coeff_strings(&strings).unwrap(), p);
        assert!(DistPoly::from_coeff_strings(&["12x"]).is_err());

        let json = serde_json::to_string(&p).unwrap();
        let back: DistPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
