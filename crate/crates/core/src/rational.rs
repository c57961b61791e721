//! Exact rational arithmetic used for every combinatorial value and theorem
//! identity.

use num_traits::{One, Signed, Zero};


pub type Rational = num_rational::Ratio<i64>;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

pub fn to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

/// Exact conversion of a finite `f64` into a rational.
///
/// Every finite double is a dyadic rational; this returns `None` when the
/// reduced numerator or the power-of-two denominator does not fit in `i64`.
pub fn from_f64_exact(value: f64) -> Option<Rational> {
    if !value.is_finite() {
        return None;
    }
    if value == 0.0 {
        return Some(Rational::zero());
    }
    let bits = value.to_bits();
    let negative = bits >> 63 == 1;
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mut mantissa, mut exp) = if exponent == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), exponent - 1075)
    };
    let shift = mantissa.trailing_zeros() as i64;
    mantissa >>= shift;
    exp += shift;
    let magnitude = if exp >= 0 {
        if exp >= 63 || mantissa > (i64::MAX as u64) >> exp {
            return None;
        }
        Rational::from_integer((mantissa << exp) as i64)
    } else {
        if -exp >= 63 {
            return None;
        }
        Rational::new_raw(mantissa as i64, 1i64 << (-exp))
    };
    Some(if negative { -magnitude } else { magnitude })
}

/// Renders `value` as `n` or `n/d`.
pub fn display(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `n`, `-n` or `n/d`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => text.parse::<i64>().ok().map(Rational::from_integer),
    }
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// Serde adapter writing a rational as `[numerator, denominator]` and
/// normalizing on read.
pub mod pair {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        (*value.numer(), *value.denom()).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let (numer, denom) = <(i64, i64)>::deserialize(deserializer)?;
        if denom == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(numer, denom))
    }
}

/// [`pair`] for `Option<Rational>`; `None` is `null`.
pub mod opt_pair {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(value: &Option<Rational>, serializer: S) -> Result<S::Ok, S::Error> {
        value.map(|v| (*v.numer(), *v.denom())).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Option<Rational>, D::Error> {
        match <Option<(i64, i64)>>::deserialize(deserializer)? {
            None => Ok(None),
            Some((_, 0)) => Err(serde::de::Error::custom("zero denominator")),
            Some((n, d)) => Ok(Some(Rational::new(n, d))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_conversion_of_dyadics() {
        assert_eq!(from_f64_exact(0.5), Some(frac(1, 2)));
        assert_eq!(from_f64_exact(-3.0), Some(int(-3)));
        assert_eq!(from_f64_exact(0.375), Some(frac(3, 8)));
        assert_eq!(from_f64_exact(f64::NAN), None);
        assert_eq!(from_f64_exact(1e300), None);
        // 0.1 is a dyadic with a 2^55 denominator; it still fits.
        let tenth = from_f64_exact(0.1).unwrap();
        assert_eq!(to_f64(&tenth), 0.1);
        assert!(tenth != frac(1, 10));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(parse("3/2"), Some(frac(3, 2)));
        assert_eq!(parse("-4"), Some(int(-4)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(display(&frac(6, 4)), "3/2");
        assert_eq!(display(&int(7)), "7");
    }
}
