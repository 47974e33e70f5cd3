use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Non-negative rational action or plan cost.
///
/// PDDL action costs are written as decimal literals, so every value parsed
/// from text has a terminating decimal expansion and prints back exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cost(Rational64);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid cost literal '{0}'")]
pub struct CostParseError(pub String);

impl Cost {
    pub const ZERO: Cost = Cost(Rational64::new_raw(0, 1));
    pub const ONE: Cost = Cost(Rational64::new_raw(1, 1));

    pub fn from_integer(n: u32) -> Self {
        Cost(Rational64::from_integer(n as i64))
    }

    /// Builds `numer / denom`; `None` for a zero denominator or a negative value.
    pub fn from_ratio(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        let r = Rational64::new(numer, denom);
        if r < Rational64::from_integer(0) {
            None
        } else {
            Some(Cost(r))
        }
    }

    pub fn is_zero(&self) -> bool {
        *self.0.numer() == 0
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.0.is_integer().then(|| self.0.to_integer())
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, |a, b| a + b)
    }
}

impl FromStr for Cost {
    type Err = CostParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CostParseError(s.to_string());
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        let digits_ok = |p: &str| p.chars().all(|c| c.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty()) || !digits_ok(int_part) || !digits_ok(frac_part) {
            return Err(err());
        }
        if frac_part.len() > 12 {
            return Err(err());
        }
        let int_val: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| err())? };
        let denom = 10i64.pow(frac_part.len() as u32);
        let frac_val: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| err())? };
        let numer = int_val.checked_mul(denom).and_then(|v| v.checked_add(frac_val)).ok_or_else(err)?;
        Ok(Cost(Rational64::new(numer, denom)))
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        // Exact decimal expansion when the reduced denominator is 2^a * 5^b.
        let mut denom = *self.0.denom();
        let (mut twos, mut fives) = (0u32, 0u32);
        while denom % 2 == 0 {
            denom /= 2;
            twos += 1;
        }
        while denom % 5 == 0 {
            denom /= 5;
            fives += 1;
        }
        if denom != 1 {
            return write!(f, "{}", self.to_f64());
        }
        let places = twos.max(fives);
        let scale = 10i64.pow(places);
        let scaled = *self.0.numer() * (scale / *self.0.denom());
        let int_part = scaled / scale;
        let frac = scaled % scale;
        let frac = format!("{:0width$}", frac, width = places as usize);
        write!(f, "{}.{}", int_part, frac.trim_end_matches('0'))
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
