//! Fixed-point money amounts and currency conversion.
//!
//! Amounts are stored as integer cents. Conversions to the common currency
//! accumulate in nano-units (1e-9) and round to cents only when reported, so
//! totals are exact integer sums and independent of summation order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AmountError {
    #[error("'{0}' is not a decimal amount")]
    NotDecimal(String),
    #[error("amount '{0}' is negative")]
    Negative(String),
    #[error("amount '{0}' is too large")]
    Overflow(String),
}

/// Parsed `[-]digits[.digits]` as (mantissa, fractional digits).
fn parse_decimal(s: &str) -> Result<(i128, u32), AmountError> {
    let t = s.trim().replace(',', "");
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(&t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || frac_part.len() > 18
    {
        return Err(AmountError::NotDecimal(s.to_string()));
    }
    let digits = format!("{int_part}{frac_part}");
    let mantissa: i128 = if digits.is_empty() {
        0
    } else {
        digits
            .parse()
            .map_err(|_| AmountError::Overflow(s.to_string()))?
    };
    Ok((if neg { -mantissa } else { mantissa }, frac_part.len() as u32))
}

/// Rounds `num / den` half away from zero. `den` must be positive.
fn div_round(num: i128, den: i128) -> i128 {
    let q = num / den;
    let r = num % den;
    if 2 * r.abs() >= den {
        q + num.signum()
    } else {
        q
    }
}

/// Non-negative money amount with two fractional digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money {
    cents: i64,
}

impl Money {
    pub const ZERO: Money = Money { cents: 0 };

    pub fn from_cents(cents: i64) -> Self {
        Money { cents }
    }

    pub fn cents(&self) -> i64 {
        self.cents
    }

    pub fn checked_add(self, other: Money) -> Option<Money> {
        self.cents.checked_add(other.cents).map(Money::from_cents)
    }
}

impl std::ops::Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money::from_cents(self.cents + rhs.cents)
    }
}

impl std::ops::AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.cents += rhs.cents;
    }
}

impl std::iter::Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, |a, b| a + b)
    }
}

impl FromStr for Money {
    type Err = AmountError;

    /// Extra fractional digits are rounded half away from zero.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (mantissa, scale) = parse_decimal(s)?;
        if mantissa < 0 {
            return Err(AmountError::Negative(s.to_string()));
        }
        let cents = if scale <= 2 {
            mantissa
                .checked_mul(10i128.pow(2 - scale))
                .ok_or_else(|| AmountError::Overflow(s.to_string()))?
        } else {
            div_round(mantissa, 10i128.pow(scale - 2))
        };
        let cents = i64::try_from(cents).map_err(|_| AmountError::Overflow(s.to_string()))?;
        Ok(Money { cents })
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.cents < 0 { "-" } else { "" };
        let abs = self.cents.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Units of a currency per one unit of the common currency, kept as an exact decimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rate {
    mantissa: i128,
    scale: u32,
}

impl Rate {
    pub fn one() -> Self {
        Rate { mantissa: 1, scale: 0 }
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa > 0
    }

    pub fn as_f64(&self) -> f64 {
        self.mantissa as f64 / 10f64.powi(self.scale as i32)
    }

    /// Converts an amount into the common currency, in nano-units.
    pub fn to_common_nanos(&self, amount: Money) -> i128 {
        // amount/rate = cents * 1e7 * 10^scale / mantissa nano-units
        let num = i128::from(amount.cents) * 10_000_000 * 10i128.pow(self.scale);
        div_round(num, self.mantissa)
    }
}

impl FromStr for Rate {
    type Err = AmountError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (mantissa, scale) = parse_decimal(s)?;
        if mantissa <= 0 {
            return Err(AmountError::Negative(s.to_string()));
        }
        Ok(Rate { mantissa, scale })
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.mantissa);
        }
        let p = 10i128.pow(self.scale);
        write!(
            f,
            "{}.{:0width$}",
            self.mantissa / p,
            self.mantissa % p,
            width = self.scale as usize
        )
    }
}

impl Serialize for Rate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rounds an accumulated nano-unit total to cents.
pub fn nanos_to_money(nanos: i128) -> Money {
    Money::from_cents(div_round(nanos, 10_000_000) as i64)
}
