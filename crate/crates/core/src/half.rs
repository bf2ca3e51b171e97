//! Exact half-integer arithmetic for spin quantum numbers.

use core::fmt;
use core::ops::{Add, Sub};
use core::str::FromStr;

/// A non-negative or negative multiple of 1/2, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub const ZERO: Self = Self(0);
    pub const HALF: Self = Self(1);
    pub const ONE: Self = Self(2);

    pub const fn from_doubled(doubled: i64) -> Self {
        Self(doubled)
    }

    pub const fn from_int(value: i64) -> Self {
        Self(2 * value)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn abs(self) -> Self {
        Self(self.0.abs())
    }

    /// `S(S+1)`, the Casimir eigenvalue of a spin-`S` multiplet.
    pub fn casimir(self) -> f64 {
        let s = self.value();
        s * (s + 1.0)
    }

    /// `2S + 1`.
    pub fn multiplet_size(self) -> usize {
        debug_assert!(self.0 >= 0);
        (self.0 + 1) as usize
    }
}

impl Add for HalfInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for HalfInteger {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl core::iter::Sum for HalfInteger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        Self(iter.map(|h| h.0).sum())
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseHalfIntegerError;

impl fmt::Display for ParseHalfIntegerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected an integer or a fraction with denominator 2, like \"3/2\"")
    }
}

impl core::error::Error for ParseHalfIntegerError {}

/// Accepts `"3"`, `"-1"`, `"3/2"` and `"4/2"`; never decimals.
impl FromStr for HalfInteger {
    type Err = ParseHalfIntegerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.split_once('/') {
            Some((num, den)) => {
                let den: i64 = den.trim().parse().map_err(|_| ParseHalfIntegerError)?;
                let num: i64 = num.trim().parse().map_err(|_| ParseHalfIntegerError)?;
                match den {
                    1 => Ok(Self(2 * num)),
                    2 => Ok(Self(num)),
                    _ => Err(ParseHalfIntegerError),
                }
            }
            None => s
                .parse::<i64>()
                .map(Self::from_int)
                .map_err(|_| ParseHalfIntegerError),
        }
    }
}
