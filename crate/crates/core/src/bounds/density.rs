use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The proportion `delta` of comparable pairs, an exact reduced fraction in `(0, 1]`.
///
/// Guards such as `delta * (n - 1) <= 1` are decided in integer arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Density {
    num: u64,
    den: u64,
}

impl Density {
    pub fn new(num: u64, den: u64) -> Result<Density> {
        if den == 0 || num == 0 || num > den {
            return Err(Error::Range(format!("density must lie in (0, 1], got {num}/{den}")));
        }
        let g = num.gcd(&den);
        Ok(Density { num: num / g, den: den / g })
    }

    pub const ONE: Density = Density { num: 1, den: 1 };

    /// `comp / C(n, 2)`; `None` when there are no comparable pairs or `n < 2`.
    pub fn of_comp(comp: usize, n: usize) -> Option<Density> {
        let pairs = n.checked_mul(n.saturating_sub(1))? / 2;
        if comp == 0 || pairs == 0 {
            return None;
        }
        Density::new(comp as u64, pairs as u64).ok()
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `1 - delta` as a float, computed from the exact fraction.
    pub fn complement_f64(self) -> f64 {
        (self.den - self.num) as f64 / self.den as f64
    }

    /// `delta * C(n, 2)` as an exact fraction `(numerator, denominator)`.
    fn times_pairs(self, n: usize) -> (u128, u128) {
        let pairs = (n as u128) * (n.saturating_sub(1) as u128) / 2;
        (self.num as u128 * pairs, self.den as u128)
    }

    pub fn floor_times_pairs(self, n: usize) -> u128 {
        let (a, b) = self.times_pairs(n);
        a / b
    }

    pub fn ceil_times_pairs(self, n: usize) -> u128 {
        let (a, b) = self.times_pairs(n);
        a.div_ceil(b)
    }

    /// `floor((1 - delta) * C(n, 2))`, the most incomparable pairs allowed.
    pub fn floor_complement_times_pairs(self, n: usize) -> u128 {
        let pairs = (n as u128) * (n.saturating_sub(1) as u128) / 2;
        (self.den - self.num) as u128 * pairs / self.den as u128
    }

    /// `comp >= delta * C(n, 2)`.
    pub fn admits_at_least(self, comp: usize, n: usize) -> bool {
        let (a, b) = self.times_pairs(n);
        comp as u128 * b >= a
    }

    /// `comp <= delta * C(n, 2)`.
    pub fn admits_at_most(self, comp: usize, n: usize) -> bool {
        let (a, b) = self.times_pairs(n);
        comp as u128 * b <= a
    }

    /// `ceil(1 / delta)`.
    pub fn ceil_inverse(self) -> u64 {
        self.den.div_ceil(self.num)
    }

    /// `ceil(1 / (1 - delta))`; `None` at `delta = 1`.
    pub fn ceil_inverse_complement(self) -> Option<u64> {
        (self.num < self.den).then(|| self.den.div_ceil(self.den - self.num))
    }

    /// `ceil(delta * n)`.
    pub fn ceil_times(self, n: usize) -> u64 {
        (self.num as u128 * n as u128).div_ceil(self.den as u128) as u64
    }

    /// `ceil((1 - delta) * n)`.
    pub fn ceil_complement_times(self, n: usize) -> u64 {
        ((self.den - self.num) as u128 * n as u128).div_ceil(self.den as u128) as u64
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Density {
    type Err = Error;

    /// Parses `"p/q"` or a bare integer `"1"`.
    fn from_str(s: &str) -> Result<Density> {
        let bad = || Error::Parse(format!("density must look like p/q, got {s:?}"));
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        Density::new(p, q)
    }
}

impl TryFrom<String> for Density {
    type Error = Error;
    fn try_from(s: String) -> Result<Density> {
        s.parse()
    }
}

impl From<Density> for String {
    fn from(d: Density) -> String {
        d.to_string()
    }
}
