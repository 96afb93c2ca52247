use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// A positive quantity held as its base-2 logarithm.
///
/// Adding two values multiplies the quantities. Quantities such as
/// `n! * 2^(-c n)` for `n` in the millions stay representable.
#[derive(Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LogValue(f64);

const SUMMED_FACTORIALS: usize = 10_000;

fn log2_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(SUMMED_FACTORIALS + 1);
        let mut acc = 0.0;
        t.push(0.0);
        for k in 1..=SUMMED_FACTORIALS {
            acc += (k as f64).log2();
            t.push(acc);
        }
        t
    })
}

/// `ln n!` by the Stirling series; the truncation error is below `1/(1680 n^7)`.
fn ln_factorial_stirling(n: f64) -> f64 {
    let inv = 1.0 / n;
    let inv2 = inv * inv;
    n * n.ln() - n + 0.5 * (2.0 * PI * n).ln() + inv / 12.0 - inv * inv2 / 360.0
        + inv * inv2 * inv2 / 1260.0
}

impl LogValue {
    pub const ONE: LogValue = LogValue(0.0);

    pub fn new(log2: f64) -> LogValue {
        LogValue(log2)
    }

    /// The log of a positive `x`.
    pub fn of(x: f64) -> LogValue {
        debug_assert!(x > 0.0);
        LogValue(x.log2())
    }

    pub fn from_ln(ln: f64) -> LogValue {
        LogValue(ln / LN_2)
    }

    pub fn log2(self) -> f64 {
        self.0
    }

    pub fn ln(self) -> f64 {
        self.0 * LN_2
    }

    /// The quantity itself; overflows to infinity for large logs.
    pub fn value(self) -> f64 {
        self.0.exp2()
    }

    /// `log2 n!`, summed exactly up to 10^4 and by Stirling beyond.
    pub fn log2_factorial(n: usize) -> LogValue {
        if n <= SUMMED_FACTORIALS {
            LogValue(log2_factorial_table()[n])
        } else {
            LogValue::from_ln(ln_factorial_stirling(n as f64))
        }
    }

    /// `log2 (n! / prod parts_i!)`, the number of linear extensions of disjoint chains.
    pub fn log2_multinomial(parts: &[usize]) -> LogValue {
        let n = parts.iter().sum();
        parts.iter().fold(LogValue::log2_factorial(n), |acc, &p| acc - LogValue::log2_factorial(p))
    }

    /// `log2 prod parts_i!`, the number of linear extensions of stacked antichains.
    pub fn log2_factorial_product(parts: &[usize]) -> LogValue {
        parts.iter().map(|&p| LogValue::log2_factorial(p)).fold(LogValue::ONE, Add::add)
    }

    /// The `n`-th root of the quantity.
    pub fn root(self, n: usize) -> LogValue {
        LogValue(self.0 / n as f64)
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        LogValue(self.0 + rhs.0)
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        LogValue(self.0 - rhs.0)
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue(-self.0)
    }
}

/// Raises the quantity to a real power.
impl Mul<f64> for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: f64) -> LogValue {
        LogValue(self.0 * rhs)
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials_are_exact() {
        assert_eq!(LogValue::log2_factorial(0).log2(), 0.0);
        assert_eq!(LogValue::log2_factorial(1).log2(), 0.0);
        assert!((LogValue::log2_factorial(5).value() - 120.0).abs() < 1e-9);
        assert!((LogValue::log2_factorial(10).value() - 3628800.0).abs() < 1e-6);
    }

    #[test]
    fn stirling_joins_the_summed_table() {
        for n in [2_000usize, 5_000, 10_000] {
            let summed = LogValue::log2_factorial(n).ln();
            let series = ln_factorial_stirling(n as f64);
            assert!((summed - series).abs() < 1e-9, "n={n}: {summed} vs {series}");
        }
        // continuity across the switch
        let a = LogValue::log2_factorial(SUMMED_FACTORIALS).log2();
        let b = LogValue::log2_factorial(SUMMED_FACTORIALS + 1).log2();
        assert!((b - a - ((SUMMED_FACTORIALS + 1) as f64).log2()).abs() < 1e-9);
    }

    #[test]
    fn multinomials() {
        assert!((LogValue::log2_multinomial(&[3, 3]).value() - 20.0).abs() < 1e-9);
        assert!((LogValue::log2_factorial_product(&[1, 4, 1]).value() - 24.0).abs() < 1e-9);
    }
}
