//! Closed-form bounds on the number of linear extensions of an `n`-point
//! poset whose comparable pairs make up a proportion `delta` of all pairs.
//!
//! Upper bounds apply to posets with `comp >= delta * C(n,2)`, lower bounds
//! to posets with `comp <= delta * C(n,2)`. All values are `log2` of the
//! bound; exact extremal values are returned as exact integers where the
//! value is an integer.

mod construction;
mod density;
mod log;
mod report;

use std::f64::consts::{E, LOG2_E};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

pub use construction::{construction_bounds_check, ConstructionCheck, ConstructionReport, Inequality, CONSTRUCTION_TOLERANCE};
pub use density::Density;
pub use log::LogValue;
pub use report::{bounds_report, bounds_report_with_count, formula_report, BoundsReport, FormulaReport, SANDWICH_TOLERANCE};

use crate::count::{factorial, BigCount};
use crate::error::{Error, Result};
use crate::poset::Poset;

/// The constant of the martingale bound, `log2(e) / 32`.
pub const MARTINGALE_C: f64 = LOG2_E / 32.0;

fn require_points(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Range("n must be positive".into()));
    }
    Ok(())
}

fn require_below_one(delta: Density, what: &str) -> Result<()> {
    if delta.is_one() {
        return Err(Error::Range(format!("{what} needs delta < 1")));
    }
    Ok(())
}

/// `log2(n!) - MARTINGALE_C * delta^2 * n`.
pub fn bound_martingale_upper(n: usize, delta: Density) -> Result<LogValue> {
    require_points(n)?;
    let d = delta.as_f64();
    Ok(LogValue::log2_factorial(n) - LogValue::new(MARTINGALE_C * d * d * n as f64))
}

/// `log2[n! * e^(2/(1-delta)) * (e(1-delta)/2)^n]`, from the back-degree product.
pub fn bound_incomp_upper(n: usize, delta: Density) -> Result<LogValue> {
    require_points(n)?;
    require_below_one(delta, "the back-degree bound")?;
    let c = delta.complement_f64();
    Ok(LogValue::log2_factorial(n)
        + LogValue::new(2.0 / c * LOG2_E)
        + LogValue::of(E * c / 2.0) * n as f64)
}

/// `2^floor((1-delta) C(n,2))`: at most that many linear extensions for any
/// admissible poset, and exactly the maximum when `(1-delta) C(n,2) <= n/2`.
pub fn bound_incomparable_pairs_upper(n: usize, delta: Density) -> Result<LogValue> {
    require_points(n)?;
    Ok(LogValue::new(delta.floor_complement_times_pairs(n) as f64))
}

/// The exact maximum `f+(n, delta)` in the very dense regime.
pub fn fplus_dense_exact(n: usize, delta: Density) -> Result<BigCount> {
    require_points(n)?;
    // (1 - delta) C(n,2) <= n/2  <=>  (den - num) n (n-1) <= den n
    let lhs = (delta.den() - delta.num()) as u128 * n as u128 * (n as u128 - 1);
    let rhs = delta.den() as u128 * n as u128;
    if lhs > rhs {
        return Err(Error::Precondition(format!(
            "(1-delta)*C(n,2) > n/2 for n = {n}, delta = {delta}: only the upper bound 2^floor((1-delta)C(n,2)) applies"
        )));
    }
    let i = delta.floor_complement_times_pairs(n) as usize;
    Ok(BigCount(BigUint::one() << i))
}

/// `(1 - delta) n / 2`, from level sizes `r_i! >= 2^(r_i - 1)`.
pub fn bound_half_lower(n: usize, delta: Density) -> Result<LogValue> {
    require_points(n)?;
    require_below_one(delta, "the level-structure bound")?;
    Ok(LogValue::new(delta.complement_f64() * n as f64 / 2.0))
}

/// `log2[n! (2 / (delta (n-1) + 2))^n]`, hook lengths plus AM-GM.
pub fn bound_hook_lower(n: usize, delta: Density) -> Result<LogValue> {
    require_points(n)?;
    let d = delta.as_f64();
    Ok(LogValue::log2_factorial(n) + LogValue::of(2.0 / (d * (n as f64 - 1.0) + 2.0)) * n as f64)
}

/// The weaker closed form `e^(1 - 2/delta) (2 / (e delta))^n`.
pub fn bound_hook_lower_simplified(n: usize, delta: Density) -> Result<LogValue> {
    require_points(n)?;
    let d = delta.as_f64();
    Ok(LogValue::new((1.0 - 2.0 / d) * LOG2_E) + LogValue::of(2.0 / (E * d)) * n as f64)
}

/// `log2(n!) - comp(P)`: every poset has at least `n! 2^-comp` extensions.
pub fn bound_iriarte_lower(p: &Poset) -> LogValue {
    LogValue::log2_factorial(p.n()) - LogValue::new(p.comp() as f64)
}

/// `log2(n!) - comp(P) log2(e)`, the weaker `n! e^-comp` form.
pub fn bound_sparse_exp_lower(p: &Poset) -> LogValue {
    LogValue::log2_factorial(p.n()) - LogValue::new(p.comp() as f64 * LOG2_E)
}

fn sparse_exponent(n: usize, delta: Density) -> Result<usize> {
    require_points(n)?;
    // delta (n - 1) <= 1  <=>  num (n - 1) <= den
    if delta.num() as u128 * (n as u128).saturating_sub(1) > delta.den() as u128 {
        return Err(Error::Precondition(format!(
            "delta*(n-1) > 1 for n = {n}, delta = {delta}: exact sparse formula inapplicable"
        )));
    }
    // A matching with floor(delta C(n,2)) <= n/2 edges attains the minimum.
    Ok(delta.floor_times_pairs(n) as usize)
}

/// `log2 f-(n, delta) = log2(n!) - floor(delta C(n,2))` when `delta (n-1) <= 1`.
pub fn fminus_sparse_exact(n: usize, delta: Density) -> Result<LogValue> {
    let j = sparse_exponent(n, delta)?;
    Ok(LogValue::log2_factorial(n) - LogValue::new(j as f64))
}

/// `f-(n, delta) = n! / 2^floor(delta C(n,2))` as an exact integer.
pub fn fminus_sparse_exact_count(n: usize, delta: Density) -> Result<BigCount> {
    let j = sparse_exponent(n, delta)?;
    Ok(BigCount(factorial(n) >> j))
}

/// `log2 e(P) <= n log2 width(P)`.
pub fn bound_width_upper(p: &Poset) -> LogValue {
    LogValue::of(p.width() as f64) * p.n() as f64
}

/// `log2 e(P) >= log2(n!) - n log2 height(P)`.
pub fn bound_height_lower(p: &Poset) -> LogValue {
    LogValue::log2_factorial(p.n()) - LogValue::of(p.height() as f64) * p.n() as f64
}

/// `log2 prod (x_v + 1)` where `x_v` counts the points before `v` (by
/// label) that are incomparable to `v`.
pub fn bound_back_degree_upper(p: &Poset) -> LogValue {
    let total = (0..p.n())
        .map(|v| {
            let back = (0..v).filter(|&u| !p.comparable(u, v)).count();
            ((back + 1) as f64).log2()
        })
        .sum();
    LogValue::new(total)
}

/// The four rate constants with the ranges of `n` they are stated for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CConstants {
    /// Lower constant for `(f+ / n!)^(1/n)`.
    pub c1: f64,
    /// Upper constant for `(f+ / n!)^(1/n)`, valid for `n >= c2_min_n`.
    pub c2: f64,
    /// Lower constant for `f-^(1/n)`.
    pub c3: f64,
    /// Upper constant for `f-^(1/n)`, valid for `n >= c4_min_n`.
    pub c4: f64,
    /// `6 / (1 - delta)`.
    pub c2_min_n: f64,
    /// `1 / (1 - delta)`.
    pub c4_min_n: f64,
}

pub fn c_constants(delta: Density) -> Result<CConstants> {
    require_below_one(delta, "the rate constants")?;
    let d = delta.as_f64();
    let one_minus = delta.complement_f64();
    let antichain_rate = one_minus / (2.0 - d);
    let c1 = if 2 * delta.num() <= delta.den() {
        antichain_rate.max((2.0 * d / E).powf(2.0 * d))
    } else {
        antichain_rate
    };
    let c2 = (-MARTINGALE_C * d * d).exp2().min(2.0 * one_minus);
    let c3 = (0.5 * one_minus).exp2().max(1.0 / (2.0 * d));
    let ceil_inv = delta.ceil_inverse() as f64;
    let c4 = if 2 * delta.num() < delta.den() {
        ceil_inv
    } else {
        ceil_inv.min((E / (2.0 * one_minus)).powf(2.0 * one_minus))
    };
    Ok(CConstants { c1, c2, c3, c4, c2_min_n: 6.0 / one_minus, c4_min_n: 1.0 / one_minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{antichain_example, balanced_antichain, balanced_chain, chain_example, Partition};
    use crate::count::count_extensions;

    fn dens(num: u64, den: u64) -> Density {
        Density::new(num, den).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn martingale_examples() {
        let b = bound_martingale_upper(32, Density::ONE).unwrap();
        assert!(close(b.log2(), LogValue::log2_factorial(32).log2() - LOG2_E));
        let chain = bound_martingale_upper(6, Density::ONE).unwrap();
        assert!(chain.log2() >= 0.0);
        let tiny = bound_martingale_upper(10, dens(1, 45)).unwrap();
        let correction = (1.0 / 45.0f64).powi(2) * 10.0 * LOG2_E / 32.0;
        assert!(close(tiny.log2(), LogValue::log2_factorial(10).log2() - correction));
    }

    #[test]
    fn incomp_examples() {
        let b = bound_incomp_upper(6, dens(1, 2)).unwrap();
        let direct = (720.0 * E.powi(4) * (E / 4.0).powi(6)).log2();
        assert!(close(b.log2(), direct));
        // A(3,3) has e = 36 and density 9/15
        let p = antichain_example(&Partition::new(vec![3, 3]).unwrap());
        assert_eq!(Density::of_comp(p.comp(), 6), Some(dens(3, 5)));
        assert!(bound_incomp_upper(6, dens(3, 5)).unwrap().log2() >= 36f64.log2());
        assert!(matches!(bound_incomp_upper(6, Density::ONE), Err(Error::Range(_))));
    }

    #[test]
    fn dense_exact_examples() {
        assert_eq!(fplus_dense_exact(6, dens(13, 15)).unwrap(), BigCount::from(4u64));
        assert_eq!(fplus_dense_exact(5, Density::ONE).unwrap(), BigCount::from(1u64));
        assert!(matches!(fplus_dense_exact(6, dens(1, 2)), Err(Error::Precondition(_))));
        // n/2 boundary: n = 6, three incomparable pairs allowed exactly
        assert_eq!(fplus_dense_exact(6, dens(12, 15)).unwrap(), BigCount::from(8u64));
        assert!(fplus_dense_exact(6, dens(11, 15)).is_err());
    }

    #[test]
    fn half_examples() {
        assert!(close(bound_half_lower(10, dens(1, 2)).unwrap().log2(), 2.5));
        let p = chain_example(&Partition::new(vec![5, 5]).unwrap());
        let delta = Density::of_comp(p.comp(), 10).unwrap();
        assert_eq!(delta, dens(20, 45));
        let e = count_extensions(&p).unwrap();
        assert_eq!(e, BigCount::from(252u64));
        assert!(bound_half_lower(10, delta).unwrap().log2() <= e.log2());
        assert!(bound_half_lower(10, Density::ONE).is_err());
    }

    #[test]
    fn hook_formula_examples() {
        let b = bound_hook_lower(5, Density::ONE).unwrap();
        assert!(close(b.value(), 120.0 * (2.0f64 / 6.0).powi(5)));
        for n in 1..10 {
            assert!(bound_hook_lower(n, Density::ONE).unwrap().log2() <= 1e-12);
            let strong = bound_hook_lower(n, dens(1, 3)).unwrap();
            let weak = bound_hook_lower_simplified(n, dens(1, 3)).unwrap();
            assert!(weak.log2() <= strong.log2() + 1e-12);
        }
    }

    #[test]
    fn iriarte_and_sparse_examples() {
        let matching = Poset::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(count_extensions(&matching).unwrap(), BigCount::from(6u64));
        assert!(close(bound_iriarte_lower(&matching).value(), 6.0));
        let single = Poset::new(3, &[(0, 1)]).unwrap();
        assert!(close(bound_iriarte_lower(&single).value(), 3.0));
        assert!(close(fminus_sparse_exact(6, dens(3, 15)).unwrap().value(), 90.0));
        assert_eq!(fminus_sparse_exact_count(6, dens(3, 15)).unwrap(), BigCount::from(90u64));
        // delta C(5,2) = 2.5 is not an integer: at most two comparable pairs.
        assert_eq!(fminus_sparse_exact_count(5, dens(1, 4)).unwrap(), BigCount::from(30u64));
        assert!(matches!(fminus_sparse_exact(6, dens(1, 4)), Err(Error::Precondition(_))));
    }

    #[test]
    fn c_constant_examples() {
        let half = c_constants(dens(1, 2)).unwrap();
        // both branches: 1/3 from the stacked antichains, (1/e)^1 from the two-block example
        assert!(close(half.c1, (1.0 / 3.0f64).max(1.0 / E)));
        assert!(close(half.c3, 2f64.powf(0.25)));
        assert!(close(c_constants(dens(1, 4)).unwrap().c4, 4.0));
        assert!(close(half.c2_min_n, 12.0));
        assert!(c_constants(Density::ONE).is_err());
    }

    #[test]
    fn c_constant_ranges_and_limits() {
        let mut small = Vec::new();
        let mut large = Vec::new();
        for k in 1..=6 {
            let p = 10u64.pow(k);
            small.push(c_constants(dens(1, p)).unwrap());
            large.push(c_constants(dens(p - 1, p)).unwrap());
        }
        for c in small.iter().chain(&large) {
            assert!(c.c1 > 0.0 && c.c1 < 1.0);
            assert!(c.c2 > 0.0 && c.c2 < 1.0);
            assert!(c.c3 > 1.0);
            assert!(c.c4 >= 1.0);
        }
        for w in small.windows(2) {
            assert!(w[1].c1 > w[0].c1);
            assert!(w[1].c3 > w[0].c3);
        }
        for w in large.windows(2) {
            assert!(w[1].c2 < w[0].c2);
            assert!(w[1].c4 < w[0].c4);
        }
        assert!(small[5].c1 > 0.999);
        assert!(small[5].c3 > 4.9e5);
        assert!(large[5].c2 < 1e-5);
        assert!(large[5].c4 < 1.001);
    }

    #[test]
    fn rate_pinch_dense_side() {
        // delta = 1 - 6/n: witnesses and the back-degree bound pinch (f+/n!)^(1/n)
        for n in 10..=60usize {
            let delta = dens(n as u64 - 6, n as u64);
            let c = delta.complement_f64();
            let k = delta.ceil_inverse_complement().unwrap() as usize;
            let w = balanced_antichain(n, k).unwrap();
            assert!(delta.admits_at_least(w.comp(), n));
            let parts = crate::construct::balanced_parts(n, k).unwrap();
            let rate = (LogValue::log2_factorial_product(parts.parts()) - LogValue::log2_factorial(n)).root(n).value();
            assert!(rate >= 0.5 * c, "n={n}");
            let upper = (bound_incomp_upper(n, delta).unwrap() - LogValue::log2_factorial(n)).root(n).value();
            assert!(rate <= upper);
            assert!(upper <= 0.5 * (4.0f64 / 3.0).exp() * c * (1.0 + 1e-12), "n={n}");
        }
    }

    #[test]
    fn rate_pinch_sparse_side() {
        // delta = 6/n: balanced chains against the hook formula
        for n in 10..=60usize {
            let delta = dens(6, n as u64);
            let d = delta.as_f64();
            let k = delta.ceil_inverse() as usize;
            let w = balanced_chain(n, k).unwrap();
            assert!(delta.admits_at_most(w.comp(), n));
            let parts = crate::construct::balanced_parts(n, k).unwrap();
            let rate = LogValue::log2_multinomial(parts.parts()).root(n).value();
            assert!(rate <= k as f64 + 1e-9);
            assert!(k as f64 <= 2.0 / d);
            let lower = bound_hook_lower(n, delta).unwrap().root(n).value();
            assert!(lower <= rate);
            assert!(lower >= 1.0 / (2.0 * d), "n={n}");
        }
    }
}
