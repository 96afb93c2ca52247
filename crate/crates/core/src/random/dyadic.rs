use std::collections::BTreeMap;
use std::f64::consts::LOG2_E;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::IntervalFamily;
use crate::count::{factorial, BigCount};
use crate::error::{Error, Result};

/// Deepest dyadic level scanned; `2^j` stays exact in `f64` and `u64`.
const MAX_LEVEL: u32 = 62;

/// The intervals whose first dyadic point is `i / 2^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicGroup {
    pub i: u64,
    pub j: u32,
    pub members: Vec<usize>,
}

impl DyadicGroup {
    pub fn point(&self) -> f64 {
        self.i as f64 / (1u64 << self.j) as f64
    }
}

/// `(i, j)` with `i` odd, `i / 2^j` in `(a, b)` and `j >= 1` least.
///
/// Fails with [`Error::Degenerate`] when `a` or `b` is itself a dyadic
/// point of level at most that `j`.
pub fn dyadic_group_of(a: f64, b: f64) -> Result<(u64, u32)> {
    if !(0.0 < a && a < b && b < 1.0) {
        return Err(Error::Range(format!("need 0 < a < b < 1, got a = {a}, b = {b}")));
    }
    for j in 1..=MAX_LEVEL {
        let scale = (1u64 << j) as f64;
        let (sa, sb) = (a * scale, b * scale);
        if sa.fract() == 0.0 || sb.fract() == 0.0 {
            return Err(Error::Degenerate(format!("endpoint of ({a}, {b}) is a multiple of 2^-{j}")));
        }
        let i = sa.floor() as u64 + 1;
        if (i as f64) < sb {
            debug_assert!(i % 2 == 1);
            return Ok((i, j));
        }
    }
    Err(Error::Degenerate(format!("({a}, {b}) contains no dyadic point of level <= {MAX_LEVEL}")))
}

/// Groups the intervals by first dyadic point, ordered by level then `i`.
pub fn dyadic_groups(f: &IntervalFamily) -> Result<Vec<DyadicGroup>> {
    let mut groups: BTreeMap<(u32, u64), Vec<usize>> = BTreeMap::new();
    for (k, &(a, b)) in f.intervals().iter().enumerate() {
        let (i, j) = dyadic_group_of(a, b)?;
        groups.entry((j, i)).or_default().push(k);
    }
    Ok(groups.into_iter().map(|((j, i), members)| DyadicGroup { i, j, members }).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicBound {
    pub groups: Vec<DyadicGroup>,
    /// `prod N(i,j)!`, a lower bound on the number of linear extensions.
    pub bound: BigCount,
    pub log2_bound: f64,
    /// `N_j` for `j = 1..=max level`; entry `j - 1` is level `j`.
    pub level_totals: Vec<usize>,
    /// `sum_j N_j log2(N_j / 2^(j-1)) - n log2 e`, a weaker lower bound on `log2 e`.
    pub refined_log2: f64,
}

/// The factorial-product lower bound from the dyadic decomposition.
pub fn dyadic_lower_bound(f: &IntervalFamily) -> Result<DyadicBound> {
    let groups = dyadic_groups(f)?;
    let bound = groups.iter().fold(BigUint::one(), |acc, g| acc * factorial(g.members.len()));
    let bound = BigCount(bound);
    let levels = groups.iter().map(|g| g.j).max().unwrap_or(0) as usize;
    let mut level_totals = vec![0usize; levels];
    for g in &groups {
        level_totals[g.j as usize - 1] += g.members.len();
    }
    let refined_log2 = level_totals
        .iter()
        .enumerate()
        .filter(|(_, &nj)| nj > 0)
        .map(|(idx, &nj)| nj as f64 * ((nj as f64).log2() - idx as f64))
        .sum::<f64>()
        - f.len() as f64 * LOG2_E;
    Ok(DyadicBound { log2_bound: bound.log2(), bound, groups, level_totals, refined_log2 })
}
