//! Exact linear-extension counting.
//!
//! `count_extensions` walks the lattice of order ideals layer by layer: the
//! number of linear extensions equals the number of maximal chains from the
//! empty ideal to the full ground set.

use std::fmt;
use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bounds::LogValue;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poset::Poset;

/// Exact nonnegative integer, serialized as a decimal string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn one() -> BigCount {
        BigCount(BigUint::one())
    }

    /// `log2` of the value; `-inf` for zero.
    pub fn log2(&self) -> f64 {
        let bits = self.0.bits();
        if bits <= 64 {
            return (self.0.to_u64().unwrap() as f64).log2();
        }
        let shift = bits - 64;
        let top = (&self.0 >> shift).to_u64().unwrap();
        (top as f64).log2() + shift as f64
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.0.to_u128()
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<u128> for BigCount {
    fn from(v: u128) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<BigUint>().map(BigCount).map_err(serde::de::Error::custom)
    }
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// `n! / (n_1! ... n_k!)` with `n = sum(parts)`.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let n: usize = parts.iter().sum();
    parts.iter().fold(factorial(n), |acc, &p| acc / factorial(p))
}

/// Number of linear extensions, using the process-wide limits.
pub fn count_extensions(p: &Poset) -> Result<BigCount> {
    count_extensions_with(p, Limits::global())
}

pub fn count_extensions_with(p: &Poset, limits: &Limits) -> Result<BigCount> {
    let n = p.n();
    if n > limits.count_max_n || n > 63 {
        return Err(Error::Capacity(format!(
            "counting is capped at n = {}, got n = {n}",
            limits.count_max_n.min(63)
        )));
    }
    // n! < 2^128 for n <= 34, so the fast path never overflows.
    if n <= 34 {
        ideal_dp::<u128>(p, limits.max_ideals_per_level).map(BigCount::from)
    } else {
        ideal_dp::<BigUint>(p, limits.max_ideals_per_level).map(BigCount)
    }
}

fn ideal_dp<T>(p: &Poset, budget: usize) -> Result<T>
where
    T: Clone + Zero + One + for<'a> AddAssign<&'a T>,
{
    let n = p.n();
    let down: Vec<u64> = (0..n).map(|v| p.down_mask(v)).collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut layer: Vec<(u64, T)> = vec![(0, T::one())];
    let mut next: Vec<(u64, T)> = Vec::new();
    for _ in 0..n {
        next.clear();
        for (ideal, count) in &layer {
            let mut free = full & !ideal;
            while free != 0 {
                let v = free.trailing_zeros() as usize;
                free &= free - 1;
                if down[v] & !ideal == 0 {
                    next.push((ideal | 1 << v, count.clone()));
                }
            }
            if next.len() > budget.saturating_mul(8) {
                return Err(Error::Capacity(format!(
                    "ideal layer exceeds the budget of {budget} before merging"
                )));
            }
        }
        next.sort_unstable_by_key(|e| e.0);
        layer.clear();
        for (ideal, count) in next.drain(..) {
            match layer.last_mut() {
                Some((last, acc)) if *last == ideal => *acc += &count,
                _ => layer.push((ideal, count)),
            }
        }
        if layer.len() > budget {
            return Err(Error::Capacity(format!(
                "ideal layer of size {} exceeds the budget of {budget}",
                layer.len()
            )));
        }
    }
    debug_assert_eq!(layer.len(), 1);
    Ok(layer.pop().map(|(_, c)| c).unwrap_or_else(T::zero))
}

/// Ordered pairs `(x, y)` with `x` placed before `y` in `order` but `y < x`
/// in the poset.
pub fn conflicts(p: &Poset, order: &[usize]) -> usize {
    let mut count = 0;
    for (i, &x) in order.iter().enumerate() {
        for &y in &order[i + 1..] {
            if p.less(y, x) {
                count += 1;
            }
        }
    }
    count
}

pub const BRUTEFORCE_MAX_N: usize = 10;

/// Counts the permutations of `0..n` with zero conflicts. Test oracle.
pub fn count_extensions_bruteforce(p: &Poset) -> Result<BigCount> {
    let n = p.n();
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::Range(format!(
            "brute force is limited to n <= {BRUTEFORCE_MAX_N}, got {n}"
        )));
    }
    let down: Vec<u64> = (0..n).map(|v| p.down_mask(v)).collect();
    let consistent = |perm: &[usize]| {
        let mut placed = 0u64;
        for &v in perm {
            if down[v] & !placed != 0 {
                return false;
            }
            placed |= 1 << v;
        }
        true
    };
    // Heap's algorithm.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut total = consistent(&perm) as u64;
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += consistent(&perm) as u64;
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(BigCount::from(total))
}

/// Principal downset sizes `lambda_t = |{s : s <= t}|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HookVector {
    pub lambda: Vec<usize>,
}

impl HookVector {
    pub fn product(&self) -> BigUint {
        self.lambda.iter().fold(BigUint::one(), |acc, &l| acc * l as u64)
    }
}

pub fn hook_lengths(p: &Poset) -> HookVector {
    HookVector { lambda: (0..p.n()).map(|t| p.down_degree(t) + 1).collect() }
}

/// `log2(n! / prod lambda_t)`, a lower bound on `log2 e(P)`.
pub fn hook_lower_bound(p: &Poset) -> LogValue {
    let hooks = hook_lengths(p);
    let denom: f64 = hooks.lambda.iter().map(|&l| (l as f64).log2()).sum();
    LogValue::log2_factorial(p.n()) - LogValue::new(denom)
}

/// `e(P) * prod lambda_t == n!`, checked in exact arithmetic.
pub fn hook_bound_is_tight(p: &Poset, e: &BigCount) -> bool {
    &e.0 * hook_lengths(p).product() == factorial(p.n())
}

/// Connected components of the comparability graph.
pub fn components(p: &Poset) -> Vec<Vec<usize>> {
    let n = p.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for u in p.above(v).chain(p.below(v)).collect::<Vec<_>>() {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Whether every component of the comparability graph has exactly one
/// maximal element or exactly one minimal element.
///
/// This is necessary for the hook bound to be tight but not sufficient: the
/// three-point poset `0 < 1, 0 < 2` satisfies it while `e = 2 > 3!/4`. See
/// [`is_downward_forest`] for the exact characterization.
pub fn hook_equality_holds(p: &Poset) -> bool {
    components(p).iter().all(|comp| {
        let max = comp.iter().filter(|&&v| p.is_maximal(v)).count();
        let min = comp.iter().filter(|&&v| p.is_minimal(v)).count();
        max == 1 || min == 1
    })
}

/// Every point has at most one upper cover, so each component is a tree
/// hanging below a unique maximum. Exactly these posets have
/// `e(P) = n! / prod lambda_t`.
pub fn is_downward_forest(p: &Poset) -> bool {
    let mut upper_covers = vec![0usize; p.n()];
    for (a, _) in p.covers() {
        upper_covers[a] += 1;
    }
    upper_covers.into_iter().all(|c| c <= 1)
}

/// One acyclic orientation of the comparability graph with the number of
/// permutations consistent with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationCount {
    /// Directed edges `(from, to)`, one per comparable pair.
    pub arcs: Vec<(usize, usize)>,
    pub count: BigCount,
    /// The orientation agrees with the poset itself.
    pub is_poset: bool,
}

/// All acyclic orientations of the comparability graph of `p`. Their counts
/// partition the `n!` permutations.
pub fn orientation_profile(p: &Poset) -> Result<Vec<OrientationCount>> {
    orientation_profile_with(p, Limits::global())
}

pub fn orientation_profile_with(p: &Poset, limits: &Limits) -> Result<Vec<OrientationCount>> {
    let edges = p.comparability_edges();
    if edges.len() > limits.orientation_max_comp {
        return Err(Error::Range(format!(
            "orientation profile needs comp <= {}, got {}",
            limits.orientation_max_comp,
            edges.len()
        )));
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << edges.len() {
        let arcs: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask >> i & 1 == 0 { (a, b) } else { (b, a) })
            .collect();
        let oriented = match Poset::new(p.n(), &arcs) {
            Ok(q) => q,
            Err(Error::Cycle(_)) => continue,
            Err(e) => return Err(e),
        };
        let count = count_extensions_with(&oriented, limits)?;
        let is_poset = arcs.iter().all(|&(a, b)| p.less(a, b));
        out.push(OrientationCount { arcs, count, is_poset });
    }
    Ok(out)
}
