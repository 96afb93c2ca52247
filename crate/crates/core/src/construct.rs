//! The standard example families: disjoint chains, stacked antichains,
//! their balanced and two-block variants, and the Boolean lattice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poset::Poset;

/// Positive part sizes `n_1, ..., n_k` summing to `n`.
///
/// Balanced partitions are nondecreasing. Other orders are accepted because
/// the part order matters for stacked antichains (e.g. `[1, 4, 1]`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Range(format!("parts must be positive and nonempty, got {parts:?}")));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_balanced(&self) -> bool {
        let (n, k) = (self.n(), self.k());
        self.parts.windows(2).all(|w| w[0] <= w[1])
            && self.parts[0] >= n / k
            && self.parts[k - 1] <= n.div_ceil(k)
    }

    /// Block index of every point; blocks occupy consecutive labels.
    fn blocks(&self) -> Vec<usize> {
        self.parts.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat_n(i, s)).collect()
    }
}

/// The nondecreasing partition of `n` into `k` parts of size `floor(n/k)`
/// or `ceil(n/k)`, smaller parts first.
pub fn balanced_parts(n: usize, k: usize) -> Result<Partition> {
    if k == 0 || k > n {
        return Err(Error::Range(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let (q, r) = (n / k, n % k);
    let parts = (0..k).map(|i| if i < k - r { q } else { q + 1 }).collect();
    Partition::new(parts)
}

/// Disjoint chains of the given sizes, no relations between chains.
pub fn chain_example(parts: &Partition) -> Poset {
    let block = parts.blocks();
    Poset::from_closed_fn(parts.n(), |a, b| block[a] == block[b] && a < b)
}

/// Antichains `A_1 < A_2 < ... < A_k` stacked elementwise.
pub fn antichain_example(parts: &Partition) -> Poset {
    let block = parts.blocks();
    Poset::from_closed_fn(parts.n(), |a, b| block[a] < block[b])
}

pub fn balanced_chain(n: usize, k: usize) -> Result<Poset> {
    Ok(chain_example(&balanced_parts(n, k)?))
}

pub fn balanced_antichain(n: usize, k: usize) -> Result<Poset> {
    Ok(antichain_example(&balanced_parts(n, k)?))
}

fn two_block(n: usize, t: usize) -> Result<Partition> {
    if t == 0 || 2 * t > n + 1 {
        return Err(Error::Range(format!("need 1 <= t <= (n+1)/2, got n = {n}, t = {t}")));
    }
    if t == n {
        return Partition::new(vec![t]);
    }
    Partition::new(vec![t, n - t])
}

/// Two disjoint chains of sizes `t` and `n - t`.
pub fn two_block_chain(n: usize, t: usize) -> Result<Poset> {
    Ok(chain_example(&two_block(n, t)?))
}

/// Two stacked antichains of sizes `t` below `n - t`.
pub fn two_block_antichain(n: usize, t: usize) -> Result<Poset> {
    Ok(antichain_example(&two_block(n, t)?))
}

/// Subsets of `{0, ..., t-1}` under strict inclusion; point `s` is the set
/// with bitmask `s`.
pub fn boolean_lattice(t: u32) -> Result<Poset> {
    boolean_lattice_with(t, Limits::global())
}

pub fn boolean_lattice_with(t: u32, limits: &Limits) -> Result<Poset> {
    if t == 0 || t > limits.boolean_max_t {
        return Err(Error::Range(format!(
            "boolean lattice needs 1 <= t <= {}, got {t}",
            limits.boolean_max_t
        )));
    }
    let n = 1usize << t;
    Ok(Poset::from_closed_fn(n, |a, b| a != b && a & b == a))
}
