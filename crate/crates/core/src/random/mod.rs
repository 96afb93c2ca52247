//! Random interval orders, random k-dimensional orders and the dyadic
//! antichain decomposition of interval families.
//!
//! Every generator is a pure function of its parameters and a `u64` seed.
//! Experiments derive one generator stream per trial, so results do not
//! depend on how trials are spread over threads.

mod dyadic;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use dyadic::{dyadic_group_of, dyadic_groups, dyadic_lower_bound, DyadicBound, DyadicGroup};

use crate::bounds::LogValue;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::rng::stream_rng;

/// `n` open intervals `(a_j, b_j)` with `0 < a_j < b_j < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalJson", into = "IntervalJson")]
pub struct IntervalFamily {
    intervals: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct IntervalJson {
    intervals: Vec<[f64; 2]>,
}

impl TryFrom<IntervalJson> for IntervalFamily {
    type Error = Error;
    fn try_from(j: IntervalJson) -> Result<Self> {
        IntervalFamily::new(j.intervals.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<IntervalFamily> for IntervalJson {
    fn from(f: IntervalFamily) -> Self {
        IntervalJson { intervals: f.intervals.into_iter().map(|(a, b)| [a, b]).collect() }
    }
}

impl IntervalFamily {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<IntervalFamily> {
        if intervals.is_empty() {
            return Err(Error::Range("an interval family needs at least one interval".into()));
        }
        for (j, &(a, b)) in intervals.iter().enumerate() {
            if !(0.0 < a && a < b && b < 1.0) {
                return Err(Error::Range(format!("interval {j} = [{a}, {b}] must satisfy 0 < a < b < 1")));
            }
        }
        Ok(IntervalFamily { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// The interval order: `i < j` iff interval `i` ends before `j` starts.
    pub fn poset(&self) -> Poset {
        let iv = &self.intervals;
        Poset::from_closed_fn(iv.len(), |i, j| iv[i].1 < iv[j].0)
    }

    /// Number of disjoint pairs, i.e. `comp` of the interval order.
    pub fn disjoint_pairs(&self) -> usize {
        let iv = &self.intervals;
        (0..iv.len())
            .map(|i| (i + 1..iv.len()).filter(|&j| iv[i].1 < iv[j].0 || iv[j].1 < iv[i].0).count())
            .sum()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("interval families serialize")
    }

    pub fn from_json_str(s: &str) -> Result<IntervalFamily> {
        Ok(serde_json::from_str(s)?)
    }
}

/// One random interval: two uniform points, sorted. Pairs with a tie, a zero
/// endpoint, or an endpoint on a dyadic point of the interval's own level
/// are redrawn.
fn sample_interval(rng: &mut impl Rng) -> (f64, f64) {
    loop {
        let x: f64 = rng.random();
        let y: f64 = rng.random();
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        if a > 0.0 && a < b && dyadic_group_of(a, b).is_ok() {
            return (a, b);
        }
    }
}

pub fn sample_interval_family_from(n: usize, rng: &mut impl Rng) -> Result<IntervalFamily> {
    if n == 0 {
        return Err(Error::Range("n must be positive".into()));
    }
    IntervalFamily::new((0..n).map(|_| sample_interval(rng)).collect())
}

pub fn sample_interval_family(n: usize, seed: u64) -> Result<IntervalFamily> {
    sample_interval_family_from(n, &mut stream_rng(seed, 0))
}

/// A random interval order on `n` points and the family that defines it.
pub fn sample_interval_poset(n: usize, seed: u64) -> Result<(Poset, IntervalFamily)> {
    let f = sample_interval_family(n, seed)?;
    Ok((f.poset(), f))
}

/// Intersection of the given linear orders: `x < y` iff `x` comes before `y`
/// in every one of them. Each order lists the points `0..n` once.
pub fn from_linear_orders(orders: &[Vec<usize>]) -> Result<Poset> {
    let Some(first) = orders.first() else {
        return Err(Error::Range("need at least one linear order".into()));
    };
    let n = first.len();
    let mut positions = Vec::with_capacity(orders.len());
    for order in orders {
        let mut pos = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::Range(format!("linear orders differ in length: {} vs {n}", order.len())));
        }
        for (rank, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::Index { index: v, n });
            }
            if pos[v] != usize::MAX {
                return Err(Error::Range(format!("point {v} repeated in a linear order")));
            }
            pos[v] = rank;
        }
        positions.push(pos);
    }
    if n == 0 {
        return Err(Error::Range("n must be positive".into()));
    }
    Ok(Poset::from_closed_fn(n, |x, y| positions.iter().all(|pos| pos[x] < pos[y])))
}

/// The `k` random permutations behind [`sample_kdim_poset`].
pub fn sample_linear_orders(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if n == 0 || k == 0 {
        return Err(Error::Range(format!("need n >= 1 and k >= 1, got n = {n}, k = {k}")));
    }
    let mut rng = stream_rng(seed, 0);
    Ok((0..k)
        .map(|_| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            order
        })
        .collect())
}

/// Random `k`-dimensional order: the intersection of `k` uniform random
/// linear orders of `0..n`.
pub fn sample_kdim_poset(n: usize, k: usize, seed: u64) -> Result<Poset> {
    from_linear_orders(&sample_linear_orders(n, k, seed)?)
}

/// A random poset on `n` points: a random labeling of a random DAG whose
/// pairs are related independently with probability `prob`, then closed.
pub fn random_dag_poset(n: usize, prob: f64, seed: u64) -> Result<Poset> {
    if n == 0 || !(0.0..=1.0).contains(&prob) {
        return Err(Error::Range(format!("need n >= 1 and 0 <= prob <= 1, got n = {n}, prob = {prob}")));
    }
    let mut rng = stream_rng(seed, 0);
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(prob) {
                pairs.push((label[i], label[j]));
            }
        }
    }
    Poset::new(n, &pairs)
}

/// Size of a largest antichain; for an interval order, the largest set of
/// pairwise intersecting intervals.
pub fn max_antichain_size(p: &Poset) -> usize {
    p.width()
}

/// An induced `2 + 2`: `a < b`, `c < d`, and all four cross pairs
/// incomparable. Interval orders are exactly the posets without one.
pub fn find_two_plus_two(p: &Poset) -> Option<[usize; 4]> {
    let rel = p.relations();
    for (i, &(a, b)) in rel.iter().enumerate() {
        for &(c, d) in &rel[i + 1..] {
            let cross = [(a, c), (a, d), (b, c), (b, d)];
            if cross.iter().all(|&(x, y)| x != y && !p.comparable(x, y)) {
                return Some([a, b, c, d]);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: u64,
    #[serde(rename = "Z")]
    pub z: usize,
    #[serde(rename = "A_n")]
    pub a_n: usize,
    pub dyadic_bound_log2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub a: f64,
    /// Fraction of trials with `|Z - C(n,2)/3| >= a C(n,2)`.
    pub fraction: f64,
    /// `2 exp(-a^2 n / 2)`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationStats {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// `C(n,2) / 3`.
    pub expected: f64,
    pub mean: f64,
    pub sd: f64,
    pub mean_a_n: f64,
    pub tails: Vec<TailRow>,
    pub rows: Vec<TrialRow>,
}

pub const MIN_TRIALS: u64 = 30;
pub const TAIL_LEVELS: [f64; 2] = [0.05, 0.1];

/// Samples `trials` random interval orders on `n` points and summarises the
/// number `Z` of comparable pairs against its mean `C(n,2)/3`.
pub fn comp_concentration_experiment(n: usize, trials: u64, seed: u64) -> Result<ConcentrationStats> {
    if trials < MIN_TRIALS {
        return Err(Error::Range(format!("need at least {MIN_TRIALS} trials, got {trials}")));
    }
    if n == 0 {
        return Err(Error::Range("n must be positive".into()));
    }
    let rows: Vec<TrialRow> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let f = sample_interval_family_from(n, &mut stream_rng(seed, trial)).expect("n >= 1");
            let groups = dyadic_groups(&f).expect("sampled families avoid dyadic endpoints");
            let sizes: Vec<usize> = groups.iter().map(|g| g.members.len()).collect();
            TrialRow {
                trial,
                z: f.disjoint_pairs(),
                a_n: max_antichain_size(&f.poset()),
                dyadic_bound_log2: LogValue::log2_factorial_product(&sizes).log2(),
            }
        })
        .collect();
    let pairs = (n * (n - 1) / 2) as f64;
    let expected = pairs / 3.0;
    let t = trials as f64;
    let mean = rows.iter().map(|r| r.z as f64).sum::<f64>() / t;
    let var = rows.iter().map(|r| (r.z as f64 - mean).powi(2)).sum::<f64>() / (t - 1.0);
    let tails = TAIL_LEVELS
        .iter()
        .map(|&a| TailRow {
            a,
            fraction: rows.iter().filter(|r| (r.z as f64 - expected).abs() >= a * pairs).count() as f64 / t,
            bound: 2.0 * (-a * a * n as f64 / 2.0).exp(),
        })
        .collect();
    Ok(ConcentrationStats {
        n,
        trials,
        seed,
        expected,
        mean,
        sd: var.sqrt(),
        mean_a_n: rows.iter().map(|r| r.a_n as f64).sum::<f64>() / t,
        tails,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_extensions;

    #[test]
    fn fixture_interval_order() {
        let f = IntervalFamily::new(vec![(0.1, 0.2), (0.3, 0.4), (0.15, 0.35)]).unwrap();
        let p = f.poset();
        assert_eq!(p.relations(), vec![(0, 1)]);
        assert_eq!(p.comp(), 1);
        assert_eq!(f.disjoint_pairs(), 1);
        assert!(IntervalFamily::new(vec![(0.5, 0.5)]).is_err());
        let back = IntervalFamily::from_json_str(&f.to_json_string()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn single_point_and_determinism() {
        let (p, _) = sample_interval_poset(1, 9).unwrap();
        assert_eq!((p.n(), p.comp()), (1, 0));
        assert_eq!(sample_interval_family(20, 4).unwrap(), sample_interval_family(20, 4).unwrap());
        assert_ne!(sample_interval_family(20, 4).unwrap(), sample_interval_family(20, 5).unwrap());
    }

    #[test]
    fn sampled_interval_orders_avoid_two_plus_two() {
        for seed in 0..100 {
            let (p, _) = sample_interval_poset(12, seed).unwrap();
            assert_eq!(find_two_plus_two(&p), None, "seed {seed}");
        }
        let two_chains = Poset::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(find_two_plus_two(&two_chains).is_some());
    }

    #[test]
    fn linear_order_fixtures() {
        assert_eq!(from_linear_orders(&[vec![0, 1, 2], vec![2, 1, 0]]).unwrap().comp(), 0);
        let p = from_linear_orders(&[vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(p.relations(), vec![(0, 1), (0, 2)]);
        assert!(from_linear_orders(&[vec![0, 0, 1]]).is_err());
        let chain = sample_kdim_poset(7, 1, 3).unwrap();
        assert_eq!(count_extensions(&chain).unwrap(), crate::count::BigCount::one());
    }

    #[test]
    fn two_dimensional_orders_come_from_their_permutations() {
        for seed in 0..20 {
            let orders = sample_linear_orders(9, 2, seed).unwrap();
            let p = sample_kdim_poset(9, 2, seed).unwrap();
            for x in 0..9 {
                for y in 0..9 {
                    let before = |o: &Vec<usize>| {
                        o.iter().position(|&v| v == x).unwrap() < o.iter().position(|&v| v == y).unwrap()
                    };
                    assert_eq!(p.less(x, y), x != y && orders.iter().all(before));
                }
            }
        }
    }

    #[test]
    fn random_dags_are_posets() {
        for seed in 0..20 {
            let p = random_dag_poset(8, 0.3, seed).unwrap();
            assert!(p.is_valid());
        }
        assert!(random_dag_poset(3, 1.5, 0).is_err());
    }

    #[test]
    fn antichain_sizes() {
        assert_eq!(max_antichain_size(&Poset::antichain(5)), 5);
        assert_eq!(max_antichain_size(&Poset::chain(5)), 1);
    }

    #[test]
    fn concentration_small_run() {
        let s = comp_concentration_experiment(30, 40, 1).unwrap();
        assert_eq!(s.rows.len(), 40);
        assert_eq!(s.expected, 145.0);
        assert!((s.mean - s.expected).abs() < 4.0 * s.sd);
        assert!(comp_concentration_experiment(30, 10, 1).is_err());
        let again = comp_concentration_experiment(30, 40, 1).unwrap();
        assert_eq!(s, again);
    }
}
