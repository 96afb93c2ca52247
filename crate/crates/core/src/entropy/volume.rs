use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::LogValue;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::rng::stream_rng;

pub const MIN_SAMPLES: u64 = 10_000;

/// Samples per independently seeded shard.
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    /// `n!` times the fraction of the unit cube inside the clique polytope.
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Monte Carlo estimate of `n! vol(C(G))` for the comparability graph `G`
/// of `p`, which equals `e(p)`.
///
/// A uniform point of `[0,1]^n` lies in the polytope iff every chain has
/// weight at most 1, tested by a heaviest-chain pass in topological order.
/// Shard `i` draws from stream `i` of `seed`, so the result depends only on
/// `(seed, samples)` and not on the thread count.
pub fn stanley_volume_mc(p: &Poset, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::Range(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    if p.n() > 64 {
        return Err(Error::Range(format!("volume estimation needs n <= 64, got {}", p.n())));
    }
    let order = p.topological_order();
    let below: Vec<u64> = (0..p.n()).map(|v| p.down_mask(v)).collect();
    let shards = samples.div_ceil(CHUNK);
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let len = CHUNK.min(samples - shard * CHUNK);
            let mut rng = stream_rng(seed, shard);
            let mut heaviest = vec![0.0f64; p.n()];
            (0..len).filter(|_| inside(&order, &below, &mut heaviest, &mut rng)).count() as u64
        })
        .sum();
    let rate = hits as f64 / samples as f64;
    let scale = LogValue::log2_factorial(p.n()).value();
    Ok(VolumeEstimate {
        estimate: scale * rate,
        stderr: scale * (rate * (1.0 - rate) / samples as f64).sqrt(),
        hits,
        samples,
    })
}

fn inside(order: &[usize], below: &[u64], heaviest: &mut [f64], rng: &mut impl Rng) -> bool {
    // draw every coordinate so the stream position does not depend on early exits
    for h in heaviest.iter_mut() {
        *h = rng.random::<f64>();
    }
    for &v in order {
        let mut m = below[v];
        let mut best = 0.0f64;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            best = best.max(heaviest[u]);
            m &= m - 1;
        }
        heaviest[v] += best;
        if heaviest[v] > 1.0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{chain_example, Partition};
    use crate::entropy::maximal_chains;

    #[test]
    fn cube_and_simplex() {
        let a = stanley_volume_mc(&Poset::antichain(3), 100_000, 1).unwrap();
        assert_eq!(a.estimate, 6.0);
        let c = stanley_volume_mc(&Poset::chain(3), 200_000, 2).unwrap();
        assert!((c.estimate - 1.0).abs() <= 3.0 * c.stderr, "{c:?}");
    }

    #[test]
    fn two_three_chains_near_twenty() {
        let p = chain_example(&Partition::new(vec![3, 3]).unwrap());
        let v = stanley_volume_mc(&p, 1_000_000, 7).unwrap();
        assert!((v.estimate - 20.0).abs() <= 3.0 * v.stderr, "{v:?}");
    }

    #[test]
    fn independent_of_thread_count() {
        let p = Poset::new(5, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| stanley_volume_mc(&p, 100_003, 11).unwrap())
        };
        assert_eq!(run(1), run(3));
        assert!(stanley_volume_mc(&p, 10, 0).is_err());
    }

    #[test]
    fn chain_pass_agrees_with_explicit_chains() {
        let p = Poset::new(6, &[(0, 2), (1, 2), (2, 4), (3, 4), (1, 5)]).unwrap();
        let chains = maximal_chains(&p).unwrap();
        let order = p.topological_order();
        let below: Vec<u64> = (0..6).map(|v| p.down_mask(v)).collect();
        let mut rng = stream_rng(3, 0);
        for _ in 0..5000 {
            let mut replay = rng.clone();
            let mut w = vec![0.0; 6];
            let fast = inside(&order, &below, &mut w, &mut rng);
            let x: Vec<f64> = (0..6).map(|_| replay.random::<f64>()).collect();
            let slow = chains.iter().all(|c| c.iter().map(|&v| x[v]).sum::<f64>() <= 1.0);
            assert_eq!(fast, slow);
        }
    }
}
