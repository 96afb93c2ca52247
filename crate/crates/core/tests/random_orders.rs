use extenso::random::{
    dyadic_group_of, find_two_plus_two, from_linear_orders, sample_interval_family, sample_kdim_poset,
    sample_linear_orders,
};
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// The first dyadic level of a uniform random interval is `j` with
/// probability `2^-j`: it exceeds `J` exactly when both endpoints share a
/// cell of width `2^-J`.
#[test]
fn dyadic_levels_are_geometric() {
    const SAMPLES: usize = 50_000;
    const BINS: usize = 7;
    let f = sample_interval_family(SAMPLES, 31).unwrap();
    let mut observed = [0usize; BINS];
    for &(a, b) in f.intervals() {
        let (_, j) = dyadic_group_of(a, b).unwrap();
        observed[(j as usize).min(BINS) - 1] += 1;
    }
    let stat: f64 = (0..BINS)
        .map(|k| {
            let p = if k + 1 < BINS { 0.5f64.powi(k as i32 + 1) } else { 0.5f64.powi(BINS as i32 - 1) };
            let expected = p * SAMPLES as f64;
            (observed[k] as f64 - expected).powi(2) / expected
        })
        .sum();
    let critical = ChiSquared::new((BINS - 1) as f64).unwrap().inverse_cdf(0.999);
    assert!(stat < critical, "chi2 = {stat}, critical = {critical}, observed {observed:?}");
}

#[test]
fn interval_orders_have_no_two_plus_two() {
    for seed in 0..100 {
        let p = sample_interval_family(15, seed).unwrap().poset();
        assert!(find_two_plus_two(&p).is_none(), "seed {seed}");
    }
}

#[test]
fn two_dimensional_orders_can_contain_two_plus_two() {
    // 0 < 1 and 2 < 3 in both orders, everything else crossed
    let p = from_linear_orders(&[vec![0, 1, 2, 3], vec![2, 3, 0, 1]]).unwrap();
    let [a, b, c, d] = find_two_plus_two(&p).unwrap();
    assert!(p.less(a, b) && p.less(c, d));
    assert!(!p.comparable(a, d) && !p.comparable(c, b));
}

proptest! {
    #[test]
    fn kdim_relation_is_intersection(n in 1usize..10, k in 1usize..4, seed in any::<u64>()) {
        let orders = sample_linear_orders(n, k, seed).unwrap();
        let p = sample_kdim_poset(n, k, seed).unwrap();
        let pos: Vec<Vec<usize>> = orders
            .iter()
            .map(|o| {
                let mut at = vec![0; n];
                for (i, &v) in o.iter().enumerate() {
                    at[v] = i;
                }
                at
            })
            .collect();
        for a in 0..n {
            for b in 0..n {
                let everywhere = a != b && pos.iter().all(|at| at[a] < at[b]);
                prop_assert_eq!(p.less(a, b), everywhere);
            }
        }
    }

    #[test]
    fn interval_relation_is_disjointness(n in 1usize..14, seed in any::<u64>()) {
        let f = sample_interval_family(n, seed).unwrap();
        let p = f.poset();
        let iv = f.intervals();
        for i in 0..n {
            prop_assert!(0.0 < iv[i].0 && iv[i].0 < iv[i].1 && iv[i].1 < 1.0);
            for j in 0..n {
                prop_assert_eq!(p.less(i, j), iv[i].1 < iv[j].0);
            }
        }
        prop_assert_eq!(f.disjoint_pairs(), p.comp());
    }

    #[test]
    fn dyadic_point_lies_inside_at_least_level(a in 0.001f64..0.998, w in 0.0005f64..0.5) {
        let b = (a + w).min(0.9995);
        prop_assume!(a < b);
        if let Ok((i, j)) = dyadic_group_of(a, b) {
            let x = i as f64 / (1u64 << j) as f64;
            prop_assert!(i % 2 == 1 && a < x && x < b);
            for shallower in 1..j {
                let scale = (1u64 << shallower) as f64;
                prop_assert!((a * scale).floor() == (b * scale).floor());
            }
        }
    }
}
