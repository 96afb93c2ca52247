use extenso::count::{count_extensions, factorial};
use extenso::extremal::{count_labeled_posets, enumerate_labeled_posets, extremal_table};
use extenso::BigCount;

#[test]
fn labeled_totals() {
    let totals: Vec<u64> = (1..=6).map(|n| count_labeled_posets(n).unwrap()).collect();
    assert_eq!(totals, [1, 3, 19, 219, 4231, 130023]);
}

#[test]
fn enumeration_has_no_repeats() {
    let mut seen: Vec<String> = enumerate_labeled_posets(5).unwrap().iter().map(|p| p.to_json_string()).collect();
    let total = seen.len();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), total);
}

#[test]
fn table_endpoints_and_monotonicity() {
    for n in 1..=6 {
        let t = extremal_table(n).unwrap();
        let last = n * (n - 1) / 2;
        assert_eq!(t.records.len(), last + 1);
        assert_eq!(t.record(0).unwrap().f_plus_at_least_m, BigCount(factorial(n)));
        assert_eq!(t.record(last).unwrap().f_minus_at_most_m, BigCount::one());
        for w in t.records.windows(2) {
            assert!(w[1].f_plus_at_least_m <= w[0].f_plus_at_least_m);
            assert!(w[1].f_minus_at_most_m <= w[0].f_minus_at_most_m);
        }
        for r in &t.records {
            assert!(r.f_minus_at_most_m <= r.f_plus_at_least_m || r.m == 0);
        }
    }
}

#[test]
fn witnesses_attain_their_records() {
    let t = extremal_table(5).unwrap();
    let posets = enumerate_labeled_posets(5).unwrap();
    for r in &t.records {
        let plus = &posets[r.f_plus_witness_id as usize];
        assert!(plus.comp() >= r.m);
        assert_eq!(count_extensions(plus).unwrap(), r.f_plus_at_least_m);
        let minus = &posets[r.f_minus_witness_id as usize];
        assert!(minus.comp() <= r.m);
        assert_eq!(count_extensions(minus).unwrap(), r.f_minus_at_most_m);
        assert_eq!(t.witness(r.f_plus_witness_id).unwrap().poset, plus.to_json());
    }
}

#[test]
fn table_matches_direct_scan() {
    let n = 4;
    let t = extremal_table(n).unwrap();
    let scored: Vec<(usize, BigCount)> =
        enumerate_labeled_posets(n).unwrap().iter().map(|p| (p.comp(), count_extensions(p).unwrap())).collect();
    for r in &t.records {
        let max = scored.iter().filter(|(c, _)| *c >= r.m).map(|(_, e)| e.clone()).max().unwrap();
        let min = scored.iter().filter(|(c, _)| *c <= r.m).map(|(_, e)| e.clone()).min().unwrap();
        assert_eq!((max, min), (r.f_plus_at_least_m.clone(), r.f_minus_at_most_m.clone()));
    }
}
