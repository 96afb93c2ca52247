//! Exhaustive enumeration of labeled posets on `{0, ..., n-1}` and exact
//! extremal tables of linear-extension counts by number of comparable pairs.
//!
//! Posets on `n + 1` points are generated from posets on `n` points by
//! adding the new point above a downset `D` and below an upset `U` with
//! every point of `D` below every point of `U`. Each labeled poset arises
//! exactly once, from its restriction to the first `n` points.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{balanced_antichain, balanced_chain};
use crate::count::{count_extensions, BigCount};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poset::{Poset, PosetJson};

/// Successor bitmasks of a closed relation.
type Masks = Vec<u64>;

fn check_n(n: usize, limits: &Limits) -> Result<()> {
    if n == 0 || n > limits.enumerate_max_n || n > 34 {
        return Err(Error::Range(format!(
            "enumeration needs 1 <= n <= {}, got {n}",
            limits.enumerate_max_n.min(34)
        )));
    }
    Ok(())
}

fn down_masks(up: &[u64]) -> Masks {
    let mut down = vec![0u64; up.len()];
    for (a, &row) in up.iter().enumerate() {
        let mut m = row;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            down[b] |= 1 << a;
            m &= m - 1;
        }
    }
    down
}

fn closed_under(set: u64, step: &[u64]) -> bool {
    let mut m = set;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        if step[v] & !set != 0 {
            return false;
        }
        m &= m - 1;
    }
    true
}

/// Calls `visit` on every one-point extension of `up`, in a fixed order.
fn for_each_child(up: &[u64], mut visit: impl FnMut(&[u64])) {
    let k = up.len();
    let all = (1u64 << k) - 1;
    let down = down_masks(up);
    let mut child = vec![0u64; k + 1];
    for d in 0..=all {
        if !closed_under(d, &down) {
            continue;
        }
        let mut common = all;
        let mut m = d;
        while m != 0 {
            common &= up[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        // submasks of `common` in increasing order
        let mut u = 0u64;
        loop {
            if closed_under(u, up) {
                for i in 0..k {
                    child[i] = if d >> i & 1 == 1 { up[i] | 1 << k } else { up[i] };
                }
                child[k] = u;
                visit(&child);
            }
            if u == common {
                break;
            }
            u = u.wrapping_sub(common) & common;
        }
    }
}

fn masks_of_size(n: usize) -> Vec<Masks> {
    let mut level = vec![vec![0u64]];
    for _ in 1..n {
        level = level
            .par_iter()
            .map(|p| {
                let mut out = Vec::new();
                for_each_child(p, |c| out.push(c.to_vec()));
                out
            })
            .collect::<Vec<_>>()
            .concat();
    }
    level
}

/// Every labeled poset on `n` points, each once, in a fixed order.
pub fn enumerate_labeled_posets(n: usize) -> Result<Vec<Poset>> {
    enumerate_labeled_posets_with(n, Limits::global())
}

pub fn enumerate_labeled_posets_with(n: usize, limits: &Limits) -> Result<Vec<Poset>> {
    check_n(n, limits)?;
    Ok(masks_of_size(n).iter().map(|m| Poset::from_up_masks(m)).collect())
}

/// Number of labeled posets on `n` points, without materialising them.
pub fn count_labeled_posets(n: usize) -> Result<u64> {
    check_n(n, Limits::global())?;
    if n == 1 {
        return Ok(1);
    }
    Ok(masks_of_size(n - 1)
        .par_iter()
        .map(|p| {
            let mut c = 0u64;
            for_each_child(p, |_| c += 1);
            c
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub m: usize,
    /// Largest `e(P)` over posets with `comp(P) >= m`.
    pub f_plus_at_least_m: BigCount,
    /// Smallest `e(P)` over posets with `comp(P) <= m`.
    pub f_minus_at_most_m: BigCount,
    pub f_plus_witness_id: u64,
    pub f_minus_witness_id: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Position in the enumeration order.
    pub id: u64,
    pub comp: usize,
    pub e: BigCount,
    pub poset: PosetJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalTable {
    pub n: usize,
    pub total_posets: u64,
    /// One record per `m` in `0..=C(n,2)`.
    pub records: Vec<ExtremalRecord>,
    /// Every poset referenced by a record, sorted by id.
    pub witnesses: Vec<Witness>,
}

#[derive(Clone)]
struct Best {
    e: u128,
    id: u64,
    masks: Masks,
}

struct Extremes {
    max: Vec<Option<Best>>,
    min: Vec<Option<Best>>,
    count: u64,
}

impl Extremes {
    fn new(pairs: usize) -> Extremes {
        Extremes { max: vec![None; pairs + 1], min: vec![None; pairs + 1], count: 0 }
    }

    fn offer(&mut self, comp: usize, e: u128, id: u64, masks: &[u64]) {
        if self.max[comp].as_ref().is_none_or(|b| e > b.e) {
            self.max[comp] = Some(Best { e, id, masks: masks.to_vec() });
        }
        if self.min[comp].as_ref().is_none_or(|b| e < b.e) {
            self.min[comp] = Some(Best { e, id, masks: masks.to_vec() });
        }
    }

    /// Folds `later` (whose ids start at `offset`) into `self`; earlier ids win ties.
    fn absorb(&mut self, later: Extremes, offset: u64) {
        for (comp, slot) in later.max.into_iter().enumerate() {
            if let Some(mut b) = slot {
                b.id += offset;
                if self.max[comp].as_ref().is_none_or(|a| b.e > a.e) {
                    self.max[comp] = Some(b);
                }
            }
        }
        for (comp, slot) in later.min.into_iter().enumerate() {
            if let Some(mut b) = slot {
                b.id += offset;
                if self.min[comp].as_ref().is_none_or(|a| b.e < a.e) {
                    self.min[comp] = Some(b);
                }
            }
        }
        self.count += later.count;
    }
}

fn visit_extremes(extremes: &mut Extremes, masks: &[u64]) {
    let p = Poset::from_up_masks(masks);
    let e = count_extensions(&p).expect("enumeration sizes are within the counting cap");
    let id = extremes.count;
    extremes.offer(p.comp(), e.to_u128().expect("n <= 34"), id, masks);
    extremes.count += 1;
}

/// Exact `max e` over `comp >= m` and `min e` over `comp <= m` for every `m`.
pub fn extremal_table(n: usize) -> Result<ExtremalTable> {
    extremal_table_with(n, Limits::global())
}

pub fn extremal_table_with(n: usize, limits: &Limits) -> Result<ExtremalTable> {
    check_n(n, limits)?;
    let pairs = n * (n - 1) / 2;
    let mut all = Extremes::new(pairs);
    if n == 1 {
        visit_extremes(&mut all, &[0]);
    } else {
        let parts: Vec<Extremes> = masks_of_size(n - 1)
            .par_iter()
            .map(|parent| {
                let mut local = Extremes::new(pairs);
                for_each_child(parent, |c| visit_extremes(&mut local, c));
                local
            })
            .collect();
        for part in parts {
            let offset = all.count;
            all.absorb(part, offset);
        }
    }
    Ok(build_table(n, pairs, all))
}

fn build_table(n: usize, pairs: usize, all: Extremes) -> ExtremalTable {
    // suffix maxima and prefix minima over comp
    let mut plus: Vec<Best> = Vec::with_capacity(pairs + 1);
    let mut running: Option<Best> = None;
    for comp in (0..=pairs).rev() {
        if let Some(b) = &all.max[comp] {
            let better = running.as_ref().is_none_or(|r| b.e > r.e || (b.e == r.e && b.id < r.id));
            if better {
                running = Some(b.clone());
            }
        }
        plus.push(running.clone().expect("the chain attains comp = C(n,2)"));
    }
    plus.reverse();
    let mut minus: Vec<Best> = Vec::with_capacity(pairs + 1);
    let mut running: Option<Best> = None;
    for comp in 0..=pairs {
        if let Some(b) = &all.min[comp] {
            let better = running.as_ref().is_none_or(|r| b.e < r.e || (b.e == r.e && b.id < r.id));
            if better {
                running = Some(b.clone());
            }
        }
        minus.push(running.clone().expect("the antichain attains comp = 0"));
    }
    let mut witnesses: Vec<Witness> = Vec::new();
    for b in plus.iter().chain(&minus) {
        if !witnesses.iter().any(|w| w.id == b.id) {
            let p = Poset::from_up_masks(&b.masks);
            witnesses.push(Witness { id: b.id, comp: p.comp(), e: BigCount::from(b.e), poset: p.to_json() });
        }
    }
    witnesses.sort_by_key(|w| w.id);
    let records = (0..=pairs)
        .map(|m| ExtremalRecord {
            n,
            m,
            f_plus_at_least_m: BigCount::from(plus[m].e),
            f_minus_at_most_m: BigCount::from(minus[m].e),
            f_plus_witness_id: plus[m].id,
            f_minus_witness_id: minus[m].id,
        })
        .collect();
    ExtremalTable { n, total_posets: all.count, records, witnesses }
}

impl ExtremalTable {
    pub fn witness(&self, id: u64) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.id == id)
    }

    pub fn record(&self, m: usize) -> Option<&ExtremalRecord> {
        self.records.get(m)
    }

    /// Tests whether every poset with `comp >= comp(Ã(n,k))` has at most
    /// `e(Ã(n,k))` linear extensions.
    pub fn check_antichain(&self, k: usize) -> Result<ConjectureReport> {
        let reference = balanced_antichain(self.n, self.check_k(k)?)?;
        let threshold = reference.comp();
        let reference_e = count_extensions(&reference)?;
        let r = &self.records[threshold];
        let holds = r.f_plus_at_least_m <= reference_e;
        Ok(self.report(Family::Antichain, k, threshold, reference_e, r.f_plus_at_least_m.clone(), holds, r.f_plus_witness_id))
    }

    /// Tests whether every poset with `comp <= comp(C̃(n,k))` has at least
    /// `e(C̃(n,k))` linear extensions.
    pub fn check_chain(&self, k: usize) -> Result<ConjectureReport> {
        let reference = balanced_chain(self.n, self.check_k(k)?)?;
        let threshold = reference.comp();
        let reference_e = count_extensions(&reference)?;
        let r = &self.records[threshold];
        let holds = r.f_minus_at_most_m >= reference_e;
        Ok(self.report(Family::Chain, k, threshold, reference_e, r.f_minus_at_most_m.clone(), holds, r.f_minus_witness_id))
    }

    fn check_k(&self, k: usize) -> Result<usize> {
        if k < 2 || k > self.n {
            return Err(Error::Range(format!("need 2 <= k <= n = {}, got k = {k}", self.n)));
        }
        Ok(k)
    }

    #[allow(clippy::too_many_arguments)]
    fn report(
        &self,
        family: Family,
        k: usize,
        threshold_comp: usize,
        reference_e: BigCount,
        extremal_e: BigCount,
        holds: bool,
        witness_id: u64,
    ) -> ConjectureReport {
        ConjectureReport {
            family,
            n: self.n,
            k,
            threshold_comp,
            reference_e,
            extremal_e,
            posets_checked: self.total_posets,
            verdict: if holds { Verdict::Pass } else { Verdict::Fail },
            counterexample: (!holds).then(|| self.witness(witness_id).expect("records reference stored witnesses").clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Antichain,
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of one exhaustive conjecture check. A failure is a finding, not
/// an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    /// `comp` of the balanced reference poset.
    pub threshold_comp: usize,
    /// `e` of the balanced reference poset.
    pub reference_e: BigCount,
    /// The extremal `e` over the posets the statement covers.
    pub extremal_e: BigCount,
    pub posets_checked: u64,
    pub verdict: Verdict,
    pub counterexample: Option<Witness>,
}

pub fn check_conjecture_antichain(n: usize, k: usize) -> Result<ConjectureReport> {
    extremal_table(n)?.check_antichain(k)
}

pub fn check_conjecture_chain(n: usize, k: usize) -> Result<ConjectureReport> {
    extremal_table(n)?.check_chain(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{fminus_sparse_exact_count, fplus_dense_exact, Density};

    /// Counts relations on `n` points that are irreflexive, antisymmetric
    /// and transitive by scanning all `2^(n(n-1))` digraphs.
    fn filter_count(n: usize) -> u64 {
        let cells: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        let mut total = 0;
        for bitsv in 0u64..1 << cells.len() {
            let mut rel = vec![vec![false; n]; n];
            for (i, &(a, b)) in cells.iter().enumerate() {
                rel[a][b] = bitsv >> i & 1 == 1;
            }
            let ok = (0..n).all(|a| {
                (0..n).all(|b| {
                    !(rel[a][b] && rel[b][a]) && (0..n).all(|c| !(rel[a][b] && rel[b][c]) || rel[a][c])
                })
            });
            total += ok as u64;
        }
        total
    }

    #[test]
    fn enumeration_matches_filter() {
        for n in 1..=4 {
            assert_eq!(count_labeled_posets(n).unwrap(), filter_count(n), "n={n}");
        }
        assert_eq!(count_labeled_posets(5).unwrap(), 4231);
        let all = enumerate_labeled_posets(3).unwrap();
        assert_eq!(all.len(), 19);
        assert!(all.iter().all(Poset::is_valid));
        let mut seen: Vec<_> = all.iter().map(|p| p.relations()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 19);
        assert!(enumerate_labeled_posets(0).is_err());
    }

    #[test]
    fn small_tables() {
        let t = extremal_table(3).unwrap();
        assert_eq!(t.total_posets, 19);
        assert_eq!(t.records[1].f_plus_at_least_m, BigCount::from(3u64));
        assert_eq!(t.records[2].f_minus_at_most_m, BigCount::from(2u64));
        assert_eq!(t.records[0].f_plus_at_least_m, BigCount::from(6u64));
        assert_eq!(t.records[3].f_minus_at_most_m, BigCount::one());
        for r in &t.records {
            let w = t.witness(r.f_plus_witness_id).unwrap();
            assert!(w.comp >= r.m && w.e == r.f_plus_at_least_m);
            let w = t.witness(r.f_minus_witness_id).unwrap();
            assert!(w.comp <= r.m && w.e == r.f_minus_at_most_m);
        }
        let one = extremal_table(1).unwrap();
        assert_eq!(one.records.len(), 1);
    }

    #[test]
    fn closed_forms_agree_with_five_point_table() {
        let t = extremal_table(5).unwrap();
        for r in &t.records {
            let delta = match Density::of_comp(r.m, 5) {
                Some(d) => d,
                None => continue,
            };
            if let Ok(v) = fplus_dense_exact(5, delta) {
                assert_eq!(v, r.f_plus_at_least_m, "m={}", r.m);
            }
            if let Ok(v) = fminus_sparse_exact_count(5, delta) {
                assert_eq!(v, r.f_minus_at_most_m, "m={}", r.m);
            }
        }
        for w in t.records.windows(2) {
            assert!(w[1].f_plus_at_least_m <= w[0].f_plus_at_least_m);
            assert!(w[1].f_minus_at_most_m <= w[0].f_minus_at_most_m);
        }
    }

    #[test]
    fn four_point_conjectures() {
        let a = check_conjecture_antichain(4, 2).unwrap();
        assert_eq!((a.threshold_comp, a.reference_e.clone()), (4, BigCount::from(4u64)));
        let c = check_conjecture_chain(4, 2).unwrap();
        assert_eq!((c.threshold_comp, c.reference_e.clone()), (2, BigCount::from(6u64)));
        for r in [a, c] {
            assert_eq!(r.verdict == Verdict::Fail, r.counterexample.is_some());
        }
        assert!(check_conjecture_chain(4, 1).is_err());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| extremal_table(5).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
