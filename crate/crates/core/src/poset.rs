//! Finite strict partial orders on `0..n` and their structural statistics.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strict partial order on the points `0..n`.
///
/// The relation is stored transitively closed as two bit matrices (rows of
/// successors and rows of predecessors), so `less` and `comparable` are O(1).
/// Values are immutable once built.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PosetJson", into = "PosetJson")]
pub struct Poset {
    n: usize,
    words: usize,
    up: Vec<u64>,
    down: Vec<u64>,
}

/// Wire form of a poset: `{"n": 3, "relations": [[0, 1], [1, 2]]}`.
///
/// Relations need not be closed or be covers; loading applies the
/// transitive closure and rejects cycles. Serialization writes covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    pub relations: Vec<[usize; 2]>,
}

impl TryFrom<PosetJson> for Poset {
    type Error = Error;

    fn try_from(value: PosetJson) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = value.relations.iter().map(|r| (r[0], r[1])).collect();
        Poset::new(value.n, &pairs)
    }
}

impl From<Poset> for PosetJson {
    fn from(p: Poset) -> Self {
        PosetJson {
            n: p.n,
            relations: p.covers().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// Levels `L_1, ..., L_h`: `L_1` holds the minimal points and each later
/// level holds the minimal points of what remains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPartition {
    pub levels: Vec<Vec<usize>>,
}

impl LevelPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

#[inline]
fn get_bit(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn set_bit(row: &mut [u64], i: usize) {
    row[i / 64] |= 1 << (i % 64);
}

fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            }
        })
    })
}

impl Poset {
    /// Builds the transitive closure of `relations` on `n` points.
    pub fn new(n: usize, relations: &[(usize, usize)]) -> Result<Poset> {
        if n == 0 {
            return Err(Error::Range("a poset needs at least one point".into()));
        }
        let words = words_for(n);
        let mut up = vec![0u64; n * words];
        for &(a, b) in relations {
            for index in [a, b] {
                if index >= n {
                    return Err(Error::Index { index, n });
                }
            }
            if a == b {
                return Err(Error::Cycle(a));
            }
            set_bit(&mut up[a * words..(a + 1) * words], b);
        }
        Self::close(n, words, up)
    }

    /// Builds the closure of the relation given by `less(a, b)`.
    pub fn from_fn(n: usize, less: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && less(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Poset::new(n, &pairs)
    }

    /// Builds from a relation the caller guarantees is already a strict
    /// partial order (checked in debug builds).
    pub(crate) fn from_closed_fn(n: usize, less: impl Fn(usize, usize) -> bool) -> Poset {
        let words = words_for(n);
        let mut up = vec![0u64; n * words];
        for a in 0..n {
            let row = &mut up[a * words..(a + 1) * words];
            for b in 0..n {
                if a != b && less(a, b) {
                    set_bit(row, b);
                }
            }
        }
        let p = Self::with_transpose(n, words, up);
        debug_assert!(p.is_valid());
        p
    }

    /// Builds from successor masks of an already closed relation, `n <= 64`.
    pub(crate) fn from_up_masks(up: &[u64]) -> Poset {
        let p = Self::with_transpose(up.len(), 1, up.to_vec());
        debug_assert!(p.is_valid());
        p
    }

    fn close(n: usize, words: usize, mut up: Vec<u64>) -> Result<Poset> {
        // Warshall over bit rows.
        let mut row_k = vec![0u64; words];
        for k in 0..n {
            row_k.copy_from_slice(&up[k * words..(k + 1) * words]);
            for row in up.chunks_mut(words) {
                if get_bit(row, k) {
                    for (w, x) in row.iter_mut().zip(&row_k) {
                        *w |= *x;
                    }
                }
            }
        }
        for i in 0..n {
            if get_bit(&up[i * words..(i + 1) * words], i) {
                return Err(Error::Cycle(i));
            }
        }
        Ok(Self::with_transpose(n, words, up))
    }

    fn with_transpose(n: usize, words: usize, up: Vec<u64>) -> Poset {
        let mut down = vec![0u64; n * words];
        for a in 0..n {
            for b in ones(&up[a * words..(a + 1) * words]) {
                set_bit(&mut down[b * words..(b + 1) * words], a);
            }
        }
        Poset { n, words, up, down }
    }

    pub fn chain(n: usize) -> Poset {
        Poset::from_closed_fn(n, |a, b| a < b)
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_closed_fn(n, |_, _| false)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a < b` in the order.
    #[inline]
    pub fn less(&self, a: usize, b: usize) -> bool {
        get_bit(self.up_row(a), b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.less(a, b) || self.less(b, a)
    }

    fn up_row(&self, a: usize) -> &[u64] {
        &self.up[a * self.words..(a + 1) * self.words]
    }

    fn down_row(&self, a: usize) -> &[u64] {
        &self.down[a * self.words..(a + 1) * self.words]
    }

    /// Points strictly above `a`.
    pub fn above(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.up_row(a))
    }

    /// Points strictly below `a`.
    pub fn below(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.down_row(a))
    }

    /// Successor set of `a` as a bitmask. Only for `n <= 64`.
    #[inline]
    pub fn up_mask(&self, a: usize) -> u64 {
        assert!(self.n <= 64, "bitmask access needs n <= 64");
        self.up[a]
    }

    /// Predecessor set of `a` as a bitmask. Only for `n <= 64`.
    #[inline]
    pub fn down_mask(&self, a: usize) -> u64 {
        assert!(self.n <= 64, "bitmask access needs n <= 64");
        self.down[a]
    }

    pub fn up_degree(&self, a: usize) -> usize {
        self.up_row(a).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn down_degree(&self, a: usize) -> usize {
        self.down_row(a).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of comparable unordered pairs, i.e. edges of the comparability graph.
    pub fn comp(&self) -> usize {
        self.up.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of incomparable unordered pairs.
    pub fn incomp(&self) -> usize {
        self.n * (self.n - 1) / 2 - self.comp()
    }

    /// All ordered pairs `(a, b)` with `a < b` in the order.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| self.above(a).map(move |b| (a, b))).collect()
    }

    /// Edges `{a, b}` of the comparability graph, listed with `a < b` as integers.
    pub fn comparability_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.comp());
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.comparable(a, b) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    /// Cover relations (the transitive reduction).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.above(a) {
                if !self.above(a).any(|c| self.less(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_minimal(&self, a: usize) -> bool {
        self.down_row(a).iter().all(|&w| w == 0)
    }

    pub fn is_maximal(&self, a: usize) -> bool {
        self.up_row(a).iter().all(|&w| w == 0)
    }

    pub fn minimal_points(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.is_minimal(a)).collect()
    }

    pub fn maximal_points(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.is_maximal(a)).collect()
    }

    /// Points sorted so that every point precedes everything above it.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&a| (self.down_degree(a), a));
        order
    }

    /// Checks irreflexivity, antisymmetry and transitive closure.
    pub fn is_valid(&self) -> bool {
        for a in 0..self.n {
            let up = self.up_row(a);
            if get_bit(up, a) || up.iter().zip(self.down_row(a)).any(|(u, d)| u & d != 0) {
                return false;
            }
            for b in self.above(a) {
                if !get_bit(self.down_row(b), a) {
                    return false;
                }
                // up(b) must be contained in up(a)
                if self.up_row(b).iter().zip(up).any(|(x, y)| x & !y != 0) {
                    return false;
                }
            }
        }
        let down_edges: usize = self.down.iter().map(|w| w.count_ones() as usize).sum();
        down_edges == self.comp()
    }

    /// The order with every relation reversed.
    pub fn dual(&self) -> Poset {
        Poset { n: self.n, words: self.words, up: self.down.clone(), down: self.up.clone() }
    }

    /// Length of the longest chain ending at each point (1 for minimal points).
    fn chain_depths(&self) -> Vec<usize> {
        let mut depth = vec![1usize; self.n];
        for v in self.topological_order() {
            depth[v] = 1 + self.below(v).map(|u| depth[u]).max().unwrap_or(0);
        }
        depth
    }

    /// Size of the largest chain.
    pub fn height(&self) -> usize {
        self.chain_depths().into_iter().max().unwrap_or(0)
    }

    pub fn level_partition(&self) -> LevelPartition {
        let depth = self.chain_depths();
        let h = depth.iter().copied().max().unwrap_or(0);
        let mut levels = vec![Vec::new(); h];
        for (v, d) in depth.into_iter().enumerate() {
            levels[d - 1].push(v);
        }
        LevelPartition { levels }
    }

    /// Size of the largest antichain, via a minimum chain cover.
    pub fn width(&self) -> usize {
        self.n - self.max_matching().iter().filter(|m| m.is_some()).count()
    }

    /// A minimum partition into chains; it has `width()` parts.
    pub fn chain_cover(&self) -> Vec<Vec<usize>> {
        let next = self.max_matching();
        let mut has_prev = vec![false; self.n];
        for b in next.iter().flatten() {
            has_prev[*b] = true;
        }
        let mut chains = Vec::new();
        for start in (0..self.n).filter(|&a| !has_prev[a]) {
            let mut chain = vec![start];
            let mut cur = start;
            while let Some(b) = next[cur] {
                chain.push(b);
                cur = b;
            }
            chains.push(chain);
        }
        chains
    }

    /// Hopcroft-Karp on the split graph `a -> b` for `a < b`; returns the
    /// right partner of each left vertex.
    fn max_matching(&self) -> Vec<Option<usize>> {
        const FREE: usize = usize::MAX;
        let n = self.n;
        let adj: Vec<Vec<usize>> = (0..n).map(|a| self.above(a).collect()).collect();
        let mut match_l = vec![FREE; n];
        let mut match_r = vec![FREE; n];
        let mut dist = vec![0usize; n];
        loop {
            let mut queue = VecDeque::new();
            let mut found = false;
            for a in 0..n {
                if match_l[a] == FREE {
                    dist[a] = 0;
                    queue.push_back(a);
                } else {
                    dist[a] = usize::MAX;
                }
            }
            while let Some(a) = queue.pop_front() {
                for &b in &adj[a] {
                    let m = match_r[b];
                    if m == FREE {
                        found = true;
                    } else if dist[m] == usize::MAX {
                        dist[m] = dist[a] + 1;
                        queue.push_back(m);
                    }
                }
            }
            if !found {
                break;
            }
            let mut iter = vec![0usize; n];
            for a in 0..n {
                if match_l[a] == FREE {
                    augment(a, &adj, &mut match_l, &mut match_r, &mut dist, &mut iter);
                }
            }
        }
        match_l.into_iter().map(|b| (b != FREE).then_some(b)).collect()
    }
}

fn augment(
    start: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    iter: &mut [usize],
) -> bool {
    // Iterative DFS along the BFS layering.
    let mut stack = vec![start];
    while let Some(&a) = stack.last() {
        if iter[a] == adj[a].len() {
            dist[a] = usize::MAX;
            stack.pop();
            continue;
        }
        let b = adj[a][iter[a]];
        iter[a] += 1;
        let m = match_r[b];
        if m == usize::MAX {
            // Flip the path: each stacked vertex takes the edge it last tried.
            for &u in stack.iter().rev() {
                let v = adj[u][iter[u] - 1];
                match_l[u] = v;
                match_r[v] = u;
            }
            return true;
        }
        if dist[m] == dist[a] + 1 {
            stack.push(m);
        }
    }
    false
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset(n={}, covers={:?})", self.n, self.covers())
    }
}

impl Poset {
    pub fn to_json(&self) -> PosetJson {
        self.clone().into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("poset json")
    }

    pub fn from_json_str(s: &str) -> Result<Poset> {
        let raw: PosetJson = serde_json::from_str(s)?;
        Poset::try_from(raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_width(p: &Poset) -> usize {
        let n = p.n();
        (0u32..1 << n)
            .filter(|&s| {
                (0..n).all(|a| (0..n).all(|b| s >> a & 1 == 0 || s >> b & 1 == 0 || !p.less(a, b)))
            })
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    fn brute_height(p: &Poset) -> usize {
        let n = p.n();
        (0u32..1 << n)
            .filter(|&s| {
                (0..n).all(|a| {
                    (0..n).all(|b| a == b || s >> a & 1 == 0 || s >> b & 1 == 0 || p.comparable(a, b))
                })
            })
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn closure_adds_implied_pairs() {
        let p = Poset::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.less(0, 2));
        assert_eq!(p.comp(), 3);
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn cycles_and_bad_indices_are_rejected() {
        assert!(matches!(Poset::new(2, &[(0, 1), (1, 0)]), Err(Error::Cycle(_))));
        assert!(matches!(Poset::new(3, &[(0, 0)]), Err(Error::Cycle(0))));
        assert_eq!(Poset::new(2, &[(0, 2)]), Err(Error::Index { index: 2, n: 2 }));
        assert!(matches!(Poset::new(0, &[]), Err(Error::Range(_))));
    }

    #[test]
    fn antichain_and_chain_stats() {
        let a = Poset::new(4, &[]).unwrap();
        assert_eq!((a.comp(), a.height(), a.width()), (0, 1, 4));
        assert_eq!(a.level_partition().levels.len(), 1);
        let c = Poset::chain(5);
        assert_eq!((c.comp(), c.height(), c.width()), (10, 5, 1));
    }

    #[test]
    fn two_three_chains() {
        let p = Poset::new(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert_eq!(p.comp(), 6);
        assert_eq!((p.height(), p.width()), (3, 2));
        assert_eq!((brute_height(&p), brute_width(&p)), (3, 2));
        assert_eq!(p.level_partition().levels, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
    }

    #[test]
    fn wide_poset_uses_multiword_rows() {
        let n = 150;
        let p = Poset::new(n, &[(0, 140), (140, 149), (3, 70)]).unwrap();
        assert!(p.less(0, 149));
        assert_eq!(p.comp(), 4);
        assert_eq!(p.height(), 3);
        assert_eq!(p.width(), n - 3);
        let c = Poset::chain(130);
        assert_eq!(c.width(), 1);
        assert_eq!(c.height(), 130);
    }

    #[test]
    fn json_round_trip_writes_covers() {
        let p = Poset::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let s = p.to_json_string();
        assert_eq!(s, r#"{"n":3,"relations":[[0,1],[1,2]]}"#);
        assert_eq!(Poset::from_json_str(&s).unwrap(), p);
        assert!(matches!(
            Poset::from_json_str(r#"{"n":2,"relations":[[0,1],[1,0]]}"#),
            Err(Error::Cycle(_))
        ));
    }

    fn arb_poset(max_n: usize) -> impl Strategy<Value = Poset> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                // Orient along the labels so the result is acyclic.
                Poset::from_fn(n, |a, b| a < b && bits[a * n + b]).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn invariants_hold_after_closure(p in arb_poset(9)) {
            prop_assert!(p.is_valid());
            prop_assert!(p.comp() <= p.n() * (p.n() - 1) / 2);
            prop_assert_eq!(p.dual().comp(), p.comp());
        }

        #[test]
        fn matching_width_equals_brute_force(p in arb_poset(8)) {
            prop_assert_eq!(p.width(), brute_width(&p));
            prop_assert_eq!(p.height(), brute_height(&p));
            let cover = p.chain_cover();
            prop_assert_eq!(cover.len(), p.width());
            for chain in &cover {
                for w in chain.windows(2) {
                    prop_assert!(p.less(w[0], w[1]));
                }
            }
        }

        #[test]
        fn levels_are_antichains_resting_on_previous(p in arb_poset(9)) {
            let levels = p.level_partition().levels;
            prop_assert_eq!(levels.len(), p.height());
            for (i, level) in levels.iter().enumerate() {
                for &a in level {
                    for &b in level {
                        prop_assert!(!p.comparable(a, b));
                    }
                    if i > 0 {
                        prop_assert!(levels[i - 1].iter().any(|&u| p.less(u, a)));
                    }
                }
            }
        }
    }
}
