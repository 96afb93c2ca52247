//! Clique polytopes of comparability and incomparability graphs.
//!
//! For a poset with comparability graph `G`, cliques of `G` are chains and
//! cliques of the complement are antichains. [`graph_entropy`] minimises
//! `-(1/n) sum log2 x_v` over the clique polytope, and
//! [`stanley_volume_mc`] estimates `n!` times the polytope volume, which
//! equals the number of linear extensions.

mod solver;
mod volume;

use serde::{Deserialize, Serialize};

pub use solver::{graph_entropy, graph_entropy_with, EntropyResult, DEFAULT_TOL};
pub use volume::{stanley_volume_mc, VolumeEstimate, MIN_SAMPLES};

use crate::bounds::{BoundsReport, LogValue};
use crate::count::{count_extensions, BigCount};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poset::Poset;

/// Simple graph on at most 64 vertices, stored as adjacency bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    adj: Vec<u64>,
}

impl UndirectedGraph {
    pub const MAX_N: usize = 64;

    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<UndirectedGraph> {
        if n > Self::MAX_N {
            return Err(Error::Range(format!("graphs are limited to {} vertices, got {n}", Self::MAX_N)));
        }
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::Index { index: v, n });
                }
            }
            if a == b {
                return Err(Error::Range(format!("loop at vertex {a}")));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(UndirectedGraph { n, adj })
    }

    fn check_poset(p: &Poset) -> Result<()> {
        if p.n() > Self::MAX_N {
            return Err(Error::Range(format!("graphs are limited to {} vertices, got {}", Self::MAX_N, p.n())));
        }
        Ok(())
    }

    /// The comparability graph `G` of `p`.
    pub fn comparability(p: &Poset) -> Result<UndirectedGraph> {
        Self::check_poset(p)?;
        let adj = (0..p.n()).map(|v| p.up_mask(v) | p.down_mask(v)).collect();
        Ok(UndirectedGraph { n: p.n(), adj })
    }

    /// The incomparability graph, the complement of `G`.
    pub fn incomparability(p: &Poset) -> Result<UndirectedGraph> {
        Ok(Self::comparability(p)?.complement())
    }

    pub fn complement(&self) -> UndirectedGraph {
        let all = full_mask(self.n);
        let adj = (0..self.n).map(|v| !self.adj[v] & all & !(1 << v)).collect();
        UndirectedGraph { n: self.n, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn neighbours(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| bits(self.adj[a] >> a >> 1).map(move |d| (a, a + 1 + d)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn maximal_cliques(&self) -> Result<Vec<Vec<usize>>> {
        self.maximal_cliques_with(Limits::global())
    }

    /// All inclusion-maximal cliques, each sorted, in lexicographic order.
    pub fn maximal_cliques_with(&self, limits: &Limits) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        self.bron_kerbosch(0, full_mask(self.n), 0, &mut out, limits.max_cliques)?;
        let mut cliques: Vec<Vec<usize>> = out.into_iter().map(|m| bits(m).collect()).collect();
        cliques.sort();
        Ok(cliques)
    }

    fn bron_kerbosch(&self, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>, limit: usize) -> Result<()> {
        if p == 0 {
            if x == 0 {
                if out.len() >= limit {
                    return Err(Error::Capacity(format!("more than {limit} maximal cliques")));
                }
                out.push(r);
            }
            return Ok(());
        }
        let pivot = bits(p | x).max_by_key(|&u| (self.adj[u] & p).count_ones()).unwrap();
        for v in bits(p & !self.adj[pivot]) {
            let bit = 1u64 << v;
            self.bron_kerbosch(r | bit, p & self.adj[v], x & self.adj[v], out, limit)?;
            p &= !bit;
            x |= bit;
        }
        Ok(())
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

/// Inclusion-maximal chains, each listed bottom to top, sorted.
///
/// A maximal chain is a path of cover relations from a minimal to a maximal
/// point, so the enumeration walks the cover graph.
pub fn maximal_chains(p: &Poset) -> Result<Vec<Vec<usize>>> {
    maximal_chains_with(p, Limits::global())
}

pub fn maximal_chains_with(p: &Poset, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let n = p.n();
    let mut up_covers = vec![Vec::new(); n];
    for (a, b) in p.covers() {
        up_covers[a].push(b);
    }
    let mut out = Vec::new();
    let mut path = Vec::new();
    for m in p.minimal_points() {
        path.push(m);
        walk_chains(&up_covers, &mut path, &mut out, limits.max_cliques)?;
        path.pop();
    }
    out.sort();
    Ok(out)
}

fn walk_chains(up: &[Vec<usize>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) -> Result<()> {
    let last = *path.last().unwrap();
    if up[last].is_empty() {
        if out.len() >= limit {
            return Err(Error::Capacity(format!("more than {limit} maximal chains")));
        }
        out.push(path.clone());
        return Ok(());
    }
    for &b in &up[last] {
        path.push(b);
        walk_chains(up, path, out, limit)?;
        path.pop();
    }
    Ok(())
}

/// Inclusion-maximal antichains, each sorted, in lexicographic order.
pub fn maximal_antichains(p: &Poset) -> Result<Vec<Vec<usize>>> {
    UndirectedGraph::incomparability(p)?.maximal_cliques()
}

/// Entropy bounds on `e(P)` next to the exact count.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySandwich {
    pub n: usize,
    pub H_G: f64,
    pub H_Gbar: f64,
    pub gap_G: f64,
    pub gap_Gbar: f64,
    pub e: BigCount,
    pub log2_e: f64,
    /// `log2(n!) - n H(G)`.
    pub kk_lower_log2: f64,
    /// `n H(Gbar)`.
    pub kk_upper_log2: f64,
    /// `n H(Gbar) / 2`.
    pub cardinal_lower_log2: f64,
    /// `n * tol`, the slack allowed on every comparison.
    pub slack_log2: f64,
    pub kk_lower_ok: bool,
    pub kk_upper_ok: bool,
    pub cardinal_ok: bool,
}

impl EntropySandwich {
    pub fn all_ok(&self) -> bool {
        self.kk_lower_ok && self.kk_upper_ok && self.cardinal_ok
    }
}

/// Solves for `H(G)` and `H(Gbar)` and compares the entropy bounds with the
/// exact count, each with slack `2^(n tol)`.
pub fn entropy_sandwich(p: &Poset, tol: f64) -> Result<EntropySandwich> {
    let e = count_extensions(p)?;
    entropy_sandwich_with_count(p, tol, e)
}

pub fn entropy_sandwich_with_count(p: &Poset, tol: f64, e: BigCount) -> Result<EntropySandwich> {
    let n = p.n();
    let g = UndirectedGraph::comparability(p)?;
    let hg = graph_entropy(&g, tol)?;
    let hgbar = graph_entropy(&g.complement(), tol)?;
    let nf = n as f64;
    let log2_e = e.log2();
    let kk_lower_log2 = LogValue::log2_factorial(n).log2() - nf * hg.h;
    let kk_upper_log2 = nf * hgbar.h;
    let cardinal_lower_log2 = kk_upper_log2 / 2.0;
    let slack_log2 = nf * tol + 1e-9;
    Ok(EntropySandwich {
        n,
        H_G: hg.h,
        H_Gbar: hgbar.h,
        gap_G: hg.gap,
        gap_Gbar: hgbar.gap,
        e,
        log2_e,
        kk_lower_log2,
        kk_upper_log2,
        cardinal_lower_log2,
        slack_log2,
        kk_lower_ok: kk_lower_log2 <= log2_e + slack_log2,
        kk_upper_ok: log2_e <= kk_upper_log2 + slack_log2,
        cardinal_ok: cardinal_lower_log2 <= log2_e + slack_log2,
    })
}

/// Copies the entropy fields into a bounds report and rechecks its sandwich
/// with the entropy slack.
pub fn attach_entropy(report: &mut BoundsReport, s: &EntropySandwich) {
    report.H_G = Some(s.H_G);
    report.H_Gbar = Some(s.H_Gbar);
    report.kk_lower_log2 = Some(s.kk_lower_log2);
    report.kk_upper_log2 = Some(s.kk_upper_log2);
    report.cardinal_lower_log2 = Some(s.cardinal_lower_log2);
    report.refresh_sandwich(s.slack_log2);
}
