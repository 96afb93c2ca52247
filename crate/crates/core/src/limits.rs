//! Size caps for the exponential algorithms.
//!
//! Defaults can be raised (never lowered) through the `EXTENSO_CAP_N`
//! environment variable.

use std::sync::OnceLock;

pub const CAP_ENV: &str = "EXTENSO_CAP_N";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest poset handed to the ideal-lattice counter.
    pub count_max_n: usize,
    /// Largest ideal layer the counter may hold in memory.
    pub max_ideals_per_level: usize,
    /// Largest ground set for labeled-poset enumeration.
    pub enumerate_max_n: usize,
    /// Largest `t` for the Boolean lattice on `2^t` points.
    pub boolean_max_t: u32,
    /// Largest number of comparable pairs for orientation profiles.
    pub orientation_max_comp: usize,
    /// Blow-up guard for maximal chain/antichain/clique enumeration.
    pub max_cliques: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            count_max_n: 20,
            max_ideals_per_level: 1 << 22,
            enumerate_max_n: 6,
            boolean_max_t: 4,
            orientation_max_comp: 14,
            max_cliques: 1 << 20,
        }
    }
}

impl Limits {
    /// Defaults, raised to the value of `EXTENSO_CAP_N` when it is set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            limits.raise_to(cap);
        }
        limits
    }

    /// Raises the point-count caps to at least `cap` (counting stays below 64).
    pub fn raise_to(&mut self, cap: usize) {
        self.count_max_n = self.count_max_n.max(cap.min(63));
        self.enumerate_max_n = self.enumerate_max_n.max(cap);
        while self.boolean_max_t < 6 && (1usize << (self.boolean_max_t + 1)) <= self.count_max_n {
            self.boolean_max_t += 1;
        }
    }

    /// Process-wide limits, read from the environment once.
    pub fn global() -> &'static Limits {
        static LIMITS: OnceLock<Limits> = OnceLock::new();
        LIMITS.get_or_init(Limits::from_env)
    }
}
