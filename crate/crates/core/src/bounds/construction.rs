//! Checks that the example families used as extremal witnesses meet their
//! comparable-pair thresholds and extension-count inequalities.

use std::f64::consts::LOG2_E;

use serde::{Deserialize, Serialize};

use super::{Density, LogValue};
use crate::construct::{antichain_example, balanced_parts, chain_example, Partition};
use crate::error::{Error, Result};

/// Relative tolerance for log-space inequalities.
pub const CONSTRUCTION_TOLERANCE: f64 = 1e-6;

/// Families are also built explicitly (to cross-check `comp`) up to this size.
pub const BUILD_MAX_N: usize = 2000;

/// One inequality `lhs >= rhs` between `log2` quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub statement: String,
    pub lhs_log2: f64,
    pub rhs_log2: f64,
    pub holds: bool,
}

impl Inequality {
    fn new(statement: impl Into<String>, lhs_log2: f64, rhs_log2: f64) -> Inequality {
        let scale = 1f64.max(lhs_log2.abs()).max(rhs_log2.abs());
        let holds = lhs_log2 >= rhs_log2 - CONSTRUCTION_TOLERANCE * scale;
        Inequality { statement: statement.into(), lhs_log2, rhs_log2, holds }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionCheck {
    pub family: String,
    pub parts: Vec<usize>,
    /// `comp` from the part sizes.
    pub comp: u128,
    /// `">="` or `"<="` against `delta * C(n,2)`.
    pub comp_relation: String,
    pub comp_ok: bool,
    /// Whether the explicitly built poset has the same `comp`; `None` above [`BUILD_MAX_N`].
    pub built_comp_matches: Option<bool>,
    pub log2_e: f64,
    pub inequalities: Vec<Inequality>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub n: usize,
    pub delta: Density,
    pub checks: Vec<ConstructionCheck>,
    /// Families whose parameter range excludes this `(n, delta)`, with the reason.
    pub skipped: Vec<String>,
    pub all_ok: bool,
}

fn pairs(k: u128) -> u128 {
    k * k.saturating_sub(1) / 2
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Chains,
    Antichains,
}

fn check(
    family: String,
    kind: Kind,
    parts: Partition,
    delta: Density,
    inequalities: Vec<Inequality>,
) -> ConstructionCheck {
    let n = parts.n();
    let within: u128 = parts.parts().iter().map(|&s| pairs(s as u128)).sum();
    let (comp, comp_relation, comp_ok) = match kind {
        Kind::Chains => (within, "<=", delta.admits_at_most(within as usize, n)),
        Kind::Antichains => {
            let c = pairs(n as u128) - within;
            (c, ">=", delta.admits_at_least(c as usize, n))
        }
    };
    let built_comp_matches = (n <= BUILD_MAX_N).then(|| {
        let p = match kind {
            Kind::Chains => chain_example(&parts),
            Kind::Antichains => antichain_example(&parts),
        };
        p.comp() as u128 == comp
    });
    let log2_e = match kind {
        Kind::Chains => LogValue::log2_multinomial(parts.parts()),
        Kind::Antichains => LogValue::log2_factorial_product(parts.parts()),
    }
    .log2();
    let ok = comp_ok && built_comp_matches != Some(false) && inequalities.iter().all(|i| i.holds);
    ConstructionCheck {
        family,
        parts: parts.parts().to_vec(),
        comp,
        comp_relation: comp_relation.into(),
        comp_ok,
        built_comp_matches,
        log2_e,
        inequalities,
        ok,
    }
}

/// `x log2(x / e)`, the log of `(x/e)^x`.
fn xlog_over_e(x: f64) -> f64 {
    x * (x.log2() - LOG2_E)
}

/// Builds the four witness families for `(n, delta)` and verifies each one's
/// `comp` threshold and extension-count inequalities in log space.
///
/// * balanced antichains `Ã(n, ceil(1/(1-delta)))`, `delta < 1`;
/// * two antichains `A(ceil(delta n), n - ceil(delta n))`, `1/n <= delta <= 1/2`;
/// * balanced chains `C̃(n, ceil(1/delta))`;
/// * two chains `C(ceil((1-delta) n), ...)`, `1/2 <= delta < 1` and `1 - delta >= 1/n`.
pub fn construction_bounds_check(n: usize, delta: Density) -> Result<ConstructionReport> {
    if n == 0 {
        return Err(Error::Range("n must be positive".into()));
    }
    let nf = n as f64;
    let d = delta.as_f64();
    let log2_nfact = LogValue::log2_factorial(n).log2();
    let mut checks = Vec::new();
    let mut skipped = Vec::new();

    match delta.ceil_inverse_complement() {
        None => skipped.push("balanced antichains: needs delta < 1".to_string()),
        Some(k) if k as usize > n => {
            skipped.push(format!("balanced antichains: k = {k} exceeds n = {n}"))
        }
        Some(k) => {
            let k = k as usize;
            let parts = balanced_parts(n, k)?;
            let log2_ratio = LogValue::log2_factorial_product(parts.parts()).log2() - log2_nfact;
            let c = delta.complement_f64();
            let ineq = vec![
                Inequality::new("log2(e/n!) >= -n log2 k", log2_ratio, -nf * (k as f64).log2()),
                Inequality::new(
                    "-n log2 k >= n log2((1-delta)/(2-delta))",
                    -nf * (k as f64).log2(),
                    nf * (c / (2.0 - d)).log2(),
                ),
            ];
            checks.push(check(format!("balanced_antichain({n},{k})"), Kind::Antichains, parts, delta, ineq));
        }
    }

    let t = delta.ceil_times(n) as usize;
    if 2 * delta.num() > delta.den() || (delta.num() as u128 * n as u128) < delta.den() as u128 {
        skipped.push("two antichains: needs 1/n <= delta <= 1/2".to_string());
    } else {
        let parts = Partition::new(if t == n { vec![t] } else { vec![t, n - t] })?;
        let rate = (LogValue::log2_factorial_product(parts.parts()).log2() - log2_nfact) / nf;
        let x = d + 1.0 / nf;
        let ineq = vec![
            Inequality::new("(1/n) log2(e/n!) >= (delta+1/n) log2((delta+1/n)/e)", rate, xlog_over_e(x)),
            Inequality::new(
                "(delta+1/n) log2((delta+1/n)/e) >= 2 delta log2(2 delta/e)",
                xlog_over_e(x),
                xlog_over_e(2.0 * d),
            ),
        ];
        checks.push(check(format!("two_block_antichain({n},{t})"), Kind::Antichains, parts, delta, ineq));
    }

    let k = delta.ceil_inverse() as usize;
    if k > n {
        skipped.push(format!("balanced chains: k = {k} exceeds n = {n}"));
    } else {
        let parts = balanced_parts(n, k)?;
        let log2_e = LogValue::log2_multinomial(parts.parts()).log2();
        let ineq = vec![
            Inequality::new("n log2 k >= log2 e", nf * (k as f64).log2(), log2_e),
            Inequality::new("log2(2/delta) >= log2 k", (2.0 / d).log2(), (k as f64).log2()),
        ];
        checks.push(check(format!("balanced_chain({n},{k})"), Kind::Chains, parts, delta, ineq));
    }

    let t = delta.ceil_complement_times(n) as usize;
    if 2 * delta.num() < delta.den() || delta.is_one() {
        skipped.push("two chains: needs 1/2 <= delta < 1".to_string());
    } else if ((delta.den() - delta.num()) as u128 * n as u128) < delta.den() as u128 {
        skipped.push("two chains: needs 1 - delta >= 1/n".to_string());
    } else {
        let parts = Partition::new(if t == n { vec![t] } else { vec![t, n - t] })?;
        let rate = LogValue::log2_multinomial(parts.parts()).log2() / nf;
        let x = delta.complement_f64() + 1.0 / nf;
        let y = 2.0 * delta.complement_f64();
        let ineq = vec![
            Inequality::new("(1-delta+1/n) log2(e/(1-delta+1/n)) >= (1/n) log2 e", -xlog_over_e(x), rate),
            Inequality::new(
                "2(1-delta) log2(e/(2(1-delta))) >= (1-delta+1/n) log2(e/(1-delta+1/n))",
                -xlog_over_e(y),
                -xlog_over_e(x),
            ),
        ];
        checks.push(check(format!("two_block_chain({n},{t})"), Kind::Chains, parts, delta, ineq));
    }

    let all_ok = checks.iter().all(|c| c.ok);
    Ok(ConstructionReport { n, delta, checks, skipped, all_ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dens(num: u64, den: u64) -> Density {
        Density::new(num, den).unwrap()
    }

    #[test]
    fn half_density_at_one_thousand() {
        let r = construction_bounds_check(1000, dens(1, 2)).unwrap();
        assert_eq!(r.checks.len(), 4, "{:?}", r.skipped);
        assert!(r.all_ok, "{r:#?}");
        let a = &r.checks[0];
        assert_eq!(a.family, "balanced_antichain(1000,2)");
        assert!(a.comp * 2 >= 1000 * 999 / 2);
        assert!(a.log2_e - LogValue::log2_factorial(1000).log2() >= 1000.0 * (1.0f64 / 3.0).log2());
        assert_eq!(a.built_comp_matches, Some(true));
    }

    #[test]
    fn third_and_tenth() {
        let r = construction_bounds_check(1000, dens(1, 3)).unwrap();
        let c = r.checks.iter().find(|c| c.family == "balanced_chain(1000,3)").unwrap();
        assert!(c.comp * 3 <= 1000 * 999 / 2);
        assert!(c.log2_e <= 1000.0 * 3f64.log2());
        assert!(r.all_ok);
        let r = construction_bounds_check(100, dens(1, 10)).unwrap();
        let a = r.checks.iter().find(|c| c.family == "two_block_antichain(100,10)").unwrap();
        assert_eq!(a.comp, 900);
        assert!(r.all_ok);
    }

    #[test]
    fn ranges_skip_families() {
        let r = construction_bounds_check(50, dens(9, 10)).unwrap();
        assert_eq!(r.checks.len(), 3);
        assert!(r.all_ok);
        assert_eq!(construction_bounds_check(10, Density::ONE).unwrap().checks.len(), 1);
        assert!(construction_bounds_check(0, dens(1, 2)).is_err());
    }

    #[test]
    fn huge_n_stays_in_log_space() {
        let r = construction_bounds_check(1_000_000, dens(1, 3)).unwrap();
        assert!(r.all_ok);
        assert!(r.checks.iter().all(|c| c.built_comp_matches.is_none()));
    }
}
