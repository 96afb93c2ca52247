use serde::{Deserialize, Serialize};

use super::{
    c_constants, fminus_sparse_exact_count,
    bound_back_degree_upper, bound_half_lower, bound_height_lower, bound_hook_lower,
    bound_hook_lower_simplified, bound_incomp_upper, bound_incomparable_pairs_upper,
    bound_iriarte_lower, bound_martingale_upper, bound_sparse_exp_lower, bound_width_upper,
    fminus_sparse_exact, fplus_dense_exact, Density, LogValue,
};
use crate::count::{count_extensions, hook_lower_bound, BigCount};
use crate::poset::Poset;

/// Absolute slack, in bits, allowed when checking a bound against `log2 e`.
pub const SANDWICH_TOLERANCE: f64 = 1e-9;

/// Every bound that applies to one poset, in `log2` units.
///
/// Field names are stable: JSON and CSV columns use them verbatim. Bounds
/// whose precondition fails are `null` (empty in CSV). The entropy fields
/// are filled by [`crate::entropy::attach_entropy`].
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub comp: usize,
    pub delta: Option<Density>,
    pub height: usize,
    pub width: usize,
    pub e: Option<BigCount>,
    pub log2_e: Option<f64>,

    pub log2_hook_lengths_lower: f64,
    pub log2_iriarte_lower: f64,
    pub log2_sparse_exp_lower: f64,
    pub log2_height_lower: f64,
    pub log2_half_lower: Option<f64>,
    pub log2_hook_formula_lower: Option<f64>,
    pub log2_hook_formula_simplified_lower: Option<f64>,
    pub log2_fminus_sparse_exact: Option<f64>,

    pub log2_factorial_upper: f64,
    pub log2_width_upper: f64,
    pub log2_incomparable_pairs_upper: f64,
    pub log2_back_degree_upper: f64,
    pub log2_martingale_upper: Option<f64>,
    pub log2_incomp_upper: Option<f64>,
    pub log2_fplus_dense_exact: Option<f64>,

    pub H_G: Option<f64>,
    pub H_Gbar: Option<f64>,
    pub kk_lower_log2: Option<f64>,
    pub kk_upper_log2: Option<f64>,
    pub cardinal_lower_log2: Option<f64>,

    /// Whether every lower bound is at most `log2 e` and every upper bound at
    /// least; `None` when `e` was not computed.
    pub sandwich_ok: Option<bool>,
}

impl BoundsReport {
    /// Named lower bounds present in the report.
    pub fn lower_bounds(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("log2_hook_lengths_lower", self.log2_hook_lengths_lower),
            ("log2_iriarte_lower", self.log2_iriarte_lower),
            ("log2_sparse_exp_lower", self.log2_sparse_exp_lower),
            ("log2_height_lower", self.log2_height_lower),
        ];
        let optional = [
            ("log2_half_lower", self.log2_half_lower),
            ("log2_hook_formula_lower", self.log2_hook_formula_lower),
            ("log2_hook_formula_simplified_lower", self.log2_hook_formula_simplified_lower),
            ("log2_fminus_sparse_exact", self.log2_fminus_sparse_exact),
            ("kk_lower_log2", self.kk_lower_log2),
            ("cardinal_lower_log2", self.cardinal_lower_log2),
        ];
        out.extend(optional.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))));
        out
    }

    /// Named upper bounds present in the report.
    pub fn upper_bounds(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("log2_factorial_upper", self.log2_factorial_upper),
            ("log2_width_upper", self.log2_width_upper),
            ("log2_incomparable_pairs_upper", self.log2_incomparable_pairs_upper),
            ("log2_back_degree_upper", self.log2_back_degree_upper),
        ];
        let optional = [
            ("log2_martingale_upper", self.log2_martingale_upper),
            ("log2_incomp_upper", self.log2_incomp_upper),
            ("log2_fplus_dense_exact", self.log2_fplus_dense_exact),
            ("kk_upper_log2", self.kk_upper_log2),
        ];
        out.extend(optional.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))));
        out
    }

    /// Bounds that fail to bracket `log2 e` by more than `slack` bits.
    pub fn violations_with_slack(&self, slack: f64) -> Vec<String> {
        let Some(log2_e) = self.log2_e else { return Vec::new() };
        let mut out = Vec::new();
        for (name, v) in self.lower_bounds() {
            if v > log2_e + slack {
                out.push(format!("{name} = {v} > log2 e = {log2_e}"));
            }
        }
        for (name, v) in self.upper_bounds() {
            if v < log2_e - slack {
                out.push(format!("{name} = {v} < log2 e = {log2_e}"));
            }
        }
        out
    }

    pub fn violations(&self) -> Vec<String> {
        self.violations_with_slack(SANDWICH_TOLERANCE)
    }

    pub(crate) fn refresh_sandwich(&mut self, slack: f64) {
        self.sandwich_ok = self.log2_e.map(|_| self.violations_with_slack(slack).is_empty());
    }
}

/// All bounds that apply to `p`, with the exact count when it is within the
/// counting cap.
pub fn bounds_report(p: &Poset) -> BoundsReport {
    let e = count_extensions(p).ok();
    bounds_report_with_count(p, e)
}

/// As [`bounds_report`] but with a count supplied by the caller (or none).
pub fn bounds_report_with_count(p: &Poset, e: Option<BigCount>) -> BoundsReport {
    let n = p.n();
    let comp = p.comp();
    let delta = Density::of_comp(comp, n);
    let with_delta = |f: fn(usize, Density) -> crate::Result<LogValue>| {
        delta.and_then(|d| f(n, d).ok()).map(LogValue::log2)
    };
    let log2_e = e.as_ref().map(BigCount::log2);
    let mut report = BoundsReport {
        n,
        comp,
        delta,
        height: p.height(),
        width: p.width(),
        log2_e,
        e,
        log2_hook_lengths_lower: hook_lower_bound(p).log2(),
        log2_iriarte_lower: bound_iriarte_lower(p).log2(),
        log2_sparse_exp_lower: bound_sparse_exp_lower(p).log2(),
        log2_height_lower: bound_height_lower(p).log2(),
        log2_half_lower: with_delta(bound_half_lower),
        log2_hook_formula_lower: with_delta(bound_hook_lower),
        log2_hook_formula_simplified_lower: with_delta(bound_hook_lower_simplified),
        log2_fminus_sparse_exact: with_delta(fminus_sparse_exact),
        log2_factorial_upper: LogValue::log2_factorial(n).log2(),
        log2_width_upper: bound_width_upper(p).log2(),
        log2_incomparable_pairs_upper: p.incomp() as f64,
        log2_back_degree_upper: bound_back_degree_upper(p).log2(),
        log2_martingale_upper: with_delta(bound_martingale_upper),
        log2_incomp_upper: with_delta(bound_incomp_upper),
        log2_fplus_dense_exact: delta
            .and_then(|d| fplus_dense_exact(n, d).ok())
            .map(|c| c.log2()),
        H_G: None,
        H_Gbar: None,
        kk_lower_log2: None,
        kk_upper_log2: None,
        cardinal_lower_log2: None,
        sandwich_ok: None,
    };
    debug_assert!(delta.is_none_or(|d| {
        (bound_incomparable_pairs_upper(n, d).unwrap().log2() - report.log2_incomparable_pairs_upper).abs() < 1e-9
    }));
    report.refresh_sandwich(SANDWICH_TOLERANCE);
    report
}

/// The density-only formulas at `(n, delta)`, with no poset involved.
///
/// Formulas whose precondition fails are `null`, and the failed guard is
/// listed in `skipped`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaReport {
    pub n: usize,
    pub delta: Density,
    pub log2_martingale_upper: Option<f64>,
    pub log2_incomp_upper: Option<f64>,
    pub log2_incomparable_pairs_upper: Option<f64>,
    pub fplus_dense_exact: Option<BigCount>,
    pub log2_half_lower: Option<f64>,
    pub log2_hook_formula_lower: Option<f64>,
    pub log2_hook_formula_simplified_lower: Option<f64>,
    pub fminus_sparse_exact: Option<BigCount>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    pub c4: Option<f64>,
    pub c2_min_n: Option<f64>,
    pub c4_min_n: Option<f64>,
    pub skipped: Vec<String>,
}

pub fn formula_report(n: usize, delta: Density) -> crate::Result<FormulaReport> {
    if n == 0 {
        return Err(crate::Error::Range("n must be positive".into()));
    }
    let mut skipped = Vec::new();
    let mut keep = |name: &str, r: crate::Result<LogValue>| match r {
        Ok(v) => Some(v.log2()),
        Err(e) => {
            skipped.push(format!("{name}: {e}"));
            None
        }
    };
    let log2_martingale_upper = keep("log2_martingale_upper", bound_martingale_upper(n, delta));
    let log2_incomp_upper = keep("log2_incomp_upper", bound_incomp_upper(n, delta));
    let log2_incomparable_pairs_upper =
        keep("log2_incomparable_pairs_upper", bound_incomparable_pairs_upper(n, delta));
    let log2_half_lower = keep("log2_half_lower", bound_half_lower(n, delta));
    let log2_hook_formula_lower = keep("log2_hook_formula_lower", bound_hook_lower(n, delta));
    let log2_hook_formula_simplified_lower =
        keep("log2_hook_formula_simplified_lower", bound_hook_lower_simplified(n, delta));
    let mut exact = |name: &str, r: crate::Result<BigCount>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            skipped.push(format!("{name}: {e}"));
            None
        }
    };
    let fplus = exact("fplus_dense_exact", fplus_dense_exact(n, delta));
    let fminus = exact("fminus_sparse_exact", fminus_sparse_exact_count(n, delta));
    let c = match c_constants(delta) {
        Ok(c) => Some(c),
        Err(e) => {
            skipped.push(format!("c_constants: {e}"));
            None
        }
    };
    Ok(FormulaReport {
        n,
        delta,
        log2_martingale_upper,
        log2_incomp_upper,
        log2_incomparable_pairs_upper,
        fplus_dense_exact: fplus,
        log2_half_lower,
        log2_hook_formula_lower,
        log2_hook_formula_simplified_lower,
        fminus_sparse_exact: fminus,
        c1: c.map(|c| c.c1),
        c2: c.map(|c| c.c2),
        c3: c.map(|c| c.c3),
        c4: c.map(|c| c.c4),
        c2_min_n: c.map(|c| c.c2_min_n),
        c4_min_n: c.map(|c| c.c4_min_n),
        skipped,
    })
}
