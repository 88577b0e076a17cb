//! Growth series, log-log exponent fits and the theorem-level comparisons.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GeneratingSet, Group};
use crate::quotient::{certified_graded_subgroup, detect_ball_certified, solve_min_weights};
use crate::series::bass_degree;
use crate::spec::GroupSpec;

/// Where a series stopped early and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cutoff {
    /// First `n` without a value.
    pub at: u64,
    pub reason: String,
}

/// Exact integer values indexed by strictly increasing `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthSeries {
    pub label: String,
    pub provenance: String,
    points: Vec<(u64, BigInt)>,
    pub cutoff: Option<Cutoff>,
}

impl GrowthSeries {
    pub fn empty(label: &str, provenance: &str) -> Self {
        GrowthSeries {
            label: label.to_string(),
            provenance: provenance.to_string(),
            points: Vec::new(),
            cutoff: None,
        }
    }

    pub fn new(label: &str, provenance: &str, points: Vec<(u64, BigInt)>) -> Result<Self> {
        let mut s = Self::empty(label, provenance);
        for (n, v) in points {
            s.push(n, v)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, n: u64, value: BigInt) -> Result<()> {
        if let Some(&(last, _)) = self.points.last() {
            if n <= last {
                return Err(Error::Invalid(format!(
                    "series indices must increase: {n} after {last}"
                )));
            }
        }
        if !value.is_positive() {
            return Err(Error::Invalid(format!("series value at n = {n} must be positive")));
        }
        self.points.push((n, value));
        Ok(())
    }

    pub fn points(&self) -> &[(u64, BigInt)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.cutoff.is_none()
    }

    pub fn value_at(&self, n: u64) -> Option<&BigInt> {
        self.points
            .binary_search_by_key(&n, |p| p.0)
            .ok()
            .map(|i| &self.points[i].1)
    }
}

/// Least-squares fit of `log value = slope · log n + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub range: (u64, u64),
    pub points: usize,
}

/// Natural log of a positive big integer, exact in magnitude beyond `f64` range.
pub fn ln_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top: BigInt = v >> shift;
    top.to_f64().expect("64-bit mantissa").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Fits over points with `lo ≤ n ≤ hi` (all points when `range` is `None`).
/// Needs at least 4 points with `n ≥ 1`.
pub fn fit_exponent(series: &GrowthSeries, range: Option<(u64, u64)>) -> Result<ExponentFit> {
    let (lo, hi) = range.unwrap_or((1, u64::MAX));
    let pts: Vec<(u64, f64, f64)> = series
        .points()
        .iter()
        .filter(|(n, _)| *n >= lo.max(1) && *n <= hi)
        .map(|(n, v)| (*n, (*n as f64).ln(), ln_big(v)))
        .collect();
    if pts.len() < 4 {
        return Err(Error::Invalid(format!(
            "exponent fit needs at least 4 points, {} in range",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.2).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.1 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.1 - mx) * (p.2 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.2 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts
        .iter()
        .map(|p| (p.2 - (slope * p.1 + intercept)).powi(2))
        .sum();
    let r2 = if syy <= f64::EPSILON * k {
        1.0
    } else {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    Ok(ExponentFit {
        slope,
        intercept,
        r2,
        range: (pts[0].0, pts[pts.len() - 1].0),
        points: pts.len(),
    })
}

/// Powers of two `2^lo_exp ..= n_max`.
pub fn power_grid(start: u64, n_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = start.max(1);
    while n <= n_max {
        out.push(n);
        n *= 2;
    }
    out
}

/// Index of the certified graded quotient at each `n`: an upper estimate of
/// full residual finiteness growth within the lattice family.
pub fn phi_upper_series(group: &Group, gens: &GeneratingSet, n_list: &[u64]) -> Result<GrowthSeries> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let values: Vec<Result<(u64, BigInt)>> = ns
        .par_iter()
        .map(|&n| {
            let sub = certified_graded_subgroup(group, gens, n)?;
            let check = detect_ball_certified(group, gens, n, &sub)?;
            assert!(check.detected, "graded moduli are certified by construction");
            Ok((n, sub.index()))
        })
        .collect();
    let mut series = GrowthSeries::empty(&format!("phi upper estimate of {group}"), "phi_upper_series");
    for v in values {
        let (n, idx) = v?;
        series.push(n, idx)?;
    }
    Ok(series)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    StrictlyGreater,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "equal",
            Verdict::StrictlyGreater => "strictly-greater",
        })
    }
}

/// Word growth degree against the lattice-quotient exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCReport {
    pub group: String,
    pub bass_degree: usize,
    pub solver_exponent: usize,
    pub verdict: Verdict,
    /// Empirical slope of the phi upper series over `n ∈ {4, 8, 16, 32}`.
    pub phi_fit: ExponentFit,
}

pub fn theorem_c_report(group: &Group, gens: &GeneratingSet) -> Result<TheoremCReport> {
    let bass = bass_degree(group)?;
    let b = solve_min_weights(group)?.exponent;
    let verdict = if b == bass {
        Verdict::Equal
    } else if b > bass {
        Verdict::StrictlyGreater
    } else {
        return Err(Error::Internal(format!(
            "solver exponent {b} below the word growth degree {bass} for {group}"
        )));
    };
    let phi = phi_upper_series(group, gens, &[4, 8, 16, 32])?;
    Ok(TheoremCReport {
        group: group.to_string(),
        bass_degree: bass,
        solver_exponent: b,
        verdict,
        phi_fit: fit_exponent(&phi, None)?,
    })
}

/// Exponent agreement of the phi upper series under two generating sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceCheck {
    pub fit_a: ExponentFit,
    pub fit_b: ExponentFit,
    pub difference: f64,
    pub passed: bool,
}

pub const EXPONENT_TOLERANCE: f64 = 0.2;

pub fn generating_set_invariance(
    gens_a: &GeneratingSet,
    gens_b: &GeneratingSet,
    n_list: &[u64],
) -> Result<InvarianceCheck> {
    let group = gens_a.group();
    if gens_b.group() != group {
        return Err(Error::MixedGroups);
    }
    let fit_a = fit_exponent(&phi_upper_series(group, gens_a, n_list)?, None)?;
    let fit_b = fit_exponent(&phi_upper_series(group, gens_b, n_list)?, None)?;
    let difference = (fit_a.slope - fit_b.slope).abs();
    Ok(InvarianceCheck {
        fit_a,
        fit_b,
        difference,
        passed: difference < EXPONENT_TOLERANCE,
    })
}

/// Solver exponent of a direct product against the sum over its factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCheck {
    pub left: String,
    pub right: String,
    pub exponent_left: usize,
    pub exponent_right: usize,
    pub exponent_product: usize,
    pub holds: bool,
    pub equality: bool,
}

pub fn product_check(left: &GroupSpec, right: &GroupSpec) -> Result<ProductCheck> {
    let gl = Group::new(left)?;
    let gr = Group::new(right)?;
    let gp = Group::new(&GroupSpec::product(vec![left.clone(), right.clone()]))?;
    let el = solve_min_weights(&gl)?.exponent;
    let er = solve_min_weights(&gr)?.exponent;
    let ep = solve_min_weights(&gp)?.exponent;
    Ok(ProductCheck {
        left: gl.to_string(),
        right: gr.to_string(),
        exponent_left: el,
        exponent_right: er,
        exponent_product: ep,
        holds: ep <= el + er,
        equality: ep == el + er,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub invariance: InvarianceCheck,
    pub product: ProductCheck,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.invariance.passed && self.product.holds
    }
}

pub fn invariance_and_product_checks(
    gens_a: &GeneratingSet,
    gens_b: &GeneratingSet,
    other: &GroupSpec,
    n_list: &[u64],
) -> Result<PropertyReport> {
    Ok(PropertyReport {
        invariance: generating_set_invariance(gens_a, gens_b, n_list)?,
        product: product_check(gens_a.group().spec(), other)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: &str) -> Group {
        Group::parse(spec).unwrap()
    }

    fn closed_form(f: impl Fn(u64) -> u64, ns: &[u64]) -> GrowthSeries {
        GrowthSeries::new("t", "test", ns.iter().map(|&n| (n, BigInt::from(f(n)))).collect()).unwrap()
    }

    #[test]
    fn series_invariants() {
        let mut s = GrowthSeries::empty("t", "test");
        s.push(1, BigInt::from(3)).unwrap();
        assert!(s.push(1, BigInt::from(4)).is_err());
        assert!(s.push(2, BigInt::from(0)).is_err());
        assert_eq!(s.value_at(1), Some(&BigInt::from(3)));
    }

    #[test]
    fn fit_examples() {
        let cube = closed_form(|n| n * n * n, &[1, 2, 3, 4, 5, 6, 7, 8]);
        let f = fit_exponent(&cube, None).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        let lin = closed_form(|n| 2 * n + 1, &(4..=64).collect::<Vec<_>>());
        let f = fit_exponent(&lin, Some((4, 64))).unwrap();
        assert!((0.95..=1.0).contains(&f.slope), "{f:?}");
        assert!(fit_exponent(&lin, Some((4, 6))).is_err());
    }

    #[test]
    fn huge_values_fit() {
        let s = GrowthSeries::new(
            "t",
            "test",
            (1..=6u64).map(|k| (1u64 << k, BigInt::from(2).pow(1200 * k as u32))).collect(),
        )
        .unwrap();
        let f = fit_exponent(&s, None).unwrap();
        assert!((f.slope - 1200.0).abs() < 1e-6);
    }

    #[test]
    fn phi_slopes() {
        let z = g("z");
        let s = phi_upper_series(&z, &z.default_gens(), &power_grid(4, 64)).unwrap();
        assert!((fit_exponent(&s, None).unwrap().slope - 1.0).abs() <= 0.05);
        for &(n, ref v) in s.points() {
            assert!(*v >= BigInt::from(2 * n + 1));
        }
        let h = g("heisenberg");
        let s = phi_upper_series(&h, &h.default_gens(), &power_grid(4, 64)).unwrap();
        let f = fit_exponent(&s, None).unwrap();
        assert!((5.8..=6.2).contains(&f.slope), "{f:?}");
    }

    #[test]
    fn theorem_c_examples() {
        let r = theorem_c_report(&g("z^2"), &g("z^2").default_gens()).unwrap();
        assert_eq!((r.bass_degree, r.solver_exponent, r.verdict), (2, 2, Verdict::Equal));
        let h = g("heisenberg");
        let r = theorem_c_report(&h, &h.default_gens()).unwrap();
        assert_eq!((r.bass_degree, r.solver_exponent, r.verdict), (4, 6, Verdict::StrictlyGreater));
        let gm = g("gamma");
        let r = theorem_c_report(&gm, &gm.default_gens()).unwrap();
        assert_eq!((r.bass_degree, r.solver_exponent, r.verdict), (13, 22, Verdict::StrictlyGreater));
    }

    #[test]
    fn product_examples() {
        let p = product_check(&GroupSpec::heisenberg(), &GroupSpec::FreeAbelian(1)).unwrap();
        assert_eq!((p.exponent_product, p.exponent_left, p.exponent_right), (7, 6, 1));
        assert!(p.holds && p.equality);
        let p = product_check(&GroupSpec::FreeAbelian(1), &GroupSpec::FreeAbelian(1)).unwrap();
        assert_eq!(p.exponent_product, 2);
        assert!(p.equality);
    }

    #[test]
    fn heisenberg_generating_sets_agree() {
        let h = g("heisenberg");
        let xy = GeneratingSet::parse(&h, "x, y").unwrap();
        let r = invariance_and_product_checks(&h.default_gens(), &xy, &GroupSpec::FreeAbelian(1), &power_grid(4, 64))
            .unwrap();
        assert!(r.passed(), "{r:?}");
        assert!((r.invariance.fit_b.slope - 6.0).abs() < 0.2);
    }
}
