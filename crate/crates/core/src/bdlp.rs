//! Background driving characteristic functions (BDCFs) and decomposition
//! identities.
//!
//! For a selfdecomposable `φ`, the BDCF of its driving variable is
//! `ψ(t) = exp[t·(log φ(t))′]`. The catalog knows closed forms for some laws
//! (`exp(1 − t·coth t)` for the hyperbolic sine, `exp(−t·tanh t)` for the
//! hyperbolic cosine); everything else uses a Richardson-extrapolated central
//! difference of `log φ`. At `t = 0` parity gives `ψ = 1` exactly, removing
//! the 0/0 at the origin.

use crate::catalog::DistributionSpec;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BdcfMethod {
    Closed,
    NumericLogDeriv,
}

/// A BDCF evaluated over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct BdcfResult {
    pub t_grid: Vec<f64>,
    pub psi: Vec<f64>,
    pub method: BdcfMethod,
}

/// `ψ(t)` through the closed form when the catalog has one, otherwise the
/// numeric log-derivative path.
pub fn bdcf(spec: &DistributionSpec, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    spec.bdcf_closed(t)
        .unwrap_or_else(|| bdcf_of_cf(|s| spec.cf_closed(s), t))
}

/// `ψ(t)` by the numeric path regardless of whether a closed form exists.
pub fn bdcf_numeric(spec: &DistributionSpec, t: f64) -> f64 {
    bdcf_of_cf(|s| spec.cf_closed(s), t)
}

/// `ψ(t) = exp[t·(log f)′(t)]` for an arbitrary positive even cf evaluator.
pub fn bdcf_of_cf<F: Fn(f64) -> f64>(f: F, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    (t * richardson_log_derivative(&f, t)).exp()
}

/// Tabulates `ψ` over a grid, tagging which path produced it.
pub fn bdcf_table(spec: &DistributionSpec, t_grid: &[f64]) -> BdcfResult {
    let method = if spec.has_closed_bdcf() {
        BdcfMethod::Closed
    } else {
        BdcfMethod::NumericLogDeriv
    };
    BdcfResult {
        t_grid: t_grid.to_vec(),
        psi: t_grid.iter().map(|&t| bdcf(spec, t)).collect(),
        method,
    }
}

/// Max over the grid of `|ψ(t) − ψ(ct)·ψ_c(t)|`, where `ψ_c` is the BDCF of
/// of the residual law with cf `φ(t)/φ(ct)`. The residual BDCF is always
/// computed numerically from the ratio, so the check exercises two distinct
/// routes rather than an algebraic tautology.
pub fn verify_decomposition(spec: &DistributionSpec, c: f64, t_grid: &[f64]) -> f64 {
    assert!(c > 0.0 && c < 1.0, "decomposition factor must lie in (0,1)");
    let ratio_cf = |t: f64| spec.cf_closed(t) / spec.cf_closed(c * t);
    let mut max_dev = 0.0f64;
    for &t in t_grid {
        let psi = bdcf(spec, t);
        let psi_scaled = bdcf(spec, c * t);
        let psi_c = bdcf_of_cf(ratio_cf, t);
        max_dev = max_dev.max((psi - psi_scaled * psi_c).abs());
    }
    max_dev
}

/// Derivative of `log f` at `t` by central differences with a four-level
/// Richardson table. The base step `max(1e−5, 1e−5·|t|)` keeps the
/// subtractive noise of `log f` (≈1e−16 relative) below ~1e−11 on the
/// extrapolated value.
fn richardson_log_derivative<F: Fn(f64) -> f64>(f: &F, t: f64) -> f64 {
    let h0 = 1e-5f64.max(1e-5 * t.abs());
    let diff = |h: f64| (f(t + h).ln() - f(t - h).ln()) / (2.0 * h);
    let mut row = [0.0f64; 4];
    for (i, slot) in row.iter_mut().enumerate() {
        *slot = diff(h0 / 2f64.powi(i as i32));
    }
    let mut table = row;
    let mut factor = 1.0;
    for level in 1..4 {
        factor *= 4.0;
        for i in (level..4).rev() {
            table[i] = (factor * table[i] - table[i - 1]) / (factor - 1.0);
        }
    }
    table[3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_get;
    use crate::levy::QuadratureConfig;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let step = (hi - lo) / (n - 1) as f64;
        (0..n).map(|i| lo + step * i as f64).collect()
    }

    #[test]
    fn sinh_numeric_matches_closed_form() {
        let sinh = catalog_get("sinh", None, None).unwrap();
        // exp(1 − coth 1) at t = 1; the closed form is the oracle.
        let oracle = (1.0 - 1.0f64.cosh() / 1.0f64.sinh()).exp();
        assert!((bdcf_numeric(&sinh, 1.0) - oracle).abs() < 1e-8);
        assert!((bdcf(&sinh, 1.0) - oracle).abs() < 1e-14);
    }

    #[test]
    fn cosh_numeric_matches_closed_form() {
        let cosh = catalog_get("cosh", None, None).unwrap();
        let oracle = (-2.0 * 2.0f64.tanh()).exp();
        assert!((bdcf_numeric(&cosh, 2.0) - oracle).abs() < 1e-8);
        assert!((bdcf(&cosh, 2.0) - oracle).abs() < 1e-14);
    }

    #[test]
    fn origin_is_exactly_one() {
        for name in ["laplace", "sinh", "cosh", "tanh"] {
            let spec = catalog_get(name, None, None).unwrap();
            assert_eq!(bdcf(&spec, 0.0), 1.0);
            assert_eq!(bdcf_numeric(&spec, 0.0), 1.0);
        }
    }

    #[test]
    fn bdcf_values_stay_in_unit_interval() {
        for (name, alpha) in [
            ("laplace", None),
            ("sinh", None),
            ("cosh", None),
            ("tanh", None),
            ("logistic", Some(2.0)),
            ("generalized_logistic", Some(0.5)),
        ] {
            let spec = catalog_get(name, alpha, None).unwrap();
            for &t in grid(-10.0, 10.0, 81).iter() {
                let v = bdcf(&spec, t);
                assert!(v > 0.0 && v <= 1.0 + 1e-12, "{name} at t={t}: psi={v}");
            }
        }
    }

    #[test]
    fn sinh_closed_form_self_check() {
        let sinh = catalog_get("sinh", None, None).unwrap();
        for &t in &[0.3, 1.0, 4.0, 9.0] {
            let product = bdcf(&sinh, t) * (crate::catalog::x_coth_x(t) - 1.0).exp();
            assert!((product - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn decomposition_identity_sinh_and_cosh() {
        let t_grid = grid(-5.0, 5.0, 101);
        let sinh = catalog_get("sinh", None, None).unwrap();
        assert!(verify_decomposition(&sinh, 0.5, &t_grid) < 1e-8);
        let cosh = catalog_get("cosh", None, None).unwrap();
        assert!(verify_decomposition(&cosh, 0.3, &t_grid) < 1e-8);
    }

    #[test]
    fn decomposition_degenerates_as_c_approaches_one() {
        let sinh = catalog_get("sinh", None, None).unwrap();
        let t_grid = grid(-5.0, 5.0, 41);
        let ratio_cf = |t: f64| sinh.cf_closed(t) / sinh.cf_closed(0.9999 * t);
        for &t in &t_grid {
            let psi_c = bdcf_of_cf(ratio_cf, t);
            assert!((psi_c - 1.0).abs() < 1e-3);
        }
        assert!(verify_decomposition(&sinh, 0.9999, &t_grid) < 1e-6);
    }

    #[test]
    fn series_bdrv_density_reproduces_bdcf() {
        // The driven density of the truncated series (whose tail is
        // Σ b_k·x·e^(−b_k·x)) has characteristic function ψ: the two ways of
        // identifying the driving variable must agree.
        let cfg = QuadratureConfig::default();
        let sinh = catalog_get("sinh", None, None).unwrap();
        let series = crate::catalog::series_density(&sinh.series_spec(10_000).unwrap());
        let bdrv = crate::urbanik::d_operator(&series, 1).unwrap();
        for &t in grid(-5.0, 5.0, 21).iter() {
            let from_density = bdrv.char_function(t, &cfg).unwrap();
            let from_cf = bdcf(&sinh, t);
            assert!(
                (from_density - from_cf).abs() < 1e-6,
                "t={t}: density route {from_density}, cf route {from_cf}"
            );
        }
    }

    #[test]
    fn table_reports_method() {
        let sinh = catalog_get("sinh", None, None).unwrap();
        let tanh = catalog_get("tanh", None, None).unwrap();
        let g = grid(-2.0, 2.0, 11);
        assert_eq!(bdcf_table(&sinh, &g).method, BdcfMethod::Closed);
        assert_eq!(bdcf_table(&tanh, &g).method, BdcfMethod::NumericLogDeriv);
    }
}
