//! The driving operator on Lévy densities, sign scans, and Urbanik-class
//! verdicts.
//!
//! For a selfdecomposable law with Lévy density `k`, define
//!
//! ```text
//! (D⁰k)(x) = x·k(x),   (D¹k)(x) = (−x·k(x))′,   (Dⁿk) = D(Dⁿ⁻¹k).
//! ```
//!
//! `D¹k` is the Lévy density of the background driving variable, so iterated
//! nonnegativity of `Dⁿk` (together with infinite mass at every stage)
//! certifies membership in the deeper classes `L_n`. The classifier walks the
//! levels, reporting the first sign or finite-mass failure as a witness. Its
//! verdicts are explicitly numerical evidence on the scanned grid: a negative
//! value is a genuine witness, while "nonnegative" is a grid-limited
//! statement.

use crate::error::Result;
use crate::levy::{LevyDensity, Mass, QuadratureConfig};
use serde::Serialize;

/// Sign failures count only below `SIGN_REL_TOL` times the grid maximum of
/// `|density|`; long driving chains otherwise report roundoff as negativity.
pub const SIGN_REL_TOL: f64 = 1e-12;

const ENDPOINT_XTOL: f64 = 1e-4;
const MINIMUM_XTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    Linear,
    Logarithmic,
}

/// Evaluation grid for sign scans.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub scale: GridScale,
    pub refine_iters: usize,
}

impl Default for ScanGrid {
    /// Logarithmic on `[1e−4, 50]` with 4000 points: covers both the
    /// singular region near 0 and the witness windows near `x ≈ 1` densely.
    fn default() -> Self {
        Self {
            x_min: 1e-4,
            x_max: 50.0,
            points: 4000,
            scale: GridScale::Logarithmic,
            refine_iters: 40,
        }
    }
}

impl ScanGrid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        points: usize,
        scale: GridScale,
        refine_iters: usize,
    ) -> Result<Self> {
        if !(x_min > 0.0 && x_min < x_max) {
            return Err(crate::Error::InvalidParam(format!(
                "grid requires 0 < x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if points < 2 {
            return Err(crate::Error::InvalidParam(format!(
                "grid requires at least 2 points, got {points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            points,
            scale,
            refine_iters,
        })
    }

    pub fn abscissae(&self) -> Vec<f64> {
        let n = self.points;
        match self.scale {
            GridScale::Linear => {
                let span = self.x_max - self.x_min;
                (0..n)
                    .map(|i| self.x_min + span * (i as f64 / (n - 1) as f64))
                    .collect()
            }
            GridScale::Logarithmic => {
                let ratio = (self.x_max / self.x_min).ln() / (n - 1) as f64;
                (0..n)
                    .map(|i| self.x_min * (ratio * i as f64).exp())
                    .collect()
            }
        }
    }
}

/// Outcome of a sign scan over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanOutcome {
    /// No value below the noise threshold anywhere on the grid. This is a
    /// grid-limited statement, not a proof.
    NonNegative,
    /// A genuinely negative value, refined off-grid.
    NegativeAt {
        /// Location of the (refined) minimum.
        x: f64,
        /// Density value at `x`.
        value: f64,
        /// The surrounding interval on which the density is negative,
        /// endpoints located to 1e−4.
        interval: (f64, f64),
    },
}

/// Sign-failure witness carried by a verdict.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Witness {
    pub x: f64,
    pub value: f64,
    pub interval: (f64, f64),
}

/// A finite total mass encountered at `level`, which stops the recursion.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MassFailure {
    pub level: i32,
    pub mass: f64,
}

/// Outcome of Urbanik classification.
///
/// `achieved_level = −1` means "infinitely divisible only": either the first
/// driven density already takes negative values or the density itself has
/// finite mass. `bounded_above` records that a failure was actually found at
/// `achieved_level + 1` (as opposed to the scan simply stopping at
/// `max_level`).
#[derive(Debug, Clone, Serialize)]
pub struct ClassVerdict {
    pub achieved_level: i32,
    pub bounded_above: bool,
    pub witness: Option<Witness>,
    pub mass_failures: Vec<MassFailure>,
    pub grid_used: ScanGrid,
}

/// The n-fold driving operator. `n = 0` returns the density unchanged; its
/// reported tail value is `x·k(x)` (used only for mass reporting). For
/// `n ≥ 1` the returned density is `Dⁿk`, computed exactly: series tails stay
/// in the exponential-polynomial algebra, chain tails use their stored exact
/// derivatives.
pub fn d_operator(k: &LevyDensity, n: usize) -> Result<LevyDensity> {
    k.apply_d(n)
}

/// Scans the density over the grid; on a sign failure, bisects the endpoints
/// of the negative region to 1e−4 and the minimum to 1e−6.
pub fn sign_scan(k: &LevyDensity, grid: &ScanGrid) -> ScanOutcome {
    let xs = grid.abscissae();
    let vals: Vec<f64> = xs.iter().map(|&x| k.density_value(x)).collect();
    let max_abs = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = SIGN_REL_TOL * max_abs;

    let mut argmin = None;
    let mut min_val = -tol;
    for (i, &v) in vals.iter().enumerate() {
        if v < min_val {
            min_val = v;
            argmin = Some(i);
        }
    }
    let Some(idx) = argmin else {
        return ScanOutcome::NonNegative;
    };

    // Contiguous negative run around the minimum.
    let mut lo = idx;
    while lo > 0 && vals[lo - 1] < -tol {
        lo -= 1;
    }
    let mut hi = idx;
    while hi + 1 < vals.len() && vals[hi + 1] < -tol {
        hi += 1;
    }

    let f = |x: f64| k.density_value(x);
    let left = if lo == 0 {
        xs[0]
    } else {
        bisect_zero(&f, xs[lo - 1], xs[lo], grid.refine_iters)
    };
    let right = if hi + 1 == xs.len() {
        xs[xs.len() - 1]
    } else {
        bisect_zero(&f, xs[hi + 1], xs[hi], grid.refine_iters)
    };

    let a = if idx == 0 { xs[0] } else { xs[idx - 1] };
    let b = if idx + 1 == xs.len() {
        xs[xs.len() - 1]
    } else {
        xs[idx + 1]
    };
    let x_min = ternary_min(&f, a, b, grid.refine_iters.max(60));
    ScanOutcome::NegativeAt {
        x: x_min,
        value: f(x_min),
        interval: (left.min(right), left.max(right)),
    }
}

/// Root of `f` between `pos` (where `f ≥ 0` up to noise) and `neg`
/// (where `f < 0`), to ENDPOINT_XTOL.
fn bisect_zero(f: &dyn Fn(f64) -> f64, pos: f64, neg: f64, max_iters: usize) -> f64 {
    let mut pos = pos;
    let mut neg = neg;
    if f(pos) < 0.0 {
        // Both ends negative within noise; the grid point is the best answer.
        return pos;
    }
    let mut iters = 0;
    while (pos - neg).abs() > ENDPOINT_XTOL && iters < max_iters.max(60) {
        let mid = 0.5 * (pos + neg);
        if f(mid) < 0.0 {
            neg = mid;
        } else {
            pos = mid;
        }
        iters += 1;
    }
    0.5 * (pos + neg)
}

/// Ternary search for the minimum of `f` on `[a, b]` to MINIMUM_XTOL.
fn ternary_min(f: &dyn Fn(f64) -> f64, a: f64, b: f64, max_iters: usize) -> f64 {
    let mut a = a;
    let mut b = b;
    let mut iters = 0;
    while b - a > MINIMUM_XTOL && iters < max_iters {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) <= f(m2) {
            b = m2;
        } else {
            a = m1;
        }
        iters += 1;
    }
    0.5 * (a + b)
}

/// Walks levels `0..=max_level`. Certifying level `j` requires infinite mass
/// of `Dʲk` and a nonnegative scan of `Dʲ⁺¹k`; the mass is checked first, so
/// a level that fails both records the mass failure (the structural, exact
/// statement). Verdicts are numerical evidence on the scanned grid, not
/// proofs.
pub fn classify(k: &LevyDensity, max_level: i32, grid: &ScanGrid) -> Result<ClassVerdict> {
    let cfg = QuadratureConfig::default();
    let mut verdict = ClassVerdict {
        achieved_level: -1,
        bounded_above: false,
        witness: None,
        mass_failures: Vec::new(),
        grid_used: *grid,
    };
    for level in 0..=max_level.max(-1) {
        let dj = d_operator(k, level as usize)?;
        match dj.total_mass(&cfg) {
            Mass::Finite(mass) => {
                verdict.mass_failures.push(MassFailure { level, mass });
                verdict.bounded_above = true;
                return Ok(verdict);
            }
            Mass::Infinite => {}
        }
        let next = d_operator(k, level as usize + 1)?;
        match sign_scan(&next, grid) {
            ScanOutcome::NonNegative => {
                verdict.achieved_level = level;
            }
            ScanOutcome::NegativeAt { x, value, interval } => {
                verdict.witness = Some(Witness { x, value, interval });
                verdict.bounded_above = true;
                return Ok(verdict);
            }
        }
    }
    Ok(verdict)
}

/// One row of the level diagnostic table.
#[derive(Debug, Clone, Copy)]
pub struct LevelRow {
    pub level: usize,
    /// Grid minimum of the level's density and where it occurs.
    pub grid_min: f64,
    pub grid_min_x: f64,
    pub mass: Mass,
}

/// Diagnostic companion to [`classify`]: for each `n` in `1..=n_max`, the
/// grid minimum of `Dⁿk` and its total mass.
pub fn level_report(k: &LevyDensity, n_max: usize, grid: &ScanGrid) -> Result<Vec<LevelRow>> {
    let cfg = QuadratureConfig::default();
    let xs = grid.abscissae();
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let dn = d_operator(k, n)?;
        let mut grid_min = f64::INFINITY;
        let mut grid_min_x = xs[0];
        for &x in &xs {
            let v = dn.density_value(x);
            if v < grid_min {
                grid_min = v;
                grid_min_x = x;
            }
        }
        rows.push(LevelRow {
            level: n,
            grid_min,
            grid_min_x,
            mass: dn.total_mass(&cfg),
        });
    }
    Ok(rows)
}
