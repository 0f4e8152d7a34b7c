//! Exact arithmetic for finite sums of terms `c·x^m·e^(−b·x)` on `x > 0`.
//!
//! Tail functions `u(x) = x·k(x)` of Lévy densities built from Laplace series
//! live in this algebra: a series tail starts as `Σ_k e^(−b_k·x)` and the
//! algebra is closed under addition, differentiation, multiplication by `x`,
//! and dilation `u(x) ↦ u(x/c)` — exactly the operations the iterated
//! `(−x·f(x))′` recursion and residual densities need. All operations are
//! exact up to floating-point rounding of the coefficients; no quadrature is
//! involved anywhere in this module.

/// Rates closer than this (relatively) are merged during canonicalization.
/// Rate sequences such as `1/a_k` are computed, not symbolic, so exact-match
/// merging would silently duplicate near-identical terms.
pub const RATE_MERGE_REL_TOL: f64 = 1e-14;

/// Coefficients below this magnitude after merging are dropped; long
/// derivative chains otherwise accumulate denormal-range garbage.
pub const COEFF_DROP_ABS: f64 = 1e-300;

/// Relative tolerance used by [`ExpPolySum::canonically_eq`] on coefficients.
pub const COEFF_EQ_REL_TOL: f64 = 1e-12;

/// One summand `coeff · x^power · e^(−rate·x)`.
///
/// `rate > 0` guarantees integrability on `(0, ∞)`; zero coefficients are
/// never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpPolyTerm {
    pub coeff: f64,
    pub power: u32,
    pub rate: f64,
}

/// A finite sum of [`ExpPolyTerm`]s in canonical form: unique
/// `(power, rate)` pairs, merged coefficients, sorted by `(rate, power)`.
#[derive(Debug, Clone, Default)]
pub struct ExpPolySum {
    terms: Vec<ExpPolyTerm>,
}

impl ExpPolySum {
    /// The zero function (empty sum).
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Builds a canonicalized sum from arbitrary terms.
    ///
    /// Panics if any rate is not strictly positive and finite.
    pub fn new(terms: Vec<ExpPolyTerm>) -> Self {
        for t in &terms {
            assert!(
                t.rate > 0.0 && t.rate.is_finite(),
                "ExpPolyTerm requires a positive finite rate, got {}",
                t.rate
            );
        }
        Self::canonicalize(terms)
    }

    /// Single-term sum `coeff·x^power·e^(−rate·x)`.
    pub fn single(coeff: f64, power: u32, rate: f64) -> Self {
        Self::new(vec![ExpPolyTerm { coeff, power, rate }])
    }

    pub fn terms(&self) -> &[ExpPolyTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn canonicalize(mut terms: Vec<ExpPolyTerm>) -> Self {
        terms.retain(|t| t.coeff != 0.0);
        terms.sort_by(|a, b| {
            a.rate
                .total_cmp(&b.rate)
                .then_with(|| a.power.cmp(&b.power))
        });
        let mut merged: Vec<ExpPolyTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = merged.last_mut() {
                if last.power == t.power && rates_close(last.rate, t.rate) {
                    last.coeff += t.coeff;
                    continue;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| t.coeff.abs() >= COEFF_DROP_ABS);
        // Merging may have disturbed the (rate, power) order when near-equal
        // rates with different powers interleave; restore it.
        merged.sort_by(|a, b| {
            a.rate
                .total_cmp(&b.rate)
                .then_with(|| a.power.cmp(&b.power))
        });
        Self { terms: merged }
    }

    /// Pointwise sum; result is canonical.
    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::canonicalize(terms)
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scale(&self, factor: f64) -> Self {
        Self::canonicalize(
            self.terms
                .iter()
                .map(|t| ExpPolyTerm {
                    coeff: t.coeff * factor,
                    ..*t
                })
                .collect(),
        )
    }

    /// Exact derivative:
    /// `d/dx [c·x^m·e^(−b·x)] = c·m·x^(m−1)·e^(−b·x) − c·b·x^m·e^(−b·x)`.
    pub fn differentiate(&self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * 2);
        for t in &self.terms {
            if t.power > 0 {
                out.push(ExpPolyTerm {
                    coeff: t.coeff * f64::from(t.power),
                    power: t.power - 1,
                    rate: t.rate,
                });
            }
            out.push(ExpPolyTerm {
                coeff: -t.coeff * t.rate,
                power: t.power,
                rate: t.rate,
            });
        }
        Self::canonicalize(out)
    }

    /// Increments every term's power by one.
    pub fn multiply_by_x(&self) -> Self {
        Self::canonicalize(
            self.terms
                .iter()
                .map(|t| ExpPolyTerm {
                    power: t.power + 1,
                    ..*t
                })
                .collect(),
        )
    }

    /// Dilation `s(x) ↦ s(x/c)` for `c > 0`: term `(coeff, m, b)` maps to
    /// `(coeff·c^(−m), m, b/c)`.
    pub fn dilate(&self, c: f64) -> Self {
        assert!(c > 0.0 && c.is_finite(), "dilation factor must be positive");
        Self::canonicalize(
            self.terms
                .iter()
                .map(|t| ExpPolyTerm {
                    coeff: t.coeff * c.powi(-(t.power as i32)),
                    power: t.power,
                    rate: t.rate / c,
                })
                .collect(),
        )
    }

    /// Evaluates the sum at `x ≥ 0`, adding terms in order of increasing rate
    /// to limit cancellation. `x = 0` returns the continuous extension
    /// `Σ_{m=0} coeff` (needed as the boundary value by sign scans).
    pub fn evaluate(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0, "ExpPolySum is defined on x >= 0");
        let mut acc = 0.0;
        for t in &self.terms {
            let xp = if t.power == 0 { 1.0 } else { x.powi(t.power as i32) };
            acc += t.coeff * xp * (-t.rate * x).exp();
        }
        acc
    }

    /// The continuous extension at `x = 0`: sum of power-0 coefficients.
    pub fn value_at_zero(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.power == 0)
            .map(|t| t.coeff)
            .sum()
    }

    /// Exact `∫₀^∞ s(x) dx = Σ c·m!/b^(m+1)`.
    pub fn integrate_zero_inf(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * factorial(t.power) / t.rate.powi(t.power as i32 + 1))
            .sum()
    }

    /// Exact `∫₀^∞ s(x)/x dx`, or `None` when the integral diverges at 0
    /// (power-0 coefficients not cancelling).
    ///
    /// Power-`m ≥ 1` terms contribute `c·(m−1)!/b^m`; the power-0 group
    /// converges only when its coefficients sum to zero, in which case it
    /// contributes `−Σ c_i·ln(b_i)` (the Frullani combination).
    pub fn integrate_div_x_zero_inf(&self) -> Option<f64> {
        let p0: Vec<&ExpPolyTerm> = self.terms.iter().filter(|t| t.power == 0).collect();
        let p0_abs: f64 = p0.iter().map(|t| t.coeff.abs()).sum();
        let p0_sum: f64 = p0.iter().map(|t| t.coeff).sum();
        if p0_sum.abs() > 1e-12 * p0_abs.max(1e-300) {
            return None;
        }
        let mut acc = 0.0;
        if !p0.is_empty() {
            acc -= p0.iter().map(|t| t.coeff * t.rate.ln()).sum::<f64>();
        }
        for t in self.terms.iter().filter(|t| t.power >= 1) {
            acc += t.coeff * factorial(t.power - 1) / t.rate.powi(t.power as i32);
        }
        Some(acc)
    }

    /// Equality in canonical form. Rates compare within
    /// [`RATE_MERGE_REL_TOL`] and coefficients within [`COEFF_EQ_REL_TOL`]
    /// relatively, matching the merge tolerance used by canonicalization.
    pub fn canonically_eq(&self, other: &Self) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms.iter().zip(&other.terms).all(|(a, b)| {
            a.power == b.power
                && rates_close(a.rate, b.rate)
                && coeffs_close(a.coeff, b.coeff)
        })
    }

    /// Largest rate present, if any. Useful for truncation heuristics.
    pub fn max_rate(&self) -> Option<f64> {
        self.terms.last().map(|t| t.rate)
    }
}

fn rates_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= RATE_MERGE_REL_TOL * a.abs().max(b.abs())
}

fn coeffs_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= COEFF_EQ_REL_TOL * a.abs().max(b.abs()).max(COEFF_DROP_ABS)
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}
