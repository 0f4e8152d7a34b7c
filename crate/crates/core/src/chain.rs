//! Closed-form Lévy tail evaluators with exact derivatives.
//!
//! The hyperbolic-sine, -cosine, logistic, and generalized-logistic tails all
//! have the shape `u(x) = e^(−μx) / (2·sinh(γx/2))`; the hyperbolic-tangent
//! tail is `u(x) = (1 − tanh(πx/4))/2`. Every derivative of either shape
//! stays inside a small polynomial algebra over a hyperbolic pair
//! `(A, B) = (csch, coth)` or `(sech, tanh)` of a common argument `c·x`:
//!
//! ```text
//! (csch, coth):  A' = −c·A·B,   B' = −c·A²
//! (sech, tanh):  A' = −c·A·B,   B' = +c·A²
//! ```
//!
//! Derivatives are generated symbolically from these rules (together with the
//! product rule for the `e^(−μx)` prefactor), so evaluation is exact up to
//! rounding — there is no numerical differentiation anywhere in the chain.
//!
//! A chain may also carry dilation "parts": `u(x) = Σ_i s_i · u_base(x/σ_i)`
//! with signs `s_i = ±1`, which is how residual (ratio) densities keep exact
//! derivatives.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Highest derivative order a chain will produce. The symbolic generation is
/// exact at any order; the cap only bounds coefficient growth well inside
/// f64's integer range.
pub const MAX_CHAIN_ORDER: usize = 16;

/// Polynomial in a hyperbolic pair `(A, B)`: term `(i, j) ↦ coeff·A^i·B^j`.
#[derive(Debug, Clone)]
struct HypPoly {
    terms: BTreeMap<(u32, u32), f64>,
    /// Argument scale: A = A(c·x), B = B(c·x).
    c: f64,
    /// +1 for the (sech, tanh) pair, −1 for (csch, coth).
    b_rule_sign: f64,
}

impl HypPoly {
    fn new(c: f64, b_rule_sign: f64) -> Self {
        Self {
            terms: BTreeMap::new(),
            c,
            b_rule_sign,
        }
    }

    fn insert(&mut self, key: (u32, u32), coeff: f64) {
        let slot = self.terms.entry(key).or_insert(0.0);
        *slot += coeff;
        if *slot == 0.0 {
            self.terms.remove(&key);
        }
    }

    /// d/dx via A' = −c·A·B, B' = s·c·A².
    fn derivative(&self) -> Self {
        let mut out = Self::new(self.c, self.b_rule_sign);
        for (&(i, j), &coeff) in &self.terms {
            if i > 0 {
                out.insert((i, j + 1), -self.c * f64::from(i) * coeff);
            }
            if j > 0 {
                out.insert((i + 2, j - 1), self.b_rule_sign * self.c * f64::from(j) * coeff);
            }
        }
        out
    }

    /// Adds `factor * other` into `self` (same pair and scale assumed).
    fn add_scaled(&mut self, other: &Self, factor: f64) {
        for (&key, &coeff) in &other.terms {
            self.insert(key, factor * coeff);
        }
    }

    fn evaluate(&self, a: f64, b: f64) -> f64 {
        let mut acc = 0.0;
        for (&(i, j), &coeff) in &self.terms {
            acc += coeff * a.powi(i as i32) * b.powi(j as i32);
        }
        acc
    }
}

/// `1/sinh(y)` for `y > 0`, stable for both small and large arguments.
pub fn csch(y: f64) -> f64 {
    debug_assert!(y > 0.0);
    if y < 0.5 {
        1.0 / y.sinh()
    } else {
        let e = (-y).exp();
        2.0 * e / (1.0 - e * e)
    }
}

/// `coth(y)` for `y > 0`, saturating cleanly to 1 for large arguments.
pub fn coth(y: f64) -> f64 {
    debug_assert!(y > 0.0);
    if y < 0.5 {
        1.0 / y.tanh()
    } else {
        let e2 = (-2.0 * y).exp();
        1.0 + 2.0 * e2 / (1.0 - e2)
    }
}

/// Base shape of a closed-form tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainBase {
    /// `u(x) = e^(−mu·x) / (2·sinh(gamma·x/2))`. This is the geometric
    /// family `Σ_{k≥1} e^(−(mu + (k−1/2)·gamma)·x)`; see the catalog for the
    /// per-law `(mu, gamma)` values.
    Bose { mu: f64, gamma: f64 },
    /// `u(x) = (1 − tanh(πx/4))/2`.
    TanhStep,
}

impl ChainBase {
    fn seed_poly(&self) -> HypPoly {
        match *self {
            ChainBase::Bose { gamma, .. } => {
                // u = e^(−μx)·(1/2)·csch(γx/2); the poly carries the csch part.
                let mut p = HypPoly::new(gamma / 2.0, -1.0);
                p.insert((1, 0), 0.5);
                p
            }
            ChainBase::TanhStep => {
                let mut p = HypPoly::new(std::f64::consts::PI / 4.0, 1.0);
                p.insert((0, 0), 0.5);
                p.insert((0, 1), -0.5);
                p
            }
        }
    }

    fn mu(&self) -> f64 {
        match *self {
            ChainBase::Bose { mu, .. } => mu,
            ChainBase::TanhStep => 0.0,
        }
    }

    fn pair_values(&self, x: f64) -> (f64, f64) {
        match *self {
            ChainBase::Bose { gamma, .. } => {
                let y = gamma * x / 2.0;
                (csch(y), coth(y))
            }
            ChainBase::TanhStep => {
                let y = std::f64::consts::PI * x / 4.0;
                (1.0 / y.cosh(), y.tanh())
            }
        }
    }

    /// Direct, cancellation-free evaluation of `u(x)` itself.
    fn u0(&self, x: f64) -> f64 {
        match *self {
            ChainBase::Bose { mu, gamma } => 0.5 * (-mu * x).exp() * csch(gamma * x / 2.0),
            // (1 − tanh(s))/2 = 1/(1 + e^(2s)) avoids the 1 − 1 cancellation
            // once tanh saturates.
            ChainBase::TanhStep => {
                let s = std::f64::consts::PI * x / 2.0;
                1.0 / (1.0 + s.exp())
            }
        }
    }

    /// Coefficient of `1/x` in the Laurent expansion of `u` at 0.
    fn pole_at_zero(&self) -> f64 {
        match *self {
            ChainBase::Bose { gamma, .. } => 1.0 / gamma,
            ChainBase::TanhStep => 0.0,
        }
    }

    /// Constant Laurent term of `u` at 0. For the Bose shape with argument
    /// `x/σ` the constant term is `−μ/γ` independent of σ.
    fn const_at_zero(&self) -> f64 {
        match *self {
            ChainBase::Bose { mu, gamma } => -mu / gamma,
            ChainBase::TanhStep => 0.5,
        }
    }
}

/// One dilation component: contributes `sign · u_base(x / scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainPart {
    pub scale: f64,
    pub sign: f64,
}

/// A closed-form tail `u(x) = Σ_i sign_i · u_base(x / scale_i)` with exact
/// derivatives up to [`MAX_CHAIN_ORDER`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormChain {
    base: ChainBase,
    parts: Vec<ChainPart>,
}

impl ClosedFormChain {
    pub fn new(base: ChainBase) -> Self {
        Self {
            base,
            parts: vec![ChainPart {
                scale: 1.0,
                sign: 1.0,
            }],
        }
    }

    pub fn base(&self) -> ChainBase {
        self.base
    }

    pub fn parts(&self) -> &[ChainPart] {
        &self.parts
    }

    /// The residual tail `u(x) − u(x/c)`: every existing part `(σ, s)` gains a
    /// mirrored part `(σ·c, −s)`.
    pub fn residual(&self, c: f64) -> Self {
        let mut parts = self.parts.clone();
        parts.extend(self.parts.iter().map(|p| ChainPart {
            scale: p.scale * c,
            sign: -p.sign,
        }));
        Self {
            base: self.base,
            parts,
        }
    }

    /// Dilation `u(x) ↦ u(x/a)`.
    pub fn dilate(&self, a: f64) -> Self {
        Self {
            base: self.base,
            parts: self
                .parts
                .iter()
                .map(|p| ChainPart {
                    scale: p.scale * a,
                    sign: p.sign,
                })
                .collect(),
        }
    }

    /// `[u(x), u'(x), ..., u^(order)(x)]`, all exact.
    pub fn u_derivs(&self, x: f64, order: usize) -> Result<Vec<f64>> {
        if order > MAX_CHAIN_ORDER {
            return Err(Error::DerivativeOrderUnavailable {
                requested: order,
                available: MAX_CHAIN_ORDER,
            });
        }
        debug_assert!(x > 0.0, "chain evaluation requires x > 0");
        // Symbolic polys for u_base^(n) = e^(−μx)·P_n: P_{n+1} = P_n' − μ·P_n.
        let mu = self.base.mu();
        let mut polys = Vec::with_capacity(order + 1);
        polys.push(self.base.seed_poly());
        for n in 0..order {
            let mut next = polys[n].derivative();
            if mu != 0.0 {
                next.add_scaled(&polys[n], -mu);
            }
            polys.push(next);
        }
        let mut out = vec![0.0; order + 1];
        for part in &self.parts {
            let y = x / part.scale;
            let (a, b) = self.base.pair_values(y);
            let pre = (-mu * y).exp();
            let mut scale_pow = 1.0;
            for (n, poly) in polys.iter().enumerate() {
                let v = if n == 0 {
                    self.base.u0(y)
                } else {
                    pre * poly.evaluate(a, b)
                };
                out[n] += part.sign * v * scale_pow;
                scale_pow /= part.scale;
            }
        }
        Ok(out)
    }

    /// `u(x)` alone, without generating derivative polynomials.
    pub fn value(&self, x: f64) -> f64 {
        self.parts
            .iter()
            .map(|p| p.sign * self.base.u0(x / p.scale))
            .sum()
    }

    /// Coefficient of `1/x` at 0 for the combined tail.
    pub fn pole_at_zero(&self) -> f64 {
        let base_pole = self.base.pole_at_zero();
        self.parts
            .iter()
            .map(|p| p.sign * p.scale * base_pole)
            .sum()
    }

    /// Constant Laurent term at 0 for the combined tail.
    pub fn const_at_zero(&self) -> f64 {
        let c = self.base.const_at_zero();
        self.parts.iter().map(|p| p.sign * c).sum()
    }
}

/// Coefficients `c_{n,j}` of the iterated operator `T = −x·d/dx`:
/// `(T^n u)(x) = Σ_j c_{n,j} · x^j · u^(j)(x)`, generated by the recursion
/// `c_{n+1,j} = −(j·c_{n,j} + c_{n,j−1})`.
pub fn t_operator_coeffs(n: usize) -> Vec<f64> {
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    for _ in 0..n {
        let prev = coeffs.clone();
        for j in (0..=n).rev() {
            let from_same = j as f64 * prev[j];
            let from_lower = if j > 0 { prev[j - 1] } else { 0.0 };
            coeffs[j] = -(from_same + from_lower);
        }
    }
    coeffs
}

/// `(T^level u)(x)` for a chain tail, where `T = −x·d/dx`. Level 0 is `u`
/// itself; level `n` is the tail function of the n-times driven density.
pub fn iterated_tail_value(chain: &ClosedFormChain, level: usize, x: f64) -> Result<f64> {
    if level == 0 {
        return Ok(chain.value(x));
    }
    let derivs = chain.u_derivs(x, level)?;
    let coeffs = t_operator_coeffs(level);
    let mut acc = 0.0;
    let mut xp = 1.0;
    for j in 0..=level {
        if coeffs[j] != 0.0 {
            acc += coeffs[j] * xp * derivs[j];
        }
        xp *= x;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sinh_chain() -> ClosedFormChain {
        ClosedFormChain::new(ChainBase::Bose {
            mu: PI / 2.0,
            gamma: PI,
        })
    }

    fn cosh_chain() -> ClosedFormChain {
        ClosedFormChain::new(ChainBase::Bose { mu: 0.0, gamma: PI })
    }

    fn tanh_chain() -> ClosedFormChain {
        ClosedFormChain::new(ChainBase::TanhStep)
    }

    #[test]
    fn sinh_tail_value_matches_geometric_form() {
        // e^(−πx/2)/(2 sinh(πx/2)) = 1/(e^(πx) − 1).
        for &x in &[1e-4, 0.1, 1.0, 5.0, 30.0] {
            let u = sinh_chain().value(x);
            let direct = 1.0 / (PI * x).exp_m1();
            assert!((u - direct).abs() <= 1e-13 * direct.abs().max(1e-300));
        }
    }

    #[test]
    fn cosh_tail_value() {
        for &x in &[0.01, 0.5, 2.0, 10.0] {
            let u = cosh_chain().value(x);
            let direct = 1.0 / (2.0 * (PI * x / 2.0).sinh());
            assert!((u - direct).abs() <= 1e-13 * direct);
        }
    }

    #[test]
    fn tanh_tail_value_stable_at_large_x() {
        let u = tanh_chain().value(0.7);
        let direct = 0.5 * (1.0 - (PI * 0.7 / 4.0).tanh());
        assert!((u - direct).abs() < 1e-15);
        // Far tail: (1 − tanh) cancels in naive form; the chain keeps digits.
        let far = tanh_chain().value(30.0);
        assert!(far > 0.0 && far < 1e-19);
    }

    #[test]
    fn sinh_first_derivative_closed_form() {
        // u'(x) = −(π/4)·csch²(πx/2); −u' is the first driven density.
        for &x in &[0.05, 0.9, 2.0] {
            let d = sinh_chain().u_derivs(x, 1).unwrap();
            let expected = -(PI / 4.0) * csch(PI * x / 2.0).powi(2);
            assert!((d[1] - expected).abs() <= 1e-12 * expected.abs());
        }
    }

    #[test]
    fn cosh_first_derivative_closed_form() {
        // u'(x) = −(π/4)·cosh(πx/2)/sinh²(πx/2).
        for &x in &[0.05, 1.0, 3.0] {
            let d = cosh_chain().u_derivs(x, 1).unwrap();
            let y = PI * x / 2.0;
            let expected = -(PI / 4.0) * y.cosh() / y.sinh().powi(2);
            assert!((d[1] - expected).abs() <= 1e-12 * expected.abs());
        }
    }

    #[test]
    fn tanh_first_derivative_closed_form() {
        // u'(x) = −(π/8)·sech²(πx/4).
        for &x in &[0.1, 1.0, 4.0] {
            let d = tanh_chain().u_derivs(x, 1).unwrap();
            let expected = -(PI / 8.0) / (PI * x / 4.0).cosh().powi(2);
            assert!((d[1] - expected).abs() <= 1e-12 * expected.abs());
        }
    }

    #[test]
    fn logistic_first_derivative_bracket_form() {
        // For u(x) = e^(−απx)/(1 − e^(−πx)):
        // −u'(x) = π·e^(−απx)·(α + (1−α)·e^(−πx)) / (1 − e^(−πx))².
        for &alpha in &[0.3, 0.5, 1.0, 2.0, 5.0] {
            let chain = ClosedFormChain::new(ChainBase::Bose {
                mu: (alpha - 0.5) * PI,
                gamma: PI,
            });
            for &x in &[0.05, 0.8, 3.0] {
                let d = chain.u_derivs(x, 1).unwrap();
                let q = (-PI * x).exp();
                let expected =
                    PI * (-alpha * PI * x).exp() * (alpha + (1.0 - alpha) * q) / (1.0 - q).powi(2);
                assert!(
                    (-d[1] - expected).abs() <= 1e-12 * expected.abs(),
                    "alpha={alpha} x={x}"
                );
            }
        }
    }

    /// Richardson-extrapolated central difference of u^(j−1), the independent
    /// oracle for the symbolic derivatives.
    fn fd_check(chain: &ClosedFormChain, order: usize, x: f64) {
        let lower = |x: f64| chain.u_derivs(x, order - 1).unwrap()[order - 1];
        let h = 1e-3 * x.max(0.5);
        let d = |h: f64| (lower(x + h) - lower(x - h)) / (2.0 * h);
        let d1 = d(h);
        let d2 = d(h / 2.0);
        let d3 = d(h / 4.0);
        let r1 = (4.0 * d2 - d1) / 3.0;
        let r2 = (4.0 * d3 - d2) / 3.0;
        let fd = (16.0 * r2 - r1) / 15.0;
        let exact = chain.u_derivs(x, order).unwrap()[order];
        let scale = exact.abs().max(lower(x).abs()).max(1e-12);
        assert!(
            (exact - fd).abs() <= 2e-7 * scale,
            "order={order} x={x}: exact={exact}, fd={fd}"
        );
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for chain in [sinh_chain(), cosh_chain(), tanh_chain()] {
            for order in 1..=5 {
                for &x in &[0.4, 0.9, 1.7, 3.0] {
                    fd_check(&chain, order, x);
                }
            }
        }
    }

    #[test]
    fn residual_parts_and_values() {
        let res = sinh_chain().residual(0.5);
        assert_eq!(res.parts().len(), 2);
        for &x in &[0.2, 1.0, 4.0] {
            let expected = sinh_chain().value(x) - sinh_chain().value(2.0 * x);
            assert!((res.value(x) - expected).abs() <= 1e-14 * expected.abs().max(1e-300));
            assert!(res.value(x) >= 0.0);
        }
        // Derivatives of the residual follow the same dilation rule.
        let d = res.u_derivs(1.3, 2).unwrap();
        let base = sinh_chain();
        let d1 = base.u_derivs(1.3, 2).unwrap();
        let d2 = base.u_derivs(2.6, 2).unwrap();
        for j in 0..=2 {
            let expected = d1[j] - 0.5f64.powi(-(j as i32)) * d2[j];
            assert!((d[j] - expected).abs() <= 1e-13 * expected.abs().max(1e-300));
        }
    }

    #[test]
    fn pole_and_constant_terms() {
        // Near 0: u ≈ pole/x + const.
        for (chain, _name) in [
            (sinh_chain(), "sinh"),
            (cosh_chain(), "cosh"),
            (tanh_chain(), "tanh"),
            (sinh_chain().residual(0.4), "sinh residual"),
        ] {
            let x = 1e-7;
            let approx = chain.pole_at_zero() / x + chain.const_at_zero();
            let actual = chain.value(x);
            let scale = actual.abs().max(1.0);
            assert!(
                (approx - actual).abs() <= 1e-5 * scale,
                "{_name}: approx={approx}, actual={actual}"
            );
        }
        assert!((sinh_chain().pole_at_zero() - 1.0 / PI).abs() < 1e-15);
        assert!((sinh_chain().residual(0.5).pole_at_zero() - 0.5 / PI).abs() < 1e-15);
        assert_eq!(tanh_chain().pole_at_zero(), 0.0);
        assert_eq!(tanh_chain().const_at_zero(), 0.5);
    }

    #[test]
    fn order_cap_is_enforced() {
        let err = sinh_chain().u_derivs(1.0, MAX_CHAIN_ORDER + 1).unwrap_err();
        assert!(matches!(err, Error::DerivativeOrderUnavailable { .. }));
    }

    #[test]
    fn t_coeff_table() {
        assert_eq!(t_operator_coeffs(0), vec![1.0]);
        assert_eq!(t_operator_coeffs(1), vec![0.0, -1.0]);
        assert_eq!(t_operator_coeffs(2), vec![0.0, 1.0, 1.0]);
        assert_eq!(t_operator_coeffs(3), vec![0.0, -1.0, -3.0, -1.0]);
        assert_eq!(t_operator_coeffs(4), vec![0.0, 1.0, 7.0, 6.0, 1.0]);
    }

    #[test]
    fn iterated_tail_matches_series_route() {
        // T^n commutes with truncated-series evaluation: compare against the
        // exp-poly algebra on a well-converged truncation.
        use crate::exp_poly::{ExpPolySum, ExpPolyTerm};
        let k_max = 2000;
        let series = ExpPolySum::new(
            (1..=k_max)
                .map(|k| ExpPolyTerm {
                    coeff: 1.0,
                    power: 0,
                    rate: k as f64 * PI,
                })
                .collect(),
        );
        let chain = sinh_chain();
        for level in 0..=3 {
            let mut s = series.clone();
            for _ in 0..level {
                s = s.differentiate().multiply_by_x().scale(-1.0);
            }
            for &x in &[0.3, 1.0, 2.5] {
                let via_chain = iterated_tail_value(&chain, level, x).unwrap();
                let via_series = s.evaluate(x);
                let scale = via_chain.abs().max(1e-12);
                assert!(
                    (via_chain - via_series).abs() <= 1e-9 * scale,
                    "level={level} x={x}: chain={via_chain}, series={via_series}"
                );
            }
        }
    }
}
