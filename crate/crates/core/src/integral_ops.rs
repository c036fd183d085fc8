//! Integral operators on Beltrami densities: the differential of the higher
//! Bers maps at the origin, the first-order Beltrami term, the Ahlfors–Weill
//! section, the half-plane reproducing formula and the ω-function pairing.
//!
//! Kernels are evaluated as a single integrand per call so every sum is one
//! deterministic quadrature over the grid's domain.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{HyperbolicDomain, MapError};
use crate::quadrature::{half_plane_tail_bound, quad2d, QuadError, QuadGrid};
use crate::symbolic::{Series, SymbolicError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegralError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("point {z} is not in the {domain}")]
    OutsideDomain {
        z: Complex64,
        domain: HyperbolicDomain,
    },
    #[error("reproducing formula needs q >= 2, got {0}")]
    BadWeight(i32),
    #[error("derivative order must be at least 1")]
    BadOrder,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cx(p: [f64; 2]) -> Complex64 {
    c(p[0], p[1])
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Bounded density on the exterior disc, extended by zero to the closed disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityFn {
    Zero,
    Constant { value: [f64; 2] },
    /// `s(φ)` for the polynomial `φ(z) = Σ phi[k] z^k`.
    AhlforsWeill { phi: Vec<[f64; 2]> },
    /// `amp·(η/|η|)^m`.
    Angular { m: i32, amp: [f64; 2] },
    Combination { terms: Vec<([f64; 2], DensityFn)> },
}

impl DensityFn {
    pub fn ahlfors_weill_polynomial(phi: &[Complex64]) -> Self {
        DensityFn::AhlforsWeill {
            phi: phi.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn combination(terms: Vec<(Complex64, DensityFn)>) -> Self {
        DensityFn::Combination {
            terms: terms.into_iter().map(|(a, d)| ([a.re, a.im], d)).collect(),
        }
    }

    pub fn eval(&self, eta: Complex64) -> Complex64 {
        if eta.norm_sqr() <= 1.0 {
            return c(0.0, 0.0);
        }
        match self {
            DensityFn::Zero => c(0.0, 0.0),
            DensityFn::Constant { value } => cx(*value),
            DensityFn::AhlforsWeill { phi } => {
                let poly = |z: Complex64| phi.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + cx(a));
                ahlfors_weill(poly, eta).unwrap_or(c(0.0, 0.0))
            }
            DensityFn::Angular { m, amp } => cx(*amp) * (eta / eta.norm()).powi(*m),
            DensityFn::Combination { terms } => terms
                .iter()
                .fold(c(0.0, 0.0), |acc, (a, d)| acc + cx(*a) * d.eval(eta)),
        }
    }

    /// Upper bound for `sup |ν|` on the exterior disc.
    pub fn sup_bound(&self) -> f64 {
        match self {
            DensityFn::Zero => 0.0,
            DensityFn::Constant { value } => cx(*value).norm(),
            // |s(φ)(η)| = ½|φ(ζ)|(1 − |ζ|²)² with ζ = 1/η̄ in the disc
            DensityFn::AhlforsWeill { phi } => 0.5 * phi.iter().map(|&a| cx(a).norm()).sum::<f64>(),
            DensityFn::Angular { amp, .. } => cx(*amp).norm(),
            DensityFn::Combination { terms } => terms
                .iter()
                .map(|(a, d)| cx(*a).norm() * d.sup_bound())
                .sum(),
        }
    }
}

/// Ahlfors–Weill section `s(φ)(z) = −½ φ(1/z̄)(1 − |z|²)² z̄^{−4}` for `|z| > 1`.
pub fn ahlfors_weill<F>(phi: F, z: Complex64) -> Result<Complex64, IntegralError>
where
    F: Fn(Complex64) -> Complex64,
{
    let r2 = z.norm_sqr();
    if !(r2 > 1.0) {
        return Err(IntegralError::OutsideDomain {
            z,
            domain: HyperbolicDomain::ExteriorDisc,
        });
    }
    let zeta = z.conj().inv();
    Ok(phi(zeta) * (-0.5 * (1.0 - r2).powi(2)) * zeta.powi(4))
}

fn require_disc_point(z: Complex64) -> Result<(), IntegralError> {
    if z.norm_sqr() < 1.0 {
        Ok(())
    } else {
        Err(IntegralError::OutsideDomain {
            z,
            domain: HyperbolicDomain::Disc,
        })
    }
}

/// Linear coefficients `c•(n)` of `u_n/u_1` for the requested operator.
pub fn sigma_coefficients(series: Series, n: usize) -> Result<Vec<(usize, f64)>, IntegralError> {
    Ok(series.sigma(n)?.monomial_part().linear_coefficients())
}

/// `Σ a_k ((−1)^k k!/π) ∫_{𝔻^c} ν(η)/(z − η)^{k+1} d²η`.
pub fn d0_beta(
    coeffs: &[(usize, f64)],
    nu: &DensityFn,
    z: Complex64,
    grid: &QuadGrid,
) -> Result<Complex64, IntegralError> {
    grid.require(HyperbolicDomain::ExteriorDisc)?;
    require_disc_point(z)?;
    let scaled: Vec<(i32, f64)> = coeffs
        .iter()
        .map(|&(k, a)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            (k as i32 + 1, a * sign * factorial(k) / PI)
        })
        .collect();
    Ok(quad2d(
        |eta| {
            let v = nu.eval(eta);
            let w = (z - eta).inv();
            scaled.iter().fold(c(0.0, 0.0), |acc, &(p, a)| acc + v * w.powi(p) * a)
        },
        grid,
    )?)
}

/// `w₁^ν(z) = −(z(z−1)/π) ∫ ν(w)/(w(w−1)(w−z)) d²w` for `ν` supported in the exterior disc.
pub fn w1_term(nu: &DensityFn, z: Complex64, grid: &QuadGrid) -> Result<Complex64, IntegralError> {
    w1_term_normalized(nu, z, c(0.0, 0.0), c(0.0, 0.0), grid)
}

/// `w₁` plus the linear terms `(1/π)∫ ν(η)(A z/(η − 1) + B (z − 1)/η) d²η`
/// produced by a different three-point normalization.
pub fn w1_term_normalized(
    nu: &DensityFn,
    z: Complex64,
    a: Complex64,
    b: Complex64,
    grid: &QuadGrid,
) -> Result<Complex64, IntegralError> {
    grid.require(HyperbolicDomain::ExteriorDisc)?;
    require_disc_point(z)?;
    let pre = z * (z - 1.0);
    Ok(quad2d(
        |w| {
            let v = nu.eval(w);
            let main = -pre / (w * (w - 1.0) * (w - z));
            let shift = a * z / (w - 1.0) + b * (z - 1.0) / w;
            v * (main + shift) / PI
        },
        grid,
    )?)
}

/// `∂^k w₁(z) = −(k!/π) ∫ ν(w)/(w − z)^{k+1} d²w`, valid for `k ≥ 2`.
pub fn w1_derivative_closed_form(
    nu: &DensityFn,
    z: Complex64,
    k: usize,
    grid: &QuadGrid,
) -> Result<Complex64, IntegralError> {
    grid.require(HyperbolicDomain::ExteriorDisc)?;
    require_disc_point(z)?;
    let scale = -factorial(k) / PI;
    Ok(quad2d(|w| nu.eval(w) * (w - z).inv().powi(k as i32 + 1) * scale, grid)?)
}

/// k-th derivative from samples on the circle `|ζ − z| = h`:
/// `f^(k)(z) ≈ k!/(N h^k) Σ f(z + h e^{iθ_j}) e^{−ikθ_j}`.
pub fn cauchy_derivative<F>(f: F, z: Complex64, k: usize, h: f64, points: usize) -> Result<Complex64, IntegralError>
where
    F: Fn(Complex64) -> Result<Complex64, IntegralError>,
{
    if points <= k {
        return Err(IntegralError::BadOrder);
    }
    let mut acc = c(0.0, 0.0);
    for j in 0..points {
        let t = 2.0 * PI * j as f64 / points as f64;
        let e = Complex64::from_polar(1.0, t);
        acc += f(z + e * h)? * e.powi(-(k as i32));
    }
    Ok(acc * factorial(k) / (points as f64 * h.powi(k as i32)))
}

pub const STENCIL_POINTS: usize = 32;
pub const STENCIL_RADIUS: f64 = 0.25;

/// Relative error with a floor on the denominator.
pub fn relative_error(lhs: Complex64, rhs: Complex64, floor: f64) -> f64 {
    let d = (lhs - rhs).norm();
    if d == 0.0 {
        return 0.0;
    }
    d / lhs.norm().max(rhs.norm()).max(floor)
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub domain: HyperbolicDomain,
    pub radial: usize,
    pub angular: usize,
    pub nodes: usize,
    pub truncation: Option<f64>,
}

impl From<&QuadGrid> for GridInfo {
    fn from(g: &QuadGrid) -> Self {
        GridInfo {
            domain: g.domain,
            radial: g.radial,
            angular: g.angular,
            nodes: g.len(),
            truncation: g.truncation,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub operation: String,
    pub inputs: serde_json::Value,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub relerr: f64,
    pub grid: GridInfo,
    /// Bound on the quadrature mass dropped beyond the truncation radius.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
    /// The right-hand side with the opposite kernel orientation, where one is ambiguous.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_reversed: Option<Complex64>,
}

impl CheckReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.relerr < tol
    }
}

/// `lhs = ∂³w₁(z)` by the Cauchy stencil, `rhs` by the closed-form kernel.
pub fn w1_derivative_check(
    nu: &DensityFn,
    z: Complex64,
    k: usize,
    normalization: (Complex64, Complex64),
    grid: &QuadGrid,
) -> Result<CheckReport, IntegralError> {
    if k < 2 {
        return Err(IntegralError::BadOrder);
    }
    require_disc_point(z)?;
    if z.norm() + STENCIL_RADIUS >= 1.0 {
        return Err(IntegralError::OutsideDomain {
            z,
            domain: HyperbolicDomain::Disc,
        });
    }
    let (a, b) = normalization;
    let lhs = cauchy_derivative(
        |p| w1_term_normalized(nu, p, a, b, grid),
        z,
        k,
        STENCIL_RADIUS,
        STENCIL_POINTS,
    )?;
    let rhs = w1_derivative_closed_form(nu, z, k, grid)?;
    Ok(CheckReport {
        operation: "w1_derivative".into(),
        inputs: serde_json::json!({ "nu": nu, "z": z, "k": k, "normalization": [a, b] }),
        lhs,
        rhs,
        relerr: relative_error(lhs, rhs, 1e-12 * nu.sup_bound()),
        grid: grid.into(),
        tail_bound: None,
        rhs_reversed: None,
    })
}

/// The test family `φ(z) = (z − i)^{−2q}`, holomorphic on the lower half-plane.
pub fn repro_test_form(q: i32) -> impl Fn(Complex64) -> Complex64 + Sync {
    move |z: Complex64| (z - c(0.0, 1.0)).powi(-2 * q)
}

/// `μ^q_φ(η) = −((q+1)/π) φ(η̄)(η − η̄)^q` on the upper half-plane.
pub fn repro_coefficient<F>(phi: &F, q: i32, eta: Complex64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    phi(eta.conj()) * (eta - eta.conj()).powi(q) * (-(q as f64 + 1.0) / PI)
}

/// `φ(z)` against `∫_ℍ μ^q_φ(η)/(η − z)^{q+2} d²η` for `z` in the lower half-plane.
/// The `(z − η)^{q+2}` orientation, which differs by `(−1)^q`, is reported alongside.
pub fn repro_check<F>(phi: F, q: i32, z: Complex64, grid: &QuadGrid) -> Result<CheckReport, IntegralError>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if q < 2 {
        return Err(IntegralError::BadWeight(q));
    }
    grid.require(HyperbolicDomain::UpperHalf)?;
    if !(z.im < 0.0) {
        return Err(IntegralError::OutsideDomain {
            z,
            domain: HyperbolicDomain::LowerHalf,
        });
    }
    let lhs = phi(z);
    if !lhs.is_finite() {
        return Err(QuadError::NonFinite { z, value: lhs }.into());
    }
    let integrand = |eta: Complex64| repro_coefficient(&phi, q, eta) * (eta - z).powi(-(q + 2));
    let rhs = quad2d(integrand, grid)?;
    let rhs_reversed = if q % 2 == 0 { rhs } else { -rhs };
    // |μ| ~ |η|^{−q} against a kernel ~ |η|^{−(q+2)}
    let tail = grid
        .truncation
        .map(|r| half_plane_tail_bound(integrand, true, r, 2.0 * q as f64 + 2.0));
    Ok(CheckReport {
        operation: "repro".into(),
        inputs: serde_json::json!({ "q": q, "z": z }),
        lhs,
        rhs,
        relerr: relative_error(lhs, rhs, 0.0),
        grid: grid.into(),
        tail_bound: tail,
        rhs_reversed: Some(rhs_reversed),
    })
}

/// `⟨f, g⟩₂ = ∫ f ḡ λ^{−2} d²η` on the exterior disc.
pub fn pairing_exterior<F, G>(f: F, g: G, grid: &QuadGrid) -> Result<Complex64, IntegralError>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    G: Fn(Complex64) -> Complex64 + Sync,
{
    grid.require(HyperbolicDomain::ExteriorDisc)?;
    let dom = HyperbolicDomain::ExteriorDisc;
    Ok(quad2d(
        |eta| {
            let lam = dom.density_unchecked(eta);
            f(eta) * g(eta).conj() / (lam * lam)
        },
        grid,
    )?)
}

/// `D₀β̃•_n(ν)(z)` against `−(n! c•(n)/π) ⟨ω_z^{n+1}, ν̄ λ²⟩₂`, where
/// `ω_z^l(w) = (w − z)^{−l}`.
pub fn kernel_criterion_check(
    series: Series,
    nu: &DensityFn,
    n: usize,
    z: Complex64,
    grid: &QuadGrid,
) -> Result<CheckReport, IntegralError> {
    let coeffs = sigma_coefficients(series, n)?;
    let lhs = d0_beta(&coeffs, nu, z, grid)?;
    let dom = HyperbolicDomain::ExteriorDisc;
    let omega = |w: Complex64| (w - z).inv().powi(n as i32 + 1);
    let weighted = |w: Complex64| {
        let lam = dom.density_unchecked(w);
        nu.eval(w).conj() * lam * lam
    };
    let pairing = pairing_exterior(omega, weighted, grid)?;
    let cn = series.linear_coefficient(n) as f64;
    let rhs = pairing * (-factorial(n) * cn / PI);
    Ok(CheckReport {
        operation: "kernel_criterion".into(),
        inputs: serde_json::json!({ "series": series, "nu": nu, "n": n, "z": z }),
        lhs,
        rhs,
        relerr: relative_error(lhs, rhs, 1e-10 * nu.sup_bound()),
        grid: grid.into(),
        tail_bound: None,
        rhs_reversed: None,
    })
}

/// `2·4^{n−1} n! c•(n)/(n − 1)`, the operator-norm bound of `D₀β̃•_n` into `B_{n−1}`.
pub fn d0_beta_operator_bound(series: Series, n: usize) -> f64 {
    2.0 * 4f64.powi(n as i32 - 1) * factorial(n) * series.linear_coefficient(n) as f64 / (n as f64 - 1.0)
}

/// `|D₀β̃•_n(ν)(z)| (1 − |z|²)^{n−1}`.
pub fn d0_beta_weighted(
    series: Series,
    n: usize,
    nu: &DensityFn,
    z: Complex64,
    grid: &QuadGrid,
) -> Result<f64, IntegralError> {
    let coeffs = sigma_coefficients(series, n)?;
    let v = d0_beta(&coeffs, nu, z, grid)?;
    Ok(v.norm() * (1.0 - z.norm_sqr()).powi(n as i32 - 1))
}

/// `d0_beta` for `σ•_3 = S` applied to `s(φ)`, compared with `φ(z)`.
pub fn ahlfors_weill_consistency(
    phi: &[Complex64],
    z: Complex64,
    grid: &QuadGrid,
) -> Result<CheckReport, IntegralError> {
    let nu = DensityFn::ahlfors_weill_polynomial(phi);
    let coeffs = sigma_coefficients(Series::A, 3)?;
    let lhs = d0_beta(&coeffs, &nu, z, grid)?;
    let rhs = phi.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a);
    Ok(CheckReport {
        operation: "d0_beta_ahlfors_weill".into(),
        inputs: serde_json::json!({ "phi": phi, "z": z }),
        lhs,
        rhs,
        relerr: relative_error(lhs, rhs, 0.0),
        grid: grid.into(),
        tail_bound: None,
        rhs_reversed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext() -> QuadGrid {
        QuadGrid::default_for(HyperbolicDomain::ExteriorDisc, 1).unwrap()
    }

    #[test]
    fn ahlfors_weill_values() {
        let one = |_: Complex64| c(1.0, 0.0);
        let v = ahlfors_weill(one, c(2.0, 0.0)).unwrap();
        assert!((v - c(-9.0 / 32.0, 0.0)).norm() < 1e-15);
        assert_eq!(ahlfors_weill(|_| c(0.0, 0.0), c(0.0, 3.0)).unwrap(), c(0.0, 0.0));
        let eps = 1e-4;
        let edge = ahlfors_weill(one, c(1.0 + eps, 0.0)).unwrap();
        assert!(edge.norm() < 3.0 * eps * eps);
        assert!(ahlfors_weill(one, c(0.5, 0.0)).is_err());
    }

    #[test]
    fn d0_beta_inverts_ahlfors_weill() {
        let coeffs = sigma_coefficients(Series::A, 3).unwrap();
        assert_eq!(coeffs, vec![(3, 1.0)]);
        let nu = DensityFn::ahlfors_weill_polynomial(&[c(1.0, 0.0)]);
        let v = d0_beta(&coeffs, &nu, c(0.0, 0.0), &ext()).unwrap();
        assert!((v - 1.0).norm() < 1e-10, "{v}");
        let phi = [c(1.0, 0.0), c(0.5, -0.25), c(0.0, 0.3)];
        let z = c(0.3, -0.4);
        let r = ahlfors_weill_consistency(&phi, z, &ext()).unwrap();
        assert!(r.relerr < 1e-8, "{r:?}");
    }

    #[test]
    fn zero_density_gives_zero() {
        let g = ext();
        let coeffs = sigma_coefficients(Series::B, 4).unwrap();
        assert_eq!(d0_beta(&coeffs, &DensityFn::Zero, c(0.1, 0.2), &g).unwrap(), c(0.0, 0.0));
        assert_eq!(w1_term(&DensityFn::Zero, c(0.1, 0.2), &g).unwrap(), c(0.0, 0.0));
        let r = kernel_criterion_check(Series::A, &DensityFn::Zero, 3, c(0.1, 0.0), &g).unwrap();
        assert_eq!(r.relerr, 0.0);
    }

    #[test]
    fn d0_beta_is_linear() {
        let g = ext();
        let coeffs = sigma_coefficients(Series::B, 5).unwrap();
        let n1 = DensityFn::Angular { m: 6, amp: [0.7, -0.2] };
        let n2 = DensityFn::ahlfors_weill_polynomial(&[c(0.0, 1.0), c(1.0, 0.0), c(0.2, 0.0), c(0.0, -0.4)]);
        let (a, b) = (c(0.3, 1.1), c(-2.0, 0.5));
        let comb = DensityFn::combination(vec![(a, n1.clone()), (b, n2.clone())]);
        let z = c(-0.2, 0.35);
        let lhs = d0_beta(&coeffs, &comb, z, &g).unwrap();
        let rhs = a * d0_beta(&coeffs, &n1, z, &g).unwrap() + b * d0_beta(&coeffs, &n2, z, &g).unwrap();
        assert!(relative_error(lhs, rhs, 0.0) < 1e-10);
    }

    #[test]
    fn d0_beta_is_holomorphic_in_z() {
        let g = ext();
        let coeffs = sigma_coefficients(Series::A, 4).unwrap();
        let nu = DensityFn::combination(vec![
            (c(1.0, 0.0), DensityFn::Angular { m: 8, amp: [1.0, 0.0] }),
            (
                c(0.5, 0.5),
                DensityFn::ahlfors_weill_polynomial(&[c(1.0, 0.0), c(0.0, 2.0), c(0.5, 0.0), c(0.3, 0.0)]),
            ),
        ]);
        let f = |z: Complex64| d0_beta(&coeffs, &nu, z, &g).unwrap();
        let z = c(0.2, -0.1);
        let h = 1e-4;
        let fx = (f(z + h) - f(z - h)) / (2.0 * h);
        let fy = (f(z + c(0.0, h)) - f(z - c(0.0, h))) / (2.0 * h);
        assert!(fx.norm() > 1e-2);
        let residual = (fy - c(0.0, 1.0) * fx).norm() / fx.norm();
        assert!(residual < 1e-6, "{residual}");
    }

    #[test]
    fn w1_vanishes_at_normalization_points() {
        let nu = DensityFn::Angular { m: 2, amp: [1.0, 0.0] };
        let g = ext();
        assert_eq!(w1_term(&nu, c(0.0, 0.0), &g).unwrap(), c(0.0, 0.0));
        // z = 1 lies on the boundary of the support; evaluate the prefactor limit directly
        let near = w1_term(&nu, c(1.0 - 1e-9, 0.0), &g).unwrap();
        assert!(near.norm() < 1e-3, "{near}");
    }

    #[test]
    fn w1_third_derivative_matches_closed_form() {
        let g = ext();
        let nu = DensityFn::combination(vec![
            (c(1.0, 0.0), DensityFn::Angular { m: 1, amp: [0.3, 0.4] }),
            (c(1.0, 0.0), DensityFn::ahlfors_weill_polynomial(&[c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.25)])),
        ]);
        let z = c(0.25, 0.1);
        // the stencil divides by h^k, which amplifies node rounding near w = 1
        let r = w1_derivative_check(&nu, z, 3, (c(0.0, 0.0), c(0.0, 0.0)), &g).unwrap();
        assert!(r.relerr < 1e-6, "{r:?}");
        let shifted = w1_derivative_check(&nu, z, 3, (c(2.0, -1.0), c(0.5, 3.0)), &g).unwrap();
        assert!(shifted.relerr < 1e-6, "{shifted:?}");
        let r4 = w1_derivative_check(&nu, z, 4, (c(1.0, 0.0), c(0.0, 0.0)), &g).unwrap();
        assert!(r4.relerr < 1e-6, "{r4:?}");
    }

    #[test]
    fn repro_formula_on_lower_half_plane() {
        let g = QuadGrid::default_for(HyperbolicDomain::UpperHalf, 1).unwrap();
        for q in [2, 3] {
            let r = repro_check(repro_test_form(q), q, c(0.0, -2.0), &g).unwrap();
            assert!(r.relerr < 1e-2, "{r:?}");
            assert!(r.tail_bound.unwrap() < 1e-2 * r.lhs.norm());
        }
        let zero = repro_check(|_| c(0.0, 0.0), 2, c(0.0, -2.0), &g).unwrap();
        assert_eq!((zero.lhs, zero.rhs, zero.relerr), (c(0.0, 0.0), c(0.0, 0.0), 0.0));
    }

    #[test]
    fn kernel_criterion_matches_d0_beta() {
        let g = ext();
        let poly = DensityFn::ahlfors_weill_polynomial(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let angular = DensityFn::Angular { m: 6, amp: [1.0, 0.0] };
        let z = c(0.3, 0.2);
        for series in [Series::A, Series::B] {
            for n in [3, 5] {
                for nu in [&poly, &angular] {
                    let r = kernel_criterion_check(series, nu, n, z, &g).unwrap();
                    assert!(r.lhs.norm() > 1e-3, "{r:?}");
                    assert!(r.relerr < 1e-10, "{r:?}");
                }
            }
        }
        let aw1 = DensityFn::ahlfors_weill_polynomial(&[c(1.0, 0.0)]);
        for n in [3, 5] {
            let r = kernel_criterion_check(Series::A, &aw1, n, c(0.0, 0.0), &g).unwrap();
            assert!(r.relerr < 1e-2, "{r:?}");
        }
    }

    #[test]
    fn operator_bound_holds_on_samples() {
        let g = QuadGrid::exterior_disc(48, 128).unwrap();
        let nu = DensityFn::Angular { m: 4, amp: [1.0, 0.0] };
        for n in 3..=5 {
            for series in [Series::A, Series::B] {
                let v = d0_beta_weighted(series, n, &nu, c(0.6, 0.0), &g).unwrap();
                assert!(v <= d0_beta_operator_bound(series, n) * nu.sup_bound());
            }
        }
    }

    #[test]
    fn density_sup_bounds_respected() {
        let nus = [
            DensityFn::ahlfors_weill_polynomial(&[c(1.0, 0.0), c(-0.5, 0.5), c(0.0, 2.0)]),
            DensityFn::Angular { m: -3, amp: [0.0, 2.0] },
            DensityFn::Constant { value: [0.5, 0.5] },
        ];
        for nu in &nus {
            for &(eta, _) in ext().nodes().iter().step_by(97) {
                assert!(nu.eval(eta).norm() <= nu.sup_bound() * (1.0 + 1e-12));
            }
        }
        let json = serde_json::to_string(&nus[0]).unwrap();
        let back: DensityFn = serde_json::from_str(&json).unwrap();
        assert_eq!(back, nus[0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = ext();
        assert!(d0_beta(&[(3, 1.0)], &DensityFn::Zero, c(1.5, 0.0), &g).is_err());
        let disc = QuadGrid::disc(8, 16).unwrap();
        assert!(matches!(
            d0_beta(&[(3, 1.0)], &DensityFn::Zero, c(0.0, 0.0), &disc),
            Err(IntegralError::Quad(QuadError::DomainMismatch { .. }))
        ));
        let hp = QuadGrid::half_plane(true, 16, 16, 10.0).unwrap();
        assert!(repro_check(repro_test_form(2), 1, c(0.0, -2.0), &hp).is_err());
        assert!(repro_check(repro_test_form(2), 2, c(0.0, 2.0), &hp).is_err());
    }
}
