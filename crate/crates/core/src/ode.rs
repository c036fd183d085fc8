//! Local power-series solutions of `S_f = φ` through `h'' + ½φh = 0`, and
//! homogeneous solutions of both higher-Schwarzian series.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::jet::{Jet, JetError};
use crate::symbolic::{Series, SymbolicError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("leading coefficient vanishes")]
    VanishingLeading,
    #[error("polynomial degree {deg} exceeds {max}")]
    DegreeTooHigh { deg: usize, max: usize },
    #[error("operator order must be at least {min}, got {n}")]
    OrderTooSmall { n: usize, min: usize },
    #[error("basis change matrix is singular")]
    SingularBasisChange,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Basis `h₁ (h₁(0) = 1, h₁'(0) = 0)`, `h₂ (h₂(0) = 0, h₂'(0) = 1)` of
/// `h'' + ½φh = 0` and the quotient `f = h₂/h₁`.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub h1: Jet,
    pub h2: Jet,
    pub f: Jet,
    pub wronskian: Complex64,
}

impl OdeSolution {
    /// `h₁h₂' − h₁'h₂` as a jet; constant for exact solutions.
    pub fn wronskian_jet(&self) -> Result<Jet, OdeError> {
        let n = self.h1.order() - 1;
        let a = self.h1.truncate(n).mul(&self.h2.derive(1)?)?;
        let b = self.h1.derive(1)?.mul(&self.h2.truncate(n))?;
        Ok(a.sub(&b)?)
    }

    /// Quotient for the basis `k₁ = a h₁ + b h₂`, `k₂ = c h₁ + d h₂`.
    pub fn change_basis(&self, m: [[Complex64; 2]; 2]) -> Result<OdeSolution, OdeError> {
        let [[a, b], [cc, d]] = m;
        let det = a * d - b * cc;
        if det.norm() < 1e-14 {
            return Err(OdeError::SingularBasisChange);
        }
        let k1 = self.h1.scale(a).add(&self.h2.scale(b))?;
        let k2 = self.h1.scale(cc).add(&self.h2.scale(d))?;
        Ok(OdeSolution {
            f: k2.div(&k1)?,
            wronskian: self.wronskian * det,
            h1: k1,
            h2: k2,
        })
    }
}

/// Recurrence `(k + 2)(k + 1) a_{k+2} = −½ Σ_j φ_j a_{k−j}`, solved at `φ`'s center.
pub fn schwarzian_solve(phi: &Jet, order: usize) -> Result<OdeSolution, OdeError> {
    let order = order.max(1);
    let basis = |a0: Complex64, a1: Complex64| -> Result<Jet, OdeError> {
        let mut a = vec![c(0.0); order + 1];
        a[0] = a0;
        a[1] = a1;
        for k in 0..order - 1 {
            let s: Complex64 = (0..=k.min(phi.order())).map(|j| phi.coeff(j) * a[k - j]).sum();
            a[k + 2] = -0.5 * s / ((k + 2) * (k + 1)) as f64;
        }
        Ok(Jet::new(phi.center(), a)?)
    };
    let h1 = basis(c(1.0), c(0.0))?;
    let h2 = basis(c(0.0), c(1.0))?;
    let f = h2.div(&h1)?;
    Ok(OdeSolution {
        h1,
        h2,
        f,
        wronskian: c(1.0),
    })
}

fn polynomial_jet(coeffs: &[Complex64], order: usize) -> Result<Jet, OdeError> {
    let mut a = coeffs.to_vec();
    a.resize(order + 1, c(0.0));
    a.truncate(order + 1);
    Ok(Jet::new(c(0.0), a)?)
}

/// `f` with `f(0) = 0` and `f' = (α₀ + … + α_{n−2} z^{n−2})^{−2/(n−2)}`, to order `order`.
pub fn homogeneous_b(n: usize, alpha: &[Complex64], order: usize) -> Result<Jet, OdeError> {
    if n < 3 {
        return Err(OdeError::OrderTooSmall { n, min: 3 });
    }
    if alpha.len() > n - 1 {
        return Err(OdeError::DegreeTooHigh {
            deg: alpha.len() - 1,
            max: n - 2,
        });
    }
    if alpha.first().is_none_or(|a| a.norm() == 0.0) {
        return Err(OdeError::VanishingLeading);
    }
    let p = polynomial_jet(alpha, order.max(1) - 1)?;
    let fp = p.pow(Rational64::new(-2, n as i64 - 2))?;
    Ok(fp.integrate(c(0.0)))
}

#[derive(Debug, Clone, Serialize)]
pub struct HomogeneousReport {
    pub series: Series,
    pub n: usize,
    /// Order of the residual jet of `σ_n[f]`.
    pub order: usize,
    pub residual: f64,
}

/// Largest coefficient of `σ^B_n[f]` for `f = homogeneous_b(n, α)`, through `order`.
pub fn homogeneous_b_check(n: usize, alpha: &[Complex64], order: usize) -> Result<HomogeneousReport, OdeError> {
    let f = homogeneous_b(n, alpha, order + n)?;
    let r = Series::B.sigma(n)?.evaluate_jet(&f)?;
    Ok(HomogeneousReport {
        series: Series::B,
        n,
        order: r.order(),
        residual: r.max_abs_coeff(),
    })
}

/// Solves `S_g = P`, inverts `g` and returns the largest coefficient of
/// `σ^A_n[g⁻¹]` through `order`. Requires `deg P ≤ n − 4`.
pub fn homogeneous_a_check(p: &[Complex64], n: usize, order: usize) -> Result<HomogeneousReport, OdeError> {
    if n < 4 {
        return Err(OdeError::OrderTooSmall { n, min: 4 });
    }
    let deg = p.iter().rposition(|a| a.norm() != 0.0).unwrap_or(0);
    if deg > n - 4 {
        return Err(OdeError::DegreeTooHigh { deg, max: n - 4 });
    }
    let total = order + n;
    let g = schwarzian_solve(&polynomial_jet(p, total)?, total)?.f;
    let f = g.reverse()?;
    let r = Series::A.sigma(n)?.evaluate_jet(&f)?;
    Ok(HomogeneousReport {
        series: Series::A,
        n,
        order: r.order(),
        residual: r.max_abs_coeff(),
    })
}
