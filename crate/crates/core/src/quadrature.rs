//! Product Gauss–Legendre rules on the model domains.
//!
//! * disc: Gauss–Legendre in `r ∈ (0, 1)` times the uniform rule in angle;
//! * exterior disc: the disc rule pushed through `η = 1/ζ̄`, with Jacobian
//!   `|ζ|^{−4}`, so no truncation is needed;
//! * half-planes: polar coordinates about the origin, truncated at a radius,
//!   with geometrically graded radial panels and Gauss–Legendre in angle.
//!
//! Node values are computed in parallel, collected in node order and summed
//! pairwise, so results are bit-identical for any thread count.

use std::f64::consts::{PI, TAU};

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::maps::HyperbolicDomain;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature needs at least 2 nodes per direction")]
    TooFewNodes,
    #[error("non-finite integrand value {value} at node {z}")]
    NonFinite { z: Complex64, value: Complex64 },
    #[error("integral over the {found} requested on a {expected} grid")]
    DomainMismatch {
        expected: HyperbolicDomain,
        found: HyperbolicDomain,
    },
    #[error("truncation radius must be positive")]
    BadRadius,
}

pub const DEFAULT_DISC_RADIAL: usize = 96;
pub const DEFAULT_DISC_ANGULAR: usize = 256;
pub const DEFAULT_HALF_PLANE_RADIAL: usize = 128;
pub const DEFAULT_HALF_PLANE_ANGULAR: usize = 128;
pub const DEFAULT_TRUNCATION: f64 = 40.0;

#[derive(Debug, Clone, Serialize)]
pub struct QuadGrid {
    pub domain: HyperbolicDomain,
    pub radial: usize,
    pub angular: usize,
    /// Outer radius for half-plane grids; `None` when the domain is covered exactly.
    pub truncation: Option<f64>,
    #[serde(skip)]
    nodes: Vec<(Complex64, f64)>,
}

fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Vec<(f64, f64)>, QuadError> {
    let rule = GaussLegendre::new(n).map_err(|_| QuadError::TooFewNodes)?;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    Ok(rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect())
}

impl QuadGrid {
    pub fn disc(radial: usize, angular: usize) -> Result<Self, QuadError> {
        if angular < 2 {
            return Err(QuadError::TooFewNodes);
        }
        let radii = gauss_legendre(radial, 0.0, 1.0)?;
        let dtheta = TAU / angular as f64;
        let mut nodes = Vec::with_capacity(radial * angular);
        for &(r, wr) in &radii {
            for m in 0..angular {
                nodes.push((Complex64::from_polar(r, dtheta * m as f64), wr * r * dtheta));
            }
        }
        Ok(Self {
            domain: HyperbolicDomain::Disc,
            radial,
            angular,
            truncation: None,
            nodes,
        })
    }

    pub fn exterior_disc(radial: usize, angular: usize) -> Result<Self, QuadError> {
        let disc = Self::disc(radial, angular)?;
        let nodes = disc
            .nodes
            .iter()
            .map(|&(zeta, w)| (zeta.conj().inv(), w / zeta.norm_sqr().powi(2)))
            .collect();
        Ok(Self {
            domain: HyperbolicDomain::ExteriorDisc,
            nodes,
            ..disc
        })
    }

    /// Polar grid on `{|η| < radius}` intersected with the upper or lower half-plane.
    pub fn half_plane(
        upper: bool,
        radial: usize,
        angular: usize,
        radius: f64,
    ) -> Result<Self, QuadError> {
        if !(radius > 0.0) {
            return Err(QuadError::BadRadius);
        }
        let mut edges = vec![0.0];
        let mut e = 1.0f64.min(radius);
        while e < radius {
            edges.push(e);
            e *= 2.0;
        }
        edges.push(radius);
        let panels = edges.len() - 1;
        let per_panel = (radial / panels).max(8);
        let mut radii = Vec::with_capacity(per_panel * panels);
        for w in edges.windows(2) {
            radii.extend(gauss_legendre(per_panel, w[0], w[1])?);
        }
        let (a, b) = if upper { (0.0, PI) } else { (-PI, 0.0) };
        let thetas = gauss_legendre(angular, a, b)?;
        let mut nodes = Vec::with_capacity(radii.len() * thetas.len());
        for &(r, wr) in &radii {
            for &(t, wt) in &thetas {
                nodes.push((Complex64::from_polar(r, t), wr * r * wt));
            }
        }
        Ok(Self {
            domain: if upper {
                HyperbolicDomain::UpperHalf
            } else {
                HyperbolicDomain::LowerHalf
            },
            radial: radii.len(),
            angular,
            truncation: Some(radius),
            nodes,
        })
    }

    /// Default resolution for a domain, with every node count multiplied by `factor`.
    pub fn default_for(domain: HyperbolicDomain, factor: usize) -> Result<Self, QuadError> {
        let k = factor.max(1);
        match domain {
            HyperbolicDomain::Disc => Self::disc(DEFAULT_DISC_RADIAL * k, DEFAULT_DISC_ANGULAR * k),
            HyperbolicDomain::ExteriorDisc => {
                Self::exterior_disc(DEFAULT_DISC_RADIAL * k, DEFAULT_DISC_ANGULAR * k)
            }
            HyperbolicDomain::UpperHalf | HyperbolicDomain::LowerHalf => Self::half_plane(
                domain == HyperbolicDomain::UpperHalf,
                DEFAULT_HALF_PLANE_RADIAL * k,
                DEFAULT_HALF_PLANE_ANGULAR * k,
                DEFAULT_TRUNCATION,
            ),
        }
    }

    /// A rule built elsewhere, e.g. on a fundamental domain.
    pub fn from_nodes(
        domain: HyperbolicDomain,
        radial: usize,
        angular: usize,
        nodes: Vec<(Complex64, f64)>,
    ) -> Result<Self, QuadError> {
        if let Some(&(z, w)) = nodes.iter().find(|(z, w)| !(z.is_finite() && *w > 0.0 && w.is_finite())) {
            return Err(QuadError::NonFinite {
                z,
                value: Complex64::new(w, 0.0),
            });
        }
        Ok(Self {
            domain,
            radial,
            angular,
            truncation: None,
            nodes,
        })
    }

    pub fn nodes(&self) -> &[(Complex64, f64)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn require(&self, domain: HyperbolicDomain) -> Result<(), QuadError> {
        if self.domain == domain {
            Ok(())
        } else {
            Err(QuadError::DomainMismatch {
                expected: self.domain,
                found: domain,
            })
        }
    }

    /// Integrand values at every node, in node order.
    pub fn sample<F>(&self, f: F) -> Result<Vec<Complex64>, QuadError>
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        self.nodes
            .par_iter()
            .map(|&(z, _)| {
                let v = f(z);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(QuadError::NonFinite { z, value: v })
                }
            })
            .collect()
    }

    /// `Σ w_k v_k` for precomputed node values.
    pub fn weighted_sum(&self, values: &[Complex64]) -> Complex64 {
        let terms: Vec<Complex64> = self
            .nodes
            .iter()
            .zip(values)
            .map(|(&(_, w), &v)| v * w)
            .collect();
        pairwise_sum(&terms)
    }
}

/// Recursive pairwise summation with a fixed split.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 32 {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `∫ f d²z` over the grid's domain.
pub fn quad2d<F>(f: F, grid: &QuadGrid) -> Result<Complex64, QuadError>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let values = grid.sample(f)?;
    Ok(grid.weighted_sum(&values))
}

/// Bound on the integral of `|f|` over `{|η| > R}` in a half-plane, assuming
/// `|f(η)| ≤ C|η|^{−p}` there with `C` fitted on the outer circle:
/// `∫_R^∞ π C ρ^{1−p} dρ = π C R^{2−p}/(p − 2)`.
pub fn half_plane_tail_bound<F>(f: F, upper: bool, radius: f64, decay: f64) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let samples = 256;
    let c = (0..samples)
        .map(|k| {
            let t = PI * (k as f64 + 0.5) / samples as f64;
            let z = Complex64::from_polar(radius, if upper { t } else { -t });
            f(z).norm() * radius.powf(decay)
        })
        .fold(0.0, f64::max);
    PI * c * radius.powf(2.0 - decay) / (decay - 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disc_area_and_moments() {
        let g = QuadGrid::default_for(HyperbolicDomain::Disc, 1).unwrap();
        let area = quad2d(|_| c(1.0, 0.0), &g).unwrap();
        assert!((area - c(PI, 0.0)).norm() < 1e-10);
        assert!(quad2d(|z| z, &g).unwrap().norm() < 1e-12);
        let m = quad2d(|z| c(z.norm_sqr(), 0.0), &g).unwrap();
        assert!((m.re - PI / 2.0).abs() < 1e-12);
        assert!(g.nodes().iter().all(|&(_, w)| w > 0.0));
    }

    #[test]
    fn exterior_inverse_fourth_power() {
        let g = QuadGrid::default_for(HyperbolicDomain::ExteriorDisc, 1).unwrap();
        let v = quad2d(|eta| c(eta.norm_sqr().powi(-2), 0.0), &g).unwrap();
        assert!((v - c(PI, 0.0)).norm() < 1e-10);
        assert!(g.nodes().iter().all(|&(z, _)| z.norm() > 1.0));
    }

    #[test]
    fn half_plane_gaussian() {
        let g = QuadGrid::default_for(HyperbolicDomain::UpperHalf, 1).unwrap();
        // ∫_{Im > 0} e^{−|z|²} = π/2
        let v = quad2d(|z| c((-z.norm_sqr()).exp(), 0.0), &g).unwrap();
        assert!((v.re - PI / 2.0).abs() < 1e-12);
        let tail = half_plane_tail_bound(|z| c(z.norm_sqr().powi(-3), 0.0), true, 40.0, 6.0);
        assert!((tail - PI * 40f64.powi(-4) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn reduction_is_deterministic() {
        let g = QuadGrid::disc(40, 64).unwrap();
        let f = |z: Complex64| (z * 3.0).exp() / (c(2.0, 0.5) - z);
        let a = quad2d(f, &g).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| quad2d(f, &g).unwrap());
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn rejects_bad_values() {
        let g = QuadGrid::disc(4, 8).unwrap();
        assert!(matches!(
            quad2d(|_| c(f64::NAN, 0.0), &g),
            Err(QuadError::NonFinite { .. })
        ));
        assert_eq!(QuadGrid::disc(1, 8).unwrap_err(), QuadError::TooFewNodes);
    }
}
