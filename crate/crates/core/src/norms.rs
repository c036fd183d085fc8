//! Sampled hyperbolic sup-norms `‖φ‖_{B_n} = sup |φ| λ^{−n}`.
//!
//! Sampling can only see a maximum over finitely many points, so every
//! estimate here is a lower bound for the true supremum.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{weighted_modulus_on_disc, ExactError};
use crate::maps::{AnalyticFn, HyperbolicDomain, MapError};
use crate::symbolic::{Series, SymbolicError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("grid needs at least 8 angular samples, got {0}")]
    TooFewAngles(usize),
    #[error("non-finite sample {value} at {z}")]
    NonFinite { z: Complex64, value: Complex64 },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("exact sampling is only available on the unit disc")]
    NotDisc,
}

/// Radii `1 − 2^{−j}` for `j = 0..=levels`, `angles` equally spaced rays.
///
/// For domains other than the disc the disc samples are carried over by the
/// domain's standard Möbius map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleGrid {
    pub levels: usize,
    pub angles: usize,
    pub domain: HyperbolicDomain,
}

impl Default for SampleGrid {
    fn default() -> Self {
        Self {
            levels: 14,
            angles: 256,
            domain: HyperbolicDomain::Disc,
        }
    }
}

impl SampleGrid {
    pub fn new(levels: usize, angles: usize, domain: HyperbolicDomain) -> Result<Self, NormError> {
        if angles < 8 {
            return Err(NormError::TooFewAngles(angles));
        }
        Ok(Self {
            levels,
            angles,
            domain,
        })
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..=self.levels).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect()
    }

    /// Sample points in a fixed order. The origin appears once.
    pub fn points(&self) -> Vec<Complex64> {
        self.samples().into_iter().map(|(z, _)| z).collect()
    }

    /// Sample points paired with `λ_D` there.
    ///
    /// The density is computed from the exact level data (`1 − r = 2^{−j}`)
    /// and pulled back through the domain map, rather than from the rounded
    /// point, which would lose digits near the boundary.
    pub fn samples(&self) -> Vec<(Complex64, f64)> {
        let psi = self.domain.from_disc();
        let mut out = Vec::with_capacity(self.levels * self.angles + 1);
        for j in 0..=self.levels {
            let gap = 0.5f64.powi(j as i32);
            let r = 1.0 - gap;
            let lam_disc = 1.0 / (gap * (1.0 + r));
            let count = if j == 0 { 1 } else { self.angles };
            for m in 0..count {
                let z = Complex64::from_polar(r, TAU * m as f64 / self.angles as f64);
                let w = psi.apply(z);
                if w.is_finite() && self.domain.contains(w) {
                    out.push((w, lam_disc / psi.derivative(z).norm()));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    /// Largest sampled value of `|φ| λ^{−n}`; a lower bound for the norm.
    pub value: f64,
    pub argmax: Complex64,
    pub samples: usize,
}

/// Max over the grid of `|φ(z)| λ_D(z)^{−n}`.
pub fn bn_norm_estimate<F>(phi: F, n: i32, grid: &SampleGrid) -> Result<NormEstimate, NormError>
where
    F: Fn(Complex64) -> Result<Complex64, NormError> + Sync,
{
    let pts = grid.samples();
    let values: Vec<(f64, Complex64)> = pts
        .par_iter()
        .map(|&(z, lam)| {
            let v = phi(z)?;
            if !v.is_finite() {
                return Err(NormError::NonFinite { z, value: v });
            }
            Ok((v.norm() * lam.powi(-n), z))
        })
        .collect::<Result<_, _>>()?;
    let (value, argmax) = values
        .into_iter()
        .fold((0.0, Complex64::new(0.0, 0.0)), |best, cur| {
            if cur.0 > best.0 {
                cur
            } else {
                best
            }
        });
    Ok(NormEstimate {
        value,
        argmax,
        samples: pts.len(),
    })
}

/// `z ↦ σ_n[f](z)` as a pointwise function.
pub fn sigma_fn(
    series: Series,
    n: usize,
    f: &AnalyticFn,
) -> Result<impl Fn(Complex64) -> Result<Complex64, NormError> + Sync + '_, NormError> {
    let sigma = series.sigma(n)?.compile();
    Ok(move |z: Complex64| {
        let jet = f.jet(z, n)?;
        Ok(sigma.evaluate(&jet, Complex64::new(0.0, 0.0))?)
    })
}

/// Relative band below the floating-point maximum inside which samples are
/// re-evaluated exactly. Float errors here are around 1e−15, far inside it.
pub const EXACT_SCREEN: f64 = 1e-9;

/// Sampled `B_{n−1}` norm of `σ_n[f]` on the disc.
///
/// All samples are evaluated in floating point; those within
/// [`EXACT_SCREEN`] of the maximum are then re-evaluated in exact rational
/// arithmetic and rounded once, so a bound attained exactly is never
/// overshot by rounding.
pub fn sigma_norm_estimate(
    series: Series,
    n: usize,
    f: &AnalyticFn,
    grid: &SampleGrid,
) -> Result<NormEstimate, NormError> {
    if grid.domain != HyperbolicDomain::Disc {
        return Err(NormError::NotDisc);
    }
    let sigma = series.sigma(n)?;
    let weight = n as u32 - 1;
    let samples = grid.samples();
    let phi = sigma_fn(series, n, f)?;
    let float: Vec<(Complex64, f64)> = samples
        .par_iter()
        .map(|&(z, lam)| {
            let v = phi(z)?;
            if !v.is_finite() {
                return Err(NormError::NonFinite { z, value: v });
            }
            Ok((z, v.norm() * lam.powi(-(weight as i32))))
        })
        .collect::<Result<_, _>>()?;
    let threshold = float.iter().map(|p| p.1).fold(0.0, f64::max) * (1.0 - EXACT_SCREEN);
    let candidates: Vec<Complex64> = float
        .into_iter()
        .filter(|&(_, v)| v >= threshold)
        .map(|(z, _)| z)
        .collect();
    let exact: Vec<f64> = candidates
        .par_iter()
        .map(|&z| weighted_modulus_on_disc(&sigma, f, z, weight))
        .collect::<Result<_, _>>()?;
    let (value, argmax) = exact
        .into_iter()
        .zip(candidates)
        .fold((0.0, Complex64::new(0.0, 0.0)), |best, cur| {
            if cur.0 > best.0 {
                cur
            } else {
                best
            }
        });
    Ok(NormEstimate {
        value,
        argmax,
        samples: samples.len(),
    })
}

/// `4^{n−3}(n−2)!·6`.
pub fn sharp_bound_a(n: usize) -> f64 {
    let fact: f64 = (1..=n - 2).map(|k| k as f64).product();
    4f64.powi(n as i32 - 3) * fact * 6.0
}

/// `2(n−2)·n(n+2)⋯(3n−6)`.
pub fn sharp_bound_b(n: usize) -> f64 {
    let prod: f64 = (n..=3 * n - 6).step_by(2).map(|k| k as f64).product();
    2.0 * (n - 2) as f64 * prod
}

pub fn sharp_bound(series: Series, n: usize) -> f64 {
    match series {
        Series::A => sharp_bound_a(n),
        Series::B => sharp_bound_b(n),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub function: String,
    pub series: Series,
    pub n: usize,
    pub estimate: f64,
    pub argmax: Complex64,
    pub bound: f64,
    pub margin: f64,
    pub passed: bool,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "function,series,n,estimate,bound,margin";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.15e},{:.15e},{:.15e}",
            self.function, self.series, self.n, self.estimate, self.bound, self.margin
        )
    }
}

/// Compares the sampled `B_{n−1}` norm of `σ_n[f]` with the sharp bound.
pub fn bound_check(
    series: Series,
    n: usize,
    name: &str,
    f: &AnalyticFn,
    grid: &SampleGrid,
    tol: f64,
) -> Result<BoundReport, NormError> {
    let est = sigma_norm_estimate(series, n, f, grid)?;
    let bound = sharp_bound(series, n);
    let margin = bound - est.value;
    Ok(BoundReport {
        function: name.to_string(),
        series,
        n,
        estimate: est.value,
        argmax: est.argmax,
        bound,
        margin,
        passed: margin >= -tol,
    })
}

/// `‖φ‖_{B_n}` estimates for `n = n_min..=n_max`; these decrease towards `|φ(0)|`.
pub fn norm_limit_check<F>(
    phi: F,
    n_min: i32,
    n_max: i32,
    grid: &SampleGrid,
) -> Result<Vec<f64>, NormError>
where
    F: Fn(Complex64) -> Result<Complex64, NormError> + Sync,
{
    (n_min..=n_max)
        .map(|n| bn_norm_estimate(&phi, n, grid).map(|e| e.value))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bounds_match_closed_forms() {
        assert_eq!(sharp_bound_a(3), 6.0);
        assert_eq!(sharp_bound_a(4), 48.0);
        assert_eq!(sharp_bound_a(5), 576.0);
        assert_eq!(sharp_bound_b(3), 6.0);
        assert_eq!(sharp_bound_b(4), 96.0);
        assert_eq!(sharp_bound_b(5), 1890.0);
    }

    #[test]
    fn grid_shape() {
        let g = SampleGrid::new(3, 8, HyperbolicDomain::Disc).unwrap();
        assert_eq!(g.radii(), vec![0.0, 0.5, 0.75, 0.875]);
        let pts = g.points();
        assert_eq!(pts.len(), 1 + 3 * 8);
        assert!(pts.iter().any(|z| (z - c(-0.875, 0.0)).norm() < 1e-15));
        assert!(SampleGrid::new(3, 4, HyperbolicDomain::Disc).is_err());
        let h = SampleGrid::new(4, 8, HyperbolicDomain::UpperHalf).unwrap();
        assert!(h.points().iter().all(|z| z.im > 0.0));
    }

    #[test]
    fn trivial_norms() {
        let g = SampleGrid::default();
        let zero = bn_norm_estimate(|_| Ok(c(0.0, 0.0)), 2, &g).unwrap();
        assert_eq!(zero.value, 0.0);
        let one = bn_norm_estimate(|_| Ok(c(1.0, 0.0)), 2, &g).unwrap();
        assert_eq!(one.value, 1.0);
        assert!(matches!(
            bn_norm_estimate(|_| Ok(c(f64::NAN, 0.0)), 2, &g),
            Err(NormError::NonFinite { .. })
        ));
    }

    #[test]
    fn koebe_schwarzian_is_six() {
        let g = SampleGrid::default();
        let est = sigma_norm_estimate(Series::A, 3, &AnalyticFn::Koebe, &g).unwrap();
        assert!(est.value >= 6.0 - 1e-6 && est.value <= 6.0, "{}", est.value);
        // the floating-point path agrees to rounding
        let float = bn_norm_estimate(sigma_fn(Series::A, 3, &AnalyticFn::Koebe).unwrap(), 2, &g)
            .unwrap();
        assert!((float.value - 6.0).abs() < 1e-13);
    }

    #[test]
    fn refinement_never_decreases() {
        let f = sigma_fn(Series::B, 4, &AnalyticFn::Koebe).unwrap();
        let mut prev = 0.0;
        for (levels, angles) in [(4, 8), (6, 16), (8, 64), (10, 128)] {
            let g = SampleGrid::new(levels, angles, HyperbolicDomain::Disc).unwrap();
            let v = bn_norm_estimate(&f, 3, &g).unwrap().value;
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn norm_limits() {
        let g = SampleGrid::new(12, 64, HyperbolicDomain::Disc).unwrap();
        let consts = norm_limit_check(|_| Ok(c(0.0, 2.5)), 2, 6, &g).unwrap();
        assert!(consts.iter().all(|&v| (v - 2.5).abs() < 1e-15));
        let ident = norm_limit_check(Ok, 2, 40, &g).unwrap();
        assert!(ident.windows(2).all(|w| w[1] <= w[0]));
        // sup r(1 − r²)^n is attained at r = (2n + 1)^{−1/2}
        for (i, v) in ident.iter().enumerate() {
            let n = (i + 2) as f64;
            let sup = (2.0 * n + 1.0).powf(-0.5) * (2.0 * n / (2.0 * n + 1.0)).powf(n);
            assert!(*v <= sup + 1e-15);
        }
        assert!(*ident.last().unwrap() < 1e-5);
        let s = sigma_fn(Series::A, 3, &AnalyticFn::Koebe).unwrap();
        let koebe = norm_limit_check(s, 2, 30, &g).unwrap();
        assert!(koebe.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!((koebe.last().unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn catalog_respects_sharp_bounds() {
        let g = SampleGrid::new(10, 64, HyperbolicDomain::Disc).unwrap();
        for (name, f) in crate::maps::schlicht_catalog() {
            for series in [Series::A, Series::B] {
                for n in 3..=5 {
                    let r = bound_check(series, n, &name, &f, &g, 0.0).unwrap();
                    assert!(r.passed, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn bound_report_csv() {
        let g = SampleGrid::new(10, 32, HyperbolicDomain::Disc).unwrap();
        let r = bound_check(Series::A, 4, "koebe", &AnalyticFn::Koebe, &g, 1e-9).unwrap();
        assert!(r.passed);
        assert!(r.csv_row().starts_with("koebe,A,4,"));
    }
}
