//! Randomized numerical checks of the structural identities satisfied by
//! higher Schwarzians. Each check draws its inputs from a seeded ChaCha
//! stream so reports are reproducible.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::jet::Jet;
use crate::maps::{AnalyticFn, Moebius};
use crate::symbolic::{classical, sigma_a, Classical, Series, SymbolicError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `σ_n[f∘g] = (σ_n[f]∘g)·(g')^{n−1}` for disc automorphisms `g`.
    Covariance,
    /// `σ^A_{n+1}[f]/(f')^{n−1} = (σ^A_n[f]/(f')^{n−1})'`.
    AltRecursion,
    /// `σ^A_n[f] = −((S_{f⁻¹})^{(n−3)}∘f)·(f')^{n−1}`.
    ///
    /// The sign comes from `S_{f⁻¹}∘f = −S_f/(f')²`.
    InverseSchwarzian,
    /// `σ_n[af + b] = σ_n[f]`.
    Affine,
    /// `((f∘g)(g')^{1−n/2})^{(n−1)} = (f^{(n−1)}∘g)(g')^{n/2}`.
    Bol,
    /// Every monomial of `σ_n` has weight `n − 1` and zero total degree.
    Weight,
}

impl std::str::FromStr for Identity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "covariance" => Identity::Covariance,
            "altrec" => Identity::AltRecursion,
            "schwinv" => Identity::InverseSchwarzian,
            "affine" => Identity::Affine,
            "bol" => Identity::Bol,
            "weight" => Identity::Weight,
            other => return Err(format!("unknown identity '{other}'")),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub identity: Identity,
    pub series: Series,
    pub orders: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform point of modulus at most `rmax`.
pub fn random_point<R: Rng>(rng: &mut R, rmax: f64) -> Complex64 {
    let r = rmax * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_disc_automorphism<R: Rng>(rng: &mut R) -> Moebius {
    let p = random_point(rng, 0.7);
    Moebius::disc_automorphism(rng.gen_range(0.0..std::f64::consts::TAU), p).expect("|p| < 1")
}

/// A univalent map of the disc: either Koebe precomposed with a contraction
/// or a polynomial whose derivative stays away from zero.
pub fn random_schlicht<R: Rng>(rng: &mut R) -> AnalyticFn {
    if rng.gen_bool(0.5) {
        let scale = rng.gen_range(0.3..0.6);
        let a = Complex64::from_polar(scale, rng.gen_range(0.0..std::f64::consts::TAU));
        let b = random_point(rng, 0.9 - scale);
        AnalyticFn::Compose {
            fns: vec![AnalyticFn::Koebe, AnalyticFn::polynomial(&[b, a])],
        }
    } else {
        AnalyticFn::polynomial(&[
            random_point(rng, 1.0),
            c(1.0, 0.0),
            random_point(rng, 0.3),
            random_point(rng, 0.1),
            random_point(rng, 0.03),
        ])
    }
}

/// Relative discrepancy, normalized by the larger of the two sides.
pub fn relative_error(lhs: Complex64, rhs: Complex64) -> f64 {
    let scale = lhs.norm().max(rhs.norm());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).norm() / scale
    }
}

/// Largest coefficient gap between two jets, relative to the larger jet.
pub fn jet_relative_error(a: &Jet, b: &Jet) -> f64 {
    let n = a.order().min(b.order());
    let mut gap: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for k in 0..=n {
        gap = gap.max((a.coeff(k) - b.coeff(k)).norm());
        scale = scale.max(a.coeff(k).norm()).max(b.coeff(k).norm());
    }
    if scale == 0.0 {
        0.0
    } else {
        gap / scale
    }
}

/// Extra jet order beyond `n` used by the jet-valued checks.
const SLACK: usize = 4;

fn covariance_trial(
    rng: &mut ChaCha8Rng,
    series: Series,
    n: usize,
) -> Result<f64, SymbolicError> {
    let f = random_schlicht(rng);
    let g = random_disc_automorphism(rng);
    let z = random_point(rng, 0.6);
    let sigma = series.sigma(n)?.compile();
    let fg = AnalyticFn::Compose {
        fns: vec![f.clone(), AnalyticFn::moebius(&g)],
    };
    let lhs = sigma.evaluate(&fg.jet(z, n).map_err(map_err)?, c(0.0, 0.0))?;
    let rhs = sigma.evaluate(&f.jet(g.apply(z), n).map_err(map_err)?, c(0.0, 0.0))?
        * g.derivative(z).powu(n as u32 - 1);
    Ok(relative_error(lhs, rhs))
}

fn map_err(e: crate::maps::MapError) -> SymbolicError {
    match e {
        crate::maps::MapError::Jet(j) => SymbolicError::Jet(j),
        _ => SymbolicError::VanishingDerivative,
    }
}

fn altrec_trial(rng: &mut ChaCha8Rng, n: usize) -> Result<f64, SymbolicError> {
    let f = random_schlicht(rng).jet(random_point(rng, 0.6), n + 1 + SLACK).map_err(map_err)?;
    let u1 = f.derive(1)?;
    let w = u1.powi(n as i64 - 1)?.reciprocal()?;
    let lhs = sigma_a(n + 1)?.evaluate_jet(&f)?;
    let lhs = lhs.mul(&w)?;
    let rhs = sigma_a(n)?.evaluate_jet(&f)?.mul(&w)?.derive(1)?;
    Ok(jet_relative_error(&lhs, &rhs))
}

fn schwinv_trial(rng: &mut ChaCha8Rng, n: usize) -> Result<f64, SymbolicError> {
    let f = random_schlicht(rng).jet(random_point(rng, 0.6), n + SLACK).map_err(map_err)?;
    let g = f.reverse()?;
    let s = classical(Classical::Schwarzian).evaluate_jet(&g)?;
    let ds = s.derive(n - 3)?;
    let rhs = Jet::compose(&ds, &f)?
        .mul(&f.derive(1)?.powi(n as i64 - 1)?)?
        .scale(c(-1.0, 0.0));
    let lhs = sigma_a(n)?.evaluate_jet(&f)?;
    Ok(jet_relative_error(&lhs, &rhs))
}

fn affine_trial(rng: &mut ChaCha8Rng, series: Series, n: usize) -> Result<f64, SymbolicError> {
    let f = random_schlicht(rng).jet(random_point(rng, 0.6), n).map_err(map_err)?;
    let a = random_point(rng, 3.0) + c(0.1, 0.0);
    let b = random_point(rng, 3.0);
    let mf = f.scale(a).add_constant(b);
    let sigma = series.sigma(n)?.compile();
    let lhs = sigma.evaluate(&mf, c(0.0, 0.0))?;
    let rhs = sigma.evaluate(&f, c(0.0, 0.0))?;
    Ok(relative_error(lhs, rhs))
}

fn bol_trial(rng: &mut ChaCha8Rng, n: usize) -> Result<f64, SymbolicError> {
    let g = loop {
        let m = Moebius::new(
            random_point(rng, 1.0) + c(1.0, 0.0),
            random_point(rng, 1.0),
            random_point(rng, 0.5),
            random_point(rng, 1.0) + c(1.0, 0.0),
        );
        if let Ok(m) = m {
            break m;
        }
    };
    let z = random_point(rng, 0.3);
    let order = n - 1 + SLACK;
    let gj = g.jet(z, order).map_err(map_err)?;
    let coeffs: Vec<Complex64> = (0..=order + n).map(|_| random_point(rng, 1.0)).collect();
    let f1 = Jet::new(gj.value(), coeffs)?;
    let gp = gj.derive(1)?;
    let gj = gj.truncate(order - 1);
    let half = |k: f64| gp.powf(c(k, 0.0));
    let f2 = Jet::compose(&f1, &gj)?.mul(&half(1.0 - n as f64 / 2.0)?)?;
    let lhs = f2.derive(n - 1)?;
    let rhs = Jet::compose(&f1.derive(n - 1)?, &gj)?.mul(&half(n as f64 / 2.0)?)?;
    Ok(jet_relative_error(&lhs, &rhs))
}

fn weight_trial(series: Series, n: usize) -> Result<f64, SymbolicError> {
    let sigma = series.sigma(n)?;
    let bad = sigma
        .terms()
        .filter(|(m, _)| {
            let degree = m.degree() as i32;
            m.weight() as usize != n - 1 || m.twice_u1_exponent() != -2 * degree
        })
        .count();
    Ok(bad as f64)
}

/// Runs `trials` random instances, cycling through `orders`.
pub fn run(
    identity: Identity,
    series: Series,
    orders: &[usize],
    trials: usize,
    seed: u64,
    tolerance: f64,
) -> Result<TrialReport, SymbolicError> {
    if let Some(&n) = orders.iter().find(|&&n| n < 3) {
        return Err(SymbolicError::OrderTooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let n = orders[t % orders.len()];
        let r = match identity {
            Identity::Covariance => covariance_trial(&mut rng, series, n)?,
            Identity::AltRecursion => altrec_trial(&mut rng, n)?,
            Identity::InverseSchwarzian => schwinv_trial(&mut rng, n)?,
            Identity::Affine => affine_trial(&mut rng, series, n)?,
            Identity::Bol => bol_trial(&mut rng, n)?,
            Identity::Weight => weight_trial(series, n)?,
        };
        worst = if r.is_nan() { f64::INFINITY } else { worst.max(r) };
    }
    Ok(TrialReport {
        identity,
        series,
        orders: orders.to_vec(),
        trials,
        seed,
        max_residual: worst,
        tolerance,
        passed: worst < tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covariance_both_series() {
        for series in [Series::A, Series::B] {
            let r = run(Identity::Covariance, series, &[3, 4, 5, 6], 40, 1, 1e-9).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn covariance_detects_wrong_weight() {
        // Dropping the (g')^{n−1} factor must break the identity.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_schlicht(&mut rng);
        let g = random_disc_automorphism(&mut rng);
        let z = c(0.2, 0.1);
        let s = sigma_a(4).unwrap().compile();
        let fg = AnalyticFn::Compose {
            fns: vec![f.clone(), AnalyticFn::moebius(&g)],
        };
        let lhs = s.evaluate(&fg.jet(z, 4).unwrap(), c(0.0, 0.0)).unwrap();
        let rhs = s.evaluate(&f.jet(g.apply(z), 4).unwrap(), c(0.0, 0.0)).unwrap();
        assert!(relative_error(lhs, rhs) > 1e-3);
    }

    #[test]
    fn structural_identities() {
        let ns = [3, 4, 5, 6];
        for id in [Identity::AltRecursion, Identity::InverseSchwarzian, Identity::Bol] {
            let r = run(id, Series::A, &ns, 20, 5, 1e-8).unwrap();
            assert!(r.passed, "{r:?}");
        }
        for series in [Series::A, Series::B] {
            let r = run(Identity::Affine, series, &ns, 20, 5, 1e-12).unwrap();
            assert!(r.passed, "{r:?}");
            let r = run(Identity::Weight, series, &[3, 4, 5, 6, 7, 8, 9, 10], 8, 0, 0.5).unwrap();
            assert_eq!(r.max_residual, 0.0);
        }
    }

    #[test]
    fn same_seed_same_report() {
        let a = run(Identity::Covariance, Series::B, &[4], 10, 7, 1e-9).unwrap();
        let b = run(Identity::Covariance, Series::B, &[4], 10, 7, 1e-9).unwrap();
        assert_eq!(a.max_residual.to_bits(), b.max_residual.to_bits());
    }
}
