//! Fuchsian groups acting on the disc, Poincaré series, the Weil–Petersson
//! pairing, s-Bergman kernels and Metzger elements.

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{HyperbolicDomain, MapError, Moebius};
use crate::quadrature::{quad2d, QuadError, QuadGrid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AutomorphicError {
    #[error("generator {0} does not preserve the unit disc")]
    NotDiscPreserving(usize),
    #[error("weight must be at least 2, got {0}")]
    BadWeight(u32),
    #[error("multiplier must be finite and > 1, got {0}")]
    BadMultiplier(f64),
    #[error("fixpoints coincide")]
    CoincidentFixpoints,
    #[error("groups act on the unit disc only, not the {0}")]
    UnsupportedDomain(HyperbolicDomain),
    #[error("grid covers the {found}, pairing is on the {expected}")]
    GridMismatch {
        expected: HyperbolicDomain,
        found: HyperbolicDomain,
    },
    #[error("non-finite value {value} at {z}")]
    NonFinite { z: Complex64, value: Complex64 },
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Map(#[from] MapError),
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const DEDUPE_TOL: f64 = 1e-12;
const DISC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct GroupElement {
    /// Letters `±(i + 1)` for generator `i` and its inverse.
    pub word: Vec<i32>,
    #[serde(skip)]
    pub map: Moebius,
}

impl GroupElement {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupBall {
    #[serde(skip)]
    pub generators: Vec<Moebius>,
    pub radius: usize,
    pub elements: Vec<GroupElement>,
}

impl GroupBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements with word length exactly `r`.
    pub fn sphere(&self, r: usize) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter().filter(move |e| e.len() == r)
    }
}

/// Reduced words of length `≤ radius`, deduplicated by map value.
pub fn group_ball(gens: &[Moebius], radius: usize) -> Result<GroupBall, AutomorphicError> {
    if let Some(i) = gens.iter().position(|g| !g.preserves_disc(DISC_TOL)) {
        return Err(AutomorphicError::NotDiscPreserving(i));
    }
    let letters: Vec<(i32, Moebius)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [(i as i32 + 1, *g), (-(i as i32 + 1), g.inverse())])
        .collect();
    let mut elements = vec![GroupElement {
        word: Vec::new(),
        map: Moebius::identity(),
    }];
    let mut frontier = vec![0usize];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &idx in &frontier {
            let base = elements[idx].clone();
            for &(letter, g) in &letters {
                if base.word.last() == Some(&-letter) {
                    continue;
                }
                let map = base.map.compose(&g);
                if elements.iter().any(|e| e.map.approx_eq(&map, DEDUPE_TOL)) {
                    continue;
                }
                let mut word = base.word.clone();
                word.push(letter);
                elements.push(GroupElement { word, map });
                next.push(elements.len() - 1);
            }
        }
        frontier = next;
    }
    Ok(GroupBall {
        generators: gens.to_vec(),
        radius,
        elements,
    })
}

/// Hyperbolic cyclic group with repelling fixpoint `e^{iθ₁}`, attracting
/// fixpoint `e^{iθ₂}` and multiplier `λ`.
#[derive(Debug, Clone)]
pub struct CyclicGroup {
    pub fixpoints: [f64; 2],
    pub multiplier: f64,
    /// Sends the disc to the upper half-plane, `e^{iθ₁} ↦ 0`, `e^{iθ₂} ↦ ∞`.
    uniformizer: Moebius,
    generator: Moebius,
}

impl CyclicGroup {
    pub fn new(theta1: f64, theta2: f64, multiplier: f64) -> Result<Self, AutomorphicError> {
        if !(multiplier > 1.0 && multiplier.is_finite()) {
            return Err(AutomorphicError::BadMultiplier(multiplier));
        }
        let p1 = Complex64::from_polar(1.0, theta1);
        let p2 = Complex64::from_polar(1.0, theta2);
        if (p1 - p2).norm() < 1e-9 {
            return Err(AutomorphicError::CoincidentFixpoints);
        }
        // s² = p₂/p₁ makes (z − p₁)/(z − p₂) real on the circle
        let s = Complex64::from_polar(1.0, 0.5 * (theta2 - theta1));
        let mut t = Moebius::new(s, -s * p1, c(1.0, 0.0), -p2)?;
        if t.apply(c(0.0, 0.0)).im < 0.0 {
            t = Moebius::new(-s, s * p1, c(1.0, 0.0), -p2)?;
        }
        let dil = Moebius::dilation(c(multiplier, 0.0))?;
        let generator = t.inverse().compose(&dil).compose(&t);
        Ok(Self {
            fixpoints: [theta1, theta2],
            multiplier,
            uniformizer: t,
            generator,
        })
    }

    pub fn generator(&self) -> Moebius {
        self.generator
    }

    pub fn uniformizer(&self) -> Moebius {
        self.uniformizer
    }

    pub fn ball(&self, radius: usize) -> Result<GroupBall, AutomorphicError> {
        group_ball(&[self.generator], radius)
    }

    /// `(T'/T)^q`, invariant under the group in weight `q`.
    pub fn automorphic_form(&self, q: u32) -> impl Fn(Complex64) -> Complex64 + Sync {
        let t = self.uniformizer;
        move |z| (t.derivative(z) / t.apply(z)).powi(q as i32)
    }

    /// Rule on the fundamental domain `{1 ≤ |w| < λ, Im w > 0}` in uniformized
    /// coordinates, pulled back to the disc.
    pub fn fundamental_domain(&self, radial: usize, angular: usize) -> Result<QuadGrid, AutomorphicError> {
        let gl = |n: usize, a: f64, b: f64| -> Result<Vec<(f64, f64)>, AutomorphicError> {
            let rule = GaussLegendre::new(n).map_err(|_| QuadError::TooFewNodes)?;
            Ok(rule
                .as_node_weight_pairs()
                .iter()
                .map(|&(x, w)| (0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w))
                .collect())
        };
        let us = gl(radial, 0.0, self.multiplier.ln())?;
        let thetas = gl(angular, 0.0, PI)?;
        let tinv = self.uniformizer.inverse();
        let mut nodes = Vec::with_capacity(radial * angular);
        for &(u, wu) in &us {
            for &(th, wt) in &thetas {
                let w = Complex64::from_polar(u.exp(), th);
                let jac = tinv.derivative(w).norm_sqr() * w.norm_sqr();
                nodes.push((tinv.apply(w), wu * wt * jac));
            }
        }
        Ok(QuadGrid::from_nodes(HyperbolicDomain::Disc, radial, angular, nodes)?)
    }
}

/// JSON group descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Trivial,
    Cyclic { fixpoints: [f64; 2], multiplier: f64 },
    Generators { matrices: Vec<[[f64; 2]; 4]> },
}

impl GroupSpec {
    pub fn generators(&self) -> Result<Vec<Moebius>, AutomorphicError> {
        match self {
            GroupSpec::Trivial => Ok(Vec::new()),
            GroupSpec::Cyclic { fixpoints, multiplier } => {
                Ok(vec![CyclicGroup::new(fixpoints[0], fixpoints[1], *multiplier)?.generator()])
            }
            GroupSpec::Generators { matrices } => Ok(matrices
                .iter()
                .map(|m| Moebius::from_matrix(*m))
                .collect::<Result<_, _>>()?),
        }
    }

    pub fn ball(&self, radius: usize) -> Result<GroupBall, AutomorphicError> {
        group_ball(&self.generators()?, radius)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaValue {
    pub value: Complex64,
    /// Estimate of `sup|f| Σ_{|word| > radius} |g'(z)|^q`.
    pub tail_bound: f64,
    pub terms: usize,
}

/// `Σ_{g ∈ ball} f(gz) g'(z)^q`, with a geometric tail estimate fitted to the
/// last two spheres of the ball.
pub fn poincare_theta<F>(f: &F, q: u32, ball: &GroupBall, z: Complex64, sup_f: f64) -> ThetaValue
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let mut value = c(0.0, 0.0);
    let mut sphere = vec![0.0; ball.radius + 1];
    for e in &ball.elements {
        let d = e.map.derivative(z).powi(q as i32);
        value += f(e.map.apply(z)) * d;
        sphere[e.len()] += d.norm();
    }
    let tail_bound = match ball.radius {
        _ if ball.generators.is_empty() => 0.0,
        0 => f64::INFINITY,
        r => {
            let last = sphere[r];
            let mut rho = last / sphere[r - 1];
            if r >= 2 {
                rho = rho.max(sphere[r - 1] / sphere[r - 2]);
            }
            if rho < 1.0 {
                sup_f * last * rho / (1.0 - rho)
            } else {
                f64::INFINITY
            }
        }
    };
    ThetaValue {
        value,
        tail_bound,
        terms: ball.len(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AutomorphyReport {
    pub z: Complex64,
    pub q: u32,
    pub radius: usize,
    pub theta: Complex64,
    /// `|Θ(g₀z) g₀'(z)^q − Θ(z)|` for the truncated series.
    pub residual: f64,
    /// `tail(z) + |g₀'(z)|^q tail(g₀z)`.
    pub bound: f64,
    pub passed: bool,
}

/// Automorphy defect of the truncated series for a cyclic group.
pub fn automorphy_check<F>(
    f: &F,
    q: u32,
    sup_f: f64,
    group: &CyclicGroup,
    radius: usize,
    z: Complex64,
) -> Result<AutomorphyReport, AutomorphicError>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    if q < 2 {
        return Err(AutomorphicError::BadWeight(q));
    }
    let ball = group.ball(radius)?;
    let g0 = group.generator();
    let at_z = poincare_theta(f, q, &ball, z, sup_f);
    let at_gz = poincare_theta(f, q, &ball, g0.apply(z), sup_f);
    let dq = g0.derivative(z).powi(q as i32);
    let residual = (at_gz.value * dq - at_z.value).norm();
    let bound = at_z.tail_bound + dq.norm() * at_gz.tail_bound;
    Ok(AutomorphyReport {
        z,
        q,
        radius,
        theta: at_z.value,
        residual,
        bound,
        passed: residual <= bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingSpec {
    pub s: u32,
    pub domain: HyperbolicDomain,
    pub group: GroupSpec,
}

impl PairingSpec {
    pub fn new(s: u32, domain: HyperbolicDomain, group: GroupSpec) -> Result<Self, AutomorphicError> {
        if s < 2 {
            return Err(AutomorphicError::BadWeight(s));
        }
        if group != GroupSpec::Trivial && domain != HyperbolicDomain::Disc {
            return Err(AutomorphicError::UnsupportedDomain(domain));
        }
        Ok(Self { s, domain, group })
    }

    pub fn c_s(&self) -> f64 {
        (2.0 * self.s as f64 - 1.0) / (self.s as f64 - 1.0)
    }

    /// Quadrature over the full domain, or over a fundamental domain for a cyclic group.
    pub fn grid(&self, factor: usize) -> Result<QuadGrid, AutomorphicError> {
        let k = factor.max(1);
        match &self.group {
            GroupSpec::Trivial => Ok(QuadGrid::default_for(self.domain, k)?),
            GroupSpec::Cyclic { fixpoints, multiplier } => {
                CyclicGroup::new(fixpoints[0], fixpoints[1], *multiplier)?.fundamental_domain(64 * k, 128 * k)
            }
            GroupSpec::Generators { .. } => Err(AutomorphicError::UnsupportedDomain(self.domain)),
        }
    }
}

/// `⟨f, g⟩_s = ∫ f ḡ λ^{2−2s} d²z` over the grid.
pub fn wp_pairing<F, G>(f: F, g: G, spec: &PairingSpec, grid: &QuadGrid) -> Result<Complex64, AutomorphicError>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    G: Fn(Complex64) -> Complex64 + Sync,
{
    if grid.domain != spec.domain {
        return Err(AutomorphicError::GridMismatch {
            expected: spec.domain,
            found: grid.domain,
        });
    }
    let dom = spec.domain;
    let p = 2 - 2 * spec.s as i32;
    Ok(quad2d(
        |z| f(z) * g(z).conj() * dom.density_unchecked(z).powi(p),
        grid,
    )?)
}

/// Weighted `L¹` norm `∫ |f| λ^{2−q} d²z` over the grid.
pub fn l1_norm<F>(f: F, q: u32, domain: HyperbolicDomain, grid: &QuadGrid) -> Result<f64, AutomorphicError>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let p = 2 - q as i32;
    Ok(quad2d(|z| c(f(z).norm() * domain.density_unchecked(z).powi(p), 0.0), grid)?.re)
}

/// Reproducing kernel of the unweighted Bergman space of the domain.
pub fn bergman_k(domain: HyperbolicDomain, z: Complex64, w: Complex64) -> Complex64 {
    let wb = w.conj();
    match domain {
        HyperbolicDomain::Disc => (c(1.0, 0.0) - z * wb).powi(-2) / PI,
        HyperbolicDomain::ExteriorDisc => (z * wb - 1.0).powi(-2) / PI,
        HyperbolicDomain::UpperHalf | HyperbolicDomain::LowerHalf => -(z - wb).powi(-2) / PI,
    }
}

/// `K_s = (2s − 1) π^{s−1} k^s`.
pub fn bergman_kernel(domain: HyperbolicDomain, s: u32, z: Complex64, w: Complex64) -> Complex64 {
    bergman_k(domain, z, w).powi(s as i32) * ((2.0 * s as f64 - 1.0) * PI.powi(s as i32 - 1))
}

/// `(β f)(z) = ∫ λ^{2−2s}(w) K_s(z, w) f(w) d²w`.
pub fn bergman_project<F>(f: F, s: u32, z: Complex64, grid: &QuadGrid) -> Result<Complex64, AutomorphicError>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if s < 2 {
        return Err(AutomorphicError::BadWeight(s));
    }
    let dom = grid.domain;
    let p = 2 - 2 * s as i32;
    Ok(quad2d(
        |w| dom.density_unchecked(w).powi(p) * bergman_kernel(dom, s, z, w) * f(w),
        grid,
    )?)
}

/// Metzger element `p(z; k, g) = z^k − g(z)^k g'(z)^q`.
#[derive(Debug, Clone, Copy)]
pub struct MetzgerElement {
    pub k: u32,
    pub g: Moebius,
    pub q: u32,
}

pub fn metzger_element(k: u32, g: Moebius, q: u32) -> MetzgerElement {
    MetzgerElement { k, g, q }
}

impl MetzgerElement {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        z.powu(self.k) - self.g.apply(z).powu(self.k) * self.g.derivative(z).powu(self.q)
    }

    pub fn sup_bound(&self) -> f64 {
        // |z^k| ≤ 1 and |g'|^q ≤ ((1 + |g(0)|)/(1 − |g(0)|))^q on the disc
        let a = self.g.apply(c(0.0, 0.0)).norm();
        1.0 + ((1.0 + a) / (1.0 - a)).powi(self.q as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group() -> CyclicGroup {
        CyclicGroup::new(0.3, 2.5, 3.0).unwrap()
    }

    #[test]
    fn ball_sizes() {
        let trivial = group_ball(&[], 5).unwrap();
        assert_eq!(trivial.len(), 1);
        let g = group().generator();
        assert!(g.preserves_disc(1e-12));
        assert_eq!(group_ball(&[g], 3).unwrap().len(), 7);
        let h = CyclicGroup::new(-1.2, 1.9, 5.0).unwrap().generator();
        let sizes: Vec<usize> = (0..4).map(|r| group_ball(&[g, h], r).unwrap().len()).collect();
        assert!(sizes.windows(2).all(|w| w[1] > w[0]), "{sizes:?}");
        assert_eq!(sizes[1], 5);
        let bad = Moebius::dilation(c(2.0, 0.0)).unwrap();
        assert_eq!(group_ball(&[bad], 1).unwrap_err(), AutomorphicError::NotDiscPreserving(0));
    }

    #[test]
    fn ball_closed_under_inverse() {
        let g = group().generator();
        let ball = group_ball(&[g], 4).unwrap();
        for e in &ball.elements {
            let inv = e.map.inverse();
            assert!(ball.elements.iter().any(|o| o.map.approx_eq(&inv, 1e-9)));
        }
    }

    #[test]
    fn cyclic_group_geometry() {
        let grp = group();
        let t = grp.uniformizer();
        for k in 0..8 {
            let z = Complex64::from_polar(1.0, 0.7 * k as f64);
            assert!(t.apply(z).im.abs() < 1e-12 * (1.0 + t.apply(z).norm()));
        }
        assert!(t.apply(c(0.0, 0.0)).im > 0.0);
        let p2 = Complex64::from_polar(1.0, 2.5);
        let g = grp.generator();
        assert!((g.apply(p2) - p2).norm() < 1e-12);
        assert!((g.derivative(p2).norm() - 1.0 / 3.0).abs() < 1e-12);
        let f = grp.automorphic_form(3);
        let z = c(0.2, -0.3);
        let lhs = f(g.apply(z)) * g.derivative(z).powi(3);
        assert!((lhs - f(z)).norm() < 1e-12 * f(z).norm());
        let json = serde_json::json!({"kind": "cyclic", "fixpoints": [0.3, 2.5], "multiplier": 3.0});
        let spec: GroupSpec = serde_json::from_value(json).unwrap();
        assert!(spec.generators().unwrap()[0].approx_eq(&g, 1e-14));
    }

    #[test]
    fn theta_trivial_and_automorphic() {
        let f = |z: Complex64| c(1.0, 0.0) + z * 0.5;
        let z = c(0.1, 0.2);
        let trivial = poincare_theta(&f, 2, &group_ball(&[], 3).unwrap(), z, 1.5);
        assert_eq!(trivial.value, f(z));
        assert_eq!(trivial.tail_bound, 0.0);
        let grp = group();
        for q in [2, 3] {
            let r = automorphy_check(&f, q, 1.5, &grp, 8, z).unwrap();
            assert!(r.passed && r.residual > 0.0, "{r:?}");
        }
    }

    #[test]
    fn theta_reindexing_telescopes() {
        let grp = group();
        let g = grp.generator();
        let q = 2;
        let f = |z: Complex64| z * z - 0.3;
        let shifted = |z: Complex64| f(g.apply(z)) * g.derivative(z).powi(q as i32);
        let r = 5;
        let ball = grp.ball(r).unwrap();
        let z = c(-0.4, 0.1);
        let term = |k: i64| {
            let h = g.pow(k);
            f(h.apply(z)) * h.derivative(z).powi(q as i32)
        };
        let lhs = poincare_theta(&shifted, q, &ball, z, 2.0).value;
        let rhs = poincare_theta(&f, q, &ball, z, 2.0).value + term(r as i64 + 1) - term(-(r as i64));
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn pairing_basics() {
        let spec = PairingSpec::new(2, HyperbolicDomain::Disc, GroupSpec::Trivial).unwrap();
        assert_eq!(spec.c_s(), 3.0);
        let grid = spec.grid(1).unwrap();
        let one = wp_pairing(|_| c(1.0, 0.0), |_| c(1.0, 0.0), &spec, &grid).unwrap();
        assert!((one - c(PI / 3.0, 0.0)).norm() < 1e-10);
        let ortho = wp_pairing(|z| z * z, |z| z.powu(3), &spec, &grid).unwrap();
        assert!(ortho.norm() < 1e-12);
        let f = |z: Complex64| z.exp();
        let g = |z: Complex64| c(1.0, 2.0) + z.conj() * z;
        let fg = wp_pairing(f, g, &spec, &grid).unwrap();
        let gf = wp_pairing(g, f, &spec, &grid).unwrap();
        assert!((fg - gf.conj()).norm() < 1e-12);
        let a = c(0.3, -2.0);
        let lin = wp_pairing(|z| f(z) * a, g, &spec, &grid).unwrap();
        assert!((lin - fg * a).norm() < 1e-12 * lin.norm());
        let anti = wp_pairing(f, |z| g(z) * a, &spec, &grid).unwrap();
        assert!((anti - fg * a.conj()).norm() < 1e-12 * anti.norm());
        assert!(PairingSpec::new(1, HyperbolicDomain::Disc, GroupSpec::Trivial).is_err());
    }

    #[test]
    fn unfolding_lemma_for_cyclic_group() {
        let grp = group();
        let q = 2;
        let spec = PairingSpec::new(
            q,
            HyperbolicDomain::Disc,
            GroupSpec::Cyclic {
                fixpoints: grp.fixpoints,
                multiplier: grp.multiplier,
            },
        )
        .unwrap();
        let f = grp.automorphic_form(q);
        let h = |z: Complex64| c(1.0, 0.0) + z * c(0.5, 0.25);
        let ball = grp.ball(24).unwrap();
        let theta_h = |z: Complex64| poincare_theta(&h, q, &ball, z, 1.6).value;
        let lhs = wp_pairing(&f, theta_h, &spec, &spec.grid(1).unwrap()).unwrap();
        let full = PairingSpec::new(q, HyperbolicDomain::Disc, GroupSpec::Trivial).unwrap();
        let rhs = wp_pairing(&f, h, &full, &full.grid(1).unwrap()).unwrap();
        let relerr = (lhs - rhs).norm() / rhs.norm();
        assert!(relerr < 1e-2, "{lhs} {rhs} {relerr}");
    }

    #[test]
    fn theta_contracts_l1_norm() {
        let grp = group();
        let q = 2;
        let h = |z: Complex64| c(1.0, 0.0) + z * c(0.5, 0.25);
        let ball = grp.ball(24).unwrap();
        let theta_h = |z: Complex64| poincare_theta(&h, q, &ball, z, 1.6).value;
        let fd = grp.fundamental_domain(64, 128).unwrap();
        let lhs = l1_norm(theta_h, q, HyperbolicDomain::Disc, &fd).unwrap();
        let disc = QuadGrid::default_for(HyperbolicDomain::Disc, 1).unwrap();
        let rhs = l1_norm(h, q, HyperbolicDomain::Disc, &disc).unwrap();
        assert!(lhs <= rhs && lhs > 0.0, "{lhs} {rhs}");
    }

    #[test]
    fn bergman_projection_reproduces_holomorphic() {
        let grid = QuadGrid::default_for(HyperbolicDomain::Disc, 1).unwrap();
        let v = bergman_project(|_| c(1.0, 0.0), 2, c(0.0, 0.0), &grid).unwrap();
        assert!((v - 1.0).norm() < 1e-10);
        let z = c(0.35, -0.2);
        for k in 0..=4 {
            let p = bergman_project(|w: Complex64| w.powu(k), 2, z, &grid).unwrap();
            assert!((p - z.powu(k)).norm() < 1e-3, "{k} {p}");
        }
        // antiholomorphic monomials are orthogonal to the holomorphic ones
        let p = bergman_project(|w: Complex64| w.conj(), 2, z, &grid).unwrap();
        assert!(p.norm() < 1e-10);
    }

    #[test]
    fn bergman_projection_is_symmetric() {
        let spec = PairingSpec::new(2, HyperbolicDomain::Disc, GroupSpec::Trivial).unwrap();
        let grid = QuadGrid::disc(32, 64).unwrap();
        let f = |z: Complex64| z.conj() + z * z;
        let g = |z: Complex64| z * z * z.norm_sqr() + z;
        let pf = |z: Complex64| bergman_project(f, 2, z, &grid).unwrap();
        let pg = |z: Complex64| bergman_project(g, 2, z, &grid).unwrap();
        let lhs = wp_pairing(pf, g, &spec, &grid).unwrap();
        let rhs = wp_pairing(f, pg, &spec, &grid).unwrap();
        assert!(lhs.norm() > 1e-2);
        assert!((lhs - rhs).norm() < 1e-2 * lhs.norm().max(rhs.norm()), "{lhs} {rhs}");
    }

    #[test]
    fn bergman_kernel_pulls_back_under_cayley() {
        let psi = Moebius::cayley();
        for (z, w) in [(c(0.1, 0.2), c(-0.5, 0.3)), (c(0.7, 0.0), c(0.0, -0.6))] {
            let lhs = bergman_k(HyperbolicDomain::UpperHalf, psi.apply(z), psi.apply(w))
                * psi.derivative(z)
                * psi.derivative(w).conj();
            let rhs = bergman_k(HyperbolicDomain::Disc, z, w);
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        }
        let inv = Moebius::inversion();
        let (z, w) = (c(0.1, 0.4), c(0.2, -0.2));
        let lhs = bergman_k(HyperbolicDomain::ExteriorDisc, inv.apply(z), inv.apply(w))
            * inv.derivative(z)
            * inv.derivative(w).conj();
        assert!((lhs - bergman_k(HyperbolicDomain::Disc, z, w)).norm() < 1e-12);
    }

    #[test]
    fn metzger_elements() {
        let z = c(0.3, 0.1);
        let trivial = metzger_element(3, Moebius::identity(), 2);
        assert_eq!(trivial.eval(z), c(0.0, 0.0));
        let grp = group();
        let g = grp.generator();
        let p0 = metzger_element(0, g, 2);
        assert!((p0.eval(z) - (c(1.0, 0.0) - g.derivative(z).powi(2))).norm() < 1e-15);
        let p = metzger_element(2, g, 2);
        let sizes: Vec<f64> = [4, 8, 16]
            .iter()
            .map(|&r| {
                let ball = grp.ball(r).unwrap();
                poincare_theta(&|w| p.eval(w), 2, &ball, z, p.sup_bound()).value.norm()
            })
            .collect();
        assert!(sizes[0] > sizes[1] && sizes[1] > sizes[2], "{sizes:?}");
    }
}
