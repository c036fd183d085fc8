//! Möbius maps, the four model hyperbolic domains, and named analytic functions.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jet::{Jet, JetError};

const DET_TOL: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("degenerate Möbius matrix (determinant {0})")]
    Degenerate(f64),
    #[error("point {0} is a pole")]
    Pole(Complex64),
    #[error("point {z} is not inside the {domain}")]
    OutsideDomain { z: Complex64, domain: HyperbolicDomain },
    #[error("unknown catalog entry '{0}'")]
    UnknownName(String),
    #[error("empty composition")]
    EmptyComposition,
    #[error("three interpolation points must be distinct")]
    CoincidentPoints,
    #[error(transparent)]
    Jet(#[from] JetError),
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `z ↦ (az + b)/(cz + d)` with `ad − bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moebius {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl Moebius {
    /// Normalizes by a square root of the determinant.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, MapError> {
        let det = a * d - b * c;
        if !(det.norm() > DET_TOL) || !det.is_finite() {
            return Err(MapError::Degenerate(det.norm()));
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        Self {
            a: c(1.0, 0.0),
            b: c(0.0, 0.0),
            c: c(0.0, 0.0),
            d: c(1.0, 0.0),
        }
    }

    pub fn rotation(theta: f64) -> Self {
        let h = Complex64::from_polar(1.0, theta / 2.0);
        Self {
            a: h,
            b: c(0.0, 0.0),
            c: c(0.0, 0.0),
            d: h.conj(),
        }
    }

    pub fn dilation(k: Complex64) -> Result<Self, MapError> {
        Self::new(k, c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
    }

    pub fn translation(t: Complex64) -> Self {
        Self {
            a: c(1.0, 0.0),
            b: t,
            c: c(0.0, 0.0),
            d: c(1.0, 0.0),
        }
    }

    /// `z ↦ e^{iθ}(z − p)/(1 − p̄z)` for `|p| < 1`.
    pub fn disc_automorphism(theta: f64, p: Complex64) -> Result<Self, MapError> {
        let e = Complex64::from_polar(1.0, theta);
        Self::new(e, -e * p, -p.conj(), c(1.0, 0.0))
    }

    /// `z ↦ 1/z`.
    pub fn inversion() -> Self {
        Self {
            a: c(0.0, 0.0),
            b: c(0.0, 1.0),
            c: c(0.0, 1.0),
            d: c(0.0, 0.0),
        }
    }

    /// `z ↦ i(1 + z)/(1 − z)`, the disc onto the upper half-plane.
    pub fn cayley() -> Self {
        Self::new(c(0.0, 1.0), c(0.0, 1.0), c(-1.0, 0.0), c(1.0, 0.0)).expect("det 2i")
    }

    /// The unique map sending `src[k]` to `dst[k]`.
    pub fn from_three_points(src: [Complex64; 3], dst: [Complex64; 3]) -> Result<Self, MapError> {
        let s = Self::to_zero_one_infinity(src)?;
        let t = Self::to_zero_one_infinity(dst)?;
        Ok(t.inverse().compose(&s))
    }

    fn to_zero_one_infinity(p: [Complex64; 3]) -> Result<Self, MapError> {
        let [z1, z2, z3] = p;
        if (z1 - z2).norm() == 0.0 || (z2 - z3).norm() == 0.0 || (z1 - z3).norm() == 0.0 {
            return Err(MapError::CoincidentPoints);
        }
        // (z − z1)(z2 − z3) / ((z − z3)(z2 − z1))
        Self::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))
    }

    pub fn from_matrix(m: [[f64; 2]; 4]) -> Result<Self, MapError> {
        let z = |k: usize| c(m[k][0], m[k][1]);
        Self::new(z(0), z(1), z(2), z(3))
    }

    pub fn to_matrix(&self) -> [[f64; 2]; 4] {
        [self.a, self.b, self.c, self.d].map(|z| [z.re, z.im])
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn pole(&self) -> Option<Complex64> {
        (self.c.norm() > 0.0).then(|| -self.d / self.c)
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        (den * den).inv()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Moebius) -> Moebius {
        Moebius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> Moebius {
        Moebius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn pow(&self, k: i64) -> Moebius {
        let base = if k < 0 { self.inverse() } else { *self };
        (0..k.unsigned_abs()).fold(Moebius::identity(), |acc, _| acc.compose(&base))
    }

    /// Same map up to the sign ambiguity of PSL(2,ℂ).
    pub fn approx_eq(&self, other: &Moebius, tol: f64) -> bool {
        let diff = |s: f64| {
            [
                self.a - other.a * s,
                self.b - other.b * s,
                self.c - other.c * s,
                self.d - other.d * s,
            ]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
        };
        diff(1.0) < tol || diff(-1.0) < tol
    }

    /// True if the map sends the unit disc onto itself.
    pub fn preserves_disc(&self, tol: f64) -> bool {
        // SU(1,1) up to sign: d = ā, c = b̄.
        let plus = (self.d - self.a.conj()).norm().max((self.c - self.b.conj()).norm());
        let minus = (self.d + self.a.conj()).norm().max((self.c + self.b.conj()).norm());
        plus.min(minus) < tol
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Taylor jet at `z0`: `c_k = (−c)^{k−1}/(cz0 + d)^{k+1}` for `k ≥ 1`.
    pub fn jet(&self, z0: Complex64, order: usize) -> Result<Jet, MapError> {
        let den = self.c * z0 + self.d;
        if den.norm() == 0.0 {
            return Err(MapError::Pole(z0));
        }
        let inv = den.inv();
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push((self.a * z0 + self.b) * inv);
        let mut t = inv * inv;
        for _ in 1..=order {
            coeffs.push(t);
            t *= -self.c * inv;
        }
        Ok(Jet::new(z0, coeffs)?)
    }
}

impl Serialize for Moebius {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_matrix().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Moebius {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = <[[f64; 2]; 4]>::deserialize(d)?;
        Moebius::from_matrix(m).map_err(serde::de::Error::custom)
    }
}

/// The four model domains, each with Poincaré density of curvature −4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperbolicDomain {
    Disc,
    ExteriorDisc,
    UpperHalf,
    LowerHalf,
}

impl fmt::Display for HyperbolicDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HyperbolicDomain::Disc => "unit disc",
            HyperbolicDomain::ExteriorDisc => "exterior disc",
            HyperbolicDomain::UpperHalf => "upper half-plane",
            HyperbolicDomain::LowerHalf => "lower half-plane",
        })
    }
}

impl HyperbolicDomain {
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            HyperbolicDomain::Disc => z.norm_sqr() < 1.0,
            HyperbolicDomain::ExteriorDisc => z.norm_sqr() > 1.0,
            HyperbolicDomain::UpperHalf => z.im > 0.0,
            HyperbolicDomain::LowerHalf => z.im < 0.0,
        }
    }

    /// `λ_D(z)`, e.g. `1/(1 − |z|²)` on the disc.
    pub fn density(&self, z: Complex64) -> Result<f64, MapError> {
        if !self.contains(z) {
            return Err(MapError::OutsideDomain { z, domain: *self });
        }
        Ok(self.density_unchecked(z))
    }

    /// As [`density`](Self::density) without the membership test.
    pub fn density_unchecked(&self, z: Complex64) -> f64 {
        match self {
            HyperbolicDomain::Disc => 1.0 / (1.0 - z.norm_sqr()),
            HyperbolicDomain::ExteriorDisc => 1.0 / (z.norm_sqr() - 1.0),
            HyperbolicDomain::UpperHalf => 0.5 / z.im,
            HyperbolicDomain::LowerHalf => -0.5 / z.im,
        }
    }

    /// Reflection across the boundary; boundary points are fixed.
    pub fn reflect(&self, z: Complex64) -> Complex64 {
        match self {
            HyperbolicDomain::Disc | HyperbolicDomain::ExteriorDisc => {
                let r2 = z.norm_sqr();
                if r2 == 0.0 {
                    c(f64::INFINITY, 0.0)
                } else {
                    z / r2
                }
            }
            HyperbolicDomain::UpperHalf | HyperbolicDomain::LowerHalf => z.conj(),
        }
    }

    /// The complementary domain `Ĉ ∖ D̄`.
    pub fn complement(&self) -> HyperbolicDomain {
        match self {
            HyperbolicDomain::Disc => HyperbolicDomain::ExteriorDisc,
            HyperbolicDomain::ExteriorDisc => HyperbolicDomain::Disc,
            HyperbolicDomain::UpperHalf => HyperbolicDomain::LowerHalf,
            HyperbolicDomain::LowerHalf => HyperbolicDomain::UpperHalf,
        }
    }

    /// A Möbius map carrying the unit disc onto this domain.
    pub fn from_disc(&self) -> Moebius {
        match self {
            HyperbolicDomain::Disc => Moebius::identity(),
            HyperbolicDomain::ExteriorDisc => Moebius::inversion(),
            HyperbolicDomain::UpperHalf => Moebius::cayley(),
            HyperbolicDomain::LowerHalf => Moebius::rotation(PI).compose(&Moebius::cayley()),
        }
    }
}

/// Serializable description of a holomorphic function.
///
/// `compose: [f, g]` means `f ∘ g`. A `taylor` entry is a polynomial in
/// `z − center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticFn {
    Koebe,
    Identity,
    Cayley,
    Rotation { theta: f64 },
    Moebius { mat: [[f64; 2]; 4] },
    Taylor { center: [f64; 2], coeffs: Vec<[f64; 2]> },
    Compose { fns: Vec<AnalyticFn> },
}

impl AnalyticFn {
    pub fn moebius(g: &Moebius) -> Self {
        AnalyticFn::Moebius { mat: g.to_matrix() }
    }

    pub fn polynomial(coeffs: &[Complex64]) -> Self {
        AnalyticFn::Taylor {
            center: [0.0, 0.0],
            coeffs: coeffs.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    /// Taylor jet at `z0`.
    pub fn jet(&self, z0: Complex64, order: usize) -> Result<Jet, MapError> {
        match self {
            AnalyticFn::Koebe => {
                if (z0 - c(1.0, 0.0)).norm() == 0.0 {
                    return Err(MapError::Pole(z0));
                }
                // k^(m)/m! = (m + z)/(1 − z)^{m+2}; no cancellation near z = −1.
                let inv = (c(1.0, 0.0) - z0).inv();
                let mut p = inv * inv;
                let mut coeffs = Vec::with_capacity(order + 1);
                for m in 0..=order {
                    coeffs.push((z0 + m as f64) * p);
                    p *= inv;
                }
                Ok(Jet::new(z0, coeffs)?)
            }
            AnalyticFn::Identity => Ok(Jet::identity(z0, order)),
            AnalyticFn::Cayley => Moebius::cayley().jet(z0, order),
            AnalyticFn::Rotation { theta } => Moebius::rotation(*theta).jet(z0, order),
            AnalyticFn::Moebius { mat } => Moebius::from_matrix(*mat)?.jet(z0, order),
            AnalyticFn::Taylor { center, coeffs } => {
                let c0 = c(center[0], center[1]);
                let mut cs: Vec<Complex64> = coeffs.iter().map(|p| c(p[0], p[1])).collect();
                if cs.is_empty() {
                    cs.push(c(0.0, 0.0));
                }
                let shifted = Jet::new(c0, cs)?.shift(z0 - c0);
                let mut out: Vec<Complex64> = shifted.coeffs().to_vec();
                out.resize(order + 1, c(0.0, 0.0));
                Ok(Jet::new(z0, out)?)
            }
            AnalyticFn::Compose { fns } => {
                let (last, rest) = fns.split_last().ok_or(MapError::EmptyComposition)?;
                let mut acc = last.jet(z0, order)?;
                for f in rest.iter().rev() {
                    let outer = f.jet(acc.value(), order)?;
                    acc = Jet::compose(&outer, &acc)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, MapError> {
        match self {
            AnalyticFn::Koebe => {
                let w = c(1.0, 0.0) - z;
                if w.norm() == 0.0 {
                    return Err(MapError::Pole(z));
                }
                Ok(z / (w * w))
            }
            AnalyticFn::Identity => Ok(z),
            AnalyticFn::Compose { fns } => fns
                .iter()
                .rev()
                .try_fold(z, |acc, f| f.eval(acc)),
            _ => Ok(self.jet(z, 0)?.value()),
        }
    }
}

/// Look up a named entry: `koebe`, `identity`, `cayley`, `rotation:<θ>`.
pub fn catalog(name: &str) -> Result<AnalyticFn, MapError> {
    let name = name.trim();
    if let Some(theta) = name.strip_prefix("rotation:") {
        let theta: f64 = theta
            .trim()
            .parse()
            .map_err(|_| MapError::UnknownName(name.to_string()))?;
        return Ok(AnalyticFn::Rotation { theta });
    }
    match name {
        "koebe" => Ok(AnalyticFn::Koebe),
        "identity" => Ok(AnalyticFn::Identity),
        "cayley" => Ok(AnalyticFn::Cayley),
        _ => Err(MapError::UnknownName(name.to_string())),
    }
}

/// Functions univalent on the unit disc, with display names.
pub fn schlicht_catalog() -> Vec<(String, AnalyticFn)> {
    // −i·k(i·z): a quarter-turn with exactly representable coefficients, so the
    // descriptor stays univalent on the closed disc after rounding.
    let rotated_koebe = AnalyticFn::Compose {
        fns: vec![
            AnalyticFn::polynomial(&[c(0.0, 0.0), c(0.0, -1.0)]),
            AnalyticFn::Koebe,
            AnalyticFn::polynomial(&[c(0.0, 0.0), c(0.0, 1.0)]),
        ],
    };
    let aut = Moebius::disc_automorphism(0.3, c(0.4, -0.2)).expect("|p| < 1");
    vec![
        ("identity".into(), AnalyticFn::Identity),
        ("koebe".into(), AnalyticFn::Koebe),
        ("koebe_rotated".into(), rotated_koebe),
        ("cayley".into(), AnalyticFn::Cayley),
        ("disc_automorphism".into(), AnalyticFn::moebius(&aut)),
        (
            "quadratic".into(),
            AnalyticFn::polynomial(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)]),
        ),
        (
            "cubic".into(),
            AnalyticFn::polynomial(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(-1.0 / 3.0, 0.0)]),
        ),
        (
            "koebe_of_half_disc".into(),
            AnalyticFn::Compose {
                fns: vec![AnalyticFn::Koebe, AnalyticFn::polynomial(&[c(0.0, 0.0), c(0.5, 0.0)])],
            },
        ),
    ]
}
