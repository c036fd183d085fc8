//! Exact differential polynomials in the jet variables `u_k = f^(k)`.
//!
//! A [`DiffExpr`] is a finite sum of rational multiples of monomials
//! `u₁^{e₁} u₂^{e₂} ⋯ u_N^{e_N}` where `e₁` may be a half-integer (only powers
//! of `f'` can carry square roots) and `e₂, …, e_N` are non-negative integers.
//! The formal z-derivative acts by `u_k ↦ u_{k+1}` together with the Leibniz
//! rule, which is all that is needed to build both families of higher
//! Schwarzians exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::jet::{Jet, JetError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolicError {
    #[error("jet of order {have} cannot feed an expression involving u{need}")]
    InsufficientOrder { need: usize, have: usize },
    #[error("f' vanishes at the evaluation point")]
    VanishingDerivative,
    #[error("expression has a half-integer power of u1 after canonicalization")]
    NonIntegralExponent,
    #[error("higher Schwarzians are defined for n >= 3, got {0}")]
    OrderTooSmall(usize),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Which family of higher Schwarzians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Series {
    A,
    B,
}

impl Series {
    /// Coefficient of `u_n / u₁` in `σ_n` of this family.
    pub fn linear_coefficient(self, n: usize) -> i64 {
        match self {
            Series::A => 1,
            Series::B => n as i64 - 2,
        }
    }

    pub fn sigma(self, n: usize) -> Result<DiffExpr, SymbolicError> {
        match self {
            Series::A => sigma_a(n),
            Series::B => sigma_b(n),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::A => "A",
            Series::B => "B",
        })
    }
}

impl std::str::FromStr for Series {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Series::A),
            "B" | "b" => Ok(Series::B),
            other => Err(format!("unknown series '{other}' (expected A or B)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classical {
    Schwarzian,
    PreSchwarzian,
}

/// `u₁^{twice_u1/2} · Π_{k≥2} u_k^{higher[k-2]}`, trailing zero exponents trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    twice_u1: i32,
    higher: Vec<u32>,
}

impl Monomial {
    pub fn new(twice_u1: i32, factors: &[(usize, u32)]) -> Self {
        let mut higher = Vec::new();
        let mut twice_u1 = twice_u1;
        for &(k, e) in factors {
            assert!(k >= 1, "jet variables start at u1");
            if k == 1 {
                twice_u1 += 2 * e as i32;
                continue;
            }
            if higher.len() < k - 1 {
                higher.resize(k - 1, 0);
            }
            higher[k - 2] += e;
        }
        let mut m = Self { twice_u1, higher };
        m.trim();
        m
    }

    fn one() -> Self {
        Self {
            twice_u1: 0,
            higher: Vec::new(),
        }
    }

    fn trim(&mut self) {
        while self.higher.last() == Some(&0) {
            self.higher.pop();
        }
    }

    /// Exponent of `u₁` as a numerator/2 pair.
    pub fn twice_u1_exponent(&self) -> i32 {
        self.twice_u1
    }

    /// Exponent of `u_k`, `k ≥ 2`.
    pub fn exponent(&self, k: usize) -> u32 {
        assert!(k >= 2);
        self.higher.get(k - 2).copied().unwrap_or(0)
    }

    /// `Σ_{k≥2} e_k`: the degree in the higher derivatives.
    pub fn degree(&self) -> u32 {
        self.higher.iter().sum()
    }

    /// `Σ_{k≥2} (k−1) e_k`.
    pub fn weight(&self) -> u32 {
        self.higher
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as u32 + 1) * e)
            .sum()
    }

    /// Highest `k` with `e_k ≠ 0` (1 if only `u₁` appears, 0 for constants).
    pub fn max_index(&self) -> usize {
        if !self.higher.is_empty() {
            self.higher.len() + 1
        } else if self.twice_u1 != 0 {
            1
        } else {
            0
        }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.higher.len().max(other.higher.len());
        let higher = (0..n)
            .map(|i| self.higher.get(i).unwrap_or(&0) + other.higher.get(i).unwrap_or(&0))
            .collect();
        let mut m = Monomial {
            twice_u1: self.twice_u1 + other.twice_u1,
            higher,
        };
        m.trim();
        m
    }

    /// Formal derivative as a list of (multiplier, monomial).
    fn derive(&self) -> Vec<(BigRational, Monomial)> {
        let mut out = Vec::new();
        if self.twice_u1 != 0 {
            let mut m = self.clone();
            m.twice_u1 -= 2;
            if m.higher.is_empty() {
                m.higher.push(0);
            }
            m.higher[0] += 1;
            out.push((BigRational::new(BigInt::from(self.twice_u1), BigInt::from(2)), m));
        }
        for (i, &e) in self.higher.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut m = self.clone();
            m.higher[i] -= 1;
            if m.higher.len() <= i + 1 {
                m.higher.resize(i + 2, 0);
            }
            m.higher[i + 1] += 1;
            m.trim();
            out.push((BigRational::from_integer(BigInt::from(e)), m));
        }
        out
    }

    /// Display ordering: ascending degree, then larger indices first.
    fn display_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                let n = self.higher.len().max(other.higher.len());
                for i in (0..n).rev() {
                    let a = self.higher.get(i).unwrap_or(&0);
                    let b = other.higher.get(i).unwrap_or(&0);
                    match b.cmp(a) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
            .then_with(|| other.twice_u1.cmp(&self.twice_u1))
    }
}

fn exponent_str(twice: i32) -> String {
    if twice % 2 == 0 {
        let e = twice / 2;
        if e == 1 {
            String::new()
        } else {
            format!("^{e}")
        }
    } else {
        format!("^({twice}/2)")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num: Vec<String> = Vec::new();
        for (i, &e) in self.higher.iter().enumerate().rev() {
            if e == 0 {
                continue;
            }
            let k = i + 2;
            num.push(if e == 1 { format!("u{k}") } else { format!("u{k}^{e}") });
        }
        if self.twice_u1 > 0 {
            num.push(format!("u1{}", exponent_str(self.twice_u1)));
        }
        let numer = if num.is_empty() { "1".to_string() } else { num.join("*") };
        if self.twice_u1 < 0 {
            write!(f, "{numer}/u1{}", exponent_str(-self.twice_u1))
        } else {
            f.write_str(&numer)
        }
    }
}

/// Exact Laurent differential polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffExpr {
    terms: BTreeMap<Monomial, BigRational>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl DiffExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// `(n/d) · u₁^{twice_u1/2} · Π u_k^{e}`, convenient for writing expected values.
    pub fn monomial(n: i64, d: i64, twice_u1: i32, factors: &[(usize, u32)]) -> Self {
        Self::term(rat(n, d), Monomial::new(twice_u1, factors))
    }

    /// The jet variable `u_k = f^(k)`.
    pub fn var(k: usize) -> Self {
        Self::monomial(1, 1, 0, &[(k, 1)])
    }

    /// `u₁^{twice/2}`.
    pub fn u1_pow(twice: i32) -> Self {
        Self::monomial(1, 1, twice, &[])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn accumulate(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &DiffExpr) -> DiffExpr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffExpr) -> DiffExpr {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> DiffExpr {
        if s.is_zero() {
            return DiffExpr::zero();
        }
        DiffExpr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &DiffExpr) -> DiffExpr {
        let mut out = DiffExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.accumulate(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Formal z-derivative: `u_k ↦ u_{k+1}` with the Leibniz rule.
    pub fn derive(&self) -> DiffExpr {
        let mut out = DiffExpr::zero();
        for (m, c) in &self.terms {
            for (mult, dm) in m.derive() {
                out.accumulate(dm, c * mult);
            }
        }
        out
    }

    pub fn derive_n(&self, k: usize) -> DiffExpr {
        (0..k).fold(self.clone(), |e, _| e.derive())
    }

    /// Terms whose numerator is linear in `u₂, …, u_N`.
    pub fn monomial_part(&self) -> DiffExpr {
        DiffExpr {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == 1)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `(k, a_k)` pairs of the linear part, one per derivative order `k`.
    ///
    /// Powers of `u₁` are dropped since `f' ≡ 1` at the base point.
    pub fn linear_coefficients(&self) -> Vec<(usize, f64)> {
        let mut by_k: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (m, c) in self.monomial_part().terms {
            let k = m.max_index();
            *by_k.entry(k).or_insert_with(BigRational::zero) += c;
        }
        by_k
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, rational_to_f64(&c)))
            .collect()
    }

    /// True when every power of `u₁` is an integer.
    pub fn is_canonical(&self) -> bool {
        self.terms.keys().all(|m| m.twice_u1 % 2 == 0)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().map(Monomial::max_index).max().unwrap_or(0)
    }

    /// Weights `Σ_{k≥2}(k−1)e_k` that occur, deduplicated and sorted.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(Monomial::weight).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// Numeric value of `self[f]` at `f.center() + offset`.
    pub fn evaluate(&self, f: &Jet, offset: Complex64) -> Result<Complex64, SymbolicError> {
        self.compile().evaluate(f, offset)
    }

    /// The jet of `self[f]` at `f.center()`, of order `f.order() − max_index`.
    pub fn evaluate_jet(&self, f: &Jet) -> Result<Jet, SymbolicError> {
        let need = self.max_index().max(1);
        if f.order() < need {
            return Err(SymbolicError::InsufficientOrder {
                need,
                have: f.order(),
            });
        }
        let order = f.order() - need;
        let derivs: Vec<Jet> = (1..=need)
            .map(|k| f.derive(k).map(|j| j.truncate(order)))
            .collect::<Result<_, _>>()?;
        let u1 = &derivs[0];
        if u1.value().norm() == 0.0 {
            return Err(SymbolicError::VanishingDerivative);
        }
        let mut u1_cache: BTreeMap<i32, Jet> = BTreeMap::new();
        let zero = Complex64::new(0.0, 0.0);
        let mut acc = Jet::constant(f.center(), zero, order);
        for (m, c) in &self.terms {
            let mut term = match u1_cache.get(&m.twice_u1) {
                Some(j) => j.clone(),
                None => {
                    let j = if m.twice_u1 % 2 == 0 {
                        u1.powi((m.twice_u1 / 2) as i64)?
                    } else {
                        u1.powf(Complex64::new(m.twice_u1 as f64 / 2.0, 0.0))?
                    };
                    u1_cache.insert(m.twice_u1, j.clone());
                    j
                }
            };
            for (i, &e) in m.higher.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&derivs[i + 1])?;
                }
            }
            acc = acc.add(&term.scale(Complex64::new(rational_to_f64(c), 0.0)))?;
        }
        Ok(acc)
    }

    /// Floating-point form for repeated evaluation.
    pub fn compile(&self) -> CompiledExpr {
        CompiledExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (rational_to_f64(c), m.twice_u1, m.higher.clone()))
                .collect(),
            max_index: self.max_index(),
        }
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}

fn format_coefficient(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for DiffExpr {
    /// Canonical rendering, e.g. `u4/u1 - 6*u3*u2/u1^2 + 6*u2^3/u1^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ordered: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| a.0.display_cmp(b.0));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let body = m.to_string();
            let is_unit = *m == Monomial::one();
            if mag.is_one() {
                f.write_str(&body)?;
            } else if is_unit {
                f.write_str(&format_coefficient(&mag))?;
            } else {
                write!(f, "{}*{}", format_coefficient(&mag), body)?;
            }
        }
        Ok(())
    }
}

/// A [`DiffExpr`] with `f64` coefficients, ready for pointwise evaluation.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    terms: Vec<(f64, i32, Vec<u32>)>,
    max_index: usize,
}

impl CompiledExpr {
    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// Evaluates from raw derivative values `u[k] = f^(k)`, `u[0]` unused.
    pub fn evaluate_derivatives(&self, u: &[Complex64]) -> Result<Complex64, SymbolicError> {
        if u.len() <= self.max_index.max(1) {
            return Err(SymbolicError::InsufficientOrder {
                need: self.max_index.max(1),
                have: u.len().saturating_sub(1),
            });
        }
        let u1 = u[1];
        if u1.norm() == 0.0 {
            return Err(SymbolicError::VanishingDerivative);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (c, twice, higher) in &self.terms {
            let mut t = if twice % 2 == 0 {
                u1.powi(twice / 2)
            } else {
                u1.powf(*twice as f64 / 2.0)
            };
            for (i, &e) in higher.iter().enumerate() {
                if e > 0 {
                    t *= u[i + 2].powu(e);
                }
            }
            total += t * c;
        }
        Ok(total)
    }

    pub fn evaluate(&self, f: &Jet, offset: Complex64) -> Result<Complex64, SymbolicError> {
        let need = self.max_index.max(1);
        if f.order() < need {
            return Err(SymbolicError::InsufficientOrder {
                need,
                have: f.order(),
            });
        }
        let shifted;
        let g = if offset == Complex64::new(0.0, 0.0) {
            f
        } else {
            shifted = f.shift(offset);
            &shifted
        };
        let u: Vec<Complex64> = (0..=need).map(|k| g.derivative_at_center(k)).collect();
        self.evaluate_derivatives(&u)
    }
}

/// `S = u₃/u₁ − (3/2)u₂²/u₁²` or `PS = u₂/u₁`.
pub fn classical(kind: Classical) -> DiffExpr {
    let pre = DiffExpr::monomial(1, 1, -2, &[(2, 1)]);
    match kind {
        Classical::PreSchwarzian => pre,
        Classical::Schwarzian => pre.derive().sub(&pre.mul(&pre).scale(&rat(1, 2))),
    }
}

/// A-series: `σ₃ = S`, `σ_{m+1} = σ_m' − (m−1)(u₂/u₁)σ_m`.
pub fn sigma_a(n: usize) -> Result<DiffExpr, SymbolicError> {
    if n < 3 {
        return Err(SymbolicError::OrderTooSmall(n));
    }
    let pre = classical(Classical::PreSchwarzian);
    let mut sigma = classical(Classical::Schwarzian);
    for m in 3..n {
        let correction = pre.mul(&sigma).scale(&rat(m as i64 - 1, 1));
        sigma = sigma.derive().sub(&correction);
    }
    Ok(sigma)
}

/// B-series: `σ_n = −2 u₁^{n/2−1} dⁿ⁻¹/dzⁿ⁻¹ (u₁^{1−n/2})`.
pub fn sigma_b(n: usize) -> Result<DiffExpr, SymbolicError> {
    if n < 3 {
        return Err(SymbolicError::OrderTooSmall(n));
    }
    let twice = n as i32 - 2;
    let inner = DiffExpr::u1_pow(-twice).derive_n(n - 1);
    let sigma = inner.mul(&DiffExpr::u1_pow(twice)).scale(&rat(-2, 1));
    if !sigma.is_canonical() {
        return Err(SymbolicError::NonIntegralExponent);
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: i64, d: i64, twice_u1: i32, f: &[(usize, u32)]) -> DiffExpr {
        DiffExpr::monomial(n, d, twice_u1, f)
    }

    #[test]
    fn classical_operators() {
        let s = classical(Classical::Schwarzian);
        let want = m(1, 1, -2, &[(3, 1)]).add(&m(-3, 2, -4, &[(2, 2)]));
        assert_eq!(s, want);
        assert_eq!(s.to_string(), "u3/u1 - 3/2*u2^2/u1^2");
        assert_eq!(classical(Classical::PreSchwarzian).to_string(), "u2/u1");
    }

    #[test]
    fn derive_quotient_rule() {
        let d = classical(Classical::PreSchwarzian).derive();
        assert_eq!(d, m(1, 1, -2, &[(3, 1)]).add(&m(-1, 1, -4, &[(2, 2)])));
        assert!(DiffExpr::constant(rat(7, 3)).derive().is_zero());
    }

    #[test]
    fn derive_schwarzian_by_hand() {
        // (u3/u1)' = u4/u1 − u3u2/u1², (−3/2 u2²/u1²)' = −3u2u3/u1² + 3u2³/u1³
        let want = m(1, 1, -2, &[(4, 1)])
            .add(&m(-4, 1, -4, &[(3, 1), (2, 1)]))
            .add(&m(3, 1, -6, &[(2, 3)]));
        assert_eq!(classical(Classical::Schwarzian).derive(), want);
    }

    #[test]
    fn sigma_a_low_orders() {
        assert_eq!(sigma_a(3).unwrap(), classical(Classical::Schwarzian));
        let s4 = sigma_a(4).unwrap();
        assert_eq!(s4.to_string(), "u4/u1 - 6*u3*u2/u1^2 + 6*u2^3/u1^3");
        let s5 = sigma_a(5).unwrap();
        assert_eq!(
            s5.to_string(),
            "u5/u1 - 10*u4*u2/u1^2 - 6*u3^2/u1^2 + 48*u3*u2^2/u1^3 - 36*u2^4/u1^4"
        );
        assert!(s4.has_integer_coefficients() && s5.has_integer_coefficients());
        assert!(matches!(sigma_a(2), Err(SymbolicError::OrderTooSmall(2))));
    }

    #[test]
    fn sigma_b_low_orders() {
        assert_eq!(sigma_b(3).unwrap(), classical(Classical::Schwarzian));
        assert_eq!(
            sigma_b(4).unwrap().to_string(),
            "2*u4/u1 - 12*u3*u2/u1^2 + 12*u2^3/u1^3"
        );
        for n in 3..=10 {
            assert!(sigma_b(n).unwrap().is_canonical());
        }
    }

    #[test]
    fn monomial_part_examples() {
        for n in 3..=8 {
            let lin = m(1, 1, -2, &[(n, 1)]);
            assert_eq!(sigma_a(n).unwrap().monomial_part(), lin);
            assert_eq!(
                sigma_b(n).unwrap().monomial_part(),
                lin.scale(&rat(n as i64 - 2, 1))
            );
        }
        assert!(m(1, 1, -2, &[(2, 2)]).monomial_part().is_zero());
        assert_eq!(sigma_b(5).unwrap().linear_coefficients(), vec![(5, 3.0)]);
    }

    #[test]
    fn render_half_integer_and_constants() {
        assert_eq!(DiffExpr::u1_pow(-3).to_string(), "1/u1^(3/2)");
        assert_eq!(DiffExpr::u1_pow(2).to_string(), "u1");
        assert_eq!(DiffExpr::constant(rat(-5, 2)).to_string(), "-5/2");
        assert_eq!(DiffExpr::zero().to_string(), "0");
    }

    #[test]
    fn evaluate_on_simple_jets() {
        let id = Jet::identity(Complex64::new(0.0, 0.0), 8);
        let v = sigma_a(4).unwrap().evaluate(&id, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
        let koebe = Jet::from_real(0.0, &[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        let s = classical(Classical::Schwarzian)
            .evaluate(&koebe, Complex64::new(0.0, 0.0))
            .unwrap();
        assert!((s - Complex64::new(-6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn evaluate_errors() {
        let short = Jet::from_real(0.0, &[0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            classical(Classical::Schwarzian).evaluate(&short, Complex64::new(0.0, 0.0)),
            Err(SymbolicError::InsufficientOrder { need: 3, have: 2 })
        ));
        let crit = Jet::from_real(0.0, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            classical(Classical::Schwarzian).evaluate(&crit, Complex64::new(0.0, 0.0)),
            Err(SymbolicError::VanishingDerivative)
        );
    }
}
