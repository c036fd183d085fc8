//! Exact Gaussian-rational evaluation of differential expressions.
//!
//! Every finite `f64` is a dyadic rational, so at a floating-point sample point
//! the jets of the catalog functions and the value of a canonical [`DiffExpr`]
//! are exact rationals. Evaluating them exactly and rounding once at the end
//! gives sampled norms that never overshoot an exactly attained bound.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::maps::{AnalyticFn, Moebius};
use crate::symbolic::DiffExpr;

pub type Gaussian = Complex<BigRational>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("non-finite floating-point input")]
    NonFinite,
    #[error("pole at the evaluation point")]
    Pole,
    #[error("f' vanishes at the evaluation point")]
    VanishingDerivative,
    #[error("expression has half-integer powers of u1")]
    NonCanonical,
    #[error("jet of order {have} too short for u{need}")]
    InsufficientOrder { need: usize, have: usize },
    #[error("empty composition")]
    EmptyComposition,
}

fn rat(x: f64) -> Result<BigRational, ExactError> {
    BigRational::from_float(x).ok_or(ExactError::NonFinite)
}

pub fn to_exact(z: Complex64) -> Result<Gaussian, ExactError> {
    Ok(Complex::new(rat(z.re)?, rat(z.im)?))
}

fn zero() -> Gaussian {
    Complex::new(BigRational::zero(), BigRational::zero())
}

fn one() -> Gaussian {
    Complex::new(BigRational::one(), BigRational::zero())
}

fn int(k: i64) -> Gaussian {
    Complex::new(BigRational::from_integer(BigInt::from(k)), BigRational::zero())
}

fn is_zero(z: &Gaussian) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

fn inv(z: &Gaussian) -> Result<Gaussian, ExactError> {
    if is_zero(z) {
        return Err(ExactError::Pole);
    }
    let n = &z.re * &z.re + &z.im * &z.im;
    Ok(Complex::new(&z.re / &n, -&z.im / &n))
}

fn powu(z: &Gaussian, k: u32) -> Gaussian {
    let mut acc = one();
    let mut base = z.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = &acc * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    acc
}

pub fn norm_sqr(z: &Gaussian) -> BigRational {
    &z.re * &z.re + &z.im * &z.im
}

/// Truncated product of two coefficient sequences.
fn mul(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| {
            (0..=k).fold(zero(), |acc, j| acc + &a[j] * &b[k - j])
        })
        .collect()
}

/// `outer ∘ inner`, with `inner[0]` assumed equal to the center of `outer`.
fn compose(outer: &[Gaussian], inner: &[Gaussian]) -> Vec<Gaussian> {
    let n = outer.len().min(inner.len());
    let mut h: Vec<Gaussian> = inner[..n].to_vec();
    h[0] = zero();
    let mut acc = vec![zero(); n];
    for c in outer[..n].iter().rev() {
        acc = mul(&acc, &h);
        acc[0] = &acc[0] + c;
    }
    acc
}

fn moebius_jet(
    a: &Gaussian,
    b: &Gaussian,
    c: &Gaussian,
    d: &Gaussian,
    z0: &Gaussian,
    order: usize,
) -> Result<Vec<Gaussian>, ExactError> {
    let num = a * z0 + b;
    let den = c * z0 + d;
    let iden = inv(&den)?;
    let det = a * d - b * c;
    let mut out = vec![&num * &iden];
    let mut t = &det * &iden * &iden;
    let step = -(c * &iden);
    for _ in 1..=order {
        out.push(t.clone());
        t = &t * &step;
    }
    Ok(out)
}

fn matrix_entries(g: &Moebius) -> Result<[Gaussian; 4], ExactError> {
    let [a, b, c, d] = g.coefficients();
    Ok([to_exact(a)?, to_exact(b)?, to_exact(c)?, to_exact(d)?])
}

/// Taylor coefficients `c_0..c_order` of `f` at `z0`, computed exactly from
/// the floating-point data in the descriptor.
pub fn exact_jet(f: &AnalyticFn, z0: &Gaussian, order: usize) -> Result<Vec<Gaussian>, ExactError> {
    match f {
        AnalyticFn::Koebe => {
            let w = inv(&(one() - z0))?;
            let mut p = &w * &w;
            let mut out = Vec::with_capacity(order + 1);
            for m in 0..=order {
                out.push((z0 + int(m as i64)) * &p);
                p = &p * &w;
            }
            Ok(out)
        }
        AnalyticFn::Identity => {
            let mut out = vec![z0.clone(), one()];
            out.resize(order + 1, zero());
            out.truncate(order + 1);
            Ok(out)
        }
        AnalyticFn::Cayley => {
            let i = Complex::new(BigRational::zero(), BigRational::one());
            moebius_jet(&i, &i, &-one(), &one(), z0, order)
        }
        AnalyticFn::Rotation { theta } => {
            let e = Complex::new(rat(theta.cos())?, rat(theta.sin())?);
            let mut out = vec![&e * z0, e];
            out.resize(order + 1, zero());
            out.truncate(order + 1);
            Ok(out)
        }
        AnalyticFn::Moebius { mat } => {
            let g = Moebius::from_matrix(*mat).map_err(|_| ExactError::Pole)?;
            let [a, b, c, d] = matrix_entries(&g)?;
            moebius_jet(&a, &b, &c, &d, z0, order)
        }
        AnalyticFn::Taylor { center, coeffs } => {
            let h = z0 - to_exact(Complex64::new(center[0], center[1]))?;
            let mut a: Vec<Gaussian> = coeffs
                .iter()
                .map(|p| to_exact(Complex64::new(p[0], p[1])))
                .collect::<Result<_, _>>()?;
            if a.is_empty() {
                a.push(zero());
            }
            let n = a.len();
            for i in 0..n {
                for j in (i..n - 1).rev() {
                    let t = &h * &a[j + 1];
                    a[j] = &a[j] + t;
                }
            }
            a.resize(order + 1, zero());
            a.truncate(order + 1);
            Ok(a)
        }
        AnalyticFn::Compose { fns } => {
            let (last, rest) = fns.split_last().ok_or(ExactError::EmptyComposition)?;
            let mut acc = exact_jet(last, z0, order)?;
            for g in rest.iter().rev() {
                let outer = exact_jet(g, &acc[0], order)?;
                acc = compose(&outer, &acc);
            }
            Ok(acc)
        }
    }
}

/// `e[f]` from Taylor coefficients `c_k = f^(k)/k!`.
pub fn evaluate(e: &DiffExpr, coeffs: &[Gaussian]) -> Result<Gaussian, ExactError> {
    if !e.is_canonical() {
        return Err(ExactError::NonCanonical);
    }
    let need = e.max_index().max(1);
    if coeffs.len() <= need {
        return Err(ExactError::InsufficientOrder {
            need,
            have: coeffs.len().saturating_sub(1),
        });
    }
    let mut u = Vec::with_capacity(need + 1);
    let mut fact = BigInt::one();
    for (k, c) in coeffs.iter().take(need + 1).enumerate() {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        u.push(c * Complex::new(BigRational::from_integer(fact.clone()), BigRational::zero()));
    }
    if is_zero(&u[1]) {
        return Err(ExactError::VanishingDerivative);
    }
    let u1_inv = inv(&u[1])?;
    let mut total = zero();
    for (m, coef) in e.terms() {
        let p = m.twice_u1_exponent() / 2;
        let mut t = if p >= 0 {
            powu(&u[1], p as u32)
        } else {
            powu(&u1_inv, (-p) as u32)
        };
        for (k, uk) in u.iter().enumerate().skip(2) {
            let ek = m.exponent(k);
            if ek > 0 {
                t = &t * &powu(uk, ek);
            }
        }
        total += t * Complex::new(coef.clone(), BigRational::zero());
    }
    Ok(total)
}

/// `|e[f](z)| (1 − |z|²)^w` on the unit disc, exact up to one final rounding
/// of its square followed by a correctly rounded square root.
pub fn weighted_modulus_on_disc(
    e: &DiffExpr,
    f: &AnalyticFn,
    z: Complex64,
    weight: u32,
) -> Result<f64, ExactError> {
    let ze = to_exact(z)?;
    let coeffs = exact_jet(f, &ze, e.max_index().max(1))?;
    let v = evaluate(e, &coeffs)?;
    let gap = BigRational::one() - norm_sqr(&ze);
    let mut w = BigRational::one();
    for _ in 0..2 * weight {
        w = &w * &gap;
    }
    let q = norm_sqr(&v) * w;
    Ok(q.to_f64().ok_or(ExactError::NonFinite)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{classical, sigma_a, Classical};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn to_f64(z: &Gaussian) -> Complex64 {
        c(z.re.to_f64().unwrap(), z.im.to_f64().unwrap())
    }

    #[test]
    fn exact_jets_agree_with_float_jets() {
        for (name, f) in crate::maps::schlicht_catalog() {
            let z = c(0.25, -0.375);
            let exact = exact_jet(&f, &to_exact(z).unwrap(), 5).unwrap();
            let float = f.jet(z, 5).unwrap();
            for k in 0..=5 {
                let d = (to_f64(&exact[k]) - float.coeff(k)).norm();
                assert!(d <= 1e-12 * (1.0 + float.coeff(k).norm()), "{name} {k}");
            }
        }
    }

    #[test]
    fn koebe_schwarzian_exact_on_diameter() {
        let s = classical(Classical::Schwarzian);
        for j in 0..30 {
            let x = -(1.0 - 0.5f64.powi(j));
            let v = weighted_modulus_on_disc(&s, &AnalyticFn::Koebe, c(x, 0.0), 2).unwrap();
            assert_eq!(v, 6.0);
        }
    }

    #[test]
    fn evaluation_matches_float_path() {
        let e = sigma_a(5).unwrap();
        let f = crate::maps::schlicht_catalog().remove(2).1;
        let z = c(-0.3, 0.2);
        let exact = evaluate(&e, &exact_jet(&f, &to_exact(z).unwrap(), 5).unwrap()).unwrap();
        let float = e.evaluate(&f.jet(z, 5).unwrap(), c(0.0, 0.0)).unwrap();
        assert!((to_f64(&exact) - float).norm() < 1e-10 * float.norm());
    }

    #[test]
    fn rejects_half_integer_expressions() {
        let e = DiffExpr::u1_pow(1);
        let coeffs = vec![one(), one()];
        assert_eq!(evaluate(&e, &coeffs), Err(ExactError::NonCanonical));
    }
}
