//! Truncated Taylor expansions of holomorphic germs.
//!
//! A [`Jet`] stores scaled coefficients `c_k = f^(k)(center) / k!` for
//! `k = 0..=order`. Binary operations truncate to the smaller order of the
//! two operands; nothing is ever padded with zeros behind the caller's back.

use num_complex::Complex64;
use num_rational::Rational64;
use thiserror::Error;

/// Truncation order used when callers have no better choice.
pub const DEFAULT_ORDER: usize = 12;

/// Relative tolerance used when matching centers and values of two jets.
const ALIGN_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("jets are centered at different points ({0} vs {1})")]
    CenterMismatch(Complex64, Complex64),
    #[error("inner jet value {value} does not match outer center {center}")]
    ValueMismatch { value: Complex64, center: Complex64 },
    #[error("constant term vanishes")]
    VanishingConstant,
    #[error("jet is not locally invertible (vanishing linear term)")]
    NotInvertible,
    #[error("derivative order {k} exceeds jet order {order}")]
    OrderExceeded { k: usize, order: usize },
    #[error("a jet needs at least one coefficient")]
    Empty,
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= ALIGN_TOL * (1.0 + a.norm().max(b.norm()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    center: Complex64,
    coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn new(center: Complex64, coeffs: Vec<Complex64>) -> Result<Self, JetError> {
        if coeffs.is_empty() {
            return Err(JetError::Empty);
        }
        Ok(Self { center, coeffs })
    }

    /// Jet with real coefficients, convenient in tests.
    pub fn from_real(center: f64, coeffs: &[f64]) -> Result<Self, JetError> {
        Self::new(
            Complex64::new(center, 0.0),
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn constant(center: Complex64, value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    /// The identity germ `z ↦ z` at `center`.
    pub fn identity(center: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = center;
        if order >= 1 {
            coeffs[1] = Complex64::new(1.0, 0.0);
        }
        Self { center, coeffs }
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `f^(k)(center)`, i.e. `k! · c_k`.
    pub fn derivative_at_center(&self, k: usize) -> Complex64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.coeffs[k] * fact
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        Self {
            center: self.center,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Largest coefficient modulus, handy for residual checks.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Value of the truncated polynomial at `center + h`.
    pub fn eval_offset(&self, h: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * h + c)
    }

    /// Re-expands the truncated polynomial around `center + h`.
    ///
    /// Exact for polynomials of degree ≤ order; for general germs the higher
    /// coefficients pick up truncation error of size `O(|h|^(order+1-k))`.
    pub fn shift(&self, h: Complex64) -> Self {
        let n = self.coeffs.len();
        let mut out = self.coeffs.clone();
        // repeated synthetic division (Taylor shift)
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = out[j + 1];
                out[j] += h * next;
            }
        }
        Self {
            center: self.center + h,
            coeffs: out,
        }
    }

    fn check_center(&self, other: &Jet) -> Result<(), JetError> {
        if close(self.center, other.center) {
            Ok(())
        } else {
            Err(JetError::CenterMismatch(self.center, other.center))
        }
    }

    pub fn add(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_center(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect();
        Ok(Jet {
            center: self.center,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_center(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| self.coeffs[k] - other.coeffs[k]).collect();
        Ok(Jet {
            center: self.center,
            coeffs,
        })
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_center(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k)
                    .map(|j| self.coeffs[j] * other.coeffs[k - j])
                    .sum::<Complex64>()
            })
            .collect();
        Ok(Jet {
            center: self.center,
            coeffs,
        })
    }

    pub fn scale(&self, s: Complex64) -> Jet {
        Jet {
            center: self.center,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Adds a constant to the value coefficient.
    pub fn add_constant(&self, s: Complex64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    pub fn reciprocal(&self) -> Result<Jet, JetError> {
        let a0 = self.coeffs[0];
        if a0.norm() == 0.0 {
            return Err(JetError::VanishingConstant);
        }
        let inv0 = a0.inv();
        let mut b = Vec::with_capacity(self.coeffs.len());
        b.push(inv0);
        for k in 1..self.coeffs.len() {
            let s: Complex64 = (1..=k).map(|j| self.coeffs[j] * b[k - j]).sum();
            b.push(-s * inv0);
        }
        Ok(Jet {
            center: self.center,
            coeffs: b,
        })
    }

    pub fn div(&self, other: &Jet) -> Result<Jet, JetError> {
        self.mul(&other.reciprocal()?)
    }

    /// `self^alpha` with the principal branch of `c₀^alpha`.
    pub fn pow(&self, alpha: Rational64) -> Result<Jet, JetError> {
        let alpha_f = *alpha.numer() as f64 / *alpha.denom() as f64;
        self.powf(Complex64::new(alpha_f, 0.0))
    }

    /// Complex exponent version of [`Jet::pow`].
    pub fn powf(&self, alpha: Complex64) -> Result<Jet, JetError> {
        let a0 = self.coeffs[0];
        if a0.norm() == 0.0 {
            return Err(JetError::VanishingConstant);
        }
        let n = self.coeffs.len();
        let mut b = Vec::with_capacity(n);
        b.push((alpha * a0.ln()).exp());
        // k a₀ b_k = Σ_{j=1..k} (α j − (k − j)) a_j b_{k−j}
        for k in 1..n {
            let s: Complex64 = (1..=k)
                .map(|j| (alpha * j as f64 - (k - j) as f64) * self.coeffs[j] * b[k - j])
                .sum();
            b.push(s / (a0 * k as f64));
        }
        Ok(Jet {
            center: self.center,
            coeffs: b,
        })
    }

    pub fn powi(&self, p: i64) -> Result<Jet, JetError> {
        if p >= 0 {
            let mut acc = Jet::constant(self.center, Complex64::new(1.0, 0.0), self.order());
            for _ in 0..p {
                acc = acc.mul(self)?;
            }
            Ok(acc)
        } else {
            self.reciprocal()?.powi(-p)
        }
    }

    /// `outer ∘ inner`, as a jet at `inner`'s center.
    ///
    /// The value of `inner` must coincide with the center of `outer`.
    pub fn compose(outer: &Jet, inner: &Jet) -> Result<Jet, JetError> {
        if !close(inner.value(), outer.center) {
            return Err(JetError::ValueMismatch {
                value: inner.value(),
                center: outer.center,
            });
        }
        let n = outer.order().min(inner.order());
        let mut d = inner.truncate(n);
        d.coeffs[0] = Complex64::new(0.0, 0.0);
        let mut acc = Jet::constant(inner.center, outer.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul(&d)?;
            acc.coeffs[0] += outer.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse: a jet `g` centered at `self.value()` with
    /// `g.value() == self.center()` and `self ∘ g = id` to truncation order.
    pub fn reverse(&self) -> Result<Jet, JetError> {
        let n = self.order();
        if n == 0 {
            return Err(JetError::NotInvertible);
        }
        let a1 = self.coeffs[1];
        if a1.norm() == 0.0 {
            return Err(JetError::NotInvertible);
        }
        let zero = Complex64::new(0.0, 0.0);
        // work with the zero-centred, zero-valued germ a(t) = Σ_{k≥1} a_k t^k
        let mut a = self.coeffs.clone();
        a[0] = zero;
        let a = Jet {
            center: zero,
            coeffs: a,
        };
        let mut g = vec![zero; n + 1];
        g[1] = a1.inv();
        for k in 2..=n {
            let partial = Jet {
                center: zero,
                coeffs: g[..=k].to_vec(),
            };
            let comp = Jet::compose(&a, &partial)?;
            g[k] = -comp.coeffs[k] * g[1];
        }
        g[0] = self.center;
        Ok(Jet {
            center: self.value(),
            coeffs: g,
        })
    }

    /// k-th derivative; the order drops by `k`.
    pub fn derive(&self, k: usize) -> Result<Jet, JetError> {
        if k > self.order() {
            return Err(JetError::OrderExceeded {
                k,
                order: self.order(),
            });
        }
        let coeffs = (0..=self.order() - k)
            .map(|j| {
                let falling: f64 = ((j + 1)..=(j + k)).map(|i| i as f64).product();
                self.coeffs[j + k] * falling
            })
            .collect();
        Ok(Jet {
            center: self.center,
            coeffs,
        })
    }

    /// Termwise antiderivative with the given value at the center.
    pub fn integrate(&self, value: Complex64) -> Jet {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(value);
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / (k + 1) as f64);
        }
        Jet {
            center: self.center,
            coeffs,
        }
    }
}
