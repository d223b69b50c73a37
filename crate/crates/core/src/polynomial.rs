//! Exact integer polynomials in the open-edge probability `p`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense polynomial `c_0 + c_1 p + ... + c_k p^k` with a fixed degree bound `k`.
///
/// The coefficient vector always has length `k + 1`, trailing zeros
/// included, so two polynomials compare positionally like the coefficient
/// tuples `(c_0, ..., c_k)` they represent. Arithmetic is checked and
/// reports [`Error::Overflow`] rather than wrapping.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PolynomialWire", try_from = "PolynomialWire")]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialWire {
    degree_bound: usize,
    coeffs: Vec<i64>,
}

impl From<IntPolynomial> for PolynomialWire {
    fn from(poly: IntPolynomial) -> Self {
        PolynomialWire {
            degree_bound: poly.degree_bound(),
            coeffs: poly.coeffs,
        }
    }
}

impl TryFrom<PolynomialWire> for IntPolynomial {
    type Error = String;

    fn try_from(wire: PolynomialWire) -> std::result::Result<Self, String> {
        if wire.coeffs.len() != wire.degree_bound + 1 {
            return Err(format!(
                "degree_bound {} needs {} coefficients, found {}",
                wire.degree_bound,
                wire.degree_bound + 1,
                wire.coeffs.len()
            ));
        }
        Ok(IntPolynomial {
            coeffs: wire.coeffs,
        })
    }
}

/// `C(n, k)` as an `i64`, `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<i64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    i64::try_from(acc).ok()
}

impl IntPolynomial {
    pub fn zero(degree_bound: usize) -> Self {
        IntPolynomial {
            coeffs: vec![0; degree_bound + 1],
        }
    }

    pub fn constant(degree_bound: usize, value: i64) -> Self {
        let mut poly = Self::zero(degree_bound);
        poly.coeffs[0] = value;
        poly
    }

    /// `p^power`.
    pub fn monomial(degree_bound: usize, power: usize) -> Result<Self> {
        if power > degree_bound {
            return Err(Error::DegreeBound {
                degree: power,
                bound: degree_bound,
            });
        }
        let mut poly = Self::zero(degree_bound);
        poly.coeffs[power] = 1;
        Ok(poly)
    }

    /// Takes the coefficients as given; the degree bound is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a polynomial needs at least one coefficient"
        );
        IntPolynomial { coeffs }
    }

    /// Expansion of `p^successes (1 - p)^(trials - successes)` under the given
    /// degree bound.
    pub fn bernoulli_weight(successes: usize, trials: usize, degree_bound: usize) -> Result<Self> {
        if successes > trials {
            return Err(Error::InvalidInput(format!(
                "{successes} successes out of {trials} trials"
            )));
        }
        if trials > degree_bound {
            return Err(Error::DegreeBound {
                degree: trials,
                bound: degree_bound,
            });
        }
        let failures = trials - successes;
        let mut poly = Self::zero(degree_bound);
        for i in 0..=failures {
            let c = binomial(failures, i).ok_or(Error::Overflow)?;
            poly.coeffs[successes + i] = if i % 2 == 0 { c } else { -c };
        }
        Ok(poly)
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    /// Highest power with a nonzero coefficient, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Re-pads or trims trailing zeros to a new degree bound.
    pub fn with_degree_bound(mut self, degree_bound: usize) -> Result<Self> {
        if let Some(d) = self.degree() {
            if d > degree_bound {
                return Err(Error::DegreeBound {
                    degree: d,
                    bound: degree_bound,
                });
            }
        }
        self.coeffs.resize(degree_bound + 1, 0);
        Ok(self)
    }

    /// Compensated Horner evaluation at `p` in `[0, 1]`.
    ///
    /// Expanded Bernstein-type polynomials alternate in sign with large
    /// binomial coefficients, so plain Horner loses up to `log10 C(30, 15)`
    /// digits. The rounding error of every step is tracked with error-free
    /// transformations and added back at the end, which gives a result about
    /// as accurate as Horner in twice the working precision.
    pub fn eval(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(self.eval_unchecked(p))
    }

    pub(crate) fn eval_unchecked(&self, p: f64) -> f64 {
        let mut sum = 0.0f64;
        let mut error = 0.0f64;
        for &c in self.coeffs.iter().rev() {
            // `c = hi + lo` exactly, even above 2^53.
            let hi = c as f64;
            let lo = (c as i128 - hi as i128) as f64;
            let product = sum * p;
            let product_err = sum.mul_add(p, -product);
            let (next, sum_err) = two_sum(product, hi);
            error = error.mul_add(p, product_err + sum_err + lo);
            sum = next;
        }
        sum + error
    }

    /// `self += weight * other`. The result keeps the larger degree bound.
    pub fn add_scaled(&mut self, other: &IntPolynomial, weight: i64) -> Result<()> {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0);
        }
        for (dst, &src) in self.coeffs.iter_mut().zip(&other.coeffs) {
            let term = src.checked_mul(weight).ok_or(Error::Overflow)?;
            *dst = dst.checked_add(term).ok_or(Error::Overflow)?;
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        let mut sum = self.clone();
        sum.add_scaled(other, 1)?;
        Ok(sum)
    }

    pub fn checked_scale(&self, weight: i64) -> Result<IntPolynomial> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| c.checked_mul(weight).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(IntPolynomial { coeffs })
    }
}

/// `a + b = s + e` exactly.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl fmt::Display for IntPolynomial {
    /// Tuple notation, e.g. `(1, 3, 6, 0, -21, 21, -6)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}
