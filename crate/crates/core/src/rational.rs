//! Exact rational scalars and dense univariate rational polynomials.
//!
//! `Rational` (GMP-backed) is always kept in lowest terms with a positive
//! denominator, which is exactly the invariant the exact layer needs, so it
//! is used directly as the big-rational scalar.

use std::fmt;

use rug::ops::NegAssign;
use rug::{Integer, Rational};

/// Dense polynomial with rational coefficients; index = power of x.
/// No trailing zero coefficient except for the zero polynomial (empty list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RationalPolynomial {
            coeffs: vec![Rational::from(1)],
        }
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = RationalPolynomial { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial x.
    pub fn x() -> Self {
        RationalPolynomial {
            coeffs: vec![Rational::new(), Rational::from(1)],
        }
    }

    /// x - c.
    pub fn x_minus(c: Rational) -> Self {
        RationalPolynomial {
            coeffs: vec![-c, Rational::from(1)],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = RationalPolynomial { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if last.cmp0() == std::cmp::Ordering::Equal {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of x^i (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            c.neg_assign();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .map(|a| Rational::from(a * c))
                .collect(),
        )
    }

    /// Exact division of every coefficient by a nonzero integer.
    pub fn div_int(&self, k: u32) -> Self {
        assert!(k != 0, "division by zero");
        Self::from_coeffs(
            self.coeffs
                .iter()
                .map(|a| Rational::from(a / Integer::from(k)))
                .collect(),
        )
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Coefficient-wise derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(Rational::from(c * Integer::from(i)));
        }
        Self::from_coeffs(out)
    }

    /// Coefficients of p(a - x).
    pub fn compose_shift_neg(&self, a: &Rational) -> Self {
        let mut acc = Self::zero();
        let lin = Self::from_coeffs(vec![a.clone(), Rational::from(-1)]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin);
            acc = acc.add(&Self::constant(c.clone()));
        }
        acc
    }
}

impl fmt::Display for RationalPolynomial {
    /// Renders like "x^2 - 3x + 2", highest power first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            let neg = c.cmp0() == std::cmp::Ordering::Less;
            let mag = c.clone().abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = mag != 1u32 || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}
