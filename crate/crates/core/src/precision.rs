//! Precision management and the tracked high-precision scalar.
//!
//! All digit accounting at the API boundary is decimal; the internal radix
//! is whatever MPFR uses. A [`PrecisionContext`] fixes the number of digits
//! a caller wants (`target_digits`) and the number actually carried through
//! computations (`working_digits = target + guard + padding`). Guard digits
//! follow a fixed policy; cancellation padding is added per call site where
//! alternating sums with large coefficients are known to cancel.
//!
//! [`HPReal`] is the only inexact scalar in the crate: an MPFR float at
//! working precision together with a decimal error exponent `e` such that
//! `|true - value| <= 10^e`. Propagation rules are rigorous-by-policy
//! (documented heuristics, cross-checked by oracles), not certified interval
//! arithmetic.

use std::cmp::Ordering;
use std::f64::consts::{LOG10_2, LOG2_10};
use std::fmt;

use rug::float::Round;
use rug::ops::CompleteRound;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};


/// Upper bound on a precision request; anything larger is a typo.
pub const MAX_TARGET_DIGITS: u32 = 1_000_000;

/// Error exponent marking an exact value: |true - value| = 0.
/// Kept far from i64::MIN so saturating arithmetic never wraps.
pub const EXACT_ERR: i64 = i64::MIN / 4;

/// Decimal magnitude assigned to a zero float (smaller than any real one).
const ZERO_MAG: i64 = EXACT_ERR / 2;

/// Immutable precision request: target digits plus guard and padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    target_digits: u32,
    guard_digits: u32,
    padding_digits: u32,
}

impl PrecisionContext {
    /// Create a context for `target_digits` requested decimal digits.
    ///
    /// Guard policy: `10 + ceil(target/5)` extra digits. Call sites that
    /// expect cancellation add their own padding via [`boosted`].
    ///
    /// [`boosted`]: PrecisionContext::boosted
    pub fn new(target_digits: u32) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::Config("target_digits must be at least 1".into()));
        }
        if target_digits > MAX_TARGET_DIGITS {
            return Err(Error::Config(format!(
                "target_digits = {target_digits} exceeds the maximum {MAX_TARGET_DIGITS}"
            )));
        }
        let guard_digits = 10 + target_digits.div_ceil(5);
        Ok(PrecisionContext {
            target_digits,
            guard_digits,
            padding_digits: 0,
        })
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Total decimal digits carried in intermediate computations.
    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits + self.padding_digits
    }

    /// Same target, `extra` more digits of cancellation padding.
    pub fn boosted(&self, extra: u32) -> Self {
        PrecisionContext {
            target_digits: self.target_digits,
            guard_digits: self.guard_digits,
            padding_digits: self.padding_digits.saturating_add(extra),
        }
    }

    /// Binary precision corresponding to the working digits.
    pub fn prec_bits(&self) -> u32 {
        (self.working_digits() as f64 * LOG2_10).ceil() as u32 + 16
    }

    /// A fresh float at working precision.
    pub fn float_from<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.prec_bits(), v)
    }
}

/// Decimal exponent such that |f| < 10^mag10(f); ZERO_MAG for f = 0.
pub(crate) fn mag10(f: &Float) -> i64 {
    match f.get_exp() {
        Some(e) => (e as f64 * LOG10_2).floor() as i64 + 1,
        None => ZERO_MAG,
    }
}

/// Decimal digits representable at `bits` of binary precision.
fn digits_of_bits(bits: u32) -> i64 {
    ((bits.saturating_sub(16)) as f64 * LOG10_2).floor() as i64
}

fn clamp_err(e: i64) -> i64 {
    e.max(EXACT_ERR)
}

/// Arbitrary-precision real with an explicit decimal error bound:
/// `|true - value| <= 10^err_exp` (`err_exp = EXACT_ERR` means exact).
#[derive(Debug, Clone)]
pub struct HPReal {
    value: Float,
    err_exp: i64,
}

impl HPReal {
    /// Wrap a float with an explicitly computed error bound.
    pub fn with_error(value: Float, err_exp: i64) -> Self {
        HPReal {
            value,
            err_exp: clamp_err(err_exp),
        }
    }

    /// Wrap a float assumed correct to its own working precision
    /// (rounding-level error only).
    pub fn from_float(value: Float) -> Self {
        let e = rounding_err(&value);
        HPReal { value, err_exp: e }
    }

    pub fn exact_zero(ctx: &PrecisionContext) -> Self {
        HPReal {
            value: ctx.float_from(0),
            err_exp: EXACT_ERR,
        }
    }

    pub fn from_integer(n: &Integer, ctx: &PrecisionContext) -> Self {
        let value = ctx.float_from(n);
        let err = rounding_err(&value);
        HPReal {
            value,
            err_exp: err,
        }
    }

    pub fn from_rational(q: &Rational, ctx: &PrecisionContext) -> Self {
        let value = ctx.float_from(q);
        let err = rounding_err(&value);
        HPReal {
            value,
            err_exp: err,
        }
    }

    pub fn from_u32(n: u32, ctx: &PrecisionContext) -> Self {
        HPReal {
            value: ctx.float_from(n),
            err_exp: EXACT_ERR,
        }
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn err_exp(&self) -> i64 {
        self.err_exp
    }

    pub fn is_exact(&self) -> bool {
        self.err_exp == EXACT_ERR
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    fn join_prec(&self, other: &HPReal) -> u32 {
        self.value.prec().max(other.value.prec())
    }

    pub fn neg(&self) -> Self {
        HPReal {
            value: (-&self.value).complete(self.value.prec()),
            err_exp: self.err_exp,
        }
    }

    pub fn abs(&self) -> Self {
        HPReal {
            value: self.value.clone().abs(),
            err_exp: self.err_exp,
        }
    }

    /// Sum; error bounds add (policy: max + 1 covers 10^a + 10^b).
    pub fn add(&self, other: &HPReal) -> Self {
        let prec = self.join_prec(other);
        let value = (&self.value + &other.value).complete(prec);
        let prop = clamp_err(self.err_exp.max(other.err_exp).saturating_add(1));
        let err = prop.max(rounding_err(&value));
        HPReal {
            value,
            err_exp: err,
        }
    }

    pub fn sub(&self, other: &HPReal) -> Self {
        self.add(&other.neg())
    }

    /// Product; |Δ(ab)| <= |a|10^eb + |b|10^ea + 10^(ea+eb).
    pub fn mul(&self, other: &HPReal) -> Self {
        let prec = self.join_prec(other);
        let value = (&self.value * &other.value).complete(prec);
        let ma = mag10(&self.value);
        let mb = mag10(&other.value);
        let prop = clamp_err(
            (ma.saturating_add(other.err_exp))
                .max(mb.saturating_add(self.err_exp))
                .max(self.err_exp.saturating_add(other.err_exp))
                .saturating_add(1),
        );
        let err = prop.max(rounding_err(&value));
        HPReal {
            value,
            err_exp: err,
        }
    }

    /// Quotient; policy via d(a/b) = da/b - a db / b^2.
    pub fn div(&self, other: &HPReal) -> Self {
        let prec = self.join_prec(other);
        let value = (&self.value / &other.value).complete(prec);
        let ma = mag10(&self.value);
        let mb = mag10(&other.value);
        let prop = clamp_err(
            (self.err_exp.saturating_sub(mb))
                .max(ma.saturating_add(other.err_exp).saturating_sub(2 * mb))
                .saturating_add(1),
        );
        let err = prop.max(rounding_err(&value));
        HPReal {
            value,
            err_exp: err,
        }
    }

    /// Exact rational scale.
    pub fn mul_rational(&self, q: &Rational) -> Self {
        let prec = self.value.prec();
        let qf = Float::with_val(prec, q);
        let value = (&self.value * &qf).complete(prec);
        let prop = clamp_err(self.err_exp.saturating_add(mag10(&qf)).saturating_add(1));
        let err = prop.max(rounding_err(&value));
        HPReal {
            value,
            err_exp: err,
        }
    }

    pub fn sqrt(&self) -> Self {
        let value = self.value.clone().sqrt();
        // d sqrt = dx / (2 sqrt x)
        let prop = clamp_err(
            self.err_exp
                .saturating_sub(mag10(&value))
                .saturating_add(1),
        );
        let err = prop.max(rounding_err(&value));
        HPReal {
            value,
            err_exp: err,
        }
    }

    pub fn ln(&self) -> Self {
        let mx = mag10(&self.value);
        let value = self.value.clone().ln();
        let prop = clamp_err(self.err_exp.saturating_sub(mx).saturating_add(1));
        HPReal {
            value: value.clone(),
            err_exp: prop.max(rounding_err(&value)),
        }
    }

    pub fn exp(&self) -> Self {
        let value = self.value.clone().exp();
        let prop = clamp_err(mag10(&value).saturating_add(self.err_exp).saturating_add(1));
        HPReal {
            value: value.clone(),
            err_exp: prop.max(rounding_err(&value)),
        }
    }

    /// Integer power by repeated squaring on the float, derivative policy
    /// for the bound: d(x^n) = n x^(n-1) dx.
    pub fn pow_i64(&self, n: i64) -> Self {
        use rug::ops::Pow;
        let value = Float::with_val(self.value.prec(), (&self.value).pow(n));
        let mx = mag10(&self.value);
        let prop = clamp_err(
            mag10(&value)
                .saturating_sub(mx)
                .saturating_add(self.err_exp)
                .saturating_add((n.unsigned_abs() as f64).log10().ceil() as i64 + 1),
        );
        HPReal {
            value: value.clone(),
            err_exp: prop.max(rounding_err(&value)),
        }
    }

    /// Decimal string with `digits` significant digits (scientific form).
    pub fn to_decimal_string(&self, digits: u32) -> String {
        float_to_decimal_string(&self.value, digits)
    }

    /// The error bound as a short decimal string like "1e-52".
    pub fn error_bound_string(&self) -> String {
        if self.is_exact() {
            "0".to_string()
        } else {
            format!("1e{}", self.err_exp)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}


/// Rounding-level error bound for a float: one unit in its last decimal place.
fn rounding_err(value: &Float) -> i64 {
    if value.is_zero() {
        EXACT_ERR
    } else {
        clamp_err(mag10(value) - digits_of_bits(value.prec()))
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", float_to_decimal_string(&self.value, 30))
    }
}

impl PartialEq for HPReal {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for HPReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

/// Format a float as a decimal string with `digits` significant digits.
///
/// Deterministic: same float and digit count always produce the same string.
pub fn float_to_decimal_string(value: &Float, digits: u32) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let (sign, mantissa, exp) =
        value.to_sign_string_exp_round(10, Some(digits as usize), Round::Nearest);
    let Some(exp) = exp else {
        return value.to_string();
    };
    let sign_str = if sign { "-" } else { "" };
    // mantissa is the digit string, exp the position of the decimal point:
    // value = 0.mantissa * 10^exp
    let mut m = mantissa;
    while m.len() > 1 && m.ends_with('0') {
        m.pop();
    }
    let e10 = exp - 1;
    if m.len() == 1 {
        format!("{sign_str}{m}e{e10}")
    } else {
        format!("{sign_str}{}.{}e{}", &m[..1], &m[1..], e10)
    }
}

/// Decimal exponent of |a - b| (EXACT_ERR when equal).
pub fn abs_diff_exp(a: &Float, b: &Float) -> i64 {
    let prec = a.prec().max(b.prec());
    let d = Float::with_val(prec, a - b).abs();
    if d.is_zero() {
        EXACT_ERR
    } else {
        mag10(&d)
    }
}

/// Number of decimal digits to which `a` and `b` agree, in the sense
/// |a - b| <= 10^-d * max(1, |a|, |b|). Saturates at -EXACT_ERR for equality.
pub fn agreement_digits(a: &Float, b: &Float) -> i64 {
    let d = abs_diff_exp(a, b);
    if d == EXACT_ERR {
        // bit-identical at the compared precision
        return 1_000_000;
    }
    let scale = mag10(a).max(mag10(b)).max(1);
    (scale - d).min(1_000_000)
}
