//! High-precision numerical integration on (0, inf) for the hyperbolic
//! integrand families. This is the independent oracle for every closed form
//! in the crate, so nothing here goes through the closed-form machinery.
//!
//! The interval is split at x = 1. On (0,1] a tanh-sinh rule handles the
//! endpoint (removable cancellation or a log singularity); on [1,inf) an
//! exp-sinh rule handles the exponential decay. Both are trapezoid rules in
//! the transformed variable with the step halved level by level, nodes
//! reused, and the level-to-level difference driving the reported bound.
//! Near x = 0 the integrand is evaluated with the working precision boosted
//! by 2*|log10 x| digits to absorb the removable-singularity cancellation.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::nested_sums::CoefficientVector;
use crate::precision::{float_to_decimal_string, mag10, HPReal, PrecisionContext};

const MAX_LEVEL: u32 = 12;
const T_CAP: f64 = 9.0;

/// Integrand selector for [`integrate`].
#[derive(Debug, Clone)]
pub enum IntegrandSpec {
    /// [(sum c_j) sech x - sum_j c_j sech^j x] / x^2.
    SechFamily(CoefficientVector),
    /// log(ax) sech^n(bx).
    LogSech { n: u32, a: HPReal, b: HPReal },
    /// [sech x - sech^m x / (2 - sech x)] / x^2.
    LimitCommon { m: u32 },
    /// [sech x - sech x / (2 - sech x)^2] / x^2.
    LimitStaircase,
    /// [sech x - sech^s x] / x^2 for real s > 0.
    ChiPower { s: HPReal },
}

impl IntegrandSpec {
    fn validate(&self) -> Result<()> {
        match self {
            IntegrandSpec::LogSech { n, a, b } => {
                if *n < 1 {
                    return Err(Error::Domain("log_sech needs n >= 1".into()));
                }
                if a.value().cmp0() != Some(std::cmp::Ordering::Greater)
                    || b.value().cmp0() != Some(std::cmp::Ordering::Greater)
                {
                    return Err(Error::Domain("log_sech needs a > 0 and b > 0".into()));
                }
            }
            IntegrandSpec::ChiPower { s } => {
                if s.value().cmp0() != Some(std::cmp::Ordering::Greater) {
                    return Err(Error::Domain("chi_power needs s > 0".into()));
                }
            }
            IntegrandSpec::LimitCommon { m }
                if *m < 1 => {
                    return Err(Error::Domain("limit_common needs m >= 1".into()));
                }
            _ => {}
        }
        Ok(())
    }

    /// An integrand that is identically zero (chi_1-type cases).
    fn is_identically_zero(&self) -> bool {
        match self {
            IntegrandSpec::SechFamily(c) => (2..=c.n()).all(|j| c.get(j) == 0u32),
            IntegrandSpec::ChiPower { s } => *s.value() == 1u32,
            _ => false,
        }
    }
}

/// Integrand value at a point, at the requested precision.
pub(crate) fn eval_integrand(spec: &IntegrandSpec, x: &Float, prec: u32) -> Float {
    let xf = Float::with_val(prec, x);
    let x2 = Float::with_val(prec, &xf * &xf);
    match spec {
        IntegrandSpec::SechFamily(c) => {
            let u = xf.sech();
            let mut num = Float::with_val(prec, 0);
            for j in 2..=c.n() {
                let cj = c.get(j);
                if cj.cmp0() == std::cmp::Ordering::Equal {
                    continue;
                }
                let uj = Float::with_val(prec, (&u).pow(j as u32));
                num += Float::with_val(prec, &u - &uj) * Float::with_val(prec, cj);
            }
            num / x2
        }
        IntegrandSpec::LogSech { n, a, b } => {
            let bx = Float::with_val(prec, b.value() * &xf);
            let sech_n = Float::with_val(prec, bx.sech().pow(*n));
            let lax = Float::with_val(prec, a.value() * &xf).ln();
            lax * sech_n
        }
        IntegrandSpec::LimitCommon { m } => {
            let u = xf.sech();
            let um = Float::with_val(prec, (&u).pow(*m));
            let denom = Float::with_val(prec, 2u32 - &u);
            let num = Float::with_val(prec, &u - &Float::with_val(prec, &um / &denom));
            num / x2
        }
        IntegrandSpec::LimitStaircase => {
            let u = xf.sech();
            let denom = Float::with_val(prec, 2u32 - &u);
            let d2 = Float::with_val(prec, &denom * &denom);
            let num = Float::with_val(prec, &u - &Float::with_val(prec, &u / &d2));
            num / x2
        }
        IntegrandSpec::ChiPower { s } => {
            let u = xf.sech();
            let us = Float::with_val(prec, (&u).pow(s.value()));
            Float::with_val(prec, &u - &us) / x2
        }
    }
}

enum Half {
    /// (0, 1], tanh-sinh: x = sigmoid(pi sinh t).
    Lower,
    /// [1, inf), exp-sinh: x = 1 + exp((pi/2) sinh t).
    Upper,
}

/// Node value w(t) f(x(t)) at parameter t.
fn node_term(spec: &IntegrandSpec, half: &Half, t: &Float, prec: u32, pi: &Float) -> Float {
    match half {
        Half::Lower => {
            let u = Float::with_val(prec, pi * &t.clone().sinh());
            // x = 1/(1+e^-u) and 1-x = 1/(1+e^u), both cancellation-free
            let x = {
                let e = Float::with_val(prec, (-u.clone()).exp());
                Float::with_val(prec, 1u32) / (e + 1u32)
            };
            let one_minus_x = {
                let e = Float::with_val(prec, u.clone().exp());
                Float::with_val(prec, 1u32) / (e + 1u32)
            };
            if x.is_zero() || one_minus_x.is_zero() {
                return Float::with_val(prec, 0);
            }
            let w = Float::with_val(prec, pi * &t.clone().cosh())
                * Float::with_val(prec, &x * &one_minus_x);
            // boost for the removable-singularity cancellation near x = 0
            let boost_digits = (-mag10(&x)).max(0) as u32 * 2;
            let eprec = prec + (boost_digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8;
            let f = eval_integrand(spec, &x, eprec);
            Float::with_val(prec, &w * &f)
        }
        Half::Upper => {
            let u = Float::with_val(prec, pi * &t.clone().sinh()) / 2u32;
            let eu = u.exp();
            if !eu.is_finite() || eu.is_zero() {
                return Float::with_val(prec, 0);
            }
            let x = Float::with_val(prec, 1u32 + &eu);
            let w = Float::with_val(prec, pi * &t.clone().cosh()) / 2u32 * &eu;
            let f = eval_integrand(spec, &x, prec);
            let term = Float::with_val(prec, &w * &f);
            if term.is_finite() {
                term
            } else {
                Float::with_val(prec, 0)
            }
        }
    }
}

/// Trapezoid sum over one half-line with level-halving refinement;
/// returns the estimate and its error exponent.
fn de_half(
    spec: &IntegrandSpec,
    half: Half,
    ctx: &PrecisionContext,
    target_abs_exp: i64,
) -> Result<(Float, i64)> {
    let prec = ctx.prec_bits() + 32;
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let cutoff_exp = target_abs_exp - 6;
    let mut nodes_used: u64 = 0;

    // scan one direction (sign = +-1) at step h, via odd multiples only when
    // `odd_only` (level refinement); j = 0 included once by the caller
    let scan = |h: &Float, sign: i32, odd_only: bool, acc: &mut Float, nodes: &mut u64| {
        let mut j: u64 = 1;
        let mut small_streak = 0u32;
        loop {
            if odd_only && j.is_multiple_of(2) {
                j += 1;
                continue;
            }
            let mut t = Float::with_val(prec, h * Float::with_val(prec, j));
            if sign < 0 {
                t = -t;
            }
            if t.to_f64().abs() > T_CAP {
                break;
            }
            let term = node_term(spec, &half, &t, prec, &pi);
            *nodes += 1;
            *acc += &term;
            let small = term.is_zero() || mag10(&term) < cutoff_exp;
            if small && t.to_f64().abs() > 3.0 {
                small_streak += 1;
                if small_streak >= 3 {
                    break;
                }
            } else {
                small_streak = 0;
            }
            j += 1;
        }
    };

    // level 0: h = 1/2
    let mut h = Float::with_val(prec, Rational::from((1, 2)));
    let mut raw = node_term(spec, &half, &Float::with_val(prec, 0), prec, &pi);
    nodes_used += 1;
    scan(&h, 1, false, &mut raw, &mut nodes_used);
    scan(&h, -1, false, &mut raw, &mut nodes_used);
    let mut estimate = Float::with_val(prec, &h * &raw);

    let mut last_diff_exp = i64::MAX;
    for _level in 1..=MAX_LEVEL {
        h /= 2u32;
        let mut odd_raw = Float::with_val(prec, 0);
        scan(&h, 1, true, &mut odd_raw, &mut nodes_used);
        scan(&h, -1, true, &mut odd_raw, &mut nodes_used);
        raw += &odd_raw;
        let new_estimate = Float::with_val(prec, &h * &raw);
        let diff = Float::with_val(prec, &new_estimate - &estimate).abs();
        estimate = new_estimate;
        last_diff_exp = if diff.is_zero() {
            crate::precision::EXACT_ERR
        } else {
            mag10(&diff)
        };
        if last_diff_exp <= target_abs_exp - 2 {
            let rounding = mag10(&estimate) - ctx.working_digits() as i64
                + (nodes_used as f64).log10().ceil() as i64
                + 2;
            let err = (last_diff_exp + 1).max(cutoff_exp + 3).max(rounding);
            return Ok((estimate, err));
        }
    }
    Err(Error::Precision {
        message: format!(
            "double-exponential rule did not converge to 10^{target_abs_exp} within {MAX_LEVEL} levels"
        ),
        best_estimate: float_to_decimal_string(&estimate, 30),
        achieved_exponent: last_diff_exp,
    })
}


/// Double-exponential quadrature of the requested integrand over (0, inf),
/// with the error bound folded into the result.
pub fn integrate(spec: &IntegrandSpec, ctx: &PrecisionContext) -> Result<HPReal> {
    spec.validate()?;
    if spec.is_identically_zero() {
        return Ok(HPReal::exact_zero(ctx));
    }
    let target_abs_exp = -(ctx.target_digits() as i64 + 3);
    let (lo, e_lo) = de_half(spec, Half::Lower, ctx, target_abs_exp)?;
    let (hi, e_hi) = de_half(spec, Half::Upper, ctx, target_abs_exp)?;
    let prec = ctx.prec_bits();
    let value = Float::with_val(prec, &lo + &hi);
    Ok(HPReal::with_error(value, e_lo.max(e_hi) + 1))
}

/// The interpolation chi(s) = int (sech x - sech^s x)/x^2 dx for real s > 0;
/// equals the integer sequence at integer s.
pub fn chi_interpolated(s: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    if s.value().cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Domain("chi is defined for s > 0".into()));
    }
    integrate(&IntegrandSpec::ChiPower { s: s.clone() }, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::agreement_digits;
    use rug::Integer;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn cvec(v: &[i64]) -> CoefficientVector {
        CoefficientVector::from_vec(v.iter().map(|&x| Integer::from(x)).collect())
    }

    #[test]
    fn trivial_zero_cases() {
        let c = ctx(30);
        let z = integrate(&IntegrandSpec::SechFamily(cvec(&[1])), &c).unwrap();
        assert!(z.value().is_zero() && z.is_exact());
        let s1 = HPReal::from_u32(1, &c);
        let z2 = chi_interpolated(&s1, &c).unwrap();
        assert!(z2.value().is_zero());
        assert!(chi_interpolated(&HPReal::exact_zero(&c), &c).is_err());
    }

    #[test]
    fn chi2_matches_closed_form() {
        let c = ctx(40);
        let q = integrate(&IntegrandSpec::SechFamily(cvec(&[0, 1])), &c).unwrap();
        let f2 = crate::closed_forms::f_seq(2, &c).unwrap().value;
        assert!(
            agreement_digits(q.value(), f2.value()) >= 40,
            "chi_2 quadrature {} vs closed {}",
            q.to_decimal_string(45),
            f2.to_decimal_string(45)
        );
        // integer-s interpolation consistency
        let s3 = HPReal::from_u32(3, &c);
        let q3 = chi_interpolated(&s3, &c).unwrap();
        let f3 = crate::closed_forms::f_seq(3, &c).unwrap().value;
        assert!(agreement_digits(q3.value(), f3.value()) >= 40);
    }

    #[test]
    fn linearity() {
        let c = ctx(30);
        let a = integrate(&IntegrandSpec::SechFamily(cvec(&[0, 3, 1])), &c).unwrap();
        let b = integrate(&IntegrandSpec::SechFamily(cvec(&[0, 1, 2])), &c).unwrap();
        let ab = integrate(&IntegrandSpec::SechFamily(cvec(&[0, 4, 3])), &c).unwrap();
        let sum = a.add(&b);
        assert!(agreement_digits(ab.value(), sum.value()) >= 29);
    }

    #[test]
    fn small_x_series_crosscheck() {
        // numerator/x^2 tends to sum (j-1) c_j / 2 as x -> 0
        let c = ctx(40);
        let coeffs = cvec(&[0, 10, 4, 1]);
        let ip = crate::nested_sums::integrand_from_coeffs(coeffs.clone());
        let spec = IntegrandSpec::SechFamily(coeffs);
        let wd = c.working_digits();
        let x = Float::with_val(c.prec_bits() * 2, 10u32).pow(-(wd as i64 / 4));
        let v = eval_integrand(&spec, &x, c.prec_bits() * 3);
        let expect = Float::with_val(c.prec_bits(), &ip.removable_coeff);
        let agree = agreement_digits(&v, &expect);
        // correction is O(x^2) = 10^-(wd/2)
        assert!(agree as u32 >= wd / 4, "agree {agree}");
    }

    #[test]
    fn self_consistency_under_refinement() {
        let c20 = ctx(20);
        let c32 = ctx(32);
        let spec = IntegrandSpec::LimitStaircase;
        let v20 = integrate(&spec, &c20).unwrap();
        let v32 = integrate(&spec, &c32).unwrap();
        let d = v20.sub(&v32);
        let bound = Float::with_val(64, 10f64).pow(v20.err_exp() as i32);
        assert!(
            d.value().clone().abs() <= bound,
            "diff {} vs bound 1e{}",
            d.value().to_f64(),
            v20.err_exp()
        );
    }

    #[test]
    fn chi_interpolation_between_integers() {
        let c = ctx(20);
        let f2 = crate::closed_forms::f_seq(2, &c).unwrap().value;
        let f3 = crate::closed_forms::f_seq(3, &c).unwrap().value;
        let mid = chi_interpolated(&HPReal::from_rational(&Rational::from((5, 2)), &c), &c).unwrap();
        assert!(f2.value() < mid.value() && mid.value() < f3.value());
        // continuity under a small perturbation of s
        let near = chi_interpolated(
            &HPReal::from_rational(&Rational::from((2_500_001, 1_000_000)), &c),
            &c,
        )
        .unwrap();
        let d = near.sub(&mid).abs();
        assert!(*d.value() < c.float_from(1e-5), "jump {}", d.value().to_f64());
    }

    #[test]
    fn log_sech_malmsten_value() {
        // M_1(1,1) = int log(x) sech(x) dx; compare against the closed form
        let c = ctx(35);
        let one = HPReal::from_u32(1, &c);
        let spec = IntegrandSpec::LogSech {
            n: 1,
            a: one.clone(),
            b: one.clone(),
        };
        let q = integrate(&spec, &c).unwrap();
        let m = crate::closed_forms::malmsten(1, &one, &one, &c).unwrap().value;
        assert!(
            agreement_digits(q.value(), m.value()) >= 35,
            "M_1(1,1): quadrature {} vs closed {}",
            q.to_decimal_string(40),
            m.to_decimal_string(40)
        );
    }
}
