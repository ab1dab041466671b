//! Arbitrary-precision special functions: gamma family, polygamma, Hurwitz
//! zeta and its s-derivative, Dirichlet beta, fundamental constants, the
//! first generalized Stieltjes constant, and the pole-cancelled difference
//! [zeta'(s,a) - zeta'(s,b)] at s = 1.
//!
//! Hurwitz zeta and everything derived from it use Euler-Maclaurin summation
//! with the split point and Bernoulli order chosen adaptively from
//! (s, a, working digits). The remainder is bounded by twice the first
//! omitted correction term; observed cancellation (largest intermediate vs.
//! result) is folded back into the working precision by a retry loop, and
//! the final bound is reported in the result's error exponent.
//!
//! The gamma function itself is MPFR's; the recurrence, reflection and
//! product cross-checks in the test suite pin it against independent routes.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::{abs_diff_exp, float_to_decimal_string, mag10, HPReal, PrecisionContext};

// ---------------------------------------------------------------------------
// Bernoulli numbers
// ---------------------------------------------------------------------------

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1), Rational::from((-1, 2))]))
}

/// Exact Bernoulli number B_n (B_1 = -1/2), via the defining recurrence
/// B_n = -1/(n+1) * sum_{j<n} C(n+1, j) B_j.
pub(crate) fn bernoulli(n: usize) -> Rational {
    let mut cache = bernoulli_cache().lock().unwrap();
    while cache.len() <= n {
        let m = cache.len();
        if m % 2 == 1 {
            cache.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        let mut binom = Integer::from(1); // C(m+1, j)
        for (j, b) in cache.iter().enumerate() {
            if j > 0 {
                binom = binom.clone() * Integer::from(m + 2 - j) / Integer::from(j);
            }
            if b.cmp0() != std::cmp::Ordering::Equal {
                acc += Rational::from(b * &binom);
            }
        }
        acc /= -Rational::from(m as u32 + 1);
        cache.push(acc);
    }
    cache[n].clone()
}

// ---------------------------------------------------------------------------
// Float-level helpers
// ---------------------------------------------------------------------------

fn fpow(base: &Float, e: &Float, prec: u32) -> Float {
    Float::with_val(prec, base.pow(e))
}

pub(crate) fn factorial_int(n: u64) -> Integer {
    let mut acc = Integer::from(1);
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Largest decimal magnitude seen among intermediates, for cancellation
/// accounting.
#[derive(Clone, Copy)]
struct MagTracker(i64);

impl MagTracker {
    fn new() -> Self {
        MagTracker(i64::MIN / 4)
    }
    fn see(&mut self, v: &Float) {
        self.0 = self.0.max(mag10(v));
    }
    fn max_mag(&self) -> i64 {
        self.0
    }
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin Hurwitz zeta and its s-derivative
// ---------------------------------------------------------------------------

struct EmOutcome {
    value: Float,
    /// |true - value| <= 10^err_exp from the tail bound alone.
    tail_exp: i64,
    /// Largest intermediate magnitude (decimal), for cancellation.
    max_mag: i64,
}

/// One Euler-Maclaurin pass at fixed parameters. `deriv` selects d/ds.
fn em_pass(s: &Float, a: &Float, n_split: u32, m_max: u32, prec: u32, deriv: bool) -> EmOutcome {
    let mut tracker = MagTracker::new();
    let neg_s = Float::with_val(prec, -s);

    // leading sum: sum_{k<N} (a+k)^(-s), or -log(a+k) weighted for d/ds
    let mut lead = Float::with_val(prec, 0);
    for k in 0..n_split {
        let base = Float::with_val(prec, a + k);
        let p = fpow(&base, &neg_s, prec);
        if deriv {
            lead -= p * base.ln();
        } else {
            lead += p;
        }
    }
    tracker.see(&lead);

    let an = Float::with_val(prec, a + n_split);
    let log_an = an.clone().ln();
    let s_minus_1 = Float::with_val(prec, s - 1u32);
    let an_pow_neg_s = fpow(&an, &neg_s, prec);
    let an_pow_1ms = Float::with_val(prec, &an_pow_neg_s * &an);

    // (a+N)^(1-s)/(s-1) and (a+N)^(-s)/2
    let t1;
    let t2;
    if deriv {
        // d/ds (a+N)^(1-s)/(s-1) = (a+N)^(1-s) [-L/(s-1) - 1/(s-1)^2]
        let inv = Float::with_val(prec, 1u32) / &s_minus_1;
        let inner = -Float::with_val(prec, &log_an * &inv) - Float::with_val(prec, &inv * &inv);
        t1 = an_pow_1ms.clone() * inner;
        t2 = -Float::with_val(prec, &log_an * &an_pow_neg_s) / 2u32;
    } else {
        t1 = an_pow_1ms.clone() / &s_minus_1;
        t2 = an_pow_neg_s.clone() / 2u32;
    }
    tracker.see(&t1);
    tracker.see(&t2);

    // Bernoulli corrections: term_j = B_2j/(2j)! (s)_{2j-1} (a+N)^(1-s-2j)
    let mut corr = Float::with_val(prec, 0);
    let inv_an2 = Float::with_val(prec, 1u32) / Float::with_val(prec, &an * &an);
    let mut pw = Float::with_val(prec, &an_pow_1ms * &inv_an2); // (a+N)^(1-s-2j), j=1
    let mut rising = s.clone(); // (s)_{2j-1}
    let mut rising_d = Float::with_val(prec, 1u32); // d/ds of the same
    let mut fact = Integer::from(2); // (2j)!
    let mut last_abs: Option<Float> = None;
    let mut tail = Float::with_val(prec, 0);
    let mut grew = 0u32;
    for j in 1..=m_max {
        if j > 1 {
            // extend rising factorial by (s+2j-3)(s+2j-2)
            for add in [2 * j - 3, 2 * j - 2] {
                let factor = Float::with_val(prec, s + add);
                rising_d = Float::with_val(prec, &rising_d * &factor) + &rising;
                rising = Float::with_val(prec, &rising * &factor);
            }
            pw *= &inv_an2;
            fact *= 2 * j - 1;
            fact *= 2 * j;
        }
        let b = Float::with_val(prec, bernoulli(2 * j as usize)) / Float::with_val(prec, &fact);
        let term = if deriv {
            let bracket =
                Float::with_val(prec, &rising_d - &Float::with_val(prec, &rising * &log_an));
            Float::with_val(prec, &b * &pw) * bracket
        } else {
            Float::with_val(prec, &b * &pw) * &rising
        };
        let t_abs = term.clone().abs();
        tracker.see(&term);
        // stop once the terms stop improving: remainder is bounded by the
        // first omitted term (policy factor 2)
        if let Some(prev) = &last_abs {
            if t_abs > *prev {
                grew += 1;
                if grew >= 2 {
                    tail = prev.clone();
                    break;
                }
            } else {
                grew = 0;
            }
        }
        corr += &term;
        tail = t_abs.clone();
        if t_abs.is_zero() {
            break;
        }
        last_abs = Some(t_abs);
    }

    let value = Float::with_val(prec, &lead + &t1) + Float::with_val(prec, &t2 + &corr);
    let tail_exp = if tail.is_zero() {
        crate::precision::EXACT_ERR
    } else {
        mag10(&tail) + 1 // = log10(2 * tail), policy margin
    };
    EmOutcome {
        value,
        tail_exp,
        max_mag: tracker.max_mag(),
    }
}

/// Adaptive Euler-Maclaurin driver shared by zeta and zeta'. Tries to push
/// the total bound (tail + rounding at observed cancellation) below
/// `want_exp` relative to the result, retrying with larger parameters.
fn em_adaptive(s: &Float, a: &Float, wd: u32, deriv: bool) -> Result<(Float, i64)> {
    let sig = s.to_f64();
    let a64 = a.to_f64();
    // initial split: far enough out that the Bernoulli series decays by ~1/16
    // per term before reaching the working-digit budget
    let mut m_max = (0.95 * wd as f64) as u32 + 6;
    let mut n_split = {
        let need = (4.0 * (sig.abs() + 2.0 * m_max as f64)) / (2.0 * std::f64::consts::PI) - a64;
        need.max(10.0).ceil() as u32
    };
    // negative s: the leading sum grows like (a+N)^|s|, all of which cancels
    let mut extra_digits: u32 = if sig < 0.0 {
        ((-sig) * (a64 + n_split as f64).log10()).ceil() as u32 + 8
    } else {
        0
    };

    let mut best: Option<(Float, i64)> = None;
    for _attempt in 0..4 {
        let prec = precision_bits(wd + extra_digits);
        let sp = Float::with_val(prec, s);
        let ap = Float::with_val(prec, a);
        let out = em_pass(&sp, &ap, n_split, m_max, prec, deriv);
        // rounding floor: cancellation eats (max_mag - result_mag) digits
        let rounding_exp = out.max_mag - (wd + extra_digits) as i64 + 2;
        let err = out.tail_exp.max(rounding_exp);
        // accuracy goal: wd digits relative to the value, or absolute
        // 10^-wd when the true value sits at or below zero magnitude
        // (trivial zeros of the continuation leave pure rounding noise)
        let vmag = if out.value.is_zero() {
            0
        } else {
            mag10(&out.value)
        };
        let achieved_ok = err <= vmag.max(0) - wd as i64 + guard_slack(wd);
        let improved = best.as_ref().is_none_or(|(_, be)| err < *be);
        if improved {
            best = Some((out.value.clone(), err));
        }
        if achieved_ok {
            let rounded = Float::with_val(precision_bits(wd), &out.value);
            return Ok((rounded, err));
        }
        // grow whichever budget was the binding constraint
        if out.tail_exp >= rounding_exp {
            m_max = m_max * 3 / 2 + 8;
            n_split = n_split * 3 / 2 + 16;
        }
        let deficit = (err.saturating_sub(vmag.max(0) - wd as i64)).clamp(8, 1 << 20) as u32;
        extra_digits = extra_digits.saturating_add(deficit + 8);
    }
    let (v, e) = best.unwrap();
    Err(Error::Precision {
        message: format!(
            "Euler-Maclaurin did not reach {wd} digits for s={}, a={}",
            s.to_f64(),
            a.to_f64()
        ),
        best_estimate: float_to_decimal_string(&v, 30),
        achieved_exponent: e,
    })
}

/// Digits of slack allowed before a retry is considered necessary.
fn guard_slack(wd: u32) -> i64 {
    (wd / 10).max(3) as i64
}

fn precision_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

/// Hurwitz zeta at float level. `wd` is the number of decimal digits the
/// result should be good to (relative to its own magnitude).
pub(crate) fn hurwitz_zeta_f(s: &Float, a: &Float, wd: u32) -> Result<(Float, i64)> {
    em_adaptive(s, a, wd, false)
}

/// d/ds of Hurwitz zeta at float level.
pub(crate) fn hurwitz_zeta_sderiv_f(s: &Float, a: &Float, wd: u32) -> Result<(Float, i64)> {
    em_adaptive(s, a, wd, true)
}

fn check_not_pole(s: &Float, ctx: &PrecisionContext) -> Result<()> {
    let d = Float::with_val(s.prec(), s - 1u32).abs();
    let guard = -(ctx.working_digits() as i64) / 2;
    if d.is_zero() || mag10(&d) <= guard {
        return Err(Error::Domain(format!(
            "s = {} is within 10^{guard} of the pole at s = 1; use zeta_prime_diff or \
             stieltjes_gamma1 for pole-cancelled values",
            s.to_f64()
        )));
    }
    Ok(())
}

fn check_positive(name: &str, x: &Float) -> Result<()> {
    if !x.is_finite() || x.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Domain(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

/// Hurwitz zeta zeta(s, a) for real s (away from s = 1) and a > 0.
pub fn hurwitz_zeta(s: &HPReal, a: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    check_positive("a", a.value())?;
    check_not_pole(s.value(), ctx)?;
    let (v, e) = hurwitz_zeta_f(s.value(), a.value(), ctx.working_digits())?;
    Ok(HPReal::with_error(v, e))
}

/// d/ds zeta(s, a).
pub fn hurwitz_zeta_sderiv(s: &HPReal, a: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    check_positive("a", a.value())?;
    check_not_pole(s.value(), ctx)?;
    let (v, e) = hurwitz_zeta_sderiv_f(s.value(), a.value(), ctx.working_digits())?;
    Ok(HPReal::with_error(v, e))
}

/// Riemann zeta as the a = 1 case.
pub fn riemann_zeta(s: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    let one = HPReal::from_u32(1, ctx);
    hurwitz_zeta(s, &one, ctx)
}

// ---------------------------------------------------------------------------
// Digamma / polygamma
// ---------------------------------------------------------------------------

/// Euler-Maclaurin digamma for x > 0:
/// psi(x) = ln(x+N) - 1/(2(x+N)) - sum_{k<N} 1/(x+k) - sum_j B_2j/(2j) (x+N)^(-2j).
pub(crate) fn digamma_f(x: &Float, wd: u32) -> Result<(Float, i64)> {
    let prec = precision_bits(wd + 8);
    let xp = Float::with_val(prec, x);
    let m_max = (0.9 * wd as f64) as u32 + 4;
    let n_split = {
        let need = (4.0 * 2.0 * m_max as f64) / (2.0 * std::f64::consts::PI) - x.to_f64();
        need.max(10.0).ceil() as u32
    };
    let mut recip = Float::with_val(prec, 0);
    for k in 0..n_split {
        recip += Float::with_val(prec, 1u32) / Float::with_val(prec, &xp + k);
    }
    let xn = Float::with_val(prec, &xp + n_split);
    let mut value = xn.clone().ln() - Float::with_val(prec, 1u32) / Float::with_val(prec, 2 * &xn)
        - recip;
    let inv_xn2 = Float::with_val(prec, 1u32) / Float::with_val(prec, &xn * &xn);
    let mut pw = inv_xn2.clone();
    let mut tail = Float::with_val(prec, 0);
    for j in 1..=m_max {
        if j > 1 {
            pw *= &inv_xn2;
        }
        let term = Float::with_val(prec, bernoulli(2 * j as usize))
            / Float::with_val(prec, 2 * j)
            * &pw;
        value -= &term;
        tail = term.abs();
        if tail.is_zero() {
            break;
        }
    }
    let tail_exp = if tail.is_zero() {
        crate::precision::EXACT_ERR
    } else {
        mag10(&tail) + 1
    };
    Ok((value, tail_exp))
}

/// Polygamma psi_nu at float level; x may be negative non-integer, in which
/// case the value is reached by the downward recurrence from positive ground.
pub(crate) fn polygamma_f(nu: u32, x: &Float, wd: u32) -> Result<(Float, i64)> {
    let prec = precision_bits(wd + 8);
    let xp = Float::with_val(prec, x);
    if xp.cmp0() == Some(std::cmp::Ordering::Greater) {
        return polygamma_positive(nu, &xp, wd);
    }
    // shift: psi_nu(z) = psi_nu(z+K) - (-1)^nu nu! sum_{i<K} (z+i)^-(nu+1)
    let k_shift = (-x.to_f64()).ceil() as u32 + 1;
    let ground = Float::with_val(prec, &xp + k_shift);
    let (base, base_err) = polygamma_positive(nu, &ground, wd)?;
    let mut sum = Float::with_val(prec, 0);
    let mut max_mag = i64::MIN / 4;
    for i in 0..k_shift {
        let t = Float::with_val(prec, &xp + i).pow(-(nu as i32) - 1);
        max_mag = max_mag.max(mag10(&t));
        sum += t;
    }
    let nu_fact = Float::with_val(prec, factorial_int(nu as u64));
    let mut corr = Float::with_val(prec, &nu_fact * &sum);
    if nu % 2 == 1 {
        corr = -corr;
    }
    let value = Float::with_val(prec, &base - &corr);
    let rounding = max_mag + mag10(&nu_fact) - (wd as i64) + 2;
    Ok((value, base_err.max(rounding)))
}

fn polygamma_positive(nu: u32, x: &Float, wd: u32) -> Result<(Float, i64)> {
    if nu == 0 {
        return digamma_f(x, wd);
    }
    // psi_nu(x) = (-1)^(nu+1) nu! zeta(nu+1, x)
    let prec = precision_bits(wd + 8);
    let s = Float::with_val(prec, nu + 1);
    let (z, ze) = hurwitz_zeta_f(&s, x, wd + 4)?;
    let nu_fact = Float::with_val(prec, factorial_int(nu as u64));
    let mut value = Float::with_val(prec, &z * &nu_fact);
    if nu.is_multiple_of(2) {
        value = -value;
    }
    Ok((value.clone(), ze + mag10(&nu_fact) + 1))
}

/// Polygamma psi_nu(x) for x > 0 (psi_0 = digamma).
pub fn polygamma(nu: u32, x: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    check_positive("x", x.value())?;
    if nu > 64 {
        return Err(Error::Capacity(format!(
            "polygamma order {nu} exceeds the configured bound 64"
        )));
    }
    let (v, e) = polygamma_f(nu, x.value(), ctx.working_digits())?;
    Ok(HPReal::with_error(v, e))
}

// ---------------------------------------------------------------------------
// Gamma family (MPFR-backed)
// ---------------------------------------------------------------------------

/// Gamma function; rejects arguments within guard distance of a pole.
pub fn gamma_hp(x: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    let xv = x.value();
    if xv.cmp0() != Some(std::cmp::Ordering::Greater) {
        let nearest = xv.clone().round();
        let d = Float::with_val(xv.prec(), xv - &nearest).abs();
        let guard = -(ctx.working_digits() as i64) / 2;
        if nearest.cmp0() != Some(std::cmp::Ordering::Greater)
            && (d.is_zero() || mag10(&d) <= guard)
        {
            return Err(Error::Domain(format!(
                "gamma pole: x = {} is within 10^{guard} of a nonpositive integer",
                xv.to_f64()
            )));
        }
    }
    let v = Float::with_val(ctx.prec_bits(), xv).gamma();
    Ok(HPReal::from_float(v))
}

/// log Gamma for x > 0.
pub fn log_gamma(x: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    check_positive("x", x.value())?;
    let v = Float::with_val(ctx.prec_bits(), x.value()).ln_gamma();
    Ok(HPReal::from_float(v))
}

// ---------------------------------------------------------------------------
// Constants (dual-route cross-checked, cached per precision)
// ---------------------------------------------------------------------------

/// The fundamental constants used by the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantName {
    Pi,
    EulerGamma,
    CatalanG,
    Log2,
}

fn constant_cache() -> &'static Mutex<HashMap<(ConstantName, u32), Float>> {
    static CACHE: OnceLock<Mutex<HashMap<(ConstantName, u32), Float>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// arctan(1/q) by the Taylor series, alternating-tail bound.
fn atan_recip_series(q: u32, prec: u32, wd: u32) -> Float {
    let qq = Float::with_val(prec, q);
    let inv_q2 = Float::with_val(prec, 1u32) / Float::with_val(prec, &qq * &qq);
    let mut pw = Float::with_val(prec, 1u32) / &qq; // q^-(2k+1)
    let mut acc = Float::with_val(prec, 0);
    let cutoff = -(wd as i64) - 6;
    let mut k = 0u32;
    loop {
        let term = Float::with_val(prec, &pw / Float::with_val(prec, 2 * k + 1));
        if k.is_multiple_of(2) {
            acc += &term;
        } else {
            acc -= &term;
        }
        if mag10(&term) < cutoff {
            break;
        }
        pw *= &inv_q2;
        k += 1;
    }
    acc
}

/// Independent route for each constant (series or this crate's own
/// Euler-Maclaurin engine), used to cross-check the MPFR value.
fn constant_independent(name: ConstantName, prec: u32, wd: u32) -> Float {
    match name {
        ConstantName::Pi => {
            // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
            let a = atan_recip_series(5, prec, wd);
            let b = atan_recip_series(239, prec, wd);
            Float::with_val(prec, 16u32 * &a) - Float::with_val(prec, 4u32 * &b)
        }
        ConstantName::EulerGamma => {
            let one = Float::with_val(prec, 1u32);
            let (d, _) = digamma_f(&one, wd + 6).expect("digamma(1)");
            -d
        }
        ConstantName::CatalanG => {
            // G = beta(2) = [zeta(2,1/4) - zeta(2,3/4)] / 16
            let s = Float::with_val(prec, 2u32);
            let a = Float::with_val(prec, Rational::from((1, 4)));
            let b = Float::with_val(prec, Rational::from((3, 4)));
            let (za, _) = hurwitz_zeta_f(&s, &a, wd + 6).expect("zeta(2,1/4)");
            let (zb, _) = hurwitz_zeta_f(&s, &b, wd + 6).expect("zeta(2,3/4)");
            Float::with_val(prec, &za - &zb) / 16u32
        }
        ConstantName::Log2 => {
            // ln 2 = 2 atanh(1/3) = 2 sum_k 3^-(2k+1)/(2k+1)
            let inv9 = Float::with_val(prec, Rational::from((1, 9)));
            let mut pw = Float::with_val(prec, Rational::from((1, 3)));
            let mut acc = Float::with_val(prec, 0);
            let cutoff = -(wd as i64) - 6;
            let mut k = 0u32;
            loop {
                let term = Float::with_val(prec, &pw / Float::with_val(prec, 2 * k + 1));
                acc += &term;
                if mag10(&term) < cutoff {
                    break;
                }
                pw *= &inv9;
                k += 1;
            }
            acc * 2u32
        }
    }
}

/// A fundamental constant at working precision, cross-checked on first use
/// against an independent algorithm and cached per (name, precision).
pub fn constant(name: ConstantName, ctx: &PrecisionContext) -> HPReal {
    let prec = ctx.prec_bits();
    if let Some(v) = constant_cache().lock().unwrap().get(&(name, prec)) {
        return HPReal::from_float(v.clone());
    }
    let primary = match name {
        ConstantName::Pi => Float::with_val(prec, Constant::Pi),
        ConstantName::EulerGamma => Float::with_val(prec, Constant::Euler),
        ConstantName::CatalanG => Float::with_val(prec, Constant::Catalan),
        ConstantName::Log2 => Float::with_val(prec, Constant::Log2),
    };
    let wd = ctx.working_digits();
    let check = constant_independent(name, prec + 16, wd);
    let agree = -abs_diff_exp(&primary, &check);
    assert!(
        agree >= wd as i64 - 3,
        "constant {:?} cross-check failed: routes agree to only {} digits at {} working",
        name,
        agree,
        wd
    );
    constant_cache()
        .lock()
        .unwrap()
        .insert((name, prec), primary.clone());
    HPReal::from_float(primary)
}

// ---------------------------------------------------------------------------
// Dirichlet beta
// ---------------------------------------------------------------------------

/// Dirichlet beta via beta(s) = 4^(-s) [zeta(s,1/4) - zeta(s,3/4)];
/// at s = 1 the pole-cancelled value (psi(3/4) - psi(1/4))/4 is used.
pub fn dirichlet_beta(s: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    let prec = ctx.prec_bits();
    let sv = Float::with_val(prec, s.value());
    let one = Float::with_val(prec, 1u32);
    if sv == one {
        let q14 = Float::with_val(prec, Rational::from((1, 4)));
        let q34 = Float::with_val(prec, Rational::from((3, 4)));
        let (pa, ea) = digamma_f(&q34, ctx.working_digits())?;
        let (pb, eb) = digamma_f(&q14, ctx.working_digits())?;
        let v = Float::with_val(prec, &pa - &pb) / 4u32;
        return Ok(HPReal::with_error(v, ea.max(eb) + 1));
    }
    // near the pole both zetas blow up ~ 1/(s-1) while the difference stays
    // O(1): boost by the cancellation depth
    let d = Float::with_val(prec, &sv - &one).abs();
    let boost = (-mag10(&d)).clamp(0, 2 * ctx.working_digits() as i64) as u32 + 2;
    let wd = ctx.working_digits() + boost;
    let q14 = Float::with_val(precision_bits(wd), Rational::from((1, 4)));
    let q34 = Float::with_val(precision_bits(wd), Rational::from((3, 4)));
    let (za, ea) = hurwitz_zeta_f(&sv, &q14, wd)?;
    let (zb, eb) = hurwitz_zeta_f(&sv, &q34, wd)?;
    let diff = Float::with_val(precision_bits(wd), &za - &zb);
    let four_pow = fpow(
        &Float::with_val(precision_bits(wd), 4u32),
        &Float::with_val(precision_bits(wd), -&sv),
        precision_bits(wd),
    );
    let v = Float::with_val(prec, &diff * &four_pow);
    let err = ea.max(eb).saturating_add(mag10(&four_pow)).saturating_add(1);
    Ok(HPReal::with_error(v, err))
}

// ---------------------------------------------------------------------------
// Stieltjes gamma_1 and the pole-cancelled zeta' difference
// ---------------------------------------------------------------------------

/// gamma_1(a) by the analytically differentiated Euler-Maclaurin limit:
/// gamma_1(a) = sum_{k<N} ln(a+k)/(a+k) - L^2/2 + L/(2(a+N))
///            - sum_j B_2j/(2j) (a+N)^(-2j) (H_{2j-1} - L),   L = ln(a+N).
fn stieltjes_gamma1_em(a: &Float, wd: u32) -> Result<(Float, i64)> {
    let prec = precision_bits(wd + 10);
    let ap = Float::with_val(prec, a);
    let m_max = (0.9 * wd as f64) as u32 + 4;
    let n_split = {
        let need = (8.0 * m_max as f64) / (2.0 * std::f64::consts::PI) - a.to_f64();
        need.max(10.0).ceil() as u32
    };
    let mut lead = Float::with_val(prec, 0);
    for k in 0..n_split {
        let base = Float::with_val(prec, &ap + k);
        lead += base.clone().ln() / &base;
    }
    let an = Float::with_val(prec, &ap + n_split);
    let log_an = an.clone().ln();
    let mut value = lead - Float::with_val(prec, &log_an * &log_an) / 2u32
        + Float::with_val(prec, &log_an / Float::with_val(prec, 2u32 * &an));
    let inv_an2 = Float::with_val(prec, 1u32) / Float::with_val(prec, &an * &an);
    let mut pw = inv_an2.clone();
    let mut harmonic = Float::with_val(prec, 1u32); // H_{2j-1}
    let mut tail = Float::with_val(prec, 0);
    for j in 1..=m_max {
        if j > 1 {
            for add in [2 * j - 2, 2 * j - 1] {
                harmonic += Float::with_val(prec, 1u32) / Float::with_val(prec, add);
            }
            pw *= &inv_an2;
        }
        let term = Float::with_val(prec, bernoulli(2 * j as usize))
            / Float::with_val(prec, 2 * j)
            * &pw
            * Float::with_val(prec, &harmonic - &log_an);
        value -= &term;
        tail = term.abs();
        if tail.is_zero() {
            break;
        }
    }
    let tail_exp = if tail.is_zero() {
        crate::precision::EXACT_ERR
    } else {
        mag10(&tail) + 1
    };
    Ok((value, tail_exp))
}

/// gamma_1(a) by Richardson extrapolation of zeta'(s,a) + 1/(s-1)^2 toward
/// s = 1 (the dual-route check for the Euler-Maclaurin limit formula).
fn stieltjes_gamma1_richardson(a: &Float, wd: u32) -> Result<(Float, i64)> {
    // g(s) = zeta'(s,a) + (s-1)^-2 = -gamma_1 + gamma_2 (s-1) - ...
    // symmetric average kills odd orders; one Richardson level kills h^2.
    let q = (wd as i64 + 9) / 4 + 1;
    let pbits = (q as f64 * std::f64::consts::LOG2_10).ceil() as i32 + 4;
    let boost = (2 * q) as u32 + 10;
    let wdb = wd + boost;
    let prec = precision_bits(wdb);
    let ap = Float::with_val(prec, a);
    let g_sym = |p: i32| -> Result<Float> {
        // h = 2^-p is exactly representable; the 1/(s-1)^2 cancellation is
        // then exact in binary
        let h = Float::with_val(prec, Float::i_exp(1, -p));
        let inv_h2 = Float::with_val(prec, Float::i_exp(1, 2 * p));
        let sp = Float::with_val(prec, 1u32 + &h);
        let sm = Float::with_val(prec, 1u32 - &h);
        let (zp, _) = hurwitz_zeta_sderiv_f(&sp, &ap, wdb)?;
        let (zm, _) = hurwitz_zeta_sderiv_f(&sm, &ap, wdb)?;
        let gp = Float::with_val(prec, &zp + &inv_h2);
        let gm = Float::with_val(prec, &zm + &inv_h2);
        Ok(Float::with_val(prec, &gp + &gm) / 2u32)
    };
    let g1 = g_sym(pbits)?;
    let g2 = g_sym(pbits + 1)?;
    // eliminate h^2: (4 g(h/2) - g(h)) / 3
    let r = (Float::with_val(prec, 4u32 * &g2) - &g1) / 3u32;
    let value = -r;
    // error ~ h^4 plus the boosted rounding floor
    let err = (-4 * q + 2).max(-(wdb as i64) + 4);
    Ok((value, err))
}

/// First generalized Stieltjes constant gamma_1(a), dual-method checked.
pub fn stieltjes_gamma1(a: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    check_positive("a", a.value())?;
    let wd = ctx.working_digits();
    let (em, em_err) = stieltjes_gamma1_em(a.value(), wd)?;
    let (ri, _) = stieltjes_gamma1_richardson(a.value(), wd.min(ctx.target_digits() + 10))?;
    let agree = -abs_diff_exp(&em, &ri);
    let need = ctx.target_digits() as i64 - 5;
    if agree < need {
        return Err(Error::Precision {
            message: format!(
                "stieltjes_gamma1({}) cross-check: methods agree to {agree} digits, need {need}",
                a.value().to_f64()
            ),
            best_estimate: float_to_decimal_string(&em, 30),
            achieved_exponent: -agree,
        });
    }
    Ok(HPReal::with_error(
        Float::with_val(ctx.prec_bits(), &em),
        em_err,
    ))
}

/// zeta'(s,a) - zeta'(s,b): plain difference away from s = 1, and the
/// pole-cancelled value -gamma_1(a) + gamma_1(b) exactly at s = 1.
pub fn zeta_prime_diff(
    s: &HPReal,
    a: &HPReal,
    b: &HPReal,
    ctx: &PrecisionContext,
) -> Result<HPReal> {
    check_positive("a", a.value())?;
    check_positive("b", b.value())?;
    let prec = ctx.prec_bits();
    let sv = Float::with_val(prec, s.value());
    if sv == 1u32 {
        if a.value() == b.value() {
            return Ok(HPReal::exact_zero(ctx));
        }
        let ga = stieltjes_gamma1(a, ctx)?;
        let gb = stieltjes_gamma1(b, ctx)?;
        return Ok(gb.sub(&ga));
    }
    // individual values grow like (s-1)^-2 while the difference is O(1)
    let d = Float::with_val(prec, &sv - 1u32).abs();
    let boost = (-2 * mag10(&d)).clamp(0, 4 * ctx.working_digits() as i64) as u32 + 4;
    let wdb = ctx.working_digits() + boost;
    let (za, ea) = hurwitz_zeta_sderiv_f(&sv, a.value(), wdb)?;
    let (zb, eb) = hurwitz_zeta_sderiv_f(&sv, b.value(), wdb)?;
    let v = Float::with_val(prec, &za - &zb);
    Ok(HPReal::with_error(v, ea.max(eb) + 1))
}

/// Closed form for the pole-cancelled half-shift difference at s = 1:
/// lim_{s->1} [zeta'(s, m/2) - zeta'(s, (m+1)/2)]
///   = -ln2 [psi(m/2) - psi((m+1)/2)] + (-1)^m (ln^2 2 - 2 gamma ln 2)
///     + 2 (-1)^m sum_{r=1}^{m-1} (-1)^r ln(r)/r.
///
/// The m = 1 sum is empty, which makes the textbook (1 - delta_{m,1})
/// guard redundant.
pub fn half_shift_zeta_prime_formula(m: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    if m == 0 {
        return Err(Error::Domain("half-shift formula needs m >= 1".into()));
    }
    let prec = ctx.prec_bits();
    let wd = ctx.working_digits();
    let ln2 = constant(ConstantName::Log2, ctx);
    let gamma = constant(ConstantName::EulerGamma, ctx);
    let half_m = Float::with_val(prec, Rational::from((m, 2)));
    let half_m1 = Float::with_val(prec, Rational::from((m + 1, 2)));
    let (pa, ea) = digamma_f(&half_m, wd)?;
    let (pb, eb) = digamma_f(&half_m1, wd)?;
    let psi_diff = Float::with_val(prec, &pa - &pb);
    let mut v = -Float::with_val(prec, ln2.value() * &psi_diff);
    let sign = if m.is_multiple_of(2) { 1i32 } else { -1i32 };
    let ln2sq = Float::with_val(prec, ln2.value() * ln2.value());
    let two_gamma_ln2 =
        Float::with_val(prec, 2u32 * gamma.value()) * Float::with_val(prec, ln2.value());
    v += Float::with_val(prec, &ln2sq - &two_gamma_ln2) * sign;
    let mut alt = Float::with_val(prec, 0);
    for r in 1..m {
        let t = Float::with_val(prec, r).ln() / Float::with_val(prec, r);
        if r % 2 == 0 {
            alt += t;
        } else {
            alt -= t;
        }
    }
    v += Float::with_val(prec, 2 * sign) * alt;
    Ok(HPReal::with_error(v, ea.max(eb) + 2))
}
