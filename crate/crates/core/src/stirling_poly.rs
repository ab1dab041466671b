//! Signed generalized Stirling polynomials P_k(m, x) and the identities
//! built on them.
//!
//! The polynomials are the coefficients in the expansion of the rising
//! factorial: (j+1)_m = sum_k (-1)^k P_k(m,x) (j+x)^(m-k). Equivalently,
//! with y = j + x,
//!
//!   prod_{i=1..m} (y + i - x) = sum_k (-1)^k P_k(m,x) y^(m-k),
//!
//! so P_k(m,x) = e_k(x-1, ..., x-m). Four independent constructions are
//! provided (explicit Stirling-number formula, product expansion, the
//! one-step recurrence, Newton's identities) and must agree coefficient
//! for coefficient. Everything exact is done in rational arithmetic.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::combinatorics::{binomial, e_from_p, partitions, r_stirling1, stirling1};
use crate::error::{Error, Result};
use crate::precision::{abs_diff_exp, mag10, HPReal, PrecisionContext};
use crate::rational::RationalPolynomial;
use crate::special_functions::polygamma_f;

/// Family-size cap for the explicit/product/step constructions.
pub const P_FAMILY_BOUND: usize = 200;
/// Cap for the Newton construction (power-sum polynomials get bulky).
pub const P_FAMILY_NEWTON_BOUND: usize = 120;

/// How a [`PFamily`] was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// Explicit double-indexed Stirling-number formula.
    Explicit,
    /// Expansion of the defining product in y.
    Product,
    /// One-step recurrence P_k(m) = P_k(m-1) + (x-m) P_{k-1}(m-1).
    Step,
    /// Newton's identities from the power sums sum_s (s-x)^r.
    Newton,
}

/// The full family P_0(m,x), ..., P_m(m,x) as exact polynomials in x.
#[derive(Debug, Clone)]
pub struct PFamily {
    m: usize,
    polys: Vec<RationalPolynomial>,
    method: Construction,
}

impl PFamily {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn method(&self) -> Construction {
        self.method
    }

    /// P_k(m, x) as a polynomial; k must be in 0..=m.
    pub fn poly(&self, k: usize) -> &RationalPolynomial {
        &self.polys[k]
    }

    pub fn polys(&self) -> &[RationalPolynomial] {
        &self.polys
    }
}

/// Build the family of exact polynomials by the requested construction.
pub fn p_family(m: usize, method: Construction) -> Result<PFamily> {
    let bound = match method {
        Construction::Newton => P_FAMILY_NEWTON_BOUND,
        _ => P_FAMILY_BOUND,
    };
    if m > bound {
        return Err(Error::Capacity(format!(
            "p_family m = {m} exceeds the configured bound {bound} for {method:?}"
        )));
    }
    let polys = match method {
        Construction::Explicit => build_explicit(m),
        Construction::Product => build_product(m),
        Construction::Step => build_step(m),
        Construction::Newton => build_newton(m),
    };
    Ok(PFamily { m, polys, method })
}

fn build_explicit(m: usize) -> Vec<RationalPolynomial> {
    let mut out = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let mut coeffs = Vec::with_capacity(k + 1);
        for r in 0..=k {
            let c = binomial((r + m - k) as u64, (m - k) as i64)
                * stirling1((m + 1) as u64, (r + m - k + 1) as i64);
            let signed = if (r + k) % 2 == 0 { c } else { -c };
            coeffs.push(Rational::from(signed));
        }
        out.push(RationalPolynomial::from_coeffs(coeffs));
    }
    out
}

fn build_product(m: usize) -> Vec<RationalPolynomial> {
    // q[j] = coefficient of y^j in prod_{i=1..m} (y + i - x)
    let mut q = vec![RationalPolynomial::one()];
    for i in 1..=m {
        let lin = RationalPolynomial::from_coeffs(vec![
            Rational::from(i as u32),
            Rational::from(-1),
        ]);
        let mut next = vec![RationalPolynomial::zero(); q.len() + 1];
        for (j, c) in q.iter().enumerate() {
            next[j + 1] = next[j + 1].add(c);
            next[j] = next[j].add(&c.mul(&lin));
        }
        q = next;
    }
    (0..=m)
        .map(|k| {
            let c = &q[m - k];
            if k % 2 == 0 {
                c.clone()
            } else {
                c.neg()
            }
        })
        .collect()
}

fn build_step(m: usize) -> Vec<RationalPolynomial> {
    let mut row = vec![RationalPolynomial::one()];
    for i in 1..=m {
        let lin = RationalPolynomial::from_coeffs(vec![
            Rational::from(-(i as i64)),
            Rational::from(1),
        ]); // x - i
        let mut next = Vec::with_capacity(i + 1);
        for k in 0..=i {
            let mut p = if k < row.len() {
                row[k].clone()
            } else {
                RationalPolynomial::zero()
            };
            if k >= 1 {
                p = p.add(&lin.mul(&row[k - 1]));
            }
            next.push(p);
        }
        row = next;
    }
    row
}

fn build_newton(m: usize) -> Vec<RationalPolynomial> {
    // power sums of integers: s_t = sum_{s=1..m} s^t, t = 0..m
    let mut int_pows = Vec::with_capacity(m + 1);
    for t in 0..=m {
        let mut acc = Integer::new();
        for s in 1..=m {
            acc += Integer::from(s).pow(t as u32);
        }
        int_pows.push(acc);
    }
    // p_r(x) = sum_s (s - x)^r = sum_i (-1)^i C(r,i) s_{r-i} x^i
    let mut psums = Vec::with_capacity(m);
    for r in 1..=m {
        let mut coeffs = Vec::with_capacity(r + 1);
        for i in 0..=r {
            let c = binomial(r as u64, i as i64) * &int_pows[r - i];
            coeffs.push(if i % 2 == 0 {
                Rational::from(c)
            } else {
                Rational::from(-c)
            });
        }
        psums.push(RationalPolynomial::from_coeffs(coeffs));
    }
    // k P_k = - sum_{r=1..k} p_r P_{k-r}
    let mut out = vec![RationalPolynomial::one()];
    for k in 1..=m {
        let mut acc = RationalPolynomial::zero();
        for r in 1..=k {
            acc = acc.add(&psums[r - 1].mul(&out[k - r]));
        }
        out.push(acc.neg().div_int(k as u32));
    }
    out
}

/// All of P_0(m,x0), ..., P_m(m,x0) at an exact rational point, by
/// expanding the defining product with numeric coefficients.
pub fn p_eval_row(m: usize, x: &Rational) -> Vec<Rational> {
    let mut q = vec![Rational::from(1)]; // coefficients in y
    for i in 1..=m {
        let shift = Rational::from(i as u32) - x.clone(); // i - x
        let mut next = vec![Rational::new(); q.len() + 1];
        for (j, c) in q.iter().enumerate() {
            next[j + 1] += c;
            next[j] += Rational::from(c * &shift);
        }
        q = next;
    }
    (0..=m)
        .map(|k| {
            let v = q[m - k].clone();
            if k % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}

/// Exact value P_k(m, x) for rational x.
pub fn p_eval(k: usize, m: usize, x: &Rational) -> Result<Rational> {
    if k > m {
        return Err(Error::Domain(format!(
            "p_eval index k = {k} outside 0..={m}"
        )));
    }
    Ok(p_eval_row(m, x).swap_remove(k))
}

/// Gamma-polygamma evaluation of P_{M-s}(M, x) by two special-function
/// routes, cross-checked against each other.
///
/// Route A: prod_{r<=M} (x-r) times e_s of the reciprocals, with the
/// power sums taken directly as finite sums. Route B: Gamma(x)/Gamma(x-M)
/// times the partition sum over polygamma differences. Both must agree to
/// target precision; the returned value is route B's.
pub fn near_diagonal_gamma(
    m_upper: usize,
    s: usize,
    x: &HPReal,
    ctx: &PrecisionContext,
) -> Result<HPReal> {
    if s > m_upper || m_upper < 1 {
        return Err(Error::Domain(format!(
            "near_diagonal_gamma needs 0 <= s <= M with M >= 1, got M={m_upper}, s={s}"
        )));
    }
    let prec = ctx.prec_bits();
    let xv = Float::with_val(prec, x.value());
    // pole guard: x must stay away from the integers {..., 0, 1, ..., M}
    let nearest = xv.clone().round();
    if nearest <= m_upper as u32 {
        let d = Float::with_val(prec, &xv - &nearest).abs();
        let guard = -(ctx.working_digits() as i64) / 2;
        if d.is_zero() || mag10(&d) <= guard {
            return Err(Error::Domain(format!(
                "x = {} is within 10^{guard} of the integer {}; shift x or use the exact path",
                xv.to_f64(),
                nearest.to_f64()
            )));
        }
    }

    // route A: direct product and direct reciprocal power sums
    let mut prod_a = HPReal::from_u32(1, ctx);
    for r in 1..=m_upper {
        let factor = HPReal::from_float(Float::with_val(prec, &xv - r as u32));
        prod_a = prod_a.mul(&factor);
    }
    let mut psums = Vec::with_capacity(s);
    for j in 1..=s {
        let mut acc = HPReal::exact_zero(ctx);
        for r in 1..=m_upper {
            let base = Float::with_val(prec, &xv - r as u32);
            let term = Float::with_val(prec, 1u32) / Float::with_val(prec, base.pow(j as u32));
            acc = acc.add(&HPReal::from_float(term));
        }
        psums.push(acc);
    }
    let e_s = e_from_p(&psums, s)?;
    let route_a = prod_a.mul(&e_s);

    // route B: Gamma ratio times the partition-polygamma sum
    let gx = Float::with_val(prec, &xv).gamma();
    let gxm = Float::with_val(prec, &xv - m_upper as u32).gamma();
    let ratio = HPReal::from_float(Float::with_val(prec, &gx / &gxm));
    let wd = ctx.working_digits();
    let x_shift = Float::with_val(prec, &xv - m_upper as u32);
    // psi_{j-1}(x) - psi_{j-1}(x-M) for every part size j <= s
    let mut psi_diffs = Vec::with_capacity(s);
    for j in 1..=s {
        let nu = (j - 1) as u32;
        let (pa, ea) = polygamma_f(nu, &xv, wd)?;
        let (pb, eb) = polygamma_f(nu, &x_shift, wd)?;
        let d = Float::with_val(prec, &pa - &pb);
        psi_diffs.push(HPReal::with_error(d, ea.max(eb) + 1));
    }
    let mut partition_sum = HPReal::exact_zero(ctx);
    for mu in partitions(s as u32)? {
        let mut term = HPReal::from_u32(1, ctx);
        for (part, mult) in mu.multiplicities() {
            let fact = crate::special_functions::factorial_int((part - 1) as u64);
            let base = psi_diffs[(part - 1) as usize].mul_rational(&Rational::from((
                Integer::from(1),
                fact,
            )));
            for _ in 0..mult {
                term = term.mul(&base);
            }
        }
        term = term.mul_rational(&Rational::from((Integer::from(1), mu.z_mu())));
        partition_sum = partition_sum.add(&term);
    }
    let route_b = ratio.mul(&partition_sum);

    let agree = -(abs_diff_exp(route_a.value(), route_b.value())
        - mag10(route_b.value()).max(0));
    let need = ctx.target_digits() as i64;
    if agree < need {
        return Err(Error::Precision {
            message: format!(
                "near_diagonal_gamma(M={m_upper}, s={s}): routes agree to {agree} digits, need {need}"
            ),
            best_estimate: route_b.to_decimal_string(30),
            achieved_exponent: -agree,
        });
    }
    let err = route_b
        .err_exp()
        .max(abs_diff_exp(route_a.value(), route_b.value()));
    Ok(HPReal::with_error(route_b.value().clone(), err))
}

/// Finite product prod_{r=1..M} (1 + 4x^2/(2r-1)^2), the cosh(pi x)
/// approximant.
pub fn cosh_approximant(m_terms: u32, x: &HPReal, ctx: &PrecisionContext) -> Result<HPReal> {
    if m_terms < 1 {
        return Err(Error::Domain("cosh_approximant needs M >= 1".into()));
    }
    let prec = ctx.prec_bits();
    let x2 = Float::with_val(prec, x.value() * x.value());
    let four_x2 = Float::with_val(prec, 4u32 * &x2);
    let mut prod = Float::with_val(prec, 1u32);
    for r in 1..=m_terms {
        let odd = 2 * r - 1;
        let term = Float::with_val(prec, 1u32)
            + Float::with_val(prec, &four_x2 / Float::with_val(prec, odd).square());
        prod *= term;
    }
    // rounding accumulates over M multiplies
    let err = mag10(&prod) - ctx.working_digits() as i64
        + (m_terms as f64).log10().ceil() as i64
        + 2;
    let mut out = HPReal::with_error(prod, err);
    if x.err_exp() > crate::precision::EXACT_ERR {
        // d/dx of the product is bounded by pi sinh(pi x) ~ pi * value
        out = HPReal::with_error(
            out.value().clone(),
            out.err_exp().max(x.err_exp() + mag10(out.value()) + 1),
        );
    }
    Ok(out)
}

/// The same approximant through the exact polynomial route
/// sum_k P_2k(2M, M+1/2) (ix)^(2M-2k) / P_2M(2M, M+1/2); feasible for
/// moderate M, used to cross-check `cosh_approximant`.
pub fn cosh_approximant_via_family(
    m_terms: u32,
    x: &HPReal,
    ctx: &PrecisionContext,
) -> Result<HPReal> {
    let m2 = 2 * m_terms as usize;
    if m2 > P_FAMILY_BOUND {
        return Err(Error::Capacity(format!(
            "cosh_approximant_via_family: 2M = {m2} exceeds bound {P_FAMILY_BOUND}"
        )));
    }
    let center = Rational::from((2 * m_terms + 1, 2)); // M + 1/2
    let row = p_eval_row(m2, &center);
    let prec = ctx.prec_bits();
    let x2 = Float::with_val(prec, x.value() * x.value());
    let mut acc = Float::with_val(prec, 0);
    // (ix)^(2M-2k) = (-1)^(M-k) x^(2M-2k)
    for k in 0..=m_terms {
        let p2k = Float::with_val(prec, &row[(2 * k) as usize]);
        let pw = Float::with_val(prec, x2.clone().pow(m_terms - k));
        let term = Float::with_val(prec, &p2k * &pw);
        if (m_terms - k).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let denom = Float::with_val(prec, &row[m2]);
    Ok(HPReal::from_float(acc / denom))
}

/// The coefficient-ratio limit (-1)^s P_{2M-2s}(2M, M+1/2) / P_{2M}(2M, M+1/2),
/// which converges to pi^(2s)/(2s)!.
///
/// Computed through the exact reduction of the ratio to e_{2s} of the
/// reciprocal factors +-2/(2r-1): odd power sums cancel in pairs and the
/// even ones are q_2t = 2^(2t+1) sum_r (2r-1)^(-2t). The e_{2s} Newton
/// assembly then runs at working precision.
pub fn pi_approximant(m_terms: u64, s: u64, ctx: &PrecisionContext) -> Result<HPReal> {
    if s < 1 || m_terms < s {
        return Err(Error::Domain(format!(
            "pi_approximant needs M >= s >= 1, got M={m_terms}, s={s}"
        )));
    }
    let prec = ctx.prec_bits();
    let mut qsums = Vec::with_capacity(2 * s as usize);
    for t in 1..=(2 * s) {
        if t % 2 == 1 {
            qsums.push(HPReal::exact_zero(ctx));
            continue;
        }
        let mut acc = Float::with_val(prec, 0);
        for r in 1..=m_terms {
            let odd = Float::with_val(prec, 2 * r - 1);
            acc += Float::with_val(prec, 1u32) / Float::with_val(prec, odd.pow(t as u32));
        }
        let scale = Float::with_val(prec, Integer::from(2).pow(t as u32 + 1));
        let q = Float::with_val(prec, &acc * &scale);
        // M-term positive sum: rounding-level error only
        qsums.push(HPReal::with_error(
            q.clone(),
            mag10(&q) - ctx.working_digits() as i64 + (m_terms as f64).log10().ceil() as i64 + 2,
        ));
    }
    let e = e_from_p(&qsums, 2 * s as usize)?;
    Ok(if s.is_multiple_of(2) { e } else { e.neg() })
}

/// Exact rational version of the same ratio (for cross-checks at small M).
pub fn pi_approximant_exact_ratio(m_terms: u64, s: u64) -> Result<Rational> {
    if s < 1 || m_terms < s {
        return Err(Error::Domain(format!(
            "pi_approximant needs M >= s >= 1, got M={m_terms}, s={s}"
        )));
    }
    let m2 = (2 * m_terms) as usize;
    if m2 > P_FAMILY_BOUND {
        return Err(Error::Capacity(format!(
            "exact ratio: 2M = {m2} exceeds bound {P_FAMILY_BOUND}"
        )));
    }
    let center = Rational::from((2 * m_terms + 1, 2));
    let row = p_eval_row(m2, &center);
    let num = row[(2 * m_terms - 2 * s) as usize].clone();
    let den = row[m2].clone();
    let ratio = num / den;
    Ok(if s.is_multiple_of(2) { ratio } else { -ratio })
}

/// Square-root form of the s = 1 ratio: converges to pi.
pub fn pi_approximant_sqrt(m_terms: u64, ctx: &PrecisionContext) -> Result<HPReal> {
    let v = pi_approximant(m_terms, 1, ctx)?;
    Ok(v.mul_rational(&Rational::from(2)).sqrt())
}

/// Weighted cancellation of a band of Stirling cycle numbers:
/// sum_{r=0..h} (-1)^r 2^(h-r) n^r C(n+r-h-1, n-h-1) [n, n-h+r] for odd h.
/// Returns the exact sum (which the underlying identity says is zero).
pub fn cycle_cancellation(n: u64, h: u64) -> Result<Integer> {
    if h.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "cycle_cancellation needs odd h, got h={h}"
        )));
    }
    if n < 1 || h > n - 1 {
        return Err(Error::Domain(format!(
            "cycle_cancellation needs 1 <= h <= n-1, got n={n}, h={h}"
        )));
    }
    let mut acc = Integer::new();
    for r in 0..=h {
        let term = Integer::from(2).pow((h - r) as u32)
            * Integer::from(n).pow(r as u32)
            * binomial(n + r - h - 1, n as i64 - h as i64 - 1)
            * stirling1(n, (n - h + r) as i64);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Weighted binomial transform of a Stirling row tail: the signed sum
/// sum_{r=0..M-s} (-1)^(r-M+s) (M+1)^r C(r+s, s) [M+1, r+s+1] and its
/// closed value [M+1, s+1]. Both the primary and the index-shifted form
/// are evaluated; the pair (lhs, rhs) is returned.
pub fn cycle_weighted_transform(m_upper: u64, s: u64) -> Result<(Integer, Integer)> {
    if s > m_upper {
        return Err(Error::Domain(format!(
            "cycle_weighted_transform needs 0 <= s <= M, got M={m_upper}, s={s}"
        )));
    }
    let mut lhs = Integer::new();
    for r in 0..=(m_upper - s) {
        let term = Integer::from(m_upper + 1).pow(r as u32)
            * binomial(r + s, s as i64)
            * stirling1(m_upper + 1, (r + s + 1) as i64);
        if (r + m_upper + s).is_multiple_of(2) {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let rhs = stirling1(m_upper + 1, (s + 1) as i64);

    // equivalent second form (j = r + s): sum_j (-1)^j (M+1)^j C(j,s) [M+1, j+1]
    // = (-1)^M (M+1)^s [M+1, s+1]
    let mut second = Integer::new();
    for j in 0..=m_upper {
        let term = Integer::from(m_upper + 1).pow(j as u32)
            * binomial(j, s as i64)
            * stirling1(m_upper + 1, (j + 1) as i64);
        if j % 2 == 0 {
            second += term;
        } else {
            second -= term;
        }
    }
    let mut second_expect = Integer::from(m_upper + 1).pow(s as u32) * &rhs;
    if m_upper % 2 == 1 {
        second_expect = -second_expect;
    }
    debug_assert_eq!(second, second_expect, "index-shifted form mismatch");

    Ok((lhs, rhs))
}

/// Bridge to the r-Stirling numbers: the pair
/// (P_k(m, -r), (-1)^k * rStirling(m+r+1, m-k+r+1; r+1)), which are equal.
pub fn p_r_stirling_bridge(k: usize, m: usize, r: u64) -> Result<(Integer, Integer)> {
    if k > m {
        return Err(Error::Domain(format!(
            "p_r_stirling_bridge index k = {k} outside 0..={m}"
        )));
    }
    let x = Rational::from(-(r as i64));
    let left_rat = p_eval(k, m, &x)?;
    debug_assert_eq!(*left_rat.denom(), Integer::from(1));
    let left = left_rat.into_numer_denom().0;
    let mut right = r_stirling1(
        (m as u64) + r + 1,
        (m - k) as i64 + r as i64 + 1,
        r + 1,
    );
    if k % 2 == 1 {
        right = -right;
    }
    Ok((left, right))
}
