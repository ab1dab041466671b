//! Nested-sum multiplicities for arbitrary lower bounds, their closed forms
//! for the common-lower-bound and staircase families, the induced integrand
//! polynomial, the closed-form right-hand sides, and the normalized
//! limiting series.
//!
//! The counting recurrence works backward through the chain with suffix-sum
//! acceleration, so each level is O(N) and the whole computation O(N^2).

use rug::{Float, Integer, Rational};

use crate::closed_forms::{ClosedFormReport, FSeqEvaluator};
use crate::error::{Error, Result};
use crate::precision::{mag10, HPReal, PrecisionContext};

/// Cap on the chain depth for the counting recurrence.
pub const NESTED_BOUND: usize = 500;
/// Depth cap for the exponential brute-force oracle.
pub const BRUTEFORCE_BOUND: usize = 10;
/// Hard cap on the series index in `normalized_series`.
pub const SERIES_INDEX_CAP: u32 = 200;

/// Lower bounds (l_1, ..., l_N) of a nested sum. Values above N are
/// permitted and produce empty sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBounds {
    bounds: Vec<u32>,
}

impl LowerBounds {
    pub fn new(bounds: Vec<u32>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::Domain("lower-bound list must be nonempty".into()));
        }
        if bounds.iter().any(|&l| l < 1) {
            return Err(Error::Domain("lower bounds must all be >= 1".into()));
        }
        Ok(LowerBounds { bounds })
    }

    /// The staircase bounds (1, 2, ..., N).
    pub fn staircase(n: usize) -> Result<Self> {
        Self::new((1..=n as u32).collect())
    }

    /// Constant bounds (m, m, ..., m) of length N.
    pub fn common(n: usize, m: u32) -> Result<Self> {
        Self::new(vec![m; n])
    }

    pub fn n(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }
}

/// Multiplicities (c_1, ..., c_N) of chi_j in a nested sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientVector {
    c: Vec<Integer>,
}

impl CoefficientVector {
    pub fn from_vec(c: Vec<Integer>) -> Self {
        CoefficientVector { c }
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// c_j for 1-based j (zero outside the range).
    pub fn get(&self, j: usize) -> Integer {
        if j >= 1 && j <= self.c.len() {
            self.c[j - 1].clone()
        } else {
            Integer::new()
        }
    }

    pub fn as_slice(&self) -> &[Integer] {
        &self.c
    }

    pub fn total(&self) -> Integer {
        let mut acc = Integer::new();
        for v in &self.c {
            acc += v;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.cmp0() == std::cmp::Ordering::Equal)
    }
}

/// Multiplicities by the backward recurrence with suffix-sum acceleration:
/// D_N(r) = N - max(r, l_N) + 1, D_i(r) = sum_{s >= max(r, l_i)} D_{i+1}(s),
/// and c_j = D_2(j) for j >= l_1 (0 below l_1).
pub fn coeffs(lows: &LowerBounds) -> Result<CoefficientVector> {
    let n = lows.n();
    if n > NESTED_BOUND {
        return Err(Error::Capacity(format!(
            "nested depth N = {n} exceeds the bound {NESTED_BOUND}"
        )));
    }
    let l = lows.bounds();
    if n == 1 {
        let c1 = if l[0] <= 1 {
            Integer::from(1)
        } else {
            Integer::new()
        };
        return Ok(CoefficientVector::from_vec(vec![c1]));
    }
    // d[r-1] = D_i(r) for the current level i
    let mut d: Vec<Integer> = (1..=n as u32)
        .map(|r| {
            let lo = r.max(l[n - 1]);
            if lo as usize > n {
                Integer::new()
            } else {
                Integer::from(n as u32 - lo + 1)
            }
        })
        .collect();
    for i in (2..n).rev() {
        // suffix sums S(r) = sum_{s=r..N} D_{i+1}(s)
        let mut suffix = vec![Integer::new(); n + 2];
        for r in (1..=n).rev() {
            suffix[r] = Integer::from(&suffix[r + 1] + &d[r - 1]);
        }
        let li = l[i - 1];
        d = (1..=n as u32)
            .map(|r| {
                let lo = r.max(li) as usize;
                if lo > n {
                    Integer::new()
                } else {
                    suffix[lo].clone()
                }
            })
            .collect();
    }
    let c = (1..=n as u32)
        .map(|j| {
            if j < l[0] {
                Integer::new()
            } else {
                d[(j - 1) as usize].clone()
            }
        })
        .collect();
    Ok(CoefficientVector::from_vec(c))
}

/// Oracle: enumerate every admissible chain l_i <= k_i, k_1 <= ... <= k_N <= N
/// and tally the innermost index.
pub fn coeffs_bruteforce(lows: &LowerBounds) -> Result<CoefficientVector> {
    let n = lows.n();
    if n > BRUTEFORCE_BOUND {
        return Err(Error::Capacity(format!(
            "brute-force enumeration capped at N = {BRUTEFORCE_BOUND}, got {n}"
        )));
    }
    let l = lows.bounds();
    let mut tally = vec![Integer::new(); n];
    // chains are chosen outward: k_1 first, then k_2 >= k_1, ...
    fn walk(i: usize, prev: u32, l: &[u32], n: u32, k1: usize, tally: &mut [Integer]) {
        if i == l.len() {
            tally[k1 - 1] += 1;
            return;
        }
        let lo = prev.max(l[i]);
        for k in lo..=n {
            walk(i + 1, k, l, n, if i == 0 { k as usize } else { k1 }, tally);
        }
    }
    walk(0, 1, l, n as u32, 0, &mut tally);
    Ok(CoefficientVector::from_vec(tally))
}

/// The two families with closed-form multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedKind {
    /// All lower bounds equal to m.
    Common { m: u32 },
    /// Staircase bounds (1, 2, ..., N).
    Staircase,
}

/// Closed-form multiplicities:
/// common(m): c_j = C(2N-j-1, N-j) for m <= j <= N;
/// staircase: c_j = (j/N) C(2N-j-1, N-1) (ballot numbers).
pub fn coeffs_closed(kind: ClosedKind, n: usize) -> Result<CoefficientVector> {
    if n < 1 {
        return Err(Error::Domain("coeffs_closed needs N >= 1".into()));
    }
    let nn = n as u64;
    match kind {
        ClosedKind::Common { m } => {
            if m < 1 || m as usize > n {
                return Err(Error::Domain(format!(
                    "common lower bound m = {m} outside 1..={n}"
                )));
            }
            let c = (1..=nn)
                .map(|j| {
                    if j < m as u64 {
                        Integer::new()
                    } else {
                        crate::combinatorics::binomial(2 * nn - j - 1, (nn - j) as i64)
                    }
                })
                .collect();
            Ok(CoefficientVector::from_vec(c))
        }
        ClosedKind::Staircase => {
            let c = (1..=nn)
                .map(|j| {
                    let b = crate::combinatorics::binomial(2 * nn - j - 1, nn as i64 - 1)
                        * Integer::from(j);
                    debug_assert!(b.is_divisible(&Integer::from(nn)));
                    b / Integer::from(nn)
                })
                .collect();
            Ok(CoefficientVector::from_vec(c))
        }
    }
}

/// The integrand data for a lower-bound list: the nested sum equals
/// int [(total) sech x - sum_j c_j sech^j x] / x^2 dx.
#[derive(Debug, Clone)]
pub struct IntegrandPolynomial {
    pub total: Integer,
    pub coeffs: CoefficientVector,
    /// Coefficient of x^2 in the small-x expansion of the numerator:
    /// sum_j (j-1) c_j / 2. Witnesses the removable singularity.
    pub removable_coeff: Rational,
}

pub fn integrand_polynomial(lows: &LowerBounds) -> Result<IntegrandPolynomial> {
    let c = coeffs(lows)?;
    Ok(integrand_from_coeffs(c))
}

pub fn integrand_from_coeffs(coeffs: CoefficientVector) -> IntegrandPolynomial {
    let total = coeffs.total();
    let mut rem = Integer::new();
    for (idx, cj) in coeffs.as_slice().iter().enumerate() {
        rem += Integer::from(idx) * cj; // (j-1) c_j with j = idx+1
    }
    IntegrandPolynomial {
        total,
        coeffs,
        removable_coeff: Rational::from((rem, Integer::from(2))),
    }
}

impl IntegrandPolynomial {
    /// Plain ASCII rendering like "15*sech - 10*sech^2 - 4*sech^3 - sech^4".
    pub fn symbolic(&self) -> String {
        let lead = Integer::from(&self.total - &self.coeffs.get(1));
        let mut out = String::new();
        if lead.cmp0() != std::cmp::Ordering::Equal {
            out.push_str(&format!("{lead}*sech"));
        }
        for j in 2..=self.coeffs.n() {
            let cj = self.coeffs.get(j);
            if cj.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" - ");
            } else {
                out.push('-');
            }
            if cj == 1 {
                out.push_str(&format!("sech^{j}"));
            } else {
                out.push_str(&format!("{cj}*sech^{j}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Symbolic right-hand side like "126*F[2]+56*F[3]+21*F[4]+6*F[5]+F[6]".
pub fn rhs_symbolic(c: &CoefficientVector) -> String {
    let mut out = String::new();
    for j in 1..=c.n() {
        let cj = c.get(j);
        if cj.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        if cj == 1 {
            out.push_str(&format!("F[{j}]"));
        } else {
            out.push_str(&format!("{cj}*F[{j}]"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Closed-form right-hand side sum_j c_j F_j with exact integer weights.
pub fn rhs_closed_form(lows: &LowerBounds, ctx: &PrecisionContext) -> Result<ClosedFormReport> {
    let c = coeffs(lows)?;
    rhs_from_coeffs(&c, &mut FSeqEvaluator::new(ctx), ctx)
}

/// Same, with a shared F_j evaluator (the per-j values are memoized there).
pub fn rhs_from_coeffs(
    c: &CoefficientVector,
    eval: &mut FSeqEvaluator,
    ctx: &PrecisionContext,
) -> Result<ClosedFormReport> {
    let mut value = HPReal::exact_zero(ctx);
    let mut terms = Vec::new();
    let mut pole = false;
    for j in 1..=c.n() {
        let cj = c.get(j);
        if cj.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        let fj = eval.f(j as u32)?;
        let term = fj.mul_rational(&Rational::from(&cj));
        if j >= 2 {
            pole = true;
        }
        terms.push((format!("{cj}*F[{j}]"), term.clone()));
        value = value.add(&term);
    }
    Ok(ClosedFormReport {
        value,
        terms,
        pole_limit_used: pole,
    })
}

/// Finite-N normalized sum (1/total) sum_j c_j F_j for one of the closed
/// families.
pub fn normalized_finite(
    kind: ClosedKind,
    n: usize,
    eval: &mut FSeqEvaluator,
) -> Result<HPReal> {
    let ctx = *eval.ctx();
    let c = coeffs_closed(kind, n)?;
    let total = c.total();
    let report = rhs_from_coeffs(&c, eval, &ctx)?;
    Ok(report
        .value
        .mul_rational(&Rational::from((Integer::from(1), total))))
}

/// Limit series: common(m): sum_{r>=0} 2^-(r+1) F_{m+r};
/// staircase: sum_{j>=1} (j/2^(j+1)) F_j.
///
/// Truncation: the geometric weight tail times an empirical bound on |F_j|
/// (monitored from the computed values) must drop below `tail_eps`; the
/// reported error bound carries the truncation estimate. Failure of the
/// monitor to decrease by the index cap is a diagnostics error.
pub fn normalized_series(
    kind: ClosedKind,
    ctx: &PrecisionContext,
    tail_eps: &HPReal,
) -> Result<HPReal> {
    normalized_series_with(kind, &mut FSeqEvaluator::new(ctx), tail_eps)
}

pub fn normalized_series_with(
    kind: ClosedKind,
    eval: &mut FSeqEvaluator,
    tail_eps: &HPReal,
) -> Result<HPReal> {
    let ctx = *eval.ctx();
    if tail_eps.value().cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Domain("tail_eps must be positive".into()));
    }
    let prec = ctx.prec_bits();
    let start = match kind {
        ClosedKind::Common { m } => {
            if m < 1 {
                return Err(Error::Domain("common family needs m >= 1".into()));
            }
            m
        }
        ClosedKind::Staircase => 1,
    };
    let weight = |j: u32| -> Rational {
        match kind {
            // j = m + r, weight 2^-(r+1)
            ClosedKind::Common { m } => {
                Rational::from((Integer::from(1), Integer::from(1) << (j - m + 1)))
            }
            ClosedKind::Staircase => Rational::from((Integer::from(j), Integer::from(1) << (j + 1))),
        }
    };
    // exact tail of the weight series past index j
    let weight_tail = |j: u32| -> Rational {
        match kind {
            ClosedKind::Common { m } => {
                // sum_{i>j} 2^-(i-m+1) = 2^-(j-m+1)
                Rational::from((Integer::from(1), Integer::from(1) << (j - m + 1)))
            }
            ClosedKind::Staircase => {
                // sum_{i>j} i/2^(i+1) = (j+2)/2^(j+1)
                Rational::from((Integer::from(j + 2), Integer::from(1) << (j + 1)))
            }
        }
    };

    let mut acc = HPReal::exact_zero(&ctx);
    let mut f_bound = Float::with_val(prec, 1u32);
    let mut last_terms: Vec<Float> = Vec::new();
    let mut truncation_exp = 0i64;
    let mut converged = false;
    let mut j = start;
    while j <= SERIES_INDEX_CAP {
        let fj = eval.f(j)?;
        let w = weight(j);
        let term = fj.mul_rational(&w);
        acc = acc.add(&term);
        let fmag = fj.value().clone().abs();
        if fmag > f_bound {
            f_bound = fmag;
        }
        // |F| grows at most polynomially; factor 4 covers the growth across
        // the geometrically-weighted tail
        let tail_bound = Float::with_val(prec, weight_tail(j))
            * Float::with_val(prec, 4u32 * &f_bound);
        last_terms.push(term.value().clone().abs());
        if last_terms.len() > 3 {
            last_terms.remove(0);
        }
        if tail_bound < *tail_eps.value() {
            truncation_exp = mag10(&tail_bound);
            converged = true;
            break;
        }
        j += 1;
    }
    if !converged {
        // the weights decay geometrically, so the partial terms must shrink
        let decreasing = last_terms.windows(2).all(|w| w[1] <= w[0]);
        return Err(Error::Diagnostics(format!(
            "normalized series did not meet tail_eps by j = {SERIES_INDEX_CAP} \
             (terms decreasing: {decreasing})"
        )));
    }
    Ok(HPReal::with_error(
        acc.value().clone(),
        acc.err_exp().max(truncation_exp),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lows(v: &[u32]) -> LowerBounds {
        LowerBounds::new(v.to_vec()).unwrap()
    }

    #[test]
    fn paper_multiplicity_vectors() {
        // staircase family
        let cases: Vec<(Vec<u32>, Vec<i64>)> = vec![
            (vec![1, 2], vec![1, 1]),
            (vec![1, 2, 3], vec![2, 2, 1]),
            (vec![1, 2, 3, 4], vec![5, 5, 3, 1]),
            (vec![1, 2, 3, 4, 5], vec![14, 14, 9, 4, 1]),
            (vec![1, 2, 3, 4, 5, 6], vec![42, 42, 28, 14, 5, 1]),
        ];
        for (l, expect) in cases {
            let c = coeffs(&lows(&l)).unwrap();
            let got: Vec<Integer> = c.as_slice().to_vec();
            let want: Vec<Integer> = expect.iter().map(|&v| Integer::from(v)).collect();
            assert_eq!(got, want, "staircase {l:?}");
        }
        // common lower bound two
        let cases2: Vec<(usize, Vec<i64>)> = vec![
            (2, vec![0, 1]),
            (3, vec![0, 3, 1]),
            (4, vec![0, 10, 4, 1]),
            (5, vec![0, 35, 15, 5, 1]),
            (6, vec![0, 126, 56, 21, 6, 1]),
        ];
        for (n, expect) in cases2 {
            let c = coeffs(&LowerBounds::common(n, 2).unwrap()).unwrap();
            let want: Vec<Integer> = expect.iter().map(|&v| Integer::from(v)).collect();
            assert_eq!(c.as_slice(), &want[..], "common-2 N={n}");
        }
        // all-empty when l_1 > N
        let c = coeffs(&lows(&[4, 1, 1])).unwrap();
        assert!(c.get(1).cmp0() == std::cmp::Ordering::Equal);
        let c = coeffs(&lows(&[1, 1, 7])).unwrap();
        assert!(c.is_zero());
        // N = 1
        assert_eq!(coeffs(&lows(&[1])).unwrap().as_slice(), &[Integer::from(1)]);
        assert!(coeffs(&lows(&[2])).unwrap().is_zero());
    }

    #[test]
    fn bruteforce_agreement_random() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..=8usize);
            let v: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=(n as u32 + 2))).collect();
            let l = lows(&v);
            assert_eq!(
                coeffs(&l).unwrap(),
                coeffs_bruteforce(&l).unwrap(),
                "lows {v:?}"
            );
        }
        assert!(coeffs_bruteforce(&lows(&[1; 11])).is_err());
    }

    #[test]
    fn closed_forms_match_recurrence() {
        for n in 1..=12usize {
            let stair = coeffs_closed(ClosedKind::Staircase, n).unwrap();
            assert_eq!(stair, coeffs(&LowerBounds::staircase(n).unwrap()).unwrap());
            for m in 1..=n as u32 {
                let com = coeffs_closed(ClosedKind::Common { m }, n).unwrap();
                assert_eq!(
                    com,
                    coeffs(&LowerBounds::common(n, m).unwrap()).unwrap(),
                    "common N={n} m={m}"
                );
            }
        }
        assert!(coeffs_closed(ClosedKind::Common { m: 5 }, 4).is_err());
    }

    #[test]
    fn sum_identities() {
        for n in 1..=30usize {
            let stair = coeffs_closed(ClosedKind::Staircase, n).unwrap();
            assert_eq!(stair.total(), crate::combinatorics::catalan(n as u64));
            if n >= 2 {
                let c_prev = crate::combinatorics::catalan(n as u64 - 1);
                assert_eq!(stair.get(1), c_prev);
                assert_eq!(stair.get(2), c_prev);
            }
            for m in 1..=n as u32 {
                let com = coeffs_closed(ClosedKind::Common { m }, n).unwrap();
                assert_eq!(
                    com.total(),
                    crate::combinatorics::binomial(
                        2 * n as u64 - m as u64,
                        n as i64 - m as i64
                    ),
                    "hockey stick N={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn normalized_ratio_bounds() {
        for n in 2..=25usize {
            let stair = coeffs_closed(ClosedKind::Staircase, n).unwrap();
            for j in 2..n {
                let r = Rational::from((stair.get(j + 1), stair.get(j)));
                assert!(r <= Rational::from((3, 4)), "staircase N={n} j={j}");
            }
            let com = coeffs_closed(ClosedKind::Common { m: 1 }, n).unwrap();
            for j in 1..n {
                let r = Rational::from((com.get(j + 1), com.get(j)));
                assert!(r <= Rational::from((1, 2)), "common N={n} j={j}");
            }
            // normalized vector sums to exactly 1
            let total = stair.total();
            let mut acc = Rational::new();
            for j in 1..=n {
                acc += Rational::from((stair.get(j), total.clone()));
            }
            assert_eq!(acc, Rational::from(1));
        }
    }

    #[test]
    fn integrand_rendering() {
        let ip = integrand_polynomial(&lows(&[1, 2, 3])).unwrap();
        assert_eq!(ip.total, 5);
        // c_1 sech cancels: 5 sech - 2 sech - 2 sech^2 - sech^3
        assert_eq!(ip.symbolic(), "3*sech - 2*sech^2 - sech^3");
        assert_eq!(ip.removable_coeff, Rational::from((4, 2)));
        let ic = integrand_polynomial(&LowerBounds::common(4, 2).unwrap()).unwrap();
        assert_eq!(ic.symbolic(), "15*sech - 10*sech^2 - 4*sech^3 - sech^4");
        let zero = integrand_from_coeffs(CoefficientVector::from_vec(vec![Integer::new()]));
        assert_eq!(zero.symbolic(), "0");
    }

    #[test]
    fn rhs_symbolic_rendering() {
        let c = coeffs_closed(ClosedKind::Common { m: 2 }, 6).unwrap();
        assert_eq!(rhs_symbolic(&c), "126*F[2]+56*F[3]+21*F[4]+6*F[5]+F[6]");
        let s = coeffs_closed(ClosedKind::Staircase, 3).unwrap();
        assert_eq!(rhs_symbolic(&s), "2*F[1]+2*F[2]+F[3]");
    }

    #[test]
    fn rhs_b3_value() {
        // B3: 2 F_2 + F_3 = -10G/pi - pi/2 + psi_3(1/4)/(16 pi^3) + 28 zeta(3)/pi^2
        use crate::precision::agreement_digits;
        use crate::special_functions::{constant, polygamma, riemann_zeta, ConstantName};
        let ctx = PrecisionContext::new(40).unwrap();
        let r = rhs_closed_form(&LowerBounds::staircase(3).unwrap(), &ctx).unwrap();
        let pi = constant(ConstantName::Pi, &ctx);
        let g = constant(ConstantName::CatalanG, &ctx);
        let quarter = HPReal::from_rational(&Rational::from((1, 4)), &ctx);
        let psi3 = polygamma(3, &quarter, &ctx).unwrap();
        let z3 = riemann_zeta(&HPReal::from_u32(3, &ctx), &ctx).unwrap();
        let pi2 = pi.mul(&pi);
        let pi3 = pi2.mul(&pi);
        let expect = g
            .div(&pi)
            .mul_rational(&Rational::from(-10))
            .sub(&pi.mul_rational(&Rational::from((1, 2))))
            .add(&psi3.div(&pi3).mul_rational(&Rational::from((1, 16))))
            .add(&z3.div(&pi2).mul_rational(&Rational::from(28)));
        assert!(
            agreement_digits(r.value.value(), expect.value()) >= 40,
            "B3: {} vs {}",
            r.value.to_decimal_string(45),
            expect.to_decimal_string(45)
        );
        assert!(r.pole_limit_used);
    }

    #[test]
    fn series_monitor_errors() {
        let ctx = PrecisionContext::new(20).unwrap();
        let bad_eps = HPReal::exact_zero(&ctx);
        assert!(normalized_series(ClosedKind::Staircase, &ctx, &bad_eps).is_err());
    }
}
