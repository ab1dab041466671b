//! Exact integer combinatorics: binomials, Catalan numbers, Stirling numbers
//! of both kinds (plus the two-sum formula and the r-Stirling extension),
//! integer partitions with their symmetry factor z_mu, and the Newton
//! power-sum -> elementary-symmetric conversion.
//!
//! Stirling tables are memoized process-wide behind a mutex; rows are only
//! ever appended, so observable values are identical to per-call computation.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::HPReal;
use crate::rational::RationalPolynomial;

/// Default cap on the size of partition enumeration requests.
pub const PARTITION_BOUND: u32 = 60;

/// Binomial coefficient; 0 for k < 0 or k > n.
pub fn binomial(n: u64, k: i64) -> Integer {
    if k < 0 || k as u64 > n {
        return Integer::new();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = Integer::from(1);
    for i in 1..=k {
        acc *= Integer::from(n - k + i);
        acc /= Integer::from(i);
    }
    acc
}

/// Catalan number C_N = binomial(2N, N) / (N + 1).
pub fn catalan(n: u64) -> Integer {
    let b = binomial(2 * n, n as i64);
    b / Integer::from(n + 1)
}

fn stirling1_cache() -> &'static Mutex<Vec<Vec<Integer>>> {
    static CACHE: OnceLock<Mutex<Vec<Vec<Integer>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![vec![Integer::from(1)]]))
}

/// Unsigned Stirling cycle number [n k] via the triangular recurrence
/// [n k] = [n-1 k-1] + (n-1)[n-1 k]; zero outside 0 <= k <= n.
pub fn stirling1(n: u64, k: i64) -> Integer {
    if k < 0 || k as u64 > n {
        return Integer::new();
    }
    let mut table = stirling1_cache().lock().unwrap();
    while table.len() as u64 <= n {
        let m = table.len() as u64; // building row m from row m-1
        let prev = &table[(m - 1) as usize];
        let mut row = vec![Integer::new(); (m + 1) as usize];
        for j in 1..=m as usize {
            let mut v = prev[j - 1].clone();
            if j < prev.len() {
                v += &prev[j] * Integer::from(m - 1);
            }
            row[j] = v;
        }
        table.push(row);
    }
    table[n as usize][k as usize].clone()
}

fn stirling2_cache() -> &'static Mutex<Vec<Vec<Integer>>> {
    static CACHE: OnceLock<Mutex<Vec<Vec<Integer>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![vec![Integer::from(1)]]))
}

/// Stirling set number {n k} via {n k} = {n-1 k-1} + k {n-1 k}.
pub fn stirling2(n: u64, k: i64) -> Integer {
    if k < 0 || k as u64 > n {
        return Integer::new();
    }
    let mut table = stirling2_cache().lock().unwrap();
    while table.len() as u64 <= n {
        let m = table.len() as u64;
        let prev = &table[(m - 1) as usize];
        let mut row = vec![Integer::new(); (m + 1) as usize];
        for j in 1..=m as usize {
            let mut v = prev[j - 1].clone();
            if j < prev.len() {
                v += &prev[j] * Integer::from(j);
            }
            row[j] = v;
        }
        table.push(row);
    }
    table[n as usize][k as usize].clone()
}

/// Stirling set number by the surjection-count inclusion-exclusion sum,
/// {n k} = (1/k!) sum_l (-1)^(k-l) C(k,l) l^n.
pub fn stirling2_surjection(n: u64, k: u64) -> Integer {
    let mut sum = Integer::new();
    for l in 0..=k {
        let pow = if l == 0 {
            if n == 0 {
                Integer::from(1)
            } else {
                Integer::new()
            }
        } else {
            Integer::from(l).pow(n as u32)
        };
        let term = binomial(k, l as i64) * pow;
        if (k - l).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let mut fact = Integer::from(1);
    for i in 2..=k {
        fact *= i;
    }
    debug_assert!(sum.is_divisible(&fact));
    sum / fact
}

/// Stirling cycle number by the double-sum formula that goes through the
/// second kind. Exact rational accumulation; the result is always integral.
pub fn stirling1_two_sum(n: u64, k: u64) -> Result<Integer> {
    if k < 1 || k > n || n < 1 {
        return Err(Error::Domain(format!(
            "stirling1_two_sum requires 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    let mut total = Rational::new();
    for j in n..=(2 * n - k) {
        let outer = binomial(j - 1, k as i64 - 1) * binomial(2 * n - k, j as i64);
        if outer.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        let mut inner = Rational::new();
        let mut m_fact = Integer::from(1);
        for m in 0..=(j - n) {
            if m > 0 {
                m_fact *= m;
            }
            let pow = if m == 0 {
                if j == k {
                    Integer::from(1)
                } else {
                    Integer::new()
                }
            } else {
                Integer::from(m).pow((j - k) as u32)
            };
            if pow.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            let mut rest_fact = Integer::from(1);
            for i in 2..=(j - n - m) {
                rest_fact *= i;
            }
            let term = Rational::from((pow, m_fact.clone() * rest_fact));
            if (m + n - k).is_multiple_of(2) {
                inner += term;
            } else {
                inner -= term;
            }
        }
        total += inner * Rational::from(outer);
    }
    debug_assert_eq!(*total.denom(), Integer::from(1));
    Ok(total.into_numer_denom().0)
}

fn r_stirling1_cache() -> &'static Mutex<BTreeMap<u64, Vec<Vec<Integer>>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Vec<Vec<Integer>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// r-Stirling cycle number: permutations of n elements with k cycles where
/// 1..r lie in distinct cycles. Broder boundary conditions: value 1 at
/// n = k = r, 0 elsewhere on n = r, 0 for n < r.
pub fn r_stirling1(n: u64, k: i64, r: u64) -> Integer {
    if n < r || k < 0 {
        return Integer::new();
    }
    let k = k as u64;
    if n == r {
        return if k == r {
            Integer::from(1)
        } else {
            Integer::new()
        };
    }
    if k > n || k < r {
        return Integer::new();
    }
    let mut cache = r_stirling1_cache().lock().unwrap();
    let rows = cache.entry(r).or_insert_with(|| {
        // row index n - r; column index k - r
        vec![vec![Integer::from(1)]]
    });
    while (rows.len() as u64) <= n - r {
        let i = rows.len() as u64; // new row for n = r + i
        let nn = r + i;
        let prev = &rows[(i - 1) as usize];
        let mut row = vec![Integer::new(); (i + 1) as usize];
        for j in 0..=i as usize {
            let mut v = if j >= 1 {
                prev[j - 1].clone()
            } else {
                Integer::new()
            };
            if j < prev.len() {
                v += &prev[j] * Integer::from(nn - 1);
            }
            row[j] = v;
        }
        rows.push(row);
    }
    rows[(n - r) as usize][(k - r) as usize].clone()
}

/// Integer partition stored as multiplicities: part j occurs m_j times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    multiplicities: BTreeMap<u32, u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition {
            multiplicities: BTreeMap::new(),
        }
    }

    fn from_parts(parts: &[u32]) -> Self {
        let mut multiplicities = BTreeMap::new();
        for &p in parts {
            debug_assert!(p >= 1);
            *multiplicities.entry(p).or_insert(0) += 1;
        }
        Partition { multiplicities }
    }

    /// (part, multiplicity) pairs, smallest part first.
    pub fn multiplicities(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.multiplicities.iter().map(|(&j, &m)| (j, m))
    }

    /// Sum of parts.
    pub fn weight(&self) -> u32 {
        self.multiplicities.iter().map(|(&j, &m)| j * m).sum()
    }

    /// Number of parts.
    pub fn length(&self) -> u32 {
        self.multiplicities.values().sum()
    }

    /// z_mu = prod_j j^(m_j) m_j!, the power-sum symmetry factor.
    pub fn z_mu(&self) -> Integer {
        let mut z = Integer::from(1);
        for (&j, &m) in &self.multiplicities {
            z *= Integer::from(j).pow(m);
            for i in 2..=m {
                z *= i;
            }
        }
        z
    }

    /// Parts in descending order.
    pub fn parts(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (&j, &m) in self.multiplicities.iter().rev() {
            for _ in 0..m {
                out.push(j);
            }
        }
        out
    }
}

/// All partitions of s, in reverse-lexicographic part order
/// (e.g. s=4: [4], [3,1], [2,2], [2,1,1], [1,1,1,1]).
pub fn partitions(s: u32) -> Result<Vec<Partition>> {
    partitions_with_bound(s, PARTITION_BOUND)
}

pub fn partitions_with_bound(s: u32, bound: u32) -> Result<Vec<Partition>> {
    if s > bound {
        return Err(Error::Capacity(format!(
            "partition weight {s} exceeds the configured bound {bound}"
        )));
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    descend(s, s, &mut stack, &mut out);
    Ok(out)
}

fn descend(remaining: u32, max_part: u32, stack: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition::from_parts(stack));
        return;
    }
    let top = remaining.min(max_part);
    for p in (1..=top).rev() {
        stack.push(p);
        descend(remaining - p, p, stack, out);
        stack.pop();
    }
}

/// Scalar kinds usable in the Newton recurrence (exact rationals, exact
/// polynomials, tracked floats).
pub trait NewtonScalar: Clone {
    fn ns_zero() -> Self;
    fn ns_one() -> Self;
    fn ns_add(&self, other: &Self) -> Self;
    fn ns_sub(&self, other: &Self) -> Self;
    fn ns_mul(&self, other: &Self) -> Self;
    fn ns_div_u32(&self, k: u32) -> Self;
}

impl NewtonScalar for Rational {
    fn ns_zero() -> Self {
        Rational::new()
    }
    fn ns_one() -> Self {
        Rational::from(1)
    }
    fn ns_add(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }
    fn ns_sub(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }
    fn ns_mul(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn ns_div_u32(&self, k: u32) -> Self {
        Rational::from(self / Integer::from(k))
    }
}

impl NewtonScalar for RationalPolynomial {
    fn ns_zero() -> Self {
        RationalPolynomial::zero()
    }
    fn ns_one() -> Self {
        RationalPolynomial::one()
    }
    fn ns_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ns_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn ns_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn ns_div_u32(&self, k: u32) -> Self {
        self.div_int(k)
    }
}

impl NewtonScalar for HPReal {
    fn ns_zero() -> Self {
        // Exactly representable at any precision; ops join precisions.
        HPReal::with_error(rug::Float::with_val(64, 0), crate::precision::EXACT_ERR)
    }
    fn ns_one() -> Self {
        HPReal::with_error(rug::Float::with_val(64, 1), crate::precision::EXACT_ERR)
    }
    fn ns_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ns_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn ns_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn ns_div_u32(&self, k: u32) -> Self {
        self.mul_rational(&Rational::from((1u32, k)))
    }
}

/// Elementary symmetric e_k from power sums p_1..p_k by Newton's identities:
/// k e_k = sum_{r=1..k} (-1)^(r-1) p_r e_{k-r}.
pub fn e_from_p<T: NewtonScalar>(power_sums: &[T], k: usize) -> Result<T> {
    if k == 0 {
        return Ok(T::ns_one());
    }
    if power_sums.len() < k {
        return Err(Error::Domain(format!(
            "e_from_p needs p_1..p_{k} but only {} power sums were supplied",
            power_sums.len()
        )));
    }
    let mut e = vec![T::ns_one()];
    for kk in 1..=k {
        let mut acc = T::ns_zero();
        for r in 1..=kk {
            let prod = power_sums[r - 1].ns_mul(&e[kk - r]);
            if r % 2 == 1 {
                acc = acc.ns_add(&prod);
            } else {
                acc = acc.ns_sub(&prod);
            }
        }
        e.push(acc.ns_div_u32(kk as u32));
    }
    Ok(e.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(5, -1), 0);
        // Pascal-triangle recomputation oracle
        let mut row = vec![Integer::from(1)];
        for n in 1..=30u64 {
            let mut next = vec![Integer::from(1)];
            for k in 1..n as usize {
                next.push(Integer::from(&row[k - 1] + &row[k]));
            }
            next.push(Integer::from(1));
            row = next;
        }
        assert_eq!(binomial(30, 15), row[15]);
        assert_eq!(binomial(30, 15), 155117520);
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), 1);
        assert_eq!(catalan(4), 14);
        assert_eq!(catalan(6), 132);
    }

    /// Brute-force cycle count: permutations of n elements with exactly k cycles.
    fn stirling1_enumerated(n: usize, k: usize) -> u64 {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let mut count = 0;
        for p in perms(n) {
            let mut seen = vec![false; n];
            let mut cycles = 0;
            for start in 0..n {
                if !seen[start] {
                    cycles += 1;
                    let mut i = start;
                    while !seen[i] {
                        seen[i] = true;
                        i = p[i];
                    }
                }
            }
            if cycles == k {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn stirling1_matches_cycle_enumeration() {
        assert_eq!(stirling1(4, 2), Integer::from(stirling1_enumerated(4, 2)));
        assert_eq!(stirling1(4, 2), 11);
        for n in 0..=5u64 {
            for k in 0..=n {
                assert_eq!(
                    stirling1(n, k as i64),
                    Integer::from(stirling1_enumerated(n as usize, k as usize)),
                    "stirling1({n},{k})"
                );
            }
        }
    }

    #[test]
    fn stirling1_boundary_identities() {
        for n in 1..=20u64 {
            assert_eq!(stirling1(n, n as i64), 1);
            assert_eq!(stirling1(n, n as i64 - 1), binomial(n, 2));
        }
        // full-row alternating cancellation, n >= 2
        for n in 2..=20u64 {
            let mut sum = Integer::new();
            for k in 1..=n {
                let v = stirling1(n, k as i64);
                if (n - k) % 2 == 0 {
                    sum += v;
                } else {
                    sum -= v;
                }
            }
            assert_eq!(sum, 0, "row {n}");
        }
    }

    /// Set-partition enumeration oracle for the second kind.
    fn stirling2_enumerated(n: usize, k: usize) -> u64 {
        fn blocks(n: usize) -> Vec<usize> {
            // restricted growth strings; returns block counts per partition
            fn rec(i: usize, n: usize, maxb: usize, out: &mut Vec<usize>) {
                if i == n {
                    out.push(maxb);
                    return;
                }
                for b in 0..=maxb {
                    rec(i + 1, n, maxb.max(b + 1), out);
                }
            }
            let mut out = Vec::new();
            if n == 0 {
                out.push(0);
            } else {
                rec(1, n, 1, &mut out);
            }
            out
        }
        blocks(n).into_iter().filter(|&b| b == k).count() as u64
    }

    #[test]
    fn stirling2_matches_enumeration_and_surjection() {
        assert_eq!(stirling2(4, 2), Integer::from(stirling2_enumerated(4, 2)));
        assert_eq!(stirling2(4, 2), 7);
        assert_eq!(stirling2(5, 5), 1);
        for n in 1..=9u64 {
            assert_eq!(stirling2(n, 1), 1);
            for k in 0..=n {
                assert_eq!(stirling2(n, k as i64), stirling2_surjection(n, k));
            }
        }
    }

    #[test]
    fn two_sum_matches_recurrence() {
        assert_eq!(stirling1_two_sum(4, 2).unwrap(), 11);
        assert_eq!(stirling1_two_sum(7, 3).unwrap(), stirling1(7, 3));
        for n in 1..=25u64 {
            assert_eq!(stirling1_two_sum(n, n).unwrap(), 1);
            for k in 1..=n {
                assert_eq!(stirling1_two_sum(n, k).unwrap(), stirling1(n, k as i64));
            }
        }
        assert!(stirling1_two_sum(3, 5).is_err());
    }

    #[test]
    fn r_stirling_reductions_and_product() {
        for n in 1..=10u64 {
            for k in 0..=n as i64 {
                assert_eq!(r_stirling1(n, k, 0), stirling1(n, k));
                assert_eq!(r_stirling1(n, k, 1), stirling1(n, k));
            }
        }
        assert_eq!(r_stirling1(3, 3, 3), 1);
        assert_eq!(r_stirling1(3, 2, 3), 0);
        assert_eq!(r_stirling1(2, 2, 3), 0);
        // product generating identity: prod_{j=r}^{n-1} (z+j) = sum_k [n k]_r z^(k-r)
        for r in 0..=4u64 {
            for n in r..=12u64 {
                let mut poly = vec![Rational::from(1)];
                for j in r..n {
                    // multiply by (z + j)
                    let mut next = vec![Rational::new(); poly.len() + 1];
                    for (i, c) in poly.iter().enumerate() {
                        next[i + 1] += c;
                        next[i] += Rational::from(c * Integer::from(j));
                    }
                    poly = next;
                }
                for (i, c) in poly.iter().enumerate() {
                    let k = r as i64 + i as i64;
                    assert_eq!(
                        Rational::from(r_stirling1(n, k, r)),
                        *c,
                        "n={n} k={k} r={r}"
                    );
                }
            }
        }
        // coefficient of z^1 in (z+2)(z+3)(z+4)
        assert_eq!(r_stirling1(5, 3, 2), 26);
    }

    #[test]
    fn partitions_enumeration() {
        let p4 = partitions(4).unwrap();
        assert_eq!(p4.len(), 5);
        // reverse-lexicographic order
        assert_eq!(p4[0].parts(), vec![4]);
        assert_eq!(p4[1].parts(), vec![3, 1]);
        assert_eq!(p4[2].parts(), vec![2, 2]);
        assert_eq!(p4[3].parts(), vec![2, 1, 1]);
        assert_eq!(p4[4].parts(), vec![1, 1, 1, 1]);

        let p0 = partitions(0).unwrap();
        assert_eq!(p0.len(), 1);
        assert_eq!(p0[0].z_mu(), 1);
        assert_eq!(p0[0].weight(), 0);

        let mu = Partition::from_parts(&[2, 1, 1]);
        assert_eq!(mu.z_mu(), 4);
        assert_eq!(mu.weight(), 4);
        assert_eq!(mu.length(), 3);

        assert!(partitions(61).is_err());
        // partition counts p(1..10)
        let counts: Vec<usize> = (1..=10).map(|s| partitions(s).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn newton_identities() {
        // variables {1,2,3}: p = (6, 14, 36), e_3 = 6
        let p: Vec<Rational> = vec![
            Rational::from(6),
            Rational::from(14),
            Rational::from(36),
        ];
        assert_eq!(e_from_p(&p, 3).unwrap(), Rational::from(6));
        assert_eq!(e_from_p(&p, 2).unwrap(), Rational::from(11));
        assert_eq!(e_from_p(&p, 1).unwrap(), Rational::from(6));
        let empty: Vec<Rational> = vec![];
        assert_eq!(e_from_p(&empty, 0).unwrap(), Rational::from(1));
        assert!(e_from_p(&empty, 1).is_err());
    }

    #[test]
    fn z_mu_expands_elementary_symmetric() {
        // e_s = sum_{mu |- s} eps(mu)/z_mu * p_mu on a concrete variable set
        let vars: Vec<Rational> = vec![
            Rational::from((3, 2)),
            Rational::from(-2),
            Rational::from((7, 3)),
            Rational::from(5),
        ];
        for s in 0..=4u32 {
            let ps: Vec<Rational> = (1..=s)
                .map(|r| {
                    let mut acc = Rational::new();
                    for v in &vars {
                        let mut t = Rational::from(1);
                        for _ in 0..r {
                            t *= v;
                        }
                        acc += t;
                    }
                    acc
                })
                .collect();
            let via_newton = e_from_p(&ps, s as usize).unwrap();
            let mut via_partitions = Rational::new();
            for mu in partitions(s).unwrap() {
                let mut term = Rational::from(1);
                for (part, mult) in mu.multiplicities() {
                    for _ in 0..mult {
                        term *= &ps[(part - 1) as usize];
                    }
                }
                term /= Rational::from(mu.z_mu());
                if (s - mu.length()) % 2 == 1 {
                    term = -term;
                }
                via_partitions += term;
            }
            assert_eq!(via_newton, via_partitions, "s={s}");
        }
    }
}
