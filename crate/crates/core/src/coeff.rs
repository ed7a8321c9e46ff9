//! Exact coefficient vectors of cyclotomic polynomials.
//!
//! Two engines that share no code path:
//!
//! * [`phi_poly_series`] expands the Möbius product
//!   `Phi_n(x) = prod_{d | n} (1 - x^d)^{mu(n/d)}` as a truncated power series
//!   over the lower half of the coefficients, then mirrors by palindromy.
//! * [`DivisionEngine`] divides `x^n - 1` by every `Phi_d`, `d | n`, `d < n`,
//!   using schoolbook long division and a bounded memo of earlier results.

use std::num::NonZeroUsize;
use std::sync::Arc;

use lru::LruCache;
use num_traits::{CheckedAdd, CheckedSub, One, Zero};

use crate::error::{Error, Result};
use crate::numthy::{self, Factorization};

/// Dense coefficient vector of `Phi_n`; `coeffs[j]` is the coefficient of `x^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffVec {
    n: u64,
    coeffs: Vec<i64>,
}

impl CoeffVec {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^(phi(n) - k)`.
    pub fn sigma(&self, k: usize) -> Option<i64> {
        self.degree().checked_sub(k).map(|j| self.coeffs[j])
    }

    pub fn max_abs(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn eval_at_one(&self) -> i128 {
        self.coeffs.iter().map(|&c| c as i128).sum()
    }

    pub fn value_set(&self) -> Vec<i64> {
        coefficient_value_set(self)
    }
}

/// Sorted distinct coefficient values of `v`.
pub fn coefficient_value_set(v: &CoeffVec) -> Vec<i64> {
    let mut vals = v.coeffs.clone();
    vals.sort_unstable();
    vals.dedup();
    vals
}

/// `Phi_n(x)` via the truncated Möbius product.
pub fn phi_poly_series(n: u64) -> Result<CoeffVec> {
    if n == 0 {
        return Err(Error::Zero);
    }
    if n == 1 {
        return Ok(CoeffVec {
            n,
            coeffs: vec![-1, 1],
        });
    }
    let fac = numthy::factorize(n)?;
    let phi = fac.totient() as usize;
    let half = lower_half(&fac)?;
    let coeffs = (0..=phi).map(|j| half[j.min(phi - j)]).collect();
    Ok(CoeffVec { n, coeffs })
}

/// Coefficients `0..=phi(n)/2` of `Phi_n` for `n > 1`.
///
/// Runs on checked `i64` and re-runs on `i128` if an intermediate overflows.
/// The result must fit `i64`, otherwise [`Error::Overflow`] names `n`.
pub(crate) fn lower_half(fac: &Factorization) -> Result<Vec<i64>> {
    let n = fac.n();
    debug_assert!(n > 1);
    let phi = fac.totient() as usize;
    let terms = fac.mobius_divisors();
    // One coefficient past the midpoint, used as a palindromy self-check.
    let len = phi / 2 + 2;
    let half = match truncated_product::<i64>(&terms, len) {
        Some(v) => v,
        None => truncated_product::<i128>(&terms, len)
            .ok_or(Error::Overflow { n })?
            .into_iter()
            .map(|c| i64::try_from(c).map_err(|_| Error::Overflow { n }))
            .collect::<Result<_>>()?,
    };
    assert_eq!(half[0], 1, "Phi_{n} series lost monic normalization");
    if phi >= 2 {
        let mid = phi / 2;
        assert_eq!(
            half[mid + 1],
            half[mid - 1],
            "Phi_{n} series is not palindromic around x^{mid}"
        );
    }
    let mut half = half;
    half.truncate(phi / 2 + 1);
    Ok(half)
}

fn truncated_product<T>(terms: &[(u64, i8)], len: usize) -> Option<Vec<T>>
where
    T: Copy + Zero + One + CheckedAdd + CheckedSub,
{
    let mut a = vec![T::zero(); len];
    a[0] = T::one();
    // Multiplications first: dividing first lets partial sums grow without bound.
    for &(d, _) in terms.iter().filter(|&&(_, mu)| mu == 1) {
        let d = d as usize;
        if d >= len {
            continue;
        }
        for j in (d..len).rev() {
            a[j] = a[j].checked_sub(&a[j - d])?;
        }
    }
    for &(d, _) in terms.iter().filter(|&&(_, mu)| mu == -1) {
        let d = d as usize;
        if d >= len {
            continue;
        }
        for j in d..len {
            a[j] = a[j].checked_add(&a[j - d])?;
        }
    }
    Some(a)
}

/// `Phi_{2n}` from `Phi_n` for odd `n > 1`, using `Phi_{2n}(x) = Phi_n(-x)`.
pub fn phi_poly_negate_odd(v: &CoeffVec) -> Result<CoeffVec> {
    if v.n.is_multiple_of(2) || v.n == 1 {
        return Err(Error::NotOddIndex(v.n));
    }
    let coeffs = v
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, &c)| if j % 2 == 1 { -c } else { c })
        .collect();
    Ok(CoeffVec { n: 2 * v.n, coeffs })
}

/// `Phi_n` by inductive long division with a fresh engine.
pub fn phi_poly_division(n: u64) -> Result<CoeffVec> {
    DivisionEngine::default().compute(n)
}

/// Inductive-definition engine with an LRU memo of `Phi_d`.
///
/// Single-owner: the memo is mutated on every call. Give each thread its own
/// engine.
pub struct DivisionEngine {
    cache: LruCache<u64, Arc<Vec<i128>>>,
}

impl Default for DivisionEngine {
    fn default() -> Self {
        Self::with_capacity(4096)
    }
}

impl DivisionEngine {
    pub fn with_capacity(capacity: usize) -> Self {
        let cap = NonZeroUsize::new(capacity.max(1)).unwrap();
        DivisionEngine {
            cache: LruCache::new(cap),
        }
    }

    pub fn cached(&self) -> usize {
        self.cache.len()
    }

    pub fn compute(&mut self, n: u64) -> Result<CoeffVec> {
        if n == 0 {
            return Err(Error::Zero);
        }
        let poly = self.poly(n)?;
        let coeffs = poly
            .iter()
            .map(|&c| i64::try_from(c).map_err(|_| Error::Overflow { n }))
            .collect::<Result<_>>()?;
        Ok(CoeffVec { n, coeffs })
    }

    fn poly(&mut self, n: u64) -> Result<Arc<Vec<i128>>> {
        if let Some(p) = self.cache.get(&n) {
            return Ok(Arc::clone(p));
        }
        let result = if n == 1 {
            vec![-1, 1]
        } else {
            let mut factors = Vec::new();
            for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
                factors.push(self.poly(d)?);
            }
            // Largest divisor polynomials first so the dividend shrinks quickly.
            factors.sort_by_key(|p| std::cmp::Reverse(p.len()));
            let mut num = vec![0i128; n as usize + 1];
            num[0] = -1;
            num[n as usize] = 1;
            for den in &factors {
                num = div_monic(&num, den).map_err(|fail| match fail {
                    DivFail::Overflow => Error::Overflow { n },
                    DivFail::Remainder => Error::InexactDivision {
                        n,
                        k: (den.len() - 1) as u64,
                    },
                })?;
            }
            num
        };
        let result = Arc::new(result);
        self.cache.put(n, Arc::clone(&result));
        Ok(result)
    }
}

enum DivFail {
    Overflow,
    Remainder,
}

fn div_monic(num: &[i128], den: &[i128]) -> std::result::Result<Vec<i128>, DivFail> {
    let m = den.len() - 1;
    debug_assert_eq!(den[m], 1);
    if num.len() <= m {
        return Err(DivFail::Remainder);
    }
    let qlen = num.len() - m;
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + m];
        if c == 0 {
            continue;
        }
        quot[i] = c;
        rem[i + m] = 0;
        for (j, &dj) in den[..m].iter().enumerate() {
            if dj != 0 {
                let prod = c.checked_mul(dj).ok_or(DivFail::Overflow)?;
                rem[i + j] = rem[i + j].checked_sub(prod).ok_or(DivFail::Overflow)?;
            }
        }
    }
    if rem[..m].iter().any(|&r| r != 0) {
        return Err(DivFail::Remainder);
    }
    Ok(quot)
}
