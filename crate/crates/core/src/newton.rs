//! Power sums over primitive roots of unity and the Newton-identity recursion
//! for the leading coefficients of `Phi_n`.
//!
//! Throughout, `sigma_k(n)` is the coefficient of `Phi_n` at `x^(phi(n) - k)`,
//! and `S_k(n)` is the sum of `k`-th powers of the primitive `n`-th roots of
//! unity. The roots themselves are never materialized.

use std::collections::BTreeMap;

use num_integer::gcd;

use crate::error::{Error, Result};
use crate::numthy::{self, OddSquarefreeProfile};

/// Odd squarefree `n > 1`, carried with its primes so large products never
/// need refactoring.
#[derive(Debug, Clone, PartialEq, Eq)]
struct OddSquarefree {
    n: u64,
    primes: Vec<u64>,
}

impl OddSquarefree {
    fn from_n(n: u64) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::NotOddSquarefree(n));
        }
        let f = numthy::factorize(n)?;
        if !f.is_squarefree() {
            return Err(Error::NotOddSquarefree(n));
        }
        Ok(OddSquarefree {
            n,
            primes: f.primes().collect(),
        })
    }

    fn from_primes(primes: &[u64]) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::InvalidPrimes("empty list".into()));
        }
        if let Some(w) = primes.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPrimes(format!(
                "not strictly ascending at {} >= {}",
                w[0], w[1]
            )));
        }
        if let Some(&p) = primes.iter().find(|&&p| p % 2 == 0 || !numthy::is_prime(p)) {
            return Err(Error::InvalidPrimes(format!("{p} is not an odd prime")));
        }
        let n = primes
            .iter()
            .try_fold(1u64, |acc, &p| acc.checked_mul(p))
            .ok_or_else(|| Error::InvalidPrimes("product exceeds 64 bits".into()))?;
        Ok(OddSquarefree {
            n,
            primes: primes.to_vec(),
        })
    }

    fn t(&self) -> usize {
        self.primes.len()
    }

    fn totient(&self) -> u64 {
        self.primes.iter().map(|p| p - 1).product()
    }

    /// `(-1)^t * phi(g) * mu(g)` with `g = gcd(n, k)`.
    fn power_sum(&self, k: u64) -> i64 {
        let mut phi_g = 1i64;
        let mut mu_g = 1i64;
        for &p in &self.primes {
            if k.is_multiple_of(p) {
                phi_g *= (p - 1) as i64;
                mu_g = -mu_g;
            }
        }
        let sign = if self.t().is_multiple_of(2) { 1 } else { -1 };
        sign * phi_g * mu_g
    }

    fn sigma_prefix(&self, len: usize) -> Result<Vec<i64>> {
        let phi = self.totient();
        if len as u64 > phi {
            return Err(Error::OutOfRange {
                n: self.n,
                k: len as u64,
                reason: "prefix length exceeds phi(n)",
            });
        }
        let sums: Vec<i128> = (1..=len as u64)
            .map(|k| self.power_sum(k) as i128)
            .collect();
        newton_recursion(self.n, &sums)
    }
}

/// `k sigma_k = -(sigma_{k-1} S_1 + ... + sigma_0 S_k)`, `sigma_0 = 1`.
fn newton_recursion(n: u64, sums: &[i128]) -> Result<Vec<i64>> {
    let overflow = || Error::Overflow { n };
    let mut sigma: Vec<i128> = Vec::with_capacity(sums.len() + 1);
    sigma.push(1);
    for k in 1..=sums.len() {
        let mut acc = 0i128;
        for i in 1..=k {
            let term = sigma[k - i].checked_mul(sums[i - 1]).ok_or_else(overflow)?;
            acc = acc.checked_add(term).ok_or_else(overflow)?;
        }
        let k_wide = k as i128;
        if acc % k_wide != 0 {
            return Err(Error::InexactDivision { n, k: k as u64 });
        }
        sigma.push(-acc / k_wide);
    }
    sigma
        .into_iter()
        .map(|s| i64::try_from(s).map_err(|_| overflow()))
        .collect()
}

/// `S_k(n)` for odd squarefree `n > 1`, by the closed form
/// `(-1)^t phi(gcd(n,k)) mu(gcd(n,k))`.
pub fn power_sum(n: u64, k: u64) -> Result<i64> {
    if k == 0 {
        return Err(Error::Zero);
    }
    Ok(OddSquarefree::from_n(n)?.power_sum(k))
}

/// `S_k(n)` for any `n >= 1`: `phi(n) / phi(m) * mu(m)` with `m = n / gcd(k, n)`.
pub fn power_sum_general(n: u64, k: u64) -> Result<i64> {
    if n == 0 || k == 0 {
        return Err(Error::Zero);
    }
    let m = n / gcd(n, k);
    let phi_n = numthy::totient(n)?;
    let phi_m = numthy::totient(m)?;
    debug_assert_eq!(phi_n % phi_m, 0);
    Ok((phi_n / phi_m) as i64 * numthy::mobius(m)? as i64)
}

/// `S_1(n) .. S_K(n)` for an odd squarefree `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumTable {
    n: u64,
    values: Vec<i64>,
}

impl PowerSumTable {
    pub fn new(n: u64, len: usize) -> Result<Self> {
        let osf = OddSquarefree::from_n(n)?;
        let values = (1..=len as u64).map(|k| osf.power_sum(k)).collect();
        Ok(PowerSumTable { n, values })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `S_k` for `1 <= k <= len`.
    pub fn get(&self, k: usize) -> Option<i64> {
        k.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// `sigma_0 .. sigma_K` of `Phi_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaPrefix {
    pub n: u64,
    pub sigma: Vec<i64>,
}

pub fn sigma_prefix(n: u64, len: usize) -> Result<SigmaPrefix> {
    let osf = OddSquarefree::from_n(n)?;
    let sigma = osf.sigma_prefix(len)?;
    Ok(SigmaPrefix { n, sigma })
}

/// Piecewise value of `sigma_k` for `1 <= k < p_1 + p_2` and an odd prime count.
///
/// `1` below `p_1`, `0` on `[p_1, p_2)`, and `-(i - 1)` on `[p_i, p_{i+1})`
/// for `2 <= i <= r`, where the last interval ends at `p_1 + p_2`.
pub fn sigma_closed_form(n: u64, k: u64) -> Result<i64> {
    let osf = OddSquarefree::from_n(n)?;
    let profile =
        OddSquarefreeProfile::from_sorted_primes(osf.primes).ok_or(Error::NotOddSquarefree(n))?;
    closed_form_for(n, &profile, k)
}

fn closed_form_for(n: u64, profile: &OddSquarefreeProfile, k: u64) -> Result<i64> {
    if profile.t < 3 || profile.t.is_multiple_of(2) {
        return Err(Error::OutOfRange {
            n,
            k,
            reason: "closed form needs an odd number (at least 3) of prime factors",
        });
    }
    if k == 0 || k >= profile.p1_plus_p2() {
        return Err(Error::OutOfRange {
            n,
            k,
            reason: "closed form holds only for 1 <= k < p1 + p2",
        });
    }
    let p = &profile.primes;
    Ok(if k < p[0] {
        1
    } else if k < p[1] {
        0
    } else {
        // i = number of primes <= k, at least 2 and at most r here.
        let i = p.iter().take_while(|&&q| q <= k).count() as i64;
        -(i - 1)
    })
}

/// Outcome of checking the coefficient range guaranteed for `Phi_{2n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremMainReport {
    pub n: u64,
    pub primes: Vec<u64>,
    pub t: usize,
    pub r: usize,
    /// `-(r-2) ..= r-1`.
    pub guaranteed: Vec<i64>,
    /// `1 + p_r < p_1 + p_2`, in which case `1 - r` is also required.
    pub extra_minus: bool,
    pub verified: bool,
    /// Required value -> exponent of `Phi_{2n}` carrying it.
    pub witness: BTreeMap<i64, u64>,
    /// Required values with no witness in the inspected prefix.
    pub missing: Vec<i64>,
}

impl TheoremMainReport {
    /// Every value the check must witness: the guaranteed range plus `1 - r`
    /// when `extra_minus` holds.
    pub fn required(&self) -> Vec<i64> {
        let mut req = self.guaranteed.clone();
        if self.extra_minus {
            req.insert(0, 1 - self.r as i64);
        }
        req
    }
}

/// Checks that `Phi_{2n}`, `n = prod primes`, carries every coefficient in
/// `-(r-2) ..= r-1` (and `1 - r` when `1 + p_r < p_1 + p_2`).
///
/// Only `sigma_k` for `k < p_1 + p_2` are computed. With `phi(n)` even, the
/// coefficient of `Phi_{2n}(x) = Phi_n(-x)` at `x^(phi(n) - k)` is
/// `(-1)^k sigma_k(n)`.
pub fn verify_theorem_main(primes: &[u64]) -> Result<TheoremMainReport> {
    if primes.len() < 3 || primes.len().is_multiple_of(2) {
        return Err(Error::InvalidPrimes(format!(
            "need an odd number of primes, at least 3; got {}",
            primes.len()
        )));
    }
    let osf = OddSquarefree::from_primes(primes)?;
    let profile =
        OddSquarefreeProfile::from_sorted_primes(osf.primes.clone()).expect("validated odd primes");
    let phi = osf.totient();
    let bound = profile.p1_plus_p2();
    let r = profile.r;
    let sigma = osf.sigma_prefix((bound - 1) as usize)?;

    let guaranteed: Vec<i64> = (-(r as i64 - 2)..=(r as i64 - 1)).collect();
    let extra_minus = 1 + profile.primes[r - 1] < bound;

    let mut seen: BTreeMap<i64, u64> = BTreeMap::new();
    for (k, &s) in sigma.iter().enumerate() {
        let value = if k % 2 == 0 { s } else { -s };
        seen.entry(value).or_insert(phi - k as u64);
    }

    let mut report = TheoremMainReport {
        n: osf.n,
        primes: primes.to_vec(),
        t: profile.t,
        r,
        guaranteed,
        extra_minus,
        verified: false,
        witness: BTreeMap::new(),
        missing: Vec::new(),
    };
    for v in report.required() {
        match seen.get(&v) {
            Some(&e) => {
                report.witness.insert(v, e);
            }
            None => report.missing.push(v),
        }
    }
    report.verified = report.missing.is_empty();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{phi_poly_division, phi_poly_negate_odd, phi_poly_series};

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum(105, 1), Ok(-1));
        assert_eq!(power_sum(105, 3), Ok(2));
        assert_eq!(power_sum(105, 15), Ok(-8));
        assert_eq!(power_sum(105, 7), power_sum_general(105, 7));
        assert_eq!(power_sum(210, 1), Err(Error::NotOddSquarefree(210)));
        assert_eq!(power_sum(45, 1), Err(Error::NotOddSquarefree(45)));
        assert_eq!(power_sum(1, 1), Err(Error::NotOddSquarefree(1)));
    }

    #[test]
    fn power_sum_general_examples() {
        for k in 1..20 {
            assert_eq!(power_sum_general(1, k), Ok(1));
        }
        assert_eq!(power_sum_general(4, 2), Ok(-2));
        assert_eq!(power_sum_general(0, 2), Err(Error::Zero));
    }

    #[test]
    fn table_lookup() {
        let t = PowerSumTable::new(105, 15).unwrap();
        assert_eq!(t.get(0), None);
        assert_eq!(t.get(3), Some(2));
        assert_eq!(t.get(15), Some(-8));
        assert_eq!(t.get(16), None);
    }

    #[test]
    fn sigma_prefix_examples() {
        assert_eq!(
            sigma_prefix(105, 7).unwrap().sigma,
            vec![1, 1, 1, 0, 0, -1, -1, -2]
        );
        // Two prime factors, so the odd-t ladder does not apply:
        // Phi_15 = x^8 - x^7 + x^5 - x^4 + x^3 - x + 1.
        assert_eq!(sigma_prefix(15, 4).unwrap().sigma, vec![1, -1, 0, 1, -1]);
        let s = sigma_prefix(15015, 7).unwrap().sigma;
        assert_eq!(&s[5..], &[-1, -1, -2]);
        let top = phi_poly_series(15015).unwrap();
        for (k, &sk) in s.iter().enumerate() {
            assert_eq!(top.sigma(k), Some(sk));
        }
        assert!(matches!(sigma_prefix(15, 9), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn full_prefix_recovers_polynomial() {
        // K = phi(n) reconstructs every coefficient, including t even.
        for n in [15u64, 21, 105, 165, 195, 231, 385] {
            let v = phi_poly_division(n).unwrap();
            let s = sigma_prefix(n, v.degree()).unwrap().sigma;
            for (k, &sk) in s.iter().enumerate() {
                assert_eq!(v.sigma(k), Some(sk), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(sigma_closed_form(105, 2), Ok(1));
        assert_eq!(sigma_closed_form(105, 6), Ok(-1));
        assert_eq!(sigma_closed_form(385, 11), Ok(-2));
        assert!(matches!(
            sigma_closed_form(105, 8),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            sigma_closed_form(105, 0),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            sigma_closed_form(1155, 3),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn theorem_main_examples() {
        let rep = verify_theorem_main(&[3, 5, 7]).unwrap();
        assert_eq!(rep.r, 3);
        assert_eq!(rep.guaranteed, vec![-1, 0, 1, 2]);
        assert!(!rep.extra_minus);
        assert!(rep.verified);
        let phi210 = phi_poly_negate_odd(&phi_poly_series(105).unwrap()).unwrap();
        for (&v, &e) in &rep.witness {
            assert_eq!(phi210.coeffs()[e as usize], v);
        }

        let rep = verify_theorem_main(&[5, 7, 11]).unwrap();
        assert_eq!((rep.r, rep.extra_minus, rep.verified), (3, false, true));
        assert_eq!(rep.guaranteed, vec![-1, 0, 1, 2]);

        let rep = verify_theorem_main(&[7, 11, 13, 17, 19]).unwrap();
        assert_eq!(rep.n, 7 * 11 * 13 * 17 * 19);
        assert_eq!((rep.r, rep.extra_minus, rep.verified), (4, false, true));
        assert_eq!(rep.guaranteed, vec![-2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn theorem_main_extra_minus() {
        // r = 4 over {11, 13, 17, 19} and 1 + 19 < 11 + 13, so -3 is required too.
        let rep = verify_theorem_main(&[11, 13, 17, 19, 29]).unwrap();
        assert_eq!(rep.r, 4);
        assert!(rep.extra_minus);
        assert!(rep.verified);
        assert!(rep.witness.contains_key(&-3));
    }

    #[test]
    fn theorem_main_rejects_bad_input() {
        assert!(matches!(
            verify_theorem_main(&[3, 5]),
            Err(Error::InvalidPrimes(_))
        ));
        assert!(matches!(
            verify_theorem_main(&[5, 3, 7]),
            Err(Error::InvalidPrimes(_))
        ));
        assert!(matches!(
            verify_theorem_main(&[3, 5, 9]),
            Err(Error::InvalidPrimes(_))
        ));
        assert!(matches!(
            verify_theorem_main(&[2, 5, 7]),
            Err(Error::InvalidPrimes(_))
        ));
        assert!(matches!(
            verify_theorem_main(&[3, 3, 7]),
            Err(Error::InvalidPrimes(_))
        ));
    }
}
