//! Elementary arithmetic: factorization, Möbius, totient, divisors.
//!
//! Factorization goes through a linear smallest-prime-factor sieve that is
//! built once on first use. Inputs beyond the sieve bound fall back to trial
//! division.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Upper bound of the shared sieve. Covers the default census ceiling with room
/// for the `2n` indices that the theorem checks touch.
pub const SIEVE_LIMIT: usize = 1 << 20;

/// Canonical prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn radical(&self) -> u64 {
        self.primes().product()
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn totient(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Divisors `d` with `n / d` squarefree, paired with `mu(n / d)`.
    /// These are exactly the terms of the Möbius product for `Phi_n`.
    pub fn mobius_divisors(&self) -> Vec<(u64, i8)> {
        let primes: Vec<u64> = self.primes().collect();
        let mut out = Vec::with_capacity(1 << primes.len());
        for mask in 0u32..(1 << primes.len()) {
            let mut cofactor = 1u64;
            for (i, p) in primes.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    cofactor *= p;
                }
            }
            let mu = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            out.push((self.n / cofactor, mu));
        }
        out.sort_unstable();
        out
    }
}

/// Linear sieve storing the smallest prime factor of every integer up to a bound.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > limit {
                    break;
                }
                spf[m] = p;
            }
        }
        SpfSieve { spf, primes }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit() {
            return None;
        }
        Some(self.spf[n as usize] as u64)
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::Zero);
        }
        if n > self.limit() {
            return Ok(trial_division(n));
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as u64;
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
            m /= p as usize;
        }
        Ok(Factorization { n, factors })
    }
}

fn trial_division(n: u64) -> Factorization {
    let mut factors = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= m) {
        push(d, &mut m);
        d += 2;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Factorization { n, factors }
}

static SIEVE: OnceLock<SpfSieve> = OnceLock::new();

/// The process-wide sieve, built on first call.
pub fn sieve() -> &'static SpfSieve {
    SIEVE.get_or_init(|| SpfSieve::new(SIEVE_LIMIT))
}

pub fn factorize(n: u64) -> Result<Factorization> {
    sieve().factorize(n)
}

pub fn mobius(n: u64) -> Result<i8> {
    factorize(n).map(|f| f.mobius())
}

pub fn totient(n: u64) -> Result<u64> {
    factorize(n).map(|f| f.totient())
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    factorize(n).map(|f| f.divisors())
}

pub fn radical(n: u64) -> Result<u64> {
    factorize(n).map(|f| f.radical())
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).is_ok_and(|f| f.factors == [(n, 1)])
}

/// Shape data for an odd squarefree `n = p_1 ... p_t` with `t >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddSquarefreeProfile {
    pub primes: Vec<u64>,
    pub t: usize,
    /// Number of primes strictly below `p_1 + p_2`.
    pub r: usize,
}

impl OddSquarefreeProfile {
    /// Builds the profile from already-sorted distinct odd primes.
    pub fn from_sorted_primes(primes: Vec<u64>) -> Option<Self> {
        if primes.len() < 2 || primes.iter().any(|&p| p % 2 == 0) {
            return None;
        }
        let bound = primes[0] + primes[1];
        let r = primes.iter().take_while(|&&p| p < bound).count();
        Some(OddSquarefreeProfile {
            t: primes.len(),
            r,
            primes,
        })
    }

    pub fn p1_plus_p2(&self) -> u64 {
        self.primes[0] + self.primes[1]
    }
}

pub fn odd_squarefree_profile(n: u64) -> Option<OddSquarefreeProfile> {
    if n.is_multiple_of(2) {
        return None;
    }
    let f = factorize(n).ok()?;
    if !f.is_squarefree() {
        return None;
    }
    OddSquarefreeProfile::from_sorted_primes(f.primes().collect())
}
