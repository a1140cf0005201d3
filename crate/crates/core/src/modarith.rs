//! Arithmetic modulo an odd prime and the elementary number theory behind
//! the index-set formulas: Legendre symbols, 2-adic valuations, prime
//! divisor profiles and divisor lists.

use crate::{Error, Result};

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 2;
    }
    true
}

pub(crate) fn require_odd_prime(ell: u64) -> Result<()> {
    if ell % 2 == 1 && is_prime(ell) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(ell))
    }
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of a unit modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Least nonnegative residue of a signed integer.
pub fn reduce(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// Legendre symbol `(a / ell)` for an odd prime `ell`.
pub fn legendre(a: i64, ell: u64) -> Result<i8> {
    require_odd_prime(ell)?;
    Ok(jacobi(reduce(a, ell), ell))
}

// Binary Jacobi symbol; `n` odd.
fn jacobi(mut a: u64, mut n: u64) -> i8 {
    let mut sign = 1i8;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// 2-adic valuation.
pub fn nu2(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    Ok(n.trailing_zeros())
}

/// Prime divisors of `n`, together with the odd ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeProfile {
    pub primes: Vec<u64>,
    pub odd_primes: Vec<u64>,
}

pub fn prime_profile(n: u64) -> Result<PrimeProfile> {
    let primes: Vec<u64> = factorize(n)?.into_iter().map(|(p, _)| p).collect();
    let odd_primes = primes.iter().copied().filter(|&p| p > 2).collect();
    Ok(PrimeProfile { primes, odd_primes })
}

/// Prime factorization by trial division, ascending.
pub fn factorize(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n)? {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `ell (ell + 1) (ell - 1)^2`, or `None` on overflow.
pub fn gl2_order(ell: u64) -> Option<u64> {
    ell.checked_mul(ell + 1)?
        .checked_mul(ell - 1)?
        .checked_mul(ell - 1)
}

/// Multiplicative order of a unit modulo the prime `p`.
pub fn unit_order(a: u64, p: u64) -> u64 {
    let mut n = p - 1;
    for (q, _) in factorize(p - 1).expect("p >= 2") {
        while n % q == 0 && pow_mod(a, n / q, p) == 1 {
            n /= q;
        }
    }
    n
}

/// An odd prime with its fixed quadratic nonresidue and primitive root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeCtx {
    ell: u32,
    epsilon: u32,
    alpha: u32,
}

impl PrimeCtx {
    /// Picks the smallest positive nonresidue and the smallest primitive root.
    pub fn new(ell: u64) -> Result<Self> {
        require_odd_prime(ell)?;
        if ell > u32::MAX as u64 || gl2_order(ell).is_none() {
            return Err(Error::Overflow(ell));
        }
        let epsilon = (2..ell)
            .find(|&e| jacobi(e, ell) == -1)
            .expect("an odd prime has a nonresidue");
        let alpha = (2..ell)
            .find(|&a| unit_order(a, ell) == ell - 1)
            .unwrap_or(1); // ell = 3 has root 2, found above; only ell = 2 would miss
        Ok(PrimeCtx {
            ell: ell as u32,
            epsilon: epsilon as u32,
            alpha: alpha as u32,
        })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn epsilon(&self) -> u32 {
        self.epsilon
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// `|GL2(ell)|`; cannot overflow by construction.
    pub fn gl2_order(&self) -> u64 {
        gl2_order(self.ell as u64).unwrap()
    }

    pub fn is_square(&self, x: u32) -> bool {
        x % self.ell != 0 && jacobi(x as u64, self.ell as u64) == 1
    }

    /// Units that are squares, ascending.
    pub fn squares(&self) -> Vec<u32> {
        (1..self.ell).filter(|&x| self.is_square(x)).collect()
    }
}

/// Alias matching the free-function style of the other helpers.
pub fn make_ctx(ell: u64) -> Result<PrimeCtx> {
    PrimeCtx::new(ell)
}
