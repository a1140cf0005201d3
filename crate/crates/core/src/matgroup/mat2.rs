use std::fmt;

use crate::modarith::{factorize, inv_mod, legendre, reduce};
use crate::{Error, Result};

/// An invertible 2x2 matrix over `Z/ellZ`, row-major, acting on column
/// vectors from the left.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    ell: u32,
    e: [u32; 4],
}

/// How a matrix sits relative to its eigenvalues over `F_ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spectral {
    Scalar,
    /// Two distinct eigenvalues in `F_ell`.
    SplitSemisimple,
    /// Characteristic polynomial irreducible over `F_ell`.
    Irreducible,
    /// Repeated eigenvalue, not scalar.
    NonSemisimple,
}

impl Mat2 {
    /// Reduces the entries modulo `ell` and rejects singular matrices.
    pub fn new(ell: u32, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if ell < 2 {
            return Err(Error::NotOddPrime(ell as u64));
        }
        let m = ell as u64;
        let e = [a, b, c, d].map(|x| reduce(x, m) as u32);
        let det = (e[0] as u64 * e[3] as u64 + m * m - e[1] as u64 * e[2] as u64 % m) % m;
        if det == 0 {
            return Err(Error::Singular(m));
        }
        Ok(Mat2 { ell, e })
    }

    pub(crate) fn from_raw(ell: u32, e: [u32; 4]) -> Self {
        let m = Mat2 { ell, e };
        debug_assert!(e.iter().all(|&x| x < ell) && m.det() != 0);
        m
    }

    pub fn identity(ell: u32) -> Self {
        Mat2::from_raw(ell, [1, 0, 0, 1])
    }

    pub fn scalar(ell: u32, x: u32) -> Self {
        Mat2::from_raw(ell, [x, 0, 0, x])
    }

    pub fn neg_identity(ell: u32) -> Self {
        Mat2::scalar(ell, ell - 1)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn entries(&self) -> [u32; 4] {
        self.e
    }

    /// Dense integer code `((a ell + b) ell + c) ell + d`, monotone in the
    /// derived ordering.
    pub fn key(&self) -> u64 {
        let m = self.ell as u64;
        self.e.iter().fold(0u64, |acc, &x| acc * m + x as u64)
    }

    pub fn det(&self) -> u32 {
        let m = self.ell as u64;
        let [a, b, c, d] = self.e.map(|x| x as u64);
        ((a * d % m + m - b * c % m) % m) as u32
    }

    pub fn trace(&self) -> u32 {
        ((self.e[0] as u64 + self.e[3] as u64) % self.ell as u64) as u32
    }

    pub fn is_identity(&self) -> bool {
        self.e == [1, 0, 0, 1]
    }

    pub fn is_scalar(&self) -> bool {
        self.e[1] == 0 && self.e[2] == 0 && self.e[0] == self.e[3]
    }

    pub fn checked_mul(&self, other: &Mat2) -> Result<Mat2> {
        if self.ell != other.ell {
            return Err(Error::ModulusMismatch(self.ell as u64, other.ell as u64));
        }
        Ok(self.mul(other))
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        debug_assert_eq!(self.ell, other.ell);
        let m = self.ell as u64;
        let [a, b, c, d] = self.e.map(|x| x as u64);
        let [p, q, r, s] = other.e.map(|x| x as u64);
        Mat2 {
            ell: self.ell,
            e: [
                ((a * p + b * r) % m) as u32,
                ((a * q + b * s) % m) as u32,
                ((c * p + d * r) % m) as u32,
                ((c * q + d * s) % m) as u32,
            ],
        }
    }

    pub fn inv(&self) -> Mat2 {
        let m = self.ell as u64;
        let di = inv_mod(self.det() as u64, m);
        let [a, b, c, d] = self.e.map(|x| x as u64);
        let neg = |x: u64| (m - x) % m;
        Mat2 {
            ell: self.ell,
            e: [d * di % m, neg(b) * di % m, neg(c) * di % m, a * di % m].map(|x| x as u32),
        }
    }

    pub fn pow(&self, mut k: u64) -> Mat2 {
        let mut base = *self;
        let mut acc = Mat2::identity(self.ell);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// `g m g^-1`.
    pub fn conj_by(&self, g: &Mat2) -> Mat2 {
        g.mul(self).mul(&g.inv())
    }

    /// Least `k >= 1` with `m^k = I`.
    ///
    /// Every element order divides `ell (ell^2 - 1)`; the divisor is
    /// refined one prime at a time.
    pub fn order(&self) -> u64 {
        let l = self.ell as u64;
        let mut n = l * (l * l - 1);
        let factors = factorize(n).expect("positive");
        for (p, _) in factors {
            while n % p == 0 && self.pow(n / p).is_identity() {
                n /= p;
            }
        }
        n
    }

    /// `trace^2 - 4 det` reduced modulo `ell`.
    pub fn discriminant(&self) -> u32 {
        let m = self.ell as u64;
        let t = self.trace() as u64;
        ((t * t % m + m * 4 - 4 * self.det() as u64 % m) % m) as u32
    }

    pub fn spectral_profile(&self) -> Spectral {
        if self.is_scalar() {
            return Spectral::Scalar;
        }
        let disc = self.discriminant();
        if disc == 0 {
            return Spectral::NonSemisimple;
        }
        match legendre(disc as i64, self.ell as u64) {
            Ok(1) => Spectral::SplitSemisimple,
            _ => Spectral::Irreducible,
        }
    }

    /// Whether 1 is an eigenvalue.
    pub fn has_eigenvalue_one(&self) -> bool {
        let m = self.ell as u64;
        // char poly at 1: 1 - trace + det
        (1 + m + self.det() as u64 - self.trace() as u64) % m == 0
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "{a},{b},{c},{d}")
    }
}
