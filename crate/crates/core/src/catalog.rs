//! The known exceptional (non-surjective, non-CM) mod-`ell` images, and the
//! CM data deciding which normalizer or Borel-type images occur.

use std::sync::OnceLock;

use serde::Serialize;

use crate::indexsets::ImageKind;
use crate::matgroup::{generated_order, Mat2, MatGroup};
use crate::modarith::{gcd, gl2_order, legendre, require_odd_prime, PrimeCtx};
use crate::{Error, Result};

const DATA: &str = include_str!("../data/exceptional_images.txt");

/// The `D` with `Q(sqrt(-D))` an imaginary quadratic order of class number one.
pub const CM_DISCRIMINANTS: [i64; 9] = [3, 4, 7, 8, 11, 19, 43, 67, 163];

/// Odd primes `ell` with `Q(sqrt(-ell))` of class number one.
pub const CLASS_NUMBER_ONE: [u64; 7] = [3, 7, 11, 19, 43, 67, 163];

/// One exceptional image: its index in `GL2(Z/ellZ)` and generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalRecord {
    pub ell: u64,
    pub index: u64,
    pub generators: Vec<Mat2>,
    /// Line number in the data file, for error reports.
    pub line: usize,
}

impl ExceptionalRecord {
    /// The generated group; the record's prime must be odd.
    pub fn group(&self) -> Result<MatGroup> {
        MatGroup::closure(PrimeCtx::new(self.ell)?, &self.generators)
    }

    /// Order of the generated group, computed directly (works for `ell = 2` too).
    pub fn generated_order(&self) -> u64 {
        generated_order(self.ell as u32, &self.generators) as u64
    }

    /// Whether the stated index matches the generated group.
    pub fn is_consistent(&self) -> bool {
        gl2_order(self.ell) == Some(self.generated_order() * self.index)
    }
}

fn parse_line(line: &str, lineno: usize) -> Result<ExceptionalRecord> {
    let bad = |what: &str| Error::Catalog(format!("line {lineno}: {what}"));
    let mut fields = line.split_whitespace();
    let ell: u64 = fields.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("missing ell"))?;
    let index: u64 = fields.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("missing index"))?;
    let mut generators = Vec::new();
    if let Some(gens) = fields.next() {
        for g in gens.split(';') {
            let e: Vec<i64> = g
                .split(',')
                .map(|x| x.parse().map_err(|_| bad("bad matrix entry")))
                .collect::<Result<_>>()?;
            if e.len() != 4 {
                return Err(bad("matrix needs four entries"));
            }
            generators.push(Mat2::new(ell as u32, e[0], e[1], e[2], e[3]).map_err(|e| bad(&e.to_string()))?);
        }
    }
    if fields.next().is_some() {
        return Err(bad("trailing fields"));
    }
    Ok(ExceptionalRecord {
        ell,
        index,
        generators,
        line: lineno,
    })
}

/// Every record in the data file, `ell = 2` rows included, unvalidated.
pub fn all_records() -> Result<&'static [ExceptionalRecord]> {
    static RECORDS: OnceLock<Result<Vec<ExceptionalRecord>>> = OnceLock::new();
    RECORDS
        .get_or_init(|| {
            DATA.lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
                .map(|(i, l)| parse_line(l, i + 1))
                .collect()
        })
        .as_deref()
        .map_err(Clone::clone)
}

/// The exceptional images for an odd prime, checked against their stated index.
pub fn exceptional_groups(ell: u64) -> Result<Vec<ExceptionalRecord>> {
    require_odd_prime(ell)?;
    let out: Vec<ExceptionalRecord> = all_records()?.iter().filter(|r| r.ell == ell).cloned().collect();
    for r in &out {
        if !r.is_consistent() {
            return Err(Error::Catalog(format!(
                "line {}: generated order {} times index {} is not |GL2({ell})|",
                r.line,
                r.generated_order(),
                r.index
            )));
        }
    }
    Ok(out)
}

/// Primes with at least one exceptional image.
pub fn exceptional_primes() -> Result<Vec<u64>> {
    let mut v: Vec<u64> = all_records()?.iter().map(|r| r.ell).filter(|&l| l > 2).collect();
    v.dedup();
    Ok(v)
}

/// `(ell in P, ell in Q)`: all nine `(-D/ell)` equal to 1, respectively -1.
pub fn pq_membership(ell: u64) -> Result<(bool, bool)> {
    let symbols = CM_DISCRIMINANTS
        .iter()
        .map(|&d| legendre(-d, ell))
        .collect::<Result<Vec<i8>>>()?;
    Ok((symbols.iter().all(|&s| s == 1), symbols.iter().all(|&s| s == -1)))
}

/// Which Cartan-normalizer or Borel-type images occur for CM curves at `ell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmProfile {
    pub ell: u64,
    pub in_p: bool,
    pub in_q: bool,
    pub class_number_one: bool,
    pub image_kinds: Vec<ImageKind>,
}

pub fn cm_profile(ell: u64) -> Result<CmProfile> {
    let (in_p, in_q) = pq_membership(ell)?;
    let class_number_one = CLASS_NUMBER_ONE.contains(&ell);
    let image_kinds = if class_number_one {
        vec![ImageKind::Ns, ImageKind::Nns, ImageKind::BorelTrio]
    } else if in_p {
        vec![ImageKind::Ns]
    } else if in_q {
        vec![ImageKind::Nns]
    } else {
        vec![ImageKind::Ns, ImageKind::Nns]
    };
    Ok(CmProfile {
        ell,
        in_p,
        in_q,
        class_number_one,
        image_kinds,
    })
}

/// Class number of `Q(sqrt(-ell))` for `ell = 3 mod 4`, by counting reduced
/// primitive forms `ax^2 + bxy + cy^2` of discriminant `-ell`.
pub fn class_number(ell: u64) -> Result<u64> {
    require_odd_prime(ell)?;
    if ell % 4 != 3 {
        return Err(Error::Hypothesis(format!("class number needs ell = 3 mod 4, got {ell}")));
    }
    let d = ell as i64;
    let mut h = 0;
    // reduced forms have 3a^2 <= ell
    let mut a = 1i64;
    while 3 * a * a <= d {
        for b in -a + 1..=a {
            let num = b * b + d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if gcd(gcd(a as u64, b.unsigned_abs()), c as u64) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    Ok(h)
}
