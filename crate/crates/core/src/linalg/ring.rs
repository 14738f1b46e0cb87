use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::LinalgError;

/// Largest prime accepted for `F_p`; keeps products of residues inside `i64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// Coefficient ring for every module in the crate.
///
/// All matrices carry integer entries; the ring decides how they are read.
/// Over `F_p` entries are canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ring {
    Rationals,
    PrimeField(u64),
    Integers,
}

impl Ring {
    /// Builds `F_p`, rejecting composite or oversized `p`.
    pub fn prime_field(p: u64) -> Result<Self, LinalgError> {
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(LinalgError::PrimeTooLarge(p));
        }
        Ok(Ring::PrimeField(p))
    }

    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Ring::PrimeField(p) => p,
            _ => 0,
        }
    }

    /// Maps an integer to its canonical representative.
    #[inline]
    pub fn normalize(self, x: i64) -> i64 {
        match self {
            Ring::PrimeField(p) => x.rem_euclid(p as i64),
            _ => x,
        }
    }

    #[inline]
    pub fn add(self, a: i64, b: i64) -> i64 {
        match self {
            Ring::PrimeField(p) => ((a as i128 + b as i128).rem_euclid(p as i128)) as i64,
            _ => a.checked_add(b).unwrap_or_else(|| overflow()),
        }
    }

    #[inline]
    pub fn sub(self, a: i64, b: i64) -> i64 {
        match self {
            Ring::PrimeField(p) => ((a as i128 - b as i128).rem_euclid(p as i128)) as i64,
            _ => a.checked_sub(b).unwrap_or_else(|| overflow()),
        }
    }

    #[inline]
    pub fn mul(self, a: i64, b: i64) -> i64 {
        match self {
            Ring::PrimeField(p) => ((a as i128 * b as i128).rem_euclid(p as i128)) as i64,
            _ => a.checked_mul(b).unwrap_or_else(|| overflow()),
        }
    }

    #[inline]
    pub fn neg(self, a: i64) -> i64 {
        match self {
            Ring::PrimeField(p) => (-(a as i128)).rem_euclid(p as i128) as i64,
            _ => a.checked_neg().unwrap_or_else(|| overflow()),
        }
    }

    /// Multiplicative inverse, when it exists in the ring.
    pub fn inverse(self, a: i64) -> Option<i64> {
        match self {
            Ring::PrimeField(p) => {
                let a = self.normalize(a);
                if a == 0 {
                    None
                } else {
                    Some(pow_mod(a as u64, p - 2, p) as i64)
                }
            }
            Ring::Integers => match a {
                1 | -1 => Some(a),
                _ => None,
            },
            Ring::Rationals => None,
        }
    }

    /// `(-1)^k` as a ring element.
    #[inline]
    pub fn sign(self, k: usize) -> i64 {
        if k % 2 == 0 {
            1
        } else {
            self.normalize(-1)
        }
    }

    /// Short label used in reports: `Q`, `F2`, `Z`.
    pub fn label(self) -> String {
        match self {
            Ring::Rationals => "Q".to_string(),
            Ring::PrimeField(p) => format!("F{p}"),
            Ring::Integers => "Z".to_string(),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Ring {
    type Err = LinalgError;

    /// Accepts `Q`, `Z`, and `F<p>` (e.g. `F2`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Q" | "q" => Ok(Ring::Rationals),
            "Z" | "z" => Ok(Ring::Integers),
            _ => {
                let digits = s
                    .strip_prefix('F')
                    .or_else(|| s.strip_prefix('f'))
                    .ok_or_else(|| LinalgError::UnknownRing(s.to_string()))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| LinalgError::UnknownRing(s.to_string()))?;
                Ring::prime_field(p)
            }
        }
    }
}

#[cold]
fn overflow() -> i64 {
    panic!("exact integer arithmetic exceeded the i64 range")
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}
