use std::fmt;

use serde::Serialize;

use crate::poset::SimplicialComplex;

use super::SrError;

/// A monomial ideal of `k[x_1..x_m]`, stored by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    vars: usize,
    generators: Vec<Vec<u32>>,
}

impl MonomialIdeal {
    /// Discards non-minimal generators and sorts the rest in decreasing lex order.
    pub fn new(vars: usize, generators: Vec<Vec<u32>>) -> Result<Self, SrError> {
        if let Some(g) = generators.iter().find(|g| g.len() != vars) {
            return Err(SrError::ExponentLength {
                expected: vars,
                found: g.len(),
            });
        }
        let mut gens = generators;
        gens.sort_by(|a, b| b.cmp(a));
        gens.dedup();
        let minimal = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && divides(h, g)))
            .cloned()
            .collect();
        Ok(Self {
            vars,
            generators: minimal,
        })
    }

    pub fn zero(vars: usize) -> Self {
        Self {
            vars,
            generators: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.generators.iter().all(|g| g.iter().all(|&e| e <= 1))
    }

    /// Whether `x^a` lies in the ideal.
    pub fn contains(&self, a: &[u32]) -> bool {
        self.generators.iter().any(|g| divides(g, a))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "(0)");
        }
        let parts: Vec<String> = self.generators.iter().map(|g| monomial_string(g)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Whether `x^a` divides `x^b`.
pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Standard notation such as `x1*x2^2`; the unit monomial is `1`.
pub fn monomial_string(exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// The 0/1 exponent vector of a subset key.
pub fn key_exponents(key: u64, n: usize) -> Vec<u32> {
    (0..n).map(|i| ((key >> i) & 1) as u32).collect()
}

/// The subset key of the support of an exponent vector.
pub fn support_key<T: Copy + Into<i64>>(exps: &[T]) -> u64 {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e.into() != 0)
        .fold(0, |k, (i, _)| k | (1 << i))
}

/// `I_K`, generated by the monomials of the minimal nonfaces.
pub fn stanley_reisner_ideal(k: &SimplicialComplex) -> MonomialIdeal {
    let n = k.ambient();
    let gens = k
        .minimal_nonfaces()
        .into_iter()
        .map(|p| key_exponents(p, n))
        .collect();
    MonomialIdeal::new(n, gens).expect("exponent vectors have the ambient length")
}
