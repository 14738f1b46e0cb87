use serde::Serialize;

use crate::poset::subset_label;
use crate::sr::{monomial_string, support_key};

use super::MonomialError;

/// Divisors `D_i = V(m_i)` on `𝔸^m` cut out by monomials `m_1..m_n`.
///
/// `L_p` is the principal ideal of `m_p = prod_{i in p} m_i`. A unit monomial gives an
/// empty divisor; it is allowed and reported by [`MonomialDivisors::units`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialDivisors {
    vars: usize,
    monomials: Vec<Vec<u32>>,
}

impl MonomialDivisors {
    pub fn new(vars: usize, monomials: Vec<Vec<u32>>) -> Result<Self, MonomialError> {
        if monomials.is_empty() {
            return Err(MonomialError::Empty);
        }
        if let Some(m) = monomials.iter().find(|m| m.len() != vars) {
            return Err(MonomialError::ExponentLength {
                expected: vars,
                found: m.len(),
            });
        }
        Ok(Self { vars, monomials })
    }

    /// The coordinate divisors `x_1, ..., x_n`.
    pub fn coordinate(n: usize) -> Self {
        let monomials = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as u32).collect())
            .collect();
        Self { vars: n, monomials }
    }

    /// Parses a monomial list: an optional first line holding the variable count,
    /// then monomials such as `x1*x2^2`, `x1x3` or `1`, separated by commas or
    /// whitespace; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, MonomialError> {
        let mut declared: Option<usize> = None;
        let mut parsed: Vec<(usize, Vec<(usize, u32)>)> = Vec::new();
        let mut first = true;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if std::mem::take(&mut first) && line.chars().all(|c| c.is_ascii_digit()) {
                let m = line.parse().map_err(|_| MonomialError::Parse {
                    line: lineno + 1,
                    message: format!("invalid variable count `{line}`"),
                })?;
                declared = Some(m);
                continue;
            }
            for tok in line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
            {
                let factors = parse_monomial(tok).map_err(|message| MonomialError::Parse {
                    line: lineno + 1,
                    message,
                })?;
                parsed.push((lineno + 1, factors));
            }
        }
        let used = parsed
            .iter()
            .flat_map(|(_, f)| f.iter().map(|&(v, _)| v))
            .max()
            .unwrap_or(0);
        let vars = declared.unwrap_or(used);
        let mut monomials = Vec::new();
        for (line, factors) in parsed {
            let mut exps = vec![0u32; vars];
            for (v, e) in factors {
                if v > vars {
                    return Err(MonomialError::Parse {
                        line,
                        message: format!("variable x{v} outside x1..x{vars}"),
                    });
                }
                exps[v - 1] += e;
            }
            monomials.push(exps);
        }
        Self::new(vars, monomials)
    }

    /// Number of variables `m`.
    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Number of divisors `n`.
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    /// Indices of unit monomials.
    pub fn units(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.monomials[i].iter().all(|&e| e == 0))
            .collect()
    }

    /// Variables dividing `m_i`, as a key over `x_1..x_m`.
    pub fn support(&self, i: usize) -> u64 {
        support_key(&self.monomials[i])
    }

    /// Exponent vector of `m_p` for a key `p` over the divisors.
    pub fn product(&self, p: u64) -> Vec<u32> {
        (0..self.vars)
            .map(|v| {
                (0..self.len())
                    .filter(|&i| p >> i & 1 == 1)
                    .map(|i| self.monomials[i][v])
                    .sum()
            })
            .collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.monomials.iter().map(|m| monomial_string(m)).collect()
    }

    /// A variable set such as `{1,2}` for a key over `x_1..x_m`.
    pub fn variable_label(key: u64) -> String {
        subset_label(key, 1)
    }
}

fn parse_monomial(tok: &str) -> Result<Vec<(usize, u32)>, String> {
    if tok == "1" {
        return Ok(Vec::new());
    }
    let bytes = tok.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let number = |i: &mut usize| -> Option<u32> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        tok[start..*i].parse().ok()
    };
    while i < bytes.len() {
        if bytes[i] == b'*' && !out.is_empty() {
            i += 1;
        }
        if i >= bytes.len() || bytes[i] != b'x' {
            return Err(format!("malformed monomial `{tok}`"));
        }
        i += 1;
        let v = number(&mut i)
            .filter(|&v| v > 0)
            .ok_or_else(|| format!("malformed monomial `{tok}`"))?;
        let mut e = 1;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            e = number(&mut i).ok_or_else(|| format!("malformed exponent in `{tok}`"))?;
        }
        out.push((v as usize, e));
    }
    Ok(out)
}
