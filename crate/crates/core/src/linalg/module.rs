use std::fmt;

use serde::Serialize;

use super::Ring;

/// A finitely generated module: free rank plus torsion coefficients `d1 | d2 | ...`.
///
/// Over a field the torsion list is always empty and `rank` is the dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct FgModule {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl FgModule {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Drops unit coefficients and sorts the rest; panics if the result is not a divisibility chain.
    pub fn with_torsion(rank: usize, torsion: impl IntoIterator<Item = u64>) -> Self {
        let mut torsion: Vec<u64> = torsion.into_iter().filter(|&d| d > 1).collect();
        torsion.sort_unstable();
        for w in torsion.windows(2) {
            assert!(
                w[1] % w[0] == 0,
                "torsion coefficients {torsion:?} are not a divisibility chain"
            );
        }
        Self { rank, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Rendering with the ring symbol, e.g. `Z^2 + Z/2` or `F2^3`.
    pub fn describe(&self, ring: Ring) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let base = match ring {
            Ring::Rationals => "Q".to_string(),
            Ring::Integers => "Z".to_string(),
            Ring::PrimeField(p) => format!("F{p}"),
        };
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push(base.clone()),
            r => parts.push(format!("{base}^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        parts.join(" + ")
    }
}

impl fmt::Display for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rank)?;
        for d in &self.torsion {
            write!(f, "+Z/{d}")?;
        }
        Ok(())
    }
}
