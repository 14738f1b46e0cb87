use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cm::canonical_complex;
use crate::derived::{r_hom_global, sheaf_cohomology};
use crate::linalg::{ChainComplex, FgModule, Ring, SparseMatrix};
use crate::poset::{subset_label, Poset, SimplicialComplex};
use crate::sheaf::{Generator, ProjectiveComplex, Sheaf, SheafComplex};

use super::{line_bundle_cohomology, ProjectiveError};

/// Largest `n` accepted by [`verify_rpistar_omega`].
pub const MAX_DIMENSION: usize = 6;

/// Largest `n` for which the fine-graded total Čech complex is also computed.
pub const CECH_LIMIT: usize = 4;

/// Nonzero dimensions by degree.
pub type Dims = BTreeMap<i32, usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineBundle {
    /// `ω = O(-n-1)`.
    Canonical,
    Twist(i64),
}

impl LineBundle {
    pub fn degree(self, n: usize) -> i64 {
        match self {
            LineBundle::Canonical => -(n as i64) - 1,
            LineBundle::Twist(d) => d,
        }
    }
}

fn dims(h: &BTreeMap<i32, FgModule>) -> Dims {
    h.iter()
        .filter(|(_, m)| m.rank > 0)
        .map(|(&d, m)| (d, m.rank))
        .collect()
}

fn require_field(ring: Ring) -> Result<(), ProjectiveError> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(ProjectiveError::NeedsField(ring.label()))
    }
}

/// The stalk at `p` of the derived pushforward of a line bundle to `ℙⁿ_F1`:
/// `RΓ(ℙⁿ, M(|p|))`, with zero differentials.
pub fn r_pi_star_stalk(
    n: usize,
    p: u64,
    bundle: LineBundle,
    ring: Ring,
) -> Result<ChainComplex, ProjectiveError> {
    if n == 0 || n >= 63 {
        return Err(ProjectiveError::DimensionOutOfRange { n, max: 62 });
    }
    if p == 0 {
        return Err(ProjectiveError::EmptyPoint);
    }
    if p >> (n + 1) != 0 {
        return Err(ProjectiveError::PointOutOfRange(p));
    }
    let dims = line_bundle_cohomology(n, bundle.degree(n) + p.count_ones() as i64);
    let diffs = (0..n)
        .map(|i| SparseMatrix::zeros(dims[i + 1], dims[i]))
        .collect();
    Ok(ChainComplex::new(ring, 0, dims, diffs)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct StalkEntry {
    pub point: String,
    pub cohomology: Dims,
}

#[derive(Clone, Debug, Serialize)]
pub struct RpiStarOmega {
    pub n: usize,
    pub stalks: Vec<StalkEntry>,
    /// Points with a nonzero stalk.
    pub support: Vec<String>,
    /// The pushforward is `k` at the top point in degree 0 and zero elsewhere.
    pub holds: bool,
}

pub fn verify_rpistar_omega(n: usize) -> Result<RpiStarOmega, ProjectiveError> {
    if !(1..=MAX_DIMENSION).contains(&n) {
        return Err(ProjectiveError::DimensionOutOfRange {
            n,
            max: MAX_DIMENSION,
        });
    }
    let full = (1u64 << (n + 1)) - 1;
    let base = Poset::projective_space(n)?;
    let mut stalks = Vec::with_capacity(base.len());
    let mut holds = true;
    for x in 0..base.len() {
        let p = base.key(x);
        let cohomology =
            dims(&r_pi_star_stalk(n, p, LineBundle::Canonical, Ring::Rationals)?.homology());
        let expected: Dims = if p == full {
            Dims::from([(0, 1)])
        } else {
            Dims::new()
        };
        holds &= cohomology == expected;
        stalks.push(StalkEntry {
            point: subset_label(p, 0),
            cohomology,
        });
    }
    let support = stalks
        .iter()
        .filter(|s| !s.cohomology.is_empty())
        .map(|s| s.point.clone())
        .collect();
    Ok(RpiStarOmega {
        n,
        stalks,
        support,
        holds,
    })
}

/// The standard resolution of `k_{K*}` on `ℙⁿ_F1`: one generator `k_{U_{p_i}}` in degree
/// `-i` for each chain `p_0 < ... < p_i` with `p_0 ∈ K*`.
#[derive(Clone, Debug)]
struct Resolution {
    /// Chains as point keys.
    chains: Vec<Vec<u64>>,
    /// Chain positions as indices into the base.
    positions: Vec<usize>,
    /// `(source, target, coefficient)`.
    edges: Vec<(usize, usize, i64)>,
}

impl Resolution {
    fn new(base: &Poset, in_k: impl Fn(u64) -> bool, ring: Ring) -> Self {
        let mut chains = Vec::new();
        let mut positions = Vec::new();
        for len in 0..base.len() {
            let found = base.chains_where(len, |x| in_k(base.key(x)), |_| true, |_| true);
            if found.is_empty() {
                break;
            }
            for c in found {
                positions.push(*c.last().expect("nonempty chain"));
                chains.push(c.iter().map(|&x| base.key(x)).collect::<Vec<_>>());
            }
        }
        let index: HashMap<&[u64], usize> = chains
            .iter()
            .enumerate()
            .map(|(g, c)| (c.as_slice(), g))
            .collect();
        let mut edges = Vec::new();
        for (g, c) in chains.iter().enumerate() {
            for t in 0..c.len() {
                if c.len() == 1 || (t == 0 && !in_k(c[1])) {
                    continue;
                }
                let mut face = c.clone();
                face.remove(t);
                edges.push((g, index[face.as_slice()], ring.sign(t)));
            }
        }
        Self {
            chains,
            positions,
            edges,
        }
    }

    fn degree(&self, g: usize) -> i32 {
        1 - self.chains[g].len() as i32
    }

    fn endpoint(&self, g: usize) -> u64 {
        *self.chains[g].last().expect("nonempty chain")
    }
}

fn punctured_parts(
    k: &SimplicialComplex,
) -> Result<(usize, Arc<Poset>, Arc<Poset>), ProjectiveError> {
    if k.ambient() < 2 {
        return Err(ProjectiveError::DimensionOutOfRange {
            n: k.ambient().saturating_sub(1),
            max: 62,
        });
    }
    let punctured = Arc::new(k.punctured_poset());
    if punctured.is_empty() {
        return Err(ProjectiveError::EmptyComplex);
    }
    let n = k.ambient() - 1;
    Ok((n, Arc::new(Poset::projective_space(n)?), punctured))
}

/// The standard resolution of `k_{K*}` as a complex of projective sheaves on `ℙⁿ_F1`.
pub fn punctured_resolution(
    k: &SimplicialComplex,
    ring: Ring,
) -> Result<ProjectiveComplex, ProjectiveError> {
    let (_, base, _) = punctured_parts(k)?;
    let res = Resolution::new(&base, |p| k.contains(p), ring);
    let generators = (0..res.chains.len())
        .map(|g| Generator {
            degree: res.degree(g),
            position: res.positions[g],
        })
        .collect();
    Ok(ProjectiveComplex::new(base, ring, generators, res.edges)?)
}

/// Term-wise line-bundle cohomology of the pushed-forward resolution, totalized. Every
/// term is `O(-|p|)` with `1 <= |p| <= n + 1`, so only `H^n(O(-n-1))` survives and the
/// spectral sequence of the double complex sits in a single row.
fn scheme_side(n: usize, res: &Resolution, ring: Ring) -> Result<Dims, ProjectiveError> {
    let mut rows: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
    for g in 0..res.chains.len() {
        let h = line_bundle_cohomology(n, -(res.endpoint(g).count_ones() as i64));
        for (q, &dim) in h.iter().enumerate().filter(|(_, &dim)| dim > 0) {
            rows.entry(q as i32).or_default().push((g, dim));
        }
    }
    if rows.len() > 1 || rows.keys().any(|&q| q != n as i32) {
        return Err(ProjectiveError::UnexpectedTerm(
            rows.keys().copied().collect(),
        ));
    }
    let Some(row) = rows.remove(&(n as i32)) else {
        return Ok(Dims::new());
    };
    let lo = row
        .iter()
        .map(|&(g, _)| res.degree(g))
        .min()
        .expect("nonempty row")
        + n as i32;
    let hi = row
        .iter()
        .map(|&(g, _)| res.degree(g))
        .max()
        .expect("nonempty row")
        + n as i32;
    let mut place: HashMap<usize, (i32, usize, usize)> = HashMap::new();
    let mut sizes = vec![0usize; (hi - lo + 1) as usize];
    for &(g, dim) in &row {
        let t = res.degree(g) + n as i32;
        let slot = &mut sizes[(t - lo) as usize];
        place.insert(g, (t, *slot, dim));
        *slot += dim;
    }
    let mut triplets: Vec<Vec<(usize, usize, i64)>> =
        vec![Vec::new(); sizes.len().saturating_sub(1)];
    for &(s, t, c) in &res.edges {
        let (Some(&(ds, os, dim)), Some(&(_, ot, _))) = (place.get(&s), place.get(&t)) else {
            continue;
        };
        if res.endpoint(s) != res.endpoint(t) {
            continue;
        }
        for e in 0..dim {
            triplets[(ds - lo) as usize].push((ot + e, os + e, c));
        }
    }
    let diffs = triplets
        .into_iter()
        .enumerate()
        .map(|(k, t)| SparseMatrix::from_triplets(sizes[k + 1], sizes[k], t, ring))
        .collect();
    Ok(dims(&ChainComplex::new(ring, lo, sizes, diffs)?.homology()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sign {
    Negative,
    Zero,
    Positive,
}

/// The fine-graded piece of the total Čech complex of the pushed-forward resolution in
/// a multidegree `b` with the given coordinate signs. Generators are pairs of a chain and
/// a nonempty cover set `S` with `b - 1_{p_i}` nonnegative outside `S`.
fn class_complex(
    n: usize,
    res: &Resolution,
    class: &[Sign],
    ring: Ring,
) -> Result<ChainComplex, ProjectiveError> {
    let full = (1u64 << (n + 1)) - 1;
    let mask = |s: Sign| {
        (0..=n)
            .filter(|&j| class[j] == s)
            .fold(0u64, |m, j| m | 1 << j)
    };
    let (negative, zero) = (mask(Sign::Negative), mask(Sign::Zero));
    let (lo, hi) = (-(n as i32), n as i32);
    let mut sizes = vec![0usize; (hi - lo + 1) as usize];
    let mut index: HashMap<(usize, u64), usize> = HashMap::new();
    let mut gens = Vec::new();
    for g in 0..res.chains.len() {
        let must = negative | (zero & res.endpoint(g));
        for s in (1..=full).filter(|&s| s & must == must) {
            let t = res.degree(g) + s.count_ones() as i32 - 1;
            let slot = &mut sizes[(t - lo) as usize];
            index.insert((g, s), *slot);
            gens.push((g, s, t));
            *slot += 1;
        }
    }
    let mut out_edges: Vec<Vec<(usize, i64)>> = vec![Vec::new(); res.chains.len()];
    for &(s, t, c) in &res.edges {
        out_edges[s].push((t, c));
    }
    let mut triplets: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); sizes.len() - 1];
    for &(g, s, t) in &gens {
        if t == hi {
            continue;
        }
        let col = index[&(g, s)];
        let entries = &mut triplets[(t - lo) as usize];
        for &(target, c) in &out_edges[g] {
            entries.push((index[&(target, s)], col, c));
        }
        let outer = ring.sign(res.chains[g].len() - 1);
        for j in (0..=n).filter(|&j| s >> j & 1 == 0) {
            let before = (s & ((1u64 << j) - 1)).count_ones() as usize;
            entries.push((
                index[&(g, s | 1 << j)],
                col,
                ring.mul(outer, ring.sign(before)),
            ));
        }
    }
    let diffs = triplets
        .into_iter()
        .enumerate()
        .map(|(k, t)| SparseMatrix::from_triplets(sizes[k + 1], sizes[k], t, ring))
        .collect();
    Ok(ChainComplex::new(ring, lo, sizes, diffs)?)
}

/// Sign classes of multidegrees with total degree zero.
fn realizable_classes(n: usize) -> Vec<Vec<Sign>> {
    let signs = [Sign::Negative, Sign::Zero, Sign::Positive];
    let mut out = Vec::new();
    for code in 0..3usize.pow(n as u32 + 1) {
        let class: Vec<Sign> = (0..=n)
            .map(|j| signs[code / 3usize.pow(j as u32) % 3])
            .collect();
        let has = |s: Sign| class.contains(&s);
        if class.iter().all(|&s| s == Sign::Zero) || (has(Sign::Negative) && has(Sign::Positive)) {
            out.push(class);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyPreservation {
    pub n: usize,
    /// `H^i(K*, k)`.
    pub sheaf_side: Dims,
    /// Line-bundle cohomology of the pushed-forward resolution, totalized.
    pub scheme_side: Dims,
    /// The total Čech complex in multidegree zero, for `n <= CECH_LIMIT`.
    pub cech_total: Option<Dims>,
    pub classes_checked: usize,
    /// Every other checked sign class of total degree zero is acyclic.
    pub mixed_classes_acyclic: bool,
    pub holds: bool,
}

pub fn cohomology_preservation_check(
    k: &SimplicialComplex,
    ring: Ring,
) -> Result<CohomologyPreservation, ProjectiveError> {
    require_field(ring)?;
    let (n, base, punctured) = punctured_parts(k)?;
    let sheaf_side = dims(&sheaf_cohomology(&Sheaf::constant(punctured, ring, 1))?);
    let res = Resolution::new(&base, |p| k.contains(p), ring);
    let scheme_side = scheme_side(n, &res, ring)?;
    let classes = if n <= CECH_LIMIT {
        realizable_classes(n)
    } else {
        Vec::new()
    };
    let results: Vec<(bool, Dims)> = classes
        .par_iter()
        .map(|class| {
            let h = dims(&class_complex(n, &res, class, ring)?.homology());
            Ok((class.iter().all(|&s| s == Sign::Zero), h))
        })
        .collect::<Result<_, ProjectiveError>>()?;
    let cech_total = results
        .iter()
        .find(|(zero, _)| *zero)
        .map(|(_, h)| h.clone());
    let mixed_classes_acyclic = results.iter().all(|(zero, h)| *zero || h.is_empty());
    let holds = mixed_classes_acyclic
        && sheaf_side == scheme_side
        && cech_total.as_ref().is_none_or(|h| *h == scheme_side);
    Ok(CohomologyPreservation {
        n,
        sheaf_side,
        scheme_side,
        cech_total,
        classes_checked: classes.len(),
        mixed_classes_acyclic,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DualitySample {
    pub sheaf: String,
    /// `RHom^i(F, ω_{K*})`.
    pub rhom: Dims,
    /// `H^i(K*, F)`.
    pub cohomology: Dims,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaDuality {
    pub n: usize,
    /// The `s` with `RHom^i(k, ω_{K*}) ≅ H^{s-i}(K*, k)`, closest to `n` when several fit.
    pub shift: Option<i32>,
    pub shift_is_n: bool,
    pub samples: Vec<DualitySample>,
    pub holds: bool,
}

fn reflects(rhom: &Dims, cohomology: &Dims, s: i32) -> bool {
    rhom.iter()
        .all(|(&i, &d)| cohomology.get(&(s - i)) == Some(&d))
        && cohomology
            .iter()
            .all(|(&j, &d)| rhom.get(&(s - j)) == Some(&d))
}

/// Checks that the restriction of `ω_K^•` to `K*` dualizes cohomology on `K*`, on `k`
/// and on `k_{C_q ∩ K*}` for every point `q`. The shift is read off from `F = k`.
pub fn omega_star_duality(
    k: &SimplicialComplex,
    ring: Ring,
) -> Result<OmegaDuality, ProjectiveError> {
    require_field(ring)?;
    let (n, _, punctured) = punctured_parts(k)?;
    let omega = canonical_complex(k, ring)?
        .complex
        .restrict_to(punctured.clone())?;
    let mut sheaves = vec![("k".to_string(), Sheaf::constant(punctured.clone(), ring, 1))];
    for q in 0..punctured.len() {
        let label = format!("k_C{}", punctured.label(q));
        sheaves.push((label, Sheaf::unit_on_down_set(punctured.clone(), ring, q)));
    }
    let measured = sheaves
        .par_iter()
        .map(|(label, f)| {
            let rhom =
                dims(&r_hom_global(&SheafComplex::concentrated(f.clone(), 0), &omega)?.homology());
            let cohomology = dims(&sheaf_cohomology(f)?);
            Ok((label.clone(), rhom, cohomology))
        })
        .collect::<Result<Vec<_>, ProjectiveError>>()?;
    let (_, rhom_k, h_k) = &measured[0];
    let reach = 2 * n as i32 + 4;
    let shift = (-reach..=reach)
        .filter(|&s| reflects(rhom_k, h_k, s))
        .min_by_key(|&s| ((s - n as i32).abs(), s));
    let samples: Vec<DualitySample> = measured
        .into_iter()
        .map(|(sheaf, rhom, cohomology)| {
            let holds = shift.is_some_and(|s| reflects(&rhom, &cohomology, s));
            DualitySample {
                sheaf,
                rhom,
                cohomology,
                holds,
            }
        })
        .collect();
    let holds = shift.is_some() && samples.iter().all(|s| s.holds);
    Ok(OmegaDuality {
        n,
        shift,
        shift_is_n: shift == Some(n as i32),
        samples,
        holds,
    })
}
