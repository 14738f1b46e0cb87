//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use common::*;
use rand::Rng as _;
use srgeom::cm::{canonical_complex, is_cohen_macaulay};
use srgeom::derived::{
    global_duality, local_duality, reflexivity, sheaf_cohomology, Graded, StandardSpace,
};
use srgeom::linalg::{FgModule, Matrix, Ring};
use srgeom::monomial::{
    continuous_map_fibers, f_star, general_position_check, natural_window, strand_exactness,
    MonomialDivisors,
};
use srgeom::poset::{Poset, SimplicialComplex};
use srgeom::projective::{
    cohomology_preservation_check, line_bundle_cech, line_bundle_cohomology, verify_rpistar_omega,
};
use srgeom::sheaf::{koszul_complex, random_map, Sheaf, SheafComplex, SheafMorphism};
use srgeom::sr::{reisner_scheme_side, verify_canonical_complex};

const Q: Ring = Ring::Rationals;
const F2: Ring = Ring::PrimeField(2);
const F3: Ring = Ring::PrimeField(3);
const Z: Ring = Ring::Integers;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

// ---------------------------------------------------------------------------
// Corpus

fn solid(n: usize) -> SimplicialComplex {
    SimplicialComplex::from_facets(n, &[(1..=n).collect()]).unwrap()
}

fn boundary(n: usize) -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = (1..=n)
        .map(|skip| (1..=n).filter(|&v| v != skip).collect())
        .collect();
    SimplicialComplex::from_facets(n, &facets).unwrap()
}

fn fixed_corpus() -> Vec<(String, SimplicialComplex)> {
    vec![
        ("boundary of the 2-simplex".into(), boundary(3)),
        ("boundary of the 3-simplex".into(), boundary(4)),
        ("full 1-simplex".into(), solid(2)),
        ("full 2-simplex".into(), solid(3)),
        ("full 3-simplex".into(), solid(4)),
        ("bowtie".into(), bowtie()),
        ("six-vertex projective plane".into(), rp2()),
    ]
}

/// Fifty random complexes on 2 to 5 vertices, each with at least one vertex.
fn random_corpus() -> Vec<(String, SimplicialComplex)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < 50 {
        let n = 2 + (seed % 4) as usize;
        let k = random_complex(n, 9000 + seed);
        if k.faces().len() > 1 {
            out.push((format!("random complex {seed} on {n} vertices"), k));
        }
        seed += 1;
    }
    out
}

fn corpus() -> Vec<(String, SimplicialComplex)> {
    let mut all = fixed_corpus();
    all.extend(random_corpus());
    all
}

// ---------------------------------------------------------------------------
// Independent simplicial homology: integer Smith invariants of the boundary matrices.

fn smith_invariants(mut a: Vec<Vec<i128>>) -> Vec<u128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return out;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for i in t..rows {
                        a[i][j] -= q * a[i][t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| a[i][j] % p != 0);
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].unsigned_abs());
    }
    out
}

/// Boundary from faces of size `s` to faces of size `s - 1`.
fn boundary_matrix(faces: &[u64], s: usize) -> (usize, Vec<Vec<i128>>) {
    let rows: Vec<u64> = faces
        .iter()
        .copied()
        .filter(|f| f.count_ones() as usize + 1 == s)
        .collect();
    let cols: Vec<u64> = faces
        .iter()
        .copied()
        .filter(|f| f.count_ones() as usize == s)
        .collect();
    let mut m = vec![vec![0i128; cols.len()]; rows.len()];
    for (j, &f) in cols.iter().enumerate() {
        let verts: Vec<u32> = (0..64).filter(|b| f >> b & 1 == 1).collect();
        for (t, &v) in verts.iter().enumerate() {
            let i = rows.iter().position(|&g| g == f & !(1 << v)).unwrap();
            m[i][j] = if t % 2 == 0 { 1 } else { -1 };
        }
    }
    (cols.len(), m)
}

/// Reduced homology `H̃_i` over the ring, nonzero groups only.
fn simplicial_oracle(faces: &[u64], ring: Ring) -> Graded {
    let top = faces
        .iter()
        .map(|f| f.count_ones() as usize)
        .max()
        .unwrap_or(0);
    let invariants: Vec<Vec<u128>> = (0..=top + 1)
        .map(|s| {
            if s == 0 {
                Vec::new()
            } else {
                smith_invariants(boundary_matrix(faces, s).1)
            }
        })
        .collect();
    let rank = |inv: &[u128]| -> usize {
        match ring {
            Ring::PrimeField(p) => inv.iter().filter(|&&d| d % p as u128 != 0).count(),
            _ => inv.len(),
        }
    };
    let mut out = Graded::new();
    for s in 0..=top {
        let dim = faces
            .iter()
            .filter(|f| f.count_ones() as usize == s)
            .count();
        let free = dim - rank(&invariants[s]) - rank(&invariants[s + 1]);
        let torsion: Vec<u64> = match ring {
            Ring::Integers => invariants[s + 1].iter().map(|&d| d as u64).collect(),
            _ => Vec::new(),
        };
        let m = FgModule::with_torsion(free, torsion);
        if !m.is_zero() {
            out.insert(s as i32 - 1, m);
        }
    }
    out
}

fn link_faces(k: &SimplicialComplex, p: u64) -> Vec<u64> {
    k.faces()
        .iter()
        .copied()
        .filter(|&q| q & p == 0 && k.contains(q | p))
        .collect()
}

/// Reisner's criterion from the oracle: every link has vanishing reduced homology below its dimension.
fn reisner_oracle(k: &SimplicialComplex, ring: Ring) -> bool {
    k.faces().iter().all(|&p| {
        let link = link_faces(k, p);
        let dim = link
            .iter()
            .map(|q| q.count_ones() as i32)
            .max()
            .unwrap_or(0)
            - 1;
        simplicial_oracle(&link, ring).keys().all(|&i| i >= dim)
    })
}

fn ring_name(ring: Ring) -> String {
    ring.label()
}

// ---------------------------------------------------------------------------
// Random data

fn single(f: Sheaf) -> SheafComplex {
    SheafComplex::concentrated(f, 0)
}

fn random_complex_on(base: &Arc<Poset>, ring: Ring, seed: u64) -> SheafComplex {
    let mut r = rng(seed);
    if r.gen_bool(0.5) {
        single(srgeom::sheaf::random_sheaf(base, ring, &mut r, 2))
    } else {
        let (s, t) = (r.gen_range(1..=2), r.gen_range(1..=2));
        SheafComplex::two_term(random_map(base, ring, &mut r, s, t), -1)
    }
}

fn torsion_skyscraper(n: usize, m: i64) -> SheafComplex {
    let base = affine(n);
    let sky = Sheaf::skyscraper(base.clone(), Z, 0);
    let comps = (0..base.len())
        .map(|x| Matrix::from_fn(sky.rank(x), sky.rank(x), |_, _| m))
        .collect();
    SheafComplex::two_term(SheafMorphism::new(sky.clone(), sky, comps).unwrap(), -1)
}

fn indicator(k: &SimplicialComplex, ring: Ring) -> Sheaf {
    let base = affine(k.ambient());
    Sheaf::indicator(base.clone(), ring, &face_points(&base, k)).unwrap()
}

fn random_ses(n: usize, seed: u64) -> (SheafMorphism, SheafMorphism) {
    let base = affine(n);
    let phi = random_map(&base, Q, &mut rng(seed), 3, 3);
    let (_, incl) = phi.kernel().unwrap();
    let (img, img_incl) = phi.image().unwrap();
    let comps = (0..base.len())
        .map(|x| {
            if img.rank(x) == 0 || phi.source().rank(x) == 0 {
                Matrix::zeros(img.rank(x), phi.source().rank(x))
            } else {
                srgeom::linalg::solve(img_incl.component(x), phi.component(x), Q).unwrap()
            }
        })
        .collect();
    let onto = SheafMorphism::new(phi.source().clone(), img, comps).unwrap();
    (incl, onto)
}

/// Every system of `n` monomials in `m` variables with exponents at most 2, up to reordering.
fn grid(m: usize, n: usize) -> Vec<MonomialDivisors> {
    let monomials: Vec<Vec<u32>> = (0..3u32.pow(m as u32))
        .map(|k| (0..m).map(|i| k / 3u32.pow(i as u32) % 3).collect())
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        out.push(
            MonomialDivisors::new(m, choice.iter().map(|&c| monomials[c].clone()).collect())
                .unwrap(),
        );
        let Some(pos) = (0..n).rev().find(|&i| choice[i] + 1 < monomials.len()) else {
            return out;
        };
        choice[pos] += 1;
        for i in pos + 1..n {
            choice[i] = choice[pos];
        }
    }
}

fn full_grid() -> Vec<MonomialDivisors> {
    (1..=3)
        .flat_map(|m| (1..=3).flat_map(move |n| grid(m, n)))
        .collect()
}

// ---------------------------------------------------------------------------
// Criteria

fn base_cohomology() -> Outcome {
    let k_in =
        |d: &[(i32, usize)]| -> Graded { d.iter().map(|&(i, r)| (i, FgModule::free(r))).collect() };
    let mut count = 0;
    for ring in [Q, F2] {
        for n in 1..=6 {
            let spaces = [
                (Poset::affine_space(n).unwrap(), k_in(&[(0, 1)])),
                (Poset::projective_space(n).unwrap(), k_in(&[(0, 1)])),
                (
                    Poset::hyperplane_union(n).unwrap(),
                    k_in(&[(0, 1), (n as i32, 1)]),
                ),
            ];
            for (space, expected) in spaces {
                let h = sheaf_cohomology(&Sheaf::constant(Arc::new(space), ring, 1)).unwrap();
                ensure!(h == expected, "n = {n} over {}: {h:?}", ring_name(ring));
                count += 1;
            }
        }
    }
    Ok(format!("{count} spaces"))
}

fn global_dualizing() -> Outcome {
    let (mut count, mut nontrivial) = (0, 0);
    for n in 1..=3 {
        for space in [
            StandardSpace::Affine(n),
            StandardSpace::Projective(n),
            StandardSpace::Hyperplanes(n),
        ] {
            let base = Arc::new(space.poset().unwrap());
            let dualizing = space.dualizing_complex(base.clone(), Q);
            for s in 0..30 {
                let f = single(random(&base, Q, 100 * n as u64 + s, 2));
                let c = global_duality(&f, &dualizing).unwrap();
                ensure!(c.holds, "{space:?}, sample {s}: {c:?}");
                count += 1;
                nontrivial += usize::from(!c.left.is_empty());
            }
        }
    }
    Ok(format!(
        "{count} sheaves on 9 spaces, {nontrivial} with nonzero cohomology"
    ))
}

fn reflexivity_check() -> Outcome {
    for ring in [Q, F2] {
        for s in 0..50u64 {
            let n = 1 + (s % 4) as usize;
            let c = random_complex_on(&affine(n), ring, 500 + s);
            ensure!(
                reflexivity(&c).unwrap().holds,
                "sample {s} on 𝔸^{n} over {}",
                ring_name(ring)
            );
        }
    }
    for (n, m) in [(1, 2), (1, 3), (2, 2), (2, 4), (3, 6)] {
        let f = torsion_skyscraper(n, m);
        let stalk = f.stalk_cohomology(0);
        ensure!(
            stalk == BTreeMap::from([(0, FgModule::with_torsion(0, [m as u64]))]),
            "Z/{m} stalk {stalk:?}"
        );
        ensure!(reflexivity(&f).unwrap().holds, "Z/{m} on 𝔸^{n}");
    }
    Ok("100 random complexes and 5 integer torsion cases".into())
}

fn local_duality_check(corpus: &[(String, SimplicialComplex)]) -> Outcome {
    for (name, k) in corpus {
        ensure!(
            local_duality(&single(indicator(k, Q))).unwrap().holds,
            "{name}"
        );
    }
    for s in 0..20u64 {
        let n = 1 + (s % 3) as usize;
        ensure!(
            local_duality(&single(random(&affine(n), Q, 700 + s, 2)))
                .unwrap()
                .holds,
            "random sheaf {s}"
        );
    }
    Ok(format!(
        "{} face indicators and 20 random sheaves",
        corpus.len()
    ))
}

fn link_formula(corpus: &[(String, SimplicialComplex)]) -> Outcome {
    let mut points = 0;
    for ring in [Q, F2, F3, Z] {
        for (name, k) in corpus {
            let omega = canonical_complex(k, ring).unwrap();
            let base = omega.complex.base().clone();
            let n = k.ambient() as i32;
            for x in 0..base.len() {
                let p = base.key(x);
                let d_p = n - p.count_ones() as i32;
                let expected: Graded = simplicial_oracle(&link_faces(k, p), ring)
                    .into_iter()
                    .map(|(j, m)| (d_p - j - 1, m))
                    .collect();
                let got = omega.complex.stalk_cohomology(x);
                ensure!(
                    got == expected,
                    "{name} over {} at {}: {got:?} vs {expected:?}",
                    ring_name(ring),
                    base.label(x)
                );
                points += 1;
            }
        }
    }
    Ok(format!("{points} stalks over Q, F2, F3, Z"))
}

fn reisner_equivalences(corpus: &[(String, SimplicialComplex)]) -> Outcome {
    let mut verdicts: BTreeMap<(String, String), bool> = BTreeMap::new();
    for ring in [Q, F2, F3, Z] {
        for (name, k) in corpus {
            let r = is_cohen_macaulay(k, ring).unwrap();
            ensure!(
                r.consistent && r.links == r.ext && r.ext == r.canonical,
                "{name} over {}: criteria disagree",
                ring_name(ring)
            );
            ensure!(
                r.cm == reisner_oracle(k, ring),
                "{name} over {}: oracle disagrees",
                ring_name(ring)
            );
            verdicts.insert((name.clone(), ring_name(ring)), r.cm);
        }
    }
    let cm = |name: &str, ring: Ring| verdicts[&(name.to_string(), ring_name(ring))];
    let plane = "six-vertex projective plane";
    ensure!(
        cm(plane, Q) && !cm(plane, F2) && !cm(plane, Z),
        "projective plane verdicts"
    );
    for ring in [Q, F2, F3, Z] {
        ensure!(!cm("bowtie", ring), "bowtie over {}", ring_name(ring));
        ensure!(
            cm("boundary of the 2-simplex", ring) && cm("boundary of the 3-simplex", ring),
            "boundaries over {}",
            ring_name(ring)
        );
    }
    Ok(format!("{} verdicts", verdicts.len()))
}

fn scheme_reisner(corpus: &[(String, SimplicialComplex)]) -> Outcome {
    for ring in [Q, F2] {
        for (name, k) in corpus {
            let r = reisner_scheme_side(k, ring).unwrap();
            ensure!(
                r.agree && r.concentrated == reisner_oracle(k, ring),
                "{name} over {}: {r:?}",
                ring_name(ring)
            );
        }
    }
    Ok(format!("{} complexes over Q and F2", corpus.len()))
}

fn canonical_vs_taylor(corpus: &[(String, SimplicialComplex)]) -> Outcome {
    let mut count = 0;
    for ring in [Q, F2] {
        for (name, k) in corpus.iter().filter(|(_, k)| k.ambient() <= 5) {
            let r = verify_canonical_complex(k, ring).unwrap();
            ensure!(r.holds, "{name} over {}", ring_name(ring));
            count += 1;
        }
    }
    Ok(format!("{count} comparisons"))
}

fn koszul_resolutions(corpus: &[(String, SimplicialComplex)]) -> Outcome {
    for ring in [Q, F2, Z] {
        for (name, k) in corpus {
            let c = koszul_complex(k, ring)
                .unwrap()
                .complex
                .to_sheaf_complex()
                .unwrap();
            let base = c.base().clone();
            for x in 0..base.len() {
                let expected = if k.contains(base.key(x)) {
                    BTreeMap::from([(0, FgModule::free(1))])
                } else {
                    BTreeMap::new()
                };
                ensure!(
                    c.stalk_cohomology(x) == expected,
                    "{name} over {} at {}",
                    ring_name(ring),
                    base.label(x)
                );
            }
            let h0 = c.cohomology_sheaf(0).unwrap();
            for x in 0..base.len() {
                for &y in base.covers_up(x) {
                    if k.contains(base.key(y)) {
                        let v = h0.restriction(x, y).get(0, 0);
                        let unit = if ring.is_field() {
                            v != 0
                        } else {
                            v.abs() == 1
                        };
                        ensure!(
                            unit,
                            "{name}: restriction {} -> {} is not invertible",
                            base.label(x),
                            base.label(y)
                        );
                    }
                }
            }
        }
    }
    Ok(format!("{} complexes over Q, F2, Z", corpus.len()))
}

fn flatness() -> Outcome {
    let systems = full_grid();
    for d in &systems {
        let g = general_position_check(d, Q).unwrap();
        ensure!(g.oracle == Some(g.shortcut), "{:?}", d.monomials());
    }
    let flat: Vec<MonomialDivisors> = [
        MonomialDivisors::coordinate(3),
        MonomialDivisors::new(3, vec![vec![1, 1, 0], vec![0, 0, 2]]).unwrap(),
        MonomialDivisors::new(2, vec![vec![2, 0], vec![0, 1], vec![0, 0]]).unwrap(),
        MonomialDivisors::coordinate(2),
    ]
    .into();
    for s in 0..20u64 {
        let d = &flat[s as usize % flat.len()];
        ensure!(
            general_position_check(d, Q).unwrap().in_general_position,
            "{:?}",
            d.monomials()
        );
        let (alpha, beta) = random_ses(d.len(), 800 + s);
        ensure!(
            strand_exactness(d, &alpha, &beta, &natural_window(d)).unwrap(),
            "sequence {s}"
        );
    }
    for s in 0..30u64 {
        let n = 1 + (s % 3) as usize;
        let f = random(&affine(n), Q, 900 + s, 3);
        let d = MonomialDivisors::coordinate(n);
        let pushed = f_star(&d, &f, &natural_window(&d)).unwrap();
        ensure!(pushed.is_zero() == f.is_zero(), "sheaf {s}");
    }
    Ok(format!(
        "{} systems, 20 sequences, 30 sheaves",
        systems.len()
    ))
}

fn image_openness() -> Outcome {
    let mut checked = 0;
    for d in full_grid() {
        if !general_position_check(&d, Q).unwrap().in_general_position {
            continue;
        }
        let n = d.len();
        let image: BTreeSet<u64> = (0..1u64 << d.vars())
            .map(|t| {
                (0..n)
                    .filter(|&i| d.support(i) & t == 0)
                    .fold(0u64, |p, i| p | 1 << i)
            })
            .collect();
        let up_set = image.iter().all(|&p| {
            (0..1u64 << n)
                .filter(|&q| q & p == p)
                .all(|q| image.contains(&q))
        });
        let surjective = image.len() == 1 << n;
        let common_zero = d.monomials().iter().all(|m| m.iter().any(|&e| e > 0));
        let s = continuous_map_fibers(&d);
        ensure!(
            up_set && s.image_open,
            "{:?}: image not open",
            d.monomials()
        );
        ensure!(
            surjective == common_zero,
            "{:?}: surjectivity",
            d.monomials()
        );
        ensure!(
            s.surjective == surjective && s.common_zero == common_zero,
            "{:?}: reported strata",
            d.monomials()
        );
        checked += 1;
    }
    Ok(format!("{checked} systems in general position"))
}

fn projective() -> Outcome {
    for n in 1..=6 {
        ensure!(
            verify_rpistar_omega(n).unwrap().holds,
            "pushforward of ω for n = {n}"
        );
    }
    for n in 1..=4 {
        for d in -10..=10 {
            ensure!(
                line_bundle_cech(n, d).unwrap() == line_bundle_cohomology(n, d),
                "O({d}) on ℙ^{n}"
            );
        }
    }
    let mut cases = vec![boundary(3), solid(3)];
    cases.extend((2..=4).map(solid));
    for k in &cases {
        let c = cohomology_preservation_check(k, Q).unwrap();
        let betti: BTreeMap<i32, usize> = simplicial_oracle(k.faces(), Q)
            .into_iter()
            .map(|(i, m)| (i, m.rank + usize::from(i == 0)))
            .chain((!simplicial_oracle(k.faces(), Q).contains_key(&0)).then_some((0, 1)))
            .filter(|&(i, _)| i >= 0)
            .collect();
        ensure!(c.holds && c.sheaf_side == betti, "{:?}: {c:?}", k.facets());
    }
    Ok("n <= 6 pushforwards, 84 line bundles, 5 complexes".into())
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_srgeom");
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    let runs: Vec<Vec<String>> = [
        "boundary2.txt",
        "boundary3.txt",
        "simplex2.txt",
        "bowtie.txt",
        "rp2.txt",
    ]
    .iter()
    .map(|f| vec!["report".to_string(), format!("{data}/{f}")])
    .chain(
        ["coordinate.txt", "overlap.txt", "split.txt"]
            .iter()
            .map(|f| vec!["morphism".to_string(), format!("{data}/{f}")]),
    )
    .collect();
    let suite = || -> Vec<(Option<i32>, Vec<u8>)> {
        runs.iter()
            .map(|args| {
                let out = Command::new(bin).args(args).output().expect("binary runs");
                (out.status.code(), out.stdout)
            })
            .collect()
    };
    let (first, second) = (suite(), suite());
    for ((args, a), b) in runs.iter().zip(&first).zip(&second) {
        ensure!(a == b, "{} differs between runs", args.join(" "));
        ensure!(a.0 == Some(0), "{} exited with {:?}", args.join(" "), a.0);
        ensure!(
            String::from_utf8_lossy(&a.1).contains("\"schema\": 1"),
            "{} lacks the schema version",
            args.join(" ")
        );
    }
    let bytes: usize = first.iter().map(|(_, o)| o.len()).sum();
    Ok(format!(
        "{} invocations, {bytes} bytes each run",
        runs.len()
    ))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        (
            "base cohomology of affine, projective and hyperplane spaces",
            Box::new(base_cohomology),
        ),
        ("global dualizing complexes", Box::new(global_dualizing)),
        ("reflexivity", Box::new(reflexivity_check)),
        (
            "local-cohomology duality",
            Box::new(|| local_duality_check(&corpus)),
        ),
        (
            "link formula for the canonical complex",
            Box::new(|| link_formula(&corpus)),
        ),
        (
            "Reisner equivalences",
            Box::new(|| reisner_equivalences(&corpus)),
        ),
        ("scheme-side Reisner", Box::new(|| scheme_reisner(&corpus))),
        (
            "canonical complex against Taylor Ext",
            Box::new(|| canonical_vs_taylor(&corpus)),
        ),
        (
            "Koszul resolutions",
            Box::new(|| koszul_resolutions(&corpus)),
        ),
        ("flatness in the field case", Box::new(flatness)),
        ("image openness", Box::new(image_openness)),
        ("projective correspondence", Box::new(projective)),
        (
            "determinism of the command-line suite",
            Box::new(determinism),
        ),
    ];
    let mut failures = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {title} ({detail}; {secs:.1}s)", i + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {:>2} FAIL {title}: {reason} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
