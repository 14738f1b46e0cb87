mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use srgeom::linalg::Ring;
use srgeom::poset::SimplicialComplex;
use srgeom::projective::{
    cohomology_preservation_check, line_bundle_cech, line_bundle_cohomology, omega_star_duality,
    punctured_resolution, r_pi_star_stalk, verify_rpistar_omega, Dims, LineBundle, ProjectiveError,
};

/// Counts the Laurent monomials of total degree `d` in `n + 1` variables that are
/// nonnegative everywhere (global sections) or negative everywhere (top cohomology).
fn monomial_counts(n: usize, d: i64) -> Vec<usize> {
    fn count(vars: usize, total: i64) -> usize {
        if vars == 0 {
            return usize::from(total == 0);
        }
        (0..=total.max(0)).map(|v| count(vars - 1, total - v)).sum()
    }
    let mut dims = vec![0; n + 1];
    if d >= 0 {
        dims[0] = count(n + 1, d);
    }
    let shifted = -d - (n as i64 + 1);
    if shifted >= 0 {
        dims[n] += count(n + 1, shifted);
    }
    dims
}

/// Unreduced Betti numbers of `K` over `F_p`, nonzero entries only.
fn betti(k: &SimplicialComplex, p: i64) -> Dims {
    let reduced = common::reduced_betti(k.faces(), p);
    reduced
        .iter()
        .enumerate()
        .skip(1)
        .map(|(s, &b)| (s as i32 - 1, b + usize::from(s == 1)))
        .filter(|&(_, b)| b > 0)
        .collect()
}

fn solid(n: usize) -> SimplicialComplex {
    SimplicialComplex::from_facets(n, &[(1..=n).collect()]).unwrap()
}

fn f2() -> Ring {
    Ring::prime_field(2).unwrap()
}

#[test]
fn line_bundle_examples() {
    assert_eq!(line_bundle_cohomology(2, 0), vec![1, 0, 0]);
    assert_eq!(line_bundle_cohomology(2, -3), monomial_counts(2, -3));
    assert_eq!(line_bundle_cohomology(2, -3), vec![0, 0, 1]);
    assert_eq!(line_bundle_cohomology(1, 5), monomial_counts(1, 5));
    assert_eq!(line_bundle_cohomology(1, 5), vec![6, 0]);
    assert_eq!(line_bundle_cech(2, -3).unwrap(), vec![0, 0, 1]);
}

#[test]
fn closed_form_matches_cech_and_monomial_count() {
    for n in 1..=4 {
        for d in -10..=10 {
            let closed = line_bundle_cohomology(n, d);
            assert_eq!(line_bundle_cech(n, d).unwrap(), closed, "n = {n}, d = {d}");
            assert_eq!(monomial_counts(n, d), closed, "n = {n}, d = {d}");
        }
    }
}

proptest! {
    #[test]
    fn serre_symmetry(n in 1usize..=4, d in -10i64..=10) {
        let h = line_bundle_cohomology(n, d);
        let dual = line_bundle_cohomology(n, -d - n as i64 - 1);
        for i in 0..=n {
            prop_assert_eq!(h[i], dual[n - i]);
        }
    }
}

fn stalk_dims(n: usize, p: u64, bundle: LineBundle) -> Dims {
    r_pi_star_stalk(n, p, bundle, Ring::Rationals)
        .unwrap()
        .homology()
        .into_iter()
        .filter(|(_, m)| m.rank > 0)
        .map(|(d, m)| (d, m.rank))
        .collect()
}

#[test]
fn pushforward_stalks() {
    for n in 1..=4usize {
        let full = (1u64 << (n + 1)) - 1;
        assert_eq!(
            stalk_dims(n, full, LineBundle::Canonical),
            Dims::from([(0, 1)])
        );
        for p in (1..full).filter(|p| p.count_ones() as usize <= n) {
            assert!(stalk_dims(n, p, LineBundle::Canonical).is_empty());
        }
        for p in 1..=full {
            let expected = monomial_counts(n, p.count_ones() as i64)[0];
            assert_eq!(
                stalk_dims(n, p, LineBundle::Twist(0)),
                Dims::from([(0, expected)])
            );
        }
    }
    assert!(matches!(
        r_pi_star_stalk(2, 0, LineBundle::Canonical, Ring::Rationals),
        Err(ProjectiveError::EmptyPoint)
    ));
    assert!(matches!(
        r_pi_star_stalk(1, 0b100, LineBundle::Canonical, Ring::Rationals),
        Err(ProjectiveError::PointOutOfRange(_))
    ));
}

#[test]
fn pushforward_of_canonical_bundle() {
    let one = verify_rpistar_omega(1).unwrap();
    let table: Vec<(String, Dims)> = one
        .stalks
        .iter()
        .map(|s| (s.point.clone(), s.cohomology.clone()))
        .collect();
    assert_eq!(
        table,
        vec![
            ("{0}".to_string(), Dims::new()),
            ("{1}".to_string(), Dims::new()),
            ("{0,1}".to_string(), Dims::from([(0, 1)])),
        ]
    );
    for n in 1..=6 {
        let v = verify_rpistar_omega(n).unwrap();
        assert!(v.holds, "n = {n}");
        assert_eq!(v.support.len(), 1);
    }
    assert!(matches!(
        verify_rpistar_omega(7),
        Err(ProjectiveError::DimensionOutOfRange { .. })
    ));
}

#[test]
fn resolution_resolves_the_punctured_complex() {
    for k in [common::boundary_triangle(), solid(3), common::bowtie()] {
        let res = punctured_resolution(&k, Ring::Rationals).unwrap();
        let c = res.to_sheaf_complex().unwrap();
        let base = c.base().clone();
        for x in 0..base.len() {
            let h: BTreeMap<i32, usize> = c
                .stalk_cohomology(x)
                .into_iter()
                .map(|(d, m)| (d, m.rank))
                .filter(|&(_, r)| r > 0)
                .collect();
            let expected = if k.contains(base.key(x)) {
                BTreeMap::from([(0, 1)])
            } else {
                BTreeMap::new()
            };
            assert_eq!(h, expected, "at {}", base.label(x));
        }
    }
}

#[test]
fn cohomology_preservation_examples() {
    let cases = [
        (common::boundary_triangle(), Dims::from([(0, 1), (1, 1)])),
        (solid(3), Dims::from([(0, 1)])),
        (solid(2), Dims::from([(0, 1)])),
        (solid(4), Dims::from([(0, 1)])),
    ];
    for (k, expected) in cases {
        let c = cohomology_preservation_check(&k, Ring::Rationals).unwrap();
        assert_eq!(c.sheaf_side, expected);
        assert_eq!(c.scheme_side, expected);
        assert_eq!(c.cech_total, Some(expected.clone()));
        assert!(c.mixed_classes_acyclic && c.holds);
    }
    assert!(matches!(
        cohomology_preservation_check(&solid(3), Ring::Integers),
        Err(ProjectiveError::NeedsField(_))
    ));
    let empty = SimplicialComplex::from_keys(3, [0]).unwrap();
    assert!(matches!(
        cohomology_preservation_check(&empty, Ring::Rationals),
        Err(ProjectiveError::EmptyComplex)
    ));
}

#[test]
fn cohomology_preservation_sees_torsion_prime() {
    let k = common::rp2();
    let c = cohomology_preservation_check(&k, f2()).unwrap();
    assert_eq!(c.scheme_side, betti(&k, 2));
    assert_eq!(c.scheme_side, Dims::from([(0, 1), (1, 1), (2, 1)]));
    assert!(c.cech_total.is_none() && c.holds);
}

#[test]
fn canonical_restriction_dualizes_with_shift_n() {
    for k in [common::boundary_triangle(), solid(3), common::bowtie()] {
        let d = omega_star_duality(&k, Ring::Rationals).unwrap();
        assert_eq!(d.shift, Some(k.ambient() as i32 - 1));
        assert!(d.shift_is_n && d.holds);
        assert_eq!(d.samples.len(), k.faces().len());
    }
    let d = omega_star_duality(&common::boundary_triangle(), f2()).unwrap();
    assert_eq!(d.samples[0].rhom, Dims::from([(1, 1), (2, 1)]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn both_sides_match_betti_numbers(n in 2usize..=4, seed in any::<u64>()) {
        let k = common::random_complex(n, seed);
        prop_assume!(k.faces().len() > 1);
        let c = cohomology_preservation_check(&k, f2()).unwrap();
        prop_assert_eq!(&c.sheaf_side, &betti(&k, 2));
        prop_assert!(c.holds);
    }

    #[test]
    fn duality_shift_is_n(n in 2usize..=4, seed in any::<u64>()) {
        let k = common::random_complex(n, seed);
        prop_assume!(k.faces().len() > 1);
        let d = omega_star_duality(&k, Ring::Rationals).unwrap();
        prop_assert!(d.holds);
        prop_assert_eq!(d.shift, Some(n as i32 - 1));
    }
}
