mod common;

use std::collections::HashMap;
use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use srgeom::linalg::{FgModule, Ring};
use srgeom::poset::{Poset, SimplicialComplex};
use srgeom::sheaf::Sheaf;
use srgeom::sr::*;

const Q: Ring = Ring::Rationals;
const F2: Ring = Ring::PrimeField(2);
const F3: Ring = Ring::PrimeField(3);

fn indicator(k: &SimplicialComplex, ring: Ring) -> Sheaf {
    let base = affine(k.ambient());
    Sheaf::indicator(base.clone(), ring, &face_points(&base, k)).unwrap()
}

fn full_simplex(n: usize) -> SimplicialComplex {
    SimplicialComplex::full(n).unwrap()
}

/// Minimal nonfaces by brute force over all subsets.
fn nonfaces_oracle(k: &SimplicialComplex) -> Vec<u64> {
    let n = k.ambient();
    (0..1u64 << n)
        .filter(|&q| {
            !k.contains(q)
                && (0..n)
                    .filter(|v| q >> v & 1 == 1)
                    .all(|v| k.contains(q & !(1 << v)))
        })
        .collect()
}

/// Hochster's formula: `Ext^i(R/I_K, R(-1))_a = H̃_{n-|a|-i-1}(lk supp a)` for
/// `supp a` a face, zero otherwise; returned as nonzero `(i, key, dim)` triples.
fn hochster_oracle(k: &SimplicialComplex, p: i64) -> Vec<(i32, u64, usize)> {
    let n = k.ambient() as i32;
    let mut out = Vec::new();
    for &face in k.faces() {
        let link: Vec<u64> = k
            .faces()
            .iter()
            .copied()
            .filter(|&q| q & face == 0 && k.contains(q | face))
            .collect();
        for (s, &b) in reduced_betti(&link, p).iter().enumerate() {
            let j = s as i32 - 1;
            let i = n - face.count_ones() as i32 - j - 1;
            if b > 0 {
                out.push((i, face, b));
            }
        }
    }
    out.sort();
    out
}

fn table_triples(t: &[ExtEntry]) -> Vec<(i32, u64, usize)> {
    let mut v: Vec<_> = t
        .iter()
        .map(|e| (e.i, support_key(&e.degree), e.dim))
        .collect();
    v.sort();
    v
}

#[test]
fn stanley_reisner_ideals() {
    assert_eq!(
        stanley_reisner_ideal(&boundary_triangle()).to_string(),
        "(x1*x2*x3)"
    );
    assert_eq!(
        stanley_reisner_ideal(&bowtie()).to_string(),
        "(x1*x4, x1*x5, x2*x4, x2*x5)"
    );
    assert!(stanley_reisner_ideal(&full_simplex(4)).is_zero());
    let bowtie_gens: Vec<u64> = stanley_reisner_ideal(&bowtie())
        .generators()
        .iter()
        .map(|g| support_key(g))
        .collect();
    let mut oracle = nonfaces_oracle(&bowtie());
    oracle.sort_by(|a, b| key_exponents(*b, 5).cmp(&key_exponents(*a, 5)));
    assert_eq!(bowtie_gens, oracle);
}

#[test]
fn monomial_ideal_keeps_minimal_generators() {
    let i = MonomialIdeal::new(2, vec![vec![1, 0], vec![2, 1], vec![0, 3]]).unwrap();
    assert_eq!(i.to_string(), "(x1, x2^3)");
    assert!(!i.is_squarefree());
    assert!(MonomialIdeal::new(2, vec![vec![1]]).is_err());
}

#[test]
fn pi_star_of_constant_and_omega() {
    let base = affine(3);
    let r = pi_star(&Sheaf::constant(base.clone(), Q, 1)).unwrap();
    for p in 0..8u64 {
        assert_eq!(r.rank(p), 1);
        for i in 0..3 {
            assert!(r.multiplication(p, i).is_identity());
        }
    }
    let omega = pi_star(&Sheaf::canonical(base, Q).unwrap()).unwrap();
    for p in 0..8u64 {
        assert_eq!(omega.rank(p), (p == 7) as usize);
    }
}

#[test]
fn pi_star_of_face_indicator_is_sr_shadow() {
    let k = bowtie();
    let m = pi_star(&indicator(&k, Q)).unwrap();
    let ideal = stanley_reisner_ideal(&k);
    for p in 0..32u64 {
        assert_eq!(m.rank(p), k.contains(p) as usize);
        assert_eq!(m.rank(p), !ideal.contains(&key_exponents(p, 5)) as usize);
    }
}

#[test]
fn pi_star_of_unit_up_set_is_free_on_one_generator() {
    let base = affine(3);
    for x in 0..base.len() {
        let m = pi_star(&Sheaf::unit_on_up_set(base.clone(), Q, x)).unwrap();
        let free = BoxModule::free(3, Q, &[key_exponents(base.key(x), 3)], 1)
            .unwrap()
            .window()
            .unwrap();
        for p in 0..8u64 {
            assert_eq!(m.rank(p), free.rank(p));
            for i in 0..3 {
                assert_eq!(m.multiplication(p, i), free.multiplication(p, i));
            }
        }
    }
}

#[test]
fn pi_star_rejects_proper_subspaces() {
    let base = Arc::new(Poset::projective_space(2).unwrap());
    assert!(matches!(
        pi_star(&Sheaf::constant(base, Q, 1)),
        Err(SrError::NotAffine)
    ));
}

#[test]
fn faithful_on_face_indicators() {
    for seed in 0..20 {
        let k = random_complex(4, seed);
        let m = pi_star(&indicator(&k, Q)).unwrap();
        assert_eq!(m.is_zero(), k.is_empty());
    }
    let void = SimplicialComplex::void(3);
    assert!(pi_star(&indicator(&void, Q)).unwrap().is_zero());
}

#[test]
fn window_of_free_modules() {
    let r = BoxModule::free(3, Q, &[vec![0, 0, 0]], 2)
        .unwrap()
        .window()
        .unwrap();
    assert!((0..8u64).all(|p| r.rank(p) == 1));
    let q = key(&[1, 3]);
    let shifted = BoxModule::free(3, Q, &[key_exponents(q, 3)], 2)
        .unwrap()
        .window()
        .unwrap()
        .to_sheaf()
        .unwrap();
    let base = shifted.base().clone();
    let expected = Sheaf::unit_on_up_set(base.clone(), Q, base.index_of(q).unwrap());
    assert!(shifted.same_data(&expected));
    let err = BoxModule::free(3, Q, &[vec![0, 0, 0]], 0)
        .unwrap()
        .window()
        .unwrap_err();
    assert!(matches!(err, SrError::InsufficientData(0)));
}

#[test]
fn adjunction_for_bowtie() {
    let k = bowtie();
    let f = indicator(&k, Q);
    let lhs_source = BoxModule::from_squarefree(&pi_star(&f).unwrap(), 2);
    let quotient = BoxModule::quotient_ring(&stanley_reisner_ideal(&k), Q, 2);
    let ring = BoxModule::free(5, Q, &[vec![0; 5]], 2).unwrap();
    for (m, expected) in [(&quotient, 1), (&ring, 0)] {
        let lhs = lhs_source.hom_rank(m).unwrap();
        let rhs = f
            .global_hom(&m.window().unwrap().to_sheaf().unwrap())
            .unwrap()
            .rank();
        assert_eq!((lhs, rhs), (expected, expected));
    }
}

#[test]
fn taylor_ext_small_cases() {
    let cone = MonomialIdeal::new(3, vec![vec![1, 1, 1]]).unwrap();
    assert_eq!(
        taylor_ext(&cone, 1, &[0, 0, 0], Q).unwrap(),
        FgModule::free(1)
    );
    assert_eq!(
        taylor_ext(&cone, 0, &[0, 0, 0], Q).unwrap(),
        FgModule::zero()
    );
    assert_eq!(
        taylor_ext(&cone, 1, &[1, 1, 1], Q).unwrap(),
        FgModule::zero()
    );
    let zero = MonomialIdeal::zero(3);
    for a in squarefree_degrees(3) {
        let want = if a == [1, 1, 1] {
            FgModule::free(1)
        } else {
            FgModule::zero()
        };
        assert_eq!(taylor_ext(&zero, 0, &a, Q).unwrap(), want);
    }
    let square = MonomialIdeal::new(2, vec![vec![2, 0]]).unwrap();
    assert!(matches!(
        taylor_ext(&square, 0, &[0, 0], Q),
        Err(SrError::NotSquarefree(_))
    ));
}

#[test]
fn taylor_ext_matches_hochster_on_corpus() {
    for k in [boundary_triangle(), bowtie(), rp2(), full_simplex(3)] {
        for (ring, p) in [(F2, 2), (F3, 3)] {
            let table = taylor_ext_table(&stanley_reisner_ideal(&k), ring).unwrap();
            assert_eq!(table_triples(&table), hochster_oracle(&k, p));
        }
    }
}

#[test]
fn bowtie_ext_lives_in_degrees_two_and_three() {
    let table = taylor_ext_table(&stanley_reisner_ideal(&bowtie()), Q).unwrap();
    let degrees: std::collections::BTreeSet<i32> = table.iter().map(|e| e.i).collect();
    assert_eq!(degrees, [2, 3].into());
}

#[test]
fn canonical_complex_of_boundary_triangle() {
    let k = boundary_triangle();
    let c = verify_canonical_complex(&k, Q).unwrap();
    assert!(c.holds);
    let expected: Vec<(i32, u64, usize)> = k.faces().iter().map(|&p| (1, p, 1)).collect();
    let mut expected = expected;
    expected.sort();
    assert_eq!(table_triples(&c.sheaf), expected);
}

#[test]
fn canonical_complex_of_bowtie_and_rp2() {
    let bow = verify_canonical_complex(&bowtie(), Q).unwrap();
    assert!(bow.holds);
    assert!(bow.sheaf.iter().any(|e| e.i == 2) && bow.sheaf.iter().any(|e| e.i == 3));
    let rp = verify_canonical_complex(&rp2(), F2).unwrap();
    assert!(rp.holds);
    assert!(rp.taylor.iter().any(|e| e.i == 4 && e.degree == vec![0; 6]));
    assert!(rp.multiplication.iter().any(|m| m.sheaf > 0));
}

#[test]
fn canonical_complex_over_integers_carries_torsion() {
    let c = verify_canonical_complex(&rp2(), Ring::Integers).unwrap();
    assert!(c.holds);
    assert!(c.taylor.iter().any(|e| e.torsion == vec![2]));
}

#[test]
fn extens_phrasing() {
    for k in [boundary_triangle(), bowtie()] {
        assert!(verify_extens_for_k(&k, Q).unwrap().holds);
    }
    let full = verify_extens_for_k(&full_simplex(3), Q).unwrap();
    assert!(full.holds);
    assert_eq!(table_triples(&full.sheaf), vec![(0, 7, 1)]);
}

#[test]
fn scheme_side_reisner() {
    for (k, ring, cm) in [
        (boundary_triangle(), Q, true),
        (rp2(), F2, false),
        (rp2(), Q, true),
        (bowtie(), Q, false),
    ] {
        let r = reisner_scheme_side(&k, ring).unwrap();
        assert_eq!((r.concentrated, r.sheaf_cm, r.agree), (cm, cm, true));
    }
}

#[test]
fn graded_complex_validation() {
    let bad = GradedFreeComplex::new(
        1,
        Q,
        0,
        vec![vec![vec![0]], vec![vec![1]]],
        vec![vec![(0, 0, 1)]],
    );
    assert!(matches!(bad, Err(SrError::NotHomogeneous(0))));
    let k = koszul_monomial_complex(2, &[vec![1, 0], vec![0, 1]], Q).unwrap();
    assert_eq!(k.strand(&[1, 1]).nonzero_homology().len(), 0);
    assert_eq!(
        k.strand(&[0, 0]).nonzero_homology(),
        [(0, FgModule::free(1))].into()
    );
}

fn small_sheaf() -> impl Strategy<Value = (usize, u64, bool)> {
    (1usize..=3, any::<u64>(), any::<bool>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_form_matches_literal_cokernel((n, seed, field) in small_sheaf()) {
        let ring = if field { Q } else { Ring::Integers };
        let base = affine(n);
        let f = random(&base, ring, seed, 3);
        let m = pi_star(&f).unwrap();
        let boxed = BoxModule::from_squarefree(&m, 2);
        for a in (0..3u32.pow(n as u32)).map(|k| (0..n).map(|i| k / 3u32.pow(i as u32) % 3).collect::<Vec<u32>>()) {
            let (module, mult) = pi_star_literal(&f, &a).unwrap();
            prop_assert_eq!(module, FgModule::free(boxed.rank(&a)));
            for (i, r) in mult.iter().enumerate() {
                let closed = m.multiplication(support_key(&a), i);
                prop_assert_eq!(*r, srgeom::linalg::rank(&closed, ring));
            }
        }
    }

    #[test]
    fn round_trip_through_squarefree_modules((n, seed, _) in small_sheaf()) {
        let f = random(&affine(n), Q, seed, 3);
        prop_assert!(pi_star(&f).unwrap().to_sheaf().unwrap().same_data(&f));
    }

    #[test]
    fn exact_on_kernel_image_sequences((n, seed, _) in small_sheaf()) {
        let base = affine(n);
        let map = srgeom::sheaf::random_map(&base, Q, &mut rng(seed), 3, 3);
        let (ker, _) = map.kernel().unwrap();
        let (img, _) = map.image().unwrap();
        let (a, b, c) = (pi_star(&ker).unwrap(), pi_star(map.source()).unwrap(), pi_star(&img).unwrap());
        for p in 0..1u64 << n {
            prop_assert_eq!(a.rank(p) + c.rank(p), b.rank(p));
        }
    }

    #[test]
    fn adjunction_dimensions((n, seed, _) in small_sheaf(), gens in proptest::collection::vec(0u64..8, 0..3)) {
        let base = affine(n);
        let f = random(&base, Q, seed, 3);
        let degrees: Vec<Vec<u32>> = gens.iter().map(|&g| key_exponents(g % (1 << n), n)).collect();
        let m = BoxModule::free(n, Q, &degrees, 2).unwrap();
        let lhs = BoxModule::from_squarefree(&pi_star(&f).unwrap(), 2).hom_rank(&m).unwrap();
        let rhs = f.global_hom(&m.window().unwrap().to_sheaf().unwrap()).unwrap().rank();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjunction_with_sr_quotients(seed in 0u64..500) {
        let k = random_complex(4, seed);
        let f = random(&affine(4), Q, seed, 2);
        let m = BoxModule::quotient_ring(&stanley_reisner_ideal(&k), Q, 2);
        let lhs = BoxModule::from_squarefree(&pi_star(&f).unwrap(), 2).hom_rank(&m).unwrap();
        let rhs = f.global_hom(&m.window().unwrap().to_sheaf().unwrap()).unwrap().rank();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn taylor_ext_ignores_generator_order(seed in 0u64..500, shuffle in any::<u64>()) {
        use rand::seq::SliceRandom;
        let k = random_complex(4, seed);
        let ideal = stanley_reisner_ideal(&k);
        let mut gens = ideal.generators().to_vec();
        gens.shuffle(&mut rng(shuffle));
        let permuted = taylor_complex_of(4, &gens, Q).unwrap().dual(&[1; 4]);
        for a in squarefree_degrees(4) {
            let want: Vec<FgModule> = (0..=4).map(|i| taylor_ext(&ideal, i, &a, Q).unwrap()).collect();
            let a64: Vec<i64> = a.iter().map(|&e| e as i64).collect();
            let got: Vec<FgModule> = (0..=4).map(|i| permuted.strand(&a64).homology_at(i)).collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn squarefree_membership_matches_faces(seed in 0u64..1000) {
        let k = random_complex(5, seed);
        let ideal = stanley_reisner_ideal(&k);
        prop_assert!(ideal.is_squarefree());
        for q in 0..32u64 {
            prop_assert_eq!(ideal.contains(&key_exponents(q, 5)), !k.contains(q));
        }
    }

    #[test]
    fn canonical_strands_match_taylor(seed in 0u64..1000) {
        let k = random_complex(4, seed);
        prop_assume!(!k.is_empty());
        prop_assert!(verify_canonical_complex(&k, F2).unwrap().holds);
    }
}

#[test]
fn explicit_squarefree_module_checks_commutation() {
    let mut mult = HashMap::new();
    mult.insert((0u64, 0usize), srgeom::linalg::Matrix::identity(1));
    mult.insert((0, 1), srgeom::linalg::Matrix::identity(1));
    mult.insert((1, 1), srgeom::linalg::Matrix::identity(1));
    mult.insert((2, 0), srgeom::linalg::Matrix::identity(1).scale(2, Q));
    let err = SquarefreeModule::new(2, Q, vec![1; 4], mult).unwrap_err();
    assert!(matches!(err, SrError::NotCommuting(_)));
}
