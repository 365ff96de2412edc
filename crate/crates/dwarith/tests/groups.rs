mod common;

use std::sync::Arc;

use common::{brute_force_homs, group};
use dwarith::error::Error;
use dwarith::group::{conjugate_hom, enumerate_homs, FiniteGroup, GroupHom, HomSpace};
use proptest::prelude::*;

#[test]
fn z2_table_is_a_group() {
    let g = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]], &[1], "Z/2").unwrap();
    assert_eq!(g.order(), 2);
}

#[test]
fn klein_four_table_is_associative() {
    // (a,b) ↦ 2a + b.
    let table: Vec<Vec<usize>> = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
    let g = FiniteGroup::from_table(&table, &[2, 1], "V4").unwrap();
    assert_eq!(g.order(), 4);
    for a in g.elements() {
        for b in g.elements() {
            for c in g.elements() {
                assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            }
        }
    }
}

#[test]
fn table_without_identity_is_rejected() {
    let err = FiniteGroup::from_table(&[vec![0, 1], vec![0, 1]], &[1], "bad").unwrap_err();
    assert!(matches!(err, Error::NotAGroup(_)), "{err:?}");
}

#[test]
fn small_hom_counts() {
    let z2 = group(FiniteGroup::cyclic(2));
    let z3 = group(FiniteGroup::cyclic(3));
    let v4 = group(FiniteGroup::abelian(&[2, 2]));
    assert_eq!(enumerate_homs(&z2, &z2).len(), 2);
    assert_eq!(enumerate_homs(&v4, &z2).len(), 4);
    assert_eq!(enumerate_homs(&z3, &z2).len(), 1);
}

#[test]
fn hom_counts_agree_with_brute_force() {
    let groups = [
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::abelian(&[2, 2]),
        FiniteGroup::abelian(&[2, 4]),
        FiniteGroup::symmetric(3),
    ];
    for q in &groups {
        for g in &groups {
            let (qa, ga) = (group(q.clone()), group(g.clone()));
            let mut fast: Vec<Vec<u32>> = enumerate_homs(&qa, &ga).iter().map(|r| r.map().to_vec()).collect();
            let mut slow = brute_force_homs(q, g);
            fast.sort();
            slow.sort();
            assert_eq!(fast, slow, "{} → {}", q.label(), g.label());
        }
    }
    // Klein four into S₃: trivial plus three per transposition.
    assert_eq!(brute_force_homs(&FiniteGroup::abelian(&[2, 2]), &FiniteGroup::symmetric(3)).len(), 10);
}

#[test]
fn enumeration_is_lexicographic_in_generator_images() {
    let q = group(FiniteGroup::abelian(&[2, 2]));
    let g = group(FiniteGroup::symmetric(3));
    let images: Vec<Vec<u32>> = enumerate_homs(&q, &g).iter().map(|r| r.generator_images()).collect();
    let mut sorted = images.clone();
    sorted.sort();
    assert_eq!(images, sorted);
}

fn s3_transposition_pair() -> (Arc<FiniteGroup>, u32, u32, u32) {
    let s3 = group(FiniteGroup::symmetric(3));
    let transpositions: Vec<u32> = s3.elements().filter(|&x| s3.elem_order(x) == 2).collect();
    let three_cycle = s3.elements().find(|&x| s3.elem_order(x) == 3).unwrap();
    (s3.clone(), transpositions[0], transpositions[1], three_cycle)
}

#[test]
fn conjugating_a_transposition_by_a_three_cycle_moves_it() {
    let (s3, t, _, c) = s3_transposition_pair();
    let z2 = group(FiniteGroup::cyclic(2));
    let rho = GroupHom::from_generator_images(z2.clone(), s3.clone(), &[t]).unwrap();
    let moved = conjugate_hom(&rho, c);
    let expected = s3.mul(s3.mul(s3.inv(c), t), c);
    assert_eq!(moved.apply(1), expected);
    assert_ne!(expected, t);
    assert_eq!(s3.elem_order(expected), 2);
    assert_eq!(conjugate_hom(&rho, 0), rho);
}

#[test]
fn abelian_conjugation_is_trivial() {
    let z4 = group(FiniteGroup::cyclic(4));
    let v4 = group(FiniteGroup::abelian(&[2, 2]));
    for rho in enumerate_homs(&z4, &v4) {
        for g in v4.elements() {
            assert_eq!(conjugate_hom(&rho, g), rho);
        }
    }
    let space = HomSpace::new(z4, v4.clone());
    for orbit in space.orbits() {
        assert_eq!(orbit.members.len(), 1);
        assert_eq!(orbit.stabilizer.len(), v4.order());
    }
}

#[test]
fn s3_orbits_on_homs_from_z2() {
    let (s3, ..) = s3_transposition_pair();
    let space = HomSpace::new(group(FiniteGroup::cyclic(2)), s3);
    let sizes: Vec<usize> = space.orbits().iter().map(|o| o.members.len()).collect();
    assert_eq!(sizes, vec![1, 3]);
}

#[test]
fn empty_space_has_no_orbits() {
    let g = FiniteGroup::cyclic(3);
    assert!(dwarith::group::orbits_stabilizers(&[], &g).is_empty());
}

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..7).prop_map(FiniteGroup::cyclic),
        (1usize..4, 1usize..4).prop_map(|(a, b)| FiniteGroup::abelian(&[a + 1, b + 1])),
        Just(FiniteGroup::symmetric(3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn orbit_stabilizer_counts(q in small_group(), g in small_group()) {
        let space = HomSpace::new(group(q), group(g.clone()));
        let mut covered = 0;
        for orbit in space.orbits() {
            prop_assert_eq!(orbit.members.len() * orbit.stabilizer.len(), g.order());
            covered += orbit.members.len();
        }
        prop_assert_eq!(covered, space.len());
    }

    #[test]
    fn conjugation_is_a_right_action(q in small_group(), g in small_group()) {
        let g = group(g);
        for rho in enumerate_homs(&group(q), &g) {
            for a in g.elements() {
                for b in g.elements() {
                    let lhs = conjugate_hom(&conjugate_hom(&rho, a), b);
                    prop_assert_eq!(lhs, conjugate_hom(&rho, g.mul(a, b)));
                }
            }
        }
    }
}
