mod common;

use std::sync::Arc;

use common::{all_cochains, group, random_cochain, rng, tuples};
use dwarith::cochain::{
    check_cocycle, conj_act, cyclic_cocycle, h_class, homotopy_big_h, homotopy_defect, homotopy_h, homotopy_pair_defect,
    Cochain,
};
use dwarith::error::Error;
use dwarith::group::{FiniteGroup, GroupHom};
use proptest::prelude::*;

fn xyz() -> Cochain {
    Cochain::from_fn(group(FiniteGroup::cyclic(2)), 3, 2, |t| (t[0] * t[1] * t[2]) as i64)
}

fn test_groups() -> Vec<Arc<FiniteGroup>> {
    vec![
        group(FiniteGroup::cyclic(2)),
        group(FiniteGroup::cyclic(3)),
        group(FiniteGroup::abelian(&[2, 2])),
        group(FiniteGroup::symmetric(3)),
    ]
}

/// The sign character `S₃ → (Z/3)^×`.
fn sign_character(g: &FiniteGroup) -> Arc<Vec<u32>> {
    // Elements of order 2 are the odd permutations.
    Arc::new(g.elements().map(|x| if g.elem_order(x) == 2 { 2 } else { 1 }).collect())
}

#[test]
fn library_operators_match_the_naive_formulas() {
    let mut r = rng(7);
    for q in test_groups() {
        for modulus in [2, 3, 4] {
            for degree in 1..=3 {
                let alpha = random_cochain(&q, degree, modulus, &mut r);
                assert_eq!(alpha.coboundary(), common::d(&alpha));
                for s in q.elements() {
                    assert_eq!(conj_act(s, &alpha), common::act(s, &alpha));
                    assert_eq!(homotopy_h(s, &alpha).unwrap(), common::h(s, &alpha));
                    if degree >= 2 {
                        for t in q.elements() {
                            assert_eq!(homotopy_big_h(s, t, &alpha).unwrap(), common::big_h(s, t, &alpha));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn twisted_coboundary_matches_the_naive_formula() {
    let s3 = group(FiniteGroup::symmetric(3));
    let chi = sign_character(&s3);
    let mut r = rng(11);
    for degree in 0..=2 {
        let alpha = random_cochain(&s3, degree, 3, &mut r).with_action(chi.clone()).unwrap();
        assert_eq!(alpha.coboundary(), common::d(&alpha));
        assert!(alpha.coboundary().coboundary().is_zero());
    }
}

#[test]
fn explicit_low_degree_forms() {
    let q = group(FiniteGroup::symmetric(3));
    let mut r = rng(3);
    let a2 = random_cochain(&q, 2, 3, &mut r);
    let a3 = random_cochain(&q, 3, 3, &mut r);
    let a4 = random_cochain(&q, 4, 3, &mut r);
    let c = |x: u32, s: u32| q.mul(q.mul(q.inv(s), x), s);
    let m = |x: i64| x.rem_euclid(3) as u32;
    for s in q.elements() {
        let h1 = homotopy_h(s, &a2).unwrap();
        let h2 = homotopy_h(s, &a3).unwrap();
        for g in q.elements() {
            assert_eq!(h1.get(&[g]), m(a2.get(&[s, c(g, s)]) as i64 - a2.get(&[g, s]) as i64));
            for g2 in q.elements() {
                let expected = a3.get(&[s, c(g, s), c(g2, s)]) as i64 - a3.get(&[g, s, c(g2, s)]) as i64
                    + a3.get(&[g, g2, s]) as i64;
                assert_eq!(h2.get(&[g, g2]), m(expected));
            }
        }
        for t in q.elements() {
            let st = q.mul(s, t);
            let big1 = homotopy_big_h(s, t, &a3).unwrap();
            let big2 = homotopy_big_h(s, t, &a4).unwrap();
            for g in q.elements() {
                let expected = a3.get(&[s, t, c(g, st)]) as i64 - a3.get(&[s, c(g, s), t]) as i64 + a3.get(&[g, s, t]) as i64;
                assert_eq!(big1.get(&[g]), m(expected));
                for g2 in q.elements() {
                    let expected = a4.get(&[s, t, c(g, st), c(g2, st)]) as i64
                        - a4.get(&[s, c(g, s), t, c(g2, st)]) as i64
                        + a4.get(&[s, c(g, s), c(g2, s), t]) as i64
                        + a4.get(&[g, s, t, c(g2, st)]) as i64
                        - a4.get(&[g, s, c(g2, s), t]) as i64
                        + a4.get(&[g, g2, s, t]) as i64;
                    assert_eq!(big2.get(&[g, g2]), m(expected));
                }
            }
        }
    }
}

#[test]
fn coboundary_examples() {
    let z2 = group(FiniteGroup::cyclic(2));
    let constant = Cochain::from_fn(z2.clone(), 0, 2, |_| 1);
    assert!(constant.coboundary().is_zero());
    let identity = Cochain::from_fn(z2.clone(), 1, 2, |t| t[0] as i64);
    let d = identity.coboundary();
    assert_eq!(d.get(&[1, 1]), 0);
    assert!(d.is_zero());
    assert!(xyz().coboundary().is_zero());
}

#[test]
fn class_functions_are_conjugation_invariant() {
    let s3 = group(FiniteGroup::symmetric(3));
    let alpha = Cochain::from_fn(s3.clone(), 1, 2, |t| (s3.elem_order(t[0]) == 2) as i64);
    let three_cycle = s3.elements().find(|&x| s3.elem_order(x) == 3).unwrap();
    assert_eq!(conj_act(three_cycle, &alpha), alpha);
    assert_eq!(conj_act(0, &alpha), alpha);
    let z4 = group(FiniteGroup::cyclic(4));
    let beta = random_cochain(&z4, 2, 2, &mut rng(1));
    for s in z4.elements() {
        assert_eq!(conj_act(s, &beta), beta);
    }
}

#[test]
fn homotopy_examples() {
    let z2 = group(FiniteGroup::cyclic(2));
    let product = Cochain::from_fn(z2.clone(), 2, 2, |t| (t[0] * t[1]) as i64);
    assert!(homotopy_h(1, &product).unwrap().is_zero());
    // h_1(xyz)(g₁,g₂) = g₁g₂.
    assert_eq!(h_class(1, &xyz()).unwrap(), product);
    // H_{1,1}(xyz)(1) = 1.
    assert_eq!(homotopy_big_h(1, 1, &xyz()).unwrap().get(&[1]), 1);
    let beta = random_cochain(&z2, 1, 2, &mut rng(5));
    let lhs = &homotopy_h(0, &beta.coboundary()).unwrap() + &homotopy_h(0, &beta).unwrap().coboundary();
    assert!(lhs.is_zero());
}

#[test]
fn homotopy_needs_positive_degree() {
    let z2 = group(FiniteGroup::cyclic(2));
    let constant = Cochain::zero(z2.clone(), 0, 2);
    assert!(matches!(homotopy_h(1, &constant), Err(Error::DegreeTooLow(_))));
    assert!(matches!(homotopy_big_h(1, 1, &Cochain::zero(z2, 1, 2)), Err(Error::DegreeTooLow(_))));
}

#[test]
fn pullback_examples() {
    let z2 = group(FiniteGroup::cyclic(2));
    let z4 = group(FiniteGroup::cyclic(4));
    let reduction = GroupHom::from_generator_images(z4.clone(), z2.clone(), &[1]).unwrap();
    let pulled = xyz().pullback(&reduction);
    for t in tuples(4, 3) {
        assert_eq!(pulled.get(&t), (t[0] % 2) * (t[1] % 2) * (t[2] % 2));
    }
    let trivial = GroupHom::trivial(z4.clone(), z2.clone());
    let c = random_cochain(&z2, 2, 2, &mut rng(9));
    let flat = c.pullback(&trivial);
    assert!(flat.values().iter().all(|&v| v == c.get(&[0, 0])));
    let beta = random_cochain(&z2, 2, 2, &mut rng(10));
    assert_eq!(beta.coboundary().pullback(&reduction), beta.pullback(&reduction).coboundary());
}

#[test]
fn cyclic_family_and_entry_checks() {
    for n in 2..=4 {
        let g = group(FiniteGroup::cyclic(n));
        for k in 0..n as i64 {
            check_cocycle(&cyclic_cocycle(g.clone(), n, k, n as u32)).unwrap();
        }
    }
    let mut broken = xyz();
    broken.set(&[1, 0, 0], 1);
    match check_cocycle(&broken) {
        Err(Error::NotACocycle { tuple, value }) => {
            // The first failing quadruple, confirmed by the naive coboundary.
            assert_ne!(common::d(&broken).get(&tuple), 0);
            assert_eq!(common::d(&broken).get(&tuple), value);
            let first = tuples(2, 4).into_iter().find(|t| common::d(&broken).get(t) != 0).unwrap();
            assert_eq!(tuple, first);
        }
        other => panic!("expected NotACocycle, got {other:?}"),
    }
}

#[test]
fn exhaustive_identities_on_z2() {
    let z2 = group(FiniteGroup::cyclic(2));
    for degree in 1..=3 {
        for alpha in all_cochains(&z2, degree, 2) {
            for s in z2.elements() {
                assert!(homotopy_defect(s, &alpha).unwrap().is_zero());
                if degree >= 2 {
                    for t in z2.elements() {
                        assert!(homotopy_pair_defect(s, t, &alpha).unwrap().is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn identities_with_a_twisted_action() {
    let s3 = group(FiniteGroup::symmetric(3));
    let chi = sign_character(&s3);
    let mut r = rng(21);
    for degree in 1..=3 {
        for _ in 0..5 {
            let alpha = random_cochain(&s3, degree, 3, &mut r).with_action(chi.clone()).unwrap();
            for s in s3.elements() {
                assert!(homotopy_defect(s, &alpha).unwrap().is_zero());
                if degree >= 2 {
                    for t in s3.elements() {
                        assert!(homotopy_pair_defect(s, t, &alpha).unwrap().is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn h_is_a_cocycle_modulo_coboundaries() {
    // For a cocycle c: h_{στ}(c) ≡ h_σ(c) + σ.h_τ(c) modulo B², and each h_σ(c)
    // satisfies d h_σ(c) = σ.c − c.
    let z4 = group(FiniteGroup::cyclic(4));
    let c = cyclic_cocycle(z4.clone(), 4, 1, 4);
    let s3 = group(FiniteGroup::symmetric(3));
    let mut r = rng(4);
    let b = random_cochain(&s3, 2, 3, &mut r);
    let cases = [c, b.coboundary()];
    for c in &cases {
        let g = c.group().clone();
        for s in g.elements() {
            let hs = homotopy_h(s, c).unwrap();
            assert_eq!(hs.coboundary(), &conj_act(s, c) - c);
            for t in g.elements() {
                let combined = &(&hs + &conj_act(s, &homotopy_h(t, c).unwrap())) - &homotopy_h(g.mul(s, t), c).unwrap();
                assert!(dwarith::cohomology::is_coboundary(&combined).unwrap(), "σ={s}, τ={t}");
            }
        }
    }
}

fn group_strategy() -> impl Strategy<Value = Arc<FiniteGroup>> {
    prop_oneof![
        Just(group(FiniteGroup::cyclic(2))),
        Just(group(FiniteGroup::cyclic(3))),
        Just(group(FiniteGroup::abelian(&[2, 2]))),
        Just(group(FiniteGroup::symmetric(3))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(q in group_strategy(), modulus in 2u32..6, degree in 0usize..3, seed in any::<u64>()) {
        let alpha = random_cochain(&q, degree, modulus, &mut rng(seed));
        prop_assert!(alpha.coboundary().coboundary().is_zero());
    }

    #[test]
    fn homotopy_identities_hold(q in group_strategy(), modulus in 2u32..5, degree in 1usize..4, seed in any::<u64>()) {
        let alpha = random_cochain(&q, degree, modulus, &mut rng(seed));
        for s in q.elements() {
            prop_assert!(homotopy_defect(s, &alpha).unwrap().is_zero());
        }
        if degree >= 2 {
            let s = (seed % q.order() as u64) as u32;
            for t in q.elements() {
                prop_assert!(homotopy_pair_defect(s, t, &alpha).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn pullback_commutes_with_coboundary(seed in any::<u64>(), degree in 0usize..3) {
        let s3 = group(FiniteGroup::symmetric(3));
        let z2 = group(FiniteGroup::cyclic(2));
        let v4 = group(FiniteGroup::abelian(&[2, 2]));
        let sign = GroupHom::new(s3.clone(), z2.clone(), s3.elements().map(|x| (s3.elem_order(x) == 2) as u32).collect()).unwrap();
        let homs = dwarith::group::enumerate_homs(&v4, &s3);
        let rho = &homs[(seed % homs.len() as u64) as usize];
        let alpha = random_cochain(&z2, degree, 2, &mut rng(seed));
        let composite = sign.compose_after(rho);
        prop_assert_eq!(alpha.pullback(&composite), alpha.pullback(&sign).pullback(rho));
        prop_assert_eq!(alpha.coboundary().pullback(&composite), alpha.pullback(&composite).coboundary());
    }
}
