mod common;

use mal::algebra::{DyadicSet, Element, FreeElement, IntervalSet, Sign, SignVector};
use mal::scalar::{rat, DyadicRational, QuadScalar, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Sign of `a + b√2` from a 30-digit bracket of √2.
fn decimal_sign(a: &Rational, b: &Rational) -> i8 {
    let scale = BigInt::from(10).pow(30);
    let lo = (BigInt::from(2) * &scale * &scale).sqrt();
    let hi = &lo + 1;
    let bracket = |s: &BigInt| a + b * Rational::new(s.clone(), scale.clone());
    let (x, y) = (bracket(&lo), bracket(&hi));
    let zero = rat(0, 1);
    if x > zero && y > zero {
        1
    } else if x < zero && y < zero {
        -1
    } else {
        assert!(*a == zero && *b == zero, "bracket too coarse");
        0
    }
}

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=97).prop_map(|(p, q)| rat(p, q))
}

fn dyadic() -> impl Strategy<Value = DyadicRational> {
    (0u64..64).prop_map(|n| DyadicRational::new(n, 6))
}

/// A level and a mask of cells at that level.
fn masked() -> impl Strategy<Value = (u32, u64)> {
    (0u32..=6).prop_flat_map(|l| {
        let max = if l == 6 { u64::MAX } else { (1u64 << (1u64 << l)) - 1 };
        (Just(l), 0..=max)
    })
}

/// The mask of a set re-expressed at level 6.
fn at_level6(level: u32, mask: u64) -> u64 {
    let w = 1u64 << (6 - level);
    (0..64u64).filter(|c| mask >> (c / w) & 1 == 1).fold(0, |acc, c| acc | 1 << c)
}

fn set((level, mask): (u32, u64)) -> DyadicSet {
    DyadicSet::from_mask_u64(level, mask).unwrap()
}

proptest! {
    #[test]
    fn quad_sign_matches_decimals(a in rational(), b in rational()) {
        let q = QuadScalar::new(a.clone(), b.clone());
        prop_assert_eq!(q.sign(), decimal_sign(&a, &b));
    }

    #[test]
    fn quad_order_is_sign_of_difference(a in rational(), b in rational(), c in rational(), d in rational()) {
        let x = QuadScalar::new(a.clone(), b.clone());
        let y = QuadScalar::new(c.clone(), d.clone());
        let expected = decimal_sign(&(a - c), &(b - d)).cmp(&0);
        prop_assert_eq!(x.cmp(&y), expected);
    }

    #[test]
    fn quad_floor_brackets(a in rational(), b in rational()) {
        let q = QuadScalar::new(a, b);
        let f = q.floor();
        prop_assert!(QuadScalar::from(Rational::from_integer(f.clone())) <= q);
        prop_assert!(q < QuadScalar::from(Rational::from_integer(f + 1)));
    }

    #[test]
    fn dyadic_rational_round_trip(n in -5000i64..5000, e in 0u32..20) {
        let d = DyadicRational::new(n, e);
        let r = d.to_rational();
        prop_assert_eq!(r.clone(), rat(n, 1 << e));
        prop_assert_eq!(DyadicRational::from_rational(&r), Some(d));
    }

    #[test]
    fn dyadic_sets_match_bitmasks(x in masked(), y in masked()) {
        let (a, b) = (set(x), set(y));
        let (ma, mb) = (at_level6(x.0, x.1), at_level6(y.0, y.1));
        let back = |m: u64| DyadicSet::from_mask_u64(6, m).unwrap();
        prop_assert_eq!(a.meet(&b), back(ma & mb));
        prop_assert_eq!(a.join(&b), back(ma | mb));
        prop_assert_eq!(a.difference(&b), back(ma & !mb));
        prop_assert_eq!(a.complement(), back(!ma));
        prop_assert_eq!(a.leq(&b), ma & !mb == 0);
        prop_assert_eq!(a.disjoint(&b), ma & mb == 0);
        prop_assert_eq!(a.measure(), DyadicRational::new(ma.count_ones(), 6));
    }

    #[test]
    fn boolean_algebra_laws(x in masked(), y in masked(), z in masked()) {
        let (a, b, c) = (set(x), set(y), set(z));
        prop_assert_eq!(a.meet(&b), b.meet(&a));
        prop_assert_eq!(a.join(&b.join(&c)), a.join(&b).join(&c));
        prop_assert_eq!(a.meet(&b.join(&c)), a.meet(&b).join(&a.meet(&c)));
        prop_assert_eq!(a.join(&a.meet(&b)), a.clone());
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.join(&b).complement(), a.complement().meet(&b.complement()));
        prop_assert_eq!(a.leq(&b), a.meet(&b) == a);
    }

    #[test]
    fn element_mask_hex_round_trip(x in masked()) {
        let a = set(x);
        prop_assert_eq!(DyadicSet::from_mask_hex(a.level(), &a.mask_hex()).unwrap(), a);
    }

    #[test]
    fn interval_sets_agree_with_dyadic_sets(x in masked(), y in masked()) {
        let (a, b) = (set(x), set(y));
        let (ia, ib) = (a.to_interval_set(), b.to_interval_set());
        prop_assert_eq!(ia.meet(&ib), a.meet(&b).to_interval_set());
        prop_assert_eq!(ia.join(&ib), a.join(&b).to_interval_set());
        prop_assert_eq!(ia.complement(), a.complement().to_interval_set());
        prop_assert_eq!(ia.measure(), a.lebesgue());
    }

    #[test]
    fn irrational_endpoints(lo in dyadic(), hi in dyadic()) {
        let alpha = mal::scalar::alpha();
        let cut = IntervalSet::interval(QuadScalar::zero(), alpha.clone()).unwrap();
        let (l, h) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let piece = IntervalSet::interval(QuadScalar::from(&l), QuadScalar::from(&h)).unwrap();
        let inside = piece.meet(&cut);
        let outside = piece.difference(&cut);
        prop_assert!(inside.disjoint(&outside));
        prop_assert_eq!(inside.join(&outside), piece.clone());
        prop_assert_eq!(inside.measure() + outside.measure(), piece.measure());
    }

    /// Meets of particles are particles or zero, and the difference of two
    /// particles is a disjoint union of particles.
    #[test]
    fn particles_form_a_semialgebra(p in prop::collection::vec(0u8..3, 5), q in prop::collection::vec(0u8..3, 5)) {
        let sv = |pat: &[u8]| SignVector::new(
            pat.iter().enumerate().filter(|(_, &s)| s < 2)
                .map(|(i, &s)| (i as u32 + 1, if s == 1 { Sign::Plus } else { Sign::Minus }))
                .collect(),
        ).unwrap();
        let (sp, sq) = (sv(&p), sv(&q));
        let (fp, fq) = (FreeElement::particle(&sp).unwrap(), FreeElement::particle(&sq).unwrap());
        let meet = fp.meet(&fq).unwrap();
        if sp.conflicts_with(&sq) {
            prop_assert!(meet.is_zero());
        } else {
            let mut entries = sp.entries().to_vec();
            entries.extend(sq.entries().iter().filter(|(i, _)| sp.sign_of(*i).is_none()));
            prop_assert_eq!(meet, FreeElement::particle(&SignVector::new(entries).unwrap()).unwrap());
        }
        // p ∖ q = ⊔_k p ∧ θ_{j_1} ∧ … ∧ θ_{j_{k-1}} ∧ ¬θ_{j_k} over the indices of q.
        let mut pieces = Vec::new();
        let mut prefix = sp.clone();
        for &(i, s) in sq.entries() {
            match prefix.sign_of(i) {
                Some(t) if t == s => continue,
                Some(_) => { pieces.push(prefix.clone()); break; }
                None => {
                    pieces.push(prefix.with(i, s.flip()).unwrap());
                    prefix = prefix.with(i, s).unwrap();
                }
            }
        }
        let mut union = FreeElement::zero();
        for (k, a) in pieces.iter().enumerate() {
            let fa = FreeElement::particle(a).unwrap();
            for b in &pieces[k + 1..] {
                prop_assert!(fa.meet(&FreeElement::particle(b).unwrap()).unwrap().is_zero());
            }
            union = union.join(&fa).unwrap();
        }
        prop_assert_eq!(fp.difference(&fq).unwrap(), union);
    }

    #[test]
    fn free_measure_is_additive(rows_a in any::<u16>(), rows_b in any::<u16>()) {
        let idx = vec![1, 2, 3, 4];
        let a = FreeElement::new(idx.clone(), (0..16u64).filter(|r| rows_a >> r & 1 == 1)).unwrap();
        let b0 = FreeElement::new(idx, (0..16u64).filter(|r| rows_b >> r & 1 == 1)).unwrap();
        let b = b0.difference(&a).unwrap();
        let joined = a.join(&b).unwrap().dyadic_measure();
        prop_assert_eq!(joined, &a.dyadic_measure() + &b.dyadic_measure());
    }

    #[test]
    fn refinement_preserves_element(rows in any::<u8>(), extra in 5u32..9) {
        let x = FreeElement::new(vec![1, 2, 3], (0..8u64).filter(|r| rows >> r & 1 == 1)).unwrap();
        let fine = x.refine(&[1, 2, 3, extra]).unwrap();
        prop_assert_eq!(fine.row_count(), 2 * x.row_count());
        prop_assert_eq!(fine.dyadic_measure(), x.dyadic_measure());
        prop_assert_eq!(fine, x);
    }

    #[test]
    fn element_dispatch_rejects_mixed_hosts(x in masked()) {
        let d: Element = set(x).into();
        let i: Element = set(x).to_interval_set().into();
        prop_assert!(d.meet(&i).is_err());
        prop_assert_eq!(d.lebesgue().unwrap(), i.lebesgue().unwrap());
    }
}
