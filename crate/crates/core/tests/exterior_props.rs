use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qso_core::exterior::*;
use qso_core::field::{AtV, Field, FieldElem, QSqrt, SqrtPoint};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of the permutation sorting `w`, or zero on a repeated letter.
fn classical_sign<T: Ord + Clone>(w: &[T]) -> i64 {
    let mut s = 1;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] == w[j] {
                return 0;
            }
            if w[i] > w[j] {
                s = -s;
            }
        }
    }
    s
}

/// Classical product of two plus-first basis elements, with all plus
/// generators ordered before all minus generators.
fn classical_product(m: usize, a: (u32, u32), b: (u32, u32), middle: bool) -> FiberForm<BigRational> {
    let tag = |leg: u8, w: Vec<u8>| w.into_iter().map(move |i| (leg, i)).collect::<Vec<_>>();
    let (ap, an) = (tag(0, mask_indices(a.0)), tag(1, mask_indices(a.1)));
    let (bp, bn) = (tag(0, mask_indices(b.0)), tag(1, mask_indices(b.1)));
    let word: Vec<(u8, u8)> = if middle {
        [ap, bp, bn, an].concat()
    } else {
        [bp, bn, ap, an].concat()
    };
    let mut f = FiberForm::zero(m, Order::PlusFirst);
    let s = classical_sign(&word);
    if s != 0 {
        f.add_term(a.0 | b.0, a.1 | b.1, r(s, 1));
    }
    f
}

fn at_one(m: usize) -> Exterior<BigRational> {
    Exterior::new(&ExtParams::new(m).unwrap(), &AtV::new(r(1, 1))).unwrap()
}

fn word(m: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1..=m as u8, 0..=m)
}

fn basis_pair(m: usize) -> impl Strategy<Value = (u32, u32)> {
    (0..1u32 << m, 0..1u32 << m)
}

#[test]
fn classical_limit_small_words() {
    for m in 3..=6 {
        let e = at_one(m);
        for w in [vec![2u8, 1], vec![3, 1, 2], vec![m as u8, 1], vec![1, 1]] {
            let s = e.straighten(Leg::Minus, &w).unwrap();
            let sign = classical_sign(&w);
            if sign == 0 {
                assert!(s.is_empty(), "{w:?}");
            } else {
                assert_eq!(s, vec![(mask_of(&w), r(sign, 1))], "{w:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn straightening_at_q_one_is_classical(m in 3usize..=7, seed in any::<u64>(), leg in prop::bool::ANY) {
        let e = at_one(m);
        let w: Vec<u8> = (0..m).map(|i| 1 + ((seed >> (4 * i)) % m as u64) as u8).collect();
        let leg = if leg { Leg::Plus } else { Leg::Minus };
        let s = e.straighten(leg, &w).unwrap();
        let sign = classical_sign(&w);
        if sign == 0 {
            prop_assert!(s.is_empty());
        } else {
            prop_assert_eq!(s, vec![(mask_of(&w), r(sign, 1))]);
        }
    }

    #[test]
    fn straightening_is_idempotent_and_associative((m, u, v) in (3usize..=5).prop_flat_map(|m| (Just(m), word(m), word(m)))) {
        let e: Exterior<BigRational> = Exterior::new(&ExtParams::new(m).unwrap(), &AtV::new(r(11, 10))).unwrap();
        for leg in [Leg::Plus, Leg::Minus] {
            let su = e.straighten(leg, &u).unwrap();
            for (mask, _) in &su {
                prop_assert_eq!(e.straighten(leg, &mask_indices(*mask)).unwrap(), vec![(*mask, r(1, 1))]);
            }
            let whole = e.straighten(leg, &[u.clone(), v.clone()].concat()).unwrap();
            let mut direct = FiberForm::zero(m, Order::PlusFirst);
            for (mask, c) in whole {
                direct.add_term(mask, 0, c);
            }
            let mut staged = FiberForm::zero(m, Order::PlusFirst);
            for (mask, c) in &su {
                for (mask2, c2) in e.straighten(leg, &[mask_indices(*mask), v.clone()].concat()).unwrap() {
                    staged.add_term(mask2, 0, c.mul(&c2));
                }
            }
            prop_assert_eq!(direct, staged);
        }
    }

    #[test]
    fn middle_insertion_at_q_one_matches_left_insertion((m, a, b) in (3usize..=5).prop_flat_map(|m| (Just(m), basis_pair(m), basis_pair(m)))) {
        let e = at_one(m);
        let x = FiberForm::basis(m, Order::PlusFirst, a.0, a.1);
        let y = FiberForm::basis(m, Order::PlusFirst, b.0, b.1);
        let mid = e.wedge_middle(&x, &y).unwrap();
        prop_assert_eq!(&mid, &classical_product(m, a, b, true));
        // left insertion differs by the Koszul sign of moving e+_I past y
        let sign = if (a.0.count_ones() * (b.0.count_ones() + b.1.count_ones())) % 2 == 0 { 1 } else { -1 };
        let left = classical_product(m, a, b, false);
        prop_assert_eq!(mid.scale(&r(sign, 1)), left);
    }

    #[test]
    fn hodge_lands_in_complementary_bidegree((a, b, seed) in (0usize..=3, 0usize..=3, any::<u64>())) {
        let m = 3;
        let e: Exterior<QSqrt> = Exterior::new(&ExtParams::new(m).unwrap(), &SqrtPoint::new(r(11, 10))).unwrap();
        let mut w = FiberForm::zero(m, Order::PlusFirst);
        let (ps, ns) = (subsets(m, a), subsets(m, b));
        let mut s = seed;
        for p in &ps {
            for n in &ns {
                let c = (s % 7) as i64 - 3;
                s = s.rotate_left(3) ^ 0x9e37_79b9;
                w.add_term(*p, *n, QSqrt::rational(r(c, 1)));
            }
        }
        let star = e.hodge(&w).unwrap();
        for form in star.values() {
            for bd in form.bidegrees() {
                prop_assert_eq!(bd, (m - b, m - a));
            }
        }
        prop_assert_eq!(w.is_zero(), star.values().all(|f| f.is_zero()));
    }
}

#[test]
fn kappa_powers_multiply() {
    for m in 3..=5 {
        let e: Exterior<BigRational> = Exterior::new(&ExtParams::new(m).unwrap(), &AtV::new(r(11, 10))).unwrap();
        for order in [Order::PlusFirst, Order::MinusFirst] {
            for a in 0..=m {
                for b in 0..=m - a {
                    let lhs = e.wedge_middle(&e.kappa_power(a, order), &e.kappa_power(b, order)).unwrap();
                    assert_eq!(lhs, e.kappa_power(a + b, order), "M={m} a={a} b={b}");
                }
            }
        }
    }
}

#[test]
fn symbolic_kappa_reduces_to_classical_at_one() {
    let p = ExtParams::new(4).unwrap();
    let k = kappa_power(&p, 2);
    let f = k.coefficient(&[1, 2], &[1, 2]);
    assert_eq!(f.eval_at(&r(1, 1), None).unwrap(), r(-2, 1));
    assert!(!FieldElem::is_zero(&f));
}
