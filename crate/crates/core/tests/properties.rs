use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rhb_core::{
    boundary_pq, lens_from_string, markov_tree, seq_p, seq_q, slide_coefficient, slide_f,
    starting_triple, string_product, tau, FramedCurve, Framing, LensSpace, PlumbingString,
};

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn fc(p: i64, q: i64, s: i64) -> FramedCurve {
    FramedCurve::new(p, q, Framing::from_sign(s).unwrap()).unwrap()
}

fn odd(lo: i64, hi: i64) -> impl Iterator<Item = i64> {
    (lo..=hi).filter(|m| m % 2 != 0)
}

/// Every string reachable by blowing down `1`s in any order that admits no
/// further move.
fn terminal_strings(start: Vec<i64>) -> HashSet<Vec<i64>> {
    let mut seen = HashSet::new();
    let mut terminal = HashSet::new();
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        if !seen.insert(v.clone()) {
            continue;
        }
        let ones: Vec<usize> = (0..v.len()).filter(|&i| v[i] == 1).collect();
        if ones.is_empty() || v == [0] {
            terminal.insert(v);
            continue;
        }
        for i in ones {
            stack.push(
                PlumbingString::new(v.clone())
                    .blow_down_once(i + 1)
                    .unwrap()
                    .entries()
                    .to_vec(),
            );
        }
    }
    terminal
}

fn first_column_p(v: &[i64]) -> BigInt {
    let p = string_product(&PlumbingString::new(v.to_vec()))
        .first_column()
        .p;
    if p < big(0) {
        -p
    } else {
        p
    }
}

#[test]
fn blow_down_order_and_reaching_zero() {
    // The end state can depend on the order in general...
    let ends = terminal_strings(vec![1, 1, 0]);
    assert_eq!(ends, HashSet::from([vec![0, 0], vec![0, -1]]));

    // ...but reaching (0) does not, and |p| is shared by every end state.
    for len in 1..=7u32 {
        for code in 0..5usize.pow(len) {
            let mut c = code;
            let v: Vec<i64> = (0..len)
                .map(|_| {
                    let a = (c % 5) as i64;
                    c /= 5;
                    a
                })
                .collect();
            let ends = terminal_strings(v.clone());
            let leftmost = PlumbingString::new(v.clone()).blow_down_to_zero();
            let last = leftmost.states.last().unwrap().entries().to_vec();
            assert!(ends.contains(&last), "{v:?}: leftmost ends at {last:?}");
            if ends.contains(&vec![0]) {
                assert_eq!(ends.len(), 1, "{v:?} reaches (0) and also {ends:?}");
                assert!(leftmost.reaches_zero);
            }
            let p = first_column_p(&v);
            assert!(ends.iter().all(|e| first_column_p(e) == p), "{v:?}");
        }
    }
}

#[test]
fn family_strings_blow_down() {
    for k in -1..=8 {
        for m in odd(1, 11) {
            for s in [
                PlumbingString::s_prime(k, m).unwrap(),
                PlumbingString::s_double_prime(k, m).unwrap(),
            ] {
                let b = s.blow_down_to_zero();
                assert!(b.reaches_zero, "k={k} m={m}: {s}");
                assert_eq!(b.positions.len(), s.len() - 1);
            }
            assert!(!PlumbingString::s(k, m).unwrap().blows_down_to_zero());
        }
    }
}

#[test]
fn hj_round_trip_small() {
    for p in 2..=300i64 {
        for q in 1..p {
            if p.gcd(&q) != 1 {
                continue;
            }
            let s = PlumbingString::hj_expand(&big(p), &big(q)).unwrap();
            assert!(s.entries().iter().all(|&a| a >= 2));
            let f = s.hj_evaluate().unwrap();
            assert_eq!((f.numer(), f.denom()), (&big(p), &big(q)));
            assert_eq!(string_product(&s).first_column().p, big(p));
        }
    }
}

#[test]
fn lens_equivalence_is_an_equivalence() {
    for p in 2..=30i64 {
        let lenses: Vec<LensSpace> = (1..p)
            .filter(|q| p.gcd(q) == 1)
            .map(|q| LensSpace::new(p, q).unwrap())
            .collect();
        for a in &lenses {
            assert!(a.is_equivalent(a));
            for b in &lenses {
                assert_eq!(a.is_equivalent(b), b.is_equivalent(a));
                for c in &lenses {
                    if a.is_equivalent(b) && b.is_equivalent(c) {
                        assert!(a.is_equivalent(c), "{a} {b} {c}");
                    }
                }
            }
        }
    }
    assert!(!LensSpace::new(5, 1)
        .unwrap()
        .is_equivalent(&LensSpace::new(7, 1).unwrap()));
    assert!(LensSpace::new(0, -1)
        .unwrap()
        .is_equivalent(&LensSpace::s1_x_s2()));
}

#[test]
fn lens_of_form_grid() {
    for p in 2..=60i64 {
        for q in 1..p {
            if p.gcd(&q) != 1 {
                continue;
            }
            let lens = LensSpace::new(p * p, p * q - 1).unwrap();
            assert_eq!(
                lens.as_p2_pq_minus_1(),
                Some((big(p), big(q.min(p - q)))),
                "L({}, {})",
                p * p,
                p * q - 1
            );
        }
    }
    assert_eq!(LensSpace::new(24, 5).unwrap().as_p2_pq_minus_1(), None);
}

#[test]
fn primed_strings_give_s1_x_s2() {
    for k in -1..=8 {
        for m in odd(1, 11) {
            for s in [
                PlumbingString::s_prime(k, m).unwrap(),
                PlumbingString::s_double_prime(k, m).unwrap(),
            ] {
                assert_eq!(lens_from_string(&s), LensSpace::s1_x_s2(), "k={k} m={m}");
            }
        }
    }
}

#[test]
fn slide_walks_up_the_tau_family() {
    for l in -1..=12 {
        for m in odd(1, 11) {
            let t = tau(l, m).unwrap();
            assert_eq!(slide_coefficient(&t.0[0], &t.0[1]), big(-m), "l={l} m={m}");
            let (x, y) = slide_f(&t.0[0], &t.0[1]).unwrap();
            let next = tau(l + 1, m).unwrap();
            assert_eq!(
                [x, y],
                [next.0[0].clone(), next.0[1].clone()],
                "l={l} m={m}"
            );
        }
    }
}

#[test]
fn slide_and_flip_lower_a_pair_by_two() {
    for a in 2..=200i64 {
        let (u, v) = (fc(a + 2, a + 1, 1), fc(a, a - 1, 1));
        assert_eq!(slide_coefficient(&u, &v), big(2));
        let (x, y) = slide_f(&u, &v).unwrap();
        assert_eq!(x, fc(a, a - 1, 1));
        assert_eq!(y.flipped(), fc(a - 2, a - 3, 1), "a={a}");
    }
}

#[test]
fn three_slides_reach_the_bottom_pair() {
    let mut pair = (fc(0, 1, 1), fc(1, 0, -1));
    for _ in 0..3 {
        pair = slide_f(&pair.0, &pair.1).unwrap();
    }
    assert_eq!(pair, (fc(2, 1, -1), fc(3, 2, 1)));
}

#[test]
fn meridians_match_tau() {
    for k in 0..=8 {
        for m in odd(1, 11) {
            assert_eq!(starting_triple(k, m).unwrap(), tau(2 * k, m).unwrap());
        }
    }
}

#[test]
fn boundary_grows_with_k_and_m() {
    for m in odd(1, 11) {
        let mut last = big(0);
        for k in -1..=8 {
            let b = boundary_pq(k, m).unwrap();
            assert!(b.p > last, "k={k} m={m}");
            assert!(b.q < b.p && b.p.gcd(&b.q) == big(1));
            assert_eq!(b.p, seq_p(2 * k + 2).eval_at(&big(m)));
            assert_eq!(b.q, seq_q(2 * k + 1).eval_at(&big(m)));
            last = b.p;
        }
    }
    for k in 0..=6 {
        let ps: Vec<BigInt> = odd(1, 11).map(|m| boundary_pq(k, m).unwrap().p).collect();
        assert!(ps.windows(2).all(|w| w[0] < w[1]), "k={k}");
    }
}

/// Markov numbers up to `n` by solving for the largest entry.
fn brute_markov(n: u64) -> BTreeSet<BigInt> {
    let mut out = BTreeSet::new();
    for a in 1..=n {
        for b in a..=n {
            // c^2 - 3ab c + a^2 + b^2 = 0, largest root.
            let s = 3 * a * b;
            let disc = (s * s) as i128 - 4 * (a * a + b * b) as i128;
            if disc < 0 {
                continue;
            }
            let r = (disc as f64).sqrt() as i128;
            let Some(r) = (r - 2..=r + 2).find(|r| r * r == disc) else {
                continue;
            };
            let c = (s as i128 + r) / 2;
            if (s as i128 + r) % 2 == 0 && c as u64 <= n && c as u64 >= b {
                out.extend([a, b, c as u64].map(BigInt::from));
            }
        }
    }
    out
}

#[test]
fn markov_tree_depth_12_is_complete_below_2000() {
    let tree = markov_tree(12);
    assert!(tree.iter().all(|t| t.satisfies_equation()));
    let numbers: BTreeSet<BigInt> = tree
        .iter()
        .flat_map(|t| t.entries().iter().cloned())
        .filter(|n| n <= &big(2000))
        .collect();
    assert_eq!(numbers, brute_markov(2000));
}

fn hj_string() -> impl Strategy<Value = PlumbingString> {
    prop::collection::vec(2i64..=7, 1..10).prop_map(PlumbingString::new)
}

proptest! {
    #[test]
    fn dual_is_an_involution(s in hj_string()) {
        let d = s.riemenschneider_dual().unwrap();
        prop_assert_eq!(d.riemenschneider_dual().unwrap(), s.clone());
        let f = s.hj_evaluate().unwrap();
        let g = d.hj_evaluate().unwrap();
        prop_assert_eq!(g.numer(), f.numer());
        prop_assert_eq!(g.denom(), &(f.numer() - f.denom()));
    }

    #[test]
    fn hj_round_trip_large(p in 2u64..u64::MAX, q in 1u64..u64::MAX) {
        let (p, q) = (BigInt::from(p.max(q) ), BigInt::from(p.min(q)));
        prop_assume!(p > q && p.gcd(&q) == BigInt::from(1));
        let s = PlumbingString::hj_expand(&p, &q).unwrap();
        let f = s.hj_evaluate().unwrap();
        prop_assert_eq!((f.numer().clone(), f.denom().clone()), (p, q));
    }

    #[test]
    fn any_blow_down_order_agrees_on_zero(v in prop::collection::vec(0i64..=4, 1..14), picks in prop::collection::vec(any::<prop::sample::Index>(), 32)) {
        let mut cur = PlumbingString::new(v.clone());
        let mut picks = picks.into_iter();
        loop {
            if cur.entries() == [0] {
                break;
            }
            let ones: Vec<usize> = (0..cur.len()).filter(|&i| cur.entries()[i] == 1).collect();
            if ones.is_empty() {
                break;
            }
            let i = picks.next().map_or(ones[0], |ix| ones[ix.index(ones.len())]);
            cur = cur.blow_down_once(i + 1).unwrap();
        }
        let leftmost = PlumbingString::new(v).blow_down_to_zero();
        prop_assert_eq!(leftmost.reaches_zero, cur.entries() == [0]);
        prop_assert_eq!(first_column_p(leftmost.states.last().unwrap().entries()), first_column_p(cur.entries()));
    }

    #[test]
    fn blow_down_keeps_p_up_to_sign(v in prop::collection::vec(-3i64..=6, 1..12)) {
        let s = PlumbingString::new(v);
        if let Some(i) = s.entries().iter().position(|&a| a == 1) {
            let t = s.blow_down_once(i + 1).unwrap();
            prop_assert_eq!(first_column_p(t.entries()), first_column_p(s.entries()));
        }
    }
}
