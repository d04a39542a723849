mod common;

use btorders_core::lattice::{hnf, trace_dual, Lattice, Vector};
use btorders_core::Field;
use common::*;
use proptest::prelude::*;

fn vectors(f: &Field, n: usize, count: usize) -> impl Strategy<Value = Vec<Vector>> {
    proptest::collection::vec(proptest::collection::vec(scalar(f), n), count)
}

fn field_and_vectors(n: usize, count: usize) -> impl Strategy<Value = (Field, Vec<Vector>)> {
    field().prop_flat_map(move |f| (Just(f.clone()), vectors(&f, n, count)))
}

fn full_lattice(f: &Field, gens: &[Vector]) -> Option<Lattice> {
    let mut all = gens.to_vec();
    let n = gens[0].len();
    for i in 0..n {
        let mut e = vec![f.zero(); n];
        e[i] = f.pi_pow(3);
        all.push(e);
    }
    hnf(f, n, &all).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_axioms((f, xs) in field().prop_flat_map(|f| (Just(f.clone()), (scalar(&f), scalar(&f))))) {
        let (x, y) = xs;
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (vx, vy) = (x.val().unwrap(), y.val().unwrap());
        prop_assert_eq!((&x * &y).val(), Some(vx + vy));
        let s = &x + &y;
        if !s.is_zero() {
            prop_assert!(s.val().unwrap() >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(s.val(), Some(vx.min(vy)));
            }
        }
        prop_assert_eq!(f.uniformizer().val(), Some(1));
        prop_assert_eq!(x.inv().unwrap().val(), Some(-vx));
        prop_assert_eq!(x.is_integral(), vx >= 0);
    }

    #[test]
    fn galois_conjugation((f, xs) in field().prop_filter("quadratic", |f| !f.is_base())
        .prop_flat_map(|f| (Just(f.clone()), (scalar(&f), scalar(&f))))) {
        let (x, y) = xs;
        let cx = x.conj().unwrap();
        prop_assert_eq!(cx.conj().unwrap(), x.clone());
        prop_assert_eq!((&x * &y).conj().unwrap(), &cx * &y.conj().unwrap());
        prop_assert_eq!((&x + &y).conj().unwrap(), &cx + &y.conj().unwrap());
        prop_assert_eq!(&x * &cx, f.from_rational(x.norm()));
        prop_assert_eq!(&x + &cx, f.from_rational(x.trace()));
        prop_assert_eq!(x.val(), cx.val());
    }

    #[test]
    fn hnf_is_canonical((f, gens) in field_and_vectors(3, 4), shuffle in 0usize..24, c in -5i64..6) {
        let Some(l) = full_lattice(&f, &gens) else { return Ok(()); };
        prop_assert_eq!(hnf(&f, 3, l.basis()).unwrap(), l.clone());
        let mut other: Vec<Vector> = l.basis().to_vec();
        other.rotate_left(shuffle % 3);
        let mixed: Vector = other[0].iter().zip(&other[1]).map(|(a, b)| a + &(&f.int(c) * b)).collect();
        other[0] = mixed;
        other.swap(shuffle % 2, 2);
        prop_assert_eq!(hnf(&f, 3, &other).unwrap(), l.clone());
        for x in l.basis() {
            prop_assert!(l.member(x));
        }
    }

    #[test]
    fn lattice_laws((f, g) in field_and_vectors(2, 4)) {
        let (Some(a), Some(b)) = (full_lattice(&f, &g[..2]), full_lattice(&f, &g[2..])) else { return Ok(()); };
        let meet = a.intersect(&b).unwrap();
        let join = a.sum(&b).unwrap();
        prop_assert_eq!(&meet, &b.intersect(&a).unwrap());
        prop_assert_eq!(&join, &b.sum(&a).unwrap());
        prop_assert!(a.contains(&meet) && b.contains(&meet));
        prop_assert!(join.contains(&a) && join.contains(&b));
        let lhs = join.index_valuation(&a).unwrap();
        let rhs = b.index_valuation(&meet).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.scale(1).scale(-1), a.clone());
        prop_assert_eq!(a.index_valuation(&a.scale(2)).unwrap(), 4);
    }

    #[test]
    fn dual_is_an_involution((f, g) in field_and_vectors(2, 2)) {
        let Some(a) = full_lattice(&f, &g) else { return Ok(()); };
        let pairing = vec![vec![f.one(), f.zero()], vec![f.zero(), f.int(1)]];
        prop_assert_eq!(a.dual(&pairing).dual(&pairing), a.clone());
        let k = Field::base(f.p()).unwrap();
        let four = Lattice::standard(&k, 4).scale(1);
        prop_assert!(trace_dual(&four).unwrap().contains(&four));
    }
}
