use entry7::*;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| rat(n, d))
}

fn unit_rat() -> impl Strategy<Value = Rat> {
    (-95i64..=95).prop_map(|n| rat(n, 100))
}

fn matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Rat>>> {
    prop::collection::vec(prop::collection::vec(small_rat(), n), n)
}

fn transpose(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    (0..m.len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn det_is_invariant_under_transpose(m in (1usize..=5).prop_flat_map(matrix)) {
        prop_assert_eq!(exact_det(&m).unwrap(), exact_det(&transpose(&m)).unwrap());
    }

    #[test]
    fn det_is_linear_in_a_row(
        m in matrix(4),
        row in prop::collection::vec(small_rat(), 4),
        s in small_rat(),
        i in 0usize..4,
    ) {
        let mut a = m.clone();
        a[i] = row.clone();
        let mut combined = m.clone();
        combined[i] = m[i].iter().zip(&row).map(|(x, y)| x + &s * y).collect();
        let lhs = exact_det(&combined).unwrap();
        let rhs = exact_det(&m).unwrap() + &s * exact_det(&a).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn det_changes_sign_on_row_swap(m in matrix(4), i in 0usize..4, j in 0usize..4) {
        prop_assume!(i != j);
        let mut swapped = m.clone();
        swapped.swap(i, j);
        prop_assert_eq!(exact_det(&swapped).unwrap(), -exact_det(&m).unwrap());
    }

    #[test]
    fn rational_to_real_preserves_order(a in small_rat(), b in small_rat()) {
        let p = Precision::DEFAULT;
        let (x, y) = (real_from_rat(&a, p), real_from_rat(&b, p));
        prop_assert_eq!(a.cmp(&b), x.partial_cmp(&y).unwrap());
    }

    #[test]
    fn qpoch_recurrence(a in small_rat(), q in unit_rat(), n in 0usize..30) {
        let next = qpoch_rat(&a, &q, n + 1);
        let expected = qpoch_rat(&a, &q, n) * (Rat::one() - &a * ipow(&q, n as i64));
        prop_assert_eq!(next, expected);
    }

    #[test]
    fn qpoch_splits(a in small_rat(), q in unit_rat(), m in 0usize..15, n in 0usize..15) {
        let qm = ipow(&q, m as i64);
        let split = qpoch_rat(&a, &q, m) * qpoch_rat(&(&a * qm), &q, n);
        prop_assert_eq!(qpoch_rat(&a, &q, m + n), split);
    }

    #[test]
    fn qpoch_inf_shift(a in unit_rat(), q in (1i64..=80).prop_map(|n| rat(n, 100))) {
        // (a; q)_inf = (1 - a) (aq; q)_inf
        let p = Precision::DEFAULT;
        let (ar, qr) = (real_from_rat(&a, p), real_from_rat(&q, p));
        let lhs = qpoch_inf(&ar, &qr, p).unwrap();
        let rhs = (Real::from_i64(1, p) - &ar) * qpoch_inf(&(ar.clone() * &qr), &qr, p).unwrap();
        prop_assert!((lhs - rhs).abs() < agreement::<Real>(p));
    }

    #[test]
    fn sign_forms_agree_at_every_depth(
        d in prop::collection::vec(small_rat().prop_filter("nonzero", |r| !r.is_zero()), 1..12),
    ) {
        let plus = CFrac::plus(d.clone()).unwrap();
        let minus = plus.to_minus();
        prop_assert_eq!(minus.to_plus(), plus.clone());
        let a = convergents(&plus, d.len() - 1);
        let b = convergents(&minus, d.len() - 1);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "forms disagree: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn muir_rogers_round_trip(q in (1i64..=9).prop_map(|n| rat(n, 10)), kappa in 1u32..=3) {
        let qk = ipow(&q, kappa as i64);
        let ps = PowerSeries::from_fn(12, |n| qpoch_rat(&q, &qk, n));
        let e = muir_rogers(&ps, 9).unwrap();
        let back = cfrac_to_series(&e, 10, 8).unwrap();
        prop_assert_eq!(back.coeffs(), &ps.coeffs()[..9]);
    }
}
