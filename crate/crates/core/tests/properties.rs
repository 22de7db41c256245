use std::cmp::Ordering;
use std::f64::consts::PI;

use proptest::prelude::*;

use solvtwist::annulus::{balance_data, h_min};
use solvtwist::exactnum::{qe_arith, qe_compare, ratio, ArithOp, QuadExt};
use solvtwist::families::{
    free_reduce, pinch_time_at_arclength, repar_map, twist_integrand, twist_threshold, Twist, TwistLedger, ALPHA,
};
use solvtwist::suspension::{MappingTorus, MarkedCurve};
use solvtwist::wp_bounds::twisted_bound;

fn quad() -> impl Strategy<Value = QuadExt> {
    (-50i64..50, 1i64..20, -50i64..50, 1i64..20, prop::sample::select(vec![0u32, 2, 3, 5, 7, 110]))
        .prop_map(|(an, ad, bn, bd, d)| QuadExt::new(ratio(an, ad), ratio(bn, bd), d))
}

fn same_field() -> impl Strategy<Value = (QuadExt, QuadExt)> {
    (prop::sample::select(vec![2u32, 3, 5, 110]), -50i64..50, 1i64..20, -50i64..50, 1i64..20, -50i64..50, -50i64..50)
        .prop_map(|(d, an, ad, bn, bd, cn, en)| {
            (QuadExt::new(ratio(an, ad), ratio(bn, bd), d), QuadExt::new(ratio(cn, 3), ratio(en, 7), d))
        })
}

fn word() -> impl Strategy<Value = Vec<Twist>> {
    prop::collection::vec((prop::sample::select(vec!["a", "b", "c"]), -3i64..=3), 0..12)
        .prop_map(|v| v.into_iter().map(|(l, p)| Twist::new(l, p)).collect())
}

fn torus() -> MappingTorus<f64> {
    MappingTorus::new(-2, 3.737102242198924, vec![MarkedCurve::new(ALPHA, 11).unwrap()]).unwrap()
}

proptest! {
    #[test]
    fn float_enclosure_contains_value(x in quad()) {
        let approx = x.to_f64_bounded();
        let exact_sign = x.signum();
        let float_sign = approx.value.partial_cmp(&0.0).unwrap();
        prop_assert!(approx.error >= 0.0);
        if approx.value.abs() > approx.error {
            prop_assert_eq!(exact_sign, float_sign);
        }
    }

    #[test]
    fn compare_agrees_with_floats((x, y) in same_field()) {
        let exact = qe_compare(&x, &y).unwrap();
        let (fx, fy) = (x.to_f64_bounded(), y.to_f64_bounded());
        if (fx.value - fy.value).abs() > fx.error + fy.error {
            prop_assert_eq!(exact, fx.value.partial_cmp(&fy.value).unwrap());
        }
        prop_assert_eq!(qe_compare(&y, &x).unwrap(), exact.reverse());
        prop_assert_eq!(exact == Ordering::Equal, x == y);
    }

    #[test]
    fn product_float_within_bounds((x, y) in same_field()) {
        let p = qe_arith(&x, &y, ArithOp::Mul).unwrap().to_f64_bounded();
        let naive = x.to_f64() * y.to_f64();
        let slack = 4.0 * f64::EPSILON * (x.to_f64().abs() * y.to_f64().abs()).max(1.0);
        prop_assert!((p.value - naive).abs() <= p.error + slack);
    }

    #[test]
    fn arithmetic_round_trips((x, y) in same_field()) {
        let sum = qe_arith(&x, &y, ArithOp::Add).unwrap();
        prop_assert_eq!(qe_arith(&sum, &y, ArithOp::Sub).unwrap(), x.clone());
        if !y.is_zero() {
            let q = qe_arith(&x, &y, ArithOp::Div).unwrap();
            prop_assert_eq!(qe_arith(&q, &y, ArithOp::Mul).unwrap(), x);
        }
    }

    #[test]
    fn display_parse_round_trip(x in quad()) {
        prop_assert_eq!(x.to_string().parse::<QuadExt>().unwrap(), x);
    }

    #[test]
    fn ledger_composition_associative(a in word(), b in word(), c in word()) {
        let (a, b, c) = (TwistLedger::new(a), TwistLedger::new(b), TwistLedger::new(c));
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn reduction_idempotent_and_reduced(w in word()) {
        let once = free_reduce(w.clone());
        prop_assert_eq!(free_reduce(once.clone()), once.clone());
        prop_assert!(once.iter().all(|t| t.power != 0));
        prop_assert!(once.windows(2).all(|p| p[0].label != p[1].label));
        for label in ["a", "b", "c"] {
            let before: i64 = w.iter().filter(|t| t.label == label).map(|t| t.power).sum();
            let after: i64 = once.iter().filter(|t| t.label == label).map(|t| t.power).sum();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn two_step_surgery_adds(k1 in -10_000i64..10_000, k2 in -10_000i64..10_000) {
        let m = torus();
        let r = m.curve(ALPHA).unwrap().balance().r;
        let twice = m.surger(ALPHA, k1).unwrap().surger(ALPHA, k2).unwrap();
        prop_assert_eq!(twice.monodromy().total_power(ALPHA), k1 + k2 - 2 * r);
    }

    #[test]
    fn twist_integrand_below_delta_above_threshold(
        k in -20i64..=20, eps in 0.01f64..2.0, delta in 0.1f64..100.0, margin in 1.0001f64..10.0
    ) {
        let m_k = twist_threshold(k, eps, delta).unwrap();
        let m = margin * m_k.max(1e-6);
        prop_assert!(twist_integrand(k, eps, m).unwrap() < delta);
    }

    #[test]
    fn repar_matches_arclength_inverse(h in 0.05f64..5.0, frac in 0.0f64..0.999) {
        let s = frac * h;
        let direct = repar_map(s, h).unwrap();
        let via = pinch_time_at_arclength((8.0 * PI).sqrt() * s / h).unwrap();
        prop_assert!((direct - via).abs() <= 1e-9 * direct);
    }

    #[test]
    fn twisted_safe_monotone_in_tau(tau in 9i64..500, l in 0.1f64..50.0, n in 1i64..20) {
        let chi = -2 * n;
        let lo = twisted_bound(l, chi, tau, 1.1).unwrap();
        let hi = twisted_bound(l, chi, tau + 1, 1.1).unwrap();
        prop_assert!(hi.twisted_safe <= lo.twisted_safe);
        prop_assert!(lo.linch <= lo.twisted_safe);
        prop_assert!(lo.twisted_constructed <= lo.twisted_safe);
        prop_assert!(lo.twisted_safe <= lo.twistbound_rho);
    }

    #[test]
    fn constructed_h_at_least_floor(tau in 9i64..10_000) {
        let b = balance_data::<f64>(tau).unwrap();
        prop_assert!(b.bracket_holds() && b.root_is_exact());
        prop_assert!(b.h >= h_min::<f64>(tau).unwrap());
    }
}
