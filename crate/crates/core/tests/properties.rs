use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::Rng;

use qell_core::cocycle::{Cochain3, Qz};
use qell_core::devoto::{ell_normalize, ell_sl2_act, EllFunction};
use qell_core::group::FiniteGroup;
use qell_core::pairs::{commuting_pairs, sl2_act_pair, Sl2Matrix};
use qell_core::{suite, verify};

const GROUPS: &[&str] = &["Z4", "Z2xZ2", "S3", "D4", "Q8", "Z2xZ2xZ2"];

fn sl2_word() -> impl Strategy<Value = Sl2Matrix> {
    prop::collection::vec(0..3u8, 0..10).prop_map(|w| {
        w.into_iter().fold(Sl2Matrix::IDENTITY, |m, x| {
            m * match x {
                0 => Sl2Matrix::S,
                1 => Sl2Matrix::T,
                _ => Sl2Matrix::T.inverse(),
            }
        })
    })
}

fn group() -> impl Strategy<Value = (&'static str, Arc<FiniteGroup>)> {
    prop::sample::select(GROUPS).prop_map(|n| (n, suite::group(n).unwrap()))
}

fn function(seed: u64) -> EllFunction<Rational64> {
    verify::random_ell_function(&mut suite::rng(seed))
}

fn tau() -> impl Strategy<Value = Complex64> {
    (-0.5f64..0.5, 0.5f64..1.0).prop_map(|(x, y)| Complex64::new(x, y))
}

fn mobius(m: Sl2Matrix, t: Complex64) -> Complex64 {
    (t * m.a as f64 + m.b as f64) / (t * m.c as f64 + m.d as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_action_is_a_right_action((_, g) in group(), a in sl2_word(), b in sl2_word()) {
        for p in commuting_pairs(&g) {
            prop_assert_eq!(sl2_act_pair(&g, a, sl2_act_pair(&g, b, p)), sl2_act_pair(&g, b * a, p));
        }
    }

    #[test]
    fn coboundaries_are_cocycles((_, g) in group(), seed in any::<u64>(), den in 2i64..13) {
        let beta = suite::random_normalized_cochain2(&g, den, &mut suite::rng(seed));
        let d = Cochain3::coboundary(&beta).unwrap();
        prop_assert!(d.is_cocycle());
        prop_assert!(d.is_normalized());
    }

    #[test]
    fn gro_character_ignores_coboundary_shifts((name, g) in group(), seed in any::<u64>()) {
        let beta = suite::random_normalized_cochain2(&g, 6, &mut suite::rng(seed));
        let d = Cochain3::coboundary(&beta).unwrap();
        for c in suite::cocycles(name, &g, 1, 0).unwrap() {
            let shifted = &c.alpha + &d;
            for p in commuting_pairs(&g) {
                prop_assert_eq!(shifted.gro_character(p.g, p.h).unwrap(), c.alpha.gro_character(p.g, p.h).unwrap());
            }
        }
    }

    #[test]
    fn gro_character_is_a_homomorphism((name, g) in group(), seed in any::<u64>()) {
        let beta = suite::random_normalized_cochain2(&g, 4, &mut suite::rng(seed));
        for c in suite::cocycles(name, &g, 1, 0).unwrap() {
            let alpha = &c.alpha + &Cochain3::coboundary(&beta).unwrap();
            for p in commuting_pairs(&g) {
                prop_assert!(alpha.gro_character(p.g, p.h).unwrap().is_homomorphism());
            }
        }
    }

    #[test]
    fn sl2_action_on_functions_is_a_right_action(seed in any::<u64>(), a in sl2_word(), b in sl2_word()) {
        let f = function(seed);
        prop_assert_eq!(ell_sl2_act(b, &ell_sl2_act(a, &f)), ell_sl2_act(a * b, &f));
    }

    #[test]
    fn sl2_relations_hold(seed in any::<u64>()) {
        let f = function(seed);
        let s4 = Sl2Matrix::S.pow(4);
        let st6 = (Sl2Matrix::S * Sl2Matrix::T).pow(6);
        prop_assert_eq!(ell_sl2_act(s4, &f), f.clone());
        prop_assert_eq!(ell_sl2_act(st6, &f), f.clone());
        prop_assert_eq!(ell_sl2_act(Sl2Matrix::MINUS_IDENTITY, &f), f);
    }

    /// `(f·A)(τ) = f(A·τ)`
    #[test]
    fn sl2_action_matches_evaluation(seed in any::<u64>(), a in sl2_word(), t in tau()) {
        let f = function(seed);
        let moved = ell_sl2_act(a, &f).eval(t, Complex64::new(1.0, 0.0)).unwrap();
        let direct = f.eval(mobius(a, t), Complex64::new(1.0, 0.0)).unwrap();
        let size: f64 = f.terms().map(|(c, n, v)| {
            let w = mobius(c.matrix() * a, t);
            v.eval::<f64>().norm() * (-std::f64::consts::TAU * n as f64 * w.im).exp()
        }).sum();
        prop_assert!((moved - direct).norm() <= 1e-9 * size.max(1.0), "{} vs {}", moved, direct);
    }

    #[test]
    fn normalization_is_additive(s1 in any::<u64>(), s2 in any::<u64>()) {
        let r1 = verify::random_raw_terms(&mut suite::rng(s1));
        let r2 = verify::random_raw_terms(&mut suite::rng(s2));
        let joined: Vec<_> = r1.iter().chain(&r2).cloned().collect();
        let sum = ell_normalize(&r1).unwrap().add(&ell_normalize(&r2).unwrap());
        prop_assert_eq!(ell_normalize(&joined).unwrap(), sum);
    }

    #[test]
    fn functions_round_trip_through_json(seed in any::<u64>()) {
        let f = function(seed);
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back: Vec<qell_core::devoto::EllTermJson> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(EllFunction::from_json(&back).unwrap(), f);
    }

    #[test]
    fn equal_functions_evaluate_equally(seed in any::<u64>(), t in tau()) {
        let mut rng = suite::rng(seed);
        let f = verify::random_ell_function(&mut rng);
        let g = f.add(&f.neg()).add(&f);
        prop_assert_eq!(&g, &f);
        let w = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..6.0));
        let (a, b) = (f.eval(t * w, w).unwrap(), f.eval(t, Complex64::new(1.0, 0.0)).unwrap());
        prop_assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
    }

    #[test]
    fn qz_is_a_group(a in -50i64..50, b in 1i64..30, c in -50i64..50, d in 1i64..30) {
        let (x, y) = (Qz::new(a, b), Qz::new(c, d));
        prop_assert_eq!(x + y, y + x);
        prop_assert_eq!(x + (-x), Qz::ZERO);
        prop_assert_eq!((x - y) + y, x);
        prop_assert_eq!(Qz::parse_canonical(&x.to_string()).unwrap(), x);
    }
}
