use std::sync::Arc;

use num_rational::Rational64;
use qell_core::chern::{
    check_image_preservation, chern_character, kernel_c, verify_willerton_line, LineCharacter,
};
use qell_core::cocycle::{Cochain3, Qz};
use qell_core::devoto::{class_group_act, ell_class_equal};
use qell_core::group::FiniteGroup;
use qell_core::gset::GSet;
use qell_core::pairs::{commuting_pairs, Sl2Matrix};
use qell_core::qell::{QEll, QEllClass};
use qell_core::suite;

type Space = Arc<QEll<Rational64>>;

fn spaces(name: &str) -> Vec<(String, Space)> {
    let g = suite::group(name).unwrap();
    suite::cocycles(name, &g, 11, 1)
        .unwrap()
        .into_iter()
        .map(|c| {
            let alpha = if c.alpha.is_zero() { None } else { Some(c.alpha) };
            (c.name, Arc::new(QEll::new(GSet::point(g.clone()), alpha).unwrap()))
        })
        .collect()
}

fn generators(s: &Space) -> Vec<QEllClass<Rational64>> {
    s.basis()
        .into_iter()
        .map(|b| QEllClass::generator(s.clone(), b.key()).unwrap())
        .collect()
}

#[test]
fn kernel_is_trivial_on_fibers_for_the_suite() {
    for name in suite::GROUP_NAMES {
        for (cname, s) in spaces(name) {
            for sector in &s.sectors {
                let k = kernel_c(&s, sector.sigma).unwrap();
                assert!(k.holds(), "{name} {cname} σ={} {:?}", sector.sigma, k.witness);
            }
        }
    }
}

#[test]
fn willerton_line_matches_the_sector_action_on_the_suite() {
    for name in suite::GROUP_NAMES {
        let g = suite::group(name).unwrap();
        for c in suite::cocycles(name, &g, 11, 1).unwrap() {
            for p in commuting_pairs(&g) {
                let r = verify_willerton_line(&c.alpha, p.g, p.h).unwrap();
                assert!(r.holds, "{name} {} at {p}: {:?}", c.name, r.witness);
            }
        }
    }
}

/// `α(a,b,c) = a₁b₂c₃/3` on `(Z/3)³`, whose sector characters have order 3.
#[test]
fn line_character_is_the_negated_sector_action() {
    let g = Arc::new(FiniteGroup::builtin("Z3xZ3xZ3").unwrap());
    let digit = |x: usize, i: u32| ((x / 3usize.pow(2 - i)) % 3) as i64;
    let alpha = Cochain3::from_fn(g.clone(), |a, b, c| Qz::new(digit(a, 0) * digit(b, 1) * digit(c, 2), 3));
    assert!(alpha.is_cocycle() && alpha.is_normalized());
    let mut some_fail = false;
    for p in commuting_pairs(&g) {
        let line = LineCharacter::new(&alpha, p.g, p.h).unwrap();
        let gro = alpha.gro_character(p.g, p.h).unwrap();
        for &h in &line.elements {
            assert_eq!(line.value(h).unwrap(), -gro.value(h).unwrap());
        }
        some_fail |= !verify_willerton_line(&alpha, p.g, p.h).unwrap().holds;
    }
    assert!(some_fail);
}

#[test]
fn twisted_pipeline_at_zero_matches_untwisted() {
    for name in suite::GROUP_NAMES {
        let g = suite::group(name).unwrap();
        let plain: Space = Arc::new(QEll::new(GSet::point(g.clone()), None).unwrap());
        let zero: Space = Arc::new(QEll::new(GSet::point(g.clone()), Some(Cochain3::zero(g.clone()))).unwrap());
        let mut zb = zero.basis();
        for b in plain.basis() {
            let ch = &plain.irrep(&b.key()).unwrap().character;
            let pos = zb
                .iter()
                .position(|z| {
                    z.sigma == b.sigma
                        && z.orbit == b.orbit
                        && z.q_degree == b.q_degree
                        && zero.irrep(&z.key()).unwrap().character == *ch
                })
                .unwrap_or_else(|| panic!("{name}: no twisted partner for {b:?}"));
            let z = zb.remove(pos);
            let a = chern_character(&QEllClass::generator(plain.clone(), b.key()).unwrap()).unwrap();
            let t = chern_character(&QEllClass::generator(zero.clone(), z.key()).unwrap()).unwrap();
            assert!(ell_class_equal(&a.class, &t.class), "{name} {b:?}");
        }
        assert!(zb.is_empty());
    }
}

#[test]
fn chern_outputs_are_invariant_under_centralizers() {
    for name in ["Z2", "Z4", "S3", "D4", "Q8", "Z2xZ2", "Z2xZ2xZ2"] {
        for (cname, s) in spaces(name) {
            for c in generators(&s) {
                let out = chern_character(&c).unwrap();
                for k in s.group.elements() {
                    let moved = class_group_act(k, &out.class);
                    for (p, x, _) in out.class.components() {
                        if s.group.commute(k, p.g) && s.group.commute(k, p.h) {
                            let y = s.gset.act(x, k);
                            assert_eq!(moved.get(p, y), out.class.get(p, y), "{name} {cname} k={k} {p}");
                        }
                    }
                }
            }
        }
    }
}

/// For the unshifted suite cocycles the six-term scalar also matches the
/// transport for non-centralizing elements.
#[test]
fn chern_outputs_are_group_invariant_for_unshifted_cocycles() {
    for name in ["Z2", "Z4", "S3", "D4", "Q8", "Z2xZ2", "Z2xZ2xZ2"] {
        for (cname, s) in spaces(name).into_iter().filter(|(n, _)| !n.contains("+d")) {
            for c in generators(&s) {
                let out = chern_character(&c).unwrap();
                for k in s.group.elements() {
                    let moved = class_group_act(k, &out.class);
                    assert!(ell_class_equal(&moved, &out.class), "{name} {cname} k={k}");
                }
            }
        }
    }
}

#[test]
fn filling_does_not_depend_on_the_conjugator() {
    for name in ["S3", "D4", "Q8"] {
        for (cname, s) in spaces(name) {
            let g = &s.group;
            let classes = g.conjugacy_classes();
            let class_of = g.class_map(&classes);
            for c in generators(&s) {
                let out = chern_character(&c).unwrap();
                for (pair, x, value) in out.class.components() {
                    let sigma = classes[class_of[pair.g]].representative;
                    for w in g.elements().filter(|&w| g.conj(sigma, w) == pair.g) {
                        assert_eq!(out.value_via(pair, x, w).unwrap(), *value, "{name} {cname} {pair} w={w}");
                    }
                }
            }
        }
    }
}

fn image_preserved(s: &Space) {
    let shifted_sum = generators(s)
        .into_iter()
        .fold(QEllClass::zero(s.clone()), |a, b| a.add(&b.q_multiply(1)));
    for c in generators(s).into_iter().chain([shifted_sum]) {
        for a in [Sl2Matrix::S, Sl2Matrix::T] {
            let r = check_image_preservation(a, &c).unwrap();
            assert!(r.holds, "{a}: {:?}", r.mismatch);
        }
    }
}

#[test]
fn image_preservation_untwisted() {
    for name in ["Z2", "Z4", "S3"] {
        let g = suite::group(name).unwrap();
        for x in [GSet::point(g.clone()), GSet::regular(g.clone())] {
            image_preserved(&Arc::new(QEll::new(x, None).unwrap()));
        }
    }
}

#[test]
fn image_preservation_twisted() {
    for name in ["Z2", "Z4", "Z2xZ2"] {
        let g = suite::group(name).unwrap();
        for c in suite::cocycles(name, &g, 3, 1).unwrap().into_iter().filter(|c| !c.alpha.is_zero()) {
            for x in [GSet::point(g.clone()), GSet::regular(g.clone())] {
                image_preserved(&Arc::new(QEll::new(x, Some(c.alpha.clone())).unwrap()));
            }
        }
    }
}
