//! Exact verification runs over the standard suite.
//!
//! Each check returns a [`Check`] naming the number of cases examined and
//! the first failing case, so callers can report a witness.

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::character::CharacterTable;
use crate::chern::{check_image_preservation, chern_character, kernel_c, verify_willerton_line};
use crate::cocycle::{Cochain2, Cochain3, Qz};
use crate::devoto::{ell_class_equal, ell_normalize, ell_sl2_act, invariant_rank_pt, EllFunction, RawTerm};
use crate::error::Result;
use crate::extension::CentralExtension;
use crate::group::{FiniteGroup, GroupHom};
use crate::gset::{EquivariantMap, GSet};
use crate::pairs::{commuting_pairs, Sl2Matrix};
use crate::qell::{restrict_class, BasisKey, QEll, QEllClass};
use crate::suite;
use crate::Cyc;

type Space = Arc<QEll<Rational64>>;

/// Relative tolerance for numeric evaluation of symbolically equal functions.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

struct Tally {
    name: String,
    cases: usize,
    witness: Option<Value>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.into(),
            cases: 0,
            witness: None,
        }
    }

    fn case(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            passed: self.witness.is_none(),
            cases: self.cases,
            witness: self.witness,
        }
    }
}

fn suite_cocycles(name: &str, g: &Arc<FiniteGroup>, seed: u64) -> Result<Vec<suite::SuiteCocycle>> {
    suite::cocycles(name, g, seed, 1)
}

fn space(x: GSet, alpha: &Cochain3) -> Result<Space> {
    let alpha = (!alpha.is_zero()).then(|| alpha.clone());
    Ok(Arc::new(QEll::new(x, alpha)?))
}

/// Generators of the space together with the sum of their `q`-shifts.
pub fn spanning_set(s: &Space) -> Result<Vec<QEllClass<Rational64>>> {
    let mut out = Vec::new();
    let mut shifted = QEllClass::zero(s.clone());
    for b in s.basis() {
        shifted.add_term(BasisKey { q_shift: 1, ..b.key() }, 1)?;
        out.push(QEllClass::generator(s.clone(), b.key())?);
    }
    out.push(shifted);
    Ok(out)
}

/// Cyclic cocycles for `n ≤ 8` and random coboundaries on small suite groups.
pub fn cocycle_identities(seed: u64) -> Result<Check> {
    let mut t = Tally::new("cocycle-identities");
    for n in 1..=8usize {
        for k in 0..n as i64 {
            let a = Cochain3::cyclic(n, k)?;
            let defect = a.cocycle_defect();
            t.case(defect.is_none() && a.is_normalized(), || json!({"n": n, "k": k, "quadruple": defect}));
        }
    }
    let mut rng = suite::rng(seed);
    for sg in suite::groups().into_iter().filter(|s| s.group.order() <= 8) {
        for i in 0..100 {
            let den = *[2i64, 3, 4, 6, 12].choose(&mut rng).expect("nonempty");
            let beta = suite::random_normalized_cochain2(&sg.group, den, &mut rng);
            let d = Cochain3::coboundary(&beta)?;
            let defect = d.cocycle_defect();
            t.case(defect.is_none() && d.is_normalized(), || json!({"group": sg.name, "sample": i, "quadruple": defect}));
        }
    }
    Ok(t.finish())
}

/// Every transgression of every suite cocycle is a normalized 2-cocycle.
pub fn transgression(seed: u64) -> Result<Check> {
    let mut t = Tally::new("transgression");
    for sg in suite::groups() {
        for c in suite_cocycles(&sg.name, &sg.group, seed)? {
            for g in sg.group.elements() {
                let theta = c.alpha.transgress_unchecked(g);
                let defect = theta.cocycle_defect();
                t.case(defect.is_none() && theta.is_normalized(), || {
                    json!({"group": sg.name, "cocycle": c.name, "g": g, "triple": defect})
                });
            }
        }
    }
    Ok(t.finish())
}

/// The order of `(0, g)` in the extension by `θ_g` divides
/// `value_order(θ_g)·ord(g)`; the split-free `Z/2` case is sharp.
pub fn order_lemma(seed: u64) -> Result<Check> {
    let mut t = Tally::new("order-lemma");
    for sg in suite::groups() {
        for c in suite_cocycles(&sg.name, &sg.group, seed)? {
            for g in sg.group.elements() {
                let theta = c.alpha.transgress_unchecked(g);
                let ext = CentralExtension::new(&theta)?;
                let ord = ext.element_order(Qz::ZERO, g)? as i64;
                let bound = theta.value_order() * sg.group.element_order(g) as i64;
                t.case(bound % ord == 0, || {
                    json!({"group": sg.name, "cocycle": c.name, "g": g, "order": ord, "bound": bound})
                });
            }
        }
    }
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let theta = Cochain2::from_fn(z2, vec![0, 1], |a, b| if a == 1 && b == 1 { Qz::new(1, 2) } else { Qz::ZERO });
    let ord = CentralExtension::new(&theta)?.element_order(Qz::ZERO, 1)?;
    t.case(ord == 4, || json!({"sharp_case_order": ord}));
    Ok(t.finish())
}

pub const TABLE_GROUPS: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "S3", "S4", "D4", "Q8", "Z2xZ2",
];

/// Orthonormality, one row per class and `Σ deg² = |G|`.
pub fn character_tables() -> Result<Check> {
    let mut t = Tally::new("character-tables");
    for name in TABLE_GROUPS {
        let g = suite::group(name)?;
        let table = CharacterTable::<Rational64>::compute(g.clone())?;
        let rows = table.len();
        let classes = g.conjugacy_classes().len();
        let sum = table.degree_square_sum();
        let orth = table.is_orthonormal();
        t.case(rows == classes && sum == g.order() as u64 && orth, || {
            json!({"group": name, "rows": rows, "classes": classes, "degree_square_sum": sum, "orthonormal": orth})
        });
    }
    Ok(t.finish())
}

/// `(σ, orbit, q-degree, q-shift, character values)` for every generator.
fn basis_signature(s: &Space) -> Vec<(BasisKey, Qz, Vec<Cyc>)> {
    let mut v: Vec<(BasisKey, Qz, Vec<Cyc>)> = s
        .basis()
        .into_iter()
        .map(|b| {
            let key = BasisKey { irrep: 0, ..b.key() };
            (key, b.q_degree, s.irrep(&b.key()).expect("basis").character.values.clone())
        })
        .collect();
    v.sort();
    v
}

/// Ranks of small examples and exact degeneration of the twisted bases at
/// `α = 0`.
pub fn quasi_elliptic_ranks() -> Result<Check> {
    let mut t = Tally::new("quasi-elliptic-ranks");
    let z2 = suite::group("Z2")?;
    let r = QEll::<Rational64>::new(GSet::point(z2.clone()), None)?.rank_report();
    let half = Qz::new(1, 2);
    t.case(r.total == 4 && r.degrees() == [Qz::ZERO, Qz::ZERO, Qz::ZERO, half], || {
        json!({"case": "Z2 pt", "report": r})
    });
    let s3 = suite::group("S3")?;
    let r = QEll::<Rational64>::new(GSet::point(s3), None)?.rank_report();
    t.case(r.total == 8, || json!({"case": "S3 pt", "report": r}));
    let r = QEll::<Rational64>::new(GSet::point(z2), Some(Cochain3::cyclic(2, 1)?))?.rank_report();
    let expected = [Qz::ZERO, Qz::ZERO, Qz::new(1, 4), Qz::new(3, 4)];
    t.case(r.degrees() == expected, || json!({"case": "Z2 pt cyclic:2:1", "report": r}));
    for sg in suite::groups() {
        for x in [GSet::point(sg.group.clone()), GSet::regular(sg.group.clone())] {
            let plain: Space = Arc::new(QEll::new(x.clone(), None)?);
            let zero: Space = Arc::new(QEll::new(x, Some(Cochain3::zero(sg.group.clone())))?);
            let same = basis_signature(&plain) == basis_signature(&zero);
            t.case(same, || json!({"case": "degeneration", "group": sg.name, "points": plain.gset.size()}));
        }
    }
    Ok(t.finish())
}

/// Homomorphisms used for restriction checks: every map out of `Z/m`
/// (`m ≤ 6`) into a suite group, and every order-two character onto `Z/2`.
pub fn suite_homs() -> Result<Vec<(String, GroupHom)>> {
    let mut out = Vec::new();
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    for sg in suite::groups() {
        let h = &sg.group;
        for m in 1..=6usize {
            let zm = Arc::new(FiniteGroup::cyclic(m));
            for x in h.elements().filter(|&x| m % h.element_order(x) == 0) {
                let image = (0..m).map(|i| h.pow(x, i as i64)).collect();
                out.push((format!("Z{m}->{}:{x}", sg.name), GroupHom::new(zm.clone(), h.clone(), image)?));
            }
        }
        for (i, ch) in suite::linear_characters(h)?.iter().enumerate() {
            if ch.iter().all(|v| v.denominator() <= 2) {
                let image = ch.iter().map(|v| (!v.is_zero()) as usize).collect();
                out.push((format!("{}->Z2:{i}", sg.name), GroupHom::new(h.clone(), z2.clone(), image)?));
            }
        }
    }
    Ok(out)
}

/// `G`-set `X` viewed through `f: G → H`.
pub fn restrict_gset(f: &GroupHom, x: &GSet) -> Result<GSet> {
    let action = (0..x.size())
        .map(|p| f.domain.elements().map(|g| x.act(p, f.apply(g))).collect())
        .collect();
    GSet::new(f.domain.clone(), action)
}

/// Pullback commutes with transgression along every suite homomorphism,
/// and restricted classes reproduce the transported fiber characters.
pub fn restriction(seed: u64) -> Result<Check> {
    let mut t = Tally::new("restriction");
    let cocycles: Vec<(String, Vec<suite::SuiteCocycle>)> = suite::groups()
        .into_iter()
        .map(|sg| Ok((sg.name.clone(), suite_cocycles(&sg.name, &sg.group, seed)?)))
        .collect::<Result<_>>()?;
    for (hname, f) in suite_homs()? {
        let target = cocycles
            .iter()
            .find(|(_, cs)| *cs[0].alpha.group() == f.codomain)
            .expect("codomain is a suite group");
        for c in &target.1 {
            let pulled = c.alpha.pullback(&f)?;
            for g in f.domain.elements() {
                let lhs = pulled.transgress_unchecked(g);
                let rhs = c.alpha.transgress_unchecked(f.apply(g)).pullback_on(&f, &f.domain.centralizer(&[g]))?;
                t.case(lhs == rhs, || json!({"hom": hname, "cocycle": c.name, "g": g}));
            }
        }
    }
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let z4 = Arc::new(FiniteGroup::cyclic(4));
    let f = GroupHom::new(z2, z4.clone(), vec![0, 2])?;
    for alpha in [Cochain3::zero(z4.clone()), Cochain3::cyclic(4, 1)?] {
        for x in [GSet::point(z4.clone()), GSet::regular(z4.clone())] {
            let phi = EquivariantMap::new(f.clone(), restrict_gset(&f, &x)?, x.clone(), (0..x.size()).collect())?;
            let src = space(x, &alpha)?;
            for c in spanning_set(&src)? {
                let r = restrict_class(&phi, &c)?;
                restriction_matches(&mut t, &phi, &c, &r);
            }
        }
    }
    Ok(t.finish())
}

/// At each target sector and orbit the restricted terms sum to the source
/// fiber character read through `f`, with matching `q`-degrees.
fn restriction_matches(t: &mut Tally, phi: &EquivariantMap, c: &QEllClass<Rational64>, r: &QEllClass<Rational64>) {
    let f = &phi.hom;
    let (src, dst) = (&c.space, &r.space);
    for sector in &dst.sectors {
        for orbit in &sector.orbits {
            let (fs, y) = (f.apply(sector.sigma), phi.apply(orbit.point));
            for shift in [0i64, 1] {
                for degree in orbit.module.basis.iter().map(|b| b.q_degree) {
                    let ours: Vec<Cyc> = orbit
                        .stabilizer
                        .iter()
                        .map(|&k| {
                            r.terms()
                                .iter()
                                .filter(|(key, _)| key.sigma == sector.sigma && key.orbit == orbit.point && key.q_shift == shift)
                                .filter(|(key, _)| orbit.module.basis[key.irrep].q_degree == degree)
                                .map(|(key, &m)| orbit.module.basis[key.irrep].character.value(k).expect("stabilizer") * &Cyc::from_i64(m))
                                .sum()
                        })
                        .collect();
                    let theirs: Vec<Cyc> = orbit
                        .stabilizer
                        .iter()
                        .map(|&k| {
                            c.terms()
                                .iter()
                                .filter(|(key, _)| key.q_shift == shift && src.irrep(key).expect("basis").q_degree == degree)
                                .filter_map(|(key, &m)| {
                                    let fc = src.fiber_character(key, fs, y)?;
                                    Some(fc.value(f.apply(k)).expect("image stabilizer") * &Cyc::from_i64(m))
                                })
                                .sum()
                        })
                        .collect();
                    t.case(ours == theirs, || json!({"case": "restrict Z2->Z4", "sigma": sector.sigma, "point": orbit.point}));
                }
            }
        }
    }
}

/// Burnside count of conjugation orbits on commuting pairs.
pub fn commuting_pair_orbit_count(g: &FiniteGroup) -> usize {
    let pairs = commuting_pairs(g);
    let fixed: usize = g
        .elements()
        .map(|k| pairs.iter().filter(|p| g.conj(p.g, k) == p.g && g.conj(p.h, k) == p.h).count())
        .sum();
    fixed / g.order()
}

/// Untwisted point totals against the orbit count; S3 and Z/2 pinned.
pub fn devoto_point_counts() -> Result<Check> {
    let mut t = Tally::new("devoto-point-counts");
    for sg in suite::groups() {
        let total = invariant_rank_pt(&sg.group, None)?.total;
        let orbits = commuting_pair_orbit_count(&sg.group);
        let pinned = match sg.name.as_str() {
            "S3" => Some(8),
            "Z2" => Some(4),
            _ => None,
        };
        t.case(total == orbits && pinned.is_none_or(|p| p == total), || {
            json!({"group": sg.name, "total": total, "orbits": orbits})
        });
    }
    Ok(t.finish())
}

pub fn kernel_check(s: &Space, t: &mut Check) -> Result<()> {
    let mut tally = Tally::new(&t.name);
    for sector in &s.sectors {
        let k = kernel_c(s, sector.sigma)?;
        tally.case(k.holds(), || json!({"sigma": sector.sigma, "witness": k.witness}));
    }
    merge(t, tally.finish());
    Ok(())
}

pub fn willerton_check(alpha: &Cochain3, t: &mut Check) -> Result<()> {
    let mut tally = Tally::new(&t.name);
    for p in commuting_pairs(alpha.group()) {
        let r = verify_willerton_line(alpha, p.g, p.h)?;
        tally.case(r.holds, || json!({"pair": p, "witness": r.witness}));
    }
    merge(t, tally.finish());
    Ok(())
}

/// Image preservation for `a` over the spanning set of `s`.
pub fn sl2_check(s: &Space, a: Sl2Matrix, t: &mut Check) -> Result<()> {
    let mut tally = Tally::new(&t.name);
    for c in spanning_set(s)? {
        let r = check_image_preservation(a, &c)?;
        tally.case(r.holds, || json!({"matrix": a, "class": c.to_json(), "mismatch": r.mismatch}));
    }
    merge(t, tally.finish());
    Ok(())
}

pub fn empty_check(name: &str) -> Check {
    Tally::new(name).finish()
}

fn merge(into: &mut Check, other: Check) {
    into.cases += other.cases;
    if into.witness.is_none() {
        into.witness = other.witness;
    }
    into.passed = into.witness.is_none();
}

fn tag(mut c: Check, context: Value) -> Check {
    if let Some(w) = c.witness.take() {
        c.witness = Some(json!({"context": context, "detail": w}));
    }
    c
}

/// Kernel triviality and line characters on the suite, twist degeneration
/// of the Chern character, and image preservation on the small spaces.
pub fn chern_pipeline(seed: u64) -> Result<Check> {
    let mut all = empty_check("chern-pipeline");
    for sg in suite::groups() {
        for c in suite_cocycles(&sg.name, &sg.group, seed)? {
            let ctx = json!({"group": sg.name, "cocycle": c.name});
            let s = space(GSet::point(sg.group.clone()), &c.alpha)?;
            let mut k = empty_check("kernel");
            kernel_check(&s, &mut k)?;
            willerton_check(&c.alpha, &mut k)?;
            merge(&mut all, tag(k, ctx));
        }
        let mut d = Tally::new("degeneration");
        let plain: Space = Arc::new(QEll::new(GSet::point(sg.group.clone()), None)?);
        let zero: Space = Arc::new(QEll::new(GSet::point(sg.group.clone()), Some(Cochain3::zero(sg.group.clone())))?);
        let mut partners: Vec<_> = zero.basis();
        for b in plain.basis() {
            let ch = &plain.irrep(&b.key()).expect("basis").character;
            let pos = partners.iter().position(|z| {
                (z.sigma, z.orbit, z.q_degree) == (b.sigma, b.orbit, b.q_degree)
                    && zero.irrep(&z.key()).expect("basis").character == *ch
            });
            let Some(pos) = pos else {
                d.case(false, || json!({"group": sg.name, "generator": b}));
                continue;
            };
            let z = partners.remove(pos);
            let a = chern_character(&QEllClass::generator(plain.clone(), b.key())?)?;
            let tw = chern_character(&QEllClass::generator(zero.clone(), z.key())?)?;
            d.case(ell_class_equal(&a.class, &tw.class), || json!({"group": sg.name, "generator": b}));
        }
        merge(&mut all, d.finish());
    }
    let mut cases: Vec<(String, Cochain3)> = Vec::new();
    for name in ["Z2", "Z4", "S3"] {
        let g = suite::group(name)?;
        cases.push((format!("{name} untwisted"), Cochain3::zero(g)));
    }
    for name in ["Z2", "Z4", "Z2xZ2"] {
        let g = suite::group(name)?;
        for c in suite_cocycles(name, &g, seed)?.into_iter().filter(|c| !c.alpha.is_zero()) {
            cases.push((format!("{name} {}", c.name), c.alpha));
        }
    }
    for (label, alpha) in cases {
        let g = alpha.group().clone();
        for x in [GSet::point(g.clone()), GSet::regular(g)] {
            let size = x.size();
            let s = space(x, &alpha)?;
            for a in [Sl2Matrix::S, Sl2Matrix::T] {
                let mut c = empty_check("sl2");
                sl2_check(&s, a, &mut c)?;
                merge(&mut all, tag(c, json!({"space": label, "points": size})));
            }
        }
    }
    Ok(all)
}

fn random_matrix(rng: &mut impl Rng) -> Sl2Matrix {
    let t_inv = Sl2Matrix::T.inverse();
    (0..rng.gen_range(0..8)).fold(Sl2Matrix::IDENTITY, |m, _| {
        m * *[Sl2Matrix::S, Sl2Matrix::T, t_inv].choose(rng).expect("nonempty")
    })
}

fn random_coeff(rng: &mut impl Rng) -> Cyc {
    let m = *[1u32, 2, 3, 4, 6, 8, 12].choose(rng).expect("nonempty");
    let terms: Vec<(i64, Rational64)> = (0..rng.gen_range(1..=3))
        .map(|_| (rng.gen_range(0..m as i64), Rational64::new(rng.gen_range(-3..=3), rng.gen_range(1..=4))))
        .collect();
    Cyc::from_terms(m, terms)
}

/// Raw terms with `n ∈ [−2, 3]` and random matrices.
pub fn random_raw_terms(rng: &mut impl Rng) -> Vec<RawTerm<Rational64>> {
    (0..rng.gen_range(1..=5))
        .map(|_| RawTerm {
            matrix: random_matrix(rng),
            n: rng.gen_range(-2..=3),
            coeff: random_coeff(rng),
        })
        .collect()
}

/// The same function written differently: each matrix is moved within its
/// coset, coefficients are split in two, and the terms are shuffled.
fn rewrite(raw: &[RawTerm<Rational64>], rng: &mut impl Rng) -> Vec<RawTerm<Rational64>> {
    let mut out = Vec::new();
    for t in raw {
        let shift = Sl2Matrix::new(1, rng.gen_range(-3..=3), 0, 1).expect("unimodular");
        let sign = if rng.gen_bool(0.5) { Sl2Matrix::MINUS_IDENTITY } else { Sl2Matrix::IDENTITY };
        let part = t.coeff.scale(&Rational64::new(rng.gen_range(-2..=2), 3));
        out.push(RawTerm {
            matrix: shift * t.matrix * sign,
            n: t.n,
            coeff: &t.coeff - &part,
        });
        out.push(RawTerm {
            matrix: sign * t.matrix,
            n: t.n,
            coeff: part,
        });
    }
    out.shuffle(rng);
    out
}

/// `Σ coeff·e^{2πi·n·B(τ)}` straight from the raw terms, with the sum of
/// term magnitudes.
fn eval_raw(raw: &[RawTerm<Rational64>], tau: Complex64) -> (Complex64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for t in raw {
        let m = t.matrix;
        let image = (tau * m.a as f64 + m.b as f64) / (tau * m.c as f64 + m.d as f64);
        let v = t.coeff.eval::<f64>() * (Complex64::i() * std::f64::consts::TAU * t.n as f64 * image).exp();
        scale += v.norm();
        acc += v;
    }
    (acc, scale)
}

fn random_lattice_point(rng: &mut impl Rng) -> (Complex64, Complex64) {
    let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..=1.0));
    let t2 = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
    (tau * t2, t2)
}

/// Symbolic equality against numeric evaluation, and the `SL2(Z)` relations
/// `S⁴ = (ST)⁶ = 1` on random functions.
pub fn ell_soundness(seed: u64) -> Result<Check> {
    let mut t = Tally::new("ell-soundness");
    let mut rng = suite::rng(seed);
    for i in 0..500 {
        let raw = random_raw_terms(&mut rng);
        let other = rewrite(&raw, &mut rng);
        let f = ell_normalize(&raw)?;
        let g = ell_normalize(&other)?;
        if f != g {
            t.case(false, || json!({"sample": i, "reason": "rewritten function differs symbolically"}));
            continue;
        }
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let (t1, t2) = random_lattice_point(&mut rng);
            let tau = t1 / t2;
            let (direct, scale) = eval_raw(&raw, tau);
            let (direct2, scale2) = eval_raw(&other, tau);
            let v = f.eval(t1, t2)?;
            let err = ((v - direct).norm() / scale.max(1.0)).max((v - direct2).norm() / scale2.max(1.0));
            worst = worst.max(err);
        }
        t.case(worst <= NUMERIC_TOLERANCE, || json!({"sample": i, "relative_error": worst}));
    }
    let st = Sl2Matrix::S * Sl2Matrix::T;
    for i in 0..100 {
        let f = ell_normalize(&random_raw_terms(&mut rng))?;
        let s4 = (0..4).fold(f.clone(), |acc, _| ell_sl2_act(Sl2Matrix::S, &acc));
        let st6 = (0..6).fold(f.clone(), |acc, _| ell_sl2_act(Sl2Matrix::T, &ell_sl2_act(Sl2Matrix::S, &acc)));
        let st6_direct = ell_sl2_act(st.pow(6), &f);
        t.case(s4 == f && st6 == f && st6_direct == f, || json!({"sample": i, "reason": "SL2 relation"}));
    }
    Ok(t.finish())
}

/// Criteria in order; names are stable identifiers used in reports.
pub fn run_all(seed: u64) -> Result<Vec<Check>> {
    Ok(vec![
        cocycle_identities(seed)?,
        transgression(seed)?,
        order_lemma(seed)?,
        character_tables()?,
        quasi_elliptic_ranks()?,
        restriction(seed)?,
        devoto_point_counts()?,
        chern_pipeline(seed)?,
        ell_soundness(seed)?,
    ])
}

/// A random function for property tests.
pub fn random_ell_function(rng: &mut impl Rng) -> EllFunction<Rational64> {
    ell_normalize(&random_raw_terms(rng)).expect("products of S and T are unimodular")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_count_of_small_groups() {
        assert_eq!(commuting_pair_orbit_count(&FiniteGroup::cyclic(2)), 4);
        assert_eq!(commuting_pair_orbit_count(&FiniteGroup::symmetric(3).unwrap()), 8);
    }

    #[test]
    fn rewrite_preserves_the_function() {
        let mut rng = suite::rng(5);
        for _ in 0..50 {
            let raw = random_raw_terms(&mut rng);
            let other = rewrite(&raw, &mut rng);
            assert_eq!(ell_normalize(&raw).unwrap(), ell_normalize(&other).unwrap());
        }
    }

    #[test]
    fn fast_checks_pass() {
        for c in [character_tables().unwrap(), devoto_point_counts().unwrap(), order_lemma(1).unwrap()] {
            assert!(c.passed, "{c:?}");
        }
    }
}
