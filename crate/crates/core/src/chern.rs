//! The (twisted) Chern character from quasi-elliptic classes to the Devoto
//! target, stage by stage: restriction along `c_σ`, q-weight decomposition,
//! the Atiyah–Segal expansion and the classical Chern character.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cocycle::{Cochain2, Cochain3, Qz};
use crate::cyclotomic::{Coefficient, Cyclotomic};
use crate::devoto::{class_sl2_act, ell_normalize, EllClass, EllClassJson, EllFunction, RawTerm};
use crate::error::{Error, Result};
use crate::extension::ProjectiveCharacter;
use crate::group::FiniteGroup;
use crate::projective::lift_powers;
use crate::pairs::{commuting_pairs, sl2_act_pair, CommutingPair, Sl2Matrix};
use crate::qell::{transport_phase, BasisKey, QEll, QEllClass};

/// One generator after restriction along `t ↦ N·t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorTerm<T: Coefficient> {
    pub key: BasisKey,
    /// Orbit of the generator in `X^σ`, least point first.
    pub orbit: Vec<usize>,
    pub character: ProjectiveCharacter<T>,
    /// Integer q-weight `N·x + N·k`.
    pub n: i64,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorRep<T: Coefficient> {
    pub sigma: usize,
    pub big_n: i64,
    pub terms: Vec<SectorTerm<T>>,
}

/// `h ↦ θ_σ(h,τ) − θ_σ(τ,h)` on `C_G(σ,τ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCharacter {
    pub pair: CommutingPair,
    pub elements: Vec<usize>,
    pub values: Vec<Qz>,
}

impl LineCharacter {
    pub fn new(alpha: &Cochain3, sigma: usize, tau: usize) -> Result<Self> {
        let pair = CommutingPair::new(alpha.group(), sigma, tau)?;
        let theta = alpha.transgress_unchecked(sigma);
        Ok(Self::from_theta(&theta, pair))
    }

    fn from_theta(theta: &Cochain2, pair: CommutingPair) -> Self {
        let elements = theta.group().centralizer(&[pair.g, pair.h]);
        let values = elements
            .iter()
            .map(|&h| theta.get(h, pair.h) - theta.get(pair.h, h))
            .collect();
        LineCharacter {
            pair,
            elements,
            values,
        }
    }

    pub fn value(&self, h: usize) -> Option<Qz> {
        self.elements.binary_search(&h).ok().map(|i| self.values[i])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

fn check_sector<T: Coefficient>(space: &QEll<T>, sigma: usize) -> Result<()> {
    if space.sector(sigma).is_none() {
        return Err(Error::InvalidBasis(format!("{sigma} is not a sector representative")));
    }
    Ok(())
}

/// Restriction of the `σ`-part of `c` along `c_σ`.
pub fn restrict_c<T: Coefficient>(c: &QEllClass<T>, sigma: usize) -> Result<SectorRep<T>> {
    let space = &c.space;
    check_sector(space, sigma)?;
    let mut big_n = None;
    let mut terms = Vec::new();
    for (key, &coeff) in c.terms().range(sector_range(sigma)) {
        let orbit = space.orbit_sector(sigma, key.orbit).expect("valid class");
        let irrep = &orbit.module.basis[key.irrep];
        let n_mod = orbit.module.big_n;
        if *big_n.get_or_insert(n_mod) != n_mod {
            return Err(Error::Internal(format!("orbits of sector {sigma} disagree on N")));
        }
        let x = irrep.q_degree;
        if n_mod % x.denominator() != 0 {
            return Err(Error::Internal(format!("N·{x} is not an integer for N = {n_mod}")));
        }
        terms.push(SectorTerm {
            key: *key,
            orbit: orbit.orbit.clone(),
            character: irrep.character.clone(),
            n: n_mod / x.denominator() * x.numerator() + n_mod * key.q_shift,
            coeff,
        });
    }
    let big_n = match big_n {
        Some(n) => n,
        None => space.sector(sigma).and_then(|s| s.orbits.first()).map_or_else(
            || default_n(space, sigma),
            |o| o.module.big_n,
        ),
    };
    Ok(SectorRep { sigma, big_n, terms })
}

fn sector_range(sigma: usize) -> std::ops::RangeInclusive<BasisKey> {
    BasisKey {
        sigma,
        orbit: 0,
        irrep: 0,
        q_shift: i64::MIN,
    }..=BasisKey {
        sigma,
        orbit: usize::MAX,
        irrep: usize::MAX,
        q_shift: i64::MAX,
    }
}

/// `N` for a sector with no fixed points: the order of `(0, σ)`.
fn default_n<T: Coefficient>(space: &QEll<T>, sigma: usize) -> i64 {
    let theta = space.alpha.as_ref().map(|a| a.transgress_unchecked(sigma));
    lift_powers(&space.group, theta.as_ref(), sigma).len() as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelElement {
    /// The central coordinate of `(0,σ)^m`.
    pub central: Qz,
    /// `σ^m`
    pub element: usize,
    /// The circle coordinate `−m/N`.
    pub circle: Qz,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub sigma: usize,
    pub big_n: i64,
    pub elements: Vec<KernelElement>,
    pub acts_trivially_on_points: bool,
    pub fibers_trivial: bool,
    /// First generator on which a kernel element acts nontrivially.
    pub witness: Option<(BasisKey, usize)>,
}

impl KernelReport {
    pub fn holds(&self) -> bool {
        self.acts_trivially_on_points && self.fibers_trivial
    }
}

/// Kernel of the restriction along `c_σ`, checked against every generator
/// of the sector with q-shifts 0 and 1.
pub fn kernel_c<T: Coefficient>(space: &std::sync::Arc<QEll<T>>, sigma: usize) -> Result<KernelReport> {
    check_sector(space, sigma)?;
    let group = &space.group;
    let theta = space.alpha.as_ref().map(|a| a.transgress_unchecked(sigma));
    let mut all = QEllClass::zero(space.clone());
    for b in space.basis().into_iter().filter(|b| b.sigma == sigma) {
        all.add_term(b.key(), 1)?;
        all.add_term(BasisKey { q_shift: 1, ..b.key() }, 1)?;
    }
    let rep = restrict_c(&all, sigma)?;
    let big_n = rep.big_n;
    let elements: Vec<KernelElement> = (0..big_n)
        .map(|m| {
            let central = (1..m).fold(Qz::ZERO, |acc, j| {
                acc + theta.as_ref().map_or(Qz::ZERO, |t| t.get(sigma, group.pow(sigma, j)))
            });
            KernelElement {
                central,
                element: group.pow(sigma, m),
                circle: Qz::new(-m, big_n),
            }
        })
        .collect();
    let fixed = space.gset.fixed_points(&[sigma]);
    let acts_trivially_on_points = elements
        .iter()
        .all(|k| fixed.iter().all(|&x| space.gset.act(x, k.element) == x));
    let mut witness = None;
    'outer: for term in &rep.terms {
        let degree = Cyclotomic::from_i64(term.character.degree as i64);
        for (m, k) in elements.iter().enumerate() {
            let chi = term.character.value(k.element).expect("σ lies in every stabilizer");
            let phase = k.central + k.circle * term.n;
            if &Cyclotomic::root_of_unity(phase) * chi != degree {
                witness = Some((term.key, m));
                break 'outer;
            }
        }
    }
    Ok(KernelReport {
        sigma,
        big_n,
        elements,
        acts_trivially_on_points,
        fibers_trivial: witness.is_none(),
        witness,
    })
}

/// The q-weight decomposition; the restricted module is already split by
/// weight, so this only passes it through.
fn decompose_weights<T: Coefficient>(rep: SectorRep<T>) -> SectorRep<T> {
    rep
}

/// The classical Chern character of a finite set identifies K-theory with
/// functions, so it is the identity on coefficients.
fn classical_chern<T: Coefficient>(f: EllFunction<T>) -> EllFunction<T> {
    f
}

/// Value of a generator's transported character: the fiber over `p·w` in
/// the `σ^w`-sector, evaluated at `s`.
fn transported<T: Coefficient>(
    group: &FiniteGroup,
    alpha: Option<&Cochain3>,
    sigma: usize,
    character: &ProjectiveCharacter<T>,
    w: usize,
    s: usize,
) -> Cyclotomic<T> {
    let inner = group.mul(group.mul(w, s), group.inv(w));
    let v = character.value(inner).expect("conjugated stabilizer");
    &Cyclotomic::root_of_unity(transport_phase(alpha, sigma, w, s)) * v
}

/// A component of the Atiyah–Segal expansion of a sector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsComponent<T: Coefficient> {
    pub pair: CommutingPair,
    pub point: usize,
    pub value: EllFunction<T>,
    pub line: Option<LineCharacter>,
}

/// For every `τ ∈ C_G(σ)` and `x ∈ X^{σ,τ}`: `Σ coeff·χ(τ)·q^n` with `χ`
/// the fiber character over `x`.
pub fn atiyah_segal<T: Coefficient>(space: &QEll<T>, rep: &SectorRep<T>) -> Result<Vec<AsComponent<T>>> {
    let sigma = rep.sigma;
    check_sector(space, sigma)?;
    let group = &*space.group;
    let alpha = space.alpha.as_ref();
    let theta = alpha.map(|a| a.transgress_unchecked(sigma));
    let centralizer = group.centralizer(&[sigma]);
    let mut out = Vec::new();
    for &tau in &centralizer {
        let line = theta
            .as_ref()
            .map(|t| LineCharacter::from_theta(t, CommutingPair { g: sigma, h: tau }));
        for x in space.gset.fixed_points(&[sigma, tau]) {
            let mut value = EllFunction::zero();
            for term in &rep.terms {
                if term.orbit.binary_search(&x).is_err() {
                    continue;
                }
                let u = space
                    .gset
                    .transporter(term.key.orbit, x, &centralizer)
                    .expect("x lies in the orbit");
                let chi = transported(group, alpha, sigma, &term.character, u, tau);
                value.add_term(
                    crate::devoto::Coset::IDENTITY,
                    term.n,
                    chi * Cyclotomic::from_i64(term.coeff),
                );
            }
            out.push(AsComponent {
                pair: CommutingPair { g: sigma, h: tau },
                point: x,
                value,
                line: line.clone(),
            });
        }
    }
    Ok(out)
}

/// Chern character of a class together with the line characters of every
/// pair (twisted case only).
#[derive(Debug, Clone)]
pub struct ChernOutput<T: Coefficient> {
    pub class: EllClass<T>,
    pub lines: BTreeMap<CommutingPair, LineCharacter>,
    /// Components at `(σ, τ)` for sector representatives `σ`.
    sector_values: BTreeMap<(CommutingPair, usize), EllFunction<T>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernOutputJson {
    pub output: EllClassJson,
    pub lines: BTreeMap<String, BTreeMap<String, Qz>>,
}

impl<T: Coefficient> ChernOutput<T> {
    /// The component at `(g, h)` over `x`, moved from the sector
    /// representative of `g` along the conjugator `w` (`σ^w = g`).
    pub fn value_via(&self, pair: CommutingPair, x: usize, w: usize) -> Result<EllFunction<T>> {
        let group = &*self.class.group;
        let classes = group.conjugacy_classes();
        let sigma = classes[group.class_map(&classes)[pair.g]].representative;
        if group.conj(sigma, w) != pair.g {
            return Err(Error::Internal(format!("{w} does not conjugate {sigma} to {}", pair.g)));
        }
        let w_inv = group.inv(w);
        let tau = group.conj(pair.h, w_inv);
        let base = self
            .sector_values
            .get(&(CommutingPair { g: sigma, h: tau }, self.class.gset.act(x, w_inv)))
            .ok_or_else(|| Error::Internal(format!("{x} is not fixed by {pair}")))?;
        let phase = transport_phase(self.class.twist.as_ref(), sigma, w, pair.h);
        Ok(base.scale(&Cyclotomic::root_of_unity(phase)))
    }

    pub fn to_json(&self) -> ChernOutputJson {
        ChernOutputJson {
            output: self.class.to_json(),
            lines: self
                .lines
                .iter()
                .map(|(p, l)| {
                    (
                        p.key(),
                        l.elements.iter().zip(&l.values).map(|(h, v)| (h.to_string(), *v)).collect(),
                    )
                })
                .collect(),
        }
    }
}

pub fn chern_character<T: Coefficient>(c: &QEllClass<T>) -> Result<ChernOutput<T>> {
    let space = &c.space;
    let group = space.group.clone();
    let mut sector_values = BTreeMap::new();
    for sector in &space.sectors {
        let rep = decompose_weights(restrict_c(c, sector.sigma)?);
        for comp in atiyah_segal(space, &rep)? {
            sector_values.insert((comp.pair, comp.point), classical_chern(comp.value));
        }
    }
    let mut out = ChernOutput {
        class: EllClass::zero(space.gset.clone(), space.alpha.clone()),
        lines: BTreeMap::new(),
        sector_values,
    };
    let classes = group.conjugacy_classes();
    let class_of = group.class_map(&classes);
    for pair in commuting_pairs(&group) {
        let sigma = classes[class_of[pair.g]].representative;
        let w = group
            .elements()
            .find(|&w| group.conj(sigma, w) == pair.g)
            .expect("class representative");
        for x in space.gset.fixed_points(&[pair.g, pair.h]) {
            let v = out.value_via(pair, x, w)?;
            out.class.set(pair, x, v)?;
        }
        if let Some(a) = &space.alpha {
            out.lines.insert(pair, LineCharacter::new(a, pair.g, pair.h)?);
        }
    }
    Ok(out)
}

/// Multiplicities of the eigenvalues `e^{2πi·j/M}` of the lift `(0,h)` on a
/// representation with character `chi`, obtained by inner products over
/// the cyclic group generated by the lift.
pub fn eigenvalue_multiplicities<T: Coefficient>(
    group: &FiniteGroup,
    theta: Option<&Cochain2>,
    h: usize,
    degree: u64,
    chi: impl Fn(usize) -> Cyclotomic<T>,
) -> Result<Vec<(Qz, u64)>> {
    let powers = lift_powers(group, theta, h);
    let m = powers.len() as i64;
    let values: Vec<Cyclotomic<T>> = powers
        .iter()
        .map(|&(a, p)| &Cyclotomic::root_of_unity(a) * &chi(p))
        .collect();
    let inv_m = T::one() / T::from_i64(m).expect("order");
    let mut out = Vec::new();
    let mut total = 0u64;
    for j in 0..m {
        let s: Cyclotomic<T> = values
            .iter()
            .enumerate()
            .map(|(i, v)| v * &Cyclotomic::root_of_unity(Qz::new(-(i as i64) * j, m)))
            .sum();
        let r = s
            .scale(&inv_m)
            .as_rational()
            .ok_or_else(|| Error::Internal(format!("eigenvalue multiplicity at {h} is irrational")))?;
        let k = r
            .to_u64()
            .filter(|&k| T::from_u64(k) == Some(r.clone()))
            .ok_or_else(|| Error::Internal(format!("eigenvalue multiplicity {r} at {h} is not a natural number")))?;
        if k > 0 {
            out.push((Qz::new(j, m), k));
            total += k;
        }
    }
    if total != degree {
        return Err(Error::Internal(format!("eigenvalue multiplicities sum to {total}, expected {degree}")));
    }
    Ok(out)
}

/// `Σ mult·e^{2πi·ξ}`
pub fn eigenvalue_trace<T: Coefficient>(eigen: &[(Qz, u64)]) -> Cyclotomic<T> {
    eigen
        .iter()
        .map(|&(xi, k)| Cyclotomic::root_of_unity(xi) * Cyclotomic::from_i64(k as i64))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageMismatch {
    pub pair: CommutingPair,
    pub point: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageCheck {
    pub matrix: Sl2Matrix,
    pub holds: bool,
    pub mismatch: Option<ImageMismatch>,
}

/// Compares `A·ch(c)` with the transformed Chern character computed
/// directly: at `(g, h)` the generators are read at
/// `(g^d h^{−b}, g^{−c} h^a)`, traced through eigenvalues and precomposed
/// with `A⁻¹`.
pub fn check_image_preservation<T: Coefficient>(a: Sl2Matrix, c: &QEllClass<T>) -> Result<ImageCheck> {
    let out = chern_character(c)?;
    let lhs = class_sl2_act(a, &out.class);
    let space = &c.space;
    let group = &*space.group;
    let alpha = space.alpha.as_ref();
    let inv = a.inverse();
    let mut mismatch = None;
    for (pair, x, left) in lhs.components() {
        let g2 = group.mul(group.pow(pair.g, a.d), group.pow(pair.h, -a.b));
        let h2 = group.mul(group.pow(pair.g, -a.c), group.pow(pair.h, a.a));
        let theta = alpha.map(|al| al.transgress_unchecked(g2));
        let stab = space.gset.stabilizer(x, &group.centralizer(&[g2]));
        let mut raw = Vec::new();
        for (key, &coeff) in c.terms() {
            let orbit = space.orbit_sector(key.sigma, key.orbit).expect("valid class");
            let irrep = &orbit.module.basis[key.irrep];
            let Some(v) = group
                .elements()
                .rev()
                .find(|&v| group.conj(key.sigma, v) == g2 && space.gset.act(key.orbit, v) == x)
            else {
                continue;
            };
            let chi = |s: usize| {
                debug_assert!(stab.binary_search(&s).is_ok());
                transported(group, alpha, key.sigma, &irrep.character, v, s)
            };
            let eigen = eigenvalue_multiplicities(group, theta.as_ref(), h2, irrep.character.degree, chi)?;
            let big_n = orbit.module.big_n;
            let n = big_n / irrep.q_degree.denominator() * irrep.q_degree.numerator() + big_n * key.q_shift;
            raw.push(RawTerm {
                matrix: inv,
                n,
                coeff: eigenvalue_trace::<T>(&eigen) * Cyclotomic::from_i64(coeff),
            });
        }
        if ell_normalize(&raw)? != *left {
            mismatch = Some(ImageMismatch { pair, point: Some(x) });
            break;
        }
    }
    if mismatch.is_none() {
        if let Some(al) = alpha {
            for &pair in out.lines.keys() {
                let moved = sl2_act_pair(group, a, pair);
                let g2 = group.mul(group.pow(pair.g, a.d), group.pow(pair.h, -a.b));
                let h2 = group.mul(group.pow(pair.g, -a.c), group.pow(pair.h, a.a));
                let direct = LineCharacter::new(al, g2, h2)?;
                if out.lines.get(&moved) != Some(&direct) {
                    mismatch = Some(ImageMismatch { pair, point: None });
                    break;
                }
            }
        }
    }
    Ok(ImageCheck {
        matrix: a,
        holds: mismatch.is_none(),
        mismatch,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WillertonCheck {
    pub pair: CommutingPair,
    pub holds: bool,
    pub witness: Option<usize>,
}

/// Compares the line character with the twisted sector action at `(σ, τ)`.
pub fn verify_willerton_line(alpha: &Cochain3, sigma: usize, tau: usize) -> Result<WillertonCheck> {
    let line = LineCharacter::new(alpha, sigma, tau)?;
    let gro = alpha.gro_character(sigma, tau)?;
    let witness = line
        .elements
        .iter()
        .copied()
        .find(|&h| line.value(h) != gro.value(h));
    Ok(WillertonCheck {
        pair: line.pair,
        holds: witness.is_none(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gset::GSet;
    use num_rational::Rational64;
    use std::sync::Arc;

    type C = Cyclotomic<Rational64>;

    fn space(name: &str, alpha: Option<Cochain3>) -> Arc<QEll<Rational64>> {
        let g = Arc::new(FiniteGroup::builtin(name).unwrap());
        Arc::new(QEll::new(GSet::point(g), alpha).unwrap())
    }

    fn generator_with_degree(s: &Arc<QEll<Rational64>>, sigma: usize, x: Qz) -> QEllClass<Rational64> {
        let b = s.basis().into_iter().find(|b| b.sigma == sigma && b.q_degree == x).unwrap();
        QEllClass::generator(s.clone(), b.key()).unwrap()
    }

    #[test]
    fn restriction_weights() {
        let s = space("Z2", None);
        let c = generator_with_degree(&s, 1, Qz::new(1, 2));
        let rep = restrict_c(&c, 1).unwrap();
        assert_eq!((rep.big_n, rep.terms[0].n), (2, 1));
        let rep = restrict_c(&c.q_multiply(1), 1).unwrap();
        assert_eq!(rep.terms[0].n, 3);
        let t = space("Z2", Some(Cochain3::cyclic(2, 1).unwrap()));
        let c = generator_with_degree(&t, 1, Qz::new(1, 4));
        let rep = restrict_c(&c, 1).unwrap();
        assert_eq!((rep.big_n, rep.terms[0].n), (4, 1));
    }

    #[test]
    fn kernels() {
        let s = space("Z2", None);
        let k = kernel_c(&s, 1).unwrap();
        assert!(k.holds());
        assert_eq!(k.elements.len(), 2);
        assert_eq!(kernel_c(&s, 0).unwrap().elements.len(), 1);
        let t = space("Z2", Some(Cochain3::cyclic(2, 1).unwrap()));
        let k = kernel_c(&t, 1).unwrap();
        assert!(k.holds());
        assert_eq!(k.elements.len(), 4);
    }

    #[test]
    fn atiyah_segal_values() {
        let s = space("Z2", None);
        let c = generator_with_degree(&s, 1, Qz::new(1, 2));
        let comps = atiyah_segal(&s, &restrict_c(&c, 1).unwrap()).unwrap();
        let at = |tau| comps.iter().find(|c| c.pair.h == tau).unwrap().value.clone();
        assert_eq!(at(0), EllFunction::monomial(1, C::one()));
        assert_eq!(at(1), EllFunction::monomial(1, -C::one()));

        let t = space("Z2", Some(Cochain3::cyclic(2, 1).unwrap()));
        let c = generator_with_degree(&t, 1, Qz::new(1, 4));
        let comps = atiyah_segal(&t, &restrict_c(&c, 1).unwrap()).unwrap();
        let at = |tau| comps.iter().find(|c| c.pair.h == tau).unwrap().value.clone();
        assert_eq!(at(0), EllFunction::monomial(1, C::one()));
        assert_eq!(at(1), EllFunction::monomial(1, C::zeta(4, 1)));
    }

    #[test]
    fn chern_of_sign_generator() {
        let s = space("Z2", None);
        let c = generator_with_degree(&s, 1, Qz::new(1, 2));
        let out = chern_character(&c).unwrap();
        assert_eq!(out.class.support(), vec![CommutingPair { g: 1, h: 0 }, CommutingPair { g: 1, h: 1 }]);
        assert!(chern_character(&QEllClass::zero(s)).unwrap().class.is_zero());
    }

    #[test]
    fn image_preservation_small() {
        for (name, alpha) in [
            ("Z2", None),
            ("Z2", Some(Cochain3::cyclic(2, 1).unwrap())),
            ("Z4", Some(Cochain3::cyclic(4, 1).unwrap())),
        ] {
            let s = space(name, alpha);
            for b in s.basis() {
                let c = QEllClass::generator(s.clone(), b.key()).unwrap();
                for a in [Sl2Matrix::IDENTITY, Sl2Matrix::S, Sl2Matrix::T] {
                    let r = check_image_preservation(a, &c).unwrap();
                    assert!(r.holds, "{name} {b:?} {a}: {:?}", r.mismatch);
                }
            }
        }
    }

    #[test]
    fn eigenvalues_of_sign_character() {
        let g = FiniteGroup::cyclic(2);
        let chi = |p: usize| if p == 0 { C::one() } else { -C::one() };
        let e = eigenvalue_multiplicities(&g, None, 1, 1, chi).unwrap();
        assert_eq!(e, vec![(Qz::new(1, 2), 1)]);
        assert_eq!(eigenvalue_trace::<Rational64>(&e), -C::one());
    }
}
