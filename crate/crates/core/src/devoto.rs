//! The weight-zero Devoto target over a finite G-set.
//!
//! Functions on the lattice space are finite sums of `q^n` precomposed with
//! Möbius transformations. The term attached to a matrix `B` and exponent
//! `n` is `τ ↦ e^{2πi·n·B(τ)}` with `τ = t₁/t₂`; it only depends on the
//! coset `Γ∞·B`, which is recorded by the bottom row `(c, d)` normalized to
//! `c > 0` or `(0, 1)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use serde::{Deserialize, Serialize};

use crate::cocycle::{Cochain3, Qz};
use crate::cyclotomic::{Coefficient, Cyclotomic, CyclotomicJson};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::gset::GSet;
use crate::pairs::{commuting_pairs, pair_orbits, sl2_act_pair, CommutingPair, OrbitAction, Sl2Matrix};

/// A `Γ∞`-coset, stored as its normalized bottom row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coset {
    pub c: i64,
    pub d: i64,
}

impl Coset {
    pub const IDENTITY: Coset = Coset { c: 0, d: 1 };

    pub fn of(m: Sl2Matrix) -> Self {
        Self::normalized(m.c, m.d)
    }

    fn normalized(c: i64, d: i64) -> Self {
        if c < 0 || (c == 0 && d < 0) {
            Coset { c: -c, d: -d }
        } else {
            Coset { c, d }
        }
    }

    /// A matrix in the coset.
    pub fn matrix(self) -> Sl2Matrix {
        Sl2Matrix::with_bottom_row(self.c, self.d).expect("coset rows are coprime")
    }

    /// `Γ∞·B ↦ Γ∞·B·A`
    pub fn act(self, a: Sl2Matrix) -> Self {
        Self::normalized(self.c * a.a + self.d * a.c, self.c * a.b + self.d * a.d)
    }
}

/// A finite sum `Σ coeff·(q^n ∘ B)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EllFunction<T: Coefficient> {
    terms: BTreeMap<(Coset, i64), Cyclotomic<T>>,
}

/// A raw term before normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTerm<T: Coefficient> {
    pub matrix: Sl2Matrix,
    pub n: i64,
    pub coeff: Cyclotomic<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllTermJson {
    pub coset: [i64; 2],
    pub n: i64,
    pub coeff: CyclotomicJson,
}

impl<T: Coefficient> Default for EllFunction<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coefficient> EllFunction<T> {
    pub fn zero() -> Self {
        EllFunction { terms: BTreeMap::new() }
    }

    pub fn constant(c: Cyclotomic<T>) -> Self {
        let mut f = Self::zero();
        f.add_term(Coset::IDENTITY, 0, c);
        f
    }

    /// `coeff·q^n`
    pub fn monomial(n: i64, coeff: Cyclotomic<T>) -> Self {
        let mut f = Self::zero();
        f.add_term(Coset::IDENTITY, n, coeff);
        f
    }

    pub fn add_term(&mut self, coset: Coset, n: i64, coeff: Cyclotomic<T>) {
        let coset = if n == 0 { Coset::IDENTITY } else { coset };
        let key = (coset, n);
        let sum = match self.terms.get(&key) {
            Some(old) => old + &coeff,
            None => coeff,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Coset, i64, &Cyclotomic<T>)> {
        self.terms.iter().map(|(&(c, n), v)| (c, n, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (c, n, v) in o.terms() {
            out.add_term(c, n, v.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        EllFunction {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub fn scale(&self, s: &Cyclotomic<T>) -> Self {
        let mut out = Self::zero();
        for (c, n, v) in self.terms() {
            out.add_term(c, n, v * s);
        }
        out
    }

    /// Numeric value at `(t₁, t₂)` with `Im(t₁/t₂) > 0`.
    pub fn eval<F: Float + FloatConst>(&self, t1: Complex<F>, t2: Complex<F>) -> Result<Complex<F>> {
        if t2 == Complex::new(F::zero(), F::zero()) {
            return Err(Error::OutsideDomain);
        }
        let tau = t1 / t2;
        if tau.im <= F::zero() {
            return Err(Error::OutsideDomain);
        }
        let mut acc = Complex::new(F::zero(), F::zero());
        for (coset, n, coeff) in self.terms() {
            let m = coset.matrix();
            let f = |x: i64| F::from(x).expect("float conversion");
            let image = (tau * f(m.a) + f(m.b)) / (tau * f(m.c) + f(m.d));
            let phase = Complex::new(F::zero(), F::TAU() * f(n)) * image;
            acc = acc + coeff.eval::<F>() * phase.exp();
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Vec<EllTermJson> {
        self.terms()
            .map(|(c, n, v)| EllTermJson {
                coset: [c.c, c.d],
                n,
                coeff: v.to_json(),
            })
            .collect()
    }

    pub fn from_json(terms: &[EllTermJson]) -> Result<Self> {
        let mut raw = Vec::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            let m = Sl2Matrix::with_bottom_row(t.coset[0], t.coset[1])
                .map_err(|_| Error::schema(format!("[{i}].coset"), "bottom row is not coprime"))?;
            raw.push(RawTerm {
                matrix: m,
                n: t.n,
                coeff: Cyclotomic::from_json(&t.coeff)?,
            });
        }
        ell_normalize(&raw)
    }
}

/// Collapses raw matrix terms to the normal form.
pub fn ell_normalize<T: Coefficient>(raw: &[RawTerm<T>]) -> Result<EllFunction<T>> {
    let mut f = EllFunction::zero();
    for t in raw {
        let m = Sl2Matrix::new(t.matrix.a, t.matrix.b, t.matrix.c, t.matrix.d)?;
        f.add_term(Coset::of(m), t.n, t.coeff.clone());
    }
    Ok(f)
}

/// Precomposition with `A`: the term at coset `B` moves to `B·A`.
pub fn ell_sl2_act<T: Coefficient>(a: Sl2Matrix, f: &EllFunction<T>) -> EllFunction<T> {
    let mut out = EllFunction::zero();
    for (c, n, v) in f.terms() {
        out.add_term(c.act(a), n, v.clone());
    }
    out
}

pub fn ell_equal<T: Coefficient>(f1: &EllFunction<T>, f2: &EllFunction<T>) -> bool {
    f1 == f2
}

/// A function on the fixed points of every commuting pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllClass<T: Coefficient> {
    pub group: Arc<FiniteGroup>,
    pub gset: GSet,
    pub twist: Option<Cochain3>,
    components: BTreeMap<CommutingPair, BTreeMap<usize, EllFunction<T>>>,
}

pub type EllClassJson = BTreeMap<String, BTreeMap<String, Vec<EllTermJson>>>;

impl<T: Coefficient> EllClass<T> {
    /// The zero class, total over all pairs and fixed points.
    pub fn zero(gset: GSet, twist: Option<Cochain3>) -> Self {
        let group = gset.group().clone();
        let components = commuting_pairs(&group)
            .into_iter()
            .map(|p| {
                let pts = gset.fixed_points(&[p.g, p.h]);
                (p, pts.into_iter().map(|x| (x, EllFunction::zero())).collect())
            })
            .collect();
        EllClass {
            group,
            gset,
            twist,
            components,
        }
    }

    /// Every pair and every fixed point carry the constant `c`.
    pub fn constant(gset: GSet, twist: Option<Cochain3>, c: Cyclotomic<T>) -> Self {
        let mut out = Self::zero(gset, twist);
        for comp in out.components.values_mut() {
            for f in comp.values_mut() {
                *f = EllFunction::constant(c.clone());
            }
        }
        out
    }

    pub fn get(&self, p: CommutingPair, x: usize) -> Option<&EllFunction<T>> {
        self.components.get(&p)?.get(&x)
    }

    pub fn set(&mut self, p: CommutingPair, x: usize, f: EllFunction<T>) -> Result<()> {
        let slot = self
            .components
            .get_mut(&p)
            .and_then(|c| c.get_mut(&x))
            .ok_or_else(|| Error::Internal(format!("point {x} is not fixed by {p}")))?;
        *slot = f;
        Ok(())
    }

    pub fn components(&self) -> impl Iterator<Item = (CommutingPair, usize, &EllFunction<T>)> {
        self.components
            .iter()
            .flat_map(|(&p, m)| m.iter().map(move |(&x, f)| (p, x, f)))
    }

    pub fn is_zero(&self) -> bool {
        self.components().all(|(_, _, f)| f.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (p, x, f) in o.components() {
            let s = out.get(p, x).expect("same shape").add(f);
            out.set(p, x, s).expect("same shape");
        }
        out
    }

    /// Pairs whose component is not identically zero.
    pub fn support(&self) -> Vec<CommutingPair> {
        self.components
            .iter()
            .filter(|(_, m)| m.values().any(|f| !f.is_zero()))
            .map(|(&p, _)| p)
            .collect()
    }

    /// First `(pair, point)` where the classes differ.
    pub fn first_difference(&self, o: &Self) -> Option<(CommutingPair, usize)> {
        self.components()
            .find(|&(p, x, f)| o.get(p, x) != Some(f))
            .map(|(p, x, _)| (p, x))
    }

    pub fn to_json(&self) -> EllClassJson {
        self.components
            .iter()
            .map(|(p, m)| {
                (
                    p.key(),
                    m.iter().map(|(x, f)| (x.to_string(), f.to_json())).collect(),
                )
            })
            .collect()
    }
}

pub fn ell_class_equal<T: Coefficient>(a: &EllClass<T>, b: &EllClass<T>) -> bool {
    a.components == b.components
}

/// `(A·F)_p = F_{p·A} ∘ A⁻¹`; a left action with `X^p = X^{p·A}`.
pub fn class_sl2_act<T: Coefficient>(a: Sl2Matrix, f: &EllClass<T>) -> EllClass<T> {
    let mut out = f.clone();
    let inv = a.inverse();
    for (&p, comp) in &f.components {
        let source = sl2_act_pair(&f.group, a, p);
        for &x in comp.keys() {
            let value = ell_sl2_act(inv, f.get(source, x).expect("fixed points agree"));
            out.set(p, x, value).expect("same shape");
        }
    }
    out
}

/// `(k·F)_{p·k}(x·k) = e^{2πi·ε}·F_p(x)` with `ε` the six-term expression
/// of the twist at `(g, h, k)`; a right action up to that scalar.
pub fn class_group_act<T: Coefficient>(k: usize, f: &EllClass<T>) -> EllClass<T> {
    let mut out = f.clone();
    for (p, x, value) in f.components() {
        let target = p.conjugate(&f.group, k);
        let scalar = f
            .twist
            .as_ref()
            .map_or(Qz::ZERO, |a| a.six_term(p.g, p.h, k));
        let moved = value.scale(&Cyclotomic::root_of_unity(scalar));
        out.set(target, f.gset.act(x, k), moved).expect("conjugate fixed points");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRank {
    pub representative: CommutingPair,
    pub contributes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantOrbitGroup {
    /// Representative of the `G × SL2(Z)` orbit.
    pub representative: CommutingPair,
    pub conjugation_orbits: Vec<OrbitRank>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRankReport {
    pub orbits: Vec<InvariantOrbitGroup>,
    pub total: usize,
}

/// Rank of the invariants over a point: one per conjugation orbit of
/// commuting pairs whose twist character vanishes on the centralizer,
/// grouped by `G × SL2(Z)` orbit.
pub fn invariant_rank_pt(group: &FiniteGroup, alpha: Option<&Cochain3>) -> Result<InvariantRankReport> {
    if let Some(a) = alpha {
        if **a.group() != *group {
            return Err(Error::GroupMismatch);
        }
        a.ensure_normalized_cocycle()?;
    }
    let trivial = |p: CommutingPair| -> Result<bool> {
        match alpha {
            None => Ok(true),
            Some(a) => Ok(a.gro_character(p.g, p.h)?.is_zero()),
        }
    };
    let conj = pair_orbits(group, OrbitAction::Conjugation);
    let full = pair_orbits(group, OrbitAction::ConjugationAndSl2);
    let mut groups = Vec::with_capacity(full.len());
    let mut total = 0;
    for orbit in &full {
        let expected = trivial(orbit.representative)?;
        for &p in &orbit.members {
            if trivial(p)? != expected {
                return Err(Error::Internal(format!(
                    "twist character triviality is not constant on the orbit of {}",
                    orbit.representative
                )));
            }
        }
        let mut conjugation_orbits = Vec::new();
        for c in conj.iter().filter(|c| orbit.members.binary_search(&c.representative).is_ok()) {
            conjugation_orbits.push(OrbitRank {
                representative: c.representative,
                contributes: expected,
            });
            total += expected as usize;
        }
        groups.push(InvariantOrbitGroup {
            representative: orbit.representative,
            conjugation_orbits,
        });
    }
    Ok(InvariantRankReport { orbits: groups, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type C = Cyclotomic<Rational64>;
    type F = EllFunction<Rational64>;

    fn q() -> F {
        F::monomial(1, C::one())
    }

    #[test]
    fn normalization_examples() {
        let raw = |m| vec![RawTerm { matrix: m, n: 1, coeff: C::one() }];
        let id = ell_normalize(&raw(Sl2Matrix::IDENTITY)).unwrap();
        assert_eq!(id, q());
        assert_eq!(ell_normalize(&raw(Sl2Matrix::T)).unwrap(), q());
        assert_eq!(ell_normalize(&raw(Sl2Matrix::MINUS_IDENTITY)).unwrap(), q());
        let bad = vec![RawTerm { matrix: Sl2Matrix { a: 2, b: 0, c: 0, d: 1 }, n: 1, coeff: C::one() }];
        assert!(ell_normalize(&bad).is_err());
    }

    #[test]
    fn sl2_action_examples() {
        assert_eq!(ell_sl2_act(Sl2Matrix::IDENTITY, &q()), q());
        let one = F::constant(C::one());
        assert_eq!(ell_sl2_act(Sl2Matrix::T, &one), one);
        let s = ell_sl2_act(Sl2Matrix::S, &q());
        assert_eq!(s.terms().next().unwrap().0, Coset { c: 1, d: 0 });
    }

    #[test]
    fn evaluation_examples() {
        let i = Complex::new(0.0, 1.0);
        let one = Complex::new(1.0, 0.0);
        let c = F::constant(C::one()).eval(i, one).unwrap();
        assert!((c - one).norm() < 1e-12);
        let v = q().eval(i, one).unwrap();
        assert!((v.re - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-12);
        assert!(q().eval(-i, one).is_err());
    }

    #[test]
    fn invariant_ranks_over_a_point() {
        let s3 = FiniteGroup::builtin("S3").unwrap();
        assert_eq!(invariant_rank_pt(&s3, None).unwrap().total, 8);
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(invariant_rank_pt(&z2, None).unwrap().total, 4);
        let a = Cochain3::cyclic(2, 1).unwrap();
        assert_eq!(invariant_rank_pt(&z2, Some(&a)).unwrap().total, 4);
    }

    #[test]
    fn constant_class_is_invariant() {
        let g = Arc::new(FiniteGroup::builtin("S3").unwrap());
        let one = EllClass::<Rational64>::constant(GSet::point(g.clone()), None, C::one());
        for k in g.elements() {
            assert!(ell_class_equal(&class_group_act(k, &one), &one));
        }
        assert!(ell_class_equal(&class_sl2_act(Sl2Matrix::S, &one), &one));
        assert!(ell_class_equal(&class_sl2_act(Sl2Matrix::T, &one), &one));
    }
}
