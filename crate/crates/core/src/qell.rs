//! (Twisted) quasi-elliptic cohomology of a finite G-set in degree zero.
//!
//! The group is free over `Z[q^±]` on generators indexed by a conjugacy
//! representative `σ`, a `C_G(σ)`-orbit in `X^σ` and an irreducible of
//! `Λ_H(σ)` for the point stabilizer `H` of the orbit.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cocycle::{Cochain2, Cochain3, Qz};
use crate::cyclotomic::{Coefficient, Cyclotomic};
use crate::error::{Error, Result};
use crate::extension::{lambda_basis_on, GradedRepModule, LambdaIrrep};
use crate::group::FiniteGroup;
use crate::gset::{EquivariantMap, GSet};

#[derive(Debug, Clone)]
pub struct OrbitSector<T: Coefficient> {
    /// Least point of the orbit.
    pub point: usize,
    pub orbit: Vec<usize>,
    /// `Stab_{C_G(σ)}(point)`
    pub stabilizer: Vec<usize>,
    pub module: GradedRepModule<T>,
}

#[derive(Debug, Clone)]
pub struct Sector<T: Coefficient> {
    pub sigma: usize,
    pub centralizer: Vec<usize>,
    /// `θ_σ` on `C_G(σ)` when twisted.
    pub theta: Option<Cochain2>,
    pub orbits: Vec<OrbitSector<T>>,
}

/// The basis data of `QEll` (or its twisted form) for a G-set.
#[derive(Debug, Clone)]
pub struct QEll<T: Coefficient> {
    pub group: Arc<FiniteGroup>,
    pub gset: GSet,
    pub alpha: Option<Cochain3>,
    pub sectors: Vec<Sector<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisKey {
    pub sigma: usize,
    pub orbit: usize,
    pub irrep: usize,
    pub q_shift: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QEllBasisElement {
    pub sigma: usize,
    pub orbit: usize,
    pub irrep: usize,
    pub q_degree: Qz,
    pub q_shift: i64,
}

impl QEllBasisElement {
    pub fn key(&self) -> BasisKey {
        BasisKey {
            sigma: self.sigma,
            orbit: self.orbit,
            irrep: self.irrep,
            q_shift: self.q_shift,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorRank {
    pub sigma: usize,
    /// Fractional degrees of the generators, ascending, with repetition.
    pub degrees: Vec<Qz>,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub sectors: Vec<SectorRank>,
    pub total: usize,
}

impl RankReport {
    /// All fractional degrees, ascending.
    pub fn degrees(&self) -> Vec<Qz> {
        let mut d: Vec<Qz> = self.sectors.iter().flat_map(|s| s.degrees.iter().copied()).collect();
        d.sort();
        d
    }
}

/// `e^{2πi·phase}` picked up when the fiber data at `g` is moved along `w`
/// to `w⁻¹gw`, evaluated at `s` in the new stabilizer.
pub fn transport_phase(alpha: Option<&Cochain3>, g: usize, w: usize, s: usize) -> Qz {
    alpha.map_or(Qz::ZERO, |a| a.transport_phase(g, w, s))
}

/// The character of a generator's fiber over a point of `X^g`, on
/// `Stab_{C_G(g)}(point)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCharacter<T: Coefficient> {
    pub g: usize,
    pub point: usize,
    pub stabilizer: Vec<usize>,
    pub values: Vec<Cyclotomic<T>>,
}

impl<T: Coefficient> FiberCharacter<T> {
    pub fn value(&self, s: usize) -> Option<&Cyclotomic<T>> {
        self.stabilizer.binary_search(&s).ok().map(|i| &self.values[i])
    }
}

impl<T: Coefficient> QEll<T> {
    pub fn new(gset: GSet, alpha: Option<Cochain3>) -> Result<Self> {
        let group = gset.group().clone();
        if let Some(a) = &alpha {
            if **a.group() != *group {
                return Err(Error::GroupMismatch);
            }
            a.ensure_normalized_cocycle()?;
        }
        let mut sectors = Vec::new();
        for class in group.conjugacy_classes() {
            let sigma = class.representative;
            let centralizer = group.centralizer(&[sigma]);
            let theta = alpha.as_ref().map(|a| a.transgress_unchecked(sigma));
            let fixed = gset.fixed_points(&[sigma]);
            let mut cache: HashMap<Vec<usize>, GradedRepModule<T>> = HashMap::new();
            let mut orbits = Vec::new();
            for orbit in gset.orbits(&fixed, &centralizer) {
                let point = orbit[0];
                let stabilizer = gset.stabilizer(point, &centralizer);
                let module = match cache.get(&stabilizer) {
                    Some(m) => m.clone(),
                    None => {
                        let th = theta.as_ref().map(|t| t.restrict(&stabilizer)).transpose()?;
                        let m = lambda_basis_on(&group, &stabilizer, sigma, th.as_ref())?;
                        cache.insert(stabilizer.clone(), m.clone());
                        m
                    }
                };
                orbits.push(OrbitSector {
                    point,
                    orbit,
                    stabilizer,
                    module,
                });
            }
            sectors.push(Sector {
                sigma,
                centralizer,
                theta,
                orbits,
            });
        }
        Ok(QEll {
            group,
            gset,
            alpha,
            sectors,
        })
    }

    pub fn sector(&self, sigma: usize) -> Option<&Sector<T>> {
        self.sectors.iter().find(|s| s.sigma == sigma)
    }

    pub fn orbit_sector(&self, sigma: usize, point: usize) -> Option<&OrbitSector<T>> {
        self.sector(sigma)?.orbits.iter().find(|o| o.point == point)
    }

    pub fn irrep(&self, key: &BasisKey) -> Option<&LambdaIrrep<T>> {
        self.orbit_sector(key.sigma, key.orbit)?.module.basis.get(key.irrep)
    }

    /// Generators over `Z[q^±]` (all with `q_shift = 0`).
    pub fn basis(&self) -> Vec<QEllBasisElement> {
        let mut out = Vec::new();
        for s in &self.sectors {
            for o in &s.orbits {
                for (i, b) in o.module.basis.iter().enumerate() {
                    out.push(QEllBasisElement {
                        sigma: s.sigma,
                        orbit: o.point,
                        irrep: i,
                        q_degree: b.q_degree,
                        q_shift: 0,
                    });
                }
            }
        }
        out
    }

    pub fn rank_report(&self) -> RankReport {
        let sectors: Vec<SectorRank> = self
            .sectors
            .iter()
            .map(|s| {
                let mut degrees: Vec<Qz> = s
                    .orbits
                    .iter()
                    .flat_map(|o| o.module.basis.iter().map(|b| b.q_degree))
                    .collect();
                degrees.sort();
                SectorRank {
                    sigma: s.sigma,
                    rank: degrees.len(),
                    degrees,
                }
            })
            .collect();
        let total = sectors.iter().map(|s| s.rank).sum();
        RankReport { sectors, total }
    }

    /// Some `w` with `σ^w = g` and `point·w = y`.
    pub fn conjugator(&self, sigma: usize, point: usize, g: usize, y: usize) -> Option<usize> {
        self.group
            .elements()
            .find(|&w| self.group.conj(sigma, w) == g && self.gset.act(point, w) == y)
    }

    /// Character of the generator `key` on the fiber over `y ∈ X^g`, or
    /// `None` when `(g, y)` is not in the generator's support.
    pub fn fiber_character(&self, key: &BasisKey, g: usize, y: usize) -> Option<FiberCharacter<T>> {
        let irrep = self.irrep(key)?;
        let w = self.conjugator(key.sigma, key.orbit, g, y)?;
        let gr = &*self.group;
        let stabilizer = self.gset.stabilizer(y, &gr.centralizer(&[g]));
        let values = stabilizer
            .iter()
            .map(|&s| {
                let inner = gr.mul(gr.mul(w, s), gr.inv(w));
                let phase = transport_phase(self.alpha.as_ref(), key.sigma, w, s);
                let v = irrep.character.value(inner).expect("conjugated stabilizer");
                &Cyclotomic::root_of_unity(phase) * v
            })
            .collect();
        Some(FiberCharacter {
            g,
            point: y,
            stabilizer,
            values,
        })
    }
}

/// A finite `Z`-combination of generators times powers of `q`.
#[derive(Debug, Clone)]
pub struct QEllClass<T: Coefficient> {
    pub space: Arc<QEll<T>>,
    terms: BTreeMap<BasisKey, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassTermJson {
    pub sigma: usize,
    pub orbit: usize,
    pub irrep: usize,
    pub q_shift: i64,
    pub coeff: i64,
}

impl<T: Coefficient> PartialEq for QEllClass<T> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl<T: Coefficient> QEllClass<T> {
    pub fn zero(space: Arc<QEll<T>>) -> Self {
        QEllClass {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(space: Arc<QEll<T>>, key: BasisKey) -> Result<Self> {
        let mut c = Self::zero(space);
        c.add_term(key, 1)?;
        Ok(c)
    }

    pub fn add_term(&mut self, key: BasisKey, coeff: i64) -> Result<()> {
        if self.space.irrep(&key).is_none() {
            return Err(Error::InvalidBasis(format!("{key:?}")));
        }
        let e = self.terms.entry(key).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn terms(&self) -> &BTreeMap<BasisKey, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(*k, *v).expect("same space");
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(self.space.clone());
        if k != 0 {
            out.terms = self.terms.iter().map(|(key, v)| (*key, v * k)).collect();
        }
        out
    }

    /// Multiplication by `q^k`.
    pub fn q_multiply(&self, k: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(key, v)| {
                (
                    BasisKey {
                        q_shift: key.q_shift + k,
                        ..*key
                    },
                    *v,
                )
            })
            .collect();
        QEllClass {
            space: self.space.clone(),
            terms,
        }
    }

    pub fn to_json(&self) -> Vec<ClassTermJson> {
        self.terms
            .iter()
            .map(|(k, &coeff)| ClassTermJson {
                sigma: k.sigma,
                orbit: k.orbit,
                irrep: k.irrep,
                q_shift: k.q_shift,
                coeff,
            })
            .collect()
    }

    pub fn from_json(space: Arc<QEll<T>>, terms: &[ClassTermJson]) -> Result<Self> {
        let mut c = Self::zero(space);
        for (i, t) in terms.iter().enumerate() {
            let key = BasisKey {
                sigma: t.sigma,
                orbit: t.orbit,
                irrep: t.irrep,
                q_shift: t.q_shift,
            };
            c.add_term(key, t.coeff)
                .map_err(|_| Error::schema(format!("class[{i}]"), "not a basis element of this space"))?;
        }
        Ok(c)
    }
}

/// Restriction along `φ: X → Y` over `f: G → H`.
///
/// The result lives on the space built from `X` and `f*α`.
pub fn restrict_class<T: Coefficient>(phi: &EquivariantMap, c: &QEllClass<T>) -> Result<QEllClass<T>> {
    let src = &c.space;
    if src.gset != phi.target {
        return Err(Error::GroupMismatch);
    }
    let f = &phi.hom;
    let pulled = src.alpha.as_ref().map(|a| a.pullback(f)).transpose()?;
    let g_grp = f.domain.clone();
    if let (Some(a), Some(pa)) = (&src.alpha, &pulled) {
        for class in g_grp.conjugacy_classes() {
            let sigma = class.representative;
            let lhs = pa.transgress_unchecked(sigma);
            let rhs = a
                .transgress_unchecked(f.apply(sigma))
                .pullback_on(f, &g_grp.centralizer(&[sigma]))?;
            if lhs != rhs {
                return Err(Error::Internal(format!("pullback and transgression disagree at {sigma}")));
            }
        }
    }
    let target = Arc::new(QEll::<T>::new(phi.source.clone(), pulled)?);
    let mut out = QEllClass::zero(target.clone());
    let h_grp = &src.group;
    for sector in &target.sectors {
        let fs = f.apply(sector.sigma);
        for orbit in &sector.orbits {
            let y = phi.apply(orbit.point);
            let k_elems = &orbit.stabilizer;
            for (key, &coeff) in c.terms() {
                let Some(w) = src.conjugator(key.sigma, key.orbit, fs, y) else {
                    continue;
                };
                let irrep = src.irrep(key).expect("valid class");
                let restricted: Vec<Cyclotomic<T>> = k_elems
                    .iter()
                    .map(|&k| {
                        let s = f.apply(k);
                        let inner = h_grp.mul(h_grp.mul(w, s), h_grp.inv(w));
                        let phase = transport_phase(src.alpha.as_ref(), key.sigma, w, s);
                        &Cyclotomic::root_of_unity(phase) * irrep.character.value(inner).expect("stabilizer")
                    })
                    .collect();
                let order = T::from_usize(k_elems.len()).expect("order");
                for (idx, psi) in orbit.module.basis.iter().enumerate() {
                    let ip: Cyclotomic<T> = restricted
                        .iter()
                        .zip(&psi.character.values)
                        .map(|(a, b)| a * &b.conj())
                        .sum();
                    let m = ip.scale(&(T::one() / order.clone()));
                    let m = m
                        .as_rational()
                        .and_then(|r| r.to_i64().filter(|&i| i >= 0 && T::from_i64(i) == Some(r)))
                        .ok_or_else(|| Error::Internal(format!("restriction multiplicity {m} is not a natural number")))?;
                    if m != 0 {
                        if psi.q_degree != irrep.q_degree {
                            return Err(Error::Internal("restriction changed the fractional degree".into()));
                        }
                        out.add_term(
                            BasisKey {
                                sigma: sector.sigma,
                                orbit: orbit.point,
                                irrep: idx,
                                q_shift: key.q_shift,
                            },
                            coeff * m,
                        )?;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupHom;
    use num_rational::Rational64;

    type Q = QEll<Rational64>;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    #[test]
    fn z2_point_ranks() {
        let q = Q::new(GSet::point(z(2)), None).unwrap();
        let r = q.rank_report();
        assert_eq!(r.total, 4);
        assert_eq!(r.degrees(), vec![Qz::ZERO, Qz::ZERO, Qz::ZERO, Qz::new(1, 2)]);
    }

    #[test]
    fn twisted_z2_point_ranks() {
        let alpha = Cochain3::cyclic(2, 1).unwrap();
        let q = Q::new(GSet::point(z(2)), Some(alpha)).unwrap();
        let r = q.rank_report();
        assert_eq!(r.sectors[0].degrees, vec![Qz::ZERO, Qz::ZERO]);
        assert_eq!(r.sectors[1].degrees, vec![Qz::new(1, 4), Qz::new(3, 4)]);
    }

    #[test]
    fn s3_point_rank() {
        let g = Arc::new(FiniteGroup::builtin("S3").unwrap());
        assert_eq!(Q::new(GSet::point(g), None).unwrap().rank_report().total, 8);
    }

    #[test]
    fn trivial_group_has_one_generator_per_point() {
        let g = Arc::new(FiniteGroup::trivial());
        let q = Q::new(GSet::trivial(g, 3), None).unwrap();
        assert_eq!(q.basis().len(), 3);
    }

    #[test]
    fn q_multiplication_is_invertible() {
        let q = Arc::new(Q::new(GSet::point(z(2)), None).unwrap());
        let b = q.basis();
        let mut c = QEllClass::generator(q.clone(), b[3].key()).unwrap();
        c.add_term(b[1].key(), 2).unwrap();
        assert_eq!(c.q_multiply(0), c);
        assert_eq!(c.q_multiply(1).q_multiply(-1), c);
        let shifted = c.q_multiply(3);
        assert!(shifted.terms().keys().all(|k| k.q_shift == 3));
    }

    #[test]
    fn restriction_along_identity() {
        let q = Arc::new(Q::new(GSet::point(z(4)), Some(Cochain3::cyclic(4, 1).unwrap())).unwrap());
        let phi = EquivariantMap::identity(q.gset.clone());
        for b in q.basis() {
            let c = QEllClass::generator(q.clone(), b.key()).unwrap().q_multiply(2);
            assert_eq!(restrict_class(&phi, &c).unwrap().terms(), c.terms());
        }
    }

    #[test]
    fn restriction_z2_into_z4() {
        let q4 = Arc::new(Q::new(GSet::point(z(4)), None).unwrap());
        let f = GroupHom::new(z(2), z(4), vec![0, 2]).unwrap();
        let phi = EquivariantMap::to_point(f, GSet::point(z(2))).unwrap();
        for b in q4.basis().into_iter().filter(|b| b.sigma == 2) {
            let c = QEllClass::generator(q4.clone(), b.key()).unwrap();
            let r = restrict_class(&phi, &c).unwrap();
            assert_eq!(r.terms().len(), 1);
            let (key, &coeff) = r.terms().iter().next().unwrap();
            assert_eq!(coeff, 1);
            assert_eq!(key.sigma, 1);
            let deg = r.space.irrep(key).unwrap().q_degree;
            assert_eq!(deg, b.q_degree);
        }
    }
}
