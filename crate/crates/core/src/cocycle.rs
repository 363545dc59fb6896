//! Q/Z-valued cochains on finite groups.
//!
//! `U(1)` is written additively: a value `r` stands for `e^{2πi·r}`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom};

/// An element of Q/Z as a reduced fraction in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Qz {
    num: i64,
    den: i64,
}

impl Qz {
    pub const ZERO: Qz = Qz { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        Qz {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn denominator(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Additive order.
    pub fn order(self) -> i64 {
        self.den
    }

    /// Parses `p/q` (or an integer) and rejects anything not already in
    /// canonical form.
    pub fn parse_canonical(s: &str) -> std::result::Result<Self, String> {
        let (p, q) = split_fraction(s)?;
        let v = Qz::new(p, q);
        if v.num != p || v.den != q {
            return Err(format!("`{s}` is not a reduced fraction in [0,1)"));
        }
        Ok(v)
    }
}

fn split_fraction(s: &str) -> std::result::Result<(i64, i64), String> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: i64 = p.parse().map_err(|_| format!("bad numerator in `{s}`"))?;
    let q: i64 = q.parse().map_err(|_| format!("bad denominator in `{s}`"))?;
    if q <= 0 {
        return Err(format!("non-positive denominator in `{s}`"));
    }
    Ok((p, q))
}

/// Numeric order of the representatives in `[0, 1)`.
impl Ord for Qz {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.num as i128 * o.den as i128).cmp(&(o.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Qz {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl FromStr for Qz {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (p, q) = split_fraction(s)?;
        Ok(Qz::new(p, q))
    }
}

impl fmt::Display for Qz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Qz {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Qz {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Qz::parse_canonical(&s).map_err(serde::de::Error::custom)
    }
}

impl Add for Qz {
    type Output = Qz;

    fn add(self, o: Qz) -> Qz {
        let l = self.den.lcm(&o.den);
        Qz::new(self.num * (l / self.den) + o.num * (l / o.den), l)
    }
}

impl AddAssign for Qz {
    fn add_assign(&mut self, o: Qz) {
        *self = *self + o;
    }
}

impl Neg for Qz {
    type Output = Qz;

    fn neg(self) -> Qz {
        Qz::new(-self.num, self.den)
    }
}

impl Sub for Qz {
    type Output = Qz;

    fn sub(self, o: Qz) -> Qz {
        self + (-o)
    }
}

impl Mul<i64> for Qz {
    type Output = Qz;

    fn mul(self, k: i64) -> Qz {
        Qz::new((self.num * k.rem_euclid(self.den)) % self.den, self.den)
    }
}

impl std::iter::Sum for Qz {
    fn sum<I: Iterator<Item = Qz>>(iter: I) -> Qz {
        iter.fold(Qz::ZERO, |a, b| a + b)
    }
}

fn lcm_of_orders(values: &[Qz]) -> i64 {
    values.iter().fold(1, |acc, v| acc.lcm(&v.den))
}

/// A 3-cochain `G³ → Q/Z`, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain3 {
    group: Arc<FiniteGroup>,
    values: Vec<Qz>,
}

impl Cochain3 {
    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        Cochain3 {
            group,
            values: vec![Qz::ZERO; n * n * n],
        }
    }

    pub fn from_fn(group: Arc<FiniteGroup>, f: impl Fn(usize, usize, usize) -> Qz) -> Self {
        let n = group.order();
        let mut values = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    values.push(f(a, b, c));
                }
            }
        }
        Cochain3 { group, values }
    }

    /// `α(a,b,c) = k·a·⌊(b+c)/n⌋ / n` on Z/n, verified on construction.
    pub fn cyclic(n: usize, k: i64) -> Result<Self> {
        if n == 0 || k < 0 || k >= n as i64 {
            return Err(Error::schema("cocycle", format!("cyclic family needs 0 ≤ k < n, got n={n}, k={k}")));
        }
        let group = Arc::new(FiniteGroup::cyclic(n));
        let alpha = Self::from_fn(group, |a, b, c| {
            Qz::new(k * a as i64 * ((b + c) / n) as i64, n as i64)
        });
        if let Some(w) = alpha.cocycle_defect() {
            return Err(Error::Internal(format!("cyclic cocycle fails at {w:?}")));
        }
        if !alpha.is_normalized() {
            return Err(Error::Internal("cyclic cocycle is not normalized".into()));
        }
        Ok(alpha)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> Qz {
        let n = self.group.order();
        self.values[(a * n + b) * n + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: Qz) {
        let n = self.group.order();
        self.values[(a * n + b) * n + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// First quadruple `(g0, g1, g2, g3)` where the pentagon identity fails.
    pub fn cocycle_defect(&self) -> Option<[usize; 4]> {
        let g = &*self.group;
        for g0 in g.elements() {
            for g1 in g.elements() {
                let g01 = g.mul(g0, g1);
                for g2 in g.elements() {
                    let g12 = g.mul(g1, g2);
                    let a012 = self.get(g0, g1, g2);
                    for g3 in g.elements() {
                        let d = self.get(g1, g2, g3) + self.get(g0, g12, g3) + a012
                            - self.get(g01, g2, g3)
                            - self.get(g0, g1, g.mul(g2, g3));
                        if !d.is_zero() {
                            return Some([g0, g1, g2, g3]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_defect().is_none()
    }

    pub fn is_normalized(&self) -> bool {
        let e = self.group.identity();
        self.group.elements().all(|x| {
            self.group.elements().all(|y| {
                self.get(e, x, y).is_zero() && self.get(x, e, y).is_zero() && self.get(x, y, e).is_zero()
            })
        })
    }

    pub fn ensure_normalized_cocycle(&self) -> Result<()> {
        if let Some(w) = self.cocycle_defect() {
            return Err(Error::NotCocycle(w.to_vec()));
        }
        if !self.is_normalized() {
            return Err(Error::NotNormalized);
        }
        Ok(())
    }

    /// `(dβ)(g,h,k) = β(h,k) − β(gh,k) + β(g,hk) − β(g,h)`
    pub fn coboundary(beta: &Cochain2) -> Result<Self> {
        let g = beta.group.clone();
        if beta.carrier.len() != g.order() {
            return Err(Error::Internal("coboundary needs a cochain on the whole group".into()));
        }
        let gr = g.clone();
        Ok(Self::from_fn(g, |a, b, c| {
            beta.get(b, c) - beta.get(gr.mul(a, b), c) + beta.get(a, gr.mul(b, c)) - beta.get(a, b)
        }))
    }

    /// Pointwise order (lcm of the value denominators).
    pub fn value_order(&self) -> i64 {
        lcm_of_orders(&self.values)
    }

    /// `τ_x α(g,h) = α(g,h,x) + α(x,g,h) − α(g,x,h)` on `C_G(x)`.
    pub fn transgress(&self, x: usize) -> Result<Cochain2> {
        self.ensure_normalized_cocycle()?;
        Ok(self.transgress_unchecked(x))
    }

    /// [`Self::transgress`] without re-validating `α`.
    pub fn transgress_unchecked(&self, x: usize) -> Cochain2 {
        let carrier = self.group.centralizer(&[x]);
        Cochain2::from_fn(self.group.clone(), carrier, |g, h| {
            self.get(g, h, x) + self.get(x, g, h) - self.get(g, x, h)
        })
    }

    /// The six-term scalar by which `k` acts on the `(g1, g2)` sector.
    pub fn six_term(&self, g1: usize, g2: usize, k: usize) -> Qz {
        self.get(g2, k, g1) + self.get(k, g1, g2) + self.get(g1, g2, k)
            - self.get(k, g2, g1)
            - self.get(g1, k, g2)
            - self.get(g2, g1, k)
    }

    /// The character `C_G(g1, g2) → Q/Z` of the twisted sector action.
    pub fn gro_character(&self, g1: usize, g2: usize) -> Result<QzCharacter> {
        if !self.group.commute(g1, g2) {
            return Err(Error::NotCommuting(g1, g2));
        }
        let elements = self.group.centralizer(&[g1, g2]);
        let values = elements.iter().map(|&h| self.six_term(g1, g2, h)).collect();
        Ok(QzCharacter {
            group: self.group.clone(),
            elements,
            values,
        })
    }

    /// The conjugation-groupoid 2-cocycle at object `g`:
    /// `α(g,x,y) + α(x,y,g^{xy}) − α(x,g^x,y)` with `g^x = x⁻¹gx`.
    ///
    /// On `C_G(g) × C_G(g)` this is the transgression at `g`.
    pub fn groupoid_cocycle(&self, g: usize, x: usize, y: usize) -> Qz {
        let gr = &*self.group;
        let gx = gr.conj(g, x);
        let gxy = gr.conj(g, gr.mul(x, y));
        self.get(g, x, y) + self.get(x, y, gxy) - self.get(x, gx, y)
    }

    /// Phase picked up when a projective representation at `g` is moved to
    /// `w⁻¹gw`: the moved representation is `s ↦ e^{2πi·phase}·ρ(wsw⁻¹)`.
    pub fn transport_phase(&self, g: usize, w: usize, s: usize) -> Qz {
        let gr = &*self.group;
        let wsw = gr.mul(gr.mul(w, s), gr.inv(w));
        self.groupoid_cocycle(g, w, s) - self.groupoid_cocycle(g, wsw, w)
    }

    /// `(f*α)(x,y,z) = α(f x, f y, f z)`
    pub fn pullback(&self, f: &GroupHom) -> Result<Cochain3> {
        if *f.codomain != *self.group {
            return Err(Error::GroupMismatch);
        }
        Ok(Self::from_fn(f.domain.clone(), |a, b, c| {
            self.get(f.apply(a), f.apply(b), f.apply(c))
        }))
    }

    /// The cochain with every entry listed, as `(triple, value)` pairs with
    /// zero values omitted.
    pub fn entries(&self) -> Vec<([usize; 3], Qz)> {
        let n = self.group.order();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.get(a, b, c);
                    if !v.is_zero() {
                        out.push(([a, b, c], v));
                    }
                }
            }
        }
        out
    }
}

impl Add for &Cochain3 {
    type Output = Cochain3;

    fn add(self, o: &Cochain3) -> Cochain3 {
        assert_eq!(self.group, o.group, "cochains on different groups");
        Cochain3 {
            group: self.group.clone(),
            values: self.values.iter().zip(&o.values).map(|(a, b)| *a + *b).collect(),
        }
    }
}

/// A 2-cochain on a subgroup (the carrier) of an ambient group, indexed by
/// ambient element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain2 {
    group: Arc<FiniteGroup>,
    carrier: Vec<usize>,
    position: Vec<usize>,
    values: Vec<Qz>,
}

impl Cochain2 {
    pub fn from_fn(group: Arc<FiniteGroup>, mut carrier: Vec<usize>, f: impl Fn(usize, usize) -> Qz) -> Self {
        carrier.sort_unstable();
        carrier.dedup();
        let mut position = vec![usize::MAX; group.order()];
        for (i, &c) in carrier.iter().enumerate() {
            position[c] = i;
        }
        let mut values = Vec::with_capacity(carrier.len() * carrier.len());
        for &a in &carrier {
            for &b in &carrier {
                values.push(f(a, b));
            }
        }
        Cochain2 {
            group,
            carrier,
            position,
            values,
        }
    }

    pub fn zero(group: Arc<FiniteGroup>, carrier: Vec<usize>) -> Self {
        Self::from_fn(group, carrier, |_, _| Qz::ZERO)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn carrier(&self) -> &[usize] {
        &self.carrier
    }

    pub fn contains(&self, g: usize) -> bool {
        self.position.get(g).is_some_and(|&p| p != usize::MAX)
    }

    /// Value at ambient elements `(a, b)`; both must lie in the carrier.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Qz {
        let (i, j) = (self.position[a], self.position[b]);
        debug_assert!(i != usize::MAX && j != usize::MAX, "({a},{b}) outside carrier");
        self.values[i * self.carrier.len() + j]
    }

    pub fn set(&mut self, a: usize, b: usize, v: Qz) {
        let (i, j) = (self.position[a], self.position[b]);
        let m = self.carrier.len();
        self.values[i * m + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// First triple where `θ(h,k) − θ(gh,k) + θ(g,hk) − θ(g,h) ≠ 0`.
    pub fn cocycle_defect(&self) -> Option<[usize; 3]> {
        let gr = &*self.group;
        for &g in &self.carrier {
            for &h in &self.carrier {
                let gh = gr.mul(g, h);
                for &k in &self.carrier {
                    let d = self.get(h, k) - self.get(gh, k) + self.get(g, gr.mul(h, k)) - self.get(g, h);
                    if !d.is_zero() {
                        return Some([g, h, k]);
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_defect().is_none()
    }

    pub fn is_normalized(&self) -> bool {
        let e = self.group.identity();
        self.carrier
            .iter()
            .all(|&x| self.get(e, x).is_zero() && self.get(x, e).is_zero())
    }

    pub fn value_order(&self) -> i64 {
        lcm_of_orders(&self.values)
    }

    /// Pointwise restriction to a subset of the carrier.
    pub fn restrict(&self, subset: &[usize]) -> Result<Cochain2> {
        if let Some(&bad) = subset.iter().find(|&&s| !self.contains(s)) {
            return Err(Error::NotInCarrier(bad));
        }
        Ok(Self::from_fn(self.group.clone(), subset.to_vec(), |a, b| self.get(a, b)))
    }

    /// Pullback to the full preimage of the carrier.
    pub fn pullback(&self, f: &GroupHom) -> Result<Cochain2> {
        let carrier = f.preimage(&self.carrier);
        self.pullback_on(f, &carrier)
    }

    /// Pullback onto a chosen subset of the domain.
    pub fn pullback_on(&self, f: &GroupHom, carrier: &[usize]) -> Result<Cochain2> {
        if *f.codomain != *self.group {
            return Err(Error::GroupMismatch);
        }
        if let Some(&bad) = carrier.iter().find(|&&x| !self.contains(f.apply(x))) {
            return Err(Error::NotInCarrier(f.apply(bad)));
        }
        Ok(Self::from_fn(f.domain.clone(), carrier.to_vec(), |a, b| {
            self.get(f.apply(a), f.apply(b))
        }))
    }

    pub fn entries(&self) -> Vec<([usize; 2], Qz)> {
        let mut out = Vec::new();
        for &a in &self.carrier {
            for &b in &self.carrier {
                let v = self.get(a, b);
                if !v.is_zero() {
                    out.push(([a, b], v));
                }
            }
        }
        out
    }
}

/// A function from a subgroup to Q/Z, meant to be a homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QzCharacter {
    pub group: Arc<FiniteGroup>,
    pub elements: Vec<usize>,
    pub values: Vec<Qz>,
}

impl QzCharacter {
    pub fn value(&self, h: usize) -> Option<Qz> {
        self.elements
            .binary_search(&h)
            .ok()
            .map(|i| self.values[i])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_homomorphism(&self) -> bool {
        let gr = &*self.group;
        self.elements.iter().zip(&self.values).all(|(&a, &va)| {
            self.elements.iter().zip(&self.values).all(|(&b, &vb)| {
                self.value(gr.mul(a, b)) == Some(va + vb)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Qz {
        Qz::new(p, d)
    }

    #[test]
    fn qz_arithmetic() {
        assert_eq!(q(3, 4) + q(1, 2), q(1, 4));
        assert_eq!(-q(1, 3), q(2, 3));
        assert_eq!(q(-1, 2), q(1, 2));
        assert_eq!(q(4, 6).to_string(), "2/3");
        assert_eq!(q(5, 6) * 3, q(1, 2));
        assert_eq!(q(1, 6) * -1, q(5, 6));
        assert!(Qz::parse_canonical("2/4").is_err());
        assert!(Qz::parse_canonical("3/2").is_err());
        assert_eq!(Qz::parse_canonical("1/2"), Ok(q(1, 2)));
        assert_eq!(Qz::parse_canonical("0"), Ok(Qz::ZERO));
        assert!(q(1, 4) < q(1, 2) && q(1, 2) < q(3, 4));
    }

    #[test]
    fn zero_cochain_is_normalized_cocycle() {
        let a = Cochain3::zero(Arc::new(FiniteGroup::cyclic(3)));
        assert!(a.is_cocycle());
        assert!(a.is_normalized());
        assert_eq!(a.value_order(), 1);
    }

    #[test]
    fn cyclic_family_values() {
        let a = Cochain3::cyclic(2, 1).unwrap();
        for (x, y, z) in (0..8).map(|i| (i >> 2, (i >> 1) & 1, i & 1)) {
            let expected = if (x, y, z) == (1, 1, 1) { q(1, 2) } else { Qz::ZERO };
            assert_eq!(a.get(x, y, z), expected);
        }
        assert!(Cochain3::cyclic(5, 0).unwrap().is_zero());
        let a4 = Cochain3::cyclic(4, 1).unwrap();
        assert_eq!(a4.get(1, 3, 3), q(1, 4));
        assert_eq!(a4.value_order(), 4);
        assert!(Cochain3::cyclic(4, 4).is_err());
    }

    #[test]
    fn perturbed_cochain_fails_with_witness() {
        let mut a = Cochain3::zero(Arc::new(FiniteGroup::cyclic(2)));
        a.set(1, 1, 0, q(1, 2));
        let w = a.cocycle_defect().expect("perturbation must break the cocycle");
        let g = a.group().clone();
        let [g0, g1, g2, g3] = w;
        let d = a.get(g1, g2, g3) + a.get(g0, g.mul(g1, g2), g3) + a.get(g0, g1, g2)
            - a.get(g.mul(g0, g1), g2, g3)
            - a.get(g0, g1, g.mul(g2, g3));
        assert!(!d.is_zero());
        let mut b = Cochain3::zero(g);
        b.set(0, 1, 1, q(1, 2));
        assert!(!b.is_normalized());
    }

    #[test]
    fn transgression_on_z2() {
        let a = Cochain3::cyclic(2, 1).unwrap();
        let t1 = a.transgress(1).unwrap();
        assert_eq!(t1.get(1, 1), q(1, 2));
        assert_eq!(t1.get(0, 1), Qz::ZERO);
        assert_eq!(t1.get(1, 0), Qz::ZERO);
        assert!(t1.is_cocycle());
        assert_eq!(t1.value_order(), 2);
        assert!(a.transgress(0).unwrap().is_zero());
        let mut bad = t1.clone();
        bad.set(1, 0, q(1, 3));
        assert!(bad.cocycle_defect().is_some());
    }

    #[test]
    fn transgress_rejects_non_cocycles() {
        let mut a = Cochain3::zero(Arc::new(FiniteGroup::cyclic(2)));
        a.set(1, 1, 0, q(1, 2));
        assert!(matches!(a.transgress(1), Err(Error::NotCocycle(_))));
    }

    #[test]
    fn gro_character_on_z2_vanishes() {
        let a = Cochain3::cyclic(2, 1).unwrap();
        let chi = a.gro_character(1, 1).unwrap();
        assert!(chi.is_zero());
        assert!(chi.is_homomorphism());
    }

    #[test]
    fn pullback_along_inclusion() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let f = GroupHom::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let a = Cochain3::cyclic(4, 1).unwrap();
        let pb = a.pullback(&f).unwrap();
        assert_eq!(pb.get(1, 1, 1), q(1, 2));
        assert!(pb.is_cocycle());
        let id = GroupHom::identity(z4.clone());
        assert_eq!(a.pullback(&id).unwrap(), a);
        let triv = GroupHom::trivial(z2, z4);
        assert!(a.pullback(&triv).unwrap().is_zero());
    }

    #[test]
    fn groupoid_cocycle_restricts_to_transgression() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let a = Cochain3::cyclic(4, 3).unwrap();
        for x in 0..4 {
            let t = a.transgress(x).unwrap();
            for y in 0..4 {
                for z in 0..4 {
                    assert_eq!(a.groupoid_cocycle(x, y, z), t.get(y, z));
                }
            }
        }
        drop(g);
    }
}
