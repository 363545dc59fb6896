//! Central extensions by a 2-cocycle, projective characters, and the graded
//! irreducibles of `Λ_G(g)` and its twisted analogue.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::character::CharacterTable;
use crate::projective::twisted_characters;
use crate::cocycle::{Cochain2, Qz};
use crate::cyclotomic::{Coefficient, Cyclotomic, CyclotomicJson};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};

/// The group on pairs `(a, h)`, `a ∈ (1/n)Z/Z`, with
/// `(a,h)(b,k) = (a + b + θ(h,k), hk)`.
///
/// Element `(i/n, h)` has index `i·|H| + local(h)`. The Cayley table is only
/// built on request.
#[derive(Debug, Clone)]
pub struct CentralExtension {
    pub base: Subgroup,
    pub theta: Cochain2,
    pub n: i64,
    total: OnceLock<Arc<FiniteGroup>>,
}

impl CentralExtension {
    /// Extension of the carrier subgroup of `theta` with `n` its value order.
    pub fn new(theta: &Cochain2) -> Result<Self> {
        Self::with_order(theta, theta.value_order())
    }

    /// Extension by `(1/n)Z/Z` for any multiple `n` of the value order.
    pub fn with_order(theta: &Cochain2, n: i64) -> Result<Self> {
        if n < 1 || n % theta.value_order() != 0 {
            return Err(Error::Internal(format!(
                "{n} is not a multiple of the value order {}",
                theta.value_order()
            )));
        }
        if let Some(w) = theta.cocycle_defect() {
            return Err(Error::NotCocycle(w.to_vec()));
        }
        if !theta.is_normalized() {
            return Err(Error::NotNormalized);
        }
        let base = theta.group().subgroup(theta.carrier())?;
        Ok(CentralExtension {
            base,
            theta: theta.clone(),
            n,
            total: OnceLock::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.n as usize * self.base.embedding.len()
    }

    /// `(a,h)(b,k)` with ambient `h, k`.
    pub fn mul(&self, (a, h): (Qz, usize), (b, k): (Qz, usize)) -> (Qz, usize) {
        (a + b + self.theta.get(h, k), self.theta.group().mul(h, k))
    }

    /// The extension as an abstract group, built and validated on first use.
    pub fn total(&self) -> Result<Arc<FiniteGroup>> {
        if let Some(t) = self.total.get() {
            return Ok(t.clone());
        }
        let m = self.base.embedding.len();
        let order = self.order();
        let mut table = vec![vec![0usize; order]; order];
        for (x, row) in table.iter_mut().enumerate() {
            let left = self.decompose(x);
            for (y, cell) in row.iter_mut().enumerate() {
                let (s, hk) = self.mul(left, self.decompose(y));
                let i = (s.numerator() * (self.n / s.denominator())) as usize;
                *cell = i * m + self.base.to_local(hk).expect("carrier is a subgroup");
            }
        }
        let total = Arc::new(FiniteGroup::from_table(table)?);
        Ok(self.total.get_or_init(|| total).clone())
    }

    /// `(a, h) ↦ h` into the carrier subgroup.
    pub fn projection(&self) -> Result<GroupHom> {
        let m = self.base.embedding.len();
        GroupHom::new(self.total()?, self.base.group.clone(), (0..self.order()).map(|x| x % m).collect())
    }

    /// Index of `(a, h)`; `h` is an ambient index.
    pub fn element(&self, a: Qz, h: usize) -> Result<usize> {
        if self.n % a.denominator() != 0 {
            return Err(Error::Internal(format!("{a} is not in (1/{})Z/Z", self.n)));
        }
        let local = self.base.to_local(h).ok_or(Error::NotInCarrier(h))?;
        let i = (a.numerator() * (self.n / a.denominator())) as usize;
        Ok(i * self.base.embedding.len() + local)
    }

    /// `(a, h)` with `h` ambient.
    pub fn decompose(&self, x: usize) -> (Qz, usize) {
        let m = self.base.embedding.len();
        (Qz::new((x / m) as i64, self.n), self.base.to_ambient(x % m))
    }

    /// The section `h ↦ (0, h)`.
    pub fn lift(&self, h: usize) -> Result<usize> {
        self.element(Qz::ZERO, h)
    }

    /// `(1/n, e)`
    pub fn central_generator(&self) -> usize {
        let e = self.theta.group().identity();
        self.element(Qz::new(1, self.n), e).expect("identity is in every subgroup")
    }

    /// Order of `(a, h)`, by repeated multiplication.
    pub fn element_order(&self, a: Qz, h: usize) -> Result<usize> {
        self.element(a, h)?;
        let e = (Qz::ZERO, self.theta.group().identity());
        let mut x = (a, h);
        let mut k = 1;
        while x != e {
            x = self.mul(x, (a, h));
            k += 1;
        }
        Ok(k)
    }
}

/// A θ-projective irreducible character, read through the section
/// `h ↦ (0, h)`; `values[i]` belongs to the i-th carrier element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveCharacter<T: Coefficient> {
    pub degree: u64,
    pub carrier: Vec<usize>,
    pub values: Vec<Cyclotomic<T>>,
}

impl<T: Coefficient> ProjectiveCharacter<T> {
    pub fn value(&self, h: usize) -> Option<&Cyclotomic<T>> {
        self.carrier.binary_search(&h).ok().map(|i| &self.values[i])
    }
}

/// Irreducible θ-projective characters of the carrier, computed in the
/// twisted group algebra, sorted by degree and values.
pub fn projective_irreps<T: Coefficient>(theta: &Cochain2) -> Result<Vec<ProjectiveCharacter<T>>> {
    CentralExtension::new(theta)?;
    twisted_characters(theta)
}

/// The same characters read off the character table of the extension:
/// rows on which `(1/n, e)` acts by `ζ_n`.
pub fn projective_irreps_via_extension<T: Coefficient>(theta: &Cochain2) -> Result<Vec<ProjectiveCharacter<T>>> {
    let ext = CentralExtension::new(theta)?;
    let table = CharacterTable::<T>::compute(ext.total()?)?;
    let mut rows = projective_rows(&ext, &table)?;
    rows.sort_by(|a, b| (a.degree, &a.values).cmp(&(b.degree, &b.values)));
    Ok(rows)
}

fn projective_rows<T: Coefficient>(
    ext: &CentralExtension,
    table: &CharacterTable<T>,
) -> Result<Vec<ProjectiveCharacter<T>>> {
    let z = ext.central_generator();
    let zeta = Cyclotomic::<T>::zeta(ext.n as u32, 1);
    let carrier = ext.theta.carrier().to_vec();
    let mut out = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let deg = T::from_u64(row.degree).expect("degree");
        if *table.value(i, z) != zeta.scale(&deg) {
            continue;
        }
        let values = carrier
            .iter()
            .map(|&h| ext.lift(h).map(|x| table.value(i, x).clone()))
            .collect::<Result<Vec<_>>>()?;
        out.push(ProjectiveCharacter {
            degree: row.degree,
            carrier: carrier.clone(),
            values,
        });
    }
    Ok(out)
}

/// An irreducible of `Λ_H(g)` (or its twisted version): a (projective)
/// irreducible of `H` together with the fractional q-degree `x` with
/// `λ(g) = deg·e^{2πix}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaIrrep<T: Coefficient> {
    pub character: ProjectiveCharacter<T>,
    pub q_degree: Qz,
    pub sigma_scalar: Cyclotomic<T>,
}

/// The graded basis of the representation ring of `Λ_H(g)`.
#[derive(Debug, Clone)]
pub struct GradedRepModule<T: Coefficient> {
    pub group: Arc<FiniteGroup>,
    pub g: usize,
    /// Elements of `H`, ascending.
    pub subgroup: Vec<usize>,
    pub twist: Option<Cochain2>,
    pub basis: Vec<LambdaIrrep<T>>,
    /// Every `q_degree` has denominator dividing this.
    pub big_n: i64,
}

fn scalar_degree<T: Coefficient>(value: &Cyclotomic<T>, degree: u64) -> Result<(Qz, Cyclotomic<T>)> {
    let deg = T::from_u64(degree).expect("degree");
    let scalar = value.scale(&(T::one() / deg));
    let x = scalar
        .as_root_of_unity()
        .ok_or_else(|| Error::Internal(format!("{value} is not a degree times a root of unity")))?;
    Ok((x, scalar))
}

/// `lambda_basis` over `C_G(g)`.
pub fn lambda_basis<T: Coefficient>(
    group: &Arc<FiniteGroup>,
    g: usize,
    theta: Option<&Cochain2>,
) -> Result<GradedRepModule<T>> {
    let h = group.centralizer(&[g]);
    lambda_basis_on(group, &h, g, theta)
}

/// Graded irreducibles of `Λ_H(g)` for a subgroup `H` containing `g` in its
/// centre. A twist must be a 2-cocycle carried exactly by `H`.
pub fn lambda_basis_on<T: Coefficient>(
    group: &Arc<FiniteGroup>,
    subgroup: &[usize],
    g: usize,
    theta: Option<&Cochain2>,
) -> Result<GradedRepModule<T>> {
    let mut subgroup = subgroup.to_vec();
    subgroup.sort_unstable();
    if subgroup.binary_search(&g).is_err() || subgroup.iter().any(|&k| !group.commute(g, k)) {
        return Err(Error::Internal(format!("{g} is not central in the given subgroup")));
    }
    let (characters, lift_g, big_n) = match theta {
        None => {
            let sub = group.subgroup(&subgroup)?;
            let table = CharacterTable::<T>::compute(sub.group.clone())?;
            let chars: Vec<ProjectiveCharacter<T>> = table
                .rows
                .iter()
                .enumerate()
                .map(|(i, row)| ProjectiveCharacter {
                    degree: row.degree,
                    carrier: subgroup.clone(),
                    values: (0..subgroup.len()).map(|l| table.value(i, l).clone()).collect(),
                })
                .collect();
            (chars, g, group.element_order(g) as i64)
        }
        Some(theta) => {
            if theta.carrier() != subgroup.as_slice() || **theta.group() != **group {
                return Err(Error::GroupMismatch);
            }
            let ext = CentralExtension::new(theta)?;
            let chars = twisted_characters(theta)?;
            let n = ext.element_order(Qz::ZERO, g)? as i64;
            (chars, g, n)
        }
    };
    let mut basis = Vec::with_capacity(characters.len());
    for ch in characters {
        let v = ch.value(lift_g).expect("g lies in the subgroup").clone();
        let (x, sigma_scalar) = scalar_degree(&v, ch.degree)?;
        if big_n % x.denominator() != 0 {
            return Err(Error::Internal(format!("degree {x} does not divide N = {big_n}")));
        }
        basis.push(LambdaIrrep {
            character: ch,
            q_degree: x,
            sigma_scalar,
        });
    }
    Ok(GradedRepModule {
        group: group.clone(),
        g,
        subgroup,
        twist: theta.cloned(),
        basis,
        big_n,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaIrrepJson {
    pub degree: u64,
    pub q_degree: Qz,
    pub values: Vec<CyclotomicJson>,
}

impl<T: Coefficient> LambdaIrrep<T> {
    pub fn to_json(&self) -> LambdaIrrepJson {
        LambdaIrrepJson {
            degree: self.character.degree,
            q_degree: self.q_degree,
            values: self.character.values.iter().map(|v| v.to_json()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::Cochain3;
    use num_rational::Rational64;

    type C = Cyclotomic<Rational64>;

    fn z2_half() -> Cochain2 {
        let g = Arc::new(FiniteGroup::cyclic(2));
        Cochain2::from_fn(g, vec![0, 1], |a, b| {
            if (a, b) == (1, 1) {
                Qz::new(1, 2)
            } else {
                Qz::ZERO
            }
        })
    }

    #[test]
    fn split_extension_is_klein() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let zero = Cochain2::zero(g, vec![0, 1]);
        let ext = CentralExtension::new(&zero).unwrap();
        assert_eq!(ext.total().unwrap().order(), 2);
        assert_eq!(ext.element_order(Qz::ZERO, 1).unwrap(), 2);
        let wide = CentralExtension::with_order(&zero, 2).unwrap();
        assert_eq!(wide.total().unwrap().order(), 4);
        let t = wide.total().unwrap();
        assert!(t.elements().all(|x| t.element_order(x) <= 2));
        assert_eq!(wide.element_order(Qz::ZERO, 1).unwrap(), 2);
    }

    #[test]
    fn nonsplit_extension_is_cyclic_of_order_four() {
        let ext = CentralExtension::new(&z2_half()).unwrap();
        assert_eq!(ext.total().unwrap().order(), 4);
        assert!(ext.total().unwrap().is_abelian());
        assert_eq!(ext.element_order(Qz::ZERO, 1).unwrap(), 4);
    }

    #[test]
    fn projective_irreps_of_z2_take_values_plus_minus_i() {
        let irreps = projective_irreps::<Rational64>(&z2_half()).unwrap();
        assert_eq!(irreps.len(), 2);
        let mut at_one: Vec<C> = irreps.iter().map(|c| c.value(1).unwrap().clone()).collect();
        at_one.sort();
        let mut expected = vec![C::zeta(4, 1), C::zeta(4, 3)];
        expected.sort();
        assert_eq!(at_one, expected);
    }

    #[test]
    fn lambda_basis_of_z2() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let m = lambda_basis::<Rational64>(&g, 1, None).unwrap();
        let degrees: Vec<Qz> = m.basis.iter().map(|b| b.q_degree).collect();
        assert_eq!(degrees, vec![Qz::ZERO, Qz::new(1, 2)]);
        assert_eq!(m.big_n, 2);
        let m0 = lambda_basis::<Rational64>(&g, 0, None).unwrap();
        assert!(m0.basis.iter().all(|b| b.q_degree.is_zero()));

        let theta = Cochain3::cyclic(2, 1).unwrap().transgress(1).unwrap();
        let tw = lambda_basis::<Rational64>(&g, 1, Some(&theta)).unwrap();
        let mut degrees: Vec<Qz> = tw.basis.iter().map(|b| b.q_degree).collect();
        degrees.sort();
        assert_eq!(degrees, vec![Qz::new(1, 4), Qz::new(3, 4)]);
        assert_eq!(tw.big_n, 4);
    }
}
