//! Finite sets with a right group action.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom};

/// `action[x][g] = x·g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    action: Vec<Vec<usize>>,
}

/// Wire form of a G-set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetJson {
    pub size: usize,
    pub action: Vec<Vec<usize>>,
}

impl GSet {
    pub fn new(group: Arc<FiniteGroup>, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = action.len();
        for (x, row) in action.iter().enumerate() {
            if row.len() != group.order() {
                return Err(Error::InvalidGSet(format!("row {x} has {} entries, expected {}", row.len(), group.order())));
            }
            if let Some(g) = row.iter().position(|&y| y >= n) {
                return Err(Error::InvalidGSet(format!("action[{x}][{g}] = {} is out of range", row[g])));
            }
            if row[group.identity()] != x {
                return Err(Error::InvalidGSet(format!("identity moves point {x}")));
            }
        }
        for (x, row) in action.iter().enumerate() {
            for g in group.elements() {
                for h in group.elements() {
                    if action[row[g]][h] != row[group.mul(g, h)] {
                        return Err(Error::InvalidGSet(format!("(x·g)·h ≠ x·(gh) at x={x}, g={g}, h={h}")));
                    }
                }
            }
        }
        Ok(GSet { group, action })
    }

    pub fn point(group: Arc<FiniteGroup>) -> Self {
        Self::trivial(group, 1)
    }

    /// `n` points, each fixed by everything.
    pub fn trivial(group: Arc<FiniteGroup>, n: usize) -> Self {
        let action = (0..n).map(|x| vec![x; group.order()]).collect();
        GSet { group, action }
    }

    /// `G` acting on itself by right multiplication.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let action = group
            .elements()
            .map(|x| group.elements().map(|g| group.mul(x, g)).collect())
            .collect();
        GSet { group, action }
    }

    pub fn from_json(group: Arc<FiniteGroup>, j: &GSetJson) -> Result<Self> {
        if j.size != j.action.len() {
            return Err(Error::schema("size", format!("size {} but {} action rows", j.size, j.action.len())));
        }
        Self::new(group, j.action.clone())
    }

    pub fn to_json(&self) -> GSetJson {
        GSetJson {
            size: self.size(),
            action: self.action.clone(),
        }
    }

    /// `X ⊔ Y`, the points of `Y` following those of `X`.
    pub fn disjoint_union(&self, other: &GSet) -> Result<GSet> {
        if *self.group != *other.group {
            return Err(Error::GroupMismatch);
        }
        let shift = self.size();
        let mut action = self.action.clone();
        action.extend(other.action.iter().map(|row| row.iter().map(|y| y + shift).collect()));
        Ok(GSet {
            group: self.group.clone(),
            action,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.action.len()
    }

    #[inline]
    pub fn act(&self, x: usize, g: usize) -> usize {
        self.action[x][g]
    }

    /// Points fixed by every listed element, ascending.
    pub fn fixed_points(&self, elems: &[usize]) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| elems.iter().all(|&g| self.act(x, g) == x))
            .collect()
    }

    /// Orbits of `points` (assumed stable) under the subgroup `elems`, each
    /// listed ascending with its least point first; orbits ordered by that
    /// point.
    pub fn orbits(&self, points: &[usize], elems: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for &x in points {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = elems.iter().map(|&g| self.act(x, g)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Elements of `elems` fixing `x`, ascending.
    pub fn stabilizer(&self, x: usize, elems: &[usize]) -> Vec<usize> {
        let mut s: Vec<usize> = elems.iter().copied().filter(|&g| self.act(x, g) == x).collect();
        s.sort_unstable();
        s
    }

    /// Some `g ∈ elems` with `x·g = y`.
    pub fn transporter(&self, x: usize, y: usize, elems: &[usize]) -> Option<usize> {
        elems.iter().copied().find(|&g| self.act(x, g) == y)
    }
}

/// A map of sets `φ: X → Y` over a homomorphism `f`, with
/// `φ(x·g) = φ(x)·f(g)`.
#[derive(Debug, Clone)]
pub struct EquivariantMap {
    pub hom: GroupHom,
    pub source: GSet,
    pub target: GSet,
    map: Vec<usize>,
}

impl EquivariantMap {
    pub fn new(hom: GroupHom, source: GSet, target: GSet, map: Vec<usize>) -> Result<Self> {
        if *source.group != *hom.domain || *target.group != *hom.codomain {
            return Err(Error::GroupMismatch);
        }
        if map.len() != source.size() || map.iter().any(|&y| y >= target.size()) {
            return Err(Error::InvalidGSet("point map has the wrong length or range".into()));
        }
        for x in 0..source.size() {
            for g in source.group.elements() {
                if map[source.act(x, g)] != target.act(map[x], hom.apply(g)) {
                    return Err(Error::NotEquivariant { point: x, element: g });
                }
            }
        }
        Ok(EquivariantMap {
            hom,
            source,
            target,
            map,
        })
    }

    /// The identity map of `X` over the identity of `G`.
    pub fn identity(x: GSet) -> Self {
        let map = (0..x.size()).collect();
        EquivariantMap {
            hom: GroupHom::identity(x.group.clone()),
            source: x.clone(),
            target: x,
            map,
        }
    }

    /// `X → pt` over `f`.
    pub fn to_point(hom: GroupHom, source: GSet) -> Result<Self> {
        let target = GSet::point(hom.codomain.clone());
        let map = vec![0; source.size()];
        Self::new(hom, source, target, map)
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points_examples() {
        let g = Arc::new(FiniteGroup::builtin("S3").unwrap());
        let reg = GSet::regular(g.clone());
        assert!(reg.fixed_points(&[1]).is_empty());
        assert_eq!(GSet::point(g).fixed_points(&[1, 2]), vec![0]);
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let swap = GSet::new(z2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(swap.fixed_points(&[1]).is_empty());
        assert_eq!(swap.fixed_points(&[0]), vec![0, 1]);
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        assert!(GSet::new(z2.clone(), vec![vec![0, 2], vec![1, 0]]).is_err());
        assert!(GSet::new(z2.clone(), vec![vec![1, 0], vec![0, 1]]).is_err());
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        // a "swap" is not a Z/3 action
        assert!(GSet::new(z3, vec![vec![0, 1, 1], vec![1, 0, 0]]).is_err());
    }

    #[test]
    fn equivariance_is_checked() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let swap = GSet::new(z2.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let two = GSet::trivial(z2.clone(), 2);
        let id = GroupHom::identity(z2);
        assert!(EquivariantMap::new(id.clone(), swap.clone(), two.clone(), vec![0, 1]).is_err());
        assert!(EquivariantMap::new(id, swap, two, vec![1, 1]).is_ok());
    }
}
