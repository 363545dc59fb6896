//! Commuting pairs and the right actions of `G` and `SL2(Z)` on them.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CommutingPair {
    pub g: usize,
    pub h: usize,
}

impl CommutingPair {
    pub fn new(group: &FiniteGroup, g: usize, h: usize) -> Result<Self> {
        if !group.commute(g, h) {
            return Err(Error::NotCommuting(g, h));
        }
        Ok(CommutingPair { g, h })
    }

    /// `(k⁻¹gk, k⁻¹hk)`
    pub fn conjugate(self, group: &FiniteGroup, k: usize) -> Self {
        CommutingPair {
            g: group.conj(self.g, k),
            h: group.conj(self.h, k),
        }
    }

    pub fn key(self) -> String {
        format!("({},{})", self.g, self.h)
    }
}

impl fmt::Display for CommutingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.g, self.h)
    }
}

/// An integer matrix `(a, b; c, d)` with determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sl2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2Matrix {
    pub const IDENTITY: Sl2Matrix = Sl2Matrix { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Sl2Matrix = Sl2Matrix { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Sl2Matrix = Sl2Matrix { a: 1, b: 1, c: 0, d: 1 };
    pub const MINUS_IDENTITY: Sl2Matrix = Sl2Matrix { a: -1, b: 0, c: 0, d: -1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::NotUnimodular(a, b, c, d));
        }
        Ok(Sl2Matrix { a, b, c, d })
    }

    pub fn inverse(self) -> Self {
        Sl2Matrix {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn pow(self, e: u32) -> Self {
        (0..e).fold(Self::IDENTITY, |acc, _| acc * self)
    }

    /// Any matrix with bottom row `(c, d)`; requires `gcd(c, d) = 1`.
    pub fn with_bottom_row(c: i64, d: i64) -> Result<Self> {
        let (g, x, y) = ext_gcd(c, d);
        if g.abs() != 1 {
            return Err(Error::NotUnimodular(0, 0, c, d));
        }
        // x·c + y·d = g, so (a, b) = (y, −x)·g gives a·d − b·c = 1
        Sl2Matrix::new(y * g, -x * g, c, d)
    }
}

impl Mul for Sl2Matrix {
    type Output = Sl2Matrix;

    fn mul(self, o: Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl fmt::Display for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// All ordered commuting pairs in lexicographic order.
pub fn commuting_pairs(group: &FiniteGroup) -> Vec<CommutingPair> {
    let mut out = Vec::new();
    for g in group.elements() {
        for h in group.elements() {
            if group.commute(g, h) {
                out.push(CommutingPair { g, h });
            }
        }
    }
    out
}

/// `(g, h)·A = (g^d h^{−b}, g^{−c} h^a)`; a right action.
pub fn sl2_act_pair(group: &FiniteGroup, m: Sl2Matrix, p: CommutingPair) -> CommutingPair {
    CommutingPair {
        g: group.mul(group.pow(p.g, m.d), group.pow(p.h, -m.b)),
        h: group.mul(group.pow(p.g, -m.c), group.pow(p.h, m.a)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitAction {
    Conjugation,
    ConjugationAndSl2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOrbit {
    pub representative: CommutingPair,
    pub members: Vec<CommutingPair>,
    /// `C_G(g, h)` of the representative.
    pub stabilizer: Vec<usize>,
}

/// Orbit partition of the commuting pairs, ordered by representative.
pub fn pair_orbits(group: &FiniteGroup, action: OrbitAction) -> Vec<PairOrbit> {
    let pairs = commuting_pairs(group);
    let mut seen: BTreeSet<CommutingPair> = BTreeSet::new();
    let mut orbits = Vec::new();
    for &start in &pairs {
        if seen.contains(&start) {
            continue;
        }
        let mut members = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let mut next: Vec<CommutingPair> =
                group.elements().map(|k| p.conjugate(group, k)).collect();
            if action == OrbitAction::ConjugationAndSl2 {
                next.push(sl2_act_pair(group, Sl2Matrix::S, p));
                next.push(sl2_act_pair(group, Sl2Matrix::T, p));
            }
            for q in next {
                if members.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        seen.extend(members.iter().copied());
        let members: Vec<CommutingPair> = members.into_iter().collect();
        let representative = members[0];
        orbits.push(PairOrbit {
            representative,
            stabilizer: group.centralizer(&[representative.g, representative.h]),
            members,
        });
    }
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_counts() {
        assert_eq!(commuting_pairs(&FiniteGroup::cyclic(2)).len(), 4);
        assert_eq!(commuting_pairs(&FiniteGroup::trivial()).len(), 1);
        let s3 = FiniteGroup::builtin("S3").unwrap();
        let brute: usize = s3.elements().map(|g| s3.centralizer(&[g]).len()).sum();
        assert_eq!(brute, 18);
        assert_eq!(commuting_pairs(&s3).len(), 18);
    }

    #[test]
    fn generators_act_as_stated() {
        let q8 = FiniteGroup::quaternion();
        for p in commuting_pairs(&q8) {
            assert_eq!(sl2_act_pair(&q8, Sl2Matrix::IDENTITY, p), p);
            let s = sl2_act_pair(&q8, Sl2Matrix::S, p);
            assert_eq!(s, CommutingPair { g: p.h, h: q8.inv(p.g) });
            let t = sl2_act_pair(&q8, Sl2Matrix::T, p);
            assert_eq!(t, CommutingPair { g: q8.mul(p.g, q8.inv(p.h)), h: p.h });
        }
    }

    #[test]
    fn orbit_counts() {
        let z2 = FiniteGroup::cyclic(2);
        let conj = pair_orbits(&z2, OrbitAction::Conjugation);
        assert_eq!(conj.len(), 4);
        assert!(conj.iter().all(|o| o.members.len() == 1));
        let full = pair_orbits(&z2, OrbitAction::ConjugationAndSl2);
        assert_eq!(full.len(), 2);
        assert_eq!(full[0].members, vec![CommutingPair { g: 0, h: 0 }]);
        assert_eq!(full[1].members.len(), 3);

        let s3 = FiniteGroup::builtin("S3").unwrap();
        let conj = pair_orbits(&s3, OrbitAction::Conjugation);
        // Σ over classes [g] of #classes(C_G(g))
        let expected: usize = s3
            .conjugacy_classes()
            .iter()
            .map(|c| {
                let cent = s3.centralizer(&[c.representative]);
                s3.subgroup(&cent).unwrap().group.conjugacy_classes().len()
            })
            .sum();
        assert_eq!(expected, 8);
        assert_eq!(conj.len(), 8);
    }

    #[test]
    fn bottom_row_completion() {
        for (c, d) in [(0, 1), (1, 0), (3, 5), (-2, 7), (5, -3)] {
            let m = Sl2Matrix::with_bottom_row(c, d).unwrap();
            assert_eq!((m.c, m.d), (c, d));
        }
        assert!(Sl2Matrix::with_bottom_row(2, 4).is_err());
    }
}
