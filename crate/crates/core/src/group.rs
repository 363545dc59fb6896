//! Finite groups given by dense multiplication tables.
//!
//! Elements are indices `0..order`. Every other module reaches the group
//! law through [`FiniteGroup::mul`], so the representation is the only
//! thing that needs validating.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest group order accepted by the constructors.
pub const DEFAULT_SIZE_BOUND: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// A conjugacy class: the least member is the representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table (`table[g][h] = g·h`).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        if order == 0 || order > DEFAULT_SIZE_BOUND {
            return Err(Error::TableShape);
        }
        if table.iter().any(|row| row.len() != order || row.iter().any(|&x| x >= order)) {
            return Err(Error::TableShape);
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        Self::from_flat(order, flat, None)
    }

    fn from_flat(order: usize, table: Vec<usize>, labels: Option<Vec<String>>) -> Result<Self> {
        let at = |g: usize, h: usize| table[g * order + h];
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or(Error::MissingIdentity)?;
        let mut inverses = Vec::with_capacity(order);
        for g in 0..order {
            let inv = (0..order)
                .find(|&h| at(g, h) == identity && at(h, g) == identity)
                .ok_or(Error::MissingInverse(g))?;
            inverses.push(inv);
        }
        for g in 0..order {
            for h in 0..order {
                let gh = at(g, h);
                for k in 0..order {
                    if at(gh, k) != at(g, at(h, k)) {
                        return Err(Error::NonAssociative(g, h, k));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverses,
            labels,
        })
    }

    /// Closes a set of permutations of `0..degree` under composition.
    ///
    /// The product `p·q` applies `p` first, so the group acts on points from
    /// the right. Elements are indexed in lexicographic order of their
    /// images, which puts the identity at index 0.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>], bound: usize) -> Result<Self> {
        for g in gens {
            if g.len() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "length {} differs from degree {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidPermutation(format!("{g:?} is not a bijection")));
                }
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        found.insert(identity.clone());
        queue.push_back(identity);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let next = compose(&p, g);
                if found.insert(next.clone()) {
                    if found.len() > bound {
                        return Err(Error::ClosureTooLarge(bound));
                    }
                    queue.push_back(next);
                }
            }
        }
        let elements: Vec<Vec<usize>> = found.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let order = elements.len();
        let mut table = Vec::with_capacity(order * order);
        for p in &elements {
            for q in &elements {
                table.push(index[&compose(p, q)]);
            }
        }
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Self::from_flat(order, table, Some(labels))
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    /// Z/n with element `i` the residue `i`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let table = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        FiniteGroup {
            order: n,
            table,
            identity: 0,
            inverses: (0..n).map(|a| (n - a) % n).collect(),
            labels: Some(labels),
        }
    }

    /// Dihedral group of order `2n`; element `i + n·j` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let order = 2 * n;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (a, b) = (x % n, x / n);
            for y in 0..order {
                let (c, d) = (y % n, y / n);
                // r^a s^b r^c s^d = r^(a ± c) s^(b+d)
                let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                table.push(rot + n * ((b + d) % 2));
            }
        }
        let labels = (0..order)
            .map(|x| match (x % n, x / n) {
                (0, 0) => "e".to_string(),
                (a, 0) => format!("r{a}"),
                (0, _) => "s".to_string(),
                (a, _) => format!("r{a}s"),
            })
            .collect();
        Self::from_flat(order, table, Some(labels)).expect("dihedral table is a group")
    }

    /// Quaternion group; index `4·sign + unit` with units `1, i, j, k`.
    pub fn quaternion() -> Self {
        // unit products: (unit, sign flip)
        const PROD: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        let mut table = Vec::with_capacity(64);
        for x in 0..8 {
            for y in 0..8 {
                let (u, flip) = PROD[x % 4][y % 4];
                let sign = (x / 4 + y / 4 + flip) % 2;
                table.push(4 * sign + u);
            }
        }
        let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::from_flat(8, table, Some(labels)).expect("quaternion table is a group")
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::UnknownBuiltin(format!("S{n}")));
        }
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            gens.push(swap);
            gens.push(cycle);
        }
        Self::from_permutations(n, &gens, DEFAULT_SIZE_BOUND)
    }

    pub fn alternating(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::UnknownBuiltin(format!("A{n}")));
        }
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        Self::from_permutations(n, &gens, DEFAULT_SIZE_BOUND)
    }

    /// Direct product; the pair `(a, b)` has index `a·|H| + b`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let order = g.order * h.order;
        if order > DEFAULT_SIZE_BOUND {
            return Err(Error::ClosureTooLarge(DEFAULT_SIZE_BOUND));
        }
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (a, b) = (x / h.order, x % h.order);
            for y in 0..order {
                let (c, d) = (y / h.order, y % h.order);
                table.push(g.mul(a, c) * h.order + h.mul(b, d));
            }
        }
        let labels = (0..order)
            .map(|x| format!("({},{})", g.label(x / h.order), h.label(x % h.order)))
            .collect();
        Ok(FiniteGroup {
            order,
            table,
            identity: g.identity * h.order + h.identity,
            inverses: (0..order)
                .map(|x| g.inv(x / h.order) * h.order + h.inv(x % h.order))
                .collect(),
            labels: Some(labels),
        })
    }

    /// Parses builtin names: `Z<n>`/`C<n>`, `D<n>` (order 2n), `S<n>`, `A<n>`
    /// (n ≤ 5), `Q8`, `V4`, `1`, and `x`-separated products such as `Z2xZ2`.
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.trim();
        if name.contains('x') {
            let mut factors = name.split('x').map(Self::builtin);
            let first = factors.next().ok_or_else(|| Error::UnknownBuiltin(name.into()))??;
            return factors.try_fold(first, |acc, f| Self::direct_product(&acc, &f?));
        }
        let unknown = || Error::UnknownBuiltin(name.to_string());
        match name {
            "1" | "trivial" => return Ok(Self::trivial()),
            "Q8" => return Ok(Self::quaternion()),
            "V4" => return Self::builtin("Z2xZ2"),
            _ => {}
        }
        let (head, tail) = name.split_at(1);
        let n: usize = tail.parse().map_err(|_| unknown())?;
        if n == 0 || n > DEFAULT_SIZE_BOUND {
            return Err(unknown());
        }
        match head {
            "Z" | "C" => Ok(Self::cyclic(n)),
            "D" if 2 * n <= DEFAULT_SIZE_BOUND => Ok(Self::dihedral(n)),
            "S" => Self::symmetric(n),
            "A" => Self::alternating(n),
            _ => Err(unknown()),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// `k⁻¹ g k`
    #[inline]
    pub fn conj(&self, g: usize, k: usize) -> usize {
        self.mul(self.inv(k), self.mul(g, k))
    }

    pub fn pow(&self, g: usize, e: i64) -> usize {
        let l = self.element_order(g) as i64;
        let e = e.rem_euclid(l);
        (0..e).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut l = 1;
        while x != self.identity {
            x = self.mul(x, g);
            l += 1;
        }
        l
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, g| num_integer::lcm(acc, self.element_order(g)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        self.labels
            .as_ref()
            .map(|l| l[g].clone())
            .unwrap_or_else(|| g.to_string())
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|g| self.elements().all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    pub fn commute(&self, g: usize, h: usize) -> bool {
        self.mul(g, h) == self.mul(h, g)
    }

    /// Conjugacy classes ordered by representative, each the least member.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            let members: BTreeSet<usize> = self.elements().map(|k| self.conj(g, k)).collect();
            for &m in &members {
                seen[m] = true;
            }
            classes.push(ConjugacyClass {
                representative: g,
                members: members.into_iter().collect(),
            });
        }
        classes
    }

    /// For each element, the index of its class in [`Self::conjugacy_classes`].
    pub fn class_map(&self, classes: &[ConjugacyClass]) -> Vec<usize> {
        let mut map = vec![0; self.order];
        for (i, c) in classes.iter().enumerate() {
            for &m in &c.members {
                map[m] = i;
            }
        }
        map
    }

    /// Elements commuting with every entry of `elems`, ascending.
    pub fn centralizer(&self, elems: &[usize]) -> Vec<usize> {
        self.elements()
            .filter(|&k| elems.iter().all(|&e| self.commute(k, e)))
            .collect()
    }

    /// The subgroup on `elems` as a standalone group, local index `i`
    /// standing for `elems[i]`. `elems` must be closed under the product.
    pub fn subgroup(&self, elems: &[usize]) -> Result<Subgroup> {
        let mut local = vec![usize::MAX; self.order];
        for (i, &g) in elems.iter().enumerate() {
            local[g] = i;
        }
        let m = elems.len();
        let mut table = Vec::with_capacity(m * m);
        for &g in elems {
            for &h in elems {
                let l = local[self.mul(g, h)];
                if l == usize::MAX {
                    return Err(Error::Internal(format!(
                        "subset is not closed: {g}·{h} missing"
                    )));
                }
                table.push(l);
            }
        }
        let labels = elems.iter().map(|&g| self.label(g)).collect();
        let group = Self::from_flat(m, table, Some(labels))?;
        Ok(Subgroup {
            group: Arc::new(group),
            embedding: elems.to_vec(),
            local,
        })
    }
}

/// A subgroup realized as its own [`FiniteGroup`] together with the
/// embedding into the ambient group.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: Arc<FiniteGroup>,
    pub embedding: Vec<usize>,
    local: Vec<usize>,
}

impl Subgroup {
    pub fn to_local(&self, ambient: usize) -> Option<usize> {
        match self.local.get(ambient) {
            Some(&l) if l != usize::MAX => Some(l),
            _ => None,
        }
    }

    pub fn to_ambient(&self, local: usize) -> usize {
        self.embedding[local]
    }
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&x| q[x]).collect()
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        let body: Vec<String> = cycle.iter().map(|c| (c + 1).to_string()).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// A homomorphism given by its values on domain indices.
#[derive(Debug, Clone)]
pub struct GroupHom {
    pub domain: Arc<FiniteGroup>,
    pub codomain: Arc<FiniteGroup>,
    image: Vec<usize>,
}

impl GroupHom {
    pub fn new(domain: Arc<FiniteGroup>, codomain: Arc<FiniteGroup>, image: Vec<usize>) -> Result<Self> {
        if image.len() != domain.order() || image.iter().any(|&x| x >= codomain.order()) {
            return Err(Error::schema("image", "length or range mismatch"));
        }
        for g in domain.elements() {
            for h in domain.elements() {
                if image[domain.mul(g, h)] != codomain.mul(image[g], image[h]) {
                    return Err(Error::NotHomomorphism(g, h));
                }
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            image,
        })
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let image = group.elements().collect();
        GroupHom {
            domain: group.clone(),
            codomain: group,
            image,
        }
    }

    pub fn trivial(domain: Arc<FiniteGroup>, codomain: Arc<FiniteGroup>) -> Self {
        let image = vec![codomain.identity(); domain.order()];
        GroupHom {
            domain,
            codomain,
            image,
        }
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.image[g]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Full preimage of a subset of the codomain, ascending.
    pub fn preimage(&self, subset: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.codomain.order()];
        for &s in subset {
            mark[s] = true;
        }
        self.domain.elements().filter(|&g| mark[self.image[g]]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_table_is_forced() {
        let g = FiniteGroup::cyclic(2);
        assert_eq!(g.table_rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(FiniteGroup::builtin("Z2").unwrap(), g);
    }

    #[test]
    fn rejects_non_associative_table() {
        // identity 0 and involutions 1, 2, but (1·1)·2 ≠ 1·(1·2)
        let t = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 2, 0]];
        assert_eq!(FiniteGroup::from_table(t), Err(Error::NonAssociative(1, 1, 2)));
        let t = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]];
        assert_eq!(FiniteGroup::from_table(t), Err(Error::MissingInverse(1)));
    }

    #[test]
    fn rejects_missing_identity() {
        let t = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(FiniteGroup::from_table(t).unwrap().identity(), 1);
        let t = vec![vec![1, 1], vec![1, 1]];
        assert_eq!(FiniteGroup::from_table(t), Err(Error::MissingIdentity));
    }

    #[test]
    fn closure_bound_is_enforced() {
        let gens = vec![vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]];
        assert_eq!(
            FiniteGroup::from_permutations(5, &gens, 100),
            Err(Error::ClosureTooLarge(100))
        );
        assert_eq!(FiniteGroup::from_permutations(5, &gens, 500).unwrap().order(), 120);
    }

    #[test]
    fn builtin_orders() {
        for (name, order) in [
            ("1", 1),
            ("Z7", 7),
            ("D4", 8),
            ("D3", 6),
            ("S3", 6),
            ("S4", 24),
            ("A4", 12),
            ("A5", 60),
            ("Q8", 8),
            ("Z2xZ2", 4),
            ("Z2xZ3xZ2", 12),
        ] {
            assert_eq!(FiniteGroup::builtin(name).unwrap().order(), order, "{name}");
        }
        assert!(FiniteGroup::builtin("S6").is_err());
        assert!(FiniteGroup::builtin("foo").is_err());
    }

    #[test]
    fn class_counts_match_brute_force() {
        // brute force: count classes by orbit-of-conjugation union-find
        for (name, expected) in [("Z2", 2), ("S3", 3), ("Q8", 5), ("D4", 5), ("S4", 5), ("A4", 4)] {
            let g = FiniteGroup::builtin(name).unwrap();
            assert_eq!(g.conjugacy_classes().len(), expected, "{name}");
        }
        let s3 = FiniteGroup::builtin("S3").unwrap();
        let mut sizes: Vec<usize> = s3.conjugacy_classes().iter().map(|c| c.members.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn centralizers_in_s3() {
        let s3 = FiniteGroup::builtin("S3").unwrap();
        let t = (0..6).find(|&g| s3.element_order(g) == 2).unwrap();
        let c = (0..6).find(|&g| s3.element_order(g) == 3).unwrap();
        assert_eq!(s3.centralizer(&[t]).len(), 2);
        assert_eq!(s3.centralizer(&[s3.identity()]), (0..6).collect::<Vec<_>>());
        assert_eq!(s3.centralizer(&[c, t]), vec![s3.identity()]);
        assert_eq!(s3.element_order(s3.identity()), 1);
        assert_eq!(s3.element_order(t), 2);
        assert_eq!(s3.element_order(c), 3);
    }

    #[test]
    fn homomorphism_validation() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        assert!(GroupHom::new(z2.clone(), z4.clone(), vec![0, 2]).is_ok());
        assert!(GroupHom::new(z2.clone(), z4.clone(), vec![0, 1]).is_err());
        let f = GroupHom::new(z4, z2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(f.preimage(&[0]), vec![0, 2]);
    }

    #[test]
    fn subgroup_round_trip() {
        let s3 = FiniteGroup::builtin("S3").unwrap();
        let t = (0..6).find(|&g| s3.element_order(g) == 2).unwrap();
        let c = s3.centralizer(&[t]);
        let sub = s3.subgroup(&c).unwrap();
        assert_eq!(sub.group.order(), 2);
        for l in 0..2 {
            assert_eq!(sub.to_local(sub.to_ambient(l)), Some(l));
        }
    }
}
