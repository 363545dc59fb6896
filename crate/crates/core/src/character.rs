//! Exact character tables by Dixon's modular method.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{Coefficient, Cyclotomic, CyclotomicJson};
use crate::error::{Error, Result};
use crate::group::{ConjugacyClass, FiniteGroup};

/// Primes are searched below this bound.
pub const PRIME_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character<T: Coefficient> {
    pub degree: u64,
    /// One value per conjugacy class, in class order.
    pub values: Vec<Cyclotomic<T>>,
}

#[derive(Debug, Clone)]
pub struct CharacterTable<T: Coefficient> {
    pub group: Arc<FiniteGroup>,
    pub classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    pub rows: Vec<Character<T>>,
}

impl<T: Coefficient> CharacterTable<T> {
    pub fn compute(group: Arc<FiniteGroup>) -> Result<Self> {
        let classes = group.conjugacy_classes();
        let class_of = group.class_map(&classes);
        let rows = dixon(&group, &classes, &class_of)?;
        let table = CharacterTable {
            group,
            classes,
            class_of,
            rows,
        };
        if !table.is_orthonormal() {
            return Err(Error::Internal("character table fails orthogonality".into()));
        }
        Ok(table)
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    /// `χ_row(g)`
    pub fn value(&self, row: usize, g: usize) -> &Cyclotomic<T> {
        &self.rows[row].values[self.class_of[g]]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(1/|G|) Σ_g a(g)·conj(b(g))` for class functions in class order.
    pub fn inner_product(&self, a: &[Cyclotomic<T>], b: &[Cyclotomic<T>]) -> Cyclotomic<T> {
        let total: Cyclotomic<T> = self
            .classes
            .iter()
            .zip(a.iter().zip(b))
            .map(|(c, (x, y))| {
                let h = T::from_usize(c.members.len()).expect("class size");
                (x * &y.conj()).scale(&h)
            })
            .sum();
        let n = T::from_usize(self.group.order()).expect("group order");
        total.scale(&(T::one() / n))
    }

    /// Row and column orthogonality, exactly.
    pub fn is_orthonormal(&self) -> bool {
        let r = self.classes.len();
        if self.rows.len() != r {
            return false;
        }
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in self.rows.iter().enumerate() {
                let expected = Cyclotomic::from_i64((i == j) as i64);
                if self.inner_product(&a.values, &b.values) != expected {
                    return false;
                }
            }
        }
        for k in 0..r {
            for l in 0..r {
                let s: Cyclotomic<T> = self
                    .rows
                    .iter()
                    .map(|row| &row.values[k] * &row.values[l].conj())
                    .sum();
                let expected = if k == l {
                    (self.group.order() / self.classes[k].members.len()) as i64
                } else {
                    0
                };
                if s != Cyclotomic::from_i64(expected) {
                    return false;
                }
            }
        }
        self.degree_square_sum() == self.group.order() as u64
    }

    pub fn degree_square_sum(&self) -> u64 {
        self.rows.iter().map(|r| r.degree * r.degree).sum()
    }

    pub fn to_json(&self) -> CharacterTableJson {
        CharacterTableJson {
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson {
                    representative: c.representative,
                    size: c.members.len(),
                })
                .collect(),
            rows: self
                .rows
                .iter()
                .map(|r| RowJson {
                    degree: r.degree,
                    values: r.values.iter().map(|v| v.to_json()).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassJson {
    pub representative: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowJson {
    pub degree: u64,
    pub values: Vec<CyclotomicJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterTableJson {
    pub classes: Vec<ClassJson>,
    pub rows: Vec<RowJson>,
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Primes `p ≡ 1 (mod e)` with `p² > 4|G|`, ascending.
pub(crate) fn candidate_primes(exponent: u64, order: u64) -> impl Iterator<Item = u64> {
    (1..)
        .map(move |k| k * exponent + 1)
        .take_while(|&p| p < PRIME_BOUND)
        .filter(move |&p| p * p > 4 * order && is_prime(p))
}

/// An element of exact multiplicative order `e` in `F_p^*`.
pub(crate) fn primitive_root_of_order(e: u64, p: u64) -> u64 {
    let factors: Vec<u64> = (2..=e).filter(|&q| e % q == 0 && is_prime(q)).collect();
    (2..p)
        .map(|g| pow_mod(g, (p - 1) / e, p))
        .find(|&z| factors.iter().all(|&q| pow_mod(z, e / q, p) != 1))
        .unwrap_or(1)
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p - f * m[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : x·A = 0}` for the row-vector convention, i.e. the left
/// null space; here applied to `Aᵀ` to get right null vectors.
fn null_space(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut m = a.to_vec();
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let pivots = rref(&mut m, p);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[i][free]) % p;
        }
        out.push(v);
    }
    out
}

/// Characteristic polynomial by Faddeev–LeVerrier (needs `p > k`); the
/// coefficient vector has the constant term first.
fn char_poly(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let k = a.len();
    let mut coeffs = vec![0u64; k + 1];
    coeffs[k] = 1;
    let mut m = vec![vec![0u64; k]; k];
    for i in 1..=k {
        // M_i = A·M_{i−1} + c_{k−i+1}·I
        let mut next = vec![vec![0u64; k]; k];
        for r in 0..k {
            for c in 0..k {
                let mut s = 0u64;
                for t in 0..k {
                    s = (s + a[r][t] * m[t][c]) % p;
                }
                next[r][c] = s;
            }
            next[r][r] = (next[r][r] + coeffs[k - i + 1]) % p;
        }
        m = next;
        // c_{k−i} = −tr(A·M_i)/i
        let mut tr = 0u64;
        for r in 0..k {
            for t in 0..k {
                tr = (tr + a[r][t] * m[t][r]) % p;
            }
        }
        coeffs[k - i] = (p - tr * inv_mod(i as u64, p) % p) % p;
    }
    coeffs
}

/// Splits `F_p^r` into common eigenvectors of the class matrices
/// `M_j[k][l]` (the coefficient of the `l`-th class in `K_j·K_k`); one
/// vector per eigenspace, or `None` if the prime does not separate them.
pub(crate) fn split_class_algebra(
    r: usize,
    class_matrix: impl Fn(usize) -> Vec<Vec<u64>>,
    p: u64,
) -> Option<Vec<Vec<u64>>> {
    // common eigenvectors, column convention, spaces stored as row bases
    let identity_basis: Vec<Vec<u64>> = (0..r)
        .map(|i| (0..r).map(|j| (i == j) as u64).collect())
        .collect();
    let mut spaces = vec![identity_basis];
    for j in 0..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mj = class_matrix(j);
        let mut next = Vec::new();
        for mut basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let pivots = rref(&mut basis, p);
            let k = basis.len();
            // A[i][·] = coordinates of M_j·b_i
            let mut a = vec![vec![0u64; k]; k];
            for (i, b) in basis.iter().enumerate() {
                let img: Vec<u64> = (0..r)
                    .map(|row| (0..r).fold(0, |s, c| (s + mj[row][c] * b[c]) % p))
                    .collect();
                for (t, &pc) in pivots.iter().enumerate() {
                    a[i][t] = img[pc];
                }
            }
            // coordinates c of an eigenvector satisfy Σ_i c_i·A[i] = λ·c,
            // i.e. c is a left eigenvector of A
            let at: Vec<Vec<u64>> = (0..k).map(|c| (0..k).map(|i| a[i][c]).collect()).collect();
            let poly = char_poly(&at, p);
            let mut found = 0;
            for lambda in 0..p {
                let val = poly.iter().rev().fold(0, |acc, &c| (acc * lambda + c) % p);
                if val != 0 {
                    continue;
                }
                let mut shifted = at.clone();
                for (i, row) in shifted.iter_mut().enumerate() {
                    row[i] = (row[i] + p - lambda) % p;
                }
                let ns = null_space(&shifted, p);
                found += ns.len();
                let sub: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|c| {
                        (0..r)
                            .map(|col| (0..k).fold(0, |s, i| (s + c[i] * basis[i][col]) % p))
                            .collect()
                    })
                    .collect();
                next.push(sub);
                if found == k {
                    break;
                }
            }
            if found != k {
                return None;
            }
        }
        spaces = next;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
        return None;
    }

    Some(spaces.into_iter().map(|mut s| s.remove(0)).collect())
}

fn dixon<T: Coefficient>(
    group: &FiniteGroup,
    classes: &[ConjugacyClass],
    class_of: &[usize],
) -> Result<Vec<Character<T>>> {
    let order = group.order() as u64;
    let exponent = group.exponent() as u64;
    for p in candidate_primes(exponent, order) {
        if let Some(rows) = dixon_at_prime(group, classes, class_of, p) {
            return Ok(rows);
        }
    }
    Err(Error::NoPrime(PRIME_BOUND))
}

fn dixon_at_prime<T: Coefficient>(
    group: &FiniteGroup,
    classes: &[ConjugacyClass],
    class_of: &[usize],
    p: u64,
) -> Option<Vec<Character<T>>> {
    let r = classes.len();
    let order = group.order() as u64;
    let id_class = class_of[group.identity()];

    // class matrices: M_j[k][l] = #{x ∈ C_j : x⁻¹z_l ∈ C_k}
    let class_matrix = |j: usize| -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; r]; r];
        for (l, cl) in classes.iter().enumerate() {
            let z = cl.representative;
            for &x in &classes[j].members {
                let k = class_of[group.mul(group.inv(x), z)];
                m[k][l] += 1;
            }
        }
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                *x %= p;
            }
        }
        m
    };

    let spaces = split_class_algebra(r, class_matrix, p)?;

    let exponent = group.exponent() as u64;
    let z = primitive_root_of_order(exponent, p);
    let mut rows = Vec::with_capacity(r);
    for v in &spaces {
        if v[id_class] == 0 {
            return None;
        }
        let s = inv_mod(v[id_class], p);
        let omega: Vec<u64> = v.iter().map(|x| x * s % p).collect();
        let mut sum = 0;
        for (l, cl) in classes.iter().enumerate() {
            let inv_class = class_of[group.inv(cl.representative)];
            let h = cl.members.len() as u64;
            sum = (sum + omega[l] * omega[inv_class] % p * inv_mod(h, p)) % p;
        }
        if sum == 0 {
            return None;
        }
        let d2 = order % p * inv_mod(sum, p) % p;
        let degree = (1..).take_while(|d| d * d <= order).find(|d| d * d % p == d2)?;
        let chi_mod: Vec<u64> = classes
            .iter()
            .enumerate()
            .map(|(l, cl)| omega[l] * degree % p * inv_mod(cl.members.len() as u64, p) % p)
            .collect();

        let mut values = Vec::with_capacity(r);
        for cl in classes {
            let g = cl.representative;
            let o = group.element_order(g) as u64;
            let zo = pow_mod(z, exponent / o, p);
            let inv_o = inv_mod(o % p, p);
            let mut terms = Vec::with_capacity(o as usize);
            for k in 0..o {
                let mut acc = 0;
                for s in 0..o {
                    let chi = chi_mod[class_of[group.pow(g, s as i64)]];
                    let w = pow_mod(zo, (o - (s * k) % o) % o, p);
                    acc = (acc + chi * w) % p;
                }
                let mk = acc * inv_o % p;
                if mk > degree {
                    return None;
                }
                if mk != 0 {
                    terms.push((k as i64, T::from_u64(mk).expect("multiplicity")));
                }
            }
            values.push(Cyclotomic::from_terms(o as u32, terms));
        }
        rows.push(Character { degree, values });
    }
    rows.sort_by(|a, b| (a.degree, &a.values).cmp(&(b.degree, &b.values)));
    Some(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type Table = CharacterTable<Rational64>;
    type C = Cyclotomic<Rational64>;

    fn table(name: &str) -> Table {
        Table::compute(Arc::new(FiniteGroup::builtin(name).unwrap())).unwrap()
    }

    #[test]
    fn z2_rows() {
        let t = table("Z2");
        let rows: Vec<Vec<C>> = t.rows.iter().map(|r| r.values.clone()).collect();
        assert_eq!(rows, vec![vec![C::one(), C::one()], vec![C::one(), C::from_i64(-1)]]);
    }

    #[test]
    fn degrees_of_small_groups() {
        let degrees = |n: &str| -> Vec<u64> { table(n).rows.iter().map(|r| r.degree).collect() };
        assert_eq!(degrees("S3"), vec![1, 1, 2]);
        assert_eq!(degrees("Q8"), vec![1, 1, 1, 1, 2]);
        assert_eq!(degrees("D4"), vec![1, 1, 1, 1, 2]);
        assert_eq!(degrees("S4"), vec![1, 1, 2, 3, 3]);
        assert_eq!(degrees("A4"), vec![1, 1, 1, 3]);
    }

    #[test]
    fn s3_standard_values() {
        let t = table("S3");
        let two = &t.rows[2];
        let expected: Vec<C> = t
            .classes
            .iter()
            .map(|c| match t.group.element_order(c.representative) {
                1 => C::from_i64(2),
                2 => C::zero(),
                _ => C::from_i64(-1),
            })
            .collect();
        assert_eq!(two.values, expected);
    }

    #[test]
    fn cyclic_tables_are_orthonormal() {
        for n in 1..=12 {
            let t = table(&format!("Z{n}"));
            assert_eq!(t.len(), n);
            assert!(t.is_orthonormal());
        }
    }

    #[test]
    fn char_poly_of_diagonal() {
        let p = 13;
        let a = vec![vec![2, 0], vec![0, 5]];
        // (x−2)(x−5) = x² − 7x + 10
        assert_eq!(char_poly(&a, p), vec![10, 13 - 7, 1]);
    }
}
