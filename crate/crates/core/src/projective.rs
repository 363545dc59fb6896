//! Projective characters by Dixon's method in the twisted group algebra.
//!
//! The algebra has basis `x_h` with `x_h·x_k = e^{2πiθ(h,k)}·x_{hk}`. Its
//! centre is spanned by twisted class sums over the θ-regular classes, and
//! the central characters of these sums determine the projective
//! irreducibles, exactly as class sums do for ordinary characters.

use crate::character::{candidate_primes, inv_mod, pow_mod, primitive_root_of_order, split_class_algebra};
use crate::cocycle::{Cochain2, Qz};
use crate::cyclotomic::{Coefficient, Cyclotomic};
use crate::error::{Error, Result};
use crate::extension::ProjectiveCharacter;
use crate::group::FiniteGroup;

/// `x_h^i = e^{2πi·a_i}·x_{h^i}` for `i = 0..M` where `M` is the order of
/// `x_h`.
pub(crate) fn lift_powers(group: &FiniteGroup, theta: Option<&Cochain2>, h: usize) -> Vec<(Qz, usize)> {
    let e = group.identity();
    let mut out = vec![(Qz::ZERO, e)];
    loop {
        let (a, p) = *out.last().expect("nonempty");
        let next = (a + theta.map_or(Qz::ZERO, |t| t.get(h, p)), group.mul(h, p));
        if next == (Qz::ZERO, e) {
            return out;
        }
        out.push(next);
    }
}

struct RegularClass {
    representative: usize,
    /// `(k, c_k)`: the class sum is `Σ e^{2πi c_k}·x_k`, sorted by `k`.
    members: Vec<(usize, Qz)>,
}

impl RegularClass {
    fn phase(&self, k: usize) -> Option<Qz> {
        self.members
            .binary_search_by_key(&k, |&(x, _)| x)
            .ok()
            .map(|i| self.members[i].1)
    }
}

/// `x_g⁻¹·x_h·x_g = e^{2πi·φ}·x_{g⁻¹hg}`
fn conjugation_phase(theta: &Cochain2, h: usize, g: usize) -> Qz {
    let gr = theta.group();
    let gi = gr.inv(g);
    theta.get(gi, h) + theta.get(gr.mul(gi, h), g) - theta.get(g, gi)
}

fn regular_classes(theta: &Cochain2) -> Vec<RegularClass> {
    let gr = theta.group();
    let carrier = theta.carrier();
    let mut seen = vec![false; gr.order()];
    let mut out = Vec::new();
    for &h in carrier {
        if seen[h] {
            continue;
        }
        let mut members: Vec<(usize, Qz)> = Vec::new();
        let mut regular = true;
        for &g in carrier {
            let k = gr.conj(h, g);
            let phi = conjugation_phase(theta, h, g);
            seen[k] = true;
            match members.iter().find(|&&(x, _)| x == k) {
                Some(&(_, old)) => regular &= old == phi,
                None => members.push((k, phi)),
            }
        }
        if regular {
            members.sort_unstable_by_key(|&(x, _)| x);
            out.push(RegularClass {
                representative: h,
                members,
            });
        }
    }
    out
}

/// Irreducible θ-projective characters of the carrier of `theta`, read
/// through `h ↦ x_h`, sorted by degree and values.
pub(crate) fn twisted_characters<T: Coefficient>(theta: &Cochain2) -> Result<Vec<ProjectiveCharacter<T>>> {
    let gr = theta.group();
    let carrier = theta.carrier();
    let order = carrier.len() as u64;
    let classes = regular_classes(theta);
    let big_l = carrier
        .iter()
        .map(|&h| lift_powers(gr, Some(theta), h).len() as u64)
        .fold(1, num_integer::lcm);
    for p in candidate_primes(big_l, order.max(classes.len() as u64)) {
        if let Some(rows) = twisted_at_prime(theta, &classes, big_l, p) {
            if verify(theta, &rows, classes.len()) {
                return Ok(rows);
            }
        }
    }
    Err(Error::NoPrime(crate::character::PRIME_BOUND))
}

fn twisted_at_prime<T: Coefficient>(
    theta: &Cochain2,
    classes: &[RegularClass],
    big_l: u64,
    p: u64,
) -> Option<Vec<ProjectiveCharacter<T>>> {
    let gr = theta.group();
    let carrier = theta.carrier();
    let order = carrier.len() as u64;
    let r = classes.len();
    let z = primitive_root_of_order(big_l, p);
    let root = |q: Qz| -> u64 {
        let e = (q.numerator() * (big_l as i64 / q.denominator())).rem_euclid(big_l as i64);
        pow_mod(z, e as u64, p)
    };
    let class_of = |k: usize| classes.iter().position(|c| c.phase(k).is_some());
    let id_class = class_of(gr.identity())?;

    // coefficient of x_{z_l} in K_i·K_j
    let class_matrix = |i: usize| -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; r]; r];
        for (l, cl) in classes.iter().enumerate() {
            let zl = cl.representative;
            for &(x, cx) in &classes[i].members {
                let y = gr.mul(gr.inv(x), zl);
                for (j, row) in m.iter_mut().enumerate() {
                    if let Some(cy) = classes[j].phase(y) {
                        row[l] = (row[l] + root(cx + cy + theta.get(x, y))) % p;
                    }
                }
            }
        }
        m
    };
    let spaces = split_class_algebra(r, class_matrix, p)?;
    if spaces.len() != r {
        return None;
    }

    let mut rows = Vec::with_capacity(r);
    for v in &spaces {
        if v[id_class] == 0 {
            return None;
        }
        let s = inv_mod(v[id_class], p);
        let omega: Vec<u64> = v.iter().map(|x| x * s % p).collect();
        let mut sum = 0;
        for (l, cl) in classes.iter().enumerate() {
            let zl = cl.representative;
            let zi = gr.inv(zl);
            let star = class_of(zi)?;
            let corr = root(-classes[star].phase(zi)? - theta.get(zl, zi));
            let size = cl.members.len() as u64;
            sum = (sum + omega[l] * omega[star] % p * corr % p * inv_mod(size, p)) % p;
        }
        if sum == 0 {
            return None;
        }
        let d2 = order % p * inv_mod(sum, p) % p;
        let degree = (1..).take_while(|d| d * d <= order).find(|d| d * d % p == d2)?;
        let chi_rep: Vec<u64> = classes
            .iter()
            .enumerate()
            .map(|(l, cl)| omega[l] * degree % p * inv_mod(cl.members.len() as u64, p) % p)
            .collect();
        // χ(x_k) mod p
        let chi = |k: usize| -> u64 {
            match class_of(k) {
                Some(l) => chi_rep[l] * root(-classes[l].phase(k).expect("member")) % p,
                None => 0,
            }
        };

        let mut rep_values = Vec::with_capacity(r);
        for cl in classes {
            let powers = lift_powers(gr, Some(theta), cl.representative);
            let m = powers.len() as u64;
            let zm = pow_mod(z, big_l / m, p);
            let inv_m = inv_mod(m % p, p);
            let weights: Vec<u64> = (0..m).scan(1u64, |w, _| {
                let cur = *w;
                *w = *w * zm % p;
                Some(cur)
            }).collect();
            let traces: Vec<u64> = powers.iter().map(|&(a, hs)| root(a) * chi(hs) % p).collect();
            let mut terms = Vec::new();
            for t in 0..m {
                let mut acc = 0;
                for (s, &tr) in traces.iter().enumerate() {
                    acc = (acc + tr * weights[((m - (s as u64 * t) % m) % m) as usize]) % p;
                }
                let mult = acc * inv_m % p;
                if mult > degree {
                    return None;
                }
                if mult != 0 {
                    terms.push((t as i64, T::from_u64(mult).expect("multiplicity")));
                }
            }
            rep_values.push(Cyclotomic::<T>::from_terms(m as u32, terms));
        }
        let values = carrier
            .iter()
            .map(|&k| match class_of(k) {
                Some(l) => &rep_values[l] * &Cyclotomic::root_of_unity(-classes[l].phase(k).expect("member")),
                None => Cyclotomic::zero(),
            })
            .collect();
        rows.push(ProjectiveCharacter {
            degree,
            carrier: carrier.to_vec(),
            values,
        });
    }
    rows.sort_by(|a, b| (a.degree, &a.values).cmp(&(b.degree, &b.values)));
    Some(rows)
}

/// Exact checks: one row per regular class, `Σ deg² = |H|`, and
/// `Σ_h χ_i(x_h)·conj(χ_j(x_h)) = |H|·δ_ij`.
fn verify<T: Coefficient>(theta: &Cochain2, rows: &[ProjectiveCharacter<T>], classes: usize) -> bool {
    let order = theta.carrier().len() as u64;
    if rows.len() != classes || rows.iter().map(|r| r.degree * r.degree).sum::<u64>() != order {
        return false;
    }
    let e = theta.group().identity();
    for (i, a) in rows.iter().enumerate() {
        if a.value(e) != Some(&Cyclotomic::from_i64(a.degree as i64)) {
            return false;
        }
        for (j, b) in rows.iter().enumerate().skip(i) {
            let s: Cyclotomic<T> = a.values.iter().zip(&b.values).map(|(x, y)| x * &y.conj()).sum();
            let expected = if i == j { order as i64 } else { 0 };
            if s != Cyclotomic::from_i64(expected) {
                return false;
            }
        }
    }
    true
}
