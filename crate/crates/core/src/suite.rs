//! The standard collection of groups and cocycles used by the verifiers.

use std::sync::Arc;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::character::CharacterTable;
use crate::cocycle::{Cochain2, Cochain3, Qz};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Builtin names of every group in the suite (all of order ≤ 24).
pub const GROUP_NAMES: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "Z2xZ2", "Z2xZ4",
    "Z2xZ2xZ2", "Z3xZ3", "Z2xZ6", "S3", "D4", "Q8", "D5", "D6", "A4", "S4",
];

#[derive(Debug, Clone)]
pub struct SuiteGroup {
    pub name: String,
    pub group: Arc<FiniteGroup>,
}

#[derive(Debug, Clone)]
pub struct SuiteCocycle {
    pub name: String,
    pub alpha: Cochain3,
}

pub fn groups() -> Vec<SuiteGroup> {
    GROUP_NAMES
        .iter()
        .map(|&name| SuiteGroup {
            name: name.to_string(),
            group: Arc::new(FiniteGroup::builtin(name).expect("suite names are builtin")),
        })
        .collect()
}

pub fn group(name: &str) -> Result<Arc<FiniteGroup>> {
    Ok(Arc::new(FiniteGroup::builtin(name)?))
}

/// Nontrivial linear characters `G → Q/Z`, one value per element, in
/// character-table order.
pub fn linear_characters(group: &Arc<FiniteGroup>) -> Result<Vec<Vec<Qz>>> {
    let table = CharacterTable::<Rational64>::compute(group.clone())?;
    let mut out = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        if row.degree != 1 {
            continue;
        }
        let values = group
            .elements()
            .map(|g| {
                table
                    .value(i, g)
                    .as_root_of_unity()
                    .ok_or_else(|| Error::Internal("linear character value is not a root of unity".into()))
            })
            .collect::<Result<Vec<Qz>>>()?;
        if values.iter().any(|v| !v.is_zero()) {
            out.push(values);
        }
    }
    Ok(out)
}

fn verified(alpha: Cochain3) -> Result<Cochain3> {
    alpha.ensure_normalized_cocycle()?;
    Ok(alpha)
}

/// Cup product of `f` with the Bockstein of `g`:
/// `(a,b,c) ↦ f(a)·⌊(ĝ(b) + ĝ(c))/m⌋` where `ĝ = m·g ∈ {0..m−1}` and `m`
/// is the order of `g`.
pub fn cup_cocycle(group: &Arc<FiniteGroup>, f: &[Qz], g: &[Qz]) -> Result<Cochain3> {
    let m = g.iter().fold(1i64, |acc, v| num_integer::lcm(acc, v.denominator()));
    let lift = |v: Qz| v.numerator() * (m / v.denominator());
    verified(Cochain3::from_fn(group.clone(), |a, b, c| {
        f[a] * ((lift(g[b]) + lift(g[c])) / m)
    }))
}

/// `(a,b,c) ↦ (1/2)·f1(a)·f2(b)·f3(c)` for characters of order two.
pub fn triple_cocycle(group: &Arc<FiniteGroup>, f: [&[Qz]; 3]) -> Result<Cochain3> {
    let bit = |v: Qz| -> i64 { (!v.is_zero()) as i64 };
    if f.iter().any(|ch| ch.iter().any(|v| v.denominator() > 2)) {
        return Err(Error::Internal("triple cocycle needs characters of order two".into()));
    }
    verified(Cochain3::from_fn(group.clone(), |a, b, c| {
        Qz::new(bit(f[0][a]) * bit(f[1][b]) * bit(f[2][c]), 2)
    }))
}

/// A random normalized 2-cochain on the whole group with values in
/// `(1/den)Z/Z`.
pub fn random_normalized_cochain2(group: &Arc<FiniteGroup>, den: i64, rng: &mut impl Rng) -> Cochain2 {
    let e = group.identity();
    let n = group.order();
    let values: Vec<i64> = (0..n * n).map(|_| rng.gen_range(0..den)).collect();
    Cochain2::from_fn(group.clone(), group.elements().collect(), |a, b| {
        if a == e || b == e {
            Qz::ZERO
        } else {
            Qz::new(values[a * n + b], den)
        }
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Suite cocycles on a builtin group: zero, the cyclic family (for `Z<n>`),
/// pullbacks of the cyclic generator along up to two linear characters, a
/// cup product of two independent order-two characters, a triple product
/// when three are available, and `shifts` random normalized coboundary
/// shifts of each nonzero entry.
pub fn cocycles(name: &str, group: &Arc<FiniteGroup>, seed: u64, shifts: usize) -> Result<Vec<SuiteCocycle>> {
    let mut out = vec![SuiteCocycle {
        name: "zero".into(),
        alpha: Cochain3::zero(group.clone()),
    }];
    let cyclic_order = name
        .strip_prefix('Z')
        .filter(|rest| !rest.contains('x'))
        .and_then(|rest| rest.parse::<usize>().ok());
    if let Some(n) = cyclic_order {
        for k in 1..n as i64 {
            out.push(SuiteCocycle {
                name: format!("cyclic:{n}:{k}"),
                alpha: Cochain3::cyclic(n, k)?,
            });
        }
    } else {
        let chars = linear_characters(group)?;
        for (i, ch) in chars.iter().take(2).enumerate() {
            out.push(SuiteCocycle {
                name: format!("pullback:{i}"),
                alpha: cup_cocycle(group, ch, ch)?,
            });
        }
        let order_two: Vec<&Vec<Qz>> = chars
            .iter()
            .filter(|ch| ch.iter().all(|v| v.denominator() <= 2))
            .collect();
        let independent = independent_order_two(group, &order_two);
        if independent.len() >= 2 {
            out.push(SuiteCocycle {
                name: "cup:0:1".into(),
                alpha: cup_cocycle(group, independent[0], independent[1])?,
            });
        }
        if independent.len() >= 3 {
            out.push(SuiteCocycle {
                name: "triple:0:1:2".into(),
                alpha: triple_cocycle(group, [independent[0], independent[1], independent[2]])?,
            });
        }
    }
    let mut rng = rng(seed);
    let base: Vec<SuiteCocycle> = out.iter().filter(|c| !c.alpha.is_zero()).cloned().collect();
    for c in base.iter().take(2) {
        for s in 0..shifts {
            let beta = random_normalized_cochain2(group, 6, &mut rng);
            let shifted = &c.alpha + &Cochain3::coboundary(&beta)?;
            out.push(SuiteCocycle {
                name: format!("{}+d{s}", c.name),
                alpha: verified(shifted)?,
            });
        }
    }
    Ok(out)
}

/// Greedily picks order-two characters that are independent over F_2.
fn independent_order_two<'a>(group: &FiniteGroup, chars: &[&'a Vec<Qz>]) -> Vec<&'a Vec<Qz>> {
    let n = group.order();
    let bits = |ch: &Vec<Qz>| -> Vec<bool> { (0..n).map(|g| !ch[g].is_zero()).collect() };
    let mut span: Vec<Vec<bool>> = vec![vec![false; n]];
    let mut chosen = Vec::new();
    for &ch in chars {
        let b = bits(ch);
        if span.contains(&b) {
            continue;
        }
        let extra: Vec<Vec<bool>> = span
            .iter()
            .map(|s| s.iter().zip(&b).map(|(x, y)| x ^ y).collect())
            .collect();
        span.extend(extra);
        chosen.push(ch);
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_groups_are_small() {
        for g in groups() {
            assert!(g.group.order() <= 24, "{}", g.name);
        }
    }

    #[test]
    fn product_groups_get_cup_and_triple_cocycles() {
        let g = group("Z2xZ2xZ2").unwrap();
        let names: Vec<String> = cocycles("Z2xZ2xZ2", &g, 1, 1).unwrap().into_iter().map(|c| c.name).collect();
        assert!(names.contains(&"cup:0:1".to_string()));
        assert!(names.contains(&"triple:0:1:2".to_string()));
        let s3 = group("S3").unwrap();
        let cs = cocycles("S3", &s3, 1, 1).unwrap();
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().all(|c| c.alpha.is_cocycle()));
    }

    #[test]
    fn conjugation_groupoid_cocycle_identity() {
        for name in ["S3", "D4", "Q8", "Z2xZ2xZ2"] {
            let g = group(name).unwrap();
            for c in cocycles(name, &g, 7, 1).unwrap() {
                let a = &c.alpha;
                for s in g.elements() {
                    for x in g.elements() {
                        for y in g.elements() {
                            for z in g.elements() {
                                let lhs = a.groupoid_cocycle(s, x, y) + a.groupoid_cocycle(s, g.mul(x, y), z);
                                let rhs = a.groupoid_cocycle(g.conj(s, x), y, z)
                                    + a.groupoid_cocycle(s, x, g.mul(y, z));
                                assert_eq!(lhs, rhs, "{name} {} at {s} {x} {y} {z}", c.name);
                            }
                        }
                    }
                }
            }
        }
    }
}
