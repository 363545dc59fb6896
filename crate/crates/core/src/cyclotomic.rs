//! Exact arithmetic in cyclotomic fields.
//!
//! An element is stored as `Σ c_r ζ_m^r` with the coefficients reduced
//! modulo the `m`-th cyclotomic polynomial and `m` the conductor of the
//! element, so structural equality is field equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::cocycle::Qz;
use crate::error::{Error, Result};

/// Exact scalar type usable as cyclotomic coefficients.
pub trait Coefficient:
    Clone
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + std::str::FromStr
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Coefficient for T where
    T: Clone
        + Eq
        + Ord
        + Hash
        + fmt::Debug
        + fmt::Display
        + std::str::FromStr
        + Num
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic<T: Coefficient> {
    modulus: u32,
    coeffs: BTreeMap<u32, T>,
}

fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("poisoned cache").get(&n) {
        return p.clone();
    }
    // x^n − 1 divided by Φ_d for every proper divisor d
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            poly = divide_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(poly);
    cache.lock().expect("poisoned cache").insert(n, poly.clone());
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mod_inverse(a: u32, m: u32) -> u32 {
    let e = (a as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i64) as u32
}

/// Reduces a dense exponent vector (length `m`) modulo `Φ_m` in place; the
/// result has length `φ(m)`.
fn reduce_dense<T: Coefficient>(m: u32, dense: &mut Vec<T>) {
    let phi = cyclotomic_polynomial(m);
    let d = phi.len() - 1;
    for e in (d..dense.len()).rev() {
        if dense[e].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut dense[e], T::zero());
        for (i, &pi) in phi.iter().enumerate().take(d) {
            if pi != 0 {
                let t = c.clone() * T::from_i64(pi).expect("small integer");
                dense[e - d + i] = dense[e - d + i].clone() - t;
            }
        }
    }
    dense.truncate(d);
}

fn embed_dense<T: Coefficient>(from: u32, to: u32, dense: &[T]) -> Vec<T> {
    let k = to / from;
    let mut out = vec![T::zero(); to as usize];
    for (j, c) in dense.iter().enumerate() {
        if !c.is_zero() {
            out[j * k as usize] = c.clone();
        }
    }
    out
}

/// Averaged relative trace from `Q(ζ_m)` down to `Q(ζ_{m/p})`.
fn trace_down<T: Coefficient>(m: u32, p: u32, dense: &[T]) -> Vec<T> {
    let mp = m / p;
    let mut out = vec![T::zero(); mp as usize];
    if mp % p == 0 {
        for (j, c) in dense.iter().enumerate() {
            if j as u32 % p == 0 && !c.is_zero() {
                let s = j / p as usize;
                out[s] = out[s].clone() + c.clone();
            }
        }
    } else {
        let p_inv = mod_inverse(p % mp.max(1), mp.max(1));
        let mp_inv = mod_inverse(mp % p, p);
        let pm1 = T::from_u32(p - 1).expect("small integer");
        for (j, c) in dense.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = j as u64;
            let s = if mp == 1 { 0 } else { (j * p_inv as u64 % mp as u64) as usize };
            let t = j * mp_inv as u64 % p as u64;
            let v = if t == 0 { c.clone() } else { -(c.clone() / pm1.clone()) };
            out[s] = out[s].clone() + v;
        }
    }
    out
}

impl<T: Coefficient> Cyclotomic<T> {
    pub fn zero() -> Self {
        Cyclotomic {
            modulus: 1,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_coefficient(T::one())
    }

    pub fn from_coefficient(c: T) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        Cyclotomic { modulus: 1, coeffs }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_coefficient(T::from_i64(n).expect("integer coefficient"))
    }

    /// `ζ_m^k`
    pub fn zeta(m: u32, k: i64) -> Self {
        assert!(m >= 1, "modulus must be positive");
        let k = k.rem_euclid(m as i64) as usize;
        let mut dense = vec![T::zero(); m as usize];
        dense[k] = T::one();
        Self::from_dense(m, dense)
    }

    /// `e^{2πi·r}`
    pub fn root_of_unity(r: Qz) -> Self {
        Self::zeta(r.denominator() as u32, r.numerator())
    }

    /// Builds the canonical element `Σ dense[r] ζ_m^r`, for any length of
    /// `dense` (exponents are taken mod `m`).
    pub fn from_dense(m: u32, dense: Vec<T>) -> Self {
        let mut folded = vec![T::zero(); m as usize];
        for (j, c) in dense.into_iter().enumerate() {
            if !c.is_zero() {
                let j = j % m as usize;
                folded[j] = folded[j].clone() + c;
            }
        }
        reduce_dense(m, &mut folded);
        Self::minimize(m, folded)
    }

    /// Exponent/coefficient pairs with arbitrary exponents.
    pub fn from_terms(m: u32, terms: impl IntoIterator<Item = (i64, T)>) -> Self {
        let mut dense = vec![T::zero(); m as usize];
        for (e, c) in terms {
            let e = e.rem_euclid(m as i64) as usize;
            dense[e] = dense[e].clone() + c;
        }
        Self::from_dense(m, dense)
    }

    fn minimize(mut m: u32, mut dense: Vec<T>) -> Self {
        'outer: loop {
            if m % 4 == 2 {
                let h = m / 2;
                let step = h.div_ceil(2) as u64;
                let mut out = vec![T::zero(); h as usize];
                for (j, c) in dense.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let s = if h == 1 { 0 } else { (j as u64 * step % h as u64) as usize };
                    let v = if j % 2 == 0 { c.clone() } else { -c.clone() };
                    out[s] = out[s].clone() + v;
                }
                reduce_dense(h, &mut out);
                m = h;
                dense = out;
                continue;
            }
            for p in prime_factors(m) {
                let mp = m / p;
                let mut y = trace_down(m, p, &dense);
                reduce_dense(mp, &mut y);
                let mut back = embed_dense(mp, m, &y);
                reduce_dense(m, &mut back);
                if back == dense {
                    m = mp;
                    dense = y;
                    continue 'outer;
                }
            }
            break;
        }
        let coeffs = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u32, c))
            .collect();
        Cyclotomic { modulus: m, coeffs }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn coefficients(&self) -> &BTreeMap<u32, T> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The value as a rational number, when it is one.
    pub fn as_rational(&self) -> Option<T> {
        if self.modulus == 1 {
            Some(self.coeffs.get(&0).cloned().unwrap_or_else(T::zero))
        } else {
            None
        }
    }

    fn dense_at(&self, target: u32) -> Vec<T> {
        let k = (target / self.modulus) as usize;
        let mut out = vec![T::zero(); target as usize];
        for (&j, c) in &self.coeffs {
            out[j as usize * k] = c.clone();
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|(&j, c)| (j, c.clone() * s.clone())).collect(),
        }
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        let m = self.modulus;
        Self::from_terms(m, self.coeffs.iter().map(|(&j, c)| (-(j as i64), c.clone())))
    }

    /// Galois automorphism `ζ_m ↦ ζ_m^k` on a common modulus; `k` must be
    /// coprime to the modulus.
    pub fn galois(&self, k: i64) -> Self {
        let m = self.modulus;
        Self::from_terms(m, self.coeffs.iter().map(|(&j, c)| (j as i64 * k, c.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `Some(r)` when the element equals `e^{2πi·r}`.
    pub fn as_root_of_unity(&self) -> Option<Qz> {
        let m = self.modulus as i64;
        for n in [m, 2 * m] {
            for k in 0..n {
                if Self::zeta(n as u32, k) == *self {
                    return Some(Qz::new(k, n));
                }
            }
        }
        None
    }

    pub fn eval<F: Float + FloatConst>(&self) -> Complex<F> {
        let m = F::from(self.modulus).expect("float conversion");
        let mut acc = Complex::new(F::zero(), F::zero());
        for (&j, c) in &self.coeffs {
            let angle = F::TAU() * F::from(j).expect("float conversion") / m;
            let c = F::from(c.to_f64().expect("finite coefficient")).expect("float conversion");
            acc = acc + Complex::from_polar(c, angle);
        }
        acc
    }
}

impl<T: Coefficient> Default for Cyclotomic<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coefficient> Add for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn add(self, o: &Cyclotomic<T>) -> Cyclotomic<T> {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let l = self.modulus.lcm(&o.modulus);
        let mut dense = self.dense_at(l);
        for (j, c) in o.dense_at(l).into_iter().enumerate() {
            if !c.is_zero() {
                dense[j] = dense[j].clone() + c;
            }
        }
        Cyclotomic::from_dense(l, dense)
    }
}

impl<T: Coefficient> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|(&j, c)| (j, -c.clone())).collect(),
        }
    }
}

impl<T: Coefficient> Sub for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn sub(self, o: &Cyclotomic<T>) -> Cyclotomic<T> {
        self + &(-o)
    }
}

impl<T: Coefficient> Mul for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn mul(self, o: &Cyclotomic<T>) -> Cyclotomic<T> {
        if self.is_zero() || o.is_zero() {
            return Cyclotomic::zero();
        }
        let l = self.modulus.lcm(&o.modulus);
        let (ka, kb) = (l / self.modulus, l / o.modulus);
        let mut dense = vec![T::zero(); l as usize];
        for (&i, a) in &self.coeffs {
            for (&j, b) in &o.coeffs {
                let e = ((i * ka + j * kb) % l) as usize;
                dense[e] = dense[e].clone() + a.clone() * b.clone();
            }
        }
        Cyclotomic::from_dense(l, dense)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<T: Coefficient> $tr for Cyclotomic<T> {
            type Output = Cyclotomic<T>;

            fn $f(self, o: Cyclotomic<T>) -> Cyclotomic<T> {
                (&self).$f(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Coefficient> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;

    fn neg(self) -> Cyclotomic<T> {
        -&self
    }
}

impl<T: Coefficient> std::iter::Sum for Cyclotomic<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| &a + &b)
    }
}

impl<T: Coefficient> PartialOrd for Cyclotomic<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Modulus first, then coefficients by exponent with larger coefficients
/// sorting first, so that `1 < −1`.
impl<T: Coefficient> Ord for Cyclotomic<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.modulus.cmp(&other.modulus).then_with(|| {
            let zero = T::zero();
            for j in 0..self.modulus {
                let a = self.coeffs.get(&j).unwrap_or(&zero);
                let b = other.coeffs.get(&j).unwrap_or(&zero);
                match b.cmp(a) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl<T: Coefficient> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&j, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                _ if c.is_one() => write!(f, "z{}^{j}", self.modulus)?,
                _ => write!(f, "({c})*z{}^{j}", self.modulus)?,
            }
        }
        Ok(())
    }
}

/// Exact wire form: `{"m": modulus, "coeffs": {"exponent": "p/q"}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyclotomicJson {
    pub m: u32,
    pub coeffs: BTreeMap<String, String>,
}

impl<T: Coefficient> Cyclotomic<T> {
    pub fn to_json(&self) -> CyclotomicJson {
        CyclotomicJson {
            m: self.modulus,
            coeffs: self
                .coeffs
                .iter()
                .map(|(j, c)| (j.to_string(), c.to_string()))
                .collect(),
        }
    }

    pub fn from_json(j: &CyclotomicJson) -> Result<Self> {
        if j.m == 0 {
            return Err(Error::schema("m", "modulus must be positive"));
        }
        let mut terms = Vec::new();
        for (e, c) in &j.coeffs {
            let e: i64 = e
                .parse()
                .map_err(|_| Error::schema(format!("coeffs.{e}"), "exponent is not an integer"))?;
            let c: T = c
                .parse()
                .map_err(|_| Error::schema(format!("coeffs.{e}"), "coefficient is not a rational"))?;
            terms.push((e, c));
        }
        Ok(Self::from_terms(j.m, terms))
    }
}

impl<T: Coefficient> Serialize for Cyclotomic<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, T: Coefficient> Deserialize<'de> for Cyclotomic<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CyclotomicJson::deserialize(d)?;
        Self::from_json(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type C = Cyclotomic<Rational64>;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn basic_identities() {
        assert!((C::zeta(4, 1) + C::zeta(4, 3)).is_zero());
        assert_eq!(C::zeta(3, 1) + C::zeta(3, 2), C::from_i64(-1));
        assert_eq!(C::zeta(2, 1), C::from_i64(-1));
        assert_eq!(C::zeta(8, 2), C::zeta(4, 1));
        assert_eq!(C::zeta(6, 1), -C::zeta(3, 2));
        assert_eq!(C::zeta(6, 1).modulus(), 3);
        assert_eq!(C::zeta(12, 3) * C::zeta(12, 9), C::one());
        assert_eq!(C::zeta(5, 2).conj(), C::zeta(5, 3));
    }

    #[test]
    fn conductor_is_minimal() {
        // ζ_8 + ζ_8^7 = √2 lives in Q(ζ_8) but ζ_8 + ζ_8^3 = i√2 too
        let r2 = C::zeta(8, 1) + C::zeta(8, 7);
        assert_eq!(r2.modulus(), 8);
        assert_eq!(&r2 * &r2, C::from_i64(2));
        // ζ_9 + ζ_9^4 + ζ_9^7 = 0
        assert!((C::zeta(9, 1) + C::zeta(9, 4) + C::zeta(9, 7)).is_zero());
        // ζ_15^5 = ζ_3
        assert_eq!(C::zeta(15, 5), C::zeta(3, 1));
        let x = C::zeta(15, 3) + C::zeta(15, 6);
        assert_eq!(x.modulus(), 5);
    }

    #[test]
    fn roots_of_unity_are_recognized() {
        for n in 1..13 {
            for k in 0..n {
                let z = C::zeta(n as u32, k);
                assert_eq!(z.as_root_of_unity(), Some(Qz::new(k, n)));
            }
        }
        assert_eq!((C::one() + C::one()).as_root_of_unity(), None);
    }

    #[test]
    fn numeric_evaluation() {
        let z = C::zeta(8, 1).eval::<f64>();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((z.re - h).abs() < 1e-12 && (z.im - h).abs() < 1e-12);
    }

    #[test]
    fn ordering_puts_one_before_minus_one() {
        assert!(C::one() < C::from_i64(-1));
    }

    #[test]
    fn json_round_trip() {
        let x = C::zeta(8, 1).scale(&Rational64::new(3, 2)) + C::from_i64(-1);
        let j = serde_json::to_string(&x).unwrap();
        let y: C = serde_json::from_str(&j).unwrap();
        assert_eq!(x, y);
    }
}
