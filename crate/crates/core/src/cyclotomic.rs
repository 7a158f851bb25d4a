//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! An element is stored as a rational combination of the power basis
//! `1, ζ, …, ζ^{φ(N)-1}` reduced modulo the N-th cyclotomic polynomial,
//! with one common positive denominator. Coefficients stay in machine
//! words while they fit and switch to big integers otherwise.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_field::field;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod once_field {
    use super::*;
    use parking_lot::RwLock;
    use std::sync::OnceLock;

    static FIELDS: OnceLock<RwLock<HashMap<u32, Arc<CycField>>>> = OnceLock::new();

    pub fn field(n: u32) -> Arc<CycField> {
        let map = FIELDS.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(f) = map.read().get(&n) {
            return f.clone();
        }
        let f = Arc::new(CycField::new(n));
        map.write().entry(n).or_insert(f).clone()
    }
}

/// Integer coefficients of the N-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub fn euler_phi(n: u32) -> usize {
    let mut result = n as u64;
    let mut m = n as u64;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result as usize
}

/// Precomputed reduction data for one conductor.
pub struct CycField {
    n: u32,
    phi: usize,
    /// `powers[e]` is x^e mod Φ_N as a sparse list of (index, coefficient).
    powers: Vec<Vec<(usize, i64)>>,
}

impl CycField {
    fn new(n: u32) -> Self {
        let phi_poly = cyclotomic_polynomial(n);
        let phi = phi_poly.len() - 1;
        let len = (n as usize).max(2 * phi).max(1);
        let mut powers = Vec::with_capacity(len);
        let mut cur = vec![0i64; phi.max(1)];
        if phi > 0 {
            cur[0] = 1;
        }
        for _ in 0..len {
            powers.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i, c))
                    .collect(),
            );
            // multiply by x and reduce
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * phi_poly[i];
                }
            }
        }
        CycField { n, phi, powers }
    }

    fn power(&self, e: usize) -> &[(usize, i64)] {
        &self.powers[e]
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Small { num: Vec<i64>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

/// An exact element of Q(ζ_N).
#[derive(Clone)]
pub struct CycScalar {
    field: Arc<CycField>,
    repr: Repr,
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

impl CycScalar {
    fn from_small_unnormalized(field: Arc<CycField>, num: Vec<i128>, den: i128) -> CycScalar {
        let mut g = den;
        for &c in &num {
            if c != 0 {
                g = gcd_i128(g, c);
                if g == 1 {
                    break;
                }
            }
        }
        let g = if den < 0 { -g.abs() } else { g.abs() };
        let fits = |v: i128| v > i64::MIN as i128 && v <= i64::MAX as i128;
        if num.iter().all(|&c| c == 0) {
            return CycScalar::zero_in(field);
        }
        let den2 = den / g;
        if fits(den2) && num.iter().all(|&c| fits(c / g)) {
            let num = num.iter().map(|&c| (c / g) as i64).collect();
            CycScalar { field, repr: Repr::Small { num, den: den2 as i64 } }
        } else {
            let num = num.iter().map(|&c| BigInt::from(c / g)).collect();
            CycScalar { field, repr: Repr::Big { num, den: BigInt::from(den2) } }
        }
    }

    fn from_big_unnormalized(field: Arc<CycField>, mut num: Vec<BigInt>, mut den: BigInt) -> CycScalar {
        if num.iter().all(|c| c.is_zero()) {
            return CycScalar::zero_in(field);
        }
        let mut g = den.abs();
        for c in &num {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
        }
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        let small_den = den.to_i64();
        let small_num: Option<Vec<i64>> =
            num.iter().map(|c| c.to_i64().filter(|&v| v != i64::MIN)).collect();
        match (small_den, small_num) {
            (Some(d), Some(nv)) => CycScalar { field, repr: Repr::Small { num: nv, den: d } },
            _ => CycScalar { field, repr: Repr::Big { num, den } },
        }
    }

    // Zero is the only value with an empty numerator vector.
    fn zero_in(field: Arc<CycField>) -> CycScalar {
        CycScalar { field, repr: Repr::Small { num: Vec::new(), den: 1 } }
    }

    pub fn zero(n: u32) -> CycScalar {
        CycScalar::zero_in(field(n))
    }

    pub fn one(n: u32) -> CycScalar {
        CycScalar::from_i64(n, 1)
    }

    pub fn from_i64(n: u32, v: i64) -> CycScalar {
        CycScalar::from_ratio(n, v, 1)
    }

    /// The rational number p/q in Q(ζ_n).
    pub fn from_ratio(n: u32, p: i64, q: i64) -> CycScalar {
        assert!(q != 0, "zero denominator");
        let f = field(n);
        let mut num = vec![0i128; f.phi];
        num[0] = p as i128;
        CycScalar::from_small_unnormalized(f, num, q as i128)
    }

    pub fn from_bigratio(n: u32, p: BigInt, q: BigInt) -> CycScalar {
        assert!(!q.is_zero(), "zero denominator");
        let f = field(n);
        let mut num = vec![BigInt::zero(); f.phi];
        num[0] = p;
        CycScalar::from_big_unnormalized(f, num, q)
    }

    /// ζ_N^e.
    pub fn root_of_unity(n: u32, e: i64) -> CycScalar {
        assert!(n >= 1);
        let f = field(n);
        let e = e.rem_euclid(n as i64) as usize;
        let mut num = vec![0i128; f.phi];
        for &(i, c) in f.power(e) {
            num[i] = c as i128;
        }
        CycScalar::from_small_unnormalized(f, num, 1)
    }

    /// Σ_e c_e ζ_N^e for an arbitrary list of (exponent, rational) terms.
    pub fn from_terms(n: u32, terms: &[(i64, BigInt, BigInt)]) -> Result<CycScalar> {
        if n == 0 {
            return Err(Error::invalid("conductor must be positive"));
        }
        let mut acc = CycScalar::zero(n);
        for (e, p, q) in terms {
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let t = CycScalar::root_of_unity(n, *e)
                * CycScalar::from_bigratio(n, p.clone(), q.clone());
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.repr, Repr::Small { num, .. } if num.is_empty())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|(p, q)| p.is_one() && q.is_one()).unwrap_or(false)
    }

    /// Canonical numerator vector and positive denominator.
    pub fn coefficients(&self) -> (Vec<BigInt>, BigInt) {
        match &self.repr {
            Repr::Small { num, .. } if num.is_empty() => {
                (vec![BigInt::zero(); self.field.phi], BigInt::one())
            }
            Repr::Small { num, den } => {
                (num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den))
            }
            Repr::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    /// Returns p/q in lowest terms if the value is rational.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        let (num, den) = self.coefficients();
        if num.iter().skip(1).all(|c| c.is_zero()) {
            let p = num.first().cloned().unwrap_or_else(BigInt::zero);
            Some((p, den))
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        let (p, q) = self.as_rational()?;
        if q.is_one() {
            p.to_i64()
        } else {
            None
        }
    }

    fn to_big_parts(&self) -> (Vec<BigInt>, BigInt) {
        self.coefficients()
    }

    /// Re-express the value in Q(ζ_m) for a multiple m of the conductor.
    pub fn lift(&self, m: u32) -> CycScalar {
        let n = self.field.n;
        assert!(m.is_multiple_of(n), "lift target {m} is not a multiple of {n}");
        if m == n {
            return self.clone();
        }
        if self.is_zero() {
            return CycScalar::zero(m);
        }
        let g = field(m);
        let step = (m / n) as usize;
        match &self.repr {
            Repr::Small { num, den } => {
                let mut out = vec![0i128; g.phi];
                for (e, &c) in num.iter().enumerate() {
                    if c != 0 {
                        for &(i, t) in g.power(e * step) {
                            out[i] += c as i128 * t as i128;
                        }
                    }
                }
                CycScalar::from_small_unnormalized(g, out, *den as i128)
            }
            Repr::Big { num, den } => {
                let mut out = vec![BigInt::zero(); g.phi];
                for (e, c) in num.iter().enumerate() {
                    if !c.is_zero() {
                        for &(i, t) in g.power(e * step) {
                            out[i] += c * t;
                        }
                    }
                }
                CycScalar::from_big_unnormalized(g, out, den.clone())
            }
        }
    }

    fn common(a: &CycScalar, b: &CycScalar) -> (CycScalar, CycScalar) {
        let (n, m) = (a.field.n, b.field.n);
        let l = n.lcm(&m);
        (a.lift(l), b.lift(l))
    }

    /// Image under the Galois automorphism ζ ↦ ζ^a (a coprime to N).
    pub fn galois(&self, a: i64) -> CycScalar {
        let n = self.field.n as i64;
        assert!(a.gcd(&n) == 1 || n == 1, "galois exponent not coprime to conductor");
        if self.is_zero() {
            return self.clone();
        }
        let f = self.field.clone();
        let perm = |e: usize| ((e as i64 * a).rem_euclid(n)) as usize;
        match &self.repr {
            Repr::Small { num, den } => {
                let mut out = vec![0i128; f.phi];
                for (e, &c) in num.iter().enumerate() {
                    if c != 0 {
                        for &(i, t) in f.power(perm(e)) {
                            out[i] += c as i128 * t as i128;
                        }
                    }
                }
                CycScalar::from_small_unnormalized(f, out, *den as i128)
            }
            Repr::Big { num, den } => {
                let mut out = vec![BigInt::zero(); f.phi];
                for (e, c) in num.iter().enumerate() {
                    if !c.is_zero() {
                        for &(i, t) in f.power(perm(e)) {
                            out[i] += c * t;
                        }
                    }
                }
                CycScalar::from_big_unnormalized(f, out, den.clone())
            }
        }
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> CycScalar {
        self.galois(-1)
    }

    fn mul_same(&self, other: &CycScalar) -> CycScalar {
        let f = self.field.clone();
        let phi = f.phi;
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) =
            (&self.repr, &other.repr)
        {
            if let Some(r) = mul_small(&f, a, *da, b, *db) {
                return r;
            }
        }
        let (a, da) = self.to_big_parts();
        let (b, db) = other.to_big_parts();
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    prod[i + j] += ai * bj;
                }
            }
        }
        let mut out: Vec<BigInt> = prod[..phi].to_vec();
        for (e, c) in prod.iter().enumerate().skip(phi) {
            if !c.is_zero() {
                for &(i, t) in f.power(e) {
                    out[i] += c * t;
                }
            }
        }
        CycScalar::from_big_unnormalized(f, out, da * db)
    }

    fn add_same(&self, other: &CycScalar) -> CycScalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let f = self.field.clone();
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) =
            (&self.repr, &other.repr)
        {
            let (da, db) = (*da as i128, *db as i128);
            let g = gcd_i128(da, db);
            let (fa, fb) = (db / g, da / g);
            let l = da * fa;
            let mut ok = true;
            let out: Vec<i128> = a
                .iter()
                .zip(b)
                .map(|(&x, &y)| {
                    match (x as i128).checked_mul(fa).and_then(|u| {
                        (y as i128).checked_mul(fb).and_then(|v| u.checked_add(v))
                    }) {
                        Some(v) => v,
                        None => {
                            ok = false;
                            0
                        }
                    }
                })
                .collect();
            if ok {
                return CycScalar::from_small_unnormalized(f, out, l);
            }
        }
        let (a, da) = self.to_big_parts();
        let (b, db) = other.to_big_parts();
        let g = da.gcd(&db);
        let fa = &db / &g;
        let fb = &da / &g;
        let l = &da * &fa;
        let out = a.iter().zip(b.iter()).map(|(x, y)| x * &fa + y * &fb).collect();
        CycScalar::from_big_unnormalized(f, out, l)
    }

    pub fn add(&self, other: &CycScalar) -> CycScalar {
        if self.is_zero() && other.field.n.is_multiple_of(self.field.n) {
            return other.clone();
        }
        if other.is_zero() && self.field.n.is_multiple_of(other.field.n) {
            return self.clone();
        }
        if Arc::ptr_eq(&self.field, &other.field) {
            self.add_same(other)
        } else {
            let (a, b) = CycScalar::common(self, other);
            a.add_same(&b)
        }
    }

    pub fn mul(&self, other: &CycScalar) -> CycScalar {
        if self.is_zero() || other.is_zero() {
            let l = self.field.n.lcm(&other.field.n);
            return CycScalar::zero(l);
        }
        if Arc::ptr_eq(&self.field, &other.field) {
            self.mul_same(other)
        } else {
            let (a, b) = CycScalar::common(self, other);
            a.mul_same(&b)
        }
    }

    pub fn neg(&self) -> CycScalar {
        if self.is_zero() {
            return self.clone();
        }
        let f = self.field.clone();
        match &self.repr {
            Repr::Small { num, den } => {
                let out = num.iter().map(|&c| -(c as i128)).collect();
                CycScalar::from_small_unnormalized(f, out, *den as i128)
            }
            Repr::Big { num, den } => {
                CycScalar::from_big_unnormalized(f, num.iter().map(|c| -c).collect(), den.clone())
            }
        }
    }

    pub fn sub(&self, other: &CycScalar) -> CycScalar {
        self.add(&other.neg())
    }

    /// Multiplicative inverse via the product of all non-trivial Galois conjugates.
    pub fn inv(&self) -> Result<CycScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some((p, q)) = self.as_rational() {
            return Ok(CycScalar::from_bigratio(self.field.n, q, p));
        }
        let n = self.field.n as i64;
        let mut conj_prod = CycScalar::one(self.field.n);
        for a in 2..n {
            if a.gcd(&n) == 1 {
                conj_prod = conj_prod.mul(&self.galois(a));
            }
        }
        let norm = self.mul(&conj_prod);
        let (p, q) = norm
            .as_rational()
            .expect("field norm must be rational");
        Ok(conj_prod.mul(&CycScalar::from_bigratio(self.field.n, q, p)))
    }

    pub fn div(&self, other: &CycScalar) -> Result<CycScalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<CycScalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycScalar::one(self.field.n);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Numerical embedding ζ_N ↦ exp(2πi/N).
    pub fn to_float(&self) -> Complex64 {
        let n = self.field.n as f64;
        let (num, den) = self.coefficients();
        let den = den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in num.iter().enumerate() {
            if !c.is_zero() {
                let ang = 2.0 * std::f64::consts::PI * e as f64 / n;
                acc += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), ang);
            }
        }
        acc / den
    }

    /// Smallest conductor M dividing N such that the value lies in Q(ζ_M).
    pub fn reduce_conductor(&self) -> CycScalar {
        let n = self.field.n;
        let mut divisors: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        for m in divisors {
            if m == n {
                break;
            }
            if m % 4 == 2 {
                // Q(ζ_m) = Q(ζ_{m/2}) for m ≡ 2 mod 4
                continue;
            }
            if let Some(v) = self.express_in(m) {
                return v;
            }
        }
        self.clone()
    }

    /// Express the value in Q(ζ_m) (m | N) if it lies there.
    fn express_in(&self, m: u32) -> Option<CycScalar> {
        let n = self.field.n;
        let step = n / m;
        let g = field(m);
        let fieldn = field(n);
        let rows = fieldn.phi;
        let cols = g.phi;
        // basis vectors of Q(ζ_m) inside Q(ζ_n)
        let mut a = vec![vec![BigInt::zero(); cols + 1]; rows];
        for j in 0..cols {
            for &(i, t) in fieldn.power(j * step as usize) {
                a[i][j] = BigInt::from(t);
            }
        }
        let (num, den) = self.coefficients();
        for i in 0..rows {
            a[i][cols] = num[i].clone();
        }
        let sol = solve_integer_system(a, cols)?;
        let f = g;
        let (sn, sd) = sol;
        Some(CycScalar::from_big_unnormalized(f, sn, sd * den))
    }

    pub fn to_json(&self) -> CycJson {
        let (num, den) = self.coefficients();
        let terms = num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                let g = c.gcd(&den);
                (e as i64, format!("{}/{}", c / &g, &den / &g))
            })
            .collect();
        CycJson { n: self.field.n, terms }
    }

    pub fn from_json(j: &CycJson) -> Result<CycScalar> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for (e, s) in &j.terms {
            let (p, q) = parse_rational(s)?;
            terms.push((*e, p, q));
        }
        CycScalar::from_terms(j.n, &terms)
    }
}

/// Fraction-free elimination for an overdetermined consistent system with
/// integer augmented matrix; returns (numerators, common denominator).
fn solve_integer_system(mut a: Vec<Vec<BigInt>>, cols: usize) -> Option<(Vec<BigInt>, BigInt)> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f1 = a[r][c].clone();
                let f2 = a[i][c].clone();
                for j in 0..=cols {
                    let v = &a[i][j] * &f1 - &a[r][j] * &f2;
                    a[i][j] = v;
                }
                let g = a[i].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                if !g.is_zero() && !g.is_one() {
                    for x in a[i].iter_mut() {
                        *x /= &g;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    for row in a.iter().skip(r) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut den = BigInt::one();
    for (i, _) in pivots.iter().enumerate() {
        den = den.lcm(&a[i][pivots[i]]);
    }
    let mut out = vec![BigInt::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        out[c] = &a[i][cols] * (&den / &a[i][c]);
    }
    Some((out, den))
}

fn mul_small(f: &Arc<CycField>, a: &[i64], da: i64, b: &[i64], db: i64) -> Option<CycScalar> {
    let phi = f.phi;
    let mut prod = vec![0i128; 2 * phi - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let ai = ai as i128;
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                prod[i + j] = prod[i + j].checked_add(ai * bj as i128)?;
            }
        }
    }
    let (low, high) = prod.split_at_mut(phi);
    for (k, &c) in high.iter().enumerate() {
        if c != 0 {
            for &(i, t) in f.power(phi + k) {
                low[i] = low[i].checked_add(c.checked_mul(t as i128)?)?;
            }
        }
    }
    let den = (da as i128).checked_mul(db as i128)?;
    prod.truncate(phi);
    Some(CycScalar::from_small_unnormalized(f.clone(), prod, den))
}

pub fn parse_rational(s: &str) -> Result<(BigInt, BigInt)> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    let q: BigInt = q.parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok((p, q))
}

/// Serialized form `{"N": n, "terms": [[e, "p/q"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycJson {
    #[serde(rename = "N")]
    pub n: u32,
    pub terms: Vec<(i64, String)>,
}

impl Serialize for CycScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CycJson::deserialize(d)?;
        CycScalar::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.field, &other.field) {
            match (&self.repr, &other.repr) {
                (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) => {
                    da == db && a == b
                }
                (Repr::Big { num: a, den: da }, Repr::Big { num: b, den: db }) => {
                    da == db && a == b
                }
                _ => false,
            }
        } else {
            let (a, b) = CycScalar::common(self, other);
            a == b
        }
    }
}

impl Eq for CycScalar {}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.coefficients();
        let n = self.field.n;
        let mut first = true;
        for (e, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let g = c.gcd(&den);
            let (p, q) = (c / &g, &den / &g);
            let coef = if q.is_one() { p.to_string() } else { format!("{p}/{q}") };
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{coef}")?;
            } else {
                write!(f, "({coef})·z{n}^{e}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                CycScalar::$f(self, rhs)
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                CycScalar::$f(&self, &rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                CycScalar::$f(&self, rhs)
            }
        }
        impl $tr<CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                CycScalar::$f(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl Div<&CycScalar> for &CycScalar {
    type Output = CycScalar;
    fn div(self, rhs: &CycScalar) -> CycScalar {
        CycScalar::div(self, rhs).expect("division by zero")
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar::neg(self)
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(72).len() - 1, 24);
        assert_eq!(euler_phi(72), 24);
    }

    #[test]
    fn i_squared() {
        let i = CycScalar::root_of_unity(4, 1);
        assert_eq!(&i * &i, CycScalar::from_i64(4, -1));
        assert!(CycScalar::root_of_unity(9, 0).is_one());
    }

    #[test]
    fn mixed_conductor() {
        let a = CycScalar::root_of_unity(3, 1);
        let b = CycScalar::root_of_unity(4, 1);
        let c = &a * &b;
        assert_eq!(c.conductor(), 12);
        assert_eq!(c, CycScalar::root_of_unity(12, 7));
        assert_eq!(CycScalar::from_i64(1, 2), CycScalar::from_i64(12, 2));
    }

    #[test]
    fn inverse_round_trip() {
        let x = CycScalar::one(5) + CycScalar::root_of_unity(5, 1);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(CycScalar::zero(5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn reduce_conductor_of_real_part() {
        let x = CycScalar::root_of_unity(8, 1) + CycScalar::root_of_unity(8, -1);
        // sqrt(2) lives in Q(ζ_8) and nowhere smaller
        assert_eq!(x.reduce_conductor().conductor(), 8);
        let y = CycScalar::root_of_unity(12, 4).lift(24);
        let r = y.reduce_conductor();
        assert_eq!(r.conductor(), 3);
        assert_eq!(r, y);
    }

    #[test]
    fn big_path_matches_small() {
        let mut x = CycScalar::from_i64(7, 3) + CycScalar::root_of_unity(7, 2);
        for _ in 0..6 {
            x = &x * &x;
        }
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
    }
}
