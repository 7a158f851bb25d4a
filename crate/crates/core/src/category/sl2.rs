//! The sl(2)_k category.
//!
//! F-symbols are the quantum 6j-symbols of Kirillov and Reshetikhin in a
//! vertex gauge that removes every square root:
//!
//! F^{abc}_d[e,f] = (-1)^{(a+b+c+d)/2} [f+1] Δ(b,c,f)² Δ(a,f,d)² Σ_z (…)
//!
//! which is the unitary presentation rescaled by the symmetric vertex factor
//! u^{ab}_e = Δ(a,b,e)^{-1} [e+1]^{-1/2}. Since u^{0a}_a = 1 and u is
//! symmetric in its upper labels, unit F-symbols stay trivial and the
//! R-symbols are unchanged.

use std::collections::HashMap;
use std::sync::Arc;

use super::{FSource, FusionRing, Label, MtcData};
use crate::cyclotomic::CycScalar;

/// q-number tables at q = ζ_{2(k+2)}, stored in Q(ζ_{4(k+2)}).
#[derive(Clone)]
pub(super) struct Sl2Symbols {
    fact: Arc<Vec<CycScalar>>,
    inv_fact: Arc<Vec<Option<CycScalar>>>,
    qint: Arc<Vec<CycScalar>>,
}

impl Sl2Symbols {
    fn new(k: usize) -> Sl2Symbols {
        let n = conductor(k);
        let max = 2 * k + 6;
        // [m] = (ζ^m - ζ^{-m}) / (ζ - ζ^{-1}) with ζ = ζ_{2(k+2)} = ζ_N^2
        let denom = (CycScalar::root_of_unity(n, 2) - CycScalar::root_of_unity(n, -2))
            .inv()
            .expect("nonzero");
        let qint: Vec<CycScalar> = (0..=max as i64)
            .map(|m| {
                (CycScalar::root_of_unity(n, 2 * m) - CycScalar::root_of_unity(n, -2 * m)) * &denom
            })
            .collect();
        let mut fact = vec![CycScalar::one(n)];
        for m in 1..=max {
            let v = &fact[m - 1] * &qint[m];
            fact.push(v);
        }
        let inv_fact = fact.iter().map(|x| x.inv().ok()).collect();
        Sl2Symbols { fact: Arc::new(fact), inv_fact: Arc::new(inv_fact), qint: Arc::new(qint) }
    }

    fn fact(&self, m: i64) -> &CycScalar {
        &self.fact[m as usize]
    }

    fn inv_fact(&self, m: i64) -> &CycScalar {
        self.inv_fact[m as usize].as_ref().expect("q-factorial in a denominator vanishes")
    }

    /// Δ(x,y,w)² for doubled spins.
    fn delta_sq(&self, x: i64, y: i64, w: i64) -> CycScalar {
        let a = (x + y - w) / 2;
        let b = (x - y + w) / 2;
        let c = (-x + y + w) / 2;
        let s = (x + y + w) / 2;
        self.fact(a) * self.fact(b) * self.fact(c) * self.inv_fact(s + 1)
    }

    pub(super) fn f(&self, t: [Label; 6]) -> CycScalar {
        let [a, b, c, d, e, f] = t.map(|x| x as i64);
        let tri = [(a + b + e) / 2, (e + c + d) / 2, (b + c + f) / 2, (a + f + d) / 2];
        let quad = [(a + b + c + d) / 2, (a + c + e + f) / 2, (b + d + e + f) / 2];
        let zmin = *tri.iter().max().unwrap();
        let zmax = *quad.iter().min().unwrap();
        let n = self.qint[0].conductor();
        let mut sum = CycScalar::zero(n);
        for z in zmin..=zmax {
            let mut term = self.fact(z + 1).clone();
            if term.is_zero() {
                continue;
            }
            for &tv in &tri {
                term = term * self.inv_fact(z - tv);
            }
            for &qv in &quad {
                term = term * self.inv_fact(qv - z);
            }
            if z % 2 == 1 {
                term = -term;
            }
            sum = sum + term;
        }
        let mut v = &self.qint[(f + 1) as usize] * &self.delta_sq(b, c, f);
        v = v * self.delta_sq(a, f, d) * sum;
        if quad[0] % 2 == 1 {
            v = -v;
        }
        v
    }
}

pub(super) fn conductor(k: usize) -> u32 {
    4 * (k as u32 + 2)
}

fn fusion_allowed(k: usize, i: usize, j: usize, l: usize) -> bool {
    let (i, j, l, k) = (i as i64, j as i64, l as i64, k as i64);
    (i - j).abs() <= l && l <= (i + j).min(2 * k - i - j) && (i + j + l) % 2 == 0
}

/// Generate sl(2)_k with labels 0..=k.
pub fn gen_sl2k(k: usize) -> MtcData {
    assert!(k >= 1, "level must be positive");
    let n = conductor(k);
    let labels: Vec<String> = (0..=k).map(|i| i.to_string()).collect();
    let dual: Vec<Label> = (0..=k).collect();
    let mut triples = Vec::new();
    for i in 0..=k {
        for j in 0..=k {
            for l in 0..=k {
                if fusion_allowed(k, i, j, l) {
                    triples.push([i, j, l]);
                }
            }
        }
    }
    let ring = FusionRing::new(labels, dual, &triples).expect("sl2 fusion ring");
    let syms = Sl2Symbols::new(k);
    let qdim: Vec<CycScalar> = (0..=k).map(|i| syms.qint[i + 1].clone()).collect();
    let theta: Vec<CycScalar> = (0..=k as i64)
        .map(|i| CycScalar::root_of_unity(n, i * (i + 2)))
        .collect();
    let mut r = HashMap::new();
    for &[a, b, c] in &triples {
        let (ai, bi, ci) = (a as i64, b as i64, c as i64);
        let e2 = ci * (ci + 2) - ai * (ai + 2) - bi * (bi + 2);
        let mut v = CycScalar::root_of_unity(n, e2 / 2);
        if ((ci - ai - bi) / 2).rem_euclid(2) == 1 {
            v = -v;
        }
        r.insert([a, b, c], v);
    }
    MtcData::build(format!("sl2_{k}"), ring, n, FSource::Sl2(syms), r, theta, qdim)
        .expect("sl2 data")
}
