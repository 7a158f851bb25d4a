//! Axiom verifiers for skeletal data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Label, MtcData};
use crate::cyclotomic::CycScalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub labels: Vec<Label>,
    pub lhs: String,
    pub rhs: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub passed: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

impl Report {
    fn new(check: &str, checked: u64, seed: Option<u64>, failure: Option<Failure>) -> Report {
        Report { check: check.into(), passed: failure.is_none(), checked, seed, failure }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PentagonMode {
    Full,
    Sampled { count: u64, seed: u64 },
}

fn fail(labels: Vec<Label>, lhs: &CycScalar, rhs: &CycScalar, message: &str) -> Failure {
    Failure { labels, lhs: lhs.to_string(), rhs: rhs.to_string(), message: message.into() }
}

/// One pentagon equation for outer labels (a,b,c,d;e) and internal (f,g,k,l):
/// F^{fcd}_e[g,l] F^{abl}_e[f,k] = Σ_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l].
fn pentagon_instance(c: &MtcData, t: [Label; 9]) -> Option<Failure> {
    let [a, b, cc, d, e, f, g, k, l] = t;
    let lhs = c.f(f, cc, d, e, g, l) * c.f(a, b, l, e, f, k);
    let mut rhs = c.zero();
    for &h in c.fuse(b, cc) {
        if !c.n(a, h, g) || !c.n(h, d, k) {
            continue;
        }
        rhs = rhs + c.f(a, b, cc, g, f, h) * c.f(a, h, d, e, g, k) * c.f(b, cc, d, k, h, l);
    }
    if lhs == rhs {
        None
    } else {
        Some(fail(t.to_vec(), &lhs, &rhs, "pentagon (a,b,c,d,e,f,g,k,l)"))
    }
}

fn pentagon_instances_for(c: &MtcData, a: Label, b: Label, cc: Label, d: Label) -> Vec<[Label; 9]> {
    let mut out = Vec::new();
    for &f in c.fuse(a, b) {
        for &g in c.fuse(f, cc) {
            for &e in c.fuse(g, d) {
                for &l in c.fuse(cc, d) {
                    for &k in c.fuse(b, l) {
                        if c.n(a, k, e) {
                            out.push([a, b, cc, d, e, f, g, k, l]);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn verify_pentagon(c: &MtcData, mode: PentagonMode) -> Report {
    let n = c.rank();
    match mode {
        PentagonMode::Full => {
            let quads: Vec<[Label; 4]> = (0..n * n * n * n)
                .map(|x| [x / (n * n * n), (x / (n * n)) % n, (x / n) % n, x % n])
                .collect();
            let results: Vec<(u64, Option<Failure>)> = quads
                .par_iter()
                .map(|&[a, b, cc, d]| {
                    let inst = pentagon_instances_for(c, a, b, cc, d);
                    let count = inst.len() as u64;
                    let failure = inst.into_iter().find_map(|t| pentagon_instance(c, t));
                    (count, failure)
                })
                .collect();
            let checked = results.iter().map(|r| r.0).sum();
            let failure = results.into_iter().find_map(|r| r.1);
            Report::new("pentagon", checked, None, failure)
        }
        PentagonMode::Sampled { count, seed } => {
            let samples = sample_pentagon_instances(c, count, seed);
            let failures: Vec<Option<Failure>> =
                samples.par_iter().map(|&t| pentagon_instance(c, t)).collect();
            let failure = failures.into_iter().flatten().next();
            Report::new("pentagon", count, Some(seed), failure)
        }
    }
}

/// Uniform samples from the set of admissible pentagon instances.
///
/// Proposals pick each internal label uniformly among the admissible
/// channels; acceptance proportional to the product of channel counts
/// turns the proposal into the uniform distribution.
pub fn sample_pentagon_instances(c: &MtcData, count: u64, seed: u64) -> Vec<[Label; 9]> {
    let n = c.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_channels = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| c.fuse(a, b).len())
        .max()
        .unwrap_or(1) as f64;
    let w_max = max_channels.powi(5);
    let mut out = Vec::with_capacity(count as usize);
    while (out.len() as u64) < count {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let cc = rng.gen_range(0..n);
        let d = rng.gen_range(0..n);
        let pick = |rng: &mut ChaCha8Rng, s: &[Label]| -> Option<Label> {
            if s.is_empty() {
                None
            } else {
                Some(s[rng.gen_range(0..s.len())])
            }
        };
        let fs = c.fuse(a, b);
        let Some(f) = pick(&mut rng, fs) else { continue };
        let gs = c.fuse(f, cc);
        let Some(g) = pick(&mut rng, gs) else { continue };
        let es = c.fuse(g, d);
        let Some(e) = pick(&mut rng, es) else { continue };
        let ls = c.fuse(cc, d);
        let Some(l) = pick(&mut rng, ls) else { continue };
        let ks = c.fuse(b, l);
        let Some(k) = pick(&mut rng, ks) else { continue };
        if !c.n(a, k, e) {
            continue;
        }
        let w = (fs.len() * gs.len() * es.len() * ls.len() * ks.len()) as f64;
        if rng.gen::<f64>() * w_max < w {
            out.push([a, b, cc, d, e, f, g, k, l]);
        }
    }
    out
}

/// Hexagon in the form
/// R^{ab}_e F^{bac}_d[e,g] R^{ac}_g = Σ_f F^{abc}_d[e,f] R^{af}_d F^{bca}_d[f,g],
/// checked for the braiding and for the reverse braiding R̃^{xy}_z = 1/R^{yx}_z.
pub fn verify_hexagon(c: &MtcData) -> Report {
    let n = c.rank();
    let mut checked = 0u64;
    for reverse in [false, true] {
        let rr = |x: Label, y: Label, z: Label| -> CycScalar {
            if reverse {
                c.r_inv(y, x, z).clone()
            } else {
                c.r(x, y, z).clone()
            }
        };
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    for d in 0..n {
                        let fm = c.fmatrix(b, a, cc, d);
                        for &e in &fm.es {
                            for &g in &fm.fs {
                                checked += 1;
                                let lhs = rr(a, b, e) * c.f(b, a, cc, d, e, g) * rr(a, cc, g);
                                let mut rhs = c.zero();
                                for &f in c.fuse(b, cc) {
                                    if c.n(a, f, d) && c.n(f, a, d) {
                                        rhs = rhs
                                            + c.f(a, b, cc, d, e, f)
                                                * rr(a, f, d)
                                                * c.f(b, cc, a, d, f, g);
                                    }
                                }
                                if lhs != rhs {
                                    let msg = if reverse {
                                        "hexagon for the inverse braiding (a,b,c,d,e,g)"
                                    } else {
                                        "hexagon (a,b,c,d,e,g)"
                                    };
                                    return Report::new(
                                        "hexagon",
                                        checked,
                                        None,
                                        Some(fail(vec![a, b, cc, d, e, g], &lhs, &rhs, msg)),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Report::new("hexagon", checked, None, None)
}

/// Twist compatibility, θ-duality, dimension consistency and the kink relation.
pub fn verify_ribbon(c: &MtcData) -> Report {
    let n = c.rank();
    let mut checked = 0u64;
    let report = |checked, f| Report::new("ribbon", checked, None, Some(f));
    checked += 1;
    if !c.theta(0).is_one() {
        return report(checked, fail(vec![0], c.theta(0), &c.one(), "theta_0 = 1"));
    }
    for i in 0..n {
        checked += 1;
        let j = c.dual(i);
        if c.theta(i) != c.theta(j) {
            return report(checked, fail(vec![i, j], c.theta(i), c.theta(j), "theta duality"));
        }
        if c.qdim(i) != c.qdim(j) {
            return report(checked, fail(vec![i, j], c.qdim(i), c.qdim(j), "d_i = d_dual(i)"));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for &cc in c.fuse(a, b) {
                checked += 1;
                let lhs = c.theta(cc) * c.theta_inv(a) * c.theta_inv(b);
                let rhs = c.r(a, b, cc) * c.r(b, a, cc);
                if lhs != rhs {
                    return report(checked, fail(vec![a, b, cc], &lhs, &rhs, "twist vs double braiding"));
                }
            }
            checked += 1;
            let lhs = c.qdim(a) * c.qdim(b);
            let mut rhs = c.zero();
            for &cc in c.fuse(a, b) {
                rhs = rhs + c.qdim(cc);
            }
            if lhs != rhs {
                return report(checked, fail(vec![a, b], &lhs, &rhs, "d_a d_b = sum N d_c"));
            }
        }
    }
    for i in 0..n {
        let ib = c.dual(i);
        checked += 1;
        // both duality loops give d_i
        let lhs = c.f(i, ib, i, i, 0, 0) * c.finv(i, ib, i, i, 0, 0) * c.qdim(i) * c.qdim(i);
        if !lhs.is_one() {
            return report(checked, fail(vec![i], &lhs, &c.one(), "pivotal: d_i^2 F[0,0] Finv[0,0] = 1"));
        }
        checked += 1;
        // kink: θ_i = d_i Σ_e Finv^{i i ī}_i[0,e] R^{ii}_e F^{i i ī}_i[e,0]
        let mut rhs = c.zero();
        for &e in c.fuse(i, i) {
            if c.n(e, ib, i) {
                rhs = rhs + c.finv(i, i, ib, i, 0, e) * c.r(i, i, e) * c.f(i, i, ib, i, e, 0);
            }
        }
        rhs = rhs * c.qdim(i);
        if &rhs != c.theta(i) {
            return report(checked, fail(vec![i], c.theta(i), &rhs, "kink relation"));
        }
    }
    Report::new("ribbon", checked, None, None)
}

pub fn verify_modularity(c: &MtcData) -> Report {
    let s = super::smatrix(c);
    let det = s.determinant().expect("square");
    let failure = if det.is_zero() {
        Some(fail(vec![], &det, &c.zero(), "det S is zero"))
    } else {
        None
    };
    Report::new("modularity", 1, None, failure)
}

pub fn verify_all(c: &MtcData, mode: PentagonMode) -> Vec<Report> {
    vec![verify_pentagon(c, mode), verify_hexagon(c), verify_ribbon(c), verify_modularity(c)]
}
