//! Skeletal modular tensor category data.
//!
//! Fusion is multiplicity free: every N_{ij}^k is 0 or 1, so F- and
//! R-symbols carry no multiplicity indices. The unit is always label 0.
//!
//! Conventions for splitting trees: `L(e) = ((a b)_e c)_d` and
//! `R(f) = (a (b c)_f)_d` are related by `L(e) = Σ_f F^{abc}_d[e,f] R(f)`,
//! and the braiding acts on a splitting vertex by
//! `c_{x,y} ∘ v^f_{xy} = R^{xy}_f · v^f_{yx}`.

mod io;
mod modular;
mod sl2;
mod verify;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use parking_lot::RwLock;

use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub use io::{CategoryJson, FEntry, REntry};
pub use modular::{anomaly_check, smatrix, tmatrix, AnomalyReport};
pub use sl2::gen_sl2k;
pub use verify::{
    sample_pentagon_instances, verify_all, verify_hexagon, verify_modularity, verify_pentagon, verify_ribbon, Failure,
    PentagonMode, Report,
};

pub type Label = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    labels: Vec<String>,
    dual: Vec<Label>,
    /// `products[a][b]` lists every c with N_{ab}^c = 1, ascending.
    products: Vec<Vec<Vec<Label>>>,
    table: Vec<bool>,
}

impl FusionRing {
    pub fn new(labels: Vec<String>, dual: Vec<Label>, triples: &[[Label; 3]]) -> Result<FusionRing> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::invalid("fusion ring needs at least the unit label"));
        }
        if dual.len() != n {
            return Err(Error::invalid("dual table has wrong length"));
        }
        for (i, &d) in dual.iter().enumerate() {
            if d >= n || dual[d] != i {
                return Err(Error::invalid(format!("dual is not an involution at label {i}")));
            }
        }
        let mut table = vec![false; n * n * n];
        for t in triples {
            if t.iter().any(|&x| x >= n) {
                return Err(Error::invalid(format!("fusion triple {t:?} out of range")));
            }
            table[(t[0] * n + t[1]) * n + t[2]] = true;
        }
        let mut products = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[(a * n + b) * n + c] {
                        products[a][b].push(c);
                    }
                }
            }
        }
        let ring = FusionRing { labels, dual, products, table };
        ring.check_axioms()?;
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.rank();
        for j in 0..n {
            for k in 0..n {
                if self.n(0, j, k) != (j == k) || self.n(j, 0, k) != (j == k) {
                    return Err(Error::invalid(format!("unit axiom fails at ({j},{k})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.n(i, j, 0) != (j == self.dual[i]) {
                    return Err(Error::invalid(format!("duality axiom fails at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs: usize =
                            self.fuse(i, j).iter().filter(|&&e| self.n(e, k, l)).count();
                        let rhs: usize =
                            self.fuse(j, k).iter().filter(|&&f| self.n(i, f, l)).count();
                        if lhs != rhs {
                            return Err(Error::invalid(format!(
                                "fusion associativity fails at ({i},{j},{k};{l})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dual(&self, a: Label) -> Label {
        self.dual[a]
    }

    pub fn n(&self, a: Label, b: Label, c: Label) -> bool {
        let n = self.rank();
        self.table[(a * n + b) * n + c]
    }

    pub fn fuse(&self, a: Label, b: Label) -> &[Label] {
        &self.products[a][b]
    }

    pub fn triples(&self) -> Vec<[Label; 3]> {
        let n = self.rank();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for &c in self.fuse(a, b) {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    /// Whether (a,b,c;d;e,f) indexes a nonzero F-symbol slot.
    pub fn f_admissible(&self, t: [Label; 6]) -> bool {
        let [a, b, c, d, e, f] = t;
        self.n(a, b, e) && self.n(e, c, d) && self.n(b, c, f) && self.n(a, f, d)
    }
}

/// F^{abc}_d as a square matrix with row labels e and column labels f.
pub struct FMatrix {
    pub es: Vec<Label>,
    pub fs: Vec<Label>,
    pub m: Matrix,
    inv: OnceLock<Matrix>,
}

impl FMatrix {
    pub fn inverse(&self) -> &Matrix {
        self.inv.get_or_init(|| self.m.inverse().expect("F-matrix must be invertible"))
    }

    pub fn row_of(&self, e: Label) -> Option<usize> {
        self.es.iter().position(|&x| x == e)
    }

    pub fn col_of(&self, f: Label) -> Option<usize> {
        self.fs.iter().position(|&x| x == f)
    }

    pub fn get(&self, e: Label, f: Label) -> Option<&CycScalar> {
        Some(self.m.get(self.row_of(e)?, self.col_of(f)?))
    }

    /// (F^{-1})[f, e].
    pub fn inv_get(&self, f: Label, e: Label) -> Option<&CycScalar> {
        Some(self.inverse().get(self.col_of(f)?, self.row_of(e)?))
    }
}

enum FSource {
    Explicit(HashMap<[Label; 6], CycScalar>),
    Sl2(sl2::Sl2Symbols),
}

/// Skeletal modular tensor category.
pub struct MtcData {
    name: String,
    ring: FusionRing,
    conductor: u32,
    f_source: FSource,
    r: HashMap<[Label; 3], CycScalar>,
    r_inv: HashMap<[Label; 3], CycScalar>,
    theta: Vec<CycScalar>,
    theta_inv: Vec<CycScalar>,
    qdim: Vec<CycScalar>,
    fcache: RwLock<HashMap<[Label; 4], Arc<FMatrix>>>,
}

impl MtcData {
    fn build(
        name: String,
        ring: FusionRing,
        conductor: u32,
        f_source: FSource,
        r: HashMap<[Label; 3], CycScalar>,
        theta: Vec<CycScalar>,
        qdim: Vec<CycScalar>,
    ) -> Result<MtcData> {
        let n = ring.rank();
        if theta.len() != n || qdim.len() != n {
            return Err(Error::invalid("theta/qdim length differs from label count"));
        }
        for t in ring.triples() {
            if !r.contains_key(&t) {
                return Err(Error::invalid(format!("missing R-symbol {t:?}")));
            }
        }
        let mut r_inv = HashMap::new();
        for (k, v) in &r {
            r_inv.insert(*k, v.inv().map_err(|_| Error::invalid(format!("R{k:?} is zero")))?);
        }
        let theta_inv = theta
            .iter()
            .map(|t| t.inv().map_err(|_| Error::invalid("zero twist")))
            .collect::<Result<Vec<_>>>()?;
        if qdim.iter().any(|d| d.is_zero()) {
            return Err(Error::invalid("zero quantum dimension"));
        }
        Ok(MtcData {
            name,
            ring,
            conductor,
            f_source,
            r,
            r_inv,
            theta,
            theta_inv,
            qdim,
            fcache: RwLock::new(HashMap::new()),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn dual(&self, a: Label) -> Label {
        self.ring.dual(a)
    }

    pub fn n(&self, a: Label, b: Label, c: Label) -> bool {
        self.ring.n(a, b, c)
    }

    pub fn fuse(&self, a: Label, b: Label) -> &[Label] {
        self.ring.fuse(a, b)
    }

    pub fn zero(&self) -> CycScalar {
        CycScalar::zero(self.conductor)
    }

    pub fn one(&self) -> CycScalar {
        CycScalar::one(self.conductor)
    }

    pub fn scalar(&self, v: i64) -> CycScalar {
        CycScalar::from_i64(self.conductor, v)
    }

    pub fn theta(&self, a: Label) -> &CycScalar {
        &self.theta[a]
    }

    pub fn theta_inv(&self, a: Label) -> &CycScalar {
        &self.theta_inv[a]
    }

    pub fn qdim(&self, a: Label) -> &CycScalar {
        &self.qdim[a]
    }

    pub fn r(&self, a: Label, b: Label, c: Label) -> &CycScalar {
        self.r.get(&[a, b, c]).unwrap_or_else(|| panic!("R^{{{a}{b}}}_{c} not admissible"))
    }

    pub fn r_inv(&self, a: Label, b: Label, c: Label) -> &CycScalar {
        self.r_inv.get(&[a, b, c]).unwrap_or_else(|| panic!("R^{{{a}{b}}}_{c} not admissible"))
    }

    pub fn fmatrix(&self, a: Label, b: Label, c: Label, d: Label) -> Arc<FMatrix> {
        let key = [a, b, c, d];
        if let Some(m) = self.fcache.read().get(&key) {
            return m.clone();
        }
        let es: Vec<Label> =
            self.fuse(a, b).iter().copied().filter(|&e| self.n(e, c, d)).collect();
        let fs: Vec<Label> =
            self.fuse(b, c).iter().copied().filter(|&f| self.n(a, f, d)).collect();
        let m = Matrix::from_fn(es.len(), fs.len(), |i, j| self.f_raw([a, b, c, d, es[i], fs[j]]));
        let fm = Arc::new(FMatrix { es, fs, m, inv: OnceLock::new() });
        self.fcache.write().entry(key).or_insert(fm).clone()
    }

    fn f_raw(&self, t: [Label; 6]) -> CycScalar {
        match &self.f_source {
            FSource::Explicit(map) => map.get(&t).cloned().unwrap_or_else(|| self.zero()),
            FSource::Sl2(s) => s.f(t),
        }
    }

    /// F^{abc}_d[e,f]; zero when the slot is not admissible.
    pub fn f(&self, a: Label, b: Label, c: Label, d: Label, e: Label, f: Label) -> CycScalar {
        let m = self.fmatrix(a, b, c, d);
        m.get(e, f).cloned().unwrap_or_else(|| self.zero())
    }

    /// (F^{abc}_d)^{-1}[f,e].
    pub fn finv(&self, a: Label, b: Label, c: Label, d: Label, f: Label, e: Label) -> CycScalar {
        let m = self.fmatrix(a, b, c, d);
        m.inv_get(f, e).cloned().unwrap_or_else(|| self.zero())
    }

    /// All admissible F-slots in lexicographic order.
    pub fn f_slots(&self) -> Vec<[Label; 6]> {
        let n = self.rank();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for &e in self.fuse(a, b) {
                            if !self.n(e, c, d) {
                                continue;
                            }
                            for &f in self.fuse(b, c) {
                                if self.n(a, f, d) {
                                    out.push([a, b, c, d, e, f]);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn materialize_f(&mut self) {
        if let FSource::Sl2(_) = &self.f_source {
            let map = self.f_slots().into_iter().map(|t| (t, self.f_raw(t))).collect();
            self.f_source = FSource::Explicit(map);
        }
    }

    /// Overwrite one F-symbol (used for mutation testing and hand-built data).
    pub fn set_f(&mut self, t: [Label; 6], v: CycScalar) -> Result<()> {
        if !self.ring.f_admissible(t) {
            return Err(Error::invalid(format!("F-slot {t:?} is not admissible")));
        }
        self.materialize_f();
        if let FSource::Explicit(map) = &mut self.f_source {
            map.insert(t, v);
        }
        self.fcache.write().clear();
        Ok(())
    }

    pub fn set_r(&mut self, t: [Label; 3], v: CycScalar) -> Result<()> {
        if !self.ring.n(t[0], t[1], t[2]) {
            return Err(Error::invalid(format!("R-slot {t:?} is not admissible")));
        }
        let inv = v.inv()?;
        self.r.insert(t, v);
        self.r_inv.insert(t, inv);
        Ok(())
    }

    pub fn set_theta(&mut self, a: Label, v: CycScalar) -> Result<()> {
        self.theta_inv[a] = v.inv()?;
        self.theta[a] = v;
        Ok(())
    }

    pub fn set_qdim(&mut self, a: Label, v: CycScalar) -> Result<()> {
        if v.is_zero() {
            return Err(Error::invalid("zero quantum dimension"));
        }
        self.qdim[a] = v;
        Ok(())
    }

    /// Sum of d_i² over all simples.
    pub fn global_dim_sq(&self) -> CycScalar {
        let mut acc = self.zero();
        for d in &self.qdim {
            acc = acc + d * d;
        }
        acc
    }
}

impl Clone for MtcData {
    fn clone(&self) -> Self {
        let f_source = match &self.f_source {
            FSource::Explicit(m) => FSource::Explicit(m.clone()),
            FSource::Sl2(s) => FSource::Sl2(s.clone()),
        };
        MtcData {
            name: self.name.clone(),
            ring: self.ring.clone(),
            conductor: self.conductor,
            f_source,
            r: self.r.clone(),
            r_inv: self.r_inv.clone(),
            theta: self.theta.clone(),
            theta_inv: self.theta_inv.clone(),
            qdim: self.qdim.clone(),
            fcache: RwLock::new(self.fcache.read().clone()),
        }
    }
}

impl std::fmt::Debug for MtcData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MtcData({}, {} labels, N={})", self.name, self.rank(), self.conductor)
    }
}

/// The category with a single simple object.
pub fn trivial_category() -> MtcData {
    let ring = FusionRing::new(vec!["0".into()], vec![0], &[[0, 0, 0]]).expect("trivial ring");
    let mut f = HashMap::new();
    f.insert([0; 6], CycScalar::one(1));
    let mut r = HashMap::new();
    r.insert([0, 0, 0], CycScalar::one(1));
    MtcData::build(
        "trivial".into(),
        ring,
        1,
        FSource::Explicit(f),
        r,
        vec![CycScalar::one(1)],
        vec![CycScalar::one(1)],
    )
    .expect("trivial category")
}
