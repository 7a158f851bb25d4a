//! Left/right centers, the full-center matrix and invariants of surfaces
//! embedded in T³ and S²×S¹.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::category::{smatrix, tmatrix};
use crate::category::Label;
use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};
use crate::frobenius::{trivial_algebra, FrobeniusAlgebra};
use crate::homspace::{Cat, Morphism, SSObject};
use crate::linalg::Matrix;
use crate::multimodule::{check_multimodule, module_hom_dim, Action, MultiModule, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CenterData {
    pub algebra: String,
    pub side: Side,
    pub projector: Morphism,
    pub multiplicities: BTreeMap<Label, usize>,
    pub qdim: CycScalar,
}

impl CenterData {
    /// The center as a semisimple object.
    pub fn object(&self) -> SSObject {
        let pairs: Vec<(Label, usize)> =
            self.multiplicities.iter().filter(|(_, &m)| m > 0).map(|(&l, &m)| (l, m)).collect();
        SSObject::new(&pairs)
    }
}

/// P(x) = e′ · x · e″ for the copairing e′ ⊗ e″ = Δη, with e″ carried past x
/// by the braiding (left) or the inverse braiding (right). Checked to be
/// idempotent with a braided commutative image.
pub fn center_projector(cat: &Cat, a: &FrobeniusAlgebra, side: Side) -> Result<CenterData> {
    let inverse = side == Side::Right;
    let id = cat.id(&a.obj);
    let copair = cat.compose(&a.delta, &a.eta)?;
    let c = cat.braiding(&a.obj, &a.obj, inverse);
    let p = cat.chain(&[
        &cat.tensor(&copair, &id),
        &cat.tensor(&id, &c),
        &cat.tensor(&a.mu, &id),
        &a.mu,
    ])?;
    if cat.compose(&p, &p)? != p {
        return Err(Error::verification(format!("{side} center projector of {} is not idempotent", a.name)));
    }
    // elements of the image commute with A through the braiding
    let plain = cat.compose(&a.mu, &cat.tensor(&id, &p))?;
    let braided = cat.chain(&[&cat.tensor(&id, &p), &c, &a.mu])?;
    if plain != braided {
        return Err(Error::verification(format!(
            "the image of the {side} center projector of {} is not braided commutative",
            a.name
        )));
    }
    let mut multiplicities = BTreeMap::new();
    for (&l, b) in p.blocks() {
        multiplicities.insert(l, b.rank());
    }
    let qdim = cat.qtrace(&p)?;
    let mut expected = cat.data().zero();
    for (&l, &m) in &multiplicities {
        expected = expected + &(cat.qdim(l) * &cat.scalar(m as i64));
    }
    if qdim != expected {
        return Err(Error::verification("center dimension disagrees with its multiplicities"));
    }
    Ok(CenterData { algebra: a.name.clone(), side, projector: p, multiplicities, qdim })
}

/// A ⊗ U_i over ((A,+), (A,−)): μ ⊗ 1 on the left, and on the right μ after
/// moving A past U_i by the braiding (sign +) or the inverse braiding (sign −).
pub fn alpha_bimodule(cat: &Cat, a: &Arc<FrobeniusAlgebra>, i: Label, sign: Sign) -> Result<MultiModule> {
    let u = vec![SSObject::simple(i)];
    let obj: Vec<SSObject> = a.obj.iter().chain(&u).cloned().collect();
    let id_a = cat.id(&a.obj);
    let id_u = cat.id(&u);
    let left = cat.tensor(&a.mu, &id_u);
    let pass = cat.braiding(&u, &a.obj, sign == Sign::Minus);
    let right = cat.chain(&[&cat.tensor(&id_a, &pass), &cat.tensor(&a.mu, &id_u)])?;
    // as a left action of A^op
    let rho = cat.compose(&right, &cat.braiding(&a.obj, &obj, false))?;
    let m = MultiModule {
        name: format!("alpha{sign}({i})"),
        obj,
        actions: vec![Action::new(cat, a.clone(), Sign::Plus, left)?, Action::new(cat, a.clone(), Sign::Minus, rho)?],
    };
    let rep = check_multimodule(cat, &m)?;
    if !rep.passed() {
        return Err(Error::verification(format!("{}: {}", m.name, rep.failures.join("; "))));
    }
    Ok(m)
}

/// Index conventions for Z̃: whether the second label is dualized and
/// whether the first index carries the + induction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZConvention {
    pub dual_second: bool,
    pub plus_first: bool,
}

impl ZConvention {
    pub const ALL: [ZConvention; 4] = [
        ZConvention { dual_second: false, plus_first: true },
        ZConvention { dual_second: true, plus_first: true },
        ZConvention { dual_second: false, plus_first: false },
        ZConvention { dual_second: true, plus_first: false },
    ];
}

impl fmt::Display for ZConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, t) = if self.plus_first { ("+", "-") } else { ("-", "+") };
        let j = if self.dual_second { "j*" } else { "j" };
        write!(f, "Hom(alpha{s}(i), alpha{t}({j}))")
    }
}

#[derive(Clone, Debug)]
pub struct FullCenterMatrix {
    pub z: Vec<Vec<usize>>,
    pub convention: ZConvention,
    /// Every convention that passed calibration, in enumeration order.
    pub passing: Vec<ZConvention>,
}

impl FullCenterMatrix {
    pub fn trace(&self) -> usize {
        (0..self.z.len()).map(|i| self.z[i][i]).sum()
    }

    pub fn to_matrix(&self, n: u32) -> Matrix {
        Matrix::from_fn(self.z.len(), self.z.len(), |i, j| CycScalar::from_i64(n, self.z[i][j] as i64))
    }
}

fn z_with(cat: &Cat, a: &Arc<FrobeniusAlgebra>, conv: ZConvention) -> Result<Vec<Vec<usize>>> {
    let r = cat.rank();
    let (s1, s2) = if conv.plus_first { (Sign::Plus, Sign::Minus) } else { (Sign::Minus, Sign::Plus) };
    let firsts: Vec<MultiModule> = (0..r).map(|i| alpha_bimodule(cat, a, i, s1)).collect::<Result<_>>()?;
    let seconds: Vec<MultiModule> = (0..r)
        .map(|j| alpha_bimodule(cat, a, if conv.dual_second { cat.dual(j) } else { j }, s2))
        .collect::<Result<_>>()?;
    let entries: Vec<Result<usize>> = (0..r * r)
        .into_par_iter()
        .map(|p| module_hom_dim(cat, &firsts[p / r], &seconds[p % r]))
        .collect();
    let mut z = vec![vec![0; r]; r];
    for (p, e) in entries.into_iter().enumerate() {
        z[p / r][p % r] = e?;
    }
    Ok(z)
}

fn commutes_with_modular_data(cat: &Cat, z: &Matrix) -> Result<bool> {
    for m in [smatrix(cat), tmatrix(cat)] {
        if z.mul(&m)? != m.mul(z)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn calibrates(cat: &Cat, a: &Arc<FrobeniusAlgebra>, conv: ZConvention, z: &[Vec<usize>]) -> Result<bool> {
    let r = cat.rank();
    let m = Matrix::from_fn(r, r, |i, j| CycScalar::from_i64(cat.conductor(), z[i][j] as i64));
    if !commutes_with_modular_data(cat, &m)? {
        return Ok(false);
    }
    if a.flags.is_haploid && z[0][0] != 1 {
        return Ok(false);
    }
    let one = Arc::new(trivial_algebra(cat));
    let z1 = z_with(cat, &one, conv)?;
    Ok((0..r).all(|i| (0..r).all(|j| z1[i][j] == (i == j) as usize)))
}

fn convention_cache() -> &'static Mutex<HashMap<String, (ZConvention, Vec<ZConvention>)>> {
    static CACHE: OnceLock<Mutex<HashMap<String, (ZConvention, Vec<ZConvention>)>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Z̃(A)_{ij} as the dimension of bimodule maps between α-induced
/// bimodules. The index convention is calibrated once per category: every
/// variant is tried and the first one that gives the identity for the
/// trivial algebra, commutes with S̃ and T and has Z̃_00 = 1 for haploid A is
/// kept. Later calls reuse it and still check the invariants.
pub fn full_center_matrix(cat: &Cat, a: &Arc<FrobeniusAlgebra>) -> Result<FullCenterMatrix> {
    let key = cat.name().to_string();
    let cached = convention_cache().lock().get(&key).cloned();
    if let Some((convention, passing)) = cached {
        let z = z_with(cat, a, convention)?;
        let m = Matrix::from_fn(z.len(), z.len(), |i, j| CycScalar::from_i64(cat.conductor(), z[i][j] as i64));
        if !commutes_with_modular_data(cat, &m)? || (a.flags.is_haploid && z[0][0] != 1) {
            return Err(Error::verification(format!(
                "Z of {} under the calibrated convention {convention} fails its invariants: {z:?}",
                a.name
            )));
        }
        return Ok(FullCenterMatrix { z, convention, passing });
    }
    let self_dual = (0..cat.rank()).all(|i| cat.dual(i) == i);
    let mut found: Option<(ZConvention, Vec<Vec<usize>>)> = None;
    let mut passing = Vec::new();
    let mut dumps = Vec::new();
    for conv in ZConvention::ALL {
        if conv.dual_second && self_dual {
            continue;
        }
        let z = z_with(cat, a, conv)?;
        if calibrates(cat, a, conv, &z)? {
            passing.push(conv);
            if found.is_none() {
                found = Some((conv, z));
            }
        } else {
            dumps.push(format!("{conv}: {z:?}"));
        }
    }
    match found {
        Some((convention, z)) => {
            convention_cache().lock().insert(key, (convention, passing.clone()));
            Ok(FullCenterMatrix { z, convention, passing })
        }
        None => Err(Error::verification(format!(
            "no index convention for Z of {} passes calibration:\n{}",
            a.name,
            dumps.join("\n")
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct T3Invariants {
    pub iota0_plus: CycScalar,
    pub iota0_minus: CycScalar,
    pub iota1_plus: usize,
    pub iota1_minus: usize,
    pub iota2: usize,
}

/// Σ_i Σ_c mult_c N_{ic}^i.
pub fn iota1(cat: &Cat, center: &CenterData) -> usize {
    let mut n = 0;
    for i in 0..cat.rank() {
        for (&c, &m) in &center.multiplicities {
            if cat.n(i, c, i) {
                n += m;
            }
        }
    }
    n
}

/// The same number computed as Σ_i dim Hom(U_i ⊗ C, U_i) in the hom-space layer.
pub fn iota1_by_hom_spaces(cat: &Cat, center: &CenterData) -> usize {
    let c = center.object();
    (0..cat.rank())
        .map(|i| {
            let u = SSObject::simple(i);
            cat.hom_dim(&[u.clone(), c.clone()], &[u])
        })
        .sum()
}

pub fn t3_invariants(cat: &Cat, a: &Arc<FrobeniusAlgebra>) -> Result<T3Invariants> {
    let r = CycScalar::from_i64(cat.conductor(), cat.rank() as i64);
    let left = center_projector(cat, a, Side::Left)?;
    let right = center_projector(cat, a, Side::Right)?;
    let z = full_center_matrix(cat, a)?;
    Ok(T3Invariants {
        iota0_plus: &left.qdim * &r,
        iota0_minus: &right.qdim * &r,
        iota1_plus: iota1(cat, &left),
        iota1_minus: iota1(cat, &right),
        iota2: z.trace(),
    })
}

/// Three-manifolds whose Reshetikhin-Turaev invariant is recorded as data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Manifold {
    S2xS1,
    T3,
}

impl FromStr for Manifold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Manifold> {
        match s.to_ascii_lowercase().as_str() {
            "s2xs1" => Ok(Manifold::S2xS1),
            "t3" => Ok(Manifold::T3),
            _ => Err(Error::invalid(format!("no invariant is recorded for the manifold {s:?} (known: S2xS1, T3)"))),
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Manifold::S2xS1 => "S2xS1",
            Manifold::T3 => "T3",
        })
    }
}

pub fn rt_invariant(cat: &Cat, m: Manifold) -> CycScalar {
    match m {
        Manifold::S2xS1 => cat.one(),
        Manifold::T3 => CycScalar::from_i64(cat.conductor(), cat.rank() as i64),
    }
}

/// dim(A) times the invariant of the ambient manifold.
pub fn sphere_embedding_invariant(cat: &Cat, a: &FrobeniusAlgebra, m: Manifold) -> CycScalar {
    &a.dim(cat) * &rt_invariant(cat, m)
}

/// The D-type modular invariant at level k ≡ 0 mod 4: on even labels
/// Z_ij = δ_{i,j} + δ_{i,k−j}; zero on odd labels.
pub fn d_series_invariant(k: usize) -> Result<Vec<Vec<usize>>> {
    if !k.is_multiple_of(4) || k == 0 {
        return Err(Error::invalid(format!("the D-series invariant needs k divisible by 4, got {k}")));
    }
    let r = k + 1;
    Ok((0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i % 2 == 1 || j % 2 == 1 { 0 } else { (i == j) as usize + (i + j == k) as usize })
                .collect()
        })
        .collect())
}
