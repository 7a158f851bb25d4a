//! Multi-modules over lists of algebras, twists and cyclic structures.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};
use crate::frobenius::{opposite, tensor_algebra, FrobeniusAlgebra};
use crate::homspace::{words_to_string, Cat, Morphism, SSObject};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One action ρ: A^ε ⊗ M → M. For ε = − the acting algebra is A^op.
#[derive(Clone, Debug)]
pub struct Action {
    pub base: Arc<FrobeniusAlgebra>,
    pub sign: Sign,
    pub alg: Arc<FrobeniusAlgebra>,
    pub rho: Morphism,
}

impl Action {
    pub fn new(cat: &Cat, base: Arc<FrobeniusAlgebra>, sign: Sign, rho: Morphism) -> Result<Action> {
        let alg = match sign {
            Sign::Plus => base.clone(),
            Sign::Minus => Arc::new(opposite(cat, &base)?),
        };
        Ok(Action { base, sign, alg, rho })
    }

    fn with_rho(&self, rho: Morphism) -> Action {
        Action { base: self.base.clone(), sign: self.sign, alg: self.alg.clone(), rho }
    }

    /// Same algebra and sign.
    pub fn same_decoration(&self, o: &Action) -> bool {
        self.sign == o.sign
            && (Arc::ptr_eq(&self.base, &o.base)
                || (self.base.obj == o.base.obj && self.base.mu == o.base.mu && self.base.delta == o.base.delta))
    }
}

#[derive(Clone, Debug)]
pub struct MultiModule {
    pub name: String,
    pub obj: Vec<SSObject>,
    pub actions: Vec<Action>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModuleReport {
    pub failures: Vec<String>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn concat(a: &[SSObject], b: &[SSObject]) -> Vec<SSObject> {
    a.iter().chain(b.iter()).cloned().collect()
}

impl MultiModule {
    pub fn n(&self) -> usize {
        self.actions.len()
    }

    /// The regular module A over (A, +).
    pub fn regular(cat: &Cat, a: &Arc<FrobeniusAlgebra>) -> Result<MultiModule> {
        Ok(MultiModule {
            name: a.name.clone(),
            obj: a.obj.clone(),
            actions: vec![Action::new(cat, a.clone(), Sign::Plus, a.mu.clone())?],
        })
    }

    /// A over (A, A) with μ used for both actions.
    pub fn regular_two_sided(cat: &Cat, a: &Arc<FrobeniusAlgebra>) -> Result<MultiModule> {
        let act = Action::new(cat, a.clone(), Sign::Plus, a.mu.clone())?;
        Ok(MultiModule { name: format!("{0}{0}{0}", a.name), obj: a.obj.clone(), actions: vec![act.clone(), act] })
    }

    /// The free module A ⊗ Y with action μ ⊗ 1.
    pub fn free(cat: &Cat, a: &Arc<FrobeniusAlgebra>, y: &[SSObject]) -> Result<MultiModule> {
        let rho = cat.tensor(&a.mu, &cat.id(y));
        Ok(MultiModule {
            name: format!("{}⊗{}", a.name, words_to_string(y)),
            obj: concat(&a.obj, y),
            actions: vec![Action::new(cat, a.clone(), Sign::Plus, rho)?],
        })
    }

    /// The plain object X as a module over the empty list.
    pub fn bare(obj: Vec<SSObject>) -> MultiModule {
        MultiModule { name: words_to_string(&obj), obj, actions: Vec::new() }
    }

    pub fn same_decorations(&self, o: &MultiModule) -> bool {
        self.n() == o.n() && self.actions.iter().zip(&o.actions).all(|(a, b)| a.same_decoration(b))
    }
}

/// Unit, associativity of each action and pairwise compatibility
/// ρ_j(1⊗ρ_i) = ρ_i(1⊗ρ_j)(c_{A_j,A_i}⊗1) for i < j.
pub fn check_multimodule(cat: &Cat, m: &MultiModule) -> Result<ModuleReport> {
    let mut rep = ModuleReport::default();
    let idm = cat.id(&m.obj);
    for (i, act) in m.actions.iter().enumerate() {
        let a = &act.alg;
        let want_dom = concat(&a.obj, &m.obj);
        if act.rho.dom != want_dom || act.rho.cod != m.obj {
            return Err(Error::mismatch(format!(
                "action {i} has type {} → {}",
                words_to_string(&act.rho.dom),
                words_to_string(&act.rho.cod)
            )));
        }
        let ida = cat.id(&a.obj);
        if cat.compose(&act.rho, &cat.tensor(&a.eta, &idm))? != idm {
            rep.failures.push(format!("action {i}: unit"));
        }
        let l = cat.compose(&act.rho, &cat.tensor(&a.mu, &idm))?;
        let r = cat.compose(&act.rho, &cat.tensor(&ida, &act.rho))?;
        if l != r {
            rep.failures.push(format!("action {i}: associativity"));
        }
    }
    for i in 0..m.n() {
        for j in i + 1..m.n() {
            let (ai, aj) = (&m.actions[i], &m.actions[j]);
            let lhs = cat.compose(&aj.rho, &cat.tensor(&cat.id(&aj.alg.obj), &ai.rho))?;
            let c = cat.braiding(&aj.alg.obj, &ai.alg.obj, false);
            let rhs = cat.chain(&[
                &cat.tensor(&c, &idm),
                &cat.tensor(&cat.id(&ai.alg.obj), &aj.rho),
                &ai.rho,
            ])?;
            if lhs != rhs {
                rep.failures.push(format!("actions {i} and {j}: compatibility"));
            }
        }
    }
    Ok(rep)
}

/// The combined action of A_1^{ε_1} ⊗ … ⊗ A_n^{ε_n}: ρ = ρ_1(1⊗ρ_2(1⊗ …)).
pub fn combine(cat: &Cat, m: &MultiModule) -> Result<(FrobeniusAlgebra, Morphism)> {
    let Some(last) = m.actions.last() else {
        return Err(Error::invalid("combine needs at least one action"));
    };
    let mut alg = (*last.alg).clone();
    let mut rho = last.rho.clone();
    for act in m.actions.iter().rev().skip(1) {
        rho = cat.compose(&act.rho, &cat.tensor(&cat.id(&act.alg.obj), &rho))?;
        alg = tensor_algebra(cat, &act.alg, &alg)?;
    }
    Ok((alg, rho))
}

/// Recover the individual actions ρ_i = ρ(η⊗…⊗1_{A_i}⊗…⊗η⊗1_M).
pub fn split(
    cat: &Cat,
    decorations: &[(Arc<FrobeniusAlgebra>, Sign)],
    obj: &[SSObject],
    rho: &Morphism,
) -> Result<MultiModule> {
    let mut actions = Vec::new();
    let proto: Vec<Action> = decorations
        .iter()
        .map(|(b, s)| Action::new(cat, b.clone(), *s, cat.zero(&[], &[])))
        .collect::<Result<_>>()?;
    for i in 0..proto.len() {
        let mut parts: Vec<Morphism> = proto
            .iter()
            .enumerate()
            .map(|(j, a)| if i == j { cat.id(&a.alg.obj) } else { a.alg.eta.clone() })
            .collect();
        parts.push(cat.id(obj));
        let refs: Vec<&Morphism> = parts.iter().collect();
        let inc = cat.tensor_all(&refs);
        actions.push(proto[i].with_rho(cat.compose(rho, &inc)?));
    }
    Ok(MultiModule { name: words_to_string(obj), obj: obj.to_vec(), actions })
}

/// ρ^tw = θ_M ∘ ρ ∘ (1 ⊗ θ_M^{-1}).
pub fn twist_action(cat: &Cat, a_obj: &[SSObject], m_obj: &[SSObject], rho: &Morphism) -> Result<Morphism> {
    cat.chain(&[
        &cat.tensor(&cat.id(a_obj), &cat.twist(m_obj, true)),
        rho,
        &cat.twist(m_obj, false),
    ])
}

/// The same twisted action written as ρ ∘ c_{M,A} ∘ c_{A,M} ∘ (θ_A ⊗ 1).
pub fn twist_action_braided(cat: &Cat, a_obj: &[SSObject], m_obj: &[SSObject], rho: &Morphism) -> Result<Morphism> {
    cat.chain(&[
        &cat.tensor(&cat.twist(a_obj, false), &cat.id(m_obj)),
        &cat.braiding(a_obj, m_obj, false),
        &cat.braiding(m_obj, a_obj, false),
        rho,
    ])
}

/// M^{tw_j}: actions (A_{j+1}, …, A_n, A_1^{tw}, …, A_j^{tw}).
pub fn twist_multimodule(cat: &Cat, m: &MultiModule, j: usize) -> Result<MultiModule> {
    if j > m.n() {
        return Err(Error::invalid(format!("twist index {j} exceeds {} actions", m.n())));
    }
    let mut actions: Vec<Action> = m.actions[j..].to_vec();
    for act in &m.actions[..j] {
        actions.push(act.with_rho(twist_action(cat, &act.alg.obj, &m.obj, &act.rho)?));
    }
    Ok(MultiModule { name: format!("{}^tw{j}", m.name), obj: m.obj.clone(), actions })
}

/// σ(a, b) = (⟨a⟩ + ⟨b⟩ − ⟨a+b⟩) / m for a, b ∈ Z/m.
pub fn sigma(a: i64, b: i64, m: i64) -> i64 {
    let r = |x: i64| x.rem_euclid(m);
    (r(a) + r(b) - r(a + b)) / m
}

/// θ_X^e for any integer e.
pub fn theta_power(cat: &Cat, x: &[SSObject], e: i64) -> Morphism {
    let mut acc = cat.id(x);
    let t = cat.twist(x, e < 0);
    for _ in 0..e.unsigned_abs() {
        acc = cat.compose(&t, &acc).expect("endomorphisms");
    }
    acc
}

/// f^e for an endomorphism and e ≥ 0.
pub fn power(cat: &Cat, f: &Morphism, e: usize) -> Result<Morphism> {
    let mut acc = cat.id(&f.dom);
    for _ in 0..e {
        acc = cat.compose(f, &acc)?;
    }
    Ok(acc)
}

/// tw_a(M) = M^{tw_{⟨a⟩·n/m}} for the Z/m action on a module whose list has period n/m.
pub fn cn_action(cat: &Cat, m: &MultiModule, group: usize, a: i64) -> Result<MultiModule> {
    if group == 0 || !m.n().is_multiple_of(group) {
        return Err(Error::invalid(format!("{} actions cannot carry a Z/{group} action", m.n())));
    }
    let block = m.n() / group;
    let p = minimal_period(&m.actions);
    if !block.is_multiple_of(p) {
        return Err(Error::invalid("the decoration list is not periodic in blocks of the given size"));
    }
    twist_multimodule(cat, m, a.rem_euclid(group as i64) as usize * block)
}

/// τ_{a,b} = θ_M^{-σ(a,b)}: tw_a tw_b M → tw_{a+b} M.
pub fn tau(cat: &Cat, m: &MultiModule, a: i64, b: i64, group: i64) -> Morphism {
    theta_power(cat, &m.obj, -sigma(a, b, group))
}

/// Smallest k dividing n such that the decoration list is k-periodic.
pub fn minimal_period(actions: &[Action]) -> usize {
    let n = actions.len();
    if n == 0 {
        return 1;
    }
    (1..=n)
        .filter(|k| n.is_multiple_of(*k))
        .find(|&k| (0..n).all(|i| actions[i].same_decoration(&actions[(i + k) % n])))
        .unwrap_or(n)
}

/// Whether f: M → N satisfies f ρ^M_i = ρ^N_i (1 ⊗ f) for every i.
pub fn is_module_map(cat: &Cat, f: &Morphism, m: &MultiModule, n: &MultiModule) -> Result<bool> {
    if m.n() != n.n() {
        return Err(Error::mismatch("modules over lists of different length"));
    }
    for (am, an) in m.actions.iter().zip(&n.actions) {
        let l = cat.compose(f, &am.rho)?;
        let r = cat.compose(&an.rho, &cat.tensor(&cat.id(&am.alg.obj), f))?;
        if l != r {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct CyclicStructure {
    pub module: MultiModule,
    pub k: usize,
    pub phi: Morphism,
}

#[derive(Clone, Debug, Default)]
pub struct CyclicReport {
    pub failures: Vec<String>,
}

impl CyclicReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Minimal period, φ: M^{tw_k} → M intertwining, and φ^{n/k} = θ_M^{-1}.
pub fn check_cyclic(cat: &Cat, s: &CyclicStructure) -> Result<CyclicReport> {
    let mut rep = CyclicReport::default();
    let m = &s.module;
    let n = m.n().max(1);
    let p = minimal_period(&m.actions);
    if s.k != p {
        rep.failures.push(format!("period {} is not the minimal period {p}", s.k));
    }
    if !n.is_multiple_of(s.k) {
        rep.failures.push(format!("period {} does not divide {n}", s.k));
        return Ok(rep);
    }
    if s.phi.dom != m.obj || s.phi.cod != m.obj {
        return Err(Error::mismatch("phi must be an endomorphism of the module object"));
    }
    let tw = twist_multimodule(cat, m, s.k.min(m.n()))?;
    if !is_module_map(cat, &s.phi, &tw, m)? {
        rep.failures.push("phi does not intertwine the twisted actions".into());
    }
    if power(cat, &s.phi, n / s.k)? != cat.twist(&m.obj, true) {
        rep.failures.push(format!("phi^{} differs from the inverse twist", n / s.k));
    }
    Ok(rep)
}

/// M ⊗ M over (A, A) for an A-module M, with ρ_1 = ρ⊗1,
/// ρ_2 = (1⊗ρ)(c_{A,M}⊗1) and φ = (1⊗θ_M^{-1}) c_{M,M}^{-1}.
pub fn tensor_square(cat: &Cat, m: &MultiModule) -> Result<CyclicStructure> {
    if m.n() != 1 {
        return Err(Error::invalid("tensor_square needs a module with one action"));
    }
    let act = &m.actions[0];
    let a = &act.alg.obj;
    let idm = cat.id(&m.obj);
    let rho1 = cat.tensor(&act.rho, &idm);
    let rho2 = cat.compose(
        &cat.tensor(&idm, &act.rho),
        &cat.tensor(&cat.braiding(a, &m.obj, false), &idm),
    )?;
    let obj = concat(&m.obj, &m.obj);
    let module = MultiModule {
        name: format!("{}⊗{}", m.name, m.name),
        obj: obj.clone(),
        actions: vec![act.with_rho(rho1), act.with_rho(rho2)],
    };
    let phi = cat.compose(
        &cat.tensor(&idm, &cat.twist(&m.obj, true)),
        &cat.braiding(&m.obj, &m.obj, true),
    )?;
    Ok(CyclicStructure { module, k: 1, phi })
}

/// Matrix of the averaging map f ↦ ρ^N(1⊗f)(1⊗ρ^M)(Δη⊗1) on Hom_C(M, N) for action i.
fn averaging_matrix(cat: &Cat, m: &MultiModule, n: &MultiModule, i: usize) -> Result<Matrix> {
    let (am, an) = (&m.actions[i], &n.actions[i]);
    let a = &am.alg;
    let ida = cat.id(&a.obj);
    let copair = cat.compose(&a.delta, &a.eta)?;
    let pre = cat.compose(&cat.tensor(&ida, &am.rho), &cat.tensor(&copair, &cat.id(&m.obj)))?;
    cat.linear_map_matrix(&m.obj, &n.obj, |f| cat.chain(&[&pre, &cat.tensor(&ida, f), &an.rho]))
}

/// The product of the per-action averaging idempotents on Hom_C(M, N).
pub fn module_hom_projector(cat: &Cat, m: &MultiModule, n: &MultiModule) -> Result<Matrix> {
    if !m.same_decorations(n) {
        return Err(Error::mismatch("modules are decorated by different lists"));
    }
    let d = cat.hom_dim(&m.obj, &n.obj);
    let mut p = Matrix::identity(d, cat.conductor());
    for i in 0..m.n() {
        p = averaging_matrix(cat, m, n, i)?.mul(&p)?;
    }
    Ok(p)
}

/// Column space basis of a matrix in reduced echelon form.
pub(crate) fn image_basis(p: &Matrix) -> Vec<Vec<CycScalar>> {
    let (r, piv) = p.transpose().rref();
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

pub fn module_hom_basis(cat: &Cat, m: &MultiModule, n: &MultiModule) -> Result<Vec<Morphism>> {
    let p = module_hom_projector(cat, m, n)?;
    image_basis(&p).iter().map(|v| cat.from_coords(&m.obj, &n.obj, v)).collect()
}

pub fn module_hom_dim(cat: &Cat, m: &MultiModule, n: &MultiModule) -> Result<usize> {
    Ok(module_hom_projector(cat, m, n)?.rank())
}

/// Dimension of the space of intertwiners obtained by solving the linear
/// equations f ρ^M_i − ρ^N_i (1⊗f) = 0 directly.
pub fn intertwiner_dim(cat: &Cat, m: &MultiModule, n: &MultiModule) -> Result<usize> {
    if !m.same_decorations(n) {
        return Err(Error::mismatch("modules are decorated by different lists"));
    }
    let d = cat.hom_dim(&m.obj, &n.obj);
    let mut rows: Vec<Vec<CycScalar>> = Vec::new();
    for (am, an) in m.actions.iter().zip(&n.actions) {
        let ida = cat.id(&am.alg.obj);
        let mat = cat.linear_map_matrix(&m.obj, &n.obj, |f| {
            cat.compose(f, &am.rho)?.sub(&cat.compose(&an.rho, &cat.tensor(&ida, f))?)
        })?;
        for i in 0..mat.rows() {
            rows.push(mat.row(i).to_vec());
        }
    }
    if rows.is_empty() {
        return Ok(d);
    }
    Ok(d - Matrix::from_rows(rows).rank())
}
