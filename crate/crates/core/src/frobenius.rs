//! Frobenius algebras in the category.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::category::Label;
use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};
use crate::homspace::{words_to_string, Cat, Morphism, SSObject};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFlags {
    pub is_frobenius: bool,
    pub is_symmetric: bool,
    pub is_delta_separable: bool,
    pub is_commutative: bool,
    pub is_haploid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub flags: AlgebraFlags,
    /// Names of the failed axioms, in checking order.
    pub failures: Vec<String>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        let f = self.flags;
        f.is_frobenius && f.is_symmetric && f.is_delta_separable
    }
}

/// A Frobenius algebra on a factor list (one factor except for tensor products).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrobeniusAlgebra {
    pub name: String,
    pub obj: Vec<SSObject>,
    pub mu: Morphism,
    pub eta: Morphism,
    pub delta: Morphism,
    pub eps: Morphism,
    pub flags: AlgebraFlags,
}

impl FrobeniusAlgebra {
    pub fn obj2(&self) -> Vec<SSObject> {
        self.obj.iter().chain(self.obj.iter()).cloned().collect()
    }

    pub fn with_structure(
        cat: &Cat,
        name: &str,
        obj: Vec<SSObject>,
        mu: Morphism,
        eta: Morphism,
        delta: Morphism,
        eps: Morphism,
    ) -> Result<FrobeniusAlgebra> {
        let mut a = FrobeniusAlgebra { name: name.into(), obj, mu, eta, delta, eps, flags: AlgebraFlags::default() };
        let rep = check_algebra(cat, &a)?;
        a.flags = rep.flags;
        Ok(a)
    }

    pub fn dim(&self, cat: &Cat) -> CycScalar {
        cat.dim(&self.obj)
    }
}

fn expect_type(m: &Morphism, dom: &[SSObject], cod: &[SSObject], what: &str) -> Result<()> {
    if m.dom != dom || m.cod != cod {
        return Err(Error::mismatch(format!(
            "{what} has type {} → {}, expected {} → {}",
            words_to_string(&m.dom),
            words_to_string(&m.cod),
            words_to_string(dom),
            words_to_string(cod)
        )));
    }
    Ok(())
}

/// Evaluate every axiom as an exact morphism equality.
pub fn check_algebra(cat: &Cat, a: &FrobeniusAlgebra) -> Result<AlgebraReport> {
    let x = &a.obj;
    let xx = a.obj2();
    expect_type(&a.mu, &xx, x, "mu")?;
    expect_type(&a.eta, &[], x, "eta")?;
    expect_type(&a.delta, x, &xx, "delta")?;
    expect_type(&a.eps, x, &[], "eps")?;
    let id = cat.id(x);
    let mut failures = Vec::new();
    let mut check = |ok: bool, name: &str| {
        if !ok {
            failures.push(name.to_string());
        }
        ok
    };
    let c = |g: &Morphism, f: &Morphism| cat.compose(g, f);
    let t = |f: &Morphism, g: &Morphism| cat.tensor(f, g);

    let unit_l = check(c(&a.mu, &t(&a.eta, &id))? == id, "left unit");
    let unit_r = check(c(&a.mu, &t(&id, &a.eta))? == id, "right unit");
    let assoc = check(
        c(&a.mu, &t(&a.mu, &id))? == c(&a.mu, &t(&id, &a.mu))?,
        "associativity",
    );
    let counit_l = check(c(&t(&a.eps, &id), &a.delta)? == id, "left counit");
    let counit_r = check(c(&t(&id, &a.eps), &a.delta)? == id, "right counit");
    let coassoc = check(
        c(&t(&a.delta, &id), &a.delta)? == c(&t(&id, &a.delta), &a.delta)?,
        "coassociativity",
    );
    let dm = c(&a.delta, &a.mu)?;
    let frob_l = check(c(&t(&id, &a.mu), &t(&a.delta, &id))? == dm, "Frobenius (left)");
    let frob_r = check(c(&t(&a.mu, &id), &t(&id, &a.delta))? == dm, "Frobenius (right)");
    let pairing = c(&a.eps, &a.mu)?;
    let braid = cat.braiding(x, x, false);
    let sym_rhs = cat.chain(&[&t(&id, &cat.twist(x, false)), &braid, &a.mu, &a.eps])?;
    let symmetric = check(pairing == sym_rhs, "symmetry");
    let sep = check(c(&a.mu, &a.delta)? == id, "Delta-separability");
    let commutative = c(&a.mu, &braid)? == a.mu;
    let haploid = cat.hom_dim(&[], x) == 1;
    let flags = AlgebraFlags {
        is_frobenius: unit_l && unit_r && assoc && counit_l && counit_r && coassoc && frob_l && frob_r,
        is_symmetric: symmetric,
        is_delta_separable: sep,
        is_commutative: commutative,
        is_haploid: haploid,
    };
    Ok(AlgebraReport { flags, failures })
}

/// The monoidal unit with identity structure maps.
pub fn trivial_algebra(cat: &Cat) -> FrobeniusAlgebra {
    let obj = vec![SSObject::simple(0)];
    let oo = vec![SSObject::simple(0), SSObject::simple(0)];
    let one = || cat.one();
    let mu = cat.elementary(&oo, &obj, 0, (&[0], &[0]), (&[0, 0], &[0, 0]), one()).expect("unit");
    let eta = cat.elementary(&[], &obj, 0, (&[0], &[0]), (&[], &[]), one()).expect("unit");
    let delta = cat.elementary(&obj, &oo, 0, (&[0, 0], &[0, 0]), (&[0], &[0]), one()).expect("unit");
    let eps = cat.elementary(&obj, &[], 0, (&[], &[]), (&[0], &[0]), one()).expect("unit");
    FrobeniusAlgebra::with_structure(cat, "trivial", obj, mu, eta, delta, eps).expect("trivial algebra")
}

/// A^op with μ∘c_{A,A} and c_{A,A}^{-1}∘Δ.
pub fn opposite(cat: &Cat, a: &FrobeniusAlgebra) -> Result<FrobeniusAlgebra> {
    let c = cat.braiding(&a.obj, &a.obj, false);
    let ci = cat.braiding(&a.obj, &a.obj, true);
    FrobeniusAlgebra::with_structure(
        cat,
        &format!("{}^op", a.name),
        a.obj.clone(),
        cat.compose(&a.mu, &c)?,
        a.eta.clone(),
        cat.compose(&ci, &a.delta)?,
        a.eps.clone(),
    )
}

/// A ⊗ B with μ = (μ_A⊗μ_B)(1⊗c_{B,A}⊗1) and Δ = (1⊗c_{B,A}^{-1}⊗1)(Δ_A⊗Δ_B).
pub fn tensor_algebra(cat: &Cat, a: &FrobeniusAlgebra, b: &FrobeniusAlgebra) -> Result<FrobeniusAlgebra> {
    let ia = cat.id(&a.obj);
    let ib = cat.id(&b.obj);
    let mid = cat.braiding(&b.obj, &a.obj, false);
    let mu = cat.compose(
        &cat.tensor(&a.mu, &b.mu),
        &cat.tensor_all(&[&ia, &mid, &ib]),
    )?;
    let mid_inv = cat.braiding(&a.obj, &b.obj, true);
    let delta = cat.compose(
        &cat.tensor_all(&[&ia, &mid_inv, &ib]),
        &cat.tensor(&a.delta, &b.delta),
    )?;
    let obj: Vec<SSObject> = a.obj.iter().chain(b.obj.iter()).cloned().collect();
    FrobeniusAlgebra::with_structure(
        cat,
        &format!("({})⊗({})", a.name, b.name),
        obj,
        mu,
        cat.tensor(&a.eta, &b.eta),
        delta,
        cat.tensor(&a.eps, &b.eps),
    )
}

/// X ⊗ X* with μ = 1 ⊗ ev_X ⊗ 1, η = coev_X, Δ = d_X^{-1}(1 ⊗ c̃oev_X ⊗ 1) and ε = d_X ẽv_X.
pub fn endomorphism_algebra(cat: &Cat, x: &SSObject) -> Result<FrobeniusAlgebra> {
    let xd = x.dual(cat);
    let ix = cat.id(std::slice::from_ref(x));
    let ixd = cat.id(std::slice::from_ref(&xd));
    let d = cat.dim(std::slice::from_ref(x));
    let mu = cat.tensor_all(&[&ix, &cat.ev(x), &ixd]);
    let delta = cat.tensor_all(&[&ix, &cat.coev_tilde(x), &ixd]).scale(&d.inv()?);
    FrobeniusAlgebra::with_structure(
        cat,
        &format!("End({x})"),
        vec![x.clone(), xd],
        mu,
        cat.coev(x),
        delta,
        cat.ev_tilde(x).scale(&d),
    )
}

// ---------------------------------------------------------------------------
// haploid solver

type Monomial = Vec<usize>;

/// Sparse multivariate polynomial with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
struct Poly {
    terms: BTreeMap<Monomial, CycScalar>,
}

impl Poly {
    fn zero() -> Poly {
        Poly { terms: BTreeMap::new() }
    }

    fn constant(c: CycScalar) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    fn var(i: usize, n: u32) -> Poly {
        let mut p = Poly::zero();
        p.add_term(vec![i], CycScalar::one(n));
        p
    }

    fn add_term(&mut self, mut m: Monomial, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        m.sort_unstable();
        let e = self.terms.entry(m.clone()).or_insert_with(|| CycScalar::zero(c.conductor()));
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    fn scale(&self, s: &CycScalar) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c * s);
        }
        p
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                p.add_term(m, c1 * c2);
            }
        }
        p
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn as_constant(&self) -> Option<CycScalar> {
        match self.terms.len() {
            0 => Some(CycScalar::zero(1)),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn degree_in(&self, x: usize) -> usize {
        self.terms.keys().map(|m| m.iter().filter(|&&y| y == x).count()).max().unwrap_or(0)
    }

    /// Substitute x := q.
    fn subst(&self, x: usize, q: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let k = m.iter().filter(|&&y| y == x).count();
            let rest: Monomial = m.iter().copied().filter(|&y| y != x).collect();
            let mut t = Poly::zero();
            t.add_term(rest, c.clone());
            for _ in 0..k {
                t = t.mul(q);
            }
            out = out.add(&t);
        }
        out
    }

    /// A variable occurring in every monomial.
    fn common_var(&self) -> Option<usize> {
        let first = self.terms.keys().next()?;
        first.iter().copied().find(|x| self.terms.keys().all(|m| m.contains(x)))
    }

    fn divide_by(&self, x: usize) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            let mut m = m.clone();
            let i = m.iter().position(|&y| y == x).expect("divisible");
            m.remove(i);
            p.add_term(m, c.clone());
        }
        p
    }

    /// If x occurs only in the term c·x with constant c, return (c, rest).
    fn linear_in(&self, x: usize) -> Option<(CycScalar, Poly)> {
        let mut coef = None;
        let mut rest = Poly::zero();
        for (m, c) in &self.terms {
            if m.contains(&x) {
                if m.len() != 1 {
                    return None;
                }
                coef = Some(c.clone());
            } else {
                rest.add_term(m.clone(), c.clone());
            }
        }
        coef.map(|c| (c, rest))
    }
}

/// Exact square root when the radicand is a rational times a root of unity.
fn sqrt_exact(x: &CycScalar) -> Option<CycScalar> {
    if x.is_zero() {
        return Some(x.clone());
    }
    let n = x.conductor();
    let big = num_integer::lcm(2 * n, 4);
    let xl = x.lift(big);
    for j in 0..big as i64 {
        let r = &xl * &CycScalar::root_of_unity(big, -2 * j);
        if let Some((p, q)) = r.as_rational() {
            if p.is_negative() {
                continue;
            }
            let (sp, sq) = (rational_sqrt(&p)?, rational_sqrt(&q)?);
            return Some(CycScalar::from_bigratio(big, sp, sq) * CycScalar::root_of_unity(big, j));
        }
    }
    None
}

fn rational_sqrt(p: &BigInt) -> Option<BigInt> {
    if p.is_negative() {
        return None;
    }
    let s = p.sqrt();
    if &(&s * &s) == p {
        Some(s)
    } else {
        None
    }
}

struct SolverState {
    eqs: Vec<Poly>,
    /// Assigned variables as polynomials in the remaining ones.
    subs: BTreeMap<usize, Poly>,
}

fn solve_system(state: SolverState, nvars: usize, n: u32, depth: usize) -> Result<Vec<Vec<CycScalar>>> {
    let mut st = state;
    loop {
        let mut eqs: Vec<Poly> = Vec::new();
        for e in &st.eqs {
            if e.is_zero() {
                continue;
            }
            if let Some(c) = e.as_constant() {
                if !c.is_zero() {
                    return Ok(Vec::new());
                }
                continue;
            }
            if !eqs.contains(e) {
                eqs.push(e.clone());
            }
        }
        st.eqs = eqs;
        if st.eqs.is_empty() {
            let mut sol = Vec::with_capacity(nvars);
            for v in 0..nvars {
                let p = st.subs.get(&v).ok_or_else(|| {
                    Error::verification(format!("structure constant {v} is not determined by the equations"))
                })?;
                let c = p.as_constant().ok_or_else(|| {
                    Error::verification(format!("structure constant {v} is not determined by the equations"))
                })?;
                sol.push(c.lift(n));
            }
            return Ok(vec![sol]);
        }
        // linear elimination, shortest equations first
        let mut order: Vec<usize> = (0..st.eqs.len()).collect();
        order.sort_by_key(|&i| st.eqs[i].terms.len());
        let mut step = None;
        'find: for &i in &order {
            for x in st.eqs[i].vars() {
                if let Some((c, rest)) = st.eqs[i].linear_in(x) {
                    let q = rest.scale(&(-c.inv()?));
                    step = Some((x, q));
                    break 'find;
                }
            }
        }
        if let Some((x, q)) = step {
            st.eqs = st.eqs.iter().map(|e| e.subst(x, &q)).collect();
            for p in st.subs.values_mut() {
                *p = p.subst(x, &q);
            }
            st.subs.insert(x, q);
            continue;
        }
        // univariate quadratic: branch on the roots
        for &i in &order {
            let vars = st.eqs[i].vars();
            if vars.len() != 1 || st.eqs[i].degree_in(vars[0]) != 2 {
                continue;
            }
            let x = vars[0];
            let coef = |k: usize| {
                st.eqs[i].terms.get(&vec![x; k]).cloned().unwrap_or_else(|| CycScalar::zero(n))
            };
            let (a, b, c) = (coef(2), coef(1), coef(0));
            let disc = &b * &b - CycScalar::from_i64(n, 4) * &a * &c;
            let s = sqrt_exact(&disc).ok_or_else(|| {
                Error::verification(format!(
                    "structure constants need the square root of {disc}, which was not found in a cyclotomic field"
                ))
            })?;
            let two_a = CycScalar::from_i64(n, 2) * &a;
            let mut roots = vec![(-&b + &s).div(&two_a)?];
            if !s.is_zero() {
                roots.push((-&b - &s).div(&two_a)?);
            }
            let mut out = Vec::new();
            for r in roots {
                let q = Poly::constant(r);
                let mut subs = st.subs.clone();
                for p in subs.values_mut() {
                    *p = p.subst(x, &q);
                }
                subs.insert(x, q.clone());
                let eqs = st.eqs.iter().map(|e| e.subst(x, &q)).collect();
                out.extend(solve_system(SolverState { eqs, subs }, nvars, n, depth + 1)?);
            }
            return Ok(out);
        }
        // an equation divisible by an unknown: branch on whether it vanishes
        if depth < 16 {
            for &i in &order {
                let Some(x) = st.eqs[i].common_var() else { continue };
                let mut out = Vec::new();
                let zero = Poly::zero();
                let mut subs = st.subs.clone();
                for p in subs.values_mut() {
                    *p = p.subst(x, &zero);
                }
                subs.insert(x, zero.clone());
                let eqs = st.eqs.iter().map(|e| e.subst(x, &zero)).collect();
                out.extend(solve_system(SolverState { eqs, subs }, nvars, n, depth + 1)?);
                let mut eqs = st.eqs.clone();
                eqs[i] = eqs[i].divide_by(x);
                out.extend(solve_system(SolverState { eqs, subs: st.subs.clone() }, nvars, n, depth + 1)?);
                return Ok(out);
            }
        }
        return Err(Error::verification(format!(
            "the structure-constant system could not be reduced ({} equations left)",
            st.eqs.len()
        )));
    }
}

/// A product channel a ⊗ b → c among the summands of the object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Channel {
    a: Label,
    b: Label,
    c: Label,
}

/// Enumerate haploid Δ-separable symmetric Frobenius structures on a
/// multiplicity-free object containing the unit once.
pub fn solve_haploid_algebra(cat: &Cat, obj: &SSObject) -> Result<Vec<FrobeniusAlgebra>> {
    if obj.multiplicity(0) != 1 {
        return Err(Error::invalid("the object must contain the unit exactly once"));
    }
    if obj.terms().iter().any(|&(_, k)| k != 1) {
        return Err(Error::invalid("only multiplicity-free objects are supported"));
    }
    let labels: Vec<Label> = obj.simples();
    if labels == [0] {
        return Ok(vec![trivial_algebra(cat)]);
    }
    let n = cat.conductor();
    let in_obj = |l: Label| labels.contains(&l);
    let mut channels = Vec::new();
    for &a in &labels {
        for &b in &labels {
            if a == 0 || b == 0 {
                continue;
            }
            for &c in cat.fuse(a, b) {
                if in_obj(c) {
                    channels.push(Channel { a, b, c });
                }
            }
        }
    }
    // gauge: λ_a rescales channel (a,b,c) by λ_a λ_b / λ_c
    let nonunit: Vec<Label> = labels.iter().copied().filter(|&l| l != 0).collect();
    let weight = |ch: &Channel| -> Vec<i64> {
        nonunit
            .iter()
            .map(|&l| (ch.a == l) as i64 + (ch.b == l) as i64 - (ch.c == l) as i64)
            .collect()
    };
    let mut preferred: Vec<Channel> = channels.iter().copied().filter(|ch| ch.c != 0).collect();
    preferred.extend(channels.iter().copied().filter(|ch| ch.c == 0));
    let mut gauge_sets = Vec::new();
    // greedy choice first, then alternatives dropping one channel at a time
    let greedy = |skip: &[Channel]| -> Vec<Channel> {
        let mut chosen: Vec<Channel> = Vec::new();
        let mut rows: Vec<Vec<CycScalar>> = Vec::new();
        for ch in preferred.iter().filter(|c| !skip.contains(c)) {
            let w: Vec<CycScalar> = weight(ch).iter().map(|&x| CycScalar::from_i64(1, x)).collect();
            let mut trial = rows.clone();
            trial.push(w);
            if crate::linalg::Matrix::from_rows(trial.clone()).rank() > rows.len() {
                rows = trial;
                chosen.push(*ch);
            }
            if rows.len() == nonunit.len() {
                break;
            }
        }
        chosen
    };
    let g0 = greedy(&[]);
    gauge_sets.push(g0.clone());
    for ch in &g0 {
        let g = greedy(&[*ch]);
        if g.len() == nonunit.len() && !gauge_sets.contains(&g) {
            gauge_sets.push(g);
        }
    }
    let idx = |ch: &Channel| channels.iter().position(|x| x == ch);
    let m = |a: Label, b: Label, c: Label| -> Poly {
        if !in_obj(a) || !in_obj(b) || !in_obj(c) || !cat.n(a, b, c) {
            return Poly::zero();
        }
        if a == 0 || b == 0 {
            return Poly::constant(cat.one());
        }
        Poly::var(idx(&Channel { a, b, c }).expect("channel"), n)
    };
    let mut base_eqs = Vec::new();
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                for &d in &labels {
                    let fm = cat.fmatrix(a, b, c, d);
                    for (ei, &e) in fm.es.iter().enumerate() {
                        let lhs = m(a, b, e).mul(&m(e, c, d));
                        let mut rhs = Poly::zero();
                        for (fi, &f) in fm.fs.iter().enumerate() {
                            let fv = fm.m.get(ei, fi);
                            if !fv.is_zero() {
                                rhs = rhs.add(&m(b, c, f).mul(&m(a, f, d)).scale(fv));
                            }
                        }
                        let eq = lhs.add(&rhs.scale(&CycScalar::from_i64(n, -1)));
                        if !eq.is_zero() {
                            base_eqs.push(eq);
                        }
                    }
                }
            }
        }
    }
    let mut found = Vec::new();
    let mut last_err = None;
    for gauge in &gauge_sets {
        let mut eqs = base_eqs.clone();
        for ch in gauge {
            let mut e = Poly::var(idx(ch).unwrap(), n);
            e.add_term(Vec::new(), CycScalar::from_i64(n, -1));
            eqs.push(e);
        }
        match solve_system(SolverState { eqs, subs: BTreeMap::new() }, channels.len(), n, 0) {
            Ok(sols) => {
                for s in sols {
                    if !found.contains(&s) {
                        found.push(s);
                    }
                }
                if !found.is_empty() {
                    break;
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    if found.is_empty() {
        if let Some(e) = last_err {
            return Err(e);
        }
    }
    let mut out = Vec::new();
    for sol in found {
        let consts: Vec<(Label, Label, Label, CycScalar)> =
            channels.iter().zip(&sol).map(|(ch, v)| (ch.a, ch.b, ch.c, v.clone())).collect();
        if let Some(alg) = algebra_from_constants(cat, obj, &consts)? {
            out.push(alg);
        }
    }
    out.sort_by_key(|a| format!("{:?}", a.mu.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>()));
    for (i, a) in out.iter_mut().enumerate() {
        a.name = if i == 0 { format!("A({obj})") } else { format!("A({obj})#{i}") };
    }
    Ok(out)
}

/// Build μ, η from structure constants, then ε, Δ so that the result is a
/// Δ-separable Frobenius algebra. Returns None if the data admit no such
/// structure or the result is not symmetric.
pub fn algebra_from_constants(
    cat: &Cat,
    obj: &SSObject,
    consts: &[(Label, Label, Label, CycScalar)],
) -> Result<Option<FrobeniusAlgebra>> {
    let x = vec![obj.clone()];
    let xx = vec![obj.clone(), obj.clone()];
    let simples = obj.simples();
    let pos = |l: Label| simples.iter().position(|&s| s == l).expect("label in object");
    let mut mu = cat.zero(&xx, &x);
    let mut set_mu = |a: Label, b: Label, c: Label, v: &CycScalar| -> Result<()> {
        let e = cat.elementary(&xx, &x, c, (&[pos(c)], &[c]), (&[pos(a), pos(b)], &[a, c]), v.clone())?;
        mu = mu.add(&e)?;
        Ok(())
    };
    for &l in &simples {
        set_mu(0, l, l, &cat.one())?;
        if l != 0 {
            set_mu(l, 0, l, &cat.one())?;
        }
    }
    for (a, b, c, v) in consts {
        set_mu(*a, *b, *c, v)?;
    }
    let eta = cat.elementary(&[], &x, 0, (&[pos(0)], &[0]), (&[], &[]), cat.one())?;
    let eps0 = cat.elementary(&x, &[], 0, (&[], &[]), (&[pos(0)], &[0]), cat.one())?;
    let Some(delta0) = copairing_coproduct(cat, &x, &mu, &eps0)? else {
        return Ok(None);
    };
    // μ∘Δ is a scalar multiple of the identity for haploid algebras
    let md = cat.compose(&mu, &delta0)?;
    let b0 = md.block(0).expect("unit sector");
    let beta = b0.get(pos_in_sector(cat, &x, 0, pos(0)), pos_in_sector(cat, &x, 0, pos(0))).clone();
    if beta.is_zero() {
        return Ok(None);
    }
    let eps = eps0.scale(&beta);
    let delta = delta0.scale(&beta.inv()?);
    let alg = FrobeniusAlgebra::with_structure(cat, "A", x, mu, eta, delta, eps)?;
    let f = alg.flags;
    if f.is_frobenius && f.is_delta_separable && f.is_symmetric {
        Ok(Some(alg))
    } else {
        Ok(None)
    }
}

fn pos_in_sector(cat: &Cat, x: &[SSObject], c: Label, copy: usize) -> usize {
    cat.basis(x, c).position(&[copy], &[c]).expect("simple summand")
}

/// Δ = (μ ⊗ 1)(1 ⊗ κ^{-1}) for the pairing κ = ε∘μ, if κ is non-degenerate.
fn copairing_coproduct(cat: &Cat, x: &[SSObject], mu: &Morphism, eps: &Morphism) -> Result<Option<Morphism>> {
    let xx: Vec<SSObject> = x.iter().chain(x.iter()).cloned().collect();
    let kappa = cat.compose(eps, mu)?;
    let id = cat.id(x);
    // the copairing z: 1 → A⊗A with (κ⊗1)(1⊗z) = id
    let mat = cat.linear_map_matrix(&[], &xx, |z| cat.compose(&cat.tensor(&kappa, &id), &cat.tensor(&id, z)))?;
    let Some(zc) = mat.solve(&id.coords())? else {
        return Ok(None);
    };
    let z = cat.from_coords(&[], &xx, &zc)?;
    Ok(Some(cat.compose(&cat.tensor(mu, &id), &cat.tensor(&id, &z))?))
}

/// Structure constants m_{ab}^c of a single-factor multiplicity-free algebra.
pub fn structure_constants(cat: &Cat, a: &FrobeniusAlgebra) -> Vec<(Label, Label, Label, CycScalar)> {
    let obj = &a.obj[0];
    let simples = obj.simples();
    let x = vec![obj.clone()];
    let xx = vec![obj.clone(), obj.clone()];
    let mut out = Vec::new();
    for (i, &l1) in simples.iter().enumerate() {
        for (j, &l2) in simples.iter().enumerate() {
            for &c in cat.fuse(l1, l2) {
                let Some(k) = simples.iter().position(|&s| s == c) else { continue };
                let row = cat.basis(&x, c).position(&[k], &[c]).unwrap();
                let col = cat.basis(&xx, c).position(&[i, j], &[l1, c]).unwrap();
                let v = a.mu.block(c).unwrap().get(row, col).clone();
                if !v.is_zero() {
                    out.push((l1, l2, c, v));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub category: String,
    pub name: String,
    pub object: Vec<Vec<(Label, usize)>>,
    pub mu: Morphism,
    pub eta: Morphism,
    pub delta: Morphism,
    pub eps: Morphism,
    #[serde(default)]
    pub flags: Option<AlgebraFlags>,
}

impl FrobeniusAlgebra {
    pub fn to_json(&self, category: &str) -> AlgebraJson {
        AlgebraJson {
            category: category.into(),
            name: self.name.clone(),
            object: self.obj.iter().map(|o| o.terms().to_vec()).collect(),
            mu: self.mu.clone(),
            eta: self.eta.clone(),
            delta: self.delta.clone(),
            eps: self.eps.clone(),
            flags: Some(self.flags),
        }
    }

    /// Load and re-verify; stored flags are ignored.
    pub fn from_json(cat: &Cat, j: &AlgebraJson) -> Result<(FrobeniusAlgebra, AlgebraReport)> {
        let obj: Vec<SSObject> = j.object.iter().map(|t| SSObject::new(t)).collect();
        let mut a = FrobeniusAlgebra {
            name: j.name.clone(),
            obj,
            mu: j.mu.clone(),
            eta: j.eta.clone(),
            delta: j.delta.clone(),
            eps: j.eps.clone(),
            flags: AlgebraFlags::default(),
        };
        let rep = check_algebra(cat, &a)?;
        a.flags = rep.flags;
        Ok((a, rep))
    }
}
