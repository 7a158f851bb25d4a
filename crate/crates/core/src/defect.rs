//! Triangulated defect surfaces, their dual ribbon networks, and sphere
//! state spaces.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::CycScalar;
use crate::diagram::{evaluate, evaluate_closed, Chirality, Generator, SlicedDiagram, Strand};
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusAlgebra;
use crate::homspace::{Cat, Morphism};
use crate::linalg::Matrix;
use crate::multimodule::{
    power, twist_multimodule, CyclicStructure, MultiModule, Sign,
};

// ---------------------------------------------------------------------------
// triangulations

/// An oriented triangulated surface. Triangles are listed with their
/// vertices in the cyclic order given by the surface orientation; the
/// numeric order on vertices orients each simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub triangles: Vec<[usize; 3]>,
}

fn rotate_min(t: [usize; 3]) -> [usize; 3] {
    let i = (0..3).min_by_key(|&i| t[i]).unwrap();
    [t[i], t[(i + 1) % 3], t[(i + 2) % 3]]
}

fn edges(t: &[usize; 3]) -> [(usize, usize); 3] {
    [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
}

impl Triangulation {
    pub fn tetrahedron() -> Triangulation {
        Triangulation { triangles: vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]] }
    }

    pub fn octahedron() -> Triangulation {
        Triangulation {
            triangles: vec![
                [0, 1, 2],
                [0, 2, 3],
                [0, 3, 4],
                [0, 4, 1],
                [5, 2, 1],
                [5, 3, 2],
                [5, 4, 3],
                [5, 1, 4],
            ],
        }
    }

    pub fn single_triangle() -> Triangulation {
        Triangulation { triangles: vec![[0, 1, 2]] }
    }

    /// Triangles with a canonical starting vertex, sorted.
    pub fn normalized(&self) -> Triangulation {
        let mut t: Vec<[usize; 3]> = self.triangles.iter().map(|&t| rotate_min(t)).collect();
        t.sort_unstable();
        Triangulation { triangles: t }
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.triangles.iter().flatten().copied().collect()
    }

    fn directed_edges(&self) -> HashMap<(usize, usize), usize> {
        let mut m = HashMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            for e in edges(t) {
                m.insert(e, i);
            }
        }
        m
    }

    /// Checks orientability, the manifold condition at every vertex, and
    /// returns whether the surface is closed.
    pub fn validate(&self) -> Result<bool> {
        let mut seen = HashMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::invalid(format!("triangle {i} is degenerate")));
            }
            for e in edges(t) {
                if seen.insert(e, i).is_some() {
                    return Err(Error::invalid(format!(
                        "edge {}→{} occurs twice with the same direction; the surface is not consistently oriented",
                        e.0, e.1
                    )));
                }
            }
        }
        let closed = seen.keys().all(|&(a, b)| seen.contains_key(&(b, a)));
        // vertex links must be a single path or cycle
        for v in self.vertices() {
            let mut next = HashMap::new();
            for t in &self.triangles {
                if let Some(i) = t.iter().position(|&x| x == v) {
                    next.insert(t[(i + 1) % 3], t[(i + 2) % 3]);
                }
            }
            let targets: BTreeSet<usize> = next.values().copied().collect();
            let start = next.keys().copied().find(|k| !targets.contains(k)).or_else(|| next.keys().copied().min());
            let mut cur = start.unwrap();
            let mut count = 0;
            while let Some(&n) = next.get(&cur) {
                count += 1;
                cur = n;
                if Some(cur) == start || count > next.len() {
                    break;
                }
            }
            if count != next.len() {
                return Err(Error::invalid(format!("the link of vertex {v} is not connected")));
            }
        }
        Ok(closed)
    }

    pub fn euler_characteristic(&self) -> i64 {
        let v = self.vertices().len() as i64;
        let e = self.directed_edges().keys().map(|&(a, b)| (a.min(b), a.max(b))).collect::<BTreeSet<_>>().len() as i64;
        v - e + self.triangles.len() as i64
    }

    fn fresh_vertex(&self) -> usize {
        self.vertices().iter().next_back().map(|v| v + 1).unwrap_or(0)
    }

    /// Subdivide a triangle by a new vertex.
    pub fn pachner_13(&self, face: usize) -> Result<Triangulation> {
        let [a, b, c] = *self.triangles.get(face).ok_or_else(|| Error::invalid(format!("no triangle {face}")))?;
        let v = self.fresh_vertex();
        let mut t = self.triangles.clone();
        t.remove(face);
        t.extend([[a, b, v], [b, c, v], [c, a, v]]);
        Ok(Triangulation { triangles: t })
    }

    /// Remove a vertex of degree three.
    pub fn pachner_31(&self, v: usize) -> Result<Triangulation> {
        let star: Vec<usize> = (0..self.triangles.len()).filter(|&i| self.triangles[i].contains(&v)).collect();
        if star.len() != 3 {
            return Err(Error::invalid(format!("vertex {v} does not have degree three")));
        }
        let mut next = HashMap::new();
        for &i in &star {
            let t = self.triangles[i];
            let p = t.iter().position(|&x| x == v).unwrap();
            next.insert(t[(p + 1) % 3], t[(p + 2) % 3]);
        }
        let a = *next.keys().min().unwrap();
        let b = next[&a];
        let c = *next.get(&b).ok_or_else(|| Error::invalid("the star is not a disk"))?;
        if next.get(&c) != Some(&a) {
            return Err(Error::invalid("the star is not a disk"));
        }
        if self.triangles.iter().any(|t| rotate_min(*t) == rotate_min([a, b, c])) {
            return Err(Error::invalid("removing the vertex would duplicate a triangle"));
        }
        let mut t: Vec<[usize; 3]> =
            self.triangles.iter().enumerate().filter(|(i, _)| !star.contains(i)).map(|(_, t)| *t).collect();
        t.push([a, b, c]);
        Ok(Triangulation { triangles: t })
    }

    /// Flip the edge {a, b}.
    pub fn pachner_22(&self, a: usize, b: usize) -> Result<Triangulation> {
        let de = self.directed_edges();
        let (Some(&i), Some(&j)) = (de.get(&(a, b)), de.get(&(b, a))) else {
            return Err(Error::invalid(format!("edge {{{a}, {b}}} is not interior")));
        };
        let third = |t: [usize; 3]| *t.iter().find(|&&x| x != a && x != b).unwrap();
        let (c, d) = (third(self.triangles[i]), third(self.triangles[j]));
        if c == d || de.contains_key(&(c, d)) || de.contains_key(&(d, c)) {
            return Err(Error::invalid(format!("edge {{{a}, {b}}} cannot be flipped")));
        }
        let mut t: Vec<[usize; 3]> = self
            .triangles
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, t)| *t)
            .collect();
        t.push([a, d, c]);
        t.push([b, c, d]);
        Ok(Triangulation { triangles: t })
    }

    /// Undirected edges {a, b} with a < b.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let s: BTreeSet<(usize, usize)> =
            self.directed_edges().keys().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        s.into_iter().collect()
    }

    /// Whether the simplex orientation from the vertex order agrees with the surface.
    pub fn positively_oriented(t: &[usize; 3]) -> bool {
        let r = rotate_min(*t);
        r[1] < r[2]
    }
}

/// Spheres reached from the tetrahedron by `moves` random Pachner moves,
/// keeping at most `max_triangles` triangles.
pub fn random_sphere(seed: u64, moves: usize, max_triangles: usize) -> Triangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Triangulation::tetrahedron();
    let mut done = 0;
    let mut attempts = 0;
    while done < moves && attempts < 100 * moves.max(1) {
        attempts += 1;
        let next = match rng.gen_range(0..3) {
            0 if t.triangles.len() + 2 <= max_triangles => t.pachner_13(rng.gen_range(0..t.triangles.len())),
            1 => {
                let e = t.edges();
                let (a, b) = e[rng.gen_range(0..e.len())];
                t.pachner_22(a, b)
            }
            2 if t.triangles.len() > 4 => {
                let v: Vec<usize> = t.vertices().into_iter().collect();
                t.pachner_31(v[rng.gen_range(0..v.len())])
            }
            _ => continue,
        };
        if let Ok(n) = next {
            t = n;
            done += 1;
        }
    }
    t
}

// ---------------------------------------------------------------------------
// dual networks

/// Poincaré-dual ribbon network of a triangulated patch.
#[derive(Clone, Debug)]
pub struct DefectNetwork {
    pub diagram: SlicedDiagram,
    /// Boundary edges of the patch, one per group of output strands.
    pub boundary: Vec<(usize, usize)>,
    pub mu_vertices: usize,
    pub delta_vertices: usize,
}

/// Vertex morphisms A^{⊗s} → A^{⊗(3−s)} built around μ (negative simplices)
/// or Δ (positive simplices), legs bent with the Frobenius pairing.
fn vertex_morphisms(cat: &Cat, a: &FrobeniusAlgebra) -> Result<BTreeMap<String, Morphism>> {
    let id = cat.id(&a.obj);
    let copair = cat.compose(&a.delta, &a.eta)?;
    let pair = cat.compose(&a.eps, &a.mu)?;
    let mut g = BTreeMap::new();
    // μ-type
    let m2 = a.mu.clone();
    let m1 = cat.compose(&cat.tensor(&a.mu, &id), &cat.tensor(&id, &copair))?;
    let m0 = cat.compose(&cat.tensor(&id, &m1), &copair)?;
    let m3 = cat.chain(&[&cat.tensor(&a.mu, &id), &a.mu, &a.eps])?;
    // Δ-type
    let d1 = a.delta.clone();
    let d2 = cat.compose(&cat.tensor(&id, &pair), &cat.tensor(&a.delta, &id))?;
    let d0 = cat.compose(&cat.tensor(&a.delta, &id), &copair)?;
    let d3 = cat.compose(&pair, &cat.tensor(&d2, &id))?;
    for (s, m) in [(0, m0), (1, m1), (2, m2), (3, m3)] {
        g.insert(format!("mu{s}"), m);
    }
    for (s, m) in [(0, d0), (1, d1), (2, d2), (3, d3)] {
        g.insert(format!("delta{s}"), m);
    }
    Ok(g)
}

/// Move the last strand group to the front by carrying it around the
/// bottom of the diagram.
fn rotate_last_to_front(d: &mut SlicedDiagram, width: usize) {
    for _ in 0..width {
        let last = d.output.last().expect("nonempty").clone();
        let n = d.output.len();
        let mut slices = vec![vec![Generator::Cup { strand: last.clone() }]];
        for s in &d.slices {
            let mut row = vec![Generator::Id];
            row.extend(s.iter().cloned());
            row.push(Generator::Id);
            slices.push(row);
        }
        let mut top = vec![Generator::Id; n];
        top.push(Generator::Cap { strand: last.clone() });
        slices.push(top);
        let mut out = vec![last];
        out.extend(d.output[..n - 1].iter().cloned());
        d.slices = slices;
        d.output = out;
    }
}

/// Dualize a triangulated patch. Triangles are attached one at a time along
/// the current boundary; the strands of the diagram are the boundary edges.
pub fn dualize(cat: &Cat, a: &FrobeniusAlgebra, tri: &Triangulation) -> Result<DefectNetwork> {
    tri.validate()?;
    let width = a.obj.len();
    let mut d = SlicedDiagram::new(Vec::new());
    for (k, v) in vertex_morphisms(cat, a)? {
        d.define(&k, v);
    }
    let mut boundary: Vec<(usize, usize)> = Vec::new();
    let mut placed = vec![false; tri.triangles.len()];
    let (mut nmu, mut ndelta) = (0, 0);
    for step in 0..tri.triangles.len() {
        // pick the next triangle: contiguous run with the boundary, no pinching
        let mut choice = None;
        for (ti, t) in tri.triangles.iter().enumerate() {
            if placed[ti] {
                continue;
            }
            if step == 0 {
                choice = Some((ti, 0usize, 0usize, 0usize));
                break;
            }
            let shared: Vec<usize> = edges(t)
                .iter()
                .filter_map(|&(x, y)| boundary.iter().position(|&e| e == (y, x)))
                .collect();
            let s = shared.len();
            if s == 0 {
                continue;
            }
            let nb = boundary.len();
            // start of the cyclic run
            let Some(start) = shared.iter().copied().find(|&p| (0..s).all(|o| shared.contains(&((p + o) % nb)))) else {
                continue;
            };
            if s == 3 && nb != 3 {
                continue;
            }
            if s == 1 {
                let (x, y) = boundary[start];
                let r = *t.iter().find(|&&v| v != x && v != y).unwrap();
                if boundary.iter().any(|&(p, _)| p == r) {
                    continue;
                }
            }
            if s == 2 && nb == 2 {
                continue;
            }
            let wraps = start + s > nb;
            let better = match choice {
                None => true,
                Some((_, _, _, w)) => w == 1 && !wraps,
            };
            if better {
                choice = Some((ti, s, start, wraps as usize));
                if !wraps {
                    break;
                }
            }
        }
        let (ti, s, mut start, _) = choice.ok_or_else(|| Error::invalid("the patch cannot be built by attaching triangles"))?;
        let t = tri.triangles[ti];
        while step > 0 && start + s > boundary.len() {
            rotate_last_to_front(&mut d, width);
            let e = boundary.pop().unwrap();
            boundary.insert(0, e);
            start = (start + 1) % boundary.len();
        }
        // new boundary edges: the triangle's edges not shared, in cyclic order after the shared run
        let new_edges: Vec<(usize, usize)> = if step == 0 {
            edges(&t).to_vec()
        } else {
            let first_shared = boundary[start];
            let k = edges(&t).iter().position(|&(x, y)| (y, x) == first_shared).unwrap();
            let es = edges(&t);
            // the shared run in boundary order is the reverse of the triangle's order
            (1..=3 - s).map(|o| es[(k + o) % 3]).collect()
        };
        let kind = if Triangulation::positively_oriented(&t) { "delta" } else { "mu" };
        if kind == "mu" {
            nmu += 1;
        } else {
            ndelta += 1;
        }
        let name = format!("{kind}{s}");
        d.push_at(cat, start * width, Generator::Named { name })?;
        let mut nb = boundary[..start].to_vec();
        nb.extend(new_edges.iter().copied());
        nb.extend(boundary[start + s..].iter().copied());
        boundary = nb;
        placed[ti] = true;
    }
    Ok(DefectNetwork { diagram: d, boundary, mu_vertices: nmu, delta_vertices: ndelta })
}

/// Value of the dual network of a closed surface.
pub fn evaluate_closed_network(cat: &Cat, a: &FrobeniusAlgebra, tri: &Triangulation) -> Result<CycScalar> {
    if !tri.validate()? {
        return Err(Error::invalid("the triangulation has boundary"));
    }
    let net = dualize(cat, a, tri)?;
    evaluate_closed(cat, &net.diagram)
}

// ---------------------------------------------------------------------------
// defect data

/// A surface defect: an algebra with the 3-strata on its two sides.
#[derive(Clone, Debug)]
pub struct SurfaceDatum {
    pub algebra: Arc<FrobeniusAlgebra>,
    pub source: usize,
    pub target: usize,
}

/// A line defect with its surfaces listed anticlockwise and its label.
#[derive(Clone, Debug)]
pub struct LineDatum {
    pub around: Vec<(usize, Sign)>,
    pub module: MultiModule,
    /// The same line seen with the opposite orientation, if given.
    pub reversed: Option<Vec<(usize, Sign)>>,
}

#[derive(Clone, Debug)]
pub struct DefectData {
    pub surfaces: Vec<SurfaceDatum>,
    pub lines: Vec<LineDatum>,
}

/// The list seen from the other side: reversed with signs flipped.
pub fn reverse_line(list: &[(usize, Sign)]) -> Vec<(usize, Sign)> {
    list.iter().rev().map(|&(f, s)| (f, s.flip())).collect()
}

pub fn validate_defect_data(cat: &Cat, data: &DefectData) -> Result<()> {
    let side = |f: usize, s: Sign| -> Result<(usize, usize)> {
        let d = data.surfaces.get(f).ok_or_else(|| Error::invalid(format!("unknown surface {f}")))?;
        Ok(match s {
            Sign::Plus => (d.source, d.target),
            Sign::Minus => (d.target, d.source),
        })
    };
    for (li, line) in data.lines.iter().enumerate() {
        let n = line.around.len();
        if n == 0 {
            if !line.module.actions.is_empty() {
                return Err(Error::invalid(format!("line {li}: a line without surfaces carries actions")));
            }
            if cat.twist(&line.module.obj, false) != cat.id(&line.module.obj) {
                return Err(Error::invalid(format!(
                    "line {li}: a line without adjacent surfaces needs a label with trivial twist"
                )));
            }
        }
        for i in 0..n {
            let (f, s) = line.around[i];
            let (g, t) = line.around[(i + 1) % n];
            let (_, exit) = side(f, s)?;
            let (entry, _) = side(g, t)?;
            if exit != entry {
                return Err(Error::invalid(format!(
                    "line {li}: surface {f} ends in region {exit} but surface {g} starts in region {entry}"
                )));
            }
        }
        if line.module.n() != n {
            return Err(Error::invalid(format!("line {li}: the label has {} actions for {n} surfaces", line.module.n())));
        }
        for (i, (&(f, s), act)) in line.around.iter().zip(&line.module.actions).enumerate() {
            let alg = &data.surfaces[f].algebra;
            let same = act.sign == s && (Arc::ptr_eq(&act.base, alg) || (act.base.obj == alg.obj && act.base.mu == alg.mu));
            if !same {
                return Err(Error::invalid(format!("line {li}: action {i} does not match surface {f} with sign {s}")));
            }
        }
        if let Some(r) = &line.reversed {
            if *r != reverse_line(&line.around) {
                return Err(Error::invalid(format!("line {li}: the reversed list is not the sign-flipped reversal")));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// sphere state spaces

/// A sphere with n meridional lines between a south pole M and a north pole N.
#[derive(Clone, Debug)]
pub struct DefectSphereObject {
    pub lines: Vec<(Arc<FrobeniusAlgebra>, Sign)>,
    pub south: CyclicStructure,
    pub north: CyclicStructure,
    pub star: usize,
    pub marks: usize,
}

impl DefectSphereObject {
    pub fn new(south: CyclicStructure, north: CyclicStructure) -> Result<DefectSphereObject> {
        let lines = south.module.actions.iter().map(|a| (a.base.clone(), a.sign)).collect();
        let s = DefectSphereObject { lines, south, north, star: 0, marks: 1 };
        s.validate()?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.lines.len()
    }

    pub fn k(&self) -> usize {
        self.south.k
    }

    pub fn validate(&self) -> Result<()> {
        if !self.south.module.same_decorations(&self.north.module) {
            return Err(Error::invalid("the poles are modules over different lists"));
        }
        if self.south.k != self.north.k {
            return Err(Error::invalid("the poles have different periods"));
        }
        self.check_star(self.star)
    }

    fn check_star(&self, star: usize) -> Result<()> {
        let n = self.n().max(1);
        if star >= n || !star.is_multiple_of(self.k()) {
            return Err(Error::invalid(format!(
                "wedge {star} is not between the last and first surface of a period"
            )));
        }
        Ok(())
    }
}

/// The poles as seen from wedge `star`: M^{tw_star}.
fn at_star(cat: &Cat, m: &MultiModule, star: usize) -> Result<MultiModule> {
    twist_multimodule(cat, m, star)
}

/// Sliced diagram of the averaging map at a wedge: the coupon "f" sits
/// between the poles, and each line attaches `marks` times through the copairing.
pub fn assemble_sphere(cat: &Cat, s: &DefectSphereObject, star: usize, marks: usize) -> Result<SlicedDiagram> {
    s.check_star(star)?;
    let m = at_star(cat, &s.south.module, star)?;
    let n = at_star(cat, &s.north.module, star)?;
    let mut d = SlicedDiagram::new(m.obj.iter().map(|o| Strand::up(o.clone())).collect());
    let mut wrapped: Vec<(usize, usize)> = Vec::new();
    // attach from the outermost line inwards
    let order: Vec<usize> = (0..m.n()).rev().collect();
    for &i in &order {
        let a = &m.actions[i].alg;
        let w = a.obj.len();
        d.define(&format!("copair{i}"), cat.compose(&a.delta, &a.eta)?);
        d.define(&format!("rhoM{i}"), m.actions[i].rho.clone());
        d.define(&format!("rhoN{i}"), n.actions[i].rho.clone());
        for _ in 0..marks.max(1) {
            let off: usize = wrapped.iter().map(|x| x.1).sum();
            d.push_at(cat, off, Generator::Named { name: format!("copair{i}") })?;
            if m.actions[i].sign == Sign::Minus {
                // the ribbon turns to the back side and returns: a cancelling pair
                for j in 0..w {
                    d.push_at(cat, off + j, Generator::HalfTwist { chirality: Chirality::Plus })?;
                }
            }
            d.push_at(cat, off + w, Generator::Named { name: format!("rhoM{i}") })?;
            wrapped.push((i, w));
        }
    }
    let off: usize = wrapped.iter().map(|x| x.1).sum();
    d.define("f", cat.zero(&m.obj, &n.obj));
    d.push_at(cat, off, Generator::Named { name: "f".into() })?;
    while let Some((i, w)) = wrapped.pop() {
        let off: usize = wrapped.iter().map(|x| x.1).sum();
        if m.actions[i].sign == Sign::Minus {
            for j in 0..w {
                d.push_at(cat, off + j, Generator::HalfTwist { chirality: Chirality::Minus })?;
            }
        }
        d.push_at(cat, off, Generator::Named { name: format!("rhoN{i}") })?;
    }
    Ok(d)
}

/// The averaging idempotent at a wedge as a matrix on Hom_C(M, N).
pub fn sphere_projector(cat: &Cat, s: &DefectSphereObject, star: usize, marks: usize) -> Result<Matrix> {
    let d = assemble_sphere(cat, s, star, marks)?;
    let (mo, no) = (&s.south.module.obj, &s.north.module.obj);
    cat.linear_map_matrix(mo, no, |f| {
        let mut d = d.clone();
        d.define("f", f.clone());
        evaluate(cat, &d)
    })
}

/// Transport f ↦ φ_N^{-a} f φ_M^{a} from one wedge to the wedge a·k further on.
/// Past a full turn φ^{n/k} = θ^{-1} on both poles, which cancels by naturality.
fn transport(cat: &Cat, s: &DefectSphereObject, a: usize) -> Result<Matrix> {
    let pm = power(cat, &s.south.phi, a)?;
    let pn_inv = invert(cat, &power(cat, &s.north.phi, a)?)?;
    let (mo, no) = (&s.south.module.obj, &s.north.module.obj);
    cat.linear_map_matrix(mo, no, |f| cat.chain(&[&pm, f, &pn_inv]))
}

fn invert(cat: &Cat, f: &Morphism) -> Result<Morphism> {
    let mut blocks = BTreeMap::new();
    for (c, b) in f.blocks() {
        blocks.insert(*c, b.inverse()?);
    }
    cat.morphism_from_blocks(&f.cod, &f.dom, blocks)
}

/// Ψ from wedge `star` with `marks` to wedge `star2` with `marks2`, rotating
/// anticlockwise; `extra_turns` adds whole turns (used to test over-rotation).
pub fn psi(
    cat: &Cat,
    s: &DefectSphereObject,
    marks: usize,
    marks2: usize,
    star: usize,
    star2: usize,
    extra_turns: usize,
) -> Result<Matrix> {
    s.check_star(star)?;
    s.check_star(star2)?;
    let n = s.n().max(1);
    let steps = ((star2 + n - star) % n) / s.k() + extra_turns * (n / s.k());
    let p1 = sphere_projector(cat, s, star, marks)?;
    let p2 = sphere_projector(cat, s, star2, marks2)?;
    p2.mul(&transport(cat, s, steps)?)?.mul(&p1)
}

pub fn state_space_dim(cat: &Cat, s: &DefectSphereObject) -> Result<usize> {
    Ok(psi(cat, s, s.marks, s.marks, s.star, s.star, 0)?.rank())
}

/// Sphere object with a single line structure in which both poles carry
/// the structure maps of `m` and `n` for their common list.
pub fn sphere(m: CyclicStructure, n: CyclicStructure) -> Result<DefectSphereObject> {
    DefectSphereObject::new(m, n)
}

// ---------------------------------------------------------------------------
// ribbons as defects

/// How a ribbon is encoded: as the edge of a strip of trivial surface, or
/// as a bare line with no adjacent surfaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RibbonEncoding {
    Strip,
    Bare,
}

fn arity(d: &SlicedDiagram, g: &Generator) -> (usize, usize) {
    match g {
        Generator::Id | Generator::Twist { .. } | Generator::HalfTwist { .. } => (1, 1),
        Generator::Braid { .. } => (2, 2),
        Generator::Cap { .. } => (2, 0),
        Generator::Cup { .. } => (0, 2),
        Generator::Coupon { morphism } => (morphism.dom.len(), morphism.cod.len()),
        Generator::Named { name } => d.generators.get(name).map(|m| (m.dom.len(), m.cod.len())).unwrap_or((0, 0)),
    }
}

/// Rewrite a ribbon diagram as a defect diagram. In the strip encoding each
/// strand is followed by the trivial algebra's strand, closed off by ε below
/// every generator and reopened by η above it. The bare encoding keeps the
/// diagram and rejects twists on labels whose twist is not the identity.
pub fn ribbon_as_defect(cat: &Cat, d: &SlicedDiagram, enc: RibbonEncoding) -> Result<SlicedDiagram> {
    if enc == RibbonEncoding::Bare {
        let mut t = SlicedDiagram::new(d.input.clone());
        t.generators = d.generators.clone();
        for (si, slice) in d.slices.iter().enumerate() {
            let mut p = 0;
            for g in slice {
                if let Generator::Twist { .. } = g {
                    let o = t.output[p].object(cat);
                    let w = [o.clone()];
                    if cat.twist(&w, false) != cat.id(&w) {
                        return Err(Error::invalid(format!(
                            "slice {si}: a line labelled {o} without adjacent surfaces cannot carry a twist"
                        )));
                    }
                }
                p += arity(d, g).0;
            }
            t.push(cat, slice.clone())?;
        }
        return Ok(t);
    }
    let triv = crate::frobenius::trivial_algebra(cat);
    let unit = || Strand::up(triv.obj[0].clone());
    let mut input = Vec::new();
    for s in &d.input {
        input.push(s.clone());
        input.push(unit());
    }
    let mut out = SlicedDiagram::new(input);
    out.generators = d.generators.clone();
    out.define("strip_eta", triv.eta.clone());
    out.define("strip_eps", triv.eps.clone());
    let eta = || Generator::Named { name: "strip_eta".into() };
    let eps = || Generator::Named { name: "strip_eps".into() };
    for slice in &d.slices {
        let (mut pre, mut post) = (Vec::new(), Vec::new());
        for g in slice {
            let (i, o) = arity(d, g);
            for _ in 0..i {
                pre.extend([Generator::Id, eps()]);
            }
            for _ in 0..o {
                post.extend([Generator::Id, eta()]);
            }
        }
        out.push(cat, pre)?;
        out.push(cat, slice.clone())?;
        out.push(cat, post)?;
    }
    Ok(out)
}
