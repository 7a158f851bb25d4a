//! Morphisms between tensor words of semisimple objects.
//!
//! A factor list `[X_1, …, X_n]` of [`SSObject`]s is expanded into simple
//! words by choosing one simple copy from every factor. For a total sector
//! `c`, the basis of Hom(c, X_1 ⊗ … ⊗ X_n) consists of pairs (word, tree)
//! where the tree is the list of staircase intermediates `e_1 = x_1,
//! e_j ∈ e_{j-1} ⊗ x_j, e_n = c`. A morphism stores one matrix per sector,
//! acting by post-composition on these bases.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::category::{Label, MtcData};
use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Formal direct sum of simples with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SSObject {
    terms: Vec<(Label, usize)>,
}

impl SSObject {
    pub fn new(pairs: &[(Label, usize)]) -> SSObject {
        let mut m: BTreeMap<Label, usize> = BTreeMap::new();
        for &(l, k) in pairs {
            *m.entry(l).or_default() += k;
        }
        SSObject { terms: m.into_iter().filter(|&(_, k)| k > 0).collect() }
    }

    pub fn simple(l: Label) -> SSObject {
        SSObject { terms: vec![(l, 1)] }
    }

    /// Parse `"0+16"`, `"0+8+16"` or `"2*3+1"` (multiplicity before `*`).
    pub fn parse(s: &str) -> Result<SSObject> {
        let mut pairs = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let (k, l) = match part.split_once('*') {
                Some((k, l)) => (k.trim(), l.trim()),
                None => ("1", part),
            };
            let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad object '{s}'")))?;
            let l: Label = l.parse().map_err(|_| Error::Parse(format!("bad object '{s}'")))?;
            pairs.push((l, k));
        }
        Ok(SSObject::new(&pairs))
    }

    pub fn terms(&self) -> &[(Label, usize)] {
        &self.terms
    }

    pub fn multiplicity(&self, l: Label) -> usize {
        self.terms.iter().find(|t| t.0 == l).map(|t| t.1).unwrap_or(0)
    }

    /// One entry per simple copy, in label order.
    pub fn simples(&self) -> Vec<Label> {
        self.terms.iter().flat_map(|&(l, k)| std::iter::repeat_n(l, k)).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.iter().map(|t| t.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dual(&self, c: &MtcData) -> SSObject {
        let pairs: Vec<_> = self.terms.iter().map(|&(l, k)| (c.dual(l), k)).collect();
        SSObject::new(&pairs)
    }

    /// Position of the simple copy dual to copy `i` inside `self.dual()`.
    pub fn dual_index(&self, c: &MtcData, i: usize) -> usize {
        let simples = self.simples();
        let l = simples[i];
        let copy = i - simples.iter().position(|&x| x == l).unwrap();
        let d = self.dual(c);
        let ds = d.simples();
        ds.iter().position(|&x| x == c.dual(l)).unwrap() + copy
    }
}

impl fmt::Display for SSObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(l, k)| if k == 1 { format!("{l}") } else { format!("{k}*{l}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0obj")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

pub fn words_to_string(x: &[SSObject]) -> String {
    let parts: Vec<String> = x.iter().map(|o| format!("({o})")).collect();
    if parts.is_empty() {
        "[]".into()
    } else {
        parts.join("⊗")
    }
}

pub fn simple_word(labels: &[Label]) -> Vec<SSObject> {
    labels.iter().map(|&l| SSObject::simple(l)).collect()
}

/// Staircase trees for a fixed label sequence and total sector.
pub struct TreeSet {
    pub trees: Vec<Vec<Label>>,
    index: HashMap<Vec<Label>, usize>,
}

impl TreeSet {
    pub fn position(&self, t: &[Label]) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

/// Basis of Hom(c, X_1 ⊗ … ⊗ X_n).
pub struct SpaceBasis {
    pub factors: Vec<SSObject>,
    pub sector: Label,
    /// Expansion words as copy indices, lexicographic.
    pub words: Vec<Vec<usize>>,
    pub word_labels: Vec<Vec<Label>>,
    pub offsets: Vec<usize>,
    pub trees: Vec<Arc<TreeSet>>,
    pub dim: usize,
    word_index: HashMap<Vec<usize>, usize>,
}

impl SpaceBasis {
    pub fn word_position(&self, w: &[usize]) -> usize {
        self.word_index[w]
    }

    pub fn position(&self, w: &[usize], tree: &[Label]) -> Option<usize> {
        let wi = *self.word_index.get(w)?;
        Some(self.offsets[wi] + self.trees[wi].position(tree)?)
    }

    /// (word index, tree index) of a basis position.
    pub fn element(&self, pos: usize) -> (usize, usize) {
        let wi = match self.offsets.binary_search(&pos) {
            Ok(mut i) => {
                while i + 1 < self.offsets.len() && self.offsets[i + 1] == pos {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        };
        (wi, pos - self.offsets[wi])
    }

    pub fn tree(&self, pos: usize) -> (&[usize], &[Label], &[Label]) {
        let (wi, ti) = self.element(pos);
        (&self.words[wi], &self.word_labels[wi], &self.trees[wi].trees[ti])
    }
}

/// Exact morphism `dom → cod`, one matrix per total sector.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub dom: Vec<SSObject>,
    pub cod: Vec<SSObject>,
    blocks: BTreeMap<Label, Matrix>,
}

impl Morphism {
    pub fn blocks(&self) -> &BTreeMap<Label, Matrix> {
        &self.blocks
    }

    pub fn block(&self, c: Label) -> Option<&Matrix> {
        self.blocks.get(&c)
    }

    pub fn block_mut(&mut self, c: Label) -> Option<&mut Matrix> {
        self.blocks.get_mut(&c)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|m| m.is_zero())
    }

    pub fn is_endo(&self) -> bool {
        self.dom == self.cod
    }

    pub fn scale(&self, s: &CycScalar) -> Morphism {
        Morphism {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            blocks: self.blocks.iter().map(|(c, m)| (*c, m.scale(s))).collect(),
        }
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.same_type(other)?;
        let mut blocks = BTreeMap::new();
        for (c, m) in &self.blocks {
            blocks.insert(*c, m.add(&other.blocks[c])?);
        }
        Ok(Morphism { dom: self.dom.clone(), cod: self.cod.clone(), blocks })
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.add(&other.scale(&CycScalar::from_i64(1, -1)))
    }

    fn same_type(&self, other: &Morphism) -> Result<()> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::mismatch(format!(
                "{} → {} versus {} → {}",
                words_to_string(&self.dom),
                words_to_string(&self.cod),
                words_to_string(&other.dom),
                words_to_string(&other.cod)
            )));
        }
        Ok(())
    }

    /// Flattened coordinates, sectors ascending, row-major inside each block.
    pub fn coords(&self) -> Vec<CycScalar> {
        self.blocks.values().flat_map(|m| m.entries().iter().cloned()).collect()
    }

    pub fn hom_dimension(&self) -> usize {
        self.blocks.values().map(|m| m.rows() * m.cols()).sum()
    }

    /// The scalar of an endomorphism of the empty word.
    pub fn as_scalar(&self) -> Option<CycScalar> {
        if !self.dom.is_empty() || !self.cod.is_empty() {
            return None;
        }
        self.blocks.get(&0).map(|m| m.get(0, 0).clone())
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Morphism {} → {}", words_to_string(&self.dom), words_to_string(&self.cod))?;
        for (c, m) in &self.blocks {
            writeln!(f, " sector {c}: {m:?}")?;
        }
        Ok(())
    }
}

type ConvKey = (Label, Vec<Label>, Label);

/// A category together with the caches used by the morphism calculus.
pub struct Cat {
    data: Arc<MtcData>,
    trees: RwLock<HashMap<(Vec<Label>, Label), Arc<TreeSet>>>,
    bases: RwLock<HashMap<(Vec<SSObject>, Label), Arc<SpaceBasis>>>,
    to_pair: RwLock<HashMap<ConvKey, Arc<Conversion>>>,
    to_stair: RwLock<HashMap<ConvKey, Arc<Conversion>>>,
}

/// Change of basis between staircase continuations and pair bases.
struct Conversion {
    /// Pair basis: (b, tree of the right word to b).
    pairs: Vec<(Label, Vec<Label>)>,
    pair_index: HashMap<(Label, Vec<Label>), usize>,
    /// Staircase continuations (intermediates after the leading label).
    stairs: Vec<Vec<Label>>,
    stair_index: HashMap<Vec<Label>, usize>,
    /// Sparse columns: for stair→pair, indexed by stair; for pair→stair, by pair.
    columns: Vec<Vec<(usize, CycScalar)>>,
}

impl Deref for Cat {
    type Target = MtcData;
    fn deref(&self) -> &MtcData {
        &self.data
    }
}

impl fmt::Debug for Cat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cat({:?})", self.data)
    }
}

impl Cat {
    pub fn new(data: MtcData) -> Cat {
        Cat::from_arc(Arc::new(data))
    }

    pub fn from_arc(data: Arc<MtcData>) -> Cat {
        Cat {
            data,
            trees: RwLock::new(HashMap::new()),
            bases: RwLock::new(HashMap::new()),
            to_pair: RwLock::new(HashMap::new()),
            to_stair: RwLock::new(HashMap::new()),
        }
    }

    pub fn data(&self) -> &Arc<MtcData> {
        &self.data
    }

    pub fn trees(&self, labels: &[Label], c: Label) -> Arc<TreeSet> {
        let key = (labels.to_vec(), c);
        if let Some(t) = self.trees.read().get(&key) {
            return t.clone();
        }
        let mut trees = Vec::new();
        if labels.is_empty() {
            if c == 0 {
                trees.push(Vec::new());
            }
        } else {
            let mut cur = vec![labels[0]];
            self.tree_dfs(labels, c, &mut cur, &mut trees);
        }
        let index = trees.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let ts = Arc::new(TreeSet { trees, index });
        self.trees.write().entry(key).or_insert(ts).clone()
    }

    fn tree_dfs(&self, labels: &[Label], c: Label, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        let j = cur.len();
        if j == labels.len() {
            if *cur.last().unwrap() == c {
                out.push(cur.clone());
            }
            return;
        }
        let prev = *cur.last().unwrap();
        for &e in self.fuse(prev, labels[j]) {
            cur.push(e);
            self.tree_dfs(labels, c, cur, out);
            cur.pop();
        }
    }

    pub fn basis(&self, factors: &[SSObject], c: Label) -> Arc<SpaceBasis> {
        let key = (factors.to_vec(), c);
        if let Some(b) = self.bases.read().get(&key) {
            return b.clone();
        }
        let copies: Vec<Vec<Label>> = factors.iter().map(|x| x.simples()).collect();
        let mut words = vec![Vec::new()];
        for cp in &copies {
            let mut next = Vec::with_capacity(words.len() * cp.len());
            for w in &words {
                for i in 0..cp.len() {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(i);
                    next.push(w2);
                }
            }
            words = next;
        }
        let mut word_labels = Vec::with_capacity(words.len());
        let mut offsets = Vec::with_capacity(words.len());
        let mut trees = Vec::with_capacity(words.len());
        let mut dim = 0;
        for w in &words {
            let labels: Vec<Label> = w.iter().enumerate().map(|(j, &i)| copies[j][i]).collect();
            let ts = self.trees(&labels, c);
            offsets.push(dim);
            dim += ts.len();
            trees.push(ts);
            word_labels.push(labels);
        }
        let word_index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let b = Arc::new(SpaceBasis {
            factors: factors.to_vec(),
            sector: c,
            words,
            word_labels,
            offsets,
            trees,
            dim,
            word_index,
        });
        self.bases.write().entry(key).or_insert(b).clone()
    }

    /// Sectors c for which Hom(c, X) is nonzero.
    pub fn sectors(&self, factors: &[SSObject]) -> Vec<Label> {
        (0..self.rank()).filter(|&c| self.basis(factors, c).dim > 0).collect()
    }

    pub fn hom_dim(&self, x: &[SSObject], y: &[SSObject]) -> usize {
        (0..self.rank()).map(|c| self.basis(x, c).dim * self.basis(y, c).dim).sum()
    }

    pub fn hom_dim_labels(&self, x: &[Label], y: &[Label]) -> usize {
        self.hom_dim(&simple_word(x), &simple_word(y))
    }

    pub fn zero(&self, dom: &[SSObject], cod: &[SSObject]) -> Morphism {
        let mut blocks = BTreeMap::new();
        for c in 0..self.rank() {
            let (bd, bc) = (self.basis(dom, c), self.basis(cod, c));
            if bd.dim > 0 && bc.dim > 0 {
                blocks.insert(c, Matrix::zeros(bc.dim, bd.dim, self.conductor()));
            }
        }
        Morphism { dom: dom.to_vec(), cod: cod.to_vec(), blocks }
    }

    pub fn id(&self, x: &[SSObject]) -> Morphism {
        let mut m = self.zero(x, x);
        for b in m.blocks.values_mut() {
            *b = Matrix::identity(b.rows(), self.conductor());
        }
        m
    }

    /// Morphism with the given coordinates (same order as [`Morphism::coords`]).
    pub fn from_coords(&self, dom: &[SSObject], cod: &[SSObject], v: &[CycScalar]) -> Result<Morphism> {
        let mut m = self.zero(dom, cod);
        let mut k = 0;
        for b in m.blocks.values_mut() {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    let x = v.get(k).ok_or_else(|| Error::invalid("too few coordinates"))?;
                    b.set(i, j, x.clone());
                    k += 1;
                }
            }
        }
        if k != v.len() {
            return Err(Error::invalid("too many coordinates"));
        }
        Ok(m)
    }

    /// Matrix-unit basis of Hom(dom, cod).
    pub fn hom_basis(&self, dom: &[SSObject], cod: &[SSObject]) -> Vec<Morphism> {
        let z = self.zero(dom, cod);
        let dim = z.hom_dimension();
        (0..dim)
            .map(|k| {
                let mut v = vec![self.zero_scalar(); dim];
                v[k] = self.one();
                self.from_coords(dom, cod, &v).expect("dimension matches")
            })
            .collect()
    }

    fn zero_scalar(&self) -> CycScalar {
        MtcData::zero(self)
    }

    /// Matrix of a linear map Hom(dom, cod) → Hom(dom2, cod2) in coordinates.
    pub fn linear_map_matrix(
        &self,
        dom: &[SSObject],
        cod: &[SSObject],
        f: impl Fn(&Morphism) -> Result<Morphism>,
    ) -> Result<Matrix> {
        let basis = self.hom_basis(dom, cod);
        let mut cols = Vec::with_capacity(basis.len());
        for b in &basis {
            cols.push(f(b)?.coords());
        }
        let rows = cols.first().map(|c| c.len()).unwrap_or(0);
        Ok(Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone()))
    }

    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        if f.cod != g.dom {
            return Err(Error::mismatch(format!(
                "cannot compose {} → {} after {} → {}",
                words_to_string(&g.dom),
                words_to_string(&g.cod),
                words_to_string(&f.dom),
                words_to_string(&f.cod)
            )));
        }
        let mut out = self.zero(&f.dom, &g.cod);
        for (c, b) in out.blocks.iter_mut() {
            if let (Some(gb), Some(fb)) = (g.blocks.get(c), f.blocks.get(c)) {
                *b = gb.mul(fb)?;
            }
        }
        Ok(out)
    }

    /// Compose a chain given in application order: `fs[0]` first.
    pub fn chain(&self, fs: &[&Morphism]) -> Result<Morphism> {
        let mut acc = fs.first().ok_or_else(|| Error::invalid("empty chain"))?.to_owned().clone();
        for f in &fs[1..] {
            acc = self.compose(f, &acc)?;
        }
        Ok(acc)
    }

    fn stair_to_pair(&self, a: Label, ys: &[Label], c: Label) -> Arc<Conversion> {
        let key = (a, ys.to_vec(), c);
        if let Some(x) = self.to_pair.read().get(&key) {
            return x.clone();
        }
        let conv = Arc::new(self.build_stair_to_pair(a, ys, c));
        self.to_pair.write().entry(key).or_insert(conv).clone()
    }

    fn pair_basis(&self, a: Label, ys: &[Label], c: Label) -> Vec<(Label, Vec<Label>)> {
        let mut pairs = Vec::new();
        for b in 0..self.rank() {
            if !self.n(a, b, c) {
                continue;
            }
            for t in &self.trees(ys, b).trees {
                pairs.push((b, t.clone()));
            }
        }
        pairs
    }

    fn stair_basis(&self, a: Label, ys: &[Label], c: Label) -> Vec<Vec<Label>> {
        let mut labels = vec![a];
        labels.extend_from_slice(ys);
        self.trees(&labels, c).trees.iter().map(|t| t[1..].to_vec()).collect()
    }

    fn build_stair_to_pair(&self, a: Label, ys: &[Label], c: Label) -> Conversion {
        let pairs = self.pair_basis(a, ys, c);
        let stairs = self.stair_basis(a, ys, c);
        let pair_index: HashMap<_, _> =
            pairs.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let stair_index: HashMap<_, _> =
            stairs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut columns = Vec::with_capacity(stairs.len());
        if ys.is_empty() {
            // the only stair is empty with c = a; the pair is (0, [])
            for _ in &stairs {
                columns.push(vec![(0, self.one())]);
            }
        } else {
            let (yp, y) = (&ys[..ys.len() - 1], ys[ys.len() - 1]);
            for s in &stairs {
                let e = if s.len() >= 2 { s[s.len() - 2] } else { a };
                let prev = self.stair_to_pair(a, yp, e);
                let si = prev.stair_index[&s[..s.len() - 1].to_vec()];
                let mut acc: BTreeMap<usize, CycScalar> = BTreeMap::new();
                for (pi, coef) in &prev.columns[si] {
                    let (bp, tp) = &prev.pairs[*pi];
                    let fm = self.fmatrix(a, *bp, y, c);
                    let Some(row) = fm.row_of(e) else { continue };
                    for (col, &b) in fm.fs.iter().enumerate() {
                        let fv = fm.m.get(row, col);
                        if fv.is_zero() {
                            continue;
                        }
                        let mut t = if yp.is_empty() { Vec::new() } else { tp.clone() };
                        t.push(b);
                        let idx = pair_index[&(b, t)];
                        let v = coef * fv;
                        let slot = acc.entry(idx).or_insert_with(|| self.zero_scalar());
                        *slot = &*slot + &v;
                    }
                }
                columns.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
            }
        }
        Conversion { pairs, pair_index, stairs, stair_index, columns }
    }

    fn pair_to_stair(&self, a: Label, ys: &[Label], c: Label) -> Arc<Conversion> {
        let key = (a, ys.to_vec(), c);
        if let Some(x) = self.to_stair.read().get(&key) {
            return x.clone();
        }
        let conv = Arc::new(self.build_pair_to_stair(a, ys, c));
        self.to_stair.write().entry(key).or_insert(conv).clone()
    }

    fn build_pair_to_stair(&self, a: Label, ys: &[Label], c: Label) -> Conversion {
        let pairs = self.pair_basis(a, ys, c);
        let stairs = self.stair_basis(a, ys, c);
        let pair_index: HashMap<_, _> =
            pairs.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let stair_index: HashMap<_, _> =
            stairs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut columns = Vec::with_capacity(pairs.len());
        if ys.is_empty() {
            for _ in &pairs {
                columns.push(vec![(0, self.one())]);
            }
        } else {
            let (yp, y) = (&ys[..ys.len() - 1], ys[ys.len() - 1]);
            for (b, t) in &pairs {
                // t = t' ++ [b], t' a tree of yp ending in b'
                let bp = if yp.is_empty() { 0 } else { t[t.len() - 2] };
                let tp: Vec<Label> = t[..t.len() - 1].to_vec();
                let fm = self.fmatrix(a, bp, y, c);
                let col = fm.col_of(*b).expect("admissible pair");
                let inv = fm.inverse();
                let mut acc: BTreeMap<usize, CycScalar> = BTreeMap::new();
                for (row, &e) in fm.es.iter().enumerate() {
                    let fi = inv.get(col, row);
                    if fi.is_zero() {
                        continue;
                    }
                    let prev = self.pair_to_stair(a, yp, e);
                    let pi = prev.pair_index[&(bp, tp.clone())];
                    for (si, coef) in &prev.columns[pi] {
                        let mut s = prev.stairs[*si].clone();
                        s.push(c);
                        let idx = stair_index[&s];
                        let v = coef * fi;
                        let slot = acc.entry(idx).or_insert_with(|| self.zero_scalar());
                        *slot = &*slot + &v;
                    }
                }
                columns.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
            }
        }
        Conversion { pairs, pair_index, stairs, stair_index, columns }
    }

    pub fn tensor(&self, f: &Morphism, g: &Morphism) -> Morphism {
        let mut dom = f.dom.clone();
        dom.extend(g.dom.iter().cloned());
        let mut cod = f.cod.clone();
        cod.extend(g.cod.iter().cloned());
        let mut out = self.zero(&dom, &cod);
        let n1 = f.dom.len();
        let m1 = f.cod.len();
        for (&c, block) in out.blocks.iter_mut() {
            let bdom = self.basis(&dom, c);
            let bcod = self.basis(&cod, c);
            for col in 0..bdom.dim {
                let (w, labels, t) = bdom.tree(col);
                let (wx, wx2) = w.split_at(n1);
                let prefix = &t[..n1];
                let a = prefix.last().copied().unwrap_or(0);
                let cont = &t[n1..];
                let lx2 = &labels[n1..];
                let s2p = self.stair_to_pair(a, lx2, c);
                let si = s2p.stair_index[&cont.to_vec()];
                let fb = f.blocks.get(&a);
                let bfd = self.basis(&f.dom, a);
                let bfc = self.basis(&f.cod, a);
                let Some(fb) = fb else { continue };
                let fcol = bfd.position(wx, prefix).expect("prefix in basis");
                for (pi, p) in &s2p.columns[si] {
                    let (b, t2) = &s2p.pairs[*pi];
                    let Some(gb) = g.blocks.get(b) else { continue };
                    let bgd = self.basis(&g.dom, *b);
                    let bgc = self.basis(&g.cod, *b);
                    let gcol = bgd.position(wx2, t2).expect("pair tree in basis");
                    for frow in 0..bfc.dim {
                        let fv = fb.get(frow, fcol);
                        if fv.is_zero() {
                            continue;
                        }
                        let pf = p * fv;
                        let (wy, _, ty) = bfc.tree(frow);
                        for grow in 0..bgc.dim {
                            let gv = gb.get(grow, gcol);
                            if gv.is_zero() {
                                continue;
                            }
                            let (wy2, ly2, ty2) = bgc.tree(grow);
                            let p2s = self.pair_to_stair(a, ly2, c);
                            let pj = p2s.pair_index[&(*b, ty2.to_vec())];
                            let pfg = &pf * gv;
                            for (sj, q) in &p2s.columns[pj] {
                                let mut word = wy.to_vec();
                                word.extend_from_slice(wy2);
                                let mut tree = ty.to_vec();
                                tree.extend_from_slice(&p2s.stairs[*sj]);
                                let row = bcod.position(&word, &tree).expect("target in basis");
                                block.add_to(row, col, &(&pfg * q));
                            }
                        }
                    }
                }
            }
        }
        let _ = m1;
        out
    }

    /// Tensor product of a list of morphisms, left to right.
    pub fn tensor_all(&self, fs: &[&Morphism]) -> Morphism {
        let mut acc = self.id(&[]);
        for f in fs {
            acc = self.tensor(&acc, f);
        }
        acc
    }

    /// Braiding of the factors at positions p and p+1.
    /// `inverse = false` gives c_{x,y}; `inverse = true` gives c_{y,x}^{-1}.
    pub fn braid_adjacent(&self, x: &[SSObject], p: usize, inverse: bool) -> Result<Morphism> {
        if p + 1 >= x.len() {
            return Err(Error::invalid(format!("braid position {p} out of range for {} factors", x.len())));
        }
        let mut cod = x.to_vec();
        cod.swap(p, p + 1);
        let mut out = self.zero(x, &cod);
        for (&c, block) in out.blocks.iter_mut() {
            let bd = self.basis(x, c);
            let bc = self.basis(&cod, c);
            for col in 0..bd.dim {
                let (w, labels, t) = bd.tree(col);
                let (xl, yl) = (labels[p], labels[p + 1]);
                let e = if p == 0 { 0 } else { t[p - 1] };
                let ep = t[p];
                let g = t[p + 1];
                let mut w2 = w.to_vec();
                w2.swap(p, p + 1);
                let fm = self.fmatrix(e, xl, yl, g);
                let fm2 = self.fmatrix(e, yl, xl, g);
                let row = fm.row_of(ep).expect("admissible");
                for (fi, &f) in fm.fs.iter().enumerate() {
                    let fv = fm.m.get(row, fi);
                    if fv.is_zero() {
                        continue;
                    }
                    let r = if inverse { self.r_inv(yl, xl, f) } else { self.r(xl, yl, f) };
                    let fr = fv * r;
                    let col2 = fm2.col_of(f).expect("admissible");
                    let inv = fm2.inverse();
                    for (ei, &e2) in fm2.es.iter().enumerate() {
                        let iv = inv.get(col2, ei);
                        if iv.is_zero() {
                            continue;
                        }
                        let mut t2 = t.to_vec();
                        t2[p] = e2;
                        let r2 = bc.position(&w2, &t2).expect("braided tree in basis");
                        block.add_to(r2, col, &(&fr * iv));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Braiding X ⊗ Y → Y ⊗ X of factor lists: c_{X,Y}, or c_{Y,X}^{-1} if `inverse`.
    pub fn braiding(&self, x: &[SSObject], y: &[SSObject], inverse: bool) -> Morphism {
        let mut cur: Vec<SSObject> = x.iter().chain(y.iter()).cloned().collect();
        let mut acc = self.id(&cur);
        let (n, m) = (x.len(), y.len());
        for i in (0..n).rev() {
            for j in 0..m {
                let p = i + j;
                let b = self.braid_adjacent(&cur, p, inverse).expect("in range");
                acc = self.compose(&b, &acc).expect("types match");
                cur.swap(p, p + 1);
            }
        }
        acc
    }

    /// θ_X, or θ_X^{-1} if `inverse`.
    pub fn twist(&self, x: &[SSObject], inverse: bool) -> Morphism {
        let mut m = self.id(x);
        for (c, b) in m.blocks.iter_mut() {
            let t = if inverse { self.theta_inv(*c) } else { self.theta(*c) };
            *b = b.scale(t);
        }
        m
    }

    fn dual_pairing(&self, x: &SSObject, left_is_x: bool, value: impl Fn(Label) -> CycScalar, cup: bool) -> Morphism {
        let xd = x.dual(self);
        let pair: Vec<SSObject> =
            if left_is_x { vec![x.clone(), xd.clone()] } else { vec![xd.clone(), x.clone()] };
        let (dom, cod) = if cup { (vec![], pair.clone()) } else { (pair.clone(), vec![]) };
        let mut m = self.zero(&dom, &cod);
        let b = self.basis(&pair, 0);
        let block = m.blocks.get_mut(&0).expect("unit sector present");
        for (i, &l) in x.simples().iter().enumerate() {
            let j = x.dual_index(self, i);
            let w = if left_is_x { vec![i, j] } else { vec![j, i] };
            let first = if left_is_x { l } else { self.dual(l) };
            let pos = b.position(&w, &[first, 0]).expect("cup tree");
            if cup {
                block.set(pos, 0, value(l));
            } else {
                block.set(0, pos, value(l));
            }
        }
        m
    }

    /// coev_X: 1 → X ⊗ X*.
    pub fn coev(&self, x: &SSObject) -> Morphism {
        self.dual_pairing(x, true, |_| self.one(), true)
    }

    /// ev_X: X* ⊗ X → 1.
    pub fn ev(&self, x: &SSObject) -> Morphism {
        self.dual_pairing(
            x,
            false,
            |l| {
                let lb = self.dual(l);
                self.f(l, lb, l, l, 0, 0).inv().expect("nonzero F")
            },
            false,
        )
    }

    /// ẽv_X: X ⊗ X* → 1.
    pub fn ev_tilde(&self, x: &SSObject) -> Morphism {
        self.dual_pairing(x, true, |l| self.qdim(l).clone(), false)
    }

    /// c̃oev_X: 1 → X* ⊗ X.
    pub fn coev_tilde(&self, x: &SSObject) -> Morphism {
        self.dual_pairing(
            x,
            false,
            |l| {
                let lb = self.dual(l);
                (self.qdim(l) * self.finv(l, lb, l, l, 0, 0)).inv().expect("nonzero")
            },
            true,
        )
    }

    /// Categorical trace Σ_c d_c tr(f_c).
    pub fn qtrace(&self, f: &Morphism) -> Result<CycScalar> {
        if !f.is_endo() {
            return Err(Error::mismatch("trace of a non-endomorphism"));
        }
        let mut acc = self.zero_scalar();
        for (c, b) in &f.blocks {
            acc = acc + self.qdim(*c) * b.trace();
        }
        Ok(acc)
    }

    /// Categorical dimension of a factor list.
    pub fn dim(&self, x: &[SSObject]) -> CycScalar {
        self.qtrace(&self.id(x)).expect("endomorphism")
    }

    /// Morphism with a single nonzero coordinate.
    pub fn elementary(
        &self,
        dom: &[SSObject],
        cod: &[SSObject],
        c: Label,
        cod_entry: (&[usize], &[Label]),
        dom_entry: (&[usize], &[Label]),
        v: CycScalar,
    ) -> Result<Morphism> {
        let mut m = self.zero(dom, cod);
        let row = self
            .basis(cod, c)
            .position(cod_entry.0, cod_entry.1)
            .ok_or_else(|| Error::invalid("codomain basis element not found"))?;
        let col = self
            .basis(dom, c)
            .position(dom_entry.0, dom_entry.1)
            .ok_or_else(|| Error::invalid("domain basis element not found"))?;
        m.blocks.get_mut(&c).expect("sector present").set(row, col, v);
        Ok(m)
    }

    pub fn morphism_from_blocks(
        &self,
        dom: &[SSObject],
        cod: &[SSObject],
        blocks: BTreeMap<Label, Matrix>,
    ) -> Result<Morphism> {
        let mut m = self.zero(dom, cod);
        for (c, b) in blocks {
            match m.blocks.get_mut(&c) {
                Some(slot) if slot.rows() == b.rows() && slot.cols() == b.cols() => *slot = b,
                _ if b.is_zero() => {}
                _ => return Err(Error::mismatch(format!("block for sector {c} has wrong shape"))),
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::gen_sl2k;

    #[test]
    fn hom_dims() {
        let cat = Cat::new(gen_sl2k(16));
        assert_eq!(cat.hom_dim_labels(&[1, 1], &[0]), 1);
        assert_eq!(cat.hom_dim_labels(&[8, 16], &[8]), 1);
        assert_eq!(cat.hom_dim_labels(&[1, 1, 1], &[1]), 2);
    }

    #[test]
    fn parse_objects() {
        let a = SSObject::parse("0+8+16").unwrap();
        assert_eq!(a.simples(), vec![0, 8, 16]);
        assert_eq!(SSObject::parse("2*3+1").unwrap().simples(), vec![1, 3, 3]);
    }
}
