//! Sliced ribbon diagrams and their evaluation.
//!
//! A diagram is a list of horizontal slices read bottom to top. Each slice
//! is a row of generators that together consume the current strand list.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};
use crate::homspace::{words_to_string, Cat, Morphism, SSObject};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strand {
    pub obj: SSObject,
    /// Downward strands carry the dual object.
    #[serde(default = "default_up")]
    pub up: bool,
}

fn default_up() -> bool {
    true
}

impl Strand {
    pub fn up(obj: SSObject) -> Strand {
        Strand { obj, up: true }
    }

    pub fn down(obj: SSObject) -> Strand {
        Strand { obj, up: false }
    }

    pub fn reversed(&self) -> Strand {
        Strand { obj: self.obj.clone(), up: !self.up }
    }

    /// The object this strand contributes to a tensor word.
    pub fn object(&self, cat: &Cat) -> SSObject {
        if self.up {
            self.obj.clone()
        } else {
            self.obj.dual(cat)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chirality {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Id,
    /// Positive crossing c_{X,Y}, or c_{Y,X}^{-1} if inverse.
    Braid {
        #[serde(default)]
        inverse: bool,
    },
    /// Creates the strands (s, s reversed).
    Cup { strand: Strand },
    /// Annihilates the strands (s, s reversed).
    Cap { strand: Strand },
    Twist {
        #[serde(default)]
        inverse: bool,
    },
    Coupon { morphism: Morphism },
    /// A morphism looked up in the diagram's generator table.
    Named { name: String },
    HalfTwist { chirality: Chirality },
}

impl Generator {
    fn arity(&self, d: &SlicedDiagram) -> Result<usize> {
        Ok(match self {
            Generator::Id | Generator::Twist { .. } | Generator::HalfTwist { .. } => 1,
            Generator::Braid { .. } | Generator::Cap { .. } => 2,
            Generator::Cup { .. } => 0,
            Generator::Coupon { morphism } => morphism.dom.len(),
            Generator::Named { name } => d.lookup(name)?.dom.len(),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicedDiagram {
    pub input: Vec<Strand>,
    pub output: Vec<Strand>,
    pub slices: Vec<Vec<Generator>>,
    #[serde(default)]
    pub generators: BTreeMap<String, Morphism>,
}

impl SlicedDiagram {
    pub fn new(input: Vec<Strand>) -> SlicedDiagram {
        SlicedDiagram { output: input.clone(), input, slices: Vec::new(), generators: BTreeMap::new() }
    }

    fn lookup(&self, name: &str) -> Result<&Morphism> {
        self.generators.get(name).ok_or_else(|| Error::invalid(format!("unknown generator {name:?}")))
    }

    pub fn define(&mut self, name: &str, m: Morphism) {
        self.generators.insert(name.into(), m);
    }

    /// Append a slice, padding with identities on the right, and update the output.
    pub fn push(&mut self, cat: &Cat, mut slice: Vec<Generator>) -> Result<()> {
        let used: usize = slice.iter().map(|g| g.arity(self)).sum::<Result<usize>>()?;
        if used > self.output.len() {
            return Err(Error::mismatch("slice consumes more strands than available"));
        }
        for _ in used..self.output.len() {
            slice.push(Generator::Id);
        }
        let out = slice_output(cat, self, &self.output, &slice, usize::MAX)?;
        self.slices.push(slice);
        self.output = out;
        Ok(())
    }

    /// Generator `g` acting at strand offset `at`, identities elsewhere.
    pub fn push_at(&mut self, cat: &Cat, at: usize, g: Generator) -> Result<()> {
        let mut slice = vec![Generator::Id; at];
        slice.push(g);
        self.push(cat, slice)
    }

    /// Stack `top` on `self`.
    pub fn then(&self, top: &SlicedDiagram) -> Result<SlicedDiagram> {
        if self.output != top.input {
            return Err(Error::mismatch("boundaries do not match"));
        }
        let mut d = self.clone();
        d.slices.extend(top.slices.iter().cloned());
        d.output = top.output.clone();
        for (k, v) in &top.generators {
            d.generators.insert(k.clone(), v.clone());
        }
        Ok(d)
    }

    /// Place `other` to the right of `self`, slice by slice.
    pub fn beside(&self, other: &SlicedDiagram) -> SlicedDiagram {
        let mut d = SlicedDiagram {
            input: self.input.iter().chain(&other.input).cloned().collect(),
            output: self.output.iter().chain(&other.output).cloned().collect(),
            slices: Vec::new(),
            generators: self.generators.clone(),
        };
        for (k, v) in &other.generators {
            d.generators.insert(k.clone(), v.clone());
        }
        // run self's slices first, then other's, so heights never interleave
        let right = other.input.len();
        for s in &self.slices {
            let mut s = s.clone();
            s.extend(std::iter::repeat_n(Generator::Id, right));
            d.slices.push(s);
        }
        let left = self.output.len();
        for s in &other.slices {
            let mut row = vec![Generator::Id; left];
            row.extend(s.iter().cloned());
            d.slices.push(row);
        }
        d
    }
}

fn slice_output(
    cat: &Cat,
    d: &SlicedDiagram,
    input: &[Strand],
    slice: &[Generator],
    index: usize,
) -> Result<Vec<Strand>> {
    let err = |msg: String| {
        if index == usize::MAX {
            Error::mismatch(msg)
        } else {
            Error::mismatch(format!("slice {index}: {msg}"))
        }
    };
    let mut out = Vec::new();
    let mut p = 0;
    for g in slice {
        let k = g.arity(d)?;
        if p + k > input.len() {
            return Err(err(format!("generators consume more than {} strands", input.len())));
        }
        let ins = &input[p..p + k];
        match g {
            Generator::Id | Generator::Twist { .. } | Generator::HalfTwist { .. } => out.push(ins[0].clone()),
            Generator::Braid { .. } => {
                out.push(ins[1].clone());
                out.push(ins[0].clone());
            }
            Generator::Cup { strand } => {
                out.push(strand.clone());
                out.push(strand.reversed());
            }
            Generator::Cap { strand } => {
                let ok = ins[0].object(cat) == strand.object(cat) && ins[1].object(cat) == strand.reversed().object(cat);
                if !ok {
                    return Err(err(format!("cap at strand {p} does not match its inputs")));
                }
            }
            Generator::Coupon { .. } | Generator::Named { .. } => {
                let m = match g {
                    Generator::Coupon { morphism } => morphism,
                    Generator::Named { name } => d.lookup(name)?,
                    _ => unreachable!(),
                };
                let got: Vec<SSObject> = ins.iter().map(|s| s.object(cat)).collect();
                if got != m.dom {
                    return Err(err(format!(
                        "coupon at strand {p} expects {} but receives {}",
                        words_to_string(&m.dom),
                        words_to_string(&got)
                    )));
                }
                out.extend(m.cod.iter().map(|o| Strand::up(o.clone())));
            }
        }
        p += k;
    }
    if p != input.len() {
        return Err(err(format!("generators consume {p} of {} strands", input.len())));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypecheckReport {
    pub closed: bool,
    /// Net chirality of the half-twist markers on each path that carries any, keyed
    /// by (slice, strand) of the first marker.
    pub half_twists: BTreeMap<(usize, usize), i64>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new() -> UnionFind {
        UnionFind { parent: Vec::new() }
    }

    fn make(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Slice compatibility and the even half-twist rule.
pub fn typecheck(cat: &Cat, d: &SlicedDiagram) -> Result<TypecheckReport> {
    let mut cur = d.input.clone();
    let mut uf = UnionFind::new();
    let mut ids: Vec<usize> = cur.iter().map(|_| uf.make()).collect();
    // (path id, slice, strand, chirality)
    let mut markers: Vec<(usize, usize, usize, i64)> = Vec::new();
    for (si, slice) in d.slices.iter().enumerate() {
        let next = slice_output(cat, d, &cur, slice, si)?;
        let mut new_ids = Vec::with_capacity(next.len());
        let mut p = 0;
        for g in slice {
            let k = g.arity(d)?;
            match g {
                Generator::Id | Generator::Twist { .. } => new_ids.push(ids[p]),
                Generator::HalfTwist { chirality } => {
                    let c = if *chirality == Chirality::Plus { 1 } else { -1 };
                    let c = if cur[p].up { c } else { -c };
                    markers.push((ids[p], si, new_ids.len(), c));
                    new_ids.push(ids[p]);
                }
                Generator::Braid { .. } => {
                    new_ids.push(ids[p + 1]);
                    new_ids.push(ids[p]);
                }
                Generator::Cup { .. } => {
                    let id = uf.make();
                    new_ids.push(id);
                    new_ids.push(id);
                }
                Generator::Cap { .. } => uf.union(ids[p], ids[p + 1]),
                Generator::Coupon { .. } | Generator::Named { .. } => {
                    let m = match g {
                        Generator::Coupon { morphism } => morphism.cod.len(),
                        Generator::Named { name } => d.lookup(name)?.cod.len(),
                        _ => unreachable!(),
                    };
                    for _ in 0..m {
                        new_ids.push(uf.make());
                    }
                }
            }
            p += k;
        }
        cur = next;
        ids = new_ids;
    }
    if cur != d.output {
        return Err(Error::mismatch("the last slice does not end on the declared output"));
    }
    let mut count: BTreeMap<usize, (usize, i64, (usize, usize))> = BTreeMap::new();
    for &(id, si, pos, c) in &markers {
        let r = uf.find(id);
        let e = count.entry(r).or_insert((0, 0, (si, pos)));
        e.0 += 1;
        e.1 += c;
    }
    let mut half_twists = BTreeMap::new();
    for (_, (n, net, at)) in count {
        if n % 2 == 1 {
            return Err(Error::invalid(format!(
                "odd half-twist count on the ribbon through slice {} strand {}",
                at.0, at.1
            )));
        }
        half_twists.insert(at, net);
    }
    Ok(TypecheckReport { closed: d.input.is_empty() && d.output.is_empty(), half_twists })
}

fn strand_words(cat: &Cat, s: &[Strand]) -> Vec<SSObject> {
    s.iter().map(|x| x.object(cat)).collect()
}

fn generator_morphism(cat: &Cat, d: &SlicedDiagram, g: &Generator, ins: &[Strand], theta_exp: i64) -> Result<Morphism> {
    let words = strand_words(cat, ins);
    Ok(match g {
        Generator::Id => cat.id(&words),
        Generator::Braid { inverse } => cat.braiding(&words[..1], &words[1..], *inverse),
        Generator::Twist { inverse } => cat.twist(&words, *inverse),
        Generator::HalfTwist { .. } => crate::multimodule::theta_power(cat, &words, theta_exp),
        Generator::Cup { strand } => {
            if strand.up {
                cat.coev(&strand.obj)
            } else {
                cat.coev_tilde(&strand.obj)
            }
        }
        Generator::Cap { strand } => {
            if strand.up {
                cat.ev_tilde(&strand.obj)
            } else {
                cat.ev(&strand.obj)
            }
        }
        Generator::Coupon { morphism } => morphism.clone(),
        Generator::Named { name } => d.lookup(name)?.clone(),
    })
}

/// Compose the slices bottom to top. Each ribbon's half-twist markers are
/// replaced by θ^{net/2} at its first marker and identities elsewhere.
pub fn evaluate(cat: &Cat, d: &SlicedDiagram) -> Result<Morphism> {
    let rep = typecheck(cat, d)?;
    let mut cur = d.input.clone();
    let mut acc = cat.id(&strand_words(cat, &cur));
    for (si, slice) in d.slices.iter().enumerate() {
        let mut parts = Vec::with_capacity(slice.len());
        let mut p = 0;
        let mut out_pos = 0;
        for g in slice {
            let k = g.arity(d)?;
            let theta_exp = match g {
                Generator::HalfTwist { .. } => rep.half_twists.get(&(si, out_pos)).map(|n| n / 2).unwrap_or(0),
                _ => 0,
            };
            parts.push(generator_morphism(cat, d, g, &cur[p..p + k], theta_exp)?);
            out_pos += parts.last().map(|m: &Morphism| m.cod.len()).unwrap_or(0);
            p += k;
        }
        let refs: Vec<&Morphism> = parts.iter().collect();
        let layer = cat.tensor_all(&refs);
        acc = cat.compose(&layer, &acc)?;
        cur = slice_output(cat, d, &cur, slice, si)?;
    }
    Ok(acc)
}

pub fn evaluate_closed(cat: &Cat, d: &SlicedDiagram) -> Result<CycScalar> {
    if !d.input.is_empty() || !d.output.is_empty() {
        return Err(Error::invalid("evaluate_closed needs a diagram without boundary"));
    }
    evaluate(cat, d)?.as_scalar().ok_or_else(|| Error::invalid("closed diagram did not evaluate to a scalar"))
}

/// An unknotted loop on one strand, with an optional twist on it.
pub fn loop_diagram(cat: &Cat, x: &SSObject, twist: Option<bool>) -> Result<SlicedDiagram> {
    let mut d = SlicedDiagram::new(Vec::new());
    d.push(cat, vec![Generator::Cup { strand: Strand::up(x.clone()) }])?;
    if let Some(inverse) = twist {
        d.push(cat, vec![Generator::Twist { inverse }])?;
    }
    d.push(cat, vec![Generator::Cap { strand: Strand::up(x.clone()) }])?;
    Ok(d)
}

/// The Hopf link with positive crossings on components x and y.
pub fn hopf_link(cat: &Cat, x: &SSObject, y: &SSObject) -> Result<SlicedDiagram> {
    let mut d = SlicedDiagram::new(Vec::new());
    d.push(cat, vec![Generator::Cup { strand: Strand::up(x.clone()) }, Generator::Cup { strand: Strand::up(y.clone()) }])?;
    // strands: x, x*, y, y*; link the inner pair twice
    d.push_at(cat, 1, Generator::Braid { inverse: false })?;
    d.push_at(cat, 1, Generator::Braid { inverse: false })?;
    d.push(cat, vec![Generator::Cap { strand: Strand::up(x.clone()) }, Generator::Cap { strand: Strand::up(y.clone()) }])?;
    Ok(d)
}
