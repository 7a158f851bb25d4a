use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{FSource, FusionRing, Label, MtcData};
use crate::cyclotomic::CycScalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FEntry {
    pub l: [Label; 6],
    pub v: CycScalar,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct REntry {
    pub l: [Label; 3],
    pub v: CycScalar,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CategoryJson {
    pub name: String,
    pub labels: Vec<String>,
    pub unit: Label,
    pub dual: Vec<Label>,
    pub fusion: Vec<[Label; 3]>,
    #[serde(rename = "F")]
    pub f: Vec<FEntry>,
    #[serde(rename = "R")]
    pub r: Vec<REntry>,
    pub theta: Vec<CycScalar>,
    pub qdim: Vec<CycScalar>,
}

impl MtcData {
    pub fn to_json(&self) -> CategoryJson {
        let slots = self.f_slots();
        let f = slots
            .into_iter()
            .map(|t| FEntry { l: t, v: self.f(t[0], t[1], t[2], t[3], t[4], t[5]) })
            .collect();
        let triples = self.ring.triples();
        let r = triples
            .iter()
            .map(|&t| REntry { l: t, v: self.r(t[0], t[1], t[2]).clone() })
            .collect();
        CategoryJson {
            name: self.name.clone(),
            labels: self.ring.labels().to_vec(),
            unit: 0,
            dual: (0..self.rank()).map(|i| self.dual(i)).collect(),
            fusion: triples,
            f,
            r,
            theta: self.theta.clone(),
            qdim: self.qdim.clone(),
        }
    }

    /// Build from the JSON form. Axioms are not checked here.
    pub fn from_json(j: &CategoryJson) -> Result<MtcData> {
        if j.unit != 0 {
            return Err(Error::invalid("the unit must be label index 0"));
        }
        let ring = FusionRing::new(j.labels.clone(), j.dual.clone(), &j.fusion)?;
        let mut conductor = 1u32;
        let mut fmap = HashMap::new();
        for e in &j.f {
            if !ring.f_admissible(e.l) {
                return Err(Error::invalid(format!("F entry {:?} is not admissible", e.l)));
            }
            conductor = conductor.lcm(&e.v.conductor());
            fmap.insert(e.l, e.v.clone());
        }
        let mut rmap = HashMap::new();
        for e in &j.r {
            if !ring.n(e.l[0], e.l[1], e.l[2]) {
                return Err(Error::invalid(format!("R entry {:?} is not admissible", e.l)));
            }
            conductor = conductor.lcm(&e.v.conductor());
            rmap.insert(e.l, e.v.clone());
        }
        for v in j.theta.iter().chain(&j.qdim) {
            conductor = conductor.lcm(&v.conductor());
        }
        let lift = |v: &CycScalar| v.lift(conductor);
        let fmap: HashMap<_, _> = fmap.iter().map(|(k, v)| (*k, lift(v))).collect();
        let rmap: HashMap<_, _> = rmap.iter().map(|(k, v)| (*k, lift(v))).collect();
        let data = MtcData::build(
            j.name.clone(),
            ring,
            conductor,
            FSource::Explicit(fmap.clone()),
            rmap,
            j.theta.iter().map(lift).collect(),
            j.qdim.iter().map(lift).collect(),
        )?;
        for t in data.f_slots() {
            if !fmap.contains_key(&t) {
                return Err(Error::invalid(format!("missing F entry {t:?}")));
            }
        }
        Ok(data)
    }
}
