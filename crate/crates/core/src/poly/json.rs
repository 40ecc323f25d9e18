use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::mpoly::{MPoly, Mono};
use super::space::Space;
use crate::{Error, Result};

/// Serialized form: `{"symbols": [...], "terms": [[coeff, [exps...]], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub symbols: Vec<String>,
    pub terms: Vec<(String, Vec<u16>)>,
}

impl From<&MPoly> for PolyJson {
    fn from(p: &MPoly) -> Self {
        PolyJson {
            symbols: p.space().symbols.iter().map(|s| s.name()).collect(),
            terms: p.terms().iter().map(|(m, c)| (c.to_string(), m.0.to_vec())).collect(),
        }
    }
}

impl PolyJson {
    pub fn to_poly(&self) -> Result<MPoly> {
        let space = Space::from_names(&self.symbols)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (c, e) in &self.terms {
            if e.len() != space.len() {
                return Err(Error::Parse("exponent vector length mismatch".into()));
            }
            let c: BigInt = c.parse().map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            terms.push((Mono(e.iter().copied().collect()), c));
        }
        Ok(MPoly::from_terms(&space, terms))
    }
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        j.to_poly().map_err(serde::de::Error::custom)
    }
}
