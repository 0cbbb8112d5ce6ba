//! JSON forms of presentations and polynomials.
//!
//! A polynomial is a list of terms `{"c": int, "m": [[index, exponent], ...]}`
//! with 0-based generator indices in ascending order. Coefficients are
//! reduced mod `p` on load, so `-1` is accepted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::poly::{Generator, GradedPresentation, Monomial, Polynomial};
use crate::linalg::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: i64,
    pub m: Vec<(usize, u32)>,
}

pub type PolyJson = Vec<TermJson>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFile {
    pub p: u32,
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub relations: Vec<PolyJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HsopFile {
    pub elements: Vec<PolyJson>,
}

pub fn poly_to_json(p: &Polynomial) -> PolyJson {
    p.terms()
        .map(|(m, c)| TermJson {
            c: c as i64,
            m: m.support().collect(),
        })
        .collect()
}

pub fn poly_from_json(field: PrimeField, ngens: usize, terms: &[TermJson]) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for t in terms {
        let mut exps = vec![0u32; ngens];
        let mut last = None;
        for &(i, e) in &t.m {
            if i >= ngens {
                return Err(Error::InvalidPresentation(format!(
                    "generator index {i} out of range"
                )));
            }
            if last.is_some_and(|l| l >= i) {
                return Err(Error::InvalidPresentation(
                    "generator indices must be strictly ascending".into(),
                ));
            }
            last = Some(i);
            exps[i] = e;
        }
        let c = t.c.rem_euclid(field.p() as i64) as u32;
        out.add_term(field, Monomial::new(exps), c);
    }
    Ok(out)
}

impl RingFile {
    pub fn from_presentation(pres: &GradedPresentation) -> Self {
        Self {
            p: pres.p(),
            generators: pres
                .generators()
                .iter()
                .map(|g| GeneratorJson {
                    name: g.name.clone(),
                    degree: g.degree,
                })
                .collect(),
            relations: pres.relations().iter().map(poly_to_json).collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<GradedPresentation> {
        let field = PrimeField::new(self.p)?;
        let gens: Vec<Generator> = self
            .generators
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                degree: g.degree,
            })
            .collect();
        let n = gens.len();
        let rels = self
            .relations
            .iter()
            .map(|r| poly_from_json(field, n, r))
            .collect::<Result<Vec<_>>>()?;
        GradedPresentation::new(self.p, gens, rels)
    }
}

impl HsopFile {
    pub fn to_elements(&self, pres: &GradedPresentation) -> Result<Vec<Polynomial>> {
        let n = pres.generators().len();
        self.elements
            .iter()
            .map(|e| poly_from_json(pres.field(), n, e).map(|p| p.normalize(pres.grading())))
            .collect()
    }
}
