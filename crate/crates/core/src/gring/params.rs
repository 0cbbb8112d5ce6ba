use crate::error::{Error, Result};

use super::poly::{GradedPresentation, Polynomial};

/// Homogeneous elements `ζ_1, …, ζ_r` of a presented algebra with their degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterSequence {
    pub elements: Vec<Polynomial>,
    pub degrees: Vec<usize>,
}

impl ParameterSequence {
    pub fn new(pres: &GradedPresentation, elements: Vec<Polynomial>) -> Result<Self> {
        let mut degrees = Vec::with_capacity(elements.len());
        let mut normalized = Vec::with_capacity(elements.len());
        for (i, e) in elements.into_iter().enumerate() {
            let e = e.normalize(pres.grading());
            match e.homogeneous_degree(pres.degrees())? {
                None => return Err(Error::NotHsop(format!("parameter {} is zero", i + 1))),
                Some(0) => {
                    return Err(Error::NotHsop(format!("parameter {} has degree 0", i + 1)))
                }
                Some(d) => degrees.push(d),
            }
            normalized.push(e);
        }
        Ok(Self {
            elements: normalized,
            degrees,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn degree_sum(&self) -> i64 {
        self.degrees.iter().sum::<usize>() as i64
    }

    /// `Σ (n_j - 1)`.
    pub fn shifted_degree_sum(&self) -> i64 {
        self.degrees.iter().map(|&d| d as i64 - 1).sum()
    }

    /// `H / (ζ_1, …, ζ_i)`.
    pub fn quotient(&self, pres: &GradedPresentation, i: usize) -> Result<GradedPresentation> {
        pres.quotient(&self.elements[..i])
    }
}
