use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::{ExtInt, Finite};

/// A sequence `(d_0, …, d_r)` of degree thresholds, possibly `-∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilterType {
    pub d: Vec<ExtInt>,
    /// `d_i ≥ d_{i-1} - 1` and `d_{i-1} ≥ d_i` for all `i`.
    pub admissible: bool,
}

impl FilterType {
    pub fn new(d: Vec<ExtInt>) -> Self {
        let admissible = is_admissible(&d);
        Self { d, admissible }
    }

    pub fn from_ints(d: &[i64]) -> Self {
        Self::new(d.iter().map(|&x| Finite(x)).collect())
    }

    /// Number of parameters `r`.
    pub fn rank(&self) -> usize {
        self.d.len().saturating_sub(1)
    }

    pub fn max(&self) -> ExtInt {
        self.d.iter().copied().max().unwrap_or_default()
    }
}

fn is_admissible(d: &[ExtInt]) -> bool {
    d.windows(2).all(|w| w[1] >= w[0] + -1 && w[0] >= w[1])
}

/// The least admissible sequence dominating `t` coordinatewise.
pub fn admissible_envelope(t: &FilterType) -> FilterType {
    let mut d = t.d.clone();
    loop {
        let mut changed = false;
        for i in 0..d.len() {
            let mut v = d[i];
            if i + 1 < d.len() {
                v = v.max(d[i + 1]);
            }
            if i > 0 {
                v = v.max(d[i - 1] + -1);
            }
            if v != d[i] {
                d[i] = v;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    FilterType::new(d)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QuasiFlags {
    pub filter_regular: bool,
    pub quasi: bool,
    pub strongly: bool,
    pub very_strongly: bool,
}

/// Compare an admissible type with the three quasi-regular thresholds.
pub fn classify(t: &FilterType, r: usize) -> Result<QuasiFlags> {
    if !t.admissible {
        return Err(Error::Inadmissible(format!("{:?}", t.d)));
    }
    if t.d.len() != r + 1 {
        return Err(Error::DimensionMismatch {
            expected: r + 1,
            found: t.d.len(),
        });
    }
    let idx = |i: usize| i as i64;
    Ok(QuasiFlags {
        filter_regular: true,
        quasi: t.d.iter().all(|&d| d <= Finite(-1)),
        strongly: t.d.iter().enumerate().all(|(i, &d)| d <= Finite(-idx(i))),
        very_strongly: t.d.iter().enumerate().all(|(i, &d)| {
            if i < r {
                d <= Finite(-idx(i) - 1)
            } else {
                d <= Finite(-idx(r))
            }
        }),
    })
}

/// Sharpened type for a parameter system of a group cohomology ring.
///
/// Applies `(d_0, …, d_{r-2}, d_{r-2} - 1, d_{r-2} - 1)` for `r ≥ 2` and
/// `(d_0, …, d_{r-3}, d_{r-3} - 1, d_{r-3} - 2, d_{r-3} - 2)` for `r ≥ 3`,
/// takes the coordinatewise minimum and re-envelopes. Only valid for the
/// full cohomology ring, hence the explicit provenance flag.
pub fn sharpen_group_type(t: &FilterType, group_cohomology: bool) -> Result<FilterType> {
    if !group_cohomology {
        return Err(Error::ProvenanceRequired);
    }
    let r = t.rank();
    let mut d = t.d.clone();
    if r >= 2 {
        let base = t.d[r - 2];
        d[r - 1] = d[r - 1].min(base + -1);
        d[r] = d[r].min(base + -1);
    }
    if r >= 3 {
        let base = t.d[r - 3];
        d[r - 2] = d[r - 2].min(base + -1);
        d[r - 1] = d[r - 1].min(base + -2);
        d[r] = d[r].min(base + -2);
    }
    Ok(admissible_envelope(&FilterType::new(d)))
}
