use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::linalg::{FpMatrix, PrimeField, RowSpace};

use super::basis::DegreeBasis;
use super::groebner::exact_hilbert_series;
use super::params::ParameterSequence;
use super::poly::{GradedPresentation, Grading, Monomial, Polynomial};
use super::series::{monomial_t, poly_add, poly_sub, HilbertSeries};

/// Minimal free resolution of a presented algebra as a module over the
/// polynomial subring `R = k[ζ_1, …, ζ_r]`.
#[derive(Clone, Debug, Serialize)]
pub struct RModulePresentation {
    pub param_degrees: Vec<usize>,
    /// Generator degrees of `F_0, …, F_r`, ascending.
    pub generator_degrees: Vec<Vec<usize>>,
    /// Degrees computed in every homological degree.
    pub computed_through: usize,
    /// The degree beyond which no generator can occur, when known.
    pub stopping_bound: Option<i64>,
    /// The alternating Hilbert-series identity holds (exactly when certified,
    /// through `computed_through` otherwise).
    pub identity_holds: bool,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub betti: Vec<ExtInt>,
}

impl RModulePresentation {
    /// `Σ_j (-1)^j Σ_g t^{deg g}`, the numerator over `Π (1 - t^{n_i})`.
    pub fn alternating_numerator(&self) -> Vec<i64> {
        let mut num = Vec::new();
        for (j, degs) in self.generator_degrees.iter().enumerate() {
            for &d in degs {
                let term = monomial_t(d, 1);
                num = if j % 2 == 0 {
                    poly_add(&num, &term)
                } else {
                    poly_sub(&num, &term)
                };
            }
        }
        num
    }
}

pub fn betti_numbers(rmod: &RModulePresentation) -> Result<BettiTable> {
    if !rmod.certified {
        return Err(Error::Uncertified(
            "R-module resolution was computed in bounded mode".into(),
        ));
    }
    Ok(BettiTable {
        betti: rmod
            .generator_degrees
            .iter()
            .map(|d| ExtInt::top(d.iter().map(|&x| x as i64)))
            .collect(),
    })
}

/// One free module `F_j` of the resolution: generator degrees and the images
/// of its generators in `F_{j-1}` (or in the algebra for `j = 0`).
struct Level {
    degrees: Vec<usize>,
    images: Vec<Vec<u32>>,
}

struct Builder<'a> {
    field: PrimeField,
    rgrading: Grading,
    basis: &'a mut DegreeBasis,
    params: &'a ParameterSequence,
    mult: HashMap<(usize, usize), FpMatrix>,
    rmonomials: HashMap<usize, Vec<Monomial>>,
    f0_images: HashMap<(Monomial, usize), Vec<u32>>,
}

type BasisIndex = (Vec<(Monomial, usize)>, HashMap<(Monomial, usize), usize>);

impl<'a> Builder<'a> {
    fn r_monomials(&mut self, t: usize) -> Vec<Monomial> {
        let g = &self.rgrading;
        self.rmonomials
            .entry(t)
            .or_insert_with(|| g.monomials_of_degree(t))
            .clone()
    }

    fn free_basis(&mut self, degrees: &[usize], t: usize) -> BasisIndex {
        let mut list = Vec::new();
        for (g, &d) in degrees.iter().enumerate() {
            if d <= t {
                for u in self.r_monomials(t - d) {
                    list.push((u, g));
                }
            }
        }
        let index = list.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        (list, index)
    }

    fn mult_matrix(&mut self, l: usize, s: usize) -> Result<&FpMatrix> {
        if !self.mult.contains_key(&(l, s)) {
            let m = self.basis.mult_matrix(&self.params.elements[l], s)?;
            self.mult.insert((l, s), m);
        }
        Ok(&self.mult[&(l, s)])
    }

    /// Coordinates in the algebra of `ζ^u · s_g`.
    fn f0_image(&mut self, u: &Monomial, g: usize, level0: &Level) -> Result<Vec<u32>> {
        let key = (u.clone(), g);
        if let Some(v) = self.f0_images.get(&key) {
            return Ok(v.clone());
        }
        let v = match u.first_var() {
            None => level0.images[g].clone(),
            Some(l) => {
                let rest = u.div(&Monomial::var(l));
                let below = self.f0_image(&rest, g, level0)?;
                let s = level0.degrees[g] + rest.degree(&self.params.degrees);
                self.mult_matrix(l, s)?.mul_vec(&below)?
            }
        };
        self.f0_images.insert(key, v.clone());
        Ok(v)
    }

    /// Matrix of `F_j -> F_{j-1}` (or `F_0 -> H`) in degree `t`.
    fn map_matrix(&mut self, j: usize, levels: &[Level], t: usize) -> Result<FpMatrix> {
        let f = self.field;
        let (src, _) = self.free_basis(&levels[j].degrees, t);
        if j == 0 {
            self.basis.extend_to(t)?;
            let rows = self.basis.dim(t);
            let mut cols = Vec::with_capacity(src.len());
            for (u, g) in &src {
                cols.push(self.f0_image(u, *g, &levels[0])?);
            }
            return Ok(FpMatrix::from_columns(f, rows, &cols));
        }
        let prev = &levels[j - 1];
        let prev_degrees = prev.degrees.clone();
        let (tgt, tgt_index) = self.free_basis(&prev_degrees, t);
        let mut cols = Vec::with_capacity(src.len());
        for (u, g) in &src {
            let d = levels[j].degrees[*g];
            let (img_basis, _) = self.free_basis(&prev_degrees, d);
            let mut col = vec![0u32; tgt.len()];
            for (k, &c) in levels[j].images[*g].iter().enumerate() {
                if c != 0 {
                    let (u2, g2) = &img_basis[k];
                    let idx = tgt_index[&(u.mul_plain(u2), *g2)];
                    col[idx] = f.add(col[idx], c);
                }
            }
            cols.push(col);
        }
        Ok(FpMatrix::from_columns(f, tgt.len(), &cols))
    }

    /// Minimal generators of the kernel of `F_j -> F_{j-1}` through degree `through`.
    fn next_level(&mut self, j: usize, levels: &[Level], through: usize) -> Result<Level> {
        let f = self.field;
        let r = self.params.len();
        let mut kernels: Vec<Vec<Vec<u32>>> = Vec::with_capacity(through + 1);
        let mut out = Level {
            degrees: Vec::new(),
            images: Vec::new(),
        };
        for t in 0..=through {
            let m = self.map_matrix(j, levels, t)?;
            let kernel = m.kernel_basis().to_rows();
            let (_, index) = self.free_basis(&levels[j].degrees, t);
            let mut span = RowSpace::new(f, m.cols());
            for l in 0..r {
                let n = self.params.degrees[l];
                if n > t {
                    continue;
                }
                let (lower, _) = self.free_basis(&levels[j].degrees, t - n);
                let x = Monomial::var(l);
                for z in &kernels[t - n] {
                    let mut v = vec![0u32; m.cols()];
                    for (k, &c) in z.iter().enumerate() {
                        if c != 0 {
                            let (u, g) = &lower[k];
                            let idx = index[&(u.mul_plain(&x), *g)];
                            v[idx] = f.add(v[idx], c);
                        }
                    }
                    span.insert(&v);
                }
            }
            for z in &kernel {
                if span.insert(z) {
                    out.degrees.push(t);
                    out.images.push(z.clone());
                }
            }
            kernels.push(kernel);
        }
        Ok(out)
    }
}

/// Check that `H / (ζ)` has finite length. Uses the certified Hilbert series
/// when available, otherwise a window of zero degrees at the top of `bound`.
pub fn quotient_is_finite(pres: &GradedPresentation, params: &ParameterSequence, bound: usize) -> Result<(bool, Option<ExtInt>)> {
    let q = params.quotient(pres, params.len())?;
    if let Ok(h) = exact_hilbert_series(&q) {
        return Ok(match h.top_degree() {
            Some(top) => (true, Some(ExtInt::from(top.map(|t| t as i64)))),
            None => (false, None),
        });
    }
    let dims = super::basis::hilbert(&q, bound)?;
    let window = pres.max_generator_degree().max(1);
    if bound + 1 < window {
        return Ok((false, None));
    }
    let finite = dims[bound + 1 - window..].iter().all(|&d| d == 0);
    let top = dims.iter().rposition(|&d| d > 0).map(|t| t as i64);
    Ok((finite, finite.then(|| ExtInt::from(top))))
}

/// Resolve `H` over `R = k[params]` through degree `through`.
pub fn resolve_over_parameters(
    pres: &GradedPresentation,
    params: &ParameterSequence,
    through: usize,
) -> Result<Vec<Vec<usize>>> {
    let field = pres.field();
    if field.p() != 2 && params.degrees.iter().any(|d| d % 2 == 1) {
        return Err(Error::NotHsop(
            "odd-degree elements are nilpotent at odd p".into(),
        ));
    }
    let q = params.quotient(pres, params.len())?;
    let qbasis = DegreeBasis::compute(&q, through)?;
    let mut basis = DegreeBasis::compute(pres, through)?;
    // F_0: standard monomials of H/(ζ), lifted to H.
    let mut level0 = Level {
        degrees: Vec::new(),
        images: Vec::new(),
    };
    for t in 0..=through {
        for s in qbasis.standard_monomials(t) {
            level0.degrees.push(t);
            level0.images.push(basis.normal_form(t, &Polynomial::monomial(s, 1))?);
        }
    }
    let mut builder = Builder {
        field,
        // R is polynomial, so only the degrees matter for enumerating its monomials.
        rgrading: Grading::new(PrimeField::new(2)?, params.degrees.clone()),
        basis: &mut basis,
        params,
        mult: HashMap::new(),
        rmonomials: HashMap::new(),
        f0_images: HashMap::new(),
    };
    let mut levels = vec![level0];
    for j in 0..params.len() {
        let next = builder.next_level(j, &levels, through)?;
        levels.push(next);
    }
    Ok(levels.into_iter().map(|l| l.degrees).collect())
}

/// The `R`-module structure of `H`, certified when the type of the
/// parameters can be measured exactly.
pub fn r_module_structure(
    pres: &GradedPresentation,
    params: &ParameterSequence,
    bound: usize,
) -> Result<RModulePresentation> {
    let (finite, _) = quotient_is_finite(pres, params, bound)?;
    if !finite {
        return Err(Error::NotHsop(
            "quotient by the parameters does not have finite length".into(),
        ));
    }
    let certified_type = crate::regseq::measure_type(pres, params, bound, crate::regseq::Mode::Certified)
        .ok()
        .filter(|m| m.mode == crate::regseq::Mode::Certified);
    let (through, stopping, certified) = match &certified_type {
        Some(m) => {
            let needed = m
                .measured
                .d
                .iter()
                .filter_map(|d| d.finite())
                .max()
                .unwrap_or(0)
                + params.degree_sum();
            if needed > bound as i64 {
                return Err(Error::StoppingBound {
                    needed,
                    bound: bound as i64,
                });
            }
            (needed.max(0) as usize, Some(needed), true)
        }
        None => (bound, None, false),
    };
    let generator_degrees = resolve_over_parameters(pres, params, through)?;
    let mut rmod = RModulePresentation {
        param_degrees: params.degrees.clone(),
        generator_degrees,
        computed_through: through,
        stopping_bound: stopping,
        identity_holds: false,
        certified,
    };
    let lhs = HilbertSeries::new(rmod.alternating_numerator(), params.degrees.clone());
    rmod.identity_holds = if certified {
        lhs.same_series(&exact_hilbert_series(pres)?)
    } else {
        let dims = super::basis::hilbert(pres, through)?;
        lhs.expand(through) == dims.iter().map(|&d| d as i64).collect::<Vec<_>>()
    };
    if certified && !rmod.identity_holds {
        return Err(Error::Uncertified(
            "alternating Hilbert-series identity failed".into(),
        ));
    }
    Ok(rmod)
}
