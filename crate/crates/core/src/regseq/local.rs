use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::{ExtInt, Finite, NegInf};
use crate::gring::basis::DegreeBasis;
use crate::gring::params::ParameterSequence;
use crate::gring::poly::{GradedPresentation, Grading, Monomial, Polynomial};
use crate::gring::rmodule::{betti_numbers, r_module_structure, BettiTable};
use crate::linalg::FpMatrix;

use super::measure::{measure_type, MeasuredType, Mode};

/// Upper bounds `a^i ≤ bound_i` read off a measured type: `-∞` below the
/// depth, the envelope value otherwise, and the exact `a^0` when known.
pub fn a_invariant_bounds(m: &MeasuredType, a0_exact: Option<ExtInt>) -> Vec<ExtInt> {
    m.envelope
        .d
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            if i < m.depth {
                NegInf
            } else if i == 0 {
                a0_exact.map_or(d, |a| a.min(d))
            } else {
                d
            }
        })
        .collect()
}

/// `Reg ≤ max_i (bound_i + i)`.
pub fn regularity_bound(bounds: &[ExtInt]) -> ExtInt {
    bounds
        .iter()
        .enumerate()
        .map(|(i, &b)| b + i as i64)
        .max()
        .unwrap_or(NegInf)
}

/// Exact `max_i a^i` and `Reg` from the Betti numbers over the parameter subring.
pub fn regularity_exact(betti: &BettiTable, degrees: &[usize]) -> (ExtInt, ExtInt) {
    let sum: i64 = degrees.iter().sum::<usize>() as i64;
    let shifted: i64 = degrees.iter().map(|&d| d as i64 - 1).sum();
    let a_max = betti.betti.iter().copied().max().unwrap_or(NegInf) + -sum;
    let reg = betti
        .betti
        .iter()
        .enumerate()
        .map(|(i, &b)| b + -(i as i64))
        .max()
        .unwrap_or(NegInf)
        + -shifted;
    (a_max, reg)
}

fn stacked_mult(basis: &mut DegreeBasis, elems: &[Polynomial], j: usize) -> Result<FpMatrix> {
    let f = basis.presentation().field();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let cols = {
        basis.extend_to(j)?;
        basis.dim(j)
    };
    for e in elems {
        let m = basis.mult_matrix(e, j)?;
        rows.extend(m.to_rows());
    }
    Ok(FpMatrix::from_vecs(f, cols, rows))
}

/// `a^0`: the top degree of `0 :_H (ζ_1, …, ζ_r)`, which lies inside the
/// kernel of `ζ_1` and so needs checking only up to that kernel's top.
pub fn a0_exact(pres: &GradedPresentation, params: &ParameterSequence, m: &MeasuredType) -> Result<ExtInt> {
    let top = match m.kernel_tops.first() {
        None => return Ok(m.quotient_top),
        Some(&NegInf) => return Ok(NegInf),
        Some(&Finite(t)) => t as usize,
    };
    let mut basis = DegreeBasis::new(pres);
    let mut a0 = NegInf;
    for j in 0..=top {
        let s = stacked_mult(&mut basis, &params.elements, j)?;
        if s.cols() > s.rank() {
            a0 = Finite(j as i64);
        }
    }
    Ok(a0)
}

fn r_monomials_in_range(degrees: &[usize], lo_exclusive: i64, hi: i64) -> Vec<Monomial> {
    let g = Grading::new(crate::linalg::PrimeField::new(2).expect("2 is prime"), degrees.to_vec());
    let mut out = Vec::new();
    for d in (lo_exclusive + 1).max(0)..=hi {
        out.extend(g.monomials_of_degree(d as usize));
    }
    out
}

/// Basis of `Γ_m(H)` as polynomials. An element `u` of degree `j` lies in it
/// iff every parameter monomial of degree above `a^0 - j` kills it; checking
/// degrees up to `a^0 - j + max n` suffices.
pub fn torsion_basis(pres: &GradedPresentation, params: &ParameterSequence, a0: ExtInt) -> Result<Vec<Polynomial>> {
    let Finite(a0) = a0 else {
        return Ok(Vec::new());
    };
    let grading = pres.grading().clone();
    let maxn = params.degrees.iter().copied().max().unwrap_or(1) as i64;
    let mut basis = DegreeBasis::new(pres);
    let mut out = Vec::new();
    for j in 0..=a0 {
        let lo = a0 - j;
        let killers: Vec<Polynomial> = r_monomials_in_range(&params.degrees, lo, lo + maxn)
            .into_iter()
            .map(|u| {
                u.support().fold(Polynomial::constant(1), |acc, (l, e)| {
                    acc.mul(&grading, &params.elements[l].pow(&grading, e as u64))
                })
            })
            .collect();
        let s = stacked_mult(&mut basis, &killers, j as usize)?;
        for v in s.kernel_basis().to_rows() {
            out.push(basis.polynomial(j as usize, &v));
        }
    }
    Ok(out)
}

/// Every `a^i` exactly, when `H / Γ_m(H)` is Cohen–Macaulay: then
/// `a^i = -∞` for `0 < i < r` and `a^r` is read off the quotient by the parameters.
pub fn exact_a_invariants(
    pres: &GradedPresentation,
    params: &ParameterSequence,
    m: &MeasuredType,
    a0: ExtInt,
) -> Result<Option<Vec<ExtInt>>> {
    let r = params.len();
    if r == 0 {
        return Ok(Some(vec![m.quotient_top]));
    }
    let torsion = torsion_basis(pres, params, a0)?;
    let reduced = pres.quotient(&torsion)?;
    let mr = measure_type(&reduced, params, m.bound, Mode::Certified)?;
    if mr.mode != Mode::Certified || mr.depth < r {
        return Ok(None);
    }
    let mut a = vec![NegInf; r + 1];
    a[0] = a0;
    a[r] = mr.quotient_top + -params.degree_sum();
    Ok(Some(a))
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalCohomologyReport {
    pub a_bound: Vec<ExtInt>,
    /// Per-index exact values, when available.
    pub a_exact: Option<Vec<ExtInt>>,
    pub a0_exact: ExtInt,
    pub a_max_exact: Option<ExtInt>,
    pub reg_exact: Option<ExtInt>,
    pub reg_bound: ExtInt,
    pub betti: Option<BettiTable>,
    pub depth: usize,
    pub certified: bool,
}

pub fn local_cohomology_report(
    pres: &GradedPresentation,
    params: &ParameterSequence,
    bound: usize,
    mode: Mode,
) -> Result<(MeasuredType, LocalCohomologyReport)> {
    let m = measure_type(pres, params, bound, mode)?;
    let certified = m.mode == Mode::Certified;
    let a0 = a0_exact(pres, params, &m)?;
    let a_bound = a_invariant_bounds(&m, Some(a0));
    let (betti, a_max_exact, reg_exact, a_exact) = if certified {
        let rmod = r_module_structure(pres, params, bound)?;
        let betti = betti_numbers(&rmod)?;
        let (a_max, reg) = regularity_exact(&betti, &params.degrees);
        let exact = exact_a_invariants(pres, params, &m, a0)?;
        (Some(betti), Some(a_max), Some(reg), exact)
    } else {
        (None, None, None, None)
    };
    if let (Some(reg), Some(a_max)) = (reg_exact, a_max_exact) {
        if reg > regularity_bound(&a_bound) || a_max > a_bound.iter().copied().max().unwrap_or(NegInf) {
            return Err(Error::Uncertified(
                "exact regularity exceeds the bound from the type".into(),
            ));
        }
    }
    let report = LocalCohomologyReport {
        reg_bound: regularity_bound(&a_bound),
        a_bound,
        a_exact,
        a0_exact: a0,
        a_max_exact,
        reg_exact,
        betti,
        depth: m.depth,
        certified,
    };
    Ok((m, report))
}
