use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::{ExtInt, NegInf};
use crate::gring::basis::DegreeBasis;
use crate::gring::groebner::exact_hilbert_series;
use crate::gring::params::ParameterSequence;
use crate::gring::poly::GradedPresentation;
use crate::gring::rmodule::quotient_is_finite;
use crate::gring::series::{div_one_minus_t, one_minus_t, poly_add, poly_mul, HilbertSeries, IntPoly};

use super::types::{admissible_envelope, FilterType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exact values from certified Hilbert series.
    Certified,
    /// Values read off degreewise computations through a degree bound.
    Bounded,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasuredType {
    /// The smallest values the parameters satisfy.
    pub measured: FilterType,
    pub envelope: FilterType,
    pub mode: Mode,
    pub bound: usize,
    /// Top degree of the kernel of `ζ_{i+1}` on `H / (ζ_1, …, ζ_i)`.
    pub kernel_tops: Vec<ExtInt>,
    /// Top degree of `H / (ζ_1, …, ζ_r)`.
    pub quotient_top: ExtInt,
    /// Leading parameters acting with zero kernel.
    pub depth: usize,
    /// Why certified mode fell back to bounded, if it did.
    pub fallback: Option<String>,
}

fn prefix_sum(params: &ParameterSequence, i: usize) -> i64 {
    params.degrees[..i].iter().sum::<usize>() as i64
}

/// Exact Hilbert series of the kernel of multiplication by an element of
/// degree `n` from `M` to `M`, given the series of `M` and of `M / ζM`, as a
/// polynomial when the kernel has finite length.
///
/// From `0 -> K(-n) -> M(-n) -> M -> M/ζM -> 0`:
/// `t^n K · Den = (t^n - 1) N_M + N_{M'} + P · Den` with
/// `P = Σ_{l<n} (m_l - m'_l) t^l`.
fn kernel_series(m: &HilbertSeries, q: &HilbertSeries, n: usize) -> Option<IntPoly> {
    debug_assert_eq!(m.denominator, q.denominator);
    let em = m.expand(n);
    let eq = q.expand(n);
    let low: IntPoly = (0..n).map(|l| em[l] - eq[l]).collect();
    let den = m
        .denominator
        .iter()
        .fold(vec![1i64], |acc, &d| poly_mul(&acc, &one_minus_t(d)));
    let mut tn_minus_one = vec![0i64; n + 1];
    tn_minus_one[0] = -1;
    tn_minus_one[n] += 1;
    let numerator = poly_add(
        &poly_add(&poly_mul(&tn_minus_one, &m.numerator), &q.numerator),
        &poly_mul(&low, &den),
    );
    let mut p = numerator;
    for &d in &m.denominator {
        p = div_one_minus_t(&p, d)?;
    }
    // p = t^n K(t).
    if p.iter().take(n).any(|&c| c != 0) {
        return None;
    }
    Some(p.into_iter().skip(n).collect())
}

fn top_of(p: &[i64]) -> ExtInt {
    ExtInt::top(p.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, _)| k as i64))
}

fn measure_certified(pres: &GradedPresentation, params: &ParameterSequence) -> Result<(Vec<ExtInt>, ExtInt)> {
    let r = params.len();
    let mut series = Vec::with_capacity(r + 1);
    for i in 0..=r {
        series.push(exact_hilbert_series(&params.quotient(pres, i)?)?);
    }
    let quotient_top = match series[r].top_degree() {
        Some(top) => ExtInt::from(top.map(|t| t as i64)),
        None => {
            return Err(Error::NotHsop(
                "quotient by the parameters does not have finite length".into(),
            ))
        }
    };
    let mut tops = Vec::with_capacity(r);
    for i in 0..r {
        let k = kernel_series(&series[i], &series[i + 1], params.degrees[i]).ok_or_else(|| {
            Error::NotFilterRegular(format!(
                "multiplication by parameter {} has an infinite kernel",
                i + 1
            ))
        })?;
        if k.iter().any(|&c| c < 0) {
            return Err(Error::Uncertified("negative kernel dimension".into()));
        }
        tops.push(top_of(&k));
    }
    Ok((tops, quotient_top))
}

fn measure_bounded(
    pres: &GradedPresentation,
    params: &ParameterSequence,
    bound: usize,
) -> Result<(Vec<ExtInt>, ExtInt)> {
    let r = params.len();
    let mut tops = Vec::with_capacity(r);
    for i in 0..r {
        let mut basis = DegreeBasis::compute(&params.quotient(pres, i)?, bound)?;
        let n = params.degrees[i];
        let mut top = NegInf;
        for j in 0..=bound.saturating_sub(n) {
            if j + n > bound {
                break;
            }
            let m = basis.mult_matrix(&params.elements[i], j)?;
            if m.cols() > m.rank() {
                top = ExtInt::from(j as i64);
            }
        }
        tops.push(top);
    }
    let (finite, top) = quotient_is_finite(pres, params, bound)?;
    if !finite {
        return Err(Error::NotHsop(format!(
            "quotient by the parameters is nonzero near degree {bound}"
        )));
    }
    Ok((tops, top.unwrap_or(NegInf)))
}

/// Cross-check kernel tops against direct multiplication matrices.
fn cross_check(pres: &GradedPresentation, params: &ParameterSequence, tops: &[ExtInt], bound: usize) -> Result<()> {
    for (i, &top) in tops.iter().enumerate() {
        let n = params.degrees[i];
        let limit = match top {
            ExtInt::Finite(t) => (t as usize + 1).min(bound.saturating_sub(n)),
            NegInf => n.min(bound.saturating_sub(n)),
        };
        let mut basis = DegreeBasis::compute(&params.quotient(pres, i)?, limit + n)?;
        for j in 0..=limit {
            let m = basis.mult_matrix(&params.elements[i], j)?;
            let has_kernel = m.cols() > m.rank();
            let expected = matches!(top, ExtInt::Finite(t) if t as usize == j);
            if expected && !has_kernel || ExtInt::from(j as i64) > top && has_kernel {
                return Err(Error::Uncertified(format!(
                    "kernel series disagrees with direct computation in degree {j}"
                )));
            }
        }
    }
    Ok(())
}

/// Measure the type of `params` on `pres`.
///
/// `d_i` is the top degree of the kernel of `ζ_{i+1}` on `H/(ζ_1..ζ_i)` minus
/// `n_1 + … + n_i`, and `d_r` is the top degree of `H/(ζ_1..ζ_r)` minus the
/// sum of all parameter degrees.
pub fn measure_type(pres: &GradedPresentation, params: &ParameterSequence, bound: usize, mode: Mode) -> Result<MeasuredType> {
    let r = params.len();
    let (tops, quotient_top, actual, fallback) = match mode {
        Mode::Certified => match measure_certified(pres, params) {
            Ok((t, q)) => {
                cross_check(pres, params, &t, bound)?;
                (t, q, Mode::Certified, None)
            }
            Err(e @ (Error::Uncertified(_) | Error::DimCap { .. } | Error::BasisCap { .. })) => {
                let (t, q) = measure_bounded(pres, params, bound)?;
                (t, q, Mode::Bounded, Some(e.to_string()))
            }
            Err(e) => return Err(e),
        },
        Mode::Bounded => {
            let (t, q) = measure_bounded(pres, params, bound)?;
            (t, q, Mode::Bounded, None)
        }
    };
    let mut d: Vec<ExtInt> = tops
        .iter()
        .enumerate()
        .map(|(i, &top)| top + -prefix_sum(params, i))
        .collect();
    d.push(quotient_top + -prefix_sum(params, r));
    let depth = tops.iter().take_while(|t| t.is_neg_inf()).count();
    let measured = FilterType::new(d);
    Ok(MeasuredType {
        envelope: admissible_envelope(&measured),
        measured,
        mode: actual,
        bound,
        kernel_tops: tops,
        quotient_top,
        depth,
        fallback,
    })
}

/// Number of leading parameters that are regular.
pub fn depth(pres: &GradedPresentation, params: &ParameterSequence, bound: usize) -> Result<usize> {
    Ok(measure_type(pres, params, bound, Mode::Certified)?.depth)
}
