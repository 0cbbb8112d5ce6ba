//! The completion certificate for truncated presentations, and the driver
//! that extends the computation until it fires.
//!
//! Given filter-regular parameters `ζ_1, …, ζ_r` of degrees `n_j ≥ 2` whose
//! images form a system of parameters of the full ring, the presentation
//! through degree `N` is complete once
//! `N > max(α, 0) + Σ (n_j - 1)`, with `α = max_{i ≤ r-2} (a^i + i)`.
//! The inequality may be relaxed to `≥` when the ring has depth at least
//! two, which holds when the center has rank at least two.

use std::sync::Arc;

use serde::Serialize;

use crate::dickson::{restrict_parameters, search_parameters, RestrictedParameters};
use crate::error::{Error, Result};
use crate::extint::{ExtInt, Finite, NegInf};
use crate::gring::groebner::exact_hilbert_series;
use crate::gring::json::RingFile;
use crate::gring::series::HilbertSeries;
use crate::gring::{ParameterSequence, Polynomial, TruncatedPresentation};
use crate::group::PGroup;
use crate::modres::syzygy::omega_subspace;
use crate::modres::ResolutionCaps;
use crate::regseq::{a0_exact, a_invariant_bounds, measure_type, MeasuredType, Mode};
use crate::ring_extract::{ElabRestriction, Extraction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    Strict,
    NonStrict,
}

impl Inequality {
    /// The variant to test: forced by the caller, or non-strict exactly when
    /// the center has rank at least two.
    pub fn resolve(forced: Option<Inequality>, center_rank: u32, assume_depth2: bool) -> Result<Self> {
        match forced {
            Some(Inequality::NonStrict) if center_rank < 2 && !assume_depth2 => Err(Error::Inapplicable(
                "non-strict inequality needs depth at least two".into(),
            )),
            Some(i) => Ok(i),
            None if center_rank >= 2 => Ok(Inequality::NonStrict),
            None => Ok(Inequality::Strict),
        }
    }

    fn holds(self, n: i64, bound: i64) -> bool {
        match self {
            Inequality::Strict => n > bound,
            Inequality::NonStrict => n >= bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionVerdict {
    pub complete: bool,
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha: ExtInt,
    pub r: usize,
    pub param_degrees: Vec<usize>,
    pub bound: i64,
    pub inequality: Inequality,
    /// Failed hypotheses, empty when complete.
    pub reasons: Vec<String>,
    #[serde(rename = "type")]
    pub envelope: Vec<ExtInt>,
    pub a_bounds: Vec<ExtInt>,
    pub mode: Mode,
}

/// `1 + Σ (n_j - 1)`, the degree at which completion is expected when the
/// regularity vanishes.
pub fn projected_degree(degrees: &[usize]) -> usize {
    1 + degrees.iter().map(|&d| d.saturating_sub(1)).sum::<usize>()
}

/// `α = max_{0 ≤ i ≤ r-2} (bound_i + i)`.
pub fn alpha(a_bounds: &[ExtInt], r: usize) -> ExtInt {
    (0..r.saturating_sub(1))
        .map(|i| a_bounds[i] + i as i64)
        .max()
        .unwrap_or(NegInf)
}

fn elab_quotients_finite(elabs: &[RestrictedParameters]) -> Result<Vec<String>> {
    let mut reasons = Vec::new();
    for (k, e) in elabs.iter().enumerate() {
        let q = e.ring.quotient(&e.images)?;
        if exact_hilbert_series(&q)?.top_degree().is_none() {
            reasons.push(format!(
                "restrictions to elementary abelian class {k} do not form a system of parameters"
            ));
        }
    }
    Ok(reasons)
}

/// Test the completion criterion for `tau` at its truncation degree.
pub fn completion_test(
    tau: &TruncatedPresentation,
    params: &ParameterSequence,
    elabs: &[RestrictedParameters],
    inequality: Inequality,
) -> Result<CompletionVerdict> {
    let r = params.len();
    if r <= 1 {
        return Err(Error::Inapplicable("the criterion needs at least two parameters".into()));
    }
    if let Some(d) = params.degrees.iter().find(|&&d| d < 2) {
        return Err(Error::Inapplicable(format!("parameter of degree {d} < 2")));
    }
    let n = tau.n;
    let mut reasons = elab_quotients_finite(elabs)?;
    let bound = n + params.degree_sum() as usize;
    let m: MeasuredType = match measure_type(&tau.base, params, bound, Mode::Certified) {
        Ok(m) => m,
        Err(e @ (Error::NotFilterRegular(_) | Error::NotHsop(_))) => {
            reasons.push(e.to_string());
            return Ok(CompletionVerdict {
                complete: false,
                n,
                alpha: NegInf,
                r,
                param_degrees: params.degrees.clone(),
                bound: 0,
                inequality,
                reasons,
                envelope: Vec::new(),
                a_bounds: Vec::new(),
                mode: Mode::Certified,
            });
        }
        Err(e) => return Err(e),
    };
    if m.mode != Mode::Certified {
        return Err(Error::Uncertified(
            m.fallback.clone().unwrap_or_else(|| "filter-regularity not certified".into()),
        ));
    }
    let a0 = a0_exact(&tau.base, params, &m)?;
    let a_bounds = a_invariant_bounds(&m, Some(a0));
    let alpha = alpha(&a_bounds, r);
    let base = match alpha {
        Finite(a) => a.max(0),
        NegInf => 0,
    };
    let bound = base + params.shifted_degree_sum();
    if !inequality.holds(n as i64, bound) {
        let op = if inequality == Inequality::Strict { ">" } else { "≥" };
        reasons.push(format!("inequality {n} {op} {bound} fails"));
    }
    Ok(CompletionVerdict {
        complete: reasons.is_empty(),
        n,
        alpha,
        r,
        param_degrees: params.degrees.clone(),
        bound,
        inequality,
        reasons,
        envelope: m.envelope.d.clone(),
        a_bounds,
        mode: m.mode,
    })
}

/// Smallest `d ≥ 1` with `Ω^d k ≅ k` among the computed degrees. A module of
/// dimension one over a `p`-group is trivial, so the dimension decides.
pub fn periodicity_degree(ext: &Extraction) -> Result<Option<usize>> {
    let top = ext.resolution().top_degree();
    for d in 1..=top {
        if omega_subspace(ext.resolution(), d)?.rank() == 1 {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Completion for rank one: with `Ω^d k ≅ k` the ring is generated in degrees
/// `≤ d` and has series `(Σ_{n<d} b_n t^n) / (1 - t^d)`, so a presentation
/// through degree `≥ d` with exactly that series is complete.
pub fn periodic_completion(ext: &Extraction, d: usize) -> Result<bool> {
    let n = ext.degree().unwrap_or(0);
    if n < d {
        return Ok(false);
    }
    let numerator = (0..d).map(|k| ext.resolution().rank(k) as i64).collect();
    let expected = HilbertSeries::new(numerator, vec![d]);
    let actual = exact_hilbert_series(ext.presentation())?;
    Ok(actual.same_series(&expected))
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub caps: ResolutionCaps,
    /// User parameters, in terms of the extracted generators.
    pub params: Option<Vec<Polynomial>>,
    pub dilations: Option<Vec<u32>>,
    pub inequality: Option<Inequality>,
    pub assume_depth2: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub p: u32,
    pub order: usize,
    pub p_rank: u32,
    pub center_rank: u32,
    pub complete: bool,
    #[serde(rename = "N")]
    pub n: usize,
    pub presentation: RingFile,
    pub verdict: Option<CompletionVerdict>,
    pub periodicity: Option<usize>,
    pub resolution_ranks: Vec<usize>,
    pub parameters: Vec<String>,
    pub param_degrees: Vec<usize>,
    pub dilations: Vec<u32>,
    pub projected_degree: Option<usize>,
    pub stop_reason: Option<String>,
}

struct Driver {
    ext: Extraction,
    elabs: Vec<ElabRestriction>,
    options: PipelineOptions,
    inequality: Inequality,
    r: usize,
}

struct Attempt {
    verdict: Option<CompletionVerdict>,
    params: Option<ParameterSequence>,
    dilations: Vec<u32>,
}

impl Driver {
    fn parameters(&mut self) -> Result<Option<(ParameterSequence, Vec<u32>)>> {
        if let Some(user) = &self.options.params {
            let ngens = self.ext.presentation().generators().len();
            let used = user
                .iter()
                .flat_map(|z| z.terms().flat_map(|(m, _)| m.support().map(|(i, _)| i)).collect::<Vec<_>>())
                .max();
            if used.is_some_and(|i| i >= ngens) {
                return Ok(None);
            }
            return ParameterSequence::new(self.ext.presentation(), user.clone()).map(|p| Some((p, Vec::new())));
        }
        let found = match &self.options.dilations {
            Some(d) => crate::dickson::find_parameters(&self.ext, &mut self.elabs, d).map(|p| (p, d.clone())),
            None => search_parameters(&self.ext, &mut self.elabs),
        };
        match found {
            Ok(x) => Ok(Some(x)),
            Err(Error::DegreeCap { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn attempt(&mut self) -> Result<Attempt> {
        let Some((params, dilations)) = self.parameters()? else {
            return Ok(Attempt {
                verdict: None,
                params: None,
                dilations: Vec::new(),
            });
        };
        let max_degree = params.degrees.iter().copied().max().unwrap_or(0);
        if self.ext.degree().unwrap_or(0) < max_degree {
            return Ok(Attempt {
                verdict: None,
                params: Some(params),
                dilations,
            });
        }
        let data = restrict_parameters(&self.ext, &mut self.elabs, &params)?;
        let tau = self.ext.truncated()?;
        let verdict = completion_test(&tau, &params, &data, self.inequality)?;
        Ok(Attempt {
            verdict: Some(verdict),
            params: Some(params),
            dilations,
        })
    }
}

/// Extend the resolution and presentation degree by degree until the
/// certificate fires or the caps are reached. Never claims completeness
/// without a certificate.
pub fn compute_until_complete(group: Arc<PGroup>, options: PipelineOptions) -> Result<PipelineReport> {
    let center_rank = group.center_rank();
    let p_rank = group.p_rank();
    let inequality = Inequality::resolve(options.inequality, center_rank, options.assume_depth2)?;
    let caps = options.caps;
    let ext = Extraction::new(group.clone(), caps)?;
    let elabs = if p_rank >= 2 { ElabRestriction::all(&ext)? } else { Vec::new() };
    let mut driver = Driver {
        ext,
        elabs,
        options,
        inequality,
        r: p_rank as usize,
    };
    let mut last = Attempt {
        verdict: None,
        params: None,
        dilations: Vec::new(),
    };
    let mut periodicity = None;
    let mut stop_reason = None;
    let mut complete = false;
    for n in 1..=caps.max_degree {
        if let Err(e) = driver.ext.advance(n) {
            stop_reason = Some(e.to_string());
            break;
        }
        if driver.r <= 1 {
            if periodicity.is_none() {
                periodicity = periodicity_degree(&driver.ext)?;
            }
            if let Some(d) = periodicity {
                if periodic_completion(&driver.ext, d)? {
                    complete = true;
                    break;
                }
            }
            continue;
        }
        match driver.attempt() {
            Ok(a) => {
                complete = a.verdict.as_ref().is_some_and(|v| v.complete);
                last = a;
                if complete {
                    break;
                }
            }
            Err(e @ (Error::DimCap { .. } | Error::BasisCap { .. } | Error::DegreeCap { .. })) => {
                stop_reason = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if !complete && stop_reason.is_none() {
        stop_reason = Some(format!("degree cap {} reached", caps.max_degree));
    }
    let ext = &driver.ext;
    let pres = ext.presentation();
    let names = pres.names();
    let (parameters, param_degrees) = match &last.params {
        Some(p) => (p.elements.iter().map(|z| z.display(&names)).collect(), p.degrees.clone()),
        None => (Vec::new(), Vec::new()),
    };
    let projected = if param_degrees.is_empty() {
        periodicity
    } else {
        Some(projected_degree(&param_degrees))
    };
    Ok(PipelineReport {
        p: group.p(),
        order: group.order(),
        p_rank,
        center_rank,
        complete,
        n: ext.degree().unwrap_or(0),
        presentation: RingFile::from_presentation(pres),
        verdict: last.verdict,
        periodicity,
        resolution_ranks: ext.resolution().ranks(),
        parameters,
        param_degrees,
        dilations: last.dilations,
        projected_degree: projected,
        stop_reason: if complete { None } else { stop_reason },
    })
}
