use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::gring::basis::DegreeBasis;
use crate::gring::params::ParameterSequence;
use crate::gring::poly::GradedPresentation;
use crate::linalg::FpMatrix;

pub const MAX_WINDOW: usize = 200;

/// Dimensions of `H^{-s,t}` of the Koszul complex for `0 ≤ s ≤ r`, `0 ≤ t ≤ window`.
///
/// `K^{-s}` is a sum of copies of the ring indexed by `s`-subsets `S`, the
/// copy for `S` shifted up by `Σ_{k∈S} n_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub window: usize,
    /// `table[s][t] = dim H^{-s,t}`.
    pub table: Vec<Vec<usize>>,
}

impl KoszulReport {
    pub fn dim(&self, s: usize, t: usize) -> usize {
        self.table[s][t]
    }

    /// Nonzero entries above the vanishing line `t > n_1 + … + n_s + d_{r-s}`
    /// for `s ≥ 1`, and `t > n_1 + … + n_r + d_r` for `s = 0`.
    pub fn violations(&self, degrees: &[usize], d: &[ExtInt]) -> Vec<(usize, usize)> {
        let r = degrees.len();
        let mut out = Vec::new();
        for s in 0..=r {
            let shift: i64 = if s == 0 {
                degrees.iter().sum::<usize>() as i64
            } else {
                degrees[..s].iter().sum::<usize>() as i64
            };
            let line = d[r - s] + shift;
            for t in 0..=self.window {
                if ExtInt::from(t as i64) > line && self.table[s][t] != 0 {
                    out.push((s, t));
                }
            }
        }
        out
    }
}

fn subsets(r: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, r: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for k in start..r {
            cur.push(k);
            rec(k + 1, r, s, cur, out);
            cur.pop();
        }
    }
    rec(0, r, s, &mut cur, &mut out);
    out
}

struct Complex<'a> {
    basis: DegreeBasis,
    params: &'a ParameterSequence,
}

impl Complex<'_> {
    fn shift(&self, subset: &[usize]) -> usize {
        subset.iter().map(|&k| self.params.degrees[k]).sum()
    }

    /// Summands of `K^{-s}_t`: subsets with their offset and dimension.
    fn layout(&self, s: usize, t: usize) -> Vec<(Vec<usize>, usize, usize)> {
        let mut offset = 0;
        let mut out = Vec::new();
        for sub in subsets(self.params.len(), s) {
            let sh = self.shift(&sub);
            let dim = if sh <= t { self.basis.dim(t - sh) } else { 0 };
            out.push((sub, offset, dim));
            offset += dim;
        }
        out
    }

    /// `d: K^{-s}_t -> K^{-s+1}_t`, `e_S ⊗ m ↦ Σ_i (-1)^i ζ_{S_i} m e_{S ∖ S_i}`.
    fn differential(&mut self, s: usize, t: usize) -> Result<FpMatrix> {
        let f = self.basis.presentation().field();
        let src = self.layout(s, t);
        let tgt = self.layout(s - 1, t);
        let rows: usize = tgt.iter().map(|x| x.2).sum();
        let cols: usize = src.iter().map(|x| x.2).sum();
        let mut m = FpMatrix::zeros(f, rows, cols);
        for (sub, col_off, dim) in &src {
            if *dim == 0 {
                continue;
            }
            let from = t - self.shift(sub);
            for (i, &k) in sub.iter().enumerate() {
                let mut rest = sub.clone();
                rest.remove(i);
                let (_, row_off, _) = tgt.iter().find(|x| x.0 == rest).expect("face exists");
                let block = self.basis.mult_matrix(&self.params.elements[k], from)?;
                let sign = if i % 2 == 0 { 1 } else { f.neg(1) };
                for a in 0..block.rows() {
                    for b in 0..block.cols() {
                        let v = block.get(a, b);
                        if v != 0 {
                            m.set(row_off + a, col_off + b, f.mul(sign, v));
                        }
                    }
                }
            }
        }
        Ok(m)
    }
}

pub fn koszul_cohomology(pres: &GradedPresentation, params: &ParameterSequence, window: usize) -> Result<KoszulReport> {
    if window > MAX_WINDOW {
        return Err(Error::WindowTooLarge {
            window,
            limit: MAX_WINDOW,
        });
    }
    let r = params.len();
    let mut c = Complex {
        basis: DegreeBasis::compute(pres, window)?,
        params,
    };
    let mut table = vec![vec![0usize; window + 1]; r + 1];
    for t in 0..=window {
        let ranks: Vec<usize> = (0..=r + 1)
            .map(|s| {
                if s == 0 || s > r {
                    Ok(0)
                } else {
                    c.differential(s, t).map(|m| m.rank())
                }
            })
            .collect::<Result<_>>()?;
        for s in 0..=r {
            let dim: usize = c.layout(s, t).iter().map(|x| x.2).sum();
            table[s][t] = dim - ranks[s] - ranks[s + 1];
        }
    }
    Ok(KoszulReport { window, table })
}
