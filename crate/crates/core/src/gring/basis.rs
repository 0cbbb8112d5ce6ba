use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, RowSpace};

use super::poly::{GradedPresentation, Monomial, Polynomial};

/// Degree-`n` data: all admissible monomials (largest first) and the ideal's
/// degree-`n` part in reduced echelon form over them.
#[derive(Clone, Debug)]
pub struct DegreePart {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    ideal: RowSpace,
    /// Columns of standard (non-leading) monomials, in column order.
    standard: Vec<usize>,
    standard_pos: HashMap<usize, usize>,
}

impl DegreePart {
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }
    pub fn ideal(&self) -> &RowSpace {
        &self.ideal
    }
    pub fn dim(&self) -> usize {
        self.standard.len()
    }
    pub fn standard_monomials(&self) -> Vec<Monomial> {
        self.standard.iter().map(|&c| self.monomials[c].clone()).collect()
    }
    /// Leading monomials of the ideal in this degree.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.ideal.pivots().iter().map(|&c| self.monomials[c].clone()).collect()
    }
    pub fn column(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Degreewise Macaulay-matrix bases of a presented algebra.
///
/// `I_n = Σ_l x_l · I_{n - d_l} + (relations of degree n)`, each computed as an
/// echelon form over the degree-`n` monomials; the standard monomials are the
/// non-pivot columns.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    pres: GradedPresentation,
    parts: Vec<DegreePart>,
    max_columns: usize,
    /// Dense echelon rows are stored for every degree, so memory is bounded
    /// by the total number of stored entries.
    entries: usize,
}

pub const DEFAULT_MAX_COLUMNS: usize = 200_000;
pub const MAX_ENTRIES: usize = 1 << 28;

impl DegreeBasis {
    pub fn new(pres: &GradedPresentation) -> Self {
        Self::with_cap(pres, DEFAULT_MAX_COLUMNS)
    }

    pub fn with_cap(pres: &GradedPresentation, max_columns: usize) -> Self {
        Self {
            pres: pres.clone(),
            parts: Vec::new(),
            max_columns,
            entries: 0,
        }
    }

    pub fn compute(pres: &GradedPresentation, through: usize) -> Result<Self> {
        let mut b = Self::new(pres);
        b.extend_to(through)?;
        Ok(b)
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.pres
    }

    /// Degrees computed so far, or `None` before degree 0.
    pub fn through(&self) -> Option<usize> {
        self.parts.len().checked_sub(1)
    }

    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.parts.len() <= n {
            self.step()?;
        }
        Ok(())
    }

    fn step(&mut self) -> Result<()> {
        let n = self.parts.len();
        let grading = self.pres.grading().clone();
        let f = grading.field;
        let monomials = grading.monomials_of_degree(n);
        if monomials.len() > self.max_columns {
            return Err(Error::DimCap {
                cap: self.max_columns,
            });
        }
        if monomials.len().saturating_mul(monomials.len()) > MAX_ENTRIES - self.entries.min(MAX_ENTRIES) {
            return Err(Error::BasisCap { cap: MAX_ENTRIES });
        }
        let index: HashMap<Monomial, usize> =
            monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ideal = RowSpace::new(f, monomials.len());
        for (l, &d) in grading.degrees.iter().enumerate() {
            if d > n {
                continue;
            }
            let lower = &self.parts[n - d];
            let x = Monomial::var(l);
            for row in lower.ideal.basis() {
                let mut v = vec![0u32; monomials.len()];
                for (c, &coef) in row.iter().enumerate() {
                    if coef == 0 {
                        continue;
                    }
                    if let Some((m, s)) = grading.mul(&x, &lower.monomials[c]) {
                        let j = index[&m];
                        v[j] = f.add(v[j], f.mul(s, coef));
                    }
                }
                ideal.insert(&v);
            }
        }
        for r in self.pres.relations() {
            if r.homogeneous_degree(&grading.degrees)? == Some(n) {
                let v = vector_in(&index, monomials.len(), f, r)?;
                ideal.insert(&v);
            }
        }
        self.entries += ideal.rank() * monomials.len();
        let pivots = ideal.pivots().to_vec();
        let standard: Vec<usize> = (0..monomials.len())
            .filter(|c| pivots.binary_search(c).is_err())
            .collect();
        let standard_pos = standard.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        self.parts.push(DegreePart {
            monomials,
            index,
            ideal,
            standard,
            standard_pos,
        });
        Ok(())
    }

    pub fn part(&self, n: usize) -> &DegreePart {
        &self.parts[n]
    }

    fn require(&self, n: usize) -> Result<()> {
        match self.through() {
            Some(t) if t >= n => Ok(()),
            _ => Err(Error::DegreeCap { cap: self.through().unwrap_or(0) }),
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.parts[n].dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(DegreePart::dim).collect()
    }

    pub fn standard_monomials(&self, n: usize) -> Vec<Monomial> {
        self.parts[n].standard_monomials()
    }

    /// Coordinates of a homogeneous element of degree `n` in the standard basis.
    pub fn normal_form(&self, n: usize, p: &Polynomial) -> Result<Vec<u32>> {
        self.require(n)?;
        let part = &self.parts[n];
        let f = self.pres.field();
        let p = p.normalize(self.pres.grading());
        if let Some(d) = p.homogeneous_degree(self.pres.degrees())? {
            if d != n {
                return Err(Error::NotHomogeneous);
            }
        }
        let mut v = vector_in(&part.index, part.monomials.len(), f, &p)?;
        part.ideal.reduce(&mut v);
        Ok(part.standard.iter().map(|&c| v[c]).collect())
    }

    /// The element with the given standard-basis coordinates.
    pub fn polynomial(&self, n: usize, coords: &[u32]) -> Polynomial {
        let part = &self.parts[n];
        Polynomial::from_terms(
            self.pres.field(),
            part.standard
                .iter()
                .zip(coords)
                .map(|(&c, &v)| (part.monomials[c].clone(), v)),
        )
    }

    /// Matrix of multiplication by a homogeneous `elem` from degree `n` to
    /// degree `n + deg elem`, in standard bases (columns = source).
    pub fn mult_matrix(&mut self, elem: &Polynomial, n: usize) -> Result<FpMatrix> {
        let grading = self.pres.grading().clone();
        let elem = elem.normalize(&grading);
        let d = match elem.homogeneous_degree(&grading.degrees)? {
            Some(d) => d,
            None => {
                self.extend_to(n)?;
                return Ok(FpMatrix::zeros(self.pres.field(), 0, self.dim(n)));
            }
        };
        self.extend_to(n + d)?;
        let f = grading.field;
        let target = &self.parts[n + d];
        let mut columns = Vec::with_capacity(self.dim(n));
        for s in self.standard_monomials(n) {
            let prod = elem.mul(&grading, &Polynomial::monomial(s, 1));
            let mut v = vector_in(&target.index, target.monomials.len(), f, &prod)?;
            target.ideal.reduce(&mut v);
            columns.push(target.standard.iter().map(|&c| v[c]).collect());
        }
        Ok(FpMatrix::from_columns(f, target.dim(), &columns))
    }

    /// Position of a standard monomial in the degree-`n` basis.
    pub fn standard_index(&self, n: usize, m: &Monomial) -> Option<usize> {
        let part = &self.parts[n];
        part.index.get(m).and_then(|c| part.standard_pos.get(c)).copied()
    }
}

fn vector_in(
    index: &HashMap<Monomial, usize>,
    len: usize,
    f: crate::linalg::PrimeField,
    p: &Polynomial,
) -> Result<Vec<u32>> {
    let mut v = vec![0u32; len];
    for (m, c) in p.terms() {
        let j = *index.get(m).ok_or(Error::NotHomogeneous)?;
        v[j] = f.add(v[j], c);
    }
    Ok(v)
}

/// Degreewise dimensions of the algebra through `through`.
pub fn hilbert(pres: &GradedPresentation, through: usize) -> Result<Vec<usize>> {
    Ok(DegreeBasis::compute(pres, through)?.dims())
}

pub fn degree_basis(pres: &GradedPresentation, through: usize) -> Result<DegreeBasis> {
    DegreeBasis::compute(pres, through)
}

pub fn mult_matrix(pres: &GradedPresentation, elem: &Polynomial, from_degree: usize) -> Result<FpMatrix> {
    DegreeBasis::new(pres).mult_matrix(elem, from_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gring::poly::Generator;

    fn ring(p: u32, degrees: &[usize], rels: Vec<Polynomial>) -> GradedPresentation {
        let gens = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Generator { name: ["x", "y", "z", "w"][i].into(), degree: d })
            .collect();
        GradedPresentation::new(p, gens, rels).unwrap()
    }

    fn mono(e: &[u32]) -> Polynomial {
        Polynomial::monomial(Monomial::new(e.to_vec()), 1)
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(hilbert(&ring(2, &[1, 1], vec![]), 5).unwrap(), vec![1, 2, 3, 4, 5, 6]);
        let micro = ring(2, &[1, 1], vec![mono(&[2]), mono(&[1, 1])]);
        assert_eq!(hilbert(&micro, 5).unwrap(), vec![1, 2, 1, 1, 1, 1]);
        let z4 = ring(2, &[1, 2], vec![mono(&[2])]);
        let b = degree_basis(&z4, 4).unwrap();
        assert_eq!(b.dims(), vec![1, 1, 1, 1, 1]);
        assert_eq!(b.standard_monomials(3), vec![Monomial::new(vec![1, 1])]);
        assert_eq!(b.standard_monomials(4), vec![Monomial::new(vec![0, 2])]);
    }

    #[test]
    fn dense_bases_are_capped() {
        let gens = (0..8).map(|i| Generator { name: format!("x{i}"), degree: 1 }).collect();
        let free = GradedPresentation::new(2, gens, vec![]).unwrap();
        assert!(matches!(DegreeBasis::compute(&free, 10), Err(Error::BasisCap { .. })));
    }

    #[test]
    fn quotient_by_dickson() {
        let f = crate::linalg::PrimeField::new(2).unwrap();
        let c21 = mono(&[2]).add(f, &mono(&[1, 1])).add(f, &mono(&[0, 2]));
        let c20 = mono(&[2, 1]).add(f, &mono(&[1, 2]));
        let q = ring(2, &[1, 1], vec![c21, c20]);
        assert_eq!(hilbert(&q, 6).unwrap(), vec![1, 2, 2, 1, 0, 0, 0]);
        let all = ring(2, &[1, 1], vec![mono(&[1]), mono(&[0, 1])]);
        assert_eq!(hilbert(&all, 3).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn multiplication_matrices() {
        let micro = ring(2, &[1, 1], vec![mono(&[2]), mono(&[1, 1])]);
        let m = mult_matrix(&micro, &mono(&[0, 1]), 1).unwrap();
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 1);
        let b = degree_basis(&micro, 1).unwrap();
        assert_eq!(b.polynomial(1, k.row(0)), mono(&[1]));
        let poly = ring(2, &[1, 1], vec![]);
        for n in 0..5 {
            let m = mult_matrix(&poly, &mono(&[1]), n).unwrap();
            assert_eq!(m.rank(), n + 1);
        }
        let one = mult_matrix(&micro, &Polynomial::constant(1), 3).unwrap();
        assert_eq!(one, FpMatrix::identity(one.field(), 1));
    }

    #[test]
    fn odd_prime_exterior() {
        // Λ(x) ⊗ F_3[y]: dims 1,1,1,...
        let z3 = ring(3, &[1, 2], vec![]);
        assert_eq!(hilbert(&z3, 6).unwrap(), vec![1; 7]);
        // Two exterior generators: xy = -yx, so x*y + y*x normalizes to zero.
        let r = ring(3, &[1, 1], vec![]);
        let mut b = DegreeBasis::new(&r);
        let x = Polynomial::var(0);
        let y = Polynomial::var(1);
        let xy = x.mul(r.grading(), &y);
        let yx = y.mul(r.grading(), &x);
        assert!(xy.add(r.field(), &yx).is_zero());
        assert_eq!(b.mult_matrix(&x, 1).unwrap().rank(), 1);
    }

    #[test]
    fn graded_commutativity_samples() {
        let r = ring(3, &[1, 1, 2], vec![]);
        let g = r.grading();
        let elems = [
            Polynomial::var(0),
            Polynomial::var(1).add(r.field(), &Polynomial::var(0).scale(r.field(), 2)),
            Polynomial::var(2),
            Polynomial::var(0).mul(g, &Polynomial::var(2)),
        ];
        for a in &elems {
            for b in &elems {
                let da = a.homogeneous_degree(r.degrees()).unwrap().unwrap();
                let db = b.homogeneous_degree(r.degrees()).unwrap().unwrap();
                let ab = a.mul(g, b);
                let ba = b.mul(g, a);
                let sign = if da * db % 2 == 1 { 2 } else { 1 };
                assert_eq!(ab, ba.scale(r.field(), sign));
            }
        }
    }
}
