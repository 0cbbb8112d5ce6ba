//! Degree-by-degree extraction of a presentation of `H*(G, k)` from a minimal
//! resolution.
//!
//! In each degree the products of existing generators are evaluated as
//! cocycles. The kernel of that evaluation gives the new relations; a
//! complement of its image, chosen from rref pivot order, gives the new
//! generators.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gring::{DegreeBasis, Generator, GradedPresentation, Monomial, Polynomial, TruncatedPresentation};
use crate::group::{PGroup, SubgroupEmbedding};
use crate::linalg::{FpMatrix, RowSpace, Solver};
use crate::modres::{ChainLift, Cocycle, LiftStrategy, MinimalResolution, ResolutionCaps, RestrictionMap};

/// What changed in one degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DegreeLog {
    pub degree: usize,
    pub new_generators: Vec<String>,
    pub new_relations: usize,
}

/// A presentation of the cohomology ring that agrees with the resolution in
/// every degree extracted so far.
#[derive(Clone, Debug)]
pub struct Extraction {
    res: MinimalResolution,
    pres: GradedPresentation,
    basis: Option<DegreeBasis>,
    lifts: Vec<ChainLift>,
    product_matrices: HashMap<(usize, usize), FpMatrix>,
    cocycles: HashMap<Monomial, Vec<u32>>,
    /// `eval[n]`: columns are standard monomials, rows the cocycle basis.
    eval: Vec<FpMatrix>,
    inverse: Vec<Solver>,
    log: Vec<DegreeLog>,
}

impl Extraction {
    pub fn new(group: Arc<PGroup>, caps: ResolutionCaps) -> Result<Self> {
        let res = MinimalResolution::new(group.clone(), caps)?;
        Ok(Self {
            res,
            pres: GradedPresentation::new(group.p(), Vec::new(), Vec::new())?,
            basis: None,
            lifts: Vec::new(),
            product_matrices: HashMap::new(),
            cocycles: HashMap::new(),
            eval: Vec::new(),
            inverse: Vec::new(),
            log: Vec::new(),
        })
    }

    /// Extract through degree `n`.
    pub fn through(group: Arc<PGroup>, n: usize, caps: ResolutionCaps) -> Result<Self> {
        let mut e = Self::new(group, caps)?;
        e.advance(n)?;
        Ok(e)
    }

    pub fn resolution(&self) -> &MinimalResolution {
        &self.res
    }

    pub fn group(&self) -> &Arc<PGroup> {
        self.res.group()
    }

    /// Last extracted degree, or `None` if nothing has been extracted.
    pub fn degree(&self) -> Option<usize> {
        self.eval.len().checked_sub(1)
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.pres
    }

    pub fn truncated(&self) -> Result<TruncatedPresentation> {
        TruncatedPresentation::new(self.pres.clone(), self.degree().unwrap_or(0))
    }

    pub fn log(&self) -> &[DegreeLog] {
        &self.log
    }

    /// Standard-monomial basis of the current presentation through the
    /// extracted degree.
    pub fn basis(&self) -> &DegreeBasis {
        self.basis.as_ref().expect("degree 0 is extracted on advance")
    }

    pub fn advance(&mut self, to: usize) -> Result<()> {
        self.res.extend_to(to)?;
        let start = self.eval.len();
        for n in start..=to {
            self.step(n)?;
        }
        Ok(())
    }

    fn product_matrix(&mut self, generator: usize, n: usize) -> Result<&FpMatrix> {
        if !self.product_matrices.contains_key(&(generator, n)) {
            let m = self.lifts[generator].product_matrix(&self.res, n)?;
            self.product_matrices.insert((generator, n), m);
        }
        Ok(&self.product_matrices[&(generator, n)])
    }

    /// Cocycle of a monomial, built as `x_i · (m / x_i)` for its first
    /// variable. No sign arises since `x_i` precedes every other factor.
    fn monomial_cocycle(&mut self, m: &Monomial) -> Result<Vec<u32>> {
        if let Some(v) = self.cocycles.get(m) {
            return Ok(v.clone());
        }
        let v = match m.first_var() {
            None => vec![1],
            Some(i) => {
                let rest = m.div(&Monomial::var(i));
                let c = self.monomial_cocycle(&rest)?;
                let d = rest.degree(self.pres.degrees());
                self.product_matrix(i, d)?.mul_vec(&c)?
            }
        };
        self.cocycles.insert(m.clone(), v.clone());
        Ok(v)
    }

    fn step(&mut self, n: usize) -> Result<()> {
        let f = self.res.field();
        let b = self.res.rank(n);
        let mut log = DegreeLog {
            degree: n,
            ..DegreeLog::default()
        };
        let basis = DegreeBasis::compute(&self.pres, n)?;
        let standard = basis.standard_monomials(n);
        let mut columns = Vec::with_capacity(standard.len());
        for m in &standard {
            columns.push(self.monomial_cocycle(m)?);
        }
        let eval = FpMatrix::from_columns(f, b, &columns);
        for k in eval.kernel_basis().to_rows() {
            self.pres.add_relation(basis.polynomial(n, &k))?;
            log.new_relations += 1;
        }
        let mut image = RowSpace::new(f, b);
        for c in &columns {
            image.insert(c);
        }
        let pivots = image.pivots().to_vec();
        for k in (0..b).filter(|k| !pivots.contains(k)) {
            let name = format!("x{}", self.pres.generators().len() + 1);
            let i = self.pres.add_generator(Generator {
                name: name.clone(),
                degree: n,
            })?;
            let mut v = vec![0; b];
            v[k] = 1;
            self.cocycles.insert(Monomial::var(i), v.clone());
            self.lifts
                .push(ChainLift::new(&self.res, Cocycle::new(n, v), LiftStrategy::Canonical)?);
            log.new_generators.push(name);
        }
        let basis = DegreeBasis::compute(&self.pres, n)?;
        let mut columns = Vec::with_capacity(basis.dim(n));
        for m in basis.standard_monomials(n) {
            columns.push(self.monomial_cocycle(&m)?);
        }
        let eval = FpMatrix::from_columns(f, b, &columns);
        if eval.cols() != b || eval.rank() != b {
            return Err(Error::InvalidPresentation(format!(
                "extracted presentation is not faithful in degree {n}"
            )));
        }
        self.inverse.push(Solver::new(&eval));
        self.eval.push(eval);
        self.basis = Some(basis);
        self.log.push(log);
        Ok(())
    }

    /// Cocycle vector of a homogeneous degree-`n` element.
    pub fn to_cocycle(&self, n: usize, p: &Polynomial) -> Result<Vec<u32>> {
        self.require(n)?;
        let coords = self.basis().normal_form(n, p)?;
        self.eval[n].mul_vec(&coords)
    }

    /// Standard-basis coordinates of a degree-`n` cocycle vector.
    pub fn coordinates(&self, n: usize, v: &[u32]) -> Result<Vec<u32>> {
        self.require(n)?;
        Ok(self.inverse[n]
            .solve(v)?
            .expect("evaluation is invertible in every extracted degree"))
    }

    /// The element represented by a degree-`n` cocycle vector.
    pub fn from_cocycle(&self, n: usize, v: &[u32]) -> Result<Polynomial> {
        let coords = self.coordinates(n, v)?;
        Ok(self.basis().polynomial(n, &coords))
    }

    /// The evaluation matrix in degree `n` (standard basis to cocycle basis).
    pub fn evaluation(&self, n: usize) -> &FpMatrix {
        &self.eval[n]
    }

    fn require(&self, n: usize) -> Result<()> {
        match self.degree() {
            Some(d) if d >= n => Ok(()),
            d => Err(Error::ResolutionTooShort {
                have: d.unwrap_or(0),
                need: n,
            }),
        }
    }
}

/// A maximal elementary abelian subgroup with its own extracted ring and the
/// restriction map into it.
#[derive(Clone, Debug)]
pub struct ElabRestriction {
    pub rank: usize,
    pub subgroup: SubgroupEmbedding,
    pub ring: Extraction,
    map: RestrictionMap,
}

impl ElabRestriction {
    pub fn new(parent: &Extraction, subgroup: SubgroupEmbedding, rank: usize) -> Result<Self> {
        let (e, embedding) = parent.group().subgroup_as_group(&subgroup)?;
        let ring = Extraction::new(Arc::new(e), parent.resolution().caps())?;
        let map = RestrictionMap::new(parent.resolution(), ring.resolution(), embedding)?;
        Ok(Self {
            rank,
            subgroup,
            ring,
            map,
        })
    }

    /// One entry per conjugacy class of maximal elementary abelian subgroups.
    pub fn all(parent: &Extraction) -> Result<Vec<Self>> {
        parent
            .group()
            .maximal_elementary_abelians()
            .classes
            .into_iter()
            .map(|c| Self::new(parent, c.representative, c.rank as usize))
            .collect()
    }

    /// Restriction in degree `n` as a matrix from parent cocycles to subgroup cocycles.
    pub fn matrix(&mut self, parent: &Extraction, n: usize) -> Result<FpMatrix> {
        self.ring.advance(n)?;
        self.map.matrix(parent.resolution(), self.ring.resolution(), n)
    }

    /// Restriction of a homogeneous degree-`n` element, in the subgroup's presentation.
    pub fn restrict(&mut self, parent: &Extraction, n: usize, p: &Polynomial) -> Result<Polynomial> {
        let z = parent.to_cocycle(n, p)?;
        let r = self.matrix(parent, n)?;
        self.ring.from_cocycle(n, &r.mul_vec(&z)?)
    }
}
