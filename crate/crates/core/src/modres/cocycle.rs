use crate::error::{Error, Result};
use crate::linalg::FpMatrix;

use super::resolution::{augment_components, MinimalResolution};

/// A cohomology class in `H^n(G, k) = Hom_kG(P_n, k)`, given by its values on
/// the free generators of `P_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cocycle {
    pub degree: usize,
    pub vector: Vec<u32>,
}

impl Cocycle {
    pub fn new(degree: usize, vector: Vec<u32>) -> Self {
        Self { degree, vector }
    }

    /// The unit class in degree 0.
    pub fn one() -> Self {
        Self::new(0, vec![1])
    }

    /// The dual basis class `e_j^*` in degree `n`.
    pub fn basis(res: &MinimalResolution, degree: usize, j: usize) -> Self {
        let mut vector = vec![0; res.rank(degree)];
        vector[j] = 1;
        Self::new(degree, vector)
    }

    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(|&x| x == 0)
    }

    /// Value of the cocycle on a chain `v ∈ P_n`.
    pub fn evaluate(&self, res: &MinimalResolution, v: &[u32]) -> u32 {
        let f = res.field();
        let aug = augment_components(f, res.group().order(), res.rank(self.degree), v);
        aug.iter()
            .zip(&self.vector)
            .fold(0, |acc, (&a, &c)| f.add(acc, f.mul(a, c)))
    }
}

/// How the non-unique lifting steps pick their solution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LiftStrategy {
    /// The solver's canonical solution (free variables zero).
    #[default]
    Canonical,
    /// Canonical solution plus the sum of the kernel basis; used to check that
    /// cohomology-level results do not depend on the lift.
    Shifted,
}

/// A chain map `f_i : P_{m+i} -> P_i` lifting a degree-`m` cocycle, stored by
/// the images of free generators.
#[derive(Clone, Debug)]
pub struct ChainLift {
    cocycle: Cocycle,
    strategy: LiftStrategy,
    stages: Vec<Vec<Vec<u32>>>,
}

impl ChainLift {
    pub fn new(res: &MinimalResolution, cocycle: Cocycle, strategy: LiftStrategy) -> Result<Self> {
        res.require(cocycle.degree)?;
        if cocycle.vector.len() != res.rank(cocycle.degree) {
            return Err(Error::DimensionMismatch {
                expected: res.rank(cocycle.degree),
                found: cocycle.vector.len(),
            });
        }
        let order = res.group().order();
        let stage0 = cocycle
            .vector
            .iter()
            .map(|&c| {
                let mut v = vec![0; order];
                v[0] = c;
                v
            })
            .collect();
        Ok(Self {
            cocycle,
            strategy,
            stages: vec![stage0],
        })
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    /// Number of stages computed, minus one.
    pub fn length(&self) -> usize {
        self.stages.len() - 1
    }

    /// Images of the generators of `P_{m+i}` in `P_i`.
    pub fn stage(&self, i: usize) -> &[Vec<u32>] {
        &self.stages[i]
    }

    pub fn extend_to(&mut self, res: &MinimalResolution, stages: usize) -> Result<()> {
        let m = self.cocycle.degree;
        res.require(m + stages)?;
        let f = res.field();
        while self.stages.len() <= stages {
            let i = self.stages.len();
            let solver = res.solver(i);
            let prev = &self.stages[i - 1];
            let shift = (self.strategy == LiftStrategy::Shifted).then(|| {
                let mut s = vec![0u32; res.matrix(i).cols()];
                for k in res.matrix(i).kernel_basis().to_rows() {
                    f.axpy(&mut s, 1, &k);
                }
                s
            });
            let mut next = Vec::with_capacity(res.rank(m + i));
            for img in res.images(m + i) {
                let rhs = res.apply_map(prev, res.rank(i - 1), img);
                let mut x = solver
                    .solve(&rhs)?
                    .expect("chain lift exists by exactness of the resolution");
                if let Some(s) = &shift {
                    f.axpy(&mut x, 1, s);
                }
                next.push(x);
            }
            self.stages.push(next);
        }
        Ok(())
    }

    /// The matrix of `c ↦ self · c` from degree `n` to degree `m + n`.
    pub fn product_matrix(&mut self, res: &MinimalResolution, n: usize) -> Result<FpMatrix> {
        self.extend_to(res, n)?;
        let f = res.field();
        let order = res.group().order();
        let rows = self.stages[n]
            .iter()
            .map(|img| augment_components(f, order, res.rank(n), img))
            .collect();
        Ok(FpMatrix::from_vecs(f, res.rank(n), rows))
    }

    /// `self · b`, the composite of `b` with this lift.
    pub fn product(&mut self, res: &MinimalResolution, b: &Cocycle) -> Result<Cocycle> {
        let m = self.product_matrix(res, b.degree)?;
        Ok(Cocycle::new(self.cocycle.degree + b.degree, m.mul_vec(&b.vector)?))
    }
}

/// The cup product `a · b`.
pub fn cup_product(res: &MinimalResolution, a: &Cocycle, b: &Cocycle) -> Result<Cocycle> {
    cup_product_with(res, a, b, LiftStrategy::Canonical)
}

pub fn cup_product_with(
    res: &MinimalResolution,
    a: &Cocycle,
    b: &Cocycle,
    strategy: LiftStrategy,
) -> Result<Cocycle> {
    res.require(a.degree + b.degree)?;
    ChainLift::new(res, a.clone(), strategy)?.product(res, b)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::named;
    use crate::modres::resolution::ResolutionCaps;

    fn res(g: crate::group::PGroup, n: usize) -> MinimalResolution {
        MinimalResolution::through(Arc::new(g), n, ResolutionCaps::default()).unwrap()
    }

    #[test]
    fn unit_acts_trivially() {
        let r = res(named::dihedral8().unwrap(), 4);
        for n in 0..=4 {
            for j in 0..r.rank(n) {
                let b = Cocycle::basis(&r, n, j);
                assert_eq!(cup_product(&r, &Cocycle::one(), &b).unwrap(), b);
                assert_eq!(cup_product(&r, &b, &Cocycle::one()).unwrap(), b);
            }
        }
    }

    #[test]
    fn z2_generator_squares_nonzero() {
        let r = res(named::cyclic(2, 2).unwrap(), 6);
        let mut power = Cocycle::one();
        let x = Cocycle::basis(&r, 1, 0);
        for n in 1..=6 {
            power = cup_product(&r, &power, &x).unwrap();
            assert_eq!(power.degree, n);
            assert!(!power.is_zero());
        }
    }

    #[test]
    fn z4_generator_squares_to_zero() {
        let r = res(named::cyclic(2, 4).unwrap(), 4);
        let x = Cocycle::basis(&r, 1, 0);
        assert!(cup_product(&r, &x, &x).unwrap().is_zero());
        let y = Cocycle::basis(&r, 2, 0);
        assert!(!cup_product(&r, &x, &y).unwrap().is_zero());
        assert!(!cup_product(&r, &y, &y).unwrap().is_zero());
    }

    #[test]
    fn z3_signs() {
        // H*(Z/3, F_3) = Λ(x) ⊗ F_3[y].
        let r = res(named::cyclic(3, 3).unwrap(), 4);
        let x = Cocycle::basis(&r, 1, 0);
        let y = Cocycle::basis(&r, 2, 0);
        assert!(cup_product(&r, &x, &x).unwrap().is_zero());
        let xy = cup_product(&r, &x, &y).unwrap();
        let yx = cup_product(&r, &y, &x).unwrap();
        assert!(!xy.is_zero());
        assert_eq!(xy, yx);
    }

    #[test]
    fn graded_commutative_and_lift_independent() {
        for g in [named::dihedral8().unwrap(), named::quaternion8().unwrap(), named::klein().unwrap()] {
            let r = res(g, 5);
            for (m, n) in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3)] {
                for i in 0..r.rank(m) {
                    for j in 0..r.rank(n) {
                        let a = Cocycle::basis(&r, m, i);
                        let b = Cocycle::basis(&r, n, j);
                        let ab = cup_product(&r, &a, &b).unwrap();
                        assert_eq!(ab, cup_product(&r, &b, &a).unwrap());
                        assert_eq!(ab, cup_product_with(&r, &a, &b, LiftStrategy::Shifted).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn associativity_on_d8() {
        let r = res(named::dihedral8().unwrap(), 4);
        let gens: Vec<Cocycle> = (0..2).map(|j| Cocycle::basis(&r, 1, j)).collect();
        for a in &gens {
            for b in &gens {
                let w = Cocycle::basis(&r, 2, 2);
                let left = cup_product(&r, &cup_product(&r, a, b).unwrap(), &w).unwrap();
                let right = cup_product(&r, a, &cup_product(&r, b, &w).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn too_short_resolution() {
        let r = res(named::klein().unwrap(), 2);
        let x = Cocycle::basis(&r, 2, 0);
        assert!(matches!(
            cup_product(&r, &x, &x),
            Err(Error::ResolutionTooShort { .. })
        ));
    }
}
