use crate::error::{Error, Result};
use crate::linalg::FpMatrix;

use super::resolution::{act, augment_components, MinimalResolution};

/// A chain map from the resolution of a subgroup `E` into the resolution of
/// `G` restricted to `E`, lifting the identity on `k`.
///
/// Stage `n` stores the images in `P^G_n` of the free generators of `Q^E_n`.
#[derive(Clone, Debug)]
pub struct RestrictionMap {
    /// Element of `G` for each element index of `E`.
    embedding: Vec<usize>,
    stages: Vec<Vec<Vec<u32>>>,
}

impl RestrictionMap {
    /// `embedding[h]` is the element of `G` corresponding to element `h` of the subgroup.
    pub fn new(res_g: &MinimalResolution, res_e: &MinimalResolution, embedding: Vec<usize>) -> Result<Self> {
        let (g, e) = (res_g.group(), res_e.group());
        if embedding.len() != e.order() || embedding.first() != Some(&0) {
            return Err(Error::GroupMismatch);
        }
        for a in 0..e.order() {
            for b in 0..e.order() {
                if embedding[e.mul(a, b)] != g.mul(embedding[a], embedding[b]) {
                    return Err(Error::GroupMismatch);
                }
            }
        }
        let mut unit = vec![0; g.order()];
        unit[0] = 1;
        Ok(Self {
            embedding,
            stages: vec![vec![unit]],
        })
    }

    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    pub fn extend_to(&mut self, res_g: &MinimalResolution, res_e: &MinimalResolution, n: usize) -> Result<()> {
        res_g.require(n)?;
        res_e.require(n)?;
        let g = res_g.group();
        let f = res_g.field();
        let e_order = res_e.group().order();
        while self.stages.len() <= n {
            let i = self.stages.len();
            let prev = &self.stages[i - 1];
            let tgt_rank = res_g.rank(i - 1);
            let solver = res_g.solver(i);
            let mut next = Vec::with_capacity(res_e.rank(i));
            for img in res_e.images(i) {
                // φ_{i-1}(d^E e_j), extending kE-linearly through the embedding.
                let mut rhs = vec![0; tgt_rank * g.order()];
                for (k, phi_k) in prev.iter().enumerate() {
                    for h in 0..e_order {
                        let c = img[k * e_order + h];
                        if c != 0 {
                            f.axpy(&mut rhs, c, &act(g, self.embedding[h], tgt_rank, phi_k));
                        }
                    }
                }
                let x = solver
                    .solve(&rhs)?
                    .expect("restricted resolution is exact");
                next.push(x);
            }
            self.stages.push(next);
        }
        Ok(())
    }

    /// The matrix of `res : H^n(G) -> H^n(E)`, of size `b^E_n × b^G_n`.
    pub fn matrix(&mut self, res_g: &MinimalResolution, res_e: &MinimalResolution, n: usize) -> Result<FpMatrix> {
        self.extend_to(res_g, res_e, n)?;
        let f = res_g.field();
        let rows = self.stages[n]
            .iter()
            .map(|img| augment_components(f, res_g.group().order(), res_g.rank(n), img))
            .collect();
        Ok(FpMatrix::from_vecs(f, res_g.rank(n), rows))
    }
}

/// Restriction matrix in a single degree.
pub fn restriction_map(
    res_g: &MinimalResolution,
    res_e: &MinimalResolution,
    embedding: &[usize],
    n: usize,
) -> Result<FpMatrix> {
    RestrictionMap::new(res_g, res_e, embedding.to_vec())?.matrix(res_g, res_e, n)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{named, PGroup};
    use crate::modres::cocycle::{cup_product, Cocycle};
    use crate::modres::resolution::ResolutionCaps;

    fn resolve(g: PGroup, n: usize) -> MinimalResolution {
        MinimalResolution::through(Arc::new(g), n, ResolutionCaps::default()).unwrap()
    }

    #[test]
    fn whole_group_gives_identity() {
        let g = named::dihedral8().unwrap();
        let r = resolve(g.clone(), 4);
        let id: Vec<usize> = (0..g.order()).collect();
        for n in 0..=4 {
            let m = restriction_map(&r, &r, &id, n).unwrap();
            assert_eq!(m, FpMatrix::identity(r.field(), r.rank(n)));
        }
    }

    #[test]
    fn d8_restricts_to_kleins() {
        let g = named::dihedral8().unwrap();
        let r = resolve(g.clone(), 4);
        let classes = g.maximal_elementary_abelians();
        assert_eq!(classes.classes.len(), 2);
        let mut joint: Option<FpMatrix> = None;
        let mut maps = Vec::new();
        for c in &classes.classes {
            let (e, emb) = g.subgroup_as_group(&c.representative).unwrap();
            let re = resolve(e, 4);
            let mut map = RestrictionMap::new(&r, &re, emb).unwrap();
            let m0 = map.matrix(&r, &re, 0).unwrap();
            assert_eq!(m0, FpMatrix::identity(r.field(), 1));
            let m1 = map.matrix(&r, &re, 1).unwrap();
            assert_eq!(m1.rank(), 1);
            joint = Some(match joint {
                None => m1,
                Some(j) => j.vstack(&m1).unwrap(),
            });
            maps.push((map, re));
        }
        // Jointly injective in degree 1.
        assert_eq!(joint.unwrap().rank(), 2);

        // Restriction is a ring map on all degree-1 × degree-1 products.
        for (map, re) in &mut maps {
            let m1 = map.matrix(&r, re, 1).unwrap();
            let m2 = map.matrix(&r, re, 2).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let a = Cocycle::basis(&r, 1, i);
                    let b = Cocycle::basis(&r, 1, j);
                    let ab = cup_product(&r, &a, &b).unwrap();
                    let lhs = m2.mul_vec(&ab.vector).unwrap();
                    let ra = Cocycle::new(1, m1.mul_vec(&a.vector).unwrap());
                    let rb = Cocycle::new(1, m1.mul_vec(&b.vector).unwrap());
                    let rhs = cup_product(re, &ra, &rb).unwrap();
                    assert_eq!(lhs, rhs.vector);
                }
            }
        }
    }

    #[test]
    fn bad_embedding_rejected() {
        let g = named::dihedral8().unwrap();
        let r = resolve(g, 1);
        let k = resolve(named::klein().unwrap(), 1);
        assert!(RestrictionMap::new(&r, &k, vec![0, 1, 2, 3]).is_err());
    }
}
