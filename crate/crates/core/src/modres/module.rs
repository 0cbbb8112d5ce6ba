use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::PGroup;
use crate::linalg::{FpMatrix, PrimeField, RowSpace};

/// A finite-dimensional module over the group algebra `F_p G`.
///
/// The action is stored as one matrix per group generator, acting on column
/// vectors.
#[derive(Clone, Debug)]
pub struct KGModule {
    group: Arc<PGroup>,
    field: PrimeField,
    dim: usize,
    actions: Vec<FpMatrix>,
}

impl KGModule {
    /// Checks that the generator matrices extend to a representation of the
    /// whole group, walking every edge of the Cayley graph.
    pub fn new(group: Arc<PGroup>, actions: Vec<FpMatrix>) -> Result<Self> {
        let field = PrimeField::new(group.p())?;
        let gens = group.generators().to_vec();
        if actions.len() != gens.len() {
            return Err(Error::DimensionMismatch {
                expected: gens.len(),
                found: actions.len(),
            });
        }
        let dim = actions.first().map_or(0, FpMatrix::rows);
        for a in &actions {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.rows().max(a.cols()),
                });
            }
        }
        let module = Self {
            group,
            field,
            dim,
            actions,
        };
        module.check_representation()?;
        Ok(module)
    }

    pub(crate) fn new_unchecked(group: Arc<PGroup>, dim: usize, actions: Vec<FpMatrix>) -> Self {
        let field = PrimeField::new(group.p()).expect("group prime");
        Self {
            group,
            field,
            dim,
            actions,
        }
    }

    fn check_representation(&self) -> Result<()> {
        let g = &self.group;
        let mut rho: Vec<Option<FpMatrix>> = vec![None; g.order()];
        rho[0] = Some(FpMatrix::identity(self.field, self.dim));
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (s, a) in g.generators().iter().zip(&self.actions) {
                let y = g.mul(x, *s);
                let candidate = rho[x].as_ref().unwrap().mul(a)?;
                match &rho[y] {
                    Some(existing) if *existing != candidate => {
                        return Err(Error::InvalidGroup(
                            "action matrices violate the group relations".into(),
                        ))
                    }
                    Some(_) => {}
                    None => {
                        rho[y] = Some(candidate);
                        queue.push_back(y);
                    }
                }
            }
        }
        if rho.iter().any(Option::is_none) {
            return Err(Error::InvalidGroup("generators do not reach every element".into()));
        }
        Ok(())
    }

    pub fn trivial(group: Arc<PGroup>) -> Self {
        let field = PrimeField::new(group.p()).expect("group prime");
        let actions = vec![FpMatrix::identity(field, 1); group.generators().len()];
        Self::new_unchecked(group, 1, actions)
    }

    /// Left-regular module: basis indexed by group elements, `g e_h = e_{gh}`.
    pub fn regular(group: Arc<PGroup>) -> Self {
        Self::free(group, 1)
    }

    /// `(F_p G)^rank` with basis `(i, h)` at index `i |G| + h`.
    pub fn free(group: Arc<PGroup>, rank: usize) -> Self {
        let field = PrimeField::new(group.p()).expect("group prime");
        let n = group.order();
        let actions = group
            .generators()
            .iter()
            .map(|&s| {
                let mut m = FpMatrix::zeros(field, rank * n, rank * n);
                for i in 0..rank {
                    for h in 0..n {
                        m.set(i * n + group.mul(s, h), i * n + h, 1);
                    }
                }
                m
            })
            .collect();
        Self::new_unchecked(group, rank * n, actions)
    }

    pub fn group(&self) -> &Arc<PGroup> {
        &self.group
    }
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn actions(&self) -> &[FpMatrix] {
        &self.actions
    }

    /// `rad M = Σ_s (s - 1) M` over the group generators.
    pub fn radical(&self) -> RowSpace {
        let f = self.field;
        let mut rad = RowSpace::new(f, self.dim);
        for a in &self.actions {
            for j in 0..self.dim {
                let mut col = a.column(j);
                col[j] = f.sub(col[j], 1);
                rad.insert(&col);
            }
        }
        rad
    }

    /// Number of generators of a minimal generating set, `dim M / rad M`.
    pub fn top_dim(&self) -> usize {
        self.dim - self.radical().rank()
    }

    /// Projective (equivalently free, over a p-group) iff `dim M = top_dim · |G|`.
    pub fn is_free(&self) -> bool {
        self.dim == self.top_dim() * self.group.order()
    }

    pub fn tensor(&self, other: &KGModule) -> Result<KGModule> {
        if self.group != other.group && *self.group != *other.group {
            return Err(Error::GroupMismatch);
        }
        let f = self.field;
        let (da, db) = (self.dim, other.dim);
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| {
                let mut m = FpMatrix::zeros(f, da * db, da * db);
                for i in 0..da {
                    for j in 0..da {
                        let x = a.get(i, j);
                        if x == 0 {
                            continue;
                        }
                        for k in 0..db {
                            for l in 0..db {
                                let y = b.get(k, l);
                                if y != 0 {
                                    m.set(i * db + k, j * db + l, f.mul(x, y));
                                }
                            }
                        }
                    }
                }
                m
            })
            .collect();
        Ok(Self::new_unchecked(self.group.clone(), da * db, actions))
    }

    /// The submodule spanned by `basis`, in the coordinates of that basis.
    pub fn submodule(&self, basis: &RowSpace) -> Result<KGModule> {
        let f = self.field;
        let k = basis.rank();
        let mut actions = Vec::with_capacity(self.actions.len());
        for a in &self.actions {
            let mut m = FpMatrix::zeros(f, k, k);
            for (j, v) in basis.basis().iter().enumerate() {
                let image = a.mul_vec(v)?;
                let coords = basis.coordinates(&image).ok_or_else(|| {
                    Error::InvalidGroup("subspace is not invariant under the action".into())
                })?;
                for (i, c) in coords.into_iter().enumerate() {
                    m.set(i, j, c);
                }
            }
            actions.push(m);
        }
        Ok(Self::new_unchecked(self.group.clone(), k, actions))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;

    #[test]
    fn trivial_and_regular() {
        let z2 = Arc::new(named::cyclic(2, 2).unwrap());
        let t = KGModule::trivial(z2.clone());
        assert_eq!(t.dim(), 1);
        assert_eq!(t.radical().rank(), 0);
        assert!(!t.is_free());
        let r = KGModule::regular(z2);
        assert_eq!(r.dim(), 2);
        assert_eq!(r.radical().rank(), 1);
        assert!(r.is_free());
    }

    #[test]
    fn regular_d8_is_permutation_action() {
        let d8 = Arc::new(named::dihedral8().unwrap());
        let r = KGModule::regular(d8.clone());
        assert_eq!(r.dim(), 8);
        for a in r.actions() {
            for j in 0..8 {
                assert_eq!(a.column(j).iter().filter(|&&x| x == 1).count(), 1);
            }
        }
        assert!(KGModule::new(d8, r.actions().to_vec()).is_ok());
    }

    #[test]
    fn free_module_radical() {
        let d8 = Arc::new(named::dihedral8().unwrap());
        let m = KGModule::free(d8, 3);
        assert_eq!(m.radical().rank(), 3 * 7);
    }

    #[test]
    fn tensor_with_trivial_and_regular() {
        let k = Arc::new(named::klein().unwrap());
        let r = KGModule::regular(k.clone());
        let t = KGModule::trivial(k.clone());
        let rt = t.tensor(&r).unwrap();
        assert_eq!(rt.dim(), r.dim());
        assert_eq!(rt.actions(), r.actions());
        let m = KGModule::free(k.clone(), 1).tensor(&KGModule::trivial(k)).unwrap();
        assert!(m.is_free());
    }

    #[test]
    fn rejects_bad_action() {
        let z2 = Arc::new(named::cyclic(2, 2).unwrap());
        let f = PrimeField::new(2).unwrap();
        // [[1,1],[0,1]] squares to the identity over F_2; [[0,1],[1,1]] has order 3.
        let ok = FpMatrix::from_rows(f, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(KGModule::new(z2.clone(), vec![ok]).is_ok());
        let bad = FpMatrix::from_rows(f, &[vec![0, 1], vec![1, 1]]).unwrap();
        assert!(KGModule::new(z2, vec![bad]).is_err());
    }
}
