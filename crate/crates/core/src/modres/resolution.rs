use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::group::PGroup;
use crate::linalg::{FpMatrix, PrimeField, RowSpace, Solver};

/// Limits applied while extending a resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResolutionCaps {
    pub max_degree: usize,
    /// Largest allowed `b_n · |G|`.
    pub max_dim: usize,
}

impl Default for ResolutionCaps {
    fn default() -> Self {
        Self {
            max_degree: 64,
            max_dim: 8192,
        }
    }
}

/// One stage `d_n : P_n -> P_{n-1}` of the resolution.
#[derive(Debug)]
struct Stage {
    rank: usize,
    /// `d_n(e_j)` for each generator `e_j` of `P_n`, as vectors in `P_{n-1}`.
    images: Vec<Vec<u32>>,
    /// The F_p-linear matrix of `d_n`; for `n = 0` the augmentation `P_0 -> k`.
    matrix: FpMatrix,
    solver: OnceLock<Solver>,
}

/// Minimal projective resolution `... -> P_1 -> P_0 -> k` over `F_p G`.
///
/// Free modules are plain F_p-spaces: `(F_p G)^b` has basis `(i, h)` at index
/// `i |G| + h` with `g` acting by `(i, h) -> (i, gh)`.
#[derive(Clone, Debug)]
pub struct MinimalResolution {
    group: Arc<PGroup>,
    field: PrimeField,
    stages: Vec<Arc<Stage>>,
    caps: ResolutionCaps,
}

impl MinimalResolution {
    /// The resolution through degree 0: `P_0 = F_p G` with the augmentation.
    pub fn new(group: Arc<PGroup>, caps: ResolutionCaps) -> Result<Self> {
        let field = PrimeField::new(group.p())?;
        let n = group.order();
        let augmentation = FpMatrix::from_vecs(field, n, vec![vec![1; n]]);
        let stage = Stage {
            rank: 1,
            images: vec![vec![1]],
            matrix: augmentation,
            solver: OnceLock::new(),
        };
        Ok(Self {
            group,
            field,
            stages: vec![Arc::new(stage)],
            caps,
        })
    }

    /// Resolution computed through `degree`.
    pub fn through(group: Arc<PGroup>, degree: usize, caps: ResolutionCaps) -> Result<Self> {
        let mut res = Self::new(group, caps)?;
        res.extend_to(degree)?;
        Ok(res)
    }

    pub fn group(&self) -> &Arc<PGroup> {
        &self.group
    }
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn caps(&self) -> ResolutionCaps {
        self.caps
    }

    /// Highest degree computed.
    pub fn top_degree(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.stages[n].rank
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.rank).collect()
    }

    /// `d_n(e_j)` for each generator of `P_n` (`n ≥ 1`).
    pub fn images(&self, n: usize) -> &[Vec<u32>] {
        &self.stages[n].images
    }

    pub fn matrix(&self, n: usize) -> &FpMatrix {
        &self.stages[n].matrix
    }

    pub(crate) fn solver(&self, n: usize) -> &Solver {
        let stage = &self.stages[n];
        stage.solver.get_or_init(|| Solver::new(&stage.matrix))
    }

    pub fn require(&self, n: usize) -> Result<()> {
        if n > self.top_degree() {
            return Err(Error::ResolutionTooShort {
                have: self.top_degree(),
                need: n,
            });
        }
        Ok(())
    }

    /// A copy extended through `to_degree`; earlier stages are shared.
    pub fn extended(&self, to_degree: usize) -> Result<Self> {
        let mut next = self.clone();
        next.extend_to(to_degree)?;
        Ok(next)
    }

    pub fn extend_to(&mut self, to_degree: usize) -> Result<()> {
        if to_degree > self.caps.max_degree {
            return Err(Error::DegreeCap {
                cap: self.caps.max_degree,
            });
        }
        while self.top_degree() < to_degree {
            self.step()?;
        }
        Ok(())
    }

    fn step(&mut self) -> Result<()> {
        let f = self.field;
        let n = self.top_degree() + 1;
        let order = self.group.order();
        let prev = &self.stages[n - 1];
        let src_dim = prev.rank * order;

        let kernel = prev.matrix.kernel_basis();
        let mut radical = RowSpace::new(f, src_dim);
        for v in kernel.to_rows() {
            for &s in self.group.generators() {
                let mut w = act(&self.group, s, prev.rank, &v);
                f.axpy(&mut w, f.neg(1), &v);
                radical.insert(&w);
            }
        }
        let mut span = radical.clone();
        let mut images = Vec::new();
        for v in kernel.to_rows() {
            if span.insert(&v) {
                images.push(v);
            }
        }
        let rank = images.len();
        debug_assert_eq!(rank, kernel.rows() - radical.rank());
        if rank * order > self.caps.max_dim {
            return Err(Error::DimCap {
                cap: self.caps.max_dim,
            });
        }

        let mut columns = Vec::with_capacity(rank * order);
        for img in &images {
            for g in 0..order {
                columns.push(act(&self.group, g, prev.rank, img));
            }
        }
        let matrix = FpMatrix::from_columns(f, src_dim, &columns);
        self.stages.push(Arc::new(Stage {
            rank,
            images,
            matrix,
            solver: OnceLock::new(),
        }));
        Ok(())
    }

    /// Apply the kG-map `P_src -> P_tgt` determined by generator images to `v ∈ P_src`.
    pub(crate) fn apply_map(&self, images: &[Vec<u32>], tgt_rank: usize, v: &[u32]) -> Vec<u32> {
        apply_map(&self.group, self.field, images, tgt_rank, v)
    }
}

/// Left multiplication by the group element `g` on `(F_p G)^rank`.
pub(crate) fn act(group: &PGroup, g: usize, rank: usize, v: &[u32]) -> Vec<u32> {
    let n = group.order();
    let mut out = vec![0u32; rank * n];
    for i in 0..rank {
        for h in 0..n {
            out[i * n + group.mul(g, h)] = v[i * n + h];
        }
    }
    out
}

/// Apply the kG-linear map sending generator `k` to `images[k]`.
pub(crate) fn apply_map(
    group: &PGroup,
    field: PrimeField,
    images: &[Vec<u32>],
    tgt_rank: usize,
    v: &[u32],
) -> Vec<u32> {
    let n = group.order();
    let mut out = vec![0u32; tgt_rank * n];
    for (k, img) in images.iter().enumerate() {
        for h in 0..n {
            let c = v[k * n + h];
            if c == 0 {
                continue;
            }
            for i in 0..tgt_rank {
                for g in 0..n {
                    let y = img[i * n + g];
                    if y != 0 {
                        let slot = &mut out[i * n + group.mul(h, g)];
                        *slot = field.add(*slot, field.mul(c, y));
                    }
                }
            }
        }
    }
    out
}

/// Sum of the coefficients in each free summand: the values of the dual
/// basis cocycles on `v ∈ (F_p G)^rank`.
pub(crate) fn augment_components(field: PrimeField, order: usize, rank: usize, v: &[u32]) -> Vec<u32> {
    (0..rank)
        .map(|i| {
            let s: u64 = v[i * order..(i + 1) * order].iter().map(|&x| x as u64).sum();
            (s % field.p() as u64) as u32
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;

    fn ranks(g: PGroup, n: usize) -> Vec<usize> {
        MinimalResolution::through(Arc::new(g), n, ResolutionCaps::default())
            .unwrap()
            .ranks()
    }

    #[test]
    fn cyclic_ranks() {
        assert_eq!(ranks(named::cyclic(2, 2).unwrap(), 20), vec![1; 21]);
        assert_eq!(ranks(named::cyclic(2, 4).unwrap(), 10), vec![1; 11]);
        assert_eq!(ranks(named::cyclic(3, 3).unwrap(), 8), vec![1; 9]);
    }

    #[test]
    fn klein_ranks() {
        let expected: Vec<usize> = (1..=11).collect();
        assert_eq!(ranks(named::klein().unwrap(), 10), expected);
    }

    #[test]
    fn d_squared_is_zero_and_exact() {
        let res = MinimalResolution::through(Arc::new(named::dihedral8().unwrap()), 6, ResolutionCaps::default()).unwrap();
        for n in 1..=6 {
            let dd = res.matrix(n - 1).mul(res.matrix(n)).unwrap();
            assert!(dd.is_zero(), "d∘d ≠ 0 at {n}");
            let kernel = res.matrix(n - 1).cols() - res.matrix(n - 1).rank();
            assert_eq!(kernel, res.matrix(n).rank(), "exactness at {n}");
        }
    }

    #[test]
    fn images_lie_in_radical() {
        let g = Arc::new(named::quaternion8().unwrap());
        let res = MinimalResolution::through(g.clone(), 5, ResolutionCaps::default()).unwrap();
        for n in 1..=5 {
            let f = res.field();
            for img in res.images(n) {
                // Minimality: every image has augmentation zero in each summand.
                assert!(augment_components(f, g.order(), res.rank(n - 1), img).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        let g = Arc::new(named::klein().unwrap());
        let caps = ResolutionCaps {
            max_degree: 3,
            max_dim: 10_000,
        };
        let mut res = MinimalResolution::new(g.clone(), caps).unwrap();
        assert!(matches!(res.extend_to(4), Err(Error::DegreeCap { cap: 3 })));
        let caps = ResolutionCaps {
            max_degree: 10,
            max_dim: 8,
        };
        let mut res = MinimalResolution::new(g, caps).unwrap();
        assert!(matches!(res.extend_to(3), Err(Error::DimCap { .. })));
    }
}
