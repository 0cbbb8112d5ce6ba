use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, RowSpace};

use super::cocycle::Cocycle;
use super::module::KGModule;
use super::resolution::MinimalResolution;

/// `Ω^n k = ker d_{n-1} ⊆ P_{n-1}`, as a subspace of the ambient free module.
pub fn omega_subspace(res: &MinimalResolution, n: usize) -> Result<RowSpace> {
    res.require(n)?;
    let f = res.field();
    if n == 0 {
        let mut s = RowSpace::new(f, 1);
        s.insert(&[1]);
        return Ok(s);
    }
    let kernel = res.matrix(n - 1).kernel_basis();
    let mut s = RowSpace::new(f, kernel.cols());
    for v in kernel.to_rows() {
        s.insert(&v);
    }
    Ok(s)
}

pub fn omega(res: &MinimalResolution, n: usize) -> Result<KGModule> {
    if n == 0 {
        return Ok(KGModule::trivial(res.group().clone()));
    }
    let sub = omega_subspace(res, n)?;
    KGModule::free(res.group().clone(), res.rank(n - 1)).submodule(&sub)
}

/// The kernel `L_ζ` of the surjection `Ω^n k -> k` represented by `ζ`.
pub fn l_module(res: &MinimalResolution, z: &Cocycle) -> Result<KGModule> {
    if z.is_zero() {
        return Err(Error::ZeroCocycle);
    }
    let n = z.degree;
    res.require(n)?;
    let f = res.field();
    if n == 0 {
        // ζ is a nonzero scalar on k, so its kernel is zero.
        return KGModule::trivial(res.group().clone()).submodule(&RowSpace::new(f, 1));
    }
    let omega_sub = omega_subspace(res, n)?;
    let solver = res.solver(n);
    let values: Vec<u32> = omega_sub
        .basis()
        .iter()
        .map(|v| {
            let u = solver
                .solve(v)
                .expect("dimensions agree")
                .expect("Ω^n k is the image of d_n");
            z.evaluate(res, &u)
        })
        .collect();
    // Kernel of the functional on Ω, written back in ambient coordinates.
    let functional = FpMatrix::from_vecs(f, values.len(), vec![values]);
    let mut kernel = RowSpace::new(f, omega_sub.ambient_dim());
    for coeffs in functional.kernel_basis().to_rows() {
        let mut v = vec![0; omega_sub.ambient_dim()];
        for (c, b) in coeffs.iter().zip(omega_sub.basis()) {
            if *c != 0 {
                f.axpy(&mut v, *c, b);
            }
        }
        kernel.insert(&v);
    }
    KGModule::free(res.group().clone(), res.rank(n - 1)).submodule(&kernel)
}
