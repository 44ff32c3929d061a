use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::geometry::ConstraintSystem;
use crate::{Error, Result};

/// Smallest accepted ratio of extreme singular values of the Jacobian.
pub const RANK_TOLERANCE: f64 = 1e-9;

/// Jacobian of the equalities at a point together with a factorisation of
/// its Gram matrix `J Jᵀ`, used for tangent projection and Newton solves.
#[derive(Debug, Clone)]
pub struct LocalFrame {
    y: DVector<f64>,
    // Gradients as columns (`Jᵀ`).
    jt: DMatrix<f64>,
    chol: Option<Cholesky<f64, Dyn>>,
}

impl LocalFrame {
    pub fn new(cs: &ConstraintSystem, y: &DVector<f64>) -> Result<Self> {
        let jt = cs.jacobian_transpose(y);
        let chol = if jt.ncols() == 0 {
            None
        } else {
            let gram = cs.jacobian_times(y, &jt);
            let c = Cholesky::new(gram).ok_or(Error::RankDeficient(0.0))?;
            let diag = c.l_dirty().diagonal();
            let (lo, hi) = (diag.min(), diag.max());
            let ratio = lo / hi;
            if !(ratio * ratio > RANK_TOLERANCE * RANK_TOLERANCE) {
                return Err(Error::RankDeficient(ratio));
            }
            Some(c)
        };
        Ok(Self { y: y.clone(), jt, chol })
    }

    pub fn point(&self) -> &DVector<f64> {
        &self.y
    }

    /// `Jᵀ` at the frame's point.
    pub fn jacobian_transpose(&self) -> &DMatrix<f64> {
        &self.jt
    }

    /// Orthogonal projection onto the tangent space, `v − Jᵀ (J Jᵀ)⁻¹ J v`.
    pub fn project_tangent(&self, v: &DVector<f64>) -> DVector<f64> {
        match &self.chol {
            None => v.clone(),
            Some(c) => v - &self.jt * c.solve(&self.jt.tr_mul(v)),
        }
    }

    /// Newton correction along the normal space at this frame's point:
    /// finds `w = Jᵀ a` with `max|q(z + w)| ≤ tol_q`, starting from `a = 0`,
    /// and returns `z + w`.
    pub fn project(&self, cs: &ConstraintSystem, z: &DVector<f64>, tol_q: f64, max_iters: usize) -> Result<DVector<f64>> {
        if self.jt.ncols() == 0 {
            return Ok(z.clone());
        }
        let mut p = z.clone();
        let mut residual = f64::INFINITY;
        for iter in 0..=max_iters {
            let r = cs.equality_values(&p);
            residual = r.amax();
            if !residual.is_finite() {
                break;
            }
            if residual <= tol_q {
                return Ok(p);
            }
            if iter == max_iters {
                break;
            }
            let lhs = cs.jacobian_times(&p, &self.jt);
            let Some(da) = lhs.lu().solve(&(-r)) else {
                break;
            };
            p += &self.jt * da;
        }
        Err(Error::NewtonDiverged(residual))
    }
}

/// Ratio of the smallest to largest singular value of the equality Jacobian;
/// fails with [`Error::RankDeficient`] below [`RANK_TOLERANCE`].
pub fn check_rank(cs: &ConstraintSystem, y: &DVector<f64>) -> Result<f64> {
    let j = cs.jacobian(y);
    if j.nrows() == 0 {
        return Ok(1.0);
    }
    if j.nrows() > j.ncols() {
        return Err(Error::RankDeficient(0.0));
    }
    let sv = j.svd(false, false).singular_values;
    let ratio = sv.min() / sv.max();
    if ratio > RANK_TOLERANCE {
        Ok(ratio)
    } else {
        Err(Error::RankDeficient(ratio))
    }
}

/// Orthonormal basis (as columns) of the kernel of the equality Jacobian.
pub fn tangent_basis(cs: &ConstraintSystem, y: &DVector<f64>) -> Result<DMatrix<f64>> {
    check_rank(cs, y)?;
    let d = cs.dim();
    let frame = LocalFrame::new(cs, y)?;
    let mut proj = DMatrix::zeros(d, d);
    for k in 0..d {
        let e = DVector::from_fn(d, |i, _| (i == k) as u8 as f64);
        proj.set_column(k, &frame.project_tangent(&e));
    }
    let proj = (&proj + proj.transpose()) * 0.5;
    let eig = SymmetricEigen::new(proj);
    let cols: Vec<DVector<f64>> = (0..d)
        .filter(|&k| eig.eigenvalues[k] > 0.5)
        .map(|k| eig.eigenvectors.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        return Ok(DMatrix::zeros(d, 0));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Newton correction of `z` using the gradients at the feasible base point.
pub fn project_to_manifold(
    cs: &ConstraintSystem,
    y_base: &DVector<f64>,
    z: &DVector<f64>,
    tol_q: f64,
    max_iters: usize,
) -> Result<DVector<f64>> {
    let p = LocalFrame::new(cs, y_base)?.project(cs, z, tol_q, max_iters)?;
    Ok(p - z)
}

/// Gauss-Newton descent of an arbitrary point onto the equalities, with the
/// Jacobian refreshed every iteration (minimum-norm updates).
pub fn newton_polish(cs: &ConstraintSystem, y: &DVector<f64>, tol: f64, max_iters: usize) -> Result<DVector<f64>> {
    let mut p = y.clone();
    let mut residual = f64::INFINITY;
    if cs.num_equalities() == 0 {
        return Ok(p);
    }
    for _ in 0..=max_iters {
        let r = cs.equality_values(&p);
        residual = r.amax();
        if residual <= tol {
            return Ok(p);
        }
        if !residual.is_finite() {
            break;
        }
        let jt = cs.jacobian_transpose(&p);
        let Some(step) = cs.jacobian_times(&p, &jt).cholesky().map(|c| c.solve(&r)) else {
            break;
        };
        p -= &jt * step;
    }
    Err(Error::NewtonDiverged(residual))
}
