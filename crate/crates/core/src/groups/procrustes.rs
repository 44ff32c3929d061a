use nalgebra::{Matrix3, Matrix4, Quaternion, UnitQuaternion};

use crate::geometry::Vec3;

/// Best proper rotation of one point set onto another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcrustesFit {
    pub rotation: Matrix3<f64>,
    /// Root-mean-square misfit `sqrt(Σ|Y_i − R X_i|² / N)`.
    pub residual: f64,
}

/// Minimises `Σ_i |Y_i − R X_i|²` over `R ∈ SO(3)`.
///
/// Both sets must already be centered. The optimal rotation is the unit
/// quaternion spanning the top eigenvector of Horn's symmetric 4×4 matrix
/// built from `S = Σ X_i Y_iᵀ`. Unlike the SVD route with a determinant
/// correction this stays well conditioned for planar and nearly collinear
/// sets.
pub fn procrustes_fit(x: &[Vec3], y: &[Vec3]) -> ProcrustesFit {
    assert_eq!(x.len(), y.len(), "point sets differ in size");
    let s: Matrix3<f64> = x.iter().zip(y).map(|(a, b)| a * b.transpose()).sum();
    let (sxx, sxy, sxz) = (s[(0, 0)], s[(0, 1)], s[(0, 2)]);
    let (syx, syy, syz) = (s[(1, 0)], s[(1, 1)], s[(1, 2)]);
    let (szx, szy, szz) = (s[(2, 0)], s[(2, 1)], s[(2, 2)]);
    #[rustfmt::skip]
    let n = Matrix4::new(
        sxx + syy + szz, syz - szy,        szx - sxz,        sxy - syx,
        syz - szy,       sxx - syy - szz,  sxy + syx,        szx + sxz,
        szx - sxz,       sxy + syx,        -sxx + syy - szz, syz + szy,
        sxy - syx,       szx + sxz,        syz + szy,        -sxx - syy + szz,
    );
    let eig = n.symmetric_eigen();
    let top = eig.eigenvalues.imax();
    let q = eig.eigenvectors.column(top);
    let rotation = UnitQuaternion::from_quaternion(Quaternion::new(q[0], q[1], q[2], q[3]))
        .to_rotation_matrix()
        .into_inner();
    let sq: f64 = x.iter().zip(y).map(|(a, b)| (b - rotation * a).norm_squared()).sum();
    ProcrustesFit {
        rotation,
        residual: (sq / x.len().max(1) as f64).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytetrahedron;
    use approx::assert_relative_eq;
    use nalgebra::{Rotation3, Unit, Vector3};
    use proptest::prelude::*;

    #[test]
    fn identity_fit() {
        let x = polytetrahedron().unwrap().positions().to_vec();
        let fit = procrustes_fit(&x, &x);
        assert_relative_eq!(fit.rotation, Matrix3::identity(), epsilon = 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn chiral_cluster_cannot_be_rotated_onto_its_inversion() {
        let x = polytetrahedron().unwrap().positions().to_vec();
        let y: Vec<Vec3> = x.iter().map(|p| -p).collect();
        let fit = procrustes_fit(&x, &y);
        assert!(fit.residual > 0.1, "residual {}", fit.residual);
        assert_relative_eq!(fit.rotation.determinant(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn planar_set_inversion_is_a_rotation() {
        let x = vec![Vec3::new(1.0, 0.0, 0.0), Vec3::new(-0.5, 0.8, 0.0), Vec3::new(-0.5, -0.8, 0.0)];
        let y: Vec<Vec3> = x.iter().map(|p| -p).collect();
        assert!(procrustes_fit(&x, &y).residual < 1e-12);
    }

    #[test]
    fn nearly_collinear_identity_has_no_residual() {
        // Bends of 1e-3 leave the third singular value of S near 1e-10,
        // where a determinant-corrected SVD flips the wrong axis.
        let c = crate::geometry::canonical_chain(5).unwrap().centered();
        let fit = procrustes_fit(c.positions(), c.positions());
        assert!(fit.residual < 1e-9, "{}", fit.residual);
    }

    proptest! {
        #[test]
        fn recovers_known_rotations(
            axis in prop::array::uniform3(-1.0f64..1.0),
            angle in -3.1f64..3.1,
            pts in prop::collection::vec(prop::array::uniform3(-2.0f64..2.0), 4..10),
        ) {
            prop_assume!(Vector3::from(axis).norm() > 1e-3);
            let r0 = Rotation3::from_axis_angle(&Unit::new_normalize(Vector3::from(axis)), angle);
            let mut x: Vec<Vec3> = pts.iter().map(|p| Vec3::from(*p)).collect();
            let com = x.iter().sum::<Vec3>() / x.len() as f64;
            x.iter_mut().for_each(|p| *p -= com);
            let y: Vec<Vec3> = x.iter().map(|p| r0 * p).collect();
            let fit = procrustes_fit(&x, &y);
            prop_assert!(fit.residual < 1e-9);
            for (a, b) in x.iter().zip(&y) {
                prop_assert!((fit.rotation * a - b).norm() < 1e-8);
            }
        }
    }
}
