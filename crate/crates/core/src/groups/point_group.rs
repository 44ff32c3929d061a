use super::{procrustes_fit, PIGroup, PIOperation, Permutation, Provenance};
use crate::geometry::{distance_matrix, permute_positions, Cluster};
use crate::Result;

/// Default tolerance on squared distances and on the Procrustes residual.
pub const DEFAULT_EPS_D: f64 = 1e-6;

/// PI operations realised by a rigid rotation of the (centered) cluster.
///
/// An automorphism `P` qualifies when `‖P D Pᵀ − D‖_max ≤ eps_d`; its signs
/// δ are those for which the best rotation of `x` onto `δ (P ⊗ I₃) x` leaves
/// a residual of at most `eps_d`.
pub fn point_group(cluster: &Cluster, auts: &[Permutation], eps_d: f64) -> Result<PIGroup> {
    let x = cluster.positions();
    let d = distance_matrix(cluster);
    let mut found = Vec::new();
    for p in auts {
        if d.permuted(p).max_abs_diff(&d) > eps_d {
            continue;
        }
        for inverted in [false, true] {
            let op = PIOperation::new(p.clone(), inverted);
            if procrustes_fit(x, &permute_positions(x, &op)).residual <= eps_d {
                found.push((op, Provenance::Rotation));
            }
        }
    }
    PIGroup::from_elements(cluster.len(), found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{detect_contacts, octahedron, Vec3};
    use crate::groups::automorphism_group;

    fn auts(c: &Cluster) -> Vec<Permutation> {
        automorphism_group(&detect_contacts(c, 1e-8).unwrap(), 24).unwrap()
    }

    #[test]
    fn octahedron_has_order_48() {
        let c = octahedron();
        let g = point_group(&c, &auts(&c), DEFAULT_EPS_D).unwrap();
        assert_eq!(g.order(), 48);
        assert!(g.check_axioms());
    }

    #[test]
    fn dimer_realises_all_four_elements() {
        let c = Cluster::identical(vec![Vec3::new(-0.5, 0.0, 0.0), Vec3::new(0.5, 0.0, 0.0)]).unwrap();
        let g = point_group(&c, &auts(&c), DEFAULT_EPS_D).unwrap();
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn symmetric_mode_fourteen_embedding() {
        // Rectangle of four spheres (short sides 0-1 and 2-3 in contact)
        // with two apices touching all four.
        let (a, b) = (0.5f64, 0.6f64);
        let h = (1.0 - a * a - b * b).sqrt();
        let c = Cluster::identical(vec![
            Vec3::new(a, b, 0.0),
            Vec3::new(a, -b, 0.0),
            Vec3::new(-a, -b, 0.0),
            Vec3::new(-a, b, 0.0),
            Vec3::new(0.0, 0.0, h),
            Vec3::new(0.0, 0.0, -h),
        ])
        .unwrap();
        let adj = detect_contacts(&c, 1e-8).unwrap();
        assert_eq!(adj.num_contacts(), 10);
        let g = point_group(&c, &auts(&c), DEFAULT_EPS_D).unwrap();
        assert_eq!(g.order(), 8);
    }
}
