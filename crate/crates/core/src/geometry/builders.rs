use std::f64::consts::PI;

use rand::Rng;

use super::{build_constraint_system, Cluster, Vec3};
use crate::manifold::newton_polish;
use crate::rng::rng_from_seed;
use crate::{AdjacencyMatrix, Error, Result};

const PERTURBATION: f64 = 1e-3;
const BUILDER_SEED: u64 = 0x5eed_0fc1_u64;

/// Regular N-gon of side 1, nudged out of plane and projected back onto the
/// loop manifold.
pub fn canonical_loop(n: usize) -> Result<Cluster> {
    if n < 3 {
        return Err(Error::ConstructionFailed(format!("a loop needs at least 3 spheres, got {n}")));
    }
    let radius = 1.0 / (2.0 * (PI / n as f64).sin());
    let mut rng = rng_from_seed(BUILDER_SEED ^ n as u64);
    let positions: Vec<Vec3> = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            let noise = Vec3::from_fn(|_, _| rng.random_range(-PERTURBATION..PERTURBATION));
            Vec3::new(radius * t.cos(), radius * t.sin(), 0.0) + noise
        })
        .collect();
    let edges: Vec<(usize, usize)> = (0..n).map(|k| (k, (k + 1) % n)).collect();
    let a = AdjacencyMatrix::from_edges(n, &edges)?;
    let cs = build_constraint_system(&a, &vec![0.5; n], true);
    let flat: Vec<f64> = positions
        .iter()
        .map(|p| p - positions.iter().sum::<Vec3>() / n as f64)
        .flat_map(|p| [p.x, p.y, p.z])
        .collect();
    let y = newton_polish(&cs, &flat.into(), 1e-13, 50)
        .map_err(|e| Error::ConstructionFailed(format!("loop projection: {e}")))?;
    if !cs.inequalities_hold(&y) {
        return Err(Error::ConstructionFailed("projected loop overlaps".into()));
    }
    Cluster::from_flat(y.as_slice(), vec![0.5; n])
}

/// Unit-spaced, nearly collinear chain with small deterministic bends.
pub fn canonical_chain(n: usize) -> Result<Cluster> {
    if n < 2 {
        return Err(Error::ConstructionFailed(format!("a chain needs at least 2 spheres, got {n}")));
    }
    let mut rng = rng_from_seed(BUILDER_SEED ^ (n as u64) << 32);
    let mut positions = vec![Vec3::zeros()];
    for _ in 1..n {
        let dir = Vec3::new(
            1.0,
            rng.random_range(-PERTURBATION..PERTURBATION),
            rng.random_range(-PERTURBATION..PERTURBATION),
        )
        .normalize();
        positions.push(positions.last().unwrap() + dir);
    }
    Ok(Cluster::identical(positions)?.centered())
}

pub fn octahedron() -> Cluster {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let positions = vec![
        Vec3::new(s, 0.0, 0.0),
        Vec3::new(0.0, s, 0.0),
        Vec3::new(-s, 0.0, 0.0),
        Vec3::new(0.0, -s, 0.0),
        Vec3::new(0.0, 0.0, s),
        Vec3::new(0.0, 0.0, -s),
    ];
    Cluster::identical(positions).expect("octahedron is a valid cluster")
}

/// Three face-sharing unit tetrahedra {0,1,2,3}, {1,2,3,4}, {2,3,4,5}.
pub fn polytetrahedron() -> Result<Cluster> {
    let mut x = vec![
        Vec3::zeros(),
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.5, 3f64.sqrt() / 2.0, 0.0),
    ];
    for (base, avoid) in [([0, 1, 2], None), ([1, 2, 3], Some(0)), ([2, 3, 4], Some(1))] {
        let [p, q] = trilaterate(x[base[0]], x[base[1]], x[base[2]])?;
        let next = match avoid {
            // The first apex may sit on either side.
            None => p,
            Some(k) => {
                if (p - x[k]).norm() > (q - x[k]).norm() {
                    p
                } else {
                    q
                }
            }
        };
        x.push(next);
    }
    Ok(Cluster::identical(x)?.centered())
}

/// The two points at unit distance from each of three mutually touching
/// centers.
fn trilaterate(a: Vec3, b: Vec3, c: Vec3) -> Result<[Vec3; 2]> {
    let ex = (b - a).normalize();
    let i = ex.dot(&(c - a));
    let ey_raw = c - a - ex * i;
    if ey_raw.norm() < 1e-12 {
        return Err(Error::ConstructionFailed("collinear base triangle".into()));
    }
    let ey = ey_raw.normalize();
    let ez = ex.cross(&ey);
    let d = (b - a).norm();
    let j = ey.dot(&(c - a));
    let px = d / 2.0;
    let py = (i * i + j * j) / (2.0 * j) - i / j * px;
    let h2 = 1.0 - px * px - py * py;
    if h2 <= 0.0 {
        return Err(Error::ConstructionFailed("no tetrahedral apex exists".into()));
    }
    let base = a + ex * px + ey * py;
    let h = h2.sqrt();
    Ok([base + ez * h, base - ez * h])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::detect_contacts;

    #[test]
    fn contact_counts() {
        assert_eq!(detect_contacts(&octahedron(), 1e-8).unwrap().num_contacts(), 12);
        assert_eq!(detect_contacts(&polytetrahedron().unwrap(), 1e-8).unwrap().num_contacts(), 12);
        for n in 3..=20 {
            let c = canonical_loop(n).unwrap();
            let a = detect_contacts(&c, 1e-8).unwrap();
            assert_eq!(a.num_contacts(), n, "loop {n}");
            assert!((0..n).all(|k| a.get(k, (k + 1) % n)));
            assert!(c.center_of_mass().norm() < 1e-12);
        }
        for n in 2..=20 {
            let a = detect_contacts(&canonical_chain(n).unwrap(), 1e-8).unwrap();
            assert_eq!(a.num_contacts(), n - 1, "chain {n}");
        }
        assert!(canonical_loop(2).is_err());
        assert!(canonical_chain(1).is_err());
    }

    #[test]
    fn loop_is_perturbed_out_of_plane() {
        let c = canonical_loop(8).unwrap();
        let z_spread = c.positions().iter().map(|p| p.z.abs()).fold(0.0, f64::max);
        assert!(z_spread > 1e-5 && z_spread < 1e-2);
    }
}
