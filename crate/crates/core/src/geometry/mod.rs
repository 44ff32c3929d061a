//! Clusters, contact graphs, distance matrices and constraint systems.

mod builders;
mod constraints;

pub use builders::{canonical_chain, canonical_loop, octahedron, polytetrahedron};
pub use constraints::{
    build_constraint_system, ConstraintSystem, CustomFn, Equality, Inequality,
};

use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::groups::PIOperation;
use crate::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Default contact tolerance, in sphere-diameter units.
pub const DEFAULT_EPS_CONTACT: f64 = 1e-8;

/// Sphere centers plus radii.
///
/// Lengths are measured in units of the (unit) sphere diameter, so two
/// identical spheres of radius 0.5 touch at center distance 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    positions: Vec<Vec3>,
    radii: Vec<f64>,
}

impl Cluster {
    /// Validates radii and rejects overlapping spheres (beyond
    /// [`DEFAULT_EPS_CONTACT`]).
    pub fn new(positions: Vec<Vec3>, radii: Vec<f64>) -> Result<Self> {
        let c = Self::new_unchecked_overlap(positions, radii)?;
        c.check_overlap(DEFAULT_EPS_CONTACT)?;
        Ok(c)
    }

    /// Identical unit-diameter spheres.
    pub fn identical(positions: Vec<Vec3>) -> Result<Self> {
        let n = positions.len();
        Self::new(positions, vec![0.5; n])
    }

    fn new_unchecked_overlap(positions: Vec<Vec3>, radii: Vec<f64>) -> Result<Self> {
        if positions.len() != radii.len() {
            return Err(Error::DimensionMismatch {
                expected: positions.len(),
                found: radii.len(),
            });
        }
        if positions.is_empty() {
            return Err(Error::InvalidCluster("a cluster needs at least one sphere".into()));
        }
        if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidCluster(format!("radius {r} is not positive")));
        }
        if positions.iter().any(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidCluster("non-finite coordinate".into()));
        }
        Ok(Self { positions, radii })
    }

    /// Rebuilds a cluster from a flat `3N` coordinate vector.
    pub fn from_flat(flat: &[f64], radii: Vec<f64>) -> Result<Self> {
        if flat.len() != 3 * radii.len() {
            return Err(Error::DimensionMismatch {
                expected: 3 * radii.len(),
                found: flat.len(),
            });
        }
        let positions = flat.chunks(3).map(|c| Vec3::new(c[0], c[1], c[2])).collect();
        Self::new(positions, radii)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn to_flat(&self) -> DVector<f64> {
        DVector::from_iterator(
            3 * self.len(),
            self.positions.iter().flat_map(|p| p.iter().copied()),
        )
    }

    pub fn center_of_mass(&self) -> Vec3 {
        self.positions.iter().sum::<Vec3>() / self.len() as f64
    }

    /// Translated copy with the center of mass at the origin.
    pub fn centered(&self) -> Self {
        let com = self.center_of_mass();
        Self {
            positions: self.positions.iter().map(|p| p - com).collect(),
            radii: self.radii.clone(),
        }
    }

    pub fn with_radii(&self, radii: Vec<f64>) -> Result<Self> {
        Self::new(self.positions.clone(), radii)
    }

    pub fn has_identical_radii(&self) -> bool {
        self.radii.iter().all(|&r| r == self.radii[0])
    }

    /// Groups spheres with equal radii.
    pub fn radii_partition(&self) -> Partition {
        let mut distinct: Vec<f64> = Vec::new();
        let labels = self
            .radii
            .iter()
            .map(|&r| match distinct.iter().position(|&d| d == r) {
                Some(k) => k,
                None => {
                    distinct.push(r);
                    distinct.len() - 1
                }
            })
            .collect();
        Partition::from_labels(labels)
    }

    pub fn check_overlap(&self, eps_contact: f64) -> Result<()> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let dist = (self.positions[i] - self.positions[j]).norm();
                if dist < self.radii[i] + self.radii[j] - eps_contact {
                    return Err(Error::Overlap(i, j));
                }
            }
        }
        Ok(())
    }
}

/// Symmetric 0/1 contact matrix with zero diagonal, stored as row bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdjacencyMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl AdjacencyMatrix {
    pub const MAX_VERTICES: usize = 64;

    pub fn empty(n: usize) -> Self {
        assert!(n <= Self::MAX_VERTICES, "at most 64 spheres are supported");
        Self { n, rows: vec![0; n] }
    }

    /// Builds the matrix from 0-based contact pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut a = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidCluster(format!("bad contact pair ({i}, {j})")));
            }
            a.set(i, j, true);
        }
        Ok(a)
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut a = Self::empty(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 if i != j => a.rows[i] |= 1 << j,
                    _ => {
                        return Err(Error::InvalidCluster(format!(
                            "adjacency entry ({i}, {j}) = {v} is invalid"
                        )))
                    }
                }
            }
        }
        if (0..n).any(|i| (0..n).any(|j| a.get(i, j) != a.get(j, i))) {
            return Err(Error::InvalidCluster("adjacency matrix is not symmetric".into()));
        }
        Ok(a)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i] |= 1 << j;
            self.rows[j] |= 1 << i;
        } else {
            self.rows[i] &= !(1 << j);
            self.rows[j] &= !(1 << i);
        }
    }

    #[inline]
    pub fn row_mask(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.rows[i].count_ones() as usize
    }

    /// Number of contacts m.
    pub fn num_contacts(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Contact pairs `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `P A Pᵀ`: the contact matrix after relabelling sphere `i` as `p(i)`.
    pub fn permuted(&self, p: &crate::Permutation) -> Self {
        let mut out = Self::empty(self.n);
        for (i, j) in self.edges() {
            out.set(p.apply(i), p.apply(j), true);
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }
}

impl Serialize for AdjacencyMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AdjacencyMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u8>>::deserialize(d)?;
        AdjacencyMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Squared center distances `|x_i − x_j|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix(pub DMatrix<f64>);

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    /// `P D Pᵀ` with the same relabelling convention as
    /// [`AdjacencyMatrix::permuted`].
    pub fn permuted(&self, p: &crate::Permutation) -> Self {
        let n = self.len();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(p.apply(i), p.apply(j))] = self.0[(i, j)];
            }
        }
        Self(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).amax()
    }
}

/// Partition of sphere indices into classes (colors or equal radii).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    /// Normalises arbitrary labels to `0..k` in order of first appearance.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let mut seen: Vec<usize> = Vec::new();
        let labels = labels
            .into_iter()
            .map(|l| match seen.iter().position(|&s| s == l) {
                Some(k) => k,
                None => {
                    seen.push(l);
                    seen.len() - 1
                }
            })
            .collect();
        Self { labels }
    }

    /// Builds a partition from 0-based classes; they must be disjoint and
    /// cover `0..n`.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (k, class) in classes.iter().enumerate() {
            for &i in class {
                if i >= n || labels[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} is out of range or appears twice"
                    )));
                }
                labels[i] = k;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::InvalidPartition("classes do not cover every sphere".into()));
        }
        Ok(Self::from_labels(labels))
    }

    /// Parses comma-separated labels such as `1,1,2,2,3,3`.
    pub fn parse_labels(text: &str) -> Result<Self> {
        let labels = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("bad color label {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if labels.is_empty() {
            return Err(Error::InvalidPartition("empty color list".into()));
        }
        Ok(Self::from_labels(labels))
    }

    pub fn one_class(n: usize) -> Self {
        Self { labels: vec![0; n] }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    #[inline]
    pub fn class_of(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// True when every class of `self` lies inside one class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.first_conflict(coarser).is_none()
    }

    /// The first class of `self` that straddles classes of `coarser`.
    pub fn first_conflict(&self, coarser: &Partition) -> Option<usize> {
        self.classes()
            .iter()
            .position(|c| c.iter().any(|&i| coarser.class_of(i) != coarser.class_of(c[0])))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidPartition("empty partition".into()));
        }
        Ok(Self::from_labels(labels))
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.labels
    }
}

/// Contact detection: `A_ij = 1` iff `| |x_i − x_j| − (r_i + r_j) | ≤ eps`.
pub fn detect_contacts(cluster: &Cluster, eps_contact: f64) -> Result<AdjacencyMatrix> {
    if !(eps_contact > 0.0) {
        return Err(Error::InvalidConfig("eps_contact must be positive".into()));
    }
    let n = cluster.len();
    let mut a = AdjacencyMatrix::empty(n);
    let x = cluster.positions();
    let r = cluster.radii();
    for i in 0..n {
        for j in i + 1..n {
            let gap = (x[i] - x[j]).norm() - (r[i] + r[j]);
            if gap < -eps_contact {
                return Err(Error::Overlap(i, j));
            }
            if gap.abs() <= eps_contact {
                a.set(i, j, true);
            }
        }
    }
    Ok(a)
}

pub fn distance_matrix(cluster: &Cluster) -> DistanceMatrix {
    let n = cluster.len();
    let x = cluster.positions();
    DistanceMatrix(DMatrix::from_fn(n, n, |i, j| (x[i] - x[j]).norm_squared()))
}

/// Gram matrix `B Bᵀ` of the center coordinates.
pub fn gram_matrix(cluster: &Cluster) -> DMatrix<f64> {
    let n = cluster.len();
    let x = cluster.positions();
    DMatrix::from_fn(n, n, |i, j| x[i].dot(&x[j]))
}

/// Distance matrix recovered from a Gram matrix:
/// `D = diag(G)𝟙ᵀ − 2G + 𝟙 diag(G)ᵀ`.
pub fn distances_from_gram(gram: &DMatrix<f64>) -> DistanceMatrix {
    let n = gram.nrows();
    DistanceMatrix(DMatrix::from_fn(n, n, |i, j| {
        gram[(i, i)] - 2.0 * gram[(i, j)] + gram[(j, j)]
    }))
}

/// Applies `(P, δ)`: sphere `i` moves to slot `P(i)` and all coordinates are
/// multiplied by δ. Radii travel with their spheres, so a permutation that
/// mixes different radii is rejected.
pub fn apply_pi(cluster: &Cluster, op: &PIOperation) -> Result<Cluster> {
    let n = cluster.len();
    if op.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: op.len() });
    }
    let r = cluster.radii();
    if (0..n).any(|i| r[op.perm.apply(i)] != r[i]) {
        return Err(Error::RadiiMismatch);
    }
    Ok(Cluster {
        positions: permute_positions(cluster.positions(), op),
        radii: r.to_vec(),
    })
}

/// `δ (P ⊗ I₃) x` on a plain list of centers.
pub fn permute_positions(x: &[Vec3], op: &PIOperation) -> Vec<Vec3> {
    let mut out = vec![Vec3::zeros(); x.len()];
    let s = op.sign();
    for (i, xi) in x.iter().enumerate() {
        out[op.perm.apply(i)] = xi * s;
    }
    out
}

/// `δ (P ⊗ I₃) y` on a flat coordinate vector.
pub fn permute_flat(y: &DVector<f64>, op: &PIOperation) -> DVector<f64> {
    let mut out = DVector::zeros(y.len());
    let s = op.sign();
    for i in 0..op.len() {
        let j = op.perm.apply(i);
        for c in 0..3 {
            out[3 * j + c] = s * y[3 * i + c];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Permutation;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn dimer() -> Cluster {
        Cluster::identical(vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)]).unwrap()
    }

    #[test]
    fn dimer_at_contact_has_one_contact() {
        let a = detect_contacts(&dimer(), DEFAULT_EPS_CONTACT).unwrap();
        assert!(a.get(0, 1));
        assert_eq!(a.num_contacts(), 1);
        let d = distance_matrix(&dimer());
        assert_eq!(d.0[(0, 1)], 1.0);
        assert_eq!(d.0[(1, 0)], 1.0);
    }

    #[test]
    fn single_sphere_distance_matrix_is_zero() {
        let c = Cluster::identical(vec![Vec3::zeros()]).unwrap();
        assert_eq!(distance_matrix(&c).0, DMatrix::zeros(1, 1));
    }

    #[test]
    fn overlap_is_an_error() {
        let c = Cluster::new_unchecked_overlap(
            vec![Vec3::zeros(), Vec3::new(0.5, 0.0, 0.0)],
            vec![0.5, 0.5],
        )
        .unwrap();
        assert!(matches!(detect_contacts(&c, 1e-8), Err(Error::Overlap(0, 1))));
        assert!(matches!(
            Cluster::identical(vec![Vec3::zeros(), Vec3::new(0.5, 0.0, 0.0)]),
            Err(Error::Overlap(0, 1))
        ));
        assert!(detect_contacts(&dimer(), 0.0).is_err());
    }

    #[test]
    fn invalid_radii_are_rejected() {
        assert!(Cluster::new(vec![Vec3::zeros()], vec![0.0]).is_err());
        assert!(Cluster::new(vec![Vec3::zeros()], vec![-1.0]).is_err());
        assert!(Cluster::new(vec![Vec3::zeros()], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn hexagon_has_three_distinct_squared_distances() {
        let pos = (0..6)
            .map(|k| {
                let t = std::f64::consts::PI / 3.0 * k as f64;
                Vec3::new(t.cos(), t.sin(), 0.0)
            })
            .collect();
        let d = distance_matrix(&Cluster::identical(pos).unwrap());
        let mut vals: Vec<f64> = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                let v = d.0[(i, j)];
                if !vals.iter().any(|w| (w - v).abs() < 1e-9) {
                    vals.push(v);
                }
            }
        }
        vals.sort_by(f64::total_cmp);
        assert_eq!(vals.len(), 3);
        for (v, e) in vals.iter().zip([1.0, 3.0, 4.0]) {
            assert_relative_eq!(*v, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn apply_identity_and_swap() {
        let c = dimer();
        assert_eq!(apply_pi(&c, &PIOperation::identity(2)).unwrap(), c);
        let swap = PIOperation::parse("(12)", 2).unwrap();
        let s = apply_pi(&c, &swap).unwrap();
        assert_eq!(s.positions()[0], c.positions()[1]);
        assert_eq!(s.positions()[1], c.positions()[0]);
    }

    #[test]
    fn chain_reversal_preserves_adjacency() {
        let a = AdjacencyMatrix::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = Permutation::parse_cycles("(14)(23)", 4).unwrap();
        assert_eq!(a.permuted(&p), a);
    }

    #[test]
    fn radii_mismatch_is_rejected() {
        let c = Cluster::new(
            vec![Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0)],
            vec![0.4, 0.6],
        )
        .unwrap();
        let swap = PIOperation::parse("(12)", 2).unwrap();
        assert!(matches!(apply_pi(&c, &swap), Err(Error::RadiiMismatch)));
    }

    #[test]
    fn partitions() {
        let p = Partition::parse_labels("1,1,2,2,3,3").unwrap();
        assert_eq!(p.classes(), vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert!(Partition::singletons(6).refines(&p));
        assert!(!Partition::one_class(6).refines(&p));
        assert_eq!(Partition::one_class(6).first_conflict(&p), Some(0));
        assert!(Partition::from_classes(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_classes(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::parse_labels("1,x").is_err());
    }

    #[test]
    fn adjacency_rows_round_trip_and_validate() {
        let a = AdjacencyMatrix::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(AdjacencyMatrix::from_rows(&a.to_rows()).unwrap(), a);
        assert!(AdjacencyMatrix::from_rows(&[vec![0, 1], vec![0, 0]]).is_err());
        assert!(AdjacencyMatrix::from_rows(&[vec![1, 0], vec![0, 0]]).is_err());
    }

    fn arb_cluster_and_op() -> impl Strategy<Value = (Vec<Vec3>, PIOperation)> {
        (2usize..8).prop_flat_map(|n| {
            (
                prop::collection::vec(prop::array::uniform3(-3.0f64..3.0), n),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                any::<bool>(),
            )
                .prop_map(|(pts, img, inv)| {
                    (
                        pts.into_iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect(),
                        PIOperation::new(Permutation::from_images(img).unwrap(), inv),
                    )
                })
        })
    }

    proptest! {
        // Random point clouds may overlap, so the properties work on raw
        // centers with tiny radii.
        #[test]
        fn distance_matrix_is_an_isometry_invariant((pts, op) in arb_cluster_and_op()) {
            let n = pts.len();
            let c = Cluster::new_unchecked_overlap(pts, vec![1e-9; n]).unwrap();
            let img = apply_pi(&c, &op).unwrap();
            let lhs = distance_matrix(&img);
            let rhs = distance_matrix(&c).permuted(&op.perm);
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + rhs.0.amax()));
        }

        #[test]
        fn action_is_compatible_with_composition(
            (pts, g) in arb_cluster_and_op(),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            let n = pts.len();
            let mut rng = crate::rng::rng_from_seed(seed);
            let mut img: Vec<usize> = (0..n).collect();
            img.shuffle(&mut rng);
            let h = PIOperation::new(Permutation::from_images(img).unwrap(), seed % 2 == 0);
            let c = Cluster::new_unchecked_overlap(pts, vec![1e-9; n]).unwrap();
            let two_step = apply_pi(&apply_pi(&c, &g).unwrap(), &h).unwrap();
            let one_step = apply_pi(&c, &h.compose(&g)).unwrap();
            prop_assert_eq!(two_step, one_step);
        }

        #[test]
        fn gram_identity_reproduces_distances((pts, _op) in arb_cluster_and_op()) {
            let n = pts.len();
            let c = Cluster::new_unchecked_overlap(pts, vec![1e-9; n]).unwrap();
            let d = distance_matrix(&c);
            let from_gram = distances_from_gram(&gram_matrix(&c));
            prop_assert!(d.max_abs_diff(&from_gram) <= 1e-10 * (1.0 + d.0.amax()));
        }

        #[test]
        fn contacts_transform_with_the_permutation((pts, op) in arb_cluster_and_op()) {
            // Put every sphere on a grid so contacts are exact.
            let n = pts.len();
            let grid: Vec<Vec3> = pts.iter().enumerate()
                .map(|(i, p)| Vec3::new(i as f64, (p[0] > 0.0) as u8 as f64, 0.0))
                .collect();
            let c = Cluster::identical(grid).unwrap();
            let a = detect_contacts(&c, 1e-8).unwrap();
            let img = apply_pi(&c, &op).unwrap();
            prop_assert_eq!(detect_contacts(&img, 1e-8).unwrap(), a.permuted(&op.perm));
            prop_assert_eq!(a.len(), n);
        }
    }
}
