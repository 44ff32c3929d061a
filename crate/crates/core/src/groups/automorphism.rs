use std::collections::HashSet;

use super::{Permutation, MAX_GROUP_ORDER};
use crate::geometry::AdjacencyMatrix;
use crate::{Error, Result};

/// Default vertex bound for the automorphism search.
pub const DEFAULT_MAX_VERTICES: usize = 24;

/// Per-vertex invariant: degree plus the sorted degrees of the neighbors.
fn vertex_invariants(a: &AdjacencyMatrix) -> Vec<(usize, Vec<usize>)> {
    (0..a.len())
        .map(|v| {
            let mut nd: Vec<usize> = (0..a.len()).filter(|&u| a.get(v, u)).map(|u| a.degree(u)).collect();
            nd.sort_unstable();
            (a.degree(v), nd)
        })
        .collect()
}

/// Visiting order: highest degree first, then breadth-first so most vertices
/// have an already placed neighbor when they are assigned.
fn search_order(a: &AdjacencyMatrix) -> Vec<usize> {
    let n = a.len();
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let start = (0..n)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| (a.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        let mut queue = std::collections::VecDeque::from([start]);
        placed |= 1 << start;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for u in 0..n {
                if a.get(v, u) && placed >> u & 1 == 0 {
                    placed |= 1 << u;
                    queue.push_back(u);
                }
            }
        }
    }
    order
}

struct Matcher<'a> {
    a: &'a AdjacencyMatrix,
    b: &'a AdjacencyMatrix,
    order: Vec<usize>,
    inv_a: Vec<(usize, Vec<usize>)>,
    inv_b: Vec<(usize, Vec<usize>)>,
    image: Vec<usize>,
    used: u64,
}

impl Matcher<'_> {
    /// Depth-first assignment; `visit` returns `false` to stop the search.
    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let n = self.a.len();
        if depth == n {
            return visit(&self.image);
        }
        let v = self.order[depth];
        for w in 0..n {
            if self.used >> w & 1 == 1 || self.inv_a[v] != self.inv_b[w] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&u| self.a.get(v, u) == self.b.get(w, self.image[u]));
            if !consistent {
                continue;
            }
            self.image[v] = w;
            self.used |= 1 << w;
            let go_on = self.run(depth + 1, visit);
            self.used &= !(1 << w);
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn matcher<'a>(a: &'a AdjacencyMatrix, b: &'a AdjacencyMatrix) -> Matcher<'a> {
    Matcher {
        a,
        b,
        order: search_order(a),
        inv_a: vertex_invariants(a),
        inv_b: vertex_invariants(b),
        image: vec![usize::MAX; a.len()],
        used: 0,
    }
}

/// All permutations `P` with `P A Pᵀ = A`, in canonical order.
pub fn automorphism_group(a: &AdjacencyMatrix, max_vertices: usize) -> Result<Vec<Permutation>> {
    let n = a.len();
    if n > max_vertices || n > AdjacencyMatrix::MAX_VERTICES {
        return Err(Error::TooLarge { n, max: max_vertices.min(AdjacencyMatrix::MAX_VERTICES) });
    }
    let mut out = Vec::new();
    let mut too_large = false;
    matcher(a, a).run(0, &mut |img| {
        if out.len() >= MAX_GROUP_ORDER {
            too_large = true;
            return false;
        }
        out.push(Permutation::from_images(img.to_vec()).expect("bijection by construction"));
        true
    });
    if too_large {
        return Err(Error::TooLarge { n: out.len(), max: MAX_GROUP_ORDER });
    }
    out.sort();
    if out.len() <= 4096 {
        let set: HashSet<&Permutation> = out.iter().collect();
        if !out.iter().all(|p| out.iter().all(|q| set.contains(&p.compose(q)))) {
            return Err(Error::NotAGroup);
        }
    }
    Ok(out)
}

/// A permutation `P` with `P A Pᵀ = B`, if the graphs are isomorphic.
pub fn find_isomorphism(a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> Option<Permutation> {
    if a.len() != b.len() || a.num_contacts() != b.num_contacts() {
        return None;
    }
    let mut found = None;
    matcher(a, b).run(0, &mut |img| {
        found = Some(Permutation::from_images(img.to_vec()).expect("bijection by construction"));
        false
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{detect_contacts, octahedron, polytetrahedron};
    use itertools::Itertools;
    use proptest::prelude::*;

    fn cycle(n: usize) -> AdjacencyMatrix {
        AdjacencyMatrix::from_edges(n, &(0..n).map(|k| (k, (k + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn path(n: usize) -> AdjacencyMatrix {
        AdjacencyMatrix::from_edges(n, &(0..n - 1).map(|k| (k, k + 1)).collect::<Vec<_>>()).unwrap()
    }

    fn brute_force(a: &AdjacencyMatrix) -> Vec<Permutation> {
        let n = a.len();
        (0..n)
            .permutations(n)
            .map(|img| Permutation::from_images(img).unwrap())
            .filter(|p| a.permuted(p) == *a)
            .sorted()
            .collect()
    }

    #[test]
    fn loops_chains_and_complete_graphs() {
        for n in 3..=20 {
            assert_eq!(automorphism_group(&cycle(n), 24).unwrap().len(), 2 * n);
        }
        for n in 2..=20 {
            assert_eq!(automorphism_group(&path(n), 24).unwrap().len(), 2);
        }
        for n in 1..=7 {
            let mut k = AdjacencyMatrix::empty(n);
            for (i, j) in (0..n).tuple_combinations() {
                k.set(i, j, true);
            }
            let fact: usize = (1..=n).product();
            assert_eq!(automorphism_group(&k, 24).unwrap().len(), fact);
        }
        assert!(matches!(automorphism_group(&cycle(30), 24), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn six_loop_group_is_dihedral() {
        let g = automorphism_group(&cycle(6), 24).unwrap();
        let rot = Permutation::parse_cycles("(123456)", 6).unwrap();
        let refl = Permutation::parse_cycles("(26)(35)", 6).unwrap();
        assert!(g.contains(&rot) && g.contains(&refl));
        assert_eq!(rot.compose(&refl).compose(&rot).compose(&refl), Permutation::identity(6));
    }

    #[test]
    fn rigid_graphs() {
        let oct = detect_contacts(&octahedron(), 1e-8).unwrap();
        let poly = detect_contacts(&polytetrahedron().unwrap(), 1e-8).unwrap();
        assert_eq!(automorphism_group(&oct, 24).unwrap(), brute_force(&oct));
        assert_eq!(automorphism_group(&oct, 24).unwrap().len(), 48);
        assert_eq!(automorphism_group(&poly, 24).unwrap().len(), 4);
        assert!(find_isomorphism(&oct, &poly).is_none());
        assert!((0..6).permutations(6).all(|img| oct.permuted(&Permutation::from_images(img).unwrap()) != poly));
    }

    #[test]
    fn mode_fourteen_graph_has_sixteen_automorphisms() {
        // Octahedron without two opposite equatorial edges.
        let mut a = detect_contacts(&octahedron(), 1e-8).unwrap();
        a.set(0, 1, false);
        a.set(2, 3, false);
        assert_eq!(automorphism_group(&a, 24).unwrap().len(), 16);
    }

    #[test]
    fn isomorphism_witness() {
        let c = cycle(6);
        assert_eq!(find_isomorphism(&c, &c).map(|p| c.permuted(&p)), Some(c.clone()));
        let relabel = Permutation::parse_cycles("(135)(26)", 6).unwrap();
        let d = c.permuted(&relabel);
        let w = find_isomorphism(&c, &d).unwrap();
        assert_eq!(c.permuted(&w), d);
        assert!(find_isomorphism(&c, &path(6)).is_none());
    }

    proptest! {
        #[test]
        fn matches_brute_force_on_random_graphs(n in 1usize..7, bits in any::<u32>()) {
            let mut a = AdjacencyMatrix::empty(n);
            for (k, (i, j)) in (0..n).tuple_combinations().enumerate() {
                if bits >> k & 1 == 1 {
                    a.set(i, j, true);
                }
            }
            prop_assert_eq!(automorphism_group(&a, 24).unwrap(), brute_force(&a));
        }

        #[test]
        fn isomorphism_is_found_for_relabelled_graphs(n in 2usize..9, bits in any::<u64>(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut a = AdjacencyMatrix::empty(n);
            for (k, (i, j)) in (0..n).tuple_combinations().enumerate() {
                if bits >> (k % 64) & 1 == 1 {
                    a.set(i, j, true);
                }
            }
            let mut img: Vec<usize> = (0..n).collect();
            img.shuffle(&mut crate::rng::rng_from_seed(seed));
            let b = a.permuted(&Permutation::from_images(img).unwrap());
            let w = find_isomorphism(&a, &b).unwrap();
            prop_assert_eq!(a.permuted(&w), b);
        }
    }
}
