//! Bond-breaking survey of 6-sphere clusters.
//!
//! Every subset of contacts of the two rigid 6-sphere clusters is removed in
//! turn; connected results are deduplicated up to isomorphism, given a
//! strictly feasible representative embedding and analysed by the symmetry
//! pipeline.

use std::collections::BTreeMap;
use std::io::Write;

use itertools::Itertools;
use nalgebra::DVector;
use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{
    build_constraint_system, detect_contacts, octahedron, polytetrahedron, AdjacencyMatrix, Cluster, Vec3,
};
use crate::groups::{find_isomorphism, Permutation};
use crate::manifold::{check_rank, LocalFrame};
use crate::rng::{derive_seed, rng_from_seed};
use crate::symmetry::{sticky_symmetry_group, ClusterData, SymmetryOptions};
use crate::{Error, Result};

/// Default clearance of non-contact pairs after relaxation, in diameters.
pub const DEFAULT_EPS_GAP: f64 = 1e-3;

/// Breadth-first reachability of every vertex from vertex 0.
pub fn is_connected(a: &AdjacencyMatrix) -> bool {
    let n = a.len();
    if n == 0 {
        return true;
    }
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = a.row_mask(v) & !seen;
        seen |= new;
        frontier |= new;
    }
    seen.count_ones() as usize == n
}

/// A permutation `P` with `P A Pᵀ = B`, if any.
pub fn graphs_isomorphic(a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> Option<Permutation> {
    find_isomorphism(a, b)
}

fn upper_bits(a: &AdjacencyMatrix) -> u64 {
    let n = a.len();
    let mut key = 0u64;
    for (k, (i, j)) in (0..n).tuple_combinations().enumerate() {
        if a.get(i, j) {
            key |= 1 << (63 - k);
        }
    }
    key
}

/// Lexicographically smallest relabelling, comparing the upper triangle read
/// row by row (brute force over all `n!` permutations).
pub fn canonical_form(a: &AdjacencyMatrix) -> (AdjacencyMatrix, Permutation) {
    let n = a.len();
    assert!(n <= 10, "brute-force canonical form is limited to 10 vertices");
    (0..n)
        .permutations(n)
        .map(|img| Permutation::from_images(img).expect("permutation"))
        .map(|p| (a.permuted(&p), p))
        .min_by_key(|(b, _)| upper_bits(b))
        .unwrap_or_else(|| (a.clone(), Permutation::identity(n)))
}

/// Moves an embedding whose broken pairs sit at contact distance into the
/// interior of the manifold of `broken`, so every non-contact pair clears
/// contact by at least `eps_gap`.
///
/// The broken pairs are pushed apart along the projected gradient of their
/// squared distances, which keeps any symmetry the seed embedding shares
/// with the broken bond set. Random tangent steps take over where that
/// direction vanishes.
pub fn relax_off_boundary(seed: &Cluster, broken: &AdjacencyMatrix, eps_gap: f64, rng_seed: u64) -> Result<Cluster> {
    const MAX_ITERS: usize = 4000;
    const TOL_Q: f64 = 1e-12;
    let n = seed.len();
    let radii = seed.radii().to_vec();
    let cs = build_constraint_system(broken, &radii, true);
    let gaps = |y: &DVector<f64>| -> Vec<(usize, usize, f64)> {
        (0..n)
            .tuple_combinations()
            .filter(|&(i, j)| !broken.get(i, j))
            .map(|(i, j)| {
                let d = (0..3).map(|c| (y[3 * i + c] - y[3 * j + c]).powi(2)).sum::<f64>().sqrt();
                (i, j, d - radii[i] - radii[j])
            })
            .collect()
    };
    let mut y = seed.centered().to_flat();
    if cs.max_equality_residual(&y) > 1e-8 {
        return Err(Error::RelaxationFailed("seed embedding does not satisfy the retained contacts".into()));
    }
    let mut rng = rng_from_seed(rng_seed);
    let mut step: f64 = 0.05;
    for _ in 0..MAX_ITERS {
        let current = gaps(&y);
        if current.iter().all(|g| g.2 >= eps_gap) {
            check_rank(&cs, &y)?;
            return Cluster::from_flat(y.as_slice(), radii);
        }
        let frame = LocalFrame::new(&cs, &y)?;
        let mut push = DVector::zeros(3 * n);
        for &(i, j, gap) in &current {
            if gap < 2.0 * eps_gap {
                for c in 0..3 {
                    let d = y[3 * i + c] - y[3 * j + c];
                    push[3 * i + c] += d;
                    push[3 * j + c] -= d;
                }
            }
        }
        let mut v = frame.project_tangent(&push);
        if v.norm() < 1e-9 || step < 1e-6 {
            v = frame.project_tangent(&DVector::from_fn(3 * n, |_, _| rng.sample::<f64, _>(StandardNormal)));
            step = step.max(1e-3);
        }
        let norm = v.norm();
        if norm == 0.0 {
            break;
        }
        let z = &y + v * (step / norm);
        let accepted = frame.project(&cs, &z, TOL_Q, 30).ok().filter(|p| {
            gaps(p)
                .iter()
                .zip(&current)
                .all(|(new, old)| new.2 > 0.0 || new.2 >= old.2 - 1e-12)
        });
        match accepted {
            Some(p) => {
                y = p;
                step = (step * 1.5).min(0.05);
            }
            None => step *= 0.5,
        }
    }
    Err(Error::RelaxationFailed(format!(
        "no interior point with clearance {eps_gap} after {MAX_ITERS} iterations"
    )))
}

/// Which rigid cluster an entry was derived from and the bonds removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lineage {
    pub seed: String,
    /// Removed contacts as 1-based sphere pairs in the seed's labels.
    pub broken: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyEntry {
    pub index: usize,
    /// Number of bonds broken, `12 − m`.
    pub d: usize,
    pub contacts: usize,
    /// Canonical adjacency matrix.
    pub adjacency: AdjacencyMatrix,
    pub lineage: Lineage,
    /// Relaxed embedding in the canonical labels.
    pub representative: ClusterData,
    pub automorphism_order: usize,
    pub point_group_order: Option<usize>,
    pub sticky_group: Vec<String>,
    pub sigma: Option<u64>,
    pub counting_number: Option<u128>,
    pub closure_inferred: Option<usize>,
    pub path_searches: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveySummary {
    /// Entry count per dimension `d = 0..=max_d`.
    pub counts: Vec<usize>,
    pub total: usize,
    /// Symmetry-number histogram per dimension.
    pub sigma_histograms: Vec<BTreeMap<u64, usize>>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyOptions {
    pub symmetry: SymmetryOptions,
    pub max_d: usize,
    pub eps_gap: f64,
    /// Run the symmetry pipeline on every entry (otherwise only enumerate).
    pub analyse: bool,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        Self {
            symmetry: SymmetryOptions {
                sample_steps: 2000,
                ..SymmetryOptions::default()
            },
            max_d: 7,
            eps_gap: DEFAULT_EPS_GAP,
            analyse: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Survey {
    pub version: u32,
    pub options: SurveyOptions,
    pub summary: SurveySummary,
    pub entries: Vec<SurveyEntry>,
}

/// A connected graph class with every bond-breaking realisation of it.
#[derive(Debug, Clone)]
pub struct GraphClass {
    pub canonical: AdjacencyMatrix,
    /// `(seed index, broken pairs, relabelling into canonical labels)`.
    pub realisations: Vec<(usize, Vec<(usize, usize)>, Permutation)>,
}

fn seeds() -> Result<Vec<(&'static str, Cluster)>> {
    Ok(vec![("octahedron", octahedron()), ("polytetrahedron", polytetrahedron()?)])
}

/// All connected, pairwise non-isomorphic graphs obtained by removing up to
/// `max_d` contacts from the two rigid seeds, sorted by `d` and canonical
/// form.
pub fn enumerate_graphs(max_d: usize) -> Result<Vec<GraphClass>> {
    let mut classes: Vec<GraphClass> = Vec::new();
    let mut by_key: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for (s, (_, cluster)) in seeds()?.iter().enumerate() {
        let full = detect_contacts(cluster, 1e-8)?;
        let edges = full.edges();
        for k in 0..=max_d.min(edges.len()) {
            for removed in edges.iter().copied().combinations(k) {
                let mut a = full.clone();
                for &(i, j) in &removed {
                    a.set(i, j, false);
                }
                if !is_connected(&a) {
                    continue;
                }
                let mut degrees: Vec<usize> = (0..a.len()).map(|v| a.degree(v)).collect();
                degrees.sort_unstable();
                let key = (k, degrees);
                let bucket = by_key.entry(key).or_default();
                let hit = bucket
                    .iter()
                    .find_map(|&c| find_isomorphism(&a, &classes[c].canonical).map(|p| (c, p)));
                match hit {
                    Some((c, p)) => classes[c].realisations.push((s, removed, p)),
                    None => {
                        let (canonical, p) = canonical_form(&a);
                        bucket.push(classes.len());
                        classes.push(GraphClass {
                            canonical,
                            realisations: vec![(s, removed, p)],
                        });
                    }
                }
            }
        }
    }
    classes.sort_by_key(|c| (12 - c.canonical.num_contacts(), upper_bits(&c.canonical)));
    Ok(classes)
}

fn relabel(cluster: &Cluster, p: &Permutation) -> Result<Cluster> {
    let mut pos = vec![Vec3::zeros(); cluster.len()];
    for (i, x) in cluster.positions().iter().enumerate() {
        pos[p.apply(i)] = *x;
    }
    Cluster::new(pos, cluster.radii().to_vec())
}

fn representative(class: &GraphClass, eps_gap: f64, seed: u64) -> Result<(Cluster, Lineage)> {
    let seeds = seeds()?;
    let mut last_err = None;
    for (k, (s, removed, p)) in class.realisations.iter().enumerate() {
        let (name, cluster) = &seeds[*s];
        let mut a = detect_contacts(cluster, 1e-8)?;
        for &(i, j) in removed {
            a.set(i, j, false);
        }
        match relax_off_boundary(cluster, &a, eps_gap, derive_seed(seed, &[k as u64])) {
            Ok(relaxed) => {
                let lineage = Lineage {
                    seed: name.to_string(),
                    broken: removed.iter().map(|&(i, j)| (i + 1, j + 1)).collect(),
                };
                return Ok((relabel(&relaxed, p)?, lineage));
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::RelaxationFailed("no realisation".into())))
}

fn analyse_entry(index: usize, class: &GraphClass, options: &SurveyOptions) -> SurveyEntry {
    let seed = derive_seed(options.symmetry.path.seed, &[index as u64]);
    let m = class.canonical.num_contacts();
    let automorphism_order = crate::groups::automorphism_group(&class.canonical, options.symmetry.max_vertices)
        .map_or(0, |g| g.len());
    let mut entry = SurveyEntry {
        index,
        d: 12 - m,
        contacts: m,
        adjacency: class.canonical.clone(),
        lineage: Lineage {
            seed: String::new(),
            broken: Vec::new(),
        },
        representative: ClusterData {
            positions: Vec::new(),
            radii: Vec::new(),
        },
        automorphism_order,
        point_group_order: None,
        sticky_group: Vec::new(),
        sigma: None,
        counting_number: None,
        closure_inferred: None,
        path_searches: None,
        error: None,
    };
    let (cluster, lineage) = match representative(class, options.eps_gap, seed) {
        Ok(r) => r,
        Err(e) => {
            entry.error = Some(e.to_string());
            return entry;
        }
    };
    entry.lineage = lineage;
    entry.representative = ClusterData::from_cluster(&cluster);
    if !options.analyse {
        return entry;
    }
    let mut sym = options.symmetry.clone();
    sym.path.seed = seed;
    match sticky_symmetry_group(&cluster, &sym) {
        Ok(r) => {
            log::info!("entry {index} (d={}): σ={}", entry.d, r.sigma);
            entry.point_group_order = Some(r.point_group_order());
            entry.sticky_group = r.sticky_group.clone();
            entry.sigma = Some(r.sigma);
            entry.counting_number = Some(r.counting_number);
            entry.closure_inferred = Some(r.closure_inferred);
            entry.path_searches = Some(r.path_searches);
        }
        Err(e) => {
            log::warn!("entry {index}: {e}");
            entry.error = Some(e.to_string());
        }
    }
    entry
}

/// Enumerates and analyses every connected 6-sphere contact graph with at
/// most `max_d` broken bonds.
pub fn survey(options: &SurveyOptions) -> Result<Survey> {
    let classes = enumerate_graphs(options.max_d)?;
    let jobs = options.symmetry.jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    // Entries are the parallel unit; searches inside one entry stay ordered.
    let mut inner = options.clone();
    inner.symmetry.jobs = 1;
    let entries: Vec<SurveyEntry> = pool.install(|| {
        classes
            .par_iter()
            .enumerate()
            .map(|(k, c)| analyse_entry(k, c, &inner))
            .collect()
    });
    let mut counts = vec![0; options.max_d + 1];
    let mut hist = vec![BTreeMap::new(); options.max_d + 1];
    for e in &entries {
        counts[e.d] += 1;
        if let Some(s) = e.sigma {
            *hist[e.d].entry(s).or_insert(0) += 1;
        }
    }
    Ok(Survey {
        version: crate::symmetry::REPORT_VERSION,
        options: options.clone(),
        summary: SurveySummary {
            total: entries.len(),
            failures: entries.iter().filter(|e| e.error.is_some()).count(),
            counts,
            sigma_histograms: hist,
        },
        entries,
    })
}

/// Summary table: one row per dimension with the count and σ histogram.
pub fn write_summary_csv(survey: &Survey, mut out: impl Write) -> Result<()> {
    writeln!(out, "d,clusters,sigma_histogram")?;
    for (d, (count, hist)) in survey.summary.counts.iter().zip(&survey.summary.sigma_histograms).enumerate() {
        let h: Vec<String> = hist.iter().map(|(s, c)| format!("{s}x{c}")).collect();
        writeln!(out, "{d},{count},{}", h.join(" "))?;
    }
    writeln!(out, "total,{},", survey.summary.total)?;
    Ok(())
}
