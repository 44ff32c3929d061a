//! Sticky symmetry groups, symmetry numbers and counting numbers.

mod report;

pub use report::{
    ClusterData, ElementRecord, ElementStatus, SearchRecord, SymmetryOptions, SymmetryReport, REPORT_VERSION,
};

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DVector;
use rayon::prelude::*;

use crate::geometry::{build_constraint_system, detect_contacts, permute_flat, Cluster, ConstraintSystem, Partition};
use crate::groups::{
    automorphism_group, counting_number, counting_number_without_inversions, point_group, restrict_permutations,
    PIGroup, PIOperation, Permutation, Provenance,
};
use crate::manifold::{check_rank, find_path, newton_polish, sample_configuration, PathConfig};
use crate::rng::derive_seed;
use crate::{Error, Result};

const SAMPLE_TAG: u64 = 0x5a3b;
const REVERIFY_TAG: u64 = 0x7e7f;

/// A cluster prepared for analysis: centered, polished onto its own contact
/// manifold and checked for independent constraints.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub cluster: Cluster,
    pub contacts: crate::AdjacencyMatrix,
    pub system: ConstraintSystem,
    pub point: DVector<f64>,
}

/// Centers, detects contacts and projects the embedding onto its manifold so
/// equality residuals sit far below `tol_q`.
pub fn prepare(cluster: &Cluster, options: &SymmetryOptions) -> Result<Prepared> {
    let centered = cluster.centered();
    let contacts = detect_contacts(&centered, options.eps_contact)?;
    let system = build_constraint_system(&contacts, centered.radii(), options.fix_com);
    let polished = newton_polish(&system, &centered.to_flat(), options.path.tol_q * 1e-3, 50)?;
    check_rank(&system, &polished)?;
    let mut point = polished;
    if options.sample_steps > 0 {
        point = sample_configuration(
            &system,
            &point,
            options.sample_steps,
            options.path.sigma,
            derive_seed(options.path.seed, &[SAMPLE_TAG]),
        )?;
        check_rank(&system, &point)?;
    }
    if !system.inequalities_hold(&point) {
        return Err(Error::InvalidCluster("polished embedding violates a non-contact separation".into()));
    }
    let cluster = Cluster::from_flat(point.as_slice(), centered.radii().to_vec())?;
    if detect_contacts(&cluster, options.eps_contact)? != contacts {
        return Err(Error::InvalidCluster("polishing changed the contact graph".into()));
    }
    Ok(Prepared {
        cluster,
        contacts,
        system,
        point,
    })
}

struct Search<'a> {
    prepared: &'a Prepared,
    config: PathConfig,
}

impl Search<'_> {
    fn run(&self, op: &PIOperation, seed: u64) -> Result<SearchRecord> {
        let x0 = &self.prepared.point;
        let x1 = permute_flat(x0, op);
        let config = PathConfig {
            seed,
            record: false,
            ..self.config.clone()
        };
        let r = find_path(&self.prepared.system, x0, &x1, &config)?;
        let end = DVector::from_vec(r.final_point.clone());
        Ok(SearchRecord {
            found: r.found(),
            attempts: r.attempts,
            points: r.points_all_attempts,
            seed,
            endpoint_error: (end - x1).norm(),
        })
    }
}

/// True when `c ∈ H f H` for some failed `f`.
fn in_failed_double_coset(c: &PIOperation, h: &PIGroup, failed: &[PIOperation]) -> bool {
    failed.iter().any(|f| {
        let f_inv = f.inverse();
        h.elements().any(|x| h.contains(&f_inv.compose(&x.compose(c))))
    })
}

/// Runs the full pipeline on one cluster.
///
/// Automorphisms of the contact graph (restricted to the radii partition)
/// times inversion signs are the candidates. Rotations found by the point
/// group are accepted directly; every other candidate, in canonical order,
/// gets a path search from the embedding to its image unless group structure
/// already decides it. Found elements are closed into the current subgroup.
pub fn sticky_symmetry_group(cluster: &Cluster, options: &SymmetryOptions) -> Result<SymmetryReport> {
    options.path.validate()?;
    let prepared = prepare(cluster, options)?;
    let radii_part = prepared.cluster.radii_partition();

    let auts = restrict_permutations(&automorphism_group(&prepared.contacts, options.max_vertices)?, &radii_part);
    let mut pg = point_group(&prepared.cluster, &auts, options.eps_d)?;
    if !options.include_inversions {
        pg = pg.proper_part();
    }

    let signs: &[bool] = if options.include_inversions { &[false, true] } else { &[false] };
    let universe: Vec<PIOperation> = auts
        .iter()
        .flat_map(|p| signs.iter().map(move |&inv| PIOperation::new(p.clone(), inv)))
        .collect();
    let index: BTreeMap<&PIOperation, usize> = universe.iter().enumerate().map(|(k, e)| (e, k)).collect();

    let search = Search {
        prepared: &prepared,
        config: options.path.clone(),
    };
    let seed_of = |op: &PIOperation| derive_seed(options.path.seed, &[index[op] as u64]);

    let mut group = pg.clone();
    let mut failed: Vec<PIOperation> = Vec::new();
    let mut records: BTreeMap<PIOperation, SearchRecord> = BTreeMap::new();
    let mut inferred: BTreeSet<PIOperation> = BTreeSet::new();
    log::info!(
        "N={} |G|={} |P|={}, {} candidates",
        prepared.cluster.len(),
        auts.len(),
        pg.order(),
        universe.len()
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;

    let mut cursor = 0;
    while cursor < universe.len() {
        let undecided = |c: &PIOperation, group: &PIGroup, failed: &[PIOperation]| {
            !group.contains(c) && !(options.prune_negative && in_failed_double_coset(c, group, failed))
        };
        let mut batch = Vec::new();
        while cursor < universe.len() && batch.len() < options.jobs.max(1) {
            let c = &universe[cursor];
            cursor += 1;
            if undecided(c, &group, &failed) {
                batch.push(c.clone());
            }
        }
        let results: Vec<Result<SearchRecord>> = if batch.len() == 1 {
            vec![search.run(&batch[0], seed_of(&batch[0]))]
        } else {
            pool.install(|| batch.par_iter().map(|c| search.run(c, seed_of(c))).collect())
        };
        for (c, rec) in batch.into_iter().zip(results) {
            let rec = rec?;
            let found = rec.found;
            log::debug!("{}: {} after {} points", c.to_notation(), if found { "found" } else { "not found" }, rec.points);
            records.insert(c.clone(), rec);
            if group.contains(&c) {
                // Decided by an earlier element of the same batch.
                if !found {
                    group.set_provenance(&c, Provenance::Closure);
                }
                continue;
            }
            if found {
                let doubtful: BTreeSet<PIOperation> = failed.iter().cloned().collect();
                group.extend_closure(c, Provenance::Path, |e| {
                    if doubtful.contains(e) {
                        Provenance::Closure
                    } else {
                        Provenance::Path
                    }
                })?;
                failed.retain(|f| !group.contains(f));
            } else {
                failed.push(c);
            }
        }
    }

    // Never searched and not in the group: excluded by a failed double coset.
    for c in &universe {
        if !group.contains(c) && !records.contains_key(c) {
            inferred.insert(c.clone());
        }
    }

    let mut reverify: BTreeMap<PIOperation, SearchRecord> = BTreeMap::new();
    if options.reverify_closure {
        let doubtful: Vec<PIOperation> = group
            .iter()
            .filter(|(_, p)| *p == Provenance::Closure)
            .map(|(e, _)| e.clone())
            .collect();
        for c in doubtful {
            let rec = search.run(&c, derive_seed(options.path.seed, &[index[&c] as u64, REVERIFY_TAG]))?;
            if rec.found {
                group.set_provenance(&c, Provenance::Path);
            }
            reverify.insert(c, rec);
        }
    }

    finish_report(
        &prepared,
        options,
        &auts,
        &pg,
        &group,
        &universe,
        &records,
        &reverify,
        &inferred,
        radii_part,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish_report(
    prepared: &Prepared,
    options: &SymmetryOptions,
    auts: &[Permutation],
    pg: &PIGroup,
    group: &PIGroup,
    universe: &[PIOperation],
    records: &BTreeMap<PIOperation, SearchRecord>,
    reverify: &BTreeMap<PIOperation, SearchRecord>,
    inferred: &BTreeSet<PIOperation>,
    partition: Partition,
) -> Result<SymmetryReport> {
    if !group.check_axioms() || !pg.is_subset_of(group) {
        return Err(Error::NotAGroup);
    }
    if group.elements().any(|e| !universe.contains(e)) {
        return Err(Error::NotAGroup);
    }
    let elements = universe
        .iter()
        .map(|e| ElementRecord {
            element: e.to_notation(),
            status: group.provenance(e).map_or(ElementStatus::NotFound, ElementStatus::from),
            inferred: inferred.contains(e),
            search: records.get(e).cloned(),
            reverify: reverify.get(e).cloned(),
        })
        .collect();
    let sigma = group.order() as u64;
    let counting = if options.include_inversions {
        counting_number(sigma, &partition)?
    } else {
        counting_number_without_inversions(sigma, &partition)?
    };
    Ok(SymmetryReport {
        version: REPORT_VERSION,
        n: prepared.cluster.len(),
        cluster: ClusterData::from_cluster(&prepared.cluster),
        contacts: prepared.contacts.clone(),
        partition,
        include_inversions: options.include_inversions,
        automorphism_group: auts.iter().map(|p| p.to_cycle_string()).collect(),
        point_group: pg.notations(),
        sticky_group: group.notations(),
        elements,
        sigma,
        counting_number: counting,
        path_searches: records.len() + reverify.len(),
        closure_inferred: group.count(Provenance::Closure),
        options: options.clone(),
        seed: options.path.seed,
    })
}

/// Same pipeline; radii differences restrict the automorphisms and enter the
/// counting number through the radii partition.
pub fn radii_symmetry(cluster: &Cluster, options: &SymmetryOptions) -> Result<SymmetryReport> {
    sticky_symmetry_group(cluster, options)
}

/// Restricts a finished report to a coloring without new path searches.
pub fn colored_symmetry(report: &SymmetryReport, colors: &Partition) -> Result<SymmetryReport> {
    if colors.len() != report.n {
        return Err(Error::DimensionMismatch { expected: report.n, found: colors.len() });
    }
    let radii_part = Partition::from_labels(
        report
            .cluster
            .radii
            .iter()
            .map(|r| report.cluster.radii.iter().position(|s| s == r).unwrap())
            .collect(),
    );
    if let Some(class) = colors.first_conflict(&radii_part) {
        return Err(Error::ColorRadiiConflict(class));
    }
    let sticky = report.sticky()?.restrict(colors);
    let point = report.point()?.restrict(colors);
    let keep = |s: &String| -> Result<bool> {
        let op = PIOperation::parse(s, report.n)?;
        Ok(crate::groups::preserves_partition(&op.perm, colors))
    };
    let mut automorphisms = Vec::new();
    for s in &report.automorphism_group {
        if keep(s)? {
            automorphisms.push(s.clone());
        }
    }
    let mut elements = Vec::new();
    for e in &report.elements {
        if keep(&e.element.trim_end_matches('*').to_string())? {
            elements.push(e.clone());
        }
    }
    let sigma = sticky.order() as u64;
    let counting = if report.include_inversions {
        counting_number(sigma, colors)?
    } else {
        counting_number_without_inversions(sigma, colors)?
    };
    Ok(SymmetryReport {
        partition: colors.clone(),
        automorphism_group: automorphisms,
        point_group: point.notations(),
        sticky_group: sticky.notations(),
        elements,
        sigma,
        counting_number: counting,
        path_searches: 0,
        closure_inferred: sticky.count(Provenance::Closure),
        ..report.clone()
    })
}
