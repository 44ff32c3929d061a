use std::io::Write;

use nalgebra::DVector;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::frame::LocalFrame;
use crate::geometry::ConstraintSystem;
use crate::rng::{derive_seed, rng_from_seed, Rng};
use crate::{Error, Result};

/// Escape mode used when descent stalls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PathMode {
    /// Projected isotropic Gaussian steps.
    Gaussian,
    /// Metropolis sampling of `exp(−β |y − x1|²)` on the manifold.
    Sample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    /// Descent step bound and arrival radius.
    pub tol: f64,
    /// Scale of random tangent steps.
    pub sigma: f64,
    /// Inverse temperature of the sampling mode; negative values favour
    /// moving away from the target.
    pub beta: f64,
    /// Random steps per escape burst.
    pub nr: usize,
    /// Point budget per attempt.
    pub nmax: usize,
    /// Stagnation threshold on the projected descent direction.
    pub tol_n: f64,
    /// Equality residual tolerance.
    pub tol_q: f64,
    pub newton_max_iters: usize,
    pub mode: PathMode,
    pub seed: u64,
    pub retries: usize,
    /// Keep every generated point in the result.
    pub record: bool,
}

impl Default for PathConfig {
    fn default() -> Self {
        Self {
            tol: 0.1,
            sigma: 0.1,
            beta: -0.1,
            nr: 20,
            nmax: 100_000,
            tol_n: 1e-3,
            tol_q: 1e-10,
            newton_max_iters: 20,
            mode: PathMode::Sample,
            seed: 0,
            retries: 3,
            record: true,
        }
    }
}

impl PathConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [("tol", self.tol), ("sigma", self.sigma), ("tol_q", self.tol_q), ("tol_n", self.tol_n)];
        if let Some((name, v)) = positive.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
        }
        if !self.beta.is_finite() {
            return Err(Error::InvalidConfig("beta must be finite".into()));
        }
        if self.nr == 0 || self.nmax == 0 || self.retries == 0 {
            return Err(Error::InvalidConfig("nr, nmax and retries must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Start,
    Descent,
    Gaussian,
    Sample,
    Rejected,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Start => "start",
            StepKind::Descent => "descent",
            StepKind::Gaussian => "gaussian",
            StepKind::Sample => "sample",
            StepKind::Rejected => "rejected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathStatus {
    Found,
    NotFound,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PathStats {
    /// Points generated in the reported attempt, including the start.
    pub total_points: usize,
    pub descent_steps: usize,
    pub random_steps: usize,
    pub rejected_steps: usize,
    /// Proposals or descent steps that violated an inequality.
    pub boundary_rejections: usize,
    pub projection_failures: usize,
    pub reverse_failures: usize,
    pub metropolis_rejections: usize,
    pub stagnations: usize,
    pub bursts: usize,
    /// Largest distance between consecutive accepted points.
    pub max_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    pub status: PathStatus,
    /// Recorded points (empty unless `record` was set).
    pub points: Vec<Vec<f64>>,
    pub kinds: Vec<StepKind>,
    /// Last point of the reported attempt.
    pub final_point: Vec<f64>,
    pub stats: PathStats,
    /// Points generated over all attempts.
    pub points_all_attempts: usize,
    pub attempts: usize,
    /// Seed of the reported attempt.
    pub seed: u64,
}

impl PathResult {
    pub fn found(&self) -> bool {
        self.status == PathStatus::Found
    }
}

/// Result of one projected descent step.
#[derive(Debug, Clone)]
pub enum DescentOutcome {
    Moved { point: DVector<f64>, step: f64 },
    /// Trigger (a): an inequality fails at the new point.
    Boundary,
    /// Trigger (b): the Newton correction failed.
    ProjectionFailed,
    /// Trigger (c): the projected descent direction is shorter than `tol_n`.
    Stagnant,
}

/// Result of one random step.
#[derive(Debug, Clone)]
pub enum RandomOutcome {
    Accepted {
        point: DVector<f64>,
        frame: Option<LocalFrame>,
    },
    Rejected(Rejection),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    Projection,
    Boundary,
    Reverse,
    Metropolis,
}

/// Moves `Δs = min(tol, |P(x1 − y)|)` along the projected steepest-descent
/// direction of `|y − x1|²`, then corrects back onto the manifold.
pub fn descent_step(cs: &ConstraintSystem, frame: &LocalFrame, x1: &DVector<f64>, config: &PathConfig) -> DescentOutcome {
    let y = frame.point();
    let g = frame.project_tangent(&(x1 - y));
    let len = g.norm();
    if !(len >= config.tol_n) {
        return DescentOutcome::Stagnant;
    }
    let ds = config.tol.min(len);
    let z = y + &g * (ds / len);
    match frame.project(cs, &z, config.tol_q, config.newton_max_iters) {
        Err(_) => DescentOutcome::ProjectionFailed,
        Ok(p) if !cs.inequalities_hold(&p) => DescentOutcome::Boundary,
        Ok(p) => DescentOutcome::Moved { point: p, step: ds },
    }
}

fn tangent_gaussian(frame: &LocalFrame, sigma: f64, rng: &mut Rng) -> DVector<f64> {
    let d = frame.point().len();
    let xi = DVector::from_fn(d, |_, _| sigma * rng.sample::<f64, _>(StandardNormal));
    frame.project_tangent(&xi)
}

/// Projected isotropic Gaussian step `v = P ξ`, `ξ ~ N(0, σ² I)`.
pub fn random_gaussian_step(cs: &ConstraintSystem, frame: &LocalFrame, config: &PathConfig, rng: &mut Rng) -> RandomOutcome {
    let v = tangent_gaussian(frame, config.sigma, rng);
    let z = frame.point() + v;
    match frame.project(cs, &z, config.tol_q, config.newton_max_iters) {
        Err(_) => RandomOutcome::Rejected(Rejection::Projection),
        Ok(p) if !cs.inequalities_hold(&p) => RandomOutcome::Rejected(Rejection::Boundary),
        Ok(p) => RandomOutcome::Accepted { point: p, frame: None },
    }
}

/// Tolerance for the reverse projection to land back on the current point.
const REVERSE_TOL: f64 = 1e-6;

/// Metropolis step for the density `exp(−β |y − x1|²)` restricted to the
/// manifold, with a reverse-projection check.
pub fn metropolis_step(
    cs: &ConstraintSystem,
    frame: &LocalFrame,
    x1: &DVector<f64>,
    beta: f64,
    config: &PathConfig,
    rng: &mut Rng,
) -> RandomOutcome {
    let y = frame.point();
    let v = tangent_gaussian(frame, config.sigma, rng);
    let z = y + v;
    let proposal = match frame.project(cs, &z, config.tol_q, config.newton_max_iters) {
        Err(_) => return RandomOutcome::Rejected(Rejection::Projection),
        Ok(p) => p,
    };
    if !cs.inequalities_hold(&proposal) {
        return RandomOutcome::Rejected(Rejection::Boundary);
    }
    let Ok(back_frame) = LocalFrame::new(cs, &proposal) else {
        return RandomOutcome::Rejected(Rejection::Reverse);
    };
    let v_back = back_frame.project_tangent(&(y - &proposal));
    match back_frame.project(cs, &(&proposal + v_back), config.tol_q, config.newton_max_iters) {
        Ok(p) if (&p - y).norm() <= REVERSE_TOL => {}
        _ => return RandomOutcome::Rejected(Rejection::Reverse),
    }
    let du = (&proposal - x1).norm_squared() - (y - x1).norm_squared();
    let log_ratio = -beta * du;
    if log_ratio < 0.0 && rng.random::<f64>() >= log_ratio.exp() {
        return RandomOutcome::Rejected(Rejection::Metropolis);
    }
    RandomOutcome::Accepted {
        point: proposal,
        frame: Some(back_frame),
    }
}

struct Attempt<'a> {
    cs: &'a ConstraintSystem,
    x1: &'a DVector<f64>,
    config: &'a PathConfig,
    rng: Rng,
    y: DVector<f64>,
    frame: LocalFrame,
    points: Vec<Vec<f64>>,
    kinds: Vec<StepKind>,
    stats: PathStats,
}

impl Attempt<'_> {
    fn push(&mut self, kind: StepKind) {
        self.stats.total_points += 1;
        if self.config.record {
            self.points.push(self.y.as_slice().to_vec());
            self.kinds.push(kind);
        }
    }

    fn arrived(&self) -> bool {
        (&self.y - self.x1).norm() < self.config.tol
    }

    fn exhausted(&self) -> bool {
        self.stats.total_points > self.config.nmax
    }

    fn accept(&mut self, point: DVector<f64>, frame: Option<LocalFrame>) -> bool {
        let frame = match frame {
            Some(f) => f,
            None => match LocalFrame::new(self.cs, &point) {
                Ok(f) => f,
                Err(_) => return false,
            },
        };
        self.stats.max_step = self.stats.max_step.max((&point - &self.y).norm());
        self.y = point;
        self.frame = frame;
        true
    }

    fn burst(&mut self) {
        self.stats.bursts += 1;
        for _ in 0..self.config.nr {
            let outcome = match self.config.mode {
                PathMode::Gaussian => random_gaussian_step(self.cs, &self.frame, self.config, &mut self.rng),
                PathMode::Sample => {
                    metropolis_step(self.cs, &self.frame, self.x1, self.config.beta, self.config, &mut self.rng)
                }
            };
            let kind = match outcome {
                RandomOutcome::Accepted { point, frame } => {
                    if self.accept(point, frame) {
                        self.stats.random_steps += 1;
                        match self.config.mode {
                            PathMode::Gaussian => StepKind::Gaussian,
                            PathMode::Sample => StepKind::Sample,
                        }
                    } else {
                        self.stats.projection_failures += 1;
                        StepKind::Rejected
                    }
                }
                RandomOutcome::Rejected(r) => {
                    match r {
                        Rejection::Projection => self.stats.projection_failures += 1,
                        Rejection::Boundary => self.stats.boundary_rejections += 1,
                        Rejection::Reverse => self.stats.reverse_failures += 1,
                        Rejection::Metropolis => self.stats.metropolis_rejections += 1,
                    }
                    StepKind::Rejected
                }
            };
            if kind == StepKind::Rejected {
                self.stats.rejected_steps += 1;
            }
            self.push(kind);
            if self.arrived() || self.exhausted() {
                return;
            }
        }
    }

    fn run(&mut self) -> PathStatus {
        self.push(StepKind::Start);
        loop {
            if self.arrived() {
                return PathStatus::Found;
            }
            if self.exhausted() {
                return PathStatus::NotFound;
            }
            match descent_step(self.cs, &self.frame, self.x1, self.config) {
                DescentOutcome::Moved { point, .. } => {
                    if self.accept(point, None) {
                        self.stats.descent_steps += 1;
                        self.push(StepKind::Descent);
                    } else {
                        self.stats.projection_failures += 1;
                        self.burst();
                    }
                }
                DescentOutcome::ProjectionFailed => {
                    self.stats.projection_failures += 1;
                    self.burst();
                }
                DescentOutcome::Boundary => {
                    self.stats.boundary_rejections += 1;
                    self.burst();
                }
                DescentOutcome::Stagnant => {
                    self.stats.stagnations += 1;
                    self.burst();
                }
            }
        }
    }
}

/// Searches for a feasible path from `x0` to `x1`: projected steepest
/// descent, interrupted by bursts of `nr` random steps whenever a step hits
/// the boundary, fails to project, or stalls. Each of the `retries` attempts
/// has its own derived seed and a budget of `nmax` points.
pub fn find_path(cs: &ConstraintSystem, x0: &DVector<f64>, x1: &DVector<f64>, config: &PathConfig) -> Result<PathResult> {
    config.validate()?;
    if !cs.is_feasible(x0, config.tol_q) || !cs.is_feasible(x1, config.tol_q) {
        return Err(Error::InfeasibleEndpoint);
    }
    let frame = LocalFrame::new(cs, x0)?;
    let mut all_points = 0;
    let mut last = None;
    for attempt in 0..config.retries {
        let seed = derive_seed(config.seed, &[attempt as u64]);
        let mut run = Attempt {
            cs,
            x1,
            config,
            rng: rng_from_seed(seed),
            y: x0.clone(),
            frame: frame.clone(),
            points: Vec::new(),
            kinds: Vec::new(),
            stats: PathStats::default(),
        };
        let status = run.run();
        all_points += run.stats.total_points;
        let result = PathResult {
            status,
            final_point: run.y.as_slice().to_vec(),
            points: run.points,
            kinds: run.kinds,
            stats: run.stats,
            points_all_attempts: all_points,
            attempts: attempt + 1,
            seed,
        };
        if status == PathStatus::Found {
            return Ok(result);
        }
        last = Some(result);
    }
    Ok(last.expect("at least one attempt"))
}

/// Runs `n_steps` sampling steps with β = 0 from `x0` and returns the final
/// point, giving an embedding without accidental symmetry.
pub fn sample_configuration(cs: &ConstraintSystem, x0: &DVector<f64>, n_steps: usize, sigma: f64, seed: u64) -> Result<DVector<f64>> {
    let config = PathConfig {
        sigma,
        ..PathConfig::default()
    };
    config.validate()?;
    if !cs.is_feasible(x0, config.tol_q) {
        return Err(Error::InfeasibleEndpoint);
    }
    let mut rng = rng_from_seed(seed);
    let mut frame = LocalFrame::new(cs, x0)?;
    for _ in 0..n_steps {
        if let RandomOutcome::Accepted { frame: Some(f), .. } = metropolis_step(cs, &frame, x0, 0.0, &config, &mut rng) {
            frame = f;
        }
    }
    Ok(frame.point().clone())
}

/// Writes recorded points as CSV: `index,kind,y0,…,y{d−1}`.
pub fn write_path_csv(result: &PathResult, mut out: impl Write) -> Result<()> {
    let d = result.points.first().map_or(0, Vec::len);
    let header: Vec<String> = ["index".to_string(), "kind".to_string()]
        .into_iter()
        .chain((0..d).map(|k| format!("y{k}")))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for (k, (p, kind)) in result.points.iter().zip(&result.kinds).enumerate() {
        let coords: Vec<String> = p.iter().map(|v| format!("{v:.12e}")).collect();
        writeln!(out, "{k},{},{}", kind.as_str(), coords.join(","))?;
    }
    Ok(())
}
