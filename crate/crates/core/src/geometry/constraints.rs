use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::AdjacencyMatrix;

/// Scalar function of the flat coordinate vector.
pub type CustomFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// Gradient of a [`CustomFn`], written into the output slice.
pub type CustomGradFn = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

/// An equality `q(y) = 0` with an analytic gradient.
#[derive(Clone)]
pub enum Equality {
    /// `|y_i − y_j|² − s² = 0`.
    Contact { i: usize, j: usize, sum_radii: f64 },
    /// `Σ_i y_i[axis] = 0`.
    CenterOfMass { axis: usize },
    Custom { value: CustomFn, gradient: CustomGradFn },
}

/// A strict inequality `h(y) > 0`.
#[derive(Clone)]
pub enum Inequality {
    /// `|y_i − y_j|² − s² > 0`.
    Separation { i: usize, j: usize, sum_radii: f64 },
    Custom(CustomFn),
}

impl fmt::Debug for Equality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equality::Contact { i, j, sum_radii } => {
                write!(f, "Contact({i}, {j}, {sum_radii})")
            }
            Equality::CenterOfMass { axis } => write!(f, "CenterOfMass({axis})"),
            Equality::Custom { .. } => f.write_str("Custom"),
        }
    }
}

impl fmt::Debug for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inequality::Separation { i, j, sum_radii } => {
                write!(f, "Separation({i}, {j}, {sum_radii})")
            }
            Inequality::Custom(_) => f.write_str("Custom"),
        }
    }
}

#[inline]
fn sq_dist(y: &[f64], i: usize, j: usize) -> f64 {
    let (a, b) = (&y[3 * i..3 * i + 3], &y[3 * j..3 * j + 3]);
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

impl Equality {
    pub fn value(&self, y: &[f64]) -> f64 {
        match self {
            Equality::Contact { i, j, sum_radii } => sq_dist(y, *i, *j) - sum_radii * sum_radii,
            Equality::CenterOfMass { axis } => y.iter().skip(*axis).step_by(3).sum(),
            Equality::Custom { value, .. } => value(y),
        }
    }

    /// `∇q(y) · v` without forming the gradient.
    pub fn gradient_dot(&self, y: &[f64], v: &[f64]) -> f64 {
        match self {
            Equality::Contact { i, j, .. } => (0..3)
                .map(|c| 2.0 * (y[3 * i + c] - y[3 * j + c]) * (v[3 * i + c] - v[3 * j + c]))
                .sum(),
            Equality::CenterOfMass { axis } => v.chunks_exact(3).map(|c| c[*axis]).sum(),
            Equality::Custom { gradient, .. } => {
                let mut g = vec![0.0; y.len()];
                gradient(y, &mut g);
                g.iter().zip(v).map(|(a, b)| a * b).sum()
            }
        }
    }

    /// Writes the gradient into `out`, which must be zeroed by the caller.
    pub fn gradient_into(&self, y: &[f64], out: &mut [f64]) {
        match self {
            Equality::Contact { i, j, .. } => {
                for c in 0..3 {
                    let g = 2.0 * (y[3 * i + c] - y[3 * j + c]);
                    out[3 * i + c] = g;
                    out[3 * j + c] = -g;
                }
            }
            Equality::CenterOfMass { axis } => {
                for v in out.iter_mut().skip(*axis).step_by(3) {
                    *v = 1.0;
                }
            }
            Equality::Custom { gradient, .. } => gradient(y, out),
        }
    }
}

impl Inequality {
    pub fn value(&self, y: &[f64]) -> f64 {
        match self {
            Inequality::Separation { i, j, sum_radii } => {
                sq_dist(y, *i, *j) - sum_radii * sum_radii
            }
            Inequality::Custom(h) => h(y),
        }
    }
}

/// Equalities and strict inequalities defining a configuration manifold in
/// `R^d`.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    dim: usize,
    equalities: Vec<Equality>,
    inequalities: Vec<Inequality>,
    fix_com: bool,
}

impl ConstraintSystem {
    pub fn new(dim: usize, equalities: Vec<Equality>, inequalities: Vec<Inequality>) -> Self {
        let fix_com = equalities
            .iter()
            .any(|e| matches!(e, Equality::CenterOfMass { .. }));
        Self {
            dim,
            equalities,
            inequalities,
            fix_com,
        }
    }

    /// Ambient dimension d.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of equalities m (contacts plus center-of-mass rows).
    pub fn num_equalities(&self) -> usize {
        self.equalities.len()
    }

    pub fn num_inequalities(&self) -> usize {
        self.inequalities.len()
    }

    /// `d − m`, the manifold dimension when the gradients are independent.
    pub fn manifold_dim(&self) -> usize {
        self.dim.saturating_sub(self.equalities.len())
    }

    pub fn fixes_center_of_mass(&self) -> bool {
        self.fix_com
    }

    pub fn equalities(&self) -> &[Equality] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn equality_values(&self, y: &DVector<f64>) -> DVector<f64> {
        let y = y.as_slice();
        DVector::from_iterator(self.equalities.len(), self.equalities.iter().map(|e| e.value(y)))
    }

    /// The `m × d` Jacobian of the equalities.
    pub fn jacobian(&self, y: &DVector<f64>) -> DMatrix<f64> {
        self.jacobian_transpose(y).transpose()
    }

    /// `Jᵀ` (`d × m`): one gradient per column.
    pub fn jacobian_transpose(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut jt = DMatrix::zeros(self.dim, self.equalities.len());
        for (k, e) in self.equalities.iter().enumerate() {
            e.gradient_into(y.as_slice(), jt.column_mut(k).as_mut_slice());
        }
        jt
    }

    /// `J(y) B` for a `d × k` matrix `B`, using the sparsity of the
    /// contact gradients.
    pub fn jacobian_times(&self, y: &DVector<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        let y = y.as_slice();
        let m = self.equalities.len();
        let mut out = DMatrix::zeros(m, b.ncols());
        for l in 0..b.ncols() {
            let col = b.column(l);
            let v = col.as_slice();
            let dst = &mut out.as_mut_slice()[l * m..(l + 1) * m];
            for (k, e) in self.equalities.iter().enumerate() {
                dst[k] = match e {
                    Equality::Contact { i, j, .. } => {
                        let (a, b) = (3 * i, 3 * j);
                        2.0 * ((y[a] - y[b]) * (v[a] - v[b])
                            + (y[a + 1] - y[b + 1]) * (v[a + 1] - v[b + 1])
                            + (y[a + 2] - y[b + 2]) * (v[a + 2] - v[b + 2]))
                    }
                    _ => e.gradient_dot(y, v),
                };
            }
        }
        out
    }

    pub fn max_equality_residual(&self, y: &DVector<f64>) -> f64 {
        let y = y.as_slice();
        self.equalities
            .iter()
            .map(|e| e.value(y).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest inequality value, `+∞` when there are none.
    pub fn min_inequality(&self, y: &DVector<f64>) -> f64 {
        let y = y.as_slice();
        self.inequalities
            .iter()
            .map(|h| h.value(y))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn inequalities_hold(&self, y: &DVector<f64>) -> bool {
        let y = y.as_slice();
        self.inequalities.iter().all(|h| h.value(y) > 0.0)
    }

    /// `max|q_i| ≤ tol_q` and every `h_j > 0`.
    pub fn is_feasible(&self, y: &DVector<f64>, tol_q: f64) -> bool {
        y.len() == self.dim && self.max_equality_residual(y) <= tol_q && self.inequalities_hold(y)
    }
}

/// One equality per contact, one strict inequality per non-contact pair and,
/// with `fix_com`, three linear center-of-mass equalities.
pub fn build_constraint_system(a: &AdjacencyMatrix, radii: &[f64], fix_com: bool) -> ConstraintSystem {
    assert_eq!(a.len(), radii.len(), "adjacency and radii sizes differ");
    let n = a.len();
    let mut eq = Vec::new();
    let mut ineq = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let sum_radii = radii[i] + radii[j];
            if a.get(i, j) {
                eq.push(Equality::Contact { i, j, sum_radii });
            } else {
                ineq.push(Inequality::Separation { i, j, sum_radii });
            }
        }
    }
    if fix_com {
        eq.extend((0..3).map(|axis| Equality::CenterOfMass { axis }));
    }
    ConstraintSystem::new(3 * n, eq, ineq)
}
