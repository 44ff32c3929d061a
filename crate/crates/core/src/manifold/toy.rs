use std::sync::Arc;

use nalgebra::DVector;

use crate::geometry::{ConstraintSystem, Inequality};

/// The planar set `{|x| < 3, 0 < y < x² + 5}`: an obstacle-free region with
/// a parabolic pocket between its two upper corners.
pub fn toy_set() -> ConstraintSystem {
    let ineq = vec![
        Inequality::Custom(Arc::new(|y: &[f64]| 3.0 - y[0])),
        Inequality::Custom(Arc::new(|y: &[f64]| 3.0 + y[0])),
        Inequality::Custom(Arc::new(|y: &[f64]| y[1])),
        Inequality::Custom(Arc::new(|y: &[f64]| y[0] * y[0] + 5.0 - y[1])),
    ];
    ConstraintSystem::new(2, Vec::new(), ineq)
}

/// Endpoints of the reference toy search.
pub fn toy_endpoints() -> (DVector<f64>, DVector<f64>) {
    (DVector::from_vec(vec![-2.9, 12.5]), DVector::from_vec(vec![2.9, 12.5]))
}
