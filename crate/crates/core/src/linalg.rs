//! Power iteration for self-adjoint, positive semidefinite operators.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerOptions {
    /// Stop once the Rayleigh quotient moves by less than this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: 1e-10,
            max_iter: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerResult<T> {
    /// Rayleigh quotient of the final iterate.
    pub value: T,
    /// Unit vector in the weighted norm.
    pub vector: Vec<T>,
    pub iterations: usize,
    /// Change of the Rayleigh quotient over the last step.
    pub residual: T,
    pub converged: bool,
}

/// `Σ w_i x_i y_i`, or the plain dot product when `weights` is `None`.
pub fn weighted_dot<T: Scalar>(x: &[T], y: &[T], weights: Option<&[T]>) -> T {
    match weights {
        Some(w) => x
            .iter()
            .zip(y)
            .zip(w)
            .fold(T::zero(), |acc, ((&a, &b), &c)| acc + a * b * c),
        None => x.iter().zip(y).fold(T::zero(), |acc, (&a, &b)| acc + a * b),
    }
}

/// Largest eigenvalue of a self-adjoint PSD operator given by `apply`.
///
/// Rayleigh quotients of the iterates are nondecreasing for such operators,
/// so `value` is a lower bound for the top eigenvalue at every step.
pub fn power_iteration<T, F>(
    start: Vec<T>,
    weights: Option<&[T]>,
    mut apply: F,
    opts: &PowerOptions,
) -> PowerResult<T>
where
    T: Scalar,
    F: FnMut(&[T], &mut [T]),
{
    let n = start.len();
    let mut x = start;
    let norm = weighted_dot(&x, &x, weights).sqrt();
    if n == 0 || norm == T::zero() {
        return PowerResult {
            value: T::zero(),
            vector: x,
            iterations: 0,
            residual: T::zero(),
            converged: true,
        };
    }
    x.iter_mut().for_each(|v| *v = *v / norm);
    let tol = T::from_f64_lossy(opts.tol);
    let mut y = vec![T::zero(); n];
    let mut value = T::neg_infinity();
    let mut residual = T::infinity();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        apply(&x, &mut y);
        let next = weighted_dot(&x, &y, weights);
        residual = (next - value).abs();
        value = next;
        let norm = weighted_dot(&y, &y, weights).sqrt();
        if norm == T::zero() {
            converged = true;
            residual = T::zero();
            break;
        }
        if residual <= tol {
            converged = true;
            break;
        }
        for (xi, &yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
    }
    PowerResult {
        value,
        vector: x,
        iterations,
        residual,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_operator() {
        let d = [0.25, 0.5, 0.75];
        let r = power_iteration(
            vec![1.0f64; 3],
            None,
            |x, y| {
                for i in 0..3 {
                    y[i] = d[i] * x[i];
                }
            },
            &PowerOptions::default(),
        );
        assert!(r.converged);
        assert!((r.value - 0.75).abs() < 1e-8);
    }

    #[test]
    fn zero_start_is_zero() {
        let r = power_iteration(vec![0.0f32; 4], None, |_, _| {}, &PowerOptions::default());
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn weighted_inner_product() {
        // A = diag(w)^{-1} K with K symmetric is self-adjoint for <·,·>_w
        let w = [1.0f64, 2.0];
        let k = [[0.5, 0.5], [0.5, 1.5]];
        let r = power_iteration(
            vec![1.0, 0.0],
            Some(&w),
            |x, y| {
                for i in 0..2 {
                    y[i] = (k[i][0] * x[0] + k[i][1] * x[1]) / w[i];
                }
            },
            &PowerOptions::default(),
        );
        // eigenvalues of [[0.5,0.5],[0.25,0.75]] are 1 and 0.25
        assert!((r.value - 1.0).abs() < 1e-8, "{}", r.value);
    }
}
