//! Quasi-Newton minimisation with finite-difference derivatives.
//!
//! The objective may return `+inf` for infeasible points; the line search
//! backs off from them and the gradient falls back to one-sided differences
//! next to such a wall.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    pub max_iter: usize,
    /// Stop when `|f_new - f| <= rel_tol * max(|f|, 1)` twice in a row.
    pub rel_tol: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self { max_iter: 500, rel_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Relative finite-difference step for coordinate value `x`.
pub fn fd_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

/// Central-difference gradient with step [`fd_step`].
pub fn numeric_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], fx: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = fd_step(x[i]);
            xp[i] = x[i] + h;
            let up = f(&xp);
            xp[i] = x[i] - h;
            let down = f(&xp);
            xp[i] = x[i];
            match (up.is_finite(), down.is_finite()) {
                (true, true) => (up - down) / (2.0 * h),
                (true, false) => (up - fx) / h,
                (false, true) => (fx - down) / h,
                (false, false) => 0.0,
            }
        })
        .collect()
}

/// Central second differences with step `1e-4 * max(|x_i|, 1)`.
pub fn numeric_hessian<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let h: Vec<f64> = x.iter().map(|v| 1e-4 * v.abs().max(1.0)).collect();
    let fx = f(x);
    let mut xp = x.to_vec();
    let mut eval = |shifts: &[(usize, f64)]| {
        for &(i, s) in shifts {
            xp[i] += s;
        }
        let v = f(&xp);
        for &(i, s) in shifts {
            xp[i] -= s;
        }
        v
    };
    let mut hess = DMatrix::zeros(n, n);
    for i in 0..n {
        let up = eval(&[(i, h[i])]);
        let down = eval(&[(i, -h[i])]);
        hess[(i, i)] = (up - 2.0 * fx + down) / (h[i] * h[i]);
        for j in 0..i {
            let pp = eval(&[(i, h[i]), (j, h[j])]);
            let pm = eval(&[(i, h[i]), (j, -h[j])]);
            let mp = eval(&[(i, -h[i]), (j, h[j])]);
            let mm = eval(&[(i, -h[i]), (j, -h[j])]);
            let v = (pp - pm - mp + mm) / (4.0 * h[i] * h[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    hess
}

/// BFGS on the inverse Hessian with a backtracking Armijo line search.
pub fn minimize_bfgs<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], opts: &BfgsOptions) -> Minimum {
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut fx = f(x.as_slice());
    if !fx.is_finite() {
        return Minimum { x: x0.to_vec(), value: fx, iterations: 0, converged: false };
    }
    let mut g = DVector::from_vec(numeric_gradient(f, x.as_slice(), fx));
    let mut h_inv = DMatrix::<f64>::identity(n, n);
    let mut h_is_identity = true;
    let mut small_steps = 0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        iterations += 1;
        let mut d = -(&h_inv * &g);
        let mut slope = g.dot(&d);
        if !(slope < 0.0) {
            h_inv.fill_with_identity();
            h_is_identity = true;
            d = -g.clone();
            slope = -g.norm_squared();
        }
        if slope == 0.0 {
            converged = true;
            break;
        }
        // keep the first trial step bounded when the direction is steepest descent
        let mut alpha = if h_is_identity { (1.0 / d.amax()).min(1.0) } else { 1.0 };

        let mut accepted = None;
        for _ in 0..60 {
            let trial = &x + &d * alpha;
            let ft = f(trial.as_slice());
            if ft.is_finite() && ft <= fx + 1e-4 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            if !h_is_identity {
                h_inv.fill_with_identity();
                h_is_identity = true;
                continue;
            }
            converged = gradient_is_small(&g, &x, fx);
            break;
        };

        let g_new = DVector::from_vec(numeric_gradient(f, x_new.as_slice(), f_new));
        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            if h_is_identity {
                h_inv *= sy / y.norm_squared();
            }
            let rho = 1.0 / sy;
            let hy = &h_inv * &y;
            let yhy = y.dot(&hy);
            // H' = H - rho (H y s' + s y' H) + (rho^2 y'Hy + rho) s s'
            h_inv.ger(-rho, &hy, &s, 1.0);
            h_inv.ger(-rho, &s, &hy, 1.0);
            h_inv.ger(rho * rho * yhy + rho, &s, &s, 1.0);
            h_is_identity = false;
        }

        let change = (fx - f_new).abs() / fx.abs().max(1.0);
        x = x_new;
        fx = f_new;
        g = g_new;
        if change <= opts.rel_tol {
            small_steps += 1;
            if small_steps >= 2 || gradient_is_small(&g, &x, fx) {
                converged = true;
                break;
            }
        } else {
            small_steps = 0;
        }
    }
    Minimum { x: x.as_slice().to_vec(), value: fx, iterations, converged }
}

fn gradient_is_small(g: &DVector<f64>, x: &DVector<f64>, fx: f64) -> bool {
    let scaled = g.iter().zip(x.iter()).map(|(gi, xi)| (gi * xi.abs().max(1.0)).abs());
    scaled.fold(0.0, f64::max) <= 1e-5 * fx.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = minimize_bfgs(&f, &[-1.2, 1.0], &BfgsOptions { max_iter: 500, rel_tol: 1e-14 });
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-3 && (m.x[1] - 1.0).abs() < 2e-3, "{:?}", m.x);
    }

    #[test]
    fn respects_infinite_wall() {
        // minimum of the smooth part sits outside the feasible region x < 0.5
        let f = |x: &[f64]| if x[0] >= 0.5 { f64::INFINITY } else { (x[0] - 2.0).powi(2) };
        let m = minimize_bfgs(&f, &[0.0], &BfgsOptions::default());
        assert!(m.x[0] < 0.5 && m.x[0] > 0.45, "{:?}", m.x);
    }

    #[test]
    fn quadratic_hessian() {
        let f = |x: &[f64]| 3.0 * x[0] * x[0] + x[0] * x[1] + 2.0 * x[1] * x[1];
        let h = numeric_hessian(&f, &[0.3, -0.2]);
        assert!((h[(0, 0)] - 6.0).abs() < 1e-5);
        assert!((h[(0, 1)] - 1.0).abs() < 1e-5);
        assert!((h[(1, 1)] - 4.0).abs() < 1e-5);
    }

    #[test]
    fn gradient_of_cubic() {
        let f = |x: &[f64]| x[0].powi(3) + 2.0 * x[1];
        let g = numeric_gradient(&f, &[2.0, 5.0], f(&[2.0, 5.0]));
        assert!((g[0] - 12.0).abs() < 1e-8);
        assert!((g[1] - 2.0).abs() < 1e-8);
    }
}
