//! Derivative-free compass search and a BFGS descent, both on R^k.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub(crate) struct CompassConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_evals: usize,
    /// Extra random unit directions polled after the coordinate ones.
    pub random_dirs: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn compass_minimize<F>(f: F, start: Vec<f64>, cfg: CompassConfig) -> Result<SearchOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    compass_minimize_projected(f, |_| {}, start, cfg)
}

/// Compass search where every accepted point is passed through `project`
/// (e.g. back onto a sphere when the objective is scale-invariant).
pub(crate) fn compass_minimize_projected<F, P>(
    mut f: F,
    mut project: P,
    start: Vec<f64>,
    cfg: CompassConfig,
) -> Result<SearchOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
    P: FnMut(&mut [f64]),
{
    let k = start.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = start;
    let mut fx = f(&x)?;
    let mut evals = 1;
    let mut step = cfg.initial_step;
    let mut iterations = 0;
    if k == 0 {
        return Ok(SearchOutcome { x, value: fx, iterations, converged: true });
    }

    let mut dirs = directions(k, cfg.random_dirs, &mut rng);
    let mut trial = vec![0.0; k];
    loop {
        iterations += 1;
        let mut improved = false;
        for d in &dirs {
            for (t, (xi, di)) in trial.iter_mut().zip(x.iter().zip(d)) {
                *t = xi + step * di;
            }
            let ft = f(&trial)?;
            evals += 1;
            if ft < fx - 1e-15 * fx.abs() {
                x.copy_from_slice(&trial);
                project(&mut x);
                fx = f(&x)?;
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
            if step < cfg.min_step {
                return Ok(SearchOutcome { x, value: fx, iterations, converged: true });
            }
            if cfg.random_dirs > 0 {
                dirs = directions(k, cfg.random_dirs, &mut rng);
            }
        }
        if evals >= cfg.max_evals {
            return Ok(SearchOutcome { x, value: fx, iterations, converged: false });
        }
    }
}

fn directions(k: usize, random: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * k + 2 * random);
    for i in 0..k {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; k];
            d[i] = s;
            out.push(d);
        }
    }
    for _ in 0..random {
        let mut d: Vec<f64> = (0..k).map(|_| StandardNormal.sample(rng)).collect();
        let r = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r == 0.0 {
            continue;
        }
        d.iter_mut().for_each(|x| *x /= r);
        let neg: Vec<f64> = d.iter().map(|x| -x).collect();
        out.push(d);
        out.push(neg);
    }
    out
}

/// BFGS with Armijo backtracking. `fg` returns the value and the gradient.
pub(crate) fn bfgs_minimize<F>(mut fg: F, start: Vec<f64>, grad_tol: f64, max_iter: usize) -> SearchOutcome
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let k = start.len();
    let mut x = start;
    let (mut fx, mut g) = fg(&x);
    let mut h = identity(k);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm <= grad_tol {
            converged = true;
            break;
        }
        iterations += 1;
        let mut d: Vec<f64> = (0..k).map(|i| -(0..k).map(|j| h[i][j] * g[j]).sum::<f64>()).collect();
        let mut slope: f64 = d.iter().zip(&g).map(|(a, b)| a * b).sum();
        if slope >= 0.0 {
            h = identity(k);
            d = g.iter().map(|v| -v).collect();
            slope = -gnorm * gnorm;
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
            let (fxn, gn) = fg(&xn);
            if fxn <= fx + 1e-4 * alpha * slope {
                accepted = Some((xn, fxn, gn));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, fxn, gn)) = accepted else {
            // no decrease along a descent direction: at machine precision
            converged = true;
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        let small_change = (fx - fxn).abs() <= 1e-16 * fx.abs().max(1e-300);
        x = xn;
        fx = fxn;
        g = gn;
        if sy > 1e-300 {
            // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..k).map(|i| (0..k).map(|j| h[i][j] * y[j]).sum()).collect();
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for i in 0..k {
                for j in 0..k {
                    h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        if small_change {
            converged = true;
            break;
        }
    }
    SearchOutcome { x, value: fx, iterations, converged }
}

fn identity(k: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}
