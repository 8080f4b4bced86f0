//! Extremes of `||A x||' / ||x||` over the domain unit sphere.

use crate::error::{Error, Result};
use crate::norm::{SphereSampler, Space};
use crate::scalar::{self, Vector, C64};

use super::search::{compass_minimize_projected, CompassConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct GainResult {
    /// Smallest ratio found (an upper estimate of the true infimum).
    pub min: f64,
    /// Largest ratio found (a lower estimate of the true supremum).
    pub max: f64,
    pub argmin: Vector,
    pub argmax: Vector,
    pub samples: usize,
}

const REFINE_STARTS: usize = 3;

/// `min/max ||A x||' / ||x||`; `codomain` evaluates `||.||'`.
pub fn extremize_gain<M, N>(
    map: M,
    domain: &Space,
    codomain: N,
    samples: usize,
    seed: u64,
    candidates: &[Vector],
) -> Result<GainResult>
where
    M: Fn(&[C64]) -> Vector,
    N: Fn(&[C64]) -> Result<f64>,
{
    extremize_ratio(
        |x| {
            let d = domain.norm.eval(x)?;
            if d == 0.0 {
                return Ok(f64::NAN);
            }
            Ok(codomain(&map(x))? / d)
        },
        domain,
        samples,
        seed,
        candidates,
    )
}

/// Extremes of a scale-invariant `ratio` over the domain unit sphere.
///
/// Samples the sphere (after the caller's `candidates`, e.g. polytope
/// vertices), then polishes the best few points on each side with a compass
/// search that stays on the sphere. `ratio` may return NaN at 0.
pub fn extremize_ratio<R>(ratio: R, domain: &Space, samples: usize, seed: u64, candidates: &[Vector]) -> Result<GainResult>
where
    R: Fn(&[C64]) -> Result<f64>,
{
    let mut scored: Vec<(f64, Vector)> = Vec::with_capacity(samples + candidates.len());
    for c in candidates {
        if let Some(u) = domain.normalize(c)? {
            let r = ratio(&u)?;
            scored.push((r, u));
        }
    }
    let mut sampler = SphereSampler::new(domain, seed);
    for _ in 0..samples {
        let u = sampler.next_unit()?;
        let r = ratio(&u)?;
        scored.push((r, u));
    }
    let total = scored.len();
    if total == 0 {
        return Err(Error::InvalidSpec("no sample points for ratio extremization".into()));
    }

    let mut by_ratio: Vec<usize> = (0..total).collect();
    by_ratio.sort_by(|&a, &b| scored[a].0.total_cmp(&scored[b].0).then(a.cmp(&b)));

    let field = domain.field;
    let refine = |start: &Vector, sign: f64, salt: u64| -> Result<(f64, Vector)> {
        let theta0 = scalar::to_real_params(start, field);
        let cfg = CompassConfig {
            initial_step: 0.05,
            min_step: 1e-9,
            max_evals: 4_000,
            random_dirs: 1,
            seed: seed ^ salt,
        };
        let out = compass_minimize_projected(
            |t| {
                let x = scalar::from_real_params(t, field);
                let r = ratio(&x)?;
                Ok(if r.is_nan() { f64::INFINITY } else { sign * r })
            },
            |t| {
                let x = scalar::from_real_params(t, field);
                if let Ok(d) = domain.norm.eval(&x) {
                    if d > 0.0 {
                        t.iter_mut().for_each(|v| *v /= d);
                    }
                }
            },
            theta0,
            cfg,
        )?;
        let x = scalar::from_real_params(&out.x, field);
        let u = domain.normalize(&x)?.unwrap_or(x);
        Ok((ratio(&u)?, u))
    };

    let (mut min, mut argmin) = scored[by_ratio[0]].clone();
    let (mut max, mut argmax) = scored[by_ratio[total - 1]].clone();
    for (i, &idx) in by_ratio.iter().take(REFINE_STARTS).enumerate() {
        let (r, u) = refine(&scored[idx].1, 1.0, 0x100 + i as u64)?;
        if r < min {
            min = r;
            argmin = u;
        }
    }
    for (i, &idx) in by_ratio.iter().rev().take(REFINE_STARTS).enumerate() {
        let (r, u) = refine(&scored[idx].1, -1.0, 0x200 + i as u64)?;
        if r > max {
            max = r;
            argmax = u;
        }
    }

    Ok(GainResult { min, max, argmin, argmax, samples: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::NormSpec;
    use crate::scalar::Matrix;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_on_euclid() {
        let s = Space::real(NormSpec::euclid(3)).unwrap();
        let g = extremize_gain(|x| x.to_vec(), &s, |v: &[C64]| NormSpec::euclid(3).eval(v), 200, 1, &[]).unwrap();
        assert_abs_diff_eq!(g.min, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.max, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn l1_to_linf_ratio() {
        let s = Space::real(NormSpec::p(2, 1.0)).unwrap();
        let g = extremize_gain(|x| x.to_vec(), &s, |v: &[C64]| NormSpec::p_inf(2).eval(v), 2000, 5, &[]).unwrap();
        assert_abs_diff_eq!(g.min, 0.5, epsilon = 1e-7);
        assert_abs_diff_eq!(g.max, 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(g.argmin[0].norm(), 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(g.argmin[1].norm(), 0.5, epsilon = 1e-6);
    }

    #[test]
    fn diagonal_gain() {
        let s = Space::real(NormSpec::euclid(2)).unwrap();
        let a = Matrix::diag_real(&[1.0, 2.0]);
        let g = extremize_gain(|x| a.mul_vec(x), &s, |v: &[C64]| NormSpec::euclid(2).eval(v), 1000, 9, &[]).unwrap();
        assert_abs_diff_eq!(g.min, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(g.max, 2.0, epsilon = 1e-8);
        assert!(g.min <= g.max);
    }
}
