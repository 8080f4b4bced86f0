//! Birkhoff-James orthogonality: `x ⊥ y` iff `||x|| <= ||x + λ y||` for
//! every scalar `λ`.
//!
//! Tolerances are relative to `||x||`: a query is orthogonal when
//! `min_λ ||x + λ y|| >= ||x|| (1 - tol)`. On the least-squares route
//! (quadratic norms) the value gap is second order in the angle, so the
//! verdict there is `||λ* y|| <= tol ||x||` for the exact minimizer `λ*`,
//! which is `|(x, y)| <= tol ||x|| ||y||`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::{self, NormSpec, PExponent, Space};
use crate::optim::{self, Method, TOL_1D, TOL_MULTI};
use crate::scalar::{self, Field, Vector, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BjResult {
    pub orthogonal: bool,
    /// `|margin| <= tol * ||x||`: the relation is closed, so this still
    /// counts as orthogonal.
    pub boundary: bool,
    pub min_value: f64,
    pub norm_x: f64,
    /// `min_value - ||x||`
    pub margin: f64,
    /// Minimizing `λ` (one entry) or subspace coefficients.
    #[serde(with = "scalar::vector_serde")]
    pub witness: Vector,
    pub certified: bool,
    pub method: Method,
}

impl BjResult {
    fn from_min(norm_x: f64, min_value: f64, witness: Vector, method: Method, tol: f64) -> Self {
        // lambda = 0 always attains ||x||
        let (min_value, witness) = if min_value > norm_x {
            (norm_x, vec![scalar::ZERO; witness.len()])
        } else {
            (min_value, witness)
        };
        let margin = min_value - norm_x;
        let slack = tol * norm_x;
        BjResult {
            orthogonal: margin >= -slack,
            boundary: margin.abs() <= slack,
            min_value,
            norm_x,
            margin,
            witness,
            certified: method.is_certified(),
            method,
        }
    }

    /// Least-squares verdict from the minimizer's displacement.
    /// `argmin` is the unclamped minimizer.
    fn by_displacement(mut self, space: &Space, basis: &[Vector], argmin: &[C64], tol: f64) -> Result<Self> {
        if self.method == Method::LeastSquares {
            let n = space.dim();
            let z = basis.iter().zip(argmin).fold(vec![scalar::ZERO; n], |acc, (b, c)| scalar::axpy(&acc, *c, b));
            self.orthogonal = space.norm(&z)? <= tol * self.norm_x;
            self.boundary = self.orthogonal;
        }
        Ok(self)
    }

    fn trivial(norm_x: f64, k: usize) -> Self {
        BjResult {
            orthogonal: true,
            boundary: true,
            min_value: norm_x,
            norm_x,
            margin: 0.0,
            witness: vec![scalar::ZERO; k],
            certified: true,
            method: Method::ExactLp,
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::InvalidSpec(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Norms for which distance-to-subspace is solved exactly (LP or normal
/// equations) in this field.
fn has_exact_route(space: &Space) -> bool {
    match (&space.norm, space.field) {
        (NormSpec::Quadratic { .. }, _) => true,
        (NormSpec::PNorm { p, .. }, _) if p.is_two() => true,
        (NormSpec::PNorm { p, .. }, Field::Real) => p.is_one() || *p == PExponent::Infinity,
        (NormSpec::MaxAbsFunctionals { .. } | NormSpec::PolytopeVertices { .. }, Field::Real) => {
            true
        }
        _ => false,
    }
}

/// Decides `x ⊥ y`.
pub fn bj_orthogonal(space: &Space, x: &[C64], y: &[C64], tol: f64) -> Result<BjResult> {
    check_tol(tol)?;
    let n = space.dim();
    for v in [x, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    let norm_x = space.norm(x)?;
    let norm_y = space.norm(y)?;
    if norm_x == 0.0 || norm_y == 0.0 {
        return Ok(BjResult::trivial(norm_x, 1));
    }

    if has_exact_route(space) {
        let basis = [y.to_vec()];
        let r = optim::minimize_over_subspace(space, x, &basis, TOL_MULTI)?;
        return BjResult::from_min(norm_x, r.value, r.argmin.clone(), r.method, tol).by_displacement(
            space,
            &basis,
            &r.argmin,
            tol,
        );
    }

    // |λ| > 2||x||/||y|| gives ||x + λy|| >= |λ| ||y|| - ||x|| > ||x||
    let radius = 2.0 * norm_x / norm_y;
    let f = |lambda: C64| -> f64 {
        space
            .norm
            .eval(&scalar::axpy(x, lambda, y))
            .unwrap_or(f64::INFINITY)
    };
    match space.field {
        Field::Real => {
            let r = optim::minimize_1d_convex(|l| f(C64::new(l, 0.0)), -radius, radius, TOL_1D * radius)?;
            Ok(BjResult::from_min(norm_x, r.value, vec![C64::new(r.argmin, 0.0)], Method::GoldenSection, tol))
        }
        Field::Complex => {
            // the partial minimum over Im λ is convex in Re λ, so nesting is sound
            let inner = |a: f64| -> Result<(f64, f64)> {
                let r = optim::minimize_1d_convex(|b| f(C64::new(a, b)), -radius, radius, TOL_1D * radius)?;
                Ok((r.value, r.argmin))
            };
            let mut err = None;
            let outer = optim::minimize_1d_convex(
                |a| match inner(a) {
                    Ok((v, _)) => v,
                    Err(e) => {
                        err.get_or_insert(e);
                        f64::INFINITY
                    }
                },
                -radius,
                radius,
                TOL_1D * radius,
            );
            if let Some(e) = err {
                return Err(e);
            }
            let outer = outer?;
            let (value, b) = inner(outer.argmin)?;
            Ok(BjResult::from_min(norm_x, value, vec![C64::new(outer.argmin, b)], Method::GoldenSection, tol))
        }
    }
}

/// Decides `x ⊥ span(basis)`; scaling of the direction is absorbed into the
/// coefficients.
pub fn bj_orthogonal_subspace(space: &Space, x: &[C64], basis: &[Vector], tol: f64) -> Result<BjResult> {
    check_tol(tol)?;
    let norm_x = space.norm(x)?;
    if norm_x == 0.0 {
        // validate dims/independence even on the trivial path
        optim::minimize_over_subspace(space, x, basis, TOL_MULTI)?;
        return Ok(BjResult::trivial(0.0, basis.len()));
    }
    let r = optim::minimize_over_subspace(space, x, basis, TOL_MULTI)?;
    BjResult::from_min(norm_x, r.value, r.argmin.clone(), r.method, tol).by_displacement(space, basis, &r.argmin, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryWitness {
    #[serde(with = "scalar::vector_serde")]
    pub x: Vector,
    #[serde(with = "scalar::vector_serde")]
    pub y: Vector,
    /// `x ⊥ y` (holds).
    pub forward: BjResult,
    /// `y ⊥ x` (fails).
    pub backward: BjResult,
}

const FD_STEP: f64 = 1e-7;

/// Looks for pairs with `x ⊥ y` but not `y ⊥ x`.
///
/// For each probe `(x, w)` the set of `t` with `x ⊥ w + t x` is the interval
/// `[-D+(x; w), D+(x; -w)]` (unit `x`, one-sided directional derivatives of
/// the norm). Its endpoints, midpoint and `t = 0` when inside are tested.
/// Probes start with coordinate pairs and continue with seeded random ones;
/// `n_pairs` bounds the number of probes. A pair is kept only when `y ⊥ x`
/// also fails at twice the tolerance.
pub fn bj_symmetry_scan(space: &Space, n_pairs: usize, seed: u64, tol: f64) -> Result<Vec<AsymmetryWitness>> {
    check_tol(tol)?;
    let n = space.dim();
    let mut probes: Vec<(Vector, Vector)> = Vec::new();
    for xd in norm::spot_directions(n) {
        for k in 0..n {
            let w = scalar::basis_vector(n, k);
            // skip w parallel to x
            let support = xd.iter().filter(|z| z.norm() > 0.0).count();
            if support > 1 || xd[k] == scalar::ZERO {
                probes.push((xd.clone(), w));
            }
        }
    }
    probes.truncate(n_pairs);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut examined = 0;
    let mut structured = probes.into_iter();
    while examined < n_pairs {
        examined += 1;
        let (x, w) = match structured.next() {
            Some(p) => p,
            None => (
                norm::gaussian_vector(&mut rng, n, Field::Real),
                norm::gaussian_vector(&mut rng, n, Field::Real),
            ),
        };
        let Some(x) = space.normalize(&x)? else { continue };
        let Some(w) = space.normalize(&w)? else { continue };

        let nx = 1.0;
        let d_plus = (space.norm.eval(&scalar::axpy(&x, C64::new(FD_STEP, 0.0), &w))? - nx) / FD_STEP;
        let d_minus_neg = (space.norm.eval(&scalar::axpy(&x, C64::new(-FD_STEP, 0.0), &w))? - nx) / FD_STEP;
        let (lo, hi) = (-d_plus, d_minus_neg);
        let mut ts = vec![lo, 0.5 * (lo + hi), hi];
        if lo <= 0.0 && 0.0 <= hi {
            ts.push(0.0);
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup();

        for t in ts {
            let y = scalar::axpy(&w, C64::new(t, 0.0), &x);
            if space.norm.eval(&y)? <= 1e-12 {
                continue;
            }
            let forward = bj_orthogonal(space, &x, &y, tol)?;
            if !forward.orthogonal {
                continue;
            }
            let backward = bj_orthogonal(space, &y, &x, tol)?;
            // pairs on the edge of the tolerance band are rounding, not asymmetry
            if !backward.orthogonal && !bj_orthogonal(space, &y, &x, 2.0 * tol)?.orthogonal {
                out.push(AsymmetryWitness { x: x.clone(), y, forward, backward });
            }
        }
    }
    Ok(out)
}
