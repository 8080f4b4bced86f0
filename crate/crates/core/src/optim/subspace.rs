//! Distance from a point to a linear subspace, `min_c ||x + sum_j c_j b_j||`.
//!
//! Routing: polyhedral norms on real data go to an exact LP, quadratic norms
//! (including l^2) to the normal equations, smooth l^p to BFGS on
//! `sum |v_i|^p`, and everything else to a seeded multi-start compass search
//! whose result is only an upper bound.

use crate::error::{Error, Result};
use crate::linalg;
use crate::norm::{NormSpec, PExponent, Space};
use crate::scalar::{self, Field, Matrix, Vector, C64};

use super::lp::{lp_solve, LinearProgram, Relation};
use super::search::{bfgs_minimize, compass_minimize, CompassConfig};
use super::{Method, MinResult, TOL_LP};

const RESTART_SEED: u64 = 0x5eed_0b1a;
const RESTARTS: usize = 2;

pub fn minimize_over_subspace(
    space: &Space,
    x: &[C64],
    basis: &[Vector],
    tol: f64,
) -> Result<MinResult<Vector>> {
    let n = space.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    scalar::check_field(x, space.field)?;
    for b in basis {
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        scalar::check_field(b, space.field)?;
    }
    if !basis.is_empty() && linalg::rank(basis, 1e-12) < basis.len() {
        return Err(Error::DependentBasis);
    }
    let k = basis.len();
    let zero_coeffs = vec![scalar::ZERO; k];
    let x_norm = space.norm(x)?;
    if k == 0 || x_norm == 0.0 {
        return Ok(MinResult {
            argmin: zero_coeffs,
            value: x_norm,
            iterations: 0,
            converged: true,
            method: if k == 0 { Method::ExactLp } else { Method::LeastSquares },
        });
    }

    let all_real = space.field == Field::Real;
    match &space.norm {
        NormSpec::PNorm { p, .. } if all_real && (p.is_one() || *p == PExponent::Infinity) => {
            lp_route(space, x, basis)
        }
        NormSpec::MaxAbsFunctionals { .. } | NormSpec::PolytopeVertices { .. } if all_real => {
            lp_route(space, x, basis)
        }
        NormSpec::PNorm { p, dim } if p.is_two() => {
            least_squares(space, x, basis, &Matrix::identity(*dim))
        }
        NormSpec::Quadratic { gram } => least_squares(space, x, basis, gram),
        NormSpec::PNorm { p: PExponent::Finite(p), .. } if *p > 1.0 => {
            smooth_descent(space, x, basis, *p, x_norm, tol)
        }
        _ => pattern_search(space, x, basis, x_norm, tol),
    }
}

fn combine(x: &[C64], basis: &[Vector], c: &[C64]) -> Vector {
    let mut v = x.to_vec();
    for (b, cj) in basis.iter().zip(c) {
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += cj * bi;
        }
    }
    v
}

fn lp_route(space: &Space, x: &[C64], basis: &[Vector]) -> Result<MinResult<Vector>> {
    let n = space.dim();
    let k = basis.len();
    let xr: Vec<f64> = x.iter().map(|z| z.re).collect();
    let br: Vec<Vec<f64>> = basis.iter().map(|b| b.iter().map(|z| z.re).collect()).collect();
    // (B c)_i coefficient row for coordinate i
    let bc_row = |i: usize| -> Vec<f64> { br.iter().map(|b| b[i]).collect() };

    let rows_of = |rows: &[Vec<f64>]| -> LinearProgram {
        // vars: c (k, free), t
        let mut obj = vec![0.0; k + 1];
        obj[k] = 1.0;
        let mut lp = LinearProgram::new(obj);
        for j in 0..k {
            lp.set_free(j);
        }
        for a in rows {
            let ab: Vec<f64> = br.iter().map(|b| a.iter().zip(b).map(|(u, v)| u * v).sum()).collect();
            let ax: f64 = a.iter().zip(&xr).map(|(u, v)| u * v).sum();
            let mut up = ab.clone();
            up.push(-1.0);
            lp.add(up, Relation::Le, -ax);
            let mut down: Vec<f64> = ab.iter().map(|v| -v).collect();
            down.push(-1.0);
            lp.add(down, Relation::Le, ax);
        }
        lp
    };

    let lp = match &space.norm {
        NormSpec::PNorm { p, .. } if p.is_one() => {
            // vars: c (k, free), s (n)
            let mut obj = vec![0.0; k];
            obj.extend(std::iter::repeat_n(1.0, n));
            let mut lp = LinearProgram::new(obj);
            for j in 0..k {
                lp.set_free(j);
            }
            for i in 0..n {
                let row = bc_row(i);
                let mut up = row.clone();
                let mut down: Vec<f64> = row.iter().map(|v| -v).collect();
                up.extend((0..n).map(|l| if l == i { -1.0 } else { 0.0 }));
                down.extend((0..n).map(|l| if l == i { -1.0 } else { 0.0 }));
                lp.add(up, Relation::Le, -xr[i]);
                lp.add(down, Relation::Le, xr[i]);
            }
            lp
        }
        NormSpec::PNorm { .. } => {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect();
            rows_of(&rows)
        }
        NormSpec::MaxAbsFunctionals { rows } => rows_of(rows),
        NormSpec::PolytopeVertices { vertices } => {
            // vars: c (k, free), mu (m); sum mu_l v_l - B c = x
            let m = vertices.len();
            let mut obj = vec![0.0; k];
            obj.extend(std::iter::repeat_n(1.0, m));
            let mut lp = LinearProgram::new(obj);
            for j in 0..k {
                lp.set_free(j);
            }
            for i in 0..n {
                let mut row: Vec<f64> = bc_row(i).iter().map(|v| -v).collect();
                row.extend(vertices.iter().map(|v| v[i]));
                lp.add(row, Relation::Eq, xr[i]);
            }
            lp
        }
        _ => unreachable!("lp_route called for a non-polyhedral norm"),
    };

    let sol = lp_solve(&lp, TOL_LP)?;
    let coeffs = scalar::real_vector(&sol.x[..k]);
    let value = space.norm.eval(&combine(x, basis, &coeffs))?;
    Ok(MinResult {
        argmin: coeffs,
        value,
        iterations: sol.pivots,
        converged: true,
        method: Method::ExactLp,
    })
}

fn least_squares(space: &Space, x: &[C64], basis: &[Vector], gram: &Matrix) -> Result<MinResult<Vector>> {
    // (B^H G B) c = -B^H G x
    let k = basis.len();
    let gb: Vec<Vector> = basis.iter().map(|b| gram.mul_vec(b)).collect();
    let gx = gram.mul_vec(x);
    let mut normal = Matrix::zeros(k, k);
    let mut rhs = vec![scalar::ZERO; k];
    for i in 0..k {
        for j in 0..k {
            normal[(i, j)] = scalar::inner(&basis[i], &gb[j]);
        }
        rhs[i] = -scalar::inner(&basis[i], &gx);
    }
    let coeffs = linalg::solve(&normal, &rhs).map_err(|_| Error::DependentBasis)?;
    let value = space.norm.eval(&combine(x, basis, &coeffs))?;
    Ok(MinResult {
        argmin: coeffs,
        value,
        iterations: 1,
        converged: true,
        method: Method::LeastSquares,
    })
}

fn smooth_descent(
    space: &Space,
    x: &[C64],
    basis: &[Vector],
    p: f64,
    x_norm: f64,
    tol: f64,
) -> Result<MinResult<Vector>> {
    let field = space.field;
    let k = basis.len();
    let xs = scalar::scale_real(x, 1.0 / x_norm);
    // derivative of v along each real parameter
    let dirs: Vec<Vector> = match field {
        Field::Real => basis.to_vec(),
        Field::Complex => basis
            .iter()
            .flat_map(|b| [b.clone(), scalar::scale(b, C64::new(0.0, 1.0))])
            .collect(),
    };
    let fg = |theta: &[f64]| -> (f64, Vec<f64>) {
        let c = scalar::from_real_params(theta, field);
        let v = combine(&xs, basis, &c);
        let mut f = 0.0;
        let mut w = Vec::with_capacity(v.len());
        for z in &v {
            let a = z.norm();
            f += a.powf(p);
            w.push(if a == 0.0 { 0.0 } else { p * a.powf(p - 2.0) });
        }
        let g = dirs
            .iter()
            .map(|d| {
                v.iter()
                    .zip(d)
                    .zip(&w)
                    .map(|((vi, di), wi)| wi * (vi.conj() * di).re)
                    .sum()
            })
            .collect();
        (f, g)
    };
    let start = vec![0.0; k * field.real_dim()];
    let out = bfgs_minimize(fg, start, tol * 1e-3, 2000);
    let coeffs = scalar::scale_real(&scalar::from_real_params(&out.x, field), x_norm);
    let value = space.norm.eval(&combine(x, basis, &coeffs))?;
    Ok(MinResult {
        argmin: coeffs,
        value,
        iterations: out.iterations,
        converged: out.converged,
        method: Method::SmoothDescent,
    })
}

fn pattern_search(
    space: &Space,
    x: &[C64],
    basis: &[Vector],
    x_norm: f64,
    tol: f64,
) -> Result<MinResult<Vector>> {
    let field = space.field;
    let k = basis.len();
    let min_b = basis
        .iter()
        .map(|b| space.norm.eval(b))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let radius = 2.0 * x_norm / min_b;
    let dim = k * field.real_dim();

    let objective = |theta: &[f64]| -> Result<f64> {
        let c = scalar::from_real_params(theta, field);
        space.norm.eval(&combine(x, basis, &c))
    };

    let mut starts = vec![vec![0.0; dim]];
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(RESTART_SEED);
    for _ in 0..RESTARTS {
        let g = crate::norm::gaussian_vector(&mut rng, dim, Field::Real);
        starts.push(g.iter().map(|z| 0.5 * radius * z.re / (dim as f64).sqrt()).collect());
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut iterations = 0;
    let mut converged = true;
    for (i, s) in starts.into_iter().enumerate() {
        let cfg = CompassConfig {
            initial_step: 0.25 * radius,
            min_step: tol * radius.max(1e-300) * 1e-2,
            max_evals: 20_000,
            random_dirs: 2,
            seed: RESTART_SEED + i as u64,
        };
        let out = compass_minimize(objective, s, cfg)?;
        iterations += out.iterations;
        converged &= out.converged;
        if best.as_ref().is_none_or(|b| out.value < b.1) {
            best = Some((out.x, out.value));
        }
    }
    let (theta, value) = best.expect("at least one start");
    Ok(MinResult {
        argmin: scalar::from_real_params(&theta, field),
        value,
        iterations,
        converged,
        method: Method::PatternSearch,
    })
}
