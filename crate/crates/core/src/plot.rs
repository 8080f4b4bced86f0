//! Static SVG of a planar unit ball, its dual ball and BJ fans.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::norm::{DualNorm, Space};
use crate::orthogonality::bj_orthogonal;
use crate::scalar::{self, Field, Vector};

const SIZE: f64 = 480.0;
const BOUNDARY_STEPS: usize = 360;
const FAN_POINTS: usize = 8;
const FAN_DIRECTIONS: usize = 120;
const FAN_LEN: f64 = 0.35;

fn unit(theta: f64) -> Vector {
    scalar::real_vector(&[theta.cos(), theta.sin()])
}

fn boundary<F: Fn(&[scalar::C64]) -> Result<f64>>(norm: F) -> Result<Vec<(f64, f64)>> {
    (0..BOUNDARY_STEPS)
        .map(|k| {
            let u = unit(std::f64::consts::TAU * k as f64 / BOUNDARY_STEPS as f64);
            let r = norm(&u)?;
            Ok((u[0].re / r, u[1].re / r))
        })
        .collect()
}

/// For each of a few points `x` on the unit sphere, the segments
/// `x + s y` (|s| <= FAN_LEN) over sampled unit directions `y` with `x ⊥ y`.
pub fn bj_fans(space: &Space, tol: f64) -> Result<Vec<((f64, f64), Vec<(f64, f64)>)>> {
    let mut fans = Vec::with_capacity(FAN_POINTS);
    for i in 0..FAN_POINTS {
        let theta = std::f64::consts::TAU * i as f64 / FAN_POINTS as f64;
        let x = space.normalize(&unit(theta))?.ok_or_else(|| Error::NonFinite("plot".into()))?;
        let mut dirs = Vec::new();
        for k in 0..FAN_DIRECTIONS {
            let y = unit(std::f64::consts::PI * k as f64 / FAN_DIRECTIONS as f64);
            if bj_orthogonal(space, &x, &y, tol)?.orthogonal {
                let ny = space.norm(&y)?;
                dirs.push((y[0].re / ny, y[1].re / ny));
            }
        }
        fans.push(((x[0].re, x[1].re), dirs));
    }
    Ok(fans)
}

fn polygon(out: &mut String, pts: &[(f64, f64)], map: &impl Fn(f64, f64) -> (f64, f64), style: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&(a, b)| {
            let (u, v) = map(a, b);
            format!("{u:.2},{v:.2}")
        })
        .collect();
    let _ = writeln!(out, r#"<polygon points="{}" {style}/>"#, coords.join(" "));
}

/// Renders the unit ball (blue), dual ball (red, dashed) and BJ fans
/// (grey) of a real planar space.
pub fn render_svg(space: &Space, tol: f64) -> Result<String> {
    if space.dim() != 2 || space.field != Field::Real {
        return Err(Error::InvalidSpec("plot needs a real space of dimension 2".into()));
    }
    let dual = DualNorm::new(&space.norm)?;
    let ball = boundary(|v| space.norm(v))?;
    let dual_ball = boundary(|v| dual.eval(v))?;
    let fans = bj_fans(space, tol)?;
    let extent = ball
        .iter()
        .chain(&dual_ball)
        .map(|&(a, b)| a.abs().max(b.abs()))
        .fold(1.0 + FAN_LEN, f64::max);
    let scale = 0.45 * SIZE / extent;
    let map = |a: f64, b: f64| (SIZE / 2.0 + scale * a, SIZE / 2.0 - scale * b);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (c, _) = map(0.0, 0.0);
    let _ = writeln!(out, r##"<line x1="0" y1="{c}" x2="{SIZE}" y2="{c}" stroke="#ccc"/>"##);
    let _ = writeln!(out, r##"<line x1="{c}" y1="0" x2="{c}" y2="{SIZE}" stroke="#ccc"/>"##);
    let _ = writeln!(out, r#"<g id="bj-fans" stroke="grey" stroke-width="0.6" opacity="0.6">"#);
    for ((x0, x1), dirs) in &fans {
        for (d0, d1) in dirs {
            let (a0, a1) = map(x0 - FAN_LEN * d0, x1 - FAN_LEN * d1);
            let (b0, b1) = map(x0 + FAN_LEN * d0, x1 + FAN_LEN * d1);
            let _ = writeln!(out, r#"<line x1="{a0:.2}" y1="{a1:.2}" x2="{b0:.2}" y2="{b1:.2}"/>"#);
        }
        let (p0, p1) = map(*x0, *x1);
        let _ = writeln!(out, r#"<circle cx="{p0:.2}" cy="{p1:.2}" r="2.5" fill="black"/>"#);
    }
    let _ = writeln!(out, "</g>");
    polygon(&mut out, &ball, &map, r#"id="unit-ball" fill="none" stroke="blue" stroke-width="1.5""#);
    polygon(
        &mut out,
        &dual_ball,
        &map,
        r#"id="dual-ball" fill="none" stroke="red" stroke-width="1.5" stroke-dasharray="5,3""#,
    );
    out.push_str("</svg>\n");
    Ok(out)
}
