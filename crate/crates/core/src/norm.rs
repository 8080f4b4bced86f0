//! Closed-form norms on F^n, their structural duals and unit-sphere sampling.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::optim::lp::{lp_solve, LinearProgram, LpError, Relation};
use crate::scalar::{self, Field, Matrix, Vector, C64};

/// Exponent of an l^p norm; `Infinity` is a distinguished value so that the
/// conjugate pair (1, inf) is handled symbolically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    pub fn conjugate(self) -> PExponent {
        match self {
            PExponent::Infinity => PExponent::Finite(1.0),
            PExponent::Finite(p) if p == 1.0 => PExponent::Infinity,
            PExponent::Finite(p) => PExponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            PExponent::Finite(p) if !(p >= 1.0) || !p.is_finite() => Err(Error::InvalidExponent(p)),
            _ => Ok(()),
        }
    }

    pub fn is_one(self) -> bool {
        self == PExponent::Finite(1.0)
    }

    pub fn is_two(self) -> bool {
        self == PExponent::Finite(2.0)
    }

    /// `(sum_i |a_i|^p)^(1/p)` of non-negative reals, overflow-safe.
    pub fn combine(self, parts: impl IntoIterator<Item = f64>) -> f64 {
        let parts: Vec<f64> = parts.into_iter().collect();
        let m = parts.iter().copied().fold(0.0, f64::max);
        match self {
            PExponent::Infinity => m,
            _ if m == 0.0 => 0.0,
            PExponent::Finite(p) if p == 1.0 => parts.iter().sum(),
            PExponent::Finite(p) if p == 2.0 => {
                m * parts.iter().map(|a| (a / m) * (a / m)).sum::<f64>().sqrt()
            }
            PExponent::Finite(p) => m * parts.iter().map(|a| (a / m).powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(p) => write!(f, "{p}"),
            PExponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for PExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PExponent::Finite(p) => s.serialize_f64(*p),
            PExponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(PExponent::Finite(p)),
            Raw::Text(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "infinity" | "∞" => Ok(PExponent::Infinity),
                other => other
                    .parse::<f64>()
                    .map(PExponent::Finite)
                    .map_err(|_| serde::de::Error::custom(format!("bad exponent `{s}`"))),
            },
        }
    }
}

/// A norm on F^n given in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum NormSpec {
    #[serde(rename = "p")]
    PNorm { dim: usize, p: PExponent },
    /// `max_i |<a_i, x>|`
    #[serde(rename = "max_abs")]
    MaxAbsFunctionals { rows: Vec<Vec<f64>> },
    /// Gauge of the convex hull of a centrally symmetric point set.
    #[serde(rename = "polytope")]
    PolytopeVertices { vertices: Vec<Vec<f64>> },
    /// `|| (||x_1||_1, ..., ||x_k||_k) ||_outer_p` over consecutive blocks.
    #[serde(rename = "direct_sum")]
    DirectSum { outer_p: PExponent, parts: Vec<NormSpec> },
    /// Trace norm of the row-major `n x n` matrix.
    #[serde(rename = "schatten1")]
    SchattenOne { n: usize },
    /// Operator norm of the row-major `n x n` matrix.
    #[serde(rename = "schatten_inf")]
    SchattenInf { n: usize },
    /// `(x^H G x)^(1/2)` for a positive definite hermitian `G`.
    #[serde(rename = "quadratic")]
    Quadratic { gram: Matrix },
}

impl NormSpec {
    pub fn p(dim: usize, p: f64) -> NormSpec {
        NormSpec::PNorm { dim, p: PExponent::Finite(p) }
    }

    pub fn p_inf(dim: usize) -> NormSpec {
        NormSpec::PNorm { dim, p: PExponent::Infinity }
    }

    pub fn euclid(dim: usize) -> NormSpec {
        NormSpec::p(dim, 2.0)
    }

    /// `max{|y|+|z|, |x|+|z|/2}` on R^3, written as four absolute functionals.
    pub fn sz3() -> NormSpec {
        NormSpec::MaxAbsFunctionals {
            rows: vec![
                vec![0.0, 1.0, 1.0],
                vec![0.0, 1.0, -1.0],
                vec![1.0, 0.0, 0.5],
                vec![1.0, 0.0, -0.5],
            ],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            NormSpec::PNorm { dim, .. } => *dim,
            NormSpec::MaxAbsFunctionals { rows } => rows.first().map_or(0, Vec::len),
            NormSpec::PolytopeVertices { vertices } => vertices.first().map_or(0, Vec::len),
            NormSpec::DirectSum { parts, .. } => parts.iter().map(NormSpec::dim).sum(),
            NormSpec::SchattenOne { n } | NormSpec::SchattenInf { n } => n * n,
            NormSpec::Quadratic { gram } => gram.rows(),
        }
    }

    /// True for kinds whose unit ball is a polytope.
    pub fn is_polyhedral(&self) -> bool {
        match self {
            NormSpec::PNorm { p, .. } => p.is_one() || *p == PExponent::Infinity,
            NormSpec::MaxAbsFunctionals { .. } | NormSpec::PolytopeVertices { .. } => true,
            NormSpec::DirectSum { outer_p, parts } => {
                (outer_p.is_one() || *outer_p == PExponent::Infinity)
                    && parts.iter().all(NormSpec::is_polyhedral)
            }
            _ => false,
        }
    }

    /// Kinds that are only defined here for real vectors.
    pub fn requires_real(&self) -> bool {
        match self {
            NormSpec::MaxAbsFunctionals { .. } | NormSpec::PolytopeVertices { .. } => true,
            NormSpec::DirectSum { parts, .. } => parts.iter().any(NormSpec::requires_real),
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NormSpec::PNorm { dim, p } => {
                p.validate()?;
                if *dim == 0 {
                    return Err(Error::InvalidSpec("dimension must be >= 1".into()));
                }
            }
            NormSpec::MaxAbsFunctionals { rows } => {
                let n = check_point_set(rows, "max_abs rows")?;
                let vs: Vec<Vector> = rows.iter().map(|r| scalar::real_vector(r)).collect();
                if linalg::rank(&vs, 1e-12) < n {
                    return Err(Error::InvalidSpec("max_abs rows do not span the space".into()));
                }
            }
            NormSpec::PolytopeVertices { vertices } => {
                let n = check_point_set(vertices, "polytope vertices")?;
                let scale = vertices
                    .iter()
                    .flat_map(|v| v.iter().map(|x| x.abs()))
                    .fold(0.0, f64::max);
                for v in vertices {
                    let symmetric = vertices.iter().any(|w| {
                        v.iter().zip(w).all(|(a, b)| (a + b).abs() <= 1e-12 * scale)
                    });
                    if !symmetric {
                        return Err(Error::InvalidSpec(format!(
                            "polytope vertex set is not symmetric: -{v:?} missing"
                        )));
                    }
                }
                let vs: Vec<Vector> = vertices.iter().map(|r| scalar::real_vector(r)).collect();
                if linalg::rank(&vs, 1e-12) < n {
                    return Err(Error::InvalidSpec("polytope vertices do not span".into()));
                }
            }
            NormSpec::DirectSum { outer_p, parts } => {
                outer_p.validate()?;
                if parts.is_empty() {
                    return Err(Error::InvalidSpec("direct sum needs at least one part".into()));
                }
                for part in parts {
                    part.validate()?;
                }
            }
            NormSpec::SchattenOne { n } | NormSpec::SchattenInf { n } => {
                if *n == 0 {
                    return Err(Error::InvalidSpec("schatten order must be >= 1".into()));
                }
            }
            NormSpec::Quadratic { gram } => {
                if !gram.is_square() || !gram.all_finite() {
                    return Err(Error::InvalidSpec("gram matrix must be square and finite".into()));
                }
                let defect = hermitian_defect(gram);
                if defect > 1e-12 * gram.max_abs().max(1.0) {
                    return Err(Error::InvalidSpec("gram matrix is not hermitian".into()));
                }
                if !linalg::is_positive_definite(gram) {
                    return Err(Error::InvalidSpec("gram matrix is not positive definite".into()));
                }
            }
        }
        Ok(())
    }

    /// `||v||`.
    pub fn eval(&self, v: &[C64]) -> Result<f64> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        match self {
            NormSpec::PNorm { p, .. } => {
                p.validate()?;
                Ok(p.combine(v.iter().map(|z| z.norm())))
            }
            NormSpec::MaxAbsFunctionals { rows } => Ok(rows
                .iter()
                .map(|a| {
                    a.iter().zip(v).map(|(ai, x)| x * *ai).sum::<C64>().norm()
                })
                .fold(0.0, f64::max)),
            NormSpec::PolytopeVertices { vertices } => {
                if !scalar::is_real(v) {
                    return Err(Error::ComplexUnsupported("polytope gauges"));
                }
                let f: Vec<f64> = v.iter().map(|z| z.re).collect();
                gauge_lp(vertices, &f)
            }
            NormSpec::DirectSum { outer_p, parts } => {
                let mut offset = 0;
                let mut block = Vec::with_capacity(parts.len());
                for part in parts {
                    let d = part.dim();
                    block.push(part.eval(&v[offset..offset + d])?);
                    offset += d;
                }
                Ok(outer_p.combine(block))
            }
            NormSpec::SchattenOne { n } => {
                Ok(linalg::singular_values(&Matrix::from_flat(*n, v)).iter().sum())
            }
            NormSpec::SchattenInf { n } => {
                Ok(linalg::singular_values(&Matrix::from_flat(*n, v))[0])
            }
            NormSpec::Quadratic { gram } => Ok(gram.form(v, v).re.max(0.0).sqrt()),
        }
    }

    /// Structural dual with respect to the bilinear pairing `<f, x> = sum f_i x_i`.
    pub fn dual(&self) -> Result<NormSpec> {
        Ok(match self {
            NormSpec::PNorm { dim, p } => {
                p.validate()?;
                NormSpec::PNorm { dim: *dim, p: p.conjugate() }
            }
            NormSpec::MaxAbsFunctionals { rows } => {
                let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(2 * rows.len());
                for r in rows {
                    if !vertices.contains(r) {
                        vertices.push(r.clone());
                    }
                }
                for r in rows {
                    let neg: Vec<f64> = r.iter().map(|x| -x).collect();
                    if !vertices.contains(&neg) {
                        vertices.push(neg);
                    }
                }
                NormSpec::PolytopeVertices { vertices }
            }
            NormSpec::PolytopeVertices { vertices } => {
                let mut rows: Vec<Vec<f64>> = Vec::new();
                for v in vertices {
                    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
                    if !rows.contains(v) && !rows.contains(&neg) {
                        rows.push(v.clone());
                    }
                }
                NormSpec::MaxAbsFunctionals { rows }
            }
            NormSpec::DirectSum { outer_p, parts } => NormSpec::DirectSum {
                outer_p: outer_p.conjugate(),
                parts: parts.iter().map(NormSpec::dual).collect::<Result<_>>()?,
            },
            NormSpec::SchattenOne { n } => NormSpec::SchattenInf { n: *n },
            NormSpec::SchattenInf { n } => NormSpec::SchattenOne { n: *n },
            NormSpec::Quadratic { gram } => {
                // sup |f.x| over x^H G x <= 1 is (f^H conj(G^-1) f)^(1/2)
                NormSpec::Quadratic { gram: linalg::inverse(gram)?.conj() }
            }
        })
    }
}

fn check_point_set(points: &[Vec<f64>], what: &str) -> Result<usize> {
    let n = points.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(Error::InvalidSpec(format!("{what}: empty")));
    }
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::InvalidSpec(format!("{what}: ragged")));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidSpec(format!("{what}: non-finite entry")));
    }
    Ok(n)
}

pub(crate) fn hermitian_defect(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `min { t >= 0 : f in t * conv(points) }`, by linear programming over
/// convex weights.
pub fn gauge_lp(points: &[Vec<f64>], f: &[f64]) -> Result<f64> {
    let n = f.len();
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: points.first().map_or(0, Vec::len),
        });
    }
    if f.iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("gauge argument".into()));
    }
    let m = points.len();
    let mut lp = LinearProgram::new(vec![1.0; m]);
    for i in 0..n {
        lp.add(points.iter().map(|p| p[i]).collect(), Relation::Eq, f[i]);
    }
    match lp_solve(&lp, 1e-10) {
        Ok(s) => Ok(s.objective.max(0.0)),
        Err(LpError::Infeasible) => {
            Err(Error::InvalidSpec("gauge points do not span the argument".into()))
        }
        Err(e) => Err(e.into()),
    }
}

/// Vertices of the real unit ball for polytope-ball kinds (`None` otherwise
/// or when enumeration would be too large).
pub fn ball_vertices(norm: &NormSpec) -> Option<Vec<Vector>> {
    match norm {
        NormSpec::PNorm { dim, p } if p.is_one() => Some(
            (0..*dim)
                .flat_map(|i| {
                    let e = scalar::basis_vector(*dim, i);
                    [scalar::scale_real(&e, -1.0), e]
                })
                .collect(),
        ),
        NormSpec::PNorm { dim, p: PExponent::Infinity } if *dim <= 12 => Some(
            (0..1usize << dim)
                .map(|mask| {
                    (0..*dim)
                        .map(|i| C64::new(if mask >> i & 1 == 1 { -1.0 } else { 1.0 }, 0.0))
                        .collect()
                })
                .collect(),
        ),
        NormSpec::PolytopeVertices { vertices } => {
            Some(vertices.iter().map(|v| scalar::real_vector(v)).collect())
        }
        NormSpec::MaxAbsFunctionals { rows } => max_abs_vertices(rows),
        _ => None,
    }
}

const VERTEX_ENUM_LIMIT: u128 = 200_000;

/// Vertices of `{x : |<a_i, x>| <= 1}`: every choice of `n` independent rows
/// and signs, kept when feasible.
fn max_abs_vertices(rows: &[Vec<f64>]) -> Option<Vec<Vector>> {
    let n = rows.first()?.len();
    let m = rows.len();
    let combos = (0..n as u128).fold(1u128, |acc, i| acc * (m as u128 - i) / (i + 1));
    if n > m || combos.saturating_mul(1 << (n - 1)) > VERTEX_ENUM_LIMIT {
        return None;
    }
    let scale = rows.iter().flatten().fold(0.0_f64, |a, x| a.max(x.abs()));
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let sub: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].clone()).collect();
        if let Ok(mat) = Matrix::from_real_rows(&sub) {
            for mask in 0..1usize << (n - 1) {
                let rhs: Vector = (0..n)
                    .map(|i| C64::new(if i > 0 && mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 }, 0.0))
                    .collect();
                let Ok(x) = linalg::solve(&mat, &rhs) else { break };
                let x: Vec<f64> = x.iter().map(|z| z.re).collect();
                let feasible = rows.iter().all(|r| {
                    r.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>().abs() <= 1.0 + 1e-9
                });
                if !feasible {
                    continue;
                }
                let tol = 1e-9 * (1.0 + x.iter().fold(0.0_f64, |a, v| a.max(v.abs())) * scale);
                for v in [x.clone(), x.iter().map(|v| -v).collect()] {
                    if !out.iter().any(|w| w.iter().zip(&v).all(|(a, b)| (a - b).abs() <= tol)) {
                        out.push(v);
                    }
                }
            }
        }
        // next combination
        let mut k = n;
        while k > 0 && idx[k - 1] == m - n + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for j in k..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Some(out.iter().map(|v| scalar::real_vector(v)).collect())
}

/// Dual norm evaluator. For real `max_abs` norms the primal ball vertices
/// are enumerated once and `||f||* = max_v |<f, v>|`, which avoids one LP
/// per evaluation; other kinds use the structural dual.
#[derive(Debug, Clone)]
pub struct DualNorm {
    spec: NormSpec,
    vertices: Option<Vec<Vector>>,
}

impl DualNorm {
    pub fn new(norm: &NormSpec) -> Result<Self> {
        let spec = norm.dual()?;
        let vertices = match norm {
            NormSpec::MaxAbsFunctionals { rows } => max_abs_vertices(rows),
            _ => None,
        };
        Ok(DualNorm { spec, vertices })
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    pub fn eval(&self, f: &[C64]) -> Result<f64> {
        match &self.vertices {
            Some(vs) => {
                if f.len() != self.spec.dim() {
                    return Err(Error::DimensionMismatch { expected: self.spec.dim(), found: f.len() });
                }
                if !scalar::is_real(f) {
                    return Err(Error::ComplexUnsupported("polyhedral norms"));
                }
                Ok(vs.iter().map(|v| scalar::pair(f, v).re.abs()).fold(0.0, f64::max))
            }
            None => self.spec.eval(f),
        }
    }
}

/// `(F^n, ||.||)`: a norm together with its scalar field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Space {
    pub norm: NormSpec,
    pub field: Field,
}

impl Space {
    pub fn new(norm: NormSpec, field: Field) -> Result<Self> {
        norm.validate()?;
        if field == Field::Complex && norm.requires_real() {
            return Err(Error::ComplexUnsupported("polyhedral norms"));
        }
        if field == Field::Real {
            if let NormSpec::Quadratic { gram } = &norm {
                if !gram.is_real() {
                    return Err(Error::InvalidSpec("complex gram matrix on a real space".into()));
                }
            }
        }
        Ok(Space { norm, field })
    }

    pub fn real(norm: NormSpec) -> Result<Self> {
        Space::new(norm, Field::Real)
    }

    pub fn dim(&self) -> usize {
        self.norm.dim()
    }

    pub fn norm(&self, v: &[C64]) -> Result<f64> {
        scalar::check_field(v, self.field)?;
        self.norm.eval(v)
    }

    pub fn dual(&self) -> Result<Space> {
        Ok(Space { norm: self.norm.dual()?, field: self.field })
    }

    /// `v / ||v||`; `None` for the zero vector.
    pub fn normalize(&self, v: &[C64]) -> Result<Option<Vector>> {
        let r = self.norm(v)?;
        if r == 0.0 {
            return Ok(None);
        }
        Ok(Some(scalar::scale_real(v, 1.0 / r)))
    }
}

/// Seeded stream of unit vectors: a Gaussian direction rescaled by its own
/// norm. The stream is prefix-stable, so `count = 10` yields the first ten
/// vectors of `count = 1000` with the same seed.
pub struct SphereSampler<'a> {
    space: &'a Space,
    rng: ChaCha8Rng,
}

impl<'a> SphereSampler<'a> {
    pub fn new(space: &'a Space, seed: u64) -> Self {
        SphereSampler { space, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_unit(&mut self) -> Result<Vector> {
        loop {
            let v = gaussian_vector(&mut self.rng, self.space.dim(), self.space.field);
            let r = self.space.norm.eval(&v)?;
            if r > 0.0 && r.is_finite() {
                return Ok(scalar::scale_real(&v, 1.0 / r));
            }
        }
    }
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, n: usize, field: Field) -> Vector {
    (0..n)
        .map(|_| match field {
            Field::Real => C64::new(rng.sample(StandardNormal), 0.0),
            Field::Complex => C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
        })
        .collect()
}

pub fn sample_sphere(space: &Space, count: usize, seed: u64) -> Result<Vec<Vector>> {
    let mut s = SphereSampler::new(space, seed);
    (0..count).map(|_| s.next_unit()).collect()
}

/// Deterministic probe directions: `e_i`, then `e_i + e_j` and `e_i - e_j`
/// for `i < j` (the pairs only while `n <= 6`).
pub fn spot_directions(n: usize) -> Vec<Vector> {
    let mut out: Vec<Vector> = (0..n).map(|i| scalar::basis_vector(n, i)).collect();
    if n <= 6 {
        for i in 0..n {
            for j in (i + 1)..n {
                for s in [1.0, -1.0] {
                    let mut v = vec![scalar::ZERO; n];
                    v[i] = scalar::ONE;
                    v[j] = C64::new(s, 0.0);
                    out.push(v);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::real_vector;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vertex_dual_matches_lp_dual() {
        let sz = NormSpec::sz3();
        let fast = DualNorm::new(&sz).unwrap();
        let slow = sz.dual().unwrap();
        let verts = ball_vertices(&sz).unwrap();
        assert!(verts.len() >= 6);
        for v in &verts {
            assert_abs_diff_eq!(sz.eval(v).unwrap(), 1.0, epsilon = 1e-12);
        }
        let s = Space::real(sz.clone()).unwrap();
        for f in sample_sphere(&s, 50, 3).unwrap() {
            assert_abs_diff_eq!(fast.eval(&f).unwrap(), slow.eval(&f).unwrap(), epsilon = 1e-9);
        }
        assert_eq!(fast.eval(&real_vector(&[0.0, 0.0, 1.0])).unwrap(), 1.0);
    }

    #[test]
    fn sz_spot_values() {
        let sz = NormSpec::sz3();
        assert_eq!(sz.eval(&real_vector(&[1.0, 1.0, 0.0])).unwrap(), 1.0);
        assert_eq!(sz.eval(&real_vector(&[0.0, 1.0, 1.0])).unwrap(), 2.0);
        assert_eq!(NormSpec::p(2, 1.0).eval(&real_vector(&[2.0, 1.0])).unwrap(), 3.0);
    }

    #[test]
    fn eval_errors() {
        let e = NormSpec::p(2, 1.0).eval(&real_vector(&[1.0]));
        assert_eq!(e, Err(Error::DimensionMismatch { expected: 2, found: 1 }));
        let bad = NormSpec::p(2, 0.5);
        assert_eq!(bad.eval(&real_vector(&[1.0, 1.0])), Err(Error::InvalidExponent(0.5)));
        assert!(bad.validate().is_err());
    }

    #[test]
    fn structural_duals() {
        assert_eq!(NormSpec::p(4, 1.5).dual().unwrap(), NormSpec::p(4, 3.0));
        assert_eq!(NormSpec::p(2, 1.0).dual().unwrap(), NormSpec::p_inf(2));
        assert_eq!(NormSpec::p_inf(2).dual().unwrap(), NormSpec::p(2, 1.0));
        assert_eq!(
            NormSpec::SchattenOne { n: 3 }.dual().unwrap(),
            NormSpec::SchattenInf { n: 3 }
        );
        let sz = NormSpec::sz3();
        let d = sz.dual().unwrap();
        match &d {
            NormSpec::PolytopeVertices { vertices } => assert_eq!(vertices.len(), 8),
            other => panic!("unexpected dual {other:?}"),
        }
        assert_eq!(d.dual().unwrap(), sz);
    }

    #[test]
    fn gauge_examples() {
        let l1 = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        assert_abs_diff_eq!(gauge_lp(&l1, &[0.5, 0.5]).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(gauge_lp(&l1, &[0.0, 0.0]).unwrap(), 0.0);
        let NormSpec::PolytopeVertices { vertices } = NormSpec::sz3().dual().unwrap()
        else {
            unreachable!()
        };
        // (0,0,1) = (0,1,1)/2 + (0,-1,1)/2
        assert_abs_diff_eq!(gauge_lp(&vertices, &[0.0, 0.0, 1.0]).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn validation_rejects_bad_sets() {
        let asym = NormSpec::PolytopeVertices { vertices: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
        assert!(asym.validate().is_err());
        let flat = NormSpec::MaxAbsFunctionals { rows: vec![vec![1.0, 1.0], vec![2.0, 2.0]] };
        assert!(flat.validate().is_err());
        let notpd = NormSpec::Quadratic { gram: Matrix::diag_real(&[1.0, -1.0]) };
        assert!(notpd.validate().is_err());
        assert!(Space::new(NormSpec::sz3(), Field::Complex).is_err());
    }

    #[test]
    fn json_encoding() {
        let s: NormSpec = serde_json::from_str(r#"{"kind":"p","dim":3,"p":2}"#).unwrap();
        assert_eq!(s, NormSpec::euclid(3));
        let s: NormSpec = serde_json::from_str(r#"{"kind":"p","dim":2,"p":"inf"}"#).unwrap();
        assert_eq!(s, NormSpec::p_inf(2));
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"kind":"p","dim":2,"p":"inf"}"#);
        let s: NormSpec =
            serde_json::from_str(r#"{"kind":"max_abs","rows":[[0,1,1],[1,0,0.5]]}"#).unwrap();
        assert_eq!(s.dim(), 3);
        let s: NormSpec = serde_json::from_str(
            r#"{"kind":"direct_sum","outer_p":2,"parts":[{"kind":"p","dim":2,"p":4},{"kind":"schatten1","n":2}]}"#,
        )
        .unwrap();
        assert_eq!(s.dim(), 6);
        assert!(serde_json::from_str::<NormSpec>(r#"{"kind":"p","dim":3,"p":2,"q":1}"#).is_err());
        assert!(serde_json::from_str::<NormSpec>(r#"{"kind":"lp","dim":3}"#).is_err());
    }

    #[test]
    fn sampler_is_deterministic_and_prefix_stable() {
        let space = Space::real(NormSpec::euclid(2)).unwrap();
        let a = sample_sphere(&space, 4, 7).unwrap();
        let b = sample_sphere(&space, 4, 7).unwrap();
        assert_eq!(a, b);
        let long = sample_sphere(&space, 40, 7).unwrap();
        assert_eq!(&long[..4], &a[..]);
        let sz = Space::real(NormSpec::sz3()).unwrap();
        let v = sample_sphere(&sz, 1, 99).unwrap();
        assert!((sz.norm(&v[0]).unwrap() - 1.0).abs() <= 1e-12);
    }
}
