//! Candidate maps `Φ: X -> X*` stored as the matrix of the sesquilinear form
//! `<Φ(x), y> = sum_ij conj(x_i) A_ij y_j`, with the checks and verifiers
//! that decide whether such a map forces an inner-product structure.

mod checks;
mod report;
mod verify;

pub use checks::{
    check_bj_condition, check_isometry, coercivity, completion_check, operator_bounds,
    parallelogram_defect, BjCondition, BjFailure, CompletionOutcome, DefectPair, IsometryOutcome,
    OperatorBounds, ParallelogramOutcome, SpotCheck,
};
pub use report::{Check, Outcome, Status, Theorem, Tolerances, VerificationReport};
pub use verify::{verify_theorem1, verify_theorem2, verify_theorem3, verify_weaker_topology, VerifyConfig};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::norm::Space;
use crate::scalar::{self, Field, Matrix, Vector, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSpec {
    pub field: Field,
    pub matrix: Matrix,
}

/// Sign structure of a hermitian form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    /// `<Φ(w), w> = 0` with `w != 0`.
    Indefinite {
        #[serde(with = "scalar::vector_serde")]
        witness: Vector,
    },
    /// `w` spans part of the null space.
    Degenerate {
        #[serde(with = "scalar::vector_serde")]
        witness: Vector,
    },
}

impl Definiteness {
    pub fn is_definite(&self) -> bool {
        matches!(self, Definiteness::PositiveDefinite | Definiteness::NegativeDefinite)
    }

    pub fn witness(&self) -> Option<&Vector> {
        match self {
            Definiteness::Indefinite { witness } | Definiteness::Degenerate { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Definiteness::PositiveDefinite => "positive definite",
            Definiteness::NegativeDefinite => "negative definite",
            Definiteness::Indefinite { .. } => "indefinite",
            Definiteness::Degenerate { .. } => "degenerate",
        }
    }
}

/// `(x, y) = s <Φ(x), y>` with the sign `s` making it positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedForm {
    pub matrix: Matrix,
    pub sign: i8,
}

impl InducedForm {
    pub fn form(&self, x: &[C64], y: &[C64]) -> C64 {
        self.matrix.form(x, y) * f64::from(self.sign)
    }

    pub fn norm_sq(&self, x: &[C64]) -> f64 {
        self.form(x, x).re.max(0.0)
    }

    pub fn norm(&self, x: &[C64]) -> f64 {
        self.norm_sq(x).sqrt()
    }
}

/// Relative threshold under which an eigenvalue counts as zero.
const ZERO_EIGEN: f64 = 1e-12;
/// Default hermitian tolerance (relative to `max |A_ij|`).
pub const HERMITIAN_TOL: f64 = 1e-9;

impl EmbeddingSpec {
    pub fn new(field: Field, matrix: Matrix) -> Result<Self> {
        let e = EmbeddingSpec { field, matrix };
        e.validate()?;
        Ok(e)
    }

    pub fn identity(n: usize, field: Field) -> Self {
        EmbeddingSpec { field, matrix: Matrix::identity(n) }
    }

    /// Antidiagonal reversal `(x_1, ..., x_n) -> (x_n, ..., x_1)`.
    pub fn reversal(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, n - 1 - i)] = scalar::ONE;
        }
        EmbeddingSpec { field: Field::Real, matrix: m }
    }

    /// `[[0, I], [I, 0]]` on two blocks of size `k`.
    pub fn block_swap(k: usize) -> Self {
        let mut m = Matrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            m[(i, k + i)] = scalar::ONE;
            m[(k + i, i)] = scalar::ONE;
        }
        EmbeddingSpec { field: Field::Real, matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.matrix.is_square() || self.matrix.rows() == 0 {
            return Err(Error::InvalidEmbedding(format!(
                "matrix must be square and non-empty, got {}x{}",
                self.matrix.rows(),
                self.matrix.cols()
            )));
        }
        if !self.matrix.all_finite() {
            return Err(Error::InvalidEmbedding("non-finite entry".into()));
        }
        if self.field == Field::Real && !self.matrix.is_real() {
            return Err(Error::InvalidEmbedding("complex entry in a real embedding".into()));
        }
        Ok(())
    }

    /// Checks that the map acts on `space`.
    pub fn validate_for(&self, space: &Space) -> Result<()> {
        self.validate()?;
        if self.dim() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: self.dim() });
        }
        if self.field != space.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// `Φ(x)` as a covector for the bilinear pairing: `A^T conj(x)`.
    pub fn covector(&self, x: &[C64]) -> Vector {
        self.matrix.transpose().mul_vec(&scalar::conj(x))
    }

    /// `<Φ(x), y> = x^H A y`.
    pub fn form(&self, x: &[C64], y: &[C64]) -> C64 {
        self.matrix.form(x, y)
    }

    pub fn hermitian_defect(&self) -> f64 {
        crate::norm::hermitian_defect(&self.matrix)
    }

    /// `max |A_ij - conj(A_ji)| <= tol * max(1, max |A_ij|)`.
    pub fn check_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * self.matrix.max_abs().max(1.0)
    }

    /// `(A + A^H) / 2`.
    pub fn symmetrize(&self) -> EmbeddingSpec {
        EmbeddingSpec {
            field: self.field,
            matrix: self.matrix.add(&self.matrix.adjoint()).scaled(C64::new(0.5, 0.0)),
        }
    }

    /// Classifies the hermitian form by its spectrum.
    pub fn definiteness(&self) -> Result<Definiteness> {
        if !self.check_hermitian(HERMITIAN_TOL) {
            return Err(Error::NotHermitian(self.hermitian_defect()));
        }
        let h = self.symmetrize().matrix;
        let eig = linalg::hermitian_eigen(&h);
        let scale = eig.values.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        let zero = ZERO_EIGEN * scale;
        if let Some(k) = eig.values.iter().position(|v| v.abs() <= zero) {
            return Ok(Definiteness::Degenerate { witness: eig.vectors[k].clone() });
        }
        let lo = eig.values[0];
        let hi = eig.values[eig.values.len() - 1];
        if lo > 0.0 {
            return Ok(Definiteness::PositiveDefinite);
        }
        if hi < 0.0 {
            return Ok(Definiteness::NegativeDefinite);
        }
        // a coordinate vector with A_ii = 0 is an exact witness
        let n = self.dim();
        if let Some(i) = (0..n).find(|&i| h[(i, i)] == scalar::ZERO) {
            return Ok(Definiteness::Indefinite { witness: scalar::basis_vector(n, i) });
        }
        let u = scalar::scale_real(&eig.vectors[eig.values.len() - 1], 1.0 / hi.sqrt());
        let v = scalar::scale_real(&eig.vectors[0], 1.0 / (-lo).sqrt());
        Ok(Definiteness::Indefinite { witness: scalar::add(&u, &v) })
    }

    /// Basis of `{y : <Φ(x), y> = 0}`, pivoting on the largest covector entry.
    pub fn functional_kernel(&self, x: &[C64]) -> Result<Vec<Vector>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        let c = self.covector(x);
        let (p, cp) = c
            .iter()
            .enumerate()
            .fold((0, 0.0_f64), |(bi, bv), (i, z)| if z.norm() > bv { (i, z.norm()) } else { (bi, bv) });
        let scale = self.matrix.max_abs() * scalar::max_modulus(x);
        if cp == 0.0 || cp <= 1e-14 * scale {
            return Err(Error::DegenerateFunctional);
        }
        Ok((0..n)
            .filter(|&j| j != p)
            .map(|j| {
                let mut v = vec![scalar::ZERO; n];
                v[j] = scalar::ONE;
                v[p] = -c[j] / c[p];
                v
            })
            .collect())
    }

    /// The inner product of the theorems; indefinite or degenerate forms are
    /// rejected with their witness.
    pub fn induced_form(&self) -> Result<InducedForm> {
        let sign = match self.definiteness()? {
            Definiteness::PositiveDefinite => 1,
            Definiteness::NegativeDefinite => -1,
            Definiteness::Indefinite { witness } => return Err(Error::Indefinite { witness }),
            Definiteness::Degenerate { witness } => return Err(Error::Degenerate { witness }),
        };
        Ok(InducedForm { matrix: self.symmetrize().matrix, sign })
    }

    /// `sigma_max / sigma_min`; infinite when singular.
    pub fn condition_number(&self) -> f64 {
        let s = linalg::singular_values(&self.matrix);
        let (hi, lo) = (s[0], s[s.len() - 1]);
        if lo <= ZERO_EIGEN * hi.max(1.0) {
            f64::INFINITY
        } else {
            hi / lo
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::real_vector;
    use approx::assert_abs_diff_eq;

    fn real(rows: &[Vec<f64>]) -> EmbeddingSpec {
        EmbeddingSpec::new(Field::Real, Matrix::from_real_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn hermitian_examples() {
        assert!(EmbeddingSpec::identity(3, Field::Real).check_hermitian(1e-12));
        assert!(!real(&[vec![0.0, 1.0], vec![0.0, 0.0]]).check_hermitian(1e-12));
        assert!(EmbeddingSpec::reversal(3).check_hermitian(1e-12));
    }

    #[test]
    fn definiteness_examples() {
        assert_eq!(EmbeddingSpec::identity(2, Field::Real).definiteness().unwrap(), Definiteness::PositiveDefinite);
        let neg = real(&[vec![-1.0, 0.0], vec![0.0, -1.0]]);
        assert_eq!(neg.definiteness().unwrap(), Definiteness::NegativeDefinite);

        let sz = EmbeddingSpec::reversal(3);
        let d = sz.definiteness().unwrap();
        let w = d.witness().unwrap();
        assert_eq!(w, &scalar::basis_vector(3, 0));
        assert_eq!(sz.form(w, w), scalar::ZERO);

        let deg = real(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let Definiteness::Degenerate { witness } = deg.definiteness().unwrap() else { panic!() };
        assert!(scalar::euclid_norm(&deg.matrix.mul_vec(&witness)) < 1e-12);

        assert!(real(&[vec![0.0, 1.0], vec![0.0, 0.0]]).definiteness().is_err());
    }

    #[test]
    fn eigen_formula_witness_when_no_zero_diagonal() {
        let a = real(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        let Definiteness::Indefinite { witness } = a.definiteness().unwrap() else { panic!() };
        assert!(a.form(&witness, &witness).norm() <= 1e-9);
        assert!(scalar::euclid_norm(&witness) >= 1e-6);
    }

    #[test]
    fn kernel_examples() {
        let id = EmbeddingSpec::identity(3, Field::Real);
        let k = id.functional_kernel(&scalar::basis_vector(3, 0)).unwrap();
        assert_eq!(k, vec![scalar::basis_vector(3, 1), scalar::basis_vector(3, 2)]);

        let sz = EmbeddingSpec::reversal(3);
        let e1 = scalar::basis_vector(3, 0);
        assert_eq!(sz.covector(&e1), real_vector(&[0.0, 0.0, 1.0]));
        let k = sz.functional_kernel(&e1).unwrap();
        assert_eq!(k, vec![scalar::basis_vector(3, 0), scalar::basis_vector(3, 1)]);

        assert_eq!(id.functional_kernel(&real_vector(&[0.0, 0.0, 0.0])), Err(Error::DegenerateFunctional));
    }

    #[test]
    fn kernel_annihilates_complex_covector() {
        let m = Matrix::from_rows(&[
            vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ])
        .unwrap();
        let e = EmbeddingSpec::new(Field::Complex, m).unwrap();
        let x = vec![C64::new(1.0, 1.0), C64::new(0.5, -2.0)];
        for v in e.functional_kernel(&x).unwrap() {
            assert!(e.form(&x, &v).norm() < 1e-12);
            assert!(scalar::pair(&e.covector(&x), &v).norm() < 1e-12);
        }
    }

    #[test]
    fn induced_form_examples() {
        let f = EmbeddingSpec::identity(2, Field::Real).induced_form().unwrap();
        assert_eq!(f.sign, 1);
        assert_abs_diff_eq!(f.norm(&real_vector(&[3.0, 4.0])), 5.0, epsilon = 1e-12);

        let f = real(&[vec![-2.0, 0.0], vec![0.0, -2.0]]).induced_form().unwrap();
        assert_eq!(f.sign, -1);
        assert_abs_diff_eq!(f.norm_sq(&real_vector(&[1.0, 1.0])), 4.0, epsilon = 1e-12);

        let e = EmbeddingSpec::reversal(3).induced_form().unwrap_err();
        assert_eq!(e, Error::Indefinite { witness: scalar::basis_vector(3, 0) });

        // one real dimension: the sign is that of the single entry
        let f = real(&[vec![-3.0]]).induced_form().unwrap();
        assert_eq!(f.sign, -1);
    }

    #[test]
    fn symmetrize_example() {
        let a = real(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        let s = a.symmetrize();
        assert_eq!(s.matrix, Matrix::from_real_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap());
        assert!(s.check_hermitian(0.0));
    }

    #[test]
    fn json_shape() {
        let e: EmbeddingSpec =
            serde_json::from_str(r#"{"field":"real","matrix":[[0,0,1],[0,1,0],[1,0,0]]}"#).unwrap();
        assert_eq!(e, EmbeddingSpec::reversal(3));
        assert!(serde_json::from_str::<EmbeddingSpec>(r#"{"field":"real","matrix":[[1]],"x":1}"#).is_err());
        let c: EmbeddingSpec = serde_json::from_str(r#"{"field":"complex","matrix":[[1,[0,1]],[[0,-1],1]]}"#).unwrap();
        assert!(c.check_hermitian(0.0));
    }
}
