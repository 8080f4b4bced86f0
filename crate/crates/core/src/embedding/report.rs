use serde::{Deserialize, Serialize};

use crate::scalar::{self, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Direct evaluations and certified solvers.
    pub exact: f64,
    /// Quantities that depend on sampling or uncertified search.
    pub sampled: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { exact: 1e-9, sampled: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// Computed but not asserted (a hypothesis failed).
    Info,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "scalar::opt_vector_serde")]
    pub witness: Option<Vector>,
    /// Second vector for pair witnesses.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "scalar::opt_vector_serde")]
    pub witness2: Option<Vector>,
    pub detail: String,
    /// Verdict rests on a finite sample of the sphere.
    pub sampled: bool,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub samples: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl Check {
    pub fn new(name: &str, status: Status, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            status,
            value: None,
            witness: None,
            witness2: None,
            detail: detail.into(),
            sampled: false,
            samples: 0,
        }
    }

    pub fn pass_if(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check::new(name, if ok { Status::Pass } else { Status::Fail }, detail)
    }

    /// Non-finite values are dropped so the JSON stays standard.
    pub fn value(mut self, v: f64) -> Self {
        self.value = v.is_finite().then_some(v);
        self
    }

    pub fn witness(mut self, w: Vector) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn witness_pair(mut self, x: Vector, y: Vector) -> Self {
        self.witness = Some(x);
        self.witness2 = Some(y);
        self
    }

    pub fn sampled(mut self, samples: usize) -> Self {
        self.sampled = true;
        self.samples = samples;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Theorem1,
    Theorem2,
    Theorem3,
    WeakerTopology,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Hypotheses and conclusions all pass.
    Holds,
    /// Hypotheses pass but a conclusion fails.
    Violated,
    /// Some hypothesis fails; conclusions are informational.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub outcome: Outcome,
    pub hypotheses: Vec<Check>,
    pub conclusions: Vec<Check>,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: Tolerances,
}

impl VerificationReport {
    /// Assembles the report; conclusions are demoted to `Info` when a
    /// hypothesis fails.
    pub(crate) fn assemble(
        theorem: Theorem,
        hypotheses: Vec<Check>,
        mut conclusions: Vec<Check>,
        seed: u64,
        samples: usize,
        tolerances: Tolerances,
    ) -> Self {
        let applicable = hypotheses.iter().all(|c| !c.failed());
        let outcome = if !applicable {
            for c in conclusions.iter_mut() {
                if matches!(c.status, Status::Pass | Status::Fail) {
                    c.status = Status::Info;
                }
            }
            Outcome::NotApplicable
        } else if conclusions.iter().any(Check::failed) {
            Outcome::Violated
        } else {
            Outcome::Holds
        };
        VerificationReport { theorem, outcome, hypotheses, conclusions, seed, samples, tolerances }
    }

    pub fn hypothesis(&self, name: &str) -> Option<&Check> {
        self.hypotheses.iter().find(|c| c.name == name)
    }

    pub fn conclusion(&self, name: &str) -> Option<&Check> {
        self.conclusions.iter().find(|c| c.name == name)
    }
}
