// Copyright 2026 The qss-rs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Scenario files (`qss-scenario/1`): the MSP, access structure, active set,
//! secret and optional replay, tamper and attack sections.
//!
//! Participant indices are 1-based in the file and 0-based in memory.
//! Field elements are plain integers and are reduced mod `d`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, Fp, FpMatrix, FpVector, PrimeModulus};
use crate::protocol::{DealerFixture, Tamper};
use crate::qudit::UnitaryLabel;
use crate::span_program::{AccessStructure, Msp, ParticipantSet, SpanError};

pub const SCENARIO_SCHEMA: &str = "qss-scenario/1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema {0:?}, expected {SCENARIO_SCHEMA:?}")]
    Schema(String),
    #[error("participant index {0} must be >= 1")]
    ZeroIndex(usize),
    #[error("matrix has no rows")]
    EmptyMatrix,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error("tamper names P{0}, which is not in the active set")]
    TamperOutsideSet(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedSpec {
    pub rho: Vec<i64>,
    pub q0: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TamperSpec {
    /// The participant applies `U_{p+dp, q+dq}`.
    FakeUnitary {
        participant: usize,
        dp: i64,
        dq: i64,
    },
    /// The participant's pooled share is off by `delta` at recovery.
    ForgedShare { participant: usize, delta: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AttackSpec {
    InterceptResend {
        #[serde(default)]
        hop: usize,
        #[serde(default = "one")]
        qudits: u64,
        #[serde(default)]
        trials: Option<u64>,
    },
    EntangleMeasure {
        #[serde(default)]
        ancilla_dim: Option<usize>,
        #[serde(default)]
        attacks: Option<u64>,
    },
    Forgery {
        tamper: TamperSpec,
        #[serde(default)]
        trials: Option<u64>,
    },
    Collusion {
        coalition: Vec<usize>,
        #[serde(default)]
        sigma: Option<i64>,
        #[serde(default)]
        sigma_prime: Option<i64>,
    },
}

fn one() -> u64 {
    1
}

fn default_name() -> String {
    "unnamed".to_string()
}

/// The on-disk scenario document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: String,
    #[serde(default = "default_name")]
    pub name: String,
    pub d: u32,
    pub matrix: Vec<Vec<i64>>,
    /// Owner of each matrix row, 1-based.
    pub psi: Vec<usize>,
    /// Participant count; defaults to the largest index in `psi`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub participants: Option<usize>,
    /// Generating authorized sets, closed upward on load.
    pub gamma: Vec<Vec<usize>>,
    /// The authorized set that runs the protocol.
    pub set: Vec<usize>,
    /// Drawn from the seeded stream when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<i64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<FixedSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tamper: Option<TamperSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackSpec>,
}

/// A validated scenario, ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub msp: Msp,
    pub gamma: AccessStructure,
    pub set: ParticipantSet,
    pub secret: Option<Fp>,
    pub seed: u64,
    pub fixture: Option<DealerFixture>,
    pub tamper: Option<Tamper>,
    pub attack: Option<AttackSpec>,
}

fn to_set(labels: &[usize]) -> Result<ParticipantSet, ScenarioError> {
    if let Some(&z) = labels.iter().find(|&&l| l == 0) {
        return Err(ScenarioError::ZeroIndex(z));
    }
    if let Some(&big) = labels
        .iter()
        .find(|&&l| l > crate::span_program::MAX_PARTICIPANTS)
    {
        return Err(SpanError::UnknownParticipant {
            index: big - 1,
            n: crate::span_program::MAX_PARTICIPANTS,
        }
        .into());
    }
    Ok(ParticipantSet::from_members(labels.iter().map(|l| l - 1)))
}

fn zero_based(label: usize) -> Result<usize, ScenarioError> {
    label.checked_sub(1).ok_or(ScenarioError::ZeroIndex(label))
}

impl TamperSpec {
    pub fn resolve(&self, d: PrimeModulus) -> Result<Tamper, ScenarioError> {
        Ok(match *self {
            TamperSpec::FakeUnitary {
                participant,
                dp,
                dq,
            } => Tamper::FakeUnitary {
                participant: zero_based(participant)?,
                offset: UnitaryLabel::new(d.elem(dp), d.elem(dq)),
            },
            TamperSpec::ForgedShare { participant, delta } => Tamper::ForgedShare {
                participant: zero_based(participant)?,
                delta: d.elem(delta),
            },
        })
    }
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn validate(&self) -> Result<Scenario, ScenarioError> {
        if self.schema != SCENARIO_SCHEMA {
            return Err(ScenarioError::Schema(self.schema.clone()));
        }
        let d = PrimeModulus::new(self.d)?;
        let cols = self.matrix.first().ok_or(ScenarioError::EmptyMatrix)?.len();
        let matrix = FpMatrix::from_rows(d, cols, &self.matrix)?;
        let labels = self
            .psi
            .iter()
            .map(|&p| zero_based(p))
            .collect::<Result<Vec<_>, _>>()?;
        let n = self
            .participants
            .unwrap_or_else(|| self.psi.iter().copied().max().unwrap_or(0));
        let msp = Msp::new(matrix, labels, n)?;
        let gens = self
            .gamma
            .iter()
            .map(|g| to_set(g))
            .collect::<Result<Vec<_>, _>>()?;
        let gamma = AccessStructure::new(n, &gens)?;
        let set = to_set(&self.set)?;
        if !set.is_subset(ParticipantSet::full(n)) {
            return Err(SpanError::UnknownParticipant {
                index: set.members().last().unwrap_or(0),
                n,
            }
            .into());
        }
        let fixture = match &self.fixed {
            Some(f) => {
                if f.rho.len() != msp.width() {
                    return Err(FieldError::DimensionMismatch {
                        expected: msp.width(),
                        found: f.rho.len(),
                    }
                    .into());
                }
                Some(DealerFixture {
                    rho: FpVector::from_ints(d, &f.rho),
                    q0: d.elem(f.q0),
                })
            }
            None => None,
        };
        let tamper = self.tamper.as_ref().map(|t| t.resolve(d)).transpose()?;
        if let Some(t) = tamper {
            if !set.contains(t.participant()) {
                return Err(ScenarioError::TamperOutsideSet(t.participant() + 1));
            }
        }
        Ok(Scenario {
            name: self.name.clone(),
            msp,
            gamma,
            set,
            secret: self.secret.map(|s| d.elem(s)),
            seed: self.seed,
            fixture,
            tamper,
            attack: self.attack.clone(),
        })
    }

    /// The worked example: the 4x4 span program over Z_5, authorized sets
    /// `{P1,P2,P3}` and `{P1,P2,P4}`, secret 3 shared by `{P1,P2,P3}` with
    /// `ρ = (4,1,0,2)` and `q0 = 2` pinned.
    pub fn worked_example() -> Self {
        ScenarioFile {
            schema: SCENARIO_SCHEMA.to_string(),
            name: "worked-example".to_string(),
            d: 5,
            matrix: vec![
                vec![1, 0, 3, 4],
                vec![0, 0, 2, 1],
                vec![3, 4, 1, 0],
                vec![1, 2, 4, 0],
            ],
            psi: vec![1, 2, 3, 4],
            participants: None,
            gamma: vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 2, 3, 4]],
            set: vec![1, 2, 3],
            secret: Some(3),
            seed: 0,
            fixed: Some(FixedSpec {
                rho: vec![4, 1, 0, 2],
                q0: 2,
            }),
            tamper: None,
            attack: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        ScenarioFile::from_json(text)?.validate()
    }

    pub fn worked_example() -> Self {
        ScenarioFile::worked_example()
            .validate()
            .expect("built-in scenario is valid")
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.msp.modulus()
    }
}
