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

//! Simulation of a hybrid quantum secret sharing scheme: linear secret
//! sharing over Z_d driven by a monotone span program, combined with a single
//! qudit passed through the authorized set in mutually unbiased bases.
//!
//! The state-vector layer is generic over the real scalar ([`Real`]); the
//! aliases at the crate root fix it to `f64`.

pub mod adversary;
pub mod field;
pub mod protocol;
pub mod qudit;
pub mod scalar;
pub mod scenario;
pub mod span_program;
pub mod transcript;

pub use field::{FieldError, Fp, FpMatrix, FpVector, PrimeModulus};
pub use protocol::{HashCommitment, ProtocolError, Tamper};
pub use qudit::{Basis, StateLabel, UnitaryLabel};
pub use scalar::Real;
pub use scenario::{Scenario, ScenarioError, ScenarioFile};
pub use span_program::{AccessStructure, Msp, ParticipantSet, SpanError};
pub use transcript::{run_attack, run_scenario, AttackKind, RunError, Transcript};

pub type QuditSpace = qudit::QuditSpace<f64>;
pub type StateVector = qudit::StateVector<f64>;
pub type RoundMessage = protocol::RoundMessage<f64>;
pub type RunRecord = protocol::RunRecord<f64>;
pub type Complex = num_complex::Complex<f64>;
