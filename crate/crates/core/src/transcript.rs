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

//! JSON transcripts of protocol runs and attack reports.
//!
//! Key order is fixed by field order, so equal inputs give byte-identical
//! output.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use thiserror::Error;

use crate::adversary::{
    collusion_check, entangle_search, forgery_trials, intercept_acceptance_oracle,
    intercept_resend_trials, AdversaryError, AttackStats, CollusionVerdict, EntangleSearch,
    ForgeryStats,
};
use crate::protocol::{
    run_protocol, DealerVerdict, IdealChannel, ProtocolError, RunConfig, RunRecord, Tamper,
};
use crate::qudit::{QuditSpace, StateLabel};
use crate::scenario::{AttackSpec, Scenario, ScenarioError, TamperSpec};
use crate::span_program::{Msp, ParticipantSet};

pub const TRANSCRIPT_SCHEMA: &str = "qss-transcript/1";
pub const ATTACK_SCHEMA: &str = "qss-attack/1";

pub const DEFAULT_INTERCEPT_TRIALS: u64 = 10_000;
pub const DEFAULT_ENTANGLE_ATTACKS: u64 = 1_000;
pub const DEFAULT_FORGERY_TRIALS: u64 = 1_000;
/// Largest number of `ρ` tails a collusion check will enumerate per secret.
pub const COLLUSION_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error("{0}")]
    Attack(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MspRecord {
    pub matrix: Vec<Vec<u32>>,
    /// 1-based row owners.
    pub psi: Vec<usize>,
}

impl MspRecord {
    pub fn of(msp: &Msp) -> Self {
        MspRecord {
            matrix: msp.matrix().to_rows(),
            psi: msp.labels().iter().map(|p| p + 1).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShareRecord {
    /// 1-based.
    pub row: usize,
    pub holder: String,
    pub value: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaRecord {
    /// 1-based.
    pub row: usize,
    pub value: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommitmentRecord {
    pub h1: String,
    pub h2: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub sender: String,
    pub p: u32,
    pub q: u32,
    pub label: StateLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryRecord {
    pub shared_value: u32,
    pub secret: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    /// `accept` or `abort`.
    pub dealer: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abort_reason: Option<String>,
    /// `null` when the dealer never reached the hash check.
    pub h1_verified: Option<bool>,
    /// `null` when no `r_i` was released.
    pub h2_verified: Option<bool>,
}

/// A protocol run, as written by `qss run` and `qss demo`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub schema: &'static str,
    pub scenario: String,
    pub d: u32,
    pub msp: MspRecord,
    pub set: ParticipantSet,
    pub shares: Vec<ShareRecord>,
    pub lambda: Vec<LambdaRecord>,
    pub commitments: CommitmentRecord,
    pub rounds: Vec<RoundRecord>,
    pub q_i: Option<u32>,
    pub r_i: Option<u32>,
    pub recovered: Option<RecoveryRecord>,
    pub verdicts: Verdicts,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tamper: Option<TamperSpec>,
}

impl Transcript {
    pub fn from_record<T>(scenario: &Scenario, record: &RunRecord<T>, seed: u64) -> Self {
        let dist = &record.distribution;
        let shares = dist
            .shares
            .by_row()
            .into_iter()
            .map(|(row, v)| ShareRecord {
                row: row + 1,
                holder: format!("P{}", scenario.msp.labels()[row] + 1),
                value: v.value(),
            })
            .collect();
        let lambda = dist
            .recombination
            .rows
            .iter()
            .zip(dist.recombination.lambda.iter())
            .map(|(&row, v)| LambdaRecord {
                row: row + 1,
                value: v.value(),
            })
            .collect();
        let rounds = record
            .rounds
            .iter()
            .map(|m| RoundRecord {
                sender: m.sender.to_string(),
                p: m.unitary.x.value(),
                q: m.unitary.y.value(),
                label: m.label,
            })
            .collect();
        let (dealer, abort_reason, h1_verified) = match record.verdict {
            DealerVerdict::Accept => ("accept", None, Some(true)),
            DealerVerdict::Abort(reason) => {
                let h1 = match reason {
                    crate::protocol::AbortReason::SharedValueHash => Some(false),
                    _ => None,
                };
                ("abort", Some(reason.to_string()), h1)
            }
        };
        Transcript {
            schema: TRANSCRIPT_SCHEMA,
            scenario: scenario.name.clone(),
            d: scenario.modulus().get(),
            msp: MspRecord::of(&scenario.msp),
            set: scenario.set,
            shares,
            lambda,
            commitments: CommitmentRecord {
                h1: hex::encode(dist.commitments.h1),
                h2: hex::encode(dist.commitments.h2),
            },
            rounds,
            q_i: record.dealer.map(|o| o.basis.value()),
            r_i: record.dealer.map(|o| o.result.value()),
            recovered: record.recovery.map(|r| RecoveryRecord {
                shared_value: r.shared_value.value(),
                secret: r.secret.value(),
            }),
            verdicts: Verdicts {
                dealer,
                abort_reason,
                h1_verified,
                h2_verified: record.recovery.map(|r| r.verified),
            },
            seed,
            tamper: scenario.tamper.map(TamperSpec::from),
        }
    }

    /// Dealer accepted and the participants' `H2` check passed.
    pub fn succeeded(&self) -> bool {
        self.verdicts.dealer == "accept" && self.verdicts.h2_verified == Some(true)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }
}

impl From<Tamper> for TamperSpec {
    fn from(t: Tamper) -> Self {
        match t {
            Tamper::FakeUnitary {
                participant,
                offset,
            } => TamperSpec::FakeUnitary {
                participant: participant + 1,
                dp: offset.x.value() as i64,
                dq: offset.y.value() as i64,
            },
            Tamper::ForgedShare { participant, delta } => TamperSpec::ForgedShare {
                participant: participant + 1,
                delta: delta.value() as i64,
            },
        }
    }
}

/// Runs the scenario once over an ideal channel. The secret, when not pinned,
/// is the first draw from the seeded stream.
pub fn run_scenario(scenario: &Scenario, seed: u64) -> Result<Transcript, RunError> {
    let d = scenario.modulus();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let secret = scenario
        .secret
        .unwrap_or_else(|| d.elem(rng.random_range(0..d.get()) as i64));
    let space = QuditSpace::<f64>::new(d);
    let config = RunConfig {
        msp: &scenario.msp,
        gamma: &scenario.gamma,
        set: scenario.set,
        secret,
        fixture: scenario.fixture.as_ref(),
        tamper: scenario.tamper,
    };
    let record = run_protocol(&space, &config, &mut IdealChannel, &mut rng)?;
    Ok(Transcript::from_record(scenario, &record, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackKind {
    InterceptResend,
    EntangleMeasure,
    Forgery,
    Collusion,
}

impl AttackKind {
    pub const ALL: [AttackKind; 4] = [
        AttackKind::InterceptResend,
        AttackKind::EntangleMeasure,
        AttackKind::Forgery,
        AttackKind::Collusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackKind::InterceptResend => "intercept-resend",
            AttackKind::EntangleMeasure => "entangle-measure",
            AttackKind::Forgery => "forgery",
            AttackKind::Collusion => "collusion",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        AttackKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown attack type {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum AttackResult {
    InterceptResend {
        hop: usize,
        oracle_correct_basis: f64,
        oracle_acceptance: f64,
        stats: AttackStats,
    },
    EntangleMeasure {
        ancilla_dim: usize,
        search: EntangleSearch,
    },
    Forgery {
        tamper: TamperSpec,
        stats: ForgeryStats,
    },
    Collusion {
        verdicts: Vec<CollusionVerdict>,
        all_identical: bool,
    },
}

/// How far an intercept-resend rate may stray from its oracle before it is
/// reported as an anomaly, in binomial standard deviations.
pub const INTERCEPT_ANOMALY_SIGMAS: f64 = 5.0;

impl AttackResult {
    /// A result that contradicts the security analysis, if any.
    pub fn anomaly(&self) -> Option<String> {
        match self {
            AttackResult::InterceptResend {
                oracle_correct_basis,
                oracle_acceptance,
                stats,
                ..
            } => {
                let k = INTERCEPT_ANOMALY_SIGMAS / 3.0;
                let basis = &stats.eve_correct_basis_rate;
                let accept = &stats.alice_acceptance_rate;
                if (basis.value - oracle_correct_basis).abs()
                    > k * basis.radius_for(*oracle_correct_basis)
                {
                    Some(format!(
                        "correct-basis rate {} far from {oracle_correct_basis}",
                        basis.value
                    ))
                } else if (accept.value - oracle_acceptance).abs()
                    > k * accept.radius_for(*oracle_acceptance)
                {
                    Some(format!(
                        "acceptance rate {} far from {oracle_acceptance}",
                        accept.value
                    ))
                } else {
                    None
                }
            }
            AttackResult::EntangleMeasure { search, .. } => {
                (search.zero_disturbance_informative > 0).then(|| {
                    format!(
                        "{} attacks leaked information without disturbance",
                        search.zero_disturbance_informative
                    )
                })
            }
            AttackResult::Forgery { stats, .. } => (stats.undetected_corrupted > 0).then(|| {
                format!(
                    "{} undetected runs recovered a wrong secret",
                    stats.undetected_corrupted
                )
            }),
            AttackResult::Collusion { verdicts, .. } => {
                verdicts.iter().find(|v| !v.identical).map(|v| {
                    format!(
                        "coalition {} distinguishes secrets {} and {}",
                        v.coalition, v.sigma, v.sigma_prime
                    )
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackReport {
    pub schema: &'static str,
    pub scenario: String,
    pub d: u32,
    pub msp: MspRecord,
    pub set: ParticipantSet,
    pub seed: u64,
    pub attack: AttackResult,
}

impl AttackReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs one attack model against the scenario. Parameters come from the
/// scenario's `attack` section when its type matches `kind`; `trials`
/// overrides the trial count.
pub fn run_attack(
    scenario: &Scenario,
    kind: AttackKind,
    trials: Option<u64>,
    seed: u64,
) -> Result<AttackReport, RunError> {
    let d = scenario.modulus();
    let spec = scenario.attack.as_ref();
    let attack = match kind {
        AttackKind::InterceptResend => {
            let (hop, qudits, default_trials) = match spec {
                Some(AttackSpec::InterceptResend {
                    hop,
                    qudits,
                    trials,
                }) => (*hop, *qudits, *trials),
                _ => (0, 1, None),
            };
            let n = trials
                .or(default_trials)
                .unwrap_or(DEFAULT_INTERCEPT_TRIALS);
            let stats = intercept_resend_trials(scenario, hop, qudits, n, seed)?;
            AttackResult::InterceptResend {
                hop,
                oracle_correct_basis: 1.0 / d.get() as f64,
                oracle_acceptance: intercept_acceptance_oracle(d.get()),
                stats,
            }
        }
        AttackKind::EntangleMeasure => {
            let (dim, default_attacks) = match spec {
                Some(AttackSpec::EntangleMeasure {
                    ancilla_dim,
                    attacks,
                }) => (*ancilla_dim, *attacks),
                _ => (None, None),
            };
            let dim = dim.unwrap_or(d.order());
            if dim == 0 {
                return Err(RunError::Attack("ancilla_dim must be positive".into()));
            }
            let n = trials
                .or(default_attacks)
                .unwrap_or(DEFAULT_ENTANGLE_ATTACKS);
            AttackResult::EntangleMeasure {
                ancilla_dim: dim,
                search: entangle_search(d, dim, n as usize, seed),
            }
        }
        AttackKind::Forgery => {
            let (tamper, default_trials) = match spec {
                Some(AttackSpec::Forgery { tamper, trials }) => (Some(tamper.resolve(d)?), *trials),
                _ => (scenario.tamper, None),
            };
            let tamper = tamper.ok_or_else(|| {
                RunError::Attack(
                    "forgery needs a tamper in the scenario or its attack section".into(),
                )
            })?;
            if !scenario.set.contains(tamper.participant()) {
                return Err(ScenarioError::TamperOutsideSet(tamper.participant() + 1).into());
            }
            let n = trials.or(default_trials).unwrap_or(DEFAULT_FORGERY_TRIALS);
            AttackResult::Forgery {
                tamper: tamper.into(),
                stats: forgery_trials(scenario, tamper, n, seed)?,
            }
        }
        AttackKind::Collusion => collusion(scenario, spec)?,
    };
    Ok(AttackReport {
        schema: ATTACK_SCHEMA,
        scenario: scenario.name.clone(),
        d: d.get(),
        msp: MspRecord::of(&scenario.msp),
        set: scenario.set,
        seed,
        attack,
    })
}

fn collusion(scenario: &Scenario, spec: Option<&AttackSpec>) -> Result<AttackResult, RunError> {
    let msp = &scenario.msp;
    let d = msp.modulus();
    let budget = (d.get() as u64).checked_pow(msp.width() as u32 - 1);
    if budget.is_none_or(|b| b > COLLUSION_BUDGET) {
        return Err(RunError::Attack(format!(
            "collusion check would enumerate {}^{} share vectors per secret",
            d.get(),
            msp.width() - 1
        )));
    }
    let (coalitions, pairs) = match spec {
        Some(AttackSpec::Collusion {
            coalition,
            sigma,
            sigma_prime,
        }) => {
            if coalition.contains(&0) {
                return Err(ScenarioError::ZeroIndex(0).into());
            }
            let c = ParticipantSet::from_members(coalition.iter().map(|p| p - 1));
            let pairs = match (sigma, sigma_prime) {
                (Some(a), Some(b)) => vec![(d.elem(*a), d.elem(*b))],
                _ => all_pairs(d.get())
                    .map(|(a, b)| (d.elem(a), d.elem(b)))
                    .collect(),
            };
            (vec![c], pairs)
        }
        _ => {
            let maximal = msp
                .realized_structure()
                .maximal_unauthorized()
                .into_iter()
                .filter(|c| !c.is_empty())
                .collect();
            let pairs = all_pairs(d.get())
                .map(|(a, b)| (d.elem(a), d.elem(b)))
                .collect();
            (maximal, pairs)
        }
    };
    let mut verdicts = Vec::new();
    for &c in &coalitions {
        for &(a, b) in &pairs {
            verdicts.push(collusion_check(msp, c, a, b)?);
        }
    }
    let all_identical = verdicts.iter().all(|v| v.identical);
    Ok(AttackResult::Collusion {
        verdicts,
        all_identical,
    })
}

/// `(0, σ')` for every nonzero `σ'`; equality of distributions is transitive,
/// so these cover every pair.
fn all_pairs(d: u32) -> impl Iterator<Item = (i64, i64)> {
    (1..d as i64).map(|b| (0, b))
}
