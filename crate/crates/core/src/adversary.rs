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

//! Executable attack models: entangle-and-measure, intercept-resend,
//! forgery by a dishonest party, and collusion of an unauthorized coalition.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Fp, PrimeModulus};
use crate::protocol::{
    run_protocol, AbortReason, Channel, DealerVerdict, ProtocolError, RoundMessage, RunConfig,
    Tamper,
};
use crate::qudit::{Basis, QuditSpace, StateLabel};
use crate::scenario::Scenario;
use crate::span_program::{restricted_share_multiset, Msp, ParticipantSet};

/// Slack for the unit-modulus and unit-norm checks on an attack.
pub const ATTACK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdversaryError {
    #[error("malformed attack: {0}")]
    InvariantViolation(String),
    #[error("coalition {0} spans the target and is not unauthorized")]
    NotUnauthorized(ParticipantSet),
    #[error("intercept hop {hop} out of range; the chain has hops 0..={last}")]
    InvalidHop { hop: usize, last: usize },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// Independent stream for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A unit vector with i.i.d. complex Gaussian components, normalized.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)
}

/// Eve's diagonal entangling unitary `U_E|k⟩|E⟩ = a_kk |k⟩|e_kk⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglingAttack {
    modulus: PrimeModulus,
    ancilla_dim: usize,
    coefficients: Vec<Complex64>,
    ancillas: Vec<Vec<Complex64>>,
}

impl EntanglingAttack {
    pub fn new(
        modulus: PrimeModulus,
        coefficients: Vec<Complex64>,
        ancillas: Vec<Vec<Complex64>>,
    ) -> Result<Self, AdversaryError> {
        let d = modulus.order();
        if coefficients.len() != d || ancillas.len() != d {
            return Err(AdversaryError::InvariantViolation(format!(
                "need {d} coefficients and ancillas, got {} and {}",
                coefficients.len(),
                ancillas.len()
            )));
        }
        let ancilla_dim = ancillas[0].len();
        if ancilla_dim == 0 {
            return Err(AdversaryError::InvariantViolation("empty ancilla".into()));
        }
        for (k, (a, e)) in coefficients.iter().zip(&ancillas).enumerate() {
            // With no off-diagonal terms, normalization forces |a_kk| = 1.
            if (a.norm() - 1.0).abs() > ATTACK_TOL {
                return Err(AdversaryError::InvariantViolation(format!(
                    "|a_{k}{k}| = {} != 1",
                    a.norm()
                )));
            }
            if e.len() != ancilla_dim {
                return Err(AdversaryError::InvariantViolation(format!(
                    "ancilla {k} has dimension {}, expected {ancilla_dim}",
                    e.len()
                )));
            }
            let n = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (n - 1.0).abs() > ATTACK_TOL {
                return Err(AdversaryError::InvariantViolation(format!(
                    "ancilla {k} has norm {n}"
                )));
            }
        }
        Ok(EntanglingAttack {
            modulus,
            ancilla_dim,
            coefficients,
            ancillas,
        })
    }

    /// Eve leaves the ancilla untouched.
    pub fn identity(modulus: PrimeModulus, ancilla_dim: usize) -> Self {
        let mut e = vec![Complex64::new(0.0, 0.0); ancilla_dim];
        e[0] = Complex64::new(1.0, 0.0);
        let d = modulus.order();
        Self::new(modulus, vec![Complex64::new(1.0, 0.0); d], vec![e; d]).expect("valid")
    }

    /// `a_kk = 1` and `e_kk = |k⟩` in a `d`-dimensional ancilla.
    pub fn orthogonal(modulus: PrimeModulus) -> Self {
        let d = modulus.order();
        let ancillas = (0..d)
            .map(|k| {
                let mut e = vec![Complex64::new(0.0, 0.0); d];
                e[k] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        Self::new(modulus, vec![Complex64::new(1.0, 0.0); d], ancillas).expect("valid")
    }

    /// Random phases `a_kk` with `e_kk = conj(a_kk)|e⟩` for one random `|e⟩`,
    /// so every product `a_kk|e_kk⟩` is the same vector.
    pub fn random_compliant<R: Rng + ?Sized>(
        modulus: PrimeModulus,
        ancilla_dim: usize,
        rng: &mut R,
    ) -> Self {
        let e = random_unit_vector(ancilla_dim, rng);
        let d = modulus.order();
        let coefficients: Vec<Complex64> = (0..d).map(|_| random_phase(rng)).collect();
        let ancillas = coefficients
            .iter()
            .map(|a| e.iter().map(|z| z * a.conj()).collect())
            .collect();
        Self::new(modulus, coefficients, ancillas).expect("valid")
    }

    /// Independent random phases and ancilla vectors.
    pub fn random<R: Rng + ?Sized>(modulus: PrimeModulus, ancilla_dim: usize, rng: &mut R) -> Self {
        let d = modulus.order();
        let coefficients = (0..d).map(|_| random_phase(rng)).collect();
        let ancillas = (0..d)
            .map(|_| random_unit_vector(ancilla_dim, rng))
            .collect();
        Self::new(modulus, coefficients, ancillas).expect("valid")
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    /// The products `a_kk|e_kk⟩`.
    fn tagged(&self) -> Vec<Vec<Complex64>> {
        self.coefficients
            .iter()
            .zip(&self.ancillas)
            .map(|(a, e)| e.iter().map(|z| z * a).collect())
            .collect()
    }
}

/// Worst-case effect of an entangling attack over every basis state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntangleReport {
    /// Largest probability that a measurement in the state's own basis no
    /// longer returns its label.
    pub max_disturbance: f64,
    /// Largest trace distance between Eve's ancilla states for two inputs
    /// from the same basis.
    pub eve_distinguishability: f64,
}

fn trace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let diff = a - b;
    0.5 * diff
        .symmetric_eigenvalues()
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

/// Evaluates `attack` on all `d²` MUB states and the computational basis.
pub fn entangle_attack_analyze(attack: &EntanglingAttack) -> EntangleReport {
    let space = QuditSpace::<f64>::new(attack.modulus);
    let d = attack.modulus.order();
    let e = attack.ancilla_dim;
    let tagged = attack.tagged();

    let mut bases = vec![Basis::Computational];
    bases.extend(attack.modulus.elements().map(Basis::Mub));

    let mut max_disturbance = 0.0f64;
    let mut eve_distinguishability = 0.0f64;
    for basis in bases {
        let vectors: Vec<_> = attack
            .modulus
            .elements()
            .map(|l| space.basis_vector(basis, l))
            .collect();
        let mut eve_states = Vec::with_capacity(d);
        for (l, input) in vectors.iter().enumerate() {
            let c = input.amplitudes();
            // Joint state Σ_k c_k |k⟩ ⊗ a_kk|e_kk⟩, projected on ⟨v_l| ⊗ 1.
            let mut stay = vec![Complex64::new(0.0, 0.0); e];
            for k in 0..d {
                let w = vectors[l].amplitudes()[k].conj() * c[k];
                for (s, t) in stay.iter_mut().zip(&tagged[k]) {
                    *s += w * t;
                }
            }
            let keep: f64 = stay.iter().map(|z| z.norm_sqr()).sum();
            max_disturbance = max_disturbance.max(1.0 - keep);

            let mut rho = DMatrix::<Complex64>::zeros(e, e);
            for k in 0..d {
                let p = c[k].norm_sqr();
                for r in 0..e {
                    for s in 0..e {
                        rho[(r, s)] += tagged[k][r] * tagged[k][s].conj() * p;
                    }
                }
            }
            eve_states.push(rho);
        }
        for i in 0..d {
            for j in i + 1..d {
                eve_distinguishability =
                    eve_distinguishability.max(trace_distance(&eve_states[i], &eve_states[j]));
            }
        }
    }
    EntangleReport {
        max_disturbance: max_disturbance.max(0.0),
        eve_distinguishability,
    }
}

/// Summary of a randomized search over entangling attacks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntangleSearch {
    pub attacks: usize,
    /// Attacks drawn with all `a_kk|e_kk⟩` equal.
    pub compliant_max_disturbance: f64,
    pub compliant_max_distinguishability: f64,
    /// Attacks drawn with independent `a_kk`, `e_kk`.
    pub generic_min_disturbance: f64,
    /// Attacks of either family with disturbance below [`ATTACK_TOL`] yet
    /// distinguishability above it.
    pub zero_disturbance_informative: usize,
}

/// Draws `attacks` compliant and `attacks` generic attacks and analyzes each.
pub fn entangle_search(
    modulus: PrimeModulus,
    ancilla_dim: usize,
    attacks: usize,
    seed: u64,
) -> EntangleSearch {
    let reports: Vec<(EntangleReport, EntangleReport)> = (0..attacks as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let compliant = EntanglingAttack::random_compliant(modulus, ancilla_dim, &mut rng);
            let generic = EntanglingAttack::random(modulus, ancilla_dim, &mut rng);
            (
                entangle_attack_analyze(&compliant),
                entangle_attack_analyze(&generic),
            )
        })
        .collect();
    let informative = |r: &EntangleReport| {
        r.max_disturbance < ATTACK_TOL && r.eve_distinguishability >= ATTACK_TOL
    };
    EntangleSearch {
        attacks,
        compliant_max_disturbance: reports
            .iter()
            .map(|r| r.0.max_disturbance)
            .fold(0.0, f64::max),
        compliant_max_distinguishability: reports
            .iter()
            .map(|r| r.0.eve_distinguishability)
            .fold(0.0, f64::max),
        generic_min_disturbance: reports
            .iter()
            .map(|r| r.1.max_disturbance)
            .fold(f64::INFINITY, f64::min),
        zero_disturbance_informative: reports
            .iter()
            .map(|(a, b)| informative(a) as usize + informative(b) as usize)
            .sum(),
    }
}

/// An empirical frequency with its 3σ binomial radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rate {
    pub hits: u64,
    pub total: u64,
    pub value: f64,
    pub radius_3sigma: f64,
}

impl Rate {
    pub fn new(hits: u64, total: u64) -> Self {
        let value = if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        };
        let radius_3sigma = if total == 0 {
            0.0
        } else {
            3.0 * (value * (1.0 - value) / total as f64).sqrt()
        };
        Rate {
            hits,
            total,
            value,
            radius_3sigma,
        }
    }

    /// 3σ radius around a reference probability `p` at this sample size.
    pub fn radius_for(&self, p: f64) -> f64 {
        3.0 * (p * (1.0 - p) / self.total as f64).sqrt()
    }
}

/// What Eve saw at the intercepted hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterceptEvent {
    pub hop: usize,
    pub eve_basis: Fp,
    pub eve_outcome: Fp,
    /// The label of the state actually in flight.
    pub in_flight: StateLabel,
}

impl InterceptEvent {
    pub fn correct_basis(&self) -> bool {
        self.eve_basis == self.in_flight.j
    }
}

/// Eve measures the qudit on one hop in a uniformly chosen MUB and resends
/// the collapsed state.
#[derive(Debug, Clone, Default)]
pub struct InterceptResend {
    pub hop: usize,
    pub events: Vec<InterceptEvent>,
}

impl InterceptResend {
    pub fn at(hop: usize) -> Self {
        InterceptResend {
            hop,
            events: Vec::new(),
        }
    }
}

impl Channel<f64> for InterceptResend {
    fn transmit<R: Rng + ?Sized>(
        &mut self,
        hop: usize,
        msg: RoundMessage<f64>,
        space: &QuditSpace<f64>,
        rng: &mut R,
    ) -> Result<RoundMessage<f64>, ProtocolError> {
        if hop != self.hop {
            return Ok(msg);
        }
        let d = space.modulus();
        let basis = d.elem(rng.random_range(0..d.get()) as i64);
        let (outcome, post) = space.measure(&msg.state, basis, rng)?;
        self.events.push(InterceptEvent {
            hop,
            eve_basis: basis,
            eve_outcome: outcome,
            in_flight: msg.label,
        });
        Ok(RoundMessage {
            label: StateLabel::new(outcome, basis),
            state: post,
            ..msg
        })
    }
}

/// Aggregate intercept-resend statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttackStats {
    pub trials: u64,
    pub qudits_per_trial: u64,
    /// Per qudit: Eve picked the basis the qudit was in.
    pub eve_correct_basis_rate: Rate,
    /// Per trial: Eve picked the right basis for every qudit.
    pub eve_secret_success_rate: Rate,
    /// Per qudit: the dealer accepted.
    pub alice_acceptance_rate: Rate,
    /// Per qudit: the dealer aborted.
    pub alice_detection_rate: Rate,
}

/// `(2d - 1) / d²`: acceptance probability under intercept-resend with a
/// uniformly random basis among the `d` MUBs.
pub fn intercept_acceptance_oracle(d: u32) -> f64 {
    let d = d as f64;
    (2.0 * d - 1.0) / (d * d)
}

#[derive(Debug, Default, Clone, Copy)]
struct InterceptTally {
    correct: u64,
    accepted: u64,
    all_correct: u64,
}

impl std::ops::Add for InterceptTally {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        InterceptTally {
            correct: self.correct + o.correct,
            accepted: self.accepted + o.accepted,
            all_correct: self.all_correct + o.all_correct,
        }
    }
}

fn draw_secret<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Fp {
    let d = scenario.msp.modulus();
    scenario
        .secret
        .unwrap_or_else(|| d.elem(rng.random_range(0..d.get()) as i64))
}

/// Runs `n_trials` independent trials; each shares `qudits_per_trial` fresh
/// instances of the scenario's secret with Eve intercepting `hop`.
///
/// Every instance draws fresh dealer randomness; pinned fixtures in the
/// scenario are ignored.
pub fn intercept_resend_trials(
    scenario: &Scenario,
    hop: usize,
    qudits_per_trial: u64,
    n_trials: u64,
    seed: u64,
) -> Result<AttackStats, AdversaryError> {
    let last = scenario.set.len();
    if hop > last {
        return Err(AdversaryError::InvalidHop { hop, last });
    }
    let space = QuditSpace::<f64>::new(scenario.msp.modulus());
    let tally = (0..n_trials)
        .into_par_iter()
        .map(|t| -> Result<InterceptTally, AdversaryError> {
            let mut rng = trial_rng(seed, t);
            let mut tally = InterceptTally::default();
            let mut all = true;
            for _ in 0..qudits_per_trial {
                let secret = draw_secret(scenario, &mut rng);
                let config = RunConfig {
                    msp: &scenario.msp,
                    gamma: &scenario.gamma,
                    set: scenario.set,
                    secret,
                    fixture: None,
                    tamper: None,
                };
                let mut eve = InterceptResend::at(hop);
                let run = run_protocol(&space, &config, &mut eve, &mut rng)?;
                let hit = eve.events.first().is_some_and(|e| e.correct_basis());
                tally.correct += hit as u64;
                all &= hit;
                tally.accepted += run.accepted() as u64;
            }
            tally.all_correct += all as u64;
            Ok(tally)
        })
        .try_reduce(InterceptTally::default, |a, b| Ok(a + b))?;

    let qudits = n_trials * qudits_per_trial;
    Ok(AttackStats {
        trials: n_trials,
        qudits_per_trial,
        eve_correct_basis_rate: Rate::new(tally.correct, qudits),
        eve_secret_success_rate: Rate::new(tally.all_correct, n_trials),
        alice_acceptance_rate: Rate::new(tally.accepted, qudits),
        alice_detection_rate: Rate::new(qudits - tally.accepted, qudits),
    })
}

/// Which check caught a tamper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiredCheck {
    /// Dealer's `r_i = s + S_i` check.
    DealerResult,
    /// Dealer's `h(r_i - s) = H1` check.
    DealerHash,
    /// Participants' `h(s) = H2` check.
    ParticipantHash,
    /// A participant saw an inconsistent state.
    StateConsistency,
    /// Nothing fired.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForgeryOutcome {
    pub tamper: Tamper,
    /// `Δp` as seen by the recovered secret.
    pub effective_shift: Fp,
    pub fired: FiredCheck,
    /// The active set ended with the dealt secret (only when nothing fired).
    pub recovered_correct: bool,
}

impl ForgeryOutcome {
    pub fn caught(&self) -> bool {
        self.fired != FiredCheck::None
    }
}

/// One protocol run under `tamper` with fresh dealer randomness.
pub fn forgery_trial<R: Rng + ?Sized>(
    scenario: &Scenario,
    tamper: Tamper,
    rng: &mut R,
) -> Result<ForgeryOutcome, AdversaryError> {
    let space = QuditSpace::<f64>::new(scenario.msp.modulus());
    let secret = draw_secret(scenario, rng);
    let config = RunConfig {
        msp: &scenario.msp,
        gamma: &scenario.gamma,
        set: scenario.set,
        secret,
        fixture: None,
        tamper: Some(tamper),
    };
    let run = run_protocol(&space, &config, &mut crate::protocol::IdealChannel, rng)?;
    let fired = match run.verdict {
        DealerVerdict::Abort(AbortReason::ResultMismatch { .. }) => FiredCheck::DealerResult,
        DealerVerdict::Abort(AbortReason::SharedValueHash) => FiredCheck::DealerHash,
        DealerVerdict::Abort(AbortReason::StateInconsistency(_)) => FiredCheck::StateConsistency,
        DealerVerdict::Accept if !run.verified() => FiredCheck::ParticipantHash,
        DealerVerdict::Accept => FiredCheck::None,
    };
    Ok(ForgeryOutcome {
        tamper,
        effective_shift: tamper
            .effective_shift(&run.distribution.recombination, &run.distribution.shares),
        fired,
        recovered_correct: run.recovery.is_some_and(|r| r.secret == secret),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ForgeryStats {
    pub trials: u64,
    pub dealer_result: u64,
    pub dealer_hash: u64,
    pub participant_hash: u64,
    pub state_consistency: u64,
    pub undetected: u64,
    /// Undetected runs whose recovered secret was wrong.
    pub undetected_corrupted: u64,
}

impl ForgeryStats {
    fn record(&mut self, o: &ForgeryOutcome) {
        self.trials += 1;
        match o.fired {
            FiredCheck::DealerResult => self.dealer_result += 1,
            FiredCheck::DealerHash => self.dealer_hash += 1,
            FiredCheck::ParticipantHash => self.participant_hash += 1,
            FiredCheck::StateConsistency => self.state_consistency += 1,
            FiredCheck::None => {
                self.undetected += 1;
                if !o.recovered_correct {
                    self.undetected_corrupted += 1;
                }
            }
        }
    }

    pub fn detected(&self) -> u64 {
        self.trials - self.undetected
    }
}

/// `n_trials` runs of the same tamper over fresh dealer randomness.
pub fn forgery_trials(
    scenario: &Scenario,
    tamper: Tamper,
    n_trials: u64,
    seed: u64,
) -> Result<ForgeryStats, AdversaryError> {
    let outcomes = (0..n_trials)
        .into_par_iter()
        .map(|t| forgery_trial(scenario, tamper, &mut trial_rng(seed, t)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut stats = ForgeryStats::default();
    for o in &outcomes {
        stats.record(o);
    }
    Ok(stats)
}

/// Result of comparing a coalition's share distributions for two secrets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CollusionVerdict {
    pub coalition: ParticipantSet,
    pub sigma: u32,
    pub sigma_prime: u32,
    /// Number of `ρ` tails enumerated per secret.
    pub samples: u64,
    /// The two multisets of restricted share vectors coincide.
    pub identical: bool,
}

/// Enumerates every `ρ` with first coordinate `σ` and `σ'` and compares the
/// multisets of share vectors the coalition would see.
pub fn collusion_check(
    msp: &Msp,
    coalition: ParticipantSet,
    sigma: Fp,
    sigma_prime: Fp,
) -> Result<CollusionVerdict, AdversaryError> {
    if msp.spans_target(coalition) {
        return Err(AdversaryError::NotUnauthorized(coalition));
    }
    let a = restricted_share_multiset(msp, coalition, sigma).map_err(ProtocolError::from)?;
    let b = restricted_share_multiset(msp, coalition, sigma_prime).map_err(ProtocolError::from)?;
    Ok(CollusionVerdict {
        coalition,
        sigma: sigma.value(),
        sigma_prime: sigma_prime.value(),
        samples: a.len() as u64,
        identical: a == b,
    })
}
