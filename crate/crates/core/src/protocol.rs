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

//! The hybrid sharing protocol: classical share distribution, the qudit
//! passed hand to hand through an authorized set, the dealer's measurement
//! and checks, and secret recovery with hash verification.

use std::fmt;

use rand::Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{FieldError, Fp, FpVector, PrimeModulus};
use crate::qudit::{
    fidelity, shift_label, QuditError, QuditSpace, StateLabel, StateVector, UnitaryLabel,
};
use crate::scalar::Real;
use crate::span_program::{
    reconstruct, AccessStructure, Msp, ParticipantSet, RecombinationVector, ShareAssignment,
    SpanError,
};

/// Fidelity below `1 - STATE_CONSISTENCY_TOL` between a message's label and
/// its vector marks the message as tampered.
pub const STATE_CONSISTENCY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("set {0} is not authorized")]
    NotAuthorized(ParticipantSet),
    #[error("fixture rho has length {found}, MSP width is {expected}")]
    FixtureWidth { expected: usize, found: usize },
    #[error("state inconsistency at {party}: label/vector fidelity {fidelity:.3e}")]
    StateInconsistency { party: Party, fidelity: f64 },
    #[error("participant P{} is not in the active set", .0 + 1)]
    NotInSet(usize),
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Qudit(#[from] QuditError),
}

/// Role tag mixed into every digest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HashRole {
    /// `H1`, committing to the shared value `S_i`.
    SharedValue,
    /// `H2`, committing to the secret `s`.
    Secret,
}

/// SHA-256 of the ASCII string `QSS-H1:<value>:<d>` (or `QSS-H2:` for the secret).
pub fn commitment_digest(role: HashRole, value: Fp) -> [u8; 32] {
    let tag = match role {
        HashRole::SharedValue => "QSS-H1",
        HashRole::Secret => "QSS-H2",
    };
    let msg = format!("{tag}:{}:{}", value.value(), value.modulus().get());
    Sha256::digest(msg.as_bytes()).into()
}

/// Public commitments `H1 = h(S_i)`, `H2 = h(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashCommitment {
    pub h1: [u8; 32],
    pub h2: [u8; 32],
}

impl HashCommitment {
    pub fn new(shared_value: Fp, secret: Fp) -> Self {
        HashCommitment {
            h1: commitment_digest(HashRole::SharedValue, shared_value),
            h2: commitment_digest(HashRole::Secret, secret),
        }
    }

    pub fn verify_shared_value(&self, value: Fp) -> bool {
        commitment_digest(HashRole::SharedValue, value) == self.h1
    }

    pub fn verify_secret(&self, value: Fp) -> bool {
        commitment_digest(HashRole::Secret, value) == self.h2
    }
}

/// Who sent a round message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    Dealer,
    /// 0-based participant index.
    Participant(usize),
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Dealer => write!(f, "dealer"),
            Party::Participant(i) => write!(f, "P{}", i + 1),
        }
    }
}

impl Serialize for Party {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The dealer's private values for one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DealerSecretState {
    /// `s = p_0`.
    pub secret: Fp,
    /// Private basis offset `q_0`.
    pub q0: Fp,
    /// `ρ`, with `ρ[0] = S_i`.
    pub rho: FpVector,
}

impl DealerSecretState {
    /// `S_i`, the value shared through the span program.
    pub fn shared_value(&self) -> Fp {
        self.rho.get(0)
    }

    /// The label the dealer prepares: `U_{s,q0}|v_0^{(0)}⟩ = |v_s^{(q0)}⟩`.
    pub fn initial_unitary(&self) -> UnitaryLabel {
        UnitaryLabel::new(self.secret, self.q0)
    }
}

/// Pinned dealer randomness, for replaying a known run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DealerFixture {
    pub rho: FpVector,
    pub q0: Fp,
}

/// One participant's rows inside the active set: `(row, share, λ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticipantView {
    pub participant: usize,
    pub rows: Vec<(usize, Fp, Fp)>,
}

impl ParticipantView {
    /// `U_{p,q}` with `p = Σ λ_ε s_ε`, `q = Σ λ_ε` over the participant's rows.
    pub fn unitary(&self, d: PrimeModulus) -> UnitaryLabel {
        self.rows
            .iter()
            .fold(UnitaryLabel::identity(d), |u, &(_, s, l)| {
                UnitaryLabel::new(u.x + l * s, u.y + l)
            })
    }
}

/// The qudit in flight together with the sender's step.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundMessage<T> {
    pub sender: Party,
    /// `(p, q)` the sender applied.
    pub unitary: UnitaryLabel,
    pub label: StateLabel,
    pub state: StateVector<T>,
}

impl<T: Real> RoundMessage<T> {
    /// Fidelity between the carried vector and the vector its label names.
    pub fn consistency(&self, space: &QuditSpace<T>) -> f64 {
        fidelity(&space.mub_vector(self.label), &self.state)
            .to_f64()
            .unwrap_or(0.0)
    }
}

/// Everything the distribution phase produces.
#[derive(Debug, Clone)]
pub struct Distribution<T> {
    pub dealer: DealerSecretState,
    pub shares: ShareAssignment,
    pub commitments: HashCommitment,
    pub recombination: RecombinationVector,
    /// The active set's members in hand-off order.
    pub chain: Vec<ParticipantView>,
    pub initial: RoundMessage<T>,
}

/// Distribution phase: picks `ρ` (or uses the fixture), computes and routes
/// the shares, publishes the commitments and prepares `|v_s^{(q0)}⟩`.
pub fn run_distribution<T: Real, R: Rng + ?Sized>(
    space: &QuditSpace<T>,
    msp: &Msp,
    gamma: &AccessStructure,
    secret: Fp,
    set: ParticipantSet,
    fixture: Option<&DealerFixture>,
    rng: &mut R,
) -> Result<Distribution<T>, ProtocolError> {
    let d = msp.modulus();
    if !gamma.is_authorized(set) {
        return Err(ProtocolError::NotAuthorized(set));
    }
    let recombination = msp
        .recombination(set)
        .map_err(|_| ProtocolError::NotAuthorized(set))?;

    let dealer = match fixture {
        Some(f) => {
            if f.rho.len() != msp.width() {
                return Err(ProtocolError::FixtureWidth {
                    expected: msp.width(),
                    found: f.rho.len(),
                });
            }
            DealerSecretState {
                secret,
                q0: f.q0,
                rho: f.rho.clone(),
            }
        }
        None => {
            let rho: Vec<i64> = (0..msp.width())
                .map(|_| rng.random_range(0..d.get()) as i64)
                .collect();
            let q0 = d.elem(rng.random_range(0..d.get()) as i64);
            DealerSecretState {
                secret,
                q0,
                rho: FpVector::from_ints(d, &rho),
            }
        }
    };

    let shares = msp.distribute(&dealer.rho)?;
    let commitments = HashCommitment::new(dealer.shared_value(), secret);
    let chain = set
        .members()
        .map(|p| ParticipantView {
            participant: p,
            rows: shares
                .participant(p)
                .iter()
                .map(|&(row, s)| (row, s, recombination.coefficient(row)))
                .collect(),
        })
        .collect();

    let u0 = dealer.initial_unitary();
    let origin = StateLabel::new(d.zero(), d.zero());
    let state = space.apply_unitary(u0, &space.mub_vector(origin))?;
    let initial = RoundMessage {
        sender: Party::Dealer,
        unitary: u0,
        label: shift_label(u0, origin),
        state,
    };
    Ok(Distribution {
        dealer,
        shares,
        commitments,
        recombination,
        chain,
        initial,
    })
}

/// Applies `u` on behalf of `sender`, after checking the incoming message.
pub fn forward_with<T: Real>(
    space: &QuditSpace<T>,
    msg: &RoundMessage<T>,
    sender: Party,
    u: UnitaryLabel,
) -> Result<RoundMessage<T>, ProtocolError> {
    let f = msg.consistency(space);
    if f < 1.0 - STATE_CONSISTENCY_TOL {
        return Err(ProtocolError::StateInconsistency {
            party: sender,
            fidelity: f,
        });
    }
    Ok(RoundMessage {
        sender,
        unitary: u,
        label: shift_label(u, msg.label),
        state: space.apply_unitary(u, &msg.state)?,
    })
}

/// An honest participant's step: applies `U_{Σλs, Σλ}` to the incoming qudit.
pub fn participant_step<T: Real>(
    space: &QuditSpace<T>,
    msg: &RoundMessage<T>,
    view: &ParticipantView,
) -> Result<RoundMessage<T>, ProtocolError> {
    let u = view.unitary(space.modulus());
    forward_with(space, msg, Party::Participant(view.participant), u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbortReason {
    /// `r_i ≠ s + S_i`.
    ResultMismatch { expected: Fp, measured: Fp },
    /// `h(r_i - s) ≠ H1`.
    SharedValueHash,
    /// A participant received a label/vector pair that disagree.
    StateInconsistency(Party),
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbortReason::ResultMismatch { expected, measured } => {
                write!(
                    f,
                    "result mismatch: expected r = {expected}, measured {measured}"
                )
            }
            AbortReason::SharedValueHash => write!(f, "H1 mismatch"),
            AbortReason::StateInconsistency(p) => write!(f, "state inconsistency at {p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DealerVerdict {
    Accept,
    Abort(AbortReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DealerOutcome {
    /// Measurement basis `q_i = q0 + Σ λ`.
    pub basis: Fp,
    /// Measurement result `r_i`.
    pub result: Fp,
    pub verdict: DealerVerdict,
}

/// Dealer's final step: measures in basis `q_i`, then checks
/// `r_i = s + S_i` and `h(r_i - s) = H1`.
pub fn dealer_finalize<T: Real, R: Rng + ?Sized>(
    space: &QuditSpace<T>,
    msg: &RoundMessage<T>,
    dealer: &DealerSecretState,
    lambda: &RecombinationVector,
    commitments: &HashCommitment,
    rng: &mut R,
) -> Result<DealerOutcome, ProtocolError> {
    let basis = lambda.lambda.iter().fold(dealer.q0, |acc, l| acc + l);
    let (result, _) = space.measure(&msg.state, basis, rng)?;
    let expected = dealer.secret + dealer.shared_value();
    let verdict = if result != expected {
        DealerVerdict::Abort(AbortReason::ResultMismatch {
            expected,
            measured: result,
        })
    } else if !commitments.verify_shared_value(result - dealer.secret) {
        DealerVerdict::Abort(AbortReason::SharedValueHash)
    } else {
        DealerVerdict::Accept
    };
    Ok(DealerOutcome {
        basis,
        result,
        verdict,
    })
}

/// What the active set recovers from `r_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recovery {
    /// `S_i = Σ λ_j s_j` from the pooled shares.
    pub shared_value: Fp,
    /// `s = r_i - S_i`.
    pub secret: Fp,
    /// `h(s) = H2`.
    pub verified: bool,
}

/// Recovery by the active set from the released `r_i` and their pooled shares.
pub fn participant_recover(
    result: Fp,
    pooled: &ShareAssignment,
    lambda: &RecombinationVector,
    commitments: &HashCommitment,
) -> Result<Recovery, ProtocolError> {
    let shared_value = reconstruct(pooled, lambda)?;
    let secret = result.try_sub(shared_value)?;
    Ok(Recovery {
        shared_value,
        secret,
        verified: commitments.verify_secret(secret),
    })
}

/// A dishonest deviation by one party.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tamper {
    /// The participant applies `U_{p+Δp, q+Δq}` instead of `U_{p,q}`.
    FakeUnitary {
        participant: usize,
        offset: UnitaryLabel,
    },
    /// The share pooled for recovery by the participant (its first row in
    /// the set) is off by `delta`; the quantum step used the genuine share.
    ForgedShare { participant: usize, delta: Fp },
}

impl Tamper {
    pub fn participant(&self) -> usize {
        match *self {
            Tamper::FakeUnitary { participant, .. } | Tamper::ForgedShare { participant, .. } => {
                participant
            }
        }
    }

    /// Net shift the tamper causes in the recovered secret's path:
    /// `Δp` for a fake unitary, `λ·δ` for a forged share.
    pub fn effective_shift(&self, lambda: &RecombinationVector, shares: &ShareAssignment) -> Fp {
        match *self {
            Tamper::FakeUnitary { offset, .. } => offset.x,
            Tamper::ForgedShare { participant, delta } => shares
                .participant(participant)
                .first()
                .map(|&(row, _)| lambda.coefficient(row) * delta)
                .unwrap_or_else(|| delta.modulus().zero()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match *self {
            Tamper::FakeUnitary { offset, .. } => offset.x.is_zero() && offset.y.is_zero(),
            Tamper::ForgedShare { delta, .. } => delta.is_zero(),
        }
    }
}

/// The quantum channel between consecutive holders of the qudit.
pub trait Channel<T: Real> {
    /// Carries `msg` across `hop`; hop `k` leaves the `k`-th sender (the
    /// dealer is sender 0) and the last hop returns to the dealer.
    fn transmit<R: Rng + ?Sized>(
        &mut self,
        hop: usize,
        msg: RoundMessage<T>,
        space: &QuditSpace<T>,
        rng: &mut R,
    ) -> Result<RoundMessage<T>, ProtocolError>;
}

/// A noiseless channel with no eavesdropper.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdealChannel;

impl<T: Real> Channel<T> for IdealChannel {
    fn transmit<R: Rng + ?Sized>(
        &mut self,
        _hop: usize,
        msg: RoundMessage<T>,
        _space: &QuditSpace<T>,
        _rng: &mut R,
    ) -> Result<RoundMessage<T>, ProtocolError> {
        Ok(msg)
    }
}

/// One protocol run's inputs.
#[derive(Debug, Clone)]
pub struct RunConfig<'a> {
    pub msp: &'a Msp,
    pub gamma: &'a AccessStructure,
    pub set: ParticipantSet,
    pub secret: Fp,
    pub fixture: Option<&'a DealerFixture>,
    pub tamper: Option<Tamper>,
}

/// A completed run, before serialization.
#[derive(Debug, Clone)]
pub struct RunRecord<T> {
    pub distribution: Distribution<T>,
    /// Messages as sent: the dealer's preparation then each participant's step.
    pub rounds: Vec<RoundMessage<T>>,
    /// The dealer's measurement; absent if a participant aborted first.
    pub dealer: Option<DealerOutcome>,
    pub verdict: DealerVerdict,
    /// Present when the dealer released `r_i`.
    pub recovery: Option<Recovery>,
}

impl<T> RunRecord<T> {
    pub fn accepted(&self) -> bool {
        self.verdict == DealerVerdict::Accept
    }

    /// Dealer accepted and `H2` verified.
    pub fn verified(&self) -> bool {
        self.accepted() && self.recovery.is_some_and(|r| r.verified)
    }
}

/// Runs distribution, the participant chain, the dealer's measurement and
/// recovery.
pub fn run_protocol<T: Real, R: Rng + ?Sized, C: Channel<T>>(
    space: &QuditSpace<T>,
    config: &RunConfig<'_>,
    channel: &mut C,
    rng: &mut R,
) -> Result<RunRecord<T>, ProtocolError> {
    let d = config.msp.modulus();
    let dist = run_distribution(
        space,
        config.msp,
        config.gamma,
        config.secret,
        config.set,
        config.fixture,
        rng,
    )?;
    if let Some(t) = config.tamper {
        if !config.set.contains(t.participant()) {
            return Err(ProtocolError::NotInSet(t.participant()));
        }
    }

    let mut rounds = vec![dist.initial.clone()];
    let mut msg = dist.initial.clone();
    let mut aborted = None;
    for (hop, view) in dist.chain.iter().enumerate() {
        let incoming = channel.transmit(hop, msg, space, rng)?;
        let mut u = view.unitary(d);
        if let Some(Tamper::FakeUnitary {
            participant,
            offset,
        }) = config.tamper
        {
            if participant == view.participant {
                u = u.then(offset);
            }
        }
        match forward_with(space, &incoming, Party::Participant(view.participant), u) {
            Ok(next) => {
                rounds.push(next.clone());
                msg = next;
            }
            Err(ProtocolError::StateInconsistency { party, .. }) => {
                aborted = Some(AbortReason::StateInconsistency(party));
                msg = incoming;
                break;
            }
            Err(e) => return Err(e),
        }
    }

    if let Some(reason) = aborted {
        return Ok(RunRecord {
            distribution: dist,
            rounds,
            dealer: None,
            verdict: DealerVerdict::Abort(reason),
            recovery: None,
        });
    }

    let last = channel.transmit(dist.chain.len(), msg, space, rng)?;
    let outcome = dealer_finalize(
        space,
        &last,
        &dist.dealer,
        &dist.recombination,
        &dist.commitments,
        rng,
    )?;
    let recovery = match outcome.verdict {
        DealerVerdict::Accept => {
            let mut pooled = dist.shares.restrict(config.set);
            if let Some(Tamper::ForgedShare { participant, delta }) = config.tamper {
                if let Some(&(row, s)) = dist.shares.participant(participant).first() {
                    pooled.set_row(row, s + delta);
                }
            }
            Some(participant_recover(
                outcome.result,
                &pooled,
                &dist.recombination,
                &dist.commitments,
            )?)
        }
        DealerVerdict::Abort(_) => None,
    };
    Ok(RunRecord {
        distribution: dist,
        rounds,
        dealer: Some(outcome),
        verdict: outcome.verdict,
        recovery,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FpMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn d5() -> PrimeModulus {
        PrimeModulus::new(5).unwrap()
    }

    fn set(labels: &[usize]) -> ParticipantSet {
        ParticipantSet::from_members(labels.iter().map(|l| l - 1))
    }

    fn worked_msp() -> Msp {
        let m = FpMatrix::from_rows(
            d5(),
            4,
            &[
                vec![1, 0, 3, 4],
                vec![0, 0, 2, 1],
                vec![3, 4, 1, 0],
                vec![1, 2, 4, 0],
            ],
        )
        .unwrap();
        Msp::new(m, vec![0, 1, 2, 3], 4).unwrap()
    }

    fn listed_structure() -> AccessStructure {
        AccessStructure::new(4, &[set(&[1, 2, 3]), set(&[1, 2, 4])]).unwrap()
    }

    fn fixture() -> DealerFixture {
        DealerFixture {
            rho: FpVector::from_ints(d5(), &[4, 1, 0, 2]),
            q0: d5().elem(2),
        }
    }

    fn labels<T>(rounds: &[RoundMessage<T>]) -> Vec<(u32, u32)> {
        rounds
            .iter()
            .map(|m| (m.label.l.value(), m.label.j.value()))
            .collect()
    }

    #[test]
    fn digest_format_is_fixed() {
        let v = d5().elem(4);
        let expect: [u8; 32] = Sha256::digest(b"QSS-H1:4:5").into();
        assert_eq!(commitment_digest(HashRole::SharedValue, v), expect);
        assert_ne!(
            commitment_digest(HashRole::SharedValue, v),
            commitment_digest(HashRole::Secret, v)
        );
        let c = HashCommitment::new(v, d5().elem(3));
        assert!(c.verify_shared_value(d5().elem(4)));
        assert!(c.verify_shared_value(d5().elem(9)));
        assert!(!c.verify_shared_value(d5().elem(1)));
        assert!(c.verify_secret(d5().elem(8)));
    }

    #[test]
    fn distribution_example() {
        let space = QuditSpace::<f64>::new(d5());
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let f = fixture();
        let dist = run_distribution(
            &space,
            &worked_msp(),
            &listed_structure(),
            d5().elem(3),
            set(&[1, 2, 3]),
            Some(&f),
            &mut rng,
        )
        .unwrap();
        let shares: Vec<u32> = dist
            .shares
            .by_row()
            .iter()
            .map(|(_, s)| s.value())
            .collect();
        assert_eq!(shares, vec![2, 2, 1, 1]);
        assert_eq!(
            dist.initial.label,
            StateLabel::new(d5().elem(3), d5().elem(2))
        );
        assert!(dist.initial.consistency(&space) > 1.0 - 1e-9);
        assert_eq!(dist.chain.len(), 3);
    }

    #[test]
    fn degenerate_distribution() {
        let space = QuditSpace::<f64>::new(d5());
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let f = DealerFixture {
            rho: FpVector::zeros(d5(), 4),
            q0: d5().zero(),
        };
        let dist = run_distribution(
            &space,
            &worked_msp(),
            &listed_structure(),
            d5().zero(),
            set(&[1, 2, 4]),
            Some(&f),
            &mut rng,
        )
        .unwrap();
        assert_eq!(
            dist.initial.label,
            StateLabel::new(d5().zero(), d5().zero())
        );
        assert!(dist.shares.by_row().iter().all(|(_, s)| s.is_zero()));
    }

    #[test]
    fn random_distributions_start_at_secret_and_offset() {
        let d7 = PrimeModulus::new(7).unwrap();
        let space = QuditSpace::<f64>::new(d7);
        let m = FpMatrix::from_rows(d7, 2, &[vec![1, 1], vec![1, 2], vec![1, 3]]).unwrap();
        let msp = Msp::new(m, vec![0, 1, 2], 3).unwrap();
        let gamma = msp.realized_structure();
        let mut rng = ChaCha20Rng::seed_from_u64(77);
        for _ in 0..200 {
            let s = d7.elem(rng.random_range(0..7));
            let dist =
                run_distribution(&space, &msp, &gamma, s, set(&[1, 3]), None, &mut rng).unwrap();
            assert_eq!(dist.initial.label, StateLabel::new(s, dist.dealer.q0));
        }
    }

    #[test]
    fn unauthorized_sets_are_rejected() {
        let space = QuditSpace::<f64>::new(d5());
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        for bad in [set(&[3, 4]), set(&[1, 2])] {
            let err = run_distribution(
                &space,
                &worked_msp(),
                &listed_structure(),
                d5().elem(3),
                bad,
                None,
                &mut rng,
            )
            .unwrap_err();
            assert_eq!(err, ProtocolError::NotAuthorized(bad));
        }
    }

    #[test]
    fn participant_step_examples() {
        let space = QuditSpace::<f64>::new(d5());
        let lab = |l, j| StateLabel::new(d5().elem(l), d5().elem(j));
        let msg = RoundMessage {
            sender: Party::Dealer,
            unitary: UnitaryLabel::new(d5().elem(3), d5().elem(2)),
            label: lab(3, 2),
            state: space.mub_vector(lab(3, 2)),
        };
        let p1_view = ParticipantView {
            participant: 0,
            rows: vec![(0, d5().elem(2), d5().elem(1))],
        };
        let out = participant_step(&space, &msg, &p1_view).unwrap();
        assert_eq!(out.label, lab(0, 3));
        assert_eq!(out.unitary, UnitaryLabel::new(d5().elem(2), d5().elem(1)));

        let at24 = RoundMessage {
            label: lab(2, 4),
            state: space.mub_vector(lab(2, 4)),
            ..msg.clone()
        };
        let p3_view = ParticipantView {
            participant: 2,
            rows: vec![(2, d5().elem(1), d5().zero())],
        };
        let out = participant_step(&space, &at24, &p3_view).unwrap();
        assert_eq!(out.label, lab(2, 4));
        assert_eq!(out.unitary, UnitaryLabel::identity(d5()));

        let idle = ParticipantView {
            participant: 1,
            rows: vec![(1, d5().zero(), d5().zero())],
        };
        assert_eq!(
            participant_step(&space, &at24, &idle).unwrap().label,
            lab(2, 4)
        );
    }

    #[test]
    fn participant_step_detects_inconsistent_message() {
        let space = QuditSpace::<f64>::new(d5());
        let lab = |l, j| StateLabel::new(d5().elem(l), d5().elem(j));
        let msg = RoundMessage {
            sender: Party::Dealer,
            unitary: UnitaryLabel::identity(d5()),
            label: lab(3, 2),
            state: space.mub_vector(lab(1, 2)),
        };
        let view = ParticipantView {
            participant: 0,
            rows: vec![(0, d5().elem(2), d5().elem(1))],
        };
        assert!(matches!(
            participant_step(&space, &msg, &view),
            Err(ProtocolError::StateInconsistency { .. })
        ));
    }

    #[test]
    fn worked_example_full_run() {
        let space = QuditSpace::<f64>::new(d5());
        let msp = worked_msp();
        let gamma = listed_structure();
        let f = fixture();
        let config = RunConfig {
            msp: &msp,
            gamma: &gamma,
            set: set(&[1, 2, 3]),
            secret: d5().elem(3),
            fixture: Some(&f),
            tamper: None,
        };
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let run = run_protocol(&space, &config, &mut IdealChannel, &mut rng).unwrap();
        assert_eq!(labels(&run.rounds), vec![(3, 2), (0, 3), (2, 4), (2, 4)]);
        let dealer = run.dealer.unwrap();
        assert_eq!(dealer.basis.value(), 4);
        assert_eq!(dealer.result.value(), 2);
        assert_eq!(run.verdict, DealerVerdict::Accept);
        let rec = run.recovery.unwrap();
        assert_eq!(rec.shared_value.value(), 4);
        assert_eq!(rec.secret.value(), 3);
        assert!(rec.verified);
    }

    #[test]
    fn fake_unitary_changes_result_and_aborts() {
        let space = QuditSpace::<f64>::new(d5());
        let msp = worked_msp();
        let gamma = listed_structure();
        let f = fixture();
        // P2 applies U_{3,1} instead of U_{2,1}.
        let config = RunConfig {
            msp: &msp,
            gamma: &gamma,
            set: set(&[1, 2, 3]),
            secret: d5().elem(3),
            fixture: Some(&f),
            tamper: Some(Tamper::FakeUnitary {
                participant: 1,
                offset: UnitaryLabel::new(d5().elem(1), d5().zero()),
            }),
        };
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let run = run_protocol(&space, &config, &mut IdealChannel, &mut rng).unwrap();
        let dealer = run.dealer.unwrap();
        assert_eq!(dealer.result.value(), 3);
        assert!(matches!(
            run.verdict,
            DealerVerdict::Abort(AbortReason::ResultMismatch { .. })
        ));
        assert!(run.recovery.is_none());
    }

    #[test]
    fn recovery_examples() {
        let msp = worked_msp();
        let a1 = set(&[1, 2, 3]);
        let lambda = msp.recombination(a1).unwrap();
        let shares = msp
            .distribute(&FpVector::from_ints(d5(), &[4, 1, 0, 2]))
            .unwrap();
        let commit = HashCommitment::new(d5().elem(4), d5().elem(3));
        let rec =
            participant_recover(d5().elem(2), &shares.restrict(a1), &lambda, &commit).unwrap();
        assert_eq!(rec.secret.value(), 3);
        assert!(rec.verified);

        let rec =
            participant_recover(d5().elem(4), &shares.restrict(a1), &lambda, &commit).unwrap();
        assert!(rec.secret.is_zero());

        let mut forged = shares.restrict(a1);
        forged.set_row(0, d5().elem(3));
        let rec = participant_recover(d5().elem(2), &forged, &lambda, &commit).unwrap();
        assert_ne!(rec.secret.value(), 3);
        assert!(!rec.verified);
    }

    #[test]
    fn honest_runs_recover_exhaustively_at_d5() {
        let space = QuditSpace::<f64>::new(d5());
        let msp = worked_msp();
        let gamma = msp.realized_structure();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for a in gamma.minimal_authorized() {
            for code in 0..625i64 {
                let rho =
                    FpVector::from_ints(d5(), &[code % 5, code / 5 % 5, code / 25 % 5, code / 125]);
                let f = DealerFixture {
                    rho,
                    q0: d5().elem(code % 3),
                };
                let secret = d5().elem(code % 5 + 1);
                let config = RunConfig {
                    msp: &msp,
                    gamma: &gamma,
                    set: a,
                    secret,
                    fixture: Some(&f),
                    tamper: None,
                };
                let run = run_protocol(&space, &config, &mut IdealChannel, &mut rng).unwrap();
                let last = run.rounds.last().unwrap().label;
                let shared = f.rho.get(0);
                let qsum = run
                    .distribution
                    .recombination
                    .lambda
                    .iter()
                    .fold(f.q0, |a, b| a + b);
                assert_eq!(last, StateLabel::new(secret + shared, qsum));
                // Telescoping: the participants' p's sum to S_i.
                let psum = run.rounds[1..]
                    .iter()
                    .fold(d5().zero(), |acc, m| acc + m.unitary.x);
                assert_eq!(psum, shared);
                assert_eq!(run.recovery.unwrap().secret, secret);
                assert!(run.verified());
            }
        }
    }
}
