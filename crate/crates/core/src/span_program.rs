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

//! Access structures, monotone span programs and the classical linear secret
//! sharing layer built on them.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldError, Fp, FpMatrix, FpVector, PrimeModulus};

/// Upper bound on the number of participants, so that scans over `2^n`
/// subsets stay cheap.
pub const MAX_PARTICIPANTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("participant count {0} outside 1..={MAX_PARTICIPANTS}")]
    TooManyParticipants(usize),
    #[error("participant index {index} out of range for n = {n}")]
    UnknownParticipant { index: usize, n: usize },
    #[error("labeling map is not surjective: participant P{0} owns no row")]
    LabelingNotSurjective(usize),
    #[error("labeling map has {found} entries for a matrix with {rows} rows")]
    LabelingLength { rows: usize, found: usize },
    #[error("matrix has no columns")]
    EmptyMatrix,
    #[error("participant count mismatch: MSP has {msp}, access structure has {gamma}")]
    ParticipantCountMismatch { msp: usize, gamma: usize },
    #[error("set {0} is not authorized")]
    NotAuthorized(ParticipantSet),
    #[error("no share held for row {0}")]
    MissingShare(usize),
}

/// A subset of participants, stored as a bitmask over 0-based indices.
///
/// Displayed 1-based, as `{P1,P3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParticipantSet(u32);

impl ParticipantSet {
    pub const EMPTY: ParticipantSet = ParticipantSet(0);

    pub fn from_bits(bits: u32) -> Self {
        ParticipantSet(bits)
    }

    /// From 0-based member indices.
    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        ParticipantSet(members.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    /// All participants `0..n`.
    pub fn full(n: usize) -> Self {
        ParticipantSet(((1u64 << n) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn is_subset(self, other: ParticipantSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn with(self, i: usize) -> Self {
        ParticipantSet(self.0 | (1 << i))
    }

    /// Members in ascending order, 0-based.
    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }

    /// Members in ascending order, 1-based.
    pub fn labels(self) -> Vec<usize> {
        self.members().map(|i| i + 1).collect()
    }

    /// The characteristic 0/1 vector over `n` participants.
    pub fn indicator(self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.contains(i) as u8).collect()
    }
}

impl fmt::Display for ParticipantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.members().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "P{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for ParticipantSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

/// A monotone access structure over `n` participants.
///
/// Stored as the full membership table of `2^n` entries, closed upward at
/// construction. Its complement is the adversary structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessStructure {
    n: usize,
    authorized: Vec<bool>,
}

impl AccessStructure {
    /// The monotone closure of the given generating sets.
    pub fn new(n: usize, generators: &[ParticipantSet]) -> Result<Self, SpanError> {
        if n == 0 || n > MAX_PARTICIPANTS {
            return Err(SpanError::TooManyParticipants(n));
        }
        let full = ParticipantSet::full(n);
        let mut authorized = vec![false; 1 << n];
        for &g in generators {
            if !g.is_subset(full) {
                let index = g.members().find(|&i| i >= n).unwrap_or(n);
                return Err(SpanError::UnknownParticipant { index, n });
            }
            authorized[g.0 as usize] = true;
        }
        // Upward closure: propagate along each single-element extension in
        // increasing mask order.
        for mask in 0..(1usize << n) {
            if authorized[mask] {
                for i in 0..n {
                    authorized[mask | (1 << i)] = true;
                }
            }
        }
        Ok(AccessStructure { n, authorized })
    }

    pub fn participants(&self) -> usize {
        self.n
    }

    /// The Boolean function `f(δ_A)`: whether `set` is authorized.
    pub fn is_authorized(&self, set: ParticipantSet) -> bool {
        set.is_subset(ParticipantSet::full(self.n)) && self.authorized[set.0 as usize]
    }

    /// Same as [`Self::is_authorized`] but evaluated on a 0/1 indicator vector.
    pub fn evaluate(&self, indicator: &[u8]) -> bool {
        let set = ParticipantSet::from_members(
            indicator
                .iter()
                .enumerate()
                .filter(|(_, &b)| b != 0)
                .map(|(i, _)| i),
        );
        self.is_authorized(set)
    }

    fn all_sets(&self) -> impl Iterator<Item = ParticipantSet> + '_ {
        (0..(1u32 << self.n)).map(ParticipantSet)
    }

    pub fn authorized_sets(&self) -> Vec<ParticipantSet> {
        self.all_sets().filter(|&s| self.is_authorized(s)).collect()
    }

    /// The adversary structure.
    pub fn unauthorized_sets(&self) -> Vec<ParticipantSet> {
        self.all_sets()
            .filter(|&s| !self.is_authorized(s))
            .collect()
    }

    pub fn minimal_authorized(&self) -> Vec<ParticipantSet> {
        self.all_sets()
            .filter(|&s| self.is_authorized(s))
            .filter(|&s| {
                s.members()
                    .all(|i| !self.is_authorized(ParticipantSet(s.0 & !(1 << i))))
            })
            .collect()
    }

    pub fn maximal_unauthorized(&self) -> Vec<ParticipantSet> {
        self.all_sets()
            .filter(|&s| !self.is_authorized(s))
            .filter(|&s| {
                (0..self.n)
                    .filter(|&i| !s.contains(i))
                    .all(|i| self.is_authorized(s.with(i)))
            })
            .collect()
    }

    /// Re-closes the structure from its minimal sets.
    pub fn closure(&self) -> AccessStructure {
        AccessStructure::new(self.n, &self.minimal_authorized()).expect("already valid")
    }
}

/// A monotone span program `(Z_d, M, ψ, ξ)` with `ξ = (1, 0, ..., 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Msp {
    matrix: FpMatrix,
    labels: Vec<usize>,
    n: usize,
}

impl Msp {
    /// `labels[row]` is the 0-based participant owning that row; it must be
    /// onto `0..n`.
    pub fn new(matrix: FpMatrix, labels: Vec<usize>, n: usize) -> Result<Self, SpanError> {
        if n == 0 || n > MAX_PARTICIPANTS {
            return Err(SpanError::TooManyParticipants(n));
        }
        if matrix.cols() == 0 {
            return Err(SpanError::EmptyMatrix);
        }
        if labels.len() != matrix.rows() {
            return Err(SpanError::LabelingLength {
                rows: matrix.rows(),
                found: labels.len(),
            });
        }
        if let Some(&index) = labels.iter().find(|&&p| p >= n) {
            return Err(SpanError::UnknownParticipant { index, n });
        }
        if let Some(missing) = (0..n).find(|p| !labels.contains(p)) {
            return Err(SpanError::LabelingNotSurjective(missing + 1));
        }
        Ok(Msp { matrix, labels, n })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.matrix.modulus()
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn participants(&self) -> usize {
        self.n
    }

    /// Length `l` of the secret vector.
    pub fn width(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target(&self) -> FpVector {
        FpVector::unit_first(self.modulus(), self.width())
    }

    /// Row indices owned by members of `set`, ascending.
    pub fn rows_of(&self, set: ParticipantSet) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&r| set.contains(self.labels[r]))
            .collect()
    }

    /// `M_A`: the rows owned by `set`.
    pub fn restrict(&self, set: ParticipantSet) -> FpMatrix {
        self.matrix.select_rows(&self.rows_of(set))
    }

    /// Whether the rows of `set` span the target vector.
    pub fn spans_target(&self, set: ParticipantSet) -> bool {
        self.recombination(set).is_ok()
    }

    /// Canonical recombination vector `λ_A` with `M_A^T λ_A = ξ`.
    pub fn recombination(&self, set: ParticipantSet) -> Result<RecombinationVector, SpanError> {
        let rows = self.rows_of(set);
        let lambda = self
            .matrix
            .select_rows(&rows)
            .transpose()
            .solve(&self.target())?
            .ok_or(SpanError::NotAuthorized(set))?;
        Ok(RecombinationVector { set, rows, lambda })
    }

    /// Canonical sweeping vector `h` with `h_1 = 1` and `M_B h = 0`.
    pub fn sweeping_vector(&self, set: ParticipantSet) -> Option<FpVector> {
        self.restrict(set).kernel_with_unit_first_coord()
    }

    /// Shares `M ρ`, routed to their owners.
    pub fn distribute(&self, rho: &FpVector) -> Result<ShareAssignment, SpanError> {
        let shares = self.matrix.mul_vec(rho)?;
        let mut per_participant = vec![Vec::new(); self.n];
        for (row, value) in shares.iter().enumerate() {
            per_participant[self.labels[row]].push((row, value));
        }
        Ok(ShareAssignment { per_participant })
    }

    /// The set of participants whose rows span the target, computed per subset.
    pub fn realized_structure(&self) -> AccessStructure {
        let gens: Vec<ParticipantSet> = (0..(1u32 << self.n))
            .map(ParticipantSet::from_bits)
            .filter(|&s| self.spans_target(s))
            .collect();
        AccessStructure::new(self.n, &gens).expect("n validated")
    }
}

/// Shares held by each participant as `(row, value)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareAssignment {
    per_participant: Vec<Vec<(usize, Fp)>>,
}

impl ShareAssignment {
    pub fn participant(&self, p: usize) -> &[(usize, Fp)] {
        &self.per_participant[p]
    }

    pub fn participants(&self) -> usize {
        self.per_participant.len()
    }

    /// Only the shares of members of `set`; other participants hold nothing.
    pub fn restrict(&self, set: ParticipantSet) -> ShareAssignment {
        ShareAssignment {
            per_participant: self
                .per_participant
                .iter()
                .enumerate()
                .map(|(p, s)| {
                    if set.contains(p) {
                        s.clone()
                    } else {
                        Vec::new()
                    }
                })
                .collect(),
        }
    }

    pub fn share_of_row(&self, row: usize) -> Option<Fp> {
        self.per_participant
            .iter()
            .flatten()
            .find(|(r, _)| *r == row)
            .map(|&(_, v)| v)
    }

    /// All held shares sorted by row.
    pub fn by_row(&self) -> Vec<(usize, Fp)> {
        let mut all: Vec<_> = self.per_participant.iter().flatten().copied().collect();
        all.sort_by_key(|&(r, _)| r);
        all
    }

    /// Replaces the value held for `row`; returns false when no one holds it.
    pub fn set_row(&mut self, row: usize, value: Fp) -> bool {
        for (r, v) in self.per_participant.iter_mut().flatten() {
            if *r == row {
                *v = value;
                return true;
            }
        }
        false
    }
}

/// `λ_A`, indexed by the rows `set` owns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecombinationVector {
    pub set: ParticipantSet,
    pub rows: Vec<usize>,
    pub lambda: FpVector,
}

impl RecombinationVector {
    /// `λ` entry for a given matrix row, zero for rows outside the set.
    pub fn coefficient(&self, row: usize) -> Fp {
        self.rows
            .iter()
            .position(|&r| r == row)
            .map(|i| self.lambda.get(i))
            .unwrap_or_else(|| self.lambda.modulus().zero())
    }

    /// Checks `M_A^T λ = ξ` exactly.
    pub fn is_valid_for(&self, msp: &Msp) -> bool {
        let rows = msp.rows_of(self.set);
        if rows != self.rows || self.lambda.len() != rows.len() {
            return false;
        }
        msp.matrix()
            .select_rows(&rows)
            .transpose()
            .mul_vec(&self.lambda)
            .map(|v| v == msp.target())
            .unwrap_or(false)
    }
}

/// `s_A^T λ_A`, which equals `ρ[0]` for shares produced by [`Msp::distribute`].
pub fn reconstruct(
    shares: &ShareAssignment,
    lambda: &RecombinationVector,
) -> Result<Fp, SpanError> {
    let m = lambda.lambda.modulus();
    if lambda.rows.len() != lambda.lambda.len() {
        return Err(FieldError::DimensionMismatch {
            expected: lambda.rows.len(),
            found: lambda.lambda.len(),
        }
        .into());
    }
    let mut acc = m.zero();
    for (i, &row) in lambda.rows.iter().enumerate() {
        let s = shares
            .share_of_row(row)
            .ok_or(SpanError::MissingShare(row))?;
        acc = acc.try_add(s.try_mul(lambda.lambda.get(i))?)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Authorized,
    Unauthorized,
}

/// One line of an MSP verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetCheck {
    pub set: ParticipantSet,
    pub expected: Expectation,
    pub spans_target: bool,
    #[serde(serialize_with = "ser_opt_vec")]
    pub lambda: Option<FpVector>,
    #[serde(serialize_with = "ser_opt_vec")]
    pub sweeping: Option<FpVector>,
    pub passed: bool,
}

fn ser_opt_vec<S: serde::Serializer>(v: &Option<FpVector>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref().map(|v| v.values().to_vec()).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MspReport {
    pub checks: Vec<SetCheck>,
}

impl MspReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SetCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for MspReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<22} {:<13} {:<7} {:<14} {:<14} result",
            "set", "expected", "spans", "lambda", "sweeping"
        )?;
        for c in &self.checks {
            let show = |v: &Option<FpVector>| v.as_ref().map_or("-".to_string(), |v| v.to_string());
            writeln!(
                f,
                "{:<22} {:<13} {:<7} {:<14} {:<14} {}",
                c.set.to_string(),
                match c.expected {
                    Expectation::Authorized => "authorized",
                    Expectation::Unauthorized => "unauthorized",
                },
                c.spans_target,
                show(&c.lambda),
                show(&c.sweeping),
                if c.passed { "pass" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// Checks that `msp` realizes `gamma`: every authorized set has a recombination
/// vector; every maximal unauthorized set has none and has a sweeping vector.
pub fn verify_msp(msp: &Msp, gamma: &AccessStructure) -> Result<MspReport, SpanError> {
    if msp.participants() != gamma.participants() {
        return Err(SpanError::ParticipantCountMismatch {
            msp: msp.participants(),
            gamma: gamma.participants(),
        });
    }
    let mut checks = Vec::new();
    for set in gamma.authorized_sets() {
        let lambda = msp.recombination(set).ok().map(|r| r.lambda);
        checks.push(SetCheck {
            set,
            expected: Expectation::Authorized,
            spans_target: lambda.is_some(),
            passed: lambda.is_some(),
            lambda,
            sweeping: None,
        });
    }
    for set in gamma.maximal_unauthorized() {
        let lambda = msp.recombination(set).ok().map(|r| r.lambda);
        let sweeping = msp.sweeping_vector(set);
        checks.push(SetCheck {
            set,
            expected: Expectation::Unauthorized,
            spans_target: lambda.is_some(),
            passed: lambda.is_none() && sweeping.is_some(),
            lambda,
            sweeping,
        });
    }
    Ok(MspReport { checks })
}

/// Distinct B-restricted share vectors with multiplicity, as a sorted list.
pub(crate) fn restricted_share_multiset(
    msp: &Msp,
    set: ParticipantSet,
    first: Fp,
) -> Result<Vec<Vec<u32>>, SpanError> {
    let m = msp.modulus();
    let d = m.get() as u64;
    let l = msp.width();
    let rows = msp.rows_of(set);
    let restricted = msp.matrix().select_rows(&rows);
    let count = d.pow((l - 1) as u32);
    let mut out = Vec::with_capacity(count as usize);
    let mut rho = vec![0i64; l];
    rho[0] = first.value() as i64;
    for code in 0..count {
        let mut c = code;
        for slot in rho.iter_mut().skip(1) {
            *slot = (c % d) as i64;
            c /= d;
        }
        let shares = restricted.mul_vec(&FpVector::from_ints(m, &rho))?;
        out.push(shares.values().to_vec());
    }
    out.sort_unstable();
    Ok(out)
}

/// Participant sets of `msp` that admit a sweeping vector.
pub fn sweeping_sets(msp: &Msp) -> BTreeSet<ParticipantSet> {
    (0..(1u32 << msp.participants()))
        .map(ParticipantSet::from_bits)
        .filter(|&s| msp.sweeping_vector(s).is_some())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

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
        AccessStructure::new(4, &[set(&[1, 2, 3]), set(&[1, 2, 4]), set(&[1, 2, 3, 4])]).unwrap()
    }

    #[test]
    fn listed_structure_adversary_sets() {
        let gamma = listed_structure();
        assert_eq!(gamma.authorized_sets().len(), 3);
        assert_eq!(gamma.unauthorized_sets().len(), 13);
        assert_eq!(
            gamma.maximal_unauthorized(),
            vec![set(&[1, 2]), set(&[1, 3, 4]), set(&[2, 3, 4])]
        );
        assert_eq!(
            gamma.minimal_authorized(),
            vec![set(&[1, 2, 3]), set(&[1, 2, 4])]
        );
        assert!(gamma.evaluate(&[1, 1, 0, 1]));
        assert!(!gamma.evaluate(&[1, 1, 0, 0]));
    }

    #[test]
    fn closure_is_monotone_and_idempotent() {
        let gamma = listed_structure();
        for a in gamma.authorized_sets() {
            for i in 0..4 {
                assert!(gamma.is_authorized(a.with(i)));
            }
        }
        assert_eq!(gamma.closure(), gamma);
    }

    #[test]
    fn rejects_bad_structures() {
        assert!(AccessStructure::new(17, &[]).is_err());
        assert!(matches!(
            AccessStructure::new(2, &[set(&[3])]),
            Err(SpanError::UnknownParticipant { .. })
        ));
        let m = FpMatrix::identity(d5(), 2);
        assert_eq!(
            Msp::new(m.clone(), vec![0, 0], 2),
            Err(SpanError::LabelingNotSurjective(2))
        );
        assert!(matches!(
            Msp::new(m, vec![0], 1),
            Err(SpanError::LabelingLength { .. })
        ));
    }

    #[test]
    fn recombination_examples() {
        let msp = worked_msp();
        let a1 = msp.recombination(set(&[1, 2, 3])).unwrap();
        assert_eq!(a1.lambda.values(), &[1, 1, 0]);
        assert!(a1.is_valid_for(&msp));
        let a2 = msp.recombination(set(&[1, 2, 4])).unwrap();
        assert_eq!(a2.lambda.values(), &[1, 1, 0]);
        let a3 = msp.recombination(set(&[1, 2, 3, 4])).unwrap();
        assert_eq!(a3.lambda.values(), &[1, 1, 0, 0]);
        assert!(a3.is_valid_for(&msp));
        assert_eq!(
            msp.recombination(set(&[3, 4])),
            Err(SpanError::NotAuthorized(set(&[3, 4])))
        );
    }

    #[test]
    fn published_lambda_for_full_set_is_rejected() {
        let msp = worked_msp();
        let bad = RecombinationVector {
            set: set(&[1, 2, 3, 4]),
            rows: vec![0, 1, 2, 3],
            lambda: FpVector::from_ints(d5(), &[1, 1, 3, 4]),
        };
        assert!(!bad.is_valid_for(&msp));
        let sum = msp.matrix().transpose().mul_vec(&bad.lambda).unwrap();
        assert_eq!(sum.values(), &[4, 0, 4, 0]);
    }

    #[test]
    fn distribute_examples() {
        let msp = worked_msp();
        let rho = FpVector::from_ints(d5(), &[4, 1, 0, 2]);
        let shares = msp.distribute(&rho).unwrap();
        let values: Vec<u32> = shares.by_row().iter().map(|(_, v)| v.value()).collect();
        assert_eq!(values, vec![2, 2, 1, 1]);
        for p in 0..4 {
            assert_eq!(shares.participant(p).len(), 1);
        }
        let zero = msp.distribute(&FpVector::zeros(d5(), 4)).unwrap();
        assert!(zero.by_row().iter().all(|(_, v)| v.is_zero()));

        let id = Msp::new(FpMatrix::identity(d5(), 3), vec![0, 1, 2], 3).unwrap();
        let rho = FpVector::from_ints(d5(), &[3, 1, 4]);
        let s = id.distribute(&rho).unwrap();
        assert_eq!(
            s.by_row()
                .iter()
                .map(|(_, v)| v.value())
                .collect::<Vec<_>>(),
            vec![3, 1, 4]
        );
        assert!(msp.distribute(&FpVector::zeros(d5(), 3)).is_err());
    }

    #[test]
    fn reconstruct_examples() {
        let msp = worked_msp();
        let shares = msp
            .distribute(&FpVector::from_ints(d5(), &[4, 1, 0, 2]))
            .unwrap();
        let a1 = set(&[1, 2, 3]);
        let lambda = msp.recombination(a1).unwrap();
        assert_eq!(
            reconstruct(&shares.restrict(a1), &lambda).unwrap().value(),
            4
        );

        let zero = msp.distribute(&FpVector::zeros(d5(), 4)).unwrap();
        assert!(reconstruct(&zero, &lambda).unwrap().is_zero());

        let missing = shares.restrict(set(&[1]));
        assert_eq!(
            reconstruct(&missing, &lambda),
            Err(SpanError::MissingShare(1))
        );
    }

    #[test]
    fn reconstruct_random_rho() {
        use rand::{Rng, SeedableRng};
        let msp = worked_msp();
        let a1 = set(&[1, 2, 3]);
        let lambda = msp.recombination(a1).unwrap();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(200);
        for _ in 0..200 {
            let tail: Vec<i64> = (0..3).map(|_| rng.random_range(0..5)).collect();
            let rho = FpVector::from_ints(d5(), &[3, tail[0], tail[1], tail[2]]);
            let shares = msp.distribute(&rho).unwrap().restrict(a1);
            assert_eq!(reconstruct(&shares, &lambda).unwrap().value(), 3);
        }
    }

    #[test]
    fn verify_worked_msp_against_listed_structure_flags_p1_p2() {
        let report = verify_msp(&worked_msp(), &listed_structure()).unwrap();
        let failures: Vec<_> = report.failures().collect();
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].set, set(&[1, 2]));
        assert!(failures[0].spans_target);
        assert_eq!(failures[0].lambda.as_ref().unwrap().values(), &[1, 1]);
    }

    #[test]
    fn verify_trivial_and_corrected_structures() {
        let one = Msp::new(FpMatrix::identity(d5(), 1), vec![0], 1).unwrap();
        let gamma = AccessStructure::new(1, &[set(&[1])]).unwrap();
        assert!(verify_msp(&one, &gamma).unwrap().all_passed());

        let closure = AccessStructure::new(4, &[set(&[1, 2])]).unwrap();
        let report = verify_msp(&worked_msp(), &closure).unwrap();
        assert!(report.all_passed(), "{report}");
        assert_eq!(worked_msp().realized_structure(), closure);
    }

    #[test]
    fn verify_rejects_participant_mismatch() {
        let gamma = AccessStructure::new(3, &[set(&[1])]).unwrap();
        assert!(matches!(
            verify_msp(&worked_msp(), &gamma),
            Err(SpanError::ParticipantCountMismatch { .. })
        ));
    }

    #[test]
    fn sweeping_vectors_match_unauthorized_sets() {
        let msp = worked_msp();
        let realized = msp.realized_structure();
        for bits in 0..16u32 {
            let s = ParticipantSet::from_bits(bits);
            assert_eq!(
                msp.sweeping_vector(s).is_some(),
                !realized.is_authorized(s),
                "{s}"
            );
        }
        assert_eq!(
            msp.sweeping_vector(set(&[3, 4])).unwrap().values(),
            &[1, 1, 3, 0]
        );
    }

    #[test]
    fn multi_row_participants() {
        // Participant 1 owns two rows; alone it spans the target.
        let m = FpMatrix::from_rows(d5(), 2, &[vec![1, 1], vec![0, 1], vec![1, 3]]).unwrap();
        let msp = Msp::new(m, vec![0, 0, 1], 2).unwrap();
        let r = msp.recombination(set(&[1])).unwrap();
        assert_eq!(r.rows, vec![0, 1]);
        assert!(r.is_valid_for(&msp));
        let rho = FpVector::from_ints(d5(), &[2, 4]);
        let shares = msp.distribute(&rho).unwrap();
        assert_eq!(shares.participant(0).len(), 2);
        assert_eq!(reconstruct(&shares, &r).unwrap().value(), 2);
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(set(&[1, 3]).to_string(), "{P1,P3}");
        assert_eq!(ParticipantSet::EMPTY.to_string(), "{}");
        assert_eq!(set(&[2, 4]).labels(), vec![2, 4]);
    }
}
