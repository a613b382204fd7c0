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

//! Single-qudit states in the mutually unbiased bases of an odd prime
//! dimension, the diagonal unitaries `U_{x,y} = X^x Y^y`, and projective
//! measurement.
//!
//! Each state has two forms: a symbolic [`StateLabel`] `(l, j)` naming the
//! `l`-th vector of the `j`-th basis, and a numeric [`StateVector`]. The
//! protocol manipulates labels; attacks need vectors. Comparisons between
//! vectors always go through fidelity, so global phases never matter.

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Fp, PrimeModulus};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuditError {
    #[error("state norm deviates from 1 by {0:e}")]
    NormViolation(f64),
    #[error("state has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("label modulus {found} does not match space dimension {expected}")]
    ModulusMismatch { expected: u32, found: u32 },
}

/// The symbolic name `(l, j)` of `|v_l^{(j)}⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateLabel {
    pub l: Fp,
    pub j: Fp,
}

impl StateLabel {
    pub fn new(l: Fp, j: Fp) -> Self {
        StateLabel { l, j }
    }
}

impl Serialize for StateLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.l.value(), self.j.value()].serialize(s)
    }
}

impl std::fmt::Display for StateLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.l, self.j)
    }
}

/// `(x, y)` naming `U_{x,y} = X_d^x Y_d^y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitaryLabel {
    pub x: Fp,
    pub y: Fp,
}

impl UnitaryLabel {
    pub fn new(x: Fp, y: Fp) -> Self {
        UnitaryLabel { x, y }
    }

    pub fn identity(d: PrimeModulus) -> Self {
        UnitaryLabel {
            x: d.zero(),
            y: d.zero(),
        }
    }

    /// The unitary equal to applying `self` then `next`.
    pub fn then(self, next: UnitaryLabel) -> UnitaryLabel {
        UnitaryLabel {
            x: self.x + next.x,
            y: self.y + next.y,
        }
    }
}

/// A measurement basis: the computational basis `{|k⟩}` or the `j`-th MUB.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Computational,
    Mub(Fp),
}

/// A pure qudit state as a length-`d` amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps amplitudes, requiring unit norm within `T::FIDELITY_TOL`.
    pub fn new(amps: Vec<Complex<T>>) -> Result<Self, QuditError> {
        let s = StateVector { amps };
        let dev = (s.norm_sqr() - T::one()).abs();
        if dev > T::FIDELITY_TOL {
            return Err(QuditError::NormViolation(dev.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(s)
    }

    /// Wraps amplitudes without checking the norm.
    pub fn from_raw(amps: Vec<Complex<T>>) -> Self {
        StateVector { amps }
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }
}

/// The Hilbert space of one qudit of prime dimension `d`, with a cached
/// table of the powers of `ω = e^{2πi/d}`.
#[derive(Debug, Clone)]
pub struct QuditSpace<T> {
    modulus: PrimeModulus,
    roots: Vec<Complex<T>>,
    amp: T,
}

impl<T: Real> QuditSpace<T> {
    pub fn new(modulus: PrimeModulus) -> Self {
        let d = modulus.order();
        // Angles in f64 regardless of T, then narrowed.
        let roots = (0..d)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / d as f64;
                Complex::new(T::of(theta.cos()), T::of(theta.sin()))
            })
            .collect();
        QuditSpace {
            modulus,
            roots,
            amp: T::of(1.0 / (d as f64).sqrt()),
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.modulus.order()
    }

    /// `ω = e^{2πi/d}`.
    pub fn omega(&self) -> Complex<T> {
        self.roots[1]
    }

    /// `ω^e` for an exponent already reduced or not.
    #[inline]
    pub fn omega_pow(&self, e: u64) -> Complex<T> {
        self.roots[(e % self.modulus.get() as u64) as usize]
    }

    fn check_fp(&self, v: Fp) -> Result<(), QuditError> {
        if v.modulus() != self.modulus {
            return Err(QuditError::ModulusMismatch {
                expected: self.modulus.get(),
                found: v.modulus().get(),
            });
        }
        Ok(())
    }

    fn check_dim(&self, psi: &StateVector<T>) -> Result<(), QuditError> {
        if psi.dim() != self.dim() {
            return Err(QuditError::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(())
    }

    /// `|v_l^{(j)}⟩ = d^{-1/2} Σ_k ω^{k(l + jk)} |k⟩`.
    pub fn mub_vector(&self, label: StateLabel) -> StateVector<T> {
        assert_eq!(label.l.modulus(), self.modulus, "label modulus");
        let d = self.modulus.get() as u64;
        let (l, j) = (label.l.value() as u64, label.j.value() as u64);
        let amps = (0..d)
            .map(|k| self.omega_pow(k * ((l + j * k) % d)) * self.amp)
            .collect();
        StateVector { amps }
    }

    /// `|k⟩`.
    pub fn computational(&self, k: Fp) -> StateVector<T> {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); self.dim()];
        amps[k.value() as usize] = Complex::new(T::one(), T::zero());
        StateVector { amps }
    }

    /// The `l`-th vector of `basis`.
    pub fn basis_vector(&self, basis: Basis, l: Fp) -> StateVector<T> {
        match basis {
            Basis::Computational => self.computational(l),
            Basis::Mub(j) => self.mub_vector(StateLabel::new(l, j)),
        }
    }

    /// Applies the diagonal `U_{x,y}`: amplitude `m` gains `ω^{xm + ym²}`.
    pub fn apply_unitary(
        &self,
        u: UnitaryLabel,
        psi: &StateVector<T>,
    ) -> Result<StateVector<T>, QuditError> {
        self.check_fp(u.x)?;
        self.check_fp(u.y)?;
        self.check_dim(psi)?;
        let d = self.modulus.get() as u64;
        let (x, y) = (u.x.value() as u64, u.y.value() as u64);
        let amps = psi
            .amps
            .iter()
            .enumerate()
            .map(|(m, &a)| {
                let m = m as u64;
                a * self.omega_pow(x * m + y * (m * m % d))
            })
            .collect();
        Ok(StateVector { amps })
    }

    /// `⟨a|b⟩`.
    pub fn overlap(&self, a: &StateVector<T>, b: &StateVector<T>) -> Complex<T> {
        overlap(a, b)
    }

    /// Samples a projective measurement of `psi` in the MUB `basis_j`.
    ///
    /// Returns the outcome `l` and the post-measurement state
    /// `|v_l^{(basis_j)}⟩`. One uniform draw is consumed per call; if `psi`
    /// coincides with a basis vector the outcome is that vector's index.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        psi: &StateVector<T>,
        basis_j: Fp,
        rng: &mut R,
    ) -> Result<(Fp, StateVector<T>), QuditError> {
        self.measure_in(psi, Basis::Mub(basis_j), rng)
    }

    /// As [`Self::measure`], for any basis including the computational one.
    pub fn measure_in<R: Rng + ?Sized>(
        &self,
        psi: &StateVector<T>,
        basis: Basis,
        rng: &mut R,
    ) -> Result<(Fp, StateVector<T>), QuditError> {
        self.check_dim(psi)?;
        if let Basis::Mub(j) = basis {
            self.check_fp(j)?;
        }
        let dev = (psi.norm_sqr() - T::one()).abs();
        if dev > T::MEASURE_NORM_TOL {
            return Err(QuditError::NormViolation(dev.to_f64().unwrap_or(f64::NAN)));
        }
        let probs = self.born_probabilities(psi, basis);
        let u = T::of(rng.random::<f64>());

        let outcome = match probs.iter().position(|&p| p > T::one() - T::FIDELITY_TOL) {
            Some(sure) => sure,
            None => {
                let mut acc = T::zero();
                let mut pick = None;
                for (l, &p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        pick = Some(l);
                        break;
                    }
                }
                // Rounding can leave the cumulative sum just under 1.
                pick.unwrap_or_else(|| {
                    probs
                        .iter()
                        .rposition(|&p| p > T::zero())
                        .unwrap_or(probs.len() - 1)
                })
            }
        };
        let l = self.modulus.elem(outcome as i64);
        Ok((l, self.basis_vector(basis, l)))
    }

    /// `|⟨v_l|psi⟩|²` for each vector `v_l` of `basis`.
    pub fn born_probabilities(&self, psi: &StateVector<T>, basis: Basis) -> Vec<T> {
        self.modulus
            .elements()
            .map(|l| overlap(&self.basis_vector(basis, l), psi).norm_sqr())
            .collect()
    }
}

/// `U_{x,y}` acting on a label: `(l, j) ↦ (l + x, j + y)`.
pub fn shift_label(u: UnitaryLabel, label: StateLabel) -> StateLabel {
    StateLabel {
        l: label.l + u.x,
        j: label.j + u.y,
    }
}

/// `⟨a|b⟩ = Σ conj(a_k) b_k`.
pub fn overlap<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Complex<T> {
    a.amps
        .iter()
        .zip(&b.amps)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * y
        })
}

/// `|⟨a|b⟩|²`; equals 1 exactly when the states agree up to global phase.
pub fn fidelity<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> T {
    overlap(a, b).norm_sqr()
}

/// Whether two states are equal up to a global phase.
pub fn same_state<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> bool {
    fidelity(a, b) >= T::one() - T::FIDELITY_TOL
}
