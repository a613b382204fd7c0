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

//! Exact arithmetic and dense linear algebra over the prime field Z_d.
//!
//! Every element carries its modulus. Vectors and matrices store raw residues
//! under a single shared modulus, so mixing moduli is impossible inside them
//! and is reported as [`FieldError::ModulusMismatch`] at every boundary.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest supported modulus.
pub const MIN_MODULUS: u32 = 3;
/// Largest supported modulus.
pub const MAX_MODULUS: u32 = 997;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime in [{MIN_MODULUS}, {MAX_MODULUS}]")]
    InvalidModulus(u32),
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
}

/// The modulus `d` of the field Z_d; an odd prime in `[3, 997]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PrimeModulus(u32);

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    (2..)
        .take_while(|p| p * p <= n)
        .all(|p| !n.is_multiple_of(p))
}

impl PrimeModulus {
    pub fn new(d: u32) -> Result<Self, FieldError> {
        if !(MIN_MODULUS..=MAX_MODULUS).contains(&d) || !is_prime(d) {
            return Err(FieldError::InvalidModulus(d));
        }
        Ok(PrimeModulus(d))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Number of field elements, as a `usize`.
    #[inline]
    pub fn order(self) -> usize {
        self.0 as usize
    }

    /// Reduces an arbitrary signed integer into the field.
    pub fn elem(self, value: i64) -> Fp {
        Fp {
            value: value.rem_euclid(self.0 as i64) as u32,
            modulus: self,
        }
    }

    pub fn zero(self) -> Fp {
        self.elem(0)
    }

    pub fn one(self) -> Fp {
        self.elem(1)
    }

    /// All elements `0, 1, ..., d-1` in order.
    pub fn elements(self) -> impl Iterator<Item = Fp> {
        (0..self.0).map(move |v| Fp {
            value: v,
            modulus: self,
        })
    }

    #[inline]
    fn reduce(self, v: u64) -> u32 {
        (v % self.0 as u64) as u32
    }

    #[inline]
    fn add_raw(self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 + b as u64)
    }

    #[inline]
    fn mul_raw(self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    #[inline]
    fn neg_raw(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    fn inv_raw(self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        // Fermat: a^(d-2)
        let mut base = a as u64;
        let mut exp = self.0 - 2;
        let mut acc = 1u64;
        let m = self.0 as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Some(acc as u32)
    }
}

impl<'de> Deserialize<'de> for PrimeModulus {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let d = u32::deserialize(deserializer)?;
        PrimeModulus::new(d).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of Z_d, always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: PrimeModulus,
}

impl Fp {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, rhs: Fp) -> Result<PrimeModulus, FieldError> {
        if self.modulus != rhs.modulus {
            return Err(FieldError::ModulusMismatch {
                left: self.modulus.0,
                right: rhs.modulus.0,
            });
        }
        Ok(self.modulus)
    }

    pub fn try_add(self, rhs: Fp) -> Result<Fp, FieldError> {
        let m = self.check(rhs)?;
        Ok(Fp {
            value: m.add_raw(self.value, rhs.value),
            modulus: m,
        })
    }

    pub fn try_sub(self, rhs: Fp) -> Result<Fp, FieldError> {
        let m = self.check(rhs)?;
        Ok(Fp {
            value: m.add_raw(self.value, m.neg_raw(rhs.value)),
            modulus: m,
        })
    }

    pub fn try_mul(self, rhs: Fp) -> Result<Fp, FieldError> {
        let m = self.check(rhs)?;
        Ok(Fp {
            value: m.mul_raw(self.value, rhs.value),
            modulus: m,
        })
    }

    pub fn inv(self) -> Result<Fp, FieldError> {
        let value = self
            .modulus
            .inv_raw(self.value)
            .ok_or(FieldError::InverseOfZero)?;
        Ok(Fp {
            value,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on mismatched moduli; use the `try_*` forms where the
// operands come from different sources.
impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.try_add(rhs).expect("Fp addition")
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.try_sub(rhs).expect("Fp subtraction")
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.try_mul(rhs).expect("Fp multiplication")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: self.modulus.neg_raw(self.value),
            modulus: self.modulus,
        }
    }
}

/// A vector over Z_d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpVector {
    modulus: PrimeModulus,
    entries: Vec<u32>,
}

impl FpVector {
    /// Builds a vector from integers, reducing each into the field.
    pub fn from_ints(modulus: PrimeModulus, values: &[i64]) -> Self {
        FpVector {
            modulus,
            entries: values.iter().map(|&v| modulus.elem(v).value).collect(),
        }
    }

    pub fn from_elems(modulus: PrimeModulus, values: &[Fp]) -> Result<Self, FieldError> {
        let mut entries = Vec::with_capacity(values.len());
        for v in values {
            if v.modulus != modulus {
                return Err(FieldError::ModulusMismatch {
                    left: modulus.0,
                    right: v.modulus.0,
                });
            }
            entries.push(v.value);
        }
        Ok(FpVector { modulus, entries })
    }

    pub fn zeros(modulus: PrimeModulus, len: usize) -> Self {
        FpVector {
            modulus,
            entries: vec![0; len],
        }
    }

    /// The unit vector `(1, 0, ..., 0)` of length `len`.
    pub fn unit_first(modulus: PrimeModulus, len: usize) -> Self {
        let mut v = Self::zeros(modulus, len);
        if len > 0 {
            v.entries[0] = 1;
        }
        v
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Fp {
        Fp {
            value: self.entries[i],
            modulus: self.modulus,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Fp> + '_ {
        self.entries.iter().map(move |&value| Fp {
            value,
            modulus: self.modulus,
        })
    }

    /// Raw residues in `[0, d)`.
    pub fn values(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn dot(&self, other: &FpVector) -> Result<Fp, FieldError> {
        if self.modulus != other.modulus {
            return Err(FieldError::ModulusMismatch {
                left: self.modulus.0,
                right: other.modulus.0,
            });
        }
        if self.len() != other.len() {
            return Err(FieldError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let m = self.modulus;
        let acc = self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0u32, |acc, (&a, &b)| m.add_raw(acc, m.mul_raw(a, b)));
        Ok(Fp {
            value: acc,
            modulus: m,
        })
    }

    /// `self + c * other`, elementwise.
    pub fn add_scaled(&self, c: Fp, other: &FpVector) -> Result<FpVector, FieldError> {
        if self.len() != other.len() {
            return Err(FieldError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let m = self.modulus;
        for mm in [c.modulus, other.modulus] {
            if mm != m {
                return Err(FieldError::ModulusMismatch {
                    left: m.0,
                    right: mm.0,
                });
            }
        }
        Ok(FpVector {
            modulus: m,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| m.add_raw(a, m.mul_raw(c.value, b)))
                .collect(),
        })
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A dense row-major `rows x cols` matrix over Z_d. Either dimension may be 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    modulus: PrimeModulus,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(modulus: PrimeModulus, rows: usize, cols: usize) -> Self {
        FpMatrix {
            modulus,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: PrimeModulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(
        modulus: PrimeModulus,
        cols: usize,
        rows: &[Vec<i64>],
    ) -> Result<Self, FieldError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(FieldError::RaggedMatrix {
                    row: r,
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().map(|&v| modulus.elem(v).value));
        }
        Ok(FpMatrix {
            modulus,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Fp {
        Fp {
            value: self.entries[r * self.cols + c],
            modulus: self.modulus,
        }
    }

    pub fn row(&self, r: usize) -> FpVector {
        FpVector {
            modulus: self.modulus,
            entries: self.entries[r * self.cols..(r + 1) * self.cols].to_vec(),
        }
    }

    /// Rows as plain integer vectors, for display and serialization.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|r| self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.entries[r * self.cols + c];
            }
        }
        t
    }

    /// The submatrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> FpMatrix {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            entries.extend_from_slice(&self.entries[r * self.cols..(r + 1) * self.cols]);
        }
        FpMatrix {
            modulus: self.modulus,
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    fn select_cols(&self, from: usize) -> FpMatrix {
        let cols = self.cols - from;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(&self.entries[r * self.cols + from..(r + 1) * self.cols]);
        }
        FpMatrix {
            modulus: self.modulus,
            rows: self.rows,
            cols,
            entries,
        }
    }

    pub fn mul_vec(&self, v: &FpVector) -> Result<FpVector, FieldError> {
        if self.modulus != v.modulus {
            return Err(FieldError::ModulusMismatch {
                left: self.modulus.0,
                right: v.modulus.0,
            });
        }
        if self.cols != v.len() {
            return Err(FieldError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let m = self.modulus;
        let entries = (0..self.rows)
            .map(|r| {
                self.entries[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(&v.entries)
                    .fold(0u32, |acc, (&a, &b)| m.add_raw(acc, m.mul_raw(a, b)))
            })
            .collect();
        Ok(FpVector {
            modulus: m,
            entries,
        })
    }

    /// Canonical solution of `self * x = b`.
    ///
    /// Gauss-Jordan elimination to reduced row echelon form, scanning columns
    /// left to right and taking the first row with a nonzero entry as pivot.
    /// Free variables are set to zero. `Ok(None)` means the system is
    /// inconsistent.
    pub fn solve(&self, b: &FpVector) -> Result<Option<FpVector>, FieldError> {
        if self.modulus != b.modulus {
            return Err(FieldError::ModulusMismatch {
                left: self.modulus.0,
                right: b.modulus.0,
            });
        }
        if self.rows != b.len() {
            return Err(FieldError::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let m = self.modulus;
        let (rows, cols) = (self.rows, self.cols);
        let width = cols + 1;
        let mut aug = vec![0u32; rows * width];
        for r in 0..rows {
            aug[r * width..r * width + cols]
                .copy_from_slice(&self.entries[r * cols..(r + 1) * cols]);
            aug[r * width + cols] = b.entries[r];
        }

        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(sel) = (pr..rows).find(|&r| aug[r * width + c] != 0) else {
                continue;
            };
            if sel != pr {
                for k in 0..width {
                    aug.swap(sel * width + k, pr * width + k);
                }
            }
            let inv = m.inv_raw(aug[pr * width + c]).expect("nonzero pivot");
            for k in 0..width {
                aug[pr * width + k] = m.mul_raw(aug[pr * width + k], inv);
            }
            for r in 0..rows {
                let factor = aug[r * width + c];
                if r == pr || factor == 0 {
                    continue;
                }
                let nf = m.neg_raw(factor);
                for k in 0..width {
                    let sub = m.mul_raw(nf, aug[pr * width + k]);
                    aug[r * width + k] = m.add_raw(aug[r * width + k], sub);
                }
            }
            pivots.push(c);
            pr += 1;
        }

        // A zero row with a nonzero right-hand side is an inconsistency.
        if (pr..rows).any(|r| aug[r * width + cols] != 0) {
            return Ok(None);
        }
        let mut x = vec![0u32; cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[r * width + cols];
        }
        Ok(Some(FpVector {
            modulus: m,
            entries: x,
        }))
    }

    /// Canonical `h` with `h[0] = 1` and `self * h = 0`, if one exists.
    pub fn kernel_with_unit_first_coord(&self) -> Option<FpVector> {
        if self.cols == 0 {
            return None;
        }
        let m = self.modulus;
        let rhs = FpVector {
            modulus: m,
            entries: (0..self.rows)
                .map(|r| m.neg_raw(self.entries[r * self.cols]))
                .collect(),
        };
        let tail = self
            .select_cols(1)
            .solve(&rhs)
            .expect("dimensions agree by construction")?;
        let mut entries = Vec::with_capacity(self.cols);
        entries.push(1);
        entries.extend_from_slice(&tail.entries);
        Some(FpVector {
            modulus: m,
            entries,
        })
    }
}

/// `M * v` over Z_d.
pub fn mat_vec_mul(m: &FpMatrix, v: &FpVector) -> Result<FpVector, FieldError> {
    m.mul_vec(v)
}

/// Canonical solution of `a * x = b`; `Ok(None)` when inconsistent.
pub fn solve_linear(a: &FpMatrix, b: &FpVector) -> Result<Option<FpVector>, FieldError> {
    a.solve(b)
}

/// Canonical sweeping-style kernel vector with first coordinate 1.
pub fn kernel_with_unit_first_coord(a: &FpMatrix) -> Option<FpVector> {
    a.kernel_with_unit_first_coord()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: u32) -> PrimeModulus {
        PrimeModulus::new(d).unwrap()
    }

    fn worked_matrix() -> FpMatrix {
        FpMatrix::from_rows(
            p(5),
            4,
            &[
                vec![1, 0, 3, 4],
                vec![0, 0, 2, 1],
                vec![3, 4, 1, 0],
                vec![1, 2, 4, 0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn modulus_validation() {
        assert!(PrimeModulus::new(2).is_err());
        assert!(PrimeModulus::new(9).is_err());
        assert!(PrimeModulus::new(1009).is_err());
        assert!(PrimeModulus::new(997).is_ok());
        assert_eq!(p(5).get(), 5);
    }

    #[test]
    fn scalar_examples() {
        let d5 = p(5);
        assert_eq!(d5.elem(2).inv().unwrap().value(), 3);
        assert_eq!((d5.elem(4) + d5.elem(3)).value(), 2);
        assert_eq!(p(7).one().inv().unwrap().value(), 1);
        assert_eq!(d5.zero().inv(), Err(FieldError::InverseOfZero));
        assert_eq!((-d5.elem(2)).value(), 3);
        assert_eq!(d5.elem(-7).value(), 3);
    }

    #[test]
    fn mismatched_moduli_are_errors() {
        let a = p(5).elem(1);
        let b = p(7).elem(1);
        assert_eq!(
            a.try_add(b),
            Err(FieldError::ModulusMismatch { left: 5, right: 7 })
        );
        assert!(a.try_mul(b).is_err());
        let v = FpVector::from_ints(p(7), &[1, 2, 3, 4]);
        assert!(worked_matrix().mul_vec(&v).is_err());
    }

    #[test]
    fn inverses_exhaustive_small_primes() {
        for d in (3..=97).filter(|&d| is_prime(d)) {
            let m = p(d);
            for a in m.elements().skip(1) {
                assert_eq!(a * a.inv().unwrap(), m.one(), "d={d} a={a}");
            }
        }
    }

    #[test]
    fn mat_vec_examples() {
        let m = worked_matrix();
        let rho = FpVector::from_ints(p(5), &[4, 1, 0, 2]);
        assert_eq!(m.mul_vec(&rho).unwrap().values(), &[2, 2, 1, 1]);
        assert!(m.mul_vec(&FpVector::zeros(p(5), 4)).unwrap().is_zero());
        let id = FpMatrix::identity(p(5), 4);
        assert_eq!(id.mul_vec(&rho).unwrap(), rho);
        let short = FpVector::zeros(p(5), 3);
        assert_eq!(
            m.mul_vec(&short),
            Err(FieldError::DimensionMismatch {
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn solve_examples() {
        let a = worked_matrix().select_rows(&[0, 1, 2]).transpose();
        let b = FpVector::unit_first(p(5), 4);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x.values(), &[1, 1, 0]);
        assert_eq!(a.mul_vec(&x).unwrap(), b);

        let id = FpMatrix::identity(p(7), 3);
        let b = FpVector::from_ints(p(7), &[6, 0, 3]);
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);

        let a = FpMatrix::from_rows(p(5), 1, &[vec![1], vec![2]]).unwrap();
        let b = FpVector::from_ints(p(5), &[1, 1]);
        assert_eq!(a.solve(&b).unwrap(), None);
    }

    #[test]
    fn solve_free_variables_are_zero() {
        // x0 + x1 = 1 over Z_5: canonical answer pivots on x0.
        let a = FpMatrix::from_rows(p(5), 2, &[vec![1, 1]]).unwrap();
        let b = FpVector::from_ints(p(5), &[1]);
        assert_eq!(a.solve(&b).unwrap().unwrap().values(), &[1, 0]);
    }

    #[test]
    fn solve_degenerate_shapes() {
        let m = p(5);
        let empty_cols = FpMatrix::zeros(m, 2, 0);
        assert_eq!(
            empty_cols.solve(&FpVector::zeros(m, 2)).unwrap(),
            Some(FpVector::zeros(m, 0))
        );
        assert_eq!(empty_cols.solve(&FpVector::unit_first(m, 2)).unwrap(), None);
        let empty_rows = FpMatrix::zeros(m, 0, 3);
        assert_eq!(
            empty_rows.solve(&FpVector::zeros(m, 0)).unwrap(),
            Some(FpVector::zeros(m, 3))
        );
    }

    #[test]
    fn kernel_examples() {
        let h = worked_matrix()
            .select_rows(&[2, 3])
            .kernel_with_unit_first_coord()
            .unwrap();
        assert_eq!(h.values(), &[1, 1, 3, 0]);

        let z = FpMatrix::zeros(p(5), 2, 3);
        assert_eq!(
            z.kernel_with_unit_first_coord().unwrap().values(),
            &[1, 0, 0]
        );

        assert_eq!(
            worked_matrix()
                .select_rows(&[0, 1])
                .kernel_with_unit_first_coord(),
            None
        );
    }

    // Brute-force oracle over all tails of a candidate sweeping vector.
    fn brute_kernel(a: &FpMatrix) -> Vec<Vec<u32>> {
        let d = a.modulus().get();
        let tail = a.cols() - 1;
        let mut found = Vec::new();
        for code in 0..d.pow(tail as u32) {
            let mut h = vec![1i64];
            let mut c = code;
            for _ in 0..tail {
                h.push((c % d) as i64);
                c /= d;
            }
            let hv = FpVector::from_ints(a.modulus(), &h);
            if a.mul_vec(&hv).unwrap().is_zero() {
                found.push(hv.values().to_vec());
            }
        }
        found
    }

    #[test]
    fn kernel_agrees_with_brute_force() {
        let m = worked_matrix();
        for rows in [vec![2, 3], vec![0, 1], vec![0, 2], vec![1, 3], vec![2]] {
            let a = m.select_rows(&rows);
            let brute = brute_kernel(&a);
            match a.kernel_with_unit_first_coord() {
                Some(h) => assert!(brute.contains(&h.values().to_vec()), "rows {rows:?}"),
                None => assert!(brute.is_empty(), "rows {rows:?}"),
            }
        }
    }
}
