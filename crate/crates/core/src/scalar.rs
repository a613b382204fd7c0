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

//! Real scalar types for the state-vector simulation.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point type backing complex amplitudes: `f32` or `f64`.
///
/// Carries the comparison tolerances appropriate to its precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Slack for fidelity and unbiasedness checks.
    const FIDELITY_TOL: Self;
    /// Slack for norm preservation.
    const NORM_TOL: Self;
    /// Largest norm deviation a state may carry into a measurement.
    const MEASURE_NORM_TOL: Self;

    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("representable")
    }
}

impl Real for f64 {
    const FIDELITY_TOL: f64 = 1e-9;
    const NORM_TOL: f64 = 1e-12;
    const MEASURE_NORM_TOL: f64 = 1e-6;
}

impl Real for f32 {
    const FIDELITY_TOL: f32 = 1e-4;
    const NORM_TOL: f32 = 1e-5;
    const MEASURE_NORM_TOL: f32 = 1e-4;
}
