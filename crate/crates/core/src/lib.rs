// SPDX-License-Identifier: Apache-2.0

//! Fidelity and entanglement-generation diagnostics for bipartite quantum
//! channels in Kraus form.
//!
//! Analytic formulas (average and product-input fidelities, the fidelity bias,
//! two-copy purity averages and the bounds built from them) sit next to seeded
//! Monte Carlo estimators over Haar-random inputs, so that every closed form can
//! be checked against direct sampling.
//!
//! ```
//! use biq_core::{fidelity, zoo};
//!
//! let ch = zoo::correlated_dephasing(0.25).unwrap();
//! let u = 0.5;
//! assert!((fidelity::favg_analytic(&ch) - (0.6 + 0.4 * u)).abs() < 1e-12);
//! ```

pub mod channel;
pub mod eig;
pub mod entpower;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod measures;
pub mod orbit;
pub mod report;
pub mod sampling;
pub mod state;
pub mod twocopy;
pub mod zoo;

pub use channel::{KrausChannel, ValidationReport};
pub use eig::HermitianEigenDecomposition;
pub use entpower::{DeltaP, EntanglingPowerReport};
pub use error::{Error, Result};
pub use fidelity::FidelityProfile;
pub use linalg::{ComplexMatrix, Subsystem, SwapPair};
pub use measures::StateMeasures;
pub use orbit::OrbitVariationReport;
pub use report::{Diagnostic, DiagnosticsReport};
pub use sampling::{McEstimate, SampleStream, SchmidtOrbit};
pub use twocopy::TwoCopyTable;

pub use num_complex::Complex64;
