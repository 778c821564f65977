// SPDX-License-Identifier: Apache-2.0

//! Channel specifications accepted on the command line.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use biq_core::linalg::gates;
use biq_core::sampling::haar_unitary;
use biq_core::{zoo, ComplexMatrix, Complex64, KrausChannel, SampleStream};

use crate::config::Grid;
use crate::error::{CliError, CliResult};

/// Stream label reserved for the unitaries of the mixed-unitary family.
const MIXED_UNITARY_STREAM: u64 = 0x6d75;

/// A one-parameter channel family from the zoo.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Identity,
    Cz,
    CorrelatedDephasing,
    LocalPhaseFlip,
    LocalAmplitudeDamping,
    LocalDepolarizing,
    GlobalDepolarizing,
    ControlledPhase,
    NoisyCz,
    PhaseDamping,
    CzPhaseDamping,
    MixedUnitary,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Identity,
        Family::Cz,
        Family::CorrelatedDephasing,
        Family::LocalPhaseFlip,
        Family::LocalAmplitudeDamping,
        Family::LocalDepolarizing,
        Family::GlobalDepolarizing,
        Family::ControlledPhase,
        Family::NoisyCz,
        Family::PhaseDamping,
        Family::CzPhaseDamping,
        Family::MixedUnitary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Identity => "identity",
            Family::Cz => "cz",
            Family::CorrelatedDephasing => "correlated-dephasing",
            Family::LocalPhaseFlip => "local-phase-flip",
            Family::LocalAmplitudeDamping => "local-amplitude-damping",
            Family::LocalDepolarizing => "local-depolarizing",
            Family::GlobalDepolarizing => "global-depolarizing",
            Family::ControlledPhase => "controlled-phase",
            Family::NoisyCz => "noisy-cz",
            Family::PhaseDamping => "phase-damping",
            Family::CzPhaseDamping => "cz-phase-damping",
            Family::MixedUnitary => "mixed-unitary",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Name and unit of the swept parameter.
    pub fn parameter(self) -> (&'static str, &'static str) {
        match self {
            Family::Identity | Family::Cz => ("param", "1"),
            Family::CorrelatedDephasing | Family::LocalPhaseFlip | Family::LocalAmplitudeDamping => ("gamma", "1"),
            Family::LocalDepolarizing | Family::GlobalDepolarizing | Family::MixedUnitary => ("p", "1"),
            Family::ControlledPhase => ("phi", "rad"),
            Family::NoisyCz => ("u", "1"),
            Family::PhaseDamping | Family::CzPhaseDamping => ("t", "1/sqrt(Gamma)"),
        }
    }

    pub fn default_grid(self) -> Grid {
        match self {
            Family::Identity | Family::Cz => Grid::new(0.0, 0.0, 1),
            Family::ControlledPhase => Grid::new(0.0, 2.0 * PI, 17),
            Family::PhaseDamping | Family::CzPhaseDamping => Grid::new(0.0, 3.0, 41),
            _ => Grid::new(0.0, 1.0, 11),
        }
    }
}

/// Fixed parameters of the dynamical families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyOptions {
    /// Coupling `g` of the CZ evolution.
    pub coupling: f64,
    /// Dephasing rate `Γ`.
    pub rate: f64,
    /// Seed for the two Haar unitaries of the mixed-unitary family.
    pub seed: u64,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions { coupling: 1.5, rate: 1.0, seed: 0 }
    }
}

/// A zoo family or a fixed channel read from JSON.
#[derive(Clone, Debug)]
pub enum ChannelSpec {
    Zoo { family: Family, options: FamilyOptions, u1: ComplexMatrix, u2: ComplexMatrix },
    File { path: PathBuf, channel: KrausChannel },
}

impl ChannelSpec {
    /// A zoo name, or a path to a channel JSON file.
    pub fn parse(spec: &str, options: FamilyOptions) -> CliResult<ChannelSpec> {
        if let Some(family) = Family::from_name(spec) {
            let mut rng = SampleStream::new(options.seed, MIXED_UNITARY_STREAM).rng();
            let u1 = haar_unitary(4, &mut rng);
            let u2 = haar_unitary(4, &mut rng);
            return Ok(ChannelSpec::Zoo { family, options, u1, u2 });
        }
        let path = Path::new(spec);
        if !path.exists() {
            let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
            return Err(CliError::Usage(format!(
                "unknown channel `{spec}`; expected a JSON file or one of: {}",
                names.join(", ")
            )));
        }
        let channel = load_channel(path)?;
        Ok(ChannelSpec::File { path: path.to_path_buf(), channel })
    }

    pub fn parameter(&self) -> (&'static str, &'static str) {
        match self {
            ChannelSpec::Zoo { family, .. } => family.parameter(),
            ChannelSpec::File { .. } => ("param", "1"),
        }
    }

    pub fn default_grid(&self) -> Grid {
        match self {
            ChannelSpec::Zoo { family, .. } => family.default_grid(),
            ChannelSpec::File { .. } => Grid::new(0.0, 0.0, 1),
        }
    }

    /// The channel at parameter value `x`. File channels ignore `x`.
    pub fn at(&self, x: f64) -> CliResult<KrausChannel> {
        let (family, options, u1, u2) = match self {
            ChannelSpec::File { channel, .. } => return Ok(channel.clone()),
            ChannelSpec::Zoo { family, options, u1, u2 } => (*family, options, u1, u2),
        };
        let ch = match family {
            Family::Identity => zoo::identity(),
            Family::Cz => KrausChannel::unitary(2, 2, gates::cz())?,
            Family::CorrelatedDephasing => zoo::correlated_dephasing(x)?,
            Family::LocalPhaseFlip => zoo::local_phase_flip(x)?,
            Family::LocalAmplitudeDamping => zoo::local_amplitude_damping(x)?,
            Family::LocalDepolarizing => zoo::local_depolarizing(x)?,
            Family::GlobalDepolarizing => zoo::global_depolarizing(x)?,
            Family::ControlledPhase => zoo::controlled_phase(x)?,
            Family::NoisyCz => zoo::cz_correlated_dephasing(x)?,
            Family::PhaseDamping => zoo::phase_damping(options.rate, x)?,
            Family::CzPhaseDamping => zoo::cz_phase_damping(options.coupling, options.rate, x)?,
            Family::MixedUnitary => zoo::mixed_unitary(x, u1, u2)?,
        };
        Ok(ch)
    }

    /// Whether the swept parameter changes the channel.
    pub fn is_parametric(&self) -> bool {
        !matches!(
            self,
            ChannelSpec::File { .. } | ChannelSpec::Zoo { family: Family::Identity | Family::Cz, .. }
        )
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::File { path, .. } => write!(f, "file:{}", path.display()),
            ChannelSpec::Zoo { family, options, .. } => match family {
                Family::PhaseDamping => write!(f, "{}(Gamma={:?})", family.name(), options.rate),
                Family::CzPhaseDamping => {
                    write!(f, "{}(g={:?},Gamma={:?})", family.name(), options.coupling, options.rate)
                }
                Family::MixedUnitary => write!(f, "{}(unitary_seed={})", family.name(), options.seed),
                _ => f.write_str(family.name()),
            },
        }
    }
}

/// Reads and validates a channel JSON file.
pub fn load_channel(path: &Path) -> CliResult<KrausChannel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let channel = KrausChannel::from_json(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let report = channel.validate();
    if !report.passed {
        return Err(CliError::Validation(format!(
            "{}: not trace preserving (completeness residual {:e})",
            path.display(),
            report.completeness_residual
        )));
    }
    Ok(channel)
}

/// `--target` argument: `identity`, `cz` or a JSON unitary.
pub fn parse_target(spec: &str) -> CliResult<ComplexMatrix> {
    match spec {
        "identity" => Ok(ComplexMatrix::identity(4)),
        "cz" => Ok(gates::cz()),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read target {path}: {e}")))?;
            let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("target {path}: expected nested [re, im] arrays: {e}")))?;
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(CliError::Usage(format!("target {path}: matrix is not square")));
            }
            let data: Vec<Complex64> = rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
            let u = ComplexMatrix::from_vec(n, n, data)?;
            biq_core::channel::check_unitary(&u)?;
            Ok(u)
        }
    }
}
