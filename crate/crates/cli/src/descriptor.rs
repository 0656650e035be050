//! JSON experiment descriptors for the path-integral commands.
//!
//! ```json
//! {
//!   "n_sites": 401, "n_slices": 2, "dx": 1.0, "dt": 127.32395447351627,
//!   "source": 200,
//!   "screen": { "slice": 1, "sites": [190, 210] },
//!   "flux": 0.0
//! }
//! ```
//!
//! Omitted physical parameters default to `m = ħ = c = 1`, zero charge, a
//! free particle and reflecting walls. `potential` is either a per-site array
//! or a named profile (`"free"`, `{"harmonic": {...}}`, `{"barrier": {...}}`,
//! `{"linear": {...}}`). The initial field is a point `source` or a Gaussian
//! `packet`. With a screen and a nonzero `flux`, the Aharonov–Bohm phase of
//! that flux is added to every opening on the far side of the source
//! (site index greater than the source site).

use std::path::Path;

use qpath_core::pathint::{
    ab_phase, AmplitudeField, Boundary, Opening, PathLattice, PotentialProfile, Screen, WavePacket,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryName {
    Reflecting,
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum NamedProfile {
    Harmonic {
        stiffness: f64,
        center: usize,
    },
    Barrier {
        height: f64,
        start: usize,
        end: usize,
    },
    Linear {
        slope: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PotentialSpec {
    /// Only `"free"` is accepted.
    Name(String),
    Profile(NamedProfile),
    Samples(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSpec {
    pub center: usize,
    pub width: f64,
    #[serde(default)]
    pub momentum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreenSpec {
    pub slice: usize,
    pub sites: Vec<usize>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub n_sites: usize,
    pub n_slices: usize,
    pub dx: f64,
    pub dt: f64,
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default)]
    pub charge: f64,
    #[serde(default = "one")]
    pub light_speed: f64,
    #[serde(default)]
    pub boundary: Option<BoundaryName>,
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub vector_potential: Option<Vec<f64>>,
    #[serde(default)]
    pub source: Option<usize>,
    #[serde(default)]
    pub packet: Option<PacketSpec>,
    #[serde(default)]
    pub screen: Option<ScreenSpec>,
    #[serde(default)]
    pub flux: f64,
    /// Slices written to the output; defaults to the final slice only.
    #[serde(default)]
    pub output_slices: Option<Vec<usize>>,
}

impl Experiment {
    pub fn from_json(path: &Path, text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Json {
            path: path.into(),
            source: e,
        })
    }

    pub fn lattice(&self) -> Result<PathLattice> {
        let potential = match &self.potential {
            None => PotentialProfile::Free.sample(self.n_sites, self.dx),
            Some(PotentialSpec::Name(n)) if n == "free" => {
                PotentialProfile::Free.sample(self.n_sites, self.dx)
            }
            Some(PotentialSpec::Name(n)) => {
                return Err(CliError::Invalid(format!(
                    "unknown potential profile '{n}'"
                )))
            }
            Some(PotentialSpec::Profile(p)) => {
                let profile = match *p {
                    NamedProfile::Harmonic { stiffness, center } => {
                        PotentialProfile::Harmonic { stiffness, center }
                    }
                    NamedProfile::Barrier { height, start, end } => {
                        PotentialProfile::Barrier { height, start, end }
                    }
                    NamedProfile::Linear { slope } => PotentialProfile::Linear { slope },
                };
                profile.sample(self.n_sites, self.dx)
            }
            Some(PotentialSpec::Samples(v)) => v.clone(),
        };
        let mut lattice = PathLattice::new(self.n_slices, self.n_sites, self.dx, self.dt)?
            .with_mass(self.mass)?
            .with_hbar(self.hbar)?
            .with_charge(self.charge)?
            .with_light_speed(self.light_speed)?
            .with_potential(potential)?
            .with_boundary(match self.boundary {
                Some(BoundaryName::Periodic) => Boundary::Periodic,
                _ => Boundary::Reflecting,
            });
        if let Some(a) = &self.vector_potential {
            lattice = lattice.with_vector_potential(a.clone())?;
        }
        Ok(lattice)
    }

    fn origin(&self) -> Result<usize> {
        match (self.source, &self.packet) {
            (Some(s), None) => Ok(s),
            (None, Some(p)) => Ok(p.center),
            _ => Err(CliError::Invalid(
                "give exactly one of 'source' and 'packet'".into(),
            )),
        }
    }

    pub fn initial_field(&self, lattice: &PathLattice) -> Result<AmplitudeField> {
        self.origin()?;
        Ok(match &self.packet {
            Some(p) => WavePacket {
                center: p.center,
                width: p.width,
                momentum: p.momentum,
            }
            .field(lattice)?,
            None => AmplitudeField::point_source(lattice, self.source.expect("checked"))?,
        })
    }

    pub fn screens(&self, lattice: &PathLattice) -> Result<Vec<Screen>> {
        let Some(spec) = &self.screen else {
            if self.flux != 0.0 {
                return Err(CliError::Invalid(
                    "'flux' needs a 'screen' to act on".into(),
                ));
            }
            return Ok(Vec::new());
        };
        let origin = self.origin()?;
        let phase = ab_phase(lattice, self.flux);
        Ok(vec![Screen {
            slice: spec.slice,
            openings: spec
                .sites
                .iter()
                .map(|&site| Opening {
                    site,
                    phase: if site > origin { phase } else { 0.0 },
                })
                .collect(),
        }])
    }

    pub fn output_slices(&self) -> Result<Vec<usize>> {
        let slices = self
            .output_slices
            .clone()
            .unwrap_or_else(|| vec![self.n_slices]);
        if slices.is_empty() {
            return Err(CliError::Invalid(
                "'output_slices' must not be empty".into(),
            ));
        }
        if let Some(&s) = slices.iter().find(|&&s| s > self.n_slices) {
            return Err(CliError::Invalid(format!(
                "output slice {s} exceeds n_slices {}",
                self.n_slices
            )));
        }
        Ok(slices)
    }
}
