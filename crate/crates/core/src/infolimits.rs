//! Closed-form information, thermodynamic, relativistic and black-hole
//! limits.
//!
//! All functions are pure. Each formula is available as a method on
//! [`PhysicalConstants`] (so callers and tests can rescale constants) and as
//! a free function using [`CODATA_2018`].

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use crate::{Error, Result};

/// Fundamental constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Newtonian constant of gravitation, m³·kg⁻¹·s⁻².
    pub g: f64,
    /// Speed of light in vacuum, m·s⁻¹.
    pub c: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Planck constant, J·s.
    pub h: f64,
    /// Boltzmann constant, J·K⁻¹.
    pub k: f64,
    /// Elementary charge, C.
    pub e: f64,
}

const PLANCK_H: f64 = 6.626_070_15e-34;

/// CODATA 2018 values. Everything except `G` is exact by SI definition.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    g: 6.674_30e-11,
    c: 299_792_458.0,
    hbar: PLANCK_H / (2.0 * PI),
    h: PLANCK_H,
    k: 1.380_649e-23,
    e: 1.602_176_634e-19,
};

/// Label recorded in run manifests.
pub const CONSTANTS_VERSION: &str = "CODATA-2018";

fn check_mass(mass: f64) -> Result<()> {
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::invalid(alloc::format!(
            "mass must be positive and finite, got {mass}"
        )));
    }
    Ok(())
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(alloc::format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    Ok(())
}

/// Black-hole entropy in both reporting units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonEntropy {
    /// Dimensionless `S/k`.
    pub over_k: f64,
    /// `S/(k ln 2)`.
    pub bits: f64,
}

/// An energy level with degeneracy `g_i ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSpec {
    degeneracy: u32,
    energy: f64,
}

impl LevelSpec {
    pub fn new(degeneracy: u32, energy: f64) -> Result<Self> {
        if degeneracy == 0 {
            return Err(Error::invalid("degeneracy must be at least 1"));
        }
        if !energy.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(LevelSpec { degeneracy, energy })
    }

    pub fn degeneracy(&self) -> u32 {
        self.degeneracy
    }

    /// Energy in joules.
    pub fn energy(&self) -> f64 {
        self.energy
    }
}

/// Space-time event with `x⁰ = ct`; all components in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourEvent {
    pub ct: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourEvent {
    pub fn new(ct: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        if [ct, x, y, z].iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(FourEvent { ct, x, y, z })
    }

    /// Flat-metric interval `(ct)² − x² − y² − z²`.
    pub fn interval(&self) -> f64 {
        self.ct * self.ct - self.x * self.x - self.y * self.y - self.z * self.z
    }

    /// Boost along `+x` with speed `β = v/c`.
    pub fn boost(&self, beta: f64) -> Result<FourEvent> {
        if !beta.is_finite() || beta.abs() >= 1.0 {
            return Err(Error::invalid(alloc::format!(
                "boost speed must satisfy |v| < c (got v/c = {beta})"
            )));
        }
        let gamma = 1.0 / libm::sqrt(1.0 - beta * beta);
        Ok(FourEvent {
            ct: gamma * (self.ct - beta * self.x),
            x: gamma * (self.x - beta * self.ct),
            y: self.y,
            z: self.z,
        })
    }
}

/// `log₂ W`, the information in `W` equally likely configurations.
pub fn info_bits(w: f64) -> Result<f64> {
    if !(w >= 1.0) || !w.is_finite() {
        return Err(Error::invalid(alloc::format!(
            "configuration count must be >= 1, got {w}"
        )));
    }
    Ok(libm::log2(w))
}

/// Shannon–Hartley capacity `B·log₂(1 + S/N)` in bits per second.
pub fn channel_capacity(bandwidth: f64, signal_power: f64, noise_power: f64) -> Result<f64> {
    if !(noise_power > 0.0) || !noise_power.is_finite() {
        return Err(Error::invalid("noise power must be positive"));
    }
    if !(bandwidth >= 0.0) || !(signal_power >= 0.0) {
        return Err(Error::invalid(
            "bandwidth and signal power must be non-negative",
        ));
    }
    Ok(bandwidth * libm::log2(1.0 + signal_power / noise_power))
}

impl PhysicalConstants {
    /// Planck length `√(ħG/c³)`.
    pub fn planck_length(&self) -> f64 {
        libm::sqrt(self.hbar * self.g / (self.c * self.c * self.c))
    }

    /// Normalized occupation fractions `n_i ∝ g_i exp(−ε_i/kT)`.
    pub fn boltzmann_occupation(&self, levels: &[LevelSpec], temperature: f64) -> Result<Vec<f64>> {
        check_temperature(temperature)?;
        if levels.is_empty() {
            return Err(Error::invalid("at least one level is required"));
        }
        let kt = self.k * temperature;
        // Shift by the largest log-weight so the biggest term is exp(0).
        let log_weights: Vec<f64> = levels
            .iter()
            .map(|l| libm::log(l.degeneracy as f64) - l.energy / kt)
            .collect();
        let max = log_weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = log_weights.iter().map(|w| libm::exp(w - max)).collect();
        let total: f64 = weights.iter().sum();
        Ok(weights.into_iter().map(|w| w / total).collect())
    }

    /// Minimum heat `kT ln 2` per erased bit, times `bits`.
    pub fn landauer_heat(&self, temperature: f64, bits: f64) -> Result<f64> {
        check_temperature(temperature)?;
        if !(bits >= 0.0) || !bits.is_finite() {
            return Err(Error::invalid("bit count must be non-negative"));
        }
        Ok(self.k * temperature * LN_2 * bits)
    }

    /// `R_S = 2Gm/c²`.
    pub fn schwarzschild_radius(&self, mass: f64) -> Result<f64> {
        check_mass(mass)?;
        Ok(2.0 * self.g * mass / (self.c * self.c))
    }

    /// `T = ħc³/(8πkGm)`.
    pub fn hawking_temperature(&self, mass: f64) -> Result<f64> {
        check_mass(mass)?;
        Ok(self.hbar * self.c.powi(3) / (8.0 * PI * self.k * self.g * mass))
    }

    fn evaporation_coefficient(&self) -> f64 {
        // dm/dt = −K/m² with K = ħc⁴/(3·5·2¹⁰·π·G²).
        self.hbar * self.c.powi(4) / (3.0 * 5.0 * 1024.0 * PI * self.g * self.g)
    }

    /// Mass-loss rate `dm/dt = −ħc⁴/(15360 π G² m²)`, kg/s (negative).
    pub fn evaporation_rate(&self, mass: f64) -> Result<f64> {
        check_mass(mass)?;
        Ok(-self.evaporation_coefficient() / (mass * mass))
    }

    /// Time to evaporate completely, `m³/(3K)` seconds, from integrating the
    /// mass-loss rate.
    pub fn evaporation_lifetime(&self, mass: f64) -> Result<f64> {
        check_mass(mass)?;
        Ok(mass.powi(3) / (3.0 * self.evaporation_coefficient()))
    }

    /// Horizon entropy `S/k = 4πR_S² / (4ℓ_P²)`.
    pub fn bh_entropy(&self, mass: f64) -> Result<HorizonEntropy> {
        let r = self.schwarzschild_radius(mass)?;
        let lp = self.planck_length();
        let over_k = 4.0 * PI * r * r / (4.0 * lp * lp);
        Ok(HorizonEntropy {
            over_k,
            bits: over_k / LN_2,
        })
    }

    /// Density `3c⁶/(32πG³m²)` above which mass `m` collapses.
    pub fn collapse_density(&self, mass: f64) -> Result<f64> {
        check_mass(mass)?;
        Ok(3.0 * self.c.powi(6) / (32.0 * PI * self.g.powi(3) * mass * mass))
    }

    /// Boost along `+x` at velocity `v` (m/s).
    pub fn lorentz_boost(&self, event: &FourEvent, v: f64) -> Result<FourEvent> {
        event.boost(v / self.c)
    }
}

pub fn boltzmann_occupation(levels: &[LevelSpec], temperature: f64) -> Result<Vec<f64>> {
    CODATA_2018.boltzmann_occupation(levels, temperature)
}

pub fn landauer_heat(temperature: f64, bits: f64) -> Result<f64> {
    CODATA_2018.landauer_heat(temperature, bits)
}

pub fn schwarzschild_radius(mass: f64) -> Result<f64> {
    CODATA_2018.schwarzschild_radius(mass)
}

pub fn hawking_temperature(mass: f64) -> Result<f64> {
    CODATA_2018.hawking_temperature(mass)
}

pub fn evaporation_rate(mass: f64) -> Result<f64> {
    CODATA_2018.evaporation_rate(mass)
}

pub fn evaporation_lifetime(mass: f64) -> Result<f64> {
    CODATA_2018.evaporation_lifetime(mass)
}

pub fn bh_entropy_bits(mass: f64) -> Result<f64> {
    Ok(CODATA_2018.bh_entropy(mass)?.bits)
}

pub fn collapse_density(mass: f64) -> Result<f64> {
    CODATA_2018.collapse_density(mass)
}

pub fn lorentz_boost(event: &FourEvent, v: f64) -> Result<FourEvent> {
    CODATA_2018.lorentz_boost(event, v)
}
