//! Discretized sum over paths on a 1-D space-time lattice.
//!
//! Site `i` sits at `x_i = i·dx`. Between adjacent time slices every site
//! connects to every other site through the one-step kernel
//!
//! ```text
//! K(x', x) = N₀ · exp(i·S_seg(x → x')/ħ),   N₀ = √(m / (2πiħ·dt))
//! S_seg = [½m((x'−x)/dt)² − V(x) + (q/c)·A(x)·(x'−x)/dt]·dt
//! ```
//!
//! and a field advances by `ψ'(x') = Σ_x K(x', x)·ψ(x)·dx`. A point source
//! is the lattice delta `δ_{x,src}/dx`, so one slice from a source reproduces
//! the kernel row exactly. Velocity selection is left to phase cancellation;
//! there is no nearest-neighbour cutoff.
//!
//! Keep `2πħ·dt/(m·dx)` larger than the distances that carry amplitude, or
//! the discrete sum aliases fast kinetic phases back onto slow ones.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// What happens to paths that would leave the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Hard walls: displacements are plain site differences and nothing
    /// exists beyond the end sites.
    #[default]
    Reflecting,
    /// Ring of circumference `n_sites·dx`; displacements use the shortest
    /// image.
    Periodic,
}

/// Lattice geometry and physical parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLattice {
    n_slices: usize,
    n_sites: usize,
    dx: f64,
    dt: f64,
    mass: f64,
    hbar: f64,
    charge: f64,
    light_speed: f64,
    potential: Vec<f64>,
    vector_potential: Vec<f64>,
    boundary: Boundary,
    reversed: bool,
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::invalid(alloc::format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(value)
}

impl PathLattice {
    /// Free particle with `m = ħ = c = 1`, no charge, reflecting walls.
    pub fn new(n_slices: usize, n_sites: usize, dx: f64, dt: f64) -> Result<Self> {
        if n_slices < 1 {
            return Err(Error::invalid("lattice needs at least one time slice"));
        }
        if n_sites < 2 {
            return Err(Error::invalid("lattice needs at least two sites"));
        }
        Ok(PathLattice {
            n_slices,
            n_sites,
            dx: positive("dx", dx)?,
            dt: positive("dt", dt)?,
            mass: 1.0,
            hbar: 1.0,
            charge: 0.0,
            light_speed: 1.0,
            potential: vec![0.0; n_sites],
            vector_potential: vec![0.0; n_sites],
            boundary: Boundary::Reflecting,
            reversed: false,
        })
    }

    pub fn with_mass(mut self, mass: f64) -> Result<Self> {
        self.mass = positive("mass", mass)?;
        Ok(self)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        self.hbar = positive("hbar", hbar)?;
        Ok(self)
    }

    pub fn with_light_speed(mut self, c: f64) -> Result<Self> {
        self.light_speed = positive("light speed", c)?;
        Ok(self)
    }

    pub fn with_charge(mut self, charge: f64) -> Result<Self> {
        if !charge.is_finite() {
            return Err(Error::NonFinite);
        }
        self.charge = charge;
        Ok(self)
    }

    fn samples(&self, values: Vec<f64>) -> Result<Vec<f64>> {
        if values.len() != self.n_sites {
            return Err(Error::DimensionMismatch {
                expected: self.n_sites,
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(values)
    }

    /// Potential energy at each site.
    pub fn with_potential(mut self, potential: Vec<f64>) -> Result<Self> {
        self.potential = self.samples(potential)?;
        Ok(self)
    }

    /// Vector potential (x component) at each site.
    pub fn with_vector_potential(mut self, a: Vec<f64>) -> Result<Self> {
        self.vector_potential = self.samples(a)?;
        Ok(self)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_slices(mut self, n_slices: usize) -> Result<Self> {
        if n_slices < 1 {
            return Err(Error::invalid("lattice needs at least one time slice"));
        }
        self.n_slices = n_slices;
        Ok(self)
    }

    /// The same lattice run backwards in time: `dt → −dt`, `A → −A`.
    pub fn time_reversed(&self) -> Self {
        let mut out = self.clone();
        out.reversed = !self.reversed;
        out
    }

    pub fn n_slices(&self) -> usize {
        self.n_slices
    }
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn charge(&self) -> f64 {
        self.charge
    }
    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }
    pub fn vector_potential(&self) -> &[f64] {
        &self.vector_potential
    }
    pub fn boundary(&self) -> Boundary {
        self.boundary
    }
    pub fn is_time_reversed(&self) -> bool {
        self.reversed
    }

    pub fn position(&self, site: usize) -> f64 {
        site as f64 * self.dx
    }

    /// Total time spanned, `n_slices·dt`.
    pub fn duration(&self) -> f64 {
        self.n_slices as f64 * self.dt
    }

    fn signed_dt(&self) -> f64 {
        if self.reversed {
            -self.dt
        } else {
            self.dt
        }
    }

    fn vector_potential_at(&self, site: usize) -> f64 {
        if self.reversed {
            -self.vector_potential[site]
        } else {
            self.vector_potential[site]
        }
    }

    fn has_vector_potential(&self) -> bool {
        self.charge != 0.0 && self.vector_potential.iter().any(|&a| a != 0.0)
    }

    /// Signed site offset of the step `from → to` under the boundary rule.
    fn offset(&self, from: usize, to: usize) -> i64 {
        let raw = to as i64 - from as i64;
        match self.boundary {
            Boundary::Reflecting => raw,
            Boundary::Periodic => {
                let n = self.n_sites as i64;
                let wrapped = raw.rem_euclid(n);
                if wrapped >= (n + 1) / 2 {
                    wrapped - n
                } else {
                    wrapped
                }
            }
        }
    }

    /// Displacement `x_to − x_from` in length units.
    pub fn displacement(&self, from: usize, to: usize) -> f64 {
        self.offset(from, to) as f64 * self.dx
    }

    /// Action of the single segment `from → to`.
    pub fn segment_action(&self, from: usize, to: usize) -> f64 {
        let dt = self.signed_dt();
        let d = self.displacement(from, to);
        let velocity = d / dt;
        let mut lagrangian = 0.5 * self.mass * velocity * velocity - self.potential[from];
        if self.has_vector_potential() {
            lagrangian +=
                self.charge / self.light_speed * self.vector_potential_at(from) * velocity;
        }
        lagrangian * dt
    }

    /// Slice normalization `N₀ = √(m/(2πiħ·dt))` (principal branch).
    pub fn slice_normalization(&self) -> Complex64 {
        let dt = self.signed_dt();
        let magnitude = libm::sqrt(self.mass / (2.0 * PI * self.hbar * dt.abs()));
        Complex64::from_polar(magnitude, -dt.signum() * PI / 4.0)
    }

    /// One-step kernel `K(x_to, x_from)`.
    pub fn kernel(&self, to: usize, from: usize) -> Complex64 {
        self.slice_normalization()
            * Complex64::from_polar(1.0, self.segment_action(from, to) / self.hbar)
    }
}

/// A sequence of lattice sites, one per time slice boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    sites: Vec<usize>,
}

impl Path {
    pub fn new(sites: Vec<usize>, lattice: &PathLattice) -> Result<Self> {
        if sites.len() != lattice.n_slices + 1 {
            return Err(Error::DimensionMismatch {
                expected: lattice.n_slices + 1,
                found: sites.len(),
            });
        }
        if let Some(&s) = sites.iter().find(|&&s| s >= lattice.n_sites) {
            return Err(Error::IndexOutOfRange {
                index: s,
                bound: lattice.n_sites,
            });
        }
        Ok(Path { sites })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }
}

/// `S = Σ_k L(x_k, ẋ_k)·dt` along `path`.
pub fn action(path: &Path, lattice: &PathLattice) -> f64 {
    path.sites
        .windows(2)
        .map(|w| lattice.segment_action(w[0], w[1]))
        .sum()
}

/// Complex amplitudes on every site at one time slice.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeField {
    values: Vec<Complex64>,
    dx: f64,
}

impl AmplitudeField {
    pub fn new(values: Vec<Complex64>, dx: f64) -> Result<Self> {
        positive("dx", dx)?;
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(AmplitudeField { values, dx })
    }

    /// Lattice delta at `site`: `1/dx` there, zero elsewhere.
    pub fn point_source(lattice: &PathLattice, site: usize) -> Result<Self> {
        if site >= lattice.n_sites {
            return Err(Error::IndexOutOfRange {
                index: site,
                bound: lattice.n_sites,
            });
        }
        let mut values = vec![Complex64::new(0.0, 0.0); lattice.n_sites];
        values[site] = Complex64::new(1.0 / lattice.dx, 0.0);
        Ok(AmplitudeField {
            values,
            dx: lattice.dx,
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// `|ψ_i|²` per site.
    pub fn intensities(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// `Σ|ψ_i|²·dx`.
    pub fn probability_mass(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dx
    }

    /// Rescales to unit probability mass and returns the factor applied.
    pub fn normalize(&mut self) -> Result<f64> {
        let mass = self.probability_mass();
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::NotNormalized { norm: mass });
        }
        let factor = 1.0 / libm::sqrt(mass);
        for v in &mut self.values {
            *v *= factor;
        }
        Ok(factor)
    }

    pub fn conj(&self) -> Self {
        AmplitudeField {
            values: self.values.iter().map(|v| v.conj()).collect(),
            dx: self.dx,
        }
    }

    pub fn max_abs_diff(&self, other: &AmplitudeField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

const SUM_BLOCK: usize = 256;

/// Kinetic phase factors indexed by `offset + n_sites − 1`.
fn kinetic_table(lattice: &PathLattice) -> Vec<Complex64> {
    let n = lattice.n_sites as i64;
    let dt = lattice.signed_dt();
    (-(n - 1)..n)
        .map(|raw| {
            let d = match lattice.boundary {
                Boundary::Reflecting => raw,
                Boundary::Periodic => lattice.offset(0, raw.rem_euclid(n) as usize),
            } as f64
                * lattice.dx;
            Complex64::from_polar(1.0, 0.5 * lattice.mass * d * d / (dt * lattice.hbar))
        })
        .collect()
}

/// One slice of `ψ'(x_j) = Σ_i K(x_j, x_i) ψ(x_i) dx`.
fn step(lattice: &PathLattice, field: &[Complex64], kinetic: &[Complex64]) -> Vec<Complex64> {
    let n = lattice.n_sites;
    let dt = lattice.signed_dt();
    let n0 = lattice.slice_normalization();
    // Everything that depends only on the departure site.
    let weights: Vec<Complex64> = field
        .iter()
        .zip(&lattice.potential)
        .map(|(psi, v)| n0 * Complex64::from_polar(lattice.dx, -v * dt / lattice.hbar) * psi)
        .collect();
    let sources: Vec<usize> = (0..n)
        .filter(|&i| weights[i] != Complex64::new(0.0, 0.0))
        .collect();
    let with_a = lattice.has_vector_potential();
    let coupling = lattice.charge / (lattice.light_speed * lattice.hbar);

    let target = |j: usize| -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for block in sources.chunks(SUM_BLOCK) {
            let mut partial = Complex64::new(0.0, 0.0);
            for &i in block {
                let mut k = kinetic[j + n - 1 - i];
                if with_a {
                    let d = lattice.displacement(i, j);
                    k *= Complex64::from_polar(1.0, coupling * lattice.vector_potential_at(i) * d);
                }
                partial += k * weights[i];
            }
            total += partial;
        }
        total
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(target).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(target).collect()
    }
}

fn check_field(lattice: &PathLattice, field: &AmplitudeField) -> Result<()> {
    if field.len() != lattice.n_sites {
        return Err(Error::DimensionMismatch {
            expected: lattice.n_sites,
            found: field.len(),
        });
    }
    if field.dx != lattice.dx {
        return Err(Error::invalid("field spacing differs from lattice spacing"));
    }
    Ok(())
}

/// An opening in a screen placed at an intermediate slice, with an extra
/// phase picked up by paths through it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Opening {
    pub site: usize,
    pub phase: f64,
}

/// A blocking screen at time slice `slice`: only `openings` transmit.
#[derive(Debug, Clone, PartialEq)]
pub struct Screen {
    pub slice: usize,
    pub openings: Vec<Opening>,
}

impl Screen {
    pub fn open(slice: usize, sites: &[usize]) -> Self {
        Screen {
            slice,
            openings: sites
                .iter()
                .map(|&site| Opening { site, phase: 0.0 })
                .collect(),
        }
    }

    fn validate(&self, lattice: &PathLattice) -> Result<()> {
        if self.slice == 0 || self.slice >= lattice.n_slices {
            return Err(Error::invalid(alloc::format!(
                "screen slice {} must lie strictly between 0 and {}",
                self.slice,
                lattice.n_slices
            )));
        }
        if self.openings.is_empty() {
            return Err(Error::invalid("screen must have at least one open site"));
        }
        for (k, o) in self.openings.iter().enumerate() {
            if o.site >= lattice.n_sites {
                return Err(Error::IndexOutOfRange {
                    index: o.site,
                    bound: lattice.n_sites,
                });
            }
            if self.openings[..k].iter().any(|p| p.site == o.site) {
                return Err(Error::invalid(alloc::format!(
                    "site {} opened twice",
                    o.site
                )));
            }
        }
        Ok(())
    }

    fn apply(&self, field: &mut [Complex64]) {
        let mut masked = vec![Complex64::new(0.0, 0.0); field.len()];
        for o in &self.openings {
            masked[o.site] = field[o.site] * Complex64::from_polar(1.0, o.phase);
        }
        field.copy_from_slice(&masked);
    }
}

fn run(
    lattice: &PathLattice,
    initial: &AmplitudeField,
    screens: &[Screen],
    mut visit: impl FnMut(&[Complex64]),
) -> Result<Vec<Complex64>> {
    check_field(lattice, initial)?;
    for s in screens {
        s.validate(lattice)?;
    }
    let kinetic = kinetic_table(lattice);
    let mut values = initial.values.clone();
    visit(&values);
    for slice in 1..=lattice.n_slices {
        values = step(lattice, &values, &kinetic);
        for s in screens.iter().filter(|s| s.slice == slice) {
            s.apply(&mut values);
        }
        visit(&values);
    }
    Ok(values)
}

/// Advances `initial` through every slice, applying `screens` after the
/// slices they name.
pub fn propagate_field_with_screens(
    lattice: &PathLattice,
    initial: &AmplitudeField,
    screens: &[Screen],
) -> Result<AmplitudeField> {
    let values = run(lattice, initial, screens, |_| {})?;
    Ok(AmplitudeField {
        values,
        dx: lattice.dx,
    })
}

/// Every slice from 0 (the initial field) to `n_slices`, screens applied.
pub fn propagate_history(
    lattice: &PathLattice,
    initial: &AmplitudeField,
    screens: &[Screen],
) -> Result<Vec<AmplitudeField>> {
    let mut history = Vec::with_capacity(lattice.n_slices + 1);
    run(lattice, initial, screens, |v| {
        history.push(AmplitudeField {
            values: v.to_vec(),
            dx: lattice.dx,
        })
    })?;
    Ok(history)
}

/// Advances an arbitrary initial field through every slice.
pub fn propagate_field(lattice: &PathLattice, initial: &AmplitudeField) -> Result<AmplitudeField> {
    propagate_field_with_screens(lattice, initial, &[])
}

/// Amplitude `⟨x, T | source, 0⟩` on every site at the final slice.
pub fn propagate(lattice: &PathLattice, source: usize) -> Result<AmplitudeField> {
    propagate_field(lattice, &AmplitudeField::point_source(lattice, source)?)
}

/// Result of propagation with per-slice renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPropagation {
    pub field: AmplitudeField,
    /// Factor applied after each slice to restore unit probability mass.
    pub factors: Vec<f64>,
}

/// Like [`propagate_field`] but rescales to unit mass after every slice,
/// reporting the factors so the drift of the slice constant is visible.
pub fn propagate_normalized(
    lattice: &PathLattice,
    initial: &AmplitudeField,
) -> Result<NormalizedPropagation> {
    check_field(lattice, initial)?;
    let kinetic = kinetic_table(lattice);
    let mut field = initial.clone();
    let mut factors = Vec::with_capacity(lattice.n_slices);
    for _ in 0..lattice.n_slices {
        field.values = step(lattice, &field.values, &kinetic);
        factors.push(field.normalize()?);
    }
    Ok(NormalizedPropagation { field, factors })
}

/// Final-slice amplitudes with every site outside `open_sites` blocked at
/// `gate_slice`.
pub fn compose_amplitudes(
    lattice: &PathLattice,
    source: usize,
    gate_slice: usize,
    open_sites: &[usize],
) -> Result<AmplitudeField> {
    let screen = Screen::open(gate_slice, open_sites);
    propagate_field_with_screens(
        lattice,
        &AmplitudeField::point_source(lattice, source)?,
        &[screen],
    )
}

/// Aharonov–Bohm phase `q·Φ/(ħc)` for flux `Φ` enclosed between two path
/// families, reduced to `[0, 2π)`.
pub fn ab_phase(lattice: &PathLattice, loop_flux: f64) -> f64 {
    let raw = lattice.charge * loop_flux / (lattice.hbar * lattice.light_speed);
    raw.rem_euclid(2.0 * PI)
}

/// Gaussian wave packet `exp(−(x−x₀)²/(4σ²) + i·p₀(x−x₀)/ħ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacket {
    pub center: usize,
    /// Position spread `σ` in length units.
    pub width: f64,
    pub momentum: f64,
}

impl WavePacket {
    /// Samples the packet on `lattice`, normalized to unit mass.
    pub fn field(&self, lattice: &PathLattice) -> Result<AmplitudeField> {
        if self.center >= lattice.n_sites {
            return Err(Error::IndexOutOfRange {
                index: self.center,
                bound: lattice.n_sites,
            });
        }
        positive("packet width", self.width)?;
        let values = (0..lattice.n_sites)
            .map(|i| {
                let d = lattice.displacement(self.center, i);
                let envelope = libm::exp(-d * d / (4.0 * self.width * self.width));
                Complex64::from_polar(envelope, self.momentum * d / lattice.hbar)
            })
            .collect();
        let mut field = AmplitudeField::new(values, lattice.dx)?;
        field.normalize()?;
        Ok(field)
    }
}

/// Endpoint of the stationary-action trajectory launched from the packet
/// centre with the packet momentum, snapped to the nearest site.
///
/// Integrates the discrete Euler–Lagrange equation of the lattice action,
/// `m(x_{k+1} − 2x_k + x_{k−1})/dt² = −V'(x_k)`, with walls reflecting (or
/// wrapping) according to the boundary.
pub fn classical_endpoint(lattice: &PathLattice, packet: &WavePacket) -> usize {
    let n = lattice.n_sites;
    let length = (n - 1) as f64 * lattice.dx;
    let force = |x: f64| -> f64 {
        let s = libm::round(x / lattice.dx).clamp(0.0, (n - 1) as f64) as usize;
        let (lo, hi) = (s.saturating_sub(1), (s + 1).min(n - 1));
        if hi == lo {
            return 0.0;
        }
        -(lattice.potential[hi] - lattice.potential[lo]) / ((hi - lo) as f64 * lattice.dx)
    };
    let fold = |x: f64| -> f64 {
        match lattice.boundary {
            Boundary::Periodic => x.rem_euclid(n as f64 * lattice.dx),
            Boundary::Reflecting => {
                if length == 0.0 {
                    return 0.0;
                }
                let period = 2.0 * length;
                let y = x.rem_euclid(period);
                if y > length {
                    period - y
                } else {
                    y
                }
            }
        }
    };
    let dt = lattice.dt;
    let mut prev = lattice.position(packet.center);
    let mut x =
        prev + packet.momentum / lattice.mass * dt + 0.5 * force(prev) / lattice.mass * dt * dt;
    for _ in 1..lattice.n_slices {
        let next = 2.0 * x - prev + force(fold(x)) / lattice.mass * dt * dt;
        prev = x;
        x = next;
    }
    let site = libm::round(fold(x) / lattice.dx) as usize;
    site.min(n - 1)
}

/// Probability concentration near the classical endpoint for one `ħ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Concentration {
    pub hbar: f64,
    pub endpoint: usize,
    /// Fraction of final-slice probability within the window.
    pub fraction: f64,
    /// Final-slice probabilities, normalized to sum to 1 over sites.
    pub distribution: Vec<f64>,
}

fn window_sites(lattice: &PathLattice, center: usize, half_width: usize) -> Vec<usize> {
    let n = lattice.n_sites as i64;
    let c = center as i64;
    let hw = half_width as i64;
    match lattice.boundary {
        Boundary::Reflecting => ((c - hw).max(0)..=(c + hw).min(n - 1))
            .map(|s| s as usize)
            .collect(),
        Boundary::Periodic => {
            let mut sites: Vec<usize> = (c - hw..=c + hw)
                .map(|s| s.rem_euclid(n) as usize)
                .collect();
            sites.sort_unstable();
            sites.dedup();
            sites
        }
    }
}

/// For each `ħ` in `hbar_sequence` (positive, strictly decreasing), the
/// share of final-slice probability within `half_width` sites of the
/// stationary-action endpoint.
pub fn classical_concentration(
    lattice: &PathLattice,
    packet: &WavePacket,
    half_width: usize,
    hbar_sequence: &[f64],
) -> Result<Vec<Concentration>> {
    if hbar_sequence.is_empty() {
        return Err(Error::invalid("hbar sequence must not be empty"));
    }
    for (k, &h) in hbar_sequence.iter().enumerate() {
        positive("hbar", h)?;
        if k > 0 && h >= hbar_sequence[k - 1] {
            return Err(Error::invalid("hbar sequence must be strictly decreasing"));
        }
    }
    hbar_sequence
        .iter()
        .map(|&hbar| {
            let lat = lattice.clone().with_hbar(hbar)?;
            let initial = packet.field(&lat)?;
            let field = propagate_field(&lat, &initial)?;
            let raw = field.intensities();
            let total: f64 = raw.iter().sum();
            let distribution: Vec<f64> = raw.iter().map(|p| p / total).collect();
            let endpoint = classical_endpoint(&lat, packet);
            let fraction = window_sites(&lat, endpoint, half_width)
                .iter()
                .map(|&s| distribution[s])
                .sum();
            Ok(Concentration {
                hbar,
                endpoint,
                fraction,
                distribution,
            })
        })
        .collect()
}

/// Two-slit arrangement: a point source, a screen with two openings at an
/// intermediate slice, and a detector row at the final slice.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleSlit {
    pub lattice: PathLattice,
    pub source: usize,
    pub gate_slice: usize,
    pub slits: [usize; 2],
}

impl DoubleSlit {
    /// 401 sites with `dx = m = ħ = 1` and two slices of `dt = 400/π`. The
    /// source sits at site 200 and the slits at 190 and 210 on slice 1. The
    /// fringe period on the detector row is `2πħ·dt/(m·d) = 40` sites, with
    /// exact nulls 20 sites either side of the centre.
    pub fn reference() -> Self {
        let lattice = PathLattice::new(2, 401, 1.0, 400.0 / PI).expect("valid reference lattice");
        DoubleSlit {
            lattice,
            source: 200,
            gate_slice: 1,
            slits: [190, 210],
        }
    }

    /// Detector-row amplitudes with extra phases on the two slits.
    pub fn amplitudes(&self, phases: [f64; 2]) -> Result<AmplitudeField> {
        let screen = Screen {
            slice: self.gate_slice,
            openings: vec![
                Opening {
                    site: self.slits[0],
                    phase: phases[0],
                },
                Opening {
                    site: self.slits[1],
                    phase: phases[1],
                },
            ],
        };
        let source = AmplitudeField::point_source(&self.lattice, self.source)?;
        propagate_field_with_screens(&self.lattice, &source, &[screen])
    }

    /// `|ψ|²` on the detector row with `phase` added to the second slit.
    pub fn intensity(&self, phase: f64) -> Result<Vec<f64>> {
        Ok(self.amplitudes([0.0, phase])?.intensities())
    }

    /// `|ψ|²` with only slit `which` (0 or 1) open.
    pub fn single_slit_intensity(&self, which: usize) -> Result<Vec<f64>> {
        let slit = *self.slits.get(which).ok_or(Error::IndexOutOfRange {
            index: which,
            bound: 2,
        })?;
        Ok(compose_amplitudes(&self.lattice, self.source, self.gate_slice, &[slit])?.intensities())
    }

    /// Intensity with the Aharonov–Bohm phase of `flux` on the second slit.
    pub fn intensity_with_flux(&self, flux: f64) -> Result<Vec<f64>> {
        self.intensity(ab_phase(&self.lattice, flux))
    }
}

/// Named potential profiles for experiment descriptors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialProfile {
    Free,
    /// `½·k·(x − x_c)²` about site `center`.
    Harmonic {
        stiffness: f64,
        center: usize,
    },
    /// Constant `height` on sites `start..=end`.
    Barrier {
        height: f64,
        start: usize,
        end: usize,
    },
    /// `slope · x`, a uniform force `−slope` along x.
    Linear {
        slope: f64,
    },
}

impl PotentialProfile {
    pub fn sample(&self, n_sites: usize, dx: f64) -> Vec<f64> {
        (0..n_sites)
            .map(|i| {
                let x = i as f64 * dx;
                match *self {
                    PotentialProfile::Free => 0.0,
                    PotentialProfile::Harmonic { stiffness, center } => {
                        let d = x - center as f64 * dx;
                        0.5 * stiffness * d * d
                    }
                    PotentialProfile::Barrier { height, start, end } => {
                        if (start..=end).contains(&i) {
                            height
                        } else {
                            0.0
                        }
                    }
                    PotentialProfile::Linear { slope } => slope * x,
                }
            })
            .collect()
    }
}
