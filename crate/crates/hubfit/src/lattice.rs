//! Physical units, lattice configuration and trapping-potential evaluators.
//!
//! Everything internal runs in lattice units `hbar = m = k0 = 1`, so the
//! recoil energy is `E_r = 1/2` and the lattice constant is `a = pi`.
//! SI anchors (wavelength, atomic mass) are kept only for conversions at the
//! boundary of the library.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Recoil energy in lattice units, `E_r = hbar^2 k0^2 / 2m = 1/2`.
pub const RECOIL_ENERGY: f64 = 0.5;

/// Lattice constant `a = pi / k0` in lattice units.
pub const LATTICE_CONSTANT: f64 = std::f64::consts::PI;

/// The triple-well confinement is only defined out to `|x| = 2a`, the widest
/// boundary the construction probes; beyond that the Taylor truncation is
/// not a model of anything.
pub const CONFINEMENT_WINDOW: f64 = 2.0 * LATTICE_CONSTANT;

pub const HBAR_SI: f64 = 1.054_571_817e-34; // J s
pub const ATOMIC_MASS_SI: f64 = 1.660_539_068_60e-27; // kg
pub const BOHR_RADIUS_M: f64 = 5.291_772_109_03e-11; // m

/// Default atomic mass: standard atomic weight of lithium-7.
pub const LI7_MASS_AMU: f64 = 7.016_003_436_6;

/// Unit tag for lattice depths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DepthUnit {
    /// Recoil energies.
    Er,
    /// Multiples of the harmonic level spacing `hbar * omega` (self-consistent:
    /// omega itself depends on the depth).
    HbarOmega,
    /// Joules.
    Si,
}

impl DepthUnit {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "er" | "Er" | "E_r" => Ok(DepthUnit::Er),
            "hw" | "hbar_omega" | "hbaromega" => Ok(DepthUnit::HbarOmega),
            "si" | "J" | "joule" => Ok(DepthUnit::Si),
            other => Err(Error::UnknownUnit(other.to_string())),
        }
    }
}

/// Immutable lattice configuration.
///
/// The depth `v0` is stored in lattice units. All derived quantities follow
/// from `omega^2 = 2 V0 k0^2 / m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    v0: f64,
    lambda_um: f64,
    mass_amu: f64,
}

impl LatticeConfig {
    pub fn new(depth: f64, unit: DepthUnit, lambda_um: f64, mass_amu: f64) -> Result<Self> {
        if !(depth.is_finite() && depth > 0.0) {
            return Err(Error::InvalidLattice(format!("depth must be positive, got {depth}")));
        }
        if !(lambda_um.is_finite() && lambda_um > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "wavelength must be positive, got {lambda_um} um"
            )));
        }
        if !(mass_amu.is_finite() && mass_amu > 0.0) {
            return Err(Error::InvalidLattice(format!("mass must be positive, got {mass_amu} amu")));
        }
        let stub = LatticeConfig { v0: 1.0, lambda_um, mass_amu };
        let v0 = match unit {
            DepthUnit::Er => depth * RECOIL_ENERGY,
            // V0/E_r = 4 (V0/hbar omega)^2
            DepthUnit::HbarOmega => 4.0 * depth * depth * RECOIL_ENERGY,
            DepthUnit::Si => depth / stub.recoil_si() * RECOIL_ENERGY,
        };
        Ok(LatticeConfig { v0, lambda_um, mass_amu })
    }

    /// Depth `c` in units of `hbar omega`, i.e. `V0 = c * hbar omega`.
    pub fn from_depth_hw(c: f64) -> Result<Self> {
        Self::new(c, DepthUnit::HbarOmega, 1.0, LI7_MASS_AMU)
    }

    /// Depth in recoil energies with default wavelength and mass.
    pub fn from_depth_er(er: f64) -> Result<Self> {
        Self::new(er, DepthUnit::Er, 1.0, LI7_MASS_AMU)
    }

    /// Lattice depth in lattice units.
    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn v0_er(&self) -> f64 {
        self.v0 / RECOIL_ENERGY
    }

    pub fn v0_hw(&self) -> f64 {
        self.v0 / self.hbar_omega()
    }

    pub fn lambda_um(&self) -> f64 {
        self.lambda_um
    }

    pub fn mass_amu(&self) -> f64 {
        self.mass_amu
    }

    /// Harmonic frequency of one well, `omega = sqrt(2 V0)` in lattice units.
    pub fn omega(&self) -> f64 {
        (2.0 * self.v0).sqrt()
    }

    /// `hbar omega = 2 sqrt(V0 E_r)`; numerically equal to [`Self::omega`].
    pub fn hbar_omega(&self) -> f64 {
        self.omega()
    }

    /// Relative-motion trap length `a_ho = sqrt(2 hbar / m omega)`.
    pub fn a_ho(&self) -> f64 {
        (2.0 / self.omega()).sqrt()
    }

    /// Single-particle oscillator length `l = sqrt(hbar / m omega)`.
    pub fn osc_len(&self) -> f64 {
        (1.0 / self.omega()).sqrt()
    }

    /// One lattice length unit (`1/k0`) in metres.
    pub fn length_unit_m(&self) -> f64 {
        self.lambda_um * 1e-6 / (2.0 * std::f64::consts::PI)
    }

    /// One lattice energy unit in joules.
    pub fn energy_unit_si(&self) -> f64 {
        let k0 = 1.0 / self.length_unit_m();
        HBAR_SI * HBAR_SI * k0 * k0 / (self.mass_amu * ATOMIC_MASS_SI)
    }

    /// Recoil energy in joules.
    pub fn recoil_si(&self) -> f64 {
        RECOIL_ENERGY * self.energy_unit_si()
    }

    /// Scattering length given in Bohr radii, expressed in lattice units.
    pub fn bohr_to_lattice(&self, a0: f64) -> f64 {
        a0 * BOHR_RADIUS_M / self.length_unit_m()
    }
}

/// Convert a lattice depth between unit systems.
///
/// The `Er <-> HbarOmega` bridge uses the identity `V0/E_r = 4 (V0/hw)^2`,
/// which holds because `hbar omega = 2 sqrt(V0 E_r)`.
pub fn convert_depth(value: f64, from: DepthUnit, to: DepthUnit, cfg: &LatticeConfig) -> f64 {
    if value == 0.0 {
        return 0.0;
    }
    let er = match from {
        DepthUnit::Er => value,
        DepthUnit::HbarOmega => 4.0 * value * value,
        DepthUnit::Si => value / cfg.recoil_si(),
    };
    match to {
        DepthUnit::Er => er,
        DepthUnit::HbarOmega => er.sqrt() / 2.0,
        DepthUnit::Si => er * cfg.recoil_si(),
    }
}

/// The trapping potentials of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PotentialKind {
    /// The infinite sinusoidal lattice `V0 sin^2(k0 x)`.
    SinusoidalOl,
    /// The lattice expanded to 22nd order about `x = 0`: three wells plus a
    /// steeply rising confinement.
    Taylor22TripleWell,
    /// The confinement alone, `V22 - V_OL`.
    ConfinementOnly,
    /// The lattice expanded to 6th order: a single anharmonic well.
    Sextic,
    /// Harmonic approximation of one well, `1/2 m omega^2 x^2`.
    Harmonic,
}

impl PotentialKind {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "ol" | "sinusoidal" => Ok(PotentialKind::SinusoidalOl),
            "triple_well" | "taylor22" => Ok(PotentialKind::Taylor22TripleWell),
            "confinement" => Ok(PotentialKind::ConfinementOnly),
            "sextic" => Ok(PotentialKind::Sextic),
            "harmonic" => Ok(PotentialKind::Harmonic),
            other => Err(Error::Config(format!("unknown potential `{other}`"))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            PotentialKind::SinusoidalOl => "sinusoidal",
            PotentialKind::Taylor22TripleWell => "triple_well",
            PotentialKind::ConfinementOnly => "confinement",
            PotentialKind::Sextic => "sextic",
            PotentialKind::Harmonic => "harmonic",
        }
    }
}

/// Taylor coefficients of `sin^2 u = sum_n c_n u^(2n)` with
/// `c_n = (-1)^(n+1) 2^(2n-1) / (2n)!`, exact by recurrence.
fn sin_sq_taylor(n_terms: usize) -> Vec<f64> {
    let mut cs = Vec::with_capacity(n_terms);
    let mut c = 1.0; // n = 1: 2/2! = 1
    for n in 1..=n_terms {
        cs.push(c);
        c *= -4.0 / ((2 * n + 1) as f64 * (2 * n + 2) as f64);
    }
    cs
}

fn taylor_eval(v0: f64, x: f64, n_terms: usize) -> f64 {
    let u2 = x * x;
    // Horner in u^2
    let cs = sin_sq_taylor(n_terms);
    let mut acc = 0.0;
    for &c in cs.iter().rev() {
        acc = acc * u2 + c;
    }
    v0 * acc * u2
}

/// Evaluate a trapping potential at position `x` (lattice units).
pub fn eval_potential(kind: PotentialKind, cfg: &LatticeConfig, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFiniteCoordinate(x));
    }
    let v0 = cfg.v0();
    Ok(match kind {
        PotentialKind::SinusoidalOl => v0 * x.sin().powi(2),
        PotentialKind::Taylor22TripleWell => taylor_eval(v0, x, 11),
        PotentialKind::ConfinementOnly => taylor_eval(v0, x, 11) - v0 * x.sin().powi(2),
        PotentialKind::Sextic => taylor_eval(v0, x, 3),
        PotentialKind::Harmonic => {
            let om = cfg.omega();
            0.5 * om * om * x * x
        }
    })
}
