//! Bose-Hubbard and extended-BH parameters from Wannier functions, plus the
//! harmonic and anharmonicity-corrected interaction parameters.
//!
//! All interaction integrals reduce to 1D through the analytic transverse
//! Gaussian factors of the separable ansatz `w(x) h0(y) h0(z)`. Parameter
//! values carry a provenance tag so downstream spectra stay labeled.

use crate::busch::{delta_e_harm, scattering_ratio};
use crate::error::{Error, Result};
use crate::lattice::{
    eval_potential, LatticeConfig, PotentialKind, CONFINEMENT_WINDOW,
};
use crate::wannier::{
    build_wannier_set, kinetic_lattice_element, quartic_integral, transverse_quartic_norm,
    BoundaryChoice, WannierFunction, WannierOptions,
};
use serde::{Deserialize, Serialize};

/// Which construction produced an interaction parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Wannier-integral representation.
    Bh,
    /// Harmonic-trap two-body energy offset.
    Harm,
    /// Anharmonicity-corrected harmonic offset.
    Corr,
    /// Fitted against a reference spectrum.
    Opt,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Bh => "bh",
            Provenance::Harm => "harm",
            Provenance::Corr => "corr",
            Provenance::Opt => "opt",
        }
    }
}

/// The four parameters of the triple-well two-boson model. `eps1` covers both
/// outer wells; the trap is symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BhParams {
    pub j: f64,
    pub u: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub provenance: Provenance,
    pub boundary: BoundaryChoice,
}

impl BhParams {
    pub fn bare(j: f64, u: f64, eps0: f64, eps1: f64) -> Self {
        BhParams { j, u, eps0, eps1, provenance: Provenance::Bh, boundary: BoundaryChoice::ThreeHalvesPi }
    }

    /// Onsite offset `Delta = eps1 - eps0`.
    pub fn delta(&self) -> f64 {
        self.eps1 - self.eps0
    }
}

/// Extended parameters: next-to-nearest hopping and the two nearest-neighbor
/// interaction integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EbhParams {
    pub base: BhParams,
    pub j2: f64,
    pub u1: f64,
    pub u2: f64,
}

/// Onsite energy together with the confinement-shift diagnostic
/// `delta_eps = eps - <w0| p^2/2m + V_OL |w0>`.
#[derive(Debug, Clone, Copy)]
pub struct OnsiteEnergy {
    pub eps: f64,
    pub delta_eps: f64,
}

/// Corrected interaction parameter plus its validity diagnostic
/// `|U_corr| / V0` (the correction is trustworthy while this is small).
#[derive(Debug, Clone, Copy)]
pub struct CorrectedU {
    pub value: f64,
    pub validity_ratio: f64,
}

/// The three site orbitals for one `(cfg, boundary)`, built once and reused
/// by every parameter integral.
pub struct SiteBasis {
    cfg: LatticeConfig,
    boundary: BoundaryChoice,
    w_minus: WannierFunction,
    w_center: WannierFunction,
    w_plus: WannierFunction,
}

impl SiteBasis {
    pub fn new(cfg: &LatticeConfig, boundary: BoundaryChoice) -> Result<Self> {
        Self::with_options(cfg, boundary, &WannierOptions::default())
    }

    pub fn with_options(
        cfg: &LatticeConfig,
        boundary: BoundaryChoice,
        opts: &WannierOptions,
    ) -> Result<Self> {
        let mut ws = build_wannier_set(cfg, boundary, &[-1, 0, 1], opts)?;
        let w_plus = ws.pop().unwrap();
        let w_center = ws.pop().unwrap();
        let w_minus = ws.pop().unwrap();
        Ok(SiteBasis { cfg: *cfg, boundary, w_minus, w_center, w_plus })
    }

    pub fn cfg(&self) -> &LatticeConfig {
        &self.cfg
    }

    pub fn boundary(&self) -> BoundaryChoice {
        self.boundary
    }

    pub fn orbital(&self, site: i32) -> Result<&WannierFunction> {
        match site {
            -1 => Ok(&self.w_minus),
            0 => Ok(&self.w_center),
            1 => Ok(&self.w_plus),
            _ => Err(Error::SiteOutOfBoundary { site, boundary: self.boundary.tag().into() }),
        }
    }

    /// Hopping `J = -<w0| p^2/2m + V_OL |w1>`, positive for the lowest band.
    pub fn hopping_j(&self) -> Result<f64> {
        let j = -kinetic_lattice_element(&self.cfg, &self.w_center, &self.w_plus)?;
        self.check_kinetic_quadrature(&self.w_center, &self.w_plus, -j)?;
        Ok(j)
    }

    /// Next-to-nearest hopping `J2 = <w_-1| p^2/2m + V_OL |w_+1>`.
    ///
    /// Under the three-cell boundary the outer sites are also periodic
    /// neighbors, so J2 degenerates to -J there; the four-cell and infinite
    /// boundaries are the meaningful choices.
    pub fn hopping_j2(&self) -> Result<f64> {
        kinetic_lattice_element(&self.cfg, &self.w_minus, &self.w_plus)
    }

    /// Kinetic quadrature sanity: Simpson on every other grid point has to
    /// agree with the full rule.
    fn check_kinetic_quadrature(
        &self,
        a: &WannierFunction,
        b: &WannierFunction,
        full: f64,
    ) -> Result<()> {
        let n = a.xs.len();
        let h2 = (a.xs[1] - a.xs[0]) * 2.0;
        let m = n / 2 + 1;
        let mut acc = 0.0;
        for idx in 0..m {
            let i = 2 * idx;
            let w = if idx == 0 || idx == m - 1 {
                1.0
            } else if idx % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let v = eval_potential(PotentialKind::SinusoidalOl, &self.cfg, a.xs[i])?;
            acc += w * h2 / 3.0 * (0.5 * a.derivs[i] * b.derivs[i] + a.values[i] * v * b.values[i]);
        }
        let scale = self.cfg.hbar_omega();
        if (acc - full).abs() > 1e-7 * scale {
            return Err(Error::QuadratureNotConverged(format!(
                "kinetic element differs by {:e} between grid resolutions",
                (acc - full).abs()
            )));
        }
        Ok(())
    }

    /// Onsite energy `eps_i = <w_i| p^2/2m + V_OL + V_conf |w_i>` with the
    /// confinement integrated over the window `|x| <= 2a` it is defined on.
    pub fn onsite_eps(&self, site: i32) -> Result<OnsiteEnergy> {
        let w = self.orbital(site)?;
        let base = kinetic_lattice_element(&self.cfg, w, w)?;
        let mut conf = 0.0;
        for i in 0..w.xs.len() {
            let x = w.xs[i];
            if x.abs() <= CONFINEMENT_WINDOW + 1e-12 {
                conf += w.weights[i]
                    * w.values[i]
                    * eval_potential(PotentialKind::ConfinementOnly, &self.cfg, x)?
                    * w.values[i];
            }
        }
        let no_conf_center = kinetic_lattice_element(&self.cfg, &self.w_center, &self.w_center)?;
        Ok(OnsiteEnergy { eps: base + conf, delta_eps: base + conf - no_conf_center })
    }

    /// `U^BH = (4 pi hbar^2 a_sc / m) int |w0|^4 d^3r`, exactly linear in the
    /// scattering length.
    pub fn u_bh(&self, a_sc: f64) -> f64 {
        let t = transverse_quartic_norm(&self.cfg);
        4.0 * std::f64::consts::PI * a_sc * quartic_integral(&self.w_center) * t * t
    }

    /// Harmonic-approximation interaction parameter: the Busch-branch offset
    /// in energy units.
    pub fn u_harm(&self, a_sc: f64, branch: usize) -> Result<f64> {
        Ok(self.cfg.hbar_omega() * delta_e_harm(a_sc / self.cfg.a_ho(), branch)?)
    }

    /// The anharmonicity correction factor
    /// `A = (sqrt(pi) a_ho / 2 hbar omega) (4 pi hbar^2/m) int |w0|^4 d^3r`,
    /// a pure lattice property (independent of the scattering length).
    pub fn correction_factor(&self) -> f64 {
        let t = transverse_quartic_norm(&self.cfg);
        let quartic_3d = quartic_integral(&self.w_center) * t * t;
        std::f64::consts::PI.sqrt() * self.cfg.a_ho() / (2.0 * self.cfg.hbar_omega())
            * 4.0
            * std::f64::consts::PI
            * quartic_3d
    }

    /// `U^corr = A * U^harm` on the requested branch, with the validity
    /// diagnostic `|U^corr| / V0`.
    pub fn u_corr(&self, a_sc: f64, branch: usize) -> Result<CorrectedU> {
        let value = self.correction_factor() * self.u_harm(a_sc, branch)?;
        Ok(CorrectedU { value, validity_ratio: value.abs() / self.cfg.v0() })
    }

    /// Assembled BH parameter set with the interaction in the chosen
    /// representation (branch 1 for `harm`/`corr`).
    pub fn bh_params(&self, a_sc: f64, provenance: Provenance) -> Result<BhParams> {
        let u = match provenance {
            Provenance::Bh => self.u_bh(a_sc),
            Provenance::Harm => self.u_harm(a_sc, 1)?,
            Provenance::Corr => self.u_corr(a_sc, 1)?.value,
            Provenance::Opt => {
                return Err(Error::Config(
                    "optimal parameters come from the fit, not the integrals".into(),
                ))
            }
        };
        Ok(BhParams {
            j: self.hopping_j()?,
            u,
            eps0: self.onsite_eps(0)?.eps,
            eps1: self.onsite_eps(1)?.eps,
            provenance,
            boundary: self.boundary,
        })
    }

    /// All extended-model parameters; transverse factors as in `u_bh`.
    pub fn ebh_parameters(&self, a_sc: f64) -> Result<EbhParams> {
        let base = self.bh_params(a_sc, Provenance::Bh)?;
        let t = transverse_quartic_norm(&self.cfg);
        let pref = 4.0 * std::f64::consts::PI * a_sc * t * t;
        let w0 = &self.w_center;
        let w1 = &self.w_plus;
        let u1 = pref * w0.quadrature(|i| w0.values[i].powi(3) * w1.values[i]);
        let u2 = pref * w0.quadrature(|i| (w0.values[i] * w1.values[i]).powi(2));
        Ok(EbhParams { base, j2: self.hopping_j2()?, u1, u2 })
    }
}

/// Free-function forms of the parameter integrals; each builds the site
/// basis internally. Sweeps should construct a [`SiteBasis`] once instead.
pub fn hopping_j(cfg: &LatticeConfig, boundary: BoundaryChoice) -> Result<f64> {
    SiteBasis::new(cfg, boundary)?.hopping_j()
}

pub fn onsite_eps(cfg: &LatticeConfig, boundary: BoundaryChoice, site: i32) -> Result<OnsiteEnergy> {
    SiteBasis::new(cfg, boundary)?.onsite_eps(site)
}

pub fn u_bh(cfg: &LatticeConfig, boundary: BoundaryChoice, a_sc: f64) -> Result<f64> {
    Ok(SiteBasis::new(cfg, boundary)?.u_bh(a_sc))
}

pub fn ebh_parameters(
    cfg: &LatticeConfig,
    boundary: BoundaryChoice,
    a_sc: f64,
) -> Result<EbhParams> {
    SiteBasis::new(cfg, boundary)?.ebh_parameters(a_sc)
}

pub fn correction_factor(cfg: &LatticeConfig, boundary: BoundaryChoice) -> Result<f64> {
    Ok(SiteBasis::new(cfg, boundary)?.correction_factor())
}

pub fn u_corr(
    cfg: &LatticeConfig,
    boundary: BoundaryChoice,
    a_sc: f64,
    branch: usize,
) -> Result<CorrectedU> {
    SiteBasis::new(cfg, boundary)?.u_corr(a_sc, branch)
}

/// Slope `d U^BH / d a_sc` (independent of `a_sc`), used by the correction
/// identity checks.
pub fn u_bh_slope(basis: &SiteBasis) -> f64 {
    basis.u_bh(1.0)
}

/// Finite-difference slope of the Busch branch-1 offset at `a_sc = 0`,
/// in energy per length: the independent side of the construction identity
/// `A * (d Delta E_harm / d a)_0 = d U^BH / d a`.
pub fn harm_slope_fd(cfg: &LatticeConfig) -> Result<f64> {
    let aho = cfg.a_ho();
    let h = 1e-6 * aho;
    let plus = delta_e_harm(h / aho, 1)?;
    let minus = delta_e_harm(-h / aho, 1)?;
    Ok(cfg.hbar_omega() * (plus - minus) / (2.0 * h))
}

/// Exact small-`a` slope of the Busch branch for reference:
/// `(2/sqrt(pi)) hbar omega / a_ho`.
pub fn harm_slope_exact(cfg: &LatticeConfig) -> f64 {
    2.0 / std::f64::consts::PI.sqrt() * cfg.hbar_omega() / cfg.a_ho()
}

/// Scattering ratio kept for callers that want the raw Busch curve.
pub fn busch_ratio(eps: f64) -> f64 {
    scattering_ratio(eps)
}
