//! Bloch bands of the sinusoidal lattice by plane-wave (central-equation)
//! diagonalization.
//!
//! `V0 sin^2(k0 x) = V0/2 - V0/4 (e^{2i k0 x} + e^{-2i k0 x})`, so in the
//! plane-wave basis `e^{i(k + 2m k0)x}` the Hamiltonian is tridiagonal:
//! diagonal `(k + 2m)^2/2 + V0/2`, off-diagonal `-V0/4` (lattice units).

use crate::error::{Error, Result};
use crate::lattice::{LatticeConfig, LATTICE_CONSTANT};
use crate::linalg::eigh_sorted;
use nalgebra::DMatrix;

/// Default plane-wave cutoff; 65 reciprocal vectors converge far past
/// machine precision for V0 <= 100 E_r.
pub const DEFAULT_CUTOFF: usize = 32;

/// One Bloch eigenpair at quasimomentum `k` (units of k0).
#[derive(Debug, Clone)]
pub struct BlochSolution {
    pub k: f64,
    pub band_index: usize,
    pub energy: f64,
    /// Real plane-wave coefficients over reciprocal vectors `2 m k0`,
    /// `m = -M..=M`. The central-equation matrix is real symmetric, so a
    /// real gauge always exists; phases are fixed downstream.
    pub coeffs: Vec<f64>,
}

impl BlochSolution {
    /// Reciprocal-space index range `-M..=M`.
    pub fn cutoff(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }
}

/// Min/max of one band over the Brillouin zone.
#[derive(Debug, Clone, Copy)]
pub struct BandExtents {
    pub band_index: usize,
    pub e_min: f64,
    pub e_max: f64,
}

/// Solve the central equation at quasimomentum `k` (in units of k0,
/// `-1 <= k < 1`) for the lowest `n_bands` bands.
pub fn solve_bloch(
    cfg: &LatticeConfig,
    k: f64,
    n_bands: usize,
    cutoff: usize,
) -> Result<Vec<BlochSolution>> {
    if cutoff < 8 {
        return Err(Error::BlochSolve {
            k,
            cutoff,
            message: "plane-wave cutoff must be at least 8".into(),
        });
    }
    if n_bands > 2 * cutoff {
        return Err(Error::BlochSolve {
            k,
            cutoff,
            message: format!("{n_bands} bands requested from a basis of {}", 2 * cutoff + 1),
        });
    }
    let v0 = cfg.v0();
    let n = 2 * cutoff + 1;
    let mut h = DMatrix::zeros(n, n);
    for (row, m) in (-(cutoff as i64)..=cutoff as i64).enumerate() {
        let q = k + 2.0 * m as f64;
        h[(row, row)] = 0.5 * q * q + 0.5 * v0;
        if row + 1 < n {
            h[(row, row + 1)] = -0.25 * v0;
            h[(row + 1, row)] = -0.25 * v0;
        }
    }
    let (vals, vecs) = eigh_sorted(&h).map_err(|e| Error::BlochSolve {
        k,
        cutoff,
        message: e.to_string(),
    })?;
    Ok((0..n_bands)
        .map(|band| BlochSolution {
            k,
            band_index: band,
            energy: vals[band],
            coeffs: vecs.column(band).iter().copied().collect(),
        })
        .collect())
}

/// Band energy at a single `(k, band)` point.
fn band_energy(cfg: &LatticeConfig, k: f64, band: usize, cutoff: usize) -> Result<f64> {
    Ok(solve_bloch(cfg, k, band + 1, cutoff)?[band].energy)
}

/// Golden-section refinement of an extremum bracketed by three uniform grid
/// samples around `k_c` with spacing `dk`. `sign` +1 minimizes, -1 maximizes.
fn refine_extremum(
    cfg: &LatticeConfig,
    band: usize,
    cutoff: usize,
    k_c: f64,
    dk: f64,
    sign: f64,
) -> Result<f64> {
    const PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = k_c - dk;
    let mut b = k_c + dk;
    let mut c = b - PHI * (b - a);
    let mut d = a + PHI * (b - a);
    let mut fc = sign * band_energy(cfg, c, band, cutoff)?;
    let mut fd = sign * band_energy(cfg, d, band, cutoff)?;
    for _ in 0..60 {
        if (b - a).abs() < 1e-10 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - PHI * (b - a);
            fc = sign * band_energy(cfg, c, band, cutoff)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + PHI * (b - a);
            fd = sign * band_energy(cfg, d, band, cutoff)?;
        }
    }
    let km = 0.5 * (a + b);
    Ok(sign * band_energy(cfg, km, band, cutoff)?)
}

/// Extents of one band over a uniformly sampled (half-open) Brillouin zone,
/// refined by golden-section search around the sampled extrema.
pub fn band_extents(
    cfg: &LatticeConfig,
    band_index: usize,
    n_k: usize,
    cutoff: usize,
) -> Result<BandExtents> {
    if n_k < 16 {
        return Err(Error::Config(format!("band extents need n_k >= 16, got {n_k}")));
    }
    let dk = 2.0 / n_k as f64;
    let mut e_min = f64::INFINITY;
    let mut e_max = f64::NEG_INFINITY;
    let mut k_min = -1.0;
    let mut k_max = -1.0;
    for i in 0..n_k {
        let k = -1.0 + i as f64 * dk;
        let e = band_energy(cfg, k, band_index, cutoff)?;
        if e < e_min {
            e_min = e;
            k_min = k;
        }
        if e > e_max {
            e_max = e;
            k_max = k;
        }
    }
    let refined_min = refine_extremum(cfg, band_index, cutoff, k_min, dk, 1.0)?;
    let refined_max = refine_extremum(cfg, band_index, cutoff, k_max, dk, -1.0)?;
    Ok(BandExtents {
        band_index,
        e_min: e_min.min(refined_min),
        e_max: e_max.max(refined_max),
    })
}

/// Brillouin-zone average of one band (uniform half-open k grid).
pub fn mean_band_energy(
    cfg: &LatticeConfig,
    band_index: usize,
    n_k: usize,
    cutoff: usize,
) -> Result<f64> {
    let dk = 2.0 / n_k as f64;
    let mut acc = 0.0;
    for i in 0..n_k {
        let k = -1.0 + i as f64 * dk;
        acc += band_energy(cfg, k, band_index, cutoff)?;
    }
    Ok(acc / n_k as f64)
}

/// First Fourier coefficient of the lowest band,
/// `J = -(1/N) sum_k E(k) cos(k a)`: the tight-binding hopping of the
/// infinite lattice. Used as a cross-check against the Wannier integrals.
pub fn dispersion_hopping(cfg: &LatticeConfig, n_k: usize, cutoff: usize) -> Result<f64> {
    let dk = 2.0 / n_k as f64;
    let mut acc = 0.0;
    for i in 0..n_k {
        let k = -1.0 + i as f64 * dk;
        acc += band_energy(cfg, k, 0, cutoff)? * (k * LATTICE_CONSTANT).cos();
    }
    Ok(-acc / n_k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::RECOIL_ENERGY;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn free_particle_limits() {
        let cfg = LatticeConfig::new(1e-14, crate::lattice::DepthUnit::Er, 1.0, 7.016).unwrap();
        let sols = solve_bloch(&cfg, 0.0, 2, 16).unwrap();
        assert_abs_diff_eq!(sols[0].energy, 0.0, epsilon = 1e-12);
        let half = solve_bloch(&cfg, 0.5, 1, 16).unwrap();
        // hbar^2 k^2/2m at k = k0/2 is E_r/4
        assert_relative_eq!(half[0].energy, RECOIL_ENERGY / 4.0, max_relative = 1e-10);
        // folded free-particle band 0 spans [0, E_r]
        let ext = band_extents(&cfg, 0, 32, 16).unwrap();
        assert_abs_diff_eq!(ext.e_min, 0.0, epsilon = 1e-10);
        assert_relative_eq!(ext.e_max, RECOIL_ENERGY, max_relative = 1e-8);
    }

    #[test]
    fn coefficients_normalized() {
        let cfg = LatticeConfig::from_depth_er(12.0).unwrap();
        for sol in solve_bloch(&cfg, 0.37, 4, 32).unwrap() {
            let s: f64 = sol.coeffs.iter().map(|c| c * c).sum();
            assert_relative_eq!(s, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn bands_ascending_and_symmetric_in_k() {
        let cfg = LatticeConfig::from_depth_er(8.0).unwrap();
        for &k in &[0.0, 0.25, 0.7, 0.99] {
            let sols = solve_bloch(&cfg, k, 4, 32).unwrap();
            for w in sols.windows(2) {
                assert!(w[0].energy <= w[1].energy);
            }
            let mirror = solve_bloch(&cfg, -k, 4, 32).unwrap();
            for (a, b) in sols.iter().zip(&mirror) {
                assert_relative_eq!(a.energy, b.energy, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn deep_lattice_band_offset() {
        // k-averaged lowest band sits at hw/2 - E_r/4 for deep lattices
        let cfg = LatticeConfig::from_depth_er(40.0).unwrap();
        let mean = mean_band_energy(&cfg, 0, 64, 32).unwrap();
        let target = cfg.hbar_omega() / 2.0 - RECOIL_ENERGY / 4.0;
        assert!((mean - target).abs() < 0.05 * RECOIL_ENERGY);
    }

    #[test]
    fn band_width_shrinks_and_gap_grows_with_depth() {
        let mut widths = Vec::new();
        let mut gaps = Vec::new();
        for &er in &[4.0, 8.0, 12.0, 16.0, 20.0] {
            let cfg = LatticeConfig::from_depth_er(er).unwrap();
            let b0 = band_extents(&cfg, 0, 32, 32).unwrap();
            let b1 = band_extents(&cfg, 1, 32, 32).unwrap();
            widths.push(b0.e_max - b0.e_min);
            gaps.push(b1.e_min - b0.e_max);
        }
        for w in widths.windows(2) {
            assert!(w[1] < w[0], "band width must shrink with depth");
        }
        for g in gaps.windows(2) {
            assert!(g[1] > g[0], "band gap must grow with depth");
        }
    }

    #[test]
    fn cutoff_convergence() {
        for &er in &[10.0, 30.0] {
            let cfg = LatticeConfig::from_depth_er(er).unwrap();
            for band in 0..2 {
                for &k in &[0.0, 0.5, 0.97] {
                    let e16 = solve_bloch(&cfg, k, band + 1, 16).unwrap()[band].energy;
                    let e32 = solve_bloch(&cfg, k, band + 1, 32).unwrap()[band].energy;
                    assert!(
                        (e16 - e32).abs() <= 1e-10 * cfg.hbar_omega(),
                        "cutoff drift {} at V0={}Er k={}",
                        (e16 - e32).abs(),
                        er,
                        k
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let cfg = LatticeConfig::from_depth_er(8.0).unwrap();
        assert!(solve_bloch(&cfg, 0.0, 2, 4).is_err());
        assert!(solve_bloch(&cfg, 0.0, 40, 16).is_err());
        assert!(band_extents(&cfg, 0, 8, 32).is_err());
    }
}
