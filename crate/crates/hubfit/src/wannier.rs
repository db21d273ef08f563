//! Real, maximally localized Wannier functions of the lowest band under
//! finite periodic boundary conditions, plus the quadrature utilities the
//! parameter integrals are built on.
//!
//! Periodic boundaries on an interval of length `L = n a` quantize the
//! quasimomentum to `k = 2 pi j / L`. The boundary at `k0 x_B = 3 pi/2`
//! gives three k points, the one at `k0 x_B = 2 pi` gives four, and the
//! infinite lattice is approximated by `n_cells` periods. Phases are fixed
//! in the Kohn convention: every Bloch function is real and positive at the
//! central-well minimum, which for a symmetric single band makes the Wannier
//! functions real and maximally localized.

use crate::bands::{solve_bloch, DEFAULT_CUTOFF};
use crate::error::{Error, Result};
use crate::lattice::{eval_potential, LatticeConfig, PotentialKind, LATTICE_CONSTANT};
use serde::{Deserialize, Serialize};

/// Boundary condition defining the discrete Bloch set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryChoice {
    /// `k0 x_B = 3 pi / 2`: interval length `3a`, three k points.
    ThreeHalvesPi,
    /// `k0 x_B = 2 pi`: interval length `4a`, four k points.
    TwoPi,
    /// Infinite lattice proxied by `n_cells >= 15` periods.
    Infinite { n_cells: usize },
}

impl BoundaryChoice {
    pub fn parse(tag: &str) -> Result<Self> {
        match tag {
            "three_halves_pi" | "3pi/2" => Ok(BoundaryChoice::ThreeHalvesPi),
            "two_pi" | "2pi" => Ok(BoundaryChoice::TwoPi),
            "infinite" | "inf" => Ok(BoundaryChoice::Infinite { n_cells: 15 }),
            other => Err(Error::Config(format!("unknown boundary `{other}`"))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            BoundaryChoice::ThreeHalvesPi => "three_halves_pi",
            BoundaryChoice::TwoPi => "two_pi",
            BoundaryChoice::Infinite { .. } => "infinite",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let BoundaryChoice::Infinite { n_cells } = self {
            if *n_cells < 15 {
                return Err(Error::Config(format!(
                    "the infinite-lattice proxy needs n_cells >= 15, got {n_cells}"
                )));
            }
        }
        Ok(())
    }

    /// Number of lattice cells in the interval.
    pub fn cells(&self) -> usize {
        match self {
            BoundaryChoice::ThreeHalvesPi => 3,
            BoundaryChoice::TwoPi => 4,
            BoundaryChoice::Infinite { n_cells } => *n_cells,
        }
    }

    /// Interval length `L` in lattice units.
    pub fn interval_length(&self) -> f64 {
        self.cells() as f64 * LATTICE_CONSTANT
    }

    /// The discrete quasimomenta (units of k0) commensurate with the interval.
    pub fn k_set(&self) -> Vec<f64> {
        let n = self.cells() as i64;
        // j ranges over one Brillouin zone; even n includes the zone edge once.
        let lo = if n % 2 == 0 { -(n / 2) + 1 } else { -(n / 2) };
        (lo..=n / 2).map(|j| 2.0 * j as f64 / n as f64).collect()
    }

    /// Largest |site| that fits the interval.
    pub fn max_site(&self) -> i32 {
        ((self.cells() as i32) - 1) / 2
    }
}

/// Grid and basis-size knobs for the Wannier construction.
#[derive(Debug, Clone, Copy)]
pub struct WannierOptions {
    /// Uniform samples per lattice cell (total grid is `cells * ppc + 1`).
    pub points_per_cell: usize,
    /// Plane-wave cutoff passed to the Bloch solver.
    pub cutoff: usize,
}

impl Default for WannierOptions {
    fn default() -> Self {
        WannierOptions { points_per_cell: 1024, cutoff: DEFAULT_CUTOFF }
    }
}

/// A sampled 1D Wannier orbital with its quadrature rule.
#[derive(Debug, Clone)]
pub struct WannierFunction {
    pub site: i32,
    pub boundary: BoundaryChoice,
    /// Uniform grid spanning the boundary interval, endpoints included.
    pub xs: Vec<f64>,
    /// Real samples `w(x)`.
    pub values: Vec<f64>,
    /// Analytic derivative samples `w'(x)` from the plane-wave expansion.
    pub derivs: Vec<f64>,
    /// Composite-Simpson weights matching `xs`.
    pub weights: Vec<f64>,
    v0: f64,
}

impl WannierFunction {
    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// Integrate a per-sample integrand against the stored quadrature rule.
    pub fn quadrature(&self, integrand: impl Fn(usize) -> f64) -> f64 {
        self.weights.iter().enumerate().map(|(i, w)| w * integrand(i)).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.quadrature(|i| self.values[i] * self.values[i])
    }

    pub fn overlap(&self, other: &WannierFunction) -> f64 {
        assert_eq!(self.xs.len(), other.xs.len(), "overlap requires a shared grid");
        self.quadrature(|i| self.values[i] * other.values[i])
    }

    /// `L^2` distance to `other` on the shared grid.
    pub fn l2_distance(&self, other: &WannierFunction) -> f64 {
        self.quadrature(|i| (self.values[i] - other.values[i]).powi(2)).sqrt()
    }

    /// `L^2` defect of the translation relation `w_site(x) ~ w_0(x - site a)`,
    /// evaluated by an integer-sample periodic shift. Reported, not asserted,
    /// for finite boundaries.
    pub fn translation_defect(&self, w0: &WannierFunction) -> f64 {
        let n = self.xs.len() - 1; // periodic: last sample duplicates the first
        let per_cell = n / self.boundary.cells();
        let shift = (self.site as isize) * per_cell as isize;
        let mut acc = 0.0;
        for i in 0..self.xs.len() {
            let j = (i as isize - shift).rem_euclid(n as isize) as usize;
            acc += self.weights[i] * (self.values[i] - w0.values[j]).powi(2);
        }
        acc.sqrt()
    }
}

fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd sample count, got {n}");
    let mut w = vec![1.0; n];
    for (i, wi) in w.iter_mut().enumerate().take(n - 1).skip(1) {
        *wi = if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    w.iter_mut().for_each(|x| *x *= h / 3.0);
    w
}

/// Sample a Bloch function (and derivative) over the grid in the Kohn gauge.
///
/// Accepts a complex coefficient vector so the gauge fix itself is testable:
/// the returned samples are invariant under a global phase of the input.
fn sample_bloch_gauged(
    c_re: &[f64],
    c_im: &[f64],
    k: f64,
    xs: &[f64],
    interval_len: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let cutoff = (c_re.len() - 1) / 2;
    // psi(0) = sum_m c_m fixes the phase: rotate so it is real positive.
    let p_re: f64 = c_re.iter().sum();
    let p_im: f64 = c_im.iter().sum();
    let p_abs = (p_re * p_re + p_im * p_im).sqrt();
    let (g_re, g_im) = if p_abs > 0.0 { (p_re / p_abs, -p_im / p_abs) } else { (1.0, 0.0) };
    let norm = 1.0 / interval_len.sqrt();

    let n = xs.len();
    let (mut vr, mut vi) = (vec![0.0; n], vec![0.0; n]);
    let (mut dr, mut di) = (vec![0.0; n], vec![0.0; n]);
    for (ix, &x) in xs.iter().enumerate() {
        // e^{i(k + 2m)x} by angle recurrence over m.
        let q0 = k - 2.0 * cutoff as f64;
        let (mut cos_t, mut sin_t) = ((q0 * x).cos(), (q0 * x).sin());
        let (cos_s, sin_s) = ((2.0 * x).cos(), (2.0 * x).sin());
        let (mut sr, mut si) = (0.0, 0.0);
        let (mut tr, mut ti) = (0.0, 0.0);
        for m in 0..c_re.len() {
            let q = q0 + 2.0 * m as f64;
            let (a, b) = (c_re[m], c_im[m]);
            // (a + ib)(cos + i sin)
            let er = a * cos_t - b * sin_t;
            let ei = a * sin_t + b * cos_t;
            sr += er;
            si += ei;
            // derivative: multiply by iq
            tr += -q * ei;
            ti += q * er;
            let c_next = cos_t * cos_s - sin_t * sin_s;
            sin_t = sin_t * cos_s + cos_t * sin_s;
            cos_t = c_next;
        }
        // apply gauge and 1/sqrt(L)
        vr[ix] = (sr * g_re - si * g_im) * norm;
        vi[ix] = (sr * g_im + si * g_re) * norm;
        dr[ix] = (tr * g_re - ti * g_im) * norm;
        di[ix] = (tr * g_im + ti * g_re) * norm;
    }
    (vr, vi, dr, di)
}

/// Build Wannier functions for several sites at once, sharing Bloch solves.
pub fn build_wannier_set(
    cfg: &LatticeConfig,
    boundary: BoundaryChoice,
    sites: &[i32],
    opts: &WannierOptions,
) -> Result<Vec<WannierFunction>> {
    boundary.validate()?;
    if opts.points_per_cell % 2 != 0 {
        return Err(Error::Config(format!(
            "points_per_cell must be even, got {}",
            opts.points_per_cell
        )));
    }
    if boundary.cells() * opts.points_per_cell + 1 < 2049 {
        return Err(Error::Config(
            "the quadrature grid needs at least 2048 points over the interval".into(),
        ));
    }
    for &site in sites {
        if site.abs() > boundary.max_site() {
            return Err(Error::SiteOutOfBoundary { site, boundary: boundary.tag().into() });
        }
    }
    let length = boundary.interval_length();
    let n = boundary.cells() * opts.points_per_cell + 1;
    let xs: Vec<f64> = (0..n)
        .map(|i| -0.5 * length + length * i as f64 / (n - 1) as f64)
        .collect();
    let h = length / (n - 1) as f64;
    let weights = simpson_weights(n, h);

    let ks = boundary.k_set();
    let n_k = ks.len() as f64;
    // Solve each distinct |k| once; negative k uses the conjugate.
    let mut cache: Vec<(f64, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> = Vec::new();
    for &k in &ks {
        let ka = k.abs();
        if !cache.iter().any(|e| (e.0 - ka).abs() < 1e-14) {
            let sol = &solve_bloch(cfg, ka, 1, opts.cutoff)?[0];
            let zeros = vec![0.0; sol.coeffs.len()];
            let samp = sample_bloch_gauged(&sol.coeffs, &zeros, ka, &xs, length);
            cache.push((ka, samp.0, samp.1, samp.2, samp.3));
        }
    }
    let lookup = |ka: f64| cache.iter().find(|e| (e.0 - ka).abs() < 1e-14).unwrap();

    let mut out = Vec::with_capacity(sites.len());
    for &site in sites {
        let x_site = site as f64 * LATTICE_CONSTANT;
        let mut w_re = vec![0.0; n];
        let mut w_im = vec![0.0; n];
        let mut d_re = vec![0.0; n];
        let mut d_im = vec![0.0; n];
        for &k in &ks {
            let (_, vr, vi, dr, di) = lookup(k.abs());
            let sign = if k < 0.0 { -1.0 } else { 1.0 };
            // psi_{-k} = conj(psi_k); phase e^{-i k x_site}
            let (pc, ps) = ((k * x_site).cos(), -(k * x_site).sin());
            for i in 0..n {
                let (re, im) = (vr[i], sign * vi[i]);
                w_re[i] += pc * re - ps * im;
                w_im[i] += pc * im + ps * re;
                let (rde, dim_) = (dr[i], sign * di[i]);
                d_re[i] += pc * rde - ps * dim_;
                d_im[i] += pc * dim_ + ps * rde;
            }
        }
        let scale = 1.0 / n_k.sqrt();
        let max_re = w_re.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let max_im = w_im.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if max_im > 1e-12 * max_re {
            return Err(Error::Eigensolver(format!(
                "Wannier function came out complex (imaginary residue {max_im:e})"
            )));
        }
        let values: Vec<f64> = w_re.iter().map(|v| v * scale).collect();
        let derivs: Vec<f64> = d_re.iter().map(|v| v * scale).collect();
        out.push(WannierFunction {
            site,
            boundary,
            xs: xs.clone(),
            values,
            derivs,
            weights: weights.clone(),
            v0: cfg.v0(),
        });
    }
    Ok(out)
}

/// Build the Wannier function of one site under the given boundary.
pub fn build_wannier(
    cfg: &LatticeConfig,
    boundary: BoundaryChoice,
    site: i32,
) -> Result<WannierFunction> {
    Ok(build_wannier_set(cfg, boundary, &[site], &WannierOptions::default())?.remove(0))
}

/// `int h0^4 dy` for the transverse harmonic ground state: `1/(sqrt(2 pi) l)`
/// with `l = sqrt(hbar / m omega)`.
pub fn transverse_quartic_norm(cfg: &LatticeConfig) -> f64 {
    1.0 / ((2.0 * std::f64::consts::PI).sqrt() * cfg.osc_len())
}

/// `int w^4 dx` by the stored quadrature rule.
pub fn quartic_integral(w: &WannierFunction) -> f64 {
    w.quadrature(|i| w.values[i].powi(4))
}

/// Kinetic-plus-lattice matrix element
/// `<a| p^2/2m + V_OL |b> = int (1/2) a' b' + a V_OL b dx`
/// (integration by parts; periodic boundary terms vanish).
pub fn kinetic_lattice_element(
    cfg: &LatticeConfig,
    a: &WannierFunction,
    b: &WannierFunction,
) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..a.xs.len() {
        let v = eval_potential(PotentialKind::SinusoidalOl, cfg, a.xs[i])?;
        acc += a.weights[i] * (0.5 * a.derivs[i] * b.derivs[i] + a.values[i] * v * b.values[i]);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn cfg_er(er: f64) -> LatticeConfig {
        LatticeConfig::from_depth_er(er).unwrap()
    }

    #[test]
    fn k_sets_match_the_boundary_quantization() {
        assert_eq!(BoundaryChoice::ThreeHalvesPi.k_set(), vec![-2.0 / 3.0, 0.0, 2.0 / 3.0]);
        assert_eq!(BoundaryChoice::TwoPi.k_set(), vec![-0.5, 0.0, 0.5, 1.0]);
        let inf = BoundaryChoice::Infinite { n_cells: 15 };
        let ks = inf.k_set();
        assert_eq!(ks.len(), 15);
        assert_relative_eq!(ks[0], -14.0 / 15.0);
        assert_relative_eq!(ks[14], 14.0 / 15.0);
    }

    #[test]
    fn normalization_and_orthogonality() {
        let cfg = cfg_er(9.0);
        for boundary in [
            BoundaryChoice::ThreeHalvesPi,
            BoundaryChoice::TwoPi,
            BoundaryChoice::Infinite { n_cells: 15 },
        ] {
            let ws =
                build_wannier_set(&cfg, boundary, &[-1, 0, 1], &WannierOptions::default()).unwrap();
            for w in &ws {
                assert_abs_diff_eq!(w.norm_sq(), 1.0, epsilon = 1e-10);
            }
            for i in 0..3 {
                for j in (i + 1)..3 {
                    assert!(
                        ws[i].overlap(&ws[j]).abs() < 1e-8,
                        "overlap {} for sites {} {} under {:?}",
                        ws[i].overlap(&ws[j]),
                        ws[i].site,
                        ws[j].site,
                        boundary
                    );
                }
            }
        }
    }

    #[test]
    fn central_function_is_even_and_localized() {
        let cfg = cfg_er(8.0);
        let w0 = build_wannier(&cfg, BoundaryChoice::ThreeHalvesPi, 0).unwrap();
        let n = w0.xs.len();
        for i in 0..n / 2 {
            assert_abs_diff_eq!(w0.values[i], w0.values[n - 1 - i], epsilon = 1e-10);
        }
        let at = |x: f64| {
            let i = w0
                .xs
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - x).abs().partial_cmp(&(b.1 - x).abs()).unwrap())
                .unwrap()
                .0;
            w0.values[i]
        };
        let ratio = (at(0.0) / at(LATTICE_CONSTANT)).powi(2);
        assert!(ratio > 1e2, "localization ratio {ratio}");
    }

    #[test]
    fn gauge_fix_removes_a_global_phase() {
        let cfg = cfg_er(6.0);
        let sol = &solve_bloch(&cfg, 2.0 / 3.0, 1, 32).unwrap()[0];
        let xs: Vec<f64> = (0..65).map(|i| -4.0 + 8.0 * i as f64 / 64.0).collect();
        let zeros = vec![0.0; sol.coeffs.len()];
        let base = sample_bloch_gauged(&sol.coeffs, &zeros, 2.0 / 3.0, &xs, 3.0 * LATTICE_CONSTANT);
        // rotate the coefficients by an arbitrary phase
        let theta: f64 = 1.234_567;
        let c_re: Vec<f64> = sol.coeffs.iter().map(|c| c * theta.cos()).collect();
        let c_im: Vec<f64> = sol.coeffs.iter().map(|c| c * theta.sin()).collect();
        let rot = sample_bloch_gauged(&c_re, &c_im, 2.0 / 3.0, &xs, 3.0 * LATTICE_CONSTANT);
        for i in 0..xs.len() {
            assert_abs_diff_eq!(base.0[i], rot.0[i], epsilon = 1e-12);
            assert_abs_diff_eq!(base.1[i], rot.1[i], epsilon = 1e-12);
            assert_abs_diff_eq!(base.2[i], rot.2[i], epsilon = 1e-11);
        }
    }

    #[test]
    fn translation_relation_under_infinite_boundary() {
        let cfg = cfg_er(8.0);
        let boundary = BoundaryChoice::Infinite { n_cells: 15 };
        let ws = build_wannier_set(&cfg, boundary, &[0, 1], &WannierOptions::default()).unwrap();
        let defect = ws[1].translation_defect(&ws[0]);
        assert!(defect < 1e-6, "translation defect {defect}");
        // finite boundaries: finite defect, reported only
        let wsf = build_wannier_set(
            &cfg,
            BoundaryChoice::ThreeHalvesPi,
            &[0, 1],
            &WannierOptions::default(),
        )
        .unwrap();
        assert!(wsf[1].translation_defect(&wsf[0]).is_finite());
    }

    #[test]
    fn deep_lattice_matches_harmonic_ground_state() {
        for &er in &[20.0, 25.0] {
            let cfg = cfg_er(er);
            let w0 = build_wannier(&cfg, BoundaryChoice::Infinite { n_cells: 15 }, 0).unwrap();
            let om = cfg.omega();
            let mut h: Vec<f64> =
                w0.xs.iter().map(|&x| (-0.5 * om * x * x).exp()).collect();
            let nrm = w0.quadrature(|i| h[i] * h[i]).sqrt();
            h.iter_mut().for_each(|v| *v /= nrm);
            let d = w0.quadrature(|i| (w0.values[i] - h[i]).powi(2)).sqrt();
            assert!(d <= 0.05, "L2 distance {d} at V0 = {er} Er");
        }
    }

    #[test]
    fn transverse_norm_value_and_scaling() {
        let cfg = LatticeConfig::from_depth_hw(0.5).unwrap(); // omega = 1 in lattice units
        assert_relative_eq!(cfg.omega(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(
            transverse_quartic_norm(&cfg),
            1.0 / (2.0 * std::f64::consts::PI).sqrt(),
            max_relative = 1e-12
        );
        // quadrupling V0 doubles omega and scales the norm by sqrt(2)
        let cfg4 = LatticeConfig::from_depth_er(4.0 * cfg.v0_er()).unwrap();
        assert_relative_eq!(
            transverse_quartic_norm(&cfg4) / transverse_quartic_norm(&cfg),
            2.0f64.sqrt(),
            max_relative = 1e-12
        );
        // numerical quadrature of h0^4 matches the closed form
        let l = cfg.osc_len();
        let n = 4001;
        let mut acc = 0.0;
        let h = 16.0 * l / (n as f64 - 1.0);
        for i in 0..n {
            let y = -8.0 * l + h * i as f64;
            let h0 = (1.0 / (std::f64::consts::PI * l * l)).powf(0.25)
                * (-y * y / (2.0 * l * l)).exp();
            let w = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * h / 3.0 * h0.powi(4);
        }
        assert_relative_eq!(acc, transverse_quartic_norm(&cfg), max_relative = 1e-10);
    }

    #[test]
    fn quartic_integral_gaussian_and_convergence() {
        // a normalized Gaussian of width l has int g^4 = 1/(sqrt(2 pi) l)
        let cfg = cfg_er(12.0);
        let w0 = build_wannier(&cfg, BoundaryChoice::ThreeHalvesPi, 0).unwrap();
        let q = quartic_integral(&w0);
        assert!(q > 0.0);
        let fine = build_wannier_set(
            &cfg,
            BoundaryChoice::ThreeHalvesPi,
            &[0],
            &WannierOptions { points_per_cell: 2048, cutoff: DEFAULT_CUTOFF },
        )
        .unwrap();
        let qf = quartic_integral(&fine[0]);
        assert!(((q - qf) / q).abs() <= 1e-9, "grid convergence {}", ((q - qf) / q).abs());
        // synthetic Gaussian sanity check on the same quadrature
        let l = 0.37;
        let mut g = WannierFunction {
            site: 0,
            boundary: BoundaryChoice::ThreeHalvesPi,
            xs: w0.xs.clone(),
            values: w0
                .xs
                .iter()
                .map(|&x| (1.0 / (std::f64::consts::PI * l * l)).powf(0.25) * (-x * x / (2.0 * l * l)).exp())
                .collect(),
            derivs: vec![0.0; w0.xs.len()],
            weights: w0.weights.clone(),
            v0: cfg.v0(),
        };
        let nrm = g.norm_sq().sqrt();
        g.values.iter_mut().for_each(|v| *v /= nrm);
        assert_relative_eq!(
            quartic_integral(&g),
            1.0 / ((2.0 * std::f64::consts::PI).sqrt() * l),
            max_relative = 1e-8
        );
    }

    #[test]
    fn site_out_of_boundary_is_an_error() {
        let cfg = cfg_er(8.0);
        assert!(matches!(
            build_wannier(&cfg, BoundaryChoice::ThreeHalvesPi, 2),
            Err(Error::SiteOutOfBoundary { .. })
        ));
        assert!(BoundaryChoice::Infinite { n_cells: 5 }.validate().is_err());
    }
}
