//! The relative-motion `l = 0` spectrum of two contact-interacting particles
//! in an isotropic harmonic trap: the implicit equation
//!
//! `a_sc/a_ho = 1/2 tan(pi eps/2 + pi/4) Gamma(eps/2 + 1/4) / Gamma(eps/2 + 3/4)`
//!
//! with `eps = E / hbar omega`, solved in both directions with branch
//! bookkeeping by bracket interval.
//!
//! For `eps < 1/2` the tangent zeros and Gamma poles interleave; the
//! reflection formula collapses the right-hand side to
//! `1/2 Gamma(1/4 - eps/2) / Gamma(3/4 - eps/2)`, where both arguments are
//! positive. That form is what keeps the bound branch stable down to
//! `eps ~ -5e5` (deep dimer).

use crate::error::{Error, Result};
use crate::lattice::LatticeConfig;

/// Lanczos approximation of `ln Gamma(x)` for `x > 0` (g = 7, 9 terms),
/// accurate to ~1e-14 relative.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    assert!(x > 0.0, "ln_gamma domain is x > 0, got {x}");
    if x < 0.5 {
        // reflection: ln G(x) = ln(pi / sin(pi x)) - ln G(1 - x)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Right-hand side of the implicit equation: the scattering-length ratio
/// `a_sc/a_ho` that makes `eps` an eigenvalue. Strictly increasing between
/// consecutive poles `eps = 1/2 + 2n`.
pub fn scattering_ratio(eps: f64) -> f64 {
    if eps < 0.5 {
        0.5 * (ln_gamma(0.25 - 0.5 * eps) - ln_gamma(0.75 - 0.5 * eps)).exp()
    } else {
        let z = 0.5 * eps + 0.25;
        let angle = std::f64::consts::PI * z;
        0.5 * angle.tan() * (ln_gamma(z) - ln_gamma(z + 0.5)).exp()
    }
}

/// Reciprocal ratio `a_ho/a_sc` as a function of `eps`; finite at the poles
/// of [`scattering_ratio`] (unitarity), so sweeps over `1/a` can cross the
/// resonance.
pub fn recip_scattering_ratio(eps: f64) -> f64 {
    if eps < 0.5 {
        2.0 * (ln_gamma(0.75 - 0.5 * eps) - ln_gamma(0.25 - 0.5 * eps)).exp()
    } else {
        let z = 0.5 * eps + 0.25;
        let angle = std::f64::consts::PI * z;
        2.0 / angle.tan() * (ln_gamma(z + 0.5) - ln_gamma(z)).exp()
    }
}

/// Direct evaluation of the equation at a given energy: the unique
/// scattering-length ratio consistent with `eps`.
pub fn busch_inverse(eps: f64) -> Result<f64> {
    let angle = std::f64::consts::PI * (0.5 * eps + 0.25);
    if eps >= 0.5 && angle.cos().abs() < 1e-12 {
        return Err(Error::PoleProximity(eps));
    }
    Ok(scattering_ratio(eps))
}

/// Bracket (lo, hi) in `eps` for a branch. Branch 0 is the bound solution
/// `eps < 1/2`; branch `n >= 1` lives between the poles `1/2 + 2(n-1)` and
/// `1/2 + 2n`.
fn branch_bracket(branch: usize, a_ratio: f64) -> (f64, f64) {
    if branch == 0 {
        // dimer asymptote eps ~ -1/(2 a^2) seeds the bracket for small a
        let dimer = -0.5 / (a_ratio * a_ratio);
        (4.0 * dimer - 10.0, 0.5 - 1e-14)
    } else {
        let lo = 0.5 + 2.0 * (branch as f64 - 1.0);
        (lo + 1e-14, lo + 2.0 - 1e-14)
    }
}

/// Bracket-index of the branch containing a given energy.
pub fn branch_of(eps: f64) -> usize {
    if eps < 0.5 {
        0
    } else {
        ((eps - 0.5) / 2.0).floor() as usize + 1
    }
}

/// Solve the implicit equation for `eps` on one branch: bisection inside the
/// pole-delimited bracket (the right-hand side is strictly increasing there),
/// then one guarded Newton polish.
pub fn busch_energy(a_ratio: f64, branch: usize) -> Result<f64> {
    if branch == 0 && a_ratio <= 0.0 {
        return Err(Error::BoundBranchNeedsPositiveLength(a_ratio));
    }
    if !a_ratio.is_finite() {
        return Err(Error::Config(format!("a_sc/a_ho must be finite, got {a_ratio}")));
    }
    let (mut lo, mut hi) = branch_bracket(branch, a_ratio);
    if scattering_ratio(lo) > a_ratio || scattering_ratio(hi) < a_ratio {
        return Err(Error::NoRootInBracket { branch, a_ratio });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval at floating-point resolution
        }
        if scattering_ratio(mid) < a_ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut eps = 0.5 * (lo + hi);
    // one Newton step with a centered numerical derivative
    let h = 1e-7 * (1.0 + eps.abs());
    let (flo, fhi) = (scattering_ratio(eps - h), scattering_ratio(eps + h));
    let slope = (fhi - flo) / (2.0 * h);
    if slope.is_finite() && slope > 0.0 {
        let step = (scattering_ratio(eps) - a_ratio) / slope;
        let polished = eps - step;
        if polished > lo - h && polished < hi + h {
            eps = polished;
        }
    }
    Ok(eps)
}

/// Energy at a given inverse ratio `a_ho/a_sc`, continuous from the
/// attractive side: at unitarity (`inv = 0`) branch `n >= 1` returns the
/// lower bracket edge `1/2 + 2(n-1)`.
pub fn busch_energy_recip(inv_a_ratio: f64, branch: usize) -> Result<f64> {
    if inv_a_ratio == 0.0 {
        if branch == 0 {
            return Err(Error::BoundBranchNeedsPositiveLength(0.0));
        }
        return Ok(0.5 + 2.0 * (branch as f64 - 1.0));
    }
    busch_energy(1.0 / inv_a_ratio, branch)
}

/// Offset to the non-interacting relative ground state:
/// `Delta E_harm^branch = eps - 3/2`, in units of `hbar omega`.
pub fn delta_e_harm(a_ratio: f64, branch: usize) -> Result<f64> {
    Ok(busch_energy(a_ratio, branch)? - 1.5)
}

/// `Delta E` of the branch pair that stays continuous through the resonance
/// on the attractive/bound side: branch 0 for `a > 0`, branch 1 for `a <= 0`
/// (parameterized by `a_ho/a_sc`). Used for resonance sweeps.
pub fn delta_e_lower_recip(inv_a_ratio: f64) -> Result<f64> {
    if inv_a_ratio > 0.0 {
        delta_e_harm(1.0 / inv_a_ratio, 0)
    } else if inv_a_ratio == 0.0 {
        Ok(-1.0)
    } else {
        delta_e_harm(1.0 / inv_a_ratio, 1)
    }
}

/// Continuation of the repulsive branch through the resonance: branch 1 for
/// `a > 0`, branch 2 for `a <= 0`.
pub fn delta_e_upper_recip(inv_a_ratio: f64) -> Result<f64> {
    if inv_a_ratio > 0.0 {
        delta_e_harm(1.0 / inv_a_ratio, 1)
    } else if inv_a_ratio == 0.0 {
        Ok(1.0)
    } else {
        delta_e_harm(1.0 / inv_a_ratio, 2)
    }
}

/// Relative error of the harmonic interaction energy when the bare
/// scattering length is used instead of the optimal one (branch 1):
/// `(U_harm(a_sc) - U_harm(a_opt)) / U_harm(a_opt)`.
pub fn delta_u(a_sc: f64, a_opt: f64, cfg: &LatticeConfig) -> Result<f64> {
    let aho = cfg.a_ho();
    let u_sc = delta_e_harm(a_sc / aho, 1)?;
    let u_opt = delta_e_harm(a_opt / aho, 1)?;
    if u_opt == 0.0 {
        return Err(Error::ZeroReferenceInteraction);
    }
    Ok((u_sc - u_opt) / u_opt)
}
