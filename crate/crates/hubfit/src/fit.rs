//! The two-step optimal-parameter extraction against a reference six-level
//! spectrum: first `(J, eps0, eps1)` on a non-interacting reference, then a
//! one-dimensional search over `U` with the rest held fixed.
//!
//! The measure is `f(P) = sum_i ((E_i - model_i)/E_i)^2` over sorted levels.
//! A four-parameter simultaneous fit is deliberately not offered.

use crate::bhmodel::{build_h_bh, spectrum, SpectrumSource};
use crate::bhparams::{BhParams, Provenance};
use crate::error::{Error, Result};

/// Reference energies below this magnitude make the relative measure
/// meaningless; callers must shift both spectra first.
pub const REFERENCE_ENERGY_FLOOR: f64 = 1e-9;

const SIMPLEX_PARAM_TOL: f64 = 1e-10;
const SIMPLEX_RESIDUAL_TOL: f64 = 1e-16;
const MAX_RESTARTS: usize = 5;
const MAX_ITERATIONS: usize = 4000;

/// Which levels enter the measure. The formula pairs all six sorted levels;
/// restricting to the lowest three isolates the interaction-shifted states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevelSubset {
    #[default]
    All,
    LowestThree,
}

/// Result of a fit stage.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub params: BhParams,
    pub residual: f64,
    pub per_level_rel_err: [f64; 6],
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
}

fn model_spectrum(j: f64, u: f64, eps0: f64, eps1: f64) -> Result<[f64; 6]> {
    let p = BhParams { j: j.abs(), u, eps0, eps1, ..BhParams::bare(0.0, 0.0, 0.0, 0.0) };
    Ok(spectrum(&build_h_bh(&p), SpectrumSource::Bh)?.energies)
}

fn sorted(mut e: [f64; 6]) -> [f64; 6] {
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e
}

/// The measure `f(P)` between a model spectrum and a reference, both sorted
/// ascending (the tie-break at degeneracies).
pub fn residual_f(model: &[f64; 6], reference: &[f64; 6]) -> Result<f64> {
    let m = sorted(*model);
    let r = sorted(*reference);
    let mut acc = 0.0;
    for i in 0..6 {
        if r[i].abs() < REFERENCE_ENERGY_FLOOR {
            return Err(Error::ReferenceEnergyNearZero {
                value: r[i],
                floor: REFERENCE_ENERGY_FLOOR,
            });
        }
        let t = (r[i] - m[i]) / r[i];
        acc += t * t;
    }
    Ok(acc)
}

fn residual_subset(model: &[f64; 6], reference: &[f64; 6], subset: LevelSubset) -> Result<f64> {
    match subset {
        LevelSubset::All => residual_f(model, reference),
        LevelSubset::LowestThree => {
            let m = sorted(*model);
            let r = sorted(*reference);
            let mut acc = 0.0;
            for i in 0..3 {
                if r[i].abs() < REFERENCE_ENERGY_FLOOR {
                    return Err(Error::ReferenceEnergyNearZero {
                        value: r[i],
                        floor: REFERENCE_ENERGY_FLOOR,
                    });
                }
                let t = (r[i] - m[i]) / r[i];
                acc += t * t;
            }
            Ok(acc)
        }
    }
}

fn per_level_errors(model: &[f64; 6], reference: &[f64; 6]) -> [f64; 6] {
    let m = sorted(*model);
    let r = sorted(*reference);
    let mut out = [0.0; 6];
    for i in 0..6 {
        out[i] = (m[i] - r[i]) / r[i];
    }
    out
}

/// Deterministic Nelder-Mead on the three non-interacting parameters.
/// No randomness anywhere: the simplex and every restart derive from the
/// initial guess alone.
fn nelder_mead_3<F>(f: &F, start: [f64; 3], scale: f64) -> Result<([f64; 3], f64, usize)>
where
    F: Fn(&[f64; 3]) -> Result<f64>,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let mut simplex: Vec<[f64; 3]> = vec![start];
    for dim in 0..3 {
        let mut v = start;
        let step = 0.1 * v[dim].abs() + 0.02 * scale;
        v[dim] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(f).collect::<Result<_>>()?;
    let mut evals = simplex.len();

    for _ in 0..MAX_ITERATIONS {
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let best = order[0];
        let worst = order[3];
        let second_worst = order[2];

        let spread = simplex
            .iter()
            .map(|v| {
                (0..3)
                    .map(|d| (v[d] - simplex[best][d]).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        let fspread = values[worst] - values[best];
        if spread < SIMPLEX_PARAM_TOL * (1.0 + scale) && fspread < SIMPLEX_RESIDUAL_TOL {
            break;
        }

        let mut centroid = [0.0; 3];
        for (i, v) in simplex.iter().enumerate() {
            if i != worst {
                for d in 0..3 {
                    centroid[d] += v[d] / 3.0;
                }
            }
        }
        let reflect = |t: f64| {
            let mut p = [0.0; 3];
            for d in 0..3 {
                p[d] = centroid[d] + t * (centroid[d] - simplex[worst][d]);
            }
            p
        };

        let xr = reflect(ALPHA);
        let fr = f(&xr)?;
        evals += 1;
        if fr < values[best] {
            let xe = reflect(GAMMA);
            let fe = f(&xe)?;
            evals += 1;
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = xr;
            values[worst] = fr;
        } else {
            let xc = reflect(-RHO);
            let fc = f(&xc)?;
            evals += 1;
            if fc < values[worst] {
                simplex[worst] = xc;
                values[worst] = fc;
            } else {
                // shrink toward the best vertex
                for i in 0..4 {
                    if i != best {
                        for d in 0..3 {
                            simplex[i][d] =
                                simplex[best][d] + SIGMA * (simplex[i][d] - simplex[best][d]);
                        }
                        values[i] = f(&simplex[i])?;
                        evals += 1;
                    }
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..4 {
        if values[i] < values[best] {
            best = i;
        }
    }
    Ok((simplex[best], values[best], evals))
}

/// Step (i): fit `(J, eps0, eps1)` with `U = 0` against a non-interacting
/// reference, starting from the given guess (normally the integral
/// representation). `J` is reported as `|J|`; the spectrum is even in it.
pub fn fit_noninteracting(reference: &[f64; 6], guess: &BhParams) -> Result<FitReport> {
    fit_noninteracting_subset(reference, guess, LevelSubset::All)
}

pub fn fit_noninteracting_subset(
    reference: &[f64; 6],
    guess: &BhParams,
    subset: LevelSubset,
) -> Result<FitReport> {
    let reference = sorted(*reference);
    let scale = reference.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1e-6);
    let objective = |p: &[f64; 3]| -> Result<f64> {
        let m = model_spectrum(p[0], 0.0, p[1], p[2])?;
        residual_subset(&m, &reference, subset)
    };

    let mut start = [guess.j, guess.eps0, guess.eps1];
    let mut best: Option<([f64; 3], f64)> = None;
    let mut iterations = 0;
    let mut restarts = 0;
    for r in 0..=MAX_RESTARTS {
        let (x, fx, ev) = nelder_mead_3(&objective, start, scale)?;
        iterations += ev;
        let improved = best.as_ref().map_or(true, |(_, fb)| fx < *fb * (1.0 - 1e-12));
        let done = best.as_ref().is_some_and(|(_, fb)| {
            (fb - fx).abs() <= SIMPLEX_RESIDUAL_TOL || fx >= *fb * (1.0 - 1e-12)
        });
        if improved {
            best = Some((x, fx));
        }
        restarts = r;
        if done {
            break;
        }
        // deterministic perturbed restart around the current best
        let (xb, _) = best.as_ref().unwrap();
        let factor = 1.0 + 0.03 / (r as f64 + 1.0);
        start = [xb[0] * factor + 1e-6 * scale, xb[1] / factor, xb[2] * factor];
    }
    let (x, fx) = best.unwrap();
    let model = model_spectrum(x[0], 0.0, x[1], x[2])?;
    let converged = fx.is_finite();
    if !converged {
        return Err(Error::FitNotConverged { restarts, residual: fx });
    }
    Ok(FitReport {
        params: BhParams {
            j: x[0].abs(),
            u: 0.0,
            eps0: x[1],
            eps1: x[2],
            provenance: Provenance::Opt,
            boundary: guess.boundary,
        },
        residual: fx,
        per_level_rel_err: per_level_errors(&model, &reference),
        iterations,
        restarts,
        converged,
    })
}

/// Step (ii): golden-section minimization over `U` alone, everything else
/// fixed to the step-(i) values. `u_guess` seeds the bracket (normally the
/// corrected interaction parameter).
pub fn fit_interaction(reference: &[f64; 6], fixed: &BhParams, u_guess: f64) -> Result<FitReport> {
    fit_interaction_subset(reference, fixed, u_guess, LevelSubset::All)
}

pub fn fit_interaction_subset(
    reference: &[f64; 6],
    fixed: &BhParams,
    u_guess: f64,
    subset: LevelSubset,
) -> Result<FitReport> {
    let reference = sorted(*reference);
    let scale = reference.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1e-6);
    let obj = |u: f64| -> Result<f64> {
        let m = model_spectrum(fixed.j, u, fixed.eps0, fixed.eps1)?;
        residual_subset(&m, &reference, subset)
    };

    // Expand a bracket [lo, hi] around the guess until the minimum is interior.
    let mut step = 0.1 * u_guess.abs() + 0.05 * scale.min(4.0 * fixed.j.abs() + 1.0);
    let mut lo = u_guess - step;
    let mut hi = u_guess + step;
    let mut flo = obj(lo)?;
    let mut fhi = obj(hi)?;
    let mut fmid = obj(u_guess)?;
    let mut mid = u_guess;
    let mut evals = 3;
    for _ in 0..200 {
        if fmid <= flo && fmid <= fhi {
            break;
        }
        if flo < fhi {
            hi = mid;
            fhi = fmid;
            mid = lo;
            fmid = flo;
            step *= 2.0;
            lo -= step;
            flo = obj(lo)?;
        } else {
            lo = mid;
            flo = fmid;
            mid = hi;
            fmid = fhi;
            step *= 2.0;
            hi += step;
            fhi = obj(hi)?;
        }
        evals += 1;
        if evals > 150 {
            return Err(Error::FlatResidual);
        }
    }
    if !(fmid <= flo && fmid <= fhi) {
        return Err(Error::FlatResidual);
    }

    // Golden-section on [lo, hi].
    const PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = hi - PHI * (hi - lo);
    let mut d = lo + PHI * (hi - lo);
    let mut fc = obj(c)?;
    let mut fd = obj(d)?;
    evals += 2;
    while (hi - lo).abs() > 1e-12 * (1.0 + mid.abs()) {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - PHI * (hi - lo);
            fc = obj(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + PHI * (hi - lo);
            fd = obj(d)?;
        }
        evals += 1;
    }
    let u = 0.5 * (lo + hi);
    let fu = obj(u)?;
    let model = model_spectrum(fixed.j, u, fixed.eps0, fixed.eps1)?;
    Ok(FitReport {
        params: BhParams { u, provenance: Provenance::Opt, ..*fixed },
        residual: fu,
        per_level_rel_err: per_level_errors(&model, &reference),
        iterations: evals,
        restarts: 0,
        converged: true,
    })
}

/// Convenience: both stages against a `(non-interacting, interacting)`
/// reference pair.
pub fn two_step_fit(
    reference_free: &[f64; 6],
    reference_int: &[f64; 6],
    guess: &BhParams,
    u_guess: f64,
) -> Result<FitReport> {
    let stage1 = fit_noninteracting(reference_free, guess)?;
    fit_interaction(reference_int, &stage1.params, u_guess)
}
