//! Batch front end: sweep orchestration and deterministic table emission.
//! One function per subcommand; the binary only parses flags and dispatches.
//!
//! Sweep points run on a bounded rayon pool and are reassembled in input
//! order, so reruns with the same config are byte-identical. Per-point
//! failures land in the `error` column and the run continues.

use crate::bands::{band_extents, solve_bloch};
use crate::bhmodel::{
    build_h_bh, build_h_ebh, estimate_resonance_spectrum, rescale_eta, rescale_eta_prime,
    spectrum, SpectrumSource,
};
use crate::bhparams::{BhParams, Provenance, SiteBasis};
use crate::busch::{busch_energy_recip, delta_e_lower_recip, delta_e_upper_recip};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::fit::{fit_interaction_subset, fit_noninteracting_subset, LevelSubset};
use crate::lattice::{DepthUnit, LatticeConfig, PotentialKind, RECOIL_ENERGY};
use crate::oracle1d::{
    chain_guess_from_triplet, single_particle_ed, two_particle_ed, u_bh_1d, Grid1D, OracleOptions,
};
use crate::output::{Cell, OutputFormat, Table};
use crate::wannier::{build_wannier_set, BoundaryChoice, WannierOptions};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

/// Flags shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub jobs: Option<usize>,
    pub only: Option<String>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            out_dir: PathBuf::from("."),
            format: OutputFormat::Csv,
            jobs: None,
            only: None,
        }
    }
}

/// Dispatch a subcommand. Returns the written paths.
pub fn run(subcommand: &str, cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let go = || -> Result<Vec<PathBuf>> {
        match subcommand {
            "bands" => emit_bands(cfg, opts),
            "wannier" => emit_wannier(cfg, opts),
            "params" => emit_params(cfg, opts),
            "busch" => emit_busch(cfg, opts),
            "spectrum" => emit_spectrum(cfg, opts),
            "fit" => emit_fit(cfg, opts),
            "oracle" => emit_oracle(cfg, opts),
            "sweep" => emit_sweep(cfg, opts),
            "figures" => emit_figures(cfg, opts),
            other => Err(Error::Config(format!("unknown subcommand `{other}`"))),
        }
    };
    match opts.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
            pool.install(go)
        }
        None => go(),
    }
}

/// Map grid points to rows in parallel, keeping input order; a failed point
/// becomes a row of empty cells with the error message in the last column.
fn sweep_rows<T: Sync>(
    points: &[T],
    n_cols: usize,
    f: impl Fn(&T) -> Result<Vec<Cell>> + Sync,
) -> Vec<Vec<Cell>> {
    points
        .par_iter()
        .map(|p| match f(p) {
            Ok(mut cells) => {
                cells.push(Cell::Empty);
                cells
            }
            Err(e) => {
                let mut cells = vec![Cell::Empty; n_cols - 1];
                cells.push(Cell::Text(e.to_string()));
                cells
            }
        })
        .collect()
}

fn default_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn v0_grid_er(cfg: &Config) -> Result<Vec<f64>> {
    if cfg.axis == "v0" && cfg.axis_min.is_some() {
        // v0 axis runs in hbar-omega multiples; convert to E_r
        Ok(cfg.axis_grid()?.into_iter().map(|c| 4.0 * c * c).collect())
    } else {
        Ok(default_grid(0.25, 30.0, 60))
    }
}

fn lattice_at_er(cfg: &Config, v0_er: f64) -> Result<LatticeConfig> {
    LatticeConfig::new(v0_er, DepthUnit::Er, cfg.lambda_um, cfg.mass_amu)
}

// ---------------------------------------------------------------- bands ----

fn emit_bands(cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let grid = v0_grid_er(cfg)?;
    let mut table = Table::new(
        "bands",
        "hubfit.bands.v1",
        cfg.manifest_pairs(),
        &["v0_er", "band", "e_min_er", "e_max_er", "error"],
    );
    let points: Vec<(f64, usize)> = grid
        .iter()
        .flat_map(|&v| (0..cfg.n_bands).map(move |b| (v, b)))
        .collect();
    let rows = sweep_rows(&points, 5, |&(v0_er, band)| {
        let lat = lattice_at_er(cfg, v0_er)?;
        let ext = band_extents(&lat, band, cfg.n_k.max(16), cfg.m_cutoff)?;
        Ok(vec![
            Cell::Num(v0_er),
            Cell::Num(band as f64),
            Cell::Num(ext.e_min / RECOIL_ENERGY),
            Cell::Num(ext.e_max / RECOIL_ENERGY),
        ])
    });
    for row in rows {
        table.push_row(row);
    }
    Ok(vec![table.write(&opts.out_dir, "bands", opts.format)?])
}

// -------------------------------------------------------------- wannier ----

fn emit_wannier(cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let lat = cfg.lattice()?;
    let boundary = cfg.boundary_choice();
    let wopts = WannierOptions { points_per_cell: cfg.points_per_cell, cutoff: cfg.m_cutoff };
    let ws = build_wannier_set(&lat, boundary, &[-1, 0, 1], &wopts)?;
    let mut table = Table::new(
        "wannier",
        "hubfit.wannier.v1",
        cfg.manifest_pairs(),
        &["x_over_a", "w_m1", "w_0", "w_p1"],
    );
    for i in 0..ws[0].xs.len() {
        table.push_row(vec![
            Cell::Num(ws[0].xs[i] / crate::lattice::LATTICE_CONSTANT),
            Cell::Num(ws[0].values[i]),
            Cell::Num(ws[1].values[i]),
            Cell::Num(ws[2].values[i]),
        ]);
    }
    Ok(vec![table.write(&opts.out_dir, "wannier", opts.format)?])
}

// --------------------------------------------------------------- params ----

const PARAMS_COLUMNS: [&str; 15] = [
    "v0_er",
    "v0_hw",
    "boundary",
    "j_hw",
    "j2_hw",
    "eps0_hw",
    "eps1_hw",
    "u_bh_hw",
    "u_harm_hw",
    "u_corr_hw",
    "a_factor",
    "u1_hw",
    "u2_hw",
    "validity_ratio",
    "error",
];

fn params_row(cfg: &Config, v0_er: f64) -> Result<Vec<Cell>> {
    let lat = lattice_at_er(cfg, v0_er)?;
    let boundary = cfg.boundary_choice();
    let wopts = WannierOptions { points_per_cell: cfg.points_per_cell, cutoff: cfg.m_cutoff };
    let basis = SiteBasis::with_options(&lat, boundary, &wopts)?;
    let hw = lat.hbar_omega();
    let a_sc = cfg.a_sc * lat.a_ho();
    let ebh = basis.ebh_parameters(a_sc)?;
    let u_harm = basis.u_harm(a_sc, cfg.branch.max(1))?;
    let ucorr = basis.u_corr(a_sc, cfg.branch.max(1))?;
    Ok(vec![
        Cell::Num(lat.v0_er()),
        Cell::Num(lat.v0_hw()),
        Cell::Text(boundary.tag().into()),
        Cell::Num(ebh.base.j / hw),
        Cell::Num(ebh.j2 / hw),
        Cell::Num(ebh.base.eps0 / hw),
        Cell::Num(ebh.base.eps1 / hw),
        Cell::Num(ebh.base.u / hw),
        Cell::Num(u_harm / hw),
        Cell::Num(ucorr.value / hw),
        Cell::Num(basis.correction_factor()),
        Cell::Num(ebh.u1 / hw),
        Cell::Num(ebh.u2 / hw),
        Cell::Num(ucorr.validity_ratio),
    ])
}

fn emit_params(cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let grid = match (cfg.axis.as_str(), cfg.axis_min) {
        ("v0", Some(_)) => cfg.axis_grid()?.into_iter().map(|c| 4.0 * c * c).collect(),
        _ => {
            let lat = cfg.lattice()?;
            vec![lat.v0_er()]
        }
    };
    let mut table =
        Table::new("params", "hubfit.params.v1", cfg.manifest_pairs(), &PARAMS_COLUMNS);
    for row in sweep_rows(&grid, PARAMS_COLUMNS.len(), |&v| params_row(cfg, v)) {
        table.push_row(row);
    }
    Ok(vec![table.write(&opts.out_dir, "params", opts.format)?])
}

// ---------------------------------------------------------------- busch ----

fn busch_grid(cfg: &Config) -> Result<Vec<f64>> {
    if cfg.axis == "inv_a_sc" && cfg.axis_min.is_some() {
        cfg.axis_grid()
    } else {
        Ok(default_grid(-6.0, 6.0, 241))
    }
}

fn emit_busch(cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let grid = busch_grid(cfg)?;
    let mut table = Table::new(
        "busch",
        "hubfit.busch.v1",
        cfg.manifest_pairs(),
        &["aho_over_asc", "eps_branch0", "eps_branch1", "eps_branch2", "error"],
    );
    let rows = sweep_rows(&grid, 5, |&inv| {
        let b0 = if inv > 0.0 {
            Cell::Num(busch_energy_recip(inv, 0)?)
        } else {
            Cell::Empty
        };
        Ok(vec![
            Cell::Num(inv),
            b0,
            Cell::Num(busch_energy_recip(inv, 1)?),
            Cell::Num(busch_energy_recip(inv, 2)?),
        ])
    });
    for row in rows {
        table.push_row(row);
    }
    Ok(vec![table.write(&opts.out_dir, "busch", opts.format)?])
}

// ------------------------------------------------------------- spectrum ----

const SPECTRUM_COLUMNS: [&str; 22] = [
    "axis_value",
    "v0_er",
    "a_sc_aho",
    "e1_hw",
    "e2_hw",
    "e3_hw",
    "e4_hw",
    "e5_hw",
    "e6_hw",
    "eta1",
    "eta2",
    "eta3",
    "eta4",
    "eta5",
    "eta6",
    "etap1",
    "etap2",
    "etap3",
    "etap4",
    "etap5",
    "etap6",
    "provenance",
];

fn spectrum_row(cfg: &Config, axis_value: f64) -> Result<Vec<Cell>> {
    let (lat, a_ratio) = match cfg.axis.as_str() {
        "v0" => (lattice_at_er(cfg, 4.0 * axis_value * axis_value)?, cfg.a_sc),
        "a_sc" => (cfg.lattice()?, axis_value),
        "inv_a_sc" => {
            let lat = cfg.lattice()?;
            if axis_value == 0.0 {
                return Err(Error::Config("inv_a_sc = 0 has no finite scattering length".into()));
            }
            (lat, 1.0 / axis_value)
        }
        other => return Err(Error::Config(format!("spectrum cannot sweep axis `{other}`"))),
    };
    let boundary = cfg.boundary_choice();
    let wopts = WannierOptions { points_per_cell: cfg.points_per_cell, cutoff: cfg.m_cutoff };
    let basis = SiteBasis::with_options(&lat, boundary, &wopts)?;
    let hw = lat.hbar_omega();
    let a_sc = a_ratio * lat.a_ho();
    let provenance = match cfg.u_source.as_str() {
        "bh" => Provenance::Bh,
        "harm" => Provenance::Harm,
        _ => Provenance::Corr,
    };
    let p = basis.bh_params(a_sc, provenance)?;
    let spec = spectrum(&build_h_bh(&p), SpectrumSource::Bh)?;
    let eta = rescale_eta(&spec, &p)?;
    let ucorr = basis.u_corr(a_sc, 1)?.value;
    let etap = rescale_eta_prime(&spec, &p, ucorr)?;
    let mut cells = vec![
        Cell::Num(axis_value),
        Cell::Num(lat.v0_er()),
        Cell::Num(a_ratio),
    ];
    cells.extend(spec.energies.iter().map(|e| Cell::Num(e / hw)));
    cells.extend(eta.iter().map(|&v| Cell::Num(v)));
    cells.extend(etap.iter().map(|&v| Cell::Num(v)));
    cells.push(Cell::Text(p.provenance.tag().into()));
    Ok(cells)
}

fn emit_spectrum(cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let grid = match cfg.axis_min {
        Some(_) => cfg.axis_grid()?,
        None => vec![cfg.lattice()?.v0_hw()],
    };
    let mut cols: Vec<&str> = SPECTRUM_COLUMNS.to_vec();
    cols.push("error");
    let mut table = Table::new("spectrum", "hubfit.spectrum.v1", cfg.manifest_pairs(), &cols);
    for row in sweep_rows(&grid, cols.len(), |&v| spectrum_row(cfg, v)) {
        table.push_row(row);
    }
    Ok(vec![table.write(&opts.out_dir, "spectrum", opts.format)?])
}

// ------------------------------------------------------------------ fit ----

/// Minimal CSV reader for reference spectra: skips `#` comments, needs a
/// header with `e1..e6` and a parameter column (`g1d`, `a_sc`, or `param`).
fn read_reference_csv(path: &Path) -> Result<Vec<(f64, [f64; 6])>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("reference CSV is empty".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let param_idx = cols
        .iter()
        .position(|c| ["g1d", "a_sc", "param"].contains(c))
        .ok_or_else(|| Error::Config("reference CSV needs a g1d/a_sc/param column".into()))?;
    let mut e_idx = Vec::new();
    for k in 1..=6 {
        let name = format!("e{k}");
        let pos = cols
            .iter()
            .position(|c| **c == name || c.starts_with(&format!("{name}_")))
            .ok_or_else(|| Error::Config(format!("reference CSV misses column {name}")))?;
        e_idx.push(pos);
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let param: f64 = cells
            .get(param_idx)
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| Error::Config(format!("bad parameter cell in `{line}`")))?;
        let mut e = [0.0; 6];
        for (slot, &pos) in e.iter_mut().zip(e_idx.iter()) {
            *slot = cells
                .get(pos)
                .and_then(|c| c.trim().parse().ok())
                .ok_or_else(|| Error::Config(format!("bad energy cell in `{line}`")))?;
        }
        rows.push((param, e));
    }
    Ok(rows)
}

fn emit_fit(cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let ref_path = cfg
        .fit_reference
        .as_ref()
        .ok_or_else(|| Error::Config("missing config key `fit_reference`".into()))?;
    let rows = read_reference_csv(Path::new(ref_path))?;
    let free = rows
        .iter()
        .find(|(p, _)| *p == 0.0)
        .ok_or_else(|| Error::Config("reference CSV needs a row at parameter 0 (no interaction)".into()))?
        .1;
    let lat = cfg.lattice()?;
    let boundary = cfg.boundary_choice();
    let subset = if cfg.restrict_lowest3 { LevelSubset::LowestThree } else { LevelSubset::All };

    // step (i): guess from the integral representation
    let basis = SiteBasis::new(&lat, boundary)?;
    let guess = basis.bh_params(0.0, Provenance::Bh)?;
    let stage1 = fit_noninteracting_subset(&free, &guess, subset)?;

    let cols = [
        "param", "j", "eps0", "eps1", "u", "residual", "iterations", "converged", "error",
    ];
    let mut table = Table::new("fit", "hubfit.fit.v1", cfg.manifest_pairs(), &cols);
    table.push_row(vec![
        Cell::Num(0.0),
        Cell::Num(stage1.params.j),
        Cell::Num(stage1.params.eps0),
        Cell::Num(stage1.params.eps1),
        Cell::Num(0.0),
        Cell::Num(stage1.residual),
        Cell::Num(stage1.iterations as f64),
        Cell::Text(stage1.converged.to_string()),
        Cell::Empty,
    ]);
    let interacting: Vec<&(f64, [f64; 6])> = rows.iter().filter(|(p, _)| *p != 0.0).collect();
    let fitted = sweep_rows(&interacting, cols.len(), |&&(g, energies)| {
        let u_seed = u_bh_1d(&lat, boundary, g)?;
        let stage2 = fit_interaction_subset(&energies, &stage1.params, u_seed, subset)?;
        Ok(vec![
            Cell::Num(g),
            Cell::Num(stage2.params.j),
            Cell::Num(stage2.params.eps0),
            Cell::Num(stage2.params.eps1),
            Cell::Num(stage2.params.u),
            Cell::Num(stage2.residual),
            Cell::Num(stage2.iterations as f64),
            Cell::Text(stage2.converged.to_string()),
        ])
    });
    for row in fitted {
        table.push_row(row);
    }
    Ok(vec![table.write(&opts.out_dir, "fit", opts.format)?])
}

// --------------------------------------------------------------- oracle ----

fn emit_oracle(cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let lat = cfg.lattice()?;
    let mut grid = if cfg.axis == "g1d" && cfg.axis_min.is_some() {
        cfg.axis_grid()?
    } else {
        vec![cfg.g1d]
    };
    if !grid.iter().any(|&g| g == 0.0) {
        grid.insert(0, 0.0);
    }
    let g1 = Grid1D::default_for_wall(cfg.oracle_wall, cfg.oracle_n)?;
    let oracle_opts = OracleOptions {
        stencil: cfg.stencil,
        with_convergence_estimate: true,
        ..Default::default()
    };
    let cols = [
        "g1d",
        "e1",
        "e2",
        "e3",
        "e4",
        "e5",
        "e6",
        "n",
        "wall_over_a",
        "potential",
        "conv_estimate",
        "error",
    ];
    let mut table = Table::new("oracle", "hubfit.oracle.v1", cfg.manifest_pairs(), &cols);
    let rows = sweep_rows(&grid, cols.len(), |&g| {
        let spec = two_particle_ed(
            PotentialKind::Taylor22TripleWell,
            &lat,
            &g1,
            g,
            cfg.m_states.clamp(6, 12),
            &oracle_opts,
        )?;
        let mut cells = vec![Cell::Num(g)];
        cells.extend(spec.energies.iter().take(6).map(|&e| Cell::Num(e)));
        cells.push(Cell::Num(g1.n as f64));
        cells.push(Cell::Num(cfg.oracle_wall));
        cells.push(Cell::Text(spec.potential.tag().into()));
        let est = spec.convergence_estimate.iter().fold(0.0f64, |a, &v| a.max(v));
        cells.push(Cell::Num(est));
        Ok(cells)
    });
    for row in rows {
        table.push_row(row);
    }
    Ok(vec![table.write(&opts.out_dir, "oracle", opts.format)?])
}

// ---------------------------------------------------------------- sweep ----

fn emit_sweep(cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    // the generic driver reuses the per-op emitters on the configured axis
    match cfg.sweep_op.as_str() {
        "params" => {
            if cfg.axis != "v0" {
                return Err(Error::Config("sweep_op params needs axis = v0".into()));
            }
            let _ = cfg.axis_grid()?; // validate the grid early
            rename_single(emit_params(cfg, opts)?, &opts.out_dir, "sweep", opts.format)
        }
        "spectrum" => {
            let _ = cfg.axis_grid()?;
            rename_single(emit_spectrum(cfg, opts)?, &opts.out_dir, "sweep", opts.format)
        }
        "busch" => {
            let _ = cfg.axis_grid()?;
            rename_single(emit_busch(cfg, opts)?, &opts.out_dir, "sweep", opts.format)
        }
        "bands" => {
            let _ = cfg.axis_grid()?;
            rename_single(emit_bands(cfg, opts)?, &opts.out_dir, "sweep", opts.format)
        }
        "resonance" => emit_resonance(cfg, opts),
        other => Err(Error::Config(format!("unknown sweep op `{other}`"))),
    }
}

fn rename_single(
    paths: Vec<PathBuf>,
    out_dir: &Path,
    name: &str,
    format: OutputFormat,
) -> Result<Vec<PathBuf>> {
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let target = out_dir.join(format!("{name}.{ext}"));
    std::fs::rename(&paths[0], &target)?;
    Ok(vec![target])
}

fn emit_resonance(cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let lat = cfg.lattice()?;
    let grid = if cfg.axis == "inv_a_sc" && cfg.axis_min.is_some() {
        cfg.axis_grid()?
    } else {
        default_grid(-4.0, 4.0, 161)
    };
    let est = estimate_resonance_spectrum(
        &lat,
        cfg.boundary_choice(),
        &grid,
        cfg.n_k,
        cfg.m_cutoff,
    )?;
    let mut cols: Vec<String> = vec!["aho_over_asc".into()];
    cols.extend(est.curves.iter().map(|c| format!("{}:{}", c.family.tag(), c.label)));
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut table = Table::new("sweep", "hubfit.resonance.v1", cfg.manifest_pairs(), &col_refs);
    let hw = lat.hbar_omega();
    for (i, &inv) in est.inv_a_ratio.iter().enumerate() {
        let mut row = vec![Cell::Num(inv)];
        row.extend(est.curves.iter().map(|c| Cell::Num(c.energies[i] / hw)));
        table.push_row(row);
    }
    Ok(vec![table.write(&opts.out_dir, "sweep", opts.format)?])
}

// -------------------------------------------------------------- figures ----

fn emit_figures(cfg: &Config, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let wanted = |name: &str| opts.only.as_deref().map_or(true, |o| o == name);
    let mut paths = Vec::new();
    if wanted("fig2") {
        paths.push(fig2_bands(cfg, opts)?);
    }
    if wanted("fig3") {
        paths.push(fig3_busch(cfg, opts)?);
    }
    if wanted("fig4") {
        paths.push(fig4_correction(cfg, opts)?);
    }
    if wanted("fig5") {
        paths.push(fig5_onsite(cfg, opts)?);
    }
    if wanted("fig6") {
        paths.push(fig6a_hopping(cfg, opts)?);
        paths.push(fig6b_free_spectrum(cfg, opts)?);
    }
    if wanted("fig7") {
        paths.push(fig7_interaction(cfg, opts)?);
    }
    if wanted("fig10") {
        paths.push(fig10_ebh(cfg, opts)?);
    }
    if paths.is_empty() {
        return Err(Error::Config(
            "--only matched no figure (have fig2, fig3, fig4, fig5, fig6, fig7, fig10)".into(),
        ));
    }
    Ok(paths)
}

fn fig2_bands(cfg: &Config, opts: &RunOptions) -> Result<PathBuf> {
    let grid = default_grid(0.25, 30.0, 60);
    let mut table = Table::new(
        "figures",
        "hubfit.fig2.v1",
        cfg.manifest_pairs(),
        &["v0_er", "band", "e_min_er", "e_max_er", "error"],
    );
    let points: Vec<(f64, usize)> =
        grid.iter().flat_map(|&v| (0..4).map(move |b| (v, b))).collect();
    for row in sweep_rows(&points, 5, |&(v0_er, band)| {
        let lat = lattice_at_er(cfg, v0_er)?;
        let ext = band_extents(&lat, band, 32, cfg.m_cutoff)?;
        Ok(vec![
            Cell::Num(v0_er),
            Cell::Num(band as f64),
            Cell::Num(ext.e_min / RECOIL_ENERGY),
            Cell::Num(ext.e_max / RECOIL_ENERGY),
        ])
    }) {
        table.push_row(row);
    }
    table.write(&opts.out_dir, "fig2", opts.format)
}

fn fig3_busch(cfg: &Config, opts: &RunOptions) -> Result<PathBuf> {
    let grid = default_grid(-6.0, 6.0, 241);
    let mut table = Table::new(
        "figures",
        "hubfit.fig3.v1",
        cfg.manifest_pairs(),
        &["aho_over_asc", "eps_branch0", "eps_branch1", "eps_branch2", "error"],
    );
    for row in sweep_rows(&grid, 5, |&inv| {
        let b0 = if inv > 0.0 { Cell::Num(busch_energy_recip(inv, 0)?) } else { Cell::Empty };
        Ok(vec![
            Cell::Num(inv),
            b0,
            Cell::Num(busch_energy_recip(inv, 1)?),
            Cell::Num(busch_energy_recip(inv, 2)?),
        ])
    }) {
        table.push_row(row);
    }
    table.write(&opts.out_dir, "fig3", opts.format)
}

fn fig4_correction(cfg: &Config, opts: &RunOptions) -> Result<PathBuf> {
    // geometric grid reaching into the shallow divergence
    let n = 30;
    let (lo, hi) = (0.05f64, 6.0f64);
    let grid: Vec<f64> =
        (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect();
    let mut table = Table::new(
        "figures",
        "hubfit.fig4.v1",
        cfg.manifest_pairs(),
        &["v0_hw", "a_three_halves_pi", "a_two_pi", "error"],
    );
    for row in sweep_rows(&grid, 4, |&c| {
        let lat = lattice_at_er(cfg, 4.0 * c * c)?;
        let a32 = SiteBasis::new(&lat, BoundaryChoice::ThreeHalvesPi)?.correction_factor();
        let a2p = SiteBasis::new(&lat, BoundaryChoice::TwoPi)?.correction_factor();
        Ok(vec![Cell::Num(c), Cell::Num(a32), Cell::Num(a2p)])
    }) {
        table.push_row(row);
    }
    table.write(&opts.out_dir, "fig4", opts.format)
}

fn fig5_onsite(cfg: &Config, opts: &RunOptions) -> Result<PathBuf> {
    let grid = default_grid(0.5, 3.0, 26);
    let mut table = Table::new(
        "figures",
        "hubfit.fig5.v1",
        cfg.manifest_pairs(),
        &["v0_hw", "eps0_hw", "eps1_hw", "delta_eps0_hw", "delta_eps1_hw", "error"],
    );
    for row in sweep_rows(&grid, 6, |&c| {
        let lat = lattice_at_er(cfg, 4.0 * c * c)?;
        let basis = SiteBasis::new(&lat, BoundaryChoice::ThreeHalvesPi)?;
        let hw = lat.hbar_omega();
        let e0 = basis.onsite_eps(0)?;
        let e1 = basis.onsite_eps(1)?;
        Ok(vec![
            Cell::Num(c),
            Cell::Num(e0.eps / hw),
            Cell::Num(e1.eps / hw),
            Cell::Num(e0.delta_eps / hw),
            Cell::Num(e1.delta_eps / hw),
        ])
    }) {
        table.push_row(row);
    }
    table.write(&opts.out_dir, "fig5", opts.format)
}

fn fig6a_hopping(cfg: &Config, opts: &RunOptions) -> Result<PathBuf> {
    let grid = default_grid(0.5, 3.0, 26);
    let mut table = Table::new(
        "figures",
        "hubfit.fig6a.v1",
        cfg.manifest_pairs(),
        &["v0_hw", "j_three_halves_pi_hw", "j_two_pi_hw", "j_infinite_hw", "error"],
    );
    for row in sweep_rows(&grid, 5, |&c| {
        let lat = lattice_at_er(cfg, 4.0 * c * c)?;
        let hw = lat.hbar_omega();
        let j32 = SiteBasis::new(&lat, BoundaryChoice::ThreeHalvesPi)?.hopping_j()?;
        let j2p = SiteBasis::new(&lat, BoundaryChoice::TwoPi)?.hopping_j()?;
        let jin =
            SiteBasis::new(&lat, BoundaryChoice::Infinite { n_cells: cfg.n_cells })?.hopping_j()?;
        Ok(vec![
            Cell::Num(c),
            Cell::Num(j32 / hw),
            Cell::Num(j2p / hw),
            Cell::Num(jin / hw),
        ])
    }) {
        table.push_row(row);
    }
    table.write(&opts.out_dir, "fig6a", opts.format)
}

fn fig6b_free_spectrum(cfg: &Config, opts: &RunOptions) -> Result<PathBuf> {
    let grid = default_grid(0.5, 3.0, 26);
    let cols = ["v0_hw", "eta1", "eta2", "eta3", "eta4", "eta5", "eta6", "error"];
    let mut table = Table::new("figures", "hubfit.fig6b.v1", cfg.manifest_pairs(), &cols);
    for row in sweep_rows(&grid, cols.len(), |&c| {
        let lat = lattice_at_er(cfg, 4.0 * c * c)?;
        // onsite energies from the three-cell boundary, hopping from the
        // four-cell one
        let eps_basis = SiteBasis::new(&lat, BoundaryChoice::ThreeHalvesPi)?;
        let j_basis = SiteBasis::new(&lat, BoundaryChoice::TwoPi)?;
        let p = BhParams {
            j: j_basis.hopping_j()?,
            u: 0.0,
            eps0: eps_basis.onsite_eps(0)?.eps,
            eps1: eps_basis.onsite_eps(1)?.eps,
            provenance: Provenance::Bh,
            boundary: BoundaryChoice::TwoPi,
        };
        let spec = spectrum(&build_h_bh(&p), SpectrumSource::Bh)?;
        let eta = rescale_eta(&spec, &p)?;
        let mut cells = vec![Cell::Num(c)];
        cells.extend(eta.iter().map(|&v| Cell::Num(v)));
        Ok(cells)
    }) {
        table.push_row(row);
    }
    table.write(&opts.out_dir, "fig6b", opts.format)
}

fn fig7_interaction(cfg: &Config, opts: &RunOptions) -> Result<PathBuf> {
    let lat = LatticeConfig::new(1.7, DepthUnit::HbarOmega, cfg.lambda_um, cfg.mass_amu)?;
    let basis = SiteBasis::new(&lat, BoundaryChoice::ThreeHalvesPi)?;
    let corr = basis.correction_factor();
    let hw = lat.hbar_omega();
    let slope = basis.u_bh(1.0);
    let grid = default_grid(-4.0, 4.0, 161);
    let cols = [
        "aho_over_asc",
        "u_bh_hw",
        "u_harm_lower_hw",
        "u_harm_upper_hw",
        "u_corr_lower_hw",
        "u_corr_upper_hw",
        "error",
    ];
    let mut table = Table::new("figures", "hubfit.fig7.v1", cfg.manifest_pairs(), &cols);
    let aho = lat.a_ho();
    for row in sweep_rows(&grid, cols.len(), |&inv| {
        let u_bh = if inv == 0.0 {
            Cell::Empty // diverges at the resonance
        } else {
            Cell::Num(slope * (aho / inv) / hw)
        };
        let lo = delta_e_lower_recip(inv)?;
        let up = delta_e_upper_recip(inv)?;
        Ok(vec![
            Cell::Num(inv),
            u_bh,
            Cell::Num(lo),
            Cell::Num(up),
            Cell::Num(corr * lo),
            Cell::Num(corr * up),
        ])
    }) {
        table.push_row(row);
    }
    table.write(&opts.out_dir, "fig7", opts.format)
}

fn fig10_ebh(cfg: &Config, opts: &RunOptions) -> Result<PathBuf> {
    let grid = default_grid(0.6, 2.0, 29);
    let cols = [
        "v0_hw",
        "d_bh_hw",
        "ratio_ebh_no_j2",
        "ratio_ebh",
        "ratio_ebh_corr",
        "error",
    ];
    let mut table = Table::new("figures", "hubfit.fig10.v1", cfg.manifest_pairs(), &cols);
    for row in sweep_rows(&grid, cols.len(), |&c| {
        let lat = lattice_at_er(cfg, 4.0 * c * c)?;
        // onsite energies from the three-cell boundary, hoppings from the
        // four-cell one; physical scattering length of -176 a0
        let a_sc = lat.bohr_to_lattice(-176.0);
        let eps_basis = SiteBasis::new(&lat, BoundaryChoice::ThreeHalvesPi)?;
        let j_basis = SiteBasis::new(&lat, BoundaryChoice::TwoPi)?;
        let ebh_j = j_basis.ebh_parameters(a_sc)?;
        let base = BhParams {
            j: ebh_j.base.j,
            u: j_basis.u_bh(a_sc),
            eps0: eps_basis.onsite_eps(0)?.eps,
            eps1: eps_basis.onsite_eps(1)?.eps,
            provenance: Provenance::Bh,
            boundary: BoundaryChoice::TwoPi,
        };
        let diff = |h: &crate::bhmodel::Matrix6| -> Result<f64> {
            let s = spectrum(h, SpectrumSource::Ebh)?;
            Ok(s.energies[4] - s.energies[1])
        };
        let with_u = base;
        let d_bh_int = diff(&build_h_bh(&with_u))?;
        let ebh_no_j2 =
            crate::bhparams::EbhParams { base: with_u, j2: 0.0, u1: ebh_j.u1, u2: ebh_j.u2 };
        let d1 = diff(&build_h_ebh(&ebh_no_j2))?;
        let ebh_full =
            crate::bhparams::EbhParams { base: with_u, j2: ebh_j.j2, u1: ebh_j.u1, u2: ebh_j.u2 };
        let d2 = diff(&build_h_ebh(&ebh_full))?;
        let mut with_corr = with_u;
        with_corr.u = eps_basis.u_corr(a_sc, 1)?.value;
        with_corr.provenance = Provenance::Corr;
        let ebh_corr =
            crate::bhparams::EbhParams { base: with_corr, j2: ebh_j.j2, u1: ebh_j.u1, u2: ebh_j.u2 };
        let d3 = diff(&build_h_ebh(&ebh_corr))?;
        Ok(vec![
            Cell::Num(c),
            Cell::Num(d_bh_int / lat.hbar_omega()),
            Cell::Num(d1 / d_bh_int),
            Cell::Num(d2 / d_bh_int),
            Cell::Num(d3 / d_bh_int),
        ])
    }) {
        table.push_row(row);
    }
    table.write(&opts.out_dir, "fig10", opts.format)
}

// ------------------------------------------------------------- utilities ---

/// Verify the plane-wave solver is loaded; used by the binary's smoke path.
pub fn self_check() -> Result<()> {
    let lat = LatticeConfig::from_depth_er(8.0)?;
    let sols = solve_bloch(&lat, 0.0, 1, 16)?;
    if !(sols[0].energy.is_finite()) {
        return Err(Error::Eigensolver("self check failed".into()));
    }
    let grid = Grid1D::default_for_wall(2.0, 65)?;
    let sp = single_particle_ed(
        PotentialKind::Taylor22TripleWell,
        &lat,
        &grid,
        crate::oracle1d::Stencil::ThreePoint,
        3,
    )?;
    let _ = chain_guess_from_triplet(&sp.energies);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn tmpdir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("hubfit-driver-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn busch_subcommand_emits_and_is_deterministic() {
        let dir = tmpdir("busch");
        let mut cfg = Config::default();
        cfg.axis = "inv_a_sc".into();
        cfg.axis_min = Some(-2.0);
        cfg.axis_max = Some(2.0);
        cfg.axis_points = 9;
        let opts = RunOptions { out_dir: dir.clone(), ..Default::default() };
        let p1 = run("busch", &cfg, &opts).unwrap();
        let first = std::fs::read(&p1[0]).unwrap();
        let p2 = run("busch", &cfg, &opts).unwrap();
        let second = std::fs::read(&p2[0]).unwrap();
        assert_eq!(first, second, "rerun must be byte-identical");
        let text = String::from_utf8(first).unwrap();
        assert!(text.contains("# schema = hubfit.busch.v1"));
        // a < 0 rows leave the bound-branch column empty
        let data_rows: Vec<&str> =
            text.lines().filter(|l| !l.starts_with('#') && l.contains(',')).skip(1).collect();
        assert_eq!(data_rows.len(), 9);
        assert!(data_rows[0].split(',').nth(1).unwrap().is_empty());
        let _ = std::fs::remove_dir_all(dir);
    }

    #[test]
    fn params_single_point_and_json_mirror() {
        let dir = tmpdir("params");
        let cfg = Config::from_str_content("depth = 1.7\n").unwrap();
        let opts = RunOptions {
            out_dir: dir.clone(),
            format: OutputFormat::Json,
            ..Default::default()
        };
        let paths = run("params", &cfg, &opts).unwrap();
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        assert!(text.contains("\"schema\": \"hubfit.params.v1\""));
        assert!(Path::new(&paths[0]).extension().unwrap() == "json");
        let _ = std::fs::remove_dir_all(dir);
    }

    #[test]
    fn unknown_subcommand_is_config_error() {
        let cfg = Config::default();
        let err = run("nope", &cfg, &RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn figures_only_unmatched_errors() {
        let cfg = Config::default();
        let opts = RunOptions { only: Some("fig99".into()), ..Default::default() };
        assert!(run("figures", &cfg, &opts).is_err());
    }
}
