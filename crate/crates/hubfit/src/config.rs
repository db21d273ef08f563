//! Flat key-value configuration files.
//!
//! Format: one `key = value` per line, `#` comments, unknown keys rejected.
//! Defaults are documented in the README; `depth` is the one key without a
//! default.

use crate::error::{Error, Result};
use crate::lattice::{DepthUnit, LatticeConfig, LI7_MASS_AMU};
use crate::oracle1d::Stencil;
use crate::wannier::BoundaryChoice;
use std::collections::BTreeMap;
use std::path::Path;

/// Parsed configuration with defaults applied.
#[derive(Debug, Clone)]
pub struct Config {
    pub depth: Option<f64>,
    pub depth_unit: DepthUnit,
    pub lambda_um: f64,
    pub mass_amu: f64,
    pub boundary: BoundaryChoice,
    pub n_cells: usize,
    pub points_per_cell: usize,
    pub m_cutoff: usize,
    pub n_k: usize,
    pub n_bands: usize,
    /// Scattering length in units of a_ho.
    pub a_sc: f64,
    pub branch: usize,
    /// Interaction source for spectra: bh | harm | corr.
    pub u_source: String,
    pub oracle_n: usize,
    pub oracle_wall: f64,
    pub stencil: Stencil,
    pub g1d: f64,
    pub m_states: usize,
    pub axis: String,
    pub axis_min: Option<f64>,
    pub axis_max: Option<f64>,
    pub axis_points: usize,
    /// Operation driven by the generic `sweep` subcommand.
    pub sweep_op: String,
    pub fit_reference: Option<String>,
    pub restrict_lowest3: bool,
    /// Raw resolved pairs, for the output manifest.
    resolved: BTreeMap<String, String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            depth: None,
            depth_unit: DepthUnit::HbarOmega,
            lambda_um: 1.0,
            mass_amu: LI7_MASS_AMU,
            boundary: BoundaryChoice::ThreeHalvesPi,
            n_cells: 15,
            points_per_cell: 1024,
            m_cutoff: 32,
            n_k: 64,
            n_bands: 4,
            a_sc: -0.08,
            branch: 1,
            u_source: "corr".into(),
            oracle_n: 513,
            oracle_wall: 2.0,
            stencil: Stencil::ThreePoint,
            g1d: -0.1,
            m_states: 8,
            axis: "v0".into(),
            axis_min: None,
            axis_max: None,
            axis_points: 25,
            sweep_op: "params".into(),
            fit_reference: None,
            restrict_lowest3: false,
            resolved: BTreeMap::new(),
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "depth",
    "depth_unit",
    "lambda_um",
    "mass_amu",
    "boundary",
    "n_cells",
    "points_per_cell",
    "m_cutoff",
    "n_k",
    "n_bands",
    "a_sc",
    "branch",
    "u_source",
    "oracle_n",
    "oracle_wall",
    "stencil",
    "g1d",
    "m_states",
    "axis",
    "axis_min",
    "axis_max",
    "axis_points",
    "sweep_op",
    "fit_reference",
    "restrict_lowest3",
];

fn parse_num(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("key `{key}`: cannot parse `{value}` as a number")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("key `{key}`: cannot parse `{value}` as an integer")))
}

impl Config {
    /// Parse a config file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str_content(&text)
    }

    /// Parse config text.
    pub fn from_str_content(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::Config(format!("unknown config key `{key}`")));
            }
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "depth" => self.depth = Some(parse_num(key, value)?),
            "depth_unit" => self.depth_unit = DepthUnit::parse(value)?,
            "lambda_um" => self.lambda_um = parse_num(key, value)?,
            "mass_amu" => self.mass_amu = parse_num(key, value)?,
            "boundary" => {
                self.boundary = BoundaryChoice::parse(value)?;
            }
            "n_cells" => self.n_cells = parse_usize(key, value)?,
            "points_per_cell" => self.points_per_cell = parse_usize(key, value)?,
            "m_cutoff" => self.m_cutoff = parse_usize(key, value)?,
            "n_k" => self.n_k = parse_usize(key, value)?,
            "n_bands" => self.n_bands = parse_usize(key, value)?,
            "a_sc" => self.a_sc = parse_num(key, value)?,
            "branch" => self.branch = parse_usize(key, value)?,
            "u_source" => {
                if !["bh", "harm", "corr"].contains(&value) {
                    return Err(Error::Config(format!("u_source must be bh|harm|corr, got {value}")));
                }
                self.u_source = value.to_string();
            }
            "oracle_n" => self.oracle_n = parse_usize(key, value)?,
            "oracle_wall" => self.oracle_wall = parse_num(key, value)?,
            "stencil" => self.stencil = Stencil::parse(value)?,
            "g1d" => self.g1d = parse_num(key, value)?,
            "m_states" => self.m_states = parse_usize(key, value)?,
            "axis" => {
                if !["v0", "a_sc", "inv_a_sc", "g1d"].contains(&value) {
                    return Err(Error::Config(format!(
                        "axis must be v0|a_sc|inv_a_sc|g1d, got {value}"
                    )));
                }
                self.axis = value.to_string();
            }
            "axis_min" => self.axis_min = Some(parse_num(key, value)?),
            "axis_max" => self.axis_max = Some(parse_num(key, value)?),
            "axis_points" => self.axis_points = parse_usize(key, value)?,
            "sweep_op" => {
                if !["params", "spectrum", "busch", "bands", "resonance"].contains(&value) {
                    return Err(Error::Config(format!(
                        "sweep_op must be params|spectrum|busch|bands|resonance, got {value}"
                    )));
                }
                self.sweep_op = value.to_string();
            }
            "fit_reference" => self.fit_reference = Some(value.to_string()),
            "restrict_lowest3" => {
                self.restrict_lowest3 = match value {
                    "true" | "1" => true,
                    "false" | "0" => false,
                    other => {
                        return Err(Error::Config(format!(
                            "restrict_lowest3 must be true|false, got {other}"
                        )))
                    }
                }
            }
            _ => unreachable!("key list is checked by the caller"),
        }
        self.resolved.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Boundary with the configured cell count applied to the infinite proxy.
    pub fn boundary_choice(&self) -> BoundaryChoice {
        match self.boundary {
            BoundaryChoice::Infinite { .. } => BoundaryChoice::Infinite { n_cells: self.n_cells },
            b => b,
        }
    }

    /// The lattice configuration; errs naming `depth` when absent.
    pub fn lattice(&self) -> Result<LatticeConfig> {
        let depth = self
            .depth
            .ok_or_else(|| Error::Config("missing config key `depth`".into()))?;
        LatticeConfig::new(depth, self.depth_unit, self.lambda_um, self.mass_amu)
    }

    /// The sweep axis grid; errs naming the missing keys.
    pub fn axis_grid(&self) -> Result<Vec<f64>> {
        let lo = self
            .axis_min
            .ok_or_else(|| Error::Config("missing config key `axis_min`".into()))?;
        let hi = self
            .axis_max
            .ok_or_else(|| Error::Config("missing config key `axis_max`".into()))?;
        if self.axis_points == 0 {
            return Err(Error::Config("axis_points must be positive (empty grid)".into()));
        }
        if self.axis_points == 1 {
            return Ok(vec![lo]);
        }
        if !(hi > lo) {
            return Err(Error::Config(format!("axis grid not monotone: [{lo}, {hi}]")));
        }
        Ok((0..self.axis_points)
            .map(|i| lo + (hi - lo) * i as f64 / (self.axis_points - 1) as f64)
            .collect())
    }

    /// Key-value pairs with defaults filled in, for the output manifest.
    /// Deterministic order.
    pub fn manifest_pairs(&self) -> Vec<(String, String)> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| pairs.push((k.to_string(), v));
        match self.depth {
            Some(d) => push("depth", format!("{d}")),
            None => push("depth", "unset".into()),
        }
        push(
            "depth_unit",
            match self.depth_unit {
                DepthUnit::Er => "er".into(),
                DepthUnit::HbarOmega => "hw".into(),
                DepthUnit::Si => "si".into(),
            },
        );
        push("lambda_um", format!("{}", self.lambda_um));
        push("mass_amu", format!("{}", self.mass_amu));
        push("boundary", self.boundary.tag().into());
        push("n_cells", format!("{}", self.n_cells));
        push("points_per_cell", format!("{}", self.points_per_cell));
        push("m_cutoff", format!("{}", self.m_cutoff));
        push("n_k", format!("{}", self.n_k));
        push("n_bands", format!("{}", self.n_bands));
        push("a_sc", format!("{}", self.a_sc));
        push("branch", format!("{}", self.branch));
        push("u_source", self.u_source.clone());
        push("oracle_n", format!("{}", self.oracle_n));
        push("oracle_wall", format!("{}", self.oracle_wall));
        push(
            "stencil",
            match self.stencil {
                Stencil::ThreePoint => "3".into(),
                Stencil::FivePoint => "5".into(),
            },
        );
        push("g1d", format!("{}", self.g1d));
        push("m_states", format!("{}", self.m_states));
        push("axis", self.axis.clone());
        push("axis_min", self.axis_min.map_or("unset".into(), |v| format!("{v}")));
        push("axis_max", self.axis_max.map_or("unset".into(), |v| format!("{v}")));
        push("axis_points", format!("{}", self.axis_points));
        push("sweep_op", self.sweep_op.clone());
        push("fit_reference", self.fit_reference.clone().unwrap_or_else(|| "unset".into()));
        push("restrict_lowest3", format!("{}", self.restrict_lowest3));
        pairs
    }
}
