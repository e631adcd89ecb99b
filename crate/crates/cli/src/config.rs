//! Run configuration: strict JSON, experiment-specific defaults, dotted-path
//! overrides and a fully resolved echo for the CSV metadata block.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use delta_atom_core::fluxqubit::{FluxParams, Grid2D, SolverOptions, Stencil};
use delta_atom_core::hamiltonians::{delta_c_for_mixing_angle, ModelParams};
use delta_atom_core::numkernel::HilbertSpace;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Fig5,
    Cat,
    Coherent,
    SelectionRules,
    FntCheck,
    Spectrum,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Fig5,
        Experiment::Cat,
        Experiment::Coherent,
        Experiment::SelectionRules,
        Experiment::FntCheck,
        Experiment::Spectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig5 => "fig5",
            Experiment::Cat => "cat",
            Experiment::Coherent => "coherent",
            Experiment::SelectionRules => "selection-rules",
            Experiment::FntCheck => "fnt-check",
            Experiment::Spectrum => "spectrum",
        }
    }

    fn uses_model(self) -> bool {
        matches!(self, Experiment::Fig5 | Experiment::Cat | Experiment::Coherent)
    }

    fn uses_flux(self) -> bool {
        matches!(self, Experiment::SelectionRules | Experiment::Spectrum)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
            format!("unknown experiment `{s}`, expected one of {}", names.join(", "))
        })
    }
}

/// Frequency unit. Model experiments are in units of the `b ↔ c` drive λ,
/// flux experiments in units of `E_J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "lambda")]
    Lambda,
    #[serde(rename = "e_j")]
    JosephsonEnergy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StencilName {
    Second,
    #[default]
    Fourth,
}

impl From<StencilName> for Stencil {
    fn from(s: StencilName) -> Self {
        match s {
            StencilName::Second => Stencil::Second,
            StencilName::Fourth => Stencil::Fourth,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: Option<Experiment>,
    unit: Option<Unit>,
    model: Option<RawModel>,
    flux: Option<RawFlux>,
    #[serde(default)]
    numerics: RawNumerics,
    output_path: Option<String>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    delta_e: Option<f64>,
    delta_c: Option<f64>,
    theta: Option<f64>,
    thetas: Option<Vec<f64>>,
    g: Option<f64>,
    rabi_eb: Option<f64>,
    lambda: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlux {
    e_j: Option<f64>,
    alpha: Option<f64>,
    f: Option<f64>,
    mass_ratio: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNumerics {
    fock_dim: Option<usize>,
    samples: Option<usize>,
    periods: Option<f64>,
    grid: Option<usize>,
    stencil: Option<StencilName>,
    f_min: Option<f64>,
    f_max: Option<f64>,
    f_step: Option<f64>,
    instances: Option<usize>,
    max_dim: Option<usize>,
    ratio_min: Option<f64>,
    ratio_max: Option<f64>,
    solver_tol: Option<f64>,
    max_iter: Option<usize>,
}

/// Atom-field parameters in units of λ. `delta_c` is set for single-point
/// runs, `thetas` for the overlap-exponent sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelConfig {
    pub delta_e: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thetas: Option<Vec<f64>>,
    pub g: f64,
    pub rabi_eb: f64,
    pub lambda: f64,
}

impl ModelConfig {
    /// Parameters of a single-point run.
    pub fn params(&self) -> Result<ModelParams> {
        let delta_c = self.delta_c.ok_or_else(|| CliError::Validation("model.delta_c is required".into()))?;
        Ok(ModelParams::from_detunings(self.delta_e, delta_c, self.g, self.rabi_eb, self.lambda)?)
    }

    /// One parameter set per mixing angle of the sweep.
    pub fn sweep(&self) -> Result<Vec<(f64, ModelParams)>> {
        let thetas = self.thetas.as_deref().unwrap_or_default();
        thetas
            .iter()
            .map(|&theta| {
                let p = ModelParams::from_mixing_angle(self.delta_e, theta, self.g, self.rabi_eb, self.lambda)?;
                Ok((theta, p))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FluxConfig {
    pub e_j: f64,
    pub alpha: f64,
    pub f: f64,
    pub mass_ratio: f64,
}

impl FluxConfig {
    pub fn params(&self) -> Result<FluxParams> {
        Ok(FluxParams::new(self.e_j, self.alpha, self.f, self.mass_ratio)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Numerics {
    /// Minimum Fock dimension; doubled when the coherent amplitudes need it.
    pub fock_dim: usize,
    /// Time samples over the whole window.
    pub samples: usize,
    /// Window length in units of the longest relevant period.
    pub periods: f64,
    /// Points per flux coordinate.
    pub grid: usize,
    pub stencil: StencilName,
    pub f_min: f64,
    pub f_max: f64,
    pub f_step: f64,
    pub instances: usize,
    pub max_dim: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub solver_tol: f64,
    pub max_iter: usize,
}

impl Numerics {
    pub fn solver_options(&self, seed: u64) -> SolverOptions {
        SolverOptions { tol: self.solver_tol, max_iter: self.max_iter, seed, ..SolverOptions::default() }
    }

    pub fn grid2d(&self) -> Result<Grid2D> {
        Ok(Grid2D::square(self.grid)?)
    }

    /// Flux values `f_min, f_min + f_step, …, f_max`, rounded to 12
    /// decimals so that nominal points such as 0.5 are hit exactly.
    pub fn flux_points(&self) -> Vec<f64> {
        let steps = ((self.f_max - self.f_min) / self.f_step + 1e-9).floor() as usize;
        (0..=steps).map(|k| ((self.f_min + k as f64 * self.f_step) * 1e12).round() / 1e12).collect()
    }
}

/// Fully resolved configuration. Serializing it gives a config file that
/// reproduces the run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub unit: Unit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux: Option<FluxConfig>,
    pub numerics: Numerics,
    pub output_path: String,
    pub seed: u64,
}

impl RunConfig {
    pub fn model(&self) -> Result<&ModelConfig> {
        self.model.as_ref().ok_or_else(|| CliError::Validation(format!("{} needs a model section", self.experiment)))
    }

    pub fn flux(&self) -> Result<&FluxConfig> {
        self.flux.as_ref().ok_or_else(|| CliError::Validation(format!("{} needs a flux section", self.experiment)))
    }

    /// Single-line JSON echo.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    load_config_with(path, None, &[])
}

/// Loads `path`, applies `key=value` overrides and resolves defaults. When
/// `experiment` is given it must agree with the file, if the file names one.
pub fn load_config_with(path: &Path, experiment: Option<Experiment>, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text, &path.display().to_string(), experiment, overrides)
}

pub fn parse_config(text: &str, source: &str, experiment: Option<Experiment>, overrides: &[String]) -> Result<RunConfig> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if !value.is_object() {
        return Err(CliError::Validation("top level must be a JSON object".into()));
    }
    for entry in overrides {
        apply_override(&mut value, entry)?;
    }
    let raw: RawConfig = serde_json::from_value(value).map_err(|e| CliError::Validation(e.to_string()))?;
    resolve(raw, experiment)
}

/// Sets a dotted path such as `model.g=0.5`. The value is read as JSON when
/// it parses, otherwise as a string.
pub fn apply_override(root: &mut Value, entry: &str) -> Result<()> {
    let (key, raw) = entry
        .split_once('=')
        .ok_or_else(|| CliError::Validation(format!("override `{entry}` is not of the form key=value")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Validation(format!("override key `{key}` has an empty segment")));
    }
    let mut node = root;
    for part in &parts[..parts.len() - 1] {
        let map = node
            .as_object_mut()
            .ok_or_else(|| CliError::Validation(format!("override `{key}`: `{part}` is not inside an object")))?;
        node = map.entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    let map = node
        .as_object_mut()
        .ok_or_else(|| CliError::Validation(format!("override `{key}`: parent is not an object")))?;
    map.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn resolve(raw: RawConfig, cli_experiment: Option<Experiment>) -> Result<RunConfig> {
    let experiment = match (cli_experiment, raw.experiment) {
        (Some(a), Some(b)) if a != b => {
            return Err(invalid(format!("experiment `{a}` given on the command line but the config says `{b}`")))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(invalid("missing field `experiment`")),
    };
    let unit = raw.unit.ok_or_else(|| invalid("missing field `unit` (\"lambda\" or \"e_j\")"))?;
    match unit {
        Unit::JosephsonEnergy if experiment.uses_model() => {
            return Err(invalid(format!("{experiment} is expressed in units of lambda, not e_j")))
        }
        Unit::Lambda if experiment.uses_flux() => {
            return Err(invalid(format!("{experiment} is expressed in units of e_j, not lambda")))
        }
        _ => {}
    }

    let model = match (experiment.uses_model(), raw.model) {
        (true, m) => Some(resolve_model(experiment, m.unwrap_or_default())?),
        (false, Some(_)) => return Err(invalid(format!("section `model` is not used by {experiment}"))),
        (false, None) => None,
    };
    let flux = match (experiment.uses_flux(), raw.flux) {
        (true, f) => Some(resolve_flux(f.unwrap_or_default())?),
        (false, Some(_)) => return Err(invalid(format!("section `flux` is not used by {experiment}"))),
        (false, None) => None,
    };
    let numerics = resolve_numerics(experiment, raw.numerics)?;
    let output_path = raw.output_path.unwrap_or_else(|| format!("{experiment}.csv"));
    if output_path.is_empty() {
        return Err(invalid("output_path is empty"));
    }
    Ok(RunConfig { experiment, unit, model, flux, numerics, output_path, seed: raw.seed.unwrap_or(2024) })
}

fn resolve_model(experiment: Experiment, m: RawModel) -> Result<ModelConfig> {
    let lambda = m.lambda.unwrap_or(1.0);
    let (delta_e, g, rabi_eb) = match experiment {
        // Δ_min / max coupling = 10 with ξ = ζ = 1/2
        Experiment::Cat => (m.delta_e.unwrap_or(5.0), m.g.unwrap_or(0.4 * 2f64.sqrt()), m.rabi_eb.unwrap_or(0.2 * 2f64.sqrt())),
        _ => (m.delta_e.unwrap_or(3.0), m.g.unwrap_or(0.8), m.rabi_eb.unwrap_or(0.9)),
    };
    let mut cfg = ModelConfig { delta_e, delta_c: None, thetas: None, g, rabi_eb, lambda };
    if experiment == Experiment::Fig5 {
        if m.delta_c.is_some() || m.theta.is_some() {
            return Err(invalid("fig5 sweeps model.thetas; model.delta_c and model.theta are not used"));
        }
        let thetas = m.thetas.unwrap_or_else(|| vec![PI / 2.0, PI / 3.0, PI / 4.0]);
        if thetas.is_empty() {
            return Err(invalid("model.thetas is empty"));
        }
        if g <= 0.0 {
            return Err(invalid("fig5 uses g·t as its time axis and needs model.g > 0"));
        }
        cfg.thetas = Some(thetas);
        cfg.sweep()?;
    } else {
        if m.thetas.is_some() {
            return Err(invalid(format!("model.thetas is only used by fig5, not {experiment}")));
        }
        cfg.delta_c = Some(match (m.delta_c, m.theta) {
            (Some(_), Some(_)) => return Err(invalid("set at most one of model.delta_c and model.theta")),
            (Some(dc), None) => dc,
            (None, Some(theta)) => delta_c_for_mixing_angle(theta, lambda)?,
            (None, None) => 0.0,
        });
        cfg.params()?;
    }
    Ok(cfg)
}

fn resolve_flux(f: RawFlux) -> Result<FluxConfig> {
    let d = FluxParams::default();
    let cfg = FluxConfig {
        e_j: f.e_j.unwrap_or(d.e_j),
        alpha: f.alpha.unwrap_or(d.alpha),
        f: f.f.unwrap_or(d.f),
        mass_ratio: f.mass_ratio.unwrap_or(d.mass_ratio),
    };
    cfg.params()?;
    Ok(cfg)
}

fn resolve_numerics(experiment: Experiment, n: RawNumerics) -> Result<Numerics> {
    let solver = SolverOptions::default();
    let out = Numerics {
        fock_dim: n.fock_dim.unwrap_or(32),
        samples: n.samples.unwrap_or(2000),
        periods: n.periods.unwrap_or(1.0),
        grid: n.grid.unwrap_or(64),
        stencil: n.stencil.unwrap_or_default(),
        f_min: n.f_min.unwrap_or(0.45),
        f_max: n.f_max.unwrap_or(0.55),
        f_step: n.f_step.unwrap_or(0.005),
        instances: n.instances.unwrap_or(100),
        max_dim: n.max_dim.unwrap_or(12),
        ratio_min: n.ratio_min.unwrap_or(0.01),
        ratio_max: n.ratio_max.unwrap_or(0.1),
        solver_tol: n.solver_tol.unwrap_or(solver.tol),
        max_iter: n.max_iter.unwrap_or(solver.max_iter),
    };
    HilbertSpace::new(out.fock_dim).map_err(|e| invalid(format!("numerics.fock_dim: {e}")))?;
    if out.samples < 2 {
        return Err(invalid("numerics.samples must be at least 2"));
    }
    if !(out.periods.is_finite() && out.periods > 0.0) {
        return Err(invalid("numerics.periods must be positive"));
    }
    if experiment.uses_flux() {
        Grid2D::square(out.grid).map_err(|e| invalid(format!("numerics.grid: {e}")))?;
        if !(out.f_step > 0.0 && out.f_min.is_finite() && out.f_max >= out.f_min) {
            return Err(invalid("flux scan needs f_step > 0 and f_min <= f_max"));
        }
        if out.solver_tol.is_nan() || out.solver_tol <= 0.0 || out.max_iter == 0 {
            return Err(invalid("numerics.solver_tol and numerics.max_iter must be positive"));
        }
    }
    if experiment == Experiment::FntCheck {
        if out.instances == 0 || out.max_dim < 2 {
            return Err(invalid("fnt-check needs instances >= 1 and max_dim >= 2"));
        }
        if !(out.ratio_min > 0.0 && out.ratio_max >= out.ratio_min) {
            return Err(invalid("fnt-check needs 0 < ratio_min <= ratio_max"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        parse_config(text, "test.json", None, &[])
    }

    #[test]
    fn minimal_fig5_fills_defaults() {
        let cfg = parse(r#"{"experiment": "fig5", "unit": "lambda"}"#).unwrap();
        let m = cfg.model.unwrap();
        assert_eq!((m.delta_e, m.g, m.rabi_eb, m.lambda), (3.0, 0.8, 0.9, 1.0));
        assert_eq!(m.thetas.unwrap(), vec![PI / 2.0, PI / 3.0, PI / 4.0]);
        assert_eq!(cfg.numerics.fock_dim, 32);
        assert_eq!(cfg.output_path, "fig5.csv");
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse(r#"{"experiment": "cat", "unit": "lambda", "model": {"lambda_typo": 1}}"#).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("lambda_typo"), "{err}");
    }

    #[test]
    fn missing_unit_is_rejected() {
        let err = parse(r#"{"experiment": "cat"}"#).unwrap_err();
        assert!(err.to_string().contains("unit"));
    }

    #[test]
    fn wrong_unit_is_rejected() {
        assert!(parse(r#"{"experiment": "spectrum", "unit": "lambda"}"#).is_err());
        assert!(parse(r#"{"experiment": "spectrum", "unit": "e_j"}"#).is_ok());
    }

    #[test]
    fn fock_dim_one_is_rejected() {
        let err = parse(r#"{"experiment": "coherent", "unit": "lambda", "numerics": {"fock_dim": 1}}"#).unwrap_err();
        assert!(matches!(err, CliError::Validation(_)));
    }

    #[test]
    fn parse_error_reports_position() {
        match parse("{\n  \"experiment\": \"cat\",\n  oops\n}").unwrap_err() {
            CliError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn overrides_set_nested_keys() {
        let overrides = vec!["model.g=0.5".to_string(), "output_path=run.csv".to_string()];
        let cfg = parse_config(r#"{"unit": "lambda"}"#, "t", Some(Experiment::Coherent), &overrides).unwrap();
        assert_eq!(cfg.model.unwrap().g, 0.5);
        assert_eq!(cfg.output_path, "run.csv");
        let bad = parse_config(r#"{"unit": "lambda"}"#, "t", Some(Experiment::Cat), &["model.gg=1".into()]);
        assert!(bad.unwrap_err().to_string().contains("gg"));
    }

    #[test]
    fn conflicting_experiment_is_rejected() {
        assert!(parse_config(r#"{"experiment": "cat", "unit": "lambda"}"#, "t", Some(Experiment::Coherent), &[]).is_err());
    }

    #[test]
    fn theta_resolves_to_delta_c() {
        let cfg = parse(r#"{"experiment": "coherent", "unit": "lambda", "model": {"theta": 1.0471975511965976}}"#).unwrap();
        let dc = cfg.model.unwrap().delta_c.unwrap();
        assert!((dc - 2.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn echo_reproduces_config() {
        for e in Experiment::ALL {
            let unit = if e.uses_flux() { "e_j" } else { "lambda" };
            let cfg = parse(&format!(r#"{{"experiment": "{e}", "unit": "{unit}"}}"#)).unwrap();
            assert_eq!(parse(&cfg.to_json()).unwrap(), cfg);
        }
    }

    #[test]
    fn flux_points_hit_half_flux_exactly() {
        let cfg = parse(r#"{"experiment": "selection-rules", "unit": "e_j"}"#).unwrap();
        let f = cfg.numerics.flux_points();
        assert_eq!(f.len(), 21);
        assert_eq!(f[10], 0.5);
        assert_eq!(*f.last().unwrap(), 0.55);
    }
}
