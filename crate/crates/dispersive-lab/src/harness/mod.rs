//! Test-function families, the estimate registry, sweep orchestration and
//! report generation backing the `dlab` CLI.

pub mod registry;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::grid::{forward_ft, Field, GridSpec, Space};

/// Flat key=value (or single-object JSON) run configuration.  All physical
/// parameters are explicit; missing required keys are config errors.
#[derive(Clone, Debug, Default)]
pub struct Config {
    map: BTreeMap<String, String>,
}

fn json_scalar(v: &serde_json::Value) -> Result<String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(x) => Ok(x.to_string()),
        serde_json::Value::Bool(b) => Ok(b.to_string()),
        other => Err(LabError::config(format!(
            "unsupported JSON config value: {other}"
        ))),
    }
}

impl Config {
    pub fn new() -> Self {
        Config::default()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return Config::from_json(trimmed);
        }
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                LabError::config(format!("line {}: expected key=value, got `{line}`", lineno + 1))
            })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config { map })
    }

    fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| LabError::config(format!("invalid JSON config: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| LabError::config("JSON config must be a single object"))?;
        let mut map = BTreeMap::new();
        for (k, v) in obj {
            let flat = match v {
                serde_json::Value::Array(items) => {
                    // list of scalars -> comma separated; list of lists
                    // (points) -> semicolon separated
                    let parts: Result<Vec<String>> = items
                        .iter()
                        .map(|item| match item {
                            serde_json::Value::Array(point) => {
                                let comps: Result<Vec<String>> =
                                    point.iter().map(json_scalar).collect();
                                Ok(comps?.join(" "))
                            }
                            other => json_scalar(other),
                        })
                        .collect();
                    let sep = if items.iter().any(|i| i.is_array()) { ";" } else { "," };
                    parts?.join(sep)
                }
                other => json_scalar(other)?,
            };
            map.insert(k.clone(), flat);
        }
        Ok(Config { map })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::config(format!("cannot read config {}: {e}", path.display())))?;
        Config::from_text(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.map.insert(key.to_string(), value.to_string());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn get_str(&self, key: &str) -> Result<&str> {
        self.map
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| LabError::config(format!("missing required config key `{key}`")))
    }

    pub fn opt_str(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        self.get_str(key)?
            .parse()
            .map_err(|_| LabError::config(format!("config key `{key}` is not a number")))
    }

    pub fn get_usize(&self, key: &str) -> Result<usize> {
        self.get_str(key)?
            .parse()
            .map_err(|_| LabError::config(format!("config key `{key}` is not an integer")))
    }

    pub fn get_bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.map.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| LabError::config(format!("config key `{key}` is not a bool"))),
        }
    }

    pub fn get_list_f64(&self, key: &str) -> Result<Vec<f64>> {
        let raw = self.get_str(key)?;
        raw.split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| LabError::config(format!("config key `{key}`: bad number `{p}`")))
            })
            .collect()
    }

    /// Semicolon-separated points with space- or comma-separated components.
    pub fn get_points(&self, key: &str, dim: usize) -> Result<Vec<Vec<f64>>> {
        let raw = self.get_str(key)?;
        let mut points = Vec::new();
        for part in raw.split(';') {
            let comps: Result<Vec<f64>> = part
                .split([' ', ','])
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim().parse().map_err(|_| {
                        LabError::config(format!("config key `{key}`: bad number `{s}`"))
                    })
                })
                .collect();
            let comps = comps?;
            if comps.len() != dim {
                return Err(LabError::config(format!(
                    "config key `{key}`: point `{part}` has {} components, expected {dim}",
                    comps.len()
                )));
            }
            points.push(comps);
        }
        Ok(points)
    }
}

/// Base profile for a test-function family.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyBase {
    Gaussian,
    /// Hermite function H_k(x₁)·e^{−|x|²/2} (physicists' polynomial).
    Hermite(usize),
    /// Random band-limited profile: a seeded sum of modulated Gaussians.
    RandomBandlimited(u64),
}

/// A family is the cartesian product of dilations λ, translations x₀ and
/// modulations ξ₀ applied to the base: λ^{n/2}·base(λ(x−x₀))·e^{iξ₀·x},
/// each member normalized to unit L².
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub base: FamilyBase,
    pub dilations: Vec<f64>,
    pub translations: Vec<Vec<f64>>,
    pub modulations: Vec<Vec<f64>>,
    /// Relative boundary-tail tolerance for both spaces.
    pub tail_tol: f64,
}

impl FamilySpec {
    pub fn gaussian_dilations(dim: usize, dilations: &[f64]) -> Self {
        FamilySpec {
            base: FamilyBase::Gaussian,
            dilations: dilations.to_vec(),
            translations: vec![vec![0.0; dim]],
            modulations: vec![vec![0.0; dim]],
            tail_tol: 1e-12,
        }
    }

    pub fn with_modulation(mut self, xi0: &[f64]) -> Self {
        self.modulations = vec![xi0.to_vec()];
        self
    }

    pub fn with_tail_tol(mut self, tol: f64) -> Self {
        self.tail_tol = tol;
        self
    }

    pub fn from_config(cfg: &Config, dim: usize) -> Result<Self> {
        let base = match cfg.opt_str("family").unwrap_or("gaussian") {
            "gaussian" => FamilyBase::Gaussian,
            other => {
                if let Some(k) = other.strip_prefix("hermite:") {
                    FamilyBase::Hermite(k.parse().map_err(|_| {
                        LabError::config(format!("bad hermite order in family `{other}`"))
                    })?)
                } else if let Some(seed) = other.strip_prefix("random_bandlimited:") {
                    FamilyBase::RandomBandlimited(seed.parse().map_err(|_| {
                        LabError::config(format!("bad seed in family `{other}`"))
                    })?)
                } else {
                    return Err(LabError::config(format!(
                        "unknown family base `{other}` (gaussian, hermite:<k>, random_bandlimited:<seed>)"
                    )));
                }
            }
        };
        let dilations = if cfg.contains("dilations") {
            cfg.get_list_f64("dilations")?
        } else {
            vec![1.0]
        };
        let translations = if cfg.contains("translations") {
            cfg.get_points("translations", dim)?
        } else {
            vec![vec![0.0; dim]]
        };
        let modulations = if cfg.contains("modulations") {
            cfg.get_points("modulations", dim)?
        } else {
            vec![vec![0.0; dim]]
        };
        let tail_tol = if cfg.contains("tail_tol") {
            cfg.get_f64("tail_tol")?
        } else {
            1e-12
        };
        Ok(FamilySpec {
            base,
            dilations,
            translations,
            modulations,
            tail_tol,
        })
    }
}

/// One normalized family member with a human-readable label.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub label: String,
    pub field: Field,
}

fn hermite_poly(k: usize, x: f64) -> f64 {
    let mut h0 = 1.0f64;
    if k == 0 {
        return h0;
    }
    let mut h1 = 2.0 * x;
    for j in 1..k {
        let h2 = 2.0 * x * h1 - 2.0 * j as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

fn base_terms(base: &FamilyBase, dim: usize) -> Vec<(Complex64, Vec<f64>)> {
    match base {
        FamilyBase::RandomBandlimited(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..8)
                .map(|_| {
                    let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    let omega = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
                    (c, omega)
                })
                .collect()
        }
        _ => Vec::new(),
    }
}

fn base_eval(base: &FamilyBase, terms: &[(Complex64, Vec<f64>)], y: &[f64]) -> Complex64 {
    let q: f64 = y.iter().map(|t| t * t).sum();
    let envelope = (-q / 2.0).exp();
    match base {
        FamilyBase::Gaussian => Complex64::new(envelope, 0.0),
        FamilyBase::Hermite(k) => Complex64::new(hermite_poly(*k, y[0]) * envelope, 0.0),
        FamilyBase::RandomBandlimited(_) => {
            let mut sum = Complex64::new(0.0, 0.0);
            for (c, omega) in terms {
                let phase: f64 = omega.iter().zip(y).map(|(w, t)| w * t).sum();
                sum += c * Complex64::from_polar(1.0, phase);
            }
            sum * envelope
        }
    }
}

/// Builds the family on the grid in deterministic order (dilations outer,
/// then translations, then modulations).
pub fn make_family(spec: &FamilySpec, grid: GridSpec) -> Result<Vec<FamilyMember>> {
    let dim = grid.dimension();
    if spec.dilations.is_empty() || spec.translations.is_empty() || spec.modulations.is_empty() {
        return Err(LabError::config("family must have at least one member"));
    }
    for lam in &spec.dilations {
        if !(*lam > 0.0) {
            return Err(LabError::config(format!("dilation {lam} must be positive")));
        }
    }
    let half_nyquist = 0.5 * grid.nyquist();
    let terms = base_terms(&spec.base, dim);
    let mut members = Vec::new();
    for lam in &spec.dilations {
        for x0 in &spec.translations {
            if x0.len() != dim {
                return Err(LabError::config("translation dimension mismatch"));
            }
            for xi0 in &spec.modulations {
                if xi0.len() != dim {
                    return Err(LabError::config("modulation dimension mismatch"));
                }
                if xi0.iter().any(|c| c.abs() > half_nyquist) {
                    return Err(LabError::config(format!(
                        "modulation {xi0:?} exceeds half the Nyquist frequency {half_nyquist:.4} \
                         (aliasing guard); enlarge N or reduce the modulation"
                    )));
                }
                let scale = lam.powf(dim as f64 / 2.0);
                let field = Field::from_fn(grid, Space::Physical, |x| {
                    let y: Vec<f64> = x.iter().zip(x0).map(|(t, c)| lam * (t - c)).collect();
                    let phase: f64 = xi0.iter().zip(x).map(|(c, t)| c * t).sum();
                    base_eval(&spec.base, &terms, &y) * scale * Complex64::from_polar(1.0, phase)
                });
                let mut label = format!("dil={lam}");
                write!(label, ",x0={x0:?},xi0={xi0:?}").unwrap();
                let norm = field.l2_norm();
                if norm == 0.0 {
                    return Err(LabError::config(format!(
                        "family member {label} vanishes on the grid"
                    )));
                }
                let field = field.scaled(Complex64::new(1.0 / norm, 0.0));
                let peak = field
                    .values()
                    .iter()
                    .map(|v| v.norm())
                    .fold(0.0f64, f64::max);
                let tail_phys = field.boundary_max() / peak;
                let fhat = forward_ft(&field)?;
                let peak_hat = fhat
                    .values()
                    .iter()
                    .map(|v| v.norm())
                    .fold(0.0f64, f64::max);
                let tail_freq = fhat.boundary_max() / peak_hat;
                let tail = tail_phys.max(tail_freq);
                if tail > spec.tail_tol {
                    return Err(LabError::config(format!(
                        "family member {label} has boundary tail {tail:.3e} > {:.1e}; \
                         enlarge L (physical tail {tail_phys:.3e}) or N (spectral tail {tail_freq:.3e})",
                        spec.tail_tol
                    )));
                }
                members.push(FamilyMember { label, field });
            }
        }
    }
    Ok(members)
}

/// One row of harness output.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RatioReport {
    pub estimate_id: String,
    pub member_id: String,
    pub m: Option<f64>,
    pub n: Option<usize>,
    pub delta: Option<f64>,
    pub theta: Option<f64>,
    pub kappa: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub grid_l: Option<f64>,
    pub grid_n: Option<usize>,
    pub time_t: Option<f64>,
    pub time_m: Option<usize>,
    pub resolution: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub tail_indicator: Option<f64>,
    pub eta_at_sup: Option<f64>,
    pub refinement_delta: Option<f64>,
}

pub const CSV_HEADER: &str = "estimate_id,member_id,m,n,delta,theta,kappa,alpha,beta,gamma,\
grid_l,grid_n,time_t,time_m,resolution,lhs,rhs,ratio,tail_indicator,eta_at_sup,refinement_delta";

fn csv_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.17e}")).unwrap_or_default()
}

fn csv_usize(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RatioReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.17e},{:.17e},{:.17e},{},{},{}",
            self.estimate_id,
            self.member_id.replace(',', " "),
            csv_f64(self.m),
            csv_usize(self.n),
            csv_f64(self.delta),
            csv_f64(self.theta),
            csv_f64(self.kappa),
            csv_f64(self.alpha),
            csv_f64(self.beta),
            csv_f64(self.gamma),
            csv_f64(self.grid_l),
            csv_usize(self.grid_n),
            csv_f64(self.time_t),
            csv_usize(self.time_m),
            csv_usize(self.resolution),
            self.lhs,
            self.rhs,
            self.ratio,
            csv_f64(self.tail_indicator),
            csv_f64(self.eta_at_sup),
            csv_f64(self.refinement_delta),
        )
    }
}

/// Versioned JSON summary of one estimate run.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub estimate_id: String,
    pub negative_control: bool,
    pub family_sup: f64,
    pub refinement_delta: Option<f64>,
    pub threshold: f64,
    pub measured: f64,
    pub pass: bool,
    pub rows: usize,
    pub notes: Vec<String>,
}

/// Result of running one estimate: rows plus pass/fail summary.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub rows: Vec<RatioReport>,
    pub summary: Summary,
}

impl Outcome {
    pub fn write_csv<W: Write>(&self, w: &mut W, timestamp: &str) -> Result<()> {
        writeln!(w, "# generated {timestamp}")?;
        writeln!(w, "{CSV_HEADER}")?;
        for row in &self.rows {
            writeln!(w, "{}", row.csv_row())?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: &mut W) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.summary)
            .map_err(|e| LabError::numeric(format!("summary serialization failed: {e}")))?;
        writeln!(w, "{text}")?;
        Ok(())
    }
}

/// Runs an estimate from a config file and writes the CSV/JSON artifacts.
/// Returns the process exit code contract: 0 pass, 2 acceptance failure
/// (config errors surface as `Err`, exit 3).
pub fn run_sweep(estimate_id: &str, config_path: &Path) -> Result<(Outcome, i32)> {
    let cfg = Config::from_path(config_path)?;
    run_sweep_config(estimate_id, &cfg)
}

pub fn run_sweep_config(estimate_id: &str, cfg: &Config) -> Result<(Outcome, i32)> {
    let outcome = registry::run_estimate(estimate_id, cfg)?;
    let timestamp = chrono_free_timestamp();
    let csv_path = cfg
        .opt_str("out_csv")
        .map(String::from)
        .unwrap_or_else(|| format!("{estimate_id}.csv"));
    let json_path = cfg
        .opt_str("out_json")
        .map(String::from)
        .unwrap_or_else(|| format!("{estimate_id}.json"));
    let mut csv = std::fs::File::create(&csv_path)?;
    outcome.write_csv(&mut csv, &timestamp)?;
    let mut json = std::fs::File::create(&json_path)?;
    outcome.write_json(&mut json)?;
    let code = if outcome.summary.pass { 0 } else { 2 };
    Ok((outcome, code))
}

/// Seconds since the Unix epoch; avoids a clock-formatting dependency while
/// keeping the header line machine-comparable.
fn chrono_free_timestamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_flat_and_json_agree() {
        let flat = Config::from_text("n=2\nL=12.5\ndilations=1,2,4\nmodulations=2 0;0 0\n").unwrap();
        let json = Config::from_text(
            r#"{"n": 2, "L": 12.5, "dilations": [1, 2, 4], "modulations": [[2, 0], [0, 0]]}"#,
        )
        .unwrap();
        for cfg in [&flat, &json] {
            assert_eq!(cfg.get_usize("n").unwrap(), 2);
            assert_eq!(cfg.get_f64("L").unwrap(), 12.5);
            assert_eq!(cfg.get_list_f64("dilations").unwrap(), vec![1.0, 2.0, 4.0]);
            assert_eq!(
                cfg.get_points("modulations", 2).unwrap(),
                vec![vec![2.0, 0.0], vec![0.0, 0.0]]
            );
        }
        assert!(Config::from_text("garbage line").is_err());
        assert!(flat.get_f64("missing").is_err());
    }

    #[test]
    fn single_gaussian_family() {
        let grid = GridSpec::new(2, 12.0, 64).unwrap();
        let spec = FamilySpec::gaussian_dilations(2, &[1.0]);
        let members = make_family(&spec, grid).unwrap();
        assert_eq!(members.len(), 1);
        assert!((members[0].field.l2_norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn modulation_aliasing_guard() {
        let grid = GridSpec::new(2, 12.0, 64).unwrap();
        // nyquist = pi*64/24 ≈ 8.38; half ≈ 4.19
        let spec = FamilySpec::gaussian_dilations(2, &[1.0]).with_modulation(&[5.0, 0.0]);
        let err = make_family(&spec, grid).unwrap_err();
        assert!(err.to_string().contains("Nyquist"), "{err}");
    }

    #[test]
    fn boundary_tail_guard() {
        let grid = GridSpec::new(2, 3.0, 32).unwrap();
        let spec = FamilySpec::gaussian_dilations(2, &[1.0]);
        let err = make_family(&spec, grid).unwrap_err();
        assert!(err.to_string().contains("boundary tail"), "{err}");
    }

    #[test]
    fn random_bandlimited_deterministic() {
        let grid = GridSpec::new(1, 16.0, 128).unwrap();
        let spec = FamilySpec {
            base: FamilyBase::RandomBandlimited(7),
            dilations: vec![1.0],
            translations: vec![vec![0.0]],
            modulations: vec![vec![0.0]],
            tail_tol: 1e-10,
        };
        let a = make_family(&spec, grid).unwrap();
        let b = make_family(&spec, grid).unwrap();
        for (x, y) in a[0].field.values().iter().zip(b[0].field.values()) {
            assert_eq!(x, y);
        }
        let other = FamilySpec {
            base: FamilyBase::RandomBandlimited(8),
            ..spec
        };
        let c = make_family(&other, grid).unwrap();
        assert!(a[0]
            .field
            .values()
            .iter()
            .zip(c[0].field.values())
            .any(|(x, y)| x != y));
    }

    #[test]
    fn hermite_members_orthogonal_to_gaussian() {
        let grid = GridSpec::new(1, 16.0, 128).unwrap();
        let g = make_family(&FamilySpec::gaussian_dilations(1, &[1.0]), grid).unwrap();
        let h = make_family(
            &FamilySpec {
                base: FamilyBase::Hermite(1),
                dilations: vec![1.0],
                translations: vec![vec![0.0]],
                modulations: vec![vec![0.0]],
                tail_tol: 1e-12,
            },
            grid,
        )
        .unwrap();
        let ip = g[0].field.inner(&h[0].field).unwrap();
        assert!(ip.norm() <= 1e-12, "inner product {ip}");
    }

    #[test]
    fn family_order_deterministic() {
        let grid = GridSpec::new(1, 24.0, 128).unwrap();
        let spec = FamilySpec {
            base: FamilyBase::Gaussian,
            dilations: vec![1.0, 2.0],
            translations: vec![vec![0.0], vec![1.0]],
            modulations: vec![vec![0.0]],
            // dil = 2 has spectral width 2; its tail at this Nyquist is ~1e-4
            tail_tol: 1e-3,
        };
        let members = make_family(&spec, grid).unwrap();
        let labels: Vec<&str> = members.iter().map(|m| m.label.as_str()).collect();
        assert_eq!(members.len(), 4);
        assert!(labels[0].starts_with("dil=1,x0=[0.0]"));
        assert!(labels[3].starts_with("dil=2,x0=[1.0]"));
    }
}
