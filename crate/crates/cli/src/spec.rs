//! Experiment requests: grid parsing, config files and validation.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use modphi::models::{build_model, Model, ModelParams};

/// Distance computed for each grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DistanceKind {
    Local,
    Kolmogorov,
    Tv,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 3] = [DistanceKind::Local, DistanceKind::Kolmogorov, DistanceKind::Tv];

    pub fn as_str(self) -> &'static str {
        match self {
            DistanceKind::Local => "local",
            DistanceKind::Kolmogorov => "kolmogorov",
            DistanceKind::Tv => "tv",
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistanceKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "local" | "L" => Ok(DistanceKind::Local),
            "kolmogorov" | "K" => Ok(DistanceKind::Kolmogorov),
            "tv" | "TV" => Ok(DistanceKind::Tv),
            other => bail!("unknown distance `{other}` (expected local, kolmogorov or tv)"),
        }
    }
}

/// How the Poisson parameter of the scheme is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaConvention {
    /// The closed-form `λ_n` of the model.
    Theorem,
    /// `λ` matching the mean of the exact law.
    ExactSum,
}

impl LambdaConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            LambdaConvention::Theorem => "theorem",
            LambdaConvention::ExactSum => "exact-sum",
        }
    }
}

impl FromStr for LambdaConvention {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "theorem" => Ok(LambdaConvention::Theorem),
            "exact-sum" => Ok(LambdaConvention::ExactSum),
            other => bail!("unknown lambda convention `{other}` (expected theorem or exact-sum)"),
        }
    }
}

/// Output format of the results table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => bail!("unknown format `{other}` (expected csv or json)"),
        }
    }
}

/// Default truncation tolerance of the scheme measures.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default half-width `ε` of the window used by the norm estimate.
pub const DEFAULT_EPS: f64 = 0.5;

/// A validated experiment request.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub model: String,
    pub params: ModelParams,
    pub n_values: Vec<u64>,
    pub orders: Vec<usize>,
    pub distances: Vec<DistanceKind>,
    pub lambda_convention: LambdaConvention,
    pub tol: f64,
    pub eps: f64,
    pub out: Option<PathBuf>,
    pub plot_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentSpec {
    /// Spec with default orders `{0}`, all distances valid for the model's
    /// dimension and the theorem convention.
    pub fn new(model: &str, params: &[&str], n_values: Vec<u64>) -> Result<Self> {
        let params = ModelParams::parse(params)?;
        let dim = build_model(model, &params)?.dimension();
        let spec = ExperimentSpec {
            model: model.to_string(),
            params,
            n_values,
            orders: vec![0],
            distances: default_distances(dim),
            lambda_convention: LambdaConvention::Theorem,
            tol: DEFAULT_TOL,
            eps: DEFAULT_EPS,
            out: None,
            plot_dir: None,
            format: OutputFormat::Csv,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_orders(mut self, orders: Vec<usize>) -> Self {
        self.orders = orders;
        self
    }

    pub fn with_distances(mut self, distances: Vec<DistanceKind>) -> Self {
        self.distances = distances;
        self
    }

    pub fn with_lambda_convention(mut self, c: LambdaConvention) -> Self {
        self.lambda_convention = c;
        self
    }

    /// Resolves the model and checks every invariant of the request.
    pub fn validate(&self) -> Result<Box<dyn Model>> {
        let model = build_model(&self.model, &self.params)?;
        if self.n_values.is_empty() {
            bail!("no n values requested");
        }
        if self.orders.is_empty() {
            bail!("no scheme orders requested");
        }
        if self.distances.is_empty() {
            bail!("no distances requested");
        }
        for &n in &self.n_values {
            model.check_n(n)?;
        }
        if model.dimension() != 1 && self.distances.contains(&DistanceKind::Kolmogorov) {
            bail!("kolmogorov distance requested for the {}-dimensional model {}", model.dimension(), self.model);
        }
        if !(self.tol > 0.0 && self.tol <= 1e-3) {
            bail!("tol = {} must lie in (0, 1e-3]", self.tol);
        }
        if !(self.eps > 0.0 && self.eps <= std::f64::consts::PI) {
            bail!("eps = {} must lie in (0, π]", self.eps);
        }
        Ok(model)
    }

    /// Parses a line-oriented `key=value` config file. Keys are the long
    /// flag names; `param` may repeat. Blank lines and `#` comments are skipped.
    pub fn from_config(text: &str) -> Result<Self> {
        SpecBuilder::from_config(text)?.build()
    }
}

/// Distances admissible for a model of dimension `dim`.
pub fn default_distances(dim: usize) -> Vec<DistanceKind> {
    if dim == 1 {
        DistanceKind::ALL.to_vec()
    } else {
        vec![DistanceKind::Local, DistanceKind::Tv]
    }
}

/// Accumulates optional fields before validation; shared by the command
/// line and the config file.
#[derive(Debug, Clone, Default)]
pub struct SpecBuilder {
    pub model: Option<String>,
    pub params: Vec<String>,
    pub n: Option<String>,
    pub order: Option<String>,
    pub dist: Option<String>,
    pub lambda_convention: Option<String>,
    pub tol: Option<f64>,
    pub eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub plot_dir: Option<PathBuf>,
    pub format: Option<String>,
}

impl SpecBuilder {
    /// Reads a line-oriented `key=value` config; see [`ExperimentSpec::from_config`].
    pub fn from_config(text: &str) -> Result<Self> {
        let mut b = SpecBuilder::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected key=value, got `{line}`", i + 1))?;
            b.set(k.trim(), v.trim())
                .with_context(|| format!("config line {}", i + 1))?;
        }
        Ok(b)
    }

    /// Sets one config key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.to_string();
        match key {
            "model" => self.model = Some(v),
            "param" => self.params.push(v),
            "n" => self.n = Some(v),
            "order" => self.order = Some(v),
            "dist" => self.dist = Some(v),
            "lambda-convention" => self.lambda_convention = Some(v),
            "tol" => self.tol = Some(value.parse().with_context(|| format!("tol = `{value}`"))?),
            "eps" => self.eps = Some(value.parse().with_context(|| format!("eps = `{value}`"))?),
            "out" => self.out = Some(PathBuf::from(value)),
            "plot-dir" => self.plot_dir = Some(PathBuf::from(value)),
            "format" => self.format = Some(v),
            other => bail!("unknown key `{other}`"),
        }
        Ok(())
    }

    /// Fills every unset field from `other`.
    pub fn or(mut self, other: SpecBuilder) -> Self {
        self.model = self.model.or(other.model);
        if self.params.is_empty() {
            self.params = other.params;
        }
        self.n = self.n.or(other.n);
        self.order = self.order.or(other.order);
        self.dist = self.dist.or(other.dist);
        self.lambda_convention = self.lambda_convention.or(other.lambda_convention);
        self.tol = self.tol.or(other.tol);
        self.eps = self.eps.or(other.eps);
        self.out = self.out.or(other.out);
        self.plot_dir = self.plot_dir.or(other.plot_dir);
        self.format = self.format.or(other.format);
        self
    }

    pub fn build(self) -> Result<ExperimentSpec> {
        let model = self.model.ok_or_else(|| anyhow!("missing model"))?;
        let params = ModelParams::parse(&self.params)?;
        let dim = build_model(&model, &params)?.dimension();
        let n_values = parse_n_values(self.n.as_deref().ok_or_else(|| anyhow!("missing n"))?)?;
        let orders = match &self.order {
            Some(s) => parse_grid(s)?.into_iter().map(|r| r as usize).collect(),
            None => vec![0],
        };
        let distances = match self.dist.as_deref() {
            None | Some("all") => default_distances(dim),
            Some(s) => parse_distances(s)?,
        };
        let spec = ExperimentSpec {
            model,
            params,
            n_values,
            orders,
            distances,
            lambda_convention: match &self.lambda_convention {
                Some(s) => s.parse()?,
                None => LambdaConvention::Theorem,
            },
            tol: self.tol.unwrap_or(DEFAULT_TOL),
            eps: self.eps.unwrap_or(DEFAULT_EPS),
            out: self.out,
            plot_dir: self.plot_dir,
            format: match &self.format {
                Some(s) => s.parse()?,
                None => OutputFormat::Csv,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Parses one non-negative integer, accepting `1e5`-style exact values.
fn parse_integer(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| anyhow!("`{s}` is not an integer"))?;
    if f >= 0.0 && f.fract() == 0.0 && f < 9.0e15 {
        Ok(f as u64)
    } else {
        bail!("`{s}` is not a non-negative integer")
    }
}

/// Parses `a,b,c` or `a:b:step` (inclusive of `b` when reached); the two
/// forms may be mixed across commas. The result is sorted and deduplicated.
pub fn parse_grid(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [one] => out.push(parse_integer(one)?),
            [a, b, step] => {
                let (a, b, step) = (parse_integer(a)?, parse_integer(b)?, parse_integer(step)?);
                if step == 0 {
                    bail!("range `{item}` has zero step");
                }
                if a > b {
                    bail!("range `{item}` is empty");
                }
                out.extend((a..=b).step_by(step as usize));
            }
            [a, b] => {
                let (a, b) = (parse_integer(a)?, parse_integer(b)?);
                if a > b {
                    bail!("range `{item}` is empty");
                }
                out.extend(a..=b);
            }
            _ => bail!("cannot parse grid item `{item}`"),
        }
    }
    if out.is_empty() {
        bail!("empty grid `{s}`");
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `n` grid; see [`parse_grid`].
pub fn parse_n_values(s: &str) -> Result<Vec<u64>> {
    parse_grid(s)
}

/// Comma-separated distance kinds, sorted and deduplicated.
pub fn parse_distances(s: &str) -> Result<Vec<DistanceKind>> {
    let mut v = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<DistanceKind>>>()?;
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("10,100,1000").unwrap(), vec![10, 100, 1000]);
        assert_eq!(parse_grid("1:10:3").unwrap(), vec![1, 4, 7, 10]);
        assert_eq!(parse_grid("1e3, 1e2, 100").unwrap(), vec![100, 1000]);
        assert_eq!(parse_grid("0:3").unwrap(), vec![0, 1, 2, 3]);
        assert!(parse_grid("5:1:1").is_err());
        assert!(parse_grid("1:5:0").is_err());
        assert!(parse_grid("x").is_err());
        assert!(parse_grid("1.5").is_err());
    }

    #[test]
    fn distances() {
        assert_eq!(
            parse_distances("tv,local,tv").unwrap(),
            vec![DistanceKind::Local, DistanceKind::Tv]
        );
        assert!(parse_distances("hellinger").is_err());
    }

    #[test]
    fn config_file() {
        let text = "# ewens run\nmodel = ewens\nparam = theta=1\nn = 10,20\norder = 0:2\ndist = tv\nformat = json\n";
        let s = ExperimentSpec::from_config(text).unwrap();
        assert_eq!(s.model, "ewens");
        assert_eq!(s.params.get_str("theta"), Some("1"));
        assert_eq!(s.n_values, vec![10, 20]);
        assert_eq!(s.orders, vec![0, 1, 2]);
        assert_eq!(s.distances, vec![DistanceKind::Tv]);
        assert_eq!(s.format, OutputFormat::Json);
        assert_eq!(s.tol, DEFAULT_TOL);
        assert!(ExperimentSpec::from_config("model=ewens\nbogus=1\nn=3").is_err());
        assert!(ExperimentSpec::from_config("model=ewens").is_err());
    }

    #[test]
    fn validation() {
        assert!(ExperimentSpec::new("nope", &[], vec![10]).is_err());
        assert!(ExperimentSpec::new("fgraph", &[], vec![41]).is_err());
        let s = ExperimentSpec::new("coloured-perm", &[], vec![10]).unwrap();
        assert_eq!(s.distances, vec![DistanceKind::Local, DistanceKind::Tv]);
        let bad = s.with_distances(vec![DistanceKind::Kolmogorov]);
        assert!(bad.validate().is_err());
    }
}
