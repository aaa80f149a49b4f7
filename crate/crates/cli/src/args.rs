use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use opuc::algebra::Precision;
use opuc::weights::{Family, WeightSpec};
use opuc::Error;

#[derive(Parser, Debug)]
#[command(name = "opuc", version, about = "Orthogonal polynomials on the unit circle for semi-classical weights")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Trigonometric moments of a weight as a JSON table.
    Moments(MomentsArgs),
    /// Verblunsky coefficients by one or more routes.
    Verblunsky(VerblunskyArgs),
    /// Residual checks; exits 1 if any fails.
    Verify(VerifyArgs),
    /// Positivity system for given roots of A.
    Classify(ClassifyArgs),
    /// SVG of Verblunsky coefficients or of a residual table.
    Plot(PlotArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Moments,
    Closed,
    Difference,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Pearson,
    Structure,
    Difference,
    Classify,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct WeightArgs {
    /// lebesgue, expsine, bessel, cjacobi, jacobi, genjacobi, sriranga, rotcos, halfplane
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Complex, as `a+bi`.
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Constant coefficient of B for the half-plane family, instead of `--u`.
    #[arg(long, allow_hyphen_values = true)]
    pub b0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Skip normalization to unit mass.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// `double` or `extended:<digits>`.
    #[arg(long, default_value = "double")]
    pub precision: String,
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Moment table exported by `moments`, used instead of quadrature.
    #[arg(long)]
    pub moments: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct VerblunskyArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value = "moments")]
    pub method: Method,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Roots of A for the classify suite: `deg0`, `r` or `r1,r2`.
    #[arg(long, allow_hyphen_values = true)]
    pub roots: Option<String>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// `deg0`, `r` or `r1,r2`.
    #[arg(long, allow_hyphen_values = true)]
    pub roots: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value = "moments")]
    pub method: Method,
    /// CSV from `verblunsky` or a residual table `n,residual`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

pub fn complex(name: &str, s: &str) -> Result<Complex64, Error> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    cleaned.parse::<Complex64>().map_err(|_| Error::Parse(format!("--{name}: '{s}' is not a complex number a+bi")))
}

impl WeightArgs {
    pub fn spec(&self) -> Result<WeightSpec, Error> {
        let name = self.weight.as_deref().ok_or_else(|| Error::Parse("--weight is required".into()))?;
        let real = |v: Option<f64>, n: &str| v.ok_or_else(|| Error::Parse(format!("--{n} is required for {name}")));
        let cx = |v: &Option<String>, n: &str| match v {
            Some(s) => complex(n, s),
            None => Err(Error::Parse(format!("--{n} is required for {name}"))),
        };
        let spec = match name {
            "lebesgue" => WeightSpec::new(Family::Lebesgue)?,
            "expsine" => WeightSpec::exp_sine(cx(&self.u, "u")?)?,
            "bessel" => WeightSpec::bessel(real(self.t, "t")?)?,
            "cjacobi" => WeightSpec::circular_jacobi(real(self.lambda, "lambda")?)?,
            "jacobi" => WeightSpec::jacobi(real(self.lambda, "lambda")?, real(self.beta, "beta")?)?,
            "genjacobi" => WeightSpec::generalized_jacobi(
                real(self.lambda, "lambda")?,
                real(self.beta, "beta")?,
                real(self.eta, "eta")?,
            )?,
            "sriranga" => WeightSpec::sri_ranga(cx(&self.b, "b")?)?,
            "rotcos" => WeightSpec::rotated_cos(cx(&self.c, "c")?)?,
            "halfplane" => {
                let r = cx(&self.r, "r")?;
                match (&self.u, &self.b0) {
                    (Some(_), None) => WeightSpec::half_plane_pole(cx(&self.u, "u")?, r)?,
                    (None, Some(_)) => WeightSpec::half_plane_pole_b0(cx(&self.b0, "b0")?, r)?,
                    _ => return Err(Error::Parse("halfplane takes exactly one of --u and --b0".into())),
                }
            }
            other => return Err(Error::Parse(format!("unknown weight '{other}'"))),
        };
        Ok(spec.with_normalized(!self.raw))
    }
}

impl RunArgs {
    pub fn precision(&self) -> Result<Precision, Error> {
        Precision::parse(&self.precision)
    }
}
