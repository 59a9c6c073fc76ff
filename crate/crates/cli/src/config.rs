use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use thermowig::{StateFamily, StateSpec, ThermalParams};

#[derive(Debug, Parser)]
#[command(
    name = "thermowig",
    version,
    about = "Wigner functions of finite-temperature bosonic states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a Wigner function on a (q, p) grid.
    Eval(EvalArgs),
    /// Compare the closed form against the Fock-space oracle.
    Verify(VerifyArgs),
    /// Print the negativity volume of a state.
    Negativity(NegativityArgs),
    /// Run the limit and reduction checks.
    Limits(LimitsArgs),
    /// Tabulate W(0) and negativity volume against theta.
    ScanTheta(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    #[value(alias = "thermo-vacuum")]
    Vacuum,
    #[value(alias = "photon-subtracted")]
    Subtracted,
    #[value(alias = "photon-added")]
    Added,
    #[value(alias = "thermo-number")]
    Number,
}

impl From<FamilyArg> for StateFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Vacuum => StateFamily::ThermoVacuum,
            FamilyArg::Subtracted => StateFamily::PhotonSubtracted,
            FamilyArg::Added => StateFamily::PhotonAdded,
            FamilyArg::Number => StateFamily::ThermoNumber,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceArg {
    Closed,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Exactly one of `--theta`, `--nc`, or `--omega` with `--kt`.
#[derive(Debug, Clone, Args, Serialize)]
#[group(skip)]
pub struct ThermalArgs {
    /// Thermal squeeze parameter theta.
    #[arg(long, conflicts_with_all = ["nc", "omega"], required_unless_present_any = ["nc", "omega"])]
    pub theta: Option<f64>,
    /// Mean thermal photon number.
    #[arg(long, conflicts_with = "omega")]
    pub nc: Option<f64>,
    /// Mode frequency (hbar = 1); requires --kt.
    #[arg(long, requires = "kt")]
    pub omega: Option<f64>,
    /// Temperature in energy units.
    #[arg(long, requires = "omega")]
    pub kt: Option<f64>,
}

impl ThermalArgs {
    pub fn resolve(&self) -> thermowig::Result<ThermalParams> {
        match (self.theta, self.nc, self.omega, self.kt) {
            (Some(t), _, _, _) => ThermalParams::from_theta(t),
            (_, Some(nc), _, _) => ThermalParams::from_mean_photon_number(nc),
            (_, _, Some(w), Some(kt)) => ThermalParams::from_temperature(w, kt),
            _ => unreachable!("clap enforces one thermal parameterization"),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Photons subtracted/added, or the number-state excitation.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub thermal: ThermalArgs,
}

impl StateArgs {
    pub fn resolve(&self) -> thermowig::Result<StateSpec> {
        StateSpec::new(self.family.into(), self.n, self.thermal.resolve()?)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    /// Half-width of the square box [-b, b]^2.
    #[arg(long = "box", default_value_t = 4.0)]
    pub half_width: f64,
    /// Nodes per axis.
    #[arg(long, default_value_t = 81, value_parser = clap::value_parser!(u32).range(2..))]
    pub res: u32,
    #[arg(long, value_enum, default_value_t = SourceArg::Closed)]
    pub source: SourceArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    /// Half-width of the comparison box; family default when absent.
    #[arg(long = "box")]
    pub half_width: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub res: Option<u32>,
    #[arg(long, short)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NegativityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    /// Node spacing of the auto-sized integration grid.
    #[arg(long, default_value_t = 0.05)]
    pub spacing: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LimitsArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub theta_max: f64,
    /// Number of theta values, endpoints included.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(2..))]
    pub steps: u32,
    #[arg(long, default_value_t = 0.05)]
    pub spacing: f64,
    #[arg(long, short)]
    pub output: Option<std::path::PathBuf>,
}

impl ScanArgs {
    pub fn thetas(&self) -> Vec<f64> {
        let steps = self.steps as usize;
        (0..steps)
            .map(|i| {
                self.theta_min + (self.theta_max - self.theta_min) * i as f64 / (steps - 1) as f64
            })
            .collect()
    }
}

/// Echo of a run, embedded in JSON outputs so a report can be replayed.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a, T: Serialize> {
    pub command: &'static str,
    #[serde(flatten)]
    pub args: &'a T,
}
