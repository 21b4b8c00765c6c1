use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "coolchan", version, about = "Cooling-channel reduced-order model with a neural wall-temperature surrogate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a labelled dataset from the synthetic oracle
    Generate(GenerateArgs),
    /// Percentile summary and correlation matrix of a dataset
    Stats(StatsArgs),
    /// Train a wall-temperature network
    Train(TrainArgs),
    /// Random hyperparameter search
    Search(SearchArgs),
    /// Evaluate a model on a labelled dataset
    Eval(EvalArgs),
    /// March one channel and write the bulk-flow profile
    March(MarchArgs),
    /// March one channel and predict its wall temperature
    Predict(PredictArgs),
    /// Sweep two model inputs and tabulate the prediction
    Heatmap(HeatmapArgs),
}

#[derive(Debug, Args, serde::Serialize)]
pub struct CommonArgs {
    /// Property table CSV; the built-in pseudo-fluid when omitted
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Specific gas constant [J/(kg K)] for tables that do not declare one
    #[arg(long)]
    pub gas_constant: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 100)]
    pub n_channels: usize,
    #[arg(long, default_value_t = 1)]
    pub channels_per_geometry: usize,
    #[arg(long, default_value_t = 0.3)]
    pub near_critical_fraction: f64,
    /// Standard deviation of Gaussian label noise [K]
    #[arg(long, default_value_t = 0.0)]
    pub label_noise: f64,
    /// Channel length [mm]
    #[arg(long, default_value_t = 250.0)]
    pub length: f64,
    /// Station spacing [mm]
    #[arg(long, default_value_t = 2.0)]
    pub dz: f64,
    #[arg(long, default_value_t = 4)]
    pub substeps: usize,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub data: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Labelled dataset CSV
    #[arg(long)]
    pub data: PathBuf,
    /// Separate validation CSV; otherwise `--data` is split
    #[arg(long)]
    pub val: Option<PathBuf>,
    #[arg(long, default_value_t = 0.9)]
    pub train_fraction: f64,
    /// Comma-separated input columns; the canonical nine when omitted
    #[arg(long)]
    pub features: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
    #[arg(long, default_value_t = 128)]
    pub neurons: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub alpha: f64,
    #[arg(long, default_value_t = 256)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 60)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub learning_rate: f64,
    /// Fit the network to raw rather than standardised wall temperatures
    #[arg(long)]
    pub raw_target: bool,
    /// Dataset whose input distribution the training loss is reweighted to
    #[arg(long)]
    pub importance_target: Option<PathBuf>,
    /// Columns the importance-weight densities are estimated on
    #[arg(long, default_value = "h_b,p_b")]
    pub importance_features: String,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub val: Option<PathBuf>,
    #[arg(long, default_value_t = 0.9)]
    pub train_fraction: f64,
    #[arg(long)]
    pub features: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 20)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1)]
    pub min_layers: usize,
    #[arg(long, default_value_t = 4)]
    pub max_layers: usize,
    #[arg(long, default_value_t = 16)]
    pub min_neurons: usize,
    #[arg(long, default_value_t = 256)]
    pub max_neurons: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub min_alpha: f64,
    #[arg(long, default_value_t = 1e-1)]
    pub max_alpha: f64,
    #[arg(long, default_value_t = 32)]
    pub min_batch: usize,
    #[arg(long, default_value_t = 1024)]
    pub max_batch: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub min_lr: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub max_lr: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    /// Weight errors towards this dataset's input distribution
    #[arg(long)]
    pub importance_target: Option<PathBuf>,
    /// Columns the importance-weight densities are estimated on
    #[arg(long, default_value = "h_b,p_b")]
    pub importance_features: String,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct ChannelArgs {
    /// Cross-section area [mm²]
    #[arg(long, default_value_t = 5.0)]
    pub area: f64,
    /// Height over width
    #[arg(long, default_value_t = 3.5)]
    pub aspect_ratio: f64,
    /// Hot-gas wall thickness [mm]
    #[arg(long, default_value_t = 1.0)]
    pub wall_thickness: f64,
    /// Fin thickness [mm]
    #[arg(long, default_value_t = 1.0)]
    pub fin_thickness: f64,
    /// Channel length [mm]
    #[arg(long, default_value_t = 250.0)]
    pub length: f64,
    /// Sand-grain roughness [µm]
    #[arg(long, default_value_t = 5.0)]
    pub roughness: f64,
    /// Mass flow density [kg/(m² s)]
    #[arg(long, default_value_t = 17500.0)]
    pub mass_flux: f64,
    /// Inlet temperature [K]
    #[arg(long, default_value_t = 150.0)]
    pub t_in: f64,
    /// Inlet static pressure [bar]
    #[arg(long, conflicts_with = "p_out")]
    pub p_in: Option<f64>,
    /// Outlet static pressure [bar]
    #[arg(long)]
    pub p_out: Option<f64>,
    /// Uniform heat flux [MW/m²]
    #[arg(long, default_value_t = 30.0)]
    pub heat_flux: f64,
    /// Piecewise heat flux `z:q,z:q,...` (z in mm, q in MW/m²); overrides --heat-flux
    #[arg(long)]
    pub heat_flux_profile: Option<String>,
    /// Station spacing [mm]
    #[arg(long, default_value_t = 2.0)]
    pub dz: f64,
    #[arg(long, default_value_t = 1)]
    pub substeps: usize,
}

#[derive(Debug, Args)]
pub struct MarchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub model: PathBuf,
    /// Feature on the first axis
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    /// `lo:hi` in the feature's file units
    #[arg(long)]
    pub x_range: String,
    #[arg(long)]
    pub y_range: String,
    #[arg(long, default_value_t = 50)]
    pub resolution: usize,
    /// Values for the other inputs as `name=value,...`; training means otherwise
    #[arg(long)]
    pub fixed: Option<String>,
}
