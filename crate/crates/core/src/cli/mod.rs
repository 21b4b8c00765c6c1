//! The `coolchan` command-line tool.
//!
//! Every subcommand writes its outputs plus a `manifest.json` into
//! `--out-dir`. Outputs are only written once the whole computation has
//! succeeded, each through a temporary file and a rename.

mod args;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

pub use args::{Cli, Command};
use args::*;

use crate::channel::{march, march_csv, predict_channel, ChannelGeometry, HeatFluxProfile, MarchConfig, PressureBoundary};
use crate::datapipe::{
    correlation_csv, correlation_matrix, dataset_importance_weights, evaluate_weighted, heatmap_grid, load_dataset,
    random_search, search_csv, split, stats_summary, summary_csv, Dataset, FeatureSpec, Field, LabelMode, SearchSpace,
};
use crate::error::{Error, Result};
use crate::fluidprops::{load_table_with_gas_constant, make_pseudo_fluid, PropertyTable};
use crate::io_util::{atomic_write, sha256_hex};
use crate::neural::{load_model, model_to_string, train, HyperParams};
use crate::oracle::{generate_channels, oracle_manifest, GeneratorConfig};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Outputs of one subcommand, held in memory until everything succeeded.
struct Run {
    subcommand: &'static str,
    config: Value,
    seeds: Value,
    inputs: Vec<PathBuf>,
    outputs: Vec<(String, Vec<u8>)>,
    timings: Vec<(&'static str, f64)>,
    extra: Value,
}

impl Run {
    fn new(subcommand: &'static str, config: Value, seeds: Value) -> Self {
        Run {
            subcommand,
            config,
            seeds,
            inputs: Vec::new(),
            outputs: Vec::new(),
            timings: Vec::new(),
            extra: Value::Null,
        }
    }

    fn output(&mut self, name: &str, bytes: impl Into<Vec<u8>>) {
        self.outputs.push((name.to_string(), bytes.into()));
    }

    fn finish(self, out_dir: &Path, argv: &[String]) -> Result<()> {
        std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        let mut inputs = Vec::new();
        for p in &self.inputs {
            let bytes = std::fs::read(p).map_err(|e| Error::io(p, e))?;
            inputs.push(json!({"path": p.display().to_string(), "sha256": sha256_hex(&bytes)}));
        }
        let outputs: Vec<Value> = self
            .outputs
            .iter()
            .map(|(name, bytes)| json!({"path": out_dir.join(name).display().to_string(), "sha256": sha256_hex(bytes)}))
            .collect();
        let timings: serde_json::Map<String, Value> =
            self.timings.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        let manifest = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "argv": argv,
            "config": self.config,
            "seeds": self.seeds,
            "inputs": inputs,
            "outputs": outputs,
            "timings_s": timings,
            "details": self.extra,
        });
        for (name, bytes) in &self.outputs {
            atomic_write(&out_dir.join(name), bytes)?;
        }
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest is valid JSON");
        text.push('\n');
        atomic_write(&out_dir.join(MANIFEST_FILE), text.as_bytes())
    }
}

fn property_table(common: &CommonArgs) -> Result<PropertyTable> {
    match &common.table {
        Some(p) => load_table_with_gas_constant(p, common.gas_constant),
        None => Ok(make_pseudo_fluid()),
    }
}

fn table_config(common: &CommonArgs) -> Value {
    json!({
        "table": common.table.as_ref().map_or("builtin:pseudo-fluid".to_string(), |p| p.display().to_string()),
        "gas_constant": common.gas_constant,
    })
}

fn track_table(run: &mut Run, common: &CommonArgs) {
    if let Some(p) = &common.table {
        run.inputs.push(p.clone());
    }
}

fn parse_features(list: &Option<String>) -> Result<FeatureSpec> {
    match list {
        None => Ok(FeatureSpec::canonical()),
        Some(s) => FeatureSpec::new(s.split(',').map(|f| f.trim().to_string()).collect()),
    }
}

fn cmd_generate(common: &CommonArgs, a: &GenerateArgs) -> Result<Run> {
    let table = property_table(common)?;
    let cfg = GeneratorConfig {
        n_channels: a.n_channels,
        channels_per_geometry: a.channels_per_geometry,
        near_critical_fraction: a.near_critical_fraction,
        label_noise_std: a.label_noise,
        length_mm: a.length,
        dz: a.dz,
        substeps: a.substeps,
        rng_seed: common.seed,
        ..Default::default()
    };
    let t0 = Instant::now();
    let g = generate_channels(&table, &cfg)?;
    let mut run = Run::new(
        "generate",
        json!({"table": table_config(common), "generator": oracle_manifest(&cfg)}),
        json!({"rng_seed": common.seed}),
    );
    track_table(&mut run, common);
    run.timings.push(("generate", t0.elapsed().as_secs_f64()));
    for s in &g.skipped {
        eprintln!("warning: channel {} skipped: {}", s.index, s.reason);
    }
    run.extra = json!({
        "rows": g.dataset.len(),
        "channels": g.channels.len(),
        "skipped": g.skipped.iter().map(|s| json!({"index": s.index, "reason": s.reason})).collect::<Vec<_>>(),
    });
    println!(
        "generated {} rows from {} channels ({} skipped)",
        g.dataset.len(),
        g.channels.len(),
        g.skipped.len()
    );
    run.output("dataset.csv", g.dataset.to_csv());
    Ok(run)
}

fn cmd_stats(common: &CommonArgs, a: &StatsArgs) -> Result<Run> {
    let ds = load_dataset(&a.data, LabelMode::Inference)?;
    let summary = stats_summary(&ds)?;
    let mut columns: Vec<Field> = Field::INPUTS.to_vec();
    if ds.is_labelled() {
        columns.push(Field::Tw);
    }
    // constant columns cannot be correlated
    columns.retain(|f| {
        let c = ds.column(*f).unwrap_or(&[]);
        c.iter().any(|v| *v != c[0])
    });
    let corr = correlation_matrix(&ds, &columns)?;
    let mut run = Run::new("stats", json!({"data": a.data}), json!({"rng_seed": common.seed}));
    run.inputs.push(a.data.clone());
    if let Some(tw) = columns.iter().position(|f| *f == Field::Tw) {
        for (i, f) in columns.iter().enumerate() {
            if i != tw {
                println!("corr({}, T_w) = {:+.3}", f.name(), corr[i][tw]);
            }
        }
    }
    run.output("summary.csv", summary_csv(&summary));
    run.output("correlation.csv", correlation_csv(&columns, &corr));
    Ok(run)
}

fn hyperparams(common: &CommonArgs, a: &TrainArgs) -> HyperParams {
    HyperParams {
        n_hidden_layers: a.layers,
        neurons_per_layer: a.neurons,
        alpha_l2: a.alpha,
        minibatch_size: a.batch_size,
        epochs: a.epochs,
        learning_rate: a.learning_rate,
        rng_seed: common.seed,
        standardize_target: !a.raw_target,
        ..Default::default()
    }
}

fn train_val(common: &CommonArgs, data: &Path, val: &Option<PathBuf>, fraction: f64, run: &mut Run) -> Result<(Dataset, Dataset)> {
    let ds = load_dataset(data, LabelMode::Training)?;
    run.inputs.push(data.to_path_buf());
    match val {
        Some(v) => {
            run.inputs.push(v.clone());
            Ok((ds, load_dataset(v, LabelMode::Training)?))
        }
        None => split(&ds, fraction, common.seed),
    }
}

fn cmd_train(common: &CommonArgs, a: &TrainArgs) -> Result<Run> {
    let hp = hyperparams(common, a);
    hp.validate()?;
    let spec = parse_features(&a.features)?;
    let mut run = Run::new(
        "train",
        json!({"hyperparams": hp, "features": spec.names(), "train_fraction": a.train_fraction,
               "importance_target": a.importance_target, "importance_features": a.importance_features}),
        json!({"rng_seed": common.seed, "split_seed": common.seed}),
    );
    let (tr, va) = train_val(common, &a.data, &a.val, a.train_fraction, &mut run)?;
    let weights = match &a.importance_target {
        Some(p) => {
            run.inputs.push(p.clone());
            let target = load_dataset(p, LabelMode::Inference)?;
            let on = parse_features(&Some(a.importance_features.clone()))?;
            Some(dataset_importance_weights(&tr, &target, &on, None)?)
        }
        None => None,
    };
    if hp.epochs == 0 {
        eprintln!("warning: --epochs 0 saves the initialised network without training");
    }
    let t0 = Instant::now();
    let trained = train(&tr, &va, &spec, &hp, weights.as_deref())?;
    run.timings.push(("train", t0.elapsed().as_secs_f64()));
    if let Some(last) = trained.report.epochs.last() {
        println!(
            "epoch {}: validation MAE {:.2} K (std {:.2} K)",
            last.epoch, last.val_mae, last.val_std
        );
    }
    run.extra = json!({
        "train_rows": tr.len(),
        "val_rows": va.len(),
        "weights_checksum": trained.report.weights_checksum,
        "epoch_seconds": trained.report.epochs.iter().map(|e| e.seconds).collect::<Vec<_>>(),
    });
    run.output("model.json", model_to_string(&trained.model, &trained.scaler)?);
    run.output("history.csv", trained.report.to_csv());
    Ok(run)
}

fn cmd_search(common: &CommonArgs, a: &SearchArgs) -> Result<Run> {
    let space = SearchSpace {
        hidden_layers: (a.min_layers, a.max_layers),
        neurons: (a.min_neurons, a.max_neurons),
        alpha_l2: (a.min_alpha, a.max_alpha),
        minibatch: (a.min_batch, a.max_batch),
        learning_rate: (a.min_lr, a.max_lr),
        epochs: a.epochs,
    };
    let base = HyperParams {
        rng_seed: common.seed,
        ..Default::default()
    };
    let spec = parse_features(&a.features)?;
    let mut run = Run::new(
        "search",
        json!({"space": space, "trials": a.trials, "workers": a.workers, "features": spec.names(),
               "train_fraction": a.train_fraction}),
        json!({"search_seed": common.seed, "train_seed": base.rng_seed, "split_seed": common.seed}),
    );
    let (tr, va) = train_val(common, &a.data, &a.val, a.train_fraction, &mut run)?;
    let t0 = Instant::now();
    let trials = random_search(&space, &base, a.trials, &tr, &va, &spec, common.seed, a.workers)?;
    run.timings.push(("search", t0.elapsed().as_secs_f64()));
    if let Some(best) = trials.first() {
        println!(
            "best trial {}: {} x {} neurons, alpha {:.3e}, batch {}, lr {:.3e}, validation MAE {:.2} K",
            best.index,
            best.hp.n_hidden_layers,
            best.hp.neurons_per_layer,
            best.hp.alpha_l2,
            best.hp.minibatch_size,
            best.hp.learning_rate,
            best.val_mae
        );
    }
    run.output("search.csv", search_csv(&trials));
    Ok(run)
}

fn cmd_eval(common: &CommonArgs, a: &EvalArgs) -> Result<Run> {
    let (model, scaler) = load_model(&a.model)?;
    let ds = load_dataset(&a.data, LabelMode::Training)?;
    let mut run = Run::new(
        "eval",
        json!({"model": a.model, "data": a.data, "importance_target": a.importance_target,
               "importance_features": a.importance_features}),
        json!({"rng_seed": common.seed}),
    );
    run.inputs.extend([a.model.clone(), a.data.clone()]);
    let weights = match &a.importance_target {
        Some(p) => {
            run.inputs.push(p.clone());
            let target = load_dataset(p, LabelMode::Inference)?;
            let on = parse_features(&Some(a.importance_features.clone()))?;
            Some(dataset_importance_weights(&ds, &target, &on, None)?)
        }
        None => None,
    };
    let ev = evaluate_weighted(&model, &scaler, &ds, weights.as_deref())?;
    println!("MAE {:.2} K (std {:.2} K), MAPE {:.2} %, n = {}", ev.mae, ev.std, ev.mape, ev.n);
    let report = json!({"n": ev.n, "mae[K]": ev.mae, "std[K]": ev.std, "mape[%]": ev.mape,
                        "weighted": weights.is_some()});
    run.output("eval.json", format!("{}\n", serde_json::to_string_pretty(&report).expect("valid JSON")));
    Ok(run)
}

fn channel_setup(a: &ChannelArgs) -> Result<(ChannelGeometry, MarchConfig)> {
    let geom = ChannelGeometry::from_area(a.area, a.aspect_ratio, a.wall_thickness, a.length, a.roughness)?
        .with_fin_thickness(a.fin_thickness)?;
    for w in geom.envelope_warnings() {
        eprintln!("warning: {w}");
    }
    let pressure = match (a.p_in, a.p_out) {
        (Some(p), None) => PressureBoundary::Inlet(p * 1e5),
        (None, Some(p)) => PressureBoundary::Outlet(p * 1e5),
        _ => return Err(Error::Validation("give exactly one of --p-in and --p-out".into())),
    };
    let heat_flux = match &a.heat_flux_profile {
        Some(s) => HeatFluxProfile::piecewise(parse_profile(s)?)?,
        None => HeatFluxProfile::constant(a.heat_flux * 1e6),
    };
    let mut cfg = MarchConfig::new(a.mass_flux * geom.area_m2(), a.t_in, pressure, heat_flux);
    cfg.dz = a.dz;
    cfg.substeps = a.substeps;
    cfg.validate()?;
    Ok((geom, cfg))
}

/// `z:q,z:q,...` with z in mm and q in MW/m².
fn parse_profile(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split(',')
        .map(|seg| {
            let (z, q) = seg
                .split_once(':')
                .ok_or_else(|| Error::Validation(format!("heat-flux segment `{seg}` is not z:q")))?;
            let num = |x: &str| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Validation(format!("bad number `{x}` in heat-flux profile")))
            };
            Ok((num(z)?, num(q)? * 1e6))
        })
        .collect()
}

fn channel_config(a: &ChannelArgs) -> Value {
    serde_json::to_value(a).expect("channel args serialise")
}

fn cmd_march(common: &CommonArgs, a: &ChannelArgs) -> Result<Run> {
    let table = property_table(common)?;
    let (geom, cfg) = channel_setup(a)?;
    let t0 = Instant::now();
    let states = march(&table, &geom, &cfg)?;
    let mut run = Run::new(
        "march",
        json!({"table": table_config(common), "channel": channel_config(a)}),
        json!({"rng_seed": common.seed}),
    );
    track_table(&mut run, common);
    run.timings.push(("march", t0.elapsed().as_secs_f64()));
    let (first, last) = (states[0], states[states.len() - 1]);
    println!(
        "{} stations: p {:.3} -> {:.3} bar, T_b {:.2} -> {:.2} K",
        states.len(),
        first.p / 1e5,
        last.p / 1e5,
        first.t_b,
        last.t_b
    );
    run.output("march.csv", march_csv(&states, None));
    Ok(run)
}

fn cmd_predict(common: &CommonArgs, a: &PredictArgs) -> Result<Run> {
    let t0 = Instant::now();
    let table = property_table(common)?;
    let (model, scaler) = load_model(&a.model)?;
    let (geom, cfg) = channel_setup(&a.channel)?;
    let t1 = Instant::now();
    let rows = predict_channel(&table, &geom, &cfg, &model, &scaler)?;
    let predict_s = t1.elapsed().as_secs_f64();
    let total_s = t0.elapsed().as_secs_f64();
    let states: Vec<_> = rows.iter().map(|r| r.0).collect();
    let tw: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let (i_max, tw_max) = tw
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |acc, (i, &t)| if t > acc.1 { (i, t) } else { acc });
    println!(
        "predicted {} stations, max T_w {:.1} K at z = {} mm",
        rows.len(),
        tw_max,
        states[i_max].z
    );
    println!(
        "timing: march+predict {:.2} ms, total including setup {:.2} ms",
        predict_s * 1e3,
        total_s * 1e3
    );
    let mut run = Run::new(
        "predict",
        json!({"table": table_config(common), "model": a.model, "channel": channel_config(&a.channel)}),
        json!({"rng_seed": common.seed}),
    );
    track_table(&mut run, common);
    run.inputs.push(a.model.clone());
    run.timings.extend([("march_predict", predict_s), ("total", total_s)]);
    run.output("predict.csv", march_csv(&states, Some(&tw)));
    Ok(run)
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::Validation(format!("range `{s}` is not lo:hi")))?;
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|_| Error::Validation(format!("bad number `{x}` in range `{s}`")))
    };
    Ok((num(a)?, num(b)?))
}

fn cmd_heatmap(common: &CommonArgs, a: &HeatmapArgs) -> Result<Run> {
    let (model, scaler) = load_model(&a.model)?;
    let mut fixed = scaler.mean().to_vec();
    if let Some(list) = &a.fixed {
        for item in list.split(',') {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Validation(format!("`{item}` is not name=value")))?;
            let i = scaler
                .feature_names()
                .iter()
                .position(|n| n == name.trim())
                .ok_or_else(|| Error::Validation(format!("`{name}` is not a model feature")))?;
            fixed[i] = value
                .trim()
                .parse()
                .map_err(|_| Error::Validation(format!("bad value in `{item}`")))?;
        }
    }
    let map = heatmap_grid(
        &model,
        &scaler,
        &a.x,
        &a.y,
        parse_range(&a.x_range)?,
        parse_range(&a.y_range)?,
        a.resolution,
        &fixed,
    )?;
    let mut run = Run::new(
        "heatmap",
        json!({"model": a.model, "x": a.x, "y": a.y, "x_range": a.x_range, "y_range": a.y_range,
               "resolution": a.resolution, "fixed": scaler.feature_names().iter().zip(&fixed)
                   .map(|(n, v)| (n.clone(), json!(v))).collect::<serde_json::Map<_, _>>()}),
        json!({"rng_seed": common.seed}),
    );
    run.inputs.push(a.model.clone());
    let (lo, hi) = map
        .values
        .iter()
        .fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
    println!("{0}x{0} grid, predicted T_w between {lo:.1} and {hi:.1} K", a.resolution);
    run.output("heatmap.csv", map.to_csv());
    Ok(run)
}

fn dispatch(cli: &Cli) -> Result<(Run, &CommonArgs)> {
    let run = match &cli.command {
        Command::Generate(a) => (cmd_generate(&a.common, a)?, &a.common),
        Command::Stats(a) => (cmd_stats(&a.common, a)?, &a.common),
        Command::Train(a) => (cmd_train(&a.common, a)?, &a.common),
        Command::Search(a) => (cmd_search(&a.common, a)?, &a.common),
        Command::Eval(a) => (cmd_eval(&a.common, a)?, &a.common),
        Command::March(a) => (cmd_march(&a.common, &a.channel)?, &a.common),
        Command::Predict(a) => (cmd_predict(&a.common, a)?, &a.common),
        Command::Heatmap(a) => (cmd_heatmap(&a.common, a)?, &a.common),
    };
    Ok(run)
}

/// Runs the tool on `argv` and returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = dispatch(&cli).and_then(|(run, common)| run.finish(&common.out_dir, &argv));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let cat = e.category();
            eprintln!("error[{}]: {e}", cat.as_str());
            cat.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args().collect())
}
