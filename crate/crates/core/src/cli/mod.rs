//! Command-line front end: flag parsing, artifact writers, and the
//! subcommand dispatcher behind the `regvar` binary.
//!
//! Every subcommand reads one [`RunConfig`] (JSON file via `--config`,
//! library defaults otherwise), writes its tabular outputs as CSV under the
//! output directory, and finishes with a `manifest_<command>.json` recording
//! the inputs, outputs, seed, and a hash of the exact configuration so runs
//! can be reproduced and compared byte for byte.

mod config;
mod regress;

pub use config::{InputPaths, RunConfig, StructuralOptions};
pub use regress::{
    ols_regress, CoefficientEstimate, RegressionInput, RegressionSummary,
};

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{PanelDataset, WeightMatrix};
use crate::pipeline::{
    annual_to_quarterly_spline, apply_transforms, gini_by_period, inverse_distance_weights,
    next_period, read_centroid_csv, read_panel_csv, read_survey_csv, read_weights_csv,
    write_panel_csv, write_weights_csv, RawPanel,
};
use crate::sampler::{run_gibbs, PosteriorStore};
use crate::structural::{
    analyze_store, classify_regions, CovarianceWindow, ShockDesign, StructuralAnalysis,
    StructuralSettings, SummaryGrid,
};
use crate::synth::{synth_generate, SynthSpec, TruthRecord};

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(
    name = "regvar",
    version,
    about = "Hierarchical multi-region VAR: simulation, estimation, and structural analysis"
)]
pub struct Cli {
    /// JSON configuration file; library defaults apply when omitted.
    #[arg(long, global = true, env = "REGVAR_CONFIG")]
    pub config: Option<PathBuf>,

    /// Override the configured seed for both simulation and estimation.
    #[arg(long, global = true, env = "REGVAR_SEED")]
    pub seed: Option<u64>,

    /// Override the configured output directory.
    #[arg(long, global = true, env = "REGVAR_OUT")]
    pub out: Option<PathBuf>,

    /// Worker threads for the draw-level analysis (default: all cores).
    #[arg(long, global = true, env = "REGVAR_THREADS")]
    pub threads: Option<usize>,

    /// Override the configured response horizon.
    #[arg(long, global = true, env = "REGVAR_HORIZON")]
    pub horizon: Option<usize>,

    #[command(subcommand)]
    pub command: CliCommand,
}

/// The `regvar` subcommands.
#[derive(Clone, Copy, Debug, Subcommand)]
pub enum CliCommand {
    /// Generate a synthetic panel plus the exact system that produced it.
    Simulate,
    /// Run the Gibbs sampler on a panel and store the posterior draws.
    Estimate,
    /// Posterior impulse-response bands for the identified shock.
    Irf,
    /// Posterior forecast-error-variance shares for the identified shock.
    Fevd,
    /// Classify each region's peak response into five bands.
    Classify,
    /// Annual survey inequality plus a quarterly interpolation.
    Gini,
    /// Regress per-region responses on a table of covariates.
    Regress,
}

impl CliCommand {
    fn name(self) -> &'static str {
        match self {
            CliCommand::Simulate => "simulate",
            CliCommand::Estimate => "estimate",
            CliCommand::Irf => "irf",
            CliCommand::Fevd => "fevd",
            CliCommand::Classify => "classify",
            CliCommand::Gini => "gini",
            CliCommand::Regress => "regress",
        }
    }
}

/// What a subcommand produced: files on disk plus any warnings worth
/// repeating on stderr. The warnings are also in the manifest.
#[derive(Debug)]
pub struct RunOutcome {
    pub artifacts: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Resolve the configuration, apply flag overrides, and run the subcommand.
pub fn run(cli: &Cli) -> Result<RunOutcome> {
    let config = effective_config(cli)?;
    match cli.threads {
        Some(0) => Err(Error::config("--threads must be at least 1")),
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::config(format!("could not build a {threads}-thread pool: {e}")))?
            .install(|| dispatch(cli.command, &config)),
        None => dispatch(cli.command, &config),
    }
}

/// Configuration after command-line overrides, re-validated.
fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.sampler.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    if let Some(horizon) = cli.horizon {
        config.structural.horizon = horizon;
    }
    config.validate()?;
    Ok(config)
}

fn dispatch(command: CliCommand, config: &RunConfig) -> Result<RunOutcome> {
    fs::create_dir_all(&config.output_dir)
        .map_err(|e| Error::io(format!("{}: {e}", config.output_dir.display())))?;
    match command {
        CliCommand::Simulate => cmd_simulate(config),
        CliCommand::Estimate => cmd_estimate(config),
        CliCommand::Irf => cmd_irf(config),
        CliCommand::Fevd => cmd_fevd(config),
        CliCommand::Classify => cmd_classify(config),
        CliCommand::Gini => cmd_gini(config),
        CliCommand::Regress => cmd_regress(config),
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_simulate(config: &RunConfig) -> Result<RunOutcome> {
    let spec = SynthSpec::for_dims(config.dims.clone())?;
    let seed = config.sampler.seed;
    let out = synth_generate(&spec, seed)?;
    let raw = RawPanel {
        region_series: out.data.regions().to_vec(),
        national_series: out.data.national().clone(),
        region_names: out.data.region_names.clone(),
        region_var_names: out.data.region_var_names.clone(),
        national_var_names: out.data.national_var_names.clone(),
        periods: label_run(&config.start_period, config.dims.periods)?,
    };

    let panel_path = config.output_dir.join("panel.csv");
    write_panel_csv(&panel_path, &raw)?;
    let weights_path = config.output_dir.join("weights.csv");
    write_weights_csv(&weights_path, &raw.region_names, &spec.weights)?;
    let truth_path = config.output_dir.join("truth.json");
    write_json(&truth_path, &TruthRecord::new(&spec, &out, seed))?;

    finish(
        CliCommand::Simulate,
        config,
        &[],
        vec![panel_path, weights_path, truth_path],
        Vec::new(),
    )
}

fn cmd_estimate(config: &RunConfig) -> Result<RunOutcome> {
    let panel_path = config.input_or_artifact(&config.paths.panel, "panel.csv");
    let raw = read_panel_csv(&panel_path, config.permissive_csv)?;
    let data = match &config.transforms {
        Some(spec) => apply_transforms(&raw, spec)?,
        None => PanelDataset::new(
            raw.region_series.clone(),
            raw.national_series.clone(),
            raw.region_names.clone(),
            raw.region_var_names.clone(),
            raw.national_var_names.clone(),
        )?,
    };

    let mut warnings = Vec::new();
    let (weights, weight_input) = resolve_weights(config, &data.region_names, &mut warnings)?;

    // The panel, not the config, decides how many periods the model sees;
    // transforms may have shortened it.
    let mut dims = config.dims.clone();
    dims.periods = data.periods();

    let store = run_gibbs(&data, &weights, &dims, &config.prior, &config.sampler)?;
    let store_path = config.output_dir.join("posterior.bin");
    store.save(&store_path)?;

    let mut inputs = vec![panel_path];
    inputs.extend(weight_input);
    finish(
        CliCommand::Estimate,
        config,
        &inputs,
        vec![store_path],
        warnings,
    )
}

fn cmd_irf(config: &RunConfig) -> Result<RunOutcome> {
    let (store_path, store, analysis) = load_analysis(config)?;
    let labels = stacked_labels(&store);
    let shock = shock_label(&labels, analysis.design.ordering[analysis.design.shock_index]);

    let path = config.output_dir.join("irf_summary.csv");
    write_band_csv(&path, "irf", &labels, &shock, &analysis.irf)?;

    let warnings = analysis.warnings.clone();
    finish(CliCommand::Irf, config, &[store_path], vec![path], warnings)
}

fn cmd_fevd(config: &RunConfig) -> Result<RunOutcome> {
    let (store_path, store, analysis) = load_analysis(config)?;
    let labels = stacked_labels(&store);
    let shock = shock_label(&labels, analysis.design.ordering[analysis.design.shock_index]);

    let summary_path = config.output_dir.join("fevd_summary.csv");
    write_band_csv(&summary_path, "fevd", &labels, &shock, &analysis.fevd)?;
    let mean_path = config.output_dir.join("fevd_mean.csv");
    write_fevd_mean_csv(&mean_path, &labels, &analysis)?;

    let warnings = analysis.warnings.clone();
    finish(
        CliCommand::Fevd,
        config,
        &[store_path],
        vec![summary_path, mean_path],
        warnings,
    )
}

fn cmd_classify(config: &RunConfig) -> Result<RunOutcome> {
    let (store_path, store, analysis) = load_analysis(config)?;
    let variable = config.structural.classify_variable;
    let classes = classify_regions(
        &analysis,
        store.dims(),
        variable,
        config.structural.lower_frac,
        config.structural.upper_frac,
    )?;

    let path = config.output_dir.join("classification.csv");
    let mut writer = csv_writer(&path)?;
    write_record(
        &mut writer,
        &path,
        ["region", "variable", "peak_value", "peak_horizon", "class"],
    )?;
    let header = store.header();
    let variable_name = &header.region_var_names[variable];
    for (region, class) in header.region_names.iter().zip(&classes) {
        write_record(
            &mut writer,
            &path,
            [
                region.as_str(),
                variable_name.as_str(),
                &class.peak_value.to_string(),
                &class.peak_horizon.to_string(),
                class.class.label(),
            ],
        )?;
    }
    flush_csv(writer, &path)?;

    let warnings = analysis.warnings.clone();
    finish(
        CliCommand::Classify,
        config,
        &[store_path],
        vec![path],
        warnings,
    )
}

fn cmd_gini(config: &RunConfig) -> Result<RunOutcome> {
    let survey_path = config
        .paths
        .survey
        .clone()
        .ok_or_else(|| Error::config("gini needs paths.survey pointing at a household survey CSV"))?;
    let records = read_survey_csv(&survey_path, config.permissive_csv)?;
    let annual = gini_by_period(&records)?;

    let annual_path = config.output_dir.join("gini_annual.csv");
    let mut writer = csv_writer(&annual_path)?;
    write_record(&mut writer, &annual_path, ["year", "gini"])?;
    let mut points = Vec::with_capacity(annual.len());
    for (label, value) in &annual {
        write_record(&mut writer, &annual_path, [label.as_str(), &value.to_string()])?;
        let year: i32 = label.trim().parse().map_err(|_| {
            Error::config(format!(
                "survey periods must be calendar years to interpolate quarters; got {label:?}"
            ))
        })?;
        points.push((year, *value));
    }
    flush_csv(writer, &annual_path)?;

    let spline = annual_to_quarterly_spline(&points)?;
    let mut warnings = Vec::new();
    if spline.linear_fallback {
        warnings.push(
            "fewer than three annual points; the quarterly series is a linear interpolation"
                .to_string(),
        );
    }
    let quarterly_path = config.output_dir.join("gini_quarterly.csv");
    let mut writer = csv_writer(&quarterly_path)?;
    write_record(&mut writer, &quarterly_path, ["period", "gini"])?;
    for (label, value) in spline.period_labels().iter().zip(&spline.values) {
        write_record(
            &mut writer,
            &quarterly_path,
            [label.as_str(), &value.to_string()],
        )?;
    }
    flush_csv(writer, &quarterly_path)?;

    finish(
        CliCommand::Gini,
        config,
        &[survey_path],
        vec![annual_path, quarterly_path],
        warnings,
    )
}

fn cmd_regress(config: &RunConfig) -> Result<RunOutcome> {
    let covariates_path = config.paths.covariates.clone().ok_or_else(|| {
        Error::config("regress needs paths.covariates pointing at a region-level CSV")
    })?;
    let (store_path, store, analysis) = load_analysis(config)?;
    let dims = store.dims();
    let variable = config.structural.classify_variable;
    if variable >= dims.region_vars {
        return Err(Error::config(format!(
            "classify_variable {variable} out of range; the posterior covers {} region variables",
            dims.region_vars
        )));
    }
    let horizon = config.structural.regress_horizon;

    let table = read_covariates_csv(&covariates_path)?;
    let header = store.header();
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut dropped = Vec::new();
    for (r, name) in header.region_names.iter().enumerate() {
        match table.rows.iter().find(|(n, _)| n == name) {
            Some((_, values)) if values.iter().all(Option::is_some) => {
                rows.push((r, values.iter().map(|v| v.unwrap()).collect()));
            }
            _ => dropped.push(name.clone()),
        }
    }
    let mut warnings = analysis.warnings.clone();
    if !dropped.is_empty() {
        warnings.push(format!(
            "dropped regions without complete covariates: {}",
            dropped.join(", ")
        ));
    }

    let response: Vec<f64> = rows
        .iter()
        .map(|(r, _)| analysis.irf.q50[(horizon, dims.region_offset(*r) + variable)])
        .collect();
    let covariates: Vec<Vec<f64>> = (0..table.names.len())
        .map(|j| rows.iter().map(|(_, values)| values[j]).collect())
        .collect();
    let input = RegressionInput {
        response,
        covariate_names: table.names.clone(),
        covariates,
    };
    let summary = ols_regress(&input)?;

    let path = config.output_dir.join("regress_table.csv");
    write_regression_csv(&path, &summary)?;

    finish(
        CliCommand::Regress,
        config,
        &[store_path, covariates_path],
        vec![path],
        warnings,
    )
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

/// Chain of quarter labels starting at `start`.
fn label_run(start: &str, count: usize) -> Result<Vec<String>> {
    let mut labels = Vec::with_capacity(count);
    let mut label = start.to_string();
    for _ in 0..count {
        let next = next_period(&label)?;
        labels.push(label);
        label = next;
    }
    Ok(labels)
}

/// Weight matrix for estimation, in order of preference: an explicit weights
/// file, centroid coordinates, a `weights.csv` left in the output directory
/// by `simulate`, and finally uniform weights.
fn resolve_weights(
    config: &RunConfig,
    region_names: &[String],
    warnings: &mut Vec<String>,
) -> Result<(WeightMatrix, Option<PathBuf>)> {
    if let Some(path) = &config.paths.weights {
        let (names, weights) = read_weights_csv(path)?;
        check_region_names(&names, region_names, path)?;
        return Ok((weights, Some(path.clone())));
    }
    if let Some(path) = &config.paths.centroids {
        let centroids = read_centroid_csv(path, config.permissive_csv)?;
        check_region_names(&centroids.names, region_names, path)?;
        return Ok((inverse_distance_weights(&centroids)?, Some(path.clone())));
    }
    let fallback = config.output_dir.join("weights.csv");
    if fallback.exists() {
        let (names, weights) = read_weights_csv(&fallback)?;
        check_region_names(&names, region_names, &fallback)?;
        return Ok((weights, Some(fallback)));
    }
    warnings.push("no weight source configured; falling back to uniform weights".to_string());
    Ok((WeightMatrix::uniform(region_names.len())?, None))
}

fn check_region_names(found: &[String], expected: &[String], path: &Path) -> Result<()> {
    if found != expected {
        return Err(Error::config(format!(
            "{}: region names [{}] do not match the panel regions [{}]",
            path.display(),
            found.join(", "),
            expected.join(", ")
        )));
    }
    Ok(())
}

/// Load the posterior and run the draw-level structural analysis with the
/// configured shock design.
fn load_analysis(config: &RunConfig) -> Result<(PathBuf, PosteriorStore, StructuralAnalysis)> {
    let path = config.input_or_artifact(&config.paths.posterior, "posterior.bin");
    let store = PosteriorStore::load(&path)?;
    let shock_dim = store.dims().shock_dim();
    let settings = StructuralSettings {
        design: Some(ShockDesign {
            ordering: (0..shock_dim).collect(),
            shock_index: 0,
            normalize_impact: config.structural.normalize_impact,
        }),
        horizon: config.structural.horizon,
        window: match config.structural.covariance_date {
            Some(t) => CovarianceWindow::AtDate(t),
            None => CovarianceWindow::TimeAverage,
        },
    };
    let analysis = analyze_store(&store, &settings)?;
    Ok((path, store, analysis))
}

/// `(region, variable)` labels for the stacked series in system order:
/// national variables first with an empty region field, then each region's
/// variables.
fn stacked_labels(store: &PosteriorStore) -> Vec<(String, String)> {
    let header = store.header();
    let dims = store.dims();
    let mut labels = Vec::with_capacity(dims.shock_dim());
    for name in &header.national_var_names {
        labels.push((String::new(), name.clone()));
    }
    for region in &header.region_names {
        for name in &header.region_var_names {
            labels.push((region.clone(), name.clone()));
        }
    }
    labels
}

fn shock_label(labels: &[(String, String)], index: usize) -> String {
    let (region, variable) = &labels[index];
    if region.is_empty() {
        variable.clone()
    } else {
        format!("{region}:{variable}")
    }
}

// ---------------------------------------------------------------------------
// Artifact writers
// ---------------------------------------------------------------------------

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::io(format!("{}: {e}", path.display())))
}

fn write_record<I, F>(writer: &mut csv::Writer<fs::File>, path: &Path, record: I) -> Result<()>
where
    I: IntoIterator<Item = F>,
    F: AsRef<[u8]>,
{
    writer
        .write_record(record)
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))
}

fn flush_csv(mut writer: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    writer
        .flush()
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let body = serde_json::to_string_pretty(value)
        .map_err(|e| Error::config(format!("{}: could not serialize: {e}", path.display())))?;
    fs::write(path, body + "\n").map_err(|e| Error::io(format!("{}: {e}", path.display())))
}

/// Quantile bands of one grid, one row per stacked series and horizon.
fn write_band_csv(
    path: &Path,
    kind: &str,
    labels: &[(String, String)],
    shock: &str,
    grid: &SummaryGrid,
) -> Result<()> {
    let mut writer = csv_writer(path)?;
    write_record(
        &mut writer,
        path,
        ["region", "variable", "shock", "horizon", "q16", "q50", "q84", "kind"],
    )?;
    for (col, (region, variable)) in labels.iter().enumerate() {
        for h in 0..grid.nrows() {
            write_record(
                &mut writer,
                path,
                [
                    region.as_str(),
                    variable.as_str(),
                    shock,
                    &h.to_string(),
                    &grid.q16[(h, col)].to_string(),
                    &grid.q50[(h, col)].to_string(),
                    &grid.q84[(h, col)].to_string(),
                    kind,
                ],
            )?;
        }
    }
    flush_csv(writer, path)
}

/// Posterior-mean variance shares for every shock. Within each
/// `(region, variable, horizon)` group the shares sum to one, which is the
/// cheap integrity check quantile bands cannot offer.
fn write_fevd_mean_csv(
    path: &Path,
    labels: &[(String, String)],
    analysis: &StructuralAnalysis,
) -> Result<()> {
    let mut writer = csv_writer(path)?;
    write_record(
        &mut writer,
        path,
        ["region", "variable", "shock", "horizon", "share"],
    )?;
    for (col, (region, variable)) in labels.iter().enumerate() {
        for h in 0..analysis.fevd_mean[0].nrows() {
            for (s, shares) in analysis.fevd_mean.iter().enumerate() {
                write_record(
                    &mut writer,
                    path,
                    [
                        region.as_str(),
                        variable.as_str(),
                        &shock_label(labels, analysis.design.ordering[s]),
                        &h.to_string(),
                        &shares[(h, col)].to_string(),
                    ],
                )?;
            }
        }
    }
    flush_csv(writer, path)
}

fn write_regression_csv(path: &Path, summary: &RegressionSummary) -> Result<()> {
    let mut writer = csv_writer(path)?;
    write_record(
        &mut writer,
        path,
        ["term", "estimate", "std_error", "t_stat", "p_value", "stars"],
    )?;
    for coef in &summary.coefficients {
        write_record(
            &mut writer,
            path,
            [
                coef.name.as_str(),
                &coef.coefficient.to_string(),
                &coef.std_error.to_string(),
                &coef.t_stat.to_string(),
                &coef.p_value.to_string(),
                coef.stars,
            ],
        )?;
    }
    write_record(
        &mut writer,
        path,
        ["r_squared", &summary.r_squared.to_string(), "", "", "", ""],
    )?;
    write_record(
        &mut writer,
        path,
        ["observations", &summary.observations.to_string(), "", "", "", ""],
    )?;
    flush_csv(writer, path)
}

// ---------------------------------------------------------------------------
// Covariate table
// ---------------------------------------------------------------------------

/// Region-level covariates: a `region` key column followed by numeric
/// columns. Empty, `NA`, and non-finite cells are missing values; regions
/// with any missing cell are dropped from the regression.
#[derive(Debug)]
struct CovariateTable {
    names: Vec<String>,
    rows: Vec<(String, Vec<Option<f64>>)>,
}

fn read_covariates_csv(path: &Path) -> Result<CovariateTable> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::config(format!("{}: {e}", path.display())))?
        .clone();
    if headers.get(0) != Some("region") {
        return Err(Error::config(format!(
            "{}: first column must be `region`, got {:?}",
            path.display(),
            headers.get(0).unwrap_or("")
        )));
    }
    let names: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    if names.is_empty() {
        return Err(Error::config(format!(
            "{}: no covariate columns after `region`",
            path.display()
        )));
    }

    let mut rows: Vec<(String, Vec<Option<f64>>)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        if record.len() != headers.len() {
            return Err(Error::config(format!(
                "{}: line {line} has {} fields, expected {}",
                path.display(),
                record.len(),
                headers.len()
            )));
        }
        let region = record.get(0).unwrap_or("").to_string();
        if region.is_empty() {
            return Err(Error::config(format!(
                "{}: line {line} has an empty region",
                path.display()
            )));
        }
        if rows.iter().any(|(name, _)| *name == region) {
            return Err(Error::config(format!(
                "{}: duplicate region `{region}`",
                path.display()
            )));
        }
        let mut values = Vec::with_capacity(names.len());
        for field in record.iter().skip(1) {
            if field.is_empty() || field.eq_ignore_ascii_case("na") {
                values.push(None);
                continue;
            }
            let value: f64 = field.parse().map_err(|_| {
                Error::config(format!(
                    "{}: line {line}: `{field}` is not a number",
                    path.display()
                ))
            })?;
            values.push(value.is_finite().then_some(value));
        }
        rows.push((region, values));
    }
    Ok(CovariateTable { names, rows })
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    config_hash: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
    warnings: &'a [String],
    config: &'a RunConfig,
}

/// FNV-1a over the serialized configuration; cheap, stable, and good enough
/// to tell two configurations apart in a manifest.
fn config_hash(config: &RunConfig) -> Result<String> {
    let json = serde_json::to_string(config)
        .map_err(|e| Error::config(format!("could not serialize the configuration: {e}")))?;
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in json.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    Ok(format!("{hash:016x}"))
}

fn finish(
    command: CliCommand,
    config: &RunConfig,
    inputs: &[PathBuf],
    mut outputs: Vec<PathBuf>,
    warnings: Vec<String>,
) -> Result<RunOutcome> {
    let manifest = Manifest {
        command: command.name(),
        version: env!("CARGO_PKG_VERSION"),
        seed: config.sampler.seed,
        config_hash: config_hash(config)?,
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        warnings: &warnings,
        config,
    };
    let path = config
        .output_dir
        .join(format!("manifest_{}.json", command.name()));
    write_json(&path, &manifest)?;
    outputs.push(path);
    Ok(RunOutcome {
        artifacts: outputs,
        warnings,
    })
}
