//! `qnc`: command-line access to loader compilation, distance estimation,
//! nearest-centroid classification, dataset preparation and noise fitting.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qnc::angles::{AngleTree, DataVector, MatrixAngles};
use qnc::circuit::{build_optimized_loader, build_parallel_loader, lower_to_native, to_irbs, CircuitStats};
use qnc::classifier::{predict_classical, predict_quantum, CentroidModel, PredictionReport, Score};
use qnc::data::{
    generate_synthetic, load_csv, load_idx, nonnegativity_offsets, write_dataset_csv, BallConstraint, Dataset,
    LabelColumn, NoiseScale, SyntheticSpec,
};
use qnc::distance::{estimate_compiled, sample_distance, CompiledVector, DistanceEstimate, Shots};
use qnc::noise_analysis::{
    distance_tqg_count, estimate_fidelity, read_overlap_csv, simulate_overlaps, write_samples_csv, FidelityFit,
    OverlapPair,
};
use qnc::sim::{CoherentMode, NoiseSpec, OverlapEstimate, DEFAULT_BATCH_SIZE};
use qnc::Error;

mod exit {
    pub const IO: u8 = 3;
    pub const MALFORMED: u8 = 4;
    pub const INFEASIBLE: u8 = 5;
    pub const OTHER: u8 = 6;
}

#[derive(Parser, Debug)]
#[command(
    name = "qnc",
    version,
    about = "Unary loaders, distance estimation and nearest-centroid classification on a simulated backend"
)]
struct Cli {
    /// Worker threads for parallel estimation.
    #[arg(long, global = true, env = "QNC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Loader circuits.
    #[command(subcommand)]
    Loader(LoaderCommand),
    /// Estimate the distance between two vectors.
    Distance(DistanceArgs),
    /// Nearest-centroid classification, classical and on the simulated backend.
    Classify(ClassifyArgs),
    /// Generate a synthetic clustered dataset.
    SynthGen(SynthArgs),
    /// Project a dataset onto its top principal components.
    Pca(PcaArgs),
    /// Convert a CSV or IDX dataset into the dataset CSV format.
    Ingest(IngestArgs),
    /// Fit the two-qubit gate fidelity from measured vs ideal overlaps.
    NoiseFit(NoiseFitArgs),
    /// Simulate measured-vs-ideal overlap scatter data.
    Report(ReportArgs),
}

#[derive(Subcommand, Debug)]
enum LoaderCommand {
    /// Compile a vector into angles and a loader circuit.
    Compile(CompileArgs),
}

#[derive(Args, Debug, Serialize)]
struct CompileArgs {
    /// Vector file: a JSON array or numbers separated by commas or whitespace.
    #[arg(long)]
    input: PathBuf,
    /// Build the 2·sqrt(d)-qubit loader (d must be a power of four).
    #[arg(long)]
    optimized: bool,
    /// Replace RBS gates by CNOT and single-qubit rotations.
    #[arg(long, conflicts_with = "optimized")]
    lower: bool,
    /// Emit iRBS gates instead of RBS.
    #[arg(long, conflicts_with_all = ["optimized", "lower"])]
    irbs: bool,
    #[arg(long)]
    emit_angles: Option<PathBuf>,
    #[arg(long)]
    emit_circuit: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Clone)]
#[group(id = "shot_mode", multiple = false)]
struct ShotArgs {
    /// Shots per distance estimate.
    #[arg(long)]
    shots: Option<u64>,
    /// Use exact noiseless probabilities instead of shots.
    #[arg(long)]
    exact: bool,
}

impl ShotArgs {
    fn mode(&self) -> Option<Shots> {
        match (self.shots, self.exact) {
            (Some(n), _) => Some(Shots::Sampled(n)),
            (None, true) => Some(Shots::Exact),
            (None, false) => None,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    PerShot,
    PerBatch,
    Systematic,
}

impl From<ModeArg> for CoherentMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PerShot => CoherentMode::PerShot,
            ModeArg::PerBatch => CoherentMode::PerBatch,
            ModeArg::Systematic => CoherentMode::Systematic,
        }
    }
}

#[derive(Args, Debug, Serialize, Clone)]
struct NoiseArgs {
    /// Coherent angle noise and two-qubit gate fidelity, as `gamma,f`.
    #[arg(long, value_parser = parse_noise)]
    noise: Option<(f64, f64)>,
    /// How coherent noise draws are shared between shots.
    #[arg(long, value_enum, default_value = "per-shot")]
    noise_mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_BATCH_SIZE)]
    batch_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl NoiseArgs {
    fn spec(&self) -> Result<NoiseSpec, Error> {
        let (gamma, f) = self.noise.unwrap_or((0.0, 1.0));
        let spec = NoiseSpec::new(gamma, f, self.seed)?
            .with_mode(self.noise_mode.into())
            .with_batch_size(self.batch_size);
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_noise(s: &str) -> Result<(f64, f64), String> {
    let (g, f) = s.split_once(',').ok_or("expected gamma,f")?;
    let g: f64 = g.trim().parse().map_err(|_| format!("bad gamma {g:?}"))?;
    let f: f64 = f.trim().parse().map_err(|_| format!("bad fidelity {f:?}"))?;
    Ok((g, f))
}

#[derive(Args, Debug, Serialize)]
struct DistanceArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    shots: ShotArgs,
    /// Post-select on unary outcomes.
    #[arg(long)]
    mitigated: bool,
    #[command(flatten)]
    #[serde(flatten)]
    noise: NoiseArgs,
    /// Write the shot record as JSON.
    #[arg(long, requires = "shots")]
    emit_shots: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct DatasetInput {
    /// Column holding class labels: a header name, a zero-based index, or `last`.
    #[arg(long, default_value = "last")]
    label_column: String,
}

#[derive(Args, Debug, Serialize)]
struct ClassifyArgs {
    #[arg(long)]
    train: PathBuf,
    /// Points to classify; defaults to the training set.
    #[arg(long)]
    test: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    input: DatasetInput,
    #[command(flatten)]
    #[serde(flatten)]
    shots: ShotArgs,
    #[arg(long)]
    mitigated: bool,
    #[command(flatten)]
    #[serde(flatten)]
    noise: NoiseArgs,
    /// Shift coordinates by the training minima so they are nonnegative.
    #[arg(long)]
    shift: bool,
    /// Include per-pair estimate records in the report.
    #[arg(long)]
    estimates: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ScaleArg {
    Variance,
    StdDev,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum BallArg {
    Points,
    CentroidsOnly,
}

#[derive(Args, Debug, Serialize)]
struct SynthArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 10)]
    n_per: usize,
    #[arg(long, default_value_t = 0.3)]
    min_sep: f64,
    #[arg(long, default_value_t = 0.05)]
    variance: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Whether `--variance` is a variance or a standard deviation.
    #[arg(long, value_enum, default_value = "variance")]
    noise_scale: ScaleArg,
    /// Which draws must lie inside the ball.
    #[arg(long, value_enum, default_value = "points")]
    ball: BallArg,
    #[arg(long, default_value_t = 100_000)]
    max_attempts: usize,
    /// Shift coordinates so they are nonnegative.
    #[arg(long)]
    shift: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct Transform {
    /// Keep this many randomly chosen points per class.
    #[arg(long)]
    sample_per_class: Option<usize>,
    /// Seed for the per-class sample.
    #[arg(long, default_value_t = 0)]
    sample_seed: u64,
    /// Shift coordinates so they are nonnegative.
    #[arg(long)]
    shift: bool,
    /// Zero-pad to a power-of-two dimension.
    #[arg(long)]
    pad: bool,
}

#[derive(Args, Debug, Serialize)]
struct PcaArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    dataset: DatasetInput,
    #[arg(long, default_value_t = 8)]
    components: usize,
    #[command(flatten)]
    #[serde(flatten)]
    transform: Transform,
    #[arg(long)]
    out: PathBuf,
    /// Write the fitted model as JSON.
    #[arg(long)]
    model_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, requires = "idx_labels")]
    idx_images: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct IngestArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: Source,
    #[arg(long)]
    idx_labels: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    dataset: DatasetInput,
    #[command(flatten)]
    #[serde(flatten)]
    transform: Transform,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
#[group(id = "gates", required = true, multiple = false)]
struct GateCount {
    /// Native two-qubit gate count of the circuits.
    #[arg(long)]
    m: Option<usize>,
    /// Qubits of the distance circuits; sets m = 4.5n − 6.
    #[arg(long)]
    qubits: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct NoiseFitArgs {
    /// CSV with `c_sim` and `c_exp` columns.
    #[arg(long)]
    pairs: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    gates: GateCount,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ReportArgs {
    #[arg(long, default_value_t = 8)]
    qubits: usize,
    /// Number of simulated vector pairs.
    #[arg(long, default_value_t = 40)]
    pairs: usize,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[command(flatten)]
    #[serde(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("qnc: cannot configure {n} threads: {e}");
            return ExitCode::from(exit::OTHER);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qnc: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => exit::IO,
        Error::MalformedData { .. } | Error::Json(_) => exit::MALFORMED,
        Error::InfeasibleSpec(_) => exit::INFEASIBLE,
        _ => exit::OTHER,
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Loader(LoaderCommand::Compile(a)) => compile(a),
        Command::Distance(a) => distance(a),
        Command::Classify(a) => classify(a),
        Command::SynthGen(a) => synth(a),
        Command::Pca(a) => pca(a),
        Command::Ingest(a) => ingest(a),
        Command::NoiseFit(a) => noise_fit(a),
        Command::Report(a) => report(a),
    }
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_vector(path: &Path) -> Result<Vec<f64>, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let malformed = |message: String| Error::MalformedData {
        path: path.to_path_buf(),
        message,
    };
    let trimmed = text.trim();
    let values: Vec<f64> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| malformed(e.to_string()))?
    } else {
        trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .enumerate()
            .map(|(i, s)| {
                s.parse()
                    .map_err(|_| malformed(format!("entry {}: {s:?} is not a number", i + 1)))
            })
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(malformed("no entries".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(malformed("entries must be finite".into()));
    }
    Ok(values)
}

#[derive(Serialize)]
struct CompileOutput<'a> {
    config: &'a CompileArgs,
    dimension: usize,
    norm: f64,
    qubits: usize,
    stats: CircuitStats,
}

fn compile(a: CompileArgs) -> Result<(), Error> {
    let x = DataVector::new(read_vector(&a.input)?)?;
    let (circuit, angles) = if a.optimized {
        let m = MatrixAngles::compile(&x)?;
        (build_optimized_loader(&m)?, serde_json::to_value(&m)?)
    } else {
        let t = AngleTree::compile(&x)?;
        let mut c = build_parallel_loader(&t);
        if a.lower {
            c = lower_to_native(&c)?;
        } else if a.irbs {
            c = to_irbs(&c);
        }
        (c, serde_json::to_value(&t)?)
    };
    if let Some(p) = &a.emit_angles {
        write_json(&angles, Some(p))?;
    }
    if let Some(p) = &a.emit_circuit {
        write_json(&circuit, Some(p))?;
    }
    write_json(
        &CompileOutput {
            config: &a,
            dimension: x.dimension(),
            norm: x.norm(),
            qubits: circuit.num_qubits(),
            stats: circuit.stats(),
        },
        None,
    )
}

/// Zero-pads two vectors to a common power-of-two length.
fn pad_pair(mut x: Vec<f64>, mut y: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let d = x.len().max(y.len()).next_power_of_two().max(2);
    x.resize(d, 0.0);
    y.resize(d, 0.0);
    (x, y)
}

#[derive(Serialize)]
struct DistanceOutput<'a> {
    config: &'a DistanceArgs,
    dimension: usize,
    norm_x: f64,
    norm_y: f64,
    estimate: DistanceEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    overlap: Option<OverlapEstimate>,
}

fn distance(a: DistanceArgs) -> Result<(), Error> {
    let (x, y) = (read_vector(&a.x)?, read_vector(&a.y)?);
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let (x, y) = pad_pair(x, y);
    let cx = CompiledVector::compile(&DataVector::new(x)?)?;
    let cy = CompiledVector::compile(&DataVector::new(y)?)?;
    let noise = a.noise.spec()?;
    let (estimate, overlap) = match a.shots.mode() {
        Some(Shots::Sampled(n)) => {
            let (e, record, o) = sample_distance(&cx, &cy, n, &noise, a.mitigated, &[])?;
            if let Some(p) = &a.emit_shots {
                write_json(&record, Some(p))?;
            }
            (e, Some(o))
        }
        _ => (
            estimate_compiled(&cx, &cy, Shots::Exact, &noise, a.mitigated, &[])?,
            None,
        ),
    };
    write_json(
        &DistanceOutput {
            config: &a,
            dimension: cx.dimension(),
            norm_x: cx.norm,
            norm_y: cy.norm,
            estimate,
            overlap,
        },
        a.out.as_deref(),
    )
}

#[derive(Serialize)]
struct ModeReport {
    labels: Vec<Option<String>>,
    distances: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimates: Option<Vec<Vec<Option<DistanceEstimate>>>>,
    failures: Vec<(usize, String)>,
    score: Score,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement_with_classical: Option<f64>,
}

impl ModeReport {
    fn new(report: PredictionReport, names: &[String], truth: &[usize], keep_estimates: bool) -> Result<Self, Error> {
        let score = report.score(truth, names.len())?;
        Ok(Self {
            labels: report.labels.iter().map(|l| l.map(|i| names[i].clone())).collect(),
            distances: report.distances,
            estimates: if keep_estimates { report.estimates } else { None },
            failures: report.failures,
            score,
            agreement_with_classical: None,
        })
    }
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    config: &'a ClassifyArgs,
    classes: Vec<String>,
    train_points: usize,
    test_points: usize,
    dimension: usize,
    shift: Option<Vec<f64>>,
    classical: ModeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    quantum: Option<ModeReport>,
}

fn classify(a: ClassifyArgs) -> Result<(), Error> {
    let label = LabelColumn::parse(&a.input.label_column);
    let train = load_csv(&a.train, &label)?;
    let test = match &a.test {
        Some(p) => load_csv(p, &label)?.align_classes(&train.class_names)?,
        None => train.clone(),
    };
    if test.dimension() != train.dimension() {
        return Err(Error::DimensionMismatch {
            expected: train.dimension(),
            actual: test.dimension(),
        });
    }
    let shift = a.shift.then(|| nonnegativity_offsets(&train.points));
    let prepare = |ds: &Dataset| {
        let ds = match &shift {
            Some(o) => ds.shifted(o),
            None => ds.clone(),
        };
        ds.pad_to_power_of_two()
    };
    let (train_p, test_p) = (prepare(&train), prepare(&test));
    let model = CentroidModel::fit(&train_p.points, &train_p.labels, &train_p.class_names)?;
    let classical = predict_classical(&model, &test_p.points)?;
    let classical_labels: Vec<usize> = classical
        .labels
        .iter()
        .map(|l| l.expect("classical labels are total"))
        .collect();
    let quantum = match a.shots.mode() {
        Some(mode) => {
            let noise = a.noise.spec()?;
            let q = predict_quantum(&model, &test_p.points, mode, &noise, a.mitigated)?;
            let agreement = q.agreement(&classical_labels);
            let mut r = ModeReport::new(q, &model.class_names, &test_p.labels, a.estimates)?;
            r.agreement_with_classical = Some(agreement);
            Some(r)
        }
        None => None,
    };
    let output = ClassifyOutput {
        config: &a,
        classes: model.class_names.clone(),
        train_points: train_p.len(),
        test_points: test_p.len(),
        dimension: model.dimension(),
        shift,
        classical: ModeReport::new(classical, &model.class_names, &test_p.labels, false)?,
        quantum,
    };
    write_json(&output, a.out.as_deref())
}

#[derive(Serialize)]
struct DatasetSummary<'a, C: Serialize> {
    config: &'a C,
    out: &'a Path,
    points: usize,
    dimension: usize,
    classes: usize,
}

fn summarize<C: Serialize>(config: &C, out: &Path, ds: &Dataset) -> Result<(), Error> {
    write_json(
        &DatasetSummary {
            config,
            out,
            points: ds.len(),
            dimension: ds.dimension(),
            classes: ds.num_classes(),
        },
        None,
    )
}

fn synth(a: SynthArgs) -> Result<(), Error> {
    let spec = SyntheticSpec {
        k: a.k,
        d: a.d,
        n_per: a.n_per,
        min_sep: a.min_sep,
        variance: a.variance,
        radius: a.radius,
        seed: a.seed,
        noise_scale: match a.noise_scale {
            ScaleArg::Variance => NoiseScale::Variance,
            ScaleArg::StdDev => NoiseScale::StdDev,
        },
        ball: match a.ball {
            BallArg::Points => BallConstraint::Points,
            BallArg::CentroidsOnly => BallConstraint::CentroidsOnly,
        },
        max_attempts: a.max_attempts,
    };
    let mut ds = generate_synthetic(&spec)?;
    if a.shift {
        ds = ds.nonnegativity_shift();
    }
    write_dataset_csv(&ds, &a.out)?;
    summarize(&a, &a.out, &ds)
}

fn apply_transform(mut ds: Dataset, t: &Transform) -> Result<Dataset, Error> {
    if let Some(n) = t.sample_per_class {
        ds = ds.balanced_sample(n, t.sample_seed)?;
    }
    Ok(ds)
}

fn finish_transform(mut ds: Dataset, t: &Transform) -> Dataset {
    if t.shift {
        ds = ds.nonnegativity_shift();
    }
    if t.pad {
        ds = ds.pad_to_power_of_two();
    }
    ds
}

fn pca(a: PcaArgs) -> Result<(), Error> {
    let ds = load_csv(&a.input, &LabelColumn::parse(&a.dataset.label_column))?;
    let ds = apply_transform(ds, &a.transform)?;
    let (projected, model) = ds.pca(a.components)?;
    let projected = finish_transform(projected, &a.transform);
    write_dataset_csv(&projected, &a.out)?;
    if let Some(p) = &a.model_out {
        write_json(&model, Some(p))?;
    }
    summarize(&a, &a.out, &projected)
}

fn ingest(a: IngestArgs) -> Result<(), Error> {
    let ds = match (&a.source.csv, &a.source.idx_images, &a.idx_labels) {
        (Some(csv), _, _) => load_csv(csv, &LabelColumn::parse(&a.dataset.label_column))?,
        (None, Some(images), Some(labels)) => load_idx(images, labels)?,
        _ => return Err(Error::InvalidArgument("--idx-images needs --idx-labels".into())),
    };
    let ds = finish_transform(apply_transform(ds, &a.transform)?, &a.transform);
    write_dataset_csv(&ds, &a.out)?;
    summarize(&a, &a.out, &ds)
}

#[derive(Serialize)]
struct FitOutput<'a> {
    config: &'a NoiseFitArgs,
    #[serde(flatten)]
    fit: FidelityFit,
}

fn noise_fit(a: NoiseFitArgs) -> Result<(), Error> {
    let m = match (a.gates.m, a.gates.qubits) {
        (Some(m), _) => m,
        (None, Some(n)) => distance_tqg_count(n),
        (None, None) => return Err(Error::InvalidArgument("--m or --qubits is required".into())),
    };
    let n = a.gates.qubits.unwrap_or(0);
    let pairs: Vec<OverlapPair> = read_overlap_csv(&a.pairs)?
        .into_iter()
        .map(|(c_sim, c_exp)| OverlapPair {
            c_sim,
            c_exp,
            n,
            m,
            mitigated: false,
        })
        .collect();
    let fit = estimate_fidelity(&pairs)?;
    write_json(&FitOutput { config: &a, fit }, a.out.as_deref())
}

fn report(a: ReportArgs) -> Result<(), Error> {
    let noise = a.noise.spec()?;
    let samples = simulate_overlaps(a.qubits, a.pairs, a.shots, &noise)?;
    write_samples_csv(&samples, &format!("config: {}", serde_json::to_string(&a)?), &a.out)?;
    write_json(
        &serde_json::json!({ "config": &a, "out": &a.out, "pairs": samples.len() }),
        None,
    )
}
