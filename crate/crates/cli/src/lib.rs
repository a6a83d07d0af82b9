//! Command implementations behind the `radproj` binary.
//!
//! Every subcommand emits a CSV table (stdout or `--output`) whose leading
//! `#` comment lines echo the full flag set, so an output file is
//! self-describing and bit-reproducible from its own header. Exit codes:
//! 0 success, 1 verification failure, 2 usage error, 3 I/O error.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use radproj_core::bounds::SharpBoundTable;
use radproj_core::dataio::{
    format_f64, read_csv_vectors, read_matrix_market, sparsity_stats, write_csv, SparseDataset,
    Table,
};
use radproj_core::moments::{
    chaos_extreme_moment, chaos_extreme_moment_f64, rational_to_f64, EXACT_K_LIMIT, EXACT_Q_LIMIT,
};
use radproj_core::projections::{
    dataset_distortion_sweep, flat_unit_vector, simulate_distortions, Scheme,
};
use radproj_core::rng::derive_seed;
use radproj_core::verify::{run_all, VerifyConfig};
use radproj_core::{Error as CoreError, OracleConfig};

/// Error carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameter combinations (exit 2).
    Usage(String),
    /// File system or file format failures (exit 3).
    Io(String),
    /// A verification suite reported failures (exit 1).
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::VerifyFailed => write!(f, "verification failed"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Io(_) | CoreError::Parse { .. } => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "radproj",
    about = "Sharp sparsity-aware moment and tail bounds for Rademacher random projections",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Worst-case chaos moment table over sparsities and moment orders.
    Moments(MomentsArgs),
    /// Tail-bound comparison: sharp bound per sparsity vs prior bounds.
    Tail(TailArgs),
    /// Monte Carlo distortion simulation (synthetic or dataset columns).
    Simulate(SimulateArgs),
    /// Per-column sparsity/spread statistics of a dataset.
    DatasetStats(DatasetStatsArgs),
    /// Run the exact verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Dense,
    Sparse,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Dense => Scheme::DenseRademacher,
            SchemeArg::Sparse => Scheme::SparseRademacher,
        }
    }
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    /// Sparsity values (repeatable or comma-separated).
    #[arg(long = "K", required = true, value_delimiter = ',')]
    pub k: Vec<u32>,
    /// Moment orders (repeatable or comma-separated).
    #[arg(long = "q", required = true, value_delimiter = ',')]
    pub q: Vec<u32>,
    /// Add exact p/q columns next to the float columns.
    #[arg(long)]
    pub exact: bool,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TailArgs {
    /// Embedding dimension (rows of the projection).
    #[arg(long)]
    pub m: u32,
    /// Sparsity values for the sharp bound columns.
    #[arg(long = "K", required = true, value_delimiter = ',')]
    pub k: Vec<u64>,
    /// Threshold grid "start:stop:step".
    #[arg(long = "eps-grid")]
    pub eps_grid: Option<String>,
    /// Explicit thresholds (repeatable), alternative to --eps-grid.
    #[arg(long = "eps", value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// Largest (even) moment order scanned by the sharp bound.
    #[arg(long, default_value_t = 32)]
    pub qmax: u32,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Ambient dimension of the synthetic input vector.
    #[arg(long)]
    pub n: Option<usize>,
    /// Sparsity of the synthetic flat input vector.
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Embedding dimension (rows of the projection).
    #[arg(long)]
    pub m: usize,
    /// Projection scheme.
    #[arg(long, value_enum, default_value_t = SchemeArg::Dense)]
    pub scheme: SchemeArg,
    /// Density values for the sparse scheme (repeatable).
    #[arg(long = "density", value_delimiter = ',')]
    pub density: Vec<f64>,
    /// Monte Carlo trials per setting.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Threshold grid "start:stop:step" for CCDF output.
    #[arg(long = "eps-grid")]
    pub eps_grid: Option<String>,
    /// Explicit thresholds (repeatable), alternative to --eps-grid.
    #[arg(long = "eps", value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// RNG seed; echoed in the output header.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Dataset file (.mtx or .csv) switching to dataset mode.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Treat the first CSV row as a header.
    #[arg(long = "has-header")]
    pub has_header: bool,
    /// Restrict dataset mode to one column index.
    #[arg(long)]
    pub column: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DatasetStatsArgs {
    /// Dataset file (.mtx or .csv).
    #[arg(long)]
    pub input: PathBuf,
    /// Treat the first CSV row as a header.
    #[arg(long = "has-header")]
    pub has_header: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Sparsity cap for the formula-equivalence sweep.
    #[arg(long = "max-k", default_value_t = 12)]
    pub max_k: u32,
    /// Moment-order cap for the formula-equivalence sweep.
    #[arg(long = "max-q", default_value_t = 10)]
    pub max_q: u32,
    /// Number of random Robin-Hood transfer pairs.
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    /// Seed of the random profile streams.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Cap on support size for sign enumeration.
    #[arg(long = "enum-cap", default_value_t = 20)]
    pub enum_cap: usize,
    /// Cap on atom count for exact convolution.
    #[arg(long = "atom-cap", default_value_t = 1_000_000)]
    pub atom_cap: usize,
}

/// Parses the threshold grid from either `--eps-grid a:b:step` or repeated
/// `--eps` values; result is nonempty, positive, strictly increasing.
pub fn resolve_eps_grid(spec: Option<&str>, explicit: &[f64]) -> Result<Vec<f64>, CliError> {
    let grid = match (spec, explicit.is_empty()) {
        (Some(_), false) => {
            return Err(CliError::Usage(
                "--eps-grid conflicts with --eps; give one of them".into(),
            ))
        }
        (None, true) => {
            return Err(CliError::Usage(
                "a threshold grid is required: --eps-grid a:b:step or repeated --eps".into(),
            ))
        }
        (Some(s), true) => parse_grid_spec(s)?,
        (None, false) => explicit.to_vec(),
    };
    radproj_core::bounds::validate_grid(&grid)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(grid)
}

fn parse_grid_spec(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "bad --eps-grid '{spec}': expected start:stop:step"
        )));
    }
    let parse = |s: &str| -> Result<f64, CliError> {
        s.parse()
            .map_err(|_| CliError::Usage(format!("bad number '{s}' in --eps-grid")))
    };
    let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if start <= 0.0 || step <= 0.0 || stop < start {
        return Err(CliError::Usage(format!(
            "bad --eps-grid '{spec}': need 0 < start <= stop and step > 0"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let mut grid = Vec::with_capacity(count);
    for i in 0..count {
        let v = start + i as f64 * step;
        // shave float dust so grids like 0.1:1.0:0.1 print as 0.1, 0.2, ...
        let rounded = if v.abs() < 1e15 {
            (v * 1e12).round() / 1e12
        } else {
            v
        };
        grid.push(rounded);
    }
    Ok(grid)
}

fn emit(table: &Table, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => write_csv(table, path).map_err(|e| CliError::Io(e.to_string())),
        None => {
            let stdout = std::io::stdout();
            table
                .write_to(stdout.lock())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// `moments`: one row per sparsity, one float column per moment order,
/// optionally with exact p/q columns.
pub fn cmd_moments(args: &MomentsArgs) -> Result<Table, CliError> {
    if args.k.is_empty() || args.q.is_empty() {
        return Err(CliError::Usage("--K and --q must be nonempty".into()));
    }
    let mut header: Vec<String> = vec!["n".into()];
    header.extend(args.q.iter().map(|q| q.to_string()));
    if args.exact {
        header.extend(args.q.iter().map(|q| format!("{q}_exact")));
    }
    let mut table = Table::new(header);
    table.comment(format!(
        "radproj moments K={} q={} exact={} mode={}",
        join(&args.k),
        join(&args.q),
        args.exact,
        if args.exact { "exact" } else { "auto" }
    ));
    for &k in &args.k {
        let mut cells = vec![k.to_string()];
        let mut exact_cells = Vec::new();
        for &q in &args.q {
            let use_exact = args.exact || (u64::from(k) <= EXACT_K_LIMIT && q <= EXACT_Q_LIMIT);
            if use_exact {
                let value = chaos_extreme_moment(k, q);
                cells.push(format_f64(rational_to_f64(&value)));
                if args.exact {
                    exact_cells.push(value.to_string());
                }
            } else {
                cells.push(format_f64(chaos_extreme_moment_f64(u64::from(k), q)));
            }
        }
        cells.extend(exact_cells);
        table.push_row(cells);
    }
    Ok(table)
}

/// `tail`: thresholds against the sharp bound per sparsity and the
/// closed-form reference bounds.
pub fn cmd_tail(args: &TailArgs) -> Result<Table, CliError> {
    if args.m == 0 {
        return Err(CliError::Usage("--m must be positive".into()));
    }
    if args.qmax < 2 {
        return Err(CliError::Usage("--qmax must be at least 2".into()));
    }
    let grid = resolve_eps_grid(args.eps_grid.as_deref(), &args.eps)?;
    let tables: Vec<SharpBoundTable> = args
        .k
        .iter()
        .map(|&k| SharpBoundTable::new(args.m, k, args.qmax))
        .collect();

    let mut header: Vec<String> = vec!["eps".into()];
    header.extend(args.k.iter().map(|k| format!("sharp_{k}")));
    header.extend(["achlioptas".into(), "subgamma".into(), "nogo_lower".into()]);
    let mut table = Table::new(header);
    table.comment(format!(
        "radproj tail m={} K={} qmax={} eps={}",
        args.m,
        join(&args.k),
        args.qmax,
        join(&grid)
    ));
    for t in &tables {
        table.comment(format!(
            "sharp_{}: qmax={} arithmetic={:?}",
            t.k(),
            t.qmax(),
            t.exactness()
        ));
    }
    for &eps in &grid {
        let mut cells = vec![format_f64(eps)];
        for t in &tables {
            cells.push(format_f64(t.bound(eps)));
        }
        cells.push(format_f64(radproj_core::bounds::achlioptas_bound(args.m, eps)));
        cells.push(format_f64(radproj_core::bounds::subgamma_bound(args.m, eps)));
        cells.push(format_f64(radproj_core::bounds::nogo_lower_curve(args.m, eps)));
        table.push_row(cells);
    }
    Ok(table)
}

fn scheme_settings(args: &SimulateArgs) -> Result<Vec<(Scheme, f64)>, CliError> {
    match args.scheme {
        SchemeArg::Dense => {
            if args.density.iter().any(|&d| d != 1.0) {
                return Err(CliError::Usage(
                    "the dense scheme has density 1; drop --density or use --scheme sparse".into(),
                ));
            }
            Ok(vec![(Scheme::DenseRademacher, 1.0)])
        }
        SchemeArg::Sparse => {
            if args.density.is_empty() {
                return Err(CliError::Usage(
                    "--scheme sparse needs at least one --density value".into(),
                ));
            }
            Ok(args
                .density
                .iter()
                .map(|&d| (Scheme::SparseRademacher, d))
                .collect())
        }
    }
}

fn setting_label(scheme: Scheme, density: f64) -> String {
    match scheme {
        Scheme::DenseRademacher => "dense".into(),
        Scheme::SparseRademacher => format!("sparse_p{density}"),
    }
}

fn load_dataset(path: &Path, has_header: bool) -> Result<SparseDataset, CliError> {
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default();
    match ext.as_str() {
        "mtx" | "mm" => Ok(read_matrix_market(path)?),
        "csv" => {
            let columns = read_csv_vectors(path, has_header)?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into());
            let mut dataset = SparseDataset::from_dense_columns(&name, &columns)?;
            dataset.source = path.to_path_buf();
            Ok(dataset)
        }
        other => Err(CliError::Usage(format!(
            "cannot infer dataset format from extension '{other}'; use .mtx or .csv"
        ))),
    }
}

/// `simulate`: synthetic mode emits the empirical CCDF of the flat K-sparse
/// unit vector; dataset mode emits per-column summary statistics, or pooled
/// CCDF columns when a threshold grid is given.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<Table, CliError> {
    if args.m == 0 {
        return Err(CliError::Usage("--m must be positive".into()));
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let settings = scheme_settings(args)?;
    match &args.input {
        None => simulate_synthetic(args, &settings),
        Some(path) => simulate_dataset(args, &settings, path),
    }
}

fn simulate_synthetic(
    args: &SimulateArgs,
    settings: &[(Scheme, f64)],
) -> Result<Table, CliError> {
    let n = args
        .n
        .ok_or_else(|| CliError::Usage("synthetic mode needs --n".into()))?;
    let k = args
        .k
        .ok_or_else(|| CliError::Usage("synthetic mode needs --K".into()))?;
    let grid = resolve_eps_grid(args.eps_grid.as_deref(), &args.eps)?;
    let x = flat_unit_vector(n, k)?;

    let mut header: Vec<String> = vec!["eps".into()];
    header.extend(settings.iter().map(|&(s, d)| format!("ccdf_{}", setting_label(s, d))));
    let mut table = Table::new(header);
    table.comment(format!(
        "radproj simulate n={n} K={k} m={} trials={} scheme={} density={} seed={}",
        args.m,
        args.trials,
        settings[0].0.label(),
        join(&settings.iter().map(|&(_, d)| d).collect::<Vec<_>>()),
        args.seed
    ));

    let mut samples = Vec::new();
    for (si, &(scheme, density)) in settings.iter().enumerate() {
        let seed = if settings.len() == 1 {
            args.seed
        } else {
            derive_seed(args.seed, &[si as u64])
        };
        samples.push(simulate_distortions(&x, args.m, scheme, density, args.trials, seed)?);
    }
    for &eps in &grid {
        let mut cells = vec![format_f64(eps)];
        for sample in &samples {
            cells.push(format_f64(sample.ccdf_at(eps)));
        }
        table.push_row(cells);
    }
    Ok(table)
}

fn simulate_dataset(
    args: &SimulateArgs,
    settings: &[(Scheme, f64)],
    path: &Path,
) -> Result<Table, CliError> {
    let dataset = load_dataset(path, args.has_header)?;
    let columns = match args.column {
        None => dataset.columns.clone(),
        Some(c) => {
            if c >= dataset.cols {
                return Err(CliError::Usage(format!(
                    "--column {c} out of range: dataset has {} columns",
                    dataset.cols
                )));
            }
            vec![dataset.columns[c].clone()]
        }
    };
    let config_echo = format!(
        "radproj simulate input={} column={} m={} trials={} scheme={} density={} seed={}",
        dataset.name,
        args.column.map_or("all".into(), |c| c.to_string()),
        args.m,
        args.trials,
        settings[0].0.label(),
        join(&settings.iter().map(|&(_, d)| d).collect::<Vec<_>>()),
        args.seed
    );

    // With a threshold grid: pooled CCDF per scheme over the selected columns.
    if args.eps_grid.is_some() || !args.eps.is_empty() {
        let grid = resolve_eps_grid(args.eps_grid.as_deref(), &args.eps)?;
        let mut header: Vec<String> = vec!["eps".into()];
        header.extend(settings.iter().map(|&(s, d)| format!("ccdf_{}", setting_label(s, d))));
        let mut table = Table::new(header);
        table.comment(config_echo);
        table.comment(format!("checksum={}", dataset.checksum));

        let mut pooled: Vec<Vec<f64>> = vec![Vec::new(); settings.len()];
        for (ci, column) in columns.iter().enumerate() {
            if column.k() == 0 {
                continue;
            }
            let x = {
                let mut dense = vec![0.0; dataset.rows];
                for (&i, &v) in column.indices.iter().zip(&column.values) {
                    dense[i] = v;
                }
                dense
            };
            for (si, &(scheme, density)) in settings.iter().enumerate() {
                let seed = derive_seed(args.seed, &[ci as u64, si as u64]);
                let sample =
                    simulate_distortions(&x, args.m, scheme, density, args.trials, seed)?;
                pooled[si].extend(sample.values);
            }
        }
        if pooled.iter().all(|v| v.is_empty()) {
            return Err(CoreError::AllColumnsZero.into());
        }
        for &eps in &grid {
            let mut cells = vec![format_f64(eps)];
            for values in &pooled {
                let count = values.iter().filter(|v| v.abs() > eps).count();
                cells.push(format_f64(count as f64 / values.len() as f64));
            }
            table.push_row(cells);
        }
        return Ok(table);
    }

    // Without a grid: per-(column, scheme) summary statistics.
    let summary = dataset_distortion_sweep(
        dataset.rows,
        &columns,
        args.m,
        settings,
        args.trials,
        args.seed,
    )?;
    let mut table = Table::new(
        [
            "column", "k", "norm", "scheme", "density", "trials", "mean_abs", "rms", "p50",
            "p90", "p99",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
    );
    table.comment(config_echo);
    table.comment(format!("checksum={}", dataset.checksum));
    table.comment(format!(
        "skipped_zero_columns={}",
        summary.skipped_zero_columns
    ));
    for row in &summary.rows {
        table.push_row(vec![
            row.column.to_string(),
            row.k.to_string(),
            format_f64(row.norm),
            row.scheme.label().into(),
            format_f64(row.density),
            row.trials.to_string(),
            format_f64(row.mean_abs),
            format_f64(row.rms),
            format_f64(row.p50),
            format_f64(row.p90),
            format_f64(row.p99),
        ]);
    }
    Ok(table)
}

/// `dataset-stats`: per-column sparsity, norm and flatness ratio.
pub fn cmd_dataset_stats(args: &DatasetStatsArgs) -> Result<Table, CliError> {
    let dataset = load_dataset(&args.input, args.has_header)?;
    let stats = sparsity_stats(&dataset);
    let mut table = Table::new(
        ["column", "k", "norm", "flatness"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    table.comment(format!(
        "radproj dataset-stats input={} rows={} cols={} nnz={} dropped_zeros={}",
        dataset.name,
        dataset.rows,
        dataset.cols,
        dataset.nnz(),
        dataset.dropped_zeros
    ));
    table.comment(format!("checksum={}", dataset.checksum));
    for s in &stats {
        table.push_row(vec![
            s.column.to_string(),
            s.k.to_string(),
            format_f64(s.norm),
            format_f64(s.flatness),
        ]);
    }
    Ok(table)
}

/// `verify`: runs the exact suites, printing one line per suite plus
/// witnesses for any failures.
pub fn cmd_verify(args: &VerifyArgs, mut out: impl Write) -> Result<(), CliError> {
    let defaults = VerifyConfig::default();
    let cfg = VerifyConfig {
        seed: args.seed,
        formula_max_k: args.max_k,
        formula_max_q: args.max_q,
        schur_pairs: args.pairs,
        schur_max_k: (args.max_k as usize).min(defaults.schur_max_k),
        schur_max_q: args.max_q.min(defaults.schur_max_q),
        domination_max_k: (args.max_k as usize).min(defaults.domination_max_k),
        domination_max_q: args.max_q.min(defaults.domination_max_q),
        khintchine_max_k: (args.max_k as usize).min(defaults.khintchine_max_k),
        khintchine_max_q: args.max_q.min(defaults.khintchine_max_q),
        oracle: OracleConfig {
            enumeration_cap: args.enum_cap,
            atom_cap: args.atom_cap,
        },
        ..defaults
    };
    if cfg.formula_max_k as usize > cfg.oracle.enumeration_cap {
        return Err(CliError::Usage(format!(
            "--max-k {} exceeds --enum-cap {}",
            cfg.formula_max_k, cfg.oracle.enumeration_cap
        )));
    }
    let write = |out: &mut dyn Write, line: &str| -> Result<(), CliError> {
        writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))
    };
    write(
        &mut out,
        &format!(
            "verify: max-k={} max-q={} pairs={} seed={}",
            args.max_k, args.max_q, args.pairs, args.seed
        ),
    )?;
    let reports = run_all(&cfg);
    let mut all_passed = true;
    for report in &reports {
        write(&mut out, &report.summary_line())?;
        for failure in &report.failures {
            write(&mut out, &format!("  FAIL {failure}"))?;
        }
        all_passed &= report.passed();
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    write(
        &mut out,
        &format!(
            "verify: {} ({passed}/{} suites)",
            if all_passed { "PASS" } else { "FAIL" },
            reports.len()
        ),
    )?;
    if all_passed {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

/// Dispatches a parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Moments(args) => emit(&cmd_moments(args)?, args.output.as_deref()),
        Command::Tail(args) => emit(&cmd_tail(args)?, args.output.as_deref()),
        Command::Simulate(args) => emit(&cmd_simulate(args)?, args.output.as_deref()),
        Command::DatasetStats(args) => emit(&cmd_dataset_stats(args)?, args.output.as_deref()),
        Command::Verify(args) => {
            let stdout = std::io::stdout();
            cmd_verify(args, stdout.lock())
        }
    }
}
