use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cssc_spmv::bench::{
    self, audit_report, convert, fetch, load_matrix, measure, run_bench, synthetic, write_json,
    write_scaling_csv, BenchConfig, KeyHolder, RunReport,
};
use cssc_spmv::cost::CostTable;
use cssc_spmv::he::HeParams;

#[derive(Parser)]
#[command(name = "spmv", version, about = "Encrypted sparse matrix-vector multiplication")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convert a Matrix Market file to CSSC (JSON).
    Convert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Run the three-party protocol once and write a report.
    Run(RunArgs),
    /// Run a benchmark sweep from a TOML config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        scaling_csv: Option<PathBuf>,
    },
    /// Re-run the leakage audit on a run report.
    Audit {
        #[arg(long)]
        report: PathBuf,
    },
    /// Download a SuiteSparse matrix (group/name) into $SPMV_CACHE_DIR.
    Fetch { id: String },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, conflicts_with = "random_seed", required_unless_present = "random_seed")]
    vector: Option<PathBuf>,
    #[arg(long)]
    random_seed: Option<u64>,
    #[arg(long, default_value_t = 8192)]
    slots: usize,
    #[arg(long, default_value_t = 65537)]
    t: u64,
    /// Defaults to the slot count.
    #[arg(long)]
    chunk_size: Option<usize>,
    #[arg(long, value_enum, default_value = "a", ignore_case = true)]
    key_holder: Holder,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Holder {
    A,
    B,
}

fn run(args: RunArgs) -> cssc_spmv::Result<bool> {
    let matrix = load_matrix(&args.matrix, args.scale)?;
    let vector = match (&args.vector, args.random_seed) {
        (Some(p), _) => bench::mtx::read_vector(p)?,
        (None, Some(seed)) => synthetic::random_vector(matrix.cols(), 100, seed),
        (None, None) => unreachable!("clap requires one of them"),
    };
    let he = HeParams::new(args.slots, args.t)?;
    let chunk = args.chunk_size.unwrap_or(args.slots);
    let holder = match args.key_holder {
        Holder::A => KeyHolder::A,
        Holder::B => KeyHolder::B,
    };
    let name = args
        .matrix
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let m = measure(&name, &matrix, &vector, &he, chunk, holder.into(), true, &CostTable::default())?;
    let report = RunReport::from_measured(m, he, chunk);
    let r = &report.record;
    println!(
        "{}: {}x{} nnz={} n_ct={} cloud={:.1}ms total={:.1}ms noise={:?} verified={} audit={}",
        r.name,
        r.rows,
        r.cols,
        r.nnz,
        r.n_ct,
        r.cloud_time_ms,
        r.estimated_time_ms,
        r.noise_remaining_bits,
        report.verified,
        if report.audit.passed { "PASS" } else { "FAIL" }
    );
    if let Some(path) = &args.report {
        write_json(&report, path)?;
    }
    Ok(report.verified && report.audit.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Convert {
            input,
            output,
            scale,
        } => convert(&input, &output, scale).map(|c| {
            println!(
                "{}x{} nnz={} aligned_columns={}",
                c.rows,
                c.cols,
                c.nnz(),
                c.aligned_columns()
            );
            true
        }),
        Cmd::Run(args) => run(args),
        Cmd::Bench {
            config,
            out,
            scaling_csv,
        } => BenchConfig::load(&config).and_then(|cfg| {
            let report = run_bench(&cfg);
            write_json(&report, &out)?;
            if let Some(csv) = scaling_csv {
                write_scaling_csv(&report, csv)?;
            }
            println!(
                "{} records, {} failures, slope {:?}",
                report.records.len(),
                report.failures.len(),
                report.scaling_slope()
            );
            for f in &report.failures {
                eprintln!("failed {}: {}", f.name, f.error);
            }
            Ok(true)
        }),
        Cmd::Audit { report } => audit_report(&report).map(|a| {
            for v in &a.violations {
                println!("{v}");
            }
            println!(
                "{} ({} messages checked)",
                if a.passed { "PASS" } else { "FAIL" },
                a.messages_checked
            );
            a.passed
        }),
        Cmd::Fetch { id } => match id.split_once('/') {
            Some((group, name)) => fetch::fetch(&fetch::cache_dir(), group, name).map(|p| {
                println!("{}", p.display());
                true
            }),
            None => Err(cssc_spmv::Error::Config(format!("{id:?} must be group/name"))),
        },
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
