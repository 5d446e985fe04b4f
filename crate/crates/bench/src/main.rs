use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hodlr_bench::record::write_records;
use hodlr_bench::runner::run_cell;
use hodlr_bench::{BenchError, Config, ConfigError, Format};

/// Assemble, factor and solve HODLR benchmark problems and write one record
/// per configuration cell.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = ["csv", "jsonl"])]
    format: String,
    /// Overrides the `seed` key.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides one configuration key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Writes each assembled matrix as `cell_NNN.hodlrbin` into this directory.
    #[arg(long)]
    dump: Option<PathBuf>,
}

fn load_config(args: &Args) -> Result<Config, BenchError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError { line: None, key: None, message: format!("{}: {e}", path.display()) })?;
            Config::parse(&text)?
        }
        None => Config::default(),
    };
    for o in &args.overrides {
        cfg.apply_override(o)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(args: &Args) -> Result<(), BenchError> {
    let cfg = load_config(args)?;
    let format = Format::parse(&args.format).expect("validated by clap");
    if let Some(dir) = &args.dump {
        std::fs::create_dir_all(dir)?;
    }
    let mut records = Vec::new();
    for (i, cell) in cfg.cells().iter().enumerate() {
        let (rec, matrix) = run_cell(cell)?;
        eprintln!(
            "{} N={} tol={:e} {}: t_f={:.3e}s t_s={:.3e}s relres={}",
            rec.problem,
            rec.n,
            rec.tol,
            rec.precision,
            rec.t_f_seconds,
            rec.t_s_seconds,
            rec.relres.map_or("-".into(), |r| format!("{r:.2e}"))
        );
        if let Some(dir) = &args.dump {
            std::fs::write(dir.join(format!("cell_{i:03}.hodlrbin")), matrix.dump())?;
        }
        records.push(rec);
    }
    match &args.out {
        Some(path) => write_records(&records, format, BufWriter::new(File::create(path)?)),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_records(&records, format, &mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
