use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use weakdgd::harness::{
    calibrate, load_config, reproduce_figure, run_sweep, simulate_point, write_sweep_csv,
    OutputFormat,
};
use weakdgd::{Error, Result};

/// Simulate slow-light propagation and the weak-measurement readout of the
/// differential group delay.
#[derive(Parser, Debug)]
#[command(name = "simulate", version)]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Reproduce the dataset of a figure (1, 3, 4, 5, 6 or 7).
    #[arg(long)]
    figure: Option<u32>,
    /// Output directory (overrides `output.directory`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fit the prefactor calibration scalar before running.
    #[arg(long)]
    calibrate: bool,
}

fn run(args: Args) -> Result<()> {
    let mut cfg = load_config(&args.config)?;
    if let Some(dir) = args.out {
        cfg.output.directory = dir;
    }
    if args.figure.is_some() {
        cfg.output.figure = args.figure;
    }
    if args.calibrate {
        let scale = calibrate(&cfg.probe, cfg.measurement.calibration_route)?;
        println!("calibration = {scale}");
        cfg.probe.calibration = scale;
    }
    cfg.validate()?;
    let dir = cfg.output.directory.clone();
    if let Some(id) = cfg.output.figure {
        for ds in reproduce_figure(id, &cfg)? {
            for p in ds.write(&dir)? {
                println!("wrote {}", p.display());
            }
        }
        return Ok(());
    }
    std::fs::create_dir_all(&dir)?;
    if cfg.sweep.is_some() {
        let table = run_sweep(&cfg)?;
        let path = dir.join("sweep.csv");
        let mut buf = Vec::new();
        write_sweep_csv(&cfg, &table, &mut buf)?;
        std::fs::write(&path, buf)?;
        println!("wrote {}", path.display());
        let failed = table.rows.iter().filter(|r| r.result.is_err()).count();
        if failed > 0 {
            println!(
                "{failed} of {} sweep points failed; see the error column",
                table.rows.len()
            );
        }
        return Ok(());
    }
    let report = simulate_point(&cfg)?;
    if cfg.output.formats.contains(&OutputFormat::Report) {
        let path = dir.join("report.txt");
        std::fs::write(&path, report.to_kv())?;
        println!("wrote {}", path.display());
    }
    if cfg.output.formats.contains(&OutputFormat::Csv) {
        let table = run_sweep(&cfg)?;
        let path = dir.join("point.csv");
        let mut buf = Vec::new();
        write_sweep_csv(&cfg, &table, &mut buf)?;
        std::fs::write(&path, buf)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn report_error(e: &Error) {
    let message = e.to_string().replace('\n', " ");
    eprintln!("error: kind={} message={}", e.kind(), message);
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(&e);
            ExitCode::from(2)
        }
    }
}
