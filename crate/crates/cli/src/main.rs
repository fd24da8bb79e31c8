use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qprot_cli::{run, Command, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "qprot", version, about = "Spectral statistics and resonance analysis of qubit circuits")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Certified spectrum: spectrum.csv, meta.json
    Spectrum(Common),
    /// Spacing and ratio statistics: stats.json, hist_*.csv
    Stats(Common),
    /// Phase portrait of the resonant model: portrait_contours.csv, portrait.json
    Portrait(Common),
    /// WKB tunneling curve: tunneling.csv, tunneling.json
    Tunneling(Common),
    /// Resonant quantum states: states.csv, states.json
    States(Common),
    /// Protection report: protection.json
    Protect(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_ext: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (cmd, args) = match cli.command {
        Sub::Spectrum(a) => (Command::Spectrum, a),
        Sub::Stats(a) => (Command::Stats, a),
        Sub::Portrait(a) => (Command::Portrait, a),
        Sub::Tunneling(a) => (Command::Tunneling, a),
        Sub::States(a) => (Command::States, a),
        Sub::Protect(a) => (Command::Protect, a),
    };
    let overrides = Overrides {
        out: args.out,
        seed: args.seed,
        levels: args.levels,
        beta: args.beta,
        phi_ext: args.phi_ext,
    };
    let result = RunConfig::load(&args.config).and_then(|mut cfg| {
        cfg.apply(&overrides)?;
        run(cmd, &cfg)
    });
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qprot {}: {e}", cmd.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
