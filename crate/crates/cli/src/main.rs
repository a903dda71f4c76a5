use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use glstar_cli::{
    cmd_construct, cmd_parallel, cmd_verify, demo_config, hfd_csv, lines_csv, mesh_obj, parse_config, Outcome,
    StarConfig, VerifyOptions, EXIT_BUILD_FAILED, EXIT_PASS,
};

/// Rotational gl stars and their regular parallelisms.
#[derive(Parser)]
#[command(name = "glstar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the star of a configuration without running checks.
    Construct(Common),
    /// Run the verification suite and print one line per check.
    Verify(Common),
    /// Write sampled star lines, profile meshes or H-lines to files.
    Export {
        #[command(flatten)]
        common: Common,
        /// Lines CSV output path.
        #[arg(long)]
        lines: Option<PathBuf>,
        /// Wavefront OBJ mesh output path.
        #[arg(long)]
        mesh: Option<PathBuf>,
        /// H-line CSV output path.
        #[arg(long)]
        hfd: Option<PathBuf>,
    },
    /// Print the parallel of a line through a point.
    Parallel {
        #[command(flatten)]
        common: Common,
        /// The line, as two affine points `x,y,z;x,y,z`.
        #[arg(long, allow_hyphen_values = true)]
        line: String,
        /// The point, as `x,y,z`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Verify the built-in example.
    Demo(Common),
}

#[derive(Args)]
struct Common {
    /// JSON star configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sample count for every check (or rows for export).
    #[arg(long)]
    samples: Option<usize>,
    /// Residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated check names.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            samples: self.samples,
            tol: self.tol,
            seed: self.seed,
            checks: self.checks.clone(),
        }
    }

    fn load(&self) -> Result<StarConfig, Outcome> {
        let path = self.config.as_ref().ok_or_else(|| failure("--config is required"))?;
        let text = std::fs::read_to_string(path).map_err(|e| failure(format!("{}: {e}", path.display())))?;
        parse_config(&text).map_err(failure)
    }
}

fn failure(message: impl std::fmt::Display) -> Outcome {
    Outcome {
        code: EXIT_BUILD_FAILED,
        text: format!("ERROR: {message}\n"),
    }
}

fn write_file(path: &Path, contents: glstar::Result<String>) -> Result<(), Outcome> {
    let contents = contents.map_err(failure)?;
    std::fs::write(path, contents).map_err(|e| failure(format!("io error writing {}: {e}", path.display())))
}

fn export(common: &Common, lines: Option<&Path>, mesh: Option<&Path>, hfd: Option<&Path>) -> Outcome {
    let run = || -> Result<Outcome, Outcome> {
        let star = common.load()?.build().map_err(failure)?;
        if lines.is_none() && mesh.is_none() && hfd.is_none() {
            return Err(failure("export needs at least one of --lines, --mesh, --hfd"));
        }
        let n = common.samples.unwrap_or(512);
        let mut text = String::new();
        if let Some(p) = lines {
            write_file(p, lines_csv(&star, n))?;
            text.push_str(&format!("wrote {}\n", p.display()));
        }
        if let Some(p) = mesh {
            write_file(p, mesh_obj(&star, common.samples.unwrap_or(16)))?;
            text.push_str(&format!("wrote {}\n", p.display()));
        }
        if let Some(p) = hfd {
            write_file(p, hfd_csv(&star, n))?;
            text.push_str(&format!("wrote {}\n", p.display()));
        }
        Ok(Outcome { code: EXIT_PASS, text })
    };
    run().unwrap_or_else(|e| e)
}

fn configure_threads() {
    if let Some(n) = std::env::var("GLSTAR_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // a global pool can only be installed once; ignore a second attempt
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let (outcome, out) = match &cli.command {
        Command::Construct(c) => (c.load().map_or_else(|e| e, |cfg| cmd_construct(&cfg)), &c.out),
        Command::Verify(c) => (
            c.load().map_or_else(|e| e, |cfg| cmd_verify(&cfg, &c.options())),
            &c.out,
        ),
        Command::Export {
            common,
            lines,
            mesh,
            hfd,
        } => (
            export(common, lines.as_deref(), mesh.as_deref(), hfd.as_deref()),
            &common.out,
        ),
        Command::Parallel { common, line, point } => (
            common.load().map_or_else(|e| e, |cfg| cmd_parallel(&cfg, line, point)),
            &common.out,
        ),
        Command::Demo(c) => (cmd_verify(&demo_config(), &c.options()), &c.out),
    };
    match out {
        Some(path) if outcome.code != EXIT_BUILD_FAILED => {
            if let Err(e) = std::fs::write(path, &outcome.text) {
                eprintln!("ERROR: io error writing {}: {e}", path.display());
                return ExitCode::from(EXIT_BUILD_FAILED);
            }
        }
        _ if outcome.code == EXIT_BUILD_FAILED => eprint!("{}", outcome.text),
        _ => print!("{}", outcome.text),
    }
    ExitCode::from(outcome.code)
}
